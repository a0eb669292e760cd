//! Multi-start Newton search for fixed points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{jacobian_w, residual, FamilyDescriptor, FixedPointRecord};
use crate::algebra::{AlgebraSpec, Element};
use crate::dynamics::{apply_w, Operator};
use crate::error::Result;
use crate::linalg::{smallest_singular, Matrix};
use crate::scalar::Scalar;

const MAX_ITER: usize = 100;
const STEP_STOP: f64 = 1e-13;
const TIKHONOV: f64 = 1e-10;
const ACCEPT: f64 = 1e-10;
const DEDUP: f64 = 1e-6;
const NULL_SV: f64 = 1e-8;
const FAMILY_OFFSET: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct NumericSolution<T> {
    pub records: Vec<FixedPointRecord<T>>,
    pub starts: usize,
    pub converged: usize,
    /// Non-negative nonzero `W` roots with `ϖ < 4 − 1e-9`. Always zero unless
    /// the solver is wrong.
    pub omega_violations: usize,
}

/// `F(z) = op(z) − z` and its Jacobian, `None` where `V` is undefined.
fn system<T: Scalar>(spec: &AlgebraSpec<T>, op: Operator, z: &[T]) -> Option<(Vec<T>, Matrix<T>)> {
    let n = spec.n();
    let d = z.len();
    let e = Element::from_concat(n, z);
    let w = apply_w(spec, &e);
    let jw = jacobian_w(spec, &e);
    let (val, mut jac) = match op {
        Operator::W => (w.to_concat(), jw),
        Operator::V => {
            let (fx, my) = (e.female_mass(), e.male_mass());
            let g = fx * my;
            if g == T::zero() || !g.is_finite() {
                return None;
            }
            // J_V = (J_W − V ⊗ ∇g) / g with ∇g = (Y,…,Y, X,…,X)
            let v: Vec<T> = w.to_concat().into_iter().map(|a| a / g).collect();
            let jac = Matrix::from_fn(d, d, |r, c| {
                let dg = if c < n { my } else { fx };
                (jw[(r, c)] - v[r] * dg) / g
            });
            (v, jac)
        }
    };
    let f: Vec<T> = val.iter().zip(z).map(|(a, b)| *a - *b).collect();
    for i in 0..d {
        jac[(i, i)] -= T::one();
    }
    Some((f, jac))
}

fn newton<T: Scalar>(spec: &AlgebraSpec<T>, op: Operator, start: Vec<T>) -> Option<Vec<T>> {
    let d = start.len();
    let mut z = start;
    for _ in 0..MAX_ITER {
        let (f, jac) = system(spec, op, &z)?;
        let rhs: Vec<T> = f.iter().map(|a| -*a).collect();
        let step = jac.solve(&rhs).or_else(|| {
            let jt = jac.transpose();
            let mut normal = jt.mul(&jac).ok()?;
            for i in 0..d {
                normal[(i, i)] += T::lit(TIKHONOV);
            }
            normal.solve(&jt.mul_vec(&rhs))
        })?;
        let size = step.iter().fold(T::zero(), |m, s| m.max(s.abs()));
        for (zi, si) in z.iter_mut().zip(&step) {
            *zi += *si;
        }
        if !size.is_finite() || z.iter().any(|v| v.abs() > T::lit(1e8)) {
            return None;
        }
        if size < T::lit(STEP_STOP) * T::one().max(crate::scalar::l1(&z)) {
            break;
        }
    }
    let r = residual(spec, op, &Element::from_concat(spec.n(), &z));
    (r < accept_tol::<T>(&z)).then_some(z)
}

fn accept_tol<T: Scalar>(z: &[T]) -> T {
    let base = T::lit(ACCEPT).max(T::epsilon() * T::lit(1e3));
    base * T::one().max(crate::scalar::l1(z))
}

fn linspace(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    if k < 2 {
        return vec![0.5 * (lo + hi)];
    }
    (0..k)
        .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
        .collect()
}

fn lattice(axis: &[f64], d: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(*a);
                    q
                })
            })
            .collect();
    }
    out
}

/// Points of the simplex with coordinates in `{0, 1/m, …, 1}`.
fn simplex_lattice(m: usize, d: usize) -> Vec<Vec<f64>> {
    fn rec(left: usize, slots: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            acc.push(left);
            out.push(acc.clone());
            acc.pop();
            return;
        }
        for a in 0..=left {
            acc.push(a);
            rec(left - a, slots - 1, acc, out);
            acc.pop();
        }
    }
    let m = m.max(1);
    let mut raw = Vec::new();
    rec(m, d, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|c| c.into_iter().map(|a| a as f64 / m as f64).collect())
        .collect()
}

fn starts<T: Scalar>(spec: &AlgebraSpec<T>, op: Operator, grid: usize, seed: u64) -> Vec<Vec<T>> {
    let d = spec.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extra = 64 + 16 * d;
    let mut pts = match op {
        Operator::W => lattice(&linspace(0.0, 5.0, grid), d),
        Operator::V => simplex_lattice(grid.saturating_sub(1), d),
    };
    for _ in 0..extra {
        let p: Vec<f64> = match op {
            Operator::W => (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect(),
            Operator::V => {
                let e: Vec<f64> = (0..d).map(|_| -rng.gen_range(f64::EPSILON..1.0).ln()).collect();
                let s: f64 = e.iter().sum();
                e.into_iter().map(|a| a / s).collect()
            }
        };
        pts.push(p);
    }
    pts.into_iter()
        .map(|p| p.into_iter().map(T::lit).collect())
        .collect()
}

/// Checks whether the root `z` lies on a line of roots.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN residuals must reject
fn detect_family<T: Scalar>(spec: &AlgebraSpec<T>, op: Operator, z: &[T]) -> Option<FamilyDescriptor> {
    let (_, jac) = system(spec, op, z)?;
    let (sigma, dir) = smallest_singular(&jac);
    if sigma >= NULL_SV {
        return None;
    }
    for s in [-FAMILY_OFFSET, FAMILY_OFFSET] {
        let p: Vec<T> = z.iter().zip(&dir).map(|(a, v)| *a + T::lit(s * v)).collect();
        let r = residual(spec, op, &Element::from_concat(spec.n(), &p));
        if !(r < accept_tol::<T>(&p)) {
            return None;
        }
    }
    Some(FamilyDescriptor {
        base_point: z.iter().map(|a| a.as_f64()).collect(),
        direction: dir,
        parameter_range_tested: (-FAMILY_OFFSET, FAMILY_OFFSET),
    })
}

/// Multi-start Newton on `F(z) = op(z) − z`.
///
/// Starts are the `grid^d` lattice on `[0, 5]^d` for `W` (the simplex lattice
/// with `grid` points per edge for `V`) plus seeded random points. Roots are
/// merged in start order when closer than `1e-6` in L1, or when they lie on an
/// already detected family. The origin is always reported for `W`.
pub fn solve_fixed_points_numeric<T: Scalar>(
    spec: &AlgebraSpec<T>,
    op: Operator,
    grid: usize,
    seed: u64,
) -> Result<NumericSolution<T>> {
    if op == Operator::V {
        spec.require_stochastic()?;
    }
    let n = spec.n();
    let starts = starts(spec, op, grid, seed);
    let roots: Vec<Option<Vec<T>>> = starts.par_iter().map(|s| newton(spec, op, s.clone())).collect();

    let mut records: Vec<FixedPointRecord<T>> = Vec::new();
    if op == Operator::W {
        records.push(FixedPointRecord::new(spec, op, Element::zeros(n, spec.nu())));
    }
    let mut converged = 0;
    for root in roots.into_iter().flatten() {
        converged += 1;
        let as64: Vec<f64> = root.iter().map(|a| a.as_f64()).collect();
        let known = records.iter().any(|r| {
            let p: Vec<f64> = r.point.to_concat().iter().map(|a| a.as_f64()).collect();
            crate::scalar::l1_dist(&p, &as64) < DEDUP
                || r.family.as_ref().is_some_and(|f| f.distance(&as64) < DEDUP)
        });
        if known {
            continue;
        }
        let mut rec = FixedPointRecord::new(spec, op, Element::from_concat(n, &root));
        if let Some(f) = detect_family(spec, op, &root) {
            rec = rec.with_family(f);
        }
        records.push(rec);
    }

    let omega_violations = if op == Operator::W {
        records
            .iter()
            .filter(|r| {
                let p = &r.point;
                let noise = T::lit(1e-12);
                !p.is_zero()
                    && p.x.iter().chain(&p.y).all(|v| *v >= -noise)
                    && p.l1_norm() > noise
                    && p.omega() < T::lit(4.0 - 1e-9)
            })
            .count()
    } else {
        0
    };
    Ok(NumericSolution {
        records,
        starts: starts.len(),
        converged,
        omega_violations,
    })
}
