//! Fixed points of `W` and `V`, their Jacobian spectra and stability.
//!
//! Nonzero fixed points `z*` of `W` correspond to idempotents `½z*` of the
//! algebra, and non-negative ones normalize to fixed points `z*/ϖ(z*)` of
//! `V`. Exponential stability transfers from `W` to `V` but not back.

mod closed_form;
mod newton;

pub use closed_form::{
    closed_form_fixed_points_hemophilia, closed_form_fixed_points_type11, closed_form_fixed_points_type21,
    type21_case, Type21FixedPoints,
};
pub use newton::{solve_fixed_points_numeric, NumericSolution};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Element};
use crate::dynamics::{apply_v_unchecked, apply_w, Operator};
use crate::error::{GonosomalError, Result};
use crate::linalg::{eigenvalues, spectral_radius, Eigenvalue, Matrix};
use crate::scalar::Scalar;

/// Width of the band `|ρ − 1| ≤ MARGINAL_BAND` labelled marginal.
pub const MARGINAL_BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    /// Spectral radius below one.
    ExponentiallyStable,
    /// Some eigenvalue of modulus above one.
    Unstable,
    /// Spectral radius within [`MARGINAL_BAND`] of one.
    Marginal,
}

impl Stability {
    pub fn from_spectrum(ev: &[Eigenvalue]) -> Self {
        let r = spectral_radius(ev);
        if (r - 1.0).abs() <= MARGINAL_BAND {
            Stability::Marginal
        } else if r < 1.0 {
            Stability::ExponentiallyStable
        } else {
            Stability::Unstable
        }
    }
}

/// A one-parameter family `base_point + s·direction` of fixed points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub base_point: Vec<f64>,
    pub direction: Vec<f64>,
    pub parameter_range_tested: (f64, f64),
}

impl FamilyDescriptor {
    /// Distance of `p` from the family line.
    pub fn distance(&self, p: &[f64]) -> f64 {
        let r: Vec<f64> = p.iter().zip(&self.base_point).map(|(a, b)| a - b).collect();
        let s: f64 = r.iter().zip(&self.direction).map(|(a, b)| a * b).sum();
        r.iter()
            .zip(&self.direction)
            .map(|(a, d)| (a - s * d).abs())
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct FixedPointRecord<T> {
    pub operator: Operator,
    pub point: Element<T>,
    /// L1 norm of `op(z) − z`.
    pub residual: T,
    pub family: Option<FamilyDescriptor>,
    pub w_eigenvalues: Vec<Eigenvalue>,
    /// Spectrum of the `V`-Jacobian on the simplex tangent space, at the point
    /// itself (for `V` records) or at its normalization (for `W` records).
    pub v_eigenvalues: Option<Vec<Eigenvalue>>,
    pub stability_w: Stability,
    pub stability_v: Option<Stability>,
}

impl<T: Scalar> FixedPointRecord<T> {
    /// Evaluates residual and spectra at `point`.
    pub fn new(spec: &AlgebraSpec<T>, op: Operator, point: Element<T>) -> Self {
        let residual = residual(spec, op, &point);
        let w_eigenvalues = eigenvalues(&jacobian_w(spec, &point));
        let v_at = match op {
            Operator::V => Some(point.clone()),
            Operator::W if spec.is_stochastic() => normalized(&point).ok(),
            Operator::W => None,
        };
        let v_eigenvalues = v_at
            .and_then(|p| jacobian_v_fd(spec, &p))
            .map(|j| eigenvalues(&j));
        Self {
            operator: op,
            stability_w: Stability::from_spectrum(&w_eigenvalues),
            stability_v: v_eigenvalues.as_deref().map(Stability::from_spectrum),
            point,
            residual,
            family: None,
            w_eigenvalues,
            v_eigenvalues,
        }
    }

    pub fn with_family(mut self, family: FamilyDescriptor) -> Self {
        self.family = Some(family);
        self
    }
}

/// `‖op(z) − z‖₁`, infinite where `V` is undefined.
pub fn residual<T: Scalar>(spec: &AlgebraSpec<T>, op: Operator, z: &Element<T>) -> T {
    match op {
        Operator::W => apply_w(spec, z).l1_dist(z),
        Operator::V => apply_v_unchecked(spec, z).map_or(T::infinity(), |v| v.l1_dist(z)),
    }
}

/// Analytic Jacobian of `W`: entry `(k, i) = Σ_j γ_ijk y_j`,
/// `(k, n+j) = Σ_i γ_ijk x_i`, and likewise for the male rows.
pub fn jacobian_w<T: Scalar>(spec: &AlgebraSpec<T>, z: &Element<T>) -> Matrix<T> {
    let (n, nu) = (spec.n(), spec.nu());
    let mut jac = Matrix::zeros(n + nu, n + nu);
    for i in 0..n {
        for j in 0..nu {
            for k in 0..n + nu {
                let c = if k < n {
                    spec.gamma(i, j, k)
                } else {
                    spec.gamma_tilde(i, j, k - n)
                };
                jac[(k, i)] += c * z.y[j];
                jac[(k, n + j)] += c * z.x[i];
            }
        }
    }
    jac
}

/// Jacobian of `V` in the basis `e_m − e_d` (`m < d`) of the tangent space of
/// the simplex, by central differences. `None` where `V` is undefined nearby.
pub fn jacobian_v_fd<T: Scalar>(spec: &AlgebraSpec<T>, z: &Element<T>) -> Option<Matrix<T>> {
    let d = spec.dim();
    let h = T::lit(1e-6).max(T::epsilon().cbrt() * T::lit(0.1));
    let base = z.to_concat();
    let mut jac = Matrix::zeros(d - 1, d - 1);
    for m in 0..d - 1 {
        let shifted = |s: T| {
            let mut v = base.clone();
            v[m] += s;
            v[d - 1] -= s;
            apply_v_unchecked(spec, &Element::from_concat(spec.n(), &v)).map(|e| e.to_concat())
        };
        let plus = shifted(h)?;
        let minus = shifted(-h)?;
        for k in 0..d - 1 {
            jac[(k, m)] = (plus[k] - minus[k]) / (h + h);
        }
    }
    Some(jac)
}

/// `½ z*`, checked to be idempotent.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn idempotent_correspondence<T: Scalar>(
    fp: &FixedPointRecord<T>,
    spec: &AlgebraSpec<T>,
) -> Result<Element<T>> {
    let half = fp.point.scale(T::lit(0.5));
    let sq = spec.multiply(&half, &half)?;
    let defect = sq.l1_dist(&half);
    let scale = T::one().max(half.l1_norm() * half.l1_norm());
    if !(defect <= T::EQ_TOL * T::lit(100.0) * scale) {
        return Err(GonosomalError::NotIdempotent {
            defect: defect.as_f64(),
        });
    }
    Ok(half)
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn normalized<T: Scalar>(p: &Element<T>) -> Result<Element<T>> {
    let noise = T::SIGN_NOISE * T::lit(1e3) * T::one().max(p.l1_norm());
    if p.x.iter().chain(&p.y).any(|v| *v < -noise) {
        return Err(GonosomalError::NotNormalizable("a coordinate is negative".into()));
    }
    let clamp = |v: &Vec<T>| v.iter().map(|a| a.max(T::zero())).collect::<Vec<T>>();
    let p = Element::new(clamp(&p.x), clamp(&p.y));
    let w = p.omega();
    if !(w > T::zero()) || p.in_o() {
        return Err(GonosomalError::NotNormalizable("ϖ(z*) = 0".into()));
    }
    Ok(p.scale(T::one() / w))
}

/// `z* / ϖ(z*)` for a non-negative fixed point with `ϖ(z*) > 0`.
pub fn normalize_fixed_point<T: Scalar>(fp: &FixedPointRecord<T>) -> Result<Element<T>> {
    normalized(&fp.point)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub stability_w: Stability,
    pub stability_v: Stability,
    pub w_spectral_radius: f64,
    pub v_spectral_radius: f64,
    /// False only if `W` is exponentially stable while `V` is not.
    pub consistent: bool,
    /// `V` exponentially stable while `W` is not.
    pub converse_failure: bool,
}

/// Compares the `W` stability of a fixed point with the `V` stability of its
/// normalization.
pub fn stability_transfer_check<T: Scalar>(
    fp: &FixedPointRecord<T>,
    spec: &AlgebraSpec<T>,
) -> Result<TransferReport> {
    let v_point = normalize_fixed_point(fp)?;
    let w_ev = eigenvalues(&jacobian_w(spec, &fp.point));
    let v_ev = jacobian_v_fd(spec, &v_point)
        .map(|j| eigenvalues(&j))
        .ok_or_else(|| GonosomalError::NotNormalizable("V undefined near the point".into()))?;
    let stability_w = Stability::from_spectrum(&w_ev);
    let stability_v = Stability::from_spectrum(&v_ev);
    let stable = Stability::ExponentiallyStable;
    Ok(TransferReport {
        stability_w,
        stability_v,
        w_spectral_radius: spectral_radius(&w_ev),
        v_spectral_radius: spectral_radius(&v_ev),
        consistent: !(stability_w == stable && stability_v != stable),
        converse_failure: stability_v == stable && stability_w != stable,
    })
}
