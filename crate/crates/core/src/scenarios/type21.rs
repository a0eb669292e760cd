//! The X-linked recessive lethal model of type (2,1) and its limits.
//!
//! Genotypes `e1 = XX`, `e2 = XXʰ` (carrier) and `ẽ = XY`; `XʰY` males die.
//!
//! ```text
//! e1ẽ = γ1e1 + γ2e2 + γẽ,   e2ẽ = δ1e1 + δ2e2 + δẽ
//! ```

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Element};
use crate::dynamics::apply_w;
use crate::error::{GonosomalError, Result};
use crate::scalar::Scalar;

/// Scan horizon for zeros of `x2`.
pub const ESET_SCAN: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct Type21Params<T> {
    pub gamma1: T,
    pub gamma2: T,
    pub delta1: T,
    pub delta2: T,
}

impl<T: Scalar> Type21Params<T> {
    pub fn new(gamma1: T, gamma2: T, delta1: T, delta2: T) -> Self {
        Self {
            gamma1,
            gamma2,
            delta1,
            delta2,
        }
    }

    /// `γ = 1 − γ1 − γ2`.
    pub fn gamma(&self) -> T {
        T::one() - self.gamma1 - self.gamma2
    }

    /// `δ = 1 − δ1 − δ2`.
    pub fn delta(&self) -> T {
        T::one() - self.delta1 - self.delta2
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("gamma = 1 - gamma1 - gamma2", self.gamma()),
            ("delta = 1 - delta1 - delta2", self.delta()),
        ];
        for (name, v) in named {
            if !(v >= -T::EQ_TOL && v <= T::one() + T::EQ_TOL) {
                return Err(GonosomalError::InvalidParameter(format!(
                    "{name} = {v} is outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> Result<AlgebraSpec<T>> {
        self.validate()?;
        let c = |v: T| v.max(T::zero());
        AlgebraSpec::from_rows(
            2,
            1,
            &[
                vec![vec![self.gamma1, self.gamma2, c(self.gamma())]],
                vec![vec![self.delta1, self.delta2, c(self.delta())]],
            ],
        )
    }
}

/// The type-(2,1) algebra with rows `(γ1, γ2 | γ)` and `(δ1, δ2 | δ)`.
pub fn type21_algebra<T: Scalar>(g1: T, g2: T, d1: T, d2: T) -> Result<AlgebraSpec<T>> {
    Type21Params::new(g1, g2, d1, d2).algebra()
}

/// Shape of `E = { t : x2⁽ᵗ⁾ = 0 }` along the `W` orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EsetClassification {
    /// `γ2 = 0` and `x2` vanishes at every `t ≥ 1`.
    InfiniteAllPositiveSteps,
    /// `E = 2ℕ`.
    InfiniteEven,
    /// `E = ℕ ∖ 2ℕ`.
    InfiniteOdd,
    /// `t0 = max E + 1`, or `0` when `E` is empty.
    Finite { t0: usize },
}

impl EsetClassification {
    pub fn is_infinite(&self) -> bool {
        !matches!(self, EsetClassification::Finite { .. })
    }
}

/// `W` orbit rescaled to unit L1 norm at each step. Zero patterns are those
/// of the true orbit, without underflow.
pub(crate) fn scaled_orbit<T: Scalar>(
    spec: &AlgebraSpec<T>,
    z0: &Element<T>,
    steps: usize,
) -> Vec<Element<T>> {
    let mut out = vec![z0.clone()];
    for _ in 0..steps {
        let w = apply_w(spec, out.last().expect("non-empty"));
        let norm = w.l1_norm();
        out.push(if norm > T::zero() {
            w.scale(T::one() / norm)
        } else {
            w
        });
    }
    out
}

fn check_start<T: Scalar>(z0: &Element<T>) -> Result<()> {
    if z0.n() != 2 || z0.nu() != 1 {
        return Err(GonosomalError::ShapeMismatch(format!(
            "expected a type (2,1) state, got ({}, {})",
            z0.n(),
            z0.nu()
        )));
    }
    if !z0.is_nonnegative() || !z0.is_finite() {
        return Err(GonosomalError::InvalidParameter(
            "start must be non-negative".into(),
        ));
    }
    Ok(())
}

/// Decides whether `E` is infinite from the iterates up to index 3, then scans
/// `ESET_SCAN` steps for `t0` in the finite case.
pub fn classify_eset<T: Scalar>(z0: &Element<T>, p: &Type21Params<T>) -> Result<EsetClassification> {
    check_start(z0)?;
    let spec = p.algebra()?;
    let orbit = scaled_orbit(&spec, z0, ESET_SCAN);
    if let Some(t) = orbit.iter().position(|z| z.y[0] == T::zero()) {
        return Err(GonosomalError::MaleExtinction { t });
    }
    let x1 = |t: usize| orbit[t].x[0] == T::zero();
    let x2 = |t: usize| orbit[t].x[1] == T::zero();
    if p.gamma2 == T::zero() {
        if x2(1) {
            return Ok(EsetClassification::InfiniteAllPositiveSteps);
        }
    } else if x1(0) && x2(1) && x2(3) {
        return Ok(EsetClassification::InfiniteOdd);
    } else if x1(1) && x2(0) && x2(2) {
        return Ok(EsetClassification::InfiniteEven);
    }
    match (0..=ESET_SCAN).rev().find(|&t| x2(t)) {
        None => Ok(EsetClassification::Finite { t0: 0 }),
        Some(t) if t <= 3 => Ok(EsetClassification::Finite { t0: t + 1 }),
        Some(t) => Err(GonosomalError::InconsistentZero { t }),
    }
}

/// Long-run behaviour of the unnormalized orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WLimit {
    Zero,
    /// Neither vanishing nor unbounded (only on a threshold boundary).
    Bounded,
    Unbounded,
}

/// Predicted limits for a type-(2,1) start.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Type21Prediction<T> {
    pub classification: EsetClassification,
    /// Roots `λ1 ≤ λ2` of `λ² − (γ1+δ2)λ + γ1δ2 − γ2δ1`.
    pub lambda1: T,
    pub lambda2: T,
    /// Index (1 or 2) of the eigenvalue used in `u`; only for `Δ > 0`.
    pub selected: Option<usize>,
    pub u_value: Option<T>,
    pub big_u_value: Option<T>,
    /// Critical value of `product` separating the three `W` behaviours.
    pub threshold: Option<T>,
    pub product: Option<T>,
    pub boundary: bool,
    pub w_limit: WLimit,
    /// Two-state `W` orbit `[odd, even]` on the boundary of the infinite
    /// alternating cases, or the fixed state for `γ2 = 0`.
    pub w_boundary_states: Option<Vec<Element<T>>>,
    pub v_limit: Option<Element<T>>,
    /// `[V^{2t+1}, V^{2t}]` for the alternating cases.
    pub v_cycle: Option<[Element<T>; 2]>,
}

/// Eigenvalues `λ1 ≤ λ2` of `M = [[γ1, δ1], [γ2, δ2]]`.
pub fn type21_lambdas<T: Scalar>(p: &Type21Params<T>) -> (T, T) {
    let s = p.gamma1 + p.delta2;
    let disc = (p.gamma1 - p.delta2).powi(2) + T::lit(4.0) * p.gamma2 * p.delta1;
    let r = disc.max(T::zero()).sqrt();
    let two = T::lit(2.0);
    ((s - r) / two, (s + r) / two)
}

fn boundary_of<T: Scalar>(product: T, threshold: T) -> bool {
    (product - threshold).abs() <= T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) * threshold
}

fn trichotomy<T: Scalar>(product: T, threshold: T) -> (WLimit, bool) {
    if boundary_of(product, threshold) {
        (WLimit::Bounded, true)
    } else if product < threshold {
        (WLimit::Zero, false)
    } else {
        (WLimit::Unbounded, false)
    }
}

/// Predicts the limits of `W` and `V` from `z0`.
///
/// `cls` must match [`classify_eset`]; it is recomputed and a mismatch is an
/// error.
pub fn predict_limit_type21<T: Scalar>(
    z0: &Element<T>,
    p: &Type21Params<T>,
    cls: EsetClassification,
) -> Result<Type21Prediction<T>> {
    let actual = classify_eset(z0, p)?;
    if actual != cls {
        return Err(GonosomalError::InvalidParameter(format!(
            "classification {cls:?} does not match the start ({actual:?})"
        )));
    }
    let spec = p.algebra()?;
    let (g1, g2, d1, d2) = (p.gamma1, p.gamma2, p.delta1, p.delta2);
    let (gam, del) = (p.gamma().max(T::zero()), p.delta().max(T::zero()));
    let (lambda1, lambda2) = type21_lambdas(p);
    let one = T::one();
    let mut pred = Type21Prediction {
        classification: cls,
        lambda1,
        lambda2,
        selected: None,
        u_value: None,
        big_u_value: None,
        threshold: None,
        product: None,
        boundary: false,
        w_limit: WLimit::Zero,
        w_boundary_states: None,
        v_limit: None,
        v_cycle: None,
    };
    let st = |a: T, b: T, c: T| Element::new(vec![a, b], vec![c]);

    match cls {
        EsetClassification::InfiniteAllPositiveSteps => {
            let z1 = apply_w(&spec, z0);
            let threshold = one / (g1 * (one - g1));
            let product = (z1.x[0] * z1.y[0]).abs();
            let (w, b) = trichotomy(product, threshold);
            pred.threshold = Some(threshold);
            pred.product = Some(product);
            pred.w_limit = w;
            pred.boundary = b;
            if b {
                pred.w_boundary_states = Some(vec![st(one / (one - g1), T::zero(), one / g1)]);
            }
            pred.v_limit = Some(st(g1, T::zero(), one - g1));
        }
        EsetClassification::InfiniteOdd | EsetClassification::InfiniteEven => {
            let odd = cls == EsetClassification::InfiniteOdd;
            let (k, product) = if odd {
                (g2 * d1 * d1 * gam * del * del, (z0.x[1] * z0.y[0]).abs())
            } else {
                (g2 * g2 * d1 * gam * gam * del, (z0.x[0] * z0.y[0]).abs())
            };
            let c = k.cbrt();
            let threshold = one / c;
            let (w, b) = trichotomy(product, threshold);
            pred.threshold = Some(threshold);
            pred.product = Some(product);
            pred.w_limit = w;
            pred.boundary = b;
            let a = st(d1, T::zero(), one - d1);
            let e = st(T::zero(), g2, one - g2);
            if b {
                // states carrying (x1, 0, y) and (0, x2, y)
                let (p1, p2) = if odd {
                    (one / c, d1 * del / (c * c))
                } else {
                    (g2 * gam / (c * c), one / c)
                };
                let s1 = st(d1 * p1, T::zero(), del * p1);
                let s2 = st(T::zero(), g2 * p2, gam * p2);
                pred.w_boundary_states = Some(if odd { vec![s1, s2] } else { vec![s2, s1] });
            }
            pred.v_cycle = Some(if odd { [a, e] } else { [e, a] });
        }
        EsetClassification::Finite { t0 } => {
            let z = scaled_orbit(&spec, z0, t0).pop().expect("non-empty");
            let (x1, x2) = (z.x[0], z.x[1]);
            let tol = T::EQ_TOL;
            pred.w_limit = WLimit::Zero;
            let delta_disc = (g1 - d2).powi(2) + T::lit(4.0) * g2 * d1;
            if delta_disc <= tol {
                let g2z = g2.abs() <= tol;
                let d1z = d1.abs() <= tol;
                pred.v_limit = Some(match (g2z, d1z) {
                    (true, false) => st(g1, T::zero(), gam),
                    (false, true) => st(T::zero(), d2, del),
                    _ => {
                        let s = x1 + x2;
                        st(g1 * x1 / s, d2 * x2 / s, (gam * x1 + del * x2) / s)
                    }
                });
            } else {
                if (lambda1.abs() - lambda2.abs()).abs() < T::lit(1e-12) {
                    return Err(GonosomalError::EqualModulusEigenvalues {
                        modulus: lambda1.abs().as_f64(),
                    });
                }
                let (i, li) = if lambda1.abs() < lambda2.abs() {
                    (1, lambda1)
                } else {
                    (2, lambda2)
                };
                let num = g2 * x1 + (d2 - li) * x2;
                let den = (g1 - li) * x1 + d1 * x2;
                let scale = x1.abs() + x2.abs();
                if den.abs() <= tol * scale {
                    return Err(GonosomalError::DegenerateDenominator);
                }
                let u = num / den;
                let big_u = d1 * u * u + (del + d1 + g1) * u + gam + g1;
                if big_u.abs() <= tol {
                    return Err(GonosomalError::DegenerateDenominator);
                }
                let f = (g1 + d1 * u) / big_u;
                pred.selected = Some(i);
                pred.u_value = Some(u);
                pred.big_u_value = Some(big_u);
                pred.v_limit = Some(st(f, u * f, (gam + del * u) / big_u));
            }
        }
    }
    Ok(pred)
}
