//! X-linked recessive disease with non-lethal affected males, type (2,2).
//!
//! `e1 = XX`, `e2 = XXʰ`, `ẽ1 = XY`, `ẽ2 = XʰY`. Affected females `XʰXʰ` die,
//! `μ` is the mutation rate and `η` the death rate of affected males.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Element};
use crate::dynamics::{apply_w, w_power};
use crate::error::{GonosomalError, Result};
use crate::scalar::Scalar;

fn unit<T: Scalar>(name: &str, v: T) -> Result<()> {
    if !(v >= T::zero() && v <= T::one()) {
        return Err(GonosomalError::InvalidParameter(format!(
            "{name} = {v} is outside [0, 1]"
        )));
    }
    Ok(())
}

/// The four product rows `(e1, e2 | ẽ1, ẽ2)` of `e_i ẽ_j`.
pub fn hemophilia_algebra<T: Scalar>(mu: T, eta: T) -> Result<AlgebraSpec<T>> {
    unit("mu", mu)?;
    unit("eta", eta)?;
    let one = T::one();
    let two = T::lit(2.0);
    let row = |v: [T; 4], den: T| v.iter().map(|a| *a / den).collect::<Vec<T>>();
    let r11 = row(
        [(one - mu) * (one - eta), mu + eta - two * mu * eta, one - mu, mu],
        two - mu * eta,
    );
    let r12 = row([T::zero(), one - mu, one - mu, mu], two - mu);
    let r21 = row(
        [
            (one - mu) * (one - eta),
            one + mu - two * mu * eta,
            one - mu,
            one + mu,
        ],
        T::lit(4.0) - (one + mu) * eta,
    );
    let r22 = row([T::zero(), one - mu, one - mu, one + mu], T::lit(3.0) - mu);
    AlgebraSpec::from_rows(2, 2, &[vec![r11, r12], vec![r21, r22]])
}

/// `F(z) = (x1 + x2)(y1 + y2)`.
pub fn hemophilia_lyapunov<T: Scalar>(z: &Element<T>) -> T {
    z.female_mass() * z.male_mass()
}

/// Behaviour of the unnormalized orbit for `η = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HemophiliaWLimit {
    Zero,
    FixedPoint,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct HemophiliaPrediction<T> {
    /// `W^n(z) = 0` for all `n ≥ zero_from` (`μ = 1`).
    pub zero_from: Option<usize>,
    pub w_limit: HemophiliaWLimit,
    /// `r = (1−μ)·2·x2⁽¹⁾(y1⁽¹⁾ + y2⁽¹⁾)/(3−μ)²`; it squares at every step
    /// after the first, so `r < 1`, `= 1`, `> 1` decide the limit.
    pub r1: Option<T>,
    pub boundary: bool,
    /// `|x1/(2−μ) + x2/(3−μ)|·|y1 + y2|` at `z0` with its printed critical
    /// value `1/(1−μ)²`. Reported only; it does not decide the limit.
    pub printed_product: Option<T>,
    pub printed_threshold: Option<T>,
    pub v_limit: Option<Element<T>>,
    /// First `n` with `V^n(z0) = v_limit`.
    pub v_constant_from: Option<usize>,
}

/// Closed-form behaviour for `μ = 1` or `η = 1`.
pub fn hemophilia_degenerate_limits<T: Scalar>(
    z0: &Element<T>,
    mu: T,
    eta: T,
) -> Result<HemophiliaPrediction<T>> {
    let spec = hemophilia_algebra(mu, eta)?;
    spec.check_element(z0)?;
    let one = T::one();
    let mu_one = (one - mu).abs() <= T::EQ_TOL;
    let eta_one = (one - eta).abs() <= T::EQ_TOL;
    let mut pred = HemophiliaPrediction {
        zero_from: None,
        w_limit: HemophiliaWLimit::Zero,
        r1: None,
        boundary: false,
        printed_product: None,
        printed_threshold: None,
        v_limit: None,
        v_constant_from: None,
    };
    if mu_one {
        pred.zero_from = Some(if eta_one { 2 } else { 3 });
        return Ok(pred);
    }
    if !eta_one {
        return Err(GonosomalError::UncoveredCase(
            "mu < 1 and eta < 1 have no closed-form limit".into(),
        ));
    }
    let three = T::lit(3.0);
    let a = (one - mu) / (three - mu);
    let c = T::lit(2.0) / (three - mu);
    let z1 = apply_w(&spec, z0);
    let r1 = a * c * z1.x[1] * z1.male_mass();
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    pred.r1 = Some(r1);
    pred.boundary = (r1 - one).abs() <= tol;
    pred.w_limit = if pred.boundary {
        HemophiliaWLimit::FixedPoint
    } else if r1 < one {
        HemophiliaWLimit::Zero
    } else {
        HemophiliaWLimit::Unbounded
    };
    let q = z0.x[0] / (T::lit(2.0) - mu) + z0.x[1] / (three - mu);
    pred.printed_product = Some(q.abs() * z0.male_mass().abs());
    pred.printed_threshold = Some(one / ((one - mu) * (one - mu)));
    pred.v_limit = Some(Element::new(
        vec![T::zero(), a],
        vec![a, (one + mu) / (three - mu)],
    ));
    pred.v_constant_from = Some(if z0.x[0] == T::zero() { 1 } else { 2 });
    Ok(pred)
}

/// `W^n(z)` for checking the predictions.
pub fn hemophilia_w_power<T: Scalar>(z: &Element<T>, mu: T, eta: T, n: usize) -> Result<Element<T>> {
    Ok(w_power(&hemophilia_algebra(mu, eta)?, z, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::apply_v;

    #[test]
    fn rows_at_zero() {
        let s = hemophilia_algebra(0.0, 0.0).unwrap();
        assert_eq!(s.row(0, 0), vec![0.5, 0.0, 0.5, 0.0]);
        assert!(s.is_stochastic());
        for (mu, eta) in [(0.3, 0.9), (1.0, 1.0), (0.0, 1.0), (1.0, 0.2)] {
            assert!(hemophilia_algebra(mu, eta).unwrap().is_stochastic());
        }
        assert!(hemophilia_algebra(1.2, 0.0).is_err());
    }

    #[test]
    fn degenerate_extinction() {
        let z = Element::new(vec![0.3, 0.2], vec![0.1, 0.4]);
        assert!(hemophilia_w_power(&z, 1.0, 1.0, 2).unwrap().is_zero());
        assert!(!hemophilia_w_power(&z, 1.0, 0.5, 2).unwrap().is_zero());
        assert!(hemophilia_w_power(&z, 1.0, 0.5, 3).unwrap().is_zero());
        assert_eq!(
            hemophilia_degenerate_limits(&z, 1.0, 0.5).unwrap().zero_from,
            Some(3)
        );
    }

    #[test]
    fn v_constant_for_eta_one() {
        let s = hemophilia_algebra(0.5, 1.0).unwrap();
        let z = Element::new(vec![0.3, 0.2], vec![0.1, 0.4]);
        let v2 = apply_v(&s, &apply_v(&s, &z).unwrap()).unwrap();
        let target = Element::new(vec![0.0, 0.2], vec![0.2, 0.6]);
        assert!(v2.l1_dist(&target) < 1e-12);
        let pred = hemophilia_degenerate_limits(&z, 0.5, 1.0).unwrap();
        assert!(pred.v_limit.unwrap().l1_dist(&target) < 1e-15);
        assert_eq!(pred.v_constant_from, Some(2));
    }

    #[test]
    fn r_squares() {
        let mu = 0.25;
        let s = hemophilia_algebra(mu, 1.0).unwrap();
        let z0 = Element::new(vec![0.6, 1.1], vec![0.9, 0.8]);
        let r = |z: &Element<f64>| (1.0 - mu) * 2.0 / (3.0 - mu) / (3.0 - mu) * z.x[1] * z.male_mass();
        let z1 = apply_w(&s, &z0);
        let z2 = apply_w(&s, &z1);
        assert!((r(&z2) - r(&z1).powi(2)).abs() < 1e-12 * r(&z2));
    }

    #[test]
    fn lyapunov_zero() {
        assert_eq!(hemophilia_lyapunov(&Element::<f64>::zeros(2, 2)), 0.0);
    }
}
