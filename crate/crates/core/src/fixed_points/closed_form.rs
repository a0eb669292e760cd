//! Closed-form fixed points of `W` for the sex-linked scenarios.

use serde::{Deserialize, Serialize};

use super::{residual, FamilyDescriptor, FixedPointRecord};
use crate::algebra::{type11, Element};
use crate::dynamics::Operator;
use crate::error::{GonosomalError, Result};
use crate::scalar::Scalar;
use crate::scenarios::{hemophilia_algebra, type21_algebra};

fn check_unit<T: Scalar>(name: &str, v: T) -> Result<()> {
    if !(v >= T::zero() && v <= T::one()) {
        return Err(GonosomalError::InvalidParameter(format!(
            "{name} = {v} is outside [0, 1]"
        )));
    }
    Ok(())
}

/// `(0, 0)` and `(1/(1−γ), 1/γ)` for `eẽ = γe + (1−γ)ẽ`.
pub fn closed_form_fixed_points_type11<T: Scalar>(gamma: T) -> Result<Vec<FixedPointRecord<T>>> {
    check_unit("gamma", gamma)?;
    if gamma.abs() <= T::EQ_TOL || (T::one() - gamma).abs() <= T::EQ_TOL {
        return Err(GonosomalError::DegenerateParameter(
            "gamma in {0, 1} leaves only the origin".into(),
        ));
    }
    let spec = type11(gamma);
    let p = Element::new(vec![T::one() / (T::one() - gamma)], vec![T::one() / gamma]);
    Ok(vec![
        FixedPointRecord::new(&spec, Operator::W, Element::zeros(1, 1)),
        FixedPointRecord::new(&spec, Operator::W, p),
    ])
}

/// Fixed points of the type-(2,1) system
///
/// ```text
/// x1' = (γ1 x1 + δ1 x2) y,  x2' = (γ2 x1 + δ2 x2) y,  y' = (γ x1 + δ x2) y
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Type21FixedPoints<T> {
    /// Sub-case of the case table (`"1.1"` … `"2.7"`), or `"1.x"` when
    /// `γ1δ2 − γ2δ1 = 0` but none of the listed sub-cases applies.
    pub case: String,
    pub records: Vec<FixedPointRecord<T>>,
}

/// Case label for parameters `(γ1, γ2, δ1, δ2)`, zero tests at `EQ_TOL`.
pub fn type21_case<T: Scalar>(g1: T, g2: T, d1: T, d2: T) -> &'static str {
    let z = |a: T| a.abs() <= T::EQ_TOL;
    let one = T::one();
    if z(g1 * d2 - g2 * d1) {
        if !z(g1) && !z(g1 - one) && z(d2) && z(g2) {
            "1.1"
        } else if z(g1) && !z(d2) && !z(d2 - one) && z(d1) {
            "1.2"
        } else if !z(g1 * d2) && !z(g1 + d2 - one) && !z(g2 * d1) {
            "1.3"
        } else {
            "1.x"
        }
    } else {
        match (z(d1), z(g2), z(g1 - d2)) {
            (true, true, true) => "2.1",
            (true, true, false) => "2.2",
            (true, false, true) => "2.3",
            (true, false, false) => "2.4",
            (false, true, true) => "2.5",
            (false, true, false) => "2.6",
            (false, false, _) => "2.7",
        }
    }
}

/// All fixed points of the type-(2,1) operator, via the eigen-structure of
/// `M = [[γ1, δ1], [γ2, δ2]]`: a nonzero fixed point has `y = 1/λ` for an
/// eigenvalue `λ` of `M`, `x` in the matching eigenspace and `γx1 + δx2 = 1`.
///
/// Case 2.1 yields a one-parameter family, reported as one record with a
/// [`FamilyDescriptor`].
pub fn closed_form_fixed_points_type21<T: Scalar>(
    g1: T,
    g2: T,
    d1: T,
    d2: T,
) -> Result<Type21FixedPoints<T>> {
    let spec = type21_algebra(g1, g2, d1, d2)?;
    let (gam, del) = (T::one() - g1 - g2, T::one() - d1 - d2);
    let z = |a: T| a.abs() <= T::EQ_TOL;
    let case = type21_case(g1, g2, d1, d2);
    let w =
        |x1: T, x2: T, y: T| FixedPointRecord::new(&spec, Operator::W, Element::new(vec![x1, x2], vec![y]));
    let mut records = vec![w(T::zero(), T::zero(), T::zero())];
    let det = g1 * d2 - g2 * d1;
    let s = g1 + d2;

    if case.starts_with('1') {
        if !z(s) && !z(s - T::one()) {
            let (a, b) = if !z(g1) || !z(g2) { (g1, g2) } else { (d1, d2) };
            let den = gam * a + del * b;
            if !z(den) {
                records.push(w(a / den, b / den, T::one() / s));
            }
        }
        return Ok(Type21FixedPoints {
            case: case.into(),
            records,
        });
    }

    let degenerate = |what: &str| GonosomalError::DegenerateParameter(format!("case {case}: {what}"));
    let double = z(g1 - d2) && (z(g2) || z(d1));
    let lambdas = if double {
        vec![s / T::lit(2.0)]
    } else {
        let root = ((g1 - d2) * (g1 - d2) + T::lit(4.0) * g2 * d1).sqrt();
        let big = (s + s.signum() * root) / T::lit(2.0);
        let big = if z(s) { root / T::lit(2.0) } else { big };
        let mut l = vec![det / big, big];
        l.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        l
    };
    for lam in lambdas {
        let y = T::one() / lam;
        let a = [[g1 * y - T::one(), d1 * y], [g2 * y, d2 * y - T::one()]];
        if a.iter().flatten().all(|v| z(*v)) {
            if z(gam) {
                return Err(degenerate("1 − γ1 vanishes"));
            }
            let c = T::one() / gam;
            let base = w(T::zero(), c, y);
            let unit = T::lit(std::f64::consts::FRAC_1_SQRT_2);
            let range = (-1.0, 1.0);
            let on_family = [-1.0, -0.5, 0.5, 1.0].iter().all(|&t| {
                let t = T::lit(t);
                let p = Element::new(vec![t * unit, c - t * unit], vec![y]);
                residual(&spec, Operator::W, &p) < T::lit(1e-10).max(T::epsilon() * T::lit(1e3))
            });
            debug_assert!(on_family);
            let fam = FamilyDescriptor {
                base_point: vec![0.0, c.as_f64(), y.as_f64()],
                direction: vec![unit.as_f64(), -unit.as_f64(), 0.0],
                parameter_range_tested: range,
            };
            records.push(base.with_family(fam));
            continue;
        }
        let (v0, v1) = if !z(a[0][0]) || !z(a[0][1]) {
            (-a[0][1], a[0][0])
        } else {
            (-a[1][1], a[1][0])
        };
        let den = gam * v0 + del * v1;
        if z(den) {
            return Err(degenerate("γx1 + δx2 vanishes on the eigenvector"));
        }
        records.push(w(v0 / den, v1 / den, y));
    }
    Ok(Type21FixedPoints {
        case: case.into(),
        records,
    })
}

/// Fixed points of `W_{μ,η}` where a closed form exists (`μ = 1` or `η = 1`).
pub fn closed_form_fixed_points_hemophilia<T: Scalar>(mu: T, eta: T) -> Result<Vec<FixedPointRecord<T>>> {
    check_unit("mu", mu)?;
    check_unit("eta", eta)?;
    let one = T::one();
    let mu_one = (one - mu).abs() <= T::EQ_TOL;
    let eta_one = (one - eta).abs() <= T::EQ_TOL;
    if !mu_one && !eta_one {
        return Err(GonosomalError::UncoveredCase(
            "no closed form for mu < 1 and eta < 1; use the numeric solver".into(),
        ));
    }
    let spec = hemophilia_algebra(mu, eta)?;
    let mut out = vec![FixedPointRecord::new(&spec, Operator::W, Element::zeros(2, 2))];
    if !mu_one {
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h = (three - mu) / two;
        let y2 = (one + mu) * (three - mu) / (two * (one - mu));
        out.push(FixedPointRecord::new(
            &spec,
            Operator::W,
            Element::new(vec![T::zero(), h], vec![h, y2]),
        ));
    }
    Ok(out)
}
