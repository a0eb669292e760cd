//! Sex-linked lethal-gene models.
//!
//! | tag                | model                                        | type  |
//! |--------------------|----------------------------------------------|-------|
//! | `lr_lethal`        | dominant lethal, lethal males                | (1,1) |
//! | `lr_mutation`      | dominant lethal with mutation, `γ=(1−η)/(2−η)` | (1,1) |
//! | `xlrec_lethal`     | recessive lethal, lethal males               | (2,1) |
//! | `hemophilia`       | recessive lethal, non-lethal males           | (2,2) |
//! | `xic_inactivation` | opposite of `xlrec_lethal`                   | (1,2) |

mod hemophilia;
mod type21;

use std::collections::BTreeMap;

pub use hemophilia::{
    hemophilia_algebra, hemophilia_degenerate_limits, hemophilia_lyapunov, hemophilia_w_power,
    HemophiliaPrediction, HemophiliaWLimit,
};
pub use type21::{
    classify_eset, predict_limit_type21, type21_algebra, type21_lambdas, EsetClassification, Type21Params,
    Type21Prediction, WLimit, ESET_SCAN,
};

use serde::{Deserialize, Serialize};

use crate::algebra::{type11, AlgebraSpec, Element};
use crate::error::{GonosomalError, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaParams {
    pub gamma: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuEtaParams {
    pub mu: f64,
    pub eta: f64,
}

/// A model from the table above with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", content = "params", rename_all = "snake_case")]
pub enum Scenario {
    LrLethal(GammaParams),
    LrMutation(MuEtaParams),
    XlrecLethal(Type21Params<f64>),
    Hemophilia(MuEtaParams),
    XicInactivation(Type21Params<f64>),
}

/// Tag, parameter names and description of every scenario.
pub const SCENARIOS: &[(&str, &[&str], &str)] = &[
    (
        "lr_lethal",
        &["gamma"],
        "X-linked dominant lethal, affected males die; type (1,1)",
    ),
    (
        "lr_mutation",
        &["mu", "eta"],
        "dominant lethal with mutation; gamma = (1-eta)/(2-eta); type (1,1)",
    ),
    (
        "xlrec_lethal",
        &["gamma1", "gamma2", "delta1", "delta2"],
        "X-linked recessive lethal, affected males die; type (2,1)",
    ),
    (
        "hemophilia",
        &["mu", "eta"],
        "X-linked recessive lethal, non-lethal males; type (2,2)",
    ),
    (
        "xic_inactivation",
        &["gamma1", "gamma2", "delta1", "delta2"],
        "X-inactivation centre model, opposite algebra of xlrec_lethal; type (1,2)",
    ),
];

fn unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(GonosomalError::InvalidParameter(format!(
            "{name} = {v} is outside [0, 1]"
        )));
    }
    Ok(())
}

impl Scenario {
    pub fn tag(&self) -> &'static str {
        match self {
            Scenario::LrLethal(_) => "lr_lethal",
            Scenario::LrMutation(_) => "lr_mutation",
            Scenario::XlrecLethal(_) => "xlrec_lethal",
            Scenario::Hemophilia(_) => "hemophilia",
            Scenario::XicInactivation(_) => "xic_inactivation",
        }
    }

    /// Builds a scenario from a tag and named parameters. Unknown or missing
    /// names are errors.
    pub fn from_tag(tag: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let (_, names, _) = SCENARIOS
            .iter()
            .find(|(t, _, _)| *t == tag)
            .ok_or_else(|| GonosomalError::Parse(format!("unknown scenario {tag:?}")))?;
        if let Some(k) = params.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(GonosomalError::InvalidParameter(format!(
                "scenario {tag} has no parameter {k:?} (expected {})",
                names.join(", ")
            )));
        }
        let get = |k: &str| {
            params
                .get(k)
                .copied()
                .ok_or_else(|| GonosomalError::InvalidParameter(format!("scenario {tag} needs {k}")))
        };
        let t21 = || -> Result<Type21Params<f64>> {
            Ok(Type21Params::new(
                get("gamma1")?,
                get("gamma2")?,
                get("delta1")?,
                get("delta2")?,
            ))
        };
        let s = match tag {
            "lr_lethal" => Scenario::LrLethal(GammaParams { gamma: get("gamma")? }),
            "lr_mutation" => Scenario::LrMutation(MuEtaParams {
                mu: get("mu")?,
                eta: get("eta")?,
            }),
            "xlrec_lethal" => Scenario::XlrecLethal(t21()?),
            "hemophilia" => Scenario::Hemophilia(MuEtaParams {
                mu: get("mu")?,
                eta: get("eta")?,
            }),
            _ => Scenario::XicInactivation(t21()?),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Scenario::LrLethal(p) => unit("gamma", p.gamma),
            Scenario::LrMutation(p) | Scenario::Hemophilia(p) => {
                unit("mu", p.mu)?;
                unit("eta", p.eta)
            }
            Scenario::XlrecLethal(p) | Scenario::XicInactivation(p) => p.validate(),
        }
    }

    pub fn build_algebra<T: Scalar>(&self) -> Result<AlgebraSpec<T>> {
        self.validate()?;
        let t21 = |p: &Type21Params<f64>| {
            type21_algebra(
                T::lit(p.gamma1),
                T::lit(p.gamma2),
                T::lit(p.delta1),
                T::lit(p.delta2),
            )
        };
        match self {
            Scenario::LrLethal(p) => Ok(type11(T::lit(p.gamma))),
            Scenario::LrMutation(p) => Ok(type11(T::lit((1.0 - p.eta) / (2.0 - p.eta)))),
            Scenario::XlrecLethal(p) => t21(p),
            Scenario::Hemophilia(p) => hemophilia_algebra(T::lit(p.mu), T::lit(p.eta)),
            Scenario::XicInactivation(p) => Ok(t21(p)?.opposite()),
        }
    }
}

/// `1/(γ(1−γ))`, the critical value of `x⁽⁰⁾y⁽⁰⁾` for type (1,1).
pub fn trichotomy_threshold_type11<T: Scalar>(gamma: T) -> T {
    T::one() / (gamma * (T::one() - gamma))
}

/// `W^t(z0)` for `eẽ = γe + (1−γ)ẽ` in closed form:
/// with `q = γ(1−γ)x⁽⁰⁾y⁽⁰⁾`, `x⁽ᵗ⁾ = q^{2^{t−1}}/(1−γ)` and
/// `y⁽ᵗ⁾ = q^{2^{t−1}}/γ` for `t ≥ 1`. Large powers saturate to `∞`.
pub fn closed_form_trajectory_type11<T: Scalar>(z0: &Element<T>, gamma: T, t: usize) -> Element<T> {
    if t == 0 {
        return z0.clone();
    }
    let one = T::one();
    let q = gamma * (one - gamma) * z0.x[0] * z0.y[0];
    let mut p = q;
    for _ in 1..t {
        p = p * p;
    }
    Element::new(vec![p / (one - gamma)], vec![p / gamma])
}
