//! The gonosomal operator `W` and its normalisation `V`.
//!
//! `W(z) = ½z²` in coordinates:
//!
//! ```text
//! x'_k = Σ_ij γ_ijk x_i y_j,   y'_r = Σ_ij γ̃_ijr x_i y_j
//! ```
//!
//! and `V(z) = W(z) / ϖ(W(z))` with `ϖ(W(z)) = (Σx)(Σy)`.

mod bounds;
mod export;

pub use bounds::{
    swap_map, verify_conjugacy, verify_coordinate_bounds, verify_omega_bounds, BoundCheck, BoundReport,
};
pub use export::{outcome_trailer, trajectory_csv};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Element};
use crate::error::{GonosomalError, Result};
use crate::scalar::Scalar;

/// Which evolution operator to iterate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operator {
    W,
    V,
}

impl std::str::FromStr for Operator {
    type Err = GonosomalError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "W" | "w" => Ok(Operator::W),
            "V" | "v" => Ok(Operator::V),
            other => Err(GonosomalError::Parse(format!("unknown operator {other:?}"))),
        }
    }
}

/// `W(z)`. Shapes must match the algebra.
pub fn apply_w<T: Scalar>(spec: &AlgebraSpec<T>, z: &Element<T>) -> Element<T> {
    let (n, nu) = (spec.n(), spec.nu());
    let mut out = Element::zeros(n, nu);
    for i in 0..n {
        let xi = z.x[i];
        if xi == T::zero() {
            continue;
        }
        for j in 0..nu {
            let w = xi * z.y[j];
            if w == T::zero() {
                continue;
            }
            for k in 0..n {
                out.x[k] += spec.gamma(i, j, k) * w;
            }
            for r in 0..nu {
                out.y[r] += spec.gamma_tilde(i, j, r) * w;
            }
        }
    }
    out
}

/// `V(z) = W(z) / ϖ(W(z))` for a stochastic algebra.
///
/// Fails with `AbsorbedToO` when `z ∈ O`, where `ϖ(W(z)) = 0`.
pub fn apply_v<T: Scalar>(spec: &AlgebraSpec<T>, z: &Element<T>) -> Result<Element<T>> {
    spec.require_stochastic()?;
    spec.check_element(z)?;
    apply_v_unchecked(spec, z).ok_or(GonosomalError::AbsorbedToO { step: 0 })
}

pub(crate) fn apply_v_unchecked<T: Scalar>(spec: &AlgebraSpec<T>, z: &Element<T>) -> Option<Element<T>> {
    let g = z.female_mass() * z.male_mass();
    if g == T::zero() {
        return None;
    }
    Some(apply_w(spec, z).scale(T::one() / g))
}

/// Stopping rules for [`iterate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct IterationOptions<T> {
    pub conv_tol: T,
    pub patience: usize,
    pub div_threshold: T,
    pub max_steps: usize,
    pub max_period: usize,
}

impl<T: Scalar> Default for IterationOptions<T> {
    fn default() -> Self {
        Self {
            conv_tol: T::lit(1e-9),
            patience: 3,
            div_threshold: T::lit(1e12),
            max_steps: 500,
            max_period: 8,
        }
    }
}

/// How a trajectory ended.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Scalar")]
pub enum Outcome<T> {
    /// Successive states stayed within `conv_tol` for `patience` steps.
    ConvergedTo {
        step: usize,
        state: Element<T>,
    },
    /// The state became exactly zero.
    ExtinctAt {
        step: usize,
    },
    /// The L1 norm fell below the underflow floor without being exactly zero.
    NumericallyExtinct {
        step: usize,
    },
    /// A `V` orbit reached `O`, where `V` is undefined.
    AbsorbedToO {
        step: usize,
    },
    /// The L1 norm exceeded `div_threshold` or stopped being finite.
    Divergent {
        step: usize,
    },
    /// The orbit repeats with the given period; `states` holds one period,
    /// the last entry being the state at `step`.
    Cycle {
        step: usize,
        period: usize,
        states: Vec<Element<T>>,
    },
    MaxIterationsReached,
}

impl<T: Scalar> Outcome<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::ConvergedTo { .. } => "ConvergedTo",
            Outcome::ExtinctAt { .. } => "ExtinctAt",
            Outcome::NumericallyExtinct { .. } => "NumericallyExtinct",
            Outcome::AbsorbedToO { .. } => "AbsorbedToO",
            Outcome::Divergent { .. } => "Divergent",
            Outcome::Cycle { .. } => "Cycle",
            Outcome::MaxIterationsReached => "MaxIterationsReached",
        }
    }

    pub fn step(&self) -> Option<usize> {
        match self {
            Outcome::ConvergedTo { step, .. }
            | Outcome::ExtinctAt { step }
            | Outcome::NumericallyExtinct { step }
            | Outcome::AbsorbedToO { step }
            | Outcome::Divergent { step }
            | Outcome::Cycle { step, .. } => Some(*step),
            Outcome::MaxIterationsReached => None,
        }
    }

    /// True for outcomes where the orbit tends to the origin.
    pub fn goes_to_zero(&self, tol: T) -> bool {
        match self {
            Outcome::ExtinctAt { .. } | Outcome::NumericallyExtinct { .. } => true,
            Outcome::ConvergedTo { state, .. } => state.l1_norm() <= tol,
            _ => false,
        }
    }
}

/// An orbit `z⁽⁰⁾, z⁽¹⁾, …` with its ϖ values and terminal outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Trajectory<T> {
    pub operator: Operator,
    pub states: Vec<Element<T>>,
    pub omegas: Vec<T>,
    pub outcome: Outcome<T>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn last(&self) -> &Element<T> {
        self.states.last().expect("trajectory holds z0")
    }
}

/// Iterates `W` or `V` from `z0` until an outcome is detected.
///
/// Checks run after every step in the order extinction, absorption,
/// convergence, cycle, divergence. For `V` the start must lie on the simplex;
/// a start in `O` yields `AbsorbedToO { step: 0 }`.
pub fn iterate<T: Scalar>(
    spec: &AlgebraSpec<T>,
    z0: &Element<T>,
    op: Operator,
    opts: &IterationOptions<T>,
) -> Result<Trajectory<T>> {
    spec.check_element(z0)?;
    if op == Operator::V {
        spec.require_stochastic()?;
        z0.check_simplex(T::lit(1e-10))?;
    }
    let mut states = vec![z0.clone()];
    let mut omegas = vec![z0.omega()];
    let finish = |states: Vec<Element<T>>, omegas: Vec<T>, outcome| {
        Ok(Trajectory {
            operator: op,
            states,
            omegas,
            outcome,
        })
    };

    if let Some(o) = terminal(z0, op, 0) {
        return finish(states, omegas, o);
    }

    let mut calm = 0usize;
    let mut periodic = vec![0usize; opts.max_period + 1];
    for t in 1..=opts.max_steps {
        let prev = &states[t - 1];
        let z = match op {
            Operator::W => apply_w(spec, prev),
            Operator::V => match apply_v_unchecked(spec, prev) {
                Some(v) => v,
                None => return finish(states, omegas, Outcome::AbsorbedToO { step: t - 1 }),
            },
        };
        omegas.push(z.omega());
        states.push(z);
        let z = &states[t];

        if let Some(o) = terminal(z, op, t) {
            return finish(states, omegas, o);
        }

        let step = z.l1_dist(&states[t - 1]);
        calm = if step < opts.conv_tol { calm + 1 } else { 0 };
        if calm >= opts.patience {
            let state = z.clone();
            return finish(states, omegas, Outcome::ConvergedTo { step: t, state });
        }

        for p in 2..=opts.max_period {
            periodic[p] = if t >= p && step >= opts.conv_tol && z.l1_dist(&states[t - p]) < opts.conv_tol {
                periodic[p] + 1
            } else {
                0
            };
        }
        if let Some(p) = (2..=opts.max_period).find(|&p| periodic[p] >= opts.patience) {
            let cycle = states[t + 1 - p..=t].to_vec();
            return finish(
                states,
                omegas,
                Outcome::Cycle {
                    step: t,
                    period: p,
                    states: cycle,
                },
            );
        }

        let norm = z.l1_norm();
        if !norm.is_finite() || norm > opts.div_threshold {
            return finish(states, omegas, Outcome::Divergent { step: t });
        }
    }
    finish(states, omegas, Outcome::MaxIterationsReached)
}

fn terminal<T: Scalar>(z: &Element<T>, op: Operator, t: usize) -> Option<Outcome<T>> {
    if z.is_zero() {
        return Some(Outcome::ExtinctAt { step: t });
    }
    if z.is_finite() && z.l1_norm() < T::EXTINCT_NORM {
        return Some(Outcome::NumericallyExtinct { step: t });
    }
    if op == Operator::V && z.in_o() {
        return Some(Outcome::AbsorbedToO { step: t });
    }
    None
}

/// `W^t(z)` without any outcome detection.
pub fn w_power<T: Scalar>(spec: &AlgebraSpec<T>, z: &Element<T>, t: usize) -> Element<T> {
    (0..t).fold(z.clone(), |z, _| apply_w(spec, &z))
}
