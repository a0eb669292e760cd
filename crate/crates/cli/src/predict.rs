//! `predict`: closed-form limits checked against iteration.

use anyhow::Result;
use gonosomal::dynamics::{apply_v, iterate, outcome_trailer, w_power};
use gonosomal::scenarios::{
    classify_eset, closed_form_trajectory_type11, hemophilia_degenerate_limits, predict_limit_type21,
    trichotomy_threshold_type11, HemophiliaPrediction, HemophiliaWLimit, Type21Params, Type21Prediction,
    WLimit,
};
use gonosomal::{Algebra, IterationOptions, Operator, Outcome, Scenario, State};
use serde::Serialize;

/// Agreement tolerance between predicted and iterated states.
const AGREE_TOL: f64 = 1e-6;
/// How many `W` steps are compared against a closed form.
const W_STEPS: usize = 6;

#[derive(Serialize)]
pub struct Check {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
pub struct Type11Prediction {
    gamma: f64,
    product: f64,
    threshold: f64,
    w_limit: WLimit,
    /// `W^t(z0)` for every `t ≥ 2` on the boundary.
    w_fixed_point: Option<State>,
    v_limit: State,
}

#[derive(Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Prediction {
    Type11(Type11Prediction),
    /// For `xic_inactivation` the states are those of the opposite type-(2,1)
    /// algebra, i.e. `(y, x)`.
    Type21 {
        swapped_coordinates: bool,
        prediction: Type21Prediction<f64>,
    },
    Hemophilia(HemophiliaPrediction<f64>),
}

#[derive(Serialize)]
pub struct PredictReport {
    scenario: Scenario,
    z0: State,
    prediction: Prediction,
    checks: Vec<Check>,
    pub agree: bool,
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }
}

fn describe(o: &Outcome<f64>) -> String {
    format!(
        "iteration: {}",
        outcome_trailer(o).trim_start_matches("# outcome=")
    )
}

fn rel_close(a: &State, b: &State) -> bool {
    a.to_concat()
        .iter()
        .zip(b.to_concat())
        .all(|(p, q)| (p - q).abs() <= AGREE_TOL * q.abs().max(1.0))
}

/// The simplex point on the ray of `z0`, if there is one.
fn on_simplex(z0: &State) -> Option<State> {
    let w = z0.omega();
    (z0.is_nonnegative() && w > 0.0 && !z0.in_o()).then(|| z0.scale(1.0 / w))
}

fn check_w_trend(
    c: &mut Checks,
    spec: &Algebra,
    z0: &State,
    zero: bool,
    opts: &IterationOptions<f64>,
) -> Result<()> {
    let tr = iterate(spec, z0, Operator::W, opts)?;
    let (name, pass) = if zero {
        ("w_tends_to_zero", tr.outcome.goes_to_zero(AGREE_TOL))
    } else {
        ("w_unbounded", matches!(tr.outcome, Outcome::Divergent { .. }))
    };
    c.push(name, pass, describe(&tr.outcome));
    Ok(())
}

fn check_w_states(c: &mut Checks, spec: &Algebra, z0: &State, states: &[State], from: usize) {
    let bad = (from..=W_STEPS).find(|&t| {
        let want = &states[(t - from) % states.len()];
        !rel_close(&w_power(spec, z0, t), want)
    });
    c.push(
        "w_boundary_orbit",
        bad.is_none(),
        match bad {
            None => format!("W^t matches for t = {from}..{W_STEPS}"),
            Some(t) => format!("W^{t} differs from the predicted state"),
        },
    );
}

fn check_v_limit(
    c: &mut Checks,
    spec: &Algebra,
    z0: &State,
    limit: &State,
    opts: &IterationOptions<f64>,
) -> Result<()> {
    let Some(zn) = on_simplex(z0) else {
        c.push("v_limit", true, "skipped: V is undefined on this ray");
        return Ok(());
    };
    let tr = iterate(spec, &zn, Operator::V, opts)?;
    let err = tr.last().l1_dist(limit);
    c.push(
        "v_limit",
        err <= AGREE_TOL,
        format!(
            "{} after {} steps, L1 error {err:e}",
            tr.outcome.name(),
            tr.states.len() - 1
        ),
    );
    Ok(())
}

fn type11(
    gamma: f64,
    spec: &Algebra,
    z0: &State,
    opts: &IterationOptions<f64>,
    c: &mut Checks,
) -> Result<Prediction> {
    let threshold = trichotomy_threshold_type11(gamma);
    let product = (z0.x[0] * z0.y[0]).abs();
    let boundary = (product - threshold).abs() <= 1e-12 * threshold;
    let w_limit = if boundary {
        WLimit::Bounded
    } else if product < threshold {
        WLimit::Zero
    } else {
        WLimit::Unbounded
    };
    let fixed = State::new(vec![1.0 / (1.0 - gamma)], vec![1.0 / gamma]);
    let v_limit = State::new(vec![gamma], vec![1.0 - gamma]);
    let closed_ok = (1..=W_STEPS).all(|t| {
        rel_close(
            &w_power(spec, z0, t),
            &closed_form_trajectory_type11(z0, gamma, t),
        )
    });
    c.push(
        "w_closed_form",
        closed_ok,
        format!("W^t against the closed form for t = 1..{W_STEPS}"),
    );
    match w_limit {
        WLimit::Bounded => check_w_states(c, spec, z0, std::slice::from_ref(&fixed), 2),
        WLimit::Zero => check_w_trend(c, spec, z0, true, opts)?,
        WLimit::Unbounded => check_w_trend(c, spec, z0, false, opts)?,
    }
    match on_simplex(z0) {
        Some(mut v) => {
            let mut worst: f64 = 0.0;
            for _ in 0..5 {
                v = apply_v(spec, &v)?;
                worst = worst.max(v.l1_dist(&v_limit));
            }
            c.push(
                "v_stationary",
                worst <= AGREE_TOL,
                format!("V^t = (gamma, 1-gamma) for t = 1..5, L1 error {worst:e}"),
            );
        }
        None => c.push("v_stationary", true, "skipped: V is undefined on this ray"),
    }
    Ok(Prediction::Type11(Type11Prediction {
        gamma,
        product,
        threshold,
        w_limit,
        w_fixed_point: boundary.then_some(fixed),
        v_limit,
    }))
}

fn type21(
    p: &Type21Params<f64>,
    z: &State,
    opts: &IterationOptions<f64>,
    c: &mut Checks,
) -> Result<Type21Prediction<f64>> {
    let cls = classify_eset(z, p)?;
    let pred = predict_limit_type21(z, p, cls)?;
    let spec = p.algebra()?;
    match pred.w_limit {
        WLimit::Zero => check_w_trend(c, &spec, z, true, opts)?,
        WLimit::Unbounded => check_w_trend(c, &spec, z, false, opts)?,
        WLimit::Bounded => {
            let states = pred.w_boundary_states.as_deref().unwrap_or_default();
            check_w_states(c, &spec, z, states, 1);
        }
    }
    if let Some(limit) = &pred.v_limit {
        check_v_limit(c, &spec, z, limit, opts)?;
    }
    if let (Some([odd, even]), Some(zn)) = (&pred.v_cycle, on_simplex(z)) {
        let tr = iterate(&spec, &zn, Operator::V, opts)?;
        let pass = match &tr.outcome {
            Outcome::Cycle {
                step,
                period: 2,
                states,
            } => {
                // states[1] is the state at `step`
                let (at_odd, at_even) = if step % 2 == 1 {
                    (&states[1], &states[0])
                } else {
                    (&states[0], &states[1])
                };
                at_odd.l1_dist(odd) <= AGREE_TOL && at_even.l1_dist(even) <= AGREE_TOL
            }
            _ => false,
        };
        c.push("v_period_two", pass, describe(&tr.outcome));
    }
    Ok(pred)
}

fn hemophilia(
    mu: f64,
    eta: f64,
    spec: &Algebra,
    z0: &State,
    opts: &IterationOptions<f64>,
    c: &mut Checks,
) -> Result<HemophiliaPrediction<f64>> {
    let pred = hemophilia_degenerate_limits(z0, mu, eta)?;
    if let Some(n) = pred.zero_from {
        let zero = w_power(spec, z0, n).is_zero();
        c.push("w_extinct", zero, format!("W^{n}(z0) = 0: {zero}"));
    }
    if pred.r1.is_some() {
        match pred.w_limit {
            HemophiliaWLimit::Zero => check_w_trend(c, spec, z0, true, opts)?,
            HemophiliaWLimit::Unbounded => check_w_trend(c, spec, z0, false, opts)?,
            HemophiliaWLimit::FixedPoint => {
                let tr = iterate(spec, z0, Operator::W, opts)?;
                let pass = matches!(&tr.outcome, Outcome::ConvergedTo { state, .. } if !state.is_zero());
                c.push("w_fixed_point", pass, describe(&tr.outcome));
            }
        }
    }
    if let (Some(limit), Some(from)) = (&pred.v_limit, pred.v_constant_from) {
        match on_simplex(z0) {
            Some(mut v) => {
                let mut worst: f64 = 0.0;
                for t in 1..=from + 3 {
                    v = apply_v(spec, &v)?;
                    if t >= from {
                        worst = worst.max(v.l1_dist(limit));
                    }
                }
                c.push(
                    "v_constant",
                    worst <= AGREE_TOL,
                    format!("V^t constant from t = {from}, L1 error {worst:e}"),
                );
            }
            None => c.push("v_constant", true, "skipped: V is undefined on this ray"),
        }
    }
    Ok(pred)
}

pub fn run(
    scenario: Scenario,
    spec: &Algebra,
    z0: &State,
    opts: &IterationOptions<f64>,
) -> Result<PredictReport> {
    let mut c = Checks(Vec::new());
    let prediction = match scenario {
        Scenario::LrLethal(p) => type11(p.gamma, spec, z0, opts, &mut c)?,
        Scenario::LrMutation(p) => type11((1.0 - p.eta) / (2.0 - p.eta), spec, z0, opts, &mut c)?,
        Scenario::XlrecLethal(p) => Prediction::Type21 {
            swapped_coordinates: false,
            prediction: type21(&p, z0, opts, &mut c)?,
        },
        // the opposite algebra is conjugate to type (2,1) by (x, y) ↦ (y, x)
        Scenario::XicInactivation(p) => Prediction::Type21 {
            swapped_coordinates: true,
            prediction: type21(&p, &z0.swapped(), opts, &mut c)?,
        },
        Scenario::Hemophilia(p) => Prediction::Hemophilia(hemophilia(p.mu, p.eta, spec, z0, opts, &mut c)?),
    };
    let agree = c.0.iter().all(|c| c.pass);
    Ok(PredictReport {
        scenario,
        z0: z0.clone(),
        prediction,
        checks: c.0,
        agree,
    })
}
