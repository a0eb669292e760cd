use std::fmt::Write;

use super::{Outcome, Trajectory};
use crate::scalar::Scalar;

/// `# outcome=<name>[,step=<t>][,period=<p>]`
pub fn outcome_trailer<T: Scalar>(outcome: &Outcome<T>) -> String {
    let mut s = format!("# outcome={}", outcome.name());
    if let Some(t) = outcome.step() {
        let _ = write!(s, ",step={t}");
    }
    if let Outcome::Cycle { period, .. } = outcome {
        let _ = write!(s, ",period={period}");
    }
    s
}

/// CSV with header `t,x1..xn,y1..yν,omega`, one row per state and the
/// outcome trailer as the final line.
pub fn trajectory_csv<T: Scalar>(tr: &Trajectory<T>) -> String {
    let z0 = &tr.states[0];
    let mut out = String::from("t");
    for k in 1..=z0.n() {
        let _ = write!(out, ",x{k}");
    }
    for r in 1..=z0.nu() {
        let _ = write!(out, ",y{r}");
    }
    out.push_str(",omega\n");
    for (t, (z, w)) in tr.states.iter().zip(&tr.omegas).enumerate() {
        let _ = write!(out, "{t}");
        for v in z.x.iter().chain(&z.y).chain(std::iter::once(w)) {
            let _ = write!(out, ",{v:.16e}");
        }
        out.push('\n');
    }
    out.push_str(&outcome_trailer(&tr.outcome));
    out.push('\n');
    out
}
