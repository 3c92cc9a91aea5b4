//! Indifference fixed points found by bisection.

use serde::{Deserialize, Serialize};

use super::{Controls, SimError};
use crate::dynamics::{coupled_rate, AdaptiveRule, CouplingCurves};
use crate::problem::{check_probability, DecisionProblem};

/// Literature value for the ratifiable mixed act in the asymmetric Death in
/// Damascus problem at reliability 0.99. The update rule behind it is not
/// specified precisely enough to reproduce; the indifference fixed point
/// computed here is about 0.449.
pub const REPORTED_RATIFIABLE_MIX: f64 = 0.474;

const BISECTION_TOLERANCE: f64 = 1e-12;

/// Root of `f` in `[lo, hi]` to within `tol`, given a sign change.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// The causal indifference point and the choice probability that produces it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedEquilibrium {
    /// `P(S2)` at which both acts have equal causal expected utility.
    pub s2_star: f64,
    /// `P(A2)` whose marginal `P(S2)` equals `s2_star` under the fixed
    /// conditionals.
    pub p_star: f64,
    pub q1_star: f64,
    pub q2_star: f64,
}

/// Deliberational equilibrium with the conditionals held at `(q1_star, q2_star)`.
pub fn mixed_equilibrium_causal(
    problem: &DecisionProblem,
    q1_star: f64,
    q2_star: f64,
) -> Result<MixedEquilibrium, SimError> {
    check_probability("P(S2|A1)", q1_star)?;
    check_probability("P(S2|A2)", q2_star)?;
    let advantage = |s: f64| {
        let (e1, e2) = problem.causal(s);
        e2 - e1
    };
    if advantage(0.0) == 0.0 && advantage(1.0) == 0.0 {
        return Err(SimError::NoMixedEquilibrium(
            "acts tie at every state probability".to_string(),
        ));
    }
    let s2_star = bisect(advantage, 0.0, 1.0, BISECTION_TOLERANCE).ok_or_else(|| {
        SimError::NoMixedEquilibrium("one act is causally better at every P(S2)".to_string())
    })?;
    let marginal = |p: f64| q1_star * (1.0 - p) + q2_star * p - s2_star;
    let p_star = bisect(marginal, 0.0, 1.0, BISECTION_TOLERANCE).ok_or_else(|| {
        SimError::NoMixedEquilibrium(format!(
            "P(S2) = {s2_star} is outside the range reachable from conditionals ({q1_star}, {q2_star})"
        ))
    })?;
    Ok(MixedEquilibrium {
        s2_star,
        p_star,
        q1_star,
        q2_star,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkyrmsOutcome {
    pub p_star: f64,
    pub q1: f64,
    pub q2: f64,
    /// `EU(A2) - EU(A1)` in utils at `p_star`.
    pub residual: f64,
    /// Where the integrated trajectory stopped, before root polishing.
    pub integrated_p: f64,
    pub converged: bool,
    pub time: f64,
}

/// Integrates the coupled one-dimensional field from `p0` and polishes the
/// resting point by bisection on `EU(A2) - EU(A1)`.
pub fn skyrms_equilibrium(
    problem: &DecisionProblem,
    rule: &AdaptiveRule,
    curves: &CouplingCurves,
    p0: f64,
    controls: &Controls,
) -> Result<SkyrmsOutcome, SimError> {
    curves.validate()?;
    controls.validate()?;
    check_probability("P(A2)", p0)?;
    let rate = |p: f64| coupled_rate(p, problem, rule, curves);

    let mut p = p0;
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut converged = rate(p).abs() <= controls.eps_rate;
    while !converged && t < controls.max_time {
        let t_next = ((steps + 1) as f64 * controls.dt).min(controls.max_time);
        let h = t_next - t;
        let k1 = rate(p);
        let k2 = rate(p + h / 2.0 * k1);
        let k3 = rate(p + h / 2.0 * k2);
        let k4 = rate(p + h * k3);
        let next = p + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !next.is_finite() {
            return Err(SimError::NumericalBlowup {
                last_good: super::Sample {
                    t,
                    state: crate::dynamics::DeliberationState {
                        p,
                        q1: curves.conditionals(p).0,
                        q2: curves.conditionals(p).1,
                    },
                    eu1: f64::NAN,
                    eu2: f64::NAN,
                },
            });
        }
        p = next.clamp(0.0, 1.0);
        t = t_next;
        steps += 1;
        converged = rate(p).abs() <= controls.eps_rate;
    }

    let advantage = |p: f64| {
        let (q1, q2) = curves.conditionals(p);
        let (e1, e2) = problem.evidential(q1, q2);
        e2 - e1
    };
    let p_star = polish_root(&advantage, p).unwrap_or(p);
    let (q1, q2) = curves.conditionals(p_star);
    Ok(SkyrmsOutcome {
        p_star,
        q1,
        q2,
        residual: advantage(p_star),
        integrated_p: p,
        converged,
        time: t,
    })
}

/// Nearest sign change of `f` around `p`, bisected to adjacent floats.
fn polish_root(f: &impl Fn(f64) -> f64, p: f64) -> Option<f64> {
    let mut width = 1e-9;
    while width <= 1.0 {
        let lo = (p - width).max(0.0);
        let hi = (p + width).min(1.0);
        if f(lo).signum() != f(hi).signum() || f(lo) == 0.0 || f(hi) == 0.0 {
            let root = bisect(f, lo, hi, 0.0)?;
            // Report whichever neighbouring float has the smaller residual.
            let below = root.next_down().max(lo);
            let above = root.next_up().min(hi);
            return [root, below, above]
                .into_iter()
                .min_by(|a, b| f(*a).abs().partial_cmp(&f(*b).abs()).unwrap());
        }
        width *= 2.0;
    }
    None
}
