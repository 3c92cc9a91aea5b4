//! Fixed-step trajectory integration through the deliberation cube.

mod equilibrium;
mod search;
mod sweep;

pub use equilibrium::{
    mixed_equilibrium_causal, skyrms_equilibrium, MixedEquilibrium, SkyrmsOutcome,
    REPORTED_RATIFIABLE_MIX,
};
pub use search::{line_targeted_starts, reconciliation_search, Finding, LambdaRange};
pub use sweep::{
    basin_sweep, grid_starts, on_plane_starts, sweep_starts, Agreement, CellResult, ClassCounts,
    Grid, SweepReport,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{combined_field, DeliberationState, DynamicsConfig, DynamicsError};
use crate::geometry::{indifference_plane, IndifferencePlane, Side, ON_PLANE_TOLERANCE};
use crate::problem::{DecisionProblem, ProblemError};

/// Clamping larger than this in a single step is reported as an event.
pub const CLAMP_WARNING_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("invalid controls: {0}")]
    InvalidControls(String),
    #[error("state became non-finite after t = {}", last_good.t)]
    NumericalBlowup { last_good: Sample },
    #[error("no mixed equilibrium: {0}")]
    NoMixedEquilibrium(String),
}

/// Integration and termination settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Controls {
    pub dt: f64,
    pub max_time: f64,
    /// Converged needs `|dp/dt| <= eps_rate` ...
    pub eps_rate: f64,
    /// ... and `|q2 - q1| <= eps_gap`.
    pub eps_gap: f64,
    /// Time resolution of refined plane crossings.
    pub eps_plane: f64,
    /// Endpoints with `p <= band` or `p >= 1 - band` count as pure acts.
    pub pure_band: f64,
    /// Keep every n-th step; 0 keeps only the first and last samples.
    pub sample_stride: usize,
    pub stop_at_convergence: bool,
}

impl Default for Controls {
    fn default() -> Self {
        Controls {
            dt: 0.05,
            max_time: 1e4,
            eps_rate: 1e-8,
            eps_gap: 1e-6,
            eps_plane: 1e-9,
            pure_band: 1e-3,
            sample_stride: 1,
            stop_at_convergence: true,
        }
    }
}

impl Controls {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: &str| Err(SimError::InvalidControls(msg.to_string()));
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("dt must be positive");
        }
        if !(self.max_time.is_finite() && self.max_time >= 0.0) {
            return bad("max_time must be non-negative");
        }
        if !(self.eps_rate >= 0.0 && self.eps_gap >= 0.0 && self.eps_plane > 0.0) {
            return bad("tolerances must be non-negative");
        }
        if !(0.0..0.5).contains(&self.pure_band) {
            return bad("pure_band must lie in [0, 0.5)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub state: DeliberationState,
    pub eu1: f64,
    pub eu2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    PlaneCrossing { from: Side, to: Side },
    ReachedManifold,
    Converged,
    MaxTimeExceeded,
    ClampExceeded { magnitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    PureA1,
    PureA2,
    MixedEquilibrium { p: f64 },
    NonConverged,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::PureA1 => "pure_a1",
            Classification::PureA2 => "pure_a2",
            Classification::MixedEquilibrium { .. } => "mixed",
            Classification::NonConverged => "non_converged",
        }
    }

    pub fn is_converged(&self) -> bool {
        !matches!(self, Classification::NonConverged)
    }
}

/// Bookkeeping gathered along a run, independent of sample recording.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub steps: usize,
    pub final_time: f64,
    /// Largest single-step clamp back into the cube.
    pub max_clamp: f64,
    /// Largest deviation of the independence variant's conserved combination.
    pub max_invariant_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
    pub endpoint: DeliberationState,
    pub classification: Classification,
    pub diagnostics: Diagnostics,
}

impl Trajectory {
    pub fn plane_crossings(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::PlaneCrossing { .. }))
            .count()
    }
}

struct Stepper<'a> {
    problem: &'a DecisionProblem,
    config: &'a DynamicsConfig,
}

impl Stepper<'_> {
    fn rates(&self, y: [f64; 3]) -> [f64; 3] {
        let r = combined_field(&DeliberationState::from_array(y), self.problem, self.config);
        [r.dp, r.dq1, r.dq2]
    }

    /// One classical Runge-Kutta step.
    fn step(&self, y: [f64; 3], h: f64) -> [f64; 3] {
        let shift = |k: [f64; 3], s: f64| [y[0] + s * k[0], y[1] + s * k[1], y[2] + s * k[2]];
        let k1 = self.rates(y);
        let k2 = self.rates(shift(k1, h / 2.0));
        let k3 = self.rates(shift(k2, h / 2.0));
        let k4 = self.rates(shift(k3, h));
        std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
    }
}

fn clamp_unit(y: &mut [f64; 3]) -> f64 {
    let mut moved: f64 = 0.0;
    for v in y.iter_mut() {
        let c = v.clamp(0.0, 1.0);
        moved = moved.max((c - *v).abs());
        *v = c;
    }
    moved
}

fn strict_side(plane: Option<&IndifferencePlane>, y: &[f64; 3]) -> Option<Side> {
    match plane?.side(y[1], y[2], ON_PLANE_TOLERANCE) {
        Side::On => None,
        s => Some(s),
    }
}

pub(crate) fn is_converged(
    problem: &DecisionProblem,
    config: &DynamicsConfig,
    controls: &Controls,
    state: &DeliberationState,
) -> bool {
    let rates = combined_field(state, problem, config);
    rates.dp.abs() <= controls.eps_rate && state.gap().abs() <= controls.eps_gap
}

fn classify(state: &DeliberationState, converged: bool, band: f64) -> Classification {
    if !converged {
        Classification::NonConverged
    } else if state.p <= band {
        Classification::PureA1
    } else if state.p >= 1.0 - band {
        Classification::PureA2
    } else {
        Classification::MixedEquilibrium { p: state.p }
    }
}

fn sample(problem: &DecisionProblem, t: f64, y: [f64; 3]) -> Sample {
    let (eu1, eu2) = problem.evidential(y[1], y[2]);
    Sample {
        t,
        state: DeliberationState::from_array(y),
        eu1,
        eu2,
    }
}

/// Integrates the combined field from `initial` with fixed-step RK4.
///
/// Each step is clamped back into the closed cube. A sign change of the
/// indifference residual between steps is refined by bisection on the
/// sub-step length and reported as a [`EventKind::PlaneCrossing`].
pub fn integrate(
    problem: &DecisionProblem,
    initial: &DeliberationState,
    config: &DynamicsConfig,
    controls: &Controls,
) -> Result<Trajectory, SimError> {
    config.validate()?;
    controls.validate()?;
    let initial = DeliberationState::new(initial.p, initial.q1, initial.q2)?;

    let indifference = indifference_plane(problem);
    let plane = indifference.as_plane();
    let stepper = Stepper { problem, config };
    let variant = config.independence;
    let invariant0 = variant.target(initial.q1, initial.q2);

    let mut y = initial.as_array();
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut samples = Vec::new();
    let mut events = Vec::new();
    let mut max_clamp: f64 = 0.0;
    let mut max_drift: f64 = 0.0;
    let mut side = strict_side(plane, &y);
    let mut on_manifold = false;
    let mut converged = false;
    let mut last = sample(problem, t, y);
    samples.push(last);

    let mut check = |t: f64, y: &[f64; 3], events: &mut Vec<Event>| -> bool {
        let state = DeliberationState::from_array(*y);
        if !on_manifold && state.gap().abs() <= controls.eps_gap {
            on_manifold = true;
            events.push(Event {
                t,
                kind: EventKind::ReachedManifold,
            });
        }
        let now = is_converged(problem, config, controls, &state);
        if now && !converged {
            events.push(Event {
                t,
                kind: EventKind::Converged,
            });
        }
        converged |= now;
        now
    };

    let mut converged_now = check(t, &y, &mut events);
    while !(converged_now && controls.stop_at_convergence) && t < controls.max_time {
        let t_next = ((steps + 1) as f64 * controls.dt).min(controls.max_time);
        let h = t_next - t;
        let mut next = stepper.step(y, h);
        if !next.iter().all(|v| v.is_finite()) {
            return Err(SimError::NumericalBlowup { last_good: last });
        }
        let clamp = clamp_unit(&mut next);
        max_clamp = max_clamp.max(clamp);
        if clamp > CLAMP_WARNING_THRESHOLD {
            events.push(Event {
                t: t_next,
                kind: EventKind::ClampExceeded { magnitude: clamp },
            });
        }

        let next_side = strict_side(plane, &next);
        if let (Some(plane), Some(from), Some(to)) = (plane, side, next_side) {
            if from != to {
                let tau = refine_crossing(&stepper, plane, y, h, controls.eps_plane);
                events.push(Event {
                    t: t + tau,
                    kind: EventKind::PlaneCrossing { from, to },
                });
            }
        }
        if next_side.is_some() {
            side = next_side;
        }

        max_drift = max_drift.max((variant.target(next[1], next[2]) - invariant0).abs());
        y = next;
        t = t_next;
        steps += 1;
        last = sample(problem, t, y);
        converged_now = check(t, &y, &mut events);
        if controls.sample_stride > 0 && steps.is_multiple_of(controls.sample_stride) {
            samples.push(last);
        }
    }
    if samples.last().map(|s| s.t) != Some(t) {
        samples.push(last);
    }
    if !converged_now {
        events.push(Event {
            t,
            kind: EventKind::MaxTimeExceeded,
        });
    }

    let endpoint = DeliberationState::from_array(y);
    Ok(Trajectory {
        samples,
        events,
        endpoint,
        classification: classify(&endpoint, converged_now, controls.pure_band),
        diagnostics: Diagnostics {
            steps,
            final_time: t,
            max_clamp,
            max_invariant_drift: max_drift,
        },
    })
}

/// Sub-step length in `(0, h]` at which the residual changes sign.
fn refine_crossing(
    stepper: &Stepper<'_>,
    plane: &IndifferencePlane,
    y: [f64; 3],
    h: f64,
    eps: f64,
) -> f64 {
    let residual = |tau: f64| {
        let z = stepper.step(y, tau);
        plane.signed_residual(z[1], z[2])
    };
    let start = plane.signed_residual(y[1], y[2]);
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..200 {
        if hi - lo <= eps {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if residual(mid).signum() == start.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
