use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{integrate, Controls, SimError};
use crate::dynamics::{DeliberationState, DynamicsConfig, IndependenceVariant};
use crate::geometry::{
    indifference_plane, manifold_relation, ManifoldRelation, ON_PLANE_TOLERANCE,
};
use crate::problem::DecisionProblem;

/// Log-spaced relative speeds `kappa / k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaRange {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl LambdaRange {
    pub fn values(&self) -> Vec<f64> {
        if self.n <= 1 || self.min == self.max {
            return vec![self.min];
        }
        let (lo, hi) = (self.min.ln(), self.max.ln());
        (0..self.n)
            .map(|i| (lo + (hi - lo) * i as f64 / (self.n - 1) as f64).exp())
            .collect()
    }

    fn validate(&self) -> Result<(), SimError> {
        let ok = self.min.is_finite()
            && self.max.is_finite()
            && self.min > 0.0
            && self.max >= self.min
            && self.n >= 1;
        if ok {
            Ok(())
        } else {
            Err(SimError::InvalidControls(format!(
                "lambda range must satisfy 0 < min <= max with n >= 1, got {self:?}"
            )))
        }
    }
}

impl Default for LambdaRange {
    fn default() -> Self {
        LambdaRange {
            min: 0.1,
            max: 10.0,
            n: 21,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub initial: DeliberationState,
    pub config: DynamicsConfig,
    pub lambda: f64,
    pub endpoint: DeliberationState,
    /// `|p_final - target_p|`.
    pub endpoint_error: f64,
    /// Whether the start already lay on the indifference plane.
    pub on_plane: bool,
}

const BISECTION_STEPS: usize = 60;

/// Largest `dt * rate` used when the search raises `kappa`.
const MAX_STEP_RATE: f64 = 0.5;

/// Searches relative speeds for trajectories that end at `target_p` on the
/// manifold.
///
/// Every `(variant, start)` pair is integrated at each grid value of lambda.
/// Wherever the endpoint error changes sign between neighbouring converged
/// runs, lambda is refined by bisection in log space. At most one finding,
/// the most accurate, is kept per pair. The step size is reduced when needed
/// so that `dt * max(k, kappa)` stays below 0.5.
#[allow(clippy::too_many_arguments)]
pub fn reconciliation_search(
    problem: &DecisionProblem,
    target_p: f64,
    variants: &[IndependenceVariant],
    lambdas: &LambdaRange,
    starts: &[DeliberationState],
    base: &DynamicsConfig,
    controls: &Controls,
    tol: f64,
) -> Result<Vec<Finding>, SimError> {
    crate::problem::check_probability("target P(A2)", target_p)?;
    lambdas.validate()?;
    controls.validate()?;
    base.validate()?;
    let controls = Controls {
        sample_stride: 0,
        ..*controls
    };
    let plane = indifference_plane(problem);
    let grid = lambdas.values();

    let pairs: Vec<(IndependenceVariant, DeliberationState)> = variants
        .iter()
        .flat_map(|v| starts.iter().map(move |s| (*v, *s)))
        .collect();
    let found = pairs
        .par_iter()
        .map(|(variant, start)| {
            let on_plane = plane.as_plane().is_some_and(|ip| {
                ip.signed_residual(start.q1, start.q2).abs() <= ON_PLANE_TOLERANCE
            });
            let search = PairSearch {
                problem,
                base: base.with_independence(*variant),
                controls: &controls,
                start: *start,
                target_p,
                tol,
                on_plane,
            };
            search.run(&grid)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(found.into_iter().flatten().collect())
}

struct PairSearch<'a> {
    problem: &'a DecisionProblem,
    base: DynamicsConfig,
    controls: &'a Controls,
    start: DeliberationState,
    target_p: f64,
    tol: f64,
    on_plane: bool,
}

/// One evaluated lambda: the signed error is `None` for non-converged runs.
struct Probe {
    lambda: f64,
    signed_error: Option<f64>,
    endpoint: DeliberationState,
}

impl PairSearch<'_> {
    fn probe(&self, lambda: f64) -> Result<Probe, SimError> {
        let config = self.base.with_relative_speed(lambda);
        let fastest = config.kappa.max(config.adaptive_rule.k());
        let controls = Controls {
            dt: self.controls.dt.min(MAX_STEP_RATE / fastest),
            ..*self.controls
        };
        let traj = integrate(self.problem, &self.start, &config, &controls)?;
        let signed_error = traj
            .classification
            .is_converged()
            .then_some(traj.endpoint.p - self.target_p);
        Ok(Probe {
            lambda,
            signed_error,
            endpoint: traj.endpoint,
        })
    }

    fn finding(&self, probe: &Probe) -> Option<Finding> {
        let err = probe.signed_error?.abs();
        (err <= self.tol && probe.endpoint.gap().abs() <= self.controls.eps_gap).then(|| Finding {
            initial: self.start,
            config: self.base.with_relative_speed(probe.lambda),
            lambda: probe.lambda,
            endpoint: probe.endpoint,
            endpoint_error: err,
            on_plane: self.on_plane,
        })
    }

    fn run(&self, grid: &[f64]) -> Result<Option<Finding>, SimError> {
        let probes = grid
            .iter()
            .map(|&l| self.probe(l))
            .collect::<Result<Vec<_>, _>>()?;
        let mut candidates: Vec<Finding> = probes.iter().filter_map(|p| self.finding(p)).collect();

        for pair in probes.windows(2) {
            let (Some(e0), Some(e1)) = (pair[0].signed_error, pair[1].signed_error) else {
                continue;
            };
            if e0.signum() == e1.signum() {
                continue;
            }
            let (mut lo, mut hi) = (pair[0].lambda.ln(), pair[1].lambda.ln());
            let mut e_lo = e0;
            for _ in 0..BISECTION_STEPS {
                let mid = self.probe((0.5 * (lo + hi)).exp())?;
                let Some(e_mid) = mid.signed_error else {
                    break;
                };
                if let Some(f) = self.finding(&mid) {
                    candidates.push(f);
                    if e_mid.abs() <= 0.1 * self.tol {
                        break;
                    }
                }
                if e_mid.signum() == e_lo.signum() {
                    lo = mid.lambda.ln();
                    e_lo = e_mid;
                } else {
                    hi = mid.lambda.ln();
                }
            }
        }
        Ok(candidates
            .into_iter()
            .min_by(|a, b| a.endpoint_error.total_cmp(&b.endpoint_error)))
    }
}

/// Starts whose independence dynamics lead exactly to the point where the
/// indifference plane meets the manifold.
///
/// The variant conserves `w*q1 + (1-w)*q2`; each `(p, x)` pair fixes the free
/// coordinate to `x` and solves for the other. Empty unless the plane
/// intersects the manifold.
pub fn line_targeted_starts(
    problem: &DecisionProblem,
    variant: &IndependenceVariant,
    p_values: &[f64],
    free_values: &[f64],
) -> Vec<DeliberationState> {
    let Some(ip) = indifference_plane(problem).as_plane().copied() else {
        return Vec::new();
    };
    let ManifoldRelation::Intersecting { intersection_q, .. } = manifold_relation(&ip.plane())
    else {
        return Vec::new();
    };
    let w = variant.q1_weight();
    let mut out = Vec::new();
    for &p in p_values {
        for &x in free_values {
            let (q1, q2) = if w < 1.0 {
                (x, (intersection_q - w * x) / (1.0 - w))
            } else {
                (intersection_q, x)
            };
            if (0.0..=1.0).contains(&q1) && (0.0..=1.0).contains(&q2) {
                out.push(DeliberationState { p, q1, q2 });
            }
        }
    }
    out
}
