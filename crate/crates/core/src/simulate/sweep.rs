use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{integrate, Classification, Controls, SimError};
use crate::dynamics::{DeliberationState, DynamicsConfig};
use crate::geometry::{indifference_plane, predicted_endpoint, Prediction};
use crate::problem::DecisionProblem;

/// Cell counts along each axis of the cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub n_p: usize,
    pub n_q1: usize,
    pub n_q2: usize,
}

impl Grid {
    pub fn cube(n: usize) -> Self {
        Grid {
            n_p: n,
            n_q1: n,
            n_q2: n,
        }
    }
}

fn centers(n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| (i as f64 + 0.5) / n as f64)
}

/// Cell centres of an interior grid, `p` slowest and `q2` fastest.
pub fn grid_starts(grid: &Grid) -> Result<Vec<DeliberationState>, SimError> {
    if grid.n_p < 2 || grid.n_q1 < 2 || grid.n_q2 < 2 {
        return Err(SimError::InvalidControls(format!(
            "grid dimensions must be at least 2, got {}x{}x{}",
            grid.n_p, grid.n_q1, grid.n_q2
        )));
    }
    let mut out = Vec::with_capacity(grid.n_p * grid.n_q1 * grid.n_q2);
    for p in centers(grid.n_p) {
        for q1 in centers(grid.n_q1) {
            for q2 in centers(grid.n_q2) {
                out.push(DeliberationState { p, q1, q2 });
            }
        }
    }
    Ok(out)
}

/// Starts lying exactly on the indifference plane: one per `(p, q1)` pair
/// whose solved `q2` falls inside `[0, 1]`.
pub fn on_plane_starts(
    problem: &DecisionProblem,
    p_values: &[f64],
    q1_values: &[f64],
) -> Vec<DeliberationState> {
    let Some(ip) = indifference_plane(problem).as_plane().copied() else {
        return Vec::new();
    };
    let plane = ip.plane();
    let mut out = Vec::new();
    for &p in p_values {
        for &q1 in q1_values {
            if plane.beta == 0.0 {
                continue;
            }
            let q2 = (plane.gamma - plane.alpha * q1) / plane.beta;
            if (0.0..=1.0).contains(&q2) {
                out.push(DeliberationState { p, q1, q2 });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub initial: DeliberationState,
    pub classification: Classification,
    pub endpoint: DeliberationState,
    pub plane_crossings: usize,
    pub max_invariant_drift: f64,
    pub prediction: Option<Prediction>,
    /// `None` where no endpoint theorem applies.
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Fraction(f64),
    NotApplicable,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub pure_a1: usize,
    pub pure_a2: usize,
    pub mixed: usize,
    pub non_converged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub cells: Vec<CellResult>,
    pub agreement: Agreement,
    pub counts: ClassCounts,
    /// Indices into `cells` that disagree with the prediction.
    pub mismatches: Vec<usize>,
}

/// Integrates every cell of an interior grid and compares each endpoint with
/// the shortest-path prediction.
pub fn basin_sweep(
    problem: &DecisionProblem,
    config: &DynamicsConfig,
    grid: &Grid,
    controls: &Controls,
) -> Result<SweepReport, SimError> {
    sweep_starts(problem, config, &grid_starts(grid)?, controls)
}

/// Runs each start independently, in parallel, collecting results in input
/// order.
pub fn sweep_starts(
    problem: &DecisionProblem,
    config: &DynamicsConfig,
    starts: &[DeliberationState],
    controls: &Controls,
) -> Result<SweepReport, SimError> {
    let controls = Controls {
        sample_stride: 0,
        ..*controls
    };
    let cells = starts
        .par_iter()
        .map(|start| run_cell(problem, config, start, &controls))
        .collect::<Result<Vec<_>, _>>()?;

    let mut counts = ClassCounts::default();
    for cell in &cells {
        match cell.classification {
            Classification::PureA1 => counts.pure_a1 += 1,
            Classification::PureA2 => counts.pure_a2 += 1,
            Classification::MixedEquilibrium { .. } => counts.mixed += 1,
            Classification::NonConverged => counts.non_converged += 1,
        }
    }
    let judged: Vec<bool> = cells.iter().filter_map(|c| c.agree).collect();
    let agreement = if judged.is_empty() {
        Agreement::NotApplicable
    } else {
        Agreement::Fraction(judged.iter().filter(|&&a| a).count() as f64 / judged.len() as f64)
    };
    let mismatches = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.agree == Some(false))
        .map(|(i, _)| i)
        .collect();
    Ok(SweepReport {
        cells,
        agreement,
        counts,
        mismatches,
    })
}

fn run_cell(
    problem: &DecisionProblem,
    config: &DynamicsConfig,
    start: &DeliberationState,
    controls: &Controls,
) -> Result<CellResult, SimError> {
    let traj = integrate(problem, start, config, controls)?;
    let prediction = predicted_endpoint(problem, start).ok();
    let agree = prediction.and_then(|pred| {
        let target = pred.p_final?;
        Some(
            traj.classification.is_converged()
                && (traj.endpoint.p - target).abs() <= controls.pure_band,
        )
    });
    Ok(CellResult {
        initial: *start,
        classification: traj.classification,
        endpoint: traj.endpoint,
        plane_crossings: traj.plane_crossings(),
        max_invariant_drift: traj.diagnostics.max_invariant_drift,
        prediction,
        agree,
    })
}
