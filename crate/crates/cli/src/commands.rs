use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, Context};
use deliberation_core::geometry::{
    manifold_relation, plane_bounds_check, reconciliation_verdict, BoundsCheck,
};
use deliberation_core::io::{parse_config, parse_problem, write_sweep_csv, write_trajectory_csv};
use deliberation_core::simulate::{
    basin_sweep, grid_starts, line_targeted_starts, mixed_equilibrium_causal, on_plane_starts,
    reconciliation_search, Agreement, Grid, LambdaRange, REPORTED_RATIFIABLE_MIX,
};
use deliberation_core::{
    indifference_plane, integrate, Anchor, Controls, DecisionProblem, DeliberationState,
    DynamicsConfig, Form, IndependenceVariant, Indifference, SimError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::output::{
    to_json, CmdResult, Failure, OutDir, RunManifest, EXIT_NOT_CONVERGED, EXIT_THEOREM_VIOLATION,
    MANIFEST,
};
use crate::{AnalyzeArgs, Common, ControlArgs, SearchArgs, SimulateArgs, SweepArgs};

const RATIFIABLE_MIX_NOTE: &str = "reference value for the ratifiable mix from the literature; \
    it comes from an update rule that is not specified precisely enough to reproduce, and is \
    reported alongside the computed fixed point rather than reconciled with it";

fn load_problem(path: &Path) -> Result<DecisionProblem, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::usage)?;
    parse_problem(&text)
        .with_context(|| format!("in {}", path.display()))
        .map_err(Failure::usage)
}

fn load_config(path: Option<&Path>) -> Result<DynamicsConfig, Failure> {
    let Some(path) = path else {
        return Ok(DynamicsConfig::default());
    };
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::usage)?;
    parse_config(&text)
        .with_context(|| format!("in {}", path.display()))
        .map_err(Failure::usage)
}

fn controls(args: &ControlArgs, sample_stride: usize) -> Result<Controls, Failure> {
    let c = Controls {
        dt: args.dt,
        max_time: args.max_time,
        eps_rate: args.eps_rate,
        eps_gap: args.eps_gap,
        pure_band: args.pure_band,
        sample_stride,
        ..Controls::default()
    };
    c.validate().map_err(Failure::usage)?;
    Ok(c)
}

/// Maps core errors to exit codes: bad inputs are usage errors, numerical
/// failure counts as non-convergence.
fn sim_failure(e: SimError) -> Failure {
    let code = match e {
        SimError::NumericalBlowup { .. } => EXIT_NOT_CONVERGED,
        _ => crate::output::EXIT_USAGE,
    };
    Failure {
        code,
        error: e.into(),
    }
}

fn manifest<'a, C: Serialize>(
    command: &'static str,
    common: &'a Common,
    config: Option<&'a DynamicsConfig>,
    controls: Option<&'a Controls>,
    parameters: C,
) -> RunManifest<'a, C> {
    RunManifest {
        command,
        problem_path: &common.problem,
        config_path: common.config.as_deref(),
        config,
        controls,
        output_dir: &common.out,
        seed: common.seed,
        parameters,
        version: env!("CARGO_PKG_VERSION"),
    }
}

#[derive(Serialize)]
struct PlaneOut {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

pub fn analyze(args: &AnalyzeArgs) -> CmdResult {
    let problem = load_problem(&args.common.problem)?;
    if !(0.5..=1.0).contains(&args.reliability) {
        return Err(Failure::usage(anyhow!(
            "reliability must lie in [0.5, 1], got {}",
            args.reliability
        )));
    }
    let out = OutDir::prepare(
        &args.common.out,
        &["analysis.json", MANIFEST],
        args.common.force,
    )?;

    let indifference = indifference_plane(&problem);
    let (kind, plane, relation) = match indifference {
        Indifference::Plane(ip) => {
            let p = ip.plane();
            (
                "plane",
                Some(PlaneOut {
                    alpha: p.alpha,
                    beta: p.beta,
                    gamma: p.gamma,
                }),
                Some(manifold_relation(&p)),
            )
        }
        Indifference::Everywhere => ("everywhere", None, None),
        Indifference::Nowhere => ("nowhere", None, None),
    };
    let bounds: Option<BoundsCheck> = plane_bounds_check(&problem).ok();
    let (q1_star, q2_star) = (1.0 - args.reliability, args.reliability);
    let mixed = match mixed_equilibrium_causal(&problem, q1_star, q2_star) {
        Ok(eq) => json!({
            "s2_star": eq.s2_star,
            "p_star": eq.p_star,
            "q1_star": eq.q1_star,
            "q2_star": eq.q2_star,
        }),
        Err(e) => json!({ "q1_star": q1_star, "q2_star": q2_star, "error": e.to_string() }),
    };
    let report = json!({
        "form": problem.form(),
        "indifference": kind,
        "plane": plane,
        "relation": relation,
        "verdict": reconciliation_verdict(&problem),
        "bounds": bounds,
        "bounds_ok": bounds.map(|b| b.ok),
        "mixed_equilibrium": mixed,
        "reported_ratifiable_mix": {
            "value": REPORTED_RATIFIABLE_MIX,
            "note": RATIFIABLE_MIX_NOTE,
        },
    });
    let text = to_json(&report)?;
    // A closed pipe on stdout is not an error; the file copy is authoritative.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    out.write_bytes("analysis.json", (text + "\n").as_bytes())?;
    out.write_json(
        MANIFEST,
        &manifest(
            "analyze",
            &args.common,
            None,
            None,
            json!({ "reliability": args.reliability }),
        ),
    )?;
    Ok(0)
}

pub fn simulate(args: &SimulateArgs) -> CmdResult {
    let problem = load_problem(&args.common.problem)?;
    let config = load_config(args.common.config.as_deref())?;
    let controls = controls(&args.controls, args.stride)?;
    let initial = DeliberationState::new(args.p, args.q1, args.q2).map_err(Failure::usage)?;
    let out = OutDir::prepare(
        &args.common.out,
        &["trajectory.csv", "events.json", "summary.json", MANIFEST],
        args.common.force,
    )?;
    let traj = integrate(&problem, &initial, &config, &controls).map_err(sim_failure)?;

    let mut csv = Vec::new();
    write_trajectory_csv(&mut csv, &problem, &traj).context("formatting trajectory")?;
    out.write_bytes("trajectory.csv", &csv)?;
    out.write_json("events.json", &traj.events)?;
    out.write_json(
        "summary.json",
        &json!({
            "classification": traj.classification,
            "endpoint": traj.endpoint,
            "plane_crossings": traj.plane_crossings(),
            "diagnostics": traj.diagnostics,
        }),
    )?;
    out.write_json(
        MANIFEST,
        &manifest(
            "simulate",
            &args.common,
            Some(&config),
            Some(&controls),
            json!({ "initial": initial }),
        ),
    )?;
    eprintln!(
        "{} at p = {} after t = {}",
        traj.classification.label(),
        traj.endpoint.p,
        traj.diagnostics.final_time
    );
    Ok(if traj.classification.is_converged() {
        0
    } else {
        EXIT_NOT_CONVERGED
    })
}

pub fn sweep(args: &SweepArgs) -> CmdResult {
    let problem = load_problem(&args.common.problem)?;
    let config = load_config(args.common.config.as_deref())?;
    let controls = controls(&args.controls, 0)?;
    let grid = Grid {
        n_p: args.n_p.unwrap_or(args.grid),
        n_q1: args.n_q1.unwrap_or(args.grid),
        n_q2: args.n_q2.unwrap_or(args.grid),
    };
    grid_starts(&grid).map_err(Failure::usage)?;
    let out = OutDir::prepare(
        &args.common.out,
        &["sweep.csv", "summary.json", MANIFEST],
        args.common.force,
    )?;
    let report = basin_sweep(&problem, &config, &grid, &controls).map_err(sim_failure)?;

    let mut csv = Vec::new();
    write_sweep_csv(&mut csv, &report).context("formatting sweep")?;
    out.write_bytes("sweep.csv", &csv)?;
    let crossings: usize = report.cells.iter().map(|c| c.plane_crossings).sum();
    out.write_json(
        "summary.json",
        &json!({
            "agreement": report.agreement,
            "counts": report.counts,
            "cells": report.cells.len(),
            "plane_crossings": crossings,
            "mismatches": report.mismatches.iter().map(|&i| report.cells[i].initial).collect::<Vec<_>>(),
        }),
    )?;
    out.write_json(
        MANIFEST,
        &manifest(
            "sweep",
            &args.common,
            Some(&config),
            Some(&controls),
            json!({ "grid": grid }),
        ),
    )?;

    let theorem_applies = matches!(
        problem.form(),
        Form::Instability { .. } | Form::Newcomb { .. }
    ) && config.independence == IndependenceVariant::ShortestPath;
    match report.agreement {
        Agreement::Fraction(f) => eprintln!("agreement {f}"),
        Agreement::NotApplicable => eprintln!("agreement not applicable"),
    }
    Ok(match report.agreement {
        Agreement::Fraction(f) if theorem_applies && f < 1.0 => EXIT_THEOREM_VIOLATION,
        _ => 0,
    })
}

fn parse_variant(text: &str) -> Result<IndependenceVariant, Failure> {
    let v = match text {
        "shortest_path" => IndependenceVariant::ShortestPath,
        "one_sided_a1" => IndependenceVariant::OneSided { anchor: Anchor::A1 },
        "one_sided_a2" | "one_sided" => IndependenceVariant::OneSided { anchor: Anchor::A2 },
        other => match other.strip_prefix("weighted:").map(str::parse::<f64>) {
            Some(Ok(w)) if (0.0..=1.0).contains(&w) => IndependenceVariant::Weighted { w },
            _ => return Err(Failure::usage(anyhow!("unknown variant {other:?}"))),
        },
    };
    Ok(v)
}

fn axis(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect()
}

fn starts_for(
    spec: &str,
    problem: &DecisionProblem,
    variant: &IndependenceVariant,
    seed: u64,
) -> Result<Vec<DeliberationState>, Failure> {
    let bad = || {
        Failure::usage(anyhow!(
            "start set must be grid:N, random:N, targeted:N or on-plane:N, got {spec:?}"
        ))
    };
    let (kind, n) = spec.split_once(':').ok_or_else(bad)?;
    let n: usize = n.parse().map_err(|_| bad())?;
    let starts = match kind {
        "grid" => grid_starts(&Grid::cube(n)).map_err(Failure::usage)?,
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| DeliberationState {
                    p: rng.random(),
                    q1: rng.random(),
                    q2: rng.random(),
                })
                .collect()
        }
        "targeted" => line_targeted_starts(problem, variant, &axis(n), &axis(n)),
        "on-plane" => on_plane_starts(problem, &axis(n), &axis(n)),
        _ => return Err(bad()),
    };
    Ok(starts)
}

#[derive(Serialize)]
struct FindingOut {
    variant: String,
    initial: DeliberationState,
    lambda: f64,
    kappa: f64,
    endpoint: DeliberationState,
    endpoint_error: f64,
    on_plane: bool,
}

pub fn search(args: &SearchArgs) -> CmdResult {
    let problem = load_problem(&args.common.problem)?;
    let config = load_config(args.common.config.as_deref())?;
    let controls = controls(&args.controls, 0)?;
    if !(0.0..=1.0).contains(&args.target) {
        return Err(Failure::usage(anyhow!(
            "target must lie in [0, 1], got {}",
            args.target
        )));
    }
    let variants = args
        .variants
        .iter()
        .map(|v| parse_variant(v))
        .collect::<Result<Vec<_>, _>>()?;
    let lambdas = LambdaRange {
        min: args.lambda_min,
        max: args.lambda_max,
        n: args.lambda_n,
    };
    let out = OutDir::prepare(
        &args.common.out,
        &["findings.json", MANIFEST],
        args.common.force,
    )?;

    let mut findings = Vec::new();
    let mut tried = 0;
    for variant in &variants {
        let starts = starts_for(&args.starts, &problem, variant, args.common.seed)?;
        tried += starts.len();
        let found = reconciliation_search(
            &problem,
            args.target,
            &[*variant],
            &lambdas,
            &starts,
            &config,
            &controls,
            args.tol,
        )
        .map_err(sim_failure)?;
        findings.extend(found.into_iter().map(|f| FindingOut {
            variant: variant.label(),
            initial: f.initial,
            lambda: f.lambda,
            kappa: f.config.kappa,
            endpoint: f.endpoint,
            endpoint_error: f.endpoint_error,
            on_plane: f.on_plane,
        }));
    }
    eprintln!("{} findings from {tried} starts", findings.len());
    out.write_json(
        "findings.json",
        &json!({
            "target_p": args.target,
            "tol": args.tol,
            "verdict": reconciliation_verdict(&problem),
            "starts_tried": tried,
            "findings": findings,
        }),
    )?;
    out.write_json(
        MANIFEST,
        &manifest(
            "search",
            &args.common,
            Some(&config),
            Some(&controls),
            json!({
                "target": args.target,
                "variants": args.variants,
                "lambda": lambdas,
                "starts": args.starts,
                "tol": args.tol,
            }),
        ),
    )?;
    Ok(0)
}
