//! JSON problem and config files, CSV trajectory and sweep tables.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    AdaptiveRule, Anchor, DynamicsConfig, IndependenceVariant, DEFAULT_ADAPTIVE_RATE,
};
use crate::geometry::{indifference_plane, Indifference};
use crate::problem::{DecisionProblem, Payoffs, ProblemError};
use crate::simulate::{SweepReport, Trajectory};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Formats like C's `%.12g`.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Rounds to 12 significant digits so that JSON output matches CSV output.
pub fn sig12(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig(x).parse().unwrap_or(x)
    } else {
        x
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProblemFile {
    acts: [String; 2],
    states: [String; 2],
    payoffs: Payoffs,
}

#[derive(Debug, Clone, Serialize)]
struct ProblemFileOut<'a> {
    acts: &'a [String; 2],
    states: &'a [String; 2],
    payoffs: &'a Payoffs,
    form: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
}

/// Parses a problem file; fields other than acts, states and payoffs are ignored.
pub fn parse_problem(text: &str) -> Result<DecisionProblem, IoError> {
    let file: ProblemFile = serde_json::from_str(text)?;
    Ok(DecisionProblem::new(file.payoffs, file.acts, file.states)?)
}

pub fn problem_to_json(problem: &DecisionProblem) -> String {
    let params = problem.form().params();
    let out = ProblemFileOut {
        acts: problem.acts(),
        states: problem.states(),
        payoffs: problem.payoffs(),
        form: problem.form().name(),
        a: params.map(|p| p.0),
        b: params.map(|p| p.1),
        c: params.map(|p| p.2),
    };
    serde_json::to_string_pretty(&out).expect("problem serializes")
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    adaptive_rule: Option<String>,
    k: Option<f64>,
    independence_variant: Option<String>,
    anchor: Option<String>,
    w: Option<f64>,
    kappa: Option<f64>,
    lambda: Option<f64>,
}

/// Parses a dynamics config.
///
/// Missing fields take their defaults. `kappa` and `lambda` are alternatives:
/// `lambda` sets `kappa = lambda * k`.
pub fn parse_config(text: &str) -> Result<DynamicsConfig, IoError> {
    let file: ConfigFile = serde_json::from_str(text)?;
    let bad = |msg: String| Err(IoError::Config(msg));
    let k = file.k.unwrap_or(DEFAULT_ADAPTIVE_RATE);
    let adaptive_rule = match file.adaptive_rule.as_deref().unwrap_or("sign_proportional") {
        "sign_proportional" => AdaptiveRule::SignProportional { k },
        "nash" => AdaptiveRule::Nash { k },
        "brown_von_neumann" => AdaptiveRule::BrownVonNeumann,
        other => return bad(format!("unknown adaptive_rule {other:?}")),
    };
    let anchor = match file.anchor.as_deref() {
        None | Some("A2") | Some("a2") => Anchor::A2,
        Some("A1") | Some("a1") => Anchor::A1,
        Some(other) => return bad(format!("unknown anchor {other:?}")),
    };
    let independence = match file
        .independence_variant
        .as_deref()
        .unwrap_or("shortest_path")
    {
        "shortest_path" => IndependenceVariant::ShortestPath,
        "one_sided" => IndependenceVariant::OneSided { anchor },
        "one_sided_a1" => IndependenceVariant::OneSided { anchor: Anchor::A1 },
        "one_sided_a2" => IndependenceVariant::OneSided { anchor: Anchor::A2 },
        "weighted" => match file.w {
            Some(w) => IndependenceVariant::Weighted { w },
            None => return bad("weighted variant needs w".to_string()),
        },
        other => return bad(format!("unknown independence_variant {other:?}")),
    };
    let mut config = DynamicsConfig::new(adaptive_rule, independence, DEFAULT_ADAPTIVE_RATE);
    match (file.kappa, file.lambda) {
        (Some(_), Some(_)) => return bad("give kappa or lambda, not both".to_string()),
        (Some(kappa), None) => config.kappa = kappa,
        (None, Some(lambda)) => config = config.with_relative_speed(lambda),
        (None, None) => config = config.with_relative_speed(1.0),
    }
    config
        .validate()
        .map_err(|e| IoError::Config(e.to_string()))?;
    Ok(config)
}

pub const TRAJECTORY_HEADER: &str = "t,p,q1,q2,eu1,eu2,plane_residual";
pub const SWEEP_HEADER: &str = "p0,q1_0,q2_0,classification,p_final,agree";

/// Writes the sampled trajectory. The residual is `EU(A1) - EU(A2)` on the
/// canonical plane scale; it is empty when no plane exists.
pub fn write_trajectory_csv<W: Write>(
    out: &mut W,
    problem: &DecisionProblem,
    trajectory: &Trajectory,
) -> io::Result<()> {
    let plane = match indifference_plane(problem) {
        Indifference::Plane(ip) => Some(ip),
        _ => None,
    };
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for s in &trajectory.samples {
        let residual = plane
            .map(|ip| fmt_sig(ip.signed_residual(s.state.q1, s.state.q2)))
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_sig(s.t),
            fmt_sig(s.state.p),
            fmt_sig(s.state.q1),
            fmt_sig(s.state.q2),
            fmt_sig(s.eu1),
            fmt_sig(s.eu2),
            residual
        )?;
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(out: &mut W, report: &SweepReport) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for cell in &report.cells {
        let agree = match cell.agree {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_sig(cell.initial.p),
            fmt_sig(cell.initial.q1),
            fmt_sig(cell.initial.q2),
            cell.classification.label(),
            fmt_sig(cell.endpoint.p),
            agree
        )?;
    }
    Ok(())
}
