//! Vector fields on the deliberation cube `(p, q1, q2)`.
//!
//! `p = P(A2)` is moved by an adaptive rule that seeks the act with higher
//! evidential expected utility. The conditionals `q1 = P(S2|A1)` and
//! `q2 = P(S2|A2)` are pulled together by an independence rule that does not
//! look at `p`.
//!
//! Adaptive rules see expected utilities divided by the payoff span of the
//! problem, so the same rate constants behave alike for tables in single
//! utils and tables in millions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::{check_probability, DecisionProblem, ProblemError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid dynamics configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid coupling curves: {0}")]
    InvalidCoupling(String),
}

/// A point of the deliberation cube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeliberationState {
    /// `P(A2)`
    pub p: f64,
    /// `P(S2|A1)`
    pub q1: f64,
    /// `P(S2|A2)`
    pub q2: f64,
}

impl DeliberationState {
    pub fn new(p: f64, q1: f64, q2: f64) -> Result<Self, ProblemError> {
        Ok(DeliberationState {
            p: check_probability("P(A2)", p)?,
            q1: check_probability("P(S2|A1)", q1)?,
            q2: check_probability("P(S2|A2)", q2)?,
        })
    }

    /// Correlation gap `q2 - q1`; zero on the independence manifold.
    pub fn gap(&self) -> f64 {
        self.q2 - self.q1
    }

    pub fn is_finite(&self) -> bool {
        self.p.is_finite() && self.q1.is_finite() && self.q2.is_finite()
    }

    pub(crate) fn as_array(&self) -> [f64; 3] {
        [self.p, self.q1, self.q2]
    }

    pub(crate) fn from_array(v: [f64; 3]) -> Self {
        DeliberationState {
            p: v[0],
            q1: v[1],
            q2: v[2],
        }
    }
}

/// How the choice probability responds to an expected-utility advantage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum AdaptiveRule {
    /// `dp/dt = k (EU2 - EU1) p (1 - p)`.
    SignProportional { k: f64 },
    /// Nash dynamics `(cov(A) - P(A) Σ cov) / (k + Σ cov)`; larger `k` is slower.
    Nash { k: f64 },
    /// Brown-von Neumann dynamics `cov(A)² - P(A) Σ cov²`.
    BrownVonNeumann,
}

impl AdaptiveRule {
    /// The rule's rate constant, or 1 for Brown-von Neumann.
    pub fn k(&self) -> f64 {
        match *self {
            AdaptiveRule::SignProportional { k } | AdaptiveRule::Nash { k } => k,
            AdaptiveRule::BrownVonNeumann => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Anchor {
    A1,
    A2,
}

/// How the two conditionals approach each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum IndependenceVariant {
    /// Both conditionals move symmetrically to their midpoint.
    ShortestPath,
    /// The anchored conditional stays put and the other moves to it.
    OneSided { anchor: Anchor },
    /// Conditionals converge to `w*q1 + (1-w)*q2`.
    Weighted { w: f64 },
}

impl IndependenceVariant {
    /// Weight `w` of `q1` in the conserved combination `w*q1 + (1-w)*q2`.
    pub fn q1_weight(&self) -> f64 {
        match *self {
            IndependenceVariant::ShortestPath => 0.5,
            IndependenceVariant::OneSided { anchor: Anchor::A1 } => 1.0,
            IndependenceVariant::OneSided { anchor: Anchor::A2 } => 0.0,
            IndependenceVariant::Weighted { w } => w,
        }
    }

    /// The conserved combination at `(q1, q2)`: where the conditionals meet.
    pub fn target(&self, q1: f64, q2: f64) -> f64 {
        let w = self.q1_weight();
        w * q1 + (1.0 - w) * q2
    }

    pub fn label(&self) -> String {
        match *self {
            IndependenceVariant::ShortestPath => "shortest_path".to_string(),
            IndependenceVariant::OneSided { anchor: Anchor::A1 } => "one_sided_a1".to_string(),
            IndependenceVariant::OneSided { anchor: Anchor::A2 } => "one_sided_a2".to_string(),
            IndependenceVariant::Weighted { w } => format!("weighted_{w}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    pub adaptive_rule: AdaptiveRule,
    pub independence: IndependenceVariant,
    /// Independence rate per unit time.
    pub kappa: f64,
}

pub const DEFAULT_ADAPTIVE_RATE: f64 = 10.0;

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            adaptive_rule: AdaptiveRule::SignProportional {
                k: DEFAULT_ADAPTIVE_RATE,
            },
            independence: IndependenceVariant::ShortestPath,
            kappa: DEFAULT_ADAPTIVE_RATE,
        }
    }
}

impl DynamicsConfig {
    pub fn new(adaptive_rule: AdaptiveRule, independence: IndependenceVariant, kappa: f64) -> Self {
        DynamicsConfig {
            adaptive_rule,
            independence,
            kappa,
        }
    }

    pub fn with_independence(mut self, independence: IndependenceVariant) -> Self {
        self.independence = independence;
        self
    }

    /// Sets `kappa = lambda * k`.
    pub fn with_relative_speed(mut self, lambda: f64) -> Self {
        self.kappa = lambda * self.adaptive_rule.k();
        self
    }

    /// `lambda = kappa / k`.
    pub fn relative_speed(&self) -> f64 {
        self.kappa / self.adaptive_rule.k()
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |msg: String| Err(DynamicsError::InvalidConfig(msg));
        match self.adaptive_rule {
            AdaptiveRule::SignProportional { k } | AdaptiveRule::Nash { k }
                if !(k.is_finite() && k > 0.0) =>
            {
                return bad(format!("k must be positive and finite, got {k}"));
            }
            _ => {}
        }
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return bad(format!("kappa must be non-negative, got {}", self.kappa));
        }
        if let IndependenceVariant::Weighted { w } = self.independence {
            if !(0.0..=1.0).contains(&w) {
                return bad(format!("weight must lie in [0, 1], got {w}"));
            }
        }
        Ok(())
    }
}

/// `(EU(A2) - EU(A1)) / span` at the given conditionals.
pub(crate) fn normalized_advantage(problem: &DecisionProblem, q1: f64, q2: f64) -> f64 {
    let span = problem.payoff_span();
    if span == 0.0 {
        return 0.0;
    }
    let (eu1, eu2) = problem.evidential(q1, q2);
    (eu2 - eu1) / span
}

fn adaptive_rate(rule: &AdaptiveRule, p: f64, advantage: f64) -> f64 {
    // With status quo SQ = p*EU2 + (1-p)*EU1, the covetabilities reduce to
    // cov2 = max(0, (1-p)Δ) and cov1 = max(0, -pΔ).
    let cov2 = ((1.0 - p) * advantage).max(0.0);
    let cov1 = (-p * advantage).max(0.0);
    match *rule {
        AdaptiveRule::SignProportional { k } => k * advantage * p * (1.0 - p),
        AdaptiveRule::Nash { k } => (cov2 - p * (cov1 + cov2)) / (k + cov1 + cov2),
        AdaptiveRule::BrownVonNeumann => cov2 * cov2 - p * (cov1 * cov1 + cov2 * cov2),
    }
}

/// `dp/dt` at `state` under the given rule, using evidential expected utility.
pub fn adaptive_field(
    state: &DeliberationState,
    problem: &DecisionProblem,
    rule: &AdaptiveRule,
) -> f64 {
    adaptive_rate(
        rule,
        state.p,
        normalized_advantage(problem, state.q1, state.q2),
    )
}

/// `(dq1/dt, dq2/dt)`. Every variant contracts `q2 - q1` at rate `kappa` and
/// leaves the manifold fixed.
pub fn independence_field(
    state: &DeliberationState,
    variant: &IndependenceVariant,
    kappa: f64,
) -> (f64, f64) {
    let toward_q2 = state.q2 - state.q1;
    let toward_q1 = state.q1 - state.q2;
    match *variant {
        IndependenceVariant::ShortestPath => (kappa * toward_q2 / 2.0, kappa * toward_q1 / 2.0),
        IndependenceVariant::OneSided { anchor: Anchor::A2 } => (kappa * toward_q2, 0.0),
        IndependenceVariant::OneSided { anchor: Anchor::A1 } => (0.0, kappa * toward_q1),
        IndependenceVariant::Weighted { w } => {
            (kappa * (1.0 - w) * toward_q2, kappa * w * toward_q1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub dp: f64,
    pub dq1: f64,
    pub dq2: f64,
}

/// Adaptive and independence fields side by side, with no cross terms.
pub fn combined_field(
    state: &DeliberationState,
    problem: &DecisionProblem,
    config: &DynamicsConfig,
) -> Rates {
    let dp = adaptive_field(state, problem, &config.adaptive_rule);
    let (dq1, dq2) = independence_field(state, &config.independence, config.kappa);
    Rates { dp, dq1, dq2 }
}

/// Conditionals as functions of the choice probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingCurves {
    /// A predictor of reliability `r` reads the agent's inclination. The
    /// marginal is `P(S2) = r - (2r-1)p` and the correlation gap
    /// `q1 - q2 = (2r-1)·4p(1-p)`: full strength when the agent is undecided,
    /// none once her act is settled.
    Reliability {
        r: f64,
    },
    Constant {
        q1: f64,
        q2: f64,
    },
    /// Piecewise-linear curves through samples at increasing `p` covering `[0, 1]`.
    Tabulated {
        p: Vec<f64>,
        q1: Vec<f64>,
        q2: Vec<f64>,
    },
}

pub const DEFAULT_RELIABILITY: f64 = 0.99;

/// Largest change allowed between adjacent tabulated samples.
pub const MAX_SAMPLE_JUMP: f64 = 0.1;

impl Default for CouplingCurves {
    fn default() -> Self {
        CouplingCurves::Reliability {
            r: DEFAULT_RELIABILITY,
        }
    }
}

impl CouplingCurves {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |msg: String| Err(DynamicsError::InvalidCoupling(msg));
        let in_unit = |x: f64| (0.0..=1.0).contains(&x);
        match self {
            CouplingCurves::Reliability { r } => {
                if !(0.5..=1.0).contains(r) {
                    return bad(format!("reliability must lie in [0.5, 1], got {r}"));
                }
            }
            CouplingCurves::Constant { q1, q2 } => {
                if !(in_unit(*q1) && in_unit(*q2)) {
                    return bad(format!("constant conditionals ({q1}, {q2}) out of range"));
                }
            }
            CouplingCurves::Tabulated { p, q1, q2 } => {
                if p.len() < 2 || p.len() != q1.len() || p.len() != q2.len() {
                    return bad("need at least two samples of equal length".to_string());
                }
                if p[0] != 0.0 || p[p.len() - 1] != 1.0 {
                    return bad("samples must span p = 0 to p = 1".to_string());
                }
                if p.windows(2)
                    .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
                {
                    return bad("sample points must be strictly increasing".to_string());
                }
                if !q1.iter().chain(q2).all(|&x| in_unit(x)) {
                    return bad("conditionals must lie in [0, 1]".to_string());
                }
                for (i, (a, b)) in q1.windows(2).zip(q2.windows(2)).enumerate() {
                    let jump = (a[1] - a[0]).abs().max((b[1] - b[0]).abs());
                    if jump > MAX_SAMPLE_JUMP {
                        return bad(format!(
                            "jump of {jump} between samples {i} and {} exceeds {MAX_SAMPLE_JUMP}",
                            i + 1
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(q1(p), q2(p))`. Assumes the curves have been validated.
    pub fn conditionals(&self, p: f64) -> (f64, f64) {
        match self {
            CouplingCurves::Reliability { r } => {
                let strength = 2.0 * r - 1.0;
                let marginal = r - strength * p;
                let gap = strength * 4.0 * p * (1.0 - p);
                let q1 = (marginal + p * gap).clamp(0.0, 1.0);
                let q2 = (marginal - (1.0 - p) * gap).clamp(0.0, 1.0);
                (q1, q2)
            }
            CouplingCurves::Constant { q1, q2 } => (*q1, *q2),
            CouplingCurves::Tabulated { p: xs, q1, q2 } => {
                let p = p.clamp(0.0, 1.0);
                let i = xs.partition_point(|&x| x <= p).clamp(1, xs.len() - 1);
                let t = (p - xs[i - 1]) / (xs[i] - xs[i - 1]);
                (
                    q1[i - 1] + t * (q1[i] - q1[i - 1]),
                    q2[i - 1] + t * (q2[i] - q2[i - 1]),
                )
            }
        }
    }
}

/// One-dimensional field with the conditionals slaved to `p`.
pub fn skyrms_coupled_field(
    p: f64,
    problem: &DecisionProblem,
    rule: &AdaptiveRule,
    curves: &CouplingCurves,
) -> Result<f64, DynamicsError> {
    curves.validate()?;
    Ok(coupled_rate(p, problem, rule, curves))
}

pub(crate) fn coupled_rate(
    p: f64,
    problem: &DecisionProblem,
    rule: &AdaptiveRule,
    curves: &CouplingCurves,
) -> f64 {
    let (q1, q2) = curves.conditionals(p);
    adaptive_rate(rule, p, normalized_advantage(problem, q1, q2))
}
