//! Two-act, two-state decision problems and their expected utilities.
//!
//! Rows are acts and columns are states. `A1` is the first row (stay,
//! one-box) and `A2` the second (flee, two-box); `S2` is the second column
//! (death in Aleppo, opaque box full). Every probability coordinate in this
//! crate is expressed in terms of `S2` and `A2`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Payoff matrix `u[act][state]` in utils.
pub type Payoffs = [[f64; 2]; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("payoff u[{act}][{state}] = {value} is not finite")]
    InvalidPayoff {
        act: usize,
        state: usize,
        value: f64,
    },
    #[error("{name} = {value} is not a probability")]
    InvalidProbability { name: &'static str, value: f64 },
    #[error("invalid {form} parameters: {reason}")]
    InvalidForm { form: &'static str, reason: String },
}

/// Structural family of a payoff table.
///
/// `Instability` is the table `[[b, a], [a - c, b - c]]` and `Newcomb` is
/// `[[b, a], [b + c, a + c]]`, both with `a > b` and `0 <= c <= a - b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Form {
    Instability { a: f64, b: f64, c: f64 },
    Newcomb { a: f64, b: f64, c: f64 },
    General,
}

impl Form {
    pub fn name(&self) -> &'static str {
        match self {
            Form::Instability { .. } => "instability",
            Form::Newcomb { .. } => "newcomb",
            Form::General => "general",
        }
    }

    /// `(a, b, c)` for the two structured forms.
    pub fn params(&self) -> Option<(f64, f64, f64)> {
        match *self {
            Form::Instability { a, b, c } | Form::Newcomb { a, b, c } => Some((a, b, c)),
            Form::General => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    acts: [String; 2],
    states: [String; 2],
    payoffs: Payoffs,
    form: Form,
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64, ProblemError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(ProblemError::InvalidProbability { name, value })
    }
}

fn check_params(form: &'static str, a: f64, b: f64, c: f64) -> Result<(), ProblemError> {
    let bad = |reason: &str| {
        Err(ProblemError::InvalidForm {
            form,
            reason: reason.to_string(),
        })
    };
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return bad("a, b and c must be finite");
    }
    if a <= b {
        return bad("requires a > b");
    }
    if c < 0.0 || c > a - b {
        return bad("requires 0 <= c <= a - b");
    }
    Ok(())
}

/// Matches the instability pattern exactly; no tolerance on residuals.
fn detect_instability(u: &Payoffs) -> Option<Form> {
    let b = u[0][0];
    let a = u[0][1];
    let c = a - u[1][0];
    if u[1][1] != b - c || u[1][0] != a - c {
        return None;
    }
    check_params("instability", a, b, c).ok()?;
    Some(Form::Instability { a, b, c })
}

fn detect_newcomb(u: &Payoffs) -> Option<Form> {
    let b = u[0][0];
    let a = u[0][1];
    let c = u[1][0] - b;
    if u[1][1] != a + c || u[1][0] != b + c {
        return None;
    }
    check_params("newcomb", a, b, c).ok()?;
    Some(Form::Newcomb { a, b, c })
}

/// Classifies a payoff table by exact pattern match.
pub fn detect_form(payoffs: &Payoffs) -> Form {
    detect_instability(payoffs)
        .or_else(|| detect_newcomb(payoffs))
        .unwrap_or(Form::General)
}

impl DecisionProblem {
    /// Builds a problem and auto-detects its structural form.
    pub fn new(
        payoffs: Payoffs,
        acts: [String; 2],
        states: [String; 2],
    ) -> Result<Self, ProblemError> {
        for (act, row) in payoffs.iter().enumerate() {
            for (state, &value) in row.iter().enumerate() {
                if !value.is_finite() {
                    return Err(ProblemError::InvalidPayoff { act, state, value });
                }
            }
        }
        Ok(DecisionProblem {
            acts,
            states,
            form: detect_form(&payoffs),
            payoffs,
        })
    }

    /// Same as [`DecisionProblem::new`] with generic labels.
    pub fn from_payoffs(payoffs: Payoffs) -> Result<Self, ProblemError> {
        Self::new(
            payoffs,
            ["A1".to_string(), "A2".to_string()],
            ["S1".to_string(), "S2".to_string()],
        )
    }

    /// Generalised decision-instability table `[[b, a], [a - c, b - c]]`.
    pub fn instability(a: f64, b: f64, c: f64) -> Result<Self, ProblemError> {
        check_params("instability", a, b, c)?;
        Ok(DecisionProblem {
            acts: ["A1".to_string(), "A2".to_string()],
            states: ["S1".to_string(), "S2".to_string()],
            payoffs: [[b, a], [a - c, b - c]],
            form: Form::Instability { a, b, c },
        })
    }

    /// Generalised Newcomb table `[[b, a], [b + c, a + c]]`.
    pub fn newcomb(a: f64, b: f64, c: f64) -> Result<Self, ProblemError> {
        check_params("newcomb", a, b, c)?;
        Ok(DecisionProblem {
            acts: ["A1".to_string(), "A2".to_string()],
            states: ["S1".to_string(), "S2".to_string()],
            payoffs: [[b, a], [b + c, a + c]],
            form: Form::Newcomb { a, b, c },
        })
    }

    /// Asymmetric Death in Damascus: survival is worth 10, fleeing costs 1.
    pub fn death_in_damascus() -> Self {
        Self::new(
            [[0.0, 10.0], [9.0, -1.0]],
            ["Stay in Damascus".to_string(), "Flee to Aleppo".to_string()],
            [
                "Death in Damascus".to_string(),
                "Death in Aleppo".to_string(),
            ],
        )
        .expect("finite payoffs")
    }

    /// Newcomb's problem with a $1,000 transparent box.
    pub fn newcomb_problem() -> Self {
        Self::new(
            [[0.0, 1_000_000.0], [1_000.0, 1_001_000.0]],
            ["Take opaque box".to_string(), "Take both boxes".to_string()],
            ["Box empty".to_string(), "Box not empty".to_string()],
        )
        .expect("finite payoffs")
    }

    pub fn payoffs(&self) -> &Payoffs {
        &self.payoffs
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn acts(&self) -> &[String; 2] {
        &self.acts
    }

    pub fn states(&self) -> &[String; 2] {
        &self.states
    }

    /// Largest minus smallest payoff; zero only for a constant table.
    pub fn payoff_span(&self) -> f64 {
        let flat = self.payoffs.iter().flatten();
        let max = flat.clone().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = flat.copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Evidential expected utilities of `(A1, A2)` given `q1 = P(S2|A1)` and
    /// `q2 = P(S2|A2)`.
    pub fn eu_evidential(&self, q1: f64, q2: f64) -> Result<(f64, f64), ProblemError> {
        check_probability("P(S2|A1)", q1)?;
        check_probability("P(S2|A2)", q2)?;
        Ok(self.evidential(q1, q2))
    }

    pub(crate) fn evidential(&self, q1: f64, q2: f64) -> (f64, f64) {
        let u = &self.payoffs;
        (
            u[0][0] * (1.0 - q1) + u[0][1] * q1,
            u[1][0] * (1.0 - q2) + u[1][1] * q2,
        )
    }

    /// Causal expected utilities of `(A1, A2)` given the unconditional `P(S2)`.
    pub fn eu_causal(&self, s2: f64) -> Result<(f64, f64), ProblemError> {
        check_probability("P(S2)", s2)?;
        Ok(self.causal(s2))
    }

    pub(crate) fn causal(&self, s2: f64) -> (f64, f64) {
        let u = &self.payoffs;
        (
            u[0][0] * (1.0 - s2) + u[0][1] * s2,
            u[1][0] * (1.0 - s2) + u[1][1] * s2,
        )
    }
}

/// Law of total probability: `P(S2) = P(S2|A1)(1 - P(A2)) + P(S2|A2)P(A2)`.
pub fn marginal_s2(q1: f64, q2: f64, p: f64) -> Result<f64, ProblemError> {
    check_probability("P(S2|A1)", q1)?;
    check_probability("P(S2|A2)", q2)?;
    check_probability("P(A2)", p)?;
    Ok(q1 * (1.0 - p) + q2 * p)
}
