//! Screening-off checks on a joint credence over a common cause `C`, an act
//! `A` and a state `S`.
//!
//! The distribution is read as the agent's credence after conditioning on
//! full self-knowledge, so the tickle proposition itself is not a variable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JointError {
    #[error("atom {index} has probability {value}")]
    InvalidAtom { index: usize, value: f64 },
    #[error("atoms sum to {0}, expected 1")]
    NotNormalized(f64),
}

/// Probabilities of the eight atoms of three binary variables.
///
/// Atom `(c, a, s)` lives at index `4c + 2a + s`, where `1` means the event
/// holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution3 {
    atoms: [f64; 8],
}

const NORMALIZATION_TOLERANCE: f64 = 1e-12;

impl JointDistribution3 {
    pub fn new(atoms: [f64; 8]) -> Result<Self, JointError> {
        for (index, &value) in atoms.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(JointError::InvalidAtom { index, value });
            }
        }
        let total: f64 = atoms.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(JointError::NotNormalized(total));
        }
        Ok(JointDistribution3 { atoms })
    }

    /// Builds a joint from `P(C)`, `P(A|C)`, `P(A|¬C)` and `P(S|C, A)` indexed
    /// as `s_given[c][a]`.
    pub fn from_conditionals(
        p_c: f64,
        a_given_c: [f64; 2],
        s_given: [[f64; 2]; 2],
    ) -> Result<Self, JointError> {
        let mut atoms = [0.0; 8];
        for c in 0..2 {
            let pc = if c == 1 { p_c } else { 1.0 - p_c };
            for a in 0..2 {
                let pa = if a == 1 {
                    a_given_c[c]
                } else {
                    1.0 - a_given_c[c]
                };
                for s in 0..2 {
                    let ps = if s == 1 {
                        s_given[c][a]
                    } else {
                        1.0 - s_given[c][a]
                    };
                    atoms[4 * c + 2 * a + s] = pc * pa * ps;
                }
            }
        }
        Self::new(atoms)
    }

    pub fn atom(&self, c: bool, a: bool, s: bool) -> f64 {
        self.atoms[4 * c as usize + 2 * a as usize + s as usize]
    }

    fn mass(&self, pred: impl Fn(bool, bool, bool) -> bool) -> f64 {
        let mut total = 0.0;
        for c in [false, true] {
            for a in [false, true] {
                for s in [false, true] {
                    if pred(c, a, s) {
                        total += self.atom(c, a, s);
                    }
                }
            }
        }
        total
    }

    /// `P(event | given)`, or `None` when `given` has zero probability.
    fn conditional(
        &self,
        event: impl Fn(bool, bool, bool) -> bool,
        given: impl Fn(bool, bool, bool) -> bool + Copy,
    ) -> Option<f64> {
        let denom = self.mass(given);
        if denom <= 0.0 {
            return None;
        }
        Some(self.mass(|c, a, s| given(c, a, s) && event(c, a, s)) / denom)
    }
}

/// Outcome of one independence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Holds,
    Fails,
    /// A conditioning event has probability zero.
    Vacuous,
}

impl Check {
    fn compare(x: Option<f64>, y: Option<f64>, tolerance: f64) -> Check {
        match (x, y) {
            (Some(x), Some(y)) if (x - y).abs() <= tolerance => Check::Holds,
            (Some(_), Some(_)) => Check::Fails,
            _ => Check::Vacuous,
        }
    }

    /// Vacuous checks impose no constraint.
    pub fn holds(self) -> bool {
        !matches!(self, Check::Fails)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreeningReport {
    /// `P(A|C) = P(A|¬C)`.
    pub a_indep_c: Check,
    /// `P(S|A) = P(S|¬A)`.
    pub s_indep_a: Check,
    /// `P(S|C&A) = P(S|C&¬A)` and the same under `¬C`.
    pub s_depends_only_on_c: Check,
    /// `(a_indep_c ∧ s_depends_only_on_c) ⟹ s_indep_a` on this joint.
    pub chain_holds: bool,
}

pub fn verify_screening_off(joint: &JointDistribution3, tolerance: f64) -> ScreeningReport {
    let a_indep_c = Check::compare(
        joint.conditional(|_, a, _| a, |c, _, _| c),
        joint.conditional(|_, a, _| a, |c, _, _| !c),
        tolerance,
    );
    let s_indep_a = Check::compare(
        joint.conditional(|_, _, s| s, |_, a, _| a),
        joint.conditional(|_, _, s| s, |_, a, _| !a),
        tolerance,
    );
    let per_cause = [true, false].map(|cause| {
        Check::compare(
            joint.conditional(|_, _, s| s, move |c, a, _| c == cause && a),
            joint.conditional(|_, _, s| s, move |c, a, _| c == cause && !a),
            tolerance,
        )
    });
    let s_depends_only_on_c = if per_cause.contains(&Check::Fails) {
        Check::Fails
    } else if per_cause.iter().all(|&c| c == Check::Vacuous) {
        Check::Vacuous
    } else {
        Check::Holds
    };
    let antecedent = a_indep_c.holds() && s_depends_only_on_c.holds();
    ScreeningReport {
        a_indep_c,
        s_indep_a,
        s_depends_only_on_c,
        chain_holds: !antecedent || s_indep_a.holds(),
    }
}
