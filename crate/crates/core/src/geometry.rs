//! The plane of indifference and its relation to the independence manifold.
//!
//! All planes live in the `(q1, q2) = (P(S2|A1), P(S2|A2))` square and are
//! written `alpha*q1 + beta*q2 = gamma`. The independence manifold is the
//! diagonal `q1 - q2 = 0`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::DeliberationState;
use crate::problem::{DecisionProblem, Form};

/// Absolute tolerance on plane membership.
pub const ON_PLANE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("operation requires an instability or newcomb problem, got {0}")]
    FormMismatch(&'static str),
}

/// A line `alpha*q1 + beta*q2 = gamma` in conditional-probability space.
///
/// Canonical scaling: `max(|alpha|, |beta|) = 1`, `alpha >= 0`, and `beta >= 0`
/// when `alpha = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Plane {
    /// Canonicalizes raw coefficients. Returns `None` when `(alpha, beta) = (0, 0)`,
    /// together with the sign of the factor that was applied.
    fn canonical(alpha: f64, beta: f64, gamma: f64) -> Option<(Plane, f64)> {
        let scale = alpha.abs().max(beta.abs());
        if scale == 0.0 {
            return None;
        }
        let sign = if alpha < 0.0 || (alpha == 0.0 && beta < 0.0) {
            -1.0
        } else {
            1.0
        };
        let plane = Plane {
            alpha: sign * alpha / scale,
            beta: sign * beta / scale,
            gamma: sign * gamma / scale,
        };
        Some((plane, sign))
    }

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Option<Plane> {
        Self::canonical(alpha, beta, gamma).map(|(p, _)| p)
    }

    /// The independence manifold `q1 - q2 = 0`.
    pub fn manifold() -> Plane {
        Plane {
            alpha: 1.0,
            beta: -1.0,
            gamma: 0.0,
        }
    }

    pub fn residual(&self, q1: f64, q2: f64) -> f64 {
        self.alpha * q1 + self.beta * q2 - self.gamma
    }

    /// Dot product of this plane's normal with the manifold normal `(1, -1)`.
    pub fn normal_dot_manifold(&self) -> f64 {
        self.alpha - self.beta
    }
}

/// The indifference plane of a problem together with its orientation.
///
/// `signed_residual > 0` exactly when `EU(A1) > EU(A2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndifferencePlane {
    plane: Plane,
    orientation: f64,
}

impl IndifferencePlane {
    pub fn plane(&self) -> Plane {
        self.plane
    }

    pub fn signed_residual(&self, q1: f64, q2: f64) -> f64 {
        self.orientation * self.plane.residual(q1, q2)
    }

    pub fn side(&self, q1: f64, q2: f64, tolerance: f64) -> Side {
        let r = self.signed_residual(q1, q2);
        if r.abs() <= tolerance {
            Side::On
        } else if r > 0.0 {
            Side::Above
        } else {
            Side::Below
        }
    }
}

/// Where `EU(A1) = EU(A2)` holds in the square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Indifference {
    Plane(IndifferencePlane),
    /// Both acts have identical expected utility at every point.
    Everywhere,
    /// One act is strictly better at every point.
    Nowhere,
}

impl Indifference {
    pub fn as_plane(&self) -> Option<&IndifferencePlane> {
        match self {
            Indifference::Plane(p) => Some(p),
            _ => None,
        }
    }
}

/// Solves `EU(A1) = EU(A2)` for the two evidential expected utilities.
///
/// `EU(A1) - EU(A2) = alpha0*q1 + beta0*q2 - gamma0` with
/// `alpha0 = u12 - u11`, `beta0 = u21 - u22`, `gamma0 = u21 - u11`.
pub fn indifference_plane(problem: &DecisionProblem) -> Indifference {
    let u = problem.payoffs();
    // Structured forms use their parameters so that a + c - (b + c) rounding
    // cannot tilt a Newcomb plane off parallel.
    let (alpha0, beta0, gamma0) = match problem.form() {
        Form::Instability { a, b, c } => (a - b, a - b, a - b - c),
        Form::Newcomb { a, b, c } => (a - b, -(a - b), c),
        Form::General => (u[0][1] - u[0][0], -(u[1][1] - u[1][0]), u[1][0] - u[0][0]),
    };
    match Plane::canonical(alpha0, beta0, gamma0) {
        Some((plane, orientation)) => {
            let ip = IndifferencePlane { plane, orientation };
            debug_assert!({
                // The corner with the largest advantage decides the orientation.
                let corners = [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)];
                corners.iter().all(|&(q1, q2)| {
                    let (e1, e2) = problem.eu_evidential(q1, q2).unwrap();
                    let gap = e1 - e2;
                    gap.abs() < 1e-9 * (1.0 + e1.abs())
                        || (gap > 0.0) == (ip.signed_residual(q1, q2) > 0.0)
                })
            });
            Indifference::Plane(ip)
        }
        None if gamma0 == 0.0 => Indifference::Everywhere,
        None => Indifference::Nowhere,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `EU(A1) > EU(A2)`.
    Above,
    /// `EU(A1) < EU(A2)`.
    Below,
    On,
}

pub fn side_of_plane(plane: &IndifferencePlane, q1: f64, q2: f64, tolerance: f64) -> Side {
    plane.side(q1, q2, tolerance)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ManifoldRelation {
    /// Parallel to the manifold at `q1 - q2 = offset`.
    Parallel {
        offset: f64,
    },
    Coincident,
    /// Meets the manifold at `q1 = q2 = intersection_q`; `angle` is in `(0, π/2]`.
    Intersecting {
        angle: f64,
        intersection_q: f64,
    },
}

pub fn manifold_relation(plane: &Plane) -> ManifoldRelation {
    // Normal (alpha, beta) is parallel to (1, -1) iff alpha + beta = 0.
    let cross = plane.alpha + plane.beta;
    if cross == 0.0 {
        // Canonical scaling makes this plane exactly q1 - q2 = gamma.
        if plane.gamma == 0.0 {
            ManifoldRelation::Coincident
        } else {
            ManifoldRelation::Parallel {
                offset: plane.gamma / plane.alpha,
            }
        }
    } else {
        let norm = plane.alpha.hypot(plane.beta) * std::f64::consts::SQRT_2;
        let cos = (plane.normal_dot_manifold().abs() / norm).min(1.0);
        ManifoldRelation::Intersecting {
            angle: cos.acos(),
            intersection_q: plane.gamma / cross,
        }
    }
}

/// The indifference constant and its admissible band for a structured form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsCheck {
    /// `(a-b-c)/(a-b)` for instability, `c/(a-b)` for newcomb.
    pub constant: f64,
    pub lower: f64,
    pub upper: f64,
    pub ok: bool,
}

/// Checks that the indifference constant is representable by conditional
/// probabilities: a sum in `[0, 2]` or a difference in `[-1, 1]`.
pub fn plane_bounds_check(problem: &DecisionProblem) -> Result<BoundsCheck, GeometryError> {
    let (constant, lower, upper) = match problem.form() {
        Form::Instability { a, b, c } => ((a - b - c) / (a - b), 0.0, 2.0),
        Form::Newcomb { a, b, c } => (c / (a - b), -1.0, 1.0),
        Form::General => return Err(GeometryError::FormMismatch("general")),
    };
    Ok(BoundsCheck {
        constant,
        lower,
        upper,
        ok: constant.is_finite() && (lower..=upper).contains(&constant),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    PureA1,
    PureA2,
    /// Starts on the plane and keeps its choice probability.
    Neutral,
    /// Both acts tie on the manifold; no unique endpoint.
    Indifferent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub p_final: Option<f64>,
    pub regime: Regime,
}

/// Endpoint of deliberation under shortest-path independence dynamics.
pub fn predicted_endpoint(
    problem: &DecisionProblem,
    initial: &DeliberationState,
) -> Result<Prediction, GeometryError> {
    match problem.form() {
        Form::Instability { .. } => {
            let plane = match indifference_plane(problem) {
                Indifference::Plane(p) => p,
                // a > b guarantees a proper plane
                _ => unreachable!("instability form always has an indifference plane"),
            };
            Ok(
                match plane.side(initial.q1, initial.q2, ON_PLANE_TOLERANCE) {
                    Side::Above => Prediction {
                        p_final: Some(0.0),
                        regime: Regime::PureA1,
                    },
                    Side::Below => Prediction {
                        p_final: Some(1.0),
                        regime: Regime::PureA2,
                    },
                    Side::On => Prediction {
                        p_final: Some(initial.p),
                        regime: Regime::Neutral,
                    },
                },
            )
        }
        Form::Newcomb { c, .. } => Ok(if c > 0.0 {
            Prediction {
                p_final: Some(1.0),
                regime: Regime::PureA2,
            }
        } else {
            Prediction {
                p_final: None,
                regime: Regime::Indifferent,
            }
        }),
        Form::General => Err(GeometryError::FormMismatch("general")),
    }
}

/// Whether the endpoint of deliberation depends on how independence is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Robust,
    Fragile,
    Degenerate,
}

pub fn reconciliation_verdict(problem: &DecisionProblem) -> Verdict {
    match indifference_plane(problem) {
        Indifference::Everywhere => Verdict::Degenerate,
        Indifference::Nowhere => Verdict::Robust,
        Indifference::Plane(ip) => match manifold_relation(&ip.plane()) {
            ManifoldRelation::Coincident => Verdict::Degenerate,
            ManifoldRelation::Parallel { .. } => Verdict::Robust,
            ManifoldRelation::Intersecting { intersection_q, .. } => {
                if (0.0..=1.0).contains(&intersection_q) {
                    Verdict::Fragile
                } else {
                    Verdict::Robust
                }
            }
        },
    }
}
