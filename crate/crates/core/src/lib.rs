//! Deliberational dynamics for two-act, two-state decision problems.
//!
//! An agent deliberates over the cube of `(P(A2), P(S2|A1), P(S2|A2))`.
//! Adaptive dynamics push the choice probability toward the act with higher
//! evidential expected utility while independence dynamics pull the two
//! conditionals together. [`geometry`] locates the plane where both acts tie
//! and predicts where deliberation ends; [`simulate`] integrates trajectories
//! and checks those predictions numerically.

pub mod dynamics;
pub mod geometry;
pub mod io;
pub mod problem;
pub mod screening;
pub mod simulate;

pub use dynamics::{
    AdaptiveRule, Anchor, CouplingCurves, DeliberationState, DynamicsConfig, IndependenceVariant,
};
pub use geometry::{indifference_plane, Indifference, ManifoldRelation, Plane, Verdict};
pub use problem::{DecisionProblem, Form, Payoffs, ProblemError};
pub use simulate::{integrate, Classification, Controls, SimError, Trajectory};
