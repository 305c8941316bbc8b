//! Exact solver and strategy engine for Dots & Boxes endgames made only of
//! loops and long chains.
//!
//! - [`position`]: the position algebra and its text notation.
//! - [`measures`]: size, component counts, terminal bonus, controlled value.
//! - [`oracle`]: memoized game-tree search, the ground truth.
//! - [`strategy`]: closed-form values and optimal opener/controller moves.
//! - [`engine`]: turn-by-turn play and policy playouts.
//! - [`verify`]: exhaustive comparison of the closed forms with the oracle.

pub mod engine;
pub mod error;
pub mod measures;
pub mod oracle;
pub mod position;
pub mod strategy;
pub mod verify;

pub use engine::{Action, ActionRecord, GameState, Player, Playout, Policy, Role, ToAct};
pub use error::{Error, Result};
pub use measures::{controlled_value, measures, terminal_bonus, MeasureSet};
pub use oracle::{ControllerMargins, Oracle};
pub use position::{enumerate_positions, Component, Kind, Position};
pub use strategy::{
    controller_decision, core, endgame_outcome, opener_move, standard_move, value_exceeds_two,
    value_explicit, value_procedural, ControllerDecision, CoreDecomposition, OpenerRationale,
    OpenerRule,
};
pub use verify::VerifyReport;
