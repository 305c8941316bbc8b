use thiserror::Error;

use crate::position::Component;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed position `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("a chain needs at least 3 boxes, got {0}")]
    ShortChain(u32),

    #[error("a loop needs an even length of at least 4, got {0}")]
    BadLoop(u32),

    #[error("component {0} is not in the position")]
    ComponentNotPresent(Component),

    #[error("the position is empty")]
    EmptyPosition,

    #[error("the core is defined only for positions with at most one 3-chain (found {0})")]
    TooManyThreeChains(usize),

    #[error("the game is already over")]
    GameOver,

    #[error("illegal action {action}: {reason}")]
    IllegalAction { action: String, reason: String },

    /// Two closed-form evaluation routes disagreed. This is always a bug.
    #[error("closed-form cases disagree on {position}: {detail}")]
    Contradiction { position: String, detail: String },
}
