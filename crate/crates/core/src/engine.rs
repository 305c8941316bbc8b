//! Turn-by-turn play of an endgame.
//!
//! Moves are at component granularity: the opener opens a whole component,
//! the controller keeps control (hard-hearted handout) or gives it up. Player
//! `A` starts as the opener and player `B` as the controller; the roles swap
//! every time control is given up.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{committed_keeps, committed_opening, Oracle};
use crate::position::{Component, Position};
use crate::strategy::{controller_decision, opener_move, ControllerDecision};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Opener,
    Controller,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToAct {
    OpenerToOpen,
    ControllerToRespond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Action {
    Open { component: Component },
    Keep,
    GiveUp,
}

impl Action {
    pub fn open(component: Component) -> Action {
        Action::Open { component }
    }
}

impl From<ControllerDecision> for Action {
    fn from(d: ControllerDecision) -> Self {
        match d {
            ControllerDecision::Keep => Action::Keep,
            ControllerDecision::GiveUp => Action::GiveUp,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Open { component } => write!(f, "open {component}"),
            Action::Keep => f.write_str("keep"),
            Action::GiveUp => f.write_str("give up"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub player: Player,
    #[serde(flatten)]
    pub action: Action,
}

/// Boxes taken during the endgame.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boxes {
    pub a: u32,
    pub b: u32,
}

impl Boxes {
    fn credit(&mut self, player: Player, n: u32) {
        match player {
            Player::A => self.a += n,
            Player::B => self.b += n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    pub a: Role,
    pub b: Role,
}

impl Roles {
    fn of(opener: Player) -> Roles {
        match opener {
            Player::A => Roles { a: Role::Opener, b: Role::Controller },
            Player::B => Roles { a: Role::Controller, b: Role::Opener },
        }
    }

    pub fn opener(&self) -> Player {
        if self.a == Role::Opener {
            Player::A
        } else {
            Player::B
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub initial: Position,
    pub remaining: Position,
    pub pending: Option<Component>,
    pub to_act: ToAct,
    pub boxes: Boxes,
    pub roles: Roles,
    /// Boxes player `A` banked before the endgame started.
    pub prior_advantage: i32,
    pub transcript: Vec<ActionRecord>,
}

impl GameState {
    pub fn new_game(pos: Position, prior_advantage: i32) -> Result<GameState> {
        if pos.is_empty() {
            return Err(Error::EmptyPosition);
        }
        Ok(GameState {
            initial: pos.clone(),
            remaining: pos,
            pending: None,
            to_act: ToAct::OpenerToOpen,
            boxes: Boxes::default(),
            roles: Roles::of(Player::A),
            prior_advantage,
            transcript: Vec::new(),
        })
    }

    /// Rebuilds a game by replaying `transcript` from the start.
    pub fn replay(initial: Position, prior_advantage: i32, transcript: &[ActionRecord]) -> Result<GameState> {
        let mut state = GameState::new_game(initial, prior_advantage)?;
        for record in transcript {
            if record.player != state.actor() {
                return Err(Error::IllegalAction {
                    action: record.action.to_string(),
                    reason: format!("it is not player {:?}'s turn", record.player),
                });
            }
            state = state.apply(record.action)?;
        }
        Ok(state)
    }

    pub fn is_terminal(&self) -> bool {
        self.remaining.is_empty() && self.pending.is_none()
    }

    pub fn opener(&self) -> Player {
        self.roles.opener()
    }

    pub fn controller(&self) -> Player {
        self.opener().other()
    }

    /// The player whose move it is.
    pub fn actor(&self) -> Player {
        match self.to_act {
            ToAct::OpenerToOpen => self.opener(),
            ToAct::ControllerToRespond => self.controller(),
        }
    }

    /// Endgame margin of `B`, the initial controller, over `A`.
    pub fn margin(&self) -> i32 {
        self.boxes.b as i32 - self.boxes.a as i32
    }

    /// Game totals including the prior advantage (credited to `A`).
    pub fn totals(&self) -> (i32, i32) {
        (self.boxes.a as i32 + self.prior_advantage, self.boxes.b as i32)
    }

    pub fn legal_actions(&self) -> Result<Vec<Action>> {
        if self.is_terminal() {
            return Err(Error::GameOver);
        }
        Ok(match self.to_act {
            ToAct::OpenerToOpen => self.remaining.distinct().map(Action::open).collect(),
            ToAct::ControllerToRespond => vec![Action::Keep, Action::GiveUp],
        })
    }

    pub fn apply(&self, action: Action) -> Result<GameState> {
        if self.is_terminal() {
            return Err(Error::GameOver);
        }
        let illegal = |reason: &str| Error::IllegalAction {
            action: action.to_string(),
            reason: reason.to_string(),
        };
        let mut next = self.clone();
        let actor = self.actor();
        match (self.to_act, action) {
            (ToAct::OpenerToOpen, Action::Open { component }) => {
                next.remaining = self
                    .remaining
                    .remove(component)
                    .map_err(|_| illegal("component is not in the position"))?;
                next.pending = Some(component);
                next.to_act = ToAct::ControllerToRespond;
            }
            (ToAct::ControllerToRespond, Action::Keep) => {
                let opened = self.pending.expect("pending component while responding");
                next.boxes.credit(actor, opened.len() - opened.handout());
                next.boxes.credit(actor.other(), opened.handout());
                next.pending = None;
                next.to_act = ToAct::OpenerToOpen;
            }
            (ToAct::ControllerToRespond, Action::GiveUp) => {
                let opened = self.pending.expect("pending component while responding");
                next.boxes.credit(actor, opened.len());
                next.pending = None;
                next.to_act = ToAct::OpenerToOpen;
                next.roles = Roles::of(actor);
            }
            (ToAct::OpenerToOpen, _) => return Err(illegal("the opener must open a component")),
            (ToAct::ControllerToRespond, _) => {
                return Err(illegal("the controller must keep or give up control"))
            }
        }
        next.transcript.push(ActionRecord { player: actor, action });
        debug_assert_eq!(
            next.boxes.a + next.boxes.b + next.remaining.size() + next.pending.map_or(0, |c| c.len()),
            next.initial.size()
        );
        Ok(next)
    }
}

/// Built-in ways of choosing moves. A policy plays both roles, since a player
/// who gives up control becomes the opener.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Closed-form opener rule and controller decision.
    ClosedForm,
    /// Minimizes or maximizes the searched value.
    Oracle,
    /// Committed to the control strategy: keep control unless the opened
    /// component was the last, or a loop with only 3-chains left.
    CommittedControl,
    /// Best response to an opponent playing [`Policy::CommittedControl`].
    ExploitCommitted,
}

impl Policy {
    pub fn choose(self, state: &GameState, oracle: &Oracle) -> Result<Action> {
        if state.is_terminal() {
            return Err(Error::GameOver);
        }
        let pending = state.pending;
        let rest = &state.remaining;
        Ok(match (self, pending) {
            (Policy::ClosedForm, None) => Action::open(opener_move(rest)?.chosen),
            (Policy::ClosedForm, Some(c)) => controller_decision(rest, c).into(),

            (Policy::Oracle, None) => Action::open(oracle.optimal_openings(rest)?[0]),
            (Policy::Oracle, Some(c)) => {
                let m = oracle.controller_margins(&rest.with(c), c)?;
                if m.keep >= m.give_up {
                    Action::Keep
                } else {
                    Action::GiveUp
                }
            }

            (Policy::CommittedControl, None) => Action::open(committed_opening(rest)?),
            (Policy::CommittedControl, Some(c)) => {
                if committed_keeps(rest, c) {
                    Action::Keep
                } else {
                    Action::GiveUp
                }
            }

            (Policy::ExploitCommitted, None) => {
                let mut best: Option<(i32, Component)> = None;
                for c in rest.distinct() {
                    let d = oracle.committed_value_given_open(rest, c)?;
                    if best.is_none_or(|(b, _)| d < b) {
                        best = Some((d, c));
                    }
                }
                Action::open(best.expect("nonempty position").1)
            }
            (Policy::ExploitCommitted, Some(c)) => {
                let m = oracle.committed_margins_when_opening(rest, c);
                if m.keep <= m.give_up {
                    Action::Keep
                } else {
                    Action::GiveUp
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Playout {
    /// Margin of the initial controller.
    pub margin: i32,
    pub state: GameState,
}

/// Plays `pos` to the end with `A` (initial opener) and `B` (initial
/// controller) following the given policies.
pub fn playout(pos: &Position, a_policy: Policy, b_policy: Policy, oracle: &Oracle) -> Result<Playout> {
    let mut state = GameState::new_game(pos.clone(), 0)?;
    while !state.is_terminal() {
        let policy = match state.actor() {
            Player::A => a_policy,
            Player::B => b_policy,
        };
        state = state.apply(policy.choose(&state, oracle)?)?;
    }
    Ok(Playout { margin: state.margin(), state })
}
