//! Game sessions between a human and the engine.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use dnb_core::{Action, ActionRecord, Error, GameState, Oracle, Player, Policy, Position, Role};

/// The engine always plays the closed-form strategy.
pub const ENGINE_POLICY: Policy = Policy::ClosedForm;

/// Lets the engine move until it is `human`'s turn or the game is over.
/// Returns the new state and the engine's actions.
pub fn engine_moves(
    mut state: GameState,
    human: Player,
    oracle: &Oracle,
) -> dnb_core::Result<(GameState, Vec<ActionRecord>)> {
    let mut reply = Vec::new();
    while !state.is_terminal() && state.actor() != human {
        let action = ENGINE_POLICY.choose(&state, oracle)?;
        reply.push(ActionRecord { player: state.actor(), action });
        state = state.apply(action)?;
    }
    Ok((state, reply))
}

/// The human's seat: `A` starts as opener, `B` as controller.
pub fn seat_for(role: Role) -> Player {
    match role {
        Role::Opener => Player::A,
        Role::Controller => Player::B,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub id: u64,
    /// Bumped on every accepted action.
    pub version: u64,
    pub human: Player,
    pub state: GameState,
}

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("no session {0}")]
    NotFound(u64),
    #[error("stale action: session is at version {expected}, request was for {got}")]
    Stale { expected: u64, got: u64 },
    #[error("it is not your turn")]
    NotYourTurn,
    #[error(transparent)]
    Game(#[from] Error),
}

/// In-memory sessions, optionally mirrored to one JSON file per session.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: Mutex<BTreeMap<u64, Session>>,
    next_id: AtomicU64,
    snapshot_dir: Option<PathBuf>,
}

impl SessionStore {
    pub fn new() -> Self {
        SessionStore { next_id: AtomicU64::new(1), ..Default::default() }
    }

    /// A store that writes `session-<id>.json` into `dir` after every change
    /// and starts from whatever snapshots are already there.
    pub fn with_snapshots(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let mut sessions = BTreeMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                let session: Session = serde_json::from_str(&fs::read_to_string(&path)?)
                    .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
                sessions.insert(session.id, session);
            }
        }
        let next = sessions.keys().next_back().map_or(1, |id| id + 1);
        Ok(SessionStore {
            sessions: Mutex::new(sessions),
            next_id: AtomicU64::new(next),
            snapshot_dir: Some(dir),
        })
    }

    fn snapshot(&self, session: &Session) {
        if let Some(dir) = &self.snapshot_dir {
            let path = snapshot_path(dir, session.id);
            let json = serde_json::to_string_pretty(session).expect("session serializes");
            if let Err(e) = fs::write(&path, json) {
                eprintln!("warning: could not write {}: {e}", path.display());
            }
        }
    }

    /// Starts a game; if the engine moves first its actions are returned.
    pub fn create(
        &self,
        pos: Position,
        advantage: i32,
        human_role: Role,
        oracle: &Oracle,
    ) -> Result<(Session, Vec<ActionRecord>), SessionError> {
        let human = seat_for(human_role);
        let (state, reply) = engine_moves(GameState::new_game(pos, advantage)?, human, oracle)?;
        let id = self.next_id.fetch_add(1, Ordering::SeqCst);
        let session = Session { id, version: 0, human, state };
        self.sessions.lock().unwrap().insert(id, session.clone());
        self.snapshot(&session);
        Ok((session, reply))
    }

    pub fn get(&self, id: u64) -> Result<Session, SessionError> {
        self.sessions
            .lock()
            .unwrap()
            .get(&id)
            .cloned()
            .ok_or(SessionError::NotFound(id))
    }

    /// Applies the human's action and the engine's reply atomically.
    pub fn act(
        &self,
        id: u64,
        action: Action,
        expected_version: Option<u64>,
        oracle: &Oracle,
    ) -> Result<(Session, Vec<ActionRecord>), SessionError> {
        let mut sessions = self.sessions.lock().unwrap();
        let session = sessions.get_mut(&id).ok_or(SessionError::NotFound(id))?;
        if let Some(got) = expected_version {
            if got != session.version {
                return Err(SessionError::Stale { expected: session.version, got });
            }
        }
        if !session.state.is_terminal() && session.state.actor() != session.human {
            return Err(SessionError::NotYourTurn);
        }
        let after_human = session.state.apply(action)?;
        let (state, reply) = engine_moves(after_human, session.human, oracle)?;
        session.state = state;
        session.version += 1;
        let session = session.clone();
        drop(sessions);
        self.snapshot(&session);
        Ok((session, reply))
    }
}

fn snapshot_path(dir: &Path, id: u64) -> PathBuf {
    dir.join(format!("session-{id}.json"))
}
