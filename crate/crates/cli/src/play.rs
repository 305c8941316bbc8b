//! Interactive play in the terminal.

use std::io::{BufRead, Write};

use anyhow::{bail, Result};

use dnb_core::strategy::value_given_open;
use dnb_core::{
    controller_decision, opener_move, value_explicit, Action, GameState, Oracle, Player, Position,
    Role, ToAct,
};

use crate::session::{engine_moves, seat_for};

const HELP: &str = "commands: <component> or `open <component>` to open, `keep`, `give` to give up control, \
`hint`, `state`, `quit`";

fn player_name(p: Player, human: Player) -> &'static str {
    if p == human {
        "you"
    } else {
        "engine"
    }
}

fn show_state(out: &mut impl Write, state: &GameState, human: Player) -> Result<()> {
    let (a, b) = state.totals();
    let (mine, theirs) = if human == Player::A { (a, b) } else { (b, a) };
    writeln!(out, "remaining: {}", state.remaining)?;
    if let Some(c) = state.pending {
        writeln!(out, "just opened: {c}")?;
    }
    let role = if state.opener() == human { "opener" } else { "controller" };
    writeln!(out, "score: you {mine}, engine {theirs}; you are the {role}")?;
    Ok(())
}

fn hint(state: &GameState) -> Result<String> {
    Ok(match (state.to_act, state.pending) {
        (ToAct::OpenerToOpen, _) => {
            let r = opener_move(&state.remaining)?;
            let v = value_explicit(&state.remaining)?;
            format!("open {} ({}); value {v}", r.chosen, r.rule)
        }
        (ToAct::ControllerToRespond, Some(c)) => {
            let whole = state.remaining.with(c);
            let v = value_given_open(&whole, c)?;
            let decision = Action::from(controller_decision(&state.remaining, c));
            format!("{decision}; worth {v} to the controller")
        }
        (ToAct::ControllerToRespond, None) => unreachable!("responding without a pending component"),
    })
}

fn parse_action(line: &str, state: &GameState) -> Result<Option<Action>> {
    let line = line.trim().to_ascii_lowercase();
    let action = match line.as_str() {
        "keep" | "k" => Action::Keep,
        "give" | "give up" | "g" => Action::GiveUp,
        other => {
            let text = other.strip_prefix("open").unwrap_or(other).trim();
            match text.parse() {
                Ok(c) => Action::open(c),
                Err(_) => return Ok(None),
            }
        }
    };
    if !state.legal_actions()?.contains(&action) {
        bail!("{action} is not legal now");
    }
    Ok(Some(action))
}

/// Runs a game on `input`/`out` until it ends or the user quits. Returns the
/// final state.
pub fn run(
    pos: Position,
    advantage: i32,
    role: Role,
    input: impl BufRead,
    out: &mut impl Write,
) -> Result<GameState> {
    let oracle = Oracle::new();
    let human = seat_for(role);
    let mut state = GameState::new_game(pos, advantage)?;
    writeln!(out, "{HELP}")?;

    let mut lines = input.lines();
    loop {
        let (next, reply) = engine_moves(state, human, &oracle)?;
        state = next;
        for r in reply {
            writeln!(out, "{}: {}", player_name(r.player, human), r.action)?;
        }
        if state.is_terminal() {
            break;
        }
        show_state(out, &state, human)?;
        write!(out, "> ")?;
        out.flush()?;

        let Some(line) = lines.next().transpose()? else { break };
        match line.trim() {
            "quit" | "q" => break,
            "hint" | "?" => {
                writeln!(out, "{}", hint(&state)?)?;
                continue;
            }
            "state" => continue,
            "help" => {
                writeln!(out, "{HELP}")?;
                continue;
            }
            _ => {}
        }
        match parse_action(&line, &state) {
            Ok(Some(action)) => state = state.apply(action)?,
            Ok(None) => writeln!(out, "unrecognized input; {HELP}")?,
            Err(e) => writeln!(out, "{e}")?,
        }
    }

    let (a, b) = state.totals();
    let (mine, theirs) = if human == Player::A { (a, b) } else { (b, a) };
    if state.is_terminal() {
        let verdict = match mine.cmp(&theirs) {
            std::cmp::Ordering::Greater => "you win",
            std::cmp::Ordering::Less => "you lose",
            std::cmp::Ordering::Equal => "tie",
        };
        writeln!(out, "game over: you {mine}, engine {theirs} ({verdict})")?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn play(pos: &str, advantage: i32, role: Role, script: &str) -> (GameState, String) {
        let mut out = Vec::new();
        let state = run(pos.parse().unwrap(), advantage, role, script.as_bytes(), &mut out).unwrap();
        (state, String::from_utf8(out).unwrap())
    }

    #[test]
    fn opening_the_loop_loses_eighteen_to_seven() {
        let (state, out) = play("12+10l", 3, Role::Opener, "10l\n12\n");
        assert!(state.is_terminal());
        assert!(out.contains("engine: keep"), "{out}");
        assert!(out.contains("game over: you 7, engine 18 (you lose)"), "{out}");
    }

    #[test]
    fn hints_and_bad_input() {
        let (state, out) = play("3+4l+8l", 0, Role::Opener, "?\nkeep\nbogus\nq\n");
        assert!(!state.is_terminal());
        assert!(out.contains("open 4l"), "{out}");
        assert!(out.contains("keep is not legal now"), "{out}");
        assert!(out.contains("unrecognized input"), "{out}");
    }

    #[test]
    fn human_as_controller() {
        let (state, out) = play("3+3", 0, Role::Controller, "keep\ngive\n");
        assert!(out.contains("engine: open 3"), "{out}");
        assert!(state.is_terminal());
        assert_eq!(state.margin(), 2);
    }
}
