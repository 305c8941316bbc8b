//! Plain-text renderings shared by the subcommands.

use std::fmt::Write;

use dnb_core::strategy::{controller_decision, value_given_open, ControllerDecision, OpenerRule};
use dnb_core::{measures, opener_move, value_explicit, Component, Oracle, Position, Result};

/// Measures, value, and the value after opening each distinct component.
pub fn evaluation(pos: &Position) -> Result<String> {
    let m = measures(pos);
    let v = value_explicit(pos)?;
    let mut out = String::new();
    writeln!(out, "position {pos}").unwrap();
    writeln!(
        out,
        "size={} theta={} f={} s={} chains={} loops={} tb={} c={} v={}",
        m.size, m.theta, m.f, m.s, m.num_chains, m.num_loops, m.tb, m.c, v
    )
    .unwrap();
    writeln!(out, "{:<8}{:>8}  controller", "open", "v(G;C)").unwrap();
    for c in pos.distinct() {
        let vc = value_given_open(pos, c)?;
        let reply = match controller_decision(&pos.remove(c)?, c) {
            ControllerDecision::Keep => "keep",
            ControllerDecision::GiveUp => "give up",
        };
        let mark = if vc == v { "*" } else { "" };
        let row = format!("{:<8}{:>8}  {reply:<8}{mark}", c.to_string(), vc);
        writeln!(out, "{}", row.trim_end()).unwrap();
    }
    Ok(out)
}

pub fn best_move(pos: &Position) -> Result<String> {
    let r = opener_move(pos)?;
    Ok(match r.rule {
        OpenerRule::Standard => format!("open {} (standard move)", r.chosen),
        rule => format!("open {} ({rule})", r.chosen),
    })
}

/// Optimal opening orders, at most `limit` of them.
pub fn lines(pos: &Position, limit: usize) -> Result<String> {
    let all = Oracle::new().enumerate_optimal_lines(pos)?;
    let mut out = String::new();
    for line in all.iter().take(limit) {
        let names: Vec<String> = line.iter().map(Component::to_string).collect();
        writeln!(out, "{}", names.join(", ")).unwrap();
    }
    if all.len() > limit {
        writeln!(out, "... {} lines in total", all.len()).unwrap();
    }
    Ok(out)
}
