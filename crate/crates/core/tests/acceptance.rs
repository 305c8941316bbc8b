//! Acceptance suite. Every criterion is checked at its stated tolerance and
//! reported on its own line; the test fails if any criterion fails.
//!
//! `cargo test -p dnb-core --test acceptance -- --nocapture`

use std::time::{Duration, Instant};

use dnb_core::engine::{Action, GameState};
use dnb_core::strategy::{procedural_evaluation, value_explicit};
use dnb_core::verify::{check_controlled_value, check_equivalence, check_invariants, VerifyReport};
use dnb_core::{controlled_value, core, Component, Oracle, Position};

type Outcome = Result<String, String>;

fn pos(s: &str) -> Position {
    s.parse().unwrap()
}

fn comp(s: &str) -> Component {
    s.parse().unwrap()
}

fn line(s: &str) -> Vec<Component> {
    s.split(',').map(comp).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn small_position_opening_order() -> Outcome {
    let start = Instant::now();
    let oracle = Oracle::new();
    let g = pos("3+4l+8l");
    let v = oracle.value(&g);
    let lines = oracle.enumerate_optimal_lines(&g).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(v == 1, || format!("v = {v}"))?;
    ensure(lines == [line("4l,8l,3")], || format!("lines = {lines:?}"))?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("v=1, line 4l,8l,3 in {elapsed:?}"))
}

fn two_optimal_lines() -> Outcome {
    let start = Instant::now();
    let g = pos("3^5+4l+8l");
    let c = controlled_value(&g);
    let mut lines = Oracle::new().enumerate_optimal_lines(&g).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    lines.sort();
    let mut want = vec![line("3,3,4l,3,3,8l,3"), line("3,4l,3,3,3,8l,3")];
    want.sort();
    ensure(c == -3, || format!("c = {c}"))?;
    ensure(lines == want, || format!("lines = {lines:?}"))?;
    within(elapsed, Duration::from_millis(10))?;
    Ok(format!("c=-3, exactly 2 lines in {elapsed:?}"))
}

fn three_chain_sequence() -> Outcome {
    let oracle = Oracle::new();
    let got: Vec<i32> = (0..8)
        .map(|n| oracle.value(&Position::from_components(vec![comp("3"); n])))
        .collect();
    ensure(got == [0, 3, 2, 1, 2, 1, 2, 1], || format!("got {got:?}"))?;
    Ok(format!("{got:?}"))
}

fn three_chains_and_four_loops_table() -> Outcome {
    let want = [
        [0, 4, 0, 4, 0, 4, 0],
        [3, 1, 3, 1, 3, 1, 3],
        [2, 2, 2, 2, 2, 2, 2],
        [1, 1, 1, 1, 1, 1, 1],
    ];
    let oracle = Oracle::new();
    let mut cells = 0;
    for (theta, row) in want.iter().enumerate() {
        for (f, &expected) in row.iter().enumerate() {
            let p: Position = std::iter::repeat_n(comp("3"), theta)
                .chain(std::iter::repeat_n(comp("4l"), f))
                .collect();
            let searched = oracle.value(&p);
            let explicit = if p.is_empty() { 0 } else { value_explicit(&p).map_err(|e| e.to_string())? };
            ensure(searched == expected && explicit == expected, || {
                format!("theta={theta} f={f}: expected {expected}, search {searched}, explicit {explicit}")
            })?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells match"))
}

fn operator_trace() -> Outcome {
    let g = pos("8l^2+18+6l^9+3+4l^101");
    let d = core(&g).map_err(|e| e.to_string())?;
    ensure(d.core == pos("8l^2+18"), || format!("core = {}", d.core))?;
    let e = procedural_evaluation(&g).map_err(|e| e.to_string())?;
    let t = e.trace.ok_or("no operator trace")?;
    let got = (t.core_value, t.after_sigma, t.after_theta, t.value);
    ensure(got == (18, 4, 3, 1), || format!("trace = {got:?}"))?;
    ensure(e.value == 1, || format!("v = {}", e.value))?;
    Ok("18 -> 4 -> 3 -> 1".into())
}

fn twelve_chain_ten_loop_playouts() -> Outcome {
    let mut scores = Vec::new();
    for (first, second, want) in [("10l", "12", (7, 18)), ("12", "10l", (5, 20))] {
        let s = GameState::new_game(pos("12+10l"), 3)
            .and_then(|s| s.apply(Action::open(comp(first))))
            .and_then(|s| s.apply(Action::Keep))
            .and_then(|s| s.apply(Action::open(comp(second))))
            .and_then(|s| s.apply(Action::GiveUp))
            .map_err(|e| e.to_string())?;
        ensure(s.is_terminal(), || "game not over".into())?;
        ensure(s.totals() == want, || format!("opening {first} first: {:?}", s.totals()))?;
        scores.push(format!("{}-{}", want.1, want.0));
    }
    Ok(scores.join(", "))
}

fn report_outcome(r: &VerifyReport) -> Result<(), String> {
    ensure(r.passed(), || {
        let first = &r.failures[0];
        format!(
            "{} failures, first: {} [{}] expected {} got {}",
            r.failures.len(),
            first.position,
            first.check,
            first.expected,
            first.actual
        )
    })
}

fn exhaustive_equivalence(r: &VerifyReport) -> Outcome {
    report_outcome(r)?;
    within(Duration::from_secs_f64(r.elapsed_secs), Duration::from_secs(60))?;
    Ok(format!("{} positions, 0 failures, {:.2}s", r.positions_checked, r.elapsed_secs))
}

fn committed_control() -> Outcome {
    let r = check_controlled_value(28);
    report_outcome(&r)?;
    Ok(format!("{} positions, 0 failures", r.positions_checked))
}

fn invariant_suite() -> Outcome {
    let r = check_invariants(36);
    report_outcome(&r)?;
    Ok(format!("{} positions, 0 failures", r.positions_checked))
}

fn case_coverage(r: &VerifyReport) -> Outcome {
    let value_cases: Vec<(&String, &u64)> = r
        .coverage
        .iter()
        .filter(|(k, _)| k.starts_with("explicit.") || k.starts_with("procedural."))
        .collect();
    ensure(value_cases.len() == 11, || format!("expected 11 counters, found {}", value_cases.len()))?;
    let dead = r.dead_cases();
    ensure(dead.is_empty(), || format!("never reached: {dead:?}"))?;
    let min = value_cases.iter().map(|(_, &n)| n).min().unwrap_or(0);
    Ok(format!("{} value-case counters, smallest {min}", value_cases.len()))
}

#[test]
fn acceptance_criteria() {
    let equivalence = check_equivalence(36);
    let results: Vec<(&str, Outcome)> = vec![
        ("v(3+4l+8l)=1, opens 4l then 8l, < 1 ms", small_position_opening_order()),
        ("c(3^5+4l+8l)=-3, exactly two optimal lines, < 10 ms", two_optimal_lines()),
        ("v(3^n) for n=0..7", three_chain_sequence()),
        ("3-chain / 4-loop table, 28 cells", three_chains_and_four_loops_table()),
        ("operator trace 18 -> 4 -> 3 -> 1", operator_trace()),
        ("12+10l playouts 18-7 and 20-5", twelve_chain_ten_loop_playouts()),
        ("exhaustive equivalence, size <= 36, <= 60 s", exhaustive_equivalence(&equivalence)),
        ("committed control = c, size <= 28", committed_control()),
        ("invariant suite, size <= 36", invariant_suite()),
        ("every value case reached, size <= 36", case_coverage(&equivalence)),
    ];

    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS  AC{:02}  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  AC{:02}  {name}: {why}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
