//! Closed-form values and optimal strategies.
//!
//! Nothing here searches the game tree. Every function is linear in the
//! number of components and is checked against [`crate::oracle`] by the
//! verification suite.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{controlled_value, measures, MeasureSet};
use crate::position::{Component, Position};

/// Why the standard move picked what it picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardReason {
    ThreeChain,
    ShortestLoop,
    ShortestChain,
}

/// Open a 3-chain if present, otherwise a shortest loop, otherwise a
/// shortest chain.
pub fn standard_move(pos: &Position) -> Result<Component> {
    standard_move_with_reason(pos).map(|(c, _)| c)
}

fn standard_move_with_reason(pos: &Position) -> Result<(Component, StandardReason)> {
    if let Some(three) = pos.chains().find(|c| c.is_three_chain()) {
        return Ok((three, StandardReason::ThreeChain));
    }
    if let Some(l) = pos.shortest_loop() {
        return Ok((l, StandardReason::ShortestLoop));
    }
    pos.shortest_chain()
        .map(|c| (c, StandardReason::ShortestChain))
        .ok_or(Error::EmptyPosition)
}

/// Which opener rule fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OpenerRule {
    /// `c >= 2` and the position is one 3-chain plus loops.
    LoneThreeChainWithLoops,
    /// `c` in {-1, 0, 1} and a 4-loop is present (but not `3+3+3+4l`).
    FourLoopSmallMargin,
    /// `c <= -2` and the position is `4l + 3 + H`, `H` free of 3-chains with
    /// size divisible by 4.
    FourLoopNegativeMargin,
    Standard,
}

impl fmt::Display for OpenerRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpenerRule::LoneThreeChainWithLoops => "shortest loop: lone 3-chain with loops, c >= 2",
            OpenerRule::FourLoopSmallMargin => "shortest loop: 4-loop present, c in {-1,0,1}",
            OpenerRule::FourLoopNegativeMargin => "shortest loop: 4l + 3 + H with 4 | size(H), c <= -2",
            OpenerRule::Standard => "standard move",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OpenerRationale {
    pub chosen: Component,
    pub rule: OpenerRule,
    pub standard_reason: Option<StandardReason>,
}

/// An optimal component for the opener to open, with the rule that chose it.
pub fn opener_move(pos: &Position) -> Result<OpenerRationale> {
    if pos.is_empty() {
        return Err(Error::EmptyPosition);
    }
    let m = measures(pos);
    let shortest_loop = pos.shortest_loop();

    let rule = if m.c >= 2 && m.theta == 1 && m.num_chains == 1 && m.num_loops >= 1 {
        Some(OpenerRule::LoneThreeChainWithLoops)
    } else if (-1..=1).contains(&m.c) && m.f >= 1 && !is_four_loop_and_three_threes(pos) {
        Some(OpenerRule::FourLoopSmallMargin)
    } else if m.c <= -2 && m.f >= 1 && m.theta == 1 && (m.size - 4 - 3).is_multiple_of(4) {
        Some(OpenerRule::FourLoopNegativeMargin)
    } else {
        None
    };

    Ok(match (rule, shortest_loop) {
        (Some(rule), Some(chosen)) => OpenerRationale { chosen, rule, standard_reason: None },
        _ => {
            let (chosen, reason) = standard_move_with_reason(pos)?;
            OpenerRationale {
                chosen,
                rule: OpenerRule::Standard,
                standard_reason: Some(reason),
            }
        }
    })
}

/// `3+3+3+4l`
fn is_four_loop_and_three_threes(pos: &Position) -> bool {
    is_four_loop_and_threes(pos, 3)
}

fn is_four_loop_and_threes(pos: &Position, threes: usize) -> bool {
    let cs = pos.components();
    cs.len() == threes + 1
        && cs[..threes].iter().all(|c| c.is_three_chain())
        && cs[threes].is_loop()
        && cs[threes].len() == 4
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ControllerDecision {
    Keep,
    GiveUp,
}

/// The controller's optimal response after `opened` was opened, leaving
/// `remainder`. Keeps control on a loop iff `c(remainder) > 4` and on a chain
/// iff `v(remainder) > 2`.
pub fn controller_decision(remainder: &Position, opened: Component) -> ControllerDecision {
    let keep = if opened.is_loop() {
        controlled_value(remainder) > 4
    } else {
        value_exceeds_two(remainder)
    };
    if keep {
        ControllerDecision::Keep
    } else {
        ControllerDecision::GiveUp
    }
}

/// Whether `v(pos) > 2`, decided from the measures alone.
pub fn value_exceeds_two(pos: &Position) -> bool {
    if pos.is_empty() {
        return false;
    }
    let m = measures(pos);
    if m.c > 2 {
        return true;
    }
    let size_mod4 = m.size % 4;
    let shape = (m.theta == 1 && size_mod4 == 3) || (m.theta == 0 && size_mod4 != 2);
    let boost = m.c + 4 * m.f as i32;
    let residue = m.c.rem_euclid(8);
    let counts = (boost > 2 && matches!(residue, 3..=5)) || (boost < 2 && m.f.is_multiple_of(2));
    shape && counts
}

/// The prioritized case of the explicit value formula that produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExplicitCase {
    /// `c >= 2`: the value is `c`.
    LargeControlledValue,
    /// `c = 0` with a 4-loop, other than `4l+3+3`.
    ZeroWithFourLoop,
    /// Few 3-chains, `c + 4f >= 2`: read off `c mod 8`.
    ResidueModEight,
    /// Few 3-chains, `c + 4f < 2`, odd size.
    LowOdd,
    /// Few 3-chains, `c + 4f < 2`, size 2 mod 4.
    LowTwoModFour,
    /// Few 3-chains, `c + 4f < 2`, size 0 mod 4.
    LowZeroModFour,
    /// Everything else: 1 or 2 by parity.
    Parity,
}

impl ExplicitCase {
    pub const ALL: [ExplicitCase; 7] = [
        ExplicitCase::LargeControlledValue,
        ExplicitCase::ZeroWithFourLoop,
        ExplicitCase::ResidueModEight,
        ExplicitCase::LowOdd,
        ExplicitCase::LowTwoModFour,
        ExplicitCase::LowZeroModFour,
        ExplicitCase::Parity,
    ];
}

/// True when at most one 3-chain is present and, if there is one, the size is
/// 3 mod 4. Both closed forms treat these positions specially.
fn few_three_chains(m: &MeasureSet) -> bool {
    m.theta == 0 || (m.theta == 1 && m.size % 4 == 3)
}

/// `3+3+4l`
fn is_four_loop_and_two_threes(pos: &Position) -> bool {
    is_four_loop_and_threes(pos, 2)
}

pub fn value_explicit(pos: &Position) -> Result<i32> {
    value_explicit_with_case(pos).map(|(v, _)| v)
}

/// The explicit value together with the first case that applied.
pub fn value_explicit_with_case(pos: &Position) -> Result<(i32, ExplicitCase)> {
    if pos.is_empty() {
        return Err(Error::EmptyPosition);
    }
    let m = measures(pos);
    let c = m.c;
    let f = m.f as i32;

    if c >= 2 {
        return Ok((c, ExplicitCase::LargeControlledValue));
    }
    if c == 0 && m.f >= 1 && !is_four_loop_and_two_threes(pos) {
        return Ok((0, ExplicitCase::ZeroWithFourLoop));
    }
    if few_three_chains(&m) {
        if c + 4 * f >= 2 {
            let v = match c.rem_euclid(8) {
                0 => 0,
                1 | 7 => 1,
                2 | 6 => 2,
                3 | 5 => 3,
                _ => 4,
            };
            return Ok((v, ExplicitCase::ResidueModEight));
        }
        let f_odd = m.f % 2 == 1;
        return Ok(match m.size % 4 {
            1 | 3 => (if f_odd { 1 } else { 3 }, ExplicitCase::LowOdd),
            2 => (2, ExplicitCase::LowTwoModFour),
            _ => (if f_odd { 0 } else { 4 }, ExplicitCase::LowZeroModFour),
        });
    }
    Ok((parity_value(&m), ExplicitCase::Parity))
}

fn parity_value(m: &MeasureSet) -> i32 {
    if m.size % 2 == 1 {
        1
    } else {
        2
    }
}

/// `v(pos; c)` from the closed form applied to `pos - c`.
pub fn value_given_open(pos: &Position, c: Component) -> Result<i32> {
    let rest = pos.remove(c)?;
    let rest_value = if rest.is_empty() { 0 } else { value_explicit(&rest)? };
    let len = c.len() as i32;
    let handout = c.handout() as i32;
    Ok(len - handout + (rest_value - handout).abs())
}

/// The core of a position with at most one 3-chain, and what lies outside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreDecomposition {
    pub core: Position,
    /// 3-chains outside the core (0 or 1).
    pub theta_prime: u32,
    pub s_outside: u32,
    pub f_outside: u32,
}

/// Loops of length at least 8, plus either every chain of length at least 4
/// or, when the only chain is a 3-chain, that 3-chain.
pub fn core(pos: &Position) -> Result<CoreDecomposition> {
    let m = measures(pos);
    if m.theta > 1 {
        return Err(Error::TooManyThreeChains(m.theta as usize));
    }
    let long_chains: Vec<Component> = pos.chains().filter(|c| c.len() >= 4).collect();
    let chains = if long_chains.is_empty() {
        pos.chains().filter(|c| c.is_three_chain()).collect()
    } else {
        long_chains
    };
    let core: Position = chains
        .into_iter()
        .chain(pos.loops().filter(|l| l.len() >= 8))
        .collect();
    let core_theta = core.chains().filter(|c| c.is_three_chain()).count() as u32;
    Ok(CoreDecomposition {
        theta_prime: m.theta - core_theta,
        s_outside: m.s,
        f_outside: m.f,
        core,
    })
}

/// `|x - 4| + 2`: steps down by 2 until `[2, 4]`, then reflects across 3.
pub fn sigma(x: i32) -> i32 {
    (x - 4).abs() + 2
}

/// `x - 1`.
pub fn theta_op(x: i32) -> i32 {
    x - 1
}

/// `|x - 4|`: steps down by 4 until `[0, 4]`, then reflects across 2.
pub fn phi(x: i32) -> i32 {
    (x - 4).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProceduralCase {
    LargeControlledValue,
    ZeroWithFourLoop,
    CoreOperators,
    Parity,
}

impl ProceduralCase {
    pub const ALL: [ProceduralCase; 4] = [
        ProceduralCase::LargeControlledValue,
        ProceduralCase::ZeroWithFourLoop,
        ProceduralCase::CoreOperators,
        ProceduralCase::Parity,
    ];
}

/// Intermediate values of the core-and-operators computation: start from the
/// core's controlled value, apply sigma once per 6-loop, theta once for a
/// 3-chain outside the core, then phi once per 4-loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OperatorTrace {
    pub core_value: i32,
    pub after_sigma: i32,
    pub after_theta: i32,
    pub value: i32,
}

pub fn operator_trace(pos: &Position) -> Result<OperatorTrace> {
    let d = core(pos)?;
    let core_value = controlled_value(&d.core);
    let after_sigma = (0..d.s_outside).fold(core_value, |x, _| sigma(x));
    let after_theta = (0..d.theta_prime).fold(after_sigma, |x, _| theta_op(x));
    let value = (0..d.f_outside).fold(after_theta, |x, _| phi(x));
    Ok(OperatorTrace { core_value, after_sigma, after_theta, value })
}

/// Result of evaluating every applicable procedural case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProceduralEvaluation {
    pub value: i32,
    /// Cases that applied, in order. `Parity` appears only when no other did.
    pub cases: Vec<ProceduralCase>,
    pub trace: Option<OperatorTrace>,
}

/// Evaluates all applicable procedural cases and checks that they agree.
pub fn procedural_evaluation(pos: &Position) -> Result<ProceduralEvaluation> {
    if pos.is_empty() {
        return Err(Error::EmptyPosition);
    }
    let m = measures(pos);
    let mut found: Vec<(ProceduralCase, i32)> = Vec::new();
    let mut trace = None;

    if m.c >= 2 {
        found.push((ProceduralCase::LargeControlledValue, m.c));
    }
    if m.c == 0 && m.f >= 1 && !is_four_loop_and_two_threes(pos) {
        found.push((ProceduralCase::ZeroWithFourLoop, 0));
    }
    if few_three_chains(&m) {
        let t = operator_trace(pos)?;
        found.push((ProceduralCase::CoreOperators, t.value));
        trace = Some(t);
    }
    if found.is_empty() {
        found.push((ProceduralCase::Parity, parity_value(&m)));
    }

    let value = found[0].1;
    if let Some(&(case, other)) = found.iter().find(|(_, v)| *v != value) {
        return Err(Error::Contradiction {
            position: pos.to_string(),
            detail: format!("{:?} gives {value} but {case:?} gives {other}", found[0].0),
        });
    }
    Ok(ProceduralEvaluation {
        value,
        cases: found.into_iter().map(|(c, _)| c).collect(),
        trace,
    })
}

pub fn value_procedural(pos: &Position) -> Result<i32> {
    procedural_evaluation(pos).map(|e| e.value)
}

/// `advantage - v(pos)` for a player who will open `pos` holding
/// `advantage` boxes. Positive means that player wins the game.
pub fn endgame_outcome(advantage: i32, pos: &Position) -> i32 {
    let v = if pos.is_empty() {
        0
    } else {
        value_explicit(pos).expect("nonempty position")
    };
    advantage - v
}
