//! Ground-truth evaluation by memoized game-tree search.
//!
//! After the opener opens a component `C` of `G`, the controller either keeps
//! control (takes all but the 2- or 4-box handout and stays controller) or
//! gives up control (takes all of `C` and becomes the opener of `G - C`).
//! The value `v(G)` is the controller's margin under best play from both
//! sides, so
//!
//! ```text
//! v(G; C) = (|C| - h) + |v(G - C) - h|      h = 2 for chains, 4 for loops
//! v(G)    = min over C of v(G; C),          v(empty) = 0
//! ```
//!
//! The same module also searches the game where one side is publicly
//! committed to the control strategy, which gives an independent route to
//! the controlled value.

use dashmap::DashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::position::{Component, Position};

/// The controller's two margins after a component is opened, each assuming
/// optimal play afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ControllerMargins {
    pub keep: i32,
    pub give_up: i32,
}

impl ControllerMargins {
    pub fn best(self) -> i32 {
        self.keep.max(self.give_up)
    }

    /// True when either choice is optimal.
    pub fn is_tie(self) -> bool {
        self.keep == self.give_up
    }
}

fn margins(opened: Component, rest_value: i32) -> ControllerMargins {
    let len = opened.len() as i32;
    let handout = opened.handout() as i32;
    ControllerMargins {
        keep: len - 2 * handout + rest_value,
        give_up: len - rest_value,
    }
}

/// Who is to open in the committed-control game: the opponent of the
/// committed player, or (after a give-up) the committed player itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum CommittedTurn {
    OpponentOpens,
    CommittedOpens,
}

/// The committed controller keeps control unless the opened component was
/// the last one, or it was a loop and only 3-chains remain.
pub fn committed_keeps(remainder: &Position, opened: Component) -> bool {
    if remainder.is_empty() {
        return false;
    }
    let only_three_chains = remainder.components().iter().all(|c| c.is_three_chain());
    !(opened.is_loop() && only_three_chains)
}

/// What the committed player opens when it has to: a 3-chain if there is one,
/// otherwise the shortest loop, otherwise the shortest chain. After giving up
/// control it only ever faces 3-chains.
pub fn committed_opening(pos: &Position) -> Result<Component> {
    crate::strategy::standard_move(pos)
}

/// Memoizing evaluator. Shareable across threads; inserts are idempotent, so
/// concurrent evaluations agree regardless of interleaving.
#[derive(Debug, Default)]
pub struct Oracle {
    values: DashMap<Position, i32>,
    committed: DashMap<(Position, CommittedTurn), i32>,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of cached positions.
    pub fn cached(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, pos: &Position) -> i32 {
        if pos.is_empty() {
            return 0;
        }
        if let Some(v) = self.values.get(pos) {
            return *v;
        }
        let v = pos
            .distinct()
            .map(|c| self.value_after(pos, c).best())
            .min()
            .expect("nonempty position");
        debug_assert!(v >= 0, "negative value for {pos}");
        debug_assert_eq!((v - pos.size() as i32).rem_euclid(2), 0, "parity of {pos}");
        self.values.insert(pos.clone(), v);
        v
    }

    fn value_after(&self, pos: &Position, c: Component) -> ControllerMargins {
        let rest = pos.remove(c).expect("component taken from the position");
        margins(c, self.value(&rest))
    }

    /// `v(G; C)`: the value once the opener has opened `c`.
    pub fn value_given_open(&self, pos: &Position, c: Component) -> Result<i32> {
        Ok(self.controller_margins(pos, c)?.best())
    }

    /// Both controller options after `c` is opened in `pos`.
    pub fn controller_margins(&self, pos: &Position, c: Component) -> Result<ControllerMargins> {
        let rest = pos.remove(c)?;
        Ok(margins(c, self.value(&rest)))
    }

    /// Distinct components whose opening attains `v(pos)`.
    pub fn optimal_openings(&self, pos: &Position) -> Result<Vec<Component>> {
        if pos.is_empty() {
            return Err(Error::EmptyPosition);
        }
        let v = self.value(pos);
        Ok(pos
            .distinct()
            .filter(|&c| self.value_after(pos, c).best() == v)
            .collect())
    }

    /// Every order in which the components can be opened when the opener
    /// always picks an optimal component. Equal components do not multiply
    /// lines.
    pub fn enumerate_optimal_lines(&self, pos: &Position) -> Result<Vec<Vec<Component>>> {
        if pos.is_empty() {
            return Err(Error::EmptyPosition);
        }
        let mut lines = Vec::new();
        self.extend_lines(pos, &mut Vec::new(), &mut lines);
        Ok(lines)
    }

    fn extend_lines(&self, pos: &Position, prefix: &mut Vec<Component>, out: &mut Vec<Vec<Component>>) {
        if pos.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for c in self.optimal_openings(pos).expect("nonempty position") {
            prefix.push(c);
            self.extend_lines(&pos.remove(c).expect("component present"), prefix, out);
            prefix.pop();
        }
    }

    /// Margin of a controller publicly committed to the control strategy
    /// against an opener who knows this and plays to maximize their own
    /// boxes. Found by search, never from the closed form.
    pub fn committed_control_value(&self, pos: &Position) -> i32 {
        self.committed(pos, CommittedTurn::OpponentOpens)
    }

    /// The committed controller's margin once the opponent has opened `c`.
    pub fn committed_value_given_open(&self, pos: &Position, c: Component) -> Result<i32> {
        let rest = pos.remove(c)?;
        Ok(self.committed_after_open(&rest, c))
    }

    /// The committed player's margins when it has opened `opened` and the
    /// opponent, now controller, keeps or gives up control.
    pub fn committed_margins_when_opening(&self, remainder: &Position, opened: Component) -> ControllerMargins {
        let len = opened.len() as i32;
        let handout = opened.handout() as i32;
        // Seen from the committed player, who is not the one choosing here.
        ControllerMargins {
            keep: -(len - 2 * handout) + self.committed(remainder, CommittedTurn::CommittedOpens),
            give_up: -len + self.committed(remainder, CommittedTurn::OpponentOpens),
        }
    }

    fn committed_after_open(&self, rest: &Position, c: Component) -> i32 {
        let len = c.len() as i32;
        let handout = c.handout() as i32;
        if committed_keeps(rest, c) {
            len - 2 * handout + self.committed(rest, CommittedTurn::OpponentOpens)
        } else {
            len + self.committed(rest, CommittedTurn::CommittedOpens)
        }
    }

    fn committed(&self, pos: &Position, turn: CommittedTurn) -> i32 {
        if pos.is_empty() {
            return 0;
        }
        let key = (pos.clone(), turn);
        if let Some(d) = self.committed.get(&key) {
            return *d;
        }
        let d = match turn {
            CommittedTurn::OpponentOpens => pos
                .distinct()
                .map(|c| self.committed_after_open(&pos.remove(c).expect("present"), c))
                .min()
                .expect("nonempty position"),
            CommittedTurn::CommittedOpens => {
                let c = committed_opening(pos).expect("nonempty position");
                let rest = pos.remove(c).expect("present");
                // The opponent picks whichever option leaves the committed
                // player worse off.
                let m = self.committed_margins_when_opening(&rest, c);
                m.keep.min(m.give_up)
            }
        };
        self.committed.insert(key, d);
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{controlled_value, measures};
    use crate::position::enumerate_positions;

    fn pos(s: &str) -> Position {
        s.parse().unwrap()
    }

    fn comp(s: &str) -> Component {
        s.parse().unwrap()
    }

    /// Plain minimax over explicit keep/give-up moves, without memoization or
    /// the absolute-value shortcut.
    fn brute_force(pos: &Position) -> i32 {
        if pos.is_empty() {
            return 0;
        }
        pos.distinct()
            .map(|c| {
                let rest = pos.remove(c).unwrap();
                let len = c.len() as i32;
                let h = c.handout() as i32;
                let keep = (len - h) - h + brute_force(&rest);
                let give = len - brute_force(&rest);
                keep.max(give)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn matches_unmemoized_search() {
        let oracle = Oracle::new();
        for p in enumerate_positions(22) {
            assert_eq!(oracle.value(&p), brute_force(&p), "{p}");
        }
    }

    #[test]
    fn values_after_opening() {
        let o = Oracle::new();
        assert_eq!(o.value_given_open(&pos("3+3"), comp("3")).unwrap(), 2);
        assert_eq!(o.value_given_open(&pos("12+10l"), comp("10l")).unwrap(), 14);
        assert_eq!(o.value_given_open(&pos("12+10l"), comp("12")).unwrap(), 18);
        assert_eq!(
            o.value_given_open(&pos("12+10l"), comp("4l")),
            Err(Error::ComponentNotPresent(comp("4l")))
        );
    }

    #[test]
    fn values() {
        let o = Oracle::new();
        assert_eq!(o.value(&Position::empty()), 0);
        let threes: Vec<i32> = (0..8)
            .map(|n| o.value(&Position::from_components(vec![comp("3"); n])))
            .collect();
        assert_eq!(threes, [0, 3, 2, 1, 2, 1, 2, 1]);
        assert_eq!(o.value(&pos("3+4l+8l")), 1);
        assert_eq!(o.value(&pos("12+10l")), 14);
    }

    #[test]
    fn optimal_openings() {
        let o = Oracle::new();
        // v(G;4l)=1, v(G;3)=3, v(G;8l)=7
        let g = pos("3+4l+8l");
        assert_eq!(o.value_given_open(&g, comp("4l")).unwrap(), 1);
        assert_eq!(o.value_given_open(&g, comp("3")).unwrap(), 3);
        assert_eq!(o.value_given_open(&g, comp("8l")).unwrap(), 7);
        assert_eq!(o.optimal_openings(&g).unwrap(), [comp("4l")]);
        assert_eq!(o.optimal_openings(&pos("3^5+4l+8l")).unwrap(), [comp("3")]);
        assert_eq!(o.optimal_openings(&pos("6l")).unwrap(), [comp("6l")]);
        assert_eq!(o.optimal_openings(&Position::empty()), Err(Error::EmptyPosition));
    }

    #[test]
    fn optimal_lines() {
        let o = Oracle::new();
        let line = |s: &str| -> Vec<Component> { s.split(',').map(comp).collect() };

        let mut lines = o.enumerate_optimal_lines(&pos("3^5+4l+8l")).unwrap();
        lines.sort();
        let mut expected = vec![line("3,3,4l,3,3,8l,3"), line("3,4l,3,3,3,8l,3")];
        expected.sort();
        assert_eq!(lines, expected);

        assert_eq!(o.enumerate_optimal_lines(&pos("3+3")).unwrap(), [line("3,3")]);

        let g = pos("3+8l");
        assert!(o.value_given_open(&g, comp("3")).unwrap() > o.value(&g));
        assert_eq!(o.enumerate_optimal_lines(&g).unwrap(), [line("8l,3")]);
        assert_eq!(o.enumerate_optimal_lines(&Position::empty()), Err(Error::EmptyPosition));
    }

    #[test]
    fn committed_control_values() {
        let o = Oracle::new();
        assert_eq!(o.committed_control_value(&pos("12+10l")), 14);
        assert_eq!(o.committed_control_value(&pos("3^2")), 2);
        assert_eq!(o.committed_control_value(&Position::empty()), 0);
    }

    #[test]
    fn committed_player_policy() {
        assert!(!committed_keeps(&Position::empty(), comp("5")));
        assert!(!committed_keeps(&pos("3^2"), comp("6l")));
        assert!(committed_keeps(&pos("3^2"), comp("5")));
        assert!(committed_keeps(&pos("3+4"), comp("6l")));
    }

    #[test]
    fn relations_over_small_positions() {
        let o = Oracle::new();
        for p in enumerate_positions(24) {
            let v = o.value(&p);
            let m = measures(&p);
            assert!(v >= 0, "{p}");
            assert_eq!((v - m.size as i32).rem_euclid(2), 0, "{p}");
            for c in p.distinct() {
                let vc = o.value_given_open(&p, c).unwrap();
                assert_eq!((vc - m.size as i32).rem_euclid(2), 0, "{p} open {c}");
            }
            assert!(m.c <= v, "{p}");
            if m.c >= 2 {
                assert_eq!(v, m.c, "{p}");
            }
            assert_eq!(o.committed_control_value(&p), controlled_value(&p), "{p}");
        }
    }

    #[test]
    fn cache_is_order_independent() {
        let warm = Oracle::new();
        let all: Vec<Position> = enumerate_positions(20).collect();
        for p in all.iter().rev() {
            warm.value(p);
        }
        for p in &all {
            assert_eq!(Oracle::new().value(p), warm.value(p), "{p}");
        }
    }

    #[test]
    fn handles_many_components() {
        let o = Oracle::new();
        let g = pos("3^70");
        assert_eq!(o.value(&g), 2);
        let g = pos("4l^80");
        assert_eq!(o.value(&g), 0);
    }
}
