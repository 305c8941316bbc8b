//! Scalar measures of a position: size, component counts, terminal bonus
//! and controlled value.

use serde::Serialize;

use crate::position::Position;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeasureSet {
    pub size: u32,
    /// Number of 3-chains.
    pub theta: u32,
    /// Number of 4-loops.
    pub f: u32,
    /// Number of 6-loops.
    pub s: u32,
    pub num_chains: u32,
    pub num_loops: u32,
    pub tb: i32,
    pub c: i32,
}

/// 0 for the empty position, 8 when only loops remain, 6 for loops plus
/// 3-chains and nothing else, 4 otherwise.
pub fn terminal_bonus(pos: &Position) -> i32 {
    if pos.is_empty() {
        return 0;
    }
    let has_loop = pos.loops().next().is_some();
    let other_chains = pos.chains().any(|c| !c.is_three_chain());
    let three_chains = pos.chains().any(|c| c.is_three_chain());
    match (has_loop, three_chains, other_chains) {
        (true, false, false) => 8,
        (true, true, false) => 6,
        _ => 4,
    }
}

/// Margin a controller committed to always keeping control (bar the last
/// component, or a loop with only 3-chains left) achieves against a
/// best-responding opener.
pub fn controlled_value(pos: &Position) -> i32 {
    let size = pos.size() as i32;
    let chains = pos.chains().count() as i32;
    let loops = pos.loops().count() as i32;
    let c = size - 4 * chains - 8 * loops + terminal_bonus(pos);
    debug_assert_eq!(c, controlled_value_by_components(pos));
    c
}

/// Same quantity summed component by component: each chain contributes its
/// length minus 4, each loop its length minus 8.
pub fn controlled_value_by_components(pos: &Position) -> i32 {
    let chains: i32 = pos.chains().map(|c| c.len() as i32 - 4).sum();
    let loops: i32 = pos.loops().map(|l| l.len() as i32 - 8).sum();
    chains + loops + terminal_bonus(pos)
}

pub fn measures(pos: &Position) -> MeasureSet {
    let mut m = MeasureSet {
        size: 0,
        theta: 0,
        f: 0,
        s: 0,
        num_chains: 0,
        num_loops: 0,
        tb: terminal_bonus(pos),
        c: 0,
    };
    for &comp in pos.components() {
        m.size += comp.len();
        if comp.is_chain() {
            m.num_chains += 1;
            m.theta += u32::from(comp.len() == 3);
        } else {
            m.num_loops += 1;
            m.f += u32::from(comp.len() == 4);
            m.s += u32::from(comp.len() == 6);
        }
    }
    m.c = m.size as i32 - 4 * m.num_chains as i32 - 8 * m.num_loops as i32 + m.tb;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::position::enumerate_positions;

    fn pos(s: &str) -> Position {
        s.parse().unwrap()
    }

    #[test]
    fn terminal_bonus_cases() {
        assert_eq!(terminal_bonus(&Position::empty()), 0);
        assert_eq!(terminal_bonus(&pos("4l+8l")), 8);
        assert_eq!(terminal_bonus(&pos("3+4l+8l")), 6);
        assert_eq!(terminal_bonus(&pos("3+4")), 4);
        assert_eq!(terminal_bonus(&pos("3^3")), 4);
        assert_eq!(terminal_bonus(&pos("3+4+6l")), 4);
    }

    #[test]
    fn controlled_values() {
        assert_eq!(controlled_value(&pos("3^5+4l+8l")), -3);
        assert_eq!(controlled_value(&pos("3+4l+8l")), 1);
        assert_eq!(controlled_value(&Position::empty()), 0);
        assert_eq!(controlled_value(&pos("12+10l")), 14);
    }

    #[test]
    fn measure_sets() {
        let m = measures(&pos("3^5+4l+8l"));
        assert_eq!((m.size, m.theta, m.f, m.s, m.tb, m.c), (27, 5, 1, 0, 6, -3));
        assert_eq!((m.num_chains, m.num_loops), (5, 2));

        let m = measures(&pos("6l^4"));
        assert_eq!((m.size, m.theta, m.f, m.s, m.tb, m.c), (24, 0, 0, 4, 8, 0));

        let m = measures(&pos("3"));
        assert_eq!((m.size, m.theta, m.tb, m.c), (3, 1, 4, 3));
    }

    #[test]
    fn congruences_hold_over_small_positions() {
        for p in enumerate_positions(30) {
            let m = measures(&p);
            assert_eq!(m.c, controlled_value_by_components(&p), "{p}");
            assert_eq!(m.c, controlled_value(&p), "{p}");
            assert_eq!((m.c - m.size as i32).rem_euclid(2), 0, "{p}");
            if m.theta == 0 {
                assert_eq!((m.c - m.size as i32).rem_euclid(4), 0, "{p}");
            }
            for c in p.distinct() {
                let tb = terminal_bonus(&p.remove(c).unwrap());
                assert!([0, 4, 6, 8].contains(&tb));
            }
        }
    }
}
