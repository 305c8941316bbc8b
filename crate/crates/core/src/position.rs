//! Positions made of loops and long chains.
//!
//! A [`Position`] is a multiset of [`Component`]s kept in canonical order:
//! chains before loops, each group ascending by length. Two positions with
//! the same components therefore compare, hash and print identically, which
//! is what the memoizing evaluators key on.
//!
//! The textual notation is
//!
//! ```text
//! position := "0" | term ("+" term)*
//! term     := INT ["l" | "L"] ["^" INT]
//! ```
//!
//! A bare integer is a chain, an `l` suffix makes it a loop and `^k` repeats
//! the term `k` times. Whitespace is ignored. The empty position is `0`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Smallest long chain.
pub const MIN_CHAIN: u32 = 3;
/// Smallest loop.
pub const MIN_LOOP: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Chain,
    Loop,
}

/// A single chain or loop. Construction enforces the length rules, so every
/// value of this type is a legal endgame component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    kind: Kind,
    length: u32,
}

impl Component {
    pub fn new(kind: Kind, length: u32) -> Result<Self> {
        match kind {
            Kind::Chain if length < MIN_CHAIN => Err(Error::ShortChain(length)),
            Kind::Loop if length < MIN_LOOP || !length.is_multiple_of(2) => Err(Error::BadLoop(length)),
            _ => Ok(Component { kind, length }),
        }
    }

    pub fn chain(length: u32) -> Result<Self> {
        Self::new(Kind::Chain, length)
    }

    pub fn looped(length: u32) -> Result<Self> {
        Self::new(Kind::Loop, length)
    }

    pub fn kind(self) -> Kind {
        self.kind
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> u32 {
        self.length
    }

    pub fn is_chain(self) -> bool {
        self.kind == Kind::Chain
    }

    pub fn is_loop(self) -> bool {
        self.kind == Kind::Loop
    }

    pub fn is_three_chain(self) -> bool {
        self.kind == Kind::Chain && self.length == 3
    }

    /// Boxes handed back to the opener when the controller keeps control.
    pub fn handout(self) -> u32 {
        match self.kind {
            Kind::Chain => 2,
            Kind::Loop => 4,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Chain => write!(f, "{}", self.length),
            Kind::Loop => write!(f, "{}l", self.length),
        }
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pos: Position = s.parse()?;
        match pos.components() {
            [c] => Ok(*c),
            _ => Err(Error::Parse {
                input: s.to_string(),
                reason: "expected exactly one component".into(),
            }),
        }
    }
}

impl Serialize for Component {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Component {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A multiset of components in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Position {
    components: Vec<Component>,
}

impl Position {
    pub fn empty() -> Self {
        Position::default()
    }

    pub fn from_components(mut components: Vec<Component>) -> Self {
        components.sort_unstable();
        Position { components }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of components, counting repeats.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    /// Total number of boxes.
    pub fn size(&self) -> u32 {
        self.components.iter().map(|c| c.length).sum()
    }

    pub fn count(&self, c: Component) -> usize {
        self.components.iter().filter(|&&x| x == c).count()
    }

    pub fn contains(&self, c: Component) -> bool {
        self.components.binary_search(&c).is_ok()
    }

    pub fn chains(&self) -> impl Iterator<Item = Component> + '_ {
        self.components.iter().copied().filter(|c| c.is_chain())
    }

    pub fn loops(&self) -> impl Iterator<Item = Component> + '_ {
        self.components.iter().copied().filter(|c| c.is_loop())
    }

    /// Each distinct component once, in canonical order.
    pub fn distinct(&self) -> impl Iterator<Item = Component> + '_ {
        self.components
            .iter()
            .enumerate()
            .filter(|&(i, c)| i == 0 || self.components[i - 1] != *c)
            .map(|(_, &c)| c)
    }

    /// Removes one occurrence of `c`.
    pub fn remove(&self, c: Component) -> Result<Position> {
        let idx = self
            .components
            .binary_search(&c)
            .map_err(|_| Error::ComponentNotPresent(c))?;
        let mut components = self.components.clone();
        components.remove(idx);
        Ok(Position { components })
    }

    /// Adds one occurrence of `c`.
    pub fn with(&self, c: Component) -> Position {
        let idx = self.components.partition_point(|x| *x <= c);
        let mut components = self.components.clone();
        components.insert(idx, c);
        Position { components }
    }

    /// Multiset union.
    pub fn union(&self, other: &Position) -> Position {
        let mut components = self.components.clone();
        components.extend_from_slice(&other.components);
        Position::from_components(components)
    }

    /// Shortest loop, if any.
    pub fn shortest_loop(&self) -> Option<Component> {
        self.loops().next()
    }

    /// Shortest chain, if any.
    pub fn shortest_chain(&self) -> Option<Component> {
        self.chains().next()
    }
}

impl Ord for Position {
    fn cmp(&self, other: &Self) -> Ordering {
        self.components.cmp(&other.components)
    }
}

impl PartialOrd for Position {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Component> for Position {
    fn from_iter<I: IntoIterator<Item = Component>>(iter: I) -> Self {
        Position::from_components(iter.into_iter().collect())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.distinct().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{c}")?;
            let k = self.count(c);
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let malformed = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        if text.is_empty() {
            return Err(malformed("empty input"));
        }
        if text == "0" {
            return Ok(Position::empty());
        }

        let mut components = Vec::new();
        for term in text.split('+') {
            let (body, reps) = match term.split_once('^') {
                Some((body, reps)) => {
                    let k = parse_int(reps).ok_or_else(|| malformed("bad repetition count"))?;
                    if k == 0 {
                        return Err(malformed("repetition count must be at least 1"));
                    }
                    (body, k)
                }
                None => (term, 1),
            };
            let (digits, kind) = match body.strip_suffix(['l', 'L']) {
                Some(digits) => (digits, Kind::Loop),
                None => (body, Kind::Chain),
            };
            let length = parse_int(digits).ok_or_else(|| malformed("bad term"))?;
            let c = Component::new(kind, length)?;
            components.extend(std::iter::repeat_n(c, reps as usize));
        }
        Ok(Position::from_components(components))
    }
}

fn parse_int(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every component type that fits in `max_size` boxes, in canonical order.
fn component_types(max_size: u32) -> Vec<Component> {
    let chains = (MIN_CHAIN..=max_size).map(|n| Component { kind: Kind::Chain, length: n });
    let loops = (MIN_LOOP..=max_size)
        .step_by(2)
        .map(|n| Component { kind: Kind::Loop, length: n });
    chains.chain(loops).collect()
}

/// All nonempty positions with at most `max_size` boxes, ordered by size and
/// then by canonical order. Each position appears once.
pub fn enumerate_positions(max_size: u32) -> impl Iterator<Item = Position> {
    fn extend(
        types: &[Component],
        budget: u32,
        current: &mut Vec<Component>,
        out: &mut Vec<Position>,
    ) {
        for (i, &c) in types.iter().enumerate() {
            if c.length > budget {
                continue;
            }
            current.push(c);
            out.push(Position { components: current.clone() });
            extend(&types[i..], budget - c.length, current, out);
            current.pop();
        }
    }

    let types = component_types(max_size);
    let mut out = Vec::new();
    extend(&types, max_size, &mut Vec::new(), &mut out);
    out.sort_by_cached_key(|p| (p.size(), p.clone()));
    out.into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(s: &str) -> Position {
        s.parse().unwrap()
    }

    #[test]
    fn parses_notation() {
        let p = pos("3+4l+8l");
        assert_eq!(
            p.components(),
            &[
                Component::chain(3).unwrap(),
                Component::looped(4).unwrap(),
                Component::looped(8).unwrap()
            ]
        );
        let q = pos("3^5+4L+8L");
        assert_eq!(q.len(), 7);
        assert_eq!(q.count(Component::chain(3).unwrap()), 5);
        assert_eq!(pos(" 8l + 3 +4l "), p);
        assert_eq!(pos("0"), Position::empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!("2+4l".parse::<Position>(), Err(Error::ShortChain(2)));
        assert_eq!("5l".parse::<Position>(), Err(Error::BadLoop(5)));
        assert_eq!("2l".parse::<Position>(), Err(Error::BadLoop(2)));
        for bad in ["", "3+", "+3", "3^0", "3^", "3^-1", "l", "3x", "3ll", "0+3", "3^2^2", "-3"] {
            assert!(bad.parse::<Position>().is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(pos("8l+3+4l").to_string(), "3+4l+8l");
        assert_eq!(Position::empty().to_string(), "0");
        assert_eq!(pos("3+3+4l+3+3+8l+3").to_string(), "3^5+4l+8l");
    }

    #[test]
    fn removes_one_occurrence() {
        assert_eq!(pos("3+4l+8l").remove(Component::looped(4).unwrap()).unwrap(), pos("3+8l"));
        assert_eq!(pos("3^2").remove(Component::chain(3).unwrap()).unwrap(), pos("3"));
        let four_loop = Component::looped(4).unwrap();
        assert_eq!(
            pos("3+8l").remove(four_loop),
            Err(Error::ComponentNotPresent(four_loop))
        );
    }

    #[test]
    fn with_is_inverse_of_remove() {
        let p = pos("3^2+5+6l+10l");
        for c in p.distinct() {
            assert_eq!(p.remove(c).unwrap().with(c), p);
        }
    }

    #[test]
    fn enumerates_small_positions() {
        let four: Vec<String> = enumerate_positions(4).map(|p| p.to_string()).collect();
        assert_eq!(four, ["3", "4", "4l"]);

        let seven: Vec<String> = enumerate_positions(7).map(|p| p.to_string()).collect();
        assert_eq!(seven, ["3", "4", "4l", "5", "3^2", "6", "6l", "3+4", "3+4l", "7"]);

        assert_eq!(enumerate_positions(2).count(), 0);
        assert_eq!(enumerate_positions(0).count(), 0);
    }

    /// Counts multisets of exactly `n` boxes through the generating function
    /// prod 1/(1 - x^len) over all component types.
    fn multiset_counts(max: usize) -> Vec<u64> {
        let mut counts = vec![0u64; max + 1];
        counts[0] = 1;
        let lengths = (3..=max).chain((4..=max).step_by(2));
        for len in lengths {
            for n in len..=max {
                counts[n] += counts[n - len];
            }
        }
        counts
    }

    #[test]
    fn enumeration_matches_generating_function() {
        let max = 30;
        let expected = multiset_counts(max);
        let mut by_size = vec![0u64; max + 1];
        let mut seen = std::collections::HashSet::new();
        for p in enumerate_positions(max as u32) {
            by_size[p.size() as usize] += 1;
            assert!(seen.insert(p.clone()), "duplicate {p}");
            assert_eq!(p.to_string().parse::<Position>().unwrap(), p);
        }
        assert_eq!(by_size[0], 0);
        assert_eq!(&by_size[1..], &expected[1..]);
    }

    #[test]
    fn component_round_trips_through_text() {
        let c: Component = "10l".parse().unwrap();
        assert_eq!(c, Component::looped(10).unwrap());
        assert_eq!(c.to_string(), "10l");
        assert!("3+3".parse::<Component>().is_err());
    }
}
