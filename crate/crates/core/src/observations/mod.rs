//! Four-valued observations of a proposition over one time slice, their
//! consistency table, signal words, and dense-time signals.
//!
//! `A`: true on the whole slice. `Z`: true at the start, false at the end.
//! `E`: false at the start, true at the end. `N`: false throughout.

mod oracle;
mod signal;
mod valuation;
mod word;

pub use oracle::{unique_run_oracle, OracleError, ValuationLasso};
pub use signal::{chop, eval_signal, to_ticks, ChopError, Piece, PiecewiseSignal, SignalError, Timeline, TICKS_PER_SECOND};
pub use valuation::{inconsistency, is_consistent, Valuation, MAX_SUBFORMULAS};
pub use word::{is_signal_word, Lasso, ObsMap, SignalWord, WordError, WordViolation, MAX_APS};

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Observation {
    A,
    Z,
    E,
    N,
}

impl Observation {
    pub const ALL: [Observation; 4] = [Observation::A, Observation::Z, Observation::E, Observation::N];

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> Observation {
        Observation::ALL[(i & 3) as usize]
    }

    /// The involution swapping A/N and Z/E.
    pub fn neg(self) -> Observation {
        match self {
            Observation::A => Observation::N,
            Observation::N => Observation::A,
            Observation::Z => Observation::E,
            Observation::E => Observation::Z,
        }
    }

    /// Holds at the start of the slice (A or Z).
    pub fn starts_true(self) -> bool {
        matches!(self, Observation::A | Observation::Z)
    }

    /// Holds at the end of the slice (A or E).
    pub fn ends_true(self) -> bool {
        matches!(self, Observation::A | Observation::E)
    }

    /// Changes value inside the slice (Z or E).
    pub fn changes(self) -> bool {
        matches!(self, Observation::Z | Observation::E)
    }

    pub fn from_char(c: char) -> Option<Observation> {
        match c {
            'A' => Some(Observation::A),
            'Z' => Some(Observation::Z),
            'E' => Some(Observation::E),
            'N' => Some(Observation::N),
            _ => None,
        }
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// A subset of the four observations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ObsSet(pub u8);

impl ObsSet {
    pub const EMPTY: ObsSet = ObsSet(0);
    pub const FULL: ObsSet = ObsSet(0b1111);

    pub const fn from_letters(s: &str) -> ObsSet {
        let b = s.as_bytes();
        let mut bits = 0u8;
        let mut i = 0;
        while i < b.len() {
            bits |= match b[i] {
                b'A' => 1,
                b'Z' => 2,
                b'E' => 4,
                b'N' => 8,
                _ => panic!("not an observation letter"),
            };
            i += 1;
        }
        ObsSet(bits)
    }

    pub fn single(o: Observation) -> ObsSet {
        ObsSet(1 << o.index())
    }

    pub fn contains(self, o: Observation) -> bool {
        self.0 & (1 << o.index()) != 0
    }

    pub fn insert(&mut self, o: Observation) {
        self.0 |= 1 << o.index();
    }

    pub fn intersect(self, other: ObsSet) -> ObsSet {
        ObsSet(self.0 & other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Observation> {
        Observation::ALL.into_iter().filter(move |o| self.contains(*o))
    }

    pub fn map(self, f: impl Fn(Observation) -> Observation) -> ObsSet {
        let mut out = ObsSet::EMPTY;
        for o in self.iter() {
            out.insert(f(o));
        }
        out
    }
}

impl fmt::Display for ObsSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in self.iter() {
            write!(f, "{}", o)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Until,
    Release,
}

const fn s(x: &str) -> ObsSet {
    ObsSet::from_letters(x)
}

/// Consistent observations of `l & r`, indexed by the observations of `l`
/// and `r` in A, Z, E, N order.
const AND_TABLE: [[ObsSet; 4]; 4] = [
    [s("A"), s("Z"), s("E"), s("N")],
    [s("Z"), s("Z"), s("N"), s("N")],
    [s("E"), s("N"), s("E"), s("N")],
    [s("N"), s("N"), s("N"), s("N")],
];

/// Consistent observations of `l U r`.
const UNTIL_TABLE: [[ObsSet; 4]; 4] = [
    [s("A"), s("AZ"), s("A"), s("AN")],
    [s("A"), s("Z"), s("A"), s("N")],
    [s("A"), s("AZ"), s("E"), s("EN")],
    [s("A"), s("Z"), s("E"), s("N")],
];

/// The set of observations of `o1 ⊙ o2` consistent with the observations of
/// its operands. Disjunction and release are obtained from conjunction and
/// until by duality.
pub fn consistency(c: Connective, o1: Observation, o2: Observation) -> ObsSet {
    let cell = |t: &[[ObsSet; 4]; 4], a: Observation, b: Observation| t[a.index() as usize][b.index() as usize];
    match c {
        Connective::And => cell(&AND_TABLE, o1, o2),
        Connective::Until => cell(&UNTIL_TABLE, o1, o2),
        Connective::Or => cell(&AND_TABLE, o1.neg(), o2.neg()).map(Observation::neg),
        Connective::Release => cell(&UNTIL_TABLE, o1.neg(), o2.neg()).map(Observation::neg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Observation::*;

    #[test]
    fn involution() {
        for o in Observation::ALL {
            assert_eq!(o.neg().neg(), o);
            assert_eq!(o.neg().starts_true(), !o.starts_true());
            assert_eq!(o.neg().ends_true(), !o.ends_true());
        }
    }

    #[test]
    fn table_examples() {
        assert_eq!(consistency(Connective::Until, A, N), s("AN"));
        assert_eq!(consistency(Connective::And, A, Z), s("Z"));
        assert_eq!(consistency(Connective::Release, N, A), s("AN"));
        assert_eq!(consistency(Connective::Or, N, N), s("N"));
    }

    #[test]
    fn totality_and_boolean_singletons() {
        for c in [Connective::And, Connective::Or, Connective::Until, Connective::Release] {
            for a in Observation::ALL {
                for b in Observation::ALL {
                    let cell = consistency(c, a, b);
                    assert!(!cell.is_empty());
                    assert!(cell.0 & !0b1111 == 0);
                    if matches!(c, Connective::And | Connective::Or) {
                        assert_eq!(cell.len(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn start_and_end_values_follow_boolean_semantics_for_and() {
        for a in Observation::ALL {
            for b in Observation::ALL {
                for o in consistency(Connective::And, a, b).iter() {
                    assert_eq!(o.starts_true(), a.starts_true() && b.starts_true());
                    assert_eq!(o.ends_true(), a.ends_true() && b.ends_true());
                }
            }
        }
    }
}
