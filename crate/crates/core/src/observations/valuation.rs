use std::fmt;

use super::{consistency, Connective, ObsMap, Observation};
use crate::ltl::{SubNode, SubformulaSet};

/// Largest subformula closure a valuation can describe.
pub const MAX_SUBFORMULAS: usize = 32;

/// Observation of every subformula, packed two bits per closure index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Valuation(pub u64);

impl Valuation {
    pub fn get(self, i: usize) -> Observation {
        Observation::from_index(((self.0 >> (2 * i)) & 3) as u8)
    }

    pub fn set(&mut self, i: usize, o: Observation) {
        self.0 = (self.0 & !(3 << (2 * i))) | ((o.index() as u64) << (2 * i));
    }

    pub fn with(mut self, i: usize, o: Observation) -> Valuation {
        self.set(i, o);
        self
    }

    /// Restriction to the atoms, as a transition label.
    pub fn atoms(self, sub: &SubformulaSet) -> ObsMap {
        let mut m = ObsMap(0);
        for (a, &i) in sub.atom_positions().iter().enumerate() {
            m.set(a, self.get(i));
        }
        m
    }

    /// Bit `i` set iff subformula `i` holds at the start of the slice.
    pub fn start_signature(self, n: usize) -> u32 {
        (0..n).filter(|&i| self.get(i).starts_true()).fold(0, |m, i| m | 1 << i)
    }

    /// Bit `i` set iff subformula `i` holds at the end of the slice.
    pub fn end_signature(self, n: usize) -> u32 {
        (0..n).filter(|&i| self.get(i).ends_true()).fold(0, |m, i| m | 1 << i)
    }

    pub fn render(self, sub: &SubformulaSet) -> String {
        sub.formulas
            .iter()
            .enumerate()
            .map(|(i, f)| format!("{}:{}", f, self.get(i)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Why a valuation is rejected, if it is; `None` means consistent.
pub fn inconsistency(sub: &SubformulaSet, v: Valuation, filter_multi_change: bool) -> Option<usize> {
    let mut changing_atoms = 0;
    for (i, node) in sub.nodes.iter().enumerate() {
        let o = v.get(i);
        let ok = match *node {
            SubNode::True => o == Observation::A,
            SubNode::False => o == Observation::N,
            SubNode::Atom(_) => {
                if o.changes() {
                    changing_atoms += 1;
                }
                !(filter_multi_change && changing_atoms > 1)
            }
            SubNode::NegAtom(a) => o == v.get(a).neg(),
            SubNode::And(l, r) => consistency(Connective::And, v.get(l), v.get(r)).contains(o),
            SubNode::Or(l, r) => consistency(Connective::Or, v.get(l), v.get(r)).contains(o),
            SubNode::Until(l, r) => consistency(Connective::Until, v.get(l), v.get(r)).contains(o),
            SubNode::Release(l, r) => consistency(Connective::Release, v.get(l), v.get(r)).contains(o),
        };
        if !ok {
            return Some(i);
        }
    }
    None
}

pub fn is_consistent(sub: &SubformulaSet, v: Valuation, filter_multi_change: bool) -> bool {
    inconsistency(sub, v, filter_multi_change).is_none()
}
