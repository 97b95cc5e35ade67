use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{Formula, LtlError};

/// Formula in negation normal form; negation only occurs on atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nnf {
    True,
    False,
    Pos(String),
    Neg(String),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Until(Box<Nnf>, Box<Nnf>),
    Release(Box<Nnf>, Box<Nnf>),
}

impl Nnf {
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Nnf::True | Nnf::False => {}
            Nnf::Pos(p) | Nnf::Neg(p) => {
                out.insert(p.clone());
            }
            Nnf::And(l, r) | Nnf::Or(l, r) | Nnf::Until(l, r) | Nnf::Release(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// The NNF of the negation of `self`.
    pub fn negate(&self) -> Nnf {
        match self {
            Nnf::True => Nnf::False,
            Nnf::False => Nnf::True,
            Nnf::Pos(p) => Nnf::Neg(p.clone()),
            Nnf::Neg(p) => Nnf::Pos(p.clone()),
            Nnf::And(l, r) => Nnf::Or(Box::new(l.negate()), Box::new(r.negate())),
            Nnf::Or(l, r) => Nnf::And(Box::new(l.negate()), Box::new(r.negate())),
            Nnf::Until(l, r) => Nnf::Release(Box::new(l.negate()), Box::new(r.negate())),
            Nnf::Release(l, r) => Nnf::Until(Box::new(l.negate()), Box::new(r.negate())),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            Nnf::True => Formula::True,
            Nnf::False => Formula::False,
            Nnf::Pos(p) => Formula::atom(p),
            Nnf::Neg(p) => Formula::not(Formula::atom(p)),
            Nnf::And(l, r) => Formula::and(l.to_formula(), r.to_formula()),
            Nnf::Or(l, r) => Formula::or(l.to_formula(), r.to_formula()),
            Nnf::Until(l, r) => Formula::until(l.to_formula(), r.to_formula()),
            Nnf::Release(l, r) => Formula::release(l.to_formula(), r.to_formula()),
        }
    }
}

impl fmt::Display for Nnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

fn nnf(f: &Formula, negated: bool) -> Result<Nnf, LtlError> {
    let bin = |l: &Formula, r: &Formula, neg_l: bool, neg_r: bool| -> Result<(Box<Nnf>, Box<Nnf>), LtlError> {
        Ok((Box::new(nnf(l, neg_l)?), Box::new(nnf(r, neg_r)?)))
    };
    Ok(match (f, negated) {
        (Formula::Next(_), _) => return Err(LtlError::NextNotSupported),
        (Formula::True, false) | (Formula::False, true) => Nnf::True,
        (Formula::True, true) | (Formula::False, false) => Nnf::False,
        (Formula::Atom(p), false) => Nnf::Pos(p.clone()),
        (Formula::Atom(p), true) => Nnf::Neg(p.clone()),
        (Formula::Not(c), n) => nnf(c, !n)?,
        (Formula::And(l, r), false) | (Formula::Or(l, r), true) => {
            let (l, r) = bin(l, r, negated, negated)?;
            Nnf::And(l, r)
        }
        (Formula::Or(l, r), false) | (Formula::And(l, r), true) => {
            let (l, r) = bin(l, r, negated, negated)?;
            Nnf::Or(l, r)
        }
        (Formula::Until(l, r), false) | (Formula::Release(l, r), true) => {
            let (l, r) = bin(l, r, negated, negated)?;
            Nnf::Until(l, r)
        }
        (Formula::Release(l, r), false) | (Formula::Until(l, r), true) => {
            let (l, r) = bin(l, r, negated, negated)?;
            Nnf::Release(l, r)
        }
    })
}

/// Pushes negations down to the atoms. Rejects `X`.
pub fn to_nnf(f: &Formula) -> Result<Nnf, LtlError> {
    if f.contains_next() {
        return Err(LtlError::NextNotSupported);
    }
    nnf(f, false)
}

/// One entry of the subformula closure, with children given as indices into
/// the closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubNode {
    True,
    False,
    /// Index into the tracked atom list.
    Atom(usize),
    /// Index of the positive atom subformula.
    NegAtom(usize),
    And(usize, usize),
    Or(usize, usize),
    Until(usize, usize),
    Release(usize, usize),
}

/// Duplicate-free, children-first list of the subformulas of a formula; the
/// root is last.
#[derive(Clone, Debug)]
pub struct SubformulaSet {
    pub formulas: Vec<Nnf>,
    pub nodes: Vec<SubNode>,
    /// Tracked atoms, sorted by name.
    pub atoms: Vec<String>,
    index: HashMap<Nnf, usize>,
}

impl SubformulaSet {
    pub fn new(f: &Nnf) -> SubformulaSet {
        let atoms: Vec<String> = f.atoms().into_iter().collect();
        let mut set = SubformulaSet {
            formulas: Vec::new(),
            nodes: Vec::new(),
            atoms,
            index: HashMap::new(),
        };
        set.insert(f);
        set
    }

    fn insert(&mut self, f: &Nnf) -> usize {
        if let Some(&i) = self.index.get(f) {
            return i;
        }
        let node = match f {
            Nnf::True => SubNode::True,
            Nnf::False => SubNode::False,
            Nnf::Pos(p) => SubNode::Atom(self.atoms.binary_search(p).expect("atom is tracked")),
            Nnf::Neg(p) => SubNode::NegAtom(self.insert(&Nnf::Pos(p.clone()))),
            Nnf::And(l, r) => SubNode::And(self.insert(l), self.insert(r)),
            Nnf::Or(l, r) => SubNode::Or(self.insert(l), self.insert(r)),
            Nnf::Until(l, r) => SubNode::Until(self.insert(l), self.insert(r)),
            Nnf::Release(l, r) => SubNode::Release(self.insert(l), self.insert(r)),
        };
        let i = self.formulas.len();
        self.formulas.push(f.clone());
        self.nodes.push(node);
        self.index.insert(f.clone(), i);
        i
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn root(&self) -> usize {
        self.formulas.len() - 1
    }

    pub fn index_of(&self, f: &Nnf) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Closure size without the constants `true` and `false`.
    pub fn nontrivial_len(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| !matches!(n, SubNode::True | SubNode::False))
            .count()
    }

    /// Subformula index of each tracked atom, in atom order.
    pub fn atom_positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.atoms.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let SubNode::Atom(a) = n {
                pos[*a] = i;
            }
        }
        pos
    }

    /// Indices of the Until and Release subformulas, in closure order.
    pub fn temporal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| matches!(self.nodes[i], SubNode::Until(..) | SubNode::Release(..)))
            .collect()
    }
}
