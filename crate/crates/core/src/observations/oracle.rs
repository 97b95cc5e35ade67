//! Direct construction of the unique accepting valuation run of a formula on
//! a signal word, subformula by subformula. Used as a reference for the
//! automaton construction.

use super::valuation::{Valuation, MAX_SUBFORMULAS};
use super::word::{is_signal_word, Lasso, SignalWord, WordViolation};
use super::{consistency, Connective, Observation};
use crate::ltl::{Nnf, SubNode, SubformulaSet};

use Observation::*;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("not a signal word: {0}")]
    InvalidWord(WordViolation),
    #[error("proposition {0} is not observed by the word")]
    MissingAp(String),
    #[error("formula has {0} subformulas (at most {MAX_SUBFORMULAS})")]
    TooLarge(usize),
    #[error("no unique observation for subformula {subformula} at step {step}")]
    Ambiguous { subformula: usize, step: usize },
}

#[derive(Clone, Debug)]
pub struct ValuationLasso {
    pub sub: SubformulaSet,
    pub run: Lasso<Valuation>,
}

/// Observation of `l U r` at position `k` from the step-by-step definition,
/// with look-ahead limited to `horizon` steps. Returns `None` unless exactly
/// one case applies.
fn until_at(l: &dyn Fn(usize) -> Observation, r: &dyn Fn(usize) -> Observation, k: usize, horizon: usize) -> Option<Observation> {
    let l_all_a = |from: usize, to: usize| (from..to).all(|j| l(j) == A);
    // The written A condition misses a left operand that falls exactly when
    // the right one rises (both driven by the same proposition, as in
    // `(p R q) U !p`); the until then holds on the whole slice.
    let case_a = r(k) == A || (r(k) == E && l(k) == Z) || (k + 1..=k + horizon).any(|k2| r(k2) != N && l_all_a(k, k2));
    let case_z = r(k) == Z && (k + 1..=k + horizon).all(|k2| r(k2) == N || !l_all_a(k, k2));
    let case_e = (r(k) == E && matches!(l(k), E | N))
        || (r(k) == N && l(k) == E && (k + 1..=k + horizon).any(|k2| r(k2) != N && l_all_a(k + 1, k2)));
    // The written N condition only speaks about the start of the slice; when
    // the left operand rises during the slice it also holds for E, so E takes
    // precedence.
    let case_n = (k..=k + horizon).all(|k2| r(k2) == N || !l_all_a(k, k2)) && !case_e;
    let cases = [(case_a, A), (case_z, Z), (case_e, E), (case_n, N)];
    let mut hits = cases.iter().filter(|(c, _)| *c);
    match (hits.next(), hits.next()) {
        (Some(&(_, o)), None) => Some(o),
        _ => None,
    }
}

/// The valuation run matching `w` on the atoms, built by induction on the
/// subformulas of `f`. The run has the same lasso shape as `w`.
pub fn unique_run_oracle(w: &SignalWord, f: &Nnf) -> Result<ValuationLasso, OracleError> {
    is_signal_word(w).map_err(OracleError::InvalidWord)?;
    let sub = SubformulaSet::new(f);
    if sub.len() > MAX_SUBFORMULAS {
        return Err(OracleError::TooLarge(sub.len()));
    }
    let mut ap_index = Vec::new();
    for a in &sub.atoms {
        match w.aps.iter().position(|p| p == a) {
            Some(i) => ap_index.push(i),
            None => return Err(OracleError::MissingAp(a.clone())),
        }
    }
    let lasso = &w.word;
    let len = lasso.len();
    let horizon = lasso.prefix.len() + 2 * lasso.cycle.len();
    let mut rows: Vec<Vec<Observation>> = Vec::with_capacity(sub.len());
    for (idx, node) in sub.nodes.iter().enumerate() {
        let row: Vec<Observation> = match *node {
            SubNode::True => vec![A; len],
            SubNode::False => vec![N; len],
            SubNode::Atom(a) => (0..len).map(|k| lasso.at(k).get(ap_index[a])).collect(),
            SubNode::NegAtom(i) => rows[i].iter().map(|o| o.neg()).collect(),
            SubNode::And(l, r) | SubNode::Or(l, r) => {
                let c = if matches!(node, SubNode::And(..)) { Connective::And } else { Connective::Or };
                (0..len)
                    .map(|k| consistency(c, rows[l][k], rows[r][k]).iter().next().unwrap())
                    .collect()
            }
            SubNode::Until(l, r) | SubNode::Release(l, r) => {
                let dual = matches!(node, SubNode::Release(..));
                let (lr, rr) = (&rows[l], &rows[r]);
                let get = |row: &Vec<Observation>, k: usize| {
                    let o = row[lasso.position(k)];
                    if dual {
                        o.neg()
                    } else {
                        o
                    }
                };
                let lf = |k: usize| get(lr, k);
                let rf = |k: usize| get(rr, k);
                let mut out = Vec::with_capacity(len);
                for k in 0..len {
                    match until_at(&lf, &rf, k, horizon) {
                        Some(o) => out.push(if dual { o.neg() } else { o }),
                        None => return Err(OracleError::Ambiguous { subformula: idx, step: k }),
                    }
                }
                out
            }
        };
        rows.push(row);
    }
    let vals: Vec<Valuation> = (0..len)
        .map(|k| {
            let mut v = Valuation(0);
            for (i, row) in rows.iter().enumerate() {
                v.set(i, row[k]);
            }
            v
        })
        .collect();
    let p = lasso.prefix.len();
    Ok(ValuationLasso {
        sub,
        run: Lasso::new(vals[..p].to_vec(), vals[p..].to_vec()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, to_nnf};

    fn root_row(w: &SignalWord, f: &str, k: usize) -> String {
        let nnf = to_nnf(&parse_ltl(f).unwrap()).unwrap();
        let out = unique_run_oracle(w, &nnf).unwrap();
        let root = out.sub.root();
        (0..k).map(|i| out.run.at(i).get(root).to_string()).collect()
    }

    #[test]
    fn eventually_on_constant_words() {
        assert_eq!(root_row(&SignalWord::from_letters("p", "", "A"), "F p", 4), "AAAA");
        assert_eq!(root_row(&SignalWord::from_letters("p", "", "N"), "F p", 4), "NNNN");
    }

    #[test]
    fn eventually_after_rise() {
        assert_eq!(root_row(&SignalWord::from_letters("p", "NE", "A"), "F p", 4), "AAAA");
        assert_eq!(root_row(&SignalWord::from_letters("p", "AZ", "N"), "F p", 4), "AZNN");
        assert_eq!(root_row(&SignalWord::from_letters("p", "AZ", "N"), "G p", 4), "NNNN");
    }

    #[test]
    fn rejects_invalid_word() {
        let nnf = to_nnf(&parse_ltl("F p").unwrap()).unwrap();
        assert!(matches!(
            unique_run_oracle(&SignalWord::from_letters("p", "A", "N"), &nnf),
            Err(OracleError::InvalidWord(_))
        ));
    }
}
