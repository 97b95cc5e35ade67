use super::{AutomatonError, OmegaAutomaton};
use crate::graph;
use crate::observations::{is_signal_word, Lasso, ObsMap, SignalWord};

/// Whether the automaton has an accepting run on the lasso word `word`,
/// given over the automaton's own propositions. The letter at position `k`
/// labels the edge leaving the `k`-th state of the run.
pub fn accepts_letters<A: OmegaAutomaton + ?Sized>(a: &A, word: &Lasso<ObsMap>) -> bool {
    let g = a.graph();
    let len = word.len();
    let n = g.len();
    let id = |s: usize, k: usize| s * len + k;
    let mut succ = vec![Vec::new(); n * len];
    for s in 0..n {
        for k in 0..len {
            let letter = *word.at(k);
            let k2 = word.next(k);
            succ[id(s, k)] = g.successors(s, letter).map(|t| id(t, k2)).collect();
        }
    }
    let reach = graph::reachable(&succ, &[id(g.initial, 0)]);
    let sets = a.acceptance();
    graph::sccs(&succ).into_iter().any(|comp| {
        reach[comp[0]]
            && graph::is_nontrivial(&succ, &comp)
            && sets.iter().all(|f| comp.iter().any(|&v| f[v / len]))
    })
}

/// Like [`accepts_letters`] for a signal word over any superset of the
/// automaton's propositions; extra propositions are ignored.
pub fn accepts_lasso<A: OmegaAutomaton + ?Sized>(a: &A, w: &SignalWord) -> Result<bool, AutomatonError> {
    is_signal_word(w).map_err(AutomatonError::InvalidWord)?;
    let aps = &a.graph().aps;
    let mut index = Vec::with_capacity(aps.len());
    for p in aps {
        match w.aps.iter().position(|q| q == p) {
            Some(i) => index.push(i),
            None => {
                return Err(AutomatonError::ApMismatch {
                    expected: aps.clone(),
                    found: w.aps.clone(),
                })
            }
        }
    }
    let project = |m: &ObsMap| {
        let mut out = ObsMap(0);
        for (j, &i) in index.iter().enumerate() {
            out.set(j, m.get(i));
        }
        out
    };
    Ok(accepts_letters(a, &w.word.map(project)))
}
