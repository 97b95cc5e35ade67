use std::collections::HashMap;

use super::{AcceptingSet, GeneralizedApAutomaton, LabeledGraph};
use crate::observations::ObsMap;

/// Merges bisimilar states: same acceptance vector and, for every label, the
/// same set of target blocks. The initial state stays on its own. Blocks are
/// numbered by their smallest member.
pub fn minimize(a: &GeneralizedApAutomaton) -> GeneralizedApAutomaton {
    let n = a.len();
    let init = a.graph.initial;
    let signature = |s: usize| -> Vec<bool> { a.accepting.iter().map(|f| f.states[s]).collect() };

    let mut block = vec![0usize; n];
    {
        let mut ids: HashMap<(bool, Vec<bool>), usize> = HashMap::new();
        for s in 0..n {
            let key = (s == init, signature(s));
            let next = ids.len();
            block[s] = *ids.entry(key).or_insert(next);
        }
    }
    loop {
        let mut ids: HashMap<(usize, Vec<(ObsMap, usize)>), usize> = HashMap::new();
        let mut next_block = vec![0usize; n];
        for s in 0..n {
            let mut succ: Vec<(ObsMap, usize)> = a.graph.edges[s].iter().map(|&(l, t)| (l, block[t])).collect();
            succ.sort_unstable();
            succ.dedup();
            let next = ids.len();
            next_block[s] = *ids.entry((block[s], succ)).or_insert(next);
        }
        let count_old = block.iter().max().map_or(0, |m| m + 1);
        let stable = ids.len() == count_old;
        block = next_block;
        if stable {
            break;
        }
    }

    // Renumber by smallest member.
    let mut order: Vec<Option<usize>> = vec![None; n];
    let mut reps = Vec::new();
    for s in 0..n {
        if order[block[s]].is_none() {
            order[block[s]] = Some(reps.len());
            reps.push(s);
        }
    }
    let b = |s: usize| order[block[s]].unwrap();
    let m = reps.len();

    let mut valuations = vec![Vec::new(); m];
    for s in 0..n {
        valuations[b(s)].extend(a.valuations[s].iter().copied());
    }
    for v in &mut valuations {
        v.sort_unstable();
    }
    let mut graph = LabeledGraph {
        aps: a.graph.aps.clone(),
        names: reps.iter().map(|&s| a.graph.names[s].clone()).collect(),
        initial: b(init),
        edges: reps.iter().map(|&s| a.graph.edges[s].iter().map(|&(l, t)| (l, b(t))).collect()).collect(),
    };
    graph.sort_edges();
    let accepting = a
        .accepting
        .iter()
        .map(|f| AcceptingSet {
            subformula: f.subformula,
            states: reps.iter().map(|&s| f.states[s]).collect(),
        })
        .collect();
    GeneralizedApAutomaton {
        graph,
        sub: a.sub.clone(),
        valuations,
        accepting,
    }
}
