use std::collections::HashMap;

use super::prune::live_states;
use super::{ApAutomaton, GeneralizedApAutomaton, LabeledGraph};

/// Counter construction. Sets are visited outermost subformula first. A copy
/// `(s, i)` moves to counter `i + 1` (mod the number of sets) when `s` is in
/// set `i`; the accepting states are the last-counter copies in the last
/// set. Without accepting sets every non-initial state accepts. Only the
/// reachable, deadlock-free part is returned.
pub fn degeneralize(a: &GeneralizedApAutomaton) -> ApAutomaton {
    let g = &a.graph;
    let sets: Vec<&[bool]> = a.accepting.iter().rev().map(|f| f.states.as_slice()).collect();
    let m = sets.len();
    if m == 0 {
        let out = ApAutomaton {
            graph: g.clone(),
            accepting: (0..g.len()).map(|s| s != g.initial).collect(),
        };
        return out.restrict(&live_states(&out.graph));
    }

    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states = vec![(g.initial, 0)];
    ids.insert((g.initial, 0), 0);
    let mut edges: Vec<Vec<_>> = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let (s, i) = states[k];
        let j = if sets[i][s] { (i + 1) % m } else { i };
        let mut out = Vec::with_capacity(g.edges[s].len());
        for &(l, t) in &g.edges[s] {
            let id = *ids.entry((t, j)).or_insert_with(|| {
                states.push((t, j));
                states.len() - 1
            });
            out.push((l, id));
        }
        edges.push(out);
        k += 1;
    }
    let names = states
        .iter()
        .map(|&(s, i)| if m == 1 { g.names[s].clone() } else { format!("{}.{}", g.names[s], i) })
        .collect();
    let accepting = states.iter().map(|&(s, i)| i == m - 1 && sets[m - 1][s]).collect();
    let mut graph = LabeledGraph {
        aps: g.aps.clone(),
        names,
        initial: 0,
        edges,
    };
    graph.sort_edges();
    let out = ApAutomaton { graph, accepting };
    out.restrict(&live_states(&out.graph))
}
