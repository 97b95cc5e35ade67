use super::{GeneralizedApAutomaton, LabeledGraph};
use crate::graph;

/// Drops states not reachable from the initial state.
pub fn restrict_reachable(a: &GeneralizedApAutomaton) -> GeneralizedApAutomaton {
    a.restrict(&a.graph.reachable())
}

/// States that are reachable and can be extended forever. The initial state
/// is always kept, possibly without edges.
pub(crate) fn live_states(g: &LabeledGraph) -> Vec<bool> {
    let mut keep = g.reachable();
    loop {
        let mut changed = false;
        for s in 0..g.len() {
            if keep[s] && !g.edges[s].iter().any(|&(_, t)| keep[t]) {
                keep[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    keep = graph::reachable(
        &g.adjacency()
            .into_iter()
            .enumerate()
            .map(|(s, ts)| if keep[s] { ts.into_iter().filter(|&t| keep[t]).collect() } else { Vec::new() })
            .collect::<Vec<_>>(),
        &[g.initial],
    )
    .into_iter()
    .zip(&keep)
    .map(|(r, &k)| r && k)
    .collect();
    keep[g.initial] = true;
    keep
}

/// Iteratively drops states without successors, then unreachable ones.
pub fn remove_deadlocks(a: &GeneralizedApAutomaton) -> GeneralizedApAutomaton {
    a.restrict(&live_states(&a.graph))
}

/// Keeps only states from which some run visits every accepting set
/// infinitely often.
pub fn prune(a: &GeneralizedApAutomaton) -> GeneralizedApAutomaton {
    let adj = a.graph.adjacency();
    let mut good = vec![false; a.len()];
    for comp in graph::sccs(&adj) {
        if !graph::is_nontrivial(&adj, &comp) {
            continue;
        }
        if a.accepting.iter().all(|f| comp.iter().any(|&s| f.states[s])) {
            for &s in &comp {
                good[s] = true;
            }
        }
    }
    let mut keep = graph::backward_reachable(&adj, &good);
    let reach = a.graph.reachable();
    for s in 0..a.len() {
        keep[s] = keep[s] && reach[s];
    }
    keep[a.graph.initial] = true;
    a.restrict(&keep)
}
