use std::collections::HashMap;

use super::{AcceptingSet, AutomatonError, GeneralizedApAutomaton, LabeledGraph};
use crate::ltl::{Nnf, SubNode, SubformulaSet};
use crate::observations::{consistency, is_consistent, Connective, ObsSet, Observation, Valuation, MAX_APS, MAX_SUBFORMULAS};

/// How consistent valuations are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Enumeration {
    /// All 4^n valuations, filtered.
    BruteForce,
    /// Children-first product that drops inconsistent partial valuations.
    #[default]
    BottomUp,
}

/// Largest closure for brute-force enumeration (4^13 candidates).
pub const BRUTE_FORCE_LIMIT: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub enumeration: Enumeration,
    /// Drop valuations in which two distinct atoms change within the slice;
    /// no signal word can visit them.
    pub filter_multi_change: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            enumeration: Enumeration::BottomUp,
            filter_multi_change: true,
        }
    }
}

fn allowed(sub: &SubformulaSet, i: usize, v: Valuation) -> ObsSet {
    match sub.nodes[i] {
        SubNode::True => ObsSet::single(Observation::A),
        SubNode::False => ObsSet::single(Observation::N),
        SubNode::Atom(_) => ObsSet::FULL,
        SubNode::NegAtom(a) => ObsSet::single(v.get(a).neg()),
        SubNode::And(l, r) => consistency(Connective::And, v.get(l), v.get(r)),
        SubNode::Or(l, r) => consistency(Connective::Or, v.get(l), v.get(r)),
        SubNode::Until(l, r) => consistency(Connective::Until, v.get(l), v.get(r)),
        SubNode::Release(l, r) => consistency(Connective::Release, v.get(l), v.get(r)),
    }
}

fn bottom_up(sub: &SubformulaSet, filter: bool) -> Vec<Valuation> {
    fn go(sub: &SubformulaSet, filter: bool, i: usize, v: Valuation, changes: usize, out: &mut Vec<Valuation>) {
        if i == sub.len() {
            out.push(v);
            return;
        }
        let is_atom = matches!(sub.nodes[i], SubNode::Atom(_));
        for o in allowed(sub, i, v).iter() {
            let c = changes + usize::from(is_atom && o.changes());
            if filter && c > 1 {
                continue;
            }
            go(sub, filter, i + 1, v.with(i, o), c, out);
        }
    }
    let mut out = Vec::new();
    go(sub, filter, 0, Valuation(0), 0, &mut out);
    out
}

fn brute_force(sub: &SubformulaSet, filter: bool) -> Vec<Valuation> {
    (0..1u64 << (2 * sub.len()))
        .map(Valuation)
        .filter(|&v| is_consistent(sub, v, filter))
        .collect()
}

/// Generalized automaton of `f`: an initial state plus one state per
/// consistent valuation of the subformula closure. A valuation `u` steps to
/// `v` iff every subformula that holds at the end of `u`'s slice holds at the
/// start of `v`'s and conversely; the edge is labeled with `v`'s atoms. The
/// initial state steps to every `v` whose root holds at the start.
pub fn build_gba(f: &Nnf, opts: &BuildOptions) -> Result<GeneralizedApAutomaton, AutomatonError> {
    let sub = SubformulaSet::new(f);
    let n = sub.len();
    if n > MAX_SUBFORMULAS {
        return Err(AutomatonError::TooManySubformulas(n, MAX_SUBFORMULAS));
    }
    if sub.atoms.len() > MAX_APS {
        return Err(AutomatonError::TooManyAps(sub.atoms.len()));
    }
    let mut vals = match opts.enumeration {
        Enumeration::BottomUp => bottom_up(&sub, opts.filter_multi_change),
        Enumeration::BruteForce => {
            if n > BRUTE_FORCE_LIMIT {
                return Err(AutomatonError::TooManySubformulas(n, BRUTE_FORCE_LIMIT));
            }
            brute_force(&sub, opts.filter_multi_change)
        }
    };
    vals.sort_unstable();

    let root = sub.root();
    let mut by_start: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, v) in vals.iter().enumerate() {
        by_start.entry(v.start_signature(n)).or_default().push(i + 1);
    }
    let labels: Vec<_> = vals.iter().map(|v| v.atoms(&sub)).collect();
    let mut edges = Vec::with_capacity(vals.len() + 1);
    edges.push(
        vals.iter()
            .enumerate()
            .filter(|(_, v)| v.get(root).starts_true())
            .map(|(i, _)| (labels[i], i + 1))
            .collect::<Vec<_>>(),
    );
    for v in &vals {
        let targets = by_start.get(&v.end_signature(n)).map(|t| t.as_slice()).unwrap_or(&[]);
        edges.push(targets.iter().map(|&t| (labels[t - 1], t)).collect());
    }
    let mut names = vec!["q0".to_string()];
    names.extend((1..=vals.len()).map(|i| format!("q{}", i)));
    let mut graph = LabeledGraph {
        aps: sub.atoms.clone(),
        names,
        initial: 0,
        edges,
    };
    graph.sort_edges();

    let accepting = sub
        .temporal()
        .into_iter()
        .map(|t| {
            let mut states = vec![false];
            states.extend(vals.iter().map(|v| match sub.nodes[t] {
                SubNode::Until(_, r) => v.get(r) != Observation::N || v.get(t) != Observation::A,
                SubNode::Release(_, r) => v.get(r) != Observation::A || v.get(t) != Observation::N,
                _ => unreachable!(),
            }));
            AcceptingSet { subformula: t, states }
        })
        .collect();
    let mut valuations = vec![Vec::new()];
    valuations.extend(vals.into_iter().map(|v| vec![v]));
    Ok(GeneralizedApAutomaton {
        graph,
        sub,
        valuations,
        accepting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, to_nnf};
    use Observation::*;

    fn nnf(s: &str) -> Nnf {
        to_nnf(&parse_ltl(s).unwrap()).unwrap()
    }

    #[test]
    fn atomic_formula() {
        let a = build_gba(&nnf("p"), &BuildOptions::default()).unwrap();
        assert_eq!(a.len(), 5);
        let targets: Vec<Observation> = a.graph.edges[0].iter().map(|&(l, _)| l.get(0)).collect();
        assert_eq!(targets, vec![A, Z]);
        assert!(a.accepting.is_empty());
    }

    #[test]
    fn eventually_state_count_matches_table_row() {
        // With the left operand fixed to A, each observation of g allows the
        // cells of the first row of the until table.
        let a = build_gba(&nnf("F g"), &BuildOptions::default()).unwrap();
        let expected: usize = Observation::ALL.iter().map(|&g| consistency(Connective::Until, A, g).len()).sum();
        assert_eq!(expected, 6);
        assert_eq!(a.len(), expected + 1);
    }

    #[test]
    fn strategies_agree() {
        for f in ["G F g", "a U (b R !a)", "G r & F(g & F p)", "(a | b) U c"] {
            for filter in [false, true] {
                let mk = |e| {
                    build_gba(
                        &nnf(f),
                        &BuildOptions {
                            enumeration: e,
                            filter_multi_change: filter,
                        },
                    )
                    .unwrap()
                };
                let x = mk(Enumeration::BruteForce);
                let y = mk(Enumeration::BottomUp);
                assert_eq!(x.valuations, y.valuations, "{}", f);
                assert_eq!(x.graph, y.graph);
            }
        }
    }

    #[test]
    fn labels_are_target_atoms_and_edges_follow_signatures() {
        let a = build_gba(&nnf("(a U b) & G !c"), &BuildOptions::default()).unwrap();
        let n = a.sub.len();
        for (s, es) in a.graph.edges.iter().enumerate() {
            for &(l, t) in es {
                let vt = a.valuations[t][0];
                assert_eq!(l, vt.atoms(&a.sub));
                if s > 0 {
                    let vs = a.valuations[s][0];
                    for i in 0..n {
                        assert_eq!(vs.get(i).ends_true(), vt.get(i).starts_true());
                    }
                } else {
                    assert!(vt.get(a.sub.root()).starts_true());
                }
            }
        }
    }
}
