//! Automata over observation maps: construction from a formula, pruning,
//! minimization, degeneralization and lasso membership.

mod build;
mod degeneralize;
mod export;
mod lasso;
mod minimize;
mod prune;

pub use build::{build_gba, BuildOptions, Enumeration};
pub use degeneralize::degeneralize;
pub use export::{to_dot, to_json, AutomatonJson, EdgeJson};
pub use lasso::{accepts_lasso, accepts_letters};
pub use minimize::minimize;
pub use prune::{prune, remove_deadlocks, restrict_reachable};

use std::time::Instant;

use crate::graph;
use crate::ltl::{Nnf, SubformulaSet};
use crate::observations::{ObsMap, Valuation};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AutomatonError {
    #[error("formula has {0} subformulas, more than the supported {1}")]
    TooManySubformulas(usize, usize),
    #[error("formula has {0} propositions, more than the supported 16")]
    TooManyAps(usize),
    #[error("word is over {found:?}, automaton over {expected:?}")]
    ApMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("not a signal word: {0}")]
    InvalidWord(crate::observations::WordViolation),
}

/// States, labeled edges and an initial state. Edge lists are sorted and
/// duplicate-free.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledGraph {
    pub aps: Vec<String>,
    pub names: Vec<String>,
    pub initial: usize,
    pub edges: Vec<Vec<(ObsMap, usize)>>,
}

impl LabeledGraph {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(|e| e.len()).sum()
    }

    pub fn successors(&self, s: usize, label: ObsMap) -> impl Iterator<Item = usize> + '_ {
        self.edges[s].iter().filter(move |(l, _)| *l == label).map(|&(_, t)| t)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.edges
            .iter()
            .map(|es| {
                let mut v: Vec<usize> = es.iter().map(|&(_, t)| t).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect()
    }

    pub fn reachable(&self) -> Vec<bool> {
        graph::reachable(&self.adjacency(), &[self.initial])
    }

    /// Keeps the states marked in `keep` (the initial state must be kept),
    /// preserving their order. Returns the old-to-new index map.
    pub fn restrict(&self, keep: &[bool]) -> (LabeledGraph, Vec<Option<usize>>) {
        assert!(keep[self.initial]);
        let mut map = vec![None; self.len()];
        let mut names = Vec::new();
        for s in 0..self.len() {
            if keep[s] {
                map[s] = Some(names.len());
                names.push(self.names[s].clone());
            }
        }
        let edges = (0..self.len())
            .filter(|&s| keep[s])
            .map(|s| {
                self.edges[s]
                    .iter()
                    .filter_map(|&(l, t)| map[t].map(|t2| (l, t2)))
                    .collect()
            })
            .collect();
        let g = LabeledGraph {
            aps: self.aps.clone(),
            names,
            initial: map[self.initial].unwrap(),
            edges,
        };
        (g, map)
    }

    pub fn sort_edges(&mut self) {
        for es in &mut self.edges {
            es.sort_unstable();
            es.dedup();
        }
    }
}

/// Büchi acceptance: either several state sets that must each be visited
/// infinitely often, or one.
pub trait OmegaAutomaton {
    fn graph(&self) -> &LabeledGraph;
    fn acceptance(&self) -> Vec<&[bool]>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct AcceptingSet {
    /// Closure index of the Until/Release subformula the set belongs to.
    pub subformula: usize,
    pub states: Vec<bool>,
}

/// Generalized automaton whose non-initial states stand for (sets of merged)
/// consistent valuations.
#[derive(Clone, Debug)]
pub struct GeneralizedApAutomaton {
    pub graph: LabeledGraph,
    pub sub: SubformulaSet,
    /// Valuations of each state; empty for the initial state.
    pub valuations: Vec<Vec<Valuation>>,
    /// One set per temporal subformula, in closure order.
    pub accepting: Vec<AcceptingSet>,
}

impl GeneralizedApAutomaton {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn restrict(&self, keep: &[bool]) -> GeneralizedApAutomaton {
        let (graph, map) = self.graph.restrict(keep);
        let valuations = (0..self.len()).filter(|&s| keep[s]).map(|s| self.valuations[s].clone()).collect();
        let accepting = self
            .accepting
            .iter()
            .map(|a| {
                let mut states = vec![false; graph.len()];
                for (s, m) in map.iter().enumerate() {
                    if let Some(t) = m {
                        states[*t] = a.states[s];
                    }
                }
                AcceptingSet {
                    subformula: a.subformula,
                    states,
                }
            })
            .collect();
        GeneralizedApAutomaton {
            graph,
            sub: self.sub.clone(),
            valuations,
            accepting,
        }
    }
}

impl OmegaAutomaton for GeneralizedApAutomaton {
    fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    fn acceptance(&self) -> Vec<&[bool]> {
        self.accepting.iter().map(|a| a.states.as_slice()).collect()
    }
}

/// Büchi automaton with a single accepting set.
#[derive(Clone, Debug)]
pub struct ApAutomaton {
    pub graph: LabeledGraph,
    pub accepting: Vec<bool>,
}

impl ApAutomaton {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn restrict(&self, keep: &[bool]) -> ApAutomaton {
        let (graph, _) = self.graph.restrict(keep);
        let accepting = (0..self.len()).filter(|&s| keep[s]).map(|s| self.accepting[s]).collect();
        ApAutomaton { graph, accepting }
    }
}

impl OmegaAutomaton for ApAutomaton {
    fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    fn acceptance(&self) -> Vec<&[bool]> {
        vec![self.accepting.as_slice()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PruneMode {
    /// Iteratively drop states without successors.
    #[default]
    Deadlocks,
    /// Keep only states that can still reach every accepting set.
    AcceptingRuns,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct TranslateOptions {
    pub build: BuildOptions,
    pub prune: PruneMode,
}

/// All intermediate automata of a translation and their sizes.
#[derive(Clone, Debug)]
pub struct Translation {
    pub formula: Nnf,
    pub subformulas: usize,
    pub nontrivial_subformulas: usize,
    /// Consistent valuations plus the initial state.
    pub gba_states: usize,
    pub reachable_states: usize,
    pub pruned_states: usize,
    /// Pruned and minimized generalized automaton.
    pub gba: GeneralizedApAutomaton,
    pub nba: ApAutomaton,
    pub seconds: f64,
}

/// Formula to Büchi automaton: build, restrict to reachable states, prune,
/// minimize, degeneralize.
pub fn translate(f: &Nnf, opts: &TranslateOptions) -> Result<Translation, AutomatonError> {
    let start = Instant::now();
    let raw = build_gba(f, &opts.build)?;
    let reach = restrict_reachable(&raw);
    let pruned = match opts.prune {
        PruneMode::Deadlocks => remove_deadlocks(&reach),
        PruneMode::AcceptingRuns => prune(&reach),
    };
    let gba = minimize(&pruned);
    let nba = degeneralize(&gba);
    log::debug!(
        "translated {}: {} -> {} -> {} -> {} -> {} states",
        f,
        raw.len(),
        reach.len(),
        pruned.len(),
        gba.len(),
        nba.len()
    );
    Ok(Translation {
        formula: f.clone(),
        subformulas: raw.sub.len(),
        nontrivial_subformulas: raw.sub.nontrivial_len(),
        gba_states: raw.len(),
        reachable_states: reach.len(),
        pruned_states: pruned.len(),
        gba,
        nba,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, to_nnf};
    use crate::observations::{Observation, SignalWord};

    fn run(f: &str) -> Translation {
        translate(&to_nnf(&parse_ltl(f).unwrap()).unwrap(), &TranslateOptions::default()).unwrap()
    }

    #[test]
    fn benchmark_sizes() {
        let cases = [
            ("G r", 2),
            ("F p", 5),
            ("c U b", 7),
            ("b R c", 7),
            ("F G r", 6),
            ("G F g", 7),
            ("F(g & F p)", 33),
            ("G r & (F p & F c)", 46),
            ("G r & F(g & F p)", 49),
        ];
        for (f, n) in cases {
            assert_eq!(run(f).nba.len(), n, "{}", f);
        }
    }

    #[test]
    fn infinitely_often_matches_drawn_automaton() {
        use Observation::*;
        let t = run("G F g");
        let g = &t.gba.graph;
        assert_eq!(g.len(), 4);
        // Drawn automaton: states 1..3, edges by the observation of g.
        let drawn: [(usize, &[Observation], usize); 9] = [
            (0, &[N], 1),
            (0, &[Z], 2),
            (0, &[A, E], 3),
            (1, &[N], 1),
            (1, &[E], 3),
            (2, &[N], 1),
            (2, &[E], 3),
            (3, &[A], 3),
            (3, &[Z], 2),
        ];
        let mut expected: Vec<(usize, Observation, usize)> = drawn
            .iter()
            .flat_map(|&(s, ls, t)| ls.iter().map(move |&l| (s, l, t)))
            .collect();
        expected.sort();
        let expected_sets = [vec![2, 3], vec![1, 2, 3]];
        let perms = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];
        let found = perms.iter().any(|p| {
            let map = |s: usize| if s == g.initial { 0 } else { p[if s < g.initial { s } else { s - 1 }] };
            let mut edges: Vec<_> = (0..4)
                .flat_map(|s| g.edges[s].iter().map(move |&(l, t)| (map(s), l.get(0), map(t))))
                .collect();
            edges.sort();
            let sets: Vec<Vec<usize>> = t
                .gba
                .accepting
                .iter()
                .map(|a| {
                    let mut v: Vec<usize> = (0..4).filter(|&s| a.states[s]).map(map).collect();
                    v.sort();
                    v
                })
                .collect();
            edges == expected && sets == expected_sets
        });
        assert!(found);
    }

    #[test]
    fn pruning_modes_agree_on_words() {
        let f = to_nnf(&parse_ltl("G r & F(g & F p)").unwrap()).unwrap();
        let a = translate(&f, &TranslateOptions::default()).unwrap();
        let b = translate(
            &f,
            &TranslateOptions {
                prune: PruneMode::AcceptingRuns,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(b.nba.len() <= a.nba.len());
        let aps: Vec<String> = ["g", "p", "r"].iter().map(|s| s.to_string()).collect();
        let words = [
            (vec!["AAA", "AAA"], vec!["AAA"]),
            (vec!["NNA", "ENA"], vec!["ANA", "ZNA", "NEA", "NAA", "NZA", "ENA"]),
            (vec!["ENA", "AEA"], vec!["AAA"]),
            (vec!["ANA", "ANZ", "ZNN"], vec!["NNN"]),
        ];
        for (pre, cyc) in words {
            let letters = |v: &Vec<&str>| {
                v.iter()
                    .map(|s| ObsMap::from_slice(&s.chars().map(|c| Observation::from_char(c).unwrap()).collect::<Vec<_>>()))
                    .collect::<Vec<_>>()
            };
            let w = SignalWord::new(aps.clone(), letters(&pre), letters(&cyc));
            let x = accepts_lasso(&a.nba, &w).unwrap();
            assert_eq!(x, accepts_lasso(&b.nba, &w).unwrap());
            assert_eq!(x, accepts_lasso(&a.gba, &w).unwrap());
        }
    }

    #[test]
    fn json_export_lists_sets_by_name() {
        let t = run("G F g");
        let j = to_json(&t.gba);
        assert_eq!(j.initial, "q0");
        assert_eq!(j.accepting.len(), 2);
        assert_eq!(j.edges.len(), t.gba.graph.num_edges());
        assert!(to_dot(&t.nba).contains("doublecircle"));
    }
}
