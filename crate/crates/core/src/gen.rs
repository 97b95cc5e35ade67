//! Seeded random instances for property tests and the acceptance suites:
//! formulas, signals, signal words, small models, automata and games.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::abstraction::SymbolicModel;
use crate::automata::{ApAutomaton, LabeledGraph};
use crate::game::{BuchiGame, Owner};
use crate::ltl::Formula;
use crate::observations::{is_signal_word, Lasso, ObsMap, Observation, Piece, PiecewiseSignal, SignalWord};

/// Random formula without `X` of nesting depth at most `depth` over `aps`.
pub fn formula<R: Rng>(rng: &mut R, aps: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(aps.choose(rng).expect("at least one proposition")),
        };
    }
    let sub = |rng: &mut R| formula(rng, aps, depth - 1);
    match rng.gen_range(0..8) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::until(sub(rng), sub(rng)),
        4 => Formula::release(sub(rng), sub(rng)),
        5 => Formula::finally(sub(rng)),
        6 => Formula::globally(sub(rng)),
        _ => Formula::not(Formula::until(sub(rng), sub(rng))),
    }
}

/// Piecewise-constant lasso signal over `aps` whose piece durations are
/// multiples of `unit`, between one and `max_units` units long.
pub fn signal<R: Rng>(rng: &mut R, aps: &[String], max_pieces: usize, unit: f64, max_units: u32) -> PiecewiseSignal {
    let piece = |rng: &mut R| Piece {
        dur: unit * rng.gen_range(1..=max_units) as f64,
        aps: aps.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect(),
    };
    let np = rng.gen_range(0..max_pieces);
    let nc = rng.gen_range(1..=max_pieces);
    let prefix = (0..np).map(|_| piece(rng)).collect();
    let cycle = (0..nc).map(|_| piece(rng)).collect();
    PiecewiseSignal {
        aps: aps.to_vec(),
        prefix,
        cycle,
    }
}

fn letter_after<R: Rng>(rng: &mut R, prev: Option<ObsMap>, n: usize) -> ObsMap {
    let mut m = ObsMap(0);
    let changing = if rng.gen_bool(0.5) { Some(rng.gen_range(0..n)) } else { None };
    for i in 0..n {
        let start = match prev {
            Some(p) => p.get(i).ends_true(),
            None => rng.gen_bool(0.5),
        };
        let o = match (start, changing == Some(i)) {
            (true, false) => Observation::A,
            (true, true) => Observation::Z,
            (false, true) => Observation::E,
            (false, false) => Observation::N,
        };
        m.set(i, o);
    }
    m
}

/// Random valid signal word over `aps` with at most `max_len` positions,
/// drawn by rejection on the closing seam.
pub fn signal_word<R: Rng>(rng: &mut R, aps: &[String], max_len: usize) -> SignalWord {
    let n = aps.len();
    loop {
        let len = rng.gen_range(1..=max_len);
        let split = rng.gen_range(0..len);
        let mut letters = Vec::with_capacity(len);
        let mut prev = None;
        for _ in 0..len {
            let l = letter_after(rng, prev, n);
            letters.push(l);
            prev = Some(l);
        }
        let w = SignalWord::new(aps.to_vec(), letters[..split].to_vec(), letters[split..].to_vec());
        if is_signal_word(&w).is_ok() {
            return w;
        }
    }
}

/// Every valid signal word over `aps` with between one and `max_len`
/// positions, in every prefix/loop split.
pub fn all_signal_words(aps: &[String], max_len: usize) -> Vec<SignalWord> {
    let n = aps.len();
    let letters: Vec<ObsMap> = ObsMap::all(n).filter(|m| m.changes(n) <= 1).collect();
    let mut out = Vec::new();
    let mut seqs: Vec<Vec<ObsMap>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &seqs {
            for &l in &letters {
                let ok = s.last().map_or(true, |p: &ObsMap| (0..n).all(|i| p.get(i).ends_true() == l.get(i).starts_true()));
                if ok {
                    let mut t = s.clone();
                    t.push(l);
                    next.push(t);
                }
            }
        }
        for s in &next {
            for split in 0..s.len() {
                let w = SignalWord::new(aps.to_vec(), s[..split].to_vec(), s[split..].to_vec());
                if is_signal_word(&w).is_ok() {
                    out.push(w);
                }
            }
        }
        seqs = next;
    }
    out
}

/// Random labeled graph; with `total`, every state gets a successor.
fn random_graph<R: Rng>(rng: &mut R, aps: &[String], states: usize, alphabet: &[ObsMap], density: f64, total: bool) -> LabeledGraph {
    let mut edges = vec![Vec::new(); states];
    for es in edges.iter_mut() {
        for t in 0..states {
            for &l in alphabet {
                if rng.gen_bool(density) {
                    es.push((l, t));
                }
            }
        }
        if es.is_empty() && (total || rng.gen_bool(0.8)) {
            es.push((*alphabet.choose(rng).expect("nonempty alphabet"), rng.gen_range(0..states)));
        }
    }
    let mut g = LabeledGraph {
        aps: aps.to_vec(),
        names: (0..states).map(|i| format!("s{}", i)).collect(),
        initial: 0,
        edges,
    };
    g.sort_edges();
    g
}

/// Transition system with `states` states whose labels are drawn from
/// `alphabet`. Every state has a successor.
pub fn model<R: Rng>(rng: &mut R, aps: &[String], states: usize, alphabet: &[ObsMap]) -> SymbolicModel {
    SymbolicModel {
        graph: random_graph(rng, aps, states, alphabet, 0.3, true),
        grid: None,
        cells: states,
        sink: None,
        unsound_tau: false,
    }
}

/// Nondeterministic Büchi automaton with `states` states over `alphabet`.
pub fn automaton<R: Rng>(rng: &mut R, aps: &[String], states: usize, alphabet: &[ObsMap]) -> ApAutomaton {
    let mut graph = random_graph(rng, aps, states, alphabet, 0.35, false);
    for (s, n) in graph.names.iter_mut().enumerate() {
        *n = format!("b{}", s);
    }
    let accepting = (0..states).map(|_| rng.gen_bool(0.4)).collect();
    ApAutomaton { graph, accepting }
}

/// Game with between two and `max_vertices` vertices, random owners and
/// accepting vertices, and at least one successor per vertex.
pub fn game<R: Rng>(rng: &mut R, max_vertices: usize) -> BuchiGame {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let owner = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Owner::Player } else { Owner::Opponent })
        .collect();
    let succ = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=3.min(n));
            let mut s: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(rng, k).copied().collect();
            s.sort_unstable();
            s
        })
        .collect();
    let accepting = (0..n).map(|_| rng.gen_bool(0.3)).collect();
    BuchiGame::from_parts(owner, succ, accepting, 0)
}

/// Every lasso over `alphabet` with between one and `max_len` positions.
pub fn all_lassos(alphabet: &[ObsMap], max_len: usize) -> Vec<Lasso<ObsMap>> {
    let mut out = Vec::new();
    let mut seqs: Vec<Vec<ObsMap>> = vec![Vec::new()];
    for _ in 0..max_len {
        seqs = seqs
            .iter()
            .flat_map(|s| {
                alphabet.iter().map(move |&l| {
                    let mut t = s.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
        for s in &seqs {
            for split in 0..s.len() {
                out.push(Lasso::new(s[..split].to_vec(), s[split..].to_vec()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn aps(n: usize) -> Vec<String> {
        ["p", "q", "r"][..n].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn random_words_are_signal_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            assert!(is_signal_word(&signal_word(&mut rng, &aps(3), 6)).is_ok());
        }
    }

    #[test]
    fn exhaustive_words_count() {
        // One proposition: A and N keep the value, Z and E flip it, so each
        // sequence is fixed by its first value and its flips.
        let ws = all_signal_words(&aps(1), 2);
        let closed = ws.iter().filter(|w| w.word.len() == 1).count();
        assert_eq!(closed, 2);
        assert!(ws.iter().all(|w| is_signal_word(w).is_ok()));
    }

    #[test]
    fn games_have_successors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let g = game(&mut rng, 12);
            assert!(g.succ.iter().all(|s| !s.is_empty()));
        }
    }
}
