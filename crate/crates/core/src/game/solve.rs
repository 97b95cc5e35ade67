use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::time::Instant;

use super::{BuchiGame, Owner};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Rounds of the outer loop (one per removed Opponent attractor, plus
    /// the final one).
    pub iterations: usize,
    pub attractors: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub winning: Vec<bool>,
    /// Move of each winning Player vertex.
    pub strategy: Vec<Option<usize>>,
    /// Whether the initial vertex is winning.
    pub verdict: bool,
    pub stats: SolveStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyMove {
    pub vertex: String,
    #[serde(rename = "move")]
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResultJson {
    pub verdict: String,
    pub w0_size: usize,
    pub strategy: Vec<StrategyMove>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn w0_size(&self) -> usize {
        self.winning.iter().filter(|&&w| w).count()
    }

    pub fn to_json(&self, g: &BuchiGame) -> SolveResultJson {
        SolveResultJson {
            verdict: if self.verdict { "VERIFIED" } else { "INCONCLUSIVE" }.into(),
            w0_size: self.w0_size(),
            strategy: self
                .strategy
                .iter()
                .enumerate()
                .filter_map(|(v, m)| {
                    m.map(|w| StrategyMove {
                        vertex: g.vertex_name(v),
                        to: g.vertex_name(w),
                    })
                })
                .collect(),
            stats: self.stats.clone(),
        }
    }
}

/// Attractor of `target` for `player` inside the subgame `sub`. Returns the
/// attractor and, for `player`'s vertices added by the construction, the
/// move that enters the previous layer.
pub fn attractor(
    g: &BuchiGame,
    pred: &[Vec<usize>],
    sub: &[bool],
    target: &[bool],
    player: Owner,
) -> (Vec<bool>, Vec<Option<usize>>) {
    let n = g.len();
    let mut attr = vec![false; n];
    let mut moves = vec![None; n];
    let mut count: Vec<usize> = (0..n)
        .map(|v| if sub[v] { g.succ[v].iter().filter(|&&w| sub[w]).count() } else { 0 })
        .collect();
    let mut queue = VecDeque::new();
    for v in 0..n {
        if sub[v] && target[v] {
            attr[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(w) = queue.pop_front() {
        for &v in &pred[w] {
            if !sub[v] || attr[v] {
                continue;
            }
            if g.owner[v] == player {
                attr[v] = true;
                moves[v] = Some(w);
                queue.push_back(v);
            } else {
                count[v] -= 1;
                if count[v] == 0 {
                    attr[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    (attr, moves)
}

/// Zielonka's recursion for the two priorities 2 (accepting) and 1. With two
/// priorities the second recursive call is the only one that can recur, so
/// it runs as a loop: remove the Opponent attractor of the vertices that
/// cannot force a visit to an accepting vertex, until none remain.
pub fn solve_buchi(g: &BuchiGame) -> SolveResult {
    let start = Instant::now();
    let n = g.len();
    let pred = g.predecessors();
    let mut sub = vec![true; n];
    let mut winning = vec![false; n];
    let mut strategy = vec![None; n];
    let mut stats = SolveStats::default();
    loop {
        stats.iterations += 1;
        if !sub.iter().any(|&s| s) {
            break;
        }
        let top: Vec<bool> = (0..n).map(|v| sub[v] && g.accepting[v]).collect();
        if !top.iter().any(|&t| t) {
            break;
        }
        let (a, moves) = attractor(g, &pred, &sub, &top, Owner::Player);
        stats.attractors += 1;
        let rest: Vec<bool> = (0..n).map(|v| sub[v] && !a[v]).collect();
        if !rest.iter().any(|&r| r) {
            // The Player wins the whole subgame: follow the attractor moves,
            // and from accepting vertices stay inside.
            for v in 0..n {
                if !sub[v] {
                    continue;
                }
                winning[v] = true;
                if g.owner[v] == Owner::Player {
                    strategy[v] = moves[v].or_else(|| g.succ[v].iter().copied().find(|&w| sub[w]));
                }
            }
            break;
        }
        let (b, _) = attractor(g, &pred, &sub, &rest, Owner::Opponent);
        stats.attractors += 1;
        for v in 0..n {
            if b[v] {
                sub[v] = false;
            }
        }
    }
    stats.seconds = start.elapsed().as_secs_f64();
    SolveResult {
        verdict: winning[g.initial],
        winning,
        strategy,
        stats,
    }
}
