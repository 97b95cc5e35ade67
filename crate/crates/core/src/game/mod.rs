//! Büchi games between an Opponent choosing system transitions and a Player
//! choosing automaton transitions, and their solution.

mod oracle;
mod solve;

pub use oracle::{brute_force_winning, check_strategy, fixpoint_winning};
pub use solve::{attractor, solve_buchi, SolveResult, SolveResultJson, SolveStats, StrategyMove};

use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::abstraction::SymbolicModel;
use crate::automata::ApAutomaton;
use crate::observations::ObsMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GameError {
    #[error("automaton proposition {0} is not tracked by the system model")]
    AlphabetMismatch(String),
    #[error("strategy has no move at reached Player vertex {0}")]
    StrategyUndefined(usize),
    #[error("strategy move {from} -> {to} is not an edge")]
    NotAnEdge { from: usize, to: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Owner {
    Player,
    Opponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// System in `cell`, automaton in `state`; the Opponent picks a system
    /// transition.
    Opponent { cell: usize, state: usize },
    /// The system moved to `cell` observing `label`; the Player picks an
    /// automaton transition on `label`.
    Player { cell: usize, label: ObsMap, state: usize },
    /// Reached when the Opponent has no move.
    Win,
    /// Reached when the Player has no move.
    Lose,
}

impl Vertex {
    fn order_key(&self) -> (u8, usize, u8, ObsMap, usize) {
        match *self {
            Vertex::Opponent { cell, state } => (0, cell, 0, ObsMap(0), state),
            Vertex::Player { cell, label, state } => (0, cell, 1, label, state),
            Vertex::Win => (1, 0, 0, ObsMap(0), 0),
            Vertex::Lose => (2, 0, 0, ObsMap(0), 0),
        }
    }
}

/// Game graph with vertices in a fixed order: by cell, Opponent vertex
/// before Player vertices, then label and automaton state; sinks last.
#[derive(Clone, Debug)]
pub struct BuchiGame {
    pub vertices: Vec<Vertex>,
    pub owner: Vec<Owner>,
    pub succ: Vec<Vec<usize>>,
    pub accepting: Vec<bool>,
    pub initial: usize,
    /// Player vertices redirected to the losing sink.
    pub player_stuck: Vec<usize>,
    /// Opponent vertices redirected to the winning sink.
    pub opponent_stuck: Vec<usize>,
    pub cell_names: Vec<String>,
    pub state_names: Vec<String>,
    pub aps: Vec<String>,
}

impl BuchiGame {
    /// Game from explicit parts (for tests and generated instances). Every
    /// vertex needs a successor.
    pub fn from_parts(owner: Vec<Owner>, succ: Vec<Vec<usize>>, accepting: Vec<bool>, initial: usize) -> BuchiGame {
        assert!(succ.iter().all(|s| !s.is_empty()), "every vertex needs a successor");
        let vertices = (0..owner.len())
            .map(|i| match owner[i] {
                Owner::Opponent => Vertex::Opponent { cell: i, state: 0 },
                Owner::Player => Vertex::Player {
                    cell: i,
                    label: ObsMap(0),
                    state: 0,
                },
            })
            .collect();
        BuchiGame {
            vertices,
            owner,
            succ,
            accepting,
            initial,
            player_stuck: Vec::new(),
            opponent_stuck: Vec::new(),
            cell_names: Vec::new(),
            state_names: Vec::new(),
            aps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn player_vertices(&self) -> usize {
        self.vertices.iter().filter(|v| matches!(v, Vertex::Player { .. })).count()
    }

    pub fn opponent_vertices(&self) -> usize {
        self.vertices.iter().filter(|v| matches!(v, Vertex::Opponent { .. })).count()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(|s| s.len()).sum()
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, ws) in self.succ.iter().enumerate() {
            for &w in ws {
                pred[w].push(v);
            }
        }
        pred
    }

    pub fn vertex_name(&self, v: usize) -> String {
        let cell = |c: usize| self.cell_names.get(c).cloned().unwrap_or_else(|| c.to_string());
        let state = |b: usize| self.state_names.get(b).cloned().unwrap_or_else(|| b.to_string());
        match self.vertices[v] {
            Vertex::Opponent { cell: c, state: b } => format!("[{} {}]", cell(c), state(b)),
            Vertex::Player { cell: c, label, state: b } => {
                format!("[{} {} {}]", cell(c), label.render(&self.aps), state(b))
            }
            Vertex::Win => "win".into(),
            Vertex::Lose => "lose".into(),
        }
    }
}

/// Game graph as written by `--export-game`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameJson {
    pub aps: Vec<String>,
    pub initial: String,
    pub vertices: Vec<GameVertexJson>,
    pub solution: Option<SolveResultJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameVertexJson {
    pub name: String,
    pub owner: Owner,
    pub accepting: bool,
    pub succ: Vec<String>,
}

impl BuchiGame {
    pub fn to_json(&self, solution: Option<&SolveResult>) -> GameJson {
        GameJson {
            aps: self.aps.clone(),
            initial: self.vertex_name(self.initial),
            vertices: (0..self.len())
                .map(|v| GameVertexJson {
                    name: self.vertex_name(v),
                    owner: self.owner[v],
                    accepting: self.accepting[v],
                    succ: self.succ[v].iter().map(|&w| self.vertex_name(w)).collect(),
                })
                .collect(),
            solution: solution.map(|s| s.to_json(self)),
        }
    }
}

impl fmt::Display for BuchiGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} Player + {} Opponent vertices, {} edges",
            self.player_vertices(),
            self.opponent_vertices(),
            self.num_edges()
        )
    }
}

/// Product game restricted to vertices reachable from
/// (initial cell, initial automaton state). The automaton's propositions
/// must be tracked by the model; model labels are projected onto them.
pub fn build_game(s: &SymbolicModel, b: &ApAutomaton) -> Result<BuchiGame, GameError> {
    let sg = &s.graph;
    let bg = &b.graph;
    let mut proj = Vec::with_capacity(bg.aps.len());
    for p in &bg.aps {
        match sg.aps.iter().position(|q| q == p) {
            Some(i) => proj.push(i),
            None => return Err(GameError::AlphabetMismatch(p.clone())),
        }
    }
    let project = |l: ObsMap| {
        let mut out = ObsMap(0);
        for (j, &i) in proj.iter().enumerate() {
            out.set(j, l.get(i));
        }
        out
    };
    let mut by_label: HashMap<(usize, ObsMap), Vec<usize>> = HashMap::new();
    for (q, es) in bg.edges.iter().enumerate() {
        for &(l, t) in es {
            by_label.entry((q, l)).or_default().push(t);
        }
    }

    let mut ids: HashMap<Vertex, usize> = HashMap::new();
    let mut verts: Vec<Vertex> = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |v: Vertex, verts: &mut Vec<Vertex>, queue: &mut VecDeque<usize>| -> usize {
        *ids.entry(v).or_insert_with(|| {
            verts.push(v);
            queue.push_back(verts.len() - 1);
            verts.len() - 1
        })
    };
    let init = intern(
        Vertex::Opponent {
            cell: sg.initial,
            state: bg.initial,
        },
        &mut verts,
        &mut queue,
    );
    let (mut win, mut lose) = (None, None);
    let (mut player_stuck, mut opponent_stuck) = (Vec::new(), Vec::new());
    while let Some(v) = queue.pop_front() {
        let mut out = Vec::new();
        match verts[v] {
            Vertex::Opponent { cell, state } => {
                for &(l, t) in &sg.edges[cell] {
                    out.push(intern(
                        Vertex::Player {
                            cell: t,
                            label: l,
                            state,
                        },
                        &mut verts,
                        &mut queue,
                    ));
                }
                if out.is_empty() {
                    opponent_stuck.push(v);
                    out.push(*win.get_or_insert_with(|| intern(Vertex::Win, &mut verts, &mut queue)));
                }
            }
            Vertex::Player { cell, label, state } => {
                if let Some(ts) = by_label.get(&(state, project(label))) {
                    for &t in ts {
                        out.push(intern(Vertex::Opponent { cell, state: t }, &mut verts, &mut queue));
                    }
                }
                if out.is_empty() {
                    player_stuck.push(v);
                    out.push(*lose.get_or_insert_with(|| intern(Vertex::Lose, &mut verts, &mut queue)));
                }
            }
            Vertex::Win | Vertex::Lose => out.push(v),
        }
        out.sort_unstable();
        out.dedup();
        if succ.len() <= v {
            succ.resize(v + 1, Vec::new());
        }
        succ[v] = out;
    }
    succ.resize(verts.len(), Vec::new());

    // Renumber into the fixed order.
    let mut order: Vec<usize> = (0..verts.len()).collect();
    order.sort_by_key(|&i| verts[i].order_key());
    let mut new_id = vec![0; verts.len()];
    for (n, &o) in order.iter().enumerate() {
        new_id[o] = n;
    }
    let vertices: Vec<Vertex> = order.iter().map(|&o| verts[o]).collect();
    let owner = vertices
        .iter()
        .map(|v| match v {
            Vertex::Player { .. } | Vertex::Lose => Owner::Player,
            _ => Owner::Opponent,
        })
        .collect();
    let succ = order
        .iter()
        .map(|&o| {
            let mut s: Vec<usize> = succ[o].iter().map(|&w| new_id[w]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let accepting = vertices
        .iter()
        .map(|v| match *v {
            Vertex::Opponent { state, .. } => b.accepting[state],
            Vertex::Win => true,
            _ => false,
        })
        .collect();
    let mut player_stuck: Vec<usize> = player_stuck.into_iter().map(|v| new_id[v]).collect();
    let mut opponent_stuck: Vec<usize> = opponent_stuck.into_iter().map(|v| new_id[v]).collect();
    player_stuck.sort_unstable();
    opponent_stuck.sort_unstable();
    Ok(BuchiGame {
        vertices,
        owner,
        succ,
        accepting,
        initial: new_id[init],
        player_stuck,
        opponent_stuck,
        cell_names: sg.names.clone(),
        state_names: bg.names.clone(),
        aps: sg.aps.clone(),
    })
}
