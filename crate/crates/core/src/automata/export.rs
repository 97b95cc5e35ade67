use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::OmegaAutomaton;
use crate::observations::Observation;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub src: String,
    pub label: BTreeMap<String, Observation>,
    pub dst: String,
}

/// State names, edges by name, and one name list per accepting set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutomatonJson {
    pub aps: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub edges: Vec<EdgeJson>,
    pub accepting: Vec<Vec<String>>,
}

pub fn to_json<A: OmegaAutomaton + ?Sized>(a: &A) -> AutomatonJson {
    let g = a.graph();
    AutomatonJson {
        aps: g.aps.clone(),
        states: g.names.clone(),
        initial: g.names[g.initial].clone(),
        edges: g
            .edges
            .iter()
            .enumerate()
            .flat_map(|(s, es)| {
                es.iter().map(move |&(l, t)| EdgeJson {
                    src: g.names[s].clone(),
                    label: l.to_map(&g.aps),
                    dst: g.names[t].clone(),
                })
            })
            .collect(),
        accepting: a
            .acceptance()
            .iter()
            .map(|f| (0..g.len()).filter(|&s| f[s]).map(|s| g.names[s].clone()).collect())
            .collect(),
    }
}

/// Graphviz rendering. States in every accepting set are double circles;
/// the sets a state belongs to are listed under its name.
pub fn to_dot<A: OmegaAutomaton + ?Sized>(a: &A) -> String {
    let g = a.graph();
    let sets = a.acceptance();
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  start [shape=point];\n");
    for s in 0..g.len() {
        let member: Vec<String> = (0..sets.len()).filter(|&i| sets[i][s]).map(|i| i.to_string()).collect();
        let shape = if !sets.is_empty() && member.len() == sets.len() { "doublecircle" } else { "circle" };
        let label = if sets.len() > 1 && !member.is_empty() {
            format!("{}\\n{{{}}}", g.names[s], member.join(","))
        } else {
            g.names[s].clone()
        };
        let _ = writeln!(out, "  s{} [label=\"{}\", shape={}];", s, label, shape);
    }
    let _ = writeln!(out, "  start -> s{};", g.initial);
    for (s, es) in g.edges.iter().enumerate() {
        for &(l, t) in es {
            let _ = writeln!(out, "  s{} -> s{} [label=\"{}\"];", s, t, l.render(&g.aps));
        }
    }
    out.push_str("}\n");
    out
}
