use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use super::dynamics::{clip, motion_field, reach_of, ReachHorizon};
use super::{validate_tau, AbstractionError, Boundary, Grid, Rho, SystemSpec};
use crate::automata::{EdgeJson, LabeledGraph};
use crate::observations::{ObsMap, ObsSet, Observation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    pub horizon: ReachHorizon,
    /// Drop labels in which two distinct propositions change.
    pub filter_multi_change: bool,
    /// Build even when the sampling period does not separate the regions.
    pub allow_unsound_tau: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            horizon: ReachHorizon::Endpoint,
            filter_multi_change: true,
            allow_unsound_tau: false,
        }
    }
}

/// Labeled transition system over grid cells, plus an absorbing state when
/// some cell can leave the domain.
#[derive(Clone, Debug)]
pub struct SymbolicModel {
    pub graph: LabeledGraph,
    /// Absent for models imported from JSON.
    pub grid: Option<Grid>,
    pub cells: usize,
    pub sink: Option<usize>,
    /// Set when built although the period check failed.
    pub unsound_tau: bool,
}

/// Observations compatible with the start-of-slice classification.
pub(crate) fn start_set(r: Rho) -> ObsSet {
    match r {
        Rho::Inside => ObsSet::from_letters("AZ"),
        Rho::Outside => ObsSet::from_letters("EN"),
        Rho::Mixed => ObsSet::FULL,
    }
}

/// Observations compatible with the end-of-slice classification.
pub(crate) fn end_set(r: Rho) -> ObsSet {
    match r {
        Rho::Inside => ObsSet::from_letters("AE"),
        Rho::Outside => ObsSet::from_letters("ZN"),
        Rho::Mixed => ObsSet::FULL,
    }
}

fn product(sets: &[ObsSet], filter: bool) -> Vec<ObsMap> {
    let mut out = vec![(ObsMap(0), 0usize)];
    for (i, s) in sets.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * s.len());
        for &(m, changes) in &out {
            for o in s.iter() {
                let c = changes + usize::from(o.changes());
                if filter && c > 1 {
                    continue;
                }
                next.push((m.with(i, o), c));
            }
        }
        out = next;
    }
    let mut v: Vec<ObsMap> = out.into_iter().map(|(m, _)| m).collect();
    v.sort_unstable();
    v
}

fn cell_name(k: &[i64]) -> String {
    let parts: Vec<String> = k.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Grid abstraction over the propositions `aps` (label order follows
/// `aps`). Each cell steps to every cell meeting its reachable box; the
/// labels of a step are the observation maps allowed by the start cell's
/// classification and the target cell's classification of each region.
pub fn build_symbolic_model(spec: &SystemSpec, aps: &[String], cfg: &BuildConfig) -> Result<SymbolicModel, AbstractionError> {
    spec.validate()?;
    let regions = aps.iter().map(|p| spec.region(p)).collect::<Result<Vec<_>, _>>()?;
    let mut unsound_tau = false;
    if let Err(e) = validate_tau(spec, aps) {
        if !cfg.allow_unsound_tau {
            return Err(e);
        }
        log::warn!("{}; building anyway", e);
        unsound_tau = true;
    }
    let grid = spec.grid();
    let n = grid.len();
    let field = motion_field(spec, &grid);
    let rho: Vec<Vec<Rho>> = (0..n)
        .map(|c| {
            let b = grid.cell_box(c);
            regions.iter().map(|r| r.classify(&b)).collect()
        })
        .collect();

    let mut label_cache: HashMap<(Vec<Rho>, Vec<Rho>), Vec<ObsMap>> = HashMap::new();
    let mut edges: Vec<Vec<(ObsMap, usize)>> = Vec::with_capacity(n + 1);
    let mut exiting = Vec::new();
    for c in 0..n {
        let m = field[c].as_ref().ok_or_else(|| AbstractionError::UndefinedMode(grid.coords(c)))?;
        let raw = reach_of(&grid, c, m, spec.tau, cfg.horizon);
        let (b, exits) = clip(&raw, &spec.domain);
        if exits && spec.boundary == Boundary::Sink {
            exiting.push(c);
        }
        let ranges = grid.cells_meeting(&b);
        let mut out = Vec::new();
        let mut k: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        if ranges.iter().all(|r| r.0 <= r.1) {
            loop {
                let t = grid.index(&k).expect("range is on the grid");
                let labels = label_cache.entry((rho[c].clone(), rho[t].clone())).or_insert_with(|| {
                    let sets: Vec<ObsSet> = (0..aps.len()).map(|i| start_set(rho[c][i]).intersect(end_set(rho[t][i]))).collect();
                    product(&sets, cfg.filter_multi_change)
                });
                out.extend(labels.iter().map(|&l| (l, t)));
                let mut a = k.len();
                loop {
                    if a == 0 {
                        break;
                    }
                    a -= 1;
                    if k[a] < ranges[a].1 {
                        k[a] += 1;
                        break;
                    }
                    k[a] = ranges[a].0;
                    if a == 0 {
                        a = usize::MAX;
                        break;
                    }
                }
                if a == usize::MAX {
                    break;
                }
            }
        }
        edges.push(out);
    }
    let mut names: Vec<String> = (0..n).map(|c| cell_name(&grid.coords(c))).collect();
    let sink = if exiting.is_empty() {
        None
    } else {
        let s = n;
        let all = product(&vec![ObsSet::FULL; aps.len()], cfg.filter_multi_change);
        for &c in &exiting {
            edges[c].extend(all.iter().map(|&l| (l, s)));
        }
        edges.push(all.iter().map(|&l| (l, s)).collect());
        names.push("out".to_string());
        Some(s)
    };
    let initial = super::gamma(spec, &spec.x_in)?;
    let mut graph = LabeledGraph {
        aps: aps.to_vec(),
        names,
        initial,
        edges,
    };
    graph.sort_edges();
    log::debug!(
        "symbolic model: {} cells, {} transitions, sink {}",
        n,
        graph.num_edges(),
        sink.is_some()
    );
    Ok(SymbolicModel {
        graph,
        grid: Some(grid),
        cells: n,
        sink,
        unsound_tau,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub aps: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub edges: Vec<EdgeJson>,
}

impl SymbolicModel {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// Whether the cells and letters form a run (`cells` has one more entry
    /// than `letters`).
    pub fn is_run(&self, cells: &[usize], letters: &[ObsMap]) -> bool {
        cells.len() == letters.len() + 1
            && letters
                .iter()
                .enumerate()
                .all(|(k, &l)| self.graph.successors(cells[k], l).any(|t| t == cells[k + 1]))
    }

    pub fn to_json(&self) -> ModelJson {
        let g = &self.graph;
        ModelJson {
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
        }
    }

    pub fn from_json(j: &ModelJson) -> Result<SymbolicModel, AbstractionError> {
        let err = |m: String| AbstractionError::Model(m);
        let index: HashMap<&str, usize> = j.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != j.states.len() {
            return Err(err("duplicate state names".into()));
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| err(format!("unknown state {}", s)));
        let mut edges = vec![Vec::new(); j.states.len()];
        for e in &j.edges {
            let l = ObsMap::from_map(&j.aps, &e.label).map_err(|e| err(e.to_string()))?;
            edges[lookup(&e.src)?].push((l, lookup(&e.dst)?));
        }
        let mut graph = LabeledGraph {
            aps: j.aps.clone(),
            names: j.states.clone(),
            initial: lookup(&j.initial)?,
            edges,
        };
        graph.sort_edges();
        let sink = j.states.iter().position(|s| s == "out");
        Ok(SymbolicModel {
            cells: j.states.len() - usize::from(sink.is_some()),
            graph,
            grid: None,
            sink,
            unsound_tau: false,
        })
    }
}

/// Whether `o` is allowed for a step between cells classified `from` and
/// `to`.
pub fn label_allowed(from: Rho, to: Rho, o: Observation) -> bool {
    start_set(from).intersect(end_set(to)).contains(o)
}

#[cfg(test)]
mod tests {
    use super::super::tests::plane;
    use super::super::{ApRegion, Field, HalfSpace, Op};
    use super::*;
    use Observation::*;

    fn with_region(mut s: SystemSpec, p: &str, r: ApRegion) -> SystemSpec {
        s.aps.insert(p.to_string(), r);
        s
    }

    #[test]
    fn labels_follow_box_classification() {
        // Half-inside start, fully inside end: only E and A remain.
        assert!(label_allowed(Rho::Mixed, Rho::Inside, A));
        assert!(label_allowed(Rho::Mixed, Rho::Inside, E));
        assert!(!label_allowed(Rho::Mixed, Rho::Inside, Z));
        assert!(!label_allowed(Rho::Mixed, Rho::Inside, N));
        let only: Vec<_> = start_set(Rho::Inside).intersect(end_set(Rho::Inside)).iter().collect();
        assert_eq!(only, vec![A]);
    }

    #[test]
    fn plane_model_with_one_region() {
        let s = with_region(
            plane(Field::Constant { heading: 0.0 }),
            "c",
            ApRegion(vec![vec![HalfSpace::new(1, Op::Ge, 6.21)]]),
        );
        let m = build_symbolic_model(&s, &["c".to_string()], &BuildConfig::default()).unwrap();
        assert_eq!(m.cells, 1089);
        assert!(m.sink.is_some());
        let g = m.grid.as_ref().unwrap();
        assert_eq!(g.coords(m.graph.initial), vec![-10, 13]);
        let from = g.index(&[0, 10]).unwrap();
        let targets: Vec<Vec<i64>> = m.graph.edges[from].iter().map(|&(_, t)| g.coords(t)).collect();
        assert!(targets.contains(&vec![4, 10]));
        assert!(m.graph.edges[from].iter().all(|&(l, _)| l.get(0) == A));
    }

    #[test]
    fn json_round_trip() {
        let mut s = with_region(
            plane(Field::Constant { heading: 0.0 }),
            "c",
            ApRegion(vec![vec![HalfSpace::new(1, Op::Ge, 6.21)]]),
        );
        s.domain = vec![[-2.5, 2.5], [-2.5, 2.5]];
        s.x_in = vec![0.0, 0.0];
        s.modes.default.v = 1.0;
        let m = build_symbolic_model(&s, &["c".to_string()], &BuildConfig::default()).unwrap();
        let j = m.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = SymbolicModel::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.graph, m.graph);
        assert_eq!(back.sink, m.sink);
    }
}
