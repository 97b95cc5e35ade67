//! Built-in system scenarios.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::abstraction::{ApRegion, Boundary, Field, HalfSpace, ModeParams, Modes, Op, PatrolField, SystemSpec};

/// Reading of the "not red" region around the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RMode {
    /// |x| > 2.1 and |y| > 2.1.
    And,
    /// |x| > 2.1 or |y| > 2.1: everywhere outside the central square.
    #[default]
    Or,
}

impl std::str::FromStr for RMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "and" => Ok(RMode::And),
            "or" => Ok(RMode::Or),
            _ => Err(format!("r mode must be \"and\" or \"or\", got {:?}", s)),
        }
    }
}

pub const DRONE_PATROL: PatrolField = PatrolField {
    inner: 7.0,
    outer: 12.0,
    edge: 15.0,
};

fn hs(axis: usize, op: Op, c: f64) -> HalfSpace {
    HalfSpace::new(axis, op, c)
}

/// Drone regions: c, b, p, g and r.
pub fn drone_regions(r_mode: RMode) -> BTreeMap<String, ApRegion> {
    let t = 6.21;
    let r = match r_mode {
        RMode::Or => ApRegion(vec![
            vec![hs(0, Op::Gt, 2.1)],
            vec![hs(0, Op::Lt, -2.1)],
            vec![hs(1, Op::Gt, 2.1)],
            vec![hs(1, Op::Lt, -2.1)],
        ]),
        RMode::And => {
            let mut conj = Vec::new();
            for x in [Op::Gt, Op::Lt] {
                for y in [Op::Gt, Op::Lt] {
                    let cx = if x == Op::Gt { 2.1 } else { -2.1 };
                    let cy = if y == Op::Gt { 2.1 } else { -2.1 };
                    conj.push(vec![hs(0, x, cx), hs(1, y, cy)]);
                }
            }
            ApRegion(conj)
        }
    };
    let mut m = BTreeMap::new();
    m.insert("c".to_string(), ApRegion(vec![vec![hs(1, Op::Ge, t)]]));
    m.insert("b".to_string(), ApRegion(vec![vec![hs(0, Op::Ge, t), hs(1, Op::Ge, 10.32)]]));
    m.insert("p".to_string(), ApRegion(vec![vec![hs(0, Op::Le, t), hs(1, Op::Le, t)]]));
    m.insert("g".to_string(), ApRegion(vec![vec![hs(0, Op::Ge, t), hs(1, Op::Le, t)]]));
    m.insert("r".to_string(), r);
    m
}

/// Surveillance drone over a 33 m square: speed 4 m/s with up to 0.1 m/s
/// and 0.08 rad of disturbance, period 1 s, starting at (-10, 13), flying
/// the given heading field.
pub fn drone(eta: f64, r_mode: RMode, patrol: PatrolField) -> SystemSpec {
    let metadata = serde_json::json!({
        "scenario": "drone",
        "r_mode": r_mode,
    });
    SystemSpec {
        dim: 2,
        domain: vec![[-16.5, 16.5], [-16.5, 16.5]],
        eta,
        tau: 1.0,
        x_in: vec![-10.0, 13.0],
        modes: Modes {
            default: ModeParams {
                v: 4.0,
                ev: 0.1,
                etheta: 0.08,
            },
            field: Field::Patrol(patrol),
        },
        aps: drone_regions(r_mode),
        boundary: Boundary::Sink,
        metadata: Some(metadata),
    }
}

/// Formulas of the benchmark table, in order.
pub const BENCH_FORMULAS: [&str; 9] = [
    "G r",
    "F p",
    "c U b",
    "b R c",
    "F G r",
    "G F g",
    "F(g & F p)",
    "G r & (F p & F c)",
    "G r & F(g & F p)",
];

/// Published figures for the benchmark formulas on the drone: automaton
/// size and time, game size (Player + Opponent) and construction time,
/// solving time and total time, in seconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub formula: &'static str,
    pub automaton_states: usize,
    pub automaton_seconds: f64,
    pub game_player: usize,
    pub game_opponent: usize,
    pub game_seconds: f64,
    pub solve_seconds: f64,
    pub total_seconds: f64,
}

const fn row(
    formula: &'static str,
    automaton_states: usize,
    automaton_seconds: f64,
    game_player: usize,
    game_opponent: usize,
    game_seconds: f64,
    solve_seconds: f64,
    total_seconds: f64,
) -> ReferenceRow {
    ReferenceRow {
        formula,
        automaton_states,
        automaton_seconds,
        game_player,
        game_opponent,
        game_seconds,
        solve_seconds,
        total_seconds,
    }
}

pub const REFERENCE_ROWS: [ReferenceRow; 9] = [
    row("G r", 2, 0.01, 651, 642, 0.23, 0.35, 1.34),
    row("F p", 5, 0.01, 757, 680, 0.52, 0.46, 1.75),
    row("c U b", 7, 0.04, 830, 691, 0.69, 0.55, 2.04),
    row("b R c", 7, 0.04, 814, 685, 0.69, 0.53, 2.03),
    row("F G r", 6, 0.02, 1933, 1924, 0.60, 2.05, 3.44),
    row("G F g", 7, 0.02, 4640, 2631, 1.93, 2.48, 5.20),
    row("F(g & F p)", 33, 0.40, 4856, 2687, 8.98, 3.05, 13.19),
    row("G r & (F p & F c)", 46, 51.39, 7723, 4144, 29.66, 7.54, 89.36),
    row("G r & F(g & F p)", 49, 53.86, 7279, 4030, 25.49, 7.06, 87.18),
];

/// Published symbolic model size and build time of the drone.
pub const REFERENCE_CELLS: usize = 1089;
pub const REFERENCE_MODEL_SECONDS: f64 = 0.77;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drone_grid() {
        let s = drone(1.0, RMode::Or, DRONE_PATROL);
        s.validate().unwrap();
        assert_eq!(s.grid().len(), 1089);
        assert_eq!(drone(0.5, RMode::Or, DRONE_PATROL).grid().len(), 67 * 67);
        let r = &s.aps["r"];
        assert!(r.contains(&[3.0, 0.0]));
        assert!(!drone_regions(RMode::And)["r"].contains(&[3.0, 0.0]));
        assert!(!r.contains(&[0.0, 0.0]));
    }

    #[test]
    fn reference_rows_match_formula_list() {
        for (r, f) in REFERENCE_ROWS.iter().zip(BENCH_FORMULAS) {
            assert_eq!(r.formula, f);
        }
    }
}
