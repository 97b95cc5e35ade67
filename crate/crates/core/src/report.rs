//! Verification reports with JSON and CSV round-trips.

use serde::{Deserialize, Serialize};
use std::fmt;

pub const REPORT_SCHEMA: &str = "apobs-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    /// The game is won: every trajectory satisfies the formula.
    Verified,
    /// The game is lost; nothing follows about the system.
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "VERIFIED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Sizes and averaged stage timings of one verification run. Flat so that
/// it has the same shape as a CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub formula: String,
    pub nnf: String,
    pub system: String,
    pub verdict: Verdict,
    pub config_hash: String,
    pub repeat: usize,
    pub eta: f64,
    pub tau: f64,
    pub prune: String,
    pub filter_multi_change: bool,
    pub allow_unsound_tau: bool,
    /// Built although the period check failed.
    pub unsound_tau: bool,
    pub v_max: f64,
    /// Empty when fewer than two propositions are tracked or the check
    /// failed.
    pub tau_max: Option<f64>,
    pub subformulas: usize,
    pub nontrivial_subformulas: usize,
    pub gba_states: usize,
    pub reachable_states: usize,
    pub pruned_states: usize,
    pub minimized_states: usize,
    pub automaton_states: usize,
    pub automaton_seconds: f64,
    pub model_cells: usize,
    pub model_states: usize,
    pub model_transitions: usize,
    pub model_seconds: f64,
    pub game_player: usize,
    pub game_opponent: usize,
    pub game_edges: usize,
    pub player_stuck: usize,
    pub opponent_stuck: usize,
    pub game_seconds: f64,
    pub w0_size: usize,
    pub solve_iterations: usize,
    pub solve_seconds: f64,
    pub total_seconds: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("CSV has no data row")]
    Empty,
    #[error("unsupported report schema {0:?}")]
    Schema(String),
}

impl Report {
    pub fn to_json(&self) -> Result<String, ReportError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Report, ReportError> {
        let r: Report = serde_json::from_str(s)?;
        if r.schema != REPORT_SCHEMA {
            return Err(ReportError::Schema(r.schema));
        }
        Ok(r)
    }

    /// Header plus one row per report.
    pub fn to_csv(reports: &[Report]) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in reports {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| ReportError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn from_csv(s: &str) -> Result<Vec<Report>, ReportError> {
        let mut rd = csv::Reader::from_reader(s.as_bytes());
        let mut out = Vec::new();
        for r in rd.deserialize() {
            let r: Report = r?;
            if r.schema != REPORT_SCHEMA {
                return Err(ReportError::Schema(r.schema));
            }
            out.push(r);
        }
        if out.is_empty() {
            return Err(ReportError::Empty);
        }
        Ok(out)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn sample() -> Report {
        Report {
            schema: REPORT_SCHEMA.into(),
            formula: "G r & F(g & F p)".into(),
            nnf: "(false R r) & (true U (g & (true U p)))".into(),
            system: "drone, \"patrol\"".into(),
            verdict: Verdict::Inconclusive,
            config_hash: "ab12".into(),
            repeat: 10,
            eta: 1.0,
            tau: 0.1 + 0.2,
            prune: "deadlocks".into(),
            filter_multi_change: true,
            allow_unsound_tau: true,
            unsound_tau: true,
            v_max: 4.1,
            tau_max: None,
            subformulas: 10,
            nontrivial_subformulas: 8,
            gba_states: 1000,
            reachable_states: 900,
            pruned_states: 800,
            minimized_states: 20,
            automaton_states: 49,
            automaton_seconds: 1.0 / 3.0,
            model_cells: 1089,
            model_states: 1089,
            model_transitions: 12345,
            model_seconds: 0.77,
            game_player: 7000,
            game_opponent: 4000,
            game_edges: 30000,
            player_stuck: 3,
            opponent_stuck: 0,
            game_seconds: 2.5e-3,
            w0_size: 17,
            solve_iterations: 4,
            solve_seconds: 1e-9,
            total_seconds: 3.14159,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(Report::from_json(&r.to_json().unwrap()).unwrap(), r);
    }

    #[test]
    fn csv_round_trip() {
        let mut a = sample();
        let mut b = sample();
        b.tau_max = Some(1.0024390243902439);
        b.verdict = Verdict::Verified;
        a.formula = "c U b".into();
        let text = Report::to_csv(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(Report::from_csv(&text).unwrap(), vec![a, b]);
    }

    #[test]
    fn wrong_schema_is_rejected() {
        let mut r = sample();
        r.schema = "other/2".into();
        assert!(matches!(Report::from_json(&r.to_json().unwrap()), Err(ReportError::Schema(_))));
    }
}
