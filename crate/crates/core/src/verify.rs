//! The whole pipeline: formula to automaton, system to symbolic model,
//! product game, solution and report.

use sha2::{Digest, Sha256};
use std::time::Instant;

use crate::abstraction::{build_symbolic_model, validate_tau, AbstractionError, BuildConfig, SymbolicModel, SystemSpec};
use crate::automata::{translate, AutomatonError, PruneMode, TranslateOptions, Translation};
use crate::game::{build_game, solve_buchi, BuchiGame, GameError, SolveResult};
use crate::ltl::{parse_ltl, to_nnf, LtlError, Nnf};
use crate::report::{Report, Verdict, REPORT_SCHEMA};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("formula: {0}")]
    Formula(#[from] LtlError),
    #[error("automaton: {0}")]
    Automaton(#[from] AutomatonError),
    #[error("abstraction: {0}")]
    Abstraction(#[from] AbstractionError),
    #[error("game: {0}")]
    Game(#[from] GameError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub translate: TranslateOptions,
    pub model: BuildConfig,
    /// Each stage is run this many times and its time averaged.
    pub repeat: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            translate: TranslateOptions::default(),
            model: BuildConfig::default(),
            repeat: 10,
        }
    }
}

/// Everything produced by one verification.
#[derive(Clone, Debug)]
pub struct Verification {
    pub report: Report,
    pub translation: Translation,
    pub model: SymbolicModel,
    pub game: BuchiGame,
    pub solution: SolveResult,
}

fn timed<T>(repeat: usize, mut f: impl FnMut() -> Result<T, VerifyError>) -> Result<(T, f64), VerifyError> {
    let repeat = repeat.max(1);
    let start = Instant::now();
    let mut out = f()?;
    for _ in 1..repeat {
        out = f()?;
    }
    Ok((out, start.elapsed().as_secs_f64() / repeat as f64))
}

/// Hash of everything that determines the result besides timings.
pub fn config_hash(spec: &SystemSpec, nnf: &Nnf, opts: &VerifyOptions) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(spec).expect("spec serializes"));
    h.update(nnf.to_string().as_bytes());
    h.update(format!("{:?}|{:?}", opts.translate, opts.model).as_bytes());
    format!("{:x}", h.finalize())
}

pub fn parse_formula(text: &str) -> Result<Nnf, VerifyError> {
    Ok(to_nnf(&parse_ltl(text)?)?)
}

/// Runs the pipeline on `spec` and `formula`. The model tracks exactly the
/// formula's propositions.
pub fn verify(spec: &SystemSpec, formula: &str, system: &str, opts: &VerifyOptions) -> Result<Verification, VerifyError> {
    let nnf = parse_formula(formula)?;
    let (translation, automaton_seconds) = timed(opts.repeat, || Ok(translate(&nnf, &opts.translate)?))?;
    let aps = translation.nba.graph.aps.clone();
    let tau_check = validate_tau(spec, &aps);
    let (model, model_seconds) = timed(opts.repeat, || Ok(build_symbolic_model(spec, &aps, &opts.model)?))?;
    let (game, game_seconds) = timed(opts.repeat, || Ok(build_game(&model, &translation.nba)?))?;
    let (solution, solve_seconds) = timed(opts.repeat, || Ok(solve_buchi(&game)))?;
    let verdict = if solution.verdict { Verdict::Verified } else { Verdict::Inconclusive };
    log::info!("{}: {} ({})", formula, verdict, game);
    let report = Report {
        schema: REPORT_SCHEMA.into(),
        formula: formula.to_string(),
        nnf: nnf.to_string(),
        system: system.to_string(),
        verdict,
        config_hash: config_hash(spec, &nnf, opts),
        repeat: opts.repeat.max(1),
        eta: spec.eta,
        tau: spec.tau,
        prune: match opts.translate.prune {
            PruneMode::Deadlocks => "deadlocks",
            PruneMode::AcceptingRuns => "accepting-runs",
        }
        .into(),
        filter_multi_change: opts.model.filter_multi_change,
        allow_unsound_tau: opts.model.allow_unsound_tau,
        unsound_tau: model.unsound_tau,
        v_max: spec.max_speed(),
        tau_max: tau_check.ok().map(|t| t.tau_max).filter(|t| t.is_finite()),
        subformulas: translation.subformulas,
        nontrivial_subformulas: translation.nontrivial_subformulas,
        gba_states: translation.gba_states,
        reachable_states: translation.reachable_states,
        pruned_states: translation.pruned_states,
        minimized_states: translation.gba.len(),
        automaton_states: translation.nba.len(),
        automaton_seconds,
        model_cells: model.cells,
        model_states: model.len(),
        model_transitions: model.graph.num_edges(),
        model_seconds,
        game_player: game.player_vertices(),
        game_opponent: game.opponent_vertices(),
        game_edges: game.num_edges(),
        player_stuck: game.player_stuck.len(),
        opponent_stuck: game.opponent_stuck.len(),
        game_seconds,
        w0_size: solution.w0_size(),
        solve_iterations: solution.stats.iterations,
        solve_seconds,
        total_seconds: automaton_seconds + model_seconds + game_seconds + solve_seconds,
    };
    Ok(Verification {
        report,
        translation,
        model,
        game,
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{ApRegion, Boundary, Field, HalfSpace, ModeParams, Modes, Op};
    use std::collections::BTreeMap;

    /// Moves right at 1 m/s on [0, 20], asserted to stay in the domain.
    fn line() -> SystemSpec {
        let mut aps = BTreeMap::new();
        aps.insert("p".to_string(), ApRegion(vec![vec![HalfSpace::new(0, Op::Ge, 0.0)]]));
        SystemSpec {
            dim: 1,
            domain: vec![[0.0, 20.0]],
            eta: 1.0,
            tau: 1.0,
            x_in: vec![5.0],
            modes: Modes {
                default: ModeParams {
                    v: 1.0,
                    ev: 0.0,
                    etheta: 0.0,
                },
                field: Field::Velocity { direction: vec![1.0] },
            },
            aps,
            boundary: Boundary::Invariant,
            metadata: None,
        }
    }

    fn quick() -> VerifyOptions {
        VerifyOptions {
            repeat: 1,
            ..Default::default()
        }
    }

    #[test]
    fn always_inside_is_verified() {
        let v = verify(&line(), "G p", "line", &quick()).unwrap();
        assert_eq!(v.report.verdict, Verdict::Verified);
        assert_eq!(v.report.automaton_states, 2);
    }

    #[test]
    fn always_outside_is_inconclusive() {
        let v = verify(&line(), "G !p", "line", &quick()).unwrap();
        assert_eq!(v.report.verdict, Verdict::Inconclusive);
        assert!(v.report.player_stuck > 0);
    }

    #[test]
    fn next_is_rejected() {
        assert!(matches!(
            verify(&line(), "X p", "line", &quick()),
            Err(VerifyError::Formula(LtlError::NextNotSupported))
        ));
    }

    #[test]
    fn hash_ignores_nothing_relevant() {
        let s = line();
        let f = parse_formula("G p").unwrap();
        let a = config_hash(&s, &f, &quick());
        let mut s2 = s.clone();
        s2.tau = 0.5;
        assert_ne!(a, config_hash(&s2, &f, &quick()));
        assert_eq!(a, config_hash(&s, &f, &VerifyOptions::default()));
    }
}
