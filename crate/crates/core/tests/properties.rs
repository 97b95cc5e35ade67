use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use apobs::abstraction::{reach_box, AbstractionError, validate_tau, ApRegion, Bounds, Field, HalfSpace, Op, ReachHorizon, Rho};
use apobs::game::{fixpoint_winning, solve_buchi, BuchiGame};
use apobs::gen;
use apobs::ltl::{to_nnf, Formula, Nnf};
use apobs::observations::{chop, consistency, Connective, Lasso, Observation, Timeline};
use apobs::report::{Report, Verdict, REPORT_SCHEMA};
use apobs::scenario::{drone, RMode, DRONE_PATROL};

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

// Discrete-time LTL over lassos of proposition sets, used as a reference for
// negation normal form.

type Word = Lasso<BTreeSet<String>>;

fn next(w: &Word, i: usize) -> usize {
    w.next(i)
}

fn until(w: &Word, l: &[bool], r: &[bool]) -> Vec<bool> {
    let n = w.len();
    let mut u = vec![false; n];
    for _ in 0..=n {
        u = (0..n).map(|i| r[i] || (l[i] && u[next(w, i)])).collect();
    }
    u
}

fn release(w: &Word, l: &[bool], r: &[bool]) -> Vec<bool> {
    let n = w.len();
    let mut u = vec![true; n];
    for _ in 0..=n {
        u = (0..n).map(|i| r[i] && (l[i] || u[next(w, i)])).collect();
    }
    u
}

fn eval_formula(f: &Formula, w: &Word) -> Vec<bool> {
    let n = w.len();
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(p) => (0..n).map(|i| w.at(i).contains(p)).collect(),
        Formula::Not(c) => eval_formula(c, w).into_iter().map(|v| !v).collect(),
        Formula::And(l, r) => eval_formula(l, w).iter().zip(eval_formula(r, w)).map(|(a, b)| *a && b).collect(),
        Formula::Or(l, r) => eval_formula(l, w).iter().zip(eval_formula(r, w)).map(|(a, b)| *a || b).collect(),
        Formula::Until(l, r) => until(w, &eval_formula(l, w), &eval_formula(r, w)),
        Formula::Release(l, r) => release(w, &eval_formula(l, w), &eval_formula(r, w)),
        Formula::Next(c) => {
            let v = eval_formula(c, w);
            (0..n).map(|i| v[next(w, i)]).collect()
        }
    }
}

fn eval_nnf(f: &Nnf, w: &Word) -> Vec<bool> {
    let n = w.len();
    match f {
        Nnf::True => vec![true; n],
        Nnf::False => vec![false; n],
        Nnf::Pos(p) => (0..n).map(|i| w.at(i).contains(p)).collect(),
        Nnf::Neg(p) => (0..n).map(|i| !w.at(i).contains(p)).collect(),
        Nnf::And(l, r) => eval_nnf(l, w).iter().zip(eval_nnf(r, w)).map(|(a, b)| *a && b).collect(),
        Nnf::Or(l, r) => eval_nnf(l, w).iter().zip(eval_nnf(r, w)).map(|(a, b)| *a || b).collect(),
        Nnf::Until(l, r) => until(w, &eval_nnf(l, w), &eval_nnf(r, w)),
        Nnf::Release(l, r) => release(w, &eval_nnf(l, w), &eval_nnf(r, w)),
    }
}

fn random_word(rng: &mut ChaCha8Rng, aps: &[String]) -> Word {
    let letter = |rng: &mut ChaCha8Rng| aps.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    let np = rng.gen_range(0..4);
    let nc = rng.gen_range(1..4);
    Lasso::new((0..np).map(|_| letter(rng)).collect(), (0..nc).map(|_| letter(rng)).collect())
}

fn sample_region(rng: &mut ChaCha8Rng, dim: usize) -> ApRegion {
    let ops = [Op::Ge, Op::Le, Op::Gt, Op::Lt];
    let disjuncts = rng.gen_range(1..=2);
    ApRegion(
        (0..disjuncts)
            .map(|_| {
                (0..rng.gen_range(1..=2))
                    .map(|_| HalfSpace::new(rng.gen_range(0..dim), ops[rng.gen_range(0..4)], rng.gen_range(-3..=3) as f64 * 0.5))
                    .collect()
            })
            .collect(),
    )
}

fn sample_point(rng: &mut ChaCha8Rng, b: &Bounds) -> Vec<f64> {
    b.iter()
        .map(|d| {
            // Mix interior points with the corners and faces of the box.
            match rng.gen_range(0..5) {
                0 => d[0],
                1 => d[1],
                _ => rng.gen_range(d[0]..=d[1]),
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nnf_is_idempotent_and_preserves_meaning(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let aps = names(&["p", "q"]);
        let f = gen::formula(&mut rng, &aps, 4);
        let n = to_nnf(&f).unwrap();
        prop_assert_eq!(to_nnf(&n.to_formula()).unwrap(), n.clone());
        for _ in 0..20 {
            let w = random_word(&mut rng, &aps);
            prop_assert_eq!(eval_formula(&f, &w), eval_nnf(&n, &w), "{} / {}", f, n);
        }
    }

    #[test]
    fn region_classification_agrees_with_samples(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = sample_region(&mut rng, 2);
        let b: Bounds = (0..2)
            .map(|_| {
                let lo = rng.gen_range(-8..=4) as f64 * 0.25;
                [lo, lo + rng.gen_range(0..=8) as f64 * 0.25]
            })
            .collect();
        let rho = r.classify(&b);
        let (mut seen_in, mut seen_out) = (false, false);
        for _ in 0..200 {
            let x = sample_point(&mut rng, &b);
            if r.contains(&x) { seen_in = true } else { seen_out = true }
        }
        match rho {
            Rho::Inside => prop_assert!(!seen_out),
            Rho::Outside => prop_assert!(!seen_in),
            Rho::Mixed => {}
        }
        if seen_in && seen_out {
            prop_assert_eq!(rho, Rho::Mixed);
        }
    }

    #[test]
    fn period_check_is_monotone(tau in 0.01f64..3.0, smaller in 0.0f64..1.0) {
        let mut spec = drone(1.0, RMode::Or, DRONE_PATROL);
        let aps = names(&["b", "r"]);
        spec.tau = tau;
        let big = validate_tau(&spec, &aps);
        spec.tau = tau * smaller.max(0.01);
        let small = validate_tau(&spec, &aps);
        match big {
            Ok(v) => {
                prop_assert!(v.pass && tau <= v.tau_max);
                prop_assert!(small.is_ok());
            }
            Err(AbstractionError::TauTooLarge { tau_max, .. }) => prop_assert!(tau > tau_max),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn solver_matches_fixpoint_and_is_monotone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gen::game(&mut rng, 14);
        let w = solve_buchi(&g).winning;
        prop_assert_eq!(&w, &fixpoint_winning(&g));
        let mut more = g.accepting.clone();
        more[rng.gen_range(0..g.len())] = true;
        let g2 = BuchiGame { accepting: more, ..g.clone() };
        let w2 = solve_buchi(&g2).winning;
        prop_assert!(w.iter().zip(&w2).all(|(a, b)| !a || *b));
    }

    #[test]
    fn report_round_trips(
        formula in "[a-z&|() !UGF\",]{0,24}",
        eta in 0.01f64..10.0,
        tau in 0.001f64..10.0,
        secs in proptest::collection::vec(0.0f64..100.0, 5),
        sizes in proptest::collection::vec(0usize..100_000, 6),
        tau_max in proptest::option::of(0.0f64..10.0),
        verified in any::<bool>(),
    ) {
        let r = Report {
            schema: REPORT_SCHEMA.into(),
            formula: formula.clone(),
            nnf: formula,
            system: "drone".into(),
            verdict: if verified { Verdict::Verified } else { Verdict::Inconclusive },
            config_hash: "00".into(),
            repeat: sizes[0] % 20 + 1,
            eta,
            tau,
            prune: "deadlocks".into(),
            filter_multi_change: verified,
            allow_unsound_tau: !verified,
            unsound_tau: false,
            v_max: 4.1,
            tau_max,
            subformulas: sizes[1],
            nontrivial_subformulas: sizes[1],
            gba_states: sizes[2],
            reachable_states: sizes[2],
            pruned_states: sizes[2],
            minimized_states: sizes[3],
            automaton_states: sizes[3],
            automaton_seconds: secs[0],
            model_cells: sizes[4],
            model_states: sizes[4],
            model_transitions: sizes[5],
            model_seconds: secs[1],
            game_player: sizes[5],
            game_opponent: sizes[4],
            game_edges: sizes[3],
            player_stuck: sizes[2],
            opponent_stuck: sizes[1],
            game_seconds: secs[2],
            w0_size: sizes[0],
            solve_iterations: sizes[1],
            solve_seconds: secs[3],
            total_seconds: secs[4],
        };
        prop_assert_eq!(Report::from_json(&r.to_json().unwrap()).unwrap(), r.clone());
        prop_assert_eq!(Report::from_csv(&Report::to_csv(&[r.clone()]).unwrap()).unwrap(), vec![r]);
    }
}

#[test]
fn reach_box_contains_sampled_successors() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut spec = drone(1.0, RMode::Or, DRONE_PATROL);
    let (v, ev, et) = (spec.modes.default.v, spec.modes.default.ev, spec.modes.default.etheta);
    let grid = spec.grid();
    let mut samples = 0;
    while samples < 10_000 {
        let heading = rng.gen_range(-3.2..3.2);
        spec.modes.field = Field::Constant { heading };
        let cell = rng.gen_range(0..grid.len());
        let (b, exits) = reach_box(&spec, cell, ReachHorizon::Endpoint).unwrap();
        for _ in 0..50 {
            let x0 = sample_point(&mut rng, &grid.cell_box(cell));
            let s = v + rng.gen_range(-1.0..=1.0) * ev;
            let a = heading + rng.gen_range(-1.0..=1.0) * et;
            let x1 = [x0[0] + spec.tau * s * a.cos(), x0[1] + spec.tau * s * a.sin()];
            if spec.in_domain(&x1) {
                for d in 0..2 {
                    assert!(x1[d] >= b[d][0] - 1e-9 && x1[d] <= b[d][1] + 1e-9, "{:?} outside {:?}", x1, b);
                }
            } else {
                assert!(exits, "successor {:?} leaves the domain but the box {:?} does not", x1, b);
            }
            samples += 1;
        }
    }
}

/// Observation of a formula on every slice of a chopped signal, or `None`
/// when some slice has no single observation.
fn observations(tl: &Timeline, f: &Nnf) -> Option<Vec<Observation>> {
    let l = tl.chop_truth(&tl.truth(f));
    l.positions().copied().collect()
}

#[test]
fn consistency_table_is_sound_and_every_cell_is_witnessed() {
    let aps = names(&["p", "q"]);
    let p = || Nnf::Pos("p".into());
    let q = || Nnf::Pos("q".into());
    let b = Box::new;
    let pool: Vec<Nnf> = vec![
        p(),
        q(),
        Nnf::Neg("p".into()),
        Nnf::Neg("q".into()),
        Nnf::Until(b(Nnf::True), b(p())),
        Nnf::Release(b(Nnf::False), b(q())),
        Nnf::Until(b(p()), b(q())),
        Nnf::And(b(p()), b(q())),
        Nnf::Or(b(p()), b(Nnf::Neg("q".into()))),
    ];
    let conns = [Connective::And, Connective::Or, Connective::Until, Connective::Release];
    let mut wanted: HashSet<(usize, Observation, Observation, Observation)> = HashSet::new();
    for (ci, &c) in conns.iter().enumerate() {
        for o1 in Observation::ALL {
            for o2 in Observation::ALL {
                for o in consistency(c, o1, o2).iter() {
                    wanted.insert((ci, o1, o2, o));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut signals = 0;
    while signals < 300 {
        let sig = gen::signal(&mut rng, &aps, 4, 0.25, 8);
        if chop(&sig, 1.0).is_err() {
            continue;
        }
        signals += 1;
        let tl = Timeline::for_chop(&sig, 1.0).unwrap();
        for l in &pool {
            for r in &pool {
                let ol = observations(&tl, l).expect("operand has an observation on every slice");
                let or = observations(&tl, r).expect("operand has an observation on every slice");
                for (ci, &c) in conns.iter().enumerate() {
                    let f = match c {
                        Connective::And => Nnf::And(b(l.clone()), b(r.clone())),
                        Connective::Or => Nnf::Or(b(l.clone()), b(r.clone())),
                        Connective::Until => Nnf::Until(b(l.clone()), b(r.clone())),
                        Connective::Release => Nnf::Release(b(l.clone()), b(r.clone())),
                    };
                    let of = observations(&tl, &f).unwrap_or_else(|| panic!("{} has a slice without observation", f));
                    for k in 0..of.len() {
                        assert!(
                            consistency(c, ol[k], or[k]).contains(of[k]),
                            "{}: slice {} observes {} from {} and {}",
                            f,
                            k,
                            of[k],
                            ol[k],
                            or[k]
                        );
                        wanted.remove(&(ci, ol[k], or[k], of[k]));
                    }
                }
            }
        }
    }
    let mut missing: Vec<_> = wanted.into_iter().collect();
    missing.sort();
    assert!(missing.is_empty(), "cells never witnessed after {} signals: {:?}", signals, missing);
}
