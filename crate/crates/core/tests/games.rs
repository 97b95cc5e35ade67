use apobs::abstraction::SymbolicModel;
use apobs::automata::{accepts_letters, ApAutomaton, LabeledGraph};
use apobs::game::{build_game, solve_buchi};
use apobs::observations::{Lasso, ObsMap, Observation};

fn graph(names: &[&str], edges: Vec<Vec<(ObsMap, usize)>>) -> LabeledGraph {
    let mut g = LabeledGraph {
        aps: vec!["p".into()],
        names: names.iter().map(|s| s.to_string()).collect(),
        initial: 0,
        edges,
    };
    g.sort_edges();
    g
}

/// Language inclusion holds but the automaton has to guess the future at its
/// first step, so the Player loses the game.
#[test]
fn game_can_be_lost_although_the_language_is_included() {
    let a = ObsMap::uniform(1, Observation::A);
    let b = ObsMap::uniform(1, Observation::N);
    // a^w and a^+ b^w.
    let sys = graph(&["qi", "q0", "q1"], vec![vec![(a, 1)], vec![(a, 1), (b, 2)], vec![(b, 2)]]);
    let model = SymbolicModel {
        graph: sys.clone(),
        grid: None,
        cells: 3,
        sink: None,
        unsound_tau: false,
    };
    // Same language, split on the first letter into an a^w branch and an
    // a^* b^w branch.
    let aut = ApAutomaton {
        graph: graph(
            &["b0", "bA", "bC", "bD"],
            vec![vec![(a, 1), (a, 2)], vec![(a, 1)], vec![(a, 2), (b, 3)], vec![(b, 3)]],
        ),
        accepting: vec![false, true, false, true],
    };
    let all_a = Lasso::new(vec![], vec![a]);
    assert!(accepts_letters(&aut, &all_a));
    for k in 1..6 {
        assert!(accepts_letters(&aut, &Lasso::new(vec![a; k], vec![b])));
    }
    assert!(!accepts_letters(&aut, &Lasso::new(vec![], vec![b])));
    assert!(!solve_buchi(&build_game(&model, &aut).unwrap()).verdict);
}

/// With the branching postponed to the first `b` the same language is won.
#[test]
fn game_is_won_when_the_automaton_need_not_guess() {
    let a = ObsMap::uniform(1, Observation::A);
    let b = ObsMap::uniform(1, Observation::N);
    let sys = graph(&["qi", "q0", "q1"], vec![vec![(a, 1)], vec![(a, 1), (b, 2)], vec![(b, 2)]]);
    let model = SymbolicModel {
        graph: sys,
        grid: None,
        cells: 3,
        sink: None,
        unsound_tau: false,
    };
    let aut = ApAutomaton {
        graph: graph(&["b0", "bA", "bD"], vec![vec![(a, 1)], vec![(a, 1), (b, 2)], vec![(b, 2)]]),
        accepting: vec![false, true, true],
    };
    assert!(solve_buchi(&build_game(&model, &aut).unwrap()).verdict);
}
