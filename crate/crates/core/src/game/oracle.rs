//! Independent ways of computing or testing the winning region, used to
//! cross-check the solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BuchiGame, GameError, Owner};

fn cpre(g: &BuchiGame, x: &[bool]) -> Vec<bool> {
    (0..g.len())
        .map(|v| match g.owner[v] {
            Owner::Player => g.succ[v].iter().any(|&w| x[w]),
            Owner::Opponent => g.succ[v].iter().all(|&w| x[w]),
        })
        .collect()
}

/// Nested fixpoint: the greatest Z such that from Z the Player can force a
/// visit to an accepting vertex followed by a step back into Z.
pub fn fixpoint_winning(g: &BuchiGame) -> Vec<bool> {
    let n = g.len();
    let mut z = vec![true; n];
    loop {
        let cz = cpre(g, &z);
        let mut y = vec![false; n];
        loop {
            let cy = cpre(g, &y);
            let next: Vec<bool> = (0..n).map(|v| (g.accepting[v] && cz[v]) || cy[v]).collect();
            if next == y {
                break;
            }
            y = next;
        }
        if y == z {
            return z;
        }
        z = y;
    }
}

/// Winning region by enumerating every pair of positional strategies. A
/// vertex is winning when some Player strategy wins against all Opponent
/// strategies, the play being won when its cycle contains an accepting
/// vertex. Exponential; meant for games with a dozen vertices.
pub fn brute_force_winning(g: &BuchiGame) -> Vec<bool> {
    let n = g.len();
    let players: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Owner::Player).collect();
    let opponents: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Owner::Opponent).collect();
    let mut choice = vec![0usize; n];
    let mut result = vec![false; n];
    let advance = |choice: &mut Vec<usize>, vs: &[usize]| -> bool {
        for &v in vs {
            choice[v] += 1;
            if choice[v] < g.succ[v].len() {
                return true;
            }
            choice[v] = 0;
        }
        false
    };
    let mut wins = vec![false; n];
    let mut state = vec![0u8; n];
    let mut stack = Vec::with_capacity(n);
    loop {
        let mut all = vec![true; n];
        for &v in &opponents {
            choice[v] = 0;
        }
        loop {
            // Functional graph: resolve each vertex by walking to a known
            // vertex or closing a cycle.
            state.iter_mut().for_each(|s| *s = 0);
            for s in 0..n {
                if state[s] != 0 {
                    continue;
                }
                stack.clear();
                let mut v = s;
                while state[v] == 0 {
                    state[v] = 1;
                    stack.push(v);
                    v = g.succ[v][choice[v]];
                }
                let outcome = if state[v] == 1 {
                    let pos = stack.iter().position(|&u| u == v).unwrap();
                    let won = stack[pos..].iter().any(|&u| g.accepting[u]);
                    for &u in &stack[pos..] {
                        wins[u] = won;
                        state[u] = 2;
                    }
                    stack.truncate(pos);
                    won
                } else {
                    wins[v]
                };
                for &u in &stack {
                    wins[u] = outcome;
                    state[u] = 2;
                }
            }
            for v in 0..n {
                all[v] = all[v] && wins[v];
            }
            if !advance(&mut choice, &opponents) {
                break;
            }
        }
        for v in 0..n {
            result[v] = result[v] || all[v];
        }
        if !advance(&mut choice, &players) {
            break;
        }
    }
    result
}

/// Plays `strategy` from the initial vertex against `trials` random
/// positional Opponent strategies for `horizon` steps. Fails when a play
/// goes more than |vertices| steps without visiting an accepting vertex.
pub fn check_strategy(g: &BuchiGame, strategy: &[Option<usize>], trials: usize, horizon: usize, seed: u64) -> Result<bool, GameError> {
    let n = g.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let opp: Vec<usize> = (0..n).map(|v| rng.gen_range(0..g.succ[v].len())).collect();
        let mut v = g.initial;
        let mut since = 0;
        for _ in 0..horizon {
            if g.accepting[v] {
                since = 0;
            } else {
                since += 1;
                if since > n {
                    return Ok(false);
                }
            }
            v = match g.owner[v] {
                Owner::Player => {
                    let w = strategy[v].ok_or(GameError::StrategyUndefined(v))?;
                    if !g.succ[v].contains(&w) {
                        return Err(GameError::NotAnEdge { from: v, to: w });
                    }
                    w
                }
                Owner::Opponent => g.succ[v][opp[v]],
            };
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::solve_buchi;
    use super::*;
    use Owner::*;

    /// Opponent at 1 chooses between the accepting loop 2-3 and the
    /// non-accepting loop 4-5.
    fn trap_game() -> BuchiGame {
        BuchiGame::from_parts(
            vec![Player, Opponent, Player, Opponent, Player, Opponent],
            vec![vec![1], vec![2, 4], vec![3], vec![2], vec![5], vec![4]],
            vec![false, false, false, true, false, false],
            0,
        )
    }

    #[test]
    fn escape_vertex_is_losing() {
        let g = trap_game();
        let w = solve_buchi(&g).winning;
        assert_eq!(w, brute_force_winning(&g));
        assert_eq!(w, fixpoint_winning(&g));
        assert!(!w[1]);
        assert!(w[2] && w[3]);
    }

    #[test]
    fn player_choice_avoids_the_trap() {
        let g = BuchiGame::from_parts(
            vec![Player, Opponent, Player, Opponent],
            vec![vec![1, 2], vec![1], vec![3], vec![2, 3]],
            vec![false, false, false, true],
            0,
        );
        let r = solve_buchi(&g);
        assert_eq!(r.winning, brute_force_winning(&g));
        assert_eq!(r.strategy[0], Some(2));
        assert!(check_strategy(&g, &r.strategy, 200, 64, 1).unwrap());
        let mut bad = r.strategy.clone();
        bad[0] = Some(1);
        assert!(!check_strategy(&g, &bad, 10, 64, 1).unwrap());
    }

    #[test]
    fn self_loop_strategy() {
        let g = BuchiGame::from_parts(vec![Player], vec![vec![0]], vec![true], 0);
        let r = solve_buchi(&g);
        assert_eq!(r.strategy, vec![Some(0)]);
        assert!(check_strategy(&g, &r.strategy, 5, 10, 0).unwrap());
    }
}
