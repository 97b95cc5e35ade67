//! Reachability and strongly connected components on adjacency lists.

/// Vertices reachable from `roots`.
pub fn reachable(succ: &[Vec<usize>], roots: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut stack: Vec<usize> = Vec::new();
    for &r in roots {
        if !seen[r] {
            seen[r] = true;
            stack.push(r);
        }
    }
    while let Some(v) = stack.pop() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Vertices that can reach some vertex in `targets`.
pub fn backward_reachable(succ: &[Vec<usize>], targets: &[bool]) -> Vec<bool> {
    let mut pred = vec![Vec::new(); succ.len()];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    let roots: Vec<usize> = (0..succ.len()).filter(|&v| targets[v]).collect();
    reachable(&pred, &roots)
}

/// Strongly connected components (iterative Tarjan). Components come out in
/// reverse topological order.
pub fn sccs(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < succ[v].len() {
                let w = succ[v][*i];
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// Whether a component contains a cycle (more than one vertex, or a self-loop).
pub fn is_nontrivial(succ: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || succ[comp[0]].contains(&comp[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components() {
        let g = vec![vec![1], vec![2], vec![0, 3], vec![3], vec![]];
        let mut c: Vec<Vec<usize>> = sccs(&g)
            .into_iter()
            .map(|mut v| {
                v.sort();
                v
            })
            .collect();
        c.sort();
        assert_eq!(c, vec![vec![0, 1, 2], vec![3], vec![4]]);
        assert!(is_nontrivial(&g, &[3]));
        assert!(!is_nontrivial(&g, &[4]));
        assert_eq!(reachable(&g, &[3]), vec![false, false, false, true, false]);
        assert_eq!(
            backward_reachable(&g, &[false, false, false, true, false]),
            vec![true, true, true, true, false]
        );
    }
}
