//! Strongly connected components on adjacency lists.
//!
//! Iterative Tarjan so that deep residual graphs cannot overflow the stack.

/// Returns `(component id per vertex, number of components)`. Component ids
/// are assigned in reverse topological order: if there is an edge from
/// component `a` to a different component `b`, then `a > b`.
pub fn tarjan_scc(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;

    for start in 0..n {
        if index[start] != UNSEEN {
            continue;
        }
        // (vertex, position of the next child to visit)
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    (comp, next_comp)
}

/// Vertices reachable from `root` (including `root`).
pub fn reachable_from(adj: &[Vec<usize>], root: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut todo = vec![root];
    seen[root] = true;
    while let Some(v) = todo.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                todo.push(w);
            }
        }
    }
    seen
}

/// True iff every vertex reaches every other vertex. The empty graph and a
/// single vertex (with or without a self-loop) count as strongly connected.
pub fn is_strongly_connected(adj: &[Vec<usize>]) -> bool {
    if adj.len() <= 1 {
        return true;
    }
    tarjan_scc(adj).1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycles_joined_by_a_bridge() {
        // 0 <-> 1 -> 2 <-> 3
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        let (comp, count) = tarjan_scc(&adj);
        assert_eq!(count, 2);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[2], comp[3]);
        assert!(comp[0] > comp[2], "source component gets the larger id");
        assert!(!is_strongly_connected(&adj));
    }

    #[test]
    fn singleton_conventions() {
        assert!(is_strongly_connected(&[]));
        assert!(is_strongly_connected(&[vec![]]));
        assert!(is_strongly_connected(&[vec![0]]));
        assert!(!is_strongly_connected(&[vec![1], vec![]]));
    }

    #[test]
    fn deep_chain_does_not_recurse() {
        let n = 200_000;
        let adj: Vec<Vec<usize>> = (0..n).map(|i| if i + 1 < n { vec![i + 1] } else { vec![0] }).collect();
        assert!(is_strongly_connected(&adj));
        assert!(reachable_from(&adj, 7).iter().all(|&r| r));
    }
}
