//! Small graph routines over adjacency lists shared by the automaton algorithms.

/// Strongly connected components, numbered in the order Tarjan's algorithm
/// completes them (a component is numbered before any component that reaches it).
pub(crate) struct Sccs {
    pub comp: Vec<usize>,
    pub count: usize,
    /// Whether the component contains a cycle (more than one node, or a self-loop).
    pub cyclic: Vec<bool>,
}

pub(crate) fn tarjan(adj: &[Vec<usize>]) -> Sccs {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut cyclic = Vec::new();
    let mut next_index = 0;
    let mut count = 0;
    // (node, next edge position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

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
                let mut size = 0;
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = count;
                    size += 1;
                    if w == v {
                        break;
                    }
                }
                cyclic.push(size > 1 || adj[v].contains(&v));
                count += 1;
            }
        }
    }
    Sccs { comp, count, cyclic }
}

/// Nodes from which some node in `target` is reachable (including the targets).
pub(crate) fn backward_reach(adj: &[Vec<usize>], target: &[bool]) -> Vec<bool> {
    let n = adj.len();
    let mut rev = vec![Vec::new(); n];
    for (v, succs) in adj.iter().enumerate() {
        for &w in succs {
            rev[w].push(v);
        }
    }
    let mut seen = target.to_vec();
    let mut work: Vec<usize> = (0..n).filter(|&v| target[v]).collect();
    while let Some(v) = work.pop() {
        for &u in &rev[v] {
            if !seen[u] {
                seen[u] = true;
                work.push(u);
            }
        }
    }
    seen
}

/// Nodes of the subgraph induced by `alive` that start an infinite path inside it.
pub(crate) fn infinite_nodes(adj: &[Vec<usize>], alive: &[bool]) -> Vec<bool> {
    let n = adj.len();
    let mut rev = vec![Vec::new(); n];
    let mut out_deg = vec![0usize; n];
    for v in 0..n {
        if !alive[v] {
            continue;
        }
        for &w in &adj[v] {
            if alive[w] {
                out_deg[v] += 1;
                rev[w].push(v);
            }
        }
    }
    let mut keep = alive.to_vec();
    let mut work: Vec<usize> = (0..n).filter(|&v| alive[v] && out_deg[v] == 0).collect();
    while let Some(v) = work.pop() {
        if !keep[v] {
            continue;
        }
        keep[v] = false;
        for &u in &rev[v] {
            out_deg[u] -= 1;
            if out_deg[u] == 0 && keep[u] {
                work.push(u);
            }
        }
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tarjan_orders_sinks_first() {
        // 0 -> 1 <-> 2 -> 3, 3 self-loop, 4 isolated
        let adj = vec![vec![1], vec![2], vec![1, 3], vec![3], vec![]];
        let s = tarjan(&adj);
        assert_eq!(s.count, 4);
        assert_eq!(s.comp[1], s.comp[2]);
        assert!(s.comp[3] < s.comp[1]);
        assert!(s.comp[1] < s.comp[0]);
        assert!(s.cyclic[s.comp[3]]);
        assert!(s.cyclic[s.comp[1]]);
        assert!(!s.cyclic[s.comp[0]]);
        assert!(!s.cyclic[s.comp[4]]);
    }

    #[test]
    fn infinite_nodes_prunes_dead_ends() {
        let adj = vec![vec![1, 2], vec![1], vec![3], vec![]];
        let inf = infinite_nodes(&adj, &[true; 4]);
        assert_eq!(inf, vec![true, true, false, false]);
        let reach = backward_reach(&adj, &[false, false, false, true]);
        assert_eq!(reach, vec![true, false, true, true]);
    }
}
