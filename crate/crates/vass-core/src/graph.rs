//! Strongly connected components and condensation utilities for state graphs.

use alloc::vec::Vec;

/// Tarjan's algorithm, iterative. Returns the strongly connected components
/// in reverse topological order of the condensation: every component is
/// emitted before any component with an edge into it.
pub(crate) fn tarjan_scc(num_nodes: usize, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSET: usize = usize::MAX;

    let mut index = alloc::vec![UNSET; num_nodes];
    let mut lowlink = alloc::vec![0usize; num_nodes];
    let mut on_stack = alloc::vec![false; num_nodes];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut components: Vec<Vec<usize>> = Vec::new();

    // Explicit call stack of (node, next child position).
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..num_nodes {
        if index[root] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut child)) = call.last_mut() {
            if *child < adj[v].len() {
                let w = adj[v][*child];
                *child += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    if index[w] < lowlink[v] {
                        lowlink[v] = index[w];
                    }
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    if lowlink[v] < lowlink[parent] {
                        lowlink[parent] = lowlink[v];
                    }
                }
                if lowlink[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    component.sort_unstable();
                    components.push(component);
                }
            }
        }
    }
    components
}

/// Longest node-weighted path in the condensation where every component
/// weighs its size: the maximum number of distinct states a single path
/// can visit.
pub(crate) fn max_states_on_path(num_nodes: usize, adj: &[Vec<usize>]) -> usize {
    let components = tarjan_scc(num_nodes, adj);
    let mut comp_of = alloc::vec![0usize; num_nodes];
    for (ci, comp) in components.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    // Components arrive in reverse topological order, so all successors of a
    // component are already scored when it is reached.
    let mut best = alloc::vec![0usize; components.len()];
    let mut answer = 0usize;
    for (ci, comp) in components.iter().enumerate() {
        let mut tail = 0usize;
        for &v in comp {
            for &w in &adj[v] {
                let cw = comp_of[w];
                if cw != ci && best[cw] > tail {
                    tail = best[cw];
                }
            }
        }
        best[ci] = comp.len() + tail;
        if best[ci] > answer {
            answer = best[ci];
        }
    }
    answer
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_on_two_cycles_and_bridge() {
        // 0 <-> 1 -> 2 <-> 3
        let adj = alloc::vec![
            alloc::vec![1],
            alloc::vec![0, 2],
            alloc::vec![3],
            alloc::vec![2],
        ];
        let comps = tarjan_scc(4, &adj);
        assert_eq!(comps.len(), 2);
        // {2,3} has no outgoing edges, so it is emitted first.
        assert_eq!(comps[0], alloc::vec![2, 3]);
        assert_eq!(comps[1], alloc::vec![0, 1]);
        assert_eq!(max_states_on_path(4, &adj), 4);
    }

    #[test]
    fn path_weight_ignores_unreachable_branches() {
        // 0 -> 1, 0 -> 2, components are singletons.
        let adj = alloc::vec![alloc::vec![1, 2], alloc::vec![], alloc::vec![]];
        assert_eq!(max_states_on_path(3, &adj), 2);
    }

    #[test]
    fn single_node_no_edges() {
        let adj = alloc::vec![alloc::vec![]];
        assert_eq!(max_states_on_path(1, &adj), 1);
        assert_eq!(tarjan_scc(1, &adj).len(), 1);
    }
}
