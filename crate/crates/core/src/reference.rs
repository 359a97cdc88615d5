//! Slow reference solvers used to cross-check the production oracles.
//!
//! These implementations deliberately take a different algorithmic route
//! from the ones in [`crate::oracles`] (closure matrices, exhaustive
//! enumeration, min-cut duality) and are only suitable for small graphs.

use crate::graph::Graph;

/// Reachability via Floyd–Warshall transitive closure.
pub fn connectivity_by_closure(g: &Graph, u: usize, v: usize) -> bool {
    let n = g.node_count();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for e in g.edges() {
        reach[e.u][e.v] = true;
        reach[e.v][e.u] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach[u][v]
}

/// Cycle detection via exhaustive DFS looking for a back edge.
pub fn cycle_by_dfs(g: &Graph) -> bool {
    let n = g.node_count();
    let mut visited = vec![false; n];
    fn dfs(g: &Graph, u: usize, parent: usize, visited: &mut [bool]) -> bool {
        visited[u] = true;
        for &v in g.neighbors(u).expect("valid node") {
            if !visited[v] {
                if dfs(g, v, u, visited) {
                    return true;
                }
            } else if v != parent {
                return true;
            }
        }
        false
    }
    for start in 0..n {
        if !visited[start] && dfs(g, start, usize::MAX, &mut visited) {
            return true;
        }
    }
    false
}

/// All linear extensions of a DAG (all permutations filtered by edge order).
/// Only sensible for very small graphs.
pub fn all_linear_extensions(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut result = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |candidate| {
        let mut position = vec![0usize; n];
        for (i, &v) in candidate.iter().enumerate() {
            position[v] = i;
        }
        if g.edges().iter().all(|e| position[e.u] < position[e.v]) {
            result.push(candidate.to_vec());
        }
    });
    result
}

/// Minimum total weight over all simple paths from `u` to `v`, by DFS
/// enumeration. `None` when no path exists.
pub fn shortest_path_by_enumeration(g: &Graph, u: usize, v: usize) -> Option<u64> {
    let n = g.node_count();
    let mut weight = vec![vec![None::<u64>; n]; n];
    for e in g.edges() {
        let w = u64::from(e.weight.expect("weighted graph"));
        weight[e.u][e.v] = Some(w);
        weight[e.v][e.u] = Some(w);
    }
    let mut best: Option<u64> = None;
    let mut visited = vec![false; n];
    fn dfs(
        weight: &[Vec<Option<u64>>],
        cur: usize,
        target: usize,
        acc: u64,
        visited: &mut [bool],
        best: &mut Option<u64>,
    ) {
        if cur == target {
            *best = Some(best.map_or(acc, |b| b.min(acc)));
            return;
        }
        visited[cur] = true;
        for next in 0..weight.len() {
            if let Some(w) = weight[cur][next] {
                if !visited[next] {
                    dfs(weight, next, target, acc + w, visited, best);
                }
            }
        }
        visited[cur] = false;
    }
    dfs(&weight, u, v, 0, &mut visited, &mut best);
    best
}

/// Max-flow value through min-cut duality: minimum cut capacity over all
/// 2^(n-2) partitions separating source from sink.
pub fn max_flow_by_min_cut(g: &Graph, source: usize, sink: usize) -> u64 {
    let n = g.node_count();
    let others: Vec<usize> = (0..n).filter(|&v| v != source && v != sink).collect();
    let mut best = u64::MAX;
    for mask in 0u64..(1 << others.len()) {
        let mut on_source_side = vec![false; n];
        on_source_side[source] = true;
        for (bit, &v) in others.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                on_source_side[v] = true;
            }
        }
        let cut: u64 = g
            .edges()
            .iter()
            .filter(|e| on_source_side[e.u] && !on_source_side[e.v])
            .map(|e| u64::from(e.weight.unwrap_or(0)))
            .sum();
        best = best.min(cut);
    }
    if best == u64::MAX { 0 } else { best }
}

/// Maximum matching size by enumerating all edge subsets (|E| <= 16).
pub fn matching_size_by_subsets(g: &Graph) -> usize {
    let m = g.edges().len();
    assert!(m <= 16, "subset oracle bounded to 16 edges");
    let mut best = 0usize;
    for mask in 0u32..(1 << m) {
        let picked: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, e)| (e.u, e.v))
            .collect();
        if picked.len() <= best {
            continue;
        }
        let mut used = vec![false; g.node_count()];
        let mut ok = true;
        for &(u, v) in &picked {
            if used[u] || used[v] {
                ok = false;
                break;
            }
            used[u] = true;
            used[v] = true;
        }
        if ok {
            best = picked.len();
        }
    }
    best
}

/// Hamiltonian path existence by checking all n! node orders.
pub fn hamilton_path_by_permutations(g: &Graph) -> bool {
    let n = g.node_count();
    if n == 0 {
        return false;
    }
    let mut adjacent = vec![vec![false; n]; n];
    for e in g.edges() {
        adjacent[e.u][e.v] = true;
        adjacent[e.v][e.u] = true;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut found = false;
    permute(&mut perm, 0, &mut |candidate| {
        if !found && candidate.windows(2).all(|w| adjacent[w[0]][w[1]]) {
            found = true;
        }
    });
    found
}

/// Node set within `k` hops of `center`, by repeated frontier expansion over
/// an adjacency matrix (undirected view).
pub fn k_hop_set_by_matrix(g: &Graph, center: usize, k: usize) -> Vec<usize> {
    let n = g.node_count();
    let mut adjacent = vec![vec![false; n]; n];
    for e in g.edges() {
        adjacent[e.u][e.v] = true;
        adjacent[e.v][e.u] = true;
    }
    let mut inside = vec![false; n];
    inside[center] = true;
    for _ in 0..k {
        let snapshot = inside.clone();
        for u in 0..n {
            if snapshot[u] {
                for v in 0..n {
                    if adjacent[u][v] {
                        inside[v] = true;
                    }
                }
            }
        }
    }
    (0..n).filter(|&v| inside[v]).collect()
}

fn permute<F: FnMut(&[usize])>(items: &mut Vec<usize>, at: usize, visit: &mut F) {
    if at == items.len() {
        visit(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute(items, at + 1, visit);
        items.swap(at, i);
    }
}
