//! Ground-truth solvers and answer verifiers for the benchmark tasks.
//!
//! Every solver is deterministic: ties are broken by smallest node id
//! (Kahn frontier, Dijkstra heap, Hamiltonian branching), so canonical
//! gold answers are stable across runs and platforms.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// The task kinds the pipeline can generate, render, and score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Connect,
    Cycle,
    Ts,
    Sp,
    MaxFlow,
    Bgm,
    Hp,
    LinkPred,
    NodeClass,
}

impl TaskKind {
    /// The seven synthetic tasks, in dataset order.
    pub const SYNTHETIC: [TaskKind; 7] = [
        TaskKind::Connect,
        TaskKind::Cycle,
        TaskKind::Ts,
        TaskKind::Sp,
        TaskKind::MaxFlow,
        TaskKind::Bgm,
        TaskKind::Hp,
    ];

    /// Stable lowercase identifier used in record ids and file paths.
    pub fn slug(self) -> &'static str {
        match self {
            TaskKind::Connect => "connect",
            TaskKind::Cycle => "cycle",
            TaskKind::Ts => "ts",
            TaskKind::Sp => "sp",
            TaskKind::MaxFlow => "maxflow",
            TaskKind::Bgm => "bgm",
            TaskKind::Hp => "hp",
            TaskKind::LinkPred => "linkpred",
            TaskKind::NodeClass => "nodeclass",
        }
    }

    /// Column heading used in report tables.
    pub fn heading(self) -> &'static str {
        match self {
            TaskKind::Connect => "Connect",
            TaskKind::Cycle => "Cycle",
            TaskKind::Ts => "TS",
            TaskKind::Sp => "SP",
            TaskKind::MaxFlow => "MaxFlow",
            TaskKind::Bgm => "BGM",
            TaskKind::Hp => "HP",
            TaskKind::LinkPred => "LinkPred",
            TaskKind::NodeClass => "NodeClass",
        }
    }

    pub fn from_slug(slug: &str) -> Option<TaskKind> {
        match slug {
            "connect" => Some(TaskKind::Connect),
            "cycle" => Some(TaskKind::Cycle),
            "ts" => Some(TaskKind::Ts),
            "sp" => Some(TaskKind::Sp),
            "maxflow" => Some(TaskKind::MaxFlow),
            "bgm" => Some(TaskKind::Bgm),
            "hp" => Some(TaskKind::Hp),
            "linkpred" => Some(TaskKind::LinkPred),
            "nodeclass" => Some(TaskKind::NodeClass),
            _ => None,
        }
    }
}

/// Task parameters beyond the graph itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TaskParams {
    None,
    /// Query endpoints for Connect / SP / LinkPred.
    Pair { u: usize, v: usize },
    /// Flow endpoints for MaxFlow.
    SourceSink { source: usize, sink: usize },
    /// Classification target for NodeClass.
    Target { node: usize },
}

/// Typed gold-answer payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum AnswerValue {
    Boolean(bool),
    NodeSequence(Vec<usize>),
    Integer(u64),
    EdgeSet(Vec<(usize, usize)>),
    ClassLabel(String),
}

/// A gold answer: typed payload plus its canonical text rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldAnswer {
    pub value: AnswerValue,
    pub canonical_text: String,
}

impl GoldAnswer {
    pub fn new(value: AnswerValue) -> Self {
        let canonical_text = render_answer(&value);
        GoldAnswer { value, canonical_text }
    }
}

/// One task instance: graph, parameters, and gold answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskInstance {
    pub task: TaskKind,
    pub graph: Graph,
    pub params: TaskParams,
    pub gold: GoldAnswer,
}

/// Render a typed answer as canonical text.
///
/// Booleans become `"Yes."` / `"No."`, node sequences join ids with `"->"`,
/// integers print in decimal, edge sets print as `(u,v)` pairs sorted by
/// `(min, max)` and joined with commas, class labels pass through.
pub fn render_answer(value: &AnswerValue) -> String {
    match value {
        AnswerValue::Boolean(true) => "Yes.".to_string(),
        AnswerValue::Boolean(false) => "No.".to_string(),
        AnswerValue::NodeSequence(seq) => seq
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("->"),
        AnswerValue::Integer(n) => n.to_string(),
        AnswerValue::EdgeSet(edges) => {
            let mut canon: Vec<(usize, usize)> =
                edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
            canon.sort_unstable();
            canon
                .iter()
                .map(|(u, v)| format!("({u},{v})"))
                .collect::<Vec<_>>()
                .join(",")
        }
        AnswerValue::ClassLabel(label) => label.clone(),
    }
}

fn require_undirected(g: &Graph, task: &str) -> Result<()> {
    if g.directed() {
        return Err(Error::Precondition(format!("{task} requires an undirected graph")));
    }
    Ok(())
}

fn require_node(g: &Graph, u: usize) -> Result<()> {
    if u >= g.node_count() {
        return Err(Error::Parameter(format!(
            "node {u} out of range for {} nodes",
            g.node_count()
        )));
    }
    Ok(())
}

/// True iff a path u .. v exists in an undirected graph.
pub fn solve_connectivity(g: &Graph, u: usize, v: usize) -> Result<bool> {
    require_undirected(g, "connectivity")?;
    require_node(g, u)?;
    require_node(g, v)?;
    Ok(g.hop_distances(u)[v] != usize::MAX)
}

/// True iff the undirected graph contains a cycle.
pub fn solve_cycle(g: &Graph) -> Result<bool> {
    require_undirected(g, "cycle detection")?;
    // |E| >= |C| - #components + 1 <=> some component has more edges than a tree.
    let n = g.node_count();
    let mut components = 0usize;
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u)? {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(g.edges().len() + components > n)
}

/// Kahn's algorithm with a smallest-id-first frontier.
///
/// Returns the canonical topological order; errors on cyclic input.
pub fn solve_topological_sort(g: &Graph) -> Result<Vec<usize>> {
    if !g.directed() {
        return Err(Error::Precondition("topological sort requires a directed graph".into()));
    }
    let n = g.node_count();
    let mut indegree = vec![0usize; n];
    for edge in g.edges() {
        indegree[edge.v] += 1;
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&v| indegree[v] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = heap.pop() {
        order.push(u);
        for &v in g.neighbors(u)? {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                heap.push(Reverse(v));
            }
        }
    }
    if order.len() != n {
        return Err(Error::Precondition("graph contains a directed cycle".into()));
    }
    Ok(order)
}

/// Dijkstra with smallest-id tie-breaking on both the heap and the
/// predecessor choice. Returns the canonical path and its total weight.
pub fn solve_shortest_path(g: &Graph, u: usize, v: usize) -> Result<(Vec<usize>, u64)> {
    require_undirected(g, "shortest path")?;
    require_node(g, u)?;
    require_node(g, v)?;
    if !g.is_weighted() {
        return Err(Error::Precondition("shortest path requires edge weights".into()));
    }
    let n = g.node_count();
    let mut weight_of = vec![std::collections::BTreeMap::new(); n];
    for edge in g.edges() {
        let w = u64::from(edge.weight.expect("weighted graph"));
        weight_of[edge.u].insert(edge.v, w);
        weight_of[edge.v].insert(edge.u, w);
    }
    let mut dist = vec![u64::MAX; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[u] = 0;
    heap.push(Reverse((0u64, u)));
    while let Some(Reverse((d, cur))) = heap.pop() {
        if done[cur] {
            continue;
        }
        done[cur] = true;
        for (&next, &w) in &weight_of[cur] {
            let cand = d + w;
            if cand < dist[next] || (cand == dist[next] && cur < pred[next]) {
                dist[next] = cand;
                pred[next] = cur;
                heap.push(Reverse((cand, next)));
            }
        }
    }
    if dist[v] == u64::MAX {
        return Err(Error::NoPath { from: u, to: v });
    }
    let mut path = vec![v];
    let mut cur = v;
    while cur != u {
        cur = pred[cur];
        path.push(cur);
    }
    path.reverse();
    Ok((path, dist[v]))
}

/// Edmonds–Karp maximum flow value. An unreachable sink yields 0.
pub fn solve_max_flow(g: &Graph, source: usize, sink: usize) -> Result<u64> {
    if !g.directed() {
        return Err(Error::Precondition("max flow requires a directed graph".into()));
    }
    if !g.is_weighted() && !g.edges().is_empty() {
        return Err(Error::Precondition("max flow requires edge capacities".into()));
    }
    require_node(g, source)?;
    require_node(g, sink)?;
    if source == sink {
        return Err(Error::Parameter("source and sink must differ".into()));
    }
    let n = g.node_count();
    // Dense residual matrix; instances are small by construction.
    let mut capacity = vec![vec![0i64; n]; n];
    for edge in g.edges() {
        capacity[edge.u][edge.v] += i64::from(edge.weight.unwrap_or(0));
    }
    let mut total = 0i64;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && capacity[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[sink] == usize::MAX {
            break;
        }
        let mut bottleneck = i64::MAX;
        let mut v = sink;
        while v != source {
            let u = parent[v];
            bottleneck = bottleneck.min(capacity[u][v]);
            v = u;
        }
        let mut v = sink;
        while v != source {
            let u = parent[v];
            capacity[u][v] -= bottleneck;
            capacity[v][u] += bottleneck;
            v = u;
        }
        total += bottleneck;
    }
    Ok(total as u64)
}

/// Two-color an undirected graph; `None` when not bipartite.
/// Returns the side assignment (false/true) per node.
fn two_coloring(g: &Graph) -> Result<Option<Vec<bool>>> {
    let n = g.node_count();
    let mut color: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("colored before queueing");
            for &v in g.neighbors(u)? {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return Ok(None),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(Some(color.into_iter().map(|c| c.unwrap_or(false)).collect()))
}

/// Hopcroft–Karp maximum matching on a bipartite graph, canonicalized by
/// sorting matched edges by `(min endpoint, max endpoint)`.
pub fn solve_bipartite_matching(g: &Graph) -> Result<Vec<(usize, usize)>> {
    require_undirected(g, "bipartite matching")?;
    let sides = two_coloring(g)?
        .ok_or_else(|| Error::Precondition("graph is not bipartite".into()))?;
    let left: Vec<usize> = (0..g.node_count()).filter(|&v| !sides[v]).collect();
    let index_on_left: std::collections::HashMap<usize, usize> =
        left.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // Adjacency from left-side index to right-side node ids, ascending.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); left.len()];
    for edge in g.edges() {
        let (l, r) = if sides[edge.u] { (edge.v, edge.u) } else { (edge.u, edge.v) };
        adj[index_on_left[&l]].push(r);
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut match_left: Vec<Option<usize>> = vec![None; left.len()];
    let mut match_right: std::collections::HashMap<usize, usize> =
        std::collections::HashMap::new();

    loop {
        // BFS layers over free left vertices.
        let mut layer = vec![usize::MAX; left.len()];
        let mut queue = VecDeque::new();
        for (i, m) in match_left.iter().enumerate() {
            if m.is_none() {
                layer[i] = 0;
                queue.push_back(i);
            }
        }
        let mut found_augmenting = false;
        while let Some(i) = queue.pop_front() {
            for &r in &adj[i] {
                match match_right.get(&r) {
                    None => found_augmenting = true,
                    Some(&j) if layer[j] == usize::MAX => {
                        layer[j] = layer[i] + 1;
                        queue.push_back(j);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found_augmenting {
            break;
        }
        fn try_augment(
            i: usize,
            adj: &[Vec<usize>],
            layer: &mut Vec<usize>,
            match_left: &mut Vec<Option<usize>>,
            match_right: &mut std::collections::HashMap<usize, usize>,
        ) -> bool {
            for idx in 0..adj[i].len() {
                let r = adj[i][idx];
                let advance = match match_right.get(&r) {
                    None => true,
                    Some(&j) => {
                        layer[j] == layer[i] + 1
                            && try_augment(j, adj, layer, match_left, match_right)
                    }
                };
                if advance {
                    match_left[i] = Some(r);
                    match_right.insert(r, i);
                    return true;
                }
            }
            layer[i] = usize::MAX;
            false
        }
        let mut progressed = false;
        for i in 0..left.len() {
            if match_left[i].is_none() && layer[i] == 0 {
                progressed |= try_augment(i, &adj, &mut layer, &mut match_left, &mut match_right);
            }
        }
        if !progressed {
            break;
        }
    }

    let mut matching: Vec<(usize, usize)> = match_left
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.map(|r| (left[i].min(r), left[i].max(r))))
        .collect();
    matching.sort_unstable();
    Ok(matching)
}

/// Maximum number of nodes accepted by the Hamiltonian path solver.
pub const HP_NODE_BOUND: usize = 20;

/// Backtracking Hamiltonian path search with smallest-id-first branching.
/// Returns the first path found, or `None` when no path exists.
pub fn solve_hamilton_path(g: &Graph) -> Result<Option<Vec<usize>>> {
    require_undirected(g, "hamilton path")?;
    let n = g.node_count();
    if n > HP_NODE_BOUND {
        return Err(Error::Capacity(format!(
            "hamilton path solver is bounded to {HP_NODE_BOUND} nodes, got {n}"
        )));
    }
    if n == 0 {
        return Ok(None);
    }
    if n == 1 {
        return Ok(Some(vec![0]));
    }

    fn extend(g: &Graph, path: &mut Vec<usize>, visited: &mut [bool]) -> bool {
        if path.len() == g.node_count() {
            return true;
        }
        let last = *path.last().expect("path is non-empty");
        for &next in g.neighbors(last).expect("valid node") {
            if !visited[next] {
                visited[next] = true;
                path.push(next);
                if extend(g, path, visited) {
                    return true;
                }
                path.pop();
                visited[next] = false;
            }
        }
        false
    }

    for start in 0..n {
        let mut visited = vec![false; n];
        visited[start] = true;
        let mut path = vec![start];
        if extend(g, &mut path, &mut visited) {
            return Ok(Some(path));
        }
    }
    Ok(None)
}

/// Check a candidate answer against an instance.
///
/// Accepts any valid answer, not only the canonical one: a linear extension
/// for TS, any optimal path for SP, any maximum matching for BGM, any
/// Hamiltonian path for HP. Malformed candidates yield `false`, never an
/// error.
pub fn verify_answer(inst: &TaskInstance, candidate: &GoldAnswer) -> bool {
    let g = &inst.graph;
    match (inst.task, &candidate.value) {
        (TaskKind::Connect | TaskKind::Cycle | TaskKind::LinkPred, AnswerValue::Boolean(b)) => {
            matches!(&inst.gold.value, AnswerValue::Boolean(gold) if gold == b)
        }
        (TaskKind::Ts, AnswerValue::NodeSequence(seq)) => {
            if !is_permutation(seq, g.node_count()) {
                return false;
            }
            let mut position = vec![0usize; g.node_count()];
            for (i, &v) in seq.iter().enumerate() {
                position[v] = i;
            }
            g.edges().iter().all(|e| position[e.u] < position[e.v])
        }
        (TaskKind::Sp, AnswerValue::NodeSequence(seq)) => {
            let (TaskParams::Pair { u, v }, Some(weight)) = (inst.params, gold_path_weight(inst))
            else {
                return false;
            };
            path_weight(g, seq)
                .is_some_and(|w| seq.first() == Some(&u) && seq.last() == Some(&v) && w == weight)
        }
        (TaskKind::MaxFlow, AnswerValue::Integer(flow)) => {
            matches!(&inst.gold.value, AnswerValue::Integer(gold) if gold == flow)
        }
        (TaskKind::Bgm, AnswerValue::EdgeSet(edges)) => {
            let AnswerValue::EdgeSet(gold) = &inst.gold.value else {
                return false;
            };
            is_valid_matching(g, edges) && edges.len() == gold.len()
        }
        (TaskKind::Hp, AnswerValue::NodeSequence(seq)) => {
            is_permutation(seq, g.node_count())
                && seq.windows(2).all(|w| has_undirected_edge(g, w[0], w[1]))
        }
        (TaskKind::NodeClass, AnswerValue::ClassLabel(label)) => {
            matches!(&inst.gold.value, AnswerValue::ClassLabel(gold) if gold == label)
        }
        _ => false,
    }
}

fn gold_path_weight(inst: &TaskInstance) -> Option<u64> {
    let AnswerValue::NodeSequence(gold_path) = &inst.gold.value else {
        return None;
    };
    path_weight(&inst.graph, gold_path)
}

/// Total weight of a node sequence, or `None` if any hop is not an edge.
fn path_weight(g: &Graph, seq: &[usize]) -> Option<u64> {
    if seq.is_empty() || seq.iter().any(|&v| v >= g.node_count()) {
        return None;
    }
    let mut total = 0u64;
    for pair in seq.windows(2) {
        let w = g.edges().iter().find_map(|e| {
            let matches =
                (e.u == pair[0] && e.v == pair[1]) || (e.u == pair[1] && e.v == pair[0]);
            if matches { e.weight.map(u64::from) } else { None }
        })?;
        total += w;
    }
    Some(total)
}

fn has_undirected_edge(g: &Graph, u: usize, v: usize) -> bool {
    g.edges()
        .iter()
        .any(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
}

fn is_permutation(seq: &[usize], n: usize) -> bool {
    if seq.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in seq {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

fn is_valid_matching(g: &Graph, edges: &[(usize, usize)]) -> bool {
    let mut used = vec![false; g.node_count()];
    for &(u, v) in edges {
        if u >= g.node_count() || v >= g.node_count() || !has_undirected_edge(g, u, v) {
            return false;
        }
        if used[u] || used[v] {
            return false;
        }
        used[u] = true;
        used[v] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn triangle() -> Graph {
        Graph::from_edges(false, 3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn connectivity_examples() {
        let g = Graph::from_edges(false, 4, &[(0, 1), (1, 2)]).unwrap();
        assert!(solve_connectivity(&g, 0, 2).unwrap());
        assert!(!solve_connectivity(&g, 0, 3).unwrap());
        let directed = Graph::from_edges(true, 2, &[(0, 1)]).unwrap();
        assert!(matches!(
            solve_connectivity(&directed, 0, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cycle_examples() {
        assert!(solve_cycle(&triangle()).unwrap());
        let path = Graph::from_edges(false, 3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!solve_cycle(&path).unwrap());
    }

    #[test]
    fn topological_sort_diamond() {
        let g = Graph::from_edges(true, 4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(solve_topological_sort(&g).unwrap(), vec![0, 1, 2, 3]);
        let inst = TaskInstance {
            task: TaskKind::Ts,
            gold: GoldAnswer::new(AnswerValue::NodeSequence(vec![0, 1, 2, 3])),
            params: TaskParams::None,
            graph: g,
        };
        // The other linear extension is accepted by the verifier.
        let alt = GoldAnswer::new(AnswerValue::NodeSequence(vec![0, 2, 1, 3]));
        assert!(verify_answer(&inst, &alt));
        let bad = GoldAnswer::new(AnswerValue::NodeSequence(vec![1, 0, 2, 3]));
        assert!(!verify_answer(&inst, &bad));
    }

    #[test]
    fn topological_sort_rejects_cycles() {
        let g = Graph::from_edges(true, 2, &[(0, 1), (1, 0)]).unwrap();
        assert!(matches!(solve_topological_sort(&g), Err(Error::Precondition(_))));
    }

    #[test]
    fn topological_sort_chain_unique() {
        let g = Graph::from_edges(true, 3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(solve_topological_sort(&g).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn shortest_path_prefers_lighter_route() {
        // Gold path 4->6->0 of weight 3 beats the two-hop 4->2->0 of weight 4.
        let g = Graph::from_weighted_edges(
            false,
            7,
            &[(4, 6, 1), (0, 6, 2), (2, 4, 1), (0, 2, 3)],
        )
        .unwrap();
        let (path, weight) = solve_shortest_path(&g, 4, 0).unwrap();
        assert_eq!(weight, 3);
        assert_eq!(render_answer(&AnswerValue::NodeSequence(path)), "4->6->0");
    }

    #[test]
    fn shortest_path_errors() {
        let g = Graph::from_weighted_edges(false, 4, &[(0, 1, 2)]).unwrap();
        assert!(matches!(
            solve_shortest_path(&g, 0, 3),
            Err(Error::NoPath { from: 0, to: 3 })
        ));
        let unweighted = Graph::from_edges(false, 2, &[(0, 1)]).unwrap();
        assert!(matches!(
            solve_shortest_path(&unweighted, 0, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn max_flow_examples() {
        let single = Graph::from_weighted_edges(true, 2, &[(0, 1, 7)]).unwrap();
        assert_eq!(solve_max_flow(&single, 0, 1).unwrap(), 7);
        let split = Graph::from_weighted_edges(true, 4, &[(0, 1, 3)]).unwrap();
        assert_eq!(solve_max_flow(&split, 2, 3).unwrap(), 0);
        let diamond = Graph::from_weighted_edges(
            true,
            4,
            &[(0, 1, 2), (0, 2, 3), (1, 3, 4), (2, 3, 1)],
        )
        .unwrap();
        assert_eq!(solve_max_flow(&diamond, 0, 3).unwrap(), 3);
    }

    #[test]
    fn bipartite_matching_examples() {
        let k22 = Graph::from_edges(false, 4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(solve_bipartite_matching(&k22).unwrap().len(), 2);
        let star = Graph::from_edges(false, 4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(solve_bipartite_matching(&star).unwrap().len(), 1);
        assert!(matches!(
            solve_bipartite_matching(&triangle()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn matching_edges_are_disjoint() {
        let g = Graph::from_edges(
            false,
            6,
            &[(0, 3), (0, 4), (1, 3), (1, 5), (2, 4)],
        )
        .unwrap();
        let matching = solve_bipartite_matching(&g).unwrap();
        let mut used = std::collections::HashSet::new();
        for (u, v) in &matching {
            assert!(used.insert(*u));
            assert!(used.insert(*v));
        }
        assert_eq!(matching.len(), 3);
    }

    #[test]
    fn hamilton_path_examples() {
        let path = Graph::from_edges(false, 3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(solve_hamilton_path(&path).unwrap(), Some(vec![0, 1, 2]));
        let found = solve_hamilton_path(&triangle()).unwrap().unwrap();
        let inst = TaskInstance {
            task: TaskKind::Hp,
            gold: GoldAnswer::new(AnswerValue::NodeSequence(found)),
            params: TaskParams::None,
            graph: triangle(),
        };
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let candidate = GoldAnswer::new(AnswerValue::NodeSequence(perm.to_vec()));
            assert!(verify_answer(&inst, &candidate));
        }
        let repeat = GoldAnswer::new(AnswerValue::NodeSequence(vec![0, 1, 0]));
        assert!(!verify_answer(&inst, &repeat));
    }

    #[test]
    fn hamilton_path_capacity_bound() {
        let big = Graph::from_edges(false, 21, &[(0, 1)]).unwrap();
        assert!(matches!(solve_hamilton_path(&big), Err(Error::Capacity(_))));
    }

    #[test]
    fn sp_verifier_rejects_broken_adjacency() {
        let g = Graph::from_weighted_edges(
            false,
            7,
            &[(4, 6, 1), (0, 6, 2), (2, 4, 1), (0, 2, 3)],
        )
        .unwrap();
        let (path, _) = solve_shortest_path(&g, 4, 0).unwrap();
        let inst = TaskInstance {
            task: TaskKind::Sp,
            gold: GoldAnswer::new(AnswerValue::NodeSequence(path)),
            params: TaskParams::Pair { u: 4, v: 0 },
            graph: g,
        };
        // Right weight but the hop 4->0 is not an edge.
        let broken = GoldAnswer::new(AnswerValue::NodeSequence(vec![4, 0]));
        assert!(!verify_answer(&inst, &broken));
        // Valid path with suboptimal weight.
        let heavy = GoldAnswer::new(AnswerValue::NodeSequence(vec![4, 2, 0]));
        assert!(!verify_answer(&inst, &heavy));
    }

    #[test]
    fn render_answer_forms() {
        assert_eq!(render_answer(&AnswerValue::Boolean(true)), "Yes.");
        assert_eq!(render_answer(&AnswerValue::Boolean(false)), "No.");
        assert_eq!(
            render_answer(&AnswerValue::NodeSequence(vec![4, 6, 0])),
            "4->6->0"
        );
        assert_eq!(render_answer(&AnswerValue::Integer(12)), "12");
        assert_eq!(
            render_answer(&AnswerValue::EdgeSet(vec![(3, 1), (0, 2)])),
            "(0,2),(1,3)"
        );
        assert_eq!(render_answer(&AnswerValue::EdgeSet(vec![])), "");
        assert_eq!(
            render_answer(&AnswerValue::ClassLabel("case_based".into())),
            "case_based"
        );
    }
}
