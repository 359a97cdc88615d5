//! Graph representation, interchange format, and k-hop subgraph sampling.
//!
//! Nodes are integers `0..node_count`. Graphs are simple: no self-loops and
//! no duplicate edges (for undirected graphs `(u,v)` and `(v,u)` count as the
//! same edge). Edge weights are all-or-nothing per graph.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A single edge with an optional positive integer weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Option<u32>,
}

impl Edge {
    pub fn new(u: usize, v: usize) -> Self {
        Edge { u, v, weight: None }
    }

    pub fn weighted(u: usize, v: usize, weight: u32) -> Self {
        Edge { u, v, weight: Some(weight) }
    }
}

/// Immutable simple graph with optional edge weights and node attributes.
#[derive(Debug, Clone)]
pub struct Graph {
    directed: bool,
    node_count: usize,
    edges: Vec<Edge>,
    node_attrs: BTreeMap<usize, String>,
    adj_out: Vec<Vec<usize>>,
    adj_in: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.node_count == other.node_count
            && self.edges == other.edges
            && self.node_attrs == other.node_attrs
    }
}

impl Eq for Graph {}

impl Graph {
    /// Build a graph, validating the structural invariants.
    pub fn new(
        directed: bool,
        node_count: usize,
        edges: Vec<Edge>,
        node_attrs: BTreeMap<usize, String>,
    ) -> Result<Self> {
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        let mut weighted_count = 0usize;
        for edge in &edges {
            if edge.u >= node_count || edge.v >= node_count {
                return Err(Error::Parameter(format!(
                    "edge ({}, {}) references a node >= node_count {}",
                    edge.u, edge.v, node_count
                )));
            }
            if edge.u == edge.v {
                return Err(Error::Parameter(format!("self-loop at node {}", edge.u)));
            }
            let key = if directed {
                (edge.u, edge.v)
            } else {
                (edge.u.min(edge.v), edge.u.max(edge.v))
            };
            if !seen.insert(key) {
                return Err(Error::Parameter(format!(
                    "duplicate edge ({}, {})",
                    edge.u, edge.v
                )));
            }
            if let Some(w) = edge.weight {
                if w == 0 {
                    return Err(Error::Parameter(format!(
                        "edge ({}, {}) has zero weight",
                        edge.u, edge.v
                    )));
                }
                weighted_count += 1;
            }
        }
        if weighted_count != 0 && weighted_count != edges.len() {
            return Err(Error::Parameter(
                "either all edges carry a weight or none do".into(),
            ));
        }
        for (&node, attr) in &node_attrs {
            if node >= node_count {
                return Err(Error::Parameter(format!(
                    "attribute on unknown node {node}"
                )));
            }
            if attr.is_empty() || attr.chars().any(|c| c.is_control()) {
                return Err(Error::Parameter(format!(
                    "attribute for node {node} must be non-empty printable text"
                )));
            }
        }
        let mut adj_out = vec![Vec::new(); node_count];
        let mut adj_in = vec![Vec::new(); node_count];
        for edge in &edges {
            adj_out[edge.u].push(edge.v);
            if directed {
                adj_in[edge.v].push(edge.u);
            } else {
                adj_out[edge.v].push(edge.u);
            }
        }
        for list in adj_out.iter_mut().chain(adj_in.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Graph { directed, node_count, edges, node_attrs, adj_out, adj_in })
    }

    /// Convenience constructor for unweighted graphs without attributes.
    pub fn from_edges(directed: bool, node_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs.iter().map(|&(u, v)| Edge::new(u, v)).collect();
        Graph::new(directed, node_count, edges, BTreeMap::new())
    }

    /// Convenience constructor for weighted graphs.
    pub fn from_weighted_edges(
        directed: bool,
        node_count: usize,
        triples: &[(usize, usize, u32)],
    ) -> Result<Self> {
        let edges = triples.iter().map(|&(u, v, w)| Edge::weighted(u, v, w)).collect();
        Graph::new(directed, node_count, edges, BTreeMap::new())
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_attrs(&self) -> &BTreeMap<usize, String> {
        &self.node_attrs
    }

    pub fn is_weighted(&self) -> bool {
        self.edges.first().is_some_and(|e| e.weight.is_some())
    }

    /// Out-neighbors (all neighbors for undirected graphs), ascending.
    pub fn neighbors(&self, u: usize) -> Result<&[usize]> {
        self.adj_out
            .get(u)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Parameter(format!("node {u} out of range")))
    }

    /// In-neighbors, ascending. Equals `neighbors` for undirected graphs.
    pub fn in_neighbors(&self, u: usize) -> Result<&[usize]> {
        if u >= self.node_count {
            return Err(Error::Parameter(format!("node {u} out of range")));
        }
        if self.directed {
            Ok(&self.adj_in[u])
        } else {
            Ok(&self.adj_out[u])
        }
    }

    /// Neighbors under the undirected view of the graph, ascending.
    pub fn undirected_neighbors(&self, u: usize) -> Vec<usize> {
        if !self.directed {
            return self.adj_out[u].clone();
        }
        let mut all: Vec<usize> = self.adj_out[u]
            .iter()
            .chain(self.adj_in[u].iter())
            .copied()
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// BFS hop distances from `start`, treating edges as undirected.
    /// Unreachable nodes get `usize::MAX`.
    pub fn hop_distances(&self, start: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count];
        let mut queue = VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for v in self.undirected_neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Serialize to the interchange JSON form with a fixed byte layout:
    /// `{"directed":…,"n":…,"edges":[[u,v]…],"node_attrs":{…}}`.
    pub fn to_interchange_json(&self) -> String {
        let mut out = String::with_capacity(32 + self.edges.len() * 10);
        out.push_str("{\"directed\":");
        out.push_str(if self.directed { "true" } else { "false" });
        out.push_str(",\"n\":");
        out.push_str(&self.node_count.to_string());
        out.push_str(",\"edges\":[");
        for (i, edge) in self.edges.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            match edge.weight {
                Some(w) => out.push_str(&format!("[{},{},{}]", edge.u, edge.v, w)),
                None => out.push_str(&format!("[{},{}]", edge.u, edge.v)),
            }
        }
        out.push(']');
        if !self.node_attrs.is_empty() {
            out.push_str(",\"node_attrs\":{");
            for (i, (node, attr)) in self.node_attrs.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format!(
                    "\"{}\":{}",
                    node,
                    serde_json::to_string(attr).expect("string serializes")
                ));
            }
            out.push('}');
        }
        out.push('}');
        out
    }

    /// Parse the interchange JSON form.
    pub fn from_interchange_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parameter("interchange root must be an object".into()))?;
        let directed = obj
            .get("directed")
            .and_then(serde_json::Value::as_bool)
            .ok_or_else(|| Error::Parameter("missing boolean field \"directed\"".into()))?;
        let n = obj
            .get("n")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Parameter("missing integer field \"n\"".into()))?
            as usize;
        let raw_edges = obj
            .get("edges")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| Error::Parameter("missing array field \"edges\"".into()))?;
        let mut edges = Vec::with_capacity(raw_edges.len());
        for raw in raw_edges {
            let tuple = raw
                .as_array()
                .ok_or_else(|| Error::Parameter("edge entries must be arrays".into()))?;
            let get = |i: usize| -> Result<u64> {
                tuple
                    .get(i)
                    .and_then(serde_json::Value::as_u64)
                    .ok_or_else(|| Error::Parameter("edge entries must hold integers".into()))
            };
            match tuple.len() {
                2 => edges.push(Edge::new(get(0)? as usize, get(1)? as usize)),
                3 => edges.push(Edge::weighted(
                    get(0)? as usize,
                    get(1)? as usize,
                    get(2)? as u32,
                )),
                len => {
                    return Err(Error::Parameter(format!(
                        "edge entry has {len} elements, expected 2 or 3"
                    )))
                }
            }
        }
        let mut node_attrs = BTreeMap::new();
        if let Some(raw_attrs) = obj.get("node_attrs") {
            let map = raw_attrs
                .as_object()
                .ok_or_else(|| Error::Parameter("\"node_attrs\" must be an object".into()))?;
            for (key, val) in map {
                let node: usize = key
                    .parse()
                    .map_err(|_| Error::Parameter(format!("bad node id key {key:?}")))?;
                let attr = val
                    .as_str()
                    .ok_or_else(|| Error::Parameter("attribute values must be strings".into()))?;
                node_attrs.insert(node, attr.to_string());
            }
        }
        Graph::new(directed, n, edges, node_attrs)
    }

    /// SHA-256 digest of the interchange serialization, `"sha256:…"`.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_interchange_json().as_bytes());
        format!("sha256:{}", hex::encode(hasher.finalize()))
    }
}

/// A k-hop induced subgraph with its relabeling back to the source graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphSample {
    pub subgraph: Graph,
    pub center_original_id: usize,
    /// Bijection original id -> new id in `0..subgraph.node_count()`.
    pub relabel_map: BTreeMap<usize, usize>,
    pub hops: usize,
}

impl SubgraphSample {
    /// Original ids ordered by their new label.
    pub fn original_ids(&self) -> Vec<usize> {
        let mut inverse = vec![0usize; self.relabel_map.len()];
        for (&orig, &new) in &self.relabel_map {
            inverse[new] = orig;
        }
        inverse
    }
}

/// Extract the induced subgraph of all nodes within `k` hops of `center`,
/// relabeled to `0..m` by ascending original id. Directed edges count as
/// undirected for neighborhood membership; edge direction and weights are
/// preserved in the sample.
pub fn sample_k_hop(source: &Graph, center: usize, k: usize) -> Result<SubgraphSample> {
    if center >= source.node_count() {
        return Err(Error::Parameter(format!(
            "center {center} out of range for {} nodes",
            source.node_count()
        )));
    }
    if k == 0 {
        return Err(Error::Parameter("hop count k must be >= 1".into()));
    }
    let dist = source.hop_distances(center);
    let mut kept: Vec<usize> = (0..source.node_count()).filter(|&v| dist[v] <= k).collect();
    kept.sort_unstable();
    let relabel_map: BTreeMap<usize, usize> =
        kept.iter().enumerate().map(|(new, &orig)| (orig, new)).collect();
    let mut edges = Vec::new();
    for edge in source.edges() {
        if let (Some(&u), Some(&v)) = (relabel_map.get(&edge.u), relabel_map.get(&edge.v)) {
            edges.push(Edge { u, v, weight: edge.weight });
        }
    }
    let node_attrs = source
        .node_attrs()
        .iter()
        .filter_map(|(orig, attr)| relabel_map.get(orig).map(|&new| (new, attr.clone())))
        .collect();
    let subgraph = Graph::new(source.directed(), kept.len(), edges, node_attrs)?;
    Ok(SubgraphSample { subgraph, center_original_id: center, relabel_map, hops: k })
}

/// Extract the induced subgraph of all nodes within `k` hops of either
/// endpoint of a candidate pair, relabeled by ascending original id.
pub fn sample_k_hop_union(source: &Graph, a: usize, b: usize, k: usize) -> Result<SubgraphSample> {
    if a >= source.node_count() || b >= source.node_count() {
        return Err(Error::Parameter(format!(
            "pair ({a}, {b}) out of range for {} nodes",
            source.node_count()
        )));
    }
    if k == 0 {
        return Err(Error::Parameter("hop count k must be >= 1".into()));
    }
    let dist_a = source.hop_distances(a);
    let dist_b = source.hop_distances(b);
    let kept: Vec<usize> = (0..source.node_count())
        .filter(|&v| dist_a[v] <= k || dist_b[v] <= k)
        .collect();
    let relabel_map: BTreeMap<usize, usize> =
        kept.iter().enumerate().map(|(new, &orig)| (orig, new)).collect();
    let mut edges = Vec::new();
    for edge in source.edges() {
        if let (Some(&u), Some(&v)) = (relabel_map.get(&edge.u), relabel_map.get(&edge.v)) {
            edges.push(Edge { u, v, weight: edge.weight });
        }
    }
    let node_attrs = source
        .node_attrs()
        .iter()
        .filter_map(|(orig, attr)| relabel_map.get(orig).map(|&new| (new, attr.clone())))
        .collect();
    let subgraph = Graph::new(source.directed(), kept.len(), edges, node_attrs)?;
    Ok(SubgraphSample { subgraph, center_original_id: a, relabel_map, hops: k })
}
