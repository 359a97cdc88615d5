//! Deterministic node placement engines.
//!
//! All engines place nodes inside the margins of a unit square; the renderer
//! scales to canvas pixels. Force and stress engines record their energy at
//! fixed checkpoints and retain the best configuration seen, so recorded
//! energies are non-increasing and the final state is the best one.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;
use crate::seeding;

/// The six layout engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutKind {
    Layered,
    Spring,
    Stress,
    Multilevel,
    Circular,
    Radial,
}

impl LayoutKind {
    pub const ALL: [LayoutKind; 6] = [
        LayoutKind::Layered,
        LayoutKind::Spring,
        LayoutKind::Stress,
        LayoutKind::Multilevel,
        LayoutKind::Circular,
        LayoutKind::Radial,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            LayoutKind::Layered => "layered",
            LayoutKind::Spring => "spring",
            LayoutKind::Stress => "stress",
            LayoutKind::Multilevel => "multilevel",
            LayoutKind::Circular => "circular",
            LayoutKind::Radial => "radial",
        }
    }

    pub fn from_slug(slug: &str) -> Option<LayoutKind> {
        LayoutKind::ALL.into_iter().find(|k| k.slug() == slug)
    }
}

/// Node positions in the unit square plus convergence bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutResult {
    /// Position per node id, inside `[MARGIN, 1 - MARGIN]^2`.
    pub positions: Vec<(f64, f64)>,
    pub iterations_used: usize,
    /// Final energy for force/stress engines, 0.0 otherwise.
    pub energy: f64,
    /// Energy at each recorded checkpoint, non-increasing.
    pub checkpoints: Vec<f64>,
    /// Set when a layered request on a cyclic digraph fell back to spring.
    pub fallback_used: bool,
}

/// Fraction of the unit square kept clear on every side.
pub const MARGIN: f64 = 0.0625;

const SPRING_ITERATIONS: usize = 200;
const SPRING_CHECKPOINT: usize = 25;
const STRESS_ITERATIONS: usize = 100;
const STRESS_CHECKPOINT: usize = 20;

/// Run a layout engine. Deterministic given `(graph, kind, seed)`.
pub fn layout(g: &Graph, kind: LayoutKind, seed: u64) -> Result<LayoutResult> {
    if g.node_count() == 0 {
        return Ok(LayoutResult {
            positions: Vec::new(),
            iterations_used: 0,
            energy: 0.0,
            checkpoints: Vec::new(),
            fallback_used: false,
        });
    }
    if g.node_count() == 1 {
        return Ok(LayoutResult {
            positions: vec![(0.5, 0.5)],
            iterations_used: 0,
            energy: 0.0,
            checkpoints: Vec::new(),
            fallback_used: false,
        });
    }
    let result = match kind {
        LayoutKind::Circular => circular(g),
        LayoutKind::Radial => radial(g),
        LayoutKind::Layered => return layered(g, seed),
        LayoutKind::Spring => spring(g, seed, SPRING_ITERATIONS),
        LayoutKind::Stress => stress(g, seed),
        LayoutKind::Multilevel => multilevel(g, seed),
    };
    Ok(result)
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(MARGIN, 1.0 - MARGIN)
}

fn on_circle(center: (f64, f64), radius: f64, angle: f64) -> (f64, f64) {
    (center.0 + radius * angle.cos(), center.1 + radius * angle.sin())
}

fn circular(g: &Graph) -> LayoutResult {
    let n = g.node_count();
    let radius = 0.5 - MARGIN;
    let positions = (0..n)
        .map(|v| {
            let angle = -std::f64::consts::FRAC_PI_2
                + 2.0 * std::f64::consts::PI * v as f64 / n as f64;
            on_circle((0.5, 0.5), radius, angle)
        })
        .collect();
    LayoutResult {
        positions,
        iterations_used: 0,
        energy: 0.0,
        checkpoints: Vec::new(),
        fallback_used: false,
    }
}

fn radial(g: &Graph) -> LayoutResult {
    let n = g.node_count();
    let dist = g.hop_distances(0);
    let max_reached = dist.iter().filter(|&&d| d != usize::MAX).max().copied().unwrap_or(0);
    // Unreachable nodes go on one extra outer shell.
    let outer_shell = if dist.contains(&usize::MAX) { max_reached + 1 } else { max_reached };
    let shells = outer_shell.max(1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); shells + 1];
    for (v, &d) in dist.iter().enumerate() {
        let shell = if d == usize::MAX { outer_shell } else { d };
        members[shell].push(v);
    }
    let mut positions = vec![(0.5, 0.5); n];
    let step = (0.5 - MARGIN) / shells as f64;
    for (shell, nodes) in members.iter().enumerate() {
        if shell == 0 || nodes.is_empty() {
            continue;
        }
        let radius = step * shell as f64;
        for (i, &v) in nodes.iter().enumerate() {
            let angle = -std::f64::consts::FRAC_PI_2
                + 2.0 * std::f64::consts::PI * i as f64 / nodes.len() as f64;
            positions[v] = on_circle((0.5, 0.5), radius, angle);
        }
    }
    LayoutResult {
        positions,
        iterations_used: 0,
        energy: 0.0,
        checkpoints: Vec::new(),
        fallback_used: false,
    }
}

/// Longest-path layering with barycenter crossing reduction.
///
/// Undirected graphs are layered along the low-id-to-high-id orientation of
/// each edge, which is acyclic by construction. A cyclic directed input
/// falls back to the spring engine with `fallback_used` set.
fn layered(g: &Graph, seed: u64) -> Result<LayoutResult> {
    let n = g.node_count();
    let arcs: Vec<(usize, usize)> = if g.directed() {
        g.edges().iter().map(|e| (e.u, e.v)).collect()
    } else {
        g.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect()
    };

    // Kahn layering; cycle detection happens here.
    let mut indegree = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(u, v) in &arcs {
        indegree[v] += 1;
        out[u].push(v);
    }
    let mut layer_of = vec![0usize; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut placed = 0usize;
    while let Some(u) = queue.pop_front() {
        placed += 1;
        for &v in &out[u] {
            layer_of[v] = layer_of[v].max(layer_of[u] + 1);
            indegree[v] -= 1;
            if indegree[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    if placed != n {
        let mut fallback = spring(g, seed, SPRING_ITERATIONS);
        fallback.fallback_used = true;
        return Ok(fallback);
    }

    let layer_count = layer_of.iter().max().copied().unwrap_or(0) + 1;
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); layer_count];
    for v in 0..n {
        layers[layer_of[v]].push(v);
    }
    for layer in &mut layers {
        layer.sort_unstable();
    }

    // Neighbor lists across adjacent layers, undirected view.
    let mut linked = vec![Vec::new(); n];
    for &(u, v) in &arcs {
        linked[u].push(v);
        linked[v].push(u);
    }

    let mut order_index = vec![0usize; n];
    let rebuild_index = |layers: &Vec<Vec<usize>>, order_index: &mut Vec<usize>| {
        for layer in layers {
            for (i, &v) in layer.iter().enumerate() {
                order_index[v] = i;
            }
        }
    };
    rebuild_index(&layers, &mut order_index);

    // Four alternating barycenter sweeps with id tie-breaking.
    for sweep in 0..4 {
        let down = sweep % 2 == 0;
        let indices: Vec<usize> = if down {
            (1..layer_count).collect()
        } else {
            (0..layer_count.saturating_sub(1)).rev().collect()
        };
        for li in indices {
            let reference: i64 = if down { li as i64 - 1 } else { li as i64 + 1 };
            let mut keyed: Vec<(f64, usize)> = layers[li]
                .iter()
                .map(|&v| {
                    let anchors: Vec<usize> = linked[v]
                        .iter()
                        .filter(|&&w| layer_of[w] as i64 == reference)
                        .map(|&w| order_index[w])
                        .collect();
                    let barycenter = if anchors.is_empty() {
                        order_index[v] as f64
                    } else {
                        anchors.iter().sum::<usize>() as f64 / anchors.len() as f64
                    };
                    (barycenter, v)
                })
                .collect();
            keyed.sort_by(|a, b| a.partial_cmp(b).expect("finite barycenters"));
            layers[li] = keyed.into_iter().map(|(_, v)| v).collect();
            rebuild_index(&layers, &mut order_index);
        }
    }

    let span = 1.0 - 2.0 * MARGIN;
    let mut positions = vec![(0.5, 0.5); n];
    for (li, layer) in layers.iter().enumerate() {
        let y = if layer_count == 1 {
            0.5
        } else {
            MARGIN + span * li as f64 / (layer_count - 1) as f64
        };
        for (i, &v) in layer.iter().enumerate() {
            let x = MARGIN + span * (i as f64 + 0.5) / layer.len() as f64;
            positions[v] = (x, y);
        }
    }
    Ok(LayoutResult {
        positions,
        iterations_used: 0,
        energy: 0.0,
        checkpoints: Vec::new(),
        fallback_used: false,
    })
}

fn scatter(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = seeding::rng(seeding::mix(seed, &[seeding::tag("scatter")]));
    (0..n)
        .map(|_| {
            (
                MARGIN + rng.gen::<f64>() * (1.0 - 2.0 * MARGIN),
                MARGIN + rng.gen::<f64>() * (1.0 - 2.0 * MARGIN),
            )
        })
        .collect()
}

/// Deterministic unit direction for coincident points.
fn separation_direction(i: usize, j: usize) -> (f64, f64) {
    let angle = seeding::mix(i as u64, &[j as u64]) as f64 / u64::MAX as f64
        * 2.0
        * std::f64::consts::PI;
    (angle.cos(), angle.sin())
}

fn spring_energy(g: &Graph, positions: &[(f64, f64)], k: f64) -> f64 {
    let n = positions.len();
    let mut energy = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let dx = positions[i].0 - positions[j].0;
            let dy = positions[i].1 - positions[j].1;
            let d = (dx * dx + dy * dy).sqrt().max(1e-9);
            energy -= k * k * d.ln();
        }
    }
    for e in g.edges() {
        let dx = positions[e.u].0 - positions[e.v].0;
        let dy = positions[e.u].1 - positions[e.v].1;
        let d = (dx * dx + dy * dy).sqrt();
        energy += d * d * d / (3.0 * k);
    }
    energy
}

fn spring_step(g: &Graph, positions: &mut [(f64, f64)], k: f64, temperature: f64) {
    let n = positions.len();
    let mut disp = vec![(0.0f64, 0.0f64); n];
    for i in 0..n {
        for j in i + 1..n {
            let dx = positions[i].0 - positions[j].0;
            let dy = positions[i].1 - positions[j].1;
            let d = (dx * dx + dy * dy).sqrt();
            let (ux, uy) = if d < 1e-9 { separation_direction(i, j) } else { (dx / d, dy / d) };
            let force = k * k / d.max(1e-9);
            disp[i].0 += ux * force;
            disp[i].1 += uy * force;
            disp[j].0 -= ux * force;
            disp[j].1 -= uy * force;
        }
    }
    for e in g.edges() {
        let dx = positions[e.u].0 - positions[e.v].0;
        let dy = positions[e.u].1 - positions[e.v].1;
        let d = (dx * dx + dy * dy).sqrt();
        let (ux, uy) = if d < 1e-9 {
            separation_direction(e.u, e.v)
        } else {
            (dx / d, dy / d)
        };
        let force = d * d / k;
        disp[e.u].0 -= ux * force;
        disp[e.u].1 -= uy * force;
        disp[e.v].0 += ux * force;
        disp[e.v].1 += uy * force;
    }
    for (pos, d) in positions.iter_mut().zip(&disp) {
        let len = (d.0 * d.0 + d.1 * d.1).sqrt();
        if len > 1e-12 {
            let capped = len.min(temperature);
            pos.0 = clamp_unit(pos.0 + d.0 / len * capped);
            pos.1 = clamp_unit(pos.1 + d.1 / len * capped);
        }
    }
}

/// Fruchterman–Reingold with a fixed linear cooling schedule. Keeps the
/// best-energy configuration at each checkpoint.
fn spring(g: &Graph, seed: u64, iterations: usize) -> LayoutResult {
    let n = g.node_count();
    let k = (1.0 / n as f64).sqrt();
    let mut positions = scatter(n, seed);
    let mut best = positions.clone();
    let mut best_energy = spring_energy(g, &positions, k);
    let mut checkpoints = vec![best_energy];
    let t0 = 0.1;
    for i in 0..iterations {
        let temperature = t0 * (1.0 - i as f64 / iterations as f64);
        spring_step(g, &mut positions, k, temperature);
        if (i + 1) % SPRING_CHECKPOINT == 0 || i + 1 == iterations {
            let energy = spring_energy(g, &positions, k);
            if energy <= best_energy {
                best_energy = energy;
                best = positions.clone();
            } else {
                positions = best.clone();
            }
            checkpoints.push(best_energy);
        }
    }
    LayoutResult {
        positions: best,
        iterations_used: iterations,
        energy: best_energy,
        checkpoints,
        fallback_used: false,
    }
}

fn bfs_distance_matrix(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.node_count()).map(|v| g.hop_distances(v)).collect()
}

fn stress_value(targets: &[Vec<(f64, f64)>], positions: &[(f64, f64)]) -> f64 {
    let n = positions.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let (delta, weight) = targets[i][j];
            if weight == 0.0 {
                continue;
            }
            let dx = positions[i].0 - positions[j].0;
            let dy = positions[i].1 - positions[j].1;
            let d = (dx * dx + dy * dy).sqrt();
            total += weight * (d - delta) * (d - delta);
        }
    }
    total
}

/// Stress majorization (SMACOF) over BFS graph distances.
fn stress(g: &Graph, seed: u64) -> LayoutResult {
    let n = g.node_count();
    let dist = bfs_distance_matrix(g);
    let finite_max = dist
        .iter()
        .flatten()
        .filter(|&&d| d != usize::MAX && d > 0)
        .max()
        .copied()
        .unwrap_or(1);
    // Disconnected pairs get diameter + 1 as their ideal separation.
    let scale = (finite_max + 1) as f64;
    let mut targets = vec![vec![(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = if dist[i][j] == usize::MAX { finite_max + 1 } else { dist[i][j] };
            let delta = d as f64 / scale * (1.0 - 2.0 * MARGIN);
            targets[i][j] = (delta, 1.0 / (delta * delta));
        }
    }
    let mut positions = scatter(n, seed);
    let mut best = positions.clone();
    let mut best_energy = stress_value(&targets, &positions);
    let mut checkpoints = vec![best_energy];
    for iter in 0..STRESS_ITERATIONS {
        let snapshot = positions.clone();
        for i in 0..n {
            let mut sum_weight = 0.0;
            let mut acc = (0.0f64, 0.0f64);
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (delta, weight) = targets[i][j];
                let dx = snapshot[i].0 - snapshot[j].0;
                let dy = snapshot[i].1 - snapshot[j].1;
                let d = (dx * dx + dy * dy).sqrt();
                let (ux, uy) = if d < 1e-9 {
                    separation_direction(i, j)
                } else {
                    (dx / d, dy / d)
                };
                acc.0 += weight * (snapshot[j].0 + delta * ux);
                acc.1 += weight * (snapshot[j].1 + delta * uy);
                sum_weight += weight;
            }
            if sum_weight > 0.0 {
                positions[i] = (acc.0 / sum_weight, acc.1 / sum_weight);
            }
        }
        if (iter + 1) % STRESS_CHECKPOINT == 0 || iter + 1 == STRESS_ITERATIONS {
            let energy = stress_value(&targets, &positions);
            if energy <= best_energy {
                best_energy = energy;
                best = positions.clone();
            } else {
                positions = best.clone();
            }
            checkpoints.push(best_energy);
        }
    }
    // Fit the final arrangement into the unit box margins.
    let fitted = fit_to_margins(&best);
    LayoutResult {
        positions: fitted,
        iterations_used: STRESS_ITERATIONS,
        energy: best_energy,
        checkpoints,
        fallback_used: false,
    }
}

fn fit_to_margins(positions: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (mut min_x, mut max_x) = (f64::MAX, f64::MIN);
    let (mut min_y, mut max_y) = (f64::MAX, f64::MIN);
    for &(x, y) in positions {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let span = 1.0 - 2.0 * MARGIN;
    positions
        .iter()
        .map(|&(x, y)| {
            let fx = if max_x - min_x < 1e-9 {
                0.5
            } else {
                MARGIN + (x - min_x) / (max_x - min_x) * span
            };
            let fy = if max_y - min_y < 1e-9 {
                0.5
            } else {
                MARGIN + (y - min_y) / (max_y - min_y) * span
            };
            (fx, fy)
        })
        .collect()
}

/// Undirected canonical edge set: each pair once, sorted, no orientation
/// duplicates.
fn undirected_edge_set(g: &Graph) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| (e.u.min(e.v), e.u.max(e.v)))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Graph coarsening by greedy matching plus spring refinement per level.
fn multilevel(g: &Graph, seed: u64) -> LayoutResult {
    // Coarsen: repeatedly merge matched neighbor pairs (smallest id first).
    struct Level {
        /// Mapping from fine node to coarse node.
        merge_into: Vec<usize>,
        fine_nodes: usize,
    }
    let mut levels: Vec<Level> = Vec::new();
    let mut current_edges = undirected_edge_set(g);
    let mut current_n = g.node_count();
    while current_n > 8 && levels.len() < 10 {
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); current_n];
        for &(u, v) in &current_edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let mut matched = vec![usize::MAX; current_n];
        for u in 0..current_n {
            if matched[u] != usize::MAX {
                continue;
            }
            if let Some(&v) = adjacency[u].iter().find(|&&v| matched[v] == usize::MAX && v != u) {
                matched[u] = v;
                matched[v] = u;
            }
        }
        let mut merge_into = vec![usize::MAX; current_n];
        let mut next = 0usize;
        for u in 0..current_n {
            if merge_into[u] != usize::MAX {
                continue;
            }
            merge_into[u] = next;
            if matched[u] != usize::MAX && matched[u] > u {
                merge_into[matched[u]] = next;
            }
            next += 1;
        }
        if next == current_n {
            break; // no progress
        }
        let mut coarse_edges: Vec<(usize, usize)> = current_edges
            .iter()
            .map(|&(u, v)| (merge_into[u].min(merge_into[v]), merge_into[u].max(merge_into[v])))
            .filter(|&(u, v)| u != v)
            .collect();
        coarse_edges.sort_unstable();
        coarse_edges.dedup();
        levels.push(Level { merge_into, fine_nodes: current_n });
        current_n = next;
        current_edges = coarse_edges;
    }

    // Lay out the coarsest level, then expand back down with refinement.
    let coarse_graph = Graph::from_edges(false, current_n, &current_edges)
        .expect("coarse graph is simple by construction");
    let mut positions = spring(&coarse_graph, seed, SPRING_ITERATIONS).positions;
    let mut total_iterations = SPRING_ITERATIONS;
    let mut fine_edge_stack: Vec<Vec<(usize, usize)>> = Vec::new();
    {
        // Rebuild each level's edge list for refinement, coarsest-first.
        let mut edges_now = undirected_edge_set(g);
        for level in &levels {
            fine_edge_stack.push(edges_now.clone());
            let mut coarse: Vec<(usize, usize)> = edges_now
                .iter()
                .map(|&(u, v)| {
                    (
                        level.merge_into[u].min(level.merge_into[v]),
                        level.merge_into[u].max(level.merge_into[v]),
                    )
                })
                .filter(|&(u, v)| u != v)
                .collect();
            coarse.sort_unstable();
            coarse.dedup();
            edges_now = coarse;
        }
    }
    for (level, fine_edges) in levels.iter().rev().zip(fine_edge_stack.iter().rev()) {
        let mut expanded = vec![(0.5, 0.5); level.fine_nodes];
        for (fine, &coarse) in level.merge_into.iter().enumerate() {
            let (dx, dy) = separation_direction(fine, coarse);
            expanded[fine] = (
                clamp_unit(positions[coarse].0 + dx * 0.01),
                clamp_unit(positions[coarse].1 + dy * 0.01),
            );
        }
        let fine_graph = Graph::from_edges(false, level.fine_nodes, fine_edges)
            .expect("level graph is simple by construction");
        let refined = refine_spring(&fine_graph, expanded, 60);
        positions = refined;
        total_iterations += 60;
    }

    let k = (1.0 / g.node_count() as f64).sqrt();
    let undirected = Graph::from_edges(false, g.node_count(), &undirected_edge_set(g))
        .expect("canonical edge set is simple");
    let energy = spring_energy(&undirected, &positions, k);
    LayoutResult {
        positions,
        iterations_used: total_iterations,
        energy,
        checkpoints: Vec::new(),
        fallback_used: false,
    }
}

fn refine_spring(g: &Graph, start: Vec<(f64, f64)>, iterations: usize) -> Vec<(f64, f64)> {
    let n = g.node_count();
    let k = (1.0 / n as f64).sqrt();
    let mut positions = start;
    let t0 = 0.05;
    for i in 0..iterations {
        let temperature = t0 * (1.0 - i as f64 / iterations as f64);
        spring_step(g, &mut positions, k, temperature);
    }
    positions
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Graph {
        Graph::from_edges(false, 4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn single_node_is_centered() {
        let g = Graph::from_edges(false, 1, &[]).unwrap();
        for kind in LayoutKind::ALL {
            let result = layout(&g, kind, 3).unwrap();
            assert_eq!(result.positions, vec![(0.5, 0.5)], "{}", kind.slug());
        }
    }

    #[test]
    fn circular_places_four_nodes_at_right_angles() {
        let result = layout(&square(), LayoutKind::Circular, 0).unwrap();
        let center = (0.5, 0.5);
        let radius = 0.5 - MARGIN;
        for (i, &(x, y)) in result.positions.iter().enumerate() {
            let r = ((x - center.0).powi(2) + (y - center.1).powi(2)).sqrt();
            assert!((r - radius).abs() < 1e-9, "node {i} radius {r}");
        }
        // Consecutive nodes subtend 90 degrees.
        let angle = |p: (f64, f64)| (p.1 - 0.5).atan2(p.0 - 0.5);
        let mut diff = angle(result.positions[1]) - angle(result.positions[0]);
        if diff < 0.0 {
            diff += 2.0 * std::f64::consts::PI;
        }
        assert!((diff - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn all_engines_stay_inside_margins() {
        let g = Graph::from_edges(false, 9, &[(0, 1), (1, 2), (2, 3), (4, 5), (6, 7)]).unwrap();
        for kind in LayoutKind::ALL {
            let result = layout(&g, kind, 11).unwrap();
            for &(x, y) in &result.positions {
                assert!(x.is_finite() && y.is_finite());
                assert!((MARGIN - 1e-9..=1.0 - MARGIN + 1e-9).contains(&x), "{}", kind.slug());
                assert!((MARGIN - 1e-9..=1.0 - MARGIN + 1e-9).contains(&y), "{}", kind.slug());
            }
        }
    }

    #[test]
    fn spring_is_deterministic() {
        let a = layout(&square(), LayoutKind::Spring, 42).unwrap();
        let b = layout(&square(), LayoutKind::Spring, 42).unwrap();
        assert_eq!(a.positions, b.positions);
        let c = layout(&square(), LayoutKind::Spring, 43).unwrap();
        assert_ne!(a.positions, c.positions);
    }

    #[test]
    fn spring_and_stress_checkpoints_are_monotone() {
        let g = Graph::from_edges(false, 10, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (6, 7), (7, 8)]).unwrap();
        for kind in [LayoutKind::Spring, LayoutKind::Stress] {
            let result = layout(&g, kind, 5).unwrap();
            assert!(!result.checkpoints.is_empty());
            for pair in result.checkpoints.windows(2) {
                assert!(pair[1] <= pair[0], "{}: {:?}", kind.slug(), result.checkpoints);
            }
            assert!(result.energy <= result.checkpoints[0]);
        }
    }

    #[test]
    fn layered_respects_direction() {
        let g = Graph::from_edges(true, 4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let result = layout(&g, LayoutKind::Layered, 0).unwrap();
        assert!(!result.fallback_used);
        assert!(result.positions[0].1 < result.positions[1].1);
        assert!(result.positions[1].1 < result.positions[3].1);
    }

    #[test]
    fn layered_orients_undirected_edges_low_to_high() {
        let g = Graph::from_edges(false, 3, &[(2, 0), (1, 2)]).unwrap();
        let result = layout(&g, LayoutKind::Layered, 0).unwrap();
        assert!(!result.fallback_used);
        // Edges layer as 0->2 and 1->2, so node 2 sits below both.
        assert!(result.positions[0].1 < result.positions[2].1);
        assert!(result.positions[1].1 < result.positions[2].1);
    }

    #[test]
    fn spring_and_stress_monotone_over_random_inputs() {
        for seed in 0..20u64 {
            let mut rng = crate::seeding::rng(seed);
            let n = rand::Rng::gen_range(&mut rng, 2..=14);
            let mut pairs = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rand::Rng::gen_bool(&mut rng, 0.3) {
                        pairs.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(false, n, &pairs).unwrap();
            for kind in [LayoutKind::Spring, LayoutKind::Stress] {
                let result = layout(&g, kind, seed).unwrap();
                for pair in result.checkpoints.windows(2) {
                    assert!(pair[1] <= pair[0], "{} seed {seed}", kind.slug());
                }
            }
        }
    }

    #[test]
    fn layered_falls_back_on_cycles() {
        let g = Graph::from_edges(true, 3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let result = layout(&g, LayoutKind::Layered, 9).unwrap();
        assert!(result.fallback_used);
        let spring = layout(&g, LayoutKind::Spring, 9).unwrap();
        assert_eq!(result.positions, spring.positions);
    }

    #[test]
    fn radial_rings_grow_with_distance() {
        let g = Graph::from_edges(false, 5, &[(0, 1), (0, 2), (1, 3), (3, 4)]).unwrap();
        let result = layout(&g, LayoutKind::Radial, 0).unwrap();
        let r = |v: usize| {
            let (x, y) = result.positions[v];
            ((x - 0.5f64).powi(2) + (y - 0.5f64).powi(2)).sqrt()
        };
        assert!(r(0) < 1e-9);
        assert!(r(1) < r(3));
        assert!(r(3) < r(4));
    }
}
