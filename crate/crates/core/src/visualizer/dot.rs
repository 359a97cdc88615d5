//! DOT-language export mirroring the styled graph, for rendering with
//! external engines.

use crate::graph::Graph;

use super::{BasicStyles, GraphStyles, NodeShape, NodeOutline};

fn dot_shape(shape: NodeShape) -> &'static str {
    match shape {
        NodeShape::Ellipse => "ellipse",
        NodeShape::Circle => "circle",
        NodeShape::Box => "box",
    }
}

fn dot_style(outline: NodeOutline) -> &'static str {
    match outline {
        NodeOutline::Solid => "solid",
        NodeOutline::Dashed => "dashed",
        NodeOutline::Dotted => "dotted",
        NodeOutline::Bold => "bold",
    }
}

/// Render the graph as DOT text with node `shape`/`style` and edge
/// `penwidth` attributes mirroring the visual styles.
pub fn export(g: &Graph, gamma: &BasicStyles, delta: &GraphStyles) -> String {
    let mut out = String::new();
    out.push_str(if g.directed() { "digraph G {\n" } else { "graph G {\n" });
    out.push_str(&format!(
        "  node [shape={}, style={}];\n",
        dot_shape(delta.node_shape),
        dot_style(delta.node_outline)
    ));
    for v in 0..g.node_count() {
        match g.node_attrs().get(&v) {
            Some(attr) => {
                let color = gamma
                    .class_colors
                    .as_ref()
                    .and_then(|colors| colors.get(attr))
                    .cloned();
                match color {
                    Some(c) => out.push_str(&format!(
                        "  {v} [label=\"{v}\", fillcolor=\"{c}\", style=filled];\n"
                    )),
                    None => out.push_str(&format!("  {v} [label=\"{v}\"];\n")),
                }
            }
            None => out.push_str(&format!("  {v};\n")),
        }
    }
    let arrow = if g.directed() { "->" } else { "--" };
    for e in g.edges() {
        match e.weight {
            Some(w) => out.push_str(&format!(
                "  {} {arrow} {} [penwidth={}, label=\"{w}\"];\n",
                e.u,
                e.v,
                delta.edge_thickness.points()
            )),
            None => out.push_str(&format!(
                "  {} {arrow} {} [penwidth={}];\n",
                e.u,
                e.v,
                delta.edge_thickness.points()
            )),
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::visualizer::{BasicStyles, GraphStyles};

    #[test]
    fn dot_mirrors_direction_and_weights() {
        let g = Graph::from_weighted_edges(true, 2, &[(0, 1, 7)]).unwrap();
        let text = export(&g, &BasicStyles::default(), &GraphStyles::default());
        assert!(text.starts_with("digraph G {"));
        assert!(text.contains("0 -> 1 [penwidth=1, label=\"7\"];"));
        let u = Graph::from_edges(false, 2, &[(0, 1)]).unwrap();
        let text = export(&u, &BasicStyles::default(), &GraphStyles::default());
        assert!(text.starts_with("graph G {"));
        assert!(text.contains("0 -- 1"));
    }
}
