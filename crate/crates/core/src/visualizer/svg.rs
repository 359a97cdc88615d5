//! SVG 1.1 emission with a byte-stable layout, plus a small element scanner
//! used to check emitted images structurally.

use crate::graph::Graph;

use super::{BasicStyles, GraphStyles, NodeMarks, NodeShape};
use super::layout::LayoutResult;

/// Nominal node radius in pixels; edge endpoints are trimmed by this amount
/// for every shape so that shape augmentation never moves edge coordinates.
pub const NODE_TRIM: f64 = 18.0;

const ELLIPSE_RX: f64 = 22.0;
const ELLIPSE_RY: f64 = 16.0;
const CIRCLE_R: f64 = 18.0;
const BOX_W: f64 = 44.0;
const BOX_H: f64 = 32.0;
const MARK_GAP: f64 = 4.0;

pub const NODE_STROKE: &str = "#000000";
/// Stroke color marking the classification target node.
pub const TARGET_STROKE: &str = "#e4002b";
pub const NODE_FILL: &str = "#ffffff";
pub const EDGE_STROKE: &str = "#000000";

/// Fixed 12-color palette for class-colored nodes.
pub const CLASS_PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

fn fmt(value: f64) -> String {
    format!("{value:.2}")
}

fn escape_text(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn node_fill(g: &Graph, node: usize, gamma: &BasicStyles) -> String {
    let Some(attr) = g.node_attrs().get(&node) else {
        return NODE_FILL.to_string();
    };
    if let Some(colors) = &gamma.class_colors {
        if let Some(color) = colors.get(attr) {
            return color.clone();
        }
    }
    // No palette supplied: derive a stable per-graph assignment.
    let mut classes: Vec<&String> = g.node_attrs().values().collect();
    classes.sort();
    classes.dedup();
    let index = classes.iter().position(|c| *c == attr).unwrap_or(0);
    CLASS_PALETTE[index % CLASS_PALETTE.len()].to_string()
}

#[allow(clippy::too_many_arguments)]
fn node_glyph(
    shape: NodeShape,
    cx: f64,
    cy: f64,
    grow: f64,
    class: &str,
    id_attr: &str,
    fill: &str,
    stroke: &str,
    stroke_width: f64,
    dash: Option<&str>,
) -> String {
    let dash_attr = dash.map_or(String::new(), |d| format!(" stroke-dasharray=\"{d}\""));
    match shape {
        NodeShape::Ellipse => format!(
            "<ellipse class=\"{class}\"{id_attr} cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{}\"{dash_attr}/>",
            fmt(cx), fmt(cy), fmt(ELLIPSE_RX + grow), fmt(ELLIPSE_RY + grow), fmt(stroke_width)
        ),
        NodeShape::Circle => format!(
            "<circle class=\"{class}\"{id_attr} cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{}\"{dash_attr}/>",
            fmt(cx), fmt(cy), fmt(CIRCLE_R + grow), fmt(stroke_width)
        ),
        NodeShape::Box => format!(
            "<rect class=\"{class}\"{id_attr} x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{}\"{dash_attr}/>",
            fmt(cx - BOX_W / 2.0 - grow), fmt(cy - BOX_H / 2.0 - grow),
            fmt(BOX_W + 2.0 * grow), fmt(BOX_H + 2.0 * grow), fmt(stroke_width)
        ),
    }
}

/// Emit the SVG document for a laid-out graph.
///
/// Element order is fixed: backdrop, defs (directed only), node glyphs in
/// ascending id order (glyph, optional highlight ring, label), then edge
/// glyphs in input order (line, optional weight label).
pub fn emit(
    g: &Graph,
    gamma: &BasicStyles,
    delta: &GraphStyles,
    layout: &LayoutResult,
    marks: &NodeMarks,
) -> String {
    let width = f64::from(gamma.canvas_width);
    let height = f64::from(gamma.canvas_height);
    let pos = |v: usize| -> (f64, f64) {
        let (x, y) = layout.positions[v];
        (x * width, y * height)
    };
    let (node_stroke_width, dash) = delta.node_outline.stroke_style();
    let edge_width = delta.edge_thickness.points();

    let mut out = String::with_capacity(1024 + g.node_count() * 160 + g.edges().len() * 120);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        gamma.canvas_width, gamma.canvas_height, gamma.canvas_width, gamma.canvas_height
    ));
    out.push_str(&format!(
        "<rect class=\"backdrop\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
        gamma.canvas_width, gamma.canvas_height, gamma.backdrop
    ));
    if g.directed() {
        out.push_str("<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\" markerUnits=\"strokeWidth\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#000000\"/></marker></defs>\n");
    }

    for v in 0..g.node_count() {
        let (cx, cy) = pos(v);
        let stroke = if marks.target == Some(v) { TARGET_STROKE } else { NODE_STROKE };
        let fill = node_fill(g, v, gamma);
        out.push_str(&node_glyph(
            delta.node_shape,
            cx,
            cy,
            0.0,
            "node",
            &format!(" data-id=\"{v}\""),
            &fill,
            stroke,
            node_stroke_width,
            dash,
        ));
        out.push('\n');
        if marks.highlight.contains(&v) {
            out.push_str(&node_glyph(
                delta.node_shape,
                cx,
                cy,
                MARK_GAP,
                "node-mark",
                &format!(" data-id=\"{v}\""),
                "none",
                NODE_STROKE,
                node_stroke_width,
                dash,
            ));
            out.push('\n');
        }
        out.push_str(&format!(
            "<text class=\"node-label\" x=\"{}\" y=\"{}\" font-family=\"Helvetica\" font-size=\"14\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"#000000\">{v}</text>\n",
            fmt(cx), fmt(cy)
        ));
    }

    for (index, edge) in g.edges().iter().enumerate() {
        let (x1, y1) = pos(edge.u);
        let (x2, y2) = pos(edge.v);
        let dx = x2 - x1;
        let dy = y2 - y1;
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        // Trim both endpoints to the nominal node boundary.
        let trim = NODE_TRIM.min(len / 2.0 - 1.0).max(0.0);
        let (ax, ay) = (x1 + dx / len * trim, y1 + dy / len * trim);
        let (bx, by) = (x2 - dx / len * trim, y2 - dy / len * trim);
        let marker = if g.directed() { " marker-end=\"url(#arrow)\"" } else { "" };
        out.push_str(&format!(
            "<line class=\"edge\" data-edge=\"{index}\" data-u=\"{}\" data-v=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{EDGE_STROKE}\" stroke-width=\"{}\"{marker}/>\n",
            edge.u, edge.v, fmt(ax), fmt(ay), fmt(bx), fmt(by), fmt(edge_width)
        ));
        if let Some(w) = edge.weight {
            // Weight label at the edge midpoint, nudged off the line.
            let mx = (x1 + x2) / 2.0 + 5.0;
            let my = (y1 + y2) / 2.0 - 5.0;
            out.push_str(&format!(
                "<text class=\"edge-label\" x=\"{}\" y=\"{}\" font-family=\"Helvetica\" font-size=\"13\" text-anchor=\"middle\" fill=\"#000000\">{}</text>\n",
                fmt(mx), fmt(my), escape_text(&w.to_string())
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// One scanned SVG element: tag name and attributes in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvgElement {
    pub tag: String,
    pub attrs: Vec<(String, String)>,
}

impl SvgElement {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn class(&self) -> Option<&str> {
        self.attr("class")
    }
}

/// Scan an SVG document into its element list. Only handles the subset this
/// crate emits (no CDATA, no comments, double-quoted attributes).
pub fn parse_elements(svg: &str) -> Vec<SvgElement> {
    let mut elements = Vec::new();
    let bytes = svg.as_bytes();
    let mut i = 0usize;
    while i < bytes.len() {
        if bytes[i] != b'<' {
            i += 1;
            continue;
        }
        if svg[i..].starts_with("<?") || svg[i..].starts_with("</") {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < bytes.len() && !bytes[j].is_ascii_whitespace() && bytes[j] != b'>' && bytes[j] != b'/' {
            j += 1;
        }
        let tag = svg[i + 1..j].to_string();
        let mut attrs = Vec::new();
        while j < bytes.len() && bytes[j] != b'>' {
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            if j >= bytes.len() || bytes[j] == b'>' || bytes[j] == b'/' {
                if j < bytes.len() && bytes[j] == b'/' {
                    j += 1;
                }
                continue;
            }
            let name_start = j;
            while j < bytes.len() && bytes[j] != b'=' && !bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            let name = svg[name_start..j].to_string();
            if j < bytes.len() && bytes[j] == b'=' {
                j += 1; // '='
                if j < bytes.len() && bytes[j] == b'"' {
                    j += 1;
                    let value_start = j;
                    while j < bytes.len() && bytes[j] != b'"' {
                        j += 1;
                    }
                    attrs.push((name, svg[value_start..j].to_string()));
                    j += 1; // closing quote
                }
            }
        }
        elements.push(SvgElement { tag, attrs });
        i = j + 1;
    }
    elements
}

/// Count node and edge glyphs in an emitted SVG.
pub fn topology_counts(svg: &str) -> (usize, usize) {
    let elements = parse_elements(svg);
    let nodes = elements.iter().filter(|e| e.class() == Some("node")).count();
    let edges = elements.iter().filter(|e| e.class() == Some("edge")).count();
    (nodes, edges)
}
