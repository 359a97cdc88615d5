//! Deterministic rendering of graphs to SVG under fixed basic styles and
//! customizable graph-related styles, with the four augmentation axes.

pub mod dot;
pub mod layout;
pub mod svg;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;

pub use layout::{layout as run_layout, LayoutKind, LayoutResult, MARGIN};
pub use svg::{parse_elements, topology_counts, SvgElement, CLASS_PALETTE, TARGET_STROKE};

/// Basic image styles, fixed per dataset build.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicStyles {
    pub canvas_width: u32,
    pub canvas_height: u32,
    pub resolution_dpi: u32,
    pub backdrop: String,
    /// Stable class-label to fill-color assignment for attributed nodes,
    /// shared by every record of a build. When absent, a per-graph
    /// assignment over [`CLASS_PALETTE`] is derived.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_colors: Option<BTreeMap<String, String>>,
}

impl Default for BasicStyles {
    fn default() -> Self {
        BasicStyles {
            canvas_width: 1024,
            canvas_height: 1024,
            resolution_dpi: 96,
            backdrop: "#ffffff".to_string(),
            class_colors: None,
        }
    }
}

/// Node glyph shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeShape {
    Ellipse,
    Circle,
    Box,
}

impl NodeShape {
    pub const ALL: [NodeShape; 3] = [NodeShape::Ellipse, NodeShape::Circle, NodeShape::Box];

    pub fn slug(self) -> &'static str {
        match self {
            NodeShape::Ellipse => "ellipse",
            NodeShape::Circle => "circle",
            NodeShape::Box => "box",
        }
    }

    pub fn from_slug(slug: &str) -> Option<NodeShape> {
        NodeShape::ALL.into_iter().find(|s| s.slug() == slug)
    }
}

/// Node outline styles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeOutline {
    Solid,
    Dashed,
    Dotted,
    Bold,
}

impl NodeOutline {
    pub const ALL: [NodeOutline; 4] = [
        NodeOutline::Solid,
        NodeOutline::Dashed,
        NodeOutline::Dotted,
        NodeOutline::Bold,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            NodeOutline::Solid => "solid",
            NodeOutline::Dashed => "dashed",
            NodeOutline::Dotted => "dotted",
            NodeOutline::Bold => "bold",
        }
    }

    pub fn from_slug(slug: &str) -> Option<NodeOutline> {
        NodeOutline::ALL.into_iter().find(|s| s.slug() == slug)
    }

    /// Stroke width and dash pattern for node glyph strokes.
    pub fn stroke_style(self) -> (f64, Option<&'static str>) {
        match self {
            NodeOutline::Solid => (1.5, None),
            NodeOutline::Dashed => (1.5, Some("6,3")),
            NodeOutline::Dotted => (1.5, Some("1.5,3")),
            NodeOutline::Bold => (3.0, None),
        }
    }
}

/// The four edge stroke widths, in points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeThickness {
    W1,
    W2,
    W3,
    W4,
}

impl EdgeThickness {
    pub const ALL: [EdgeThickness; 4] = [
        EdgeThickness::W1,
        EdgeThickness::W2,
        EdgeThickness::W3,
        EdgeThickness::W4,
    ];

    pub fn points(self) -> f64 {
        match self {
            EdgeThickness::W1 => 1.0,
            EdgeThickness::W2 => 2.0,
            EdgeThickness::W3 => 3.0,
            EdgeThickness::W4 => 4.0,
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            EdgeThickness::W1 => "w1",
            EdgeThickness::W2 => "w2",
            EdgeThickness::W3 => "w3",
            EdgeThickness::W4 => "w4",
        }
    }

    pub fn from_slug(slug: &str) -> Option<EdgeThickness> {
        EdgeThickness::ALL.into_iter().find(|s| s.slug() == slug)
    }
}

/// Customizable graph-related styles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStyles {
    pub layout: LayoutKind,
    pub node_shape: NodeShape,
    pub node_outline: NodeOutline,
    pub edge_thickness: EdgeThickness,
}

impl Default for GraphStyles {
    fn default() -> Self {
        GraphStyles {
            layout: LayoutKind::Layered,
            node_shape: NodeShape::Ellipse,
            node_outline: NodeOutline::Solid,
            edge_thickness: EdgeThickness::W1,
        }
    }
}

/// The four augmentation axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmentAxis {
    Layout,
    NodeShape,
    NodeOutline,
    EdgeThickness,
}

impl AugmentAxis {
    pub const ALL: [AugmentAxis; 4] = [
        AugmentAxis::Layout,
        AugmentAxis::NodeShape,
        AugmentAxis::NodeOutline,
        AugmentAxis::EdgeThickness,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            AugmentAxis::Layout => "layout",
            AugmentAxis::NodeShape => "node_shape",
            AugmentAxis::NodeOutline => "node_outline",
            AugmentAxis::EdgeThickness => "edge_thickness",
        }
    }

    pub fn from_slug(slug: &str) -> Option<AugmentAxis> {
        AugmentAxis::ALL.into_iter().find(|s| s.slug() == slug)
    }

    /// Number of variants along this axis.
    pub fn variant_count(self) -> usize {
        match self {
            AugmentAxis::Layout => LayoutKind::ALL.len(),
            AugmentAxis::NodeShape => NodeShape::ALL.len(),
            AugmentAxis::NodeOutline => NodeOutline::ALL.len(),
            AugmentAxis::EdgeThickness => EdgeThickness::ALL.len(),
        }
    }

    /// Variant slugs along this axis, in augmentation order.
    pub fn variant_slugs(self) -> Vec<&'static str> {
        match self {
            AugmentAxis::Layout => LayoutKind::ALL.iter().map(|k| k.slug()).collect(),
            AugmentAxis::NodeShape => NodeShape::ALL.iter().map(|s| s.slug()).collect(),
            AugmentAxis::NodeOutline => NodeOutline::ALL.iter().map(|s| s.slug()).collect(),
            AugmentAxis::EdgeThickness => EdgeThickness::ALL.iter().map(|s| s.slug()).collect(),
        }
    }

    /// Apply the axis variant at `index` to a base style.
    pub fn apply(self, base: GraphStyles, index: usize) -> GraphStyles {
        let mut delta = base;
        match self {
            AugmentAxis::Layout => delta.layout = LayoutKind::ALL[index],
            AugmentAxis::NodeShape => delta.node_shape = NodeShape::ALL[index],
            AugmentAxis::NodeOutline => delta.node_outline = NodeOutline::ALL[index],
            AugmentAxis::EdgeThickness => delta.edge_thickness = EdgeThickness::ALL[index],
        }
        delta
    }
}

/// Per-render node emphasis, outside the augmentation axes: candidate pairs
/// get a double outline, classification targets a distinct stroke color.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeMarks {
    pub highlight: Vec<usize>,
    pub target: Option<usize>,
}

/// A rendered image with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct VisualGraph {
    pub svg_bytes: Vec<u8>,
    pub gamma: BasicStyles,
    pub delta: GraphStyles,
    pub layout_seed: u64,
    pub source_hash: String,
    pub layout: LayoutResult,
}

/// Render a graph to SVG. Byte-identical output for identical inputs.
pub fn render(g: &Graph, gamma: &BasicStyles, delta: &GraphStyles, seed: u64) -> Result<VisualGraph> {
    render_with_marks(g, gamma, delta, seed, &NodeMarks::default())
}

/// Render with node emphasis marks.
pub fn render_with_marks(
    g: &Graph,
    gamma: &BasicStyles,
    delta: &GraphStyles,
    seed: u64,
    marks: &NodeMarks,
) -> Result<VisualGraph> {
    let layout = layout::layout(g, delta.layout, seed)?;
    let text = svg::emit(g, gamma, delta, &layout, marks);
    Ok(VisualGraph {
        svg_bytes: text.into_bytes(),
        gamma: gamma.clone(),
        delta: *delta,
        layout_seed: seed,
        source_hash: g.content_hash(),
        layout,
    })
}

/// Render one variant per enum value of the chosen axis, all other style
/// fields held at `base`.
pub fn augment(
    g: &Graph,
    gamma: &BasicStyles,
    base: &GraphStyles,
    axis: AugmentAxis,
    seed: u64,
) -> Result<Vec<VisualGraph>> {
    (0..axis.variant_count())
        .map(|index| render(g, gamma, &axis.apply(*base, index), seed))
        .collect()
}
