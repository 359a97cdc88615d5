//! Task-agnostic textual graph descriptions.
//!
//! Eight fixed templates cover {undirected, directed} x {plain, node
//! attributes, edge weights, both}. The emitted byte layout is frozen:
//! exact-match datasets depend on it, and `parse_description` recovers the
//! original graph from any emitted text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Which template family a graph falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateCategory {
    UndirectedPlain,
    DirectedPlain,
    UndirectedNodeAttrs,
    DirectedNodeAttrs,
    UndirectedEdgeWeights,
    DirectedEdgeWeights,
    UndirectedBoth,
    DirectedBoth,
}

impl TemplateCategory {
    pub const ALL: [TemplateCategory; 8] = [
        TemplateCategory::UndirectedPlain,
        TemplateCategory::DirectedPlain,
        TemplateCategory::UndirectedNodeAttrs,
        TemplateCategory::DirectedNodeAttrs,
        TemplateCategory::UndirectedEdgeWeights,
        TemplateCategory::DirectedEdgeWeights,
        TemplateCategory::UndirectedBoth,
        TemplateCategory::DirectedBoth,
    ];
}

/// A description template: its category and placeholder skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescribeTemplate {
    pub category: TemplateCategory,
    pub body: &'static str,
}

/// Template skeletons. `[P]` marks a placeholder, `...` a repeated group.
pub const TEMPLATE_UNDIRECTED_PLAIN: &str = "In an undirected graph, (i,j) means that node i and node j are connected with an undirected edge. The nodes are numbered from [P] to [P], and the edges are: ([P], [P]) , ([P], [P])...";
pub const TEMPLATE_DIRECTED_PLAIN: &str = "In a directed graph, (i,j) means that node i and node j are connected with a directed edge from node i to node j. The nodes are numbered from [P] to [P], and the edges are: ([P], [P]) , ([P], [P])...";
pub const TEMPLATE_UNDIRECTED_NODE_ATTRS: &str = "In an undirected graph, the nodes are numbered from [P] to [P], and every node has an attribute. (i,j) means that node i and node j are connected with an undirected edge.\nThe attributes of nodes are:\nnode [P]: [P]\n...\nThe edges are: ([P],[P]) ([P],[P]) ...";
pub const TEMPLATE_DIRECTED_NODE_ATTRS: &str = "In a directed graph, the nodes are numbered from [P] to [P], and every node has an attribute. (i,j) means that node i and node j are connected with a directed edge from node i to node j.\nThe attributes of nodes are:\nnode [P]: [P]\n...\nThe edges are: ([P],[P]) ([P],[P]) ...";
pub const TEMPLATE_UNDIRECTED_EDGE_WEIGHTS: &str = "In an undirected graph, the nodes are numbered from [P] to [P], and the edges are:\nan edge between node [P] and node [P] with weight [P],\nan edge between node [P] and node [P] with weight [P],\n...";
pub const TEMPLATE_DIRECTED_EDGE_WEIGHTS: &str = "In a directed graph, the nodes are numbered from [P] to [P], and the edges are:\nan edge from node [P] to node [P] with weight [P],\nan edge from node [P] to node [P] with weight [P],\n...";
pub const TEMPLATE_UNDIRECTED_BOTH: &str = "In an undirected graph, the nodes are numbered from [P] to [P], and every node has an attribute.\nThe attributes of nodes are:\nnode [P]: [P]\n...\nAnd the edges are:\nan edge between node [P] and node [P] with weight [P],\n...";
pub const TEMPLATE_DIRECTED_BOTH: &str = "In a directed graph, the nodes are numbered from [P] to [P], and every node has an attribute.\nThe attributes of nodes are:\nnode [P]: [P]\n...\nAnd the edges are:\nan edge from node [P] to node [P] with weight [P],\n...";

/// A filled-in description together with the template that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDescription {
    pub text: String,
    pub template_used: TemplateCategory,
}

/// Choose the template matching a graph's directedness, weights, and
/// attributes.
pub fn select_template(g: &Graph) -> DescribeTemplate {
    let category = match (g.directed(), g.node_attrs().is_empty(), g.is_weighted()) {
        (false, true, false) => TemplateCategory::UndirectedPlain,
        (true, true, false) => TemplateCategory::DirectedPlain,
        (false, false, false) => TemplateCategory::UndirectedNodeAttrs,
        (true, false, false) => TemplateCategory::DirectedNodeAttrs,
        (false, true, true) => TemplateCategory::UndirectedEdgeWeights,
        (true, true, true) => TemplateCategory::DirectedEdgeWeights,
        (false, false, true) => TemplateCategory::UndirectedBoth,
        (true, false, true) => TemplateCategory::DirectedBoth,
    };
    template_for(category)
}

pub fn template_for(category: TemplateCategory) -> DescribeTemplate {
    let body = match category {
        TemplateCategory::UndirectedPlain => TEMPLATE_UNDIRECTED_PLAIN,
        TemplateCategory::DirectedPlain => TEMPLATE_DIRECTED_PLAIN,
        TemplateCategory::UndirectedNodeAttrs => TEMPLATE_UNDIRECTED_NODE_ATTRS,
        TemplateCategory::DirectedNodeAttrs => TEMPLATE_DIRECTED_NODE_ATTRS,
        TemplateCategory::UndirectedEdgeWeights => TEMPLATE_UNDIRECTED_EDGE_WEIGHTS,
        TemplateCategory::DirectedEdgeWeights => TEMPLATE_DIRECTED_EDGE_WEIGHTS,
        TemplateCategory::UndirectedBoth => TEMPLATE_UNDIRECTED_BOTH,
        TemplateCategory::DirectedBoth => TEMPLATE_DIRECTED_BOTH,
    };
    DescribeTemplate { category, body }
}

/// Export all template skeletons to a reviewable text file.
pub fn export_templates(path: &std::path::Path) -> Result<()> {
    let mut out = String::new();
    for category in TemplateCategory::ALL {
        let template = template_for(category);
        let _ = writeln!(out, "## {:?}", template.category);
        let _ = writeln!(out, "{}", template.body);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn attr_lines(g: &Graph) -> String {
    g.node_attrs()
        .iter()
        .map(|(node, attr)| format!("node {node}: {attr}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn plain_edge_list(g: &Graph) -> String {
    g.edges()
        .iter()
        .map(|e| format!("({}, {})", e.u, e.v))
        .collect::<Vec<_>>()
        .join(" , ")
}

fn compact_edge_list(g: &Graph) -> String {
    g.edges()
        .iter()
        .map(|e| format!("({},{})", e.u, e.v))
        .collect::<Vec<_>>()
        .join(" ")
}

fn weighted_edge_lines(g: &Graph) -> String {
    let connective = if g.directed() {
        |e: &Edge| format!("an edge from node {} to node {} with weight {},", e.u, e.v, e.weight.expect("weighted"))
    } else {
        |e: &Edge| format!("an edge between node {} and node {} with weight {},", e.u, e.v, e.weight.expect("weighted"))
    };
    g.edges().iter().map(connective).collect::<Vec<_>>().join("\n")
}

/// Fill the appropriate template with a graph's data.
///
/// Placeholders take node-id bounds ("numbered from 0 to n-1") and edge
/// tuples in input order; whitespace and punctuation are frozen.
pub fn describe(g: &Graph) -> GraphDescription {
    let template = select_template(g);
    let n = g.node_count();
    let upper = n as i64 - 1;
    let directed_intro = format!(
        "In a directed graph, (i,j) means that node i and node j are connected with a directed edge from node i to node j. The nodes are numbered from 0 to {upper}, and the edges are:"
    );
    let undirected_intro = format!(
        "In an undirected graph, (i,j) means that node i and node j are connected with an undirected edge. The nodes are numbered from 0 to {upper}, and the edges are:"
    );
    let text = match template.category {
        TemplateCategory::UndirectedPlain => {
            let edges = plain_edge_list(g);
            if edges.is_empty() {
                undirected_intro
            } else {
                format!("{undirected_intro} {edges}")
            }
        }
        TemplateCategory::DirectedPlain => {
            let edges = plain_edge_list(g);
            if edges.is_empty() {
                directed_intro
            } else {
                format!("{directed_intro} {edges}")
            }
        }
        TemplateCategory::UndirectedNodeAttrs | TemplateCategory::DirectedNodeAttrs => {
            let (article, kind_clause) = if g.directed() {
                ("a directed", "a directed edge from node i to node j")
            } else {
                ("an undirected", "an undirected edge")
            };
            let edges = compact_edge_list(g);
            let edge_part = if edges.is_empty() {
                "The edges are:".to_string()
            } else {
                format!("The edges are: {edges}")
            };
            format!(
                "In {article} graph, the nodes are numbered from 0 to {upper}, and every node has an attribute. (i,j) means that node i and node j are connected with {kind_clause}.\nThe attributes of nodes are:\n{}\n{edge_part}",
                attr_lines(g)
            )
        }
        TemplateCategory::UndirectedEdgeWeights | TemplateCategory::DirectedEdgeWeights => {
            let article = if g.directed() { "a directed" } else { "an undirected" };
            let head = format!(
                "In {article} graph, the nodes are numbered from 0 to {upper}, and the edges are:"
            );
            let lines = weighted_edge_lines(g);
            if lines.is_empty() {
                head
            } else {
                format!("{head}\n{lines}")
            }
        }
        TemplateCategory::UndirectedBoth | TemplateCategory::DirectedBoth => {
            let article = if g.directed() { "a directed" } else { "an undirected" };
            let lines = weighted_edge_lines(g);
            let edge_part = if lines.is_empty() {
                "And the edges are:".to_string()
            } else {
                format!("And the edges are:\n{lines}")
            };
            format!(
                "In {article} graph, the nodes are numbered from 0 to {upper}, and every node has an attribute.\nThe attributes of nodes are:\n{}\n{edge_part}",
                attr_lines(g)
            )
        }
    };
    GraphDescription { text, template_used: template.category }
}

/// Check that a text is an exact instantiation of the given template: the
/// template's fixed prose appears in order, the text parses back to a graph
/// of that category, and re-describing that graph reproduces the text.
pub fn matches_skeleton(text: &str, category: TemplateCategory) -> bool {
    let prose: &[&str] = match category {
        TemplateCategory::UndirectedPlain => &[
            "In an undirected graph, (i,j) means that node i and node j are connected with an undirected edge. The nodes are numbered from ",
            " to ",
            ", and the edges are:",
        ],
        TemplateCategory::DirectedPlain => &[
            "In a directed graph, (i,j) means that node i and node j are connected with a directed edge from node i to node j. The nodes are numbered from ",
            " to ",
            ", and the edges are:",
        ],
        TemplateCategory::UndirectedNodeAttrs => &[
            "In an undirected graph, the nodes are numbered from ",
            ", and every node has an attribute. (i,j) means that node i and node j are connected with an undirected edge.",
            "\nThe attributes of nodes are:\nnode ",
            "\nThe edges are:",
        ],
        TemplateCategory::DirectedNodeAttrs => &[
            "In a directed graph, the nodes are numbered from ",
            ", and every node has an attribute. (i,j) means that node i and node j are connected with a directed edge from node i to node j.",
            "\nThe attributes of nodes are:\nnode ",
            "\nThe edges are:",
        ],
        TemplateCategory::UndirectedEdgeWeights => &[
            "In an undirected graph, the nodes are numbered from ",
            ", and the edges are:",
        ],
        TemplateCategory::DirectedEdgeWeights => &[
            "In a directed graph, the nodes are numbered from ",
            ", and the edges are:",
        ],
        TemplateCategory::UndirectedBoth => &[
            "In an undirected graph, the nodes are numbered from ",
            ", and every node has an attribute.",
            "\nThe attributes of nodes are:\nnode ",
            "\nAnd the edges are:",
        ],
        TemplateCategory::DirectedBoth => &[
            "In a directed graph, the nodes are numbered from ",
            ", and every node has an attribute.",
            "\nThe attributes of nodes are:\nnode ",
            "\nAnd the edges are:",
        ],
    };
    let mut rest = text;
    for segment in prose {
        match rest.find(segment) {
            Some(at) => rest = &rest[at + segment.len()..],
            None => return false,
        }
    }
    match parse_description(text) {
        Ok(graph) => {
            let again = describe(&graph);
            again.template_used == category && again.text == text
        }
        Err(_) => false,
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn expect(&mut self, literal: &str) -> Result<()> {
        if self.rest().starts_with(literal) {
            self.pos += literal.len();
            Ok(())
        } else {
            Err(self.fail(format!("expected {literal:?}")))
        }
    }

    fn try_expect(&mut self, literal: &str) -> bool {
        if self.rest().starts_with(literal) {
            self.pos += literal.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let rest = self.rest();
        let negative = rest.starts_with('-');
        let digits_from = usize::from(negative);
        let digits = rest[digits_from..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len() - digits_from);
        if digits == 0 {
            return Err(self.fail("expected an integer"));
        }
        let end = digits_from + digits;
        let value: i64 = rest[..end]
            .parse()
            .map_err(|_| self.fail("integer out of range"))?;
        self.pos += end;
        Ok(value)
    }

    fn line_remainder(&mut self) -> &'a str {
        let rest = self.rest();
        let end = rest.find('\n').unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn at_end(&self) -> bool {
        self.pos == self.text.len()
    }
}

/// Parse a description produced by [`describe`] back into a graph.
pub fn parse_description(text: &str) -> Result<Graph> {
    let mut cur = Cursor::new(text);
    let directed = if cur.try_expect("In an undirected graph, ") {
        false
    } else if cur.try_expect("In a directed graph, ") {
        true
    } else {
        return Err(cur.fail("expected a graph description header"));
    };
    let has_attrs_header = cur.rest().starts_with("the nodes are numbered");
    let mut node_attrs = BTreeMap::new();
    let mut edges: Vec<Edge> = Vec::new();
    let upper;
    if !has_attrs_header {
        // Plain template: semantics clause first, then bounds, then tuples.
        if directed {
            cur.expect("(i,j) means that node i and node j are connected with a directed edge from node i to node j. The nodes are numbered from 0 to ")?;
        } else {
            cur.expect("(i,j) means that node i and node j are connected with an undirected edge. The nodes are numbered from 0 to ")?;
        }
        upper = cur.integer()?;
        cur.expect(", and the edges are:")?;
        if cur.try_expect(" ") {
            loop {
                cur.expect("(")?;
                let u = cur.integer()?;
                cur.expect(", ")?;
                let v = cur.integer()?;
                cur.expect(")")?;
                edges.push(Edge::new(as_node(&cur, u)?, as_node(&cur, v)?));
                if !cur.try_expect(" , ") {
                    break;
                }
            }
        }
        if !cur.at_end() {
            return Err(cur.fail("unexpected trailing text"));
        }
        return build(directed, upper, edges, node_attrs, &cur);
    }

    cur.expect("the nodes are numbered from 0 to ")?;
    upper = cur.integer()?;
    if cur.try_expect(", and every node has an attribute.") {
        let weighted = if cur.try_expect("\n") {
            true // "Both" template heads straight into the attribute block.
        } else {
            if directed {
                cur.expect(" (i,j) means that node i and node j are connected with a directed edge from node i to node j.\n")?;
            } else {
                cur.expect(" (i,j) means that node i and node j are connected with an undirected edge.\n")?;
            }
            false
        };
        cur.expect("The attributes of nodes are:\n")?;
        loop {
            cur.expect("node ")?;
            let node = cur.integer()?;
            cur.expect(": ")?;
            let attr = cur.line_remainder();
            if attr.is_empty() {
                return Err(cur.fail("empty attribute"));
            }
            node_attrs.insert(as_node(&cur, node)?, attr.to_string());
            cur.expect("\n")?;
            if !cur.rest().starts_with("node ") {
                break;
            }
        }
        if weighted {
            cur.expect("And the edges are:")?;
            parse_weighted_edges(&mut cur, directed, &mut edges)?;
        } else {
            cur.expect("The edges are:")?;
            if cur.try_expect(" ") {
                loop {
                    cur.expect("(")?;
                    let u = cur.integer()?;
                    cur.expect(",")?;
                    let v = cur.integer()?;
                    cur.expect(")")?;
                    edges.push(Edge::new(as_node(&cur, u)?, as_node(&cur, v)?));
                    if !cur.try_expect(" ") {
                        break;
                    }
                }
            }
        }
    } else {
        cur.expect(", and the edges are:")?;
        parse_weighted_edges(&mut cur, directed, &mut edges)?;
    }
    if !cur.at_end() {
        return Err(cur.fail("unexpected trailing text"));
    }
    build(directed, upper, edges, node_attrs, &cur)
}

fn parse_weighted_edges(cur: &mut Cursor, directed: bool, edges: &mut Vec<Edge>) -> Result<()> {
    while cur.try_expect("\nan edge ") {
        if directed {
            cur.expect("from node ")?;
        } else {
            cur.expect("between node ")?;
        }
        let u = cur.integer()?;
        if directed {
            cur.expect(" to node ")?;
        } else {
            cur.expect(" and node ")?;
        }
        let v = cur.integer()?;
        cur.expect(" with weight ")?;
        let w = cur.integer()?;
        cur.expect(",")?;
        if w < 1 || w > i64::from(u32::MAX) {
            return Err(cur.fail("weight out of range"));
        }
        edges.push(Edge::weighted(as_node(cur, u)?, as_node(cur, v)?, w as u32));
    }
    Ok(())
}

fn as_node(cur: &Cursor, value: i64) -> Result<usize> {
    usize::try_from(value).map_err(|_| cur.fail("negative node id"))
}

fn build(
    directed: bool,
    upper: i64,
    edges: Vec<Edge>,
    node_attrs: BTreeMap<usize, String>,
    cur: &Cursor,
) -> Result<Graph> {
    if upper < -1 {
        return Err(cur.fail("bad node bound"));
    }
    let n = (upper + 1) as usize;
    Graph::new(directed, n, edges, node_attrs)
        .map_err(|e| Error::Parse { position: cur.pos, message: e.to_string() })
}
