//! Task-specific query construction.
//!
//! The manual path deterministically wraps a graph description with a
//! node/edge-semantics preamble, the task statement, and an output-format
//! clause. The bootstrap path asks a chat agent to synthesize the query and
//! falls back to a generic manual template when the reply is malformed.
//! Every query also carries a vision-only variant with the description block
//! removed, so the image can be the sole structural source.

use serde::{Deserialize, Serialize};

use crate::chat::{ChatMessage, ChatRequest, ModelClient};
use crate::describer::GraphDescription;
use crate::error::{Error, Result};
use crate::oracles::{TaskInstance, TaskKind, TaskParams};

/// A built query, with its vision-only variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskQuery {
    pub text: String,
    /// Task kind; `None` for bespoke agent-bootstrapped tasks.
    pub task: Option<TaskKind>,
    /// The query with the graph description removed and nothing else.
    pub vo_variant: String,
    /// The output-format clause the query ends with.
    pub answer_format_note: String,
}

/// The fixed pieces of one manual template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionTemplate {
    pub task: TaskKind,
    /// Node/edge semantics clause.
    pub preamble: &'static str,
    /// Task statement with `{u}`/`{v}`/`{s}`/`{t}`/`{target}` placeholders.
    pub responsibility: &'static str,
    /// Required answer-format clause.
    pub output_spec: &'static str,
}

/// The nine manual templates (seven synthetic tasks plus link prediction
/// and node classification).
pub const MANUAL_TEMPLATES: [QuestionTemplate; 9] = [
    QuestionTemplate {
        task: TaskKind::Connect,
        preamble: "The following is an undirected graph. Nodes represent points and edges represent connections between points.",
        responsibility: "Determine whether node {u} and node {v} are connected by a path.",
        output_spec: "Answer with exactly \"Yes.\" if they are connected, or \"No.\" if they are not.",
    },
    QuestionTemplate {
        task: TaskKind::Cycle,
        preamble: "The following is an undirected graph. Nodes represent points and edges represent connections between points.",
        responsibility: "Determine whether the graph contains a cycle.",
        output_spec: "Answer with exactly \"Yes.\" if the graph contains a cycle, or \"No.\" if it does not.",
    },
    QuestionTemplate {
        task: TaskKind::Ts,
        preamble: "The following is a directed graph. Nodes represent tasks and a directed edge from node i to node j means that task i must be completed before task j.",
        responsibility: "Find a valid topological sort of the graph, that is, a linear ordering of all nodes such that for every directed edge the source node appears before the target node.",
        output_spec: "Answer with the node ids of one valid ordering joined by \"->\", for example \"0->1->2\".",
    },
    QuestionTemplate {
        task: TaskKind::Sp,
        preamble: "The following is an undirected graph. Nodes represent points and each edge carries a weight giving the cost of traveling along it.",
        responsibility: "Find the shortest path from node {u} to node {v}, minimizing the sum of edge weights along the path.",
        output_spec: "Answer with the node ids of the shortest path joined by \"->\", for example \"4->6->0\".",
    },
    QuestionTemplate {
        task: TaskKind::MaxFlow,
        preamble: "The following is a directed graph. Nodes represent junctions and each directed edge carries a capacity giving the maximum flow it can carry.",
        responsibility: "Calculate the maximum flow from the source node {s} to the sink node {t}.",
        output_spec: "Answer with a single integer, the value of the maximum flow.",
    },
    QuestionTemplate {
        task: TaskKind::Bgm,
        preamble: "The following is an undirected bipartite graph. Nodes represent items on two sides and edges represent allowed pairings.",
        responsibility: "Find a maximum matching, that is, a largest set of edges such that no two chosen edges share an endpoint.",
        output_spec: "Answer with the matched edges as \"(u,v)\" pairs separated by commas, for example \"(0,3),(1,2)\".",
    },
    QuestionTemplate {
        task: TaskKind::Hp,
        preamble: "The following is an undirected graph. Nodes represent places and edges represent passages between places.",
        responsibility: "Find a Hamiltonian path, that is, a path that visits every node of the graph exactly once.",
        output_spec: "Answer with the node ids of one valid path joined by \"->\", for example \"0->1->2\".",
    },
    QuestionTemplate {
        task: TaskKind::LinkPred,
        preamble: "The following is an undirected graph. Nodes represent entities and edges represent observed links between entities.",
        responsibility: "Based on the structure of the graph, predict whether a link between node {u} and node {v} exists.",
        output_spec: "Answer with exactly \"Yes.\" if the link exists, or \"No.\" if it does not.",
    },
    QuestionTemplate {
        task: TaskKind::NodeClass,
        preamble: "The following is an undirected graph. Nodes represent entities, edges represent relations, and every labeled node carries an attribute giving its class.",
        responsibility: "Infer the class of node {target} from the graph structure and the labeled nodes.",
        output_spec: "Answer with the class label string only.",
    },
];

pub fn template_for(task: TaskKind) -> Result<&'static QuestionTemplate> {
    MANUAL_TEMPLATES
        .iter()
        .find(|t| t.task == task)
        .ok_or_else(|| Error::Config(format!("no question template for task {}", task.slug())))
}

fn fill_responsibility(template: &QuestionTemplate, params: &TaskParams) -> Result<String> {
    let text = template.responsibility;
    let filled = match params {
        TaskParams::Pair { u, v } => text
            .replace("{u}", &u.to_string())
            .replace("{v}", &v.to_string()),
        TaskParams::SourceSink { source, sink } => text
            .replace("{s}", &source.to_string())
            .replace("{t}", &sink.to_string()),
        TaskParams::Target { node } => text.replace("{target}", &node.to_string()),
        TaskParams::None => text.to_string(),
    };
    if filled.contains('{') {
        return Err(Error::Config(format!(
            "template for {} expects parameters that were not supplied",
            template.task.slug()
        )));
    }
    Ok(filled)
}

fn assemble(
    preamble: &str,
    description: &str,
    responsibility: &str,
    output_spec: &str,
    task: Option<TaskKind>,
) -> TaskQuery {
    let text = format!("{preamble}\n{description}\n{responsibility} {output_spec}");
    let vo_variant = format!("{preamble}\n{responsibility} {output_spec}");
    TaskQuery { text, task, vo_variant, answer_format_note: output_spec.to_string() }
}

/// Build a query by the manual template path. Deterministic in its inputs.
pub fn build_query(inst: &TaskInstance, desc: &GraphDescription) -> Result<TaskQuery> {
    let template = template_for(inst.task)?;
    let responsibility = fill_responsibility(template, &inst.params)?;
    Ok(assemble(
        template.preamble,
        &desc.text,
        &responsibility,
        template.output_spec,
        Some(inst.task),
    ))
}

/// Build a query for explicit parameters, without a full instance.
pub fn build_query_for(task: TaskKind, params: &TaskParams, desc: &GraphDescription) -> Result<TaskQuery> {
    let template = template_for(task)?;
    let responsibility = fill_responsibility(template, params)?;
    Ok(assemble(
        template.preamble,
        &desc.text,
        &responsibility,
        template.output_spec,
        Some(task),
    ))
}

const BOOTSTRAP_META_PROMPT: &str = "You are a helpful assistant that writes task-specific queries for graph reasoning problems.\nTask brief: {brief}\nThe graph is described as follows:\n{description}\nWrite a single query that explains the meaning of nodes and edges in this scenario, states the task to solve, and ends with one sentence specifying the exact output format the answer must follow. Reply with the query text only.";

/// Generic manual template used when an agent reply fails the
/// well-formedness check.
const FALLBACK_PREAMBLE: &str = "The following is a graph. Nodes represent entities and edges represent relations between entities.";
const FALLBACK_OUTPUT_SPEC: &str = "State your final answer in one short sentence.";

/// Result of the agent-bootstrapped path, with the full exchange for audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BootstrapOutcome {
    pub query: TaskQuery,
    /// Prompt sent to the agent.
    pub prompt: String,
    /// Raw agent reply, when one was received.
    pub raw_reply: Option<String>,
    /// Set when the reply was rejected and the manual fallback was used.
    pub fell_back: bool,
}

/// Minimal well-formedness: the reply must mention nodes and contain an
/// output-specification sentence.
fn reply_is_well_formed(reply: &str) -> bool {
    let lower = reply.to_lowercase();
    lower.contains("node") && (lower.contains("answer") || lower.contains("output"))
}

/// Ask a chat agent to synthesize a query for a bespoke task brief.
///
/// Transport failures (after the client's retry policy) surface as errors;
/// malformed replies fall back to a generic manual template with the
/// exchange kept for audit.
pub fn bootstrap_query(
    task_brief: &str,
    desc: &GraphDescription,
    agent: &dyn ModelClient,
    model: &str,
) -> Result<BootstrapOutcome> {
    let prompt = BOOTSTRAP_META_PROMPT
        .replace("{brief}", task_brief)
        .replace("{description}", &desc.text);
    let request = ChatRequest {
        model: model.to_string(),
        temperature: 0.0,
        max_tokens: 1024,
        messages: vec![ChatMessage::user_text(prompt.clone())],
    };
    let raw_reply = agent.complete(&request)?;
    let trimmed = raw_reply.trim();
    if !trimmed.is_empty() && reply_is_well_formed(trimmed) {
        let text = trimmed.to_string();
        let vo_variant = match text.find(&desc.text) {
            Some(at) => {
                let mut vo = String::with_capacity(text.len() - desc.text.len());
                vo.push_str(&text[..at]);
                vo.push_str(&text[at + desc.text.len()..]);
                vo
            }
            None => text.clone(),
        };
        let answer_format_note = text
            .rsplit(['.', '\n'])
            .find(|s| !s.trim().is_empty())
            .unwrap_or("")
            .trim()
            .to_string();
        return Ok(BootstrapOutcome {
            query: TaskQuery { text, task: None, vo_variant, answer_format_note },
            prompt,
            raw_reply: Some(raw_reply),
            fell_back: false,
        });
    }
    let responsibility = format!("Task: {task_brief}");
    let query = assemble(
        FALLBACK_PREAMBLE,
        &desc.text,
        &responsibility,
        FALLBACK_OUTPUT_SPEC,
        None,
    );
    Ok(BootstrapOutcome { query, prompt, raw_reply: Some(raw_reply), fell_back: true })
}
