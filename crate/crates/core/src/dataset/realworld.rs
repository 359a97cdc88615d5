//! Real-world graph ingestion and the link-prediction / node-classification
//! dataset adapters.
//!
//! Source files are whitespace-separated edge lists (one `u v` pair per
//! line, `#` comments allowed; reverse duplicates and self-loops are
//! dropped) plus an optional `node_id label` file. Original node ids map to
//! internal ids `0..n` by ascending original id.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::describer::describe;
use crate::error::{Error, Result};
use crate::graph::{sample_k_hop, sample_k_hop_union, Graph};
use crate::oracles::{TaskKind, TaskParams};
use crate::questioner::build_query_for;
use crate::seeding;
use crate::visualizer::{render_with_marks, BasicStyles, GraphStyles, NodeMarks, CLASS_PALETTE};

use super::records::{self, DatasetRecord, RecordMeta};
use super::{DatasetManifest, Split, Subset, TaskCounts};

/// An ingested graph with its original node identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestedGraph {
    pub graph: Graph,
    /// Original id per internal id, ascending.
    pub original_ids: Vec<u64>,
}

impl IngestedGraph {
    pub fn internal_id(&self, original: u64) -> Option<usize> {
        self.original_ids.binary_search(&original).ok()
    }
}

/// Read a whitespace-separated undirected edge list.
pub fn ingest_edge_list(path: &Path) -> Result<IngestedGraph> {
    let text = std::fs::read_to_string(path)?;
    let mut pairs: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut ids: BTreeSet<u64> = BTreeSet::new();
    for (line_no, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(a), Some(b)) = (fields.next(), fields.next()) else {
            return Err(Error::Parse {
                position: line_no + 1,
                message: format!("expected two node ids, got {trimmed:?}"),
            });
        };
        let u: u64 = a.parse().map_err(|_| Error::Parse {
            position: line_no + 1,
            message: format!("bad node id {a:?}"),
        })?;
        let v: u64 = b.parse().map_err(|_| Error::Parse {
            position: line_no + 1,
            message: format!("bad node id {b:?}"),
        })?;
        ids.insert(u);
        ids.insert(v);
        if u != v {
            pairs.insert((u.min(v), u.max(v)));
        }
    }
    let original_ids: Vec<u64> = ids.into_iter().collect();
    let index: BTreeMap<u64, usize> =
        original_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let edges: Vec<(usize, usize)> =
        pairs.iter().map(|&(u, v)| (index[&u], index[&v])).collect();
    let graph = Graph::from_edges(false, original_ids.len(), &edges)?;
    Ok(IngestedGraph { graph, original_ids })
}

/// Read a `node_id label` file keyed by original node ids.
pub fn ingest_labels(path: &Path) -> Result<BTreeMap<u64, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut labels = BTreeMap::new();
    for (line_no, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((id_text, label)) = trimmed.split_once(char::is_whitespace) else {
            return Err(Error::Parse {
                position: line_no + 1,
                message: format!("expected \"node_id label\", got {trimmed:?}"),
            });
        };
        let id: u64 = id_text.parse().map_err(|_| Error::Parse {
            position: line_no + 1,
            message: format!("bad node id {id_text:?}"),
        })?;
        labels.insert(id, label.trim().to_string());
    }
    Ok(labels)
}

/// 80/10/10 edge partition by seeded shuffle of edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSplit {
    pub train: Vec<usize>,
    pub valid: Vec<usize>,
    pub test: Vec<usize>,
}

pub fn split_edges(edge_count: usize, seed: u64) -> Result<EdgeSplit> {
    if edge_count < 10 {
        return Err(Error::Parameter(format!(
            "graph with {edge_count} edges is too small for an 80/10/10 split"
        )));
    }
    let mut indices: Vec<usize> = (0..edge_count).collect();
    let mut rng = seeding::rng(seeding::mix(seed, &[seeding::tag("edge-split")]));
    for i in (1..indices.len()).rev() {
        let j = rand::Rng::gen_range(&mut rng, 0..=i);
        indices.swap(i, j);
    }
    let tenth = edge_count / 10;
    let test = indices[..tenth].to_vec();
    let valid = indices[tenth..2 * tenth].to_vec();
    let train = indices[2 * tenth..].to_vec();
    Ok(EdgeSplit { train, valid, test })
}

/// Uniform negative pairs (non-edges, no self-pairs), rejection-sampled,
/// fixed by seed.
pub fn negative_samples(graph: &Graph, count: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    let n = graph.node_count();
    let edge_set: BTreeSet<(usize, usize)> = graph
        .edges()
        .iter()
        .map(|e| (e.u.min(e.v), e.u.max(e.v)))
        .collect();
    let max_non_edges = n * (n - 1) / 2 - edge_set.len();
    if count > max_non_edges {
        return Err(Error::Parameter(format!(
            "cannot sample {count} negatives from {max_non_edges} non-edges"
        )));
    }
    let mut rng = seeding::rng(seeding::mix(seed, &[seeding::tag("negatives")]));
    let mut sampled: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = rand::Rng::gen_range(&mut rng, 0..n);
        let v = rand::Rng::gen_range(&mut rng, 0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if edge_set.contains(&key) || !sampled.insert(key) {
            continue;
        }
        out.push(key);
    }
    Ok(out)
}

/// Options shared by the real-world builders.
#[derive(Debug, Clone)]
pub struct RealWorldOptions {
    pub graph_file: PathBuf,
    /// Labels file; required for node classification.
    pub labels_file: Option<PathBuf>,
    pub hops: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub gamma: BasicStyles,
    pub delta: GraphStyles,
}

impl RealWorldOptions {
    pub fn new(graph_file: impl Into<PathBuf>, hops: usize, seed: u64, out_dir: impl Into<PathBuf>) -> Self {
        RealWorldOptions {
            graph_file: graph_file.into(),
            labels_file: None,
            hops,
            seed,
            out_dir: out_dir.into(),
            gamma: BasicStyles::default(),
            delta: GraphStyles::default(),
        }
    }
}

/// `(record, relative image path, svg bytes, digest, split)`.
type BuiltRecord = (DatasetRecord, String, Vec<u8>, String, Split);

struct PairJob {
    split: Split,
    index: usize,
    pair: (usize, usize),
    positive: bool,
}

/// Build a link-prediction dataset from an undirected edge list.
///
/// The k-hop context rendered for every record comes from the train edges
/// only, so no test or valid edge (in either direction) ever appears in a
/// rendered graph; a train positive additionally excludes its own edge.
pub fn build_link_prediction(options: &RealWorldOptions) -> Result<DatasetManifest> {
    let ingested = ingest_edge_list(&options.graph_file)?;
    let graph = &ingested.graph;
    let split = split_edges(graph.edges().len(), options.seed)?;

    let train_set: BTreeSet<usize> = split.train.iter().copied().collect();
    let train_edges: Vec<(usize, usize)> = split
        .train
        .iter()
        .map(|&i| (graph.edges()[i].u, graph.edges()[i].v))
        .collect();
    let context = Graph::from_edges(false, graph.node_count(), &train_edges)?;
    let _ = train_set;

    let mut jobs: Vec<PairJob> = Vec::new();
    for (split_kind, edge_indices) in [
        (Split::Train, &split.train),
        (Split::Valid, &split.valid),
        (Split::Test, &split.test),
    ] {
        let negatives = negative_samples(
            graph,
            edge_indices.len(),
            seeding::mix(options.seed, &[seeding::tag(split_kind.slug())]),
        )?;
        for (index, &edge_index) in edge_indices.iter().enumerate() {
            let e = &graph.edges()[edge_index];
            jobs.push(PairJob { split: split_kind, index, pair: (e.u, e.v), positive: true });
        }
        for (index, &pair) in negatives.iter().enumerate() {
            jobs.push(PairJob { split: split_kind, index, pair, positive: false });
        }
    }

    std::fs::create_dir_all(&options.out_dir)?;
    for split_kind in [Split::Train, Split::Valid, Split::Test] {
        std::fs::create_dir_all(
            options.out_dir.join("images").join("linkpred").join(split_kind.slug()),
        )?;
    }

    let built: Vec<BuiltRecord> = jobs
        .par_iter()
        .map(|job| build_pair_record(options, &ingested, &context, job))
        .collect::<Result<Vec<_>>>()?;

    finalize_realworld(options, TaskKind::LinkPred, built)
}

fn build_pair_record(
    options: &RealWorldOptions,
    ingested: &IngestedGraph,
    context: &Graph,
    job: &PairJob,
) -> Result<BuiltRecord> {
    let (u, v) = job.pair;
    // Context for a train positive must not contain the pair's own edge.
    let local_context: Graph;
    let context_ref = if job.positive && job.split == Split::Train {
        let kept: Vec<(usize, usize)> = context
            .edges()
            .iter()
            .filter(|e| !((e.u == u && e.v == v) || (e.u == v && e.v == u)))
            .map(|e| (e.u, e.v))
            .collect();
        local_context = Graph::from_edges(false, context.node_count(), &kept)?;
        &local_context
    } else {
        context
    };
    let sample = sample_k_hop_union(context_ref, u, v, options.hops)?;
    let new_u = sample.relabel_map[&u];
    let new_v = sample.relabel_map[&v];
    let desc = describe(&sample.subgraph);
    let query = build_query_for(
        TaskKind::LinkPred,
        &TaskParams::Pair { u: new_u, v: new_v },
        &desc,
    )?;
    let answer = if job.positive { "Yes." } else { "No." };
    let marks = NodeMarks { highlight: vec![new_u, new_v], target: None };
    let seed = seeding::mix(options.seed, &[
        seeding::tag(job.split.slug()),
        job.index as u64,
        u64::from(job.positive),
    ]);
    let image = render_with_marks(
        &sample.subgraph,
        &options.gamma,
        &options.delta,
        super::layout_seed(seed),
        &marks,
    )?;
    let polarity = if job.positive { "pos" } else { "neg" };
    let id_base = format!("linkpred-{}-{:05}-{polarity}", job.split.slug(), job.index);
    let record_id = format!("{id_base}-base_default");
    let rel_path = format!(
        "images/linkpred/{}/{id_base}_base_default.svg",
        job.split.slug()
    );
    let digest = records::sha256_hex(&image.svg_bytes);
    let record = DatasetRecord {
        id: record_id,
        task: TaskKind::LinkPred,
        image: rel_path.clone(),
        query: query.text,
        vo_query: query.vo_variant,
        answer: answer.to_string(),
        alt_answers: None,
        meta: RecordMeta {
            seed,
            subset: Subset::Base,
            variant: "base_default".into(),
            graph_hash: sample.subgraph.content_hash(),
            pair: Some((ingested.original_ids[u], ingested.original_ids[v])),
            target: None,
        },
    };
    Ok((record, rel_path, image.svg_bytes, digest, job.split))
}

/// Build a node-classification dataset: one record per labeled node, its
/// k-hop subgraph rendered with labeled neighbors colored by class and the
/// target marked. Node features never enter the records.
pub fn build_node_classification(options: &RealWorldOptions) -> Result<(DatasetManifest, Vec<String>)> {
    let labels_file = options.labels_file.as_ref().ok_or_else(|| {
        Error::Parameter("node classification requires a labels file".into())
    })?;
    let ingested = ingest_edge_list(&options.graph_file)?;
    let labels_by_original = ingest_labels(labels_file)?;
    let mut labels: BTreeMap<usize, String> = BTreeMap::new();
    for (original, label) in &labels_by_original {
        let Some(internal) = ingested.internal_id(*original) else {
            return Err(Error::Parameter(format!(
                "labeled node {original} does not appear in the edge list"
            )));
        };
        labels.insert(internal, label.clone());
    }
    if labels.is_empty() {
        return Err(Error::Parameter("labels file contains no labels".into()));
    }

    // Stable class -> color assignment, rotated by the build seed.
    let mut classes: Vec<String> = labels.values().cloned().collect();
    classes.sort();
    classes.dedup();
    let offset = (options.seed % CLASS_PALETTE.len() as u64) as usize;
    let class_colors: BTreeMap<String, String> = classes
        .iter()
        .enumerate()
        .map(|(i, class)| {
            (class.clone(), CLASS_PALETTE[(offset + i) % CLASS_PALETTE.len()].to_string())
        })
        .collect();
    let mut gamma = options.gamma.clone();
    gamma.class_colors = Some(class_colors);

    // 80/10/10 target split, seeded.
    let targets: Vec<usize> = labels.keys().copied().collect();
    let mut order: Vec<usize> = (0..targets.len()).collect();
    let mut rng = seeding::rng(seeding::mix(options.seed, &[seeding::tag("target-split")]));
    for i in (1..order.len()).rev() {
        let j = rand::Rng::gen_range(&mut rng, 0..=i);
        order.swap(i, j);
    }
    let tenth = targets.len() / 10;
    let split_of = |position: usize| -> Split {
        if position < tenth {
            Split::Test
        } else if position < 2 * tenth {
            Split::Valid
        } else {
            Split::Train
        }
    };

    std::fs::create_dir_all(&options.out_dir)?;
    for split_kind in [Split::Train, Split::Valid, Split::Test] {
        std::fs::create_dir_all(
            options.out_dir.join("images").join("nodeclass").join(split_kind.slug()),
        )?;
    }

    let jobs: Vec<(usize, usize, Split)> = order
        .iter()
        .enumerate()
        .map(|(position, &target_index)| (position, targets[target_index], split_of(position)))
        .collect();

    let mut warnings = Vec::new();
    let mut built = Vec::new();
    let results: Vec<Result<Option<BuiltRecord>>> = jobs
        .par_iter()
        .map(|&(position, target, split_kind)| {
            build_target_record(options, &gamma, &ingested, &labels, position, target, split_kind)
        })
        .collect();
    for (result, &(_, target, _)) in results.into_iter().zip(&jobs) {
        match result? {
            Some(item) => built.push(item),
            None => warnings.push(format!(
                "node {} skipped: empty neighborhood",
                ingested.original_ids[target]
            )),
        }
    }
    let manifest = finalize_realworld_with_gamma(options, TaskKind::NodeClass, built, gamma)?;
    Ok((manifest, warnings))
}

fn build_target_record(
    options: &RealWorldOptions,
    gamma: &BasicStyles,
    ingested: &IngestedGraph,
    labels: &BTreeMap<usize, String>,
    position: usize,
    target: usize,
    split_kind: Split,
) -> Result<Option<BuiltRecord>> {
    let sample = sample_k_hop(&ingested.graph, target, options.hops)?;
    if sample.subgraph.node_count() <= 1 {
        return Ok(None);
    }
    let new_target = sample.relabel_map[&target];
    // Labeled neighbors carry their class as an attribute; the target's own
    // label stays out of the record.
    let attrs: BTreeMap<usize, String> = sample
        .relabel_map
        .iter()
        .filter(|(orig, _)| **orig != target)
        .filter_map(|(orig, &new)| labels.get(orig).map(|label| (new, label.clone())))
        .collect();
    let subgraph = crate::generator::with_attrs(&sample.subgraph, attrs)?;
    let desc = describe(&subgraph);
    let query = build_query_for(
        TaskKind::NodeClass,
        &TaskParams::Target { node: new_target },
        &desc,
    )?;
    let marks = NodeMarks { highlight: Vec::new(), target: Some(new_target) };
    let seed = seeding::mix(options.seed, &[seeding::tag("nodeclass"), position as u64]);
    let image = render_with_marks(
        &subgraph,
        gamma,
        &options.delta,
        super::layout_seed(seed),
        &marks,
    )?;
    let id_base = format!("nodeclass-{}-{:05}", split_kind.slug(), position);
    let record_id = format!("{id_base}-base_default");
    let rel_path = format!(
        "images/nodeclass/{}/{id_base}_base_default.svg",
        split_kind.slug()
    );
    let digest = records::sha256_hex(&image.svg_bytes);
    let record = DatasetRecord {
        id: record_id,
        task: TaskKind::NodeClass,
        image: rel_path.clone(),
        query: query.text,
        vo_query: query.vo_variant,
        answer: labels[&target].clone(),
        alt_answers: None,
        meta: RecordMeta {
            seed,
            subset: Subset::Base,
            variant: "base_default".into(),
            graph_hash: subgraph.content_hash(),
            pair: None,
            target: Some(ingested.original_ids[target]),
        },
    };
    Ok(Some((record, rel_path, image.svg_bytes, digest, split_kind)))
}

fn finalize_realworld(
    options: &RealWorldOptions,
    task: TaskKind,
    built: Vec<BuiltRecord>,
) -> Result<DatasetManifest> {
    finalize_realworld_with_gamma(options, task, built, options.gamma.clone())
}

fn finalize_realworld_with_gamma(
    options: &RealWorldOptions,
    task: TaskKind,
    built: Vec<BuiltRecord>,
    gamma: BasicStyles,
) -> Result<DatasetManifest> {
    let mut records = Vec::with_capacity(built.len());
    let mut split_map = BTreeMap::new();
    let mut image_digests = BTreeMap::new();
    for (record, rel_path, bytes, digest, split_kind) in built {
        std::fs::write(options.out_dir.join(&rel_path), &bytes)?;
        split_map.insert(record.id.clone(), split_kind);
        image_digests.insert(record.id.clone(), digest);
        records.push(record);
    }
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let records_path = options.out_dir.join("records.jsonl");
    super::records::write_records(&records_path, &records)?;
    let mut tasks = BTreeMap::new();
    tasks.insert(
        task.slug().to_string(),
        TaskCounts { instances: records.len(), records: records.len() },
    );
    let manifest = DatasetManifest {
        subset: Subset::Base,
        scale: 1.0,
        seed: options.seed,
        gamma,
        base_delta: options.delta,
        tasks,
        split: split_map,
        records_digest: super::records::file_digest(&records_path)?,
        image_digests,
    };
    manifest.save(&options.out_dir)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Random connected graph written in the SNAP-ish edge-list format,
    /// with sparse original ids, comments, and duplicate reverse lines.
    fn write_test_graph(path: &Path, nodes: usize, extra_edges: usize, seed: u64) -> (usize, usize) {
        let mut rng = seeding::rng(seed);
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for v in 1..nodes {
            let u = rng.gen_range(0..v);
            pairs.insert((u, v));
        }
        while pairs.len() < nodes - 1 + extra_edges {
            let u = rng.gen_range(0..nodes);
            let v = rng.gen_range(0..nodes);
            if u != v {
                pairs.insert((u.min(v), u.max(v)));
            }
        }
        let mut text = String::from("# test collaboration network\n# FromNodeId ToNodeId\n");
        for &(u, v) in &pairs {
            let (ou, ov) = (u * 3 + 7, v * 3 + 7);
            text.push_str(&format!("{ou}\t{ov}\n"));
            text.push_str(&format!("{ov}\t{ou}\n"));
        }
        std::fs::write(path, text).unwrap();
        (nodes, pairs.len())
    }

    #[test]
    fn ingestion_is_lossless_and_deduplicated() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("edges.txt");
        let (nodes, edges) = write_test_graph(&path, 80, 60, 5);
        let ingested = ingest_edge_list(&path).unwrap();
        assert_eq!(ingested.graph.node_count(), nodes);
        assert_eq!(ingested.graph.edges().len(), edges);
        assert_eq!(ingested.original_ids.len(), nodes);
        assert!(ingested.original_ids.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn edge_split_is_80_10_10_and_disjoint() {
        let split = split_edges(1000, 3).unwrap();
        assert_eq!(split.test.len(), 100);
        assert_eq!(split.valid.len(), 100);
        assert_eq!(split.train.len(), 800);
        let mut all: Vec<usize> = split
            .train
            .iter()
            .chain(&split.valid)
            .chain(&split.test)
            .copied()
            .collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 1000);
        assert_eq!(split_edges(1000, 3).unwrap(), split);
    }

    #[test]
    fn negatives_avoid_edges_and_duplicates() {
        let g = Graph::from_edges(false, 30, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let negatives = negative_samples(&g, 50, 7).unwrap();
        assert_eq!(negatives.len(), 50);
        let mut seen = BTreeSet::new();
        for &(u, v) in &negatives {
            assert!(u < v);
            assert!(seen.insert((u, v)));
            assert!(!g.edges().iter().any(|e| (e.u, e.v) == (u, v) || (e.v, e.u) == (u, v)));
        }
    }

    #[test]
    fn link_prediction_build_has_no_test_edge_leakage() {
        let dir = tempfile::tempdir().unwrap();
        let graph_path = dir.path().join("edges.txt");
        write_test_graph(&graph_path, 60, 80, 11);
        let out = dir.path().join("build");
        let options = RealWorldOptions::new(&graph_path, 2, 9, &out);
        let manifest = build_link_prediction(&options).unwrap();
        let (_, records) = super::super::load_build(&out).unwrap();
        assert!(!records.is_empty());

        let ingested = ingest_edge_list(&graph_path).unwrap();
        let split = split_edges(ingested.graph.edges().len(), 9).unwrap();
        let test_pairs: BTreeSet<(usize, usize)> = split
            .test
            .iter()
            .chain(&split.valid)
            .map(|&i| {
                let e = &ingested.graph.edges()[i];
                (e.u.min(e.v), e.u.max(e.v))
            })
            .collect();

        let mut yes = 0usize;
        let mut no = 0usize;
        for record in &records {
            match record.answer.as_str() {
                "Yes." => yes += 1,
                "No." => no += 1,
                other => panic!("unexpected answer {other}"),
            }
            assert!(manifest.split.contains_key(&record.id));
            // The rendered context graph never contains a held-out edge.
            let original_pair = record.meta.pair.unwrap();
            let parsed = crate::describer::parse_description(
                record
                    .query
                    .split('\n')
                    .find(|line| line.starts_with("In an undirected graph"))
                    .unwrap(),
            )
            .unwrap();
            let sample_nodes: Vec<usize> = {
                // Rebuild the relabel map the same way the builder did.
                let u = ingested.internal_id(original_pair.0).unwrap();
                let v = ingested.internal_id(original_pair.1).unwrap();
                let train_edges: Vec<(usize, usize)> = split
                    .train
                    .iter()
                    .map(|&i| (ingested.graph.edges()[i].u, ingested.graph.edges()[i].v))
                    .filter(|&(a, b)| {
                        !(record.answer == "Yes."
                            && manifest.split[&record.id] == Split::Train
                            && ((a, b) == (u, v) || (b, a) == (u, v)))
                    })
                    .collect();
                let context =
                    Graph::from_edges(false, ingested.graph.node_count(), &train_edges).unwrap();
                sample_k_hop_union(&context, u, v, 2).unwrap().original_ids()
            };
            for edge in parsed.edges() {
                let orig = (
                    sample_nodes[edge.u].min(sample_nodes[edge.v]),
                    sample_nodes[edge.u].max(sample_nodes[edge.v]),
                );
                assert!(!test_pairs.contains(&orig), "held-out edge rendered in context");
            }
        }
        assert_eq!(yes, no);
    }

    #[test]
    fn node_classification_colors_and_marks() {
        let dir = tempfile::tempdir().unwrap();
        let graph_path = dir.path().join("edges.txt");
        write_test_graph(&graph_path, 40, 30, 2);
        let labels_path = dir.path().join("labels.txt");
        let ingested = ingest_edge_list(&graph_path).unwrap();
        let mut text = String::new();
        for (i, &orig) in ingested.original_ids.iter().enumerate().take(20) {
            text.push_str(&format!("{orig} {}\n", if i % 2 == 0 { "alpha" } else { "beta" }));
        }
        std::fs::write(&labels_path, text).unwrap();
        let out = dir.path().join("build");
        let mut options = RealWorldOptions::new(&graph_path, 2, 4, &out);
        options.labels_file = Some(labels_path);
        let (manifest, warnings) = build_node_classification(&options).unwrap();
        assert!(warnings.is_empty());
        let colors = manifest.gamma.class_colors.as_ref().unwrap();
        assert_eq!(colors.len(), 2);
        assert_ne!(colors["alpha"], colors["beta"]);
        let (_, records) = super::super::load_build(&out).unwrap();
        assert_eq!(records.len(), 20);
        for record in &records {
            assert!(record.answer == "alpha" || record.answer == "beta");
            let svg = std::fs::read_to_string(out.join(&record.image)).unwrap();
            assert!(svg.contains(crate::visualizer::TARGET_STROKE));
            // Exactly one target-marked node glyph.
            let marked = crate::visualizer::parse_elements(&svg)
                .iter()
                .filter(|e| {
                    e.class() == Some("node")
                        && e.attr("stroke") == Some(crate::visualizer::TARGET_STROKE)
                })
                .count();
            assert_eq!(marked, 1);
        }
    }

    #[test]
    fn too_small_graphs_are_rejected() {
        assert!(split_edges(5, 1).is_err());
    }
}
