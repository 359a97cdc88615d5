//! Dataset assembly: subset builds, splits, statistics, and verification.
//!
//! A build writes `records.jsonl`, `manifest.json`, and one SVG per record
//! under `images/{task}/{split}/`. Everything derives deterministically from
//! the build seed: per-instance seeds come from `mix(seed, task, index)`, so
//! parallel schedules cannot change any output byte.

pub mod realworld;
pub mod records;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::describer::describe;
use crate::error::{Error, Result};
use crate::generator::{generate_instance, GeneratorSpec};
use crate::oracles::{verify_answer, GoldAnswer, TaskKind};
use crate::questioner::build_query;
use crate::seeding;
use crate::visualizer::{
    render, topology_counts, AugmentAxis, BasicStyles, GraphStyles,
};

pub use records::{instance_key_of, read_records, write_records, DatasetRecord, RecordMeta};

/// The five dataset subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subset {
    #[serde(rename = "BASE")]
    Base,
    #[serde(rename = "AUGLY")]
    Augly,
    #[serde(rename = "AUGNS")]
    Augns,
    #[serde(rename = "AUGNO")]
    Augno,
    #[serde(rename = "AUGET")]
    Auget,
}

impl Subset {
    pub const ALL: [Subset; 5] =
        [Subset::Base, Subset::Augly, Subset::Augns, Subset::Augno, Subset::Auget];

    pub fn slug(self) -> &'static str {
        match self {
            Subset::Base => "base",
            Subset::Augly => "augly",
            Subset::Augns => "augns",
            Subset::Augno => "augno",
            Subset::Auget => "auget",
        }
    }

    pub fn from_slug(slug: &str) -> Option<Subset> {
        Subset::ALL.into_iter().find(|s| s.slug() == slug.to_lowercase())
    }

    /// The augmentation axis behind this subset; `None` for BASE.
    pub fn axis(self) -> Option<AugmentAxis> {
        match self {
            Subset::Base => None,
            Subset::Augly => Some(AugmentAxis::Layout),
            Subset::Augns => Some(AugmentAxis::NodeShape),
            Subset::Augno => Some(AugmentAxis::NodeOutline),
            Subset::Auget => Some(AugmentAxis::EdgeThickness),
        }
    }

    /// Records per instance in this subset.
    pub fn multiplier(self) -> usize {
        self.axis().map_or(1, AugmentAxis::variant_count)
    }

    /// `(axis_tag, variant_tag, style)` triples rendered per instance.
    pub fn variants(self, base: GraphStyles) -> Vec<(String, String, GraphStyles)> {
        match self.axis() {
            None => vec![("base".to_string(), "default".to_string(), base)],
            Some(axis) => axis
                .variant_slugs()
                .into_iter()
                .enumerate()
                .map(|(index, slug)| {
                    (axis.slug().to_string(), slug.to_string(), axis.apply(base, index))
                })
                .collect(),
        }
    }
}

/// Train/valid/test assignment. Synthetic subsets use train and test only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub fn slug(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

/// Published per-task BASE instance counts at scale 1.
pub const BASE_COUNTS: [(TaskKind, usize); 7] = [
    (TaskKind::Connect, 16_410),
    (TaskKind::Cycle, 4_100),
    (TaskKind::Ts, 2_910),
    (TaskKind::Sp, 1_560),
    (TaskKind::MaxFlow, 1_500),
    (TaskKind::Bgm, 1_860),
    (TaskKind::Hp, 900),
];

pub fn base_count(task: TaskKind) -> Option<usize> {
    BASE_COUNTS.iter().find(|(t, _)| *t == task).map(|&(_, n)| n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskCounts {
    pub instances: usize,
    pub records: usize,
}

/// Per-task instance and record counts for a subset at a given scale.
pub fn plan_counts(
    subset: Subset,
    scale: f64,
    tasks: &[TaskKind],
) -> Result<BTreeMap<TaskKind, TaskCounts>> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(Error::Parameter(format!("scale {scale} outside (0, 1]")));
    }
    let multiplier = subset.multiplier();
    let mut plan = BTreeMap::new();
    for &task in tasks {
        let full = base_count(task).ok_or_else(|| {
            Error::Parameter(format!("task {} has no published base count", task.slug()))
        })?;
        let instances = (scale * full as f64).ceil() as usize;
        plan.insert(task, TaskCounts { instances, records: instances * multiplier });
    }
    Ok(plan)
}

/// Build manifest: counts, split map, build parameters, content digests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub subset: Subset,
    pub scale: f64,
    pub seed: u64,
    pub gamma: BasicStyles,
    pub base_delta: GraphStyles,
    /// Per-task counts, keyed by task slug.
    pub tasks: BTreeMap<String, TaskCounts>,
    /// Record id -> split assignment.
    pub split: BTreeMap<String, Split>,
    pub records_digest: String,
    /// Record id -> image content digest.
    pub image_digests: BTreeMap<String, String>,
}

impl DatasetManifest {
    pub fn save(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(dir.join("manifest.json"), text)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<DatasetManifest> {
        let text = std::fs::read_to_string(dir.join("manifest.json"))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Load a manifest and its records from a build directory.
pub fn load_build(dir: &Path) -> Result<(DatasetManifest, Vec<DatasetRecord>)> {
    let manifest = DatasetManifest::load(dir)?;
    let records = read_records(&dir.join("records.jsonl"))?;
    Ok((manifest, records))
}

/// Options for [`build_subset`].
#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub subset: Subset,
    /// Fraction of the published counts to generate, in (0, 1].
    pub scale: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Restrict to these tasks; `None` builds all seven.
    pub tasks: Option<Vec<TaskKind>>,
    pub gamma: BasicStyles,
    pub base_delta: GraphStyles,
}

impl BuildOptions {
    pub fn new(subset: Subset, scale: f64, seed: u64, out_dir: impl Into<PathBuf>) -> Self {
        BuildOptions {
            subset,
            scale,
            seed,
            out_dir: out_dir.into(),
            tasks: None,
            gamma: BasicStyles::default(),
            base_delta: GraphStyles::default(),
        }
    }
}

/// Stratified 7:3 train/test assignment over instance indices, seeded.
/// Returns, per task, the set of test instance indices.
pub fn assign_test_instances(
    seed: u64,
    plan: &BTreeMap<TaskKind, TaskCounts>,
) -> BTreeMap<TaskKind, std::collections::BTreeSet<usize>> {
    let mut out = BTreeMap::new();
    for (&task, counts) in plan {
        let mut indices: Vec<usize> = (0..counts.instances).collect();
        let mut rng = seeding::rng(seeding::mix(seed, &[
            seeding::tag("split"),
            seeding::tag(task.slug()),
        ]));
        for i in (1..indices.len()).rev() {
            let j = rand::Rng::gen_range(&mut rng, 0..=i);
            indices.swap(i, j);
        }
        let train = (0.7 * counts.instances as f64).round() as usize;
        let test: std::collections::BTreeSet<usize> = indices[train..].iter().copied().collect();
        out.insert(task, test);
    }
    out
}

fn instance_id(task: TaskKind, index: usize) -> String {
    format!("{}-{:05}", task.slug(), index)
}

pub fn instance_seed(build_seed: u64, task: TaskKind, index: usize) -> u64 {
    seeding::mix(build_seed, &[seeding::tag(task.slug()), index as u64])
}

pub fn layout_seed(record_seed: u64) -> u64 {
    seeding::mix(record_seed, &[seeding::tag("layout-seed")])
}

struct BuiltInstance {
    records: Vec<DatasetRecord>,
    /// `(relative path, svg bytes, digest)` per record, same order.
    images: Vec<(String, Vec<u8>, String)>,
}

fn build_instance(
    options: &BuildOptions,
    task: TaskKind,
    index: usize,
    split: Split,
) -> Result<BuiltInstance> {
    let seed = instance_seed(options.seed, task, index);
    let spec = GeneratorSpec::for_task(task, seed)?;
    let inst = generate_instance(&spec)?;
    let desc = describe(&inst.graph);
    let query = build_query(&inst, &desc)?;
    let id_base = instance_id(task, index);
    let mut records = Vec::new();
    let mut images = Vec::new();
    for (axis_tag, variant_tag, delta) in options.subset.variants(options.base_delta) {
        let image = render(&inst.graph, &options.gamma, &delta, layout_seed(seed))?;
        let variant = format!("{axis_tag}_{variant_tag}");
        let record_id = format!("{id_base}-{variant}");
        let rel_path = format!(
            "images/{}/{}/{}_{axis_tag}_{variant_tag}.svg",
            task.slug(),
            split.slug(),
            id_base
        );
        let digest = records::sha256_hex(&image.svg_bytes);
        records.push(DatasetRecord {
            id: record_id,
            task,
            image: rel_path.clone(),
            query: query.text.clone(),
            vo_query: query.vo_variant.clone(),
            answer: inst.gold.canonical_text.clone(),
            alt_answers: None,
            meta: RecordMeta {
                seed,
                subset: options.subset,
                variant,
                graph_hash: inst.graph.content_hash(),
                pair: None,
                target: None,
            },
        });
        images.push((rel_path, image.svg_bytes, digest));
    }
    Ok(BuiltInstance { records, images })
}

/// Build one subset: generate instances, render every variant, write
/// records, images, and the manifest. Deterministic from the seed.
pub fn build_subset(options: &BuildOptions) -> Result<DatasetManifest> {
    let tasks: Vec<TaskKind> = options
        .tasks
        .clone()
        .unwrap_or_else(|| TaskKind::SYNTHETIC.to_vec());
    let plan = plan_counts(options.subset, options.scale, &tasks)?;
    let test_instances = assign_test_instances(options.seed, &plan);

    std::fs::create_dir_all(&options.out_dir)?;
    for &task in plan.keys() {
        for split in [Split::Train, Split::Test] {
            std::fs::create_dir_all(
                options.out_dir.join("images").join(task.slug()).join(split.slug()),
            )?;
        }
    }

    let mut work: Vec<(TaskKind, usize, Split)> = Vec::new();
    for (&task, counts) in &plan {
        let test = &test_instances[&task];
        for index in 0..counts.instances {
            let split = if test.contains(&index) { Split::Test } else { Split::Train };
            work.push((task, index, split));
        }
    }

    let built: Vec<BuiltInstance> = work
        .par_iter()
        .map(|&(task, index, split)| build_instance(options, task, index, split))
        .collect::<Result<Vec<_>>>()?;

    let mut all_records = Vec::new();
    let mut split_map = BTreeMap::new();
    let mut image_digests = BTreeMap::new();
    for (instance, &(_, _, split)) in built.iter().zip(&work) {
        for (record, (rel_path, bytes, digest)) in
            instance.records.iter().zip(&instance.images)
        {
            std::fs::write(options.out_dir.join(rel_path), bytes)?;
            split_map.insert(record.id.clone(), split);
            image_digests.insert(record.id.clone(), digest.clone());
        }
        all_records.extend(instance.records.iter().cloned());
    }

    let records_path = options.out_dir.join("records.jsonl");
    write_records(&records_path, &all_records)?;
    let manifest = DatasetManifest {
        subset: options.subset,
        scale: options.scale,
        seed: options.seed,
        gamma: options.gamma.clone(),
        base_delta: options.base_delta,
        tasks: plan
            .iter()
            .map(|(task, counts)| (task.slug().to_string(), *counts))
            .collect(),
        split: split_map,
        records_digest: records::file_digest(&records_path)?,
        image_digests,
    };
    manifest.save(&options.out_dir)?;
    Ok(manifest)
}

/// Re-assign the train/test split of an existing synthetic build with a new
/// seed, moving image files and rewriting records and manifest.
pub fn resplit(dir: &Path, seed: u64) -> Result<DatasetManifest> {
    let (mut manifest, mut records) = load_build(dir)?;
    let plan: BTreeMap<TaskKind, TaskCounts> = manifest
        .tasks
        .iter()
        .map(|(slug, counts)| {
            TaskKind::from_slug(slug)
                .map(|task| (task, *counts))
                .ok_or_else(|| Error::Parameter(format!("unknown task slug {slug}")))
        })
        .collect::<Result<_>>()?;
    let test_instances = assign_test_instances(seed, &plan);

    let mut split_map = BTreeMap::new();
    for record in &mut records {
        let key = record.instance_key().to_string();
        let index: usize = key
            .rsplit('-')
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parameter(format!("bad record id {}", record.id)))?;
        let split = if test_instances[&record.task].contains(&index) {
            Split::Test
        } else {
            Split::Train
        };
        let old_image = record.image.clone();
        let new_image = old_image
            .replace("/train/", &format!("/{}/", split.slug()))
            .replace("/test/", &format!("/{}/", split.slug()));
        if new_image != old_image {
            std::fs::rename(dir.join(&old_image), dir.join(&new_image))?;
            record.image = new_image;
        }
        split_map.insert(record.id.clone(), split);
    }
    let records_path = dir.join("records.jsonl");
    write_records(&records_path, &records)?;
    manifest.seed = seed;
    manifest.split = split_map;
    manifest.records_digest = records::file_digest(&records_path)?;
    manifest.save(dir)?;
    Ok(manifest)
}

/// Per-task statistics over a build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskStats {
    pub instances: usize,
    pub records: usize,
    pub avg_nodes: Option<f64>,
    pub avg_edges: Option<f64>,
    /// Fraction of "Yes." answers for boolean tasks.
    pub yes_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub per_task: BTreeMap<String, TaskStats>,
    pub total_records: usize,
}

/// Compute per-task counts, average node/edge counts, and label balance.
/// Synthetic instances are regenerated from their seeds; real-world tasks
/// report counts and balance only.
pub fn stats(records: &[DatasetRecord]) -> Result<StatsReport> {
    let mut per_task: BTreeMap<String, TaskStats> = BTreeMap::new();
    let mut seen_instances: std::collections::HashSet<(TaskKind, u64)> =
        std::collections::HashSet::new();
    let mut sums: BTreeMap<TaskKind, (usize, usize, usize)> = BTreeMap::new();
    let mut counts: BTreeMap<TaskKind, (usize, usize, usize, usize)> = BTreeMap::new();

    for record in records {
        let entry = counts.entry(record.task).or_insert((0, 0, 0, 0));
        entry.0 += 1; // records
        if record.answer == "Yes." {
            entry.2 += 1;
        }
        if record.answer == "Yes." || record.answer == "No." {
            entry.3 += 1;
        }
        if seen_instances.insert((record.task, record.meta.seed)) {
            entry.1 += 1; // distinct instances
            if TaskKind::SYNTHETIC.contains(&record.task) {
                let spec = GeneratorSpec::for_task(record.task, record.meta.seed)?;
                let inst = generate_instance(&spec)?;
                let sum = sums.entry(record.task).or_insert((0, 0, 0));
                sum.0 += inst.graph.node_count();
                sum.1 += inst.graph.edges().len();
                sum.2 += 1;
            }
        }
    }
    let mut total_records = 0usize;
    for (task, (recs, instances, yes, bools)) in counts {
        total_records += recs;
        let averages = sums.get(&task).map(|&(nodes, edges, n)| {
            (nodes as f64 / n as f64, edges as f64 / n as f64)
        });
        per_task.insert(
            task.slug().to_string(),
            TaskStats {
                instances,
                records: recs,
                avg_nodes: averages.map(|(n, _)| n),
                avg_edges: averages.map(|(_, m)| m),
                yes_fraction: (bools > 0).then(|| yes as f64 / bools as f64),
            },
        );
    }
    Ok(StatsReport { per_task, total_records })
}

/// One verification problem found by [`verify_build`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyIssue {
    pub record_id: String,
    pub message: String,
}

/// Re-check a build: every image exists with its manifest digest, and for
/// synthetic tasks the instance regenerates to the same graph hash, the
/// solver reproduces the stored answer, and the image's glyph counts match
/// the graph. Returns all issues found (empty means the build is pristine).
pub fn verify_build(dir: &Path) -> Result<Vec<VerifyIssue>> {
    let (manifest, records) = load_build(dir)?;
    let issues: Vec<VerifyIssue> = records
        .par_iter()
        .map(|record| verify_record(dir, &manifest, record))
        .collect::<Result<Vec<Vec<VerifyIssue>>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(issues)
}

fn verify_record(
    dir: &Path,
    manifest: &DatasetManifest,
    record: &DatasetRecord,
) -> Result<Vec<VerifyIssue>> {
    let mut issues = Vec::new();
    let mut issue = |message: String| {
        issues.push(VerifyIssue { record_id: record.id.clone(), message });
    };
    let image_path = dir.join(&record.image);
    let image_bytes = match std::fs::read(&image_path) {
        Ok(bytes) => Some(bytes),
        Err(_) => {
            issue(format!("image {} missing", record.image));
            None
        }
    };
    if let Some(bytes) = &image_bytes {
        let digest = records::sha256_hex(bytes);
        match manifest.image_digests.get(&record.id) {
            Some(expected) if *expected == digest => {}
            Some(_) => issue("image digest mismatch".into()),
            None => issue("record missing from manifest image digests".into()),
        }
    }
    if !manifest.split.contains_key(&record.id) {
        issue("record missing from manifest split map".into());
    }
    if TaskKind::SYNTHETIC.contains(&record.task) {
        let spec = GeneratorSpec::for_task(record.task, record.meta.seed)?;
        let inst = generate_instance(&spec)?;
        if inst.graph.content_hash() != record.meta.graph_hash {
            issue("graph hash mismatch against regenerated instance".into());
        }
        if inst.gold.canonical_text != record.answer {
            issue(format!(
                "gold answer mismatch: stored {:?}, re-solved {:?}",
                record.answer, inst.gold.canonical_text
            ));
        }
        if !verify_answer(&inst, &GoldAnswer::new(inst.gold.value.clone())) {
            issue("re-solved gold answer fails its own verifier".into());
        }
        if let Some(bytes) = &image_bytes {
            let svg = String::from_utf8_lossy(bytes);
            let (nodes, edges) = topology_counts(&svg);
            if nodes != inst.graph.node_count() || edges != inst.graph.edges().len() {
                issue(format!(
                    "image topology {nodes} nodes / {edges} edges does not match graph {} / {}",
                    inst.graph.node_count(),
                    inst.graph.edges().len()
                ));
            }
        }
    }
    Ok(issues)
}
