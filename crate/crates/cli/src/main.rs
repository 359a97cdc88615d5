//! Command-line entry point for the benchmark toolchain.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 verification
//! failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use gvbench_core::chat::{HttpChatClient, ModelEndpoint};
use gvbench_core::dataset::realworld::{build_link_prediction, build_node_classification, RealWorldOptions};
use gvbench_core::dataset::{
    build_subset, load_build, resplit, stats, verify_build, BuildOptions, Subset,
};
use gvbench_core::describer::{describe, export_templates, parse_description};
use gvbench_core::eval::{run_eval, EvalMode, EvalOptions};
use gvbench_core::generator::{generate_instance, GeneratorSpec};
use gvbench_core::graph::{sample_k_hop, Graph};
use gvbench_core::oracles::TaskKind;
use gvbench_core::visualizer::{
    augment, dot, render, AugmentAxis, BasicStyles, EdgeThickness, GraphStyles, LayoutKind,
    NodeOutline, NodeShape,
};
use gvbench_core::Error;

#[derive(Parser)]
#[command(name = "gvbench", version, about = "Graph reasoning benchmark forge and evaluation toolchain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    Connect,
    Cycle,
    Ts,
    Sp,
    Maxflow,
    Bgm,
    Hp,
}

impl TaskArg {
    fn kind(self) -> TaskKind {
        match self {
            TaskArg::Connect => TaskKind::Connect,
            TaskArg::Cycle => TaskKind::Cycle,
            TaskArg::Ts => TaskKind::Ts,
            TaskArg::Sp => TaskKind::Sp,
            TaskArg::Maxflow => TaskKind::MaxFlow,
            TaskArg::Bgm => TaskKind::Bgm,
            TaskArg::Hp => TaskKind::Hp,
        }
    }
}

#[derive(Args)]
struct StyleArgs {
    /// Layout engine.
    #[arg(long, default_value = "layered")]
    layout: String,
    /// Node shape.
    #[arg(long, default_value = "ellipse")]
    shape: String,
    /// Node outline style.
    #[arg(long, default_value = "solid")]
    outline: String,
    /// Edge thickness (w1..w4).
    #[arg(long, default_value = "w1")]
    thickness: String,
}

impl StyleArgs {
    fn resolve(&self) -> Result<GraphStyles, Error> {
        Ok(GraphStyles {
            layout: LayoutKind::from_slug(&self.layout)
                .ok_or_else(|| Error::Parameter(format!("unknown layout {:?}", self.layout)))?,
            node_shape: NodeShape::from_slug(&self.shape)
                .ok_or_else(|| Error::Parameter(format!("unknown shape {:?}", self.shape)))?,
            node_outline: NodeOutline::from_slug(&self.outline)
                .ok_or_else(|| Error::Parameter(format!("unknown outline {:?}", self.outline)))?,
            edge_thickness: EdgeThickness::from_slug(&self.thickness)
                .ok_or_else(|| Error::Parameter(format!("unknown thickness {:?}", self.thickness)))?,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate task instances as graph interchange files with a gold-answer sidecar.
    Generate {
        #[arg(long, value_enum)]
        task: TaskArg,
        /// Number of instances.
        #[arg(short = 'n', long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Override the node-count range, e.g. 5..9.
        #[arg(long)]
        nodes: Option<String>,
        /// Override the edge density in [0,1].
        #[arg(long)]
        density: Option<f64>,
    },
    /// Render a graph file to SVG (optionally DOT), or a whole augmentation axis.
    Render {
        graph: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output SVG path; defaults to the graph path with .svg.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write DOT text alongside the SVG.
        #[arg(long)]
        emit_dot: bool,
        /// Render every variant of one axis instead of a single image.
        #[arg(long)]
        augment: Option<String>,
    },
    /// Print the textual description of a graph file.
    Describe {
        graph: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the eight description template skeletons to a file.
        #[arg(long)]
        export_templates: Option<PathBuf>,
        /// Parse a description back and print the interchange JSON.
        #[arg(long)]
        parse: Option<PathBuf>,
    },
    /// Extract the k-hop subgraph around a center node.
    SampleSubgraph {
        graph: PathBuf,
        #[arg(long)]
        center: usize,
        #[arg(long, default_value_t = 2)]
        hops: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a dataset subset, or a real-world link-prediction /
    /// node-classification dataset.
    Build {
        /// Subset to build (base, augly, augns, augno, auget).
        #[arg(long, conflicts_with_all = ["link_pred", "node_class"])]
        subset: Option<String>,
        /// Fraction of the published per-task counts, in (0,1].
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated task filter, e.g. connect,cycle.
        #[arg(long)]
        tasks: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Build link prediction from this edge-list file.
        #[arg(long)]
        link_pred: Option<PathBuf>,
        /// Build node classification from this edge-list file.
        #[arg(long, conflicts_with = "link_pred")]
        node_class: Option<PathBuf>,
        /// Labels file for node classification.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Subgraph sampling hops for real-world builds.
        #[arg(long)]
        hops: Option<usize>,
        /// JSON config file; explicit flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Re-assign the 7:3 train/test split of an existing build.
    Split {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Print per-task statistics of a build.
    Stats {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Re-solve every record and fail on any mismatch.
    Verify {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Evaluate an endpoint over the test split of a build.
    Eval {
        #[arg(long)]
        manifest: PathBuf,
        /// Endpoint config JSON file.
        #[arg(long)]
        endpoint: PathBuf,
        /// text_only, vision_only, or vision_text.
        #[arg(long, default_value = "vision_text")]
        mode: String,
        /// Response cache directory (or set GVBENCH_CACHE_DIR).
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Exclude errored records from accuracy denominators.
        #[arg(long)]
        exclude_errors: bool,
        /// Rasterizer hook: `cmd <in.svg> <out.png>` before sending images.
        #[arg(long)]
        rasterize: Option<String>,
    },
}

fn parse_range(text: &str) -> Result<(usize, usize), Error> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| Error::Parameter(format!("expected MIN..MAX, got {text:?}")))?;
    let lo = lo.trim().parse().map_err(|_| Error::Parameter(format!("bad bound {lo:?}")))?;
    let hi = hi.trim().parse().map_err(|_| Error::Parameter(format!("bad bound {hi:?}")))?;
    Ok((lo, hi))
}

fn read_graph(path: &Path) -> Result<Graph, Error> {
    let text = std::fs::read_to_string(path)?;
    Graph::from_interchange_json(&text)
}

/// Optional JSON config file backing the build and eval flags.
#[derive(Default, serde::Deserialize, serde::Serialize)]
struct FileConfig {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    subset: Option<String>,
    #[serde(default)]
    scale: Option<f64>,
    #[serde(default)]
    jobs: Option<usize>,
    #[serde(default)]
    hops: Option<usize>,
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, Error> {
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok(serde_json::from_str(&text)?)
        }
        None => Ok(FileConfig::default()),
    }
}

fn write_run_config(dir: &Path, value: &serde_json::Value) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("run_config.json"), serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn install_jobs(jobs: Option<usize>) {
    if let Some(jobs) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate { task, count, seed, out, nodes, density } => {
            std::fs::create_dir_all(&out)?;
            let task = task.kind();
            write_run_config(&out, &serde_json::json!({
                "command": "generate",
                "task": task.slug(),
                "count": count,
                "seed": seed,
                "nodes": nodes,
                "density": density,
            }))?;
            let mut answers = String::new();
            for index in 0..count {
                let mut spec = GeneratorSpec::for_task(
                    task,
                    gvbench_core::seeding::mix(seed, &[index as u64]),
                )?;
                if let Some(range) = &nodes {
                    spec.node_range = parse_range(range)?;
                }
                if density.is_some() {
                    spec.edge_density = density;
                }
                let inst = generate_instance(&spec)?;
                let id = format!("{}-{index:05}", task.slug());
                std::fs::write(
                    out.join(format!("{id}.json")),
                    inst.graph.to_interchange_json(),
                )?;
                answers.push_str(&serde_json::to_string(&serde_json::json!({
                    "id": id,
                    "task": task.slug(),
                    "params": inst.params,
                    "answer": inst.gold.canonical_text,
                }))?);
                answers.push('\n');
            }
            std::fs::write(out.join("answers.jsonl"), answers)?;
            println!("wrote {count} instances to {}", out.display());
            Ok(())
        }
        Command::Render { graph, style, seed, out, emit_dot, augment: axis } => {
            let g = read_graph(&graph)?;
            let gamma = BasicStyles::default();
            let delta = style.resolve()?;
            let stem = out.clone().unwrap_or_else(|| graph.with_extension("svg"));
            match axis {
                Some(axis_slug) => {
                    let axis = AugmentAxis::from_slug(&axis_slug).ok_or_else(|| {
                        Error::Parameter(format!("unknown augmentation axis {axis_slug:?}"))
                    })?;
                    let images = augment(&g, &gamma, &delta, axis, seed)?;
                    let base = stem.with_extension("");
                    for (image, variant) in images.iter().zip(axis.variant_slugs()) {
                        let path = PathBuf::from(format!(
                            "{}_{}_{}.svg",
                            base.display(),
                            axis.slug(),
                            variant
                        ));
                        std::fs::write(&path, &image.svg_bytes)?;
                        println!("wrote {}", path.display());
                    }
                }
                None => {
                    let image = render(&g, &gamma, &delta, seed)?;
                    std::fs::write(&stem, &image.svg_bytes)?;
                    println!("wrote {}", stem.display());
                    if emit_dot {
                        let dot_path = stem.with_extension("dot");
                        std::fs::write(&dot_path, dot::export(&g, &gamma, &delta))?;
                        println!("wrote {}", dot_path.display());
                    }
                }
            }
            Ok(())
        }
        Command::Describe { graph, out, export_templates: templates, parse } => {
            if let Some(path) = templates {
                export_templates(&path)?;
                println!("wrote {}", path.display());
                return Ok(());
            }
            if let Some(path) = parse {
                let text = std::fs::read_to_string(&path)?;
                let g = parse_description(text.trim_end_matches('\n'))?;
                println!("{}", g.to_interchange_json());
                return Ok(());
            }
            let path = graph.ok_or_else(|| Error::Parameter("missing graph file".into()))?;
            let description = describe(&read_graph(&path)?);
            match out {
                Some(out_path) => std::fs::write(out_path, description.text)?,
                None => println!("{}", description.text),
            }
            Ok(())
        }
        Command::SampleSubgraph { graph, center, hops, out } => {
            let g = read_graph(&graph)?;
            let sample = sample_k_hop(&g, center, hops)?;
            let json = serde_json::json!({
                "center_original_id": sample.center_original_id,
                "hops": sample.hops,
                "original_ids": sample.original_ids(),
                "subgraph": serde_json::from_str::<serde_json::Value>(
                    &sample.subgraph.to_interchange_json()
                )?,
            });
            let text = serde_json::to_string_pretty(&json)?;
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => println!("{text}"),
            }
            Ok(())
        }
        Command::Build {
            subset, scale, seed, out, tasks, jobs, link_pred, node_class, labels, hops, config,
        } => {
            let file = load_config(config.as_deref())?;
            let seed = seed.or(file.seed).unwrap_or(0);
            let out = out
                .or(file.out)
                .ok_or_else(|| Error::Parameter("missing --out directory".into()))?;
            install_jobs(jobs.or(file.jobs));
            if let Some(edges) = link_pred {
                let hops = hops.or(file.hops).unwrap_or(2);
                let options = RealWorldOptions::new(&edges, hops, seed, &out);
                write_run_config(&out, &serde_json::json!({
                    "command": "build", "link_pred": edges, "hops": hops, "seed": seed,
                }))?;
                let manifest = build_link_prediction(&options)?;
                println!(
                    "built link prediction: {} records under {}",
                    manifest.split.len(),
                    out.display()
                );
                return Ok(());
            }
            if let Some(edges) = node_class {
                let labels = labels
                    .ok_or_else(|| Error::Parameter("node classification needs --labels".into()))?;
                let hops = hops.or(file.hops).unwrap_or(2);
                let mut options = RealWorldOptions::new(&edges, hops, seed, &out);
                options.labels_file = Some(labels.clone());
                write_run_config(&out, &serde_json::json!({
                    "command": "build", "node_class": edges, "labels": labels,
                    "hops": hops, "seed": seed,
                }))?;
                let (manifest, warnings) = build_node_classification(&options)?;
                for warning in &warnings {
                    eprintln!("warning: {warning}");
                }
                println!(
                    "built node classification: {} records under {}",
                    manifest.split.len(),
                    out.display()
                );
                return Ok(());
            }
            let subset_slug = subset.or(file.subset).unwrap_or_else(|| "base".into());
            let subset = Subset::from_slug(&subset_slug)
                .ok_or_else(|| Error::Parameter(format!("unknown subset {subset_slug:?}")))?;
            let scale = scale.or(file.scale).unwrap_or(1.0);
            let mut options = BuildOptions::new(subset, scale, seed, &out);
            if let Some(list) = tasks {
                let mut kinds = Vec::new();
                for slug in list.split(',') {
                    let kind = TaskKind::from_slug(slug.trim()).ok_or_else(|| {
                        Error::Parameter(format!("unknown task {slug:?}"))
                    })?;
                    kinds.push(kind);
                }
                options.tasks = Some(kinds);
            }
            write_run_config(&out, &serde_json::json!({
                "command": "build",
                "subset": subset.slug(),
                "scale": scale,
                "seed": seed,
                "tasks": options.tasks.as_ref().map(|t| {
                    t.iter().map(|k| k.slug()).collect::<Vec<_>>()
                }),
            }))?;
            let manifest = build_subset(&options)?;
            let total: usize = manifest.tasks.values().map(|c| c.records).sum();
            println!("built {} records under {}", total, out.display());
            Ok(())
        }
        Command::Split { manifest, seed } => {
            let result = resplit(&manifest, seed)?;
            let train = result.split.values().filter(|s| matches!(s, gvbench_core::dataset::Split::Train)).count();
            let test = result.split.len() - train;
            println!("re-split {}: {train} train / {test} test", manifest.display());
            Ok(())
        }
        Command::Stats { manifest, json } => {
            let (_, records) = load_build(&manifest)?;
            let report = stats(&records)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!(
                    "{:<12}{:>10}{:>10}{:>12}{:>12}{:>8}",
                    "Task", "instances", "records", "avg nodes", "avg edges", "yes%"
                );
                for (slug, task) in &report.per_task {
                    let fmt_opt = |v: Option<f64>| match v {
                        Some(x) => format!("{x:.2}"),
                        None => "-".to_string(),
                    };
                    println!(
                        "{slug:<12}{:>10}{:>10}{:>12}{:>12}{:>8}",
                        task.instances,
                        task.records,
                        fmt_opt(task.avg_nodes),
                        fmt_opt(task.avg_edges),
                        fmt_opt(task.yes_fraction.map(|f| 100.0 * f)),
                    );
                }
                println!("total records: {}", report.total_records);
            }
            Ok(())
        }
        Command::Verify { manifest } => {
            let issues = verify_build(&manifest)?;
            if issues.is_empty() {
                println!("verify: all records check out");
                Ok(())
            } else {
                for issue in &issues {
                    eprintln!("{}: {}", issue.record_id, issue.message);
                }
                Err(Error::Verification(format!("{} issue(s) found", issues.len())))
            }
        }
        Command::Eval { manifest, endpoint, mode, cache, jobs, report, exclude_errors, rasterize } => {
            let (m, records) = load_build(&manifest)?;
            let endpoint_text = std::fs::read_to_string(&endpoint)?;
            let endpoint: ModelEndpoint = serde_json::from_str(&endpoint_text)?;
            let mode = EvalMode::from_slug(&mode)
                .ok_or_else(|| Error::Parameter(format!("unknown mode {mode:?}")))?;
            let cache_dir = cache.or_else(|| std::env::var_os("GVBENCH_CACHE_DIR").map(PathBuf::from));
            let options = EvalOptions {
                jobs: jobs.unwrap_or(8),
                cache_dir,
                exclude_errors,
                rasterize_cmd: rasterize,
            };
            let client = HttpChatClient::new(endpoint.clone())?;
            let run = run_eval(&manifest, &m, &records, &endpoint, &client, mode, &options)?;
            print!("{}", run.report.table());
            println!("requests made: {}", run.requests_made);
            if let Some(report_path) = report {
                if let Some(parent) = report_path.parent() {
                    if !parent.as_os_str().is_empty() {
                        std::fs::create_dir_all(parent)?;
                    }
                }
                std::fs::write(&report_path, serde_json::to_string_pretty(&run.report)?)?;
                let snapshot = report_path.with_file_name("run_config.json");
                std::fs::write(&snapshot, serde_json::to_string_pretty(&serde_json::json!({
                    "command": "eval",
                    "endpoint": endpoint.identity(),
                    "mode": mode.slug(),
                    "exclude_errors": exclude_errors,
                    "config_digest": run.report.config_digest,
                }))?)?;
                println!("wrote {}", report_path.display());
            }
            if !run.report.monotonicity_ok {
                return Err(Error::Verification(
                    "validity accuracy fell below exact-match accuracy".into(),
                ));
            }
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(Error::Verification(message)) => {
            eprintln!("error: {message}");
            std::process::exit(3);
        }
        Err(error) => {
            eprintln!("error: {error}");
            std::process::exit(1);
        }
    }
}
