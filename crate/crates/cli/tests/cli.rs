//! End-to-end command-line checks: exit codes, file outputs, and a full
//! eval round against a loopback chat endpoint.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gvbench"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn assert_success(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn generate_writes_graphs_and_sidecar_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gen");
    let out_str = out.to_str().unwrap();
    let output = run(&["generate", "--task", "cycle", "-n", "5", "--seed", "1", "--out", out_str]);
    assert_success(&output);
    for index in 0..5 {
        assert!(out.join(format!("cycle-{index:05}.json")).exists());
    }
    let answers = std::fs::read_to_string(out.join("answers.jsonl")).unwrap();
    assert_eq!(answers.lines().count(), 5);
    for line in answers.lines() {
        let value: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(value["answer"] == "Yes." || value["answer"] == "No.");
    }

    // Re-running with identical flags produces identical files.
    let again = dir.path().join("gen2");
    let output = run(&["generate", "--task", "cycle", "-n", "5", "--seed", "1", "--out", again.to_str().unwrap()]);
    assert_success(&output);
    for index in 0..5 {
        let name = format!("cycle-{index:05}.json");
        assert_eq!(
            std::fs::read(out.join(&name)).unwrap(),
            std::fs::read(again.join(&name)).unwrap()
        );
    }
}

#[test]
fn unknown_task_is_a_usage_error() {
    let output = run(&["generate", "--task", "nosuch", "-n", "1", "--out", "/tmp/unused"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.to_lowercase().contains("usage") || stderr.contains("possible values"));
}

#[test]
fn render_is_deterministic_and_augment_fans_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gen");
    assert_success(&run(&["generate", "--task", "sp", "-n", "1", "--seed", "3", "--out", out.to_str().unwrap()]));
    let graph = out.join("sp-00000.json");
    let svg_a = dir.path().join("a.svg");
    let svg_b = dir.path().join("b.svg");
    assert_success(&run(&["render", graph.to_str().unwrap(), "--layout", "circular", "--out", svg_a.to_str().unwrap(), "--emit-dot"]));
    assert_success(&run(&["render", graph.to_str().unwrap(), "--layout", "circular", "--out", svg_b.to_str().unwrap()]));
    assert_eq!(std::fs::read(&svg_a).unwrap(), std::fs::read(&svg_b).unwrap());
    assert!(dir.path().join("a.dot").exists());

    let stem = dir.path().join("aug.svg");
    assert_success(&run(&["render", graph.to_str().unwrap(), "--augment", "layout", "--out", stem.to_str().unwrap()]));
    let count = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("aug_layout_"))
        .count();
    assert_eq!(count, 6);
}

#[test]
fn render_rejects_malformed_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    let output = run(&["render", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn describe_prints_frozen_template_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("triangle.json");
    std::fs::write(&path, r#"{"directed":false,"n":3,"edges":[[0,1],[1,2],[2,0]]}"#).unwrap();
    let output = run(&["describe", path.to_str().unwrap()]);
    assert_success(&output);
    let text = String::from_utf8_lossy(&output.stdout);
    assert_eq!(
        text.trim_end(),
        "In an undirected graph, (i,j) means that node i and node j are connected with an undirected edge. The nodes are numbered from 0 to 2, and the edges are: (0, 1) , (1, 2) , (2, 0)"
    );
}

#[test]
fn build_verify_split_cycle_is_clean_and_tampering_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("build");
    let out_str = out.to_str().unwrap();
    assert_success(&run(&[
        "build", "--subset", "auget", "--scale", "0.002", "--seed", "8",
        "--tasks", "maxflow,bgm", "--out", out_str,
    ]));
    assert!(out.join("run_config.json").exists());
    assert!(out.join("manifest.json").exists());

    // Multiplier law: AUGET renders 4 variants per instance.
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["tasks"]["maxflow"]["records"].as_u64().unwrap(), 4 * manifest["tasks"]["maxflow"]["instances"].as_u64().unwrap());

    assert_success(&run(&["verify", "--manifest", out_str]));
    assert_success(&run(&["split", "--manifest", out_str, "--seed", "77"]));
    assert_success(&run(&["verify", "--manifest", out_str]));
    assert_success(&run(&["stats", "--manifest", out_str]));

    // Tamper with one answer: verify must exit 3.
    let records_path = out.join("records.jsonl");
    let text = std::fs::read_to_string(&records_path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[0] = lines[0].replace("\"answer\":\"", "\"answer\":\"999");
    std::fs::write(&records_path, lines.join("\n")).unwrap();
    let output = run(&["verify", "--manifest", out_str]);
    assert_eq!(output.status.code(), Some(3));
}

/// Loopback chat endpoint answering every request with a constant reply,
/// recording whether any prompt contained a graph description block.
fn spawn_constant_server(reply: &'static str) -> (String, std::sync::Arc<std::sync::atomic::AtomicBool>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let saw_description = std::sync::Arc::new(std::sync::atomic::AtomicBool::new(false));
    let flag = saw_description.clone();
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { break };
            let flag = flag.clone();
            std::thread::spawn(move || {
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut line = String::new();
                reader.read_line(&mut line).ok();
                let mut content_length = 0usize;
                loop {
                    let mut header = String::new();
                    if reader.read_line(&mut header).is_err() {
                        return;
                    }
                    let header = header.trim_end();
                    if header.is_empty() {
                        break;
                    }
                    if let Some(v) = header.to_lowercase().strip_prefix("content-length:") {
                        content_length = v.trim().parse().unwrap_or(0);
                    }
                }
                let mut body = vec![0u8; content_length];
                reader.read_exact(&mut body).ok();
                if String::from_utf8_lossy(&body).contains("the nodes are numbered from") {
                    flag.store(true, std::sync::atomic::Ordering::SeqCst);
                }
                let payload = serde_json::json!({
                    "choices": [{"message": {"role": "assistant", "content": reply}}]
                })
                .to_string();
                let response = format!(
                    "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{payload}",
                    payload.len()
                );
                stream.write_all(response.as_bytes()).ok();
            });
        }
    });
    (format!("http://{addr}/v1/chat/completions"), saw_description)
}

fn write_endpoint_config(dir: &Path, url: &str) -> std::path::PathBuf {
    let path = dir.join("endpoint.json");
    std::fs::write(
        &path,
        serde_json::json!({
            "base_url": url,
            "model": "constant-yes",
            "supports_images": true,
            "max_retries": 1,
            "backoff_ms": 10,
        })
        .to_string(),
    )
    .unwrap();
    path
}

#[test]
fn eval_vision_only_uses_vo_query_and_caches() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("build");
    let out_str = out.to_str().unwrap();
    assert_success(&run(&[
        "build", "--subset", "base", "--scale", "0.002", "--seed", "6",
        "--tasks", "connect,cycle", "--out", out_str,
    ]));

    let (url, saw_description) = spawn_constant_server("Yes.");
    let endpoint = write_endpoint_config(dir.path(), &url);
    let cache = dir.path().join("cache");
    let report = dir.path().join("report.json");
    let output = run(&[
        "eval", "--manifest", out_str,
        "--endpoint", endpoint.to_str().unwrap(),
        "--mode", "vision_only",
        "--cache", cache.to_str().unwrap(),
        "--report", report.to_str().unwrap(),
        "--jobs", "4",
    ]);
    assert_success(&output);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("Connect"));
    assert!(stdout.contains("Avg"));
    assert!(report.exists());
    assert!(dir.path().join("run_config.json").exists());
    // Vision-only never sends the textual description.
    assert!(!saw_description.load(std::sync::atomic::Ordering::SeqCst));
    let report_value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report_value["mode"], "vision_only");
    assert!(report_value["monotonicity_ok"].as_bool().unwrap());

    // Warm cache: zero requests on the second run.
    let output = run(&[
        "eval", "--manifest", out_str,
        "--endpoint", endpoint.to_str().unwrap(),
        "--mode", "vision_only",
        "--cache", cache.to_str().unwrap(),
    ]);
    assert_success(&output);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("requests made: 0"), "{stdout}");
}

#[test]
fn build_config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    let out = dir.path().join("from-config");
    std::fs::write(
        &config,
        serde_json::json!({
            "seed": 41,
            "scale": 0.002,
            "subset": "base",
            "out": out,
        })
        .to_string(),
    )
    .unwrap();
    assert_success(&run(&[
        "build", "--config", config.to_str().unwrap(), "--tasks", "hp",
    ]));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"].as_u64(), Some(41));
    assert_eq!(manifest["tasks"]["hp"]["instances"].as_u64(), Some(2));

    // A flag overrides the file's seed.
    let out2 = dir.path().join("override");
    assert_success(&run(&[
        "build", "--config", config.to_str().unwrap(), "--tasks", "hp",
        "--seed", "42", "--out", out2.to_str().unwrap(),
    ]));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out2.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"].as_u64(), Some(42));
}

#[test]
fn real_world_build_commands_work() {
    let dir = tempfile::tempdir().unwrap();
    // Small synthetic edge list with sparse ids and reverse duplicates.
    let edges_path = dir.path().join("edges.txt");
    let mut text = String::from("# toy network\n");
    let pairs = [
        (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9),
        (9, 10), (0, 5), (2, 8), (1, 7), (3, 9), (4, 10), (0, 9), (2, 6), (5, 10),
    ];
    for (u, v) in pairs {
        text.push_str(&format!("{} {}\n{} {}\n", u * 2, v * 2, v * 2, u * 2));
    }
    std::fs::write(&edges_path, text).unwrap();

    let lp_out = dir.path().join("lp");
    assert_success(&run(&[
        "build", "--link-pred", edges_path.to_str().unwrap(),
        "--hops", "2", "--seed", "3", "--out", lp_out.to_str().unwrap(),
    ]));
    assert!(lp_out.join("manifest.json").exists());
    let records = std::fs::read_to_string(lp_out.join("records.jsonl")).unwrap();
    assert_eq!(records.lines().count(), 2 * pairs.len());

    let labels_path = dir.path().join("labels.txt");
    let mut labels = String::new();
    for v in 0..=10 {
        labels.push_str(&format!("{} {}\n", v * 2, if v % 2 == 0 { "even" } else { "odd" }));
    }
    std::fs::write(&labels_path, labels).unwrap();
    let nc_out = dir.path().join("nc");
    assert_success(&run(&[
        "build", "--node-class", edges_path.to_str().unwrap(),
        "--labels", labels_path.to_str().unwrap(),
        "--hops", "1", "--seed", "3", "--out", nc_out.to_str().unwrap(),
    ]));
    let records = std::fs::read_to_string(nc_out.join("records.jsonl")).unwrap();
    assert_eq!(records.lines().count(), 11);
    for line in records.lines() {
        let value: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(value["answer"] == "even" || value["answer"] == "odd");
    }
}
