//! Dataset record schema and JSON-lines storage.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::oracles::TaskKind;

use super::Subset;

/// Provenance metadata carried by every record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordMeta {
    /// Per-record seed; regenerates the instance for synthetic tasks.
    pub seed: u64,
    pub subset: Subset,
    /// Augmentation variant tag, e.g. `base_default` or `layout_spring`.
    pub variant: String,
    pub graph_hash: String,
    /// Candidate pair in source-graph ids (real-world link prediction).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<(u64, u64)>,
    /// Target node in source-graph ids (real-world node classification).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<u64>,
}

/// One dataset sample: image reference, queries, and gold answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: String,
    pub task: TaskKind,
    /// Image path relative to the manifest directory.
    pub image: String,
    pub query: String,
    pub vo_query: String,
    pub answer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alt_answers: Option<Vec<String>>,
    pub meta: RecordMeta,
}

impl DatasetRecord {
    /// The instance key shared by all augmentation variants of one sample.
    pub fn instance_key(&self) -> &str {
        instance_key_of(&self.id)
    }
}

/// Strip the trailing `-{variant}` segment from a record id.
pub fn instance_key_of(record_id: &str) -> &str {
    match record_id.rfind('-') {
        Some(at) => &record_id[..at],
        None => record_id,
    }
}

/// Write records as JSON lines, one object per line, in input order.
pub fn write_records(path: &Path, records: &[DatasetRecord]) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<DatasetRecord>> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut records = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: DatasetRecord = serde_json::from_str(&line).map_err(|e| {
            Error::Parse { position: index, message: format!("record line {}: {e}", index + 1) }
        })?;
        records.push(record);
    }
    Ok(records)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{}", hex::encode(hasher.finalize()))
}

pub fn file_digest(path: &Path) -> Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str) -> DatasetRecord {
        DatasetRecord {
            id: id.into(),
            task: TaskKind::Connect,
            image: "images/x.svg".into(),
            query: "q".into(),
            vo_query: "v".into(),
            answer: "Yes.".into(),
            alt_answers: None,
            meta: RecordMeta {
                seed: 9,
                subset: Subset::Base,
                variant: "base_default".into(),
                graph_hash: "sha256:0".into(),
                pair: None,
                target: None,
            },
        }
    }

    #[test]
    fn jsonl_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.jsonl");
        let records = vec![record("connect-00000-base_default"), record("connect-00001-base_default")];
        write_records(&path, &records).unwrap();
        assert_eq!(read_records(&path).unwrap(), records);
    }

    #[test]
    fn schema_field_names_are_fixed() {
        let line = serde_json::to_string(&record("a-b")).unwrap();
        assert_eq!(
            line,
            "{\"id\":\"a-b\",\"task\":\"connect\",\"image\":\"images/x.svg\",\"query\":\"q\",\"vo_query\":\"v\",\"answer\":\"Yes.\",\"meta\":{\"seed\":9,\"subset\":\"BASE\",\"variant\":\"base_default\",\"graph_hash\":\"sha256:0\"}}"
        );
    }

    #[test]
    fn instance_key_strips_variant() {
        assert_eq!(instance_key_of("connect-00001-layout_spring"), "connect-00001");
        assert_eq!(instance_key_of("linkpred-test-00042-pos-base_default"), "linkpred-test-00042-pos");
    }
}
