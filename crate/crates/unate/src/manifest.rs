//! Run manifests and the results directory layout
//! `runs/<timestamp>-<command>/{manifest.json, result.json, witness files}`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    /// Effective configuration after merging file and flags.
    pub config: BTreeMap<String, String>,
    pub config_digest: String,
    /// Input path to sha256 of its contents.
    pub input_digests: BTreeMap<String, String>,
    pub seeds: Vec<u64>,
    pub started: String,
    pub finished: String,
    pub status: crate::Status,
    /// sha256 of the canonical result with timing fields removed.
    pub result_digest: String,
}

/// Canonical form of a config map: `key=value` lines in key order.
pub fn config_digest(config: &BTreeMap<String, String>) -> String {
    let mut s = String::new();
    for (k, v) in config {
        s.push_str(k);
        s.push('=');
        s.push_str(v);
        s.push('\n');
    }
    sha256_hex(s.as_bytes())
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| k != "runtime_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

/// Digest of `result` ignoring every `runtime_ms` field. Object keys
/// serialize in sorted order, so equal values give equal digests.
pub fn result_digest(result: &Value) -> String {
    let mut v = result.clone();
    strip_timing(&mut v);
    sha256_hex(
        serde_json::to_string(&v)
            .expect("json values serialize")
            .as_bytes(),
    )
}

/// Everything a finished command hands over for persistence.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub input_digests: BTreeMap<String, String>,
    pub seeds: Vec<u64>,
    pub started: chrono::DateTime<chrono::Utc>,
    pub finished: chrono::DateTime<chrono::Utc>,
    pub status: crate::Status,
    pub result: Value,
    /// File name and contents.
    pub witnesses: Vec<(String, String)>,
}

impl RunRecord {
    pub fn manifest(&self) -> RunManifest {
        RunManifest {
            command: self.command.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_digest: config_digest(&self.config),
            config: self.config.clone(),
            input_digests: self.input_digests.clone(),
            seeds: self.seeds.clone(),
            started: self
                .started
                .to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            finished: self
                .finished
                .to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            status: self.status,
            result_digest: result_digest(&self.result),
        }
    }

    /// Writes a fresh run directory under `root` and returns its path. A
    /// numeric suffix is added when two runs share a timestamp.
    pub fn write(&self, root: &Path) -> Result<PathBuf, CliError> {
        fs::create_dir_all(root)?;
        let stem = format!(
            "{}-{}",
            self.started.format("%Y%m%dT%H%M%S%.3fZ"),
            self.command
        );
        let mut dir = root.join(&stem);
        let mut i = 1;
        loop {
            match fs::create_dir(&dir) {
                Ok(()) => break,
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    dir = root.join(format!("{stem}-{i}"));
                    i += 1;
                }
                Err(e) => return Err(e.into()),
            }
        }
        for (name, body) in &self.witnesses {
            fs::write(dir.join(name), body)?;
        }
        fs::write(dir.join("result.json"), to_pretty(&self.result))?;
        fs::write(dir.join("manifest.json"), to_pretty(&self.manifest()))?;
        Ok(dir)
    }
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn read_manifest(path: &Path) -> Result<RunManifest, CliError> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(crate::input_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn digest_ignores_timing_and_key_order() {
        let a = json!({"x": 1, "runtime_ms": 5, "inner": [{"runtime_ms": 9, "y": "2"}]});
        let b = json!({"inner": [{"y": "2", "runtime_ms": 1}], "runtime_ms": 70, "x": 1});
        assert_eq!(result_digest(&a), result_digest(&b));
        assert_ne!(result_digest(&a), result_digest(&json!({"x": 2})));
    }

    #[test]
    fn manifest_round_trips() {
        let now = chrono::Utc::now();
        let rec = RunRecord {
            command: "census".into(),
            config: BTreeMap::from([("n".into(), "3".into())]),
            input_digests: BTreeMap::new(),
            seeds: vec![7],
            started: now,
            finished: now,
            status: crate::Status::Pass,
            result: json!({"total": 1}),
            witnesses: vec![],
        };
        let m = rec.manifest();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), m);
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
