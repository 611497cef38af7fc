use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anomaly_core::io::to_canonical_json;
use serde::Serialize;
use serde_json::{json, Value};

/// Relative output paths are resolved against this directory when it is set.
pub const OUT_DIR_VAR: &str = "ANOMALY_OUT_DIR";

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: &'static str,
    pub details: Value,
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub seed: u64,
    pub config: Value,
    pub checks: Vec<CheckResult>,
    pub result: BTreeMap<String, Value>,
    timings: Option<BTreeMap<String, f64>>,
    started: Instant,
}

impl Report {
    pub fn new(command: &'static str, seed: u64, config: Value, timing: bool) -> Report {
        Report {
            command,
            seed,
            config,
            checks: Vec::new(),
            result: BTreeMap::new(),
            timings: timing.then(BTreeMap::new),
            started: Instant::now(),
        }
    }

    /// Records a check; `details` carries the offending data on failure.
    pub fn check(&mut self, name: impl Into<String>, passed: bool, details: impl Serialize) {
        let details = serde_json::to_value(details).unwrap_or(Value::Null);
        self.checks.push(CheckResult { name: name.into(), status: if passed { "pass" } else { "fail" }, details });
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.result.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn lap(&mut self, key: &str) {
        if let Some(t) = self.timings.as_mut() {
            t.insert(key.to_string(), self.started.elapsed().as_secs_f64());
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == "pass")
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "config": self.config,
            "checks": self.checks,
            "result": self.result,
            "seed": self.seed,
            "status": if self.passed() { "pass" } else { "fail" },
            "versions": {
                "anomaly-cli": env!("CARGO_PKG_VERSION"),
                "anomaly-core": anomaly_core::VERSION,
            },
        });
        if let Some(t) = &self.timings {
            v["timing_seconds"] = json!(t);
        }
        v
    }
}

pub fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes sorted-key JSON to `path`, or to stdout when `path` is `None`.
pub fn emit(value: &impl Serialize, path: Option<&Path>) -> Result<(), String> {
    let text = to_canonical_json(value).map_err(|e| e.to_string())?;
    match path {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(p) => {
            let p = resolve(p);
            std::fs::write(&p, text + "\n").map_err(|e| format!("cannot write {}: {e}", p.display()))
        }
    }
}
