//! Run manifests. The manifest embedded in an output holds everything needed
//! to reproduce it; wall-clock timings and the thread count only go to the
//! `<out>.manifest.json` sidecar so that reruns stay byte-identical.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub inputs: Vec<InputDigest>,
    pub version: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseTiming {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    #[serde(flatten)]
    manifest: &'a RunManifest,
    threads: usize,
    timings: &'a [PhaseTiming],
}

pub struct Recorder {
    pub manifest: RunManifest,
    timings: Vec<PhaseTiming>,
}

impl Recorder {
    pub fn new(command: &str, config: &impl Serialize) -> CliResult<Self> {
        Ok(Recorder {
            manifest: RunManifest {
                command: command.to_string(),
                config: serde_json::to_value(config)?,
                seeds: Vec::new(),
                inputs: Vec::new(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            timings: Vec::new(),
        })
    }

    pub fn seed(&mut self, seed: u64) {
        if !self.manifest.seeds.contains(&seed) {
            self.manifest.seeds.push(seed);
        }
    }

    /// Reads `path` and records its digest.
    pub fn read(&mut self, path: &Path) -> CliResult<Vec<u8>> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.manifest.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(bytes)
    }

    pub fn read_string(&mut self, path: &Path) -> CliResult<String> {
        String::from_utf8(self.read(path)?).map_err(|_| CliError::input(format!("{}: not UTF-8", path.display())))
    }

    pub fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.record(phase, start.elapsed());
        out
    }

    pub fn record(&mut self, phase: &str, elapsed: Duration) {
        self.timings.push(PhaseTiming {
            phase: phase.to_string(),
            seconds: elapsed.as_secs_f64(),
        });
    }

    pub fn write_sidecar(&self, out: &Path) -> CliResult<()> {
        let sidecar = Sidecar {
            manifest: &self.manifest,
            threads: rayon::current_num_threads(),
            timings: &self.timings,
        };
        let path = sidecar_path(out);
        let text = serde_json::to_string_pretty(&sidecar)? + "\n";
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))
    }
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
