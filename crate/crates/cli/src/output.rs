use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use deliberation_core::io::sig12;
use serde::Serialize;
use serde_json::Value;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;
pub const EXIT_THEOREM_VIOLATION: u8 = 4;
const EXIT_OTHER: u8 = 1;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: EXIT_USAGE,
            error: error.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure {
            code: EXIT_OTHER,
            error,
        }
    }
}

pub type CmdResult = Result<u8, Failure>;

/// Output directory with the file names a command is about to write.
pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    /// Creates the directory and refuses to clobber any of `names` unless forced.
    pub fn prepare(dir: &Path, names: &[&str], force: bool) -> Result<Self, Failure> {
        if !force {
            let existing: Vec<_> = names
                .iter()
                .map(|n| dir.join(n))
                .filter(|p| p.exists())
                .collect();
            if !existing.is_empty() {
                return Err(Failure::usage(anyhow!(
                    "refusing to overwrite {} without --force",
                    existing
                        .iter()
                        .map(|p| p.display().to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )));
            }
        }
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> anyhow::Result<()> {
        let text = to_json(value)?;
        let path = self.path(name);
        fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }

    pub fn write_bytes(&self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        let path = self.path(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
    }
}

/// Pretty JSON with every number rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_numbers(&mut v);
    Ok(serde_json::to_string_pretty(&v)?)
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let (false, Some(x)) = (n.is_i64() || n.is_u64(), n.as_f64()) {
                if let Some(r) = serde_json::Number::from_f64(sig12(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a, C: Serialize> {
    pub command: &'static str,
    pub problem_path: &'a Path,
    pub config_path: Option<&'a Path>,
    pub config: Option<&'a deliberation_core::DynamicsConfig>,
    pub controls: Option<&'a deliberation_core::Controls>,
    pub output_dir: &'a Path,
    pub seed: u64,
    pub parameters: C,
    pub version: &'static str,
}

pub const MANIFEST: &str = "manifest.json";
