//! Output sink and the per-run manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Serialize)]
struct Digest256 {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
pub struct RunManifest {
    command: String,
    args: Vec<String>,
    seed: u64,
    version: &'static str,
    outputs: Vec<Digest256>,
}

/// Collects outputs, then writes them and the manifest together.
pub struct Outputs {
    files: Vec<(PathBuf, String)>,
    stdout: String,
}

impl Outputs {
    pub fn new() -> Self {
        Self {
            files: Vec::new(),
            stdout: String::new(),
        }
    }

    pub fn file(&mut self, path: PathBuf, content: String) {
        self.files.push((path, content));
    }

    pub fn print(&mut self, content: &str) {
        self.stdout.push_str(content);
    }

    /// Writes everything. With `manifest_path` the manifest goes to that file,
    /// otherwise to stderr unless `quiet`.
    pub fn finish(
        self,
        command: &str,
        seed: u64,
        manifest_path: Option<PathBuf>,
        quiet: bool,
    ) -> Result<(), CliError> {
        let mut outputs = Vec::new();
        for (path, content) in &self.files {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| {
                    CliError::Usage(format!("cannot create {}: {e}", dir.display()))
                })?;
            }
            std::fs::write(path, content)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            outputs.push(Digest256 {
                path: path.display().to_string(),
                sha256: digest(content),
            });
        }
        if !self.stdout.is_empty() || self.files.is_empty() {
            print!("{}", self.stdout);
            outputs.push(Digest256 {
                path: "-".into(),
                sha256: digest(&self.stdout),
            });
        }
        let manifest = RunManifest {
            command: command.into(),
            args: std::env::args().skip(1).collect(),
            seed,
            version: env!("CARGO_PKG_VERSION"),
            outputs,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("plain data") + "\n";
        match manifest_path {
            Some(p) => std::fs::write(&p, text)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?,
            None if !quiet => eprint!("{text}"),
            None => {}
        }
        Ok(())
    }
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// `prefix` with `suffix` appended to the file name.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}
