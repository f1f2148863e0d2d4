// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! JSON reports and run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

/// One checked property. `method` says how the verdict was reached, so a
/// search that ran out of budget is never read as a proof.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: Verdict,
    pub witness: serde_json::Value,
    pub method: String,
    pub runtime_ms: u128,
}

impl PropertyReport {
    pub fn new(
        property: &str,
        verdict: Verdict,
        witness: serde_json::Value,
        method: &str,
        runtime_ms: u128,
    ) -> Self {
        PropertyReport {
            property: property.to_string(),
            verdict,
            witness,
            method: method.to_string(),
            runtime_ms,
        }
    }

    pub fn pass_if(property: &str, ok: bool, witness: serde_json::Value, method: &str) -> Self {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        PropertyReport::new(property, verdict, witness, method, 0)
    }
}

/// Worst verdict wins: a failure beats an inconclusive result.
pub fn overall(reports: &[PropertyReport]) -> Verdict {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> std::io::Result<FileDigest> {
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: digest_bytes(&fs::read(path)?),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub runtime_ms: u128,
}

/// Collects output files for a command and writes them, with a manifest,
/// into the output directory; without one, the primary output goes to
/// stdout.
pub struct Output {
    dir: Option<PathBuf>,
    written: Vec<FileDigest>,
    stdout_used: bool,
}

impl Output {
    pub fn new(dir: Option<PathBuf>) -> std::io::Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)?;
        }
        Ok(Output {
            dir,
            written: Vec::new(),
            stdout_used: false,
        })
    }

    /// Writes `name` into the output directory, or prints it when there is
    /// none and `primary` is set.
    pub fn emit(&mut self, name: &str, content: &str, primary: bool) -> std::io::Result<()> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                fs::write(&path, content)?;
                self.written.push(FileDigest {
                    path: name.to_string(),
                    sha256: digest_bytes(content.as_bytes()),
                });
            }
            None if primary && !self.stdout_used => {
                print!("{content}");
                if !content.ends_with('\n') {
                    println!();
                }
                self.stdout_used = true;
            }
            None => {}
        }
        Ok(())
    }

    pub fn finish(self, mut manifest: RunManifest) -> std::io::Result<()> {
        if let Some(d) = &self.dir {
            manifest.outputs = self.written;
            let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            fs::write(d.join("manifest.json"), text + "\n")?;
        }
        Ok(())
    }
}
