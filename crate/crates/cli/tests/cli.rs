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

use std::path::Path;
use std::process::{Command, Output};

fn tts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tts"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn construct_then_verify_f() {
    let dir = tempfile::tempdir().unwrap();
    let out = tts(&["construct", "config", "F"]);
    assert!(out.status.success());
    let f = write(dir.path(), "f.design", &stdout(&out));
    let out = tts(&[
        "verify",
        &f,
        "--checks",
        "blockcount,simple,bipartite",
        "--expect-blocks",
        "136",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["reports"][0]["witness"]["blocks"], 136);
}

#[test]
fn wrong_block_count_fails() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "f.design",
        &stdout(&tts(&["construct", "config", "T"])),
    );
    let out = tts(&[
        "verify",
        &f,
        "--checks",
        "blockcount",
        "--expect-blocks",
        "17",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "fail");
}

#[test]
fn bad_input_exits_with_error_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.txt", "garbage\n");
    assert_eq!(tts(&["verify", &f]).status.code(), Some(3));
    let missing = dir.path().join("none").display().to_string();
    assert_eq!(tts(&["verify", &missing]).status.code(), Some(3));
}

#[test]
fn factorize_prints_one_line_per_factor() {
    let out = tts(&["factorize", "--w", "12", "--diffs", "1,2,3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(lines.len(), 6);
    for l in lines {
        assert_eq!(l.split_whitespace().count(), 7, "{l}");
    }
}

#[test]
fn census_of_order_seven() {
    let out = tts(&["search", "census", "--v", "7"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["exhaustive"], true);
    assert_eq!(v["connected_bipartite_count"], 120);
    assert_eq!(v["hamiltonian_count"], 120);
    assert_eq!(v["counterexamples"], 0);
}

#[test]
fn embed_writes_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = tts(&["search", "pair", "--v", "15"]);
    assert!(out.status.success());
    let seed = write(dir.path(), "seed.design", &stdout(&out));
    let od = dir.path().join("out");
    let os = od.display().to_string();
    let out = tts(&["embed", "--seed-file", &seed, "--v", "43", "--out", &os]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(od.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "embed");
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
    let design = od.join("tts43.design").display().to_string();
    let out = tts(&[
        "verify",
        &design,
        "--checks",
        "complete,simple,blockcount,bipartite,connected",
        "--expect-blocks",
        "602",
    ]);
    assert_eq!(json(&out)["verdict"], "pass");
}

#[test]
fn embed_rejects_unsupported_orders() {
    let dir = tempfile::tempdir().unwrap();
    let seed = write(
        dir.path(),
        "seed.design",
        &stdout(&tts(&["search", "pair", "--v", "15"])),
    );
    assert_eq!(
        tts(&["embed", "--seed-file", &seed, "--v", "44"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verify_config_certifies_named_configuration() {
    let out = tts(&["verify", "config", "P"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["name"], "P");
    assert_eq!(v[0]["verified"], true);
    assert_eq!(v[0]["blocks"], 36);
}
