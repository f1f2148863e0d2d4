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

//! Text format for triple systems.
//!
//! ```text
//! # optional comments
//! v=7 lambda=1 kind=complete
//! parts=2
//! 1 2 4 1
//! 2 3 5 2
//! ```
//!
//! The `parts=2` line is optional and enables a fourth column giving the
//! decomposition part of each block. Writing sorts blocks canonically, so
//! `write(parse(f)) == f` for files already in canonical form.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::design::{Block, Kind, Point, TripleSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line `v=<n> lambda=<n> kind=<partial|complete>`")]
    MissingHeader,
    #[error("header declares v={declared} but blocks use {used} distinct points")]
    PointCount { declared: usize, used: usize },
}

/// A parsed design file; `parts` is present when the file carries a part
/// column, aligned with `system.blocks()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignFile {
    pub system: TripleSystem,
    pub parts: Option<Vec<u8>>,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: usize, text: &str) -> Result<(usize, u32, Kind), FormatError> {
    let mut v = None;
    let mut lambda = None;
    let mut kind = None;
    for field in text.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("bad header field {field:?}")))?;
        match key {
            "v" => v = value.parse().ok(),
            "lambda" => lambda = value.parse().ok(),
            "kind" => {
                kind = match value {
                    "partial" => Some(Kind::Partial),
                    "complete" => Some(Kind::Complete),
                    _ => return Err(syntax(line, format!("unknown kind {value:?}"))),
                }
            }
            _ => return Err(syntax(line, format!("unknown header key {key:?}"))),
        }
    }
    match (v, lambda, kind) {
        (Some(v), Some(l), Some(k)) => Ok((v, l, k)),
        _ => Err(syntax(line, "header needs v, lambda and kind")),
    }
}

pub fn parse_design(text: &str) -> Result<DesignFile, FormatError> {
    let mut header = None;
    let mut with_parts = false;
    let mut rows: Vec<(Block, Option<u8>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(line, t)?);
            continue;
        }
        if t == "parts=2" {
            if !rows.is_empty() || with_parts {
                return Err(syntax(line, "`parts=2` must directly follow the header"));
            }
            with_parts = true;
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        let want = if with_parts { 4 } else { 3 };
        if fields.len() != want {
            return Err(syntax(
                line,
                format!("expected {want} fields, got {}", fields.len()),
            ));
        }
        let mut pts = [Point::Int(0); 3];
        for (slot, f) in pts.iter_mut().zip(&fields) {
            *slot = f.parse().map_err(|e| syntax(line, format!("{e}")))?;
        }
        let block = Block::new(pts[0], pts[1], pts[2]).map_err(|e| syntax(line, e.to_string()))?;
        let part = if with_parts {
            match fields[3] {
                "1" => Some(0),
                "2" => Some(1),
                other => return Err(syntax(line, format!("part must be 1 or 2, got {other:?}"))),
            }
        } else {
            None
        };
        rows.push((block, part));
    }
    let (v, lambda, kind) = header.ok_or(FormatError::MissingHeader)?;
    rows.sort();
    let points: BTreeSet<Point> = rows.iter().flat_map(|(b, _)| *b.points()).collect();
    if points.len() != v {
        return Err(FormatError::PointCount {
            declared: v,
            used: points.len(),
        });
    }
    let parts = with_parts.then(|| rows.iter().map(|(_, p)| p.unwrap()).collect());
    let blocks = rows.into_iter().map(|(b, _)| b).collect();
    Ok(DesignFile {
        system: TripleSystem::with_points(points, blocks, lambda, kind),
        parts,
    })
}

/// Writes `ts` with an optional part per block (aligned with `ts.blocks()`).
pub fn write_design(ts: &TripleSystem, parts: Option<&[u8]>) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "v={} lambda={} kind={}",
        ts.order(),
        ts.lambda(),
        ts.kind()
    );
    let mut rows: Vec<(Block, Option<u8>)> = ts
        .blocks()
        .iter()
        .enumerate()
        .map(|(i, b)| (*b, parts.map(|p| p[i])))
        .collect();
    rows.sort();
    if parts.is_some() {
        s.push_str("parts=2\n");
    }
    for (b, p) in rows {
        let [x, y, z] = b.points();
        match p {
            Some(p) => {
                let _ = writeln!(s, "{x} {y} {z} {}", p + 1);
            }
            None => {
                let _ = writeln!(s, "{x} {y} {z}");
            }
        }
    }
    s
}

/// Reads a bare list of integer triples, one per line, ignoring brackets,
/// commas and `#` comments. Any other character is an error. Used for externally produced block files.
pub fn parse_block_list(text: &str, lambda: u32, kind: Kind) -> Result<TripleSystem, FormatError> {
    let mut blocks = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let t = raw.split('#').next().unwrap_or("");
        if let Some(c) = t
            .chars()
            .find(|c| !(c.is_ascii_digit() || c.is_whitespace() || "{}()[],;".contains(*c)))
        {
            return Err(syntax(idx + 1, format!("unexpected character {c:?}")));
        }
        let cleaned: String = t
            .chars()
            .map(|c| if c.is_ascii_digit() { c } else { ' ' })
            .collect();
        let nums: Vec<&str> = cleaned.split_whitespace().collect();
        if nums.is_empty() {
            continue;
        }
        if nums.len() != 3 {
            return Err(syntax(
                idx + 1,
                format!("expected 3 numbers, got {}", nums.len()),
            ));
        }
        let p: Vec<u32> = nums
            .iter()
            .map(|n| {
                n.parse()
                    .map_err(|_| syntax(idx + 1, "number out of range"))
            })
            .collect::<Result<_, _>>()?;
        let b = Block::new(Point::Int(p[0]), Point::Int(p[1]), Point::Int(p[2]))
            .map_err(|e| syntax(idx + 1, e.to_string()))?;
        blocks.push(b);
    }
    Ok(TripleSystem::new(blocks, lambda, kind))
}

/// Reads either a design file (when a header is present) or a bare block
/// list taken to be a complete system with lambda 2.
pub fn parse_any(text: &str) -> Result<TripleSystem, FormatError> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with("v=") => Ok(parse_design(text)?.system),
        _ => parse_block_list(text, 2, Kind::Complete),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FANO: &str =
        "v=7 lambda=1 kind=complete\n1 2 4\n1 3 7\n1 5 6\n2 3 5\n2 6 7\n3 4 6\n4 5 7\n";

    #[test]
    fn round_trip_is_byte_identical() {
        let f = parse_design(FANO).unwrap();
        assert_eq!(write_design(&f.system, None), FANO);
        assert!(f.system.validate().valid);
    }

    #[test]
    fn parts_column() {
        let text = "v=3 lambda=2 kind=complete\nparts=2\n1 2 3 1\n1 2 3 2\n";
        let f = parse_design(text).unwrap();
        assert_eq!(f.parts.as_deref(), Some(&[0u8, 1][..]));
        assert_eq!(write_design(&f.system, f.parts.as_deref()), text);
    }

    #[test]
    fn infinity_labels_and_comments() {
        let text = "# header next\nv=3 lambda=1 kind=partial\n0 1 inf1\n# trailing\n";
        let f = parse_design(text).unwrap();
        assert_eq!(f.system.blocks()[0].points()[2], Point::Inf(1));
        assert_eq!(f.system.order(), 3);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_design("# nothing\n"),
            Err(FormatError::MissingHeader)
        ));
        assert!(parse_design("v=3 lambda=1 kind=odd\n").is_err());
        assert!(parse_design("v=3 lambda=1 kind=partial\n1 2\n").is_err());
        assert!(parse_design("v=3 lambda=1 kind=partial\n1 1 2\n").is_err());
        assert!(matches!(
            parse_design("v=4 lambda=1 kind=partial\n1 2 3\n"),
            Err(FormatError::PointCount {
                declared: 4,
                used: 3
            })
        ));
    }

    #[test]
    fn bare_block_list() {
        let ts = parse_any("{1,2,3}\n1, 2, 3\n").unwrap();
        assert_eq!(ts.blocks().len(), 2);
        assert_eq!(ts.lambda(), 2);
        assert!(parse_any("garbage\n").is_err());
        assert!(parse_any("1 2 x\n").is_err());
    }
}
