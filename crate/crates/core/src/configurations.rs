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

//! The block configurations T, X, P and the spliced configurations built
//! from them, up to F, whose 2-BIG can not sit inside a Hamiltonian cubic
//! graph.
//!
//! Every configuration is a partial twofold system. A pair covered once
//! inside a configuration is a *boundary slot*: in any completion the
//! second block through that pair lies outside, so in the 2-BIG the block
//! carries a dangling half-edge there.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::{relabel, Block, Kind, Point, PointMap, TripleSystem};
use crate::graph::{build_big, is_bipartite, is_connected};
use crate::linkage::{
    compose_linkage, grouped_order, linkage_analysis, linkage_analysis_ordered, BoundaryGraph,
    Dangling, EdgeKey, EdgeStatus, HalfEdgeId, LinkageError, LinkageSummary, Pairing,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("block {0} is not in the configuration")]
    MissingBlock(Block),
    #[error("spliced blocks {0} and {1} differ")]
    BlockMismatch(Block, Block),
    #[error("configurations share points outside the spliced block: {0:?}")]
    Overlap(Vec<Point>),
    #[error("splice result repeats block {0}")]
    Repeated(Block),
    #[error("pair {0:?} of the spliced block is not covered once more on each side")]
    Unrecoverable((Point, Point)),
    #[error("unknown configuration {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Linkage(#[from] LinkageError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySlot {
    pub block: Block,
    pub pair: (Point, Point),
    pub id: HalfEdgeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub name: String,
    pub system: TripleSystem,
    pub boundary: Vec<BoundarySlot>,
}

pub fn half_edge_id(block: &Block, pair: (Point, Point)) -> HalfEdgeId {
    format!("{block}:{}", pair_tag(pair))
}

fn pair_tag(pair: (Point, Point)) -> String {
    format!("{{{},{}}}", pair.0, pair.1)
}

/// The 2-BIG edge between two blocks, keyed by their labels.
pub fn edge_key(a: &Block, b: &Block) -> EdgeKey {
    EdgeKey::new(&a.to_string(), &b.to_string())
}

impl Configuration {
    pub fn from_blocks(name: &str, blocks: Vec<Block>) -> Self {
        let system = TripleSystem::new(blocks, 2, Kind::Partial);
        let cov = system.pair_coverage();
        let mut boundary = Vec::new();
        for b in system.blocks() {
            for p in b.pairs() {
                if cov[&p] == 1 {
                    boundary.push(BoundarySlot {
                        block: *b,
                        pair: p,
                        id: half_edge_id(b, p),
                    });
                }
            }
        }
        Configuration {
            name: name.to_string(),
            system,
            boundary,
        }
    }

    pub fn blocks(&self) -> &[Block] {
        self.system.blocks()
    }

    pub fn block_count(&self) -> usize {
        self.system.blocks().len()
    }

    pub fn point_count(&self) -> usize {
        self.system.order()
    }

    pub fn contains(&self, b: &Block) -> bool {
        self.system.multiplicity(b) > 0
    }

    pub fn is_simple(&self) -> bool {
        self.system.blocks().windows(2).all(|w| w[0] != w[1])
    }

    pub fn big_is_bipartite(&self) -> bool {
        is_bipartite(&build_big(&self.system, 2).graph)
    }

    /// Half-edge id of the slot on `block` not covered inside the configuration.
    pub fn slot_at(&self, block: &Block) -> Vec<&HalfEdgeId> {
        self.boundary
            .iter()
            .filter(|s| &s.block == block)
            .map(|s| &s.id)
            .collect()
    }

    pub fn boundary_graph(&self) -> BoundaryGraph {
        let big = build_big(&self.system, 2);
        let dangling = self
            .boundary
            .iter()
            .map(|s| Dangling {
                vertex: big.vertex_of(&s.block).expect("slot block present"),
                id: s.id.clone(),
                tag: pair_tag(s.pair),
            })
            .collect();
        let labels = big.blocks.iter().map(Block::to_string).collect();
        BoundaryGraph::new(big.graph, dangling).with_labels(labels)
    }

    pub fn relabel(&self, name: &str, map: &PointMap) -> Configuration {
        let ts = relabel(&self.system, map).expect("total injective map");
        Configuration::from_blocks(name, ts.blocks().to_vec())
    }

    pub fn without(&self, name: &str, remove: &[Block]) -> Configuration {
        let blocks = self
            .blocks()
            .iter()
            .filter(|b| !remove.contains(b))
            .copied()
            .collect();
        Configuration::from_blocks(name, blocks)
    }

    pub fn union(&self, name: &str, other: &Configuration) -> Configuration {
        let blocks = self
            .blocks()
            .iter()
            .chain(other.blocks())
            .copied()
            .collect();
        Configuration::from_blocks(name, blocks)
    }

    pub fn linkage(&self) -> Result<LinkageSummary, LinkageError> {
        linkage_analysis(&self.boundary_graph())
    }

    /// One enumeration over the whole configuration, visiting the blocks of
    /// each part in turn.
    pub fn linkage_by_parts(
        &self,
        parts: &[Configuration],
    ) -> Result<LinkageSummary, LinkageError> {
        let bg = self.boundary_graph();
        let big = build_big(&self.system, 2);
        let groups: Vec<Vec<usize>> = parts
            .iter()
            .map(|p| p.blocks().iter().filter_map(|b| big.vertex_of(b)).collect())
            .collect();
        let (order, _) = grouped_order(&bg.graph, &groups);
        linkage_analysis_ordered(&bg, &order)
    }
}

fn cfg_map(pairs: &[(u32, u32)]) -> PointMap {
    PointMap::from_pairs(pairs.iter().map(|&(a, b)| (Point::Int(a), Point::Int(b))))
        .expect("relabelling table is injective")
}

fn shift_rest(
    fixed: &[(u32, u32)],
    rest: impl IntoIterator<Item = u32>,
    first: u32,
) -> Vec<(u32, u32)> {
    let mut m = fixed.to_vec();
    m.extend(rest.into_iter().zip(first..));
    m
}

pub fn f_x() -> PointMap {
    cfg_map(&shift_rest(&[(1, 11), (2, 1), (3, 2), (4, 10)], 5..=9, 12))
}

pub fn f_p() -> PointMap {
    cfg_map(&shift_rest(&[(1, 2), (2, 1), (3, 11), (4, 10)], 5..=9, 12))
}

pub fn f_p2() -> PointMap {
    let rest = [1, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 16];
    cfg_map(&shift_rest(&[(2, 3), (3, 2), (10, 10)], rest, 17))
}

pub fn f_pp() -> PointMap {
    let rest = [1, 4].into_iter().chain(6..=29);
    cfg_map(&shift_rest(&[(2, 5), (3, 3), (5, 2)], rest, 30))
}

const TABLE_T: [[u32; 3]; 16] = [
    [4, 5, 6],
    [4, 5, 8],
    [4, 7, 8],
    [3, 4, 6],
    [1, 4, 7],
    [3, 6, 9],
    [6, 7, 9],
    [1, 7, 9],
    [3, 5, 9],
    [5, 8, 9],
    [1, 8, 9],
    [2, 3, 5],
    [1, 2, 8],
    [2, 5, 6],
    [2, 6, 7],
    [2, 7, 8],
];

/// Block `B<k>` of configuration T, numbered from 1.
pub fn t_block(k: usize) -> Block {
    let [a, b, c] = TABLE_T[k - 1];
    Block::ints(a, b, c)
}

fn blocks_of(list: &[[u32; 3]]) -> Vec<Block> {
    list.iter().map(|&[a, b, c]| Block::ints(a, b, c)).collect()
}

pub fn config_t() -> Configuration {
    Configuration::from_blocks("T", blocks_of(&TABLE_T))
}

/// The four half-edges of T, at B4, B5, B12 and B13.
pub fn t_half_edges() -> [HalfEdgeId; 4] {
    let t = config_t();
    [4, 5, 12, 13].map(|k| {
        let ids = t.slot_at(&t_block(k));
        assert_eq!(ids.len(), 1);
        ids[0].clone()
    })
}

const X_EXTRA: [[u32; 3]; 2] = [[3, 4, 10], [2, 3, 10]];
const P_EXTRA: [[u32; 3]; 4] = [[3, 4, 10], [2, 3, 10], [4, 10, 11], [1, 4, 11]];

pub fn config_x() -> Configuration {
    let t = config_t();
    let mut blocks = t.blocks().to_vec();
    blocks.extend(t.relabel("f_X(T)", &f_x()).blocks());
    blocks.extend(blocks_of(&X_EXTRA));
    Configuration::from_blocks("X", blocks)
}

pub fn config_p() -> Configuration {
    let t = config_t();
    let mut blocks = t.blocks().to_vec();
    blocks.extend(t.relabel("f_P(T)", &f_p()).blocks());
    blocks.extend(blocks_of(&P_EXTRA));
    Configuration::from_blocks("P", blocks)
}

/// e_X, between {2,3,10} and {2,10,13}.
pub fn e_x() -> EdgeKey {
    edge_key(&Block::ints(2, 3, 10), &Block::ints(2, 10, 13))
}

/// e_P, between {2,3,10} and {2,10,14}.
pub fn e_p() -> EdgeKey {
    edge_key(&Block::ints(2, 3, 10), &Block::ints(2, 10, 14))
}

/// The spliced edge of P≍P and X≍P lying in no traversal.
pub fn spliced_edge() -> EdgeKey {
    edge_key(&Block::ints(2, 3, 5), &Block::ints(2, 3, 19))
}

/// Removes `b1` from `c1` and `b2` from `c2` and joins what is left. The
/// blocks that met `b1` and `b2` in a pair now meet each other instead.
pub fn splice(
    name: &str,
    c1: &Configuration,
    b1: &Block,
    c2: &Configuration,
    b2: &Block,
) -> Result<Configuration, ConfigError> {
    if !c1.contains(b1) {
        return Err(ConfigError::MissingBlock(*b1));
    }
    if !c2.contains(b2) {
        return Err(ConfigError::MissingBlock(*b2));
    }
    if b1 != b2 {
        return Err(ConfigError::BlockMismatch(*b1, *b2));
    }
    let extra: Vec<Point> = c1
        .system
        .points()
        .intersection(c2.system.points())
        .filter(|p| !b1.contains(**p))
        .copied()
        .collect();
    if !extra.is_empty() {
        return Err(ConfigError::Overlap(extra));
    }
    let cov1 = c1.system.pair_coverage();
    let cov2 = c2.system.pair_coverage();
    for p in b1.pairs() {
        if cov1.get(&p) != Some(&2) || cov2.get(&p) != Some(&2) {
            return Err(ConfigError::Unrecoverable(p));
        }
    }
    let r1 = c1.without("", &[*b1]);
    let r2 = c2.without("", &[*b2]);
    let out = r1.union(name, &r2);
    if let Some(w) = out.blocks().windows(2).find(|w| w[0] == w[1]) {
        return Err(ConfigError::Repeated(w[0]));
    }
    Ok(out)
}

fn b2310() -> Block {
    Block::ints(2, 3, 10)
}

fn b235() -> Block {
    Block::ints(2, 3, 5)
}

pub fn config_pp() -> Configuration {
    let p = config_p();
    let p2 = p.relabel("f_P2(P)", &f_p2());
    splice("PP", &p, &b2310(), &p2, &b2310()).expect("P and f_P2(P) splice")
}

pub fn config_xp() -> Configuration {
    let p2 = config_p().relabel("f_P2(P)", &f_p2());
    splice("XP", &config_x(), &b2310(), &p2, &b2310()).expect("X and f_P2(P) splice")
}

pub fn config_f() -> Configuration {
    let pp = config_pp().relabel("f_PP(PP)", &f_pp());
    splice("F", &config_xp(), &b235(), &pp, &b235()).expect("XP and f_PP(PP) splice")
}

pub const CONFIG_NAMES: [&str; 6] = ["T", "X", "P", "PP", "XP", "F"];

pub fn by_name(name: &str) -> Result<Configuration, ConfigError> {
    match name.to_ascii_uppercase().as_str() {
        "T" => Ok(config_t()),
        "X" => Ok(config_x()),
        "P" => Ok(config_p()),
        "PP" => Ok(config_pp()),
        "XP" => Ok(config_xp()),
        "F" => Ok(config_f()),
        _ => Err(ConfigError::UnknownName(name.to_string())),
    }
}

/// Pieces whose union is the named configuration, small enough for direct
/// enumeration; composing their summaries gives the summary of the whole.
pub fn pieces(name: &str) -> Result<Vec<Configuration>, ConfigError> {
    let t = config_t();
    let p = config_p();
    let p2 = p.relabel("f_P2(P)", &f_p2());
    let x = config_x();
    Ok(match name.to_ascii_uppercase().as_str() {
        "T" => vec![t],
        "X" => vec![
            t.clone(),
            t.relabel("f_X(T)", &f_x()),
            Configuration::from_blocks("X extra", blocks_of(&X_EXTRA)),
        ],
        "P" => vec![
            t.clone(),
            t.relabel("f_P(T)", &f_p()),
            Configuration::from_blocks("P extra", blocks_of(&P_EXTRA)),
        ],
        "PP" => vec![
            p.without("P-", &[b2310()]),
            p2.without("f_P2(P)-", &[b2310()]),
        ],
        "XP" => vec![
            x.without("X-", &[b2310()]),
            p2.without("f_P2(P)-", &[b2310()]),
        ],
        "F" => {
            let fpp = f_pp();
            vec![
                x.without("A", &[b2310(), b235()]),
                p2.without("B", &[b2310()]),
                p.without("", &[b2310(), b235()]).relabel("C", &fpp),
                p2.without("", &[b2310()]).relabel("D", &fpp),
            ]
        }
        _ => return Err(ConfigError::UnknownName(name.to_string())),
    })
}

/// Summary of the configuration built by composing piece summaries in a
/// balanced order, each join binding the half-edges that share a pair.
pub fn hierarchical_linkage(name: &str) -> Result<LinkageSummary, ConfigError> {
    let mut level: Vec<LinkageSummary> = pieces(name)?
        .iter()
        .map(Configuration::linkage)
        .collect::<Result<_, _>>()?;
    while level.len() > 1 {
        let mut next = Vec::new();
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => {
                    let bind = a.natural_binding(&b);
                    next.push(compose_linkage(&a, &b, &bind)?);
                }
                None => next.push(a),
            }
        }
        level = next;
    }
    Ok(level.pop().unwrap_or_else(LinkageSummary::empty))
}

/// The forced-edge property claimed for each configuration.
pub fn claimed_property(name: &str) -> &'static str {
    match name.to_ascii_uppercase().as_str() {
        "T" => "half-edges at B4,B12 and at B5,B13 are twinned",
        "X" => "e_X {2,3,10}-{2,10,13} is in every traversal",
        "P" => "e_P {2,3,10}-{2,10,14} is in every traversal",
        "PP" | "XP" => "edge {2,3,5}-{2,3,19} is in no traversal",
        "F" => "no traversal exists",
        _ => "unknown",
    }
}

/// Whether a summary of the named configuration has its claimed property.
pub fn check_claim(name: &str, s: &LinkageSummary) -> bool {
    match name.to_ascii_uppercase().as_str() {
        "T" => {
            let [e1, e2, e3, e4] = t_half_edges();
            !s.patterns.is_empty() && s.is_twinned(&e1, &e3) && s.is_twinned(&e2, &e4)
        }
        "X" => !s.patterns.is_empty() && s.status(&e_x()) == Some(EdgeStatus::InAll),
        "P" => !s.patterns.is_empty() && s.status(&e_p()) == Some(EdgeStatus::InAll),
        "PP" | "XP" => {
            !s.patterns.is_empty() && s.status(&spliced_edge()) == Some(EdgeStatus::InNone)
        }
        "F" => s.patterns.is_empty(),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigProof {
    pub name: String,
    pub blocks: usize,
    pub points: usize,
    pub simple: bool,
    pub bipartite: bool,
    /// pair coverage -> number of pairs covered that often
    pub pair_coverage: BTreeMap<u32, usize>,
    pub property: String,
    pub pattern_count: usize,
    pub closed_pattern: bool,
    /// verdict from composing piece summaries
    pub hierarchical: bool,
    /// verdict from one enumeration over the whole configuration
    pub direct: Option<bool>,
    pub summaries_agree: Option<bool>,
    pub verified: bool,
    pub runtime_ms: u128,
}

/// Checks the claimed property both by composition and, when
/// `direct_limit` allows, by enumerating the whole configuration.
pub fn prove(name: &str, direct_limit: usize) -> Result<ConfigProof, ConfigError> {
    let start = Instant::now();
    let c = by_name(name)?;
    let hier = hierarchical_linkage(name)?;
    let h_ok = check_claim(name, &hier);
    let (direct, agree) = if c.block_count() <= direct_limit {
        let d = c.linkage_by_parts(&pieces(name)?)?;
        let same = d.patterns == hier.patterns && d.edge_status == hier.edge_status;
        (Some(check_claim(name, &d)), Some(same))
    } else {
        (None, None)
    };
    let name = c.name.clone();
    Ok(ConfigProof {
        blocks: c.block_count(),
        points: c.point_count(),
        simple: c.is_simple(),
        bipartite: c.big_is_bipartite(),
        pair_coverage: coverage_profile(&c),
        property: claimed_property(&name).to_string(),
        pattern_count: hier.patterns.len(),
        closed_pattern: hier.patterns.contains_key(&Pairing::Closed),
        hierarchical: h_ok,
        verified: h_ok && direct.unwrap_or(true) && agree.unwrap_or(true),
        direct,
        summaries_agree: agree,
        name,
        runtime_ms: start.elapsed().as_millis(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tts331Report {
    pub block_count: usize,
    pub expected_block_count: usize,
    pub order: usize,
    pub complete: bool,
    pub simple: bool,
    pub bipartite: bool,
    pub connected: bool,
    pub contains_f: bool,
    pub missing_f_blocks: Vec<Block>,
    pub verified: bool,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Format(#[from] crate::format::FormatError),
    #[error("expected {expected} blocks, found {found}")]
    BlockCount { expected: usize, found: usize },
}

pub const TTS331_BLOCKS: usize = 36410;

/// Reads an order-331 twofold system (design file or bare block list) and
/// checks it, including whether F's blocks occur in it.
pub fn ingest_tts331(path: &Path) -> Result<(TripleSystem, Tts331Report), IngestError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IngestError::Io(path.display().to_string(), e))?;
    let ts = crate::format::parse_any(&text)?;
    let ts =
        TripleSystem::with_points(ts.points().clone(), ts.blocks().to_vec(), 2, Kind::Complete);
    if ts.blocks().len() != TTS331_BLOCKS {
        return Err(IngestError::BlockCount {
            expected: TTS331_BLOCKS,
            found: ts.blocks().len(),
        });
    }
    let report = tts_checks(&ts);
    Ok((ts, report))
}

fn tts_checks(ts: &TripleSystem) -> Tts331Report {
    let v = ts.validate();
    let big = build_big(ts, 2);
    let present: BTreeSet<&Block> = ts.blocks().iter().collect();
    let missing: Vec<Block> = config_f()
        .blocks()
        .iter()
        .filter(|b| !present.contains(b))
        .copied()
        .collect();
    let bipartite = is_bipartite(&big.graph);
    let connected = is_connected(&big.graph);
    Tts331Report {
        block_count: ts.blocks().len(),
        expected_block_count: TTS331_BLOCKS,
        order: ts.order(),
        complete: v.valid && ts.order() == 331,
        simple: v.simple,
        bipartite,
        connected,
        contains_f: missing.is_empty(),
        verified: v.valid
            && ts.order() == 331
            && v.simple
            && bipartite
            && connected
            && missing.is_empty(),
        missing_f_blocks: missing,
    }
}

/// Pair-coverage histogram of a configuration: coverage -> number of pairs.
pub fn coverage_profile(c: &Configuration) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &n in c.system.pair_coverage().values() {
        *h.entry(n).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_are_injective_and_total() {
        let ts = config_p().system;
        assert!(relabel(&ts, &f_p2()).is_ok());
        assert!(relabel(&config_pp().system, &f_pp()).is_ok());
        assert!(relabel(&config_t().system, &f_x()).is_ok());
        assert!(relabel(&config_t().system, &f_p()).is_ok());
    }

    #[test]
    fn t_has_four_slots() {
        let t = config_t();
        assert_eq!(t.boundary.len(), 4);
        let blocks: BTreeSet<Block> = t.boundary.iter().map(|s| s.block).collect();
        let want: BTreeSet<Block> = [4, 5, 12, 13].map(t_block).into_iter().collect();
        assert_eq!(blocks, want);
    }

    #[test]
    fn splice_errors() {
        let p = config_p();
        assert!(matches!(
            splice("bad", &p, &b2310(), &p, &b2310()),
            Err(ConfigError::Overlap(_))
        ));
        let t = config_t();
        assert!(matches!(
            splice("bad", &t, &Block::ints(1, 2, 3), &t, &Block::ints(1, 2, 3)),
            Err(ConfigError::MissingBlock(_))
        ));
    }

    #[test]
    fn pieces_cover_configuration() {
        for name in CONFIG_NAMES {
            let parts = pieces(name).unwrap();
            let mut blocks: Vec<Block> = parts.iter().flat_map(|c| c.blocks().to_vec()).collect();
            blocks.sort();
            assert_eq!(blocks, by_name(name).unwrap().blocks(), "{name}");
        }
    }
}
