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

//! Points, blocks and (partial) triple systems.
//!
//! A [`TripleSystem`] keeps its blocks as a sorted multiset, so two systems
//! with the same blocks compare equal regardless of construction order and
//! vertex `i` of every block-intersection graph built from it is `blocks[i]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_big, two_color};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("block needs three distinct points, got {0:?}")]
    DegenerateBlock(Vec<Point>),
    #[error("point {0} has no image under the map")]
    MissingImage(Point),
    #[error("map is not injective: {0} and {1} both map to {2}")]
    NotInjective(Point, Point, Point),
    #[error("block {0} is not present often enough to be removed")]
    BlockAbsent(Block),
    #[error("trade does not preserve pair coverage (first mismatch at {0:?})")]
    CoverageMismatch((Point, Point)),
    #[error("operation requires lambda = {expected}, system has lambda = {found}")]
    WrongLambda { expected: u32, found: u32 },
    #[error("pair {pair:?} is covered {count} times, more than lambda = {lambda}")]
    Overcovered {
        pair: (Point, Point),
        count: u32,
        lambda: u32,
    },
    #[error("invalid point label {0:?}")]
    BadLabel(String),
}

/// A point label: either a plain integer (also used for elements of `Z_w`) or
/// an infinity-tagged index `inf<k>`.
///
/// The derived order puts every integer label before every infinity label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Point {
    Int(u32),
    Inf(u32),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Int(x) => write!(f, "{x}"),
            Point::Inf(i) => write!(f, "inf{i}"),
        }
    }
}

impl FromStr for Point {
    type Err = DesignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DesignError::BadLabel(s.to_string());
        if let Some(rest) = s.strip_prefix("inf") {
            let k: u32 = rest.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            Ok(Point::Inf(k))
        } else {
            s.parse::<u32>().map(Point::Int).map_err(|_| bad())
        }
    }
}

/// Three distinct points in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Block([Point; 3]);

impl Block {
    pub fn new(a: Point, b: Point, c: Point) -> Result<Self, DesignError> {
        let mut pts = [a, b, c];
        pts.sort();
        if pts[0] == pts[1] || pts[1] == pts[2] {
            return Err(DesignError::DegenerateBlock(pts.to_vec()));
        }
        Ok(Block(pts))
    }

    /// Shorthand for integer-labelled blocks. Panics on repeated points.
    pub fn ints(a: u32, b: u32, c: u32) -> Self {
        Block::new(Point::Int(a), Point::Int(b), Point::Int(c)).expect("distinct points")
    }

    pub fn points(&self) -> &[Point; 3] {
        &self.0
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.contains(&p)
    }

    /// The three 2-subsets, each as an ordered pair.
    pub fn pairs(&self) -> [(Point, Point); 3] {
        let [a, b, c] = self.0;
        [(a, b), (a, c), (b, c)]
    }

    pub fn intersection_size(&self, other: &Block) -> usize {
        self.0.iter().filter(|p| other.0.contains(p)).count()
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Result<Self, DesignError> {
        Block::new(f(self.0[0]), f(self.0[1]), f(self.0[2]))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.0[0], self.0[1], self.0[2])
    }
}

pub fn pair(a: Point, b: Point) -> (Point, Point) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Partial,
    Complete,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Partial => f.write_str("partial"),
            Kind::Complete => f.write_str("complete"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleSystem {
    points: BTreeSet<Point>,
    blocks: Vec<Block>,
    lambda: u32,
    kind: Kind,
}

impl TripleSystem {
    /// Builds a system whose point set is exactly the points used by `blocks`.
    pub fn new(blocks: Vec<Block>, lambda: u32, kind: Kind) -> Self {
        let points = blocks.iter().flat_map(|b| b.0).collect();
        Self::with_points(points, blocks, lambda, kind)
    }

    /// Builds a system on an explicit point set; points used by blocks are
    /// added if missing.
    pub fn with_points(
        mut points: BTreeSet<Point>,
        mut blocks: Vec<Block>,
        lambda: u32,
        kind: Kind,
    ) -> Self {
        points.extend(blocks.iter().flat_map(|b| b.0));
        blocks.sort();
        TripleSystem {
            points,
            blocks,
            lambda,
            kind,
        }
    }

    pub fn points(&self) -> &BTreeSet<Point> {
        &self.points
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn with_kind(mut self, kind: Kind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_lambda(mut self, lambda: u32) -> Self {
        self.lambda = lambda;
        self
    }

    /// Number of blocks a complete system on the same points must have.
    pub fn complete_block_count(&self) -> usize {
        let v = self.points.len();
        self.lambda as usize * v * v.saturating_sub(1) / 6
    }

    pub fn multiplicity(&self, block: &Block) -> usize {
        let lo = self.blocks.partition_point(|b| b < block);
        let hi = self.blocks.partition_point(|b| b <= block);
        hi - lo
    }

    pub fn pair_coverage(&self) -> HashMap<(Point, Point), u32> {
        pair_coverage(&self.blocks)
    }

    /// Union of two block multisets over the union of their point sets.
    pub fn union(&self, other: &TripleSystem, lambda: u32, kind: Kind) -> TripleSystem {
        let points = self.points.union(&other.points).copied().collect();
        let blocks = self.blocks.iter().chain(&other.blocks).copied().collect();
        TripleSystem::with_points(points, blocks, lambda, kind)
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

pub fn pair_coverage<'a>(
    blocks: impl IntoIterator<Item = &'a Block>,
) -> HashMap<(Point, Point), u32> {
    let mut cov = HashMap::new();
    for b in blocks {
        for p in b.pairs() {
            *cov.entry(p).or_insert(0) += 1;
        }
    }
    cov
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub pair: (Point, Point),
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub order: usize,
    pub lambda: u32,
    pub kind: Kind,
    pub block_count: usize,
    pub expected_block_count: Option<usize>,
    /// multiplicity -> number of 2-subsets of the point set covered that often
    pub histogram: BTreeMap<u32, usize>,
    pub violations: Vec<Violation>,
    pub repeated_blocks: Vec<Block>,
    pub simple: bool,
    pub valid: bool,
}

pub fn validate(ts: &TripleSystem) -> ValidationReport {
    let cov = ts.pair_coverage();
    let v = ts.points.len();
    let total_pairs = v * v.saturating_sub(1) / 2;
    let mut histogram = BTreeMap::new();
    for &c in cov.values() {
        *histogram.entry(c).or_insert(0) += 1;
    }
    let uncovered = total_pairs - cov.len();
    if uncovered > 0 {
        histogram.insert(0, uncovered);
    }

    let mut violations = Vec::new();
    match ts.kind {
        Kind::Partial => {
            for (&p, &c) in &cov {
                if c > ts.lambda {
                    violations.push(Violation { pair: p, count: c });
                }
            }
        }
        Kind::Complete => {
            let pts: Vec<Point> = ts.points.iter().copied().collect();
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    let c = cov.get(&(a, b)).copied().unwrap_or(0);
                    if c != ts.lambda {
                        violations.push(Violation {
                            pair: (a, b),
                            count: c,
                        });
                    }
                }
            }
        }
    }
    violations.sort_by_key(|x| x.pair);

    let mut repeated_blocks: Vec<Block> = ts
        .blocks
        .windows(2)
        .filter(|w| w[0] == w[1])
        .map(|w| w[0])
        .collect();
    repeated_blocks.dedup();

    let expected_block_count = match ts.kind {
        Kind::Complete => Some(ts.complete_block_count()),
        Kind::Partial => None,
    };
    let count_ok = expected_block_count.is_none_or(|n| n == ts.blocks.len());
    ValidationReport {
        order: v,
        lambda: ts.lambda,
        kind: ts.kind,
        block_count: ts.blocks.len(),
        expected_block_count,
        histogram,
        valid: violations.is_empty() && count_ok,
        simple: repeated_blocks.is_empty(),
        violations,
        repeated_blocks,
    }
}

/// An injective relabelling of points.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PointMap(BTreeMap<Point, Point>);

impl PointMap {
    pub fn new(map: BTreeMap<Point, Point>) -> Result<Self, DesignError> {
        let mut seen: BTreeMap<Point, Point> = BTreeMap::new();
        for (&src, &dst) in &map {
            if let Some(&prev) = seen.get(&dst) {
                return Err(DesignError::NotInjective(prev, src, dst));
            }
            seen.insert(dst, src);
        }
        Ok(PointMap(map))
    }

    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (Point, Point)>,
    ) -> Result<Self, DesignError> {
        PointMap::new(pairs.into_iter().collect())
    }

    pub fn identity(points: &BTreeSet<Point>) -> Self {
        PointMap(points.iter().map(|&p| (p, p)).collect())
    }

    pub fn get(&self, p: Point) -> Option<Point> {
        self.0.get(&p).copied()
    }

    pub fn apply_block(&self, b: &Block) -> Result<Block, DesignError> {
        let img = |p: Point| self.get(p).ok_or(DesignError::MissingImage(p));
        let [a, b2, c] = *b.points();
        Block::new(img(a)?, img(b2)?, img(c)?)
    }
}

pub fn relabel(ts: &TripleSystem, map: &PointMap) -> Result<TripleSystem, DesignError> {
    let points = ts
        .points
        .iter()
        .map(|&p| map.get(p).ok_or(DesignError::MissingImage(p)))
        .collect::<Result<BTreeSet<_>, _>>()?;
    let blocks = ts
        .blocks
        .iter()
        .map(|b| map.apply_block(b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TripleSystem::with_points(
        points, blocks, ts.lambda, ts.kind,
    ))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trade {
    pub removed: Vec<Block>,
    pub added: Vec<Block>,
}

impl Trade {
    pub fn new(removed: Vec<Block>, added: Vec<Block>) -> Self {
        Trade { removed, added }
    }

    pub fn reversed(&self) -> Trade {
        Trade {
            removed: self.added.clone(),
            added: self.removed.clone(),
        }
    }

    /// Checks that both sides cover the same multiset of pairs.
    pub fn check(&self) -> Result<(), DesignError> {
        let a = pair_coverage(&self.removed);
        let b = pair_coverage(&self.added);
        let mut keys: Vec<_> = a.keys().chain(b.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            if a.get(&k) != b.get(&k) {
                return Err(DesignError::CoverageMismatch(k));
            }
        }
        Ok(())
    }
}

pub fn apply_trade(ts: &TripleSystem, trade: &Trade) -> Result<TripleSystem, DesignError> {
    trade.check()?;
    let mut need: BTreeMap<Block, usize> = BTreeMap::new();
    for b in &trade.removed {
        *need.entry(*b).or_insert(0) += 1;
    }
    for (b, &n) in &need {
        if ts.multiplicity(b) < n {
            return Err(DesignError::BlockAbsent(*b));
        }
    }
    let mut blocks = Vec::with_capacity(ts.blocks.len() - trade.removed.len() + trade.added.len());
    for b in &ts.blocks {
        match need.get_mut(b) {
            Some(n) if *n > 0 => *n -= 1,
            _ => blocks.push(*b),
        }
    }
    blocks.extend_from_slice(&trade.added);
    Ok(TripleSystem::with_points(
        ts.points.clone(),
        blocks,
        ts.lambda,
        ts.kind,
    ))
}

/// Two block multisets, each covering every pair at most once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub part1: Vec<Block>,
    pub part2: Vec<Block>,
    /// part index (0 or 1) of each block of the parent system, by position
    pub assignment: Vec<u8>,
}

/// Splits a (partial) system with lambda = 2 into two partial Steiner
/// systems, when its 2-BIG is bipartite.
pub fn decompose(ts: &TripleSystem) -> Result<Option<Decomposition>, DesignError> {
    if ts.lambda != 2 {
        return Err(DesignError::WrongLambda {
            expected: 2,
            found: ts.lambda,
        });
    }
    let cov = ts.pair_coverage();
    if let Some((&p, &c)) = cov.iter().filter(|(_, &c)| c > 2).min() {
        return Err(DesignError::Overcovered {
            pair: p,
            count: c,
            lambda: 2,
        });
    }
    let big = build_big(ts, 2);
    let Ok(mut colors) = two_color(&big.graph) else {
        return Ok(None);
    };
    // A repeated block covers its own pairs twice, so its copies are
    // isolated in the 2-BIG; alternate them between the parts.
    let blocks = ts.blocks();
    let mut i = 0;
    while i < blocks.len() {
        let mut j = i + 1;
        while j < blocks.len() && blocks[j] == blocks[i] {
            j += 1;
        }
        if j - i > 1 {
            for (k, c) in colors[i..j].iter_mut().enumerate() {
                *c = (k % 2) as u8;
            }
        }
        i = j;
    }
    let mut part1 = Vec::new();
    let mut part2 = Vec::new();
    for (b, &c) in blocks.iter().zip(&colors) {
        if c == 0 {
            part1.push(*b);
        } else {
            part2.push(*b);
        }
    }
    Ok(Some(Decomposition {
        part1,
        part2,
        assignment: colors,
    }))
}
