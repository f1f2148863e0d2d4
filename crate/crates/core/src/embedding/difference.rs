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

//! Difference triples over `Z_w` and the four cyclic families used to build
//! the partial Steiner systems of the embedding.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::EmbedError;
use crate::design::{Block, Kind, Point, TripleSystem};
use crate::graph::{is_connected, Graph};

/// `(a, b, c)` with `a + b = c`; develops into the blocks `{i, b+i, c+i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DifferenceTriple {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl DifferenceTriple {
    pub fn new(a: u32, b: u32, c: u32) -> Result<Self, EmbedError> {
        if a + b != c || a == b || a == 0 || b == 0 {
            return Err(EmbedError::BadTriple(a, b, c));
        }
        Ok(DifferenceTriple { a, b, c })
    }

    pub fn elements(&self) -> [u32; 3] {
        [self.a, self.b, self.c]
    }

    pub fn contains(&self, d: u32) -> bool {
        self.elements().contains(&d)
    }

    /// Same three differences, regardless of which is listed first.
    pub fn same_elements(&self, other: &DifferenceTriple) -> bool {
        let mut x = self.elements();
        let mut y = other.elements();
        x.sort_unstable();
        y.sort_unstable();
        x == y
    }
}

impl std::fmt::Display for DifferenceTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Pairwise element-disjoint difference triples.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DifferenceFamily {
    pub triples: Vec<DifferenceTriple>,
}

impl DifferenceFamily {
    pub fn new(triples: Vec<DifferenceTriple>) -> Result<Self, EmbedError> {
        let mut seen = BTreeSet::new();
        for t in &triples {
            for d in t.elements() {
                if !seen.insert(d) {
                    return Err(EmbedError::RepeatedDifference(d));
                }
            }
        }
        Ok(DifferenceFamily { triples })
    }

    pub fn elements(&self) -> BTreeSet<u32> {
        self.triples.iter().flat_map(|t| t.elements()).collect()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains_elements(&self, t: &DifferenceTriple) -> bool {
        self.triples.iter().any(|x| x.same_elements(t))
    }

    pub fn union(&self, other: &DifferenceFamily) -> Vec<DifferenceTriple> {
        self.triples.iter().chain(&other.triples).copied().collect()
    }
}

fn triple(a: u32, b: u32, c: u32) -> DifferenceTriple {
    DifferenceTriple::new(a, b, c).expect("construction formulas give valid triples")
}

/// One of the four cyclic families, for `w = 12t + k`.
///
/// Families 1 and 2 need `k` in {0, 2, 4} and have `2t - 1` triples;
/// families 3 and 4 need `k` in {6, 8, 10} and have `2t` triples. Triples
/// are listed by increasing first element.
pub fn diff_construction(n: u8, t: u32, k: u32) -> Result<DifferenceFamily, EmbedError> {
    let small = matches!(k, 0 | 2 | 4);
    let large = matches!(k, 6 | 8 | 10);
    if t == 0 || !(1..=4).contains(&n) || (n <= 2 && !small) || (n >= 3 && !large) {
        return Err(EmbedError::ConstructionRange { n, t, k });
    }
    let mut v = Vec::new();
    match n {
        1 => {
            for j in 1..=t {
                v.push(triple(2 * j - 1, 3 * t - j, 3 * t + j - 1));
            }
            for j in 1..t {
                v.push(triple(2 * j, 5 * t - j, 5 * t + j));
            }
        }
        2 => {
            for j in 1..=t {
                v.push(triple(2 * j - 1, 5 * t - j + 1, 5 * t + j));
            }
            for j in 1..t {
                v.push(triple(2 * j, 3 * t - j, 3 * t + j));
            }
        }
        3 => {
            for j in 1..=t {
                v.push(triple(2 * j - 1, 5 * t + 3 - j, 5 * t + 2 + j));
                v.push(triple(2 * j, 3 * t + 1 - j, 3 * t + 1 + j));
            }
        }
        _ => {
            for j in 1..=t {
                v.push(triple(2 * j - 1, 3 * t + 2 - j, 3 * t + 1 + j));
                v.push(triple(2 * j, 5 * t + 3 - j, 5 * t + 3 + j));
            }
        }
    }
    v.sort();
    DifferenceFamily::new(v)
}

/// Differences that the named family leaves out of its range.
pub fn construction_gaps(n: u8, t: u32) -> [u32; 3] {
    match n {
        1 => [4 * t, 5 * t, 6 * t],
        2 => [2 * t, 3 * t, 4 * t],
        3 => [3 * t + 1, 4 * t + 2, 6 * t + 3],
        _ => [2 * t + 1, 4 * t + 2, 5 * t + 3],
    }
}

/// Largest difference the named family reaches.
pub fn construction_range(n: u8, t: u32) -> u32 {
    if n <= 2 {
        6 * t
    } else {
        6 * t + 3
    }
}

/// Legal values of `k` for the named family.
pub fn construction_ks(n: u8) -> [u32; 3] {
    if n <= 2 {
        [0, 2, 4]
    } else {
        [6, 8, 10]
    }
}

/// The family covers `{1..range} \ gaps` exactly once and has the expected
/// number of triples.
pub fn coverage_holds(n: u8, t: u32, k: u32) -> Result<bool, EmbedError> {
    let fam = diff_construction(n, t, k)?;
    let gaps = construction_gaps(n, t);
    let want: BTreeSet<u32> = (1..=construction_range(n, t))
        .filter(|d| !gaps.contains(d))
        .collect();
    let count = if n <= 2 { 2 * t - 1 } else { 2 * t };
    Ok(fam.len() == count as usize && fam.elements() == want && 3 * fam.len() == want.len())
}

/// Blocks `{i, b+i, c+i}` for every `i` in `Z_w` and triple in the family.
pub fn develop(w: u32, family: &[DifferenceTriple]) -> Result<Vec<Block>, EmbedError> {
    let mut blocks = Vec::with_capacity(family.len() * w as usize);
    for t in family {
        if 2 * t.c >= w {
            return Err(EmbedError::TripleTooLarge(t.a, t.b, t.c, w));
        }
        for i in 0..w {
            blocks.push(Block::ints(i, (t.b + i) % w, (t.c + i) % w));
        }
    }
    Ok(blocks)
}

/// The developed family as a partial Steiner system on `Z_w`.
pub fn develop_system(w: u32, family: &[DifferenceTriple]) -> Result<TripleSystem, EmbedError> {
    let points = (0..w).map(Point::Int).collect();
    Ok(TripleSystem::with_points(
        points,
        develop(w, family)?,
        1,
        Kind::Partial,
    ))
}

/// Triples adjacent when they share an element.
pub fn orbit_graph(family: &[DifferenceTriple]) -> Graph {
    let mut edges = Vec::new();
    for (i, x) in family.iter().enumerate() {
        for (j, y) in family.iter().enumerate().skip(i + 1) {
            if x.elements().iter().any(|d| y.contains(*d)) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(family.len(), edges)
}

pub fn is_orbit_connected(family: &[DifferenceTriple]) -> bool {
    family.is_empty() || is_connected(&orbit_graph(family))
}

/// Path of five blocks in the 2-BIG of the developed family from
/// `x + {0, b, a+b}` to `x + 1 + {0, b, a+b}`.
///
/// Needs `(a,b,a+b)`, `(a,c,a+c)`, `(a+1,c-1,a+c)` and `(a+1,b,a+b+1)`
/// in the family.
pub fn shift_path(
    w: u32,
    family: &[DifferenceTriple],
    a: u32,
    b: u32,
    c: u32,
    x: u32,
) -> Result<[Block; 5], EmbedError> {
    if b == c || a == b || a == c || c < 2 {
        return Err(EmbedError::BadPathContext(a, b, c));
    }
    let need = [
        [a, b, a + b],
        [a, c, a + c],
        [a + 1, c - 1, a + c],
        [a + 1, b, a + b + 1],
    ];
    for [p, q, r] in need {
        let t = DifferenceTriple { a: p, b: q, c: r };
        if !family.iter().any(|f| f.same_elements(&t)) {
            return Err(EmbedError::MissingTriple(p, q, r));
        }
        if 2 * r >= w {
            return Err(EmbedError::TripleTooLarge(p, q, r, w));
        }
    }
    let wm = |y: i64| (y.rem_euclid(w as i64)) as u32;
    let (a, b, c, x) = (a as i64, b as i64, c as i64, x as i64);
    let blk = |p: i64, q: i64, r: i64| Block::ints(wm(x + p), wm(x + q), wm(x + r));
    Ok([
        blk(0, b, a + b),
        blk(0, b, a + b + 1),
        blk(b - c + 1, b, a + b + 1),
        blk(b - c + 1, b + 1, a + b + 1),
        blk(1, b + 1, a + b + 1),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr(list: &[(u32, u32, u32)]) -> Vec<DifferenceTriple> {
        list.iter().map(|&(a, b, c)| triple(a, b, c)).collect()
    }

    #[test]
    fn small_instances() {
        assert_eq!(
            diff_construction(1, 2, 0).unwrap().triples,
            tr(&[(1, 5, 6), (2, 9, 11), (3, 4, 7)])
        );
        assert_eq!(
            diff_construction(2, 2, 4).unwrap().triples,
            tr(&[(1, 10, 11), (2, 5, 7), (3, 9, 12)])
        );
        assert_eq!(
            diff_construction(3, 1, 6).unwrap().triples,
            tr(&[(1, 7, 8), (2, 3, 5)])
        );
        assert!(diff_construction(3, 1, 4).is_err());
        assert!(diff_construction(1, 0, 0).is_err());
    }

    #[test]
    fn develop_rejects_large_differences() {
        assert!(develop(12, &tr(&[(1, 5, 6)])).is_err());
        assert_eq!(develop(12, &tr(&[(1, 2, 3)])).unwrap().len(), 12);
        assert!(develop(12, &[]).unwrap().is_empty());
    }

    #[test]
    fn orbit_connectivity() {
        assert!(is_orbit_connected(&tr(&[
            (1, 5, 6),
            (1, 10, 11),
            (2, 9, 11),
            (2, 5, 7)
        ])));
        assert!(!is_orbit_connected(&tr(&[(1, 2, 3), (4, 5, 9)])));
    }
}
