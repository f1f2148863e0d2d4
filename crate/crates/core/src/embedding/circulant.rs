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

//! Circulant graphs on `Z_w` and their 1-factorizations.
//!
//! A difference `d` of even order splits into two perfect matchings by
//! alternating along its cycles, and `w/2` is itself a perfect matching.
//! Differences of odd order are handled together with one even-order
//! difference `e`: the cosets of the subgroup they generate pair up along
//! `e`, the odd-order edges on one side of the pairing are edge-coloured
//! with one colour more than their degree, the colouring is copied across,
//! and each vertex's missing colour is filled with its `e`-edge.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::EmbedError;
use crate::design::{Block, Point};

pub type Edge = (u32, u32);

fn norm(x: u32, y: u32) -> Edge {
    (x.min(y), x.max(y))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirculantGraph {
    pub w: u32,
    pub diffs: BTreeSet<u32>,
}

impl CirculantGraph {
    pub fn new(w: u32, diffs: impl IntoIterator<Item = u32>) -> Result<Self, EmbedError> {
        let diffs: BTreeSet<u32> = diffs.into_iter().collect();
        if let Some(&d) = diffs.iter().find(|&&d| d == 0 || 2 * d > w) {
            return Err(EmbedError::DifferenceRange(d, w));
        }
        Ok(CirculantGraph { w, diffs })
    }

    /// Order of `d` in `Z_w`.
    pub fn order(&self, d: u32) -> u32 {
        self.w / self.w.gcd(&d)
    }

    pub fn edges_of(&self, d: u32) -> BTreeSet<Edge> {
        (0..self.w).map(|i| norm(i, (i + d) % self.w)).collect()
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.diffs.iter().flat_map(|&d| self.edges_of(d)).collect()
    }

    /// Number of perfect matchings in any 1-factorization.
    pub fn factor_count(&self) -> usize {
        self.diffs
            .iter()
            .map(|&d| if 2 * d == self.w { 1 } else { 2 })
            .sum()
    }
}

/// A perfect matching of `Z_w`.
pub type OneFactor = Vec<Edge>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneFactorization {
    pub w: u32,
    pub factors: Vec<OneFactor>,
}

impl OneFactorization {
    /// `Ok` when the factors are perfect matchings partitioning the edges
    /// of `host`.
    pub fn check(&self, host: &CirculantGraph) -> Result<(), EmbedError> {
        let mut seen = BTreeSet::new();
        for (i, f) in self.factors.iter().enumerate() {
            if !is_perfect_matching(self.w, f) {
                return Err(EmbedError::NotAFactor(i));
            }
            for &e in f {
                if !seen.insert(norm(e.0, e.1)) {
                    return Err(EmbedError::FactorOverlap(e));
                }
            }
        }
        if seen != host.edges() {
            return Err(EmbedError::FactorsIncomplete);
        }
        Ok(())
    }
}

pub fn is_perfect_matching(w: u32, f: &[Edge]) -> bool {
    let mut hit = vec![false; w as usize];
    for &(x, y) in f {
        if x == y || x >= w || y >= w {
            return false;
        }
        for z in [x, y] {
            if std::mem::replace(&mut hit[z as usize], true) {
                return false;
            }
        }
    }
    hit.iter().all(|&h| h)
}

/// The two matchings `{i, i+d}` with `i` at even and at odd positions along
/// the cycles of difference `d` (which must have even order).
pub fn alternating_split(w: u32, d: u32) -> (OneFactor, OneFactor) {
    let g = w.gcd(&d);
    let (mut f0, mut f1) = (Vec::new(), Vec::new());
    for r in 0..g {
        let mut x = r;
        let mut idx = 0;
        loop {
            let y = (x + d) % w;
            if idx % 2 == 0 {
                f0.push(norm(x, y));
            } else {
                f1.push(norm(x, y));
            }
            idx += 1;
            x = y;
            if x == r {
                break;
            }
        }
    }
    f0.sort_unstable();
    f1.sort_unstable();
    (f0, f1)
}

/// `{{i, i+d} : i even}` and the same for `i` odd; matchings when `d` is odd.
pub fn parity_split(w: u32, d: u32) -> (OneFactor, OneFactor) {
    let mut even: Vec<Edge> = (0..w).step_by(2).map(|i| norm(i, (i + d) % w)).collect();
    let mut odd: Vec<Edge> = (1..w).step_by(2).map(|i| norm(i, (i + d) % w)).collect();
    even.sort_unstable();
    odd.sort_unstable();
    (even, odd)
}

/// Proper edge colouring with at most `max degree + 1` colours.
pub fn misra_gries(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    const NONE: usize = usize::MAX;
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    let palette = deg.iter().copied().max().unwrap_or(0) + 1;
    // at[v][c] = neighbour joined to v by an edge of colour c
    let mut at = vec![vec![NONE; palette]; n];
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    let color_of = |at: &Vec<Vec<usize>>, u: usize, v: usize| at[u].iter().position(|&y| y == v);
    let free = |at: &Vec<Vec<usize>>, v: usize| {
        at[v].iter().position(|&y| y == NONE).expect("spare colour")
    };
    let set = |at: &mut Vec<Vec<usize>>, u: usize, v: usize, c: usize| {
        at[u][c] = v;
        at[v][c] = u;
    };
    let unset = |at: &mut Vec<Vec<usize>>, u: usize, v: usize, c: usize| {
        at[u][c] = NONE;
        at[v][c] = NONE;
    };

    for &(x, f0) in edges {
        // maximal fan at x starting with f0
        let mut fan = vec![f0];
        let mut in_fan = BTreeSet::from([f0]);
        loop {
            let last = *fan.last().unwrap();
            let next = nbrs[x].iter().copied().find(|&y| {
                !in_fan.contains(&y) && color_of(&at, x, y).is_some_and(|c| at[last][c] == NONE)
            });
            match next {
                Some(y) => {
                    fan.push(y);
                    in_fan.insert(y);
                }
                None => break,
            }
        }
        let c = free(&at, x);
        let d = free(&at, *fan.last().unwrap());
        // invert the c/d path starting at x (c is free at x, so it starts with d)
        if c != d {
            let mut path = Vec::new();
            let mut cur = x;
            let mut col = d;
            while at[cur][col] != NONE {
                let nxt = at[cur][col];
                path.push((cur, nxt, col));
                cur = nxt;
                col = if col == c { d } else { c };
            }
            for &(p, q, col) in &path {
                unset(&mut at, p, q, col);
            }
            for &(p, q, col) in &path {
                set(&mut at, p, q, if col == c { d } else { c });
            }
        }
        // shortest prefix that is still a fan and ends where d is free
        let mut end = 0;
        for i in 0..fan.len() {
            if i > 0 {
                let ok = color_of(&at, x, fan[i]).is_some_and(|col| at[fan[i - 1]][col] == NONE);
                if !ok {
                    break;
                }
            }
            if at[fan[i]][d] == NONE {
                end = i;
                break;
            }
        }
        // rotate the fan prefix
        for i in 0..end {
            let col = color_of(&at, x, fan[i + 1]).expect("fan edge coloured");
            unset(&mut at, x, fan[i + 1], col);
            set(&mut at, x, fan[i], col);
        }
        set(&mut at, x, fan[end], d);
    }
    edges
        .iter()
        .map(|&(u, v)| color_of(&at, u, v).expect("every edge coloured"))
        .collect()
}

/// 1-factorization of a circulant graph containing an edge of even order.
///
/// Factors appear in difference order: `w/2` first if present, then the
/// even-order differences, then the group of odd-order differences.
pub fn one_factorize(circ: &CirculantGraph) -> Result<OneFactorization, EmbedError> {
    let w = circ.w;
    if circ.diffs.is_empty() {
        return Ok(OneFactorization {
            w,
            factors: Vec::new(),
        });
    }
    if w % 2 == 1 {
        return Err(EmbedError::OddModulus(w));
    }
    let half = w / 2;
    let even: Vec<u32> = circ
        .diffs
        .iter()
        .copied()
        .filter(|&d| circ.order(d).is_multiple_of(2))
        .collect();
    let odd: Vec<u32> = circ
        .diffs
        .iter()
        .copied()
        .filter(|&d| circ.order(d) % 2 == 1)
        .collect();
    if even.is_empty() {
        return Err(EmbedError::NoEvenOrder(
            circ.diffs.iter().copied().collect(),
        ));
    }
    // pair the odd-order group with w/2 when available, so no spare factor
    let partner = if odd.is_empty() {
        None
    } else if even.contains(&half) {
        Some(half)
    } else {
        Some(even[0])
    };
    let mut factors = Vec::new();
    for &d in &even {
        if Some(d) == partner {
            continue;
        }
        if d == half {
            factors.push((0..half).map(|i| (i, i + half)).collect());
        } else {
            let (a, b) = alternating_split(w, d);
            factors.push(a);
            factors.push(b);
        }
    }
    if let Some(e) = partner {
        factors.extend(odd_group_factors(w, &odd, e));
    }
    let out = OneFactorization { w, factors };
    out.check(circ)?;
    Ok(out)
}

fn odd_group_factors(w: u32, odd: &[u32], e: u32) -> Vec<OneFactor> {
    let g = odd.iter().fold(w, |acc, &d| acc.gcd(&d));
    // cosets of <g> are the residues mod g; walk them along e
    let mut side = vec![u8::MAX; g as usize];
    for r in 0..g {
        if side[r as usize] != u8::MAX {
            continue;
        }
        let mut x = r;
        let mut s = 0u8;
        while side[x as usize] == u8::MAX {
            side[x as usize] = s;
            s ^= 1;
            x = (x + e) % g;
        }
    }
    let in_p = |x: u32| side[(x % g) as usize] == 0;
    let p: Vec<u32> = (0..w).filter(|&x| in_p(x)).collect();
    let index: BTreeMap<u32, usize> = p.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut local = Vec::new();
    for &x in &p {
        for &d in odd {
            let y = (x + d) % w;
            local.push((index[&x], index[&y]));
        }
    }
    let colors = misra_gries(p.len(), &local);
    let palette = 2 * odd.len() + 1;
    let mut classes: Vec<BTreeSet<Edge>> = vec![BTreeSet::new(); palette];
    let mut covered = vec![vec![false; palette]; p.len()];
    for (&(i, j), &c) in local.iter().zip(&colors) {
        let (x, y) = (p[i], p[j]);
        classes[c].insert(norm(x, y));
        classes[c].insert(norm((x + e) % w, (y + e) % w));
        covered[i][c] = true;
        covered[j][c] = true;
    }
    for (i, &x) in p.iter().enumerate() {
        let c = (0..palette)
            .find(|&c| !covered[i][c])
            .expect("one colour missing");
        classes[c].insert(norm(x, (x + e) % w));
    }
    let mut out: Vec<OneFactor> = classes
        .into_iter()
        .map(|s| s.into_iter().collect())
        .collect();
    if 2 * e != w {
        // e-edges leaving P + e; together they form one more matching
        let mut rest: Vec<Edge> = p
            .iter()
            .map(|&x| norm((x + e) % w, (x + 2 * e) % w))
            .collect();
        rest.sort_unstable();
        out.push(rest);
    }
    out
}

/// 1-factorization whose first two factors are `{i, i+c}` for even and odd
/// `i`; their union is a Hamilton cycle since `gcd(w, c) = 1`.
pub fn one_factorize_with_ham_pair(
    circ: &CirculantGraph,
    c: u32,
) -> Result<(OneFactorization, (usize, usize)), EmbedError> {
    let w = circ.w;
    if !circ.diffs.contains(&c) {
        return Err(EmbedError::MissingDifference(c));
    }
    if w.gcd(&c) != 1 {
        return Err(EmbedError::NotCoprime(c, w));
    }
    let rest = CirculantGraph::new(w, circ.diffs.iter().copied().filter(|&d| d != c))?;
    let inner = one_factorize(&rest)?;
    let (f1, f2) = parity_split(w, c);
    let mut factors = vec![f1, f2];
    factors.extend(inner.factors);
    let out = OneFactorization { w, factors };
    out.check(circ)?;
    Ok((out, (0, 1)))
}

/// Whether two perfect matchings together form one cycle through all of `Z_w`.
pub fn is_hamilton_pair(w: u32, f1: &[Edge], f2: &[Edge]) -> bool {
    let mut adj = vec![Vec::new(); w as usize];
    for &(x, y) in f1.iter().chain(f2) {
        adj[x as usize].push(y);
        adj[y as usize].push(x);
    }
    if adj.iter().any(|a| a.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut len) = (u32::MAX, 0u32, 0u32);
    loop {
        let a = &adj[cur as usize];
        let next = if a[0] != prev { a[0] } else { a[1] };
        prev = cur;
        cur = next;
        len += 1;
        if cur == 0 {
            break;
        }
    }
    len == w
}

/// Blocks `{x, y, p}` for every edge of the factor.
pub fn cone(factor: &[Edge], p: Point) -> Result<Vec<Block>, EmbedError> {
    if matches!(p, Point::Int(_)) {
        return Err(EmbedError::ConeCollision(p));
    }
    Ok(factor
        .iter()
        .map(|&(x, y)| Block::new(Point::Int(x), Point::Int(y), p).expect("distinct"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_difference_is_one_factor() {
        let c = CirculantGraph::new(8, [4]).unwrap();
        let f = one_factorize(&c).unwrap();
        assert_eq!(f.factors, vec![vec![(0, 4), (1, 5), (2, 6), (3, 7)]]);
    }

    #[test]
    fn mixed_orders() {
        let c = CirculantGraph::new(12, [2, 3]).unwrap();
        assert_eq!(one_factorize(&c).unwrap().factors.len(), 4);
        // difference 2 has order 5 in Z_10; with 5 it factorizes
        assert!(one_factorize(&CirculantGraph::new(10, [2]).unwrap()).is_err());
        let f = one_factorize(&CirculantGraph::new(10, [2, 5]).unwrap()).unwrap();
        assert_eq!(f.factors.len(), 3);
    }

    #[test]
    fn ham_pair() {
        let c = CirculantGraph::new(8, [1, 4]).unwrap();
        let (f, (i, j)) = one_factorize_with_ham_pair(&c, 1).unwrap();
        assert!(is_hamilton_pair(8, &f.factors[i], &f.factors[j]));
        let c = CirculantGraph::new(14, [3, 7]).unwrap();
        let (f, (i, j)) = one_factorize_with_ham_pair(&c, 3).unwrap();
        assert!(is_hamilton_pair(14, &f.factors[i], &f.factors[j]));
        let c = CirculantGraph::new(12, [3, 6]).unwrap();
        assert!(matches!(
            one_factorize_with_ham_pair(&c, 3),
            Err(EmbedError::NotCoprime(3, 12))
        ));
    }

    #[test]
    fn cone_blocks() {
        let f: Vec<Edge> = (0..4).map(|i| (i, i + 4)).collect();
        let b = cone(&f, Point::Inf(1)).unwrap();
        assert_eq!(b.len(), 4);
        assert!(b.contains(&Block::new(Point::Int(0), Point::Int(4), Point::Inf(1)).unwrap()));
        assert!(cone(&[], Point::Inf(1)).unwrap().is_empty());
        assert!(cone(&f, Point::Int(9)).is_err());
    }

    #[test]
    fn edge_colouring_is_proper() {
        // K5 needs 5 colours, at most 5 allowed
        let mut e = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                e.push((i, j));
            }
        }
        let col = misra_gries(5, &e);
        assert!(col.iter().all(|&c| c < 5));
        for (a, &(u, v)) in e.iter().enumerate() {
            for (b, &(x, y)) in e.iter().enumerate().skip(a + 1) {
                if u == x || u == y || v == x || v == y {
                    assert_ne!(col[a], col[b]);
                }
            }
        }
    }
}
