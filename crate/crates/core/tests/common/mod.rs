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

//! Independent checks shared by the integration tests. Nothing here calls
//! the library's own validators or graph routines.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use tts_core::design::{Block, Point};

pub fn pair_counts(blocks: &[Block]) -> HashMap<(Point, Point), u32> {
    let mut m = HashMap::new();
    for b in blocks {
        let p = b.points();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let key = if p[i] < p[j] {
                (p[i], p[j])
            } else {
                (p[j], p[i])
            };
            *m.entry(key).or_insert(0) += 1;
        }
    }
    m
}

/// Every pair of `points` covered exactly `lambda` times, nothing else.
pub fn covers_exactly(blocks: &[Block], points: &BTreeSet<Point>, lambda: u32) -> bool {
    let counts = pair_counts(blocks);
    let n = points.len();
    let pts: Vec<Point> = points.iter().copied().collect();
    if counts.len() != n * (n - 1) / 2 {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if counts.get(&(pts[i], pts[j])) != Some(&lambda) {
                return false;
            }
        }
    }
    true
}

/// Every pair covered at most once.
pub fn is_partial_steiner(blocks: &[Block]) -> bool {
    pair_counts(blocks).values().all(|&c| c == 1)
}

pub fn points_of(blocks: &[Block]) -> BTreeSet<Point> {
    blocks.iter().flat_map(|b| *b.points()).collect()
}

fn share_two(a: &Block, b: &Block) -> bool {
    a.points().iter().filter(|p| b.points().contains(p)).count() == 2
}

/// Adjacency of the 2-BIG by pairwise comparison.
pub fn big2_adjacency(blocks: &[Block]) -> Vec<Vec<usize>> {
    let n = blocks.len();
    let mut by_pair: HashMap<(Point, Point), Vec<usize>> = HashMap::new();
    for (i, b) in blocks.iter().enumerate() {
        let p = b.points();
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            by_pair.entry((p[x], p[y])).or_default().push(i);
        }
    }
    let mut adj = vec![Vec::new(); n];
    for list in by_pair.values() {
        for &a in list {
            for &b in list {
                if a != b && share_two(&blocks[a], &blocks[b]) && !adj[a].contains(&b) {
                    adj[a].push(b);
                }
            }
        }
    }
    adj
}

pub fn component_count(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

pub fn two_colorable(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    let mut color = vec![u8::MAX; n];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if color[y] == u8::MAX {
                    color[y] = 1 - color[x];
                    stack.push(y);
                } else if color[y] == color[x] {
                    return false;
                }
            }
        }
    }
    true
}

/// Edge set of Circ(w, S) as normalized pairs.
pub fn circulant_edges(w: u32, diffs: &[u32]) -> BTreeSet<(u32, u32)> {
    let mut e = BTreeSet::new();
    for &d in diffs {
        for i in 0..w {
            let j = (i + d) % w;
            e.insert((i.min(j), i.max(j)));
        }
    }
    e
}

/// Factors partition `host` and each covers every vertex of `Z_w` once.
pub fn is_one_factorization(
    w: u32,
    host: &BTreeSet<(u32, u32)>,
    factors: &[Vec<(u32, u32)>],
) -> bool {
    let mut seen = BTreeSet::new();
    for f in factors {
        let mut deg = vec![0u32; w as usize];
        for &(a, b) in f {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
            if !seen.insert((a.min(b), a.max(b))) {
                return false;
            }
        }
        if deg.iter().any(|&d| d != 1) {
            return false;
        }
    }
    seen == *host
}

/// Union of two perfect matchings on `Z_w` is one cycle through all vertices.
pub fn single_cycle(w: u32, f1: &[(u32, u32)], f2: &[(u32, u32)]) -> bool {
    let mut adj = vec![Vec::new(); w as usize];
    for &(a, b) in f1.iter().chain(f2) {
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    if adj.iter().any(|a| a.len() != 2) {
        return false;
    }
    let (mut prev, mut cur, mut len) = (0usize, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] != prev {
            adj[cur][0]
        } else {
            adj[cur][1]
        };
        prev = cur;
        cur = next;
        len += 1;
        if len > w as usize {
            return false;
        }
    }
    len == w as usize
}
