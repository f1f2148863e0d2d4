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

//! Simple undirected graphs, block-intersection graphs and the structural
//! checks run on them.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::design::{Block, Point, TripleSystem};

/// Simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, dropping loops and repeated edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            if u != v {
                g.adj[u].push(v);
                g.adj[v].push(u);
            }
        }
        for list in &mut g.adj {
            list.sort_unstable();
            list.dedup();
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::from_edges(10, outer.chain(spokes).chain(inner))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Induced subgraph on `keep`, relabelled `0..keep.len()` in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(keep.len(), edges)
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges)
    }

    /// `n m` header, then one `u v` line per edge (0-based).
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph, String> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (_, header) = lines.next().ok_or("empty edge list")?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| format!("line 1: bad header {header:?}"))
            })
            .collect::<Result<_, _>>()?;
        let [n, m] = nums[..] else {
            return Err(format!("line 1: expected `n m`, got {header:?}"));
        };
        let mut edges = Vec::with_capacity(m);
        for (ln, line) in lines {
            let parts: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| format!("line {}: bad edge", ln + 1)))
                .collect::<Result<_, _>>()?;
            match parts[..] {
                [u, v] if u < n && v < n && u != v => edges.push((u, v)),
                _ => return Err(format!("line {}: bad edge {line:?}", ln + 1)),
            }
        }
        let g = Graph::from_edges(n, edges);
        if g.m() != m {
            return Err(format!("header says {m} edges, found {}", g.m()));
        }
        Ok(g)
    }
}

/// A block-intersection graph; vertex `i` is `blocks[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledBIG {
    pub graph: Graph,
    pub blocks: Vec<Block>,
}

impl LabeledBIG {
    pub fn to_labeled_edge_list(&self) -> String {
        let mut s = String::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let _ = writeln!(s, "# {i}: {b}");
        }
        s.push_str(&self.graph.to_edge_list());
        s
    }

    pub fn vertex_of(&self, block: &Block) -> Option<usize> {
        self.blocks.binary_search(block).ok()
    }
}

/// The `i`-block-intersection graph: blocks adjacent when they share exactly
/// `i` points. Identical blocks share three points and are never adjacent.
pub fn build_big(ts: &TripleSystem, i: usize) -> LabeledBIG {
    let blocks = ts.blocks().to_vec();
    let n = blocks.len();
    let graph = match i {
        2 => {
            let mut by_pair: HashMap<(Point, Point), Vec<usize>> = HashMap::new();
            for (idx, b) in blocks.iter().enumerate() {
                for p in b.pairs() {
                    by_pair.entry(p).or_default().push(idx);
                }
            }
            let mut edges = Vec::new();
            for list in by_pair.values() {
                for (x, &a) in list.iter().enumerate() {
                    for &b in &list[x + 1..] {
                        if blocks[a] != blocks[b] {
                            edges.push((a, b));
                        }
                    }
                }
            }
            Graph::from_edges(n, edges)
        }
        1 | 0 => {
            let mut by_point: HashMap<Point, Vec<usize>> = HashMap::new();
            for (idx, b) in blocks.iter().enumerate() {
                for &p in b.points() {
                    by_point.entry(p).or_default().push(idx);
                }
            }
            let mut shared: HashMap<(usize, usize), u8> = HashMap::new();
            for list in by_point.values() {
                for (x, &a) in list.iter().enumerate() {
                    for &b in &list[x + 1..] {
                        *shared.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                    }
                }
            }
            if i == 1 {
                Graph::from_edges(
                    n,
                    shared.into_iter().filter(|&(_, c)| c == 1).map(|(e, _)| e),
                )
            } else {
                let meets = Graph::from_edges(n, shared.into_keys());
                meets.complement()
            }
        }
        _ => Graph::new(n),
    };
    LabeledBIG { graph, blocks }
}

/// Proper 2-coloring, or an odd closed walk (as a vertex cycle) witnessing
/// that none exists.
pub fn two_color(g: &Graph) -> Result<Vec<u8>, Vec<usize>> {
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    parent[v] = u;
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return Err(odd_cycle(&parent, u, v));
                }
            }
        }
    }
    Ok(color)
}

fn odd_cycle(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let path = |mut x: usize| {
        let mut p = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let pu = path(u);
    let pv = path(v);
    // strip the common tail back to the root, keeping the meeting vertex
    let mut i = pu.len();
    let mut j = pv.len();
    while i > 1 && j > 1 && pu[i - 2] == pv[j - 2] {
        i -= 1;
        j -= 1;
    }
    let mut cycle: Vec<usize> = pu[..i].to_vec();
    cycle.extend(pv[..j - 1].iter().rev());
    cycle
}

pub fn is_bipartite(g: &Graph) -> bool {
    two_color(g).is_ok()
}

/// Connected components, each sorted, ordered by smallest vertex.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let u = comp[k];
            k += 1;
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    components(g).len() <= 1
}

pub fn is_cubic(g: &Graph) -> bool {
    (0..g.n()).all(|v| g.degree(v) == 3)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectivityMethod {
    Exhaustive,
    Sampled { removals: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeConnectivity {
    pub three_connected: bool,
    /// a separating set of at most two vertices, or the offending component
    /// when it has fewer than four vertices
    pub witness: Option<Vec<usize>>,
    pub method: ConnectivityMethod,
}

/// Components with at most this many vertices are checked exhaustively.
pub const EXHAUSTIVE_CUT_LIMIT: usize = 2000;

/// Checks every connected component for 3-connectivity.
///
/// For each removed vertex `x` the remainder is scanned for articulation
/// points, which finds every separating pair containing `x`. Components above
/// [`EXHAUSTIVE_CUT_LIMIT`] only have `samples` removals checked, plus every
/// vertex of degree below three.
pub fn is_3_connected(g: &Graph, samples: usize, seed: u64) -> ThreeConnectivity {
    let mut method = ConnectivityMethod::Exhaustive;
    for comp in components(g) {
        if comp.len() < 4 {
            return ThreeConnectivity {
                three_connected: false,
                witness: Some(comp),
                method,
            };
        }
        let sub = g.induced(&comp);
        let mut order: Vec<usize> = (0..sub.n()).collect();
        if sub.n() > EXHAUSTIVE_CUT_LIMIT {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            order.shuffle(&mut rng);
            let mut picked: Vec<usize> = (0..sub.n()).filter(|&v| sub.degree(v) < 3).collect();
            picked.extend(order.into_iter().take(samples));
            picked.sort_unstable();
            picked.dedup();
            order = picked;
            method = ConnectivityMethod::Sampled {
                removals: order.len(),
                seed,
            };
        }
        for &x in &order {
            if let Some(cut) = separator_with(&sub, x) {
                return ThreeConnectivity {
                    three_connected: false,
                    witness: Some(cut.into_iter().map(|v| comp[v]).collect()),
                    method,
                };
            }
        }
    }
    ThreeConnectivity {
        three_connected: true,
        witness: None,
        method,
    }
}

/// Looks for a separating set of size <= 2 containing `x`.
fn separator_with(g: &Graph, x: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    disc[x] = usize::MAX - 1;
    let root = if x == 0 { 1 } else { 0 };
    let mut time = 0;
    // iterative DFS: (vertex, parent, next neighbour index)
    let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
    disc[root] = time;
    low[root] = time;
    time += 1;
    let mut root_children = 0;
    let mut reached = 1;
    while let Some(&mut (u, p, ref mut idx)) = stack.last_mut() {
        let nb = g.neighbors(u);
        if *idx < nb.len() {
            let v = nb[*idx];
            *idx += 1;
            if v == x || v == p {
                continue;
            }
            if disc[v] == usize::MAX {
                disc[v] = time;
                low[v] = time;
                time += 1;
                reached += 1;
                if u == root {
                    root_children += 1;
                }
                stack.push((v, u, 0));
            } else {
                low[u] = low[u].min(disc[v]);
            }
        } else {
            stack.pop();
            if let Some(&(parent, _, _)) = stack.last() {
                low[parent] = low[parent].min(low[u]);
                if parent != root && low[u] >= disc[parent] {
                    return Some(vec![x, parent]);
                }
            }
        }
    }
    if reached < n - 1 {
        return Some(vec![x]);
    }
    if root_children > 1 {
        return Some(vec![x, root]);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurations::config_t;
    use crate::design::Kind;

    #[test]
    fn even_cycle_properties() {
        let g = Graph::cycle(6);
        assert!(is_bipartite(&g));
        assert!(is_connected(&g));
        assert!(!is_cubic(&g));
        assert!(!is_3_connected(&g, 0, 0).three_connected);
    }

    #[test]
    fn k4_properties() {
        let g = Graph::complete(4);
        assert!(is_cubic(&g));
        assert!(is_3_connected(&g, 0, 0).three_connected);
        let cyc = two_color(&g).unwrap_err();
        assert_eq!(cyc.len() % 2, 1);
    }

    #[test]
    fn odd_cycle_witness_is_a_cycle() {
        let g = Graph::petersen();
        let cyc = two_color(&g).unwrap_err();
        assert_eq!(cyc.len() % 2, 1);
        for i in 0..cyc.len() {
            assert!(g.has_edge(cyc[i], cyc[(i + 1) % cyc.len()]));
        }
    }

    #[test]
    fn two_cut_found() {
        // two K4s sharing an edge's endpoints: {0,1} separates
        let g = Graph::from_edges(
            6,
            [
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (0, 4),
                (0, 5),
                (1, 4),
                (1, 5),
                (4, 5),
            ],
        );
        let r = is_3_connected(&g, 0, 0);
        assert!(!r.three_connected);
        let mut w = r.witness.unwrap();
        w.sort();
        assert_eq!(w, vec![0, 1]);
        assert!(is_3_connected(&Graph::petersen(), 0, 0).three_connected);
    }

    #[test]
    fn table1_big_neighbourhoods() {
        let big = build_big(&config_t().system, 2);
        assert_eq!(big.graph.n(), 16);
        assert_eq!(big.graph.m(), 22);
        let v = |a, b, c| big.vertex_of(&Block::ints(a, b, c)).unwrap();
        let mut nb: Vec<usize> = big.graph.neighbors(v(4, 5, 6)).to_vec();
        nb.sort();
        let mut expect = vec![v(4, 5, 8), v(3, 4, 6), v(2, 5, 6)];
        expect.sort();
        assert_eq!(nb, expect);
        for (blk, deg) in [
            ((3, 4, 6), 2),
            ((1, 4, 7), 2),
            ((2, 3, 5), 2),
            ((1, 2, 8), 2),
        ] {
            assert_eq!(big.graph.degree(v(blk.0, blk.1, blk.2)), deg);
        }
        let twos = (0..16).filter(|&i| big.graph.degree(i) == 2).count();
        assert_eq!(twos, 4);
    }

    #[test]
    fn single_block_is_isolated() {
        let ts = TripleSystem::new(vec![Block::ints(1, 2, 3)], 2, Kind::Partial);
        for i in 0..3 {
            let big = build_big(&ts, i);
            assert_eq!(big.graph.n(), 1);
            assert_eq!(big.graph.m(), 0);
        }
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = Graph::petersen();
        let text = g.to_edge_list();
        assert!(text.starts_with("10 15\n"));
        assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
        assert!(Graph::parse_edge_list("3 1\n0 5\n").is_err());
    }
}
