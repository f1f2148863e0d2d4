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

//! Hamilton-traversal patterns of graphs with dangling half-edges.
//!
//! Restrict a Hamilton cycle of any supergraph to a boundaried subgraph and
//! what is left is a *path system*: vertex-disjoint paths covering every
//! vertex, each leaving through two dangling half-edges, with every vertex
//! of degree exactly two in the system. The only other possibility is that
//! the cycle lies entirely inside, which is recorded as [`Pairing::Closed`].
//!
//! Path systems are grouped by how they pair up the used half-edges. For
//! each group we keep the internal edges used by every member and those
//! used by at least one member, which is enough to decide whether an edge is
//! forced into or out of every traversal. Summaries compose: gluing two
//! boundaried graphs along half-edges only needs their summaries.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkageError {
    #[error("vertex {0} has {1} incident edges and half-edges, more than 3")]
    DegreeTooHigh(String, usize),
    #[error("half-edge {0} is bound more than once")]
    BoundTwice(String),
    #[error("unknown half-edge {0}")]
    UnknownHalfEdge(String),
    #[error("duplicate half-edge id {0}")]
    DuplicateHalfEdge(String),
    #[error("frontier of {0} tokens is too wide to enumerate")]
    TooWide(usize),
}

pub type HalfEdgeId = String;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dangling {
    pub vertex: usize,
    pub id: HalfEdgeId,
    /// label used to find the partner half-edge when gluing
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
    pub dangling: Vec<Dangling>,
}

impl BoundaryGraph {
    pub fn new(graph: Graph, dangling: Vec<Dangling>) -> Self {
        let labels = (0..graph.n()).map(|i| format!("v{i}")).collect();
        BoundaryGraph {
            graph,
            labels,
            dangling,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.graph.n());
        self.labels = labels;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    /// Joins two boundaried graphs, turning each bound half-edge pair into
    /// an edge. Vertex labels should be disjoint.
    pub fn glue(
        &self,
        other: &BoundaryGraph,
        binding: &[(HalfEdgeId, HalfEdgeId)],
    ) -> Result<BoundaryGraph, LinkageError> {
        let shift = self.graph.n();
        let find = |bg: &BoundaryGraph, id: &str| {
            bg.dangling
                .iter()
                .find(|d| d.id == id)
                .map(|d| d.vertex)
                .ok_or_else(|| LinkageError::UnknownHalfEdge(id.to_string()))
        };
        check_binding(binding)?;
        let mut edges = self.graph.edges();
        edges.extend(
            other
                .graph
                .edges()
                .into_iter()
                .map(|(u, v)| (u + shift, v + shift)),
        );
        for (a, b) in binding {
            edges.push((find(self, a)?, find(other, b)? + shift));
        }
        let bound_left: BTreeSet<&str> = binding.iter().map(|(a, _)| a.as_str()).collect();
        let bound_right: BTreeSet<&str> = binding.iter().map(|(_, b)| b.as_str()).collect();
        let mut dangling: Vec<Dangling> = self
            .dangling
            .iter()
            .filter(|d| !bound_left.contains(d.id.as_str()))
            .cloned()
            .collect();
        dangling.extend(
            other
                .dangling
                .iter()
                .filter(|d| !bound_right.contains(d.id.as_str()))
                .map(|d| Dangling {
                    vertex: d.vertex + shift,
                    ..d.clone()
                }),
        );
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Ok(BoundaryGraph {
            graph: Graph::from_edges(shift + other.graph.n(), edges),
            labels,
            dangling,
        })
    }
}

fn check_binding(binding: &[(HalfEdgeId, HalfEdgeId)]) -> Result<(), LinkageError> {
    let mut left = BTreeSet::new();
    let mut right = BTreeSet::new();
    for (a, b) in binding {
        if !left.insert(a) {
            return Err(LinkageError::BoundTwice(a.clone()));
        }
        if !right.insert(b) {
            return Err(LinkageError::BoundTwice(b.clone()));
        }
    }
    Ok(())
}

/// Internal edge named by its endpoint labels, smaller first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeKey(pub String, pub String);

impl EdgeKey {
    pub fn new(a: &str, b: &str) -> Self {
        if a <= b {
            EdgeKey(a.to_string(), b.to_string())
        } else {
            EdgeKey(b.to_string(), a.to_string())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pairing {
    /// The traversal never leaves the graph.
    Closed,
    /// Sorted pairs of half-edges joined by a path.
    Open(Vec<(HalfEdgeId, HalfEdgeId)>),
}

impl Pairing {
    pub fn uses(&self, h: &str) -> bool {
        match self {
            Pairing::Closed => false,
            Pairing::Open(pairs) => pairs.iter().any(|(a, b)| a == h || b == h),
        }
    }

    fn open(mut pairs: Vec<(HalfEdgeId, HalfEdgeId)>) -> Self {
        for p in &mut pairs {
            if p.0 > p.1 {
                std::mem::swap(&mut p.0, &mut p.1);
            }
        }
        pairs.sort();
        Pairing::Open(pairs)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternUsage {
    /// edges used by every path system with this pairing
    pub always: BTreeSet<EdgeKey>,
    /// edges used by some path system with this pairing
    pub ever: BTreeSet<EdgeKey>,
}

impl PatternUsage {
    fn merge(&mut self, other: &PatternUsage) {
        self.always = self.always.intersection(&other.always).cloned().collect();
        self.ever.extend(other.ever.iter().cloned());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeStatus {
    InAll,
    InNone,
    Optional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdgeInfo {
    pub vertex: String,
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageSummary {
    pub vertex_count: usize,
    pub half_edges: BTreeMap<HalfEdgeId, HalfEdgeInfo>,
    pub edges: BTreeSet<EdgeKey>,
    pub patterns: BTreeMap<Pairing, PatternUsage>,
    /// With no feasible pattern every edge is reported in-none.
    pub edge_status: BTreeMap<EdgeKey, EdgeStatus>,
    /// Half-edge pairs used together or not at all by every pattern.
    pub twinned_pairs: BTreeSet<(HalfEdgeId, HalfEdgeId)>,
}

impl LinkageSummary {
    /// Summary of the graph with no vertices.
    pub fn empty() -> Self {
        let mut patterns = BTreeMap::new();
        patterns.insert(Pairing::Open(Vec::new()), PatternUsage::default());
        LinkageSummary::finish(0, BTreeMap::new(), BTreeSet::new(), patterns)
    }

    fn finish(
        vertex_count: usize,
        half_edges: BTreeMap<HalfEdgeId, HalfEdgeInfo>,
        edges: BTreeSet<EdgeKey>,
        patterns: BTreeMap<Pairing, PatternUsage>,
    ) -> Self {
        let edge_status = edges
            .iter()
            .map(|e| {
                let all = !patterns.is_empty() && patterns.values().all(|u| u.always.contains(e));
                let none = patterns.values().all(|u| !u.ever.contains(e));
                let st = if all {
                    EdgeStatus::InAll
                } else if none {
                    EdgeStatus::InNone
                } else {
                    EdgeStatus::Optional
                };
                (e.clone(), st)
            })
            .collect();
        let ids: Vec<&HalfEdgeId> = half_edges.keys().collect();
        let mut twinned_pairs = BTreeSet::new();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                if patterns.keys().all(|p| p.uses(a) == p.uses(b)) {
                    twinned_pairs.insert(((*a).clone(), (*b).clone()));
                }
            }
        }
        LinkageSummary {
            vertex_count,
            half_edges,
            edges,
            patterns,
            edge_status,
            twinned_pairs,
        }
    }

    pub fn status(&self, e: &EdgeKey) -> Option<EdgeStatus> {
        self.edge_status.get(e).copied()
    }

    pub fn is_twinned(&self, a: &str, b: &str) -> bool {
        let key = if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        self.twinned_pairs.contains(&key)
    }

    /// Pairs of half-edges, one per side, sharing a tag that occurs exactly
    /// once on each side.
    pub fn natural_binding(&self, other: &LinkageSummary) -> Vec<(HalfEdgeId, HalfEdgeId)> {
        let by_tag = |s: &LinkageSummary| {
            let mut m: BTreeMap<String, Vec<HalfEdgeId>> = BTreeMap::new();
            for (id, info) in &s.half_edges {
                m.entry(info.tag.clone()).or_default().push(id.clone());
            }
            m
        };
        let left = by_tag(self);
        let right = by_tag(other);
        left.iter()
            .filter_map(
                |(tag, ids)| match (ids.as_slice(), right.get(tag).map(Vec::as_slice)) {
                    ([a], Some([b])) => Some((a.clone(), b.clone())),
                    _ => None,
                },
            )
            .collect()
    }
}

/// Upper bound on the frontier, beyond which the enumeration refuses to run.
pub const MAX_TOKENS: usize = 60;

type Bits = Vec<u64>;

fn bit_set(bits: &mut Bits, i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn bits_to_keys(bits: &[u64], keys: &[EdgeKey]) -> BTreeSet<EdgeKey> {
    keys.iter()
        .enumerate()
        .filter(|(i, _)| bits[i / 64] >> (i % 64) & 1 == 1)
        .map(|(_, k)| k.clone())
        .collect()
}

/// Processing order found by greedy cut minimisation from every start vertex.
/// Returns the order and the largest number of edges crossing a prefix.
pub fn elimination_order(g: &Graph) -> (Vec<usize>, usize) {
    grouped_order(g, &[(0..g.n()).collect()])
}

/// Like [`elimination_order`], but finishes each group of vertices before
/// starting the next. Vertices missing from every group go last.
pub fn grouped_order(g: &Graph, groups: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut groups: Vec<Vec<usize>> = groups
        .iter()
        .map(|grp| {
            grp.iter()
                .copied()
                .filter(|&v| !std::mem::replace(&mut seen[v], true))
                .collect()
        })
        .filter(|grp: &Vec<usize>| !grp.is_empty())
        .collect();
    let rest: Vec<usize> = (0..n).filter(|&v| !seen[v]).collect();
    if !rest.is_empty() {
        groups.push(rest);
    }
    if groups.is_empty() {
        return (Vec::new(), 0);
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for &start in &groups[0] {
        let mut done = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut width = 0;
        let mut cut = 0usize;
        let mut to_done = vec![0usize; n];
        let mut gi = 0;
        let mut next = Some(start);
        while let Some(x) = next {
            done[x] = true;
            order.push(x);
            cut = cut + g.degree(x) - 2 * to_done[x];
            width = width.max(cut);
            for &y in g.neighbors(x) {
                to_done[y] += 1;
            }
            if best.as_ref().is_some_and(|(w, _)| width >= *w) {
                break;
            }
            while gi < groups.len() && groups[gi].iter().all(|&y| done[y]) {
                gi += 1;
            }
            next = groups.get(gi).and_then(|grp| {
                grp.iter().copied().filter(|&y| !done[y]).min_by_key(|&y| {
                    let delta = g.degree(y) as isize - 2 * to_done[y] as isize;
                    let isolated = usize::from(to_done[y] == 0);
                    (isolated, delta, std::cmp::Reverse(to_done[y]), y)
                })
            });
        }
        if order.len() == n && best.as_ref().is_none_or(|(w, _)| width < *w) {
            best = Some((width, order));
        }
    }
    let (w, order) = best.expect("some order");
    (order, w)
}

/// Enumerates all path-system pairings of a boundaried graph.
pub fn linkage_analysis(bg: &BoundaryGraph) -> Result<LinkageSummary, LinkageError> {
    let (order, _) = elimination_order(&bg.graph);
    linkage_analysis_ordered(bg, &order)
}

/// [`linkage_analysis`] processing vertices in the given order, which must
/// be a permutation of the vertices.
pub fn linkage_analysis_ordered(
    bg: &BoundaryGraph,
    order: &[usize],
) -> Result<LinkageSummary, LinkageError> {
    let g = &bg.graph;
    let n = g.n();
    let mut at_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut half_edges = BTreeMap::new();
    for (h, d) in bg.dangling.iter().enumerate() {
        at_vertex[d.vertex].push(h);
        let info = HalfEdgeInfo {
            vertex: bg.labels[d.vertex].clone(),
            tag: d.tag.clone(),
        };
        if half_edges.insert(d.id.clone(), info).is_some() {
            return Err(LinkageError::DuplicateHalfEdge(d.id.clone()));
        }
    }
    for (v, at) in at_vertex.iter().enumerate() {
        let deg = g.degree(v) + at.len();
        if deg > 3 {
            return Err(LinkageError::DegreeTooHigh(bg.labels[v].clone(), deg));
        }
    }

    let edge_list = g.edges();
    let m = edge_list.len();
    let keys: Vec<EdgeKey> = edge_list
        .iter()
        .map(|&(u, v)| EdgeKey::new(&bg.labels[u], &bg.labels[v]))
        .collect();
    let edge_index: HashMap<(usize, usize), usize> =
        edge_list.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let words = m.div_ceil(64).max(1);
    // tokens: internal edge e is e, half-edge h is m + h
    let token_of_half = |h: usize| (m + h) as u16;

    assert_eq!(order.len(), n, "order must list every vertex");
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let width = (0..n)
        .map(|i| {
            edge_list
                .iter()
                .filter(|&&(u, v)| (pos[u] <= i) != (pos[v] <= i))
                .count()
        })
        .max()
        .unwrap_or(0);
    if width + bg.dangling.len() > MAX_TOKENS {
        return Err(LinkageError::TooWide(width + bg.dangling.len()));
    }

    type State = Vec<(u16, u16)>;
    let mut states: HashMap<State, (Bits, Bits)> = HashMap::new();
    states.insert(Vec::new(), (vec![0; words], vec![0; words]));
    let mut closed: Option<(Bits, Bits)> = None;

    for (step, &x) in order.iter().enumerate() {
        let last = step + 1 == n;
        let mut incoming = Vec::new();
        let mut fresh: Vec<(u16, Option<usize>)> = Vec::new();
        for &y in g.neighbors(x) {
            let e = edge_index[&(x.min(y), x.max(y))];
            if pos[y] < pos[x] {
                incoming.push(e as u16);
            } else {
                fresh.push((e as u16, Some(e)));
            }
        }
        for &h in &at_vertex[x] {
            fresh.push((token_of_half(h), None));
        }

        let mut next: HashMap<State, (Bits, Bits)> = HashMap::with_capacity(states.len());
        let mut push = |state: State, always: Bits, ever: Bits| match next.get_mut(&state) {
            Some((a, e)) => {
                for (x, y) in a.iter_mut().zip(&always) {
                    *x &= *y;
                }
                for (x, y) in e.iter_mut().zip(&ever) {
                    *x |= *y;
                }
            }
            None => {
                next.insert(state, (always, ever));
            }
        };

        for (state, (always, ever)) in &states {
            let partner = |t: u16| {
                state.iter().find_map(|&(a, b)| {
                    if a == t {
                        Some(b)
                    } else if b == t {
                        Some(a)
                    } else {
                        None
                    }
                })
            };
            let used_in: Vec<u16> = incoming
                .iter()
                .copied()
                .filter(|&t| partner(t).is_some())
                .collect();
            if used_in.len() > 2 {
                continue;
            }
            let need = 2 - used_in.len();
            let rest: State = state
                .iter()
                .copied()
                .filter(|&(a, b)| !used_in.contains(&a) && !used_in.contains(&b))
                .collect();
            let mut choices: Vec<Vec<usize>> = Vec::new();
            match need {
                0 => choices.push(Vec::new()),
                1 => choices.extend((0..fresh.len()).map(|i| vec![i])),
                _ => {
                    for i in 0..fresh.len() {
                        for j in i + 1..fresh.len() {
                            choices.push(vec![i, j]);
                        }
                    }
                }
            }
            for pick in choices {
                let mut a2 = always.clone();
                let mut e2 = ever.clone();
                for &i in &pick {
                    if let Some(e) = fresh[i].1 {
                        bit_set(&mut a2, e);
                        bit_set(&mut e2, e);
                    }
                }
                let new_pair = match used_in.len() {
                    2 => {
                        let (a, b) = (used_in[0], used_in[1]);
                        let (pa, pb) = (partner(a).unwrap(), partner(b).unwrap());
                        if pa == b {
                            if last && rest.is_empty() {
                                match &mut closed {
                                    Some((ca, ce)) => {
                                        for (x, y) in ca.iter_mut().zip(&a2) {
                                            *x &= *y;
                                        }
                                        for (x, y) in ce.iter_mut().zip(&e2) {
                                            *x |= *y;
                                        }
                                    }
                                    None => closed = Some((a2, e2)),
                                }
                            }
                            continue;
                        }
                        (pa, pb)
                    }
                    1 => (partner(used_in[0]).unwrap(), fresh[pick[0]].0),
                    _ => (fresh[pick[0]].0, fresh[pick[1]].0),
                };
                let mut s2 = rest.clone();
                s2.push((new_pair.0.min(new_pair.1), new_pair.0.max(new_pair.1)));
                s2.sort_unstable();
                push(s2, a2, e2);
            }
        }
        states = next;
    }

    let mut patterns = BTreeMap::new();
    for (state, (always, ever)) in states {
        if state
            .iter()
            .any(|&(a, b)| (a as usize) < m || (b as usize) < m)
        {
            continue;
        }
        let id = |t: u16| bg.dangling[t as usize - m].id.clone();
        let pairing = Pairing::open(state.iter().map(|&(a, b)| (id(a), id(b))).collect());
        let usage = PatternUsage {
            always: bits_to_keys(&always, &keys),
            ever: bits_to_keys(&ever, &keys),
        };
        patterns
            .entry(pairing)
            .and_modify(|u: &mut PatternUsage| u.merge(&usage))
            .or_insert(usage);
    }
    if let Some((always, ever)) = closed {
        patterns.insert(
            Pairing::Closed,
            PatternUsage {
                always: bits_to_keys(&always, &keys),
                ever: bits_to_keys(&ever, &keys),
            },
        );
    }
    Ok(LinkageSummary::finish(
        n,
        half_edges,
        keys.into_iter().collect(),
        patterns,
    ))
}

/// Summary of the graph obtained by gluing the graphs behind `s1` and `s2`
/// along `binding`; each bound pair becomes one edge.
pub fn compose_linkage(
    s1: &LinkageSummary,
    s2: &LinkageSummary,
    binding: &[(HalfEdgeId, HalfEdgeId)],
) -> Result<LinkageSummary, LinkageError> {
    check_binding(binding)?;
    for (a, b) in binding {
        if !s1.half_edges.contains_key(a) {
            return Err(LinkageError::UnknownHalfEdge(a.clone()));
        }
        if !s2.half_edges.contains_key(b) {
            return Err(LinkageError::UnknownHalfEdge(b.clone()));
        }
    }
    let glued: Vec<EdgeKey> = binding
        .iter()
        .map(|(a, b)| EdgeKey::new(&s1.half_edges[a].vertex, &s2.half_edges[b].vertex))
        .collect();
    let link: HashMap<&str, &str> = binding
        .iter()
        .flat_map(|(a, b)| [(a.as_str(), b.as_str()), (b.as_str(), a.as_str())])
        .collect();

    let mut half_edges = BTreeMap::new();
    for (side, s) in [(0, s1), (1, s2)] {
        for (id, info) in &s.half_edges {
            let bound = binding
                .iter()
                .any(|(a, b)| if side == 0 { a == id } else { b == id });
            if !bound && half_edges.insert(id.clone(), info.clone()).is_some() {
                return Err(LinkageError::DuplicateHalfEdge(id.clone()));
            }
        }
    }
    let mut edges: BTreeSet<EdgeKey> = s1.edges.union(&s2.edges).cloned().collect();
    edges.extend(glued.iter().cloned());
    let vertex_count = s1.vertex_count + s2.vertex_count;

    let mut patterns: BTreeMap<Pairing, PatternUsage> = BTreeMap::new();
    let mut add = |p: Pairing, u: PatternUsage| {
        patterns.entry(p).and_modify(|x| x.merge(&u)).or_insert(u);
    };
    for (p1, u1) in &s1.patterns {
        for (p2, u2) in &s2.patterns {
            let union_usage = |extra: &[EdgeKey]| PatternUsage {
                always: u1
                    .always
                    .iter()
                    .chain(&u2.always)
                    .chain(extra)
                    .cloned()
                    .collect(),
                ever: u1
                    .ever
                    .iter()
                    .chain(&u2.ever)
                    .chain(extra)
                    .cloned()
                    .collect(),
            };
            let (pairs1, pairs2) = match (p1, p2) {
                (Pairing::Closed, Pairing::Open(q)) if s2.vertex_count == 0 && q.is_empty() => {
                    add(Pairing::Closed, union_usage(&[]));
                    continue;
                }
                (Pairing::Open(q), Pairing::Closed) if s1.vertex_count == 0 && q.is_empty() => {
                    add(Pairing::Closed, union_usage(&[]));
                    continue;
                }
                (Pairing::Open(a), Pairing::Open(b)) => (a, b),
                _ => continue,
            };
            let consistent = binding.iter().all(|(a, b)| p1.uses(a) == p2.uses(b));
            if !consistent {
                continue;
            }
            let used_glue: Vec<EdgeKey> = binding
                .iter()
                .zip(&glued)
                .filter(|((a, _), _)| p1.uses(a))
                .map(|(_, k)| k.clone())
                .collect();
            let mut partner: HashMap<&str, &str> = HashMap::new();
            for (a, b) in pairs1.iter().chain(pairs2) {
                partner.insert(a, b);
                partner.insert(b, a);
            }
            // walk from each free end: along a path, across a glued edge, ...
            let mut visited: BTreeSet<&str> = BTreeSet::new();
            let mut joined = Vec::new();
            let mut free_ends: Vec<&str> = partner
                .keys()
                .copied()
                .filter(|t| !link.contains_key(t))
                .collect();
            free_ends.sort_unstable();
            for start in free_ends {
                if visited.contains(start) {
                    continue;
                }
                let mut cur = start;
                loop {
                    visited.insert(cur);
                    let other = partner[cur];
                    visited.insert(other);
                    match link.get(other) {
                        Some(&next) => cur = next,
                        None => {
                            joined.push((start.to_string(), other.to_string()));
                            break;
                        }
                    }
                }
            }
            if visited.len() == partner.len() {
                add(Pairing::open(joined), union_usage(&used_glue));
            } else if joined.is_empty() {
                // the leftover tokens form cycles; one cycle is a closed traversal
                let mut cycles = 0;
                let mut seen: BTreeSet<&str> = BTreeSet::new();
                for &t in partner.keys() {
                    if seen.contains(t) {
                        continue;
                    }
                    cycles += 1;
                    let mut cur = t;
                    while seen.insert(cur) {
                        let other = partner[cur];
                        seen.insert(other);
                        cur = link[other];
                    }
                }
                if cycles == 1 {
                    add(Pairing::Closed, union_usage(&used_glue));
                }
            }
        }
    }
    Ok(LinkageSummary::finish(
        vertex_count,
        half_edges,
        edges,
        patterns,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::hamilton::find_hamilton_cycle;

    fn dangle(v: usize, id: &str) -> Dangling {
        Dangling {
            vertex: v,
            id: id.to_string(),
            tag: id.to_string(),
        }
    }

    #[test]
    fn single_vertex_two_half_edges() {
        let bg = BoundaryGraph::new(Graph::new(1), vec![dangle(0, "a"), dangle(0, "b")]);
        let s = linkage_analysis(&bg).unwrap();
        assert_eq!(s.patterns.len(), 1);
        let p = s.patterns.keys().next().unwrap();
        assert_eq!(p, &Pairing::Open(vec![("a".into(), "b".into())]));
        assert!(s.is_twinned("a", "b"));
    }

    #[test]
    fn empty_graph_has_trivial_pattern() {
        let s = linkage_analysis(&BoundaryGraph::new(Graph::new(0), vec![])).unwrap();
        assert_eq!(s, LinkageSummary::empty());
    }

    #[test]
    fn degree_check() {
        let bg = BoundaryGraph::new(Graph::complete(4), vec![dangle(0, "a")]);
        assert!(matches!(
            linkage_analysis(&bg),
            Err(LinkageError::DegreeTooHigh(..))
        ));
    }

    #[test]
    fn closed_cycles_match_solver() {
        for g in [Graph::complete(4), Graph::petersen(), Graph::cycle(7)] {
            let s = linkage_analysis(&BoundaryGraph::new(g.clone(), vec![])).unwrap();
            let ham = find_hamilton_cycle(&g, &[], &[], 1 << 20).is_cycle();
            assert_eq!(s.patterns.contains_key(&Pairing::Closed), ham);
            assert_eq!(s.patterns.is_empty(), !ham);
        }
    }

    #[test]
    fn path_with_ends() {
        // 0-1-2 with a half-edge at each end: the path is forced
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let bg = BoundaryGraph::new(g, vec![dangle(0, "a"), dangle(2, "b")]);
        let s = linkage_analysis(&bg).unwrap();
        assert_eq!(s.patterns.len(), 1);
        assert!(s.edge_status.values().all(|&st| st == EdgeStatus::InAll));
    }

    #[test]
    fn compose_with_empty_is_identity() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let bg = BoundaryGraph::new(g, vec![dangle(0, "a"), dangle(2, "b"), dangle(1, "c")]);
        let s = linkage_analysis(&bg).unwrap();
        let c = compose_linkage(&s, &LinkageSummary::empty(), &[]).unwrap();
        assert_eq!(c, s);
    }

    #[test]
    fn binding_twice_rejected() {
        let bg = BoundaryGraph::new(Graph::new(1), vec![dangle(0, "a"), dangle(0, "b")]);
        let s = linkage_analysis(&bg).unwrap();
        let bind = vec![
            ("a".to_string(), "x".to_string()),
            ("a".to_string(), "y".to_string()),
        ];
        assert!(matches!(
            compose_linkage(&s, &s, &bind),
            Err(LinkageError::BoundTwice(_))
        ));
    }

    #[test]
    fn compose_matches_glue_on_k4_halves() {
        // splitting K4 minus nothing: left {0,1} right {2,3}
        let left = BoundaryGraph::new(
            Graph::from_edges(2, [(0, 1)]),
            vec![
                dangle(0, "l02"),
                dangle(0, "l03"),
                dangle(1, "l12"),
                dangle(1, "l13"),
            ],
        )
        .with_labels(vec!["n0".into(), "n1".into()]);
        let right = BoundaryGraph::new(
            Graph::from_edges(2, [(0, 1)]),
            vec![
                dangle(0, "r02"),
                dangle(1, "r03"),
                dangle(0, "r12"),
                dangle(1, "r13"),
            ],
        )
        .with_labels(vec!["n2".into(), "n3".into()]);
        let bind: Vec<(String, String)> = [
            ("l02", "r02"),
            ("l03", "r03"),
            ("l12", "r12"),
            ("l13", "r13"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let direct = linkage_analysis(&left.glue(&right, &bind).unwrap()).unwrap();
        let composed = compose_linkage(
            &linkage_analysis(&left).unwrap(),
            &linkage_analysis(&right).unwrap(),
            &bind,
        )
        .unwrap();
        assert_eq!(direct.patterns, composed.patterns);
        assert_eq!(direct.edge_status, composed.edge_status);
        assert!(direct.patterns.contains_key(&Pairing::Closed));
    }
}
