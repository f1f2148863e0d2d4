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

//! Steiner triple systems by exhaustive backtracking and by random
//! hill-climbing, their block-disjoint pairs, and a Hamiltonicity census of
//! the 2-BIGs of those pairs.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::{Block, Kind, Point, TripleSystem};
use crate::format::write_design;
use crate::graph::{build_big, is_bipartite, is_connected};
use crate::hamilton::{find_hamilton_cycle, HamiltonOutcome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("exhaustive enumeration supports v = 7 or 9, got {0}")]
    UnsupportedOrder(usize),
    #[error("v = {0} is not 1 or 3 mod 6")]
    Inadmissible(usize),
    #[error("no success within {0} attempts")]
    BudgetExhausted(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumMode {
    /// every labelled system on `1..=v`
    Labelled,
    /// one representative per isomorphism class
    NonIsomorphic,
}

fn admissible(v: usize) -> bool {
    v % 6 == 1 || v % 6 == 3
}

/// Triples on `0..v` as index triples.
type Tri = [u8; 3];

fn to_system(v: usize, tris: &[Tri]) -> TripleSystem {
    let blocks = tris
        .iter()
        .map(|t| Block::ints(t[0] as u32 + 1, t[1] as u32 + 1, t[2] as u32 + 1))
        .collect();
    let points = (1..=v as u32).map(Point::Int).collect();
    TripleSystem::with_points(points, blocks, 1, Kind::Complete)
}

struct Backtrack {
    v: usize,
    covered: Vec<bool>,
    stack: Vec<Tri>,
}

impl Backtrack {
    fn new(v: usize) -> Self {
        Backtrack {
            v,
            covered: vec![false; v * v],
            stack: Vec::new(),
        }
    }

    fn set(&mut self, t: Tri, on: bool) {
        let v = self.v;
        for (x, y) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            self.covered[x as usize * v + y as usize] = on;
            self.covered[y as usize * v + x as usize] = on;
        }
    }

    fn free(&self, x: usize, y: usize) -> bool {
        !self.covered[x * self.v + y]
    }

    fn first_uncovered(&self) -> Option<(usize, usize)> {
        (0..self.v).find_map(|x| (x + 1..self.v).find(|&y| self.free(x, y)).map(|y| (x, y)))
    }

    fn candidates(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.v)
            .filter(|&z| z != x && z != y && self.free(x, z) && self.free(y, z))
            .collect()
    }

    fn run(&mut self, out: &mut Vec<Vec<Tri>>) {
        let Some((x, y)) = self.first_uncovered() else {
            let mut s = self.stack.clone();
            s.sort_unstable();
            out.push(s);
            return;
        };
        for z in self.candidates(x, y) {
            let mut t = [x as u8, y as u8, z as u8];
            t.sort_unstable();
            self.set(t, true);
            self.stack.push(t);
            self.run(out);
            self.stack.pop();
            self.set(t, false);
        }
    }
}

fn labelled_sts(v: usize) -> Vec<Vec<Tri>> {
    // split on the block through the pair {0, 1}; branches run in parallel
    // and are concatenated in branch order
    let branches: Vec<usize> = (2..v).collect();
    branches
        .par_iter()
        .map(|&z| {
            let mut bt = Backtrack::new(v);
            let t = [0, 1, z as u8];
            bt.set(t, true);
            bt.stack.push(t);
            let mut out = Vec::new();
            bt.run(&mut out);
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Canonical form of a Steiner triple system on `0..v` and its number of
/// automorphisms.
///
/// A labelling starts from an ordered pair, labels the third point of each
/// block through two labelled points in order of their labels, and branches
/// on the next point whenever that closure stalls. The canonical form is the
/// least relabelled block list over all such labellings; the labellings
/// reaching it are in bijection with the automorphism group.
pub fn canonical_form(v: usize, tris: &[Tri]) -> (Vec<Tri>, u64) {
    let mut third = vec![u8::MAX; v * v];
    for t in tris {
        let [a, b, c] = t.map(|x| x as usize);
        third[a * v + b] = c as u8;
        third[b * v + a] = c as u8;
        third[a * v + c] = b as u8;
        third[c * v + a] = b as u8;
        third[b * v + c] = a as u8;
        third[c * v + b] = a as u8;
    }
    let mut best: Option<Vec<Tri>> = None;
    let mut count = 0u64;
    let mut order: Vec<u8> = Vec::with_capacity(v);
    let mut label = vec![u8::MAX; v];
    fn close(v: usize, third: &[u8], order: &mut Vec<u8>, label: &mut [u8]) -> usize {
        let start = order.len();
        let mut i = 0;
        while i < order.len() {
            for j in 0..i {
                let z = third[order[j] as usize * v + order[i] as usize];
                if label[z as usize] == u8::MAX {
                    label[z as usize] = order.len() as u8;
                    order.push(z);
                }
            }
            i += 1;
        }
        order.len() - start
    }
    #[allow(clippy::too_many_arguments)]
    fn branch(
        v: usize,
        tris: &[Tri],
        third: &[u8],
        order: &mut Vec<u8>,
        label: &mut Vec<u8>,
        best: &mut Option<Vec<Tri>>,
        count: &mut u64,
    ) {
        if order.len() == v {
            let mut img: Vec<Tri> = tris
                .iter()
                .map(|t| {
                    let mut x = t.map(|p| label[p as usize]);
                    x.sort_unstable();
                    x
                })
                .collect();
            img.sort_unstable();
            match best {
                Some(b) if img > *b => {}
                Some(b) if img == *b => *count += 1,
                _ => {
                    *best = Some(img);
                    *count = 1;
                }
            }
            return;
        }
        for p in 0..v {
            if label[p] != u8::MAX {
                continue;
            }
            label[p] = order.len() as u8;
            order.push(p as u8);
            let added = if order.len() >= 2 {
                close(v, third, order, label)
            } else {
                0
            };
            branch(v, tris, third, order, label, best, count);
            for _ in 0..=added {
                let q = order.pop().unwrap();
                label[q as usize] = u8::MAX;
            }
        }
    }
    branch(
        v, tris, &third, &mut order, &mut label, &mut best, &mut count,
    );
    (best.unwrap_or_default(), count)
}

/// The labelled count of each class is `v! / |Aut|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClass {
    pub representative: Vec<[u8; 3]>,
    pub automorphisms: u64,
    pub labelled_count: u64,
}

pub fn iso_classes(v: usize, systems: &[Vec<Tri>]) -> Vec<IsoClass> {
    let forms: Vec<(Vec<Tri>, u64)> = systems.par_iter().map(|s| canonical_form(v, s)).collect();
    let mut classes: BTreeMap<Vec<Tri>, (u64, u64)> = BTreeMap::new();
    for (f, aut) in forms {
        let e = classes.entry(f).or_insert((aut, 0));
        e.1 += 1;
    }
    classes
        .into_iter()
        .map(
            |(representative, (automorphisms, labelled_count))| IsoClass {
                representative,
                automorphisms,
                labelled_count,
            },
        )
        .collect()
}

/// Every STS(v) on points `1..=v` (or one per isomorphism class).
pub fn enumerate_sts(v: usize, mode: EnumMode) -> Result<Vec<TripleSystem>, EnumError> {
    if v != 7 && v != 9 {
        return Err(EnumError::UnsupportedOrder(v));
    }
    let all = labelled_sts(v);
    Ok(match mode {
        EnumMode::Labelled => all.iter().map(|s| to_system(v, s)).collect(),
        EnumMode::NonIsomorphic => iso_classes(v, &all)
            .iter()
            .map(|c| to_system(v, &c.representative))
            .collect(),
    })
}

fn tris_of(ts: &TripleSystem) -> Vec<Tri> {
    let index: BTreeMap<Point, u8> = ts
        .points()
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i as u8))
        .collect();
    ts.blocks()
        .iter()
        .map(|b| {
            let mut t = b.points().map(|p| index[&p]);
            t.sort_unstable();
            t
        })
        .collect()
}

/// Canonical form and automorphism count of a complete STS.
pub fn canonical_system(ts: &TripleSystem) -> (TripleSystem, u64) {
    let v = ts.order();
    let (f, aut) = canonical_form(v, &tris_of(ts));
    (to_system(v, &f), aut)
}

fn disjoint(a: &[Tri], b: &[Tri]) -> bool {
    // both sorted
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return false,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    true
}

fn union_system(v: usize, a: &[Tri], b: &[Tri]) -> TripleSystem {
    let both: Vec<Tri> = a.iter().chain(b).copied().collect();
    to_system(v, &both).with_lambda(2)
}

/// Unions of two block-disjoint labelled STS(v), each unordered pair once;
/// the emitted systems are distinct as block multisets.
pub fn disjoint_pairs(v: usize) -> Result<Vec<TripleSystem>, EnumError> {
    if v != 7 && v != 9 {
        return Err(EnumError::UnsupportedOrder(v));
    }
    let all = labelled_sts(v);
    let unions: Vec<Vec<Tri>> = (0..all.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let all = &all;
            (i + 1..all.len())
                .filter(move |&j| disjoint(&all[i], &all[j]))
                .map(move |j| {
                    let mut u: Vec<Tri> = all[i].iter().chain(&all[j]).copied().collect();
                    u.sort_unstable();
                    u
                })
        })
        .collect();
    let mut seen = HashSet::new();
    Ok(unions
        .into_iter()
        .filter(|u| seen.insert(u.clone()))
        .map(|u| to_system(v, &u).with_lambda(2))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub v: usize,
    pub exhaustive: bool,
    pub systems_examined: u64,
    pub connected_bipartite_count: u64,
    pub hamiltonian_count: u64,
    /// solver ran out of budget on these (design files)
    pub inconclusive: Vec<String>,
    /// connected bipartite 2-BIG without a Hamilton cycle (design files)
    pub counterexamples: Vec<String>,
}

impl CensusResult {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty() && self.inconclusive.is_empty()
    }
}

enum Verdict {
    Disconnected,
    Hamiltonian,
    NotHamiltonian,
    Inconclusive,
}

fn judge(ts: &TripleSystem, budget: u64) -> Verdict {
    let big = build_big(ts, 2);
    debug_assert!(is_bipartite(&big.graph));
    if !is_connected(&big.graph) {
        return Verdict::Disconnected;
    }
    match find_hamilton_cycle(&big.graph, &[], &[], budget) {
        HamiltonOutcome::Cycle(_) => Verdict::Hamiltonian,
        HamiltonOutcome::None => Verdict::NotHamiltonian,
        HamiltonOutcome::BudgetExhausted { .. } => Verdict::Inconclusive,
    }
}

fn tally(v: usize, exhaustive: bool, systems: &[TripleSystem], budget: u64) -> CensusResult {
    let verdicts: Vec<Verdict> = systems.par_iter().map(|s| judge(s, budget)).collect();
    let mut r = CensusResult {
        v,
        exhaustive,
        systems_examined: systems.len() as u64,
        connected_bipartite_count: 0,
        hamiltonian_count: 0,
        inconclusive: Vec::new(),
        counterexamples: Vec::new(),
    };
    for (s, verdict) in systems.iter().zip(verdicts) {
        match verdict {
            Verdict::Disconnected => {}
            Verdict::Hamiltonian => {
                r.connected_bipartite_count += 1;
                r.hamiltonian_count += 1;
            }
            Verdict::NotHamiltonian => {
                r.connected_bipartite_count += 1;
                r.counterexamples.push(write_design(s, None));
            }
            Verdict::Inconclusive => {
                r.connected_bipartite_count += 1;
                r.inconclusive.push(write_design(s, None));
            }
        }
    }
    r
}

/// Every decomposable TTS(v), `v` in {7, 9}: those with connected 2-BIG
/// should all be Hamiltonian.
pub fn hamilton_census(v: usize, budget: u64) -> Result<CensusResult, EnumError> {
    let systems = disjoint_pairs(v)?;
    Ok(tally(v, true, &systems, budget))
}

/// A random STS(v) by hill-climbing: repeatedly pick a point `x` lying in
/// too few blocks and two points `y`, `z` not yet with `x`; add `{x,y,z}`,
/// first removing the block through `{y,z}` if there is one.
pub fn random_sts(v: usize, rng: &mut impl Rng) -> Result<TripleSystem, EnumError> {
    if !admissible(v) {
        return Err(EnumError::Inadmissible(v));
    }
    Ok(to_system(v, &hill_climb(v, rng)))
}

fn hill_climb(v: usize, rng: &mut impl Rng) -> Vec<Tri> {
    let target = v * (v - 1) / 6;
    // block[x][y] = index of the block through {x,y}
    let mut through = vec![usize::MAX; v * v];
    let mut blocks: Vec<Option<Tri>> = Vec::new();
    let mut live_blocks = 0;
    let mut degree = vec![0usize; v];
    let full = (v - 1) / 2;
    let set = |through: &mut Vec<usize>, t: Tri, idx: usize| {
        for (x, y) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            through[x as usize * v + y as usize] = idx;
            through[y as usize * v + x as usize] = idx;
        }
    };
    while live_blocks < target {
        let live: Vec<usize> = (0..v).filter(|&x| degree[x] < full).collect();
        let x = *live.choose(rng).expect("a live point exists");
        let free: Vec<usize> = (0..v)
            .filter(|&y| y != x && through[x * v + y] == usize::MAX)
            .collect();
        let mut pick = free.choose_multiple(rng, 2);
        let (y, z) = (*pick.next().unwrap(), *pick.next().unwrap());
        let old = through[y * v + z];
        if old != usize::MAX {
            let t = blocks[old].take().expect("indexed block is present");
            set(&mut through, t, usize::MAX);
            for p in t {
                degree[p as usize] -= 1;
            }
            live_blocks -= 1;
        }
        let mut t = [x as u8, y as u8, z as u8];
        t.sort_unstable();
        blocks.push(Some(t));
        set(&mut through, t, blocks.len() - 1);
        for p in t {
            degree[p as usize] += 1;
        }
        live_blocks += 1;
    }
    let mut out: Vec<Tri> = blocks.into_iter().flatten().collect();
    out.sort_unstable();
    out
}

/// A random decomposable TTS(v): two independently sampled STS(v) that
/// happen to be block-disjoint. Returns the system and the attempts used.
pub fn random_disjoint_pair(
    v: usize,
    rng: &mut impl Rng,
    budget: u64,
) -> Result<(TripleSystem, u64), EnumError> {
    if !admissible(v) {
        return Err(EnumError::Inadmissible(v));
    }
    for attempt in 1..=budget {
        let a = hill_climb(v, rng);
        let b = hill_climb(v, rng);
        if disjoint(&a, &b) {
            return Ok((union_system(v, &a, &b), attempt));
        }
    }
    Err(EnumError::BudgetExhausted(budget))
}

/// Census on `n` random decomposable TTS(v); not exhaustive.
pub fn sample_census(
    v: usize,
    n: usize,
    seed: u64,
    budget: u64,
) -> Result<CensusResult, EnumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut systems = Vec::with_capacity(n);
    for _ in 0..n {
        systems.push(random_disjoint_pair(v, &mut rng, 10_000)?.0);
    }
    Ok(tally(v, false, &systems, budget))
}

/// Seed used for the order-15 test vehicle.
pub const TTS15_SEED: u64 = 15;

/// A decomposable TTS(v) with connected 2-BIG drawn from a seeded random
/// source. Returns the system and the number of disjoint pairs drawn.
pub fn connected_disjoint_pair(
    v: usize,
    seed: u64,
    budget: u64,
) -> Result<(TripleSystem, u64), EnumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=budget {
        let (ts, _) = random_disjoint_pair(v, &mut rng, 10_000)?;
        if is_connected(&build_big(&ts, 2).graph) {
            return Ok((ts, attempt));
        }
    }
    Err(EnumError::BudgetExhausted(budget))
}

/// The order-15 seed used by the embedding tests.
pub fn tts15_seed() -> TripleSystem {
    connected_disjoint_pair(15, TTS15_SEED, 1000)
        .expect("the fixed seed yields a connected pair")
        .0
}
