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

//! Embedding a seed twofold system of order `u` into one of order `v`.
//!
//! `R1 ∪ R2 ∪ seed` is already a twofold system of order `v`, but its 2-BIG
//! splits into the seed's 2-BIG and that of `R1 ∪ R2`. A single trade on
//! four blocks joins the two.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::construction::{build_halves, ConstructionMeta, ConstructionParams};
use super::EmbedError;
use crate::design::{apply_trade, decompose, Block, Kind, Point, Trade, TripleSystem};
use crate::graph::{build_big, components, is_bipartite, is_connected};

/// `{a,b,∞i}`, `{b,c,∞j}`, `{c,a,∞k}`, `{∞i,∞j,∞k}` in one part, traded for
/// `{∞i,∞j,b}`, `{∞i,∞k,a}`, `{∞j,∞k,c}`, `{a,b,c}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradeQuadruple {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub i: u32,
    pub j: u32,
    pub k: u32,
    /// 1 for `R1`, 2 for `R2`
    pub half: u8,
    /// part of the seed decomposition holding `{∞i,∞j,∞k}`, 1 or 2
    pub seed_part: u8,
}

impl TradeQuadruple {
    pub fn trade(&self) -> Trade {
        let (a, b, c) = (Point::Int(self.a), Point::Int(self.b), Point::Int(self.c));
        let (i, j, k) = (Point::Inf(self.i), Point::Inf(self.j), Point::Inf(self.k));
        let blk = |x, y, z| Block::new(x, y, z).expect("distinct points");
        Trade::new(
            vec![blk(a, b, i), blk(b, c, j), blk(c, a, k), blk(i, j, k)],
            vec![blk(i, j, b), blk(i, k, a), blk(j, k, c), blk(a, b, c)],
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingResult {
    #[serde(skip)]
    pub system: TripleSystem,
    #[serde(skip)]
    pub intermediate: TripleSystem,
    /// part (0 or 1) of each block of `system`, aligned with `system.blocks()`
    #[serde(skip)]
    pub parts: Vec<u8>,
    pub meta: ConstructionMeta,
    /// seed point to its label in the output
    pub seed_labels: Vec<(Point, Point)>,
    pub quadruple: TradeQuadruple,
    pub trade: Trade,
    /// the canonical scan failed and the seed was relabelled onto α, β, γ
    pub relabelled_seed: bool,
    pub candidates_tried: usize,
    pub intermediate_components: usize,
    pub final_bipartite: bool,
    pub final_connected: bool,
    pub reversal_restores_intermediate: bool,
}

type Parts = [Vec<Block>; 2];

/// Checks the seed and returns its parts relabelled onto `inf1..infu`.
fn prepare_seed(tts_u: &TripleSystem) -> Result<(Vec<(Point, Point)>, Parts), EmbedError> {
    if tts_u.lambda() != 2 {
        return Err(EmbedError::Seed(format!(
            "lambda is {}, not 2",
            tts_u.lambda()
        )));
    }
    let rep = tts_u.validate();
    if !rep.valid {
        return Err(EmbedError::Seed(
            "not a complete twofold triple system".into(),
        ));
    }
    let big = build_big(tts_u, 2);
    if !is_connected(&big.graph) {
        return Err(EmbedError::Seed("2-BIG is not connected".into()));
    }
    let dec = decompose(tts_u)?.ok_or_else(|| EmbedError::Seed("2-BIG is not bipartite".into()))?;
    let labels: Vec<(Point, Point)> = tts_u
        .points()
        .iter()
        .enumerate()
        .map(|(n, &p)| (p, Point::Inf(n as u32 + 1)))
        .collect();
    let map: BTreeMap<Point, Point> = labels.iter().copied().collect();
    let lift = |bs: &[Block]| -> Vec<Block> {
        let mut out: Vec<Block> = bs
            .iter()
            .map(|b| b.map(|p| map[&p]).expect("injective"))
            .collect();
        out.sort();
        out
    };
    Ok((labels, [lift(&dec.part1), lift(&dec.part2)]))
}

/// `match[i][x] = y` when `{x, y, ∞i}` is a block; index 0 unused.
fn cone_matchings(half: &TripleSystem, w: u32, u: u32) -> Vec<Vec<u32>> {
    let mut m = vec![vec![u32::MAX; w as usize]; u as usize + 1];
    for b in half.blocks() {
        let mut ints = Vec::new();
        let mut infs = Vec::new();
        for &p in b.points() {
            match p {
                Point::Int(x) => ints.push(x),
                Point::Inf(i) => infs.push(i),
            }
        }
        if let (&[x, y], &[i]) = (&ints[..], &infs[..]) {
            m[i as usize][x as usize] = y;
            m[i as usize][y as usize] = x;
        }
    }
    m
}

fn assemble(r: &[&TripleSystem; 2], seed: &[Vec<Block>; 2], v: u32) -> TripleSystem {
    let blocks: Vec<Block> = r[0]
        .blocks()
        .iter()
        .chain(r[1].blocks())
        .chain(&seed[0])
        .chain(&seed[1])
        .copied()
        .collect();
    let ts = TripleSystem::new(blocks, 2, Kind::Complete);
    debug_assert_eq!(ts.order(), v as usize);
    ts
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn inf_index(p: Point) -> u32 {
    match p {
        Point::Inf(i) => i,
        Point::Int(_) => unreachable!("seed points are relabelled to infinities"),
    }
}

/// Scans seed blocks in canonical order (part, block, role permutation,
/// half, `a`) and returns the first quadruple whose trade gives a connected
/// 2-BIG, with the number of candidates examined.
fn scan(
    inter: &TripleSystem,
    seed: &[Vec<Block>; 2],
    matchings: &[Vec<Vec<u32>>; 2],
    w: u32,
) -> (Option<(TradeQuadruple, TripleSystem)>, usize) {
    let existing: BTreeSet<&Block> = inter.blocks().iter().collect();
    let mut tried = 0;
    for (sp, part) in seed.iter().enumerate() {
        for blk in part {
            let pts = blk.points().map(inf_index);
            for perm in PERMS {
                let (i, j, k) = (pts[perm[0]], pts[perm[1]], pts[perm[2]]);
                for (half, m) in matchings.iter().enumerate() {
                    for a in 0..w {
                        let b = m[i as usize][a as usize];
                        let c = m[j as usize][b as usize];
                        if m[k as usize][c as usize] != a {
                            continue;
                        }
                        if existing.contains(&Block::ints(a, b, c)) {
                            continue;
                        }
                        tried += 1;
                        let q = TradeQuadruple {
                            a,
                            b,
                            c,
                            i,
                            j,
                            k,
                            half: half as u8 + 1,
                            seed_part: sp as u8 + 1,
                        };
                        if let Ok(out) = apply_trade(inter, &q.trade()) {
                            let big = build_big(&out, 2);
                            if is_connected(&big.graph) && is_bipartite(&big.graph) {
                                return (Some((q, out)), tried);
                            }
                        }
                    }
                }
            }
        }
    }
    (None, tried)
}

/// Relabels the seed so its first block in part 1 becomes `{∞i,∞j,∞k}`,
/// where the three cone points join α, β, γ in pairs inside `R1`.
fn relabel_onto_triangle(
    seed: &[Vec<Block>; 2],
    m1: &[Vec<u32>],
    abg: [u32; 3],
    u: u32,
) -> Option<(Parts, BTreeMap<Point, Point>, [u32; 3])> {
    let [alpha, beta, gamma] = abg;
    let cone_of = |x: u32, y: u32| (1..=u).find(|&i| m1[i as usize][x as usize] == y);
    let ijk = [
        cone_of(alpha, beta)?,
        cone_of(beta, gamma)?,
        cone_of(gamma, alpha)?,
    ];
    let first = seed[0].first()?.points().map(inf_index);
    let mut sigma: BTreeMap<u32, u32> = BTreeMap::new();
    for (x, y) in first.iter().zip(&ijk) {
        sigma.insert(*x, *y);
    }
    let mut free = (1..=u).filter(|y| !ijk.contains(y));
    for x in 1..=u {
        if let std::collections::btree_map::Entry::Vacant(e) = sigma.entry(x) {
            e.insert(free.next()?);
        }
    }
    let pmap: BTreeMap<Point, Point> = sigma
        .iter()
        .map(|(&x, &y)| (Point::Inf(x), Point::Inf(y)))
        .collect();
    let lift = |bs: &[Block]| -> Vec<Block> {
        let mut out: Vec<Block> = bs.iter().map(|b| b.map(|p| pmap[&p]).unwrap()).collect();
        out.sort();
        out
    };
    Some(([lift(&seed[0]), lift(&seed[1])], pmap, ijk))
}

/// Embeds `tts_u` (complete, lambda 2, bipartite connected 2-BIG) into a
/// twofold system of order `v` with bipartite connected 2-BIG.
pub fn embed_system(tts_u: &TripleSystem, v: u32) -> Result<EmbeddingResult, EmbedError> {
    let u = tts_u.order() as u32;
    let params = ConstructionParams::new(u, v)?;
    let w = params.w;
    let (mut labels, seed) = prepare_seed(tts_u)?;
    let con = build_halves(&params)?;
    let halves = [&con.r1, &con.r2];
    let matchings = [cone_matchings(&con.r1, w, u), cone_matchings(&con.r2, w, u)];

    let mut inter = assemble(&halves, &seed, v);
    let (mut found, mut tried) = scan(&inter, &seed, &matchings, w);
    let mut relabelled = false;
    if found.is_none() {
        if let Some(abg) = con.meta.alpha_beta_gamma {
            if let Some((new_seed, pmap, [i, j, k])) =
                relabel_onto_triangle(&seed, &matchings[0], abg, u)
            {
                let cand_inter = assemble(&halves, &new_seed, v);
                let q = TradeQuadruple {
                    a: abg[0],
                    b: abg[1],
                    c: abg[2],
                    i,
                    j,
                    k,
                    half: 1,
                    seed_part: 1,
                };
                tried += 1;
                let out = apply_trade(&cand_inter, &q.trade())?;
                let big = build_big(&out, 2);
                if is_connected(&big.graph) && is_bipartite(&big.graph) {
                    for l in labels.iter_mut() {
                        l.1 = pmap[&l.1];
                    }
                    inter = cand_inter;
                    found = Some((q, out));
                    relabelled = true;
                }
            }
        }
    }
    let (quadruple, system) = found.ok_or(EmbedError::NoTrade { tried })?;
    let trade = quadruple.trade();

    let rep = system.validate();
    if !rep.valid || system.order() != v as usize {
        return Err(EmbedError::Final(format!(
            "output is not a twofold triple system of order {v}"
        )));
    }
    let inter_components = components(&build_big(&inter, 2).graph).len();
    let big = build_big(&system, 2);
    let final_bipartite = is_bipartite(&big.graph);
    let final_connected = is_connected(&big.graph);
    let reversed = apply_trade(&system, &trade.reversed())?;
    let parts = decompose(&system)?
        .map(|d| d.assignment)
        .ok_or_else(|| EmbedError::Final("output 2-BIG is not bipartite".into()))?;

    Ok(EmbeddingResult {
        reversal_restores_intermediate: reversed.blocks() == inter.blocks(),
        system,
        intermediate: inter,
        parts,
        meta: con.meta,
        seed_labels: labels,
        quadruple,
        trade,
        relabelled_seed: relabelled,
        candidates_tried: tried,
        intermediate_components: inter_components,
        final_bipartite,
        final_connected,
    })
}
