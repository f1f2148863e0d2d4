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

//! Two partial Steiner systems `R1`, `R2` on `U ∪ Z_w`, `|U| = u`, whose
//! union plus any twofold system on `U` is a twofold system of order
//! `v = u + w`.
//!
//! Both halves are assembled the same way: some cyclic difference triples
//! develop into blocks inside `Z_w`, the remaining differences form a
//! circulant graph that is 1-factorized, and each factor is coned with a
//! point of `U`. For `w ≡ 0 (mod 6)` a few fixed blocks on differences
//! `m = w/6` and `2m` are added first and traded away at the end so `R1`
//! and `R2` share no block.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::circulant::{
    cone, is_hamilton_pair, one_factorize, parity_split, CirculantGraph, Edge, OneFactor,
};
use super::difference::{develop, diff_construction, DifferenceFamily, DifferenceTriple};
use super::EmbedError;
use crate::design::{apply_trade, Block, Kind, Point, Trade, TripleSystem};
use crate::graph::{build_big, components, is_bipartite};

/// Which branch of the leave definition applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    /// `w - u` in {1, 3, 5}: no difference triples at all
    Tight,
    /// `w - u` in {7, 9, 11} and `w <= 26`
    NearSmall,
    /// `w - u` in {7, 9, 11} and `w >= 28`
    NearLarge,
    /// `w - u > 11`
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub u: u32,
    pub v: u32,
    pub w: u32,
    pub t: u32,
    pub k: u32,
    pub s: u32,
    pub m: u32,
    pub h: u32,
    pub case: CaseTag,
}

fn admissible(n: u32) -> bool {
    n % 6 == 1 || n % 6 == 3
}

impl ConstructionParams {
    pub fn new(u: u32, v: u32) -> Result<Self, EmbedError> {
        let bad = |why: &str| EmbedError::Params {
            u,
            v,
            why: why.to_string(),
        };
        if !admissible(u) || !admissible(v) {
            return Err(bad("u and v must be 1 or 3 mod 6"));
        }
        if u <= 13 {
            return Err(bad("u must exceed 13"));
        }
        if v <= 2 * u {
            return Err(bad("v must exceed 2u"));
        }
        let w = v - u;
        let (t, k) = (w / 12, w % 12);
        if t == 0 {
            return Err(bad("w must be at least 12"));
        }
        let s = if k >= 6 { 2 * t } else { 2 * t - 1 };
        let m = s + 1;
        let (base, h_min) = match (w % 6, u % 6) {
            (2, 1) => (7, 2),
            (4, 3) => (9, 1),
            (0, 1) => (1, 3),
            (0, 3) => (3, 2),
            _ => return Err(bad("u mod 6 does not match w mod 6")),
        };
        if u < base || !(u - base).is_multiple_of(6) {
            return Err(bad("u is not of the required form"));
        }
        let h = (u - base) / 6;
        if h < h_min {
            return Err(bad(&format!("h = {h} is below its minimum {h_min}")));
        }
        if h > s {
            return Err(bad(&format!("h = {h} exceeds s = {s}")));
        }
        let case = if h == s {
            CaseTag::Tight
        } else if h + 1 == s {
            if w <= 26 {
                CaseTag::NearSmall
            } else {
                CaseTag::NearLarge
            }
        } else {
            CaseTag::General
        };
        Ok(ConstructionParams {
            u,
            v,
            w,
            t,
            k,
            s,
            m,
            h,
            case,
        })
    }

    pub fn zero_mod_six(&self) -> bool {
        self.w.is_multiple_of(6)
    }

    /// Differences consumed by the fixed blocks added for `w ≡ 0 (mod 6)`.
    pub fn reserved(&self) -> Vec<u32> {
        match (self.zero_mod_six(), self.u % 6) {
            (false, _) => Vec::new(),
            (true, 1) => vec![self.m, 2 * self.m],
            _ => vec![2 * self.m],
        }
    }
}

/// Every `(u, v)` with `u_min <= u <= u_max`, `v <= v_max` the construction
/// accepts.
pub fn feasible_pairs(u_max: u32, v_max: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for u in 14..=u_max {
        for v in (2 * u + 1)..=v_max {
            if ConstructionParams::new(u, v).is_ok() {
                out.push((u, v));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeaveSets {
    pub s1: BTreeSet<u32>,
    pub s2: BTreeSet<u32>,
    pub s_prime: BTreeSet<u32>,
    pub s1_star: BTreeSet<u32>,
    pub s2_star: BTreeSet<u32>,
}

/// One factor and the point of `U` it is coned with in each half.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    /// `F<i>` or `G<i>`
    pub name: String,
    pub differences: BTreeSet<u32>,
    pub cone_r1: Option<u32>,
    pub cone_r2: Option<u32>,
    pub edges: OneFactor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionMeta {
    pub params: ConstructionParams,
    pub d1: DifferenceFamily,
    pub d2: DifferenceFamily,
    pub removed1: Vec<DifferenceTriple>,
    pub removed2: Vec<DifferenceTriple>,
    pub leave: LeaveSets,
    /// difference whose two parity matchings close up into a Hamilton cycle
    pub ham_difference: u32,
    /// even-order difference left in `S'` for the remaining factors
    pub even_difference: Option<u32>,
    pub factors: Vec<FactorRecord>,
    pub step1_blocks: usize,
    pub step5_trade: Option<Trade>,
    pub alpha_beta_gamma: Option<[u32; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub r1: TripleSystem,
    pub r2: TripleSystem,
    pub meta: ConstructionMeta,
}

impl Construction {
    /// `R1 ∪ R2` as a partial twofold system.
    pub fn union(&self) -> TripleSystem {
        self.r1.union(&self.r2, 2, Kind::Partial)
    }

    /// `R1 ∪ R2` plus a twofold system on `U = {inf1, ..., infu}`.
    pub fn complete_with(&self, tts_u: &TripleSystem) -> TripleSystem {
        let ts = self.union().union(tts_u, 2, Kind::Complete);
        TripleSystem::with_points(ts.points().clone(), ts.blocks().to_vec(), 2, Kind::Complete)
    }
}

fn step1_blocks(p: &ConstructionParams) -> (Vec<Block>, Vec<Block>) {
    let (w, m) = (p.w, p.m);
    let b = |x: u32, y: u32, z: u32, i: u32| {
        Block::ints((x * m + i) % w, (y * m + i) % w, (z * m + i) % w)
    };
    let (mut r1, mut r2) = (Vec::new(), Vec::new());
    if !p.zero_mod_six() {
        return (r1, r2);
    }
    for i in 0..m {
        if p.u % 6 == 1 {
            r1.extend([b(0, 1, 2, i), b(2, 3, 4, i), b(4, 5, 0, i), b(1, 3, 5, i)]);
            r2.extend([b(0, 1, 5, i), b(1, 2, 3, i), b(3, 4, 5, i), b(0, 2, 4, i)]);
        } else {
            for r in [&mut r1, &mut r2] {
                r.extend([b(0, 2, 4, i), b(1, 3, 5, i)]);
            }
        }
    }
    (r1, r2)
}

/// Differences whose triples are removed from the two base families, in
/// priority order; the first `h` distinct triples hit are removed.
fn removal_candidates(p: &ConstructionParams) -> Vec<u32> {
    let (s, t, k) = (p.s, p.t, p.k);
    let ascending = |from: u32| (from..).take((s + 2) as usize);
    let mut c = Vec::new();
    match k {
        6 => {
            c.push(s);
            c.extend(ascending(1));
        }
        8 | 10 => c.extend(ascending(1)),
        0 => {
            c.push(s);
            c.extend(ascending(1));
        }
        2 if t % 2 == 1 => {
            c.push(s);
            c.extend(ascending(1));
        }
        4 if t % 2 == 1 => c.extend(ascending(1)),
        _ => {
            // t even and k in {2, 4}: difference 1, then s, s - 1, ...
            c.push(1);
            c.extend((1..=s).rev());
        }
    }
    c
}

fn remove_h(
    base: &DifferenceFamily,
    candidates: &[u32],
    h: u32,
) -> Result<(DifferenceFamily, Vec<DifferenceTriple>), EmbedError> {
    let mut removed: Vec<DifferenceTriple> = Vec::new();
    for &d in candidates {
        if removed.len() == h as usize {
            break;
        }
        if let Some(t) = base.triples.iter().find(|t| t.contains(d)) {
            if !removed.contains(t) {
                removed.push(*t);
            }
        }
    }
    if removed.len() != h as usize {
        return Err(EmbedError::Balance(format!(
            "could only select {} of {h} triples to remove",
            removed.len()
        )));
    }
    let kept = base
        .triples
        .iter()
        .filter(|t| !removed.contains(t))
        .copied()
        .collect();
    Ok((DifferenceFamily::new(kept)?, removed))
}

fn families(
    p: &ConstructionParams,
) -> Result<
    (
        DifferenceFamily,
        DifferenceFamily,
        Vec<DifferenceTriple>,
        Vec<DifferenceTriple>,
    ),
    EmbedError,
> {
    let single = |a: u32| -> Result<DifferenceFamily, EmbedError> {
        DifferenceFamily::new(vec![DifferenceTriple::new(2, a, a + 2)?])
    };
    Ok(match p.case {
        CaseTag::Tight => (
            DifferenceFamily::default(),
            DifferenceFamily::default(),
            Vec::new(),
            Vec::new(),
        ),
        CaseTag::NearSmall => (single(3)?, single(7)?, Vec::new(), Vec::new()),
        CaseTag::NearLarge => (
            single(2 * p.t + 3)?,
            single(2 * p.t + 7)?,
            Vec::new(),
            Vec::new(),
        ),
        CaseTag::General => {
            let (n1, n2) = if p.k >= 6 { (3, 4) } else { (1, 2) };
            let cand = removal_candidates(p);
            let (d1, r1) = remove_h(&diff_construction(n1, p.t, p.k)?, &cand, p.h)?;
            let (d2, r2) = remove_h(&diff_construction(n2, p.t, p.k)?, &cand, p.h)?;
            (d1, d2, r1, r2)
        }
    })
}

fn leave_sets(p: &ConstructionParams, d1: &DifferenceFamily, d2: &DifferenceFamily) -> LeaveSets {
    let reserved = p.reserved();
    let free = |d: &DifferenceFamily| -> BTreeSet<u32> {
        let used = d.elements();
        (1..=p.w / 2)
            .filter(|x| !used.contains(x) && !reserved.contains(x))
            .collect()
    };
    let s1 = free(d1);
    let s2 = free(d2);
    LeaveSets {
        s_prime: s1.intersection(&s2).copied().collect(),
        s1_star: s1.difference(&s2).copied().collect(),
        s2_star: s2.difference(&s1).copied().collect(),
        s1,
        s2,
    }
}

fn factor_count(w: u32, diffs: &BTreeSet<u32>) -> usize {
    diffs.iter().map(|&d| if 2 * d == w { 1 } else { 2 }).sum()
}

fn edge_diff(w: u32, e: Edge) -> u32 {
    let d = (e.1 + w - e.0) % w;
    d.min(w - d)
}

fn diffs_of(w: u32, f: &[Edge]) -> BTreeSet<u32> {
    f.iter().map(|&e| edge_diff(w, e)).collect()
}

fn norm(x: u32, y: u32) -> Edge {
    (x.min(y), x.max(y))
}

/// The fixed factors on differences `w/2` or `m` for `w ≡ 0 (mod 6)`, as
/// `(F_{u-2}, F_{u-3})`.
fn special_factors(p: &ConstructionParams) -> Vec<OneFactor> {
    let (w, m) = (p.w, p.m);
    if !p.zero_mod_six() {
        return Vec::new();
    }
    if p.u % 6 == 1 {
        return vec![(0..w / 2).map(|x| (x, x + w / 2)).collect()];
    }
    if w % 12 == 6 {
        let (even, odd) = parity_split(w, m);
        return vec![even, odd];
    }
    let x_set: Vec<u32> = (0..m).chain(2 * m..3 * m).chain(4 * m..5 * m).collect();
    let mut plus: Vec<Edge> = x_set.iter().map(|&x| norm(x, (x + m) % w)).collect();
    let mut minus: Vec<Edge> = x_set.iter().map(|&x| norm(x, (x + w - m) % w)).collect();
    plus.sort_unstable();
    minus.sort_unstable();
    vec![plus, minus]
}

/// Factors of `Circ(w, S')`, indexed so that entry `j` is `F_{5+j}`.
fn prime_factors(
    p: &ConstructionParams,
    s_prime: &BTreeSet<u32>,
    count: usize,
) -> Result<(Vec<OneFactor>, u32, Option<u32>), EmbedError> {
    let w = p.w;
    let specials = special_factors(p);
    let special_diffs: BTreeSet<u32> = specials.iter().flat_map(|f| diffs_of(w, f)).collect();
    let pool: BTreeSet<u32> = s_prime.difference(&special_diffs).copied().collect();
    let c = pool
        .iter()
        .copied()
        .find(|&d| w.gcd(&d) == 1)
        .ok_or_else(|| EmbedError::Balance(format!("no difference coprime to {w} in {pool:?}")))?;
    let rest: BTreeSet<u32> = pool.iter().copied().filter(|&d| d != c).collect();
    let circ = CirculantGraph::new(w, rest.iter().copied())?;
    let even = rest.iter().copied().find(|&d| circ.order(d) % 2 == 0);
    let generic = one_factorize(&circ)?.factors;
    let (ham_a, ham_b) = parity_split(w, c);
    // F_5 .. F_{u-2-|specials|}, then specials F_{u-3}, F_{u-2}, then F_{u-1}, F_u
    let mut out = generic;
    out.extend(specials.into_iter().rev());
    out.push(ham_a);
    out.push(ham_b);
    if out.len() != count {
        return Err(EmbedError::Balance(format!(
            "S' = {s_prime:?} gives {} factors, {count} needed",
            out.len()
        )));
    }
    Ok((out, c, even))
}

/// The four factors of `L1*` (or `L2*`); `swap_last` gives the odd/even
/// order used for `G3`, `G4`.
fn star_factors(
    p: &ConstructionParams,
    star: &BTreeSet<u32>,
    swap_last: bool,
) -> Result<Vec<OneFactor>, EmbedError> {
    let w = p.w;
    let out = match p.case {
        CaseTag::NearSmall | CaseTag::NearLarge => {
            let ds: Vec<u32> = star.iter().copied().collect();
            if ds.len() != 2 || ds.iter().any(|d| d % 2 == 0) {
                return Err(EmbedError::Balance(format!(
                    "S* = {star:?} is not two odd differences"
                )));
            }
            let (a0, a1) = parity_split(w, ds[0]);
            let (b0, b1) = parity_split(w, ds[1]);
            if swap_last {
                vec![a0, a1, b1, b0]
            } else {
                vec![a0, a1, b0, b1]
            }
        }
        _ => one_factorize(&CirculantGraph::new(w, star.iter().copied())?)?.factors,
    };
    if out.len() != 4 {
        return Err(EmbedError::Balance(format!(
            "S* = {star:?} gives {} factors instead of 4",
            out.len()
        )));
    }
    Ok(out)
}

fn inf(i: u32) -> Point {
    Point::Inf(i)
}

fn step5_trade(p: &ConstructionParams) -> Option<Trade> {
    if !p.zero_mod_six() {
        return None;
    }
    let (w, m, u) = (p.w, p.m, p.u);
    let z = |x: u32, i: u32| Point::Int((x * m + i) % w);
    let blk = |a: Point, b: Point, c: Point| Block::new(a, b, c).expect("distinct");
    let (mut removed, mut added) = (Vec::new(), Vec::new());
    for i in 0..m {
        if u % 6 == 1 {
            let q = inf(u - 2);
            removed.extend([
                blk(z(0, i), z(1, i), z(2, i)),
                blk(z(2, i), z(3, i), z(4, i)),
                blk(z(0, i), z(4, i), z(5, i)),
                blk(z(0, i), z(3, i), q),
                blk(z(1, i), z(4, i), q),
                blk(z(2, i), z(5, i), q),
            ]);
            added.extend([
                blk(z(0, i), z(3, i), z(4, i)),
                blk(z(0, i), z(2, i), z(5, i)),
                blk(z(1, i), z(2, i), z(4, i)),
                blk(z(0, i), z(1, i), q),
                blk(z(2, i), z(3, i), q),
                blk(z(4, i), z(5, i), q),
            ]);
        } else {
            let (j, j2) = if m % 2 == 0 || i % 2 == 0 {
                (u - 2, u - 3)
            } else {
                (u - 3, u - 2)
            };
            let (qj, qj2) = (inf(j), inf(j2));
            removed.extend([
                blk(z(0, i), z(2, i), z(4, i)),
                blk(z(1, i), z(3, i), z(5, i)),
                blk(z(0, i), z(1, i), qj),
                blk(z(2, i), z(3, i), qj),
                blk(z(5, i), z(0, i), qj2),
                blk(z(3, i), z(4, i), qj2),
            ]);
            added.extend([
                blk(z(0, i), z(2, i), qj),
                blk(z(1, i), z(3, i), qj),
                blk(z(0, i), z(1, i), z(5, i)),
                blk(z(2, i), z(3, i), z(4, i)),
                blk(z(4, i), z(0, i), qj2),
                blk(z(3, i), z(5, i), qj2),
            ]);
        }
    }
    Some(Trade::new(removed, added))
}

/// Three points of `Z_w` no two of which lie together in a block of `blocks`
/// avoiding `U`; the first in lexicographic order.
pub fn find_alpha_beta_gamma(w: u32, blocks: &[Block]) -> Option<[u32; 3]> {
    let n = w as usize;
    let mut inner = vec![vec![false; n]; n];
    for b in blocks {
        let pts = b.points();
        if pts.iter().all(|p| matches!(p, Point::Int(_))) {
            for (x, y) in b.pairs() {
                if let (Point::Int(x), Point::Int(y)) = (x, y) {
                    inner[x as usize][y as usize] = true;
                    inner[y as usize][x as usize] = true;
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if inner[a][b] {
                continue;
            }
            for (c, row) in inner.iter().enumerate().skip(b + 1) {
                if !row[a] && !row[b] {
                    return Some([a as u32, b as u32, c as u32]);
                }
            }
        }
    }
    None
}

/// Builds `R1` and `R2` for the given orders.
pub fn build_halves(params: &ConstructionParams) -> Result<Construction, EmbedError> {
    let p = params;
    let (w, u) = (p.w, p.u);
    let (step1_r1, step1_r2) = step1_blocks(p);
    let (d1, d2, removed1, removed2) = families(p)?;
    let leave = leave_sets(p, &d1, &d2);

    let l1: BTreeSet<u32> = leave.s1.clone();
    let l2: BTreeSet<u32> = leave.s2.clone();
    for (name, l) in [("L1", &l1), ("L2", &l2)] {
        let n = factor_count(w, l);
        if n != u as usize {
            return Err(EmbedError::Balance(format!(
                "{name} = Circ({w}, {l:?}) has {n} factors, u = {u}"
            )));
        }
    }

    // factors F1..F4 (L1*), G1..G4 (L2*) and F5..Fu (L')
    let (f_star, g_star, prime_count) = if p.case == CaseTag::Tight {
        (Vec::new(), Vec::new(), u as usize)
    } else {
        (
            star_factors(p, &leave.s1_star, false)?,
            star_factors(p, &leave.s2_star, true)?,
            u as usize - 4,
        )
    };
    let (prime, c, even) = prime_factors(p, &leave.s_prime, prime_count)?;
    let mut f: Vec<OneFactor> = f_star; // f[i-1] = F_i
    f.extend(prime);
    let g: Vec<OneFactor> = if p.case == CaseTag::Tight {
        f[..4].to_vec()
    } else {
        g_star
    };
    debug_assert!(is_hamilton_pair(w, &f[u as usize - 2], &f[u as usize - 1]));

    let mut r1 = step1_r1.clone();
    let mut r2 = step1_r2.clone();
    r1.extend(develop(w, &d1.triples)?);
    r2.extend(develop(w, &d2.triples)?);
    let mut records = Vec::new();
    let tight = p.case == CaseTag::Tight;
    for i in 1..=u {
        let fi = &f[i as usize - 1];
        r1.extend(cone(fi, inf(i))?);
        let r2_cone = if i >= 5 {
            r2.extend(cone(fi, inf(i - 1))?);
            Some(i - 1)
        } else if tight {
            let j = if i == 1 { u } else { i - 1 };
            r2.extend(cone(fi, inf(j))?);
            Some(j)
        } else {
            None
        };
        records.push(FactorRecord {
            name: format!("F{i}"),
            differences: diffs_of(w, fi),
            cone_r1: Some(i),
            cone_r2: r2_cone,
            edges: fi.clone(),
        });
    }
    if !tight {
        for (i, gi) in g.iter().enumerate() {
            let j = if i == 0 { u } else { i as u32 };
            r2.extend(cone(gi, inf(j))?);
            records.push(FactorRecord {
                name: format!("G{}", i + 1),
                differences: diffs_of(w, gi),
                cone_r1: None,
                cone_r2: Some(j),
                edges: gi.clone(),
            });
        }
    }

    let points: BTreeSet<Point> = (0..w).map(Point::Int).chain((1..=u).map(inf)).collect();
    let mut sys1 = TripleSystem::with_points(points.clone(), r1, 1, Kind::Partial);
    let sys2 = TripleSystem::with_points(points, r2, 1, Kind::Partial);
    let trade = step5_trade(p);
    if let Some(tr) = &trade {
        tr.check().map_err(EmbedError::Design)?;
        sys1 = apply_trade(&sys1, tr).map_err(EmbedError::Design)?;
    }
    for (name, sys) in [("R1", &sys1), ("R2", &sys2)] {
        let cov = sys.pair_coverage();
        if let Some((pair, n)) = cov.iter().find(|(_, &n)| n > 1) {
            return Err(EmbedError::Coverage(format!(
                "{name} covers {pair:?} {n} times"
            )));
        }
        let expect = (w as usize) * (w as usize - 1) / 2 + (w * u) as usize;
        if cov.len() != expect {
            return Err(EmbedError::Coverage(format!(
                "{name} covers {} pairs, expected {expect}",
                cov.len()
            )));
        }
    }
    let all: Vec<Block> = sys1.blocks().iter().chain(sys2.blocks()).copied().collect();
    let abg = find_alpha_beta_gamma(w, &all);
    let meta = ConstructionMeta {
        params: p.clone(),
        d1,
        d2,
        removed1,
        removed2,
        leave,
        ham_difference: c,
        even_difference: even,
        factors: records,
        step1_blocks: step1_r1.len() + step1_r2.len(),
        step5_trade: trade,
        alpha_beta_gamma: abg,
    };
    Ok(Construction {
        r1: sys1,
        r2: sys2,
        meta,
    })
}

/// Structural checks on a construction: half sizes, bipartite connected
/// 2-BIG of the union, no block shared by the halves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub blocks_r1: usize,
    pub blocks_r2: usize,
    pub shared_blocks: usize,
    pub bipartite: bool,
    pub components: usize,
    pub alpha_beta_gamma: Option<[u32; 3]>,
    pub lambda_pairs: BTreeMap<u32, usize>,
}

pub fn construction_report(c: &Construction) -> ConstructionReport {
    let union = c.union();
    let big = build_big(&union, 2);
    let r1: BTreeSet<&Block> = c.r1.blocks().iter().collect();
    let shared = c.r2.blocks().iter().filter(|b| r1.contains(b)).count();
    let mut hist = BTreeMap::new();
    for &n in union.pair_coverage().values() {
        *hist.entry(n).or_insert(0) += 1;
    }
    ConstructionReport {
        blocks_r1: c.r1.blocks().len(),
        blocks_r2: c.r2.blocks().len(),
        shared_blocks: shared,
        bipartite: is_bipartite(&big.graph),
        components: components(&big.graph).len(),
        alpha_beta_gamma: c.meta.alpha_beta_gamma,
        lambda_pairs: hist,
    }
}
