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

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tts_core::graph::Graph;
use tts_core::linkage::{
    compose_linkage, linkage_analysis, BoundaryGraph, Dangling, EdgeKey, Pairing, PatternUsage,
};

/// Random graph of maximum degree 3 with dangling half-edges filling some
/// of the spare degree.
fn random_boundary(n: usize, seed: u64, prefix: &str, tags: usize) -> BoundaryGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deg = vec![0usize; n];
    let mut edges = BTreeSet::new();
    // a long path first, so that path systems are common
    for a in 1..n {
        if rng.gen_bool(0.85) {
            edges.insert((a - 1, a));
            deg[a - 1] += 1;
            deg[a] += 1;
        }
    }
    for _ in 0..n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && deg[a] < 3 && deg[b] < 3 && edges.insert((a.min(b), a.max(b))) {
            deg[a] += 1;
            deg[b] += 1;
        }
    }
    let mut dangling = Vec::new();
    for (v, d) in deg.iter_mut().enumerate() {
        while *d < 3 && rng.gen_bool(0.45) {
            let k = dangling.len();
            dangling.push(Dangling {
                vertex: v,
                id: format!("{prefix}h{k}"),
                tag: format!("t{}", rng.gen_range(0..tags.max(1))),
            });
            *d += 1;
        }
    }
    let labels = (0..n).map(|i| format!("{prefix}{i}")).collect();
    BoundaryGraph::new(Graph::from_edges(n, edges), dangling).with_labels(labels)
}

/// Patterns by trying every subset of edges and half-edges in which each
/// vertex has degree two.
fn brute_force_patterns(bg: &BoundaryGraph) -> BTreeMap<Pairing, PatternUsage> {
    let n = bg.graph.n();
    let edges = bg.graph.edges();
    let m = edges.len();
    let h = bg.dangling.len();
    let key = |(a, b): (usize, usize)| EdgeKey::new(&bg.labels[a], &bg.labels[b]);
    let all_keys: BTreeSet<EdgeKey> = edges.iter().map(|&e| key(e)).collect();
    let mut found: BTreeMap<Pairing, PatternUsage> = BTreeMap::new();
    for mask in 0u64..(1u64 << (m + h)) {
        let mut deg = vec![0; n];
        let mut adj = vec![Vec::new(); n];
        for (i, &(a, b)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                deg[a] += 1;
                deg[b] += 1;
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut ends: Vec<Vec<String>> = vec![Vec::new(); n];
        for (k, d) in bg.dangling.iter().enumerate() {
            if mask >> (m + k) & 1 == 1 {
                deg[d.vertex] += 1;
                ends[d.vertex].push(d.id.clone());
            }
        }
        if deg.iter().any(|&d| d != 2) {
            continue;
        }
        let used_half = (0..h).any(|k| mask >> (m + k) & 1 == 1);
        // walk components
        let mut seen = vec![false; n];
        let mut pairs = Vec::new();
        let mut cycles = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                comp.push(x);
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            let mut hs: Vec<String> = comp.iter().flat_map(|&x| ends[x].clone()).collect();
            if hs.is_empty() {
                cycles += 1;
            } else {
                hs.sort();
                pairs.push((hs[0].clone(), hs[1].clone()));
            }
        }
        let pairing = if cycles == 0 {
            pairs.sort();
            Pairing::Open(pairs)
        } else if cycles == 1 && !used_half && n > 0 && seen.iter().all(|&s| s) && pairs.is_empty()
        {
            Pairing::Closed
        } else {
            continue;
        };
        let used: BTreeSet<EdgeKey> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| key(e))
            .collect();
        let entry = found.entry(pairing).or_insert_with(|| PatternUsage {
            always: all_keys.clone(),
            ever: BTreeSet::new(),
        });
        entry.always = entry.always.intersection(&used).cloned().collect();
        entry.ever.extend(used);
    }
    found
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn patterns_match_subset_enumeration(seed in any::<u64>(), n in 1usize..8) {
        let bg = random_boundary(n, seed, "v", 100);
        prop_assume!(bg.graph.m() + bg.dangling.len() <= 18);
        let s = linkage_analysis(&bg).unwrap();
        prop_assert_eq!(s.patterns, brute_force_patterns(&bg));
    }

}

proptest! {
    // most random pairs glue to graphs with no path system at all, so run
    // many cases to get about a hundred that have one
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn composing_summaries_equals_gluing_graphs(seed in any::<u64>(), n1 in 1usize..7, n2 in 1usize..7) {
        let a = random_boundary(n1, seed, "a", 4);
        let b = random_boundary(n2, seed.wrapping_add(7), "b", 4);
        let sa = linkage_analysis(&a).unwrap();
        let sb = linkage_analysis(&b).unwrap();
        let binding = sa.natural_binding(&sb);
        let composed = compose_linkage(&sa, &sb, &binding).unwrap();
        let glued = linkage_analysis(&a.glue(&b, &binding).unwrap()).unwrap();
        prop_assert_eq!(&composed.patterns, &glued.patterns);
        prop_assert_eq!(&composed.edge_status, &glued.edge_status);
        prop_assert_eq!(&composed.twinned_pairs, &glued.twinned_pairs);
    }
}
