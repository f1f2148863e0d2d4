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

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tts_core::design::{Block, Kind, TripleSystem};
use tts_core::graph::{build_big, components, is_3_connected, is_bipartite, Graph};
use tts_core::hamilton::{find_hamilton_cycle, is_hamilton_cycle, HamiltonOutcome};

use common::*;

fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Hamilton cycle through vertex 0 by trying every ordering.
fn brute_force_hamiltonian(g: &Graph) -> bool {
    let n = g.n();
    if n < 3 {
        return false;
    }
    fn go(g: &Graph, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = g.n();
        let last = *path.last().unwrap();
        if path.len() == n {
            return g.has_edge(last, path[0]);
        }
        for &next in g.neighbors(last) {
            if !used[next] {
                used[next] = true;
                path.push(next);
                if go(g, path, used) {
                    return true;
                }
                path.pop();
                used[next] = false;
            }
        }
        false
    }
    let mut used = vec![false; n];
    used[0] = true;
    go(g, &mut vec![0], &mut used)
}

fn connected_without(g: &Graph, keep: &[usize]) -> bool {
    let sub = g.induced(keep);
    components(&sub).len() <= 1
}

/// Each component has at least four vertices and stays connected after
/// removing any one or two of its vertices.
fn brute_force_3_connected(g: &Graph) -> bool {
    components(g).iter().all(|comp| {
        if comp.len() < 4 {
            return false;
        }
        for (i, &x) in comp.iter().enumerate() {
            for &y in &comp[i..] {
                let keep: Vec<usize> = comp.iter().copied().filter(|&z| z != x && z != y).collect();
                if !connected_without(g, &keep) {
                    return false;
                }
            }
        }
        true
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hamilton_solver_agrees_with_brute_force(seed in any::<u64>(), n in 3usize..10, p in 0.2f64..0.8) {
        let g = random_graph(n, p, seed);
        match find_hamilton_cycle(&g, &[], &[], 1_000_000) {
            HamiltonOutcome::Cycle(c) => {
                prop_assert!(is_hamilton_cycle(&g, &c));
                prop_assert!(brute_force_hamiltonian(&g));
            }
            HamiltonOutcome::None => prop_assert!(!brute_force_hamiltonian(&g)),
            HamiltonOutcome::BudgetExhausted { .. } => prop_assert!(false, "budget ran out"),
        }
    }

    #[test]
    fn three_connectivity_agrees_with_brute_force(seed in any::<u64>(), n in 1usize..10, p in 0.2f64..0.9) {
        let g = random_graph(n, p, seed);
        let r = is_3_connected(&g, 16, seed);
        prop_assert_eq!(r.three_connected, brute_force_3_connected(&g));
    }

    #[test]
    fn two_big_matches_pairwise_comparison(seed in any::<u64>(), v in 4u32..10, count in 1usize..25) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut blocks = Vec::new();
        for _ in 0..count {
            let a = rng.gen_range(1..=v);
            let b = rng.gen_range(1..=v);
            let c = rng.gen_range(1..=v);
            if a != b && b != c && a != c {
                blocks.push(Block::ints(a, b, c));
            }
        }
        prop_assume!(!blocks.is_empty());
        let ts = TripleSystem::new(blocks, 2, Kind::Partial);
        let big = build_big(&ts, 2);
        let adj = big2_adjacency(ts.blocks());
        for (i, nb) in adj.iter().enumerate() {
            let mut mine = nb.clone();
            mine.sort_unstable();
            prop_assert_eq!(big.graph.neighbors(i).to_vec(), mine);
        }
        prop_assert_eq!(is_bipartite(&big.graph), two_colorable(&adj));
        // 1-BIG and 0-BIG by counting shared points
        let bl = ts.blocks();
        for (k, want) in [(1usize, 1usize), (0, 0)] {
            let g = build_big(&ts, k).graph;
            for i in 0..bl.len() {
                for j in i + 1..bl.len() {
                    let shared = bl[i].intersection_size(&bl[j]);
                    prop_assert_eq!(g.has_edge(i, j), shared == want, "i={} j={} k={}", i, j, k);
                }
            }
        }
    }
}

#[test]
fn petersen_family() {
    let p = Graph::petersen();
    assert!(!brute_force_hamiltonian(&p));
    assert_eq!(
        find_hamilton_cycle(&p, &[], &[], 1_000_000),
        HamiltonOutcome::None
    );
    assert!(is_3_connected(&p, 0, 0).three_connected);
}
