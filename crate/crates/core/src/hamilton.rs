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

//! Exact Hamilton cycle search with edge-state propagation.
//!
//! Every edge is free, chosen or excluded. A vertex with two chosen edges
//! excludes the rest; a vertex with exactly two non-excluded edges chooses
//! them. Chosen edges form vertex-disjoint paths whose endpoints are
//! tracked, and an edge that would close a path early is excluded. All
//! changes go on a trail so backtracking is an undo.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum HamiltonOutcome {
    Cycle(Vec<usize>),
    /// The search space was exhausted: no cycle satisfies the constraints.
    None,
    /// Inconclusive; the node-expansion budget ran out.
    BudgetExhausted {
        expanded: u64,
    },
}

impl HamiltonOutcome {
    pub fn is_cycle(&self) -> bool {
        matches!(self, HamiltonOutcome::Cycle(_))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EdgeState {
    Free,
    In,
    Out,
}

enum Undo {
    Edge(usize),
    End(usize, usize),
}

struct Solver<'g> {
    g: &'g Graph,
    ends: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    state: Vec<EdgeState>,
    chosen: Vec<u8>,
    free: Vec<u8>,
    /// other endpoint of the chosen path through an endpoint vertex
    end: Vec<usize>,
    chosen_total: usize,
    trail: Vec<Undo>,
    queue: Vec<usize>,
    expanded: u64,
    budget: u64,
}

impl<'g> Solver<'g> {
    fn new(g: &'g Graph, budget: u64) -> Self {
        let ends = g.edges();
        let mut incident = vec![Vec::new(); g.n()];
        for (e, &(u, v)) in ends.iter().enumerate() {
            incident[u].push(e);
            incident[v].push(e);
        }
        let free = incident.iter().map(|l| l.len().min(255) as u8).collect();
        Solver {
            g,
            state: vec![EdgeState::Free; ends.len()],
            ends,
            incident,
            chosen: vec![0; g.n()],
            free,
            end: (0..g.n()).collect(),
            chosen_total: 0,
            trail: Vec::new(),
            queue: Vec::new(),
            expanded: 0,
            budget,
        }
    }

    fn set_end(&mut self, v: usize, to: usize) {
        self.trail.push(Undo::End(v, self.end[v]));
        self.end[v] = to;
    }

    fn exclude(&mut self, e: usize) -> bool {
        match self.state[e] {
            EdgeState::Out => true,
            EdgeState::In => false,
            EdgeState::Free => {
                self.state[e] = EdgeState::Out;
                self.trail.push(Undo::Edge(e));
                let (u, v) = self.ends[e];
                self.free[u] -= 1;
                self.free[v] -= 1;
                self.queue.push(u);
                self.queue.push(v);
                true
            }
        }
    }

    fn choose(&mut self, e: usize) -> bool {
        match self.state[e] {
            EdgeState::In => return true,
            EdgeState::Out => return false,
            EdgeState::Free => {}
        }
        let (u, v) = self.ends[e];
        if self.chosen[u] >= 2 || self.chosen[v] >= 2 {
            return false;
        }
        let n = self.g.n();
        let (a, b) = (self.end[u], self.end[v]);
        if a == v {
            // closes a path; only the final edge may do that
            if self.chosen_total + 1 != n {
                return false;
            }
        }
        self.state[e] = EdgeState::In;
        self.trail.push(Undo::Edge(e));
        self.free[u] -= 1;
        self.free[v] -= 1;
        self.chosen[u] += 1;
        self.chosen[v] += 1;
        self.chosen_total += 1;
        if a != v {
            self.set_end(a, b);
            self.set_end(b, a);
            // the edge joining the new endpoints would close the path early
            if self.chosen_total + 1 < n {
                if let Some(f) = self.edge_between(a, b).filter(|&f| f != e) {
                    if !self.exclude(f) {
                        return false;
                    }
                }
            }
        }
        self.queue.push(u);
        self.queue.push(v);
        true
    }

    fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        if a == b || !self.g.has_edge(a, b) {
            return None;
        }
        self.incident[a].iter().copied().find(|&e| {
            let (x, y) = self.ends[e];
            (x == a && y == b) || (x == b && y == a)
        })
    }

    fn propagate(&mut self) -> bool {
        while let Some(v) = self.queue.pop() {
            let chosen = self.chosen[v] as usize;
            let free = self.free[v] as usize;
            if chosen + free < 2 {
                return false;
            }
            if chosen == 2 && free > 0 {
                for i in 0..self.incident[v].len() {
                    let e = self.incident[v][i];
                    if self.state[e] == EdgeState::Free && !self.exclude(e) {
                        return false;
                    }
                }
            } else if chosen < 2 && chosen + free == 2 {
                for i in 0..self.incident[v].len() {
                    let e = self.incident[v][i];
                    if self.state[e] == EdgeState::Free && !self.choose(e) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail entry") {
                Undo::Edge(e) => {
                    let (u, v) = self.ends[e];
                    if self.state[e] == EdgeState::In {
                        self.chosen[u] -= 1;
                        self.chosen[v] -= 1;
                        self.chosen_total -= 1;
                    }
                    self.free[u] += 1;
                    self.free[v] += 1;
                    self.state[e] = EdgeState::Free;
                }
                Undo::End(v, old) => self.end[v] = old,
            }
        }
        self.queue.clear();
    }

    /// Graph of non-excluded edges must stay connected.
    fn connected(&self) -> bool {
        let n = self.g.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &e in &self.incident[u] {
                if self.state[e] == EdgeState::Out {
                    continue;
                }
                let (a, b) = self.ends[e];
                let w = if a == u { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    fn pick_branch_edge(&self) -> Option<usize> {
        // extend a path end with the fewest options; otherwise start anywhere
        let mut best: Option<(u8, u8, usize)> = None;
        for v in 0..self.g.n() {
            let c = self.chosen[v];
            if c >= 2 || self.free[v] == 0 {
                continue;
            }
            let key = (if c == 1 { 0 } else { 1 }, self.free[v], v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, v) = best?;
        self.incident[v]
            .iter()
            .copied()
            .find(|&e| self.state[e] == EdgeState::Free)
    }

    fn search(&mut self) -> Result<bool, ()> {
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(());
        }
        if self.chosen_total == self.g.n() {
            return Ok(true);
        }
        if !self.connected() {
            return Ok(false);
        }
        let Some(e) = self.pick_branch_edge() else {
            return Ok(false);
        };
        for take in [true, false] {
            let mark = self.trail.len();
            let ok = if take {
                self.choose(e)
            } else {
                self.exclude(e)
            };
            if ok && self.propagate() && self.search()? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }

    fn cycle(&self) -> Vec<usize> {
        let n = self.g.n();
        let mut next: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (e, &(u, v)) in self.ends.iter().enumerate() {
            if self.state[e] == EdgeState::In {
                next[u].push(v);
                next[v].push(u);
            }
        }
        let mut cyc = vec![0];
        let mut prev = usize::MAX;
        let mut cur = 0;
        loop {
            let nxt = if next[cur][0] != prev {
                next[cur][0]
            } else {
                next[cur][1]
            };
            if nxt == 0 {
                break;
            }
            cyc.push(nxt);
            prev = cur;
            cur = nxt;
        }
        cyc
    }
}

/// Searches for a Hamilton cycle using every edge of `forced` and none of
/// `excluded`. Edges are given as vertex pairs in either orientation.
pub fn find_hamilton_cycle(
    g: &Graph,
    forced: &[(usize, usize)],
    excluded: &[(usize, usize)],
    budget: u64,
) -> HamiltonOutcome {
    let n = g.n();
    if n < 3 {
        return HamiltonOutcome::None;
    }
    let mut solver = Solver::new(g, budget);
    let index: HashMap<(usize, usize), usize> = solver
        .ends
        .iter()
        .enumerate()
        .map(|(e, &uv)| (uv, e))
        .collect();
    let lookup = |&(u, v): &(usize, usize)| index.get(&(u.min(v), u.max(v))).copied();
    for uv in excluded {
        if let Some(e) = lookup(uv) {
            if !solver.exclude(e) {
                return HamiltonOutcome::None;
            }
        }
    }
    for uv in forced {
        match lookup(uv) {
            Some(e) if solver.choose(e) => {}
            _ => return HamiltonOutcome::None,
        }
    }
    for v in 0..n {
        solver.queue.push(v);
    }
    if !solver.propagate() {
        return HamiltonOutcome::None;
    }
    match solver.search() {
        Ok(true) => HamiltonOutcome::Cycle(solver.cycle()),
        Ok(false) => HamiltonOutcome::None,
        Err(()) => HamiltonOutcome::BudgetExhausted {
            expanded: solver.expanded,
        },
    }
}

/// Checks that `cycle` is a Hamilton cycle of `g`.
pub fn is_hamilton_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let n = g.n();
    if cycle.len() != n || n < 3 {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..n).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % n]))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 1_000_000;

    #[test]
    fn cycle_graph_is_its_own_cycle() {
        for n in 3..12 {
            let g = Graph::cycle(n);
            match find_hamilton_cycle(&g, &[], &[], BUDGET) {
                HamiltonOutcome::Cycle(c) => assert!(is_hamilton_cycle(&g, &c)),
                other => panic!("C_{n}: {other:?}"),
            }
        }
    }

    #[test]
    fn petersen_is_not_hamiltonian() {
        assert_eq!(
            find_hamilton_cycle(&Graph::petersen(), &[], &[], BUDGET),
            HamiltonOutcome::None
        );
    }

    #[test]
    fn constraints_are_honoured() {
        let g = Graph::complete(5);
        let forced = [(0, 2), (1, 3)];
        let excluded = [(0, 1)];
        let HamiltonOutcome::Cycle(c) = find_hamilton_cycle(&g, &forced, &excluded, BUDGET) else {
            panic!("K5 with mild constraints is Hamiltonian");
        };
        assert!(is_hamilton_cycle(&g, &c));
        let uses = |a: usize, b: usize| {
            (0..5).any(|i| {
                let (x, y) = (c[i], c[(i + 1) % 5]);
                (x == a && y == b) || (x == b && y == a)
            })
        };
        assert!(uses(0, 2) && uses(1, 3) && !uses(0, 1));
        // excluding every edge at vertex 0 but one leaves no cycle
        let ex = [(0, 1), (0, 2), (0, 3)];
        assert_eq!(
            find_hamilton_cycle(&g, &[], &ex, BUDGET),
            HamiltonOutcome::None
        );
    }

    #[test]
    fn budget_is_distinct_from_none() {
        let out = find_hamilton_cycle(&Graph::petersen(), &[], &[], 1);
        assert!(matches!(out, HamiltonOutcome::BudgetExhausted { .. }));
    }

    #[test]
    fn small_graphs_have_no_cycle() {
        assert_eq!(
            find_hamilton_cycle(&Graph::complete(2), &[], &[], BUDGET),
            HamiltonOutcome::None
        );
        assert_eq!(
            find_hamilton_cycle(&Graph::new(0), &[], &[], BUDGET),
            HamiltonOutcome::None
        );
    }
}
