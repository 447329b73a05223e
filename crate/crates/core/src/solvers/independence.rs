use rand::Rng;

use super::{Certificate, SolveResult};
use crate::bitset::Bitset;
use crate::hypergraph::KGraph;
use crate::rng::{stream_rng, Stream};

struct Search<'a> {
    graph: &'a KGraph,
    incidence: Vec<Vec<usize>>,
    chosen_in_edge: Vec<usize>,
    chosen: Vec<u32>,
    is_chosen: Vec<bool>,
    best: Vec<u32>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Search<'_> {
    /// Candidates after `v` that stay addable once `v` joins the set.
    fn push(&mut self, v: usize, cands: &Bitset) -> Bitset {
        let mut next = cands.clone();
        next.clear_through(v);
        self.chosen.push(v as u32);
        self.is_chosen[v] = true;
        let k = self.graph.k;
        for &e in &self.incidence[v] {
            self.chosen_in_edge[e] += 1;
            if self.chosen_in_edge[e] == k - 1 {
                if let Some(&w) = self.graph.edges[e].iter().find(|&&w| !self.is_chosen[w as usize]) {
                    next.remove(w as usize);
                }
            }
        }
        next
    }

    fn pop(&mut self) {
        let v = self.chosen.pop().unwrap() as usize;
        self.is_chosen[v] = false;
        for &e in &self.incidence[v] {
            self.chosen_in_edge[e] -= 1;
        }
    }

    fn run(&mut self, cands: Bitset) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let mut remaining = cands.count();
        if self.chosen.len() + remaining <= self.best.len() {
            return;
        }
        for v in cands.iter() {
            if self.chosen.len() + remaining <= self.best.len() || self.aborted {
                break;
            }
            let next = self.push(v, &cands);
            self.run(next);
            self.pop();
            remaining -= 1;
        }
    }
}

/// Maximum independent set by branch and bound in ascending vertex order.
/// The bound is `|chosen| + |addable candidates|`; the first maximum set
/// found in that order is returned as the witness.
pub fn exact_independence_number(graph: &KGraph, budget: u64) -> SolveResult {
    let mut cands = Bitset::full(graph.n);
    if graph.k == 1 {
        for e in &graph.edges {
            cands.remove(e[0] as usize);
        }
    }
    let mut search = Search {
        graph,
        incidence: graph.incidence(),
        chosen_in_edge: vec![0; graph.edges.len()],
        chosen: Vec::new(),
        is_chosen: vec![false; graph.n],
        best: Vec::new(),
        nodes: 0,
        budget,
        aborted: false,
    };
    if graph.k == 0 {
        // the empty edge lies inside every set
        if graph.edges.is_empty() {
            search.best = (0..graph.n as u32).collect();
        }
    } else {
        search.run(cands);
    }
    let best = search.best;
    SolveResult {
        value: best.len(),
        exact: !search.aborted,
        lower_bound: best.len(),
        nodes_explored: search.nodes.min(budget),
        budget,
        certificate: Certificate::IndependentSet { vertices: best },
    }
}

/// Randomized min-degree greedy: repeatedly add the candidate lying in the
/// fewest live edges (random tie-break), discarding vertices that would
/// complete an edge. The result is always independent.
pub fn greedy_independent_set(graph: &KGraph, seed: u64) -> Vec<u32> {
    let n = graph.n;
    let k = graph.k;
    if k == 0 {
        return if graph.edges.is_empty() { (0..n as u32).collect() } else { Vec::new() };
    }
    let mut rng = stream_rng(seed, Stream::GreedyIndependent);
    let tiebreak: Vec<u64> = (0..n).map(|_| rng.random()).collect();
    let incidence = graph.incidence();
    let mut live_degree: Vec<usize> = incidence.iter().map(Vec::len).collect();
    let mut edge_alive = vec![true; graph.edges.len()];
    let mut chosen_in_edge = vec![0usize; graph.edges.len()];
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Free,
        Chosen,
        Removed,
    }
    let mut state = vec![State::Free; n];
    let kill = |w: usize, state: &mut Vec<State>, live_degree: &mut Vec<usize>, edge_alive: &mut Vec<bool>| {
        state[w] = State::Removed;
        for &e in &incidence[w] {
            if edge_alive[e] {
                edge_alive[e] = false;
                for &u in &graph.edges[e] {
                    live_degree[u as usize] -= 1;
                }
            }
        }
    };
    if k == 1 {
        for e in &graph.edges {
            if state[e[0] as usize] == State::Free {
                kill(e[0] as usize, &mut state, &mut live_degree, &mut edge_alive);
            }
        }
    }
    loop {
        let pick = (0..n)
            .filter(|&v| state[v] == State::Free)
            .min_by_key(|&v| (live_degree[v], tiebreak[v], v));
        let Some(v) = pick else { break };
        state[v] = State::Chosen;
        for &e in &incidence[v] {
            chosen_in_edge[e] += 1;
            if edge_alive[e] && chosen_in_edge[e] == k - 1 {
                if let Some(&w) = graph.edges[e].iter().find(|&&w| state[w as usize] == State::Free) {
                    kill(w as usize, &mut state, &mut live_degree, &mut edge_alive);
                }
            }
        }
    }
    let set: Vec<u32> = (0..n as u32).filter(|&v| state[v as usize] == State::Chosen).collect();
    debug_assert!(graph.is_independent(&set));
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn complete(n: u32, k: usize) -> KGraph {
        KGraph::new(n as usize, k, (0..n).combinations(k).collect()).unwrap()
    }

    #[test]
    fn exact_examples() {
        let r = exact_independence_number(&KGraph::empty(7, 3), 1000);
        assert_eq!((r.value, r.exact), (7, true));
        let r = exact_independence_number(&complete(5, 3), 1000);
        assert_eq!(r.value, 2);
        assert!(complete(5, 3).is_independent(r.independent_set().unwrap()));
        let r = exact_independence_number(&complete(6, 2), 1000);
        assert_eq!(r.value, 1);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let g = KGraph::empty(30, 3);
        let r = exact_independence_number(&g, 5);
        assert!(!r.exact);
        assert!(r.value <= 30);
        assert_eq!(r.nodes_explored, 5);
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_independent_set(&KGraph::empty(4, 3), 0), vec![0, 1, 2, 3]);
        let s = greedy_independent_set(&complete(5, 3), 9);
        assert_eq!(s.len(), 2);
        let g = KGraph::new(3, 1, vec![vec![1]]).unwrap();
        assert_eq!(greedy_independent_set(&g, 0), vec![0, 2]);
        assert_eq!(exact_independence_number(&g, 100).value, 2);
    }
}
