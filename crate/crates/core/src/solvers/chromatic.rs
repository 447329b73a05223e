use super::{greedy_coloring, Certificate, Coloring, SolveResult};
use crate::hypergraph::KGraph;

struct Backtrack<'a> {
    graph: &'a KGraph,
    /// Edges grouped by their largest vertex.
    closing: Vec<Vec<usize>>,
    colors: Vec<u32>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Backtrack<'_> {
    fn fits(&self, v: usize, c: u32) -> bool {
        self.closing[v].iter().all(|&e| {
            let edge = &self.graph.edges[e];
            edge[..edge.len() - 1].iter().any(|&u| self.colors[u as usize] != c)
        })
    }

    /// Colors vertices `v..n` with at most `limit` colors, opening a new
    /// color only as `max_used + 1`.
    fn extend(&mut self, v: usize, max_used: u32, limit: u32) -> bool {
        if v == self.graph.n {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return false;
        }
        let top = (max_used + 1).min(limit - 1);
        for c in 0..=top {
            if self.fits(v, c) {
                self.colors[v] = c;
                if self.extend(v + 1, max_used.max(c), limit) {
                    return true;
                }
                if self.aborted {
                    return false;
                }
            }
        }
        false
    }
}

/// Least number of colors with no monochromatic edge, by iterative
/// deepening on the color count. Vertex 0 always takes color 0 and new
/// colors are introduced in increasing order.
pub fn exact_chromatic_number(graph: &KGraph, budget: u64) -> SolveResult {
    let n = graph.n;
    let mut closing = vec![Vec::new(); n];
    for (i, e) in graph.edges.iter().enumerate() {
        if let Some(&last) = e.last() {
            closing[last as usize].push(i);
        }
    }
    let mut bt = Backtrack { graph, closing, colors: vec![0; n], nodes: 0, budget, aborted: false };
    let uncolorable = graph.k < 2 && !graph.edges.is_empty();
    if n == 0 || uncolorable {
        return SolveResult {
            value: 0,
            exact: !uncolorable,
            lower_bound: 0,
            nodes_explored: 0,
            budget,
            certificate: Certificate::Coloring(Coloring::from_raw(&[], "exact", None)),
        };
    }
    for limit in 1..=n as u32 {
        // vertex 0 is fixed to color 0 by the max_used + 1 rule
        let found = bt.fits(0, 0) && {
            bt.colors[0] = 0;
            bt.extend(1, 0, limit)
        };
        if found {
            let coloring = Coloring::from_raw(&bt.colors, "exact", None);
            return SolveResult {
                value: coloring.num_colors,
                exact: true,
                lower_bound: coloring.num_colors,
                nodes_explored: bt.nodes,
                budget,
                certificate: Certificate::Coloring(coloring),
            };
        }
        if bt.aborted {
            let fallback = greedy_coloring(graph, 0);
            return SolveResult {
                value: fallback.num_colors,
                exact: false,
                lower_bound: limit as usize,
                nodes_explored: budget,
                budget,
                certificate: Certificate::Coloring(fallback),
            };
        }
    }
    unreachable!("n distinct colors always work for k >= 2")
}
