use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::hypergraph::{expand_to_kgraph, CliqueSystem, KGraph, Provenance};
use crate::process::binomial;
use crate::rng::{stream_rng, Stream};

/// Vertex coloring with dense color ids `0..num_colors`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub assignment: Vec<u32>,
    pub num_colors: usize,
    pub method: String,
    pub seed: Option<u64>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl Coloring {
    /// Renumbers colors by first appearance in vertex order.
    pub fn from_raw(raw: &[u32], method: &str, seed: Option<u64>) -> Self {
        let mut map = std::collections::HashMap::new();
        let assignment: Vec<u32> = raw
            .iter()
            .map(|c| {
                let next = map.len() as u32;
                *map.entry(*c).or_insert(next)
            })
            .collect();
        Coloring { assignment, num_colors: map.len(), method: method.into(), seed, provenance: Provenance::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringCheck {
    pub proper: bool,
    /// Lexicographically least monochromatic edge.
    pub violation: Option<Vec<u32>>,
}

pub fn verify_coloring(graph: &KGraph, coloring: &Coloring) -> Result<ColoringCheck> {
    if coloring.assignment.len() < graph.n {
        return Err(Error::UncoloredVertex(coloring.assignment.len()));
    }
    let a = &coloring.assignment;
    let violation = graph
        .edges
        .iter()
        .find(|e| e.iter().all(|&v| a[v as usize] == a[e[0] as usize]))
        .cloned();
    Ok(ColoringCheck { proper: violation.is_none(), violation })
}

/// Smallest `r` with `r^k >= m`.
pub fn ceil_kth_root(m: u64, k: u32) -> u64 {
    if m <= 1 || k <= 1 {
        return m.max(1);
    }
    let mut r = (m as f64).powf(1.0 / k as f64).round() as u64;
    let pow = |r: u64| (r as u128).checked_pow(k).unwrap_or(u128::MAX);
    while r > 1 && pow(r - 1) >= m as u128 {
        r -= 1;
    }
    while pow(r) < m as u128 {
        r += 1;
    }
    r
}

/// Random palette of `⌈m^{1/k}⌉` colors, then every edge still
/// monochromatic (scanned in lexicographic order) gets its least vertex
/// recolored with a fresh color.
pub fn greedy_coloring(graph: &KGraph, seed: u64) -> Coloring {
    let m = graph.num_edges() as u64;
    let palette = if m == 0 { 1 } else { ceil_kth_root(m, graph.k as u32) };
    let mut rng = stream_rng(seed, Stream::GreedyColoring);
    let mut raw: Vec<u32> = (0..graph.n).map(|_| rng.random_range(0..palette as u32)).collect();
    let is_mono = |raw: &[u32], e: &[u32]| e.iter().all(|&v| raw[v as usize] == raw[e[0] as usize]);
    let phase1_monochromatic = graph.edges.iter().filter(|e| is_mono(&raw, e)).count();
    let mut fresh = palette as u32;
    let mut repairs = 0usize;
    for e in &graph.edges {
        if is_mono(&raw, e) {
            raw[e[0] as usize] = fresh;
            fresh += 1;
            repairs += 1;
        }
    }
    let mut coloring = Coloring::from_raw(&raw, "greedy", Some(seed));
    coloring.provenance.insert("palette".into(), json!(palette));
    coloring.provenance.insert("phase1_monochromatic".into(), json!(phase1_monochromatic));
    coloring.provenance.insert("repairs".into(), json!(repairs));
    coloring
}

/// Result of the low/high degree split coloring, with the counting
/// inequalities it relies on evaluated on this instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitColoring {
    pub coloring: Coloring,
    /// `⌈e^{1/2} q^{k-1}⌉`.
    pub threshold: u64,
    pub low_size: usize,
    pub high_size: usize,
    pub low_colors: usize,
    pub high_colors: usize,
    /// `k · e · C(q,k)`, the total vertex-edge incidence count.
    pub incidences: u64,
    /// Sum of degrees over the high-degree part.
    pub high_degree_sum: u64,
    pub high_induced_max_degree: usize,
    /// `high_degree_sum >= high_size * threshold` and
    /// `incidences >= high_degree_sum`.
    pub high_size_bound_holds: bool,
    /// `Δ(H[B]) (q-1) <= (|B|-1) C(q-1,k-1)`.
    pub high_degree_bound_holds: bool,
}

fn isqrt_ceil(x: u128) -> u128 {
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while r * r < x {
        r += 1;
    }
    r
}

fn color_part(graph: &KGraph, part: &[u32], seed: u64, offset: u32, out: &mut [u32]) -> usize {
    if part.is_empty() {
        return 0;
    }
    let sub = graph.induced(part);
    let c = greedy_coloring(&sub, seed);
    for (i, &v) in part.iter().enumerate() {
        out[v as usize] = offset + c.assignment[i];
    }
    c.num_colors
}

/// Colors the vertices of degree `<= ⌈e^{1/2} q^{k-1}⌉` and the remaining
/// vertices separately with disjoint palettes, each part by
/// [`greedy_coloring`] on its internal edges.
pub fn split_coloring(system: &CliqueSystem, k: usize, seed: u64) -> Result<SplitColoring> {
    if system.ell != 1 {
        return Err(Error::NotOneSystem(system.ell));
    }
    let graph = expand_to_kgraph(system, k)?;
    let (e, q) = (system.num_cliques() as u128, system.q as u128);
    let threshold = isqrt_ceil(e * q.pow(2 * (k as u32 - 1))) as u64;
    let degrees = graph.degrees();
    let (low, high): (Vec<u32>, Vec<u32>) = (0..graph.n as u32).partition(|&v| degrees[v as usize] as u64 <= threshold);

    let mut raw = vec![0u32; graph.n];
    let low_colors = color_part(&graph, &low, seed, 0, &mut raw);
    let high_colors = color_part(&graph, &high, seed.wrapping_add(1), low_colors as u32, &mut raw);
    let mut coloring = Coloring::from_raw(&raw, "split", Some(seed));
    coloring.provenance.insert("threshold".into(), json!(threshold));
    coloring.provenance.insert("low_colors".into(), json!(low_colors));
    coloring.provenance.insert("high_colors".into(), json!(high_colors));

    let incidences = k as u64 * system.num_cliques() as u64 * binomial(system.q as u64, k as u64);
    let high_degree_sum: u64 = high.iter().map(|&v| degrees[v as usize] as u64).sum();
    let high_size_bound_holds =
        high_degree_sum >= high.len() as u64 * threshold && incidences >= high_degree_sum;
    let high_induced_max_degree = graph.induced(&high).degrees().into_iter().max().unwrap_or(0);
    let high_degree_bound_holds = high.is_empty()
        || (high_induced_max_degree as u128) * (q - 1)
            <= (high.len() as u128 - 1) * binomial(system.q as u64 - 1, k as u64 - 1) as u128;
    Ok(SplitColoring {
        coloring,
        threshold,
        low_size: low.len(),
        high_size: high.len(),
        low_colors,
        high_colors,
        incidences,
        high_degree_sum,
        high_induced_max_degree,
        high_size_bound_holds,
        high_degree_bound_holds,
    })
}
