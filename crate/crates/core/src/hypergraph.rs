//! Clique systems, their k-uniform expansions, and degree statistics.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

/// Free-form construction metadata carried along with a document.
pub type Provenance = serde_json::Map<String, Value>;

/// Above this vertex count, pairwise clique intersections use sorted merges
/// instead of bitsets.
pub const BITSET_VERTEX_LIMIT: usize = 4096;

/// A family of `q`-cliques on `n` vertices pairwise sharing at most `ell`
/// vertices (when valid; see [`CliqueSystem::validate_ell`]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueSystem {
    pub n: usize,
    pub q: usize,
    pub ell: usize,
    pub cliques: Vec<Vec<u32>>,
    #[serde(default)]
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllValidation {
    pub max_pairwise_intersection: usize,
    pub ok: bool,
}

fn check_sorted_set(list: &[u32], n: usize) -> std::result::Result<(), String> {
    if let Some(&v) = list.iter().find(|&&v| v as usize >= n) {
        return Err(format!("vertex {v} out of range 0..{n}"));
    }
    if list.windows(2).any(|w| w[0] >= w[1]) {
        return Err("vertices not strictly increasing".into());
    }
    Ok(())
}

impl CliqueSystem {
    /// Builds a system, sorting each clique. Fails on malformed cliques or
    /// duplicate cliques; the `ell` bound itself is not enforced here.
    pub fn new(n: usize, q: usize, ell: usize, mut cliques: Vec<Vec<u32>>) -> Result<Self> {
        for c in &mut cliques {
            c.sort_unstable();
        }
        let system = CliqueSystem { n, q, ell, cliques, provenance: Provenance::new() };
        system.check_structure()?;
        Ok(system)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn num_cliques(&self) -> usize {
        self.cliques.len()
    }

    pub fn check_structure(&self) -> Result<()> {
        for (index, c) in self.cliques.iter().enumerate() {
            if c.len() != self.q {
                return Err(Error::MalformedClique {
                    index,
                    reason: format!("size {} instead of {}", c.len(), self.q),
                });
            }
            check_sorted_set(c, self.n).map_err(|reason| Error::MalformedClique { index, reason })?;
        }
        let mut sorted: Vec<&Vec<u32>> = self.cliques.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            let index = self.cliques.iter().rposition(|c| c == w[0]).unwrap();
            return Err(Error::MalformedClique { index, reason: "duplicate clique".into() });
        }
        Ok(())
    }

    /// Largest intersection over all pairs of distinct cliques, compared
    /// against `ell`.
    pub fn validate_ell(&self) -> Result<EllValidation> {
        self.check_structure()?;
        let e = self.cliques.len();
        let mut max = 0;
        if self.n <= BITSET_VERTEX_LIMIT {
            let sets: Vec<Bitset> = self
                .cliques
                .iter()
                .map(|c| Bitset::from_items(self.n, c.iter().map(|&v| v as usize)))
                .collect();
            for i in 0..e {
                for j in i + 1..e {
                    max = max.max(sets[i].intersection_count(&sets[j]));
                }
            }
        } else {
            for i in 0..e {
                for j in i + 1..e {
                    max = max.max(sorted_intersection(&self.cliques[i], &self.cliques[j]));
                }
            }
        }
        Ok(EllValidation { max_pairwise_intersection: max, ok: max <= self.ell })
    }

    /// Number of cliques containing each vertex.
    pub fn replication(&self) -> Vec<usize> {
        let mut r = vec![0; self.n];
        for c in &self.cliques {
            for &v in c {
                r[v as usize] += 1;
            }
        }
        r
    }
}

pub fn sorted_intersection(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

pub fn validate_ell_system(system: &CliqueSystem) -> Result<EllValidation> {
    system.validate_ell()
}

/// A `k`-uniform hypergraph with a canonical (sorted, deduplicated) edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGraph {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<Vec<u32>>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl KGraph {
    /// Sorts each edge and the edge list, dropping duplicate edges.
    pub fn new(n: usize, k: usize, mut edges: Vec<Vec<u32>>) -> Result<Self> {
        for (index, e) in edges.iter_mut().enumerate() {
            e.sort_unstable();
            if e.len() != k {
                return Err(Error::MalformedEdge { index, reason: format!("size {} instead of {k}", e.len()) });
            }
            check_sorted_set(e, n).map_err(|reason| Error::MalformedEdge { index, reason })?;
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(KGraph { n, k, edges, provenance: Provenance::new() })
    }

    pub fn empty(n: usize, k: usize) -> Self {
        KGraph { n, k, edges: Vec::new(), provenance: Provenance::new() }
    }

    /// Re-checks the canonical-form invariants (used after deserialization).
    pub fn check_structure(&self) -> Result<()> {
        for (index, e) in self.edges.iter().enumerate() {
            if e.len() != self.k {
                return Err(Error::MalformedEdge { index, reason: format!("size {} instead of {}", e.len(), self.k) });
            }
            check_sorted_set(e, self.n).map_err(|reason| Error::MalformedEdge { index, reason })?;
        }
        if let Some(i) = self.edges.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::MalformedEdge { index: i + 1, reason: "edge list not sorted and duplicate-free".into() });
        }
        Ok(())
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edge indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v as usize].push(i);
            }
        }
        inc
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                d[v as usize] += 1;
            }
        }
        d
    }

    /// Sub-hypergraph on `vertices` (kept in the given order and renumbered
    /// `0..vertices.len()`), keeping only edges entirely inside it.
    pub fn induced(&self, vertices: &[u32]) -> KGraph {
        let mut map = vec![u32::MAX; self.n];
        for (new, &old) in vertices.iter().enumerate() {
            map[old as usize] = new as u32;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| map[v as usize] != u32::MAX))
            .map(|e| {
                let mut ne: Vec<u32> = e.iter().map(|&v| map[v as usize]).collect();
                ne.sort_unstable();
                ne
            })
            .collect();
        KGraph::new(vertices.len(), self.k, edges).expect("induced edges are well formed")
    }

    /// Whether no edge lies entirely inside `set`.
    pub fn is_independent(&self, set: &[u32]) -> bool {
        let mut member = vec![false; self.n];
        for &v in set {
            member[v as usize] = true;
        }
        !self.edges.iter().any(|e| e.iter().all(|&v| member[v as usize]))
    }
}

/// All `k`-subsets of every clique, deduplicated.
pub fn expand_to_kgraph(system: &CliqueSystem, k: usize) -> Result<KGraph> {
    if k == 0 || k > system.q {
        return Err(Error::BadUniformity(format!("k = {k} must lie in 1..={}", system.q)));
    }
    system.check_structure()?;
    let mut edges: Vec<Vec<u32>> = system
        .cliques
        .iter()
        .flat_map(|c| c.iter().copied().combinations(k))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let mut provenance = Provenance::new();
    provenance.insert("expanded_from_cliques".into(), json!(system.cliques.len()));
    provenance.insert("k".into(), json!(k));
    Ok(KGraph { n: system.n, k, edges, provenance })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    pub average_degree: f64,
    pub max_codegree: usize,
}

/// Number of edges containing each vertex pair that lies in some edge.
pub fn codegrees(graph: &KGraph) -> HashMap<(u32, u32), usize> {
    let mut co = HashMap::new();
    for e in &graph.edges {
        for (i, &a) in e.iter().enumerate() {
            for &b in &e[i + 1..] {
                *co.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    co
}

pub fn degree_report(graph: &KGraph) -> DegreeReport {
    let degrees = graph.degrees();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let average_degree = if graph.n == 0 {
        0.0
    } else {
        degrees.iter().sum::<usize>() as f64 / graph.n as f64
    };
    let max_codegree = codegrees(graph).values().copied().max().unwrap_or(0);
    DegreeReport { degrees, max_degree, average_degree, max_codegree }
}

/// Three edges `{a,b,x}`, `{a,b,y}`, `{a,b,z}` sharing the pair `{a,b}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cherry {
    pub pair: [u32; 2],
    pub thirds: [u32; 3],
}

impl Cherry {
    pub fn vertices(&self) -> [u32; 5] {
        let [a, b] = self.pair;
        let [x, y, z] = self.thirds;
        [a, b, x, y, z]
    }
}

fn pair_links(graph: &KGraph) -> BTreeMap<(u32, u32), Vec<u32>> {
    let mut links: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
    for e in &graph.edges {
        let [a, b, c] = [e[0], e[1], e[2]];
        links.entry((a, b)).or_default().push(c);
        links.entry((a, c)).or_default().push(b);
        links.entry((b, c)).or_default().push(a);
    }
    for v in links.values_mut() {
        v.sort_unstable();
    }
    links
}

/// Every cherry of a 3-graph, ordered by pair and then by third vertices.
pub fn find_cherries(graph: &KGraph) -> Result<Vec<Cherry>> {
    if graph.k != 3 {
        return Err(Error::BadUniformity(format!("cherries need k = 3, got {}", graph.k)));
    }
    let mut out = Vec::new();
    for ((a, b), thirds) in pair_links(graph) {
        for t in thirds.iter().copied().combinations(3) {
            out.push(Cherry { pair: [a, b], thirds: [t[0], t[1], t[2]] });
        }
    }
    Ok(out)
}

/// Keeps each vertex independently with probability `prob`; surviving
/// vertices are renumbered densely and the original ids are recorded in
/// `provenance["kept"]`.
pub fn random_induced(graph: &KGraph, prob: f64, seed: u64) -> Result<KGraph> {
    let kept = sample_vertices(graph.n, prob, seed, Stream::InducedSubgraph)?;
    let mut sub = graph.induced(&kept);
    sub.provenance.insert("seed".into(), json!(seed));
    sub.provenance.insert("prob".into(), json!(prob.to_string()));
    sub.provenance.insert("kept".into(), json!(kept));
    Ok(sub)
}

pub(crate) fn sample_vertices(n: usize, prob: f64, seed: u64, stream: Stream) -> Result<Vec<u32>> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::BadParams(format!("probability {prob} outside [0, 1]")));
    }
    let mut rng = stream_rng(seed, stream);
    Ok((0..n as u32).filter(|_| rng.random_bool(prob)).collect())
}

/// Outcome of restricting a 3-graph to a random vertex subset and clearing
/// its cherries with a small hitting set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CherryExperiment {
    pub prob: String,
    pub seed: u64,
    pub kept_vertices: usize,
    pub edges: usize,
    pub average_degree: f64,
    pub cherries: usize,
    /// Vertices (in the restricted numbering) touching every cherry.
    pub hitting_set: Vec<u32>,
    pub max_codegree_after_removal: usize,
}

pub fn cherry_restriction_experiment(graph: &KGraph, prob: f64, seed: u64) -> Result<CherryExperiment> {
    if graph.k != 3 {
        return Err(Error::BadUniformity(format!("cherries need k = 3, got {}", graph.k)));
    }
    let kept = sample_vertices(graph.n, prob, seed, Stream::CherryExperiment)?;
    let sub = graph.induced(&kept);
    let cherries = find_cherries(&sub)?;
    let hitting_set = greedy_hitting_set(sub.n, &cherries);
    let rest: Vec<u32> = (0..sub.n as u32).filter(|v| hitting_set.binary_search(v).is_err()).collect();
    let cleaned = sub.induced(&rest);
    debug_assert!(find_cherries(&cleaned).unwrap().is_empty());
    let report = degree_report(&cleaned);
    Ok(CherryExperiment {
        prob: prob.to_string(),
        seed,
        kept_vertices: sub.n,
        edges: sub.num_edges(),
        average_degree: degree_report(&sub).average_degree,
        cherries: cherries.len(),
        hitting_set,
        max_codegree_after_removal: report.max_codegree,
    })
}

/// Repeatedly takes the vertex in the most unhit cherries (least id on ties).
fn greedy_hitting_set(n: usize, cherries: &[Cherry]) -> Vec<u32> {
    let mut alive = vec![true; cherries.len()];
    let mut chosen = Vec::new();
    loop {
        let mut count = vec![0usize; n];
        for (c, _) in cherries.iter().zip(&alive).filter(|(_, &a)| a) {
            for v in c.vertices() {
                count[v as usize] += 1;
            }
        }
        let Some((best, &hits)) = count.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))) else {
            break;
        };
        if hits == 0 {
            break;
        }
        chosen.push(best as u32);
        for (c, a) in cherries.iter().zip(alive.iter_mut()) {
            if c.vertices().contains(&(best as u32)) {
                *a = false;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}
