//! Explicit clique systems: polynomial graphs over GF(Q), affine planes,
//! enlarged planes, random restrictions and padding.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{is_prime, FiniteField, Polynomial};
use crate::error::{Error, Result};
use crate::hypergraph::{expand_to_kgraph, sorted_intersection, CliqueSystem, KGraph, Provenance};
use crate::rng::Stream;

/// Points and lines of the Desarguesian affine plane AG(2, q).
///
/// Point `(x, y)` has id `x * q + y`. Lines are listed as the `q^2`
/// non-vertical lines `y = m x + b` (ordered by `m`, then `b`) followed by
/// the `q` vertical lines `x = c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidencePlane {
    pub q: usize,
    pub lines: Vec<Vec<u32>>,
}

impl IncidencePlane {
    pub fn num_points(&self) -> usize {
        self.q * self.q
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    /// Line ids through each point.
    pub fn lines_through(&self) -> Vec<Vec<u32>> {
        let mut through = vec![Vec::new(); self.num_points()];
        for (l, line) in self.lines.iter().enumerate() {
            for &p in line {
                through[p as usize].push(l as u32);
            }
        }
        through
    }

    /// `table[a * n + b]` is the line through distinct points `a` and `b`
    /// (`u32::MAX` on the diagonal or if no line exists).
    pub fn line_table(&self) -> Vec<u32> {
        let n = self.num_points();
        let mut table = vec![u32::MAX; n * n];
        for (l, line) in self.lines.iter().enumerate() {
            for &a in line {
                for &b in line {
                    if a != b {
                        table[a as usize * n + b as usize] = l as u32;
                    }
                }
            }
        }
        table
    }

    /// Checks line count, line sizes, point replication, and that every pair
    /// of points lies on exactly one line.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let q = self.q;
        let n = self.num_points();
        if self.lines.len() != q * q + q {
            return Err(format!("{} lines instead of {}", self.lines.len(), q * q + q));
        }
        if let Some(l) = self.lines.iter().position(|l| l.len() != q || l.iter().any(|&p| p as usize >= n)) {
            return Err(format!("line {l} malformed"));
        }
        if let Some(p) = self.lines_through().iter().position(|t| t.len() != q + 1) {
            return Err(format!("point {p} not on {} lines", q + 1));
        }
        let mut cover = vec![0u32; n * n];
        for line in &self.lines {
            for (i, &a) in line.iter().enumerate() {
                for &b in &line[i + 1..] {
                    cover[a.min(b) as usize * n + a.max(b) as usize] += 1;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if cover[a * n + b] != 1 {
                    return Err(format!("points {a},{b} share {} lines", cover[a * n + b]));
                }
            }
        }
        Ok(())
    }

    /// Lines as a linear clique system on the `q^2` points.
    pub fn to_clique_system(&self) -> CliqueSystem {
        let mut provenance = Provenance::new();
        provenance.insert("construction".into(), json!("affine_plane"));
        provenance.insert("q".into(), json!(self.q));
        CliqueSystem::new(self.num_points(), self.q, 1, self.lines.clone())
            .expect("plane lines are well formed")
            .with_provenance(provenance)
    }

    /// The 3-graph of collinear triples.
    pub fn collinear_triples(&self) -> KGraph {
        expand_to_kgraph(&self.to_clique_system(), 3).expect("q >= 3 for collinear triples")
    }
}

pub fn build_affine_plane(q: u64) -> Result<IncidencePlane> {
    let field = FiniteField::new(q)?;
    let qu = q as u32;
    let mut lines = Vec::with_capacity((q * q + q) as usize);
    for m in field.elements() {
        for b in field.elements() {
            let mut line: Vec<u32> = field.elements().map(|x| x * qu + field.add(field.mul(m, x), b)).collect();
            line.sort_unstable();
            lines.push(line);
        }
    }
    for c in field.elements() {
        lines.push(field.elements().map(|y| c * qu + y).collect());
    }
    Ok(IncidencePlane { q: q as usize, lines })
}

/// Graphs `{(x, p(x))}` of all polynomials of degree `< k` over GF(Q), plus
/// the `Q` columns `{(x, y) : y}`. Vertex `(x, y)` has id `x * Q + y`.
pub fn build_polynomial_system(field_order: u64, k: usize) -> Result<CliqueSystem> {
    if !is_prime(field_order) {
        return Err(Error::NotPrime(field_order));
    }
    if k < 2 || k as u64 >= field_order {
        return Err(Error::BadDegreeBound { k, field_order });
    }
    let field = FiniteField::new(field_order)?;
    let qq = field_order as u32;
    let num_polys = field_order.checked_pow(k as u32).filter(|&c| c <= 50_000_000).ok_or_else(|| {
        Error::BadParams(format!("{field_order}^{k} polynomial cliques is too many"))
    })?;
    let mut cliques = Vec::with_capacity(num_polys as usize + field_order as usize);
    let mut coeffs = vec![0u32; k];
    for _ in 0..num_polys {
        let poly = Polynomial::new(coeffs.clone());
        cliques.push(field.elements().map(|x| x * qq + poly.eval_unchecked(&field, x)).collect());
        // next coefficient vector, a_0 fastest
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < qq {
                break;
            }
            *c = 0;
        }
    }
    for x in field.elements() {
        cliques.push((0..qq).map(|y| x * qq + y).collect());
    }
    let mut provenance = Provenance::new();
    provenance.insert("construction".into(), json!("polynomial"));
    provenance.insert("Q".into(), json!(field_order));
    provenance.insert("k".into(), json!(k));
    let n = (field_order * field_order) as usize;
    Ok(CliqueSystem::new(n, field_order as usize, k - 1, cliques)?.with_provenance(provenance))
}

/// Largest prime `Q >= q` with `e/2 < Q^k + Q <= e`, if one exists.
pub fn field_order_for(e: u64, q: u64, k: u32) -> Option<u64> {
    let size = |p: u64| p.checked_pow(k).and_then(|v| v.checked_add(p));
    let mut best = None;
    let mut p = q.max(2);
    while let Some(s) = size(p) {
        if s > e {
            break;
        }
        if is_prime(p) && 2 * s > e {
            best = Some(p);
        }
        p += 1;
    }
    best
}

/// Describes why `(e, q, k)` falls outside `(50q)^k < e < 2^q`, if it does.
pub fn regime_warning(e: u64, q: u64, k: u32) -> Option<String> {
    let lower = (50 * q as u128).checked_pow(k);
    let below = lower.is_some_and(|l| (e as u128) <= l);
    let above = q < 128 && (e as u128) >= 1u128 << q;
    (below || above).then(|| format!("(e, q, k) = ({e}, {q}, {k}) is outside (50q)^k < e < 2^q"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictionResult {
    pub source_n: usize,
    pub source_q: usize,
    pub source_ell: usize,
    pub q_target: usize,
    pub prob: f64,
    pub seed: u64,
    /// Seed of the returned attempt (`seed + resample_count`).
    pub attempt_seed: u64,
    pub resample_count: u32,
    pub failed: bool,
    /// Kept vertices, sorted, in source ids.
    pub w: Vec<u32>,
    /// `f ∩ W` for every source clique `f`, in source ids.
    pub traces: Vec<Vec<u32>>,
    pub max_trace: usize,
}

/// Default sampling probability `q / (10 Q)`.
pub fn default_restriction_prob(q_target: usize, field_order: usize) -> f64 {
    (q_target as f64 / (10.0 * field_order as f64)).min(1.0)
}

/// Samples `W` vertex by vertex with probability `prob`; while some clique
/// keeps more than `q_target` vertices, resamples with seeds `seed + 1`,
/// `seed + 2`, ... up to `max_resamples` times.
pub fn random_restriction(
    system: &CliqueSystem,
    q_target: usize,
    prob: f64,
    seed: u64,
    max_resamples: u32,
) -> Result<RestrictionResult> {
    if !(prob > 0.0 && prob <= 1.0) {
        return Err(Error::BadParams(format!("probability {prob} outside (0, 1]")));
    }
    system.check_structure()?;
    let mut attempt = 0;
    loop {
        let attempt_seed = seed.wrapping_add(attempt as u64);
        let w = crate::hypergraph::sample_vertices(system.n, prob, attempt_seed, Stream::Restriction)?;
        let traces: Vec<Vec<u32>> = system
            .cliques
            .iter()
            .map(|c| c.iter().copied().filter(|v| w.binary_search(v).is_ok()).collect())
            .collect();
        let max_trace = traces.iter().map(Vec::len).max().unwrap_or(0);
        let failed = max_trace > q_target;
        if !failed || attempt >= max_resamples {
            return Ok(RestrictionResult {
                source_n: system.n,
                source_q: system.q,
                source_ell: system.ell,
                q_target,
                prob,
                seed,
                attempt_seed,
                resample_count: attempt,
                failed,
                w,
                traces,
                max_trace,
            });
        }
        log::debug!("restriction attempt {attempt} kept a trace of {max_trace} > {q_target} vertices");
        attempt += 1;
    }
}

/// Tops every trace up to `q_target` vertices with fresh vertices. `W`
/// becomes ids `0..|W|` (in sorted order); padding ids follow clique by
/// clique.
pub fn pad_cliques(restriction: &RestrictionResult, q_target: usize) -> Result<CliqueSystem> {
    if let Some((index, t)) = restriction.traces.iter().enumerate().find(|(_, t)| t.len() > q_target) {
        return Err(Error::TraceTooLarge { index, size: t.len(), target: q_target });
    }
    let mut next = restriction.w.len() as u32;
    let mut cliques = Vec::with_capacity(restriction.traces.len());
    for trace in &restriction.traces {
        let mut clique: Vec<u32> = trace
            .iter()
            .map(|v| restriction.w.binary_search(v).expect("trace vertex lies in W") as u32)
            .collect();
        for _ in trace.len()..q_target {
            clique.push(next);
            next += 1;
        }
        cliques.push(clique);
    }
    let mut provenance = Provenance::new();
    provenance.insert("construction".into(), json!("padded_restriction"));
    provenance.insert("seed".into(), json!(restriction.seed));
    provenance.insert("attempt_seed".into(), json!(restriction.attempt_seed));
    provenance.insert("w_size".into(), json!(restriction.w.len()));
    provenance.insert("prob".into(), json!(restriction.prob.to_string()));
    Ok(CliqueSystem::new(next as usize, q_target, restriction.source_ell, cliques)?.with_provenance(provenance))
}

/// `e` cliques of size `q` built from AG(2, p): every line enlarged by
/// `q - p` private vertices, then disjoint fresh cliques up to `e`. The
/// prime `p` is the largest with `p <= q` and `p^2 + p <= e`.
pub fn build_enlarged_plane_system(e: u64, q: u64) -> Result<CliqueSystem> {
    if e <= q || e > q * q {
        return Err(Error::RangeError(format!("need q < e <= q^2, got e = {e}, q = {q}")));
    }
    let p = (2..=q)
        .rev()
        .find(|&p| is_prime(p) && p * p + p <= e)
        .ok_or(Error::NoValidPrime { e, q })?;
    let plane = build_affine_plane(p)?;
    let q = q as usize;
    let mut next = (p * p) as u32;
    let mut cliques = Vec::with_capacity(e as usize);
    for line in &plane.lines {
        let mut c = line.clone();
        for _ in p as usize..q {
            c.push(next);
            next += 1;
        }
        cliques.push(c);
    }
    while (cliques.len() as u64) < e {
        cliques.push((next..next + q as u32).collect());
        next += q as u32;
    }
    let mut provenance = Provenance::new();
    provenance.insert("construction".into(), json!("enlarged_plane"));
    provenance.insert("e".into(), json!(e));
    provenance.insert("q".into(), json!(q));
    provenance.insert("p".into(), json!(p));
    Ok(CliqueSystem::new(next as usize, q, 1, cliques)?.with_provenance(provenance))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Lower,
    Upper,
}

/// Multiplicative Chernoff tail bounds: `exp(-δ²μ/2)` below the mean,
/// `exp(-δ²μ/(2+δ))` above it.
pub fn chernoff_bound(mu: f64, delta: f64, tail: Tail) -> Result<f64> {
    if !(mu.is_finite() && delta.is_finite() && mu >= 0.0 && delta > 0.0) {
        return Err(Error::BadParams(format!("need mu >= 0 and delta > 0, got mu = {mu}, delta = {delta}")));
    }
    let exponent = match tail {
        Tail::Lower => delta * delta * mu / 2.0,
        Tail::Upper => delta * delta * mu / (2.0 + delta),
    };
    Ok((-exponent).exp())
}

/// Number of points two cliques share; exposed for property checks.
pub fn clique_overlap(a: &[u32], b: &[u32]) -> usize {
    sorted_intersection(a, b)
}
