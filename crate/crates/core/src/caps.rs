//! Caps (point sets with no three collinear) in affine planes: exhaustive
//! census, the product-formula upper bound, incidence mixing and spectrum,
//! and randomized cap growth traces.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::Bitset;
use crate::constructions::IncidencePlane;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};

/// Unordered cap counts for one plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapReport {
    pub q: usize,
    /// `counts[t]` = number of caps with exactly `t` points, `t = 0..=q+2`.
    #[serde(deserialize_with = "size_keyed")]
    pub counts: BTreeMap<usize, u64>,
    /// Product-formula bound for `3 <= t <= q+2`.
    #[serde(deserialize_with = "size_keyed")]
    pub bounds: BTreeMap<usize, f64>,
    pub max_cap: usize,
    pub exhaustive: bool,
    pub total: u64,
    /// `q^2 + q^2(q^2-1) + q · max_{t>=3} counts[t]`.
    pub assembled_total: u64,
    pub convention: String,
    pub max_t: Option<usize>,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub caps: Option<Vec<Vec<u32>>>,
}

/// Integer-keyed maps arrive with string keys when the report sits inside a
/// flattened document, so keys are parsed by hand.
fn size_keyed<'de, D, T>(d: D) -> std::result::Result<BTreeMap<usize, T>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: Deserialize<'de>,
{
    BTreeMap::<String, T>::deserialize(d)?
        .into_iter()
        .map(|(k, v)| k.parse().map(|t| (t, v)).map_err(serde::de::Error::custom))
        .collect()
}

impl CapReport {
    pub fn count(&self, t: usize) -> u64 {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    /// Rows `t,count,bound,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,count,bound,ratio\n");
        for (&t, &c) in &self.counts {
            match self.bounds.get(&t) {
                Some(b) => out.push_str(&format!("{t},{c},{b},{}\n", c as f64 / b)),
                None => out.push_str(&format!("{t},{c},,\n")),
            }
        }
        out
    }
}

struct CapSearch<'a> {
    n: usize,
    line_table: Vec<u32>,
    line_sets: Vec<Bitset>,
    chosen: Vec<u32>,
    counts: Vec<u64>,
    max_t: usize,
    nodes: u64,
    budget: u64,
    aborted: bool,
    caps: Option<&'a mut Vec<Vec<u32>>>,
}

impl CapSearch<'_> {
    fn run(&mut self, start: usize, forbidden: &Bitset) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        self.counts[self.chosen.len()] += 1;
        if let Some(caps) = self.caps.as_deref_mut() {
            caps.push(self.chosen.clone());
        }
        if self.chosen.len() == self.max_t {
            return;
        }
        for v in start..self.n {
            if forbidden.contains(v) {
                continue;
            }
            let mut next = forbidden.clone();
            for &u in &self.chosen {
                let line = self.line_table[u as usize * self.n + v];
                next.union_with(&self.line_sets[line as usize]);
            }
            self.chosen.push(v as u32);
            self.run(v + 1, &next);
            self.chosen.pop();
            if self.aborted {
                return;
            }
        }
    }
}

/// Depth-first census of caps in ascending point order, so every
/// unordered cap is visited once. Points on a line through two chosen
/// points are masked out incrementally. With `count_only = false` the caps
/// themselves are returned as well.
pub fn enumerate_caps(plane: &IncidencePlane, max_t: Option<usize>, count_only: bool, budget: u64) -> CapReport {
    let n = plane.num_points();
    let q = plane.q;
    let line_sets: Vec<Bitset> = plane
        .lines
        .iter()
        .map(|l| Bitset::from_items(n, l.iter().map(|&p| p as usize)))
        .collect();
    let mut caps = Vec::new();
    let cap_limit = max_t.unwrap_or(n).min(n);
    let mut search = CapSearch {
        n,
        line_table: plane.line_table(),
        line_sets,
        chosen: Vec::new(),
        counts: vec![0; n + 1],
        max_t: cap_limit,
        nodes: 0,
        budget,
        aborted: false,
        caps: if count_only { None } else { Some(&mut caps) },
    };
    search.run(0, &Bitset::new(n));
    let (raw_counts, nodes, aborted) = (search.counts, search.nodes.min(budget), search.aborted);

    let top = (q + 2).max(raw_counts.iter().rposition(|&c| c > 0).unwrap_or(0));
    let counts: BTreeMap<usize, u64> = (0..=top.min(n)).map(|t| (t, raw_counts[t])).collect();
    let bounds = (3..=q + 2).filter_map(|t| cap_bound(q, t).ok().map(|b| (t, b))).collect();
    let max_cap = raw_counts.iter().rposition(|&c| c > 0).unwrap_or(0);
    let max_large = (3..=q + 2).map(|t| raw_counts.get(t).copied().unwrap_or(0)).max().unwrap_or(0);
    let q2 = (q * q) as u64;
    CapReport {
        q,
        total: raw_counts.iter().sum(),
        counts,
        bounds,
        max_cap,
        exhaustive: !aborted,
        assembled_total: q2.saturating_mul(q2).saturating_add((q as u64).saturating_mul(max_large)),
        convention: "unordered point sets with no three collinear points, sizes 0..".into(),
        max_t,
        nodes,
        caps: (!count_only).then_some(caps),
    }
}

/// `q^4 ∏_{i=2}^{t-1} min(q^2, q^3 / C(i,2)) / t!` as an exact rational.
pub fn cap_bound_exact(q: usize, t: usize) -> Result<BigRational> {
    if q < 2 || t < 3 || t > q + 2 {
        return Err(Error::RangeError(format!("cap bound needs 3 <= t <= q + 2, got q = {q}, t = {t}")));
    }
    let qi = BigInt::from(q);
    let q2 = BigRational::from_integer(qi.pow(2));
    let q3 = BigRational::from_integer(qi.pow(3));
    let mut value = BigRational::from_integer(qi.pow(4));
    for i in 2..t {
        let pairs = BigRational::from_integer(BigInt::from(i * (i - 1) / 2));
        let spread = &q3 / pairs;
        value *= if spread < q2 { spread } else { q2.clone() };
    }
    let factorial = (1..=t).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    Ok(value / BigRational::from_integer(factorial))
}

pub fn cap_bound(q: usize, t: usize) -> Result<f64> {
    Ok(cap_bound_exact(q, t)?.to_f64().expect("finite bound"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingCheck {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub observed: u64,
    pub predicted: f64,
    pub deviation: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Compares the incidence count `e(X, Y)` between points `X` and lines `Y`
/// with `|X||Y|/q`, against the deviation bound `sqrt(q |X| |Y|)`.
pub fn mixing_check(plane: &IncidencePlane, x: &[u32], y: &[u32]) -> MixingCheck {
    let member = Bitset::from_items(plane.num_points(), x.iter().map(|&p| p as usize));
    let observed: u64 = y
        .iter()
        .map(|&l| plane.lines[l as usize].iter().filter(|&&p| member.contains(p as usize)).count() as u64)
        .sum();
    let size = (x.len() * y.len()) as f64;
    let q = plane.q as f64;
    let predicted = size / q;
    let deviation = (observed as f64 - predicted).abs();
    let bound = (q * size).sqrt();
    let holds = deviation < bound || (size == 0.0 && deviation == 0.0);
    MixingCheck { x: x.to_vec(), y: y.to_vec(), observed, predicted, deviation, bound, holds }
}

/// Random point and line subsets, each with its own uniformly drawn density.
pub fn sample_mixing_checks(plane: &IncidencePlane, samples: usize, seed: u64) -> Vec<MixingCheck> {
    let mut rng = stream_rng(seed, Stream::MixingSamples);
    (0..samples)
        .map(|_| {
            let (px, py): (f64, f64) = (rng.random(), rng.random());
            let x: Vec<u32> = (0..plane.num_points() as u32).filter(|_| rng.random_bool(px)).collect();
            let y: Vec<u32> = (0..plane.num_lines() as u32).filter(|_| rng.random_bool(py)).collect();
            mixing_check(plane, &x, &y)
        })
        .collect()
}

/// Singular values of the point-line incidence matrix, largest first,
/// from the eigenvalues of its `q^2 × q^2` Gram matrix.
pub fn singular_values(plane: &IncidencePlane) -> Vec<f64> {
    let n = plane.num_points();
    let mut gram = DMatrix::<f64>::zeros(n, n);
    for line in &plane.lines {
        for &a in line {
            for &b in line {
                gram[(a as usize, b as usize)] += 1.0;
            }
        }
    }
    let mut values: Vec<f64> = SymmetricEigen::new(gram)
        .eigenvalues
        .iter()
        .map(|&v| v.max(0.0).sqrt())
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

pub fn second_singular_value(plane: &IncidencePlane) -> f64 {
    singular_values(plane).get(1).copied().unwrap_or(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapTraceRow {
    pub i: usize,
    /// Lines through at least two chosen points.
    pub z_size: usize,
    /// Points on none of those lines.
    pub x_size: usize,
    /// `q^3 / C(i,2)`.
    pub x_bound: f64,
    /// `x_size · C(i,2) <= q^3`, compared in integers.
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapTrace {
    pub q: usize,
    pub seed: u64,
    pub cap: Vec<u32>,
    pub rows: Vec<CapTraceRow>,
}

impl CapTrace {
    pub fn all_rows_ok(&self) -> bool {
        self.rows.iter().all(|r| r.within_bound && r.z_size == r.i * (r.i - 1) / 2)
    }
}

/// Grows a cap by uniformly random admissible points, recording the blocked
/// lines and the admissible set after each point from the second on.
pub fn greedy_cap_extension_trace(plane: &IncidencePlane, seed: u64) -> CapTrace {
    let n = plane.num_points();
    let q = plane.q;
    let mut rng = stream_rng(seed, Stream::CapTrace);
    let line_table = plane.line_table();
    let through = plane.lines_through();
    let mut blocked = Bitset::new(plane.num_lines());
    let mut cap: Vec<u32> = Vec::new();
    let mut rows = Vec::new();
    let mut admissible: Vec<u32> = (0..n as u32).collect();
    while let Some(&v) = admissible.choose(&mut rng) {
        for &u in &cap {
            blocked.insert(line_table[u as usize * n + v as usize] as usize);
        }
        cap.push(v);
        let i = cap.len();
        admissible = if i < 2 {
            (0..n as u32).filter(|&p| p != v).collect()
        } else {
            (0..n as u32)
                .filter(|&p| through[p as usize].iter().all(|&l| !blocked.contains(l as usize)))
                .collect()
        };
        if i >= 2 {
            let pairs = i * (i - 1) / 2;
            rows.push(CapTraceRow {
                i,
                z_size: blocked.count(),
                x_size: admissible.len(),
                x_bound: (q * q * q) as f64 / pairs as f64,
                within_bound: (admissible.len() * pairs) as u64 <= (q * q * q) as u64,
            });
        }
    }
    CapTrace { q, seed, cap, rows }
}
