//! The random greedy linear packing process: accept uniformly random
//! `q`-subsets of `[n]` that meet every earlier accepted set in at most one
//! vertex.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::hypergraph::{expand_to_kgraph, CliqueSystem, Provenance};
use crate::rng::{stream_rng, Stream};
use crate::solvers::{exact_independence_number, greedy_independent_set};

/// Consecutive rejections per vertex before the default run gives up.
pub const DEFAULT_REJECT_FACTOR: u64 = 1000;
/// Exact independence number is attempted up to this many vertices.
pub const EXACT_ALPHA_MAX_N: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TargetReached,
    RejectLimit,
    PairSaturation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessTrace {
    pub n: usize,
    pub q: usize,
    pub seed: u64,
    pub target_e: Option<usize>,
    pub reject_limit: u64,
    pub accepted: Vec<Vec<u32>>,
    /// `rejections[i]` draws were rejected before `accepted[i]`.
    pub rejections: Vec<u64>,
    /// Rejections after the last acceptance.
    pub trailing_rejections: u64,
    pub covered_pairs: u64,
    pub stop_reason: StopReason,
}

/// Index of pair `a < b` in the upper-triangular layout.
#[inline]
fn pair_index(n: usize, a: usize, b: usize) -> usize {
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1)) as u64
}

pub fn default_reject_limit(n: usize) -> u64 {
    DEFAULT_REJECT_FACTOR * n as u64
}

pub fn run_greedy_process(
    n: usize,
    q: usize,
    seed: u64,
    target_e: Option<usize>,
    reject_limit: u64,
) -> Result<ProcessTrace> {
    if q < 2 || q > n {
        return Err(Error::BadParams(format!("need 2 <= q <= n, got q = {q}, n = {n}")));
    }
    let total_pairs = binomial(n as u64, 2);
    let pairs_per_set = binomial(q as u64, 2);
    let mut covered = vec![false; total_pairs as usize];
    let mut covered_pairs = 0u64;
    let mut rng = stream_rng(seed, Stream::Process);
    let mut accepted: Vec<Vec<u32>> = Vec::new();
    let mut rejections = Vec::new();
    let mut streak = 0u64;
    let stop_reason = loop {
        if target_e.is_some_and(|t| accepted.len() >= t) {
            break StopReason::TargetReached;
        }
        if total_pairs - covered_pairs < pairs_per_set {
            break StopReason::PairSaturation;
        }
        if streak >= reject_limit {
            break StopReason::RejectLimit;
        }
        let mut cand: Vec<usize> = sample(&mut rng, n, q).into_vec();
        cand.sort_unstable();
        let admissible = cand
            .iter()
            .enumerate()
            .all(|(i, &a)| cand[i + 1..].iter().all(|&b| !covered[pair_index(n, a, b)]));
        if !admissible {
            streak += 1;
            continue;
        }
        for (i, &a) in cand.iter().enumerate() {
            for &b in &cand[i + 1..] {
                covered[pair_index(n, a, b)] = true;
            }
        }
        covered_pairs += pairs_per_set;
        accepted.push(cand.into_iter().map(|v| v as u32).collect());
        rejections.push(streak);
        streak = 0;
    };
    Ok(ProcessTrace {
        n,
        q,
        seed,
        target_e,
        reject_limit,
        accepted,
        rejections,
        trailing_rejections: streak,
        covered_pairs,
        stop_reason,
    })
}

impl ProcessTrace {
    /// `⌊C(n,2) / C(q,2)⌋`, the most sets a linear family can hold.
    pub fn pair_count_bound(&self) -> u64 {
        binomial(self.n as u64, 2) / binomial(self.q as u64, 2)
    }

    pub fn to_clique_system(&self) -> CliqueSystem {
        let mut provenance = Provenance::new();
        provenance.insert("construction".into(), json!("greedy_process"));
        provenance.insert("seed".into(), json!(self.seed));
        provenance.insert("reject_limit".into(), json!(self.reject_limit));
        provenance.insert("target_e".into(), json!(self.target_e));
        provenance.insert("stop_reason".into(), json!(self.stop_reason));
        provenance.insert("rejections".into(), json!(self.rejections));
        provenance.insert("trailing_rejections".into(), json!(self.trailing_rejections));
        CliqueSystem::new(self.n, self.q, 1, self.accepted.clone())
            .expect("accepted sets are well formed")
            .with_provenance(provenance)
    }

    pub fn csv_header() -> &'static str {
        "n,q,seed,e,covered_pairs,total_rejections,stop_reason"
    }

    pub fn csv_row(&self) -> String {
        let total: u64 = self.rejections.iter().sum::<u64>() + self.trailing_rejections;
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.q,
            self.seed,
            self.accepted.len(),
            self.covered_pairs,
            total,
            serde_json::to_value(self.stop_reason).unwrap().as_str().unwrap()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMethod {
    Exact,
    /// Branch and bound ran out of budget; value is the best set found.
    BudgetLowerBound,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessStats {
    pub n: usize,
    pub q: usize,
    pub k: usize,
    pub e: usize,
    pub m: usize,
    pub pair_coverage: f64,
    pub alpha: usize,
    pub alpha_method: AlphaMethod,
    pub alpha_witness: Vec<u32>,
    /// `⌈n / α⌉`.
    pub chi_lower_bound: usize,
}

/// Expands the accepted sets to their `k`-graph and measures it.
pub fn process_stats(trace: &ProcessTrace, k: usize, seed: u64, budget: u64) -> Result<ProcessStats> {
    let system = trace.to_clique_system();
    let graph = expand_to_kgraph(&system, k)?;
    let (alpha_witness, alpha_method) = if trace.n <= EXACT_ALPHA_MAX_N {
        let r = exact_independence_number(&graph, budget);
        let method = if r.exact { AlphaMethod::Exact } else { AlphaMethod::BudgetLowerBound };
        (r.independent_set().unwrap_or_default().to_vec(), method)
    } else {
        (greedy_independent_set(&graph, seed), AlphaMethod::Greedy)
    };
    let alpha = alpha_witness.len();
    let total_pairs = binomial(trace.n as u64, 2);
    Ok(ProcessStats {
        n: trace.n,
        q: trace.q,
        k,
        e: trace.accepted.len(),
        m: graph.num_edges(),
        pair_coverage: if total_pairs == 0 { 0.0 } else { trace.covered_pairs as f64 / total_pairs as f64 },
        alpha,
        alpha_method,
        alpha_witness,
        chi_lower_bound: if alpha == 0 { 0 } else { trace.n.div_ceil(alpha) },
    })
}
