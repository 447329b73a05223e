//! End-to-end self-check over the library's verifiable claims, run by the
//! `audit` subcommand.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::caps::{cap_bound_exact, enumerate_caps, greedy_cap_extension_trace, sample_mixing_checks, second_singular_value};
use crate::constructions::{
    build_affine_plane, build_enlarged_plane_system, build_polynomial_system, default_restriction_prob,
    pad_cliques, random_restriction, IncidencePlane,
};
use crate::hypergraph::{codegrees, expand_to_kgraph, find_cherries, CliqueSystem, KGraph};
use crate::process::{binomial, run_greedy_process};
use crate::solvers::{
    exact_chromatic_number, exact_independence_number, greedy_coloring, split_coloring, verify_coloring,
};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Small,
    Medium,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

type Check = fn(Scale, bool) -> Result<String, String>;

pub const CHECKS: &[(&str, Check)] = &[
    ("poly_counts", poly_counts),
    ("poly_ell", poly_ell),
    ("alpha_bound", alpha_bound),
    ("prop2_chi", prop2_chi),
    ("process_bounds", process_bounds),
    ("caps_census", caps_census),
    ("cap_bound", cap_bound_check),
    ("spectral", spectral),
    ("cap_traces", cap_traces),
    ("coloring", coloring),
    ("cherries", cherries),
    ("determinism", determinism),
];

/// Runs every check; `fault` names a check whose expected value is
/// deliberately corrupted.
pub fn run_audit(scale: Scale, fault: Option<&str>) -> Vec<AuditRow> {
    CHECKS
        .iter()
        .map(|&(id, check)| {
            let start = Instant::now();
            let outcome = check(scale, fault == Some(id));
            let millis = start.elapsed().as_millis();
            match outcome {
                Ok(detail) => AuditRow { id, passed: true, detail, millis },
                Err(detail) => AuditRow { id, passed: false, detail, millis },
            }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn seeds(scale: Scale, small: u64, medium: u64) -> std::ops::Range<u64> {
    0..match scale {
        Scale::Small => small,
        Scale::Medium => medium,
    }
}

const POLY_PARAMS: [(u64, usize); 4] = [(3, 2), (5, 2), (5, 3), (7, 3)];

fn poly_counts(_: Scale, corrupt: bool) -> Result<String, String> {
    for (q, k) in POLY_PARAMS {
        let s = build_polynomial_system(q, k).map_err(|e| e.to_string())?;
        let expected = q.pow(k as u32) + q + corrupt as u64;
        ensure(s.num_cliques() as u64 == expected, || {
            format!("Q={q} k={k}: {} cliques, expected {expected}", s.num_cliques())
        })?;
    }
    Ok("Q^k + Q cliques for 4 parameter sets".into())
}

fn poly_ell(_: Scale, corrupt: bool) -> Result<String, String> {
    for (q, k) in POLY_PARAMS {
        let mut s = build_polynomial_system(q, k).map_err(|e| e.to_string())?;
        if corrupt {
            s.ell -= 1;
        }
        let v = s.validate_ell().map_err(|e| e.to_string())?;
        ensure(v.ok, || format!("Q={q} k={k}: max intersection {}", v.max_pairwise_intersection))?;
    }
    Ok("all clique pairs within ell = k - 1".into())
}

fn alpha_bound(scale: Scale, corrupt: bool) -> Result<String, String> {
    let bound = 5 - corrupt as usize * 2;
    let mut worst = 0;
    for q in [5u64, 7] {
        let s = build_polynomial_system(q, 3).map_err(|e| e.to_string())?;
        let h = expand_to_kgraph(&s, 3).map_err(|e| e.to_string())?;
        let r = exact_independence_number(&h, u64::MAX);
        ensure(r.exact && r.value <= bound, || format!("Q={q}: alpha = {}", r.value))?;
        worst = worst.max(r.value);
        for seed in seeds(scale, 5, 20) {
            let w = random_restriction(&s, q as usize, 0.5, seed, 0).map_err(|e| e.to_string())?;
            let sub = h.induced(&w.w);
            let r = exact_independence_number(&sub, u64::MAX);
            ensure(r.exact && r.value <= bound, || format!("Q={q} seed {seed}: alpha = {}", r.value))?;
            worst = worst.max(r.value);
        }
    }
    Ok(format!("max alpha {worst} <= {bound}"))
}

fn prop2_chi(_: Scale, corrupt: bool) -> Result<String, String> {
    let s = build_enlarged_plane_system(9, 4).map_err(|e| e.to_string())?;
    let g = expand_to_kgraph(&s, 2).map_err(|e| e.to_string())?;
    let r = exact_chromatic_number(&g, u64::MAX);
    let need = 4 + corrupt as usize;
    ensure(r.exact && r.value >= need, || format!("chi = {}, expected >= {need}", r.value))?;
    Ok(format!("chi = {}", r.value))
}

fn process_bounds(scale: Scale, corrupt: bool) -> Result<String, String> {
    let mut max_e = 0;
    for (n, q) in [(100usize, 5usize), (200, 8)] {
        let cap = binomial(n as u64, 2) / binomial(q as u64, 2) - corrupt as u64 * 1000;
        for seed in seeds(scale, 10, 50) {
            let t = run_greedy_process(n, q, seed, None, 10 * n as u64).map_err(|e| e.to_string())?;
            let v = t.to_clique_system().validate_ell().map_err(|e| e.to_string())?;
            let e = t.accepted.len() as u64;
            ensure(v.ok && e <= cap && e * ((q * q) as u64) < ((n * n) as u64), || {
                format!("n={n} q={q} seed {seed}: e = {e}, max intersection {}", v.max_pairwise_intersection)
            })?;
            max_e = max_e.max(e);
        }
    }
    Ok(format!("largest e {max_e}"))
}

/// Caps by direct filtering of every subset (planes with at most 64 points).
pub fn brute_force_cap_counts(plane: &IncidencePlane) -> Vec<u64> {
    let n = plane.num_points();
    assert!(n <= 25, "brute force limited to 2^25 subsets");
    let masks: Vec<u64> = plane.lines.iter().map(|l| l.iter().fold(0, |m, &p| m | 1 << p)).collect();
    let mut counts = vec![0u64; n + 1];
    for s in 0u64..1 << n {
        if masks.iter().all(|m| (s & m).count_ones() <= 2) {
            counts[s.count_ones() as usize] += 1;
        }
    }
    counts
}

fn caps_census(_: Scale, corrupt: bool) -> Result<String, String> {
    let r2 = enumerate_caps(&build_affine_plane(2).map_err(|e| e.to_string())?, None, true, u64::MAX);
    ensure(r2.total == 16, || format!("I_2 = {}", r2.total))?;
    let r3 = enumerate_caps(&build_affine_plane(3).map_err(|e| e.to_string())?, None, true, u64::MAX);
    let expected = 72 + corrupt as u64;
    ensure(r3.count(3) == expected, || format!("I_(3,3) = {}, expected {expected}", r3.count(3)))?;
    ensure(r3.max_cap == 4, || format!("max cap in AG(2,3) = {}", r3.max_cap))?;
    let p4 = build_affine_plane(4).map_err(|e| e.to_string())?;
    let r4 = enumerate_caps(&p4, None, true, u64::MAX);
    let brute = brute_force_cap_counts(&p4);
    for (t, &b) in brute.iter().enumerate() {
        ensure(r4.count(t) == b, || format!("q=4 t={t}: dfs {} vs brute {b}", r4.count(t)))?;
    }
    Ok(format!("I_2 = 16, I_(3,3) = 72, q=4 total {}", r4.total))
}

fn cap_bound_check(scale: Scale, corrupt: bool) -> Result<String, String> {
    let qs: &[usize] = match scale {
        Scale::Small => &[3, 4],
        Scale::Medium => &[3, 4, 5],
    };
    for &q in qs {
        let r = enumerate_caps(&build_affine_plane(q as u64).map_err(|e| e.to_string())?, None, true, u64::MAX);
        for t in 3..=q + 2 {
            let mut bound = cap_bound_exact(q, t).map_err(|e| e.to_string())?;
            if corrupt {
                bound /= BigRational::from_integer(BigInt::from(1_000_000));
            }
            let count = BigRational::from_integer(BigInt::from(r.count(t)));
            ensure(count <= bound, || format!("q={q} t={t}: count {} exceeds bound {bound}", r.count(t)))?;
        }
    }
    Ok(format!("counts within bound for q in {qs:?}"))
}

fn spectral(scale: Scale, corrupt: bool) -> Result<String, String> {
    for q in [2u64, 3, 4, 5, 7] {
        let s = second_singular_value(&build_affine_plane(q).map_err(|e| e.to_string())?);
        let target = (q as f64).sqrt() + corrupt as u8 as f64;
        ensure((s - target).abs() < 1e-9, || format!("q={q}: second singular value {s}"))?;
    }
    let samples = match scale {
        Scale::Small => 200,
        Scale::Medium => 1000,
    };
    for q in [3u64, 5, 7] {
        let p = build_affine_plane(q).map_err(|e| e.to_string())?;
        let checks = sample_mixing_checks(&p, samples, q);
        if let Some(c) = checks.iter().find(|c| !c.holds) {
            return Err(format!("q={q}: mixing fails, deviation {} vs bound {}", c.deviation, c.bound));
        }
    }
    Ok(format!("sqrt(q) spectrum, {samples} mixing samples per q"))
}

fn cap_traces(scale: Scale, corrupt: bool) -> Result<String, String> {
    for q in [5u64, 7, 9] {
        let p = build_affine_plane(q).map_err(|e| e.to_string())?;
        for seed in seeds(scale, 20, 100) {
            let t = greedy_cap_extension_trace(&p, seed);
            let limit = q as usize + 2 - corrupt as usize * 4;
            ensure(t.all_rows_ok() && t.cap.len() <= limit, || {
                format!("q={q} seed {seed}: cap size {}, rows ok {}", t.cap.len(), t.all_rows_ok())
            })?;
        }
    }
    Ok("|Z_i| = C(i,2) and |X_i| C(i,2) <= q^3 on every step".into())
}

/// Linear system with `hubs` vertices that share one clique and each lie
/// on `rays` further cliques of fresh vertices, plus `extra` disjoint
/// cliques.
pub fn hub_system(hubs: usize, rays: usize, q: usize, extra: usize) -> CliqueSystem {
    assert!(hubs <= q);
    let mut next = hubs as u32;
    let mut fresh = |count: usize| {
        let v: Vec<u32> = (next..next + count as u32).collect();
        next += count as u32;
        v
    };
    let mut shared: Vec<u32> = (0..hubs as u32).collect();
    shared.extend(fresh(q - hubs));
    let mut cliques = vec![shared];
    for h in 0..hubs as u32 {
        for _ in 0..rays {
            let mut c = vec![h];
            c.extend(fresh(q - 1));
            cliques.push(c);
        }
    }
    for _ in 0..extra {
        cliques.push(fresh(q));
    }
    let n = cliques.iter().flatten().max().map_or(0, |&m| m as usize + 1);
    CliqueSystem::new(n, q, 1, cliques).expect("hub system is well formed")
}

fn coloring(scale: Scale, corrupt: bool) -> Result<String, String> {
    let mut high_total = 0;
    let mut runs = 0;
    for seed in seeds(scale, 8, 20) {
        let q = 5 + (seed % 4) as usize;
        let k = 2 + (seed % 2) as usize;
        let systems = [
            hub_system(2 + (seed % 3) as usize, 10 + seed as usize, q, seed as usize % 5),
            run_greedy_process(60, q, seed, None, 600).map_err(|e| e.to_string())?.to_clique_system(),
        ];
        for s in systems {
            let r = split_coloring(&s, k, seed).map_err(|e| e.to_string())?;
            let g = expand_to_kgraph(&s, k).map_err(|e| e.to_string())?;
            let proper = verify_coloring(&g, &r.coloring).map_err(|e| e.to_string())?.proper && !corrupt;
            ensure(proper && r.high_size_bound_holds && r.high_degree_bound_holds, || {
                format!("seed {seed}: proper {proper}, |B| bound {}, H[B] bound {}", r.high_size_bound_holds, r.high_degree_bound_holds)
            })?;
            let gc = greedy_coloring(&g, seed);
            ensure(verify_coloring(&g, &gc).map_err(|e| e.to_string())?.proper, || format!("seed {seed}: greedy improper"))?;
            high_total += r.high_size;
            runs += 1;
        }
    }
    Ok(format!("{runs} split colorings proper, {high_total} high-degree vertices in total"))
}

fn cherries(_: Scale, corrupt: bool) -> Result<String, String> {
    for (q, expected) in [(5u64, 300usize), (3, 0)] {
        let g: KGraph = build_affine_plane(q).map_err(|e| e.to_string())?.collinear_triples();
        let found = find_cherries(&g).map_err(|e| e.to_string())?.len();
        let formula: usize = codegrees(&g).values().map(|&c| binomial(c as u64, 3) as usize).sum();
        let expected = expected + corrupt as usize;
        ensure(found == expected && formula == expected, || {
            format!("q={q}: {found} cherries enumerated, {formula} by codegree, expected {expected}")
        })?;
    }
    Ok("AG(2,5): 300, AG(2,3): 0".into())
}

fn determinism(_: Scale, corrupt: bool) -> Result<String, String> {
    let run = |seed: u64| -> Result<String, String> {
        let s = build_polynomial_system(5, 2).map_err(|e| e.to_string())?;
        let r = random_restriction(&s, 3, default_restriction_prob(3, 5) * 5.0, seed, 50).map_err(|e| e.to_string())?;
        let padded = pad_cliques(&r, 3).map_err(|e| e.to_string())?;
        let t = run_greedy_process(50, 4, seed, None, 500).map_err(|e| e.to_string())?;
        let g = expand_to_kgraph(&padded, 2).map_err(|e| e.to_string())?;
        let c = greedy_coloring(&g, seed);
        serde_json::to_string(&(padded, t, c)).map_err(|e| e.to_string())
    };
    let a = run(11)?;
    let b = run(if corrupt { 12 } else { 11 })?;
    ensure(a == b, || "seeded outputs differ between runs".into())?;
    Ok(format!("{} identical bytes", a.len()))
}
