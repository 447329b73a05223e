//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails or runs over its time limit.

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use cliquesys::audit::hub_system;
use cliquesys::caps::{
    cap_bound_exact, enumerate_caps, greedy_cap_extension_trace, sample_mixing_checks, second_singular_value,
};
use cliquesys::constructions::{
    build_affine_plane, build_enlarged_plane_system, build_polynomial_system, pad_cliques, random_restriction,
    IncidencePlane,
};
use cliquesys::hypergraph::{expand_to_kgraph, find_cherries, CliqueSystem, KGraph};
use cliquesys::process::{default_reject_limit, run_greedy_process};
use cliquesys::solvers::{
    exact_chromatic_number, exact_independence_number, greedy_coloring, split_coloring, Coloring,
};
use num_bigint::BigInt;
use num_rational::BigRational;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn is_proper(g: &KGraph, c: &Coloring) -> bool {
    c.assignment.len() == g.n
        && g.edges.iter().all(|e| e.iter().any(|&v| c.assignment[v as usize] != c.assignment[e[0] as usize]))
}

fn independent(g: &KGraph, set: &[u32]) -> bool {
    let inside: HashSet<u32> = set.iter().copied().collect();
    g.edges.iter().all(|e| !e.iter().all(|v| inside.contains(v)))
}

fn brute_alpha(g: &KGraph) -> usize {
    let masks: Vec<u32> = g.edges.iter().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
    (0u32..1 << g.n)
        .filter(|s| masks.iter().all(|m| s & m != *m))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Largest pairwise intersection by hashing each clique.
fn max_intersection(s: &CliqueSystem) -> usize {
    let sets: Vec<HashSet<u32>> = s.cliques.iter().map(|c| c.iter().copied().collect()).collect();
    let mut worst = 0;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            worst = worst.max(sets[i].intersection(&sets[j]).count());
        }
    }
    worst
}

const POLY_PARAMS: [(u64, usize); 4] = [(3, 2), (5, 2), (5, 3), (7, 3)];

fn c01_poly_counts() -> Result<String, String> {
    for (q, k) in POLY_PARAMS {
        let start = Instant::now();
        let s = build_polynomial_system(q, k).map_err(|e| e.to_string())?;
        let expected = q.pow(k as u32) + q;
        ensure(s.num_cliques() as u64 == expected, || format!("Q={q} k={k}: {} cliques", s.num_cliques()))?;
        ensure(start.elapsed() < Duration::from_secs(1), || format!("Q={q} k={k} took {:?}", start.elapsed()))?;
    }
    Ok("Q^k + Q cliques for (3,2) (5,2) (5,3) (7,3)".into())
}

fn c02_poly_ell() -> Result<String, String> {
    let mut pairs = 0;
    for (q, k) in POLY_PARAMS {
        let s = build_polynomial_system(q, k).map_err(|e| e.to_string())?;
        ensure(s.ell == k - 1, || format!("Q={q} k={k}: ell = {}", s.ell))?;
        let v = s.validate_ell().map_err(|e| e.to_string())?;
        let oracle = max_intersection(&s);
        ensure(v.ok && oracle < k && v.max_pairwise_intersection == oracle, || {
            format!("Q={q} k={k}: validator {} vs oracle {oracle}", v.max_pairwise_intersection)
        })?;
        pairs += s.num_cliques() * (s.num_cliques() - 1) / 2;
    }
    Ok(format!("{pairs} clique pairs within ell = k - 1"))
}

fn c03_alpha() -> Result<String, String> {
    let mut worst = 0;
    let mut brute_checked = 0;
    for q in [5u64, 7] {
        let s = build_polynomial_system(q, 3).map_err(|e| e.to_string())?;
        let h = expand_to_kgraph(&s, 3).map_err(|e| e.to_string())?;
        let r = exact_independence_number(&h, u64::MAX);
        ensure(r.exact && r.value <= 5 && independent(&h, r.independent_set().unwrap()), || {
            format!("Q={q}: alpha = {}", r.value)
        })?;
        worst = worst.max(r.value);
        for seed in 0..20 {
            let w = random_restriction(&s, q as usize, 0.5, seed, 0).map_err(|e| e.to_string())?;
            let sub = h.induced(&w.w);
            let r = exact_independence_number(&sub, u64::MAX);
            ensure(r.exact && r.value <= 5 && independent(&sub, r.independent_set().unwrap()), || {
                format!("Q={q} seed {seed}: alpha = {}", r.value)
            })?;
            if sub.n <= 18 {
                ensure(brute_alpha(&sub) == r.value, || format!("Q={q} seed {seed}: brute force disagrees"))?;
                brute_checked += 1;
            }
            worst = worst.max(r.value);
        }
    }
    Ok(format!("max alpha {worst} <= 5 over 42 graphs, {brute_checked} confirmed by brute force"))
}

fn c04_prop2_chi() -> Result<String, String> {
    let s = build_enlarged_plane_system(9, 4).map_err(|e| e.to_string())?;
    let g = expand_to_kgraph(&s, 2).map_err(|e| e.to_string())?;
    // the p^2 = 4 plane points are pairwise adjacent
    let edges: HashSet<&[u32]> = g.edges.iter().map(Vec::as_slice).collect();
    let clique = (0..4u32).all(|a| (a + 1..4).all(|b| edges.contains(&[a, b][..])));
    ensure(clique, || "plane points do not form a 4-clique".into())?;
    let r = exact_chromatic_number(&g, u64::MAX);
    let c = r.coloring().ok_or("no coloring certificate")?;
    ensure(r.exact && r.value >= 4 && is_proper(&g, c) && c.num_colors == r.value, || {
        format!("chi = {}, exact {}", r.value, r.exact)
    })?;
    Ok(format!("chi = {} >= 4 on {} cliques", r.value, s.num_cliques()))
}

fn c05_process() -> Result<String, String> {
    let mut max_e = 0;
    for (n, q) in [(100usize, 5usize), (200, 8)] {
        let pair_cap = (n * (n - 1) / (q * (q - 1))) as u64;
        for seed in 0..50 {
            let t = run_greedy_process(n, q, seed, None, default_reject_limit(n)).map_err(|e| e.to_string())?;
            let mut seen = vec![false; n * n];
            let mut linear = true;
            for set in &t.accepted {
                for (i, &a) in set.iter().enumerate() {
                    for &b in &set[i + 1..] {
                        let slot = &mut seen[a as usize * n + b as usize];
                        linear &= !*slot;
                        *slot = true;
                    }
                }
            }
            let v = t.to_clique_system().validate_ell().map_err(|e| e.to_string())?;
            let e = t.accepted.len() as u64;
            ensure(linear && v.ok, || format!("n={n} q={q} seed {seed}: two sets share a pair"))?;
            ensure(e <= pair_cap && e * ((q * q) as u64) < ((n * n) as u64), || {
                format!("n={n} q={q} seed {seed}: e = {e}")
            })?;
            max_e = max_e.max(e);
        }
    }
    Ok(format!("100 traces linear, largest e {max_e}"))
}

/// Caps by filtering every subset of points against every line.
fn brute_caps(plane: &IncidencePlane) -> Vec<u64> {
    let n = plane.num_points();
    let masks: Vec<u32> = plane.lines.iter().map(|l| l.iter().fold(0, |m, &p| m | 1 << p)).collect();
    let mut counts = vec![0u64; n + 1];
    for s in 0u32..1 << n {
        if masks.iter().all(|m| (s & m).count_ones() <= 2) {
            counts[s.count_ones() as usize] += 1;
        }
    }
    counts
}

fn c06_caps() -> Result<String, String> {
    let plane = |q| build_affine_plane(q).map_err(|e| e.to_string());
    let r2 = enumerate_caps(&plane(2)?, None, true, u64::MAX);
    ensure(r2.total == 16, || format!("I_2 = {}", r2.total))?;
    let r3 = enumerate_caps(&plane(3)?, None, true, u64::MAX);
    ensure(r3.count(3) == 72 && r3.max_cap == 4, || format!("I_(3,3) = {}, max {}", r3.count(3), r3.max_cap))?;
    let p4 = plane(4)?;
    let r4 = enumerate_caps(&p4, None, true, u64::MAX);
    let brute = brute_caps(&p4);
    ensure(r4.exhaustive && brute.iter().sum::<u64>() == r4.total, || "q=4 totals differ".into())?;
    for (t, &b) in brute.iter().enumerate() {
        ensure(r4.count(t) == b, || format!("q=4 t={t}: {} vs brute {b}", r4.count(t)))?;
    }
    Ok(format!("I_2 = 16, I_(3,3) = 72, max cap 4, q=4 matches brute force ({} caps)", r4.total))
}

fn product_bound(q: u64, t: u64) -> BigRational {
    let r = |v: u64| BigRational::from_integer(BigInt::from(v));
    let mut b = r(q.pow(4));
    for i in 2..t {
        b *= std::cmp::min(r(q * q), r(q.pow(3)) / r(binom(i, 2)));
    }
    b / r((1..=t).product())
}

fn c07_cap_bound() -> Result<String, String> {
    let mut tightest = 0.0f64;
    for q in [3u64, 4, 5] {
        let r = enumerate_caps(&build_affine_plane(q).map_err(|e| e.to_string())?, None, true, u64::MAX);
        ensure(r.exhaustive, || format!("q={q}: census incomplete"))?;
        for t in 3..=q + 2 {
            let bound = product_bound(q, t);
            ensure(cap_bound_exact(q as usize, t as usize).ok() == Some(bound.clone()), || {
                format!("q={q} t={t}: library bound differs")
            })?;
            let count = BigRational::from_integer(BigInt::from(r.count(t as usize)));
            ensure(count <= bound, || format!("q={q} t={t}: {} caps exceeds {bound}", r.count(t as usize)))?;
            tightest = tightest.max(r.count(t as usize) as f64 / r.bounds[&(t as usize)]);
        }
    }
    Ok(format!("all counts within bound, largest ratio {tightest:.4}"))
}

fn c08_spectral() -> Result<String, String> {
    for q in [2u64, 3, 4, 5, 7] {
        let s = second_singular_value(&build_affine_plane(q).map_err(|e| e.to_string())?);
        ensure((s - (q as f64).sqrt()).abs() < 1e-9, || format!("q={q}: second singular value {s}"))?;
    }
    for q in [3u64, 5, 7] {
        let p = build_affine_plane(q).map_err(|e| e.to_string())?;
        let checks = sample_mixing_checks(&p, 1000, 2024);
        ensure(checks.len() == 1000, || "wrong sample count".into())?;
        for c in &checks {
            let xs: HashSet<u32> = c.x.iter().copied().collect();
            let observed: usize = c.y.iter().map(|&l| p.lines[l as usize].iter().filter(|v| xs.contains(v)).count()).sum();
            let size = (c.x.len() * c.y.len()) as f64;
            let dev = (observed as f64 - size / q as f64).abs();
            let holds = dev < (q as f64 * size).sqrt() || (size == 0.0 && dev == 0.0);
            ensure(observed as u64 == c.observed && holds && c.holds, || {
                format!("q={q}: |X|={} |Y|={} observed {observed}", c.x.len(), c.y.len())
            })?;
        }
    }
    Ok("second singular value sqrt(q); 3000 mixing samples hold".into())
}

fn c09_cap_traces() -> Result<String, String> {
    let mut steps = 0;
    for q in [5u64, 7, 9] {
        let p = build_affine_plane(q).map_err(|e| e.to_string())?;
        let through = p.lines_through();
        for seed in 0..100 {
            let t = greedy_cap_extension_trace(&p, seed);
            ensure(t.cap.len() <= q as usize + 2 && t.rows.len() + 1 == t.cap.len(), || {
                format!("q={q} seed {seed}: cap of size {}", t.cap.len())
            })?;
            for row in &t.rows {
                let chosen: HashSet<u32> = t.cap[..row.i].iter().copied().collect();
                let blocked: HashSet<usize> = (0..p.num_lines())
                    .filter(|&l| p.lines[l].iter().filter(|v| chosen.contains(v)).count() >= 2)
                    .collect();
                let free = through.iter().filter(|ls| ls.iter().all(|&l| !blocked.contains(&(l as usize)))).count();
                let pairs = binom(row.i as u64, 2);
                ensure(blocked.len() as u64 == pairs && row.z_size == blocked.len(), || {
                    format!("q={q} seed {seed} i={}: |Z| = {} vs {pairs}", row.i, blocked.len())
                })?;
                ensure(row.x_size == free && free as u64 * pairs <= q.pow(3), || {
                    format!("q={q} seed {seed} i={}: |X| = {free}", row.i)
                })?;
                steps += 1;
            }
            ensure(t.rows.last().is_some_and(|r| r.x_size == 0), || format!("q={q} seed {seed}: cap not maximal"))?;
        }
    }
    Ok(format!("{steps} steps over 300 traces"))
}

fn c10_coloring() -> Result<String, String> {
    let err = |e: cliquesys::Error| e.to_string();
    let mut corpus: Vec<(String, CliqueSystem)> = Vec::new();
    for (q, k) in POLY_PARAMS {
        let s = build_polynomial_system(q, k).map_err(err)?;
        let w = random_restriction(&s, 3, 0.5, q, 200).map_err(err)?;
        if !w.failed {
            corpus.push((format!("pad({q},{k})"), pad_cliques(&w, 3).map_err(err)?));
        }
        corpus.push((format!("poly({q},{k})"), s));
    }
    for q in [3u64, 4, 5, 7] {
        corpus.push((format!("plane({q})"), build_affine_plane(q).map_err(err)?.to_clique_system()));
    }
    for (e, q) in [(9u64, 4u64), (20, 5), (40, 7)] {
        corpus.push((format!("prop2({e},{q})"), build_enlarged_plane_system(e, q).map_err(err)?));
    }
    for seed in 0..5 {
        let t = run_greedy_process(60, 5, seed, None, 600).map_err(err)?;
        corpus.push((format!("process({seed})"), t.to_clique_system()));
    }
    let mut greedy_runs = 0;
    for (name, s) in &corpus {
        for k in (2..=s.ell + 1).chain([3]).collect::<HashSet<_>>() {
            if k > s.q || binom(s.q as u64, k as u64) * s.num_cliques() as u64 > 200_000 {
                continue;
            }
            let g = expand_to_kgraph(s, k).map_err(err)?;
            let c = greedy_coloring(&g, 17);
            ensure(is_proper(&g, &c), || format!("{name} k={k}: greedy coloring improper"))?;
            greedy_runs += 1;
            if s.ell == 1 {
                let sc = split_coloring(s, k, 17).map_err(err)?;
                ensure(is_proper(&g, &sc.coloring), || format!("{name} k={k}: split coloring improper"))?;
            }
        }
    }

    let mut high = 0;
    for seed in 0..20u64 {
        let q = 5 + (seed % 3) as usize;
        let k = 2 + (seed % 2) as usize;
        let s = if seed % 2 == 0 {
            hub_system(2 + (seed % 3) as usize, 20 + 2 * seed as usize, q, (seed % 5) as usize)
        } else {
            run_greedy_process(70, q, seed, None, 700).map_err(err)?.to_clique_system()
        };
        ensure(max_intersection(&s) <= 1, || format!("seed {seed}: instance is not linear"))?;
        let r = split_coloring(&s, k, seed).map_err(err)?;
        let g = expand_to_kgraph(&s, k).map_err(err)?;
        ensure(is_proper(&g, &r.coloring), || format!("seed {seed}: split coloring improper"))?;

        let (e, qq) = (s.num_cliques() as f64, q as f64);
        let d = (e * qq.powi(2 * (k as i32 - 1))).sqrt().ceil() as u64;
        let mut deg = vec![0u64; g.n];
        for edge in &g.edges {
            for &v in edge {
                deg[v as usize] += 1;
            }
        }
        let b: Vec<u32> = (0..g.n as u32).filter(|&v| deg[v as usize] > d).collect();
        let incidences = k as u64 * s.num_cliques() as u64 * binom(q as u64, k as u64);
        let bset: HashSet<u32> = b.iter().copied().collect();
        let mut inner = vec![0u64; g.n];
        for edge in g.edges.iter().filter(|e| e.iter().all(|v| bset.contains(v))) {
            for &v in edge {
                inner[v as usize] += 1;
            }
        }
        let max_inner = inner.iter().copied().max().unwrap_or(0);
        ensure(r.threshold == d && r.high_size == b.len(), || format!("seed {seed}: split sets differ"))?;
        ensure(b.len() as u64 * d <= incidences && r.high_size_bound_holds, || {
            format!("seed {seed}: |B| = {} too large", b.len())
        })?;
        let rhs = (b.len() as u64).saturating_sub(1) * binom(q as u64 - 1, k as u64 - 1);
        ensure(max_inner * (q as u64 - 1) <= rhs && r.high_degree_bound_holds, || {
            format!("seed {seed}: max degree {max_inner} in H[B]")
        })?;
        high += b.len();
    }
    Ok(format!("{greedy_runs} corpus colorings proper; 20 split instances, {high} high-degree vertices"))
}

fn c11_cherries() -> Result<String, String> {
    for (q, expected) in [(5u64, 300u64), (3, 0)] {
        let g = build_affine_plane(q).map_err(|e| e.to_string())?.collinear_triples();
        let mut codeg: HashMap<(u32, u32), u64> = HashMap::new();
        for e in &g.edges {
            for (a, b) in [(e[0], e[1]), (e[0], e[2]), (e[1], e[2])] {
                *codeg.entry((a, b)).or_default() += 1;
            }
        }
        let formula: u64 = codeg.values().map(|&c| binom(c, 3)).sum();
        let found = find_cherries(&g).map_err(|e| e.to_string())?.len() as u64;
        ensure(formula == expected && found == expected, || {
            format!("q={q}: {found} found, {formula} by codegree, expected {expected}")
        })?;
    }
    Ok("AG(2,5): 300, AG(2,3): 0".into())
}

fn bin(args: &[&str], dir: &Path) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_cliquesys"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn c12_determinism() -> Result<String, String> {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let setup: &[(&str, &[&str])] = &[
        ("poly52.json", &["construct", "poly", "--Q", "5", "--k", "2"]),
        ("plane3.json", &["construct", "plane", "--q", "3"]),
        ("plane5.json", &["construct", "plane", "--q", "5"]),
        ("restr.json", &["restrict", "--in", "poly52.json", "--q", "3", "--seed", "3"]),
        ("proc.json", &["process", "--n", "40", "--q", "4", "--seed", "1"]),
    ];
    for (file, args) in setup {
        let (out, code) = bin(args, &dir);
        ensure(code == 0, || format!("{args:?} exited {code}"))?;
        std::fs::write(dir.join(file), out).map_err(|e| e.to_string())?;
    }
    let commands: &[&[&str]] = &[
        &["construct", "prop2", "--e", "9", "--q", "4"],
        &["restrict", "--in", "poly52.json", "--q", "3", "--seed", "3"],
        &["pad", "--in", "restr.json"],
        &["expand", "--in", "plane3.json", "--k", "3"],
        &["process", "--n", "100", "--q", "5", "--seed", "7"],
        &["color", "--in", "proc.json", "--k", "3", "--seed", "5"],
        &["color", "--in", "proc.json", "--method", "split", "--seed", "5"],
        &["alpha", "--in", "proc.json", "--k", "3"],
        &["chi", "--in", "plane3.json", "--k", "3"],
        &["caps", "--q", "4", "--trace", "--seed", "9"],
        &["spectrum", "--q", "5", "--mixing", "100", "--seed", "2"],
        &["cherries", "--in", "plane5.json", "--prob", "0.5", "--seed", "4"],
        &["verify", "--in", "proc.json"],
    ];
    for args in commands {
        let (a, ca) = bin(args, &dir);
        let (b, cb) = bin(args, &dir);
        ensure(ca == 0 && cb == 0, || format!("{args:?} exited {ca}/{cb}"))?;
        ensure(a == b, || format!("{args:?}: outputs differ"))?;
        let v: serde_json::Value = serde_json::from_slice(&a).map_err(|e| format!("{args:?}: {e}"))?;
        let prov = &v["provenance"];
        ensure(prov["tool_version"].is_string() && prov["config"]["argv"].as_array().map(Vec::len) == Some(args.len()), || {
            format!("{args:?}: provenance lacks version or config")
        })?;
    }
    Ok(format!("{} commands byte-identical on rerun", commands.len()))
}

fn main() {
    let criteria: [(&str, Duration, Check); 12] = [
        ("polynomial system clique count", Duration::from_secs(4), c01_poly_counts),
        ("polynomial system intersections", Duration::from_secs(10), c02_poly_ell),
        ("independence number certification", Duration::from_secs(60), c03_alpha),
        ("enlarged plane chromatic number", Duration::from_secs(5), c04_prop2_chi),
        ("greedy process bounds", Duration::from_secs(60), c05_process),
        ("cap census", Duration::from_secs(120), c06_caps),
        ("cap count bound", Duration::from_secs(300), c07_cap_bound),
        ("incidence spectrum and mixing", Duration::from_secs(60), c08_spectral),
        ("greedy cap traces", Duration::from_secs(30), c09_cap_traces),
        ("coloring properness", Duration::from_secs(60), c10_coloring),
        ("cherries", Duration::from_secs(5), c11_cherries),
        ("determinism", Duration::from_secs(30), c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(d) => (false, d),
        };
        failed += !ok as usize;
        println!(
            "{} {:>2} {:<36} {:>8.2}s / {:>3}s  {}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            name,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            detail
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
