use std::fmt::Write as _;

use cliquesys::audit::{run_audit, Scale, CHECKS};
use cliquesys::caps::{enumerate_caps, greedy_cap_extension_trace, sample_mixing_checks, singular_values};
use cliquesys::constructions::{
    build_affine_plane, build_enlarged_plane_system, build_polynomial_system, default_restriction_prob,
    pad_cliques, random_restriction, regime_warning,
};
use cliquesys::hypergraph::{cherry_restriction_experiment, expand_to_kgraph, find_cherries, CliqueSystem, KGraph};
use cliquesys::io::{Document, Envelope};
use cliquesys::process::{default_reject_limit, process_stats, run_greedy_process, AlphaMethod, ProcessTrace};
use cliquesys::solvers::{
    exact_chromatic_number, exact_independence_number, greedy_coloring, split_coloring, verify_coloring,
};

use crate::output::{csv_text, emit, emit_json, read_document, run_provenance, CmdResult, Failure, Status};
use crate::{AuditScale, Cli, ColorMethod, Command, Construct, Format};

pub fn run(cli: &Cli, argv: &[String]) -> CmdResult<Status> {
    let common = &cli.common;
    let out = common.out.as_deref();
    let seed = common.seed;
    let extra = run_provenance(argv, seed);
    let json_only = |name: &str| -> CmdResult<()> {
        match common.format {
            Some(Format::Csv) => Err(Failure::params(format!("{name} has no csv output"))),
            _ => Ok(()),
        }
    };
    let input = || read_document(common.input.as_deref());
    let finish = |doc: Document, status: Status| -> CmdResult<Status> {
        emit_json(out, &Envelope::new(doc), &extra)?;
        Ok(status)
    };

    match &cli.command {
        Command::Construct(kind) => {
            json_only("construct")?;
            let doc = match *kind {
                Construct::Poly { field_order, k } => Document::CliqueSystem(build_polynomial_system(field_order, k)?),
                Construct::Plane { q } => Document::Plane(build_affine_plane(q)?),
                Construct::Prop2 { e, q } => Document::CliqueSystem(build_enlarged_plane_system(e, q)?),
            };
            finish(doc, Status::Ok)
        }
        Command::Restrict { q, prob, max_resamples } => {
            json_only("restrict")?;
            let system = as_system(input()?.document)?;
            let prob = prob.unwrap_or_else(|| default_restriction_prob(*q, system.q));
            if let Some(w) = regime_warning(system.num_cliques() as u64, *q as u64, system.ell as u32 + 1) {
                log::warn!("{w}");
            }
            let r = random_restriction(&system, *q, prob, seed, *max_resamples)?;
            let status = if r.failed { Status::BudgetExhausted } else { Status::Ok };
            finish(Document::Restriction(r), status)
        }
        Command::Pad { q } => {
            json_only("pad")?;
            let Document::Restriction(r) = input()?.document else {
                return Err(Failure::input("pad expects a restriction document"));
            };
            if r.failed {
                return Err(Failure::input("restriction failed; some trace is larger than its target"));
            }
            finish(Document::CliqueSystem(pad_cliques(&r, q.unwrap_or(r.q_target))?), Status::Ok)
        }
        Command::Expand { k } => {
            json_only("expand")?;
            let system = as_system(input()?.document)?;
            finish(Document::Kgraph(expand_to_kgraph(&system, *k)?), Status::Ok)
        }
        Command::Process { n, q, target_e, reject_limit, system, stats_k } => {
            let limit = reject_limit.unwrap_or_else(|| default_reject_limit(*n));
            let trace = run_greedy_process(*n, *q, seed, *target_e, limit)?;
            if common.format == Some(Format::Csv) {
                let text = format!("{}\n{}\n", ProcessTrace::csv_header(), trace.csv_row());
                emit(out, &text)?;
                return Ok(Status::Ok);
            }
            if *system {
                return finish(Document::CliqueSystem(trace.to_clique_system()), Status::Ok);
            }
            match stats_k {
                Some(k) => {
                    let stats = process_stats(&trace, *k, seed, common.budget)?;
                    let status = if stats.alpha_method == AlphaMethod::BudgetLowerBound {
                        Status::BudgetExhausted
                    } else {
                        Status::Ok
                    };
                    finish(Document::ProcessStats(stats), status)
                }
                None => finish(Document::ProcessTrace(trace), Status::Ok),
            }
        }
        Command::Color { method, k } => {
            json_only("color")?;
            let doc = input()?.document;
            match method {
                ColorMethod::Greedy => {
                    let graph = as_graph(doc, *k)?;
                    finish(Document::Coloring(greedy_coloring(&graph, seed)), Status::Ok)
                }
                ColorMethod::Split => {
                    let system = as_system(doc)?;
                    let k = k.unwrap_or(system.ell + 1);
                    finish(Document::SplitColoring(split_coloring(&system, k, seed)?), Status::Ok)
                }
            }
        }
        Command::Alpha { k } => {
            json_only("alpha")?;
            let graph = as_graph(input()?.document, *k)?;
            let r = exact_independence_number(&graph, common.budget);
            let status = if r.exact { Status::Ok } else { Status::BudgetExhausted };
            finish(Document::SolveResult(r), status)
        }
        Command::Chi { k } => {
            json_only("chi")?;
            let graph = as_graph(input()?.document, *k)?;
            let r = exact_chromatic_number(&graph, common.budget);
            let status = if r.exact { Status::Ok } else { Status::BudgetExhausted };
            finish(Document::SolveResult(r), status)
        }
        Command::Caps { q, max_t, list, trace } => {
            let plane = build_affine_plane(*q)?;
            if *trace {
                let t = greedy_cap_extension_trace(&plane, seed);
                let status = if t.all_rows_ok() { Status::Ok } else { Status::CheckFailed };
                if common.format == Some(Format::Csv) {
                    emit(out, &csv_text(&t.rows)?)?;
                    return Ok(status);
                }
                return finish(Document::CapTrace(t), status);
            }
            let report = enumerate_caps(&plane, *max_t, !list, common.budget);
            let status = if report.exhaustive { Status::Ok } else { Status::BudgetExhausted };
            if common.format == Some(Format::Csv) {
                emit(out, &report.to_csv())?;
                return Ok(status);
            }
            finish(Document::CapReport(report), status)
        }
        Command::Spectrum { q, mixing } => {
            json_only("spectrum")?;
            let plane = build_affine_plane(*q)?;
            match mixing {
                Some(samples) => {
                    let checks = sample_mixing_checks(&plane, *samples, seed);
                    let all_hold = checks.iter().all(|c| c.holds);
                    let status = if all_hold { Status::Ok } else { Status::CheckFailed };
                    finish(Document::Mixing { q: plane.q, samples: *samples, all_hold, checks }, status)
                }
                None => {
                    let values = singular_values(&plane);
                    let second = values.get(1).copied().unwrap_or(0.0);
                    finish(Document::Spectrum { q: plane.q, singular_values: values, second }, Status::Ok)
                }
            }
        }
        Command::Cherries { prob } => {
            json_only("cherries")?;
            let graph = as_graph(input()?.document, Some(3))?;
            match prob {
                Some(p) => finish(Document::CherryExperiment(cherry_restriction_experiment(&graph, *p, seed)?), Status::Ok),
                None => {
                    let cherries = find_cherries(&graph)?;
                    finish(Document::Cherries { count: cherries.len(), cherries }, Status::Ok)
                }
            }
        }
        Command::Verify { coloring, k } => {
            json_only("verify")?;
            let doc = input()?.document;
            if let Some(path) = coloring {
                let Document::Coloring(c) = read_document(Some(path))?.document else {
                    return Err(Failure::input("--coloring expects a coloring document"));
                };
                let graph = as_graph(doc, *k)?;
                let check = verify_coloring(&graph, &c)?;
                let status = if check.proper { Status::Ok } else { Status::CheckFailed };
                return finish(Document::ColoringCheck(check), status);
            }
            if let Document::Plane(p) = &doc {
                p.validate().map_err(|e| Failure::input(format!("not an affine plane: {e}")))?;
            }
            let system = as_system(doc)?;
            let v = system.validate_ell()?;
            let status = if v.ok { Status::Ok } else { Status::CheckFailed };
            finish(Document::Validation(v), status)
        }
        Command::Audit { scale, inject_fault } => {
            if let Some(f) = inject_fault {
                if !CHECKS.iter().any(|(id, _)| id == f) {
                    return Err(Failure::params(format!("unknown check {f}")));
                }
            }
            let scale = match scale {
                AuditScale::Small => Scale::Small,
                AuditScale::Medium => Scale::Medium,
            };
            let rows = run_audit(scale, inject_fault.as_deref());
            let status = if rows.iter().all(|r| r.passed) { Status::Ok } else { Status::CheckFailed };
            let text = match common.format {
                Some(Format::Csv) => csv_text(&rows)?,
                Some(Format::Json) => serde_json::to_string_pretty(&rows).map_err(Failure::params)? + "\n",
                None => {
                    let mut t = format!("{:<16} {:<6} {:>8}  detail\n", "check", "result", "ms");
                    for r in &rows {
                        let mark = if r.passed { "PASS" } else { "FAIL" };
                        let _ = writeln!(t, "{:<16} {:<6} {:>8}  {}", r.id, mark, r.millis, r.detail);
                    }
                    let passed = rows.iter().filter(|r| r.passed).count();
                    let _ = writeln!(t, "{passed}/{} checks passed", rows.len());
                    t
                }
            };
            emit(out, &text)?;
            Ok(status)
        }
    }
}

fn as_system(doc: Document) -> CmdResult<CliqueSystem> {
    let system = match doc {
        Document::CliqueSystem(s) => s,
        Document::Plane(p) => p.to_clique_system(),
        Document::ProcessTrace(t) => {
            check_trace(&t)?;
            t.to_clique_system()
        }
        other => {
            let name = Envelope::new(other).type_name();
            return Err(Failure::input(format!("expected a clique system, plane or process trace, got {name}")));
        }
    };
    system.check_structure().map_err(Failure::input)?;
    Ok(system)
}

/// A k-graph document as is, anything else through its clique system.
/// `k` defaults to one more than the system's intersection bound.
fn as_graph(doc: Document, k: Option<usize>) -> CmdResult<KGraph> {
    if let Document::Kgraph(g) = doc {
        g.check_structure().map_err(Failure::input)?;
        if let Some(k) = k.filter(|&k| k != g.k) {
            return Err(Failure::params(format!("input is a {}-graph, not a {k}-graph", g.k)));
        }
        return Ok(g);
    }
    let system = as_system(doc)?;
    let k = k.unwrap_or(system.ell + 1);
    Ok(expand_to_kgraph(&system, k)?)
}

fn check_trace(t: &ProcessTrace) -> CmdResult<()> {
    let bad = t.accepted.iter().position(|s| {
        s.len() != t.q || s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&v| v as usize >= t.n)
    });
    match bad {
        Some(i) => Err(Failure::input(format!("process trace set {i} is not a sorted {}-subset of 0..{}", t.q, t.n))),
        None => Ok(()),
    }
}
