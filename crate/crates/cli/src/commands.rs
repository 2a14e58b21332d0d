use std::path::Path;
use std::time::Instant;

use num::{BigRational, Signed};
use queens_core::constructions::{central_value_estimate, SquareWeighting};
use queens_core::exact::{EmbeddingOutcome, ENUMERATION_CEILING, MAX_EXACT_N};
use queens_core::rainbow::AugmentStrategy;
use queens_core::threshold::{random_config, QC_EXHAUSTIVE_MAX_N};
use queens_core::{
    central_embedding_any, complete as exact_complete, complete_via_pipeline, count_completions,
    max_fractional_completion, min_cover_value, min_embedding, near_diagonal_config, qc_exhaustive, qc_sampled,
    qc_star_probe, regularize_weighting, third_construction, verify_certificate, weighting_value,
    CertificateDocument, Completion, LineId, PartialConfig, PipelineOutcome, PipelineParams, QcScanRow,
    QueensError, Result, SolveBudget,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::input::BoardArgs;
use crate::output::{board_json, exit, Out};
use crate::{ConstructKind, PipelineArgs, ScanMode, Strategy, Suite};

/// Honors `QUEENS_THREADS` as a cap on worker threads.
pub fn configure_threads() {
    if let Some(k) = std::env::var("QUEENS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
}

impl PipelineArgs {
    fn params(&self, seed: u64) -> PipelineParams {
        PipelineParams {
            alpha: self.alpha,
            epsilon: self.epsilon,
            restarts: self.restarts,
            nibble_restarts: self.nibble_restarts,
            depth_bound: self.depth_bound,
            strategy: if self.staged { AugmentStrategy::Staged } else { AugmentStrategy::Bfs },
            seed,
            ..PipelineParams::default()
        }
    }
}

fn budget(nodes: u64) -> SolveBudget {
    SolveBudget::with_node_limit(nodes)
}

pub fn complete(
    out: &Out,
    board: &BoardArgs,
    strategy: Strategy,
    budget_nodes: u64,
    pipeline: &PipelineArgs,
    seed: u64,
) -> Result<i32> {
    let cfg = board.load()?;
    let n = cfg.n();
    let use_pipeline = match strategy {
        Strategy::Exact => false,
        Strategy::Pipeline => true,
        Strategy::Auto => n > MAX_EXACT_N,
    };
    if use_pipeline {
        let params = pipeline.params(seed);
        let report = complete_via_pipeline(&cfg, &params, &mut ChaCha8Rng::seed_from_u64(seed))?;
        for r in &report.records {
            out.record(serde_json::to_value(r).expect("records serialize"));
        }
        return Ok(match &report.outcome {
            PipelineOutcome::Completed(full) => {
                out.board(full);
                out.human(format!("completed (pipeline, {} restart(s))", report.restarts_used));
                out.record(json!({"command": "complete", "strategy": "pipeline", "outcome": "completed",
                                  "restarts": report.restarts_used, "board": board_json(full)}));
                exit::SUCCESS
            }
            PipelineOutcome::HeuristicFailure => {
                out.human("heuristic failure (inconclusive)");
                out.record(json!({"command": "complete", "strategy": "pipeline", "outcome": "heuristic-failure",
                                  "restarts": report.restarts_used}));
                exit::INCONCLUSIVE
            }
        });
    }
    Ok(match exact_complete(&cfg, budget(budget_nodes))? {
        Completion::Completed(full) => {
            out.board(&full);
            out.human("completed (exact)");
            out.record(json!({"command": "complete", "strategy": "exact", "outcome": "completed",
                              "board": board_json(&full)}));
            exit::SUCCESS
        }
        Completion::Incompletable => {
            out.human("incompletable (exhaustive)");
            out.record(json!({"command": "complete", "strategy": "exact", "outcome": "incompletable"}));
            exit::INCOMPLETABLE
        }
        Completion::BudgetExhausted => {
            out.human("node budget exhausted (inconclusive)");
            out.record(json!({"command": "complete", "strategy": "exact", "outcome": "budget-exhausted"}));
            exit::INCONCLUSIVE
        }
    })
}

pub fn count(out: &Out, board: &BoardArgs, cap: Option<u64>, budget_nodes: u64) -> Result<i32> {
    let cfg = board.load()?;
    if cfg.n() > ENUMERATION_CEILING && cap.is_none() {
        return Err(QueensError::Precondition(format!(
            "counting above n = {ENUMERATION_CEILING} needs an explicit --cap"
        )));
    }
    let b = SolveBudget {
        node_limit: budget_nodes,
        solution_cap: cap.unwrap_or(0),
    };
    let r = count_completions(&cfg, b)?;
    let capped = cap.is_some_and(|c| c > 0 && r.count >= c);
    let partial = r.exhausted && !capped;
    out.human(if r.exhausted {
        format!("at least {} completions ({})", r.count, if capped { "cap reached" } else { "budget exhausted" })
    } else {
        format!("{} completions", r.count)
    });
    out.record(json!({"command": "count", "count": r.count, "exact": !r.exhausted, "capped": capped,
                      "nodes": r.nodes}));
    Ok(if partial { exit::INCONCLUSIVE } else { exit::SUCCESS })
}

pub fn certify(out: &Out, board: &BoardArgs, path: Option<&Path>, budget_nodes: u64) -> Result<i32> {
    let cfg = board.load()?;
    let lp = match min_cover_value(&cfg) {
        Ok(lp) => lp,
        Err(QueensError::Numerical(msg)) => {
            out.human(format!("lp failure: {msg}"));
            out.record(json!({"command": "certify", "outcome": "lp-failure", "message": msg}));
            return Ok(exit::INCONCLUSIVE);
        }
        Err(e) => return Err(e),
    };
    let verdict = verify_certificate(&cfg, &lp.dual)?;
    if verdict.certified {
        let doc = CertificateDocument::new(&cfg, &lp.dual);
        if let Some(p) = path {
            std::fs::write(p, doc.to_json() + "\n")
                .map_err(|e| QueensError::Precondition(format!("cannot write {}: {e}", p.display())))?;
        }
        out.human(format!("certificate: value {} < {} = n - |Q'|; cannot be completed", verdict.value, verdict.bound));
        if path.is_none() {
            out.human(doc.to_json());
        }
        out.record(json!({"command": "certify", "outcome": "certificate", "value": verdict.value.to_string(),
                          "bound": verdict.bound.to_string(), "certificate": doc}));
        return Ok(exit::INCOMPLETABLE);
    }
    out.human(format!(
        "no LP certificate: fractional optimum {} >= n - |Q'| = {}",
        lp.optimal_value, verdict.bound
    ));
    let exact = if cfg.n() <= MAX_EXACT_N {
        Some(exact_complete(&cfg, budget(budget_nodes))?)
    } else {
        None
    };
    let (outcome, code) = match exact {
        Some(Completion::Completed(_)) => {
            out.human("completable, so no certificate can exist");
            ("completable", exit::SUCCESS)
        }
        Some(Completion::Incompletable) => {
            out.human("no LP certificate; integral incompletability confirmed by exhaustive search");
            ("incompletable-without-certificate", exit::INCOMPLETABLE)
        }
        _ => {
            out.human("completability undecided");
            ("no-certificate", exit::INCONCLUSIVE)
        }
    };
    out.record(json!({"command": "certify", "outcome": outcome, "fractional_optimum": lp.optimal_value.to_string(),
                      "bound": verdict.bound.to_string()}));
    Ok(code)
}

pub fn verify(out: &Out, file: &Path) -> Result<i32> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| QueensError::Precondition(format!("cannot read {}: {e}", file.display())))?;
    let doc = CertificateDocument::parse(&text)?;
    let report = doc.verify()?;
    let v = &report.verdict;
    let reason = if !v.cover.covered {
        let s = v.cover.first_violation.expect("an uncovered square");
        Some(format!("square ({}, {}) is covered by less than 1", s.row, s.col))
    } else if !report.value_matches {
        Some(format!("claimed value {} differs from the weight total {}", doc.value, v.value))
    } else if !v.certified {
        Some(format!("value {} is not below {}", v.value, v.bound))
    } else {
        None
    };
    match &reason {
        None => out.human(format!("PASS: value {} < {}", v.value, v.bound)),
        Some(r) => out.human(format!("FAIL: {r}")),
    }
    let violation = v.cover.first_violation.map(|s| [s.row, s.col]);
    out.record(json!({"command": "verify", "pass": reason.is_none(), "reason": reason,
                      "value": v.value.to_string(), "bound": v.bound.to_string(), "first_violation": violation}));
    Ok(if reason.is_none() { exit::SUCCESS } else { exit::INCONCLUSIVE })
}

fn print_board(out: &Out, cfg: &PartialConfig) {
    if cfg.n() <= 64 {
        out.board(cfg);
    } else {
        let list: Vec<String> = cfg.queens().iter().map(|q| format!("{}:{}", q.row, q.col)).collect();
        out.human(format!("queens: {}", list.join(",")));
    }
}

pub fn construct(out: &Out, kind: ConstructKind, n: usize) -> Result<i32> {
    match kind {
        ConstructKind::Central => {
            let inst = central_embedding_any(n)?;
            let v = verify_certificate(&inst.config, &inst.certificate)?;
            let estimate = (n % 2 == 1).then(|| central_value_estimate(inst.m, inst.t).to_string());
            out.human(format!(
                "central instance n = {n}: {} queens (m = {}, t = {})",
                inst.config.len(),
                inst.m,
                inst.t
            ));
            print_board(out, &inst.config);
            out.human(format!(
                "weighting value {} against n - |Q'| = {}; covers every unattacked square: {}",
                v.value, v.bound, v.cover.covered
            ));
            out.human(if v.certified { "certified: cannot be completed" } else { "not certified" });
            out.record(json!({"command": "construct", "kind": "central", "n": n, "m": inst.m, "t": inst.t,
                              "value": v.value.to_string(), "bound": v.bound.to_string(), "covered": v.cover.covered,
                              "certified": v.certified, "estimate": estimate,
                              "board": board_json(&inst.config),
                              "certificate": CertificateDocument::new(&inst.config, &inst.certificate)}));
        }
        ConstructKind::Third => {
            let cfg = third_construction(n)?;
            out.human(format!("{} queens in the central third", cfg.len()));
            print_board(out, &cfg);
            out.record(json!({"command": "construct", "kind": "third", "n": n, "board": board_json(&cfg)}));
        }
        ConstructKind::NearDiagonal => {
            let cfg = near_diagonal_config(n)?;
            print_board(out, &cfg);
            out.human(format!("diagonal distance sum {}", cfg.diagonal_distance_sum()));
            out.record(json!({"command": "construct", "kind": "near-diagonal", "n": n,
                              "distance_sum": cfg.diagonal_distance_sum(), "board": board_json(&cfg)}));
        }
        ConstructKind::Regularize => {
            let w = regularize_weighting(n)?;
            let quarters = |l: LineId| w.line_total_quarters(l);
            let lines_total = |diag: bool| LineId::all(n).filter(move |l| l.is_diagonal() == diag);
            let row_min = lines_total(false).map(quarters).min().unwrap_or(0);
            let row_max = lines_total(false).map(quarters).max().unwrap_or(0);
            let diag_max = lines_total(true).map(quarters).max().unwrap_or(0);
            let q = |v: u64| BigRational::new(v.into(), 4.into()).to_string();
            if n <= 32 {
                out.human(weight_grid(&w));
            }
            out.human(format!(
                "row/column totals in [{}, {}], diagonal totals at most {}",
                q(row_min),
                q(row_max),
                q(diag_max)
            ));
            let grid: Vec<Vec<u8>> = (1..=n)
                .map(|i| (1..=n).map(|j| w.quarters(queens_core::Square::new(i, j))).collect())
                .collect();
            out.record(json!({"command": "construct", "kind": "regularize", "n": n, "quarters": grid,
                              "line_total_min": q(row_min), "line_total_max": q(row_max),
                              "diagonal_total_max": q(diag_max)}));
        }
    }
    Ok(exit::SUCCESS)
}

fn weight_grid(w: &SquareWeighting) -> String {
    let n = w.n();
    (1..=n)
        .rev()
        .map(|i| {
            (1..=n)
                .map(|j| match w.quarters(queens_core::Square::new(i, j)) {
                    2 => "1/2",
                    3 => "3/4",
                    _ => "  1",
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn qc_text(row: &QcScanRow) -> String {
    let Some(qc) = row.qc else {
        return format!("n = {}: no configuration exists", row.n);
    };
    let bound = if row.exhaustive { "" } else { "<= " };
    let star = row.qc_star.map_or("?".to_string(), |v| v.to_string());
    let witness = row.witness.as_ref().map_or(String::new(), |w| {
        let squares: Vec<String> = w.iter().map(|[r, c]| format!("({r},{c})")).collect();
        format!(", incompletable witness {}", squares.join(" "))
    });
    format!("n = {}: qc {bound}{qc}, qc* {bound}{star}{witness}", row.n)
}

pub fn qc_scan(out: &Out, n_min: usize, n_max: usize, mode: ScanMode, trials: usize, seed: u64) -> Result<i32> {
    if n_min == 0 || n_min > n_max {
        return Err(QueensError::Precondition(format!("empty size range {n_min}..={n_max}")));
    }
    if mode == ScanMode::Exhaustive && n_max > QC_EXHAUSTIVE_MAX_N {
        return Err(QueensError::TooLarge {
            what: "exhaustive threshold scan",
            limit: QC_EXHAUSTIVE_MAX_N,
            got: n_max,
        });
    }
    let rows: Vec<Result<QcScanRow>> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let exhaustive = match mode {
                ScanMode::Exhaustive => true,
                ScanMode::Sampled => false,
                ScanMode::Auto => n <= QC_EXHAUSTIVE_MAX_N,
            };
            if exhaustive {
                qc_exhaustive(n)
            } else {
                qc_sampled(n, trials, seed ^ n as u64)
            }
        })
        .collect();
    for row in rows {
        let row = row?;
        out.human(qc_text(&row));
        let mut rec = serde_json::to_value(&row).expect("rows serialize");
        rec["record"] = json!("qc");
        out.record(rec);
    }
    out.record(json!({"command": "qc-scan", "n_min": n_min, "n_max": n_max}));
    Ok(exit::SUCCESS)
}

pub fn probe(out: &Out, n: usize, k: usize, trials: usize, seed: u64) -> Result<i32> {
    let r = qc_star_probe(n, k, trials, seed)?;
    out.human(format!(
        "n = {n}, k = {k}: {} samples, {} completable, {} fractionally completable, {} undecided, {} counterexamples",
        r.samples,
        r.integral_completable,
        r.fractional_completable,
        r.undecided,
        r.counterexamples.len()
    ));
    let mut rec = serde_json::to_value(&r).expect("reports serialize");
    rec["command"] = json!("probe");
    rec["integral_fraction"] = json!(r.integral_fraction());
    rec["fractional_fraction"] = json!(r.fractional_fraction());
    out.record(rec);
    Ok(exit::SUCCESS)
}

pub fn embed(out: &Out, board: &BoardArgs, n_ceiling: usize) -> Result<i32> {
    let cfg = board.load()?;
    Ok(match min_embedding(&cfg, n_ceiling)? {
        EmbeddingOutcome::Found(e) => {
            out.human(format!("n* = {}, offset ({}, {})", e.n_star, e.offset.0, e.offset.1));
            print_board(out, &e.completion);
            out.record(json!({"command": "embed", "outcome": "found", "n_star": e.n_star,
                              "offset": [e.offset.0, e.offset.1], "board": board_json(&e.completion)}));
            exit::SUCCESS
        }
        EmbeddingOutcome::NotFoundBelowCeiling => {
            out.human(format!("no completable embedding up to n = {n_ceiling}"));
            out.record(json!({"command": "embed", "outcome": "not-found", "n_ceiling": n_ceiling}));
            exit::INCONCLUSIVE
        }
    })
}

/// `"64,128,256"` or `"4..12"` (inclusive).
fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let bad = || QueensError::Parse {
        line: 1,
        column: 1,
        message: format!("expected sizes like 64,128 or 4..12, found {text:?}"),
    };
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        return if a <= b { Ok((a..=b).collect()) } else { Err(bad()) };
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

/// A per-instance seed mixing the run seed, the size and the trial index.
fn instance_seed(seed: u64, n: usize, trial: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((n as u64) << 32) ^ trial
}

pub fn bench(
    out: &Out,
    suite: Suite,
    sizes: &str,
    seeds: u64,
    timings: bool,
    pipeline: &PipelineArgs,
    seed: u64,
) -> Result<i32> {
    let sizes = parse_sizes(sizes)?;
    let jobs: Vec<(usize, u64)> = sizes.iter().flat_map(|&n| (0..seeds).map(move |s| (n, s))).collect();
    let started = Instant::now();
    let results: Vec<Result<(usize, Value)>> = jobs
        .par_iter()
        .map(|&(n, s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed, n, s));
            match suite {
                Suite::Pipeline => {
                    let cfg = random_config(n, n / 60, &mut rng, 100)?
                        .ok_or_else(|| QueensError::Precondition(format!("no random configuration at n = {n}")))?;
                    let t = Instant::now();
                    let report = complete_via_pipeline(&cfg, &pipeline.params(s), &mut rng)?;
                    Ok((n, json!({"seed": s, "success": report.completion().is_some(),
                                  "restarts": report.restarts_used, "ms": t.elapsed().as_millis() as u64})))
                }
                Suite::Lp => {
                    let k = rng.gen_range(0..=n / 2);
                    let cfg = random_config(n, k, &mut rng, 100)?.unwrap_or(PartialConfig::empty(n)?);
                    let t = Instant::now();
                    let packing = max_fractional_completion(&cfg)?;
                    let cover = min_cover_value(&cfg)?;
                    let gap = (&packing.optimal_value - &cover.optimal_value).abs();
                    let weak = weighting_value(&cover.dual) >= packing.primal.total()
                        && weighting_value(&packing.dual) >= cover.primal.total();
                    Ok((n, json!({"seed": s, "gap": gap.to_string(), "weak_duality": weak,
                                  "ms": t.elapsed().as_millis() as u64})))
                }
            }
        })
        .collect();
    let mut by_size: Vec<(usize, Vec<Value>)> = sizes.iter().map(|&n| (n, Vec::new())).collect();
    for r in results {
        let (n, v) = r?;
        by_size.iter_mut().find(|(m, _)| *m == n).expect("known size").1.push(v);
    }
    let mut all_ok = true;
    for (n, runs) in &by_size {
        let ms: u64 = runs.iter().map(|r| r["ms"].as_u64().unwrap_or(0)).sum();
        let mut rec = match suite {
            Suite::Pipeline => {
                let ok = runs.iter().filter(|r| r["success"] == json!(true)).count();
                out.human(format!("n = {n}: {ok}/{} completed", runs.len()));
                json!({"record": "bench", "suite": "pipeline", "n": n, "trials": runs.len(), "successes": ok,
                       "success_rate": ok as f64 / runs.len().max(1) as f64})
            }
            Suite::Lp => {
                let zero = runs.iter().all(|r| r["gap"] == json!("0"));
                let weak = runs.iter().all(|r| r["weak_duality"] == json!(true));
                all_ok &= zero && weak;
                out.human(format!(
                    "n = {n}: {} instances, duality gap {}, weak duality {}",
                    runs.len(),
                    if zero { "0 everywhere" } else { "NONZERO" },
                    if weak { "holds" } else { "VIOLATED" }
                ));
                json!({"record": "bench", "suite": "lp", "n": n, "instances": runs.len(), "all_gaps_zero": zero,
                       "weak_duality": weak})
            }
        };
        if timings {
            out.human(format!("  {ms} ms of solver time"));
            rec["ms"] = json!(ms);
        }
        out.record(rec);
    }
    let mut summary = json!({"command": "bench", "sizes": sizes, "seeds": seeds, "pass": all_ok});
    if timings {
        summary["wall_ms"] = json!(started.elapsed().as_millis() as u64);
    }
    out.record(summary);
    Ok(if all_ok { exit::SUCCESS } else { exit::INCONCLUSIVE })
}
