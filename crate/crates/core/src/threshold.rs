//! Completion thresholds at small sizes: the largest `k` such that every
//! partial configuration with at most `k` queens completes, exactly or
//! fractionally.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::board::{unattacked, PartialConfig, Square, Symmetry};
use crate::error::{QueensError, Result};
use crate::exact::{complete, for_each_completion, Completion, SolveBudget};
use crate::lp::{max_fractional_completion, LP_MAX_N};

/// Largest `n` the exhaustive scan accepts; squares fit a `u128` mask.
pub const QC_EXHAUSTIVE_MAX_N: usize = 9;

/// Node budget per exact solve in sampled mode and in probes.
const SAMPLE_NODE_LIMIT: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QcScanRow {
    pub n: usize,
    /// `false` for sampled rows, whose thresholds are only upper bounds
    pub exhaustive: bool,
    /// number of complete configurations (exhaustive rows only)
    pub solutions: Option<u64>,
    /// `None` when not even the empty board completes (no configuration exists)
    pub qc: Option<usize>,
    /// smallest incompletable configuration found, canonical under the board symmetries
    pub witness: Option<Vec<[usize; 2]>>,
    pub qc_star: Option<usize>,
    /// smallest configuration without a fractional completion
    pub fractional_witness: Option<Vec<[usize; 2]>>,
    /// configurations examined up to symmetry
    pub configs_checked: u64,
    pub lp_solves: u64,
}

fn mask_of(queens: &[Square], n: usize) -> u128 {
    queens.iter().fold(0, |m, q| m | 1u128 << q.index(n))
}

fn is_canonical(queens: &[Square], n: usize) -> bool {
    let own = mask_of(queens, n);
    Symmetry::ALL.iter().all(|&s| {
        let moved: Vec<Square> = queens.iter().map(|&q| s.apply(q, n)).collect();
        own <= mask_of(&moved, n)
    })
}

fn queens_list(cfg: &PartialConfig) -> Vec<[usize; 2]> {
    cfg.queens().iter().map(|q| [q.row, q.col]).collect()
}

/// Calls `visit` on every canonical valid configuration of exactly `k` queens,
/// squares taken in increasing index order. Stops when `visit` breaks.
fn for_each_canonical(n: usize, k: usize, visit: &mut dyn FnMut(&PartialConfig) -> ControlFlow<()>) -> Result<()> {
    fn go(
        cfg: &PartialConfig,
        from: usize,
        k: usize,
        visit: &mut dyn FnMut(&PartialConfig) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let n = cfg.n();
        if cfg.len() == k {
            return Ok(if is_canonical(cfg.queens(), n) {
                visit(cfg)
            } else {
                ControlFlow::Continue(())
            });
        }
        let occ = cfg.occupancy();
        for idx in from..n * n {
            let sq = Square::from_index(idx, n);
            if occ.attacks(sq) {
                continue;
            }
            if go(&cfg.with_queen(sq)?, idx + 1, k, visit)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
    go(&PartialConfig::empty(n)?, 0, k, visit).map(|_| ())
}

/// A fast sufficient test for having no fractional completion: too few
/// unattacked squares, or an empty row or column with none at all.
fn obviously_fractionally_incompletable(cfg: &PartialConfig) -> bool {
    let n = cfg.n();
    let free = unattacked(cfg);
    if free.len() < n - cfg.len() {
        return true;
    }
    let mut row_hit = vec![false; n + 1];
    let mut col_hit = vec![false; n + 1];
    for q in cfg.queens() {
        row_hit[q.row] = true;
        col_hit[q.col] = true;
    }
    for s in &free {
        row_hit[s.row] = true;
        col_hit[s.col] = true;
    }
    row_hit[1..].iter().chain(&col_hit[1..]).any(|&h| !h)
}

/// Exhaustive threshold scan for `n <= 9`, with configurations considered up
/// to the eight board symmetries. A configuration completes exactly when it
/// is contained in one of the complete configurations; the LP runs only on
/// configurations that do not.
pub fn qc_exhaustive(n: usize) -> Result<QcScanRow> {
    if n == 0 {
        return Err(QueensError::EmptyBoard);
    }
    if n > QC_EXHAUSTIVE_MAX_N {
        return Err(QueensError::TooLarge {
            what: "exhaustive threshold scan",
            limit: QC_EXHAUSTIVE_MAX_N,
            got: n,
        });
    }
    let mut solutions = Vec::new();
    for_each_completion(&PartialConfig::empty(n)?, 0, |c| {
        solutions.push(mask_of(c.queens(), n));
        ControlFlow::Continue(())
    })?;
    let mut row = QcScanRow {
        n,
        exhaustive: true,
        solutions: Some(solutions.len() as u64),
        qc: None,
        witness: None,
        qc_star: None,
        fractional_witness: None,
        configs_checked: 0,
        lp_solves: 0,
    };
    if solutions.is_empty() {
        return Ok(row);
    }
    let completes = |cfg: &PartialConfig| {
        let m = mask_of(cfg.queens(), n);
        solutions.iter().any(|&s| s & m == m)
    };

    // exact threshold
    let mut first_bad: Option<(usize, PartialConfig)> = None;
    for k in 0..=n {
        let mut found = None;
        for_each_canonical(n, k, &mut |cfg| {
            row.configs_checked += 1;
            if completes(cfg) {
                ControlFlow::Continue(())
            } else {
                found = Some(cfg.clone());
                ControlFlow::Break(())
            }
        })?;
        if let Some(cfg) = found {
            first_bad = Some((k, cfg));
            break;
        }
    }
    let Some((k_int, witness)) = first_bad else {
        row.qc = Some(n);
        row.qc_star = Some(n);
        return Ok(row);
    };
    row.qc = Some(k_int - 1);
    row.witness = Some(queens_list(&witness));

    // fractional threshold: no configuration below k_int can fail fractionally
    let mut lp_error = None;
    for k in k_int..=n {
        let mut found = None;
        let mut lp_solves = 0;
        let mut checked = 0;
        for_each_canonical(n, k, &mut |cfg| {
            checked += 1;
            if completes(cfg) {
                return ControlFlow::Continue(());
            }
            let fails = if obviously_fractionally_incompletable(cfg) {
                true
            } else {
                lp_solves += 1;
                match max_fractional_completion(cfg) {
                    Ok(out) => !out.is_fractionally_completable(cfg),
                    Err(e) => {
                        lp_error = Some(e);
                        return ControlFlow::Break(());
                    }
                }
            };
            if fails {
                found = Some(cfg.clone());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        row.configs_checked += checked;
        row.lp_solves += lp_solves;
        if let Some(e) = lp_error {
            return Err(e);
        }
        if let Some(cfg) = found {
            row.qc_star = Some(k - 1);
            row.fractional_witness = Some(queens_list(&cfg));
            return Ok(row);
        }
    }
    row.qc_star = Some(n);
    Ok(row)
}

/// A random valid configuration of `k` queens, placed one at a time on
/// uniformly random unattacked squares; `None` if `attempts` tries all dead-end.
/// Full configurations fall back to completing a random single queen exactly.
pub fn random_config(n: usize, k: usize, rng: &mut ChaCha8Rng, attempts: usize) -> Result<Option<PartialConfig>> {
    'attempt: for _ in 0..attempts {
        let mut cfg = PartialConfig::empty(n)?;
        while cfg.len() < k {
            let free = unattacked(&cfg);
            let Some(&sq) = free.choose(rng) else { continue 'attempt };
            cfg = cfg.with_queen(sq)?;
        }
        return Ok(Some(cfg));
    }
    if k == n && n <= crate::exact::MAX_EXACT_N {
        for _ in 0..attempts {
            let idx = rng.gen_range(0..n * n);
            let seed = PartialConfig::new(n, [Square::from_index(idx, n)])?;
            if let Completion::Completed(full) = complete(&seed, SolveBudget::with_node_limit(SAMPLE_NODE_LIMIT))? {
                return Ok(Some(full));
            }
        }
    }
    Ok(None)
}

/// Sampled scan for larger `n`: for `k = 0, 1, ..` draws `trials` random
/// configurations and stops at the first `k` with an incompletable sample.
/// Thresholds are therefore upper bounds; budget-exhausted samples count as
/// undecided and prove nothing.
pub fn qc_sampled(n: usize, trials: usize, seed: u64) -> Result<QcScanRow> {
    if n > LP_MAX_N {
        return Err(QueensError::TooLarge {
            what: "sampled threshold scan",
            limit: LP_MAX_N,
            got: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut row = QcScanRow {
        n,
        exhaustive: false,
        solutions: None,
        qc: None,
        witness: None,
        qc_star: None,
        fractional_witness: None,
        configs_checked: 0,
        lp_solves: 0,
    };
    for k in 0..=n {
        for _ in 0..trials {
            let Some(cfg) = random_config(n, k, &mut rng, 100)? else { continue };
            row.configs_checked += 1;
            if row.qc.is_none() && complete(&cfg, SolveBudget::with_node_limit(SAMPLE_NODE_LIMIT))? == Completion::Incompletable {
                row.qc = Some(k.saturating_sub(1));
                row.witness = Some(queens_list(&cfg));
                if k == 0 {
                    // the empty board itself fails
                    row.qc = None;
                    return Ok(row);
                }
            }
            if row.qc_star.is_none() && row.qc.is_some() {
                let fails = obviously_fractionally_incompletable(&cfg) || {
                    row.lp_solves += 1;
                    !max_fractional_completion(&cfg)?.is_fractionally_completable(&cfg)
                };
                if fails {
                    row.qc_star = Some(k - 1);
                    row.fractional_witness = Some(queens_list(&cfg));
                    return Ok(row);
                }
            }
        }
    }
    Ok(row)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub integral_completable: usize,
    pub fractional_completable: usize,
    /// samples where the exact search ran out of budget
    pub undecided: usize,
    /// integrally completable samples without a fractional completion; always empty
    pub counterexamples: Vec<Vec<[usize; 2]>>,
}

impl ProbeReport {
    pub fn integral_fraction(&self) -> f64 {
        self.integral_completable as f64 / self.samples.max(1) as f64
    }

    pub fn fractional_fraction(&self) -> f64 {
        self.fractional_completable as f64 / self.samples.max(1) as f64
    }
}

/// Samples `trials` random size-`k` configurations and counts how many have
/// exact and fractional completions.
pub fn qc_star_probe(n: usize, k: usize, trials: usize, seed: u64) -> Result<ProbeReport> {
    if n > LP_MAX_N {
        return Err(QueensError::TooLarge {
            what: "linear programming",
            limit: LP_MAX_N,
            got: n,
        });
    }
    let mut report = ProbeReport {
        n,
        k,
        samples: 0,
        integral_completable: 0,
        fractional_completable: 0,
        undecided: 0,
        counterexamples: Vec::new(),
    };
    if k > n || n == 0 {
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let Some(cfg) = random_config(n, k, &mut rng, 100)? else { continue };
        report.samples += 1;
        let integral = match complete(&cfg, SolveBudget::with_node_limit(SAMPLE_NODE_LIMIT))? {
            Completion::Completed(_) => Some(true),
            Completion::Incompletable => Some(false),
            Completion::BudgetExhausted => None,
        };
        let fractional = !obviously_fractionally_incompletable(&cfg)
            && max_fractional_completion(&cfg)?.is_fractionally_completable(&cfg);
        match integral {
            Some(true) => report.integral_completable += 1,
            None => report.undecided += 1,
            Some(false) => {}
        }
        if fractional {
            report.fractional_completable += 1;
        } else if integral == Some(true) {
            report.counterexamples.push(queens_list(&cfg));
        }
    }
    Ok(report)
}
