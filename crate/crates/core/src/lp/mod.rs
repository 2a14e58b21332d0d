//! Fractional completions, line weightings and certificates of incompletability.
//!
//! A line weighting `w` with values in `[0, 1]` covers a square when the
//! weights of its four lines sum to at least 1. If `w` covers every
//! unattacked square of a partial configuration `Q'` and its total value is
//! below `n - |Q'|`, then `Q'` has no completion. The packing LP over the
//! unattacked squares and the covering LP over the lines are dual to each
//! other; both are solved here, and every returned optimum is re-checked in
//! exact rational arithmetic before it is handed out.

pub mod certificate;
pub mod exact;
pub mod simplex;

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::board::{lines_of, unattacked, LineId, PartialConfig, Square};
use crate::error::{QueensError, Result};
use exact::{common_denominator, is_in_unit_interval, snap};
use simplex::{Problem, RowKind};

pub use certificate::{CertificateDocument, DocumentVerdict};

/// Largest board the LP layer accepts.
pub const LP_MAX_N: usize = 64;

/// Above this many unattacked squares the covering LP is solved by
/// constraint generation instead of with every square at once.
const FULL_COVER_ROWS: usize = 512;
const GENERATION_BATCH: usize = 128;
const MAX_DROP_ROUNDS: usize = 40;
const SNAP_DENOMINATOR: i64 = 1_000_000;
const SNAP_TOL: f64 = 1e-7;

/// Map from lines to weights in `[0, 1]`; absent lines weigh 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineWeighting {
    n: usize,
    weights: BTreeMap<LineId, BigRational>,
}

impl LineWeighting {
    pub fn new(n: usize) -> Self {
        LineWeighting {
            n,
            weights: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, line: LineId, weight: BigRational) -> Result<()> {
        line.check(self.n)?;
        if !is_in_unit_interval(&weight) {
            return Err(QueensError::Precondition(format!(
                "weight {weight} on {line} is outside [0, 1]"
            )));
        }
        if weight.is_zero() {
            self.weights.remove(&line);
        } else {
            self.weights.insert(line, weight);
        }
        Ok(())
    }

    pub fn get(&self, line: LineId) -> BigRational {
        self.weights.get(&line).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Nonzero weights in canonical line order.
    pub fn iter(&self) -> impl Iterator<Item = (LineId, &BigRational)> {
        self.weights.iter().map(|(&l, w)| (l, w))
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// Sum of the four line weights through `sq`.
    pub fn cover_sum(&self, sq: Square) -> BigRational {
        lines_of(sq, self.n).iter().map(|&l| self.get(l)).sum()
    }
}

/// `sum_L w(L)`.
pub fn weighting_value(w: &LineWeighting) -> BigRational {
    w.weights.values().sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCheck {
    pub covered: bool,
    /// The first square (in the given order) whose cover sum is below 1.
    pub first_violation: Option<Square>,
}

/// Checks `sum_{L through s} w(L) >= 1` for every `s`, exactly.
pub fn covers(w: &LineWeighting, squares: &[Square]) -> CoverCheck {
    let first_violation = match integer_weights(w) {
        Some((dense, den)) => squares.iter().copied().find(|&s| {
            let total: i128 = lines_of(s, w.n).iter().map(|l| dense[l.index(w.n)]).sum();
            total < den
        }),
        None => squares
            .iter()
            .copied()
            .find(|&s| w.cover_sum(s) < BigRational::one()),
    };
    CoverCheck {
        covered: first_violation.is_none(),
        first_violation,
    }
}

/// Numerators over a common denominator, when everything fits in `i128`.
fn integer_weights(w: &LineWeighting) -> Option<(Vec<i128>, i128)> {
    let den = common_denominator(w.weights.values());
    // four weights of at most `den` each are summed
    if den.bits() > 120 {
        return None;
    }
    let mut dense = vec![0i128; LineId::count(w.n)];
    for (l, v) in w.iter() {
        let scaled = (v * BigRational::from_integer(den.clone())).to_integer();
        dense[l.index(w.n)] = scaled.to_i128()?;
    }
    Some((dense, den.to_i128()?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateVerdict {
    pub cover: CoverCheck,
    pub value: BigRational,
    /// `n - |Q'|`; the value must be strictly below this.
    pub bound: BigInt,
    pub certified: bool,
}

/// Full verification report for a candidate certificate.
pub fn verify_certificate(cfg: &PartialConfig, w: &LineWeighting) -> Result<CertificateVerdict> {
    if w.n != cfg.n() {
        return Err(QueensError::DimensionMismatch {
            expected: cfg.n(),
            found: w.n,
        });
    }
    let cover = covers(w, &unattacked(cfg));
    let value = weighting_value(w);
    let bound = BigInt::from(cfg.n() - cfg.len());
    let certified = cover.covered && value < BigRational::from_integer(bound.clone());
    Ok(CertificateVerdict {
        cover,
        value,
        bound,
        certified,
    })
}

/// True iff `w` proves that `cfg` cannot be completed.
pub fn certify_incompletable(cfg: &PartialConfig, w: &LineWeighting) -> Result<bool> {
    Ok(verify_certificate(cfg, w)?.certified)
}

/// Non-negative mass on unattacked squares with every line carrying at most 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalCompletion {
    n: usize,
    mass: BTreeMap<Square, BigRational>,
}

impl FractionalCompletion {
    pub fn new(n: usize) -> Self {
        FractionalCompletion {
            n,
            mass: BTreeMap::new(),
        }
    }

    pub fn from_config(cfg: &PartialConfig) -> Self {
        let mut f = FractionalCompletion::new(cfg.n());
        for &q in cfg.queens() {
            f.mass.insert(q, BigRational::one());
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, sq: Square, mass: BigRational) -> Result<()> {
        sq.check(self.n)?;
        if mass.is_negative() {
            return Err(QueensError::Precondition(format!("negative mass {mass} on {sq}")));
        }
        if mass.is_zero() {
            self.mass.remove(&sq);
        } else {
            self.mass.insert(sq, mass);
        }
        Ok(())
    }

    pub fn get(&self, sq: Square) -> BigRational {
        self.mass.get(&sq).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Square, &BigRational)> {
        self.mass.iter().map(|(&s, m)| (s, m))
    }

    pub fn total(&self) -> BigRational {
        self.mass.values().sum()
    }

    /// Support inside the unattacked squares of `cfg` and every line sum at most 1.
    pub fn is_feasible_for(&self, cfg: &PartialConfig) -> bool {
        if self.n != cfg.n() {
            return false;
        }
        let occ = cfg.occupancy();
        if self.mass.keys().any(|&s| occ.attacks(s)) {
            return false;
        }
        let mut loads = vec![BigRational::zero(); LineId::count(self.n)];
        for (s, m) in self.iter() {
            for l in lines_of(s, self.n) {
                loads[l.index(self.n)] += m;
            }
        }
        loads.iter().all(|v| *v <= BigRational::one())
    }
}

/// An exactly verified optimal pair of the packing and covering programs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOutcome {
    pub optimal_value: BigRational,
    pub primal: FractionalCompletion,
    pub dual: LineWeighting,
}

impl LpOutcome {
    /// Whether the optimum reaches `n - |cfg|`, i.e. `cfg` has a fractional completion.
    pub fn is_fractionally_completable(&self, cfg: &PartialConfig) -> bool {
        self.optimal_value >= BigRational::from_integer(BigInt::from(cfg.n() - cfg.len()))
    }
}

fn check_lp_size(cfg: &PartialConfig) -> Result<()> {
    if cfg.n() > LP_MAX_N {
        return Err(QueensError::TooLarge {
            what: "linear programming",
            limit: LP_MAX_N,
            got: cfg.n(),
        });
    }
    Ok(())
}

/// Lines meeting `lambda`, in canonical order, and a map from dense line index to position.
fn lines_meeting(n: usize, lambda: &[Square]) -> (Vec<LineId>, Vec<Option<usize>>) {
    let mut hit = vec![false; LineId::count(n)];
    for &s in lambda {
        for l in lines_of(s, n) {
            hit[l.index(n)] = true;
        }
    }
    let mut position = vec![None; hit.len()];
    let mut lines = Vec::new();
    for (i, &h) in hit.iter().enumerate() {
        if h {
            position[i] = Some(lines.len());
            lines.push(LineId::from_index(i, n));
        }
    }
    (lines, position)
}

/// Checks primal feasibility, dual feasibility and equal objective values.
/// Together these prove both sides optimal.
fn verified_outcome(
    cfg: &PartialConfig,
    lambda: &[Square],
    x: impl IntoIterator<Item = (Square, BigRational)>,
    w: impl IntoIterator<Item = (LineId, BigRational)>,
) -> Option<LpOutcome> {
    let n = cfg.n();
    let mut primal = FractionalCompletion::new(n);
    for (s, m) in x {
        primal.set(s, m).ok()?;
    }
    let mut dual = LineWeighting::new(n);
    for (l, v) in w {
        // a weight above 1 never helps a cover, and capping it keeps the cover intact
        let v = if v > BigRational::one() { BigRational::one() } else { v };
        dual.set(l, v).ok()?;
    }
    if !primal.is_feasible_for(cfg) || !covers(&dual, lambda).covered {
        return None;
    }
    let value = weighting_value(&dual);
    if primal.total() != value {
        return None;
    }
    Some(LpOutcome {
        optimal_value: value,
        primal,
        dual,
    })
}

fn snap_all(values: &[f64]) -> Option<Vec<BigRational>> {
    values
        .iter()
        .map(|&v| snap(v, SNAP_DENOMINATOR, SNAP_TOL))
        .collect()
}

fn empty_outcome(n: usize) -> LpOutcome {
    LpOutcome {
        optimal_value: BigRational::zero(),
        primal: FractionalCompletion::new(n),
        dual: LineWeighting::new(n),
    }
}

/// Maximizes `sum x_s` over the unattacked squares subject to every line
/// carrying at most 1. The dual optimum is a minimum-value covering weighting.
pub fn max_fractional_completion(cfg: &PartialConfig) -> Result<LpOutcome> {
    check_lp_size(cfg)?;
    let n = cfg.n();
    let lambda = unattacked(cfg);
    if lambda.is_empty() {
        return Ok(empty_outcome(n));
    }
    let (lines, position) = lines_meeting(n, &lambda);
    let mut members: Vec<Vec<(usize, i64)>> = vec![Vec::new(); lines.len()];
    for (v, &s) in lambda.iter().enumerate() {
        for l in lines_of(s, n) {
            members[position[l.index(n)].expect("line meets lambda")].push((v, 1));
        }
    }
    let mut p = Problem::new(vec![1; lambda.len()]);
    for coeffs in members {
        p.add_row(coeffs, RowKind::Le, 1);
    }
    let sol = simplex::solve(&p)?;

    let attempt = |x: Vec<BigRational>, y: Vec<BigRational>| {
        verified_outcome(
            cfg,
            &lambda,
            lambda.iter().copied().zip(x),
            lines.iter().copied().zip(y),
        )
    };
    if let (Some(x), Some(y)) = (snap_all(&sol.x), snap_all(&sol.y)) {
        if let Some(out) = attempt(x, y) {
            return Ok(out);
        }
    }
    let (x, y) = sol
        .exact()
        .ok_or_else(|| QueensError::Numerical("final packing basis is singular".into()))?;
    attempt(x, y).ok_or_else(|| {
        QueensError::Numerical("packing LP optimum failed exact verification".into())
    })
}

/// Minimizes `sum w(L)` over weightings that cover every unattacked square.
/// The dual optimum is a maximum fractional completion.
pub fn min_cover_value(cfg: &PartialConfig) -> Result<LpOutcome> {
    check_lp_size(cfg)?;
    let n = cfg.n();
    let lambda = unattacked(cfg);
    if lambda.is_empty() {
        return Ok(empty_outcome(n));
    }
    let (lines, position) = lines_meeting(n, &lambda);
    let row_of = |s: Square| -> Vec<(usize, i64)> {
        lines_of(s, n)
            .iter()
            .map(|l| (position[l.index(n)].expect("line meets lambda"), 1))
            .collect()
    };

    let generate = lambda.len() > FULL_COVER_ROWS;
    let mut active = vec![!generate; lambda.len()];
    if generate {
        // seed with about two squares per line
        let stride = lambda.len().div_ceil(2 * lines.len()).max(1);
        active.iter_mut().step_by(stride).for_each(|a| *a = true);
    }
    let batch = GENERATION_BATCH.min(lines.len()).max(1);

    let mut round = 0usize;
    loop {
        round += 1;
        let rows: Vec<usize> = (0..lambda.len()).filter(|&v| active[v]).collect();
        let mut p = Problem::new(vec![-1; lines.len()]);
        // weight 1 on every row line is a feasible start
        p.start = (0..lines.len())
            .filter(|&j| matches!(lines[j], LineId::Row(_)))
            .collect();
        for &v in &rows {
            p.add_row(row_of(lambda[v]), RowKind::Ge, 1);
        }
        let sol = simplex::solve(&p)?;
        let cover_sum = |v: usize| -> f64 { row_of(lambda[v]).iter().map(|&(j, _)| sol.x[j]).sum() };

        // squares left uncovered by the floating-point weights
        let mut violated: Vec<(f64, usize)> = (0..lambda.len())
            .filter(|&v| !active[v])
            .filter_map(|v| {
                let sum = cover_sum(v);
                (sum < 1.0 - 1e-9).then_some((sum, v))
            })
            .collect();
        if !violated.is_empty() {
            violated.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for &(_, v) in violated.iter().take(batch) {
                active[v] = true;
            }
            // drop slack rows to keep the tableau small; stop after a while to rule out cycling
            if round <= MAX_DROP_ROUNDS {
                for (k, &v) in rows.iter().enumerate() {
                    if sol.y[k].abs() < 1e-12 && cover_sum(v) > 1.0 + 1e-6 {
                        active[v] = false;
                    }
                }
            }
            continue;
        }

        let attempt = |w: Vec<BigRational>, y: Vec<BigRational>| {
            verified_outcome(
                cfg,
                &lambda,
                rows.iter().zip(y).map(|(&v, yv)| (lambda[v], -yv)),
                lines.iter().copied().zip(w),
            )
        };
        if let (Some(w), Some(y)) = (snap_all(&sol.x), snap_all(&sol.y)) {
            if let Some(out) = attempt(w, y) {
                return Ok(out);
            }
        }
        let (w, y) = sol
            .exact()
            .ok_or_else(|| QueensError::Numerical("final cover basis is singular".into()))?;
        if let Some(out) = attempt(w.clone(), y) {
            return Ok(out);
        }
        // the exact weights may still miss an inactive square the floats only just covered
        let mut exact_w = LineWeighting::new(n);
        for (&l, v) in lines.iter().zip(&w) {
            if v.is_positive() {
                let v = if *v > BigRational::one() { BigRational::one() } else { v.clone() };
                exact_w.set(l, v)?;
            }
        }
        let missed: Vec<usize> = (0..lambda.len())
            .filter(|&v| !active[v] && exact_w.cover_sum(lambda[v]) < BigRational::one())
            .collect();
        if missed.is_empty() {
            return Err(QueensError::Numerical(
                "cover LP optimum failed exact verification".into(),
            ));
        }
        for v in missed {
            active[v] = true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{complete, Completion, SolveBudget};

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn nauck() -> PartialConfig {
        PartialConfig::new(8, [Square::new(4, 2), Square::new(5, 4)]).unwrap()
    }

    fn all_squares(n: usize) -> Vec<Square> {
        (0..n * n).map(|i| Square::from_index(i, n)).collect()
    }

    #[test]
    fn weighting_values() {
        assert_eq!(weighting_value(&LineWeighting::new(5)), r(0, 1));
        let mut w = LineWeighting::new(5);
        for i in 1..=5 {
            w.set(LineId::Row(i), r(1, 1)).unwrap();
        }
        assert_eq!(weighting_value(&w), r(5, 1));
        assert!(covers(&w, &all_squares(5)).covered);
        assert!(w.set(LineId::Col(1), r(3, 2)).is_err());
        assert!(w.set(LineId::DiagPlus(5), r(1, 2)).is_err());
    }

    #[test]
    fn zero_weighting_reports_witness() {
        let w = LineWeighting::new(4);
        let check = covers(&w, &all_squares(4));
        assert!(!check.covered);
        assert_eq!(check.first_violation, Some(Square::new(1, 1)));
        assert!(!certify_incompletable(&PartialConfig::empty(4).unwrap(), &w).unwrap());
    }

    #[test]
    fn rational_and_integer_paths_agree() {
        let mut w = LineWeighting::new(6);
        w.set(LineId::Row(2), r(1, 3)).unwrap();
        w.set(LineId::Col(3), r(1, 3)).unwrap();
        w.set(LineId::DiagPlus(-2), r(1, 3)).unwrap();
        w.set(LineId::DiagMinus(-1), r(1, 7)).unwrap();
        let fast = covers(&w, &all_squares(6));
        let slow = all_squares(6)
            .into_iter()
            .find(|&s| w.cover_sum(s) < BigRational::one());
        assert_eq!(fast.first_violation, slow);
        // (2, 3) sits on all of R2, C3, D+(-2), D-(-1)
        assert!(covers(&w, &[Square::new(2, 3)]).covered);
    }

    #[test]
    fn completable_configuration_has_no_certificate() {
        let cfg = nauck();
        let mut w = LineWeighting::new(8);
        for i in 1..=8 {
            w.set(LineId::Row(i), r(1, 1)).unwrap();
        }
        let verdict = verify_certificate(&cfg, &w).unwrap();
        assert!(verdict.cover.covered);
        assert!(!verdict.certified);
        let best = min_cover_value(&cfg).unwrap();
        assert!(best.optimal_value >= r(6, 1));
        assert!(!certify_incompletable(&cfg, &best.dual).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            certify_incompletable(&nauck(), &LineWeighting::new(7)),
            Err(QueensError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn small_optima() {
        let one = max_fractional_completion(&PartialConfig::empty(1).unwrap()).unwrap();
        assert_eq!(one.optimal_value, r(1, 1));
        let four = PartialConfig::empty(4).unwrap();
        let packing = max_fractional_completion(&four).unwrap();
        let cover = min_cover_value(&four).unwrap();
        assert!(packing.optimal_value >= r(4, 1));
        assert_eq!(packing.optimal_value, cover.optimal_value);
        assert!(packing.primal.is_feasible_for(&four));
        assert!(covers(&cover.dual, &all_squares(4)).covered);
    }

    #[test]
    fn full_board_has_empty_lambda() {
        let Completion::Completed(q) = complete(&PartialConfig::empty(6).unwrap(), SolveBudget::UNLIMITED).unwrap()
        else {
            panic!()
        };
        let out = min_cover_value(&q).unwrap();
        assert_eq!(out.optimal_value, r(0, 1));
        assert_eq!(out.dual.support_len(), 0);
    }

    #[test]
    fn lp_ceiling() {
        assert!(matches!(
            max_fractional_completion(&PartialConfig::empty(65).unwrap()),
            Err(QueensError::TooLarge { .. })
        ));
    }

    #[test]
    fn constraint_generation_matches_packing() {
        // |lambda| = 576 > FULL_COVER_ROWS
        let cfg = PartialConfig::empty(24).unwrap();
        let cover = min_cover_value(&cfg).unwrap();
        let packing = max_fractional_completion(&cfg).unwrap();
        assert_eq!(cover.optimal_value, packing.optimal_value);
        assert!(cover.primal.is_feasible_for(&cfg));
    }
}
