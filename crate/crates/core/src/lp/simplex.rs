//! Dense two-phase bounded-variable primal simplex over `f64`.
//!
//! Problems have integer data, `<=`/`>=` rows only and structural variables
//! in `[0, u]` with `u` possibly infinite. Every row gets a slack, so the row
//! duals can be read off the slack columns of the final tableau, and the
//! final basis can be re-solved exactly (see [`Solution::exact`]).

use num::{BigInt, BigRational, Zero};

use super::exact::solve_integer_system;
use crate::error::{QueensError, Result};

const TOL: f64 = 1e-9;
/// Smallest tableau entry accepted as a pivot.
const PIVOT_TOL: f64 = 1e-7;
/// Size of the right-hand-side perturbation used against stalling.
const PERTURBATION: f64 = 1e-7;
/// Consecutive degenerate pivots before pricing falls back to Bland's rule.
const DEGENERATE_STREAK: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<(usize, i64)>,
    pub kind: RowKind,
    pub rhs: i64,
}

/// `maximize c.x` subject to the rows and `0 <= x_j <= upper_j`.
#[derive(Clone, Debug, Default)]
pub struct Problem {
    pub objective: Vec<i64>,
    pub upper: Vec<Option<i64>>,
    pub rows: Vec<Row>,
    /// Structural columns to pivot into the starting basis. When the
    /// resulting point is feasible, phase one is skipped.
    pub start: Vec<usize>,
}

impl Problem {
    pub fn new(objective: Vec<i64>) -> Self {
        let upper = vec![None; objective.len()];
        Problem {
            objective,
            upper,
            rows: Vec::new(),
            start: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, i64)>, kind: RowKind, rhs: i64) {
        self.rows.push(Row { coeffs, kind, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Basic,
    Lower,
    Upper,
}

/// The problem after sign normalization, with slack and artificial columns.
struct Standard {
    m: usize,
    ncols: usize,
    /// column-major sparse entries
    columns: Vec<Vec<(usize, i64)>>,
    upper: Vec<f64>,
    rhs: Vec<i64>,
    /// `+1` or `-1`: the factor applied to each original row
    row_sign: Vec<i64>,
    slack_col: Vec<usize>,
    slack_coef: Vec<i64>,
    artificials: Vec<usize>,
    cost: Vec<i64>,
}

impl Standard {
    fn build(p: &Problem) -> Self {
        let ns = p.num_vars();
        let m = p.rows.len();
        let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); ns];
        let mut upper: Vec<f64> = p
            .upper
            .iter()
            .map(|u| u.map_or(f64::INFINITY, |u| u as f64))
            .collect();
        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut slack_coef = Vec::with_capacity(m);
        let mut needs_artificial = Vec::with_capacity(m);
        for (i, row) in p.rows.iter().enumerate() {
            let mut kind = row.kind;
            let mut sign = 1;
            if row.rhs < 0 || (row.rhs == 0 && kind == RowKind::Ge) {
                sign = -1;
                kind = match kind {
                    RowKind::Le => RowKind::Ge,
                    RowKind::Ge => RowKind::Le,
                };
            }
            for &(j, a) in &row.coeffs {
                if a != 0 {
                    columns[j].push((i, sign * a));
                }
            }
            rhs.push(sign * row.rhs);
            row_sign.push(sign);
            slack_coef.push(if kind == RowKind::Le { 1 } else { -1 });
            needs_artificial.push(kind == RowKind::Ge);
        }
        let mut slack_col = Vec::with_capacity(m);
        for i in 0..m {
            slack_col.push(columns.len());
            columns.push(vec![(i, slack_coef[i])]);
            upper.push(f64::INFINITY);
        }
        let mut artificials = Vec::new();
        for i in 0..m {
            if needs_artificial[i] {
                artificials.push(columns.len());
                columns.push(vec![(i, 1)]);
                upper.push(f64::INFINITY);
            }
        }
        let ncols = columns.len();
        let mut cost = vec![0; ncols];
        cost[..ns].copy_from_slice(&p.objective);
        Standard {
            m,
            ncols,
            columns,
            upper,
            rhs,
            row_sign,
            slack_col,
            slack_coef,
            artificials,
            cost,
        }
    }
}

struct Tableau<'a> {
    sf: &'a Standard,
    /// `B^-1 A`, row-major `m x ncols`
    t: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<Status>,
    d: Vec<f64>,
    iterations: usize,
}

impl<'a> Tableau<'a> {
    fn new(sf: &'a Standard) -> Self {
        let (m, nc) = (sf.m, sf.ncols);
        let mut t = vec![0.0; m * nc];
        for (j, col) in sf.columns.iter().enumerate() {
            for &(i, a) in col {
                t[i * nc + j] = a as f64;
            }
        }
        let mut status = vec![Status::Lower; nc];
        let mut basis = sf.slack_col.clone();
        for &a in &sf.artificials {
            let i = sf.columns[a][0].0;
            basis[i] = a;
        }
        for &b in &basis {
            status[b] = Status::Basic;
        }
        // slacks of >= rows have coefficient -1 and are nonbasic; basic columns are unit vectors
        let beta = sf.rhs.iter().map(|&b| b as f64).collect();
        Tableau {
            sf,
            t,
            beta,
            basis,
            status,
            d: vec![0.0; nc],
            iterations: 0,
        }
    }

    fn value_of_nonbasic(&self, j: usize) -> f64 {
        match self.status[j] {
            Status::Upper => self.sf.upper[j],
            _ => 0.0,
        }
    }

    fn price(&mut self, cost: &[f64]) {
        let nc = self.sf.ncols;
        self.d.copy_from_slice(cost);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                let row = &self.t[i * nc..(i + 1) * nc];
                for (dj, &a) in self.d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        for &b in &self.basis {
            self.d[b] = 0.0;
        }
    }

    /// Direction in which nonbasic `j` may profitably move, if any.
    fn direction(&self, j: usize) -> Option<f64> {
        match self.status[j] {
            Status::Lower if self.d[j] > TOL && self.sf.upper[j] > 0.0 => Some(1.0),
            Status::Upper if self.d[j] < -TOL => Some(-1.0),
            _ => None,
        }
    }

    fn run(&mut self, cost: &[f64], max_iterations: usize) -> Result<()> {
        self.price(cost);
        let nc = self.sf.ncols;
        let mut degenerate = 0usize;
        loop {
            let bland = degenerate >= DEGENERATE_STREAK;
            let mut entering: Option<(usize, f64)> = None;
            let mut best = 0.0;
            for j in 0..nc {
                if let Some(dir) = self.direction(j) {
                    if bland {
                        entering = Some((j, dir));
                        break;
                    }
                    if self.d[j].abs() > best {
                        best = self.d[j].abs();
                        entering = Some((j, dir));
                    }
                }
            }
            let Some((j, dir)) = entering else {
                return Ok(());
            };
            self.iterations += 1;
            if self.iterations > max_iterations {
                return Err(QueensError::Numerical(format!(
                    "simplex did not converge within {max_iterations} iterations"
                )));
            }

            // Two-pass ratio test: find the tightest limit, then among rows
            // within tolerance of it take the largest pivot (lowest index under Bland).
            let mut candidates: Vec<(usize, f64, f64, Status)> = Vec::new();
            let mut tightest = self.sf.upper[j];
            for i in 0..self.sf.m {
                let a = dir * self.t[i * nc + j];
                let b = self.basis[i];
                let (limit, bound) = if a > PIVOT_TOL {
                    (self.beta[i].max(0.0) / a, Status::Lower)
                } else if a < -PIVOT_TOL && self.sf.upper[b].is_finite() {
                    ((self.sf.upper[b] - self.beta[i]).max(0.0) / -a, Status::Upper)
                } else {
                    continue;
                };
                tightest = tightest.min(limit);
                candidates.push((i, limit, a.abs(), bound));
            }
            let mut theta = tightest;
            let mut leave: Option<(usize, Status)> = None;
            if tightest < self.sf.upper[j] - TOL || self.sf.upper[j].is_infinite() {
                let mut best: Option<(usize, f64, Status)> = None;
                for &(i, limit, size, bound) in &candidates {
                    if limit > tightest + TOL {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((r, _, _)) if bland => self.basis[i] < self.basis[r],
                        Some((_, s, _)) => size > s,
                    };
                    if better {
                        best = Some((i, size, bound));
                    }
                }
                if let Some((i, _, bound)) = best {
                    theta = candidates
                        .iter()
                        .find(|c| c.0 == i)
                        .map_or(tightest, |c| c.1);
                    leave = Some((i, bound));
                }
            } else {
                theta = self.sf.upper[j];
            }
            if theta.is_infinite() {
                return Err(QueensError::Numerical("linear program is unbounded".into()));
            }
            degenerate = if theta < TOL { degenerate + 1 } else { 0 };

            for i in 0..self.sf.m {
                self.beta[i] -= dir * theta * self.t[i * nc + j];
            }
            match leave {
                None => {
                    // bound flip
                    self.status[j] = if dir > 0.0 { Status::Upper } else { Status::Lower };
                }
                Some((r, bound)) => {
                    let entering_value = self.value_of_nonbasic(j) + dir * theta;
                    let old = self.basis[r];
                    self.status[old] = bound;
                    self.status[j] = Status::Basic;
                    self.basis[r] = j;
                    self.pivot(r, j);
                    self.beta[r] = entering_value;
                }
            }
        }
    }

    /// Nudges every basic value that has room into the interior, which is the
    /// same as perturbing the right-hand side and keeps degenerate pivots rare.
    fn perturb(&mut self) {
        for i in 0..self.sf.m {
            let room = self.sf.upper[self.basis[i]] - self.beta[i];
            if room > 0.0 {
                let delta = PERTURBATION * (1.0 + ((i * 7919) % 997) as f64 / 997.0);
                self.beta[i] += delta.min(room / 2.0);
            }
        }
    }

    /// Recomputes the basic values for the unperturbed right-hand side,
    /// reading `B^-1` off the slack columns.
    fn restore_beta(&mut self) {
        let (m, nc) = (self.sf.m, self.sf.ncols);
        let mut rhs: Vec<f64> = self.sf.rhs.iter().map(|&b| b as f64).collect();
        for j in 0..nc {
            if self.status[j] == Status::Upper {
                for &(i, a) in &self.sf.columns[j] {
                    rhs[i] -= a as f64 * self.sf.upper[j];
                }
            }
        }
        for i in 0..m {
            self.beta[i] = (0..m)
                .filter(|&r| rhs[r] != 0.0)
                .map(|r| rhs[r] * self.t[i * nc + self.sf.slack_col[r]] / self.sf.slack_coef[r] as f64)
                .sum();
        }
    }

    fn is_primal_feasible(&self) -> bool {
        (0..self.sf.m).all(|i| {
            let ub = self.sf.upper[self.basis[i]];
            self.beta[i] > -TOL && self.beta[i] < ub + TOL
        })
    }

    /// Brings nonbasic column `j` (at its lower bound) into the basis in
    /// place of an artificial or slack, without moving the current point.
    fn crash(&mut self, j: usize, is_artificial: &[bool]) {
        let nc = self.sf.ncols;
        if self.status[j] != Status::Lower {
            return;
        }
        let slack_start = self.sf.ncols - self.sf.m - self.sf.artificials.len();
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.sf.m {
            let b = self.basis[i];
            let a = self.t[i * nc + j].abs();
            let replaceable = is_artificial[b] || b >= slack_start;
            if replaceable && a > PIVOT_TOL && best.is_none_or(|(_, s)| a > s) {
                best = Some((i, a));
            }
        }
        let Some((r, _)) = best else { return };
        let p = self.t[r * nc + j];
        let moved = self.beta[r] / p;
        for i in 0..self.sf.m {
            if i != r {
                self.beta[i] -= self.t[i * nc + j] * moved;
            }
        }
        self.beta[r] = moved;
        self.status[self.basis[r]] = Status::Lower;
        self.status[j] = Status::Basic;
        self.basis[r] = j;
        self.pivot(r, j);
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let nc = self.sf.ncols;
        let p = self.t[r * nc + j];
        let (before, rest) = self.t.split_at_mut(r * nc);
        let (prow, after) = rest.split_at_mut(nc);
        for v in prow.iter_mut() {
            *v /= p;
        }
        let eliminate = |row: &mut [f64]| {
            let f = row[j];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                row[j] = 0.0;
            }
        };
        before.chunks_mut(nc).for_each(eliminate);
        after.chunks_mut(nc).for_each(eliminate);
        let f = self.d[j];
        if f != 0.0 {
            for (v, &pv) in self.d.iter_mut().zip(prow.iter()) {
                *v -= f * pv;
            }
            self.d[j] = 0.0;
        }
    }
}

/// A floating-point optimum together with its final basis.
pub struct Solution {
    /// structural variable values
    pub x: Vec<f64>,
    /// one dual per original row, in the sign convention of `maximize`:
    /// `>= 0` for `<=` rows and `<= 0` for `>=` rows
    pub y: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    basis: Vec<usize>,
    at_upper: Vec<usize>,
    sf: Standard,
}

pub fn solve(p: &Problem) -> Result<Solution> {
    let sf = Standard::build(p);
    let (m, nc, ns) = (sf.m, sf.ncols, p.num_vars());
    let max_iterations = 50 * (m + nc) + 1000;
    let mut tab = Tableau::new(&sf);
    let mut is_artificial = vec![false; nc];
    for &a in &sf.artificials {
        is_artificial[a] = true;
    }
    let artificial_sum =
        |tab: &Tableau| -> f64 { (0..m).filter(|&i| is_artificial[tab.basis[i]]).map(|i| tab.beta[i]).sum() };

    if !p.start.is_empty() {
        let saved = (tab.t.clone(), tab.beta.clone(), tab.basis.clone(), tab.status.clone());
        for &j in &p.start {
            tab.crash(j, &is_artificial);
        }
        let feasible = (0..m).all(|i| {
            let b = tab.basis[i];
            tab.beta[i] > -TOL && tab.beta[i] < sf.upper[b] + TOL
        });
        if !feasible {
            (tab.t, tab.beta, tab.basis, tab.status) = saved;
        }
    }

    if !sf.artificials.is_empty() && artificial_sum(&tab) > TOL {
        let mut phase1 = vec![0.0; nc];
        for &a in &sf.artificials {
            phase1[a] = -1.0;
        }
        tab.run(&phase1, max_iterations)?;
        let infeasibility = artificial_sum(&tab);
        if infeasibility > 1e-7 {
            return Err(QueensError::Numerical(format!(
                "linear program is infeasible (phase one residual {infeasibility:e})"
            )));
        }
    }
    let Tableau {
        t,
        beta,
        basis,
        status,
        iterations,
        ..
    } = tab;
    // artificials are pinned to zero for phase two
    let mut sf2 = sf;
    for &a in &sf2.artificials.clone() {
        sf2.upper[a] = 0.0;
    }
    let mut tab = Tableau {
        sf: &sf2,
        t,
        beta,
        basis,
        status,
        d: vec![0.0; nc],
        iterations,
    };
    let cost: Vec<f64> = sf2.cost.iter().map(|&c| c as f64).collect();
    let saved = (tab.t.clone(), tab.beta.clone(), tab.basis.clone(), tab.status.clone());
    tab.perturb();
    tab.run(&cost, max_iterations)?;
    tab.restore_beta();
    if !tab.is_primal_feasible() {
        (tab.t, tab.beta, tab.basis, tab.status) = saved;
        tab.run(&cost, max_iterations)?;
    }

    let mut values = vec![0.0; nc];
    for j in 0..nc {
        values[j] = tab.value_of_nonbasic(j);
    }
    for (i, &b) in tab.basis.iter().enumerate() {
        values[b] = tab.beta[i];
    }
    let y = (0..m)
        .map(|i| {
            let s = sf2.slack_col[i];
            let col_dot: f64 = (0..m).map(|k| cost[tab.basis[k]] * tab.t[k * nc + s]).sum();
            (sf2.row_sign[i] * sf2.slack_coef[i]) as f64 * col_dot
        })
        .collect();
    let objective = (0..ns).map(|j| cost[j] * values[j]).sum();
    let at_upper = (0..nc).filter(|&j| tab.status[j] == Status::Upper).collect();
    let (basis, iterations) = (tab.basis, tab.iterations);
    Ok(Solution {
        x: values[..ns].to_vec(),
        y,
        objective,
        iterations,
        basis,
        at_upper,
        sf: sf2,
    })
}

impl Solution {
    /// Re-solves the final basis in exact arithmetic, returning the exact
    /// structural values and row duals, or `None` if the basis is singular.
    pub fn exact(&self) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
        let sf = &self.sf;
        let m = sf.m;
        let ns = self.x.len();
        let rat = |v: i64| BigRational::from_integer(BigInt::from(v));

        let mut rhs: Vec<i64> = sf.rhs.clone();
        let mut x = vec![BigRational::zero(); sf.ncols];
        for &j in &self.at_upper {
            // only finite integer bounds can be active; artificials are pinned at 0
            let u = sf.upper[j] as i64;
            x[j] = rat(u);
            for &(i, a) in &sf.columns[j] {
                rhs[i] -= a * u;
            }
        }

        // Basic slack and artificial columns are signed unit vectors; each one
        // settles its own row, leaving a core of structural columns to solve.
        let mut unit_of_row: Vec<Option<(usize, i64)>> = vec![None; m];
        let mut core_cols = Vec::new();
        for (k, &col) in self.basis.iter().enumerate() {
            if col >= ns {
                let (i, a) = sf.columns[col][0];
                unit_of_row[i] = Some((k, a));
            } else {
                core_cols.push(k);
            }
        }
        let core_rows: Vec<usize> = (0..m).filter(|&i| unit_of_row[i].is_none()).collect();
        if core_rows.len() != core_cols.len() {
            return None;
        }
        let mut core_pos = vec![usize::MAX; m];
        for (p, &i) in core_rows.iter().enumerate() {
            core_pos[i] = p;
        }
        let c = core_cols.len();
        let mut core = vec![vec![BigInt::zero(); c]; c];
        for (q, &k) in core_cols.iter().enumerate() {
            for &(i, a) in &sf.columns[self.basis[k]] {
                if core_pos[i] != usize::MAX {
                    core[core_pos[i]][q] = BigInt::from(a);
                }
            }
        }

        // primal: B x_B = rhs
        let core_rhs = core_rows.iter().map(|&i| BigInt::from(rhs[i])).collect();
        let xs = solve_integer_system(core.clone(), core_rhs)?;
        let mut row_activity = vec![BigRational::zero(); m];
        for (q, v) in core_cols.iter().zip(xs) {
            let col = self.basis[*q];
            for &(i, a) in &sf.columns[col] {
                row_activity[i] += &v * rat(a);
            }
            x[col] = v;
        }
        for i in 0..m {
            if let Some((k, a)) = unit_of_row[i] {
                x[self.basis[k]] = (rat(rhs[i]) - &row_activity[i]) / rat(a);
            }
        }

        // dual: B^T y = c_B
        let mut y_norm = vec![BigRational::zero(); m];
        for i in 0..m {
            if let Some((k, a)) = unit_of_row[i] {
                y_norm[i] = rat(sf.cost[self.basis[k]]) / rat(a);
            }
        }
        let core_t: Vec<Vec<BigInt>> = (0..c).map(|q| (0..c).map(|p| core[p][q].clone()).collect()).collect();
        // scale the known part to integers before the core solve
        let known: Vec<BigRational> = core_cols
            .iter()
            .map(|&k| {
                let col = self.basis[k];
                let mut v = rat(sf.cost[col]);
                for &(i, a) in &sf.columns[col] {
                    if unit_of_row[i].is_some() {
                        v -= &y_norm[i] * rat(a);
                    }
                }
                v
            })
            .collect();
        let den = super::exact::common_denominator(&known);
        let known_int = known
            .iter()
            .map(|v| (v * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let ys = solve_integer_system(core_t, known_int)?;
        for (p, v) in ys.into_iter().enumerate() {
            y_norm[core_rows[p]] = v / BigRational::from_integer(den.clone());
        }
        let y = y_norm
            .into_iter()
            .enumerate()
            .map(|(i, v)| v * BigInt::from(sf.row_sign[i]))
            .collect();
        x.truncate(ns);
        Some((x, y))
    }
}
