//! Explicit objects: the square weighting with near-regular rows, columns
//! and diagonals; the near-diagonal configuration; the central uncompletable
//! instance with its line-weighting certificate; and the `n/3` instance.

use num::{BigInt, BigRational, Integer};

use crate::board::{LineId, PartialConfig, Square};
use crate::error::{QueensError, Result};
use crate::exact::lexicographic_first;
use crate::lp::LineWeighting;

/// Square weights in quarters: every value is 1/2, 3/4 or 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareWeighting {
    n: usize,
    quarters: Vec<u8>,
}

impl SquareWeighting {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The weight of `sq` in quarters (2, 3 or 4).
    pub fn quarters(&self, sq: Square) -> u8 {
        self.quarters[sq.index(self.n)]
    }

    pub fn value(&self, sq: Square) -> BigRational {
        BigRational::new(self.quarters(sq).into(), 4.into())
    }

    /// Total weight on a line, in quarters.
    pub fn line_total_quarters(&self, line: LineId) -> u64 {
        crate::board::line_squares(line, self.n)
            .expect("line belongs to this board")
            .into_iter()
            .map(|s| self.quarters(s) as u64)
            .sum()
    }

    pub fn line_total(&self, line: LineId) -> BigRational {
        BigRational::new(self.line_total_quarters(line).into(), 4.into())
    }
}

/// `i` lies in the middle third: `i / (n + 1)` in `[1/3, 2/3]`.
fn is_middle(i: usize, n: usize) -> bool {
    3 * i >= n + 1 && 3 * i <= 2 * (n + 1)
}

/// 1/2 when both coordinates are in the middle third, 3/4 when neither is, 1 otherwise.
pub fn regularize_weighting(n: usize) -> Result<SquareWeighting> {
    if n == 0 {
        return Err(QueensError::EmptyBoard);
    }
    let quarters = (0..n * n)
        .map(|idx| {
            let sq = Square::from_index(idx, n);
            match (is_middle(sq.row, n), is_middle(sq.col, n)) {
                (true, true) => 2,
                (false, false) => 3,
                _ => 4,
            }
        })
        .collect();
    Ok(SquareWeighting { n, quarters })
}

/// Queens at `(i, 2i)` for `i <= (n-1)/2` and `(i, 2i - n)` above, for `n = 1 (mod 6)`.
pub fn near_diagonal_config(n: usize) -> Result<PartialConfig> {
    if n % 6 != 1 || n < 7 {
        return Err(QueensError::Precondition(format!(
            "near-diagonal configuration needs n = 1 (mod 6) and n >= 7, got n = {n} (n mod 6 = {})",
            n % 6
        )));
    }
    let half = (n - 1) / 2;
    let queens = (1..=n).map(|i| {
        if i <= half {
            Square::new(i, 2 * i)
        } else {
            Square::new(i, 2 * i - n)
        }
    });
    PartialConfig::new(n, queens)
}

/// The central instance: a near-diagonal configuration of size `m` placed
/// in the middle of the board with a margin of `t` on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralInstance {
    pub n: usize,
    pub m: usize,
    /// margin around the central `m x m` box
    pub t: usize,
    pub config: PartialConfig,
    pub certificate: LineWeighting,
}

/// `m`: the largest integer at most `241n/1000` with `m = 1 (mod 6)`; `t = (n - m)/2`.
pub fn central_parameters(n: usize) -> Result<(usize, usize)> {
    if n % 2 == 0 {
        return Err(QueensError::Precondition(format!(
            "central embedding needs odd n, got n = {n}"
        )));
    }
    let cap = 241 * n / 1000;
    let m = (0..=cap).rev().find(|m| m % 6 == 1).unwrap_or(0);
    if m < 7 {
        return Err(QueensError::Precondition(format!(
            "n = {n} is too small: the central box needs m >= 7 with m = 1 (mod 6)"
        )));
    }
    Ok((m, (n - m) / 2))
}

/// Margin rows and columns get `|i/(t+1) - 1/2|`, diagonals with `|k| <= t-1`
/// get `1 - |k|/(t+1)`, and every diagonal through a queen of `cfg` gets 0.
pub fn hat_weighting(n: usize, m: usize, t: usize, cfg: &PartialConfig) -> Result<LineWeighting> {
    if n != m + 2 * t || cfg.n() != n {
        return Err(QueensError::Precondition(format!(
            "hat weighting needs n = m + 2t and a board of size n (n = {n}, m = {m}, t = {t}, board {})",
            cfg.n()
        )));
    }
    let inside = |v: usize| v > t && v <= t + m;
    if let Some(q) = cfg.queens().iter().find(|q| !inside(q.row) || !inside(q.col)) {
        return Err(QueensError::Precondition(format!(
            "queen {q} lies outside the central box [{}, {}]^2",
            t + 1,
            t + m
        )));
    }
    let mut w = LineWeighting::new(n);
    let tp1 = BigInt::from(t + 1);
    for i in 1..=t {
        let v = BigRational::new(BigInt::from(((2 * i) as i64 - (t as i64 + 1)).abs()), 2 * &tp1);
        for line in [
            LineId::Row(i),
            LineId::Col(i),
            LineId::Row(n + 1 - i),
            LineId::Col(n + 1 - i),
        ] {
            w.set(line, v.clone())?;
        }
    }
    let t = t as isize;
    for k in (1 - t)..t {
        let v = BigRational::new(BigInt::from(t + 1 - k.abs()), tp1.clone());
        w.set(LineId::DiagPlus(k), v.clone())?;
        w.set(LineId::DiagMinus(k), v)?;
    }
    for q in cfg.queens() {
        w.set(LineId::DiagPlus(q.plus_diagonal(n)), BigRational::from_integer(0.into()))?;
        w.set(LineId::DiagMinus(q.minus_diagonal()), BigRational::from_integer(0.into()))?;
    }
    Ok(w)
}

/// The central instance for odd `n`.
pub fn central_embedding(n: usize) -> Result<CentralInstance> {
    let (m, t) = central_parameters(n)?;
    let config = near_diagonal_config(m)?.shifted(n, t, t)?;
    let certificate = hat_weighting(n, m, t, &config)?;
    Ok(CentralInstance {
        n,
        m,
        t,
        config,
        certificate,
    })
}

/// Like [`central_embedding`], but even `n` is reduced to `n - 1`: the
/// instance is built on the smaller board, kept in place, and the
/// certificate gains weight 1 on the new row and column.
pub fn central_embedding_any(n: usize) -> Result<CentralInstance> {
    if n % 2 == 1 {
        return central_embedding(n);
    }
    if n < 2 {
        return Err(QueensError::EmptyBoard);
    }
    let small = central_embedding(n - 1)?;
    let config = PartialConfig::new(n, small.config.queens().iter().copied())?;
    let mut certificate = LineWeighting::new(n);
    for (line, v) in small.certificate.iter() {
        // plus-diagonal offsets shift by one on the larger board; minus-diagonals keep theirs
        let moved = match line {
            LineId::DiagPlus(k) => LineId::DiagPlus(k - 1),
            other => other,
        };
        certificate.set(moved, v.clone())?;
    }
    let one = BigRational::from_integer(1.into());
    certificate.set(LineId::Row(n), one.clone())?;
    certificate.set(LineId::Col(n), one)?;
    Ok(CentralInstance {
        n,
        m: small.m,
        t: small.t,
        config,
        certificate,
    })
}

/// The value of the central certificate for odd `n`, computed without
/// building the weighting.
pub fn central_value(n: usize) -> Result<BigRational> {
    let (m, t) = central_parameters(n)?;
    let cfg = near_diagonal_config(m)?;
    let (ti, tp1) = (t as i64, t as i64 + 1);
    // numerators over 2(t + 1)
    let margin: i64 = (1..=ti).map(|i| (2 * i - tp1).abs()).sum::<i64>() * 4;
    let diagonal = |k: i64| if k.abs() < ti { 2 * (tp1 - k.abs()) } else { 0 };
    let mut diagonals: i64 = 2 * (1 - ti..ti).map(diagonal).sum::<i64>();
    // queens sit at (t + a, t + b); their diagonal offsets match those on the m x m board
    let mut plus: Vec<i64> = cfg.queens().iter().map(|q| q.plus_diagonal(m) as i64).collect();
    let mut minus: Vec<i64> = cfg.queens().iter().map(|q| q.minus_diagonal() as i64).collect();
    plus.sort_unstable();
    plus.dedup();
    minus.sort_unstable();
    minus.dedup();
    diagonals -= plus.iter().chain(&minus).map(|&k| diagonal(k)).sum::<i64>();
    Ok(BigRational::new((margin + diagonals).into(), (2 * tp1).into()))
}

/// `3t - 2m + 2m^2/(3t)`, the leading terms of the central certificate's value.
pub fn central_value_estimate(m: usize, t: usize) -> BigRational {
    let (m, t) = (BigInt::from(m), BigInt::from(t));
    BigRational::from_integer(3 * &t - 2 * &m) + BigRational::new(2 * &m * &m, 3 * &t)
}

/// Measured bound on `central_value(n) - central_value_estimate(m, t)` over odd
/// `n`; the largest observed excess is 413/528, at n = 77.
pub fn central_slack() -> BigRational {
    BigRational::new(4.into(), 5.into())
}

/// Whether the central certificate's value is below `n - m` for odd `n`.
pub fn central_certifies(n: usize) -> Result<bool> {
    let (m, _) = central_parameters(n)?;
    Ok(central_value(n)? < BigRational::from_integer(BigInt::from(n - m)))
}

/// The smallest odd `n <= limit` whose central certificate value is below `n - m`.
/// The inequality is not monotone in `n`, so this is a plain scan.
pub fn smallest_certified_odd(limit: usize) -> Option<usize> {
    (1..=limit)
        .filter(|n| n.is_odd())
        .find(|&n| central_certifies(n).unwrap_or(false))
}

/// The lexicographically first `n/3`-queens configuration placed in the central `n/3` box.
pub fn third_construction(n: usize) -> Result<PartialConfig> {
    if n % 3 != 0 || n < 12 {
        return Err(QueensError::Precondition(format!(
            "third construction needs 3 | n and n >= 12, got n = {n} (n mod 3 = {})",
            n % 3
        )));
    }
    let k = n / 3;
    let inner = lexicographic_first(k)?.ok_or_else(|| {
        QueensError::Precondition(format!("no {k}-queens configuration exists"))
    })?;
    inner.shifted(n, k, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{is_valid_partial, unattacked};
    use crate::lp::{covers, weighting_value};

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn three_by_three_weighting() {
        let w = regularize_weighting(3).unwrap();
        assert_eq!(w.value(Square::new(2, 2)), r(1, 2));
        for c in [(1, 1), (1, 3), (3, 1), (3, 3)] {
            assert_eq!(w.value(Square::new(c.0, c.1)), r(3, 4));
        }
        for e in [(1, 2), (2, 1), (2, 3), (3, 2)] {
            assert_eq!(w.value(Square::new(e.0, e.1)), r(1, 1));
        }
        for i in 1..=3 {
            assert_eq!(w.line_total(LineId::Row(i)), r(5, 2));
            assert_eq!(w.line_total(LineId::Col(i)), r(5, 2));
        }
        for k in -2..=2 {
            assert!(w.line_total(LineId::DiagPlus(k)) <= r(2, 1));
            assert!(w.line_total(LineId::DiagMinus(k)) <= r(2, 1));
        }
    }

    #[test]
    fn near_diagonal_seven() {
        let q = near_diagonal_config(7).unwrap();
        let expected: Vec<Square> = [(1, 2), (2, 4), (3, 6), (4, 1), (5, 3), (6, 5), (7, 7)]
            .iter()
            .map(|&(a, b)| Square::new(a, b))
            .collect();
        assert_eq!(q.queens(), expected.as_slice());
        assert!(is_valid_partial(q.queens(), 7).unwrap());
        assert!(near_diagonal_config(8).is_err());
        assert!(near_diagonal_config(1).is_err());
    }

    #[test]
    fn central_parameters_small() {
        assert!(central_parameters(40).is_err());
        assert!(central_parameters(29).is_err());
        // floor(0.241 * 31) = 7
        assert_eq!(central_parameters(31).unwrap(), (7, 12));
    }

    #[test]
    fn hat_weights() {
        let inst = central_embedding(31).unwrap();
        let t = inst.t;
        // n = 31: m = 7, t = 12
        assert_eq!(inst.certificate.get(LineId::Row(1)), r(11, 26));
        assert_eq!(inst.certificate.get(LineId::Col(31)), r(11, 26));
        assert_eq!(inst.certificate.get(LineId::Row(13)), r(0, 1));
        assert_eq!(
            inst.certificate.get(LineId::DiagMinus((t - 1) as isize)),
            r(2, 13)
        );
        assert_eq!(inst.certificate.get(LineId::DiagPlus(t as isize)), r(0, 1));
        // the near-diagonal configuration on 7 squares uses D-0 via (7, 7)
        assert_eq!(inst.certificate.get(LineId::DiagMinus(0)), r(0, 1));
    }

    #[test]
    fn odd_margin_midpoint_has_zero_row_weight() {
        // row (t + 1)/2 sits exactly halfway and gets weight 0 when t is odd
        let n = (33..200)
            .step_by(2)
            .find(|&n| central_parameters(n).is_ok_and(|(_, t)| t % 2 == 1))
            .unwrap();
        let inst = central_embedding(n).unwrap();
        assert_eq!(inst.certificate.get(LineId::Row(inst.t.div_ceil(2))), r(0, 1));
    }

    #[test]
    fn fast_value_matches_weighting() {
        for n in (31..400).step_by(2) {
            let inst = central_embedding(n).unwrap();
            let direct: BigRational = inst.certificate.iter().map(|(_, v)| v.clone()).sum();
            assert_eq!(weighting_value(&inst.certificate), direct);
            assert_eq!(central_value(n).unwrap(), direct, "n = {n}");
        }
    }

    #[test]
    fn hat_weighting_covers_the_corner_boxes() {
        let inst = central_embedding(61).unwrap();
        let t = inst.t;
        let lambda = unattacked(&inst.config);
        let corner: Vec<Square> = lambda
            .into_iter()
            .filter(|s| {
                let edge = |v: usize| v <= t || v > inst.n - t;
                edge(s.row) && edge(s.col)
            })
            .collect();
        assert!(!corner.is_empty());
        assert!(covers(&inst.certificate, &corner).covered);
    }

    #[test]
    fn even_device_shape() {
        let inst = central_embedding_any(62).unwrap();
        assert_eq!(inst.n, 62);
        let odd = central_embedding(61).unwrap();
        assert_eq!(
            weighting_value(&inst.certificate),
            weighting_value(&odd.certificate) + r(2, 1)
        );
        assert_eq!(inst.certificate.get(LineId::Row(62)), r(1, 1));
        // every odd-board diagonal keeps its squares after the offset shift
        for (line, v) in odd.certificate.iter() {
            if let LineId::DiagPlus(k) = line {
                assert_eq!(&inst.certificate.get(LineId::DiagPlus(k - 1)), v);
            }
        }
    }

    #[test]
    fn third_construction_twelve() {
        let q = third_construction(12).unwrap();
        assert_eq!(q.len(), 4);
        assert!(q.queens().iter().all(|s| (5..=8).contains(&s.row) && (5..=8).contains(&s.col)));
        assert!(third_construction(13).is_err());
        assert!(third_construction(9).is_err());
    }
}
