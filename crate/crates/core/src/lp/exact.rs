//! Exact rational helpers: fraction-free linear solves and float-to-rational snapping.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Solves `a x = b` over the rationals with Bareiss elimination.
/// Returns `None` if `a` is singular.
pub fn solve_integer_system(mut a: Vec<Vec<BigInt>>, mut b: Vec<BigInt>) -> Option<Vec<BigRational>> {
    let m = b.len();
    let mut prev = BigInt::one();
    for k in 0..m {
        let p = (k..m).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, p);
        b.swap(k, p);
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let akk = pivot_row[k].clone();
        for (off, row) in bottom.iter_mut().enumerate() {
            let i = k + 1 + off;
            let aik = std::mem::take(&mut row[k]);
            for j in (k + 1)..m {
                let v = &row[j] * &akk - &aik * &pivot_row[j];
                row[j] = v / &prev;
            }
            let v = &b[i] * &akk - &aik * &b[k];
            b[i] = v / &prev;
        }
        prev = akk;
    }
    let mut x = vec![BigRational::zero(); m];
    for i in (0..m).rev() {
        let mut acc = BigRational::from_integer(b[i].clone());
        for j in (i + 1)..m {
            if !a[i][j].is_zero() {
                acc -= &x[j] * BigRational::from_integer(a[i][j].clone());
            }
        }
        x[i] = acc / BigRational::from_integer(a[i][i].clone());
    }
    Some(x)
}

/// The fraction with denominator at most `max_den` closest to `v`, if it is
/// within `tol` of `v`.
pub fn snap(v: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !v.is_finite() {
        return None;
    }
    let negative = v < 0.0;
    let target = v.abs();
    // continued-fraction convergents
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = target;
    let mut best: Option<(i64, i64)> = None;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_den {
            break;
        }
        best = Some((p2, q2));
        if (p2 as f64 / q2 as f64 - target).abs() < tol * 1e-3 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    let (p, q) = best?;
    if (p as f64 / q as f64 - target).abs() > tol {
        return None;
    }
    let p = if negative { -p } else { p };
    Some(BigRational::new(p.into(), q.into()))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn is_in_unit_interval(v: &BigRational) -> bool {
    !v.is_negative() && *v <= BigRational::one()
}
