//! Closed-form counts and bounds, all in exact rational arithmetic.
//!
//! Nothing here uses floating point; decimals appear only when a value is
//! rendered for output.

mod brute;
mod rational;
mod tables;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matspace::Mode;

pub use rational::{
    big_pow, bigint_serde, floor_to_int, frac, from_f64, int, parse_decimal, parse_fraction, qpow, rational_serde,
    round_sig, to_decimal_string, to_f64, to_fraction_string, Rational, RationalText, Rounding, DECIMAL_DIGITS,
};
pub use brute::coprime_pairs_brute;
pub use tables::{table_series, Series, SERIES_TRUNCATION};

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::Precondition(format!("q must be at least 2, got {q}")));
    }
    Ok(())
}

/// Checks `0 < r < n` and `q >= 2`.
pub fn check_instance(n: usize, r: usize, q: u64) -> Result<()> {
    check_q(q)?;
    if r == 0 || r >= n {
        return Err(Error::Precondition(format!("need 0 < r < n, got n={n}, r={r}")));
    }
    Ok(())
}

/// `prod_{i=1..n} (1 - q^-i)`.
pub fn omega(n: usize, q: u64) -> Rational {
    (1..=n as i64).fold(int(1), |acc, i| acc * (int(1) - qpow(q, -i)))
}

/// `|GL(n, q)| = prod_{i=0..n-1} (q^n - q^i)`.
pub fn gl_order(n: usize, q: u64) -> BigInt {
    let qn = big_pow(q, n as u64);
    (0..n as u64).fold(BigInt::one(), |acc, i| acc * (&qn - big_pow(q, i)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    /// `|M(V)_U| = q^(n^2 - nr + r^2)`.
    #[serde(with = "bigint_serde")]
    pub algebra: BigInt,
    /// `|GL(V)_U| = |M(V)_U| omega(r,q) omega(n-r,q)`.
    #[serde(with = "bigint_serde")]
    pub group: BigInt,
    /// `|GL(n,q)|`.
    #[serde(with = "bigint_serde")]
    pub gl: BigInt,
}

pub fn orders(n: usize, r: usize, q: u64) -> Result<Orders> {
    check_instance(n, r, q)?;
    let algebra = big_pow(q, (n * n - n * r + r * r) as u64);
    let group = Rational::from_integer(algebra.clone()) * omega(r, q) * omega(n - r, q);
    debug_assert!(group.is_integer());
    Ok(Orders { algebra, group: group.to_integer(), gl: gl_order(n, q) })
}

/// Gaussian binomial `[r choose d]_q`.
pub fn qbinom(r: usize, d: usize, q: u64) -> Result<BigInt> {
    check_q(q)?;
    if d > r {
        return Err(Error::Precondition(format!("q-binomial needs d <= r, got d={d}, r={r}")));
    }
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for i in 0..d as u64 {
        num *= big_pow(q, r as u64) - big_pow(q, i);
        den *= big_pow(q, d as u64) - big_pow(q, i);
    }
    Ok(num / den)
}

/// Coprime ordered pairs of monic polynomials of degrees `r` and `s`:
/// `q^(r+s)(1 - 1/q)` if `rs > 0`, else `q^(r+s)`.
pub fn coprime_count(r: usize, s: usize, q: u64) -> BigInt {
    let total = big_pow(q, (r + s) as u64);
    if r * s == 0 {
        total
    } else {
        &total - &total / BigInt::from(q)
    }
}

/// The same count from `c(r,s) = q^(r+s) - sum_{k=1..min} q^k c(r-k, s-k)`,
/// `c(r,0) = q^r`, `c(0,s) = q^s`.
pub fn coprime_count_recurrence(r: usize, s: usize, q: u64) -> BigInt {
    fn go(r: usize, s: usize, q: u64, memo: &mut HashMap<(usize, usize), BigInt>) -> BigInt {
        if r == 0 || s == 0 {
            return big_pow(q, (r + s) as u64);
        }
        if let Some(v) = memo.get(&(r, s)) {
            return v.clone();
        }
        let mut c = big_pow(q, (r + s) as u64);
        for k in 1..=r.min(s) {
            c -= big_pow(q, k as u64) * go(r - k, s - k, q, memo);
        }
        memo.insert((r, s), c.clone());
        c
    }
    go(r, s, q, &mut HashMap::new())
}

/// `q^(r+s)(1 - q^-1 - 2q^-d + 2q^-2d)`, unclamped.
pub fn coprime_avoiding_lower_exact(r: usize, s: usize, d: usize, q: u64) -> Result<Rational> {
    check_q(q)?;
    if d == 0 || d > r.min(s) {
        return Err(Error::Precondition(format!("need 1 <= d <= min(r, s), got d={d}, r={r}, s={s}")));
    }
    let d = d as i64;
    let factor = int(1) - qpow(q, -1) - int(2) * qpow(q, -d) + int(2) * qpow(q, -2 * d);
    Ok(qpow(q, (r + s) as i64) * factor)
}

/// Lower bound on coprime pairs `(a, b)` with `gcd(f, ab) = 1` for a fixed
/// irreducible `f` of degree `d`, floored and clamped at zero.
pub fn coprime_avoiding_lower(r: usize, s: usize, d: usize, q: u64) -> Result<BigInt> {
    let x = coprime_avoiding_lower_exact(r, s, d, q)?;
    Ok(floor_to_int(&x).max(BigInt::zero()))
}

/// `(q^d - 1)^2 q^d`, the centralizer of `diag(C(f), C(f))` in `GL(V_0)_{U_0}`, `deg f = d`.
pub fn centralizer_double_companion(d: usize, q: u64) -> Result<BigInt> {
    check_q(q)?;
    let qd = big_pow(q, d as u64);
    Ok((&qd - 1) * (&qd - 1) * qd)
}

/// `|GL(V_0)_{U_0}| = q^(3d^2) omega(d,q)^2` for `dim V_0 = 2d`, `dim U_0 = d`.
pub fn double_stabilizer_order(d: usize, q: u64) -> Result<BigInt> {
    check_q(q)?;
    let x = qpow(q, 3 * (d * d) as i64) * omega(d, q) * omega(d, q);
    debug_assert!(x.is_integer());
    Ok(x.to_integer())
}

/// `q^(3(d^2-d)) omega(d,q)^2 / (1 - q^-d)^2`.
pub fn class_size_double_companion(d: usize, q: u64) -> Result<BigInt> {
    check_q(q)?;
    let di = d as i64;
    let one_minus = int(1) - qpow(q, -di);
    let x = qpow(q, 3 * (di * di - di)) * omega(d, q) * omega(d, q) / (&one_minus * &one_minus);
    if !x.is_integer() {
        return Err(Error::Precondition(format!("class size is not integral for d={d}, q={q}")));
    }
    Ok(x.to_integer())
}

/// Bounds on the non-cyclic proportion in the full algebra `M(d, q)`:
/// `(q^-3/(1+q^-1), q^-3/((1-q^-1)(1-q^-2)))` for `d >= 2`, `(0, 0)` for `d = 1`.
pub fn np_bounds(d: usize, q: u64) -> Result<(Rational, Rational)> {
    check_q(q)?;
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    if d == 1 {
        return Ok((int(0), int(0)));
    }
    let q3 = qpow(q, -3);
    let lower = &q3 / (int(1) + qpow(q, -1));
    let upper = &q3 / ((int(1) - qpow(q, -1)) * (int(1) - qpow(q, -2)));
    Ok((lower, upper))
}

/// The looser `(2/3) q^-3 <= P <= (8/3) q^-3`.
pub fn np_bounds_simplified(q: u64) -> Result<(Rational, Rational)> {
    check_q(q)?;
    Ok((frac(2, 3) * qpow(q, -3), frac(8, 3) * qpow(q, -3)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi3Upper {
    /// `q^-2/(1-q^-1)^2 + sum_{d=2..min(r,n-r)} ((q^d - q)/d) q^-3d / (1-q^-d)^2`.
    pub finite_sum: Rational,
    /// `q^-2 (1 + 58 q^-1 / 9)`.
    pub closed_form: Rational,
}

pub fn pi3_upper(n: usize, r: usize, q: u64) -> Result<Pi3Upper> {
    check_instance(n, r, q)?;
    let one_minus = int(1) - qpow(q, -1);
    let mut sum = qpow(q, -2) / (&one_minus * &one_minus);
    for d in 2..=r.min(n - r) as i64 {
        let irr = Rational::new(BigInt::from(q).pow(d as u32) - q, BigInt::from(d));
        let denom = int(1) - qpow(q, -d);
        sum += irr * qpow(q, -3 * d) / (&denom * &denom);
    }
    let closed = qpow(q, -2) * (int(1) + frac(58, 9) * qpow(q, -1));
    Ok(Pi3Upper { finite_sum: sum, closed_form: closed })
}

/// Lower bound for the case (iii) proportion. Uses `min(r, n-r)`: exact
/// `q^-2` when `n = 2`, `q^-2 (1-q^-2-q^-3-q^-4)^2 (1-q^-1)` when the
/// smaller block has dimension one, otherwise `q^-2 (1 - 3q^-1 + 4q^-3)`.
pub fn pi3_lower(n: usize, r: usize, q: u64) -> Result<Rational> {
    check_instance(n, r, q)?;
    let s = r.min(n - r);
    let q2 = qpow(q, -2);
    Ok(if n == 2 {
        q2
    } else if s == 1 {
        let inner = int(1) - qpow(q, -2) - qpow(q, -3) - qpow(q, -4);
        q2 * &inner * &inner * (int(1) - qpow(q, -1))
    } else {
        q2 * (int(1) - int(3) * qpow(q, -1) + int(4) * qpow(q, -3))
    })
}

/// `q^-2 (1 - 2 q^-1)`, the uniform form used in the two-sided bound. It is
/// larger than the `r >= 2` form of [`pi3_lower`] once `q > 2`.
pub fn pi3_lower_uniform(q: u64) -> Result<Rational> {
    check_q(q)?;
    Ok(qpow(q, -2) * (int(1) - int(2) * qpow(q, -1)))
}

/// Constants of the two-sided bound `q^-2 (1 + c q^-1)`.
pub const THEOREM_C1: (i64, i64) = (-4, 3);
pub const THEOREM_C2: (i64, i64) = (35, 3);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremBounds {
    pub lower: Rational,
    pub upper: Rational,
    /// The upper bound is at least one and says nothing (happens for q = 2).
    pub upper_vacuous: bool,
}

pub fn theorem_bounds(n: usize, r: usize, q: u64) -> Result<TheoremBounds> {
    check_instance(n, r, q)?;
    let c1 = frac(THEOREM_C1.0, THEOREM_C1.1);
    let c2 = frac(THEOREM_C2.0, THEOREM_C2.1);
    let lower = qpow(q, -2) * (int(1) + c1 * qpow(q, -1));
    let upper = qpow(q, -2) * (int(1) + c2 * qpow(q, -1));
    let upper_vacuous = upper >= int(1);
    Ok(TheoremBounds { lower, upper, upper_vacuous })
}

/// Checks `omega(m, q) > 1 - q^-1 - q^-2 + q^-5` for every `m <= n_max`.
pub fn pentagonal_check(q: u64, n_max: usize) -> Result<bool> {
    check_q(q)?;
    let bound = int(1) - qpow(q, -1) - qpow(q, -2) + qpow(q, -5);
    let mut w = int(1);
    for m in 0..=n_max as i64 {
        if m > 0 {
            w *= int(1) - qpow(q, -m);
        }
        if w <= bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every formula evaluated at one instance `(n, r, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub r: usize,
    pub q: u64,
    #[serde(with = "rational_serde")]
    pub theorem_lower: Rational,
    #[serde(with = "rational_serde")]
    pub theorem_upper: Rational,
    pub theorem_upper_vacuous: bool,
    #[serde(with = "rational_serde")]
    pub pi3_lower: Rational,
    #[serde(with = "rational_serde")]
    pub pi3_lower_uniform: Rational,
    /// Finite-sum form.
    #[serde(with = "rational_serde")]
    pub pi3_upper: Rational,
    #[serde(with = "rational_serde")]
    pub pi3_upper_closed: Rational,
    /// Full-algebra bounds for `d >= 2`.
    #[serde(with = "rational_serde")]
    pub np_lower: Rational,
    #[serde(with = "rational_serde")]
    pub np_upper: Rational,
    pub orders: Orders,
}

impl BoundsReport {
    pub fn new(n: usize, r: usize, q: u64) -> Result<Self> {
        check_instance(n, r, q)?;
        let thm = theorem_bounds(n, r, q)?;
        let up = pi3_upper(n, r, q)?;
        let (np_lower, np_upper) = np_bounds(2, q)?;
        Ok(BoundsReport {
            n,
            r,
            q,
            theorem_lower: thm.lower,
            theorem_upper: thm.upper,
            theorem_upper_vacuous: thm.upper_vacuous,
            pi3_lower: pi3_lower(n, r, q)?,
            pi3_lower_uniform: pi3_lower_uniform(q)?,
            pi3_upper: up.finite_sum,
            pi3_upper_closed: up.closed_form,
            np_lower,
            np_upper,
            orders: orders(n, r, q)?,
        })
    }
}

/// Convenience for `1 - series(q)`, the limiting non-cyclic proportion.
pub fn table_noncyclic_limit(r: usize, mode: Mode, q: u64) -> Result<Rational> {
    Ok(int(1) - table_series(r, mode)?.eval(q))
}
