//! Exact rationals and their text renderings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Significant digits of every decimal rendering.
pub const DECIMAL_DIGITS: usize = 12;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `q^e` for any integer exponent.
pub fn qpow(q: u64, e: i64) -> Rational {
    let base = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(base)
    } else {
        Rational::new(BigInt::one(), base)
    }
}

pub fn big_pow(q: u64, e: u64) -> BigInt {
    BigInt::from(q).pow(e as u32)
}

/// `"num/den"` (denominator always written, even when one).
pub fn to_fraction_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_fraction(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Decimal rendering with `sig` significant digits, rounding half away from
/// zero, computed exactly so it is identical on every platform.
pub fn to_decimal_string(x: &Rational, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let a = x.abs();
    let ten = BigInt::from(10);
    let mut e = decimal_exponent(&a);
    let scaled = &a * pow10(sig as i64 - 1 - e);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut digits = if r * 2 >= *scaled.denom() { q + 1 } else { q };
    if digits == ten.pow(sig as u32) {
        digits /= 10;
        e += 1;
    }
    let ds = digits.to_string();
    let body = if e >= 0 {
        let int_len = e as usize + 1;
        if int_len >= sig {
            format!("{}{}", ds, "0".repeat(int_len - sig))
        } else {
            format!("{}.{}", &ds[..int_len], &ds[int_len..])
        }
    } else {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), ds)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn pow10(k: i64) -> Rational {
    let p = BigInt::from(10).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// `e` with `10^e <= |x| < 10^(e+1)`; `x` nonzero.
fn decimal_exponent(x: &Rational) -> i64 {
    let a = x.abs();
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    while a < pow10(e) {
        e -= 1;
    }
    while a >= pow10(e + 1) {
        e += 1;
    }
    e
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// `x` rounded to `sig` significant digits towards minus or plus infinity.
pub fn round_sig(x: &Rational, sig: usize, dir: Rounding) -> Rational {
    if x.is_zero() {
        return x.clone();
    }
    let shift = pow10(sig as i64 - 1 - decimal_exponent(x));
    let scaled = x * &shift;
    let r = match dir {
        Rounding::Down => scaled.floor(),
        Rounding::Up => scaled.ceil(),
    };
    r / shift
}

/// Exact value of a plain decimal such as `-0.0571` or `12`.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid decimal '{s}'"));
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (ip, fp) = t.split_once('.').unwrap_or((t, ""));
    if ip.is_empty() || !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
    let x = Rational::from_integer(digits) * pow10(-(fp.len() as i64));
    Ok(if neg { -x } else { x })
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

pub fn floor_to_int(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Serialized form of a rational: exact fraction plus a derived decimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalText {
    pub value: String,
    pub decimal: String,
}

impl From<&Rational> for RationalText {
    fn from(x: &Rational) -> Self {
        RationalText { value: to_fraction_string(x), decimal: to_decimal_string(x, DECIMAL_DIGITS) }
    }
}

/// `serde(with = ...)` adapter for [`Rational`] fields.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalText::from(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let t = RationalText::deserialize(d)?;
        parse_fraction(&t.value).map_err(serde::de::Error::custom)
    }
}

/// `serde(with = ...)` adapter writing big integers as decimal strings.
pub mod bigint_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let t = String::deserialize(d)?;
        t.parse().map_err(serde::de::Error::custom)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(to_decimal_string(&frac(1, 9), 12), "0.111111111111");
        assert_eq!(to_decimal_string(&frac(41, 24), 12), "1.70833333333");
        assert_eq!(to_decimal_string(&frac(2, 3), 3), "0.667");
        assert_eq!(to_decimal_string(&frac(-1, 8), 12), "-0.125000000000");
        assert_eq!(to_decimal_string(&int(123), 2), "120");
        assert_eq!(to_decimal_string(&frac(9999, 10000), 3), "1.00");
        assert_eq!(to_decimal_string(&frac(1, 1000), 2), "0.0010");
        assert_eq!(to_decimal_string(&int(0), 12), "0");
    }

    #[test]
    fn fractions() {
        assert_eq!(to_fraction_string(&frac(6, 8)), "3/4");
        assert_eq!(to_fraction_string(&int(5)), "5/1");
        assert_eq!(parse_fraction("-3/4").unwrap(), frac(-3, 4));
        assert_eq!(parse_fraction("7").unwrap(), int(7));
        assert!(parse_fraction("1/0").is_err());
        assert_eq!(qpow(3, -2), frac(1, 9));
    }

    #[test]
    fn rounding() {
        let x = frac(1, 3);
        assert_eq!(round_sig(&x, 3, Rounding::Down), frac(333, 1000));
        assert_eq!(round_sig(&x, 3, Rounding::Up), frac(334, 1000));
        assert_eq!(round_sig(&frac(-1, 3), 2, Rounding::Down), frac(-34, 100));
        assert_eq!(round_sig(&frac(9999, 1000), 2, Rounding::Up), int(10));
        assert_eq!(parse_decimal("-0.0571").unwrap(), frac(-571, 10000));
        assert_eq!(parse_decimal("12").unwrap(), int(12));
        assert!(parse_decimal("1e3").is_err());
        assert!(parse_decimal(".5").is_err());
        let r = round_sig(&frac(2, 7), 12, Rounding::Up);
        assert_eq!(parse_decimal(&to_decimal_string(&r, 12)).unwrap(), r);
    }
}
