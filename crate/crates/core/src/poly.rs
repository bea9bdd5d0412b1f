//! Polynomials over `F_q`, stored constant term first.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::matspace::Mat;

/// Default cap on the number of candidates scanned by polynomial enumeration.
pub const POLY_ENUM_CAP: u64 = 1 << 20;

/// Degree bound for the trial-division irreducibility route.
const TRIAL_MAX_DEGREE: usize = 8;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    DivMod,
    Gcd,
}

/// Result of [`Poly::arith`]: a polynomial, or a quotient/remainder pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyResult {
    Single(Poly),
    Pair(Poly, Poly),
}

impl Poly {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<u32>) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| !field.contains(c)) {
            return Err(Error::InvalidElement(format!("{c} is not an element of {}", field.describe())));
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(Poly { field: field.clone(), coeffs })
    }

    /// Unchecked constructor for coefficients known to be canonical.
    pub(crate) fn from_raw(field: &FieldSpec, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec) -> Self {
        Poly { field: field.clone(), coeffs: vec![1] }
    }

    /// The indeterminate `t`.
    pub fn t(field: &FieldSpec) -> Self {
        Poly { field: field.clone(), coeffs: vec![0, 1] }
    }

    /// `t - lambda`.
    pub fn linear(field: &FieldSpec, lambda: u32) -> Self {
        Poly::from_raw(field, vec![field.neg(lambda), 1])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn lead(&self) -> Option<u32> {
        self.coeffs.last().copied()
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::from_raw(f, c)
    }

    pub fn neg(&self) -> Poly {
        Poly::from_raw(&self.field, self.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_raw(f, out)
    }

    pub fn scale(&self, c: u32) -> Poly {
        Poly::from_raw(&self.field, self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect())
    }

    /// `(quotient, remainder)` with `deg remainder < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor)?;
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.lead().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if c != 0 {
                for (j, &b) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] = f.sub(rem[i + j], f.mul(c, b));
                }
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_raw(f, quot), Poly::from_raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        self.divmod(divisor).map(|(_, r)| r)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        matches!(other.rem(self), Ok(r) if r.is_zero())
    }

    /// Scales to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.lead() {
            None | Some(1) => self.clone(),
            Some(l) => self.scale(self.field.inv(l).unwrap()),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `(g, s, u)` with `g = s*self + u*other`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check(other)?;
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut u0, mut u1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s2 = s0.sub(&q.mul(&s1));
            let u2 = u0.sub(&q.mul(&u1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            u0 = std::mem::replace(&mut u1, u2);
        }
        match r0.lead() {
            None | Some(1) => Ok((r0, s0, u0)),
            Some(l) => {
                let il = f.inv(l).unwrap();
                Ok((r0.scale(il), s0.scale(il), u0.scale(il)))
            }
        }
    }

    /// Monic lcm of two nonzero polynomials.
    pub fn lcm(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let g = self.gcd(other)?;
        let (q, _) = self.divmod(&g)?;
        Ok(q.mul(other).monic())
    }

    pub fn arith(&self, other: &Poly, op: PolyOp) -> Result<PolyResult> {
        self.check(other)?;
        Ok(match op {
            PolyOp::Add => PolyResult::Single(self.add(other)),
            PolyOp::Sub => PolyResult::Single(self.sub(other)),
            PolyOp::Mul => PolyResult::Single(self.mul(other)),
            PolyOp::DivMod => {
                let (q, r) = self.divmod(other)?;
                PolyResult::Pair(q, r)
            }
            PolyOp::Gcd => PolyResult::Single(self.gcd(other)?),
        })
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(m)?;
        let mut acc = Poly::one(&self.field).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    fn require_monic_nonconstant(&self) -> Result<usize> {
        match self.degree() {
            Some(d) if d >= 1 && self.is_monic() => Ok(d),
            _ => Err(Error::Precondition(format!("expected a monic polynomial of degree >= 1, got {self}"))),
        }
    }

    /// Irreducibility over `F_q`. Small degrees use trial division by the
    /// enumerated irreducibles, larger ones the distinct-degree test.
    pub fn is_irreducible(&self) -> Result<bool> {
        let d = self.require_monic_nonconstant()?;
        let q = self.field.q() as u64;
        let trial_ok = d <= TRIAL_MAX_DEGREE && q.checked_pow((d / 2) as u32).is_some_and(|c| c <= POLY_ENUM_CAP);
        if trial_ok {
            self.is_irreducible_trial()
        } else {
            self.is_irreducible_ddf()
        }
    }

    /// Trial division by every monic irreducible of degree `1..=deg/2`.
    pub fn is_irreducible_trial(&self) -> Result<bool> {
        let d = self.require_monic_nonconstant()?;
        for e in 1..=d / 2 {
            for g in irreducible_coeffs(&self.field, e)?.iter() {
                let g = Poly::from_raw(&self.field, g.clone());
                if g.divides(self) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Distinct-degree test: `gcd(f, t^(q^i) - t) = 1` for `i <= deg/2`.
    pub fn is_irreducible_ddf(&self) -> Result<bool> {
        let d = self.require_monic_nonconstant()?;
        let q = self.field.q() as u64;
        let t = Poly::t(&self.field);
        let mut h = t.rem(self)?;
        for _ in 1..=d / 2 {
            h = h.pow_mod(q, self)?;
            if !self.gcd(&h.sub(&t))?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Row companion matrix: ones on the superdiagonal, last row `-a_0 .. -a_{r-1}`.
    pub fn companion(&self) -> Result<Mat> {
        let r = self.require_monic_nonconstant()?;
        let f = &self.field;
        let mut m = Mat::zero(f, r, r);
        for i in 0..r - 1 {
            m.set(i, i + 1, 1);
        }
        for j in 0..r {
            m.set(r - 1, j, f.neg(self.coeff(j)));
        }
        Ok(m)
    }

    /// Parses `c0+c1*t+...+t^d`. Extension-field coefficients may be
    /// parenthesised polynomials in `z`.
    pub fn parse(field: &FieldSpec, s: &str) -> Result<Poly> {
        let mut coeffs: Vec<u32> = Vec::new();
        for term in split_top_level(s, '+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in '{s}'")));
            }
            let (coef, exp) = match term.rfind('t') {
                None => (field.parse_elem(term)?, 0usize),
                Some(i) => {
                    let head = term[..i].trim();
                    let head = head.strip_suffix('*').unwrap_or(head).trim();
                    let coef = match head {
                        "" => 1,
                        "-" => field.neg(1),
                        h => field.parse_elem(h)?,
                    };
                    let tail = term[i + 1..].trim();
                    let exp = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|e| e.trim().parse().ok())
                            .ok_or_else(|| Error::Parse(format!("bad exponent in term '{term}'")))?
                    };
                    (coef, exp)
                }
            };
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, 0);
            }
            coeffs[exp] = field.add(coeffs[exp], coef);
        }
        Ok(Poly::from_raw(field, coeffs))
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Renders coefficients (constant first) as `c0+c1*v+...+v^d`.
pub fn format_coeffs(field: &FieldSpec, coeffs: &[u32], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut cs = field.format_elem(c);
        if cs.contains('+') {
            cs = format!("({cs})");
        }
        terms.push(match (i, c) {
            (0, _) => cs,
            (1, 1) => var.to_string(),
            (1, _) => format!("{cs}*{var}"),
            (_, 1) => format!("{var}^{i}"),
            _ => format!("{cs}*{var}^{i}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_coeffs(&self.field, &self.coeffs, "t"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// All monic polynomials of degree `d`, in ascending packed order of the
/// lower coefficients (highest coefficient most significant).
pub fn monic_polys(field: &FieldSpec, d: usize) -> Result<impl Iterator<Item = Poly> + '_> {
    let q = field.q() as u64;
    let count = q
        .checked_pow(d as u32)
        .filter(|&c| c <= POLY_ENUM_CAP)
        .ok_or(Error::CapExceeded { required: q.saturating_pow(d as u32), cap: POLY_ENUM_CAP })?;
    Ok((0..count).map(move |mut idx| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((idx % q) as u32);
            idx /= q;
        }
        c.push(1);
        Poly { field: field.clone(), coeffs: c }
    }))
}

type IrrKey = (u32, u32, Vec<u32>, usize);

fn irr_cache() -> &'static Mutex<HashMap<IrrKey, Arc<Vec<Vec<u32>>>>> {
    static CACHE: OnceLock<Mutex<HashMap<IrrKey, Arc<Vec<Vec<u32>>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn irreducible_coeffs(field: &FieldSpec, d: usize) -> Result<Arc<Vec<Vec<u32>>>> {
    let key = (field.p(), field.k(), field.modulus().map(<[u32]>::to_vec).unwrap_or_default(), d);
    if let Some(hit) = irr_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let mut found = Vec::new();
    for cand in monic_polys(field, d)? {
        if d == 1 || cand.is_irreducible()? {
            found.push(cand.coeffs);
        }
    }
    let found = Arc::new(found);
    irr_cache().lock().unwrap().insert(key, found.clone());
    Ok(found)
}

/// All monic irreducibles of degree `d` over `field`, in [`monic_polys`] order.
pub fn irr_enumerate(d: usize, field: &FieldSpec) -> Result<Vec<Poly>> {
    if d == 0 {
        return Err(Error::Precondition("degree must be at least 1".into()));
    }
    Ok(irreducible_coeffs(field, d)?.iter().map(|c| Poly::from_raw(field, c.clone())).collect())
}

/// Number of monic irreducibles of degree `d` over `F_q`: `(1/d) sum_{e|d} mu(e) q^(d/e)`.
pub fn irreducible_count(d: u32, q: u64) -> u64 {
    let mut total: i128 = 0;
    for e in 1..=d {
        if d.is_multiple_of(e) {
            total += mobius(e) as i128 * (q as i128).pow(d / e);
        }
    }
    (total / d as i128) as u64
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Distinct monic irreducible factors with multiplicities, by trial division
/// against cached irreducible lists.
pub fn factor(a: &Poly) -> Result<Vec<(Poly, usize)>> {
    a.require_monic_nonconstant()?;
    let field = a.field.clone();
    let mut rest = a.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while let Some(deg) = rest.degree().filter(|&deg| deg >= 1) {
        if deg < 2 * d {
            out.push((rest.clone(), 1));
            break;
        }
        for g in irreducible_coeffs(&field, d)?.iter() {
            let g = Poly::from_raw(&field, g.clone());
            let mut mult = 0;
            loop {
                let (q, r) = rest.divmod(&g)?;
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((g, mult));
            }
        }
        d += 1;
    }
    out.sort_by(|x, y| x.0.degree().cmp(&y.0.degree()).then_with(|| x.0.coeffs.cmp(&y.0.coeffs)));
    Ok(out)
}
