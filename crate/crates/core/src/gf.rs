//! Finite fields `F_q`, `q = p^k`, small enough for exhaustive experiments.
//!
//! Elements are packed into a `u32`: the coefficient vector `(c_0, .., c_{k-1})`
//! of the polynomial basis becomes `c_0 + c_1 p + .. + c_{k-1} p^{k-1}`. For
//! prime fields this is just the residue. Packed order is the canonical order
//! used by [`FieldSpec::elements`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted at construction.
pub const MAX_ORDER: u32 = 1 << 16;

/// Default cap for element enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 16;

#[derive(Debug)]
struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus over `F_p`, constant term first, length `k + 1`. Empty for `k = 1`.
    modulus: Vec<u32>,
    /// Inverses mod p (prime fields only).
    inv_p: Vec<u32>,
    /// log/antilog over a primitive element (extension fields only).
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// A finite field. Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k` if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    if !is_prime(p) {
        return None;
    }
    let (mut m, mut k) = (q, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p as u32, k))
}

// Dense polynomial helpers over F_p, used before a FieldSpec exists.
fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m monic
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - lead) * c % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut out);
    out
}

fn unpack(v: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    let mut v = v;
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    out
}

fn pack(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn fp_is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut cand = unpack(low as u32, p, d);
            cand.push(1);
            if fp_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds `F_{p^k}`. For `k > 1` without a modulus, the first monic
    /// irreducible of degree `k` in packed order is used.
    pub fn new(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_ORDER as u64).ok_or_else(|| {
            Error::InvalidField(format!("{p}^{k} exceeds the supported order {MAX_ORDER}"))
        })? as u32;
        let modulus = match (k, modulus) {
            (1, Some(_)) => {
                return Err(Error::InvalidField("a prime field takes no modulus".into()));
            }
            (1, None) => Vec::new(),
            (_, Some(m)) => {
                if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField(format!(
                        "modulus must be monic of degree {k} with coefficients in [0, {p})"
                    )));
                }
                if !fp_is_irreducible(m, p) {
                    return Err(Error::InvalidField("modulus is reducible".into()));
                }
                m.to_vec()
            }
            (_, None) => {
                let count = (p as u64).pow(k);
                (0..count)
                    .map(|low| {
                        let mut c = unpack(low as u32, p, k as usize);
                        c.push(1);
                        c
                    })
                    .find(|c| fp_is_irreducible(c, p))
                    .expect("irreducible polynomials exist in every degree")
            }
        };
        let mut inner = Inner { p, k, q, modulus, inv_p: Vec::new(), log: Vec::new(), exp: Vec::new() };
        if k == 1 {
            inner.inv_p = (0..p).map(|a| if a == 0 { 0 } else { pow_mod(a, p - 2, p) }).collect();
        } else {
            build_log_tables(&mut inner);
        }
        Ok(FieldSpec(Arc::new(inner)))
    }

    /// Prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// `F_q` for a prime power `q` with the default modulus.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, k, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    /// The modulus, constant term first (`None` for prime fields).
    pub fn modulus(&self) -> Option<&[u32]> {
        (self.0.k > 1).then_some(&self.0.modulus[..])
    }

    /// e.g. `F_4 = F_2[z]/(1+z+z^2)`.
    pub fn describe(&self) -> String {
        match self.modulus() {
            None => format!("F_{}", self.q()),
            Some(m) => {
                let prime = FieldSpec::prime(self.p()).expect("p is prime");
                let text = crate::poly::format_coeffs(&prime, m, "z");
                format!("F_{} = F_{}[z]/({})", self.q(), self.p(), text)
            }
        }
    }

    #[inline]
    pub fn zero(&self) -> u32 {
        0
    }

    #[inline]
    pub fn one(&self) -> u32 {
        1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a + b;
            if s >= p {
                s - p
            } else {
                s
            }
        } else if p == 2 {
            a ^ b
        } else {
            let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
            while a > 0 || b > 0 {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if self.0.k == 1 {
            if a == 0 {
                0
            } else {
                p - a
            }
        } else if p == 2 {
            a
        } else {
            let (mut a, mut out, mut place) = (a, 0, 1);
            while a > 0 {
                out += ((p - a % p) % p) * place;
                a /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.0.k == 1 {
            a * b % self.0.p
        } else if a == 0 || b == 0 {
            0
        } else {
            let n = self.0.q - 1;
            let s = self.0.log[a as usize] + self.0.log[b as usize];
            self.0.exp[(if s >= n { s - n } else { s }) as usize]
        }
    }

    /// Multiplication straight from the polynomial representation.
    pub fn mul_schoolbook(&self, a: u32, b: u32) -> u32 {
        if self.0.k == 1 {
            return a * b % self.0.p;
        }
        mul_poly_repr(&self.0, a, b)
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else if self.0.k == 1 {
            Some(self.0.inv_p[a as usize])
        } else {
            let n = self.0.q - 1;
            let l = self.0.log[a as usize];
            Some(self.0.exp[((n - l) % n) as usize])
        }
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let (mut base, mut e, mut acc) = (a, e, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// True if `v` is a canonical packed representative.
    pub fn contains(&self, v: u32) -> bool {
        v < self.0.q
    }

    /// All `q` elements in ascending packed order.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.q()).map(|v| FieldElement { field: self.clone(), value: v }).collect()
    }

    pub fn elements_with_cap(&self, cap: u64) -> Result<Vec<FieldElement>> {
        if self.q() as u64 > cap {
            return Err(Error::CapExceeded { required: self.q() as u64, cap });
        }
        Ok(self.elements())
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if !self.contains(value) {
            return Err(Error::InvalidElement(format!("{value} is not a canonical element of {}", self.describe())));
        }
        Ok(FieldElement { field: self.clone(), value })
    }

    /// Coefficient vector of length `k` over `F_p`.
    pub fn coords(&self, v: u32) -> Vec<u32> {
        unpack(v, self.0.p, self.0.k as usize)
    }

    pub fn from_coords(&self, c: &[u32]) -> Result<u32> {
        if c.len() > self.0.k as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(Error::InvalidElement(format!("{c:?} is not a coefficient vector of {}", self.describe())));
        }
        Ok(pack(c, self.0.p))
    }

    /// Text form: residue for prime fields, polynomial in `z` otherwise.
    pub fn format_elem(&self, v: u32) -> String {
        if self.is_prime_field() {
            v.to_string()
        } else {
            let prime = FieldSpec::prime(self.p()).expect("p is prime");
            crate::poly::format_coeffs(&prime, &self.coords(v), "z")
        }
    }

    /// Parses an element: an integer (reduced mod p), or for extension fields
    /// a `+`-separated sum of terms `c`, `c*z^i`, `z^i`, `z`.
    pub fn parse_elem(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        let s = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s).trim();
        if let Ok(n) = s.parse::<i64>() {
            return Ok(self.from_int(n));
        }
        if self.is_prime_field() {
            return Err(Error::Parse(format!("invalid element '{s}' of {}", self.describe())));
        }
        let mut coords = vec![0u32; self.k() as usize];
        for term in s.split('+') {
            let (coef, exp) = parse_monomial(term.trim(), "z")
                .ok_or_else(|| Error::Parse(format!("invalid element term '{term}'")))?;
            if exp >= self.k() as usize {
                return Err(Error::Parse(format!("power z^{exp} is not reduced in {}", self.describe())));
            }
            let p = self.p() as i64;
            coords[exp] = ((coords[exp] as i64 + coef).rem_euclid(p)) as u32;
        }
        self.from_coords(&coords)
    }
}

/// Splits `c*x^e`, `x^e`, `c*x`, `x`, `c` into `(c, e)`.
pub(crate) fn parse_monomial(term: &str, var: &str) -> Option<(i64, usize)> {
    if term.is_empty() {
        return None;
    }
    let (coef, rest) = match term.find(var) {
        None => return term.parse::<i64>().ok().map(|c| (c, 0)),
        Some(0) => (1, term),
        Some(i) => {
            let c = term[..i].trim().strip_suffix('*')?.trim();
            let c = if c == "-" { -1 } else { c.parse::<i64>().ok()? };
            (c, &term[i..])
        }
    };
    let rest = rest.strip_prefix(var)?.trim();
    let exp = if rest.is_empty() { 1 } else { rest.strip_prefix('^')?.trim().parse().ok()? };
    Some((coef, exp))
}

fn pow_mod(a: u32, e: u32, p: u32) -> u32 {
    let (mut base, mut e, mut acc) = (a as u64, e, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn mul_poly_repr(inner: &Inner, a: u32, b: u32) -> u32 {
    let (p, k) = (inner.p, inner.k as usize);
    let prod = fp_mul(&unpack(a, p, k), &unpack(b, p, k), p);
    pack(&fp_rem(&prod, &inner.modulus, p), p)
}

fn build_log_tables(inner: &mut Inner) {
    let q = inner.q;
    let n = q - 1;
    // Smallest primitive element in packed order.
    let mut exp = vec![0u32; n as usize];
    for g in 2..q {
        let mut x = 1;
        let mut ok = true;
        for (i, slot) in exp.iter_mut().enumerate() {
            if i > 0 && x == 1 {
                ok = false;
                break;
            }
            *slot = x;
            x = mul_poly_repr(inner, x, g);
        }
        if ok && x == 1 {
            break;
        }
    }
    let mut log = vec![0u32; q as usize];
    for (i, &x) in exp.iter().enumerate() {
        log[x as usize] = i as u32;
    }
    inner.exp = exp;
    inner.log = log;
}

/// A field element bundled with its field, for checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldSpec,
    value: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Pow(u64),
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn wrap(&self, value: u32) -> Self {
        FieldElement { field: self.field.clone(), value }
    }

    /// Applies `op`; `Inv` and `Pow` ignore `b`.
    pub fn arith(&self, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        self.same_field(b)?;
        let f = &self.field;
        let v = match op {
            ArithOp::Add => f.add(self.value, b.value),
            ArithOp::Sub => f.sub(self.value, b.value),
            ArithOp::Mul => f.mul(self.value, b.value),
            ArithOp::Div => f.div(self.value, b.value).ok_or(Error::DivisionByZero)?,
            ArithOp::Inv => return self.inv(),
            ArithOp::Pow(e) => f.pow(self.value, e),
        };
        Ok(self.wrap(v))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        self.field.inv(self.value).map(|v| self.wrap(v)).ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.wrap(self.field.pow(self.value, e))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_elem(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_elem(self.value))
    }
}
