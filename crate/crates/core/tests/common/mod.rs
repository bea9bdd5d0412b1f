//! Independent reference implementations over prime fields.
//!
//! Nothing here calls into the library: matrices are `Vec<Vec<i64>>` reduced
//! mod `p`, polynomials are coefficient vectors, and every count is a plain
//! enumeration.
#![allow(dead_code)]

pub type M = Vec<Vec<i64>>;

pub fn md(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

pub fn identity(n: usize) -> M {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mul(a: &M, b: &M, p: i64) -> M {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![0; m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] = (out[i][j] + a[i][l] * b[l][j]) % p;
            }
        }
    }
    out
}

fn inv_mod(a: i64, p: i64) -> i64 {
    let mut r = 1;
    for _ in 0..p - 2 {
        r = r * a % p;
    }
    r
}

/// Rank of a list of row vectors.
pub fn rank(rows: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| md(x, p)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rk = 0;
    for c in 0..cols {
        let Some(piv) = (rk..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rk, piv);
        let inv = inv_mod(m[rk][c], p);
        for x in m[rk].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != rk && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = md(m[i][j] - f * m[rk][j], p);
                }
            }
        }
        rk += 1;
    }
    rk
}

pub fn is_invertible(a: &M, p: i64) -> bool {
    rank(a, p) == a.len()
}

/// Cyclic iff `I, X, ..., X^(n-1)` are linearly independent, i.e. the
/// minimal polynomial has degree `n`.
pub fn is_cyclic(x: &M, p: i64) -> bool {
    let n = x.len();
    let mut pw = identity(n);
    let mut flat = Vec::with_capacity(n);
    for _ in 0..n {
        flat.push(pw.iter().flatten().copied().collect::<Vec<_>>());
        pw = mul(&pw, x, p);
    }
    rank(&flat, p) == n
}

/// The `idx`-th matrix in base-`p` order.
pub fn mat_from_index(mut idx: u64, rows: usize, cols: usize, p: i64) -> M {
    let mut m = vec![vec![0; cols]; rows];
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x = (idx % p as u64) as i64;
            idx /= p as u64;
        }
    }
    m
}

pub fn all_mats(rows: usize, cols: usize, p: i64) -> Vec<M> {
    let count = (p as u64).pow((rows * cols) as u32);
    (0..count).map(|i| mat_from_index(i, rows, cols, p)).collect()
}

/// `(A 0 / C B)`.
pub fn block(a: &M, b: &M, c: &M) -> M {
    let (r, s) = (a.len(), b.len());
    let mut x = vec![vec![0; r + s]; r + s];
    for i in 0..r {
        x[i][..r].copy_from_slice(&a[i]);
    }
    for i in 0..s {
        x[r + i][..r].copy_from_slice(&c[i]);
        x[r + i][r..].copy_from_slice(&b[i]);
    }
    x
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub total: u64,
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
}

impl Census {
    pub fn noncyclic(&self) -> u64 {
        self.n1 + self.n2 + self.n3
    }
}

/// Classifies every `(A 0 / C B)` by building `X` and testing it directly.
pub fn census(n: usize, r: usize, p: i64, group: bool) -> Census {
    let s = n - r;
    let keep = |m: &M| !group || is_invertible(m, p);
    let a_list: Vec<(M, bool)> = all_mats(r, r, p).into_iter().filter(keep).map(|a| { let c = is_cyclic(&a, p); (a, c) }).collect();
    let b_list: Vec<(M, bool)> = all_mats(s, s, p).into_iter().filter(keep).map(|b| { let c = is_cyclic(&b, p); (b, c) }).collect();
    let cs = all_mats(s, r, p);
    let mut out = Census::default();
    for (a, ac) in &a_list {
        for (b, bc) in &b_list {
            for c in &cs {
                out.total += 1;
                if is_cyclic(&block(a, b, c), p) {
                    continue;
                }
                if !ac {
                    out.n1 += 1;
                } else if !bc {
                    out.n2 += 1;
                } else {
                    out.n3 += 1;
                }
            }
        }
    }
    out
}

/// Number of cyclic `d x d` matrices.
pub fn cyclic_count(d: usize, p: i64) -> u64 {
    all_mats(d, d, p).iter().filter(|m| is_cyclic(m, p)).count() as u64
}

pub fn invertible_count(d: usize, p: i64) -> u64 {
    all_mats(d, d, p).iter().filter(|m| is_invertible(m, p)).count() as u64
}

/// `d`-dimensional subspaces of `F_p^r`, as ordered bases divided by `|GL(d)|`.
pub fn subspace_count(r: usize, d: usize, p: i64) -> u64 {
    let bases = all_mats(d, r, p).iter().filter(|m| rank(m, p) == d).count() as u64;
    bases / invertible_count(d, p)
}

// Polynomials: little-endian coefficient vectors, no trailing zeros.

pub fn trim(mut a: Vec<i64>) -> Vec<i64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn poly_rem(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let mut a = trim(a.to_vec());
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while a.len() > db {
        let shift = a.len() - 1 - db;
        let f = a[a.len() - 1] * inv % p;
        for (i, &c) in b.iter().enumerate() {
            a[shift + i] = md(a[shift + i] - f * c, p);
        }
        a = trim(a);
    }
    a
}

pub fn poly_gcd_degree(a: &[i64], b: &[i64], p: i64) -> usize {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x.len() - 1
}

pub fn monic(d: usize, p: i64) -> Vec<Vec<i64>> {
    (0..(p as u64).pow(d as u32))
        .map(|mut i| {
            let mut v: Vec<i64> = (0..d).map(|_| { let c = (i % p as u64) as i64; i /= p as u64; c }).collect();
            v.push(1);
            v
        })
        .collect()
}

/// Monic irreducibles of degree `d`, by trial division against every monic of
/// degree `1..=d/2`.
pub fn irreducibles(d: usize, p: i64) -> Vec<Vec<i64>> {
    monic(d, p)
        .into_iter()
        .filter(|f| (1..=d / 2).all(|e| monic(e, p).iter().all(|g| !poly_rem(f, g, p).is_empty())))
        .collect()
}

/// Coprime ordered pairs of monic polynomials of degrees `(r, s)`, optionally
/// restricted to pairs where neither is divisible by `avoid`.
pub fn coprime_pairs(r: usize, s: usize, p: i64, avoid: Option<&[i64]>) -> u64 {
    let ok = |g: &Vec<i64>| avoid.is_none_or(|f| !poly_rem(g, f, p).is_empty());
    let (gs, hs) = (monic(r, p), monic(s, p));
    let mut count = 0;
    for g in gs.iter().filter(|g| ok(g)) {
        for h in hs.iter().filter(|h| ok(h)) {
            if poly_gcd_degree(g, h, p) == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Companion matrix with ones on the superdiagonal and `-a_0..-a_{d-1}` in the last row.
pub fn companion(a: &[i64], p: i64) -> M {
    let d = a.len() - 1;
    let mut m = vec![vec![0; d]; d];
    for i in 0..d.saturating_sub(1) {
        m[i][i + 1] = 1;
    }
    for j in 0..d {
        m[d - 1][j] = md(-a[j], p);
    }
    m
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// `num/den` in lowest terms, matching the library's fraction text.
pub fn fraction(num: u64, den: u64) -> String {
    let g = gcd(num, den).max(1);
    format!("{}/{}", num / g, den / g)
}
