use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{big_pow, coprime_count, gl_order, orders};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::matspace::{Mat, Mode, Subspace};
use crate::poly::{factor, monic_polys, Poly};

use super::{build_report, validate, with_workers, DensityReport, Method};

pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EnumStrategy {
    /// Count cyclic blocks by characteristic polynomial and reduce the
    /// `C` block modulo the conjugation action of unipotent elements.
    Reduced,
    /// Iterate over every `(A, B, C)`.
    Brute,
}

#[derive(Clone, Debug)]
pub struct ExactOptions {
    /// Work limit: states visited for `Brute`, [`reduced_work`] for `Reduced`.
    pub budget: u64,
    pub strategy: EnumStrategy,
    /// `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { budget: DEFAULT_BUDGET, strategy: EnumStrategy::Reduced, workers: None }
    }
}

pub fn enumerate_exact(n: usize, r: usize, field: &FieldSpec, mode: Mode) -> Result<DensityReport> {
    enumerate_exact_with(n, r, field, mode, &ExactOptions::default())
}

/// Exact counts `n1, n2, n3` of non-cyclic elements in each case, and the
/// proportions over `|M(V)_U|` (algebra) or `|GL(V)_U|` (group).
pub fn enumerate_exact_with(n: usize, r: usize, field: &FieldSpec, mode: Mode, opts: &ExactOptions) -> Result<DensityReport> {
    validate(n, r, field)?;
    let q = field.q() as u64;
    let required = match opts.strategy {
        EnumStrategy::Reduced => reduced_work(n, r, q),
        EnumStrategy::Brute => big_pow(q, (n * n - n * r + r * r) as u64),
    };
    if required > BigInt::from(opts.budget) {
        return Err(Error::BudgetExceeded { required: required.to_string(), budget: opts.budget });
    }
    let counts = with_workers(opts.workers, || match opts.strategy {
        EnumStrategy::Reduced => reduced_counts(n, r, field, mode),
        EnumStrategy::Brute => brute_counts(n, r, field, mode),
    })??;
    let o = orders(n, r, q)?;
    let total = match mode {
        Mode::Algebra => o.algebra,
        Mode::Group => o.group,
    };
    let mut report = build_report(n, r, field, mode, Method::Exact, total, counts, None)?;
    report.strategy = Some(opts.strategy);
    Ok(report)
}

/// Number of cyclicity tests the reduced strategy performs, plus the
/// polynomial scans: `q^r + q^(n-r) + sum_k q^(2k) c(r-k, n-r-k)`, where
/// `c` counts coprime pairs. A pair `(a, b)` with `deg gcd(a, b) = k`
/// needs `q^k` tests.
pub fn reduced_work(n: usize, r: usize, q: u64) -> BigInt {
    let s = n - r;
    let mut w = big_pow(q, r as u64) + big_pow(q, s as u64);
    for k in 0..=r.min(s) {
        w += big_pow(q, 2 * k as u64) * coprime_count(r - k, s - k, q);
    }
    w
}

/// `|(F[t]/a)^x| = prod over f^e || a of q^(e deg f) - q^((e-1) deg f)`.
fn unit_count(a: &Poly) -> Result<BigInt> {
    let q = a.field().q() as u64;
    let mut u = BigInt::one();
    for (f, e) in factor(a)? {
        let d = f.degree().unwrap() as u64;
        u *= big_pow(q, d * e as u64) - big_pow(q, d * (e as u64 - 1));
    }
    Ok(u)
}

/// Each monic `a` of degree `d` (with `a(0) != 0` in group mode) and the
/// number of cyclic `d x d` matrices with characteristic polynomial `a`,
/// namely `|GL(d, q)| / |(F[t]/a)^x|`.
fn cyclic_classes(d: usize, field: &FieldSpec, mode: Mode) -> Result<Vec<(Poly, BigInt)>> {
    let gl = gl_order(d, field.q() as u64);
    let mut out = Vec::new();
    for a in monic_polys(field, d)? {
        if mode == Mode::Group && a.coeff(0) == 0 {
            continue;
        }
        let size = &gl / unit_count(&a)?;
        out.push((a, size));
    }
    Ok(out)
}

fn block_total(d: usize, q: u64, mode: Mode) -> BigInt {
    match mode {
        Mode::Algebra => big_pow(q, (d * d) as u64),
        Mode::Group => gl_order(d, q),
    }
}

fn embed(field: &FieldSpec, a: &Mat, b: &Mat, c: &[u32]) -> Mat {
    let (r, s) = (a.rows(), b.rows());
    let n = r + s;
    let mut x = Mat::zero(field, n, n);
    for i in 0..r {
        for j in 0..r {
            x.set(i, j, a.get(i, j));
        }
    }
    for i in 0..s {
        for j in 0..r {
            x.set(r + i, j, c[i * r + j]);
        }
        for j in 0..s {
            x.set(r + i, r + j, b.get(i, j));
        }
    }
    x
}

/// Pivot-free coordinates of `C` modulo the image of `K -> KA - BK`
/// (`K` is `s x r`), and the rank of that map. Conjugating by
/// `(I 0 / K I)` sends `C` to `C + KA - BK`, so every coset has the same
/// cyclicity behaviour and the same size `q^rank`.
fn coset_coordinates(field: &FieldSpec, a: &Mat, b: &Mat) -> (usize, Vec<usize>) {
    let (r, s) = (a.rows(), b.rows());
    let len = r * s;
    let image = Subspace::from_vectors(
        field,
        len,
        (0..s).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| {
            let mut v = vec![0u32; len];
            for c in 0..r {
                v[i * r + c] = field.add(v[i * r + c], a.get(j, c));
            }
            for x in 0..s {
                v[x * r + j] = field.sub(v[x * r + j], b.get(x, i));
            }
            v
        }),
    );
    let pivots: Vec<usize> = image.basis().iter().map(|row| row.iter().position(|&c| c != 0).unwrap()).collect();
    let free = (0..len).filter(|k| !pivots.contains(k)).collect();
    (image.dim(), free)
}

/// Non-cyclic elements `(C(a) 0 / C C(b))` over all `C`.
fn noncyclic_fibre(field: &FieldSpec, a: &Poly, b: &Poly) -> BigInt {
    let (ca, cb) = (a.companion().unwrap(), b.companion().unwrap());
    let (rank, free) = coset_coordinates(field, &ca, &cb);
    let q = field.q() as u64;
    let len = ca.rows() * cb.rows();
    let mut c = vec![0u32; len];
    let mut bad: u64 = 0;
    for idx in 0..q.pow(free.len() as u32) {
        let mut t = idx;
        for &k in &free {
            c[k] = (t % q) as u32;
            t /= q;
        }
        if !embed(field, &ca, &cb, &c).is_cyclic().unwrap() {
            bad += 1;
        }
    }
    BigInt::from(bad) * big_pow(q, rank as u64)
}

fn reduced_counts(n: usize, r: usize, field: &FieldSpec, mode: Mode) -> Result<[BigInt; 3]> {
    let s = n - r;
    let q = field.q() as u64;
    let ca = cyclic_classes(r, field, mode)?;
    let cb = cyclic_classes(s, field, mode)?;
    let cyc_a: BigInt = ca.iter().map(|(_, k)| k).sum();
    let cyc_b: BigInt = cb.iter().map(|(_, k)| k).sum();
    let non_a = block_total(r, q, mode) - &cyc_a;
    let non_b = block_total(s, q, mode) - &cyc_b;
    let c_space = big_pow(q, (r * s) as u64);
    let n1 = &non_a * block_total(s, q, mode) * &c_space;
    let n2 = &cyc_a * &non_b * &c_space;
    let n3 = ca
        .par_iter()
        .map(|(a, ka)| {
            cb.iter()
                .map(|(b, kb)| {
                    let fibre = noncyclic_fibre(field, a, b);
                    if fibre.is_zero() {
                        fibre
                    } else {
                        ka * kb * fibre
                    }
                })
                .sum::<BigInt>()
        })
        .sum();
    Ok([n1, n2, n3])
}

/// All `d x d` matrices (or invertible ones) with their cyclicity.
fn all_blocks(d: usize, field: &FieldSpec, mode: Mode) -> Vec<(Mat, bool)> {
    let q = field.q() as u64;
    let mut out = Vec::new();
    for idx in 0..q.pow((d * d) as u32) {
        let mut t = idx;
        let rows: Vec<Vec<u32>> = (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let v = (t % q) as u32;
                        t /= q;
                        v
                    })
                    .collect()
            })
            .collect();
        let m = Mat::from_rows(field, &rows).unwrap();
        if mode == Mode::Group && m.det().unwrap() == 0 {
            continue;
        }
        let cyc = m.is_cyclic().unwrap();
        out.push((m, cyc));
    }
    out
}

fn brute_counts(n: usize, r: usize, field: &FieldSpec, mode: Mode) -> Result<[BigInt; 3]> {
    let s = n - r;
    let q = field.q() as u64;
    let blocks_a = all_blocks(r, field, mode);
    let blocks_b = all_blocks(s, field, mode);
    let c_space = q.pow((r * s) as u32);
    let (n1, n2, n3) = blocks_a
        .par_iter()
        .map(|(a, a_cyc)| {
            let mut acc = (0u64, 0u64, 0u64);
            let mut c = vec![0u32; r * s];
            for (b, b_cyc) in &blocks_b {
                if !a_cyc {
                    acc.0 += c_space;
                } else if !b_cyc {
                    acc.1 += c_space;
                } else {
                    for idx in 0..c_space {
                        let mut t = idx;
                        for v in c.iter_mut() {
                            *v = (t % q) as u32;
                            t /= q;
                        }
                        if !embed(field, a, b, &c).is_cyclic().unwrap() {
                            acc.2 += 1;
                        }
                    }
                }
            }
            acc
        })
        .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
    Ok([BigInt::from(n1), BigInt::from(n2), BigInt::from(n3)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{frac, Rational};

    fn f(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    #[test]
    fn n_two_law() {
        for q in [2u64, 3, 4, 5] {
            let rep = enumerate_exact(2, 1, &f(q), Mode::Algebra).unwrap();
            assert_eq!(rep.pi.value, frac(1, (q * q) as i64));
            assert_eq!((rep.n1.clone(), rep.n2.clone(), rep.n3.clone()), (BigInt::zero(), BigInt::zero(), BigInt::from(q)));
        }
    }

    #[test]
    fn unit_counts() {
        let f2 = f(2);
        let p = |s: &str| Poly::parse(&f2, s).unwrap();
        assert_eq!(unit_count(&p("t^2")).unwrap(), BigInt::from(2));
        assert_eq!(unit_count(&p("1+t+t^2")).unwrap(), BigInt::from(3));
        assert_eq!(unit_count(&p("t+t^2")).unwrap(), BigInt::from(1));
        // cyclic 2x2 over F_2: 16 - 2 scalars
        let total: BigInt = cyclic_classes(2, &f2, Mode::Algebra).unwrap().into_iter().map(|x| x.1).sum();
        assert_eq!(total, BigInt::from(14));
    }

    #[test]
    fn complement_dimension_is_gcd_degree() {
        let f3 = f(3);
        for a in monic_polys(&f3, 2).unwrap() {
            for b in monic_polys(&f3, 2).unwrap() {
                let (rank, free) = coset_coordinates(&f3, &a.companion().unwrap(), &b.companion().unwrap());
                assert_eq!(free.len(), a.gcd(&b).unwrap().degree().unwrap());
                assert_eq!(rank + free.len(), 4);
            }
        }
    }

    #[test]
    fn strategies_agree() {
        let brute = ExactOptions { strategy: EnumStrategy::Brute, ..Default::default() };
        for (n, r, q) in [(2, 1, 2), (3, 1, 2), (3, 2, 2), (3, 1, 3), (4, 2, 2), (3, 1, 4)] {
            for mode in [Mode::Algebra, Mode::Group] {
                let a = enumerate_exact(n, r, &f(q), mode).unwrap();
                let b = enumerate_exact_with(n, r, &f(q), mode, &brute).unwrap();
                assert_eq!((&a.n1, &a.n2, &a.n3), (&b.n1, &b.n2, &b.n3), "({n},{r},{q}) {mode}");
            }
        }
    }

    #[test]
    fn budget() {
        let err = enumerate_exact(10, 5, &f(5), Mode::Algebra).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        let tight = ExactOptions { budget: 100, strategy: EnumStrategy::Brute, workers: None };
        assert!(enumerate_exact_with(3, 1, &f(2), Mode::Algebra, &tight).is_err());
        assert!(reduced_work(10, 5, 5) > BigInt::from(DEFAULT_BUDGET));
    }

    #[test]
    fn group_totals() {
        let rep = enumerate_exact(3, 1, &f(2), Mode::Group).unwrap();
        assert_eq!(rep.total, BigInt::from(6 * 4));
        assert!(rep.pi.value > Rational::zero());
    }
}
