use std::fmt;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::poly::Poly;

use super::subspace::Subspace;

/// Dense row-major matrix over `F_q`. Vectors are rows and act on the left: `v * X`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatOp {
    Add,
    Mul,
    Pow(u64),
    ScalarMul(u32),
}

impl Mat {
    pub fn zero(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Mat { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    pub fn scalar(field: &FieldSpec, n: usize, lambda: u32) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = lambda;
        }
        m
    }

    /// Elementary matrix with a single one at `(i, j)`.
    pub fn unit(field: &FieldSpec, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        m.set(i, j, 1);
        m
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        if let Some(&c) = rows.iter().flatten().find(|&&c| !field.contains(c)) {
            return Err(Error::InvalidElement(format!("{c} is not an element of {}", field.describe())));
        }
        Ok(Mat { field: field.clone(), rows: rows.len(), cols, data: rows.concat() })
    }

    pub(crate) fn from_raw(field: &FieldSpec, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Mat { field: field.clone(), rows, cols, data }
    }

    /// Block diagonal matrix of square blocks; empty blocks are skipped.
    pub fn block_diag(field: &FieldSpec, blocks: &[&Mat]) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zero(field, n, n);
        let mut off = 0;
        for b in blocks {
            if !b.is_square() || b.field != *field {
                return Err(Error::DimensionMismatch("block_diag needs square blocks over one field".into()));
            }
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.rows;
        }
        Ok(m)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Dimension of a square matrix.
    pub fn n(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!("expected a square matrix, got {}x{}", self.rows, self.cols)));
        }
        Ok(self.rows)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("add needs equal shapes".into()));
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Mat::from_raw(f, self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: u32) -> Mat {
        let f = &self.field;
        Mat::from_raw(f, self.rows, self.cols, self.data.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zero(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            let row = other.vec_mul_unchecked(self.row(i));
            out.data[i * other.cols..(i + 1) * other.cols].copy_from_slice(&row);
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Result<Mat> {
        let n = self.require_square()?;
        let mut base = self.clone();
        let mut acc = Mat::identity(&self.field, n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn arith(&self, other: &Mat, op: MatOp) -> Result<Mat> {
        match op {
            MatOp::Add => self.add(other),
            MatOp::Mul => self.mul(other),
            MatOp::Pow(e) => self.pow(e),
            MatOp::ScalarMul(c) => {
                if !self.field.contains(c) {
                    return Err(Error::InvalidElement(c.to_string()));
                }
                Ok(self.scale(c))
            }
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// `v * self` for a row vector `v` of length `rows`.
    pub fn vec_mul(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        Ok(self.vec_mul_unchecked(v))
    }

    #[inline]
    pub(crate) fn vec_mul_unchecked(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let cols = self.cols;
        if f.is_prime_field() {
            // Products stay below p^2 < 2^32; accumulate in u64 and reduce once.
            let p = f.p() as u64;
            let mut acc = vec![0u64; cols];
            for (i, &vi) in v.iter().enumerate() {
                if vi == 0 {
                    continue;
                }
                let row = &self.data[i * cols..(i + 1) * cols];
                for (a, &x) in acc.iter_mut().zip(row) {
                    *a += (vi * x) as u64;
                }
            }
            acc.into_iter().map(|a| (a % p) as u32).collect()
        } else {
            let mut out = vec![0u32; cols];
            for (i, &vi) in v.iter().enumerate() {
                if vi == 0 {
                    continue;
                }
                let row = &self.data[i * cols..(i + 1) * cols];
                for (o, &x) in out.iter_mut().zip(row) {
                    *o = f.add(*o, f.mul(vi, x));
                }
            }
            out
        }
    }

    /// `f(self)` by Horner's rule.
    pub fn eval_poly(&self, poly: &Poly) -> Result<Mat> {
        let n = self.require_square()?;
        if *poly.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let mut acc = Mat::zero(&self.field, n, n);
        for &c in poly.coeffs().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                let v = self.field.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        Ok(acc)
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<u32> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut m = self.data.clone();
        let mut det = 1u32;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else {
                return Ok(0);
            };
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = m[col * n + col];
            det = f.mul(det, pv);
            let inv = f.inv(pv).unwrap();
            for r in col + 1..n {
                let c = f.mul(m[r * n + col], inv);
                if c != 0 {
                    for j in col..n {
                        m[r * n + j] = f.sub(m[r * n + j], f.mul(c, m[col * n + j]));
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn rank(&self) -> usize {
        Subspace::from_vectors(&self.field, self.cols, (0..self.rows).map(|i| self.row(i).to_vec())).dim()
    }

    /// Inverse, or `None` if singular.
    pub fn inverse(&self) -> Result<Option<Mat>> {
        let n = self.require_square()?;
        let f = &self.field;
        let w = 2 * n;
        let mut m = vec![0u32; n * w];
        for i in 0..n {
            m[i * w..i * w + n].copy_from_slice(self.row(i));
            m[i * w + n + i] = 1;
        }
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m[r * w + col] != 0) else {
                return Ok(None);
            };
            for j in 0..w {
                m.swap(piv * w + j, col * w + j);
            }
            let inv = f.inv(m[col * w + col]).unwrap();
            for j in 0..w {
                m[col * w + j] = f.mul(m[col * w + j], inv);
            }
            for r in 0..n {
                let c = m[r * w + col];
                if r != col && c != 0 {
                    for j in 0..w {
                        m[r * w + j] = f.sub(m[r * w + j], f.mul(c, m[col * w + j]));
                    }
                }
            }
        }
        let data = (0..n).flat_map(|i| m[i * w + n..(i + 1) * w].to_vec()).collect();
        Ok(Some(Mat::from_raw(f, n, n, data)))
    }

    /// `det(tI - X)` via similarity reduction to upper Hessenberg form.
    pub fn char_poly(&self) -> Result<Poly> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| h.get(i, m - 1) != 0) else {
                continue;
            };
            if piv != m {
                for j in 0..n {
                    h.data.swap(piv * n + j, m * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + piv, i * n + m);
                }
            }
            let inv = f.inv(h.get(m, m - 1)).unwrap();
            for i in m + 1..n {
                let u = f.mul(h.get(i, m - 1), inv);
                if u == 0 {
                    continue;
                }
                // row_i -= u row_m, then col_m += u col_i
                for j in 0..n {
                    let v = f.sub(h.get(i, j), f.mul(u, h.get(m, j)));
                    h.set(i, j, v);
                }
                for j in 0..n {
                    let v = f.add(h.get(j, m), f.mul(u, h.get(j, i)));
                    h.set(j, m, v);
                }
            }
        }
        // p_k = (t - h_kk) p_{k-1} - sum_i h_{k-i,k} (h_{k,k-1} .. h_{k-i+1,k-i}) p_{k-i-1}
        let mut polys: Vec<Poly> = vec![Poly::one(f)];
        for k in 0..n {
            let mut pk = polys[k].mul(&Poly::linear(f, h.get(k, k)));
            let mut prod = 1u32;
            for i in 1..=k {
                prod = f.mul(prod, h.get(k - i + 1, k - i));
                if prod == 0 {
                    break;
                }
                let c = f.mul(prod, h.get(k - i, k));
                pk = pk.sub(&polys[k - i].scale(c));
            }
            polys.push(pk);
        }
        Ok(polys.pop().unwrap())
    }

    /// Monic order polynomial of `v`: the least-degree monic `g` with `v g(X) = 0`.
    pub fn order_poly(&self, v: &[u32]) -> Result<Poly> {
        self.require_square()?;
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok(KrylovRun::run(self, v).order)
    }

    /// Row-reduced basis of `<v, vX, vX^2, ...>`.
    pub fn krylov_span(&self, v: &[u32]) -> Result<Subspace> {
        let n = self.require_square()?;
        if v.len() != n {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        let run = KrylovRun::run(self, v);
        Ok(Subspace::from_vectors(&self.field, n, run.vectors))
    }

    /// Minimal polynomial as the lcm of the order polynomials of the standard
    /// basis vectors. Basis vectors already inside the accumulated invariant
    /// subspace are skipped, since their order divides the running lcm.
    pub fn min_poly(&self) -> Result<Poly> {
        Ok(self.min_poly_until(None))
    }

    fn min_poly_until(&self, stop_at: Option<usize>) -> Poly {
        let n = self.rows;
        let f = &self.field;
        let mut m = Poly::one(f);
        let mut seen = Subspace::new(f, n);
        for i in 0..n {
            let mut e = vec![0u32; n];
            e[i] = 1;
            if seen.contains(&e) {
                continue;
            }
            let run = KrylovRun::run(self, &e);
            m = m.lcm(&run.order).expect("same field");
            if stop_at.is_some_and(|s| m.degree() == Some(s)) || m.degree() == Some(n) {
                break;
            }
            for w in run.vectors {
                seen.insert(w);
            }
        }
        m
    }

    /// Cyclic iff the minimal polynomial has degree `n`. Tries `e_1` as a
    /// cyclic vector first, which settles most cyclic inputs cheaply.
    pub fn is_cyclic(&self) -> Result<bool> {
        let n = self.require_square()?;
        if n <= 1 {
            return Ok(true);
        }
        let mut e1 = vec![0u32; n];
        e1[0] = 1;
        if self.krylov_dim(&e1) == n {
            return Ok(true);
        }
        Ok(self.min_poly_until(Some(n)).degree() == Some(n))
    }

    /// `dim <v, vX, vX^2, ...>` without building the order polynomial.
    pub fn krylov_dim(&self, v: &[u32]) -> usize {
        let n = self.rows;
        assert!(self.is_square() && v.len() == n, "krylov_dim needs a square matrix and a vector of matching length");
        let f = &self.field;
        let prime = f.is_prime_field().then(|| f.p());
        // pivot column and normalised row of each basis vector, pivot entry 1
        let mut pivots: Vec<usize> = Vec::with_capacity(n);
        let mut rows: Vec<u32> = Vec::with_capacity(n * n);
        let mut w = v.to_vec();
        loop {
            for (k, &piv) in pivots.iter().enumerate() {
                let c = w[piv];
                if c == 0 {
                    continue;
                }
                let row = &rows[k * n..(k + 1) * n];
                match prime {
                    Some(p) => {
                        let nc = p - c;
                        for (a, &b) in w.iter_mut().zip(row) {
                            *a = (*a + nc * b) % p;
                        }
                    }
                    None => {
                        let nc = f.neg(c);
                        for (a, &b) in w.iter_mut().zip(row) {
                            if b != 0 {
                                *a = f.add(*a, f.mul(nc, b));
                            }
                        }
                    }
                }
            }
            let Some(piv) = w.iter().position(|&c| c != 0) else {
                return pivots.len();
            };
            let inv = f.inv(w[piv]).unwrap();
            if inv != 1 {
                w.iter_mut().for_each(|a| *a = f.mul(*a, inv));
            }
            pivots.push(piv);
            rows.extend_from_slice(&w);
            if pivots.len() == n {
                return n;
            }
            w = self.vec_mul_unchecked(&w);
        }
    }

    /// Basis of `ker f(X) = { v : v f(X) = 0 }`.
    pub fn kernel_of_poly(&self, poly: &Poly) -> Result<Subspace> {
        let fx = self.eval_poly(poly)?;
        Ok(fx.left_null_space())
    }

    /// `{ v : v * self = 0 }`.
    pub fn left_null_space(&self) -> Subspace {
        let f = &self.field;
        let (r, c) = (self.rows, self.cols);
        let w = c + r;
        let mut m = vec![0u32; r * w];
        for i in 0..r {
            m[i * w..i * w + c].copy_from_slice(self.row(i));
            m[i * w + c + i] = 1;
        }
        let mut prow = 0;
        for col in 0..c {
            let Some(piv) = (prow..r).find(|&i| m[i * w + col] != 0) else {
                continue;
            };
            for j in 0..w {
                m.swap(piv * w + j, prow * w + j);
            }
            let inv = f.inv(m[prow * w + col]).unwrap();
            for i in prow + 1..r {
                let u = f.mul(m[i * w + col], inv);
                if u != 0 {
                    for j in 0..w {
                        m[i * w + j] = f.sub(m[i * w + j], f.mul(u, m[prow * w + j]));
                    }
                }
            }
            prow += 1;
        }
        Subspace::from_vectors(f, r, (prow..r).map(|i| m[i * w + c..(i + 1) * w].to_vec()))
    }

    /// Parses `a,b;c,d`. Entries use the field's element syntax.
    pub fn parse(field: &FieldSpec, s: &str) -> Result<Mat> {
        let rows: Vec<Vec<u32>> = s
            .trim()
            .split(';')
            .map(|row| row.split(',').map(|e| field.parse_elem(e)).collect::<Result<Vec<u32>>>())
            .collect::<Result<_>>()?;
        Mat::from_rows(field, &rows)
    }

    pub fn parse_square(field: &FieldSpec, s: &str) -> Result<Mat> {
        let m = Mat::parse(field, s)?;
        m.require_square()?;
        Ok(m)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&c| self.field.format_elem(c)).collect::<Vec<_>>().join(","))
            .collect();
        out.write_str(&rows.join(";"))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[{}]({self})", self.field.describe())
    }
}

/// Krylov sequence `v, vX, ..` with incremental elimination, tracking each
/// reduced vector as a polynomial in `X` applied to `v`.
struct KrylovRun {
    order: Poly,
    /// The raw vectors `v X^i`, `i < deg order`.
    vectors: Vec<Vec<u32>>,
}

impl KrylovRun {
    fn run(x: &Mat, v: &[u32]) -> KrylovRun {
        let f = &x.field;
        let n = x.rows;
        let mut basis: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n);
        let mut raw = v.to_vec();
        for k in 0..=n {
            let mut w = raw.clone();
            let mut combo = vec![0u32; k + 1];
            combo[k] = 1;
            for (piv, row, rc) in &basis {
                let c = w[*piv];
                if c == 0 {
                    continue;
                }
                let nc = f.neg(c);
                for (a, &b) in w.iter_mut().zip(row) {
                    if b != 0 {
                        *a = f.add(*a, f.mul(nc, b));
                    }
                }
                for (a, &b) in combo.iter_mut().zip(rc) {
                    if b != 0 {
                        *a = f.add(*a, f.mul(nc, b));
                    }
                }
            }
            let Some(piv) = w.iter().position(|&c| c != 0) else {
                return KrylovRun { order: Poly::from_raw(f, combo), vectors };
            };
            let inv = f.inv(w[piv]).unwrap();
            if inv != 1 {
                w.iter_mut().for_each(|a| *a = f.mul(*a, inv));
                combo.iter_mut().for_each(|a| *a = f.mul(*a, inv));
            }
            basis.push((piv, w, combo));
            let next = x.vec_mul_unchecked(&raw);
            vectors.push(std::mem::replace(&mut raw, next));
        }
        unreachable!("a Krylov sequence in dimension n is dependent after n steps")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    fn m(field: &FieldSpec, s: &str) -> Mat {
        Mat::parse(field, s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = f(2);
        let x = m(&f2, "0,1;1,1");
        assert_eq!(x.mul(&Mat::identity(&f2, 2)).unwrap(), x);
        assert_eq!(x.pow(0).unwrap(), Mat::identity(&f2, 2));
        assert_eq!(x.pow(2).unwrap(), m(&f2, "1,1;1,0"));
        assert_eq!(x.arith(&x, MatOp::Pow(3)).unwrap(), Mat::identity(&f2, 2));
        assert!(x.mul(&Mat::identity(&f2, 3)).is_err());
        assert_eq!(x.add(&Mat::identity(&f(3), 2)), Err(Error::FieldMismatch));
    }

    #[test]
    fn char_poly_examples() {
        let f2 = f(2);
        assert_eq!(m(&f2, "0,1;1,1").char_poly().unwrap().to_string(), "1+t+t^2");
        let f5 = f(5);
        let expect = Poly::linear(&f5, 1).mul(&Poly::linear(&f5, 1)).mul(&Poly::linear(&f5, 1));
        assert_eq!(Mat::identity(&f5, 3).char_poly().unwrap(), expect);
        assert!(Mat::zero(&f5, 0, 0).char_poly().unwrap().is_one());
    }

    #[test]
    fn min_poly_examples() {
        let f3 = f(3);
        assert_eq!(Mat::scalar(&f3, 4, 2).min_poly().unwrap(), Poly::linear(&f3, 2));
        let f2 = f(2);
        let c = Poly::parse(&f2, "1+t+t^2").unwrap().companion().unwrap();
        let d = Mat::block_diag(&f2, &[&c, &c]).unwrap();
        assert_eq!(d.min_poly().unwrap().to_string(), "1+t+t^2");
        assert_eq!(d.char_poly().unwrap().to_string(), "1+t^2+t^4");
        let nil = Poly::parse(&f3, "t^3").unwrap().companion().unwrap();
        assert_eq!(nil.to_string(), "0,1,0;0,0,1;0,0,0");
        assert_eq!(nil.min_poly().unwrap().to_string(), "t^3");
    }

    #[test]
    fn cyclic_examples() {
        let f2 = f(2);
        assert!(m(&f2, "1").is_cyclic().unwrap());
        assert!(!Mat::identity(&f2, 2).is_cyclic().unwrap());
        let j = m(&f2, "1,0;1,1");
        assert!(j.is_cyclic().unwrap());
        assert_eq!(j.min_poly().unwrap().to_string(), "1+t^2");
    }

    #[test]
    fn krylov_examples() {
        let f2 = f(2);
        assert_eq!(Mat::identity(&f2, 2).krylov_span(&[0, 0]).unwrap().dim(), 0);
        assert_eq!(Mat::identity(&f2, 2).krylov_span(&[1, 0]).unwrap().dim(), 1);
        let c = Poly::parse(&f2, "1+t^2+t^3+t^4").unwrap().companion().unwrap();
        assert_eq!(c.krylov_span(&[1, 0, 0, 0]).unwrap().dim(), 4);
    }

    #[test]
    fn kernel_examples() {
        let f3 = f(3);
        let x = m(&f3, "1,2,0;0,1,1;2,0,2");
        let cx = x.char_poly().unwrap();
        assert_eq!(x.kernel_of_poly(&cx).unwrap().dim(), 3);
        let f2 = f(2);
        assert_eq!(Mat::identity(&f2, 2).kernel_of_poly(&Poly::linear(&f2, 1)).unwrap().dim(), 2);
        let fp = Poly::parse(&f2, "1+t+t^2").unwrap();
        let hp = Poly::parse(&f2, "t+t^3").unwrap();
        let x = Mat::block_diag(&f2, &[&fp.companion().unwrap(), &hp.companion().unwrap()]).unwrap();
        let k = x.kernel_of_poly(&fp).unwrap();
        assert_eq!(k.dim(), 2);
        assert!(k.is_invariant(&x));
    }

    #[test]
    fn det_inverse() {
        let f5 = f(5);
        let x = m(&f5, "1,2;3,4");
        assert_eq!(x.det().unwrap(), f5.from_int(-2));
        let xi = x.inverse().unwrap().unwrap();
        assert_eq!(x.mul(&xi).unwrap(), Mat::identity(&f5, 2));
        assert_eq!(m(&f5, "1,2;2,4").inverse().unwrap(), None);
        assert_eq!(m(&f5, "1,2;2,4").rank(), 1);
    }

    #[test]
    fn text_round_trip() {
        let f4 = f(4);
        let x = m(&f4, "z,1+z;0,1");
        assert_eq!(x.to_string(), "z,1+z;0,1");
        assert_eq!(m(&f4, &x.to_string()), x);
        assert!(Mat::parse(&f4, "1,2;3").is_err());
        assert!(Mat::parse_square(&f4, "1,0").is_err());
    }
}
