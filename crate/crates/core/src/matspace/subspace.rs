use std::fmt;

use crate::gf::FieldSpec;

use super::mat::Mat;

/// A subspace of `F_q^n` held as a reduced row echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    /// (pivot column, row) with the pivot entry equal to one and zero in
    /// every other row's pivot column.
    rows: Vec<(usize, Vec<u32>)>,
}

impl Subspace {
    pub fn new(field: &FieldSpec, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, rows: Vec::new() }
    }

    pub fn from_vectors<I>(field: &FieldSpec, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut s = Subspace::new(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn whole(field: &FieldSpec, ambient: usize) -> Self {
        Subspace::from_vectors(
            field,
            ambient,
            (0..ambient).map(|i| {
                let mut e = vec![0; ambient];
                e[i] = 1;
                e
            }),
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_proper(&self) -> bool {
        self.dim() > 0 && self.dim() < self.ambient
    }

    /// Basis rows, sorted by pivot column.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    fn reduce(&self, v: &mut [u32]) {
        let f = &self.field;
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                let nc = f.neg(c);
                for (a, &b) in v.iter_mut().zip(row) {
                    if b != 0 {
                        *a = f.add(*a, f.mul(nc, b));
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&c| c == 0)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length must match the ambient dimension");
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let f = &self.field;
        let inv = f.inv(v[piv]).unwrap();
        v.iter_mut().for_each(|a| *a = f.mul(*a, inv));
        for (_, row) in &mut self.rows {
            let c = row[piv];
            if c != 0 {
                let nc = f.neg(c);
                for (a, &b) in row.iter_mut().zip(&v) {
                    *a = f.add(*a, f.mul(nc, b));
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < piv);
        self.rows.insert(at, (piv, v));
        true
    }

    /// `W * X ⊆ W`.
    pub fn is_invariant(&self, x: &Mat) -> bool {
        self.rows.iter().all(|(_, r)| self.contains(&x.vec_mul_unchecked(r)))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|(_, r)| other.contains(r))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|(_, r)| r.iter().map(|&c| self.field.format_elem(c)).collect::<Vec<_>>().join(","))
            .collect();
        out.write_str(&rows.join(";"))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: {self})", self.dim(), self.ambient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_insert() {
        let f3 = FieldSpec::prime(3).unwrap();
        let mut s = Subspace::new(&f3, 3);
        assert!(s.insert(vec![0, 2, 1]));
        assert!(s.insert(vec![1, 1, 1]));
        assert!(!s.insert(vec![1, 0, 2]));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[2, 2, 2]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.basis(), vec![vec![1, 0, 2], vec![0, 1, 2]]);
        assert!(s.is_proper());
        assert!(Subspace::whole(&f3, 3).contains(&[2, 1, 0]));
    }
}
