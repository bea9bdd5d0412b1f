use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::poly::Poly;

use super::mat::Mat;

/// Whether to sample/enumerate the algebra `M(V)_U` or its unit group `GL(V)_U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Algebra,
    Group,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Algebra => "algebra",
            Mode::Group => "group",
        })
    }
}

/// An element `(A 0 / C B)` of the stabilizer of `U = <e_1, .., e_r>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabMat {
    n: usize,
    r: usize,
    a: Mat,
    b: Mat,
    /// `(n - r) x r`.
    c: Mat,
}

impl StabMat {
    pub fn new(a: Mat, b: Mat, c: Mat) -> Result<Self> {
        let (r, s) = (a.rows(), b.rows());
        if !a.is_square() || !b.is_square() || r == 0 || s == 0 {
            return Err(Error::DimensionMismatch("A and B must be nonempty square blocks".into()));
        }
        if (c.rows(), c.cols()) != (s, r) {
            return Err(Error::DimensionMismatch(format!("C must be {s}x{r}, got {}x{}", c.rows(), c.cols())));
        }
        if a.field() != b.field() || a.field() != c.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(StabMat { n: r + s, r, a, b, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn c(&self) -> &Mat {
        &self.c
    }

    pub fn field(&self) -> &FieldSpec {
        self.a.field()
    }

    /// The `n x n` matrix `(A 0 / C B)`.
    pub fn embed(&self) -> Mat {
        let (n, r) = (self.n, self.r);
        let mut x = Mat::zero(self.field(), n, n);
        for i in 0..r {
            for j in 0..r {
                x.set(i, j, self.a.get(i, j));
            }
        }
        for i in 0..n - r {
            for j in 0..r {
                x.set(r + i, j, self.c.get(i, j));
            }
            for j in 0..n - r {
                x.set(r + i, r + j, self.b.get(i, j));
            }
        }
        x
    }

    /// Splits `x` into blocks; fails unless the top-right `r x (n-r)` block is zero.
    pub fn project(x: &Mat, r: usize) -> Result<StabMat> {
        let n = x.rows();
        if !x.is_square() || r == 0 || r >= n {
            return Err(Error::Precondition(format!("need a square matrix and 0 < r < n, got r={r}, n={n}")));
        }
        if (0..r).any(|i| (r..n).any(|j| x.get(i, j) != 0)) {
            return Err(Error::Precondition("matrix does not stabilize U = <e_1..e_r>".into()));
        }
        let f = x.field();
        let block = |r0: usize, c0: usize, h: usize, w: usize| {
            let rows: Vec<Vec<u32>> = (0..h).map(|i| (0..w).map(|j| x.get(r0 + i, c0 + j)).collect()).collect();
            Mat::from_rows(f, &rows)
        };
        StabMat::new(block(0, 0, r, r)?, block(r, r, n - r, n - r)?, block(r, 0, n - r, r)?)
    }

    /// Uniform element of `M(V)_U` (algebra) or `GL(V)_U` (group). Group mode
    /// rejection-samples `A` and `B` independently until both are invertible.
    pub fn sample<R: Rng + ?Sized>(n: usize, r: usize, field: &FieldSpec, rng: &mut R, mode: Mode) -> Result<StabMat> {
        if r == 0 || r >= n {
            return Err(Error::Precondition(format!("need 0 < r < n, got r={r}, n={n}")));
        }
        let a = random_block(field, r, r, rng, mode);
        let b = random_block(field, n - r, n - r, rng, mode);
        let c = random_block(field, n - r, r, rng, Mode::Algebra);
        Ok(StabMat { n, r, a, b, c })
    }

    /// `diag(C(g), C(f), C(f), C(h))` with `A = diag(C(g), C(f))` and
    /// `B = diag(C(f), C(h))`. A degree-zero `g` or `h` contributes no block.
    pub fn build_xfgh(f: &Poly, g: &Poly, h: &Poly) -> Result<StabMat> {
        let field = f.field().clone();
        if g.field() != &field || h.field() != &field {
            return Err(Error::FieldMismatch);
        }
        if !f.is_irreducible()? {
            return Err(Error::Precondition(format!("{f} is not irreducible")));
        }
        if !g.is_monic() || !h.is_monic() {
            return Err(Error::Precondition("g and h must be monic".into()));
        }
        if !f.gcd(&g.mul(h))?.is_one() || !g.gcd(h)?.is_one() {
            return Err(Error::Precondition("need gcd(f, gh) = gcd(g, h) = 1".into()));
        }
        let comp = |p: &Poly| -> Result<Mat> {
            if p.degree() == Some(0) {
                Ok(Mat::zero(&field, 0, 0))
            } else {
                p.companion()
            }
        };
        let (cf, cg, ch) = (comp(f)?, comp(g)?, comp(h)?);
        let a = Mat::block_diag(&field, &[&cg, &cf])?;
        let b = Mat::block_diag(&field, &[&cf, &ch])?;
        let c = Mat::zero(&field, b.rows(), a.rows());
        let s = StabMat::new(a, b, c)?;
        if !s.a.is_cyclic()? || !s.b.is_cyclic()? || s.embed().is_cyclic()? {
            return Err(Error::Precondition("constructed matrix is not a case (iii) witness".into()));
        }
        Ok(s)
    }
}

fn random_block<R: Rng + ?Sized>(field: &FieldSpec, rows: usize, cols: usize, rng: &mut R, mode: Mode) -> Mat {
    let q = field.q();
    loop {
        let data: Vec<u32> = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
        let m = Mat::from_raw(field, rows, cols, data);
        if mode == Mode::Algebra || m.det().expect("square block") != 0 {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    #[test]
    fn embed_project() {
        let f5 = f(5);
        let m = |s: &str| Mat::parse(&f5, s).unwrap();
        let s = StabMat::new(m("2"), m("3"), m("4")).unwrap();
        assert_eq!(s.embed(), m("2,0;4,3"));
        assert_eq!(StabMat::project(&s.embed(), 1).unwrap(), s);
        let id = StabMat::project(&Mat::identity(&f5, 4), 2).unwrap();
        assert_eq!(id.a(), &Mat::identity(&f5, 2));
        assert_eq!(id.b(), &Mat::identity(&f5, 2));
        assert!(id.c().is_zero());
        assert!(StabMat::project(&m("1,1;0,1"), 1).is_err());
        assert!(StabMat::project(&m("1,0;0,1"), 2).is_err());
    }

    #[test]
    fn sampling_is_seeded_and_group_mode_invertible() {
        let f3 = f(3);
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20).map(|_| StabMat::sample(4, 2, &f3, &mut rng, Mode::Group).unwrap()).collect::<Vec<_>>()
        };
        let a = draw(9);
        assert_eq!(a, draw(9));
        for s in &a {
            assert_ne!(f3.mul(s.a().det().unwrap(), s.b().det().unwrap()), 0);
            assert_ne!(s.embed().det().unwrap(), 0);
        }
    }

    #[test]
    fn xfgh_witness() {
        let f2 = f(2);
        let p = |s: &str| Poly::parse(&f2, s).unwrap();
        let s = StabMat::build_xfgh(&p("t"), &p("1+t"), &p("1+t")).unwrap_err();
        assert!(matches!(s, Error::Precondition(_)));
        let x = StabMat::build_xfgh(&p("t"), &p("1+t"), &p("1")).unwrap();
        assert_eq!((x.n(), x.r()), (3, 2));
        let x = StabMat::build_xfgh(&p("1+t"), &p("1"), &p("t")).unwrap();
        let e = x.embed();
        assert_eq!(e.min_poly().unwrap(), p("t+t^2"));
        assert_eq!(e.char_poly().unwrap(), p("t").mul(&p("1+t")).mul(&p("1+t")));
        assert!(StabMat::build_xfgh(&p("1+t^2"), &p("1"), &p("1")).is_err());
        // f = t^2+t+1, g = t, h = t+1 over F_2: n = 6, r = 3
        let x = StabMat::build_xfgh(&p("1+t+t^2"), &p("t"), &p("1+t")).unwrap();
        assert_eq!((x.n(), x.r()), (6, 3));
        assert_eq!(x.embed().min_poly().unwrap(), p("1+t+t^2").mul(&p("t")).mul(&p("1+t")));
    }
}
