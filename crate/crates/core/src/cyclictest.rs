//! Searching a matrix algebra given by generators for cyclic pairs `(v, X)`
//! and for proper invariant subspaces.
//!
//! The probe never claims irreducibility: when it finds neither a witness
//! nor a pair it reports `inconclusive`.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{prime_power, FieldSpec};
use crate::matspace::{Mat, Subspace};
use crate::poly::factor;

/// Exhaustive cyclic-vector scan is attempted only below this many vectors.
pub const VECTOR_SCAN_CAP: u64 = 1 << 16;

/// Largest degree of an irreducible factor of `m_X` whose kernel is spun.
pub const KERNEL_FACTOR_DEGREE: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedAlgebra {
    n: usize,
    field: FieldSpec,
    generators: Vec<Mat>,
}

impl GeneratedAlgebra {
    pub fn new(generators: Vec<Mat>) -> Result<Self> {
        let first = generators.first().ok_or_else(|| Error::Precondition("need at least one generator".into()))?;
        let (n, field) = (first.rows(), first.field().clone());
        if n == 0 {
            return Err(Error::DimensionMismatch("generators must be at least 1x1".into()));
        }
        for g in &generators {
            if g.field() != &field {
                return Err(Error::FieldMismatch);
            }
            if g.rows() != n || g.cols() != n {
                return Err(Error::DimensionMismatch(format!("generators must all be {n}x{n}")));
            }
        }
        Ok(GeneratedAlgebra { n, field, generators })
    }

    /// Generators of the full matrix algebra `M(n, q)`: the `n`-cycle
    /// permutation matrix `P` and the transvection `I + E_12`, plus the scalar
    /// `z` when `q` is not prime. `I = P^n` and `P^a E_12 P^b` reach every `E_ij`.
    pub fn full(n: usize, field: &FieldSpec) -> Result<Self> {
        let mut p = Mat::zero(field, n, n);
        for i in 0..n {
            p.set(i, (i + 1) % n, 1);
        }
        let mut gens = vec![p];
        if n > 1 {
            gens.push(Mat::identity(field, n).add(&Mat::unit(field, n, 0, 1))?);
        }
        if !field.is_prime_field() {
            gens.push(Mat::scalar(field, n, field.p()));
        }
        GeneratedAlgebra::new(gens)
    }

    /// Generators of `M(V)_U` for `U = <e_1, .., e_r>`: every `E_ij` outside
    /// the top-right `r x (n-r)` block, plus the scalar `z` when `q` is not prime.
    pub fn stabilizer(n: usize, r: usize, field: &FieldSpec) -> Result<Self> {
        if r == 0 || r >= n {
            return Err(Error::Precondition(format!("need 0 < r < n, got n={n}, r={r}")));
        }
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !(i < r && j >= r) {
                    gens.push(Mat::unit(field, n, i, j));
                }
            }
        }
        if !field.is_prime_field() {
            gens.push(Mat::scalar(field, n, field.p()));
        }
        GeneratedAlgebra::new(gens)
    }

    /// Reads a generator file: first line `n q` (`q` as an integer or
    /// `p^k`), then one matrix per line in `a,b;c,d` form. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let at = |no: usize, msg: String| Error::Parse(format!("line {}: {msg}", no + 1));
        let (hno, header) = lines.next().ok_or_else(|| Error::Parse("empty generator file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let [n, q] = parts[..] else {
            return Err(at(hno, format!("expected 'n q', got '{}'", header.trim())));
        };
        let n: usize = n.parse().map_err(|_| at(hno, format!("invalid dimension '{n}'")))?;
        let q = parse_order(q).map_err(|e| at(hno, e.to_string()))?;
        let field = FieldSpec::of_order(q).map_err(|e| at(hno, e.to_string()))?;
        let mut gens = Vec::new();
        for (no, line) in lines {
            let m = Mat::parse_square(&field, line).map_err(|e| at(no, e.to_string()))?;
            if m.rows() != n {
                return Err(at(no, format!("matrix is {}x{}, header says n = {n}", m.rows(), m.cols())));
            }
            gens.push(m);
        }
        if gens.is_empty() {
            return Err(Error::Parse("no generators after the header".into()));
        }
        GeneratedAlgebra::new(gens)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        GeneratedAlgebra::parse(&text)
    }

    /// Inverse of [`GeneratedAlgebra::parse`].
    pub fn to_text(&self) -> String {
        let q = if self.field.k() == 1 { self.field.q().to_string() } else { format!("{}^{}", self.field.p(), self.field.k()) };
        let mut out = format!("{} {q}\n", self.n);
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn generators(&self) -> &[Mat] {
        &self.generators
    }
}

/// Parses `q` given as an integer or as `p^k`, and checks it is a prime power.
pub fn parse_order(s: &str) -> Result<u64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid field order '{s}'"));
    let q = match s.split_once('^') {
        Some((p, k)) => {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            p.checked_pow(k).ok_or_else(bad)?
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if prime_power(q).is_none() {
        return Err(Error::InvalidField(format!("{q} is not a prime power")));
    }
    Ok(q)
}

/// A random walk of `length` steps through the algebra: start at a random
/// generator, then repeatedly multiply by or add a random generator.
pub fn random_element<R: Rng + ?Sized>(alg: &GeneratedAlgebra, rng: &mut R, length: usize) -> Result<Mat> {
    if length == 0 {
        return Err(Error::Precondition("walk length must be at least 1".into()));
    }
    let gens = &alg.generators;
    let mut x = gens[rng.gen_range(0..gens.len())].clone();
    for _ in 1..length {
        let g = &gens[rng.gen_range(0..gens.len())];
        x = if rng.gen_bool(0.5) { x.mul(g)? } else { x.add(g)? };
    }
    Ok(x)
}

/// Smallest subspace containing `v` and closed under right multiplication by
/// every generator.
pub fn spin(v: &[u32], alg: &GeneratedAlgebra) -> Result<Subspace> {
    if v.len() != alg.n {
        return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {}", v.len(), alg.n)));
    }
    let mut space = Subspace::new(&alg.field, alg.n);
    let mut queue = Vec::new();
    if space.insert(v.to_vec()) {
        queue.push(v.to_vec());
    }
    while let Some(w) = queue.pop() {
        for g in &alg.generators {
            let img = g.vec_mul(&w)?;
            if space.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    Ok(space)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeVerdict {
    ReducibleWithWitness,
    CyclicPairFound,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    /// Proper subspace invariant under every generator.
    pub witness: Option<Subspace>,
    /// `(v, X)` with `X` cyclic in the algebra and `v` a cyclic vector for it.
    pub pair: Option<(Vec<u32>, Mat)>,
    pub tries_used: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReportText {
    pub verdict: ProbeVerdict,
    pub field: String,
    /// Basis rows in matrix text form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<String>,
    pub tries_used: usize,
    pub seed: u64,
}

impl ProbeReport {
    pub fn to_text(&self, field: &FieldSpec) -> ProbeReportText {
        ProbeReportText {
            verdict: self.verdict,
            field: field.describe(),
            witness: self.witness.as_ref().map(|w| w.to_string()),
            witness_dim: self.witness.as_ref().map(Subspace::dim),
            vector: self.pair.as_ref().map(|(v, _)| v.iter().map(|&c| field.format_elem(c)).collect::<Vec<_>>().join(",")),
            matrix: self.pair.as_ref().map(|(_, x)| x.to_string()),
            tries_used: self.tries_used,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProbeOptions {
    pub max_tries: usize,
    pub seed: u64,
    /// Random-walk length; `None` means `2n`.
    pub walk_length: Option<usize>,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions { max_tries: 50, seed: 0, walk_length: None }
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// First vector in a fixed order whose Krylov space under `x` is everything:
/// `e_i`, then `e_i + e_j`, then `e_i + c e_j`, then every vector if there
/// are at most [`VECTOR_SCAN_CAP`] of them.
pub fn find_cyclic_vector(x: &Mat) -> Option<Vec<u32>> {
    let n = x.rows();
    let f = x.field();
    let full = |v: &Vec<u32>| x.krylov_dim(v) == n;
    let q = f.q();
    let mut candidates: Vec<Vec<u32>> = (0..n).map(|i| unit_vector(n, i)).collect();
    for c in 1..q {
        for i in 0..n {
            for j in i + 1..n {
                let mut v = unit_vector(n, i);
                v[j] = c;
                candidates.push(v);
            }
        }
    }
    if let Some(v) = candidates.into_iter().find(full) {
        return Some(v);
    }
    let total = (q as u64).checked_pow(n as u32).filter(|&t| t <= VECTOR_SCAN_CAP)?;
    (1..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let c = (idx % q as u64) as u32;
                    idx /= q as u64;
                    c
                })
                .collect::<Vec<u32>>()
        })
        .find(full)
}

fn proper_spin(v: &[u32], alg: &GeneratedAlgebra) -> Result<Option<Subspace>> {
    let s = spin(v, alg)?;
    Ok(s.is_proper().then_some(s))
}

/// Searches for a proper invariant subspace or a cyclic pair. Spins each
/// standard basis vector once, then for each random element `X` spins the
/// kernels of the low-degree irreducible factors of its minimal polynomial
/// and, if `X` is cyclic, looks for a cyclic vector.
pub fn probe(alg: &GeneratedAlgebra, opts: &ProbeOptions) -> Result<ProbeReport> {
    if opts.max_tries == 0 {
        return Err(Error::Precondition("max_tries must be at least 1".into()));
    }
    let n = alg.n;
    let walk = opts.walk_length.unwrap_or(2 * n).max(1);
    let done = |verdict, witness, pair, tries_used| ProbeReport { verdict, witness, pair, tries_used, seed: opts.seed };
    for i in 0..n {
        if let Some(w) = proper_spin(&unit_vector(n, i), alg)? {
            return Ok(done(ProbeVerdict::ReducibleWithWitness, Some(w), None, 0));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for attempt in 1..=opts.max_tries {
        let x = random_element(alg, &mut rng, walk)?;
        let m = x.min_poly()?;
        if m.degree().unwrap_or(0) > 0 {
            for (f, _) in factor(&m)? {
                if f.degree().unwrap() > KERNEL_FACTOR_DEGREE {
                    continue;
                }
                for v in x.kernel_of_poly(&f)?.basis() {
                    if let Some(w) = proper_spin(&v, alg)? {
                        return Ok(done(ProbeVerdict::ReducibleWithWitness, Some(w), None, attempt));
                    }
                }
            }
        }
        if m.degree() == Some(n) {
            if let Some(v) = find_cyclic_vector(&x) {
                return Ok(done(ProbeVerdict::CyclicPairFound, None, Some((v, x)), attempt));
            }
        }
    }
    Ok(done(ProbeVerdict::Inconclusive, None, None, opts.max_tries))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    #[test]
    fn walk_basics() {
        let f2 = f(2);
        let g = Mat::parse(&f2, "0,1;1,1").unwrap();
        let alg = GeneratedAlgebra::new(vec![g.clone()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_element(&alg, &mut rng, 1).unwrap(), g);
        assert!(random_element(&alg, &mut rng, 0).is_err());
        let full = GeneratedAlgebra::full(2, &f2).unwrap();
        let draw = |seed| random_element(&full, &mut ChaCha8Rng::seed_from_u64(seed), 8).unwrap();
        assert_eq!(draw(5), draw(5));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cyclic = (0..100).filter(|_| random_element(&full, &mut rng, 8).unwrap().is_cyclic().unwrap()).count();
        assert!(cyclic > 0);
    }

    #[test]
    fn spin_examples() {
        let f3 = f(3);
        let st = GeneratedAlgebra::stabilizer(4, 2, &f3).unwrap();
        assert_eq!(spin(&[0, 0, 0, 0], &st).unwrap().dim(), 0);
        let s = spin(&[1, 0, 0, 0], &st).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[0, 1, 0, 0]));
        let x = Mat::parse(&f3, "0,1,0;0,0,1;1,2,0").unwrap();
        let one = GeneratedAlgebra::new(vec![x.clone()]).unwrap();
        assert_eq!(spin(&[1, 1, 0], &one).unwrap(), x.krylov_span(&[1, 1, 0]).unwrap());
        assert_eq!(spin(&[0, 0, 1], &GeneratedAlgebra::full(3, &f3).unwrap()).unwrap().dim(), 3);
    }

    #[test]
    fn probe_examples() {
        let f2 = f(2);
        let rep = probe(&GeneratedAlgebra::stabilizer(4, 2, &f2).unwrap(), &ProbeOptions::default()).unwrap();
        assert_eq!(rep.verdict, ProbeVerdict::ReducibleWithWitness);
        let full = GeneratedAlgebra::full(3, &f2).unwrap();
        let rep = probe(&full, &ProbeOptions { max_tries: 50, seed: 11, walk_length: None }).unwrap();
        assert_eq!(rep.verdict, ProbeVerdict::CyclicPairFound);
        let (v, x) = rep.pair.unwrap();
        assert!(x.is_cyclic().unwrap());
        assert_eq!(x.krylov_span(&v).unwrap().dim(), 3);
        assert!(probe(&full, &ProbeOptions { max_tries: 0, ..Default::default() }).is_err());
    }

    #[test]
    fn cyclic_vectors() {
        let f2 = f(2);
        // diag(1, C(t^2+t+1)) is cyclic but no standard basis vector is a cyclic vector
        let x = Mat::parse(&f2, "1,0,0;0,0,1;0,1,1").unwrap();
        let v = find_cyclic_vector(&x).unwrap();
        assert_eq!(x.krylov_dim(&v), 3);
        assert!(find_cyclic_vector(&Mat::identity(&f2, 2)).is_none());
    }

    #[test]
    fn generator_file() {
        let text = "# stabilizer of <e_1>\n2 2^1\n1,0;0,0\n\n1,0;1,1\n";
        let alg = GeneratedAlgebra::parse(text).unwrap();
        assert_eq!((alg.n(), alg.generators().len()), (2, 2));
        assert_eq!(GeneratedAlgebra::parse(&alg.to_text()).unwrap(), alg);
        let four = GeneratedAlgebra::parse("2 2^2\nz,0;1,z+1\n").unwrap();
        assert_eq!(four.field().q(), 4);
        let err = GeneratedAlgebra::parse("2 2\n1,0;0,1\n1,0,0;0,1,0;0,0,1\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(GeneratedAlgebra::parse("2 6\n1,0;0,1\n").unwrap_err().to_string().contains("line 1"));
        assert!(GeneratedAlgebra::parse("2 2\n1,x;0,1\n").unwrap_err().to_string().contains("line 2"));
        assert!(GeneratedAlgebra::parse("").is_err());
        assert!(GeneratedAlgebra::parse("3 2\n").is_err());
    }
}
