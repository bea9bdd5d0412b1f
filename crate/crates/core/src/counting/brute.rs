//! Direct enumeration counterparts of the coprime-pair counts.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::poly::{monic_polys, Poly};

/// Ordered pairs `(a, b)` of monic polynomials of degrees `r`, `s` with
/// `gcd(a, b) = 1` and, if `avoid` is given, `gcd(avoid, ab) = 1`.
pub fn coprime_pairs_brute(r: usize, s: usize, field: &FieldSpec, avoid: Option<&Poly>) -> Result<BigInt> {
    if avoid.is_some_and(|f| f.field() != field) {
        return Err(Error::FieldMismatch);
    }
    let bs: Vec<Poly> = monic_polys(field, s)?.collect();
    let mut count: u64 = 0;
    for a in monic_polys(field, r)? {
        if avoid.is_some_and(|f| !f.gcd(&a).unwrap().is_one()) {
            continue;
        }
        for b in &bs {
            if avoid.is_some_and(|f| !f.gcd(b).unwrap().is_one()) {
                continue;
            }
            if a.gcd(b)?.is_one() {
                count += 1;
            }
        }
    }
    Ok(BigInt::from(count))
}
