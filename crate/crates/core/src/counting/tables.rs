//! Limiting proportions of cyclic elements as `dim V -> infinity`, as
//! truncated power series in `q^-1`. The coefficients are the published
//! reference values and are not recomputed here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matspace::Mode;

use super::rational::{int, qpow, Rational};

/// Highest power of `q^-1` kept; the series is exact up to `O(q^-8)`.
pub const SERIES_TRUNCATION: usize = 7;

type Row = [i64; SERIES_TRUNCATION + 1];

// Cyclic proportion in M(V)_U, rows dim U = 1..7, coefficients of q^0..q^-7.
const ALGEBRA: [Row; 7] = [
    [1, 0, -1, -2, -1, 0, 2, 3],
    [1, 0, -1, -4, -1, 4, 5, 4],
    [1, 0, -1, -4, -3, 4, 11, 8],
    [1, 0, -1, -4, -3, 2, 11, 14],
    [1, 0, -1, -4, -3, 2, 9, 14],
    [1, 0, -1, -4, -3, 2, 9, 12],
    [1, 0, -1, -4, -3, 2, 9, 12],
];

// Cyclic proportion in GL(V)_U, same layout.
const GROUP: [Row; 7] = [
    [1, 0, -1, -2, 0, 1, 3, 1],
    [1, 0, -1, -3, 1, 3, 4, -2],
    [1, 0, -1, -3, 1, 4, 4, -5],
    [1, 0, -1, -3, 1, 4, 4, -6],
    [1, 0, -1, -3, 1, 4, 4, -6],
    [1, 0, -1, -3, 1, 4, 4, -6],
    [1, 0, -1, -3, 1, 4, 4, -6],
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series {
    pub r: usize,
    pub mode: Mode,
    /// Coefficient of `q^-i` at index `i`.
    pub coeffs: Vec<i64>,
    /// Terms of order `q^-(truncation+1)` and beyond are dropped.
    pub truncation: usize,
}

impl Series {
    pub fn eval(&self, q: u64) -> Rational {
        self.coeffs.iter().enumerate().fold(int(0), |acc, (i, &c)| acc + int(c) * qpow(q, -(i as i64)))
    }
}

pub fn table_series(r: usize, mode: Mode) -> Result<Series> {
    if !(1..=7).contains(&r) {
        return Err(Error::Precondition(format!("series tabulated for 1 <= r <= 7, got r={r}")));
    }
    let row = match mode {
        Mode::Algebra => &ALGEBRA[r - 1],
        Mode::Group => &GROUP[r - 1],
    };
    Ok(Series { r, mode, coeffs: row.to_vec(), truncation: SERIES_TRUNCATION })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::rational::{frac, to_decimal_string};

    #[test]
    fn lookup_and_eval() {
        let s = table_series(1, Mode::Algebra).unwrap();
        assert_eq!(s.eval(5), frac(73638, 78125));
        assert_eq!(to_decimal_string(&s.eval(5), 7), "0.9425664");
        assert_eq!(table_series(2, Mode::Algebra).unwrap().coeffs, vec![1, 0, -1, -4, -1, 4, 5, 4]);
        assert_eq!(table_series(1, Mode::Group).unwrap().coeffs, vec![1, 0, -1, -2, 0, 1, 3, 1]);
        assert_eq!(s.truncation, 7);
        assert!(table_series(0, Mode::Group).is_err());
        assert!(table_series(8, Mode::Algebra).is_err());
    }
}
