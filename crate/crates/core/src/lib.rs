//! Cyclic matrices in maximal reducible matrix algebras over finite fields.
//!
//! The algebra `M(V)_U` of `n x n` matrices stabilizing an `r`-dimensional
//! subspace `U` consists of block matrices `(A 0 / C B)`. This crate counts,
//! samples and bounds the proportion of non-cyclic elements in it:
//!
//! - [`gf`], [`poly`], [`matspace`]: exact finite-field linear algebra.
//! - [`counting`]: closed-form bounds in exact rationals.
//! - [`census`]: exhaustive and Monte Carlo density estimates.
//! - [`cyclictest`]: cyclic-pair search and spinning for generated algebras.
//! - [`cli`]: the `cyclic-density` command line.

pub mod census;
pub mod cli;
pub mod counting;
pub mod cyclictest;
pub mod error;
pub mod gf;
pub mod matspace;
pub mod poly;

pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec};
pub use matspace::{Mat, Mode, StabMat, Subspace};
pub use poly::Poly;
