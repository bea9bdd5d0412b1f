//! Matrices over `F_q`, subspaces, and the maximal reducible algebra `M(V)_U`.

mod mat;
mod stab;
mod subspace;

pub use mat::{Mat, MatOp};
pub use stab::{Mode, StabMat};
pub use subspace::Subspace;
