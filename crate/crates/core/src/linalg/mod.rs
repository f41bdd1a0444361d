//! Dense complex linear algebra and exact phase arithmetic.

mod eigen;
mod matrix;
mod phase;

pub use eigen::{expi_hermitian, hermitian_eigensystem, Eigensystem, HERMITIAN_TOL};
pub use matrix::{tensor, CMatrix, Ket, MAX_TENSOR_DIM};
pub use phase::RationalPhase;

pub use num_complex::Complex64;
