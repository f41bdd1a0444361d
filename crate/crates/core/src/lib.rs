//! Multi-setting Bell inequalities for pairs of prime-dimensional quantum systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, kets, a Hermitian eigensolver and exact
//!   rational phases.
//! * [`operators`]: generalized Pauli operators `X`, `Z`, the `f_ij = X^i Z^j` basis,
//!   measurement settings with a root-of-unity spectrum and the mutual-unbiasedness test.
//! * [`lhv`]: deterministic local-hidden-variable assignments, Δ-counting and the
//!   exact classical bounds (exhaustive and closed form).
//! * [`quantum`]: the Bell operator, the mutually unbiased settings and maximally
//!   entangled states that violate the inequality, closed-form expectations,
//!   violation ratios and white-noise thresholds.
//! * [`optimizer`]: gradient ascent of the Bell value over local unitaries, Schmidt
//!   states, entanglement entropy and the triangle / route sweeps.

pub mod error;
pub mod lhv;
pub mod linalg;
pub mod operators;
pub mod optimizer;
pub mod quantum;

pub use error::{Error, Result};
pub use lhv::{analytic_bounds, brute_force_bounds, direct_bell_value, Bounds, LhvAssignment};
pub use linalg::{CMatrix, Complex64, Ket, RationalPhase};
pub use operators::{MeasurementSetting, PrimeDim};
pub use optimizer::{OptimizerConfig, SchmidtPoint};
pub use quantum::{BellScenario, NoiseMixture};
