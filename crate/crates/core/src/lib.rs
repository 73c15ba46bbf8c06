//! Harmonic analysis on the p-adic integers `Z_p` at finite precision.
//!
//! - [`padic`]: fixed-precision p-adic integers and the Monna map.
//! - [`dual`]: the character group of `Z_p` and exact character values.
//! - [`harmonic`]: Fourier transforms between sampled functions on
//!   `Z/p^L` and character coefficients, over floats or exact cyclotomics.
//! - [`balls`]: ball indicators, their closed-form coefficients, and the
//!   ball partitions that generate `K_0` of the continuous functions.
//! - [`spectral`]: a translation-equivariant Dirac operator, its trace
//!   sums, commutators and resolvent counts.
//!
//! Transforms and sweeps run on rayon when the `parallel` feature is on
//! (the default); [`Strategy`] picks the sequential path explicitly.

pub mod arith;
pub mod balls;
pub mod cyclotomic;
pub mod dual;
pub mod error;
pub mod harmonic;
pub mod padic;
pub mod parallel;
pub mod report;
pub mod scalar;
pub mod spectral;

pub use balls::{ball_coefficients, ball_indicator, k0_generator_list, monna_interval, verify_partition, Ball};
pub use cyclotomic::Cyclotomic;
pub use dual::{CharIndex, Phase};
pub use error::{Error, Result};
pub use harmonic::{dft, fft, synthesize, CoefficientMap, LevelFunction};
pub use padic::{PadicInt, Valuation};
pub use parallel::Strategy;
pub use report::Table;
pub use scalar::Scalar;
pub use spectral::{
    apply_dirac, check_equivariance, commutator_matrix, resolvent_compactness_check, trace_exact, trace_power,
    DiracOperator,
};
