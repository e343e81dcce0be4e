//! Exact combinatorial engine for the local theta correspondence.
//!
//! The crate is organised bottom-up:
//!
//! - [`formed_spaces`]: quadratic and symplectic spaces over local fields,
//!   Witt indices and Witt towers.
//! - [`dual_pairs`]: classical signatures, Howe duality of labels, real group
//!   names and ambient symplectic dimensions.
//! - [`orbits`]: partitions, complex nilpotent orbits and admissible
//!   ε-Hermitian Young tableaux for real orbits.
//! - [`moment_descent`]: the moment-map descent of orbits, its stabilizers,
//!   the check theta lift and orbit induction.
//! - [`conservation`]: a constraint ledger for first-occurrence indices.
//! - [`growth`]: growth exponents, convergence and unitarity thresholds along
//!   lifting chains, and the doubling signatures.
//!
//! Numerical quantities that are not plain integers (growth bounds, the
//! doubling parameter `s₀`, the function Ψ) are generic over [`Scalar`], so the
//! same code runs over exact rationals and over floats. The aliases below pin
//! the exact instantiations used by the CLI and the acceptance suite.

pub mod conservation;
pub mod dual_pairs;
pub mod error;
pub mod formed_spaces;
pub mod growth;
pub mod moment_descent;
pub mod orbits;
pub mod scalar;

pub use error::{ErrorClass, ThetaError};
pub use scalar::Scalar;

/// Exact rational with machine-word numerator and denominator.
pub type Rational = num_rational::Ratio<i64>;

/// Arbitrary-precision rational, used where products can grow (Ψ).
pub type BigRational = num_rational::BigRational;

/// Growth bound over exact rationals.
pub type NuQ = growth::Nu<Rational>;

/// Growth bound over `f64`.
pub type NuF64 = growth::Nu<f64>;

/// Lifting-chain plan over exact rationals.
pub type ChainPlanQ = growth::ChainPlan<Rational>;

/// Ψ evaluation over arbitrary-precision rationals.
pub type PsiQ = growth::PsiValue<BigRational>;

/// Doubling-method parameters over exact rationals.
pub type RallisParametersQ = conservation::RallisParameters<Rational>;

pub type Result<T, E = ThetaError> = std::result::Result<T, E>;
