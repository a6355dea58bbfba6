//! Exact computations with finite subgroups of O(3), SU(2) and Pin±(3).

pub mod catalog;
pub mod chars;
pub mod cli;
pub mod cyclo;
pub mod dyson;
pub mod grp;
pub mod kleinian;
pub mod mckay;

pub use cyclo::Cyclotomic;

/// Cyclotomic numbers with arbitrary-precision rational coefficients.
pub type Cyc = cyclo::Cyclotomic<num_rational::BigRational>;
/// Cyclotomic numbers with machine-word rational coefficients.
pub type Cyc64 = cyclo::Cyclotomic<num_rational::Rational64>;
