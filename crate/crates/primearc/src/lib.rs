//! Smoothed exponential sums over primes and the circle-method machinery
//! around them: sieved arithmetic tables, exact cutoff functions, direct
//! sum evaluation, the linear/bilinear and L² estimates, a Vaughan-type
//! decomposition, closed-form minor-arc bounds with their derivation
//! chain, explicit-formula major-arc approximation against a zeta-zero
//! table, and a desk-scale verification harness with a constants ledger.
//!
//! Everything numeric is checked two ways where the design allows it:
//! direct summation against closed forms, quadrature against Plancherel
//! identities, and printed constants against 50+ digit re-derivations.

pub mod arith;
pub mod bounds;
pub mod cutoffs;
pub mod error;
pub mod estimates;
pub mod expsum;
pub mod harness;
pub mod hp;
pub mod majorarc;
pub mod quad;
pub mod report;
pub mod vaughan;

pub use error::Error;

/// Library-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
