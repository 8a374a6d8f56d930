//! Computational companion for Piatetski–Shapiro primes `p = [n^(1/γ)]`
//! with `p + 2` an almost-prime: certified enumeration, exponent-pair
//! calculus, level-of-distribution bookkeeping, the weighted-sieve
//! quadratures behind the γ threshold, and empirical harnesses.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod certify;
pub mod error;
pub mod expsum;
pub mod harness;
pub mod levels;
pub mod pairs;
pub mod ps;
pub mod quad;
pub mod rational;
pub mod report;
pub mod sieve_numerics;

pub use arith::{factorize, is_almost_prime, sieve_primes, FactorSignature};
pub use error::{Error, Result};
pub use ps::{pi_gamma, ps_enumerate, ps_indicator, scan_p3, PsGamma, PsPrimeRecord};
pub use quad::QuadratureResult;
pub use sieve_numerics::{bracket, bracket_functional, gamma_threshold, richert_integral, triple_integral, SieveWeights};
pub use harness::{b_set_main_term, bv_discrepancy, weighted_remainder, BSetRecord, DiscrepancyReport};
