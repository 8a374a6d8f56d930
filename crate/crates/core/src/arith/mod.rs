//! Integer substrate: primes, factorization and the classical arithmetic
//! functions φ, τ, μ and Λ.

mod factor;
mod sieve;

pub use factor::{factorize, is_prime, FactorSignature, TRIAL_LIMIT};
pub use sieve::{icbrt, isqrt, prime_table, sieve_primes, sieve_primes_simple, sieve_segment, SEGMENT_LEN};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Which arithmetic function [`arith_fn`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithFn {
    Phi,
    Tau,
    LambdaVm,
    Mobius,
}

/// Value of an arithmetic function. Λ is kept symbolic: `Lambda(Some(p))`
/// stands for `log p`, `Lambda(None)` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArithValue {
    Int(i64),
    Lambda(Option<u64>),
}

impl ArithValue {
    /// Numeric value (`log p` taken once for Λ).
    pub fn to_f64(self) -> f64 {
        match self {
            ArithValue::Int(v) => v as f64,
            ArithValue::Lambda(Some(p)) => (p as f64).ln(),
            ArithValue::Lambda(None) => 0.0,
        }
    }
}

pub fn euler_phi(sig: &FactorSignature) -> u64 {
    sig.factors
        .iter()
        .fold(sig.n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisor_count(sig: &FactorSignature) -> u64 {
    sig.factors.iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Base prime of `n` when `n` is a prime power, else `None`.
pub fn von_mangoldt_base(sig: &FactorSignature) -> Option<u64> {
    match sig.factors.as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

pub fn arith_fn(n: u64, which: ArithFn) -> Result<ArithValue> {
    let sig = factorize(n)?;
    Ok(match which {
        ArithFn::Phi => ArithValue::Int(euler_phi(&sig) as i64),
        ArithFn::Tau => ArithValue::Int(divisor_count(&sig) as i64),
        ArithFn::Mobius => ArithValue::Int(sig.mobius as i64),
        ArithFn::LambdaVm => ArithValue::Lambda(von_mangoldt_base(&sig)),
    })
}

/// Ω(n) <= r.
pub fn is_almost_prime(n: u64, r: u32) -> Result<bool> {
    if n < 2 {
        return domain(format!("is_almost_prime: n = {n} < 2"));
    }
    if r < 1 {
        return domain("is_almost_prime: r must be at least 1");
    }
    Ok(factorize(n)?.big_omega <= r)
}

/// All divisors of `sig.n`, ascending.
pub fn divisors(sig: &FactorSignature) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in &sig.factors {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}
