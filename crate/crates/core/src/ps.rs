//! Piatetski–Shapiro sequences `[n^(1/γ)]`, their primes, and the scan for
//! PS primes `p` with `p + 2` an almost-prime.
//!
//! Enumeration walks witnesses `n` rather than candidates `k`: for
//! `γ < 1` the map `n -> [n^(1/γ)]` is strictly increasing, so each index
//! appears once, together with the witness that certifies it.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, isqrt, sieve_primes_simple, sieve_segment, FactorSignature};
use crate::certify::{Certifier, DEFAULT_GUARD, DEFAULT_START_BITS, MAX_BITS};
use crate::error::{domain, Result};

/// γ values bracketing the almost-prime threshold, used by default in reports.
pub const DEFAULT_GAMMA_GRID: [f64; 4] = [0.99, 0.999, 0.9989445, 0.9995];

/// Witnesses handled per parallel work unit.
const CHUNK: u64 = 1 << 16;

/// A PS exponent together with its certification policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsGamma {
    pub gamma: f64,
    /// Starting precision of the interval stage.
    pub precision_bits: u32,
    /// Relative guard band of the floating-point filter.
    pub guard: f64,
}

impl PsGamma {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.5 && gamma < 1.0) {
            return domain(format!("gamma = {gamma} must lie in (1/2, 1)"));
        }
        Ok(PsGamma { gamma, precision_bits: DEFAULT_START_BITS, guard: DEFAULT_GUARD })
    }

    pub fn certifier(&self) -> Certifier {
        Certifier { guard: Some(self.guard), start_bits: self.precision_bits, max_bits: MAX_BITS }
    }
}

/// A PS prime with its witness and the factorization of `p + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsPrimeRecord {
    pub p: u64,
    pub witness_n: u64,
    pub companion: FactorSignature,
}

/// `[-k^γ] - [-(k+1)^γ]`, which is 1 exactly when `k = [n^(1/γ)]` for some `n`.
pub fn ps_indicator(k: u64, g: &PsGamma) -> Result<u8> {
    if k == 0 {
        return domain("ps_indicator: k must be positive");
    }
    let c = g.certifier();
    let lo = c.ceil_pow(k, g.gamma)?;
    let hi = c.ceil_pow(k + 1, g.gamma)?;
    Ok((hi - lo) as u8)
}

/// `[-1] - [-(x+1)^γ]`: the number of PS indices `k <= x`, which is also the
/// largest witness needed to reach them.
pub fn ps_index_count(x: u64, g: &PsGamma) -> Result<u64> {
    Ok(g.certifier().ceil_pow(x + 1, g.gamma)? - 1)
}

fn indices_for_witnesses(lo: u64, hi: u64, c: &Certifier, gamma: f64) -> Result<Vec<(u64, u64)>> {
    (lo..=hi).map(|n| Ok((c.floor_root(n, gamma)?, n))).collect()
}

/// All `(k, n)` with `k = [n^(1/γ)] <= x`, ascending in `k`.
pub fn ps_enumerate(x: u64, g: &PsGamma) -> Result<Vec<(u64, u64)>> {
    if x == 0 {
        return domain("ps_enumerate: x must be positive");
    }
    let n_max = ps_index_count(x, g)?;
    let c = g.certifier();
    let chunks: Vec<Result<Vec<(u64, u64)>>> = witness_chunks(n_max)
        .into_par_iter()
        .map(|(lo, hi)| indices_for_witnesses(lo, hi, &c, g.gamma))
        .collect();
    let mut out = Vec::with_capacity(n_max as usize);
    for ch in chunks {
        out.extend(ch?);
    }
    debug_assert!(out.last().is_none_or(|&(k, _)| k <= x));
    Ok(out)
}

fn witness_chunks(n_max: u64) -> Vec<(u64, u64)> {
    (1..=n_max)
        .step_by(CHUNK as usize)
        .map(|lo| (lo, (lo + CHUNK - 1).min(n_max)))
        .collect()
}

/// All PS primes `p <= x` with their witnesses, ascending.
///
/// Primality comes from sieving the `k`-span of each witness chunk.
pub fn ps_primes(x: u64, g: &PsGamma) -> Result<Vec<(u64, u64)>> {
    if x < 2 {
        return Ok(Vec::new());
    }
    let n_max = ps_index_count(x, g)?;
    let c = g.certifier();
    let base = sieve_primes_simple(isqrt(x) + 1);
    let chunks: Vec<Result<Vec<(u64, u64)>>> = witness_chunks(n_max)
        .into_par_iter()
        .map(|(lo, hi)| {
            let idx = indices_for_witnesses(lo, hi, &c, g.gamma)?;
            let (k_lo, k_hi) = (idx[0].0, idx[idx.len() - 1].0);
            let primes = sieve_segment(k_lo, k_hi + 1, &base);
            let mut out = Vec::new();
            let mut j = 0;
            for (k, n) in idx {
                while j < primes.len() && primes[j] < k {
                    j += 1;
                }
                if j < primes.len() && primes[j] == k {
                    out.push((k, n));
                }
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for ch in chunks {
        out.extend(ch?);
    }
    Ok(out)
}

/// π_γ(x), the number of PS primes up to `x`.
pub fn pi_gamma(x: u64, g: &PsGamma) -> Result<u64> {
    if x < 2 {
        return domain("pi_gamma: x must be at least 2");
    }
    Ok(ps_primes(x, g)?.len() as u64)
}

/// PS primes `p <= x` whose companion `p + 2` has at most `r` prime factors.
pub fn scan_p3(x: u64, g: &PsGamma, r: u32) -> Result<Vec<PsPrimeRecord>> {
    if x < 5 {
        return domain("scan_p3: x must be at least 5");
    }
    if r < 1 {
        return domain("scan_p3: r must be at least 1");
    }
    let primes = ps_primes(x, g)?;
    let records: Vec<Result<Option<PsPrimeRecord>>> = primes
        .par_iter()
        .map(|&(p, n)| {
            let companion = factorize(p + 2)?;
            Ok((companion.big_omega <= r).then_some(PsPrimeRecord { p, witness_n: n, companion }))
        })
        .collect();
    let mut out = Vec::new();
    for rec in records {
        if let Some(rec) = rec? {
            out.push(rec);
        }
    }
    Ok(out)
}

/// Re-check a record from scratch: certified witness floor, primality of
/// `p`, and the factorization and Ω bound of `p + 2`.
pub fn verify_record(rec: &PsPrimeRecord, g: &PsGamma, r: u32) -> Result<bool> {
    let c = g.certifier();
    let n = rec.witness_n;
    if n == 0 {
        return Ok(false);
    }
    // floor(n^(1/γ)) = p  <=>  p^γ <= n < (p+1)^γ
    let lower_ok = c.cmp_pow(rec.p, g.gamma, n)? != Ordering::Greater;
    let upper_ok = c.cmp_pow(rec.p + 1, g.gamma, n)? == Ordering::Greater;
    let prev_ok = n == 1 || c.floor_root(n - 1, g.gamma)? < rec.p;
    let comp = &rec.companion;
    let refactored = factorize(rec.p + 2)?;
    Ok(lower_ok
        && upper_ok
        && prev_ok
        && is_prime(rec.p)
        && comp.n == rec.p + 2
        && comp.product() == Some(comp.n)
        && *comp == refactored
        && comp.big_omega <= r)
}
