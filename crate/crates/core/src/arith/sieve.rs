//! Segmented sieve of Eratosthenes.
//!
//! Segments are independent once the base primes up to `sqrt(limit)` are
//! known, so [`sieve_primes`] fills them in parallel and concatenates in
//! ascending order.

use rayon::prelude::*;

/// Width of one segment, in integers. Fits comfortably in L2.
pub const SEGMENT_LEN: u64 = 1 << 18;

/// Plain (non-segmented) sieve. Used for base primes and as a reference.
pub fn sieve_primes_simple(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::with_capacity(estimate_count(limit));
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    for (k, &c) in composite.iter().enumerate().skip(2) {
        if !c {
            primes.push(k as u64);
        }
    }
    primes
}

/// Primes in `[lo, hi)`, given every prime up to `sqrt(hi)` in `base`.
///
/// Disjoint segments may be filled concurrently.
pub fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    if hi <= lo {
        return Vec::new();
    }
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p.saturating_mul(p) >= hi {
            break;
        }
        // first multiple of p that is >= max(lo, p*p)
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut m = start;
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    let mut out = Vec::new();
    for (i, &c) in composite.iter().enumerate() {
        let v = lo + i as u64;
        if !c && v >= 2 {
            out.push(v);
        }
    }
    out
}

/// All primes `<= limit`, ascending. `limit < 2` yields an empty list.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    if limit <= SEGMENT_LEN {
        return sieve_primes_simple(limit);
    }
    let base = sieve_primes_simple(isqrt(limit));
    let end = limit + 1;
    let starts: Vec<u64> = (0..end).step_by(SEGMENT_LEN as usize).collect();
    let chunks: Vec<Vec<u64>> = starts
        .par_iter()
        .map(|&lo| sieve_segment(lo, (lo + SEGMENT_LEN).min(end), &base))
        .collect();
    let mut primes = Vec::with_capacity(estimate_count(limit));
    for c in chunks {
        primes.extend_from_slice(&c);
    }
    primes
}

/// Dense primality table for `0..=limit`.
pub fn prime_table(limit: u64) -> Vec<bool> {
    let mut table = vec![false; limit as usize + 1];
    for p in sieve_primes(limit) {
        table[p as usize] = true;
    }
    table
}

/// Floor of the square root, exact for every `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Floor of the cube root, exact for every `u64`.
pub fn icbrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let cube = |r: u64| (r as u128) * (r as u128) * (r as u128);
    let mut r = (n as f64).cbrt() as u64;
    while cube(r) > n as u128 {
        r -= 1;
    }
    while cube(r + 1) <= n as u128 {
        r += 1;
    }
    r
}

fn estimate_count(limit: u64) -> usize {
    if limit < 10 {
        return 4;
    }
    let x = limit as f64;
    (1.26 * x / x.ln()) as usize
}
