//! 64-bit factorization: trial division by sieved primes up to 10^6, a
//! deterministic Miller–Rabin test, then Pollard rho with Brent's cycle
//! detection for whatever cofactor is left.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::sieve::sieve_primes_simple;
use crate::error::{domain, Result};

/// Trial division bound.
pub const TRIAL_LIMIT: u64 = 1_000_000;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve_primes_simple(TRIAL_LIMIT))
}

/// Complete factorization of a positive integer together with the derived
/// counting functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSignature {
    pub n: u64,
    /// `(prime, exponent)` pairs, ascending by prime.
    pub factors: Vec<(u64, u32)>,
    /// Ω(n), prime factors counted with multiplicity.
    pub big_omega: u32,
    /// ω(n), distinct prime factors.
    pub little_omega: u32,
    pub mobius: i8,
    /// Smallest prime factor; 1 for `n = 1`.
    pub spf: u64,
}

impl FactorSignature {
    pub fn from_factors(n: u64, mut factors: Vec<(u64, u32)>) -> Self {
        factors.sort_unstable();
        let big_omega = factors.iter().map(|&(_, e)| e).sum();
        let little_omega = factors.len() as u32;
        let mobius = if factors.iter().any(|&(_, e)| e >= 2) {
            0
        } else if little_omega.is_multiple_of(2) {
            1
        } else {
            -1
        };
        let spf = factors.first().map_or(1, |&(p, _)| p);
        FactorSignature { n, factors, big_omega, little_omega, mobius, spf }
    }

    /// Product of `p^e` over the stored factors, `None` on overflow.
    pub fn product(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            acc.checked_mul(p.checked_pow(e)?)
        })
    }

    pub fn is_squarefree(&self) -> bool {
        self.mobius != 0
    }

    /// Compact text form such as `2^2*3`.
    pub fn factor_string(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        self.factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for the whole `u64` range. The first twelve
/// prime bases are a proven witness set below 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One nontrivial factor of an odd composite `n` (Brent's variant).
fn pollard_brent(n: u64) -> u64 {
    const BATCH: u64 = 128;
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut x = y;
        let mut ys = y;
        let mut g = 1u64;
        let mut q = 1u64;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // batch overshot; walk one step at a time from the saved point
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<(u64, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push((n, 1));
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Factorize `1 <= n < 2^63`.
pub fn factorize(n: u64) -> Result<FactorSignature> {
    if n == 0 {
        return domain("factorize: n must be positive");
    }
    if n > i64::MAX as u64 {
        return domain(format!("factorize: n = {n} exceeds 2^63 - 1"));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut big = Vec::new();
        if rest < TRIAL_LIMIT * TRIAL_LIMIT {
            // no factor below 10^6 and rest < 10^12: rest is prime
            big.push((rest, 1));
        } else {
            split_large(rest, &mut big);
        }
        big.sort_unstable();
        for (p, e) in big {
            match factors.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => factors.push((p, e)),
            }
        }
    }
    Ok(FactorSignature::from_factors(n, factors))
}
