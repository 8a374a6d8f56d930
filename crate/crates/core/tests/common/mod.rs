//! Oracles shared by the integration tests. None of them call into the
//! crate's certification or enumeration code.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Fixed-point bracket `[lo, hi] / 2^p` around `k^γ`.
///
/// Writes `γ = Σ b_j 2^-j` (exact for a double in (0, 1)) and multiplies the
/// iterated square roots `k^(2^-j)` for the set bits, rounding each step
/// outward.
pub fn pow_bracket(k: u64, gamma: f64, p: u32) -> (BigUint, BigUint) {
    assert!(gamma > 0.0 && gamma < 1.0);
    let (mant, exp, _) = num_traits::Float::integer_decode(gamma);
    let depth = (-exp) as u32;
    let one = BigUint::one() << p;
    let (mut r_lo, mut r_hi) = (BigUint::from(k) << p, BigUint::from(k) << p);
    let (mut lo, mut hi) = (one.clone(), one.clone());
    for j in 1..=depth {
        r_lo = (&r_lo << p).sqrt();
        let sq = &r_hi << p;
        let s = sq.sqrt();
        r_hi = if &s * &s == sq { s } else { s + 1u32 };
        let bit = depth - j;
        if bit < 64 && (mant >> bit) & 1 == 1 {
            lo = (&lo * &r_lo) >> p;
            let prod = &hi * &r_hi;
            let q = &prod >> p;
            hi = if (&q << p) == prod { q } else { q + 1u32 };
        }
    }
    (lo, hi)
}

fn ceil_fixed(v: &BigUint, p: u32) -> BigUint {
    let mask = (BigUint::one() << p) - 1u32;
    let q = v >> p;
    if (v & &mask).is_zero() {
        q
    } else {
        q + 1u32
    }
}

/// `⌈k^γ⌉` from the square-root bracket, raising precision until decided.
pub fn ceil_pow_oracle(k: u64, gamma: f64) -> u64 {
    for p in [128u32, 256, 512, 1024] {
        let (lo, hi) = pow_bracket(k, gamma, p);
        let (a, b) = (ceil_fixed(&lo, p), ceil_fixed(&hi, p));
        if a == b {
            return a.to_u64().expect("fits");
        }
    }
    panic!("oracle undecided for {k}^{gamma}");
}

/// `⌈k^γ⌉` by libm, deferring to the bracket oracle near integers.
pub fn ceil_pow_fast(k: u64, gamma: f64) -> u64 {
    let y = (k as f64).powf(gamma);
    if (y - y.round()).abs() > 1e-6 {
        y.ceil() as u64
    } else {
        ceil_pow_oracle(k, gamma)
    }
}

/// Sieve of Eratosthenes, `is_prime[n]` for `n <= limit`.
pub fn prime_flags(limit: usize) -> Vec<bool> {
    let mut f = vec![true; limit + 1];
    f[0] = false;
    if limit >= 1 {
        f[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if f[i] {
            let mut j = i * i;
            while j <= limit {
                f[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    f
}

/// Ω(n) for all `n <= limit` by a smallest-prime-factor sieve.
pub fn big_omega_table(limit: usize) -> Vec<u8> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut omega = vec![0u8; limit + 1];
    for n in 2..=limit {
        omega[n] = omega[n / spf[n] as usize] + 1;
    }
    omega
}

/// PS primes `p <= x` found by testing every `k` with the indicator
/// `⌈(k+1)^γ⌉ - ⌈k^γ⌉`.
pub fn ps_primes_brute(x: u64, gamma: f64, is_prime: &[bool]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = ceil_pow_fast(1, gamma);
    for k in 1..=x {
        let next = ceil_pow_fast(k + 1, gamma);
        if next > c && is_prime[k as usize] {
            out.push(k);
        }
        c = next;
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

/// `Λ(n)` as `Some(p)` when `n = p^k`, by trial division.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        return Some(n);
    }
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}
