//! Executable versions of the analytic tools: the sawtooth ψ and its
//! truncated Fourier series, exponential sums over progressions, the
//! envelope they are compared against, near-solution counts, lcm-power
//! sums and the Heath–Brown decomposition of Λ.

mod heath_brown;

pub use heath_brown::{heath_brown_lambda, heath_brown_lambda_by_j, LogCombination};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::pairs::ExponentPair;
use crate::rational::{to_f64, Q};

/// `ψ(t) = t - [t] - 1/2`.
pub fn psi(t: f64) -> f64 {
    t - t.floor() - 0.5
}

/// Distance to the nearest integer.
pub fn dist_to_int(t: f64) -> f64 {
    (t - t.round()).abs()
}

/// `e(x) = exp(2πix)`.
pub fn e(x: f64) -> Complex64 {
    let phase = 2.0 * PI * (x - x.floor());
    Complex64::new(phase.cos(), phase.sin())
}

/// Truncation of the Fourier series of ψ at `|h| <= H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourierTruncation {
    pub cutoff: u64,
}

impl FourierTruncation {
    pub fn new(cutoff: u64) -> Result<Self> {
        if cutoff == 0 {
            return domain("Fourier cutoff H must be at least 1");
        }
        Ok(FourierTruncation { cutoff })
    }

    /// Bound `min(log(2H)/H, 1/|h|, H/h^2)` on the smoothed coefficients `b_h`.
    pub fn coefficient_bound(&self, h: i64) -> f64 {
        let big_h = self.cutoff as f64;
        let a = h.unsigned_abs() as f64;
        let first = (2.0 * big_h).ln() / big_h;
        if a == 0.0 {
            return first;
        }
        first.min(1.0 / a).min(big_h / (a * a))
    }

    /// `g(t, H) = min(1, 1/(H ||t||))`.
    pub fn weight(&self, t: f64) -> f64 {
        let d = dist_to_int(t);
        if d == 0.0 {
            1.0
        } else {
            (1.0 / (self.cutoff as f64 * d)).min(1.0)
        }
    }

    /// `Σ_{0<|h|<=H} e(th)/(2πih)`, summed in ±h pairs.
    pub fn partial_sum(&self, t: f64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for h in 1..=self.cutoff as i64 {
            let hf = h as f64;
            let plus = e(t * hf) / Complex64::new(0.0, 2.0 * PI * hf);
            let minus = e(-t * hf) / Complex64::new(0.0, -2.0 * PI * hf);
            s += plus + minus;
        }
        s
    }
}

/// `(|ψ(t) + Σ_{0<|h|<=H} e(th)/(2πih)|, g(t, H))`.
pub fn psi_truncation_residual(t: f64, cutoff: u64) -> Result<(f64, f64)> {
    let ft = FourierTruncation::new(cutoff)?;
    let s = ft.partial_sum(t);
    debug_assert!(s.im.abs() < 1e-12, "imaginary part {} did not cancel", s.im);
    Ok(((psi(t) + s.re).abs(), ft.weight(t)))
}

/// Integers `x < n <= x1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApRange {
    pub x: u64,
    pub x1: u64,
}

impl ApRange {
    /// The dyadic block `(X, 2X]`.
    pub fn dyadic(x: u64) -> Result<Self> {
        if x == 0 {
            return domain("dyadic range needs X >= 1");
        }
        Ok(ApRange { x, x1: 2 * x })
    }

    pub fn new(x: u64, x1: u64) -> Result<Self> {
        if !(x >= 1 && x < x1 && x1 <= 2 * x) {
            return domain(format!("range ({x}, {x1}] must satisfy 1 <= X < X1 <= 2X"));
        }
        Ok(ApRange { x, x1 })
    }
}

/// `Σ_{X<n<=X1, n≡a (mod d)} e(h n^γ)`.
pub fn ap_exp_sum(range: ApRange, d: u64, a: i64, h: i64, gamma: f64) -> Result<Complex64> {
    if d == 0 {
        return domain("ap_exp_sum: modulus d must be positive");
    }
    if d > range.x {
        return domain(format!("ap_exp_sum: modulus {d} exceeds X = {}", range.x));
    }
    let r = a.rem_euclid(d as i64) as u64;
    // first n > x with n ≡ r (mod d)
    let mut n = range.x + 1 + (r + d - (range.x + 1) % d) % d;
    let mut s = Complex64::new(0.0, 0.0);
    let hf = h as f64;
    while n <= range.x1 {
        if h == 0 {
            s.re += 1.0;
        } else {
            s += e(hf * (n as f64).powf(gamma));
        }
        n += d;
    }
    Ok(s)
}

/// `min(X/d, X^(1-γ)/(d|h|) + d^(κ-ℓ) |h|^κ X^(κγ - κ + ℓ))` with implied
/// constant 1.
pub fn lemma1_bound(x: f64, d: u64, h: i64, gamma: f64, pair: &ExponentPair) -> Result<f64> {
    if !pair.is_valid() {
        return domain(format!("lemma1_bound: ({}, {}) is not a valid exponent pair", pair.kappa, pair.ell));
    }
    if d == 0 || h == 0 {
        return domain("lemma1_bound: need d >= 1 and h != 0");
    }
    let (k, l) = (to_f64(&pair.kappa), to_f64(&pair.ell));
    let (df, hf) = (d as f64, h.unsigned_abs() as f64);
    let trivial = x / df;
    let second = x.powf(1.0 - gamma) / (df * hf) + df.powf(k - l) * hf.powf(k) * x.powf(k * gamma - k + l);
    Ok(trivial.min(second))
}

/// Largest `J * N` the exhaustive counter accepts.
pub const NEAR_SOLUTION_GUARD: u64 = 4000;

/// `#{(h1, h2, n1, n2) : h_i ∈ (J, 2J], n_i ∈ (N, 2N], |h1 n1^α - h2 n2^α| <= Δ}`.
///
/// Exact: sorting keeps `v_j - v_i` monotone in `j`, so the window walk
/// applies the same floating-point predicate as the quadruple loop.
pub fn count_near_solutions(delta: f64, j: u64, n: u64, alpha: f64) -> Result<u64> {
    if !(delta >= 0.0) {
        return domain("count_near_solutions: Δ must be nonnegative");
    }
    if j == 0 || n == 0 {
        return domain("count_near_solutions: J and N must be positive");
    }
    if !(alpha > 0.5 && alpha < 1.0) {
        return domain(format!("count_near_solutions: α = {alpha} not in (1/2, 1)"));
    }
    if j.saturating_mul(n) > NEAR_SOLUTION_GUARD {
        return Err(Error::Guard(format!("J*N = {} exceeds {NEAR_SOLUTION_GUARD}; use sampling mode", j * n)));
    }
    let mut v: Vec<f64> = Vec::with_capacity((j * n) as usize);
    for hh in j + 1..=2 * j {
        for nn in n + 1..=2 * n {
            v.push(hh as f64 * (nn as f64).powf(alpha));
        }
    }
    v.sort_by(f64::total_cmp);
    let mut off_diagonal = 0u64;
    for i in 0..v.len() {
        let mut k = i + 1;
        while k < v.len() && v[k] - v[i] <= delta {
            k += 1;
        }
        off_diagonal += (k - i - 1) as u64;
    }
    Ok(v.len() as u64 + 2 * off_diagonal)
}

pub const LCM_SUM_GUARD: u64 = 5000;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `Σ_{d1, d2 <= D} [d1, d2]^(-e)`.
pub fn lcm_power_sum(big_d: u64, e: &Q) -> Result<f64> {
    if big_d == 0 {
        return domain("lcm_power_sum: D must be positive");
    }
    if big_d > LCM_SUM_GUARD {
        return Err(Error::Guard(format!("D = {big_d} exceeds {LCM_SUM_GUARD}")));
    }
    let ef = to_f64(e);
    if !(ef > 0.0) {
        return domain("lcm_power_sum: exponent must be positive");
    }
    // [d1, d2]^-e = d1^-e d2^-e gcd^e
    let inv: Vec<f64> = (0..=big_d).map(|k| (k as f64).powf(-ef)).collect();
    let pos: Vec<f64> = (0..=big_d).map(|k| (k as f64).powf(ef)).collect();
    let rows: Vec<f64> = (1..=big_d)
        .into_par_iter()
        .map(|d1| {
            let mut s = 0.0;
            for d2 in 1..=big_d {
                s += inv[d2 as usize] * pos[gcd(d1, d2) as usize];
            }
            s * inv[d1 as usize]
        })
        .collect();
    Ok(rows.iter().sum())
}

/// Exact value of the lcm sum for a positive integer exponent and small `D`.
pub fn lcm_power_sum_exact(big_d: u64, e: u32) -> Result<Q> {
    if big_d == 0 || e == 0 {
        return domain("lcm_power_sum_exact: need D >= 1 and e >= 1");
    }
    if big_d > 60 {
        return Err(Error::Guard(format!("exact lcm sum limited to D <= 60, got {big_d}")));
    }
    let mut s = Q::from_integer(0.into());
    for d1 in 1..=big_d {
        for d2 in 1..=big_d {
            let l = d1 / gcd(d1, d2) * d2;
            s += Q::new(1.into(), num_traits::pow(num_bigint::BigInt::from(l), e as usize));
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn psi_values() {
        assert_eq!(psi(0.25), -0.25);
        assert_eq!(psi(0.5), 0.0);
        assert_eq!(psi(-1.75), -0.25);
        assert_eq!(psi(3.0), -0.5);
    }

    #[test]
    fn residual_at_half_vanishes() {
        for h in [1, 7, 100, 1000] {
            let (res, w) = psi_truncation_residual(0.5, h).unwrap();
            assert!(res < 1e-12, "H = {h}: {res}");
            assert!(w > 0.0 && w <= 1.0);
            let s = FourierTruncation::new(h).unwrap().partial_sum(0.5);
            assert!(s.im.abs() < 1e-12);
        }
        assert!(psi_truncation_residual(0.3, 0).is_err());
    }

    #[test]
    fn residual_envelope_and_decay() {
        let (res, w) = psi_truncation_residual(0.1, 10).unwrap();
        assert!(res <= 8.0 * w);
        for t in [0.013, 0.1, 0.27, 0.49, 0.77, 0.99] {
            let r: Vec<f64> = [100, 1000, 10_000].iter().map(|&h| psi_truncation_residual(t, h).unwrap().0).collect();
            assert!(r[0] > r[1] && r[1] > r[2], "t = {t}: {r:?}");
            let s = FourierTruncation::new(10_000).unwrap().partial_sum(t);
            assert!(s.im.abs() < 1e-12);
        }
    }

    #[test]
    fn coefficient_bound_is_symmetric() {
        let ft = FourierTruncation::new(50).unwrap();
        for h in 1..200 {
            assert_eq!(ft.coefficient_bound(h), ft.coefficient_bound(-h));
        }
        let w = ft.weight(0.0);
        assert_eq!(w, 1.0);
    }

    #[test]
    fn progression_sums() {
        let s = ap_exp_sum(ApRange::new(10, 20).unwrap(), 3, 1, 0, 0.9).unwrap();
        assert_eq!(s, Complex64::new(3.0, 0.0));
        let two = ap_exp_sum(ApRange::new(10, 12).unwrap(), 1, 0, 1, 0.9).unwrap();
        let direct = e(11f64.powf(0.9)) + e(12f64.powf(0.9));
        assert!((two - direct).norm() < 1e-12);
        let r = ApRange::dyadic(1000).unwrap();
        for h in [-5i64, 3, 17] {
            let a = ap_exp_sum(r, 7, 2, h, 0.95).unwrap();
            let b = ap_exp_sum(r, 7, 2, -h, 0.95).unwrap();
            assert!((a - b.conj()).norm() < 1e-9);
            assert!(a.norm() <= ap_exp_sum(r, 7, 2, 0, 0.95).unwrap().re + 1e-9);
        }
        assert!(ap_exp_sum(r, 0, 1, 1, 0.9).is_err());
        assert!(ApRange::new(10, 21).is_err());
    }

    #[test]
    fn lemma1_branches() {
        let h = ExponentPair::half();
        let b = lemma1_bound(100.0, 1, 1, 0.9, &h).unwrap();
        let expect = 100f64.min(100f64.powf(0.1) + 100f64.powf(0.45));
        assert!((b - expect).abs() < 1e-12);
        // huge h: second branch exceeds X/d
        assert_eq!(lemma1_bound(100.0, 4, 1_000_000_000, 0.9, &h).unwrap(), 25.0);
        assert!(lemma1_bound(100.0, 1, 1, 0.9, &ExponentPair::from_ratios(3, 5, 1, 2)).is_err());
    }

    fn brute(delta: f64, j: u64, n: u64, alpha: f64) -> u64 {
        let mut c = 0;
        for h1 in j + 1..=2 * j {
            for h2 in j + 1..=2 * j {
                for n1 in n + 1..=2 * n {
                    for n2 in n + 1..=2 * n {
                        let a = h1 as f64 * (n1 as f64).powf(alpha);
                        let b = h2 as f64 * (n2 as f64).powf(alpha);
                        if (a - b).abs() <= delta {
                            c += 1;
                        }
                    }
                }
            }
        }
        c
    }

    #[test]
    fn near_solutions() {
        assert_eq!(count_near_solutions(0.0, 1, 1, 0.9).unwrap(), 1);
        assert_eq!(count_near_solutions(5.0, 1, 1, 0.9).unwrap(), 1);
        let (j, n, al) = (3u64, 5u64, 0.8);
        let big = 2.0 * (2 * j) as f64 * ((2 * n) as f64).powf(al);
        assert_eq!(count_near_solutions(big, j, n, al).unwrap(), (j * n).pow(2));
        for &(d, j, n, al) in &[(0.01, 4, 8, 0.9), (0.0, 4, 8, 0.9), (0.3, 6, 5, 0.7), (2.0, 3, 9, 0.55)] {
            let c = count_near_solutions(d, j, n, al).unwrap();
            assert_eq!(c, brute(d, j, n, al));
        }
        let c = count_near_solutions(0.01, 4, 8, 0.9).unwrap() as f64;
        assert!(c <= 16.0 * (0.01 * 4.0 * 8f64.powf(1.1) + 32.0 * 32f64.ln()));
        assert!(matches!(count_near_solutions(0.1, 100, 41, 0.9), Err(Error::Guard(_))));
    }

    #[test]
    fn lcm_sums() {
        assert_eq!(lcm_power_sum_exact(2, 1).unwrap(), q(5, 2));
        assert!((lcm_power_sum(2, &qi(1)).unwrap() - 2.5).abs() < 1e-15);
        assert_eq!(lcm_power_sum(1, &q(5, 7)).unwrap(), 1.0);
        let exact = lcm_power_sum_exact(30, 1).unwrap();
        assert!((lcm_power_sum(30, &qi(1)).unwrap() - to_f64(&exact)).abs() < 1e-11);
        assert!(lcm_power_sum(5001, &qi(1)).is_err());
        // nondecreasing in D, nonincreasing in e
        let a = lcm_power_sum(40, &q(5, 7)).unwrap();
        assert!(lcm_power_sum(41, &q(5, 7)).unwrap() > a);
        assert!(lcm_power_sum(40, &q(6, 7)).unwrap() < a);
    }
}
