//! Certified floors and ceilings of `base^exp` for integer `base` and a
//! positive `f64` exponent.
//!
//! Every decision goes through [`Certifier::cmp_pow`], which compares
//! `base^exp` against an integer. A double-precision filter settles the
//! clear cases: `powf` is trusted to within the relative guard band, which
//! sits many orders of magnitude above libm's error. Anything inside the
//! band is handed to a fixed-point interval evaluation on big integers with
//! directed rounding (lower ends floored, upper ends ceiled), whose working
//! precision doubles until the interval excludes the target or the cap is
//! hit. Exact hits such as `16^0.75 = 8` are recognised algebraically, since
//! no interval around a transcendental evaluation can ever collapse onto an
//! integer.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::isqrt;
use crate::error::{Error, Result};

/// Default relative guard band of the double-precision filter (2^-40).
pub const DEFAULT_GUARD: f64 = 9.094947017729282e-13;
/// First precision of the interval stage, in bits.
pub const DEFAULT_START_BITS: u32 = 64;
/// Precision cap; past this the comparison reports exhaustion.
pub const MAX_BITS: u32 = 512;

/// Precision policy for certified power comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certifier {
    /// Relative guard of the `f64` filter. `None` skips the filter.
    pub guard: Option<f64>,
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for Certifier {
    fn default() -> Self {
        Certifier { guard: Some(DEFAULT_GUARD), start_bits: DEFAULT_START_BITS, max_bits: MAX_BITS }
    }
}

impl Certifier {
    /// Interval arithmetic only, no floating-point filter.
    pub fn interval_only() -> Self {
        Certifier { guard: None, ..Default::default() }
    }

    /// Sign of `base^exp - target`, certified.
    pub fn cmp_pow(&self, base: u64, exp: f64, target: u64) -> Result<Ordering> {
        check_exp(exp)?;
        if base <= 1 {
            // 0^y = 0 and 1^y = 1 for y > 0
            return Ok(base.cmp(&target));
        }
        if target == 0 {
            return Ok(Ordering::Greater);
        }
        if let Some(g) = self.guard {
            let v = (base as f64).powf(exp);
            let t = target as f64;
            if v.is_finite() {
                if v * (1.0 + g) < t {
                    return Ok(Ordering::Less);
                }
                if v * (1.0 - g) > t {
                    return Ok(Ordering::Greater);
                }
            }
        }
        match exact_power(base, exp) {
            ExactPower::Integer(v) => return Ok(v.cmp(&target)),
            ExactPower::Overflow => return Ok(Ordering::Greater),
            ExactPower::NotInteger => {}
        }
        let mut bits = self.start_bits.max(16);
        loop {
            let (lo, hi) = pow_interval(base, exp, bits);
            let w = bits + GUARD_BITS;
            let t = BigInt::from(target) << w as usize;
            if hi < t {
                return Ok(Ordering::Less);
            }
            if lo > t {
                return Ok(Ordering::Greater);
            }
            if bits >= self.max_bits {
                return Err(Error::PrecisionExhausted {
                    what: format!("{base}^{exp} vs {target}"),
                    bits,
                });
            }
            bits = (bits * 2).min(self.max_bits);
        }
    }

    /// `floor(base^exp)`.
    pub fn floor_pow(&self, base: u64, exp: f64) -> Result<u64> {
        check_exp(exp)?;
        let mut n = estimate(base, exp)?;
        loop {
            if self.cmp_pow(base, exp, n)? == Ordering::Less {
                n -= 1;
                continue;
            }
            if self.cmp_pow(base, exp, n + 1)? != Ordering::Less {
                n += 1;
                continue;
            }
            return Ok(n);
        }
    }

    /// `ceil(base^exp)`.
    pub fn ceil_pow(&self, base: u64, exp: f64) -> Result<u64> {
        let f = self.floor_pow(base, exp)?;
        Ok(if self.cmp_pow(base, exp, f)? == Ordering::Equal { f } else { f + 1 })
    }

    /// `floor(n^(1/gamma))`, i.e. the largest `m` with `m^gamma <= n`.
    pub fn floor_root(&self, n: u64, gamma: f64) -> Result<u64> {
        check_exp(gamma)?;
        if n == 0 {
            return Ok(0);
        }
        let est = (n as f64).powf(1.0 / gamma);
        if !est.is_finite() || est >= u64::MAX as f64 / 2.0 {
            return Err(Error::Domain(format!("floor_root: {n}^(1/{gamma}) overflows u64")));
        }
        let mut m = est.floor() as u64;
        loop {
            if m > 0 && self.cmp_pow(m, gamma, n)? == Ordering::Greater {
                m -= 1;
                continue;
            }
            if self.cmp_pow(m + 1, gamma, n)? != Ordering::Greater {
                m += 1;
                continue;
            }
            return Ok(m);
        }
    }
}

fn check_exp(exp: f64) -> Result<()> {
    if !(exp.is_finite() && exp > 0.0) {
        return Err(Error::Domain(format!("exponent {exp} must be finite and positive")));
    }
    Ok(())
}

fn estimate(base: u64, exp: f64) -> Result<u64> {
    let v = (base as f64).powf(exp);
    if !v.is_finite() || v >= 1.8e19 {
        return Err(Error::Domain(format!("{base}^{exp} overflows u64")));
    }
    Ok(v.floor() as u64)
}

/// Result of the algebraic exactness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactPower {
    Integer(u64),
    /// An integer larger than `u64::MAX`.
    Overflow,
    NotInteger,
}

/// Decide whether `base^exp` is an integer. With `exp = m / 2^k`, `m` odd,
/// this happens iff `base` is a perfect `2^k`-th power `r^(2^k)`, and then
/// the value is `r^m`.
pub fn exact_power(base: u64, exp: f64) -> ExactPower {
    if base <= 1 {
        return ExactPower::Integer(base);
    }
    let (m, k) = dyadic(exp);
    let mut r = base;
    for _ in 0..k {
        let s = isqrt(r);
        if s * s != r {
            return ExactPower::NotInteger;
        }
        r = s;
    }
    // m odd, so m > 0; k <= 0 means exp = m * 2^(-k) is an integer
    let e = if k <= 0 { m.checked_shl((-k) as u32).filter(|v| v >> (-k) as u32 == m) } else { Some(m) };
    match e.and_then(|e| u32::try_from(e).ok()).and_then(|e| r.checked_pow(e)) {
        Some(v) => ExactPower::Integer(v),
        None => ExactPower::Overflow,
    }
}

/// `x = m * 2^-k` with `m` odd.
fn dyadic(x: f64) -> (u64, i32) {
    let bits = x.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut m, mut e) = if exp_field == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_field - 1075)
    };
    let tz = m.trailing_zeros();
    m >>= tz;
    e += tz as i32;
    (m, -e)
}

/// Extra fractional bits carried beyond the requested precision.
const GUARD_BITS: u32 = 16;

fn floor_shr(v: &BigInt, s: u32) -> BigInt {
    v.div_floor(&(BigInt::one() << s as usize))
}

fn ceil_shr(v: &BigInt, s: u32) -> BigInt {
    v.div_ceil(&(BigInt::one() << s as usize))
}

/// Lower and upper bounds on `2 atanh(a/b)`, scaled by `2^w`, for
/// `0 <= a/b <= 1/3`.
fn two_atanh(a: &BigInt, b: &BigInt, w: u32) -> (BigInt, BigInt) {
    let t_lo = (a << w as usize).div_floor(b);
    let t_hi = (a << w as usize).div_ceil(b);
    let t2_lo = floor_shr(&(&t_lo * &t_lo), w);
    let t2_hi = ceil_shr(&(&t_hi * &t_hi), w);
    let mut pow_lo = t_lo.clone();
    let mut pow_hi = t_hi.clone();
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let d = BigInt::from(2 * k + 1);
        sum_lo += pow_lo.div_floor(&d);
        sum_hi += pow_hi.div_ceil(&d);
        pow_lo = floor_shr(&(&pow_lo * &t2_lo), w);
        pow_hi = ceil_shr(&(&pow_hi * &t2_hi), w);
        k += 1;
        if pow_hi.is_zero() || pow_hi.bits() <= 1 {
            break;
        }
    }
    // tail: Σ_{j>=k} t^(2j+1)/(2j+1) <= t^(2k+1) / (1 - t^2) <= (9/8) t^(2k+1)
    let tail = (&pow_hi * 9u32).div_ceil(&BigInt::from(8)) + 1;
    sum_hi += tail;
    (sum_lo * 2, sum_hi * 2)
}

fn ln2_bounds(w: u32) -> (BigInt, BigInt) {
    two_atanh(&BigInt::one(), &BigInt::from(3), w)
}

/// Bounds on `ln x` scaled by `2^w`, for integer `x >= 1`.
fn ln_bounds(x: u64, w: u32, ln2: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    let e = 63 - x.leading_zeros();
    let pe = 1u128 << e;
    let a = BigInt::from(x as u128 - pe);
    let b = BigInt::from(x as u128 + pe);
    let (r_lo, r_hi) = two_atanh(&a, &b, w);
    (&ln2.0 * e + r_lo, &ln2.1 * e + r_hi)
}

/// Lower bound (`upper = false`) or upper bound of `exp(s)` for a fixed-point
/// `s >= 0` at scale `2^w`, with `s` below about 1.
fn exp_small(s: &BigInt, w: u32, upper: bool) -> BigInt {
    debug_assert!(!s.is_negative());
    let j: u32 = 8;
    let one = BigInt::one() << w as usize;
    let r = if upper { ceil_shr(s, j) } else { floor_shr(s, j) };
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut k = 1u64;
    loop {
        let num = &term * &r;
        let den = BigInt::from(k) << w as usize;
        term = if upper { num.div_ceil(&den) } else { num.div_floor(&den) };
        sum += &term;
        k += 1;
        if term.bits() <= 1 {
            break;
        }
    }
    if upper {
        // remainder after the last term is below twice that term since r < 1/2
        sum += &term * 2 + 2;
    }
    for _ in 0..j {
        let sq = &sum * &sum;
        sum = if upper { ceil_shr(&sq, w) } else { floor_shr(&sq, w) };
    }
    sum
}

/// Bound on `exp(z)` for fixed-point `z >= 0`.
fn exp_bound(z: &BigInt, w: u32, ln2: &(BigInt, BigInt), upper: bool) -> BigInt {
    // exp(z) = 2^q exp(z - q ln2); use the ln2 end that keeps the bound valid
    let l2 = if upper { &ln2.0 } else { &ln2.1 };
    let q = z.div_floor(l2);
    let s = z - &q * l2;
    let q = u32::try_from(&q).expect("exponent reduction overflow");
    exp_small(&s, w, upper) << q as usize
}

/// Interval around `base^exp` at scale `2^(bits + GUARD_BITS)`.
fn pow_interval(base: u64, exp: f64, bits: u32) -> (BigInt, BigInt) {
    let w = bits + GUARD_BITS;
    let ln2 = ln2_bounds(w);
    let (ln_lo, ln_hi) = ln_bounds(base, w, &ln2);
    let (m, k) = dyadic(exp);
    let (z_lo, z_hi) = if k >= 0 {
        (floor_shr(&(&ln_lo * m), k as u32), ceil_shr(&(&ln_hi * m), k as u32))
    } else {
        ((&ln_lo * m) << (-k) as usize, (&ln_hi * m) << (-k) as usize)
    };
    let z_lo = if z_lo.sign() == Sign::Minus { BigInt::zero() } else { z_lo };
    (exp_bound(&z_lo, w, &ln2, false), exp_bound(&z_hi, w, &ln2, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_f64(v: &BigInt, w: u32) -> f64 {
        let s = v.to_string();
        s.parse::<f64>().unwrap() / 2f64.powi(w as i32)
    }

    #[test]
    fn ln2_and_ln_brackets() {
        let w = 200;
        let l2 = ln2_bounds(w);
        assert!(l2.0 < l2.1);
        assert!((to_f64(&l2.0, w) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((&l2.1 - &l2.0).bits() < 12);
        let (lo, hi) = ln_bounds(10, w, &l2);
        assert!((to_f64(&lo, w) - 10f64.ln()).abs() < 1e-15);
        assert!(lo < hi);
    }

    #[test]
    fn pow_interval_brackets_known_values() {
        let (lo, hi) = pow_interval(10, 1.0 / 0.9, 64);
        let w = 64 + GUARD_BITS;
        let v = 10f64.powf(1.0 / 0.9);
        assert!(to_f64(&lo, w) <= v * (1.0 + 1e-15));
        assert!(to_f64(&hi, w) >= v * (1.0 - 1e-15));
        assert!((&hi - &lo).bits() < (w - 50) as u64);
    }

    #[test]
    fn exact_hits() {
        assert_eq!(exact_power(16, 0.75), ExactPower::Integer(8));
        assert_eq!(exact_power(8, 1.0 / 3.0), ExactPower::NotInteger);
        assert_eq!(exact_power(9, 0.5), ExactPower::Integer(3));
        assert_eq!(exact_power(10, 0.9), ExactPower::NotInteger);
        assert_eq!(exact_power(7, 2.0), ExactPower::Integer(49));
        let c = Certifier::interval_only();
        assert_eq!(c.cmp_pow(16, 0.75, 8).unwrap(), Ordering::Equal);
        assert_eq!(c.floor_pow(16, 0.75).unwrap(), 8);
        assert_eq!(c.ceil_pow(16, 0.75).unwrap(), 8);
        assert_eq!(c.floor_root(8, 0.75).unwrap(), 16);
        assert_eq!(Certifier::default().cmp_pow(16, 0.75, 8).unwrap(), Ordering::Equal);
    }

    #[test]
    fn floors_agree_with_filter_path() {
        let fast = Certifier::default();
        let slow = Certifier::interval_only();
        for base in (2u64..3000).step_by(7) {
            for &e in &[0.9, 0.999, 0.5, 1.0 / 0.9, 0.09375, 0.34275] {
                assert_eq!(fast.floor_pow(base, e).unwrap(), slow.floor_pow(base, e).unwrap());
            }
        }
        // 10^(1/0.9) = 12.915...
        assert_eq!(slow.floor_root(10, 0.9).unwrap(), 12);
        assert_eq!(fast.floor_pow(1_000_000, 0.5).unwrap(), 1000);
        assert_eq!(fast.ceil_pow(1_000_000, 0.5).unwrap(), 1000);
    }

    #[test]
    fn exhaustion_is_reported_not_guessed() {
        let tiny = Certifier { guard: None, start_bits: 16, max_bits: 16 };
        // 2^(1/2) is about 1.414; with a 16-bit cap comparing against 1 is still decidable
        assert_eq!(tiny.cmp_pow(2, 0.5, 1).unwrap(), Ordering::Greater);
        // 2^e with e = log2(3) rounded to a double lies within ~1e-16 of 3
        let near = Certifier { guard: None, start_bits: 16, max_bits: 16 };
        let e = 3f64.log2();
        assert!(matches!(near.cmp_pow(2, e, 3), Err(Error::PrecisionExhausted { .. })));
        assert!(Certifier::interval_only().cmp_pow(2, e, 3).is_ok());
    }
}
