//! Desk-scale measurements: the Bombieri–Vinogradov style discrepancy of PS
//! primes in progressions, its `μ² 3^ω` weighted variant, and the main term
//! of the four-prime set `ℬ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, factorize, sieve_primes, FactorSignature};
use crate::error::{domain, Result};
use crate::ps::{ps_primes, PsGamma};
use crate::sieve_numerics::triple_integral_cached;

pub const BV_X_MAX: u64 = 1_000_000_000;
pub const BSET_X_MAX: u64 = 100_000_000;
pub const DEFAULT_LOG_POWER: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRow {
    pub d: u64,
    pub phi_d: u64,
    pub count_in_class: u64,
    pub expected: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub x: u64,
    pub gamma: f64,
    pub xi: f64,
    pub a: i64,
    /// Power of `log x` in the reference scale.
    pub log_power: f64,
    /// `D = [x^ξ]`, certified.
    pub d_max: u64,
    pub pi_gamma: u64,
    /// Rows for `d <= D` with `(d, a) = 1`, ascending.
    pub rows: Vec<DiscrepancyRow>,
    pub total: f64,
    /// `x^γ / (log x)^A`.
    pub reference_scale: f64,
}

impl DiscrepancyReport {
    pub fn normalized_total(&self) -> f64 {
        self.total / self.reference_scale
    }

    pub fn reference_scale_for(x: u64, gamma: f64, log_power: f64) -> f64 {
        let xf = x as f64;
        xf.powf(gamma) / xf.ln().powf(log_power)
    }

    /// Sum of `abs_error` in ascending `d`.
    pub fn sum_rows(rows: &[DiscrepancyRow]) -> f64 {
        rows.iter().map(|r| r.abs_error).sum()
    }
}

/// PS primes up to `x` bucketed by the moduli `d <= D` dividing `p - a`.
#[derive(Debug, Clone)]
pub struct ClassCounts {
    pub d_max: u64,
    pub pi_gamma: u64,
    /// `counts[d]` = #{p : p ≡ a (mod d)}; index 0 unused.
    pub counts: Vec<u64>,
}

fn check_bv_args(x: u64, xi: f64, a: i64) -> Result<()> {
    if !(2..=BV_X_MAX).contains(&x) {
        return domain(format!("x = {x} outside [2, {BV_X_MAX}]"));
    }
    if !(xi > 0.0 && xi < 0.5) {
        return domain(format!("ξ = {xi} outside (0, 1/2)"));
    }
    if a == 0 {
        return domain("a must be nonzero");
    }
    if a.unsigned_abs() > 1 << 32 {
        return domain(format!("|a| = {} too large", a.unsigned_abs()));
    }
    Ok(())
}

fn push_divisors_upto(sig: &FactorSignature, limit: u64, out: &mut Vec<u64>) {
    out.clear();
    out.push(1);
    for &(p, e) in &sig.factors {
        let len = out.len();
        for i in 0..len {
            let mut v = out[i];
            for _ in 0..e {
                v = match v.checked_mul(p) {
                    Some(w) if w <= limit => w,
                    _ => break,
                };
                out.push(v);
            }
        }
    }
}

pub fn class_counts(x: u64, g: &PsGamma, xi: f64, a: i64) -> Result<ClassCounts> {
    check_bv_args(x, xi, a)?;
    let d_max = g.certifier().floor_pow(x, xi)?;
    if d_max < 1 {
        return domain(format!("D = [x^ξ] = {d_max} < 1"));
    }
    let primes: Vec<u64> = ps_primes(x, g)?.into_iter().map(|(p, _)| p).collect();
    let len = d_max as usize + 1;
    let counts = primes
        .par_chunks(4096)
        .map(|chunk| -> Result<Vec<u64>> {
            let mut local = vec![0u64; len];
            let mut divs = Vec::new();
            for &p in chunk {
                let diff = (p as i64 - a).unsigned_abs();
                if diff == 0 {
                    local[1..].iter_mut().for_each(|c| *c += 1);
                    continue;
                }
                push_divisors_upto(&factorize(diff)?, d_max, &mut divs);
                for &d in &divs {
                    local[d as usize] += 1;
                }
            }
            Ok(local)
        })
        .try_reduce(
            || vec![0u64; len],
            |mut acc, v| {
                acc.iter_mut().zip(v).for_each(|(s, c)| *s += c);
                Ok(acc)
            },
        )?;
    Ok(ClassCounts { d_max, pi_gamma: primes.len() as u64, counts })
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn bv_discrepancy(x: u64, g: &PsGamma, xi: f64, a: i64, log_power: f64) -> Result<DiscrepancyReport> {
    let cc = class_counts(x, g, xi, a)?;
    let pi = cc.pi_gamma as f64;
    let rows: Vec<DiscrepancyRow> = (1..=cc.d_max)
        .filter(|&d| gcd(d, a.unsigned_abs()) == 1)
        .map(|d| -> Result<DiscrepancyRow> {
            let phi_d = euler_phi(&factorize(d)?);
            let count = cc.counts[d as usize];
            let expected = pi / phi_d as f64;
            Ok(DiscrepancyRow { d, phi_d, count_in_class: count, expected, abs_error: (count as f64 - expected).abs() })
        })
        .collect::<Result<_>>()?;
    Ok(DiscrepancyReport {
        x,
        gamma: g.gamma,
        xi,
        a,
        log_power,
        d_max: cc.d_max,
        pi_gamma: cc.pi_gamma,
        total: DiscrepancyReport::sum_rows(&rows),
        rows,
        reference_scale: DiscrepancyReport::reference_scale_for(x, g.gamma, log_power),
    })
}

/// `Σ_{d <= D, d odd} μ²(d) 3^ω(d) |R(x, d)|` with
/// `R(x, d) = #{p ≡ a (d)} - π_γ(x)/φ(d)`.
pub fn weighted_remainder(x: u64, g: &PsGamma, xi: f64, a: i64) -> Result<f64> {
    let cc = class_counts(x, g, xi, a)?;
    let pi = cc.pi_gamma as f64;
    let mut total = 0.0;
    for d in (1..=cc.d_max).step_by(2) {
        let sig = factorize(d)?;
        if sig.mobius == 0 {
            continue;
        }
        let r = cc.counts[d as usize] as f64 - pi / euler_phi(&sig) as f64;
        total += 3f64.powi(sig.little_omega as i32) * r.abs();
    }
    Ok(total)
}

/// `n = p1 p2 p3 p4 <= x` with `x^(3/32) <= p1 < p2 < p3 < p4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BSetRecord {
    pub n: u64,
    pub primes: [u64; 4],
    /// `γ n^(γ-1)`.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BSetSummary {
    pub x: u64,
    pub gamma: f64,
    /// `ceil(x^(3/32))`.
    pub p_min: u64,
    pub count: u64,
    pub enumerated_sum: f64,
    pub integral_prediction: f64,
    pub ratio: f64,
}

fn bset_primes(x: u64, gamma: f64) -> Result<(u64, Vec<u64>)> {
    if !(2..=BSET_X_MAX).contains(&x) {
        return domain(format!("b-set enumeration needs 2 <= x <= {BSET_X_MAX}, got {x}"));
    }
    if !(gamma > 0.5 && gamma < 1.0) {
        return domain(format!("gamma = {gamma} must lie in (1/2, 1)"));
    }
    let g = PsGamma::new(gamma)?;
    let p_min = g.certifier().ceil_pow(x, 3.0 / 32.0)?;
    let cube = p_min.saturating_mul(p_min).saturating_mul(p_min);
    let primes = sieve_primes(x / cube.max(1)).into_iter().filter(|&p| p >= p_min).collect();
    Ok((p_min, primes))
}

/// The loop structure shared by the sum and the record listing: calls
/// `visit(p1, p2, p3, j_lo, j_hi)` for the prime index range `[j_lo, j_hi)`
/// of admissible `p4`.
fn for_each_triple<F: FnMut(u64, u64, u64, usize, usize)>(x: u64, primes: &[u64], i1: usize, mut visit: F) {
    let p1 = primes[i1];
    for i2 in i1 + 1..primes.len() {
        let p2 = primes[i2];
        // p1 p2^3 < x
        match p2.checked_pow(3).and_then(|c| p1.checked_mul(c)) {
            Some(v) if v < x => {}
            _ => break,
        }
        for i3 in i2 + 1..primes.len() {
            let p3 = primes[i3];
            let m = p1 * p2 * p3;
            if m.checked_mul(p3).is_none_or(|v| v >= x) {
                break;
            }
            let hi = x / m;
            let j_hi = primes.partition_point(|&p| p <= hi);
            if j_hi > i3 + 1 {
                visit(p1, p2, p3, i3 + 1, j_hi);
            }
        }
    }
}

fn p1_count(x: u64, primes: &[u64]) -> usize {
    // p1^4 < x
    primes.partition_point(|&p| p.checked_pow(4).is_some_and(|v| v < x))
}

pub fn b_set_main_term(x: u64, gamma: f64) -> Result<BSetSummary> {
    let (p_min, primes) = bset_primes(x, gamma)?;
    let e = gamma - 1.0;
    // prefix[j] = Σ_{i<j} p_i^(γ-1)
    let mut prefix = Vec::with_capacity(primes.len() + 1);
    prefix.push(0.0f64);
    for &p in &primes {
        prefix.push(prefix[prefix.len() - 1] + (p as f64).powf(e));
    }
    let per_p1: Vec<(u64, f64)> = (0..p1_count(x, &primes))
        .into_par_iter()
        .map(|i1| {
            let (mut count, mut sum) = (0u64, 0.0f64);
            for_each_triple(x, &primes, i1, |p1, p2, p3, lo, hi| {
                count += (hi - lo) as u64;
                sum += ((p1 * p2 * p3) as f64).powf(e) * (prefix[hi] - prefix[lo]);
            });
            (count, sum)
        })
        .collect();
    let count = per_p1.iter().map(|c| c.0).sum();
    let enumerated_sum = gamma * per_p1.iter().map(|c| c.1).sum::<f64>();
    let xf = x as f64;
    let integral_prediction = xf.powf(gamma) / xf.ln() * triple_integral_cached().value;
    Ok(BSetSummary {
        x,
        gamma,
        p_min,
        count,
        enumerated_sum,
        integral_prediction,
        ratio: enumerated_sum / integral_prediction,
    })
}

/// Every element of `ℬ` up to `x`, ascending in `(p1, p2, p3, p4)`.
pub fn b_set_records(x: u64, gamma: f64) -> Result<Vec<BSetRecord>> {
    let (_, primes) = bset_primes(x, gamma)?;
    let mut out = Vec::new();
    for i1 in 0..p1_count(x, &primes) {
        for_each_triple(x, &primes, i1, |p1, p2, p3, lo, hi| {
            for &p4 in &primes[lo..hi] {
                let n = p1 * p2 * p3 * p4;
                out.push(BSetRecord { n, primes: [p1, p2, p3, p4], weight: gamma * (n as f64).powf(gamma - 1.0) });
            }
        });
    }
    Ok(out)
}
