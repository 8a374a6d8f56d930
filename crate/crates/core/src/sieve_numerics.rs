//! Weighted-sieve numerics: the linear-sieve functions `F` and `f`,
//! Richert's logarithmic weights, the two integrals of the lower bound,
//! and the bracket `Φ(γ)` whose sign decides the γ threshold.
//!
//! ```text
//! Φ(γ) = log(32ξ/3 - 1)/ξ - λ R(u, ξ) - (λ/ξ) T
//! R(u, ξ) = ∫_u^{32/3} (β - u) / (β(ξβ - 1)) dβ
//! T = ∫_{3/32}^{1/4} dt1/t1 ∫_{t1}^{(1-t1)/3} dt2/t2 ∫_{t2}^{(1-t1-t2)/2} dt3 / (t3 (1-t1-t2-t3))
//! ```

use std::cell::Cell;
use std::sync::OnceLock;

use crate::arith::FactorSignature;
use crate::error::{domain, Error, Result};
use crate::quad::{integrate, QuadratureResult};

/// Euler–Mascheroni constant, 0.577215664901532860606512090082...
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Upper end of the Richert weight range, `(3/32)^-1`.
pub const BETA_MAX: f64 = 32.0 / 3.0;

pub const Z_EXP: f64 = 3.0 / 32.0;

/// Relative slack on the weight-window edges.
pub const WINDOW_SLACK: f64 = 1e-12;

/// Neighbourhood of `β = 1/ξ` where the Richert integrand is replaced by its limit.
pub const SINGULARITY_RADIUS: f64 = 1e-8;

/// `γ` must exceed this for `2 < 32ξ/3 < 4`.
pub const GAMMA_MIN: f64 = 171.0 / 172.0;

/// `F(s) = 2e^C0 / s` for `0 < s <= 3`.
pub fn upper_f(s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 3.0) {
        return domain(format!("F(s) needs 0 < s <= 3, got {s}"));
    }
    Ok(2.0 * EULER_GAMMA.exp() / s)
}

/// `f(s) = 2e^C0 log(s - 1) / s` for `2 <= s <= 4`.
pub fn lower_f(s: f64) -> Result<f64> {
    if !(2.0..=4.0).contains(&s) {
        return domain(format!("f(s) needs 2 <= s <= 4, got {s}"));
    }
    Ok(2.0 * EULER_GAMMA.exp() * (s - 1.0).ln() / s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SieveWeights {
    pub u: f64,
    pub lambda: f64,
    pub z_exp: f64,
}

impl SieveWeights {
    /// `u = 1/ξ + ε`, `λ = 1/(5 - u - ε)`.
    pub fn new(xi: f64, eps: f64) -> Result<Self> {
        if !(xi > 0.0) {
            return domain(format!("sieve weights need ξ > 0, got {xi}"));
        }
        let u = 1.0 / xi + eps;
        Self::from_u(u, eps)
    }

    pub fn from_u(u: f64, eps: f64) -> Result<Self> {
        if !(u < 5.0 - eps) {
            return domain(format!("u = {u} must be below 5 - ε (ξ <= 1/5 makes λ non-positive)"));
        }
        if !(u < BETA_MAX) {
            return domain(format!("u = {u} leaves an empty weight range"));
        }
        Ok(SieveWeights { u, lambda: 1.0 / (5.0 - u - eps), z_exp: Z_EXP })
    }
}

/// `1 - u log p / log x` for `x^(3/32) <= p <= x^(1/u)`.
pub fn richert_weight_term(p: u64, x: f64, w: &SieveWeights) -> Result<f64> {
    if !(x > 1.0) {
        return domain(format!("weight term needs x > 1, got {x}"));
    }
    let (lp, lx) = ((p as f64).ln(), x.ln());
    let lo = w.z_exp * lx;
    let hi = lx / w.u;
    if lp < lo - WINDOW_SLACK * lo.abs() || lp > hi + WINDOW_SLACK * hi.abs() {
        return domain(format!("p = {p} outside the weight window [x^{}, x^(1/{})]", w.z_exp, w.u));
    }
    Ok(1.0 - w.u * lp / lx)
}

/// `𝒲_a = 1 - λ Σ (1 - u log p / log x)` over prime divisors of `a` in the window.
pub fn richert_weight(a: &FactorSignature, x: f64, w: &SieveWeights) -> f64 {
    let s: f64 = a.factors.iter().filter_map(|&(p, _)| richert_weight_term(p, x, w).ok()).sum();
    1.0 - w.lambda * s
}

fn richert_integrand(beta: f64, u: f64, xi: f64, at_limit: bool) -> f64 {
    let s = xi * beta - 1.0;
    if at_limit {
        if s.abs() < SINGULARITY_RADIUS {
            return 1.0;
        }
        // (β - 1/ξ)/(β(ξβ - 1)) = 1/(ξβ)
        return 1.0 / (xi * beta);
    }
    (beta - u) / (beta * s)
}

/// `∫_u^{32/3} (β - u)/(β(ξβ - 1)) dβ`.
pub fn richert_integral(u: f64, xi: f64, tol: f64) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return domain("richert_integral: tol must be positive");
    }
    if !(xi > 0.0) || !u.is_finite() {
        return domain(format!("richert_integral: bad arguments u = {u}, ξ = {xi}"));
    }
    if u >= BETA_MAX {
        return Ok(QuadratureResult::exact(0.0));
    }
    let d = u * xi - 1.0;
    if d < -1e-12 {
        return domain(format!("richert_integral: ξβ - 1 <= 0 at β = u = {u} (ξ = {xi})"));
    }
    let at_limit = d.abs() <= 1e-14;
    Ok(integrate(|b| richert_integrand(b, u, xi, at_limit), u, BETA_MAX, tol))
}

/// The nested triple integral `T`.
pub fn triple_integral(tol: f64) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return domain("triple_integral: tol must be positive");
    }
    // error propagation: outer weight 1/t1 <= 32/3 on a range of 5/32,
    // middle weight 1/t2 <= 32/3 on a range below 1/4
    let (tol1, tol2, tol3) = (tol / 4.0, tol / 16.0, tol / 96.0);
    let worst_inner = Cell::new(0.0f64);
    let worst_middle = Cell::new(0.0f64);
    let evals = Cell::new(0u64);
    let middle = |t1: f64| {
        let hi2 = (1.0 - t1) / 3.0;
        let r = integrate(
            |t2| {
                let s = 1.0 - t1 - t2;
                let r3 = integrate(|t3| 1.0 / (t3 * (s - t3)), t2, s / 2.0, tol3);
                worst_inner.set(worst_inner.get().max(r3.abs_error_estimate));
                evals.set(evals.get() + r3.evaluations);
                r3.value / t2
            },
            t1,
            hi2,
            tol2,
        );
        worst_middle.set(worst_middle.get().max(r.abs_error_estimate));
        r.value / t1
    };
    let outer = integrate(middle, Z_EXP, 0.25, tol1);
    let w = BETA_MAX * BETA_MAX * 0.25 * (0.25 - Z_EXP);
    let abs_error_estimate = outer.abs_error_estimate
        + BETA_MAX * (0.25 - Z_EXP) * worst_middle.get()
        + w * worst_inner.get();
    Ok(QuadratureResult {
        value: outer.value,
        abs_error_estimate,
        evaluations: outer.evaluations + evals.get(),
        converged: abs_error_estimate <= tol,
    })
}

/// `T` at tolerance 1e-12, computed once.
pub fn triple_integral_cached() -> &'static QuadratureResult {
    static T: OnceLock<QuadratureResult> = OnceLock::new();
    T.get_or_init(|| triple_integral(1e-12).expect("positive tolerance"))
}

/// The pieces of `Φ(γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketParts {
    pub gamma: f64,
    pub epsilon: f64,
    pub xi: f64,
    pub u: f64,
    pub lambda: f64,
    pub main: f64,
    pub richert: QuadratureResult,
    pub triple: QuadratureResult,
    pub phi: f64,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > GAMMA_MIN && gamma < 1.0) {
        return domain(format!("Φ(γ) needs 171/172 < γ < 1, got {gamma}"));
    }
    Ok(())
}

/// `Φ` at level `ξ = 129γ/4 - 255/8 - ε`, `u = 1/ξ + ε`, `λ = 1/(5 - u - ε)`.
/// `ε = 0` gives the limiting bracket.
pub fn bracket_parts(gamma: f64, epsilon: f64, tol: f64, triple: Option<&QuadratureResult>) -> Result<BracketParts> {
    check_gamma(gamma)?;
    if !(epsilon >= 0.0) {
        return domain(format!("ε must be non-negative, got {epsilon}"));
    }
    let xi = 129.0 / 4.0 * gamma - 255.0 / 8.0 - epsilon;
    if !(xi > 0.2) {
        return domain(format!("ξ = {xi} <= 1/5 at γ = {gamma}, so λ is not positive"));
    }
    let w = SieveWeights::new(xi, epsilon)?;
    let arg = 32.0 * xi / 3.0 - 1.0;
    if !(arg > 0.0) {
        return domain(format!("32ξ/3 - 1 <= 0 at γ = {gamma}"));
    }
    let main = arg.ln() / xi;
    let richert = richert_integral(w.u, xi, tol / 2.0)?;
    let triple = match triple {
        Some(t) => *t,
        None => triple_integral(tol / 2.0)?,
    };
    let phi = main - w.lambda * richert.value - w.lambda / xi * triple.value;
    Ok(BracketParts { gamma, epsilon, xi, u: w.u, lambda: w.lambda, main, richert, triple, phi })
}

/// [`bracket_parts`] reusing the cached `T` whenever it is accurate enough.
pub fn bracket(gamma: f64, epsilon: f64, tol: f64) -> Result<BracketParts> {
    if !(tol > 0.0) {
        return domain("bracket_functional: tol must be positive");
    }
    let t = triple_integral_cached();
    // the triple term enters with weight λ/ξ < 25
    let cached = (t.converged && t.abs_error_estimate * 25.0 <= tol / 2.0).then_some(t);
    bracket_parts(gamma, epsilon, tol, cached)
}

/// `Φ(γ)` in the ε → 0 convention.
pub fn bracket_functional(gamma: f64, tol: f64) -> Result<f64> {
    Ok(bracket(gamma, 0.0, tol)?.phi)
}

/// `Φ` with ε carried through `ξ`, `u` and `λ`.
pub fn bracket_functional_eps(gamma: f64, epsilon: f64, tol: f64) -> Result<f64> {
    Ok(bracket(gamma, epsilon, tol)?.phi)
}

pub const SCAN_POINTS: usize = 200;

/// Root of `Φ(γ) = 0`: coarse scan over `(171/172, 1)` then bisection to `tol`.
pub fn gamma_threshold(tol: f64) -> Result<f64> {
    if !(tol >= 1e-12) {
        return domain(format!("gamma_threshold: tol must be at least 1e-12, got {tol}"));
    }
    let qtol = (tol * 1e-2).min(1e-10);
    let phi = |g: f64| bracket_functional(g, qtol);
    let step = (1.0 - GAMMA_MIN) / (SCAN_POINTS + 1) as f64;
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for i in 1..=SCAN_POINTS {
        let g = GAMMA_MIN + step * i as f64;
        let v = match phi(g) {
            Ok(v) => v,
            Err(Error::Domain(_)) => {
                prev = None;
                continue;
            }
            Err(e) => return Err(e),
        };
        if let Some((pg, pv)) = prev {
            if pv < 0.0 && v >= 0.0 {
                bracket = Some((pg, g));
                break;
            }
        }
        prev = Some((g, v));
    }
    let (mut lo, mut hi) =
        bracket.ok_or_else(|| Error::Search("no sign change of Φ found on (171/172, 1)".into()))?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if phi(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_sieve_functions() {
        assert_eq!(lower_f(2.0).unwrap(), 0.0);
        assert!((upper_f(2.0).unwrap() - 1.781_072_417_990_198).abs() < 1e-14);
        assert!((upper_f(3.0).unwrap() - 2.0 * EULER_GAMMA.exp() / 3.0).abs() < 1e-15);
        assert!(upper_f(0.0).is_err() && upper_f(3.5).is_err());
        assert!(lower_f(1.9).is_err() && lower_f(4.1).is_err());
    }

    #[test]
    fn weight_window_edges() {
        let x = 1e12f64;
        let w = SieveWeights::from_u(4.0, 0.0).unwrap();
        // x^(1/4) = 1000
        assert!(richert_weight_term(1000, x, &w).unwrap().abs() < 1e-12);
        assert!(richert_weight_term(1001, x, &w).is_err());
        let w = SieveWeights::from_u(4.5, 0.0).unwrap();
        let hi = x.powf(1.0 / 4.5);
        assert!(richert_weight_term(hi as u64 + 1, x, &w).is_err());
        let w = SieveWeights { u: BETA_MAX, lambda: 1.0, z_exp: Z_EXP };
        let x = 2f64.powi(64);
        // x^(3/32) = 64
        assert!(richert_weight_term(64, x, &w).unwrap().abs() < 1e-12);
        assert!(richert_weight_term(63, x, &w).is_err());
    }

    fn closed_form(u: f64, xi: f64) -> f64 {
        let anti = |b: f64| u * b.ln() + (1.0 - u * xi) / xi * (xi * b - 1.0).ln();
        if (u * xi - 1.0).abs() < 1e-15 {
            u * (BETA_MAX / u).ln()
        } else {
            anti(BETA_MAX) - anti(u)
        }
    }

    #[test]
    fn richert_matches_partial_fractions() {
        let r = richert_integral(2.0, 1.0, 1e-10).unwrap();
        assert!((r.value - closed_form(2.0, 1.0)).abs() < 1e-10);
        assert!(r.abs_error_estimate <= 1e-10);
        let xi = 0.34;
        let r = richert_integral(1.0 / xi, xi, 1e-10).unwrap();
        assert!((r.value - closed_form(1.0 / xi, xi)).abs() < 1e-10);
        assert_eq!(richert_integral(BETA_MAX, 0.3, 1e-9).unwrap().value, 0.0);
        assert!(richert_integral(2.0, 0.3, 1e-9).is_err());
    }

    #[test]
    fn removable_singularity_limit() {
        let xi = 0.375;
        assert_eq!(richert_integrand(1.0 / xi + 1e-10, 1.0 / xi, xi, true), 1.0);
        let near = richert_integrand(1.0 / xi + 1e-6, 1.0 / xi, xi, true);
        assert!((near - 1.0).abs() < 1e-5);
    }

    #[test]
    fn triple_value() {
        let t = triple_integral(1e-10).unwrap();
        assert!(t.converged);
        assert!((t.value - 0.713_103_753_262_986).abs() < 1e-10, "{}", t.value);
        let coarse = triple_integral(1e-8).unwrap();
        assert!((coarse.value - t.value).abs() < 1e-8);
    }

    #[test]
    fn bracket_values() {
        let v = bracket_functional(0.9989445, 1e-9).unwrap();
        assert!((v - 6.043_113_76e-5).abs() < 1e-9, "{v}");
        assert!(bracket_functional(0.995, 1e-9).unwrap() < 0.0);
        assert!(bracket_functional(0.99, 1e-9).is_err());
        assert!(bracket_functional(1.0, 1e-9).is_err());
        let e = bracket_functional_eps(0.9989445, 1e-9, 1e-9).unwrap();
        assert!((e - v).abs() < 1e-5);
    }

    #[test]
    fn threshold_root() {
        let g = gamma_threshold(1e-9).unwrap();
        assert!((g - 0.998_944_404_085).abs() < 1e-8, "{g}");
    }
}
