//! Level-of-distribution functions and the admissibility bookkeeping that
//! makes the level with slope 129/4 feasible.
//!
//! Everything here is a linear form in γ, ξ, ε and η, so it is computed in
//! exact rationals. Floats passed in are converted exactly.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rational::{q, qi, to_f64, Q};

/// A level value plus whether γ lies in the range where it was proved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelValue {
    pub value: Q,
    pub in_domain: bool,
}

/// `ξ(γ) = 129/4 γ - 255/8 - ε`, proved for `85/86 < γ < 1`.
/// Outside that range the value is still returned, flagged.
pub fn level_theorem1(gamma: &Q, eps: &Q) -> LevelValue {
    let value = q(129, 4) * gamma - q(255, 8) - eps;
    LevelValue { value, in_domain: q(85, 86) < *gamma && *gamma < qi(1) }
}

/// `(13γ - 12)/4 - ε` on `12/13 < γ <= 1` (γ = 1 as the limit).
pub fn level_lu(gamma: &Q, eps: &Q) -> Result<Q> {
    if !(q(12, 13) < *gamma && *gamma <= qi(1)) {
        return domain(format!("level_lu: gamma = {gamma} outside (12/13, 1]"));
    }
    Ok((qi(13) * gamma - qi(12)) / qi(4) - eps)
}

/// Two-branch level: `755/424 γ - 331/212 - ε` on `(662/755, 608/675]`,
/// `5/4 γ - 13/12 - ε` on `(608/675, 1]`.
pub fn level_peneva(gamma: &Q, eps: &Q) -> Result<Q> {
    let lo = q(662, 755);
    let mid = q(608, 675);
    if *gamma <= lo || *gamma > qi(1) {
        return domain(format!("level_peneva: gamma = {gamma} outside (662/755, 1]"));
    }
    Ok(if *gamma <= mid {
        q(755, 424) * gamma - q(331, 212) - eps
    } else {
        q(5, 4) * gamma - q(13, 12) - eps
    })
}

/// The (γ, ε, η, ξ) bundle that every constraint reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelParams {
    pub gamma: Q,
    pub epsilon: Q,
    pub eta: Q,
    pub xi: Q,
}

impl LevelParams {
    /// ξ taken from [`level_theorem1`].
    pub fn theorem1(gamma: Q, epsilon: Q, eta: Q) -> Self {
        let xi = level_theorem1(&gamma, &epsilon).value;
        LevelParams { gamma, epsilon, eta, xi }
    }

    pub fn with_xi(gamma: Q, epsilon: Q, eta: Q, xi: Q) -> Self {
        LevelParams { gamma, epsilon, eta, xi }
    }

    /// Default ε = 10^-6 and η = ε/2.
    pub fn theorem1_default(gamma: Q) -> Self {
        let eps = q(1, 1_000_000);
        let eta = &eps / qi(2);
        LevelParams::theorem1(gamma, eps, eta)
    }

    /// Violated standing assumptions, empty when all hold.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(q(1, 2) < self.gamma && self.gamma < qi(1)) {
            v.push(format!("gamma = {} not in (1/2, 1)", self.gamma));
        }
        if self.epsilon <= qi(0) || self.eta <= qi(0) {
            v.push("epsilon and eta must be positive".into());
        }
        if self.epsilon <= q(3, 2) * &self.eta {
            v.push(format!("epsilon = {} must exceed 3 eta / 2 = {}", self.epsilon, q(3, 2) * &self.eta));
        }
        v
    }
}

/// The Type II admissible range `X^b_exp << M << X^c_exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Type2Window {
    pub b_exp: Q,
    pub c_exp: Q,
    /// `γ > max(29/32 + ξ/8 + η, 1/4 + ξ + η)`.
    pub condition_ok: bool,
}

pub fn type2_window(lp: &LevelParams) -> Type2Window {
    let b_exp = (qi(29) * (qi(1) - &lp.gamma) + qi(4) * &lp.xi) / qi(3) + &lp.eta;
    let c_exp = &lp.gamma - &lp.eta;
    let first = q(29, 32) + &lp.xi / qi(8) + &lp.eta;
    let second = q(1, 4) + &lp.xi + &lp.eta;
    let condition_ok = lp.gamma > first && lp.gamma > second;
    Type2Window { b_exp, c_exp, condition_ok }
}

/// Largest Type I exponent: `127/4 γ - 247/8 - ξ - η`.
pub fn type1_max_exponent(lp: &LevelParams) -> Q {
    q(127, 4) * &lp.gamma - q(247, 8) - &lp.xi - &lp.eta
}

/// The three strict inequalities for a bilinear decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfCheck {
    /// `b < 2/3`
    pub b_small: bool,
    /// `1 - c < c - b`
    pub gap: bool,
    /// `1 - a < c/2`
    pub a_large: bool,
}

impl BfCheck {
    pub fn all(&self) -> bool {
        self.b_small && self.gap && self.a_large
    }
}

pub fn bf_conditions(a: &Q, b: &Q, c: &Q) -> Result<BfCheck> {
    let (zero, one) = (qi(0), qi(1));
    if !(zero < *a && *a < one) {
        return domain(format!("bf_conditions: a = {a} not in (0, 1)"));
    }
    if !(zero < *b && b < c && *c < one) {
        return domain(format!("bf_conditions: need 0 < b < c < 1, got b = {b}, c = {c}"));
    }
    Ok(BfCheck {
        b_small: *b < q(2, 3),
        gap: &one - c < c - b,
        a_large: &one - a < c / qi(2),
    })
}

/// The concrete (a, b, c) used to close the argument.
pub fn decomposition_exponents(lp: &LevelParams) -> (Q, Q, Q) {
    let w = type2_window(lp);
    (type1_max_exponent(lp), w.b_exp, w.c_exp)
}

/// One line of a [`FeasibilityReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub formula: String,
    pub lhs: String,
    pub rhs: String,
    pub lhs_value: f64,
    pub rhs_value: f64,
    pub pass: bool,
}

impl Constraint {
    fn new(name: &str, formula: &str, lhs: &Q, rhs: &Q, pass: bool) -> Self {
        Constraint {
            name: name.into(),
            formula: formula.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            lhs_value: to_f64(lhs),
            rhs_value: to_f64(rhs),
            pass,
        }
    }

    fn lt(name: &str, formula: &str, lhs: &Q, rhs: &Q) -> Self {
        Constraint::new(name, formula, lhs, rhs, lhs < rhs)
    }

    fn le(name: &str, formula: &str, lhs: &Q, rhs: &Q) -> Self {
        Constraint::new(name, formula, lhs, rhs, lhs <= rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub gamma: String,
    pub xi: String,
    pub items: Vec<Constraint>,
    pub overall: bool,
}

impl FeasibilityReport {
    pub fn item(&self, name: &str) -> Option<&Constraint> {
        self.items.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.items.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

pub fn feasibility(lp: &LevelParams) -> FeasibilityReport {
    let (gamma, xi, eta) = (&lp.gamma, &lp.xi, &lp.eta);
    let half = q(1, 2);
    let mut items = vec![
        Constraint::lt("i", "0 < xi", &qi(0), xi),
        Constraint::le("ii", "xi <= (1 - eta)/2", xi, &((qi(1) - eta) / qi(2))),
        Constraint::lt("iii", "1/2 + xi < gamma", &(&half + xi), gamma),
    ];
    let w = type2_window(lp);
    let rhs_iv = std::cmp::max(q(29, 32) + xi / qi(8) + eta, q(1, 4) + xi + eta);
    items.push(Constraint::new("iv", "max(29/32 + xi/8 + eta, 1/4 + xi + eta) < gamma", &rhs_iv, gamma, w.condition_ok));

    let (a, b, c) = decomposition_exponents(lp);
    match bf_conditions(&a, &b, &c) {
        Ok(chk) => {
            items.push(Constraint::new("v.1", "b < 2/3", &b, &q(2, 3), chk.b_small));
            items.push(Constraint::new("v.2", "1 - c < c - b", &(qi(1) - &c), &(&c - &b), chk.gap));
            items.push(Constraint::new("v.3", "1 - a < c/2", &(qi(1) - &a), &(&c / qi(2)), chk.a_large));
        }
        Err(_) => {
            items.push(Constraint::new("v.0", "0 < a < 1 and 0 < b < c < 1", &b, &c, false));
        }
    }
    items.push(Constraint::le("vi.1", "b_exp <= 1/2 + eta", &w.b_exp, &(&half + eta)));
    items.push(Constraint::le("vi.2", "85/86 - eta <= gamma - eta", &(q(85, 86) - eta), &w.c_exp));

    let overall = items.iter().all(|c| c.pass);
    FeasibilityReport { gamma: gamma.to_string(), xi: xi.to_string(), items, overall }
}

/// `H = X^(1 - γ + η)` and `T = [M^(-6/5) X^((γ + 14)/15) J D^(4/15)] + 1`.
pub fn parameter_schedule(m: f64, x: f64, gamma: f64, j: f64, d: f64, eta: f64) -> Result<(f64, u64)> {
    if [m, x, j, d].iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return domain("parameter_schedule: M, X, J, D must be positive");
    }
    let h = x.powf(1.0 - gamma + eta);
    let t = m.powf(-1.2) * x.powf((gamma + 14.0) / 15.0) * j * d.powf(4.0 / 15.0);
    Ok((h, t.floor() as u64 + 1))
}
