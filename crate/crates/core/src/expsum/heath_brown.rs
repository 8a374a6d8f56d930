//! The Heath–Brown identity with three Möbius factors cut at `X^(1/3)`:
//!
//! ```text
//! Λ(n) = Σ_{j=1..3} C(3, j) (-1)^(j-1) Σ_{m1...m_{2j} = n, m1..mj <= X^(1/3)} μ(m1)...μ(mj) log m_{2j}
//! ```
//!
//! valid for `X < n <= 2X`. The right-hand side is accumulated symbolically
//! as an integer combination of `log p`, so the check against Λ(n) is exact.
//!
//! The tuple sum factors through the divisor lattice of `n`:
//! `A_j(d) = Σ_{m1..mj = d, mi <= z} μ(m1)..μ(mj)` and
//! `L_j(e) = Σ_{m_{j+1}..m_{2j} = e} log m_{2j} = Σ_{m | e} τ_{j-1}(e/m) log m`,
//! both memoized over divisor indices.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{divisors, factorize, icbrt, von_mangoldt_base, FactorSignature};
use crate::error::{domain, Result};

/// `Σ c_p log p` with integer coefficients; zero terms are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogCombination(BTreeMap<u64, i64>);

impl LogCombination {
    pub fn zero() -> Self {
        LogCombination::default()
    }

    /// Λ(n) as a combination: `log p` when `n = p^k`, else zero.
    pub fn von_mangoldt(n: u64) -> Result<Self> {
        let mut c = LogCombination::zero();
        if let Some(p) = von_mangoldt_base(&factorize(n)?) {
            c.add_log_prime(p, 1);
        }
        Ok(c)
    }

    pub fn add_log_prime(&mut self, p: u64, coef: i64) {
        if coef == 0 {
            return;
        }
        let e = self.0.entry(p).or_insert(0);
        *e += coef;
        if *e == 0 {
            self.0.remove(&p);
        }
    }

    /// Add `coef * log m`.
    pub fn add_log(&mut self, sig: &FactorSignature, coef: i64) {
        for &(p, e) in &sig.factors {
            self.add_log_prime(p, coef * e as i64);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.0.iter().map(|(&p, &c)| (p, c))
    }

    pub fn value(&self) -> f64 {
        self.terms().map(|(p, c)| c as f64 * (p as f64).ln()).sum()
    }
}

impl fmt::Display for LogCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms().enumerate() {
            let sign = match (i, c < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}log {p}")?;
            } else {
                write!(f, "{sign}{mag}*log {p}")?;
            }
        }
        Ok(())
    }
}

struct Lattice {
    divs: Vec<u64>,
    sigs: Vec<FactorSignature>,
    /// `sub[i]` lists indices of the divisors of `divs[i]`.
    sub: Vec<Vec<usize>>,
}

impl Lattice {
    fn new(n: u64) -> Result<Self> {
        let divs = divisors(&factorize(n)?);
        let sigs = divs.iter().map(|&d| factorize(d)).collect::<Result<Vec<_>>>()?;
        let sub = divs
            .iter()
            .map(|&d| (0..divs.len()).filter(|&k| d % divs[k] == 0).collect())
            .collect();
        Ok(Lattice { divs, sigs, sub })
    }

    fn index(&self, d: u64) -> usize {
        self.divs.binary_search(&d).expect("divisor of n")
    }
}

fn binom3(j: usize) -> i64 {
    [1, 3, 3, 1][j]
}

/// The three `j`-terms of the identity, before summation.
pub fn heath_brown_lambda_by_j(n: u64, x: u64) -> Result<[LogCombination; 3]> {
    if x == 0 || n <= x || n > 2 * x {
        return domain(format!("heath_brown_lambda: n = {n} not in (X, 2X] with X = {x}"));
    }
    let z = icbrt(x);
    let lat = Lattice::new(n)?;
    let len = lat.divs.len();

    // a[j][i] = A_j(divs[i]); tau[k][i] = τ_k(divs[i])
    let mut a = vec![vec![0i64; len]; 4];
    let mut tau = vec![vec![0i64; len]; 3];
    a[0][0] = 1;
    tau[0][0] = 1;
    for j in 1..=3 {
        for i in 0..len {
            let mut s = 0;
            for &m in &lat.sub[i] {
                let mu = lat.sigs[m].mobius as i64;
                if lat.divs[m] <= z && mu != 0 {
                    s += mu * a[j - 1][lat.index(lat.divs[i] / lat.divs[m])];
                }
            }
            a[j][i] = s;
        }
    }
    for k in 1..3 {
        for i in 0..len {
            tau[k][i] = lat.sub[i].iter().map(|&m| tau[k - 1][lat.index(lat.divs[i] / lat.divs[m])]).sum();
        }
    }

    let mut out: [LogCombination; 3] = Default::default();
    for j in 1..=3usize {
        let sign = if j % 2 == 1 { 1 } else { -1 };
        let acc = &mut out[j - 1];
        for &pi in &lat.sub[len - 1] {
            let weight_a = a[j][pi];
            if weight_a == 0 {
                continue;
            }
            let rest = n / lat.divs[pi];
            let ri = lat.index(rest);
            for &mi in &lat.sub[ri] {
                let t = tau[j - 1][lat.index(rest / lat.divs[mi])];
                if t != 0 {
                    acc.add_log(&lat.sigs[mi], sign * binom3(j) * weight_a * t);
                }
            }
        }
    }
    Ok(out)
}

/// Right-hand side of the identity as an exact log-combination.
pub fn heath_brown_lambda(n: u64, x: u64) -> Result<LogCombination> {
    let parts = heath_brown_lambda_by_j(n, x)?;
    let mut total = LogCombination::zero();
    for part in &parts {
        for (p, c) in part.terms() {
            total.add_log_prime(p, c);
        }
    }
    Ok(total)
}
