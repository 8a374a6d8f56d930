//! Van der Corput exponent pairs under the classical A and B processes:
//!
//! ```text
//! A(κ, ℓ) = (κ / (2κ + 2), (κ + ℓ + 1) / (2κ + 2))
//! B(κ, ℓ) = (ℓ - 1/2, κ + 1/2)
//! ```
//!
//! All arithmetic is exact.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{q, qi, Q};

pub const MAX_WORD_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentPair {
    pub kappa: Q,
    pub ell: Q,
}

impl ExponentPair {
    pub fn new(kappa: Q, ell: Q) -> Self {
        ExponentPair { kappa, ell }
    }

    pub fn from_ratios(kn: i64, kd: i64, ln: i64, ld: i64) -> Self {
        ExponentPair::new(q(kn, kd), q(ln, ld))
    }

    /// The trivial pair (1/2, 1/2).
    pub fn half() -> Self {
        ExponentPair::from_ratios(1, 2, 1, 2)
    }

    pub fn is_valid(&self) -> bool {
        validate_pair(self)
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kappa, self.ell)
    }
}

/// `0 <= κ <= 1/2 <= ℓ <= 1` and `κ + ℓ <= 3/2`.
pub fn validate_pair(p: &ExponentPair) -> bool {
    let half = q(1, 2);
    qi(0) <= p.kappa && p.kappa <= half && half <= p.ell && p.ell <= qi(1) && &p.kappa + &p.ell <= q(3, 2)
}

fn require_valid(p: &ExponentPair, what: &str) -> Result<()> {
    if validate_pair(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what}: ({}, {}) is not a valid exponent pair", p.kappa, p.ell)))
    }
}

pub fn a_process(p: &ExponentPair) -> Result<ExponentPair> {
    require_valid(p, "A-process")?;
    let den = &p.kappa * qi(2) + qi(2);
    let out = ExponentPair::new(&p.kappa / &den, (&p.kappa + &p.ell + qi(1)) / den);
    debug_assert!(validate_pair(&out));
    Ok(out)
}

pub fn b_process(p: &ExponentPair) -> Result<ExponentPair> {
    require_valid(p, "B-process")?;
    Ok(ExponentPair::new(&p.ell - q(1, 2), &p.kappa + q(1, 2)))
}

/// Apply a word over `{A, B}` left to right.
pub fn iterate(word: &str, start: &ExponentPair) -> Result<ExponentPair> {
    if word.chars().count() > MAX_WORD_LEN {
        return Err(Error::Domain(format!("word longer than {MAX_WORD_LEN} letters")));
    }
    let mut p = start.clone();
    for (i, c) in word.chars().enumerate() {
        let step = match c.to_ascii_uppercase() {
            'A' => a_process(&p),
            'B' => b_process(&p),
            other => return Err(Error::Domain(format!("step {}: unknown process {other:?}", i + 1))),
        };
        p = step.map_err(|e| Error::Domain(format!("step {} ({c}): {e}", i + 1)))?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn a_iterates() {
        let h = ExponentPair::half();
        assert_eq!(a_process(&h).unwrap(), ExponentPair::from_ratios(1, 6, 2, 3));
        assert_eq!(iterate("AA", &h).unwrap(), ExponentPair::from_ratios(1, 14, 11, 14));
        assert_eq!(iterate("AAAAAA", &h).unwrap(), ExponentPair::from_ratios(1, 254, 247, 254));
        assert_eq!(iterate("", &h).unwrap(), h);
        assert_eq!(iterate("AA", &h).unwrap().to_string(), "1/14 11/14");
    }

    #[test]
    fn kappa_denominators() {
        let mut p = ExponentPair::half();
        let mut dens = Vec::new();
        for _ in 0..6 {
            p = a_process(&p).unwrap();
            assert!(p.kappa.numer().is_one());
            dens.push(p.kappa.denom().to_string());
        }
        assert_eq!(dens, ["6", "14", "30", "62", "126", "254"]);
    }

    #[test]
    fn b_examples() {
        let h = ExponentPair::half();
        assert_eq!(b_process(&h).unwrap(), ExponentPair::from_ratios(0, 1, 1, 1));
        let p = ExponentPair::from_ratios(1, 6, 2, 3);
        assert_eq!(iterate("BB", &p).unwrap(), p);
        assert_eq!(
            b_process(&ExponentPair::from_ratios(1, 14, 11, 14)).unwrap(),
            ExponentPair::from_ratios(2, 7, 4, 7)
        );
    }

    #[test]
    fn validation() {
        assert!(validate_pair(&ExponentPair::half()));
        assert!(validate_pair(&ExponentPair::from_ratios(0, 1, 1, 1)));
        assert!(!validate_pair(&ExponentPair::from_ratios(3, 5, 1, 2)));
        let bad = ExponentPair::from_ratios(3, 5, 1, 2);
        assert!(a_process(&bad).is_err());
        let err = iterate("AC", &ExponentPair::half()).unwrap_err();
        assert!(err.to_string().contains("step 2"));
        let err = iterate("A", &bad).unwrap_err();
        assert!(err.to_string().contains("step 1"));
        assert!(iterate(&"A".repeat(65), &ExponentPair::half()).is_err());
    }

    fn valid_pair() -> impl Strategy<Value = ExponentPair> {
        (0i64..=500, 500i64..=1000).prop_map(|(k, l)| ExponentPair::from_ratios(k, 1000, l, 1000))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn a_preserves_validity(p in valid_pair()) {
            prop_assert!(validate_pair(&a_process(&p).unwrap()));
        }

        #[test]
        fn b_is_an_involution(p in valid_pair()) {
            prop_assert_eq!(b_process(&b_process(&p).unwrap()).unwrap(), p);
        }
    }
}
