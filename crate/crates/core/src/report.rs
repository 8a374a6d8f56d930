//! Report serialization.
//!
//! CSV: header row, fixed column order, floats at 15 significant digits, LF
//! line endings. JSON: one object per report with keys in lexicographic
//! order (`serde_json::Value` keeps object keys sorted).

use std::fmt::Display;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::arith::FactorSignature;
use crate::error::{domain, Error, Result};
use crate::harness::{DiscrepancyReport, DiscrepancyRow};
use crate::ps::{verify_record, PsGamma, PsPrimeRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => domain(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

/// `v` with 15 significant digits, `%g` style: plain notation for
/// exponents in `[-4, 15)`, scientific otherwise, trailing zeros dropped.
pub fn fmt_float(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.14e}");
    let (mant, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A rectangular table of already-formatted cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()).map_err(csv_err))
            .collect::<Result<_>>()?;
        Ok(Table { header, rows })
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Domain(format!("missing column {name:?}")))
    }

    /// Cell `name` of row `i`, parsed.
    pub fn get<T: FromStr>(&self, i: usize, name: &str) -> Result<T>
    where
        T::Err: Display,
    {
        let cell = &self.rows[i][self.column(name)?];
        cell.parse().map_err(|e| Error::Domain(format!("row {}, column {name}: {cell:?}: {e}", i + 1)))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Domain(format!("csv: {e}"))
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let value = serde_json::to_value(v).map_err(|e| Error::Domain(format!("json: {e}")))?;
    let mut s = serde_json::to_string_pretty(&value).map_err(|e| Error::Domain(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Domain(format!("json: {e}")))
}

const BV_COLUMNS: [&str; 12] =
    ["x", "gamma", "xi", "a", "log_power", "d_max", "pi_gamma", "d", "phi_d", "count_in_class", "expected", "abs_error"];

pub fn discrepancy_table(r: &DiscrepancyReport) -> Table {
    let mut t = Table::new(BV_COLUMNS);
    for row in &r.rows {
        t.push(vec![
            r.x.to_string(),
            fmt_float(r.gamma),
            fmt_float(r.xi),
            r.a.to_string(),
            fmt_float(r.log_power),
            r.d_max.to_string(),
            r.pi_gamma.to_string(),
            row.d.to_string(),
            row.phi_d.to_string(),
            row.count_in_class.to_string(),
            fmt_float(row.expected),
            fmt_float(row.abs_error),
        ]);
    }
    t
}

/// Inverse of [`discrepancy_table`]; totals are recomputed from the rows.
pub fn parse_discrepancy_table(t: &Table) -> Result<DiscrepancyReport> {
    if t.rows.is_empty() {
        return domain("discrepancy table has no rows");
    }
    let rows = (0..t.rows.len())
        .map(|i| {
            Ok(DiscrepancyRow {
                d: t.get(i, "d")?,
                phi_d: t.get(i, "phi_d")?,
                count_in_class: t.get(i, "count_in_class")?,
                expected: t.get(i, "expected")?,
                abs_error: t.get(i, "abs_error")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (x, gamma, log_power) = (t.get(0, "x")?, t.get(0, "gamma")?, t.get(0, "log_power")?);
    Ok(DiscrepancyReport {
        x,
        gamma,
        xi: t.get(0, "xi")?,
        a: t.get(0, "a")?,
        log_power,
        d_max: t.get(0, "d_max")?,
        pi_gamma: t.get(0, "pi_gamma")?,
        total: DiscrepancyReport::sum_rows(&rows),
        rows,
        reference_scale: DiscrepancyReport::reference_scale_for(x, gamma, log_power),
    })
}

const SCAN_COLUMNS: [&str; 5] = ["p", "witness_n", "companion", "factors", "big_omega"];

pub fn scan_table(records: &[PsPrimeRecord]) -> Table {
    let mut t = Table::new(SCAN_COLUMNS);
    for r in records {
        t.push(vec![
            r.p.to_string(),
            r.witness_n.to_string(),
            r.companion.n.to_string(),
            r.companion.factor_string(),
            r.companion.big_omega.to_string(),
        ]);
    }
    t
}

/// Parse `2^2*3` back into a signature for `n`.
pub fn parse_factor_string(n: u64, s: &str) -> Result<FactorSignature> {
    if s == "1" {
        return Ok(FactorSignature::from_factors(n, Vec::new()));
    }
    let factors = s
        .split('*')
        .map(|part| {
            let (p, e) = part.split_once('^').unwrap_or((part, "1"));
            match (p.parse::<u64>(), e.parse::<u32>()) {
                (Ok(p), Ok(e)) => Ok((p, e)),
                _ => domain(format!("bad factor {part:?}")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactorSignature::from_factors(n, factors))
}

/// Parse scan output, re-verifying every record (witness floor, primality,
/// companion factorization, `Ω <= r`). A stated `Ω` that disagrees with the
/// stated factors is rejected too.
pub fn parse_scan_table(t: &Table, g: &PsGamma, r: u32) -> Result<Vec<PsPrimeRecord>> {
    let mut out = Vec::with_capacity(t.rows.len());
    for i in 0..t.rows.len() {
        let companion: u64 = t.get(i, "companion")?;
        let sig = parse_factor_string(companion, &t.rows[i][t.column("factors")?])?;
        let omega: u32 = t.get(i, "big_omega")?;
        let rec = PsPrimeRecord { p: t.get(i, "p")?, witness_n: t.get(i, "witness_n")?, companion: sig };
        if omega != rec.companion.big_omega || !verify_record(&rec, g, r)? {
            return domain(format!("row {}: record for p = {} fails verification", i + 1, rec.p));
        }
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt_float(0.1), "0.1");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_float(123456.789), "123456.789");
        assert_eq!(fmt_float(6.0431137e-5), "6.0431137e-5");
        assert_eq!(fmt_float(2.0), "2");
        assert_eq!(fmt_float(-1.5e20), "-1.5e20");
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(1e15), "1e15");
        assert_eq!(fmt_float(0.0001), "0.0001");
        for v in [0.1, 1.0 / 3.0, 6.0431137e-5, 2.5e300] {
            let back: f64 = fmt_float(v).parse().unwrap();
            assert!(((back - v) / v).abs() < 1e-14);
        }
    }

    #[test]
    fn csv_uses_lf() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        let s = t.to_csv();
        assert_eq!(s, "a,b\n1,\"x,y\"\n");
        assert_eq!(Table::parse_csv(&s).unwrap(), t);
    }

    #[test]
    fn factor_strings() {
        let s = factorize(360).unwrap();
        assert_eq!(parse_factor_string(360, &s.factor_string()).unwrap(), s);
        assert!(parse_factor_string(6, "2*x").is_err());
    }

    #[test]
    fn json_keys_sorted() {
        #[derive(Serialize)]
        struct R {
            zeta: u8,
            alpha: u8,
        }
        let s = to_json(&R { zeta: 1, alpha: 2 }).unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
    }
}
