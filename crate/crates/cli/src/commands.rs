use anyhow::{bail, Context, Result};
use psieve_core::expsum::{heath_brown_lambda, LogCombination};
use psieve_core::levels::{feasibility, level_lu, level_peneva, level_theorem1, LevelParams};
use psieve_core::pairs::{iterate, ExponentPair};
use psieve_core::ps::DEFAULT_GAMMA_GRID;
use psieve_core::rational::{self, qi, to_f64, Q};
use psieve_core::report::{discrepancy_table, scan_table};
use psieve_core::sieve_numerics::{bracket, gamma_threshold, richert_integral, triple_integral};
use psieve_core::{b_set_main_term, bv_discrepancy, pi_gamma, scan_p3, Error, PsGamma};
use rayon::prelude::*;
use serde_json::json;

use crate::output::{json, json_object, Cell, Rows};
use crate::{Format, Global};

fn parse_q(s: &str) -> Result<Q> {
    Ok(rational::parse(s)?)
}

/// `(text, exact, f64)` for each requested γ, or for `defaults`.
fn gammas(g: &Global, defaults: &[f64]) -> Result<Vec<(String, Q, f64)>> {
    if g.gamma.is_empty() {
        return defaults
            .iter()
            .map(|&v| Ok((v.to_string(), rational::from_f64(v)?, v)))
            .collect();
    }
    g.gamma
        .iter()
        .map(|s| {
            let exact = parse_q(s)?;
            let v = to_f64(&exact);
            Ok((s.trim().to_string(), exact, v))
        })
        .collect()
}

fn single_gamma(g: &Global, default: f64) -> Result<f64> {
    let list = gammas(g, &[default])?;
    if list.len() != 1 {
        return Err(Error::Domain("this command takes a single --gamma".into()).into());
    }
    Ok(list[0].2)
}

fn parse_x(s: &str) -> Result<u64> {
    let v: f64 = s.trim().parse().with_context(|| format!("--x {s:?}"))?;
    if !(v >= 0.0 && v.fract() == 0.0 && v <= 2f64.powi(53)) {
        return Err(Error::Domain(format!("--x {s:?} is not a non-negative integer")).into());
    }
    Ok(v as u64)
}

fn x_values(g: &Global, default: &[u64]) -> Result<Vec<u64>> {
    if g.x.is_empty() {
        return Ok(default.to_vec());
    }
    g.x.iter().map(|s| parse_x(s)).collect()
}

fn single_x(g: &Global, default: u64) -> Result<u64> {
    let xs = x_values(g, &[default])?;
    if xs.len() != 1 {
        return Err(Error::Domain("this command takes a single --x".into()).into());
    }
    Ok(xs[0])
}

fn eps_q(g: &Global, default: &str) -> Result<Q> {
    parse_q(g.eps.as_deref().unwrap_or(default))
}

pub fn count(g: &Global) -> Result<String> {
    let x = single_x(g, 1_000_000)?;
    let mut rows = Rows::new(&["gamma", "x", "pi_gamma"]);
    for (_, _, gamma) in gammas(g, &[0.999])? {
        let pi = pi_gamma(x, &PsGamma::new(gamma)?)?;
        rows.push(vec![gamma.into(), x.into(), pi.into()]);
    }
    rows.render(g.format)
}

pub fn scan(g: &Global) -> Result<String> {
    let gamma = single_gamma(g, 0.999)?;
    let x = single_x(g, 1_000_000)?;
    let r = g.r.unwrap_or(3);
    let records = scan_p3(x, &PsGamma::new(gamma)?, r)?;
    match g.format {
        Format::Csv => Ok(scan_table(&records).to_csv()),
        Format::Json => json_object(vec![
            ("gamma", json!(gamma)),
            ("x", json!(x)),
            ("r", json!(r)),
            ("count", json!(records.len())),
            ("records", serde_json::to_value(&records)?),
        ]),
    }
}

pub fn bv(g: &Global) -> Result<String> {
    let gamma = single_gamma(g, 0.999)?;
    let x = single_x(g, 1_000_000)?;
    let xi = match g.xi {
        Some(v) => v,
        None => to_f64(&level_theorem1(&rational::from_f64(gamma)?, &qi(0)).value),
    };
    let report = bv_discrepancy(x, &PsGamma::new(gamma)?, xi, g.a.unwrap_or(1), g.log_power.unwrap_or(2.0))?;
    match g.format {
        Format::Csv => Ok(discrepancy_table(&report).to_csv()),
        Format::Json => json(&report),
    }
}

pub fn levels(g: &Global) -> Result<String> {
    let eps = eps_q(g, "1e-6")?;
    let eta = match &g.eta {
        Some(s) => parse_q(s)?,
        None => &eps / qi(2),
    };
    let mut rows = Rows::new(&[
        "gamma",
        "gamma_exact",
        "eps",
        "xi_thm1",
        "xi_thm1_exact",
        "thm1_in_domain",
        "xi_lu",
        "xi_peneva",
        "feasible",
        "failed",
    ]);
    for (_, gq, gf) in gammas(g, &DEFAULT_GAMMA_GRID)? {
        let thm1 = level_theorem1(&gq, &eps);
        let lu = level_lu(&gq, &eps).ok().map(|v| to_f64(&v));
        let peneva = level_peneva(&gq, &eps).ok().map(|v| to_f64(&v));
        let report = feasibility(&LevelParams::theorem1(gq.clone(), eps.clone(), eta.clone()));
        rows.push(vec![
            gf.into(),
            gq.to_string().into(),
            to_f64(&eps).into(),
            to_f64(&thm1.value).into(),
            thm1.value.to_string().into(),
            thm1.in_domain.into(),
            lu.into(),
            peneva.into(),
            report.overall.into(),
            report.failed().join(" ").into(),
        ]);
    }
    rows.render(g.format)
}

pub fn pairs(g: &Global, word: &str, start: &str) -> Result<String> {
    let (k, l) = start
        .split_once(',')
        .with_context(|| format!("--start {start:?} should be \"kappa,ell\""))?;
    let start = ExponentPair::new(parse_q(k)?, parse_q(l)?);
    let p = iterate(word, &start)?;
    let mut rows = Rows::new(&["word", "kappa", "ell", "pair"]);
    rows.push(vec![word.into(), p.kappa.to_string().into(), p.ell.to_string().into(), p.to_string().into()]);
    rows.render(g.format)
}

pub fn phi(g: &Global) -> Result<String> {
    let tol = g.tol.unwrap_or(1e-9);
    let eps = to_f64(&eps_q(g, "0")?);
    let grid = gammas(g, &DEFAULT_GAMMA_GRID)?;
    let results: Vec<_> = grid.par_iter().map(|&(_, _, gamma)| (gamma, bracket(gamma, eps, tol))).collect();
    let mut rows = Rows::new(&[
        "gamma", "eps", "xi", "u", "lambda", "main", "richert", "triple", "phi", "status",
    ]);
    for (gamma, res) in results {
        match res {
            Ok(b) => rows.push(vec![
                gamma.into(),
                eps.into(),
                b.xi.into(),
                b.u.into(),
                b.lambda.into(),
                b.main.into(),
                b.richert.value.into(),
                b.triple.value.into(),
                b.phi.into(),
                "ok".into(),
            ]),
            Err(Error::Domain(msg)) => {
                let mut row = vec![gamma.into(), eps.into()];
                row.extend((0..7).map(|_| Cell::Null));
                row.push(format!("domain error: {msg}").into());
                rows.push(row);
            }
            Err(e) => return Err(e.into()),
        }
    }
    rows.render(g.format)
}

pub fn threshold(g: &Global) -> Result<String> {
    let tol = g.tol.unwrap_or(1e-8);
    let root = gamma_threshold(tol)?;
    let mut rows = Rows::new(&["gamma_star", "tol"]);
    rows.push(vec![root.into(), tol.into()]);
    rows.render(g.format)
}

pub fn integrals(g: &Global) -> Result<String> {
    let tol = g.tol.unwrap_or(1e-10);
    let eps = to_f64(&eps_q(g, "0")?);
    let xi = match g.xi {
        Some(v) => v,
        None => {
            let gamma = single_gamma(g, 0.9989445)?;
            to_f64(&level_theorem1(&rational::from_f64(gamma)?, &qi(0)).value) - eps
        }
    };
    let u = 1.0 / xi + eps;
    let r = richert_integral(u, xi, tol)?;
    let t = triple_integral(tol)?;
    let mut rows =
        Rows::new(&["integral", "u", "xi", "value", "abs_error_estimate", "evaluations", "converged"]);
    rows.push(vec![
        "richert".into(),
        u.into(),
        xi.into(),
        r.value.into(),
        r.abs_error_estimate.into(),
        r.evaluations.into(),
        r.converged.into(),
    ]);
    rows.push(vec![
        "triple".into(),
        Cell::Null,
        Cell::Null,
        t.value.into(),
        t.abs_error_estimate.into(),
        t.evaluations.into(),
        t.converged.into(),
    ]);
    rows.render(g.format)
}

pub fn identity_check(g: &Global) -> Result<String> {
    let mut rows = Rows::new(&["x", "checked", "mismatches"]);
    let mut bad = Vec::new();
    for x in x_values(g, &[50, 100, 500])? {
        if x == 0 {
            bail!(Error::Domain("identity-check needs X >= 1".into()));
        }
        let mism: Vec<u64> = (x + 1..=2 * x)
            .into_par_iter()
            .map(|n| Ok((heath_brown_lambda(n, x)? != LogCombination::von_mangoldt(n)?).then_some(n)))
            .collect::<psieve_core::Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        rows.push(vec![x.into(), x.into(), (mism.len() as u64).into()]);
        bad.extend(mism.into_iter().map(|n| (x, n)));
    }
    if let Some((x, n)) = bad.first() {
        bail!("identity fails at n = {n} (X = {x}); {} mismatches in total", bad.len());
    }
    rows.render(g.format)
}

pub fn bset(g: &Global) -> Result<String> {
    let gamma = single_gamma(g, 0.999)?;
    let mut rows =
        Rows::new(&["x", "gamma", "p_min", "count", "enumerated_sum", "integral_prediction", "ratio"]);
    for x in x_values(g, &[1_000_000])? {
        let s = b_set_main_term(x, gamma)?;
        rows.push(vec![
            s.x.into(),
            s.gamma.into(),
            s.p_min.into(),
            s.count.into(),
            s.enumerated_sum.into(),
            s.integral_prediction.into(),
            s.ratio.into(),
        ]);
    }
    rows.render(g.format)
}
