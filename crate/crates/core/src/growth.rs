//! Comparison of a computed codimension sequence with the growth law
//! `C₁ n^{r₁} d^n ≤ c_n ≤ C₂ n^{r₂} d^n` (or eventual vanishing when `d = 0`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{pi_exponent, ExponentOptions, ExponentResult};
use crate::multilin::{check_budget, codimension, Codimension, EvalOptions, Method};
use crate::pipeline::Structure;

/// Relative slack allowed when re-checking the fitted bounds in floating point.
pub const FIT_TOLERANCE: f64 = 1e-12;
/// Window for `c_N^{1/N}` relative to `d`.
pub const ROOT_WINDOW: (f64, f64) = (0.6, 1.05);
/// Half-integer exponents are searched in `[-R_RANGE, R_RANGE]`.
pub const R_RANGE: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub c_n: usize,
    pub method: Method,
    pub seed: u64,
    pub primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub c1: f64,
    pub r1: f64,
    pub c2: f64,
    pub r2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub name: String,
    pub max_n: usize,
    pub table: Vec<GrowthRow>,
    pub d: usize,
    pub witness: Vec<usize>,
    pub d_is_lower_bound: bool,
    pub fit: Option<Fit>,
    /// `c_max_n^{1/max_n}` (only when `d > 0`).
    pub root: Option<f64>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

fn ratio(c: usize, n: usize, r: f64, d: usize) -> f64 {
    c as f64 / ((n as f64).powf(r) * (d as f64).powi(n as i32))
}

fn half_integers() -> impl DoubleEndedIterator<Item = f64> {
    let steps = (2.0 * R_RANGE) as i64;
    (-steps..=steps).map(|k| k as f64 / 2.0)
}

/// Least `r₂` with `c_n/(n^{r₂} d^n)` non-increasing and greatest `r₁` with
/// it non-decreasing, over half-integers; `C₂`, `C₁` are the extreme ratios.
pub fn fit_envelope(points: &[(usize, usize)], d: usize) -> Option<Fit> {
    if d == 0 || points.is_empty() {
        return None;
    }
    let monotone = |r: f64, increasing: bool| {
        points.windows(2).all(|w| {
            let (a, b) = (ratio(w[0].1, w[0].0, r, d), ratio(w[1].1, w[1].0, r, d));
            if increasing {
                b >= a * (1.0 - FIT_TOLERANCE)
            } else {
                b <= a * (1.0 + FIT_TOLERANCE)
            }
        })
    };
    let r2 = half_integers().find(|&r| monotone(r, false))?;
    let r1 = half_integers().rev().find(|&r| monotone(r, true))?;
    let c2 = points
        .iter()
        .map(|&(n, c)| ratio(c, n, r2, d))
        .fold(f64::MIN, f64::max);
    let c1 = points
        .iter()
        .map(|&(n, c)| ratio(c, n, r1, d))
        .fold(f64::MAX, f64::min);
    Some(Fit { c1, r1, c2, r2 })
}

/// Indices `n` at which the fitted bounds fail, with the tolerance applied.
pub fn bracket_violations(points: &[(usize, usize)], d: usize, fit: &Fit) -> Vec<usize> {
    points
        .iter()
        .filter(|&&(n, c)| {
            let lo = fit.c1 * (n as f64).powf(fit.r1) * (d as f64).powi(n as i32);
            let hi = fit.c2 * (n as f64).powf(fit.r2) * (d as f64).powi(n as i32);
            let c = c as f64;
            c < lo * (1.0 - FIT_TOLERANCE) || c > hi * (1.0 + FIT_TOLERANCE)
        })
        .map(|&(n, _)| n)
        .collect()
}

/// Verdict for a codimension sequence given `d`.
pub fn judge(
    points: &[(usize, usize)],
    d: usize,
) -> (Option<Fit>, Option<f64>, Verdict, Vec<String>) {
    let mut notes = Vec::new();
    if points.is_empty() {
        return (
            None,
            None,
            Verdict::Inconclusive,
            vec!["no codimensions computed".into()],
        );
    }
    if d == 0 {
        let tail = &points[points.len().saturating_sub(2)..];
        let pass = tail.iter().all(|&(_, c)| c == 0);
        if !pass {
            notes.push(format!(
                "trailing codimensions {tail:?} do not vanish although d = 0"
            ));
        }
        return (
            None,
            None,
            if pass { Verdict::Pass } else { Verdict::Fail },
            notes,
        );
    }
    let mut pass = true;
    if let Some(&(n, _)) = points.iter().find(|&&(_, c)| c == 0) {
        notes.push(format!("c_{n} = 0 although d = {d}"));
        pass = false;
    }
    let (last_n, last_c) = *points.last().unwrap();
    let root = (last_c as f64).powf(1.0 / last_n as f64);
    let window = (ROOT_WINDOW.0 * d as f64, ROOT_WINDOW.1 * d as f64);
    if !(window.0..=window.1).contains(&root) {
        notes.push(format!(
            "c_{last_n}^(1/{last_n}) = {root:.6} outside [{:.3}, {:.3}]",
            window.0, window.1
        ));
        pass = false;
    }
    let fit = if pass { fit_envelope(points, d) } else { None };
    match &fit {
        Some(f) => {
            let bad = bracket_violations(points, d, f);
            if !bad.is_empty() {
                notes.push(format!("fitted bounds violated at n = {bad:?}"));
                pass = false;
            }
        }
        None if pass => {
            notes.push(format!(
                "no half-integer exponent in [-{R_RANGE}, {R_RANGE}] fits"
            ));
            pass = false;
        }
        None => {}
    }
    (
        fit,
        Some(root),
        if pass { Verdict::Pass } else { Verdict::Fail },
        notes,
    )
}

/// Computes `c_1..c_max_n` and `d` and checks the growth law.
pub fn run_growth(
    name: &str,
    structure: &Structure,
    max_n: usize,
    eval: &EvalOptions,
    exp: &ExponentOptions,
) -> Result<GrowthReport> {
    if max_n == 0 {
        return Err(Error::Input("max_n must be at least 1".into()));
    }
    check_budget(&structure.rep, max_n, eval)?;
    let table = (1..=max_n)
        .map(|n| codimension(&structure.rep, n, eval).map(GrowthRow::from_codimension))
        .collect::<Result<Vec<_>>>()?;
    let exponent = pi_exponent(&structure.rep, &structure.env, &structure.levi, exp)?;
    Ok(assemble(name, table, &exponent))
}

/// Builds the report from an already computed table and exponent.
pub fn assemble(name: &str, table: Vec<GrowthRow>, exponent: &ExponentResult) -> GrowthReport {
    let points: Vec<(usize, usize)> = table.iter().map(|r| (r.n, r.c_n)).collect();
    let (fit, root, mut verdict, mut notes) = judge(&points, exponent.d);
    if exponent.lower_bound {
        notes.push("exponent search hit the state cap; d is only a lower bound".into());
        verdict = Verdict::Inconclusive;
    }
    notes.extend(exponent.warnings.iter().cloned());
    GrowthReport {
        name: name.to_string(),
        max_n: table.len(),
        table,
        d: exponent.d,
        witness: exponent.witness_indices(),
        d_is_lower_bound: exponent.lower_bound,
        fit,
        root,
        verdict,
        notes,
    }
}

impl GrowthRow {
    pub fn from_codimension(c: Codimension) -> GrowthRow {
        GrowthRow {
            n: c.n,
            c_n: c.c_n,
            method: c.rank.method,
            seed: c.rank.seed,
            primes: c.rank.primes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sequence() {
        let pts: Vec<(usize, usize)> = (1..=5).map(|n| (n, 1)).collect();
        let (fit, root, verdict, _) = judge(&pts, 1);
        let fit = fit.unwrap();
        assert_eq!((fit.c1, fit.r1, fit.c2, fit.r2), (1.0, 0.0, 1.0, 0.0));
        assert_eq!(root, Some(1.0));
        assert_eq!(verdict, Verdict::Pass);
    }

    #[test]
    fn zero_exponent() {
        let pts = vec![(1, 0), (2, 0), (3, 0), (4, 0)];
        assert_eq!(judge(&pts, 0).2, Verdict::Pass);
        let pts = vec![(1, 1), (2, 2), (3, 0), (4, 0)];
        assert_eq!(judge(&pts, 0).2, Verdict::Pass);
        let pts = vec![(1, 1), (2, 2), (3, 0), (4, 1)];
        assert_eq!(judge(&pts, 0).2, Verdict::Fail);
    }

    #[test]
    fn fit_brackets_every_point() {
        // Motzkin-like numbers with d = 3
        let pts = vec![(1, 1), (2, 2), (3, 4), (4, 9), (5, 21), (6, 51)];
        let (fit, _, verdict, notes) = judge(&pts, 3);
        assert_eq!(verdict, Verdict::Pass, "{notes:?}");
        let fit = fit.unwrap();
        assert!(bracket_violations(&pts, 3, &fit).is_empty());
        assert!(fit.r1 <= fit.r2);
        // half a step below r₂ the normalised sequence is no longer
        // non-increasing, and half a step above r₁ no longer non-decreasing
        let ratios = |r: f64| {
            pts.iter()
                .map(|&(n, c)| ratio(c, n, r, 3))
                .collect::<Vec<_>>()
        };
        assert!(ratios(fit.r2 - 0.5).windows(2).any(|w| w[1] > w[0]));
        assert!(ratios(fit.r1 + 0.5).windows(2).any(|w| w[1] < w[0]));
    }

    #[test]
    fn root_window_is_enforced() {
        let pts: Vec<(usize, usize)> = (1..=6).map(|n| (n, 1)).collect();
        let (_, _, verdict, notes) = judge(&pts, 3);
        assert_eq!(verdict, Verdict::Fail);
        assert!(notes.iter().any(|s| s.contains("outside")));
    }

    #[test]
    fn vanishing_codimension_fails_positive_exponent() {
        let pts = vec![(1, 1), (2, 0)];
        assert_eq!(judge(&pts, 1).2, Verdict::Fail);
    }
}
