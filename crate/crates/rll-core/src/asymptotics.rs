//! Confronts exact counts with capacity predictions: extracts the `log n`
//! correction coefficient and the O(1) residual from count series.
//!
//! Rates are computed from exact big-integer counts through a high-precision
//! base-2 log (error far below 1e-10); floats never touch the counts
//! themselves. Rational targets must align with every `n` in the series so
//! that `omega * n` and `rho * n` are integers; floors would inject O(1)
//! noise into a fit hunting an O(log n) signal.

use serde_json::json;

use crate::capacity::{capacity_r, capacity_w, capacity_wr, solve_lambda};
use crate::constraints::{ParamPoint, RunSet};
use crate::counting::{count_wr_single, CompositionTable, TotalCounter};
use crate::error::{Error, Result};
use crate::numeric::log2_big;

/// What count series to fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitTarget {
    /// `S_L(n, omega n, rho n)`
    WeightRuns { omega: f64, rho: f64 },
    /// `S_L(n, omega n, *)`
    Weight { omega: f64 },
    /// `S_L(n, *, rho n)`
    Runs { rho: f64 },
    /// `S_L(n)`
    Total,
}

/// One point of a fitted series.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct FitPoint {
    pub n: u64,
    pub exact_log_count: f64,
    pub predicted_n_term: f64,
    pub residual: f64,
}

/// Least-squares fit of `exact_log - n sigma = c log2 n + b`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FitReport {
    pub sigma: f64,
    pub points: Vec<FitPoint>,
    pub fitted_log_coefficient: f64,
    pub fitted_constant: f64,
    pub max_residual: f64,
}

impl FitReport {
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("n,log_count,n_term,residual\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{}\n",
                p.n, p.exact_log_count, p.predicted_n_term, p.residual
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "sigma": self.sigma,
            "fitted_log_coefficient": self.fitted_log_coefficient,
            "fitted_constant": self.fitted_constant,
            "max_residual": self.max_residual,
            "points": serde_json::to_value(&self.points).unwrap(),
        })
    }
}

fn aligned(x: f64, n: u64) -> Result<u64> {
    let v = x * n as f64;
    let r = v.round();
    if (v - r).abs() > 1e-9 * v.abs().max(1.0) {
        return Err(Error::MisalignedGrid(format!(
            "{x} * {n} = {v} is not an integer"
        )));
    }
    Ok(r as u64)
}

/// Fits `exact_log_count - n sigma` against `c log2 n + b` over the series
/// and reports the fitted coefficient, constant, and residuals.
pub fn fit_log_correction(l: &RunSet, target: FitTarget, n_list: &[u64]) -> Result<FitReport> {
    let mut ns: Vec<u64> = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 2 {
        return Err(Error::EmptySeries);
    }

    let sigma = match target {
        FitTarget::WeightRuns { omega, rho } => {
            let res = capacity_wr(l, ParamPoint::new(omega, rho)?)?;
            res.sigma.finite().ok_or(Error::CapacityOutOfRange)?
        }
        FitTarget::Weight { omega } => capacity_w(l, omega)?
            .sigma
            .finite()
            .ok_or(Error::CapacityOutOfRange)?,
        FitTarget::Runs { rho } => capacity_r(l, rho)?
            .sigma
            .finite()
            .ok_or(Error::CapacityOutOfRange)?,
        FitTarget::Total => -solve_lambda(l)?.log2(),
    };

    let mut table = CompositionTable::new(l);
    let mut total = TotalCounter::new(l);
    let mut points: Vec<FitPoint> = Vec::with_capacity(ns.len());
    for &n in &ns {
        let count = match target {
            FitTarget::WeightRuns { omega, rho } => {
                let w = aligned(omega, n)?;
                let r = aligned(rho, n)?;
                count_wr_single(&mut table, n, w, r)
            }
            FitTarget::Weight { omega } => {
                let w = aligned(omega, n)?;
                let mut sum = num_bigint::BigUint::ZERO;
                for r in 0..=n {
                    sum += count_wr_single(&mut table, n, w, r);
                }
                sum
            }
            FitTarget::Runs { rho } => {
                let r = aligned(rho, n)?;
                if r == 0 {
                    return Err(Error::MisalignedGrid(format!("rho * {n} rounds to 0")));
                }
                table.get(n, r) * 2u32
            }
            FitTarget::Total => total.total(n),
        };
        let log = log2_big(&count);
        if !log.is_finite() {
            return Err(Error::BadParameters(format!(
                "count vanishes at n = {n}; the target misses the support"
            )));
        }
        points.push(FitPoint {
            n,
            exact_log_count: log,
            predicted_n_term: sigma * n as f64,
            residual: 0.0,
        });
    }

    // least squares of y = c x + b with x = log2 n
    let m = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for p in &points {
        let x = (p.n as f64).log2();
        let y = p.exact_log_count - p.predicted_n_term;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = m * sxx - sx * sx;
    let c = (m * sxy - sx * sy) / denom;
    let b = (sy - c * sx) / m;

    let mut max_residual = 0.0f64;
    for p in &mut points {
        let x = (p.n as f64).log2();
        let y = p.exact_log_count - p.predicted_n_term;
        p.residual = y - c * x - b;
        max_residual = max_residual.max(p.residual.abs());
    }

    Ok(FitReport {
        sigma,
        points,
        fitted_log_coefficient: c,
        fitted_constant: b,
        max_residual,
    })
}

/// One row of a convergence report.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ConvergencePoint {
    pub n: u64,
    /// `(1/n) log2 S_L(n)`
    pub rate: f64,
    /// `|rate - (-log2 lambda)|`
    pub gap: f64,
}

/// Convergence of finite-n rates to the capacity. The gap decays like
/// `O(1/n)`; the report carries `max(gap * n)` over the series.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConvergenceReport {
    pub capacity: f64,
    pub points: Vec<ConvergencePoint>,
    pub max_gap_times_n: f64,
}

pub fn convergence_report(l: &RunSet, n_list: &[u64]) -> Result<ConvergenceReport> {
    if n_list.is_empty() {
        return Err(Error::EmptySeries);
    }
    let capacity = -solve_lambda(l)?.log2();
    let mut ns: Vec<u64> = n_list.iter().copied().filter(|&n| n > 0).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut counter = TotalCounter::new(l);
    let mut points = Vec::with_capacity(ns.len());
    let mut max_gap_times_n = 0.0f64;
    for &n in &ns {
        let rate = log2_big(&counter.total(n)) / n as f64;
        let gap = (rate - capacity).abs();
        max_gap_times_n = max_gap_times_n.max(gap * n as f64);
        points.push(ConvergencePoint { n, rate, gap });
    }
    Ok(ConvergenceReport {
        capacity,
        points,
        max_gap_times_n,
    })
}
