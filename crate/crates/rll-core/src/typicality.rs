//! Typical parameters of RLL ensembles, exact concentration masses, and a
//! deterministic Monte-Carlo sampler drawing runs from the maxentropic law.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::json;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::capacity::{solve_lambda, RunDistribution};
use crate::constraints::{RunSet, RunSetKind};
use crate::counting::{count_wr_single, CompositionTable, TotalCounter};
use crate::error::{Error, Result};
use crate::numeric::ratio_f64;

/// Typical values of an RLL ensemble: almost all sequences have relative
/// weight 1/2, `rho_star * n` runs, and `beta_star(l) * n` runs of each
/// length `l`.
#[derive(Debug, Clone)]
pub struct TypicalProfile {
    support: RunSet,
    pub lambda: f64,
    pub omega_star: f64,
    pub rho_star: f64,
    pub run_dist: RunDistribution,
}

impl TypicalProfile {
    pub fn support(&self) -> &RunSet {
        &self.support
    }

    /// Typical density of runs of length `ell` (per symbol).
    pub fn beta_star(&self, ell: u64) -> f64 {
        if self.support.contains(ell) {
            self.lambda.powi(ell as i32) * self.rho_star
        } else {
            0.0
        }
    }

    /// Typical density of length-`ell` runs immediately followed by a
    /// length-`ell_next` run.
    pub fn pair_freq(&self, ell: u64, ell_next: u64) -> f64 {
        if self.support.contains(ell) && self.support.contains(ell_next) {
            self.lambda.powi((ell + ell_next) as i32) * self.rho_star
        } else {
            0.0
        }
    }

    /// Typical density of runs of zeros of length at least `ell_low`
    /// (the same value holds for runs of ones).
    pub fn tail_run_freq(&self, ell_low: u64) -> f64 {
        let tail = match self.support.kind() {
            RunSetKind::ExplicitFinite(v) => v
                .iter()
                .filter(|&&e| e >= ell_low)
                .map(|&e| self.lambda.powi(e as i32))
                .sum::<f64>(),
            RunSetKind::Interval { lo, hi } => {
                let start = (*lo).max(ell_low);
                let head = self.lambda.powi(start as i32) / (1.0 - self.lambda);
                match hi {
                    Some(h) if *h < start => 0.0,
                    Some(h) => head - self.lambda.powi((h + 1) as i32) / (1.0 - self.lambda),
                    None => head,
                }
            }
        };
        0.5 * tail * self.rho_star
    }

    /// `beta_star` over the support, truncated where the density falls
    /// below `cutoff`.
    pub fn beta_star_map(&self, cutoff: f64) -> BTreeMap<u64, f64> {
        let mut out = BTreeMap::new();
        let cap = 64 * 64; // generous; the law decays geometrically
        for ell in self.support.elements_capped(cap) {
            let b = self.beta_star(ell);
            if b >= cutoff {
                out.insert(ell, b);
            } else if ell > self.support.lmin() {
                break;
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let betas: BTreeMap<String, f64> = self
            .beta_star_map(1e-12)
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        json!({
            "lambda": self.lambda,
            "omega_star": self.omega_star,
            "rho_star": self.rho_star,
            "run_dist": serde_json::to_value(&self.run_dist).unwrap(),
            "beta_star": betas,
        })
    }
}

/// Computes the typical profile from the characteristic root.
pub fn typical_profile(l: &RunSet) -> Result<TypicalProfile> {
    let lambda = solve_lambda(l)?;
    let ps = l.power_sums(lambda)?;
    Ok(TypicalProfile {
        support: l.clone(),
        lambda,
        omega_star: 0.5,
        rho_star: 1.0 / ps.a1,
        run_dist: RunDistribution::geometric(l, lambda)?,
    })
}

/// Exact probability mass of the census cells within an l1 window around the
/// typical point: cells (w, r) with
/// `|w - n/2| + |r - rho_star n| <= dw + dr`, as a fraction of all length-n
/// sequences. Computed with exact integer arithmetic, then rounded once.
pub fn concentration_mass(l: &RunSet, n: u64, window: (f64, f64)) -> Result<f64> {
    let (dw, dr) = window;
    if !(dw >= 0.0) || !(dr >= 0.0) {
        return Err(Error::OutOfRange(
            "window radii must be non-negative".to_string(),
        ));
    }
    let profile = typical_profile(l)?;
    let budget = dw + dr;
    let cw = 0.5 * n as f64;
    let cr = profile.rho_star * n as f64;

    let total = TotalCounter::new(l).total(n);
    if total == BigUint::ZERO {
        return Err(Error::BadParameters(format!(
            "no sequences of length {n} under this constraint"
        )));
    }

    let mut table = CompositionTable::new(l);
    let mut inside = BigUint::ZERO;
    let r_lo = (cr - budget).ceil().max(0.0) as u64;
    let r_hi = ((cr + budget).floor() as i64).min(n as i64);
    let mut r = r_lo;
    while (r as i64) <= r_hi {
        let rem = budget - (r as f64 - cr).abs();
        if rem >= 0.0 {
            let w_lo = (cw - rem).ceil().max(0.0) as u64;
            let w_hi = ((cw + rem).floor() as i64).min(n as i64);
            let mut w = w_lo;
            while (w as i64) <= w_hi {
                inside += count_wr_single(&mut table, n, w, r);
                w += 1;
            }
        }
        r += 1;
    }
    Ok(ratio_f64(&inside, &total))
}

/// Empirical statistics of sequences sampled from the maxentropic ensemble.
/// All accumulators are exact integers, so results are bit-identical for a
/// given seed regardless of aggregation order.
#[derive(Debug, Clone)]
pub struct SampleStats {
    pub n: u64,
    pub samples: u64,
    pub seed: u64,
    pub rejections: u64,
    sum_weight: u128,
    sum_runs: u128,
    sumsq_weight: u128,
    sumsq_runs: u128,
    run_totals: BTreeMap<u64, u64>,
    run_sumsq: BTreeMap<u64, u128>,
}

impl SampleStats {
    /// Mean relative weight.
    pub fn omega_hat(&self) -> f64 {
        self.sum_weight as f64 / (self.samples as f64 * self.n as f64)
    }

    /// Mean relative number of runs.
    pub fn rho_hat(&self) -> f64 {
        self.sum_runs as f64 / (self.samples as f64 * self.n as f64)
    }

    /// Empirical density of runs of length `ell` (per symbol).
    pub fn beta_hat(&self, ell: u64) -> f64 {
        *self.run_totals.get(&ell).unwrap_or(&0) as f64 / (self.samples as f64 * self.n as f64)
    }

    /// Standard error of [`SampleStats::beta_hat`], from the sample itself.
    pub fn beta_hat_se(&self, ell: u64) -> f64 {
        let s = self.samples as f64;
        let sum = *self.run_totals.get(&ell).unwrap_or(&0) as f64;
        let sumsq = *self.run_sumsq.get(&ell).unwrap_or(&0) as f64;
        let var = (sumsq - sum * sum / s) / (s - 1.0);
        (var / s).sqrt() / self.n as f64
    }

    pub fn total_runs(&self) -> u64 {
        self.run_totals.values().sum()
    }

    pub fn run_histogram(&self) -> &BTreeMap<u64, u64> {
        &self.run_totals
    }

    /// Chi-square goodness of fit of the run-length histogram against a
    /// reference law. Lengths are binned in ascending order; the tail is
    /// pooled so every bin keeps an expected count of at least 5.
    pub fn chi_square_gof(&self, law: &RunDistribution, alpha: f64) -> GofReport {
        let total = self.total_runs() as f64;
        let mut bins: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
        let mut pooled_obs = 0.0;
        let mut pooled_exp = 0.0;
        let mut seen_mass = 0.0;
        let max_ell = *self.run_totals.keys().last().unwrap_or(&1);
        for ell in law.support.elements_capped(max_ell) {
            let p = law.prob(ell);
            let exp = total * p;
            let obs = *self.run_totals.get(&ell).unwrap_or(&0) as f64;
            seen_mass += p;
            if exp >= 5.0 && pooled_exp == 0.0 {
                bins.push((obs, exp));
            } else {
                pooled_obs += obs;
                pooled_exp += exp;
            }
        }
        // everything beyond the largest observed length
        pooled_exp += total * (1.0 - seen_mass).max(0.0);
        if pooled_exp > 0.0 {
            bins.push((pooled_obs, pooled_exp));
        }
        let statistic: f64 = bins
            .iter()
            .map(|(o, e)| {
                let d = o - e;
                d * d / e
            })
            .sum();
        let df = (bins.len().max(2) - 1) as f64;
        let critical = ChiSquared::new(df).unwrap().inverse_cdf(1.0 - alpha);
        GofReport {
            statistic,
            df,
            critical,
            alpha,
            pass: statistic <= critical,
        }
    }

    /// CSV with header `ell,expected,observed` against a reference law.
    pub fn histogram_csv(&self, law: &RunDistribution) -> String {
        let total = self.total_runs() as f64;
        let mut out = String::from("ell,expected,observed\n");
        let max_ell = *self.run_totals.keys().last().unwrap_or(&1);
        for ell in law.support.elements_capped(max_ell) {
            let exp = total * law.prob(ell);
            let obs = self.run_totals.get(&ell).unwrap_or(&0);
            out.push_str(&format!("{ell},{exp},{obs}\n"));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let hist: BTreeMap<String, u64> = self
            .run_totals
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        json!({
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "rejections": self.rejections,
            "omega_hat": self.omega_hat(),
            "rho_hat": self.rho_hat(),
            "run_histogram": hist,
        })
    }
}

/// Result of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, Copy)]
pub struct GofReport {
    pub statistic: f64,
    pub df: f64,
    pub critical: f64,
    pub alpha: f64,
    pub pass: bool,
}

const REJECTION_BUDGET: u64 = 1_000_000;

/// Samples `count` sequences of length `n` by concatenating alternating runs
/// drawn i.i.d. from the maxentropic law `P(l) = lambda^l`. The final run is
/// truncated to land exactly on `n`; if the truncated length leaves the
/// constraint set, the whole sequence is redrawn.
pub fn sample_sequences(l: &RunSet, n: u64, count: u64, seed: u64) -> Result<SampleStats> {
    if n == 0 || count == 0 {
        return Err(Error::BadParameters(
            "need n >= 1 and count >= 1".to_string(),
        ));
    }
    let lambda = solve_lambda(l)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut stats = SampleStats {
        n,
        samples: count,
        seed,
        rejections: 0,
        sum_weight: 0,
        sum_runs: 0,
        sumsq_weight: 0,
        sumsq_runs: 0,
        run_totals: BTreeMap::new(),
        run_sumsq: BTreeMap::new(),
    };

    for _ in 0..count {
        loop {
            match try_sample_one(l, lambda, n, &mut rng) {
                Some(one) => {
                    stats.sum_weight += one.weight as u128;
                    stats.sum_runs += one.runs as u128;
                    stats.sumsq_weight += (one.weight as u128) * (one.weight as u128);
                    stats.sumsq_runs += (one.runs as u128) * (one.runs as u128);
                    for (ell, c) in one.hist {
                        *stats.run_totals.entry(ell).or_insert(0) += c;
                        *stats.run_sumsq.entry(ell).or_insert(0) += (c as u128) * (c as u128);
                    }
                    break;
                }
                None => {
                    stats.rejections += 1;
                    if stats.rejections > REJECTION_BUDGET {
                        return Err(Error::SamplerStuck);
                    }
                }
            }
        }
    }
    Ok(stats)
}

struct OneSample {
    weight: u64,
    runs: u64,
    hist: BTreeMap<u64, u64>,
}

fn try_sample_one(l: &RunSet, lambda: f64, n: u64, rng: &mut ChaCha12Rng) -> Option<OneSample> {
    let mut total = 0u64;
    let mut weight = 0u64;
    let mut runs = 0u64;
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    let mut symbol_is_one = rng.random::<u64>() & 1 == 1;
    while total < n {
        let mut len = draw_run(l, lambda, rng);
        if total + len > n {
            len = n - total;
            if !l.contains(len) {
                return None;
            }
        }
        total += len;
        runs += 1;
        if symbol_is_one {
            weight += len;
        }
        *hist.entry(len).or_insert(0) += 1;
        symbol_is_one = !symbol_is_one;
    }
    Some(OneSample { weight, runs, hist })
}

/// Inverse-CDF draw from `P(l) = lambda^l` on the support, by walking the
/// support in ascending order. The walk terminates with probability one;
/// a floating-point guard returns the current length if the residual mass
/// underflows.
fn draw_run(l: &RunSet, lambda: f64, rng: &mut ChaCha12Rng) -> u64 {
    let u: f64 = rng.random();
    let mut cum = 0.0;
    match l.kind() {
        RunSetKind::ExplicitFinite(v) => {
            for &ell in v {
                cum += lambda.powi(ell as i32);
                if u < cum {
                    return ell;
                }
            }
            *v.last().unwrap()
        }
        RunSetKind::Interval { lo, hi } => {
            let mut ell = *lo;
            let mut term = lambda.powi(*lo as i32);
            loop {
                cum += term;
                if u < cum {
                    return ell;
                }
                if let Some(h) = hi {
                    if ell >= *h {
                        return *h;
                    }
                }
                if term < 1e-300 {
                    return ell;
                }
                ell += 1;
                term *= lambda;
            }
        }
    }
}
