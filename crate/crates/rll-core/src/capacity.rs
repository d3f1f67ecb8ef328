//! Capacity functions of constrained sequences: the exponential growth
//! rates (bits/symbol) of counts under weight and/or run constraints,
//! together with their root variables and maxentropic run-length laws.
//!
//! Every solve reduces to inverting a strictly increasing mean function
//! (see [`crate::solve`]), so the solvers are deterministic and cannot
//! wander. All formulas are evaluated at stationary points of the
//! corresponding exponent, which makes the reported capacities insensitive
//! to first order in the residual root error.

use serde::{Serialize, Serializer};

use crate::constraints::{
    classify_pair, region_slacks, ParamPoint, RegionLocation, RunSet, DEFAULT_EDGE_TOL,
};
use crate::error::{Error, Result};
use crate::solve::{solve_mean, solve_unit_sum, WeightedExponents};

/// A capacity value; outside the admissible region it is negative infinity,
/// kept as an explicit variant rather than a float sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sigma {
    Finite(f64),
    NegInfinity,
}

impl Sigma {
    /// The value as `f64`, mapping the sentinel to `f64::NEG_INFINITY`.
    pub fn as_f64(&self) -> f64 {
        match self {
            Sigma::Finite(v) => *v,
            Sigma::NegInfinity => f64::NEG_INFINITY,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Sigma::Finite(v) => Some(*v),
            Sigma::NegInfinity => None,
        }
    }
}

impl Serialize for Sigma {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Sigma::Finite(v) => s.serialize_f64(*v),
            Sigma::NegInfinity => s.serialize_str("-inf"),
        }
    }
}

/// A run-length law of the form `P(l) = normalizer * base^l` on its support.
/// Degenerate (point-mass) laws are represented with a singleton support and
/// `base = normalizer = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunDistribution {
    pub support: RunSet,
    pub base: f64,
    pub normalizer: f64,
    pub mean: f64,
}

impl RunDistribution {
    /// Maxentropic law `P(l) ∝ base^l` on `support`.
    pub fn geometric(support: &RunSet, base: f64) -> Result<Self> {
        let ps = support.power_sums(base)?;
        Ok(RunDistribution {
            support: support.clone(),
            base,
            normalizer: 1.0 / ps.a,
            mean: ps.a1 / ps.a,
        })
    }

    /// The law putting all mass on a single run length.
    pub fn point_mass(ell: u64) -> Self {
        RunDistribution {
            support: RunSet::permissive_from_elements([ell]).expect("positive length"),
            base: 1.0,
            normalizer: 1.0,
            mean: ell as f64,
        }
    }

    pub fn prob(&self, ell: u64) -> f64 {
        if self.support.contains(ell) {
            self.normalizer * self.base.powi(ell as i32)
        } else {
            0.0
        }
    }

    /// Total mass, re-evaluated from the power sums (should be 1).
    pub fn total_mass(&self) -> f64 {
        let ps = self.support.power_sums(self.base).expect("valid base");
        self.normalizer * ps.a
    }

    /// Shannon entropy in bits: `-log2(normalizer) - mean * log2(base)`.
    pub fn entropy(&self) -> f64 {
        -self.normalizer.log2() - self.mean * self.base.log2()
    }

    pub fn is_degenerate(&self) -> bool {
        self.support.count_elements() == Some(1)
    }
}

fn is_false(b: &bool) -> bool {
    !b
}

/// A solved capacity with its root variables, region classification,
/// second-order log-term coefficient, and optimal run-length laws.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityResult {
    pub sigma: Sigma,
    pub region: RegionLocation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Coefficient of `log n` in the asymptotic expansion of the log-count:
    /// -1 in the interior, -1/2 on edges and for single-constraint
    /// capacities, 0 at corners.
    pub log_term_coefficient: f64,
    /// Set when the point sits within 10x the edge tolerance of two
    /// constraints at once; the log-term coefficient is unreliable there.
    #[serde(skip_serializing_if = "is_false")]
    pub near_corner: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist0: Option<RunDistribution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist1: Option<RunDistribution>,
}

impl CapacityResult {
    fn blank(sigma: Sigma, region: RegionLocation, coeff: f64) -> Self {
        CapacityResult {
            sigma,
            region,
            alpha: None,
            beta: None,
            lambda: None,
            gamma: None,
            log_term_coefficient: coeff,
            near_corner: false,
            dist0: None,
            dist1: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// The characteristic root: the unique `x in (0, 1)` with
/// `sum_{l in L} x^l = 1`. The unconstrained capacity is `-log2` of it.
pub fn solve_lambda(l: &RunSet) -> Result<f64> {
    l.validate_for_capacity()?;
    solve_unit_sum(l)
}

/// Typical relative number of runs: `1 / sum_l l lambda^l`.
pub fn rho_star(l: &RunSet) -> Result<f64> {
    let lambda = solve_lambda(l)?;
    let ps = l.power_sums(lambda)?;
    Ok(1.0 / ps.a1)
}

/// Capacity of sequences constrained in both relative weight and relative
/// number of runs. Total over the plane: outside the admissible region the
/// result carries the negative-infinity sentinel; edges and corners are
/// handled by their own formulas.
pub fn capacity_wr(l: &RunSet, p: ParamPoint) -> Result<CapacityResult> {
    capacity_pair(l, l, p, DEFAULT_EDGE_TOL)
}

/// Like [`capacity_wr`] with runs of zeros constrained by `l0` and runs of
/// ones by `l1`. Reduces to [`capacity_wr`] when the sets coincide.
pub fn capacity_two_sets(l0: &RunSet, l1: &RunSet, p: ParamPoint) -> Result<CapacityResult> {
    capacity_pair(l0, l1, p, DEFAULT_EDGE_TOL)
}

fn capacity_pair(l0: &RunSet, l1: &RunSet, p: ParamPoint, tol: f64) -> Result<CapacityResult> {
    l0.validate_for_capacity()?;
    l1.validate_for_capacity()?;
    let region = classify_pair(l0, l1, p, tol);
    let slacks = region_slacks(l0, l1, p);
    let near_corner = !matches!(region, RegionLocation::Corner | RegionLocation::Outside)
        && (0..4).filter(|&i| slacks[i].abs() <= 10.0 * tol).count() >= 2;

    let w = p.omega();
    let r = p.rho();
    let mut out = match region {
        RegionLocation::Outside => CapacityResult::blank(Sigma::NegInfinity, region, 0.0),
        RegionLocation::Corner => CapacityResult::blank(Sigma::Finite(0.0), region, 0.0),
        RegionLocation::Interior => {
            let m0 = 2.0 * (1.0 - w) / r;
            let m1 = 2.0 * w / r;
            let alpha = solve_mean(l0, m0)?;
            let beta = solve_mean(l1, m1)?;
            let a = l0.power_sums(alpha)?.a;
            let b = l1.power_sums(beta)?.a;
            let sigma = -(1.0 - w) * alpha.log2() - w * beta.log2() + 0.5 * r * (a * b).log2();
            let mut res = CapacityResult::blank(Sigma::Finite(sigma), region, -1.0);
            res.alpha = Some(alpha);
            res.beta = Some(beta);
            res.gamma = Some(1.0 / (a * b).sqrt());
            res.dist0 = Some(RunDistribution::geometric(l0, alpha)?);
            res.dist1 = Some(RunDistribution::geometric(l1, beta)?);
            res
        }
        RegionLocation::EdgeUpperLeft => {
            // Runs of ones pinned at lmin(L1); zeros side free.
            let lm = l1.lmin() as f64;
            let alpha = solve_mean(l0, lm * (1.0 - w) / w)?;
            let a = l0.power_sums(alpha)?.a;
            let sigma = -(1.0 - w) * alpha.log2() + (w / lm) * a.log2();
            let mut res = CapacityResult::blank(Sigma::Finite(sigma), region, -0.5);
            res.alpha = Some(alpha);
            res.dist0 = Some(RunDistribution::geometric(l0, alpha)?);
            res.dist1 = Some(RunDistribution::point_mass(l1.lmin()));
            res
        }
        RegionLocation::EdgeUpperRight => {
            // Runs of zeros pinned at lmin(L0); ones side free.
            let lm = l0.lmin() as f64;
            let beta = solve_mean(l1, lm * w / (1.0 - w))?;
            let b = l1.power_sums(beta)?.a;
            let sigma = -w * beta.log2() + ((1.0 - w) / lm) * b.log2();
            let mut res = CapacityResult::blank(Sigma::Finite(sigma), region, -0.5);
            res.beta = Some(beta);
            res.dist0 = Some(RunDistribution::point_mass(l0.lmin()));
            res.dist1 = Some(RunDistribution::geometric(l1, beta)?);
            res
        }
        RegionLocation::EdgeLowerLeft => {
            // Runs of zeros pinned at lmax(L0) (necessarily bounded here).
            let lm = l0.lmax().expect("lower edge requires bounded zeros set") as f64;
            let beta = solve_mean(l1, lm * w / (1.0 - w))?;
            let b = l1.power_sums(beta)?.a;
            let sigma = -w * beta.log2() + ((1.0 - w) / lm) * b.log2();
            let mut res = CapacityResult::blank(Sigma::Finite(sigma), region, -0.5);
            res.beta = Some(beta);
            res.dist0 = Some(RunDistribution::point_mass(l0.lmax().unwrap()));
            res.dist1 = Some(RunDistribution::geometric(l1, beta)?);
            res
        }
        RegionLocation::EdgeLowerRight => {
            // Runs of ones pinned at lmax(L1).
            let lm = l1.lmax().expect("lower edge requires bounded ones set") as f64;
            let alpha = solve_mean(l0, lm * (1.0 - w) / w)?;
            let a = l0.power_sums(alpha)?.a;
            let sigma = -(1.0 - w) * alpha.log2() + (w / lm) * a.log2();
            let mut res = CapacityResult::blank(Sigma::Finite(sigma), region, -0.5);
            res.alpha = Some(alpha);
            res.dist0 = Some(RunDistribution::geometric(l0, alpha)?);
            res.dist1 = Some(RunDistribution::point_mass(l1.lmax().unwrap()));
            res
        }
    };
    out.near_corner = near_corner;
    Ok(out)
}

/// The weight range over which the weight-only capacity is defined:
/// `[lmin / (lmin + lmax), lmax / (lmin + lmax)]` (all of `[0, 1]` for
/// unbounded sets).
pub fn weight_range(l: &RunSet) -> (f64, f64) {
    match l.lmax() {
        Some(lmax) => {
            let s = (l.lmin() + lmax) as f64;
            (l.lmin() as f64 / s, lmax as f64 / s)
        }
        None => (0.0, 1.0),
    }
}

/// Solves the coupled weight-only system by bisecting on `rho`: at the
/// maximizing `rho` the product `A(alpha) A(beta)` equals 1, and its log is
/// strictly decreasing in `rho`, so the root is unique. Returns
/// `(rho_star_omega, alpha, beta)`.
fn weight_system(l0: &RunSet, l1: &RunSet, w: f64) -> Result<(f64, f64, f64)> {
    let rho_lo = match (l0.lmax(), l1.lmax()) {
        (Some(m0), Some(m1)) => (2.0 * (1.0 - w) / m0 as f64).max(2.0 * w / m1 as f64),
        (Some(m0), None) => 2.0 * (1.0 - w) / m0 as f64,
        (None, Some(m1)) => 2.0 * w / m1 as f64,
        (None, None) => 0.0,
    };
    let rho_hi = (2.0 * (1.0 - w) / l0.lmin() as f64).min(2.0 * w / l1.lmin() as f64);
    if !(rho_lo < rho_hi) {
        return Err(Error::OutOfRange(format!(
            "weight {w} leaves no admissible run density"
        )));
    }
    let span = rho_hi - rho_lo;
    let g = |rho: f64| -> Result<f64> {
        let alpha = solve_mean(l0, 2.0 * (1.0 - w) / rho)?;
        let beta = solve_mean(l1, 2.0 * w / rho)?;
        let a = l0.power_sums(alpha)?.a;
        let b = l1.power_sums(beta)?.a;
        Ok(a.ln() + b.ln())
    };

    // g tends to +inf at rho_lo and -inf at rho_hi; start the probes well
    // inside and expand toward a boundary only until the sign shows up.
    let mut lo = rho_lo + span * 1e-3;
    let mut hi = rho_hi - span * 1e-3;
    let mut ok = false;
    for _ in 0..12 {
        if g(lo)? > 0.0 {
            ok = true;
            break;
        }
        lo = rho_lo + (lo - rho_lo) / 32.0;
    }
    if !ok {
        return Err(Error::ConvergenceFailure("weight system: no lower bracket"));
    }
    ok = false;
    for _ in 0..12 {
        if g(hi)? < 0.0 {
            ok = true;
            break;
        }
        hi = rho_hi - (rho_hi - hi) / 32.0;
    }
    if !ok {
        return Err(Error::ConvergenceFailure("weight system: no upper bracket"));
    }
    for _ in 0..crate::solve::MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    let rho = 0.5 * (lo + hi);
    let alpha = solve_mean(l0, 2.0 * (1.0 - w) / rho)?;
    let beta = solve_mean(l1, 2.0 * w / rho)?;
    Ok((rho, alpha, beta))
}

/// The run density maximizing the capacity at fixed weight.
pub fn rho_star_omega(l: &RunSet, omega: f64) -> Result<f64> {
    l.validate_for_capacity()?;
    let (wlo, whi) = weight_range(l);
    if !(omega > wlo && omega < whi) {
        return Err(Error::OutOfRange(format!(
            "omega = {omega} not inside ({wlo}, {whi})"
        )));
    }
    let (rho, _, _) = weight_system(l, l, omega)?;
    Ok(rho)
}

/// Capacity of constant-weight sequences (runs unconstrained):
/// `sigma = -(1 - omega) log2 alpha - omega log2 beta` with
/// `A(alpha) A(beta) = 1` and the mean-balance condition.
pub fn capacity_w(l: &RunSet, omega: f64) -> Result<CapacityResult> {
    l.validate_for_capacity()?;
    let tol = DEFAULT_EDGE_TOL;
    let (wlo, whi) = weight_range(l);
    if omega < wlo - tol || omega > whi + tol {
        return Err(Error::OutOfRange(format!(
            "omega = {omega} outside [{wlo}, {whi}]"
        )));
    }
    if omega <= wlo + tol || omega >= whi - tol {
        let mut res = CapacityResult::blank(Sigma::Finite(0.0), RegionLocation::Corner, 0.0);
        if let Some(lmax) = l.lmax() {
            // the extreme weights force degenerate laws on both sides
            let (z, o) = if omega <= wlo + tol {
                (lmax, l.lmin())
            } else {
                (l.lmin(), lmax)
            };
            res.dist0 = Some(RunDistribution::point_mass(z));
            res.dist1 = Some(RunDistribution::point_mass(o));
        }
        return Ok(res);
    }
    let (_, alpha, beta) = weight_system(l, l, omega)?;
    let sigma = -(1.0 - omega) * alpha.log2() - omega * beta.log2();
    let mut res = CapacityResult::blank(Sigma::Finite(sigma), RegionLocation::Interior, -0.5);
    res.alpha = Some(alpha);
    res.beta = Some(beta);
    res.dist0 = Some(RunDistribution::geometric(l, alpha)?);
    res.dist1 = Some(RunDistribution::geometric(l, beta)?);
    Ok(res)
}

/// Capacity of sequences with a fixed relative number of runs (weight
/// unconstrained): `sigma = -log2 alpha + rho log2 A(alpha)` with the run
/// mean pinned at `1 / rho`.
pub fn capacity_r(l: &RunSet, rho: f64) -> Result<CapacityResult> {
    l.validate_for_capacity()?;
    let tol = DEFAULT_EDGE_TOL;
    let rlo = l.lmax().map_or(0.0, |m| 1.0 / m as f64);
    let rhi = 1.0 / l.lmin() as f64;
    if rho < rlo - tol || rho > rhi + tol {
        return Err(Error::OutOfRange(format!(
            "rho = {rho} outside [{rlo}, {rhi}]"
        )));
    }
    if rho >= rhi - tol {
        let mut res = CapacityResult::blank(Sigma::Finite(0.0), RegionLocation::Corner, 0.0);
        let pm = RunDistribution::point_mass(l.lmin());
        res.dist0 = Some(pm.clone());
        res.dist1 = Some(pm);
        return Ok(res);
    }
    if rho <= rlo + tol {
        let mut res = CapacityResult::blank(Sigma::Finite(0.0), RegionLocation::Corner, 0.0);
        if let Some(lmax) = l.lmax() {
            let pm = RunDistribution::point_mass(lmax);
            res.dist0 = Some(pm.clone());
            res.dist1 = Some(pm);
        }
        return Ok(res);
    }
    let alpha = solve_mean(l, 1.0 / rho)?;
    let a = l.power_sums(alpha)?.a;
    let sigma = -alpha.log2() + rho * a.log2();
    let mut res = CapacityResult::blank(Sigma::Finite(sigma), RegionLocation::Interior, -0.5);
    res.alpha = Some(alpha);
    let d = RunDistribution::geometric(l, alpha)?;
    res.dist0 = Some(d.clone());
    res.dist1 = Some(d);
    Ok(res)
}

/// Capacity of constant-weight sub-block constrained sequences: blocks of
/// length `lb`, each of weight at least `wb`, total relative weight `omega`.
pub fn capacity_sec(lb: u64, wb: u64, omega: f64) -> Result<CapacityResult> {
    if lb == 0 || wb > lb {
        return Err(Error::BadParameters(format!(
            "need 0 < lb and wb <= lb, got lb = {lb}, wb = {wb}"
        )));
    }
    let tol = DEFAULT_EDGE_TOL;
    let wlo = wb as f64 / lb as f64;
    if omega < wlo - tol || omega > 1.0 + tol {
        return Err(Error::OutOfRange(format!(
            "omega = {omega} outside [{wlo}, 1]"
        )));
    }
    if omega <= wlo + tol || omega >= 1.0 - tol {
        return Ok(CapacityResult::blank(
            Sigma::Finite(0.0),
            RegionLocation::Corner,
            0.0,
        ));
    }
    let fam = sec_family(lb, wb);
    let beta = solve_mean(&fam, omega * lb as f64)?;
    let sigma = -omega * beta.log2() + fam.value(beta).log2() / lb as f64;
    let mut res = CapacityResult::blank(Sigma::Finite(sigma), RegionLocation::Interior, -0.5);
    res.beta = Some(beta);
    Ok(res)
}

fn sec_family(lb: u64, wb: u64) -> WeightedExponents {
    let terms: Vec<(f64, f64)> = (wb..=lb)
        .map(|j| {
            let c: f64 = (1..=j).map(|i| (lb - j + i) as f64 / i as f64).product();
            (j as f64, c)
        })
        .collect();
    WeightedExponents::new(terms)
}

/// The weight maximizing the sub-block capacity and the maximum itself,
/// `(omega_star, sigma_max)` with `sigma_max = (1 / lb) log2 sum_j C(lb, j)`.
pub fn sec_max(lb: u64, wb: u64) -> Result<(f64, f64)> {
    if lb == 0 || wb > lb {
        return Err(Error::BadParameters(format!(
            "need 0 < lb and wb <= lb, got lb = {lb}, wb = {wb}"
        )));
    }
    let (mut s0, mut s1) = (0.0, 0.0);
    for j in wb..=lb {
        let c: f64 = (1..=j).map(|i| (lb - j + i) as f64 / i as f64).product();
        s0 += c;
        s1 += j as f64 * c;
    }
    Ok((s1 / (lb as f64 * s0), s0.log2() / lb as f64))
}

/// Growth rate of the number of q-ary sequences with fixed relative
/// Manhattan weight `omega in [0, q-1]`.
pub fn capacity_manhattan(q: u64, omega: f64) -> Result<CapacityResult> {
    if q < 2 {
        return Err(Error::BadParameters(format!("need q >= 2, got {q}")));
    }
    let tol = DEFAULT_EDGE_TOL;
    let top = (q - 1) as f64;
    if omega < -tol || omega > top + tol {
        return Err(Error::OutOfRange(format!(
            "omega = {omega} outside [0, {top}]"
        )));
    }
    if omega <= tol || omega >= top - tol {
        return Ok(CapacityResult::blank(
            Sigma::Finite(0.0),
            RegionLocation::Corner,
            0.0,
        ));
    }
    let fam = WeightedExponents::new((0..q).map(|i| (i as f64, 1.0)).collect());
    let alpha = solve_mean(&fam, omega)?;
    let mu = -omega * alpha.log2() + fam.value(alpha).log2();
    let mut res = CapacityResult::blank(Sigma::Finite(mu), RegionLocation::Interior, -0.5);
    res.alpha = Some(alpha);
    Ok(res)
}

/// Which constraint the maxentropic run-length laws must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistConstraint {
    /// No constraint: `P(l) = lambda^l`.
    Unconstrained,
    /// Fixed relative weight.
    Weight(f64),
    /// Fixed relative number of runs: mean run length `1 / rho`.
    Runs(f64),
    /// Fixed weight and run density: means `2 (1 - omega) / rho` on zeros
    /// and `2 omega / rho` on ones.
    WeightRuns(f64, f64),
}

/// The optimal run-length law(s) under the given constraint. The second law
/// is present when zeros and ones get different laws (weight-constrained
/// cases); degenerate edge cases produce point masses.
pub fn optimal_distributions(
    l: &RunSet,
    constraint: DistConstraint,
) -> Result<(RunDistribution, Option<RunDistribution>)> {
    l.validate_for_capacity()?;
    match constraint {
        DistConstraint::Unconstrained => {
            let lambda = solve_lambda(l)?;
            Ok((RunDistribution::geometric(l, lambda)?, None))
        }
        DistConstraint::Runs(rho) => {
            let res = capacity_r(l, rho)?;
            match res.dist0 {
                Some(d) => Ok((d, None)),
                None => Err(Error::OutOfRange(format!(
                    "no run-length law at rho = {rho}"
                ))),
            }
        }
        DistConstraint::Weight(omega) => {
            let res = capacity_w(l, omega)?;
            match (res.dist0, res.dist1) {
                (Some(d0), Some(d1)) => Ok((d0, Some(d1))),
                _ => Err(Error::OutOfRange(format!(
                    "no run-length laws at omega = {omega}"
                ))),
            }
        }
        DistConstraint::WeightRuns(omega, rho) => {
            let p = ParamPoint::new(omega, rho)?;
            let res = capacity_pair(l, l, p, DEFAULT_EDGE_TOL)?;
            match (res.dist0, res.dist1) {
                (Some(d0), Some(d1)) => Ok((d0, Some(d1))),
                _ => Err(Error::OutOfRange(format!(
                    "({omega}, {rho}) admits no run-length laws"
                ))),
            }
        }
    }
}

impl CapacityResult {
    /// Entropy-rate form of the capacity when both laws are present:
    /// `(rho / 2) (H(P0) + H(P1))` for the two-sided constraint.
    pub fn entropy_rate(&self, rho: f64) -> Option<f64> {
        match (&self.dist0, &self.dist1) {
            (Some(d0), Some(d1)) => Some(0.5 * rho * (d0.entropy() + d1.entropy())),
            _ => None,
        }
    }
}
