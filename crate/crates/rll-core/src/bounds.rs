//! Code-size bounds for weight/run-preserving channels: the deletion-code
//! sandwich for runlength-constrained inputs, the volume exponent and
//! sphere-packing rate for sparse error patterns, and the timing-channel
//! sandwich for q-ary sequences.
//!
//! The underlying statements are asymptotic relations; the reports evaluate
//! their formula bodies at finite n and are labeled as such, without
//! claiming exact finite-n validity.

use serde_json::json;

use crate::capacity::solve_lambda;
use crate::constraints::RunSet;
use crate::counting::TotalCounter;
use crate::error::{Error, Result};
use crate::numeric::{binary_entropy, log2_big, log2_factorial};

const NOTE: &str = "asymptotic-form evaluation";

/// Lower/upper bound values (base-2 logs) with their formula provenance.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundReport {
    pub formula_id: String,
    pub log2_lower: f64,
    pub log2_upper: f64,
    pub params: serde_json::Value,
    /// Exact asymptotic value when the sandwich closes (deletions with
    /// `k = inf`, `t = 1`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_asymptotic: Option<f64>,
    /// Set when `t > d`: the bounds then hold only for the restricted
    /// (run-preserving) deletion channel.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub run_preserving_only: bool,
    pub note: &'static str,
}

impl BoundReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Reusable deletion-bound evaluator for one `(d, k)` constraint; caches the
/// solved constants and the exact count table across calls.
pub struct DeletionChannel {
    d: u64,
    k: Option<u64>,
    lambda: f64,
    rho_star: f64,
    counter: TotalCounter,
}

impl DeletionChannel {
    /// Input constraint: runs of at least `d + 1` and at most `k + 1`
    /// symbols, i.e. length set `{d+1, ..., k+1}`; `k = None` is unbounded.
    pub fn new(d: u64, k: Option<u64>) -> Result<Self> {
        if let Some(k) = k {
            if k <= d {
                return Err(Error::BadParameters(format!(
                    "need d < k, got d = {d}, k = {k}"
                )));
            }
        }
        let l = RunSet::permissive_interval(d + 1, k.map(|k| k + 1))?;
        l.validate_for_capacity()?;
        let lambda = solve_lambda(&l)?;
        let ps = l.power_sums(lambda)?;
        Ok(DeletionChannel {
            d,
            k,
            lambda,
            rho_star: 1.0 / ps.a1,
            counter: TotalCounter::new(&l),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn rho_star(&self) -> f64 {
        self.rho_star
    }

    /// Sandwich on the size of an optimal code correcting `t` deletions:
    /// `S_L(n) / (rho* n)^t` from below, times
    /// `lambda^t t! / (1 - lambda^(d+1))^t` from above.
    pub fn report(&mut self, n: u64, t: u64) -> Result<BoundReport> {
        if n == 0 {
            return Err(Error::BadParameters("need n >= 1".to_string()));
        }
        let log2_s = log2_big(&self.counter.total(n));
        if !log2_s.is_finite() {
            return Err(Error::BadParameters(format!(
                "no admissible sequences of length {n}"
            )));
        }
        let tf = t as f64;
        let lower = log2_s - tf * (self.rho_star * n as f64).log2();
        let upper = lower + tf * self.lambda.log2() + log2_factorial(t)
            - tf * (1.0 - self.lambda.powi(self.d as i32 + 1)).log2();
        let exact = if self.k.is_none() && t == 1 {
            Some(log2_s - (n as f64).log2() + (self.d as f64 + 1.0 / (1.0 - self.lambda)).log2())
        } else {
            None
        };
        Ok(BoundReport {
            formula_id: "deletion_sandwich".to_string(),
            log2_lower: lower,
            log2_upper: upper,
            params: json!({
                "d": self.d,
                "k": self.k.map_or(json!("inf"), |k| json!(k)),
                "n": n,
                "t": t,
                "lambda": self.lambda,
                "rho_star": self.rho_star,
            }),
            exact_asymptotic: exact,
            run_preserving_only: t > self.d,
            note: NOTE,
        })
    }
}

/// One-shot form of [`DeletionChannel::report`].
pub fn deletion_bounds(d: u64, k: Option<u64>, n: u64, t: u64) -> Result<BoundReport> {
    DeletionChannel::new(d, k)?.report(n, t)
}

/// Growth rate of the output-ball volume under sparse error patterns with
/// inter-error gap at least `d`: piecewise
/// `(1 - d rho) H(rho / (1 - d rho))` below the breakpoint, `-log2 lambda`
/// above, where `lambda^(d+1) + lambda - 1 = 0`.
pub fn volume_exponent(d: u64, rho: f64) -> Result<f64> {
    let top = 1.0 / (d as f64 + 1.0);
    if !(0.0..=top + 1e-12).contains(&rho) {
        return Err(Error::OutOfRange(format!("rho = {rho} outside [0, {top}]")));
    }
    let lambda = solve_lambda(&RunSet::permissive_interval(d + 1, None)?)?;
    let df = d as f64;
    let breakpoint = (1.0 - lambda) / (1.0 + (1.0 - lambda) * df);
    if rho < breakpoint {
        Ok((1.0 - df * rho) * binary_entropy(rho / (1.0 - df * rho)))
    } else {
        Ok(-lambda.log2())
    }
}

/// The breakpoint of [`volume_exponent`], where the volume saturates at the
/// full constrained-noise capacity.
pub fn volume_breakpoint(d: u64) -> Result<f64> {
    let lambda = solve_lambda(&RunSet::permissive_interval(d + 1, None)?)?;
    Ok((1.0 - lambda) / (1.0 + (1.0 - lambda) * d as f64))
}

/// Sphere-packing upper bound on the rate of codes correcting a fraction
/// `rho` of sparse errors: `1 - v_d(rho)`.
pub fn sphere_packing_rate(d: u64, rho: f64) -> Result<f64> {
    let v = volume_exponent(d, rho)?;
    debug_assert!(v <= 1.0 + 1e-12, "volume exponent cannot exceed 1 bit");
    Ok(1.0 - v)
}

/// Sandwich on the size of an optimal q-ary code correcting `t` timing
/// (particle-shift) errors.
pub fn timing_bounds(q: u64, n: u64, t: u64) -> Result<BoundReport> {
    if q < 2 || t == 0 || n == 0 {
        return Err(Error::BadParameters(format!(
            "need q >= 2, t >= 1, n >= 1; got q = {q}, t = {t}, n = {n}"
        )));
    }
    // Packing-density constants for Manhattan balls.
    let c_t = match t {
        1 => 0.5,
        2 => 0.25,
        _ => 1.0 / (2.0 * t as f64 + 1.0),
    };
    let qf = q as f64;
    let tf = t as f64;
    let base = n as f64 * qf.log2() - tf * (n as f64).log2();
    let lower = base + tf + c_t.log2() - tf * (qf - 1.0).log2();
    let upper = base + 2.0 * tf * qf.log2() + log2_factorial(t) - tf - 2.0 * tf * (qf - 1.0).log2();
    Ok(BoundReport {
        formula_id: "timing_sandwich".to_string(),
        log2_lower: lower,
        log2_upper: upper,
        params: json!({"q": q, "n": n, "t": t, "c_t": c_t}),
        exact_asymptotic: None,
        run_preserving_only: false,
        note: NOTE,
    })
}
