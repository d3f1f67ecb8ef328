//! Monotone one-dimensional root finding: bracketed bisection refined by
//! Newton steps. Every root problem in this crate reduces to inverting a
//! strictly increasing "mean" function, so a sign-preserving bracket always
//! exists and convergence is guaranteed.

use crate::constraints::{RunSet, RunSetKind};
use crate::error::{Error, Result};

pub(crate) const MAX_ITER: usize = 200;
// Newton converges quadratically once bracketed, so pushing to a few ulps
// costs only an iteration or two beyond the nominal 1e-13 contract.
const REL_TOL: f64 = 4.0 * f64::EPSILON;

/// A family `x -> sum_j c_j x^(e_j)` with positive weights, exposing the mean
/// `m(x) = sum c_j e_j x^(e_j) / sum c_j x^(e_j)`, which increases strictly
/// from the smallest exponent (x -> 0) to the largest (x -> sup of domain).
pub(crate) trait MeanFamily {
    /// Smallest exponent.
    fn exp_lo(&self) -> f64;
    /// Largest exponent; `None` when unbounded (mean then diverges at `x -> 1`).
    fn exp_hi(&self) -> Option<f64>;
    /// Supremum of the evaluation domain (1.0 for unbounded families).
    fn x_sup(&self) -> f64;
    fn mean(&self, x: f64) -> f64;
    /// d mean / dx, strictly positive on the open domain.
    fn mean_deriv(&self, x: f64) -> f64;
}

/// Finite list of (exponent, weight) terms; weights strictly positive,
/// exponents strictly increasing.
pub(crate) struct WeightedExponents {
    terms: Vec<(f64, f64)>,
}

impl WeightedExponents {
    pub(crate) fn new(terms: Vec<(f64, f64)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|t| t.1 > 0.0));
        WeightedExponents { terms }
    }

    /// Moments around a reference exponent so that small and large `x` stay
    /// inside f64 range: returns (s0, s1, s2) with
    /// `sk = sum c_j e_j^k x^(e_j - ref)`.
    fn factored_moments(&self, x: f64) -> (f64, f64, f64) {
        let r = if x <= 1.0 {
            self.terms.first().unwrap().0
        } else {
            self.terms.last().unwrap().0
        };
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for &(e, c) in &self.terms {
            let t = c * x.powf(e - r);
            s0 += t;
            s1 += e * t;
            s2 += e * e * t;
        }
        (s0, s1, s2)
    }

    /// `sum c_j x^(e_j)`, unfactored.
    pub(crate) fn value(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(e, c)| c * x.powf(e)).sum()
    }
}

impl MeanFamily for WeightedExponents {
    fn exp_lo(&self) -> f64 {
        self.terms.first().unwrap().0
    }
    fn exp_hi(&self) -> Option<f64> {
        Some(self.terms.last().unwrap().0)
    }
    fn x_sup(&self) -> f64 {
        f64::INFINITY
    }
    fn mean(&self, x: f64) -> f64 {
        let (s0, s1, _) = self.factored_moments(x);
        s1 / s0
    }
    fn mean_deriv(&self, x: f64) -> f64 {
        let (s0, s1, s2) = self.factored_moments(x);
        let m = s1 / s0;
        (s2 / s0 - m * m) / x
    }
}

impl MeanFamily for RunSet {
    fn exp_lo(&self) -> f64 {
        self.lmin() as f64
    }
    fn exp_hi(&self) -> Option<f64> {
        self.lmax().map(|m| m as f64)
    }
    fn x_sup(&self) -> f64 {
        if self.is_bounded() {
            f64::INFINITY
        } else {
            1.0
        }
    }
    fn mean(&self, x: f64) -> f64 {
        match self.kind() {
            RunSetKind::Interval { lo, hi: None } => *lo as f64 + x / (1.0 - x),
            _ => {
                let terms: Vec<(f64, f64)> = self
                    .elements_capped(u64::MAX)
                    .into_iter()
                    .map(|e| (e as f64, 1.0))
                    .collect();
                WeightedExponents::new(terms).mean(x)
            }
        }
    }
    fn mean_deriv(&self, x: f64) -> f64 {
        match self.kind() {
            RunSetKind::Interval { lo: _, hi: None } => {
                let om = 1.0 - x;
                1.0 / (om * om)
            }
            _ => {
                let terms: Vec<(f64, f64)> = self
                    .elements_capped(u64::MAX)
                    .into_iter()
                    .map(|e| (e as f64, 1.0))
                    .collect();
                WeightedExponents::new(terms).mean_deriv(x)
            }
        }
    }
}

/// Solves `mean(x) = target` for a strictly increasing mean.
///
/// The target must lie strictly between the smallest and largest exponent
/// (for unbounded families: above the smallest exponent).
pub(crate) fn solve_mean<F: MeanFamily>(fam: &F, target: f64) -> Result<f64> {
    if !(target > fam.exp_lo()) {
        return Err(Error::OutOfRange(format!(
            "target mean {target} not above the smallest exponent {}",
            fam.exp_lo()
        )));
    }
    if let Some(hi) = fam.exp_hi() {
        if fam.x_sup().is_infinite() && !(target < hi) {
            return Err(Error::OutOfRange(format!(
                "target mean {target} not below the largest exponent {hi}"
            )));
        }
    }

    // Bracket the root.
    let mut lo;
    let mut hi;
    if fam.x_sup().is_finite() {
        // unbounded exponent set on x in (0, 1)
        lo = 0.5;
        hi = 1.0 - 1e-9;
        while fam.mean(hi) < target {
            let gap = (1.0 - hi) / 64.0;
            if gap < 1e-17 {
                return Err(Error::ConvergenceFailure("target mean too large"));
            }
            hi = 1.0 - gap;
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        while fam.mean(hi) < target {
            hi *= 2.0;
            if hi > 1e120 {
                return Err(Error::ConvergenceFailure("upper bracket blew up"));
            }
        }
    }
    while fam.mean(lo) > target {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::ConvergenceFailure("lower bracket vanished"));
        }
    }

    let mut x = 0.5 * (lo + hi);
    let mut best_x = x;
    let mut best_f = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let f = fam.mean(x) - target;
        if f.abs() < best_f {
            best_f = f.abs();
            best_x = x;
        }
        if f.abs() <= REL_TOL * target.abs() {
            return Ok(x);
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = fam.mean_deriv(x);
        let newton = x - f / d;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= f64::EPSILON * x.abs() {
            break; // at float resolution; the residual cannot improve
        }
        x = next;
    }
    // Near the domain boundary the mean is so steep that one ulp of x moves
    // it by more than the requested tolerance; accept the best iterate if it
    // is within a few ulps of the attainable resolution.
    let granularity = fam.mean_deriv(best_x) * (f64::EPSILON * best_x.abs());
    if best_f <= (1e-9 * target.abs().max(1.0)).max(8.0 * granularity) {
        Ok(best_x)
    } else {
        Err(Error::ConvergenceFailure("mean solve stalled"))
    }
}

/// Solves `A(x) = 1` on `(0, x_sup)` for a run set: the characteristic root.
pub(crate) fn solve_unit_sum(l: &RunSet) -> Result<f64> {
    let eval = |x: f64| -> (f64, f64) {
        let ps = l.power_sums(x).expect("x inside domain");
        (ps.a, ps.a1 / x)
    };
    let mut lo = 0.0_f64;
    let mut hi = if l.is_bounded() {
        // A(1) = |L| >= 2 > 1, so the root is below 1.
        1.0
    } else {
        let mut h = 1.0 - 1e-12;
        while eval(h).0 < 1.0 {
            h = 1.0 - (1.0 - h) / 64.0;
        }
        h
    };

    let mut x = 0.5 * (lo + hi);
    let mut best_x = x;
    let mut best_f = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let (a, da) = eval(x);
        let f = a - 1.0;
        if f.abs() < best_f {
            best_f = f.abs();
            best_x = x;
        }
        if f.abs() <= 1e-15 {
            return Ok(x);
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - f / da;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= f64::EPSILON * x.abs() {
            break;
        }
        x = next;
    }
    if best_f <= 1e-13 {
        Ok(best_x)
    } else {
        Err(Error::ConvergenceFailure("unit-sum solve stalled"))
    }
}
