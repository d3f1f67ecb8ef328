//! Small numeric helpers shared across modules: base-2 logs of
//! arbitrary-precision integers, exact big-integer ratios as floats,
//! binary entropy, and big binomials.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// `log2` of an arbitrary-precision integer with ~1e-16 relative accuracy.
///
/// The top 64 bits carry the mantissa; the rest contributes only through the
/// exponent, so the absolute error stays far below 1e-10 even for counts
/// with hundreds of digits. Returns `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    shift as f64 + (top as f64).log2()
}

/// `num / den` as f64, accurate to ~1 ulp, for arbitrarily large operands.
///
/// Panics if `den` is zero.
pub fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "ratio_f64: zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    // Scale so the quotient keeps >= 64 significant bits.
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = (64 + db - nb).max(0) as u64;
    let q = (num << shift) / den;
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    qf * 2.0_f64.powi(-(shift as i32))
}

/// Binary entropy `H(p)` in bits; `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Exact binomial coefficient.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for i in 1..=k {
        r = r * BigUint::from(n - k + i) / BigUint::from(i);
    }
    r
}

/// `log2(t!)`.
pub fn log2_factorial(t: u64) -> f64 {
    (2..=t).map(|i| (i as f64).log2()).sum()
}
