//! Exact counting, capacities, typicality statistics, and channel-code
//! bounds for binary runlength-limited (RLL) sequences.
//!
//! An RLL sequence is a binary string in which every maximal run of
//! identical symbols has a length from a prescribed set `L`. This crate
//! provides:
//!
//! - [`constraints`]: run-length sets, the admissible (weight, runs)
//!   parameter region, and exact power-sum evaluation;
//! - [`counting`]: exact big-integer censuses by (length, weight, runs),
//!   restricted integer compositions, sub-block constrained and
//!   Manhattan-weight counting, plus a brute-force oracle;
//! - [`capacity`]: numerical capacity functions with their root variables
//!   and maxentropic run-length distributions;
//! - [`typicality`]: typical parameters, exact concentration masses, and a
//!   seeded sampler;
//! - [`asymptotics`]: confrontation of exact counts with capacity
//!   predictions, extracting the `log n` correction coefficient;
//! - [`bounds`]: deletion-code, sparse-error sphere-packing, and timing-
//!   channel bound calculators.
//!
//! All capacities are in bits (base-2 logs). All counts are exact.

#![forbid(unsafe_code)]
// `!(x > 0.0)` style comparisons are deliberate: they reject NaN along with
// the out-of-range values, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bounds;
pub mod capacity;
pub mod constraints;
pub mod counting;
pub mod error;
pub mod numeric;
mod solve;
pub mod typicality;

pub use constraints::{classify, ParamPoint, PowerSums, RegionLocation, RunSet, DEFAULT_EDGE_TOL};
pub use error::{Error, Result};
