//! Run-length constraint sets and the admissible (omega, rho) parameter region.
//!
//! A [`RunSet`] is the set `L` of allowed run lengths, either an explicit
//! finite list or an integer interval whose upper end may be infinite.
//! Everything downstream (exact counting, capacity solvers, typicality)
//! consumes run sets through the power sums `A(x) = sum x^l`,
//! `A1(x) = sum l x^l`, `A2(x) = sum l^2 x^l`, which are evaluated exactly:
//! finite sets term by term, infinite intervals through geometric-tail
//! closed forms.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used to snap solver outputs onto region edges.
pub const DEFAULT_EDGE_TOL: f64 = 1e-9;

/// Shape of a run-length set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RunSetKind {
    /// Strictly increasing, duplicate-free list of allowed run lengths.
    ExplicitFinite(Vec<u64>),
    /// All integers in `lo..=hi`; `hi = None` means unbounded above.
    Interval { lo: u64, hi: Option<u64> },
}

/// A validated set of allowed run lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunSet {
    kind: RunSetKind,
    lmin: u64,
    lmax: Option<u64>,
}

impl RunSet {
    /// Builds a run set from an explicit list of lengths.
    ///
    /// The input is sorted and deduplicated. Requires at least two distinct
    /// lengths and gcd 1, so that every asymptotic statement holds without
    /// restricting `n` to a sub-lattice.
    pub fn from_elements<I: IntoIterator<Item = u64>>(elements: I) -> Result<Self> {
        let set = Self::permissive_from_elements(elements)?;
        set.check_capacity_invariants()?;
        Ok(set)
    }

    /// Builds the interval set `{lo, lo+1, ..., hi}`; `hi = None` is unbounded.
    pub fn interval(lo: u64, hi: Option<u64>) -> Result<Self> {
        let set = Self::permissive_interval(lo, hi)?;
        set.check_capacity_invariants()?;
        Ok(set)
    }

    /// The unconstrained set `{1, 2, ...}`.
    pub fn naturals() -> Self {
        RunSet {
            kind: RunSetKind::Interval { lo: 1, hi: None },
            lmin: 1,
            lmax: None,
        }
    }

    /// Like [`RunSet::from_elements`] but skips the two-element and gcd
    /// requirements. Exact counting is well defined for any non-empty set of
    /// positive lengths (e.g. per-symbol constraints such as `L0 = {2}`);
    /// capacity solvers re-check the full invariants on entry.
    pub fn permissive_from_elements<I: IntoIterator<Item = u64>>(elements: I) -> Result<Self> {
        let mut v: Vec<u64> = elements.into_iter().collect();
        if v.is_empty() {
            return Err(Error::EmptySet);
        }
        if v.contains(&0) {
            return Err(Error::NonPositiveElement);
        }
        v.sort_unstable();
        v.dedup();
        let lmin = v[0];
        let lmax = *v.last().unwrap();
        Ok(RunSet {
            kind: RunSetKind::ExplicitFinite(v),
            lmin,
            lmax: Some(lmax),
        })
    }

    /// Like [`RunSet::interval`] but allows singleton intervals.
    pub fn permissive_interval(lo: u64, hi: Option<u64>) -> Result<Self> {
        if lo == 0 {
            return Err(Error::NonPositiveElement);
        }
        if let Some(h) = hi {
            if h < lo {
                return Err(Error::BadInterval);
            }
        }
        Ok(RunSet {
            kind: RunSetKind::Interval { lo, hi },
            lmin: lo,
            lmax: hi,
        })
    }

    fn check_capacity_invariants(&self) -> Result<()> {
        match self.count_elements() {
            Some(0) => return Err(Error::EmptySet),
            Some(1) => return Err(Error::SingletonSet),
            _ => {}
        }
        let g = self.gcd_value();
        if g > 1 {
            return Err(Error::NonCoprime(g));
        }
        Ok(())
    }

    /// Re-validates the invariants the capacity solvers rely on.
    pub fn validate_for_capacity(&self) -> Result<()> {
        self.check_capacity_invariants()
    }

    pub fn kind(&self) -> &RunSetKind {
        &self.kind
    }

    /// Smallest allowed run length.
    pub fn lmin(&self) -> u64 {
        self.lmin
    }

    /// Supremum of allowed run lengths; `None` means unbounded.
    pub fn lmax(&self) -> Option<u64> {
        self.lmax
    }

    pub fn is_bounded(&self) -> bool {
        self.lmax.is_some()
    }

    /// Number of elements, `None` if infinite.
    pub fn count_elements(&self) -> Option<u64> {
        match &self.kind {
            RunSetKind::ExplicitFinite(v) => Some(v.len() as u64),
            RunSetKind::Interval { lo, hi } => hi.map(|h| h - lo + 1),
        }
    }

    pub fn gcd_value(&self) -> u64 {
        match &self.kind {
            RunSetKind::ExplicitFinite(v) => v.iter().fold(0u64, |g, &e| g.gcd(&e)),
            RunSetKind::Interval { lo, hi } => match hi {
                Some(h) if h == lo => *lo,
                // An interval with at least two consecutive integers has gcd 1.
                _ => 1,
            },
        }
    }

    pub fn contains(&self, ell: u64) -> bool {
        match &self.kind {
            RunSetKind::ExplicitFinite(v) => v.binary_search(&ell).is_ok(),
            RunSetKind::Interval { lo, hi } => ell >= *lo && hi.is_none_or(|h| ell <= h),
        }
    }

    /// Elements not exceeding `cap`, ascending. Counting paths use this to
    /// cap unbounded sets at the string length (runs cannot be longer than
    /// the string, so the cap is exact, not a truncation).
    pub fn elements_capped(&self, cap: u64) -> Vec<u64> {
        match &self.kind {
            RunSetKind::ExplicitFinite(v) => v.iter().copied().filter(|&e| e <= cap).collect(),
            RunSetKind::Interval { lo, hi } => {
                let top = hi.map_or(cap, |h| h.min(cap));
                if *lo > top {
                    Vec::new()
                } else {
                    (*lo..=top).collect()
                }
            }
        }
    }

    /// The translated set `L + s`.
    pub fn shifted(&self, s: u64) -> RunSet {
        match &self.kind {
            RunSetKind::ExplicitFinite(v) => {
                RunSet::permissive_from_elements(v.iter().map(|&e| e + s))
                    .expect("shift of a valid set is valid")
            }
            RunSetKind::Interval { lo, hi } => {
                RunSet::permissive_interval(lo + s, hi.map(|h| h + s))
                    .expect("shift of a valid set is valid")
            }
        }
    }

    /// Parses the textual grammar shared by the front ends: a comma list
    /// like `1,2,5` or `interval:lo:hi` with `hi = inf` for unbounded sets.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        Self::parse_spec_impl(spec, false)
    }

    /// Like [`RunSet::parse_spec`] with the permissive invariants.
    pub fn parse_spec_permissive(spec: &str) -> Result<Self> {
        Self::parse_spec_impl(spec, true)
    }

    fn parse_spec_impl(spec: &str, permissive: bool) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("interval:") {
            let mut it = rest.split(':');
            let lo = it
                .next()
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or(Error::BadInterval)?;
            let hi = match it.next() {
                Some("inf") | None => None,
                Some(s) => Some(s.parse::<u64>().map_err(|_| Error::BadInterval)?),
            };
            if it.next().is_some() {
                return Err(Error::BadInterval);
            }
            if permissive {
                Self::permissive_interval(lo, hi)
            } else {
                Self::interval(lo, hi)
            }
        } else {
            let elements: std::result::Result<Vec<u64>, _> =
                spec.split(',').map(|s| s.trim().parse::<u64>()).collect();
            let elements = elements.map_err(|_| Error::NonPositiveElement)?;
            if permissive {
                Self::permissive_from_elements(elements)
            } else {
                Self::from_elements(elements)
            }
        }
    }

    /// Exact evaluation of `A(x)`, `A1(x)`, `A2(x)`.
    ///
    /// Finite sets are summed term by term; unbounded intervals use the
    /// geometric-tail closed forms and are only defined on `x in (0, 1)`.
    pub fn power_sums(&self, x: f64) -> Result<PowerSums> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::DomainError(x));
        }
        match &self.kind {
            RunSetKind::Interval { lo, hi: None } => {
                if x >= 1.0 {
                    return Err(Error::DomainError(x));
                }
                Ok(tail_power_sums(*lo, x))
            }
            _ => {
                let (mut a, mut a1, mut a2) = (0.0, 0.0, 0.0);
                for ell in self.iter_all() {
                    let lf = ell as f64;
                    let t = x.powi(ell as i32);
                    a += t;
                    a1 += lf * t;
                    a2 += lf * lf * t;
                }
                Ok(PowerSums { a, a1, a2 })
            }
        }
    }

    fn iter_all(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.kind {
            RunSetKind::ExplicitFinite(v) => Box::new(v.iter().copied()),
            RunSetKind::Interval { lo, hi } => {
                let h = hi.expect("iter_all only on bounded sets");
                Box::new(*lo..=h)
            }
        }
    }
}

/// `A(x) = sum_{l >= lo} x^l` and friends, in closed form.
fn tail_power_sums(lo: u64, x: f64) -> PowerSums {
    let m = lo as f64;
    let om = 1.0 - x;
    let t = x.powi(lo as i32);
    let a = t / om;
    let a1 = t * (m * om + x) / (om * om);
    let a2 = t * (m * m * om * om + 2.0 * m * x * om + x * (1.0 + x)) / (om * om * om);
    PowerSums { a, a1, a2 }
}

/// The power sums of a run set at a given evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSums {
    /// `A(x) = sum_{l in L} x^l`
    pub a: f64,
    /// `A1(x) = sum_{l in L} l x^l`
    pub a1: f64,
    /// `A2(x) = sum_{l in L} l^2 x^l`
    pub a2: f64,
}

impl PowerSums {
    /// Mean run length `A1/A` of the law `P(l) ∝ x^l`.
    pub fn mean(&self) -> f64 {
        self.a1 / self.a
    }
}

/// Free-function form of [`RunSet::power_sums`].
pub fn power_sums(l: &RunSet, x: f64) -> Result<PowerSums> {
    l.power_sums(x)
}

/// A point (omega, rho): relative Hamming weight and relative number of runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamPoint {
    omega: f64,
    rho: f64,
}

impl ParamPoint {
    pub fn new(omega: f64, rho: f64) -> Result<Self> {
        if !omega.is_finite() || !(0.0..=1.0).contains(&omega) {
            return Err(Error::OutOfRange(format!("omega = {omega} not in [0, 1]")));
        }
        if !rho.is_finite() || rho < 0.0 {
            return Err(Error::OutOfRange(format!("rho = {rho} must be >= 0")));
        }
        Ok(ParamPoint { omega, rho })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Where a parameter point sits relative to the admissible region.
///
/// Edges are named by which constraint is active:
/// upper-left `rho = 2 omega / lmin`, upper-right `rho = 2 (1 - omega) / lmin`,
/// lower-left `rho = 2 (1 - omega) / lmax`, lower-right `rho = 2 omega / lmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionLocation {
    #[serde(rename = "interior")]
    Interior,
    #[serde(rename = "edge_ul")]
    EdgeUpperLeft,
    #[serde(rename = "edge_ur")]
    EdgeUpperRight,
    #[serde(rename = "edge_ll")]
    EdgeLowerLeft,
    #[serde(rename = "edge_lr")]
    EdgeLowerRight,
    #[serde(rename = "corner")]
    Corner,
    #[serde(rename = "outside")]
    Outside,
}

impl RegionLocation {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLocation::Interior => "interior",
            RegionLocation::EdgeUpperLeft => "edge_ul",
            RegionLocation::EdgeUpperRight => "edge_ur",
            RegionLocation::EdgeLowerLeft => "edge_ll",
            RegionLocation::EdgeLowerRight => "edge_lr",
            RegionLocation::Corner => "corner",
            RegionLocation::Outside => "outside",
        }
    }
}

/// Signed slacks of the four region constraints, non-negative inside.
/// Order: upper-left, upper-right, lower-left, lower-right.
///
/// The general two-set form is used; for a single set pass it twice.
/// Runs of zeros are constrained by `l0`, runs of ones by `l1`, so the
/// upper-left and lower-right constraints involve `l1` and the other two `l0`.
pub(crate) fn region_slacks(l0: &RunSet, l1: &RunSet, p: ParamPoint) -> [f64; 4] {
    let w = p.omega();
    let r = p.rho();
    let ul = 2.0 * w / l1.lmin() as f64 - r;
    let ur = 2.0 * (1.0 - w) / l0.lmin() as f64 - r;
    let ll = match l0.lmax() {
        Some(m) => r - 2.0 * (1.0 - w) / m as f64,
        None => r,
    };
    let lr = match l1.lmax() {
        Some(m) => r - 2.0 * w / m as f64,
        None => r,
    };
    [ul, ur, ll, lr]
}

pub(crate) fn classify_pair(l0: &RunSet, l1: &RunSet, p: ParamPoint, tol: f64) -> RegionLocation {
    let slacks = region_slacks(l0, l1, p);
    if slacks.iter().any(|&s| s < -tol) {
        return RegionLocation::Outside;
    }
    let active: Vec<usize> = (0..4).filter(|&i| slacks[i].abs() <= tol).collect();
    match active.as_slice() {
        [] => RegionLocation::Interior,
        [0] => RegionLocation::EdgeUpperLeft,
        [1] => RegionLocation::EdgeUpperRight,
        [2] => RegionLocation::EdgeLowerLeft,
        [3] => RegionLocation::EdgeLowerRight,
        _ => RegionLocation::Corner,
    }
}

/// Classifies a parameter point against the admissible region of `l`.
///
/// Total function: points violating any constraint by more than `tol` are
/// `Outside`; a single active constraint names the edge; two or more active
/// constraints (including the degenerate `rho = 0` boundary of unbounded
/// sets) make a `Corner`.
pub fn classify(l: &RunSet, p: ParamPoint, tol: f64) -> RegionLocation {
    classify_pair(l, l, p, tol)
}

impl std::str::FromStr for RunSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RunSet::parse_spec(s)
    }
}

// --- serde representation ------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RunSetRepr {
    Finite { elements: Vec<u64> },
    Interval { lo: u64, hi: HiRepr },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum HiRepr {
    Num(u64),
    Word(String),
}

impl Serialize for RunSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match &self.kind {
            RunSetKind::ExplicitFinite(v) => RunSetRepr::Finite {
                elements: v.clone(),
            },
            RunSetKind::Interval { lo, hi } => RunSetRepr::Interval {
                lo: *lo,
                hi: match hi {
                    Some(h) => HiRepr::Num(*h),
                    None => HiRepr::Word("inf".to_owned()),
                },
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RunSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = RunSetRepr::deserialize(d)?;
        let set = match repr {
            RunSetRepr::Finite { elements } => RunSet::permissive_from_elements(elements),
            RunSetRepr::Interval { lo, hi } => {
                let hi = match hi {
                    HiRepr::Num(h) => Some(h),
                    HiRepr::Word(w) if w == "inf" => None,
                    HiRepr::Word(w) => return Err(D::Error::custom(format!("bad hi: {w}"))),
                };
                RunSet::permissive_interval(lo, hi)
            }
        };
        set.map_err(D::Error::custom)
    }
}
