//! Exact arbitrary-precision enumeration of constrained sequences and
//! integer compositions.
//!
//! Two independent computation paths are kept on purpose. [`census`] fills
//! the (weight, runs) table with the two-blocks-at-a-time recurrence, which
//! is the defining one; [`count_wr_fast`] evaluates the composition-product
//! identity and is the path that scales (memory `O(n * r)` instead of the
//! full cube). Their agreement is a standing test. [`oracle_census`] is a
//! bit-twiddling brute force that shares no code with either.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::json;

use crate::constraints::{RunSet, RunSetKind};
use crate::error::{Error, Result};

/// Exact count table of RLL sequences of one length, indexed by
/// (Hamming weight, number of runs). Entries of zero are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    n: u64,
    table: BTreeMap<(u64, u64), BigUint>,
    total: BigUint,
}

impl Census {
    fn from_table(n: u64, table: BTreeMap<(u64, u64), BigUint>) -> Self {
        let total = table.values().sum();
        Census { n, table, total }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Grand total over all (w, r) cells.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Count of sequences with weight `w` and `r` runs.
    pub fn count(&self, w: u64, r: u64) -> BigUint {
        self.table.get(&(w, r)).cloned().unwrap_or_default()
    }

    /// Non-zero cells in (w, r) order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, &BigUint)> {
        self.table.iter().map(|(&(w, r), c)| (w, r, c))
    }

    /// Marginal over runs: count of weight-`w` sequences.
    pub fn weight_marginal(&self, w: u64) -> BigUint {
        self.table
            .iter()
            .filter(|(&(tw, _), _)| tw == w)
            .map(|(_, c)| c)
            .sum()
    }

    /// Marginal over weights: count of `r`-run sequences.
    pub fn runs_marginal(&self, r: u64) -> BigUint {
        self.table
            .iter()
            .filter(|(&(_, tr), _)| tr == r)
            .map(|(_, c)| c)
            .sum()
    }

    /// CSV with header `n,w,r,count`; counts as decimal strings.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("n,w,r,count\n");
        for (w, r, c) in self.entries() {
            out.push_str(&format!("{},{},{},{}\n", self.n, w, r, c));
        }
        out
    }

    /// JSON of the form `{"n":..., "entries":[{"w":..,"r":..,"count":"<decimal>"}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries()
            .map(|(w, r, c)| json!({"w": w, "r": r, "count": c.to_string()}))
            .collect();
        json!({"n": self.n, "entries": entries})
    }
}

/// Incremental counter for `S_L(n)`, the number of length-n RLL strings.
///
/// Internally tracks the one-sided recurrence
/// `U(m) = sum_{l in L, l <= m} U(m - l)`, `U(0) = 1`; the answer doubles it
/// for the choice of the first symbol. Interval sets use a prefix-sum
/// telescope so that unbounded sets cost O(n) additions overall.
pub struct TotalCounter {
    l: RunSet,
    u: Vec<BigUint>,
    prefix: Vec<BigUint>,
}

impl TotalCounter {
    pub fn new(l: &RunSet) -> Self {
        TotalCounter {
            l: l.clone(),
            u: vec![BigUint::one()],
            prefix: vec![BigUint::one()],
        }
    }

    fn extend_to(&mut self, n: u64) {
        let n = n as usize;
        while self.u.len() <= n {
            let m = self.u.len();
            let val = match self.l.kind() {
                RunSetKind::ExplicitFinite(v) => {
                    let mut s = BigUint::zero();
                    for &ell in v {
                        let ell = ell as usize;
                        if ell <= m {
                            s += &self.u[m - ell];
                        }
                    }
                    s
                }
                RunSetKind::Interval { lo, hi } => {
                    let lo = *lo as usize;
                    let mut s = if lo <= m {
                        self.prefix[m - lo].clone()
                    } else {
                        BigUint::zero()
                    };
                    if let Some(h) = hi {
                        let h = *h as usize;
                        if h < m {
                            s -= &self.prefix[m - h - 1];
                        }
                    }
                    s
                }
            };
            self.prefix.push(&self.prefix[m - 1] + &val);
            self.u.push(val);
        }
    }

    pub fn total(&mut self, n: u64) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        self.extend_to(n);
        &self.u[n as usize] * 2u32
    }
}

/// Exact number of binary length-`n` strings whose maximal runs all have
/// lengths in `l`. `S_L(0) = 1` by convention.
pub fn count_total(l: &RunSet, n: u64) -> BigUint {
    TotalCounter::new(l).total(n)
}

/// Table of compositions `C_L(n, m)`: ordered m-tuples of parts from `L`
/// summing to `n`. Rows are materialized lazily and grow on demand.
pub struct CompositionTable {
    parts: RunSet,
    /// rows[m][a] = C(a, m)
    rows: Vec<Vec<BigUint>>,
}

impl CompositionTable {
    pub fn new(parts: &RunSet) -> Self {
        CompositionTable {
            parts: parts.clone(),
            rows: vec![vec![BigUint::one()]],
        }
    }

    pub fn parts(&self) -> &RunSet {
        &self.parts
    }

    fn ensure(&mut self, a_max: u64, m_max: u64) {
        let a_max = a_max as usize;
        // Row 0: C(a, 0) = [a == 0].
        while self.rows[0].len() <= a_max {
            self.rows[0].push(BigUint::zero());
        }
        for m in 1..=(m_max as usize) {
            if self.rows.len() <= m {
                self.rows.push(Vec::new());
            }
            while self.rows[m].len() <= a_max {
                let a = self.rows[m].len();
                let val = match self.parts.kind() {
                    RunSetKind::ExplicitFinite(v) => {
                        let mut s = BigUint::zero();
                        for &ell in v {
                            let ell = ell as usize;
                            if ell <= a {
                                s += &self.rows[m - 1][a - ell];
                            }
                        }
                        s
                    }
                    RunSetKind::Interval { lo, hi } => {
                        let lo = *lo as usize;
                        let mut s = if a >= 1 {
                            self.rows[m][a - 1].clone()
                        } else {
                            BigUint::zero()
                        };
                        if lo <= a {
                            s += &self.rows[m - 1][a - lo];
                        }
                        if let Some(h) = hi {
                            let h = *h as usize;
                            if h < a {
                                s -= &self.rows[m - 1][a - h - 1];
                            }
                        }
                        s
                    }
                };
                self.rows[m].push(val);
            }
        }
    }

    /// `C_L(a, m)`, growing the table as needed.
    pub fn get(&mut self, a: u64, m: u64) -> BigUint {
        self.ensure(a, m);
        self.rows[m as usize][a as usize].clone()
    }
}

/// Number of `m`-part compositions of `n` with parts in `l`; `C_L(0, 0) = 1`.
pub fn compositions(l: &RunSet, n: u64, m: u64) -> BigUint {
    CompositionTable::new(l).get(n, m)
}

/// `S_L(n, w, r)` through the composition identity, with separate part sets
/// for runs of zeros (`t0`, consuming `n - w`) and runs of ones (`t1`,
/// consuming `w`).
pub(crate) fn count_wr_with_tables(
    t0: &mut CompositionTable,
    t1: &mut CompositionTable,
    n: u64,
    w: u64,
    r: u64,
) -> BigUint {
    if w > n {
        return BigUint::zero();
    }
    let z = n - w;
    if r == 0 {
        return if n == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    let half = r / 2;
    if r.is_multiple_of(2) {
        t0.get(z, half) * t1.get(w, half) * 2u32
    } else {
        t0.get(z, half) * t1.get(w, half + 1) + t0.get(z, half + 1) * t1.get(w, half)
    }
}

/// Like [`count_wr_with_tables`] with one shared part set.
pub(crate) fn count_wr_single(t: &mut CompositionTable, n: u64, w: u64, r: u64) -> BigUint {
    if w > n {
        return BigUint::zero();
    }
    let z = n - w;
    if r == 0 {
        return if n == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    let half = r / 2;
    if r.is_multiple_of(2) {
        t.get(z, half) * t.get(w, half) * 2u32
    } else {
        t.get(z, half) * t.get(w, half + 1) + t.get(z, half + 1) * t.get(w, half)
    }
}

/// `S_L(n, w, r)` via the composition identity. Scales to large `n`
/// (memory `O(n * r)`), and equals the [`census`] table entry exactly.
pub fn count_wr_fast(l: &RunSet, n: u64, w: u64, r: u64) -> BigUint {
    count_wr_single(&mut CompositionTable::new(l), n, w, r)
}

/// Count with runs of zeros constrained to `l0` and runs of ones to `l1`.
/// Reduces to [`count_wr_fast`] when the two sets coincide.
pub fn count_two_sets(l0: &RunSet, l1: &RunSet, n: u64, w: u64, r: u64) -> BigUint {
    let mut t0 = CompositionTable::new(l0);
    let mut t1 = CompositionTable::new(l1);
    count_wr_with_tables(&mut t0, &mut t1, n, w, r)
}

/// `S_L(n, w, *)`: the weight marginal, summed over run counts through the
/// composition fast path so it scales to large `n`.
pub fn count_weight_marginal(l: &RunSet, n: u64, w: u64) -> BigUint {
    let mut t = CompositionTable::new(l);
    let mut sum = BigUint::zero();
    for r in 0..=n {
        sum += count_wr_single(&mut t, n, w, r);
    }
    sum
}

/// `S_L(n, *, r) = 2 C_L(n, r)`: sequences with exactly `r` runs.
/// The factor 2 selects the first symbol. For `r = 0` this is 1 iff `n = 0`.
pub fn count_runs_marginal(l: &RunSet, n: u64, r: u64) -> BigUint {
    if r == 0 {
        return if n == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    compositions(l, n, r) * 2u32
}

/// Full (weight, runs) census of length-`n` RLL sequences, filled with the
/// defining recurrence that appends a block of zeros and a block of ones:
/// `S(n, w, r) = sum_{l, l'} S(n - l - l', w - l', r - 2)`.
///
/// Base layers `r = 0, 1, 2` are written down directly (empty string, one
/// run, two runs); the recurrence is exact for `r >= 3`. Time and memory are
/// cubic-ish in `n`; use [`count_wr_fast`] beyond a few hundred.
pub fn census(l: &RunSet, n: u64) -> Census {
    let nn = n as usize;
    let elems: Vec<usize> = l.elements_capped(n).iter().map(|&e| e as usize).collect();
    let member = membership_vec(l, n);
    let mut table: BTreeMap<(u64, u64), BigUint> = BTreeMap::new();

    let r_max = if l.lmin() > 0 { n / l.lmin() } else { 0 };

    // grid[m][w] for the current layer; we keep the previous two layers.
    let zero_grid = || vec![vec![BigUint::zero(); nn + 1]; nn + 1];

    // r = 0
    let mut two_back = zero_grid();
    two_back[0][0] = BigUint::one();
    if n == 0 {
        table.insert((0, 0), BigUint::one());
        return Census::from_table(n, table);
    }

    // r = 1: a single run of zeros (w = 0) or of ones (w = m).
    let mut one_back = zero_grid();
    for m in 1..=nn {
        if member[m] {
            one_back[m][0] = BigUint::one();
            one_back[m][m] = BigUint::one();
        }
    }
    for (w, v) in one_back[nn].iter().enumerate() {
        if !v.is_zero() {
            table.insert((w as u64, 1), v.clone());
        }
    }

    for r in 2..=r_max {
        let mut cur = zero_grid();
        if r == 2 {
            // one run of ones (length w) next to one run of zeros (m - w)
            for m in 2..=nn {
                for w in 1..m {
                    if member[w] && member[m - w] {
                        cur[m][w] = BigUint::from(2u32);
                    }
                }
            }
        } else {
            // v[m][w] = sum_{l'} two_back[m - l'][w - l']   (append the run of ones)
            let mut v = zero_grid();
            for m in 0..=nn {
                for w in 0..=m {
                    if two_back[m][w].is_zero() {
                        continue;
                    }
                    for &lp in &elems {
                        if m + lp <= nn && w + lp <= nn {
                            let add = two_back[m][w].clone();
                            v[m + lp][w + lp] += add;
                        }
                    }
                }
            }
            // cur[m][w] = sum_{l} v[m - l][w]               (append the run of zeros)
            for m in 0..=nn {
                for w in 0..=m {
                    if v[m][w].is_zero() {
                        continue;
                    }
                    for &lz in &elems {
                        if m + lz <= nn {
                            let add = v[m][w].clone();
                            cur[m + lz][w] += add;
                        }
                    }
                }
            }
        }
        for (w, v) in cur[nn].iter().enumerate() {
            if !v.is_zero() {
                table.insert((w as u64, r), v.clone());
            }
        }
        two_back = one_back;
        one_back = cur;
    }

    Census::from_table(n, table)
}

fn membership_vec(l: &RunSet, n: u64) -> Vec<bool> {
    let mut member = vec![false; n as usize + 1];
    for e in l.elements_capped(n) {
        member[e as usize] = true;
    }
    member
}

/// Count of concatenations of `n / lb` blocks of length `lb`, each of weight
/// at least `wb`, with total weight `w`.
pub fn count_sec(lb: u64, wb: u64, n: u64, w: u64) -> Result<BigUint> {
    if lb == 0 || wb > lb {
        return Err(Error::BadParameters(format!(
            "need 0 < lb and wb <= lb, got lb = {lb}, wb = {wb}"
        )));
    }
    if !n.is_multiple_of(lb) {
        return Err(Error::NotBlockAligned { lb, n });
    }
    let binoms: Vec<BigUint> = (0..=lb)
        .map(|j| crate::numeric::binomial_big(lb, j))
        .collect();
    let blocks = n / lb;
    let wn = w.min(n) as usize;
    let mut cur = vec![BigUint::zero(); wn + 1];
    cur[0] = BigUint::one();
    for _ in 0..blocks {
        let mut next = vec![BigUint::zero(); wn + 1];
        for v in 0..=wn {
            if cur[v].is_zero() {
                continue;
            }
            for j in wb..=lb {
                let ju = j as usize;
                if v + ju <= wn {
                    next[v + ju] += &cur[v] * &binoms[j as usize];
                }
            }
        }
        cur = next;
    }
    if w > n {
        return Ok(BigUint::zero());
    }
    Ok(cur[w as usize].clone())
}

/// Number of sequences over `{0, ..., q-1}` of length `n` with coordinate
/// sum `w` (weak compositions of `w` into `n` parts below `q`).
pub fn count_manhattan(q: u64, n: u64, w: u64) -> Result<BigUint> {
    if q < 2 {
        return Err(Error::BadParameters(format!("need q >= 2, got {q}")));
    }
    if w > n.saturating_mul(q - 1) {
        return Ok(BigUint::zero());
    }
    let wn = w as usize;
    let q = q as usize;
    let mut cur = vec![BigUint::zero(); wn + 1];
    cur[0] = BigUint::one();
    for _ in 0..n {
        // next[v] = sum_{i=0..min(q-1, v)} cur[v - i], via sliding prefix sums
        let mut prefix = Vec::with_capacity(wn + 1);
        let mut acc = BigUint::zero();
        for c in cur.iter() {
            acc += c;
            prefix.push(acc.clone());
        }
        let mut next = vec![BigUint::zero(); wn + 1];
        for (v, slot) in next.iter_mut().enumerate() {
            let upper = &prefix[v];
            *slot = if v >= q {
                upper - &prefix[v - q]
            } else {
                upper.clone()
            };
        }
        cur = next;
    }
    Ok(cur[wn].clone())
}

const ORACLE_MAX_N: u64 = 24;

/// Brute-force census: enumerates all `2^n` strings, filters by run-length
/// membership, tallies by (weight, runs). Independent of the recurrence
/// paths by construction; capped at `n = 24`.
pub fn oracle_census(l: &RunSet, n: u64) -> Result<Census> {
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    // Local membership table, built straight from the set definition.
    let mut allowed = vec![false; n as usize + 1];
    match l.kind() {
        RunSetKind::ExplicitFinite(v) => {
            for &e in v {
                if e <= n {
                    allowed[e as usize] = true;
                }
            }
        }
        RunSetKind::Interval { lo, hi } => {
            let top = hi.map_or(n, |h| h.min(n));
            for e in *lo..=top {
                allowed[e as usize] = true;
            }
        }
    }

    let nn = n as u32;
    let mut table: BTreeMap<(u64, u64), BigUint> = BTreeMap::new();
    for mask in 0u64..(1u64 << nn) {
        let w = mask.count_ones() as u64;
        let mut runs = 0u64;
        let mut ok = true;
        let mut i = 0u32;
        while i < nn {
            let bit = (mask >> i) & 1;
            let mut j = i + 1;
            while j < nn && (mask >> j) & 1 == bit {
                j += 1;
            }
            let len = (j - i) as usize;
            if !allowed[len] {
                ok = false;
                break;
            }
            runs += 1;
            i = j;
        }
        if ok {
            *table.entry((w, runs)).or_default() += 1u32;
        }
    }
    Ok(Census::from_table(n, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::RunSet;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn count_total_examples() {
        assert_eq!(count_total(&RunSet::naturals(), 10), big(1024));
        let l12 = RunSet::from_elements([1, 2]).unwrap();
        assert_eq!(count_total(&l12, 4), big(10));
        let l23 = RunSet::from_elements([2, 3]).unwrap();
        assert_eq!(count_total(&l23, 1), big(0));
        assert_eq!(count_total(&l23, 0), big(1));
    }

    #[test]
    fn census_examples() {
        let naturals = RunSet::naturals();
        let c = census(&naturals, 4);
        assert_eq!(c.count(2, 2), big(2)); // 0011 and 1100
        assert_eq!(c.count(0, 1), big(1)); // 0000
        let l12 = RunSet::from_elements([1, 2]).unwrap();
        let c = census(&l12, 4);
        assert_eq!(c.total(), &big(10));
        assert_eq!(&c.count(2, 2) + &c.count(2, 3) + c.count(2, 4), {
            // all weight-2 strings with runs in {1,2}: brute force gives 4
            oracle_census(&l12, 4).unwrap().weight_marginal(2)
        });
    }

    #[test]
    fn census_matches_total_recurrence() {
        for l in [
            RunSet::naturals(),
            RunSet::from_elements([1, 2]).unwrap(),
            RunSet::from_elements([2, 3]).unwrap(),
            RunSet::interval(2, None).unwrap(),
        ] {
            for n in 0..=14 {
                assert_eq!(census(&l, n).total(), &count_total(&l, n), "n = {n}");
            }
        }
    }

    #[test]
    fn fast_path_examples() {
        let naturals = RunSet::naturals();
        assert_eq!(count_wr_fast(&naturals, 4, 2, 2), big(2));
        let l12 = RunSet::from_elements([1, 2]).unwrap();
        // single run of ones
        assert_eq!(count_wr_fast(&l12, 2, 2, 1), big(1));
        assert_eq!(count_wr_fast(&l12, 3, 3, 1), big(0));
        // empty string
        assert_eq!(count_wr_fast(&l12, 0, 0, 0), big(1));
    }

    #[test]
    fn weight_marginal_matches_census_and_binomial() {
        for l in [
            RunSet::naturals(),
            RunSet::from_elements([1, 2]).unwrap(),
            RunSet::from_elements([2, 3]).unwrap(),
        ] {
            for n in 0..=14u64 {
                let c = census(&l, n);
                for w in 0..=n {
                    assert_eq!(count_weight_marginal(&l, n, w), c.weight_marginal(w));
                }
            }
        }
        // every weight-w string is admissible under the unconstrained set
        for n in [10u64, 100, 400] {
            assert_eq!(
                count_weight_marginal(&RunSet::naturals(), n, n / 2),
                crate::numeric::binomial_big(n, n / 2)
            );
        }
    }

    #[test]
    fn runs_marginal_examples() {
        let naturals = RunSet::naturals();
        assert_eq!(count_runs_marginal(&naturals, 4, 2), big(6));
        assert_eq!(count_runs_marginal(&naturals, 4, 1), big(2));
        let l23 = RunSet::from_elements([2, 3]).unwrap();
        assert_eq!(count_runs_marginal(&l23, 5, 2), big(4));
    }

    #[test]
    fn composition_examples() {
        let l12 = RunSet::from_elements([1, 2]).unwrap();
        assert_eq!(compositions(&l12, 4, 3), big(3));
        assert_eq!(compositions(&l12, 0, 0), big(1));
        assert_eq!(compositions(&RunSet::naturals(), 4, 2), big(3));
    }

    #[test]
    fn compositions_interval_telescope_matches_direct_sum() {
        // interval {2..4} vs the same set written out explicitly
        let interval = RunSet::interval(2, Some(4)).unwrap();
        let explicit = RunSet::from_elements([2, 3, 4]).unwrap();
        for n in 0..=30 {
            for m in 0..=12 {
                assert_eq!(
                    compositions(&interval, n, m),
                    compositions(&explicit, n, m),
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn two_sets_examples() {
        let naturals = RunSet::naturals();
        assert_eq!(count_two_sets(&naturals, &naturals, 4, 2, 2), big(2));
        let l0 = RunSet::permissive_from_elements([2]).unwrap();
        let l1 = RunSet::permissive_from_elements([1]).unwrap();
        assert_eq!(count_two_sets(&l0, &l1, 3, 1, 2), big(2)); // 001, 100
        assert_eq!(count_two_sets(&l0, &l1, 3, 2, 2), big(0));
    }

    #[test]
    fn two_sets_brute_force_cross_check() {
        // independent enumeration with per-symbol constraints
        let l0 = RunSet::permissive_from_elements([2]).unwrap();
        let l1 = RunSet::permissive_from_elements([1, 3]).unwrap();
        for n in 0..=12u64 {
            let mut counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
            for mask in 0u64..(1 << n) {
                let mut ok = true;
                let mut runs = 0;
                let mut i = 0;
                while i < n {
                    let bit = (mask >> i) & 1;
                    let mut j = i + 1;
                    while j < n && (mask >> j) & 1 == bit {
                        j += 1;
                    }
                    let len = j - i;
                    let set_ok = if bit == 0 {
                        len == 2
                    } else {
                        len == 1 || len == 3
                    };
                    if !set_ok {
                        ok = false;
                        break;
                    }
                    runs += 1;
                    i = j;
                }
                if ok {
                    *counts.entry((mask.count_ones() as u64, runs)).or_default() += 1;
                }
            }
            for w in 0..=n {
                for r in 0..=n {
                    let expect = counts.get(&(w, r)).copied().unwrap_or(0);
                    assert_eq!(
                        count_two_sets(&l0, &l1, n, w, r),
                        big(expect),
                        "n={n} w={w} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn sec_examples() {
        assert_eq!(count_sec(2, 1, 4, 2).unwrap(), big(4));
        assert_eq!(count_sec(2, 0, 2, 1).unwrap(), big(2));
        assert_eq!(count_sec(2, 2, 4, 4).unwrap(), big(1));
        assert!(matches!(
            count_sec(2, 1, 5, 2),
            Err(Error::NotBlockAligned { .. })
        ));
    }

    #[test]
    fn sec_unconstrained_is_binomial() {
        for n in (2..=20u64).step_by(2) {
            for w in 0..=n {
                assert_eq!(
                    count_sec(2, 0, n, w).unwrap(),
                    crate::numeric::binomial_big(n, w)
                );
            }
        }
    }

    #[test]
    fn manhattan_examples() {
        assert_eq!(count_manhattan(3, 2, 2).unwrap(), big(3));
        assert_eq!(count_manhattan(2, 5, 2).unwrap(), big(10));
        assert_eq!(count_manhattan(7, 9, 0).unwrap(), big(1));
        assert!(count_manhattan(1, 3, 1).is_err());
    }

    #[test]
    fn manhattan_binary_is_binomial() {
        for n in 0..=30u64 {
            for w in 0..=n {
                assert_eq!(
                    count_manhattan(2, n, w).unwrap(),
                    crate::numeric::binomial_big(n, w),
                    "n={n} w={w}"
                );
            }
        }
    }

    #[test]
    fn manhattan_oracle_small() {
        // exhaustive enumeration over A_q^n for q <= 4, n <= 6
        for q in 2..=4u64 {
            for n in 0..=6u64 {
                let mut tallies = BTreeMap::new();
                let total = (q as u128).pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut sum = 0u64;
                    for _ in 0..n {
                        sum += (c % q as u128) as u64;
                        c /= q as u128;
                    }
                    *tallies.entry(sum).or_insert(0u64) += 1;
                }
                for w in 0..=(q - 1) * n {
                    let expect = tallies.get(&w).copied().unwrap_or(0);
                    assert_eq!(count_manhattan(q, n, w).unwrap(), big(expect));
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let naturals = RunSet::naturals();
        assert_eq!(oracle_census(&naturals, 3).unwrap().total(), &big(8));
        let l12 = RunSet::from_elements([1, 2]).unwrap();
        let oc = oracle_census(&l12, 4).unwrap();
        assert_eq!(oc.total(), &big(10));
        let l23 = RunSet::from_elements([2, 3]).unwrap();
        assert_eq!(oracle_census(&l23, 1).unwrap().total(), &big(0));
        assert!(matches!(
            oracle_census(&naturals, 25),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn census_zero_bounds_invariant() {
        // non-zero cells satisfy the run/weight bounds
        let l = RunSet::from_elements([2, 3]).unwrap();
        let n = 12;
        let c = census(&l, n);
        for (w, r, count) in c.entries() {
            assert!(!count.is_zero());
            let lmin = 2;
            let lmax = 3;
            assert!(r * lmin <= n && n <= r * lmax);
            assert!((r / 2) * lmin <= w && w <= r.div_ceil(2) * lmax);
            assert!((r / 2) * lmin <= n - w && n - w <= r.div_ceil(2) * lmax);
        }
    }

    #[test]
    fn complement_symmetry_exact() {
        for l in [
            RunSet::from_elements([1, 2]).unwrap(),
            RunSet::from_elements([1, 4]).unwrap(),
            RunSet::interval(2, None).unwrap(),
        ] {
            for n in 0..=14 {
                let c = census(&l, n);
                for (w, r, count) in c.entries() {
                    assert_eq!(&c.count(n - w, r), count, "n={n} w={w} r={r}");
                }
            }
        }
    }

    #[test]
    fn csv_and_json_shapes() {
        let l12 = RunSet::from_elements([1, 2]).unwrap();
        let c = census(&l12, 3);
        let csv = c.to_csv_string();
        assert!(csv.starts_with("n,w,r,count\n"));
        assert!(csv.contains("3,1,2,2")); // 001 and 100
        let js = c.to_json();
        assert_eq!(js["n"], 3);
        assert_eq!(js["entries"].as_array().unwrap().len(), 4);
        assert!(js["entries"][0]["count"].is_string());
    }
}
