//! Property tests for the module invariants: random run sets and parameter
//! points, with oracles built independently of the code under test.

use num_bigint::BigUint;
use proptest::prelude::*;

use rll_core::asymptotics::{fit_log_correction, FitTarget};
use rll_core::capacity::{capacity_wr, optimal_distributions, solve_lambda, DistConstraint};
use rll_core::counting::{census, compositions, count_wr_fast, oracle_census, CompositionTable};
use rll_core::numeric::log2_big;
use rll_core::{classify, ParamPoint, RegionLocation, RunSet, DEFAULT_EDGE_TOL};

/// Strategy: a valid run set over {1..8} with at least two elements, gcd 1.
fn runset_strategy() -> impl Strategy<Value = RunSet> {
    proptest::collection::btree_set(1u64..=8, 2..5)
        .prop_filter_map("needs gcd 1", |set| RunSet::from_elements(set).ok())
}

/// The admissible region in its (omega-range, rho-range) form, written out
/// independently of the slack-based classifier.
fn region_contains(l: &RunSet, w: f64, r: f64) -> bool {
    let lmin = l.lmin() as f64;
    let (wlo, whi, rlo) = match l.lmax() {
        Some(m) => {
            let m = m as f64;
            (lmin / (lmin + m), m / (lmin + m), 2.0 * w.max(1.0 - w) / m)
        }
        None => (0.0, 1.0, 0.0),
    };
    if !(wlo..=whi).contains(&w) {
        return false;
    }
    let rhi = 2.0 * w.min(1.0 - w) / lmin;
    (rlo..=rhi).contains(&r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // The two region descriptions agree away from the tolerance band.
    #[test]
    fn classify_agrees_with_double_description(
        l in runset_strategy(),
        w in 0.0f64..=1.0,
        r in 0.0f64..=1.0,
    ) {
        let loc = classify(&l, ParamPoint::new(w, r).unwrap(), DEFAULT_EDGE_TOL);
        let inside = region_contains(&l, w, r);
        match loc {
            RegionLocation::Outside => prop_assert!(!inside || near_boundary(&l, w, r)),
            RegionLocation::Interior => prop_assert!(inside),
            _ => {} // edge/corner classifications sit inside the closed region by construction
        }
    }

    // Power sums on explicit finite sets equal independent term-by-term
    // summation bit for bit.
    #[test]
    fn power_sums_match_term_sums(
        l in runset_strategy(),
        x in 0.01f64..=3.0,
    ) {
        let ps = l.power_sums(x).unwrap();
        let (mut a, mut a1, mut a2) = (0.0f64, 0.0f64, 0.0f64);
        for e in l.elements_capped(u64::MAX) {
            let t = x.powi(e as i32);
            a += t;
            a1 += e as f64 * t;
            a2 += (e * e) as f64 * t;
        }
        prop_assert_eq!(ps.a.to_bits(), a.to_bits());
        prop_assert_eq!(ps.a1.to_bits(), a1.to_bits());
        prop_assert_eq!(ps.a2.to_bits(), a2.to_bits());
    }

    // The mean run length is strictly increasing between its limits.
    #[test]
    fn mean_is_increasing(l in runset_strategy()) {
        let mut prev = f64::NEG_INFINITY;
        for i in 1..=60 {
            let x = i as f64 * 0.05;
            let ps = l.power_sums(x).unwrap();
            let mean = ps.a1 / ps.a;
            prop_assert!(mean > prev);
            prop_assert!(mean > l.lmin() as f64);
            prop_assert!(mean < l.lmax().unwrap() as f64);
            prev = mean;
        }
    }

    // Census equals the brute-force oracle on random sets and sizes.
    #[test]
    fn census_matches_oracle(l in runset_strategy(), n in 0u64..=12) {
        prop_assert_eq!(census(&l, n), oracle_census(&l, n).unwrap());
    }

    // Complement symmetry and the composition identity hold cell by cell.
    #[test]
    fn census_cell_identities(l in runset_strategy(), n in 0u64..=16) {
        let c = census(&l, n);
        for (w, r, v) in c.entries() {
            prop_assert_eq!(&c.count(n - w, r), v);
            prop_assert_eq!(&count_wr_fast(&l, n, w, r), v);
        }
        for r in 1..=n {
            prop_assert_eq!(c.runs_marginal(r), compositions(&l, n, r) * 2u32);
        }
    }

    // Non-zero census cells respect the run/weight bounds.
    #[test]
    fn census_cells_respect_bounds(l in runset_strategy(), n in 1u64..=16) {
        let lmin = l.lmin();
        let lmax = l.lmax().unwrap();
        for (w, r, _) in census(&l, n).entries() {
            prop_assert!(r * lmin <= n && n <= r * lmax);
            prop_assert!((r / 2) * lmin <= w && w <= r.div_ceil(2) * lmax);
            prop_assert!((r / 2) * lmin <= n - w && n - w <= r.div_ceil(2) * lmax);
        }
    }

    // Interior capacity results carry consistent root variables: the mean
    // equations hold to 1e-12 relative and the gamma relation is exact-ish.
    #[test]
    fn interior_roots_are_residual_tight(
        l in runset_strategy(),
        wu in 0.1f64..=0.9,
        ru in 0.1f64..=0.9,
    ) {
        let (wlo, whi) = rll_core::capacity::weight_range(&l);
        let w = wlo + (whi - wlo) * wu;
        let lmin = l.lmin() as f64;
        let lmax = l.lmax().unwrap() as f64;
        let rlo = 2.0 * w.max(1.0 - w) / lmax;
        let rhi = 2.0 * w.min(1.0 - w) / lmin;
        let r = rlo + (rhi - rlo) * ru;
        let res = capacity_wr(&l, ParamPoint::new(w, r).unwrap()).unwrap();
        if res.region != RegionLocation::Interior {
            return Ok(());
        }
        let alpha = res.alpha.unwrap();
        let beta = res.beta.unwrap();
        let pa = l.power_sums(alpha).unwrap();
        let pb = l.power_sums(beta).unwrap();
        let m0 = 2.0 * (1.0 - w) / r;
        let m1 = 2.0 * w / r;
        prop_assert!((pa.a1 / pa.a - m0).abs() <= 1e-12 * m0);
        prop_assert!((pb.a1 / pb.a - m1).abs() <= 1e-12 * m1);
        let gamma = res.gamma.unwrap();
        prop_assert!((pa.a * pb.a * gamma * gamma - 1.0).abs() <= 1e-10);
        // distributions normalize and carry the constrained means
        let d0 = res.dist0.unwrap();
        let d1 = res.dist1.unwrap();
        prop_assert!((d0.total_mass() - 1.0).abs() <= 1e-12);
        prop_assert!((d1.total_mass() - 1.0).abs() <= 1e-12);
        prop_assert!((d0.mean - m0).abs() <= 1e-10 * m0);
        prop_assert!((d1.mean - m1).abs() <= 1e-10 * m1);
    }

    // The maxentropic law with no side constraint normalizes with base
    // lambda and normalizer 1.
    #[test]
    fn unconstrained_law_is_lambda_powers(l in runset_strategy()) {
        let lambda = solve_lambda(&l).unwrap();
        let (d, none) = optimal_distributions(&l, DistConstraint::Unconstrained).unwrap();
        prop_assert!(none.is_none());
        prop_assert!((d.base - lambda).abs() <= 1e-14);
        prop_assert!((d.normalizer - 1.0).abs() <= 1e-12);
        prop_assert!((d.total_mass() - 1.0).abs() <= 1e-12);
    }
}

fn near_boundary(l: &RunSet, w: f64, r: f64) -> bool {
    // within a coarse band of any region constraint; used to discount
    // tolerance-snapping differences between the two descriptions
    let lmin = l.lmin() as f64;
    let eps = 1e-6;
    let ul = (2.0 * w / lmin - r).abs() < eps;
    let ur = (2.0 * (1.0 - w) / lmin - r).abs() < eps;
    let (ll, lr) = match l.lmax() {
        Some(m) => {
            let m = m as f64;
            (
                (r - 2.0 * (1.0 - w) / m).abs() < eps,
                (r - 2.0 * w / m).abs() < eps,
            )
        }
        None => (r.abs() < eps, r.abs() < eps),
    };
    ul || ur || ll || lr
}

// Dense version of the double-description agreement: ten thousand seeded
// points per run set, no tolerance band excuses away from the boundary.
#[test]
fn classify_double_description_dense() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(31337);
    for l in [
        RunSet::naturals(),
        RunSet::from_elements([1, 2]).unwrap(),
        RunSet::from_elements([2, 3]).unwrap(),
        RunSet::from_elements([1, 3]).unwrap(),
        RunSet::from_elements([2, 3, 4, 5]).unwrap(),
    ] {
        for _ in 0..10_000 {
            let w: f64 = rng.random();
            let r: f64 = rng.random();
            let loc = classify(&l, ParamPoint::new(w, r).unwrap(), DEFAULT_EDGE_TOL);
            let inside = region_contains(&l, w, r);
            match loc {
                RegionLocation::Outside => {
                    assert!(!inside || near_boundary(&l, w, r), "{l:?} at ({w}, {r})")
                }
                RegionLocation::Interior => assert!(inside, "{l:?} at ({w}, {r})"),
                _ => {}
            }
        }
    }
}

// Term-by-term equality also holds for a large (64-element) explicit set.
#[test]
fn power_sums_match_on_wide_sets() {
    let l = RunSet::from_elements(1u64..=64).unwrap();
    for x in [0.3f64, 0.9, 1.0, 1.1] {
        let ps = l.power_sums(x).unwrap();
        let (mut a, mut a1) = (0.0f64, 0.0f64);
        for e in 1u64..=64 {
            let t = x.powi(e as i32);
            a += t;
            a1 += e as f64 * t;
        }
        assert_eq!(ps.a.to_bits(), a.to_bits());
        assert_eq!(ps.a1.to_bits(), a1.to_bits());
    }
}

// The fitted log coefficient barely moves when the smallest n is dropped.
#[test]
fn fit_is_stable_under_dropping_smallest_point() {
    let cases: Vec<(RunSet, FitTarget)> = vec![
        (
            RunSet::naturals(),
            FitTarget::WeightRuns {
                omega: 0.5,
                rho: 0.5,
            },
        ),
        (RunSet::naturals(), FitTarget::Runs { rho: 0.5 }),
        (RunSet::naturals(), FitTarget::Weight { omega: 0.5 }),
        (
            RunSet::from_elements([1, 2]).unwrap(),
            FitTarget::WeightRuns {
                omega: 0.5,
                rho: 0.72,
            },
        ),
        (
            RunSet::from_elements([1, 2]).unwrap(),
            FitTarget::Runs { rho: 0.72 },
        ),
    ];
    for (l, target) in cases {
        let full = fit_log_correction(&l, target, &[100, 200, 400, 800]).unwrap();
        let dropped = fit_log_correction(&l, target, &[200, 400, 800]).unwrap();
        let delta = (full.fitted_log_coefficient - dropped.fitted_log_coefficient).abs();
        assert!(delta <= 0.05, "coefficient moved by {delta} for {target:?}");
    }
}

// The generic interior solver is validated against exact counts: with the
// solved sigma subtracted, the remaining signal in log S(n, wn, rn) is
// c log n + O(1) with c near -1. A wrong sigma would leak a term linear in
// n and blow the residuals up.
#[test]
fn interior_capacity_matches_count_regression() {
    let l = RunSet::from_elements([1, 2]).unwrap();
    let fit = fit_log_correction(
        &l,
        FitTarget::WeightRuns {
            omega: 0.5,
            rho: 0.8,
        },
        &[100, 200, 400, 800],
    )
    .unwrap();
    assert!(
        (-1.25..=-0.75).contains(&fit.fitted_log_coefficient),
        "c = {}",
        fit.fitted_log_coefficient
    );
    assert!(fit.max_residual < 1.0, "residual {}", fit.max_residual);
}

// Same regression oracle for the two-set capacity: counts with different
// constraints on runs of zeros and ones, against the two-set solver.
#[test]
fn two_set_capacity_matches_count_regression() {
    use rll_core::capacity::capacity_two_sets;
    use rll_core::counting::count_two_sets;

    let l0 = RunSet::from_elements([1, 2]).unwrap();
    let l1 = RunSet::from_elements([2, 3]).unwrap();
    let (omega, rho) = (0.6, 0.5);
    let res = capacity_two_sets(&l0, &l1, ParamPoint::new(omega, rho).unwrap()).unwrap();
    assert_eq!(res.region, RegionLocation::Interior);
    let sigma = res.sigma.as_f64();

    let ns = [100u64, 200, 400, 800];
    let ys: Vec<(f64, f64)> = ns
        .iter()
        .map(|&n| {
            let w = (omega * n as f64).round() as u64;
            let r = (rho * n as f64).round() as u64;
            let count = count_two_sets(&l0, &l1, n, w, r);
            ((n as f64).log2(), log2_big(&count) - sigma * n as f64)
        })
        .collect();
    // least squares y = c x + b
    let m = ys.len() as f64;
    let sx: f64 = ys.iter().map(|p| p.0).sum();
    let sy: f64 = ys.iter().map(|p| p.1).sum();
    let sxx: f64 = ys.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = ys.iter().map(|p| p.0 * p.1).sum();
    let c = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let b = (sy - c * sx) / m;
    assert!((-1.25..=-0.75).contains(&c), "two-set fit c = {c}");
    for (x, y) in ys {
        assert!((y - c * x - b).abs() < 1.0, "two-set residual too large");
    }
}

// Finite-n growth of the sparse-noise ball approaches the volume exponent;
// the implied constant in the log n / n gap is reported, not pinned.
#[test]
fn volume_exponent_finite_n_consistency() {
    for d in [0u64, 1, 2] {
        let l = RunSet::interval(d + 1, None).unwrap();
        let rho = 0.8 * rll_core::bounds::volume_breakpoint(d).unwrap();
        let v = rll_core::bounds::volume_exponent(d, rho).unwrap();
        let mut table = CompositionTable::new(&l);
        let mut gaps = Vec::new();
        for n in [200u64, 400, 800] {
            let t_max = (rho * n as f64).floor() as u64;
            let mut ball = BigUint::from(1u32); // t = 0: the untouched input
            for t in 1..=t_max {
                ball += table.get(n, t) * 2u32;
            }
            let rate = log2_big(&ball) / n as f64;
            gaps.push((n, (rate - v).abs()));
        }
        let c = gaps
            .iter()
            .map(|&(n, g)| g * n as f64 / (n as f64).log2())
            .fold(0.0f64, f64::max);
        for pair in gaps.windows(2) {
            assert!(
                pair[1].1 < pair[0].1,
                "gap not shrinking for d = {d}: {gaps:?}"
            );
        }
        println!("d = {d}: gaps {gaps:?}, implied constant C = {c:.3}");
    }
}

// Shared immutable values are safe to use from many threads.
#[test]
fn core_types_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<RunSet>();
    assert_send_sync::<rll_core::counting::Census>();
    assert_send_sync::<rll_core::capacity::CapacityResult>();
    assert_send_sync::<rll_core::capacity::RunDistribution>();
    assert_send_sync::<rll_core::typicality::TypicalProfile>();

    // and a quick smoke run: concurrent capacity evaluations on one set
    let l = std::sync::Arc::new(RunSet::from_elements([1, 2, 4]).unwrap());
    let handles: Vec<_> = (0..4)
        .map(|k| {
            let l = l.clone();
            std::thread::spawn(move || {
                let w = 0.3 + 0.1 * k as f64;
                let r = rll_core::capacity::rho_star_omega(&l, w).unwrap();
                capacity_wr(&l, ParamPoint::new(w, r).unwrap())
                    .unwrap()
                    .sigma
                    .as_f64()
            })
        })
        .collect();
    for h in handles {
        assert!(h.join().unwrap() > 0.0);
    }
}
