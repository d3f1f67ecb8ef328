//! Named invariant suites, runnable from the command line. Each check emits
//! one machine-readable JSON line; the command exits non-zero if any check
//! fails.

use std::process::ExitCode;

use serde_json::json;

use rll_core::asymptotics::FitTarget;
use rll_core::capacity::{capacity_r, capacity_w, capacity_wr, rho_star_omega};
use rll_core::counting::{census, compositions, count_wr_fast, oracle_census};
use rll_core::numeric::binary_entropy;
use rll_core::{ParamPoint, RegionLocation, RunSet};

use crate::{convergence_entry, fit_suite_entry, CliError};

struct Reporter {
    lines: Vec<serde_json::Value>,
    failures: u32,
}

impl Reporter {
    fn new() -> Self {
        Reporter {
            lines: Vec::new(),
            failures: 0,
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        self.lines.push(json!({
            "check": name,
            "status": if pass { "pass" } else { "fail" },
            "detail": detail,
        }));
    }
}

fn named_runsets() -> Vec<(&'static str, RunSet)> {
    vec![
        ("N", RunSet::naturals()),
        ("{1,2}", RunSet::from_elements([1, 2]).unwrap()),
        ("{2,3}", RunSet::from_elements([2, 3]).unwrap()),
        ("{1,3}", RunSet::from_elements([1, 3]).unwrap()),
        ("{2,3,4,5}", RunSet::from_elements([2, 3, 4, 5]).unwrap()),
    ]
}

fn suite_oracle(rep: &mut Reporter, nmax: u64) {
    let nmax = nmax.min(16);
    let mut mismatches = 0u32;
    let mut sets = 0u32;
    for mask in 1u32..32 {
        let elements: Vec<u64> = (0..5)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| b + 1)
            .collect();
        if elements.len() < 2 {
            continue;
        }
        let l = match RunSet::from_elements(elements) {
            Ok(l) => l,
            Err(_) => continue,
        };
        sets += 1;
        for n in 0..=nmax {
            if census(&l, n) != oracle_census(&l, n).unwrap() {
                mismatches += 1;
            }
        }
    }
    rep.check(
        "oracle_equivalence",
        mismatches == 0,
        format!("{sets} run sets, n <= {nmax}, {mismatches} mismatches"),
    );
}

fn suite_identities(rep: &mut Reporter, nmax: u64) {
    let nmax = nmax.min(20);
    let mut bad = 0u32;
    for (_, l) in named_runsets() {
        for n in 0..=nmax {
            let c = census(&l, n);
            for w in 0..=n {
                for r in 0..=n {
                    if count_wr_fast(&l, n, w, r) != c.count(w, r) {
                        bad += 1;
                    }
                }
            }
            for r in 1..=n {
                if c.runs_marginal(r) != compositions(&l, n, r) * 2u32 {
                    bad += 1;
                }
            }
            for (w, r, v) in c.entries() {
                if &c.count(n - w, r) != v {
                    bad += 1;
                }
            }
        }
    }
    rep.check(
        "composition_and_marginal_identities",
        bad == 0,
        format!("5 run sets, n <= {nmax}, {bad} mismatches"),
    );
}

fn suite_capacity(rep: &mut Reporter) {
    let naturals = RunSet::naturals();
    let mut worst = 0.0f64;
    for i in 1..=19 {
        let w = i as f64 / 20.0;
        for j in 1..=19 {
            let r = 2.0 * w.min(1.0 - w) * j as f64 / 20.0;
            let p = ParamPoint::new(w, r).unwrap();
            let res = capacity_wr(&naturals, p).unwrap();
            if res.region != RegionLocation::Interior {
                continue;
            }
            let closed =
                (1.0 - w) * binary_entropy(r / (2.0 - 2.0 * w)) + w * binary_entropy(r / (2.0 * w));
            worst = worst.max((res.sigma.as_f64() - closed).abs());
        }
    }
    rep.check(
        "unconstrained_closed_form",
        worst <= 1e-9,
        format!("max |sigma - closed form| = {worst:.3e}"),
    );

    let mut worst = 0.0f64;
    for i in 1..=19 {
        let w = i as f64 / 20.0;
        worst =
            worst.max((capacity_w(&naturals, w).unwrap().sigma.as_f64() - binary_entropy(w)).abs());
        worst =
            worst.max((capacity_r(&naturals, w).unwrap().sigma.as_f64() - binary_entropy(w)).abs());
    }
    rep.check(
        "single_constraint_closed_form",
        worst <= 1e-9,
        format!("max error = {worst:.3e}"),
    );

    let mut worst = 0.0f64;
    for (_, l) in named_runsets() {
        let w = 0.45;
        let sw = capacity_w(&l, w).unwrap().sigma.as_f64();
        let rs = rho_star_omega(&l, w).unwrap();
        let at = capacity_wr(&l, ParamPoint::new(w, rs).unwrap())
            .unwrap()
            .sigma
            .as_f64();
        worst = worst.max((sw - at).abs());
    }
    rep.check(
        "weight_capacity_attains_supremum",
        worst <= 1e-10,
        format!("max |sigma_w - sigma(rho*)| = {worst:.3e}"),
    );
}

fn suite_fit(rep: &mut Reporter) -> Result<(), CliError> {
    let ns = [100u64, 200, 400, 800];
    let naturals = RunSet::naturals();
    let c = fit_suite_entry(
        &naturals,
        FitTarget::WeightRuns {
            omega: 0.5,
            rho: 0.5,
        },
        &ns,
    )?;
    rep.check(
        "fit_wr_coefficient",
        (-1.25..=-0.75).contains(&c),
        format!("fitted c = {c:.4}, expected about -1"),
    );
    let c = fit_suite_entry(&naturals, FitTarget::Runs { rho: 0.5 }, &ns)?;
    rep.check(
        "fit_runs_coefficient",
        (-0.75..=-0.25).contains(&c),
        format!("fitted c = {c:.4}, expected about -1/2"),
    );
    let c = fit_suite_entry(&naturals, FitTarget::Weight { omega: 0.5 }, &ns)?;
    rep.check(
        "fit_weight_coefficient",
        (-0.75..=-0.25).contains(&c),
        format!("fitted c = {c:.4}, expected about -1/2"),
    );
    let g = convergence_entry(
        &RunSet::from_elements([1, 2]).unwrap(),
        &[64, 128, 256, 512],
    )?;
    rep.check(
        "convergence_gap_bounded",
        g < 3.0,
        format!("max gap * n = {g:.4}"),
    );
    Ok(())
}

pub(crate) fn cmd_validate(
    suite: &str,
    nmax: u64,
    output: Option<&str>,
) -> Result<ExitCode, CliError> {
    let mut rep = Reporter::new();
    match suite {
        "oracle" => suite_oracle(&mut rep, nmax),
        "identities" => suite_identities(&mut rep, nmax),
        "capacity" => suite_capacity(&mut rep),
        "fit" => suite_fit(&mut rep)?,
        "all" => {
            suite_oracle(&mut rep, nmax);
            suite_identities(&mut rep, nmax);
            suite_capacity(&mut rep);
            suite_fit(&mut rep)?;
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite: {other} (expected oracle | identities | capacity | fit | all)"
            )))
        }
    }
    let body: String = rep
        .lines
        .iter()
        .map(|l| serde_json::to_string(l).unwrap() + "\n")
        .collect();
    crate::output::emit(&body, crate::output::Format::Json, output, true)?;
    if rep.failures == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Compute(format!("{} checks failed", rep.failures)))
    }
}
