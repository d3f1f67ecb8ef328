//! Browser bindings for the constrained-sequence toolkit. Every export is a
//! pure function from a textual run-set spec (the `1,2,5` / `interval:lo:hi`
//! grammar) to a JSON string; errors come back inside the JSON envelope as
//! `{"error": "..."}` so the page never deals with thrown values. All heavy
//! lifting stays in `rll-core`; this crate only shapes plot-ready payloads.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use rll_core::capacity::{capacity_r, capacity_w, capacity_wr, solve_lambda};
use rll_core::typicality::typical_profile;
use rll_core::{ParamPoint, RunSet};

fn envelope(result: Result<Value, rll_core::Error>) -> String {
    let v = match result {
        Ok(v) => v,
        Err(e) => json!({"error": e.to_string()}),
    };
    serde_json::to_string(&v).expect("serializable")
}

/// Capacity surface over the (omega, rho) rectangle: row-major sigma values
/// (null outside the admissible region) with region labels, the typical
/// point, and the unconstrained capacity for color scaling.
#[wasm_bindgen]
pub fn capacity_grid(runset: &str, omega_steps: u32, rho_steps: u32) -> String {
    envelope(grid_impl(runset, omega_steps, rho_steps))
}

fn grid_impl(runset: &str, omega_steps: u32, rho_steps: u32) -> Result<Value, rll_core::Error> {
    let l = RunSet::parse_spec(runset)?;
    let steps_w = omega_steps.clamp(2, 400) as usize;
    let steps_r = rho_steps.clamp(2, 400) as usize;
    let lambda = solve_lambda(&l)?;
    let profile = typical_profile(&l)?;
    let rho_max = 1.0 / l.lmin() as f64;

    let omegas: Vec<f64> = (0..=steps_w).map(|i| i as f64 / steps_w as f64).collect();
    let rhos: Vec<f64> = (0..=steps_r)
        .map(|j| rho_max * j as f64 / steps_r as f64)
        .collect();
    let mut sigma_rows = Vec::with_capacity(omegas.len());
    let mut region_rows = Vec::with_capacity(omegas.len());
    for &w in &omegas {
        let mut sig = Vec::with_capacity(rhos.len());
        let mut reg = Vec::with_capacity(rhos.len());
        for &r in &rhos {
            let res = capacity_wr(&l, ParamPoint::new(w, r)?)?;
            match res.sigma.finite() {
                Some(s) => sig.push(json!(s)),
                None => sig.push(Value::Null),
            }
            reg.push(json!(res.region.as_str()));
        }
        sigma_rows.push(Value::Array(sig));
        region_rows.push(Value::Array(reg));
    }
    Ok(json!({
        "runset": serde_json::to_value(&l).unwrap(),
        "omegas": omegas,
        "rhos": rhos,
        "sigma": sigma_rows,
        "region": region_rows,
        "lambda": lambda,
        "sigma_max": -lambda.log2(),
        "omega_star": profile.omega_star,
        "rho_star": profile.rho_star,
    }))
}

/// The two marginal capacity curves: constant weight (over omega) and
/// constant run density (over rho).
#[wasm_bindgen]
pub fn capacity_curves(runset: &str, points: u32) -> String {
    envelope(curves_impl(runset, points))
}

fn curves_impl(runset: &str, points: u32) -> Result<Value, rll_core::Error> {
    let l = RunSet::parse_spec(runset)?;
    let n = points.clamp(8, 2000) as usize;
    let (wlo, whi) = rll_core::capacity::weight_range(&l);
    let mut weight_curve = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let w = wlo + (whi - wlo) * i as f64 / n as f64;
        let sigma = capacity_w(&l, w)?.sigma.as_f64();
        weight_curve.push(json!([w, sigma]));
    }
    let rlo = l.lmax().map_or(0.0, |m| 1.0 / m as f64);
    let rhi = 1.0 / l.lmin() as f64;
    let mut runs_curve = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let r = rlo + (rhi - rlo) * j as f64 / n as f64;
        let sigma = capacity_r(&l, r)?.sigma.as_f64();
        runs_curve.push(json!([r, sigma]));
    }
    Ok(json!({
        "weight_curve": weight_curve,
        "runs_curve": runs_curve,
    }))
}

/// Typical profile: the characteristic root, typical run density, and the
/// maxentropic run-length histogram.
#[wasm_bindgen]
pub fn typical_profile_info(runset: &str, max_ell: u32) -> String {
    envelope(profile_impl(runset, max_ell))
}

fn profile_impl(runset: &str, max_ell: u32) -> Result<Value, rll_core::Error> {
    let l = RunSet::parse_spec(runset)?;
    let p = typical_profile(&l)?;
    let cap = max_ell.clamp(1, 64) as u64;
    let bars: Vec<Value> = l
        .elements_capped(cap)
        .into_iter()
        .map(|ell| json!([ell, p.beta_star(ell), p.run_dist.prob(ell)]))
        .collect();
    Ok(json!({
        "lambda": p.lambda,
        "omega_star": p.omega_star,
        "rho_star": p.rho_star,
        "capacity": -p.lambda.log2(),
        "bars": bars,
    }))
}

/// Volume exponent of sparse error patterns with gap `d` and the matching
/// sphere-packing rate bound, sampled over the admissible rho range.
#[wasm_bindgen]
pub fn volume_curves(d: u32, points: u32) -> String {
    envelope(volume_impl(d, points))
}

fn volume_impl(d: u32, points: u32) -> Result<Value, rll_core::Error> {
    let d = d as u64;
    let n = points.clamp(8, 2000) as usize;
    let top = 1.0 / (d as f64 + 1.0);
    let breakpoint = rll_core::bounds::volume_breakpoint(d)?;
    let mut curve = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let rho = top * i as f64 / n as f64;
        let v = rll_core::bounds::volume_exponent(d, rho)?;
        let rate = rll_core::bounds::sphere_packing_rate(d, rho)?;
        curve.push(json!([rho, v, rate]));
    }
    Ok(json!({
        "d": d,
        "rho_max": top,
        "breakpoint": breakpoint,
        "curve": curve,
    }))
}
