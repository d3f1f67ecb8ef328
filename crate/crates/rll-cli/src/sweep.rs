//! Capacity grid sweeps. Grid points are computed in parallel (capped by
//! the CSL_THREADS environment variable) and rows are sorted by coordinates
//! before writing, so output files are deterministic.

use rll_core::capacity::{capacity_two_sets, capacity_wr};
use rll_core::{ParamPoint, RunSet};

use crate::runspec::parse_runset;
use crate::CliError;

pub(crate) struct SweepGrid {
    pub omega: Vec<f64>,
    pub rho: Vec<f64>,
}

fn parse_axis(spec: &str) -> Result<Vec<f64>, CliError> {
    // a:b:step
    let nums: Result<Vec<f64>, _> = spec.split(':').map(|s| s.parse::<f64>()).collect();
    let nums = nums.map_err(|_| CliError::Usage(format!("bad sweep axis: {spec}")))?;
    match nums.as_slice() {
        [single] => Ok(vec![*single]),
        [a, b, step] if *step > 0.0 && b >= a => {
            let mut v = Vec::new();
            let count = ((b - a) / step).round() as usize;
            for i in 0..=count {
                let x = a + step * i as f64;
                if x <= b + 1e-12 {
                    v.push(x);
                }
            }
            Ok(v)
        }
        _ => Err(CliError::Usage(format!(
            "sweep axes use start:end:step with step > 0, got: {spec}"
        ))),
    }
}

pub(crate) fn parse_sweep(parts: &[String]) -> Result<SweepGrid, CliError> {
    let mut omega = None;
    let mut rho = None;
    for part in parts {
        match part.split_once('=') {
            Some(("omega", axis)) => omega = Some(parse_axis(axis)?),
            Some(("rho", axis)) => rho = Some(parse_axis(axis)?),
            _ => {
                return Err(CliError::Usage(format!(
                    "sweep parts look like omega=a:b:step or rho=a:b:step, got: {part}"
                )))
            }
        }
    }
    match (omega, rho) {
        (Some(omega), Some(rho)) if !omega.is_empty() && !rho.is_empty() => {
            Ok(SweepGrid { omega, rho })
        }
        _ => Err(CliError::Usage(
            "a sweep needs non-empty omega= and rho= axes".to_string(),
        )),
    }
}

fn thread_cap() -> usize {
    std::env::var("CSL_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

type Row = (
    f64,
    f64,
    &'static str,
    Option<f64>,
    Option<f64>,
    Option<f64>,
    f64,
);

pub(crate) fn run_sweep(
    l: &RunSet,
    runset1: Option<&str>,
    grid: &SweepGrid,
    nats_scale: f64,
) -> Result<String, CliError> {
    let l1 = match runset1 {
        Some(spec) => Some(parse_runset(spec, false)?),
        None => None,
    };
    let points: Vec<(f64, f64)> = grid
        .omega
        .iter()
        .flat_map(|&w| grid.rho.iter().map(move |&r| (w, r)))
        .collect();

    let eval = |(w, r): (f64, f64)| -> Result<Row, CliError> {
        let p = ParamPoint::new(w, r).map_err(|e| CliError::Usage(e.to_string()))?;
        let res = match &l1 {
            Some(l1) => capacity_two_sets(l, l1, p)?,
            None => capacity_wr(l, p)?,
        };
        let sigma = res.sigma.finite().map(|s| s * nats_scale);
        Ok((
            w,
            r,
            res.region.as_str(),
            sigma,
            res.alpha,
            res.beta,
            res.log_term_coefficient,
        ))
    };

    let threads = thread_cap().min(points.len().max(1));
    let mut rows: Vec<Row> = Vec::with_capacity(points.len());
    if threads <= 1 {
        for &p in &points {
            rows.push(eval(p)?);
        }
    } else {
        let chunks: Vec<&[(f64, f64)]> = points.chunks(points.len().div_ceil(threads)).collect();
        let results: Vec<Result<Vec<Row>, CliError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| scope.spawn(move || chunk.iter().map(|&p| eval(p)).collect()))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for part in results {
            rows.extend(part?);
        }
    }
    rows.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());

    let mut out = String::from("omega,rho,region,sigma,alpha,beta,log_term_coefficient\n");
    for (w, r, region, sigma, alpha, beta, coeff) in rows {
        let sigma = sigma.map_or("-inf".to_string(), |s| s.to_string());
        let alpha = alpha.map_or(String::new(), |a| a.to_string());
        let beta = beta.map_or(String::new(), |b| b.to_string());
        out.push_str(&format!(
            "{w},{r},{region},{sigma},{alpha},{beta},{coeff}\n"
        ));
    }
    Ok(out)
}
