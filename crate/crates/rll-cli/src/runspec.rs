//! Run-set grammar for the command line: comma lists like `1,2,5` or
//! `interval:lo:hi` with `hi = inf` for unbounded sets. Parsing itself
//! lives in the core crate; this wraps errors as usage errors.

use rll_core::RunSet;

use crate::CliError;

pub(crate) fn parse_runset(spec: &str, permissive: bool) -> Result<RunSet, CliError> {
    let built = if permissive {
        RunSet::parse_spec_permissive(spec)
    } else {
        RunSet::parse_spec(spec)
    };
    built.map_err(|e| CliError::Usage(format!("run set `{spec}`: {e}")))
}

/// Parses `a:b` pairs such as the sub-block constraint `lb:wb`.
pub(crate) fn parse_pair(spec: &str, what: &str) -> Result<(u64, u64), CliError> {
    let mut it = spec.split(':');
    let a = it.next().and_then(|s| s.parse::<u64>().ok());
    let b = it.next().and_then(|s| s.parse::<u64>().ok());
    match (a, b, it.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(CliError::Usage(format!("expected {what}, got: {spec}"))),
    }
}
