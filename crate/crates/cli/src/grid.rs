//! Parsing of the sweep grids given on the command line.
//!
//! Sizes and times accept a single value, a comma-separated list, or an
//! inclusive range `a..b` with an optional step `a..b:step` (step 1 by
//! default). Items can be mixed: `6..10:2,14`. Seeds accept a plain count
//! `N` meaning seeds `0..N-1`, or explicit seeds written as a list or range
//! (`3..7`, `1,4,9`).

use crate::error::CliError;

fn split_range(item: &str) -> Option<(&str, &str, Option<&str>)> {
    let (lo, rest) = item.split_once("..")?;
    match rest.split_once(':') {
        Some((hi, step)) => Some((lo, hi, Some(step))),
        None => Some((lo, rest, None)),
    }
}

fn parse_num<T: std::str::FromStr>(what: &str, text: &str) -> Result<T, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse \"{text}\" in {what}")))
}

fn dedup_sorted<T: PartialOrd + Copy>(mut values: Vec<T>) -> Vec<T> {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    values.dedup_by(|a, b| a == b);
    values
}

fn integers(what: &str, text: &str) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match split_range(item) {
            Some((lo, hi, step)) => {
                let lo: u64 = parse_num(what, lo)?;
                let hi: u64 = parse_num(what, hi)?;
                let step: u64 = step.map(|s| parse_num(what, s)).transpose()?.unwrap_or(1);
                if hi < lo || step == 0 {
                    return Err(CliError::Config(format!("empty range \"{item}\" in {what}")));
                }
                out.extend((lo..=hi).step_by(step as usize));
            }
            None => out.push(parse_num(what, item)?),
        }
    }
    if out.is_empty() {
        return Err(CliError::Config(format!("{what} is empty")));
    }
    Ok(dedup_sorted(out))
}

/// Register sizes; every size must be at least 2.
pub fn sizes(text: &str) -> Result<Vec<usize>, CliError> {
    let sizes: Vec<usize> = integers("--n", text)?.into_iter().map(|n| n as usize).collect();
    if let Some(bad) = sizes.iter().find(|&&n| n < 2) {
        return Err(CliError::Config(format!("--n must be at least 2, got {bad}")));
    }
    if let Some(bad) = sizes.iter().find(|&&n| n > 30) {
        return Err(CliError::Config(format!("--n {bad} is beyond what a state vector can hold")));
    }
    Ok(sizes)
}

pub fn seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let text = text.trim();
    if !text.contains(',') && !text.contains("..") {
        let count: u64 = parse_num("--seeds", text)?;
        if count == 0 {
            return Err(CliError::Config("--seeds count must be positive".into()));
        }
        return Ok((0..count).collect());
    }
    integers("--seeds", text)
}

/// Positive total times.
pub fn times(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match split_range(item) {
            Some((lo, hi, step)) => {
                let lo: f64 = parse_num("--T", lo)?;
                let hi: f64 = parse_num("--T", hi)?;
                let step: f64 = step.map(|s| parse_num("--T", s)).transpose()?.unwrap_or(1.0);
                if !(step > 0.0) || !(hi >= lo) {
                    return Err(CliError::Config(format!("empty range \"{item}\" in --T")));
                }
                let count = ((hi - lo) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|k| lo + k as f64 * step));
            }
            None => out.push(parse_num("--T", item)?),
        }
    }
    if out.is_empty() {
        return Err(CliError::Config("--T is empty".into()));
    }
    if let Some(bad) = out.iter().find(|t| !(**t > 0.0) || !t.is_finite()) {
        return Err(CliError::Config(format!("--T must be positive, got {bad}")));
    }
    Ok(dedup_sorted(out))
}
