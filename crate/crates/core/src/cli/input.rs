//! JSON measurement records.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::witnesses::{CollectiveMoments, Covariance, ModeMomentSet};

const COV_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub records: Vec<InputRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: u64,
    pub var_sz: f64,
    pub mean_sx: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<ModeRecord>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeRecord {
    pub n_i: u64,
    pub var_sz: f64,
    pub mean_sx: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_sy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cov_sz: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cov_sy: Option<Vec<Vec<f64>>>,
}

/// A validated record together with its verbatim JSON.
#[derive(Debug, Clone)]
pub struct ParsedRecord {
    pub raw: Value,
    pub label: Option<String>,
    pub collective: CollectiveMoments,
    pub modes: Option<ModeMomentSet>,
    pub mode_count: Option<usize>,
}

/// Parses and validates an input document. Schema errors carry serde's
/// line/column position; semantic errors name the record and field.
pub fn parse_input(text: &str) -> Result<Vec<ParsedRecord>, CliError> {
    let typed: InputFile =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("schema error: {e}")))?;
    let raw: Value =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("schema error: {e}")))?;
    let raws = raw["records"].as_array().cloned().unwrap_or_default();

    typed
        .records
        .into_iter()
        .zip(raws)
        .enumerate()
        .map(|(i, (rec, raw))| {
            let name = match &rec.label {
                Some(l) => format!("record {} ({l})", i + 1),
                None => format!("record {}", i + 1),
            };
            validate(rec, raw).map_err(|msg| CliError::Input(format!("{name}: {msg}")))
        })
        .collect()
}

fn validate(rec: InputRecord, raw: Value) -> Result<ParsedRecord, String> {
    let collective = CollectiveMoments::new(rec.n, rec.var_sz, rec.mean_sx)
        .map_err(|e| format!("fields n/var_sz/mean_sx: {e}"))?;
    let modes = match &rec.modes {
        Some(list) => Some(mode_set(rec.n, list)?),
        None => None,
    };
    if let (Some(m), Some(list)) = (rec.m, &rec.modes) {
        if m != list.len() {
            return Err(format!(
                "field m = {m} disagrees with the {} entries of modes",
                list.len()
            ));
        }
    }
    if let Some(m) = rec.m {
        if m < 2 {
            return Err(format!("field m = {m} must be at least 2"));
        }
    }
    Ok(ParsedRecord {
        raw,
        label: rec.label,
        collective,
        modes,
        mode_count: rec.m,
    })
}

fn mode_set(n: u64, list: &[ModeRecord]) -> Result<ModeMomentSet, String> {
    let m = list.len();
    if m < 2 {
        return Err(format!("field modes needs at least 2 entries, got {m}"));
    }
    if let Some(i) = list.iter().position(|r| r.n_i == 0) {
        return Err(format!("modes[{i}].n_i must be positive"));
    }
    let total: u64 = list.iter().map(|r| r.n_i).sum();
    if total != n {
        return Err(format!("mode occupations n_i sum to {total}, not n = {n}"));
    }
    let pi: Vec<f64> = list.iter().map(|r| r.n_i as f64 / n as f64).collect();
    let mean_sx: Vec<f64> = list.iter().map(|r| r.mean_sx).collect();

    let var_sz: Vec<f64> = list.iter().map(|r| r.var_sz).collect();
    let cov_sz = covariance("cov_sz", &var_sz, list.iter().map(|r| r.cov_sz.as_ref()))?;

    let with_sy = list.iter().filter(|r| r.var_sy.is_some()).count();
    let cov_sy = if with_sy == 0 {
        if list.iter().any(|r| r.cov_sy.is_some()) {
            return Err("modes[].cov_sy given without var_sy".into());
        }
        None
    } else if with_sy == m {
        let var_sy: Vec<f64> = list.iter().map(|r| r.var_sy.unwrap_or_default()).collect();
        Some(covariance(
            "cov_sy",
            &var_sy,
            list.iter().map(|r| r.cov_sy.as_ref()),
        )?)
    } else {
        return Err("modes[].var_sy must be given for every mode or for none".into());
    };

    ModeMomentSet::new(n, pi, mean_sx, cov_sz, cov_sy).map_err(|e| format!("field modes: {e}"))
}

/// Every supplied copy of the matrix must agree, and its diagonal must match
/// the per-mode variances. Without any copy the modes are uncorrelated.
fn covariance<'a>(
    field: &str,
    variances: &[f64],
    copies: impl Iterator<Item = Option<&'a Vec<Vec<f64>>>>,
) -> Result<Covariance, String> {
    let m = variances.len();
    let mut chosen: Option<&Vec<Vec<f64>>> = None;
    for (i, copy) in copies.enumerate() {
        let Some(copy) = copy else { continue };
        if copy.len() != m || copy.iter().any(|row| row.len() != m) {
            return Err(format!("modes[{i}].{field} must be a {m}×{m} matrix"));
        }
        match chosen {
            None => chosen = Some(copy),
            Some(first) => {
                let same = first
                    .iter()
                    .flatten()
                    .zip(copy.iter().flatten())
                    .all(|(a, b)| (a - b).abs() <= COV_TOLERANCE * a.abs().max(b.abs()).max(1.0));
                if !same {
                    return Err(format!("modes[{i}].{field} disagrees with an earlier copy"));
                }
            }
        }
    }
    let result = match chosen {
        None => Covariance::diagonal(variances),
        Some(matrix) => {
            for (i, v) in variances.iter().enumerate() {
                let d = matrix[i][i];
                if (d - v).abs() > COV_TOLERANCE * d.abs().max(v.abs()).max(1.0) {
                    return Err(format!(
                        "{field} diagonal entry {} = {d} differs from the mode variance {v}",
                        i + 1
                    ));
                }
            }
            Covariance::new(matrix.clone())
        }
    };
    result.map_err(|e| format!("{field}: {e}"))
}
