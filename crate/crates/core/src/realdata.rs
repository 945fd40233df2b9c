//! Ingestion of two-column cause-effect pair files, rounding-based
//! quantization, support-size eligibility screening and resolution scans.

use std::collections::BTreeMap;
use std::path::Path;

use crate::empirical::DiscreteDataset;
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::subsampling::{infer_direction, SubsampleConfig};
use crate::Decision;

/// Raw (unquantized) observations of one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPair {
    pub id: String,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// Max observed digits after the decimal point, a diagnostic for
    /// "continuous in nature" variables.
    pub max_decimals_x: u32,
    pub max_decimals_y: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreprocessSpec {
    pub max_support: usize,
    pub support_equality_tolerance: usize,
}

impl Default for PreprocessSpec {
    fn default() -> Self {
        PreprocessSpec {
            max_support: 50,
            support_equality_tolerance: 5,
        }
    }
}

fn decimal_digits(token: &str) -> u32 {
    if token.contains(['e', 'E']) {
        // scientific notation: treat as effectively continuous
        return 17;
    }
    match token.split_once('.') {
        Some((_, frac)) => frac.trim_end_matches('0').len() as u32,
        None => 0,
    }
}

/// Loads whitespace-separated numeric columns. `cause_col` / `effect_col`
/// are zero-based column indices (default 0 and 1).
pub fn load_pair_columns(
    path: &Path,
    skip_header: bool,
    cause_col: usize,
    effect_col: usize,
) -> Result<RawPair> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());

    let mut x_values = Vec::new();
    let mut y_values = Vec::new();
    let mut max_dx = 0;
    let mut max_dy = 0;
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 && skip_header {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let needed = cause_col.max(effect_col) + 1;
        if tokens.len() < needed.max(2) {
            return Err(Error::Parse {
                path: path.into(),
                line: lineno + 1,
                message: format!("expected at least {} columns, found {}", needed.max(2), tokens.len()),
            });
        }
        let parse = |col: usize| -> Result<f64> {
            let tok = tokens[col];
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                path: path.into(),
                line: lineno + 1,
                message: format!("cannot parse '{tok}' as a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    path: path.into(),
                    line: lineno + 1,
                    message: format!("non-finite value '{tok}'"),
                });
            }
            Ok(v)
        };
        x_values.push(parse(cause_col)?);
        y_values.push(parse(effect_col)?);
        max_dx = max_dx.max(decimal_digits(tokens[cause_col]));
        max_dy = max_dy.max(decimal_digits(tokens[effect_col]));
    }
    if x_values.is_empty() {
        return Err(Error::Parse {
            path: path.into(),
            line: 0,
            message: "no observations".into(),
        });
    }
    Ok(RawPair {
        id,
        x_values,
        y_values,
        max_decimals_x: max_dx,
        max_decimals_y: max_dy,
    })
}

pub fn load_pair(path: &Path, skip_header: bool) -> Result<RawPair> {
    load_pair_columns(path, skip_header, 0, 1)
}

/// v -> round(10^k * v), rounding half away from zero.
pub fn quantize(values: &[f64], k: i32) -> Result<Vec<i64>> {
    let scale = 10f64.powi(k);
    values
        .iter()
        .map(|&v| {
            let scaled = (v * scale).round();
            if scaled.abs() >= i64::MAX as f64 {
                return Err(Error::QuantizeOverflow {
                    value: v,
                    resolution: k,
                });
            }
            Ok(scaled as i64)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eligibility {
    pub support_x: usize,
    pub support_y: usize,
    pub eligible: bool,
}

/// Eligible iff both supports are below `max_support` and their sizes are
/// within the similarity tolerance of each other.
pub fn eligibility(support_x: usize, support_y: usize, spec: &PreprocessSpec) -> Eligibility {
    let eligible = support_x < spec.max_support
        && support_y < spec.max_support
        && support_x.abs_diff(support_y) <= spec.support_equality_tolerance;
    Eligibility {
        support_x,
        support_y,
        eligible,
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ScanRow {
    pub pair_id: String,
    pub k: i32,
    pub support_x: usize,
    pub support_y: usize,
    pub eligible: bool,
    pub forward_score: Option<f64>,
    pub backward_score: Option<f64>,
    pub relative_gap: Option<f64>,
    pub decision: Option<Decision>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanOutcome {
    /// All eligible resolutions agree on this direction.
    Stable(Decision),
    /// Eligible resolutions disagree; the inferred direction is unreliable.
    Unstable,
    /// No resolution passed the eligibility screen.
    NoEligibleResolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub outcome: ScanOutcome,
}

/// Quantizes the pair at each resolution, screens eligibility and runs the
/// subsampling direction test at every eligible resolution.
pub fn resolution_scan(
    pair: &RawPair,
    k_values: &[i32],
    pre: &PreprocessSpec,
    cfg: &SubsampleConfig,
) -> Result<ScanReport> {
    if k_values.is_empty() {
        return Err(Error::InvalidInput("k list must be nonempty".into()));
    }
    let mut rows = Vec::with_capacity(k_values.len());
    let mut decisions = Vec::new();
    for (ki, &k) in k_values.iter().enumerate() {
        let xq = quantize(&pair.x_values, k)?;
        let yq = quantize(&pair.y_values, k)?;
        let pairs: Vec<(i64, i64)> = xq.into_iter().zip(yq).collect();
        let ds = DiscreteDataset::encode(&pairs)?;
        let elig = eligibility(ds.x_support(), ds.y_support(), pre);
        let mut row = ScanRow {
            pair_id: pair.id.clone(),
            k,
            support_x: elig.support_x,
            support_y: elig.support_y,
            eligible: elig.eligible,
            forward_score: None,
            backward_score: None,
            relative_gap: None,
            decision: None,
        };
        if elig.eligible {
            let mut k_cfg = cfg.clone();
            k_cfg.seed = derive_seed(cfg.seed, &[ki as u64]);
            let report = infer_direction(&ds, &k_cfg)?;
            row.forward_score = Some(report.forward_score);
            row.backward_score = Some(report.backward_score);
            row.relative_gap = Some(report.relative_gap);
            row.decision = Some(report.decision);
            decisions.push(report.decision);
        }
        rows.push(row);
    }
    let outcome = match decisions.split_first() {
        None => ScanOutcome::NoEligibleResolution,
        Some((&first, rest)) => {
            if rest.iter().all(|&d| d == first) {
                ScanOutcome::Stable(first)
            } else {
                ScanOutcome::Unstable
            }
        }
    };
    Ok(ScanReport { rows, outcome })
}

/// Metadata records: `pair-id cause-column effect-column` per line, with
/// one-based column indices as in the published pair descriptions.
pub fn load_metadata(path: &Path) -> Result<BTreeMap<String, (usize, usize)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::Parse {
                path: path.into(),
                line: lineno + 1,
                message: "expected 'pair-id cause-column effect-column'".into(),
            });
        }
        let parse_col = |tok: &str| -> Result<usize> {
            let c: usize = tok.parse().map_err(|_| Error::Parse {
                path: path.into(),
                line: lineno + 1,
                message: format!("bad column index '{tok}'"),
            })?;
            if c == 0 {
                return Err(Error::Parse {
                    path: path.into(),
                    line: lineno + 1,
                    message: "column indices are one-based".into(),
                });
            }
            Ok(c - 1)
        };
        map.insert(
            tokens[0].to_string(),
            (parse_col(tokens[1])?, parse_col(tokens[2])?),
        );
    }
    Ok(map)
}
