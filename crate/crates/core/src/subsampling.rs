//! The subsampling direction test.
//!
//! An ensemble of Bernoulli(q) subsamples is drawn from the dataset; each
//! subsample's empirical (marginal, conditional) pair is treated as one draw
//! of the generating schemes of the cause and the mechanism, and distance
//! correlation over the ensemble measures their dependence. The inclusion
//! probability is tuned over a grid by minimizing each direction's score and
//! taking the smaller of the two minimizers; both directions are then scored
//! at that common operating point and the smaller score wins.

use rayon::prelude::*;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dcor::{distance_correlation, SampleMatrix};
use crate::empirical::{Direction, DiscreteDataset, JointTable};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, substream};
use crate::Decision;

const RETRY_CAP: usize = 100;

// substream tag namespaces within a config seed
const TAG_SELECT: u64 = 10;
const TAG_FINAL: u64 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SubsampleConfig {
    pub m: usize,
    pub p_grid: Vec<f64>,
    pub seed: u64,
    pub min_effective: usize,
}

impl SubsampleConfig {
    pub fn new(m: usize, p_grid: Vec<f64>, seed: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(format!("ensemble size m must be >= 2, got {m}")));
        }
        if p_grid.is_empty() {
            return Err(Error::InvalidInput("probability grid must be nonempty".into()));
        }
        if p_grid.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::InvalidInput(
                "grid probabilities must lie strictly inside (0,1)".into(),
            ));
        }
        if p_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("grid must be strictly increasing".into()));
        }
        Ok(SubsampleConfig {
            m,
            p_grid,
            seed,
            min_effective: 10,
        })
    }

    /// The default grid: 10 linearly spaced probabilities in [0.01, 0.99].
    pub fn default_grid() -> Vec<f64> {
        linear_grid(0.01, 0.99, 10)
    }

    pub fn with_defaults(seed: u64) -> Self {
        SubsampleConfig::new(100, Self::default_grid(), seed).unwrap()
    }
}

pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// One Bernoulli(q) subsample. Supports and category dictionaries are
/// inherited from the full dataset. Draws retaining fewer than
/// `min_effective` observations are redrawn up to a retry cap.
pub fn subsample(
    ds: &DiscreteDataset,
    q: f64,
    rng: &mut ChaCha8Rng,
    min_effective: usize,
) -> Result<DiscreteDataset> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidInput(format!(
            "inclusion probability must be in (0,1), got {q}"
        )));
    }
    for _ in 0..RETRY_CAP {
        let keep: Vec<bool> = (0..ds.n()).map(|_| rng.gen::<f64>() < q).collect();
        let retained = keep.iter().filter(|&&k| k).count();
        if retained >= min_effective {
            return ds.filter(&keep);
        }
    }
    Err(Error::SubsampleDegenerate {
        min_effective,
        retries: RETRY_CAP,
    })
}

/// R_m between the ensemble of subsample marginals and the ensemble of
/// flattened subsample conditionals, in the given direction.
pub fn direction_score(
    ds: &DiscreteDataset,
    direction: Direction,
    q: f64,
    m: usize,
    stream_seed: u64,
    min_effective: usize,
) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("ensemble size m must be >= 2, got {m}")));
    }
    let features: Vec<(Vec<f64>, Vec<f64>)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(stream_seed, &[i as u64]);
            let sub = subsample(ds, q, &mut rng, min_effective)?;
            let jt = JointTable::from_dataset(&sub)?;
            jt.flatten_features(direction)
        })
        .collect::<Result<_>>()?;

    let marginals: Vec<Vec<f64>> = features.iter().map(|(mg, _)| mg.clone()).collect();
    let conditionals: Vec<Vec<f64>> = features.into_iter().map(|(_, cd)| cd).collect();
    let a = SampleMatrix::from_rows(&marginals)?;
    let b = SampleMatrix::from_rows(&conditionals)?;
    Ok(distance_correlation(&a, &b)?.dcor)
}

/// Scores at one grid point; `None` marks a direction whose ensemble could
/// not be drawn (degenerate subsampling).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PerPScore {
    pub p: f64,
    pub forward: Option<f64>,
    pub backward: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PSelection {
    pub p_f: f64,
    pub p_b: f64,
    pub p_star: f64,
    pub per_p: Vec<PerPScore>,
}

fn argmin_p(per_p: &[PerPScore], pick: impl Fn(&PerPScore) -> Option<f64>) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    // ascending grid order, strict improvement: ties break toward smaller p
    for entry in per_p {
        if let Some(score) = pick(entry) {
            if best.map_or(true, |(_, s)| score < s) {
                best = Some((entry.p, score));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Grid search for the operating probability: p_f and p_b minimize the
/// forward and backward scores, p* = min(p_f, p_b).
pub fn select_p(
    ds: &DiscreteDataset,
    m: usize,
    grid: &[f64],
    seed: u64,
    min_effective: usize,
) -> Result<PSelection> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("probability grid must be nonempty".into()));
    }
    let per_p: Vec<PerPScore> = grid
        .iter()
        .enumerate()
        .map(|(gi, &p)| {
            let eval = |dir_tag: u64, direction: Direction| -> Result<Option<f64>> {
                let stream = derive_seed(seed, &[dir_tag, gi as u64]);
                match direction_score(ds, direction, p, m, stream, min_effective) {
                    Ok(s) => Ok(Some(s)),
                    Err(Error::SubsampleDegenerate { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            };
            Ok(PerPScore {
                p,
                forward: eval(0, Direction::Forward)?,
                backward: eval(1, Direction::Backward)?,
            })
        })
        .collect::<Result<_>>()?;

    let p_f = argmin_p(&per_p, |e| e.forward).ok_or(Error::NoValidP)?;
    let p_b = argmin_p(&per_p, |e| e.backward).ok_or(Error::NoValidP)?;
    Ok(PSelection {
        p_f,
        p_b,
        p_star: p_f.min(p_b),
        per_p,
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DirectionReport {
    pub forward_score: f64,
    pub backward_score: f64,
    pub p_star: f64,
    pub p_f: f64,
    pub p_b: f64,
    pub decision: Decision,
    pub relative_gap: f64,
    pub per_p_scores: Vec<PerPScore>,
}

/// |s_f - s_b| / max(s_f, s_b); 0 when both scores are 0.
pub fn relative_gap(s_f: f64, s_b: f64) -> Result<f64> {
    if s_f < 0.0 || s_b < 0.0 {
        return Err(Error::InvalidInput("scores must be nonnegative".into()));
    }
    let max = s_f.max(s_b);
    if max == 0.0 {
        Ok(0.0)
    } else {
        Ok((s_f - s_b).abs() / max)
    }
}

/// Full direction decision: grid search for p*, fresh ensembles for both
/// directions at p*, smaller score wins.
pub fn infer_direction(ds: &DiscreteDataset, cfg: &SubsampleConfig) -> Result<DirectionReport> {
    if ds.x_support() < 2 || ds.y_support() < 2 {
        return Err(Error::InsufficientSamples(format!(
            "both supports must be >= 2, got ({}, {})",
            ds.x_support(),
            ds.y_support()
        )));
    }
    let sel = select_p(
        ds,
        cfg.m,
        &cfg.p_grid,
        derive_seed(cfg.seed, &[TAG_SELECT]),
        cfg.min_effective,
    )?;
    let final_score = |dir_tag: u64, direction: Direction| -> Result<Option<f64>> {
        let stream = derive_seed(cfg.seed, &[TAG_FINAL, dir_tag]);
        match direction_score(ds, direction, sel.p_star, cfg.m, stream, cfg.min_effective) {
            Ok(s) => Ok(Some(s)),
            Err(Error::SubsampleDegenerate { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let (forward_score, backward_score) =
        match (final_score(0, Direction::Forward)?, final_score(1, Direction::Backward)?) {
            (Some(f), Some(b)) => (f, b),
            (None, None) => (0.0, 0.0),
            (Some(_), None) | (None, Some(_)) => {
                return Err(Error::SubsampleDegenerate {
                    min_effective: cfg.min_effective,
                    retries: RETRY_CAP,
                })
            }
        };
    Ok(DirectionReport {
        forward_score,
        backward_score,
        p_star: sel.p_star,
        p_f: sel.p_f,
        p_b: sel.p_b,
        decision: Decision::from_scores(forward_score, backward_score),
        relative_gap: relative_gap(forward_score, backward_score)?,
        per_p_scores: sel.per_p,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MStabilityPoint {
    pub m: usize,
    pub forward_mean: f64,
    pub forward_std: f64,
    pub backward_mean: f64,
    pub backward_std: f64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Mean and spread of the direction scores as the ensemble size grows; used
/// to pick an m where the two directions' bands separate.
pub fn m_stability_curve(
    ds: &DiscreteDataset,
    q: f64,
    m_values: &[usize],
    reps: usize,
    master_seed: u64,
) -> Result<Vec<MStabilityPoint>> {
    if reps == 0 {
        return Err(Error::InvalidInput("reps must be >= 1".into()));
    }
    m_values
        .iter()
        .enumerate()
        .map(|(mi, &m)| {
            let score_all = |direction: Direction, dir_tag: u64| -> Result<Vec<f64>> {
                (0..reps)
                    .map(|rep| {
                        let stream =
                            derive_seed(master_seed, &[mi as u64, rep as u64, dir_tag]);
                        direction_score(ds, direction, q, m, stream, 10)
                    })
                    .collect()
            };
            let fwd = score_all(Direction::Forward, 0)?;
            let bwd = score_all(Direction::Backward, 1)?;
            let (forward_mean, forward_std) = mean_std(&fwd);
            let (backward_mean, backward_std) = mean_std(&bwd);
            Ok(MStabilityPoint {
                m,
                forward_mean,
                forward_std,
                backward_mean,
                backward_std,
            })
        })
        .collect()
}
