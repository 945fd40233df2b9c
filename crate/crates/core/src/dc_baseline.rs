//! The DC-causal baseline: each realization of the conditioning variable is
//! one equal-weight sample (p(x_i), p(y|x_i)), and distance correlation over
//! those |X| samples is compared across the two directions. Also provides a
//! Monte Carlo diagnostic for the support-size bias of this construction.

use rand::Rng;
use rayon::prelude::*;

use crate::dcor::{distance_correlation, SampleMatrix};
use crate::empirical::{Axis, Direction, DiscreteDataset, JointTable};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::Decision;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionScore {
    pub direction: Direction,
    pub score: f64,
    pub sample_count: usize,
    pub degenerate: bool,
}

/// Distance correlation between the |X| marginal entries (as 1-D samples)
/// and the |X| conditional rows (as |Y|-dimensional samples); backward swaps
/// the roles.
pub fn dc_score(ds: &DiscreteDataset, direction: Direction) -> Result<DirectionScore> {
    let jt = JointTable::from_dataset(ds)?;
    let (given, k, other) = match direction {
        Direction::Forward => (Axis::X, jt.nx(), jt.ny()),
        Direction::Backward => (Axis::Y, jt.ny(), jt.nx()),
    };
    if k < 2 {
        return Err(Error::InsufficientSamples(format!(
            "conditioning support must be >= 2, got {k}"
        )));
    }
    let marginal = jt.marginal(given)?;
    let conditional = jt.conditional(given)?;
    let a = SampleMatrix::new(k, 1, marginal)?;
    let b = SampleMatrix::new(k, other, conditional)?;
    let r = distance_correlation(&a, &b)?;
    Ok(DirectionScore {
        direction,
        score: r.dcor,
        sample_count: k,
        degenerate: r.degenerate,
    })
}

/// Smaller score wins: the direction whose (marginal, conditional) pair
/// looks more independent is declared causal.
pub fn dc_infer(ds: &DiscreteDataset) -> Result<Decision> {
    let forward = dc_score(ds, Direction::Forward)?;
    let backward = dc_score(ds, Direction::Backward)?;
    Ok(Decision::from_scores(forward.score, backward.score))
}

/// Mean forward DC score over `reps` independent-uniform pairs per support
/// size. For X independent of Y the curve decreases towards 0 as the support
/// grows, which is the bias this baseline inherits.
pub fn support_bias_curve(
    support_sizes: &[usize],
    n: usize,
    reps: usize,
    master_seed: u64,
) -> Result<Vec<f64>> {
    if reps == 0 {
        return Err(Error::InvalidInput("reps must be >= 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    support_sizes
        .iter()
        .map(|&s| {
            if s < 2 {
                return Err(Error::InvalidInput(format!("support {s} must be >= 2")));
            }
            let scores: Vec<f64> = (0..reps)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = substream(master_seed, &[s as u64, rep as u64]);
                    let x_codes: Vec<u32> = (0..n).map(|_| rng.gen_range(0..s) as u32).collect();
                    let y_codes: Vec<u32> = (0..n).map(|_| rng.gen_range(0..s) as u32).collect();
                    let cats: Vec<i64> = (0..s as i64).collect();
                    let ds = DiscreteDataset::from_codes(x_codes, y_codes, cats.clone(), cats)?;
                    Ok(dc_score(&ds, Direction::Forward)?.score)
                })
                .collect::<Result<_>>()?;
            Ok(scores.iter().sum::<f64>() / reps as f64)
        })
        .collect()
}
