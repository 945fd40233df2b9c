//! Empirical distance covariance and distance correlation.
//!
//! The estimator works on pairwise Euclidean distance matrices: each matrix
//! is double-centered (row mean, column mean and grand mean removed) and the
//! covariance is the mean of the entrywise product of the two centered
//! matrices. Everything is materialized as dense `m x m` matrices; the
//! ensemble sizes used here stay in the low hundreds.

use crate::error::{Error, Result};

/// `m` samples of a `d`-dimensional real vector, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl SampleMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if cols == 0 {
            return Err(Error::InvalidInput("sample dimension must be >= 1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "expected {} values for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite sample value".into()));
        }
        Ok(SampleMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let d = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput("ragged sample rows".into()));
        }
        SampleMatrix::new(m, d, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// Symmetric nonnegative `m x m` distance matrix.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    size: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_vec(data: Vec<f64>, size: usize) -> Result<Self> {
        if data.len() != size * size {
            return Err(Error::InvalidInput(format!(
                "expected {}x{} square matrix, got {} values",
                size,
                size,
                data.len()
            )));
        }
        Ok(DistanceMatrix { size, data })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Distance matrix after double centering; rows and columns sum to ~0.
#[derive(Debug, Clone)]
pub struct CenteredDistanceMatrix {
    size: usize,
    data: Vec<f64>,
}

impl CenteredDistanceMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Result of the distance correlation estimator.
///
/// `degenerate` is set when either distance variance is zero (constant
/// samples); the correlation is then 0 by convention so direction
/// comparisons stay totally ordered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DCorResult {
    pub dcov: f64,
    pub dvar_x: f64,
    pub dvar_y: f64,
    pub dcor: f64,
    pub degenerate: bool,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Pairwise Euclidean distances between the rows of `samples`.
pub fn pairwise_distances(samples: &SampleMatrix) -> Result<DistanceMatrix> {
    let m = samples.rows();
    let mut data = vec![0.0; m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let d = euclidean(samples.row(i), samples.row(j));
            data[i * m + j] = d;
            data[j * m + i] = d;
        }
    }
    Ok(DistanceMatrix { size: m, data })
}

/// Subtracts row means and column means and adds back the grand mean.
pub fn double_center(dist: &DistanceMatrix) -> CenteredDistanceMatrix {
    let m = dist.size;
    let mf = m as f64;
    let mut row_mean = vec![0.0; m];
    let mut col_mean = vec![0.0; m];
    let mut grand = 0.0;
    for i in 0..m {
        for j in 0..m {
            let v = dist.data[i * m + j];
            row_mean[i] += v;
            col_mean[j] += v;
            grand += v;
        }
    }
    for v in row_mean.iter_mut().chain(col_mean.iter_mut()) {
        *v /= mf;
    }
    grand /= mf * mf;

    let mut data = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            data[i * m + j] = dist.data[i * m + j] - row_mean[i] - col_mean[j] + grand;
        }
    }
    CenteredDistanceMatrix { size: m, data }
}

fn check_pair(x: &SampleMatrix, y: &SampleMatrix) -> Result<()> {
    if x.rows() != y.rows() {
        return Err(Error::InvalidInput(format!(
            "sample counts differ: {} vs {}",
            x.rows(),
            y.rows()
        )));
    }
    if x.rows() < 2 {
        return Err(Error::InsufficientSamples(format!(
            "distance statistics need at least 2 samples, got {}",
            x.rows()
        )));
    }
    Ok(())
}

fn mean_product(a: &CenteredDistanceMatrix, b: &CenteredDistanceMatrix) -> f64 {
    let total: f64 = a.data.iter().zip(&b.data).map(|(u, v)| u * v).sum();
    total / (a.size * a.size) as f64
}

/// Empirical distance covariance: the mean entrywise product of the two
/// double-centered distance matrices.
pub fn distance_covariance(x: &SampleMatrix, y: &SampleMatrix) -> Result<f64> {
    check_pair(x, y)?;
    let a = double_center(&pairwise_distances(x)?);
    let b = double_center(&pairwise_distances(y)?);
    Ok(mean_product(&a, &b))
}

/// Distance correlation: distance covariance normalized by the geometric
/// mean of the two distance variances.
pub fn distance_correlation(x: &SampleMatrix, y: &SampleMatrix) -> Result<DCorResult> {
    check_pair(x, y)?;
    let a = double_center(&pairwise_distances(x)?);
    let b = double_center(&pairwise_distances(y)?);
    let dcov = mean_product(&a, &b);
    let dvar_x = mean_product(&a, &a);
    let dvar_y = mean_product(&b, &b);
    let denom = dvar_x * dvar_y;
    if denom <= 0.0 {
        return Ok(DCorResult {
            dcov,
            dvar_x,
            dvar_y,
            dcor: 0.0,
            degenerate: true,
        });
    }
    let dcor = (dcov / denom.sqrt()).clamp(0.0, 1.0);
    Ok(DCorResult {
        dcov,
        dvar_x,
        dvar_y,
        dcor,
        degenerate: false,
    })
}
