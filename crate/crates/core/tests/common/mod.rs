//! Shared test helpers: a straight-from-definition distance statistics
//! oracle, independent of the library's implementation path.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct OracleResult {
    pub dcov: f64,
    pub dvar_x: f64,
    pub dvar_y: f64,
    pub dcor: f64,
}

fn norm_diff(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

fn centered(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = rows.len();
    let mut d = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            d[i][j] = norm_diff(&rows[i], &rows[j]);
        }
    }
    let row_mean: Vec<f64> = (0..m).map(|i| d[i].iter().sum::<f64>() / m as f64).collect();
    let col_mean: Vec<f64> = (0..m)
        .map(|j| (0..m).map(|i| d[i][j]).sum::<f64>() / m as f64)
        .collect();
    let grand = row_mean.iter().sum::<f64>() / m as f64;
    let mut c = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            c[i][j] = d[i][j] - row_mean[i] - col_mean[j] + grand;
        }
    }
    c
}

fn mean_entry_product(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let m = a.len();
    let mut s = 0.0;
    for i in 0..m {
        for j in 0..m {
            s += a[i][j] * b[i][j];
        }
    }
    s / (m * m) as f64
}

/// Element-by-element evaluation of the estimator definitions.
pub fn oracle(x: &[Vec<f64>], y: &[Vec<f64>]) -> OracleResult {
    let a = centered(x);
    let b = centered(y);
    let dcov = mean_entry_product(&a, &b);
    let dvar_x = mean_entry_product(&a, &a);
    let dvar_y = mean_entry_product(&b, &b);
    let denom = dvar_x * dvar_y;
    let dcor = if denom > 0.0 { dcov / denom.sqrt() } else { 0.0 };
    OracleResult {
        dcov,
        dvar_x,
        dvar_y,
        dcor,
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random m x d sample rows with entries in [-5, 5].
pub fn random_rows(m: usize, d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect())
        .collect()
}
