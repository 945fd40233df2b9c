//! Monte Carlo benchmark driver: replicated accuracy sweeps over support
//! sizes for the subsampling method and the DC baseline, with deterministic
//! per-replication seeds so results do not depend on thread scheduling.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::dc_baseline::{dc_infer, dc_score};
use crate::empirical::Direction;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, substream};
use crate::subsampling::{infer_direction, relative_gap, SubsampleConfig};
use crate::synth::{generate, Family, GeneratorSpec};
use crate::Decision;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Method {
    /// Subsampling with distance correlation.
    Sub,
    /// DC-causal baseline.
    Dc,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Sub => "SUB",
            Method::Dc => "DC",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SUB" => Ok(Method::Sub),
            "DC" => Ok(Method::Dc),
            other => Err(Error::InvalidInput(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub family: Family,
    pub support_grid: Vec<usize>,
    pub n_datasets: usize,
    pub n_samples: usize,
    pub methods: Vec<Method>,
    pub m: usize,
    pub p_grid: Vec<f64>,
    pub noise_support: Vec<i64>,
    pub master_seed: u64,
    /// Credit for a tie; 0.5 by default so ties do not bias either way.
    pub tie_weight: f64,
}

impl BenchmarkSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_datasets == 0 {
            return Err(Error::InvalidInput("n_datasets must be >= 1".into()));
        }
        if self.support_grid.is_empty() {
            return Err(Error::InvalidInput("support grid must be nonempty".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidInput("at least one method required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CellReport {
    pub method: Method,
    pub support: usize,
    pub correct: usize,
    pub incorrect: usize,
    pub ties: usize,
    pub failures: usize,
    pub accuracy: f64,
    pub mean_relative_gap: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AccuracyReport {
    pub n_datasets: usize,
    pub cells: Vec<CellReport>,
}

enum Outcome {
    Decided(Decision, f64),
    Failed,
}

fn run_method(
    method: Method,
    gt_dataset: &crate::empirical::DiscreteDataset,
    spec: &BenchmarkSpec,
    method_seed: u64,
) -> Outcome {
    match method {
        Method::Sub => {
            let cfg = SubsampleConfig {
                m: spec.m,
                p_grid: spec.p_grid.clone(),
                seed: method_seed,
                min_effective: 10,
            };
            match infer_direction(gt_dataset, &cfg) {
                Ok(r) => Outcome::Decided(r.decision, r.relative_gap),
                Err(_) => Outcome::Failed,
            }
        }
        Method::Dc => {
            let fwd = dc_score(gt_dataset, Direction::Forward);
            let bwd = dc_score(gt_dataset, Direction::Backward);
            match (fwd, bwd, dc_infer(gt_dataset)) {
                (Ok(f), Ok(b), Ok(d)) => {
                    Outcome::Decided(d, relative_gap(f.score, b.score).unwrap_or(0.0))
                }
                _ => Outcome::Failed,
            }
        }
    }
}

/// Runs every (support size, method) cell of the sweep. Replications run in
/// parallel with per-replication derived seeds and are aggregated in
/// replication order, so the report is identical for any thread count.
pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<AccuracyReport> {
    spec.validate()?;
    let mut cells = Vec::new();
    for (si, &support) in spec.support_grid.iter().enumerate() {
        let start = Instant::now();
        // one dataset per replication, shared by all methods
        let outcomes: Vec<Vec<Outcome>> = (0..spec.n_datasets)
            .into_par_iter()
            .map(|rep| {
                let gen_spec = GeneratorSpec {
                    family: spec.family,
                    x_support: support,
                    y_support: support,
                    noise_support: spec.noise_support.clone(),
                    n: spec.n_samples,
                };
                let mut rng =
                    substream(spec.master_seed, &[si as u64, rep as u64, 0]);
                let gt = match generate(&gen_spec, &mut rng) {
                    Ok(gt) => gt,
                    Err(_) => return spec.methods.iter().map(|_| Outcome::Failed).collect(),
                };
                spec.methods
                    .iter()
                    .enumerate()
                    .map(|(mi, &method)| {
                        let method_seed = derive_seed(
                            spec.master_seed,
                            &[si as u64, rep as u64, 1 + mi as u64],
                        );
                        run_method(method, &gt.dataset, spec, method_seed)
                    })
                    .collect()
            })
            .collect();
        let seconds = start.elapsed().as_secs_f64();

        for (mi, &method) in spec.methods.iter().enumerate() {
            let mut correct = 0;
            let mut incorrect = 0;
            let mut ties = 0;
            let mut failures = 0;
            let mut gap_sum = 0.0;
            let mut gap_count = 0usize;
            for rep_outcomes in &outcomes {
                match &rep_outcomes[mi] {
                    Outcome::Decided(Decision::XToY, gap) => {
                        correct += 1;
                        gap_sum += gap;
                        gap_count += 1;
                    }
                    Outcome::Decided(Decision::YToX, gap) => {
                        incorrect += 1;
                        gap_sum += gap;
                        gap_count += 1;
                    }
                    Outcome::Decided(Decision::Tie, gap) => {
                        ties += 1;
                        gap_sum += gap;
                        gap_count += 1;
                    }
                    Outcome::Failed => failures += 1,
                }
            }
            let accuracy =
                (correct as f64 + spec.tie_weight * ties as f64) / spec.n_datasets as f64;
            let mean_relative_gap = if gap_count > 0 {
                gap_sum / gap_count as f64
            } else {
                0.0
            };
            cells.push(CellReport {
                method,
                support,
                correct,
                incorrect,
                ties,
                failures,
                accuracy,
                mean_relative_gap,
                seconds,
            });
        }
    }
    Ok(AccuracyReport {
        n_datasets: spec.n_datasets,
        cells,
    })
}

/// Writes the accuracy report as CSV. Timing is only written when
/// `include_timing` is set; otherwise the column holds `NA` so that repeated
/// runs with the same seed produce byte-identical files.
pub fn emit_report(report: &AccuracyReport, path: &Path, include_timing: bool) -> Result<()> {
    let mut out = String::from(
        "method,support_size,accuracy,mean_relative_gap,ties,failures,seconds\n",
    );
    for cell in &report.cells {
        let seconds = if include_timing {
            format!("{:.3}", cell.seconds)
        } else {
            "NA".to_string()
        };
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{},{},{}\n",
            cell.method, cell.support, cell.accuracy, cell.mean_relative_gap, cell.ties,
            cell.failures, seconds
        ));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsampling::linear_grid;

    fn tiny_spec() -> BenchmarkSpec {
        BenchmarkSpec {
            family: Family::Exp1Modified,
            support_grid: vec![6],
            n_datasets: 4,
            n_samples: 300,
            methods: vec![Method::Sub, Method::Dc],
            m: 15,
            p_grid: linear_grid(0.2, 0.8, 3),
            noise_support: vec![-1, 0, 1],
            master_seed: 404,
            tie_weight: 0.5,
        }
    }

    #[test]
    fn counts_sum_to_n_datasets() {
        let report = run_benchmark(&tiny_spec()).unwrap();
        assert_eq!(report.cells.len(), 2);
        for cell in &report.cells {
            assert_eq!(
                cell.correct + cell.incorrect + cell.ties + cell.failures,
                4
            );
            assert!((0.0..=1.0).contains(&cell.accuracy));
        }
    }

    #[test]
    fn single_replication_accuracy_levels() {
        let mut spec = tiny_spec();
        spec.n_datasets = 1;
        let report = run_benchmark(&spec).unwrap();
        for cell in &report.cells {
            assert!(
                [0.0, 0.5, 1.0].contains(&cell.accuracy),
                "accuracy {}",
                cell.accuracy
            );
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let a = run_benchmark(&tiny_spec()).unwrap();
        let b = run_benchmark(&tiny_spec()).unwrap();
        for (ca, cb) in a.cells.iter().zip(&b.cells) {
            assert_eq!(
                (ca.correct, ca.incorrect, ca.ties, ca.failures),
                (cb.correct, cb.incorrect, cb.ties, cb.failures)
            );
            assert_eq!(ca.accuracy, cb.accuracy);
            assert_eq!(ca.mean_relative_gap, cb.mean_relative_gap);
        }
    }

    #[test]
    fn zero_datasets_rejected() {
        let mut spec = tiny_spec();
        spec.n_datasets = 0;
        assert!(run_benchmark(&spec).is_err());
    }

    #[test]
    fn emit_csv_shape() {
        let mut spec = tiny_spec();
        spec.support_grid = vec![6, 8, 10];
        let report = run_benchmark(&spec).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.csv");
        emit_report(&report, &path, false).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 6); // header + 2 methods x 3 sizes
        assert!(lines[0].starts_with("method,support_size"));
        // byte-identical on re-emission
        let path2 = dir.path().join("report2.csv");
        emit_report(&run_benchmark(&spec).unwrap(), &path2, false).unwrap();
        assert_eq!(text, std::fs::read_to_string(&path2).unwrap());
    }

    #[test]
    fn empty_grid_header_only() {
        let report = AccuracyReport {
            n_datasets: 0,
            cells: vec![],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        emit_report(&report, &path, false).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1);
    }
}
