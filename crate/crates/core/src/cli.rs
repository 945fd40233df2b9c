//! Command-line front end: single-pair inference, synthetic dataset
//! generation, benchmark sweeps, m-stability curves and real-pair scans.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{emit_report, run_benchmark, BenchmarkSpec, Method};
use crate::empirical::DiscreteDataset;
use crate::error::{Error, Result};
use crate::realdata::{
    load_metadata, load_pair_columns, quantize, resolution_scan, PreprocessSpec, ScanOutcome,
};
use crate::subsampling::{infer_direction, linear_grid, m_stability_curve, SubsampleConfig};
use crate::synth::{generate, write_pair_file, Family, GeneratorSpec, DEFAULT_NOISE_SUPPORT};

#[derive(Parser)]
#[command(
    name = "subdc",
    about = "Causal direction inference for discrete data via subsampled distance correlation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MethodOpts {
    /// Master RNG seed; all randomness derives from it
    #[arg(long)]
    seed: u64,
    /// Ensemble size (number of subsampled datasets)
    #[arg(long, default_value_t = 100)]
    m: usize,
    /// Single inclusion probability (disables the grid search)
    #[arg(long, conflicts_with = "q_grid")]
    q: Option<f64>,
    /// Inclusion-probability grid as lo,hi,count
    #[arg(long, value_name = "LO,HI,COUNT")]
    q_grid: Option<String>,
    /// Minimum retained observations per subsample before redrawing
    #[arg(long, default_value_t = 10)]
    min_effective: usize,
}

impl MethodOpts {
    fn p_grid(&self) -> Result<Vec<f64>> {
        if let Some(q) = self.q {
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::InvalidInput(format!("--q must be in (0,1), got {q}")));
            }
            return Ok(vec![q]);
        }
        match &self.q_grid {
            Some(s) => {
                let parts: Vec<&str> = s.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::InvalidInput(
                        "--q-grid expects lo,hi,count".into(),
                    ));
                }
                let lo: f64 = parts[0]
                    .parse()
                    .map_err(|_| Error::InvalidInput("bad --q-grid lo".into()))?;
                let hi: f64 = parts[1]
                    .parse()
                    .map_err(|_| Error::InvalidInput("bad --q-grid hi".into()))?;
                let count: usize = parts[2]
                    .parse()
                    .map_err(|_| Error::InvalidInput("bad --q-grid count".into()))?;
                if count == 0 {
                    return Err(Error::InvalidInput("--q-grid count must be >= 1".into()));
                }
                Ok(linear_grid(lo, hi, count))
            }
            None => Ok(SubsampleConfig::default_grid()),
        }
    }

    fn config(&self) -> Result<SubsampleConfig> {
        let mut cfg = SubsampleConfig::new(self.m, self.p_grid()?, self.seed)?;
        cfg.min_effective = self.min_effective;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Infer the causal direction of a two-column pair file
    Infer {
        pairfile: PathBuf,
        #[command(flatten)]
        method: MethodOpts,
        /// Quantization resolution: values become round(10^k * v)
        #[arg(long, default_value_t = 0)]
        k: i32,
        /// Skip the first line of the pair file
        #[arg(long)]
        skip_header: bool,
    },
    /// Generate a synthetic cause-effect dataset
    Synth {
        /// exp1-original | exp1-modified | exp2-original | exp2-modified
        family: String,
        #[arg(long)]
        seed: u64,
        /// Cause support size |X|
        #[arg(long, default_value_t = 20)]
        support: usize,
        /// Effect alphabet size (|Y0| for exp1, |Y| for exp2); defaults to --support
        #[arg(long)]
        y_support: Option<usize>,
        /// Noise support values for the exp1 families
        #[arg(long, value_name = "V1,V2,...", allow_hyphen_values = true)]
        noise: Option<String>,
        #[arg(long, default_value_t = 2000)]
        n_samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replicated accuracy sweep over support sizes
    Bench {
        #[arg(long)]
        family: String,
        /// Comma-separated subset of SUB,DC
        #[arg(long, default_value = "SUB")]
        methods: String,
        /// Comma-separated support sizes
        #[arg(long, default_value = "20")]
        support: String,
        #[arg(long, default_value_t = 100)]
        n_datasets: usize,
        #[arg(long, default_value_t = 2000)]
        n_samples: usize,
        /// Full protocol: 1000 replications of 2000 samples
        #[arg(long)]
        paper_scale: bool,
        /// Record wall-clock seconds in the CSV (breaks byte-reproducibility)
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        method: MethodOpts,
        #[arg(long, value_name = "V1,V2,...", allow_hyphen_values = true)]
        noise: Option<String>,
        /// Accuracy credit for a tie
        #[arg(long, default_value_t = 0.5)]
        tie_weight: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Direction-score stability versus ensemble size, as CSV
    Mcurve {
        pairfile: PathBuf,
        #[command(flatten)]
        method: MethodOpts,
        /// Comma-separated ensemble sizes
        #[arg(long, default_value = "10,25,50,100")]
        m_values: String,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        k: i32,
        #[arg(long)]
        skip_header: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Scan a directory of real cause-effect pair files over resolutions
    Pairs {
        dir: PathBuf,
        /// Metadata file: `pair-id cause-column effect-column` per line
        #[arg(long)]
        meta: Option<PathBuf>,
        /// Comma-separated resolutions k
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        k: String,
        /// Max allowed difference between the two support sizes
        #[arg(long, default_value_t = 5)]
        tolerance: usize,
        #[arg(long, default_value_t = 50)]
        max_support: usize,
        #[arg(long)]
        skip_header: bool,
        #[command(flatten)]
        method: MethodOpts,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| Error::InvalidInput(format!("bad {what} entry '{t}'")))
        })
        .collect()
}

fn load_quantized(pairfile: &Path, k: i32, skip_header: bool) -> Result<DiscreteDataset> {
    let pair = load_pair_columns(pairfile, skip_header, 0, 1)?;
    let xq = quantize(&pair.x_values, k)?;
    let yq = quantize(&pair.y_values, k)?;
    let pairs: Vec<(i64, i64)> = xq.into_iter().zip(yq).collect();
    DiscreteDataset::encode(&pairs)
}

fn cmd_infer(pairfile: &Path, method: &MethodOpts, k: i32, skip_header: bool) -> Result<()> {
    let ds = load_quantized(pairfile, k, skip_header)?;
    let cfg = method.config()?;
    let report = infer_direction(&ds, &cfg)?;
    let line = serde_json::json!({
        "pair": pairfile.display().to_string(),
        "decision": report.decision,
        "s_f": report.forward_score,
        "s_b": report.backward_score,
        "p_star": report.p_star,
        "p_f": report.p_f,
        "p_b": report.p_b,
        "relative_gap": report.relative_gap,
        "support_x": ds.x_support(),
        "support_y": ds.y_support(),
    });
    println!("{line}");
    Ok(())
}

fn cmd_synth(
    family: &str,
    seed: u64,
    support: usize,
    y_support: Option<usize>,
    noise: Option<&str>,
    n_samples: usize,
    out: &Path,
) -> Result<()> {
    let family: Family = family.parse()?;
    let spec = GeneratorSpec {
        family,
        x_support: support,
        y_support: y_support.unwrap_or(support),
        noise_support: match noise {
            Some(s) => parse_list(s, "--noise")?,
            None => DEFAULT_NOISE_SUPPORT.to_vec(),
        },
        n: n_samples,
    };
    let mut rng = crate::rng::substream(seed, &[0]);
    let gt = generate(&spec, &mut rng)?;
    write_pair_file(&gt, &spec, seed, out)?;
    let line = serde_json::json!({
        "family": family,
        "out": out.display().to_string(),
        "n": spec.n,
        "support_x": gt.dataset.x_support(),
        "support_y": gt.dataset.y_support(),
        "truth": "x->y",
    });
    println!("{line}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    family: &str,
    methods: &str,
    support: &str,
    n_datasets: usize,
    n_samples: usize,
    paper_scale: bool,
    timing: bool,
    method: &MethodOpts,
    noise: Option<&str>,
    tie_weight: f64,
    out: &Path,
) -> Result<()> {
    let (n_datasets, n_samples) = if paper_scale {
        (1000, 2000)
    } else {
        (n_datasets, n_samples)
    };
    let spec = BenchmarkSpec {
        family: family.parse()?,
        support_grid: parse_list(support, "--support")?,
        n_datasets,
        n_samples,
        methods: methods
            .split(',')
            .map(|s| s.trim().parse::<Method>())
            .collect::<Result<_>>()?,
        m: method.m,
        p_grid: method.p_grid()?,
        noise_support: match noise {
            Some(s) => parse_list(s, "--noise")?,
            None => DEFAULT_NOISE_SUPPORT.to_vec(),
        },
        master_seed: method.seed,
        tie_weight,
    };
    spec.validate()?;
    let report = run_benchmark(&spec)?;
    emit_report(&report, out, timing)?;
    let line = serde_json::json!({
        "out": out.display().to_string(),
        "n_datasets": report.n_datasets,
        "cells": report.cells.len(),
    });
    println!("{line}");
    Ok(())
}

fn cmd_mcurve(
    pairfile: &Path,
    method: &MethodOpts,
    m_values: &str,
    reps: usize,
    k: i32,
    skip_header: bool,
    out: &Path,
) -> Result<()> {
    let ds = load_quantized(pairfile, k, skip_header)?;
    let m_values: Vec<usize> = parse_list(m_values, "--m-values")?;
    let grid = method.p_grid()?;
    let q = if grid.len() == 1 { grid[0] } else { 0.5 };
    let points = m_stability_curve(&ds, q, &m_values, reps, method.seed)?;
    let mut csv =
        String::from("m,forward_mean,forward_std,backward_mean,backward_std\n");
    for p in &points {
        csv.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{:.6}\n",
            p.m, p.forward_mean, p.forward_std, p.backward_mean, p.backward_std
        ));
    }
    std::fs::write(out, csv).map_err(|e| Error::io(out, e))?;
    let line = serde_json::json!({
        "out": out.display().to_string(),
        "rows": points.len(),
        "q": q,
    });
    println!("{line}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_pairs(
    dir: &Path,
    meta: Option<&Path>,
    k: &str,
    tolerance: usize,
    max_support: usize,
    skip_header: bool,
    method: &MethodOpts,
    out: &Path,
) -> Result<()> {
    let k_values: Vec<i32> = parse_list(k, "--k")?;
    let pre = PreprocessSpec {
        max_support,
        support_equality_tolerance: tolerance,
    };
    let columns = match meta {
        Some(path) => load_metadata(path)?,
        None => Default::default(),
    };
    let cfg = method.config()?;

    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && !p.to_string_lossy().ends_with(".meta.json")
                && meta.map_or(true, |m| p != m)
        })
        .collect();
    files.sort();

    let mut csv = String::from(
        "pair_id,k,support_x,support_y,eligible,s_f,s_b,relative_gap,decision,stable\n",
    );
    let mut scanned = 0usize;
    for file in &files {
        let stem = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let (cx, cy) = columns.get(&stem).copied().unwrap_or((0, 1));
        let pair = load_pair_columns(file, skip_header, cx, cy)?;
        let report = resolution_scan(&pair, &k_values, &pre, &cfg)?;
        let stable = match report.outcome {
            ScanOutcome::Stable(_) => "true",
            ScanOutcome::Unstable => "false",
            ScanOutcome::NoEligibleResolution => "no-eligible-resolution",
        };
        for row in &report.rows {
            let fmt_opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                row.pair_id,
                row.k,
                row.support_x,
                row.support_y,
                row.eligible,
                fmt_opt(row.forward_score),
                fmt_opt(row.backward_score),
                fmt_opt(row.relative_gap),
                row.decision.map(|d| d.to_string()).unwrap_or_default(),
                stable,
            ));
        }
        scanned += 1;
    }
    std::fs::write(out, csv).map_err(|e| Error::io(out, e))?;
    let line = serde_json::json!({
        "out": out.display().to_string(),
        "pairs": scanned,
    });
    println!("{line}");
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Infer {
            pairfile,
            method,
            k,
            skip_header,
        } => cmd_infer(&pairfile, &method, k, skip_header),
        Command::Synth {
            family,
            seed,
            support,
            y_support,
            noise,
            n_samples,
            out,
        } => cmd_synth(
            &family,
            seed,
            support,
            y_support,
            noise.as_deref(),
            n_samples,
            &out,
        ),
        Command::Bench {
            family,
            methods,
            support,
            n_datasets,
            n_samples,
            paper_scale,
            timing,
            method,
            noise,
            tie_weight,
            out,
        } => cmd_bench(
            &family,
            &methods,
            &support,
            n_datasets,
            n_samples,
            paper_scale,
            timing,
            &method,
            noise.as_deref(),
            tie_weight,
            &out,
        ),
        Command::Mcurve {
            pairfile,
            method,
            m_values,
            reps,
            k,
            skip_header,
            out,
        } => cmd_mcurve(&pairfile, &method, &m_values, reps, k, skip_header, &out),
        Command::Pairs {
            dir,
            meta,
            k,
            tolerance,
            max_support,
            skip_header,
            method,
            out,
        } => cmd_pairs(
            &dir,
            meta.as_deref(),
            &k,
            tolerance,
            max_support,
            skip_header,
            &method,
            &out,
        ),
    }
}

/// Parses argv and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    // spec-level preconditions are usage errors, not runtime failures
    if let Command::Bench { n_datasets, paper_scale, .. } = &cli.command {
        if *n_datasets == 0 && !paper_scale {
            eprintln!("error: --n-datasets must be >= 1");
            return 2;
        }
    }
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
