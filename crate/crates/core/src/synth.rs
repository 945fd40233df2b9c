//! Synthetic cause-effect benchmark generators. Four families: an additive
//! noise model with integer-vector probabilities (exp1-original), its
//! continuous-probability one-to-one variant with modular wraparound
//! (exp1-modified), a reference-set mechanism family (exp2-original), and
//! fully random mechanisms (exp2-modified). Ground truth is always x -> y.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::empirical::DiscreteDataset;
use crate::error::{Error, Result};

pub const DEFAULT_NOISE_SUPPORT: [i64; 5] = [-2, -1, 0, 1, 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Family {
    #[serde(rename = "exp1-original")]
    Exp1Original,
    #[serde(rename = "exp1-modified")]
    Exp1Modified,
    #[serde(rename = "exp2-original")]
    Exp2Original,
    #[serde(rename = "exp2-modified")]
    Exp2Modified,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Exp1Original => "exp1-original",
            Family::Exp1Modified => "exp1-modified",
            Family::Exp2Original => "exp2-original",
            Family::Exp2Modified => "exp2-modified",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp1-original" => Ok(Family::Exp1Original),
            "exp1-modified" => Ok(Family::Exp1Modified),
            "exp2-original" => Ok(Family::Exp2Original),
            "exp2-modified" => Ok(Family::Exp2Modified),
            other => Err(Error::InvalidSpec(format!("unknown family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub x_support: usize,
    /// |Y0| for the exp1 families (effect alphabet before noise), |Y| for exp2.
    pub y_support: usize,
    /// Noise values for the exp1 families; ignored by exp2.
    pub noise_support: Vec<i64>,
    pub n: usize,
}

impl GeneratorSpec {
    pub fn new(family: Family, x_support: usize, y_support: usize, n: usize) -> Self {
        GeneratorSpec {
            family,
            x_support,
            y_support,
            noise_support: DEFAULT_NOISE_SUPPORT.to_vec(),
            n,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.x_support < 2 || self.y_support < 2 {
            return Err(Error::InvalidSpec(format!(
                "supports must be >= 2, got ({}, {})",
                self.x_support, self.y_support
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be >= 1".into()));
        }
        match self.family {
            Family::Exp1Original | Family::Exp2Original => {
                if self.x_support < 4 {
                    return Err(Error::InvalidSpec(format!(
                        "{} requires |X| >= 4, got {}",
                        self.family, self.x_support
                    )));
                }
            }
            Family::Exp1Modified => {
                if self.x_support > self.y_support {
                    return Err(Error::InvalidSpec(format!(
                        "exp1-modified needs |X| <= |Y0| for a one-to-one mapping, got ({}, {})",
                        self.x_support, self.y_support
                    )));
                }
            }
            Family::Exp2Modified => {}
        }
        if matches!(self.family, Family::Exp1Original | Family::Exp1Modified)
            && self.noise_support.is_empty()
        {
            return Err(Error::InvalidSpec("noise support must be nonempty".into()));
        }
        Ok(())
    }
}

/// A generated dataset together with the distributions that produced it.
#[derive(Debug, Clone)]
pub struct GroundTruthDataset {
    pub dataset: DiscreteDataset,
    pub pmf_x: Vec<f64>,
    /// Row-stochastic |X| x (effect support) conditional, row-major.
    pub mechanism: Vec<f64>,
}

impl GroundTruthDataset {
    pub fn effect_support(&self) -> usize {
        self.dataset.y_support()
    }
}

/// Normalized vector of i.i.d. uniform integers in [1, upper].
fn integer_vector_pmf(len: usize, upper: u64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(1..=upper) as f64).collect();
    normalize(raw)
}

/// Normalized vector of i.i.d. Uniform[0,1] entries.
fn uniform_vector_pmf(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.gen::<f64>()).collect();
    normalize(raw)
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    for e in &mut v {
        *e /= total;
    }
    v
}

fn draw_categorical(pmf: &[f64], rng: &mut ChaCha8Rng) -> u32 {
    let r: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in pmf.iter().enumerate() {
        acc += p;
        if r < acc {
            return i as u32;
        }
    }
    (pmf.len() - 1) as u32
}

fn validate_pmf(pmf: &[f64], what: &str) -> Result<()> {
    if pmf.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(Error::InvalidSpec(format!("{what} has entries outside [0,1]")));
    }
    let total: f64 = pmf.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidSpec(format!("{what} sums to {total}, not 1")));
    }
    Ok(())
}

fn sample_codes(
    pmf_x: &[f64],
    mechanism: &[f64],
    ny: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<u32>, Vec<u32>)> {
    if n == 0 {
        return Err(Error::InvalidSpec("n must be >= 1".into()));
    }
    validate_pmf(pmf_x, "p(x)")?;
    if mechanism.len() != pmf_x.len() * ny {
        return Err(Error::InvalidSpec("mechanism shape mismatch".into()));
    }
    for (i, row) in mechanism.chunks(ny).enumerate() {
        validate_pmf(row, &format!("mechanism row {i}"))?;
    }
    let mut x_codes = Vec::with_capacity(n);
    let mut y_codes = Vec::with_capacity(n);
    for _ in 0..n {
        let x = draw_categorical(pmf_x, rng);
        let y = draw_categorical(&mechanism[x as usize * ny..(x as usize + 1) * ny], rng);
        x_codes.push(x);
        y_codes.push(y);
    }
    Ok((x_codes, y_codes))
}

/// Ancestral sampling for the SCM x -> y: x ~ pmf_x, y ~ mechanism row x.
/// Categories are the identity labels 0..k-1.
pub fn sample_dataset(
    pmf_x: &[f64],
    mechanism: &[f64],
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DiscreteDataset> {
    let nx = pmf_x.len();
    if nx == 0 || mechanism.len() % nx != 0 {
        return Err(Error::InvalidSpec("mechanism shape mismatch".into()));
    }
    let ny = mechanism.len() / nx;
    let (x_codes, y_codes) = sample_codes(pmf_x, mechanism, ny, n, rng)?;
    DiscreteDataset::from_codes(
        x_codes,
        y_codes,
        (0..nx as i64).collect(),
        (0..ny as i64).collect(),
    )
}

pub fn gen_exp1_original(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<GroundTruthDataset> {
    spec.validate()?;
    let upper = (spec.x_support / 4) as u64;
    let pmf_x = integer_vector_pmf(spec.x_support, upper, rng);
    // arbitrary (possibly many-to-one) mapping into the effect alphabet
    let f: Vec<i64> = (0..spec.x_support)
        .map(|_| rng.gen_range(0..spec.y_support as i64))
        .collect();
    let pmf_n = integer_vector_pmf(spec.noise_support.len(), upper, rng);

    // effect support: every reachable value f(x) + n, no clipping
    let mut values: Vec<i64> = f
        .iter()
        .flat_map(|&fx| spec.noise_support.iter().map(move |&nv| fx + nv))
        .collect();
    values.sort_unstable();
    values.dedup();
    let ny = values.len();

    let mut mechanism = vec![0.0; spec.x_support * ny];
    for (x, &fx) in f.iter().enumerate() {
        for (ni, &nv) in spec.noise_support.iter().enumerate() {
            let col = values.binary_search(&(fx + nv)).unwrap();
            mechanism[x * ny + col] += pmf_n[ni];
        }
    }

    let (x_codes, y_codes) = sample_codes(&pmf_x, &mechanism, ny, spec.n, rng)?;
    let dataset =
        DiscreteDataset::from_codes(x_codes, y_codes, (0..spec.x_support as i64).collect(), values)?;
    Ok(GroundTruthDataset {
        dataset,
        pmf_x,
        mechanism,
    })
}

pub fn gen_exp1_modified(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<GroundTruthDataset> {
    spec.validate()?;
    let pmf_x = uniform_vector_pmf(spec.x_support, rng);
    let pmf_n = uniform_vector_pmf(spec.noise_support.len(), rng);
    // one-to-one mapping: first |X| entries of a random permutation of Y0
    let mut targets: Vec<i64> = (0..spec.y_support as i64).collect();
    targets.shuffle(rng);
    let f = &targets[..spec.x_support];

    let ny = spec.y_support;
    let mut mechanism = vec![0.0; spec.x_support * ny];
    for (x, &fx) in f.iter().enumerate() {
        for (ni, &nv) in spec.noise_support.iter().enumerate() {
            let col = (fx + nv).rem_euclid(ny as i64) as usize;
            mechanism[x * ny + col] += pmf_n[ni];
        }
    }

    let (x_codes, y_codes) = sample_codes(&pmf_x, &mechanism, ny, spec.n, rng)?;
    let dataset = DiscreteDataset::from_codes(
        x_codes,
        y_codes,
        (0..spec.x_support as i64).collect(),
        (0..ny as i64).collect(),
    )?;
    Ok(GroundTruthDataset {
        dataset,
        pmf_x,
        mechanism,
    })
}

pub fn gen_exp2_original(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<GroundTruthDataset> {
    spec.validate()?;
    let upper = (spec.x_support / 4) as u64;
    let pmf_x = integer_vector_pmf(spec.x_support, upper, rng);
    let reference: Vec<Vec<f64>> = (0..spec.x_support / 4)
        .map(|_| integer_vector_pmf(spec.y_support, upper, rng))
        .collect();
    let mut mechanism = Vec::with_capacity(spec.x_support * spec.y_support);
    for _ in 0..spec.x_support {
        let pick = rng.gen_range(0..reference.len());
        mechanism.extend_from_slice(&reference[pick]);
    }
    let (x_codes, y_codes) = sample_codes(&pmf_x, &mechanism, spec.y_support, spec.n, rng)?;
    let dataset = DiscreteDataset::from_codes(
        x_codes,
        y_codes,
        (0..spec.x_support as i64).collect(),
        (0..spec.y_support as i64).collect(),
    )?;
    Ok(GroundTruthDataset {
        dataset,
        pmf_x,
        mechanism,
    })
}

pub fn gen_exp2_modified(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<GroundTruthDataset> {
    spec.validate()?;
    let pmf_x = uniform_vector_pmf(spec.x_support, rng);
    let mut mechanism = Vec::with_capacity(spec.x_support * spec.y_support);
    for _ in 0..spec.x_support {
        mechanism.extend(uniform_vector_pmf(spec.y_support, rng));
    }
    let (x_codes, y_codes) = sample_codes(&pmf_x, &mechanism, spec.y_support, spec.n, rng)?;
    let dataset = DiscreteDataset::from_codes(
        x_codes,
        y_codes,
        (0..spec.x_support as i64).collect(),
        (0..spec.y_support as i64).collect(),
    )?;
    Ok(GroundTruthDataset {
        dataset,
        pmf_x,
        mechanism,
    })
}

pub fn generate(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<GroundTruthDataset> {
    match spec.family {
        Family::Exp1Original => gen_exp1_original(spec, rng),
        Family::Exp1Modified => gen_exp1_modified(spec, rng),
        Family::Exp2Original => gen_exp2_original(spec, rng),
        Family::Exp2Modified => gen_exp2_modified(spec, rng),
    }
}

/// Sidecar metadata written next to a generated pair file.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SynthMeta {
    pub family: Family,
    pub x_support: usize,
    pub y_support: usize,
    pub noise_support: Vec<i64>,
    pub n: usize,
    pub seed: u64,
    pub truth: &'static str,
}

/// Writes the dataset as a two-column whitespace-separated pair file plus a
/// `<path>.meta.json` sidecar.
pub fn write_pair_file(
    gt: &GroundTruthDataset,
    spec: &GeneratorSpec,
    seed: u64,
    path: &Path,
) -> Result<()> {
    let ds = &gt.dataset;
    let mut out = String::new();
    for i in 0..ds.n() {
        let x = ds.x_categories()[ds.x_codes()[i] as usize];
        let y = ds.y_categories()[ds.y_codes()[i] as usize];
        out.push_str(&format!("{x} {y}\n"));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))?;

    let meta = SynthMeta {
        family: spec.family,
        x_support: spec.x_support,
        y_support: spec.y_support,
        noise_support: spec.noise_support.clone(),
        n: spec.n,
        seed,
        truth: "x->y",
    };
    let meta_path = path.with_extension(format!(
        "{}meta.json",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    let mut file = std::fs::File::create(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let json = serde_json::to_string_pretty(&meta)
        .map_err(|e| Error::InvalidInput(format!("metadata serialization: {e}")))?;
    writeln!(file, "{json}").map_err(|e| Error::io(&meta_path, e))?;
    Ok(())
}
