//! Causal direction inference between two discrete or categorical variables.
//!
//! The central idea: the distribution of the cause and the mechanism mapping
//! cause to effect are produced by independent generating schemes. Drawing an
//! ensemble of Bernoulli subsamples from the data yields repeated empirical
//! estimates of the (marginal, conditional) pair in each direction; distance
//! correlation over the ensemble measures how dependent the two schemes look.
//! The direction whose schemes look more independent (smaller distance
//! correlation) is declared causal.
//!
//! Modules:
//! - [`dcor`]: empirical distance covariance / correlation.
//! - [`empirical`]: category encoding, contingency tables, marginals and
//!   conditionals.
//! - [`dc_baseline`]: the one-sample-per-realization DC baseline and its
//!   support-size bias diagnostic.
//! - [`subsampling`]: the subsampled direction test, inclusion-probability
//!   grid search and ensemble-size stability curves.
//! - [`synth`]: synthetic cause-effect benchmark generators.
//! - [`realdata`]: pair-file ingestion, quantization and resolution scans.
//! - [`bench`]: replicated Monte Carlo accuracy sweeps and CSV reports.

pub mod bench;
pub mod cli;
pub mod dc_baseline;
pub mod dcor;
pub mod empirical;
pub mod error;
pub mod realdata;
pub mod rng;
pub mod subsampling;
pub mod synth;

pub use error::{Error, Result};

/// Outcome of a direction test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Decision {
    #[serde(rename = "x->y")]
    XToY,
    #[serde(rename = "y->x")]
    YToX,
    #[serde(rename = "tie")]
    Tie,
}

impl Decision {
    /// Smaller score wins; exact equality is reported as a tie rather than
    /// silently defaulting to a direction.
    pub fn from_scores(forward: f64, backward: f64) -> Decision {
        if forward < backward {
            Decision::XToY
        } else if forward > backward {
            Decision::YToX
        } else {
            Decision::Tie
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::XToY => "x->y",
            Decision::YToX => "y->x",
            Decision::Tie => "tie",
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
