use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("empty table: no observations to estimate from")]
    EmptyTable,

    #[error("subsample degenerate: fewer than {min_effective} observations retained after {retries} redraws")]
    SubsampleDegenerate { min_effective: usize, retries: usize },

    #[error("no valid subsampling probability: every grid point was degenerate")]
    NoValidP,

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("quantization overflow: {value} at resolution {resolution} exceeds the integer range")]
    QuantizeOverflow { value: f64, resolution: i32 },

    #[error("no eligible resolution for pair {0}")]
    NoEligibleResolution(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
