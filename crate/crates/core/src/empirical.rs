//! Category encoding and empirical joint / marginal / conditional
//! distributions of a paired discrete sample.

use crate::error::{Error, Result};

/// Which causal direction is being scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Direction {
    /// x -> y: cause features from p(x), mechanism features from p(y|x).
    Forward,
    /// y -> x.
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Paired observations encoded as category indices, with the raw category
/// values kept for round-tripping back to text files.
///
/// The category dictionaries are fixed when the dataset is built and are
/// inherited unchanged by subsamples, so every subsample's empirical
/// distribution lives in the same coordinate system.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDataset {
    x_codes: Vec<u32>,
    y_codes: Vec<u32>,
    x_categories: Vec<i64>,
    y_categories: Vec<i64>,
}

impl DiscreteDataset {
    /// Encodes raw integer pairs. Categories get indices in ascending raw
    /// value order, so encoding is deterministic and order-independent.
    pub fn encode(pairs: &[(i64, i64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidInput("cannot encode an empty sequence".into()));
        }
        let mut x_categories: Vec<i64> = pairs.iter().map(|p| p.0).collect();
        let mut y_categories: Vec<i64> = pairs.iter().map(|p| p.1).collect();
        x_categories.sort_unstable();
        x_categories.dedup();
        y_categories.sort_unstable();
        y_categories.dedup();
        let x_codes = pairs
            .iter()
            .map(|p| x_categories.binary_search(&p.0).unwrap() as u32)
            .collect();
        let y_codes = pairs
            .iter()
            .map(|p| y_categories.binary_search(&p.1).unwrap() as u32)
            .collect();
        Ok(DiscreteDataset {
            x_codes,
            y_codes,
            x_categories,
            y_categories,
        })
    }

    /// Builds a dataset directly from codes with explicit category values.
    /// Supports may exceed the observed categories.
    pub fn from_codes(
        x_codes: Vec<u32>,
        y_codes: Vec<u32>,
        x_categories: Vec<i64>,
        y_categories: Vec<i64>,
    ) -> Result<Self> {
        if x_codes.len() != y_codes.len() {
            return Err(Error::InvalidInput("code sequences differ in length".into()));
        }
        if x_codes.is_empty() {
            return Err(Error::InvalidInput("empty dataset".into()));
        }
        let nx = x_categories.len() as u32;
        let ny = y_categories.len() as u32;
        if x_codes.iter().any(|&c| c >= nx) || y_codes.iter().any(|&c| c >= ny) {
            return Err(Error::InvalidInput("code out of range of its support".into()));
        }
        Ok(DiscreteDataset {
            x_codes,
            y_codes,
            x_categories,
            y_categories,
        })
    }

    pub fn n(&self) -> usize {
        self.x_codes.len()
    }

    pub fn x_support(&self) -> usize {
        self.x_categories.len()
    }

    pub fn y_support(&self) -> usize {
        self.y_categories.len()
    }

    pub fn x_codes(&self) -> &[u32] {
        &self.x_codes
    }

    pub fn y_codes(&self) -> &[u32] {
        &self.y_codes
    }

    pub fn x_categories(&self) -> &[i64] {
        &self.x_categories
    }

    pub fn y_categories(&self) -> &[i64] {
        &self.y_categories
    }

    /// Keeps the observations whose mask entry is true; the category
    /// dictionaries (and hence the supports) are inherited from `self`.
    pub fn filter(&self, keep: &[bool]) -> Result<Self> {
        if keep.len() != self.n() {
            return Err(Error::InvalidInput("mask length mismatch".into()));
        }
        let x_codes: Vec<u32> = self
            .x_codes
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(&c, _)| c)
            .collect();
        let y_codes: Vec<u32> = self
            .y_codes
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(&c, _)| c)
            .collect();
        if x_codes.is_empty() {
            return Err(Error::InvalidInput("subsample retained no observations".into()));
        }
        Ok(DiscreteDataset {
            x_codes,
            y_codes,
            x_categories: self.x_categories.clone(),
            y_categories: self.y_categories.clone(),
        })
    }

    /// Swaps the roles of the two variables.
    pub fn swapped(&self) -> Self {
        DiscreteDataset {
            x_codes: self.y_codes.clone(),
            y_codes: self.x_codes.clone(),
            x_categories: self.y_categories.clone(),
            y_categories: self.x_categories.clone(),
        }
    }
}

/// |X| x |Y| contingency counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointTable {
    counts: Vec<u64>,
    nx: usize,
    ny: usize,
    total: u64,
}

impl JointTable {
    /// Tallies codes into a table with the given fixed supports.
    pub fn from_codes(
        x_codes: &[u32],
        y_codes: &[u32],
        supports: (usize, usize),
    ) -> Result<Self> {
        let (nx, ny) = supports;
        if x_codes.len() != y_codes.len() {
            return Err(Error::InvalidInput("code sequences differ in length".into()));
        }
        let mut counts = vec![0u64; nx * ny];
        for (&x, &y) in x_codes.iter().zip(y_codes) {
            if x as usize >= nx || y as usize >= ny {
                return Err(Error::InvalidInput(format!(
                    "code ({x},{y}) out of range for supports ({nx},{ny})"
                )));
            }
            counts[x as usize * ny + y as usize] += 1;
        }
        Ok(JointTable {
            counts,
            nx,
            ny,
            total: x_codes.len() as u64,
        })
    }

    pub fn from_dataset(ds: &DiscreteDataset) -> Result<Self> {
        JointTable::from_codes(
            ds.x_codes(),
            ds.y_codes(),
            (ds.x_support(), ds.y_support()),
        )
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, x: usize, y: usize) -> u64 {
        self.counts[x * self.ny + y]
    }

    fn check_nonempty(&self) -> Result<()> {
        if self.total == 0 {
            Err(Error::EmptyTable)
        } else {
            Ok(())
        }
    }

    /// Empirical marginal distribution of one axis.
    pub fn marginal(&self, axis: Axis) -> Result<Vec<f64>> {
        self.check_nonempty()?;
        let t = self.total as f64;
        let probs = match axis {
            Axis::X => (0..self.nx)
                .map(|i| (0..self.ny).map(|j| self.count(i, j)).sum::<u64>() as f64 / t)
                .collect(),
            Axis::Y => (0..self.ny)
                .map(|j| (0..self.nx).map(|i| self.count(i, j)).sum::<u64>() as f64 / t)
                .collect(),
        };
        Ok(probs)
    }

    /// Conditional pmfs, one row per category of the conditioning axis,
    /// row-major. Rows whose marginal count is zero are all-zeros, keeping
    /// the feature dimension fixed across subsamples.
    pub fn conditional(&self, given: Axis) -> Result<Vec<f64>> {
        self.check_nonempty()?;
        let (rows, cols) = match given {
            Axis::X => (self.nx, self.ny),
            Axis::Y => (self.ny, self.nx),
        };
        let mut out = vec![0.0; rows * cols];
        for r in 0..rows {
            let row_total: u64 = (0..cols)
                .map(|c| match given {
                    Axis::X => self.count(r, c),
                    Axis::Y => self.count(c, r),
                })
                .sum();
            if row_total == 0 {
                continue;
            }
            for c in 0..cols {
                let count = match given {
                    Axis::X => self.count(r, c),
                    Axis::Y => self.count(c, r),
                };
                out[r * cols + c] = count as f64 / row_total as f64;
            }
        }
        Ok(out)
    }

    /// The (marginal, flattened conditional) feature pair for one direction:
    /// forward gives (p(x), p(y|x) row-major), backward swaps the roles.
    pub fn flatten_features(&self, direction: Direction) -> Result<(Vec<f64>, Vec<f64>)> {
        match direction {
            Direction::Forward => Ok((self.marginal(Axis::X)?, self.conditional(Axis::X)?)),
            Direction::Backward => Ok((self.marginal(Axis::Y)?, self.conditional(Axis::Y)?)),
        }
    }
}
