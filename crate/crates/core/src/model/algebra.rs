use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A concrete absolute matrix order unit space.
///
/// `FdBlocks` is the block-diagonal algebra `⊕ M_{dᵢ}(ℂ)`. `CircleGrid` is the
/// algebra of `M_d`-valued functions on the circle, represented by their values
/// at the points `z_j = exp(2πi j / grid_points)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AlgebraJson", into = "AlgebraJson")]
pub enum AlgebraSpec {
    FdBlocks { block_dims: Vec<usize> },
    CircleGrid { dim: usize, grid_points: usize },
}

impl AlgebraSpec {
    pub fn fd(block_dims: &[usize]) -> Result<Self> {
        let spec = AlgebraSpec::FdBlocks {
            block_dims: block_dims.to_vec(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn circle(dim: usize, grid_points: usize) -> Result<Self> {
        let spec = AlgebraSpec::CircleGrid { dim, grid_points };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlgebraSpec::FdBlocks { block_dims } => {
                if block_dims.is_empty() {
                    return Err(Error::InvalidAlgebra("at least one block is required".into()));
                }
                if block_dims.iter().any(|&d| d == 0) {
                    return Err(Error::InvalidAlgebra("block dimensions must be positive".into()));
                }
            }
            AlgebraSpec::CircleGrid { dim, grid_points } => {
                if *dim == 0 {
                    return Err(Error::InvalidAlgebra("dim must be positive".into()));
                }
                if !grid_points.is_power_of_two() {
                    return Err(Error::InvalidAlgebra(format!(
                        "grid_points = {grid_points} is not a power of two"
                    )));
                }
                if *grid_points < 4 * dim {
                    return Err(Error::InvalidAlgebra(format!(
                        "grid_points = {grid_points} is below the resolution floor 4·dim = {}",
                        4 * dim
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_fd(&self) -> bool {
        matches!(self, AlgebraSpec::FdBlocks { .. })
    }

    /// Matrix size of each stored part at level one.
    pub fn part_dims(&self) -> Vec<usize> {
        match self {
            AlgebraSpec::FdBlocks { block_dims } => block_dims.clone(),
            AlgebraSpec::CircleGrid { dim, grid_points } => vec![*dim; *grid_points],
        }
    }

    pub fn num_parts(&self) -> usize {
        match self {
            AlgebraSpec::FdBlocks { block_dims } => block_dims.len(),
            AlgebraSpec::CircleGrid { grid_points, .. } => *grid_points,
        }
    }

    pub fn part_dim(&self, part: usize) -> usize {
        match self {
            AlgebraSpec::FdBlocks { block_dims } => block_dims[part],
            AlgebraSpec::CircleGrid { dim, .. } => *dim,
        }
    }

    /// Number of independent rank coordinates: one per block, or one for the circle.
    pub fn invariant_len(&self) -> usize {
        match self {
            AlgebraSpec::FdBlocks { block_dims } => block_dims.len(),
            AlgebraSpec::CircleGrid { .. } => 1,
        }
    }

    /// Level-one rank of the order unit per invariant coordinate.
    pub fn unit_ranks(&self) -> Vec<i64> {
        match self {
            AlgebraSpec::FdBlocks { block_dims } => block_dims.iter().map(|&d| d as i64).collect(),
            AlgebraSpec::CircleGrid { dim, .. } => vec![*dim as i64],
        }
    }

    /// Sample point `z_j` of the circle grid.
    pub fn sample_point(&self, j: usize) -> Option<Complex64> {
        match self {
            AlgebraSpec::FdBlocks { .. } => None,
            AlgebraSpec::CircleGrid { grid_points, .. } => {
                Some(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / *grid_points as f64))
            }
        }
    }

    /// Parses `fd:2,3`, `circle:1:64`, or an inline JSON object.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| Error::SpecParse(format!("algebra: {e}")));
        }
        let bad = || Error::SpecParse(format!("algebra `{text}`: expected fd:d1,d2,... or circle:dim:grid"));
        if let Some(rest) = text.strip_prefix("fd:") {
            let dims = rest
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Self::fd(&dims).map_err(|e| Error::SpecParse(e.to_string()));
        }
        if let Some(rest) = text.strip_prefix("circle:") {
            let mut it = rest.split(':');
            let dim = it.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
            let grid = it.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
            if it.next().is_some() {
                return Err(bad());
            }
            return Self::circle(dim, grid).map_err(|e| Error::SpecParse(e.to_string()));
        }
        Err(bad())
    }
}

impl std::fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraSpec::FdBlocks { block_dims } => {
                let dims: Vec<String> = block_dims.iter().map(|d| d.to_string()).collect();
                write!(f, "fd:{}", dims.join(","))
            }
            AlgebraSpec::CircleGrid { dim, grid_points } => write!(f, "circle:{dim}:{grid_points}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "variant", deny_unknown_fields)]
enum AlgebraJson {
    #[serde(rename = "fd")]
    Fd { blocks: Vec<usize> },
    #[serde(rename = "circle")]
    Circle { dim: usize, grid: usize },
}

impl TryFrom<AlgebraJson> for AlgebraSpec {
    type Error = Error;
    fn try_from(raw: AlgebraJson) -> Result<Self> {
        match raw {
            AlgebraJson::Fd { blocks } => AlgebraSpec::fd(&blocks),
            AlgebraJson::Circle { dim, grid } => AlgebraSpec::circle(dim, grid),
        }
    }
}

impl From<AlgebraSpec> for AlgebraJson {
    fn from(spec: AlgebraSpec) -> Self {
        match spec {
            AlgebraSpec::FdBlocks { block_dims } => AlgebraJson::Fd { blocks: block_dims },
            AlgebraSpec::CircleGrid { dim, grid_points } => AlgebraJson::Circle { dim, grid: grid_points },
        }
    }
}
