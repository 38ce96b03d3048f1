//! One- and two-body observables of the Fermi and Tonks-Girardeau ground
//! states on a uniform grid over `[0, Mπ]`.
//!
//! Density, pair distribution, average position and potential energy depend
//! only on `|ψ|²` and are computed once, in closed form, for both statistics.
//! The reduced density matrix differs: the Fermi one is an orbital sum, the
//! Bose one is a Monte Carlo estimate of the defining `(N−1)`-dimensional
//! integral (with a tensor-quadrature oracle for `N ≤ 3`).

mod closed_form;
mod cut;
mod grid;
mod momentum;
mod monte_carlo;
mod oracle;

pub use closed_form::{
    average_position_and_potential, averages_from_density, density_profile, pair_distribution,
    rspdm_fermi, Averages,
};
pub use cut::{antidiagonal_cut, antidiagonal_variance, CutPoint};
pub use grid::Grid1D;
pub use momentum::{
    fermi_momentum_distribution, momentum_distribution, momentum_from_density_matrix,
    second_moment, total_momentum, MomentumInput,
};
pub use monte_carlo::{rspdm_bose_mc, McConfig, MC_BATCHES};
pub use oracle::rspdm_quadrature_oracle;

use serde::{Deserialize, Serialize};

use crate::manybody::Statistics;

/// How a density matrix was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    MonteCarlo,
    QuadratureOracle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::MonteCarlo => "monte_carlo",
            Method::QuadratureOracle => "quadrature_oracle",
        })
    }
}

/// A value with an optional one-sigma error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: Option<f64>,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            stderr: None,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.stderr.unwrap_or(0.0)
    }
}

/// `ρ(z_i, z_j)` on a square grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixGrid {
    pub grid: Grid1D,
    pub statistics: Statistics,
    pub method: Method,
    pub particles: usize,
    pub values: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    /// Per-batch Monte Carlo estimates (row-major), used to propagate errors
    /// into derived quantities. Not serialized.
    #[serde(skip)]
    pub batches: Option<Vec<Vec<f64>>>,
}

impl DensityMatrixGrid {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.values[i][i]).collect()
    }

    pub fn diagonal_stderr(&self) -> Option<Vec<f64>> {
        self.stderr
            .as_ref()
            .map(|s| (0..self.len()).map(|i| s[i][i]).collect())
    }

    /// Trapezoid `∫ρ(z,z)dz`.
    pub fn trace(&self) -> f64 {
        self.grid.integrate(&self.diagonal())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..i).all(|j| self.values[i][j] == self.values[j][i]))
    }
}

/// `D(z_i, z_j)`, normalized to `N(N−1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDistributionGrid {
    pub grid: Grid1D,
    pub particles: usize,
    pub values: Vec<Vec<f64>>,
}

impl PairDistributionGrid {
    /// Double trapezoid integral.
    pub fn integral(&self) -> f64 {
        let w = self.grid.weights();
        self.values
            .iter()
            .zip(&w)
            .map(|(row, wi)| wi * row.iter().zip(&w).map(|(v, wj)| v * wj).sum::<f64>())
            .sum()
    }
}

/// Occupations `n_j` of the lattice momenta `κ_j = 2j/M`, with `Σ n_j = N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumDistribution {
    pub cycles: usize,
    pub statistics: Statistics,
    pub method: Method,
    pub indices: Vec<i64>,
    pub momenta: Vec<f64>,
    pub occupations: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
    #[serde(skip)]
    pub batches: Option<Vec<Vec<f64>>>,
}

impl MomentumDistribution {
    pub fn total(&self) -> f64 {
        self.occupations.iter().sum()
    }

    pub fn occupation(&self, j: i64) -> Option<f64> {
        self.indices
            .iter()
            .position(|&k| k == j)
            .map(|i| self.occupations[i])
    }

    pub fn stderr_of(&self, j: i64) -> Option<f64> {
        let i = self.indices.iter().position(|&k| k == j)?;
        self.stderr.as_ref().map(|s| s[i])
    }

    /// Applies a linear functional of the occupations, with a batch error
    /// when batches are available.
    pub fn linear_functional(&self, weight: impl Fn(f64) -> f64) -> Estimate {
        let apply = |occ: &[f64]| -> f64 {
            self.momenta
                .iter()
                .zip(occ)
                .map(|(&k, &n)| weight(k) * n)
                .sum()
        };
        let value = apply(&self.occupations);
        let stderr = self
            .batches
            .as_ref()
            .map(|b| batch_stderr(b.iter().map(|occ| apply(occ))));
        Estimate { value, stderr }
    }
}

/// Standard error of the mean from a set of batch estimates.
pub fn batch_stderr(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let b = v.len() as f64;
    if v.len() < 2 {
        return f64::NAN;
    }
    let mean = v.iter().sum::<f64>() / b;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (b - 1.0);
    (var / b).sqrt()
}
