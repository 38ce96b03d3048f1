use serde::{Deserialize, Serialize};

use super::{batch_stderr, DensityMatrixGrid, Grid1D, Method, PairDistributionGrid};
use crate::manybody::{ManyBodyState, Statistics};

/// `table[i][k] = φ_k(z_i)`.
pub(crate) fn orbital_table(state: &ManyBodyState, points: &[f64]) -> Vec<Vec<f64>> {
    let mut eval = state.evaluator();
    points
        .iter()
        .map(|&z| {
            let mut row = vec![0.0; state.n()];
            eval.eval(z, &mut row);
            row
        })
        .collect()
}

/// `ρ(z) = Σ_occ φ(z)²`, identical for both statistics.
pub fn density_profile(state: &ManyBodyState, grid: &Grid1D) -> Vec<f64> {
    orbital_table(state, &grid.points)
        .iter()
        .map(|row| row.iter().map(|v| v * v).sum())
        .collect()
}

/// `D(z₁, z₂) = ½ Σ_{α,α′} (φ_α(z₁)φ_α′(z₂) − φ_α(z₂)φ_α′(z₁))²`.
pub fn pair_distribution(state: &ManyBodyState, grid: &Grid1D) -> PairDistributionGrid {
    let table = orbital_table(state, &grid.points);
    let n = grid.len();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&table[i], &table[j]);
            let mut sum = 0.0;
            for p in 0..a.len() {
                for r in 0..a.len() {
                    let d = a[p] * b[r] - b[p] * a[r];
                    sum += d * d;
                }
            }
            values[i][j] = 0.5 * sum;
            values[j][i] = 0.5 * sum;
        }
    }
    PairDistributionGrid {
        grid: grid.clone(),
        particles: state.n(),
        values,
    }
}

/// `ρ^F(z, z′) = Σ_occ φ(z) φ(z′)`.
pub fn rspdm_fermi(state: &ManyBodyState, grid: &Grid1D) -> DensityMatrixGrid {
    closed_form_matrix(state, grid, Statistics::Fermi)
}

pub(crate) fn closed_form_matrix(
    state: &ManyBodyState,
    grid: &Grid1D,
    statistics: Statistics,
) -> DensityMatrixGrid {
    let table = orbital_table(state, &grid.points);
    let n = grid.len();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v: f64 = table[i].iter().zip(&table[j]).map(|(a, b)| a * b).sum();
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    DensityMatrixGrid {
        grid: grid.clone(),
        statistics,
        method: Method::ClosedForm,
        particles: state.n(),
        values,
        stderr: None,
        seed: None,
        samples: None,
        batches: None,
    }
}

/// Per-particle averages of position and potential energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub mean_z: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_z_stderr: Option<f64>,
    /// `⟨2q cos 2z⟩`, the potential in units of `ħ²ω²/(2m)`.
    pub mean_potential_lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_potential_lambda_stderr: Option<f64>,
    /// `⟨μB cos 2z⟩` in joules, when SI parameters are known.
    pub mean_potential_j: Option<f64>,
}

/// `⟨z⟩ = (1/N)∫zρ dz` and `⟨V⟩ = (1/N)∫μB cos(2z) ρ dz` from the closed-form density.
pub fn average_position_and_potential(state: &ManyBodyState, grid: &Grid1D) -> Averages {
    let rho = density_profile(state, grid);
    averages_from_density(state, grid, &rho, None)
}

/// Same averages from any density on `grid`, e.g. a Monte Carlo diagonal;
/// `batches` are per-batch densities for error propagation.
pub fn averages_from_density(
    state: &ManyBodyState,
    grid: &Grid1D,
    density: &[f64],
    batches: Option<&[Vec<f64>]>,
) -> Averages {
    let n = state.n() as f64;
    let q = state.config().q();
    let zf: Vec<f64> = grid.points.clone();
    let vf: Vec<f64> = grid
        .points
        .iter()
        .map(|z| 2.0 * q * (2.0 * z).cos())
        .collect();
    let average = |weight: &[f64], rho: &[f64]| -> f64 {
        let f: Vec<f64> = weight.iter().zip(rho).map(|(w, r)| w * r).collect();
        grid.integrate(&f) / n
    };
    let mean_z = average(&zf, density);
    let mean_potential_lambda = average(&vf, density);
    let (mean_z_stderr, mean_potential_lambda_stderr) = match batches {
        Some(b) => (
            Some(batch_stderr(b.iter().map(|r| average(&zf, r)))),
            Some(batch_stderr(b.iter().map(|r| average(&vf, r)))),
        ),
        None => (None, None),
    };
    Averages {
        mean_z,
        mean_z_stderr,
        mean_potential_lambda,
        mean_potential_lambda_stderr,
        mean_potential_j: state.config().energy_from_lambda(mean_potential_lambda),
    }
}
