//! Brute-force tensor-trapezoid evaluation of the reduced density matrix
//! `ρ(z, z′) = N ∫ ψ(z, X) ψ(z′, X) dX`, independent of both the orbital-sum
//! closed form and the Monte Carlo sampler.

use super::closed_form::orbital_table;
use super::{DensityMatrixGrid, Grid1D, Method};
use crate::error::{Error, Result};
use crate::manybody::{determinant, factorial, sign_prefactor, ManyBodyState, Statistics};

const MAX_PARTICLES: usize = 3;

/// Periodic trapezoid rule with `panels` nodes `p·L/panels` per remaining
/// coordinate. With `panels` a multiple of `grid.len() − 1` the hard-core
/// kinks of `ψ^B` fall on nodes and the rule stays second order.
pub fn rspdm_quadrature_oracle(
    state: &ManyBodyState,
    grid: &Grid1D,
    statistics: Statistics,
    panels: usize,
) -> Result<DensityMatrixGrid> {
    let n_particles = state.n();
    if n_particles > MAX_PARTICLES {
        return Err(Error::UnsupportedSize(format!(
            "quadrature oracle supports N <= {MAX_PARTICLES}, got {n_particles}"
        )));
    }
    if panels < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 panels, got {panels}"
        )));
    }
    let length = state.box_length();
    let nodes: Vec<f64> = (0..panels)
        .map(|p| p as f64 * length / panels as f64)
        .collect();
    let node_table = orbital_table(state, &nodes);
    let grid_table = orbital_table(state, &grid.points);
    let n = grid.len();
    let h = length / panels as f64;
    let rest = n_particles - 1;
    let weight = n_particles as f64 * h.powi(rest as i32) / factorial(n_particles);

    let mut sums = vec![0.0; n * n];
    let mut psi = vec![0.0; n];
    let mut matrix = vec![0.0; n_particles * n_particles];
    let mut coords = vec![0.0; n_particles];
    let mut idx = vec![0usize; rest];
    let total: usize = panels.pow(rest as u32);
    for flat in 0..total {
        let mut r = flat;
        for slot in idx.iter_mut() {
            *slot = r % panels;
            r /= panels;
        }
        for (i, row) in grid_table.iter().enumerate() {
            coords[0] = grid.points[i];
            matrix[..n_particles].copy_from_slice(row);
            for (k, &p) in idx.iter().enumerate() {
                coords[k + 1] = nodes[p];
                matrix[(k + 1) * n_particles..(k + 2) * n_particles]
                    .copy_from_slice(&node_table[p]);
            }
            let det = determinant(&mut matrix, n_particles);
            psi[i] = match statistics {
                Statistics::Fermi => det,
                Statistics::Bose => sign_prefactor(&coords) as f64 * det,
            };
        }
        for i in 0..n {
            let a = psi[i];
            if a == 0.0 {
                continue;
            }
            for j in i..n {
                sums[i * n + j] += a * psi[j];
            }
        }
    }

    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = weight * sums[i * n + j];
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    Ok(DensityMatrixGrid {
        grid: grid.clone(),
        statistics,
        method: Method::QuadratureOracle,
        particles: n_particles,
        values,
        stderr: None,
        seed: None,
        samples: None,
        batches: None,
    })
}
