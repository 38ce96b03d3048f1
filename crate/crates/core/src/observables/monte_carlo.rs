//! Monte Carlo estimate of the Bose reduced density matrix
//!
//! ```text
//! ρ^B(z, z′) = N ∫ ψ^B(z, X) ψ^B(z′, X) dX,   X ∈ [0, Mπ]^{N−1},
//! ```
//!
//! with `X` drawn uniformly. Samples are split into a fixed number of batches,
//! each with its own ChaCha stream `(seed, batch)`; batches are merged in
//! index order, so the worker count never changes the result.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::closed_form::{closed_form_matrix, orbital_table};
use super::{DensityMatrixGrid, Grid1D, Method};
use crate::error::{Error, Result};
use crate::manybody::{determinant, factorial, sign_prefactor, ManyBodyState, Statistics};

/// Number of independent sample streams (and error batches).
pub const MC_BATCHES: usize = 64;

/// Below this many samples the per-entry standard error is meaningless.
const MIN_SAMPLES: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            samples: 1_000_000,
            seed: 0x5eed_7095,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// Running sums of `ψ_i ψ_j` and its square over the upper triangle.
struct Accumulator {
    count: u64,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        let len = n * (n + 1) / 2;
        Accumulator {
            count: 0,
            sum: vec![0.0; len],
            sum_sq: vec![0.0; len],
        }
    }

    fn add(&mut self, psi: &[f64]) {
        self.count += 1;
        let mut idx = 0;
        for (i, &a) in psi.iter().enumerate() {
            let row = &psi[i..];
            let sums = &mut self.sum[idx..idx + row.len()];
            let sqs = &mut self.sum_sq[idx..idx + row.len()];
            for ((s, sq), &b) in sums.iter_mut().zip(sqs.iter_mut()).zip(row) {
                let p = a * b;
                *s += p;
                *sq += p * p;
            }
            idx += row.len();
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        self.count += other.count;
        self.sum
            .iter_mut()
            .zip(&other.sum)
            .for_each(|(a, b)| *a += b);
        self.sum_sq
            .iter_mut()
            .zip(&other.sum_sq)
            .for_each(|(a, b)| *a += b);
    }
}

/// Per-sample work shared by all grid points: the first-row cofactors of the
/// Slater matrix with `X` in rows `2..N`.
struct SampleKernel<'a> {
    state: &'a ManyBodyState,
    grid_table: &'a [Vec<f64>],
    grid: &'a [f64],
    n: usize,
    norm: f64,
    xs: Vec<f64>,
    sorted: Vec<f64>,
    rows: Vec<f64>,
    minor: Vec<f64>,
    cofactors: Vec<f64>,
    orbital_row: Vec<f64>,
    psi: Vec<f64>,
}

impl<'a> SampleKernel<'a> {
    fn new(state: &'a ManyBodyState, grid: &'a [f64], grid_table: &'a [Vec<f64>]) -> Self {
        let n = state.n();
        SampleKernel {
            state,
            grid_table,
            grid,
            n,
            norm: 1.0 / factorial(n).sqrt(),
            xs: vec![0.0; n - 1],
            sorted: vec![0.0; n - 1],
            rows: vec![0.0; (n - 1) * n],
            minor: vec![0.0; (n - 1) * (n - 1)],
            cofactors: vec![0.0; n],
            orbital_row: vec![0.0; n],
            psi: vec![0.0; grid.len()],
        }
    }

    /// Fills `psi[i] = ψ^B(z_i, X)` for a fresh uniform `X`.
    fn sample(&mut self, rng: &mut ChaCha8Rng, eval: &mut crate::manybody::OrbitalEvaluator<'_>) {
        let n = self.n;
        let length = self.state.box_length();
        for x in self.xs.iter_mut() {
            *x = rng.gen::<f64>() * length;
        }
        for (r, &x) in self.xs.iter().enumerate() {
            eval.eval(x, &mut self.orbital_row);
            self.rows[r * n..(r + 1) * n].copy_from_slice(&self.orbital_row);
        }
        // cofactors of row 0: C_k = (−1)^k det(rows without column k)
        for k in 0..n {
            let mut idx = 0;
            for r in 0..n - 1 {
                for c in 0..n {
                    if c != k {
                        self.minor[idx] = self.rows[r * n + c];
                        idx += 1;
                    }
                }
            }
            let det = determinant(&mut self.minor, n - 1);
            self.cofactors[k] = if k % 2 == 0 { det } else { -det };
        }
        let base_sign = sign_prefactor(&self.xs) as f64 * self.norm;
        self.sorted.copy_from_slice(&self.xs);
        self.sorted.sort_by(f64::total_cmp);

        // A(z, X) = A(X)·(−1)^{#x < z}, zero on contact
        let mut below = 0;
        for (i, &z) in self.grid.iter().enumerate() {
            while below < n - 1 && self.sorted[below] < z {
                below += 1;
            }
            let contact = below < n - 1 && self.sorted[below] == z;
            if contact || base_sign == 0.0 {
                self.psi[i] = 0.0;
                continue;
            }
            let fermi: f64 = self.grid_table[i]
                .iter()
                .zip(&self.cofactors)
                .map(|(phi, c)| phi * c)
                .sum();
            let sign = if below % 2 == 0 {
                base_sign
            } else {
                -base_sign
            };
            self.psi[i] = sign * fermi;
        }
    }
}

fn run_batch(
    state: &ManyBodyState,
    grid: &Grid1D,
    grid_table: &[Vec<f64>],
    seed: u64,
    batch: usize,
    samples: u64,
) -> Accumulator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64);
    let mut eval = state.evaluator();
    let mut kernel = SampleKernel::new(state, &grid.points, grid_table);
    let mut acc = Accumulator::new(grid.len());
    for _ in 0..samples {
        kernel.sample(&mut rng, &mut eval);
        acc.add(&kernel.psi);
    }
    acc
}

/// Monte Carlo `ρ^B` with per-entry standard errors.
///
/// `N = 1` has no integral and returns the closed form.
pub fn rspdm_bose_mc(
    state: &ManyBodyState,
    grid: &Grid1D,
    mc: &McConfig,
) -> Result<DensityMatrixGrid> {
    if mc.samples < MIN_SAMPLES {
        return Err(Error::Config(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples for error estimates, got {}",
            mc.samples
        )));
    }
    if mc.workers == 0 {
        return Err(Error::Config("workers must be >= 1".into()));
    }
    let n_particles = state.n();
    if n_particles == 1 {
        return Ok(closed_form_matrix(state, grid, Statistics::Bose));
    }

    let grid_table = orbital_table(state, &grid.points);
    let batch_sizes: Vec<u64> = (0..MC_BATCHES as u64)
        .map(|b| {
            let start = b * mc.samples / MC_BATCHES as u64;
            let end = (b + 1) * mc.samples / MC_BATCHES as u64;
            end - start
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(mc.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let batches: Vec<Accumulator> = pool.install(|| {
        batch_sizes
            .par_iter()
            .enumerate()
            .map(|(b, &count)| run_batch(state, grid, &grid_table, mc.seed, b, count))
            .collect()
    });

    let n = grid.len();
    let mut total = Accumulator::new(n);
    for b in &batches {
        total.merge(b);
    }

    let volume = state.box_length().powi(n_particles as i32 - 1);
    let scale = n_particles as f64 * volume;
    let count = total.count as f64;
    let mut values = vec![vec![0.0; n]; n];
    let mut stderr = vec![vec![0.0; n]; n];
    let mut idx = 0;
    for i in 0..n {
        for j in i..n {
            let mean = total.sum[idx] / count;
            let var = (total.sum_sq[idx] / count - mean * mean).max(0.0);
            let v = scale * mean;
            let e = scale * (var / (count - 1.0)).sqrt();
            values[i][j] = v;
            values[j][i] = v;
            stderr[i][j] = e;
            stderr[j][i] = e;
            idx += 1;
        }
    }

    let batch_estimates: Vec<Vec<f64>> = batches
        .iter()
        .filter(|b| b.count > 0)
        .map(|b| {
            let mut full = vec![0.0; n * n];
            let mut idx = 0;
            for i in 0..n {
                for j in i..n {
                    let v = scale * b.sum[idx] / b.count as f64;
                    full[i * n + j] = v;
                    full[j * n + i] = v;
                    idx += 1;
                }
            }
            full
        })
        .collect();

    Ok(DensityMatrixGrid {
        grid: grid.clone(),
        statistics: Statistics::Bose,
        method: Method::MonteCarlo,
        particles: n_particles,
        values,
        stderr: Some(stderr),
        seed: Some(mc.seed),
        samples: Some(mc.samples),
        batches: Some(batch_estimates),
    })
}
