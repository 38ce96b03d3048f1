use super::{DensityMatrixGrid, Estimate, Method, MomentumDistribution};
use crate::error::{Error, Result};
use crate::manybody::{ManyBodyState, Statistics};

/// Trailing occupations whose total stays below this fraction of `N` are
/// dropped from the exact distribution.
const FERMI_TAIL: f64 = 1e-14;

/// Where a momentum distribution comes from.
#[derive(Debug, Clone, Copy)]
pub enum MomentumInput<'a> {
    State(&'a ManyBodyState),
    Grid(&'a DensityMatrixGrid),
}

fn kappa(j: i64, cycles: usize) -> f64 {
    2.0 * j as f64 / cycles as f64
}

/// Exact `n_j = Σ_occ |A_j|²` from the orbitals' plane-wave amplitudes.
pub fn fermi_momentum_distribution(state: &ManyBodyState) -> MomentumDistribution {
    let m = state.cycles();
    let j_top = state
        .orbitals()
        .iter()
        .map(|o| o.max_index())
        .max()
        .unwrap_or(0);
    let occ_at = |j: i64| -> f64 {
        state
            .orbitals()
            .iter()
            .map(|o| o.amplitude(j).norm_sqr())
            .sum()
    };
    let full: Vec<f64> = (-j_top..=j_top).map(occ_at).collect();

    // shrink symmetrically while the discarded weight is negligible
    let budget = FERMI_TAIL * state.n() as f64;
    let mut j_max = j_top;
    let mut dropped = 0.0;
    while j_max > 0 {
        let edge = full[(j_top - j_max) as usize] + full[(j_top + j_max) as usize];
        if dropped + edge >= budget {
            break;
        }
        dropped += edge;
        j_max -= 1;
    }
    let indices: Vec<i64> = (-j_max..=j_max).collect();
    let occupations = indices
        .iter()
        .map(|&j| full[(j + j_top) as usize])
        .collect();
    MomentumDistribution {
        cycles: m,
        statistics: state.statistics(),
        method: Method::ClosedForm,
        momenta: indices.iter().map(|&j| kappa(j, m)).collect(),
        indices,
        occupations,
        stderr: None,
        batches: None,
    }
}

/// `n_j = (1/L) Σ_ik w_i w_k ρ(z_i, z_k) cos(κ_j (z_i − z_k))` for `|j| ≤ j_max`.
pub fn momentum_from_density_matrix(
    dm: &DensityMatrixGrid,
    cycles: usize,
    j_max: i64,
) -> MomentumDistribution {
    let n = dm.len();
    let w = dm.grid.weights();
    let length = dm.grid.length;
    let indices: Vec<i64> = (-j_max..=j_max).collect();
    let momenta: Vec<f64> = indices.iter().map(|&j| kappa(j, cycles)).collect();
    let basis: Vec<(Vec<f64>, Vec<f64>)> = momenta
        .iter()
        .map(|&k| {
            dm.grid
                .points
                .iter()
                .zip(&w)
                .map(|(&z, &wi)| {
                    let (s, c) = (k * z).sin_cos();
                    (wi * c, wi * s)
                })
                .unzip()
        })
        .collect();
    let project = |get: &dyn Fn(usize, usize) -> f64| -> Vec<f64> {
        basis
            .iter()
            .map(|(c, s)| {
                let mut total = 0.0;
                for i in 0..n {
                    let (mut rc, mut rs) = (0.0, 0.0);
                    for k in 0..n {
                        let v = get(i, k);
                        rc += v * c[k];
                        rs += v * s[k];
                    }
                    total += c[i] * rc + s[i] * rs;
                }
                total / length
            })
            .collect()
    };
    let occupations = project(&|i, k| dm.values[i][k]);
    let batches: Option<Vec<Vec<f64>>> = dm
        .batches
        .as_ref()
        .map(|bs| bs.iter().map(|b| project(&|i, k| b[i * n + k])).collect());
    let stderr = batches.as_ref().map(|bs| {
        (0..indices.len())
            .map(|t| super::batch_stderr(bs.iter().map(|b| b[t])))
            .collect()
    });
    MomentumDistribution {
        cycles,
        statistics: dm.statistics,
        method: dm.method,
        indices,
        momenta,
        occupations,
        stderr,
        batches,
    }
}

/// Fermi input must be a state (exact path); Bose input must be a density
/// matrix, transformed up to `|j| = 4M`.
pub fn momentum_distribution(
    input: MomentumInput<'_>,
    statistics: Statistics,
) -> Result<MomentumDistribution> {
    match (input, statistics) {
        (MomentumInput::State(s), Statistics::Fermi) => Ok(fermi_momentum_distribution(s)),
        (MomentumInput::Grid(dm), _) => {
            if dm.statistics != statistics {
                return Err(Error::Domain(format!(
                    "density matrix holds {} statistics, {statistics} requested",
                    dm.statistics
                )));
            }
            let cycles = (dm.grid.length / std::f64::consts::PI).round() as usize;
            Ok(momentum_from_density_matrix(dm, cycles, 4 * cycles as i64))
        }
        (MomentumInput::State(_), Statistics::Bose) => Err(Error::UnsupportedStatistics(
            "the Bose momentum distribution needs a density matrix, not a state".into(),
        )),
    }
}

/// `Σ κ_j n_j`, in units of `ħω`, summed as `Σ_{j>0} κ_j (n_j − n_{−j})` so
/// that a symmetric distribution gives exactly zero.
pub fn total_momentum(md: &MomentumDistribution) -> Estimate {
    let pairs: Vec<(usize, Option<usize>)> = md
        .indices
        .iter()
        .enumerate()
        .filter(|(_, &j)| j > 0)
        .map(|(i, &j)| (i, md.indices.iter().position(|&k| k == -j)))
        .collect();
    let apply = |occ: &[f64]| -> f64 {
        pairs
            .iter()
            .map(|&(i, mirror)| md.momenta[i] * (occ[i] - mirror.map_or(0.0, |m| occ[m])))
            .sum()
    };
    let unpaired: f64 = md
        .indices
        .iter()
        .zip(&md.momenta)
        .zip(&md.occupations)
        .filter(|((&j, _), _)| j < 0 && !md.indices.contains(&-j))
        .map(|((_, &k), &n)| k * n)
        .sum();
    let value = apply(&md.occupations) + unpaired;
    let stderr = md
        .batches
        .as_ref()
        .map(|b| super::batch_stderr(b.iter().map(|occ| apply(occ))));
    Estimate { value, stderr }
}

/// `Σ κ_j² n_j`.
pub fn second_moment(md: &MomentumDistribution) -> Estimate {
    md.linear_functional(|k| k * k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeConfig;
    use crate::observables::{rspdm_fermi, Grid1D};

    fn state(m: usize, q: f64, n: usize) -> ManyBodyState {
        ManyBodyState::ground_state(&LatticeConfig::dimensionless(m, q).unwrap(), n, 1e-13).unwrap()
    }

    #[test]
    fn filled_plane_waves() {
        let md = fermi_momentum_distribution(&state(7, 0.0, 3));
        assert_eq!(md.indices, vec![-1, 0, 1]);
        assert!(md.occupations.iter().all(|n| (n - 1.0).abs() < 1e-15));
        assert!((md.momenta[2] - 2.0 / 7.0).abs() < 1e-15);
        assert_eq!(total_momentum(&md).value, 0.0);
    }

    #[test]
    fn total_momentum_of_asymmetric_occupations() {
        let md = MomentumDistribution {
            cycles: 7,
            statistics: Statistics::Fermi,
            method: Method::ClosedForm,
            indices: vec![-1, 0, 1, 2],
            momenta: vec![-2.0 / 7.0, 0.0, 2.0 / 7.0, 4.0 / 7.0],
            occupations: vec![0.25, 1.0, 0.5, 0.125],
            stderr: None,
            batches: None,
        };
        let want = md.linear_functional(|k| k).value;
        assert!((total_momentum(&md).value - want).abs() < 1e-15);
    }

    #[test]
    fn fermi_normalization_and_pauli_bound() {
        for (m, n) in [(7, 7), (7, 5), (9, 3), (3, 5)] {
            let md = fermi_momentum_distribution(&state(m, 1.0, n));
            assert!((md.total() - n as f64).abs() < 1e-10);
            assert!(md
                .occupations
                .iter()
                .all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
            assert!(total_momentum(&md).value.abs() < 1e-12);
            assert!(md
                .indices
                .iter()
                .all(|&j| md.occupation(-j) == md.occupation(j)));
        }
    }

    #[test]
    fn grid_transform_reproduces_exact_fermi() {
        let s = state(7, 1.0, 5);
        let grid = Grid1D::symmetric(s.box_length(), 128).unwrap();
        let dm = rspdm_fermi(&s, &grid);
        let exact = fermi_momentum_distribution(&s);
        let md = momentum_distribution(MomentumInput::Grid(&dm), Statistics::Fermi).unwrap();
        assert_eq!(md.indices.len(), 57);
        for (&j, &n) in md.indices.iter().zip(&md.occupations) {
            let want = exact.occupation(j).unwrap_or(0.0);
            assert!((n - want).abs() < 1e-10, "j={j}: {n} vs {want}");
        }
        assert!(md.stderr.is_none());
    }

    #[test]
    fn bose_needs_a_matrix() {
        let s = state(7, 1.0, 3).with_statistics(Statistics::Bose);
        assert!(momentum_distribution(MomentumInput::State(&s), Statistics::Bose).is_err());
        let dm = rspdm_fermi(&s, &Grid1D::symmetric(s.box_length(), 16).unwrap());
        assert!(momentum_distribution(MomentumInput::Grid(&dm), Statistics::Bose).is_err());
    }

    #[test]
    fn single_orbital_momentum() {
        // one particle: κ-weighted sum of a real orbital is zero, its square is not
        let md = fermi_momentum_distribution(&state(5, 0.5, 1));
        assert!(total_momentum(&md).value.abs() < 1e-15);
        assert!(second_moment(&md).value > 0.0);
    }
}
