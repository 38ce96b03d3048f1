use serde::{Deserialize, Serialize};

use super::{batch_stderr, DensityMatrixGrid, Estimate};
use crate::error::{Error, Result};

/// One point `(z, ρ(z, Mπ − z))` of the antidiagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutPoint {
    pub z: f64,
    pub rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

fn mirror_indices(dm: &DensityMatrixGrid) -> Result<Vec<usize>> {
    (0..dm.len())
        .map(|i| {
            dm.grid.mirror_index(i).ok_or_else(|| {
                Error::Domain("antidiagonal cut needs a grid symmetric about Mπ/2".into())
            })
        })
        .collect()
}

/// `ρ(z_i, Mπ − z_i)` by grid lookup.
pub fn antidiagonal_cut(dm: &DensityMatrixGrid) -> Result<Vec<CutPoint>> {
    let mirror = mirror_indices(dm)?;
    Ok(mirror
        .iter()
        .enumerate()
        .map(|(i, &j)| CutPoint {
            z: dm.grid.points[i],
            rho: dm.values[i][j],
            stderr: dm.stderr.as_ref().map(|s| s[i][j]),
        })
        .collect())
}

fn sample_variance(x: &[f64]) -> f64 {
    let m = x.len() as f64;
    let mean = x.iter().sum::<f64>() / m;
    x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)
}

/// Sample variance of the cut over its central `interior_fraction` of points.
///
/// The error comes from the spread of the same statistic over Monte Carlo
/// batches, when the matrix carries them.
pub fn antidiagonal_variance(dm: &DensityMatrixGrid, interior_fraction: f64) -> Result<Estimate> {
    if !(interior_fraction > 0.0 && interior_fraction <= 1.0) {
        return Err(Error::Domain(format!(
            "interior fraction must lie in (0, 1], got {interior_fraction}"
        )));
    }
    let mirror = mirror_indices(dm)?;
    let n = dm.len();
    let drop = ((1.0 - interior_fraction) * 0.5 * n as f64).round() as usize;
    let range = drop..n - drop;
    if range.len() < 2 {
        return Err(Error::Domain(
            "interior of the cut has fewer than 2 points".into(),
        ));
    }
    let pick = |get: &dyn Fn(usize, usize) -> f64| -> Vec<f64> {
        range.clone().map(|i| get(i, mirror[i])).collect()
    };
    let value = sample_variance(&pick(&|i, j| dm.values[i][j]));
    let stderr = dm.batches.as_ref().map(|batches| {
        batch_stderr(
            batches
                .iter()
                .map(|b| sample_variance(&pick(&|i, j| b[i * n + j]))),
        )
    });
    Ok(Estimate { value, stderr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeConfig;
    use crate::manybody::ManyBodyState;
    use crate::observables::{rspdm_fermi, Grid1D};

    fn fermi(m: usize, q: f64, n: usize, points: usize) -> DensityMatrixGrid {
        let s = ManyBodyState::ground_state(&LatticeConfig::dimensionless(m, q).unwrap(), n, 1e-13)
            .unwrap();
        rspdm_fermi(&s, &Grid1D::symmetric(s.box_length(), points).unwrap())
    }

    #[test]
    fn cut_is_mirror_symmetric() {
        let dm = fermi(7, 1.0, 5, 128);
        let cut = antidiagonal_cut(&dm).unwrap();
        assert_eq!(cut.len(), 128);
        for i in 0..128 {
            assert_eq!(cut[i].rho, cut[127 - i].rho);
            assert!(cut[i].stderr.is_none());
        }
    }

    #[test]
    fn free_cut_matches_kernel() {
        // ρ(z, L − z) = (1 + 2cos(2(2z − L)/7)) / (7π)
        let dm = fermi(7, 0.0, 3, 64);
        let l = dm.grid.length;
        for p in antidiagonal_cut(&dm).unwrap() {
            let want = (1.0 + 2.0 * (2.0 * (2.0 * p.z - l) / 7.0).cos()) / l;
            assert!((p.rho - want).abs() < 1e-13);
        }
    }

    #[test]
    fn asymmetric_grid_is_rejected() {
        let mut dm = fermi(3, 1.0, 1, 8);
        dm.grid =
            Grid1D::from_points(dm.grid.length, (1..9).map(|i| i as f64 * 0.5).collect()).unwrap();
        assert!(matches!(antidiagonal_cut(&dm), Err(Error::Domain(_))));
        assert!(antidiagonal_variance(&dm, 0.8).is_err());
    }

    #[test]
    fn variance_of_interior() {
        let dm = fermi(7, 1.0, 5, 128);
        let var = antidiagonal_variance(&dm, 0.8).unwrap();
        assert!(var.value > 0.0);
        assert!(var.stderr.is_none());
        let cut = antidiagonal_cut(&dm).unwrap();
        let interior: Vec<f64> = cut[13..115].iter().map(|p| p.rho).collect();
        assert!((var.value - sample_variance(&interior)).abs() < 1e-15);
        assert!(antidiagonal_variance(&dm, 0.0).is_err());
    }
}
