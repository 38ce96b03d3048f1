use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniformly spaced points in `[0, length]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    /// Box length `Mπ` the points live in.
    pub length: f64,
    pub points: Vec<f64>,
}

impl Grid1D {
    /// `n` points `z_i = i·L/(n−1)` covering both ends, hence mirror
    /// symmetric about `L/2`. For periodic integrands the end-weighted
    /// trapezoid rule on this grid is the periodic rule.
    pub fn symmetric(length: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 points, got {n}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain(format!(
                "grid length must be > 0, got {length}"
            )));
        }
        let h = length / (n - 1) as f64;
        let points = (0..n)
            .map(|i| if i + 1 == n { length } else { i as f64 * h })
            .collect();
        Ok(Grid1D { length, points })
    }

    pub fn from_points(length: f64, points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Domain("grid needs at least 2 points".into()));
        }
        if points.iter().any(|&z| !(0.0..=length).contains(&z)) {
            return Err(Error::Domain(format!(
                "grid points must lie in [0, {length}]"
            )));
        }
        let h = points[1] - points[0];
        if !(h > 0.0)
            || points
                .windows(2)
                .any(|w| ((w[1] - w[0]) - h).abs() > 1e-12 * length.max(1.0))
        {
            return Err(Error::Domain(
                "grid points must be strictly increasing and uniformly spaced".into(),
            ));
        }
        Ok(Grid1D { length, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.points[1] - self.points[0]
    }

    /// Trapezoid weights.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let n = self.len();
        (0..n)
            .map(|i| if i == 0 || i + 1 == n { 0.5 * h } else { h })
            .collect()
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights().iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Index of `L − z_i`, if the grid is mirror symmetric.
    pub fn mirror_index(&self, i: usize) -> Option<usize> {
        let j = self.len() - 1 - i;
        let tol = 1e-9 * self.length.max(1.0);
        ((self.points[i] + self.points[j] - self.length).abs() <= tol).then_some(j)
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        (0..self.len()).all(|i| self.mirror_index(i).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn symmetric_grid() {
        let g = Grid1D::symmetric(7.0 * PI, 128).unwrap();
        assert_eq!(g.len(), 128);
        assert_eq!(g.points[0], 0.0);
        assert_eq!(g.points[127], 7.0 * PI);
        assert!(g.is_mirror_symmetric());
        assert_eq!(g.mirror_index(5), Some(122));
        assert!((g.weights().iter().sum::<f64>() - 7.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_is_spectral_for_trig() {
        let g = Grid1D::symmetric(3.0 * PI, 64).unwrap();
        let f: Vec<f64> = g
            .points
            .iter()
            .map(|z| (2.0 * z / 3.0).cos().powi(2))
            .collect();
        assert!((g.integrate(&f) - 1.5 * PI).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::symmetric(1.0, 1).is_err());
        assert!(Grid1D::symmetric(0.0, 4).is_err());
        assert!(Grid1D::from_points(1.0, vec![0.0, 0.1, 0.3]).is_err());
        assert!(Grid1D::from_points(1.0, vec![0.0, 2.0]).is_err());
        let g = Grid1D::from_points(1.0, vec![0.1, 0.2, 0.3]).unwrap();
        assert!(!g.is_mirror_symmetric());
    }
}
