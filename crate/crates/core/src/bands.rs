//! Band assembly over the sampled Bloch fractions, the first band gap, and
//! gap scans over field strength or lattice wavenumber.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BlochFraction, LatticeConfig, BOLTZMANN_J_PER_K};
use crate::mathieu::solve_adaptive;

/// Tolerance used for band work when the caller does not choose one.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    config: LatticeConfig,
    n_bands: usize,
    /// `(band, l) → λ`
    lambdas: BTreeMap<(usize, i64), f64>,
}

/// One row of a band table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandEntry {
    pub band: usize,
    pub l: i64,
    pub nu: f64,
    pub lambda: f64,
    pub energy_j: Option<f64>,
}

impl BandStructure {
    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn n_bands(&self) -> usize {
        self.n_bands
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambda(&self, band: usize, l: i64) -> Option<f64> {
        self.lambdas.get(&(band, l)).copied()
    }

    /// Rows ordered by band, then `l`.
    pub fn entries(&self) -> Vec<BandEntry> {
        let m = self.config.cycles() as f64;
        self.lambdas
            .iter()
            .map(|(&(band, l), &lambda)| BandEntry {
                band,
                l,
                nu: 2.0 * l as f64 / m,
                lambda,
                energy_j: self.config.energy_from_lambda(lambda),
            })
            .collect()
    }

    fn band_values(&self, band: usize) -> impl Iterator<Item = f64> + '_ {
        self.lambdas
            .range((band, i64::MIN)..=(band, i64::MAX))
            .map(|(_, &v)| v)
    }
}

/// Solve every `ν = 2l/M` for the lowest `n_bands` bands.
pub fn compute_bands(config: &LatticeConfig, n_bands: usize, tol: f64) -> Result<BandStructure> {
    let q = config.q();
    let fractions: Vec<BlochFraction> = config.bloch_fractions();
    let solved: Vec<_> = fractions
        .par_iter()
        .map(|&nu| solve_adaptive(nu, q, n_bands, tol))
        .collect::<Result<_>>()?;
    let mut lambdas = BTreeMap::new();
    for (nu, orbitals) in fractions.iter().zip(solved) {
        for orb in orbitals {
            lambdas.insert((orb.band, nu.l()), orb.lambda);
        }
    }
    Ok(BandStructure {
        config: *config,
        n_bands,
        lambdas,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandGap {
    pub delta_lambda: f64,
    pub delta_e_j: Option<f64>,
}

/// Lowest second-band value minus highest first-band value over the sampled
/// Bloch fractions.
pub fn band_gap(bs: &BandStructure) -> Result<BandGap> {
    if bs.n_bands < 2 {
        return Err(Error::Domain(format!(
            "band gap needs two bands, structure has {}",
            bs.n_bands
        )));
    }
    let top = bs.band_values(0).fold(f64::NEG_INFINITY, f64::max);
    let bottom = bs.band_values(1).fold(f64::INFINITY, f64::min);
    let delta_lambda = bottom - top;
    Ok(BandGap {
        delta_lambda,
        delta_e_j: bs.config.energy_from_lambda(delta_lambda),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanParameter {
    /// Field strength in tesla.
    #[serde(rename = "B")]
    Field,
    /// Lattice wavenumber in 1/m.
    #[serde(rename = "omega")]
    Omega,
    /// Dimensionless coupling directly.
    #[serde(rename = "q")]
    Q,
}

impl ScanParameter {
    pub fn name(&self) -> &'static str {
        match self {
            ScanParameter::Field => "B",
            ScanParameter::Omega => "omega",
            ScanParameter::Q => "q",
        }
    }
}

impl fmt::Display for ScanParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" | "b" | "field" => Ok(ScanParameter::Field),
            "omega" | "w" | "ω" => Ok(ScanParameter::Omega),
            "q" => Ok(ScanParameter::Q),
            other => Err(Error::Domain(format!(
                "unknown scan parameter {other:?} (expected B, omega or q)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub value: f64,
    pub delta_lambda: f64,
    pub delta_e_j: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapScan {
    pub parameter: ScanParameter,
    pub points: Vec<GapPoint>,
}

/// `count` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![from],
        _ => {
            let step = (to - from) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i + 1 == count {
                        to
                    } else {
                        from + step * i as f64
                    }
                })
                .collect()
        }
    }
}

/// One gap evaluation per value with every other parameter held at `config`.
pub fn gap_scan(
    config: &LatticeConfig,
    parameter: ScanParameter,
    values: &[f64],
) -> Result<GapScan> {
    gap_scan_with_tol(config, parameter, values, DEFAULT_TOL)
}

pub fn gap_scan_with_tol(
    config: &LatticeConfig,
    parameter: ScanParameter,
    values: &[f64],
    tol: f64,
) -> Result<GapScan> {
    if values.is_empty() {
        return Err(Error::Domain("gap scan needs at least one value".into()));
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain(
            "gap scan values must be strictly increasing".into(),
        ));
    }
    let lowest = values[0];
    let ok = match parameter {
        ScanParameter::Field | ScanParameter::Q => lowest >= 0.0,
        ScanParameter::Omega => lowest > 0.0,
    };
    if !ok || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!(
            "{parameter} scan values out of range (first value {lowest})"
        )));
    }
    let configs: Vec<LatticeConfig> = values
        .iter()
        .map(|&v| match parameter {
            ScanParameter::Field => config.with_field(v),
            ScanParameter::Omega => config.with_omega(v),
            ScanParameter::Q => config.with_q(v),
        })
        .collect::<Result<_>>()?;
    let points = configs
        .par_iter()
        .zip(values.par_iter())
        .map(|(cfg, &value)| {
            let gap = band_gap(&compute_bands(cfg, 2, tol)?)?;
            Ok(GapPoint {
                value,
                delta_lambda: gap.delta_lambda,
                delta_e_j: gap.delta_e_j,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GapScan { parameter, points })
}

/// `exp(−ΔE / k_B T)`.
pub fn boltzmann_ratio(delta_e_j: f64, temperature_k: f64) -> Result<f64> {
    if !(temperature_k > 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be > 0 K, got {temperature_k}"
        )));
    }
    Ok((-delta_e_j / (BOLTZMANN_J_PER_K * temperature_k)).exp())
}
