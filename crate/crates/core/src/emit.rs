//! Deterministic CSV and JSON serialization of computed artifacts.
//!
//! CSV numbers are written with 17 significant digits, which round-trips any
//! `f64`. JSON uses serde's shortest round-trip representation.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::bands::{BandStructure, GapScan};
use crate::error::Result;
use crate::observables::{
    CutPoint, DensityMatrixGrid, Grid1D, MomentumDistribution, PairDistributionGrid,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(crate::error::Error::Config(format!(
                "unknown format {other:?} (csv|json)"
            ))),
        }
    }
}

/// One `f64` at 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn bands_csv(bands: &BandStructure) -> String {
    let mut out = String::from("band,l,nu,lambda,E_J\n");
    for e in bands.entries() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.band,
            e.l,
            num(e.nu),
            num(e.lambda),
            opt(e.energy_j)
        );
    }
    out
}

pub fn gap_scan_csv(scan: &GapScan) -> String {
    let mut out = String::from("parameter,value,delta_lambda,delta_E_J\n");
    for p in &scan.points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            scan.parameter.name(),
            num(p.value),
            num(p.delta_lambda),
            opt(p.delta_e_j)
        );
    }
    out
}

pub fn density_csv(grid: &Grid1D, rho: &[f64], stderr: Option<&[f64]>) -> String {
    let mut out = String::from(if stderr.is_some() {
        "z,rho,stderr\n"
    } else {
        "z,rho\n"
    });
    for (i, (&z, &r)) in grid.points.iter().zip(rho).enumerate() {
        match stderr {
            Some(e) => {
                let _ = writeln!(out, "{},{},{}", num(z), num(r), num(e[i]));
            }
            None => {
                let _ = writeln!(out, "{},{}", num(z), num(r));
            }
        }
    }
    out
}

/// Square matrix with a header row and column of `z` values.
pub fn matrix_csv(grid: &Grid1D, values: &[Vec<f64>]) -> String {
    let mut out = String::from("z");
    for &z in &grid.points {
        out.push(',');
        out.push_str(&num(z));
    }
    out.push('\n');
    for (&z, row) in grid.points.iter().zip(values) {
        out.push_str(&num(z));
        for &v in row {
            out.push(',');
            out.push_str(&num(v));
        }
        out.push('\n');
    }
    out
}

pub fn density_matrix_csv(dm: &DensityMatrixGrid) -> String {
    matrix_csv(&dm.grid, &dm.values)
}

/// The per-entry standard errors, if any, in the same layout.
pub fn density_matrix_stderr_csv(dm: &DensityMatrixGrid) -> Option<String> {
    dm.stderr.as_ref().map(|s| matrix_csv(&dm.grid, s))
}

pub fn pair_distribution_csv(pd: &PairDistributionGrid) -> String {
    matrix_csv(&pd.grid, &pd.values)
}

pub fn momentum_csv(md: &MomentumDistribution) -> String {
    let mut out = String::from("j,kappa,n,stderr\n");
    for (i, ((&j, &k), &n)) in md
        .indices
        .iter()
        .zip(&md.momenta)
        .zip(&md.occupations)
        .enumerate()
    {
        let e = md.stderr.as_ref().map(|s| s[i]);
        let _ = writeln!(out, "{j},{},{},{}", num(k), num(n), opt(e));
    }
    out
}

pub fn cut_csv(cut: &[CutPoint]) -> String {
    let mut out = String::from("z,rho,stderr\n");
    for p in cut {
        let _ = writeln!(out, "{},{},{}", num(p.z), num(p.rho), opt(p.stderr));
    }
    out
}

/// One row per compared quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub quantity: String,
    pub fermi: f64,
    pub bose: f64,
    pub bose_stderr: Option<f64>,
}

impl ComparisonRow {
    pub fn difference(&self) -> f64 {
        self.bose - self.fermi
    }

    /// `|bose − fermi| / σ`, when an error is known.
    pub fn z_score(&self) -> Option<f64> {
        self.bose_stderr
            .filter(|&s| s > 0.0)
            .map(|s| self.difference().abs() / s)
    }
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("quantity,fermi,bose,bose_stderr,difference,z_score\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.quantity,
            num(r.fermi),
            num(r.bose),
            opt(r.bose_stderr),
            num(r.difference()),
            opt(r.z_score())
        );
    }
    out
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes `contents`, creating parent directories as needed.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}
