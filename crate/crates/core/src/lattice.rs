//! Physical parameters of the lattice and the reduction to dimensionless form.
//!
//! The single-particle Hamiltonian `−ħ²/2m ∂² + μB cos(2ωx)` on `x ∈ [0, L/ω]`
//! becomes the Mathieu equation in `z = ωx` with
//!
//! ```text
//! q = m μ B / (ħ² ω²),     λ = 2 m E / (ħ² ω²),     L = Mπ.
//! ```

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boltzmann constant, J/K.
pub const BOLTZMANN_J_PER_K: f64 = 1.380649e-23;

/// Atomic mass used for the gap scans, kg.
pub const DEFAULT_MASS_KG: f64 = 1.44e-25;
/// Magnetic moment used for the gap scans, J/T.
pub const DEFAULT_MU_J_PER_T: f64 = 9.274e-24;
/// Field used when no configuration is supplied, T.
pub const DEFAULT_FIELD_T: f64 = 1e-8;
/// Lattice wavenumber used when no configuration is supplied, 1/m.
pub const DEFAULT_OMEGA_PER_M: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar: 1.054571817e-34,
        }
    }
}

/// SI description of the atoms and the field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub mass_kg: f64,
    pub mu_j_per_t: f64,
    pub field_t: f64,
    /// Spatial wavenumber ω of the lattice; the potential is `μB cos(2ωx)`.
    pub omega_per_m: f64,
    pub constants: PhysicalConstants,
}

impl PhysicalParams {
    pub fn new(mass_kg: f64, mu_j_per_t: f64, field_t: f64, omega_per_m: f64) -> Result<Self> {
        let params = PhysicalParams {
            mass_kg,
            mu_j_per_t,
            field_t,
            omega_per_m,
            constants: PhysicalConstants::default(),
        };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{name} must be finite and > 0, got {v}"
                )))
            }
        };
        positive("hbar", self.constants.hbar)?;
        positive("mass_kg", self.mass_kg)?;
        positive("mu_J_per_T", self.mu_j_per_t)?;
        positive("omega_per_m", self.omega_per_m)?;
        if !(self.field_t.is_finite() && self.field_t >= 0.0) {
            return Err(Error::Config(format!(
                "B_T must be finite and >= 0, got {}",
                self.field_t
            )));
        }
        let q = self.dimensionless_coupling();
        if !q.is_finite() {
            return Err(Error::Config(format!("derived q is not finite ({q})")));
        }
        Ok(())
    }

    /// `q = m μ B / (ħ² ω²)`.
    pub fn dimensionless_coupling(&self) -> f64 {
        let hbar = self.constants.hbar;
        self.mass_kg * self.mu_j_per_t * self.field_t
            / (hbar * hbar * self.omega_per_m * self.omega_per_m)
    }

    /// The recoil-like unit `ħ²ω²/(2m)` in joules.
    pub fn energy_scale(&self) -> f64 {
        let hbar = self.constants.hbar;
        hbar * hbar * self.omega_per_m * self.omega_per_m / (2.0 * self.mass_kg)
    }

    /// `E = λ ħ²ω²/(2m)`.
    pub fn energy_from_lambda(&self, lambda: f64) -> f64 {
        lambda * self.energy_scale()
    }

    /// Inverse of [`energy_from_lambda`](Self::energy_from_lambda).
    pub fn lambda_from_energy(&self, energy_j: f64) -> f64 {
        energy_j / self.energy_scale()
    }
}

/// How the lattice depth is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    Physical(PhysicalParams),
    /// Only `q` is known; energies stay in units of `ħ²ω²/(2m)`.
    Dimensionless {
        q: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    cycles: usize,
    coupling: Coupling,
}

impl LatticeConfig {
    pub fn physical(cycles: usize, params: PhysicalParams) -> Result<Self> {
        check_cycles(cycles)?;
        params.validate()?;
        Ok(LatticeConfig {
            cycles,
            coupling: Coupling::Physical(params),
        })
    }

    pub fn dimensionless(cycles: usize, q: f64) -> Result<Self> {
        check_cycles(cycles)?;
        if !(q.is_finite() && q >= 0.0) {
            return Err(Error::Config(format!("q must be finite and >= 0, got {q}")));
        }
        Ok(LatticeConfig {
            cycles,
            coupling: Coupling::Dimensionless { q },
        })
    }

    /// The constants used for the gap-versus-field scans, at the default field
    /// and wavenumber.
    pub fn scan_defaults(cycles: usize) -> Result<Self> {
        LatticeConfig::physical(
            cycles,
            PhysicalParams::new(
                DEFAULT_MASS_KG,
                DEFAULT_MU_J_PER_T,
                DEFAULT_FIELD_T,
                DEFAULT_OMEGA_PER_M,
            )?,
        )
    }

    /// Number of potential cycles `M` (odd).
    pub fn cycles(&self) -> usize {
        self.cycles
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn physical_params(&self) -> Option<&PhysicalParams> {
        match &self.coupling {
            Coupling::Physical(p) => Some(p),
            Coupling::Dimensionless { .. } => None,
        }
    }

    /// Box length in `z`, `Mπ`.
    pub fn box_length(&self) -> f64 {
        self.cycles as f64 * PI
    }

    pub fn q(&self) -> f64 {
        dimensionless_coupling(self)
    }

    pub fn energy_scale(&self) -> Option<f64> {
        self.physical_params().map(PhysicalParams::energy_scale)
    }

    /// SI energy of a dimensionless eigenvalue, if the config carries SI units.
    pub fn energy_from_lambda(&self, lambda: f64) -> Option<f64> {
        self.physical_params().map(|p| p.energy_from_lambda(lambda))
    }

    /// Same lattice with a different field strength.
    pub fn with_field(&self, field_t: f64) -> Result<Self> {
        let mut p = *self.require_physical("field scan")?;
        p.field_t = field_t;
        LatticeConfig::physical(self.cycles, p)
    }

    /// Same lattice with a different wavenumber.
    pub fn with_omega(&self, omega_per_m: f64) -> Result<Self> {
        let mut p = *self.require_physical("omega scan")?;
        p.omega_per_m = omega_per_m;
        LatticeConfig::physical(self.cycles, p)
    }

    /// Same cycle count with a dimensionless coupling.
    pub fn with_q(&self, q: f64) -> Result<Self> {
        LatticeConfig::dimensionless(self.cycles, q)
    }

    fn require_physical(&self, what: &str) -> Result<&PhysicalParams> {
        self.physical_params()
            .ok_or_else(|| Error::Config(format!("{what} needs SI parameters, config only has q")))
    }

    /// The `M` Bloch fractions `2l/M`, ascending in `l`.
    pub fn bloch_fractions(&self) -> Vec<BlochFraction> {
        let half = (self.cycles as i64 - 1) / 2;
        (-half..=half)
            .map(|l| BlochFraction {
                l,
                cycles: self.cycles as u64,
            })
            .collect()
    }
}

fn check_cycles(cycles: usize) -> Result<()> {
    if cycles == 0 || cycles.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "M must be an odd positive integer, got {cycles}"
        )));
    }
    Ok(())
}

/// `q = m μ B / (ħ² ω²)`, or the stored `q` for a dimensionless config.
pub fn dimensionless_coupling(config: &LatticeConfig) -> f64 {
    match config.coupling {
        Coupling::Physical(ref p) => p.dimensionless_coupling(),
        Coupling::Dimensionless { q } => q,
    }
}

/// `E = λ ħ²ω²/(2m)` in joules.
pub fn energy_from_lambda(lambda: f64, params: &PhysicalParams) -> f64 {
    params.energy_from_lambda(lambda)
}

/// Bloch fraction `ν = 2l/M`, kept as the exact pair `(l, M)`.
///
/// Equality is exact, so `ν` and `−ν` partners are matched without any
/// floating-point comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlochFraction {
    l: i64,
    cycles: u64,
}

impl BlochFraction {
    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    pub fn value(&self) -> f64 {
        (2 * self.l) as f64 / self.cycles as f64
    }

    pub fn neg(&self) -> BlochFraction {
        BlochFraction {
            l: -self.l,
            cycles: self.cycles,
        }
    }

    /// `2l/M` in lowest terms as `(numerator, denominator)`.
    pub fn reduced(&self) -> (i64, u64) {
        let num = 2 * self.l;
        let g = gcd(num.unsigned_abs(), self.cycles).max(1);
        (num / g as i64, self.cycles / g)
    }
}

impl fmt::Display for BlochFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.reduced();
        if d == 1 {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `ν = 2l/M` for `|l| ≤ (M−1)/2`, `M` odd.
pub fn bloch_nu(l: i64, cycles: usize) -> Result<BlochFraction> {
    check_cycles(cycles).map_err(|e| Error::Domain(e.to_string()))?;
    let half = (cycles as i64 - 1) / 2;
    if l.abs() > half {
        return Err(Error::Domain(format!(
            "l = {l} lies outside the first Brillouin zone sampling |l| <= {half} for M = {cycles}"
        )));
    }
    Ok(BlochFraction {
        l,
        cycles: cycles as u64,
    })
}

/// On-disk configuration.
///
/// Either `q` or the SI set (`B_T`, `omega_per_m`, optionally `mass_kg` and
/// `mu_J_per_T`) must be present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "M")]
    pub cycles: usize,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub particles: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    #[serde(
        rename = "mu_J_per_T",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub mu_j_per_t: Option<f64>,
    #[serde(rename = "B_T", default, skip_serializing_if = "Option::is_none")]
    pub field_t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_per_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn lattice(&self) -> Result<LatticeConfig> {
        let physical = match (self.field_t, self.omega_per_m) {
            (Some(b), Some(w)) => Some(PhysicalParams::new(
                self.mass_kg.unwrap_or(DEFAULT_MASS_KG),
                self.mu_j_per_t.unwrap_or(DEFAULT_MU_J_PER_T),
                b,
                w,
            )?),
            (None, None) => None,
            _ => {
                return Err(Error::Config(
                    "B_T and omega_per_m must be given together".into(),
                ))
            }
        };
        match (self.q, physical) {
            (None, Some(p)) => LatticeConfig::physical(self.cycles, p),
            (Some(q), None) => LatticeConfig::dimensionless(self.cycles, q),
            (Some(q), Some(p)) => {
                let derived = p.dimensionless_coupling();
                if (derived - q).abs() > 1e-9 * derived.abs().max(q.abs()).max(1e-300) {
                    return Err(Error::Config(format!(
                        "q = {q} disagrees with the SI parameters (which give q = {derived})"
                    )));
                }
                LatticeConfig::physical(self.cycles, p)
            }
            (None, None) => Err(Error::Config(
                "config needs either q or both B_T and omega_per_m".into(),
            )),
        }
    }

    /// Fully resolved file form of a lattice config (for manifests).
    pub fn from_lattice(config: &LatticeConfig) -> Self {
        let mut file = ConfigFile {
            cycles: config.cycles(),
            q: Some(config.q()),
            ..Default::default()
        };
        if let Some(p) = config.physical_params() {
            file.mass_kg = Some(p.mass_kg);
            file.mu_j_per_t = Some(p.mu_j_per_t);
            file.field_t = Some(p.field_t);
            file.omega_per_m = Some(p.omega_per_m);
        }
        file
    }
}
