//! N-particle ground states: the Fermi sea as a Slater determinant of real
//! orbitals, and the hard-core Bose state `ψ^B = A·ψ^F` with
//! `A = Π_{i>j} sgn(x_i − x_j)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeConfig;
use crate::mathieu::{
    are_mirror_partners, has_definite_parity, realize_degenerate_pair, realize_single,
    realize_unpaired, solve_adaptive, Orbital, RealOrbital,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Bose,
    Fermi,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        })
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bose" | "tg" => Ok(Statistics::Bose),
            "fermi" => Ok(Statistics::Fermi),
            other => Err(Error::Domain(format!(
                "unknown statistics {other:?} (expected bose or fermi)"
            ))),
        }
    }
}

/// Ground state of `N` particles: the `N` lowest orbitals, realified.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyState {
    config: LatticeConfig,
    statistics: Statistics,
    orbitals: Vec<RealOrbital>,
    /// The complex Bloch orbitals that were occupied, in selection order.
    occupied: Vec<Orbital>,
}

/// Eigenvalues closer than this are treated as one shell when ordering.
const SHELL_TOL: f64 = 1e-10;

impl ManyBodyState {
    /// Ground state for odd `N`.
    pub fn ground_state(config: &LatticeConfig, n: usize, tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("N must be >= 1".into()));
        }
        if n.is_multiple_of(2) {
            return Err(Error::UnsupportedStatistics(format!(
                "N = {n} is even; only odd N (periodic Bose state) is supported"
            )));
        }
        Self::fill(config, n, tol, false)
    }

    /// Like [`ground_state`](Self::ground_state) but also accepts even `N`.
    ///
    /// The top shell is then half filled; the unpaired orbital is replaced by
    /// its cos-type real combination. Only closed-form observables of such a
    /// state are meaningful: the mapped Bose state of an even-`N` gas is
    /// antiperiodic, which this periodic orbital set does not describe.
    pub fn ground_state_allow_even(config: &LatticeConfig, n: usize, tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("N must be >= 1".into()));
        }
        if n.is_multiple_of(2) {
            log::warn!("N = {n} is even: using periodic orbitals, closed-form observables only");
        }
        Self::fill(config, n, tol, true)
    }

    fn fill(config: &LatticeConfig, n: usize, tol: f64, allow_unpaired: bool) -> Result<Self> {
        let m = config.cycles();
        if n > m {
            log::warn!("N = {n} exceeds M = {m}: filling beyond the first band is experimental");
        }
        let n_bands = n.div_ceil(m) + 1;
        let q = config.q();
        let mut candidates = Vec::with_capacity(n_bands * m);
        for nu in config.bloch_fractions() {
            candidates.extend(solve_adaptive(nu, q, n_bands, tol)?);
        }
        let occupied = select_lowest(candidates, n);
        let orbitals = realify(&occupied, allow_unpaired)?;
        let mut state = ManyBodyState {
            config: *config,
            statistics: Statistics::Fermi,
            orbitals,
            occupied,
        };
        state.orient();
        Ok(state)
    }

    /// Flip one orbital if needed so `ψ^F > 0` on the ordered sector
    /// `z_1 < … < z_N`, making `ψ^B = A·ψ^F = |ψ^F|`.
    fn orient(&mut self) {
        let n = self.n();
        let length = self.config.box_length();
        for shift in [0.5, 0.37, 0.81] {
            let zs: Vec<f64> = (0..n)
                .map(|i| (i as f64 + shift) * length / n as f64)
                .collect();
            let value = self.fermi_wavefunction(&zs);
            if value.abs() > 1e-300 {
                if value < 0.0 {
                    if let Some(last) = self.orbitals.last_mut() {
                        last.negate();
                    }
                }
                return;
            }
        }
    }

    pub fn with_statistics(mut self, statistics: Statistics) -> Self {
        self.statistics = statistics;
        self
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn n(&self) -> usize {
        self.orbitals.len()
    }

    pub fn cycles(&self) -> usize {
        self.config.cycles()
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn box_length(&self) -> f64 {
        self.config.box_length()
    }

    pub fn orbitals(&self) -> &[RealOrbital] {
        &self.orbitals
    }

    pub fn occupied(&self) -> &[Orbital] {
        &self.occupied
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.orbitals.iter().map(|o| o.lambda).collect()
    }

    /// `(1/√N!) det[φ_j(z_i)]`.
    pub fn fermi_wavefunction(&self, zs: &[f64]) -> f64 {
        let n = self.n();
        assert_eq!(zs.len(), n, "need one coordinate per particle");
        let mut matrix = Vec::with_capacity(n * n);
        for &z in zs {
            matrix.extend(self.orbitals.iter().map(|o| o.evaluate(z)));
        }
        determinant(&mut matrix, n) / factorial(n).sqrt()
    }

    /// `A(z)·ψ^F(z)`.
    pub fn bose_wavefunction(&self, zs: &[f64]) -> f64 {
        sign_prefactor(zs) as f64 * self.fermi_wavefunction(zs)
    }

    /// Wavefunction for this state's statistics tag.
    pub fn wavefunction(&self, zs: &[f64]) -> f64 {
        match self.statistics {
            Statistics::Bose => self.bose_wavefunction(zs),
            Statistics::Fermi => self.fermi_wavefunction(zs),
        }
    }

    pub fn evaluator(&self) -> OrbitalEvaluator<'_> {
        OrbitalEvaluator::new(self)
    }
}

/// Take the `n` lowest, ordering each degenerate shell as band, then
/// `l = 0, +1, −1, +2, −2, …`.
fn select_lowest(mut candidates: Vec<Orbital>, n: usize) -> Vec<Orbital> {
    candidates.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut ordered = Vec::with_capacity(candidates.len());
    let mut start = 0;
    while start < candidates.len() {
        let head = candidates[start].lambda;
        let mut end = start + 1;
        while end < candidates.len() && candidates[end].lambda - head <= SHELL_TOL {
            end += 1;
        }
        let mut shell = candidates[start..end].to_vec();
        shell.sort_by_key(|o| (o.band, o.nu.l().abs(), o.nu.l() < 0));
        ordered.extend(shell);
        start = end;
    }
    ordered.truncate(n);
    ordered
}

fn realify(occupied: &[Orbital], allow_unpaired: bool) -> Result<Vec<RealOrbital>> {
    let mut used = vec![false; occupied.len()];
    let mut out = Vec::with_capacity(occupied.len());
    for i in 0..occupied.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let orb = &occupied[i];
        if orb.nu.l() == 0 && has_definite_parity(orb) {
            out.push(realize_single(orb)?);
            continue;
        }
        let partner =
            (0..occupied.len()).find(|&j| !used[j] && are_mirror_partners(orb, &occupied[j]));
        match partner {
            Some(j) => {
                used[j] = true;
                let (plus, minus) = if occupied[j].nu.l() > orb.nu.l() {
                    (&occupied[j], orb)
                } else {
                    (orb, &occupied[j])
                };
                let (c, s) = realize_degenerate_pair(plus, minus)?;
                out.push(c);
                out.push(s);
            }
            None if allow_unpaired => {
                log::warn!(
                    "orbital band {} ν = {} occupied without its partner; using its cos combination",
                    orb.band,
                    orb.nu
                );
                out.push(realize_unpaired(orb)?);
            }
            None => {
                return Err(Error::Degeneracy(format!(
                    "open shell: orbital band {} ν = {} is occupied without its degenerate partner",
                    orb.band, orb.nu
                )))
            }
        }
    }
    Ok(out)
}

/// `Π_{i>j} sgn(x_i − x_j)` with `sgn(0) = 0`.
pub fn sign_prefactor(xs: &[f64]) -> i32 {
    let mut sign = 1;
    for i in 0..xs.len() {
        for j in 0..i {
            if xs[i] == xs[j] {
                return 0;
            }
            if xs[i] < xs[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Determinant of a row-major `n × n` matrix by elimination with partial
/// pivoting. The matrix is overwritten.
pub fn determinant(a: &mut [f64], n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .expect("non-empty range");
        let pivot = a[pivot_row * n + col];
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            det = -det;
        }
        det *= pivot;
        for r in col + 1..n {
            let factor = a[r * n + col] / pivot;
            if factor != 0.0 {
                for k in col + 1..n {
                    a[r * n + k] -= factor * a[col * n + k];
                }
            }
        }
    }
    det
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TotalEnergy {
    pub lambda_sum: f64,
    pub energy_j: Option<f64>,
}

/// `Σ λ` over occupied orbitals (the same for both statistics).
pub fn total_energy(state: &ManyBodyState) -> TotalEnergy {
    let lambda_sum = state.orbitals.iter().map(|o| o.lambda).sum();
    TotalEnergy {
        lambda_sum,
        energy_j: state.config.energy_from_lambda(lambda_sum),
    }
}

/// Evaluates every occupied orbital at a point, sharing the plane-wave
/// phases `e^{2ijz/M}` between orbitals.
pub struct OrbitalEvaluator<'a> {
    orbitals: &'a [RealOrbital],
    base: f64,
    prefactor: f64,
    powers: Vec<Complex64>,
}

/// Phases are recomputed exactly at multiples of this stride.
const ANCHOR_STRIDE: usize = 16;

impl<'a> OrbitalEvaluator<'a> {
    fn new(state: &'a ManyBodyState) -> Self {
        let max_j = state
            .orbitals
            .iter()
            .map(|o| o.max_index() as usize)
            .max()
            .unwrap_or(0);
        OrbitalEvaluator {
            orbitals: &state.orbitals,
            base: 2.0 / state.cycles() as f64,
            prefactor: 1.0 / (state.cycles() as f64 * PI).sqrt(),
            powers: vec![Complex64::new(1.0, 0.0); max_j + 1],
        }
    }

    /// `out[k] = φ_k(z)`.
    pub fn eval(&mut self, z: f64, out: &mut [f64]) {
        let step = Complex64::from_polar(1.0, self.base * z);
        let mut current = Complex64::new(1.0, 0.0);
        for (j, p) in self.powers.iter_mut().enumerate() {
            if j % ANCHOR_STRIDE == 0 {
                current = Complex64::from_polar(1.0, self.base * j as f64 * z);
            }
            *p = current;
            current *= step;
        }
        for (slot, orb) in out.iter_mut().zip(self.orbitals) {
            let mut sum = 0.0;
            for &(j, a, b) in &orb.modes {
                let w = self.powers[j as usize];
                sum += a * w.re + b * w.im;
            }
            *slot = sum * self.prefactor;
        }
    }
}
