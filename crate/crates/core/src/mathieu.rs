//! Mathieu equation `φ'' + (λ − 2q cos 2z) φ = 0` with Bloch boundary conditions.
//!
//! Writing `φ(z) = e^{iνz} Σ_n c_n e^{2inz}` turns the equation into the
//! infinite symmetric tridiagonal system
//!
//! ```text
//! (ν + 2n)² c_n + q (c_{n−1} + c_{n+1}) = λ c_n,
//! ```
//!
//! which is truncated to `n ∈ [−K, K]`. Orbitals are normalized so that
//! `∫₀^{Mπ} |φ|² dz = 1`, i.e. `φ = (Mπ)^{-1/2} e^{iνz} Σ c_n e^{2inz}` with
//! `Σ c_n² = 1`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::BlochFraction;
use crate::tridiag::{self, SymTridiagonal};

/// Largest half-width the adaptive solver will try.
pub const DEFAULT_MAX_HALF_WIDTH: usize = 1 << 15;

/// The truncated matrix for one `(ν, q, K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSpec {
    nu: BlochFraction,
    q: f64,
    half_width: usize,
    matrix: SymTridiagonal,
}

impl TridiagonalSpec {
    pub fn nu(&self) -> BlochFraction {
        self.nu
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `K`; the dimension is `2K + 1`.
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn dim(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn matrix(&self) -> &SymTridiagonal {
        &self.matrix
    }
}

/// Diagonal `(ν + 2n)²` for `n = −K..=K`, off-diagonal `q`.
pub fn build_tridiagonal(nu: BlochFraction, q: f64, half_width: usize) -> Result<TridiagonalSpec> {
    if half_width < 1 {
        return Err(Error::Domain("truncation half-width K must be >= 1".into()));
    }
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::Domain(format!("q must be finite and >= 0, got {q}")));
    }
    let k = half_width as i64;
    let nu_value = nu.value();
    let diag = (-k..=k)
        .map(|n| {
            let s = nu_value + 2.0 * n as f64;
            s * s
        })
        .collect();
    let matrix = SymTridiagonal::new(diag, vec![q; 2 * half_width])?;
    Ok(TridiagonalSpec {
        nu,
        q,
        half_width,
        matrix,
    })
}

/// One Bloch eigenfunction of the truncated problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbital {
    /// Band index, 0-based, ascending in `λ` at fixed `ν`.
    pub band: usize,
    pub nu: BlochFraction,
    pub lambda: f64,
    /// `c_n` for `n = −K..=K`.
    pub coeffs: Vec<f64>,
    pub half_width: usize,
}

impl Orbital {
    /// `c_n`, zero outside the truncation window.
    pub fn coeff(&self, n: i64) -> f64 {
        let k = self.half_width as i64;
        if n < -k || n > k {
            0.0
        } else {
            self.coeffs[(n + k) as usize]
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `c_n` keyed by the plane-wave index `j = l + nM` (wavenumber `2j/M`).
    fn plane_wave_amplitudes(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let k = self.half_width as i64;
        let l = self.nu.l();
        let m = self.nu.cycles() as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (l + (i as i64 - k) * m, c))
    }
}

/// The `n_eigs` smallest eigenpairs of the truncated matrix, ascending, with
/// orthonormal coefficient vectors whose largest-magnitude entry is positive.
pub fn eigensolve_truncated(spec: &TridiagonalSpec, n_eigs: usize) -> Result<Vec<Orbital>> {
    if n_eigs > spec.dim() {
        return Err(Error::Domain(format!(
            "asked for {n_eigs} eigenpairs of a {}-dimensional truncation",
            spec.dim()
        )));
    }
    let pairs = tridiag::lowest_eigenpairs(&spec.matrix, n_eigs)?;
    Ok(pairs
        .into_iter()
        .enumerate()
        .map(|(band, p)| Orbital {
            band,
            nu: spec.nu,
            lambda: p.value,
            coeffs: p.vector,
            half_width: spec.half_width,
        })
        .collect())
}

/// One doubling step of [`solve_adaptive_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationStep {
    /// The larger of the two half-widths compared.
    pub half_width: usize,
    /// Largest scaled change of a requested eigenvalue against the previous K.
    pub max_change: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveSolution {
    pub orbitals: Vec<Orbital>,
    pub history: Vec<TruncationStep>,
}

/// Initial half-width for a given coupling and band count.
pub fn initial_half_width(q: f64, n_bands: usize) -> usize {
    let from_q = (2.0 * q.sqrt()).ceil() as usize + 10;
    10.max(from_q).max(n_bands)
}

/// Converged orbitals for the lowest `n_bands` bands at `ν`.
pub fn solve_adaptive(nu: BlochFraction, q: f64, n_bands: usize, tol: f64) -> Result<Vec<Orbital>> {
    solve_adaptive_report(nu, q, n_bands, tol, DEFAULT_MAX_HALF_WIDTH).map(|s| s.orbitals)
}

/// Doubles `K` from [`initial_half_width`] until every requested eigenvalue
/// moves by less than `tol · max(|λ|, 1)` between successive truncations.
///
/// The absolute floor of 1 keeps eigenvalues that sit at or near zero from
/// demanding an unreachable relative accuracy.
pub fn solve_adaptive_report(
    nu: BlochFraction,
    q: f64,
    n_bands: usize,
    tol: f64,
    max_half_width: usize,
) -> Result<AdaptiveSolution> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    if n_bands < 1 {
        return Err(Error::Domain("need at least one band".into()));
    }
    let mut k = initial_half_width(q, n_bands);
    let mut previous = tridiag::lowest_eigenvalues(build_tridiagonal(nu, q, k)?.matrix(), n_bands)?;
    let mut history = Vec::new();
    loop {
        let next_k = 2 * k;
        let mut last_change = f64::INFINITY;
        if next_k <= max_half_width {
            let spec = build_tridiagonal(nu, q, next_k)?;
            let current = tridiag::lowest_eigenvalues(spec.matrix(), n_bands)?;
            last_change = previous
                .iter()
                .zip(&current)
                .map(|(a, b)| (b - a).abs() / b.abs().max(1.0))
                .fold(0.0, f64::max);
            history.push(TruncationStep {
                half_width: next_k,
                max_change: last_change,
            });
            if last_change < tol {
                let orbitals = eigensolve_truncated(&spec, n_bands)?;
                return Ok(AdaptiveSolution { orbitals, history });
            }
            previous = current;
        }
        if next_k > max_half_width {
            return Err(Error::Truncation {
                k,
                cap: max_half_width,
                last_change: history.last().map_or(last_change, |s| s.max_change),
                tol,
            });
        }
        k = next_k;
    }
}

/// `φ(z) = (Mπ)^{-1/2} e^{iνz} Σ c_n e^{2inz}`, with `z` reduced modulo `Mπ`.
pub fn evaluate_orbital(orb: &Orbital, cycles: usize, z: f64) -> Complex64 {
    let length = cycles as f64 * PI;
    let z = z.rem_euclid(length);
    let nu = orb.nu.value();
    let k = orb.half_width as i64;
    let sum: Complex64 = orb
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let kappa = nu + 2.0 * (i as i64 - k) as f64;
            let (s, co) = (kappa * z).sin_cos();
            Complex64::new(c * co, c * s)
        })
        .sum();
    sum / length.sqrt()
}

/// Which real combination a [`RealOrbital`] is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealKind {
    /// `(φ₊ + φ₋)/√2`
    Cos,
    /// `(φ₊ − φ₋)/(i√2)`
    Sin,
    /// A `ν = 0` orbital that is already real.
    Even,
    /// A `ν = 0` orbital that is `i` times a real function.
    Odd,
}

/// A real-valued orbital on `[0, Mπ]`,
///
/// ```text
/// f(z) = (Mπ)^{-1/2} [ a_0 + Σ_{j>0} (a_j cos(2jz/M) + b_j sin(2jz/M)) ].
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealOrbital {
    pub band: usize,
    /// `l ≥ 0` of the pair this came from.
    pub l: i64,
    pub kind: RealKind,
    pub lambda: f64,
    pub cycles: usize,
    /// `(j, a_j, b_j)` for `j ≥ 0`, ascending in `j`.
    pub modes: Vec<(i64, f64, f64)>,
}

/// Amplitudes below this are dropped from [`RealOrbital::modes`].
const MODE_CUTOFF: f64 = 1e-18;

impl RealOrbital {
    pub fn evaluate(&self, z: f64) -> f64 {
        let length = self.cycles as f64 * PI;
        let base = 2.0 / self.cycles as f64;
        let sum: f64 = self
            .modes
            .iter()
            .map(|&(j, a, b)| {
                if j == 0 {
                    a
                } else {
                    let (s, c) = (base * j as f64 * z).sin_cos();
                    a * c + b * s
                }
            })
            .sum();
        sum / length.sqrt()
    }

    /// Highest plane-wave index present.
    pub fn max_index(&self) -> i64 {
        self.modes.last().map_or(0, |m| m.0)
    }

    /// Complex plane-wave amplitude `A_j` of `e^{2ijz/M}` (any sign of `j`);
    /// `Σ_j |A_j|² = 1` for a normalized orbital.
    pub fn amplitude(&self, j: i64) -> Complex64 {
        let key = j.abs();
        match self.modes.binary_search_by_key(&key, |m| m.0) {
            Err(_) => Complex64::new(0.0, 0.0),
            Ok(i) => {
                let (_, a, b) = self.modes[i];
                if j == 0 {
                    Complex64::new(a, 0.0)
                } else if j > 0 {
                    Complex64::new(0.5 * a, -0.5 * b)
                } else {
                    Complex64::new(0.5 * a, 0.5 * b)
                }
            }
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.modes
            .iter()
            .map(|&(j, a, b)| if j == 0 { a * a } else { 0.5 * (a * a + b * b) })
            .sum()
    }

    /// Flip the overall sign.
    pub fn negate(&mut self) {
        for m in &mut self.modes {
            m.1 = -m.1;
            m.2 = -m.2;
        }
    }

    fn from_amplitudes(
        band: usize,
        l: i64,
        kind: RealKind,
        lambda: f64,
        cycles: usize,
        amps: &BTreeMap<i64, Complex64>,
    ) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        let max_j = amps.keys().map(|j| j.abs()).max().unwrap_or(0);
        let mut modes = Vec::new();
        for j in 0..=max_j {
            let plus = amps.get(&j).copied().unwrap_or(zero);
            let minus = amps.get(&-j).copied().unwrap_or(zero);
            let defect = if j == 0 {
                plus.im.abs()
            } else {
                (minus - plus.conj()).norm()
            };
            if defect > 1e-8 {
                return Err(Error::Degeneracy(format!(
                    "combination is not real: plane wave {j} has imaginary defect {defect:e}"
                )));
            }
            let (a, b) = if j == 0 {
                (plus.re, 0.0)
            } else {
                (plus.re + minus.re, minus.im - plus.im)
            };
            if a.abs() > MODE_CUTOFF || b.abs() > MODE_CUTOFF {
                modes.push((j, a, b));
            }
        }
        Ok(RealOrbital {
            band,
            l,
            kind,
            lambda,
            cycles,
            modes,
        })
    }
}

/// Overlap `Σ_n c'_n c_{−n}` between an orbital and the mirror image of another.
fn mirror_overlap(a: &Orbital, b: &Orbital) -> f64 {
    let k = a.half_width.max(b.half_width) as i64;
    (-k..=k).map(|n| b.coeff(n) * a.coeff(-n)).sum()
}

/// The orthonormal real pair `(φ₊ + φ₋)/√2`, `(φ₊ − φ₋)/(i√2)` spanning the
/// same space as a degenerate `±ν` pair.
///
/// For a real potential `φ₋` is `±conj(φ₊)`; the sign of `φ₋` is aligned
/// first (an overall phase) so both combinations come out real.
pub fn realize_degenerate_pair(
    plus: &Orbital,
    minus: &Orbital,
) -> Result<(RealOrbital, RealOrbital)> {
    if minus.nu != plus.nu.neg() {
        return Err(Error::Degeneracy(format!(
            "ν mismatch: {} and {} are not opposite",
            plus.nu, minus.nu
        )));
    }
    if (plus.lambda - minus.lambda).abs() >= 1e-10 {
        return Err(Error::Degeneracy(format!(
            "λ mismatch: {} vs {}",
            plus.lambda, minus.lambda
        )));
    }
    let overlap = mirror_overlap(plus, minus);
    if (overlap.abs() - 1.0).abs() > 1e-8 {
        return Err(Error::Degeneracy(format!(
            "orbitals at ν = {} are not mirror images (overlap {overlap})",
            plus.nu
        )));
    }
    let align = overlap.signum();
    let cycles = plus.nu.cycles() as usize;

    let mut sum: BTreeMap<i64, Complex64> = BTreeMap::new();
    let mut diff: BTreeMap<i64, Complex64> = BTreeMap::new();
    for (j, c) in plus.plane_wave_amplitudes() {
        *sum.entry(j).or_default() += c;
        *diff.entry(j).or_default() += c;
    }
    for (j, c) in minus.plane_wave_amplitudes() {
        *sum.entry(j).or_default() += align * c;
        *diff.entry(j).or_default() -= align * c;
    }
    let scale_c = Complex64::new(FRAC_1_SQRT_2, 0.0);
    // 1/(i√2) = −i/√2
    let scale_s = Complex64::new(0.0, -FRAC_1_SQRT_2);
    sum.values_mut().for_each(|v| *v *= scale_c);
    diff.values_mut().for_each(|v| *v *= scale_s);

    let l = plus.nu.l().abs();
    let lambda = 0.5 * (plus.lambda + minus.lambda);
    let band = plus.band.min(minus.band);
    let cos = RealOrbital::from_amplitudes(band, l, RealKind::Cos, lambda, cycles, &sum)?;
    let sin = RealOrbital::from_amplitudes(band, l, RealKind::Sin, lambda, cycles, &diff)?;
    Ok((cos, sin))
}

/// Real form of a non-degenerate `ν = 0` orbital, whose coefficients are
/// even (`c_{−n} = c_n`, already real) or odd (`φ = i·real`).
pub fn realize_single(orb: &Orbital) -> Result<RealOrbital> {
    if orb.nu.l() != 0 {
        return Err(Error::Degeneracy(format!(
            "only ν = 0 orbitals are real on their own, got ν = {}",
            orb.nu
        )));
    }
    let parity = mirror_overlap(orb, orb);
    let (kind, phase) = if (parity - 1.0).abs() <= 1e-8 {
        (RealKind::Even, Complex64::new(1.0, 0.0))
    } else if (parity + 1.0).abs() <= 1e-8 {
        (RealKind::Odd, Complex64::new(0.0, -1.0))
    } else {
        return Err(Error::Degeneracy(format!(
            "ν = 0 orbital in band {} has no definite parity (mirror overlap {parity})",
            orb.band
        )));
    };
    let amps: BTreeMap<i64, Complex64> = orb
        .plane_wave_amplitudes()
        .map(|(j, c)| (j, phase * c))
        .collect();
    RealOrbital::from_amplitudes(
        orb.band,
        0,
        kind,
        orb.lambda,
        orb.nu.cycles() as usize,
        &amps,
    )
}

/// Whether a `ν = 0` orbital has definite parity.
pub fn has_definite_parity(orb: &Orbital) -> bool {
    (mirror_overlap(orb, orb).abs() - 1.0).abs() <= 1e-8
}

/// Whether two same-`λ` orbitals are mirror images (`c'_n = ±c_{−n}`).
pub fn are_mirror_partners(a: &Orbital, b: &Orbital) -> bool {
    a.nu == b.nu.neg()
        && (a.lambda - b.lambda).abs() < 1e-10
        && (mirror_overlap(a, b).abs() - 1.0).abs() <= 1e-8
}

/// Cos-type real combination of a single complex orbital, used when one
/// member of a degenerate pair is occupied without its partner.
pub fn realize_unpaired(orb: &Orbital) -> Result<RealOrbital> {
    let mirrored = Orbital {
        band: orb.band,
        nu: orb.nu.neg(),
        lambda: orb.lambda,
        coeffs: orb.coeffs.iter().rev().copied().collect(),
        half_width: orb.half_width,
    };
    realize_degenerate_pair(orb, &mirrored).map(|(cos, _)| cos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::bloch_nu;

    fn trapezoid_periodic(f: impl Fn(f64) -> f64, length: f64, panels: usize) -> f64 {
        let h = length / panels as f64;
        (0..panels).map(|i| f(i as f64 * h)).sum::<f64>() * h
    }

    #[test]
    fn builds_expected_matrices() {
        let spec = build_tridiagonal(bloch_nu(0, 7).unwrap(), 1.0, 2).unwrap();
        assert_eq!(spec.matrix().diag(), &[16.0, 4.0, 0.0, 4.0, 16.0]);
        assert_eq!(spec.matrix().offdiag(), &[1.0; 4]);

        let nu = bloch_nu(3, 7).unwrap();
        let spec = build_tridiagonal(nu, 1.0, 1).unwrap();
        let v = 6.0 / 7.0;
        let want = [(v - 2.0) * (v - 2.0), v * v, (v + 2.0) * (v + 2.0)];
        for (a, b) in spec.matrix().diag().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }

        let spec = build_tridiagonal(nu, 0.0, 3).unwrap();
        assert!(spec.matrix().offdiag().iter().all(|&e| e == 0.0));
        assert!(build_tridiagonal(nu, 1.0, 0).is_err());
        assert!(build_tridiagonal(nu, -1.0, 3).is_err());
    }

    #[test]
    fn free_spectrum_and_unit_vectors() {
        let spec = build_tridiagonal(bloch_nu(0, 7).unwrap(), 0.0, 2).unwrap();
        let orbs = eigensolve_truncated(&spec, 5).unwrap();
        let values: Vec<f64> = orbs.iter().map(|o| o.lambda).collect();
        assert_eq!(values, vec![0.0, 4.0, 4.0, 16.0, 16.0]);
        for o in &orbs {
            assert_eq!(o.coeffs.iter().filter(|&&c| c == 1.0).count(), 1);
            assert_eq!(o.coeffs.iter().filter(|&&c| c == 0.0).count(), 4);
        }
        assert!(eigensolve_truncated(&spec, 6).is_err());
    }

    #[test]
    fn adaptive_free_particle_converges_immediately() {
        let nu = bloch_nu(2, 7).unwrap();
        let sol = solve_adaptive_report(nu, 0.0, 4, 1e-12, DEFAULT_MAX_HALF_WIDTH).unwrap();
        assert_eq!(sol.history.len(), 1);
        assert_eq!(sol.history[0].max_change, 0.0);
        let v = 4.0 / 7.0;
        let mut want: Vec<f64> = (-5..=5).map(|n| (v + 2.0 * n as f64).powi(2)).collect();
        want.sort_by(f64::total_cmp);
        for (o, w) in sol.orbitals.iter().zip(want) {
            assert!((o.lambda - w).abs() < 1e-13);
        }
    }

    #[test]
    fn adaptive_hits_cap() {
        let nu = bloch_nu(0, 7).unwrap();
        let err = solve_adaptive_report(nu, 1.0, 2, 1e-300, 40).unwrap_err();
        assert!(matches!(err, Error::Truncation { cap: 40, .. }), "{err}");
        assert!(solve_adaptive(nu, 1.0, 2, 0.0).is_err());
        assert!(solve_adaptive(nu, 1.0, 0, 1e-12).is_err());
    }

    #[test]
    fn adaptive_exit_condition_holds() {
        let nu = bloch_nu(1, 9).unwrap();
        let tol = 1e-12;
        let sol = solve_adaptive_report(nu, 7.5, 3, tol, DEFAULT_MAX_HALF_WIDTH).unwrap();
        assert!(sol.history.last().unwrap().max_change < tol);
        assert_eq!(
            sol.orbitals[0].half_width,
            sol.history.last().unwrap().half_width
        );
    }

    #[test]
    fn orbital_is_normalized_and_bloch() {
        let m = 7;
        let nu = bloch_nu(2, m).unwrap();
        let orbs = solve_adaptive(nu, 1.0, 3, 1e-13).unwrap();
        let length = m as f64 * PI;
        for o in &orbs {
            assert!((o.norm_sqr() - 1.0).abs() < 1e-12);
            let norm = trapezoid_periodic(|z| evaluate_orbital(o, m, z).norm_sqr(), length, 4096);
            assert!((norm - 1.0).abs() < 1e-10, "norm {norm}");
            let phase = Complex64::from_polar(1.0, nu.value() * PI);
            for &z in &[0.0, 0.3, 2.1, 9.7, 18.0] {
                let a = evaluate_orbital(o, m, z + PI);
                let b = phase * evaluate_orbital(o, m, z);
                assert!((a - b).norm() < 1e-12);
            }
            let start = evaluate_orbital(o, m, 0.0);
            let end = evaluate_orbital(o, m, length);
            assert!((start - end).norm() < 1e-12);
        }
    }

    #[test]
    fn free_ground_orbital_is_constant() {
        let m = 5;
        let orb = &solve_adaptive(bloch_nu(0, m).unwrap(), 0.0, 1, 1e-12).unwrap()[0];
        let want = 1.0 / (m as f64 * PI).sqrt();
        for &z in &[0.0, 1.0, 4.4, 15.0] {
            let v = evaluate_orbital(orb, m, z);
            assert!((v.re - want).abs() < 1e-15 && v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn free_pair_realizes_to_cos_and_sin() {
        let m = 7;
        let plus = &solve_adaptive(bloch_nu(1, m).unwrap(), 0.0, 1, 1e-12).unwrap()[0];
        let minus = &solve_adaptive(bloch_nu(-1, m).unwrap(), 0.0, 1, 1e-12).unwrap()[0];
        let (c, s) = realize_degenerate_pair(plus, minus).unwrap();
        let amp = (2.0 / (7.0 * PI)).sqrt();
        for &z in &[0.0, 0.7, 3.3, 12.0, 21.0] {
            assert!((c.evaluate(z) - amp * (2.0 * z / 7.0).cos()).abs() < 1e-14);
            assert!((s.evaluate(z) - amp * (2.0 * z / 7.0).sin()).abs() < 1e-14);
        }
        assert_eq!(c.kind, RealKind::Cos);
        assert_eq!(s.kind, RealKind::Sin);
    }

    #[test]
    fn pair_projector_and_orthonormality() {
        let m = 7;
        let q = 1.0;
        let plus = &solve_adaptive(bloch_nu(3, m).unwrap(), q, 2, 1e-13).unwrap()[1];
        let minus = &solve_adaptive(bloch_nu(-3, m).unwrap(), q, 2, 1e-13).unwrap()[1];
        let (c, s) = realize_degenerate_pair(plus, minus).unwrap();
        let zs = [0.1, 1.7, 5.0, 13.2, 20.9];
        for &x in &zs {
            for &y in &zs {
                let real = c.evaluate(x) * c.evaluate(y) + s.evaluate(x) * s.evaluate(y);
                let cplx = evaluate_orbital(plus, m, x) * evaluate_orbital(plus, m, y).conj()
                    + evaluate_orbital(minus, m, x) * evaluate_orbital(minus, m, y).conj();
                assert!((cplx.re - real).abs() < 1e-10 && cplx.im.abs() < 1e-10);
            }
        }
        let length = m as f64 * PI;
        let cc = trapezoid_periodic(|z| c.evaluate(z).powi(2), length, 4096);
        let ss = trapezoid_periodic(|z| s.evaluate(z).powi(2), length, 4096);
        let cs = trapezoid_periodic(|z| c.evaluate(z) * s.evaluate(z), length, 4096);
        assert!((cc - 1.0).abs() < 1e-10 && (ss - 1.0).abs() < 1e-10 && cs.abs() < 1e-10);
        assert!((c.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_sign_is_aligned() {
        let m = 5;
        let plus = solve_adaptive(bloch_nu(2, m).unwrap(), 2.0, 1, 1e-13)
            .unwrap()
            .remove(0);
        let mut minus = solve_adaptive(bloch_nu(-2, m).unwrap(), 2.0, 1, 1e-13)
            .unwrap()
            .remove(0);
        let (c1, _) = realize_degenerate_pair(&plus, &minus).unwrap();
        minus.coeffs.iter_mut().for_each(|c| *c = -*c);
        let (c2, _) = realize_degenerate_pair(&plus, &minus).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn pair_errors() {
        let m = 7;
        let a = &solve_adaptive(bloch_nu(1, m).unwrap(), 1.0, 2, 1e-13).unwrap();
        let b = &solve_adaptive(bloch_nu(-1, m).unwrap(), 1.0, 2, 1e-13).unwrap();
        let c = &solve_adaptive(bloch_nu(2, m).unwrap(), 1.0, 2, 1e-13).unwrap();
        assert!(matches!(
            realize_degenerate_pair(&a[0], &c[0]),
            Err(Error::Degeneracy(_))
        ));
        assert!(matches!(
            realize_degenerate_pair(&a[0], &b[1]),
            Err(Error::Degeneracy(_))
        ));
        assert!(realize_degenerate_pair(&a[0], &b[0]).is_ok());
    }

    #[test]
    fn single_nu_zero_orbitals() {
        let m = 3;
        let orbs = solve_adaptive(bloch_nu(0, m).unwrap(), 1.0, 3, 1e-13).unwrap();
        let kinds: Vec<RealKind> = orbs
            .iter()
            .map(|o| realize_single(o).unwrap().kind)
            .collect();
        // a_0, b_1, a_1
        assert_eq!(kinds, vec![RealKind::Even, RealKind::Odd, RealKind::Even]);
        for o in &orbs {
            let r = realize_single(o).unwrap();
            for &z in &[0.2, 1.9, 7.0] {
                let v = evaluate_orbital(o, m, z);
                assert!((v.norm() - r.evaluate(z).abs()).abs() < 1e-12);
            }
        }
        let nonzero = &solve_adaptive(bloch_nu(1, m).unwrap(), 1.0, 1, 1e-13).unwrap()[0];
        assert!(realize_single(nonzero).is_err());
    }

    #[test]
    fn nu_symmetry_of_eigenvalues() {
        for q in [0.3, 1.0, 4.0] {
            for l in 1..=4 {
                let a = solve_adaptive(bloch_nu(l, 9).unwrap(), q, 4, 1e-13).unwrap();
                let b = solve_adaptive(bloch_nu(-l, 9).unwrap(), q, 4, 1e-13).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    assert!((x.lambda - y.lambda).abs() < 1e-12);
                }
            }
        }
    }
}
