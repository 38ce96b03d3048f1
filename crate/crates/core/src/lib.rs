//! Band structure of a magnetized 1D cosine lattice and the ground-state
//! observables of its free-fermion and Tonks-Girardeau (hard-core boson) gases.
//!
//! Everything internal runs in the dimensionless variables of the Mathieu
//! equation `φ'' + (λ − 2q cos 2z) φ = 0` on the box `z ∈ [0, Mπ]`; SI units
//! only appear at the output boundary (see [`lattice`]).
//!
//! Layout:
//! - [`lattice`]: physical parameters, `q`, `λ ↔ E` conversion, Bloch fractions.
//! - [`tridiag`]: symmetric tridiagonal eigensolver (Sturm bisection + inverse iteration).
//! - [`mathieu`]: truncated Fourier-space eigenproblem, orbitals, real orbital pairs.
//! - [`bands`]: band assembly, first gap, parameter scans, Boltzmann ratio.
//! - [`manybody`]: Slater-determinant Fermi state and its mapped Bose state.
//! - [`observables`]: density, pair distribution, density matrices, momenta.
//! - [`emit`]: deterministic CSV/JSON serialization of results.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bands;
pub mod emit;
pub mod error;
pub mod lattice;
pub mod manybody;
pub mod mathieu;
pub mod observables;
pub mod tridiag;

pub use error::{Error, Result};
pub use lattice::{BlochFraction, LatticeConfig, PhysicalConstants, PhysicalParams};
pub use manybody::{ManyBodyState, Statistics};
pub use mathieu::{Orbital, RealOrbital};
