//! Pseudo-spectral incompressible Navier-Stokes on the periodic box
//! `[0, 2π)^d`, sharp Littlewood-Paley projections, and numerical checks of
//! the energy-superposition identities and inequalities.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod lab;
pub mod littlewood_paley;
pub mod ops;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use field::{RealField, SpectralField, Trig, DIVERGENCE_TOL};
pub use grid::{radius, GridSpec, Mode, BOX_LENGTH};
pub use littlewood_paley::{
    band, besov_norm, besov_norm_with, dyadic_block, dyadic_decompose, highpass, lowpass,
    BesovParams, DyadicDecomposition, RadialSpectrum,
};
pub use ops::{grad_l2_norm, l2_norm, leray_project, linf_norm, sobolev_norm};
pub use solver::{
    make_initial, nonlinear_term, random_divfree, run, step, Dealias, DiagnosticsRow, InitialKind,
    NonlinearForm, SolverConfig, TrajectoryRecord,
};
pub use transform::{to_physical, to_spectral};
