//! Pseudo-spectral time integration of the incompressible Navier-Stokes
//! equations on the periodic box.

mod initial;
mod integrator;
mod trajectory;

pub use initial::{make_initial, random_divfree, InitialKind};
pub use integrator::{
    dealias_retains, nonlinear_term, step, Dealias, NonlinearForm, SolverConfig,
};
pub use trajectory::{run, DiagnosticsRow, TrajectoryRecord};
