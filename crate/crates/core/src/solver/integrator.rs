use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C;

use crate::error::{precondition, Error, Result};
use crate::field::SpectralField;
use crate::grid::{GridSpec, Mode};
use crate::ops::leray_project;
use crate::transform::ScalarTransform;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dealias {
    /// Keep modes with `3|k_i| < n` on every axis.
    TwoThirds,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearForm {
    /// `u × ω`; the gradient part of `(u·∇)u` is removed by the projection.
    Rotational,
    /// `(u·∇)u`.
    Convective,
}

/// True when the 2/3 rule keeps wavevector `k` on an `n`-point grid.
pub fn dealias_retains(n: usize, k: &[i32]) -> bool {
    k.iter().all(|&x| 3 * (x.unsigned_abs() as usize) < n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub grid: GridSpec,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: Dealias,
    pub nonlinear_form: NonlinearForm,
    pub sample_every: usize,
    /// Drops the viscous term while keeping `grid.nu()` for reporting.
    pub inviscid: bool,
    /// Cutoffs `k` whose truncated energies `‖u^k‖₂²` are recorded.
    pub k_ladder: Vec<f64>,
    /// Lattice refinement for the L^∞ norms inside diagnostics (1 or 2).
    pub oversample: usize,
}

impl SolverConfig {
    pub fn new(grid: GridSpec, dt: f64, t_end: f64) -> Self {
        Self {
            grid,
            dt,
            t_end,
            dealias: Dealias::TwoThirds,
            nonlinear_form: NonlinearForm::Rotational,
            sample_every: 1,
            inviscid: false,
            k_ladder: Vec::new(),
            oversample: 2,
        }
    }

    /// Viscosity seen by the time stepper.
    pub fn effective_nu(&self) -> f64 {
        if self.inviscid {
            0.0
        } else {
            self.grid.nu()
        }
    }

    /// Number of steps to reach `t_end`.
    pub fn steps(&self) -> usize {
        libm::round(self.t_end / self.dt) as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return precondition("dt must be finite and > 0");
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return precondition("t_end must be finite and >= 0");
        }
        let steps = libm::round(self.t_end / self.dt);
        if libm::fabs(steps * self.dt - self.t_end) > 1e-9 * self.dt {
            return precondition("t_end must be an integer multiple of dt");
        }
        if self.sample_every == 0 {
            return precondition("sample_every must be >= 1");
        }
        if self.oversample != 1 && self.oversample != 2 {
            return precondition("oversample must be 1 or 2");
        }
        let kmax = self.grid.max_radius();
        let guard = self.dt * self.effective_nu() * kmax * kmax;
        if guard > 10.0 {
            return precondition(format!("dt*nu*k_max^2 = {guard} exceeds 10"));
        }
        if self.k_ladder.windows(2).any(|w| !(w[0] < w[1]))
            || self.k_ladder.iter().any(|&k| !(k >= 1.0) || !k.is_finite())
        {
            return precondition("k_ladder must be strictly increasing with entries >= 1");
        }
        Ok(())
    }
}

/// Reusable stepping state: transforms, masks and the implicit factors.
pub(crate) struct Integrator {
    grid: GridSpec,
    form: NonlinearForm,
    dt: f64,
    tf: ScalarTransform,
    modes: Vec<Mode>,
    keep: Vec<bool>,
    explicit: Vec<f64>,
    implicit: Vec<f64>,
}

impl Integrator {
    pub(crate) fn new(cfg: &SolverConfig) -> Self {
        let grid = cfg.grid;
        let modes: Vec<Mode> = grid.modes().collect();
        let keep = modes
            .iter()
            .map(|m| match cfg.dealias {
                Dealias::TwoThirds => dealias_retains(grid.n(), &m.k[..grid.dim()]),
                Dealias::None => true,
            })
            .collect();
        let nu = cfg.effective_nu();
        let explicit = modes
            .iter()
            .map(|m| 1.0 - 0.5 * cfg.dt * nu * m.k2 as f64)
            .collect();
        let implicit = modes
            .iter()
            .map(|m| 1.0 / (1.0 + 0.5 * cfg.dt * nu * m.k2 as f64))
            .collect();
        Self {
            grid,
            form: cfg.nonlinear_form,
            dt: cfg.dt,
            tf: ScalarTransform::new(&grid),
            modes,
            keep,
            explicit,
            implicit,
        }
    }

    pub(crate) fn is_dealiased(&self, u: &SpectralField) -> bool {
        let l = self.grid.spectral_len();
        (0..self.grid.dim()).all(|c| {
            u.coeffs()[c * l..(c + 1) * l]
                .iter()
                .zip(&self.keep)
                .all(|(z, &k)| k || (z.re == 0.0 && z.im == 0.0))
        })
    }

    /// Spectral derivative `i k_axis û` of one component; Nyquist modes give 0.
    fn derivative(&self, comp: &[C], axis: usize, out: &mut [C]) {
        for (m, (o, z)) in self.modes.iter().zip(out.iter_mut().zip(comp)) {
            *o = if m.nyquist {
                C::new(0.0, 0.0)
            } else {
                C::new(-z.im, z.re) * m.k[axis] as f64
            };
        }
    }

    /// Projected, dealiased nonlinear tendency `N(u)` so that `u_t = νΔu + N(u)`.
    pub(crate) fn nonlinear(&self, u: &SpectralField) -> SpectralField {
        let d = self.grid.dim();
        let l = self.grid.spectral_len();
        let pts = self.grid.points();
        let mut scratch = vec![C::new(0.0, 0.0); l];
        let mut vel = vec![0.0; pts * d];
        for c in 0..d {
            scratch.copy_from_slice(u.component(c));
            self.tf.c2r(&mut scratch, &mut vel[c * pts..(c + 1) * pts]);
        }
        let mut prod = vec![0.0; pts * d];
        let mut tmp = vec![0.0; pts];
        let mut dcomp = vec![C::new(0.0, 0.0); l];
        let mut sign = 1.0;
        match self.form {
            NonlinearForm::Rotational => {
                // ω_a = ∂_b u_c - ∂_c u_b for cyclic (a, b, c)
                let planes: &[(usize, usize, usize)] = if d == 2 {
                    &[(2, 0, 1)]
                } else {
                    &[(0, 1, 2), (1, 2, 0), (2, 0, 1)]
                };
                let mut vort = vec![0.0; pts * 3];
                for &(a, b, c) in planes {
                    self.derivative(u.component(c), b, &mut scratch);
                    self.derivative(u.component(b), c, &mut dcomp);
                    for (s, t) in scratch.iter_mut().zip(&dcomp) {
                        *s -= t;
                    }
                    self.tf.c2r(&mut scratch, &mut vort[a * pts..(a + 1) * pts]);
                }
                let v = |c: usize, p: usize| if c < d { vel[c * pts + p] } else { 0.0 };
                for p in 0..pts {
                    let (u0, u1, u2) = (v(0, p), v(1, p), v(2, p));
                    let (w0, w1, w2) = (vort[p], vort[pts + p], vort[2 * pts + p]);
                    prod[p] = u1 * w2 - u2 * w1;
                    prod[pts + p] = u2 * w0 - u0 * w2;
                    if d == 3 {
                        prod[2 * pts + p] = u0 * w1 - u1 * w0;
                    }
                }
            }
            NonlinearForm::Convective => {
                sign = -1.0;
                for i in 0..d {
                    for j in 0..d {
                        self.derivative(u.component(i), j, &mut scratch);
                        self.tf.c2r(&mut scratch, &mut tmp);
                        let uj = &vel[j * pts..(j + 1) * pts];
                        let out = &mut prod[i * pts..(i + 1) * pts];
                        for p in 0..pts {
                            out[p] += uj[p] * tmp[p];
                        }
                    }
                }
            }
        }
        let mut coeffs = vec![C::new(0.0, 0.0); l * d];
        for c in 0..d {
            let out = &mut coeffs[c * l..(c + 1) * l];
            self.tf.r2c(&prod[c * pts..(c + 1) * pts], out);
            for (z, &k) in out.iter_mut().zip(&self.keep) {
                *z = if k { *z * sign } else { C::new(0.0, 0.0) };
            }
        }
        let mut f = SpectralField::from_raw(self.grid, coeffs, false);
        f.symmetrize_planes();
        leray_project(&f)
    }

    /// One IMEX step: Crank-Nicolson on the viscous term, Heun on `N(u)`.
    /// Also returns `N(u)` at the start of the step.
    pub(crate) fn advance(&self, u: &SpectralField) -> (SpectralField, SpectralField) {
        let d = self.grid.dim();
        let l = self.grid.spectral_len();
        let n0 = self.nonlinear(u);
        let combine = |rhs: &dyn Fn(usize) -> C| {
            let mut out = vec![C::new(0.0, 0.0); l * d];
            for c in 0..d {
                for i in 0..l {
                    let at = c * l + i;
                    out[at] = (u.coeffs()[at] * self.explicit[i] + rhs(at)) * self.implicit[i];
                }
            }
            SpectralField::from_raw(self.grid, out, true)
        };
        let dt = self.dt;
        let pred = combine(&|at| n0.coeffs()[at] * dt);
        let n1 = self.nonlinear(&pred);
        let next = combine(&|at| (n0.coeffs()[at] + n1.coeffs()[at]) * (0.5 * dt));
        (next, n0)
    }
}

/// `N(u)`: the Leray-projected, dealiased nonlinear term, so that
/// `∂_t u = νΔu + N(u)`.
pub fn nonlinear_term(u: &SpectralField, cfg: &SolverConfig) -> Result<SpectralField> {
    if u.grid() != &cfg.grid {
        return precondition("field grid differs from solver grid");
    }
    Ok(Integrator::new(cfg).nonlinear(u))
}

/// Advances `u` by one step of `cfg.dt`.
///
/// A non-finite result yields [`Error::BlowUpSuspected`] carrying `u`, with
/// `time` set to `cfg.dt` (the failed step's end, relative to `u`).
pub fn step(u: &SpectralField, cfg: &SolverConfig) -> Result<SpectralField> {
    cfg.validate()?;
    let int = Integrator::new(cfg);
    check_input(&int, u, cfg)?;
    let (next, _) = int.advance(u);
    if !next.all_finite() {
        return Err(Error::BlowUpSuspected {
            time: cfg.dt,
            last_finite: alloc::boxed::Box::new(u.clone()),
        });
    }
    Ok(next)
}

pub(crate) fn check_input(int: &Integrator, u: &SpectralField, cfg: &SolverConfig) -> Result<()> {
    if u.grid() != &cfg.grid {
        return precondition("field grid differs from solver grid");
    }
    if !u.is_divergence_free() {
        return precondition("initial field is not divergence-free");
    }
    if !int.is_dealiased(u) {
        return precondition("initial field has modes removed by the dealias rule");
    }
    Ok(())
}
