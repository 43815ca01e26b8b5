//! Runtime checks of the superposition identities and inequalities, static
//! (single field) and dynamic (along a trajectory).

mod dynamic;
mod series;
mod static_checks;
mod superposition;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C;

use crate::error::Result;
use crate::field::SpectralField;
use crate::grid::BOX_LENGTH;
use crate::solver::{dealias_retains, SolverConfig};
use crate::transform::to_physical;

pub use dynamic::{
    differential_inequality_monitor, gronwall_envelope, theorem23_threshold, GronwallEnvelope,
    MonitorReport, MonitorSample, Theorem23Report,
};
pub use series::{
    poly_superposition_identity, power_sum_bounds, weighted_rearrangement, POWER_SUM_LIMIT,
};
pub use static_checks::{
    check_band_tail, check_bernstein, check_linf_bound, check_orthogonality,
    check_product_support, hhalf_equivalence, linf_bound_ensemble, superposition_identity,
    LinfEnsemble,
};
pub use superposition::{
    a_of_s, minimal_s, superposition_diagnostics, Rung, SuperpositionConfig, SuperpositionReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    IdentityPass,
    IdentityFail,
    InequalityPass,
    InequalityFail,
    /// Informational ratio; never fails.
    RatioReport,
}

impl CheckStatus {
    pub fn passed(&self) -> bool {
        !matches!(self, CheckStatus::IdentityFail | CheckStatus::InequalityFail)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::IdentityPass => "identity_pass",
            CheckStatus::IdentityFail => "identity_fail",
            CheckStatus::InequalityPass => "inequality_pass",
            CheckStatus::InequalityFail => "inequality_fail",
            CheckStatus::RatioReport => "ratio_report",
        }
    }
}

/// Outcome of one check. `margin` is `rhs - lhs` for identities and
/// inequalities, and the reported ratio for ratio reports.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub status: CheckStatus,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub context: String,
    pub time: Option<f64>,
    pub k: Option<f64>,
    pub sigma: Option<f64>,
}

impl CheckReport {
    /// Passes when `|lhs - rhs| ≤ tol·max(|lhs|, |rhs|, 1)`.
    pub fn identity(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let scale = libm::fabs(lhs).max(libm::fabs(rhs)).max(1.0);
        let ok = libm::fabs(lhs - rhs) <= tol * scale;
        Self::build(name, ok, CheckStatus::IdentityPass, CheckStatus::IdentityFail, lhs, rhs, tol)
    }

    /// Passes when `lhs ≤ rhs + tol·|rhs|`.
    pub fn inequality(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let ok = lhs <= rhs + tol * libm::fabs(rhs);
        Self::build(
            name,
            ok,
            CheckStatus::InequalityPass,
            CheckStatus::InequalityFail,
            lhs,
            rhs,
            tol,
        )
    }

    pub fn ratio(name: &str, lhs: f64, rhs: f64, ratio: f64) -> Self {
        Self {
            name: name.into(),
            status: CheckStatus::RatioReport,
            lhs,
            rhs,
            margin: ratio,
            tolerance: 0.0,
            context: String::new(),
            time: None,
            k: None,
            sigma: None,
        }
    }

    fn build(
        name: &str,
        ok: bool,
        pass: CheckStatus,
        fail: CheckStatus,
        lhs: f64,
        rhs: f64,
        tol: f64,
    ) -> Self {
        Self {
            name: name.into(),
            status: if ok { pass } else { fail },
            lhs,
            rhs,
            margin: rhs - lhs,
            tolerance: tol,
            context: String::new(),
            time: None,
            k: None,
            sigma: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status.passed()
    }

    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = context.into();
        self
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.time = Some(t);
        self
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = Some(sigma);
        self
    }

    /// Demotes a pass to a fail (used when a companion condition breaks).
    pub(crate) fn fail(mut self) -> Self {
        self.status = match self.status {
            CheckStatus::IdentityPass => CheckStatus::IdentityFail,
            CheckStatus::InequalityPass | CheckStatus::RatioReport => CheckStatus::InequalityFail,
            s => s,
        };
        self
    }
}

fn dealiased(f: &SpectralField) -> bool {
    let g = f.grid();
    let d = g.dim();
    g.modes().all(|m| {
        dealias_retains(g.n(), &m.k[..d])
            || f.at(m.index)[..d].iter().all(|c| c.re == 0.0 && c.im == 0.0)
    })
}

/// `((a·∇)b, c)₂` by lattice quadrature. The base lattice is used when all
/// three fields pass the 2/3 rule (the triple product then has no aliased
/// mean), the doubled lattice otherwise.
pub fn advection_inner(a: &SpectralField, b: &SpectralField, c: &SpectralField) -> Result<f64> {
    let grid = *a.grid();
    let d = grid.dim();
    let os = if dealiased(a) && dealiased(b) && dealiased(c) { 1 } else { 2 };
    let pa = to_physical(a, os)?;
    let pc = to_physical(c, os)?;
    let pts = pa.grid().points();
    let l = grid.spectral_len();
    let mut acc = vec![0.0; pts];
    let modes: Vec<_> = grid.modes().collect();
    for i in 0..d {
        for j in 0..d {
            let mut deriv = vec![C::new(0.0, 0.0); l * d];
            for m in &modes {
                if !m.nyquist {
                    let z = b.component(i)[m.index];
                    deriv[m.index] = C::new(-z.im, z.re) * m.k[j] as f64;
                }
            }
            let f = SpectralField::from_raw(grid, deriv, false);
            let pd = to_physical(&f, os)?;
            let (aj, ci, di) = (pa.component(j), pc.component(i), pd.component(0));
            for p in 0..pts {
                acc[p] += aj[p] * di[p] * ci[p];
            }
        }
    }
    let w = libm::pow(BOX_LENGTH, d as f64) / pts as f64;
    Ok(w * acc.iter().sum::<f64>())
}

/// `T(|ξ|²) = Σ_{|ξ|² fixed} Re conj(û)·N̂(u)`, so that
/// `d/(2dt)‖u^k‖₂² + ν‖∇u^k‖₂² = Σ_{|ξ| ≥ k} T`.
pub fn transfer_spectrum(u: &SpectralField, cfg: &SolverConfig) -> Result<Vec<f64>> {
    let n = crate::solver::nonlinear_term(u, cfg)?;
    let grid = u.grid();
    let d = grid.dim();
    let half = grid.n() / 2;
    let mut bins = vec![0.0; d * half * half + 1];
    for m in grid.modes() {
        let a = u.at(m.index);
        let b = n.at(m.index);
        let mut s = 0.0;
        for c in 0..d {
            s += a[c].re * b[c].re + a[c].im * b[c].im;
        }
        bins[m.k2 as usize] += m.weight * s;
    }
    Ok(bins)
}

/// Number of integers `k ≥ 1` with `radius(k2) ≥ k`.
pub(crate) fn ladder_count(k2: u64) -> f64 {
    libm::floor(crate::grid::radius(k2))
}

/// Smallest integer strictly above every lattice radius.
pub(crate) fn radius_bound(grid: &crate::grid::GridSpec) -> u64 {
    libm::floor(grid.max_radius()) as u64 + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::solver::random_divfree;

    #[test]
    fn status_rules() {
        assert!(CheckReport::identity("x", 1.0, 1.0 + 1e-11, 1e-10).passed());
        assert!(!CheckReport::identity("x", 1.0, 1.1, 1e-10).passed());
        // the floor of 1 in the scale keeps tiny values from failing on noise
        assert!(CheckReport::identity("x", 1e-20, 0.0, 1e-12).passed());
        assert!(CheckReport::inequality("x", 1.0 + 1e-11, 1.0, 1e-10).passed());
        assert!(!CheckReport::inequality("x", 2.0, 1.0, 1e-10).passed());
        let r = CheckReport::ratio("x", 3.0, 1.0, 3.0);
        assert!(r.passed() && r.margin == 3.0);
        assert_eq!(r.clone().fail().status, CheckStatus::InequalityFail);
        assert_eq!(
            CheckReport::identity("x", 1.0, 1.0, 0.0).fail().status.as_str(),
            "identity_fail"
        );
    }

    #[test]
    fn ladder_helpers() {
        assert_eq!(ladder_count(0), 0.0);
        assert_eq!(ladder_count(3), 1.0);
        assert_eq!(ladder_count(4), 2.0);
        let g = GridSpec::new(3, 8, 0.1).unwrap();
        // max radius √48 ≈ 6.93
        assert_eq!(radius_bound(&g), 7);
    }

    #[test]
    fn transfer_sums_to_zero() {
        let g = GridSpec::new(3, 16, 0.05).unwrap();
        let u = random_divfree(&g, 2, -2.0, None).unwrap();
        let cfg = SolverConfig::new(g, 0.01, 0.01);
        let t = transfer_spectrum(&u, &cfg).unwrap();
        let total: f64 = t.iter().sum();
        let scale: f64 = t.iter().map(|x| x.abs()).sum();
        assert!(total.abs() <= 1e-12 * scale);
    }
}
