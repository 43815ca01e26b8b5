//! Periodic box geometry and the half-spectrum mode layout.
//!
//! Spectral data is stored in the standard real-to-complex layout: every axis
//! but the last runs over `0..n` (FFT order, index `i` maps to wavenumber `i`
//! for `i < n/2` and `i - n` otherwise), the last axis over `0..=n/2`.
//! Coefficients with `0 < k_last < n/2` stand for themselves and their
//! Hermitian partner, hence carry weight 2 in quadratic sums.

use alloc::format;

use crate::error::{Error, Result};

/// Side length of the periodic box, fixed at `2π`.
pub const BOX_LENGTH: f64 = 2.0 * core::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    n: usize,
    nu: f64,
}

impl GridSpec {
    /// Builds a grid of `n` points per axis on `[0, 2π)^dim` with viscosity `nu`.
    pub fn new(dim: usize, n: usize, nu: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two >= 8, got {n}"
            )));
        }
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::InvalidGrid(format!("nu must be finite and > 0, got {nu}")));
        }
        Ok(Self { dim, n, nu })
    }

    /// Same box and viscosity at another resolution.
    pub fn with_resolution(&self, n: usize) -> Result<Self> {
        Self::new(self.dim, n, self.nu)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Length of the last (halved) spectral axis, `n/2 + 1`.
    pub fn half(&self) -> usize {
        self.n / 2 + 1
    }

    /// Number of stored coefficients per vector component.
    pub fn spectral_len(&self) -> usize {
        self.n.pow(self.dim as u32 - 1) * self.half()
    }

    /// Number of collocation points per component.
    pub fn points(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Signed wavenumber of FFT index `i` on a full axis.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i32 {
        if i < self.n / 2 {
            i as i32
        } else {
            i as i32 - self.n as i32
        }
    }

    /// Largest `|ξ|` representable on the grid.
    pub fn max_radius(&self) -> f64 {
        (self.n / 2) as f64 * libm::sqrt(self.dim as f64)
    }

    /// Iterates over stored modes in storage order.
    pub fn modes(&self) -> Modes {
        Modes {
            grid: *self,
            idx: [0; 3],
            flat: 0,
            len: self.spectral_len(),
        }
    }

    /// Flat storage index of the Hermitian partner of a mode lying in the
    /// `k_last = 0` or `k_last = n/2` plane (where both members are stored).
    pub(crate) fn plane_partner(&self, flat: usize) -> usize {
        let n = self.n;
        let h = self.half();
        match self.dim {
            2 => {
                let (i0, i1) = (flat / h, flat % h);
                ((n - i0) % n) * h + i1
            }
            _ => {
                let i2 = flat % h;
                let i1 = (flat / h) % n;
                let i0 = flat / (h * n);
                (((n - i0) % n) * n + (n - i1) % n) * h + i2
            }
        }
    }
}

/// `|ξ|` for an integer squared radius. Every cutoff comparison in the crate
/// goes through this function so all masks agree bit for bit.
#[inline]
pub fn radius(k2: u64) -> f64 {
    libm::sqrt(k2 as f64)
}

/// One stored spectral coefficient slot.
#[derive(Debug, Clone, Copy)]
pub struct Mode {
    /// Flat index within a component.
    pub index: usize,
    /// Signed wavevector; unused trailing entries are zero.
    pub k: [i32; 3],
    /// `|ξ|²`.
    pub k2: u64,
    /// Multiplicity in quadratic sums (1 or 2).
    pub weight: f64,
    /// Some component sits on the Nyquist index `-n/2`.
    pub nyquist: bool,
    /// Mode lives in the `k_last = 0` or `k_last = n/2` plane.
    pub in_plane: bool,
}

impl Mode {
    #[inline]
    pub fn radius(&self) -> f64 {
        radius(self.k2)
    }
}

pub struct Modes {
    grid: GridSpec,
    idx: [usize; 3],
    flat: usize,
    len: usize,
}

impl Iterator for Modes {
    type Item = Mode;

    #[inline]
    fn next(&mut self) -> Option<Mode> {
        if self.flat >= self.len {
            return None;
        }
        let g = &self.grid;
        let n = g.n;
        let h = g.half();
        let d = g.dim;
        let last = d - 1;
        let mut k = [0i32; 3];
        let mut nyquist = false;
        for a in 0..last {
            k[a] = g.wavenumber(self.idx[a]);
            nyquist |= self.idx[a] == n / 2;
        }
        let il = self.idx[last];
        k[last] = if il == n / 2 { -((n / 2) as i32) } else { il as i32 };
        nyquist |= il == n / 2;
        let in_plane = il == 0 || il == n / 2;
        let k2 = k.iter().map(|&x| (x as i64 * x as i64) as u64).sum();
        let mode = Mode {
            index: self.flat,
            k,
            k2,
            weight: if in_plane { 1.0 } else { 2.0 },
            nyquist,
            in_plane,
        };

        self.flat += 1;
        self.idx[last] += 1;
        if self.idx[last] == h {
            self.idx[last] = 0;
            let mut a = last;
            while a > 0 {
                a -= 1;
                self.idx[a] += 1;
                if self.idx[a] < n {
                    break;
                }
                self.idx[a] = 0;
            }
        }
        Some(mode)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.len - self.flat;
        (r, Some(r))
    }
}
