//! Radix-2 FFT engine and the real <-> half-spectrum transforms built on it.
//!
//! All transforms are unnormalized: `forward` computes `Σ x_j e^{-2πijk/n}`,
//! `inverse` computes `Σ X_k e^{+2πijk/n}`. Scaling to the unitary
//! convention happens in [`crate::transform`].

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C;

/// Iterative in-place radix-2 FFT for one power-of-two length.
#[derive(Debug, Clone)]
pub struct Radix2 {
    n: usize,
    twiddles: Vec<C>,
    rev: Vec<u32>,
}

impl Radix2 {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two() && n >= 2, "radix-2 length must be a power of two");
        let twiddles = (0..n / 2)
            .map(|k| {
                let (s, c) = libm::sincos(-2.0 * core::f64::consts::PI * k as f64 / n as f64);
                C::new(c, s)
            })
            .collect();
        let bits = n.trailing_zeros();
        let rev = (0..n as u32)
            .map(|i| i.reverse_bits() >> (32 - bits))
            .collect();
        Self { n, twiddles, rev }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn forward(&self, buf: &mut [C]) {
        self.run(buf, false);
    }

    pub fn inverse(&self, buf: &mut [C]) {
        self.run(buf, true);
    }

    fn run(&self, buf: &mut [C], inverse: bool) {
        let n = self.n;
        debug_assert_eq!(buf.len(), n);
        for i in 0..n {
            let j = self.rev[i] as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for start in (0..n).step_by(len) {
                let (lo, hi) = buf[start..start + len].split_at_mut(half);
                for j in 0..half {
                    let w = self.twiddles[j * step];
                    let w = if inverse { w.conj() } else { w };
                    let b = hi[j] * w;
                    let a = lo[j];
                    lo[j] = a + b;
                    hi[j] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

/// Multi-dimensional real transform on an `m^dim` lattice using the
/// half-spectrum layout of [`crate::grid`].
#[derive(Debug, Clone)]
pub struct RealFft {
    dim: usize,
    m: usize,
    line: Radix2,
}

impl RealFft {
    pub fn new(dim: usize, m: usize) -> Self {
        Self {
            dim,
            m,
            line: Radix2::new(m),
        }
    }

    fn half(&self) -> usize {
        self.m / 2 + 1
    }

    pub fn spectral_len(&self) -> usize {
        self.m.pow(self.dim as u32 - 1) * self.half()
    }

    pub fn points(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    /// Complex transform of every line along a full (non-halved) axis.
    /// Lines that are identically zero are skipped.
    fn transform_axis(&self, spec: &mut [C], axis: usize, inverse: bool, buf: &mut [C]) {
        let m = self.m;
        let stride = m.pow((self.dim - 2 - axis) as u32) * self.half();
        let outer = m.pow(axis as u32);
        for o in 0..outer {
            for r in 0..stride {
                let base = o * m * stride + r;
                let mut any = false;
                for t in 0..m {
                    let v = spec[base + t * stride];
                    any |= v.re != 0.0 || v.im != 0.0;
                    buf[t] = v;
                }
                if !any {
                    continue;
                }
                if inverse {
                    self.line.inverse(buf);
                } else {
                    self.line.forward(buf);
                }
                for t in 0..m {
                    spec[base + t * stride] = buf[t];
                }
            }
        }
    }

    /// Half spectrum -> real samples. `spec` is used as scratch.
    pub fn c2r(&self, spec: &mut [C], out: &mut [f64]) {
        let m = self.m;
        let h = self.half();
        assert_eq!(spec.len(), self.spectral_len());
        assert_eq!(out.len(), self.points());
        let mut buf = vec![C::new(0.0, 0.0); m];
        for axis in 0..self.dim - 1 {
            self.transform_axis(spec, axis, true, &mut buf);
        }
        // Two real lines per complex transform: ifft(A + iB) = a + ib.
        let lines = m.pow(self.dim as u32 - 1);
        for p in (0..lines).step_by(2) {
            let a = &spec[p * h..(p + 1) * h];
            let b = &spec[(p + 1) * h..(p + 2) * h];
            buf[0] = C::new(a[0].re, b[0].re);
            buf[m / 2] = C::new(a[m / 2].re, b[m / 2].re);
            for k in 1..m / 2 {
                buf[k] = C::new(a[k].re - b[k].im, a[k].im + b[k].re);
                buf[m - k] = C::new(a[k].re + b[k].im, b[k].re - a[k].im);
            }
            self.line.inverse(&mut buf);
            for x in 0..m {
                out[p * m + x] = buf[x].re;
                out[(p + 1) * m + x] = buf[x].im;
            }
        }
    }

    /// Real samples -> half spectrum.
    pub fn r2c(&self, input: &[f64], spec: &mut [C]) {
        let m = self.m;
        let h = self.half();
        assert_eq!(spec.len(), self.spectral_len());
        assert_eq!(input.len(), self.points());
        let mut buf = vec![C::new(0.0, 0.0); m];
        let lines = m.pow(self.dim as u32 - 1);
        for p in (0..lines).step_by(2) {
            for x in 0..m {
                buf[x] = C::new(input[p * m + x], input[(p + 1) * m + x]);
            }
            self.line.forward(&mut buf);
            for k in 0..h {
                let z = buf[k];
                let zc = buf[(m - k) % m].conj();
                let a = (z + zc) * 0.5;
                let d = (z - zc) * 0.5;
                // b = d / i
                spec[p * h + k] = a;
                spec[(p + 1) * h + k] = C::new(d.im, -d.re);
            }
        }
        for axis in (0..self.dim - 1).rev() {
            self.transform_axis(spec, axis, false, &mut buf);
        }
    }
}
