#![allow(dead_code)]

use nssp_core::{to_spectral, GridSpec, RealField, SpectralField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn grid(dim: usize, n: usize) -> GridSpec {
    GridSpec::new(dim, n, 0.05).unwrap()
}

/// Uniform random samples in [-1, 1), all components.
pub fn random_real(g: GridSpec, seed: u64) -> RealField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..g.points() * g.dim())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    RealField::new(g, values).unwrap()
}

/// Hermitian field with generic content in every stored mode.
pub fn random_field(g: GridSpec, seed: u64) -> SpectralField {
    to_spectral(&random_real(g, seed)).unwrap()
}

/// Single real mode `amp·cos(k·x)` in component `comp`.
pub fn cos_mode(g: GridSpec, k: [i32; 3], comp: usize) -> SpectralField {
    RealField::from_fn(g, |x| {
        let mut v = [0.0; 3];
        let phase: f64 = x.iter().zip(k.iter()).map(|(a, b)| a * *b as f64).sum();
        v[comp] = phase.cos();
        v
    })
    .pipe(|r| to_spectral(&r).unwrap())
}

pub trait Pipe: Sized {
    fn pipe<T>(self, f: impl FnOnce(Self) -> T) -> T {
        f(self)
    }
}
impl<T> Pipe for T {}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
