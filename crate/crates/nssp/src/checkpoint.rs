//! Binary checkpoint files.
//!
//! Layout, all little-endian: the magic `NSSP`, `u32` version, `u32` dim,
//! `u32` n, `f64` viscosity, `f64` time, then every stored coefficient as an
//! `f64` real/imaginary pair in component-major half-spectrum order.

use std::fs;
use std::path::Path;

use nssp_core::{GridSpec, SpectralField};
use num_complex::Complex64;

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 4] = b"NSSP";
pub const VERSION: u32 = 1;
const HEADER: usize = 4 + 4 + 4 + 4 + 8 + 8;

pub fn encode(field: &SpectralField, time: f64) -> Vec<u8> {
    let g = field.grid();
    let mut out = Vec::with_capacity(HEADER + 16 * field.coeffs().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    out.extend_from_slice(&g.nu().to_le_bytes());
    out.extend_from_slice(&time.to_le_bytes());
    for c in field.coeffs() {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

/// Parses a checkpoint image; `path` only labels errors.
pub fn decode(bytes: &[u8], path: &Path) -> Result<(SpectralField, f64)> {
    let bad = |message: String| CliError::Format {
        path: path.to_path_buf(),
        message,
    };
    if bytes.len() < HEADER || &bytes[..4] != MAGIC {
        return Err(bad("not a checkpoint (bad magic or short header)".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let version = u32_at(4);
    if version != VERSION {
        return Err(bad(format!("unsupported checkpoint version {version}")));
    }
    let (dim, n, nu, time) = (u32_at(8) as usize, u32_at(12) as usize, f64_at(16), f64_at(24));
    let grid = GridSpec::new(dim, n, nu).map_err(|e| bad(e.to_string()))?;
    let count = grid.spectral_len() * dim;
    if bytes.len() != HEADER + 16 * count {
        return Err(bad(format!(
            "expected {} coefficient bytes, found {}",
            16 * count,
            bytes.len() - HEADER
        )));
    }
    let coeffs = bytes[HEADER..]
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    let field = SpectralField::from_coeffs(grid, coeffs).map_err(|e| bad(e.to_string()))?;
    Ok((field, time))
}

pub fn write(path: &Path, field: &SpectralField, time: f64) -> Result<()> {
    fs::write(path, encode(field, time)).map_err(CliError::io(path))
}

pub fn read(path: &Path) -> Result<(SpectralField, f64)> {
    let bytes = fs::read(path).map_err(CliError::io(path))?;
    decode(&bytes, path)
}

/// True when the file starts with the checkpoint magic.
pub fn is_checkpoint(path: &Path) -> bool {
    use std::io::Read;
    let mut head = [0u8; 4];
    fs::File::open(path)
        .and_then(|mut f| f.read_exact(&mut head))
        .is_ok()
        && &head == MAGIC
}
