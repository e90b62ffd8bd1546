//! Plain-text and graymap output of sampled fields.
//!
//! CSV rows are `axis_a,axis_b,real,imaginary` with 17 significant digits, so
//! reading a file back reproduces every stored `f64` exactly. Graymaps are
//! binary PGM (P5): `axis_a` runs left to right, `axis_b` bottom to top.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Axis, AxisKind, Field2D};

pub const CSV_HEADER: &str = "axis_a,axis_b,real,imaginary";

/// Paths written by [`export_field`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportedFiles {
    pub csv: PathBuf,
    pub intensity: PathBuf,
    pub phase: PathBuf,
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

/// Write `<base>.csv`, `<base>_intensity.pgm` and `<base>_phase.pgm`.
pub fn export_field(field: &Field2D, base: &Path) -> Result<ExportedFiles> {
    let files = ExportedFiles {
        csv: with_suffix(base, ".csv"),
        intensity: with_suffix(base, "_intensity.pgm"),
        phase: with_suffix(base, "_phase.pgm"),
    };
    write_field_csv(field, &files.csv)?;
    write_intensity_pgm(field, &files.intensity)?;
    write_phase_pgm(field, &files.phase)?;
    Ok(files)
}

pub fn field_csv(field: &Field2D) -> String {
    let (na, nb) = field.values.dim();
    let mut s = String::with_capacity(80 * na * nb + 32);
    s.push_str(CSV_HEADER);
    s.push('\n');
    for i in 0..na {
        let a = field.axis_a.coord(i);
        for j in 0..nb {
            let v = field.values[[i, j]];
            let _ = writeln!(s, "{:.16e},{:.16e},{:.16e},{:.16e}", a, field.axis_b.coord(j), v.re, v.im);
        }
    }
    s
}

pub fn write_field_csv(field: &Field2D, path: &Path) -> Result<()> {
    write(path, field_csv(field).as_bytes())
}

/// Parse a CSV written by [`write_field_csv`]. Axis kinds are not stored in
/// the file and must be supplied.
pub fn read_field_csv(path: &Path, kinds: (AxisKind, AxisKind)) -> Result<Field2D> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_field_csv(&text, kinds)
}

pub fn parse_field_csv(text: &str, kinds: (AxisKind, AxisKind)) -> Result<Field2D> {
    let bad = |line: usize, why: &str| Error::Grid(format!("csv line {line}: {why}"));
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(bad(1, "missing header"));
    }
    let mut rows: Vec<[f64; 4]> = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = [0.0; 4];
        let mut parts = line.split(',');
        for slot in row.iter_mut() {
            *slot = parts
                .next()
                .and_then(|p| p.trim().parse().ok())
                .ok_or_else(|| bad(k + 2, "expected four numbers"))?;
        }
        if parts.next().is_some() {
            return Err(bad(k + 2, "expected four numbers"));
        }
        rows.push(row);
    }
    let first_a = rows.first().ok_or_else(|| bad(2, "no data"))?[0];
    let nb = rows.iter().take_while(|r| r[0] == first_a).count();
    if nb < 2 || !rows.len().is_multiple_of(nb) || rows.len() / nb < 2 {
        return Err(Error::Grid("csv rows do not form a rectangular grid".into()));
    }
    let na = rows.len() / nb;
    let last = rows[rows.len() - 1];
    let axis_a = Axis::new(kinds.0, na, first_a, last[0])?;
    let axis_b = Axis::new(kinds.1, nb, rows[0][1], last[1])?;
    let values = Array2::from_shape_fn((na, nb), |(i, j)| {
        let r = rows[i * nb + j];
        Complex64::new(r[2], r[3])
    });
    Field2D::new(axis_a, axis_b, values)
}

fn pgm(field: &Field2D, pixel: impl Fn(Complex64) -> u8) -> Vec<u8> {
    let (na, nb) = field.values.dim();
    let mut out = format!("P5\n{na} {nb}\n255\n").into_bytes();
    out.reserve(na * nb);
    for j in (0..nb).rev() {
        for i in 0..na {
            out.push(pixel(field.values[[i, j]]));
        }
    }
    out
}

/// `|v|^2` scaled linearly so the peak maps to 255.
pub fn intensity_pgm(field: &Field2D) -> Vec<u8> {
    let peak = field.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    let scale = if peak > 0.0 { 255.0 / peak } else { 0.0 };
    pgm(field, |v| (v.norm_sqr() * scale).round().clamp(0.0, 255.0) as u8)
}

/// `arg v` mapped linearly from `[-pi, pi]` to `[0, 255]`.
pub fn phase_pgm(field: &Field2D) -> Vec<u8> {
    pgm(field, |v| ((v.arg() + PI) / (2.0 * PI) * 255.0).round().clamp(0.0, 255.0) as u8)
}

pub fn write_intensity_pgm(field: &Field2D, path: &Path) -> Result<()> {
    write(path, &intensity_pgm(field))
}

pub fn write_phase_pgm(field: &Field2D, path: &Path) -> Result<()> {
    write(path, &phase_pgm(field))
}
