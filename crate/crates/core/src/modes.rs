//! Normalized Hermite-Gaussian, Laguerre-Gaussian and diagonal
//! Hermite-Gaussian fields, in position or wavevector representation.
//!
//! Every family is evaluated through dimensionless coordinates
//! (`sqrt(2) x / w` for position, `w q / sqrt(2)` for wavevector, see
//! [`AxisKind::dimensionless_scale`]). In wavevector space this reproduces the
//! envelope `exp(-w^2 |q|^2 / 4)` and polynomial argument `w q / sqrt(2)`; the
//! prefactor is whatever makes the discrete L2 norm one.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, AxisKind, Field2D};
use crate::special::{factorial, hermite_function, hermite_functions, laguerre_poly};

/// Hermite-Gaussian indices `(n, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub n: usize,
    pub m: usize,
}

impl ModeIndex {
    pub const fn new(n: usize, m: usize) -> Self {
        ModeIndex { n, m }
    }

    pub fn order(&self) -> usize {
        self.n + self.m
    }

    /// The LG mode reached by the HG to LG converter: `l = n - m`, `p = min(n, m)`.
    pub fn to_lg(&self) -> LGIndex {
        LGIndex {
            p: self.n.min(self.m),
            l: self.n as i64 - self.m as i64,
        }
    }

    /// All indices with `n + m <= max_order`, ordered by order then by `m`.
    pub fn up_to_order(max_order: usize) -> Vec<ModeIndex> {
        (0..=max_order)
            .flat_map(|order| (0..=order).map(move |m| ModeIndex::new(order - m, m)))
            .collect()
    }
}

/// Laguerre-Gaussian indices: radial `p` and azimuthal charge `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LGIndex {
    pub p: usize,
    pub l: i64,
}

impl LGIndex {
    pub const fn new(p: usize, l: i64) -> Self {
        LGIndex { p, l }
    }

    pub fn order(&self) -> usize {
        self.l.unsigned_abs() as usize + 2 * self.p
    }
}

/// Wavelength, waist and reference-plane Gouy phase of a paraxial family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamParams {
    pub wavelength: f64,
    pub waist: f64,
    pub gouy_phase: f64,
}

impl BeamParams {
    pub fn new(wavelength: f64, waist: f64) -> Result<Self> {
        Self::with_gouy(wavelength, waist, 0.0)
    }

    pub fn with_gouy(wavelength: f64, waist: f64, gouy_phase: f64) -> Result<Self> {
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::invalid("wavelength", format!("must be > 0, got {wavelength}")));
        }
        if !(waist > 0.0 && waist.is_finite()) {
            return Err(Error::invalid("waist", format!("must be > 0, got {waist}")));
        }
        Ok(BeamParams {
            wavelength,
            waist,
            gouy_phase,
        })
    }

    /// `exp(-i (order + 1) eta)` at the reference plane.
    pub fn gouy_factor(&self, order: usize) -> Complex64 {
        Complex64::from_polar(1.0, -((order + 1) as f64) * self.gouy_phase)
    }

    /// Default grid: 8 waists either side of the axis, 513 samples (odd, so the origin is a sample).
    pub fn default_grid(&self, kind: AxisKind) -> (Axis, Axis) {
        let ax = Axis::spanning_waists(kind, DEFAULT_SAMPLES, self.waist, DEFAULT_SPAN_WAISTS)
            .expect("waist validated at construction");
        (ax, ax)
    }
}

pub const DEFAULT_SAMPLES: usize = 513;
pub const DEFAULT_SPAN_WAISTS: f64 = 8.0;

/// A mode of any of the three families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Hg(ModeIndex),
    Lg(LGIndex),
    Dhg(ModeIndex),
}

impl Mode {
    pub fn order(&self) -> usize {
        match self {
            Mode::Hg(i) | Mode::Dhg(i) => i.order(),
            Mode::Lg(i) => i.order(),
        }
    }

    /// Amplitude at dimensionless coordinates, normalized over the dimensionless plane,
    /// without the Gouy factor.
    pub fn dimensionless(&self, za: f64, zb: f64) -> Complex64 {
        match *self {
            Mode::Hg(ModeIndex { n, m }) => {
                Complex64::new(hermite_function(n, za) * hermite_function(m, zb), 0.0)
            }
            Mode::Dhg(ModeIndex { n, m }) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let u = (za + zb) * s;
                let v = (za - zb) * s;
                Complex64::new(hermite_function(n, u) * hermite_function(m, v), 0.0)
            }
            Mode::Lg(LGIndex { p, l }) => {
                let al = l.unsigned_abs() as usize;
                let rho2 = za * za + zb * zb;
                // (-1)^p makes the closed form equal to the i^j-phased DHG sum
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                let norm = sign * (factorial(p) / (std::f64::consts::PI * factorial(p + al))).sqrt();
                // rho^|l| e^{i l theta} without atan2, so the core is exactly dark
                let helix = Complex64::new(za, l.signum() as f64 * zb).powu(al as u32);
                helix * (norm * laguerre_poly(p, al, rho2) * (-0.5 * rho2).exp())
            }
        }
    }
}

fn require_uniform_kind(axis_a: &Axis, axis_b: &Axis) -> Result<AxisKind> {
    if axis_a.kind != axis_b.kind {
        return Err(Error::RepresentationMismatch(format!(
            "axes are {:?} and {:?}; a single-beam mode needs one representation",
            axis_a.kind, axis_b.kind
        )));
    }
    Ok(axis_a.kind)
}

/// Evaluate a mode on any grid, including a non-local plane whose axes have
/// different kinds (one coordinate per photon). Each axis is mapped to the
/// dimensionless variable of its own kind.
pub fn nonlocal_field(mode: Mode, params: &BeamParams, axis_a: Axis, axis_b: Axis) -> Field2D {
    let sa = axis_a.kind.dimensionless_scale(params.waist);
    let sb = axis_b.kind.dimensionless_scale(params.waist);
    let amp = (sa * sb).sqrt();
    let gouy = params.gouy_factor(mode.order()) * amp;

    match mode {
        // separable: tabulate each axis once
        Mode::Hg(ModeIndex { n, m }) => {
            let ta: Vec<f64> = axis_a.coords().iter().map(|&a| hermite_function(n, sa * a)).collect();
            let tb: Vec<f64> = axis_b.coords().iter().map(|&b| hermite_function(m, sb * b)).collect();
            let values = ndarray::Array2::from_shape_fn((ta.len(), tb.len()), |(i, j)| gouy * (ta[i] * tb[j]));
            Field2D {
                axis_a,
                axis_b,
                values,
            }
        }
        _ => Field2D::from_fn(axis_a, axis_b, |a, b| gouy * mode.dimensionless(sa * a, sb * b)),
    }
}

/// Normalized `HG_nm` on a grid whose axes share one representation.
pub fn hg_field(idx: ModeIndex, params: &BeamParams, grid: (Axis, Axis)) -> Result<Field2D> {
    require_uniform_kind(&grid.0, &grid.1)?;
    Ok(nonlocal_field(Mode::Hg(idx), params, grid.0, grid.1))
}

/// Normalized `LG_p^l` from the closed Laguerre form with vortex phase `e^{i l theta}`,
/// signed by `(-1)^p` so it equals `sum_j i^j b_j HG_{N-j,j}`.
pub fn lg_field(idx: LGIndex, params: &BeamParams, grid: (Axis, Axis)) -> Result<Field2D> {
    require_uniform_kind(&grid.0, &grid.1)?;
    Ok(nonlocal_field(Mode::Lg(idx), params, grid.0, grid.1))
}

/// `HG_nm` evaluated at the 45-degree rotated coordinates `((a+b)/sqrt2, (a-b)/sqrt2)`.
pub fn dhg_field(idx: ModeIndex, params: &BeamParams, grid: (Axis, Axis)) -> Result<Field2D> {
    require_uniform_kind(&grid.0, &grid.1)?;
    Ok(nonlocal_field(Mode::Dhg(idx), params, grid.0, grid.1))
}

/// One-dimensional normalized HG amplitude `HG_n` on an axis, without Gouy factor.
pub fn hg_1d(n: usize, params: &BeamParams, axis: &Axis) -> Vec<f64> {
    let s = axis.kind.dimensionless_scale(params.waist);
    let amp = s.sqrt();
    axis.coords().iter().map(|&c| amp * hermite_function(n, s * c)).collect()
}

/// Table of `HG_0 ..= HG_max` along an axis; `out[k][i]` is order `k` at sample `i`.
pub(crate) fn hg_1d_table(max: usize, waist: f64, axis: &Axis) -> Vec<Vec<f64>> {
    let s = axis.kind.dimensionless_scale(waist);
    let amp = s.sqrt();
    let mut out = vec![Vec::with_capacity(axis.samples); max + 1];
    for c in axis.coords() {
        for (k, v) in hermite_functions(max, s * c).into_iter().enumerate() {
            out[k].push(amp * v);
        }
    }
    out
}
