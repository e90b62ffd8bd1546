//! Uniform sampling axes and complex fields sampled on them.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical meaning of an axis coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    /// Transverse position, meters.
    Position,
    /// Transverse wavevector, 1/m.
    Wavevector,
}

impl AxisKind {
    pub fn conjugate(self) -> AxisKind {
        match self {
            AxisKind::Position => AxisKind::Wavevector,
            AxisKind::Wavevector => AxisKind::Position,
        }
    }

    /// Factor mapping a physical coordinate onto the dimensionless variable of
    /// a mode family with the given waist.
    ///
    /// Position `x` maps to `sqrt(2) x / w`; wavevector `q` maps to `w q / sqrt(2)`.
    /// With these choices `q * x` equals the product of the dimensionless
    /// variables, which is what makes the Hermite-Gaussian family
    /// self-conjugate under the Fourier transform.
    pub fn dimensionless_scale(self, waist: f64) -> f64 {
        match self {
            AxisKind::Position => std::f64::consts::SQRT_2 / waist,
            AxisKind::Wavevector => waist / std::f64::consts::SQRT_2,
        }
    }

    /// The length on this axis corresponding to one beam waist (`w` for
    /// position, `2 / w` for wavevector).
    pub fn waist_unit(self, waist: f64) -> f64 {
        std::f64::consts::SQRT_2 / self.dimensionless_scale(waist)
    }
}

/// Uniformly sampled axis including both end points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub kind: AxisKind,
    pub samples: usize,
    pub min: f64,
    pub max: f64,
}

impl Axis {
    pub fn new(kind: AxisKind, samples: usize, min: f64, max: f64) -> Result<Self> {
        if samples < 2 {
            return Err(Error::Grid(format!("axis needs at least 2 samples, got {samples}")));
        }
        if !(min.is_finite() && max.is_finite()) || max <= min {
            return Err(Error::Grid(format!("axis range [{min}, {max}] is empty or not finite")));
        }
        Ok(Axis {
            kind,
            samples,
            min,
            max,
        })
    }

    /// Axis symmetric about zero, `[-half_span, half_span]`.
    pub fn centered(kind: AxisKind, samples: usize, half_span: f64) -> Result<Self> {
        Axis::new(kind, samples, -half_span, half_span)
    }

    /// Symmetric axis covering `-waists ..= waists` beam waists of a family with `waist`.
    pub fn spanning_waists(kind: AxisKind, samples: usize, waist: f64, waists: f64) -> Result<Self> {
        Axis::centered(kind, samples, waists * kind.waist_unit(waist))
    }

    /// Symmetric axis whose conjugate (see [`Axis::conjugate`]) has the same
    /// dimensionless spacing, for a mode family with the given waist.
    pub fn self_conjugate(kind: AxisKind, samples: usize, waist: f64) -> Result<Self> {
        let step = (2.0 * std::f64::consts::PI / samples as f64).sqrt();
        let half = 0.5 * (samples - 1) as f64 * step / kind.dimensionless_scale(waist);
        Axis::centered(kind, samples, half)
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.samples - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        // written about the midpoint so that symmetric axes are exactly antisymmetric
        let last = (self.samples - 1) as f64;
        let t = (2.0 * i as f64 - last) / last;
        0.5 * (self.min + self.max) + 0.5 * (self.max - self.min) * t
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.samples).map(|i| self.coord(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }

    /// The axis produced by a discrete Fourier transform of this one: the
    /// conjugate kind, the same sample count, spacing `2 pi / (N dx)`, and
    /// placed symmetrically about zero.
    pub fn conjugate(&self) -> Axis {
        let n = self.samples as f64;
        let step = 2.0 * std::f64::consts::PI / (n * self.spacing());
        let half = 0.5 * (n - 1.0) * step;
        Axis {
            kind: self.kind.conjugate(),
            samples: self.samples,
            min: -half,
            max: half,
        }
    }

    /// True when the two axes describe the same sample points.
    pub fn same_as(&self, other: &Axis) -> bool {
        let tol = 1e-12 * (self.max - self.min).abs();
        self.kind == other.kind
            && self.samples == other.samples
            && (self.min - other.min).abs() <= tol
            && (self.max - other.max).abs() <= tol
    }
}

/// Complex amplitude sampled on a rectangular grid. Index `[i, j]` is the
/// sample at `(axis_a.coord(i), axis_b.coord(j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    pub axis_a: Axis,
    pub axis_b: Axis,
    pub values: Array2<Complex64>,
}

impl Field2D {
    pub fn new(axis_a: Axis, axis_b: Axis, values: Array2<Complex64>) -> Result<Self> {
        if values.dim() != (axis_a.samples, axis_b.samples) {
            return Err(Error::Grid(format!(
                "values have shape {:?}, axes need ({}, {})",
                values.dim(),
                axis_a.samples,
                axis_b.samples
            )));
        }
        Ok(Field2D {
            axis_a,
            axis_b,
            values,
        })
    }

    pub fn from_fn(axis_a: Axis, axis_b: Axis, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let a = axis_a.coords();
        let b = axis_b.coords();
        let values = Array2::from_shape_fn((a.len(), b.len()), |(i, j)| f(a[i], b[j]));
        Field2D {
            axis_a,
            axis_b,
            values,
        }
    }

    pub fn same_grid(&self, other: &Field2D) -> bool {
        self.axis_a.same_as(&other.axis_a) && self.axis_b.same_as(&other.axis_b)
    }

    fn require_same_grid(&self, other: &Field2D) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::Grid("fields are sampled on different grids".into()))
        }
    }

    pub fn cell_area(&self) -> f64 {
        self.axis_a.spacing() * self.axis_b.spacing()
    }

    /// Discrete squared L2 norm, `sum |v|^2 da db`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_area()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self, other> = sum conj(self) other da db`.
    pub fn inner(&self, other: &Field2D) -> Result<Complex64> {
        self.require_same_grid(other)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(u, v)| u.conj() * v)
            .sum();
        Ok(s * self.cell_area())
    }

    pub fn peak_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `|v|^2` stored in the real part.
    pub fn intensity(&self) -> Field2D {
        self.map(|v| Complex64::new(v.norm_sqr(), 0.0))
    }

    pub fn conj(&self) -> Field2D {
        self.map(|v| v.conj())
    }

    pub fn scaled(&self, factor: Complex64) -> Field2D {
        self.map(|v| v * factor)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field2D {
        Field2D {
            axis_a: self.axis_a,
            axis_b: self.axis_b,
            values: self.values.mapv(f),
        }
    }

    /// Largest pointwise `|self - other|`.
    pub fn max_abs_diff(&self, other: &Field2D) -> Result<f64> {
        self.require_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max))
    }

    /// Largest pointwise deviation from `reference` after multiplying the
    /// reference by the unit phase that best aligns it with `self`, relative
    /// to the reference peak.
    pub fn deviation_up_to_global_phase(&self, reference: &Field2D) -> Result<f64> {
        let overlap = reference.inner(self)?;
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let aligned = reference.scaled(phase);
        Ok(self.max_abs_diff(&aligned)? / reference.peak_abs())
    }

    /// Bicubic (Catmull-Rom) interpolation at physical coordinates `(a, b)`.
    pub fn interpolate(&self, a: f64, b: f64) -> Result<Complex64> {
        if !self.axis_a.contains(a) || !self.axis_b.contains(b) {
            return Err(Error::Grid(format!("point ({a}, {b}) lies outside the grid")));
        }
        let (ia, ta) = locate(&self.axis_a, a);
        let (ib, tb) = locate(&self.axis_b, b);
        let wa = catmull_rom_weights(ta);
        let wb = catmull_rom_weights(tb);
        let na = self.axis_a.samples as isize;
        let nb = self.axis_b.samples as isize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (da, wa) in (-1..=2).zip(wa) {
            let i = (ia as isize + da).clamp(0, na - 1) as usize;
            for (db, wb) in (-1..=2).zip(wb) {
                let j = (ib as isize + db).clamp(0, nb - 1) as usize;
                acc += self.values[[i, j]] * (wa * wb);
            }
        }
        Ok(acc)
    }
}

fn locate(axis: &Axis, x: f64) -> (usize, f64) {
    let u = (x - axis.min) / axis.spacing();
    let i = (u.floor() as usize).min(axis.samples - 2);
    (i, u - i as f64)
}

fn catmull_rom_weights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}
