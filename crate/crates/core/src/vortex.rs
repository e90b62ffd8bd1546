//! Vortex witnesses: winding number, azimuthal intensity profile, and the
//! coincidence double-slit experiment.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::biphoton::{BiphotonState, Plane};
use crate::error::{Error, Result};
use crate::grid::Field2D;

/// Loop amplitude below this fraction of the field peak makes the winding undefined.
pub const WINDING_AMPLITUDE_FLOOR: f64 = 1e-6;
/// Largest accepted distance of the accumulated phase from an integer number of turns.
pub const WINDING_MAX_RESIDUAL: f64 = 0.05;
/// Minimum fringe visibility for a phase fit.
pub const MIN_VISIBILITY: f64 = 0.1;

/// Winding number with the rounding residual that was accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingReport {
    pub charge: i64,
    pub turns: f64,
    pub residual: f64,
}

/// Closed elliptical loop, traversed counter-clockwise in the `(a, b)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Loop {
    pub center: (f64, f64),
    pub semi_axes: (f64, f64),
    pub samples: usize,
}

impl Loop {
    pub fn circle(radius: f64) -> Loop {
        Loop {
            center: (0.0, 0.0),
            semi_axes: (radius, radius),
            samples: 1024,
        }
    }
}

/// Topological charge enclosed by a circle of physical `radius` about the origin.
/// Both axes must share a kind; use [`winding_number_on`] for non-local planes.
pub fn winding_number(field: &Field2D, radius: f64) -> Result<WindingReport> {
    if field.axis_a.kind != field.axis_b.kind {
        return Err(Error::RepresentationMismatch(
            "a circle needs axes of one kind; pass an elliptical loop instead".into(),
        ));
    }
    winding_number_on(field, &Loop::circle(radius))
}

pub fn winding_number_on(field: &Field2D, lp: &Loop) -> Result<WindingReport> {
    if lp.samples < 8 {
        return Err(Error::invalid("samples", "loop needs at least 8 points"));
    }
    let (ra, rb) = lp.semi_axes;
    if !(ra > 0.0 && rb > 0.0) {
        return Err(Error::invalid("radius", "must be > 0"));
    }
    let points: Vec<Complex64> = (0..lp.samples)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / lp.samples as f64;
            field.interpolate(lp.center.0 + ra * t.cos(), lp.center.1 + rb * t.sin())
        })
        .collect::<Result<_>>()?;

    let peak = field.peak_abs();
    let min_amp = points.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if !(min_amp > WINDING_AMPLITUDE_FLOOR * peak) {
        return Err(Error::UndefinedWinding {
            min_amplitude: min_amp / peak,
            threshold: WINDING_AMPLITUDE_FLOOR,
        });
    }

    let total: f64 = (0..lp.samples)
        .map(|k| (points[(k + 1) % lp.samples] / points[k]).arg())
        .sum();
    let turns = total / (2.0 * PI);
    let charge = turns.round();
    let residual = (turns - charge).abs();
    if residual >= WINDING_MAX_RESIDUAL {
        return Err(Error::AmbiguousWinding { turns });
    }
    Ok(WindingReport {
        charge: charge as i64,
        turns,
        residual,
    })
}

/// One annulus of an azimuthally averaged profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBin {
    /// Bin center.
    pub radius: f64,
    pub mean: f64,
    pub samples: usize,
}

/// Azimuthal average of an intensity field (real part) about the origin, in
/// physical radius. Bins cover the largest circle inside the grid.
pub fn radial_profile(intensity: &Field2D, n_bins: usize) -> Result<Vec<RadialBin>> {
    if intensity.axis_a.kind != intensity.axis_b.kind {
        return Err(Error::RepresentationMismatch(
            "physical radius needs axes of one kind; use radial_profile_scaled".into(),
        ));
    }
    radial_profile_scaled(intensity, n_bins, (1.0, 1.0))
}

/// Azimuthal average with radius `sqrt((a/unit_a)^2 + (b/unit_b)^2)`.
pub fn radial_profile_scaled(intensity: &Field2D, n_bins: usize, units: (f64, f64)) -> Result<Vec<RadialBin>> {
    if n_bins < 4 {
        return Err(Error::invalid("n_bins", format!("need at least 4, got {n_bins}")));
    }
    let (ua, ub) = units;
    let ax = &intensity.axis_a;
    let bx = &intensity.axis_b;
    let r_max = (ax.min.abs().min(ax.max) / ua).min(bx.min.abs().min(bx.max) / ub);
    if !(r_max > 0.0) {
        return Err(Error::Grid("origin is not inside the grid".into()));
    }
    let width = r_max / n_bins as f64;
    let mut sums = vec![0.0; n_bins];
    let mut counts = vec![0usize; n_bins];
    let b_coords = bx.coords();
    for (i, row) in intensity.values.outer_iter().enumerate() {
        let a = ax.coord(i) / ua;
        for (v, &b) in row.iter().zip(&b_coords) {
            let r = (a * a + (b / ub).powi(2)).sqrt();
            let k = (r / width) as usize;
            if k < n_bins {
                sums[k] += v.re;
                counts[k] += 1;
            }
        }
    }
    Ok((0..n_bins)
        .map(|k| RadialBin {
            radius: (k as f64 + 0.5) * width,
            mean: if counts[k] > 0 { sums[k] / counts[k] as f64 } else { 0.0 },
            samples: counts[k],
        })
        .collect())
}

/// Double slit in the path of photon 1. Lengths are in units of the
/// down-converted beam waist as measured on the photon-1 axis of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlitSpec {
    pub separation: f64,
    pub width: f64,
    pub orientation: Plane,
}

impl SlitSpec {
    pub fn new(separation: f64, width: f64, orientation: Plane) -> Result<Self> {
        if !(width > 0.0 && separation > width) {
            return Err(Error::invalid(
                "slits",
                format!("need separation > width > 0, got {separation} and {width}"),
            ));
        }
        Ok(SlitSpec {
            separation,
            width,
            orientation,
        })
    }

    /// Detector-2 offset at which the two slit centers and the two detector
    /// positions `+-x2` form a square about the vortex core.
    pub fn default_detector2_offset(&self) -> f64 {
        0.5 * self.separation
    }
}

impl Default for SlitSpec {
    fn default() -> Self {
        SlitSpec {
            separation: 1.0,
            width: 0.2,
            orientation: Plane::X,
        }
    }
}

/// Far-field scan coordinate of detector 1, in inverse waist units (so that
/// the two-slit phase is `k * separation`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRange {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl Default for ScanRange {
    fn default() -> Self {
        ScanRange {
            min: -15.0,
            max: 15.0,
            samples: 601,
        }
    }
}

impl ScanRange {
    pub fn positions(&self) -> Result<Vec<f64>> {
        if self.samples < 8 || !(self.max > self.min) {
            return Err(Error::invalid("scan", "need max > min and at least 8 samples"));
        }
        let step = (self.max - self.min) / (self.samples - 1) as f64;
        Ok((0..self.samples).map(|i| self.min + step * i as f64).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    pub positions: Vec<f64>,
    pub counts: Vec<f64>,
    /// Detector-2 coordinate, in waist units of the photon-2 axis.
    pub detector2_position: f64,
    pub slits: SlitSpec,
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Single-slit Fraunhofer envelope (intensity), unit at `k = 0`.
pub fn slit_envelope(k: f64, width: f64) -> f64 {
    sinc(0.5 * k * width).powi(2)
}

/// Coincidence fringes behind a double slit on photon 1 with detector 2 fixed.
///
/// The photon-1 amplitude conditioned on detector 2 is the plane factor at
/// the fixed photon-2 coordinate; each slit transmits its value at the slit
/// center. Far field: `I(k) = w^2 sinc^2(k w / 2) |A+ e^{-ikd/2} + A- e^{ikd/2}|^2`,
/// normalized by the squared peak of the factor.
pub fn double_slit_fringes(
    state: &BiphotonState,
    slits: &SlitSpec,
    detector2_position: f64,
    scan: &ScanRange,
) -> Result<FringeScan> {
    let plane = slits.orientation;
    let field = state.factor(plane);
    let (ua, ub) = state.waist_units(plane);
    let x2 = detector2_position * ub;
    let half = 0.5 * slits.separation * ua;
    let plus = field.interpolate(half, x2)?;
    let minus = field.interpolate(-half, x2)?;
    let peak = field.peak_abs();
    if plus.norm().max(minus.norm()) < 1e-6 * peak {
        return Err(Error::NoSignal {
            position: detector2_position,
        });
    }
    let (plus, minus) = (plus / peak, minus / peak);
    let positions = scan.positions()?;
    let d = slits.separation;
    let w = slits.width;
    let counts = positions
        .iter()
        .map(|&k| {
            let e = plus * Complex64::from_polar(1.0, -0.5 * k * d) + minus * Complex64::from_polar(1.0, 0.5 * k * d);
            w * w * slit_envelope(k, w) * e.norm_sqr()
        })
        .collect();
    Ok(FringeScan {
        positions,
        counts,
        detector2_position,
        slits: *slits,
    })
}

/// Result of fitting `envelope(k) * C * (1 + V cos(k d + phase))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeFit {
    pub phase: f64,
    pub visibility: f64,
    pub scale: f64,
}

/// Linear least squares on `envelope * (c0 + c1 cos(kd) + c2 sin(kd))`, with the
/// envelope and fringe frequency fixed by the scan's slit geometry.
pub fn fit_fringes(scan: &FringeScan) -> Result<FringeFit> {
    if scan.positions.len() != scan.counts.len() || scan.positions.len() < 3 {
        return Err(Error::invalid("scan", "positions and counts must match, at least 3 samples"));
    }
    let d = scan.slits.separation;
    let w = scan.slits.width;
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for (&k, &c) in scan.positions.iter().zip(&scan.counts) {
        let env = slit_envelope(k, w);
        let basis = [env, env * (k * d).cos(), env * (k * d).sin()];
        for r in 0..3 {
            atb[r] += basis[r] * c;
            for s in 0..3 {
                ata[r][s] += basis[r] * basis[s];
            }
        }
    }
    let [c0, c1, c2] = solve3(ata, atb).ok_or_else(|| Error::invalid("scan", "fringe fit is singular"))?;
    let visibility = if c0 > 0.0 { (c1 * c1 + c2 * c2).sqrt() / c0 } else { 0.0 };
    if visibility < MIN_VISIBILITY {
        return Err(Error::LowVisibility { visibility });
    }
    Ok(FringeFit {
        phase: (-c2).atan2(c1),
        visibility,
        scale: c0,
    })
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Wrap an angle to `(-pi, pi]`.
pub fn wrap_phase(phi: f64) -> f64 {
    PI - (PI - phi).rem_euclid(2.0 * PI)
}

/// Relative fringe phase `phase_a - phase_b`, wrapped to `(-pi, pi]`.
pub fn fringe_shift(scan_a: &FringeScan, scan_b: &FringeScan) -> Result<f64> {
    let same_axis = scan_a.positions.len() == scan_b.positions.len()
        && scan_a
            .positions
            .iter()
            .zip(&scan_b.positions)
            .all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(1.0));
    if !same_axis {
        return Err(Error::Grid("fringe scans use different detector-1 positions".into()));
    }
    let a = fit_fringes(scan_a)?;
    let b = fit_fringes(scan_b)?;
    Ok(wrap_phase(a.phase - b.phase))
}

/// Distance between two phases on the circle.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}
