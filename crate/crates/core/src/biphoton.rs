//! Two-photon amplitude from a structured pump, and the non-local mode converter.
//!
//! The wavevector amplitude is `Psi(q1, q2) = v(q1 + q2) gamma(q1 - q2)` with `v`
//! the pump angular spectrum and `gamma` the phase-matching function. With a
//! Gaussian-filtered `gamma` matched to the pump waist and an `HG_nm` pump it
//! factorizes per transverse dimension into `DHG_n0(q_x1, q_x2) DHG_m0(q_y1, q_y2)`
//! in the down-converted family (wavelength `2 lambda`, waist `sqrt(2) w0`).
//! Only the two 2D factors are stored.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{fourier_transform_axis, FieldAxis};
use crate::grid::{Axis, AxisKind, Field2D};
use crate::modes::{BeamParams, ModeIndex};
use crate::special::hermite_function;

/// Largest per-axis sample count accepted by the 4D cross-check.
pub const MAX_4D_SAMPLES: usize = 64;

/// Default sample count of the non-local plane axes.
pub const DEFAULT_BIPHOTON_SAMPLES: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMatching {
    ExactSinc,
    GaussianApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    pub mode: ModeIndex,
    pub wavelength: f64,
    pub waist: f64,
}

impl PumpSpec {
    pub fn new(mode: ModeIndex, wavelength: f64, waist: f64) -> Result<Self> {
        BeamParams::new(wavelength, waist)?;
        Ok(PumpSpec {
            mode,
            wavelength,
            waist,
        })
    }

    pub fn beam(&self) -> BeamParams {
        BeamParams {
            wavelength: self.wavelength,
            waist: self.waist,
            gouy_phase: 0.0,
        }
    }

    /// Family of the down-converted photons: `lambda_c = 2 lambda`, `w_c = sqrt(2) w0`.
    pub fn down_converted(&self) -> BeamParams {
        BeamParams {
            wavelength: 2.0 * self.wavelength,
            waist: SQRT_2 * self.waist,
            gouy_phase: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrystalSpec {
    pub length: f64,
    pub phase_matching: PhaseMatching,
}

impl CrystalSpec {
    pub fn new(length: f64, phase_matching: PhaseMatching) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid("length", format!("must be > 0, got {length}")));
        }
        Ok(CrystalSpec {
            length,
            phase_matching,
        })
    }

    /// `u = lambda L |q|^2 / (8 pi)` is `sinc_scale * |q|^2`.
    pub fn sinc_scale(&self, pump_wavelength: f64) -> f64 {
        pump_wavelength * self.length / (8.0 * PI)
    }
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Least-squares Gaussian `exp(-kappa u)` to `sinc(u)` over the half-maximum core
/// `sinc(u) >= 1/2`, weighted by `du` (the area element of the transverse
/// wavevector plane, since `u` is proportional to `|q|^2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SincGaussianFit {
    /// Decay constant in the sinc argument.
    pub kappa: f64,
    /// Upper end of the fitted core, `sinc(u_half) = 1/2`.
    pub u_half: f64,
}

impl SincGaussianFit {
    /// Width `sigma` of `exp(-sigma^2 |q|^2)` for a given crystal and pump, in meters.
    pub fn sigma(&self, crystal: &CrystalSpec, pump_wavelength: f64) -> f64 {
        (self.kappa * crystal.sinc_scale(pump_wavelength)).sqrt()
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// The crystal-independent fit; computed once.
pub fn sinc_gaussian_fit() -> SincGaussianFit {
    static FIT: OnceLock<SincGaussianFit> = OnceLock::new();
    *FIT.get_or_init(|| {
        // sinc is monotone on (0, pi): bisect for the half-maximum point
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if sinc(mid) > 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u_half = 0.5 * (lo + hi);
        let cost = |k: f64| simpson(|u| ((-k * u).exp() - sinc(u)).powi(2), 0.0, u_half, 2000);
        // golden-section search; the cost is unimodal in kappa
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (1e-3, 3.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (cost(c), cost(d));
        while b - a > 1e-12 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = cost(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = cost(d);
            }
        }
        SincGaussianFit {
            kappa: 0.5 * (a + b),
            u_half,
        }
    })
}

/// Phase-matching function `gamma(q)` at a transverse wavevector.
///
/// `ExactSinc` gives `sin(u)/u`, `u = lambda L |q|^2 / (8 pi)`;
/// `GaussianApprox` gives the fitted `exp(-sigma^2 |q|^2)`.
pub fn phase_matching(q: [f64; 2], crystal: &CrystalSpec, pump_wavelength: f64) -> Complex64 {
    let u = crystal.sinc_scale(pump_wavelength) * (q[0] * q[0] + q[1] * q[1]);
    let v = match crystal.phase_matching {
        PhaseMatching::ExactSinc => sinc(u),
        PhaseMatching::GaussianApprox => (-sinc_gaussian_fit().kappa * u).exp(),
    };
    Complex64::new(v, 0.0)
}

/// Which non-local plane: `(q_x1, x_2)` or `(q_y1, y_2)` (before conversion,
/// `(q_x1, q_x2)` or `(q_y1, q_y2)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    X,
    Y,
}

impl Plane {
    pub fn name(self) -> &'static str {
        match self {
            Plane::X => "x",
            Plane::Y => "y",
        }
    }
}

/// Wavevector axes for the x and y dimensions, shared by both photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiphotonGrids {
    pub x: Axis,
    pub y: Axis,
}

impl BiphotonGrids {
    /// Self-conjugate wavevector axes for the down-converted family, so the
    /// converted position axis has the same dimensionless resolution.
    pub fn for_pump(pump: &PumpSpec, samples: usize) -> Result<Self> {
        let ax = Axis::self_conjugate(AxisKind::Wavevector, samples, pump.down_converted().waist)?;
        Ok(BiphotonGrids { x: ax, y: ax })
    }

    /// Symmetric wavevector axes covering `+-waists` down-converted q-waists.
    pub fn spanning(pump: &PumpSpec, samples: usize, waists: f64) -> Result<Self> {
        let ax = Axis::spanning_waists(AxisKind::Wavevector, samples, pump.down_converted().waist, waists)?;
        Ok(BiphotonGrids { x: ax, y: ax })
    }

    fn validate(&self) -> Result<()> {
        for ax in [&self.x, &self.y] {
            if ax.kind != AxisKind::Wavevector {
                return Err(Error::RepresentationMismatch(
                    "biphoton amplitude is built in wavevector space".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Two-photon amplitude stored as its two non-local-plane factors.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonState {
    pub factor_x: Field2D,
    pub factor_y: Field2D,
    pub converted: bool,
    pub down_params: BeamParams,
    pub pump: PumpSpec,
    pub crystal: CrystalSpec,
    /// Width of the sinc-fitted Gaussian for this crystal (meters), reported
    /// for reference; the filtered phase matching is matched to the pump waist.
    pub phase_matching_sigma: f64,
}

impl BiphotonState {
    pub fn factor(&self, plane: Plane) -> &Field2D {
        match plane {
            Plane::X => &self.factor_x,
            Plane::Y => &self.factor_y,
        }
    }

    /// Pump order carried by the plane (`n` for x, `m` for y).
    pub fn plane_order(&self, plane: Plane) -> usize {
        match plane {
            Plane::X => self.pump.mode.n,
            Plane::Y => self.pump.mode.m,
        }
    }

    /// One waist of the down-converted family, measured on each axis of a plane.
    pub fn waist_units(&self, plane: Plane) -> (f64, f64) {
        let f = self.factor(plane);
        let w = self.down_params.waist;
        (f.axis_a.kind.waist_unit(w), f.axis_b.kind.waist_unit(w))
    }
}

/// One-dimensional wavevector HG of the down-converted family.
fn hg_q(n: usize, q: f64, waist: f64) -> f64 {
    let s = waist * FRAC_1_SQRT_2;
    s.sqrt() * hermite_function(n, s * q)
}

/// `HG_n((q1+q2)/sqrt2) HG_0((q1-q2)/sqrt2)`: pump order in the sum
/// coordinate, filtered phase matching in the difference coordinate.
fn factor_plane(order: usize, axis: Axis, waist: f64) -> Field2D {
    Field2D::from_fn(axis, axis, |q1, q2| {
        let sum = (q1 + q2) * FRAC_1_SQRT_2;
        let diff = (q1 - q2) * FRAC_1_SQRT_2;
        Complex64::new(hg_q(order, sum, waist) * hg_q(0, diff, waist), 0.0)
    })
}

/// Build the factorized two-photon amplitude. Requires the Gaussian
/// phase-matching approximation; the sinc form does not factorize.
pub fn build_state(pump: &PumpSpec, crystal: &CrystalSpec, grids: &BiphotonGrids) -> Result<BiphotonState> {
    if crystal.phase_matching == PhaseMatching::ExactSinc {
        return Err(Error::UnsupportedCombination(
            "exact sinc phase matching cannot be stored as 2D factors; use gaussian_approx \
             or the 4D cross-check"
                .into(),
        ));
    }
    grids.validate()?;
    let down = pump.down_converted();
    Ok(BiphotonState {
        factor_x: factor_plane(pump.mode.n, grids.x, down.waist),
        factor_y: factor_plane(pump.mode.m, grids.y, down.waist),
        converted: false,
        down_params: down,
        pump: *pump,
        crystal: *crystal,
        phase_matching_sigma: sinc_gaussian_fit().sigma(crystal, pump.wavelength),
    })
}

/// Fourier transform on photon 2 in both dimensions (axis `b` of each factor),
/// turning `DHG_n0(q_x1, q_x2)` into `LG^n_0(q_x1, x_2)`.
pub fn apply_nonlocal_converter(state: &BiphotonState) -> Result<BiphotonState> {
    if state.converted {
        return Err(Error::State("mode converter already applied".into()));
    }
    Ok(BiphotonState {
        factor_x: fourier_transform_axis(&state.factor_x, FieldAxis::B),
        factor_y: fourier_transform_axis(&state.factor_y, FieldAxis::B),
        converted: true,
        ..state.clone()
    })
}

/// Coincidence distribution `|factor|^2` on a plane, normalized to unit sum.
pub fn coincidence_map(state: &BiphotonState, plane: Plane) -> Field2D {
    let f = state.factor(plane);
    let total: f64 = f.values.iter().map(|v| v.norm_sqr()).sum();
    f.map(|v| Complex64::new(v.norm_sqr() / total, 0.0))
}

/// Outcome of the direct 4D evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crosscheck {
    /// Max `|Psi_direct - factor_x factor_y|` relative to the peak of `Psi_direct`.
    pub residual: f64,
    /// For an exact-sinc crystal: `|<Psi_sinc, Psi_factorized>|` with both normalized.
    pub sinc_overlap: Option<f64>,
}

/// Evaluate `Psi(q1, q2) = v(q1 + q2) gamma(q1 - q2)` on the full 4D grid and
/// compare with the tensor product of the factorized state.
///
/// `v` is the pump `HG_nm` at the pump wavelength and waist, `gamma` the
/// filtered Gaussian `HG_00` at the pump waist. The continuum normalization of
/// that product is `1/2` per dimension, so the direct amplitude is scaled by 2.
pub fn full_4d_crosscheck(pump: &PumpSpec, crystal: &CrystalSpec, grids: &BiphotonGrids) -> Result<Crosscheck> {
    for ax in [&grids.x, &grids.y] {
        if ax.samples > MAX_4D_SAMPLES {
            return Err(Error::Resource(format!(
                "4D cross-check limited to {MAX_4D_SAMPLES} samples per axis, got {}",
                ax.samples
            )));
        }
    }
    let factorized = build_state(
        pump,
        &CrystalSpec {
            phase_matching: PhaseMatching::GaussianApprox,
            ..*crystal
        },
        grids,
    )?;

    let qx = grids.x.coords();
    let qy = grids.y.coords();
    let s0 = pump.waist * FRAC_1_SQRT_2;
    let amp = s0; // sqrt(s0) per dimension, two dimensions
    let (n, m) = (pump.mode.n, pump.mode.m);
    let pump_hg = |sx: f64, sy: f64| amp * hermite_function(n, s0 * sx) * hermite_function(m, s0 * sy);
    let filtered = |dx: f64, dy: f64| amp * hermite_function(0, s0 * dx) * hermite_function(0, s0 * dy);
    let sinc_crystal = crystal.phase_matching == PhaseMatching::ExactSinc;

    #[derive(Default, Clone, Copy)]
    struct Acc {
        max_dev: f64,
        peak: f64,
        overlap: Complex64,
        sinc_norm: f64,
        fact_norm: f64,
    }

    let fx = &factorized.factor_x.values;
    let fy = &factorized.factor_y.values;
    let acc = (0..qx.len())
        .into_par_iter()
        .map(|i1| {
            let mut acc = Acc::default();
            for (j1, &qy1) in qy.iter().enumerate() {
                for (i2, &qx2) in qx.iter().enumerate() {
                    for (j2, &qy2) in qy.iter().enumerate() {
                        let qx1 = qx[i1];
                        let v = pump_hg(qx1 + qx2, qy1 + qy2);
                        let direct = 2.0 * v * filtered(qx1 - qx2, qy1 - qy2);
                        let product = fx[[i1, i2]] * fy[[j1, j2]];
                        acc.max_dev = acc.max_dev.max((product - direct).norm());
                        acc.peak = acc.peak.max(direct.abs());
                        if sinc_crystal {
                            let g = phase_matching([qx1 - qx2, qy1 - qy2], crystal, pump.wavelength).re;
                            let psi = v * g;
                            acc.overlap += product * psi;
                            acc.sinc_norm += psi * psi;
                            acc.fact_norm += product.norm_sqr();
                        }
                    }
                }
            }
            acc
        })
        .reduce(Acc::default, |a, b| Acc {
            max_dev: a.max_dev.max(b.max_dev),
            peak: a.peak.max(b.peak),
            overlap: a.overlap + b.overlap,
            sinc_norm: a.sinc_norm + b.sinc_norm,
            fact_norm: a.fact_norm + b.fact_norm,
        });

    Ok(Crosscheck {
        residual: acc.max_dev / acc.peak,
        sinc_overlap: sinc_crystal.then(|| acc.overlap.norm() / (acc.sinc_norm * acc.fact_norm).sqrt()),
    })
}
