//! Named numerical checks and the built-in self-check suite.

use std::fmt;

use num_complex::Complex64;

use crate::algebra::{b_coeff, decompose, i_pow};
use crate::biphoton::{
    apply_nonlocal_converter, build_state, full_4d_crosscheck, BiphotonGrids, CrystalSpec, PhaseMatching, Plane,
    PumpSpec,
};
use crate::fourier::fourier_transform_1d;
use crate::grid::{Axis, AxisKind};
use crate::modes::{dhg_field, hg_1d, nonlocal_field, BeamParams, LGIndex, Mode, ModeIndex};
use crate::vortex::{double_slit_fringes, fringe_shift, phase_distance, winding_number, ScanRange, SlitSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Error text when the check could not be evaluated.
    pub detail: String,
}

impl CheckResult {
    /// Passes when `value < tolerance`; NaN fails.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            value,
            tolerance,
            passed: value < tolerance,
            detail: String::new(),
        }
    }

    /// Passes on exact equality; `value` holds the difference.
    pub fn equal(name: impl Into<String>, got: i64, want: i64) -> Self {
        CheckResult {
            name: name.into(),
            value: (got - want) as f64,
            tolerance: 0.0,
            passed: got == want,
            detail: String::new(),
        }
    }

    pub fn failed(name: impl Into<String>, reason: &str) -> Self {
        CheckResult {
            name: name.into(),
            value: f64::NAN,
            tolerance: 0.0,
            passed: false,
            detail: reason.to_string(),
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} value={:.6e} tolerance={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tolerance
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

pub fn all_passed(checks: &[CheckResult]) -> bool {
    checks.iter().all(|c| c.passed)
}

fn or_fail(name: &str, r: crate::Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult::failed(name, &e.to_string()))
}

fn orthonormality(params: &BeamParams, axis: &Axis, max_order: usize) -> f64 {
    let rows: Vec<Vec<f64>> = (0..=max_order).map(|n| hg_1d(n, params, axis)).collect();
    let dx = axis.spacing();
    let mut worst = 0.0f64;
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            let g: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * dx;
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - want).abs());
        }
    }
    worst
}

fn dhg_decomposition_error(params: &BeamParams, grid: (Axis, Axis), max_order: usize) -> crate::Result<f64> {
    let mut worst = 0.0f64;
    for idx in ModeIndex::up_to_order(max_order) {
        let f = dhg_field(idx, params, grid)?;
        let dec = decompose(&f, params, idx.order() as i64)?;
        let order = idx.order();
        for j in 0..=order {
            let got = dec.get(order - j, j);
            worst = worst.max((got - Complex64::from(b_coeff(idx.n, idx.m, j)?)).norm());
        }
    }
    Ok(worst)
}

fn fourier_eigen_error(params: &BeamParams, axis: &Axis, max_order: usize) -> crate::Result<f64> {
    let mut worst = 0.0f64;
    for n in 0..=max_order {
        let v: Vec<Complex64> = hg_1d(n, params, axis).into_iter().map(Complex64::from).collect();
        let (q, out) = fourier_transform_1d(axis, &v)?;
        let want = hg_1d(n, params, &q);
        let peak = want.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for (o, w) in out.iter().zip(&want) {
            worst = worst.max((o - i_pow(n) * w).norm() / peak);
        }
    }
    Ok(worst)
}

/// Fast suite covering every module; each entry is independent.
pub fn run_self_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let params = BeamParams::new(800e-9, 1e-3).unwrap();
    let ax = Axis::spanning_waists(AxisKind::Position, 257, params.waist, 8.0).unwrap();
    out.push(CheckResult::below("hg_orthonormality_order6", orthonormality(&params, &ax, 6), 1e-6));

    let grid = (ax, ax);
    out.push(or_fail(
        "dhg_decomposition_order4",
        dhg_decomposition_error(&params, grid, 4).map(|e| CheckResult::below("dhg_decomposition_order4", e, 1e-6)),
    ));

    let sc = Axis::self_conjugate(AxisKind::Position, 257, params.waist).unwrap();
    out.push(or_fail(
        "fourier_eigenvalue_order6",
        fourier_eigen_error(&params, &sc, 6).map(|e| CheckResult::below("fourier_eigenvalue_order6", e, 1e-6)),
    ));

    let crystal = CrystalSpec::new(5e-3, PhaseMatching::GaussianApprox).unwrap();
    for (n, m) in [(0, 0), (1, 0), (2, 1)] {
        let name = format!("crosscheck_4d_pump_{n}{m}");
        let r = PumpSpec::new(ModeIndex::new(n, m), 405e-9, 1e-3).and_then(|pump| {
            let grids = BiphotonGrids::for_pump(&pump, 24)?;
            full_4d_crosscheck(&pump, &crystal, &grids)
        });
        out.push(or_fail(&name, r.map(|c| CheckResult::below(name.clone(), c.residual, 1e-6))));
    }

    for (n, m) in [(1, 0), (2, 2), (3, 1)] {
        let name = format!("converted_matches_lg_pump_{n}{m}");
        let r = (|| {
            let pump = PumpSpec::new(ModeIndex::new(n, m), 405e-9, 1e-3)?;
            let grids = BiphotonGrids::for_pump(&pump, 129)?;
            let conv = apply_nonlocal_converter(&build_state(&pump, &crystal, &grids)?)?;
            let mut worst = 0.0f64;
            for plane in [Plane::X, Plane::Y] {
                let f = conv.factor(plane);
                let lg = nonlocal_field(
                    Mode::Lg(LGIndex::new(0, conv.plane_order(plane) as i64)),
                    &conv.down_params,
                    f.axis_a,
                    f.axis_b,
                );
                worst = worst.max(f.deviation_up_to_global_phase(&lg)?);
            }
            Ok(CheckResult::below(name.clone(), worst, 1e-6))
        })();
        out.push(or_fail(&name, r));
    }

    for l in [-3i64, 1, 2] {
        let name = format!("winding_lg_l{l}");
        let r = crate::modes::lg_field(LGIndex::new(0, l), &params, params.default_grid(AxisKind::Position))
            .and_then(|f| winding_number(&f, params.waist))
            .map(|w| CheckResult::equal(name.clone(), w.charge, l));
        out.push(or_fail(&name, r));
    }

    for n in 0..=3usize {
        let name = format!("fringe_shift_pump_{n}0");
        let r = (|| {
            let pump = PumpSpec::new(ModeIndex::new(n, 0), 405e-9, 1e-3)?;
            let grids = BiphotonGrids::for_pump(&pump, 129)?;
            let conv = apply_nonlocal_converter(&build_state(&pump, &crystal, &grids)?)?;
            let slits = SlitSpec::default();
            let x2 = slits.default_detector2_offset();
            let scan = ScanRange::default();
            let plus = double_slit_fringes(&conv, &slits, x2, &scan)?;
            let minus = double_slit_fringes(&conv, &slits, -x2, &scan)?;
            let shift = fringe_shift(&plus, &minus)?;
            Ok(CheckResult::below(
                name.clone(),
                phase_distance(shift, n as f64 * std::f64::consts::PI),
                0.05,
            ))
        })();
        out.push(or_fail(&name, r));
    }
    out
}
