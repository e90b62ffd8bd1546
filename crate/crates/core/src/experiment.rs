//! End-to-end run: build the two-photon state, convert it, and write maps,
//! fringe scans and a key-value summary to the output directory.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::biphoton::{
    apply_nonlocal_converter, build_state, coincidence_map, full_4d_crosscheck, BiphotonGrids, BiphotonState, Plane,
};
use crate::checks::{all_passed, CheckResult};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::export::{export_field, write_field_csv, write_intensity_pgm};
use crate::vortex::{
    double_slit_fringes, fit_fringes, phase_distance, winding_number_on, wrap_phase, FringeScan, Loop,
};

/// Per-axis samples of the coarse 4D cross-check run with every experiment.
pub const CROSSCHECK_SAMPLES: usize = 24;

const PLANES: [Plane; 2] = [Plane::X, Plane::Y];

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWinding {
    pub plane: Plane,
    pub expected: i64,
    pub charge: Option<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FringeShift {
    pub plane: Plane,
    pub detector2_offset: f64,
    pub shift: Option<f64>,
    pub expected: f64,
    pub visibility_plus: Option<f64>,
    pub visibility_minus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub windings: Vec<PlaneWinding>,
    pub shifts: Vec<FringeShift>,
    pub checks: Vec<CheckResult>,
    pub files: Vec<PathBuf>,
}

impl ExperimentReport {
    pub fn all_passed(&self) -> bool {
        all_passed(&self.checks)
    }
}

/// Fringe shift between detector-2 positions `+x2` and `-x2` for a converted
/// plane of order `n`, with slit separation `d`: `-4 n atan(2 x2 / d)`.
/// Equals `n pi` (mod `2 pi`) at `x2 = d / 2`.
pub fn expected_shift(order: usize, detector2_offset: f64, separation: f64) -> f64 {
    wrap_phase(-4.0 * order as f64 * (2.0 * detector2_offset / separation).atan())
}

fn prepare(config: &ExperimentConfig) -> Result<(BiphotonState, BiphotonState)> {
    config.validate()?;
    let pump = config.pump_spec()?;
    let crystal = config.crystal_spec()?;
    let grids = BiphotonGrids::for_pump(&pump, config.grid.samples)?;
    let state = build_state(&pump, &crystal, &grids)?;
    let converted = apply_nonlocal_converter(&state)?;
    Ok((state, converted))
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_text(path: &Path, text: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
    files.push(path.to_path_buf());
    Ok(())
}

/// Fringe scans at `+-x2` for every configured offset on both planes. Writes
/// one CSV per pair and returns the shifts with their checks.
fn fringe_section(
    config: &ExperimentConfig,
    converted: &BiphotonState,
    dir: &Path,
    files: &mut Vec<PathBuf>,
) -> Result<(Vec<FringeShift>, Vec<CheckResult>)> {
    let scan = config.scan_range()?;
    let offsets = config.detector2_offsets()?;
    let mut shifts = Vec::new();
    let mut checks = Vec::new();
    for plane in PLANES {
        let slits = config.slit_spec(plane)?;
        let order = converted.plane_order(plane);
        for (idx, &x2) in offsets.iter().enumerate() {
            let name = format!("fringe_shift_{}_{idx}", plane.name());
            let expected = expected_shift(order, x2, slits.separation);
            let plus = double_slit_fringes(converted, &slits, x2, &scan);
            let minus = double_slit_fringes(converted, &slits, -x2, &scan);
            if let (Ok(p), Ok(m)) = (&plus, &minus) {
                let path = dir.join(format!("fringes_{}_{idx}.csv", plane.name()));
                write_text(&path, &fringe_csv(p, m), files)?;
            }
            let fit_p = plus.and_then(|s| fit_fringes(&s));
            let fit_m = minus.and_then(|s| fit_fringes(&s));
            let record = FringeShift {
                plane,
                detector2_offset: x2,
                shift: match (&fit_p, &fit_m) {
                    (Ok(a), Ok(b)) => Some(wrap_phase(a.phase - b.phase)),
                    _ => None,
                },
                expected,
                visibility_plus: fit_p.as_ref().ok().map(|f| f.visibility),
                visibility_minus: fit_m.as_ref().ok().map(|f| f.visibility),
            };
            checks.push(match (record.shift, fit_p.err().or(fit_m.err())) {
                (Some(s), _) => CheckResult::below(name, phase_distance(s, expected), 0.05),
                (None, Some(e)) => CheckResult::failed(name, &e.to_string()),
                (None, None) => CheckResult::failed(name, "no fit"),
            });
            shifts.push(record);
        }
    }
    Ok((shifts, checks))
}

fn fringe_csv(plus: &FringeScan, minus: &FringeScan) -> String {
    let mut s = String::from("k,counts_plus,counts_minus\n");
    for ((k, a), b) in plus.positions.iter().zip(&plus.counts).zip(&minus.counts) {
        let _ = writeln!(s, "{k:.16e},{a:.16e},{b:.16e}");
    }
    s
}

/// Full run: maps before and after conversion, converted amplitudes,
/// windings, fringes, norms and a coarse 4D cross-check.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let (state, converted) = prepare(config)?;
    let dir = config.output.dir.clone();
    create_dir(&dir)?;
    let mut files = Vec::new();
    let mut checks = Vec::new();

    write_text(&dir.join("config.txt"), &config.to_text(), &mut files)?;

    for plane in PLANES {
        let p = plane.name();
        for (tag, s) in [("before", &state), ("after", &converted)] {
            let map = coincidence_map(s, plane);
            let csv = dir.join(format!("coincidence_{p}_{tag}.csv"));
            let pgm = dir.join(format!("coincidence_{p}_{tag}.pgm"));
            write_field_csv(&map, &csv)?;
            write_intensity_pgm(&map, &pgm)?;
            files.extend([csv, pgm]);
        }
        let exported = export_field(converted.factor(plane), &dir.join(format!("converted_{p}")))?;
        files.extend([exported.csv, exported.intensity, exported.phase]);
    }

    for plane in PLANES {
        let p = plane.name();
        let before = state.factor(plane).norm_sqr();
        let after = converted.factor(plane).norm_sqr();
        checks.push(CheckResult::below(format!("unit_norm_{p}"), (before - 1.0).abs(), 1e-8));
        checks.push(CheckResult::below(format!("converter_norm_{p}"), (after - before).abs(), 1e-8));
    }

    let mut windings = Vec::new();
    for plane in PLANES {
        let (ua, ub) = converted.waist_units(plane);
        let lp = Loop {
            center: (0.0, 0.0),
            semi_axes: (ua, ub),
            samples: 1024,
        };
        let expected = converted.plane_order(plane) as i64;
        let name = format!("winding_{}", plane.name());
        let w = winding_number_on(converted.factor(plane), &lp);
        checks.push(match &w {
            Ok(r) => CheckResult::equal(name, r.charge, expected),
            Err(e) => CheckResult::failed(name, &e.to_string()),
        });
        windings.push(PlaneWinding {
            plane,
            expected,
            charge: w.ok().map(|r| r.charge),
        });

        if converted.plane_order(plane) > 0 {
            let map = coincidence_map(&converted, plane);
            let center = map.interpolate(0.0, 0.0)?.re.abs() / map.peak_abs();
            checks.push(CheckResult::below(format!("doughnut_center_{}", plane.name()), center, 1e-10));
        }
    }

    let (shifts, fringe_checks) = fringe_section(config, &converted, &dir, &mut files)?;
    checks.extend(fringe_checks);

    let pump = config.pump_spec()?;
    let coarse = BiphotonGrids::for_pump(&pump, CROSSCHECK_SAMPLES)?;
    let cc = full_4d_crosscheck(&pump, &config.crystal_spec()?, &coarse)?;
    checks.push(CheckResult::below("crosscheck_4d", cc.residual, 1e-6));

    let report = ExperimentReport {
        windings,
        shifts,
        checks,
        files,
    };
    let summary_path = dir.join("summary.txt");
    let summary = summary_text(config, &state, &report);
    let mut report = report;
    write_text(&summary_path, &summary, &mut report.files)?;
    Ok(report)
}

/// Fringe scans only; writes the scan CSVs and `fringes_summary.txt`.
pub fn run_fringes(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let (_, converted) = prepare(config)?;
    let dir = config.output.dir.clone();
    create_dir(&dir)?;
    let mut files = Vec::new();
    let (shifts, checks) = fringe_section(config, &converted, &dir, &mut files)?;
    let mut report = ExperimentReport {
        windings: Vec::new(),
        shifts,
        checks,
        files,
    };
    let mut s = String::new();
    write_shifts(&mut s, &report.shifts);
    write_checks(&mut s, &report.checks);
    write_text(&dir.join("fringes_summary.txt"), &s, &mut report.files)?;
    Ok(report)
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

fn write_shifts(s: &mut String, shifts: &[FringeShift]) {
    for (k, f) in shifts.iter().enumerate() {
        let key = format!("fringe.{k}");
        let _ = writeln!(s, "{key}.plane = {}", f.plane.name());
        let _ = writeln!(s, "{key}.detector2_offset_waists = {:?}", f.detector2_offset);
        let _ = writeln!(s, "{key}.shift_rad = {}", opt(f.shift.map(|x| format!("{x:.9}"))));
        let _ = writeln!(s, "{key}.shift_over_pi = {}", opt(f.shift.map(|x| format!("{:.9}", x / PI))));
        let _ = writeln!(s, "{key}.expected_rad = {:.9}", f.expected);
        let _ = writeln!(s, "{key}.visibility_plus = {}", opt(f.visibility_plus.map(|x| format!("{x:.9}"))));
        let _ = writeln!(s, "{key}.visibility_minus = {}", opt(f.visibility_minus.map(|x| format!("{x:.9}"))));
    }
}

fn write_checks(s: &mut String, checks: &[CheckResult]) {
    for c in checks {
        let _ = writeln!(s, "check.{}.value = {:.6e}", c.name, c.value);
        let _ = writeln!(s, "check.{}.tolerance = {:.1e}", c.name, c.tolerance);
        let _ = writeln!(s, "check.{}.passed = {}", c.name, c.passed);
        if !c.detail.is_empty() {
            let _ = writeln!(s, "check.{}.detail = {}", c.name, c.detail);
        }
    }
    let _ = writeln!(s, "all_passed = {}", all_passed(checks));
}

fn summary_text(config: &ExperimentConfig, state: &BiphotonState, report: &ExperimentReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "pump.n = {}", config.pump.n);
    let _ = writeln!(s, "pump.m = {}", config.pump.m);
    let _ = writeln!(s, "down_converted.wavelength_m = {:?}", state.down_params.wavelength);
    let _ = writeln!(s, "down_converted.waist_m = {:?}", state.down_params.waist);
    let _ = writeln!(s, "phase_matching.sigma_m = {:.9e}", state.phase_matching_sigma);
    let _ = writeln!(s, "grid.samples = {}", config.grid.samples);
    for w in &report.windings {
        let _ = writeln!(s, "winding.{}.expected = {}", w.plane.name(), w.expected);
        let _ = writeln!(s, "winding.{}.charge = {}", w.plane.name(), opt(w.charge));
    }
    write_shifts(&mut s, &report.shifts);
    write_checks(&mut s, &report.checks);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_shift_at_square_geometry() {
        for n in 0..5 {
            assert!(phase_distance(expected_shift(n, 0.5, 1.0), n as f64 * PI) < 1e-12);
        }
        assert!(expected_shift(1, 0.25, 1.0).abs() > 0.1);
    }

    #[test]
    fn run_writes_summary_and_passes() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::for_pump(1, 2, dir.path().join("out"));
        cfg.grid.samples = 65;
        cfg.detector2.positions_waists = vec![0.5, 0.3];
        let report = run_experiment(&cfg).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{c}");
        }
        let summary = std::fs::read_to_string(dir.path().join("out/summary.txt")).unwrap();
        assert!(summary.contains("winding.y.charge = 2"));
        assert!(summary.ends_with("all_passed = true\n"));
        assert!(report.files.iter().all(|f| f.exists()));
    }

    #[test]
    fn sinc_crystal_is_rejected() {
        let mut cfg = ExperimentConfig::for_pump(1, 0, "unused");
        cfg.crystal.phase_matching = crate::biphoton::PhaseMatching::ExactSinc;
        assert!(matches!(run_experiment(&cfg), Err(Error::UnsupportedCombination(_))));
    }
}
