mod common;

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use nlvortex::algebra::{b_coeff, decompose, dhg_expansion, lg_expansion, mode_converter_phases};
use nlvortex::fourier::fourier_transform_1d;
use nlvortex::grid::Axis;
use nlvortex::modes::{dhg_field, hg_1d, hg_field, lg_field, BeamParams, LGIndex, Mode, ModeIndex};
use nlvortex::AxisKind;
use num_complex::Complex64;
use proptest::prelude::*;

use common::{b_oracle, i_pow, phase_aligned_error, psi, scale};

fn params() -> BeamParams {
    BeamParams::new(632.8e-9, 0.8e-3).unwrap()
}

#[test]
fn hg_1d_matches_series_oracle() {
    let p = params();
    let ax = Axis::spanning_waists(AxisKind::Position, 101, p.waist, 8.0).unwrap();
    let s = scale(AxisKind::Position, p.waist);
    for n in 0..=10 {
        let got = hg_1d(n, &p, &ax);
        for (g, x) in got.iter().zip(ax.coords()) {
            assert_abs_diff_eq!(*g, s.sqrt() * psi(n, s * x), epsilon = 1e-9 * s.sqrt());
        }
    }
}

#[test]
fn orthonormal_up_to_order_six() {
    let p = params();
    let ax = Axis::spanning_waists(AxisKind::Position, 257, p.waist, 8.0).unwrap();
    let grid = (ax, ax);
    let modes = ModeIndex::up_to_order(6);
    let fields: Vec<_> = modes.iter().map(|&i| hg_field(i, &p, grid).unwrap()).collect();
    for (a, fa) in modes.iter().zip(&fields) {
        for (b, fb) in modes.iter().zip(&fields) {
            let g = fa.inner(fb).unwrap();
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((g - want).norm() < 1e-6, "{a:?} {b:?} {g}");
        }
    }
}

#[test]
fn b_coeff_matches_binomial_oracle() {
    for order in 0..=12 {
        for n in 0..=order {
            for j in 0..=order {
                let got = b_coeff(n, order - n, j).unwrap();
                assert_abs_diff_eq!(got, b_oracle(n, order - n, j), epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn dhg_field_equals_its_hg_expansion() {
    let p = params();
    let ax = Axis::spanning_waists(AxisKind::Position, 129, p.waist, 8.0).unwrap();
    for idx in ModeIndex::up_to_order(4) {
        let direct = dhg_field(idx, &p, (ax, ax)).unwrap();
        let sum = dhg_expansion(idx).unwrap().synthesize(&p, ax, ax);
        assert!(direct.max_abs_diff(&sum).unwrap() < 1e-12 * direct.peak_abs().max(1.0) / p.waist, "{idx:?}");
    }
}

#[test]
fn lg_closed_form_decomposes_to_phased_b() {
    let p = params();
    let ax = Axis::spanning_waists(AxisKind::Position, 257, p.waist, 8.0).unwrap();
    for idx in ModeIndex::up_to_order(4) {
        let f = lg_field(idx.to_lg(), &p, (ax, ax)).unwrap();
        let order = idx.order();
        let shell = decompose(&f, &p, order as i64).unwrap().shell(order);
        for (j, c) in shell.iter().enumerate() {
            let want = i_pow(j) * b_oracle(idx.n, idx.m, j);
            assert!((c - want).norm() < 1e-6, "{idx:?} j={j}: {c} vs {want}");
        }
    }
}

#[test]
fn fourier_eigenvalue_up_to_six() {
    let p = params();
    let ax = Axis::self_conjugate(AxisKind::Position, 257, p.waist).unwrap();
    for n in 0..=6 {
        let v: Vec<Complex64> = hg_1d(n, &p, &ax).into_iter().map(Complex64::from).collect();
        let (q, out) = fourier_transform_1d(&ax, &v).unwrap();
        let s = scale(AxisKind::Wavevector, p.waist);
        for (o, k) in out.iter().zip(q.coords()) {
            let want = i_pow(n) * (s.sqrt() * psi(n, s * k));
            assert!((o - want).norm() < 1e-6 * s.sqrt(), "n={n}");
        }
    }
}

#[test]
fn nonlocal_lg_matches_oracle() {
    let p = params();
    let a = Axis::spanning_waists(AxisKind::Wavevector, 65, p.waist, 8.0).unwrap();
    let b = Axis::spanning_waists(AxisKind::Position, 65, p.waist, 8.0).unwrap();
    for l in [-2i64, 1, 3] {
        let f = nlvortex::modes::nonlocal_field(Mode::Lg(LGIndex::new(0, l)), &p, a, b);
        let oracle = common::lg0_field(l, p.waist, a, b);
        assert!(f.max_abs_diff(&oracle).unwrap() < 1e-12 * oracle.peak_abs());
    }
}

#[test]
fn converter_phases_turn_dhg_into_lg() {
    let p = params();
    let ax = Axis::spanning_waists(AxisKind::Position, 129, p.waist, 8.0).unwrap();
    for idx in ModeIndex::up_to_order(4) {
        let phased = mode_converter_phases(&dhg_expansion(idx).unwrap());
        let lg = lg_field(idx.to_lg(), &p, (ax, ax)).unwrap();
        let synth = phased.synthesize(&p, ax, ax);
        assert!(phase_aligned_error(&synth, &lg) < 1e-10, "{idx:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expansions_have_unit_norm(n in 0usize..20, m in 0usize..20) {
        let idx = ModeIndex::new(n, m);
        prop_assert!((dhg_expansion(idx).unwrap().norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert!((lg_expansion(idx).unwrap().norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hg_parity(n in 0usize..8, m in 0usize..8, za in -3.0f64..3.0, zb in -3.0f64..3.0) {
        let mode = Mode::Hg(ModeIndex::new(n, m));
        let v = mode.dimensionless(za, zb);
        let flipped = mode.dimensionless(-za, zb);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((flipped - v * sign).norm() < 1e-12);
        let both = mode.dimensionless(-za, -zb);
        let sign2 = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((both - v * sign2).norm() < 1e-12);
    }

    #[test]
    fn lg_azimuthal_phase(p in 0usize..3, l in -3i64..=3, r in 0.2f64..2.5, theta in 0.0f64..(2.0 * PI), alpha in 0.0f64..(2.0 * PI)) {
        let mode = Mode::Lg(LGIndex::new(p, l));
        let v = mode.dimensionless(r * theta.cos(), r * theta.sin());
        let rotated = mode.dimensionless(r * (theta + alpha).cos(), r * (theta + alpha).sin());
        let want = v * Complex64::from_polar(1.0, l as f64 * alpha);
        prop_assert!((rotated - want).norm() < 1e-12 * v.norm().max(1e-3));
    }

    #[test]
    fn dhg_is_rotated_hg(n in 0usize..5, m in 0usize..5, za in -3.0f64..3.0, zb in -3.0f64..3.0) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let d = Mode::Dhg(ModeIndex::new(n, m)).dimensionless(za, zb);
        let want = psi(n, (za + zb) * s) * psi(m, (za - zb) * s);
        prop_assert!((d.re - want).abs() < 1e-10 && d.im == 0.0);
    }
}
