//! Reference implementations used only by the tests. None of them call into
//! the library's special functions.
#![allow(dead_code)]

use std::f64::consts::{PI, SQRT_2};

use nlvortex::grid::{Axis, AxisKind, Field2D};
use num_complex::Complex64;

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        0.0
    } else {
        factorial(n) / (factorial(k) * factorial(n - k))
    }
}

/// Physicists' Hermite polynomial from its explicit series.
pub fn hermite_series(n: usize, x: f64) -> f64 {
    (0..=n / 2)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * factorial(n) / (factorial(k) * factorial(n - 2 * k)) * (2.0 * x).powi((n - 2 * k) as i32)
        })
        .sum()
}

/// Unit-norm Hermite function over the dimensionless line.
pub fn psi(n: usize, x: f64) -> f64 {
    hermite_series(n, x) * (-0.5 * x * x).exp() / (2f64.powi(n as i32) * factorial(n) * PI.sqrt()).sqrt()
}

/// Coefficient of `HG_{N-j,j}` in `DHG_nm`: `[t^j] (1+t)^n (1-t)^m` with the
/// factorial weights, summed in floating point.
pub fn b_oracle(n: usize, m: usize, j: usize) -> f64 {
    let order = n + m;
    let poly: f64 = (0..=j.min(n))
        .filter(|&k| j - k <= m)
        .map(|k| {
            let sign = if (j - k) % 2 == 0 { 1.0 } else { -1.0 };
            binomial(n, k) * binomial(m, j - k) * sign
        })
        .sum();
    (factorial(order - j) * factorial(j) / (2f64.powi(order as i32) * factorial(n) * factorial(m))).sqrt() * poly
}

pub fn i_pow(k: usize) -> Complex64 {
    Complex64::new(0.0, 1.0).powu(k as u32)
}

/// Dimensionless coordinate per unit length of an axis kind.
pub fn scale(kind: AxisKind, waist: f64) -> f64 {
    match kind {
        AxisKind::Position => SQRT_2 / waist,
        AxisKind::Wavevector => waist / SQRT_2,
    }
}

/// `LG_0^l` in dimensionless coordinates.
pub fn lg0(l: i64, za: f64, zb: f64) -> Complex64 {
    let al = l.unsigned_abs() as u32;
    let z = Complex64::new(za, l.signum() as f64 * zb);
    z.powu(al) * ((-0.5 * (za * za + zb * zb)).exp() / (PI * factorial(al as usize)).sqrt())
}

/// `LG_0^l` sampled on any pair of axes for a beam of the given waist.
pub fn lg0_field(l: i64, waist: f64, a: Axis, b: Axis) -> Field2D {
    let (sa, sb) = (scale(a.kind, waist), scale(b.kind, waist));
    let amp = (sa * sb).sqrt();
    Field2D::from_fn(a, b, |x, y| lg0(l, sa * x, sb * y) * amp)
}

/// Max pointwise deviation after the best global phase, relative to the reference peak.
pub fn phase_aligned_error(field: &Field2D, reference: &Field2D) -> f64 {
    let overlap: Complex64 = reference
        .values
        .iter()
        .zip(field.values.iter())
        .map(|(r, f)| r.conj() * f)
        .sum();
    let phase = overlap / overlap.norm();
    let peak = reference.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    reference
        .values
        .iter()
        .zip(field.values.iter())
        .map(|(r, f)| (f - phase * r).norm())
        .fold(0.0, f64::max)
        / peak
}

/// Phase of `(h + i y)^n` relative to `(-h + i y)^n`, swept through both
/// detector positions: the fringe shift expected for an `LG^n` slit pair.
pub fn lg_fringe_shift_oracle(order: usize, x2: f64, separation: f64) -> f64 {
    let h = 0.5 * separation;
    let phi = |y: f64| order as f64 * (y.atan2(-h) - y.atan2(h));
    let s = phi(x2) - phi(-x2);
    PI - (PI - s).rem_euclid(2.0 * PI)
}
