//! Unitary continuous Fourier transform evaluated with the DFT.
//!
//! Convention: `F[f](q) = (2 pi)^{-1/2} \int f(x) e^{+i q x} dx`, in either
//! direction (position to wavevector or back). With the waist-matched axis
//! scaling of [`crate::modes`], normalized Hermite-Gaussians satisfy
//! `F[HG_n] = i^n HG_n`. Applying the transform twice gives the parity
//! operator `f(x) -> f(-x)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{Axis, Field2D};

/// Which axis of a [`Field2D`] to transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldAxis {
    A,
    B,
}

struct Plan {
    output: Axis,
    fft: std::sync::Arc<dyn rustfft::Fft<f64>>,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
}

impl Plan {
    fn new(input: Axis) -> Plan {
        let n = input.samples;
        let output = input.conjugate();
        let dx = input.spacing();
        let x0 = input.min;
        // q_j = (j - c) dq with c = (n - 1) / 2, x_k = x0 + k dx, dq dx = 2 pi / n:
        // q_j x_k = (j - c) dq x0 + 2 pi (j k - c k) / n
        let pre = (0..n)
            .map(|k| {
                let twice_ck = ((n - 1) * k) % (2 * n);
                Complex64::from_polar(1.0, -PI * twice_ck as f64 / n as f64)
            })
            .collect();
        let norm = dx / (2.0 * PI).sqrt();
        let post = (0..n)
            .map(|j| Complex64::from_polar(norm, output.coord(j) * x0))
            .collect();
        let fft = FftPlanner::new().plan_fft(n, FftDirection::Inverse);
        Plan {
            output,
            fft,
            pre,
            post,
        }
    }

    fn apply(&self, buf: &mut [Complex64]) {
        for (v, p) in buf.iter_mut().zip(&self.pre) {
            *v *= p;
        }
        self.fft.process(buf);
        for (v, p) in buf.iter_mut().zip(&self.post) {
            *v *= p;
        }
    }
}

/// Transform samples on one axis; returns the conjugate axis and the values there.
pub fn fourier_transform_1d(axis: &Axis, values: &[Complex64]) -> Result<(Axis, Vec<Complex64>)> {
    if values.len() != axis.samples {
        return Err(Error::Grid(format!(
            "{} values for an axis of {} samples",
            values.len(),
            axis.samples
        )));
    }
    let plan = Plan::new(*axis);
    let mut buf = values.to_vec();
    plan.apply(&mut buf);
    Ok((plan.output, buf))
}

/// Transform a 2D field along one axis only; the other axis is untouched.
pub fn fourier_transform_axis(field: &Field2D, which: FieldAxis) -> Field2D {
    let axis = match which {
        FieldAxis::A => field.axis_a,
        FieldAxis::B => field.axis_b,
    };
    let plan = Plan::new(axis);
    let mut values = field.values.clone();
    let lanes = match which {
        FieldAxis::A => values.columns_mut(),
        FieldAxis::B => values.rows_mut(),
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); axis.samples];
    for mut lane in lanes {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        plan.apply(&mut buf);
        for (v, b) in lane.iter_mut().zip(&buf) {
            *v = *b;
        }
    }
    let (axis_a, axis_b) = match which {
        FieldAxis::A => (plan.output, field.axis_b),
        FieldAxis::B => (field.axis_a, plan.output),
    };
    Field2D {
        axis_a,
        axis_b,
        values,
    }
}

/// Two-dimensional transform of a single-beam field on a square grid.
pub fn fourier_transform(field: &Field2D) -> Result<Field2D> {
    if field.axis_a.kind != field.axis_b.kind {
        return Err(Error::Grid("axes of mixed kind; transform one axis at a time".into()));
    }
    if !field.axis_a.same_as(&field.axis_b) {
        return Err(Error::Grid("two-dimensional transform needs a square grid".into()));
    }
    let half = fourier_transform_axis(field, FieldAxis::A);
    Ok(fourier_transform_axis(&half, FieldAxis::B))
}
