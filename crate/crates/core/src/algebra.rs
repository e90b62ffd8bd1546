//! Basis changes between the HG, DHG and LG families.
//!
//! A DHG or LG mode of order `N` is a finite superposition of `HG_{N-j,j}`,
//! `j = 0..=N`. The coefficients here are the exact ones for the DHG modes as
//! generated by [`crate::modes::dhg_field`], i.e. `HG_nm` evaluated at
//! `((a+b)/sqrt2, (a-b)/sqrt2)`:
//!
//! ```text
//! b(n,m,j) = sqrt((N-j)! j! / (2^N n! m!)) * [t^j] (1+t)^n (1-t)^m
//! ```
//!
//! where `[t^j]` extracts a polynomial coefficient, i.e. the `j`-th derivative at
//! `t = 0` divided by `j!`. The coefficient is computed in integer arithmetic.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Axis, Field2D};
use crate::modes::{hg_1d_table, nonlocal_field, BeamParams, Mode, ModeIndex};
use crate::special::factorial;

/// Orders above this overflow the exact integer path.
pub const MAX_EXACT_ORDER: usize = 60;

/// Coefficients of an order-`N` mode over `HG_{N-j,j}`, indexed by `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoeffs {
    pub order: usize,
    pub coeffs: Vec<Complex64>,
}

impl ExpansionCoeffs {
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Field `sum_j coeffs[j] HG_{N-j,j}` on any grid (axes of mixed kind allowed).
    pub fn synthesize(&self, params: &BeamParams, axis_a: Axis, axis_b: Axis) -> Field2D {
        let n = self.order;
        let mut out = Field2D::from_fn(axis_a, axis_b, |_, _| Complex64::new(0.0, 0.0));
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let term = nonlocal_field(Mode::Hg(ModeIndex::new(n - j, j)), params, axis_a, axis_b);
            out.values.zip_mut_with(&term.values, |o, t| *o += c * t);
        }
        out
    }
}

/// `i^k`, exact.
pub fn i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Coefficient of `t^j` in `(1+t)^n (1-t)^m`.
pub fn generating_coeff(n: usize, m: usize, j: usize) -> i128 {
    (0..=j.min(n))
        .filter(|&k| j - k <= m)
        .map(|k| {
            let sign = if (j - k).is_multiple_of(2) { 1 } else { -1 };
            sign * binomial(n, k) * binomial(m, j - k)
        })
        .sum()
}

/// Expansion coefficient of `DHG_nm` on `HG_{N-j,j}`.
pub fn b_coeff(n: usize, m: usize, j: usize) -> Result<f64> {
    let order = n + m;
    if j > order {
        return Err(Error::IndexOutOfRange { j, order });
    }
    if order > MAX_EXACT_ORDER {
        return Err(Error::invalid("n + m", format!("order {order} exceeds {MAX_EXACT_ORDER}")));
    }
    let c = generating_coeff(n, m, j);
    if c == 0 {
        return Ok(0.0);
    }
    // ratio of factorials via logs keeps high orders finite; exact for small ones
    let prefactor = if order <= 20 {
        factorial(order - j) * factorial(j) / (factorial(n) * factorial(m) * 2f64.powi(order as i32))
    } else {
        (ln_factorial(order - j) + ln_factorial(j)
            - ln_factorial(n)
            - ln_factorial(m)
            - order as f64 * std::f64::consts::LN_2)
            .exp()
    };
    Ok(prefactor.sqrt() * c as f64)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `DHG_nm = sum_j b(n,m,j) HG_{N-j,j}`.
pub fn dhg_expansion(idx: ModeIndex) -> Result<ExpansionCoeffs> {
    let order = idx.order();
    let coeffs = (0..=order)
        .map(|j| b_coeff(idx.n, idx.m, j).map(|b| Complex64::new(b, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpansionCoeffs { order, coeffs })
}

/// `LG^{n-m}_{min(n,m)} = sum_j i^j b(n,m,j) HG_{N-j,j}` (up to a global phase).
pub fn lg_expansion(idx: ModeIndex) -> Result<ExpansionCoeffs> {
    Ok(mode_converter_phases(&dhg_expansion(idx)?))
}

/// The astigmatic converter: `HG_{N-j,j}` picks up `i^j`.
pub fn mode_converter_phases(coeffs: &ExpansionCoeffs) -> ExpansionCoeffs {
    ExpansionCoeffs {
        order: coeffs.order,
        coeffs: coeffs
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * i_pow(j))
            .collect(),
    }
}

/// Overlaps of a field with every `HG_nm` up to a maximum order.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub coeffs: BTreeMap<ModeIndex, Complex64>,
    /// `sqrt(max(0, |f|^2 - sum |c|^2))`: weight outside the truncated basis.
    pub residual_norm: f64,
}

impl Decomposition {
    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.coeffs
            .get(&ModeIndex::new(n, m))
            .copied()
            .unwrap_or_default()
    }

    /// Coefficients of the order-`N` shell, indexed by `j` of `HG_{N-j,j}`.
    pub fn shell(&self, order: usize) -> Vec<Complex64> {
        (0..=order).map(|j| self.get(order - j, j)).collect()
    }
}

/// `c_nm = <HG_nm, field>` for all `n + m <= max_order`. The HG family is
/// taken from `params`; each axis uses the representation of its own kind, so
/// non-local planes decompose the same way as single-beam fields.
pub fn decompose(field: &Field2D, params: &BeamParams, max_order: i64) -> Result<Decomposition> {
    if max_order < 0 {
        return Err(Error::invalid("max_order", format!("must be >= 0, got {max_order}")));
    }
    let max = max_order as usize;
    let ta = hg_1d_table(max, params.waist, &field.axis_a);
    let tb = hg_1d_table(max, params.waist, &field.axis_b);

    // contract along b first: partial[i][m] = sum_j HG_m(b_j) f[i, j]
    let na = field.axis_a.samples;
    let mut partial = vec![vec![Complex64::new(0.0, 0.0); max + 1]; na];
    for (i, row) in field.values.outer_iter().enumerate() {
        for (m, hb) in tb.iter().enumerate() {
            partial[i][m] = row.iter().zip(hb).map(|(v, h)| v * h).sum();
        }
    }

    let area = field.cell_area();
    let mut coeffs = BTreeMap::new();
    let mut captured = 0.0;
    for idx in ModeIndex::up_to_order(max) {
        let gouy = params.gouy_factor(idx.order()).conj();
        let c: Complex64 = (0..na).map(|i| partial[i][idx.m] * ta[idx.n][i]).sum();
        let c = c * area * gouy;
        captured += c.norm_sqr();
        coeffs.insert(idx, c);
    }
    let residual_norm = (field.norm_sqr() - captured).max(0.0).sqrt();
    Ok(Decomposition {
        coeffs,
        residual_norm,
    })
}
