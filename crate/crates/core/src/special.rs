//! Hermite and Laguerre polynomials, and the normalized Hermite functions
//! the mode generators are built on.

use std::f64::consts::PI;

/// Physicists' Hermite polynomial `H_n(x)`.
///
/// Evaluated with the three-term recurrence `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_p^alpha(x)`.
pub fn laguerre_poly(p: usize, alpha: usize, x: f64) -> f64 {
    let a = alpha as f64;
    let mut prev = 1.0;
    if p == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..p {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized Hermite function `psi_n(xi) = H_n(xi) exp(-xi^2/2) / sqrt(2^n n! sqrt(pi))`.
///
/// Unit L2 norm over the real line. Uses the normalized recurrence so that
/// high orders neither overflow nor lose precision far from the origin.
pub fn hermite_function(n: usize, xi: f64) -> f64 {
    let mut prev = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = std::f64::consts::SQRT_2 * xi * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All Hermite functions `psi_0(xi) ..= psi_max(xi)` in one pass.
pub fn hermite_functions(max: usize, xi: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(PI.powf(-0.25) * (-0.5 * xi * xi).exp());
    if max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * xi * out[0]);
    for k in 1..max {
        let kf = k as f64;
        let next =
            (2.0 / (kf + 1.0)).sqrt() * xi * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// `n!` as a float. Exact up to 22!.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
