//! The few special functions the Green-function formulas need.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Spherical Bessel function j_n(z) for n ≤ 3.
///
/// Closed trigonometric forms are used for |z| ≥ (n + 1)/2 and the power series below,
/// where the closed forms lose digits to cancellation.
pub fn spherical_bessel_j(n: u32, z: Complex64) -> Result<Complex64> {
    if n > 3 {
        return Err(Error::domain(format!("spherical_bessel_j supports orders 0..=3, got {n}")));
    }
    if z.norm() < series_radius(n) {
        return Ok(series_j(n, z));
    }
    let (s, c) = (z.sin(), z.cos());
    let zi = z.inv();
    let v = match n {
        0 => s * zi,
        1 => s * zi * zi - c * zi,
        2 => (3.0 * zi * zi * zi - zi) * s - 3.0 * zi * zi * c,
        _ => (15.0 * zi.powi(4) - 6.0 * zi * zi) * s - (15.0 * zi.powi(3) - zi) * c,
    };
    Ok(v)
}

fn series_radius(n: u32) -> f64 {
    0.5 * (n + 1) as f64
}

fn series_j(n: u32, z: Complex64) -> Complex64 {
    // j_n(z) = z^n/(2n+1)!! Σ_k (−z²/2)^k / (k! (2n+3)(2n+5)…(2n+2k+1))
    let mut dfact = 1.0;
    for k in 1..=n {
        dfact *= (2 * k + 1) as f64;
    }
    let x = -z * z * 0.5;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..30 {
        term = term * x / (k as f64 * (2 * n + 2 * k + 1) as f64);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    z.powu(n) / dfact * sum
}

/// Laguerre polynomial L_k(x) by the three-term recurrence.
pub fn laguerre(k: usize, x: f64) -> f64 {
    let (mut l0, mut l1) = (1.0, 1.0 - x);
    if k == 0 {
        return l0;
    }
    for j in 1..k {
        let j = j as f64;
        let l2 = ((2.0 * j + 1.0 - x) * l1 - j * l0) / (j + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// Bessel function of the first kind J_n(x) for integer order and real argument.
///
/// Trapezoidal rule on the periodic Bessel integral, which converges geometrically
/// once the node count exceeds the argument.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let m = (x.abs() + 10.0 * x.abs().cbrt() + 40.0).ceil() as usize;
    let h = std::f64::consts::TAU / m as f64;
    let nf = n as f64;
    let s: f64 = (0..m)
        .map(|k| {
            let t = k as f64 * h;
            (nf * t - x * t.sin()).cos()
        })
        .sum();
    s / m as f64
}

/// sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// sinh(x)/x with the removable singularity filled in.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

/// sin(z)/z for complex argument.
pub fn csinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        Complex64::new(1.0, 0.0) - z * z / 6.0
    } else {
        z.sin() / z
    }
}
