//! Scattering part of the Green tensor above a planar vacuum/medium interface at z = 0.
//!
//! The k-integrals are split at the branch point k = q. On [0, q] the substitution
//! k = q sin θ removes the 1/β endpoint singularity; for k > q the substitution
//! κ = √(k² − q²) turns e^{iβz} into e^{−κz} and removes it as well.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::{Geometry, GreenTensor3};
use crate::error::{Error, Result};
use crate::media::{index_of, Dielectric};
use crate::numerics::{bessel_j, integrate_with_breaks, QuadratureConfig};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Evanescent integrals stop where the exponential envelope has dropped to e^{-EVANESCENT_DEPTH}.
const EVANESCENT_DEPTH: f64 = 40.0;

fn upper_root(z: Complex64) -> Complex64 {
    index_of(z)
}

/// Fresnel coefficients (r^p, r^s) for in-plane wavenumber k and vacuum normal component β.
fn fresnel(eps: Complex64, q: f64, k: f64, beta: Complex64) -> (Complex64, Complex64) {
    let beta1 = upper_root(eps * q * q - k * k);
    let rp = (eps * beta - beta1) / (eps * beta + beta1);
    let rs = (beta - beta1) / (beta + beta1);
    (rp, rs)
}

fn evanescent_breaks(eps: Complex64, q: f64, depth: f64) -> Vec<f64> {
    let kappa_max = EVANESCENT_DEPTH / depth;
    let mut b = vec![0.0, kappa_max];
    for s in [0.25, 1.0, 4.0] {
        b.push(s / depth);
    }
    let guided = (eps.re - 1.0).max(0.0).sqrt() * q;
    b.push(guided);
    b.push(q);
    b.retain(|&x| (0.0..=kappa_max).contains(&x));
    b.sort_by(f64::total_cmp);
    b.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * kappa_max);
    b
}

fn check(z: f64, omega: f64) -> Result<()> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(format!("height above the interface must be positive, got {z}")));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain(format!("frequency must be positive, got {omega}")));
    }
    Ok(())
}

/// Coincidence values (R_xx, R_zz) of the reflection tensor at height z; R_yy = R_xx.
pub fn halfspace_reflection<M: Dielectric + ?Sized>(
    z: f64,
    omega: f64,
    m: &M,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, Complex64)> {
    check(z, omega)?;
    let eps = m.epsilon(omega);
    let q = omega;
    let q2 = q * q;

    let prop = |theta: f64, zz: bool| {
        let (k, beta) = (q * theta.sin(), q * theta.cos());
        let (rp, rs) = fresnel(eps, q, k, Complex64::new(beta, 0.0));
        let e = (I * 2.0 * beta * z).exp();
        if zz {
            I / (4.0 * PI * q2) * k * k * k * rp * e
        } else {
            (-I / (8.0 * PI * q2) * k * beta * beta * rp + I / (8.0 * PI) * k * rs) * e
        }
    };
    let evan = |kappa: f64, zz: bool| {
        let k = (kappa * kappa + q2).sqrt();
        let (rp, rs) = fresnel(eps, q, k, I * kappa);
        let e = (-2.0 * kappa * z).exp();
        if zz {
            (kappa * kappa + q2) / (4.0 * PI * q2) * rp * e
        } else {
            (kappa * kappa / (8.0 * PI * q2) * rp + rs / (8.0 * PI)) * e
        }
    };
    let theta_breaks = [0.0, FRAC_PI_2];
    let kappa_breaks = evanescent_breaks(eps, q, 2.0 * z);
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (slot, zz) in [(0, false), (1, true)] {
        let (a, _) = integrate_with_breaks(&|t| prop(t, zz), &theta_breaks, cfg)?;
        let (b, _) = integrate_with_breaks(&|k| evan(k, zz), &kappa_breaks, cfg)?;
        out[slot] = a + b;
    }
    Ok((out[0], out[1]))
}

/// Small-distance expansion of (R_xx, R_zz), valid for qz ≪ 1.
pub fn halfspace_reflection_asymptotic(z: f64, omega: f64, eps: Complex64) -> (Complex64, Complex64) {
    let n = index_of(eps);
    let q = omega;
    let rzz = (n * n - 1.0) / (n * n + 1.0) / (16.0 * PI * q * q * z.powi(3))
        + (n - 1.0) * (n - 1.0) / (n * (n + 1.0)) / (8.0 * PI * z)
        + I * q / (12.0 * PI) * (n - 1.0) * (2.0 * n - 1.0) / (n * (n + 1.0));
    let rxx = rzz / 2.0 - (n * n - 1.0) / (n * n + 1.0) / (16.0 * PI * z) - I * q / (3.0 * PI) * (n - 1.0) / (n + 1.0);
    (rxx, rzz)
}

/// Full reflection (scattering) tensor R(r, r′, ω) for two points above the interface.
pub fn halfspace_scattering_tensor<M: Dielectric + ?Sized>(
    r: Vector3<f64>,
    r_prime: Vector3<f64>,
    omega: f64,
    m: &M,
    cfg: &QuadratureConfig,
) -> Result<GreenTensor3> {
    check(r.z, omega)?;
    check(r_prime.z, omega)?;
    let eps = m.epsilon(omega);
    let q = omega;
    let q2 = q * q;
    let depth = r.z + r_prime.z;
    let (dx, dy) = (r.x - r_prime.x, r.y - r_prime.y);
    let rho = dx.hypot(dy);
    let phi = dy.atan2(dx);

    // local-frame kernel: component index 0..5 = xx, yy, zz, xz, zx
    let kernel = |k: f64, beta: Complex64, comp: usize| -> Complex64 {
        let (rp, rs) = fresnel(eps, q, k, beta);
        let x = k * rho;
        let (j0, j1, j2) = if rho > 0.0 { (bessel_j(0, x), bessel_j(1, x), bessel_j(2, x)) } else { (1.0, 0.0, 0.0) };
        match comp {
            0 => rs * PI * (j0 + j2) - rp * beta * beta / q2 * PI * (j0 - j2),
            1 => rs * PI * (j0 - j2) - rp * beta * beta / q2 * PI * (j0 + j2),
            2 => rp * (k * k / q2) * 2.0 * PI * j0,
            3 => -rp * beta * k / q2 * 2.0 * PI * I * j1,
            _ => rp * beta * k / q2 * 2.0 * PI * I * j1,
        }
    };
    let pref = I / (8.0 * PI * PI);
    let kappa_breaks = {
        let mut b = evanescent_breaks(eps, q, depth);
        if rho > 0.0 {
            let last = *b.last().unwrap();
            let mut s = PI / rho;
            while s < last && b.len() < 400 {
                b.push(s);
                s += PI / rho;
            }
            b.sort_by(f64::total_cmp);
            b.dedup();
        }
        b
    };
    let mut local = [Complex64::new(0.0, 0.0); 5];
    for (comp, slot) in local.iter_mut().enumerate() {
        let prop = |theta: f64| {
            let (k, beta) = (q * theta.sin(), q * theta.cos());
            k * (I * beta * depth).exp() * kernel(k, Complex64::new(beta, 0.0), comp)
        };
        let evan = |kappa: f64| {
            let k = (kappa * kappa + q2).sqrt();
            -I * (-kappa * depth).exp() * kernel(k, I * kappa, comp)
        };
        let (a, _) = integrate_with_breaks(&prop, &[0.0, FRAC_PI_2], cfg)?;
        let (b, _) = integrate_with_breaks(&evan, &kappa_breaks, cfg)?;
        *slot = pref * (a + b);
    }
    let z0 = Complex64::new(0.0, 0.0);
    let loc = Matrix3::new(local[0], z0, local[3], z0, local[1], z0, local[4], z0, local[2]);
    let (s, c) = phi.sin_cos();
    let rot = Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0).map(|x| Complex64::new(x, 0.0));
    Ok(GreenTensor3 { entries: rot * loc * rot.transpose(), geometry: Geometry::HalfSpace, r, r_prime })
}
