use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::{identity3, outer, Geometry, GreenTensor3};
use crate::error::{Error, Result};
use crate::media::index_of;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Below this value of |ρ × c|/|ρ| the on-axis limit is used.
const AXIS_THRESHOLD: f64 = 1e-3;

/// Green tensor of a homogeneous uniaxial dielectric,
/// ε = ε_t (I − c c) + ε_c c c, at separation ρ ≠ 0.
///
/// On the optical axis the (ρ × c)⁻² terms are singular individually; there the
/// tensor is the Richardson-extrapolated average over four symmetric off-axis
/// displacements, accurate to about 1e-6 relative.
pub fn uniaxial_bulk(
    rho: Vector3<f64>,
    omega: f64,
    eps_c: Complex64,
    eps_t: Complex64,
    c_axis: Vector3<f64>,
) -> Result<GreenTensor3> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain(format!("frequency must be positive, got {omega}")));
    }
    let r = rho.norm();
    if !(r > 0.0) {
        return Err(Error::domain("uniaxial tensor needs |rho| > 0"));
    }
    let cn = c_axis.norm();
    if !(cn > 0.0) {
        return Err(Error::domain("optical axis must be a non-zero vector"));
    }
    if eps_t == Complex64::new(0.0, 0.0) || eps_c == Complex64::new(0.0, 0.0) {
        return Err(Error::domain("uniaxial permittivities must be non-zero"));
    }
    let c = c_axis / cn;
    let entries = if rho.cross(&c).norm() < AXIS_THRESHOLD * r {
        on_axis(&rho, omega, eps_c, eps_t, &c)
    } else {
        off_axis(&rho, omega, eps_c, eps_t, &c)
    };
    Ok(GreenTensor3 { entries, geometry: Geometry::BulkUniaxial, r: rho, r_prime: Vector3::zeros() })
}

fn scalar(q: Complex64, s: Complex64) -> Complex64 {
    (I * q * s).exp() / (4.0 * PI * s)
}

fn off_axis(
    rho: &Vector3<f64>,
    omega: f64,
    eps_c: Complex64,
    eps_t: Complex64,
    c: &Vector3<f64>,
) -> Matrix3<Complex64> {
    let qt = index_of(eps_t) * omega;
    let cc = outer(c, c);
    let ratio = eps_c / eps_t;
    let m = (identity3() - cc) * ratio + cc;
    let rho_c = rho.map(|x| Complex64::new(x, 0.0));
    let m_rho = m * rho_c;
    let x = rho.cross(c);
    let x2 = x.norm_squared();
    let along = rho.dot(c);
    let re = (ratio * x2 + along * along).sqrt();
    let r = Complex64::new(rho.norm(), 0.0);

    let f = scalar(qt, re);
    let g = I * qt - 1.0 / re;
    let fp = f * g;
    let fpp = f * (g * g + 1.0 / (re * re));
    let mm = m_rho * m_rho.transpose();
    let hess = mm * (fpp / (re * re)) + (m / re - mm / (re * re * re)) * fp;
    let first = (hess + m * (qt * qt * f)) / (qt * qt);

    let xx = outer(&x, &x);
    let second = xx * ((ratio * f - scalar(qt, r)) / x2);
    let third = ((identity3() - cc) / Complex64::new(x2, 0.0) - xx * Complex64::new(2.0 / (x2 * x2), 0.0))
        * (((I * qt * re).exp() - (I * qt * r).exp()) / (4.0 * PI * I * qt));
    first - second - third
}

fn on_axis(rho: &Vector3<f64>, omega: f64, eps_c: Complex64, eps_t: Complex64, c: &Vector3<f64>) -> Matrix3<Complex64> {
    let r = rho.norm();
    let trial = if c.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = c.cross(&trial).normalize();
    let e2 = c.cross(&e1);
    let avg = |h: f64| {
        let mut s = Matrix3::zeros();
        for d in [e1 * h, -e1 * h, e2 * h, -e2 * h] {
            s += off_axis(&(rho + d), omega, eps_c, eps_t, c);
        }
        s / Complex64::new(4.0, 0.0)
    };
    let h = 2.0 * AXIS_THRESHOLD * r;
    (avg(h) * Complex64::new(4.0, 0.0) - avg(2.0 * h)) / Complex64::new(3.0, 0.0)
}
