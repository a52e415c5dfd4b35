use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::{identity3, outer, Geometry, GreenTensor3};
use crate::error::{Error, Result};
use crate::media::Dielectric;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("frequency must be positive, got {omega}")))
    }
}

/// 1D bulk Green function G(x, x′, ω) = −exp(iωn|x − x′|) / (2iωn).
pub fn bulk_1d<M: Dielectric + ?Sized>(x: f64, x_prime: f64, omega: f64, m: &M) -> Result<Complex64> {
    check_omega(omega)?;
    let n = m.index(omega);
    let q = n * omega;
    Ok(-(I * q * (x - x_prime).abs()).exp() / (2.0 * I * q))
}

fn separation(rho: &Vector3<f64>) -> Result<(f64, Vector3<f64>)> {
    let r = rho.norm();
    if !(r > 0.0) {
        return Err(Error::domain("bulk tensor needs |rho| > 0; use the coincidence-limit operation instead"));
    }
    Ok((r, rho / r))
}

/// Full isotropic bulk tensor for wavenumber q.
pub(crate) fn iso_tensor(rho: &Vector3<f64>, q: Complex64) -> Result<Matrix3<Complex64>> {
    let (r, u) = separation(rho)?;
    let x = q * r;
    let a = 1.0 + I / x - 1.0 / (x * x);
    let b = 1.0 + 3.0 * I / x - 3.0 / (x * x);
    let pref = (I * x).exp() / (4.0 * PI * r);
    Ok((identity3() * a - outer(&u, &u) * b) * pref)
}

fn tensor(entries: Matrix3<Complex64>, rho: &Vector3<f64>) -> GreenTensor3 {
    GreenTensor3 { entries, geometry: Geometry::BulkIsotropic, r: *rho, r_prime: Vector3::zeros() }
}

/// Isotropic bulk Green tensor at separation ρ = r − r′ (ρ ≠ 0).
pub fn bulk_iso<M: Dielectric + ?Sized>(rho: Vector3<f64>, omega: f64, m: &M) -> Result<GreenTensor3> {
    check_omega(omega)?;
    let q = m.index(omega) * omega;
    Ok(tensor(iso_tensor(&rho, q)?, &rho))
}

/// Longitudinal and transverse parts of the isotropic bulk tensor at ρ ≠ 0,
/// where the δ(ρ) contribution to the longitudinal part vanishes.
pub fn bulk_iso_split<M: Dielectric + ?Sized>(
    rho: Vector3<f64>,
    omega: f64,
    m: &M,
) -> Result<(GreenTensor3, GreenTensor3)> {
    check_omega(omega)?;
    let q = m.index(omega) * omega;
    let (r, u) = separation(&rho)?;
    let dip = (identity3() - outer(&u, &u) * Complex64::new(3.0, 0.0)) / Complex64::new(r * r * r, 0.0);
    let long = -dip / (4.0 * PI * q * q);
    let x = q * r;
    let wave = identity3() * (1.0 / x + I / (x * x) - 1.0 / (x * x * x))
        - outer(&u, &u) * (1.0 / x + 3.0 * I / (x * x) - 3.0 / (x * x * x));
    let trans = dip / (4.0 * PI * q * q) + wave * (q * (I * x).exp() / (4.0 * PI));
    Ok((tensor(long, &rho), tensor(trans, &rho)))
}

/// Coincidence limit Im G⊥(r, r, ω) = ω n_R/(6π) I of the transverse part.
pub fn bulk_iso_im_coincidence<M: Dielectric + ?Sized>(omega: f64, m: &M) -> Result<Matrix3<f64>> {
    check_omega(omega)?;
    let n_r = m.index(omega).re;
    Ok(Matrix3::identity() * (omega * n_r / (6.0 * PI)))
}

/// Vacuum coincidence limit Im G(r, r, ω) = ω/(6π) I.
pub fn vacuum_im_coincidence(omega: f64) -> Matrix3<f64> {
    Matrix3::identity() * (omega / (6.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::{ConstantMedium, LorentzMedium};

    #[test]
    fn vacuum_1d_coincidence() {
        let v = LorentzMedium::vacuum();
        let g = bulk_1d(0.4, 0.4, 2.0, &v).unwrap();
        assert!((g - I / (2.0 * 2.0)).norm() < 1e-15);
    }

    #[test]
    fn absorbing_1d_decay() {
        let m = LorentzMedium::new(0.5, 0.1).unwrap();
        let w = 1.05;
        let n = m.index(w);
        let g0 = bulk_1d(0.0, 0.0, w, &m).unwrap().norm();
        for d in [0.5, 1.0, 3.0] {
            let g = bulk_1d(d, 0.0, w, &m).unwrap().norm();
            assert!((g / g0 - (-n.im * w * d).exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn split_sums_to_full() {
        let m = LorentzMedium::new(0.5, 0.05).unwrap();
        for (w, rho) in [
            (0.7, Vector3::new(0.3, -0.2, 0.9)),
            (1.05, Vector3::new(2.0, 0.1, -0.4)),
            (3.0, Vector3::new(0.01, 0.02, 0.0)),
        ] {
            let full = bulk_iso(rho, w, &m).unwrap();
            let (l, t) = bulk_iso_split(rho, w, &m).unwrap();
            let diff = (full.entries - l.entries - t.entries).norm() / full.entries.norm();
            assert!(diff < 1e-10, "relative mismatch {diff}");
        }
    }

    #[test]
    fn transverse_imaginary_part_approaches_coincidence() {
        let m = ConstantMedium { eps: Complex64::new(4.0, 0.0) };
        let w = 1.0;
        let (_, t) = bulk_iso_split(Vector3::new(1e-3, 2e-3, -1e-3), w, &m).unwrap();
        let lim = bulk_iso_im_coincidence(w, &m).unwrap();
        assert!((t.im() - lim).norm() < 1e-5);
        assert!((lim[(0, 0)] - 2.0 / (6.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn vacuum_full_tensor_limit() {
        let v = LorentzMedium::vacuum();
        let g = bulk_iso(Vector3::new(0.0, 1e-4, 0.0), 1.3, &v).unwrap();
        assert!((g.im() - vacuum_im_coincidence(1.3)).norm() < 1e-8);
    }

    #[test]
    fn coincidence_is_rejected() {
        let v = LorentzMedium::vacuum();
        assert!(bulk_iso(Vector3::zeros(), 1.0, &v).is_err());
        assert!(bulk_1d(0.0, 0.0, 0.0, &v).is_err());
    }
}
