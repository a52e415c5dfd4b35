//! Centre-of-sphere reflection coefficient C₁ᴺ for a vacuum cavity in an absorbing
//! medium and for a vacuum/wall/vacuum three-layer sphere.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::{Geometry, GreenTensor3};
use crate::error::{Error, Result};
use crate::media::{Dielectric, Medium};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Empty sphere of radius R inside a homogeneous medium.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCavity {
    pub radius: f64,
    pub medium: Medium,
}

impl SphericalCavity {
    pub fn new(radius: f64, medium: impl Into<Medium>) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::validation(format!("cavity radius must be positive, got {radius}")));
        }
        Ok(SphericalCavity { radius, medium: medium.into() })
    }
}

/// Spherical shell R₂ < r < R₁ of wall material, vacuum inside and outside.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalResonator {
    pub r1: f64,
    pub r2: f64,
    pub wall: Medium,
}

impl SphericalResonator {
    pub fn new(r1: f64, r2: f64, wall: impl Into<Medium>) -> Result<Self> {
        if !(r2 > 0.0 && r2.is_finite()) {
            return Err(Error::validation(format!("inner radius must be positive, got {r2}")));
        }
        if !(r1 > r2 && r1.is_finite()) {
            return Err(Error::validation(format!("outer radius {r1} must exceed inner radius {r2}")));
        }
        Ok(SphericalResonator { r1, r2, wall: wall.into() })
    }
}

/// Riccati functions of order one.
///
/// ψ(z) = z j₁(z), ξ(z) = z h₁⁽¹⁾(z), ζ(z) = z h₁⁽²⁾(z). The `_poly` variants drop
/// the factor e^{±iz} so that deep evanescent arguments neither overflow nor underflow.
pub mod riccati {
    use num_complex::Complex64;

    use crate::numerics::spherical_bessel_j;

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    pub fn psi(z: Complex64) -> Complex64 {
        z * spherical_bessel_j(1, z).expect("order 1 is supported")
    }

    pub fn psi_prime(z: Complex64) -> Complex64 {
        z * spherical_bessel_j(0, z).expect("order 0 is supported") - spherical_bessel_j(1, z).expect("order 1")
    }

    /// ξ(z) = e^{iz} · xi_poly(z).
    pub fn xi_poly(z: Complex64) -> Complex64 {
        -(1.0 + I / z)
    }

    pub fn xi_prime_poly(z: Complex64) -> Complex64 {
        -(I - 1.0 / z - I / (z * z))
    }

    /// ζ(z) = e^{−iz} · zeta_poly(z).
    pub fn zeta_poly(z: Complex64) -> Complex64 {
        -(1.0 - I / z)
    }

    pub fn zeta_prime_poly(z: Complex64) -> Complex64 {
        -(-I - 1.0 / z + I / (z * z))
    }

    pub fn xi(z: Complex64) -> Complex64 {
        (I * z).exp() * xi_poly(z)
    }

    pub fn xi_prime(z: Complex64) -> Complex64 {
        (I * z).exp() * xi_prime_poly(z)
    }

    pub fn zeta(z: Complex64) -> Complex64 {
        (-I * z).exp() * zeta_poly(z)
    }

    pub fn zeta_prime(z: Complex64) -> Complex64 {
        (-I * z).exp() * zeta_prime_poly(z)
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("frequency must be positive, got {omega}")))
    }
}

/// C₁ᴺ(ω) of the two-layer (cavity) geometry in closed form.
pub fn cavity_c1n(cav: &SphericalCavity, omega: f64) -> Result<Complex64> {
    check_omega(omega)?;
    let n = cav.medium.index(omega);
    if (n * n - 1.0).norm() < 1e-12 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rho = cav.radius * omega;
    let (s, c) = rho.sin_cos();
    let num = (I + rho * (n + 1.0) - I * rho * rho * n - rho.powi(3) * n * n / (n + 1.0)) * (I * rho).exp();
    let den = s - rho * (c + I * n * s) + I * rho * rho * n * c - rho.powi(3) * (c - I * n * s) * n * n / (n * n - 1.0);
    Ok(num / den)
}

/// C₁ᴺ(ω) of the three-layer sphere from spherical-wave boundary matching.
///
/// The wall field ξ(nωr) + b ζ(nωr) is fixed by the outgoing-wave condition at R₁;
/// its logarithmic derivative at R₂ then sets the reflection seen from the centre.
/// Only the ratio e^{2in ω(R₁ − R₂)}, which is small for thick absorbing walls, enters.
pub fn resonator_c1n(res: &SphericalResonator, omega: f64) -> Result<Complex64> {
    use riccati::*;
    check_omega(omega)?;
    let n = res.wall.index(omega);
    if (n * n - 1.0).norm() < 1e-12 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let z1 = n * (omega * res.r1);
    let z2 = n * (omega * res.r2);
    let rho1 = Complex64::new(omega * res.r1, 0.0);
    let rho2 = Complex64::new(omega * res.r2, 0.0);

    let (x1, dx1) = (xi_poly(rho1), xi_prime_poly(rho1));
    let num = n * xi_poly(z1) * dx1 - xi_prime_poly(z1) * x1;
    let den = zeta_prime_poly(z1) * x1 - n * zeta_poly(z1) * dx1;
    if den.norm() == 0.0 || !den.re.is_finite() {
        return Err(Error::NonConvergence {
            what: "three-layer boundary matching (outer interface)".into(),
            estimate: num.norm(),
            error: f64::INFINITY,
        });
    }
    let f = (2.0 * I * (z1 - z2)).exp() * (num / den);
    let u = xi_poly(z2) + f * zeta_poly(z2);
    let du = xi_prime_poly(z2) + f * zeta_prime_poly(z2);
    let y = du / (n * u);
    let c = (y * xi(rho2) - xi_prime(rho2)) / (psi_prime(rho2) - y * psi(rho2));
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::NonConvergence {
            what: "three-layer boundary matching (inner interface)".into(),
            estimate: f64::NAN,
            error: f64::INFINITY,
        });
    }
    Ok(c)
}

fn centre_tensor(c1n: Complex64, omega: f64, geometry: Geometry) -> GreenTensor3 {
    GreenTensor3 {
        entries: Matrix3::identity() * (I * omega * c1n / (6.0 * PI)),
        geometry,
        r: Vector3::zeros(),
        r_prime: Vector3::zeros(),
    }
}

/// Scattering part of G at the cavity centre, (iω/6π) C₁ᴺ I.
pub fn cavity_scattering_tensor(cav: &SphericalCavity, omega: f64) -> Result<GreenTensor3> {
    Ok(centre_tensor(cavity_c1n(cav, omega)?, omega, Geometry::SphericalCavity))
}

/// Scattering part of G at the resonator centre, (iω/6π) C₁ᴺ I.
pub fn resonator_scattering_tensor(res: &SphericalResonator, omega: f64) -> Result<GreenTensor3> {
    Ok(centre_tensor(resonator_c1n(res, omega)?, omega, Geometry::SphericalResonator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::{ConstantMedium, LorentzMedium};

    #[test]
    fn riccati_wronskian() {
        // ψξ′ − ψ′ξ = i
        for z in [0.3, 1.7, 12.0] {
            let z = Complex64::new(z, 0.0);
            let w = riccati::psi(z) * riccati::xi_prime(z) - riccati::psi_prime(z) * riccati::xi(z);
            assert!((w - I).norm() < 1e-12);
        }
    }

    #[test]
    fn psi_is_the_regular_part() {
        // ψ = (ξ + ζ)/2
        let z = Complex64::new(2.3, 0.7);
        let half = (riccati::xi(z) + riccati::zeta(z)) / 2.0;
        assert!((riccati::psi(z) - half).norm() < 1e-13);
        let dhalf = (riccati::xi_prime(z) + riccati::zeta_prime(z)) / 2.0;
        assert!((riccati::psi_prime(z) - dhalf).norm() < 1e-13);
    }

    #[test]
    fn vacuum_surroundings_do_not_reflect() {
        let cav = SphericalCavity::new(1.0, LorentzMedium::vacuum()).unwrap();
        assert_eq!(cavity_c1n(&cav, 0.8).unwrap(), Complex64::new(0.0, 0.0));
        let near = SphericalCavity::new(1.0, ConstantMedium { eps: Complex64::new(1.0 + 2e-6, 0.0) }).unwrap();
        assert!(cavity_c1n(&near, 0.8).unwrap().norm() < 1e-4);
    }

    #[test]
    fn geometry_validation() {
        assert!(SphericalCavity::new(-1.0, LorentzMedium::vacuum()).is_err());
        assert!(SphericalResonator::new(1.0, 2.0, LorentzMedium::vacuum()).is_err());
        assert!(SphericalResonator::new(2.0, 0.0, LorentzMedium::vacuum()).is_err());
    }
}
