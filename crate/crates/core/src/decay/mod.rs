//! Spontaneous-decay rates, the medium-induced Lamb shift and upper-state dynamics
//! of a two-level atom. Rates are returned relative to the free-space rate Γ₀.

mod dynamics;

use std::cell::RefCell;
use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::{cavity_c1n, halfspace_reflection, resonator_c1n, SphericalCavity, SphericalResonator};
use crate::media::{index_of, Dielectric};
use crate::numerics::{integrate_principal_value_with_breaks, QuadratureConfig};

pub use dynamics::{
    default_window, rabi_frequency, resonance_width, single_resonance_dynamics, single_resonance_kernel,
    upper_state_dynamics, SpectralKernel,
};

/// Two-level atom: transition frequency, dipole orientation and the strength
/// Γ₀λ_T/(2c) used by the figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dipole {
    pub omega_a: f64,
    pub d_hat: Vector3<f64>,
    pub gamma0_scale: f64,
}

impl Dipole {
    pub fn new(omega_a: f64, d_hat: Vector3<f64>, gamma0_scale: f64) -> Result<Self> {
        if !(omega_a > 0.0 && omega_a.is_finite()) {
            return Err(Error::validation(format!("omega_A must be positive, got {omega_a}")));
        }
        if (d_hat.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::validation(format!("dipole orientation must be a unit vector, |d| = {}", d_hat.norm())));
        }
        if !(gamma0_scale >= 0.0 && gamma0_scale.is_finite()) {
            return Err(Error::validation("gamma0_scale must be non-negative"));
        }
        Ok(Dipole { omega_a, d_hat, gamma0_scale })
    }

    /// Dipole along z with unit strength scale.
    pub fn along_z(omega_a: f64) -> Result<Self> {
        Self::new(omega_a, Vector3::z(), 1.0)
    }

    /// Free-space rate Γ₀ in units of ω_T, from Γ₀λ_T/(2c) = gamma0_scale.
    pub fn gamma0_absolute(&self) -> f64 {
        self.gamma0_scale / PI
    }

    /// Γ₀ the same dipole moment would have at frequency ω.
    pub fn free_rate_at(&self, omega: f64) -> f64 {
        self.gamma0_absolute() * (omega / self.omega_a).powi(3)
    }

    /// Same dipole moment, different transition frequency.
    pub fn retuned(&self, omega_a: f64) -> Result<Self> {
        Self::new(omega_a, self.d_hat, self.gamma0_scale * (omega_a / self.omega_a).powi(3))
    }
}

/// Evaluation mode for the near-surface rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceMode {
    Exact,
    /// Leading z⁻³ term only.
    Asymptotic,
}

/// Evaluation mode for the real-cavity rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CavityMode {
    Exact,
    /// Four-term small-radius expansion.
    Expansion,
}

/// Γ₀/Γ₀ = 1: all rates are normalised to the free-space value.
pub fn gamma_free(_dip: &Dipole) -> f64 {
    1.0
}

fn check_psd(m: &Matrix3<f64>) -> Result<()> {
    let scale = m.abs().max().max(f64::MIN_POSITIVE);
    if (m - m.transpose()).abs().max() > 1e-10 * scale {
        return Err(Error::validation("Im G must be symmetric"));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigenvalues();
    if eig.min() < -1e-10 * scale {
        return Err(Error::validation(format!("Im G is not positive semidefinite (eigenvalue {:e})", eig.min())));
    }
    Ok(())
}

/// Γ/Γ₀ = (6π/ω_A) d̂·Im G·d̂.
pub fn gamma_from_green(dip: &Dipole, im_g: &Matrix3<f64>) -> Result<f64> {
    check_psd(im_g)?;
    Ok(6.0 * PI / dip.omega_a * dip.d_hat.dot(&(im_g * dip.d_hat)))
}

/// Medium-induced Lamb shift δω/Γ₀ from the scattering part Im R(ω) over `window`.
///
/// Only the scattering part may be passed: with the free-space Im G the principal
/// value integral diverges. With the convention of the decay kernel the atomic
/// transition is shifted to ω_A − δω.
pub fn lamb_shift<F>(dip: &Dipole, im_r: F, window: (f64, f64), cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<Matrix3<f64>>,
{
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < dip.omega_a && dip.omega_a < hi) {
        return Err(Error::domain(format!(
            "Lamb-shift window ({lo}, {hi}) must contain omega_A = {} and start above 0",
            dip.omega_a
        )));
    }
    let failure = RefCell::new(None);
    let wa = dip.omega_a;
    let integrand = |w: f64| match im_r(w) {
        Ok(m) => {
            let v = 3.0 / wa.powi(3) * w * w * dip.d_hat.dot(&(m * dip.d_hat)) / (w - wa);
            Complex64::new(v, 0.0)
        }
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let v = integrate_principal_value_with_breaks(integrand, wa, lo, hi, &[], cfg)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(v.re)
}

/// Γ/Γ₀ of an atom at height z above a half-space.
pub fn gamma_near_surface<M: Dielectric + ?Sized>(
    dip: &Dipole,
    z: f64,
    m: &M,
    mode: SurfaceMode,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let w = dip.omega_a;
    let d = dip.d_hat;
    match mode {
        SurfaceMode::Exact => {
            let (xx, zz) = halfspace_reflection(z, w, m, cfg)?;
            let im = Matrix3::from_diagonal(&Vector3::new(xx.im, xx.im, zz.im));
            Ok(1.0 + 6.0 * PI / w * d.dot(&(im * d)))
        }
        SurfaceMode::Asymptotic => {
            if !(z > 0.0) {
                return Err(Error::domain("height above the interface must be positive"));
            }
            let eps = m.epsilon(w);
            Ok(3.0 / 8.0 * (1.0 + d.z * d.z) * (w * z).powi(-3) * eps.im / (eps + 1.0).norm_sqr())
        }
    }
}

/// Γ/Γ₀ at the centre of a spherical cavity.
pub fn gamma_real_cavity(dip: &Dipole, cav: &SphericalCavity, mode: CavityMode) -> Result<f64> {
    match mode {
        CavityMode::Exact => Ok(1.0 + cavity_c1n(cav, dip.omega_a)?.re),
        CavityMode::Expansion => {
            let w = dip.omega_a;
            if !(w > 0.0) {
                return Err(Error::domain("omega_A must be positive"));
            }
            let eps = cav.medium.epsilon(w);
            let n = index_of(eps);
            let rho = cav.radius * w;
            Ok(real_cavity_expansion(eps, n, rho))
        }
    }
}

fn real_cavity_expansion(eps: Complex64, n: Complex64, rho: f64) -> f64 {
    let (er, ei) = (eps.re, eps.im);
    let a2 = eps.norm_sqr();
    let d2 = (2.0 * eps + 1.0).norm_sqr();
    let d4 = d2 * d2;
    let t1 = 9.0 * ei / d2 / rho.powi(3);
    let t2 = 9.0 * ei * (28.0 * a2 + 16.0 * er + 1.0) / (5.0 * d4) / rho;
    let t3 = 9.0 * n.re / d4 * (4.0 * a2 * a2 + 4.0 * er * a2 + er * er - ei * ei);
    let t4 = -9.0 * n.im * ei / d4 * (4.0 * a2 + 2.0 * er);
    t1 + t2 + t3 + t4
}

/// Real-cavity local-field factor ξ = (3n²/(2n² + 1))².
pub fn local_field_factor(n_real: f64) -> Result<f64> {
    if !(n_real > 0.0 && n_real.is_finite()) {
        return Err(Error::domain(format!("refractive index must be positive, got {n_real}")));
    }
    let n2 = n_real * n_real;
    Ok((3.0 * n2 / (2.0 * n2 + 1.0)).powi(2))
}

/// Γ/Γ₀ at the centre of a resonator with a wall thick enough that no light leaks out.
///
/// Written as n_R/[(cos t + n_I sin t)² + n_R² sin² t], t = R₂ω_A, which is the
/// tan-form multiplied through by cos² t and stays finite at the poles of tan.
pub fn gamma_resonator_thickwall<M: Dielectric + ?Sized>(dip: &Dipole, r2: f64, m: &M) -> Result<f64> {
    if !(r2 > 0.0) {
        return Err(Error::domain("inner radius must be positive"));
    }
    let w = dip.omega_a;
    if r2 * w < 10.0 {
        log::warn!("thick-wall formula used at R2*omega_A = {:.3}, outside its validity range", r2 * w);
    }
    let n = m.index(w);
    let (s, c) = (r2 * w).sin_cos();
    Ok(n.re / ((c + n.im * s).powi(2) + n.re * n.re * s * s))
}

/// Γ/Γ₀ at the centre of the three-layer resonator.
pub fn gamma_resonator(dip: &Dipole, res: &SphericalResonator) -> Result<f64> {
    Ok(1.0 + resonator_c1n(res, dip.omega_a)?.re)
}
