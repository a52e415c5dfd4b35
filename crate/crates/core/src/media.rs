//! Causal permittivity models, the refractive index branch and Kramers–Kronig checks.
//!
//! Units: c = 1 and the transverse resonance ω_T = 1, so lengths are in c/ω_T and
//! λ_T = 2π.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate_principal_value_with_breaks, QuadratureConfig};

/// Anything with a complex permittivity ε(ω) defined for ω > 0.
pub trait Dielectric: std::fmt::Debug + Send + Sync {
    /// ε(ω) for ω > 0. Callers are responsible for the sign of ω; see [`permittivity`].
    fn epsilon(&self, omega: f64) -> Complex64;

    /// Resonance centres, used as break points by integrators.
    fn resonances(&self) -> Vec<f64> {
        Vec::new()
    }

    /// n(ω) on the branch Im n ≥ 0.
    fn index(&self, omega: f64) -> Complex64 {
        index_of(self.epsilon(omega))
    }
}

/// Single-resonance Lorentz oscillator ε = 1 + ω_P²/(ω_T² − ω² − iγω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMedium {
    pub omega_t: f64,
    pub omega_p: f64,
    pub gamma: f64,
}

impl LorentzMedium {
    /// Medium with ω_T = 1, the global frequency unit.
    pub fn new(omega_p: f64, gamma: f64) -> Result<Self> {
        Self::with_resonance(1.0, omega_p, gamma)
    }

    pub fn with_resonance(omega_t: f64, omega_p: f64, gamma: f64) -> Result<Self> {
        if !(omega_t > 0.0 && omega_t.is_finite()) {
            return Err(Error::validation(format!("omega_t must be positive, got {omega_t}")));
        }
        if !(omega_p >= 0.0 && omega_p.is_finite()) {
            return Err(Error::validation(format!("omega_p must be non-negative, got {omega_p}")));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::validation(format!("gamma must be non-negative, got {gamma}")));
        }
        Ok(LorentzMedium { omega_t, omega_p, gamma })
    }

    pub fn vacuum() -> Self {
        LorentzMedium { omega_t: 1.0, omega_p: 0.0, gamma: 0.0 }
    }
}

impl Dielectric for LorentzMedium {
    fn epsilon(&self, omega: f64) -> Complex64 {
        if self.omega_p == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let den = Complex64::new(self.omega_t * self.omega_t - omega * omega, -self.gamma * omega);
        1.0 + self.omega_p * self.omega_p / den
    }

    fn resonances(&self) -> Vec<f64> {
        if self.omega_p > 0.0 {
            vec![self.omega_t]
        } else {
            Vec::new()
        }
    }
}

/// Sum of Lorentz resonances, ε = Σ εᵢ − (N − 1).
#[derive(Debug, Clone, PartialEq)]
pub struct MultiLorentz {
    pub terms: Vec<LorentzMedium>,
}

impl MultiLorentz {
    pub fn new(terms: Vec<LorentzMedium>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::validation("a multi-resonance medium needs at least one term"));
        }
        Ok(MultiLorentz { terms })
    }
}

impl Dielectric for MultiLorentz {
    fn epsilon(&self, omega: f64) -> Complex64 {
        let n = self.terms.len() as f64;
        self.terms.iter().map(|t| t.epsilon(omega)).sum::<Complex64>() - (n - 1.0)
    }

    fn resonances(&self) -> Vec<f64> {
        self.terms.iter().flat_map(|t| t.resonances()).collect()
    }
}

/// Frequency-independent permittivity, for model studies at a single frequency.
/// It is not causal over the whole axis and is rejected by [`kk_reconstruct`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantMedium {
    pub eps: Complex64,
}

impl Dielectric for ConstantMedium {
    fn epsilon(&self, _omega: f64) -> Complex64 {
        self.eps
    }
}

/// The media a scenario can name.
#[derive(Debug, Clone, PartialEq)]
pub enum Medium {
    Lorentz(LorentzMedium),
    MultiLorentz(MultiLorentz),
    Constant(ConstantMedium),
}

impl Medium {
    pub fn is_causal(&self) -> bool {
        !matches!(self, Medium::Constant(_))
    }
}

impl Dielectric for Medium {
    fn epsilon(&self, omega: f64) -> Complex64 {
        match self {
            Medium::Lorentz(m) => m.epsilon(omega),
            Medium::MultiLorentz(m) => m.epsilon(omega),
            Medium::Constant(m) => m.epsilon(omega),
        }
    }

    fn resonances(&self) -> Vec<f64> {
        match self {
            Medium::Lorentz(m) => m.resonances(),
            Medium::MultiLorentz(m) => m.resonances(),
            Medium::Constant(m) => m.resonances(),
        }
    }
}

impl From<LorentzMedium> for Medium {
    fn from(m: LorentzMedium) -> Self {
        Medium::Lorentz(m)
    }
}

impl From<MultiLorentz> for Medium {
    fn from(m: MultiLorentz) -> Self {
        Medium::MultiLorentz(m)
    }
}

impl From<ConstantMedium> for Medium {
    fn from(m: ConstantMedium) -> Self {
        Medium::Constant(m)
    }
}

/// Complex refractive index n = n_R + i n_I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexIndex {
    pub n_r: f64,
    pub n_i: f64,
}

impl ComplexIndex {
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.n_r, self.n_i)
    }
}

/// ε(ω) with the domain check ω > 0.
pub fn permittivity<M: Dielectric + ?Sized>(m: &M, omega: f64) -> Result<Complex64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain(format!(
            "permittivity needs omega > 0, got {omega}; use eps(-omega*) = eps*(omega) for negative frequencies"
        )));
    }
    Ok(m.epsilon(omega))
}

/// √ε on the branch Im n ≥ 0, without validation.
pub fn index_of(eps: Complex64) -> Complex64 {
    let n = eps.sqrt();
    if n.im < 0.0 {
        -n
    } else {
        n
    }
}

/// n = √ε with Im n ≥ 0. On the negative real axis n_R is set to 0 and a warning is logged.
pub fn refractive_index(eps: Complex64) -> Result<ComplexIndex> {
    if eps == Complex64::new(0.0, 0.0) {
        return Err(Error::domain("refractive index of eps = 0 is undefined"));
    }
    let n = index_of(eps);
    if eps.im == 0.0 && eps.re < 0.0 {
        log::warn!("eps = {} lies on the branch cut; using n_R = 0+", eps.re);
        return Ok(ComplexIndex { n_r: 0.0, n_i: n.im.abs() });
    }
    Ok(ComplexIndex { n_r: n.re, n_i: n.im })
}

/// Band gap [ω_T, ω_L] with ω_L = √(ω_T² + ω_P²).
pub fn band_gap(m: &LorentzMedium) -> (f64, f64) {
    (m.omega_t, (m.omega_t * m.omega_t + m.omega_p * m.omega_p).sqrt())
}

/// Upper limit of the Kramers–Kronig integral.
pub const KK_CUTOFF: f64 = 1e3;

/// ε_R(ω) − 1 rebuilt from ε_I alone.
///
/// Uses the odd symmetry of ε_I to fold the Hilbert transform onto (0, ∞):
/// (2/π) 𝒫∫ ω′ε_I(ω′)/(ω′² − ω²) dω′, truncated at [`KK_CUTOFF`] with the tail
/// estimated from ε_I ∝ ω′⁻³.
pub fn kk_reconstruct<M: Dielectric + ?Sized>(m: &M, omega: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(omega > 0.0 && omega < KK_CUTOFF) {
        return Err(Error::domain(format!("kk_reconstruct needs 0 < omega < {KK_CUTOFF}, got {omega}")));
    }
    let f = |w: f64| {
        if w <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let v = 2.0 / PI * w * m.epsilon(w).im / (w * w - omega * omega);
        Complex64::new(v, 0.0)
    };
    let hints = m.resonances();
    let main = integrate_principal_value_with_breaks(f, omega, 0.0, KK_CUTOFF, &hints, cfg)?;
    let tail = 2.0 / PI * m.epsilon(KK_CUTOFF).im / 3.0;
    Ok(main.re + tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_and_high_frequency_limits() {
        let m = LorentzMedium::new(0.5, 0.05).unwrap();
        assert!((m.epsilon(1e-9) - Complex64::new(1.25, 0.0)).norm() < 1e-9);
        assert!((m.epsilon(100.0) - 1.0).norm() < 3e-5);
    }

    #[test]
    fn value_at_resonance() {
        let m = LorentzMedium::new(0.46, 0.05).unwrap();
        let e = m.epsilon(1.0);
        assert!((e - Complex64::new(1.0, 4.232)).norm() < 1e-12);
    }

    #[test]
    fn negative_frequency_is_a_domain_error() {
        let m = LorentzMedium::new(0.5, 0.1).unwrap();
        assert!(matches!(permittivity(&m, -1.0), Err(Error::Domain(_))));
        assert!(permittivity(&m, 0.0).is_err());
    }

    #[test]
    fn index_examples() {
        let n = refractive_index(Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!((n.n_r, n.n_i), (1.0, 0.0));
        let n = refractive_index(Complex64::new(0.0, 2.0)).unwrap();
        assert!((n.n_r - 1.0).abs() < 1e-15 && (n.n_i - 1.0).abs() < 1e-15);
        let n = refractive_index(Complex64::new(4.0, 0.0)).unwrap();
        assert_eq!((n.n_r, n.n_i), (2.0, 0.0));
        let n = refractive_index(Complex64::new(-4.0, 0.0)).unwrap();
        assert_eq!((n.n_r, n.n_i), (0.0, 2.0));
        let n = refractive_index(Complex64::new(-4.0, -0.0)).unwrap();
        assert_eq!((n.n_r, n.n_i), (0.0, 2.0));
        assert!(refractive_index(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn band_gap_examples() {
        let (t, l) = band_gap(&LorentzMedium::new(0.5, 0.1).unwrap());
        assert_eq!(t, 1.0);
        assert!((l - 1.118_033_988_7).abs() < 1e-10);
        assert_eq!(band_gap(&LorentzMedium::vacuum()), (1.0, 1.0));
        let (_, l) = band_gap(&LorentzMedium::new(0.46, 0.0).unwrap());
        assert!((l - 1.1007).abs() < 1e-4);
    }

    #[test]
    fn invalid_parameters() {
        assert!(LorentzMedium::new(-0.1, 0.1).is_err());
        assert!(LorentzMedium::new(0.5, -0.1).is_err());
        assert!(MultiLorentz::new(vec![]).is_err());
    }

    #[test]
    fn multi_lorentz_reduces_to_single() {
        let a = LorentzMedium::new(0.5, 0.1).unwrap();
        let v = LorentzMedium::vacuum();
        let m = MultiLorentz::new(vec![a, v]).unwrap();
        for w in [0.3, 1.0, 2.2] {
            assert!((m.epsilon(w) - a.epsilon(w)).norm() < 1e-15);
        }
    }

    #[test]
    fn kk_examples() {
        let cfg = QuadratureConfig::default();
        let m = LorentzMedium::new(0.5, 0.1).unwrap();
        let want = m.epsilon(0.5).re - 1.0;
        let got = kk_reconstruct(&m, 0.5, &cfg).unwrap();
        assert!(((got - want) / want).abs() < 1e-3);
        assert_eq!(kk_reconstruct(&LorentzMedium::vacuum(), 0.5, &cfg).unwrap(), 0.0);
        let far = kk_reconstruct(&m, 10.0, &cfg).unwrap();
        assert!(far < 0.0);
        assert!(((far - (m.epsilon(10.0).re - 1.0)) / far).abs() < 1e-3);
    }
}
