//! Quantum states of the field after lossy four-port devices, on truncated Fock spaces.
//!
//! Multimode bases are ordered with the first mode most significant, so a two-mode
//! basis state |n₁n₂⟩ with per-mode dimension d has index d·n₁ + n₂.

mod entanglement;
mod oracle;
mod wigner;

use nalgebra::{DMatrix, DVector, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourport::FourPortMatrices;
use crate::numerics::{hermitian_eigen, hermiticity_defect};

pub use entanglement::{entanglement_re, ReeConfig, ReeResult};
pub use oracle::{mode_mix_oracle, FockAmplitudes};
pub use wigner::{wigner_displaced, wigner_laguerre, wigner_s};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Density matrix on a product of truncated Fock spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    mode_dims: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

impl FockDensity {
    /// Validates Hermiticity (1e-12), unit trace (1e-10) and positivity (−1e-10).
    pub fn new(mode_dims: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let rho = Self::unchecked(mode_dims, matrix)?;
        let h = hermiticity_defect(&rho.matrix);
        if h > 1e-12 {
            return Err(Error::validation(format!("density matrix is not Hermitian (defect {h:e})")));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::validation(format!("density matrix has trace {tr}")));
        }
        let min = rho.min_eigenvalue();
        if min < -1e-10 {
            return Err(Error::validation(format!("density matrix has negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub(crate) fn unchecked(mode_dims: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let d: usize = mode_dims.iter().product();
        if mode_dims.is_empty() || mode_dims.contains(&0) || matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::validation(format!(
                "mode dimensions {mode_dims:?} do not match a {}x{} matrix",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(FockDensity { mode_dims, matrix })
    }

    /// |ψ⟩⟨ψ| for a normalised vector.
    pub fn pure(mode_dims: Vec<usize>, psi: &[Complex64]) -> Result<Self> {
        let v = DVector::from_column_slice(psi);
        Self::new(mode_dims, &v * v.adjoint())
    }

    /// Diagonal single-mode state Σ p_k |k⟩⟨k|.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let m =
            DMatrix::from_diagonal(&DVector::from_iterator(probs.len(), probs.iter().map(|&p| Complex64::new(p, 0.0))));
        Self::new(vec![probs.len()], m)
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.matrix[(i, j)].norm() <= tol))
    }

    /// Occupation numbers of a basis index.
    pub fn occupations(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.mode_dims.len()];
        let mut rest = index;
        for (k, d) in self.mode_dims.iter().enumerate().rev() {
            out[k] = rest % d;
            rest /= d;
        }
        out
    }

    /// Reduced state of one mode.
    pub fn marginal(&self, mode: usize) -> Result<FockDensity> {
        if mode >= self.mode_dims.len() {
            return Err(Error::domain(format!("mode {mode} out of range")));
        }
        let dm = self.mode_dims[mode];
        let mut out = DMatrix::from_element(dm, dm, ZERO);
        for i in 0..self.dim() {
            let oi = self.occupations(i);
            for j in 0..self.dim() {
                let oj = self.occupations(j);
                let same = oi.iter().zip(&oj).enumerate().all(|(k, (a, b))| k == mode || a == b);
                if same {
                    out[(oi[mode], oj[mode])] += self.matrix[(i, j)];
                }
            }
        }
        FockDensity::unchecked(vec![dm], out)
    }

    /// Single-mode ⟨n⟩.
    pub fn mean_photon_number(&self) -> f64 {
        (0..self.dim()).map(|i| self.occupations(i).iter().sum::<usize>() as f64 * self.matrix[(i, i)].re).sum()
    }
}

/// The four Bell basis states of two field modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PhiPlus, BellKind::PhiMinus];

    pub fn is_psi(self) -> bool {
        matches!(self, BellKind::PsiPlus | BellKind::PsiMinus)
    }

    fn sign(self) -> f64 {
        match self {
            BellKind::PsiPlus | BellKind::PhiPlus => 1.0,
            BellKind::PsiMinus | BellKind::PhiMinus => -1.0,
        }
    }

    /// Amplitudes in the basis |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn amplitudes(self) -> [Complex64; 4] {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let s = self.sign();
        if self.is_psi() {
            [ZERO, h, h * s, ZERO]
        } else {
            [h, ZERO, ZERO, h * s]
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
        }
    }
}

/// Coherent amplitudes of the outgoing field, c′ = T c + A d.
pub fn coherent_output(fm: &FourPortMatrices, c: Vector2<Complex64>, d: Vector2<Complex64>) -> Vector2<Complex64> {
    fm.t * c + fm.a * d
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Output of one channel for an n-photon Fock input, Σ_k C(n,k) t2ᵏ(1 − t2)ⁿ⁻ᵏ |k⟩⟨k|.
pub fn fock_loss(n: usize, t2: f64) -> Result<FockDensity> {
    if !(0.0..=1.0).contains(&t2) {
        return Err(Error::domain(format!("|T|^2 must lie in [0, 1], got {t2}")));
    }
    let probs: Vec<f64> =
        (0..=n).map(|k| binomial(n, k) * t2.powi(k as i32) * (1.0 - t2).powi((n - k) as i32)).collect();
    FockDensity::diagonal(&probs)
}

/// Photon-number cutoff used for a cat state of amplitude γ.
pub fn cat_cutoff(gamma: Complex64) -> usize {
    let g = gamma.norm();
    (g * g + 8.0 * g + 10.0).ceil() as usize
}

/// Fock coefficients of the coherent state |β⟩ up to `cutoff`.
pub fn coherent_vector(beta: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(cutoff + 1);
    let mut c = Complex64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    v.push(c);
    for k in 1..=cutoff {
        c = c * beta / (k as f64).sqrt();
        v.push(c);
    }
    v
}

/// Channel output for the even cat input (|γ⟩ + |−γ⟩)/√N and channel transmission T.
pub fn cat_output(gamma: Complex64, t: Complex64) -> Result<FockDensity> {
    if !(t.norm() <= 1.0 + 1e-12) {
        return Err(Error::domain(format!("channel transmission must satisfy |T| <= 1, got {}", t.norm())));
    }
    let cutoff = cat_cutoff(gamma);
    let g2 = gamma.norm_sqr();
    let norm = 2.0 * (1.0 + (-2.0 * g2).exp());
    let w = (-2.0 * g2 * (1.0 - t.norm_sqr())).exp();
    let plus = DVector::from_vec(coherent_vector(gamma * t, cutoff));
    let minus = DVector::from_vec(coherent_vector(-gamma * t, cutoff));
    let m = (&plus * plus.adjoint()
        + &minus * minus.adjoint()
        + (&plus * minus.adjoint() + &minus * plus.adjoint()) * Complex64::new(w, 0.0))
        / Complex64::new(norm, 0.0);
    FockDensity::new(vec![cutoff + 1], m)
}

/// Two-mode output when a Bell state passes two devices with transmissions T₁ and T₂.
pub fn bell_output(kind: BellKind, t1: Complex64, t2: Complex64) -> Result<FockDensity> {
    for t in [t1, t2] {
        if !(t.norm() <= 1.0 + 1e-12) {
            return Err(Error::domain(format!("device transmission must satisfy |T| <= 1, got {}", t.norm())));
        }
    }
    let (a, b) = (t1.norm_sqr(), t2.norm_sqr());
    let s = kind.sign();
    let mut m = DMatrix::from_element(4, 4, ZERO);
    let v = if kind.is_psi() {
        m[(0, 0)] = Complex64::new(0.5 * (2.0 - a - b), 0.0);
        [ZERO, t2, t1 * s, ZERO]
    } else {
        m[(0, 0)] = Complex64::new(0.5 * (1.0 - a) * (1.0 - b), 0.0);
        m[(2, 2)] = Complex64::new(0.5 * a * (1.0 - b), 0.0);
        m[(1, 1)] = Complex64::new(0.5 * b * (1.0 - a), 0.0);
        [Complex64::new(1.0, 0.0), ZERO, ZERO, t1 * t2 * s]
    };
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] += 0.5 * v[i] * v[j].conj();
        }
    }
    FockDensity::new(vec![2, 2], m)
}

/// Convexity upper bound on the entanglement for equal devices T₁ = T₂ = T.
pub fn entanglement_bounds(kind: BellKind, t: Complex64) -> f64 {
    let p = t.norm_sqr();
    if kind.is_psi() {
        p * std::f64::consts::LN_2
    } else {
        let q = p * p;
        let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
        0.5 * (xlnx(1.0 + q) - xlnx(q))
    }
}

/// S(ρ‖σ) = Tr ρ(ln ρ − ln σ); +∞ when supp ρ ⊄ supp σ.
pub fn relative_entropy(rho: &FockDensity, sigma: &FockDensity) -> Result<f64> {
    if rho.mode_dims != sigma.mode_dims {
        return Err(Error::domain("relative entropy needs states on the same space"));
    }
    Ok(relative_entropy_matrices(&rho.matrix, &sigma.matrix))
}

pub(crate) fn relative_entropy_matrices(rho: &DMatrix<Complex64>, sigma: &DMatrix<Complex64>) -> f64 {
    const CUT: f64 = 1e-14;
    let (p, u) = hermitian_eigen(rho);
    let (q, v) = hermitian_eigen(sigma);
    let overlap = u.adjoint() * v;
    let mut s = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        if pi <= CUT {
            continue;
        }
        s += pi * pi.ln();
        for (j, &qj) in q.iter().enumerate() {
            let w = pi * overlap[(i, j)].norm_sqr();
            if qj <= CUT {
                if w > CUT {
                    return f64::INFINITY;
                }
                continue;
            }
            s -= w * qj.ln();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn fock_loss_examples() {
        assert_eq!(fock_loss(3, 1.0).unwrap().eigenvalues().last().copied(), Some(1.0));
        let r = fock_loss(2, 0.5).unwrap();
        for (k, p) in [0.25, 0.5, 0.25].iter().enumerate() {
            assert!((r.entry(k, k).re - p).abs() < 1e-15);
        }
        assert!((fock_loss(5, 0.3).unwrap().mean_photon_number() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn nearly_opaque_channel_leaves_a_valid_state() {
        let rho = cat_output(Complex64::new(-0.8563586843708568, 1.7652413818311514), c(0.003784984790763277)).unwrap();
        let eig = rho.eigenvalues();
        assert!(eig.iter().all(|x| x.is_finite()));
        assert!(rho.min_eigenvalue() > -1e-12);
        assert!((eig[eig.len() - 1] + eig[eig.len() - 2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cat_examples() {
        let pure = cat_output(c(1.2), Complex64::from_polar(1.0, 0.4)).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);
        let vac = cat_output(c(1.5), c(0.0)).unwrap();
        assert!((vac.entry(0, 0).re - 1.0).abs() < 1e-12);
        // |γ|² = 1, |T|² = 1/2: odd-odd coherence exists only through the cross terms
        let r = cat_output(c(1.0), c(0.5f64.sqrt())).unwrap();
        let beta = 0.5f64.sqrt();
        let e = (-beta * beta).exp();
        let norm = 2.0 * (1.0 + (-2.0f64).exp());
        let expected_11 = 2.0 * e * beta * beta * (1.0 - (-1.0f64).exp()) / norm;
        assert!((r.entry(1, 1).re - expected_11).abs() < 1e-12);
    }

    #[test]
    fn bell_examples() {
        for kind in BellKind::ALL {
            let pure = bell_output(kind, c(1.0), c(1.0)).unwrap();
            assert!((pure.purity() - 1.0).abs() < 1e-12);
            let vac = bell_output(kind, c(0.0), c(0.0)).unwrap();
            assert!((vac.entry(0, 0).re - 1.0).abs() < 1e-12);
            let r = bell_output(kind, Complex64::new(0.3, 0.4), Complex64::new(-0.5, 0.2)).unwrap();
            assert!((r.trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_examples() {
        let t = c(0.5f64.sqrt());
        assert!((entanglement_bounds(BellKind::PsiPlus, t) - 0.346574).abs() < 1e-6);
        assert!((entanglement_bounds(BellKind::PhiPlus, t) - 0.312751).abs() < 1e-6);
        for kind in BellKind::ALL {
            assert!((entanglement_bounds(kind, c(1.0)) - std::f64::consts::LN_2).abs() < 1e-15);
            assert_eq!(entanglement_bounds(kind, c(0.0)), 0.0);
        }
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = bell_output(BellKind::PsiPlus, c(1.0), c(1.0)).unwrap();
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
        let mixed = FockDensity::new(vec![2, 2], DMatrix::identity(4, 4) * c(0.25)).unwrap();
        assert!((relative_entropy(&rho, &mixed).unwrap() - 4f64.ln()).abs() < 1e-12);
        let vac = bell_output(BellKind::PsiPlus, c(0.0), c(0.0)).unwrap();
        assert_eq!(relative_entropy(&rho, &vac).unwrap(), f64::INFINITY);
    }

    #[test]
    fn validation_rejects_bad_states() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.7), c(0.7)]));
        assert!(FockDensity::new(vec![2], m).is_err());
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.2), c(-0.2)]));
        assert!(FockDensity::new(vec![2], m).is_err());
        assert!(fock_loss(2, 1.5).is_err());
    }

    #[test]
    fn marginal_of_product() {
        let r = bell_output(BellKind::PhiPlus, c(0.6), c(0.8)).unwrap();
        let m1 = r.marginal(0).unwrap();
        assert!((m1.entry(1, 1).re - 0.5 * 0.36).abs() < 1e-12);
    }
}
