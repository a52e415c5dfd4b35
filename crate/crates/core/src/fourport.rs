//! Lossy four-port devices: the characteristic transformation matrix T and absorption
//! matrix A of a dielectric plate in vacuum, and their unitary 4×4 embedding Λ.

use nalgebra::{Matrix2, Matrix4, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::media::{Dielectric, LorentzMedium};
use crate::numerics::{frobenius, hermitian_eigen, sinc};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Eigenvalues of S below this are treated as zero when building Λ.
const SINGULAR_EIGEN: f64 = 1e-8;

/// Planar plate of thickness l in vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabDevice {
    pub l: f64,
    pub medium: LorentzMedium,
}

impl SlabDevice {
    pub fn new(l: f64, medium: LorentzMedium) -> Result<Self> {
        if !(l >= 0.0 && l.is_finite()) {
            return Err(Error::validation(format!("slab thickness must be non-negative, got {l}")));
        }
        Ok(SlabDevice { l, medium })
    }
}

/// Characteristic transformation matrix T and absorption matrix A at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourPortMatrices {
    pub t: Matrix2<Complex64>,
    pub a: Matrix2<Complex64>,
    pub omega: f64,
}

impl FourPortMatrices {
    /// ‖TT† + AA† − I‖_F.
    pub fn unitarity_defect(&self) -> f64 {
        frobenius(&(self.t * self.t.adjoint() + self.a * self.a.adjoint() - Matrix2::identity()))
    }

    /// Two independent reflectionless channels (fibres) with transmissions T₁, T₂:
    /// T = diag(T₁, T₂), A = diag(√(1 − |T₁|²), √(1 − |T₂|²)). `omega` is left at 0.
    pub fn from_fibres(t1: Complex64, t2: Complex64) -> Result<Self> {
        for t in [t1, t2] {
            if !(t.norm() <= 1.0 + 1e-12) {
                return Err(Error::domain(format!("fibre transmission must satisfy |T| <= 1, got |T| = {}", t.norm())));
            }
        }
        let leak = |t: Complex64| Complex64::new((1.0 - t.norm_sqr()).max(0.0).sqrt(), 0.0);
        let z = Complex64::new(0.0, 0.0);
        Ok(FourPortMatrices { t: Matrix2::new(t1, z, z, t2), a: Matrix2::new(leak(t1), z, z, leak(t2)), omega: 0.0 })
    }

    /// C = √(TT†) and S = √(AA†), built in the common eigenbasis of TT†.
    pub fn cs_matrices(&self) -> (Matrix2<Complex64>, Matrix2<Complex64>) {
        let (c, s, u) = self.spectral();
        let build = |v: [f64; 2]| {
            u * Matrix2::from_diagonal(&Vector2::new(Complex64::new(v[0], 0.0), Complex64::new(v[1], 0.0)))
                * u.adjoint()
        };
        (build(c), build(s))
    }

    /// Singular values c_k of T and s_k of A in a common eigenbasis.
    ///
    /// The basis diagonalises the smaller of TT† and AA†; c_k and s_k are the row norms
    /// of U†T and U†A, which keep their relative precision near zero.
    fn spectral(&self) -> ([f64; 2], [f64; 2], Matrix2<Complex64>) {
        let tt = self.t * self.t.adjoint();
        let aa = self.a * self.a.adjoint();
        let m = if aa.trace().re <= tt.trace().re { aa } else { tt };
        let dm = nalgebra::DMatrix::from_fn(2, 2, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
        let (_, vecs) = hermitian_eigen(&dm);
        let u = Matrix2::new(vecs[(0, 0)], vecs[(0, 1)], vecs[(1, 0)], vecs[(1, 1)]);
        let (ut, ua) = (u.adjoint() * self.t, u.adjoint() * self.a);
        let c = [ut.row(0).norm().min(1.0), ut.row(1).norm().min(1.0)];
        let s = [ua.row(0).norm().min(1.0), ua.row(1).norm().min(1.0)];
        (c, s, u)
    }
}

/// Interface coefficients (r, t₁, t₂) = ((1 − n)/(1 + n), 2/(1 + n), 2n/(1 + n)).
pub fn interface_coeffs(n: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
    let d = 1.0 + n;
    if d.norm() < 1e-300 {
        return Err(Error::domain("interface coefficients are undefined for n = -1"));
    }
    Ok(((1.0 - n) / d, 2.0 / d, 2.0 * n / d))
}

/// e^{−x}sinh(x)/n_I with x = n_I ω l, written as ωl (1 − e^{−2x})/(2x).
fn damped_sinh_term(n_i: f64, wl: f64) -> f64 {
    let x = n_i * wl;
    if x.abs() < 1e-8 {
        wl * (1.0 - x)
    } else {
        -(-2.0 * x).exp_m1() / (2.0 * n_i)
    }
}

/// λ± = e^{−n_I ωl}[sinh(n_I ωl)/n_I ± sin(n_R ωl)/n_R].
pub fn lambda_pm(n: Complex64, omega: f64, l: f64) -> (f64, f64) {
    let wl = omega * l;
    let a = damped_sinh_term(n.im, wl);
    let b = (-n.im * wl).exp() * wl * sinc(n.re * wl);
    (a + b, a - b)
}

fn clipped_sqrt(x: f64, scale: f64, which: &str) -> Result<f64> {
    if x >= 0.0 {
        return Ok(x.sqrt());
    }
    if x < -1e-12 * scale.max(1.0) {
        return Err(Error::NonConvergence {
            what: format!("lambda_{which} is negative beyond round-off"),
            estimate: x,
            error: 1e-12 * scale.max(1.0),
        });
    }
    log::debug!("clipping lambda_{which} = {x:e} to zero");
    Ok(0.0)
}

/// T(ω) and A(ω) of the plate.
pub fn slab_matrices(dev: &SlabDevice, omega: f64) -> Result<FourPortMatrices> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain(format!("frequency must be positive, got {omega}")));
    }
    let n = dev.medium.index(omega);
    let l = dev.l;
    let (r, t1, t2) = interface_coeffs(n)?;
    let e1 = (I * n * omega * l).exp();
    let e2 = e1 * e1;
    let theta = 1.0 / (1.0 - r * r * e2);
    let back = (-I * omega * l).exp();

    let t11 = back * r * (1.0 - t1 * e2 * theta * t2);
    let t12 = back * t1 * e1 * theta * t2;

    let (lp, lm) = lambda_pm(n, omega, l);
    let scale = omega * l;
    let sp = clipped_sqrt(lp, scale, "+")?;
    let sm = clipped_sqrt(lm, scale, "-")?;
    let pre = (n.im.max(0.0) * n.re.max(0.0)).sqrt() * (-I * omega * l / 2.0).exp() * t1 * theta;
    let a11 = pre * sp * (1.0 - e1 * r);
    let a12 = pre * sm * (1.0 + e1 * r);

    Ok(FourPortMatrices { t: Matrix2::new(t11, t12, t12, t11), a: Matrix2::new(a11, a12, a11, -a12), omega })
}

/// Unitary 4×4 matrix
/// Λ = [[T, A], [−S C⁻¹ T, C S⁻¹ A]], C = √(TT†), S = √(AA†).
///
/// Rows of the lower block whose C or S eigenvalue is below 1e-8 are completed by
/// Gram–Schmidt over e₃, e₄, e₁, e₂, so A = 0 gives block-diag(T, I).
pub fn su4_lambda(fm: &FourPortMatrices) -> Result<Matrix4<Complex64>> {
    let defect = fm.unitarity_defect();
    if defect > 1e-8 {
        return Err(Error::validation(format!("TT† + AA† differs from I by {defect:e}")));
    }
    let (c, s, u) = fm.spectral();
    let ut = u.adjoint() * fm.t;
    let ua = u.adjoint() * fm.a;

    // lower rows in the eigenbasis of TT†
    let mut lower: Vec<Option<[Complex64; 4]>> = Vec::with_capacity(2);
    for k in 0..2 {
        if s[k] < SINGULAR_EIGEN || c[k] < SINGULAR_EIGEN {
            lower.push(None);
        } else {
            let f = -s[k] / c[k];
            let g = c[k] / s[k];
            lower.push(Some([ut[(k, 0)] * f, ut[(k, 1)] * f, ua[(k, 0)] * g, ua[(k, 1)] * g]));
        }
    }

    let mut lam = Matrix4::<Complex64>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            lam[(i, j)] = fm.t[(i, j)];
            lam[(i, j + 2)] = fm.a[(i, j)];
        }
    }
    let upper: Vec<[Complex64; 4]> = (0..2).map(|i| [lam[(i, 0)], lam[(i, 1)], lam[(i, 2)], lam[(i, 3)]]).collect();
    let rotate = match (lower[0], lower[1]) {
        (Some(a), Some(b)) => Some(vec![a, b]),
        (None, None) => None,
        (Some(a), None) | (None, Some(a)) => {
            // orthogonality to the upper rows does not depend on the row basis
            let mut rows = upper.clone();
            rows.push(a);
            complete_rows(&mut rows);
            let extra = rows[3];
            Some(if lower[0].is_some() { vec![a, extra] } else { vec![extra, a] })
        }
    };
    match rotate {
        Some(rows) => {
            for i in 0..2 {
                for j in 0..4 {
                    lam[(i + 2, j)] = (0..2).map(|k| u[(i, k)] * rows[k][j]).sum();
                }
            }
        }
        None => {
            let mut rows = upper;
            complete_rows(&mut rows);
            for (i, row) in rows.iter().enumerate().skip(2) {
                for j in 0..4 {
                    lam[(i, j)] = row[j];
                }
            }
        }
    }
    Ok(lam)
}

fn inner(a: &[Complex64; 4], b: &[Complex64; 4]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Extends orthonormal rows to a basis of C⁴ using e₃, e₄, e₁, e₂ in that order.
fn complete_rows(rows: &mut Vec<[Complex64; 4]>) {
    let z = Complex64::new(0.0, 0.0);
    for idx in [2usize, 3, 0, 1] {
        if rows.len() == 4 {
            break;
        }
        let mut v = [z; 4];
        v[idx] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for r in rows.iter() {
                let p = inner(r, &v);
                for j in 0..4 {
                    v[j] -= p * r[j];
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            rows.push(v.map(|x| x / norm));
        }
    }
}

/// Λ with the column phases fixed: the largest-magnitude entry of every column is
/// made real-positive, then a global phase sets det Λ = 1.
pub fn su4_normalized(fm: &FourPortMatrices) -> Result<Matrix4<Complex64>> {
    let mut lam = su4_lambda(fm)?;
    for j in 0..4 {
        let mut best = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            if lam[(i, j)].norm() > best.norm() {
                best = lam[(i, j)];
            }
        }
        let ph = best.conj() / best.norm();
        for i in 0..4 {
            lam[(i, j)] *= ph;
        }
    }
    let det = lam.determinant();
    let g = Complex64::from_polar(1.0, -det.arg() / 4.0);
    Ok(lam * g)
}

/// ⟨a⟩ e^{−n_I ω dx}: mean amplitude after propagating dx through the medium.
pub fn propagate_mean_amplitude<M: Dielectric + ?Sized>(
    a_mean: Complex64,
    dx: f64,
    omega: f64,
    m: &M,
) -> Result<Complex64> {
    if !(dx >= 0.0) {
        return Err(Error::domain(format!("propagation distance must be non-negative, got {dx}")));
    }
    if !(omega > 0.0) {
        return Err(Error::domain(format!("frequency must be positive, got {omega}")));
    }
    Ok(a_mean * (-m.index(omega).im * omega * dx).exp())
}

/// T = e^{i n_R ω l} e^{−l/L} of a fibre with perfect input coupling.
pub fn fibre_transmission(l: f64, absorption_length: f64, n_r: f64, omega: f64) -> Result<Complex64> {
    if !(l >= 0.0) {
        return Err(Error::domain(format!("fibre length must be non-negative, got {l}")));
    }
    if !(absorption_length > 0.0) {
        return Err(Error::domain(format!("absorption length must be positive, got {absorption_length}")));
    }
    Ok(Complex64::from_polar((-l / absorption_length).exp(), n_r * omega * l))
}
