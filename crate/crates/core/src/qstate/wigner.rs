//! s-parametrized phase-space functions of a single mode.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{coherent_vector, FockDensity};
use crate::error::{Error, Result};
use crate::numerics::laguerre;

fn check_s(s: f64) -> Result<()> {
    if !(s < 1.0) || !s.is_finite() {
        return Err(Error::domain(format!("phase-space function needs s < 1, got {s}")));
    }
    if s > 0.0 {
        log::warn!("s = {s} > 0: the phase-space function may be singular for non-smooth states");
    }
    Ok(())
}

/// W_s(α) = Σ_k p_k W_k(α) for a Fock mixture, with
/// W_k(α) = 2/(π(1−s)) ((s+1)/(s−1))ᵏ L_k(4|α|²/(1−s²)) e^{−2|α|²/(1−s)}.
pub fn wigner_laguerre(probs: &[f64], alpha: Complex64, s: f64) -> Result<f64> {
    check_s(s)?;
    let a2 = alpha.norm_sqr();
    if s == -1.0 {
        // Q function: |⟨α|k⟩|²/π
        let mut term = (-a2).exp() / PI;
        let mut sum = 0.0;
        for (k, p) in probs.iter().enumerate() {
            if k > 0 {
                term *= a2 / k as f64;
            }
            sum += p * term;
        }
        return Ok(sum);
    }
    let ratio = (s + 1.0) / (s - 1.0);
    let pre = 2.0 / (PI * (1.0 - s)) * (-2.0 * a2 / (1.0 - s)).exp();
    let x = 4.0 * a2 / (1.0 - s * s);
    Ok(probs.iter().enumerate().map(|(k, p)| p * pre * ratio.powi(k as i32) * laguerre(k, x)).sum())
}

/// W_s(α) = 2/(π(1−s)) Σ_k ((s+1)/(s−1))ᵏ ⟨k|D†(α) ρ D(α)|k⟩ for any single-mode state.
///
/// The displaced number states D(−α)|m⟩ are generated from |−α⟩ by the recurrence
/// D(β)|m⟩ = (a† − β*) D(β)|m−1⟩/√m on a basis large enough for the Poisson tail.
/// For s > 0 the weights grow geometrically and the sum cancels catastrophically, so
/// the normally ordered matrix elements of D(α) t^{a†a} D†(α) are summed instead.
pub fn wigner_displaced(rho: &FockDensity, alpha: Complex64, s: f64) -> Result<f64> {
    check_s(s)?;
    if rho.mode_dims().len() != 1 {
        return Err(Error::domain("phase-space functions are implemented for single modes"));
    }
    if s > 0.0 {
        return Ok(wigner_normal_ordered(rho, alpha, s));
    }
    let d = rho.dim();
    let a = alpha.norm();
    let kmax = d + (a * a + 12.0 * a + 40.0).ceil() as usize;
    let beta = -alpha;
    let mut vecs: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    vecs.push(coherent_vector(beta, kmax));
    for m in 1..d {
        let prev = &vecs[m - 1];
        let norm = (m as f64).sqrt();
        let next: Vec<Complex64> = (0..=kmax)
            .map(|k| {
                let up = if k > 0 { prev[k - 1] * (k as f64).sqrt() } else { Complex64::new(0.0, 0.0) };
                (up - beta.conj() * prev[k]) / norm
            })
            .collect();
        vecs.push(next);
    }
    let ratio = (s + 1.0) / (s - 1.0);
    let mut weight = 1.0;
    let mut sum = 0.0;
    for k in 0..=kmax {
        let mut diag = Complex64::new(0.0, 0.0);
        for (m, vm) in vecs.iter().enumerate() {
            for (n, vn) in vecs.iter().enumerate() {
                diag += vm[k] * rho.entry(m, n) * vn[k].conj();
            }
        }
        sum += weight * diag.re;
        weight *= ratio;
        if weight == 0.0 {
            break;
        }
    }
    Ok(2.0 / (PI * (1.0 - s)) * sum)
}

/// Σ_mn ρ_mn ⟨n|D(α) t^{a†a} D†(α)|m⟩ with t = (s+1)/(s−1), using
/// D t^{a†a} D† = e^{u|α|²} :exp(t a†a − uα a† − uα* a):, u = t − 1, whose Fock
/// elements are the finite sums √(n!m!) Σ_j tʲ cⁿ⁻ʲ dᵐ⁻ʲ / (j!(n−j)!(m−j)!).
fn wigner_normal_ordered(rho: &FockDensity, alpha: Complex64, s: f64) -> f64 {
    let d = rho.dim();
    let t = (s + 1.0) / (s - 1.0);
    let u = t - 1.0;
    let (cn, dn) = (-u * alpha, -u * alpha.conj());
    let mut ln_fact = vec![0.0; d];
    for k in 1..d {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..d {
        for n in 0..d {
            let r = rho.entry(m, n);
            if r.norm() == 0.0 {
                continue;
            }
            let mut elem = Complex64::new(0.0, 0.0);
            for j in 0..=m.min(n) {
                let w = (0.5 * (ln_fact[n] + ln_fact[m]) - ln_fact[j] - ln_fact[n - j] - ln_fact[m - j]).exp();
                elem += w * t.powi(j as i32) * cn.powi((n - j) as i32) * dn.powi((m - j) as i32);
            }
            sum += r * elem;
        }
    }
    2.0 / (PI * (1.0 - s)) * (u * alpha.norm_sqr()).exp() * sum.re
}

/// s-parametrized phase-space function; diagonal states use the Laguerre form.
pub fn wigner_s(rho: &FockDensity, alpha: Complex64, s: f64) -> Result<f64> {
    if rho.mode_dims().len() != 1 {
        return Err(Error::domain("phase-space functions are implemented for single modes"));
    }
    if rho.is_diagonal(1e-14) {
        let probs: Vec<f64> = (0..rho.dim()).map(|k| rho.entry(k, k).re).collect();
        wigner_laguerre(&probs, alpha, s)
    } else {
        wigner_displaced(rho, alpha, s)
    }
}
