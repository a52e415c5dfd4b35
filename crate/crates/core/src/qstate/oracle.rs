//! Brute-force action of a 4×4 unitary on four-mode Fock states.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

use super::FockDensity;
use crate::error::{Error, Result};
use crate::numerics::frobenius;

/// Sparse pure state on modes (field 1, field 2, device 1, device 2): occupations and amplitude.
pub type FockAmplitudes = Vec<([usize; 4], Complex64)>;

fn sqrt_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).sqrt()).product()
}

/// Applies the number-conserving unitary induced by a_i† → Σ_j Λ_ji a_j† to a
/// four-mode pure state and traces out the two device modes.
///
/// The field modes of the result are truncated at `field_cutoff` photons each; any
/// output amplitude beyond it is reported as a truncation error.
pub fn mode_mix_oracle(
    psi_in: &[([usize; 4], Complex64)],
    lambda: &Matrix4<Complex64>,
    field_cutoff: usize,
) -> Result<FockDensity> {
    let defect = frobenius(&(lambda * lambda.adjoint() - Matrix4::identity()));
    if defect > 1e-8 {
        return Err(Error::validation(format!("mode-mixing matrix is not unitary (defect {defect:e})")));
    }
    let mut out: BTreeMap<[usize; 4], Complex64> = BTreeMap::new();
    for (occ, amp) in psi_in {
        // monomials Π (a_j†)^{m_j} with their coefficients
        let norm: f64 = occ.iter().map(|&n| sqrt_factorial(n)).product();
        let mut poly: BTreeMap<[usize; 4], Complex64> = BTreeMap::new();
        poly.insert([0; 4], amp / norm);
        for (i, &n) in occ.iter().enumerate() {
            for _ in 0..n {
                let mut next = BTreeMap::new();
                for (mono, c) in &poly {
                    for j in 0..4 {
                        let w = lambda[(j, i)];
                        if w == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut m = *mono;
                        m[j] += 1;
                        *next.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c * w;
                    }
                }
                poly = next;
            }
        }
        for (mono, c) in poly {
            let f: f64 = mono.iter().map(|&m| sqrt_factorial(m)).product();
            *out.entry(mono).or_insert(Complex64::new(0.0, 0.0)) += c * f;
        }
    }

    let d = field_cutoff + 1;
    let mut by_device: BTreeMap<[usize; 2], Vec<Complex64>> = BTreeMap::new();
    for (occ, amp) in out {
        if occ[0] > field_cutoff || occ[1] > field_cutoff {
            if amp.norm() > 1e-15 {
                return Err(Error::Truncation(format!(
                    "output component |{},{}> exceeds the field cutoff {field_cutoff}",
                    occ[0], occ[1]
                )));
            }
            continue;
        }
        let v = by_device.entry([occ[2], occ[3]]).or_insert_with(|| vec![Complex64::new(0.0, 0.0); d * d]);
        v[occ[0] * d + occ[1]] += amp;
    }
    let mut rho = DMatrix::from_element(d * d, d * d, Complex64::new(0.0, 0.0));
    for v in by_device.values() {
        for i in 0..d * d {
            if v[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d * d {
                rho[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    FockDensity::new(vec![d, d], rho)
}
