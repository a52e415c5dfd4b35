//! Cross-checks of the library against independent routes to the same quantities.

use std::f64::consts::LN_2;

use macroqed_core::decay::{gamma_near_surface, Dipole, SurfaceMode};
use macroqed_core::fourport::{slab_matrices, su4_lambda, FourPortMatrices, SlabDevice};
use macroqed_core::greens::{cavity_c1n, resonator_c1n, riccati, uniaxial_bulk};
use macroqed_core::media::{ConstantMedium, Dielectric, LorentzMedium};
use macroqed_core::nalgebra::{Matrix3, Vector3};
use macroqed_core::qstate::{bell_output, entanglement_re, mode_mix_oracle, BellKind, ReeConfig};
use macroqed_core::{Complex64, QuadratureConfig, SphericalCavity, SphericalResonator};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Characteristic-matrix reflection and transmission of a plate in vacuum.
fn characteristic_matrix(n: Complex64, omega: f64, l: f64) -> (Complex64, Complex64) {
    let d = n * omega * l;
    let (m11, m12, m21, m22) = (d.cos(), -I * d.sin() / n, -I * n * d.sin(), d.cos());
    let den = m11 + m12 + m21 + m22;
    ((m11 + m12 - m21 - m22) / den, 2.0 / den)
}

#[test]
fn slab_matches_characteristic_matrix() {
    for (l, w, wp, g) in [(1.0, 0.8, 0.5, 0.1), (3.0, 1.05, 0.5, 0.01), (0.2, 2.0, 1.0, 0.5), (0.7, 1.1, 0.46, 0.05)] {
        let m = LorentzMedium::new(wp, g).unwrap();
        let fm = slab_matrices(&SlabDevice::new(l, m).unwrap(), w).unwrap();
        let (r, t) = characteristic_matrix(m.index(w), w, l);
        let back = (I * w * l).exp();
        assert!((fm.t[(0, 0)] * back - r).norm() < 1e-12, "r at l={l}, w={w}");
        assert!((fm.t[(0, 1)] * back - t).norm() < 1e-12, "t at l={l}, w={w}");
    }
}

#[test]
fn cavity_closed_form_matches_riccati_matching() {
    for (rho, n) in [
        (0.1, Complex64::new(1.5, 0.1)),
        (2.0, Complex64::new(1.2, 0.5)),
        (0.5, Complex64::new(0.3, 2.0)),
        (10.0, Complex64::new(1.5, 1e-9)),
    ] {
        let cav = SphericalCavity::new(rho, ConstantMedium { eps: n * n }).unwrap();
        let got = cavity_c1n(&cav, 1.0).unwrap();
        let (r, z) = (c(rho), n * rho);
        let y = riccati::xi_prime(z) / (n * riccati::xi(z));
        let want = (y * riccati::xi(r) - riccati::xi_prime(r)) / (riccati::psi_prime(r) - y * riccati::psi(r));
        assert!((got - want).norm() <= 1e-10 * want.norm(), "rho={rho}: {got} vs {want}");
    }
}

#[test]
fn opaque_resonator_wall_acts_as_a_cavity() {
    let m = LorentzMedium::new(0.46, 0.05).unwrap();
    for w in [0.6, 0.95, 1.05, 1.3] {
        let r2 = 3.0;
        let depth = 60.0 / (m.index(w).im * w);
        let res = SphericalResonator::new(r2 + depth, r2, m).unwrap();
        let a = resonator_c1n(&res, w).unwrap();
        let b = cavity_c1n(&SphericalCavity::new(r2, m).unwrap(), w).unwrap();
        assert!((a - b).norm() <= 1e-10 * b.norm().max(1.0), "w={w}: {a} vs {b}");
    }
}

#[test]
fn good_conductor_reproduces_mirror_image_rates() {
    let cfg = QuadratureConfig::default();
    let metal = ConstantMedium { eps: Complex64::new(-1e8, 1e8) };
    for z in [0.2, 0.7, 1.5, 4.0] {
        let x: f64 = 2.0 * z;
        let (s, co) = x.sin_cos();
        let perp = 1.0 - 3.0 * (co / (x * x) - s / (x * x * x));
        let para = 1.0 - 1.5 * (s / x + co / (x * x) - s / (x * x * x));
        let gz = gamma_near_surface(&Dipole::along_z(1.0).unwrap(), z, &metal, SurfaceMode::Exact, &cfg).unwrap();
        let gx = gamma_near_surface(&Dipole::new(1.0, Vector3::x(), 1.0).unwrap(), z, &metal, SurfaceMode::Exact, &cfg)
            .unwrap();
        assert!((gz - perp).abs() < 1e-3, "z={z}: {gz} vs {perp}");
        assert!((gx - para).abs() < 1e-3, "z={z}: {gx} vs {para}");
    }
}

#[test]
fn uniaxial_tensor_solves_the_wave_equation() {
    let w = 1.0;
    let (ec, et) = (Complex64::new(2.0, 0.3), Complex64::new(1.5, 0.1));
    let axis = Vector3::new(0.2, 0.3, 1.0).normalize();
    let eps = Matrix3::identity().map(c) * et + (axis * axis.transpose()).map(c) * (ec - et);
    let g = |r: Vector3<f64>| uniaxial_bulk(r, w, ec, et, axis).unwrap().entries;
    let r0 = Vector3::new(0.7, -0.4, 0.5);
    let h = 2e-3;
    let e = [Vector3::x(), Vector3::y(), Vector3::z()];
    let mut d2 = [[Matrix3::zeros(); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            d2[a][b] = if a == b {
                (g(r0 + e[a] * h) - g(r0) * c(2.0) + g(r0 - e[a] * h)) / c(h * h)
            } else {
                (g(r0 + (e[a] + e[b]) * h) - g(r0 + (e[a] - e[b]) * h) - g(r0 - (e[a] - e[b]) * h)
                    + g(r0 - (e[a] + e[b]) * h))
                    / c(4.0 * h * h)
            };
        }
    }
    let mut curlcurl = Matrix3::<Complex64>::zeros();
    for i in 0..3 {
        for col in 0..3 {
            let mut v = c(0.0);
            for b in 0..3 {
                v += d2[i][b][(b, col)] - d2[b][b][(i, col)];
            }
            curlcurl[(i, col)] = v;
        }
    }
    let wave = eps * g(r0) * c(w * w);
    let residual = (curlcurl - wave).norm() / wave.norm();
    assert!(residual < 1e-4, "relative residual {residual}");
}

#[test]
fn bell_closed_form_matches_mode_mixing() {
    for (t1, t2) in [
        (Complex64::from_polar(0.8, 0.3), Complex64::from_polar(0.5, -1.1)),
        (Complex64::from_polar(0.95, 2.0), Complex64::from_polar(0.1, 0.4)),
    ] {
        let lam = su4_lambda(&FourPortMatrices::from_fibres(t1, t2).unwrap()).unwrap();
        for kind in BellKind::ALL {
            let amp = kind.amplitudes();
            let mut input = Vec::new();
            for (k, a) in amp.iter().enumerate() {
                if a.norm() > 0.0 {
                    input.push(([k >> 1, k & 1, 0, 0], *a));
                }
            }
            let rho = mode_mix_oracle(&input, &lam, 1).unwrap();
            let want = bell_output(kind, t1, t2).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    assert!((rho.entry(i, j) - want.entry(i, j)).norm() < 1e-12, "{} ({i},{j})", kind.name());
                }
            }
        }
    }
}

#[test]
fn psi_entanglement_matches_closed_form() {
    let cfg = ReeConfig::default();
    for p in [1.0, 0.9, 0.6, 0.3, 0.05] {
        let t = c(f64::sqrt(p));
        let e = entanglement_re(&bell_output(BellKind::PsiPlus, t, t).unwrap(), &cfg).unwrap().value;
        let want = if p < 1.0 { (p - 2.0) * (1.0 - p / 2.0).ln() + (1.0 - p) * (1.0 - p).ln() } else { LN_2 };
        assert!((e - want).abs() < 1e-6, "p={p}: {e} vs {want}");
    }
}

#[test]
fn phi_entanglement_matches_x_state_minimisation() {
    // separable X states minimised independently
    let cfg = ReeConfig::default();
    for (l_over_len, psi_ref, phi_ref) in
        [(0.5, 0.0418184, 0.0126792), (1.0, 0.00491556, 3.69039e-4), (3.0, 1.53796e-6, 1.2458e-10)]
    {
        let t = c(f64::exp(-l_over_len));
        let psi = entanglement_re(&bell_output(BellKind::PsiMinus, t, t).unwrap(), &cfg).unwrap().value;
        let phi = entanglement_re(&bell_output(BellKind::PhiMinus, t, t).unwrap(), &cfg).unwrap().value;
        assert!((psi - psi_ref).abs() < 1e-6 + 1e-5 * psi_ref, "Ψ at l/L={l_over_len}: {psi}");
        assert!((phi - phi_ref).abs() < 1e-6 + 1e-5 * phi_ref, "Φ at l/L={l_over_len}: {phi}");
    }
}
