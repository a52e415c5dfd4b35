//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::{LN_2, PI};
use std::time::Instant;

use macroqed_core::decay::{
    gamma_near_surface, gamma_real_cavity, gamma_resonator, rabi_frequency, resonance_width, single_resonance_dynamics,
    single_resonance_kernel, upper_state_dynamics, CavityMode, Dipole, SurfaceMode,
};
use macroqed_core::fourport::{fibre_transmission, slab_matrices, su4_lambda, FourPortMatrices, SlabDevice};
use macroqed_core::greens::{
    bulk_1d, bulk_iso, cavity_scattering_tensor, halfspace_scattering_tensor, resonator_scattering_tensor,
    uniaxial_bulk,
};
use macroqed_core::media::{band_gap, kk_reconstruct, ConstantMedium, Dielectric, LorentzMedium};
use macroqed_core::nalgebra::Vector3;
use macroqed_core::numerics::{integrate_with_breaks, solve_volterra2};
use macroqed_core::qstate::{
    bell_output, cat_cutoff, cat_output, coherent_vector, entanglement_bounds, entanglement_re, fock_loss,
    mode_mix_oracle, BellKind, FockDensity, ReeConfig,
};
use macroqed_core::{Complex64, QuadratureConfig, SphericalCavity, SphericalResonator, TimeGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn unitarity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let l = rng.random_range(0.0..5.0);
        let omega = rng.random_range(0.2..3.0);
        let wp = rng.random_range(0.1..2.0);
        let gamma = rng.random_range(1e-3..0.5);
        let dev = SlabDevice::new(l, LorentzMedium::new(wp, gamma).unwrap()).unwrap();
        worst = worst.max(slab_matrices(&dev, omega).unwrap().unitarity_defect());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst < 1e-10 && secs < 1.0, format!("max defect {worst:.2e}, {secs:.3} s"))
}

fn glauber_lewenstein() -> Outcome {
    let m = LorentzMedium::new(0.46, 1e-8).unwrap();
    let wa = 0.5;
    let cav = SphericalCavity::new(0.02 * 2.0 * PI / wa, m).unwrap();
    let exact = gamma_real_cavity(&Dipole::along_z(wa).unwrap(), &cav, CavityMode::Exact).unwrap();
    let n = m.index(wa).re;
    let gl = n * (3.0 * n * n / (2.0 * n * n + 1.0)).powi(2);
    let rel = (exact - gl).abs() / gl;
    outcome(rel < 0.01, format!("exact {exact:.6}, n(3n²/(2n²+1))² {gl:.6}, rel {rel:.2e}"))
}

fn real_cavity_expansion() -> Outcome {
    let m = LorentzMedium::new(0.46, 0.05).unwrap();
    let mut worst: f64 = 0.0;
    let (mut peak_w, mut peak) = (0.0, f64::NEG_INFINITY);
    for k in 0..=500 {
        let wa = 0.8 + 0.5 * k as f64 / 500.0;
        let dip = Dipole::along_z(wa).unwrap();
        let cav = SphericalCavity::new(0.02 * 2.0 * PI / wa, m).unwrap();
        let exact = gamma_real_cavity(&dip, &cav, CavityMode::Exact).unwrap();
        let series = gamma_real_cavity(&dip, &cav, CavityMode::Expansion).unwrap();
        worst = worst.max((exact - series).abs() / exact.abs());
        if exact > peak {
            peak = exact;
            peak_w = wa;
        }
    }
    let (lo, hi) = band_gap(&m);
    let inside = peak_w > lo && peak_w < hi;
    outcome(
        worst < 0.02 && inside,
        format!("max rel diff {worst:.2e}; maximum Γ/Γ₀ = {peak:.1} at ω_A = {peak_w:.4} (gap [{lo}, {hi:.4}])"),
    )
}

fn near_surface() -> Outcome {
    let cfg = QuadratureConfig::default();
    let m = ConstantMedium { eps: Complex64::new(2.0, 0.5) };
    let wa = 1.0;
    let lambda = 2.0 * PI / wa;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, d) in [("d∥z", Vector3::z()), ("d∥x", Vector3::x())] {
        let dip = Dipole::new(wa, d, 1.0).unwrap();
        let zs: Vec<f64> = (0..7).map(|k| 1e-3 * 10f64.powf(k as f64 / 6.0) * lambda).collect();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut worst_coeff: f64 = 0.0;
        for &z in &zs {
            let exact = gamma_near_surface(&dip, z, &m, SurfaceMode::Exact, &cfg).unwrap() - 1.0;
            let lead = gamma_near_surface(&dip, z, &m, SurfaceMode::Asymptotic, &cfg).unwrap();
            worst_coeff = worst_coeff.max((exact - lead).abs() / lead);
            xs.push(z.ln());
            ys.push(exact.ln());
        }
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
        ok &= (slope + 3.0).abs() <= 0.05 && worst_coeff < 0.05;
        parts.push(format!("{name}: slope {slope:.4}, coefficient rel diff {worst_coeff:.2e}"));
    }
    outcome(ok, parts.join("; "))
}

fn random_slab_lambda(rng: &mut ChaCha8Rng) -> (FourPortMatrices, macroqed_core::nalgebra::Matrix4<Complex64>) {
    let l = rng.random_range(0.1..3.0);
    let omega = rng.random_range(0.5..2.0);
    let wp = rng.random_range(0.2..1.5);
    let gamma = rng.random_range(0.01..0.4);
    let dev = SlabDevice::new(l, LorentzMedium::new(wp, gamma).unwrap()).unwrap();
    let fm = slab_matrices(&dev, omega).unwrap();
    let lam = su4_lambda(&fm).unwrap();
    (fm, lam)
}

fn max_entry_diff(a: &FockDensity, b: &FockDensity) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.dim().max(b.dim()) {
        for j in 0..a.dim().max(b.dim()) {
            let x = if i < a.dim() && j < a.dim() { a.entry(i, j) } else { c(0.0) };
            let y = if i < b.dim() && j < b.dim() { b.entry(i, j) } else { c(0.0) };
            worst = worst.max((x - y).norm());
        }
    }
    worst
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_fock: f64 = 0.0;
    let mut worst_cat: f64 = 0.0;
    for _ in 0..20 {
        let (fm, lam) = random_slab_lambda(&mut rng);
        for n in 0..=3usize {
            let rho = mode_mix_oracle(&[([n, 0, 0, 0], c(1.0))], &lam, n.max(1)).unwrap();
            for j in 0..2 {
                let closed = fock_loss(n, fm.t[(j, 0)].norm_sqr()).unwrap();
                worst_fock = worst_fock.max(max_entry_diff(&rho.marginal(j).unwrap(), &closed));
            }
        }
        let gamma = Complex64::from_polar(rng.random_range(0.2..1.0), rng.random_range(0.0..2.0 * PI));
        let cutoff = cat_cutoff(gamma);
        let norm = (2.0 * (1.0 + (-2.0 * gamma.norm_sqr()).exp())).sqrt();
        let plus = coherent_vector(gamma, cutoff);
        let minus = coherent_vector(-gamma, cutoff);
        let psi: Vec<([usize; 4], Complex64)> =
            (0..=cutoff).map(|k| ([k, 0, 0, 0], (plus[k] + minus[k]) / norm)).collect();
        let rho = mode_mix_oracle(&psi, &lam, cutoff).unwrap();
        for j in 0..2 {
            let closed = cat_output(gamma, fm.t[(j, 0)]).unwrap();
            worst_cat = worst_cat.max(max_entry_diff(&rho.marginal(j).unwrap(), &closed));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_fock < 1e-8 && worst_cat < 1e-8 && secs < 30.0,
        format!("max entry diff: Fock {worst_fock:.2e}, cat {worst_cat:.2e}; {secs:.1} s"),
    )
}

fn entanglement_degradation() -> Outcome {
    let start = Instant::now();
    let cfg = ReeConfig::default();
    let points: Vec<f64> = (0..30).map(|k| 3.0 * k as f64 / 29.0).collect();
    let eval = |kind: BellKind| -> Vec<(f64, f64)> {
        std::thread::scope(|s| {
            let handles: Vec<_> = points
                .iter()
                .map(|&l| {
                    s.spawn(move || {
                        let t = fibre_transmission(l, 1.0, 1.5, 1.0).unwrap();
                        let rho = bell_output(kind, t, t).unwrap();
                        (entanglement_re(&rho, &cfg).unwrap().value, entanglement_bounds(kind, t))
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    };
    let psi = eval(BellKind::PsiPlus);
    let phi = eval(BellKind::PhiPlus);
    let secs = start.elapsed().as_secs_f64();
    let start_ok = (psi[0].0 - LN_2).abs() < 1e-3 && (phi[0].0 - LN_2).abs() < 1e-3;
    let monotone = |v: &[(f64, f64)]| v.windows(2).all(|w| w[1].0 <= w[0].0 + 1e-6);
    let below = psi.iter().zip(&phi).skip(1).all(|(p, f)| f.0 < p.0);
    let bounded = psi.iter().chain(&phi).all(|(e, b)| *e <= b + 1e-3);
    let pass = start_ok && monotone(&psi) && monotone(&phi) && below && bounded && secs < 300.0;
    outcome(
        pass,
        format!(
            "E(0): Ψ {:.6} Φ {:.6}; E(3L): Ψ {:.3e} Φ {:.3e}; monotone {}/{}, Φ<Ψ {below}, bounds {bounded}; {secs:.1} s",
            psi[0].0,
            phi[0].0,
            psi[29].0,
            phi[29].0,
            monotone(&psi),
            monotone(&phi)
        ),
    )
}

fn markov_decay() -> Outcome {
    let gamma = 1e-3;
    let t_max = 5.0 / gamma;
    let grid = TimeGrid::new(t_max, 5000).unwrap();
    let deviation = |tr: &macroqed_core::DecayTrajectory| {
        tr.times.iter().zip(tr.populations()).map(|(t, p)| (p - (-gamma * t).exp()).abs()).fold(0.0, f64::max)
    };
    let flat = deviation(&solve_volterra2(|_| c(-0.5 * gamma), &grid));

    let wa = 5.0;
    let dip = Dipole::new(wa, Vector3::z(), gamma * PI).unwrap();
    let sampled = deviation(&upper_state_dynamics(&dip, |_| Ok(1.0), &grid, (0.5, 9.5)).unwrap());
    outcome(
        flat < 1e-3 && sampled < 1e-3,
        format!("Γ = {gamma:e}, max | |C_u|² − e^(−Γt) |: flat kernel {flat:.2e}, sampled flat spectrum over ω_A ± 4.5 {sampled:.2e}"),
    )
}

fn strong_coupling() -> Outcome {
    let wall = LorentzMedium::new(0.5, 1e-4).unwrap();
    let r2 = 30.0 * 2.0 * PI;
    let res = SphericalResonator::new(r2 + 2.0 * PI, r2, wall).unwrap();
    let wa = 1.046448;
    let dip = Dipole::new(wa, Vector3::z(), 1e-6).unwrap();
    let ratio = gamma_resonator(&dip, &res).unwrap();
    let g0 = dip.gamma0_absolute();
    let gc = ratio * g0;
    let dc = resonance_width(r2, ratio).unwrap();
    let omega = rabi_frequency(gc, dc);
    let period = 2.0 * PI / omega;
    let t_max = 5.0 / dc;
    let grid = TimeGrid::new(t_max, 20000).unwrap();
    let ode = single_resonance_dynamics(gc, dc, 0.0, &grid).unwrap();
    let pops = ode.populations();

    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    for k in 1..pops.len() - 1 {
        let (a, b, cc) = (pops[k - 1], pops[k], pops[k + 1]);
        let t = ode.times[k];
        let dt = grid.dt();
        let denom = a - 2.0 * b + cc;
        let shift = if denom != 0.0 { 0.5 * (a - cc) / denom } else { 0.0 };
        if b < a && b <= cc {
            minima.push(t + shift * dt);
        }
        if b > a && b >= cc {
            maxima.push((t + shift * dt, b - 0.25 * (a - cc) * shift));
        }
    }
    let measured = (minima[minima.len() - 1] - minima[0]) / (minima.len() - 1) as f64;
    let period_err = (measured - period).abs() / period;
    let envelope_err = maxima.iter().map(|(t, p)| (p - (-dc * t).exp()).abs() / (-dc * t).exp()).fold(0.0, f64::max);

    let vol = solve_volterra2(single_resonance_kernel(gc, dc, 0.0), &grid);
    let wp = (2.0 * gc * dc - dc * dc).sqrt();
    let vol_err = vol
        .times
        .iter()
        .zip(vol.populations())
        .map(|(t, p)| {
            let exact = (-dc * t / 2.0).exp() * ((wp * t / 2.0).cos() + dc / wp * (wp * t / 2.0).sin());
            (p - exact * exact).abs()
        })
        .fold(0.0, f64::max);
    outcome(
        period_err < 0.02 && envelope_err < 0.05 && vol_err < 0.01,
        format!(
            "Γ_C/Γ₀ {ratio:.1}, δω_C {dc:.3e}, Ω {omega:.3e}; period rel err {period_err:.2e}, envelope rel err {envelope_err:.2e}, Volterra vs closed form {vol_err:.2e}"
        ),
    )
}

fn green_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = QuadratureConfig::new(1e-11, 1e-14, 20000).unwrap();
    let m = LorentzMedium::new(0.6, 0.1).unwrap();
    let mut worst_int: f64 = 0.0;
    for _ in 0..10 {
        let omega = rng.random_range(0.6..1.6);
        let x: f64 = rng.random_range(-1.0..1.0);
        let xp: f64 = x + rng.random_range(-1.0..1.0);
        let eps_i = m.epsilon(omega).im;
        let ni = m.index(omega).im;
        let reach = 40.0 / (ni * omega);
        let (lo, hi) = (x.min(xp), x.max(xp));
        let mut breaks = vec![lo - reach, lo, hi, hi + reach];
        for k in 1..40 {
            breaks.push(lo - reach * k as f64 / 40.0);
            breaks.push(hi + reach * k as f64 / 40.0);
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let f = |s: f64| {
            omega * omega * eps_i * bulk_1d(x, s, omega, &m).unwrap() * bulk_1d(xp, s, omega, &m).unwrap().conj()
        };
        let (lhs, _) = integrate_with_breaks(&f, &breaks, &cfg).unwrap();
        let rhs = bulk_1d(x, xp, omega, &m).unwrap().im;
        worst_int = worst_int.max((lhs.re - rhs).abs().max(lhs.im.abs()) / rhs.abs().max(1e-300));
    }

    let qcfg = QuadratureConfig::default();
    let mut worst_rec: f64 = 0.0;
    let mut rel = |a: f64, scale: f64| worst_rec = worst_rec.max(a / scale.max(1e-300));
    for _ in 0..10 {
        let omega = rng.random_range(0.5..1.5);
        let x = rng.random_range(-2.0..2.0);
        let xp = rng.random_range(-2.0..2.0);
        let g = bulk_1d(x, xp, omega, &m).unwrap();
        rel((g - bulk_1d(xp, x, omega, &m).unwrap()).norm(), g.norm());

        let rho = Vector3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let a = bulk_iso(rho, omega, &m).unwrap();
        rel(a.reciprocity_defect(&bulk_iso(-rho, omega, &m).unwrap()), a.entries.norm());

        let (ec, et) = (Complex64::new(2.1, 0.3), Complex64::new(1.4, 0.1));
        let axis = Vector3::new(0.2, -0.4, 0.9);
        let u = uniaxial_bulk(rho, omega, ec, et, axis).unwrap();
        rel(u.reciprocity_defect(&uniaxial_bulk(-rho, omega, ec, et, axis).unwrap()), u.entries.norm());

        let r = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(0.1..1.0));
        let rp = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(0.1..1.0));
        let h = halfspace_scattering_tensor(r, rp, omega, &m, &qcfg).unwrap();
        rel(h.reciprocity_defect(&halfspace_scattering_tensor(rp, r, omega, &m, &qcfg).unwrap()), h.entries.norm());

        let cav = cavity_scattering_tensor(&SphericalCavity::new(0.3, m).unwrap(), omega).unwrap();
        rel(cav.reciprocity_defect(&cav), cav.entries.norm());
        let res = resonator_scattering_tensor(&SphericalResonator::new(3.0, 2.0, m).unwrap(), omega).unwrap();
        rel(res.reciprocity_defect(&res), res.entries.norm());
    }
    outcome(
        worst_int < 1e-6 && worst_rec < 1e-10,
        format!("integral relation max rel err {worst_int:.2e}; reciprocity max rel defect {worst_rec:.2e}"),
    )
}

fn kramers_kronig() -> Outcome {
    let cfg = QuadratureConfig::default();
    let m = LorentzMedium::new(0.46, 0.05).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let w = 0.1 + 2.9 * k as f64 / 49.0;
        let want = m.epsilon(w).re - 1.0;
        let got = kk_reconstruct(&m, w, &cfg).unwrap();
        worst = worst.max(((got - want) / want).abs());
    }
    outcome(worst < 1e-3, format!("max rel err {worst:.2e} on 50 points in [0.1, 3.0]"))
}

fn uniaxial_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let eps = Complex64::new(rng.random_range(1.0..4.0), rng.random_range(0.0..1.0));
        let m = ConstantMedium { eps };
        let omega = rng.random_range(0.3..2.0);
        let rho = Vector3::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let axis = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let u = uniaxial_bulk(rho, omega, eps, eps, axis).unwrap().entries;
        let iso = bulk_iso(rho, omega, &m).unwrap().entries;
        worst = worst.max((u - iso).norm() / iso.norm());
    }
    outcome(worst < 1e-10, format!("max rel diff {worst:.2e} over 50 random separations"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("unitarity TT† + AA† = I", unitarity),
        ("Glauber-Lewenstein limit", glauber_lewenstein),
        ("real-cavity expansion and band-gap peak", real_cavity_expansion),
        ("near-surface z^-3 law", near_surface),
        ("mode-mixing oracle equivalence", oracle_equivalence),
        ("entanglement degradation", entanglement_degradation),
        ("Markov decay", markov_decay),
        ("strong coupling", strong_coupling),
        ("Green-function identities", green_identities),
        ("Kramers-Kronig", kramers_kronig),
        ("uniaxial reduction", uniaxial_reduction),
    ];
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    let mut ran = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(k + 1))) {
            continue;
        }
        ran += 1;
        let t = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<42} {} ({}) [{:.1} s]",
            k + 1,
            name,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {} failed", ran - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
