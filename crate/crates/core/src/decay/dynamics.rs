use std::f64::consts::PI;

use num_complex::Complex64;

use super::Dipole;
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, sinc, solve_volterra2_sampled, DecayTrajectory, TimeGrid};

/// Ω = √(2 Γ_C δω_C).
pub fn rabi_frequency(gamma_c: f64, delta_c: f64) -> f64 {
    (2.0 * gamma_c * delta_c).sqrt()
}

/// Width δω_C = c/(R₂ Γ_C/Γ₀) of a cavity line; `gamma_c_ratio` is Γ_C/Γ₀.
pub fn resonance_width(r2: f64, gamma_c_ratio: f64) -> Result<f64> {
    if !(r2 > 0.0 && gamma_c_ratio > 0.0) {
        return Err(Error::domain("resonance width needs R2 > 0 and Gamma_C > 0"));
    }
    Ok(1.0 / (r2 * gamma_c_ratio))
}

/// Volterra kernel of a single Lorentzian line of height Γ_C and half-width δω_C,
/// detuned by Δ = ω_C − ω_A:
/// K̄(τ) = −(Γ_C δω_C/2)(1 − e^{−(iΔ + δω_C)τ})/(iΔ + δω_C).
pub fn single_resonance_kernel(gamma_c: f64, delta_c: f64, detuning: f64) -> impl Fn(f64) -> Complex64 {
    let a = Complex64::new(delta_c, detuning);
    move |tau: f64| {
        let x = a * tau;
        // (1 − e^{−x})/a, with the small-x series
        let frac = if x.norm() < 1e-6 { Complex64::new(tau, 0.0) * (1.0 - x / 2.0) } else { (1.0 - (-x).exp()) / a };
        -0.5 * gamma_c * delta_c * frac
    }
}

/// Damped-oscillator dynamics C̈ + (iΔ + δω_C)Ċ + ½Γ_C δω_C C = 0, C(0) = 1, Ċ(0) = 0,
/// integrated with fourth-order Runge–Kutta at no more than (2π/Ω)/200 per step.
pub fn single_resonance_dynamics(
    gamma_c: f64,
    delta_c: f64,
    detuning: f64,
    grid: &TimeGrid,
) -> Result<DecayTrajectory> {
    if !(gamma_c > 0.0 && delta_c > 0.0) {
        return Err(Error::domain("single-resonance dynamics needs Gamma_C > 0 and delta_C > 0"));
    }
    let omega = rabi_frequency(gamma_c, delta_c);
    let damp = Complex64::new(delta_c, detuning);
    let spring = 0.5 * gamma_c * delta_c;
    let dt_max = (2.0 * PI / omega / 200.0).min(0.1 / (damp.norm() + omega));
    let dt = grid.dt();
    let sub = (dt / dt_max).ceil().max(1.0) as usize;
    let h = dt / sub as f64;
    let rhs = |c: Complex64, d: Complex64| (d, -damp * d - spring * c);

    let mut c = Complex64::new(1.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    let mut amps = Vec::with_capacity(grid.n_steps + 1);
    amps.push(c);
    for _ in 0..grid.n_steps {
        for _ in 0..sub {
            let (k1c, k1d) = rhs(c, d);
            let (k2c, k2d) = rhs(c + k1c * (h / 2.0), d + k1d * (h / 2.0));
            let (k3c, k3d) = rhs(c + k2c * (h / 2.0), d + k2d * (h / 2.0));
            let (k4c, k4d) = rhs(c + k3c * h, d + k3d * h);
            c += (k1c + 2.0 * k2c + 2.0 * k3c + k4c) * (h / 6.0);
            d += (k1d + 2.0 * k2d + 2.0 * k3d + k4d) * (h / 6.0);
        }
        amps.push(c);
    }
    Ok(DecayTrajectory { times: grid.times(), amplitudes: amps })
}

/// Frequency window [max(ω_A/2, ω_A − 200δω_C), ω_A + 200δω_C] for the decay kernel.
pub fn default_window(omega_a: f64, delta_c: f64) -> (f64, f64) {
    ((0.5 * omega_a).max(omega_a - 200.0 * delta_c), omega_a + 200.0 * delta_c)
}

const GL_ORDER: usize = 8;
const SCAN_POINTS: usize = 4001;

/// Discretised rate spectrum for the kernel
/// K̄(τ) = (1/2π) ∫ Γ(ω) (e^{−iΔτ} − 1)/(iΔ) dω, Δ = ω − ω_A.
///
/// Γ(ω) is sampled once at Gauss–Legendre nodes on segments that are refined until
/// every segment is narrower than 2/t_max and resolves the local line shape; peaks
/// above three times the median are detected on a uniform scan and used as break points.
#[derive(Debug, Clone)]
pub struct SpectralKernel {
    detunings: Vec<f64>,
    weights: Vec<f64>,
    peaks: Vec<f64>,
}

impl SpectralKernel {
    /// `spectrum` returns Γ(ω)/Γ₀(ω_A); the absolute scale comes from the dipole.
    pub fn build<F>(dip: &Dipole, spectrum: F, window: (f64, f64), t_max: f64) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let (lo, hi) = window;
        let wa = dip.omega_a;
        if !(lo > 0.0 && lo < wa && wa < hi) {
            return Err(Error::domain(format!(
                "kernel window ({lo}, {hi}) must contain omega_A = {wa} and start above 0"
            )));
        }
        if !(t_max > 0.0) {
            return Err(Error::domain("t_max must be positive"));
        }
        let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
        let scan: Vec<f64> = (0..SCAN_POINTS).map(|k| spectrum(lo + k as f64 * step)).collect::<Result<_>>()?;
        let mut sorted = scan.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[SCAN_POINTS / 2];
        let mut peaks = Vec::new();
        for k in 1..SCAN_POINTS - 1 {
            if scan[k] > 3.0 * median && scan[k] >= scan[k - 1] && scan[k] > scan[k + 1] {
                peaks.push(lo + k as f64 * step);
            }
        }
        if peaks.is_empty() {
            log::warn!("no resonance found in the kernel window; dynamics will be close to exponential");
        }
        let mass: f64 = scan.iter().map(|v| v.abs()).sum::<f64>() * step;
        let tol = 1e-10 * mass.max(f64::MIN_POSITIVE);
        let w_max = 2.0 / t_max;

        let mut breaks = vec![lo, wa, hi];
        breaks.extend(peaks.iter().copied());
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        let (gx, gw) = gauss_legendre(GL_ORDER);
        let rule = |a: f64, b: f64| -> Result<(f64, Vec<(f64, f64)>)> {
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            let mut sum = 0.0;
            let mut pts = Vec::with_capacity(GL_ORDER);
            for (x, w) in gx.iter().zip(&gw) {
                let om = c + h * x;
                let v = spectrum(om)?;
                sum += w * h * v;
                pts.push((om, w * h * v));
            }
            Ok((sum, pts))
        };

        let mut nodes: Vec<(f64, f64)> = Vec::new();
        for pair in breaks.windows(2) {
            let mut stack = vec![(pair[0], pair[1], rule(pair[0], pair[1])?)];
            while let Some((a, b, (whole, pts))) = stack.pop() {
                let mid = 0.5 * (a + b);
                let left = rule(a, mid)?;
                let right = rule(mid, b)?;
                let settled = (whole - left.0 - right.0).abs() <= tol && b - a <= w_max;
                if settled || b - a < 1e-13 * b {
                    if settled {
                        nodes.extend(left.1);
                        nodes.extend(right.1);
                    } else {
                        nodes.extend(pts);
                    }
                } else {
                    stack.push((mid, b, right));
                    stack.push((a, mid, left));
                }
            }
        }
        let g0 = dip.gamma0_absolute() / (2.0 * PI);
        Ok(SpectralKernel {
            detunings: nodes.iter().map(|(om, _)| om - wa).collect(),
            weights: nodes.iter().map(|(_, w)| w * g0).collect(),
            peaks,
        })
    }

    /// K̄(τ).
    pub fn kbar(&self, tau: f64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (d, w) in self.detunings.iter().zip(&self.weights) {
            let half = 0.5 * d * tau;
            s += *w * sinc(half) * Complex64::from_polar(1.0, -half);
        }
        -s * tau
    }

    /// K̄(k dt) for k = 0..=n, advancing each node phase by one complex
    /// multiplication per step and resynchronising every 64 steps.
    pub fn kbar_samples(&self, dt: f64, n: usize) -> Vec<Complex64> {
        const RESYNC: usize = 64;
        let steps: Vec<Complex64> = self.detunings.iter().map(|d| Complex64::from_polar(1.0, -d * dt)).collect();
        let mut phase = vec![Complex64::new(1.0, 0.0); self.detunings.len()];
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let tau = k as f64 * dt;
            if k % RESYNC == 0 {
                for (p, d) in phase.iter_mut().zip(&self.detunings) {
                    *p = Complex64::from_polar(1.0, -d * tau);
                }
            }
            let mut s = Complex64::new(0.0, 0.0);
            for ((d, w), p) in self.detunings.iter().zip(&self.weights).zip(&phase) {
                let x = d * tau;
                if x.abs() < 1e-2 {
                    let half = 0.5 * x;
                    s += *w * tau * sinc(half) * Complex64::from_polar(1.0, -half);
                } else {
                    s += *w * Complex64::new(p.im, 1.0 - p.re) / -d;
                }
            }
            out.push(-s);
            for (p, st) in phase.iter_mut().zip(&steps) {
                *p *= st;
            }
        }
        out
    }

    /// Total rate ∫Γ dω/(2π) carried by the sampled spectrum, in units of ω_T.
    pub fn spectral_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn peaks(&self) -> &[f64] {
        &self.peaks
    }

    pub fn node_count(&self) -> usize {
        self.detunings.len()
    }
}

/// Upper-state amplitude from the Volterra equation with the kernel built from a
/// rate spectrum Γ(ω)/Γ₀(ω_A) over `window`.
pub fn upper_state_dynamics<F>(
    dip: &Dipole,
    spectrum: F,
    grid: &TimeGrid,
    window: (f64, f64),
) -> Result<DecayTrajectory>
where
    F: Fn(f64) -> Result<f64>,
{
    let kernel = SpectralKernel::build(dip, spectrum, window, grid.t_max)?;
    let dt = grid.dt();
    let samples = kernel.kbar_samples(dt, grid.n_steps);
    Ok(solve_volterra2_sampled(&samples, dt))
}
