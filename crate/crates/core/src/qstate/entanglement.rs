//! Relative entropy of entanglement of two-qubit states.
//!
//! Separable states are parametrized as σ = Σ_i p_i |a_i⟩⟨a_i| ⊗ |b_i⟩⟨b_i| with
//! softmax weights and two Bloch angles per qubit; the minimum of S(ρ‖σ) is found
//! by Nelder–Mead from seeded random starts, each polished by BFGS with the
//! analytic gradient.

use argmin::core::{CostFunction, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::neldermead::NelderMead;
use argmin::solver::quasinewton::BFGS;
use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FockDensity;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const PARAMS_PER_TERM: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReeConfig {
    /// Number of product terms in σ.
    pub terms: usize,
    pub restarts: usize,
    /// Target accuracy in E; restarts agreeing within it count as converged.
    pub tol: f64,
    pub seed: u64,
    pub simplex_iters: u64,
    pub polish_iters: u64,
}

impl Default for ReeConfig {
    fn default() -> Self {
        ReeConfig { terms: 8, restarts: 20, tol: 1e-5, seed: 0x5eed_2001, simplex_iters: 5000, polish_iters: 500 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReeResult {
    pub value: f64,
    /// True when at least two restarts reached the best value within `tol`.
    pub converged: bool,
    /// Gap between the best and the second-best restart.
    pub agreement: f64,
}

fn qubit_projector(theta: f64, phi: f64) -> Matrix2<Complex64> {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    Matrix2::new(Complex64::new(c * c, 0.0), c * s * e.conj(), c * s * e, Complex64::new(s * s, 0.0))
}

fn d_theta(theta: f64, phi: f64) -> Matrix2<Complex64> {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let off = 0.5 * (c * c - s * s);
    Matrix2::new(Complex64::new(-c * s, 0.0), off * e.conj(), off * e, Complex64::new(c * s, 0.0))
}

fn d_phi(theta: f64, phi: f64) -> Matrix2<Complex64> {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let z = Complex64::new(0.0, 0.0);
    Matrix2::new(z, -I * c * s * e.conj(), I * c * s * e, z)
}

fn kron(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

fn softmax(x: &[f64], k: usize) -> Vec<f64> {
    let logits: Vec<f64> = (0..k).map(|i| x[i * PARAMS_PER_TERM]).collect();
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

struct Ree {
    rho: Matrix4<Complex64>,
    entropy_term: f64,
    terms: usize,
}

struct Eval {
    cost: f64,
    /// M with d(Tr ρ ln σ) = Tr(M dσ).
    m: Matrix4<Complex64>,
    weights: Vec<f64>,
    projectors: Vec<Matrix4<Complex64>>,
    sigma: Matrix4<Complex64>,
}

impl Ree {
    fn new(rho: &FockDensity, terms: usize) -> Result<Self> {
        if rho.mode_dims() != [2, 2] {
            return Err(Error::domain("relative entropy of entanglement needs a two-qubit state"));
        }
        let r = Matrix4::from_fn(|i, j| rho.entry(i, j));
        let eig = r.symmetric_eigen();
        let entropy_term = eig.eigenvalues.iter().filter(|&&p| p > 1e-14).map(|p| p * p.ln()).sum();
        Ok(Ree { rho: r, entropy_term, terms })
    }

    fn evaluate(&self, x: &[f64], with_gradient: bool) -> Eval {
        let weights = softmax(x, self.terms);
        let mut projectors = Vec::with_capacity(self.terms);
        let mut sigma = Matrix4::zeros();
        for (i, w) in weights.iter().enumerate() {
            let p = &x[i * PARAMS_PER_TERM..(i + 1) * PARAMS_PER_TERM];
            let proj = kron(&qubit_projector(p[1], p[2]), &qubit_projector(p[3], p[4]));
            sigma += proj * Complex64::new(*w, 0.0);
            projectors.push(proj);
        }
        let eig = sigma.symmetric_eigen();
        let q: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(1e-300)).collect();
        let v = eig.eigenvectors;
        let rt = v.adjoint() * self.rho * v;
        let mut cross = 0.0;
        for j in 0..4 {
            cross += rt[(j, j)].re * q[j].ln();
        }
        let mut m = Matrix4::zeros();
        if with_gradient {
            let mut mt = Matrix4::zeros();
            for j in 0..4 {
                for k in 0..4 {
                    let f1 = if (q[j] - q[k]).abs() <= 1e-12 * q[j].max(q[k]) {
                        1.0 / q[j]
                    } else {
                        (q[j].ln() - q[k].ln()) / (q[j] - q[k])
                    };
                    mt[(j, k)] = rt[(j, k)] * f1;
                }
            }
            m = v * mt * v.adjoint();
        }
        Eval { cost: self.entropy_term - cross, m, weights, projectors, sigma }
    }

    fn gradient_of(&self, x: &[f64]) -> Vec<f64> {
        let ev = self.evaluate(x, true);
        let dot = |d: &Matrix4<Complex64>| -> f64 { -(ev.m * d).trace().re };
        let mut g = vec![0.0; x.len()];
        for i in 0..self.terms {
            let p = &x[i * PARAMS_PER_TERM..(i + 1) * PARAMS_PER_TERM];
            let w = ev.weights[i];
            let base = i * PARAMS_PER_TERM;
            g[base] = dot(&((ev.projectors[i] - ev.sigma) * Complex64::new(w, 0.0)));
            let a = qubit_projector(p[1], p[2]);
            let b = qubit_projector(p[3], p[4]);
            let wc = Complex64::new(w, 0.0);
            g[base + 1] = dot(&(kron(&d_theta(p[1], p[2]), &b) * wc));
            g[base + 2] = dot(&(kron(&d_phi(p[1], p[2]), &b) * wc));
            g[base + 3] = dot(&(kron(&a, &d_theta(p[3], p[4])) * wc));
            g[base + 4] = dot(&(kron(&a, &d_phi(p[3], p[4])) * wc));
        }
        g
    }
}

impl CostFunction for Ree {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.evaluate(x, false).cost)
    }
}

impl Gradient for Ree {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, x: &Self::Param) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        Ok(self.gradient_of(x))
    }
}

fn structured_start(rho: &Matrix4<Complex64>, terms: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x = random_start(terms, rng);
    for (i, (ta, tb)) in [
        (0.0, 0.0),
        (0.0, std::f64::consts::PI),
        (std::f64::consts::PI, 0.0),
        (std::f64::consts::PI, std::f64::consts::PI),
    ]
    .into_iter()
    .enumerate()
    .take(terms)
    {
        let b = i * PARAMS_PER_TERM;
        x[b] = rho[(i, i)].re.max(1e-12).ln();
        x[b + 1] = ta;
        x[b + 2] = 0.0;
        x[b + 3] = tb;
        x[b + 4] = 0.0;
    }
    for i in 4..terms {
        x[i * PARAMS_PER_TERM] = (1e-6f64).ln();
    }
    x
}

fn random_start(terms: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x = Vec::with_capacity(terms * PARAMS_PER_TERM);
    for _ in 0..terms {
        x.push(rng.random_range(-1.0..1.0));
        x.push(rng.random_range(0.0..std::f64::consts::PI));
        x.push(rng.random_range(0.0..std::f64::consts::TAU));
        x.push(rng.random_range(0.0..std::f64::consts::PI));
        x.push(rng.random_range(0.0..std::f64::consts::TAU));
    }
    x
}

fn optimise(problem: &Ree, start: Vec<f64>, cfg: &ReeConfig) -> (f64, Vec<f64>) {
    let n = start.len();
    let mut simplex = vec![start.clone()];
    for i in 0..n {
        let mut p = start.clone();
        p[i] += if i % PARAMS_PER_TERM == 0 { 0.5 } else { 0.3 };
        simplex.push(p);
    }
    let mut best = (problem.evaluate(&start, false).cost, start);
    let nm = NelderMead::new(simplex).with_sd_tolerance(1e-15).expect("valid tolerance");
    let nm_run = Executor::new(Ree { rho: problem.rho, entropy_term: problem.entropy_term, terms: problem.terms }, nm)
        .configure(|s| s.max_iters(cfg.simplex_iters))
        .run();
    if let Ok(res) = nm_run {
        let st = res.state();
        if let Some(p) = st.get_best_param() {
            if st.get_best_cost() < best.0 {
                best = (st.get_best_cost(), p.clone());
            }
        }
    }

    let identity: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let solver = BFGS::new(MoreThuenteLineSearch::new())
        .with_tolerance_grad(1e-13)
        .expect("valid tolerance")
        .with_tolerance_cost(1e-16)
        .expect("valid tolerance");
    let start = best.1.clone();
    let polish =
        Executor::new(Ree { rho: problem.rho, entropy_term: problem.entropy_term, terms: problem.terms }, solver)
            .configure(|s| s.param(start).inv_hessian(identity).max_iters(cfg.polish_iters))
            .run();
    if let Ok(res) = polish {
        let st = res.state();
        if let Some(p) = st.get_best_param() {
            let c = st.get_best_cost();
            if c.is_finite() && c < best.0 {
                best = (c, p.clone());
            }
        }
    }
    best
}

/// E(ρ) = min over separable σ of S(ρ‖σ), for a state on two qubits (mode dims [2, 2]).
pub fn entanglement_re(rho: &FockDensity, cfg: &ReeConfig) -> Result<ReeResult> {
    if cfg.terms < 4 || cfg.restarts == 0 {
        return Err(Error::validation("entanglement search needs at least 4 terms and one restart"));
    }
    let problem = Ree::new(rho, cfg.terms)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut values = Vec::with_capacity(cfg.restarts);
    for r in 0..cfg.restarts {
        let start = if r == 0 {
            structured_start(&problem.rho, cfg.terms, &mut rng)
        } else {
            random_start(cfg.terms, &mut rng)
        };
        values.push(optimise(&problem, start, cfg).0);
    }
    values.sort_by(f64::total_cmp);
    let best = values[0];
    let agreement = values.get(1).map_or(f64::INFINITY, |v| v - best);
    if !best.is_finite() {
        return Err(Error::NonConvergence {
            what: "relative entropy of entanglement".into(),
            estimate: best,
            error: f64::INFINITY,
        });
    }
    Ok(ReeResult { value: best.max(0.0), converged: agreement <= cfg.tol, agreement })
}
