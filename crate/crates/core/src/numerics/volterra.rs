//! Second-kind Volterra equations C(t) = 1 + ∫₀ᵗ K̄(t − t′) C(t′) dt′.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform time grid t_k = k · t_max / n_steps, k = 0..=n_steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::validation(format!("t_max must be positive, got {t_max}")));
        }
        if n_steps < 2 {
            return Err(Error::validation(format!("n_steps must be at least 2, got {n_steps}")));
        }
        Ok(TimeGrid { t_max, n_steps })
    }

    pub fn dt(&self) -> f64 {
        self.t_max / self.n_steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..=self.n_steps).map(|k| k as f64 * dt).collect()
    }
}

/// Upper-state amplitude sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayTrajectory {
    pub times: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
}

impl DecayTrajectory {
    /// Occupation probabilities |C_u(t)|².
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Trapezoidal product integration with an implicit diagonal term.
pub fn solve_volterra2<K>(kbar: K, grid: &TimeGrid) -> DecayTrajectory
where
    K: Fn(f64) -> Complex64,
{
    let dt = grid.dt();
    let samples: Vec<Complex64> = (0..=grid.n_steps).map(|k| kbar(k as f64 * dt)).collect();
    solve_volterra2_sampled(&samples, dt)
}

/// Same as [`solve_volterra2`] for a kernel already sampled at `k · dt`.
pub fn solve_volterra2_sampled(kbar: &[Complex64], dt: f64) -> DecayTrajectory {
    let n = kbar.len();
    let mut c = Vec::with_capacity(n);
    if n == 0 {
        return DecayTrajectory { times: vec![], amplitudes: vec![] };
    }
    c.push(Complex64::new(1.0, 0.0));
    let diag = Complex64::new(1.0, 0.0) - kbar[0] * (0.5 * dt);
    for k in 1..n {
        let mut acc = kbar[k] * c[0] * 0.5;
        for j in 1..k {
            acc += kbar[k - j] * c[j];
        }
        c.push((Complex64::new(1.0, 0.0) + acc * dt) / diag);
    }
    DecayTrajectory { times: (0..n).map(|k| k as f64 * dt).collect(), amplitudes: c }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_kernel_gives_unity() {
        let g = TimeGrid::new(3.0, 50).unwrap();
        let tr = solve_volterra2(|_| Complex64::new(0.0, 0.0), &g);
        assert!(tr.amplitudes.iter().all(|c| *c == Complex64::new(1.0, 0.0)));
        assert_eq!(tr.len(), 51);
    }

    #[test]
    fn markov_kernel_decays_exponentially() {
        let gamma = 1.0;
        let t_max = 5.0 / gamma;
        let g = TimeGrid::new(t_max, (t_max / (1e-3 / gamma)) as usize).unwrap();
        let tr = solve_volterra2(|_| Complex64::new(-gamma / 2.0, 0.0), &g);
        let worst =
            tr.times.iter().zip(tr.populations()).map(|(t, p)| (p - (-gamma * t).exp()).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-4, "max deviation {worst}");
    }

    #[test]
    fn linear_kernel_matches_cosine() {
        // K̄(τ) = −τ ⇔ C̈ = −C, C(0) = 1, Ċ(0) = 0
        let g = TimeGrid::new(4.0, 4000).unwrap();
        let tr = solve_volterra2(|t| Complex64::new(-t, 0.0), &g);
        for (t, c) in tr.times.iter().zip(&tr.amplitudes) {
            assert!((c.re - t.cos()).abs() < 1e-5);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 10).is_err());
        assert!(TimeGrid::new(1.0, 1).is_err());
        let g = TimeGrid::new(2.0, 4).unwrap();
        assert_eq!(g.times(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }
}
