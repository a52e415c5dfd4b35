//! Adaptive Gauss–Kronrod quadrature for complex-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Accuracy targets shared by every adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-12, max_subdivisions: 2000 }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = QuadratureConfig { rel_tol, abs_tol, max_subdivisions };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::validation(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::validation(format!("abs_tol must be non-negative, got {}", self.abs_tol)));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::validation("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// 15-point Kronrod estimate and |K15 − G7| on one panel.
fn gk15<F>(f: &F, a: f64, b: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration over consecutive panels delimited by `breaks`.
///
/// Returns the value together with the summed error estimate.
pub fn integrate_with_breaks<F>(f: &F, breaks: &[f64], cfg: &QuadratureConfig) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    cfg.validate()?;
    if breaks.len() < 2 {
        return Err(Error::domain("need at least two break points"));
    }
    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::domain(format!("integration limits must be finite and increasing, got [{a}, {b}]")));
        }
        let (value, error) = gk15(f, a, b);
        total += value;
        err += error;
        heap.push(Panel { a, b, value, error });
    }
    let mut count = heap.len();
    loop {
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature (non-finite integrand)".into(),
                estimate: f64::NAN,
                error: f64::INFINITY,
            });
        }
        if err <= cfg.target(total) {
            return Ok((total, err));
        }
        if count >= cfg.max_subdivisions {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // panel cannot be split further in floating point
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        count += 1;
    }
    // recompute sums to shed accumulated cancellation before the final verdict
    let total: Complex64 = heap.iter().map(|p| p.value).sum();
    let err: f64 = heap.iter().map(|p| p.error).sum();
    if err <= cfg.target(total) {
        return Ok((total, err));
    }
    Err(Error::NonConvergence { what: "adaptive quadrature".into(), estimate: total.norm(), error: err })
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(a < b) {
        return Err(Error::domain(format!("require a < b, got a = {a}, b = {b}")));
    }
    integrate_with_breaks(&f, &[a, b], cfg).map(|(v, _)| v)
}

/// Real-valued convenience wrapper around [`integrate_adaptive`].
pub fn integrate_real<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_adaptive(|x| Complex64::new(f(x), 0.0), a, b, cfg).map(|v| v.re)
}

/// Integral over `[a, ∞)`.
///
/// Panels of doubling width starting at `scale` are integrated one after another;
/// the sum stops once three consecutive panels contribute less than `abs_tol · 1e-2`
/// and the integrand at their right ends is equally small.
pub fn integrate_semi_infinite<F>(f: F, a: f64, scale: f64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(scale > 0.0) {
        return Err(Error::domain("panel scale must be positive"));
    }
    let threshold = cfg.abs_tol.max(f64::MIN_POSITIVE) * 1e-2;
    let mut total = Complex64::new(0.0, 0.0);
    let mut left = a;
    let mut width = scale;
    let mut quiet = 0;
    for _ in 0..200 {
        let right = left + width;
        let panel_cfg = QuadratureConfig { abs_tol: threshold, ..*cfg };
        let (v, _) = integrate_with_breaks(&f, &[left, right], &panel_cfg)?;
        total += v;
        if v.norm() < threshold && f(right).norm() < threshold {
            quiet += 1;
            if quiet == 3 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        left = right;
        width *= 2.0;
    }
    Err(Error::NonConvergence { what: "semi-infinite quadrature".into(), estimate: total.norm(), error: f64::INFINITY })
}

/// Cauchy principal value of ∫ f over `[a, b]` with a simple pole at `x0`.
///
/// The symmetric neighbourhood `[x0 − h, x0 + h]`, `h = min(x0 − a, b − x0)`, is folded
/// onto `[0, h]` as f(x0 + u) + f(x0 − u), in which the pole cancels exactly, so the
/// excision limit h → 0 is taken analytically. The remaining one-sided piece is regular.
pub fn integrate_principal_value<F>(f: F, x0: f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    integrate_principal_value_with_breaks(f, x0, a, b, &[], cfg)
}

/// As [`integrate_principal_value`], with extra break points (e.g. resonance centres)
/// that help the adaptive subdivision.
pub fn integrate_principal_value_with_breaks<F>(
    f: F,
    x0: f64,
    a: f64,
    b: f64,
    hints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(a < x0 && x0 < b) {
        return Err(Error::domain(format!("pole {x0} must lie strictly inside ({a}, {b})")));
    }
    let h = (x0 - a).min(b - x0);
    let folded = |u: f64| {
        let (xp, xm) = (x0 + u, x0 - u);
        if xp == x0 || xm == x0 {
            // below the resolution of x0 the pair no longer straddles the pole
            return Complex64::new(0.0, 0.0);
        }
        f(xp) + f(xm)
    };
    let resolution = 1e3 * f64::EPSILON * x0.abs().max(h);
    let mut fold_breaks = vec![0.0];
    for &p in hints {
        let u = (p - x0).abs();
        if u > resolution && u < h {
            fold_breaks.push(u);
        }
    }
    fold_breaks.push(h);
    fold_breaks.sort_by(f64::total_cmp);
    fold_breaks.dedup();
    let (mut total, _) = integrate_with_breaks(&folded, &fold_breaks, cfg)?;

    let (lo, hi) = if x0 - a > h { (a, x0 - h) } else { (x0 + h, b) };
    if hi > lo {
        let mut rest = vec![lo];
        rest.extend(hints.iter().copied().filter(|&p| p > lo && p < hi));
        rest.push(hi);
        rest.sort_by(f64::total_cmp);
        rest.dedup();
        let (v, _) = integrate_with_breaks(&f, &rest, cfg)?;
        total += v;
    }
    Ok(total)
}

/// Fixed-order Gauss–Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}
