//! Scenario evaluation.

use std::f64::consts::PI;

use macroqed_core::decay::{
    default_window, gamma_near_surface, gamma_real_cavity, gamma_resonator, rabi_frequency, resonance_width,
    single_resonance_dynamics, upper_state_dynamics,
};
use macroqed_core::fourport::{fibre_transmission, slab_matrices};
use macroqed_core::media::{band_gap, kk_reconstruct};
use macroqed_core::nalgebra::Vector3;
use macroqed_core::qstate::{bell_output, cat_output, entanglement_bounds, entanglement_re, fock_loss, wigner_s};
use macroqed_core::{
    BellKind, CavityMode, Complex64, Dielectric, Dipole, Medium, QuadratureConfig, SlabDevice, SphericalCavity,
    SphericalResonator, SurfaceMode, TimeGrid,
};
use rayon::prelude::*;

use crate::config::{CavityRadius, DynamicsMethod, Grid, Scenario, Spec, SpectrumGeometry};
use crate::error::CliError;
use crate::table::ResultTable;

type Row = Result<Vec<f64>, CliError>;

fn quad_meta(q: &QuadratureConfig) -> String {
    format!("quadrature rel_tol={:e} abs_tol={:e} max_subdivisions={}", q.rel_tol, q.abs_tol, q.max_subdivisions)
}

fn medium_meta(m: &Medium) -> Option<String> {
    match m {
        Medium::Lorentz(l) => {
            let (lo, hi) = band_gap(l);
            Some(format!("{lo:e} .. {hi:e}"))
        }
        _ => None,
    }
}

/// Evaluates `f` on every grid point, in parallel, keeping grid order; the first
/// failing point in grid order decides the error.
fn sweep<F>(grid: &Grid, f: F) -> Result<Vec<Vec<f64>>, CliError>
where
    F: Fn(f64) -> Row + Sync,
{
    let rows: Vec<Row> = grid.internal.par_iter().map(|&x| f(x)).collect();
    rows.into_iter().zip(&grid.values).map(|(r, v)| r.map_err(|e| e.at(&grid.variable, *v))).collect()
}

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Runs a validated scenario on the given number of worker threads (all cores when `None`).
pub fn run(scenario: &Scenario, threads: Option<usize>) -> Result<ResultTable, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Validation(vec![format!("threads: cannot start a pool of this size ({e})")]))?;
    pool.install(|| evaluate(scenario))
}

fn evaluate(sc: &Scenario) -> Result<ResultTable, CliError> {
    let g = &sc.sweep;
    let mut table;
    let mut tolerances = "none".to_string();
    let mut derived: Vec<(&str, String)> = Vec::new();
    match &sc.spec {
        Spec::DecaySpectrum { medium, geometry } => {
            if let Some(gap) = medium_meta(medium) {
                derived.push(("band_gap", gap));
            }
            match geometry {
                SpectrumGeometry::RealCavity(radius) => {
                    table = ResultTable::new(columns(&["omega_A", "gamma_ratio", "gamma_ratio_expansion"]));
                    table.rows = sweep(g, |w| {
                        let r = match radius {
                            CavityRadius::Fixed(r) => *r,
                            CavityRadius::PerLambdaA(f) => f * 2.0 * PI / w,
                        };
                        let cav = SphericalCavity::new(r, medium.clone())?;
                        let dip = Dipole::along_z(w)?;
                        let exact = gamma_real_cavity(&dip, &cav, CavityMode::Exact)?;
                        let expansion = gamma_real_cavity(&dip, &cav, CavityMode::Expansion)?;
                        Ok(vec![w, exact, expansion])
                    })?;
                }
                SpectrumGeometry::Resonator { r1, r2 } => {
                    let res = SphericalResonator::new(*r1, *r2, medium.clone())?;
                    table = ResultTable::new(columns(&["omega_A", "gamma_ratio"]));
                    table.rows = sweep(g, |w| Ok(vec![w, gamma_resonator(&Dipole::along_z(w)?, &res)?]))?;
                }
            }
        }
        Spec::DecayDynamics { wall, r1, r2, omega_a, gamma0_scale, method, detuning } => {
            let res = SphericalResonator::new(*r1, *r2, wall.clone())?;
            let dip = Dipole::new(*omega_a, Vector3::z(), *gamma0_scale)?;
            let ratio = gamma_resonator(&dip, &res)?;
            let gc = ratio * dip.gamma0_absolute();
            let dc = resonance_width(*r2, ratio)?;
            derived.push(("gamma_c_ratio", format!("{ratio:e}")));
            derived.push(("gamma_c", format!("{gc:e}")));
            derived.push(("delta_c", format!("{dc:e}")));
            derived.push(("rabi_frequency", format!("{:e}", rabi_frequency(gc, dc))));
            let n = g.values.len() - 1;
            let grid = TimeGrid::new(g.values[n], n)?;
            let traj = match method {
                DynamicsMethod::SingleResonance => single_resonance_dynamics(gc, dc, *detuning, &grid)?,
                DynamicsMethod::Spectral => {
                    let window = default_window(*omega_a, dc);
                    derived.push(("window", format!("{:e} .. {:e}", window.0, window.1)));
                    let spectrum = |w: f64| -> macroqed_core::Result<f64> {
                        Ok(gamma_resonator(&dip.retuned(w)?, &res)? * (w / omega_a).powi(3))
                    };
                    upper_state_dynamics(&dip, spectrum, &grid, window)?
                }
            };
            table = ResultTable::new(columns(&["t", "cu_re", "cu_im", "prob"]));
            for (t, c) in g.values.iter().zip(&traj.amplitudes) {
                table.push(vec![*t, c.re, c.im, c.norm_sqr()]);
            }
        }
        Spec::NearSurface { medium, omega_a, dipole, quadrature } => {
            tolerances = quad_meta(quadrature);
            let dip = Dipole::new(*omega_a, *dipole, 1.0)?;
            table = ResultTable::new(columns(&["z", "gamma_ratio", "leading_excess"]));
            let rows = sweep(g, |z| {
                let exact = gamma_near_surface(&dip, z, medium, SurfaceMode::Exact, quadrature)?;
                let lead = gamma_near_surface(&dip, z, medium, SurfaceMode::Asymptotic, quadrature)?;
                Ok(vec![exact, lead])
            })?;
            table.rows = g.values.iter().zip(rows).map(|(z, r)| [vec![*z], r].concat()).collect();
        }
        Spec::SlabMatrices { medium, l } => {
            let dev = SlabDevice::new(*l, *medium)?;
            table = ResultTable::new(columns(&[
                "omega",
                "t11_re",
                "t11_im",
                "t12_re",
                "t12_im",
                "a11_re",
                "a11_im",
                "a12_re",
                "a12_im",
                "unitarity_defect",
            ]));
            table.rows = sweep(g, |w| {
                let fm = slab_matrices(&dev, w)?;
                let (t, a) = (fm.t, fm.a);
                Ok(vec![
                    w,
                    t[(0, 0)].re,
                    t[(0, 0)].im,
                    t[(0, 1)].re,
                    t[(0, 1)].im,
                    a[(0, 0)].re,
                    a[(0, 0)].im,
                    a[(0, 1)].re,
                    a[(0, 1)].im,
                    fm.unitarity_defect(),
                ])
            })?;
        }
        Spec::FockLoss { n, plate } => {
            let mut names = vec![g.variable.clone()];
            if plate.is_some() {
                names.push("transmissivity".into());
            }
            names.extend((0..=*n).map(|k| format!("p_{k}")));
            names.push("mean_photon_number".into());
            table = ResultTable::new(names);
            let rows = sweep(g, |x| {
                let t2 = match plate {
                    Some((m, w)) => slab_matrices(&SlabDevice::new(x, *m)?, *w)?.t[(0, 1)].norm_sqr(),
                    None => x,
                };
                let rho = fock_loss(*n, t2)?;
                let mut row = if plate.is_some() { vec![t2] } else { Vec::new() };
                row.extend((0..=*n).map(|k| rho.entry(k, k).re));
                row.push(rho.mean_photon_number());
                Ok(row)
            })?;
            table.rows = g.values.iter().zip(rows).map(|(x, r)| [vec![*x], r].concat()).collect();
        }
        Spec::CatDecoherence { alpha, absorption_length, n_r, omega } => {
            table = ResultTable::new(columns(&[
                "l",
                "transmissivity",
                "purity",
                "mean_photon_number",
                "wigner_origin",
                "coherence",
            ]));
            let rows = sweep(g, |l| {
                let t = fibre_transmission(l, *absorption_length, *n_r, *omega)?;
                let rho = cat_output(*alpha, t)?;
                let coherence = (-2.0 * alpha.norm_sqr() * (1.0 - t.norm_sqr())).exp();
                let w0 = wigner_s(&rho, Complex64::new(0.0, 0.0), 0.0)?;
                Ok(vec![t.norm_sqr(), rho.purity(), rho.mean_photon_number(), w0, coherence])
            })?;
            table.rows = g.values.iter().zip(rows).map(|(x, r)| [vec![*x], r].concat()).collect();
        }
        Spec::EntanglementDegradation { absorption_length, n_r, omega, ree } => {
            tolerances =
                format!("ree terms={} restarts={} tol={:e} seed={}", ree.terms, ree.restarts, ree.tol, ree.seed);
            table = ResultTable::new(columns(&[
                "l",
                "transmissivity",
                "e_psi",
                "e_phi",
                "bound_psi",
                "bound_phi",
                "converged",
            ]));
            let rows = sweep(g, |l| {
                let t = fibre_transmission(l, *absorption_length, *n_r, *omega)?;
                let psi = entanglement_re(&bell_output(BellKind::PsiMinus, t, t)?, ree)?;
                let phi = entanglement_re(&bell_output(BellKind::PhiMinus, t, t)?, ree)?;
                let converged = if psi.converged && phi.converged { 1.0 } else { 0.0 };
                Ok(vec![
                    t.norm_sqr(),
                    psi.value,
                    phi.value,
                    entanglement_bounds(BellKind::PsiMinus, t),
                    entanglement_bounds(BellKind::PhiMinus, t),
                    converged,
                ])
            })?;
            table.rows = g.values.iter().zip(rows).map(|(x, r)| [vec![*x], r].concat()).collect();
        }
        Spec::KkCheck { medium, quadrature } => {
            tolerances = quad_meta(quadrature);
            table = ResultTable::new(columns(&["omega", "eps_re_minus_one", "kk", "abs_error", "rel_error"]));
            table.rows = sweep(g, |w| {
                let direct = medium.epsilon(w).re - 1.0;
                let kk = kk_reconstruct(medium, w, quadrature)?;
                let err = (kk - direct).abs();
                Ok(vec![w, direct, kk, err, err / direct.abs().max(f64::MIN_POSITIVE)])
            })?;
        }
    }
    table.metadata = vec![
        ("tool".into(), format!("macroqed {}", env!("CARGO_PKG_VERSION"))),
        ("scenario".into(), sc.kind.name().into()),
        ("length_unit".into(), sc.length_unit.name().into()),
        ("config".into(), sc.config.to_string()),
        ("tolerances".into(), tolerances),
    ];
    for (k, v) in derived {
        table.meta(k, v);
    }
    Ok(table)
}
