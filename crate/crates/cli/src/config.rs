//! Strict parsing and validation of scenario configuration documents.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;

use macroqed_core::media::{ConstantMedium, LorentzMedium, Medium, MultiLorentz};
use macroqed_core::nalgebra::Vector3;
use macroqed_core::qstate::ReeConfig;
use macroqed_core::{Complex64, QuadratureConfig};
use serde_json::{Map, Value};

/// The scenarios the runner knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    DecaySpectrum,
    DecayDynamics,
    NearSurface,
    SlabMatrices,
    FockLoss,
    CatDecoherence,
    EntanglementDegradation,
    KkCheck,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 8] = [
        ScenarioKind::DecaySpectrum,
        ScenarioKind::DecayDynamics,
        ScenarioKind::NearSurface,
        ScenarioKind::SlabMatrices,
        ScenarioKind::FockLoss,
        ScenarioKind::CatDecoherence,
        ScenarioKind::EntanglementDegradation,
        ScenarioKind::KkCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::DecaySpectrum => "decay-spectrum",
            ScenarioKind::DecayDynamics => "decay-dynamics",
            ScenarioKind::NearSurface => "near-surface",
            ScenarioKind::SlabMatrices => "slab-matrices",
            ScenarioKind::FockLoss => "fock-loss",
            ScenarioKind::CatDecoherence => "cat-decoherence",
            ScenarioKind::EntanglementDegradation => "entanglement-degradation",
            ScenarioKind::KkCheck => "kk-check",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Sweep variables the scenario accepts, and whether each is a length.
    pub fn sweep_variables(self) -> &'static [(&'static str, bool)] {
        match self {
            ScenarioKind::DecaySpectrum => &[("omega_A", false)],
            ScenarioKind::DecayDynamics => &[("t", false)],
            ScenarioKind::NearSurface => &[("z", true)],
            ScenarioKind::SlabMatrices | ScenarioKind::KkCheck => &[("omega", false)],
            ScenarioKind::FockLoss => &[("l", true), ("transmissivity", false)],
            ScenarioKind::CatDecoherence | ScenarioKind::EntanglementDegradation => &[("l", true)],
        }
    }

    /// One-paragraph description for `list-scenarios`.
    pub fn help(self) -> &'static str {
        match self {
            ScenarioKind::DecaySpectrum => {
                "Γ/Γ₀ against the transition frequency.\n  \
                 params: medium, geometry = \"real-cavity\" (radius | radius_per_lambda_A) or \"resonator\" (r1, r2)\n  \
                 sweep: omega_A\n  \
                 columns: omega_A, gamma_ratio[, gamma_ratio_expansion]"
            }
            ScenarioKind::DecayDynamics => {
                "Upper-state amplitude of an atom at the centre of a spherical resonator.\n  \
                 params: medium (wall), r1, r2, omega_A, gamma0_scale, method = \"single-resonance\" | \"spectral\", detuning\n  \
                 sweep: t (start 0, uniform)\n  \
                 columns: t, cu_re, cu_im, prob"
            }
            ScenarioKind::NearSurface => {
                "Γ/Γ₀ of an atom at height z above a half-space.\n  \
                 params: medium, omega_A, dipole = \"z\" | \"x\" | [dx, dy, dz], quadrature\n  \
                 sweep: z\n  \
                 columns: z, gamma_ratio, leading_excess"
            }
            ScenarioKind::SlabMatrices => {
                "Transmission and absorption matrices of a plate.\n  \
                 params: medium (lorentz), l\n  \
                 sweep: omega\n  \
                 columns: omega, t11_re, t11_im, t12_re, t12_im, a11_re, a11_im, a12_re, a12_im, unitarity_defect"
            }
            ScenarioKind::FockLoss => {
                "Photon-number distribution of an n-photon state after one channel.\n  \
                 params: n; for sweep l also medium (lorentz) and omega\n  \
                 sweep: l (plate thickness) or transmissivity\n  \
                 columns: l, transmissivity | transmissivity; then p_0 .. p_n, mean_photon_number"
            }
            ScenarioKind::CatDecoherence => {
                "Even cat state sent through an absorbing fibre.\n  \
                 params: alpha_re, alpha_im, absorption_length, n_r, omega\n  \
                 sweep: l\n  \
                 columns: l, transmissivity, purity, mean_photon_number, wigner_origin, coherence"
            }
            ScenarioKind::EntanglementDegradation => {
                "Relative entropy of entanglement of Bell states after two equal fibres.\n  \
                 params: absorption_length, n_r, omega, restarts, terms, seed, tol\n  \
                 sweep: l\n  \
                 columns: l, transmissivity, e_psi, e_phi, bound_psi, bound_phi, converged"
            }
            ScenarioKind::KkCheck => {
                "Kramers–Kronig reconstruction of ε_R − 1 from ε_I.\n  \
                 params: medium (causal), quadrature\n  \
                 sweep: omega\n  \
                 columns: omega, eps_re_minus_one, kk, abs_error, rel_error"
            }
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unit of every length in a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthUnit {
    /// c/ω_T, the internal unit.
    COverOmegaT,
    /// λ_T = 2πc/ω_T.
    LambdaT,
}

impl LengthUnit {
    pub fn name(self) -> &'static str {
        match self {
            LengthUnit::COverOmegaT => "c_over_omega_T",
            LengthUnit::LambdaT => "lambda_T",
        }
    }

    /// Factor taking a length in this unit to c/ω_T.
    pub fn scale(self) -> f64 {
        match self {
            LengthUnit::COverOmegaT => 1.0,
            LengthUnit::LambdaT => 2.0 * PI,
        }
    }
}

/// Sweep grid; `values` are in the units of the configuration, `internal` in c/ω_T.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub variable: String,
    pub values: Vec<f64>,
    pub internal: Vec<f64>,
    pub uniform: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CavityRadius {
    Fixed(f64),
    PerLambdaA(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumGeometry {
    RealCavity(CavityRadius),
    Resonator { r1: f64, r2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsMethod {
    SingleResonance,
    Spectral,
}

/// Typed, unit-converted parameters of each scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum Spec {
    DecaySpectrum {
        medium: Medium,
        geometry: SpectrumGeometry,
    },
    DecayDynamics {
        wall: Medium,
        r1: f64,
        r2: f64,
        omega_a: f64,
        gamma0_scale: f64,
        method: DynamicsMethod,
        detuning: f64,
    },
    NearSurface {
        medium: Medium,
        omega_a: f64,
        dipole: Vector3<f64>,
        quadrature: QuadratureConfig,
    },
    SlabMatrices {
        medium: LorentzMedium,
        l: f64,
    },
    FockLoss {
        n: usize,
        plate: Option<(LorentzMedium, f64)>,
    },
    CatDecoherence {
        alpha: Complex64,
        absorption_length: f64,
        n_r: f64,
        omega: f64,
    },
    EntanglementDegradation {
        absorption_length: f64,
        n_r: f64,
        omega: f64,
        ree: ReeConfig,
    },
    KkCheck {
        medium: Medium,
        quadrature: QuadratureConfig,
    },
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub length_unit: LengthUnit,
    pub spec: Spec,
    pub sweep: Grid,
    /// The configuration document as given, echoed into every result table.
    pub config: Value,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.sweep;
        write!(
            f,
            "{} over {} = {:e} .. {:e} ({} points, lengths in {})",
            self.kind,
            g.variable,
            g.values[0],
            g.values[g.values.len() - 1],
            g.values.len(),
            self.length_unit.name()
        )
    }
}

const MAX_PHOTONS: usize = 60;
const MAX_POINTS: usize = 10_000_000;

struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
    seen: HashSet<&'a str>,
}

impl<'a> Obj<'a> {
    fn new(map: &'a Map<String, Value>, path: impl Into<String>) -> Self {
        Obj { map, path: path.into(), seen: HashSet::new() }
    }

    fn field(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn get(&mut self, key: &str) -> Option<&'a Value> {
        let (k, v) = self.map.get_key_value(key)?;
        self.seen.insert(k.as_str());
        Some(v)
    }

    fn number(&mut self, key: &str, required: bool, errs: &mut Vec<String>) -> Option<f64> {
        match self.get(key) {
            None => {
                if required {
                    errs.push(format!("{}: missing required field", self.field(key)));
                }
                None
            }
            Some(v) => match v.as_f64().filter(|x| x.is_finite()) {
                Some(x) => Some(x),
                None => {
                    errs.push(format!("{}: expected a finite number, got {v}", self.field(key)));
                    None
                }
            },
        }
    }

    fn positive(&mut self, key: &str, errs: &mut Vec<String>) -> Option<f64> {
        let x = self.number(key, true, errs)?;
        self.check(key, x, x > 0.0, "must be positive", errs)
    }

    fn check(&self, key: &str, x: f64, ok: bool, what: &str, errs: &mut Vec<String>) -> Option<f64> {
        if ok {
            Some(x)
        } else {
            errs.push(format!("{}: {what}, got {x}", self.field(key)));
            None
        }
    }

    fn integer(&mut self, key: &str, required: bool, max: usize, errs: &mut Vec<String>) -> Option<usize> {
        let v = match self.get(key) {
            None => {
                if required {
                    errs.push(format!("{}: missing required field", self.field(key)));
                }
                return None;
            }
            Some(v) => v,
        };
        match v.as_u64() {
            Some(n) if n as usize <= max => Some(n as usize),
            Some(n) => {
                errs.push(format!("{}: must not exceed {max}, got {n}", self.field(key)));
                None
            }
            None => {
                errs.push(format!("{}: expected a non-negative integer, got {v}", self.field(key)));
                None
            }
        }
    }

    fn string(&mut self, key: &str, required: bool, errs: &mut Vec<String>) -> Option<&'a str> {
        match self.get(key) {
            None => {
                if required {
                    errs.push(format!("{}: missing required field", self.field(key)));
                }
                None
            }
            Some(Value::String(s)) => Some(s.as_str()),
            Some(v) => {
                errs.push(format!("{}: expected a string, got {v}", self.field(key)));
                None
            }
        }
    }

    fn object(&mut self, key: &str, required: bool, errs: &mut Vec<String>) -> Option<Obj<'a>> {
        let path = self.field(key);
        match self.get(key) {
            None => {
                if required {
                    errs.push(format!("{path}: missing required field"));
                }
                None
            }
            Some(Value::Object(m)) => Some(Obj::new(m, path)),
            Some(v) => {
                errs.push(format!("{path}: expected an object, got {v}"));
                None
            }
        }
    }

    fn finish(self, errs: &mut Vec<String>) {
        for k in self.map.keys() {
            if !self.seen.contains(k.as_str()) {
                errs.push(format!("{}: unknown field", self.field(k)));
            }
        }
    }
}

fn parse_lorentz(o: &mut Obj, errs: &mut Vec<String>) -> Option<LorentzMedium> {
    let omega_t = o.number("omega_t", false, errs).unwrap_or(1.0);
    let omega_p = o.number("omega_p", true, errs);
    let gamma = o.number("gamma", true, errs);
    let omega_t = o.check("omega_t", omega_t, omega_t > 0.0, "must be positive", errs);
    let omega_p = omega_p.and_then(|x| o.check("omega_p", x, x >= 0.0, "must be non-negative", errs));
    let gamma = gamma.and_then(|x| o.check("gamma", x, x >= 0.0, "must be non-negative", errs));
    LorentzMedium::with_resonance(omega_t?, omega_p?, gamma?).ok()
}

fn parse_medium(parent: &mut Obj, key: &str, errs: &mut Vec<String>) -> Option<Medium> {
    let mut o = parent.object(key, true, errs)?;
    let model = o.string("model", true, errs);
    let medium = match model {
        None => None,
        Some("lorentz") => parse_lorentz(&mut o, errs).map(Medium::Lorentz),
        Some("multi-lorentz") => match o.get("terms") {
            Some(Value::Array(items)) if !items.is_empty() => {
                let mut terms = Vec::new();
                for (i, item) in items.iter().enumerate() {
                    let path = format!("{}[{i}]", o.field("terms"));
                    match item {
                        Value::Object(m) => {
                            let mut t = Obj::new(m, path);
                            terms.push(parse_lorentz(&mut t, errs));
                            t.finish(errs);
                        }
                        v => {
                            errs.push(format!("{path}: expected an object, got {v}"));
                            terms.push(None);
                        }
                    }
                }
                terms
                    .into_iter()
                    .collect::<Option<Vec<_>>>()
                    .and_then(|t| MultiLorentz::new(t).ok())
                    .map(Medium::MultiLorentz)
            }
            Some(v) => {
                errs.push(format!("{}: expected a non-empty array, got {v}", o.field("terms")));
                None
            }
            None => {
                errs.push(format!("{}: missing required field", o.field("terms")));
                None
            }
        },
        Some("constant") => {
            let re = o.number("eps_re", true, errs);
            let im = o.number("eps_im", true, errs);
            let im = im.and_then(|x| o.check("eps_im", x, x >= 0.0, "must be non-negative", errs));
            Some(Medium::Constant(ConstantMedium { eps: Complex64::new(re?, im?) }))
        }
        Some(other) => {
            errs.push(format!(
                "{}: unknown model \"{other}\" (expected lorentz, multi-lorentz or constant)",
                o.field("model")
            ));
            None
        }
    };
    o.finish(errs);
    medium
}

fn lorentz_only(m: Option<Medium>, field: &str, errs: &mut Vec<String>) -> Option<LorentzMedium> {
    match m? {
        Medium::Lorentz(l) => Some(l),
        _ => {
            errs.push(format!("{field}: this scenario needs a \"lorentz\" medium"));
            None
        }
    }
}

fn parse_quadrature(p: &mut Obj, errs: &mut Vec<String>) -> Option<QuadratureConfig> {
    let Some(mut o) = p.object("quadrature", false, errs) else {
        return Some(QuadratureConfig::default());
    };
    let d = QuadratureConfig::default();
    let rel = o.number("rel_tol", false, errs).unwrap_or(d.rel_tol);
    let abs = o.number("abs_tol", false, errs).unwrap_or(d.abs_tol);
    let max = o.integer("max_subdivisions", false, 10_000_000, errs).unwrap_or(d.max_subdivisions);
    let field = o.field("");
    o.finish(errs);
    match QuadratureConfig::new(rel, abs, max) {
        Ok(c) => Some(c),
        Err(e) => {
            errs.push(format!("{}: {e}", field.trim_end_matches('.')));
            None
        }
    }
}

fn parse_grid(root: &mut Obj, kind: ScenarioKind, unit: Option<LengthUnit>, errs: &mut Vec<String>) -> Option<Grid> {
    let mut o = root.object("sweep", true, errs)?;
    let variable = o.string("variable", true, errs);
    let allowed = kind.sweep_variables();
    let is_length = match variable {
        Some(v) => match allowed.iter().find(|(name, _)| *name == v) {
            Some((_, len)) => Some(*len),
            None => {
                let names: Vec<&str> = allowed.iter().map(|(n, _)| *n).collect();
                errs.push(format!(
                    "{}: \"{v}\" is not a sweep variable of {kind} (expected {})",
                    o.field("variable"),
                    names.join(" or ")
                ));
                None
            }
        },
        None => None,
    };
    let values_field = o.field("values");
    let (values, uniform) = if let Some(v) = o.get("values") {
        for k in ["start", "stop", "points"] {
            if o.map.contains_key(k) {
                errs.push(format!("{}: give either values or start/stop/points", o.field(k)));
                o.seen.insert(k);
            }
        }
        match v {
            Value::Array(items) if !items.is_empty() => {
                let xs: Vec<Option<f64>> = items.iter().map(|x| x.as_f64().filter(|x| x.is_finite())).collect();
                if xs.iter().any(|x| x.is_none()) {
                    errs.push(format!("{values_field}: every entry must be a finite number"));
                    (None, false)
                } else {
                    (Some(xs.into_iter().flatten().collect::<Vec<_>>()), false)
                }
            }
            v => {
                errs.push(format!("{values_field}: expected a non-empty array, got {v}"));
                (None, false)
            }
        }
    } else {
        let start = o.number("start", true, errs);
        let stop = o.number("stop", true, errs);
        let points = o.integer("points", true, MAX_POINTS, errs);
        let points = points.and_then(|n| {
            if n >= 2 {
                Some(n)
            } else {
                errs.push(format!("{}: needs at least 2 points, got {n}", o.field("points")));
                None
            }
        });
        match (start, stop, points) {
            (Some(a), Some(b), Some(n)) => {
                let xs: Vec<f64> =
                    (0..n).map(|k| if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect();
                (Some(xs), true)
            }
            _ => (None, true),
        }
    };
    let field = o.field("");
    let field = field.trim_end_matches('.').to_string();
    o.finish(errs);
    let values = values?;
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        errs.push(format!("{field}: grid must be strictly increasing"));
        return None;
    }
    let scale = if is_length? { unit?.scale() } else { 1.0 };
    Some(Grid {
        variable: variable?.to_string(),
        internal: values.iter().map(|v| v * scale).collect(),
        values,
        uniform,
    })
}

fn check_grid(grid: &Grid, kind: ScenarioKind, errs: &mut Vec<String>) {
    let first = grid.values[0];
    let last = grid.values[grid.values.len() - 1];
    match (kind, grid.variable.as_str()) {
        (ScenarioKind::DecayDynamics, _) => {
            if !grid.uniform || first != 0.0 {
                errs.push("sweep: decay-dynamics needs a uniform time grid given by start = 0, stop and points".into());
            }
        }
        (ScenarioKind::FockLoss, "transmissivity") => {
            if first < 0.0 || last > 1.0 {
                errs.push(format!("sweep: transmissivity must lie in [0, 1], got {first} .. {last}"));
            }
        }
        (ScenarioKind::KkCheck, _) => {
            if first <= 0.0 || last >= macroqed_core::media::KK_CUTOFF {
                errs.push(format!(
                    "sweep: kk-check frequencies must lie in (0, {}), got {first} .. {last}",
                    macroqed_core::media::KK_CUTOFF
                ));
            }
        }
        (ScenarioKind::FockLoss, "l")
        | (ScenarioKind::CatDecoherence, _)
        | (ScenarioKind::EntanglementDegradation, _) => {
            if first < 0.0 {
                errs.push(format!("sweep: lengths must be non-negative, got {first}"));
            }
        }
        _ => {
            if first <= 0.0 {
                errs.push(format!("sweep: {} must be positive, got {first}", grid.variable));
            }
        }
    }
}

fn parse_dipole(p: &mut Obj, errs: &mut Vec<String>) -> Option<Vector3<f64>> {
    let field = p.field("dipole");
    let d = match p.get("dipole") {
        None => Vector3::z(),
        Some(Value::String(s)) if s == "z" => Vector3::z(),
        Some(Value::String(s)) if s == "x" => Vector3::x(),
        Some(Value::Array(a)) if a.len() == 3 && a.iter().all(|x| x.as_f64().is_some_and(f64::is_finite)) => {
            Vector3::new(a[0].as_f64()?, a[1].as_f64()?, a[2].as_f64()?)
        }
        Some(v) => {
            errs.push(format!("{field}: expected \"z\", \"x\" or a 3-vector, got {v}"));
            return None;
        }
    };
    if d.norm() == 0.0 {
        errs.push(format!("{field}: orientation must be non-zero"));
        return None;
    }
    Some(d.normalize())
}

fn parse_spec(
    kind: ScenarioKind,
    p: &mut Obj,
    unit: Option<LengthUnit>,
    grid: Option<&Grid>,
    errs: &mut Vec<String>,
) -> Option<Spec> {
    let len = |x: Option<f64>| -> Option<f64> { Some(x? * unit?.scale()) };
    match kind {
        ScenarioKind::DecaySpectrum => {
            let medium = parse_medium(p, "medium", errs);
            let geometry = match p.string("geometry", true, errs) {
                Some("real-cavity") => {
                    let fixed = p.number("radius", false, errs);
                    let per = p.number("radius_per_lambda_A", false, errs);
                    match (fixed, per) {
                        (Some(r), None) => p
                            .check("radius", r, r > 0.0, "must be positive", errs)
                            .and_then(|r| len(Some(r)))
                            .map(CavityRadius::Fixed),
                        (None, Some(f)) => p
                            .check("radius_per_lambda_A", f, f > 0.0, "must be positive", errs)
                            .map(CavityRadius::PerLambdaA),
                        (Some(_), Some(_)) => {
                            errs.push(format!("{}: give either radius or radius_per_lambda_A", p.field("radius")));
                            None
                        }
                        (None, None) => {
                            errs.push(format!(
                                "{}: missing required field (or radius_per_lambda_A)",
                                p.field("radius")
                            ));
                            None
                        }
                    }
                    .map(SpectrumGeometry::RealCavity)
                }
                Some("resonator") => {
                    let r1 = len(p.positive("r1", errs));
                    let r2 = len(p.positive("r2", errs));
                    match (r1, r2) {
                        (Some(r1), Some(r2)) if r1 > r2 => Some(SpectrumGeometry::Resonator { r1, r2 }),
                        (Some(_), Some(_)) => {
                            errs.push(format!("{}: outer radius must exceed r2", p.field("r1")));
                            None
                        }
                        _ => None,
                    }
                }
                Some(other) => {
                    errs.push(format!(
                        "{}: unknown geometry \"{other}\" (expected real-cavity or resonator)",
                        p.field("geometry")
                    ));
                    None
                }
                None => None,
            };
            Some(Spec::DecaySpectrum { medium: medium?, geometry: geometry? })
        }
        ScenarioKind::DecayDynamics => {
            let wall = parse_medium(p, "medium", errs);
            let r1 = len(p.positive("r1", errs));
            let r2 = len(p.positive("r2", errs));
            if let (Some(a), Some(b)) = (r1, r2) {
                if a <= b {
                    errs.push(format!("{}: outer radius must exceed r2", p.field("r1")));
                }
            }
            let omega_a = p.positive("omega_A", errs);
            let gamma0_scale = p.positive("gamma0_scale", errs);
            let method = match p.string("method", false, errs) {
                None | Some("single-resonance") => Some(DynamicsMethod::SingleResonance),
                Some("spectral") => Some(DynamicsMethod::Spectral),
                Some(other) => {
                    errs.push(format!(
                        "{}: unknown method \"{other}\" (expected single-resonance or spectral)",
                        p.field("method")
                    ));
                    None
                }
            };
            let detuning = p.number("detuning", false, errs).unwrap_or(0.0);
            if detuning != 0.0 && method == Some(DynamicsMethod::Spectral) {
                errs.push(format!("{}: only used by the single-resonance method", p.field("detuning")));
            }
            let (r1, r2) = (r1?, r2?);
            (r1 > r2).then_some(())?;
            Some(Spec::DecayDynamics {
                wall: wall?,
                r1,
                r2,
                omega_a: omega_a?,
                gamma0_scale: gamma0_scale?,
                method: method?,
                detuning,
            })
        }
        ScenarioKind::NearSurface => {
            let medium = parse_medium(p, "medium", errs);
            let omega_a = p.positive("omega_A", errs);
            let dipole = parse_dipole(p, errs);
            let quadrature = parse_quadrature(p, errs);
            Some(Spec::NearSurface { medium: medium?, omega_a: omega_a?, dipole: dipole?, quadrature: quadrature? })
        }
        ScenarioKind::SlabMatrices => {
            let medium = lorentz_only(parse_medium(p, "medium", errs), &p.field("medium"), errs);
            let l = p.number("l", true, errs).and_then(|x| p.check("l", x, x >= 0.0, "must be non-negative", errs));
            Some(Spec::SlabMatrices { medium: medium?, l: len(l)? })
        }
        ScenarioKind::FockLoss => {
            let n = p.integer("n", true, MAX_PHOTONS, errs);
            let plate = match grid.map(|g| g.variable.as_str()) {
                Some("l") => {
                    let medium = lorentz_only(parse_medium(p, "medium", errs), &p.field("medium"), errs);
                    let omega = p.positive("omega", errs);
                    Some(Some((medium?, omega?)))
                }
                Some(_) => Some(None),
                None => None,
            };
            Some(Spec::FockLoss { n: n?, plate: plate? })
        }
        ScenarioKind::CatDecoherence => {
            let re = p.number("alpha_re", true, errs);
            let im = p.number("alpha_im", false, errs).unwrap_or(0.0);
            let alpha = re.map(|re| Complex64::new(re, im));
            if let Some(a) = alpha {
                if a.norm() > 5.0 {
                    errs.push(format!("{}: |alpha| must not exceed 5, got {}", p.field("alpha_re"), a.norm()));
                }
            }
            let absorption_length = len(p.positive("absorption_length", errs));
            let n_r = p.number("n_r", false, errs).unwrap_or(1.0);
            let n_r = p.check("n_r", n_r, n_r > 0.0, "must be positive", errs);
            let omega = p.number("omega", false, errs).unwrap_or(1.0);
            let omega = p.check("omega", omega, omega > 0.0, "must be positive", errs);
            let alpha = alpha.filter(|a| a.norm() <= 5.0);
            Some(Spec::CatDecoherence {
                alpha: alpha?,
                absorption_length: absorption_length?,
                n_r: n_r?,
                omega: omega?,
            })
        }
        ScenarioKind::EntanglementDegradation => {
            let absorption_length = len(p.positive("absorption_length", errs));
            let n_r = p.number("n_r", false, errs).unwrap_or(1.0);
            let n_r = p.check("n_r", n_r, n_r > 0.0, "must be positive", errs);
            let omega = p.number("omega", false, errs).unwrap_or(1.0);
            let omega = p.check("omega", omega, omega > 0.0, "must be positive", errs);
            let d = ReeConfig::default();
            let restarts = p.integer("restarts", false, 10_000, errs).unwrap_or(d.restarts);
            let terms = p.integer("terms", false, 64, errs).unwrap_or(d.terms);
            let seed = p.integer("seed", false, usize::MAX, errs).map_or(d.seed, |s| s as u64);
            let tol = p.number("tol", false, errs).unwrap_or(d.tol);
            let ok = restarts >= 2 && terms >= 1 && tol > 0.0;
            if restarts < 2 {
                errs.push(format!("{}: at least 2 restarts are needed to check convergence", p.field("restarts")));
            }
            if terms < 1 {
                errs.push(format!("{}: must be at least 1", p.field("terms")));
            }
            if !(tol > 0.0) {
                errs.push(format!("{}: must be positive, got {tol}", p.field("tol")));
            }
            let ree = ReeConfig { terms, restarts, tol, seed, ..d };
            ok.then_some(())?;
            Some(Spec::EntanglementDegradation { absorption_length: absorption_length?, n_r: n_r?, omega: omega?, ree })
        }
        ScenarioKind::KkCheck => {
            let field = p.field("medium");
            let medium = parse_medium(p, "medium", errs);
            if let Some(m) = &medium {
                if !m.is_causal() {
                    errs.push(format!("{field}: a constant permittivity has no Kramers–Kronig partner"));
                }
            }
            let quadrature = parse_quadrature(p, errs);
            Some(Spec::KkCheck { medium: medium.filter(Medium::is_causal)?, quadrature: quadrature? })
        }
    }
}

/// Parses and validates a configuration document, reporting every problem found.
pub fn validate(text: &str) -> Result<Scenario, Vec<String>> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| vec![format!("line {}, column {}: {e}", e.line(), e.column())])?;
    let Value::Object(map) = &value else {
        return Err(vec!["top level: expected a JSON object".into()]);
    };
    let mut errs = Vec::new();
    let mut root = Obj::new(map, "");
    let kind = match root.string("scenario", true, &mut errs) {
        Some(name) => match ScenarioKind::from_name(name) {
            Some(k) => Some(k),
            None => {
                let names: Vec<&str> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
                errs.push(format!("scenario: unknown scenario \"{name}\" (expected one of {})", names.join(", ")));
                None
            }
        },
        None => None,
    };
    let unit = match root.string("length_unit", true, &mut errs) {
        Some("lambda_T") => Some(LengthUnit::LambdaT),
        Some("c_over_omega_T") => Some(LengthUnit::COverOmegaT),
        Some(other) => {
            errs.push(format!("length_unit: unknown unit \"{other}\" (expected lambda_T or c_over_omega_T)"));
            None
        }
        None => None,
    };
    let Some(kind) = kind else {
        root.get("params");
        root.get("sweep");
        root.finish(&mut errs);
        return Err(errs);
    };
    let grid = parse_grid(&mut root, kind, unit, &mut errs);
    if let Some(g) = &grid {
        check_grid(g, kind, &mut errs);
    }
    let spec = match root.object("params", true, &mut errs) {
        Some(mut p) => {
            let s = parse_spec(kind, &mut p, unit, grid.as_ref(), &mut errs);
            p.finish(&mut errs);
            s
        }
        None => None,
    };
    root.finish(&mut errs);
    match (spec, grid, unit) {
        (Some(spec), Some(sweep), Some(length_unit)) if errs.is_empty() => {
            Ok(Scenario { kind, length_unit, spec, sweep, config: value.clone() })
        }
        _ => {
            if errs.is_empty() {
                errs.push("configuration is invalid".into());
            }
            Err(errs)
        }
    }
}
