//! Shared fixtures for the benchmarks.

use macroqed_core::{FockDensity, LorentzMedium, SlabDevice, SphericalResonator};

/// Wall medium of the strong-coupling resonator.
pub fn wall() -> LorentzMedium {
    LorentzMedium::new(0.5, 1e-4).expect("valid medium")
}

/// Resonator with R₂ = 30 λ_T and a one-wavelength wall.
pub fn resonator() -> SphericalResonator {
    let r2 = 60.0 * std::f64::consts::PI;
    SphericalResonator::new(r2 + 2.0 * std::f64::consts::PI, r2, wall()).expect("valid resonator")
}

pub fn plate() -> SlabDevice {
    SlabDevice::new(1.0, LorentzMedium::new(0.46, 0.05).expect("valid medium")).expect("valid plate")
}

/// Ψ⁻ after two fibres of length equal to the absorption length.
pub fn degraded_bell() -> FockDensity {
    let t = macroqed_core::Complex64::new((-1.0f64).exp(), 0.0);
    macroqed_core::qstate::bell_output(macroqed_core::BellKind::PhiMinus, t, t).expect("valid state")
}
