//! Macroscopic QED in absorbing dielectrics.
//!
//! Green functions of the geometries used for spontaneous-decay studies, decay
//! rates and non-Markovian upper-state dynamics, and quantum-state transformation
//! at lossy four-port devices. Units throughout: c = 1, ω_T = 1, lengths in c/ω_T,
//! rates relative to the free-space rate Γ₀.

pub mod decay;
pub mod error;
pub mod fourport;
pub mod greens;
pub mod media;
pub mod numerics;
pub mod qstate;

pub use error::{Error, Result};
pub use media::{ComplexIndex, ConstantMedium, Dielectric, LorentzMedium, Medium, MultiLorentz};
pub use numerics::{DecayTrajectory, QuadratureConfig, TimeGrid};

pub use decay::{CavityMode, Dipole, SurfaceMode};
pub use fourport::{FourPortMatrices, SlabDevice};
pub use greens::{GreenTensor3, SphericalCavity, SphericalResonator};
pub use qstate::{BellKind, FockDensity};

pub use nalgebra;
pub use num_complex::Complex64;
