//! Classical Green functions and tensors of the geometries with closed forms:
//! 1D bulk, isotropic and uniaxial 3D bulk, the planar half-space, the spherical
//! cavity and the spherical three-layer resonator.

mod bulk;
mod halfspace;
mod sphere;
mod uniaxial;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

pub use bulk::{bulk_1d, bulk_iso, bulk_iso_im_coincidence, bulk_iso_split, vacuum_im_coincidence};
pub use halfspace::{halfspace_reflection, halfspace_reflection_asymptotic, halfspace_scattering_tensor};
pub use sphere::{
    cavity_c1n, cavity_scattering_tensor, resonator_c1n, resonator_scattering_tensor, riccati, SphericalCavity,
    SphericalResonator,
};
pub use uniaxial::uniaxial_bulk;

/// Geometry a tensor value was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    BulkIsotropic,
    BulkUniaxial,
    /// Scattering part above a planar interface at z = 0.
    HalfSpace,
    /// Scattering part at the centre of a spherical cavity.
    SphericalCavity,
    /// Scattering part at the centre of a three-layer sphere.
    SphericalResonator,
}

/// Value of G(r, r′, ω) (or of its scattering part) as a 3×3 complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenTensor3 {
    pub entries: Matrix3<Complex64>,
    pub geometry: Geometry,
    pub r: Vector3<f64>,
    pub r_prime: Vector3<f64>,
}

impl GreenTensor3 {
    pub fn im(&self) -> Matrix3<f64> {
        self.entries.map(|z| z.im)
    }

    /// max |G_ij(r, r′) − G_ji(r′, r)| against the tensor evaluated with the points swapped.
    pub fn reciprocity_defect(&self, swapped: &GreenTensor3) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.entries[(i, j)] - swapped.entries[(j, i)]).norm());
            }
        }
        worst
    }
}

pub(crate) fn outer(a: &Vector3<f64>, b: &Vector3<f64>) -> Matrix3<Complex64> {
    Matrix3::from_fn(|i, j| Complex64::new(a[i] * b[j], 0.0))
}

pub(crate) fn identity3() -> Matrix3<Complex64> {
    Matrix3::identity()
}
