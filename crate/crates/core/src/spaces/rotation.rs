//! SO(3) under the geodesic (angular) distance.
//!
//! The distance between two rotations is the angle of `R₁ᵀR₂` in radians,
//! in `[0, π]`. The Frobenius norm of the matrix logarithm, `‖Log(R₁ᵀR₂)‖_F`,
//! equals `√2·θ`; this crate always reports `θ`.
//!
//! The angle is computed as `atan2(‖vee(A − Aᵀ)‖/2, (tr A − 1)/2)`, which is
//! the clamped `arccos((tr A − 1)/2)` without its loss of precision near 0.

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GmError, Result};
use crate::spaces::{check_weight, Space};

/// Per-entry tolerance for `RᵀR = I` and `det R = 1`.
pub const ORTHONORMAL_TOL: f64 = 1e-9;

/// A 3×3 rotation matrix, serialized as a row-major array of 9 numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Rotation3(Matrix3<f64>);

#[inline]
fn vee_antisymmetric(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

#[inline]
fn hat(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

fn rotation_angle(m: &Matrix3<f64>) -> f64 {
    let cos = 0.5 * (m.trace() - 1.0);
    let sin = vee_antisymmetric(m).norm();
    sin.atan2(cos)
}

impl Rotation3 {
    pub fn identity() -> Self {
        Rotation3(Matrix3::identity())
    }

    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(GmError::invalid("rotation matrix has non-finite entries"));
        }
        let gram = m.transpose() * m;
        let off = (gram - Matrix3::identity()).abs().max();
        if off > ORTHONORMAL_TOL {
            return Err(GmError::invalid(format!(
                "matrix is not orthonormal (max |RᵀR − I| = {off:e})"
            )));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > ORTHONORMAL_TOL {
            return Err(GmError::invalid(format!("rotation determinant is {det}, expected 1")));
        }
        Ok(Rotation3(m))
    }

    pub fn from_row_major(v: &[f64]) -> Result<Self> {
        if v.len() != 9 {
            return Err(GmError::invalid(format!(
                "rotation needs 9 row-major entries, got {}",
                v.len()
            )));
        }
        Self::from_matrix(Matrix3::from_row_slice(v))
    }

    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.0;
        [
            m[(0, 0)],
            m[(0, 1)],
            m[(0, 2)],
            m[(1, 0)],
            m[(1, 1)],
            m[(1, 2)],
            m[(2, 0)],
            m[(2, 1)],
            m[(2, 2)],
        ]
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let a = Vector3::from(axis);
        let norm = a.norm();
        if !(norm > 0.0) || !norm.is_finite() || !angle.is_finite() {
            return Err(GmError::invalid("axis must be a finite non-zero vector"));
        }
        Ok(Self::exp(&(a / norm * angle)))
    }

    /// Rodrigues' formula for the rotation vector `ω` (axis × angle).
    pub fn exp(omega: &Vector3<f64>) -> Self {
        let theta = omega.norm();
        let k = hat(omega);
        let k2 = k * k;
        let (a, b) = if theta < 1e-8 {
            (1.0 - theta * theta / 6.0, 0.5 - theta * theta / 24.0)
        } else {
            (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
        };
        Rotation3(Matrix3::identity() + k * a + k2 * b)
    }

    /// Rotation vector with angle in `[0, π]`.
    pub fn log(&self) -> Vector3<f64> {
        let m = &self.0;
        let theta = rotation_angle(m);
        let w = vee_antisymmetric(m);
        if theta < 1e-6 {
            return w * (1.0 + theta * theta / 6.0);
        }
        if theta < std::f64::consts::FRAC_PI_2 {
            return w * (theta / theta.sin());
        }
        // Near π the antisymmetric part vanishes; read the axis from
        // nnᵀ = (sym(R) − cos θ·I) / (1 − cos θ).
        let cos = theta.cos();
        let sym = (m + m.transpose()) * 0.5;
        let nn = (sym - Matrix3::identity() * cos) / (1.0 - cos);
        let (col, _) = (0..3)
            .map(|i| (i, nn[(i, i)]))
            .fold((0, f64::MIN), |best, c| if c.1 > best.1 { c } else { best });
        let mut n: Vector3<f64> = nn.column(col).into();
        n /= n.norm();
        if n.dot(&w) < 0.0 {
            n = -n;
        }
        n * theta
    }

    pub fn angle(&self) -> f64 {
        rotation_angle(&self.0)
    }

    pub fn transpose(&self) -> Self {
        Rotation3(self.0.transpose())
    }

    pub fn compose(&self, other: &Rotation3) -> Self {
        Rotation3(self.0 * other.0)
    }

    /// Nearest rotation (Frobenius) to an arbitrary matrix, via SVD.
    pub fn project(m: &Matrix3<f64>) -> Result<Self> {
        let svd = m.svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(GmError::invalid("SVD failed while projecting onto SO(3)")),
        };
        let mut d = Matrix3::identity();
        if (u * v_t).determinant() < 0.0 {
            d[(2, 2)] = -1.0;
        }
        Ok(Rotation3(u * d * v_t))
    }

    /// Uniformly distributed rotation (normalized Gaussian quaternion).
    pub fn random_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q = Quaternion::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            );
            if q.norm() > 1e-6 {
                let uq = UnitQuaternion::from_quaternion(q);
                return Rotation3(*uq.to_rotation_matrix().matrix());
            }
        }
    }
}

impl TryFrom<Vec<f64>> for Rotation3 {
    type Error = GmError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Rotation3::from_row_major(&v)
    }
}

impl From<Rotation3> for Vec<f64> {
    fn from(r: Rotation3) -> Self {
        r.to_row_major().to_vec()
    }
}

/// Rotation angle of `R₁ᵀR₂`, in `[0, π]`.
pub fn angular_distance(r1: &Rotation3, r2: &Rotation3) -> f64 {
    rotation_angle(&(r1.0.transpose() * r2.0))
}

/// Uniformly random unit vector.
pub fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        );
        let n = v.norm();
        if n > 1e-9 {
            return v / n;
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Rotations;

impl Space for Rotations {
    type Object = Rotation3;

    fn name(&self) -> &'static str {
        "rotation"
    }

    fn distance(&self, a: &Rotation3, b: &Rotation3) -> Result<f64> {
        Ok(angular_distance(a, b))
    }

    /// Point at fraction `w` along the geodesic from `x` to `z`.
    fn weighted_mean(&self, x: &Rotation3, z: &Rotation3, w: f64) -> Result<Rotation3> {
        check_weight(w)?;
        if w == 1.0 {
            return Ok(*z);
        }
        let step = x.transpose().compose(z).log() * w;
        Ok(x.compose(&Rotation3::exp(&step)))
    }
}
