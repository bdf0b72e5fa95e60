use nalgebra::Matrix3;

use super::vector::{Dir3, Plane, Point3, Vec3};

/// An affine isometry `x -> linear * x + translation`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    pub linear: Matrix3<f64>,
    pub translation: Vec3,
}

impl Default for Isometry {
    fn default() -> Self {
        Self::identity()
    }
}

impl Isometry {
    pub fn identity() -> Self {
        Self {
            linear: Matrix3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn new(linear: Matrix3<f64>, translation: Vec3) -> Self {
        Self {
            linear,
            translation,
        }
    }

    pub fn translation(t: Vec3) -> Self {
        Self::new(Matrix3::identity(), t)
    }

    /// Mirror symmetry across `plane`.
    pub fn reflection(plane: &Plane) -> Self {
        let n = plane.normal.into_inner();
        Self {
            linear: Matrix3::identity() - 2.0 * n * n.transpose(),
            translation: -2.0 * plane.offset * n,
        }
    }

    #[inline]
    pub fn apply_point(&self, p: &Point3) -> Point3 {
        Point3::from(self.linear * p.coords + self.translation)
    }

    #[inline]
    pub fn apply_vec(&self, v: &Vec3) -> Vec3 {
        self.linear * v
    }

    pub fn apply_dir(&self, d: &Dir3) -> Dir3 {
        Dir3::new_unchecked(self.linear * d.into_inner())
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            linear: self.linear * other.linear,
            translation: self.linear * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let lt = self.linear.transpose();
        Isometry {
            linear: lt,
            translation: -(lt * self.translation),
        }
    }

    /// Image of a plane.
    pub fn apply_plane(&self, plane: &Plane) -> Plane {
        let normal = self.apply_dir(&plane.normal);
        let point = self.apply_point(&Point3::from(-plane.offset * plane.normal.into_inner()));
        Plane::through(&point, normal)
    }

    /// Largest entry of `LᵀL − I`.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.linear.transpose() * self.linear - Matrix3::identity()).amax()
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        self.orthogonality_defect() <= tol
    }

    pub fn determinant(&self) -> f64 {
        self.linear.determinant()
    }

    /// Whether the linear part is the identity within `tol`.
    pub fn is_translation(&self, tol: f64) -> bool {
        (self.linear - Matrix3::identity()).amax() <= tol
    }
}

/// Nearest orthogonal matrix (polar factor), used to stop drift in long
/// products of orthogonal matrices.
pub fn reorthonormalize(m: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested u");
    let v_t = svd.v_t.expect("requested v_t");
    u * v_t
}
