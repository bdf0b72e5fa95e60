use serde::{Deserialize, Serialize};

use crate::geometry::{Dir3, Edge, Isometry, Point3, Vec3};

/// A line given by a point and a unit direction; the carrier of an
/// (unfolded) edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeLine {
    pub p: Point3,
    pub x: Dir3,
}

impl EdgeLine {
    pub fn new(p: Point3, x: Dir3) -> Self {
        Self { p, x }
    }

    /// The line through two distinct points.
    pub fn through(a: Point3, b: Point3) -> Option<Self> {
        Dir3::new(b - a).map(|x| Self { p: a, x })
    }

    pub fn from_edge(edge: &Edge) -> Self {
        Self {
            p: edge.point,
            x: edge.dir,
        }
    }

    pub fn transformed(&self, iso: &Isometry) -> Self {
        Self {
            p: iso.apply_point(&self.p),
            x: iso.apply_dir(&self.x),
        }
    }

    #[inline]
    pub fn point_at(&self, t: f64) -> Point3 {
        self.p + self.x.into_inner() * t
    }

    pub fn distance_to_point(&self, q: &Point3) -> f64 {
        (q - self.p).cross(&self.x).norm()
    }

    /// Distance between the two (infinite) lines.
    pub fn distance_to_line(&self, other: &EdgeLine) -> f64 {
        let n = self.x.cross(&other.x);
        let w = other.p - self.p;
        let nn = n.norm();
        if nn < 1e-12 {
            w.cross(&self.x).norm()
        } else {
            w.dot(&n).abs() / nn
        }
    }

    /// Whether both lines are the same set of points within `tol`.
    pub fn same_line(&self, other: &EdgeLine, tol: f64) -> bool {
        self.x.cross(&other.x).norm() <= tol && self.distance_to_point(&other.p) <= tol
    }

    /// Twice the triple product `<q - p, x × x'>`: zero iff coplanar.
    pub(crate) fn coplanarity(&self, other: &EdgeLine) -> f64 {
        (other.p - self.p).dot(&self.x.cross(&other.x))
    }

    pub fn direction(&self) -> Vec3 {
        self.x.into_inner()
    }
}
