//! Unfolding of orbits and the linear reflection group of a polyhedron.
//!
//! Instead of reflecting the trajectory at a face, the polyhedron is
//! reflected across that face and the trajectory continues straight. The
//! cumulative isometry `U_k = S_1 ∘ ... ∘ S_k` maps the k-th folded copy
//! onto its place along the straight line.

mod group;

use serde::Serialize;

use crate::billiard::OrbitRecord;
use crate::geometry::{Dir3, Isometry, Point3, Polyhedron};

pub use group::{generate_group, GroupClosure, GroupStatus, DEFAULT_GROUP_BOUND};

/// An orbit laid out along a straight line.
#[derive(Clone, Debug, Serialize)]
pub struct UnfoldingTrack {
    /// `U_0 = id, U_1, ...`, one per recorded phase point.
    #[serde(skip)]
    pub isometries: Vec<Isometry>,
    /// `U_k(m_k)`: bounce points in unfolded coordinates.
    pub points: Vec<Point3>,
    /// Hit faces of the unfolded copies, `U_k(face_k)`.
    pub faces: Vec<Vec<Point3>>,
    pub origin: Point3,
    pub direction: Dir3,
    /// Largest distance of an unfolded point from the line.
    pub residual: f64,
    /// Distance travelled from the first to the last point.
    pub path_length: f64,
}

impl UnfoldingTrack {
    /// `residual / path_length` (or the residual itself for a single point).
    pub fn relative_residual(&self) -> f64 {
        if self.path_length > 0.0 {
            self.residual / self.path_length
        } else {
            self.residual
        }
    }
}

/// Reflects copies of the table along the orbit so that all bounce points
/// lie on the initial ray; reports how far they actually stray from it.
pub fn unfold_orbit(record: &OrbitRecord, poly: &Polyhedron) -> UnfoldingTrack {
    let origin = record.points[0].m();
    let direction = record.points[0].theta();
    let mut iso = Isometry::identity();
    let mut isometries = Vec::with_capacity(record.points.len());
    let mut points: Vec<Point3> = Vec::with_capacity(record.points.len());
    let mut faces = Vec::with_capacity(record.points.len());
    let mut path_length = 0.0;
    for (k, x) in record.points.iter().enumerate() {
        if k > 0 {
            iso = iso.compose(&Isometry::reflection(&poly.face(x.face()).plane));
        }
        let p = iso.apply_point(&x.m());
        if let Some(prev) = points.last() {
            path_length += (p - *prev).norm();
        }
        isometries.push(iso);
        points.push(p);
        faces.push(
            poly.face_polygon(x.face())
                .iter()
                .map(|v| iso.apply_point(v))
                .collect(),
        );
    }
    let residual = points
        .iter()
        .map(|p| (p - origin).cross(&direction).norm())
        .fold(0.0, f64::max);
    UnfoldingTrack {
        isometries,
        points,
        faces,
        origin,
        direction,
        residual,
        path_length,
    }
}
