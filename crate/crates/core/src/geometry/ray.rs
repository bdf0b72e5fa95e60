use serde::Serialize;
use thiserror::Error;

use super::polyhedron::{EdgeId, Face, FaceId, Polyhedron, VertexId};
use super::vector::{Dir3, Point3};

/// What the first boundary intersection of a ray looks like.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HitKind {
    /// Transversal hit strictly inside a face.
    Face,
    /// Hit within tolerance of an edge (singular).
    Edge(EdgeId),
    /// Hit within tolerance of a vertex (singular).
    Vertex(VertexId),
    /// The ray starts on `face` and runs inside its plane (singular).
    Tangent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hit {
    pub kind: HitKind,
    /// Face that was hit; for `Tangent`, the face containing the ray.
    pub face: FaceId,
    pub point: Point3,
    /// Travel length from the start point.
    pub length: f64,
    /// In-plane distance from the hit to the nearest side of `face`.
    pub clearance: f64,
    /// Edge realizing `clearance`.
    pub nearest_edge: EdgeId,
}

impl Hit {
    pub fn is_regular(&self) -> bool {
        self.kind == HitKind::Face
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RayError {
    #[error("direction leaves the polyhedron through face {face} at the start point")]
    NoAdvance { face: FaceId },
    #[error("ray never meets the boundary (start point outside the polyhedron?)")]
    Unbounded,
}

/// Mirror law: `theta - 2 <theta, n> n` for the face normal `n`.
#[inline]
pub fn reflect_direction(theta: &Dir3, face: &Face) -> Dir3 {
    let n = face.plane.normal;
    Dir3::new_unchecked(theta.into_inner() - 2.0 * theta.dot(&n) * n.into_inner())
}

/// First boundary intersection of the ray `m + t theta`, `t > 0`.
///
/// `m` must lie in the closed polyhedron. Hits within `tol.plane` of an edge
/// or vertex of the hit face are reported as such.
pub fn cast_ray(m: &Point3, theta: &Dir3, poly: &Polyhedron) -> Result<Hit, RayError> {
    let tol = poly.tolerances();
    let mut best: Option<(f64, FaceId)> = None;
    let mut tangent = None;
    for (fi, face) in poly.faces().iter().enumerate() {
        let dot = theta.dot(&face.plane.normal);
        let dist = face.plane.signed_distance(m);
        if dist.abs() <= tol.plane {
            // start point lies on this face
            if dot < -tol.angle {
                return Err(RayError::NoAdvance { face: fi });
            }
            if dot <= tol.angle && tangent.is_none() {
                tangent = Some(fi);
            }
            continue;
        }
        if dot < 0.0 {
            let t = dist / -dot;
            if t > tol.step && best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, fi));
            }
        }
    }
    if let Some(fi) = tangent {
        let (clearance, side) = poly.face_clearance(fi, m);
        return Ok(Hit {
            kind: HitKind::Tangent,
            face: fi,
            point: *m,
            length: 0.0,
            clearance,
            nearest_edge: poly.face(fi).edges[side],
        });
    }
    let (length, fi) = best.ok_or(RayError::Unbounded)?;
    let face = poly.face(fi);
    let point = face.plane.project(&(m + theta.into_inner() * length));
    Ok(classify_on_face(poly, fi, point, length))
}

/// Classifies a boundary point `point` of face `fi` as face interior, edge or
/// vertex hit.
pub(crate) fn classify_on_face(poly: &Polyhedron, fi: FaceId, point: Point3, length: f64) -> Hit {
    let tol = poly.tolerances();
    let face = poly.face(fi);
    let k = face.vertices.len();
    let dists = poly.face_side_distances(fi, &point);
    let (mut s1, mut d1) = (0, f64::INFINITY);
    for (s, &d) in dists.iter().enumerate() {
        if d < d1 {
            (s1, d1) = (s, d);
        }
    }
    let mut kind = HitKind::Face;
    if d1 <= tol.plane {
        kind = HitKind::Edge(face.edges[s1]);
        let prev = (s1 + k - 1) % k;
        let next = (s1 + 1) % k;
        let start_v = face.vertices[s1];
        let end_v = face.vertices[next];
        if dists[prev] <= tol.plane || (point - poly.vertex(start_v)).norm() <= tol.plane {
            kind = HitKind::Vertex(start_v);
        } else if dists[next] <= tol.plane || (point - poly.vertex(end_v)).norm() <= tol.plane {
            kind = HitKind::Vertex(end_v);
        }
    }
    Hit {
        kind,
        face: fi,
        point,
        length,
        clearance: d1,
        nearest_edge: face.edges[s1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::solids;
    use crate::geometry::vector::Vec3;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    #[test]
    fn axis_ray_hits_top_face() {
        let cube = solids::cube();
        let hit = cast_ray(&p(0.5, 0.5, 0.0), &Dir3::Z, &cube).unwrap();
        assert_eq!(hit.kind, HitKind::Face);
        assert_eq!(cube.label(hit.face), "z1");
        assert!((hit.point - p(0.5, 0.5, 1.0)).norm() < 1e-15);
        assert!((hit.length - 1.0).abs() < 1e-15);
        assert!((hit.clearance - 0.5).abs() < 1e-15);
    }

    #[test]
    fn diagonal_ray_hits_vertical_edge() {
        let cube = solids::cube();
        let hit = cast_ray(&p(0.5, 0.5, 0.0), &Dir3::from_xyz(1.0, 1.0, 1.0), &cube).unwrap();
        let HitKind::Edge(e) = hit.kind else {
            panic!("expected edge hit, got {:?}", hit.kind)
        };
        let edge = cube.edge(e);
        assert!(edge.dir.cross(&Vec3::z()).norm() < 1e-15);
        assert!((edge.point.x - 1.0).abs() < 1e-15 && (edge.point.y - 1.0).abs() < 1e-15);
        assert!((hit.point - p(1.0, 1.0, 0.5)).norm() < 1e-12);
        assert!((hit.length - 0.5 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn slanted_ray_hits_side_face() {
        let cube = solids::cube();
        let hit = cast_ray(&p(0.25, 0.5, 0.0), &Dir3::from_xyz(1.0, 0.0, 1.0), &cube).unwrap();
        assert_eq!(hit.kind, HitKind::Face);
        assert_eq!(cube.label(hit.face), "x1");
        assert!((hit.point - p(1.0, 0.5, 0.75)).norm() < 1e-15);
    }

    #[test]
    fn vertex_hit() {
        let cube = solids::cube();
        let hit = cast_ray(&p(0.5, 0.5, 0.5), &Dir3::from_xyz(1.0, 1.0, 1.0), &cube).unwrap();
        assert!(matches!(hit.kind, HitKind::Vertex(v) if *cube.vertex(v) == p(1.0, 1.0, 1.0)));
    }

    #[test]
    fn outward_and_tangent_starts() {
        let cube = solids::cube();
        let err = cast_ray(&p(0.5, 0.5, 0.0), &-Dir3::Z, &cube).unwrap_err();
        assert_eq!(err, RayError::NoAdvance { face: cube.face_by_label("z0").unwrap() });
        let hit = cast_ray(&p(0.5, 0.5, 0.0), &Dir3::X, &cube).unwrap();
        assert_eq!(hit.kind, HitKind::Tangent);
        assert_eq!(cube.label(hit.face), "z0");
    }

    #[test]
    fn interior_start() {
        let t = solids::regular_tetrahedron();
        let hit = cast_ray(&Point3::origin(), &Dir3::from_xyz(-1.0, -1.0, -1.0), &t).unwrap();
        assert_eq!(hit.kind, HitKind::Face);
        assert!(hit.face == t.face_by_label("a").unwrap());
        assert!(t.face(hit.face).plane.signed_distance(&hit.point).abs() < 1e-15);
    }

    #[test]
    fn reflection_mirror_law() {
        let cube = solids::cube();
        let floor = cube.face(cube.face_by_label("z0").unwrap());
        let theta = Dir3::from_xyz(0.3, 0.4, -0.5);
        let r = reflect_direction(&theta, floor);
        assert!((r.into_inner() - Vec3::new(theta.x, theta.y, -theta.z)).norm() < 1e-15);
        let tangent = Dir3::from_xyz(0.6, 0.8, 0.0);
        assert_eq!(reflect_direction(&tangent, floor), tangent);
        let back = reflect_direction(&r, floor);
        assert!((back.into_inner() - theta.into_inner()).norm() < 1e-15);
    }
}
