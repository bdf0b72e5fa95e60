//! Points, directions, planes and validated convex polyhedra, plus the two
//! primitive operations of the billiard: the mirror law and ray casting.

mod isometry;
mod polyhedron;
mod ray;
pub mod solids;
mod vector;

pub use isometry::{reorthonormalize, Isometry};
pub use polyhedron::{
    Edge, EdgeId, Face, FaceId, GeometryError, Polyhedron, PolyhedronLoadError, RawFace,
    RawPolyhedron, VertexId,
};
pub(crate) use ray::classify_on_face;
pub use ray::{cast_ray, reflect_direction, Hit, HitKind, RayError};
pub use vector::{point_segment_distance, segment_segment_distance, Dir3, Plane, Point3, Vec3};
