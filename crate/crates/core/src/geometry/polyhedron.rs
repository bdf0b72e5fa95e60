use std::collections::{HashMap, HashSet};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::vector::{Dir3, Plane, Point3, Vec3};
use crate::Tolerances;

pub type VertexId = usize;
pub type FaceId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("need at least {needed} {what}, got {got}")]
    TooFew {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(VertexId),
    #[error("face {face:?} references vertex {index}, but only {count} vertices exist")]
    BadIndex {
        face: String,
        index: usize,
        count: usize,
    },
    #[error("vertex {0} is not used by any face")]
    UnusedVertex(VertexId),
    #[error("face labels must be distinct non-empty strings (offending label {0:?})")]
    BadLabel(String),
    #[error("face {0:?} is degenerate (collinear or repeated vertices)")]
    DegenerateFace(String),
    #[error("face {0:?} is not planar")]
    NonPlanarFace(String),
    #[error("polyhedron is flat (all vertices coplanar)")]
    Flat,
    #[error("polyhedron is not convex: vertex {vertex} lies {distance:e} outside face {face:?}")]
    NonConvex {
        face: String,
        vertex: VertexId,
        distance: f64,
    },
    #[error("surface is not closed: edge ({0}, {1}) belongs to {2} face(s)")]
    OpenSurface(VertexId, VertexId, usize),
}

/// Face description as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawFace {
    pub label: String,
    pub vertices: Vec<usize>,
}

/// The on-disk polyhedron format: vertex coordinates and labeled faces
/// given as 0-based vertex index lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawPolyhedron {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<RawFace>,
}

impl RawPolyhedron {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("raw polyhedron always serializes")
    }
}

/// A face of the table. The plane normal points into the polyhedron and the
/// boundary is counter-clockwise when viewed from inside.
#[derive(Clone, Debug)]
pub struct Face {
    pub label: String,
    pub plane: Plane,
    pub vertices: Vec<VertexId>,
    /// `edges[i]` joins `vertices[i]` and `vertices[i + 1]` (cyclically).
    pub edges: Vec<EdgeId>,
    /// In-plane unit normals of the boundary sides, pointing into the face.
    side_normals: Vec<Vec3>,
}

impl Face {
    pub fn normal(&self) -> Dir3 {
        self.plane.normal
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub vertices: [VertexId; 2],
    /// First endpoint.
    pub point: Point3,
    /// Unit vector from the first endpoint to the second.
    pub dir: Dir3,
    pub length: f64,
    pub faces: [FaceId; 2],
}

/// A validated convex polyhedron with labeled faces. Immutable.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    vertices: Vec<Point3>,
    faces: Vec<Face>,
    edges: Vec<Edge>,
    vertex_edges: Vec<Vec<EdgeId>>,
    centroid: Point3,
    tol: Tolerances,
}

impl Polyhedron {
    /// Validates a raw description with default tolerances.
    pub fn validate(raw: &RawPolyhedron) -> Result<Self, GeometryError> {
        Self::validate_with(raw, Tolerances::default())
    }

    /// Validates a raw description: derives edges and inward normals and
    /// checks closure, planarity and convexity.
    pub fn validate_with(raw: &RawPolyhedron, tol: Tolerances) -> Result<Self, GeometryError> {
        let nv = raw.vertices.len();
        if nv < 4 {
            return Err(GeometryError::TooFew {
                what: "vertices",
                needed: 4,
                got: nv,
            });
        }
        if raw.faces.len() < 4 {
            return Err(GeometryError::TooFew {
                what: "faces",
                needed: 4,
                got: raw.faces.len(),
            });
        }
        let vertices: Vec<Point3> = raw
            .vertices
            .iter()
            .map(|&[x, y, z]| Point3::new(x, y, z))
            .collect();
        if let Some(i) = vertices.iter().position(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(GeometryError::NonFinite(i));
        }

        let mut labels = HashSet::new();
        let mut used = vec![false; nv];
        for face in &raw.faces {
            if face.label.is_empty() || !labels.insert(face.label.as_str()) {
                return Err(GeometryError::BadLabel(face.label.clone()));
            }
            for &i in &face.vertices {
                if i >= nv {
                    return Err(GeometryError::BadIndex {
                        face: face.label.clone(),
                        index: i,
                        count: nv,
                    });
                }
                used[i] = true;
            }
            let distinct: HashSet<_> = face.vertices.iter().collect();
            if face.vertices.len() < 3 || distinct.len() != face.vertices.len() {
                return Err(GeometryError::DegenerateFace(face.label.clone()));
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(GeometryError::UnusedVertex(i));
        }

        let centroid = Point3::from(
            vertices.iter().map(|v| v.coords).sum::<Vec3>() / vertices.len() as f64,
        );

        let mut faces = Vec::with_capacity(raw.faces.len());
        for rf in &raw.faces {
            faces.push(build_face(rf, &vertices, &centroid, &tol)?);
        }

        // Every corner of every face must be a supporting plane: this catches
        // both reflex corners and vertices pushed out through a face.
        for face in &faces {
            check_corners(face, &vertices, &tol)?;
        }
        for face in &faces {
            let worst = face
                .vertices
                .iter()
                .map(|&i| face.plane.signed_distance(&vertices[i]).abs())
                .fold(0.0, f64::max);
            if worst > tol.plane {
                return Err(GeometryError::NonPlanarFace(face.label.clone()));
            }
        }

        let mut edge_map: HashMap<(VertexId, VertexId), Vec<(FaceId, usize)>> = HashMap::new();
        for (fi, face) in faces.iter().enumerate() {
            let k = face.vertices.len();
            for s in 0..k {
                let (a, b) = (face.vertices[s], face.vertices[(s + 1) % k]);
                edge_map.entry((a.min(b), a.max(b))).or_default().push((fi, s));
            }
        }
        let mut keys: Vec<_> = edge_map.keys().copied().collect();
        keys.sort_unstable();
        let mut edges = Vec::with_capacity(keys.len());
        let mut vertex_edges = vec![Vec::new(); nv];
        for key in keys {
            let owners = &edge_map[&key];
            if owners.len() != 2 {
                return Err(GeometryError::OpenSurface(key.0, key.1, owners.len()));
            }
            let id = edges.len();
            let (a, b) = key;
            let d = vertices[b] - vertices[a];
            edges.push(Edge {
                vertices: [a, b],
                point: vertices[a],
                dir: Dir3::new(d).expect("distinct face vertices"),
                length: d.norm(),
                faces: [owners[0].0, owners[1].0],
            });
            for &(fi, s) in owners {
                faces[fi].edges[s] = id;
            }
            vertex_edges[a].push(id);
            vertex_edges[b].push(id);
        }

        Ok(Self {
            vertices,
            faces,
            edges,
            vertex_edges,
            centroid,
            tol,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, PolyhedronLoadError> {
        let raw = RawPolyhedron::from_json(text)?;
        Ok(Self::validate(&raw)?)
    }

    /// The raw description of this polyhedron (outward counter-clockwise faces).
    pub fn to_raw(&self) -> RawPolyhedron {
        RawPolyhedron {
            vertices: self.vertices.iter().map(|v| [v.x, v.y, v.z]).collect(),
            faces: self
                .faces
                .iter()
                .map(|f| RawFace {
                    label: f.label.clone(),
                    vertices: f.vertices.iter().rev().copied().collect(),
                })
                .collect(),
        }
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }
    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }
    pub fn vertex(&self, id: VertexId) -> &Point3 {
        &self.vertices[id]
    }
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }
    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }
    pub fn vertex_edges(&self, id: VertexId) -> &[EdgeId] {
        &self.vertex_edges[id]
    }
    /// Mean of the vertices; an interior point.
    pub fn centroid(&self) -> &Point3 {
        &self.centroid
    }

    pub fn face_by_label(&self, label: &str) -> Option<FaceId> {
        self.faces.iter().position(|f| f.label == label)
    }

    pub fn label(&self, id: FaceId) -> &str {
        &self.faces[id].label
    }

    /// Coordinates of the boundary polygon of a face.
    pub fn face_polygon(&self, id: FaceId) -> Vec<Point3> {
        self.faces[id]
            .vertices
            .iter()
            .map(|&v| self.vertices[v])
            .collect()
    }

    pub fn face_centroid(&self, id: FaceId) -> Point3 {
        let poly = self.face_polygon(id);
        Point3::from(poly.iter().map(|p| p.coords).sum::<Vec3>() / poly.len() as f64)
    }

    pub fn face_area(&self, id: FaceId) -> f64 {
        let poly = self.face_polygon(id);
        let mut twice = Vec3::zeros();
        for i in 1..poly.len() - 1 {
            twice += (poly[i] - poly[0]).cross(&(poly[i + 1] - poly[0]));
        }
        0.5 * twice.norm()
    }

    /// Signed in-plane distance from `p` to the nearest side of face `id`
    /// (positive inside) together with the index of that side.
    ///
    /// `p` is assumed to lie on the face plane.
    pub fn face_clearance(&self, id: FaceId, p: &Point3) -> (f64, usize) {
        let face = &self.faces[id];
        let mut best = (f64::INFINITY, 0);
        for (s, nu) in face.side_normals.iter().enumerate() {
            let d = nu.dot(&(p - self.vertices[face.vertices[s]]));
            if d < best.0 {
                best = (d, s);
            }
        }
        best
    }

    /// Signed in-plane distances from `p` to every side of face `id`.
    pub fn face_side_distances(&self, id: FaceId, p: &Point3) -> Vec<f64> {
        let face = &self.faces[id];
        face.side_normals
            .iter()
            .enumerate()
            .map(|(s, nu)| nu.dot(&(p - self.vertices[face.vertices[s]])))
            .collect()
    }

    /// Whether `p` lies inside the closed polyhedron, up to `slack`.
    pub fn contains(&self, p: &Point3, slack: f64) -> bool {
        self.faces
            .iter()
            .all(|f| f.plane.signed_distance(p) >= -slack)
    }

    /// Linear part of the reflection across face `id`: `I - 2 n n^T`.
    pub fn linear_reflection(&self, id: FaceId) -> Matrix3<f64> {
        let n = self.faces[id].plane.normal.into_inner();
        Matrix3::identity() - 2.0 * n * n.transpose()
    }
}

#[derive(Debug, Error)]
pub enum PolyhedronLoadError {
    #[error("malformed polyhedron file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn build_face(
    rf: &RawFace,
    vertices: &[Point3],
    centroid: &Point3,
    tol: &Tolerances,
) -> Result<Face, GeometryError> {
    let pts: Vec<Point3> = rf.vertices.iter().map(|&i| vertices[i]).collect();
    let k = pts.len();
    // Newell normal, robust for slightly non-planar polygons.
    let mut newell = Vec3::zeros();
    for i in 0..k {
        newell += pts[i].coords.cross(&pts[(i + 1) % k].coords);
    }
    let scale = pts
        .iter()
        .map(|p| (p - pts[0]).norm())
        .fold(0.0, f64::max);
    if newell.norm() <= 1e-12 * scale * scale.max(1.0) || scale == 0.0 {
        return Err(GeometryError::DegenerateFace(rf.label.clone()));
    }
    let mean = Point3::from(pts.iter().map(|p| p.coords).sum::<Vec3>() / k as f64);
    let mut order = rf.vertices.clone();
    let mut plane = Plane::through(&mean, Dir3::new(newell).expect("nonzero normal"));
    let side = plane.signed_distance(centroid);
    if side.abs() <= tol.plane {
        return Err(GeometryError::Flat);
    }
    if side < 0.0 {
        plane = plane.flipped();
        order.reverse();
    }
    let side_normals = (0..k)
        .map(|s| {
            let a = vertices[order[s]];
            let b = vertices[order[(s + 1) % k]];
            plane.normal.cross(&(b - a)).normalize()
        })
        .collect();
    Ok(Face {
        label: rf.label.clone(),
        plane,
        edges: vec![usize::MAX; k],
        vertices: order,
        side_normals,
    })
}

fn check_corners(face: &Face, vertices: &[Point3], tol: &Tolerances) -> Result<(), GeometryError> {
    let k = face.vertices.len();
    let mut any_corner = false;
    for s in 0..k {
        let prev = vertices[face.vertices[(s + k - 1) % k]];
        let cur = vertices[face.vertices[s]];
        let next = vertices[face.vertices[(s + 1) % k]];
        let cross = (cur - prev).cross(&(next - cur));
        let scale = (cur - prev).norm() * (next - cur).norm();
        if cross.norm() <= 1e-12 * scale {
            continue; // straight corner
        }
        any_corner = true;
        let normal = Dir3::new(cross).expect("nonzero");
        let corner = Plane::through(&cur, normal);
        for (vi, v) in vertices.iter().enumerate() {
            let d = corner.signed_distance(v);
            if d < -tol.plane {
                return Err(GeometryError::NonConvex {
                    face: face.label.clone(),
                    vertex: vi,
                    distance: -d,
                });
            }
        }
    }
    if !any_corner {
        return Err(GeometryError::DegenerateFace(face.label.clone()));
    }
    Ok(())
}
