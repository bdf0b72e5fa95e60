//! The billiard map on the phase space of a convex polyhedron.
//!
//! A phase point is a boundary point `m` on a face together with a unit
//! direction pointing into the table. The map sends it to the first boundary
//! hit along the direction and reflects the direction in the face that was
//! hit. Phase points whose forward ray meets an edge or runs inside the
//! starting face are singular; orbits stop there.

mod report;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{
    cast_ray, classify_on_face, reflect_direction, Dir3, EdgeId, FaceId, Hit, HitKind, Isometry,
    Point3, Polyhedron, RayError, VertexId,
};
use crate::symbolic::Word;
use crate::transversal::EdgeLine;

pub use report::discontinuity_report;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BilliardError {
    #[error("invalid phase point: {0}")]
    InvalidPhasePoint(String),
    #[error("phase point is singular ({:?} at step {})", .0.kind, .0.step)]
    SingularInput(Box<SingularityEvent>),
    #[error("no discontinuities found along the orbit")]
    EmptyReport,
    #[error(transparent)]
    Ray(#[from] RayError),
}

/// A boundary point and an inward unit direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhasePoint {
    face: FaceId,
    m: Point3,
    theta: Dir3,
}

impl PhasePoint {
    /// Validates that `m` lies on face `face` and that `theta` does not point
    /// out of the table. Directions tangent to the face are accepted; they
    /// classify as singular.
    pub fn new(poly: &Polyhedron, face: FaceId, m: Point3, theta: Dir3) -> Result<Self, BilliardError> {
        let tol = poly.tolerances();
        let f = poly
            .faces()
            .get(face)
            .ok_or_else(|| BilliardError::InvalidPhasePoint(format!("no face with id {face}")))?;
        if !m.iter().all(|c| c.is_finite()) {
            return Err(BilliardError::InvalidPhasePoint("non-finite base point".into()));
        }
        if ((theta.norm() - 1.0).abs()) > tol.norm.max(1e-12) {
            return Err(BilliardError::InvalidPhasePoint("direction is not unit".into()));
        }
        let off = f.plane.signed_distance(&m);
        if off.abs() > tol.plane {
            return Err(BilliardError::InvalidPhasePoint(format!(
                "base point is {off:e} away from the plane of face {:?}",
                f.label
            )));
        }
        let (clearance, _) = poly.face_clearance(face, &m);
        if clearance < -tol.plane {
            return Err(BilliardError::InvalidPhasePoint(format!(
                "base point lies outside face {:?}",
                f.label
            )));
        }
        if theta.dot(&f.plane.normal) < -tol.angle {
            return Err(BilliardError::InvalidPhasePoint(format!(
                "direction points out of the table through face {:?}",
                f.label
            )));
        }
        Ok(Self {
            face,
            m: f.plane.project(&m),
            theta,
        })
    }

    /// Like [`PhasePoint::new`], picking the face that contains `m`. When `m`
    /// is on several faces (an edge), the first one `theta` enters through
    /// is used; such points classify as singular.
    pub fn locate(poly: &Polyhedron, m: Point3, theta: Dir3) -> Result<Self, BilliardError> {
        let tol = poly.tolerances();
        let candidates: Vec<FaceId> = (0..poly.faces().len())
            .filter(|&f| {
                poly.face(f).plane.signed_distance(&m).abs() <= tol.plane
                    && poly.face_clearance(f, &m).0 >= -tol.plane
            })
            .collect();
        let face = candidates
            .iter()
            .copied()
            .find(|&f| theta.dot(&poly.face(f).plane.normal) > tol.angle)
            .or_else(|| candidates.first().copied())
            .ok_or_else(|| BilliardError::InvalidPhasePoint("base point is not on the boundary".into()))?;
        Self::new(poly, face, m, theta)
    }

    pub(crate) fn from_parts(face: FaceId, m: Point3, theta: Dir3) -> Self {
        Self { face, m, theta }
    }

    pub fn face(&self) -> FaceId {
        self.face
    }
    pub fn m(&self) -> Point3 {
        self.m
    }
    pub fn theta(&self) -> Dir3 {
        self.theta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularityKind {
    EdgeHit { edge: EdgeId },
    VertexHit { vertex: VertexId },
    TangentInFace { face: FaceId },
}

/// Why and where an orbit left the regular phase space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityEvent {
    pub kind: SingularityKind,
    /// The boundary point where the singularity is met.
    pub point: Point3,
    /// Index of the phase point whose forward ray is singular.
    pub step: usize,
    /// The edges met, in unfolded coordinates.
    pub unfolded: Vec<EdgeLine>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    /// The forward ray hits the interior of a face transversally.
    Regular(Hit),
    Singular(SingularityEvent),
}

impl Classification {
    pub fn is_regular(&self) -> bool {
        matches!(self, Classification::Regular(_))
    }
}

/// Decides whether `x` belongs to the regular phase space.
pub fn classify_phase_point(x: &PhasePoint, poly: &Polyhedron) -> Classification {
    classify_at(x, poly, 0, &Isometry::identity())
}

fn singular_from_hit(poly: &Polyhedron, hit: &Hit, step: usize, iso: &Isometry) -> Option<SingularityEvent> {
    let kind = match hit.kind {
        HitKind::Face => return None,
        HitKind::Edge(edge) => SingularityKind::EdgeHit { edge },
        HitKind::Vertex(vertex) => SingularityKind::VertexHit { vertex },
        HitKind::Tangent => SingularityKind::TangentInFace { face: hit.face },
    };
    let edges: Vec<EdgeId> = match kind {
        SingularityKind::EdgeHit { edge } => vec![edge],
        SingularityKind::VertexHit { vertex } => poly.vertex_edges(vertex).to_vec(),
        SingularityKind::TangentInFace { .. } => vec![hit.nearest_edge],
    };
    Some(SingularityEvent {
        kind,
        point: hit.point,
        step,
        unfolded: edges
            .into_iter()
            .map(|e| EdgeLine::from_edge(poly.edge(e)).transformed(iso))
            .collect(),
    })
}

pub(crate) fn classify_at(x: &PhasePoint, poly: &Polyhedron, step: usize, iso: &Isometry) -> Classification {
    let tol = poly.tolerances();
    let face = poly.face(x.face);
    if x.theta.dot(&face.plane.normal).abs() <= tol.angle {
        let hit = tangent_exit(poly, x);
        return Classification::Singular(
            singular_from_hit(poly, &hit, step, iso).expect("tangent hits are singular"),
        );
    }
    // A start on an edge is singular: the line through m meets that edge.
    let start = classify_on_face(poly, x.face, x.m, 0.0);
    if let Some(ev) = singular_from_hit(poly, &start, step, iso) {
        return Classification::Singular(ev);
    }
    match cast_ray(&x.m, &x.theta, poly) {
        Ok(hit) => match singular_from_hit(poly, &hit, step, iso) {
            None => Classification::Regular(hit),
            Some(ev) => Classification::Singular(ev),
        },
        // Only reachable through extreme tolerance settings; report the
        // nearest edge conservatively.
        Err(_) => {
            let mut hit = start;
            hit.kind = HitKind::Edge(start.nearest_edge);
            Classification::Singular(singular_from_hit(poly, &hit, step, iso).expect("edge"))
        }
    }
}

/// For a direction inside the face plane: where the in-plane ray leaves the
/// face polygon.
fn tangent_exit(poly: &Polyhedron, x: &PhasePoint) -> Hit {
    let face = poly.face(x.face);
    let n = face.plane.normal.into_inner();
    let along = x.theta.into_inner() - n * x.theta.dot(&n);
    let dists = poly.face_side_distances(x.face, &x.m);
    let k = face.vertices.len();
    let mut best = (f64::INFINITY, 0);
    for s in 0..k {
        let a = poly.vertex(face.vertices[s]);
        let b = poly.vertex(face.vertices[(s + 1) % k]);
        let nu = n.cross(&(b - a)).normalize();
        let rate = nu.dot(&along);
        if rate < 0.0 {
            let t = dists[s].max(0.0) / -rate;
            if t < best.0 {
                best = (t, s);
            }
        }
    }
    Hit {
        kind: HitKind::Tangent,
        face: x.face,
        point: x.m,
        length: 0.0,
        clearance: dists.iter().copied().fold(f64::INFINITY, f64::min),
        nearest_edge: face.edges[best.1],
    }
}

/// One application of the billiard map.
pub fn billiard_step(x: &PhasePoint, poly: &Polyhedron) -> Result<PhasePoint, BilliardError> {
    match classify_phase_point(x, poly) {
        Classification::Regular(hit) => Ok(advance(x, &hit, poly)),
        Classification::Singular(ev) => Err(BilliardError::SingularInput(Box::new(ev))),
    }
}

fn advance(x: &PhasePoint, hit: &Hit, poly: &Polyhedron) -> PhasePoint {
    let face = poly.face(hit.face);
    PhasePoint {
        face: hit.face,
        m: hit.point,
        theta: reflect_direction(&x.theta, face),
    }
}

/// A bounce whose hit point passed within `tol.sing` of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NearSingular {
    /// Index of the phase point that was hit close to an edge.
    pub step: usize,
    pub edge: EdgeId,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum OrbitStatus {
    /// All requested phase points were produced.
    Completed(usize),
    Singular(SingularityEvent),
}

/// A coded orbit segment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub initial: PhasePoint,
    /// `T^0 x, T^1 x, ...`; one per letter of `word`.
    pub points: Vec<PhasePoint>,
    pub word: Word,
    pub status: OrbitStatus,
    pub near_singular: Vec<NearSingular>,
}

impl OrbitRecord {
    pub fn is_singular(&self) -> bool {
        matches!(self.status, OrbitStatus::Singular(_))
    }

    /// First phase point index whose position is unreliable, if any.
    pub fn first_near_singular(&self) -> Option<usize> {
        self.near_singular.first().map(|n| n.step)
    }

    /// One JSON-serializable record per phase point.
    pub fn bounces(&self, poly: &Polyhedron) -> Vec<BounceRecord> {
        self.points
            .iter()
            .enumerate()
            .map(|(n, p)| BounceRecord {
                n,
                face: poly.label(p.face).to_string(),
                m: [p.m.x, p.m.y, p.m.z],
                theta: [p.theta.x, p.theta.y, p.theta.z],
            })
            .collect()
    }
}

/// Export row: `{"n": k, "face": label, "m": [x,y,z], "theta": [x,y,z]}`.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct BounceRecord {
    pub n: usize,
    pub face: String,
    pub m: [f64; 3],
    pub theta: [f64; 3],
}

/// Iterates the billiard map, producing up to `n_max` phase points
/// (`T^0 x ... T^{n_max-1} x`) and their labels. Stops at the first singular
/// phase point.
pub fn orbit(x: &PhasePoint, n_max: usize, poly: &Polyhedron) -> OrbitRecord {
    let n_max = n_max.max(1);
    let tol = poly.tolerances();
    let mut points = Vec::with_capacity(n_max);
    let mut letters = Vec::with_capacity(n_max);
    let mut near_singular = Vec::new();
    let mut iso = Isometry::identity();
    let mut cur = *x;
    points.push(cur);
    letters.push(cur.face);
    let mut status = OrbitStatus::Completed(n_max);
    for k in 0..n_max - 1 {
        match classify_at(&cur, poly, k, &iso) {
            Classification::Singular(ev) => {
                status = OrbitStatus::Singular(ev);
                break;
            }
            Classification::Regular(hit) => {
                if hit.clearance < tol.sing {
                    near_singular.push(NearSingular {
                        step: k + 1,
                        edge: hit.nearest_edge,
                        distance: hit.clearance,
                    });
                }
                cur = advance(&cur, &hit, poly);
                iso = iso.compose(&Isometry::reflection(&poly.face(hit.face).plane));
                points.push(cur);
                letters.push(cur.face);
            }
        }
    }
    OrbitRecord {
        initial: *x,
        points,
        word: Word::new(letters),
        status,
        near_singular,
    }
}

/// Word of length `n` only, skipping the bookkeeping of [`orbit`]. Returns
/// the letters and the index of the first near-singular bounce; stops early
/// at a singular phase point.
pub(crate) fn fast_code(x: &PhasePoint, n: usize, poly: &Polyhedron, out: &mut Vec<FaceId>) -> Option<usize> {
    let tol = poly.tolerances();
    out.clear();
    out.push(x.face);
    let mut cur = *x;
    let start = classify_on_face(poly, cur.face, cur.m, 0.0);
    if !start.is_regular() || cur.theta.dot(&poly.face(cur.face).plane.normal) <= tol.angle {
        return Some(0);
    }
    for k in 1..n {
        let hit = match cast_ray(&cur.m, &cur.theta, poly) {
            Ok(h) if h.is_regular() => h,
            _ => return Some(k - 1),
        };
        if hit.clearance < tol.sing {
            return Some(k);
        }
        cur = advance(&cur, &hit, poly);
        out.push(cur.face);
    }
    None
}

#[cfg(test)]
mod tests;
