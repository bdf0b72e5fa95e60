use serde::Serialize;

use super::planar::{self, P2};
use super::{SymbolicError, Word};
use crate::geometry::{Dir3, FaceId, Isometry, Point3, Polyhedron, Vec3};

/// Clipping slack in cross-section coordinates; boundary contact counts as
/// overlap so that beams squeezed onto an edge survive as strips.
const CLIP_EPS: f64 = 1e-12;
/// Tolerance for recognizing a cumulative isometry as a translation along
/// the beam direction.
const TRANSLATION_TOL: f64 = 1e-9;

/// All lines with direction `theta` whose base points on the first face
/// share the coding `word`, tracked through the unfolding.
///
/// Base points are identified with their projections onto the plane through
/// the first face's centroid orthogonal to `theta`; the cross-section is the
/// convex set of these projections.
#[derive(Clone, Debug, Serialize)]
pub struct Beam {
    pub theta: Dir3,
    pub base: Point3,
    /// Orthonormal basis of the cross-section plane.
    pub axes: [Vec3; 2],
    pub section: Vec<[f64; 2]>,
    pub word: Word,
    /// `U_0 = id, ..., U_L`: one per letter.
    #[serde(skip)]
    pub isometries: Vec<Isometry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CellClass {
    Point,
    Strip { width: f64 },
    Tube { area: f64 },
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Periodicity {
    Periodic(usize),
    NotDetected,
}

impl Beam {
    /// The beam of every line with direction `theta` starting on `face`.
    pub fn from_face(poly: &Polyhedron, face: FaceId, theta: Dir3) -> Result<Self, SymbolicError> {
        let f = poly
            .faces()
            .get(face)
            .ok_or_else(|| SymbolicError::UnknownLabel(face.to_string()))?;
        if theta.dot(&f.plane.normal) <= poly.tolerances().angle {
            return Err(SymbolicError::NotInward { face });
        }
        let e1 = theta.any_orthogonal().into_inner();
        let e2 = theta.cross(&e1);
        let mut beam = Beam {
            theta,
            base: poly.face_centroid(face),
            axes: [e1, e2],
            section: Vec::new(),
            word: Word::new(vec![face]),
            isometries: vec![Isometry::identity()],
        };
        let pts = poly.face_polygon(face).iter().map(|p| beam.project(p)).collect();
        beam.section = planar::make_ccw(pts);
        Ok(beam)
    }

    /// The beam for a whole word, starting with its first letter.
    pub fn from_word(poly: &Polyhedron, word: &Word, theta: Dir3) -> Result<Self, SymbolicError> {
        let (&first, rest) = word.letters().split_first().ok_or(SymbolicError::EmptyWord)?;
        let mut beam = Self::from_face(poly, first, theta)?;
        for &g in rest {
            if beam.is_empty() {
                break;
            }
            beam = beam.propagate(poly, g)?;
        }
        Ok(beam)
    }

    /// Cross-section coordinates of a point (projection along `theta`).
    pub fn project(&self, p: &Point3) -> P2 {
        let d = p - self.base;
        [d.dot(&self.axes[0]), d.dot(&self.axes[1])]
    }

    pub fn is_empty(&self) -> bool {
        self.section.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.word.len() - 1
    }

    pub fn current_face(&self) -> FaceId {
        self.word.last().expect("beam words are nonempty")
    }

    pub fn current_isometry(&self) -> &Isometry {
        self.isometries.last().expect("beam has an isometry per letter")
    }

    /// The direction in the folded table at the current step.
    pub fn folded_direction(&self) -> Vec3 {
        self.current_isometry().linear.transpose() * self.theta.into_inner()
    }

    pub fn area(&self) -> f64 {
        planar::area(&self.section)
    }

    /// Distance of a point's projection from the cross-section.
    pub fn distance_to(&self, p: &Point3) -> f64 {
        planar::distance_to(&self.section, self.project(p))
    }

    /// Faces the current beam can hit next: not the current face, and met by
    /// the folded direction from inside.
    pub fn exit_faces(&self, poly: &Polyhedron) -> Vec<FaceId> {
        let dir = self.folded_direction();
        let cur = self.current_face();
        (0..poly.faces().len())
            .filter(|&g| g != cur && dir.dot(&poly.face(g).plane.normal) < -poly.tolerances().angle)
            .collect()
    }

    /// Restricts the beam to the lines whose next hit is face `next`.
    /// An exit face whose projection misses the cross-section yields an empty
    /// beam.
    pub fn propagate(&self, poly: &Polyhedron, next: FaceId) -> Result<Beam, SymbolicError> {
        if self.is_empty() {
            return Err(SymbolicError::EmptyBeam);
        }
        if next >= poly.faces().len() || !self.exit_faces(poly).contains(&next) {
            return Err(SymbolicError::LabelNotReachable {
                face: next,
                step: self.steps() + 1,
            });
        }
        let iso = *self.current_isometry();
        let shadow: Vec<P2> = poly
            .face_polygon(next)
            .iter()
            .map(|v| self.project(&iso.apply_point(v)))
            .collect();
        let shadow = planar::make_ccw(shadow);
        let section = planar::clip(&self.section, &shadow, CLIP_EPS);
        let mut word = self.word.clone();
        word.push(next);
        let mut isometries = self.isometries.clone();
        isometries.push(iso.compose(&Isometry::reflection(&poly.face(next).plane)));
        Ok(Beam {
            theta: self.theta,
            base: self.base,
            axes: self.axes,
            section,
            word,
            isometries,
        })
    }

    /// Nonempty one-step extensions, in face order.
    pub fn successors(&self, poly: &Polyhedron) -> Vec<Beam> {
        if self.is_empty() {
            return Vec::new();
        }
        self.exit_faces(poly)
            .into_iter()
            .filter_map(|g| self.propagate(poly, g).ok())
            .filter(|b| !b.is_empty())
            .collect()
    }

    /// Extends the beam `steps` times, each time keeping the successor with
    /// the largest cross-section (ties go to the lowest face id). Stops early
    /// if no successor is left.
    pub fn follow(&self, poly: &Polyhedron, steps: usize) -> Beam {
        let mut beam = self.clone();
        for _ in 0..steps {
            let best = beam
                .successors(poly)
                .into_iter()
                .fold(None::<Beam>, |best, b| match best {
                    Some(a) if a.area() >= b.area() => Some(a),
                    _ => Some(b),
                });
            match best {
                Some(b) => beam = b,
                None => break,
            }
        }
        beam
    }
}

/// Point, strip or tube, decided by the area and diameter of the
/// cross-section against `deg`.
pub fn classify_cell(beam: &Beam, deg: f64) -> CellClass {
    if beam.is_empty() {
        return CellClass::Empty;
    }
    let area = beam.area();
    if area > deg {
        return CellClass::Tube { area };
    }
    let width = planar::diameter(&beam.section);
    if width > deg {
        CellClass::Strip { width }
    } else {
        CellClass::Point
    }
}

/// Smallest `k <= k_max` such that `U_k` is a translation by a positive
/// multiple of `theta`, the word returns to its first letter and repeats
/// with period `k`. Beams shorter than `2 k_max` steps are first extended
/// with [`Beam::follow`].
pub fn detect_periodicity(beam: &Beam, poly: &Polyhedron, k_max: usize) -> Periodicity {
    if beam.is_empty() || k_max == 0 {
        return Periodicity::NotDetected;
    }
    let beam = if beam.steps() < 2 * k_max {
        beam.follow(poly, 2 * k_max - beam.steps())
    } else {
        beam.clone()
    };
    let theta = beam.theta.into_inner();
    for k in 1..=k_max.min(beam.steps()) {
        let u = &beam.isometries[k];
        if !u.is_translation(TRANSLATION_TOL) {
            continue;
        }
        let tau = u.translation;
        let along = tau.dot(&theta);
        if along <= 0.0 || (tau - theta * along).norm() > TRANSLATION_TOL * (1.0 + along) {
            continue;
        }
        if beam.word.letters()[k] == beam.word.letters()[0] && beam.word.has_period(k) {
            return Periodicity::Periodic(k);
        }
    }
    Periodicity::NotDetected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::orbit;
    use crate::geometry::solids;
    use crate::sampling::random_phase_point;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    const DEG: f64 = 1e-8;

    fn word(poly: &Polyhedron, s: &str) -> Word {
        Word::parse(poly, s).unwrap()
    }

    #[test]
    fn vertical_beam_is_unchanged() {
        let cube = solids::cube();
        let b = Beam::from_face(&cube, cube.face_by_label("z0").unwrap(), Dir3::Z).unwrap();
        let b1 = b.propagate(&cube, cube.face_by_label("z1").unwrap()).unwrap();
        assert!((b1.area() - 1.0).abs() < 1e-15);
        assert_eq!(classify_cell(&b1, DEG), CellClass::Tube { area: b1.area() });
        let long = Beam::from_word(&cube, &word(&cube, &"z0,z1,".repeat(10)), Dir3::Z).unwrap();
        assert!((long.area() - 1.0).abs() < 1e-14);
        assert_eq!(detect_periodicity(&b, &cube, 10), Periodicity::Periodic(2));
    }

    #[test]
    fn slanted_beam_through_side_face() {
        let cube = solids::cube();
        let theta = Dir3::from_xyz(1.0, 0.0, 1.0);
        let b = Beam::from_word(&cube, &word(&cube, "z0,x1"), theta).unwrap();
        // the whole bottom, seen along theta: 1/√2 by 1
        assert!((b.area() - FRAC_1_SQRT_2).abs() < 1e-14);
        // the top face is reached only from the edge x = 0 of the bottom
        let s = Beam::from_word(&cube, &word(&cube, "z0,z1"), theta).unwrap();
        match classify_cell(&s, DEG) {
            CellClass::Strip { width } => assert!((width - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn period_four_beam_stabilizes() {
        let cube = solids::cube();
        let theta = Dir3::from_xyz(1.0, 0.0, 1.0);
        let w = word(&cube, &"z0,x1,z1,x0,".repeat(5));
        let mut beam = Beam::from_face(&cube, w.letters()[0], theta).unwrap();
        for &g in &w.letters()[1..] {
            beam = beam.propagate(&cube, g).unwrap();
            assert!((beam.area() - FRAC_1_SQRT_2).abs() < 1e-12);
        }
        assert!(matches!(classify_cell(&beam, DEG), CellClass::Tube { .. }));
        assert_eq!(detect_periodicity(&beam, &cube, 10), Periodicity::Periodic(4));
        let t = beam.isometries[4].translation;
        assert!((t - Vec3::new(2.0, 0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn missing_and_unreachable_labels() {
        let cube = solids::cube();
        let theta = Dir3::from_xyz(1.0, 0.0, 2.0);
        // bases with x >= 1/2 reach x1; after the bounce every line reaches
        // the top before the far copy of x0
        let b = Beam::from_word(&cube, &word(&cube, "z0,x1"), theta).unwrap();
        assert!((b.area() - 0.5 * 2.0 / 5f64.sqrt()).abs() < 1e-12);
        let x0 = b.propagate(&cube, cube.face_by_label("x0").unwrap()).unwrap();
        assert_eq!(classify_cell(&x0, DEG), CellClass::Empty);
        assert!(matches!(
            b.propagate(&cube, cube.face_by_label("z0").unwrap()),
            Err(SymbolicError::LabelNotReachable { .. })
        ));
        assert!(matches!(
            b.propagate(&cube, cube.face_by_label("x1").unwrap()),
            Err(SymbolicError::LabelNotReachable { .. })
        ));
        assert!(matches!(x0.propagate(&cube, 0), Err(SymbolicError::EmptyBeam)));
        assert!(matches!(
            Beam::from_face(&cube, cube.face_by_label("z1").unwrap(), theta),
            Err(SymbolicError::NotInward { .. })
        ));
    }

    #[test]
    fn irrational_direction_is_not_periodic() {
        let cube = solids::cube();
        let theta = Dir3::from_xyz(1.0, 2f64.sqrt(), 3f64.sqrt());
        let b = Beam::from_face(&cube, cube.face_by_label("z0").unwrap(), theta).unwrap();
        assert_eq!(detect_periodicity(&b, &cube, 50), Periodicity::NotDetected);
    }

    #[test]
    fn sampled_orbits_lie_in_their_beams() {
        let poly = solids::octahedron();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let x = random_phase_point(&poly, &mut rng);
            let rec = orbit(&x, 2 + rng.gen_range(0..10), &poly);
            if !rec.near_singular.is_empty() {
                continue;
            }
            let n = rec.points.len();
            let beam = Beam::from_word(&poly, &rec.word, x.theta()).unwrap();
            assert_eq!(beam.word.len(), n);
            assert!(beam.distance_to(&x.m()) <= DEG, "{}", beam.distance_to(&x.m()));
            checked += 1;
        }
    }

    #[test]
    fn cross_sections_never_grow() {
        let cube = solids::cuboid(1.0, 1.3, 0.7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let x = random_phase_point(&cube, &mut rng);
            let mut beam = Beam::from_face(&cube, x.face(), x.theta()).unwrap();
            for _ in 0..30 {
                let succ = beam.successors(&cube);
                if succ.is_empty() {
                    break;
                }
                let total: f64 = succ.iter().map(Beam::area).sum();
                assert!(total <= beam.area() + 1e-12);
                for s in &succ {
                    assert!(s.area() <= beam.area() + 1e-12);
                }
                beam = succ[rng.gen_range(0..succ.len())].clone();
            }
        }
    }
}
