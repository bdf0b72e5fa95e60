//! Random initial conditions: points on faces and inward directions.

use std::f64::consts::TAU;

use rand::Rng;

use crate::billiard::PhasePoint;
use crate::geometry::{Dir3, FaceId, Point3, Polyhedron};

/// Uniform point on a face, obtained from a fan triangulation weighted by area.
pub fn point_on_face<R: Rng + ?Sized>(poly: &Polyhedron, face: FaceId, rng: &mut R) -> Point3 {
    let poly_pts = poly.face_polygon(face);
    let areas: Vec<f64> = (1..poly_pts.len() - 1)
        .map(|i| {
            0.5 * (poly_pts[i] - poly_pts[0])
                .cross(&(poly_pts[i + 1] - poly_pts[0]))
                .norm()
        })
        .collect();
    let total: f64 = areas.iter().sum();
    let mut pick = rng.gen::<f64>() * total;
    let mut tri = areas.len() - 1;
    for (i, a) in areas.iter().enumerate() {
        if pick < *a {
            tri = i;
            break;
        }
        pick -= a;
    }
    let (mut u, mut v) = (rng.gen::<f64>(), rng.gen::<f64>());
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    let a = poly_pts[0];
    a + (poly_pts[tri + 1] - a) * u + (poly_pts[tri + 2] - a) * v
}

/// Direction in the hemisphere around `normal` with `cos(angle to normal) = w`
/// and azimuth `phi`. Uniform `w` in `[0,1]` and `phi` in `[0, 2π)` give the
/// uniform (area) measure on the hemisphere.
pub fn hemisphere_direction(normal: &Dir3, w: f64, phi: f64) -> Dir3 {
    let e1 = normal.any_orthogonal();
    let e2 = normal.cross(&e1);
    let r = (1.0 - w * w).max(0.0).sqrt();
    Dir3::new(normal.into_inner() * w + e1.into_inner() * (r * phi.cos()) + e2 * (r * phi.sin()))
        .expect("unit combination")
}

/// Uniform random phase point: face chosen uniformly, base point uniform on
/// the face, direction uniform on the inward hemisphere.
pub fn random_phase_point<R: Rng + ?Sized>(poly: &Polyhedron, rng: &mut R) -> PhasePoint {
    let face = rng.gen_range(0..poly.faces().len());
    random_phase_point_on(poly, face, rng)
}

pub fn random_phase_point_on<R: Rng + ?Sized>(poly: &Polyhedron, face: FaceId, rng: &mut R) -> PhasePoint {
    let m = point_on_face(poly, face, rng);
    let theta = hemisphere_direction(&poly.face(face).plane.normal, rng.gen(), TAU * rng.gen::<f64>());
    PhasePoint::from_parts(face, poly.face(face).plane.project(&m), theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::solids;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_lie_on_faces_with_inward_directions() {
        let t = solids::regular_tetrahedron();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = random_phase_point(&t, &mut rng);
            let f = t.face(x.face());
            assert!(f.plane.signed_distance(&x.m()).abs() < 1e-12);
            assert!(t.face_clearance(x.face(), &x.m()).0 > -1e-12);
            assert!(x.theta().dot(&f.plane.normal) >= 0.0);
            assert!((x.theta().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn face_points_cover_all_triangles() {
        let cube = solids::cube();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z0 = cube.face_by_label("z0").unwrap();
        let (mut below, mut above) = (0, 0);
        for _ in 0..2000 {
            let p = point_on_face(&cube, z0, &mut rng);
            if p.y < p.x { below += 1 } else { above += 1 }
        }
        assert!(below > 800 && above > 800);
    }
}
