use std::ops::Deref;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A point of 3-space.
pub type Point3 = nalgebra::Point3<f64>;
/// A free vector of 3-space.
pub type Vec3 = nalgebra::Vector3<f64>;

/// An oriented unit direction.
///
/// Directions are kept oriented: the billiard dynamics needs to know which
/// way along a line the ball is travelling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dir3(Vec3);

impl Dir3 {
    pub const X: Dir3 = Dir3(Vec3::new(1.0, 0.0, 0.0));
    pub const Y: Dir3 = Dir3(Vec3::new(0.0, 1.0, 0.0));
    pub const Z: Dir3 = Dir3(Vec3::new(0.0, 0.0, 1.0));

    /// Normalizes `v`. Returns `None` for zero or non-finite input.
    pub fn new(v: Vec3) -> Option<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm < 1e-300 {
            return None;
        }
        Some(Dir3(v / norm))
    }

    /// Normalizes the vector `(x, y, z)`, panicking on a zero vector.
    pub fn from_xyz(x: f64, y: f64, z: f64) -> Self {
        Self::new(Vec3::new(x, y, z)).expect("zero direction")
    }

    /// Wraps `v` without normalizing it. The caller guarantees `|v| = 1`.
    pub fn new_unchecked(v: Vec3) -> Self {
        Dir3(v)
    }

    pub fn into_inner(self) -> Vec3 {
        self.0
    }

    /// Re-normalizes to remove accumulated rounding drift.
    pub fn renormalized(self) -> Self {
        Dir3(self.0 / self.0.norm())
    }

    /// Some unit vector orthogonal to `self`.
    pub fn any_orthogonal(&self) -> Dir3 {
        let v = self.0;
        let helper = if v.x.abs() <= v.y.abs() && v.x.abs() <= v.z.abs() {
            Vec3::x()
        } else if v.y.abs() <= v.z.abs() {
            Vec3::y()
        } else {
            Vec3::z()
        };
        Dir3::new(v.cross(&helper)).expect("helper axis is never parallel")
    }
}

impl std::ops::Neg for Dir3 {
    type Output = Dir3;
    fn neg(self) -> Dir3 {
        Dir3(-self.0)
    }
}

impl Deref for Dir3 {
    type Target = Vec3;
    fn deref(&self) -> &Vec3 {
        &self.0
    }
}

impl Serialize for Dir3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.x, self.0.y, self.0.z].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dir3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y, z] = <[f64; 3]>::deserialize(d)?;
        Dir3::new(Vec3::new(x, y, z))
            .ok_or_else(|| serde::de::Error::custom("direction must be nonzero and finite"))
    }
}

/// The plane `{x : <normal, x> + offset = 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub normal: Dir3,
    pub offset: f64,
}

impl Plane {
    pub fn new(normal: Dir3, offset: f64) -> Self {
        Self { normal, offset }
    }

    /// The plane through `point` with the given normal.
    pub fn through(point: &Point3, normal: Dir3) -> Self {
        Self {
            normal,
            offset: -normal.dot(&point.coords),
        }
    }

    /// Signed distance, positive on the side the normal points to.
    #[inline]
    pub fn signed_distance(&self, p: &Point3) -> f64 {
        self.normal.dot(&p.coords) + self.offset
    }

    /// Orthogonal projection of `p` onto the plane.
    pub fn project(&self, p: &Point3) -> Point3 {
        p - *self.normal * self.signed_distance(p)
    }

    pub fn flipped(&self) -> Self {
        Self {
            normal: -self.normal,
            offset: -self.offset,
        }
    }
}

/// Shortest distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: &Point3, a: &Point3, b: &Point3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Shortest distance between the closed segments `[p0, p1]` and `[q0, q1]`.
pub fn segment_segment_distance(p0: &Point3, p1: &Point3, q0: &Point3, q1: &Point3) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    if a == 0.0 && e == 0.0 {
        return r.norm();
    }
    let (s, t);
    if a == 0.0 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e == 0.0 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 1e-14 * a * e {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dir_normalizes_and_rejects_zero() {
        let d = Dir3::from_xyz(3.0, 0.0, 4.0);
        assert!((d.norm() - 1.0).abs() < 1e-15);
        assert!(Dir3::new(Vec3::zeros()).is_none());
        assert!(Dir3::new(Vec3::new(f64::NAN, 0.0, 1.0)).is_none());
    }

    #[test]
    fn orthogonal_helper() {
        for d in [Dir3::X, Dir3::Y, Dir3::Z, Dir3::from_xyz(1.0, 2.0, -3.0)] {
            let o = d.any_orthogonal();
            assert!(o.dot(&d).abs() < 1e-15);
        }
    }

    #[test]
    fn plane_distance_and_projection() {
        let pl = Plane::through(&Point3::new(0.0, 0.0, 1.0), Dir3::Z);
        assert_eq!(pl.signed_distance(&Point3::new(5.0, 3.0, 3.0)), 2.0);
        assert_eq!(pl.project(&Point3::new(5.0, 3.0, 3.0)), Point3::new(5.0, 3.0, 1.0));
        assert_eq!(pl.flipped().signed_distance(&Point3::origin()), 1.0);
    }

    #[test]
    fn segment_distances() {
        let a = Point3::new(0.0, 0.0, 0.0);
        let b = Point3::new(1.0, 0.0, 0.0);
        assert_eq!(point_segment_distance(&Point3::new(0.5, 2.0, 0.0), &a, &b), 2.0);
        assert_eq!(point_segment_distance(&Point3::new(-3.0, 4.0, 0.0), &a, &b), 5.0);
        let c = Point3::new(0.5, -1.0, 1.0);
        let d = Point3::new(0.5, 1.0, 1.0);
        assert!((segment_segment_distance(&a, &b, &c, &d) - 1.0).abs() < 1e-15);
        // parallel, offset past the end
        let e = Point3::new(2.0, 1.0, 0.0);
        let f = Point3::new(3.0, 1.0, 0.0);
        assert!((segment_segment_distance(&a, &b, &e, &f) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dir_serde_round_trip() {
        let d = Dir3::from_xyz(1.0, 1.0, 0.0);
        let s = serde_json::to_string(&d).unwrap();
        let back: Dir3 = serde_json::from_str(&s).unwrap();
        assert!((back.into_inner() - d.into_inner()).norm() < 1e-15);
        assert!(serde_json::from_str::<Dir3>("[0,0,0]").is_err());
    }
}
