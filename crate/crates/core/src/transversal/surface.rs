use rayon::prelude::*;
use serde::Serialize;

use super::roots::real_roots;
use super::{EdgeLine, TransversalError};
use crate::geometry::{Point3, Vec3};
use crate::Tolerances;

/// Roots of the restricted residual closer than this are one intersection.
const ROOT_MERGE: f64 = 1e-7;
/// Number of base-point parameters sampled along the first edge.
const SAMPLE_GRID: usize = 41;

/// Orthonormal frame with the first axis along the base edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Frame {
    pub origin: Point3,
    pub axes: [Vec3; 3],
}

impl Frame {
    pub fn to_local(&self, p: &Point3) -> Vec3 {
        let d = p - self.origin;
        Vec3::new(self.axes[0].dot(&d), self.axes[1].dot(&d), self.axes[2].dot(&d))
    }

    pub fn to_world(&self, q: &Vec3) -> Point3 {
        self.origin + self.axes[0] * q.x + self.axes[1] * q.y + self.axes[2] * q.z
    }

    pub fn local_vec(&self, v: &Vec3) -> Vec3 {
        Vec3::new(self.axes[0].dot(v), self.axes[1].dot(v), self.axes[2].dot(v))
    }
}

/// The surface swept by lines meeting three pairwise skew edge lines.
///
/// In the frame where the first line is the first axis, a point `P` of such
/// a line satisfies the quadric equation `Q(P) = 0`, obtained by eliminating
/// the direction between the two rational constraints and clearing
/// denominators. `Q` has no constant term and is linear in `P1`, so it can be
/// solved as a height `P1 = f(P2, P3)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleSurface {
    pub lines: [EdgeLine; 3],
    pub frame: Frame,
    /// Coefficients of `1, P1, P2, P3, P1², P1P2, P1P3, P2², P2P3, P3²` in
    /// local coordinates, scaled so the largest magnitude is 1.
    pub coefficients: [f64; 10],
}

fn skew_pairs(lines: &[&EdgeLine], tol: &Tolerances) -> Result<(), TransversalError> {
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let scale = 1.0 + (lines[j].p - lines[i].p).norm();
            if lines[i].coplanarity(lines[j]).abs() <= tol.plane * scale {
                return Err(TransversalError::NotPairwiseSkew(i, j));
            }
        }
    }
    Ok(())
}

pub fn triple_surface(a0: &EdgeLine, a1: &EdgeLine, a2: &EdgeLine) -> Result<TripleSurface, TransversalError> {
    triple_surface_with(a0, a1, a2, &Tolerances::default())
}

pub fn triple_surface_with(
    a0: &EdgeLine,
    a1: &EdgeLine,
    a2: &EdgeLine,
    tol: &Tolerances,
) -> Result<TripleSurface, TransversalError> {
    skew_pairs(&[a0, a1, a2], tol)?;
    let e1 = a0.x.into_inner();
    let e2 = a0.x.any_orthogonal().into_inner();
    let e3 = e1.cross(&e2);
    let frame = Frame {
        origin: a0.p,
        axes: [e1, e2, e3],
    };
    // numerator and denominator vectors of both constraints, local coordinates
    let constraint = |l: &EdgeLine| {
        let p = frame.to_local(&l.p);
        let x = frame.local_vec(&l.x);
        (p.cross(&x), Vec3::x().cross(&x))
    };
    let (a, b) = constraint(a1);
    let (a_, b_) = constraint(a2);

    // D = a1 B' - a'1 B (b has no first component)
    let d2 = a.x * b_.y - a_.x * b.y;
    let d3 = a.x * b_.z - a_.x * b.z;
    // N = A' B - A B'
    let n22 = a_.y * b.y - a.y * b_.y;
    let n23 = a_.y * b.z + a_.z * b.y - a.y * b_.z - a.z * b_.y;
    let n33 = a_.z * b.z - a.z * b_.z;
    // Q = P1 D - N - a1 A' + a'1 A
    let mut c = [
        0.0,
        0.0,
        -a.x * a_.y + a_.x * a.y,
        -a.x * a_.z + a_.x * a.z,
        0.0,
        d2,
        d3,
        -n22,
        -n23,
        -n33,
    ];
    let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale > 0.0 {
        c.iter_mut().for_each(|x| *x /= scale);
    }
    Ok(TripleSurface {
        lines: [*a0, *a1, *a2],
        frame,
        coefficients: c,
    })
}

impl TripleSurface {
    /// `Q` at local coordinates.
    pub fn residual_local(&self, q: &Vec3) -> f64 {
        let c = &self.coefficients;
        let (x, y, z) = (q.x, q.y, q.z);
        c[0] + c[1] * x + c[2] * y + c[3] * z + c[4] * x * x + c[5] * x * y + c[6] * x * z
            + c[7] * y * y
            + c[8] * y * z
            + c[9] * z * z
    }

    /// `Q` at a world point.
    pub fn residual(&self, p: &Point3) -> f64 {
        self.residual_local(&self.frame.to_local(p))
    }

    /// Membership test, scaled for the quadratic growth of `Q`.
    pub fn contains(&self, p: &Point3, tol: f64) -> bool {
        let q = self.frame.to_local(p);
        self.residual_local(&q).abs() <= tol * (1.0 + q.norm()).powi(2)
    }

    /// `P1` as a function of `(P2, P3)` in local coordinates. The ratio of
    /// the smaller to the larger of `|P2|`, `|P3|` is used as the affine
    /// coordinate, which covers the `P2 = 0` branch. `None` on the first
    /// axis itself and where the surface is vertical over `(P2, P3)`.
    pub fn height(&self, p2: f64, p3: f64) -> Option<f64> {
        let c = &self.coefficients;
        let (d2, d3) = (c[5], c[6]);
        let (lin2, lin3) = (c[2], c[3]);
        let (q22, q23, q33) = (c[7], c[8], c[9]);
        let (num, den) = if p2 == 0.0 && p3 == 0.0 {
            return None;
        } else if p2.abs() >= p3.abs() {
            let r = p3 / p2;
            (lin2 + lin3 * r + p2 * (q22 + q23 * r + q33 * r * r), d2 + d3 * r)
        } else {
            let r = p2 / p3;
            (lin2 * r + lin3 + p3 * (q22 * r * r + q23 * r + q33), d2 * r + d3)
        };
        if den.abs() < 1e-12 {
            None
        } else {
            Some(-num / den)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntersectionCount {
    Count(usize),
    OnSurface,
}

/// Line parameters (relative to `line.p`) where the line meets the surface,
/// or `None` if the line lies on it.
pub fn line_surface_parameters(line: &EdgeLine, s: &TripleSurface, tol: &Tolerances) -> Option<Vec<f64>> {
    let d = s.frame.local_vec(&line.x);
    // parametrize from the point closest to the frame origin
    let shift = -(line.p - s.frame.origin).dot(&line.x);
    let q = s.frame.to_local(&line.point_at(shift));
    let c = &s.coefficients;
    let grad = |p: &Vec3| {
        Vec3::new(
            c[1] + 2.0 * c[4] * p.x + c[5] * p.y + c[6] * p.z,
            c[2] + c[5] * p.x + 2.0 * c[7] * p.y + c[8] * p.z,
            c[3] + c[6] * p.x + c[8] * p.y + 2.0 * c[9] * p.z,
        )
    };
    let quad = s.residual_local(&d) - (c[1] * d.x + c[2] * d.y + c[3] * d.z);
    let coeffs = [s.residual_local(&q), grad(&q).dot(&d), quad];
    let scale = (1.0 + q.norm()).powi(2);
    if coeffs.iter().all(|x| x.abs() <= tol.surf * scale) {
        return None;
    }
    Some(real_roots(&coeffs, ROOT_MERGE).into_iter().map(|t| t + shift).collect())
}

pub fn count_line_surface_intersections(line: &EdgeLine, s: &TripleSurface) -> IntersectionCount {
    count_line_surface_intersections_with(line, s, &Tolerances::default())
}

pub fn count_line_surface_intersections_with(
    line: &EdgeLine,
    s: &TripleSurface,
    tol: &Tolerances,
) -> IntersectionCount {
    match line_surface_parameters(line, s, tol) {
        None => IntersectionCount::OnSurface,
        Some(roots) => IntersectionCount::Count(roots.len()),
    }
}

/// Lines through `a0.p + m a0.x` meeting `a1` and `a2`, one per parameter
/// `m` where such a line exists and is unique. Each returned line has its
/// base point on `a0`.
pub fn sample_transversals(a0: &EdgeLine, a1: &EdgeLine, a2: &EdgeLine, ms: &[f64]) -> Vec<EdgeLine> {
    ms.par_iter()
        .filter_map(|&m| {
            let base = a0.point_at(m);
            // plane spanned by the base point and a1
            let n = (a1.p - base).cross(&a1.x);
            let nn = n.norm();
            if nn < 1e-12 {
                return None;
            }
            let den = n.dot(&a2.x);
            if den.abs() < 1e-12 * nn {
                return None;
            }
            let s = n.dot(&(base - a2.p)) / den;
            let target = a2.point_at(s);
            let line = EdgeLine::through(base, target)?;
            if line.x.cross(&a1.x).norm() < 1e-9 || (target - base).norm() < 1e-12 {
                return None;
            }
            Some(line)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Independence {
    Independent,
    Dependent,
}

pub fn independence_check(
    a0: &EdgeLine,
    a1: &EdgeLine,
    a2: &EdgeLine,
    a3: &EdgeLine,
) -> Result<Independence, TransversalError> {
    independence_check_with(a0, a1, a2, a3, &Tolerances::default())
}

/// `Dependent` when every sampled line meeting `a0`, `a1`, `a2` also meets
/// `a3` within `tol.surf`, i.e. `a3` lies on the surface of the first three.
pub fn independence_check_with(
    a0: &EdgeLine,
    a1: &EdgeLine,
    a2: &EdgeLine,
    a3: &EdgeLine,
    tol: &Tolerances,
) -> Result<Independence, TransversalError> {
    skew_pairs(&[a0, a1, a2, a3], tol)?;
    let reach = 1.0
        + [a1, a2, a3]
            .iter()
            .map(|l| (l.p - a0.p).norm())
            .fold(0.0f64, f64::max);
    let ms: Vec<f64> = (0..SAMPLE_GRID)
        .map(|i| reach * (2.0 * i as f64 / (SAMPLE_GRID - 1) as f64 - 1.0))
        .collect();
    let lines = sample_transversals(a0, a1, a2, &ms);
    let dependent = lines.len() >= 3
        && lines.iter().all(|l| {
            let scale = 1.0 + (l.p - a3.p).norm();
            l.distance_to_line(a3) <= tol.surf * scale
        });
    Ok(if dependent {
        Independence::Dependent
    } else {
        Independence::Independent
    })
}
