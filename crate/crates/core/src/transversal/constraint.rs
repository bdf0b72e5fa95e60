use serde::Serialize;

use super::{EdgeLine, TransversalError};
use crate::geometry::{Dir3, Vec3};
use crate::Tolerances;

/// The condition on `(m, θ)` for the line `p0 + m u + λ θ` to meet a second
/// edge line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum TransversalConstraint {
    /// The two edges span a plane; admissible directions satisfy
    /// `<f, θ> = 0` with `f` its unit normal.
    Coplanar { f: Vec3, u: Dir3 },
    /// `m = <a, θ> / <b, θ>`.
    Rational { a: Vec3, b: Vec3, u: Dir3 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum ConstraintValue {
    /// The base-point parameter `m` (rational constraints).
    M(f64),
    /// `<f, θ>`; zero means admissible (coplanar constraints).
    Residual(f64),
    /// `θ` is parallel to the critical plane `<b, θ> = 0`.
    Undefined,
}

impl ConstraintValue {
    pub fn value(&self) -> Option<f64> {
        match *self {
            ConstraintValue::M(v) | ConstraintValue::Residual(v) => Some(v),
            ConstraintValue::Undefined => None,
        }
    }
}

impl TransversalConstraint {
    pub fn base_direction(&self) -> Dir3 {
        match *self {
            TransversalConstraint::Coplanar { u, .. } | TransversalConstraint::Rational { u, .. } => u,
        }
    }
}

pub fn pair_constraint(a0: &EdgeLine, a1: &EdgeLine) -> Result<TransversalConstraint, TransversalError> {
    pair_constraint_with(a0, a1, &Tolerances::default())
}

/// Constraint for lines through `a0` to meet `a1`. The pair counts as
/// coplanar when the triple product `<p1 - p0, u × x1>` is within
/// `tol.plane` (scaled by the distance of the base points).
pub fn pair_constraint_with(
    a0: &EdgeLine,
    a1: &EdgeLine,
    tol: &Tolerances,
) -> Result<TransversalConstraint, TransversalError> {
    if a0.same_line(a1, tol.plane) {
        return Err(TransversalError::IdenticalLines);
    }
    let u = a0.x;
    let p = a1.p - a0.p;
    let b = u.cross(&a1.x);
    let scale = 1.0 + p.norm();
    if p.dot(&b).abs() <= tol.plane * scale {
        let normal = if b.norm() > tol.angle {
            b
        } else {
            u.cross(&p)
        };
        let f = Dir3::new(normal).ok_or(TransversalError::IdenticalLines)?;
        return Ok(TransversalConstraint::Coplanar { f: f.into_inner(), u });
    }
    Ok(TransversalConstraint::Rational {
        a: p.cross(&a1.x),
        b,
        u,
    })
}

pub fn eval_constraint(c: &TransversalConstraint, theta: &Vec3) -> ConstraintValue {
    eval_constraint_with(c, theta, &Tolerances::default())
}

/// Evaluates a constraint at a direction. Rational constraints are
/// homogeneous of degree zero, so `theta` need not be unit; the denominator
/// test is applied to the unit direction.
pub fn eval_constraint_with(c: &TransversalConstraint, theta: &Vec3, tol: &Tolerances) -> ConstraintValue {
    match *c {
        TransversalConstraint::Coplanar { f, .. } => ConstraintValue::Residual(f.dot(theta)),
        TransversalConstraint::Rational { a, b, .. } => {
            let n = theta.norm();
            let den = b.dot(theta);
            if !(n > 0.0) || (den / n).abs() < tol.den {
                ConstraintValue::Undefined
            } else {
                ConstraintValue::M(a.dot(theta) / den)
            }
        }
    }
}
