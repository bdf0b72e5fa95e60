//! Lines meeting several edge lines.
//!
//! A line through a point `m` of a base edge `A0` (measured along its unit
//! direction `u` from its base point) with direction `θ` meets a second edge
//! `A1` iff `m = <a, θ> / <b, θ>` with `a = p1 × x1`, `b = u × x1` in
//! coordinates where `A0` passes through the origin. Lines meeting three
//! pairwise skew edges sweep a quadric surface.

mod constraint;
mod line;
mod roots;
mod surface;

use thiserror::Error;

pub use constraint::{
    eval_constraint, eval_constraint_with, pair_constraint, pair_constraint_with, ConstraintValue,
    TransversalConstraint,
};
pub use line::EdgeLine;
pub use roots::real_roots;
pub use surface::{
    count_line_surface_intersections, count_line_surface_intersections_with, independence_check,
    independence_check_with, line_surface_parameters, sample_transversals, triple_surface,
    triple_surface_with, Frame, Independence, IntersectionCount, TripleSurface,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransversalError {
    #[error("the two edge lines coincide")]
    IdenticalLines,
    #[error("edge lines {0} and {1} are not skew (they are coplanar)")]
    NotPairwiseSkew(usize, usize),
}
