//! Billiards in convex polyhedra.
//!
//! The crate implements the boundary billiard map of a convex polyhedron,
//! the coding of orbits by face labels, unfolding of trajectories into
//! straight lines, the geometry of lines meeting several (unfolded) edges,
//! beam propagation for cells of the coding, and a sampling estimator of the
//! word complexity.

pub mod billiard;
pub mod geometry;
pub mod sampling;
pub mod symbolic;
mod tolerance;
pub mod transversal;
pub mod unfolding;

pub use tolerance::Tolerances;
