//! The coding side: words of face labels, beams of parallel trajectories
//! sharing a word, the point/strip/tube classification of their
//! cross-sections, periodicity, and a sampling estimate of the number of
//! words of each length.

mod beam;
mod complexity;
mod planar;
mod word;

use thiserror::Error;

use crate::geometry::FaceId;

pub use beam::{classify_cell, detect_periodicity, Beam, CellClass, Periodicity};
pub use complexity::{
    estimate_complexity, sample_language, ComplexityRow, ComplexityTable, Language, SampleStats,
    stratified_phase_point, DIRECTION_TILES,
};
pub use word::Word;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolicError {
    #[error("unknown face label {0:?}")]
    UnknownLabel(String),
    #[error("empty word")]
    EmptyWord,
    #[error("direction does not point into the table through face {face}")]
    NotInward { face: FaceId },
    #[error("face {face} cannot be hit next at step {step} (not an exit face for this direction)")]
    LabelNotReachable { face: FaceId, step: usize },
    #[error("the beam is empty")]
    EmptyBeam,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
