use std::fmt;

use serde::Serialize;

use super::SymbolicError;
use crate::geometry::{FaceId, Polyhedron};

/// A finite sequence of face labels, stored as face ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Word(Vec<FaceId>);

impl Word {
    pub fn new(letters: Vec<FaceId>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[FaceId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, face: FaceId) {
        self.0.push(face);
    }

    pub fn last(&self) -> Option<FaceId> {
        self.0.last().copied()
    }

    /// Consecutive letters differ (a ray cannot hit the face it leaves).
    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// Whether `w[i] == w[i + k]` wherever both are defined.
    pub fn has_period(&self, k: usize) -> bool {
        k > 0 && (0..self.0.len().saturating_sub(k)).all(|i| self.0[i] == self.0[i + k])
    }

    /// Labels joined by `sep`.
    pub fn render(&self, poly: &Polyhedron, sep: &str) -> String {
        self.0
            .iter()
            .map(|&f| poly.label(f))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Parses a comma (or whitespace) separated list of face labels.
    pub fn parse(poly: &Polyhedron, text: &str) -> Result<Self, SymbolicError> {
        let letters = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                poly.face_by_label(s)
                    .ok_or_else(|| SymbolicError::UnknownLabel(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if letters.is_empty() {
            return Err(SymbolicError::EmptyWord);
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl From<Vec<FaceId>> for Word {
    fn from(v: Vec<FaceId>) -> Self {
        Word(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::solids;

    #[test]
    fn parse_render_and_period() {
        let cube = solids::cube();
        let w = Word::parse(&cube, "z0,x1, z1 x0,z0").unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.render(&cube, ","), "z0,x1,z1,x0,z0");
        assert!(w.is_admissible());
        assert!(w.has_period(4));
        assert!(!w.has_period(2));
        assert!(matches!(Word::parse(&cube, "z0,q"), Err(SymbolicError::UnknownLabel(_))));
        assert!(matches!(Word::parse(&cube, " , "), Err(SymbolicError::EmptyWord)));
        assert!(!Word::new(vec![1, 1]).is_admissible());
    }
}
