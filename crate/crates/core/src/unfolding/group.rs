use std::collections::HashMap;

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{reorthonormalize, Polyhedron};

pub const DEFAULT_GROUP_BOUND: usize = 10_000;

/// Two linear parts closer than this (Frobenius norm) are the same element.
const SAME_ELEMENT: f64 = 1e-8;
/// Elements are re-orthonormalized after this many generator multiplications.
const RENORMALIZE_EVERY: usize = 64;
/// Bucket width for the entries used as hash keys; larger than `SAME_ELEMENT`
/// so that equal elements fall into the same or an adjacent bucket.
const BUCKET: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupStatus {
    Closed { order: usize },
    NotClosedWithinBound { bound: usize },
}

/// Linear parts reached by the closure, in breadth-first order.
#[derive(Clone, Debug, Serialize)]
pub struct GroupClosure {
    #[serde(skip)]
    pub elements: Vec<Matrix3<f64>>,
    pub status: GroupStatus,
    pub bound: usize,
}

impl GroupClosure {
    pub fn order(&self) -> Option<usize> {
        match self.status {
            GroupStatus::Closed { order } => Some(order),
            GroupStatus::NotClosedWithinBound { .. } => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.order().is_some()
    }

    pub fn contains(&self, m: &Matrix3<f64>) -> bool {
        self.elements.iter().any(|e| (e - m).norm() < SAME_ELEMENT)
    }
}

struct ElementSet {
    elements: Vec<Matrix3<f64>>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl ElementSet {
    fn key(m: &Matrix3<f64>) -> (i64, i64) {
        ((m[(0, 0)] / BUCKET).floor() as i64, (m[(1, 1)] / BUCKET).floor() as i64)
    }

    fn find(&self, m: &Matrix3<f64>) -> Option<usize> {
        let (a, b) = Self::key(m);
        for da in -1..=1 {
            for db in -1..=1 {
                if let Some(ids) = self.buckets.get(&(a + da, b + db)) {
                    if let Some(&i) = ids.iter().find(|&&i| (self.elements[i] - m).norm() < SAME_ELEMENT) {
                        return Some(i);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, m: Matrix3<f64>) -> bool {
        if self.find(&m).is_some() {
            return false;
        }
        self.buckets.entry(Self::key(&m)).or_default().push(self.elements.len());
        self.elements.push(m);
        true
    }
}

/// Breadth-first closure of the linear face reflections `I - 2 n nᵀ` under
/// multiplication. Stops as soon as more than `bound` distinct elements are
/// found.
pub fn generate_group(poly: &Polyhedron, bound: usize) -> GroupClosure {
    let bound = bound.max(1);
    let mut generators: Vec<Matrix3<f64>> = Vec::new();
    for f in 0..poly.faces().len() {
        let r = poly.linear_reflection(f);
        if !generators.iter().any(|g| (g - r).norm() < SAME_ELEMENT) {
            generators.push(r);
        }
    }

    let mut set = ElementSet {
        elements: Vec::new(),
        buckets: HashMap::new(),
    };
    set.insert(Matrix3::identity());
    // (element, multiplications since the last re-orthonormalization)
    let mut frontier: Vec<(Matrix3<f64>, usize)> = vec![(Matrix3::identity(), 0)];
    while !frontier.is_empty() {
        let products: Vec<(Matrix3<f64>, usize)> = frontier
            .par_iter()
            .flat_map_iter(|(m, age)| {
                generators.iter().map(move |g| {
                    let p = m * g;
                    if age + 1 >= RENORMALIZE_EVERY {
                        (reorthonormalize(&p), 0)
                    } else {
                        (p, age + 1)
                    }
                })
            })
            .collect();
        let mut next = Vec::new();
        for (p, age) in products {
            if set.insert(p) {
                if set.elements.len() > bound {
                    return GroupClosure {
                        elements: set.elements,
                        status: GroupStatus::NotClosedWithinBound { bound },
                        bound,
                    };
                }
                next.push((p, age));
            }
        }
        frontier = next;
    }
    GroupClosure {
        status: GroupStatus::Closed {
            order: set.elements.len(),
        },
        elements: set.elements,
        bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{solids, RawFace, RawPolyhedron};

    #[test]
    fn cube_and_box_have_order_eight() {
        for poly in [solids::cube(), solids::cuboid(1.0, 2.0, 3.5)] {
            let g = generate_group(&poly, DEFAULT_GROUP_BOUND);
            assert_eq!(g.status, GroupStatus::Closed { order: 8 });
            for e in &g.elements {
                // diagonal sign matrices
                for i in 0..3 {
                    for j in 0..3 {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((e[(i, j)].abs() - want).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn regular_tetrahedron_does_not_close() {
        let g = generate_group(&solids::regular_tetrahedron(), 1000);
        assert_eq!(g.status, GroupStatus::NotClosedWithinBound { bound: 1000 });
        assert_eq!(g.elements.len(), 1001);
        assert!(g.order().is_none());
    }

    fn triangular_prism() -> Polyhedron {
        let h = 3f64.sqrt() / 2.0;
        let raw = RawPolyhedron {
            vertices: vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.5, h, 0.0],
                [0.0, 0.0, 1.0],
                [1.0, 0.0, 1.0],
                [0.5, h, 1.0],
            ],
            faces: vec![
                RawFace { label: "bottom".into(), vertices: vec![0, 1, 2] },
                RawFace { label: "top".into(), vertices: vec![3, 4, 5] },
                RawFace { label: "s0".into(), vertices: vec![0, 1, 4, 3] },
                RawFace { label: "s1".into(), vertices: vec![1, 2, 5, 4] },
                RawFace { label: "s2".into(), vertices: vec![2, 0, 3, 5] },
            ],
        };
        Polyhedron::validate(&raw).unwrap()
    }

    #[test]
    fn equilateral_prism_has_order_twelve() {
        let g = generate_group(&triangular_prism(), DEFAULT_GROUP_BOUND);
        assert_eq!(g.status, GroupStatus::Closed { order: 12 });
    }

    #[test]
    fn octahedron_does_not_close() {
        // adjacent face normals meet at arccos(1/3)
        let g = generate_group(&solids::octahedron(), 500);
        assert!(!g.is_closed());
    }

    #[test]
    fn closure_holds_identity_inverses_and_products() {
        let poly = triangular_prism();
        let g = generate_group(&poly, DEFAULT_GROUP_BOUND);
        assert!(g.contains(&Matrix3::identity()));
        for e in &g.elements {
            assert!(g.contains(&e.transpose()));
            assert!((e.transpose() * e - Matrix3::identity()).norm() < 1e-10);
            for f in 0..poly.faces().len() {
                assert!(g.contains(&(e * poly.linear_reflection(f))));
            }
        }
    }
}
