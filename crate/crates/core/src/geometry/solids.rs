//! Canonical tables used by tests, examples and the CLI.

use super::polyhedron::{Polyhedron, RawFace, RawPolyhedron};

fn face(label: &str, vertices: &[usize]) -> RawFace {
    RawFace {
        label: label.to_string(),
        vertices: vertices.to_vec(),
    }
}

/// The axis-aligned box `[0,a] x [0,b] x [0,c]`.
///
/// Faces are labeled `x0, x1, y0, y1, z0, z1` after the coordinate plane they
/// lie in.
pub fn raw_box(a: f64, b: f64, c: f64) -> RawPolyhedron {
    // vertex index = x_bit + 2 y_bit + 4 z_bit
    let vertices = (0..8)
        .map(|i| {
            [
                if i & 1 != 0 { a } else { 0.0 },
                if i & 2 != 0 { b } else { 0.0 },
                if i & 4 != 0 { c } else { 0.0 },
            ]
        })
        .collect();
    RawPolyhedron {
        vertices,
        faces: vec![
            face("x0", &[0, 4, 6, 2]),
            face("x1", &[1, 3, 7, 5]),
            face("y0", &[0, 1, 5, 4]),
            face("y1", &[2, 6, 7, 3]),
            face("z0", &[0, 2, 3, 1]),
            face("z1", &[4, 5, 7, 6]),
        ],
    }
}

pub fn cuboid(a: f64, b: f64, c: f64) -> Polyhedron {
    Polyhedron::validate(&raw_box(a, b, c)).expect("box is a valid table")
}

/// The unit cube `[0,1]^3`.
pub fn cube() -> Polyhedron {
    cuboid(1.0, 1.0, 1.0)
}

/// Tetrahedron with the given vertices; face `k` is opposite vertex `k` and
/// is labeled with the `k`-th letter.
pub fn raw_tetrahedron(v: [[f64; 3]; 4]) -> RawPolyhedron {
    RawPolyhedron {
        vertices: v.to_vec(),
        faces: vec![
            face("a", &[1, 2, 3]),
            face("b", &[0, 2, 3]),
            face("c", &[0, 1, 3]),
            face("d", &[0, 1, 2]),
        ],
    }
}

pub fn regular_tetrahedron() -> Polyhedron {
    Polyhedron::validate(&raw_tetrahedron([
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]))
    .expect("regular tetrahedron is a valid table")
}

/// Regular octahedron with vertices at `±e_i`.
pub fn octahedron() -> Polyhedron {
    let vertices = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut faces = Vec::new();
    for (i, x) in [0usize, 1].into_iter().enumerate() {
        for (j, y) in [2usize, 3].into_iter().enumerate() {
            for (k, z) in [4usize, 5].into_iter().enumerate() {
                let label = format!("o{}{}{}", i, j, k);
                faces.push(face(&label, &[x, y, z]));
            }
        }
    }
    Polyhedron::validate(&RawPolyhedron { vertices, faces }).expect("octahedron is a valid table")
}
