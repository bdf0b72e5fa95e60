use super::{BilliardError, OrbitRecord, OrbitStatus};
use crate::geometry::{segment_segment_distance, Isometry, Point3, Polyhedron};
use crate::transversal::EdgeLine;

/// Unfolded edges met by an orbit.
///
/// For a singular orbit these are the edges of the terminal singularity.
/// With `radius > 0`, every edge passing within `radius` of a recorded orbit
/// segment is added as well (near misses), expressed in the unfolded
/// coordinates of that segment. Duplicates are removed.
pub fn discontinuity_report(
    record: &OrbitRecord,
    poly: &Polyhedron,
    radius: f64,
) -> Result<Vec<EdgeLine>, BilliardError> {
    let mut found: Vec<EdgeLine> = Vec::new();
    let mut push = |line: EdgeLine| {
        if !found.iter().any(|l| l.same_line(&line, 1e-9)) {
            found.push(line);
        }
    };

    if radius > 0.0 {
        let mut iso = Isometry::identity();
        let mut segments: Vec<(Point3, Point3, Isometry)> = Vec::new();
        for pair in record.points.windows(2) {
            segments.push((pair[0].m(), pair[1].m(), iso));
            iso = iso.compose(&Isometry::reflection(&poly.face(pair[1].face()).plane));
        }
        if let OrbitStatus::Singular(ev) = &record.status {
            let last = record.points.last().expect("records are nonempty");
            if (ev.point - last.m()).norm() > 0.0 {
                segments.push((last.m(), ev.point, iso));
            }
        }
        for (a, b, iso) in &segments {
            for edge in poly.edges() {
                let end = edge.point + edge.dir.into_inner() * edge.length;
                if segment_segment_distance(a, b, &edge.point, &end) <= radius {
                    push(EdgeLine::from_edge(edge).transformed(iso));
                }
            }
        }
    }
    if let OrbitStatus::Singular(ev) = &record.status {
        for line in &ev.unfolded {
            push(*line);
        }
    }
    if found.is_empty() {
        Err(BilliardError::EmptyReport)
    } else {
        Ok(found)
    }
}
