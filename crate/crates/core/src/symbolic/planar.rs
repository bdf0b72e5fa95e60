//! Convex polygons in the plane, possibly degenerate (a segment or a point).

pub(crate) type P2 = [f64; 2];

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dist(a: P2, b: P2) -> f64 {
    let d = sub(a, b);
    d[0].hypot(d[1])
}

pub(crate) fn signed_area(poly: &[P2]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        s += cross(poly[i], poly[j]);
    }
    0.5 * s
}

pub(crate) fn area(poly: &[P2]) -> f64 {
    signed_area(poly).abs()
}

pub(crate) fn diameter(poly: &[P2]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..poly.len() {
        for j in i + 1..poly.len() {
            d = d.max(dist(poly[i], poly[j]));
        }
    }
    d
}

pub(crate) fn make_ccw(mut poly: Vec<P2>) -> Vec<P2> {
    if signed_area(&poly) < 0.0 {
        poly.reverse();
    }
    poly
}

/// Drops consecutive points closer than `eps` (cyclically).
fn dedup(poly: Vec<P2>, eps: f64) -> Vec<P2> {
    let mut out: Vec<P2> = Vec::with_capacity(poly.len());
    for p in poly {
        if out.last().map_or(true, |&q| dist(p, q) > eps) {
            out.push(p);
        }
    }
    while out.len() > 1 && dist(out[0], *out.last().unwrap()) <= eps {
        out.pop();
    }
    out
}

/// Intersection of a convex (possibly degenerate) polygon with a convex
/// counter-clockwise polygon. Points within `eps` of the clip boundary are
/// kept, so touching boundaries yield segments or points rather than
/// nothing.
pub(crate) fn clip(subject: &[P2], clipper: &[P2], eps: f64) -> Vec<P2> {
    let mut out: Vec<P2> = subject.to_vec();
    for i in 0..clipper.len() {
        if out.is_empty() {
            break;
        }
        let a = clipper[i];
        let b = clipper[(i + 1) % clipper.len()];
        let len = dist(a, b);
        if len == 0.0 {
            continue;
        }
        let side = |p: P2| cross(sub(b, a), sub(p, a)) / len;
        let input = std::mem::take(&mut out);
        for k in 0..input.len() {
            let cur = input[k];
            let prev = input[(k + input.len() - 1) % input.len()];
            let (dc, dp) = (side(cur), side(prev));
            let crossing = |out: &mut Vec<P2>| {
                let t = dp / (dp - dc);
                out.push([prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])]);
            };
            if dc >= -eps {
                if dp < -eps {
                    crossing(&mut out);
                }
                out.push(cur);
            } else if dp >= -eps {
                crossing(&mut out);
            }
        }
        out = dedup(out, eps);
    }
    out
}

fn point_segment(p: P2, a: P2, b: P2) -> f64 {
    let ab = sub(b, a);
    let l2 = ab[0] * ab[0] + ab[1] * ab[1];
    if l2 == 0.0 {
        return dist(p, a);
    }
    let t = ((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / l2;
    let t = t.clamp(0.0, 1.0);
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

/// Distance from `p` to the polygon (zero inside).
pub(crate) fn distance_to(poly: &[P2], p: P2) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => dist(p, poly[0]),
        _ => {
            let ccw = signed_area(poly) > 0.0;
            let mut inside = poly.len() >= 3;
            let mut best = f64::INFINITY;
            for i in 0..poly.len() {
                let a = poly[i];
                let b = poly[(i + 1) % poly.len()];
                best = best.min(point_segment(p, a, b));
                let s = cross(sub(b, a), sub(p, a));
                if (ccw && s < 0.0) || (!ccw && s > 0.0) {
                    inside = false;
                }
            }
            if inside {
                0.0
            } else {
                best
            }
        }
    }
}
