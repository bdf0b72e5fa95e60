/// Real roots of `c[0] + c[1] t + ... + c[d] t^d`, ascending, with roots
/// closer than `merge` reported once. Leading coefficients below `1e-14`
/// times the largest one are dropped. The zero polynomial has no roots by
/// convention; callers test for it separately.
pub fn real_roots(coeffs: &[f64], merge: f64) -> Vec<f64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut c: Vec<f64> = coeffs.iter().map(|x| x / scale).collect();
    while c.len() > 1 && c.last().unwrap().abs() < 1e-14 {
        c.pop();
    }
    let mut roots = roots_of(&c);
    roots.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last() {
            Some(&last) if (r - last).abs() < merge => {}
            _ => merged.push(r),
        }
    }
    merged
}

fn eval(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * t + x)
}

fn roots_of(c: &[f64]) -> Vec<f64> {
    match c.len() {
        0 | 1 => Vec::new(),
        2 => vec![-c[0] / c[1]],
        3 => quadratic(c[0], c[1], c[2]),
        _ => {
            // real roots are separated by the critical points
            let deriv: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, x)| k as f64 * x).collect();
            let lead = *c.last().unwrap();
            let bound = 1.0 + c[..c.len() - 1].iter().fold(0.0f64, |m, x| m.max((x / lead).abs()));
            let mut knots = vec![-bound];
            knots.extend(roots_of(&deriv).into_iter().filter(|t| t.abs() < bound));
            knots.push(bound);
            knots.sort_by(f64::total_cmp);
            let mut out = Vec::new();
            for w in knots.windows(2) {
                let (a, b) = (w[0], w[1]);
                let (fa, fb) = (eval(c, a), eval(c, b));
                if fa == 0.0 {
                    out.push(a);
                } else if fa.signum() != fb.signum() {
                    out.push(bisect(c, a, b, fa));
                }
            }
            if eval(c, bound) == 0.0 {
                out.push(bound);
            }
            // double roots at critical points do not change sign
            for t in roots_of(&deriv) {
                if eval(c, t).abs() < 1e-12 * (1.0 + t.abs().powi(c.len() as i32 - 1)) {
                    out.push(t);
                }
            }
            out
        }
    }
}

fn quadratic(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    let disc = c1 * c1 - 4.0 * c2 * c0;
    let size = c1 * c1 + (4.0 * c2 * c0).abs();
    if disc < 0.0 {
        if -disc <= 1e-12 * size {
            return vec![-c1 / (2.0 * c2)];
        }
        return Vec::new();
    }
    // cancellation-free form
    let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
    let q = if q == 0.0 { -0.5 * disc.sqrt() } else { q };
    let mut out = vec![q / c2];
    if q != 0.0 {
        out.push(c0 / q);
    }
    out
}

fn bisect(c: &[f64], mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = eval(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
    }

    #[test]
    fn low_degrees() {
        assert!(close(&real_roots(&[-2.0, 1.0], 1e-7), &[2.0]));
        assert!(close(&real_roots(&[2.0, -3.0, 1.0], 1e-7), &[1.0, 2.0]));
        assert!(close(&real_roots(&[1.0, 0.0, 1.0], 1e-7), &[]));
        assert!(close(&real_roots(&[1.0, -2.0, 1.0], 1e-7), &[1.0]));
        assert!(close(&real_roots(&[3.0, 0.0, 0.0], 1e-7), &[]));
        assert!(close(&real_roots(&[0.0, 0.0, 0.0], 1e-7), &[]));
        // vanishing leading coefficient falls back to the linear case
        assert!(close(&real_roots(&[-1.0, 1.0, 1e-20], 1e-7), &[1.0]));
    }

    #[test]
    fn quartics() {
        // (t-1)(t+1)(t-2)(t+3) = t^4 + t^3 - 7t^2 - t + 6
        assert!(close(&real_roots(&[6.0, -1.0, -7.0, 1.0, 1.0], 1e-7), &[-3.0, -1.0, 1.0, 2.0]));
        // (t^2+1)(t-0.5)^2 has one double root
        let c = [0.25, -1.0, 1.25, -1.0, 1.0];
        assert!(close(&real_roots(&c, 1e-7), &[0.5]));
        // t^4 + 1 has none
        assert!(close(&real_roots(&[1.0, 0.0, 0.0, 0.0, 1.0], 1e-7), &[]));
    }

    #[test]
    fn nearby_roots_merge() {
        // roots 0 and 5e-8
        let c = [0.0, -5e-8, 1.0];
        assert_eq!(real_roots(&c, 1e-7).len(), 1);
        assert_eq!(real_roots(&c, 1e-9).len(), 2);
    }
}
