//! Small planar geometry helpers shared by the pattern, construction and
//! thickening code.

use nalgebra::{Point2, Vector2};

pub type P2 = Point2<f64>;
pub type V2 = Vector2<f64>;

/// Twice the signed area of triangle `abc`; positive when counterclockwise.
pub fn orient(a: P2, b: P2, c: P2) -> f64 {
    (b - a).perp(&(c - a))
}

pub fn polygon_area(points: &[P2]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    0.5 * acc
}

/// Unit vector at azimuth `phi`.
pub fn dir(phi: f64) -> V2 {
    V2::new(phi.cos(), phi.sin())
}

/// Rotates `v` counterclockwise by `phi`.
pub fn rotate(v: V2, phi: f64) -> V2 {
    let (s, c) = phi.sin_cos();
    V2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Left normal.
pub fn left_normal(v: V2) -> V2 {
    V2::new(-v.y, v.x)
}

pub fn azimuth(v: V2) -> f64 {
    v.y.atan2(v.x)
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_tau(a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let r = a.rem_euclid(tau);
    if r >= tau {
        0.0
    } else {
        r
    }
}

/// Intersection of the lines `p + s u` and `q + t v`; `None` when parallel.
pub fn line_intersection(p: P2, u: V2, q: P2, v: V2) -> Option<P2> {
    let den = u.perp(&v);
    if den.abs() < 1e-14 * u.norm() * v.norm() {
        return None;
    }
    let s = (q - p).perp(&v) / den;
    Some(p + u * s)
}

/// Point where the lines `x·n1 = d1` and `x·n2 = d2` meet.
pub fn solve_normals(n1: V2, d1: f64, n2: V2, d2: f64) -> Option<P2> {
    let det = n1.x * n2.y - n1.y * n2.x;
    if det.abs() < 1e-14 {
        return None;
    }
    Some(P2::new(
        (d1 * n2.y - d2 * n1.y) / det,
        (n1.x * d2 - n2.x * d1) / det,
    ))
}

/// Parameter `s ≥ 0` where the ray `p + s u` first meets segment `ab`, if any.
pub fn ray_segment(p: P2, u: V2, a: P2, b: P2, eps: f64) -> Option<f64> {
    let e = b - a;
    let den = u.perp(&e);
    if den.abs() < 1e-14 {
        return None;
    }
    let s = (a - p).perp(&e) / den;
    let t = (a - p).perp(&u) / den;
    if s >= -eps && t >= -eps && t <= 1.0 + eps {
        Some(s)
    } else {
        None
    }
}

/// Distance from `p` to segment `ab` together with the segment parameter of
/// the closest point.
pub fn point_segment(p: P2, a: P2, b: P2) -> (f64, f64) {
    let e = b - a;
    let len2 = e.norm_squared();
    if len2 == 0.0 {
        return ((p - a).norm(), 0.0);
    }
    let t = ((p - a).dot(&e) / len2).clamp(0.0, 1.0);
    ((a + e * t - p).norm(), t)
}

/// Even-odd point-in-polygon test; points on the boundary may go either way.
pub fn point_in_polygon(p: P2, poly: &[P2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Clips a convex polygon to the half-plane `x·n ≤ d`.
pub fn clip_half_plane(poly: &[P2], n: V2, d: f64) -> Vec<P2> {
    let k = poly.len();
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..k {
        let a = poly[i];
        let b = poly[(i + 1) % k];
        let fa = a.coords.dot(&n) - d;
        let fb = b.coords.dot(&n) - d;
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            out.push(a + (b - a) * (fa / (fa - fb)));
        }
    }
    out
}
