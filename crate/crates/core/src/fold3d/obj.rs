use std::fmt::Write;

use super::FoldedState;
use crate::crease_pattern::CreasePattern;
use crate::geom::{orient, point_in_polygon, P2};

const WELD: f64 = 1e-6;

/// Ear-clipping triangulation of a counterclockwise simple polygon, as
/// index triples into `poly`.
pub(crate) fn triangulate(poly: &[P2]) -> Vec<[usize; 3]> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut out = Vec::new();
    let mut guard = 0;
    while idx.len() > 3 && guard < 10 * poly.len() * poly.len() {
        guard += 1;
        let k = idx.len();
        let ear = (0..k).find(|&i| {
            let (a, b, c) = (idx[(i + k - 1) % k], idx[i], idx[(i + 1) % k]);
            if orient(poly[a], poly[b], poly[c]) <= 0.0 {
                return false;
            }
            let tri = [poly[a], poly[b], poly[c]];
            !idx.iter().any(|&j| j != a && j != b && j != c && point_in_polygon(poly[j], &tri))
        });
        let i = ear.unwrap_or(0);
        out.push([idx[(i + k - 1) % k], idx[i], idx[(i + 1) % k]]);
        idx.remove(i);
    }
    if idx.len() == 3 {
        out.push([idx[0], idx[1], idx[2]]);
    }
    out
}

/// Welds points closer than `WELD`, returning the index of `p`.
pub(crate) fn weld(points: &mut Vec<[f64; 3]>, p: [f64; 3]) -> usize {
    if let Some(i) = points.iter().position(|q| {
        let d = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() <= WELD
    }) {
        return i;
    }
    points.push(p);
    points.len() - 1
}

pub(crate) fn write_obj(out: &mut String, points: &[[f64; 3]], groups: &[(String, Vec<[usize; 3]>)]) {
    for p in points {
        let _ = writeln!(out, "v {:.9} {:.9} {:.9}", clean(p[0]), clean(p[1]), clean(p[2]));
    }
    for (name, tris) in groups {
        let _ = writeln!(out, "g {name}");
        for t in tris {
            let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() < 5e-10 {
        0.0
    } else {
        x
    }
}

/// Triangulated folded surface as ASCII OBJ, one group per face.
pub fn export_obj(pattern: &CreasePattern, state: &FoldedState) -> String {
    let mut points = Vec::new();
    let mut groups = Vec::new();
    for (f, face) in pattern.faces().iter().enumerate() {
        let poly: Vec<P2> = face.iter().map(|&v| pattern.vertices()[v]).collect();
        let ids: Vec<usize> = poly
            .iter()
            .map(|&p| {
                let q = state.place(f, p);
                weld(&mut points, [q.x, q.y, q.z])
            })
            .collect();
        let tris = triangulate(&poly).into_iter().map(|t| [ids[t[0]], ids[t[1]], ids[t[2]]]).collect();
        groups.push((format!("face{f}"), tris));
    }
    let mut out = String::from("# dlfold folded state\n");
    write_obj(&mut out, &points, &groups);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crease_pattern::{Assignment, Crease, FoldAngleVector};
    use crate::fold3d::propagate_fold;

    #[test]
    fn unit_square_is_two_triangles() {
        let verts = vec![P2::new(0.0, 0.0), P2::new(1.0, 0.0), P2::new(1.0, 1.0), P2::new(0.0, 1.0)];
        let creases = (0..4).map(|i| Crease::new(i, (i + 1) % 4, Assignment::Boundary)).collect();
        let p = CreasePattern::new(verts, creases).unwrap();
        let s = propagate_fold(&p, &FoldAngleVector::zeros(4)).unwrap();
        let obj = export_obj(&p, &s);
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2);
        assert!(obj.lines().filter(|l| l.starts_with("v ")).all(|l| l.ends_with(" 0.000000000")));
    }

    #[test]
    fn concave_polygon_triangulates() {
        let poly = [P2::new(0.0, 0.0), P2::new(2.0, 0.0), P2::new(2.0, 2.0), P2::new(1.0, 0.5), P2::new(0.0, 2.0)];
        let tris = triangulate(&poly);
        assert_eq!(tris.len(), 3);
        let area: f64 = tris.iter().map(|t| 0.5 * orient(poly[t[0]], poly[t[1]], poly[t[2]])).sum();
        assert!((area - crate::geom::polygon_area(&poly)).abs() < 1e-12);
    }
}
