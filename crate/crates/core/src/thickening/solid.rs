//! Convex panel solids as half-space intersections, their vertices by
//! plane-triple enumeration, and separating-axis distances.

use nalgebra::{IsometryMatrix3, Matrix3, Point3, Vector3};

use super::Side;
use crate::crease_pattern::FaceId;
use crate::fold3d::{weld, write_obj, FoldedState};
use crate::geom::P2;

/// Panel over one convex piece of a face: `0 ≤ |z| ≤ τ` on the chosen
/// side, each trimmed edge receding by `|z| tan(ρ_max/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PanelSolid {
    pub face: FaceId,
    pub base: Vec<P2>,
    /// Trim angle of each base edge `base[i] → base[i+1]`.
    pub trims: Vec<Option<f64>>,
    pub tau: f64,
    pub side: Side,
    /// Outward unit normal and offset of every bounding plane, `n·x ≤ d`.
    pub planes: Vec<(Vector3<f64>, f64)>,
    pub vertices: Vec<Point3<f64>>,
    /// Vertex loops of the non-degenerate planes, counterclockwise seen
    /// from outside.
    pub facets: Vec<Vec<usize>>,
}

/// A solid moved into place, with the data the distance test needs.
pub(crate) struct Placed {
    pub vertices: Vec<Point3<f64>>,
    pub normals: Vec<Vector3<f64>>,
    pub edges: Vec<Vector3<f64>>,
    pub center: Point3<f64>,
    pub radius: f64,
}

impl PanelSolid {
    pub fn new(face: FaceId, base: Vec<P2>, trims: Vec<Option<f64>>, tau: f64, side: Side) -> Self {
        let s = side.closing_sign();
        let mut planes = vec![(Vector3::new(0.0, 0.0, -s), 0.0), (Vector3::new(0.0, 0.0, s), tau)];
        let k = base.len();
        for i in 0..k {
            let (a, b) = (base[i], base[(i + 1) % k]);
            let d = b - a;
            if d.norm() == 0.0 {
                continue;
            }
            let n = P2::new(d.y, -d.x).coords / d.norm();
            let lean = trims[i].map_or(0.0, |r| (r / 2.0).tan());
            let normal = Vector3::new(n.x, n.y, s * lean);
            let len = normal.norm();
            planes.push((normal / len, n.dot(&a.coords) / len));
        }
        let scale = base.iter().map(|p| p.coords.norm()).fold(tau, f64::max).max(1e-12);
        let vertices = enumerate_vertices(&planes, scale);
        let facets = facets(&planes, &vertices, scale);
        PanelSolid { face, base, trims, tau, side, planes, vertices, facets }
    }

    /// Largest `|z|` reached; below `tau` when the trims meet in a ridge.
    pub fn height(&self) -> f64 {
        self.vertices.iter().map(|v| v.z.abs()).fold(0.0, f64::max)
    }

    pub(crate) fn placed(&self, iso: &IsometryMatrix3<f64>) -> Placed {
        let vertices: Vec<Point3<f64>> = self.vertices.iter().map(|v| iso * v).collect();
        let normals: Vec<Vector3<f64>> = self.planes.iter().map(|(n, _)| iso.rotation * n).collect();
        let mut edges = Vec::new();
        for f in &self.facets {
            for i in 0..f.len() {
                let d = vertices[f[(i + 1) % f.len()]] - vertices[f[i]];
                let n = d.norm();
                if n > 0.0 {
                    let d = d / n;
                    if !edges.iter().any(|e: &Vector3<f64>| e.cross(&d).norm() < 1e-9) {
                        edges.push(d);
                    }
                }
            }
        }
        let center = if vertices.is_empty() {
            Point3::origin()
        } else {
            Point3::from(vertices.iter().map(|v| v.coords).sum::<Vector3<f64>>() / vertices.len() as f64)
        };
        let radius = vertices.iter().map(|v| (v - center).norm()).fold(0.0, f64::max);
        Placed { vertices, normals, edges, center, radius }
    }
}

fn enumerate_vertices(planes: &[(Vector3<f64>, f64)], scale: f64) -> Vec<Point3<f64>> {
    let eps = 1e-9 * scale;
    let m = planes.len();
    let mut out: Vec<Point3<f64>> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let a = Matrix3::from_rows(&[planes[i].0.transpose(), planes[j].0.transpose(), planes[k].0.transpose()]);
                if a.determinant().abs() < 1e-12 {
                    continue;
                }
                let Some(inv) = a.try_inverse() else { continue };
                let p = Point3::from(inv * Vector3::new(planes[i].1, planes[j].1, planes[k].1));
                if planes.iter().all(|(n, d)| n.dot(&p.coords) <= d + eps) && !out.iter().any(|q| (q - p).norm() < eps) {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn facets(planes: &[(Vector3<f64>, f64)], vertices: &[Point3<f64>], scale: f64) -> Vec<Vec<usize>> {
    let eps = 1e-9 * scale;
    let mut out = Vec::new();
    for (n, d) in planes {
        let on: Vec<usize> = (0..vertices.len()).filter(|&v| (n.dot(&vertices[v].coords) - d).abs() < eps).collect();
        if on.len() < 3 {
            continue;
        }
        let c = on.iter().map(|&v| vertices[v].coords).sum::<Vector3<f64>>() / on.len() as f64;
        let u = (vertices[on[0]].coords - c).normalize();
        let w = n.cross(&u);
        let mut ring = on.clone();
        ring.sort_by(|&a, &b| {
            let pa = vertices[a].coords - c;
            let pb = vertices[b].coords - c;
            pa.dot(&w).atan2(pa.dot(&u)).total_cmp(&pb.dot(&w).atan2(pb.dot(&u)))
        });
        out.push(ring);
    }
    out
}

/// Signed separation by separating axes: face normals of both solids,
/// edge-pair cross products and the line of centers. Positive values are
/// gaps, negative values penetration depths.
pub(crate) fn separation(a: &Placed, b: &Placed) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut test = |axis: Vector3<f64>| {
        let n = axis.norm();
        if n < 1e-9 {
            return;
        }
        let axis = axis / n;
        let (amin, amax) = extent(&a.vertices, &axis);
        let (bmin, bmax) = extent(&b.vertices, &axis);
        best = best.max((bmin - amax).max(amin - bmax));
    };
    for n in a.normals.iter().chain(&b.normals) {
        test(*n);
    }
    for ea in &a.edges {
        for eb in &b.edges {
            test(ea.cross(eb));
        }
    }
    test(b.center - a.center);
    best
}

fn extent(points: &[Point3<f64>], axis: &Vector3<f64>) -> (f64, f64) {
    points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let x = p.coords.dot(axis);
        (lo.min(x), hi.max(x))
    })
}

pub(crate) fn export_obj(solids: &[PanelSolid], state: Option<&FoldedState>) -> String {
    let mut out = String::from("# dlfold thick panels\n");
    let mut groups = Vec::new();
    let mut all = Vec::new();
    for (k, s) in solids.iter().enumerate() {
        // Welding is per solid so each stays a closed shell.
        let mut points: Vec<[f64; 3]> = Vec::new();
        let ids: Vec<usize> = s
            .vertices
            .iter()
            .map(|v| {
                let p = state.map_or(*v, |st| st.transforms[s.face] * v);
                weld(&mut points, [p.x, p.y, p.z])
            })
            .collect();
        let base = all.len();
        let mut tris = Vec::new();
        for f in &s.facets {
            for i in 1..f.len().saturating_sub(1) {
                tris.push([base + ids[f[0]], base + ids[f[i]], base + ids[f[i + 1]]]);
            }
        }
        all.extend(points);
        groups.push((format!("panel{k}_face{}", s.face), tris));
    }
    write_obj(&mut out, &all, &groups);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Translation3;

    fn square(trims: [Option<f64>; 4], tau: f64) -> PanelSolid {
        let base = vec![P2::new(0.0, 0.0), P2::new(1.0, 0.0), P2::new(1.0, 1.0), P2::new(0.0, 1.0)];
        PanelSolid::new(0, base, trims.to_vec(), tau, Side::Above)
    }

    #[test]
    fn plain_prism_has_eight_vertices() {
        let s = square([None; 4], 0.2);
        assert_eq!(s.vertices.len(), 8);
        assert_eq!(s.facets.len(), 6);
        assert!((s.height() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn trimmed_edge_recedes() {
        let rho = 90f64.to_radians();
        let s = square([Some(rho), None, None, None], 0.2);
        let low_top = s.vertices.iter().filter(|v| (v.z - 0.2).abs() < 1e-12).map(|v| v.y).fold(f64::INFINITY, f64::min);
        assert!((low_top - 0.2 * (rho / 2.0).tan()).abs() < 1e-12);
    }

    #[test]
    fn over_thick_trims_meet_in_a_ridge() {
        let rho = 120f64.to_radians();
        let s = square([Some(rho), None, Some(rho), None], 2.0);
        let ridge = 0.5 / (rho / 2.0).tan();
        assert!((s.height() - ridge).abs() < 1e-9);
    }

    #[test]
    fn separation_of_stacked_prisms() {
        let a = square([None; 4], 0.2);
        let lift = IsometryMatrix3::from_parts(Translation3::new(0.0, 0.0, 0.5), nalgebra::Rotation3::identity());
        let gap = separation(&a.placed(&IsometryMatrix3::identity()), &a.placed(&lift));
        assert!((gap - 0.3).abs() < 1e-12);
        let sink = IsometryMatrix3::from_parts(Translation3::new(0.0, 0.0, 0.15), nalgebra::Rotation3::identity());
        let depth = separation(&a.placed(&IsometryMatrix3::identity()), &a.placed(&sink));
        assert!((depth + 0.05).abs() < 1e-12);
    }
}
