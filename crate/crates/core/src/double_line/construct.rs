//! Geometry of `DL(V, θ)` for a single vertex.
//!
//! Side `i` of the central polygon crosses crease `i` at distance `r_i`
//! from the vertex and leaves it at angle `θ`. Corner `c_i` lies in sector
//! `i`; from it run one line parallel to crease `i` and one parallel to
//! crease `i + 1`, out to a convex outer boundary.

use std::f64::consts::{FRAC_PI_2, PI};

use microlp::{ComparisonOp, OptimizationDirection, Problem, Variable};
use nalgebra::Matrix2;

use super::{dl_multipliers, star_mode_multipliers, DLMode, DlMultipliers, DoubleLineError, Sign};
use crate::crease_pattern::{
    Assignment, CreaseId, CreasePattern, FaceId, FoldAngleVector, PatternBuilder, VertexId, VertexStar,
};
use crate::geom::{clip_half_plane, dir, line_intersection, polygon_area, ray_segment, P2, V2};
use crate::kinematics::angles_from_multipliers;

#[derive(Clone, Debug, PartialEq)]
pub struct DoubleLineParams {
    pub theta: f64,
    /// Distance from the vertex at which side `i` crosses crease `i`.
    pub radii: Vec<f64>,
    /// Named mode for degree-4 stars; labels creases and fixes multipliers.
    pub mode: Option<DLMode>,
    /// Corner signs in star order, for any degree. Exclusive with `mode`.
    pub signs: Option<Vec<Sign>>,
    /// Support distance of the outer boundary along every crease direction.
    pub outer_radius: Option<f64>,
}

impl DoubleLineParams {
    /// Unit radii, no mode, automatic boundary.
    pub fn new(theta: f64, degree: usize) -> Self {
        DoubleLineParams { theta, radii: vec![1.0; degree], mode: None, signs: None, outer_radius: None }
    }

    pub fn with_mode(mut self, mode: DLMode) -> Self {
        self.mode = Some(mode);
        self
    }

    pub fn with_signs(mut self, signs: Vec<Sign>) -> Self {
        self.signs = Some(signs);
        self
    }
}

/// The two parallel creases doubling each original crease, in star order:
/// `(line from corner i − 1, line from corner i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing(pub Vec<(CreaseId, CreaseId)>);

#[derive(Clone, Debug)]
pub struct DoubleLine {
    pub pattern: CreasePattern,
    pub pairing: Pairing,
    /// Polygon side `i` crossing original crease `i`.
    pub sides: Vec<CreaseId>,
    /// Corner `c_i` in sector `i`.
    pub corners: Vec<VertexId>,
    pub center: FaceId,
    /// Outer face `F_i` filling sector `i`.
    pub outer_faces: Vec<FaceId>,
    pub multipliers: Option<DlMultipliers>,
}

impl DoubleLine {
    /// Multiplier of every crease of the pattern, zero on the boundary.
    pub fn crease_multipliers(&self) -> Option<Vec<f64>> {
        let m = self.multipliers.as_ref()?;
        let mut out = vec![0.0; self.pattern.creases().len()];
        for (i, &(a, b)) in self.pairing.0.iter().enumerate() {
            out[a] = m.pairs[i].0;
            out[b] = m.pairs[i].1;
            out[self.sides[i]] = m.sides[i];
        }
        Some(out)
    }

    /// Fold angles `2 atan(m t)` of the selected mode.
    pub fn fold_angles(&self, t: f64) -> Option<FoldAngleVector> {
        Some(angles_from_multipliers(&self.crease_multipliers()?, t))
    }
}

pub fn construct_dl(star: &VertexStar, params: &DoubleLineParams) -> Result<CreasePattern, DoubleLineError> {
    Ok(build_dl(star, params)?.pattern)
}

pub fn build_dl(star: &VertexStar, params: &DoubleLineParams) -> Result<DoubleLine, DoubleLineError> {
    let n = star.degree();
    let theta = params.theta;
    if !star.is_interior() {
        return Err(DoubleLineError::BadParams("star must be interior".into()));
    }
    if !(theta > 0.0 && theta < PI) {
        return Err(DoubleLineError::BadParams(format!("theta = {theta} outside (0, pi)")));
    }
    if params.radii.len() != n || params.radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(DoubleLineError::BadParams(format!("need {n} positive radii, got {:?}", params.radii)));
    }
    if let Some(i) = star.sectors().iter().position(|&s| s >= PI) {
        return Err(DoubleLineError::BadParams(format!("sector {i} is not convex")));
    }

    let multipliers = match (&params.mode, &params.signs) {
        (Some(_), Some(_)) => return Err(DoubleLineError::BadParams("give a mode or corner signs, not both".into())),
        (Some(mode), None) => Some(star_mode_multipliers(star, *mode, theta)?),
        (None, Some(signs)) => Some(dl_multipliers(star.sectors(), theta, signs)?),
        (None, None) => None,
    };

    let phi = star.azimuths();
    let u: Vec<V2> = phi.iter().map(|&a| dir(a)).collect();
    let feet: Vec<P2> = (0..n).map(|i| P2::from(u[i] * params.radii[i])).collect();
    let side_dir: Vec<V2> = phi.iter().map(|&a| dir(a + PI - theta)).collect();

    let mut corners = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let c = line_intersection(feet[i], side_dir[i], feet[j], side_dir[j])
            .ok_or(DoubleLineError::DegeneratePolygon(i, j))?;
        let scale = params.radii[i].max(params.radii[j]);
        if u[i].perp(&c.coords) <= 1e-12 * scale || u[j].perp(&c.coords) >= -1e-12 * scale {
            return Err(DoubleLineError::CornerInversion(i));
        }
        corners.push(c);
    }
    for i in 0..n {
        let prev = corners[(i + n - 1) % n];
        if (corners[i] - prev).dot(&side_dir[i]) <= 1e-12 * params.radii[i] {
            return Err(DoubleLineError::CornerInversion(i));
        }
    }
    if polygon_area(&corners) <= 0.0 {
        return Err(DoubleLineError::CornerInversion(0));
    }

    let r_max = params.radii.iter().cloned().fold(0.0, f64::max);
    let reach = corners.iter().map(|c| c.coords.norm()).fold(0.0, f64::max);
    let radius = match params.outer_radius {
        Some(r) => {
            if !(r > reach) {
                return Err(DoubleLineError::BadParams(format!(
                    "outer radius {r} does not enclose the central polygon (reach {reach})"
                )));
            }
            r
        }
        None => (3.0 * r_max).max(2.0 * reach),
    };
    let boundary = outer_boundary(star, &u, radius);

    let tol = 1e-9 * radius.max(1.0);
    let mut b = PatternBuilder::new(tol);
    let corner_pts: Vec<usize> = corners.iter().map(|&c| b.point(c)).collect();
    for k in 0..boundary.len() {
        b.segment(boundary[k], boundary[(k + 1) % boundary.len()], Assignment::Boundary);
    }
    let label = |x: Option<f64>| x.map_or(Assignment::Unassigned, Assignment::from_angle);
    let m = multipliers.as_ref();
    let mut side_segs = Vec::with_capacity(n);
    let mut pair_segs = vec![(0usize, 0usize); n];
    let mut ray_len = f64::INFINITY;
    for i in 0..n {
        let prev = corner_pts[(i + n - 1) % n];
        side_segs.push(b.segment_ids(prev, corner_pts[i], label(m.map(|m| m.sides[i]))));
    }
    for i in 0..n {
        let j = (i + 1) % n;
        let c = corners[i];
        let end_i = cast(c, u[i], &boundary)?;
        let end_j = cast(c, u[j], &boundary)?;
        ray_len = ray_len.min((end_i - c).norm()).min((end_j - c).norm());
        pair_segs[i].1 = b.segment(c, end_i, label(m.map(|m| m.pairs[i].1)));
        pair_segs[j].0 = b.segment(c, end_j, label(m.map(|m| m.pairs[j].0)));
    }

    let built = b.build_with_map()?;
    let single = |s: usize| -> Result<CreaseId, DoubleLineError> {
        match built.segment_creases[s].as_slice() {
            [e] => Ok(*e),
            other => Err(DoubleLineError::BadParams(format!("construction line split into {} creases", other.len()))),
        }
    };
    let sides = side_segs.iter().map(|&s| single(s)).collect::<Result<Vec<_>, _>>()?;
    let pairs = pair_segs
        .iter()
        .map(|&(a, c)| Ok((single(a)?, single(c)?)))
        .collect::<Result<Vec<_>, DoubleLineError>>()?;
    let corner_ids = corner_pts
        .iter()
        .map(|&p| built.point_vertex[p].ok_or(DoubleLineError::BadParams("corner vertex lost".into())))
        .collect::<Result<Vec<_>, _>>()?;

    let pattern = built.pattern;
    let centroid = P2::from(corners.iter().map(|c| c.coords).sum::<V2>() / n as f64);
    let center = pattern.face_at(centroid).ok_or(DoubleLineError::DegeneratePolygon(0, 0))?;
    let mut outer_faces = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let probe = corners[i] + (u[i] + u[j]).normalize() * (0.25 * ray_len);
        outer_faces.push(pattern.face_at(probe).ok_or(DoubleLineError::CornerInversion(i))?);
    }

    Ok(DoubleLine { pattern, pairing: Pairing(pairs), sides, corners: corner_ids, center, outer_faces, multipliers })
}

/// Radii that keep every polygon corner inside its sector with the widest
/// margin, scaled so the largest is 1. Equal radii only work while
/// `|θ − π/2|` stays under half the narrowest sector.
pub fn fit_radii(star: &VertexStar, theta: f64) -> Result<Vec<f64>, DoubleLineError> {
    let n = star.degree();
    if !(theta > 0.0 && theta < PI) {
        return Err(DoubleLineError::BadParams(format!("theta = {theta} outside (0, pi)")));
    }
    let phi = star.azimuths();
    let u: Vec<V2> = phi.iter().map(|&a| dir(a)).collect();
    let d: Vec<V2> = phi.iter().map(|&a| dir(a + PI - theta)).collect();

    // Corner i is linear in (r_i, r_j): r_i u_i + s d_i = r_j u_j + t d_j.
    let mut terms = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let m = Matrix2::from_columns(&[d[i], -d[j]]).try_inverse().ok_or(DoubleLineError::DegeneratePolygon(i, j))?;
        let row = m.row(0).transpose();
        terms.push([(i, u[i] - d[i] * row.dot(&u[i])), (j, d[i] * row.dot(&u[j]))]);
    }
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let r: Vec<Variable> = (0..n).map(|_| lp.add_var(0.0, (0.01, 1.0))).collect();
    let margin = lp.add_var(1.0, (f64::NEG_INFINITY, 1.0));
    for i in 0..n {
        let j = (i + 1) % n;
        let prev = terms[(i + n - 1) % n];
        let mut g = vec![vec![0.0; n]; 3];
        for (k, c) in terms[i] {
            g[0][k] += u[i].perp(&c);
            g[1][k] -= u[j].perp(&c);
            g[2][k] += c.dot(&d[i]);
        }
        for (k, c) in prev {
            g[2][k] -= c.dot(&d[i]);
        }
        for gk in g {
            let norm = gk.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let mut e: Vec<(Variable, f64)> = r.iter().zip(&gk).map(|(&v, &x)| (v, x / norm)).collect();
            e.push((margin, -1.0));
            lp.add_constraint(e.as_slice(), ComparisonOp::Ge, 0.0);
        }
    }
    let sol = lp
        .solve()
        .ok()
        .and_then(|o| o.into_solution().ok())
        .ok_or(DoubleLineError::NoRadii(f64::NEG_INFINITY))?;
    let best = sol.var_value(margin);
    if best <= 1e-6 {
        return Err(DoubleLineError::NoRadii(best));
    }
    let radii: Vec<f64> = r.iter().map(|&v| sol.var_value(v)).collect();
    let top = radii.iter().cloned().fold(0.0, f64::max);
    Ok(radii.into_iter().map(|x| x / top).collect())
}

/// Convex region `x·u_i ≤ R` for every crease, with extra caps along the
/// bisectors of wide sectors.
fn outer_boundary(star: &VertexStar, u: &[V2], radius: f64) -> Vec<P2> {
    let big = 100.0 * radius;
    let mut poly = vec![P2::new(-big, -big), P2::new(big, -big), P2::new(big, big), P2::new(-big, big)];
    let phi = star.azimuths();
    for (i, &s) in star.sectors().iter().enumerate() {
        poly = clip_half_plane(&poly, u[i], radius);
        if s > FRAC_PI_2 {
            poly = clip_half_plane(&poly, dir(phi[i] + s / 2.0), radius);
        }
    }
    poly
}

fn cast(p: P2, d: V2, boundary: &[P2]) -> Result<P2, DoubleLineError> {
    let k = boundary.len();
    (0..k)
        .filter_map(|e| ray_segment(p, d, boundary[e], boundary[(e + 1) % k], 1e-12))
        .filter(|&s| s > 0.0)
        .min_by(|a, b| a.total_cmp(b))
        .map(|s| p + d * s)
        .ok_or_else(|| DoubleLineError::BadParams("construction ray misses the boundary".into()))
}

/// Fold angle of each original crease as the sum over its pair.
pub fn corresponding_fold_angles(dl_angles: &FoldAngleVector, pairing: &Pairing) -> Result<FoldAngleVector, DoubleLineError> {
    if pairing.0.is_empty() {
        return Err(DoubleLineError::Pairing("no pairs".into()));
    }
    let len = dl_angles.len();
    let mut out = Vec::with_capacity(pairing.0.len());
    for (i, &(a, b)) in pairing.0.iter().enumerate() {
        if a >= len || b >= len {
            return Err(DoubleLineError::Pairing(format!("pair {i} refers to crease outside 0..{len}")));
        }
        if a == b {
            return Err(DoubleLineError::Pairing(format!("pair {i} repeats crease {a}")));
        }
        out.push(dl_angles[a] + dl_angles[b]);
    }
    Ok(FoldAngleVector(out))
}
