//! Double lines over a whole network. Every interior vertex gets its own
//! `θ` and radii; the radii are chosen so the two lines doubling a shared
//! crease start from corners of both end vertices and line up.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use microlp::{ComparisonOp, Error as MlpError, OptimizationDirection, Problem, Variable};

use super::{PatternsError, VertexNetwork};
use crate::crease_pattern::{
    vertex_star, Assignment, CreaseId, CreasePattern, FoldAngleVector, PatternBuilder, VertexId, VertexStar,
};
use crate::double_line::{star_mode_multipliers, DLMode, DoubleLineError, DoubleLineRatio};
use crate::geom::{azimuth, dir, left_normal, line_intersection, polygon_area, ray_segment, P2, V2};
use crate::kinematics::{angles_from_multipliers, find_mode_assignment, mode_vector, propagate_multipliers, FoldMode, KinematicsError, ModeSearch, NetworkModes};

/// The two lines replacing one original crease, named by their side of
/// the crease oriented from its first vertex to its second.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubledCrease {
    pub original: CreaseId,
    pub left: CreaseId,
    pub right: CreaseId,
}

#[derive(Clone, Debug)]
pub struct DlNetwork {
    pub original: CreasePattern,
    pub pattern: CreasePattern,
    pub thetas: BTreeMap<VertexId, f64>,
    /// Radii per original interior vertex, in its star order.
    pub radii: BTreeMap<VertexId, Vec<f64>>,
    /// Corner vertex ids of the new pattern, corner `i` in sector `i`.
    pub corners: BTreeMap<VertexId, Vec<VertexId>>,
    pub doubled: Vec<DoubledCrease>,
    /// Named mode per original vertex when they were prescribed.
    pub dl_modes: Option<BTreeMap<VertexId, DLMode>>,
    pub modes: NetworkModes,
}

impl DlNetwork {
    /// Fold angles of the original pattern: each doubled crease gets the
    /// sum over its two lines, everything else stays flat.
    pub fn corresponding_angles(&self, dl_angles: &FoldAngleVector) -> FoldAngleVector {
        let mut out = FoldAngleVector::zeros(self.original.creases().len());
        for d in &self.doubled {
            out[d.original] = dl_angles[d.left] + dl_angles[d.right];
        }
        out
    }
}

/// Per-vertex geometry: corner `i` sits at `r_i a_i + r_{i+1} b_i` from
/// the vertex.
struct Local {
    v: VertexId,
    star: VertexStar,
    u: Vec<V2>,
    side: Vec<V2>,
    a: Vec<V2>,
    b: Vec<V2>,
    lengths: Vec<f64>,
    /// Whether the vertex is the first end of each of its creases.
    first_end: BTreeMap<CreaseId, bool>,
    offset: usize,
}

impl Local {
    fn new(pattern: &CreasePattern, v: VertexId, theta: f64, offset: usize) -> Result<Self, PatternsError> {
        let star = vertex_star(pattern, v)?;
        if star.sectors().iter().any(|&s| s >= PI) {
            return Err(PatternsError::BadParams(format!("vertex {v} has a sector of at least pi")));
        }
        if !(theta > 0.0 && theta < PI) {
            return Err(PatternsError::BadParams(format!("theta = {theta} at vertex {v} outside (0, pi)")));
        }
        let p = pattern.vertices()[v];
        let n = star.degree();
        let u: Vec<V2> = star.creases().iter().map(|&e| (pattern.vertices()[pattern.other_end(e, v)] - p).normalize()).collect();
        let side: Vec<V2> = u.iter().map(|d| dir(azimuth(*d) + PI - theta)).collect();
        let lengths = star.creases().iter().map(|&e| pattern.crease_length(e)).collect();
        let o = P2::origin();
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for i in 0..n {
            let j = (i + 1) % n;
            let ai = line_intersection(P2::from(u[i]), side[i], o, side[j]).ok_or(DoubleLineError::DegeneratePolygon(i, j))?;
            let bi = line_intersection(o, side[i], P2::from(u[j]), side[j]).ok_or(DoubleLineError::DegeneratePolygon(i, j))?;
            a.push(ai.coords);
            b.push(bi.coords);
        }
        let first_end = star.creases().iter().map(|&e| (e, pattern.creases()[e].vertices[0] == v)).collect();
        Ok(Local { v, star, u, side, a, b, lengths, first_end, offset })
    }

    fn n(&self) -> usize {
        self.star.degree()
    }

    fn index(&self, e: CreaseId) -> usize {
        self.star.creases().iter().position(|&c| c == e).unwrap_or(usize::MAX)
    }

    /// Coefficients of corner `i` (relative to the vertex) in the radii.
    fn corner_terms(&self, i: usize) -> [(usize, V2); 2] {
        let n = self.n();
        let i = i % n;
        [(self.offset + i, self.a[i]), (self.offset + (i + 1) % n, self.b[i])]
    }

    fn corner(&self, r: &[f64], i: usize) -> V2 {
        self.corner_terms(i).iter().map(|&(k, c)| c * r[k]).sum()
    }
}

/// Builds the double-lined network for per-vertex `θ`. With `dl_modes`
/// the corner modes follow the named mode of each vertex; otherwise any
/// consistent motion of the new pattern is accepted.
pub fn double_line_network(
    original: &CreasePattern,
    thetas: &BTreeMap<VertexId, f64>,
    dl_modes: Option<&BTreeMap<VertexId, DLMode>>,
) -> Result<DlNetwork, PatternsError> {
    let interior = original.interior_vertices();
    if interior.is_empty() {
        return Err(PatternsError::BadParams("pattern has no interior vertex".into()));
    }
    let mut locals = Vec::with_capacity(interior.len());
    let mut slot = BTreeMap::new();
    let mut offset = 0;
    for &v in &interior {
        let theta = *thetas.get(&v).ok_or_else(|| PatternsError::BadParams(format!("no theta for vertex {v}")))?;
        let l = Local::new(original, v, theta, offset)?;
        offset += l.n();
        slot.insert(v, locals.len());
        locals.push(l);
    }

    // The offset and corner conditions are homogeneous in the radii, so
    // shrinking them uniformly pulls stray corners back into their faces.
    let mut radii = solve_radii(original, &locals, &slot, offset)?;
    let mut corners_abs: Vec<Vec<P2>> = Vec::new();
    for attempt in 0..=8 {
        let placed = locals
            .iter()
            .map(|l| {
                let p = original.vertices()[l.v];
                let cs: Vec<P2> = (0..l.n()).map(|i| p + l.corner(&radii, i)).collect();
                check_corners(original, l, &cs).map(|_| cs)
            })
            .collect::<Result<Vec<_>, _>>();
        match placed {
            Ok(cs) => {
                corners_abs = cs;
                break;
            }
            Err(PatternsError::RadiiInfeasible(_)) if attempt < 8 => radii.iter_mut().for_each(|r| *r *= 0.6),
            Err(e) => return Err(e),
        }
    }

    let scale = original.bounds().map_or(1.0, |(lo, hi)| (hi - lo).norm().max(1.0));
    let mut b = PatternBuilder::new(1e-9 * scale);
    let boundary: Vec<(P2, P2)> = original
        .creases()
        .iter()
        .filter(|c| c.assignment.is_boundary())
        .map(|c| (original.vertices()[c.vertices[0]], original.vertices()[c.vertices[1]]))
        .collect();
    for &(p, q) in &boundary {
        b.segment(p, q, Assignment::Boundary);
    }
    let corner_pts: Vec<Vec<usize>> = corners_abs.iter().map(|cs| cs.iter().map(|&c| b.point(c)).collect()).collect();
    let side_segs: Vec<Vec<usize>> = corner_pts
        .iter()
        .map(|pts| {
            let n = pts.len();
            (0..n).map(|i| b.segment_ids(pts[(i + n - 1) % n], pts[i], Assignment::Unassigned)).collect()
        })
        .collect();

    let mut line_segs = Vec::new();
    for (e, c) in original.creases().iter().enumerate() {
        if c.assignment.is_boundary() {
            continue;
        }
        let [v0, v1] = c.vertices;
        match (slot.get(&v0), slot.get(&v1)) {
            (Some(&s0), Some(&s1)) => {
                let (i, k) = (locals[s0].index(e), locals[s1].index(e));
                let (n0, n1) = (locals[s0].n(), locals[s1].n());
                let left = b.segment_ids(corner_pts[s0][i], corner_pts[s1][(k + n1 - 1) % n1], Assignment::Unassigned);
                let right = b.segment_ids(corner_pts[s0][(i + n0 - 1) % n0], corner_pts[s1][k], Assignment::Unassigned);
                line_segs.push((e, left, right));
            }
            (Some(&s), None) | (None, Some(&s)) => {
                let l = &locals[s];
                let i = l.index(e);
                let n = l.n();
                let from_left = corners_abs[s][i];
                let from_right = corners_abs[s][(i + n - 1) % n];
                let end_l = cast(from_left, l.u[i], &boundary)?;
                let end_r = cast(from_right, l.u[i], &boundary)?;
                let sl = b.segment(from_left, end_l, Assignment::Unassigned);
                let sr = b.segment(from_right, end_r, Assignment::Unassigned);
                // Left of the vertex-outward direction is left of v0 -> v1
                // only when the interior end is v0.
                line_segs.push(if l.v == v0 { (e, sl, sr) } else { (e, sr, sl) });
            }
            (None, None) => {
                b.segment(original.vertices()[v0], original.vertices()[v1], Assignment::Unassigned);
            }
        }
    }

    let built = b.build_with_map()?;
    let single = |s: usize| -> Result<CreaseId, PatternsError> {
        match built.segment_creases[s].as_slice() {
            [e] => Ok(*e),
            other => Err(PatternsError::BadParams(format!("a doubled line was split into {} creases", other.len()))),
        }
    };
    let doubled = line_segs
        .iter()
        .map(|&(e, l, r)| Ok(DoubledCrease { original: e, left: single(l)?, right: single(r)? }))
        .collect::<Result<Vec<_>, PatternsError>>()?;
    let mut corners = BTreeMap::new();
    for (l, pts) in locals.iter().zip(&corner_pts) {
        let ids = pts
            .iter()
            .map(|&p| built.point_vertex[p].ok_or_else(|| PatternsError::BadParams("corner vertex lost".into())))
            .collect::<Result<Vec<_>, _>>()?;
        corners.insert(l.v, ids);
    }
    let pattern = built.pattern;

    let modes = match dl_modes {
        Some(named) => {
            let sides = side_segs
                .iter()
                .map(|segs| segs.iter().map(|&sg| single(sg)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            named_motion(&pattern, &locals, named, thetas, &doubled, &sides, &corners)?
        }
        None => find_motion(&pattern)?,
    };
    let pattern = pattern.with_assignments_from(&angles_from_multipliers(&modes.multipliers, 1.0))?;

    Ok(DlNetwork {
        original: original.clone(),
        pattern,
        thetas: locals.iter().map(|l| (l.v, thetas[&l.v])).collect(),
        radii: locals.iter().map(|l| (l.v, radii[l.offset..l.offset + l.n()].to_vec())).collect(),
        corners,
        doubled,
        dl_modes: dl_modes.cloned(),
        modes,
    })
}

/// Motion in which every original vertex follows its named mode. Each
/// corner's mode is read off the single-vertex multipliers around it and
/// the global multipliers are then propagated, which checks that shared
/// lines agree.
fn named_motion(
    pattern: &CreasePattern,
    locals: &[Local],
    named: &BTreeMap<VertexId, DLMode>,
    thetas: &BTreeMap<VertexId, f64>,
    doubled: &[DoubledCrease],
    sides: &[Vec<CreaseId>],
    corners: &BTreeMap<VertexId, Vec<VertexId>>,
) -> Result<NetworkModes, PatternsError> {
    let by_original: BTreeMap<CreaseId, &DoubledCrease> = doubled.iter().map(|d| (d.original, d)).collect();
    let mut corner_modes = BTreeMap::new();
    for (s, l) in locals.iter().enumerate() {
        let mode = *named.get(&l.v).ok_or_else(|| PatternsError::BadParams(format!("no mode for vertex {}", l.v)))?;
        let m = star_mode_multipliers(&l.star, mode, thetas[&l.v])?;
        let n = l.n();
        let mut value: BTreeMap<CreaseId, f64> = BTreeMap::new();
        for (i, &e) in l.star.creases().iter().enumerate() {
            let d = by_original[&e];
            let (from_prev, from_here) = m.pairs[i];
            let outward = pattern_crease_starts_at(l, e);
            let (left, right) = if outward { (from_here, from_prev) } else { (from_prev, from_here) };
            value.insert(d.left, left);
            value.insert(d.right, right);
            value.insert(sides[s][i], m.sides[i]);
        }
        for i in 0..n {
            let c = corners[&l.v][i];
            let star = vertex_star(pattern, c)?;
            let want: Vec<f64> = star.creases().iter().map(|e| value.get(e).copied().unwrap_or(f64::NAN)).collect();
            let best = [FoldMode::A, FoldMode::B]
                .into_iter()
                .filter_map(|fm| mode_vector(&star, fm).ok().map(|mv| (fm, proportionality_error(&mv.m, &want))))
                .min_by(|x, y| x.1.total_cmp(&y.1));
            match best {
                Some((fm, err)) if err < 1e-6 => {
                    corner_modes.insert(c, fm);
                }
                _ => return Err(KinematicsError::BadVertex(c).into()),
            }
        }
    }
    propagate_multipliers(pattern, &corner_modes).map_err(|e| explain(pattern, e))
}

fn pattern_crease_starts_at(l: &Local, e: CreaseId) -> bool {
    l.first_end.get(&e).copied().unwrap_or(false)
}

/// Relative distance of `b` from the line spanned by `a`.
fn proportionality_error(a: &[f64], b: &[f64]) -> f64 {
    if b.iter().any(|x| !x.is_finite()) {
        return f64::INFINITY;
    }
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let bb: f64 = b.iter().map(|x| x * x).sum();
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    if aa == 0.0 || bb == 0.0 {
        return f64::INFINITY;
    }
    (1.0 - ab * ab / (aa * bb)).max(0.0).sqrt()
}

fn find_motion(pattern: &CreasePattern) -> Result<NetworkModes, PatternsError> {
    match find_mode_assignment(pattern, &ModeSearch::default()) {
        Ok(m) => Ok(m),
        Err(KinematicsError::NoAssignment) => {
            let search = ModeSearch { allow_degenerate: true, ..ModeSearch::default() };
            find_mode_assignment(pattern, &search).map_err(|e| explain(pattern, e))
        }
        Err(e) => Err(e.into()),
    }
}

/// Turns a failed search into the first face whose loop product misses 1
/// for every local mode choice, when there is one.
fn explain(pattern: &CreasePattern, err: KinematicsError) -> PatternsError {
    if err != KinematicsError::NoAssignment {
        return err.into();
    }
    for (f, face) in pattern.faces().iter().enumerate() {
        let k = face.len();
        if !face.iter().all(|v| pattern.is_interior(*v)) || k > 12 {
            continue;
        }
        let mut local = Vec::with_capacity(k);
        for i in 0..k {
            let v = face[i];
            let (Some(e_in), Some(e_out)) =
                (pattern.crease_between(face[(i + k - 1) % k], v), pattern.crease_between(v, face[(i + 1) % k]))
            else {
                return err.into();
            };
            let Ok(star) = vertex_star(pattern, v) else { return err.into() };
            let pos = |e: CreaseId| star.creases().iter().position(|&c| c == e);
            let (Some(a), Some(b)) = (pos(e_in), pos(e_out)) else { return err.into() };
            let ratios: Vec<f64> = [FoldMode::A, FoldMode::B]
                .iter()
                .filter_map(|&m| mode_vector(&star, m).ok())
                .filter(|mv| mv.m[a] != 0.0)
                .map(|mv| mv.m[b] / mv.m[a])
                .collect();
            local.push(ratios);
        }
        let mut best = f64::NAN;
        let mut closes = false;
        let total: usize = local.iter().map(|r| r.len()).product();
        for idx in 0..total {
            let mut rest = idx;
            let mut prod = 1.0;
            for r in &local {
                prod *= r[rest % r.len()];
                rest /= r.len();
            }
            if (prod - 1.0).abs() < 1e-9 {
                closes = true;
                break;
            }
            if best.is_nan() || (prod - 1.0).abs() < (best - 1.0).abs() {
                best = prod;
            }
        }
        if !closes && total > 0 {
            return PatternsError::LoopProduct { face: f, product: best };
        }
    }
    err.into()
}

/// Radii with every shared crease lined up, as close to a quarter of each
/// crease length as the constraints allow. Alternates projections onto
/// the constraint nullspace and the box `[lo, hi]`.
fn solve_radii(
    pattern: &CreasePattern,
    locals: &[Local],
    slot: &BTreeMap<VertexId, usize>,
    unknowns: usize,
) -> Result<Vec<f64>, PatternsError> {
    let mut rows: Vec<DVector<f64>> = Vec::new();
    for (e, c) in pattern.creases().iter().enumerate() {
        let (Some(&s0), Some(&s1)) = (slot.get(&c.vertices[0]), slot.get(&c.vertices[1])) else { continue };
        if c.assignment.is_boundary() {
            continue;
        }
        let (l0, l1) = (&locals[s0], &locals[s1]);
        let (i, k) = (l0.index(e), l1.index(e));
        let normal = left_normal(l0.u[i]);
        for (ci, ck) in [(i, k + l1.n() - 1), (i + l0.n() - 1, k)] {
            let mut row = DVector::zeros(unknowns);
            for (idx, v) in l0.corner_terms(ci) {
                row[idx] += v.dot(&normal);
            }
            for (idx, v) in l1.corner_terms(ck) {
                row[idx] -= v.dot(&normal);
            }
            rows.push(row);
        }
    }

    let mut hi = DVector::zeros(unknowns);
    for l in locals {
        for i in 0..l.n() {
            hi[l.offset + i] = 0.4 * l.lengths[i];
        }
    }
    let lo = hi.map(|h| 0.1 * h);

    // Corner validity, linear in the radii: corner i strictly inside
    // sector i and the sides in order around the polygon.
    let mut ineq: Vec<(DVector<f64>, f64)> = Vec::new();
    for l in locals {
        let n = l.n();
        let typical = 0.24 * l.lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        for i in 0..n {
            let j = (i + 1) % n;
            let mut g: [DVector<f64>; 3] = std::array::from_fn(|_| DVector::zeros(unknowns));
            for (idx, c) in l.corner_terms(i) {
                g[0][idx] += l.u[i].perp(&c);
                g[1][idx] -= l.u[j].perp(&c);
                g[2][idx] += c.dot(&l.side[i]);
            }
            for (idx, c) in l.corner_terms(i + n - 1) {
                g[2][idx] -= c.dot(&l.side[i]);
            }
            for gk in g {
                let norm = gk.norm();
                if norm > 0.0 {
                    ineq.push((gk / norm, 0.05 * typical));
                }
            }
        }
    }

    let proj = if rows.is_empty() {
        DMatrix::identity(unknowns, unknowns)
    } else {
        let a = DMatrix::from_fn(rows.len(), unknowns, |i, j| rows[i][j]);
        let pinv = a.clone().pseudo_inverse(1e-12).map_err(|e| PatternsError::RadiiInfeasible(e.to_string()))?;
        DMatrix::identity(unknowns, unknowns) - pinv * a
    };
    let mut x = hi.map(|h| 0.6 * h);
    let fits = |x: &DVector<f64>| {
        (0..unknowns).all(|k| x[k] >= 0.5 * lo[k] && x[k] <= 1.1 * hi[k]) && ineq.iter().all(|(g, b)| g.dot(x) >= 0.5 * b)
    };
    for _ in 0..5000 {
        x = &proj * &x;
        if fits(&x) {
            return Ok(x.iter().copied().collect());
        }
        for (g, b) in &ineq {
            let gap = b - g.dot(&x);
            if gap > 0.0 {
                x.axpy(gap, g, 1.0);
            }
        }
        for k in 0..unknowns {
            x[k] = x[k].clamp(lo[k], hi[k]);
        }
    }
    max_margin_radii(&rows, &hi, &ineq)
}

/// Fallback when the projections stall: the radii with the widest corner
/// margin, by linear programming. Radii may shrink to 1% of their cap.
fn max_margin_radii(rows: &[DVector<f64>], hi: &DVector<f64>, ineq: &[(DVector<f64>, f64)]) -> Result<Vec<f64>, PatternsError> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let x: Vec<_> = hi.iter().map(|&h| lp.add_var(0.0, (0.01 * h, h))).collect();
    let s = lp.add_var(1.0, (f64::NEG_INFINITY, 1.0));
    let expr = |coeffs: &DVector<f64>| -> Vec<(Variable, f64)> {
        coeffs.iter().zip(&x).filter(|(c, _)| **c != 0.0).map(|(c, v)| (*v, *c)).collect()
    };
    for row in rows {
        lp.add_constraint(expr(row).as_slice(), ComparisonOp::Eq, 0.0);
    }
    for (g, b) in ineq {
        let mut e = expr(g);
        e.push((s, -b));
        lp.add_constraint(e.as_slice(), ComparisonOp::Ge, 0.0);
    }
    let infeasible = |why: &str| PatternsError::RadiiInfeasible(format!("no radii satisfy the offset and corner conditions ({why})"));
    let sol = match lp.solve() {
        Ok(out) => out.into_solution().map_err(|_| infeasible("solver interrupted"))?,
        Err(MlpError::Infeasible) => return Err(infeasible("infeasible")),
        Err(e) => return Err(infeasible(&e.to_string())),
    };
    let margin = sol.var_value(s);
    if margin <= 1e-6 {
        return Err(infeasible(&format!("best corner margin {margin:.3e}")));
    }
    Ok(x.iter().map(|&v| sol.var_value(v)).collect())
}

fn check_corners(pattern: &CreasePattern, l: &Local, corners: &[P2]) -> Result<(), PatternsError> {
    let n = l.n();
    let p = pattern.vertices()[l.v];
    let scale = l.lengths.iter().cloned().fold(0.0, f64::max);
    for i in 0..n {
        let j = (i + 1) % n;
        let c = corners[i] - p;
        if l.u[i].perp(&c) <= 1e-12 * scale || l.u[j].perp(&c) >= -1e-12 * scale {
            return Err(DoubleLineError::CornerInversion(i).into());
        }
        if (corners[i] - corners[(i + n - 1) % n]).dot(&l.side[i]) <= 1e-12 * scale {
            return Err(DoubleLineError::CornerInversion(i).into());
        }
        let probe = p + (l.u[i] + l.u[j]).normalize() * (1e-6 * scale);
        if pattern.face_at(corners[i]) != pattern.face_at(probe) {
            return Err(PatternsError::RadiiInfeasible(format!("corner {i} of vertex {} leaves its face", l.v)));
        }
    }
    if polygon_area(corners) <= 0.0 {
        return Err(DoubleLineError::CornerInversion(0).into());
    }
    Ok(())
}

fn cast(p: P2, d: V2, boundary: &[(P2, P2)]) -> Result<P2, PatternsError> {
    boundary
        .iter()
        .filter_map(|&(a, b)| ray_segment(p, d, a, b, 1e-12))
        .filter(|&s| s > 0.0)
        .min_by(|a, b| a.total_cmp(b))
        .map(|s| p + d * s)
        .ok_or_else(|| PatternsError::BadParams("a doubled line misses the boundary".into()))
}

/// Largest step of `θ_root` tried when a child cannot match its parent.
const ROOT_NUDGES: i32 = 10;

/// Double lines a tree of degree-4 vertices. The root (lowest vertex id)
/// gets `theta_root`; every other vertex gets the `θ` at which its
/// double-line ratio on the crease to its parent matches the parent's.
/// When some ratio is out of reach `θ_root` is nudged by multiples of
/// 0.5°.
pub fn connect_tree_dl(network: &VertexNetwork, theta_root: f64) -> Result<DlNetwork, PatternsError> {
    let pattern = &network.pattern;
    let interior = pattern.interior_vertices();
    let root = *interior.first().ok_or_else(|| PatternsError::BadParams("pattern has no interior vertex".into()))?;
    let tree = spanning_tree(pattern, &interior, root)?;

    let mut last = PatternsError::Unreachable(root);
    for k in 0..=2 * ROOT_NUDGES {
        let step = if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) };
        let theta = theta_root + (step as f64 * 0.5).to_radians();
        if !(theta > 0.0 && theta < PI) {
            continue;
        }
        match assign_thetas(network, &tree, root, theta) {
            Ok((thetas, modes)) => match double_line_network(pattern, &thetas, Some(&modes)) {
                Ok(net) => return Ok(net),
                Err(e) => last = e,
            },
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Breadth-first `(parent, child, shared crease)` triples.
fn spanning_tree(pattern: &CreasePattern, interior: &[VertexId], root: VertexId) -> Result<Vec<(VertexId, VertexId, CreaseId)>, PatternsError> {
    let mut adj: BTreeMap<VertexId, Vec<(VertexId, CreaseId)>> = interior.iter().map(|&v| (v, Vec::new())).collect();
    let mut edges = 0;
    for (e, c) in pattern.creases().iter().enumerate() {
        let [a, b] = c.vertices;
        if !c.assignment.is_boundary() && pattern.is_interior(a) && pattern.is_interior(b) {
            adj.entry(a).or_default().push((b, e));
            adj.entry(b).or_default().push((a, e));
            edges += 1;
        }
    }
    if edges + 1 != interior.len() {
        return Err(PatternsError::NotTree(format!("{} vertices joined by {edges} creases", interior.len())));
    }
    let mut seen = BTreeMap::from([(root, ())]);
    let mut queue = VecDeque::from([root]);
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[&v] {
            if seen.insert(w, ()).is_none() {
                out.push((v, w, e));
                queue.push_back(w);
            }
        }
    }
    if out.len() + 1 != interior.len() {
        return Err(PatternsError::NotTree("vertex graph is disconnected".into()));
    }
    Ok(out)
}

fn family_modes(mode: FoldMode) -> [DLMode; 2] {
    match mode {
        FoldMode::A => [DLMode::AI, DLMode::AII],
        FoldMode::B => [DLMode::BI, DLMode::BII],
    }
}

#[allow(clippy::type_complexity)]
fn assign_thetas(
    network: &VertexNetwork,
    tree: &[(VertexId, VertexId, CreaseId)],
    root: VertexId,
    theta_root: f64,
) -> Result<(BTreeMap<VertexId, f64>, BTreeMap<VertexId, DLMode>), PatternsError> {
    let pattern = &network.pattern;
    let family = |v: VertexId| network.modes.modes.get(&v).copied().ok_or(PatternsError::Unreachable(v));
    let mut last = PatternsError::Unreachable(root);
    'root: for root_mode in family_modes(family(root)?) {
        let mut thetas = BTreeMap::from([(root, theta_root)]);
        let mut modes = BTreeMap::from([(root, root_mode)]);
        for &(parent, child, e) in tree {
            let pstar = vertex_star(pattern, parent)?;
            let m = match star_mode_multipliers(&pstar, modes[&parent], thetas[&parent]) {
                Ok(m) => m,
                Err(err) => {
                    last = err.into();
                    continue 'root;
                }
            };
            let i = pstar.creases().iter().position(|&c| c == e).unwrap_or(0);
            // The parent's left line is the child's right line.
            let target = DoubleLineRatio::new(m.pairs[i].1, m.pairs[i].0);
            let cstar = vertex_star(pattern, child)?;
            let k = cstar.creases().iter().position(|&c| c == e).unwrap_or(0);
            let found = family_modes(family(child)?).into_iter().find_map(|mode| {
                let ratio = |theta: f64| {
                    let m = star_mode_multipliers(&cstar, mode, theta).ok()?;
                    Some(DoubleLineRatio::new(m.pairs[k].0, m.pairs[k].1))
                };
                crate::double_line::solve_theta(ratio, target).ok().map(|t| (t, mode))
            });
            match found {
                Some((theta, mode)) => {
                    thetas.insert(child, theta);
                    modes.insert(child, mode);
                }
                None => {
                    last = PatternsError::Unreachable(child);
                    continue 'root;
                }
            }
        }
        return Ok((thetas, modes));
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fold3d::{sweep_motion, vertex_closure_residual};
    use crate::patterns::{gen_dl_miura, gen_miura, gen_single_deg4};

    fn check_corresponding(net: &DlNetwork) {
        let ts: Vec<f64> = (1..=20).map(|k| 0.15 * k as f64).collect();
        for s in sweep_motion(&net.pattern, &net.modes, &ts).unwrap() {
            assert!(s.residual < 1e-9, "residual {}", s.residual);
            let orig = net.corresponding_angles(&s.angles);
            for v in net.original.interior_vertices() {
                let star = vertex_star(&net.original, v).unwrap();
                let a: Vec<f64> = star.creases().iter().map(|&e| orig[e]).collect();
                assert!(vertex_closure_residual(&star, &a) < 1e-9);
            }
        }
    }

    #[test]
    fn single_vertex_tree_keeps_root_theta() {
        let net = gen_single_deg4(50f64.to_radians(), 70f64.to_radians()).unwrap();
        let dl = connect_tree_dl(&net, 1.2).unwrap();
        assert_eq!(dl.thetas.len(), 1);
        assert!((dl.thetas.values().next().unwrap() - 1.2).abs() < 1e-12);
        check_corresponding(&dl);
    }

    #[test]
    fn chain_ratios_match() {
        let net = gen_miura(2, 4, 60f64.to_radians()).unwrap();
        let dl = connect_tree_dl(&net, 90f64.to_radians()).unwrap();
        assert_eq!(dl.thetas.len(), 3);
        let modes = dl.dl_modes.as_ref().unwrap();
        for c in net.pattern.creases().iter().enumerate().filter(|(_, c)| {
            !c.assignment.is_boundary() && net.pattern.is_interior(c.vertices[0]) && net.pattern.is_interior(c.vertices[1])
        }) {
            let (e, c) = c;
            let ratio = |v: VertexId, swap: bool| {
                let star = vertex_star(&net.pattern, v).unwrap();
                let m = star_mode_multipliers(&star, modes[&v], dl.thetas[&v]).unwrap();
                let i = star.creases().iter().position(|&x| x == e).unwrap();
                let (r, l) = m.pairs[i];
                if swap {
                    DoubleLineRatio::new(l, r)
                } else {
                    DoubleLineRatio::new(r, l)
                }
            };
            assert!(ratio(c.vertices[0], true).distance(&ratio(c.vertices[1], false)) < 1e-9);
        }
        check_corresponding(&dl);
    }

    #[test]
    fn cycle_is_not_a_tree() {
        let net = gen_miura(3, 3, 60f64.to_radians()).unwrap();
        assert!(matches!(connect_tree_dl(&net, 1.0), Err(PatternsError::NotTree(_))));
    }

    #[test]
    fn dl_miura_moves() {
        let dl = gen_dl_miura(3, 3, 60f64.to_radians(), 90f64.to_radians()).unwrap();
        assert_eq!(dl.corners.len(), 4);
        assert_eq!(dl.doubled.len(), 12);
        check_corresponding(&dl);
    }

    #[test]
    fn narrow_margin_radii_come_from_the_lp() {
        // The projections stall here; the max-margin fallback finds radii.
        let dl = gen_dl_miura(3, 3, 56f64.to_radians(), 90f64.to_radians()).unwrap();
        check_corresponding(&dl);
        let err = gen_dl_miura(3, 3, 45f64.to_radians(), 90f64.to_radians()).unwrap_err();
        assert!(matches!(err, PatternsError::RadiiInfeasible(_)), "{err:?}");
    }

    #[test]
    fn dl_yoshimura_moves() {
        let dl = crate::patterns::gen_dl_yoshimura(2, 4, 1.5, 90f64.to_radians()).unwrap();
        assert_eq!(dl.corners.len(), 8);
        check_corresponding(&dl);
    }

    #[test]
    fn perturbed_miura_rejected() {
        let base = crate::patterns::miura_pattern(3, 3, 60f64.to_radians()).unwrap();
        let v = base.interior_vertices()[0];
        let mut verts = base.vertices().to_vec();
        verts[v] += V2::new(0.03, 0.02);
        let bent = CreasePattern::new(verts, base.creases().to_vec()).unwrap();
        let thetas = bent.interior_vertices().into_iter().map(|v| (v, 90f64.to_radians())).collect();
        let err = double_line_network(&bent, &thetas, None).unwrap_err();
        assert!(matches!(err, PatternsError::LoopProduct { .. }), "{err:?}");
    }
}
