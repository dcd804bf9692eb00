//! Pattern generators: single vertices, Miura-ori and elongated Yoshimura
//! tessellations, and their double-lined versions.

mod network_dl;

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

pub use network_dl::{connect_tree_dl, double_line_network, DlNetwork, DoubledCrease};

use crate::crease_pattern::{Assignment, CreasePattern, FaceId, PatternBuilder, PatternError, VertexStar};
use crate::double_line::DoubleLineError;
use crate::geom::{dir, P2};
use crate::kinematics::{angles_from_multipliers, find_mode_assignment, KinematicsError, ModeSearch, NetworkModes};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PatternsError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("vertex graph is not a tree: {0}")]
    NotTree(String),
    #[error("no theta realizes the double-line ratio required at vertex {0}")]
    Unreachable(usize),
    #[error("no positive radii line up the doubled creases: {0}")]
    RadiiInfeasible(String),
    #[error("face {face}: loop product {product} != 1 for every mode choice of its corners")]
    LoopProduct { face: FaceId, product: f64 },
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    DoubleLine(#[from] DoubleLineError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// A network of degree-4 vertices with a consistent rigid-folding motion.
#[derive(Clone, Debug)]
pub struct VertexNetwork {
    pub pattern: CreasePattern,
    pub modes: NetworkModes,
}

impl VertexNetwork {
    /// Labels creases by the sign of their multipliers and finds a motion.
    pub fn new(pattern: CreasePattern) -> Result<Self, PatternsError> {
        let search = ModeSearch { allow_degenerate: true, ..ModeSearch::default() };
        let modes = find_mode_assignment(&pattern, &search)?;
        let pattern = pattern.with_assignments_from(&angles_from_multipliers(&modes.multipliers, 1.0))?;
        Ok(VertexNetwork { pattern, modes })
    }
}

/// Motion of a loaded pattern: one matching its M/V labels if possible,
/// then any consistent one, non-degenerate modes first.
pub fn motion_of(pattern: &CreasePattern) -> Result<NetworkModes, PatternsError> {
    let mut first = None;
    for (respect_labels, allow_degenerate) in [(true, false), (true, true), (false, false), (false, true)] {
        let search = ModeSearch { respect_labels, allow_degenerate, ..ModeSearch::default() };
        match find_mode_assignment(pattern, &search) {
            Ok(m) => return Ok(m),
            Err(e) => {
                first.get_or_insert(e);
            }
        }
    }
    Err(first.expect("at least one search ran").into())
}

/// A single interior vertex with unit creases, closed by chords between
/// their endpoints. Every sector must be below π.
pub fn star_pattern(star: &VertexStar) -> Result<CreasePattern, PatternsError> {
    if !star.is_interior() || star.sectors().iter().any(|&s| s >= PI) {
        return Err(PatternsError::BadParams("star needs an interior vertex with every sector below pi".into()));
    }
    let ends: Vec<P2> = star.azimuths().iter().map(|&a| P2::from(dir(a))).collect();
    let mut b = PatternBuilder::new(1e-9);
    for &e in &ends {
        b.segment(P2::origin(), e, Assignment::Unassigned);
    }
    for i in 0..ends.len() {
        b.segment(ends[i], ends[(i + 1) % ends.len()], Assignment::Boundary);
    }
    Ok(b.build()?)
}

/// Flat-foldable degree-4 vertex with sectors `(α, β, π−α, π−β)`.
pub fn gen_single_deg4(alpha: f64, beta: f64) -> Result<VertexNetwork, PatternsError> {
    if !(alpha > 0.0 && alpha < PI && beta > 0.0 && beta < PI) {
        return Err(PatternsError::BadParams(format!("sector angles {alpha}, {beta} outside (0, pi)")));
    }
    let star = VertexStar::from_sectors(vec![alpha, beta, PI - alpha, PI - beta])?;
    VertexNetwork::new(star_pattern(&star)?)
}

/// Degree-2n vertex with all sectors `π/n`.
pub fn gen_symmetric_vertex(n: usize) -> Result<CreasePattern, PatternsError> {
    if n < 2 {
        return Err(PatternsError::BadParams(format!("n = {n}, need at least 2")));
    }
    star_pattern(&VertexStar::from_sectors(vec![PI / n as f64; 2 * n])?)
}

/// Miura-ori with `rows × cols` parallelogram cells of unit width and
/// height. Vertex `(j, i)` sits at `(j, i + (j mod 2)·cot α)`, so every
/// interior vertex has sectors `α, π−α`.
pub fn gen_miura(rows: usize, cols: usize, alpha: f64) -> Result<VertexNetwork, PatternsError> {
    VertexNetwork::new(miura_pattern(rows, cols, alpha)?)
}

pub(crate) fn miura_pattern(rows: usize, cols: usize, alpha: f64) -> Result<CreasePattern, PatternsError> {
    if rows == 0 || cols == 0 {
        return Err(PatternsError::BadParams("rows and cols must be positive".into()));
    }
    if !(alpha > 0.0 && alpha <= FRAC_PI_2) {
        return Err(PatternsError::BadParams(format!("alpha = {alpha} outside (0, pi/2]")));
    }
    let shift = (FRAC_PI_2 - alpha).tan();
    let at = |j: usize, i: usize| P2::new(j as f64, i as f64 + (j % 2) as f64 * shift);
    let mut b = PatternBuilder::new(1e-9);
    for j in 0..=cols {
        for i in 0..rows {
            let a = if j == 0 || j == cols { Assignment::Boundary } else { Assignment::Unassigned };
            b.segment(at(j, i), at(j, i + 1), a);
        }
    }
    for i in 0..=rows {
        for j in 0..cols {
            let a = if i == 0 || i == rows { Assignment::Boundary } else { Assignment::Unassigned };
            b.segment(at(j, i), at(j + 1, i), a);
        }
    }
    Ok(b.build()?)
}

/// Elongated Yoshimura pattern: rows of trapezoids between horizontal
/// lines. Each vertex of the triangulated Yoshimura is split into two
/// degree-4 vertices joined by a horizontal crease of length
/// `1 / elongation` (cell width 1), so `elongation > 1`.
pub fn gen_yoshimura(rows: usize, cols: usize, elongation: f64) -> Result<VertexNetwork, PatternsError> {
    VertexNetwork::new(yoshimura_pattern(rows, cols, elongation)?)
}

pub(crate) fn yoshimura_pattern(rows: usize, cols: usize, elongation: f64) -> Result<CreasePattern, PatternsError> {
    if rows == 0 || cols == 0 {
        return Err(PatternsError::BadParams("rows and cols must be positive".into()));
    }
    if !(elongation > 1.0 && elongation.is_finite()) {
        return Err(PatternsError::BadParams(format!("elongation = {elongation}, need > 1")));
    }
    let e = 1.0 / elongation;
    let h = 0.75f64.sqrt();
    let (x_min, x_max) = (-0.5 * e, cols as f64 + 0.5 * e);
    let centers = |i: usize| -> Vec<f64> {
        if i.is_multiple_of(2) {
            (0..=cols).map(|j| j as f64).collect()
        } else {
            (0..cols).map(|j| j as f64 + 0.5).collect()
        }
    };

    let mut b = PatternBuilder::new(1e-9);
    for i in 0..=rows {
        let y = i as f64 * h;
        let mut xs = vec![x_min];
        for c in centers(i) {
            xs.push(c - 0.5 * e);
            xs.push(c + 0.5 * e);
        }
        xs.push(x_max);
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let a = if i == 0 || i == rows { Assignment::Boundary } else { Assignment::Unassigned };
        for w in xs.windows(2) {
            b.segment(P2::new(w[0], y), P2::new(w[1], y), a);
        }
        if i < rows {
            b.segment(P2::new(x_min, y), P2::new(x_min, y + h), Assignment::Boundary);
            b.segment(P2::new(x_max, y), P2::new(x_max, y + h), Assignment::Boundary);
            for bc in centers(i) {
                for tc in centers(i + 1) {
                    if ((bc - tc).abs() - 0.5).abs() > 1e-12 {
                        continue;
                    }
                    let s = (tc - bc).signum();
                    b.segment(P2::new(bc + s * 0.5 * e, y), P2::new(tc - s * 0.5 * e, y + h), Assignment::Unassigned);
                }
            }
        }
    }
    Ok(b.build()?)
}

/// Double-lined Miura-ori with the same `θ` at every vertex.
pub fn gen_dl_miura(rows: usize, cols: usize, alpha: f64, theta: f64) -> Result<DlNetwork, PatternsError> {
    let pattern = miura_pattern(rows, cols, alpha)?;
    uniform_dl(&pattern, theta)
}

/// Double-lined elongated Yoshimura with the same `θ` at every vertex.
pub fn gen_dl_yoshimura(rows: usize, cols: usize, elongation: f64, theta: f64) -> Result<DlNetwork, PatternsError> {
    let pattern = yoshimura_pattern(rows, cols, elongation)?;
    uniform_dl(&pattern, theta)
}

fn uniform_dl(pattern: &CreasePattern, theta: f64) -> Result<DlNetwork, PatternsError> {
    let thetas = pattern.interior_vertices().into_iter().map(|v| (v, theta)).collect();
    double_line_network(pattern, &thetas, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crease_pattern::{is_flat_foldable_deg4, vertex_star};

    #[test]
    fn miura_vertex_counts() {
        let m = gen_miura(2, 2, 60f64.to_radians()).unwrap();
        assert_eq!(m.pattern.interior_vertices().len(), 1);
        let m = gen_miura(3, 3, 60f64.to_radians()).unwrap();
        assert_eq!(m.pattern.interior_vertices().len(), 4);
        for v in m.pattern.interior_vertices() {
            let star = vertex_star(&m.pattern, v).unwrap();
            assert!(is_flat_foldable_deg4(&star).unwrap());
            let mut s: Vec<f64> = star.sectors().iter().map(|x| x.to_degrees()).collect();
            s.sort_by(f64::total_cmp);
            assert!((s[0] - 60.0).abs() < 1e-9 && (s[3] - 120.0).abs() < 1e-9);
        }
        assert!(gen_miura(0, 2, 1.0).is_err());
        assert!(gen_miura(2, 2, 2.0).is_err());
    }

    #[test]
    fn yoshimura_vertices_are_flat_foldable() {
        let y = gen_yoshimura(2, 4, 1.5).unwrap();
        let interior = y.pattern.interior_vertices();
        assert_eq!(interior.len(), 8);
        for v in interior {
            let star = vertex_star(&y.pattern, v).unwrap();
            assert_eq!(star.degree(), 4);
            assert!(is_flat_foldable_deg4(&star).unwrap());
        }
        assert!(gen_yoshimura(2, 4, 1.0).is_err());
    }

    #[test]
    fn single_vertex_and_symmetric_vertex() {
        let v = gen_single_deg4(50f64.to_radians(), 70f64.to_radians()).unwrap();
        assert_eq!(v.pattern.interior_vertices().len(), 1);
        assert_eq!(v.modes.modes.len(), 1);
        let s = gen_symmetric_vertex(3).unwrap();
        assert_eq!(vertex_star(&s, 0).unwrap().degree(), 6);
        assert!(gen_symmetric_vertex(1).is_err());
    }
}
