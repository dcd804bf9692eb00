//! Closed-form kinematics of flat-foldable degree-4 vertices.
//!
//! Along a rigid folding motion the tangents of the half fold angles stay
//! proportional: `tan(ρ_i / 2) = m_i · t` for a fixed multiplier vector `m`
//! and a motion parameter `t`. A flat-foldable degree-4 vertex has two such
//! vectors, modes `a` and `b`.

mod network;

pub use network::{
    face_products, find_mode_assignment, propagate_multipliers, ModeSearch, NetworkModes,
};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::crease_pattern::{
    is_flat_foldable_deg4, CreaseId, FaceId, FoldAngleVector, PatternError, VertexId, VertexStar, ANGLE_TOL,
};

/// Multipliers smaller than this are treated as exactly zero.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("tangent pole: half angle {0} rad is a multiple of pi/2")]
    Pole(f64),
    #[error("zero denominator in q({0}, {1})")]
    ZeroDenominator(f64, f64),
    #[error("vertex is not flat-foldable")]
    NotFlatFoldable,
    #[error("mode {mode} has a zero multiplier on crease {index}")]
    Degenerate { mode: FoldMode, index: usize },
    #[error("empty coefficient sequence")]
    EmptyProduct,
    #[error("vertex {0} is not a flat-foldable degree-4 vertex")]
    BadVertex(VertexId),
    #[error("face {face}: speed coefficient product {product} != 1")]
    FaceProduct { face: FaceId, product: f64 },
    #[error("crease {0}: multipliers from its two vertices disagree")]
    Conflict(CreaseId),
    #[error("no consistent mode assignment exists")]
    NoAssignment,
    #[error("mode search gave up after {0} nodes")]
    SearchLimit(usize),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoldMode {
    A,
    B,
}

impl fmt::Display for FoldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FoldMode::A => "a",
            FoldMode::B => "b",
        })
    }
}

impl FromStr for FoldMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "a" | "A" => Ok(FoldMode::A),
            "b" | "B" => Ok(FoldMode::B),
            _ => Err(format!("unknown fold mode {s:?}, expected a or b")),
        }
    }
}

/// Tangent-half-angle multipliers of one vertex mode, in star order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeVector {
    pub m: [f64; 4],
    /// Set when some multiplier is zero, i.e. a crease never folds.
    pub degenerate: bool,
}

impl ModeVector {
    /// Snaps multipliers below [`DEGENERATE_TOL`] to exactly zero.
    pub fn new(mut m: [f64; 4]) -> Self {
        let mut degenerate = false;
        for x in &mut m {
            if x.abs() < DEGENERATE_TOL {
                *x = 0.0;
                degenerate = true;
            }
        }
        ModeVector { m, degenerate }
    }
}

/// Constant ratio `tan(ρ_{i+1}/2) / tan(ρ_i/2)` between two creases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpeedCoefficient(pub f64);

fn half_tan(x: f64) -> Result<f64, KinematicsError> {
    let h = x / 2.0;
    if h.cos().abs() < 1e-15 {
        return Err(KinematicsError::Pole(h));
    }
    Ok(h.tan())
}

/// `p(α, β) = (1 − tan(α/2) tan(β/2)) / (1 + tan(α/2) tan(β/2))`.
pub fn p_coeff(alpha: f64, beta: f64) -> Result<f64, KinematicsError> {
    let (ta, tb) = (half_tan(alpha)?, half_tan(beta)?);
    let den = 1.0 + ta * tb;
    if den == 0.0 {
        return Err(KinematicsError::ZeroDenominator(alpha, beta));
    }
    Ok((1.0 - ta * tb) / den)
}

/// `q(α, β) = (−tan(α/2) + tan(β/2)) / (tan(α/2) + tan(β/2))`.
pub fn q_coeff(alpha: f64, beta: f64) -> Result<f64, KinematicsError> {
    let (ta, tb) = (half_tan(alpha)?, half_tan(beta)?);
    let den = ta + tb;
    if den == 0.0 {
        return Err(KinematicsError::ZeroDenominator(alpha, beta));
    }
    Ok((tb - ta) / den)
}

/// Index `k` of the star crease playing the role of `e_0`: sectors `k` and
/// `k + 1` are `α` and `β` with `α + β ≤ π`, so `e_1` lies between them.
/// A strict inequality is preferred so that labels survive relisting the star.
pub(crate) fn canonical_offset(star: &VertexStar) -> usize {
    let s = star.sectors();
    let sum = |k: usize| s[k] + s[(k + 1) % 4];
    (0..4)
        .find(|&k| sum(k) < PI - ANGLE_TOL)
        .or_else(|| (0..4).find(|&k| sum(k) <= PI + ANGLE_TOL))
        .unwrap_or(0)
}

/// Multipliers of `mode` at a flat-foldable degree-4 vertex, in star order.
///
/// In the frame where `e_1` sits between the sectors `α, β` (`α + β ≤ π`),
/// mode a is `(1, −p, 1, p)` and mode b is `(−q, 1, q, 1)` with
/// `p = p(α, β)`, `q = q(α, β)`.
pub fn mode_vector(star: &VertexStar, mode: FoldMode) -> Result<ModeVector, KinematicsError> {
    if !is_flat_foldable_deg4(star)? {
        return Err(KinematicsError::NotFlatFoldable);
    }
    let k = canonical_offset(star);
    let s = star.sectors();
    let (alpha, beta) = (s[k], s[(k + 1) % 4]);
    let canon = match mode {
        FoldMode::A => {
            let p = p_coeff(alpha, beta)?;
            [1.0, -p, 1.0, p]
        }
        FoldMode::B => {
            let q = q_coeff(alpha, beta)?;
            [-q, 1.0, q, 1.0]
        }
    };
    if canon.iter().any(|x| !x.is_finite()) {
        return Err(KinematicsError::Degenerate { mode, index: 0 });
    }
    let mut m = [0.0; 4];
    for (j, v) in canon.iter().enumerate() {
        m[(k + j) % 4] = *v;
    }
    Ok(ModeVector::new(m))
}

/// Fold angles `ρ_i = 2 atan(m_i t)`; `t = ±∞` gives the flat-folded state.
pub fn fold_angles_at(star: &VertexStar, mode: FoldMode, t: f64) -> Result<FoldAngleVector, KinematicsError> {
    let mv = mode_vector(star, mode)?;
    Ok(angles_from_multipliers(&mv.m, t))
}

pub fn angles_from_multipliers(m: &[f64], t: f64) -> FoldAngleVector {
    FoldAngleVector(m.iter().map(|&mi| if mi == 0.0 { 0.0 } else { 2.0 * (mi * t).atan() }).collect())
}

/// Ratio `m_{i+1} / m_i` of the mode vector, indices in star order mod 4.
pub fn speed_coefficient(star: &VertexStar, mode: FoldMode, from: usize) -> Result<SpeedCoefficient, KinematicsError> {
    let mv = mode_vector(star, mode)?;
    let i = from % 4;
    let den = mv.m[i];
    if den.abs() < DEGENERATE_TOL {
        return Err(KinematicsError::Degenerate { mode, index: i });
    }
    Ok(SpeedCoefficient(mv.m[(i + 1) % 4] / den))
}

pub fn loop_closure_product(coefficients: &[SpeedCoefficient]) -> Result<f64, KinematicsError> {
    if coefficients.is_empty() {
        return Err(KinematicsError::EmptyProduct);
    }
    Ok(coefficients.iter().map(|c| c.0).product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn star(d: &[f64]) -> VertexStar {
        VertexStar::from_degrees(d).unwrap()
    }

    #[test]
    fn p_and_q_examples() {
        let r = f64::to_radians;
        assert_abs_diff_eq!(p_coeff(r(60.0), r(60.0)).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p_coeff(r(37.0), 0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p_coeff(r(60.0), r(90.0)).unwrap(), 2.0 - 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(q_coeff(r(41.0), r(41.0)).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q_coeff(r(30.0), r(60.0)).unwrap(), (3f64.sqrt() - 1.0) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q_coeff(r(60.0), r(90.0)).unwrap(), 2.0 - 3f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(p_coeff(PI, 0.3), Err(KinematicsError::Pole(_))));
        assert!(matches!(q_coeff(0.0, 0.0), Err(KinematicsError::ZeroDenominator(..))));
    }

    #[test]
    fn mode_vector_examples() {
        let a = mode_vector(&star(&[60.0, 60.0, 120.0, 120.0]), FoldMode::A).unwrap();
        for (x, y) in a.m.iter().zip([1.0, -0.5, 1.0, 0.5]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
        }
        assert!(!a.degenerate);
        let sq = mode_vector(&star(&[90.0; 4]), FoldMode::A).unwrap();
        assert_abs_diff_eq!(sq.m[1], 0.0, epsilon = 1e-15);
        assert!(sq.degenerate);
        let b = mode_vector(&star(&[60.0, 60.0, 120.0, 120.0]), FoldMode::B).unwrap();
        assert!(b.degenerate);
        assert_abs_diff_eq!(b.m[1], 1.0);
        assert!(matches!(
            mode_vector(&star(&[60.0, 120.0, 60.0, 120.0]), FoldMode::A),
            Err(KinematicsError::NotFlatFoldable)
        ));
    }

    #[test]
    fn rotated_star_maps_back() {
        // (120, 120, 60, 60) is the same vertex listed from another crease.
        let a = mode_vector(&star(&[120.0, 120.0, 60.0, 60.0]), FoldMode::A).unwrap();
        for (x, y) in a.m.iter().zip([1.0, 0.5, 1.0, -0.5]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
        }
    }

    #[test]
    fn fold_angle_examples() {
        let s = star(&[60.0, 60.0, 120.0, 120.0]);
        assert!(fold_angles_at(&s, FoldMode::A, 0.0).unwrap().iter().all(|r| *r == 0.0));
        let rho = fold_angles_at(&s, FoldMode::A, 1.0).unwrap().degrees();
        let want = [90.0, -53.13010235415598, 90.0, 53.13010235415598];
        for (x, y) in rho.iter().zip(want) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-10);
        }
        let flat = fold_angles_at(&s, FoldMode::A, f64::INFINITY).unwrap();
        assert_abs_diff_eq!(flat[0], PI);
        let sq = fold_angles_at(&star(&[90.0; 4]), FoldMode::A, 1.0).unwrap().degrees();
        assert_abs_diff_eq!(sq[0], 90.0, epsilon = 1e-12);
        assert_eq!(sq[1], 0.0);
    }

    #[test]
    fn speed_coefficient_examples() {
        let s = star(&[60.0, 60.0, 120.0, 120.0]);
        assert_abs_diff_eq!(speed_coefficient(&s, FoldMode::A, 0).unwrap().0, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(speed_coefficient(&s, FoldMode::A, 1).unwrap().0, -2.0, epsilon = 1e-15);
        let cycle: Vec<_> = (0..4).map(|i| speed_coefficient(&s, FoldMode::A, i).unwrap()).collect();
        assert_abs_diff_eq!(loop_closure_product(&cycle).unwrap(), 1.0, epsilon = 1e-15);
        assert!(loop_closure_product(&[]).is_err());
        assert!(speed_coefficient(&s, FoldMode::B, 0).is_err());
    }
}
