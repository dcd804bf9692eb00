//! Rigid folded states in space: face isometries from fold angles, closure
//! residuals, motion sweeps, a Newton solver and OBJ export.
//!
//! Frames follow the crease directions: crossing crease `v0 → v1` onto the
//! face on its left rotates by `+ρ` about the crease; onto the right face by
//! `−ρ`. Valley folds are positive.

mod obj;
mod solver;

pub use obj::export_obj;
pub(crate) use obj::{triangulate, weld, write_obj};
pub use solver::{continuation, solve_fold_angles, Solution, SolveOptions};

use std::collections::VecDeque;

use nalgebra::{IsometryMatrix3, Matrix3, Rotation3, Translation3, Unit, Vector3};
use thiserror::Error;

use crate::crease_pattern::{vertex_star, CreaseId, CreasePattern, FaceId, FoldAngleVector, PatternError, VertexStar};
use crate::kinematics::{angles_from_multipliers, face_products, KinematicsError, NetworkModes};

/// Residual threshold for a sample to count as a valid folded state.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FoldError {
    #[error("pattern has no faces")]
    NoFaces,
    #[error("face {0} is not connected to face 0")]
    Disconnected(FaceId),
    #[error("face {face}: loop product {product} is not 1")]
    Inconsistent { face: FaceId, product: f64 },
    #[error("crease {0} cannot drive the solver")]
    BadDriver(CreaseId),
    #[error("jacobian is singular (condition number {0:.3e})")]
    Singular(f64),
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("continuation stalled at driver angle {0}")]
    Stalled(f64),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

/// Rotation by `angle` about the in-plane unit direction at azimuth `phi`;
/// exactly the identity when `angle` is zero.
fn rot_axis(phi: f64, angle: f64) -> Matrix3<f64> {
    if angle == 0.0 {
        return Matrix3::identity();
    }
    let (uy, ux) = phi.sin_cos();
    let k = Matrix3::new(0.0, 0.0, uy, 0.0, 0.0, -ux, -uy, ux, 0.0);
    let (s, c) = angle.sin_cos();
    Matrix3::identity() + k * s + k * k * (1.0 - c)
}

/// `Π Rot(u_i, ρ_i) − I` around an interior vertex, `u_i` being crease `i`.
/// Equal to `Π R_x(ρ_i) R_z(σ_i) − I` since the sectors close to `2π`.
pub fn vertex_closure_matrix(star: &VertexStar, angles: &[f64]) -> Matrix3<f64> {
    let mut m = Matrix3::identity();
    for (rho, phi) in angles.iter().zip(star.azimuths()) {
        m *= rot_axis(phi, *rho);
    }
    m - Matrix3::identity()
}

/// Frobenius distance from the identity of the rotation accumulated around
/// the vertex. `angles[i]` belongs to star crease `i`.
pub fn vertex_closure_residual(star: &VertexStar, angles: &[f64]) -> f64 {
    vertex_closure_matrix(star, angles).norm()
}

/// Face isometries of a folded pattern and how well they agree.
#[derive(Clone, Debug)]
pub struct FoldedState {
    pub transforms: Vec<IsometryMatrix3<f64>>,
    /// `(vertex, residual)` for every interior vertex.
    pub vertex_residuals: Vec<(usize, f64)>,
    /// `(crease, residual)` for creases closing a cycle of the face tree.
    pub cycle_residuals: Vec<(CreaseId, f64)>,
}

impl FoldedState {
    pub fn max_residual(&self) -> f64 {
        self.vertex_residuals.iter().chain(&self.cycle_residuals).map(|x| x.1).fold(0.0, f64::max)
    }

    pub fn is_valid(&self) -> bool {
        self.max_residual() < RESIDUAL_TOL
    }

    /// Image of a pattern point on face `f`.
    pub fn place(&self, f: FaceId, p: nalgebra::Point2<f64>) -> nalgebra::Point3<f64> {
        self.transforms[f] * nalgebra::Point3::new(p.x, p.y, 0.0)
    }

    /// Unit normal of face `f` after folding.
    pub fn normal(&self, f: FaceId) -> Vector3<f64> {
        self.transforms[f].rotation * Vector3::z()
    }
}

fn hinge(pattern: &CreasePattern, e: CreaseId, angle: f64) -> IsometryMatrix3<f64> {
    let [a, b] = pattern.creases()[e].vertices;
    let pa = pattern.vertices()[a];
    let pb = pattern.vertices()[b];
    let axis = Unit::new_normalize(Vector3::new(pb.x - pa.x, pb.y - pa.y, 0.0));
    let rot = Rotation3::from_axis_angle(&axis, angle);
    let origin = Vector3::new(pa.x, pa.y, 0.0);
    let shift = origin - rot * origin;
    IsometryMatrix3::from_parts(Translation3::from(shift), rot)
}

fn star_angles(star: &VertexStar, angles: &FoldAngleVector) -> Vec<f64> {
    star.creases().iter().map(|&e| angles[e]).collect()
}

pub(crate) fn vertex_residuals(pattern: &CreasePattern, angles: &FoldAngleVector) -> Result<Vec<(usize, f64)>, FoldError> {
    let mut out = Vec::new();
    for v in pattern.interior_vertices() {
        let star = vertex_star(pattern, v)?;
        out.push((v, vertex_closure_residual(&star, &star_angles(&star, angles))));
    }
    Ok(out)
}

/// Places every face by folding across a breadth-first spanning tree of the
/// face adjacency, starting from face 0 at the identity.
pub fn propagate_fold(pattern: &CreasePattern, angles: &FoldAngleVector) -> Result<FoldedState, FoldError> {
    angles.check(pattern)?;
    let nf = pattern.faces().len();
    if nf == 0 {
        return Err(FoldError::NoFaces);
    }
    let mut adjacency: Vec<Vec<(CreaseId, FaceId, f64)>> = vec![Vec::new(); nf];
    for (e, [l, r]) in pattern.crease_faces().iter().enumerate() {
        if let (Some(l), Some(r)) = (l, r) {
            // Seen from the left face, the right face turns by −ρ.
            adjacency[*l].push((e, *r, -angles[e]));
            adjacency[*r].push((e, *l, angles[e]));
        }
    }
    let mut transforms: Vec<Option<IsometryMatrix3<f64>>> = vec![None; nf];
    let mut tree_edge = vec![false; pattern.creases().len()];
    transforms[0] = Some(IsometryMatrix3::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let tf = transforms[f].expect("queued faces are placed");
        for &(e, g, angle) in &adjacency[f] {
            if transforms[g].is_some() {
                continue;
            }
            let mut next = tf * hinge(pattern, e, angle);
            next.rotation.renormalize();
            transforms[g] = Some(next);
            tree_edge[e] = true;
            queue.push_back(g);
        }
    }
    let transforms: Vec<IsometryMatrix3<f64>> = transforms
        .into_iter()
        .enumerate()
        .map(|(f, t)| t.ok_or(FoldError::Disconnected(f)))
        .collect::<Result<_, _>>()?;

    let mut cycle_residuals = Vec::new();
    for (e, [l, r]) in pattern.crease_faces().iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        if let (Some(l), Some(r)) = (l, r) {
            let want = transforms[*l] * hinge(pattern, e, -angles[e]);
            let got = transforms[*r];
            let res = (want.rotation.matrix() - got.rotation.matrix()).norm()
                + (want.translation.vector - got.translation.vector).norm();
            cycle_residuals.push((e, res));
        }
    }
    let vertex_residuals = vertex_residuals(pattern, angles)?;
    Ok(FoldedState { transforms, vertex_residuals, cycle_residuals })
}

/// Signed rotation taking face `from` to face `to`, about the in-plane
/// direction `axis`; this is the total fold crossed when `to` lies to the
/// left of `axis`. `None` when the relative rotation is not about `axis`.
pub fn fold_between(state: &FoldedState, from: FaceId, to: FaceId, axis: nalgebra::Vector2<f64>) -> Option<f64> {
    let axis = Vector3::new(axis.x, axis.y, 0.0).normalize();
    let rel = state.transforms[from].rotation.inverse() * state.transforms[to].rotation;
    match rel.axis_angle() {
        None => Some(0.0),
        Some((ax, angle)) => {
            let ax = ax.into_inner();
            (ax.cross(&axis).norm() < 1e-7).then(|| angle * ax.dot(&axis).signum())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MotionSample {
    pub t: f64,
    pub angles: FoldAngleVector,
    pub residual: f64,
}

/// Fold angles `2 atan(m_e t)` at every `t`, each checked by propagation.
pub fn sweep_multipliers(pattern: &CreasePattern, multipliers: &[f64], ts: &[f64]) -> Result<Vec<MotionSample>, FoldError> {
    ts.iter()
        .map(|&t| {
            let angles = angles_from_multipliers(multipliers, t);
            let state = propagate_fold(pattern, &angles)?;
            Ok(MotionSample { t, angles, residual: state.max_residual() })
        })
        .collect()
}

/// Sweep for a mode assignment, rejected up front if some interior face
/// fails the loop product.
pub fn sweep_motion(pattern: &CreasePattern, modes: &NetworkModes, ts: &[f64]) -> Result<Vec<MotionSample>, FoldError> {
    for (face, product) in face_products(pattern, &modes.modes)? {
        if (product - 1.0).abs() > 1e-9 {
            return Err(FoldError::Inconsistent { face, product });
        }
    }
    sweep_multipliers(pattern, &modes.multipliers, ts)
}

/// `samples` values of `t`: 0, then log-spaced from `t_min` to `t_max`.
pub fn log_grid(t_min: f64, t_max: f64, samples: usize) -> Vec<f64> {
    let mut out = vec![0.0];
    if samples < 2 {
        return out;
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let k = samples - 1;
    for i in 0..k {
        let s = if k == 1 { 1.0 } else { i as f64 / (k - 1) as f64 };
        out.push((a + (b - a) * s).exp());
    }
    out
}
