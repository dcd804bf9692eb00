//! Thick panels by volume trim: every face carries a panel on one side of
//! the zero-thickness core, beveled along each crease that folds toward
//! the panels by the dihedral bisector at that crease's largest fold.

mod solid;

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use solid::PanelSolid;

use crate::crease_pattern::{CreaseId, CreasePattern, FaceId};
use crate::fold3d::{propagate_fold, FoldError, FoldedState, MotionSample, RESIDUAL_TOL};
use crate::geom::{polygon_area, P2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThickeningError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("crease {crease}: thickness {tau} exceeds the bound {bound} at its largest fold")]
    ThicknessExceeded { crease: CreaseId, tau: f64, bound: f64 },
    #[error("motion sample {sample} has residual {residual:.3e}")]
    InvalidMotion { sample: usize, residual: f64 },
    #[error("motion is empty")]
    EmptyMotion,
    #[error(transparent)]
    Fold(#[from] FoldError),
}

/// Side of the core carrying the panels. Panels above are squeezed by
/// valley folds, panels below by mountain folds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    /// Sign of the fold angles that close the dihedral on this side.
    pub fn closing_sign(self) -> f64 {
        match self {
            Side::Above => 1.0,
            Side::Below => -1.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Above => "above",
            Side::Below => "below",
        })
    }
}

impl FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "above" => Ok(Side::Above),
            "below" => Ok(Side::Below),
            _ => Err(format!("unknown side {s:?}, expected above or below")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThickPanelParams {
    pub tau: f64,
    pub side: Side,
    /// Trim angle per crease; taken from the motion when absent.
    pub rho_max: Option<Vec<f64>>,
}

impl ThickPanelParams {
    pub fn new(tau: f64, side: Side) -> Self {
        ThickPanelParams { tau, side, rho_max: None }
    }
}

/// `c · tan((π − ρ_max)/2)`: the thickest panel whose bevel at `ρ_max`
/// does not recede past the offset half-width `c`.
pub fn max_thickness(c: f64, rho_max: f64) -> f64 {
    c * ((PI - rho_max) / 2.0).tan()
}

/// Half the smaller width, across the crease, of its two faces. For a
/// line of a double-lined pattern this is half the distance between the
/// pair.
pub fn offset_half_width(pattern: &CreasePattern, e: CreaseId) -> f64 {
    let [a, b] = pattern.creases()[e].vertices;
    let (pa, pb) = (pattern.vertices()[a], pattern.vertices()[b]);
    let d = (pb - pa).normalize();
    pattern.crease_faces()[e]
        .iter()
        .flatten()
        .map(|&f| pattern.faces()[f].iter().map(|&v| d.perp(&(pattern.vertices()[v] - pa)).abs()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
        * 0.5
}

/// Largest fold of each crease toward `side` over the motion; zero for
/// creases that only open away from it.
pub fn closing_fold_max(pattern: &CreasePattern, motion: &[MotionSample], side: Side) -> Vec<f64> {
    let s = side.closing_sign();
    (0..pattern.creases().len())
        .map(|e| {
            if pattern.creases()[e].assignment.is_boundary() {
                return 0.0;
            }
            motion.iter().map(|m| s * m.angles[e]).fold(0.0, f64::max)
        })
        .collect()
}

/// Smallest per-crease thickness bound, with the crease attaining it.
pub fn thickness_bound(pattern: &CreasePattern, rho_max: &[f64]) -> Option<(CreaseId, f64)> {
    rho_max
        .iter()
        .enumerate()
        .filter(|(_, r)| **r > 0.0)
        .map(|(e, &r)| (e, if r >= PI { 0.0 } else { max_thickness(offset_half_width(pattern, e), r) }))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

fn check_motion(motion: &[MotionSample]) -> Result<(), ThickeningError> {
    if motion.is_empty() {
        return Err(ThickeningError::EmptyMotion);
    }
    for (i, m) in motion.iter().enumerate() {
        if !(m.residual < RESIDUAL_TOL) {
            return Err(ThickeningError::InvalidMotion { sample: i, residual: m.residual });
        }
    }
    Ok(())
}

fn trim_angles(pattern: &CreasePattern, motion: &[MotionSample], params: &ThickPanelParams) -> Result<Vec<f64>, ThickeningError> {
    if !(params.tau > 0.0 && params.tau.is_finite()) {
        return Err(ThickeningError::BadParams(format!("thickness {} must be positive", params.tau)));
    }
    let rho = match &params.rho_max {
        Some(r) if r.len() != pattern.creases().len() => {
            return Err(ThickeningError::BadParams(format!("{} trim angles for {} creases", r.len(), pattern.creases().len())))
        }
        Some(r) => r.clone(),
        None => closing_fold_max(pattern, motion, params.side),
    };
    if let Some(e) = rho.iter().position(|r| !(*r >= 0.0 && *r < PI)) {
        return Err(ThickeningError::BadParams(format!("crease {e}: trim angle {} outside [0, pi)", rho[e])));
    }
    Ok(rho)
}

/// Panels for a valid motion, refusing any thickness above a crease's
/// bound.
pub fn thicken(pattern: &CreasePattern, motion: &[MotionSample], params: &ThickPanelParams) -> Result<Vec<PanelSolid>, ThickeningError> {
    check_motion(motion)?;
    let rho = trim_angles(pattern, motion, params)?;
    for (e, &r) in rho.iter().enumerate() {
        if r > 0.0 {
            let bound = max_thickness(offset_half_width(pattern, e), r);
            if params.tau > bound * (1.0 + 1e-12) {
                return Err(ThickeningError::ThicknessExceeded { crease: e, tau: params.tau, bound });
            }
        }
    }
    Ok(panels(pattern, &rho, params))
}

/// Panels without the thickness check. Over-thick bevels meet in a ridge
/// below the nominal top, so every solid stays a convex polytope.
pub fn thicken_unchecked(pattern: &CreasePattern, motion: &[MotionSample], params: &ThickPanelParams) -> Result<Vec<PanelSolid>, ThickeningError> {
    check_motion(motion)?;
    let rho = trim_angles(pattern, motion, params)?;
    Ok(panels(pattern, &rho, params))
}

fn panels(pattern: &CreasePattern, rho: &[f64], params: &ThickPanelParams) -> Vec<PanelSolid> {
    let mut out = Vec::new();
    for (f, face) in pattern.faces().iter().enumerate() {
        let poly: Vec<P2> = face.iter().map(|&v| pattern.vertices()[v]).collect();
        let k = face.len();
        let trims: Vec<Option<f64>> = (0..k)
            .map(|i| pattern.crease_between(face[i], face[(i + 1) % k]).map(|e| rho[e]).filter(|r| *r > 0.0))
            .collect();
        if is_convex(&poly) {
            out.push(PanelSolid::new(f, poly, trims, params.tau, params.side));
            continue;
        }
        // Concave faces become triangles; diagonals are never trimmed.
        for t in crate::fold3d::triangulate(&poly) {
            let tri: Vec<P2> = t.iter().map(|&i| poly[i]).collect();
            let tt: Vec<Option<f64>> =
                (0..3).map(|j| if (t[j] + 1) % k == t[(j + 1) % 3] { trims[t[j]] } else { None }).collect();
            out.push(PanelSolid::new(f, tri, tt, params.tau, params.side));
        }
    }
    out
}

fn is_convex(poly: &[P2]) -> bool {
    let k = poly.len();
    let area = polygon_area(poly).abs().max(1e-300);
    (0..k).all(|i| crate::geom::orient(poly[i], poly[(i + 1) % k], poly[(i + 2) % k]) >= -1e-12 * area)
}

/// Faces sharing at least one vertex touch at the core and are skipped.
fn touching(pattern: &CreasePattern) -> Vec<BTreeSet<FaceId>> {
    let nf = pattern.faces().len();
    let mut by_vertex = vec![Vec::new(); pattern.vertices().len()];
    for (f, face) in pattern.faces().iter().enumerate() {
        for &v in face {
            by_vertex[v].push(f);
        }
    }
    let mut out = vec![BTreeSet::new(); nf];
    for fs in by_vertex {
        for &a in &fs {
            for &b in &fs {
                out[a].insert(b);
            }
        }
    }
    out
}

/// Smallest signed separation, over the motion, between panels of faces
/// that share no vertex; negative values are penetration depths.
pub fn clearance_check(pattern: &CreasePattern, solids: &[PanelSolid], motion: &[MotionSample]) -> Result<f64, ThickeningError> {
    if motion.is_empty() {
        return Err(ThickeningError::EmptyMotion);
    }
    let near = touching(pattern);
    let mut best = f64::INFINITY;
    for m in motion {
        let state = propagate_fold(pattern, &m.angles)?;
        best = best.min(sample_clearance(&state, solids, &near, best).0);
    }
    Ok(best)
}

/// Closest pair of non-touching panels at one motion sample.
#[derive(Clone, Debug, PartialEq)]
pub struct ClearanceSample {
    pub t: f64,
    pub clearance: f64,
    /// Faces of the closest pair; `None` when no pair is checked.
    pub faces: Option<(FaceId, FaceId)>,
}

/// Per-sample clearance over the motion, in motion order.
pub fn clearance_log(pattern: &CreasePattern, solids: &[PanelSolid], motion: &[MotionSample]) -> Result<Vec<ClearanceSample>, ThickeningError> {
    let near = touching(pattern);
    motion
        .iter()
        .map(|m| {
            let state = propagate_fold(pattern, &m.angles)?;
            let (clearance, faces) = sample_clearance(&state, solids, &near, f64::INFINITY);
            Ok(ClearanceSample { t: m.t, clearance, faces })
        })
        .collect()
}

/// Clearance of one folded state, skipping pairs whose bounding spheres
/// are already farther apart than `cutoff`.
fn sample_clearance(
    state: &FoldedState,
    solids: &[PanelSolid],
    near: &[BTreeSet<FaceId>],
    cutoff: f64,
) -> (f64, Option<(FaceId, FaceId)>) {
    let placed: Vec<_> = solids.iter().map(|s| s.placed(&state.transforms[s.face])).collect();
    let mut best = (cutoff, None);
    for i in 0..placed.len() {
        for j in i + 1..placed.len() {
            let (a, b) = (&placed[i], &placed[j]);
            if near[solids[i].face].contains(&solids[j].face) {
                continue;
            }
            if (a.center - b.center).norm() - a.radius - b.radius >= best.0 {
                continue;
            }
            let d = solid::separation(a, b);
            if d < best.0 {
                best = (d, Some((solids[i].face, solids[j].face)));
            }
        }
    }
    best
}

/// Panels as closed triangle meshes, one group per solid, placed by
/// `state` or flat when absent.
pub fn export_solids_obj(solids: &[PanelSolid], state: Option<&FoldedState>) -> String {
    solid::export_obj(solids, state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bound_values() {
        assert_abs_diff_eq!(max_thickness(1.0, PI / 2.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(max_thickness(1.0, 120f64.to_radians()), (PI / 6.0).tan(), epsilon = 1e-12);
        assert!(max_thickness(1.0, PI - 1e-9) < 1e-9);
        assert!(max_thickness(1.0, 179f64.to_radians()) < 0.1);
        let mut last = f64::INFINITY;
        for k in 1..180 {
            let t = max_thickness(1.0, (k as f64).to_radians());
            assert!(t < last);
            last = t;
        }
    }

    fn dl_miura_motion() -> (CreasePattern, Vec<MotionSample>) {
        let dl = crate::patterns::gen_dl_miura(3, 3, 60f64.to_radians(), 90f64.to_radians()).unwrap();
        let peak = dl.modes.multipliers.iter().fold(0.0f64, |a, m| a.max(m.abs()));
        let t_max = (75f64.to_radians()).tan() / peak;
        let ts: Vec<f64> = (0..50).map(|k| t_max * k as f64 / 49.0).collect();
        let motion = crate::fold3d::sweep_motion(&dl.pattern, &dl.modes, &ts).unwrap();
        (dl.pattern, motion)
    }

    #[test]
    fn dl_miura_bound_is_tight() {
        let (pattern, motion) = dl_miura_motion();
        let rho = closing_fold_max(&pattern, &motion, Side::Above);
        let (_, bound) = thickness_bound(&pattern, &rho).unwrap();
        let safe = thicken(&pattern, &motion, &ThickPanelParams::new(0.9 * bound, Side::Above)).unwrap();
        let gap = clearance_check(&pattern, &safe, &motion).unwrap();
        assert!(gap >= -1e-9, "clearance {gap}");
        let thick = ThickPanelParams::new(2.0 * bound, Side::Above);
        assert!(matches!(thicken(&pattern, &motion, &thick), Err(ThickeningError::ThicknessExceeded { .. })));
        let fat = thicken_unchecked(&pattern, &motion, &thick).unwrap();
        let depth = clearance_check(&pattern, &fat, &motion).unwrap();
        assert!(depth < 0.0, "clearance {depth}");
    }

    #[test]
    fn flat_motion_gives_plain_prisms() {
        let (pattern, motion) = dl_miura_motion();
        let flat = vec![motion[0].clone()];
        let solids = thicken(&pattern, &flat, &ThickPanelParams::new(0.05, Side::Below)).unwrap();
        assert!(solids.iter().all(|s| s.trims.iter().all(Option::is_none)));
        assert!(clearance_check(&pattern, &solids, &flat).unwrap() >= 0.0);
        let obj = export_solids_obj(&solids, None);
        assert!(obj.lines().any(|l| l.starts_with("g panel0_")));
    }

    #[test]
    fn side_parsing() {
        assert_eq!("Above".parse::<Side>().unwrap(), Side::Above);
        assert!("left".parse::<Side>().is_err());
    }
}
