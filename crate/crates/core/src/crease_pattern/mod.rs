//! Planar crease patterns: vertices, creases with mountain/valley labels, and
//! the faces they bound.
//!
//! A [`CreasePattern`] is validated on construction. Faces are always
//! recomputed from the embedding; a face list supplied by a file is compared
//! against the recomputed one and rejected on mismatch.

mod builder;
pub(crate) mod faces;
mod fold_io;
mod star;
mod svg;

pub use builder::{BuiltPattern, PatternBuilder};
pub use fold_io::{load_fold, save_fold};
pub use star::{is_flat_foldable_deg4, kawasaki_residual, vertex_star, VertexStar};
pub use svg::{save_svg, SvgStyle};

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::ops::{Deref, DerefMut};

use serde_json::{Map, Value};
use thiserror::Error;

use crate::geom::{orient, point_segment, P2};
use faces::{canonical_cycle, embed, Spoke};

pub type VertexId = usize;
pub type CreaseId = usize;
pub type FaceId = usize;

/// Tolerance for angle sums and flat-foldability checks, in radians.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assignment {
    Mountain,
    Valley,
    Boundary,
    Unassigned,
}

impl Assignment {
    pub fn fold_code(self) -> &'static str {
        match self {
            Assignment::Mountain => "M",
            Assignment::Valley => "V",
            Assignment::Boundary => "B",
            Assignment::Unassigned => "U",
        }
    }

    pub fn from_fold_code(code: &str) -> Option<Self> {
        match code {
            "M" => Some(Assignment::Mountain),
            "V" => Some(Assignment::Valley),
            "B" => Some(Assignment::Boundary),
            "U" => Some(Assignment::Unassigned),
            _ => None,
        }
    }

    /// Label matching the sign of a fold angle (valley positive).
    pub fn from_angle(rho: f64) -> Self {
        if rho > 0.0 {
            Assignment::Valley
        } else if rho < 0.0 {
            Assignment::Mountain
        } else {
            Assignment::Unassigned
        }
    }

    pub fn is_boundary(self) -> bool {
        self == Assignment::Boundary
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crease {
    pub vertices: [VertexId; 2],
    pub assignment: Assignment,
}

impl Crease {
    pub fn new(a: VertexId, b: VertexId, assignment: Assignment) -> Self {
        Crease { vertices: [a, b], assignment }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PatternError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown crease {0}")]
    UnknownCrease(CreaseId),
    #[error("crease {crease} references missing vertex {vertex}")]
    DanglingCrease { crease: CreaseId, vertex: VertexId },
    #[error("crease {0} has zero length")]
    DegenerateCrease(CreaseId),
    #[error("vertices {0} and {1} coincide")]
    DuplicateVertex(VertexId, VertexId),
    #[error("creases {0} and {1} join the same pair of vertices")]
    DuplicateCrease(CreaseId, CreaseId),
    #[error("non-planar embedding: creases {0} and {1} cross")]
    NonPlanar(CreaseId, CreaseId),
    #[error("non-planar embedding: vertex {vertex} lies inside crease {crease}")]
    VertexOnCrease { vertex: VertexId, crease: CreaseId },
    #[error("crease {crease} ({assignment:?}) borders {faces} face(s)")]
    Incidence { crease: CreaseId, assignment: Assignment, faces: usize },
    #[error("crease {0} has the same face on both sides")]
    Bridge(CreaseId),
    #[error("vertex {0} has more than one gap in its star")]
    NonManifoldVertex(VertexId),
    #[error("stored faces disagree with the embedding: {0}")]
    FaceMismatch(String),
    #[error("fold angle vector: {0}")]
    FoldAngles(String),
    #[error("invalid vertex star: {0}")]
    InvalidStar(String),
    #[error("expected degree {expected}, got {got}")]
    WrongDegree { expected: String, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Signed fold angle per crease, in radians. Valley is positive.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FoldAngleVector(pub Vec<f64>);

impl FoldAngleVector {
    pub fn zeros(n: usize) -> Self {
        FoldAngleVector(vec![0.0; n])
    }

    /// Checks length, the `[−π, π]` range and zero angles on boundary creases.
    pub fn check(&self, pattern: &CreasePattern) -> Result<(), PatternError> {
        if self.len() != pattern.creases().len() {
            return Err(PatternError::FoldAngles(format!(
                "{} angles for {} creases",
                self.len(),
                pattern.creases().len()
            )));
        }
        for (e, (&rho, c)) in self.iter().zip(pattern.creases()).enumerate() {
            if !rho.is_finite() || rho.abs() > PI + ANGLE_TOL {
                return Err(PatternError::FoldAngles(format!("crease {e}: {rho} outside [-pi, pi]")));
            }
            if c.assignment.is_boundary() && rho != 0.0 {
                return Err(PatternError::FoldAngles(format!("boundary crease {e} has angle {rho}")));
            }
        }
        Ok(())
    }

    pub fn degrees(&self) -> Vec<f64> {
        self.iter().map(|r| r.to_degrees()).collect()
    }
}

impl Deref for FoldAngleVector {
    type Target = Vec<f64>;
    fn deref(&self) -> &Vec<f64> {
        &self.0
    }
}

impl DerefMut for FoldAngleVector {
    fn deref_mut(&mut self) -> &mut Vec<f64> {
        &mut self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CreasePattern {
    vertices: Vec<P2>,
    creases: Vec<Crease>,
    faces: Vec<Vec<VertexId>>,
    crease_faces: Vec<[Option<FaceId>; 2]>,
    interior: Vec<bool>,
    rings: Vec<Vec<CreaseId>>,
    fold_angles_deg: Option<Vec<f64>>,
    extra: Map<String, Value>,
}

impl CreasePattern {
    pub fn new(vertices: Vec<P2>, creases: Vec<Crease>) -> Result<Self, PatternError> {
        Self::assemble(vertices, creases, None, None, Map::new())
    }

    pub fn empty() -> Self {
        CreasePattern {
            vertices: Vec::new(),
            creases: Vec::new(),
            faces: Vec::new(),
            crease_faces: Vec::new(),
            interior: Vec::new(),
            rings: Vec::new(),
            fold_angles_deg: None,
            extra: Map::new(),
        }
    }

    pub(crate) fn assemble(
        vertices: Vec<P2>,
        creases: Vec<Crease>,
        stored_faces: Option<Vec<Vec<VertexId>>>,
        fold_angles_deg: Option<Vec<f64>>,
        extra: Map<String, Value>,
    ) -> Result<Self, PatternError> {
        let tol = length_tol(&vertices);
        check_combinatorics(&vertices, &creases, tol)?;
        check_planarity(&vertices, &creases, tol)?;
        let emb = embed(&vertices, &creases, tol * tol);

        let mut crease_faces = Vec::with_capacity(creases.len());
        for (e, c) in creases.iter().enumerate() {
            let (l, r) = (emb.left[2 * e], emb.left[2 * e + 1]);
            if l.is_some() && l == r {
                return Err(PatternError::Bridge(e));
            }
            let count = l.is_some() as usize + r.is_some() as usize;
            let ok = match c.assignment {
                Assignment::Boundary => count == 1,
                Assignment::Mountain | Assignment::Valley => count == 2,
                Assignment::Unassigned => count >= 1,
            };
            if !ok {
                return Err(PatternError::Incidence { crease: e, assignment: c.assignment, faces: count });
            }
            crease_faces.push([l, r]);
        }

        let interior = emb
            .rings
            .iter()
            .map(|ring| !ring.is_empty() && ring.iter().all(|s| emb.left[s.halfedge].is_some()))
            .collect();
        let rings = emb.rings.iter().map(|r| r.iter().map(|s: &Spoke| s.crease).collect()).collect();

        if let Some(stored) = stored_faces {
            let a: BTreeSet<Vec<VertexId>> = stored.iter().map(|f| canonical_cycle(f)).collect();
            let b: BTreeSet<Vec<VertexId>> = emb.faces.iter().cloned().collect();
            if a.len() != stored.len() || a != b {
                let missing = b.difference(&a).next().map(|f| format!("expected face {f:?}"));
                let extra = a.difference(&b).next().map(|f| format!("unexpected face {f:?}"));
                let msg = extra.or(missing).unwrap_or_else(|| "duplicate face".to_string());
                return Err(PatternError::FaceMismatch(msg));
            }
        }
        if let Some(fa) = &fold_angles_deg {
            if fa.len() != creases.len() {
                return Err(PatternError::FoldAngles(format!(
                    "{} fold angles for {} creases",
                    fa.len(),
                    creases.len()
                )));
            }
        }

        Ok(CreasePattern {
            vertices,
            creases,
            faces: emb.faces,
            crease_faces,
            interior,
            rings,
            fold_angles_deg,
            extra,
        })
    }

    pub fn vertices(&self) -> &[P2] {
        &self.vertices
    }

    pub fn creases(&self) -> &[Crease] {
        &self.creases
    }

    /// Counterclockwise face cycles, each starting at its smallest vertex id.
    pub fn faces(&self) -> &[Vec<VertexId>] {
        &self.faces
    }

    /// Faces to the left and right of each crease, oriented from its first
    /// vertex to its second.
    pub fn crease_faces(&self) -> &[[Option<FaceId>; 2]] {
        &self.crease_faces
    }

    pub fn is_interior(&self, v: VertexId) -> bool {
        self.interior.get(v).copied().unwrap_or(false)
    }

    pub fn interior_vertices(&self) -> Vec<VertexId> {
        (0..self.vertices.len()).filter(|&v| self.interior[v]).collect()
    }

    /// Incident creases of `v`, counterclockwise by azimuth.
    pub fn incident(&self, v: VertexId) -> &[CreaseId] {
        &self.rings[v]
    }

    pub fn other_end(&self, e: CreaseId, v: VertexId) -> VertexId {
        let [a, b] = self.creases[e].vertices;
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_boundary_crease(&self, e: CreaseId) -> bool {
        let [l, r] = self.crease_faces[e];
        l.is_none() || r.is_none()
    }

    /// A face is interior when none of its edges lie on the boundary.
    pub fn is_interior_face(&self, f: FaceId) -> bool {
        let face = &self.faces[f];
        (0..face.len()).all(|k| {
            let (a, b) = (face[k], face[(k + 1) % face.len()]);
            self.crease_between(a, b).map(|e| !self.is_boundary_crease(e)).unwrap_or(false)
        })
    }

    pub fn crease_between(&self, a: VertexId, b: VertexId) -> Option<CreaseId> {
        self.rings.get(a)?.iter().copied().find(|&e| self.other_end(e, a) == b)
    }

    /// Stored fold angles in radians, if the pattern carries any.
    pub fn fold_angles(&self) -> Option<FoldAngleVector> {
        self.fold_angles_deg
            .as_ref()
            .map(|d| FoldAngleVector(d.iter().map(|x| x.to_radians()).collect()))
    }

    pub(crate) fn fold_angles_deg(&self) -> Option<&[f64]> {
        self.fold_angles_deg.as_deref()
    }

    /// Attaches fold angles; they are stored in degrees as the file format does.
    pub fn with_fold_angles(mut self, angles: &FoldAngleVector) -> Result<Self, PatternError> {
        angles.check(&self)?;
        self.fold_angles_deg = Some(angles.degrees());
        Ok(self)
    }

    /// Replaces the assignment of every non-boundary crease by the sign of `angles`.
    pub fn with_assignments_from(mut self, angles: &FoldAngleVector) -> Result<Self, PatternError> {
        angles.check(&self)?;
        for (c, &rho) in self.creases.iter_mut().zip(angles.iter()) {
            if !c.assignment.is_boundary() {
                c.assignment = Assignment::from_angle(rho);
            }
        }
        Ok(self)
    }

    /// Unknown top-level keys carried through file round-trips.
    pub fn extra(&self) -> &Map<String, Value> {
        &self.extra
    }

    pub fn crease_length(&self, e: CreaseId) -> f64 {
        let [a, b] = self.creases[e].vertices;
        (self.vertices[b] - self.vertices[a]).norm()
    }

    /// Face whose interior contains `p`, if any.
    pub fn face_at(&self, p: P2) -> Option<FaceId> {
        self.faces.iter().position(|face| {
            let pts: Vec<P2> = face.iter().map(|&v| self.vertices[v]).collect();
            crate::geom::point_in_polygon(p, &pts)
        })
    }

    /// Axis-aligned bounding box `(min, max)`; `None` for an empty pattern.
    pub fn bounds(&self) -> Option<(P2, P2)> {
        let first = *self.vertices.first()?;
        let (mut lo, mut hi) = (first, first);
        for p in &self.vertices {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }
}

fn length_tol(vertices: &[P2]) -> f64 {
    let mut diag: f64 = 0.0;
    if let Some(first) = vertices.first() {
        let (mut lo, mut hi) = (*first, *first);
        for p in vertices {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        diag = (hi - lo).norm();
    }
    1e-9 * diag.max(1.0)
}

fn check_combinatorics(vertices: &[P2], creases: &[Crease], tol: f64) -> Result<(), PatternError> {
    for (v, p) in vertices.iter().enumerate() {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(PatternError::Parse(format!("vertex {v} has non-finite coordinates")));
        }
    }
    let mut seen = std::collections::BTreeMap::new();
    for (e, c) in creases.iter().enumerate() {
        for &v in &c.vertices {
            if v >= vertices.len() {
                return Err(PatternError::DanglingCrease { crease: e, vertex: v });
            }
        }
        let [a, b] = c.vertices;
        if a == b || (vertices[a] - vertices[b]).norm() <= tol {
            return Err(PatternError::DegenerateCrease(e));
        }
        if let Some(&prev) = seen.get(&(a.min(b), a.max(b))) {
            return Err(PatternError::DuplicateCrease(prev, e));
        }
        seen.insert((a.min(b), a.max(b)), e);
    }
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&i, &j| vertices[i].x.total_cmp(&vertices[j].x));
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if vertices[j].x - vertices[i].x > tol {
                break;
            }
            if (vertices[j] - vertices[i]).norm() <= tol {
                return Err(PatternError::DuplicateVertex(i.min(j), i.max(j)));
            }
        }
    }
    Ok(())
}

fn check_planarity(vertices: &[P2], creases: &[Crease], tol: f64) -> Result<(), PatternError> {
    let seg = |e: usize| (vertices[creases[e].vertices[0]], vertices[creases[e].vertices[1]]);
    let mut order: Vec<usize> = (0..creases.len()).collect();
    let xmin = |e: usize| seg(e).0.x.min(seg(e).1.x);
    let xmax = |e: usize| seg(e).0.x.max(seg(e).1.x);
    order.sort_by(|&i, &j| xmin(i).total_cmp(&xmin(j)).then(i.cmp(&j)));

    for (k, &i) in order.iter().enumerate() {
        let (a, b) = seg(i);
        let len_i = (b - a).norm();
        for &j in &order[k + 1..] {
            if xmin(j) > xmax(i) + tol {
                break;
            }
            let ci = creases[i].vertices;
            let cj = creases[j].vertices;
            if ci.iter().any(|v| cj.contains(v)) {
                continue;
            }
            let (c, d) = seg(j);
            let len_j = (d - c).norm();
            let d1 = orient(a, b, c) / len_i;
            let d2 = orient(a, b, d) / len_i;
            let d3 = orient(c, d, a) / len_j;
            let d4 = orient(c, d, b) / len_j;
            let straddles = |x: f64, y: f64| (x > tol && y < -tol) || (x < -tol && y > tol);
            if straddles(d1, d2) && straddles(d3, d4) {
                return Err(PatternError::NonPlanar(i.min(j), i.max(j)));
            }
        }
    }

    let mut vorder: Vec<usize> = (0..vertices.len()).collect();
    vorder.sort_by(|&i, &j| vertices[i].x.total_cmp(&vertices[j].x));
    for (e, c) in creases.iter().enumerate() {
        let (a, b) = seg(e);
        let (lo, hi) = (a.x.min(b.x) - tol, a.x.max(b.x) + tol);
        let start = vorder.partition_point(|&v| vertices[v].x < lo);
        for &v in &vorder[start..] {
            if vertices[v].x > hi {
                break;
            }
            if c.vertices.contains(&v) {
                continue;
            }
            let (dist, _) = point_segment(vertices[v], a, b);
            if dist <= tol {
                return Err(PatternError::VertexOnCrease { vertex: v, crease: e });
            }
        }
    }
    Ok(())
}
