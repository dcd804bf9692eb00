//! Networks of degree-4 vertices: per-vertex modes combined into one global
//! multiplier per crease.
//!
//! A face whose corners are all interior vertices admits the motion iff the
//! product of the speed coefficients around it is 1; equivalently, the
//! multipliers propagated from vertex to vertex never disagree.

use std::collections::{BTreeMap, VecDeque};

use super::{loop_closure_product, mode_vector, FoldMode, KinematicsError, SpeedCoefficient, DEGENERATE_TOL};
use crate::crease_pattern::{vertex_star, Assignment, CreaseId, CreasePattern, FaceId, VertexId};

const REL_TOL: f64 = 1e-9;

/// A consistent mode assignment with its global multipliers.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkModes {
    pub modes: BTreeMap<VertexId, FoldMode>,
    /// `tan(ρ_e / 2) = multipliers[e] · t`; zero on boundary creases.
    pub multipliers: Vec<f64>,
    /// Non-boundary creases not touching any interior vertex; held flat.
    pub free: Vec<CreaseId>,
}

#[derive(Clone, Debug)]
pub struct ModeSearch {
    /// Admit modes in which some crease never folds.
    pub allow_degenerate: bool,
    /// Require multiplier signs to match the pattern's M/V labels up to a
    /// global sign.
    pub respect_labels: bool,
    /// Per-vertex restrictions; vertices not listed try both modes.
    pub fixed: BTreeMap<VertexId, FoldMode>,
    pub max_nodes: usize,
}

impl Default for ModeSearch {
    fn default() -> Self {
        ModeSearch { allow_degenerate: false, respect_labels: false, fixed: BTreeMap::new(), max_nodes: 1_000_000 }
    }
}

/// Per-vertex multipliers keyed by crease id.
fn local_vector(pattern: &CreasePattern, v: VertexId, mode: FoldMode) -> Result<([CreaseId; 4], [f64; 4], bool), KinematicsError> {
    let star = vertex_star(pattern, v)?;
    if star.degree() != 4 || !star.is_interior() {
        return Err(KinematicsError::BadVertex(v));
    }
    let mv = mode_vector(&star, mode).map_err(|e| match e {
        KinematicsError::NotFlatFoldable => KinematicsError::BadVertex(v),
        other => other,
    })?;
    let c = star.creases();
    Ok(([c[0], c[1], c[2], c[3]], mv.m, mv.degenerate))
}

fn interior_order(pattern: &CreasePattern) -> Vec<VertexId> {
    let interior = pattern.interior_vertices();
    let mut seen = vec![false; pattern.vertices().len()];
    let mut order = Vec::with_capacity(interior.len());
    for &root in &interior {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<VertexId> = pattern
                .incident(v)
                .iter()
                .map(|&e| pattern.other_end(e, v))
                .filter(|&w| pattern.is_interior(w) && !seen[w])
                .collect();
            next.sort_unstable();
            next.dedup();
            for w in next {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    order
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1e-300) || (a.abs() < DEGENERATE_TOL && b.abs() < DEGENERATE_TOL)
}

/// Global multipliers for a complete mode assignment.
pub fn propagate_multipliers(
    pattern: &CreasePattern,
    modes: &BTreeMap<VertexId, FoldMode>,
) -> Result<NetworkModes, KinematicsError> {
    let order = interior_order(pattern);
    let mut known: Vec<Option<f64>> = vec![None; pattern.creases().len()];
    for &v in &order {
        let mode = *modes.get(&v).ok_or(KinematicsError::NoAssignment)?;
        let (creases, m, _) = local_vector(pattern, v, mode)?;
        place(&mut known, &creases, &m).map_err(KinematicsError::Conflict)?;
    }
    finish(pattern, modes.clone(), known)
}

fn finish(pattern: &CreasePattern, modes: BTreeMap<VertexId, FoldMode>, known: Vec<Option<f64>>) -> Result<NetworkModes, KinematicsError> {
    let mut free = Vec::new();
    let multipliers = known
        .iter()
        .enumerate()
        .map(|(e, k)| match k {
            Some(x) => *x,
            None => {
                if !pattern.creases()[e].assignment.is_boundary() && !pattern.is_boundary_crease(e) {
                    free.push(e);
                }
                0.0
            }
        })
        .collect();
    Ok(NetworkModes { modes, multipliers, free })
}

/// Scales a local vector onto the known multipliers and records it.
/// Returns the conflicting crease on failure.
fn place(known: &mut [Option<f64>], creases: &[CreaseId; 4], m: &[f64; 4]) -> Result<(), CreaseId> {
    let scale = (0..4)
        .find_map(|j| match known[creases[j]] {
            Some(k) if m[j].abs() >= DEGENERATE_TOL && k.abs() >= DEGENERATE_TOL => Some(k / m[j]),
            _ => None,
        })
        .unwrap_or(1.0);
    for j in 0..4 {
        let val = scale * m[j];
        match known[creases[j]] {
            Some(k) if !close(k, val) => return Err(creases[j]),
            Some(_) => {}
            None => known[creases[j]] = Some(val),
        }
    }
    Ok(())
}

fn labels_ok(pattern: &CreasePattern, known: &[Option<f64>]) -> bool {
    let mut sign = 0.0;
    for (e, k) in known.iter().enumerate() {
        let Some(x) = k else { continue };
        if x.abs() < DEGENERATE_TOL {
            continue;
        }
        let want = match pattern.creases()[e].assignment {
            Assignment::Valley => 1.0,
            Assignment::Mountain => -1.0,
            _ => continue,
        };
        let s = want * x.signum();
        if sign == 0.0 {
            sign = s;
        } else if s != sign {
            return false;
        }
    }
    true
}

/// Depth-first search over per-vertex modes (a before b) in breadth-first
/// vertex order, pruning as soon as two vertices disagree on a crease.
pub fn find_mode_assignment(pattern: &CreasePattern, opts: &ModeSearch) -> Result<NetworkModes, KinematicsError> {
    let order = interior_order(pattern);
    let mut candidates: Vec<Vec<([CreaseId; 4], [f64; 4], FoldMode)>> = Vec::with_capacity(order.len());
    for &v in &order {
        let modes: Vec<FoldMode> = match opts.fixed.get(&v) {
            Some(m) => vec![*m],
            None => vec![FoldMode::A, FoldMode::B],
        };
        let mut list = Vec::new();
        for mode in modes {
            let (creases, m, degenerate) = local_vector(pattern, v, mode)?;
            if degenerate && !opts.allow_degenerate {
                continue;
            }
            list.push((creases, m, mode));
        }
        candidates.push(list);
    }

    let mut nodes = 0usize;
    let mut chosen: Vec<usize> = Vec::with_capacity(order.len());
    let mut stack: Vec<Vec<Option<f64>>> = vec![vec![None; pattern.creases().len()]];
    let mut next_choice = 0usize;
    loop {
        let depth = chosen.len();
        if depth == order.len() {
            let modes = order.iter().enumerate().map(|(d, &v)| (v, candidates[d][chosen[d]].2)).collect();
            return finish(pattern, modes, stack.pop().unwrap_or_default());
        }
        let mut advanced = false;
        while next_choice < candidates[depth].len() {
            nodes += 1;
            if nodes > opts.max_nodes {
                return Err(KinematicsError::SearchLimit(opts.max_nodes));
            }
            let (creases, m, _) = &candidates[depth][next_choice];
            let mut known = stack[depth].clone();
            if place(&mut known, creases, m).is_ok() && (!opts.respect_labels || labels_ok(pattern, &known)) {
                chosen.push(next_choice);
                stack.push(known);
                next_choice = 0;
                advanced = true;
                break;
            }
            next_choice += 1;
        }
        if !advanced {
            match chosen.pop() {
                Some(c) => {
                    stack.pop();
                    next_choice = c + 1;
                }
                None => return Err(KinematicsError::NoAssignment),
            }
        }
    }
}

/// Speed-coefficient products around every face whose corners are all
/// interior vertices.
pub fn face_products(
    pattern: &CreasePattern,
    modes: &BTreeMap<VertexId, FoldMode>,
) -> Result<Vec<(FaceId, f64)>, KinematicsError> {
    let mut local: BTreeMap<VertexId, BTreeMap<CreaseId, f64>> = BTreeMap::new();
    for (&v, &mode) in modes {
        let (creases, m, _) = local_vector(pattern, v, mode)?;
        local.insert(v, creases.iter().copied().zip(m).collect());
    }
    let mut out = Vec::new();
    for (f, face) in pattern.faces().iter().enumerate() {
        if !face.iter().all(|v| pattern.is_interior(*v)) {
            continue;
        }
        let k = face.len();
        let mut coeffs = Vec::with_capacity(k);
        for i in 0..k {
            let v = face[i];
            let prev = face[(i + k - 1) % k];
            let next = face[(i + 1) % k];
            let ring = local.get(&v).ok_or(KinematicsError::NoAssignment)?;
            let e_in = pattern.crease_between(prev, v).ok_or(KinematicsError::BadVertex(v))?;
            let e_out = pattern.crease_between(v, next).ok_or(KinematicsError::BadVertex(v))?;
            coeffs.push(SpeedCoefficient(ring[&e_out] / ring[&e_in]));
        }
        out.push((f, loop_closure_product(&coeffs)?));
    }
    Ok(out)
}
