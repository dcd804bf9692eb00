//! Face extraction from a planar straight-line embedding.
//!
//! Half-edge `2e` runs from `creases[e].vertices[0]` to `vertices[1]`, and
//! `2e + 1` runs back. Faces are traced with their interior on the left, so
//! bounded faces come out counterclockwise and the unbounded region (plus any
//! hole boundaries) comes out clockwise and is discarded.

use super::{Crease, FaceId, VertexId};
use crate::geom::{azimuth, polygon_area, P2};

pub(crate) struct Embedding {
    pub faces: Vec<Vec<VertexId>>,
    /// Face to the left of each half-edge, `None` outside the pattern.
    pub left: Vec<Option<FaceId>>,
    /// Outgoing half-edges of each vertex sorted counterclockwise by azimuth.
    pub rings: Vec<Vec<Spoke>>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Spoke {
    pub azimuth: f64,
    pub crease: usize,
    pub halfedge: usize,
}

pub(crate) fn origin(creases: &[Crease], h: usize) -> VertexId {
    creases[h / 2].vertices[h % 2]
}

pub(crate) fn embed(vertices: &[P2], creases: &[Crease], area_tol: f64) -> Embedding {
    let mut rings: Vec<Vec<Spoke>> = vec![Vec::new(); vertices.len()];
    for (e, c) in creases.iter().enumerate() {
        let [a, b] = c.vertices;
        rings[a].push(Spoke { azimuth: azimuth(vertices[b] - vertices[a]), crease: e, halfedge: 2 * e });
        rings[b].push(Spoke { azimuth: azimuth(vertices[a] - vertices[b]), crease: e, halfedge: 2 * e + 1 });
    }
    for ring in &mut rings {
        ring.sort_by(|x, y| x.azimuth.total_cmp(&y.azimuth).then(x.crease.cmp(&y.crease)));
    }
    let nh = 2 * creases.len();
    let mut pos = vec![0usize; nh];
    for ring in &rings {
        for (k, s) in ring.iter().enumerate() {
            pos[s.halfedge] = k;
        }
    }

    let mut visited = vec![false; nh];
    let mut cycles: Vec<(Vec<VertexId>, Vec<usize>)> = Vec::new();
    for h0 in 0..nh {
        if visited[h0] {
            continue;
        }
        let mut hs = Vec::new();
        let mut h = h0;
        loop {
            visited[h] = true;
            hs.push(h);
            let twin = h ^ 1;
            let ring = &rings[origin(creases, twin)];
            // Clockwise neighbour of the reversed edge keeps the face on the left.
            h = ring[(pos[twin] + ring.len() - 1) % ring.len()].halfedge;
            if h == h0 {
                break;
            }
        }
        let vs: Vec<VertexId> = hs.iter().map(|&h| origin(creases, h)).collect();
        let pts: Vec<P2> = vs.iter().map(|&v| vertices[v]).collect();
        if polygon_area(&pts) > area_tol {
            let start = (0..vs.len()).min_by_key(|&k| vs[k]).unwrap_or(0);
            let mut vs_rot = vs[start..].to_vec();
            vs_rot.extend_from_slice(&vs[..start]);
            let mut hs_rot = hs[start..].to_vec();
            hs_rot.extend_from_slice(&hs[..start]);
            cycles.push((vs_rot, hs_rot));
        }
    }
    cycles.sort_by(|a, b| a.0.cmp(&b.0));

    let mut left = vec![None; nh];
    let mut faces = Vec::with_capacity(cycles.len());
    for (f, (vs, hs)) in cycles.into_iter().enumerate() {
        for h in hs {
            left[h] = Some(f);
        }
        faces.push(vs);
    }
    Embedding { faces, left, rings }
}

/// Rotates a cycle so it starts at its smallest vertex id.
pub(crate) fn canonical_cycle(cycle: &[VertexId]) -> Vec<VertexId> {
    if cycle.is_empty() {
        return Vec::new();
    }
    let start = (0..cycle.len()).min_by_key(|&k| cycle[k]).unwrap_or(0);
    let mut out = cycle[start..].to_vec();
    out.extend_from_slice(&cycle[..start]);
    out
}
