//! Incremental pattern assembly from loose segments.
//!
//! Endpoints closer than the weld tolerance become one vertex, segments are
//! split wherever another vertex lies on them, and boundary segments are
//! split where a crease crosses them. Two crossing non-boundary segments are
//! an error: generators are expected to end creases at shared vertices.

use super::{Assignment, Crease, CreaseId, CreasePattern, PatternError, VertexId};
use crate::geom::{line_intersection, orient, point_segment, P2};

#[derive(Clone, Debug)]
pub struct PatternBuilder {
    points: Vec<P2>,
    segments: Vec<(usize, usize, Assignment)>,
    tol: f64,
}

/// Result of [`PatternBuilder::build_with_map`].
#[derive(Clone, Debug)]
pub struct BuiltPattern {
    pub pattern: CreasePattern,
    /// Output creases of each input segment, ordered from its first endpoint.
    pub segment_creases: Vec<Vec<CreaseId>>,
    /// Output vertex of each input point.
    pub point_vertex: Vec<Option<VertexId>>,
}

fn rank(a: Assignment) -> u8 {
    match a {
        Assignment::Mountain | Assignment::Valley => 0,
        Assignment::Unassigned => 1,
        Assignment::Boundary => 2,
    }
}

impl PatternBuilder {
    pub fn new(tol: f64) -> Self {
        PatternBuilder { points: Vec::new(), segments: Vec::new(), tol }
    }

    /// Index of `p`, welding it onto an existing point within tolerance.
    pub fn point(&mut self, p: P2) -> usize {
        if let Some(i) = self.points.iter().position(|q| (q - p).norm() <= self.tol) {
            return i;
        }
        self.points.push(p);
        self.points.len() - 1
    }

    pub fn segment(&mut self, a: P2, b: P2, assignment: Assignment) -> usize {
        let i = self.point(a);
        let j = self.point(b);
        self.segments.push((i, j, assignment));
        self.segments.len() - 1
    }

    pub fn segment_ids(&mut self, i: usize, j: usize, assignment: Assignment) -> usize {
        self.segments.push((i, j, assignment));
        self.segments.len() - 1
    }

    pub fn points(&self) -> &[P2] {
        &self.points
    }

    pub fn build(self) -> Result<CreasePattern, PatternError> {
        Ok(self.build_with_map()?.pattern)
    }

    pub fn build_with_map(mut self) -> Result<BuiltPattern, PatternError> {
        let tol = self.tol;
        let segs = self.segments.clone();
        for (s, &(i, j, _)) in segs.iter().enumerate() {
            if i == j {
                return Err(PatternError::DegenerateCrease(s));
            }
        }

        for a in 0..segs.len() {
            for b in a + 1..segs.len() {
                let (i, j, asg_a) = segs[a];
                let (k, l, asg_b) = segs[b];
                if [i, j].iter().any(|v| *v == k || *v == l) {
                    continue;
                }
                let (p, q, r, s) = (self.points[i], self.points[j], self.points[k], self.points[l]);
                let (la, lb) = ((q - p).norm(), (s - r).norm());
                let d1 = orient(p, q, r) / la;
                let d2 = orient(p, q, s) / la;
                let d3 = orient(r, s, p) / lb;
                let d4 = orient(r, s, q) / lb;
                let straddles = |x: f64, y: f64| (x > tol && y < -tol) || (x < -tol && y > tol);
                if straddles(d1, d2) && straddles(d3, d4) {
                    if !asg_a.is_boundary() && !asg_b.is_boundary() {
                        return Err(PatternError::NonPlanar(a, b));
                    }
                    if let Some(x) = line_intersection(p, q - p, r, s - r) {
                        self.point(x);
                    }
                }
            }
        }

        let mut pieces: Vec<(usize, usize, Assignment, usize)> = Vec::new();
        for (s, &(i, j, asg)) in segs.iter().enumerate() {
            let (p, q) = (self.points[i], self.points[j]);
            let mut on: Vec<(f64, usize)> = vec![(0.0, i), (1.0, j)];
            for (k, &x) in self.points.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                let (d, t) = point_segment(x, p, q);
                if d <= tol && (x - p).norm() > tol && (x - q).norm() > tol {
                    on.push((t, k));
                }
            }
            on.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in on.windows(2) {
                pieces.push((w[0].1, w[1].1, asg, s));
            }
        }

        let mut kept: Vec<(usize, usize, Assignment)> = Vec::new();
        let mut piece_to_kept = Vec::with_capacity(pieces.len());
        for &(i, j, asg, _) in &pieces {
            match kept.iter().position(|&(a, b, _)| (a == i && b == j) || (a == j && b == i)) {
                Some(k) => {
                    if rank(asg) < rank(kept[k].2) {
                        kept[k].2 = asg;
                    }
                    piece_to_kept.push(k);
                }
                None => {
                    kept.push((i, j, asg));
                    piece_to_kept.push(kept.len() - 1);
                }
            }
        }

        let mut used = vec![false; self.points.len()];
        for &(i, j, _) in &kept {
            used[i] = true;
            used[j] = true;
        }
        let mut remap = vec![None; self.points.len()];
        let mut vertices = Vec::new();
        for (k, p) in self.points.iter().enumerate() {
            if used[k] {
                remap[k] = Some(vertices.len());
                vertices.push(*p);
            }
        }
        let creases: Vec<Crease> = kept
            .iter()
            .map(|&(i, j, a)| Crease::new(remap[i].unwrap_or(0), remap[j].unwrap_or(0), a))
            .collect();
        let pattern = CreasePattern::new(vertices, creases)?;

        let mut segment_creases = vec![Vec::new(); segs.len()];
        for (p, &(_, _, _, s)) in pieces.iter().enumerate() {
            segment_creases[s].push(piece_to_kept[p]);
        }
        Ok(BuiltPattern { pattern, segment_creases, point_vertex: remap })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_boundary_at_crossings() {
        let mut b = PatternBuilder::new(1e-9);
        let sq = [P2::new(0.0, 0.0), P2::new(2.0, 0.0), P2::new(2.0, 2.0), P2::new(0.0, 2.0)];
        for k in 0..4 {
            b.segment(sq[k], sq[(k + 1) % 4], Assignment::Boundary);
        }
        b.segment(P2::new(1.0, -1.0), P2::new(1.0, 1.0), Assignment::Valley);
        b.segment(P2::new(1.0, 1.0), P2::new(1.0, 2.0), Assignment::Valley);
        let r = b.build_with_map();
        // The valley pokes outside the square, so its lower end dangles.
        assert!(r.is_err());

        let mut b = PatternBuilder::new(1e-9);
        for k in 0..4 {
            b.segment(sq[k], sq[(k + 1) % 4], Assignment::Boundary);
        }
        let v = b.segment(P2::new(1.0, 0.0), P2::new(1.0, 2.0), Assignment::Valley);
        let built = b.build_with_map().unwrap();
        assert_eq!(built.pattern.faces().len(), 2);
        assert_eq!(built.pattern.creases().len(), 7);
        assert_eq!(built.segment_creases[v].len(), 1);
    }

    #[test]
    fn crossing_creases_are_an_error() {
        let mut b = PatternBuilder::new(1e-9);
        b.segment(P2::new(0.0, 0.0), P2::new(1.0, 1.0), Assignment::Valley);
        b.segment(P2::new(1.0, 0.0), P2::new(0.0, 1.0), Assignment::Mountain);
        assert!(matches!(b.build(), Err(PatternError::NonPlanar(0, 1))));
    }
}
