use std::f64::consts::{PI, TAU};

use super::{CreaseId, CreasePattern, PatternError, VertexId, ANGLE_TOL};
use crate::geom::wrap_tau;

/// Sector angles around one vertex, counterclockwise.
///
/// For an interior vertex, sector `i` lies between crease `i` and crease
/// `i + 1 (mod n)`. A boundary vertex has one fewer sector than creases and
/// starts at the crease following the gap in its star.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexStar {
    sectors: Vec<f64>,
    creases: Vec<CreaseId>,
    interior: bool,
}

impl VertexStar {
    /// Interior star from sector angles alone; creases are numbered `0..n`.
    pub fn from_sectors(sectors: Vec<f64>) -> Result<Self, PatternError> {
        let creases = (0..sectors.len()).collect();
        Self::interior(sectors, creases)
    }

    /// Interior star from degrees, convenient in tests and the CLI.
    pub fn from_degrees(sectors: &[f64]) -> Result<Self, PatternError> {
        Self::from_sectors(sectors.iter().map(|d| d.to_radians()).collect())
    }

    pub fn interior(sectors: Vec<f64>, creases: Vec<CreaseId>) -> Result<Self, PatternError> {
        if sectors.len() < 2 || creases.len() != sectors.len() {
            return Err(PatternError::InvalidStar(format!(
                "{} sectors for {} creases",
                sectors.len(),
                creases.len()
            )));
        }
        check_sectors(&sectors)?;
        let sum: f64 = sectors.iter().sum();
        if (sum - TAU).abs() > ANGLE_TOL {
            return Err(PatternError::InvalidStar(format!("sectors sum to {sum}, not 2pi")));
        }
        Ok(VertexStar { sectors, creases, interior: true })
    }

    pub fn boundary(sectors: Vec<f64>, creases: Vec<CreaseId>) -> Result<Self, PatternError> {
        if creases.len() != sectors.len() + 1 {
            return Err(PatternError::InvalidStar(format!(
                "boundary star with {} sectors needs {} creases",
                sectors.len(),
                sectors.len() + 1
            )));
        }
        check_sectors(&sectors)?;
        Ok(VertexStar { sectors, creases, interior: false })
    }

    pub fn degree(&self) -> usize {
        self.creases.len()
    }

    pub fn sectors(&self) -> &[f64] {
        &self.sectors
    }

    pub fn creases(&self) -> &[CreaseId] {
        &self.creases
    }

    pub fn is_interior(&self) -> bool {
        self.interior
    }

    pub fn angle_sum(&self) -> f64 {
        self.sectors.iter().sum()
    }

    /// Crease directions measured from crease 0, counterclockwise.
    pub fn azimuths(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.degree());
        let mut acc = 0.0;
        out.push(0.0);
        for s in self.sectors.iter().take(self.degree() - 1) {
            acc += s;
            out.push(acc);
        }
        out
    }

    /// The same interior star listed from crease `k`.
    pub fn rotated(&self, k: usize) -> VertexStar {
        let n = self.degree();
        let k = k % n;
        let mut sectors = self.sectors[k..].to_vec();
        sectors.extend_from_slice(&self.sectors[..k]);
        let mut creases = self.creases[k..].to_vec();
        creases.extend_from_slice(&self.creases[..k]);
        VertexStar { sectors, creases, interior: self.interior }
    }
}

fn check_sectors(sectors: &[f64]) -> Result<(), PatternError> {
    for (i, &s) in sectors.iter().enumerate() {
        if !(s > 0.0 && s < TAU) {
            return Err(PatternError::InvalidStar(format!("sector {i} = {s} outside (0, 2pi)")));
        }
    }
    Ok(())
}

/// Star of a pattern vertex, listed from its lowest crease id.
pub fn vertex_star(pattern: &CreasePattern, v: VertexId) -> Result<VertexStar, PatternError> {
    if v >= pattern.vertices().len() {
        return Err(PatternError::UnknownVertex(v));
    }
    let ring = pattern.incident(v);
    let n = ring.len();
    if n == 0 {
        return Err(PatternError::InvalidStar(format!("vertex {v} has no creases")));
    }
    let origin = pattern.vertices()[v];
    let mut az = Vec::with_capacity(n);
    for &e in ring {
        let d = pattern.vertices()[pattern.other_end(e, v)] - origin;
        if d.norm() == 0.0 {
            return Err(PatternError::DegenerateCrease(e));
        }
        az.push(d.y.atan2(d.x));
    }
    let sector = |k: usize| {
        if n == 1 {
            TAU
        } else {
            let s = wrap_tau(az[(k + 1) % n] - az[k]);
            if s == 0.0 {
                TAU
            } else {
                s
            }
        }
    };
    // Sector k exists when a face lies to the left of crease k leaving v.
    let present = |k: usize| {
        let e = ring[k];
        let side = if pattern.creases()[e].vertices[0] == v { 0 } else { 1 };
        pattern.crease_faces()[e][side].is_some()
    };

    if pattern.is_interior(v) {
        let start = (0..n).min_by_key(|&k| ring[k]).unwrap_or(0);
        let order: Vec<usize> = (0..n).map(|i| (start + i) % n).collect();
        let sectors = order.iter().map(|&k| sector(k)).collect();
        let creases = order.iter().map(|&k| ring[k]).collect();
        return VertexStar::interior(sectors, creases);
    }

    let gaps: Vec<usize> = (0..n).filter(|&k| !present(k)).collect();
    if gaps.len() != 1 {
        return Err(PatternError::NonManifoldVertex(v));
    }
    let start = (gaps[0] + 1) % n;
    let order: Vec<usize> = (0..n).map(|i| (start + i) % n).collect();
    let sectors = order[..n - 1].iter().map(|&k| sector(k)).collect();
    let creases = order.iter().map(|&k| ring[k]).collect();
    VertexStar::boundary(sectors, creases)
}

/// Degree-4 flat-foldability: opposite sectors supplementary.
pub fn is_flat_foldable_deg4(star: &VertexStar) -> Result<bool, PatternError> {
    if star.sectors().len() != 4 || star.degree() != 4 {
        return Err(PatternError::WrongDegree { expected: "4".into(), got: star.degree() });
    }
    let s = star.sectors();
    Ok((s[0] + s[2] - PI).abs() <= ANGLE_TOL && (s[1] + s[3] - PI).abs() <= ANGLE_TOL)
}

/// `|Σ (−1)^i σ_i|` over the sectors of an interior vertex of even degree.
pub fn kawasaki_residual(star: &VertexStar) -> Result<f64, PatternError> {
    if star.degree() % 2 == 1 {
        return Err(PatternError::WrongDegree { expected: "even".into(), got: star.degree() });
    }
    if !star.is_interior() {
        return Err(PatternError::InvalidStar("Kawasaki residual needs an interior vertex".into()));
    }
    let alt: f64 = star
        .sectors()
        .iter()
        .enumerate()
        .map(|(i, s)| if i % 2 == 0 { *s } else { -*s })
        .sum();
    Ok(alt.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crease_pattern::{Assignment, Crease};
    use crate::geom::P2;
    use approx::assert_abs_diff_eq;

    #[test]
    fn flat_foldability_examples() {
        assert!(is_flat_foldable_deg4(&VertexStar::from_degrees(&[60.0, 80.0, 120.0, 100.0]).unwrap()).unwrap());
        assert!(is_flat_foldable_deg4(&VertexStar::from_degrees(&[90.0; 4]).unwrap()).unwrap());
        assert!(!is_flat_foldable_deg4(&VertexStar::from_degrees(&[60.0, 120.0, 60.0, 120.0]).unwrap()).unwrap());
        let six = VertexStar::from_degrees(&[60.0; 6]).unwrap();
        assert!(is_flat_foldable_deg4(&six).is_err());
    }

    #[test]
    fn kawasaki_examples() {
        let k = |d: &[f64]| kawasaki_residual(&VertexStar::from_degrees(d).unwrap()).unwrap();
        assert_abs_diff_eq!(k(&[60.0, 80.0, 120.0, 100.0]), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(k(&[45.0; 8]), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(k(&[60.0, 120.0, 60.0, 120.0]), 2.0 * PI / 3.0, epsilon = 1e-12);
        assert!(kawasaki_residual(&VertexStar::from_degrees(&[120.0; 3]).unwrap()).is_err());
    }

    #[test]
    fn star_rejects_bad_sums() {
        assert!(VertexStar::from_degrees(&[90.0, 90.0, 90.0]).is_err());
        assert!(VertexStar::from_degrees(&[0.0, 180.0, 180.0]).is_err());
    }

    #[test]
    fn fig2_star_from_azimuths() {
        let (a, b) = (50f64.to_radians(), 70f64.to_radians());
        let az = [0.0, a, a + b, a + b + (PI - a)];
        let mut vertices = vec![P2::origin()];
        for phi in az {
            vertices.push(P2::new(phi.cos(), phi.sin()));
        }
        let mut creases: Vec<Crease> = (1..=4).map(|k| Crease::new(0, k, Assignment::Unassigned)).collect();
        for k in 0..4 {
            creases.push(Crease::new(1 + k, 1 + (k + 1) % 4, Assignment::Boundary));
        }
        let p = CreasePattern::new(vertices, creases).unwrap();
        let s = vertex_star(&p, 0).unwrap();
        let want = [a, b, PI - a, PI - b];
        for (x, y) in s.sectors().iter().zip(want) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
        assert_eq!(s.creases(), &[0, 1, 2, 3]);
        assert!(matches!(vertex_star(&p, 9), Err(PatternError::UnknownVertex(9))));
        let corner = vertex_star(&p, 1).unwrap();
        assert!(!corner.is_interior());
    }
}
