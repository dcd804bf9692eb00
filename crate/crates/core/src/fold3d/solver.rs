//! Newton iteration on stacked vertex closure residuals with one pinned
//! driver crease, plus step-controlled continuation along the driver.

use nalgebra::{DMatrix, DVector};

use super::{vertex_closure_matrix, FoldError};
use crate::crease_pattern::{vertex_star, CreaseId, CreasePattern, FoldAngleVector, VertexStar};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Largest vertex residual accepted as converged.
    pub tol: f64,
    pub max_iter: usize,
    pub fd_step: f64,
    pub min_step: f64,
    pub max_step: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-10, max_iter: 50, fd_step: 1e-7, min_step: 1e-4, max_step: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub angles: FoldAngleVector,
    pub residual: f64,
    pub iterations: usize,
}

struct System {
    stars: Vec<VertexStar>,
    unknowns: Vec<CreaseId>,
}

impl System {
    fn new(pattern: &CreasePattern, driver: CreaseId) -> Result<Self, FoldError> {
        if driver >= pattern.creases().len() || pattern.creases()[driver].assignment.is_boundary() {
            return Err(FoldError::BadDriver(driver));
        }
        let mut stars = Vec::new();
        let mut used = vec![false; pattern.creases().len()];
        for v in pattern.interior_vertices() {
            let star = vertex_star(pattern, v)?;
            for &e in star.creases() {
                used[e] = true;
            }
            stars.push(star);
        }
        if !used[driver] {
            return Err(FoldError::BadDriver(driver));
        }
        let unknowns = (0..used.len()).filter(|&e| used[e] && e != driver).collect();
        Ok(System { stars, unknowns })
    }

    fn residual(&self, angles: &[f64]) -> DVector<f64> {
        let mut r = DVector::zeros(9 * self.stars.len());
        for (k, star) in self.stars.iter().enumerate() {
            let a: Vec<f64> = star.creases().iter().map(|&e| angles[e]).collect();
            let m = vertex_closure_matrix(star, &a);
            for (j, x) in m.iter().enumerate() {
                r[9 * k + j] = *x;
            }
        }
        r
    }

    fn max_vertex_residual(&self, r: &DVector<f64>) -> f64 {
        (0..self.stars.len()).map(|k| r.rows(9 * k, 9).norm()).fold(0.0, f64::max)
    }
}

/// Solves for all fold angles with `driver` pinned at `target`, starting
/// from `initial`. Creases not incident to an interior vertex keep their
/// initial angles.
pub fn solve_fold_angles(
    pattern: &CreasePattern,
    driver: CreaseId,
    target: f64,
    initial: &FoldAngleVector,
    opts: &SolveOptions,
) -> Result<Solution, FoldError> {
    initial.check(pattern)?;
    let sys = System::new(pattern, driver)?;
    newton(&sys, driver, target, initial.0.clone(), opts)
}

fn newton(sys: &System, driver: CreaseId, target: f64, mut x: Vec<f64>, opts: &SolveOptions) -> Result<Solution, FoldError> {
    x[driver] = target;
    let mut r = sys.residual(&x);
    let mut res = sys.max_vertex_residual(&r);
    let mut cond = 1.0;
    for it in 0..=opts.max_iter {
        if res < opts.tol {
            // The difference Jacobian limits each step's gain, so a few
            // more steps are taken while they still halve the residual.
            for _ in 0..3 {
                let Ok(step) = newton_step(sys, &mut x, &r, opts).map(|(s, _)| s) else { break };
                let trial: Vec<f64> = apply(sys, &x, &step);
                let rt = sys.residual(&trial);
                let rest = sys.max_vertex_residual(&rt);
                if !(rest < 0.5 * res) {
                    break;
                }
                (x, r, res) = (trial, rt, rest);
            }
            return Ok(Solution { angles: FoldAngleVector(x), residual: res, iterations: it });
        }
        if it == opts.max_iter || sys.unknowns.is_empty() {
            break;
        }
        let (step, c) = newton_step(sys, &mut x, &r, opts)?;
        cond = c;
        x = apply(sys, &x, &step);
        r = sys.residual(&x);
        res = sys.max_vertex_residual(&r);
        if !res.is_finite() {
            break;
        }
    }
    if cond > 1e12 {
        Err(FoldError::Singular(cond))
    } else {
        Err(FoldError::NoConvergence { iterations: opts.max_iter, residual: res })
    }
}

/// Least-squares Newton step from a forward-difference Jacobian, with the
/// Jacobian's condition number.
fn newton_step(sys: &System, x: &mut [f64], r: &DVector<f64>, opts: &SolveOptions) -> Result<(DVector<f64>, f64), FoldError> {
    let mut jac = DMatrix::zeros(r.len(), sys.unknowns.len());
    for (c, &e) in sys.unknowns.iter().enumerate() {
        let saved = x[e];
        x[e] = saved + opts.fd_step;
        let rp = sys.residual(x);
        x[e] = saved;
        jac.set_column(c, &((rp - r) / opts.fd_step));
    }
    let svd = jac.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let step = svd.solve(&(-r), 1e-12 * smax.max(1e-300)).map_err(|_| FoldError::Singular(cond))?;
    Ok((step, cond))
}

fn apply(sys: &System, x: &[f64], step: &DVector<f64>) -> Vec<f64> {
    let mut out = x.to_vec();
    for (c, &e) in sys.unknowns.iter().enumerate() {
        out[e] += step[c];
    }
    out
}

/// Largest Newton correction accepted during continuation; bigger jumps
/// usually land on another branch.
const MAX_CORRECTION: f64 = 0.2;

fn max_jump(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Moves the driver from its value in `initial` to `target`, halving the
/// step on failure and doubling it after fast convergence. Returns every
/// accepted state, starting with the converged initial one.
pub fn continuation(
    pattern: &CreasePattern,
    driver: CreaseId,
    target: f64,
    initial: &FoldAngleVector,
    opts: &SolveOptions,
) -> Result<Vec<Solution>, FoldError> {
    initial.check(pattern)?;
    let sys = System::new(pattern, driver)?;
    let start = initial[driver];
    let first = newton(&sys, driver, start, initial.0.clone(), opts)?;
    let mut path = vec![first];
    let mut step = 0.5 * opts.max_step;
    let dir = (target - start).signum();
    let mut current = start;
    while (target - current).abs() > 1e-15 {
        let next = if (target - current).abs() <= step { target } else { current + dir * step };
        let last = &path[path.len() - 1];
        // Secant predictor; from the first state the flat pattern serves as
        // the previous point, which selects the branch through the origin.
        let zeros = FoldAngleVector::zeros(last.angles.len());
        let prev = if path.len() >= 2 { &path[path.len() - 2].angles } else { &zeros };
        let span = last.angles[driver] - prev[driver];
        let s = if span != 0.0 { (next - last.angles[driver]) / span } else { 0.0 };
        let guess: Vec<f64> = last.angles.iter().zip(prev.iter()).map(|(a, b)| a + s * (a - b)).collect();
        match newton(&sys, driver, next, guess.clone(), opts) {
            Ok(sol) if max_jump(&sol.angles, &guess) < MAX_CORRECTION => {
                if sol.iterations <= 3 {
                    step = (2.0 * step).min(opts.max_step);
                }
                current = next;
                path.push(sol);
            }
            _ => {
                step *= 0.5;
                if step < opts.min_step {
                    return Err(FoldError::Stalled(current));
                }
            }
        }
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crease_pattern::{Assignment, PatternBuilder};
    use crate::geom::P2;
    use crate::kinematics::{fold_angles_at, mode_vector, FoldMode};

    fn single_vertex(deg: &[f64]) -> (CreasePattern, VertexStar) {
        let mut b = PatternBuilder::new(1e-9);
        let mut acc = 0.0f64;
        let mut ends = Vec::new();
        for s in deg {
            let a = acc.to_radians();
            ends.push(P2::new(a.cos(), a.sin()));
            acc += s;
        }
        for &e in &ends {
            b.segment(P2::origin(), e, Assignment::Unassigned);
        }
        for i in 0..ends.len() {
            b.segment(ends[i], ends[(i + 1) % ends.len()], Assignment::Boundary);
        }
        let p = b.build().unwrap();
        let v = p.interior_vertices()[0];
        (p.clone(), vertex_star(&p, v).unwrap())
    }

    #[test]
    fn continuation_tracks_closed_form() {
        let (p, star) = single_vertex(&[60.0, 80.0, 120.0, 100.0]);
        let mv = mode_vector(&star, FoldMode::A).unwrap();
        let mut init = FoldAngleVector::zeros(p.creases().len());
        let seed = fold_angles_at(&star, FoldMode::A, 1e-6).unwrap();
        for (k, &e) in star.creases().iter().enumerate() {
            init[e] = seed[k];
        }
        let driver = star.creases()[0];
        let path = continuation(&p, driver, 170f64.to_radians(), &init, &SolveOptions::default()).unwrap();
        assert!(path.len() > 10);
        for sol in &path {
            let t = (sol.angles[driver] / 2.0).tan() / mv.m[0];
            let want = fold_angles_at(&star, FoldMode::A, t).unwrap();
            for (k, &e) in star.creases().iter().enumerate() {
                assert!((sol.angles[e] - want[k]).abs() < 1e-9, "{} vs {}", sol.angles[e], want[k]);
            }
        }
    }

    #[test]
    fn degree_three_vertex_is_rigid() {
        let (p, star) = single_vertex(&[100.0, 120.0, 140.0]);
        let mut init = FoldAngleVector::zeros(p.creases().len());
        for &e in star.creases() {
            init[e] = 0.3;
        }
        let r = solve_fold_angles(&p, star.creases()[0], 0.6, &init, &SolveOptions::default());
        assert!(r.is_err());
    }

    #[test]
    fn boundary_driver_rejected() {
        let (p, _) = single_vertex(&[90.0; 4]);
        let e = p.creases().iter().position(|c| c.assignment.is_boundary()).unwrap();
        let z = FoldAngleVector::zeros(p.creases().len());
        assert!(matches!(solve_fold_angles(&p, e, 0.1, &z, &SolveOptions::default()), Err(FoldError::BadDriver(_))));
    }
}
