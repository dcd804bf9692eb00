//! Axis sums, θ regimes and double-line ratios of `DL(V, θ)` for
//! `V = (α, β, π−α, π−β)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use super::{
    canonical_star, check_symmetric, corner_fraction, mode_multipliers, representatives_star, DLMode,
    DoubleLineError, Sign,
};
use crate::kinematics::canonical_offset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Major,
    Minor,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Major => "major",
            Axis::Minor => "minor",
        })
    }
}

impl FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "major" => Ok(Axis::Major),
            "minor" => Ok(Axis::Minor),
            _ => Err(format!("unknown axis {s:?}, expected major or minor")),
        }
    }
}

/// Ratio of tangent-half fold angles along the two lines of one doubled
/// crease, normalized so the first entry is 1 unless it vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleLineRatio {
    pub first: f64,
    pub second: f64,
}

impl DoubleLineRatio {
    pub fn new(first: f64, second: f64) -> Self {
        if first != 0.0 {
            DoubleLineRatio { first: 1.0, second: second / first }
        } else if second != 0.0 {
            DoubleLineRatio { first: 0.0, second: 1.0 }
        } else {
            DoubleLineRatio { first: 0.0, second: 0.0 }
        }
    }

    /// `second / first`, infinite for `0 : 1`.
    pub fn k(&self) -> f64 {
        if self.first == 0.0 {
            f64::INFINITY
        } else {
            self.second / self.first
        }
    }

    /// Direction of `(first, second)` as a line through the origin, in `(−π/2, π/2]`.
    pub fn projective_angle(&self) -> f64 {
        wrap_half(self.second.atan2(self.first))
    }

    /// Distance used for tolerance checks: `|k − k'|` when both are finite,
    /// otherwise the angle between the two directions.
    pub fn distance(&self, other: &DoubleLineRatio) -> f64 {
        if self.first != 0.0 && other.first != 0.0 {
            (self.k() - other.k()).abs()
        } else {
            wrap_half(self.projective_angle() - other.projective_angle()).abs()
        }
    }
}

impl fmt::Display for DoubleLineRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.first, self.second)
    }
}

impl FromStr for DoubleLineRatio {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("ratio {s:?} must look like a:b"))?;
        let a: f64 = a.trim().parse().map_err(|_| format!("bad ratio entry {a:?}"))?;
        let b: f64 = b.trim().parse().map_err(|_| format!("bad ratio entry {b:?}"))?;
        if a == 0.0 && b == 0.0 {
            return Err("ratio 0:0 is meaningless".into());
        }
        Ok(DoubleLineRatio::new(a, b))
    }
}

fn wrap_half(a: f64) -> f64 {
    let mut x = a.rem_euclid(PI);
    if x > FRAC_PI_2 {
        x -= PI;
    }
    x
}

/// Behaviour of the pair sum `S` of one doubled axis as `t` runs over `ℝ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThetaRegime {
    /// Both lines fold the same way; `|S|` reaches `2π`.
    FullRange,
    /// The lines fold against each other; `|S| ≤ m < π`. `major` and
    /// `minor` are the extremes of each axis (`None` when that axis is full).
    Finite { m: f64, major: Option<f64>, minor: Option<f64> },
    /// One line of a pair never folds.
    Critical,
}

impl ThetaRegime {
    pub fn name(&self) -> &'static str {
        match self {
            ThetaRegime::FullRange => "FullRange",
            ThetaRegime::Finite { .. } => "Finite",
            ThetaRegime::Critical => "Critical",
        }
    }
}

impl fmt::Display for ThetaRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Multiplier pairs of the major and minor representative creases.
pub fn axis_pairs(mode: DLMode, alpha: f64, beta: f64, theta: f64) -> Result<((f64, f64), (f64, f64)), DoubleLineError> {
    let m = mode_multipliers(mode, alpha, beta, theta)?;
    let k = canonical_offset(&canonical_star(alpha, beta)?);
    let (maj, min) = representatives_star(&m, k);
    Ok((m.pairs[maj], m.pairs[min]))
}

fn pair_sum(pair: (f64, f64), t: f64) -> f64 {
    2.0 * (pair.0 * t).atan() + 2.0 * (pair.1 * t).atan()
}

/// `(S_major, S_minor)` at motion parameter `t`. The sum of two arctangents
/// is continuous in `t` and vanishes at `t = 0`.
pub fn axis_sums(alpha: f64, beta: f64, theta: f64, mode: DLMode, t: f64) -> Result<(f64, f64), DoubleLineError> {
    let (maj, min) = axis_pairs(mode, alpha, beta, theta)?;
    Ok((pair_sum(maj, t), pair_sum(min, t)))
}

pub fn double_line_ratio(mode: DLMode, axis: Axis, alpha: f64, beta: f64, theta: f64) -> Result<DoubleLineRatio, DoubleLineError> {
    let (maj, min) = axis_pairs(mode, alpha, beta, theta)?;
    let (a, b) = match axis {
        Axis::Major => maj,
        Axis::Minor => min,
    };
    if a == 0.0 && b == 0.0 {
        return Err(DoubleLineError::Ambiguous);
    }
    Ok(DoubleLineRatio::new(a, b))
}

/// Extreme value of `|2 atan(a t) + 2 atan(b t)|` over `t` when `ab < 0`,
/// attained at `t = 1/√(−ab)`.
pub fn pair_extremum(a: f64, b: f64) -> Option<f64> {
    if a * b >= 0.0 {
        return None;
    }
    let t = 1.0 / (-a * b).sqrt();
    Some(pair_sum((a, b), t).abs())
}

const ZERO_TOL: f64 = 1e-12;

pub fn classify_theta(mode: DLMode, alpha: f64, beta: f64, theta: f64) -> Result<ThetaRegime, DoubleLineError> {
    if !(alpha > 0.0 && beta > 0.0 && alpha + beta <= PI + 1e-12) {
        return Err(DoubleLineError::BadParams(format!(
            "need alpha, beta > 0 and alpha + beta <= pi, got {alpha}, {beta}"
        )));
    }
    let (maj, min) = axis_pairs(mode, alpha, beta, theta)?;
    if [maj.0, maj.1, min.0, min.1].iter().any(|x| x.abs() < ZERO_TOL) {
        return Ok(ThetaRegime::Critical);
    }
    let major = pair_extremum(maj.0, maj.1);
    let minor = pair_extremum(min.0, min.1);
    Ok(match (major, minor) {
        (None, None) => ThetaRegime::FullRange,
        (a, b) => ThetaRegime::Finite { m: a.unwrap_or(0.0).max(b.unwrap_or(0.0)), major: a, minor: b },
    })
}

/// Critical values of θ for a mode, where one line of a pair stops folding.
pub fn critical_thetas(mode: DLMode, alpha: f64, beta: f64) -> Result<(f64, f64), DoubleLineError> {
    Ok(match mode {
        DLMode::AI => (beta, PI - alpha),
        DLMode::AII => (alpha, PI - beta),
        DLMode::BI => (alpha, beta),
        DLMode::BII => (PI - beta, PI - alpha),
        m => return Err(DoubleLineError::BadParams(format!("mode {m} has no critical thetas"))),
    })
}

/// θ whose half-angle tangent is the geometric mean of the two critical
/// values; the minor double-line ratio there is `1 : 1`.
pub fn theta_for_even_minor(mode: DLMode, alpha: f64, beta: f64) -> Result<f64, DoubleLineError> {
    let (c1, c2) = critical_thetas(mode, alpha, beta)?;
    let prod = (c1 / 2.0).tan() * (c2 / 2.0).tan();
    if !(prod > 0.0) || !prod.is_finite() {
        return Err(DoubleLineError::BadParams(format!("critical values {c1}, {c2} give no geometric mean")));
    }
    Ok(2.0 * prod.sqrt().atan())
}

/// Smallest θ in `(0, π)` at which the ratio on `axis` equals `target`.
pub fn theta_for_ratio(mode: DLMode, axis: Axis, alpha: f64, beta: f64, target: DoubleLineRatio) -> Result<f64, DoubleLineError> {
    check_symmetric(mode, alpha, beta)?;
    if target.first == 0.0 && target.second == 0.0 {
        return Err(DoubleLineError::Unreachable("0:0".into()));
    }
    match axis {
        Axis::Minor if target.first != 0.0 && (target.k() + 1.0).abs() < 1e-12 => {
            return Err(DoubleLineError::Unreachable("a minor pair never folds 1:-1".into()))
        }
        Axis::Major if target.first != 0.0 && (target.k() - 1.0).abs() < 1e-12 => {
            return Err(DoubleLineError::Unreachable("a major pair folds 1:1 only at theta = 0 or pi".into()))
        }
        _ => {}
    }

    solve_theta(|theta| double_line_ratio(mode, axis, alpha, beta, theta).ok(), target)
}

/// Smallest θ in `(0, π)` at which `ratio(θ)` equals `target`: a scan of
/// the projective angle on a 1440-point grid, then bisection on each sign
/// change that is not a wrap-around.
pub(crate) fn solve_theta(ratio: impl Fn(f64) -> Option<DoubleLineRatio>, target: DoubleLineRatio) -> Result<f64, DoubleLineError> {
    let goal = target.projective_angle();
    let h = |theta: f64| -> Option<f64> { Some(wrap_half(ratio(theta)?.projective_angle() - goal)) };
    let finish = |theta: f64| -> Option<f64> { (ratio(theta)?.distance(&target) < 1e-9).then_some(theta) };

    const N: usize = 1440;
    let eps = 1e-7;
    let grid: Vec<f64> = (0..=N).map(|i| eps + (PI - 2.0 * eps) * i as f64 / N as f64).collect();
    let vals: Vec<Option<f64>> = grid.iter().map(|&x| h(x)).collect();
    for i in 0..N {
        let (Some(ha), Some(hb)) = (vals[i], vals[i + 1]) else { continue };
        if ha == 0.0 {
            if let Some(theta) = finish(grid[i]) {
                return Ok(theta);
            }
            continue;
        }
        if ha.signum() == hb.signum() || (ha - hb).abs() > FRAC_PI_2 {
            continue;
        }
        let (mut lo, mut hi, mut hlo) = (grid[i], grid[i + 1], ha);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let Some(hm) = h(mid) else { break };
            if hm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if hm.signum() == hlo.signum() {
                lo = mid;
                hlo = hm;
            } else {
                hi = mid;
            }
        }
        if let Some(theta) = finish(0.5 * (lo + hi)) {
            return Ok(theta);
        }
    }
    Err(DoubleLineError::NoRoot)
}

/// Every corner-sign sequence (named corner order) whose coefficients
/// multiply to 1 within `tol`, in lexicographic order with `+` first.
pub fn valid_sign_patterns(alpha: f64, beta: f64, theta: f64, tol: f64) -> Vec<[Sign; 4]> {
    let taus = [alpha, beta, PI - alpha, PI - beta];
    let mut out = Vec::new();
    for bits in 0..16u32 {
        let signs: [Sign; 4] =
            std::array::from_fn(|j| if bits & (1 << (3 - j)) == 0 { Sign::Plus } else { Sign::Minus });
        let mut num = 1.0;
        let mut den = 1.0;
        let mut ok = true;
        for j in 0..4 {
            match corner_fraction(signs[j], taus[j], theta) {
                Ok((n, d)) => {
                    num *= n;
                    den *= d;
                }
                Err(_) => ok = false,
            }
        }
        let scale = num.abs().max(den.abs());
        if ok && scale > 0.0 && (num - den).abs() <= tol * scale {
            out.push(signs);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{p_coeff, q_coeff};
    use approx::assert_abs_diff_eq;

    fn r(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn axis_sums_at_sixty() {
        let (maj, min) = axis_sums(r(60.0), r(60.0), r(90.0), DLMode::AI, 1.0).unwrap();
        assert_abs_diff_eq!(maj.to_degrees(), 90.0 + 2.0 * (2.0 - 3f64.sqrt()).powi(2).atan().to_degrees(), epsilon = 1e-9);
        assert_abs_diff_eq!(maj.to_degrees(), 98.213, epsilon = 1e-3);
        assert_abs_diff_eq!(min.to_degrees(), 60.0, epsilon = 1e-9);
        assert_abs_diff_eq!((min / 2.0).tan() / (maj / 2.0).tan(), 0.5, epsilon = 1e-12);
        assert_eq!(axis_sums(r(50.0), r(70.0), r(90.0), DLMode::AI, 0.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn minor_sum_returns_outside_band() {
        let (_, s) = axis_sums(r(50.0), r(70.0), r(60.0), DLMode::AI, 1e9).unwrap();
        assert!(s.abs() < 1e-6);
    }

    #[test]
    fn classify_examples() {
        let (a, b) = (r(50.0), r(70.0));
        assert_eq!(classify_theta(DLMode::AI, a, b, r(90.0)).unwrap(), ThetaRegime::FullRange);
        assert_eq!(classify_theta(DLMode::AI, a, b, r(70.0)).unwrap(), ThetaRegime::Critical);
        match classify_theta(DLMode::AI, a, b, r(60.0)).unwrap() {
            ThetaRegime::Finite { m, .. } => assert!(m < PI),
            other => panic!("expected Finite, got {other:?}"),
        }
    }

    #[test]
    fn ratios_follow_closed_form() {
        let (a, b, t) = (r(60.0), r(60.0), r(90.0));
        let maj = double_line_ratio(DLMode::AI, Axis::Major, a, b, t).unwrap();
        assert_abs_diff_eq!(maj.second, (2.0 - 3f64.sqrt()).powi(2), epsilon = 1e-12);
        let (a, b) = (r(50.0), r(70.0));
        let min = double_line_ratio(DLMode::AI, Axis::Minor, a, b, t).unwrap();
        assert_abs_diff_eq!(min.second, q_coeff(b, t).unwrap() / p_coeff(a, t).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn even_minor_example() {
        let (a, b) = (r(50.0), r(70.0));
        let th = theta_for_even_minor(DLMode::AI, a, b).unwrap();
        let oracle = 2.0 * ((35f64.to_radians().tan() * 65f64.to_radians().tan()).sqrt()).atan();
        assert_abs_diff_eq!(th, oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(th.to_degrees(), 101.55, epsilon = 0.02);
        assert_abs_diff_eq!(p_coeff(a, th).unwrap(), q_coeff(b, th).unwrap(), epsilon = 1e-12);
        let th_eq = theta_for_even_minor(DLMode::AI, r(40.0), r(40.0)).unwrap();
        assert_abs_diff_eq!(th_eq, FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn ratio_solver_examples() {
        let (a, b) = (r(50.0), r(70.0));
        let even = theta_for_ratio(DLMode::AI, Axis::Minor, a, b, DoubleLineRatio::new(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(even, theta_for_even_minor(DLMode::AI, a, b).unwrap(), epsilon = 1e-9);
        let zero = theta_for_ratio(DLMode::AI, Axis::Major, a, b, DoubleLineRatio::new(1.0, 0.0)).unwrap();
        assert!((zero - b).abs() < 1e-9 || (zero - (PI - a)).abs() < 1e-9);
        assert!(matches!(
            theta_for_ratio(DLMode::AI, Axis::Minor, a, b, DoubleLineRatio::new(1.0, -1.0)),
            Err(DoubleLineError::Unreachable(_))
        ));
        assert!(matches!(
            theta_for_ratio(DLMode::AI, Axis::Major, a, b, DoubleLineRatio::new(1.0, 1.0)),
            Err(DoubleLineError::Unreachable(_))
        ));
    }

    #[test]
    fn ratio_parsing() {
        let r: DoubleLineRatio = "2:1".parse().unwrap();
        assert_eq!(r, DoubleLineRatio { first: 1.0, second: 0.5 });
        assert!("1:".parse::<DoubleLineRatio>().is_err());
        assert!("0:0".parse::<DoubleLineRatio>().is_err());
    }
}
