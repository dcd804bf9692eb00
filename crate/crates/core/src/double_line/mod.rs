//! Double-line patterns `DL(V, θ)`: every crease of a vertex `V` is replaced
//! by two parallel creases joined by a central polygon whose sides meet them
//! at angle `θ`.
//!
//! Kinematics are computed from the speed coefficients at the polygon
//! corners. Each corner carries a sign: case `−` has coefficient
//! `−1/p(τ, θ)` and case `+` has `−q(τ, θ)`, where `τ` is the interior angle
//! of the polygon at that corner. A sign sequence is a valid mode when the
//! coefficients multiply to 1 around the polygon.

mod analysis;
mod construct;

pub use analysis::{
    axis_pairs, axis_sums, classify_theta, critical_thetas, double_line_ratio, theta_for_even_minor, pair_extremum, theta_for_ratio, valid_sign_patterns,
    Axis, DoubleLineRatio, ThetaRegime,
};
pub(crate) use analysis::solve_theta;
pub use construct::{build_dl, construct_dl, corresponding_fold_angles, fit_radii, DoubleLine, DoubleLineParams, Pairing};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::crease_pattern::{PatternError, VertexStar};
use crate::kinematics::{canonical_offset, mode_vector, p_coeff, q_coeff, FoldMode, KinematicsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DoubleLineError {
    #[error("corner {corner}: case {sign} has a pole at this theta")]
    Pole { corner: usize, sign: Sign },
    #[error("corner coefficients multiply to {0}, not 1")]
    ProductNotOne(f64),
    #[error("multipliers are not determined uniquely by the corner signs")]
    Ambiguous,
    #[error("corner {0}: no vertex mode realizes the requested case")]
    NoVertexMode(usize),
    #[error("mode {0} needs alpha = beta or alpha = pi - beta")]
    SymmetryRequired(DLMode),
    #[error("polygon sides {0} and {1} are parallel")]
    DegeneratePolygon(usize, usize),
    #[error("corner {0} falls outside its sector; radii too small or theta too extreme")]
    CornerInversion(usize),
    #[error("no radii keep every corner inside its sector (best margin {0:.3e})")]
    NoRadii(f64),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("target ratio is unreachable: {0}")]
    Unreachable(String),
    #[error("no theta in (0, pi) attains the target ratio")]
    NoRoot,
    #[error("pairing incomplete: {0}")]
    Pairing(String),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Formats a sign sequence as `(+-+-)`.
pub fn format_signs(signs: &[Sign]) -> String {
    let mut s = String::from("(");
    s.extend(signs.iter().map(|x| x.symbol()));
    s.push(')');
    s
}

/// Parses `+-+-`, optionally wrapped in parentheses or separated by spaces.
pub fn parse_signs(text: &str) -> Result<Vec<Sign>, String> {
    text.chars()
        .filter(|c| !matches!(c, '(' | ')' | ' ' | ','))
        .map(|c| match c {
            '+' => Ok(Sign::Plus),
            '-' | '−' => Ok(Sign::Minus),
            other => Err(format!("unexpected character {other:?} in sign sequence")),
        })
        .collect()
}

/// Named modes of a double-lined degree-4 vertex. Corner signs are listed
/// with corner 0 in the sector `π − α` and corner 1 in `π − β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DLMode {
    AI,
    AII,
    BI,
    BII,
    SymPlus,
    SymMinus,
}

impl DLMode {
    pub const GENERIC: [DLMode; 4] = [DLMode::AI, DLMode::AII, DLMode::BI, DLMode::BII];
    pub const ALL: [DLMode; 6] = [DLMode::AI, DLMode::AII, DLMode::BI, DLMode::BII, DLMode::SymPlus, DLMode::SymMinus];

    pub fn signs(self) -> [Sign; 4] {
        use Sign::{Minus as M, Plus as P};
        match self {
            DLMode::AI => [M, P, P, M],
            DLMode::AII => [P, M, M, P],
            DLMode::BI => [P, P, M, M],
            DLMode::BII => [M, M, P, P],
            DLMode::SymPlus => [P, M, P, M],
            DLMode::SymMinus => [M, P, M, P],
        }
    }

    pub fn from_signs(signs: &[Sign]) -> Option<DLMode> {
        DLMode::ALL.into_iter().find(|m| m.signs() == signs)
    }

    pub fn label(self) -> &'static str {
        match self {
            DLMode::AI => "a-I",
            DLMode::AII => "a-II",
            DLMode::BI => "b-I",
            DLMode::BII => "b-II",
            DLMode::SymPlus => "sym+",
            DLMode::SymMinus => "sym-",
        }
    }

    /// Mode of the original vertex that this mode reproduces.
    pub fn family(self) -> Option<FoldMode> {
        match self {
            DLMode::AI | DLMode::AII => Some(FoldMode::A),
            DLMode::BI | DLMode::BII => Some(FoldMode::B),
            _ => None,
        }
    }

    pub fn is_symmetric(self) -> bool {
        matches!(self, DLMode::SymPlus | DLMode::SymMinus)
    }
}

impl fmt::Display for DLMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for DLMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        DLMode::ALL
            .into_iter()
            .find(|m| m.label().to_ascii_lowercase() == key)
            .ok_or_else(|| format!("unknown double-line mode {s:?}, expected a-I, a-II, b-I, b-II, sym+ or sym-"))
    }
}

/// Tolerance on `|α − β|` and `|α + β − π|` for the symmetric modes.
pub const SYMMETRY_TOL: f64 = 1e-9;

pub(crate) fn check_symmetric(mode: DLMode, alpha: f64, beta: f64) -> Result<(), DoubleLineError> {
    if mode.is_symmetric() && (alpha - beta).abs() >= SYMMETRY_TOL && (alpha + beta - PI).abs() >= SYMMETRY_TOL {
        return Err(DoubleLineError::SymmetryRequired(mode));
    }
    Ok(())
}

/// Corner coefficient at interior polygon angle `tau` as a fraction
/// `(numerator, denominator)`, so poles stay representable.
pub fn corner_fraction(sign: Sign, tau: f64, theta: f64) -> Result<(f64, f64), KinematicsError> {
    let snap = |x: f64| if x.abs() < 1e-14 { 0.0 } else { x };
    Ok(match sign {
        Sign::Minus => (-1.0, snap(p_coeff(tau, theta)?)),
        Sign::Plus => (snap(-q_coeff(tau, theta)?), 1.0),
    })
}

/// Star of a flat-foldable vertex in its canonical listing `(α, β, π−α, π−β)`.
pub fn canonical_star(alpha: f64, beta: f64) -> Result<VertexStar, DoubleLineError> {
    if !(alpha > 0.0 && beta > 0.0 && alpha < PI && beta < PI) {
        return Err(DoubleLineError::BadParams(format!("alpha = {alpha}, beta = {beta} must lie in (0, pi)")));
    }
    Ok(VertexStar::from_sectors(vec![alpha, beta, PI - alpha, PI - beta])?)
}

/// Speed coefficients `(p_0, p_1, p_2, p_3)` at the four polygon corners of
/// `DL(V, θ)` for `V = (α, β, π−α, π−β)`.
pub fn corner_coefficients(mode: DLMode, alpha: f64, beta: f64, theta: f64) -> Result<[f64; 4], DoubleLineError> {
    check_symmetric(mode, alpha, beta)?;
    let taus = [alpha, beta, PI - alpha, PI - beta];
    let mut out = [0.0; 4];
    for (j, sign) in mode.signs().into_iter().enumerate() {
        let (n, d) = corner_fraction(sign, taus[j], theta)?;
        if d == 0.0 {
            return Err(DoubleLineError::Pole { corner: j, sign });
        }
        out[j] = n / d;
    }
    Ok(out)
}

/// Tangent-half-angle multipliers of every crease of a double-lined vertex.
///
/// Index `i` refers to crease `i` of the original star. Corner `i` sits in
/// sector `i`; side `i` crosses crease `i` and joins corners `i − 1` and `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DlMultipliers {
    pub sides: Vec<f64>,
    /// `(from corner i − 1, from corner i)` for the two lines doubling crease `i`.
    pub pairs: Vec<(f64, f64)>,
    pub corner_modes: Vec<FoldMode>,
}

impl DlMultipliers {
    pub fn scale(&mut self, k: f64) {
        for s in &mut self.sides {
            *s *= k;
        }
        for p in &mut self.pairs {
            p.0 *= k;
            p.1 *= k;
        }
    }
}

/// Star of the corner vertex in sector `sigma`, listed as
/// `[line along crease i, line along crease i+1, side i+1, side i]`.
pub(crate) fn corner_star(sigma: f64, theta: f64) -> Result<VertexStar, PatternError> {
    VertexStar::from_sectors(vec![sigma, PI - theta, PI - sigma, theta])
}

/// Solves for all multipliers of `DL(V, θ)` given one sign per corner in
/// star order. Any star works; the corner signs must close around the
/// polygon. The result is scaled so the largest line multiplier is 1.
pub fn dl_multipliers(sectors: &[f64], theta: f64, signs: &[Sign]) -> Result<DlMultipliers, DoubleLineError> {
    let n = sectors.len();
    if signs.len() != n || n < 2 {
        return Err(DoubleLineError::BadParams(format!("{} signs for {} corners", signs.len(), n)));
    }
    if !(theta > 0.0 && theta < PI) {
        return Err(DoubleLineError::BadParams(format!("theta = {theta} outside (0, pi)")));
    }

    let mut fracs = Vec::with_capacity(n);
    for (i, (&sigma, &sign)) in sectors.iter().zip(signs).enumerate() {
        let tau = PI - sigma;
        let f = corner_fraction(sign, tau, theta).map_err(|_| DoubleLineError::Pole { corner: i, sign })?;
        fracs.push(f);
    }
    let num: f64 = fracs.iter().map(|f| f.0).product();
    let den: f64 = fracs.iter().map(|f| f.1).product();
    // Near a critical θ one factor is a small difference of order-one
    // terms; its absolute rounding error sets the achievable tolerance.
    let cond: f64 = fracs.iter().flat_map(|f| [f.0, f.1]).filter(|x| *x != 0.0).map(|x| 1e-15 / x.abs()).sum();
    if (num - den).abs() > (1e-9 + cond) * num.abs().max(den.abs()) {
        return Err(DoubleLineError::ProductNotOne(if den != 0.0 { num / den } else { f64::INFINITY }));
    }

    // Pick the vertex mode at each corner whose side-to-side coefficient
    // matches the requested case.
    let mut corner_vectors = Vec::with_capacity(n);
    let mut corner_modes = Vec::with_capacity(n);
    for (i, &sigma) in sectors.iter().enumerate() {
        let star = corner_star(sigma, theta)?;
        let (fn_, fd) = fracs[i];
        let mut best: Option<(f64, FoldMode, [f64; 4])> = None;
        for mode in [FoldMode::A, FoldMode::B] {
            let Ok(mv) = mode_vector(&star, mode) else { continue };
            let (a, b) = (mv.m[3], mv.m[2]);
            // side_{i+1} / side_i = fn_ / fd  <=>  b * fd = a * fn_
            let scale = (a.abs() + b.abs()) * (fn_.abs() + fd.abs());
            let err = (b * fd - a * fn_).abs() / scale.max(1e-300);
            if best.as_ref().is_none_or(|(e, _, _)| err < *e) {
                best = Some((err, mode, mv.m));
            }
        }
        match best {
            Some((err, mode, m)) if err < 1e-9 => {
                corner_vectors.push(m);
                corner_modes.push(mode);
            }
            _ => return Err(DoubleLineError::NoVertexMode(i)),
        }
    }

    // Unknowns: sides 0..n, then line (i, from corner i-1) at n + 2i and
    // (i, from corner i) at n + 2i + 1. Each corner makes its four creases
    // proportional to its mode vector.
    let unknowns = 3 * n;
    let side = |i: usize| i % n;
    let right = |i: usize| n + 2 * (i % n);
    let left = |i: usize| n + 2 * (i % n) + 1;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(3 * n);
    for i in 0..n {
        let m = corner_vectors[i];
        let vars = [left(i), right(i + 1), side(i + 1), side(i)];
        let r = (0..4).max_by(|&a, &b| m[a].abs().total_cmp(&m[b].abs())).unwrap_or(0);
        for j in 0..4 {
            if j == r {
                continue;
            }
            let mut row = vec![0.0; unknowns];
            row[vars[j]] += m[r];
            row[vars[r]] -= m[j];
            rows.push(row);
        }
    }
    let a = DMatrix::from_fn(rows.len(), unknowns, |i, j| rows[i][j]);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.ok_or(DoubleLineError::Ambiguous)?;
    let mut sv: Vec<(f64, usize)> = svd.singular_values.iter().copied().enumerate().map(|(i, s)| (s, i)).collect();
    sv.sort_by(|x, y| x.0.total_cmp(&y.0));
    let smax = sv.last().map(|x| x.0).unwrap_or(1.0).max(1e-300);
    if sv.len() < unknowns || sv[0].0 > 1e-9 * smax {
        return Err(DoubleLineError::ProductNotOne(f64::NAN));
    }
    if sv.len() > 1 && sv[1].0 < 1e-9 * smax {
        return Err(DoubleLineError::Ambiguous);
    }
    let x: Vec<f64> = v_t.row(sv[0].1).iter().copied().collect();

    let lines = (0..n).flat_map(|i| [x[right(i)], x[left(i)]]);
    let peak = lines.fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
    if peak == 0.0 {
        return Err(DoubleLineError::Ambiguous);
    }
    let clean = |v: f64| {
        let y = v / peak;
        if y.abs() < 1e-13 {
            0.0
        } else {
            y
        }
    };
    Ok(DlMultipliers {
        sides: (0..n).map(|i| clean(x[side(i)])).collect(),
        pairs: (0..n).map(|i| (clean(x[right(i)]), clean(x[left(i)]))).collect(),
        corner_modes,
    })
}

/// Multipliers of a named mode for `V = (α, β, π−α, π−β)`, in that star's
/// crease order, with the major representative's leading entry `+1`.
pub fn mode_multipliers(mode: DLMode, alpha: f64, beta: f64, theta: f64) -> Result<DlMultipliers, DoubleLineError> {
    check_symmetric(mode, alpha, beta)?;
    let star = canonical_star(alpha, beta)?;
    star_mode_multipliers(&star, mode, theta)
}

/// Multipliers of a named mode on any flat-foldable degree-4 star.
pub fn star_mode_multipliers(star: &VertexStar, mode: DLMode, theta: f64) -> Result<DlMultipliers, DoubleLineError> {
    let k = canonical_offset(star);
    let paper = mode.signs();
    // Star corner i is canonical corner i - k, which is named corner i - k + 2.
    let signs: Vec<Sign> = (0..4).map(|i| paper[(i + 6 - k) % 4]).collect();
    let mut m = dl_multipliers(star.sectors(), theta, &signs)?;
    let (maj, _) = representatives_star(&m, k);
    let (a, b) = m.pairs[maj];
    let lead = if a.abs() >= b.abs() { a } else { b };
    if lead == 0.0 {
        return Err(DoubleLineError::Ambiguous);
    }
    m.scale(1.0 / lead);
    Ok(m)
}

/// Representative creases `(major, minor)` in star order.
///
/// When the fastest line doubles canonical crease 0 or 2, the major
/// representative is canonical crease 0 and the minor one crease 3;
/// otherwise they are creases 3 and 2.
pub(crate) fn representatives_star(m: &DlMultipliers, k: usize) -> (usize, usize) {
    let fastest = (0..4)
        .max_by(|&a, &b| {
            let fa = m.pairs[a].0.abs().max(m.pairs[a].1.abs());
            let fb = m.pairs[b].0.abs().max(m.pairs[b].1.abs());
            fa.total_cmp(&fb).then(b.cmp(&a))
        })
        .unwrap_or(0);
    let canon = (fastest + 4 - k) % 4;
    if canon.is_multiple_of(2) {
        (k % 4, (k + 3) % 4)
    } else {
        ((k + 3) % 4, (k + 2) % 4)
    }
}
