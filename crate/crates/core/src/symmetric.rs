//! Double-lined fully symmetric degree-2n vertices: quarter-angle law, mode
//! sequences around the central 2n-gon and their count.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use thiserror::Error;

use crate::crease_pattern::VertexStar;
use crate::double_line::{build_dl, corner_fraction, dl_multipliers, format_signs, DlMultipliers, DoubleLine, DoubleLineError, DoubleLineParams, Sign};
use crate::kinematics::p_coeff;

/// Largest `n` enumerated exhaustively unless a larger cap is passed.
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetricError {
    #[error("n must be at least {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("mode count overflows for n = {0}")]
    Overflow(usize),
    #[error("sequence {0} is not balanced")]
    Unbalanced(String),
    #[error(transparent)]
    DoubleLine(#[from] DoubleLineError),
}

/// Cyclic corner-sign sequence of length 2n with n of each sign, stored as
/// its lexicographically least rotation (`+` before `−`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeSequence(Vec<Sign>);

impl ModeSequence {
    pub fn new(signs: Vec<Sign>) -> Result<Self, SymmetricError> {
        let plus = signs.iter().filter(|s| **s == Sign::Plus).count();
        if signs.is_empty() || 2 * plus != signs.len() {
            return Err(SymmetricError::Unbalanced(format_signs(&signs)));
        }
        Ok(ModeSequence(canonical_rotation(&signs)))
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len() / 2
    }
}

impl fmt::Display for ModeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_signs(&self.0))
    }
}

fn canonical_rotation(signs: &[Sign]) -> Vec<Sign> {
    let n = signs.len();
    (0..n)
        .map(|k| signs[k..].iter().chain(&signs[..k]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// `p(π/n, π/2)`: `tan(ρ_b/4) = −coefficient · tan(ρ_a/4)`.
pub fn quarter_angle_coefficient(n: usize) -> Result<f64, SymmetricError> {
    if n < 2 {
        return Err(SymmetricError::TooSmall { n, min: 2 });
    }
    let p = p_coeff(PI / n as f64, FRAC_PI_2).map_err(DoubleLineError::from)?;
    Ok(if p.abs() < 1e-15 { 0.0 } else { p })
}

/// Fold angle `ρ_b` of the alternate creases of the original vertex when
/// the others fold by `ρ_a` (the sum of one double-line pair).
pub fn symmetric_fold_relation(n: usize, rho_a: f64) -> Result<f64, SymmetricError> {
    let c = quarter_angle_coefficient(n)?;
    Ok(-4.0 * (c * (rho_a / 4.0).tan()).atan())
}

/// Star with `2n` sectors of `π/n`.
pub fn symmetric_star(n: usize) -> Result<VertexStar, SymmetricError> {
    if n < 2 {
        return Err(SymmetricError::TooSmall { n, min: 2 });
    }
    Ok(VertexStar::from_sectors(vec![PI / n as f64; 2 * n]).map_err(DoubleLineError::from)?)
}

/// `DL` of the symmetric degree-2n vertex at `θ = π/2` with equal radii.
pub fn construct_symmetric_dl(n: usize, radius: f64, sequence: Option<&ModeSequence>) -> Result<DoubleLine, SymmetricError> {
    let star = symmetric_star(n)?;
    let mut params = DoubleLineParams::new(FRAC_PI_2, 2 * n);
    params.radii = vec![radius; 2 * n];
    if let Some(seq) = sequence {
        if seq.n() != n {
            return Err(SymmetricError::Unbalanced(format!("{seq} has length {}, expected {}", seq.signs().len(), 2 * n)));
        }
        params.signs = Some(seq.signs().to_vec());
    }
    Ok(build_dl(&star, &params)?)
}

/// Multipliers of every crease of the symmetric DL pattern for a sequence,
/// with corner `i` in sector `i`.
pub fn sequence_multipliers(sequence: &ModeSequence) -> Result<DlMultipliers, SymmetricError> {
    let n = sequence.n();
    let sectors = vec![PI / n as f64; 2 * n];
    Ok(dl_multipliers(&sectors, FRAC_PI_2, sequence.signs())?)
}

/// Product of the corner coefficients of the central 2n-gon equals 1.
pub fn closes_around_polygon(signs: &[Sign]) -> bool {
    let n = signs.len() / 2;
    if n == 0 {
        return false;
    }
    let tau = PI - PI / n as f64;
    let mut num = 1.0;
    let mut den = 1.0;
    for &s in signs {
        match corner_fraction(s, tau, FRAC_PI_2) {
            Ok((a, b)) => {
                num *= a;
                den *= b;
            }
            Err(_) => return false,
        }
    }
    (num - den).abs() <= 1e-9 * num.abs().max(den.abs())
}

pub fn enumerate_mode_sequences(n: usize) -> Result<BTreeSet<ModeSequence>, SymmetricError> {
    enumerate_mode_sequences_capped(n, DEFAULT_ENUMERATION_CAP)
}

/// Every balanced necklace of length 2n whose corner coefficients close.
pub fn enumerate_mode_sequences_capped(n: usize, cap: usize) -> Result<BTreeSet<ModeSequence>, SymmetricError> {
    if n < 1 {
        return Err(SymmetricError::TooSmall { n, min: 1 });
    }
    if n > cap || n > 31 {
        return Err(SymmetricError::TooLarge { n, cap: cap.min(31) });
    }
    let len = 2 * n;
    let mut out = BTreeSet::new();
    for bits in 0u64..(1u64 << len) {
        if bits.count_ones() as usize != n {
            continue;
        }
        let signs: Vec<Sign> = (0..len).map(|i| if bits >> (len - 1 - i) & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect();
        if !closes_around_polygon(&signs) {
            continue;
        }
        out.insert(ModeSequence(canonical_rotation(&signs)));
    }
    Ok(out)
}

fn euler_phi(mut m: u128) -> u128 {
    let mut result = m;
    let mut p = 2u128;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn central_binomial(d: u128) -> Option<u128> {
    // C(2d, d) built incrementally; each partial product is an integer.
    let mut c: u128 = 1;
    for i in 0..d {
        c = c.checked_mul(2 * d - i)? / (i + 1);
    }
    Some(c)
}

/// Number of balanced binary necklaces of length 2n by Burnside's lemma.
pub fn count_modes(n: usize) -> Result<u128, SymmetricError> {
    if n < 1 {
        return Err(SymmetricError::TooSmall { n, min: 1 });
    }
    let nn = n as u128;
    let mut total: u128 = 0;
    for d in 1..=nn {
        if !nn.is_multiple_of(d) {
            continue;
        }
        let term = central_binomial(d).and_then(|c| c.checked_mul(euler_phi(nn / d))).ok_or(SymmetricError::Overflow(n))?;
        total = total.checked_add(term).ok_or(SymmetricError::Overflow(n))?;
    }
    Ok(total / (2 * nn))
}
