//! Local characterizations of `RM[n, q, d]` supported inside a given point set.
//!
//! A characterization is a function `h` on `F_q^k` such that `f` has degree at
//! most `d` exactly when `<f∘T, h> = 0` for every affine `T`. Both finders solve
//! an explicit linear system in the unknown values `z_a`, `a in S`:
//!
//! * one row `sum_a z_a a^e' = 0` for every reduced `e'` below a weight cap, and
//! * one row `sum_a z_a a^e* = 1` for a target exponent `e*`.
//!
//! Over prime fields the cap is `d` and `e*` is the first exponent of weight
//! `d + 1` (lexicographically) whose system is solvable. Over `F_q` with `q = p^l`,
//! `l >= 2`, write `d + 1 = s (q - q/p) + r`; the target is
//! `e* = (q - q/p, .., q - q/p, q - 1, 0, .., 0)` with `s` leading entries, the cap
//! is `|e*| - 1`, and the solution `h1` is multiplied pointwise by
//! `sum_{r <= r' <= q-1} x_{s+1}^{q-1-r'}`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Fe, Field};
use crate::linalg::{self, SolutionSpace};
use crate::poly::{
    enumerate_exponents, interpolate, ExponentVector, Point, PolyError, SupportFunction,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharfindError {
    #[error("binomial or sample size overflows")]
    Overflow,
    #[error("dimension k = {k} is too small; need at least {min}")]
    DimensionTooSmall { k: usize, min: usize },
    #[error("{0} mode requested over a field of the other kind")]
    WrongMode(Mode),
    #[error("point set has arity {got}, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Prime,
    Nonprime,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Prime => "prime",
            Mode::Nonprime => "nonprime",
        })
    }
}

impl Mode {
    pub fn for_field(field: &crate::gf::FieldContext) -> Mode {
        if field.is_prime_field() {
            Mode::Prime
        } else {
            Mode::Nonprime
        }
    }
}

/// `d + 1 = s (q - q/p) + r` with `0 <= r < q - q/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDecomposition {
    pub s: u64,
    pub r: u64,
}

pub fn decompose_degree(d: u64, q: u64, p: u64) -> DegreeDecomposition {
    let step = q - q / p;
    DegreeDecomposition { s: (d + 1) / step, r: (d + 1) % step }
}

pub fn binomial(n: u64, r: u64) -> Option<u64> {
    let r = r.min(n.checked_sub(r)?);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `C(d + k + 1, k) + 1`.
pub fn sample_size_prime(d: u64, k: u64) -> Result<u64, CharfindError> {
    binomial(d + k + 1, k)
        .and_then(|b| b.checked_add(1))
        .filter(|&v| v < 1 << 63)
        .ok_or(CharfindError::Overflow)
}

/// Target exponent `(q - q/p) x s, q - 1, 0, ..` of length `k`.
pub fn target_exponent_nonprime(
    d: u64,
    q: u64,
    p: u64,
    k: usize,
) -> Result<ExponentVector, CharfindError> {
    let DegreeDecomposition { s, .. } = decompose_degree(d, q, p);
    if (k as u64) <= s {
        return Err(CharfindError::DimensionTooSmall { k, min: s as usize + 1 });
    }
    let mut e = vec![0u32; k];
    for slot in e.iter_mut().take(s as usize) {
        *slot = (q - q / p) as u32;
    }
    e[s as usize] = (q - 1) as u32;
    Ok(ExponentVector::new(e, q as u32)?)
}

/// `ceil(2 q^{s+1} ln(q) C(k + d*, d*))` with `d* = |e*|`.
pub fn sample_size_nonprime(d: u64, q: u64, p: u64, k: u64) -> Result<u64, CharfindError> {
    let DegreeDecomposition { s, .. } = decompose_degree(d, q, p);
    let d_star = s * (q - q / p) + q - 1;
    let binom = binomial(k + d_star, d_star).ok_or(CharfindError::Overflow)?;
    let value = 2.0 * (q as f64).powi(s as i32 + 1) * (q as f64).ln() * binom as f64;
    if !value.is_finite() || value >= 9.2e18 {
        return Err(CharfindError::Overflow);
    }
    Ok(value.ceil() as u64)
}

/// Rows `a^e'` for each constraint exponent, then the target row `a^e*`.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub columns: Vec<Point>,
    pub rows: Vec<ExponentVector>,
    pub target: ExponentVector,
    /// `rows.len() + 1` rows of `columns.len()` entries; the last row is the target.
    pub matrix: Vec<Vec<Fe>>,
}

impl ConstraintSystem {
    pub fn rhs(&self) -> Vec<Fe> {
        let mut b = vec![Fe::ZERO; self.rows.len()];
        b.push(Fe::ONE);
        b
    }
}

/// One zero row for every reduced `e'` with `|e'| <= weight_cap`, plus the target row.
pub fn build_system(
    field: &Field,
    points: &[Point],
    weight_cap: u64,
    target: &ExponentVector,
) -> ConstraintSystem {
    let k = target.len();
    let rows: Vec<ExponentVector> = enumerate_exponents(k, field.order(), weight_cap).collect();
    let matrix = rows
        .iter()
        .chain(std::iter::once(target))
        .map(|e| points.iter().map(|a| e.eval(field, a)).collect())
        .collect();
    ConstraintSystem { columns: points.to_vec(), rows, target: target.clone(), matrix }
}

/// `None` when the target row is in the span of the zero rows.
pub fn solve(field: &Field, system: &ConstraintSystem) -> Option<SolutionSpace> {
    linalg::solve(field, &system.matrix, &system.rhs(), system.columns.len())
}

/// A function `h` on `F_q^k` with `F_n(h) = RM[n, q, d]` and the exponent that certifies it.
#[derive(Debug, Clone, PartialEq)]
pub struct Characterization {
    pub h: SupportFunction,
    pub witness: ExponentVector,
    pub d: u64,
    pub mode: Mode,
}

impl Characterization {
    pub fn k(&self) -> usize {
        self.h.k()
    }
}

fn check_points(k: usize, points: &[Point]) -> Result<(), CharfindError> {
    match points.iter().find(|x| x.len() != k) {
        Some(x) => Err(CharfindError::Arity { expected: k, got: x.len() }),
        None => Ok(()),
    }
}

fn support_from(
    field: &Field,
    k: usize,
    points: &[Point],
    values: impl IntoIterator<Item = Fe>,
) -> Result<SupportFunction, CharfindError> {
    Ok(SupportFunction::from_pairs(
        field.clone(),
        k,
        points.iter().cloned().zip(values),
    )?)
}

/// Searches weight-`d+1` witnesses in lexicographic order and samples `h`
/// uniformly from the solutions of the first solvable system.
pub fn find_characterization_prime<R: Rng + ?Sized>(
    field: &Field,
    k: usize,
    points: &[Point],
    d: u64,
    rng: &mut R,
) -> Result<Option<Characterization>, CharfindError> {
    if !field.is_prime_field() {
        return Err(CharfindError::WrongMode(Mode::Prime));
    }
    check_points(k, points)?;
    let q = field.order();
    for witness in enumerate_exponents(k, q, d + 1).filter(|e| e.weight() == d + 1) {
        let system = build_system(field, points, d, &witness);
        if let Some(space) = solve(field, &system) {
            let z = space.sample(field, rng);
            let h = support_from(field, k, points, z)?;
            let c = Characterization { h, witness, d, mode: Mode::Prime };
            debug_assert_eq!(verify_characterization(&c), Ok(Verification::Pass));
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// The non-prime construction; `k` must be at least `s + 2`.
pub fn find_characterization_nonprime<R: Rng + ?Sized>(
    field: &Field,
    k: usize,
    points: &[Point],
    d: u64,
    rng: &mut R,
) -> Result<Option<Characterization>, CharfindError> {
    if field.is_prime_field() {
        return Err(CharfindError::WrongMode(Mode::Nonprime));
    }
    check_points(k, points)?;
    let q = field.order() as u64;
    let p = field.characteristic() as u64;
    let DegreeDecomposition { s, r } = decompose_degree(d, q, p);
    if (k as u64) < s + 2 {
        return Err(CharfindError::DimensionTooSmall { k, min: s as usize + 2 });
    }
    let witness = target_exponent_nonprime(d, q, p, k)?;
    let system = build_system(field, points, witness.weight() - 1, &witness);
    let Some(space) = solve(field, &system) else {
        return Ok(None);
    };
    let z = space.sample(field, rng);
    let coord = s as usize;
    let values = points.iter().zip(z).map(|(a, h1)| {
        if h1.is_zero() {
            return h1;
        }
        let shift = (r..q).fold(Fe::ZERO, |acc, rp| field.add(acc, field.pow(a[coord], q - 1 - rp)));
        field.mul(h1, shift)
    });
    let h = support_from(field, k, points, values.collect::<Vec<_>>())?;
    let c = Characterization { h, witness, d, mode: Mode::Nonprime };
    debug_assert_eq!(verify_characterization(&c), Ok(Verification::Pass));
    Ok(Some(c))
}

/// Dispatches on the field kind.
pub fn find_characterization<R: Rng + ?Sized>(
    field: &Field,
    k: usize,
    points: &[Point],
    d: u64,
    rng: &mut R,
) -> Result<Option<Characterization>, CharfindError> {
    match Mode::for_field(field) {
        Mode::Prime => find_characterization_prime(field, k, points, d, rng),
        Mode::Nonprime => find_characterization_nonprime(field, k, points, d, rng),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Pass,
    Fail(String),
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self, Verification::Pass)
    }
}

/// Checks the sufficient conditions for `F_n(h) = RM[n, q, d]`.
///
/// Prime mode: `<h, x^e'> = 0` for every `|e'| <= d`, `<h, x^e*> = 1` and `|e*| = d + 1`.
/// Non-prime mode: `deg h <= k(q-1) - (d+1)` and `h` contains
/// `prod_{i<=s} x_i^{q/p-1} x_{s+1}^{q-1-r'} prod_{j>=s+2} x_j^{q-1}` for every `r <= r' <= q-1`.
pub fn verify_characterization(c: &Characterization) -> Result<Verification, CharfindError> {
    let field = crate::poly::Evaluate::field(&c.h).clone();
    let k = c.k();
    let q = field.order() as u64;
    let d = c.d;
    if c.witness.len() != k {
        return Ok(Verification::Fail(format!("witness has arity {}, h has {k}", c.witness.len())));
    }
    match c.mode {
        Mode::Prime => {
            if c.witness.weight() != d + 1 {
                return Ok(Verification::Fail(format!(
                    "witness weight {} differs from d + 1 = {}",
                    c.witness.weight(),
                    d + 1
                )));
            }
            for e in enumerate_exponents(k, q as u32, d) {
                let ip = c.h.monomial_inner_product(&e);
                if !ip.is_zero() {
                    return Ok(Verification::Fail(format!("<h, x^{:?}> = {ip}", e.as_slice())));
                }
            }
            let ip = c.h.monomial_inner_product(&c.witness);
            if ip != Fe::ONE {
                return Ok(Verification::Fail(format!("<h, x^witness> = {ip}, expected 1")));
            }
            Ok(Verification::Pass)
        }
        Mode::Nonprime => {
            let p = field.characteristic() as u64;
            let DegreeDecomposition { s, r } = decompose_degree(d, q, p);
            if (k as u64) < s + 2 {
                return Ok(Verification::Fail(format!("k = {k} is below s + 2 = {}", s + 2)));
            }
            let poly = interpolate(&c.h.to_table()?);
            let bound = k as i64 * (q as i64 - 1) - (d as i64 + 1);
            if poly.degree() > bound {
                return Ok(Verification::Fail(format!(
                    "deg h = {} exceeds {bound}",
                    poly.degree()
                )));
            }
            for rp in r..q {
                let mut e = vec![(q - 1) as u32; k];
                for slot in e.iter_mut().take(s as usize) {
                    *slot = (q / p - 1) as u32;
                }
                e[s as usize] = (q - 1 - rp) as u32;
                let e = ExponentVector::new(e, q as u32)?;
                if poly.coefficient(&e).is_zero() {
                    return Ok(Verification::Fail(format!(
                        "h lacks the monomial x^{:?}",
                        e.as_slice()
                    )));
                }
            }
            Ok(Verification::Pass)
        }
    }
}
