//! Functions `F_q^n -> F_q` as sparse polynomials, dense truth tables and
//! sparse support functions.
//!
//! Points of `F_q^k` are ordered lexicographically with coordinate 1 most
//! significant, so the point with index `i` has base-`q` digits `i` read
//! left to right.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{self, Fe, Field, GfError};

/// Truth tables larger than this are refused.
pub const DENSE_TABLE_CAP: u64 = 1 << 20;
/// Largest number of codewords `distance_to_rm` will enumerate.
pub const CODEWORD_ENUMERATION_CAP: u64 = 1 << 24;

pub type Point = Vec<Fe>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("operands live over different fields ({left} and {right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("exponent {exponent} is not reduced for q = {q}")]
    Unreduced { exponent: u32, q: u32 },
    #[error("table of {q}^{k} points exceeds the cap {cap}")]
    TableCap { q: u32, k: usize, cap: u64 },
    #[error("table has {got} values, expected {expected}")]
    TableLength { expected: u64, got: usize },
    #[error("codeword enumeration of {q}^{count} exceeds the cap {cap}")]
    EnumerationCap { q: u32, count: u64, cap: u64 },
    #[error("duplicate support point {0:?}")]
    DuplicatePoint(Vec<u32>),
    #[error("malformed polynomial text: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Per-coordinate exponents, each in `0..q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>, q: u32) -> Result<Self, PolyError> {
        if let Some(&e) = exponents.iter().find(|&&e| e >= q) {
            return Err(PolyError::Unreduced { exponent: e, q });
        }
        Ok(ExponentVector(exponents))
    }

    /// Reduces every coordinate with `a^q = a`.
    pub fn reduced(exponents: &[u64], q: u32) -> Self {
        ExponentVector(exponents.iter().map(|&a| reduce_exponent(a, q)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `prod_i x_i^{e_i}` with `0^0 = 1`.
    pub fn eval(&self, field: &gf::FieldContext, x: &[Fe]) -> Fe {
        let mut acc = Fe::ONE;
        for (&xi, &ei) in x.iter().zip(&self.0) {
            if ei != 0 {
                acc = field.mul(acc, field.pow(xi, ei as u64));
                if acc.is_zero() {
                    break;
                }
            }
        }
        acc
    }
}

impl From<ExponentVector> for Vec<u32> {
    fn from(e: ExponentVector) -> Self {
        e.0
    }
}

/// The exponent `b` in `0..q` with `a^b = a^a` for every field element: `a` itself when
/// `a < q`, otherwise `a` lowered by multiples of `q-1`. Positive exponents never reduce to 0.
pub fn reduce_exponent(a: u64, q: u32) -> u32 {
    if a < q as u64 {
        a as u32
    } else {
        ((a - 1) % (q as u64 - 1) + 1) as u32
    }
}

/// `<x^e, x^{e2}>` over `F_q^n`: `(-1)^n` when every coordinate of the reduced
/// product is `q-1`, zero otherwise.
pub fn monomial_inner_product(
    field: &gf::FieldContext,
    e: &ExponentVector,
    e2: &ExponentVector,
) -> Result<Fe, PolyError> {
    if e.len() != e2.len() {
        return Err(PolyError::Arity { expected: e.len(), got: e2.len() });
    }
    let q = field.order();
    let full = e
        .0
        .iter()
        .zip(&e2.0)
        .all(|(&a, &b)| reduce_exponent(a as u64 + b as u64, q) == q - 1);
    if !full {
        return Ok(Fe::ZERO);
    }
    let minus_one = field.neg(Fe::ONE);
    Ok(field.pow(minus_one, e.len() as u64))
}

/// Number of points of `F_q^k`, if it fits.
pub fn domain_size(q: u32, k: usize) -> Option<u64> {
    (q as u64).checked_pow(u32::try_from(k).ok()?)
}

pub fn point_index(q: u32, point: &[Fe]) -> u64 {
    point.iter().fold(0u64, |acc, c| acc * q as u64 + c.0 as u64)
}

pub fn point_at(q: u32, k: usize, mut index: u64) -> Point {
    let mut out = vec![Fe::ZERO; k];
    for slot in out.iter_mut().rev() {
        *slot = Fe((index % q as u64) as u32);
        index /= q as u64;
    }
    out
}

/// All points of `F_q^k` in lexicographic order.
pub fn all_points(q: u32, k: usize) -> impl Iterator<Item = Point> {
    let size = domain_size(q, k).expect("domain size overflows u64");
    (0..size).map(move |i| point_at(q, k, i))
}

fn ensure_same_field(a: &Field, b: &Field) -> Result<(), PolyError> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(PolyError::FieldMismatch { left: a.order(), right: b.order() })
    }
}

fn ensure_arity(expected: usize, got: usize) -> Result<(), PolyError> {
    if expected == got {
        Ok(())
    } else {
        Err(PolyError::Arity { expected, got })
    }
}

/// Anything that can be evaluated pointwise on `F_q^k`.
pub trait Evaluate {
    fn field(&self) -> &Field;
    fn arity(&self) -> usize;
    /// Value at `x`; `x` must have length `arity()`.
    fn eval(&self, x: &[Fe]) -> Fe;
}

/// `f(x) = sum_e C_e x^e` with reduced exponents and no zero coefficients.
#[derive(Debug, Clone)]
pub struct SparsePolynomial {
    n: usize,
    field: Field,
    terms: BTreeMap<ExponentVector, Fe>,
}

impl PartialEq for SparsePolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && *self.field == *other.field && self.terms == other.terms
    }
}

impl SparsePolynomial {
    pub fn zero(field: Field, n: usize) -> Self {
        SparsePolynomial { n, field, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, n: usize, c: Fe) -> Self {
        let mut p = Self::zero(field, n);
        p.add_term(ExponentVector::zeros(n), c);
        p
    }

    pub fn monomial(field: Field, e: ExponentVector, coefficient: Fe) -> Self {
        let mut p = Self::zero(field, e.len());
        p.add_term(e, coefficient);
        p
    }

    /// Builds a polynomial from terms, merging repeated exponents.
    pub fn from_terms(
        field: Field,
        n: usize,
        terms: impl IntoIterator<Item = (ExponentVector, Fe)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(field, n);
        for (e, c) in terms {
            ensure_arity(n, e.len())?;
            ExponentVector::new(e.0.clone(), p.field.order())?;
            p.field.check(c)?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Adds `c x^e`; `e` must already be reduced and of arity `n`.
    pub fn add_term(&mut self, e: ExponentVector, c: Fe) {
        debug_assert_eq!(e.len(), self.n);
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                if !c.is_zero() {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                let sum = self.field.add(*slot.get(), c);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field_ref(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, Fe> {
        &self.terms
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Fe {
        self.terms.get(e).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum term weight; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|e| e.weight() as i64).max().unwrap_or(-1)
    }

    pub fn evaluate(&self, x: &[Fe]) -> Result<Fe, PolyError> {
        ensure_arity(self.n, x.len())?;
        Ok(self.eval(x))
    }

    /// The same function read as an `n`-variate polynomial, `n >= self.n()`.
    pub fn embed(&self, n: usize) -> Result<SparsePolynomial, PolyError> {
        if n < self.n {
            return Err(PolyError::Arity { expected: self.n, got: n });
        }
        let terms = self.terms.iter().map(|(e, &c)| {
            let mut v = e.0.clone();
            v.resize(n, 0);
            (ExponentVector(v), c)
        });
        Ok(SparsePolynomial { n, field: self.field.clone(), terms: terms.collect() })
    }

    /// Truth table on `F_q^n`.
    pub fn tabulate(&self) -> Result<DenseTable, PolyError> {
        DenseTable::from_fn(self.field.clone(), self.n, |x| self.eval(x))
    }

    /// Parses `q=<q> n=<n>; <coef>*x1^a1*...*xn^an + ...`.
    pub fn parse(text: &str) -> Result<SparsePolynomial, PolyError> {
        let bad = |msg: &str| PolyError::Parse(msg.to_string());
        let (header, body) = text.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let mut q = None;
        let mut n = None;
        for tok in header.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(|| bad("header must be key=value"))?;
            let val: u64 = val.parse().map_err(|_| bad("header value is not an integer"))?;
            match key {
                "q" => q = Some(val),
                "n" => n = Some(val as usize),
                _ => return Err(bad("unknown header key")),
            }
        }
        let q = q.ok_or_else(|| bad("missing q"))?;
        let n = n.ok_or_else(|| bad("missing n"))?;
        let field = gf::field_of_order(q)?;
        let mut poly = SparsePolynomial::zero(field.clone(), n);
        let body = body.trim();
        if body.is_empty() {
            return Err(bad("empty body"));
        }
        for term in body.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let mut coef = Fe::ONE;
            let mut exps = vec![0u64; n];
            for factor in term.split('*') {
                let factor = factor.trim();
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, a)) => (i, a.parse::<u64>().map_err(|_| bad("bad exponent"))?),
                        None => (var, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| bad("bad variable index"))?;
                    if idx == 0 || idx > n {
                        return Err(bad("variable index out of range"));
                    }
                    exps[idx - 1] += pow;
                } else {
                    let c: u32 = factor.parse().map_err(|_| bad("bad coefficient"))?;
                    coef = field.mul(coef, field.check(Fe(c))?);
                }
            }
            poly.add_term(ExponentVector::reduced(&exps, field.order()), coef);
        }
        Ok(poly)
    }
}

impl Evaluate for SparsePolynomial {
    fn field(&self) -> &Field {
        &self.field
    }

    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[Fe]) -> Fe {
        self.terms.iter().fold(Fe::ZERO, |acc, (e, &c)| {
            self.field.add(acc, self.field.mul(c, e.eval(&self.field, x)))
        })
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} n={}; ", self.field.order(), self.n)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (j, &a) in e.0.iter().enumerate() {
                if a > 0 {
                    write!(f, "*x{}^{}", j + 1, a)?;
                }
            }
        }
        Ok(())
    }
}

/// Values of a function on all of `F_q^k`, in lexicographic point order.
#[derive(Debug, Clone)]
pub struct DenseTable {
    k: usize,
    field: Field,
    values: Vec<Fe>,
}

impl PartialEq for DenseTable {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && *self.field == *other.field && self.values == other.values
    }
}

impl DenseTable {
    fn checked_len(field: &Field, k: usize) -> Result<u64, PolyError> {
        domain_size(field.order(), k)
            .filter(|&len| len <= DENSE_TABLE_CAP)
            .ok_or(PolyError::TableCap { q: field.order(), k, cap: DENSE_TABLE_CAP })
    }

    pub fn new(field: Field, k: usize, values: Vec<Fe>) -> Result<Self, PolyError> {
        let len = Self::checked_len(&field, k)?;
        if values.len() as u64 != len {
            return Err(PolyError::TableLength { expected: len, got: values.len() });
        }
        for &v in &values {
            field.check(v)?;
        }
        Ok(DenseTable { k, field, values })
    }

    pub fn from_fn(field: Field, k: usize, mut f: impl FnMut(&[Fe]) -> Fe) -> Result<Self, PolyError> {
        let len = Self::checked_len(&field, k)?;
        let q = field.order();
        let mut point = vec![Fe::ZERO; k];
        let mut values = Vec::with_capacity(len as usize);
        for _ in 0..len {
            values.push(f(&point));
            // lexicographic successor
            for c in point.iter_mut().rev() {
                c.0 += 1;
                if c.0 < q {
                    break;
                }
                c.0 = 0;
            }
        }
        Ok(DenseTable { k, field, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[Fe] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, x: &[Fe]) -> Fe {
        self.values[point_index(self.field.order(), x) as usize]
    }

    /// `sum_a self(a) other(a)` over all of `F_q^k`.
    pub fn inner_product(&self, other: &dyn Evaluate) -> Result<Fe, PolyError> {
        ensure_same_field(&self.field, other.field())?;
        ensure_arity(self.k, other.arity())?;
        let f = &self.field;
        let q = f.order();
        Ok(self.values.iter().enumerate().fold(Fe::ZERO, |acc, (i, &v)| {
            if v.is_zero() {
                acc
            } else {
                f.add(acc, f.mul(v, other.eval(&point_at(q, self.k, i as u64))))
            }
        }))
    }

    /// Fraction of points where the two tables differ.
    pub fn hamming_distance(&self, other: &DenseTable) -> Result<Distance, PolyError> {
        ensure_same_field(&self.field, &other.field)?;
        ensure_arity(self.k, other.k)?;
        let disagreements = self.values.iter().zip(&other.values).filter(|(a, b)| a != b).count();
        Ok(Distance { disagreements: disagreements as u64, points: self.values.len() as u64 })
    }
}

impl Evaluate for DenseTable {
    fn field(&self) -> &Field {
        &self.field
    }

    fn arity(&self) -> usize {
        self.k
    }

    fn eval(&self, x: &[Fe]) -> Fe {
        self.get(x)
    }
}

/// A function on `F_q^k` given by its nonzero values.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportFunction {
    k: usize,
    field: Field,
    entries: BTreeMap<Point, Fe>,
}

impl SupportFunction {
    pub fn empty(field: Field, k: usize) -> Self {
        SupportFunction { k, field, entries: BTreeMap::new() }
    }

    /// Zero values are dropped; repeated points are an error.
    pub fn from_pairs(
        field: Field,
        k: usize,
        pairs: impl IntoIterator<Item = (Point, Fe)>,
    ) -> Result<Self, PolyError> {
        let mut entries = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (point, value) in pairs {
            ensure_arity(k, point.len())?;
            for &c in &point {
                field.check(c)?;
            }
            field.check(value)?;
            if !seen.insert(point.clone()) {
                return Err(PolyError::DuplicatePoint(point.iter().map(|c| c.0).collect()));
            }
            if !value.is_zero() {
                entries.insert(point, value);
            }
        }
        Ok(SupportFunction { k, field, entries })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &BTreeMap<Point, Fe> {
        &self.entries
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum_{a in supp} self(a) other(a)`.
    pub fn inner_product(&self, other: &dyn Evaluate) -> Result<Fe, PolyError> {
        ensure_same_field(&self.field, other.field())?;
        ensure_arity(self.k, other.arity())?;
        let f = &self.field;
        Ok(self
            .entries
            .iter()
            .fold(Fe::ZERO, |acc, (x, &v)| f.add(acc, f.mul(v, other.eval(x)))))
    }

    /// `sum_{a in supp} self(a) a^e`.
    pub fn monomial_inner_product(&self, e: &ExponentVector) -> Fe {
        let f = &self.field;
        self.entries
            .iter()
            .fold(Fe::ZERO, |acc, (x, &v)| f.add(acc, f.mul(v, e.eval(f, x))))
    }

    pub fn to_table(&self) -> Result<DenseTable, PolyError> {
        DenseTable::from_fn(self.field.clone(), self.k, |x| self.eval(x))
    }
}

impl Evaluate for SupportFunction {
    fn field(&self) -> &Field {
        &self.field
    }

    fn arity(&self) -> usize {
        self.k
    }

    fn eval(&self, x: &[Fe]) -> Fe {
        self.entries.get(x).copied().unwrap_or(Fe::ZERO)
    }
}

/// The unique reduced polynomial agreeing with `table` everywhere.
///
/// Works one coordinate at a time: along each axis the univariate values
/// `g(a)` become coefficients via `c_0 = g(0)`, `c_j = -sum_{a != 0} g(a) a^{q-1-j}`
/// for `0 < j < q-1` and `c_{q-1} = -sum_a g(a)`.
pub fn interpolate(table: &DenseTable) -> SparsePolynomial {
    let f = &table.field;
    let q = f.order() as usize;
    let k = table.k;
    let mut data = table.values.clone();
    let minus_one = f.neg(Fe::ONE);
    // weights[j][a] with c_j = sum_a weights[j][a] g(a)
    let weights: Vec<Vec<Fe>> = (0..q)
        .map(|j| {
            (0..q)
                .map(|a| {
                    let a = Fe(a as u32);
                    if j == 0 {
                        if a.is_zero() { Fe::ONE } else { Fe::ZERO }
                    } else if j == q - 1 {
                        minus_one
                    } else if a.is_zero() {
                        Fe::ZERO
                    } else {
                        f.neg(f.pow(a, (q - 1 - j) as u64))
                    }
                })
                .collect()
        })
        .collect();
    let mut line = vec![Fe::ZERO; q];
    for axis in 0..k {
        let stride = q.pow((k - 1 - axis) as u32);
        let block = stride * q;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (a, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + a * stride];
                }
                for (j, w) in weights.iter().enumerate() {
                    let c = w
                        .iter()
                        .zip(&line)
                        .fold(Fe::ZERO, |acc, (&wa, &g)| f.add(acc, f.mul(wa, g)));
                    data[start + j * stride] = c;
                }
            }
        }
    }
    let terms = data.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| {
        let e = point_at(q as u32, k, i as u64).into_iter().map(|c| c.0).collect();
        (ExponentVector(e), c)
    });
    SparsePolynomial { n: k, field: f.clone(), terms: terms.collect() }
}

/// Reduced exponent vectors of `n` coordinates and weight at most `max_weight`,
/// in lexicographic order.
pub fn enumerate_exponents(n: usize, q: u32, max_weight: u64) -> ExponentIter {
    ExponentIter { q, max_weight, current: Some(vec![0; n]), weight: 0 }
}

pub struct ExponentIter {
    q: u32,
    max_weight: u64,
    current: Option<Vec<u32>>,
    weight: u64,
}

impl Iterator for ExponentIter {
    type Item = ExponentVector;

    fn next(&mut self) -> Option<ExponentVector> {
        let cur = self.current.as_mut()?;
        let out = ExponentVector(cur.clone());
        // Rightmost coordinate that can grow once everything after it is zeroed.
        let mut prefix_weight = self.weight;
        let mut advanced = false;
        for i in (0..cur.len()).rev() {
            prefix_weight -= cur[i] as u64;
            if cur[i] + 1 < self.q && prefix_weight + (cur[i] as u64) < self.max_weight {
                cur[i] += 1;
                for c in cur[i + 1..].iter_mut() {
                    *c = 0;
                }
                self.weight = prefix_weight + cur[i] as u64;
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.current = None;
        }
        Some(out)
    }
}

/// How many reduced exponent vectors have weight at most `max_weight`.
pub fn count_exponents(n: usize, q: u32, max_weight: u64) -> u64 {
    let w = max_weight.min(n as u64 * (q as u64 - 1)) as usize;
    let mut ways = vec![0u64; w + 1];
    ways[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u64; w + 1];
        for (total, &count) in ways.iter().enumerate() {
            if count == 0 {
                continue;
            }
            for e in 0..q as usize {
                if total + e > w {
                    break;
                }
                next[total + e] = next[total + e].saturating_add(count);
            }
        }
        ways = next;
    }
    ways.iter().fold(0u64, |a, &b| a.saturating_add(b))
}

/// A fractional Hamming distance kept as an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distance {
    pub disagreements: u64,
    pub points: u64,
}

impl Distance {
    pub fn value(&self) -> f64 {
        if self.points == 0 {
            0.0
        } else {
            self.disagreements as f64 / self.points as f64
        }
    }

    pub fn is_zero(&self) -> bool {
        self.disagreements == 0
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Exact distance from `table` to `RM[k, q, d]` by enumerating every codeword.
///
/// Coefficients are walked as base-`p` digit vectors, so every odometer step
/// adds one precomputed multiple of a monomial table to the running codeword.
pub fn distance_to_rm(table: &DenseTable, d: u64) -> Result<Distance, PolyError> {
    let f = &table.field;
    let q = f.order();
    let p = f.characteristic();
    let ell = f.degree() as usize;
    let exps: Vec<ExponentVector> = enumerate_exponents(table.k, q, d).collect();
    let count = exps.len() as u64;
    let codewords = (q as u64)
        .checked_pow(count as u32)
        .filter(|&c| c <= CODEWORD_ENUMERATION_CAP)
        .ok_or(PolyError::EnumerationCap { q, count, cap: CODEWORD_ENUMERATION_CAP })?;

    let len = table.values.len();
    let points: Vec<Point> = all_points(q, table.k).collect();
    // steps[digit] = (basis element p^j) * monomial table
    let mut steps: Vec<Vec<Fe>> = Vec::with_capacity(exps.len() * ell);
    for e in &exps {
        let mono: Vec<Fe> = points.iter().map(|x| e.eval(f, x)).collect();
        for j in 0..ell {
            let basis = Fe(p.pow(j as u32));
            steps.push(mono.iter().map(|&m| f.mul(basis, m)).collect());
        }
    }
    let mut digits = vec![0u32; steps.len()];
    let mut codeword = vec![Fe::ZERO; len];
    let mismatches = |cw: &[Fe]| table.values.iter().zip(cw).filter(|(a, b)| a != b).count();
    let mut best = mismatches(&codeword);
    for _ in 1..codewords {
        if best == 0 {
            break;
        }
        for (pos, digit) in digits.iter_mut().enumerate() {
            for (c, &s) in codeword.iter_mut().zip(&steps[pos]) {
                *c = f.add(*c, s);
            }
            *digit += 1;
            if *digit < p {
                break;
            }
            *digit = 0;
        }
        best = best.min(mismatches(&codeword));
    }
    Ok(Distance { disagreements: best as u64, points: len as u64 })
}

/// A polynomial of degree at most `d` whose terms are each kept with
/// probability `density` and carry a uniform nonzero coefficient.
pub fn random_polynomial<R: Rng + ?Sized>(
    field: Field,
    n: usize,
    d: u64,
    density: f64,
    rng: &mut R,
) -> SparsePolynomial {
    let q = field.order();
    let density = density.clamp(0.0, 1.0);
    let mut poly = SparsePolynomial::zero(field, n);
    for e in enumerate_exponents(n, q, d) {
        if rng.gen_bool(density) {
            let c = Fe(rng.gen_range(1..q));
            poly.terms.insert(e, c);
        }
    }
    poly
}
