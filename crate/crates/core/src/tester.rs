//! Random-points testers, their repeated erasure/corruption-resilient wrappers,
//! and the classical flat tester used as an attack baseline.

use std::collections::BTreeSet;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charfind::{
    self, decompose_degree, sample_size_nonprime, sample_size_prime, CharfindError,
};
use crate::gf::{Fe, Field};
use crate::oracle::{AdversarialOracle, AdversaryMode, Answer, QueryAccess};
use crate::poly::{domain_size, interpolate, point_at, DenseTable, Point, PolyError, DENSE_TABLE_CAP};
use crate::space::{restrict, AffineMap, AffineSampling, SpaceError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TesterError {
    #[error("illegal parameters: {0}")]
    Params(String),
    #[error("corruption_test needs an oracle in corruption or none mode")]
    ErasureOracle,
    #[error(transparent)]
    Charfind(#[from] CharfindError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// What a round does when one of its queries comes back `⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErasurePolicy {
    /// The round accepts immediately after querying.
    #[default]
    AcceptRound,
    /// The characterization is searched on the surviving points only.
    DropErased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParamFlags {
    /// The theory value of `k` exceeds `n`.
    pub impractical: bool,
    /// `t` is above the budget the guarantee covers.
    pub outside_guarantee: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestParams {
    pub d: u64,
    pub k: usize,
    pub m: usize,
    pub repetitions: u64,
    pub delta: f64,
    pub t: u64,
    #[serde(default)]
    pub sampling: AffineSampling,
    #[serde(default)]
    pub on_erasure: ErasurePolicy,
    #[serde(default)]
    pub flags: ParamFlags,
    /// `k` as given by the formula, before clamping.
    pub theory_k: u64,
}

fn ceil_u64(x: f64) -> u64 {
    if x.is_nan() || x <= 0.0 {
        0
    } else if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x.ceil() as u64
    }
}

/// `ceil(100 m^2 / delta)`, saturating.
pub fn default_repetitions(m: usize, delta: f64) -> u64 {
    ceil_u64(100.0 * (m as f64) * (m as f64) / delta)
}

/// Smallest `k` the finder of this field accepts.
pub fn minimal_k(field: &Field, d: u64) -> usize {
    if field.is_prime_field() {
        d as usize + 1
    } else {
        let q = field.order() as u64;
        decompose_degree(d, q, field.characteristic() as u64).s as usize + 2
    }
}

/// `min(sample size, q^k)`.
pub fn default_sample_size(field: &Field, d: u64, k: usize) -> usize {
    let q = field.order() as u64;
    let wanted = if field.is_prime_field() {
        sample_size_prime(d, k as u64).unwrap_or(u64::MAX)
    } else {
        sample_size_nonprime(d, q, field.characteristic() as u64, k as u64).unwrap_or(u64::MAX)
    };
    let size = domain_size(q as u32, k).unwrap_or(u64::MAX);
    wanted.min(size).min(usize::MAX as u64) as usize
}

/// Theory-driven parameters.
///
/// Prime fields use `k = ceil(20 d log_p(30 t / delta))` and the budget bound
/// `t <= (delta/30) p^{n/(20d)}`; other fields use `k = ceil(100 d* log_q(100 t q / delta))`
/// and `t <= (delta/(100q)) q^{n/(100 d*)}`. A budget of zero is treated as one
/// inside the logarithm.
pub fn default_params(field: &Field, d: u64, delta: f64, t: u64, n: usize) -> TestParams {
    let q = field.order() as f64;
    let p = field.characteristic() as f64;
    let tt = t.max(1) as f64;
    let (theory_k, guarantee) = if field.is_prime_field() {
        let k = 20.0 * d as f64 * (30.0 * tt / delta).ln() / p.ln();
        let bound = if d == 0 { f64::INFINITY } else { delta / 30.0 * p.powf(n as f64 / (20.0 * d as f64)) };
        (ceil_u64(k), bound)
    } else {
        let s = decompose_degree(d, q as u64, p as u64).s as f64;
        let d_star = s * (q - q / p) + q - 1.0;
        let k = 100.0 * d_star * (100.0 * tt * q / delta).ln() / q.ln();
        let bound = delta / (100.0 * q) * q.powf(n as f64 / (100.0 * d_star));
        (ceil_u64(k), bound)
    };
    let k = theory_k.max(minimal_k(field, d) as u64).min(usize::MAX as u64) as usize;
    let m = default_sample_size(field, d, k);
    TestParams {
        d,
        k,
        m,
        repetitions: default_repetitions(m, delta),
        delta,
        t,
        sampling: AffineSampling::Uniform,
        on_erasure: ErasurePolicy::AcceptRound,
        flags: ParamFlags { impractical: k > n, outside_guarantee: t as f64 > guarantee },
        theory_k,
    }
}

impl TestParams {
    /// `d+1 <= k <= n` (prime) or `s+2 <= k <= n`, and `m <= q^k`.
    pub fn validate(&self, field: &Field, n: usize) -> Result<(), TesterError> {
        let min = minimal_k(field, self.d);
        if self.k < min || self.k > n {
            return Err(TesterError::Params(format!(
                "k = {} must lie in [{min}, n = {n}] for d = {} over F_{}",
                self.k,
                self.d,
                field.order()
            )));
        }
        if let Some(size) = domain_size(field.order(), self.k) {
            if self.m as u64 > size {
                return Err(TesterError::Params(format!("m = {} exceeds q^k = {size}", self.m)));
            }
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(TesterError::Params(format!("delta = {} must lie in (0, 1]", self.delta)));
        }
        Ok(())
    }

    /// `R m (R m t) / q^k`: a union bound on any query of a run hitting an edited point.
    pub fn union_bound(&self, q: u32) -> f64 {
        let rm = self.repetitions as f64 * self.m as f64;
        rm * rm * self.t as f64 / (q as f64).powi(self.k as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundCause {
    Passed,
    HitViolation,
    EmptyH,
    ErasedRound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub cause: RoundCause,
    pub queries: u64,
    pub erased: u64,
    pub support: u64,
}

impl RoundOutcome {
    pub fn rejected(&self) -> bool {
        self.cause == RoundCause::HitViolation
    }
}

/// `m` distinct uniform points of `F_q^k` in canonical order; the whole
/// domain when `m >= q^k`.
pub fn sample_points<R: Rng + ?Sized>(q: u32, k: usize, m: usize, rng: &mut R) -> Vec<Point> {
    let size = domain_size(q, k);
    let m = size.map_or(m, |size| m.min(size.min(usize::MAX as u64) as usize));
    match size {
        Some(size) if size <= 1 << 40 => {
            let mut idx = index::sample(rng, size as usize, m).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| point_at(q, k, i as u64)).collect()
        }
        _ => {
            let mut set = BTreeSet::new();
            while set.len() < m {
                set.insert((0..k).map(|_| Fe(rng.gen_range(0..q))).collect::<Point>());
            }
            set.into_iter().collect()
        }
    }
}

/// One round: restrict to a random `k`-flat, query a random `S`, and check `<f∘T, h>`.
pub fn random_points_test<O, R>(
    oracle: &mut O,
    params: &TestParams,
    rng: &mut R,
) -> Result<RoundOutcome, TesterError>
where
    O: QueryAccess + ?Sized,
    R: Rng + ?Sized,
{
    let field = oracle.field().clone();
    let q = field.order();
    let t = AffineMap::sample(field.clone(), oracle.arity(), params.k, params.sampling, rng)?;
    let points = sample_points(q, params.k, params.m, rng);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(rng);
    let mut values: Vec<Option<Fe>> = vec![None; points.len()];
    let mut restricted = restrict(oracle, &t)?;
    let mut erased = 0;
    for &i in &order {
        match restricted.query(&points[i]) {
            Answer::Value(v) => values[i] = Some(v),
            Answer::Erased => erased += 1,
        }
    }
    let queries = points.len() as u64;
    let outcome = |cause, support| RoundOutcome { cause, queries, erased, support };
    let (points, values): (Vec<Point>, Vec<Fe>) = if erased == 0 {
        (points, values.into_iter().map(Option::unwrap).collect())
    } else {
        match params.on_erasure {
            ErasurePolicy::AcceptRound => return Ok(outcome(RoundCause::ErasedRound, 0)),
            ErasurePolicy::DropErased => points
                .into_iter()
                .zip(values)
                .filter_map(|(x, v)| v.map(|v| (x, v)))
                .unzip(),
        }
    };
    let Some(c) = charfind::find_characterization(&field, params.k, &points, params.d, rng)? else {
        return Ok(outcome(RoundCause::EmptyH, 0));
    };
    // supp(h) lies inside the sorted point list, so every value is already known
    let ip = c.h.entries().iter().fold(Fe::ZERO, |acc, (x, &hv)| {
        let i = points.binary_search(x).expect("support inside S");
        field.add(acc, field.mul(values[i], hv))
    });
    let cause = if ip.is_zero() { RoundCause::Passed } else { RoundCause::HitViolation };
    Ok(outcome(cause, c.h.support_size() as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cause {
    HitViolation,
    AllRoundsPassed,
    EmptyH,
    ErasedRound,
    IncompleteFlat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    /// For an accept: `all-rounds-passed` when every round checked an inner
    /// product, otherwise the most frequent degenerate round cause.
    pub cause: Cause,
    /// Index of the rejecting round.
    pub round: Option<u64>,
    pub rounds_run: u64,
    pub queries: u64,
    pub erased_hits: u64,
    pub corrupted_hits: u64,
    pub params: TestParams,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub audit: Vec<RoundOutcome>,
}

fn repeated_test<R: Rng + ?Sized>(
    oracle: &mut AdversarialOracle,
    params: &TestParams,
    rng: &mut R,
) -> Result<Verdict, TesterError> {
    params.validate(oracle.field(), oracle.arity())?;
    let mut audit = Vec::new();
    let mut rejected_at = None;
    for round in 0..params.repetitions {
        let outcome = random_points_test(oracle, params, rng)?;
        audit.push(outcome);
        if outcome.rejected() {
            rejected_at = Some(round);
            break;
        }
    }
    let stats = oracle.stats();
    let (decision, cause) = match rejected_at {
        Some(_) => (Decision::Reject, Cause::HitViolation),
        None => {
            let erased = audit.iter().filter(|o| o.cause == RoundCause::ErasedRound).count();
            let empty = audit.iter().filter(|o| o.cause == RoundCause::EmptyH).count();
            let cause = if erased == 0 && empty == 0 {
                Cause::AllRoundsPassed
            } else if erased >= empty {
                Cause::ErasedRound
            } else {
                Cause::EmptyH
            };
            (Decision::Accept, cause)
        }
    };
    Ok(Verdict {
        decision,
        cause,
        round: rejected_at,
        rounds_run: audit.len() as u64,
        queries: stats.queries,
        erased_hits: stats.erased_hits,
        corrupted_hits: stats.corrupted_hits,
        params: params.clone(),
        audit,
    })
}

/// Runs up to `R` rounds and rejects on the first rejecting round.
pub fn erasure_resilient_test<R: Rng + ?Sized>(
    oracle: &mut AdversarialOracle,
    params: &TestParams,
    rng: &mut R,
) -> Result<Verdict, TesterError> {
    repeated_test(oracle, params, rng)
}

/// Same control flow against a corrupting oracle.
pub fn corruption_test<R: Rng + ?Sized>(
    oracle: &mut AdversarialOracle,
    params: &TestParams,
    rng: &mut R,
) -> Result<Verdict, TesterError> {
    if oracle.mode() == AdversaryMode::Erasure {
        return Err(TesterError::ErasureOracle);
    }
    repeated_test(oracle, params, rng)
}

/// `ceil((d+1)/(q - q/p))`, plus one over non-prime fields.
pub fn flat_dimension(field: &Field, d: u64) -> usize {
    let q = field.order() as u64;
    let p = field.characteristic() as u64;
    let base = (d + 1).div_ceil(q - q / p) as usize;
    base + usize::from(!field.is_prime_field())
}

/// Queries a whole random flat in lexicographic order and checks the degree of the restriction.
pub fn classical_flat_test<R: Rng + ?Sized>(
    oracle: &mut AdversarialOracle,
    d: u64,
    rng: &mut R,
) -> Result<Verdict, TesterError> {
    let field = oracle.field().clone();
    let q = field.order();
    let n = oracle.arity();
    let dim = flat_dimension(&field, d);
    if dim > n {
        return Err(TesterError::Params(format!("flat dimension {dim} exceeds n = {n}")));
    }
    let size = domain_size(q, dim)
        .filter(|&s| s <= DENSE_TABLE_CAP)
        .ok_or(PolyError::TableCap { q, k: dim, cap: DENSE_TABLE_CAP })?;
    let t = AffineMap::sample(field.clone(), n, dim, AffineSampling::Injective, rng)?;
    let mut values = Vec::with_capacity(size as usize);
    let mut complete = true;
    {
        let mut restricted = restrict(oracle, &t)?;
        for i in 0..size {
            match restricted.query(&point_at(q, dim, i)) {
                Answer::Value(v) => values.push(v),
                Answer::Erased => {
                    complete = false;
                    break;
                }
            }
        }
    }
    let (decision, cause) = if !complete {
        (Decision::Accept, Cause::IncompleteFlat)
    } else if interpolate(&DenseTable::new(field.clone(), dim, values)?).degree() > d as i64 {
        (Decision::Reject, Cause::HitViolation)
    } else {
        (Decision::Accept, Cause::AllRoundsPassed)
    };
    let stats = oracle.stats();
    Ok(Verdict {
        decision,
        cause,
        round: (decision == Decision::Reject).then_some(0),
        rounds_run: 1,
        queries: stats.queries,
        erased_hits: stats.erased_hits,
        corrupted_hits: stats.corrupted_hits,
        params: TestParams {
            d,
            k: dim,
            m: size as usize,
            repetitions: 1,
            delta: 1.0,
            t: oracle.budget(),
            sampling: AffineSampling::Injective,
            on_erasure: ErasurePolicy::AcceptRound,
            flags: ParamFlags::default(),
            theory_k: dim as u64,
        },
        audit: Vec::new(),
    })
}

/// The verdict's JSON summary: `{decision, cause, round, rounds_run, queries, erased_hits, params}`.
pub fn verdict_json(v: &Verdict) -> serde_json::Value {
    serde_json::json!({
        "decision": v.decision,
        "cause": v.cause,
        "round": v.round,
        "rounds_run": v.rounds_run,
        "queries": v.queries,
        "erased_hits": v.erased_hits,
        "params": v.params,
    })
}
