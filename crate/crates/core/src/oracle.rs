//! The online erasure / corruption query model.
//!
//! An [`AdversarialOracle`] answers queries from a ground truth, then lets a
//! strategy spend a per-query budget of `t` edits. Edits only affect later
//! queries.

use std::collections::{HashMap, HashSet};
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Fe, Field};
use crate::poly::{DenseTable, Evaluate, Point, SparsePolynomial};

/// What a query returns: a value or `⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Value(Fe),
    Erased,
}

impl Answer {
    pub fn value(self) -> Option<Fe> {
        match self {
            Answer::Value(v) => Some(v),
            Answer::Erased => None,
        }
    }
}

/// Query access to a function `F_q^arity -> F_q`.
pub trait QueryAccess {
    fn field(&self) -> &Field;
    fn arity(&self) -> usize;
    fn query(&mut self, x: &[Fe]) -> Answer;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdversaryMode {
    #[default]
    None,
    Erasure,
    Corruption,
}

impl std::str::FromStr for AdversaryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(AdversaryMode::None),
            "erasure" => Ok(AdversaryMode::Erasure),
            "corruption" => Ok(AdversaryMode::Corruption),
            other => Err(format!("unknown adversary mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroundTruth {
    Polynomial(SparsePolynomial),
    Table(DenseTable),
}

impl Evaluate for GroundTruth {
    fn field(&self) -> &Field {
        match self {
            GroundTruth::Polynomial(p) => p.field_ref(),
            GroundTruth::Table(t) => t.field(),
        }
    }

    fn arity(&self) -> usize {
        match self {
            GroundTruth::Polynomial(p) => p.n(),
            GroundTruth::Table(t) => t.k(),
        }
    }

    fn eval(&self, x: &[Fe]) -> Fe {
        match self {
            GroundTruth::Polynomial(p) => p.eval(x),
            GroundTruth::Table(t) => t.get(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub ordinal: u64,
    pub point: Point,
    pub outcome: Answer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    Erase(Point),
    Corrupt(Point, Fe),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OracleStats {
    pub queries: u64,
    pub erased_hits: u64,
    pub corrupted_hits: u64,
    pub distinct_points: u64,
    pub budget_spent: u64,
}

/// Everything a strategy may look at: the truth, the full history and the current edits.
pub struct OracleView {
    truth: GroundTruth,
    mode: AdversaryMode,
    log: Vec<QueryRecord>,
    queried: HashSet<Point>,
    erased: HashSet<Point>,
    corrupted: HashMap<Point, Fe>,
    /// `|queried ∪ erased ∪ corrupted|`
    touched: u64,
    domain: Option<u64>,
}

impl OracleView {
    pub fn field(&self) -> &Field {
        self.truth.field()
    }

    pub fn arity(&self) -> usize {
        self.truth.arity()
    }

    pub fn mode(&self) -> AdversaryMode {
        self.mode
    }

    pub fn truth(&self, x: &[Fe]) -> Fe {
        self.truth.eval(x)
    }

    pub fn log(&self) -> &[QueryRecord] {
        &self.log
    }

    pub fn is_queried(&self, x: &[Fe]) -> bool {
        self.queried.contains(x)
    }

    pub fn is_erased(&self, x: &[Fe]) -> bool {
        self.erased.contains(x)
    }

    pub fn corruption(&self, x: &[Fe]) -> Option<Fe> {
        self.corrupted.get(x).copied()
    }

    /// Neither queried nor already edited.
    pub fn is_fresh(&self, x: &[Fe]) -> bool {
        !self.queried.contains(x) && !self.erased.contains(x) && !self.corrupted.contains_key(x)
    }

    /// How many points are still fresh, when the domain size fits in a `u64`.
    pub fn fresh_remaining(&self) -> Option<u64> {
        self.domain.map(|size| size - self.touched)
    }

    fn exhausted(&self) -> bool {
        self.fresh_remaining() == Some(0)
    }
}

pub trait AdversaryStrategy: Send {
    fn name(&self) -> &str;
    /// At most `budget` edits; extra edits are dropped by the oracle.
    fn step(&mut self, view: &OracleView, budget: usize) -> Vec<Edit>;
}

pub struct AdversarialOracle {
    view: OracleView,
    strategy: Box<dyn AdversaryStrategy>,
    t: u64,
    banking: bool,
    bank: u64,
    stats: OracleStats,
}

impl AdversarialOracle {
    pub fn new(
        truth: GroundTruth,
        mode: AdversaryMode,
        t: u64,
        strategy: Box<dyn AdversaryStrategy>,
    ) -> Self {
        let domain = crate::poly::domain_size(truth.field().order(), truth.arity());
        AdversarialOracle {
            view: OracleView {
                truth,
                mode,
                log: Vec::new(),
                queried: HashSet::new(),
                erased: HashSet::new(),
                corrupted: HashMap::new(),
                touched: 0,
                domain,
            },
            strategy,
            t,
            banking: false,
            bank: 0,
            stats: OracleStats::default(),
        }
    }

    /// No adversary at all.
    pub fn honest(truth: GroundTruth) -> Self {
        Self::new(truth, AdversaryMode::None, 0, Box::new(NullStrategy))
    }

    /// Unspent budget carries over to later queries.
    pub fn with_banking(mut self, banking: bool) -> Self {
        self.banking = banking;
        self
    }

    pub fn mode(&self) -> AdversaryMode {
        self.view.mode
    }

    pub fn budget(&self) -> u64 {
        self.t
    }

    pub fn stats(&self) -> OracleStats {
        OracleStats { distinct_points: self.view.queried.len() as u64, ..self.stats }
    }

    pub fn log(&self) -> &[QueryRecord] {
        &self.view.log
    }

    pub fn erased(&self) -> &HashSet<Point> {
        &self.view.erased
    }

    pub fn corrupted(&self) -> &HashMap<Point, Fe> {
        &self.view.corrupted
    }

    pub fn strategy_name(&self) -> &str {
        self.strategy.name()
    }

    /// One JSON object `{ordinal, point, outcome}` per line.
    pub fn export_log<W: Write>(&self, mut out: W) -> io::Result<()> {
        for record in &self.view.log {
            serde_json::to_writer(&mut out, record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    fn adversary_turn(&mut self) {
        let allowance = if self.banking { self.t + self.bank } else { self.t };
        if allowance == 0 {
            return;
        }
        let edits = self.strategy.step(&self.view, allowance as usize);
        let mut spent = 0;
        let view = &mut self.view;
        for edit in edits.into_iter().take(allowance as usize) {
            match (edit, view.mode) {
                (Edit::Erase(x), AdversaryMode::Erasure) => {
                    if !view.queried.contains(&x) && !view.erased.contains(&x) {
                        view.touched += 1;
                    }
                    view.erased.insert(x);
                }
                (Edit::Corrupt(x, v), AdversaryMode::Corruption) => {
                    if !view.queried.contains(&x) && !view.corrupted.contains_key(&x) {
                        view.touched += 1;
                    }
                    view.corrupted.insert(x, v);
                }
                _ => continue,
            }
            spent += 1;
        }
        self.stats.budget_spent += spent;
        if self.banking {
            self.bank = allowance - spent;
        }
    }
}

impl QueryAccess for AdversarialOracle {
    fn field(&self) -> &Field {
        self.view.field()
    }

    fn arity(&self) -> usize {
        self.view.arity()
    }

    fn query(&mut self, x: &[Fe]) -> Answer {
        debug_assert_eq!(x.len(), self.arity());
        let outcome = if self.view.erased.contains(x) {
            self.stats.erased_hits += 1;
            Answer::Erased
        } else if let Some(&v) = self.view.corrupted.get(x) {
            self.stats.corrupted_hits += 1;
            Answer::Value(v)
        } else {
            Answer::Value(self.view.truth.eval(x))
        };
        let ordinal = self.stats.queries;
        self.stats.queries += 1;
        if !self.view.queried.contains(x) {
            if !self.view.erased.contains(x) && !self.view.corrupted.contains_key(x) {
                self.view.touched += 1;
            }
            self.view.queried.insert(x.to_vec());
        }
        self.view.log.push(QueryRecord { ordinal, point: x.to_vec(), outcome });
        if self.view.mode != AdversaryMode::None {
            self.adversary_turn();
        }
        outcome
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("unknown adversary strategy `{0}`; expected one of {names}", names = STRATEGY_NAMES.join(", "))]
    Unknown(String),
}

pub const STRATEGY_NAMES: [&str; 6] =
    ["null", "pairwise-sum", "span-eraser", "random-eraser", "value-corruptor", "random-corruptor"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyParams {
    pub seed: u64,
    /// How many recent queries the span-based strategies look at.
    pub window: usize,
    pub max_flat_dim: usize,
    /// Offset added by `value-corruptor`; zero is bumped to one.
    pub constant: u32,
}

impl Default for StrategyParams {
    fn default() -> Self {
        StrategyParams { seed: 0, window: 16, max_flat_dim: 3, constant: 1 }
    }
}

pub fn builtin_strategy(
    name: &str,
    params: &StrategyParams,
) -> Result<Box<dyn AdversaryStrategy>, StrategyError> {
    let rng = ChaCha8Rng::seed_from_u64(params.seed);
    Ok(match name {
        "null" => Box::new(NullStrategy),
        "pairwise-sum" => Box::new(PairwiseSum),
        "span-eraser" => Box::new(SpanStrategy { params: *params, corrupt: false }),
        "value-corruptor" => Box::new(SpanStrategy { params: *params, corrupt: true }),
        "random-eraser" => Box::new(RandomStrategy { rng, corrupt: false }),
        "random-corruptor" => Box::new(RandomStrategy { rng, corrupt: true }),
        other => return Err(StrategyError::Unknown(other.to_string())),
    })
}

pub struct NullStrategy;

impl AdversaryStrategy for NullStrategy {
    fn name(&self) -> &str {
        "null"
    }

    fn step(&mut self, _: &OracleView, _: usize) -> Vec<Edit> {
        Vec::new()
    }
}

/// Erases `x_i + x_j` for past queries, pairs involving the newest query first.
pub struct PairwiseSum;

impl AdversaryStrategy for PairwiseSum {
    fn name(&self) -> &str {
        "pairwise-sum"
    }

    fn step(&mut self, view: &OracleView, budget: usize) -> Vec<Edit> {
        let f = view.field().clone();
        let log = view.log();
        let mut chosen: Vec<Point> = Vec::new();
        if view.exhausted() {
            return Vec::new();
        }
        let mut sum = vec![Fe::ZERO; view.arity()];
        'outer: for i in (0..log.len()).rev() {
            for j in (0..i).rev() {
                for ((s, &a), &b) in sum.iter_mut().zip(&log[i].point).zip(&log[j].point) {
                    *s = f.add(a, b);
                }
                if view.is_fresh(&sum) && !chosen.contains(&sum) {
                    chosen.push(sum.clone());
                    if chosen.len() == budget {
                        break 'outer;
                    }
                }
            }
        }
        chosen.into_iter().map(Edit::Erase).collect()
    }
}

/// Targets points of small flats through the newest query and recent queries,
/// lowest dimension first. Erases them, or corrupts them to `truth + constant`.
pub struct SpanStrategy {
    params: StrategyParams,
    corrupt: bool,
}

impl SpanStrategy {
    fn targets(&self, view: &OracleView, budget: usize) -> Vec<Point> {
        let f = view.field();
        let log = view.log();
        let Some(newest) = log.last().map(|r| &r.point) else {
            return Vec::new();
        };
        if view.exhausted() {
            return Vec::new();
        }
        // distinct recent points other than the newest, newest first
        let mut others: Vec<&Point> = Vec::new();
        for r in log.iter().rev().skip(1) {
            if others.len() + 1 >= self.params.window {
                break;
            }
            if &r.point != newest && !others.contains(&&r.point) {
                others.push(&r.point);
            }
        }
        let dirs: Vec<Point> = others
            .iter()
            .map(|w| w.iter().zip(newest).map(|(&a, &b)| f.sub(a, b)).collect())
            .collect();
        let q = f.order();
        let mut chosen: Vec<Point> = Vec::new();
        let mut x = newest.clone();
        for dim in 1..=self.params.max_flat_dim.min(dirs.len()) {
            let mut combo: Vec<usize> = (0..dim).collect();
            loop {
                // every point newest + sum lambda_i dir_i, lambda in F_q^dim
                let mut lambda = vec![0u32; dim];
                loop {
                    let mut pos = 0;
                    while pos < dim {
                        lambda[pos] += 1;
                        if lambda[pos] < q {
                            break;
                        }
                        lambda[pos] = 0;
                        pos += 1;
                    }
                    if pos == dim {
                        break;
                    }
                    if lambda.contains(&0) {
                        // already covered by a lower-dimensional flat
                        continue;
                    }
                    x.copy_from_slice(newest);
                    for (&l, &c) in lambda.iter().zip(&combo) {
                        for (xi, &di) in x.iter_mut().zip(&dirs[c]) {
                            *xi = f.add(*xi, f.mul(Fe(l), di));
                        }
                    }
                    if view.is_fresh(&x) && !chosen.contains(&x) {
                        chosen.push(x.clone());
                        if chosen.len() == budget {
                            return chosen;
                        }
                    }
                }
                if !next_combination(&mut combo, dirs.len()) {
                    break;
                }
            }
        }
        chosen
    }
}

/// Advances `combo` to the next increasing `combo.len()`-subset of `0..n`.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl AdversaryStrategy for SpanStrategy {
    fn name(&self) -> &str {
        if self.corrupt {
            "value-corruptor"
        } else {
            "span-eraser"
        }
    }

    fn step(&mut self, view: &OracleView, budget: usize) -> Vec<Edit> {
        let targets = self.targets(view, budget);
        if !self.corrupt {
            return targets.into_iter().map(Edit::Erase).collect();
        }
        let f = view.field();
        let c = match f.from_int(self.params.constant as i64) {
            Fe::ZERO => Fe::ONE,
            c => c,
        };
        targets
            .into_iter()
            .map(|x| {
                let v = f.add(view.truth(&x), c);
                Edit::Corrupt(x, v)
            })
            .collect()
    }
}

/// Uniform fresh points; corruptions get uniform values.
pub struct RandomStrategy {
    rng: ChaCha8Rng,
    corrupt: bool,
}

impl AdversaryStrategy for RandomStrategy {
    fn name(&self) -> &str {
        if self.corrupt {
            "random-corruptor"
        } else {
            "random-eraser"
        }
    }

    fn step(&mut self, view: &OracleView, budget: usize) -> Vec<Edit> {
        let q = view.field().order();
        let n = view.arity();
        let mut edits = Vec::with_capacity(budget);
        if view.exhausted() {
            return edits;
        }
        let mut attempts = 0;
        while edits.len() < budget && attempts < 64 * budget {
            attempts += 1;
            let x: Point = (0..n).map(|_| Fe(self.rng.gen_range(0..q))).collect();
            if !view.is_fresh(&x) {
                continue;
            }
            edits.push(if self.corrupt {
                Edit::Corrupt(x, Fe(self.rng.gen_range(0..q)))
            } else {
                Edit::Erase(x)
            });
        }
        edits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::poly::{all_points, random_polynomial};

    fn poly(text: &str) -> GroundTruth {
        GroundTruth::Polynomial(SparsePolynomial::parse(text).unwrap())
    }

    fn oracle(text: &str, mode: AdversaryMode, t: u64, name: &str) -> AdversarialOracle {
        let strategy = builtin_strategy(name, &StrategyParams::default()).unwrap();
        AdversarialOracle::new(poly(text), mode, t, strategy)
    }

    /// Erases whatever was just queried.
    struct EraseLast;

    impl AdversaryStrategy for EraseLast {
        fn name(&self) -> &str {
            "erase-last"
        }

        fn step(&mut self, view: &OracleView, _: usize) -> Vec<Edit> {
            vec![Edit::Erase(view.log().last().unwrap().point.clone())]
        }
    }

    /// Asks for far more than the budget.
    struct Greedy;

    impl AdversaryStrategy for Greedy {
        fn name(&self) -> &str {
            "greedy"
        }

        fn step(&mut self, view: &OracleView, _: usize) -> Vec<Edit> {
            all_points(view.field().order(), view.arity()).filter(|x| view.is_fresh(x)).map(Edit::Erase).collect()
        }
    }

    #[test]
    fn honest_oracle_returns_truth() {
        let mut o = AdversarialOracle::honest(poly("q=3 n=2; x1^2 + 2"));
        for x in all_points(3, 2) {
            let expected = if x[0].is_zero() { Fe(2) } else { Fe(0) };
            assert_eq!(o.query(&x), Answer::Value(expected));
        }
        let s = o.stats();
        assert_eq!((s.queries, s.erased_hits, s.distinct_points, s.budget_spent), (9, 0, 9, 0));
    }

    #[test]
    fn fresh_stats_are_zero() {
        assert_eq!(oracle("q=2 n=2; x1", AdversaryMode::Erasure, 3, "span-eraser").stats(), OracleStats::default());
    }

    #[test]
    fn erasing_the_last_query_hits_on_repeat() {
        let mut o = AdversarialOracle::new(poly("q=2 n=2; x1"), AdversaryMode::Erasure, 1, Box::new(EraseLast));
        let x = [Fe::ONE, Fe::ZERO];
        assert_eq!(o.query(&x), Answer::Value(Fe::ONE));
        assert_eq!(o.query(&x), Answer::Erased);
        assert_eq!(o.stats().erased_hits, 1);
        assert_eq!(o.stats().distinct_points, 1);
    }

    #[test]
    fn budget_is_per_query() {
        let mut o = AdversarialOracle::new(poly("q=2 n=5; x1"), AdversaryMode::Erasure, 3, Box::new(Greedy));
        for (i, x) in all_points(2, 5).take(5).enumerate() {
            o.query(&x);
            assert!(o.erased().len() <= 3 * (i + 1));
        }
        assert_eq!(o.erased().len(), 15);
        assert_eq!(o.stats().budget_spent, 15);
    }

    /// Stays idle until the third query, then asks for everything.
    struct Sleeper(u32);

    impl AdversaryStrategy for Sleeper {
        fn name(&self) -> &str {
            "sleeper"
        }

        fn step(&mut self, view: &OracleView, budget: usize) -> Vec<Edit> {
            self.0 += 1;
            if self.0 < 3 {
                return Vec::new();
            }
            all_points(view.field().order(), view.arity()).filter(|x| view.is_fresh(x)).take(budget + 5).map(Edit::Erase).collect()
        }
    }

    #[test]
    fn banking_accumulates_unused_budget() {
        let pts: Vec<Point> = all_points(2, 4).collect();
        for (banking, expected) in [(false, 1), (true, 3)] {
            let mut o = AdversarialOracle::new(poly("q=2 n=4; x1"), AdversaryMode::Erasure, 1, Box::new(Sleeper(0)))
                .with_banking(banking);
            for x in &pts[..3] {
                o.query(x);
            }
            assert_eq!(o.stats().budget_spent, expected);
            assert_eq!(o.erased().len(), expected as usize);
        }
    }

    #[test]
    fn fresh_count_tracks_the_union() {
        let mut o = AdversarialOracle::new(poly("q=2 n=3; x1"), AdversaryMode::Erasure, 2, Box::new(Greedy));
        let pts: Vec<Point> = all_points(2, 3).collect();
        o.query(&pts[0]);
        assert_eq!(o.view.fresh_remaining(), Some(5));
        // re-querying an erased point touches nothing new
        o.query(&pts[1]);
        assert_eq!(o.view.fresh_remaining(), Some(3));
        for x in &pts {
            o.query(x);
        }
        assert_eq!(o.view.fresh_remaining(), Some(0));
        let mut touched: HashSet<Point> = o.erased().clone();
        touched.extend(o.log().iter().map(|r| r.point.clone()));
        assert_eq!(touched.len(), 8);
    }

    #[test]
    fn null_strategy_never_erases() {
        let mut o = oracle("q=2 n=3; x1", AdversaryMode::Erasure, 5, "null");
        for x in all_points(2, 3) {
            o.query(&x);
        }
        assert!(o.erased().is_empty());
    }

    #[test]
    fn pairwise_sum_erases_the_sum() {
        let mut o = oracle("q=2 n=3; x1", AdversaryMode::Erasure, 1, "pairwise-sum");
        let a = [Fe(1), Fe(0), Fe(1)];
        let b = [Fe(0), Fe(1), Fe(1)];
        o.query(&a);
        o.query(&b);
        assert!(o.erased().contains(&vec![Fe(1), Fe(1), Fe(0)]));
        assert_eq!(o.query(&[Fe(1), Fe(1), Fe(0)]), Answer::Erased);
    }

    #[test]
    fn span_eraser_completes_a_two_flat() {
        let mut o = oracle("q=2 n=4; x1", AdversaryMode::Erasure, 1, "span-eraser");
        let a = vec![Fe(0), Fe(1), Fe(0), Fe(0)];
        let b = vec![Fe(1), Fe(1), Fe(0), Fe(0)];
        let c = vec![Fe(0), Fe(1), Fe(1), Fe(0)];
        let fourth = vec![Fe(1), Fe(1), Fe(1), Fe(0)];
        o.query(&a);
        o.query(&b);
        assert!(o.erased().is_empty());
        o.query(&c);
        assert_eq!(o.erased().iter().collect::<Vec<_>>(), vec![&fourth]);
        assert_eq!(o.query(&fourth), Answer::Erased);
    }

    #[test]
    fn span_eraser_uses_lines_over_larger_fields() {
        let mut o = oracle("q=5 n=2; x1", AdversaryMode::Erasure, 2, "span-eraser");
        let a = vec![Fe(0), Fe(0)];
        let b = vec![Fe(1), Fe(2)];
        o.query(&a);
        o.query(&b);
        let f = make_field(5, 1).unwrap();
        for x in o.erased() {
            // on the line through a and b: x = lambda * b
            let lambda = x[0];
            assert_eq!(x[1], f.mul(lambda, Fe(2)));
        }
        assert_eq!(o.erased().len(), 2);
    }

    #[test]
    fn modes_restrict_answers() {
        let f3 = make_field(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let truth = random_polynomial(f3.clone(), 3, 2, 0.5, &mut rng);
        for name in ["span-eraser", "random-eraser", "pairwise-sum"] {
            let s = builtin_strategy(name, &StrategyParams::default()).unwrap();
            let mut o = AdversarialOracle::new(GroundTruth::Polynomial(truth.clone()), AdversaryMode::Erasure, 2, s);
            for _ in 0..60 {
                let x: Point = (0..3).map(|_| Fe(rng.gen_range(0..3))).collect();
                if let Answer::Value(v) = o.query(&x) {
                    assert_eq!(v, truth.eval(&x));
                }
            }
            assert!(o.corrupted().is_empty());
        }
        for name in ["value-corruptor", "random-corruptor"] {
            let s = builtin_strategy(name, &StrategyParams::default()).unwrap();
            let mut o = AdversarialOracle::new(GroundTruth::Polynomial(truth.clone()), AdversaryMode::Corruption, 2, s);
            let mut substituted = 0;
            for _ in 0..60 {
                let x: Point = (0..3).map(|_| Fe(rng.gen_range(0..3))).collect();
                let was_corrupted = o.corrupted().contains_key(&x);
                assert_ne!(o.query(&x), Answer::Erased);
                substituted += was_corrupted as u64;
            }
            assert_eq!(o.stats().corrupted_hits, substituted);
            assert!(o.erased().is_empty());
        }
    }

    #[test]
    fn value_corruptor_shifts_by_the_constant() {
        let mut o = oracle("q=5 n=2; x1*x2", AdversaryMode::Corruption, 3, "value-corruptor");
        o.query(&[Fe(1), Fe(1)]);
        o.query(&[Fe(2), Fe(3)]);
        let f = make_field(5, 1).unwrap();
        for (x, &v) in o.corrupted() {
            assert_eq!(v, f.add(f.mul(x[0], x[1]), Fe::ONE));
        }
        assert!(!o.corrupted().is_empty());
    }

    #[test]
    fn mismatched_edits_are_ignored() {
        let mut o = oracle("q=2 n=3; x1", AdversaryMode::Corruption, 2, "span-eraser");
        for x in all_points(2, 3) {
            o.query(&x);
        }
        assert!(o.erased().is_empty() && o.corrupted().is_empty());
        assert_eq!(o.stats().budget_spent, 0);
    }

    #[test]
    fn unknown_strategy_is_an_error() {
        assert!(matches!(builtin_strategy("nope", &StrategyParams::default()), Err(StrategyError::Unknown(_))));
    }

    #[test]
    fn replay_reproduces_outcomes_and_log_exports() {
        let run = || {
            let params = StrategyParams { seed: 11, ..Default::default() };
            let s = builtin_strategy("random-eraser", &params).unwrap();
            let mut o = AdversarialOracle::new(poly("q=2 n=4; x1*x2"), AdversaryMode::Erasure, 3, s);
            for x in all_points(2, 4).chain(all_points(2, 4)) {
                o.query(&x);
            }
            o
        };
        let (a, b) = (run(), run());
        assert_eq!(a.log(), b.log());
        assert_eq!(a.log().len(), 32);
        assert!(a.stats().erased_hits > 0);
        let mut buf = Vec::new();
        a.export_log(&mut buf).unwrap();
        let lines: Vec<QueryRecord> = String::from_utf8(buf)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines, a.log());
        // once erased, always erased
        let first_erased = a.log().iter().position(|r| r.outcome == Answer::Erased).unwrap();
        let p = &a.log()[first_erased].point;
        assert!(a.log()[first_erased..].iter().filter(|r| &r.point == p).all(|r| r.outcome == Answer::Erased));
    }

    #[test]
    fn record_json_shape() {
        let r = QueryRecord { ordinal: 0, point: vec![Fe(1), Fe(0)], outcome: Answer::Erased };
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"ordinal":0,"point":[1,0],"outcome":"erased"}"#);
        let r = QueryRecord { outcome: Answer::Value(Fe(3)), ..r };
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"ordinal":0,"point":[1,0],"outcome":{"value":3}}"#);
    }

    #[test]
    fn combinations_enumerate_all_subsets() {
        let mut combo = vec![0, 1];
        let mut seen = vec![combo.clone()];
        while next_combination(&mut combo, 4) {
            seen.push(combo.clone());
        }
        assert_eq!(seen.len(), 6);
    }
}
