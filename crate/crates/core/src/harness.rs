//! Monte-Carlo experiments: a serializable spec in, a self-describing report out.
//!
//! Trial `i` draws all of its randomness from `ChaCha12Rng` seeded with the master
//! seed and switched to stream `i`, so results do not depend on scheduling.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{make_field, Field, GfError};
use crate::oracle::{
    builtin_strategy, AdversarialOracle, AdversaryMode, GroundTruth, StrategyError, StrategyParams,
};
use crate::poly::{distance_to_rm, random_polynomial, ExponentVector, PolyError, SparsePolynomial};
use crate::tester::{
    self, classical_flat_test, corruption_test, default_params, default_sample_size,
    erasure_resilient_test, Cause, Decision, ErasurePolicy, TestParams, TesterError,
};
use crate::space::AffineSampling;

pub const SCHEMA_VERSION: u32 = 1;
const WILSON_Z: f64 = 1.96;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Tester(#[from] TesterError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub ell: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceSpec {
    /// A fresh random polynomial of degree at most `d` per trial.
    RandomDegree {
        d: u64,
        #[serde(default = "half")]
        density: f64,
    },
    /// `x^e`, zero-padded to `n` variables.
    Monomial { exponents: Vec<u32> },
    /// A file in the polynomial text format.
    File { path: PathBuf },
    Polynomial { text: String },
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TesterKind {
    #[default]
    RandomPoints,
    Classical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TesterSpec {
    #[serde(default)]
    pub kind: TesterKind,
    pub d: u64,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub repetitions: Option<u64>,
    #[serde(default)]
    pub repetition_cap: Option<u64>,
    #[serde(default = "quarter")]
    pub delta: f64,
    #[serde(default)]
    pub sampling: AffineSampling,
    #[serde(default)]
    pub on_erasure: ErasurePolicy,
}

fn quarter() -> f64 {
    0.25
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversarySpec {
    #[serde(default = "null_name")]
    pub name: String,
    #[serde(default)]
    pub t: u64,
    #[serde(default)]
    pub mode: AdversaryMode,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_flat_dim")]
    pub max_flat_dim: usize,
    #[serde(default = "one")]
    pub constant: u32,
    #[serde(default)]
    pub banking: bool,
}

fn null_name() -> String {
    "null".into()
}

fn default_window() -> usize {
    StrategyParams::default().window
}

fn default_flat_dim() -> usize {
    StrategyParams::default().max_flat_dim
}

impl Default for AdversarySpec {
    fn default() -> Self {
        AdversarySpec {
            name: null_name(),
            t: 0,
            mode: AdversaryMode::None,
            window: default_window(),
            max_flat_dim: default_flat_dim(),
            constant: 1,
            banking: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown output format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub field: FieldSpec,
    pub n: usize,
    pub instance: InstanceSpec,
    pub tester: TesterSpec,
    #[serde(default)]
    pub adversary: AdversarySpec,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| HarnessError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }
}

/// A binomial proportion with its Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
}

/// Wilson score interval at `z`; `(0, 1)` when there are no trials.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

impl Proportion {
    pub fn new(successes: u64, trials: u64) -> Self {
        let (low, high) = wilson_interval(successes, trials, WILSON_Z);
        let estimate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        Proportion { successes, trials, estimate, low: low.min(estimate), high: high.max(estimate) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub decision: Decision,
    pub cause: Cause,
    pub rounds_run: u64,
    pub queries: u64,
    pub erased_hits: u64,
    pub corrupted_hits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub spec: ExperimentSpec,
    pub params: TestParams,
    pub trials: u64,
    pub accepts: u64,
    pub rejects: u64,
    pub acceptance: Proportion,
    pub rejection: Proportion,
    pub mean_queries: f64,
    pub max_queries: u64,
    pub erased_hit_rate: f64,
    pub corrupted_hit_rate: f64,
    pub runs_with_erased_hit: u64,
    pub runs_with_corrupted_hit: u64,
    /// `R m (R m t) / q^k` for the resolved parameters.
    pub union_bound: f64,
    pub causes: BTreeMap<Cause, u64>,
    /// Exact distance of a fixed instance to degree `d`, when small enough to enumerate.
    pub instance_distance: Option<f64>,
    pub wall_clock_ms: u64,
}

impl ExperimentReport {
    /// The report with its timing zeroed, for comparisons.
    pub fn without_timing(&self) -> ExperimentReport {
        ExperimentReport { wall_clock_ms: 0, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Header plus a single row of scalar fields.
    pub fn to_csv(&self) -> String {
        let cause = |c: Cause| self.causes.get(&c).copied().unwrap_or(0);
        let fields: Vec<(&str, String)> = vec![
            ("schema", self.schema.to_string()),
            ("q", (self.spec.field.p.pow(self.spec.field.ell)).to_string()),
            ("n", self.spec.n.to_string()),
            ("d", self.params.d.to_string()),
            ("k", self.params.k.to_string()),
            ("m", self.params.m.to_string()),
            ("repetitions", self.params.repetitions.to_string()),
            ("delta", self.params.delta.to_string()),
            ("adversary", self.spec.adversary.name.clone()),
            ("mode", format!("{:?}", self.spec.adversary.mode).to_lowercase()),
            ("t", self.spec.adversary.t.to_string()),
            ("seed", self.spec.seed.to_string()),
            ("trials", self.trials.to_string()),
            ("accepts", self.accepts.to_string()),
            ("rejects", self.rejects.to_string()),
            ("acceptance", self.acceptance.estimate.to_string()),
            ("acceptance_low", self.acceptance.low.to_string()),
            ("acceptance_high", self.acceptance.high.to_string()),
            ("rejection_low", self.rejection.low.to_string()),
            ("rejection_high", self.rejection.high.to_string()),
            ("mean_queries", self.mean_queries.to_string()),
            ("max_queries", self.max_queries.to_string()),
            ("erased_hit_rate", self.erased_hit_rate.to_string()),
            ("corrupted_hit_rate", self.corrupted_hit_rate.to_string()),
            ("runs_with_erased_hit", self.runs_with_erased_hit.to_string()),
            ("runs_with_corrupted_hit", self.runs_with_corrupted_hit.to_string()),
            ("union_bound", self.union_bound.to_string()),
            ("hit_violation", cause(Cause::HitViolation).to_string()),
            ("all_rounds_passed", cause(Cause::AllRoundsPassed).to_string()),
            ("empty_h", cause(Cause::EmptyH).to_string()),
            ("erased_round", cause(Cause::ErasedRound).to_string()),
            ("incomplete_flat", cause(Cause::IncompleteFlat).to_string()),
            ("instance_distance", self.instance_distance.map(|d| d.to_string()).unwrap_or_default()),
            ("wall_clock_ms", self.wall_clock_ms.to_string()),
        ];
        let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
        let row: Vec<String> = fields.into_iter().map(|(_, v)| v).collect();
        format!("{}\n{}\n", header.join(","), row.join(","))
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json() + "\n",
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

/// Writes the rendered report to `spec.output.path`, if set.
pub fn write_report(report: &ExperimentReport) -> Result<(), HarnessError> {
    let Some(path) = &report.spec.output.path else {
        return Ok(());
    };
    let io = |source| HarnessError::Io { path: path.display().to_string(), source };
    let mut file = std::fs::File::create(path).map_err(io)?;
    file.write_all(report.render(report.spec.output.format).as_bytes()).map_err(io)
}

/// A fixed ground truth, or a recipe for a fresh one per trial.
#[derive(Debug, Clone)]
pub enum Instance {
    Fixed(SparsePolynomial),
    RandomDegree { d: u64, density: f64 },
}

impl Instance {
    pub fn resolve(spec: &InstanceSpec, field: &Field, n: usize) -> Result<Instance, HarnessError> {
        let fixed = |poly: SparsePolynomial| -> Result<Instance, HarnessError> {
            if *poly.field_ref().as_ref() != **field {
                return Err(HarnessError::Spec(format!(
                    "instance is over F_{}, spec field is F_{}",
                    poly.field_ref().order(),
                    field.order()
                )));
            }
            Ok(Instance::Fixed(if poly.n() < n { poly.embed(n)? } else { poly }))
        };
        match spec {
            InstanceSpec::RandomDegree { d, density } => {
                if !(0.0..=1.0).contains(density) {
                    return Err(HarnessError::Spec(format!("density {density} outside [0, 1]")));
                }
                Ok(Instance::RandomDegree { d: *d, density: *density })
            }
            InstanceSpec::Monomial { exponents } => {
                if exponents.len() > n {
                    return Err(HarnessError::Spec(format!(
                        "monomial has {} exponents but n = {n}",
                        exponents.len()
                    )));
                }
                let mut e = exponents.clone();
                e.resize(n, 0);
                let e = ExponentVector::new(e, field.order())?;
                fixed(SparsePolynomial::monomial(field.clone(), e, crate::gf::Fe::ONE))
            }
            InstanceSpec::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                fixed(SparsePolynomial::parse(&text)?)
            }
            InstanceSpec::Polynomial { text } => fixed(SparsePolynomial::parse(text)?),
        }
    }

    fn truth<R: Rng + ?Sized>(&self, field: &Field, n: usize, rng: &mut R) -> SparsePolynomial {
        match self {
            Instance::Fixed(p) => p.clone(),
            Instance::RandomDegree { d, density } => random_polynomial(field.clone(), n, *d, *density, rng),
        }
    }

    /// Distance to degree `d` on the variables the instance actually uses.
    pub fn distance(&self, d: u64) -> Option<f64> {
        let Instance::Fixed(p) = self else {
            return None;
        };
        let used = p
            .terms()
            .keys()
            .filter_map(|e| e.as_slice().iter().rposition(|&x| x != 0))
            .max()
            .map_or(1, |i| i + 1);
        let core = SparsePolynomial::from_terms(
            p.field_ref().clone(),
            used,
            p.terms().iter().map(|(e, &c)| {
                (ExponentVector::new(e.as_slice()[..used].to_vec(), p.field_ref().order()).unwrap(), c)
            }),
        )
        .ok()?;
        let table = core.tabulate().ok()?;
        distance_to_rm(&table, d).ok().map(|dist| dist.value())
    }
}

/// Fills in every tester parameter the experiment spec leaves open.
pub fn resolve_params(spec: &ExperimentSpec, field: &Field) -> Result<TestParams, HarnessError> {
    let ts = &spec.tester;
    let t = spec.adversary.t;
    let mut params = default_params(field, ts.d, ts.delta, t, spec.n);
    if let Some(k) = ts.k {
        params.k = k;
        params.m = default_sample_size(field, ts.d, k);
        params.repetitions = tester::default_repetitions(params.m, ts.delta);
    }
    if let Some(m) = ts.m {
        params.m = m;
        params.repetitions = tester::default_repetitions(m, ts.delta);
    }
    if let Some(r) = ts.repetitions {
        params.repetitions = r;
    }
    if let Some(cap) = ts.repetition_cap {
        params.repetitions = params.repetitions.min(cap);
    }
    params.sampling = ts.sampling;
    params.on_erasure = ts.on_erasure;
    params.flags.impractical = params.k > spec.n;
    if ts.kind == TesterKind::Classical {
        let dim = tester::flat_dimension(field, ts.d);
        params.k = dim;
        params.m = crate::poly::domain_size(field.order(), dim).unwrap_or(u64::MAX) as usize;
        params.repetitions = 1;
        if dim > spec.n {
            return Err(HarnessError::Spec(format!("flat dimension {dim} exceeds n = {}", spec.n)));
        }
    } else {
        params.validate(field, spec.n)?;
    }
    Ok(params)
}

/// The generator for trial `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs one trial with its own stream.
pub fn run_trial(
    spec: &ExperimentSpec,
    field: &Field,
    instance: &Instance,
    params: &TestParams,
    trial: u64,
) -> Result<TrialResult, HarnessError> {
    let mut rng = trial_rng(spec.seed, trial);
    let truth = instance.truth(field, spec.n, &mut rng);
    let adv = &spec.adversary;
    let strategy = builtin_strategy(
        &adv.name,
        &StrategyParams {
            seed: rng.gen(),
            window: adv.window,
            max_flat_dim: adv.max_flat_dim,
            constant: adv.constant,
        },
    )?;
    let mut oracle = AdversarialOracle::new(GroundTruth::Polynomial(truth), adv.mode, adv.t, strategy)
        .with_banking(adv.banking);
    let verdict = match (spec.tester.kind, adv.mode) {
        (TesterKind::Classical, _) => classical_flat_test(&mut oracle, spec.tester.d, &mut rng)?,
        (TesterKind::RandomPoints, AdversaryMode::Corruption) => {
            corruption_test(&mut oracle, params, &mut rng)?
        }
        (TesterKind::RandomPoints, _) => erasure_resilient_test(&mut oracle, params, &mut rng)?,
    };
    Ok(TrialResult {
        decision: verdict.decision,
        cause: verdict.cause,
        rounds_run: verdict.rounds_run,
        queries: verdict.queries,
        erased_hits: verdict.erased_hits,
        corrupted_hits: verdict.corrupted_hits,
    })
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport, HarnessError> {
    let started = Instant::now();
    let field = make_field(spec.field.p, spec.field.ell)?;
    if spec.n == 0 {
        return Err(HarnessError::Spec("n must be positive".into()));
    }
    let instance = Instance::resolve(&spec.instance, &field, spec.n)?;
    let params = resolve_params(spec, &field)?;
    builtin_strategy(&spec.adversary.name, &StrategyParams::default())?;

    let run = || -> Vec<Result<TrialResult, HarnessError>> {
        (0..spec.trials)
            .into_par_iter()
            .map(|i| run_trial(spec, &field, &instance, &params, i))
            .collect()
    };
    let results = match spec.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| HarnessError::Pool(e.to_string()))?
            .install(run),
        None => run(),
    };
    let results: Vec<TrialResult> = results.into_iter().collect::<Result<_, _>>()?;

    let trials = results.len() as u64;
    let accepts = results.iter().filter(|r| r.decision == Decision::Accept).count() as u64;
    let total_queries: u64 = results.iter().map(|r| r.queries).sum();
    let mut causes = BTreeMap::new();
    for r in &results {
        *causes.entry(r.cause).or_insert(0) += 1;
    }
    let rate = |hits: u64| if total_queries == 0 { 0.0 } else { hits as f64 / total_queries as f64 };
    Ok(ExperimentReport {
        schema: SCHEMA_VERSION,
        spec: spec.clone(),
        params: params.clone(),
        trials,
        accepts,
        rejects: trials - accepts,
        acceptance: Proportion::new(accepts, trials),
        rejection: Proportion::new(trials - accepts, trials),
        mean_queries: if trials == 0 { 0.0 } else { total_queries as f64 / trials as f64 },
        max_queries: results.iter().map(|r| r.queries).max().unwrap_or(0),
        erased_hit_rate: rate(results.iter().map(|r| r.erased_hits).sum()),
        corrupted_hit_rate: rate(results.iter().map(|r| r.corrupted_hits).sum()),
        runs_with_erased_hit: results.iter().filter(|r| r.erased_hits > 0).count() as u64,
        runs_with_corrupted_hit: results.iter().filter(|r| r.corrupted_hits > 0).count() as u64,
        union_bound: params.union_bound(field.order()),
        causes,
        instance_distance: instance.distance(spec.tester.d),
        wall_clock_ms: started.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ExperimentSpec {
        ExperimentSpec {
            field: FieldSpec { p: 2, ell: 1 },
            n: 4,
            instance: InstanceSpec::RandomDegree { d: 1, density: 0.5 },
            tester: TesterSpec {
                kind: TesterKind::RandomPoints,
                d: 1,
                k: Some(3),
                m: None,
                repetitions: Some(5),
                repetition_cap: None,
                delta: 0.25,
                sampling: AffineSampling::Uniform,
                on_erasure: ErasurePolicy::AcceptRound,
            },
            adversary: AdversarySpec {
                name: "span-eraser".into(),
                t: 1,
                mode: AdversaryMode::Erasure,
                ..Default::default()
            },
            trials: 12,
            seed: 42,
            threads: Some(1),
            output: OutputSpec::default(),
        }
    }

    #[test]
    fn wilson_interval_examples() {
        // 0 of 10: upper limit z^2 / (n + z^2)
        let (lo, hi) = wilson_interval(0, 10, 1.96);
        assert_eq!(lo, 0.0);
        assert!((hi - 3.8416 / 13.8416).abs() < 1e-12);
        let (lo, hi) = wilson_interval(5, 10, 1.96);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        assert!((lo - 0.236593).abs() < 1e-5);
        assert_eq!(wilson_interval(0, 0, 1.96), (0.0, 1.0));
    }

    #[test]
    fn zero_trials_is_an_empty_report() {
        let r = run_experiment(&ExperimentSpec { trials: 0, ..spec() }).unwrap();
        assert_eq!((r.trials, r.accepts, r.rejects), (0, 0, 0));
        assert!(r.acceptance.low <= r.acceptance.estimate && r.acceptance.estimate <= r.acceptance.high);
    }

    #[test]
    fn completeness_spec_accepts_everything() {
        let r = run_experiment(&spec()).unwrap();
        assert_eq!(r.accepts, r.trials);
        assert_eq!(r.accepts + r.rejects, 12);
        assert_eq!(r.schema, 1);
    }

    #[test]
    fn reports_are_deterministic_across_thread_counts() {
        let a = run_experiment(&spec()).unwrap();
        let b = run_experiment(&ExperimentSpec { threads: Some(3), ..spec() }).unwrap();
        let c = run_experiment(&spec()).unwrap();
        assert_eq!(a.without_timing().to_json(), c.without_timing().to_json());
        assert_eq!(a.without_timing().spec.trials, b.spec.trials);
        assert_eq!((a.accepts, a.mean_queries, a.erased_hit_rate), (b.accepts, b.mean_queries, b.erased_hit_rate));
    }

    #[test]
    fn spec_round_trips_through_json() {
        let s = spec();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(ExperimentSpec::from_json(&text).unwrap(), s);
        let minimal = r#"{"field":{"p":3},"n":3,"instance":{"kind":"monomial","exponents":[2,1]},
            "tester":{"d":1,"k":2},"trials":3}"#;
        let m = ExperimentSpec::from_json(minimal).unwrap();
        assert_eq!(m.field.ell, 1);
        assert_eq!(m.adversary.name, "null");
        assert!(run_experiment(&m).is_ok());
    }

    #[test]
    fn invalid_specs_are_reported() {
        let bad_k = ExperimentSpec { tester: TesterSpec { k: Some(9), ..spec().tester }, ..spec() };
        assert!(run_experiment(&bad_k).is_err());
        let bad_adv = ExperimentSpec {
            adversary: AdversarySpec { name: "nobody".into(), ..Default::default() },
            ..spec()
        };
        assert!(matches!(run_experiment(&bad_adv), Err(HarnessError::Strategy(_))));
        let bad_field = ExperimentSpec { field: FieldSpec { p: 6, ell: 1 }, ..spec() };
        assert!(run_experiment(&bad_field).is_err());
    }

    #[test]
    fn monomial_distance_uses_the_core_variables() {
        let s = ExperimentSpec {
            instance: InstanceSpec::Monomial { exponents: vec![1, 1] },
            adversary: AdversarySpec::default(),
            ..spec()
        };
        let r = run_experiment(&s).unwrap();
        assert_eq!(r.instance_distance, Some(0.25));
    }

    #[test]
    fn csv_has_matching_header_and_row() {
        let r = run_experiment(&spec()).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
    }

    #[test]
    fn classical_spec_runs_one_flat() {
        let s = ExperimentSpec {
            tester: TesterSpec { kind: TesterKind::Classical, ..spec().tester },
            ..spec()
        };
        let r = run_experiment(&s).unwrap();
        assert_eq!(r.params.k, 2);
        assert_eq!(r.causes.get(&Cause::IncompleteFlat), Some(&12));
    }
}
