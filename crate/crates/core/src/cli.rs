//! Command-line front end. Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::charfind::{find_characterization, verify_characterization, Characterization};
use crate::gf::{make_field, Fe, Field};
use crate::harness::{
    self, AdversarySpec, ExperimentSpec, FieldSpec, InstanceSpec, OutputFormat, OutputSpec,
    TesterKind, TesterSpec,
};
use crate::oracle::{builtin_strategy, AdversarialOracle, AdversaryMode, GroundTruth, StrategyParams};
use crate::poly::{distance_to_rm, Point, SparsePolynomial};
use crate::space::AffineSampling;
use crate::tester::{self, ErasurePolicy};

#[derive(Debug, Parser)]
#[command(name = "rmtest", version, about = "Low-degree testing against online adversaries")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Field characteristic
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// Extension degree, q = p^ell
    #[arg(long, global = true, default_value_t = 1)]
    ell: u32,
    /// Number of variables of the tested function
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Restriction dimension
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Degree bound
    #[arg(long, global = true, default_value_t = 1)]
    d: u64,
    #[arg(long, global = true, default_value_t = 0.25)]
    delta: f64,
    /// Adversary budget per query
    #[arg(long, global = true, default_value_t = 0)]
    t: u64,
    /// Sample size |S|
    #[arg(long, global = true)]
    m: Option<usize>,
    #[arg(long, global = true, default_value_t = 100)]
    trials: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value = "null")]
    adversary: String,
    #[arg(long, global = true, default_value = "none", value_parser = ["none", "erasure", "corruption"])]
    mode: String,
    /// Report format
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    out: String,
    /// Experiment spec file (JSON)
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Instance in the polynomial text format
    #[arg(long, conflicts_with = "instance_file")]
    instance: Option<String>,
    /// File holding an instance in the polynomial text format
    #[arg(long)]
    instance_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TestArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Density of the random instance used when none is given
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long)]
    repetitions: Option<u64>,
    #[arg(long)]
    repetition_cap: Option<u64>,
    #[arg(long, default_value = "uniform", value_parser = ["uniform", "injective"])]
    sampling: String,
    #[arg(long, default_value = "accept-round", value_parser = ["accept-round", "drop-erased"])]
    on_erasure: String,
    /// Write the query log as JSON lines
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find a local characterization supported on a random or explicit point set
    Characterize {
        /// Explicit points, e.g. "0,0;0,1;1,0;1,1"
        #[arg(long)]
        points: Option<String>,
    },
    /// One full tester run with its audit
    Test(TestArgs),
    /// Monte-Carlo experiment from flags or --spec
    Experiment {
        #[command(flatten)]
        test: TestArgs,
        #[arg(long, value_parser = ["random-points", "classical"], default_value = "random-points")]
        tester: String,
        /// Random instances of this degree (defaults to --d)
        #[arg(long)]
        instance_degree: Option<u64>,
        /// Exponent vector of a monomial instance, e.g. "1,1"
        #[arg(long)]
        monomial: Option<String>,
        /// Write the report here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// The classical flat tester and the random-points tester against the span eraser
    AttackDemo,
    /// Exact distance of an instance to degree d
    Distance {
        #[command(flatten)]
        instance: InstanceArgs,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match dispatch(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Characterize { points } => characterize(g, points.as_deref(), out),
        Command::Test(args) => test(g, args, out),
        Command::Experiment { test, tester, instance_degree, monomial, output, threads } => {
            let spec = match &g.spec {
                Some(path) => ExperimentSpec::load(path)?,
                None => experiment_spec(g, test, tester, *instance_degree, monomial.as_deref(), *threads)?,
            };
            let mut spec = spec;
            if output.is_some() {
                spec.output.path = output.clone();
            }
            if g.spec.is_none() || g.out != "json" {
                spec.output.format = parse_format(&g.out)?;
            }
            let report = harness::run_experiment(&spec)?;
            if spec.output.path.is_some() {
                harness::write_report(&report)?;
            } else {
                out.write_all(report.render(spec.output.format).as_bytes())?;
            }
            Ok(())
        }
        Command::AttackDemo => attack_demo(g, out),
        Command::Distance { instance } => {
            let poly = read_instance(instance)?
                .ok_or_else(|| CliError::Usage("distance needs --instance or --instance-file".into()))?;
            let table = poly.tabulate()?;
            let dist = distance_to_rm(&table, g.d)?;
            writeln!(out, "{}", dist.value())?;
            Ok(())
        }
    }
}

fn field_of(g: &Global) -> Result<Field, CliError> {
    Ok(make_field(g.p, g.ell)?)
}

fn parse_format(s: &str) -> Result<OutputFormat, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn parse_mode(s: &str) -> Result<AdversaryMode, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn parse_sampling(s: &str) -> AffineSampling {
    if s == "injective" {
        AffineSampling::Injective
    } else {
        AffineSampling::Uniform
    }
}

fn parse_policy(s: &str) -> ErasurePolicy {
    if s == "drop-erased" {
        ErasurePolicy::DropErased
    } else {
        ErasurePolicy::AcceptRound
    }
}

fn read_instance(args: &InstanceArgs) -> Result<Option<SparsePolynomial>, CliError> {
    let text = match (&args.instance, &args.instance_file) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?,
        (None, None) => return Ok(None),
    };
    Ok(Some(SparsePolynomial::parse(&text)?))
}

fn parse_points(field: &Field, text: &str) -> Result<Vec<Point>, CliError> {
    let mut points: Vec<Point> = Vec::new();
    for chunk in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
        let point = chunk
            .split(',')
            .map(|c| {
                let v: u32 = c.trim().parse().map_err(|_| CliError::Usage(format!("bad coordinate `{c}`")))?;
                field.check(Fe(v)).map_err(|e| CliError::Usage(e.to_string()))
            })
            .collect::<Result<Point, _>>()?;
        points.push(point);
    }
    points.sort();
    if points.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Usage("repeated point".into()));
    }
    Ok(points)
}

/// `{k, q, d, mode, witness, support: [{point, value}]}`.
pub fn characterization_json(c: &Characterization) -> serde_json::Value {
    let field = crate::poly::Evaluate::field(&c.h);
    let support: Vec<serde_json::Value> = c
        .h
        .entries()
        .iter()
        .map(|(x, v)| serde_json::json!({ "point": x, "value": v }))
        .collect();
    serde_json::json!({
        "k": c.k(),
        "q": field.order(),
        "d": c.d,
        "mode": c.mode,
        "witness": c.witness.as_slice(),
        "support": support,
    })
}

fn characterize(g: &Global, points: Option<&str>, out: &mut dyn Write) -> Result<(), CliError> {
    let field = field_of(g)?;
    let mut rng = ChaCha12Rng::seed_from_u64(g.seed);
    let points = match points {
        Some(text) => parse_points(&field, text)?,
        None => {
            let k = g.k.ok_or_else(|| CliError::Usage("characterize needs --k or --points".into()))?;
            let m = g.m.unwrap_or_else(|| tester::default_sample_size(&field, g.d, k));
            if crate::poly::domain_size(field.order(), k).is_some_and(|size| m as u64 > size) {
                return Err(CliError::Usage(format!("--m {m} exceeds q^k")));
            }
            tester::sample_points(field.order(), k, m, &mut rng)
        }
    };
    let k = match (points.first(), g.k) {
        (Some(x), Some(k)) if x.len() != k => {
            return Err(CliError::Usage(format!("points have {} coordinates, --k is {k}", x.len())))
        }
        (Some(x), _) => x.len(),
        (None, Some(k)) => k,
        (None, None) => return Err(CliError::Usage("empty point set needs --k".into())),
    };
    match find_characterization(&field, k, &points, g.d, &mut rng)? {
        Some(c) => {
            if let Ok(v) = verify_characterization(&c) {
                if !v.passed() {
                    return Err(CliError::Runtime(format!("characterization failed verification: {v:?}")));
                }
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&characterization_json(&c))?)?;
            Ok(())
        }
        None => Err(CliError::Runtime("no characterization is supported on this point set".into())),
    }
}

fn test(g: &Global, args: &TestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let field = field_of(g)?;
    let mut rng = ChaCha12Rng::seed_from_u64(g.seed);
    let given = read_instance(&args.instance)?;
    let n = match (&given, g.n) {
        (Some(p), Some(n)) if n < p.n() => {
            return Err(CliError::Usage(format!("--n {n} is smaller than the instance arity {}", p.n())))
        }
        (_, Some(n)) => n,
        (Some(p), None) => p.n(),
        (None, None) => return Err(CliError::Usage("test needs --n or an instance".into())),
    };
    let truth = match given {
        Some(p) if p.n() < n => p.embed(n)?,
        Some(p) => p,
        None => crate::poly::random_polynomial(field.clone(), n, g.d, args.density, &mut rng),
    };
    let spec = experiment_spec(g, args, "random-points", None, None, None)?;
    let params = harness::resolve_params(&ExperimentSpec { n, ..spec }, &field)?;
    let mode = parse_mode(&g.mode)?;
    let strategy = builtin_strategy(&g.adversary, &StrategyParams { seed: rng.gen(), ..Default::default() })?;
    let mut oracle = AdversarialOracle::new(GroundTruth::Polynomial(truth.clone()), mode, g.t, strategy);
    let verdict = if mode == AdversaryMode::Corruption {
        tester::corruption_test(&mut oracle, &params, &mut rng)?
    } else {
        tester::erasure_resilient_test(&mut oracle, &params, &mut rng)?
    };
    if let Some(path) = &args.log {
        let file = std::fs::File::create(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        oracle.export_log(std::io::BufWriter::new(file))?;
    }
    let mut summary = tester::verdict_json(&verdict);
    summary["instance"] = serde_json::Value::String(truth.to_string());
    summary["audit"] = serde_json::to_value(&verdict.audit)?;
    summary["oracle"] = serde_json::to_value(oracle.stats())?;
    writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
    Ok(())
}

fn experiment_spec(
    g: &Global,
    args: &TestArgs,
    tester: &str,
    instance_degree: Option<u64>,
    monomial: Option<&str>,
    threads: Option<usize>,
) -> Result<ExperimentSpec, CliError> {
    let given = read_instance(&args.instance)?;
    let instance = match (given, monomial) {
        (Some(p), _) => InstanceSpec::Polynomial { text: p.to_string() },
        (None, Some(e)) => InstanceSpec::Monomial {
            exponents: e
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("bad exponent `{x}`"))))
                .collect::<Result<_, _>>()?,
        },
        (None, None) => InstanceSpec::RandomDegree { d: instance_degree.unwrap_or(g.d), density: args.density },
    };
    let n = g.n.ok_or_else(|| CliError::Usage("--n is required".into()));
    Ok(ExperimentSpec {
        field: FieldSpec { p: g.p, ell: g.ell },
        n: match (&instance, n) {
            (_, Ok(n)) => n,
            (InstanceSpec::Polynomial { text }, Err(_)) => SparsePolynomial::parse(text)?.n(),
            (_, Err(e)) => return Err(e),
        },
        instance,
        tester: TesterSpec {
            kind: if tester == "classical" { TesterKind::Classical } else { TesterKind::RandomPoints },
            d: g.d,
            k: g.k,
            m: g.m,
            repetitions: args.repetitions,
            repetition_cap: args.repetition_cap,
            delta: g.delta,
            sampling: parse_sampling(&args.sampling),
            on_erasure: parse_policy(&args.on_erasure),
        },
        adversary: AdversarySpec {
            name: g.adversary.clone(),
            t: g.t,
            mode: parse_mode(&g.mode)?,
            ..Default::default()
        },
        trials: g.trials,
        seed: g.seed,
        threads,
        output: OutputSpec { path: None, format: parse_format(&g.out)? },
    })
}

fn attack_demo(g: &Global, out: &mut dyn Write) -> Result<(), CliError> {
    let field = field_of(g)?;
    let n = g.n.unwrap_or(8);
    let t = g.t.max(1);
    let d = g.d;
    if (d + 1) as usize > n {
        return Err(CliError::Usage(format!("attack-demo needs n > d, got n = {n}")));
    }
    // x1 x2 ... x_{d+1}
    let instance = InstanceSpec::Monomial { exponents: vec![1; d as usize + 1] };
    let adversary = AdversarySpec {
        name: "span-eraser".into(),
        t,
        mode: AdversaryMode::Erasure,
        ..Default::default()
    };
    let base = ExperimentSpec {
        field: FieldSpec { p: g.p, ell: g.ell },
        n,
        instance,
        tester: TesterSpec {
            kind: TesterKind::Classical,
            d,
            k: None,
            m: None,
            repetitions: None,
            repetition_cap: None,
            delta: g.delta,
            sampling: AffineSampling::Uniform,
            on_erasure: ErasurePolicy::AcceptRound,
        },
        adversary,
        trials: g.trials,
        seed: g.seed,
        threads: None,
        output: OutputSpec::default(),
    };
    let classical = harness::run_experiment(&base)?;
    let k = g.k.unwrap_or_else(|| (tester::minimal_k(&field, d) + 2).min(n));
    let random = harness::run_experiment(&ExperimentSpec {
        tester: TesterSpec {
            kind: TesterKind::RandomPoints,
            k: Some(k),
            m: g.m,
            repetition_cap: Some(200),
            ..base.tester.clone()
        },
        ..base.clone()
    })?;
    let summarize = |r: &harness::ExperimentReport| {
        serde_json::json!({
            "trials": r.trials,
            "rejects": r.rejects,
            "causes": r.causes,
            "runs_with_erased_hit": r.runs_with_erased_hit,
            "mean_queries": r.mean_queries,
            "params": r.params,
        })
    };
    let demo = serde_json::json!({
        "instance": base.instance,
        "instance_distance": classical.instance_distance,
        "adversary": base.adversary,
        "classical": summarize(&classical),
        "random_points": summarize(&random),
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&demo)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("rmtest").chain(args.iter().copied()))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let mut buf = Vec::new();
        dispatch(cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn characterize_full_plane() {
        let text = run_capture(&["characterize", "--p", "2", "--k", "2", "--d", "1", "--m", "4"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["witness"], serde_json::json!([1, 1]));
        assert_eq!(v["support"].as_array().unwrap().len(), 4);
        assert!(v["support"].as_array().unwrap().iter().all(|e| e["value"] == 1));
    }

    #[test]
    fn characterize_explicit_points() {
        let text = run_capture(&["characterize", "--d", "1", "--points", "1,1;0,0;0,1;1,0"]).unwrap();
        assert!(text.contains("\"mode\": \"prime\""));
        assert!(matches!(run_capture(&["characterize", "--points", "0,0;0,0"]), Err(CliError::Usage(_))));
        assert!(matches!(run_capture(&["characterize", "--points", "0"]), Err(CliError::Runtime(_))));
    }

    #[test]
    fn distance_of_x1x2() {
        let text = run_capture(&["distance", "--d", "1", "--instance", "q=2 n=2; x1*x2"]).unwrap();
        assert_eq!(text.trim(), "0.25");
    }

    #[test]
    fn points_parse_and_validate() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(parse_points(&f3, "2,1; 0,0").unwrap(), vec![vec![Fe(0), Fe(0)], vec![Fe(2), Fe(1)]]);
        assert!(parse_points(&f3, "3,0").is_err());
        assert!(parse_points(&f3, "a").is_err());
    }
}
