mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semiclass::coherence::minimal_index;
use semiclass::griffin::{end_to_end_verify, GriffinInput};
use semiclass::semiclassical::derive;
use semiclass::{CoherencePair, FloatContext, HpFloat, MonicOps, Polynomial, Rational, Scalar};

use crate::report::{Failure, Outcome};
use crate::spec::{Backend, FunctionalSpec};

#[derive(Parser, Debug)]
#[command(name = "semiclass", version, about = "Coherent pairs, semiclassical certificates and Griffin-type weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Scalar backend. Defaults to exact, except for `griffin`.
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendKind>,
    #[arg(long = "precision-bits", global = true, default_value_t = 128)]
    precision_bits: u32,
    /// Zero/equality tolerance of the float backend.
    #[arg(long, global = true, default_value_t = 1e-20)]
    tolerance: f64,
    #[arg(long, global = true, default_value_t = 10)]
    nmax: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recurrence coefficients and norms of a functional's OPS.
    Recurrence {
        #[arg(long)]
        u: PathBuf,
    },
    /// Band of a candidate pair, its verdict and the minimal index.
    CoherenceCheck(PairArgs),
    /// Certificates D(Phi w) = Psi w for a coherent pair.
    Semiclassical(PairArgs),
    /// Structure data (r0, r1, s1, s2) to weight, moments and checks.
    Griffin {
        #[arg(long, allow_hyphen_values = true)]
        r0: String,
        #[arg(long, allow_hyphen_values = true)]
        r1: String,
        #[arg(long, allow_hyphen_values = true)]
        s1: String,
        #[arg(long, allow_hyphen_values = true)]
        s2: String,
    },
    /// Moments 0..=nmax of a functional.
    Moments {
        #[arg(long)]
        u: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
struct PairArgs {
    #[arg(long)]
    u: PathBuf,
    /// Defaults to the `--u` functional.
    #[arg(long)]
    v: Option<PathBuf>,
    /// Coefficients of pi, ascending: "c0,c1,...,1".
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pi: String,
    #[arg(long = "M")]
    big_m: usize,
    /// Must equal deg pi when given.
    #[arg(long = "N")]
    big_n: Option<usize>,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    /// Highest moment degree generated for closed-form functionals.
    #[arg(long)]
    degree: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let code = outcome.code;
    let rendered = match cli.global.format {
        Format::Json => serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n",
        Format::Table => report::render_table(&outcome.report),
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(msg) = &outcome.error {
        eprintln!("error: {msg}");
    }
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let is_griffin = matches!(cli.command, Command::Griffin { .. });
    let backend = g
        .backend
        .unwrap_or(if is_griffin { BackendKind::Float } else { BackendKind::Exact });
    let result = match backend {
        BackendKind::Exact => dispatch::<Rational>(cli, &(), "exact"),
        BackendKind::Float => {
            if g.precision_bits < 16 || g.tolerance < 0.0 {
                Err(Failure::usage("precision must be at least 16 bits and tolerance non-negative"))
            } else {
                dispatch::<HpFloat>(cli, &FloatContext::new(g.precision_bits, g.tolerance), "float")
            }
        }
    };
    let mut meta = json!({ "backend": backend_label(backend) });
    if backend == BackendKind::Float {
        meta["precision_bits"] = json!(g.precision_bits);
        meta["tolerance"] = json!(g.tolerance);
    }
    match result {
        Ok(mut outcome) => {
            merge(&mut outcome.report, meta);
            outcome
        }
        Err(f) => {
            let mut report = json!({ "status": "error", "exit_code": f.code, "error": f.message });
            merge(&mut report, meta);
            Outcome {
                code: f.code,
                report,
                warnings: f.warnings,
                error: Some(f.message),
            }
        }
    }
}

fn backend_label(b: BackendKind) -> &'static str {
    match b {
        BackendKind::Exact => "exact",
        BackendKind::Float => "float",
    }
}

fn merge(report: &mut Value, meta: Value) {
    if let (Value::Object(r), Value::Object(m)) = (report, meta) {
        for (k, v) in m {
            r.entry(k).or_insert(v);
        }
    }
}

fn dispatch<S: Backend>(cli: &Cli, ctx: &S::Context, _label: &str) -> Result<Outcome, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Recurrence { u } => cmd_recurrence::<S>(ctx, u, g.nmax),
        Command::Moments { u } => cmd_moments::<S>(ctx, u, g.nmax),
        Command::CoherenceCheck(args) => cmd_coherence::<S>(ctx, args, g.nmax),
        Command::Semiclassical(args) => cmd_semiclassical::<S>(ctx, args, g.nmax),
        Command::Griffin { r0, r1, s1, s2 } => {
            let fctx = S::float_context(ctx).ok_or_else(Failure::exact_backend)?;
            cmd_griffin(&fctx, [r0, r1, s1, s2], g.nmax)
        }
    }
}

fn cmd_recurrence<S: Backend>(ctx: &S::Context, path: &PathBuf, n_max: usize) -> Result<Outcome, Failure> {
    let spec = FunctionalSpec::load(path)?;
    let u = spec.functional::<S>(ctx, 2 * n_max + 1)?;
    let ops = MonicOps::from_functional(&u, n_max).map_err(Failure::from_ops)?;
    let report = json!({
        "command": "recurrence",
        "functional": spec.describe(),
        "n_max": n_max,
        "beta": ops.betas(),
        "gamma": ops.gammas(),
        "norms": ops.norms(),
        "table": ops.table(),
        "positive_definite": ops.is_positive_definite(),
    });
    Ok(Outcome::ok(report))
}

fn cmd_moments<S: Backend>(ctx: &S::Context, path: &PathBuf, n_max: usize) -> Result<Outcome, Failure> {
    let spec = FunctionalSpec::load(path)?;
    let u = spec.functional::<S>(ctx, n_max)?;
    let u = u.truncated(n_max).map_err(Failure::from_functional)?;
    Ok(Outcome::ok(json!({
        "command": "moments",
        "functional": spec.describe(),
        "n_max": n_max,
        "moments": u.moments(),
    })))
}

struct BuiltPair<S: Scalar> {
    pair: CoherencePair<S>,
    warnings: Vec<String>,
    description: Value,
}

fn build_pair<S: Backend>(ctx: &S::Context, args: &PairArgs, n_max: usize) -> Result<BuiltPair<S>, Failure> {
    let mut warnings = Vec::new();
    let pi = parse_pi::<S>(ctx, &args.pi, &mut warnings)?;
    let big_n = pi.degree().expect("nonzero");
    if let Some(n) = args.big_n {
        if n != big_n {
            return Err(Failure::usage(format!("--N {n} disagrees with deg pi = {big_n}")));
        }
    }
    let degree = args
        .degree
        .unwrap_or(2 * (n_max + args.m + args.k + big_n + args.big_m) + 3);
    let u_spec = FunctionalSpec::load(&args.u)?;
    let v_spec = match &args.v {
        Some(p) => FunctionalSpec::load(p)?,
        None => u_spec.clone(),
    };
    let u = u_spec.functional::<S>(ctx, degree)?;
    let v = v_spec.functional::<S>(ctx, degree)?;
    let pair = CoherencePair::from_functionals(u, v, pi, args.big_m, args.m, args.k).map_err(Failure::from_coherence)?;
    if pair.rows() < n_max {
        return Err(Failure::budget(format!(
            "moments support band rows 0..={} only; --nmax {n_max} requested",
            pair.rows()
        )));
    }
    let description = json!({
        "u": u_spec.describe(),
        "v": v_spec.describe(),
        "pi": pair.pi.to_string(),
        "M": args.big_m,
        "N": big_n,
        "m": args.m,
        "k": args.k,
        "moment_degree": degree,
    });
    Ok(BuiltPair {
        pair,
        warnings,
        description,
    })
}

fn parse_pi<S: Backend>(ctx: &S::Context, text: &str, warnings: &mut Vec<String>) -> Result<Polynomial<S>, Failure> {
    let coeffs = text
        .split(',')
        .map(|c| c.trim().parse::<Rational>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(format!("--pi: {e}")))?;
    let p = Polynomial::from_coeffs(ctx, coeffs.iter().map(|c| S::from_rational(ctx, c)).collect());
    let Some(lead) = p.leading().cloned() else {
        return Err(Failure::usage("--pi must be a nonzero polynomial"));
    };
    if p.is_monic() {
        return Ok(p);
    }
    warnings.push(format!("pi = {p} is not monic; dividing by its leading coefficient {lead}"));
    Ok(p.scale(&S::one(ctx).div(&lead)))
}

fn cmd_coherence<S: Backend>(ctx: &S::Context, args: &PairArgs, n_max: usize) -> Result<Outcome, Failure> {
    let built = build_pair::<S>(ctx, args, n_max)?;
    let pair = &built.pair;
    let verdict = semiclass::verify_coherence(&pair.band, pair.big_m, n_max).map_err(Failure::from_coherence)?;
    let minimal = minimal_index(&pair.band, n_max).map_err(Failure::from_coherence)?;
    let rows: Vec<_> = pair.band.rows_for_index(usize::MAX).into_iter().take(n_max + 1).collect();
    let report = json!({
        "command": "coherence-check",
        "pair": built.description,
        "n_max": n_max,
        "verdict": verdict,
        "holds": verdict.holds(),
        "minimal": minimal.map(|m| json!({ "M": m, "N": pair.big_n })),
        "band": rows,
        "warnings": built.warnings,
    });
    let code = if verdict.holds() { 0 } else { 3 };
    Ok(Outcome {
        code,
        report,
        warnings: built.warnings,
        error: None,
    })
}

fn cmd_semiclassical<S: Backend>(ctx: &S::Context, args: &PairArgs, n_max: usize) -> Result<Outcome, Failure> {
    let built = build_pair::<S>(ctx, args, n_max)?;
    let pair = &built.pair;
    let report = derive(pair, n_max).map_err(Failure::from_semiclassical)?;
    let mut certificates = Vec::new();
    if let Some(kz) = &report.kzero {
        certificates.extend(kz.certificates.iter().map(report::certificate_summary));
    }
    if let Some(semiclass::semiclassical::DeterminantOutcome::Solved { certificates: c, .. }) = &report.determinant {
        certificates.extend(c.iter().map(report::certificate_summary));
    }
    let code = if report.hypothesis_failed() {
        5
    } else if report.holds() {
        0
    } else {
        7
    };
    let out = json!({
        "command": "semiclassical",
        "pair": built.description,
        "n_check": n_max,
        "holds": report.holds(),
        "hypothesis_failed": report.hypothesis_failed(),
        "certificates": certificates,
        "report": report,
        "warnings": built.warnings,
    });
    Ok(Outcome {
        code,
        report: out,
        warnings: built.warnings,
        error: None,
    })
}

fn cmd_griffin(ctx: &FloatContext, raw: [&String; 4], n_max: usize) -> Result<Outcome, Failure> {
    let parse = |name: &str, s: &str| {
        s.parse::<Rational>()
            .map_err(|e| Failure::usage(format!("--{name}: {e}")))
    };
    let input = GriffinInput::new(
        parse("r0", raw[0])?,
        parse("r1", raw[1])?,
        parse("s1", raw[2])?,
        parse("s2", raw[3])?,
    );
    let report = end_to_end_verify(&input, n_max, ctx).map_err(Failure::from_griffin)?;
    let code = if report.passed() { 0 } else { 7 };
    let mut value = serde_json::to_value(&report).expect("report serializes");
    value["command"] = json!("griffin");
    value["passed"] = json!(report.passed());
    Ok(Outcome {
        code,
        report: value,
        warnings: Vec::new(),
        error: None,
    })
}
