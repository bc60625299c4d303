use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asymlin::rational::{parse_rational, Rational, Vector};
use asymlin::{Caps, Exec};
use asymlin_harness::format::{parse_instance, resolve, serialize, Arg, FormatError, InstanceFile, Resolved};
use asymlin_harness::generate::{generate_instances, GenOptions, Profile};
use asymlin_harness::ops::{run_directives, run_op, Context, DirectiveStatus, OpError};
use asymlin_harness::suite::{default_corpus, run_suite, SuiteOptions};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "asymlin", version, about = "Exact computations on polyhedral asymmetric normed spaces")]
struct Cli {
    /// Seed for sampling and generated corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest admissible dimension.
    #[arg(long, global = true, default_value_t = 6)]
    dim_cap: usize,
    /// Largest admissible number of generators or inequalities.
    #[arg(long, global = true, default_value_t = 32)]
    generator_cap: usize,
    /// Net radius, as `n` or `n/d`.
    #[arg(long, global = true, default_value = "1/2", value_parser = parse_positive)]
    eps: Rational,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Run without data parallelism.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Evaluate a space's norm at a vector.
    Eval { file: PathBuf, space: String, #[arg(allow_hyphen_values = true)] vector: String },
    /// Norm of a linear or bilinear operator or form.
    Norm {
        file: PathBuf,
        operator: String,
        /// Use the symmetrized norms instead.
        #[arg(long)]
        symmetric: bool,
    },
    /// Dual norm of a functional on a space.
    Dual { file: PathBuf, space: String, #[arg(allow_hyphen_values = true)] functional: String },
    /// Adjoint norm, cross-checked against the operator norm.
    Adjoint { file: PathBuf, operator: String },
    /// Precompactness of a polyhedron under a space's norm, or of an operator's image.
    Precompact { file: PathBuf, name: String, space: Option<String> },
    /// Forward and symmetric distances between two bilinear operators.
    Distance { file: PathBuf, first: String, second: String },
    /// Build and re-verify an image net with its dual net.
    Net { file: PathBuf, operator: String },
    /// Run every `check` directive of an instance file.
    Verify { file: PathBuf },
    /// Run a named invariant suite over its seeded corpus.
    Suite { name: String },
    /// Print seeded random instance files.
    Generate {
        #[arg(long, default_value = "mixed")]
        profile: Profile,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Write `instance-NNN.asl` files here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_positive(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if r > Rational::from_integer(0.into()) {
        Ok(r)
    } else {
        Err("must be positive".into())
    }
}

fn parse_vector(s: &str) -> Result<Vector, OpError> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_rational(t).map_err(|e| OpError::Input(FormatError::Semantic { key: t.into(), message: e.to_string() })))
        .collect()
}

enum Failure {
    Usage(String),
    Checks(String),
}

impl From<OpError> for Failure {
    fn from(e: OpError) -> Self {
        match e {
            OpError::Input(e) => Failure::Usage(e.to_string()),
            OpError::Compute(m) => Failure::Checks(m),
        }
    }
}

fn load(path: &Path, caps: &Caps) -> Result<(InstanceFile, Resolved), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let file = parse_instance(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let r = resolve(&file, caps).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok((file, r))
}

fn emit(format: OutputFormat, op: &str, value: &str) {
    match format {
        OutputFormat::Text => println!("{value}"),
        OutputFormat::Json => println!("{}", json!({ "op": op, "value": value })),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let caps = Caps { max_dim: cli.dim_cap, max_generators: cli.generator_cap };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let ctx = Context { caps, eps: cli.eps.clone(), seed: cli.seed, exec };
    let single = |file: &Path, op: &str, args: Vec<Arg>| -> Result<(), Failure> {
        let (_, r) = load(file, &caps)?;
        let value = run_op(&r, op, &args, &ctx)?;
        emit(cli.format, op, &value);
        Ok(())
    };
    let name = |s: &str| Arg::Name(s.to_string());
    match &cli.verb {
        Verb::Eval { file, space, vector } => single(file, "eval", vec![name(space), Arg::Vector(parse_vector(vector)?)]),
        Verb::Norm { file, operator, symmetric } => single(file, if *symmetric { "sym-norm" } else { "norm" }, vec![name(operator)]),
        Verb::Dual { file, space, functional } => single(file, "dual", vec![name(space), Arg::Vector(parse_vector(functional)?)]),
        Verb::Adjoint { file, operator } => single(file, "adjoint", vec![name(operator)]),
        Verb::Precompact { file, name: n, space } => {
            let mut args = vec![name(n)];
            args.extend(space.as_deref().map(name));
            single(file, "precompact", args)
        }
        Verb::Distance { file, first, second } => single(file, "distance", vec![name(first), name(second)]),
        Verb::Net { file, operator } => single(file, "net", vec![name(operator)]),
        Verb::Verify { file } => {
            let (f, r) = load(file, &caps)?;
            let results = run_directives(&f, &r, &ctx);
            match cli.format {
                OutputFormat::Text => {
                    for d in &results {
                        let status = match d.status {
                            DirectiveStatus::Pass => "pass",
                            DirectiveStatus::Fail => "FAIL",
                            DirectiveStatus::Report => "report",
                            DirectiveStatus::Error => "ERROR",
                        };
                        let expected = d.expected.as_ref().map(|e| format!(" (expected {e})")).unwrap_or_default();
                        println!("{:>3} {status:<6} {} => {}{expected}", d.index + 1, d.op, d.outcome);
                    }
                }
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&results).expect("results serialize")),
            }
            let bad = results.iter().filter(|d| matches!(d.status, DirectiveStatus::Fail | DirectiveStatus::Error)).count();
            if bad > 0 {
                return Err(Failure::Checks(format!("{bad} of {} directives failed", results.len())));
            }
            Ok(())
        }
        Verb::Suite { name: suite } => {
            let corpus = default_corpus(suite, cli.seed).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut eps = vec![cli.eps.clone()];
            let quarter = Rational::new(1.into(), 4.into());
            if cli.eps > quarter {
                eps.push(quarter);
            }
            let opts = SuiteOptions { seed: cli.seed, caps, eps, exec, ..SuiteOptions::default() };
            let report = run_suite(suite, &corpus, &opts).map_err(|e| Failure::Usage(e.to_string()))?;
            match cli.format {
                OutputFormat::Text => print!("{}", report.to_text()),
                OutputFormat::Json => println!("{}", report.to_json()),
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Checks(format!("{} failing checks", report.summary.fail)))
            }
        }
        Verb::Generate { profile, count, out } => {
            let opts = GenOptions { max_dim: cli.dim_cap.min(GenOptions::default().max_dim), ..GenOptions::default() };
            let files = generate_instances(cli.seed, *profile, *count, &opts);
            match out {
                None => {
                    for (i, f) in files.iter().enumerate() {
                        if i > 0 {
                            println!();
                        }
                        print!("{}", serialize(f));
                    }
                }
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                    for (i, f) in files.iter().enumerate() {
                        let path = dir.join(format!("instance-{i:03}.asl"));
                        std::fs::write(&path, serialize(f)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    }
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(m)) => {
            eprintln!("asymlin: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("asymlin: {m}");
            ExitCode::from(2)
        }
    }
}
