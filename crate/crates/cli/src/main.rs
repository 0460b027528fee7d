use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use slocc::classify::{classify_three_qubit, slocc_equivalent_with, verify_certificate, Verdict};
use slocc::elo::{decompose_invertible, EloSequence};
use slocc::exactnum::set_zero_tolerance;
use slocc::gje::{mfrf_reduce, DEFAULT_MAX_PASSES};
use slocc::json::{
    certificate_from_json, certificate_to_json, classification_to_json, matrix_from_json,
    op_to_json, parse_document, reduction_to_json, state_from_json, state_to_json, verdict_to_json,
    JsonScalar,
};
use slocc::zoo::{StateSpec, FAMILIES};
use slocc::{Error, ExactScalar, FloatScalar};

/// Exact SLOCC reduction and equivalence checks for multipartite states.
#[derive(Parser, Debug)]
#[command(name = "slocc", version)]
struct Cli {
    /// Use floating-point amplitudes instead of exact cyclotomic numbers.
    #[arg(long, global = true)]
    float: bool,
    /// Zero tolerance for --float.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Maximum number of reduction passes.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PASSES)]
    max_passes: usize,
    /// Print every applied operation as a JSON line on stderr.
    #[arg(long, global = true)]
    trace: bool,
    /// Worker threads for reduce and equiv over several inputs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce states to their canonical form (one JSON line per file).
    Reduce {
        #[arg(required = true)]
        states: Vec<String>,
    },
    /// Classify a three-qubit state.
    Classify3 { state: String },
    /// Decide equivalence of state pairs: a1 b1 [a2 b2 ...].
    Equiv {
        #[arg(required = true, num_args = 2..)]
        states: Vec<String>,
    },
    /// Write an invertible matrix as a certificate acting on a site.
    Decompose {
        matrix: String,
        #[arg(long, default_value_t = 1)]
        site: usize,
    },
    /// Check that a certificate maps the first state onto the second.
    Verify {
        a: String,
        b: String,
        certificate: String,
    },
    /// List state families, or emit one as JSON.
    Zoo {
        family: Option<String>,
        #[arg(allow_hyphen_values = true)]
        params: Vec<String>,
    },
}

enum Failure {
    Input(String),
    Unknown,
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(msg) => Failure::Invariant(msg),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_json(path: &str) -> Result<Value, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?
    };
    parse_document(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn emit(v: &Value) {
    println!("{v}");
}

fn trace<S: JsonScalar>(enabled: bool, seq: &EloSequence<S>) {
    if enabled {
        for op in seq {
            eprintln!("{}", op_to_json(op));
        }
    }
}

/// Runs `f` over `items` on up to `jobs` threads, keeping input order.
fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn reduce<S: JsonScalar>(cli: &Cli, paths: &[String]) -> Outcome {
    let results = parallel_map(paths, cli.jobs, |path| -> Result<_, Failure> {
        let state = state_from_json::<S>(&read_json(path)?)?;
        Ok(mfrf_reduce(&state, cli.max_passes)?)
    });
    for r in results {
        let r = r?;
        trace(cli.trace, &r.certificate);
        emit(&reduction_to_json(&r));
    }
    Ok(())
}

fn classify3<S: JsonScalar>(cli: &Cli, path: &str) -> Outcome {
    let state = state_from_json::<S>(&read_json(path)?)?;
    let c = classify_three_qubit(&state)?;
    trace(cli.trace, &c.reduction.certificate);
    emit(&classification_to_json(&c));
    Ok(())
}

fn equiv<S: JsonScalar>(cli: &Cli, paths: &[String]) -> Outcome {
    if !paths.len().is_multiple_of(2) {
        return Err(Failure::Input("equiv takes pairs of state files".into()));
    }
    let pairs: Vec<(&String, &String)> = paths.chunks(2).map(|p| (&p[0], &p[1])).collect();
    let results = parallel_map(&pairs, cli.jobs, |(a, b)| -> Result<_, Failure> {
        let a = state_from_json::<S>(&read_json(a)?)?;
        let b = state_from_json::<S>(&read_json(b)?)?;
        Ok(slocc_equivalent_with(&a, &b, cli.max_passes)?)
    });
    let mut unknown = false;
    for r in results {
        let v = r?;
        if let Verdict::Equivalent { certificate } = &v {
            trace(cli.trace, certificate);
        }
        unknown |= v.is_unknown();
        emit(&verdict_to_json(&v));
    }
    if unknown {
        Err(Failure::Unknown)
    } else {
        Ok(())
    }
}

fn decompose<S: JsonScalar>(path: &str, site: usize) -> Outcome {
    if site == 0 {
        return Err(Failure::Input("sites are numbered from 1".into()));
    }
    let m = matrix_from_json::<S>(&read_json(path)?)?;
    let seq = EloSequence::on_site(site, decompose_invertible(&m)?);
    emit(&certificate_to_json(&seq));
    Ok(())
}

fn verify<S: JsonScalar>(a: &str, b: &str, cert: &str) -> Outcome {
    let a = state_from_json::<S>(&read_json(a)?)?;
    let b = state_from_json::<S>(&read_json(b)?)?;
    let seq = certificate_from_json::<S>(&read_json(cert)?)?;
    if a.dims() != b.dims() {
        return Err(Error::DimMismatch(format!("{:?} vs {:?}", a.dims(), b.dims())).into());
    }
    seq.validate(a.dims())?;
    emit(&json!(verify_certificate(&a, &b, &seq)));
    Ok(())
}

fn zoo(family: Option<&str>, params: &[String]) -> Outcome {
    let Some(family) = family else {
        let list: Vec<Value> = FAMILIES
            .iter()
            .map(|(name, params)| json!({"family": name, "params": params}))
            .collect();
        emit(&Value::Array(list));
        return Ok(());
    };
    let params: Vec<&str> = params.iter().map(String::as_str).collect();
    let state = StateSpec::parse(family, &params)?.build()?;
    emit(&state_to_json(&state));
    Ok(())
}

fn run<S: JsonScalar>(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Reduce { states } => reduce::<S>(cli, states),
        Command::Classify3 { state } => classify3::<S>(cli, state),
        Command::Equiv { states } => equiv::<S>(cli, states),
        Command::Decompose { matrix, site } => decompose::<S>(matrix, *site),
        Command::Verify { a, b, certificate } => verify::<S>(a, b, certificate),
        Command::Zoo { family, params } => zoo(family.as_deref(), params),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = if cli.float {
        if !(cli.tol.is_finite() && cli.tol >= 0.0) {
            eprintln!("error: --tol must be a nonnegative number");
            return ExitCode::from(1);
        }
        set_zero_tolerance(cli.tol);
        run::<FloatScalar>(&cli)
    } else {
        run::<ExactScalar>(&cli)
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Unknown) => ExitCode::from(2),
        Err(Failure::Invariant(msg)) => {
            eprintln!("internal invariant violated: {msg}");
            ExitCode::from(3)
        }
    }
}
