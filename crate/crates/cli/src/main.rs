use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use picodim::bundled;
use picodim::cache::Cache;
use picodim::exponent::{pi_exponent, ExponentOptions, DEFAULT_STATE_CAP};
use picodim::growth::{assemble, GrowthRow, Verdict};
use picodim::multilin::{
    check_budget, cocharacter_multiplicities, codimension, EvalOptions, Method, DEFAULT_CELL_BUDGET,
};
use picodim::{Error, RepSpec, Structure};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_NON_SPLIT: u8 = 4;

const THREADS_VAR: &str = "PI_THREADS";

/// Polynomial-identity invariants of Lie algebra representations.
///
/// SPEC is a path to a TOML specification or the name of a bundled example.
#[derive(Parser)]
#[command(name = "pi", version)]
struct Cli {
    /// Do not read or write the on-disk cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure report: dimensions of L, A, G, R, S, J, p, θ, factor kinds, lemma checks.
    Analyze {
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Codimensions c_1..c_N as CSV.
    Codim {
        spec: String,
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Cocharacter multiplicities of degree N as CSV.
    Cochar {
        spec: String,
        #[arg(long = "n")]
        n: usize,
        /// Also compute shapes with more rows than dim ρ(L).
        #[arg(long)]
        all_shapes: bool,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// The PI-exponent with its witness chain.
    Exponent {
        spec: String,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs the lemma checks; exit code 0 iff all pass.
    Verify {
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Codimensions up to N compared with the growth law.
    Growth {
        spec: String,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
        #[command(flatten)]
        eval: EvalArgs,
    },
}

#[derive(Args)]
struct EvalArgs {
    /// exact, modular or auto.
    #[arg(long, default_value = "auto")]
    method: Method,
    /// Number of random primes for modular rank.
    #[arg(long, default_value_t = 2)]
    primes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ignore the matrix-size guard.
    #[arg(long)]
    force: bool,
}

impl EvalArgs {
    fn options(&self) -> EvalOptions {
        EvalOptions {
            method: self.method,
            primes: self.primes,
            seed: self.seed,
            cell_budget: DEFAULT_CELL_BUDGET,
            force: self.force,
            ..EvalOptions::default()
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::ResourceGuard { .. } => EXIT_RESOURCE,
            Error::NonSplitInput(_) | Error::Unsupported(_) => EXIT_NON_SPLIT,
            Error::Internal(_) | Error::Json(_) => EXIT_FAIL,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::from(Error::Io(e))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_FAIL,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn load_spec(arg: &str) -> Result<RepSpec, Failure> {
    let path = Path::new(arg);
    if path.exists() || !bundled::names().contains(&arg) {
        Ok(RepSpec::from_file(path)?)
    } else {
        Ok(bundled::get(arg)?)
    }
}

struct Session {
    cache: Option<Cache>,
}

impl Session {
    fn structure(&self, spec: &RepSpec, seed: u64) -> Result<Structure, Failure> {
        let rep = spec.rep()?;
        let structure = match &self.cache {
            Some(cache) => {
                let (env, _) = cache.envelope(spec, &rep, seed)?;
                Structure::with_envelope(rep, env)?
            }
            None => Structure::build(rep, seed)?,
        };
        Ok(structure)
    }

    fn codims(
        &self,
        spec: &RepSpec,
        max_n: usize,
        opts: &EvalOptions,
    ) -> Result<Vec<GrowthRow>, Failure> {
        if max_n == 0 {
            return Err(Error::Input("--max-n must be at least 1".into()).into());
        }
        let rep = spec.rep()?;
        check_budget(&rep, max_n, opts)?;
        let mut rows = Vec::with_capacity(max_n);
        for n in 1..=max_n {
            let c = match &self.cache {
                Some(cache) => cache.codimension(spec, &rep, n, opts)?.0,
                None => codimension(&rep, n, opts)?,
            };
            rows.push(GrowthRow::from_codimension(c));
        }
        Ok(rows)
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(Error::from)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct ExponentReport {
    name: String,
    d: usize,
    witness: Vec<usize>,
    ann_dims: Vec<usize>,
    final_ann_dim: usize,
    lower_bound: bool,
    visited: usize,
    warnings: Vec<String>,
}

fn run(cli: Cli) -> Outcome {
    let session = Session {
        cache: (!cli.no_cache).then(Cache::from_env),
    };
    match cli.command {
        Command::Analyze { spec, seed } => {
            let spec = load_spec(&spec)?;
            let report = session.structure(&spec, seed)?.report(&spec.name)?;
            print_json(&report)?;
            Ok(0)
        }
        Command::Verify { spec, seed } => {
            let spec = load_spec(&spec)?;
            let report = session.structure(&spec, seed)?.verify()?;
            print_json(&report)?;
            Ok(if report.all_passed() { 0 } else { EXIT_FAIL })
        }
        Command::Codim { spec, max_n, eval } => {
            let spec = load_spec(&spec)?;
            let rows = session.codims(&spec, max_n, &eval.options())?;
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record(["n", "c_n", "method", "seed"])?;
            for r in rows {
                w.write_record([
                    r.n.to_string(),
                    r.c_n.to_string(),
                    r.method.to_string(),
                    r.seed.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(0)
        }
        Command::Cochar {
            spec,
            n,
            all_shapes,
            eval,
        } => {
            let spec = load_spec(&spec)?;
            let rep = spec.rep()?;
            let opts = EvalOptions {
                all_shapes,
                ..eval.options()
            };
            let table = cocharacter_multiplicities(&rep, n, &opts)?;
            let mut out = std::io::stdout().lock();
            {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(["lambda", "m", "dim", "product"])?;
                for r in &table.rows {
                    w.write_record([
                        r.lambda.to_string(),
                        r.m.to_string(),
                        r.dim.to_string(),
                        (r.m as u128 * r.dim as u128).to_string(),
                    ])?;
                }
                w.flush()?;
            }
            let consistent = table.is_consistent();
            writeln!(
                out,
                "# sum={} c_n={} consistent={consistent}",
                table.weighted_sum(),
                table.c_n
            )?;
            Ok(if consistent { 0 } else { EXIT_FAIL })
        }
        Command::Exponent {
            spec,
            state_cap,
            seed,
        } => {
            let spec = load_spec(&spec)?;
            let s = session.structure(&spec, seed)?;
            let result = pi_exponent(
                &s.rep,
                &s.env,
                &s.levi,
                &ExponentOptions { state_cap, seed },
            )?;
            print_json(&ExponentReport {
                name: spec.name.clone(),
                d: result.d,
                witness: result.witness_indices(),
                ann_dims: result.witness.iter().map(|c| c.ann.dim()).collect(),
                final_ann_dim: result.final_ann.dim(),
                lower_bound: result.lower_bound,
                visited: result.visited,
                warnings: result.warnings.clone(),
            })?;
            Ok(0)
        }
        Command::Growth {
            spec,
            max_n,
            state_cap,
            eval,
        } => {
            let spec = load_spec(&spec)?;
            let opts = eval.options();
            let rows = session.codims(&spec, max_n, &opts)?;
            let s = session.structure(&spec, eval.seed)?;
            let exponent = pi_exponent(
                &s.rep,
                &s.env,
                &s.levi,
                &ExponentOptions {
                    state_cap,
                    seed: eval.seed,
                },
            )?;
            let report = assemble(&spec.name, rows, &exponent);
            print_json(&report)?;
            Ok(match report.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => EXIT_FAIL,
                Verdict::Inconclusive => EXIT_RESOURCE,
            })
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().map_err(|_| {
        Error::Input(format!(
            "{THREADS_VAR} must be a non-negative integer, got {value:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure {
            code: EXIT_FAIL,
            message: e.to_string(),
        })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match configure_threads().and_then(|_| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
