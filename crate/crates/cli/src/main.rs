mod check;
mod eval;
mod parse;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::Value;
use siegel_theta::{Characteristic, Error, SiegelPoint, TruncationSpec};
use thiserror::Error as ThisError;

use check::{CheckConfig, Suite};
use eval::{EvalInputs, Labeled, Quantity};
use parse::{parse_complex, parse_matrix, parse_vector, ParseError};
use report::{num, Format, Records, Report};

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(Error),
    #[error("tolerance not met in strict mode: {0}")]
    Strict(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ToleranceUnreachable { .. } => CliError::Strict(e.to_string()),
            e => CliError::Domain(e),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Strict(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "siegel-theta", version, about = "Certified theta functions, Siegel modular forms and Kummer quartics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Absolute truncation tolerance for every lattice sum.
    #[arg(long, default_value_t = 1e-15)]
    tol: f64,
    /// Largest lattice box radius.
    #[arg(long, default_value_t = 200)]
    cap: usize,
    /// Seed for sampled points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fail (exit 4) when a truncation tolerance cannot be met.
    #[arg(long)]
    strict: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate quantities on a grid of tau (and u, z, s, m) values.
    Eval {
        #[arg(long = "quantity", short = 'q', value_enum, required = true)]
        quantities: Vec<Quantity>,
        /// Period matrix, e.g. "[[2i,0.1],[0.1,2i]]", or a scalar for genus one. Repeatable.
        #[arg(long, required = true, allow_hyphen_values = true)]
        tau: Vec<String>,
        /// Expected genus of every tau.
        #[arg(long)]
        g: Option<usize>,
        /// Projective point in P^3, e.g. "1,0,0,0". Repeatable.
        #[arg(long, allow_hyphen_values = true)]
        u: Vec<String>,
        /// Argument vector for theta, comma separated. Repeatable.
        #[arg(long, allow_hyphen_values = true)]
        z: Vec<String>,
        /// Half-integer characteristic label "a1..ag b1..bg" for theta. Repeatable.
        #[arg(long = "char")]
        chars: Vec<String>,
        /// Epstein zeta argument. Without it, the derivative at s = 0 is reported.
        #[arg(long, allow_hyphen_values = true)]
        s: Vec<String>,
        /// Line bundle power for torsion_abelian. Repeatable.
        #[arg(long, default_values_t = [1], allow_hyphen_values = true)]
        m: Vec<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Run identity suites; exit 1 if any case fails.
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Genus-one base points for the degeneration suite. Repeatable.
        #[arg(long, allow_hyphen_values = true)]
        tau: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn spec(common: &Common) -> Result<TruncationSpec, CliError> {
    if !(common.tol > 0.0 && common.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", common.tol)));
    }
    Ok(TruncationSpec { target_abs_tol: common.tol, max_radius: common.cap, strict: common.strict })
}

fn common_config(common: &Common) -> Vec<(String, Value)> {
    vec![
        ("tol".into(), num(common.tol)),
        ("cap".into(), Value::from(common.cap)),
        ("seed".into(), Value::from(common.seed)),
        ("strict".into(), Value::Bool(common.strict)),
        ("format".into(), Value::String(if common.format == Format::Json { "json" } else { "csv" }.into())),
    ]
}

fn strings(v: &[String]) -> Value {
    Value::Array(v.iter().map(|s| Value::String(s.clone())).collect())
}

fn parse_tau(text: &str) -> Result<SiegelPoint, CliError> {
    let rows = parse_matrix(text)?;
    let refs: Vec<&[Complex64]> = rows.iter().map(|r| r.as_slice()).collect();
    Ok(SiegelPoint::from_rows(&refs)?)
}

fn labeled<T>(texts: &[String], f: impl Fn(&str) -> Result<T, CliError>) -> Result<Vec<Labeled<T>>, CliError> {
    texts.iter().map(|t| Ok(Labeled { text: t.trim().to_string(), value: f(t)? })).collect()
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Eval { common, .. } | Command::Check { common, .. } => common,
        }
    }
}

fn run(cmd: &Command) -> Result<(Report, bool), CliError> {
    match cmd {
        Command::Eval { quantities, tau, g, u, z, chars, s, m, common } => {
            let spec = spec(common)?;
            let taus = labeled(tau, parse_tau)?;
            if let Some(g) = g {
                if let Some(t) = taus.iter().find(|t| t.value.genus() != *g) {
                    return Err(CliError::Usage(format!("--g {g} but tau {} has genus {}", t.text, t.value.genus())));
                }
            }
            let us = labeled(u, |t| {
                let v = parse_vector(t)?;
                <[Complex64; 4]>::try_from(v.as_slice()).map_err(|_| CliError::Usage(format!("--u needs 4 coordinates, got {}", v.len())))
            })?;
            let zs = labeled(z, |t| Ok(parse_vector(t)?))?;
            let char_inputs = labeled(chars, |t| Characteristic::from_label(t.trim()).map_err(|e| CliError::Usage(format!("--char {t}: {e}"))))?;
            let ss = labeled(s, |t| Ok(parse_complex(t)?))?;
            let mut qs = quantities.clone();
            qs.dedup();
            let inputs = EvalInputs { quantities: qs, taus, us, zs, chars: char_inputs, ss, ms: m.clone() };
            let records = eval::run(&inputs, &spec)?;
            let mut config = vec![
                ("command".into(), Value::String("eval".into())),
                ("quantities".into(), Value::Array(quantities.iter().map(|q| Value::String(q.name().into())).collect())),
                ("tau".into(), strings(tau)),
                ("u".into(), strings(u)),
                ("z".into(), strings(z)),
                ("char".into(), strings(chars)),
                ("s".into(), strings(s)),
                ("m".into(), Value::Array(m.iter().map(|&x| Value::from(x)).collect())),
            ];
            config.extend(common_config(common));
            Ok((Report { config, records: Records::Eval(records) }, true))
        }
        Command::Check { suite, tau, common } => {
            let spec = spec(common)?;
            let taus: Vec<(String, Complex64)> = if tau.is_empty() {
                vec![("2i".into(), Complex64::new(0.0, 2.0))]
            } else {
                tau.iter()
                    .map(|t| {
                        let p = parse_tau(t)?;
                        if p.genus() != 1 {
                            return Err(CliError::Domain(Error::WrongGenus { expected: 1, got: p.genus() }));
                        }
                        Ok((t.trim().to_string(), p.get(0, 0)))
                    })
                    .collect::<Result<_, CliError>>()?
            };
            let cfg = CheckConfig { seed: common.seed, spec, degeneration_taus: taus };
            let records = check::run(*suite, &cfg)?;
            let all_pass = records.iter().all(|r| r.pass);
            let mut config = vec![
                ("command".into(), Value::String("check".into())),
                ("suite".into(), Value::String(suite.name().into())),
                ("tau".into(), Value::Array(cfg.degeneration_taus.iter().map(|(t, _)| Value::String(t.clone())).collect())),
            ];
            config.extend(common_config(common));
            Ok((Report { config, records: Records::Check(records) }, all_pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.command.common();
    let result = run(&cli.command).and_then(|(report, ok)| {
        let text = report.render(common.format);
        match &common.output {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
