//! The `qzeta` command line.
//!
//! Settings resolve flag first, then the `--config` file (flat `key=value`
//! lines named after the flags), then `QZETA_PREC` for the precision.

mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::genocchi::{genocchi_poly, s_tilde};
use crate::padic::{convergence_report, IntegrandSpec};
use crate::qcore::rational::{self, ComplexRational, Rational};
use crate::qcore::{Backend, QContext, QValue};
use crate::verify::{run_identities, verify_identity, IdentityId, Params, SuiteConfig, SuiteReport, VerifyOptions};
use crate::zeta::{zeta_eval, zeta_neg_int, ZetaQuery};

pub use output::{emit, Format, Render, TableRow, ValueRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const PREC_ENV: &str = "QZETA_PREC";

#[derive(Debug, Parser)]
#[command(name = "qzeta", version, about = "Weighted (h,q)-Genocchi polynomials, zeta values and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// G̃_n(x)
    Genocchi,
    /// ζ̃(s, x)
    Zeta,
    /// S̃_{m:q,h}(a)
    Stilde,
    /// Fermionic level sums and their p-adic convergence
    Padic,
    /// Run an identity suite, or one identity at given parameters
    Verify,
    /// G̃_0(x), ..., G̃_n(x)
    Table,
}

#[derive(Debug, Default, clap::Args)]
struct Flags {
    #[arg(long, global = true, allow_hyphen_values = true)]
    n: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    m: Option<String>,
    /// Complex as `a+bi`
    #[arg(long, global = true, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, global = true)]
    a: Option<String>,
    #[arg(long, global = true)]
    b: Option<String>,
    #[arg(long, global = true)]
    alpha: Option<String>,
    #[arg(long, global = true)]
    h: Option<String>,
    /// Fraction or decimal, converted exactly
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, global = true)]
    p: Option<String>,
    #[arg(long, global = true)]
    levels: Option<String>,
    /// Series truncation order K
    #[arg(long, global = true)]
    order: Option<String>,
    /// Mantissa precision in bits
    #[arg(long, global = true)]
    prec: Option<String>,
    #[arg(long, global = true)]
    tol: Option<String>,
    /// exact | numeric
    #[arg(long, global = true)]
    backend: Option<String>,
    #[arg(long, global = true)]
    suite: Option<String>,
    /// Identity name, or a comma-separated list
    #[arg(long, global = true)]
    identity: Option<String>,
    #[arg(long = "thm25-literal", global = true)]
    thm25_literal: bool,
    /// text | json | csv
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    jobs: Option<String>,
    #[arg(long, global = true)]
    config: Option<String>,
}

const KEYS: [&str; 21] = [
    "n", "m", "s", "x", "y", "a", "b", "alpha", "h", "q", "p", "levels", "order", "prec", "tol", "backend", "suite",
    "identity", "thm25-literal", "format", "jobs",
];

/// Flags merged with the config file and environment.
struct Settings {
    values: BTreeMap<&'static str, String>,
    env_prec: Option<String>,
}

impl Settings {
    fn resolve(flags: Flags, env_prec: Option<String>) -> Result<Self> {
        let mut values = match &flags.config {
            Some(path) => read_config(Path::new(path))?,
            None => BTreeMap::new(),
        };
        let given = [
            ("n", flags.n),
            ("m", flags.m),
            ("s", flags.s),
            ("x", flags.x),
            ("y", flags.y),
            ("a", flags.a),
            ("b", flags.b),
            ("alpha", flags.alpha),
            ("h", flags.h),
            ("q", flags.q),
            ("p", flags.p),
            ("levels", flags.levels),
            ("order", flags.order),
            ("prec", flags.prec),
            ("tol", flags.tol),
            ("backend", flags.backend),
            ("suite", flags.suite),
            ("identity", flags.identity),
            ("format", flags.format),
            ("jobs", flags.jobs),
        ];
        for (k, v) in given {
            if let Some(v) = v {
                values.insert(k, v);
            }
        }
        if flags.thm25_literal {
            values.insert("thm25-literal", "true".into());
        }
        Ok(Self { values, env_prec })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::ConfigInvalid(format!("--{key} is required")))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            Some(v) => parse_as(key, v),
            None => Ok(default),
        }
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        parse_as(key, self.require(key)?)
    }

    fn rational(&self, key: &str, default: i64) -> Result<Rational> {
        self.get(key).map_or(Ok(rational::int(default)), rational::parse_rational)
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(other) => Err(Error::ConfigInvalid(format!("{key} must be true or false, got {other:?}"))),
        }
    }

    fn format(&self) -> Result<Format> {
        self.get("format").map_or(Ok(Format::Text), str::parse)
    }

    fn backend(&self) -> Result<Option<Backend>> {
        self.get("backend").map(str::parse).transpose()
    }

    fn precision(&self) -> Result<usize> {
        match self.get("prec").or(self.env_prec.as_deref()) {
            Some(v) => parse_as("prec", v),
            None => Ok(QContext::default().precision),
        }
    }

    fn context(&self, backend: Backend) -> Result<QContext> {
        let defaults = QContext::default();
        let ctx = QContext {
            alpha: self.rational("alpha", 1)?,
            h: self.parse("h", 1)?,
            backend,
            q: self.get("q").map(ComplexRational::parse).transpose()?,
            order: self.parse("order", defaults.order)?,
            precision: self.precision()?,
            tol: self.parse("tol", defaults.tol)?,
            max_terms: defaults.max_terms,
        };
        ctx.validate()?;
        Ok(ctx)
    }
}

fn parse_as<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::ConfigInvalid(format!("invalid value {v:?} for {key}")))
}

fn read_config(path: &Path) -> Result<BTreeMap<&'static str, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ConfigInvalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::ConfigInvalid(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim().trim_start_matches("--");
        let key = KEYS
            .iter()
            .find(|&&known| known == k)
            .ok_or_else(|| Error::ConfigInvalid(format!("config line {}: unknown key {k:?}", i + 1)))?;
        out.insert(*key, v.trim().to_string());
    }
    Ok(out)
}

/// Parses `argv` (program name first), runs the command and writes its
/// output. Returns the process exit code.
pub fn run<I, T>(argv: I, env_prec: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, env_prec) {
        Ok((text, code)) => {
            if let Err(e) = out.write_all(text.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), std::env::var(PREC_ENV).ok(), &mut stdout.lock(), &mut stderr.lock())
}

fn execute(cli: Cli, env_prec: Option<String>) -> Result<(String, i32)> {
    let set = Settings::resolve(cli.flags, env_prec)?;
    let format = set.format()?;
    match cli.command {
        Command::Genocchi => {
            let ctx = set.context(set.backend()?.unwrap_or(Backend::Exact))?;
            let v = genocchi_poly(set.required("n")?, &set.rational("x", 0)?, &ctx)?;
            Ok((emit(&ValueRow::genocchi(v), format)?, EXIT_OK))
        }
        Command::Table => {
            let ctx = set.context(set.backend()?.unwrap_or(Backend::Exact))?;
            let x = set.rational("x", 0)?;
            let n: u32 = set.required("n")?;
            let rows = (0..=n)
                .map(|k| genocchi_poly(k, &x, &ctx).map(ValueRow::genocchi))
                .collect::<Result<Vec<_>>>()?;
            Ok((emit(&TableRow(rows), format)?, EXIT_OK))
        }
        Command::Zeta => {
            let s = ComplexRational::parse(set.require("s")?)?;
            let x = set.rational("x", 1)?;
            let neg = s.non_positive_integer();
            let backend = set.backend()?.unwrap_or(if neg.is_some() { Backend::Exact } else { Backend::Numeric });
            let ctx = set.context(backend)?;
            let value = match (neg, backend) {
                (Some(n), Backend::Exact) => zeta_neg_int(n, &x, &ctx)?,
                (_, Backend::Numeric) => QValue::Numeric(zeta_eval(&ZetaQuery::new(s.clone(), x.clone(), ctx))?),
                (None, Backend::Exact) => {
                    return Err(Error::BackendUnsupported(format!("ζ̃ at s = {s} needs the numeric backend")))
                }
            };
            Ok((emit(&ValueRow::zeta(s, x, value), format)?, EXIT_OK))
        }
        Command::Stilde => {
            let ctx = set.context(set.backend()?.unwrap_or(Backend::Exact))?;
            let (m, a): (u32, u32) = (set.required("m")?, set.required("a")?);
            let twist: i64 = set.parse("h", 1)?;
            let value = s_tilde(m, a, twist, &ctx)?;
            Ok((emit(&ValueRow::stilde(m, a, twist, value), format)?, EXIT_OK))
        }
        Command::Padic => {
            let p: u64 = set.required("p")?;
            let q = match set.get("q") {
                Some(q) => rational::parse_rational(q)?,
                None => rational::int(p as i64 + 1),
            };
            let spec = IntegrandSpec::new(set.parse("n", 1)?, set.rational("x", 0)?, set.parse("alpha", 1)?, set.parse("h", 1)?);
            let report = convergence_report(&spec, p, &q, set.parse("levels", 5)?)?;
            Ok((emit(&report, format)?, EXIT_OK))
        }
        Command::Verify => verify(&set, format),
    }
}

const CASE_KEYS: [&str; 10] = ["a", "b", "m", "n", "s", "x", "y", "alpha", "h", "q"];

/// Runs the selected suite, or, when `--identity` comes with case
/// parameters such as `--a` or `--m`, a single case per identity.
fn verify(set: &Settings, format: Format) -> Result<(String, i32)> {
    let mut config = SuiteConfig::named(set.get("suite").unwrap_or("default"))?;
    config.ctx = set.context(Backend::Exact)?;
    config.options = VerifyOptions { thm25_literal: set.flag("thm25-literal")? };
    config.jobs = set.get("jobs").map(|j| parse_as("jobs", j)).transpose()?;
    let ids = match set.get("identity") {
        Some(list) => list.split(',').map(|s| s.trim().parse()).collect::<Result<Vec<IdentityId>>>()?,
        None => IdentityId::ALL.to_vec(),
    };
    let single = set.get("identity").is_some() && CASE_KEYS[..7].iter().any(|&k| set.get(k).is_some());
    let report = if single {
        let params: Params =
            CASE_KEYS.iter().filter_map(|&k| set.get(k).map(|v| (k.to_string(), v.to_string()))).collect();
        let twist = if config.options.thm25_literal { "literal" } else { "derived" };
        let reports = ids
            .iter()
            .map(|&id| {
                let mut p = params.clone();
                if id == IdentityId::SymSThm25 {
                    p.insert("twist".into(), twist.into());
                }
                verify_identity(id, &[p], &config.ctx, config.options)
            })
            .collect();
        SuiteReport::new("custom", reports)
    } else {
        run_identities(&config, &ids)?
    };
    let code = if report.pass { EXIT_OK } else { EXIT_SUITE_FAILED };
    Ok((emit(&report, format)?, code))
}
