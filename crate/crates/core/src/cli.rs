//! Command-line front end.
//!
//! Exit codes: 0 all relations pass, 1 a relation fails, 2 a relation is
//! inconclusive (and none fails), 3 usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{scalar, Config};
use crate::derivation::{
    calibrate, calibration_problem, grid, verify_suite, Convention, Gauge, SuiteOptions, CALIBRATION_PROBLEMS,
};
use crate::dsl::{evaluate, parse_expression, Names};
use crate::error::{Error, Result};
use crate::gauge::{verify_gauge_fixing, GaugeConfig};
use crate::report::{emit_report, Format, RelationReport, Status, VerificationReport};
use crate::scalar::Param;
use crate::star::verify_star;
use crate::superspace::verify_superspace;

pub const EXIT_USAGE: i32 = 3;

/// Default calibration unknown limit.
const MAX_UNKNOWNS: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "superbrst", version, about = "Exact verification of BRST and superspace identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Flags {
    #[arg(long, global = true, value_enum)]
    pub gauge: Option<GaugeArg>,
    #[arg(long, global = true, value_enum)]
    pub convention: Option<ConventionArg>,
    /// Use the mass-deformed tables.
    #[arg(long, global = true)]
    pub massive: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: FormatArg,
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Operator relations of the harmonic superspace derivatives.
    VerifySuperspace,
    /// Star-product properties for the configured deformation.
    VerifyStar,
    /// Nilpotency of s and sbar.
    VerifyBrst,
    /// The Nakanishi-Ojima relations.
    VerifyNoAlgebra,
    /// Gauge-fixing bundle, covariance, exactness and double variation.
    VerifyGaugeFixing,
    /// Grid search for rule coefficients.
    Calibrate {
        #[arg(default_value = "all")]
        problem: String,
    },
    /// Evaluate a DSL expression under the selected rule set.
    Eval { expression: String },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum GaugeArg {
    Landau,
    Linear,
    Cf,
    MassiveCf,
}

impl From<GaugeArg> for Gauge {
    fn from(g: GaugeArg) -> Gauge {
        match g {
            GaugeArg::Landau => Gauge::Landau,
            GaugeArg::Linear => Gauge::Linear,
            GaugeArg::Cf => Gauge::CurciFerrari,
            GaugeArg::MassiveCf => Gauge::MassiveCf,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ConventionArg {
    Verbatim,
    Leibniz,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum FormatArg {
    Text,
    Json,
}

/// Flags merged over the config file.
struct Context {
    flags: Flags,
    config: Config,
    opts: SuiteOptions,
}

impl Context {
    fn new(flags: Flags) -> Result<Self> {
        let config = match &flags.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let mut opts = SuiteOptions {
            alphabet: config.alphabet()?,
            ..SuiteOptions::default()
        };
        opts.convention = match flags.convention {
            Some(ConventionArg::Verbatim) => Convention::Verbatim,
            Some(ConventionArg::Leibniz) => Convention::Leibniz,
            None => config.convention.unwrap_or(Convention::Verbatim),
        };
        opts.gauge = flags.gauge.map(Gauge::from).or(config.gauge);
        if flags.massive {
            opts.gauge = Some(Gauge::MassiveCf);
        }
        if let Some(l) = &config.fp_lambda {
            opts.fp_lambda = scalar(l)?;
        }
        if let Some(d) = config.depth_bound {
            opts.depth_bound = d;
        }
        if let Some(m) = &config.m2 {
            opts.m2 = Some(scalar(m)?);
        }
        if let Some(p) = &config.rules {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            let label = p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into());
            opts.rules = Some((label, text));
        }
        Ok(Context { flags, config, opts })
    }

    fn gauge_or(&self, default: Gauge) -> Gauge {
        self.opts.gauge.unwrap_or(default)
    }
}

fn brst_suite(gauge: Gauge) -> &'static str {
    match gauge {
        Gauge::Landau => "landau",
        Gauge::Linear => "linear",
        Gauge::CurciFerrari => "curci-ferrari",
        Gauge::MassiveCf => "massive-cf",
    }
}

fn gauge_config(ctx: &Context) -> Result<GaugeConfig> {
    let gauge = ctx.gauge_or(Gauge::Landau);
    let mut cfg = GaugeConfig::symbolic(gauge, ctx.opts.convention);
    let alpha = match &ctx.config.alpha {
        Some(a) => scalar(a)?,
        None => cfg.alpha.clone(),
    };
    let m2 = match &ctx.opts.m2 {
        Some(m) => m.clone(),
        None => cfg.m2.clone(),
    };
    let trace_len = ctx.config.trace_length.unwrap_or(cfg.max_trace_len);
    cfg = GaugeConfig::new(gauge, alpha, m2, ctx.opts.convention)?;
    cfg.max_trace_len = trace_len;
    Ok(cfg)
}

fn run_calibration(ctx: &Context, problem: &str) -> Result<VerificationReport> {
    let names: Vec<&str> = if problem == "all" {
        CALIBRATION_PROBLEMS.iter().map(|(n, _)| *n).collect()
    } else {
        vec![problem]
    };
    let max = ctx.config.max_unknowns.unwrap_or(MAX_UNKNOWNS);
    let mut report = VerificationReport::new("calibrate", ctx.opts.convention.as_str(), "");
    for name in names {
        let (params, rels) = calibration_problem(name, &ctx.opts)?;
        let result = calibrate(&params, &rels, &grid(), max)?;
        let rel = if result.solutions.is_empty() {
            let mut r = RelationReport::fail(name, "grid", "no assignment satisfies every relation".into());
            for c in &result.core {
                r.failures.push(("core".into(), format!("{} on {}", c.relation, c.generator)));
            }
            r
        } else {
            let sols: Vec<String> = result
                .solutions
                .iter()
                .map(|c| {
                    c.values
                        .iter()
                        .map(|(k, v)| format!("{k} = {v}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .collect();
            let unique = if sols.len() == 1 { "unique" } else { "not unique" };
            RelationReport::pass(name).with_note(format!(
                "{} ({unique}; {} assignments evaluated)",
                sols.join("; "),
                result.evaluated
            ))
        };
        report.relations.push(rel);
    }
    Ok(report)
}

fn run_eval(ctx: &Context, text: &str) -> Result<String> {
    let gauge = ctx.gauge_or(Gauge::Linear);
    let (set, _, _) = ctx.opts.rule_set(gauge)?;
    let alphabet = ctx.opts.alphabet.clone();
    let names = Names {
        generators: alphabet.names().collect(),
        derivations: set.names(),
    };
    let expr = parse_expression(text, &names)?;
    let value = evaluate(&expr, &alphabet, &set, ctx.opts.depth_bound)?;
    let value = match &ctx.config.alpha {
        Some(a) => value.substitute(Param::Alpha, &scalar(a)?),
        None => value,
    };
    Ok(format!("{value}\n"))
}

enum Outcome {
    Report(VerificationReport),
    Text(String),
}

fn execute(cli: Cli) -> Result<Outcome> {
    let ctx = Context::new(cli.flags)?;
    let f = &ctx.flags;
    let report = match &cli.command {
        Command::VerifySuperspace => verify_superspace(f.samples, f.seed),
        Command::VerifyStar => verify_star(&ctx.config.deformation()?, f.samples, f.seed)?,
        Command::VerifyBrst => verify_suite(brst_suite(ctx.gauge_or(Gauge::Linear)), &ctx.opts)?,
        Command::VerifyNoAlgebra => {
            if ctx.opts.gauge == Some(Gauge::MassiveCf) {
                verify_suite("no-algebra-massive", &ctx.opts)?
            } else {
                verify_suite("no-algebra", &ctx.opts)?
            }
        }
        Command::VerifyGaugeFixing => verify_gauge_fixing(&gauge_config(&ctx)?, &ctx.opts)?,
        Command::Calibrate { problem } => run_calibration(&ctx, problem)?,
        Command::Eval { expression } => return Ok(Outcome::Text(run_eval(&ctx, expression)?)),
    };
    Ok(Outcome::Report(report))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let format = match cli.flags.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let out = cli.flags.out.clone();
    let start = Instant::now();
    let (bytes, code) = match execute(cli) {
        Ok(Outcome::Report(r)) => (emit_report(&r, format), r.status().exit_code()),
        Ok(Outcome::Text(t)) => (t.into_bytes(), Status::Pass.exit_code()),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &out {
        Some(p) => std::fs::write(p, &bytes),
        None => stdout.write_all(&bytes),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    let _ = writeln!(stderr, "finished in {:.2}s", start.elapsed().as_secs_f64());
    code
}
