//! `ordcdf`: distribution functions, quantiles and sampling on ordered spaces.

mod config;
mod error;
mod format;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ordcdf::oracle::{check_instance, SuiteConfig, SuiteReport};
use ordcdf::{
    instances, integrate, Cdf, Indicator, Integrand, IntervalUnion, OrderedSpace, Point,
    PseudoInverse, QuadratureSpec, Quantile, SamplerState, RNG_ID,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::format::g15;

/// Distribution functions, quantile maps and inverse-transform sampling on
/// linearly ordered spaces.
///
/// Exit codes: 0 ok; 2 config or usage error; 3 domain error; 4 unsupported
/// space; 5 verification failure. Numbers print with 15 significant digits;
/// points use the space's element syntax (`b`, `7`, `0.25`, `(1,0.25)`).
#[derive(Parser)]
#[command(name = "ordcdf", version)]
struct Cli {
    /// JSON run configuration (space, measure, optional seed and output).
    #[arg(short, long, conflicts_with = "instance")]
    config: Option<PathBuf>,

    /// Use a built-in instance instead of a config file.
    #[arg(short, long)]
    instance: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print F(x), or F-(x) with --left.
    EvalCdf {
        #[arg(long)]
        at: String,
        #[arg(long)]
        left: bool,
    },
    /// Print G(r) = inf {x : F(x) >= r}.
    EvalQuantile {
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
    },
    /// Print the measure of an interval union such as "(0,0.5],[0.7,1]".
    IntervalMeasure {
        #[arg(long, allow_hyphen_values = true)]
        interval: String,
    },
    /// Draw points by inverse transform: a JSON header line, then one point per line.
    Sample {
        #[arg(long)]
        n: usize,
        /// Defaults to the config's `seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Defaults to the config's `output`, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the integral of a built-in function: one, coord, square, or indicator:<union>.
    Integrate {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 1000)]
        subdivisions: usize,
    },
    /// Run the proposition suite and print JSON lines.
    Verify(VerifyArgs),
    /// Print diagnostics as JSON.
    Report {
        /// The four bijectivity conditions and the injectivity witnesses.
        #[arg(long)]
        bijectivity: bool,
        /// The loaded configuration in canonical form.
        #[arg(long = "config", id = "echo_config")]
        echo_config: bool,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct VerifyArgs {
    /// A built-in instance name.
    #[arg(long)]
    case: Option<String>,
    /// Every built-in instance.
    #[arg(long)]
    all: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("ordcdf: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// The measure to work on: a loaded config or a built-in instance.
struct Source {
    config: Option<RunConfig>,
    gi: PseudoInverse,
    name: String,
}

fn source(cli: &Cli) -> Result<Source, CliError> {
    if let Some(path) = &cli.config {
        let cfg = RunConfig::load(path)?;
        let gi = PseudoInverse::new(Cdf::new(cfg.build()?));
        return Ok(Source { config: Some(cfg), gi, name: "config".into() });
    }
    if let Some(name) = &cli.instance {
        let gi = instance(name)?;
        return Ok(Source { config: None, gi, name: name.clone() });
    }
    Err(CliError::Usage("pass --config <path> or --instance <name>".into()))
}

fn instance(name: &str) -> Result<PseudoInverse, CliError> {
    instances::pseudo_inverse(name).ok_or_else(|| {
        CliError::Usage(format!("unknown instance `{name}`; known: {}", instances::ALL.join(", ")))
    })
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    if let Command::Verify(args) = &cli.command {
        return verify(cli, args, out);
    }
    let src = source(cli)?;
    let gi = &src.gi;
    let sp = gi.space();
    match &cli.command {
        Command::EvalCdf { at, left } => {
            let x = sp.parse_point(at)?;
            let v = if *left { gi.cdf().eval_f_minus(&x)? } else { gi.cdf().eval_f(&x)? };
            writeln!(out, "{}", g15(v))?;
        }
        Command::EvalQuantile { at } => match gi.eval_g(*at)? {
            Quantile::At(p) => writeln!(out, "{}", sp.format_point(&p))?,
            Quantile::Undefined(reason) => {
                return Err(ordcdf::Error::Domain(format!("G({at}) is undefined: {reason}")).into())
            }
        },
        Command::IntervalMeasure { interval } => {
            let u = IntervalUnion::parse(sp, interval)?;
            writeln!(out, "{}", g15(gi.cdf().union_measure(&u)))?;
        }
        Command::Sample { n, seed, out: path } => sample(&src, *n, *seed, path.clone(), out)?,
        Command::Integrate { expr, subdivisions } => {
            let quad = QuadratureSpec::new(*subdivisions)?;
            let g = builtin(sp, expr)?;
            writeln!(out, "{}", g15(integrate(gi, g.as_ref(), quad)?))?;
        }
        Command::Report { bijectivity, echo_config } => {
            if !bijectivity && !echo_config {
                return Err(CliError::Usage("report needs --bijectivity or --config".into()));
            }
            if *echo_config {
                let cfg = src
                    .config
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("report --config needs a config file".into()))?;
                writeln!(out, "{}", cfg.to_json())?;
            }
            if *bijectivity {
                writeln!(out, "{}", bijectivity_json(gi))?;
            }
        }
        Command::Verify(_) => unreachable!("handled above"),
    }
    Ok(())
}

fn sample(
    src: &Source,
    n: usize,
    seed: Option<u64>,
    path: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = src.config.as_ref();
    let seed = seed
        .or_else(|| cfg.and_then(|c| c.seed))
        .ok_or_else(|| CliError::Usage("sample needs --seed or a config `seed`".into()))?;
    let mut sampler = SamplerState::new(&src.gi, seed)?;
    let spec_hash = match cfg {
        Some(c) => c.spec_hash(),
        None => config::sha256_hex(&format!("instance:{}", src.name)),
    };
    let header = serde_json::json!({ "seed": seed, "rng": RNG_ID, "spec_hash": spec_hash, "n": n });
    let path = path.or_else(|| cfg.and_then(|c| c.output.clone()).map(PathBuf::from));
    let mut file;
    let sink: &mut dyn Write = match &path {
        Some(p) => {
            file = std::io::BufWriter::new(std::fs::File::create(p)?);
            &mut file
        }
        None => stdout,
    };
    writeln!(sink, "{header}")?;
    let sp = src.gi.space();
    for _ in 0..n {
        writeln!(sink, "{}", sp.format_point(&sampler.next_point()))?;
    }
    sink.flush()?;
    Ok(())
}

/// Position of a point on the real line: the coordinate in real blocks,
/// the integer value or label rank otherwise.
fn coord(sp: &OrderedSpace, x: &Point) -> f64 {
    if sp.has_fibers() {
        x.inner()
    } else {
        x.outer() as f64
    }
}

fn builtin(sp: &OrderedSpace, expr: &str) -> Result<Box<dyn Integrand>, CliError> {
    if let Some(syntax) = expr.strip_prefix("indicator:") {
        return Ok(Box::new(Indicator(IntervalUnion::parse(sp, syntax)?)));
    }
    let sp = sp.clone();
    Ok(match expr {
        "one" => Box::new(|_: &Point| 1.0),
        "coord" => Box::new(move |x: &Point| coord(&sp, x)),
        "square" => Box::new(move |x: &Point| coord(&sp, x).powi(2)),
        _ => {
            return Err(CliError::Usage(format!(
                "unknown expression `{expr}`; use one, coord, square or indicator:<union>"
            )))
        }
    })
}

fn bijectivity_json(gi: &PseudoInverse) -> serde_json::Value {
    let sp = gi.space();
    let report = gi.bijectivity_report();
    let (g_inj, g_witness) = gi.is_g_injective();
    let (f_inj, f_witness) = gi.is_f_injective();
    serde_json::json!({
        "inverse_pair": report.inverse_pair,
        "injective_onto": report.injective_onto,
        "quantile_bijective": report.quantile_bijective,
        "support_condition": report.support_condition,
        "consistent": report.consistent(),
        "g_injective": g_inj,
        "g_witness": g_witness.map(|(p, levels)| serde_json::json!({
            "point": sp.format_point(&p),
            "levels": levels.to_string(),
        })),
        "f_injective": f_inj,
        "f_witness": f_witness.map(|iv| iv.format(sp)),
    })
}

fn verify(cli: &Cli, args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = SuiteConfig::default();
    let mut reports: Vec<SuiteReport> = Vec::new();
    if args.all {
        for name in instances::ALL {
            reports.push(check_instance(&instance(name)?, name, cfg));
        }
    } else if let Some(name) = &args.case {
        reports.push(check_instance(&instance(name)?, name, cfg));
    } else {
        let src = source(cli)?;
        reports.push(check_instance(&src.gi, &src.name, cfg));
    }
    let mut failed = 0;
    for r in reports.iter().flat_map(|r| &r.results) {
        writeln!(out, "{}", r.to_json())?;
        failed += usize::from(r.status == ordcdf::oracle::Status::Fail);
    }
    if failed > 0 {
        return Err(CliError::Verification(failed));
    }
    Ok(())
}
