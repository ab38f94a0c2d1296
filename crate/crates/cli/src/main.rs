use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cydyn_cli::analysis::{run_analysis, Analysis, AnalysisError};
use cydyn_cli::config::{parse_config, parse_rational, Config, MAX_DEPTH};
use cydyn_cli::fmt;
use cydyn_cli::report::{render, Format};
use cydyn_cli::EXAMPLE_CONFIG;
use cydyn_core::linalg::Rat;

#[derive(Parser)]
#[command(
    name = "cydyn",
    version,
    about = "Exact dynamics of fiberwise translations on Calabi-Yau complete intersections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for a TOML configuration.
    Analyze {
        config: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Full report for the built-in three-translation example.
    ReproducePaper {
        #[command(flatten)]
        opts: Opts,
    },
    /// Characteristic polynomial of one map, or of the composite.
    CharPoly {
        config: PathBuf,
        /// Map name, or `composite`.
        map: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// First dynamical degree of the configured composite.
    Dyndeg {
        config: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args)]
struct Opts {
    /// Enclosure width for real roots, as p/q or a decimal.
    #[arg(long, allow_hyphen_values = true)]
    width: Option<String>,
    /// Maximum orbit transport depth.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Failure {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn load(path: &Path) -> Result<Config, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn apply_opts(cfg: &mut Config, opts: &Opts) -> Result<(), Failure> {
    if let Some(w) = &opts.width {
        let w: Rat = parse_rational(w).map_err(|e| input_error(format!("--width: {e}")))?;
        cfg.width = Some(w);
    }
    if let Some(d) = opts.depth {
        if d > MAX_DEPTH {
            return Err(input_error(format!("--depth: must lie in 0..={MAX_DEPTH}")));
        }
        cfg.depth = d;
    }
    Ok(())
}

fn analyze(mut cfg: Config, opts: &Opts) -> Result<Analysis, Failure> {
    apply_opts(&mut cfg, opts)?;
    Ok(run_analysis(&cfg)?)
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| input_error(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn selected(report: &cydyn_cli::report::Report, prefixes: &[&str], format: Format) -> String {
    let mut out = String::new();
    for (k, v) in report.entries() {
        if prefixes
            .iter()
            .any(|p| k == p || k.starts_with(&format!("{p}.")))
        {
            match format {
                Format::Machine => out.push_str(&format!("{k} = {v}\n")),
                Format::Human => out.push_str(&format!("{k}: {v}\n")),
            }
        }
    }
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { config, opts } => {
            let a = analyze(load(&config)?, &opts)?;
            emit(&render(&a).render(opts.format), &opts.out)
        }
        Command::ReproducePaper { opts } => {
            let cfg = parse_config(EXAMPLE_CONFIG).map_err(|e| Failure {
                code: 2,
                message: format!("built-in configuration: {e}"),
            })?;
            let a = analyze(cfg, &opts)?;
            emit(&render(&a).render(opts.format), &opts.out)
        }
        Command::CharPoly { config, map, opts } => {
            let cfg = load(&config)?;
            let a = analyze(cfg, &opts)?;
            let report = render(&a);
            let text = if map == "composite" {
                if a.composite.is_none() {
                    return Err(input_error("no composition configured"));
                }
                selected(
                    &report,
                    &["composite.char_poly", "composite.factor"],
                    opts.format,
                )
            } else {
                let m = a
                    .maps
                    .iter()
                    .find(|m| m.name == map)
                    .ok_or_else(|| input_error(format!("unknown map {map:?}")))?;
                match opts.format {
                    Format::Machine => format!(
                        "map.{0}.char_poly = {1}\nmap.{0}.char_poly.coefficients = {2}\n",
                        m.name,
                        m.char_poly,
                        fmt::rat_vector(m.char_poly.coeffs())
                    ),
                    Format::Human => format!("{}: {}\n", m.name, m.char_poly),
                }
            };
            emit(&text, &opts.out)
        }
        Command::Dyndeg { config, opts } => {
            let a = analyze(load(&config)?, &opts)?;
            if a.composite.is_none() {
                return Err(input_error("no composition configured"));
            }
            let report = render(&a);
            emit(
                &selected(&report, &["dynamical_degree", "entropy"], opts.format),
                &opts.out,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; help and version are not errors
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
