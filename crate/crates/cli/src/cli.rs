//! Argument parsing and dispatch.
//!
//! Precedence: command-line flags > config file > built-in defaults.
//! Exit codes: 0 success, 2 config/usage error, 3 numerical or IO failure.

use crate::commands::{self, Rendered};
use crate::config::{AppError, RunConfig};
use crate::output::{legend_path, resolve_path, write_atomic};
use crate::presets;
use clap::{Args, Parser, Subcommand};
use dyad_core::integrate::Method;
use dyad_core::InfluenceFunction;
use std::ffi::OsString;

#[derive(Debug, Parser)]
#[command(
    name = "dyad",
    version,
    about = "Coupled two-person mood dynamics: simulation, equilibria, basins, scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct IntegratorFlags {
    /// Override the configured end time.
    #[arg(long)]
    t_end: Option<f64>,
    /// Override the configured output sample spacing.
    #[arg(long)]
    sample_interval: Option<f64>,
    /// Override the stepper (fixed-rk4 | adaptive-rk45).
    #[arg(long)]
    method: Option<String>,
    /// Override the fixed-step size.
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the model under the configured schedule; writes t,x,y,segment CSV.
    Simulate {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        flags: IntegratorFlags,
    },
    /// Enumerate and classify all steady states; writes JSON.
    Equilibria {
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Map basins of attraction; writes a label raster CSV plus a legend JSON.
    Basin {
        #[arg(long)]
        config: String,
        /// Raster output file (the legend lands next to it).
        #[arg(long)]
        out: String,
    },
    /// Trace the saddle's stable manifold; writes branch,x,y CSV.
    Separatrix {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Override the configured arc length per branch.
        #[arg(long)]
        arc_length: Option<f64>,
    },
    /// Scan one parameter and report steady-state structure; writes CSV.
    Scan {
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Check the influence-function axioms; writes a JSON report.
    Validate {
        /// Influence kind: atan | tanh.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1.0)]
        saturation: f64,
        #[arg(long, default_value_t = 100.0)]
        half_width: f64,
        #[arg(long, default_value_t = 10001)]
        points: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Iterate the discrete conversation-round model; writes t,W,H CSV.
    Discrete {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Override the configured number of rounds.
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Run a named preset end to end (a simulate run of its config).
    Scenario {
        /// Preset name; unknown names list what is available.
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<String>,
        /// Print the preset's full config JSON instead of running it.
        #[arg(long, default_value_t = false)]
        print_config: bool,
        #[command(flatten)]
        flags: IntegratorFlags,
    },
}

fn load_config(path: &str) -> Result<RunConfig, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::config(format!("cannot read config {path}: {e}")))?;
    RunConfig::from_json(&text)
}

fn apply_integrator_flags(cfg: &mut RunConfig, flags: &IntegratorFlags) -> Result<(), AppError> {
    if flags.t_end.is_none()
        && flags.sample_interval.is_none()
        && flags.method.is_none()
        && flags.step.is_none()
    {
        return Ok(());
    }
    let mut icfg = cfg.integrator.unwrap_or_default();
    if let Some(t) = flags.t_end {
        icfg.t_end = t;
    }
    if let Some(dt) = flags.sample_interval {
        icfg.sample_interval = dt;
    }
    if let Some(h) = flags.step {
        icfg.step = h;
    }
    if let Some(m) = &flags.method {
        icfg.method = match m.as_str() {
            "fixed-rk4" => Method::FixedRk4,
            "adaptive-rk45" => Method::AdaptiveRk45,
            other => {
                return Err(AppError::config(format!(
                    "unknown method {other:?}; expected fixed-rk4 or adaptive-rk45"
                )))
            }
        };
    }
    cfg.integrator = Some(icfg);
    Ok(())
}

/// Writes the rendered output to `--out`, the config's output path, or
/// stdout, in that order of preference.
fn deliver(
    rendered: Rendered,
    flag_out: Option<&str>,
    cfg_out: Option<&str>,
) -> Result<(), AppError> {
    let target = flag_out.or(cfg_out);
    match target {
        Some(path) => {
            let path = resolve_path(path);
            write_atomic(&path, &rendered.primary)?;
            if let Some(content) = rendered.companion {
                write_atomic(&legend_path(&path), &content)?;
            }
            Ok(())
        }
        None => {
            if rendered.companion.is_some() {
                return Err(AppError::config(
                    "this command writes two files; --out is required",
                ));
            }
            print!("{}", rendered.primary);
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Simulate { cfg, flags } => {
            let mut config = load_config(&cfg.config)?;
            apply_integrator_flags(&mut config, &flags)?;
            let rendered = commands::simulate(&config)?;
            deliver(rendered, cfg.out.as_deref(), config.output_path())
        }
        Command::Equilibria { cfg } => {
            let config = load_config(&cfg.config)?;
            let rendered = commands::equilibria(&config)?;
            deliver(rendered, cfg.out.as_deref(), config.output_path())
        }
        Command::Basin { config, out } => {
            let config = load_config(&config)?;
            let rendered = commands::basin(&config)?;
            deliver(rendered, Some(&out), None)
        }
        Command::Separatrix { cfg, arc_length } => {
            let mut config = load_config(&cfg.config)?;
            if let Some(arc) = arc_length {
                let mut sep = config.separatrix.unwrap_or_default();
                sep.arc_length = arc;
                config.separatrix = Some(sep);
            }
            let rendered = commands::separatrix_cmd(&config)?;
            deliver(rendered, cfg.out.as_deref(), config.output_path())
        }
        Command::Scan { cfg } => {
            let config = load_config(&cfg.config)?;
            let rendered = commands::scan(&config)?;
            deliver(rendered, cfg.out.as_deref(), config.output_path())
        }
        Command::Validate {
            kind,
            saturation,
            half_width,
            points,
            tol,
            out,
        } => {
            let f = match kind.as_str() {
                "atan" => InfluenceFunction::atan(saturation),
                "tanh" => InfluenceFunction::tanh(saturation),
                other => {
                    return Err(AppError::config(format!(
                        "unknown influence kind {other:?}; expected atan or tanh"
                    )))
                }
            };
            let (rendered, all_pass) = commands::validate(f, half_width, points, tol)?;
            deliver(rendered, out.as_deref(), None)?;
            if all_pass {
                Ok(())
            } else {
                Err(AppError::runtime("one or more axioms failed"))
            }
        }
        Command::Discrete { cfg, rounds } => {
            let mut config = load_config(&cfg.config)?;
            if let Some(n) = rounds {
                if let Some(d) = config.discrete.as_mut() {
                    d.rounds = n;
                }
            }
            let rendered = commands::discrete_cmd(&config)?;
            deliver(rendered, cfg.out.as_deref(), config.output_path())
        }
        Command::Scenario {
            name,
            out,
            print_config,
            flags,
        } => {
            let mut config = presets::load_scenario(&name)?;
            apply_integrator_flags(&mut config, &flags)?;
            if print_config {
                print!("{}", config.to_json());
                return Ok(());
            }
            let rendered = commands::simulate(&config)?;
            deliver(rendered, out.as_deref(), config.output_path())
        }
    }
}

/// Parses `argv` and runs the requested command; returns the process exit
/// code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes, usage errors exit 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dyad: {e}");
            e.exit_code()
        }
    }
}

/// Convenience for tests: run with string arguments against a working
/// directory-independent config path.
pub fn run_args(args: &[&str]) -> i32 {
    run(std::iter::once("dyad".to_string()).chain(args.iter().map(|s| s.to_string())))
}
