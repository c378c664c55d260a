use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use zetamean_cli::config::{
    parse_list, read_config_layer, AlphaSpec, CommandKind, Format, Generator, Preset, RunConfig,
    ZerosAction,
};
use zetamean_cli::run::{effective_threads, run};

/// Sums of zeta derivatives over nontrivial zeros against their predicted main terms.
#[derive(Parser, Debug)]
#[command(name = "zetamean", version)]
struct Cli {
    /// TOML run configuration; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (overrides ZETAMEAN_THREADS and the configuration file).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stieltjes constants and the derived expansion coefficients.
    Constants(Overrides),
    /// Predicted main terms on the height grid.
    Mainterm(Overrides),
    /// Find zeros on the critical line or validate a zero file.
    Zeros {
        #[arg(value_enum)]
        action: ZerosAction,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Empirical sums over zeros.
    Empirical(Overrides),
    /// Empirical sums against predicted main terms.
    Compare(Overrides),
    /// Hölder diagnostics for discrete moments.
    Moments(Overrides),
}

#[derive(Args, Debug, Default)]
struct Overrides {
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Heights, comma separated.
    #[arg(long)]
    grid: Option<String>,
    /// Derivative order m (0 selects the shifted sum).
    #[arg(long = "derivative-order", visible_alias = "m")]
    derivative_order: Option<u32>,
    /// Shift α: 'auto', 're' or 're,im'.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<AlphaSpec>,
    #[arg(long, value_enum)]
    generator: Option<Generator>,
    /// Support bound N of the coefficient sequence.
    #[arg(long)]
    n: Option<usize>,
    /// Mollifier polynomial coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true)]
    polynomial: Option<String>,
    /// Power k of the τ_ξ coefficients.
    #[arg(long)]
    k: Option<u32>,
    /// Factor cap ξ of the τ_ξ coefficients.
    #[arg(long)]
    xi: Option<f64>,
    /// Explicit coefficients x_1, x_2, …
    #[arg(long, allow_hyphen_values = true)]
    values: Option<String>,
    /// Zero file to import instead of computing zeros.
    #[arg(long = "zeros-file")]
    zeros_file: Option<PathBuf>,
    /// Grid step of the sign-change scan.
    #[arg(long = "scan-step")]
    scan_step: Option<f64>,
    /// Height up to which `zeros find` searches.
    #[arg(long)]
    tmax: Option<f64>,
    /// Moment exponent k.
    #[arg(long = "moment-k")]
    moment_k: Option<u32>,
    /// Length ξ of the Dirichlet polynomial in the moment diagnostics.
    #[arg(long = "moment-xi")]
    moment_xi: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Highest Stieltjes order in the constants table.
    #[arg(long = "max-order")]
    max_order: Option<usize>,
}

impl Overrides {
    fn layer(self, command: CommandKind) -> Result<RunConfig> {
        let mut c = RunConfig {
            command: Some(command),
            preset: self.preset,
            grid: self.grid.as_deref().map(parse_list).transpose()?,
            ..Default::default()
        };
        c.shift.derivative_order = self.derivative_order;
        c.shift.alpha = self.alpha;
        c.coefficients.generator = self.generator;
        c.coefficients.n = self.n;
        c.coefficients.polynomial = self.polynomial.as_deref().map(parse_list).transpose()?;
        c.coefficients.k = self.k;
        c.coefficients.xi = self.xi;
        c.coefficients.values = self.values.as_deref().map(parse_list).transpose()?;
        c.zeros.file = self.zeros_file;
        c.zeros.scan_step = self.scan_step;
        c.zeros.t_max = self.tmax;
        c.moments.k = self.moment_k;
        c.moments.xi = self.moment_xi;
        c.output.path = self.output;
        c.output.format = self.format;
        c.constants.max_order = self.max_order;
        Ok(c)
    }
}

fn main_inner(cli: Cli) -> Result<()> {
    let file = cli.config.as_deref().map(read_config_layer).transpose()?;
    let flags = match cli.command {
        Some(Command::Constants(o)) => o.layer(CommandKind::Constants)?,
        Some(Command::Mainterm(o)) => o.layer(CommandKind::Mainterm)?,
        Some(Command::Zeros { action, overrides }) => {
            let mut c = overrides.layer(CommandKind::Zeros)?;
            c.zeros.action = Some(action);
            c
        }
        Some(Command::Empirical(o)) => o.layer(CommandKind::Empirical)?,
        Some(Command::Compare(o)) => o.layer(CommandKind::Compare)?,
        Some(Command::Moments(o)) => o.layer(CommandKind::Moments)?,
        None => RunConfig::default(),
    };
    let merged = match file {
        Some(f) => flags.over(f),
        None => flags,
    };
    let plan = merged.resolve()?;
    let threads = effective_threads(cli.threads, plan.threads)?;
    run(&plan, threads)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
