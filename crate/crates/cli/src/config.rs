//! Run configuration: a strict TOML file, presets and command-line
//! overrides, layered as `flags > file > preset > defaults`.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use zetamean::arith::CoefficientSequence;
use zetamean::empirical::{mollifier_coeffs, tau_xi_coeffs, MomentConfig};
use zetamean::numeric::Polynomial;
use zetamean::zeros::{DEFAULT_SCAN_STEP, MAX_HEIGHT};
use zetamean::zeta::EvaluationOptions;
use zetamean::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Constants,
    Mainterm,
    Zeros,
    Empirical,
    Compare,
    Moments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `Σ ζ′(ρ)` against its main term (m = 1, N = 1).
    Fujii,
    /// `Σ ζ^{(m)}(ρ)` against its main term (N = 1, m defaults to 2).
    Corollary,
    /// `S_1` with mollifier coefficients `μ(n) P(log(N/n)/log N)`.
    Mollifier,
    /// The Hölder configuration built from `C_ξ(s)^k`.
    Moments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Delta,
    TruncatedMobius,
    Mollifier,
    TauXi,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ZerosAction {
    Find,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `alpha = [re, im]` or `alpha = "auto"`, meaning `1/(20 log T)` at each height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Value([f64; 2]),
    Named(AlphaName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaName {
    Auto,
}

impl AlphaSpec {
    pub fn at(&self, height: f64) -> Complex64 {
        match self {
            AlphaSpec::Value([re, im]) => Complex64::new(*re, *im),
            AlphaSpec::Named(AlphaName::Auto) => Complex64::new(1.0 / (20.0 * height.ln()), 0.0),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AlphaSpec::Value([re, im]) => format!("{re}{im:+}i"),
            AlphaSpec::Named(AlphaName::Auto) => "auto (1/(20 log T))".into(),
        }
    }
}

impl std::str::FromStr for AlphaSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "auto" {
            return Ok(AlphaSpec::Named(AlphaName::Auto));
        }
        let parts = parse_list(s)?;
        match parts.as_slice() {
            [re] => Ok(AlphaSpec::Value([*re, 0.0])),
            [re, im] => Ok(AlphaSpec::Value([*re, *im])),
            _ => bail!("alpha must be 'auto', 're' or 're,im', got '{s}'"),
        }
    }
}

/// Comma-separated numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("'{}' is not a number", p.trim()))
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShiftConfig {
    pub alpha: Option<AlphaSpec>,
    /// m; 0 selects the shifted sum `S(α, T, X, Y)`.
    pub derivative_order: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoefficientConfig {
    pub generator: Option<Generator>,
    /// Support bound N for truncated_mobius and mollifier.
    pub n: Option<usize>,
    /// Mollifier polynomial, ascending coefficients.
    pub polynomial: Option<Vec<f64>>,
    pub k: Option<u32>,
    pub xi: Option<f64>,
    /// x(1), x(2), … for the explicit generator.
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZerosConfig {
    pub action: Option<ZerosAction>,
    /// Zero file to read instead of computing zeros.
    pub file: Option<PathBuf>,
    pub scan_step: Option<f64>,
    pub t_max: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MomentsConfig {
    pub k: Option<u32>,
    pub xi: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstantsConfig {
    pub max_order: Option<usize>,
}

/// One configuration layer; every field is optional so layers can be merged.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    pub preset: Option<Preset>,
    pub grid: Option<Vec<f64>>,
    pub threads: Option<usize>,
    pub shift: ShiftConfig,
    pub coefficients: CoefficientConfig,
    pub zeros: ZerosConfig,
    pub moments: MomentsConfig,
    pub output: OutputConfig,
    pub constants: ConstantsConfig,
    pub engine: Option<EvaluationOptions>,
}

macro_rules! overlay_fields {
    ($top:expr, $base:expr; $($field:ident),*) => {
        $( $top.$field = $top.$field.or($base.$field); )*
    };
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow!("invalid configuration: {e}"))
    }

    /// Fields set in `self` win; unset ones are taken from `base`.
    pub fn over(mut self, base: RunConfig) -> RunConfig {
        overlay_fields!(self, base; command, preset, grid, threads, engine);
        overlay_fields!(self.shift, base.shift; alpha, derivative_order);
        overlay_fields!(self.coefficients, base.coefficients; generator, n, polynomial, k, xi, values);
        overlay_fields!(self.zeros, base.zeros; action, file, scan_step, t_max);
        overlay_fields!(self.moments, base.moments; k, xi);
        overlay_fields!(self.output, base.output; path, format);
        overlay_fields!(self.constants, base.constants; max_order);
        self
    }

    /// The configuration layer a preset stands for.
    pub fn preset_layer(preset: Preset) -> RunConfig {
        let mut c = RunConfig {
            command: Some(CommandKind::Compare),
            grid: Some(DEFAULT_GRID.to_vec()),
            ..Default::default()
        };
        match preset {
            Preset::Fujii => {
                c.shift.derivative_order = Some(1);
                c.coefficients.generator = Some(Generator::Delta);
            }
            Preset::Corollary => {
                c.shift.derivative_order = Some(2);
                c.coefficients.generator = Some(Generator::Delta);
            }
            Preset::Mollifier => {
                c.shift.derivative_order = Some(1);
                c.coefficients.generator = Some(Generator::Mollifier);
                c.coefficients.n = Some(10);
                c.coefficients.polynomial = Some(vec![0.0, 1.0]);
            }
            Preset::Moments => {
                c.command = Some(CommandKind::Moments);
                c.shift.derivative_order = Some(1);
                c.moments.k = Some(2);
                c.moments.xi = Some(3.0);
            }
        }
        c
    }

    /// Applies the preset (if any) underneath and checks everything.
    pub fn resolve(self) -> Result<Plan> {
        let config = match self.preset {
            Some(p) => self.over(Self::preset_layer(p)),
            None => self,
        };
        Plan::from_config(config)
    }
}

pub const DEFAULT_GRID: [f64; 4] = [200.0, 500.0, 1000.0, 2000.0];

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<Plan> {
    read_config_layer(path)?.resolve()
}

/// Reads a configuration file without resolving it.
pub fn read_config_layer(path: &Path) -> Result<RunConfig> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RunConfig::from_toml(&text).with_context(|| format!("in {}", path.display()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ZeroInput {
    Compute { scan_step: f64 },
    File(PathBuf),
}

/// A fully resolved, validated run.
#[derive(Debug, Clone)]
pub struct Plan {
    pub command: CommandKind,
    pub preset: Option<Preset>,
    pub grid: Vec<f64>,
    pub threads: Option<usize>,
    pub derivative_order: u32,
    pub alpha: AlphaSpec,
    pub coefficients: CoefficientSequence,
    pub zeros_action: ZerosAction,
    pub zero_input: ZeroInput,
    pub t_max: f64,
    pub moments: MomentConfig,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub max_order: usize,
    pub engine: EvaluationOptions,
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        bail!("grid: at least one height is required");
    }
    for &t in grid {
        if !(t.is_finite() && t >= 2.0) {
            bail!("grid: heights must be finite and >= 2, got {t}");
        }
    }
    for w in grid.windows(2) {
        if w[1] <= w[0] {
            bail!(
                "grid: heights must be strictly increasing, got {} before {}",
                w[0],
                w[1]
            );
        }
    }
    let max = grid[grid.len() - 1];
    if max > MAX_HEIGHT {
        bail!("grid: largest height {max} exceeds {MAX_HEIGHT}");
    }
    Ok(())
}

fn build_coefficients(c: &CoefficientConfig) -> Result<CoefficientSequence> {
    let generator = c.generator.unwrap_or(Generator::Delta);
    let need_n = || {
        c.n.ok_or_else(|| anyhow!("coefficients.n is required for this generator"))
    };
    Ok(match generator {
        Generator::Delta => CoefficientSequence::delta(),
        Generator::TruncatedMobius => CoefficientSequence::mobius(need_n()?)?,
        Generator::Mollifier => {
            let poly = c.polynomial.clone().ok_or_else(|| {
                anyhow!("coefficients.polynomial is required for the mollifier generator")
            })?;
            mollifier_coeffs(need_n()?, &Polynomial::new(poly))
                .context("coefficients.polynomial")?
        }
        Generator::TauXi => {
            let k =
                c.k.ok_or_else(|| anyhow!("coefficients.k is required for the tau_xi generator"))?;
            let xi = c
                .xi
                .ok_or_else(|| anyhow!("coefficients.xi is required for the tau_xi generator"))?;
            tau_xi_coeffs(k, xi)?
        }
        Generator::Explicit => {
            let values = c.values.as_ref().ok_or_else(|| {
                anyhow!("coefficients.values is required for the explicit generator")
            })?;
            CoefficientSequence::from_real("explicit", values).context("coefficients.values")?
        }
    })
}

impl Plan {
    fn from_config(c: RunConfig) -> Result<Plan> {
        let command = c
            .command
            .ok_or_else(|| anyhow!("command: no command given"))?;
        let grid = c.grid.clone().unwrap_or_else(|| DEFAULT_GRID.to_vec());
        validate_grid(&grid)?;
        if c.threads == Some(0) {
            bail!("threads must be positive");
        }

        let derivative_order = c.shift.derivative_order.unwrap_or(1);
        let alpha = match (c.shift.alpha, derivative_order) {
            (Some(a), 0) => a,
            (None, 0) => AlphaSpec::Named(AlphaName::Auto),
            (None, _) => AlphaSpec::Value([0.0, 0.0]),
            (Some(_), m) => bail!(
                "shift.alpha applies only with derivative_order = 0, got derivative_order = {m}"
            ),
        };

        let coefficients = build_coefficients(&c.coefficients)?;

        let scan_step = c.zeros.scan_step.unwrap_or(DEFAULT_SCAN_STEP);
        if !(scan_step > 0.0 && scan_step <= 0.1) {
            bail!("zeros.scan_step must lie in (0, 0.1], got {scan_step}");
        }
        let zero_input = match &c.zeros.file {
            Some(p) => ZeroInput::File(p.clone()),
            None => ZeroInput::Compute { scan_step },
        };
        let zeros_action = c.zeros.action.unwrap_or(ZerosAction::Find);
        let t_max = c.zeros.t_max.unwrap_or(grid[grid.len() - 1]);
        if command == CommandKind::Zeros
            && zeros_action == ZerosAction::Find
            && !(10.0..=MAX_HEIGHT).contains(&t_max)
        {
            bail!("zeros.t_max must lie in [10, {MAX_HEIGHT}], got {t_max}");
        }
        if command == CommandKind::Zeros
            && zeros_action == ZerosAction::Validate
            && c.zeros.file.is_none()
        {
            bail!("zeros.file is required to validate a zero list");
        }

        let moments = MomentConfig {
            derivative_order: derivative_order.max(1),
            moment_exponent: c.moments.k.unwrap_or(1),
            xi: c.moments.xi.unwrap_or(1.0),
            mollifier: c.coefficients.polynomial.clone().map(Polynomial::new),
        };
        if command == CommandKind::Moments {
            if derivative_order == 0 {
                bail!("moments require derivative_order >= 1");
            }
            moments.validate().context("moments")?;
        }

        let engine = c.engine.unwrap_or_default();
        engine.validate().context("engine")?;

        Ok(Plan {
            command,
            preset: c.preset,
            grid,
            threads: c.threads,
            derivative_order,
            alpha,
            coefficients,
            zeros_action,
            zero_input,
            t_max,
            moments,
            output: c.output.path,
            format: c.output.format.unwrap_or_default(),
            max_order: c
                .constants
                .max_order
                .unwrap_or(zetamean::constants::DEFAULT_MAX_ORDER),
            engine,
        })
    }
}
