//! Command dispatch and report rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use log::info;
use serde::Serialize;
use zetamean::constants::ExpansionTable;
use zetamean::empirical::{
    compare, moment_diagnostics, s_alpha_sum, s_m_series, MomentDiagnostics,
};
use zetamean::mainterm::{corollary1_main_term, theorem1_main_term, MainTermReport};
use zetamean::numeric::format_significant;
use zetamean::zeros::{import_zeros, validate_zero_list, ZeroFinder, ZeroList};
use zetamean::zeta::ZetaEngine;
use zetamean::Complex64;

use crate::config::{CommandKind, Format, Plan, ZeroInput, ZerosAction};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "ZETAMEAN_THREADS";

const DIGITS: usize = 12;

fn num(v: f64) -> String {
    format_significant(v + 0.0, DIGITS)
}

/// Worker count: the command-line flag, then `ZETAMEAN_THREADS`, then the
/// configuration file, then the available parallelism.
pub fn effective_threads(flag: Option<usize>, configured: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return Ok(n.max(1));
    }
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("{THREADS_ENV}='{v}' is not a positive integer"))?;
        if n == 0 {
            bail!("{THREADS_ENV} must be positive");
        }
        return Ok(n);
    }
    Ok(configured.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

/// Runs the plan on a dedicated pool of `threads` workers and returns the
/// rendered primary artifact.
pub fn execute_with_threads(plan: &Plan, threads: usize) -> Result<String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .context("building worker pool")?;
    pool.install(|| execute(plan))
}

/// Runs the plan and writes the artifact to the configured path or stdout.
pub fn run(plan: &Plan, threads: usize) -> Result<()> {
    let text = execute_with_threads(plan, threads)?;
    match &plan.output {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            info!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// Renders the primary artifact of the plan on the current rayon pool.
pub fn execute(plan: &Plan) -> Result<String> {
    let engine = ZetaEngine::new(plan.engine)?;
    match plan.command {
        CommandKind::Constants => constants(plan),
        CommandKind::Mainterm => mainterm(plan, &engine),
        CommandKind::Zeros => zeros(plan, &engine),
        CommandKind::Empirical => empirical(plan, &engine),
        CommandKind::Compare => comparison(plan, &engine),
        CommandKind::Moments => moments(plan, &engine),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn constants(plan: &Plan) -> Result<String> {
    let table = ExpansionTable::new(plan.max_order)?;
    if plan.format == Format::Json {
        return json(&table);
    }
    let mut out = String::from("u,gamma_u,tilde_gamma_u,eta_u\n");
    for u in 0..=table.max_order() {
        let _ = writeln!(
            out,
            "{u},{},{},{}",
            num(table.stieltjes(u)?),
            num(table.tilde_gamma(u as i32)?),
            num(table.eta(u)?)
        );
    }
    Ok(out)
}

fn predictions(plan: &Plan, engine: &ZetaEngine) -> Result<Vec<MainTermReport>> {
    let x = &plan.coefficients;
    plan.grid
        .iter()
        .map(|&t| {
            if plan.derivative_order >= 1 {
                corollary1_main_term(plan.derivative_order as usize, t, x, x)
            } else {
                theorem1_main_term(plan.alpha.at(t), t, x, x, engine)
            }
            .with_context(|| format!("main term at T = {t}"))
        })
        .collect()
}

fn mainterm(plan: &Plan, engine: &ZetaEngine) -> Result<String> {
    let reports = predictions(plan, engine)?;
    if plan.format == Format::Json {
        return json(&reports);
    }
    let mut out = String::from("T,script_l");
    for (name, _) in &reports[0].pieces {
        let _ = write!(out, ",{name}_re,{name}_im");
    }
    out.push_str(",total_re,total_im\n");
    for r in &reports {
        let _ = write!(out, "{},{}", num(r.height), num(r.script_l));
        for (_, v) in &r.pieces {
            let _ = write!(out, ",{},{}", num(v.re), num(v.im));
        }
        let _ = writeln!(out, ",{},{}", num(r.total.re), num(r.total.im));
    }
    Ok(out)
}

#[derive(Serialize)]
struct ValidationSummary {
    height_covered: f64,
    found: usize,
    expected: i64,
    residual_max: f64,
}

fn zeros(plan: &Plan, engine: &ZetaEngine) -> Result<String> {
    match plan.zeros_action {
        ZerosAction::Find => {
            let ZeroInput::Compute { scan_step } = plan.zero_input else {
                bail!("zeros find computes zeros; drop zeros.file");
            };
            let list = ZeroFinder::new(*engine, scan_step)?.find(plan.t_max)?;
            Ok(list.to_text())
        }
        ZerosAction::Validate => {
            let ZeroInput::File(path) = &plan.zero_input else {
                bail!("zeros validate needs zeros.file");
            };
            let list = import_zeros(path).with_context(|| format!("reading {}", path.display()))?;
            let list = validate_zero_list(list, engine)?;
            let record = list.validation().expect("validated list carries a record");
            let summary = ValidationSummary {
                height_covered: list.height_covered(),
                found: record.found,
                expected: record.expected,
                residual_max: record.residual_max,
            };
            if plan.format == Format::Json {
                return json(&summary);
            }
            Ok(format!(
                "height_covered,found,expected,residual_max\n{},{},{},{}\n",
                num(summary.height_covered),
                summary.found,
                summary.expected,
                num(summary.residual_max)
            ))
        }
    }
}

fn load_zeros(plan: &Plan, engine: &ZetaEngine) -> Result<ZeroList> {
    let top = plan.grid[plan.grid.len() - 1];
    match &plan.zero_input {
        ZeroInput::Compute { scan_step } => {
            Ok(ZeroFinder::new(*engine, *scan_step)?.find(top.max(10.0))?)
        }
        ZeroInput::File(path) => {
            let list = import_zeros(path).with_context(|| format!("reading {}", path.display()))?;
            if list.height_covered() < top {
                bail!(
                    "zero file {} covers heights up to {} but the grid reaches {top}",
                    path.display(),
                    list.height_covered()
                );
            }
            Ok(validate_zero_list(list, engine)?)
        }
    }
}

fn empirical_series(plan: &Plan, zeros: &ZeroList, engine: &ZetaEngine) -> Result<Vec<Complex64>> {
    let x = &plan.coefficients;
    if plan.derivative_order >= 1 {
        Ok(s_m_series(
            plan.derivative_order,
            &plan.grid,
            x,
            x,
            zeros,
            engine,
        )?)
    } else {
        plan.grid
            .iter()
            .map(|&t| Ok(s_alpha_sum(plan.alpha.at(t), t, x, x, zeros, engine)?))
            .collect()
    }
}

#[derive(Serialize)]
struct EmpiricalRow {
    height: f64,
    zeros: usize,
    #[serde(with = "zetamean::numeric::complex_pair")]
    value: Complex64,
}

fn empirical(plan: &Plan, engine: &ZetaEngine) -> Result<String> {
    let zeros = load_zeros(plan, engine)?;
    let values = empirical_series(plan, &zeros, engine)?;
    let rows: Vec<EmpiricalRow> = plan
        .grid
        .iter()
        .zip(values)
        .map(|(&height, value)| EmpiricalRow {
            height,
            zeros: zeros.up_to(height).len(),
            value,
        })
        .collect();
    if plan.format == Format::Json {
        return json(&rows);
    }
    let mut out = String::from("T,zeros,emp_re,emp_im\n");
    for r in &rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(r.height),
            r.zeros,
            num(r.value.re),
            num(r.value.im)
        );
    }
    Ok(out)
}

fn configuration_echo(plan: &Plan, zeros: &ZeroList) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert(
        "command".into(),
        format!("{:?}", plan.command).to_lowercase(),
    );
    if let Some(p) = plan.preset {
        m.insert("preset".into(), format!("{p:?}").to_lowercase());
    }
    if plan.derivative_order >= 1 {
        m.insert("derivative_order".into(), plan.derivative_order.to_string());
    } else {
        m.insert("alpha".into(), plan.alpha.describe());
    }
    m.insert("coefficients".into(), plan.coefficients.label().to_string());
    m.insert(
        "support_bound".into(),
        plan.coefficients.support_bound().to_string(),
    );
    m.insert(
        "zero_source".into(),
        match &plan.zero_input {
            ZeroInput::Compute { scan_step } => format!("computed (scan_step {scan_step})"),
            ZeroInput::File(p) => format!("file {}", p.display()),
        },
    );
    m.insert(
        "zeros_used".into(),
        zeros
            .up_to(plan.grid[plan.grid.len() - 1])
            .len()
            .to_string(),
    );
    m
}

fn comparison(plan: &Plan, engine: &ZetaEngine) -> Result<String> {
    let zeros = load_zeros(plan, engine)?;
    let empirical = empirical_series(plan, &zeros, engine)?;
    let predicted: Vec<Complex64> = predictions(plan, engine)?.iter().map(|r| r.total).collect();
    let report = compare(
        &plan.grid,
        &empirical,
        &predicted,
        configuration_echo(plan, &zeros),
    )?;
    match plan.format {
        Format::Json => {
            let mut s = report.to_json()?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => Ok(report.to_csv_string()?),
    }
}

#[derive(Serialize)]
struct MomentRow {
    zeros: usize,
    #[serde(flatten)]
    diagnostics: MomentDiagnostics,
    /// moment / ((T/24π) log⁴ T), reported for m = k = 1 only
    leading_ratio: Option<f64>,
}

fn moments(plan: &Plan, engine: &ZetaEngine) -> Result<String> {
    let zeros = load_zeros(plan, engine)?;
    let leading_order = plan.moments.derivative_order == 1 && plan.moments.moment_exponent == 1;
    let rows = plan
        .grid
        .iter()
        .map(|&t| {
            let d = moment_diagnostics(&plan.moments, t, &zeros, engine)?;
            let leading = t / (24.0 * std::f64::consts::PI) * t.ln().powi(4);
            Ok(MomentRow {
                zeros: zeros.up_to(t).len(),
                diagnostics: d,
                leading_ratio: leading_order.then(|| d.moment / leading),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if plan.format == Format::Json {
        return json(&rows);
    }
    let mut out =
        String::from("T,zeros,sigma1_re,sigma1_im,sigma2,holder_bound,moment,leading_ratio\n");
    for r in &rows {
        let d = &r.diagnostics;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(d.height),
            r.zeros,
            num(d.sigma1.re),
            num(d.sigma1.im),
            num(d.sigma2),
            num(d.holder_bound),
            num(d.moment),
            r.leading_ratio.map(num).unwrap_or_default()
        );
    }
    Ok(out)
}
