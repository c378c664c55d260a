//! Ordinates of the zeros of ζ on the critical line.
//!
//! Zeros are located as sign changes of Hardy's Z-function on a uniform
//! grid, refined by bisection, and checked against the count
//! `round(θ(T)/π + 1)`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use log::{debug, warn};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::format_significant;
use crate::zeta::{riemann_siegel_theta, ZetaEngine, ZetaOracle};

/// Largest `|ζ(1/2+iγ)|` accepted for a stored ordinate.
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;
/// Allowed gap between the number of ordinates and `round(θ(T)/π + 1)`.
pub const COUNT_TOLERANCE: i64 = 1;
/// Significant digits written by [`ZeroList::export`].
pub const EXPORT_DIGITS: usize = 12;
/// The scan starts here; θ is only defined from 2 on and the first zero is near 14.13.
pub const SCAN_START: f64 = 2.0;
pub const DEFAULT_SCAN_STEP: f64 = 0.05;
pub const MAX_HEIGHT: f64 = 1e4;

const MERGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroSource {
    Computed,
    Imported,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationRecord {
    /// `max_j |ζ(1/2 + iγ_j)|`
    pub residual_max: f64,
    pub count_check: bool,
    pub found: usize,
    pub expected: i64,
}

/// Strictly increasing zero ordinates up to `height_covered`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    ordinates: Vec<f64>,
    height_covered: f64,
    source: ZeroSource,
    validation: Option<ValidationRecord>,
}

impl ZeroList {
    pub fn new(ordinates: Vec<f64>, height_covered: f64, source: ZeroSource) -> Result<Self> {
        if !(height_covered > 0.0 && height_covered.is_finite()) {
            return Err(Error::ZeroList(format!(
                "height_covered must be positive, got {height_covered}"
            )));
        }
        for (i, w) in ordinates.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::Monotonicity {
                    line: i + 2,
                    previous: w[0],
                    next: w[1],
                });
            }
        }
        if let Some(&first) = ordinates.first() {
            if !(first > 0.0) {
                return Err(Error::ZeroList(format!(
                    "ordinates must be positive, got {first}"
                )));
            }
        }
        if let Some(&last) = ordinates.last() {
            if last > height_covered {
                return Err(Error::ZeroList(format!(
                    "ordinate {last} lies above height_covered = {height_covered}"
                )));
            }
        }
        Ok(Self {
            ordinates,
            height_covered,
            source,
            validation: None,
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn height_covered(&self) -> f64 {
        self.height_covered
    }

    pub fn source(&self) -> ZeroSource {
        self.source
    }

    pub fn validation(&self) -> Option<&ValidationRecord> {
        self.validation.as_ref()
    }

    pub fn is_validated(&self) -> bool {
        self.validation.is_some()
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Ordinates `0 < γ ≤ t`.
    pub fn up_to(&self, t: f64) -> &[f64] {
        let end = self.ordinates.partition_point(|&g| g <= t);
        &self.ordinates[..end]
    }

    /// The text format read by [`import_zeros`]: `#` comments, a
    /// `# height_covered = …` directive and one ordinate per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# zeros of zeta on the critical line, ordinates only");
        let _ = writeln!(
            out,
            "# height_covered = {}",
            format_significant(self.height_covered, EXPORT_DIGITS)
        );
        for &g in &self.ordinates {
            let _ = writeln!(out, "{}", format_significant(g, EXPORT_DIGITS));
        }
        out
    }

    pub fn export(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// `round(θ(T)/π + 1)`, and 0 below the domain of θ.
pub fn expected_zero_count(t: f64) -> Result<i64> {
    if t < SCAN_START {
        return Ok(0);
    }
    Ok((riemann_siegel_theta(t)? / PI + 1.0).round() as i64)
}

/// Parses the zero file format; `source` is set to imported.
pub fn parse_zeros(text: &str) -> Result<ZeroList> {
    let mut ordinates: Vec<f64> = Vec::new();
    let mut height = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "height_covered" {
                    let v: f64 = value.trim().parse().map_err(|e| Error::Parse {
                        line: line_no,
                        message: format!("bad height_covered: {e}"),
                    })?;
                    height = Some(v);
                }
            }
            continue;
        }
        let v: f64 = line.parse().map_err(|e| Error::Parse {
            line: line_no,
            message: format!("'{line}' is not a decimal ordinate: {e}"),
        })?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("ordinate must be positive and finite, got {v}"),
            });
        }
        if let Some(&prev) = ordinates.last() {
            if !(v > prev) {
                return Err(Error::Monotonicity {
                    line: line_no,
                    previous: prev,
                    next: v,
                });
            }
        }
        ordinates.push(v);
        last_line = line_no;
    }
    let height = match (height, ordinates.last()) {
        (Some(h), _) => h,
        (None, Some(&g)) => g,
        (None, None) => {
            return Err(Error::Parse {
                line: last_line,
                message: "empty zero file without a height_covered directive".into(),
            })
        }
    };
    ZeroList::new(ordinates, height, ZeroSource::Imported)
}

/// Reads a zero file from disk.
pub fn import_zeros(path: &Path) -> Result<ZeroList> {
    parse_zeros(&std::fs::read_to_string(path)?)
}

/// Checks every residual `|ζ(1/2+iγ)|` and the zero count, and returns the
/// list with its validation record filled in.
pub fn validate_zero_list<O: ZetaOracle + ?Sized>(list: ZeroList, oracle: &O) -> Result<ZeroList> {
    let residuals = list
        .ordinates
        .par_iter()
        .map(|&g| oracle.zeta(Complex64::new(0.5, g)).map(|z| z.norm()))
        .collect::<Result<Vec<f64>>>()?;
    let (worst_index, residual_max) =
        residuals
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, 0.0f64),
                |acc, (i, r)| if r > acc.1 { (i, r) } else { acc },
            );
    if residual_max > RESIDUAL_TOLERANCE {
        return Err(Error::Validation(format!(
            "|zeta(1/2 + i*{})| = {residual_max:e} exceeds {RESIDUAL_TOLERANCE:e}",
            list.ordinates[worst_index]
        )));
    }
    let expected = expected_zero_count(list.height_covered)?;
    let found = list.len();
    if (found as i64 - expected).abs() > COUNT_TOLERANCE {
        let (lo, hi) = widest_gap(&list.ordinates, list.height_covered);
        return Err(Error::ZeroCount {
            found,
            expected,
            window_lo: lo,
            window_hi: hi,
        });
    }
    let mut list = list;
    list.validation = Some(ValidationRecord {
        residual_max,
        count_check: true,
        found,
        expected,
    });
    Ok(list)
}

/// The window between consecutive ordinates that is longest relative to the
/// local mean spacing `2π / log(t/2π)`; the likeliest place for a missed pair.
fn widest_gap(ordinates: &[f64], height: f64) -> (f64, f64) {
    let mut bounds = Vec::with_capacity(ordinates.len() + 2);
    bounds.push(SCAN_START);
    bounds.extend_from_slice(ordinates);
    bounds.push(height);
    let mut best = (SCAN_START, height);
    let mut best_score = f64::NEG_INFINITY;
    for w in bounds.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let spacing = 2.0 * PI / (mid / (2.0 * PI)).ln().max(1.0);
        let score = (w[1] - w[0]) / spacing;
        if score > best_score {
            best_score = score;
            best = (w[0], w[1]);
        }
    }
    best
}

/// Scanner for sign changes of Z.
#[derive(Debug, Clone, Copy)]
pub struct ZeroFinder {
    engine: ZetaEngine,
    scan_step: f64,
    refine_rounds: usize,
    bisection_tolerance: f64,
}

impl ZeroFinder {
    pub fn new(engine: ZetaEngine, scan_step: f64) -> Result<Self> {
        if !(scan_step > 0.0 && scan_step <= 0.1) {
            return Err(domain(format!(
                "scan_step must lie in (0, 0.1], got {scan_step}"
            )));
        }
        Ok(Self {
            engine,
            scan_step,
            refine_rounds: 2,
            bisection_tolerance: 1e-12,
        })
    }

    pub fn with_refine_rounds(mut self, rounds: usize) -> Self {
        self.refine_rounds = rounds;
        self
    }

    /// All sign changes of Z on `(0, t_max]`, validated.
    pub fn find(&self, t_max: f64) -> Result<ZeroList> {
        if !(10.0..=MAX_HEIGHT).contains(&t_max) {
            return Err(domain(format!(
                "t_max must lie in [10, {MAX_HEIGHT}], got {t_max}"
            )));
        }
        let samples = self.sample_grid(SCAN_START, t_max, self.scan_step)?;
        let mut brackets = Vec::new();
        let mut suspicious = Vec::new();
        classify(&samples, &mut brackets, &mut suspicious);

        let mut step = self.scan_step;
        for round in 0..self.refine_rounds {
            if suspicious.is_empty() {
                break;
            }
            step *= 0.5;
            debug!(
                "refinement round {}: {} windows at step {step}",
                round + 1,
                suspicious.len()
            );
            let windows = std::mem::take(&mut suspicious);
            for (lo, hi) in windows {
                let sub = self.sample_grid(lo, hi, step)?;
                classify(&sub, &mut brackets, &mut suspicious);
            }
        }
        if !suspicious.is_empty() {
            debug!(
                "{} dips of |Z| left without a sign change",
                suspicious.len()
            );
        }

        brackets.sort_by(|a, b| a.0.total_cmp(&b.0));
        let roots = brackets
            .par_iter()
            .map(|&(a, b)| self.bisect(a, b))
            .collect::<Result<Vec<f64>>>()?;
        let mut ordinates: Vec<f64> = Vec::with_capacity(roots.len());
        for r in roots {
            match ordinates.last() {
                Some(&prev) if r - prev <= MERGE_TOLERANCE => {}
                _ => ordinates.push(r),
            }
        }

        let expected = expected_zero_count(t_max)?;
        if ordinates.len() as i64 != expected {
            warn!(
                "found {} zeros up to {t_max}, round(theta/pi + 1) = {expected}",
                ordinates.len()
            );
        }
        let list = ZeroList::new(ordinates, t_max, ZeroSource::Computed)?;
        validate_zero_list(list, &self.engine)
    }

    /// `(t, Z(t))` on `lo, lo + step, …` plus `hi` itself.
    fn sample_grid(&self, lo: f64, hi: f64, step: f64) -> Result<Vec<(f64, f64)>> {
        let n = ((hi - lo) / step).floor() as usize;
        let mut ts: Vec<f64> = (0..=n)
            .map(|i| lo + i as f64 * step)
            .filter(|&t| t < hi)
            .collect();
        ts.push(hi);
        ts.par_iter()
            .map(|&t| self.engine.hardy_z(t).map(|z| (t, z)))
            .collect()
    }

    fn bisect(&self, mut a: f64, mut b: f64) -> Result<f64> {
        let mut za = self.engine.hardy_z(a)?;
        if za == 0.0 {
            return Ok(a);
        }
        while b - a > self.bisection_tolerance {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let zm = self.engine.hardy_z(mid)?;
            if zm == 0.0 {
                return Ok(mid);
            }
            if (zm > 0.0) == (za > 0.0) {
                a = mid;
                za = zm;
            } else {
                b = mid;
            }
        }
        Ok(0.5 * (a + b))
    }
}

/// Sign-change brackets and windows around local minima of `|Z|` that show
/// no sign change.
fn classify(
    samples: &[(f64, f64)],
    brackets: &mut Vec<(f64, f64)>,
    suspicious: &mut Vec<(f64, f64)>,
) {
    for w in samples.windows(2) {
        let ((t0, z0), (t1, z1)) = (w[0], w[1]);
        if z0 == 0.0 {
            brackets.push((t0, t0));
        } else if z0 * z1 < 0.0 {
            brackets.push((t0, t1));
        }
    }
    if let Some(&(t, z)) = samples.last() {
        if z == 0.0 {
            brackets.push((t, t));
        }
    }
    for w in samples.windows(3) {
        let ((t0, z0), (_, z1), (t2, z2)) = (w[0], w[1], w[2]);
        let same_sign = z0 * z1 > 0.0 && z1 * z2 > 0.0;
        if same_sign && z1.abs() < z0.abs() && z1.abs() < z2.abs() {
            suspicious.push((t0, t2));
        }
    }
}

/// Zeros up to `t_max` with the default engine.
pub fn find_zeros(t_max: f64, scan_step: f64) -> Result<ZeroList> {
    ZeroFinder::new(ZetaEngine::default(), scan_step)?.find(t_max)
}
