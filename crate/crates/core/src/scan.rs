//! Parameter sweeps, sudden-death intervals, equal-entanglement crossings and
//! period detection.
//!
//! Grid points are independent, so sweeps are evaluated on a rayon pool and
//! collected back in grid order (theta outermost, then w1, then w2 or g0).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{reduced_dynamics, CouplingSite, DmCoupling};
use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};
use crate::measures::{full_report, EntanglementReport, NegativityConvention};
use crate::states::{env_qubit, ghz_state, w_state_from_pair, PureState};

pub const DEFAULT_ESD_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_CROSS_TOLERANCE: f64 = 5e-3;
/// Sampling step of [`find_period`].
pub const PERIOD_SAMPLE_STEP: f64 = 1e-3;
/// Upper bound on the number of points a single axis may expand to.
pub const MAX_AXIS_POINTS: usize = 1_000_000;
/// Upper bound on the number of points of a whole sweep grid.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// Inclusive arithmetic progression `start, start + step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() || !step.is_finite() {
            return Err(Error::NonFinite);
        }
        if step <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "axis step must be positive, got {step}"
            )));
        }
        if start > stop {
            return Err(Error::EmptyGrid);
        }
        let intervals = ((stop - start) / step + 1e-9).floor();
        if intervals >= MAX_AXIS_POINTS as f64 {
            return Err(Error::InvalidParameter(format!(
                "axis {start}:{stop}:{step} exceeds {MAX_AXIS_POINTS} points"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// A single-valued axis.
    pub fn fixed(value: f64) -> Result<Self> {
        Self::new(value, value, 1.0)
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values computed as `start + k * step`, without accumulation.
    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

/// Which initial-state family a sweep runs over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum StateFamily {
    /// `w0 = sqrt(1 - w1^2 - w2^2)`; points outside the unit disk are skipped.
    W { w1: Axis, w2: Axis },
    /// `g1 = sqrt(1 - g0^2)`; points with `|g0| > 1` are skipped.
    Ghz { g0: Axis },
}

/// Columns of the sweep table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    NAb,
    NAc,
    NBc,
    NABc,
    NBAc,
    NCAb,
    PiA,
    PiB,
    PiC,
    ThreePi,
    ThreeTangle,
    ConcurrenceAb,
    ConcurrenceAc,
    ConcurrenceBc,
}

impl Measure {
    pub const ALL: [Measure; 14] = [
        Measure::NAb,
        Measure::NAc,
        Measure::NBc,
        Measure::NABc,
        Measure::NBAc,
        Measure::NCAb,
        Measure::PiA,
        Measure::PiB,
        Measure::PiC,
        Measure::ThreePi,
        Measure::ThreeTangle,
        Measure::ConcurrenceAb,
        Measure::ConcurrenceAc,
        Measure::ConcurrenceBc,
    ];

    /// The negativity-based measures, computed for every sweep by default.
    pub const NEGATIVITY_BASED: [Measure; 10] = [
        Measure::NAb,
        Measure::NAc,
        Measure::NBc,
        Measure::NABc,
        Measure::NBAc,
        Measure::NCAb,
        Measure::PiA,
        Measure::PiB,
        Measure::PiC,
        Measure::ThreePi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::NAb => "n_ab",
            Measure::NAc => "n_ac",
            Measure::NBc => "n_bc",
            Measure::NABc => "n_a_bc",
            Measure::NBAc => "n_b_ac",
            Measure::NCAb => "n_c_ab",
            Measure::PiA => "pi_a",
            Measure::PiB => "pi_b",
            Measure::PiC => "pi_c",
            Measure::ThreePi => "three_pi",
            Measure::ThreeTangle => "three_tangle",
            Measure::ConcurrenceAb => "concurrence_ab",
            Measure::ConcurrenceAc => "concurrence_ac",
            Measure::ConcurrenceBc => "concurrence_bc",
        }
    }

    pub fn needs_tangle(self) -> bool {
        matches!(
            self,
            Measure::ThreeTangle
                | Measure::ConcurrenceAb
                | Measure::ConcurrenceAc
                | Measure::ConcurrenceBc
        )
    }

    pub fn value(self, r: &EntanglementReport) -> Option<f64> {
        match self {
            Measure::NAb => Some(r.n_ab),
            Measure::NAc => Some(r.n_ac),
            Measure::NBc => Some(r.n_bc),
            Measure::NABc => Some(r.n_a_bc),
            Measure::NBAc => Some(r.n_b_ac),
            Measure::NCAb => Some(r.n_c_ab),
            Measure::PiA => Some(r.pi_a),
            Measure::PiB => Some(r.pi_b),
            Measure::PiC => Some(r.pi_c),
            Measure::ThreePi => Some(r.three_pi),
            Measure::ThreeTangle => r.three_tangle,
            Measure::ConcurrenceAb => r.concurrence_ab,
            Measure::ConcurrenceAc => r.concurrence_ac,
            Measure::ConcurrenceBc => r.concurrence_bc,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

/// Everything needed to evaluate a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub theta: Axis,
    pub family: StateFamily,
    pub env: [C64; 2],
    pub measures: BTreeSet<Measure>,
    pub convention: NegativityConvention,
    pub site: CouplingSite,
}

impl SweepGrid {
    /// Negativity-based measures, environment |0>, default convention and site.
    pub fn new(theta: Axis, family: StateFamily) -> Self {
        Self {
            theta,
            family,
            env: [ONE, ZERO],
            measures: Measure::NEGATIVITY_BASED.into_iter().collect(),
            convention: NegativityConvention::default(),
            site: CouplingSite::default(),
        }
    }

    pub fn with_env(mut self, c0: C64, c1: C64) -> Self {
        self.env = [c0, c1];
        self
    }

    pub fn with_measures<I: IntoIterator<Item = Measure>>(mut self, measures: I) -> Self {
        self.measures = measures.into_iter().collect();
        self
    }

    pub fn with_convention(mut self, convention: NegativityConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_site(mut self, site: CouplingSite) -> Self {
        self.site = site;
        self
    }

    fn needs_tangle(&self) -> bool {
        self.measures.iter().any(|m| m.needs_tangle())
    }

    /// Grid points before admissibility filtering.
    pub fn size(&self) -> usize {
        let family = match self.family {
            StateFamily::W { w1, w2 } => w1.len().saturating_mul(w2.len()),
            StateFamily::Ghz { g0 } => g0.len(),
        };
        self.theta.len().saturating_mul(family)
    }

    /// Admissible points in row order, plus the number skipped.
    pub fn points(&self) -> (Vec<SweepPoint>, usize) {
        let mut points = Vec::new();
        let mut skipped = 0;
        for theta in self.theta.values() {
            match self.family {
                StateFamily::W { w1, w2 } => {
                    for a in w1.values() {
                        for b in w2.values() {
                            if a * a + b * b > 1.0 + 1e-12 {
                                skipped += 1;
                                continue;
                            }
                            points.push(SweepPoint {
                                theta,
                                w1: Some(a),
                                w2: Some(b),
                                g0: None,
                            });
                        }
                    }
                }
                StateFamily::Ghz { g0 } => {
                    for g in g0.values() {
                        if g.abs() > 1.0 + 1e-12 {
                            skipped += 1;
                            continue;
                        }
                        points.push(SweepPoint {
                            theta,
                            w1: None,
                            w2: None,
                            g0: Some(g),
                        });
                    }
                }
            }
        }
        (points, skipped)
    }
}

/// Parameter values of one sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub theta: f64,
    pub w1: Option<f64>,
    pub w2: Option<f64>,
    pub g0: Option<f64>,
}

impl SweepPoint {
    /// The initial three-qubit state of this point.
    pub fn initial_state(&self) -> Result<PureState> {
        match (self.w1, self.w2, self.g0) {
            (Some(w1), Some(w2), None) => w_state_from_pair(w1, w2).ok_or_else(|| {
                Error::InvalidParameter(format!("w1 = {w1}, w2 = {w2} outside the unit disk"))
            }),
            (None, None, Some(g0)) => {
                let g0 = g0.clamp(-1.0, 1.0);
                ghz_state(g0, (1.0 - g0 * g0).max(0.0).sqrt())
            }
            _ => Err(Error::InvalidParameter(
                "point must set (w1, w2) or g0".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(flatten)]
    pub point: SweepPoint,
    #[serde(flatten)]
    pub report: EntanglementReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub skipped: usize,
    pub measures: BTreeSet<Measure>,
    pub convention: NegativityConvention,
    pub site: CouplingSite,
}

/// Evaluates one point: compose with the environment, evolve, trace out D,
/// and measure.
pub fn evaluate_point(grid: &SweepGrid, point: &SweepPoint) -> Result<EntanglementReport> {
    let initial = point.initial_state()?;
    let env = env_qubit(grid.env[0], grid.env[1])?;
    let coupling = DmCoupling::from_theta(point.theta)?.with_site(grid.site);
    let reduced = reduced_dynamics(&initial, &env, &coupling)?;
    full_report(&reduced, grid.needs_tangle(), None, grid.convention)
}

/// Runs the sweep on the global rayon pool.
pub fn run_sweep(grid: &SweepGrid) -> Result<SweepResult> {
    run_sweep_with_jobs(grid, None)
}

/// Runs the sweep on a pool of `jobs` workers (global pool when `None`).
/// Row order does not depend on the worker count.
pub fn run_sweep_with_jobs(grid: &SweepGrid, jobs: Option<usize>) -> Result<SweepResult> {
    if grid.size() > MAX_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "grid has {} points, more than {MAX_GRID_POINTS}",
            grid.size()
        )));
    }
    let (points, skipped) = grid.points();
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let evaluate = || -> Result<Vec<SweepRow>> {
        points
            .par_iter()
            .map(|p| evaluate_point(grid, p).map(|report| SweepRow { point: *p, report }))
            .collect()
    };
    let rows = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(evaluate)?,
        None => evaluate()?,
    };
    Ok(SweepResult {
        rows,
        skipped,
        measures: grid.measures.clone(),
        convention: grid.convention,
        site: grid.site,
    })
}

/// Maximal run of grid points where a measure stays below the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsdInterval {
    pub measure: Measure,
    pub parameter: String,
    pub lo: f64,
    pub hi: f64,
    /// Number of grid points in the run.
    pub points: usize,
    /// The run touches the first or last grid point.
    pub boundary: bool,
    /// Values of the parameters held fixed.
    pub context: Vec<(String, f64)>,
}

const PARAMETERS: [&str; 4] = ["theta", "w1", "w2", "g0"];

fn parameter_value(p: &SweepPoint, name: &str) -> Option<f64> {
    match name {
        "theta" => Some(p.theta),
        "w1" => p.w1,
        "w2" => p.w2,
        "g0" => p.g0,
        _ => None,
    }
}

/// Name of the single parameter that varies across `rows`.
pub fn swept_parameter(rows: &[SweepRow]) -> Result<&'static str> {
    let varying: Vec<&'static str> = PARAMETERS
        .into_iter()
        .filter(|name| {
            let first = rows.first().and_then(|r| parameter_value(&r.point, name));
            rows.iter()
                .any(|r| parameter_value(&r.point, name) != first)
        })
        .collect();
    match varying.as_slice() {
        [] => Ok("theta"),
        [one] => Ok(one),
        many => Err(Error::InvalidParameter(format!(
            "sudden-death detection needs a single swept parameter, found {}",
            many.join(", ")
        ))),
    }
}

/// Runs of consecutive rows with `measure < tolerance` along the swept
/// parameter.
pub fn detect_esd(
    result: &SweepResult,
    measure: Measure,
    tolerance: f64,
) -> Result<Vec<EsdInterval>> {
    if !result.measures.contains(&measure) {
        return Err(Error::UnknownMeasure(measure.name().to_string()));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let rows = &result.rows;
    let parameter = swept_parameter(rows)?;
    let values: Vec<f64> = rows
        .iter()
        .map(|r| {
            measure
                .value(&r.report)
                .ok_or_else(|| Error::UnknownMeasure(measure.name().into()))
        })
        .collect::<Result<_>>()?;
    let context: Vec<(String, f64)> = match rows.first() {
        Some(first) => PARAMETERS
            .into_iter()
            .filter(|&n| n != parameter)
            .filter_map(|n| parameter_value(&first.point, n).map(|v| (n.to_string(), v)))
            .collect(),
        None => Vec::new(),
    };

    let mut out = Vec::new();
    let mut i = 0;
    while i < values.len() {
        if values[i] >= tolerance {
            i += 1;
            continue;
        }
        let start = i;
        while i < values.len() && values[i] < tolerance {
            i += 1;
        }
        let end = i - 1;
        let at = |k: usize| parameter_value(&rows[k].point, parameter).unwrap_or(f64::NAN);
        out.push(EsdInterval {
            measure,
            parameter: parameter.to_string(),
            lo: at(start),
            hi: at(end),
            points: end - start + 1,
            boundary: start == 0 || end == values.len() - 1,
            context: context.clone(),
        });
    }
    Ok(out)
}

/// A point where the three pairwise negativities agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingPoint {
    pub theta: f64,
    pub w1: f64,
    pub w2: f64,
    pub n_ab: f64,
    pub n_ac: f64,
    pub n_bc: f64,
    /// Mean of the three negativities.
    pub common_value: f64,
    /// max - min of the three negativities.
    pub spread: f64,
}

impl CrossingPoint {
    fn from_row(row: &SweepRow) -> Option<Self> {
        let r = &row.report;
        let vals = [r.n_ab, r.n_ac, r.n_bc];
        let max = vals.iter().copied().fold(f64::MIN, f64::max);
        let min = vals.iter().copied().fold(f64::MAX, f64::min);
        Some(Self {
            theta: row.point.theta,
            w1: row.point.w1?,
            w2: row.point.w2?,
            n_ab: r.n_ab,
            n_ac: r.n_ac,
            n_bc: r.n_bc,
            common_value: (r.n_ab + r.n_ac + r.n_bc) / 3.0,
            spread: max - min,
        })
    }

    /// The smallest of the three negativities.
    pub fn smallest(&self) -> f64 {
        self.n_ab.min(self.n_ac).min(self.n_bc)
    }

    /// `|N_AB - N_AC| < tol` and `|N_AC - N_BC| < tol`.
    pub fn within(&self, tolerance: f64) -> bool {
        (self.n_ab - self.n_ac).abs() < tolerance && (self.n_ac - self.n_bc).abs() < tolerance
    }
}

/// Settings shared by crossing scans and the period finder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub env: [C64; 2],
    pub convention: NegativityConvention,
    pub site: CouplingSite,
    /// Resolution of the w1 scan in [`find_crossings`].
    pub w1_step: f64,
    /// Points where any pairwise negativity is below this are degenerate
    /// (a partition is unentangled) and are never reported as crossings.
    pub min_negativity: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            env: [ONE, ZERO],
            convention: NegativityConvention::default(),
            site: CouplingSite::default(),
            w1_step: 1e-4,
            min_negativity: DEFAULT_ESD_TOLERANCE,
        }
    }
}

/// Crossings among W-family rows: one point (minimal spread) per contiguous
/// run of non-degenerate rows satisfying [`CrossingPoint::within`]. Runs
/// break whenever theta or w2 changes.
pub fn crossings_in(
    result: &SweepResult,
    tolerance: f64,
    min_negativity: f64,
) -> Vec<CrossingPoint> {
    let mut out = Vec::new();
    let mut best: Option<CrossingPoint> = None;
    let mut last_key: Option<(u64, u64)> = None;
    for row in &result.rows {
        let Some(cp) = CrossingPoint::from_row(row) else {
            continue;
        };
        let key = (cp.theta.to_bits(), cp.w2.to_bits());
        if last_key != Some(key) {
            out.extend(best.take());
            last_key = Some(key);
        }
        if cp.within(tolerance) && cp.smallest() >= min_negativity {
            best = match best {
                Some(b) if b.spread <= cp.spread => Some(b),
                _ => Some(cp),
            };
        } else {
            out.extend(best.take());
        }
    }
    out.extend(best.take());
    out
}

fn w1_scan(theta: f64, w2: f64, options: &ScanOptions) -> Result<Option<SweepResult>> {
    let w1_max = (1.0 - w2 * w2).max(0.0).sqrt();
    if w2.abs() > 1.0 {
        return Ok(None);
    }
    let grid = SweepGrid::new(
        Axis::fixed(theta)?,
        StateFamily::W {
            w1: Axis::new(0.0, w1_max, options.w1_step)?,
            w2: Axis::fixed(w2)?,
        },
    )
    .with_env(options.env[0], options.env[1])
    .with_measures([Measure::NAb, Measure::NAc, Measure::NBc])
    .with_convention(options.convention)
    .with_site(options.site);
    run_sweep(&grid).map(Some)
}

/// Scans w1 over `[0, sqrt(1 - w2^2)]` at fixed (theta, w2) for points where
/// all three pairwise negativities agree within `cross_tolerance`.
pub fn find_crossings(
    theta: f64,
    w2: f64,
    cross_tolerance: f64,
    options: &ScanOptions,
) -> Result<Vec<CrossingPoint>> {
    Ok(match w1_scan(theta, w2, options)? {
        Some(result) => crossings_in(&result, cross_tolerance, options.min_negativity),
        None => Vec::new(),
    })
}

/// The w1 at which the three pairwise negativities come closest, ignoring
/// degenerate points.
pub fn closest_approach(
    theta: f64,
    w2: f64,
    options: &ScanOptions,
) -> Result<Option<CrossingPoint>> {
    let Some(result) = w1_scan(theta, w2, options)? else {
        return Ok(None);
    };
    Ok(result
        .rows
        .iter()
        .filter_map(CrossingPoint::from_row)
        .filter(|c| c.smallest() >= options.min_negativity)
        .min_by(|a, b| a.spread.total_cmp(&b.spread)))
}

/// Result of [`find_period`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Period {
    pub value: f64,
    /// The measure is constant to within the tolerance; `value` is the
    /// sampling step.
    pub constant: bool,
}

/// Smallest P > 0 with `|f(theta + P) - f(theta)| < tolerance` at every
/// sample `theta = k * 0.001` of `[0, theta_max - P]`, where f is `measure`
/// along the evolution of `state`.
///
/// Candidate shifts come from local minima of the sampled mismatch; each is
/// refined by golden-section search on the continuous shift and then checked
/// against every sample. Requires `2 P <= theta_max`.
pub fn find_period(
    state: &PureState,
    measure: Measure,
    theta_max: f64,
    tolerance: f64,
    options: &ScanOptions,
) -> Result<Period> {
    if theta_max.is_nan() || theta_max <= 0.0 || tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidParameter(
            "theta_max and tolerance must be positive".into(),
        ));
    }
    let env = env_qubit(options.env[0], options.env[1])?;
    let f = |theta: f64| -> Result<f64> {
        let coupling = DmCoupling::from_theta(theta)?.with_site(options.site);
        let reduced = reduced_dynamics(state, &env, &coupling)?;
        let report = full_report(&reduced, measure.needs_tangle(), None, options.convention)?;
        measure
            .value(&report)
            .ok_or_else(|| Error::UnknownMeasure(measure.name().into()))
    };

    let step = PERIOD_SAMPLE_STEP;
    let n = (theta_max / step + 1e-9).floor() as usize;
    let thetas: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
    let samples: Vec<f64> = thetas.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;

    let max = samples.iter().copied().fold(f64::MIN, f64::max);
    let min = samples.iter().copied().fold(f64::MAX, f64::min);
    let range = max - min;
    if range < tolerance {
        return Ok(Period {
            value: step,
            constant: true,
        });
    }

    let max_shift = n / 2;
    let mismatch: Vec<f64> = (0..=max_shift + 1)
        .into_par_iter()
        .map(|k| {
            (0..=n.saturating_sub(k))
                .map(|i| (samples[i + k] - samples[i]).abs())
                .fold(0.0, f64::max)
        })
        .collect();

    // Continuous mismatch on a subsample, used to refine a candidate shift.
    let subsample: Vec<f64> = {
        let count = 64.min(n + 1);
        (0..count).map(|j| thetas[j * n / count.max(1)]).collect()
    };
    let continuous_mismatch = |shift: f64| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &t in subsample.iter().filter(|&&t| t + shift <= theta_max) {
            worst = worst.max((f(t + shift)? - f(t)?).abs());
        }
        Ok(worst)
    };

    let mut left_trivial = false;
    for k in 1..max_shift {
        if !left_trivial {
            left_trivial = mismatch[k] > range / 2.0;
            continue;
        }
        let local_min = mismatch[k] <= mismatch[k - 1] && mismatch[k] <= mismatch[k + 1];
        if !local_min || mismatch[k] > range / 2.0 {
            continue;
        }
        let shift = golden_section(
            (k - 1) as f64 * step,
            (k + 1) as f64 * step,
            &continuous_mismatch,
        )?;
        if 2.0 * shift > theta_max + 1e-12 {
            break;
        }
        let mut ok = true;
        for (i, &t) in thetas.iter().enumerate() {
            if t + shift > theta_max {
                break;
            }
            if (f(t + shift)? - samples[i]).abs() >= tolerance {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Period {
                value: shift,
                constant: false,
            });
        }
    }
    Err(Error::NoPeriodFound { theta_max })
}

fn golden_section<F>(mut lo: f64, mut hi: f64, f: &F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..60 {
        if hi - lo < 1e-12 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}
