//! Named data sets: each target evaluates a fixed family of sweeps and
//! writes the resulting tables plus a `MANIFEST.json`.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde_json::json;
use thiserror::Error;

use crate::dynamics::CouplingSite;
use crate::io::{
    format_float, records, write_sidecar, write_sweep_csv, FormatError, Manifest, Sidecar,
    SweepRecord, MANIFEST_SCHEMA,
};
use crate::linalg::{C64, ONE, ZERO};
use crate::measures::NegativityConvention;
use crate::scan::{
    closest_approach, crossings_in, detect_esd, run_sweep_with_jobs, Axis, CrossingPoint,
    EsdInterval, Measure, ScanOptions, StateFamily, SweepGrid, DEFAULT_CROSS_TOLERANCE,
    DEFAULT_ESD_TOLERANCE,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MANIFEST_FILE: &str = "MANIFEST.json";

const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

/// (theta, w2) panels of the bipartite w1 scans.
const FIG4_PANELS: [(f64, f64); 6] = [
    (0.1, 0.5),
    (0.2, 0.3),
    (0.3, 0.7),
    (0.4, 0.5),
    (0.5, 0.3),
    (0.7, 0.1),
];
const FIG5_PANELS: [(f64, f64); 4] = [(0.6, 0.8), (0.8, 0.1), (0.8, 0.5), (0.9, 0.1)];
/// (theta, w2) rows of the crossing table with admissible parameters.
pub const CROSSING_ROWS: [(f64, f64); 3] = [(6.5, 0.4), (7.2, 0.5), (9.1, 0.7)];
/// Window searched for the crossing whose printed w1 is out of range.
pub const CROSSING_SEARCH_THETA: (f64, f64) = (2.5, 3.3);
pub const CROSSING_SEARCH_W2: [f64; 2] = [0.4, 0.8];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    TableSymmetricW,
    TableCrossings,
    Fig2ThreePi,
    Fig4Bipartite,
    Fig5Bipartite,
    Fig6Crossing,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::TableSymmetricW,
        Target::TableCrossings,
        Target::Fig2ThreePi,
        Target::Fig4Bipartite,
        Target::Fig5Bipartite,
        Target::Fig6Crossing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::TableSymmetricW => "table-symmetric-w",
            Target::TableCrossings => "table-crossings",
            Target::Fig2ThreePi => "fig2-threepi",
            Target::Fig4Bipartite => "fig4-bipartite",
            Target::Fig5Bipartite => "fig5-bipartite",
            Target::Fig6Crossing => "fig6-crossing",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = ReproError;

    fn from_str(s: &str) -> Result<Self, ReproError> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| ReproError::UnknownTarget(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum ReproError {
    #[error("unknown target {0:?}; expected one of table-symmetric-w, table-crossings, fig2-threepi, fig4-bipartite, fig5-bipartite, fig6-crossing")]
    UnknownTarget(String),

    #[error(transparent)]
    Compute(#[from] crate::Error),

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: FormatError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReproOptions {
    pub convention: NegativityConvention,
    pub site: CouplingSite,
    pub env: [C64; 2],
    pub esd_tolerance: f64,
    pub cross_tolerance: f64,
    pub seed: u64,
    pub jobs: Option<usize>,
}

impl Default for ReproOptions {
    fn default() -> Self {
        Self {
            convention: NegativityConvention::default(),
            site: CouplingSite::default(),
            env: [ONE, ZERO],
            esd_tolerance: DEFAULT_ESD_TOLERANCE,
            cross_tolerance: DEFAULT_CROSS_TOLERANCE,
            seed: 42,
            jobs: None,
        }
    }
}

impl ReproOptions {
    fn grid(&self, theta: Axis, family: StateFamily) -> SweepGrid {
        SweepGrid::new(theta, family)
            .with_env(self.env[0], self.env[1])
            .with_convention(self.convention)
            .with_site(self.site)
    }

    fn scan_options(&self, w1_step: f64) -> ScanOptions {
        ScanOptions {
            env: self.env,
            convention: self.convention,
            site: self.site,
            w1_step,
            ..ScanOptions::default()
        }
    }
}

/// One output file held in memory.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Sweep(Vec<SweepRecord>),
    Crossings(Vec<CrossingRow>),
    Sidecar(Sidecar),
}

/// A row of the crossing table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingRow {
    /// Which scan produced the row: `row` or `search`.
    pub source: &'static str,
    pub point: CrossingPoint,
    pub within_tolerance: bool,
}

pub const CROSSING_HEADER: [&str; 10] = [
    "source",
    "theta",
    "w1",
    "w2",
    "n_ab",
    "n_ac",
    "n_bc",
    "common_value",
    "spread",
    "within_tolerance",
];

pub fn write_crossings_csv<W: Write>(out: W, rows: &[CrossingRow]) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CROSSING_HEADER)?;
    for r in rows {
        let p = &r.point;
        let mut cells = vec![r.source.to_string()];
        cells.extend(
            [
                p.theta,
                p.w1,
                p.w2,
                p.n_ab,
                p.n_ac,
                p.n_bc,
                p.common_value,
                p.spread,
            ]
            .map(format_float),
        );
        cells.push(r.within_tolerance.to_string());
        w.write_record(&cells)?;
    }
    w.flush()?;
    Ok(())
}

/// Data of one target, before it is written.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproOutput {
    pub target: Target,
    pub files: Vec<(String, Artifact)>,
    pub parameters: serde_json::Value,
}

fn w_family(w1: Axis, w2: Axis) -> StateFamily {
    StateFamily::W { w1, w2 }
}

fn bipartite_panels(
    panels: &[(f64, f64)],
    options: &ReproOptions,
) -> Result<(Vec<SweepRecord>, Vec<EsdInterval>), ReproError> {
    let mut rows = Vec::new();
    let mut intervals = Vec::new();
    for &(theta, w2) in panels {
        let w1_max = (1.0 - w2 * w2).sqrt();
        let grid = options
            .grid(
                Axis::fixed(theta)?,
                w_family(Axis::new(0.0, w1_max, 0.01)?, Axis::fixed(w2)?),
            )
            .with_measures([Measure::NAb, Measure::NAc, Measure::NBc]);
        let result = run_sweep_with_jobs(&grid, options.jobs)?;
        for m in [Measure::NAb, Measure::NAc, Measure::NBc] {
            intervals.extend(detect_esd(&result, m, options.esd_tolerance)?);
        }
        rows.extend(records(&result));
    }
    Ok((rows, intervals))
}

fn panels_json(panels: &[(f64, f64)]) -> serde_json::Value {
    json!(panels
        .iter()
        .map(|&(t, w2)| json!({"theta": t, "w2": w2}))
        .collect::<Vec<_>>())
}

/// Evaluates a target without touching the filesystem.
pub fn compute(target: Target, options: &ReproOptions) -> Result<ReproOutput, ReproError> {
    let (files, parameters) = match target {
        Target::TableSymmetricW => {
            let grid = options.grid(
                Axis::new(0.0, 0.8, 0.1)?,
                w_family(Axis::fixed(INV_SQRT3)?, Axis::fixed(INV_SQRT3)?),
            );
            let result = run_sweep_with_jobs(&grid, options.jobs)?;
            (
                vec![(format!("{target}.csv"), Artifact::Sweep(records(&result)))],
                json!({"theta": "0:0.8:0.1", "w0": INV_SQRT3, "w1": INV_SQRT3, "w2": INV_SQRT3}),
            )
        }
        Target::Fig2ThreePi => {
            let thetas = [0.0, 0.2, 0.5, 0.7];
            let mut rows = Vec::new();
            for theta in thetas {
                let grid = options.grid(
                    Axis::fixed(theta)?,
                    w_family(Axis::new(0.0, 1.0, 0.05)?, Axis::new(0.0, 1.0, 0.05)?),
                );
                rows.extend(records(&run_sweep_with_jobs(&grid, options.jobs)?));
            }
            (
                vec![(format!("{target}.csv"), Artifact::Sweep(rows))],
                json!({"theta": thetas, "w1": "0:1:0.05", "w2": "0:1:0.05"}),
            )
        }
        Target::Fig4Bipartite | Target::Fig5Bipartite => {
            let panels: &[(f64, f64)] = if target == Target::Fig4Bipartite {
                &FIG4_PANELS
            } else {
                &FIG5_PANELS
            };
            let (rows, intervals) = bipartite_panels(panels, options)?;
            (
                vec![
                    (format!("{target}.csv"), Artifact::Sweep(rows)),
                    (
                        format!("{target}.esd.json"),
                        Artifact::Sidecar(Sidecar::new(intervals, Vec::new())),
                    ),
                ],
                json!({"panels": panels_json(panels), "w1_step": 0.01, "esd_tolerance": options.esd_tolerance}),
            )
        }
        Target::Fig6Crossing => {
            let mut rows = Vec::new();
            let mut crossings = Vec::new();
            for (theta, w2) in CROSSING_ROWS {
                let w1_max = (1.0 - w2 * w2).sqrt();
                let grid = options
                    .grid(
                        Axis::fixed(theta)?,
                        w_family(Axis::new(0.0, w1_max, 1e-3)?, Axis::fixed(w2)?),
                    )
                    .with_measures([Measure::NAb, Measure::NAc, Measure::NBc]);
                let result = run_sweep_with_jobs(&grid, options.jobs)?;
                crossings.extend(crossings_in(
                    &result,
                    options.cross_tolerance,
                    DEFAULT_ESD_TOLERANCE,
                ));
                rows.extend(records(&result));
            }
            (
                vec![
                    (format!("{target}.csv"), Artifact::Sweep(rows)),
                    (
                        format!("{target}.crossings.json"),
                        Artifact::Sidecar(Sidecar::new(Vec::new(), crossings)),
                    ),
                ],
                json!({"panels": panels_json(&CROSSING_ROWS), "w1_step": 1e-3, "cross_tolerance": options.cross_tolerance}),
            )
        }
        Target::TableCrossings => {
            let mut rows = Vec::new();
            let fine = options.scan_options(1e-4);
            for (theta, w2) in CROSSING_ROWS {
                if let Some(point) = closest_approach(theta, w2, &fine)? {
                    rows.push(CrossingRow {
                        source: "row",
                        within_tolerance: point.within(options.cross_tolerance),
                        point,
                    });
                }
            }
            let coarse = options.scan_options(1e-3);
            let (lo, hi) = CROSSING_SEARCH_THETA;
            for w2 in CROSSING_SEARCH_W2 {
                let mut best: Option<CrossingPoint> = None;
                for theta in Axis::new(lo, hi, 0.01)?.values() {
                    if let Some(p) = closest_approach(theta, w2, &coarse)? {
                        if best.is_none_or(|b| p.spread < b.spread) {
                            best = Some(p);
                        }
                    }
                }
                if let Some(point) = best {
                    rows.push(CrossingRow {
                        source: "search",
                        within_tolerance: point.within(options.cross_tolerance),
                        point,
                    });
                }
            }
            (
                vec![(format!("{target}.csv"), Artifact::Crossings(rows))],
                json!({
                    "rows": panels_json(&CROSSING_ROWS),
                    "row_w1_step": 1e-4,
                    "search": {"theta": format!("{lo}:{hi}:0.01"), "w2": CROSSING_SEARCH_W2, "w1_step": 1e-3},
                    "cross_tolerance": options.cross_tolerance,
                }),
            )
        }
    };
    Ok(ReproOutput {
        target,
        files,
        parameters,
    })
}

fn write_file(path: &Path, artifact: &Artifact) -> Result<(), FormatError> {
    let mut out = BufWriter::new(File::create(path)?);
    match artifact {
        Artifact::Sweep(rows) => write_sweep_csv(&mut out, rows)?,
        Artifact::Crossings(rows) => write_crossings_csv(&mut out, rows)?,
        Artifact::Sidecar(s) => write_sidecar(&mut out, s)?,
    }
    out.flush()?;
    Ok(())
}

fn write_error(path: &Path, source: FormatError) -> ReproError {
    ReproError::Write {
        path: path.display().to_string(),
        source,
    }
}

/// Writes every file of `output` into `out_dir`, followed by the manifest.
pub fn write_output(
    output: &ReproOutput,
    out_dir: &Path,
    options: &ReproOptions,
) -> Result<Manifest, ReproError> {
    fs::create_dir_all(out_dir).map_err(|e| write_error(out_dir, e.into()))?;
    for (name, artifact) in &output.files {
        let path = out_dir.join(name);
        write_file(&path, artifact).map_err(|e| write_error(&path, e))?;
    }
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA,
        tool_version: TOOL_VERSION.to_string(),
        target: output.target.name().to_string(),
        negativity_convention: options.convention.to_string(),
        coupling: options.site.to_string(),
        seed: options.seed,
        parameters: json!({
            "env": [[options.env[0].re, options.env[0].im], [options.env[1].re, options.env[1].im]],
            "target": output.parameters,
        }),
        files: output.files.iter().map(|(n, _)| n.clone()).collect(),
    };
    let path = out_dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| write_error(&path, e.into()))?;
    fs::write(&path, text + "\n").map_err(|e| write_error(&path, e.into()))?;
    Ok(manifest)
}

/// Computes and writes a target.
pub fn run(target: Target, out_dir: &Path, options: &ReproOptions) -> Result<Manifest, ReproError> {
    let output = compute(target, options)?;
    write_output(&output, out_dir, options)
}
