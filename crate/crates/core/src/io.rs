//! Flat-file formats: the sweep CSV, its JSON sidecar, the run manifest, and
//! the textual parameter syntax shared by the command line.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::C64;
use crate::scan::{Axis, CrossingPoint, EsdInterval, Measure, SweepResult, SweepRow};

/// Exact header of the sweep table.
pub const CSV_HEADER: [&str; 18] = [
    "theta",
    "w1",
    "w2",
    "g0",
    "n_ab",
    "n_ac",
    "n_bc",
    "n_a_bc",
    "n_b_ac",
    "n_c_ab",
    "pi_a",
    "pi_b",
    "pi_c",
    "three_pi",
    "three_tangle",
    "concurrence_ab",
    "concurrence_ac",
    "concurrence_bc",
];

pub const SIDECAR_SCHEMA: u32 = 1;
pub const MANIFEST_SCHEMA: u32 = 1;

/// Measure values with magnitude below this are published as exactly zero.
pub const PUBLISH_ZERO: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{field}: {reason}")]
    Field { field: String, reason: String },

    #[error("CSV header mismatch: expected {expected:?}, found {found:?}")]
    Header { expected: String, found: String },

    #[error("CSV line {line}: {reason}")]
    Row { line: u64, reason: String },

    #[error("unsupported schema version {found} (expected {expected})")]
    Schema { expected: u32, found: u32 },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn field_error(field: &str, reason: impl Into<String>) -> FormatError {
    FormatError::Field {
        field: field.to_string(),
        reason: reason.into(),
    }
}

/// One published row of the sweep table; empty cells are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepRecord {
    pub theta: f64,
    pub w1: Option<f64>,
    pub w2: Option<f64>,
    pub g0: Option<f64>,
    pub n_ab: Option<f64>,
    pub n_ac: Option<f64>,
    pub n_bc: Option<f64>,
    pub n_a_bc: Option<f64>,
    pub n_b_ac: Option<f64>,
    pub n_c_ab: Option<f64>,
    pub pi_a: Option<f64>,
    pub pi_b: Option<f64>,
    pub pi_c: Option<f64>,
    pub three_pi: Option<f64>,
    pub three_tangle: Option<f64>,
    pub concurrence_ab: Option<f64>,
    pub concurrence_ac: Option<f64>,
    pub concurrence_bc: Option<f64>,
}

fn publish(v: f64) -> f64 {
    if v.abs() < PUBLISH_ZERO {
        0.0
    } else {
        v
    }
}

impl SweepRecord {
    /// The published form of a row: unrequested measures are dropped and
    /// tiny values are snapped to zero.
    pub fn from_row(row: &SweepRow, measures: &std::collections::BTreeSet<Measure>) -> Self {
        let pick = |m: Measure| {
            if measures.contains(&m) {
                m.value(&row.report).map(publish)
            } else {
                None
            }
        };
        Self {
            theta: row.point.theta,
            w1: row.point.w1,
            w2: row.point.w2,
            g0: row.point.g0,
            n_ab: pick(Measure::NAb),
            n_ac: pick(Measure::NAc),
            n_bc: pick(Measure::NBc),
            n_a_bc: pick(Measure::NABc),
            n_b_ac: pick(Measure::NBAc),
            n_c_ab: pick(Measure::NCAb),
            pi_a: pick(Measure::PiA),
            pi_b: pick(Measure::PiB),
            pi_c: pick(Measure::PiC),
            three_pi: pick(Measure::ThreePi),
            three_tangle: pick(Measure::ThreeTangle),
            concurrence_ab: pick(Measure::ConcurrenceAb),
            concurrence_ac: pick(Measure::ConcurrenceAc),
            concurrence_bc: pick(Measure::ConcurrenceBc),
        }
    }

    fn cells(&self) -> [Option<f64>; 18] {
        [
            Some(self.theta),
            self.w1,
            self.w2,
            self.g0,
            self.n_ab,
            self.n_ac,
            self.n_bc,
            self.n_a_bc,
            self.n_b_ac,
            self.n_c_ab,
            self.pi_a,
            self.pi_b,
            self.pi_c,
            self.three_pi,
            self.three_tangle,
            self.concurrence_ab,
            self.concurrence_ac,
            self.concurrence_bc,
        ]
    }

    fn from_cells(c: [Option<f64>; 18]) -> Option<Self> {
        Some(Self {
            theta: c[0]?,
            w1: c[1],
            w2: c[2],
            g0: c[3],
            n_ab: c[4],
            n_ac: c[5],
            n_bc: c[6],
            n_a_bc: c[7],
            n_b_ac: c[8],
            n_c_ab: c[9],
            pi_a: c[10],
            pi_b: c[11],
            pi_c: c[12],
            three_pi: c[13],
            three_tangle: c[14],
            concurrence_ab: c[15],
            concurrence_ac: c[16],
            concurrence_bc: c[17],
        })
    }

    /// Value of a measure column.
    pub fn get(&self, m: Measure) -> Option<f64> {
        let column = Measure::ALL.iter().position(|&x| x == m)?;
        self.cells()[4 + column]
    }
}

/// Published rows of a sweep, in row order.
pub fn records(result: &SweepResult) -> Vec<SweepRecord> {
    result
        .rows
        .iter()
        .map(|r| SweepRecord::from_row(r, &result.measures))
        .collect()
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

pub fn write_sweep_csv<W: Write>(out: W, records: &[SweepRecord]) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(
            r.cells()
                .iter()
                .map(|c| c.map(format_float).unwrap_or_default()),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>, FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(FormatError::Header {
            expected: CSV_HEADER.join(","),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut cells = [None; 18];
        for (i, cell) in record.iter().enumerate() {
            if cell.is_empty() {
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| FormatError::Row {
                line,
                reason: format!("{}: not a number: {cell:?}", CSV_HEADER[i]),
            })?;
            if !v.is_finite() {
                return Err(FormatError::Row {
                    line,
                    reason: format!("{}: non-finite value", CSV_HEADER[i]),
                });
            }
            cells[i] = Some(v);
        }
        out.push(SweepRecord::from_cells(cells).ok_or(FormatError::Row {
            line,
            reason: "theta is empty".into(),
        })?);
    }
    Ok(out)
}

/// The JSON form of a sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub schema: u32,
    pub skipped: usize,
    pub rows: Vec<SweepRecord>,
}

pub fn write_sweep_json<W: Write>(out: W, result: &SweepResult) -> Result<(), FormatError> {
    let doc = SweepDocument {
        schema: SIDECAR_SCHEMA,
        skipped: result.skipped,
        rows: records(result),
    };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

/// Sudden-death intervals and crossings found in a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub schema: u32,
    pub esd_intervals: Vec<EsdInterval>,
    pub crossings: Vec<CrossingPoint>,
}

impl Sidecar {
    pub fn new(esd_intervals: Vec<EsdInterval>, crossings: Vec<CrossingPoint>) -> Self {
        Self {
            schema: SIDECAR_SCHEMA,
            esd_intervals,
            crossings,
        }
    }
}

pub fn write_sidecar<W: Write>(out: W, sidecar: &Sidecar) -> Result<(), FormatError> {
    serde_json::to_writer_pretty(out, sidecar)?;
    Ok(())
}

pub fn read_sidecar<R: Read>(input: R) -> Result<Sidecar, FormatError> {
    let value: serde_json::Value = serde_json::from_reader(input)?;
    let found = value.get("schema").and_then(|s| s.as_u64()).unwrap_or(0);
    if found != SIDECAR_SCHEMA as u64 {
        return Err(FormatError::Schema {
            expected: SIDECAR_SCHEMA,
            found: found.min(u32::MAX as u64) as u32,
        });
    }
    Ok(serde_json::from_value(value)?)
}

/// Provenance written next to reproduced data sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: u32,
    pub tool_version: String,
    pub target: String,
    pub negativity_convention: String,
    pub coupling: String,
    pub seed: u64,
    pub parameters: serde_json::Value,
    pub files: Vec<String>,
}

/// Parses `start:stop:step`.
pub fn parse_axis(field: &str, text: &str) -> Result<Axis, FormatError> {
    let parts: Vec<&str> = text.trim().split(':').collect();
    if parts.len() != 3 {
        return Err(field_error(
            field,
            format!("expected start:stop:step, got {text:?}"),
        ));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = parse_number(field, part)?;
    }
    Axis::new(v[0], v[1], v[2]).map_err(|e| field_error(field, e.to_string()))
}

fn parse_number(field: &str, text: &str) -> Result<f64, FormatError> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| field_error(field, format!("not a number: {text:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(field_error(field, format!("non-finite value {text:?}")))
    }
}

/// Parses a comma-separated list of exactly `len` finite numbers.
pub fn parse_list(field: &str, text: &str, len: usize) -> Result<Vec<f64>, FormatError> {
    let values = text
        .split(',')
        .map(|p| parse_number(field, p))
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != len {
        return Err(field_error(
            field,
            format!(
                "expected {len} comma-separated values, got {}",
                values.len()
            ),
        ));
    }
    Ok(values)
}

/// Parses `c0re,c0im,c1re,c1im` into two complex amplitudes.
pub fn parse_env(field: &str, text: &str) -> Result<[C64; 2], FormatError> {
    let v = parse_list(field, text, 4)?;
    Ok([C64::new(v[0], v[1]), C64::new(v[2], v[3])])
}

/// Parses a comma-separated list of measure names; `all` selects every column.
pub fn parse_measures(field: &str, text: &str) -> Result<Vec<Measure>, FormatError> {
    if text.trim() == "all" {
        return Ok(Measure::ALL.to_vec());
    }
    let mut out = Vec::new();
    for name in text.split(',') {
        let m: Measure = name
            .trim()
            .parse()
            .map_err(|e: crate::Error| field_error(field, e.to_string()))?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::{run_sweep, StateFamily, SweepGrid};

    fn sample_result() -> SweepResult {
        let grid = SweepGrid::new(
            Axis::new(0.0, 0.4, 0.2).unwrap(),
            StateFamily::W {
                w1: Axis::new(0.0, 0.6, 0.3).unwrap(),
                w2: Axis::fixed(0.5).unwrap(),
            },
        )
        .with_measures(Measure::ALL);
        run_sweep(&grid).unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let recs = records(&sample_result());
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&CSV_HEADER.join(",")));
        assert_eq!(read_sweep_csv(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn unused_and_unrequested_cells_are_empty() {
        let grid = SweepGrid::new(
            Axis::fixed(0.1).unwrap(),
            StateFamily::Ghz {
                g0: Axis::fixed(0.6).unwrap(),
            },
        )
        .with_measures([Measure::ThreePi]);
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &records(&run_sweep(&grid).unwrap())).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row = text.lines().nth(1).unwrap();
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 18);
        assert_eq!(
            (cells[0], cells[1], cells[2], cells[3]),
            ("0.1", "", "", "0.6")
        );
        assert!(cells[4..13].iter().all(|c| c.is_empty()));
        assert!(!cells[13].is_empty());
    }

    #[test]
    fn tiny_values_publish_as_zero() {
        assert_eq!(publish(3e-13), 0.0);
        assert_eq!(publish(-3e-13), 0.0);
        assert_eq!(publish(2e-12), 2e-12);
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(0.1), "0.1");
    }

    #[test]
    fn csv_rejects_bad_input() {
        assert!(matches!(
            read_sweep_csv("a,b\n1,2\n".as_bytes()),
            Err(FormatError::Header { .. })
        ));
        let bad = format!("{}\nx{}\n", CSV_HEADER.join(","), ",".repeat(17));
        assert!(matches!(
            read_sweep_csv(bad.as_bytes()),
            Err(FormatError::Row { .. })
        ));
        let no_theta = format!("{}\n{}\n", CSV_HEADER.join(","), ",".repeat(17));
        assert!(read_sweep_csv(no_theta.as_bytes()).is_err());
        let short = format!("{}\n1,2\n", CSV_HEADER.join(","));
        assert!(read_sweep_csv(short.as_bytes()).is_err());
    }

    #[test]
    fn sidecar_round_trip_and_schema() {
        let s = Sidecar::new(Vec::new(), Vec::new());
        let mut buf = Vec::new();
        write_sidecar(&mut buf, &s).unwrap();
        assert_eq!(read_sidecar(buf.as_slice()).unwrap(), s);
        let err = read_sidecar(r#"{"schema":2,"esd_intervals":[],"crossings":[]}"#.as_bytes());
        assert!(matches!(err, Err(FormatError::Schema { found: 2, .. })));
    }

    #[test]
    fn parsers() {
        let a = parse_axis("--theta-range", "0:0.8:0.1").unwrap();
        assert_eq!(a.len(), 9);
        assert!(parse_axis("--theta-range", "1:0:0.1").is_err());
        assert!(parse_axis("--theta-range", "0:1").is_err());
        assert!(parse_axis("--theta-range", "0:nan:0.1").is_err());
        let err = parse_list("--w", "1,2", 3).unwrap_err().to_string();
        assert!(err.starts_with("--w:"), "{err}");
        let env = parse_env("--env", "1,0,0,0.5").unwrap();
        assert_eq!(env[1], C64::new(0.0, 0.5));
        assert_eq!(
            parse_measures("--measures", "three_pi, n_ab,three_pi").unwrap(),
            vec![Measure::ThreePi, Measure::NAb]
        );
        assert_eq!(parse_measures("--measures", "all").unwrap().len(), 14);
        assert!(parse_measures("--measures", "foo").is_err());
    }
}
