//! CSV / JSON output with a fixed column set.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{HarnessError, SweepResult};
use crate::analysis::BoundCurve;
use crate::channel::SnrReference;
use crate::codec::IcmParams;

pub const CSV_HEADER: &str =
    "scheme,n,k,i,m,mode,detector,snr_db,snr_ref,bits,bit_errors,ber,blocks,block_errors,seed";

/// One output line. Bound rows carry `detector = "bound"` and zero counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub scheme: String,
    pub n: u32,
    pub k: u32,
    pub i: u32,
    pub m: u32,
    pub mode: String,
    pub detector: String,
    pub snr_db: f64,
    pub snr_ref: String,
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub blocks: u64,
    pub block_errors: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// `.json` selects JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => OutputFormat::Json,
            _ => OutputFormat::Csv,
        }
    }
}

fn base_row(p: &IcmParams, detector: &str, snr_ref: SnrReference) -> CsvRow {
    CsvRow {
        scheme: p.scheme_label(),
        n: p.n(),
        k: p.k(),
        i: p.i(),
        m: p.psk_order(),
        mode: p.mode().name().to_string(),
        detector: detector.to_string(),
        snr_db: 0.0,
        snr_ref: snr_ref.to_string(),
        bits: 0,
        bit_errors: 0,
        ber: 0.0,
        blocks: 0,
        block_errors: 0,
        seed: 0,
    }
}

pub fn sweep_rows(r: &SweepResult) -> Vec<CsvRow> {
    let c = &r.config;
    let base = base_row(&c.params, &c.detector.to_string(), c.snr.reference);
    r.rows
        .iter()
        .map(|pt| CsvRow {
            snr_db: pt.snr_db,
            bits: pt.bits,
            bit_errors: pt.bit_errors,
            ber: pt.ber,
            blocks: pt.blocks,
            block_errors: pt.block_errors,
            seed: c.seed,
            ..base.clone()
        })
        .collect()
}

pub fn bound_rows(p: &IcmParams, curve: &BoundCurve, snr_ref: SnrReference) -> Vec<CsvRow> {
    let base = base_row(p, "bound", snr_ref);
    curve
        .points
        .iter()
        .map(|pt| CsvRow {
            snr_db: pt.snr_db,
            ber: pt.ber,
            ..base.clone()
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[CsvRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn fmt_err(path: &Path, message: impl ToString) -> HarnessError {
    HarnessError::Format {
        path: path.display().to_string(),
        message: message.to_string(),
    }
}

/// Writes `rows` to `out`; JSON output also embeds `context` (configuration,
/// provenance) when given.
pub fn write_rows<W: Write>(
    rows: &[CsvRow],
    context: Option<serde_json::Value>,
    format: OutputFormat,
    mut out: W,
) -> Result<(), String> {
    match format {
        OutputFormat::Csv => write_csv(rows, out).map_err(|e| e.to_string()),
        OutputFormat::Json => {
            let mut doc = serde_json::Map::new();
            if let Some(serde_json::Value::Object(ctx)) = context {
                doc.extend(ctx);
            }
            doc.insert(
                "rows".into(),
                serde_json::to_value(rows).map_err(|e| e.to_string())?,
            );
            serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| e.to_string())?;
            out.write_all(b"\n").map_err(|e| e.to_string())
        }
    }
}

/// [`write_rows`] into a file at `path`.
pub fn emit_rows(
    rows: &[CsvRow],
    context: Option<serde_json::Value>,
    format: OutputFormat,
    path: &Path,
) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(io_err(path))?;
    write_rows(rows, context, format, std::io::BufWriter::new(file)).map_err(|e| fmt_err(path, e))
}

fn sweep_context(r: &SweepResult) -> serde_json::Value {
    serde_json::json!({
        "config": r.config,
        "provenance": r.provenance,
        "points": r.rows,
    })
}

/// Writes a sweep; JSON carries the configuration, provenance and the
/// per-point diagnostics alongside the rows.
pub fn write_sweep<W: Write>(r: &SweepResult, format: OutputFormat, out: W) -> Result<(), String> {
    write_rows(&sweep_rows(r), Some(sweep_context(r)), format, out)
}

/// [`write_sweep`] into a file at `path`.
pub fn emit(r: &SweepResult, format: OutputFormat, path: &Path) -> Result<(), HarnessError> {
    emit_rows(&sweep_rows(r), Some(sweep_context(r)), format, path)
}

/// Reads rows back from a CSV file written by [`emit`].
pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>, HarnessError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| fmt_err(path, e))?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| fmt_err(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.join(",") != CSV_HEADER {
        return Err(fmt_err(path, format!("unexpected header '{}'", header.join(","))));
    }
    rdr.deserialize()
        .collect::<Result<Vec<CsvRow>, _>>()
        .map_err(|e| fmt_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::analysis::BoundPoint;
    use crate::detect::DetectorKind;

    fn sweep() -> SweepResult {
        let mut cfg = SimConfig::new(
            IcmParams::diversity(4, 3, 8).unwrap(),
            DetectorKind::Lcml,
            SnrGrid::parse("0:10:20", SnrReference::Eb).unwrap(),
        );
        cfg.stop = StopRule {
            min_bit_errors: 50,
            max_bits: 30_000,
        };
        cfg.seed = 42;
        run_sweep(&cfg).unwrap()
    }

    #[test]
    fn csv_round_trip() {
        let r = sweep();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        emit(&r, OutputFormat::Csv, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        let back = read_csv(&path).unwrap();
        assert_eq!(back, sweep_rows(&r));
        assert_eq!(back[0].scheme, "OFDM-ICM(4,3,8)");
        assert_eq!(back[0].mode, "diversity");
        assert_eq!(back[0].snr_ref, "eb");
        assert_eq!(back[0].seed, 42);
    }

    #[test]
    fn json_embeds_config() {
        let r = sweep();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        assert_eq!(OutputFormat::from_path(&path), OutputFormat::Json);
        emit(&r, OutputFormat::Json, &path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["config"]["seed"], 42);
        assert_eq!(v["provenance"]["config_hash"], r.provenance.config_hash.as_str());
        let rows: Vec<CsvRow> = serde_json::from_value(v["rows"].clone()).unwrap();
        assert_eq!(rows, sweep_rows(&r));
    }

    #[test]
    fn bound_rows_share_the_schema() {
        let p = IcmParams::payload(4, 2, 5, 2).unwrap();
        let curve = BoundCurve {
            points: vec![BoundPoint { snr_db: 10.0, ber: 0.01 }],
        };
        let rows = bound_rows(&p, &curve, SnrReference::Es);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "\"OFDM-ICM(4,2,5,2)\",4,2,5,2,payload,bound,10.0,es,0,0,0.01,0,0,0"
        );
    }

    #[test]
    fn unwritable_path_reports_it() {
        let r = sweep();
        let err = emit(&r, OutputFormat::Csv, Path::new("/nonexistent/dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/x.csv"));
    }
}
