mod settings;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ofdm_icm::codec::{CodebookLine, MAX_ENUMERATED_CODEWORDS};
use ofdm_icm::harness::{self, OutputFormat, SimConfig, SnrGrid, StopRule};
use ofdm_icm::{
    enumerate_codebook, optimize, union_bound_ber, DetectorKind, IcmParams, LlrMode, Mode,
    SeProblem, SnrReference,
};

use settings::Settings;

#[derive(Parser)]
#[command(name = "ofdm-icm", version, about = "OFDM index and composition modulation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo BER sweep.
    Simulate(SimulateArgs),
    /// Union bound on the ML bit error rate.
    Bound(BoundArgs),
    /// Optimal active count and spectral efficiency.
    Seopt(SeoptArgs),
    /// Dump the codebook, one codeword per line.
    Codebook(CodebookArgs),
}

#[derive(Args)]
struct SchemeArgs {
    /// Key=value file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Subcarriers per block.
    #[arg(long)]
    n: Option<u32>,
    /// Active subcarriers.
    #[arg(long)]
    k: Option<u32>,
    /// Energy units shared by the active subcarriers.
    #[arg(long)]
    i: Option<u32>,
    /// PSK order (payload mode).
    #[arg(long)]
    m: Option<u32>,
    /// payload | diversity
    #[arg(long)]
    mode: Option<String>,
    /// Total block energy; defaults to N.
    #[arg(long)]
    energy: Option<f64>,
}

#[derive(Args)]
struct SnrArgs {
    /// start:step:stop or a comma list, in dB.
    #[arg(long = "snr-db")]
    snr_db: Option<String>,
    /// es (per subcarrier) | eb (per bit)
    #[arg(long = "snr-ref")]
    snr_ref: Option<SnrReference>,
}

#[derive(Args)]
struct OutArgs {
    /// Output file; `.json` selects JSON. Standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json, overriding the file extension.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    snr: SnrArgs,
    #[command(flatten)]
    out: OutArgs,
    /// ml | lcml
    #[arg(long)]
    detector: Option<DetectorKind>,
    /// exact | approx
    #[arg(long)]
    llr: Option<LlrMode>,
    #[arg(long = "min-errors")]
    min_errors: Option<u64>,
    #[arg(long = "max-bits")]
    max_bits: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long = "batch-blocks")]
    batch_blocks: Option<u64>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    snr: SnrArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SeoptArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Block sizes: one value, a comma list or start:step:stop.
    #[arg(long)]
    n: Option<String>,
    /// Ratio I/N, comma list allowed.
    #[arg(long)]
    beta: Option<String>,
    /// PSK orders, comma list allowed.
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CodebookArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Include codewords that no bit-word reaches.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn params(s: &mut Settings, a: &SchemeArgs) -> Result<IcmParams> {
    let n: u32 = s.require("n", a.n)?;
    let k: u32 = s.require("k", a.k)?;
    let i: u32 = s.require("i", a.i)?;
    let m: Option<u32> = s.get("m", a.m)?;
    let mode_name: String = s.or("mode", a.mode.clone(), "payload".to_string())?;
    let energy: f64 = s.or("energy", a.energy, n as f64)?;
    let mode = match mode_name.as_str() {
        "payload" => Mode::Payload {
            m: m.context("payload mode needs --m")?,
        },
        "diversity" => {
            if m.is_some() {
                bail!("--m has no effect in diversity mode");
            }
            Mode::Diversity
        }
        other => bail!("unknown mode '{other}' (expected payload or diversity)"),
    };
    Ok(IcmParams::with_energy(n, k, i, mode, energy)?)
}

fn snr_grid(s: &mut Settings, a: &SnrArgs) -> Result<SnrGrid> {
    let spec: String = s.require("snr-db", a.snr_db.clone())?;
    let reference: SnrReference = s.or("snr-ref", a.snr_ref, SnrReference::Es)?;
    Ok(SnrGrid::parse(&spec, reference)?)
}

fn output_format(s: &mut Settings, a: &OutArgs) -> Result<(Option<PathBuf>, OutputFormat)> {
    let out: Option<PathBuf> = s.get("out", a.out.clone())?;
    let format: Option<String> = s.get("format", a.format.clone())?;
    let format = match format.as_deref() {
        Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => bail!("unknown format '{other}' (expected csv or json)"),
        None => out.as_deref().map(OutputFormat::from_path).unwrap_or(OutputFormat::Csv),
    };
    Ok((out, format))
}

fn to_stdout(write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    write(&mut lock)?;
    lock.flush()?;
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let mut s = Settings::load(a.scheme.config.as_deref())?;
    let p = params(&mut s, &a.scheme)?;
    let grid = snr_grid(&mut s, &a.snr)?;
    let (out, format) = output_format(&mut s, &a.out)?;
    let detector: DetectorKind = s.or("detector", a.detector, DetectorKind::Ml)?;
    let llr_mode: LlrMode = s.or("llr", a.llr, LlrMode::Exact)?;
    let defaults = StopRule::default();
    let mut cfg = SimConfig::new(p, detector, grid);
    cfg.llr_mode = llr_mode;
    cfg.stop = StopRule {
        min_bit_errors: s.or("min-errors", a.min_errors, defaults.min_bit_errors)?,
        max_bits: s.or("max-bits", a.max_bits, defaults.max_bits)?,
    };
    cfg.seed = s.or("seed", a.seed, 0)?;
    cfg.workers = s.or("workers", a.workers, 0)?;
    cfg.batch_blocks = s.or("batch-blocks", a.batch_blocks, harness::DEFAULT_BATCH_BLOCKS)?;
    s.finish()?;
    cfg.validate()?;

    let result = harness::run_sweep(&cfg)?;
    for row in &result.rows {
        eprintln!(
            "snr {:>6} dB  ber {:.4e}  bits {}  errors {}  ({:?}, {:.2}s)",
            row.snr_db, row.ber, row.bits, row.bit_errors, row.stop, row.elapsed_s
        );
    }
    match out {
        Some(path) => Ok(harness::emit(&result, format, &path)?),
        None => to_stdout(|w| harness::write_sweep(&result, format, w).map_err(anyhow::Error::msg)),
    }
}

fn bound(a: BoundArgs) -> Result<()> {
    let mut s = Settings::load(a.scheme.config.as_deref())?;
    let p = params(&mut s, &a.scheme)?;
    let grid = snr_grid(&mut s, &a.snr)?;
    let (out, format) = output_format(&mut s, &a.out)?;
    s.finish()?;
    let curve = union_bound_ber::<f64>(&p, &grid.specs())?;
    let rows = harness::bound_rows(&p, &curve, grid.reference);
    let context = serde_json::json!({ "config": { "params": p, "snr": grid } });
    match out {
        Some(path) => Ok(harness::emit_rows(&rows, Some(context), format, &path)?),
        None => to_stdout(|w| harness::write_rows(&rows, Some(context), format, w).map_err(anyhow::Error::msg)),
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, spec: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let one = |v: &str| v.trim().parse::<T>().map_err(|e| anyhow::anyhow!("--{key} '{v}': {e}"));
    spec.split(',').map(one).collect()
}

fn parse_sizes(spec: &str) -> Result<Vec<u32>> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [a, b, c] => {
            let (a, b, c) = (a.trim().parse::<u32>()?, b.trim().parse::<u32>()?, c.trim().parse::<u32>()?);
            if b == 0 || c < a {
                bail!("--n '{spec}': need start <= stop and step > 0");
            }
            Ok((a..=c).step_by(b as usize).collect())
        }
        _ => parse_list("n", spec),
    }
}

fn seopt(a: SeoptArgs) -> Result<()> {
    let mut s = Settings::load(a.config.as_deref())?;
    let ns = parse_sizes(&s.require::<String>("n", a.n.clone())?)?;
    let betas: Vec<f64> = parse_list("beta", &s.or("beta", a.beta.clone(), "0.5".to_string())?)?;
    let ms: Vec<u32> = parse_list("m", &s.or("m", a.m.clone(), "4".to_string())?)?;
    let out: Option<PathBuf> = s.get("out", a.out.clone())?;
    s.finish()?;
    let mut rows = Vec::new();
    for &m in &ms {
        for &beta in &betas {
            for &n in &ns {
                let q = SeProblem::new(n, beta, m)?;
                rows.push(optimize(&q).with_context(|| format!("N={n} beta={beta} M={m}"))?);
            }
        }
    }
    let write = |out: &mut dyn Write| -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    };
    match out {
        Some(path) => {
            let file = std::fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
            write(&mut std::io::BufWriter::new(file))
        }
        None => to_stdout(write),
    }
}

fn codebook(a: CodebookArgs) -> Result<()> {
    let mut s = Settings::load(a.scheme.config.as_deref())?;
    let p = params(&mut s, &a.scheme)?;
    let out: Option<PathBuf> = s.get("out", a.out.clone())?;
    s.finish()?;
    let book = enumerate_codebook::<f64>(&p, !a.all)
        .with_context(|| format!("codebooks are limited to {MAX_ENUMERATED_CODEWORDS} codewords"))?;
    let mut text = String::new();
    for cw in &book {
        text.push_str(&CodebookLine::from_codeword(&p, cw)?.to_string());
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(&path, &text).with_context(|| format!("writing {}", path.display())),
        None => to_stdout(|w| Ok(w.write_all(text.as_bytes())?)),
    }
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Simulate(a) => simulate(a),
        Command::Bound(a) => bound(a),
        Command::Seopt(a) => seopt(a),
        Command::Codebook(a) => codebook(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
