//! `faldpc`: design LUT decoders, simulate FER, decode frames and report
//! pipeline costs.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error,
//! 3 internal error.

mod manifest;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use faldpc::artifact::{sha256_hex, DesignArtifact, DesignParams};
use faldpc::channel_quantizer::{default_fixed_scale, DEFAULT_FINE_BINS};
use faldpc::code::{GeneratedCode, ParityCheckMatrix, TannerGraph, DEFAULT_CODE_SEED};
use faldpc::decoder::{ChannelValues, Decoder, DecoderConfig};
use faldpc::pipeline::{self, PipelineParams};
use faldpc::sim::{self, SimConfig};
use faldpc::tree::TreeShape;

use manifest::{InputFile, RunManifest};

/// Environment variable holding the default worker count.
const WORKERS_ENV: &str = "FALDPC_WORKERS";

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl From<faldpc::Error> for Failure {
    fn from(e: faldpc::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

#[derive(Parser, Debug)]
#[command(name = "faldpc", version, about = "Finite-alphabet LUT LDPC decoder design and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Design the channel quantizer and per-iteration LUT trees.
    Design(DesignArgs),
    /// Monte Carlo FER/BER simulation.
    Simulate(SimulateArgs),
    /// Decode a single frame.
    Decode(DecodeArgs),
    /// Register, timing and wire figures of the unrolled pipeline.
    PipelineReport(PipelineArgs),
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    /// Built-in code: 802.3an-like, 3-6-1008 or 3-6-96.
    #[arg(long, visible_alias = "generated-code", default_value = "802.3an-like")]
    code: String,
    /// Parity-check matrix in alist format; overrides --code.
    #[arg(long)]
    alist: Option<PathBuf>,
    /// Seed of the built-in code construction.
    #[arg(long, default_value_t = DEFAULT_CODE_SEED)]
    code_seed: u64,
}

#[derive(Args, Debug)]
struct DesignArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Design Eb/N0 in dB.
    #[arg(long, default_value_t = 4.5, allow_negative_numbers = true)]
    snr_db: f64,
    #[arg(long, default_value_t = 5)]
    iters: usize,
    /// Channel label bit-width.
    #[arg(long, default_value_t = 4)]
    q_ch: u32,
    /// Message label bit-width.
    #[arg(long, default_value_t = 3)]
    q_msg: u32,
    /// VN tree shape, e.g. "((((c c)(c c)) c) L)".
    #[arg(long)]
    tree_shape: Option<String>,
    /// Decision tree shape, e.g. "((c c c)(c c c) L)".
    #[arg(long)]
    decision_shape: Option<String>,
    #[arg(long, default_value_t = DEFAULT_FINE_BINS)]
    fine_bins: usize,
    #[arg(long, default_value = "lut.json")]
    out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum DecoderKind {
    Float,
    Fixed,
    Lut,
}

#[derive(Args, Debug)]
struct DecoderArgs {
    #[arg(long, value_enum, default_value = "lut")]
    decoder: DecoderKind,
    /// Design artifact (LUT decoder).
    #[arg(long, default_value = "lut.json")]
    artifact: PathBuf,
    /// Iterations for the min-sum decoders; the LUT decoder uses the artifact's.
    #[arg(long)]
    iters: Option<usize>,
    /// Channel bit-width of the fixed-point decoder.
    #[arg(long, default_value_t = 5)]
    q_ch: u32,
    /// Message bit-width of the fixed-point decoder.
    #[arg(long, default_value_t = 5)]
    q_msg: u32,
    /// Fixed-point step in LLR units; default maximizes channel MI at --design-snr-db.
    #[arg(long)]
    fixed_scale: Option<f64>,
    #[arg(long, default_value_t = 4.5, allow_negative_numbers = true)]
    design_snr_db: f64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    /// Comma-separated Eb/N0 points in dB.
    #[arg(long, default_value = "3.5,4,4.5,5", allow_hyphen_values = true)]
    snr_list: String,
    #[arg(long, default_value_t = sim::DEFAULT_TARGET_ERRORS)]
    target_errors: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads (results do not depend on it).
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Also write frames, errors, BER and the 95% interval.
    #[arg(long)]
    extended: bool,
    #[arg(long, default_value = "fer.csv")]
    out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum InputKind {
    /// Real LLRs, quantized as the decoder requires.
    Llr,
    /// Channel labels (LUT) or odd half-step integers (fixed-point).
    Quantized,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    /// One channel value per line.
    #[arg(long)]
    llr_file: PathBuf,
    #[arg(long, value_enum, default_value = "llr")]
    input: InputKind,
    #[arg(long, default_value = "bits.txt")]
    out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PipelineVariant {
    Lut,
    Adder,
    Both,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[arg(long, default_value_t = 2048)]
    n: u64,
    #[arg(long, default_value_t = 6)]
    dv: u64,
    #[arg(long, default_value_t = 5)]
    iters: u64,
    /// LUT decoder message bit-width.
    #[arg(long, default_value_t = 3)]
    q_msg: u64,
    /// LUT decoder channel bit-width.
    #[arg(long, default_value_t = 4)]
    q_ch: u64,
    /// LUT decoder clock in GHz.
    #[arg(long, default_value_t = 0.813, allow_negative_numbers = true)]
    freq_ghz: f64,
    #[arg(long, default_value_t = 5)]
    adder_q_msg: u64,
    #[arg(long, default_value_t = 5)]
    adder_q_ch: u64,
    #[arg(long, default_value_t = 0.495, allow_negative_numbers = true)]
    adder_freq_ghz: f64,
    #[arg(long, value_enum, default_value = "both")]
    variant: PipelineVariant,
    /// Machine-readable report destination.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Data(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(_) => {
            eprintln!("internal error");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Design(a) => cmd_design(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Decode(a) => cmd_decode(a),
        Command::PipelineReport(a) => cmd_pipeline_report(a),
    }
}

struct LoadedCode {
    matrix: ParityCheckMatrix,
    inputs: Vec<InputFile>,
    description: serde_json::Value,
}

fn load_code(args: &CodeArgs) -> CliResult<LoadedCode> {
    match &args.alist {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
            let matrix = ParityCheckMatrix::parse_alist(&text)?;
            Ok(LoadedCode {
                matrix,
                inputs: vec![InputFile::new(path, text.as_bytes())],
                description: json!({ "alist": path }),
            })
        }
        None => {
            let code: GeneratedCode = args.code.parse().map_err(|e: faldpc::Error| usage(e.to_string()))?;
            Ok(LoadedCode {
                matrix: code.build(args.code_seed)?,
                inputs: Vec::new(),
                description: json!({ "generated": code.name(), "code_seed": args.code_seed }),
            })
        }
    }
}

fn parse_shape(s: &Option<String>, what: &str) -> CliResult<Option<TreeShape>> {
    s.as_deref()
        .map(|s| s.parse::<TreeShape>().map_err(|e| usage(format!("{what}: {e}"))))
        .transpose()
}

fn cmd_design(a: DesignArgs) -> CliResult<()> {
    if a.q_msg < 2 || a.q_msg > 8 {
        return Err(usage(format!("--q-msg must be in 2..=8, got {}", a.q_msg)));
    }
    if a.q_ch < 1 || a.q_ch > 8 {
        return Err(usage(format!("--q-ch must be in 1..=8, got {}", a.q_ch)));
    }
    if a.iters == 0 {
        return Err(usage("--iters must be at least 1"));
    }
    if !a.snr_db.is_finite() {
        return Err(usage("--snr-db must be finite"));
    }
    let vn_shape = parse_shape(&a.tree_shape, "--tree-shape")?;
    let decision_shape = parse_shape(&a.decision_shape, "--decision-shape")?;
    let code = load_code(&a.code)?;
    let profile = code.matrix.profile()?;
    let params = DesignParams {
        profile,
        design_ebn0_db: a.snr_db,
        iterations: a.iters,
        q_ch: a.q_ch,
        q_msg: a.q_msg,
        fine_bins: a.fine_bins,
        vn_shape,
        decision_shape,
    };
    let artifact = DesignArtifact::design(&params)?;
    let text = artifact.to_json()?;
    fs::write(&a.out, &text).map_err(|e| Failure::Data(format!("{}: {e}", a.out.display())))?;
    let hash = sha256_hex(text.as_bytes());
    for (i, mi) in &artifact.mi_trace {
        println!("iteration {i}: I(m; x) = {mi:.12}");
    }
    println!("decision: I(d; x) = {:.12}", artifact.decision_mi);
    println!("wrote {} (sha256 {hash})", a.out.display());
    RunManifest {
        subcommand: "design".into(),
        config: json!({
            "code": code.description,
            "profile": profile,
            "snr_db": a.snr_db,
            "iters": a.iters,
            "q_ch": a.q_ch,
            "q_msg": a.q_msg,
            "vn_shape": artifact.vn_shape,
            "decision_shape": artifact.decision_shape,
            "fine_bins": a.fine_bins,
        }),
        seed: None,
        inputs: code.inputs,
        artifact_hash: Some(hash.clone()),
        outputs: vec![InputFile::new(&a.out, text.as_bytes())],
    }
    .write_next_to(&a.out)
}

struct ResolvedDecoder {
    cfg: DecoderConfig,
    artifact_input: Option<(InputFile, String)>,
    description: serde_json::Value,
}

fn resolve_decoder(d: &DecoderArgs, matrix: &ParityCheckMatrix) -> CliResult<ResolvedDecoder> {
    let profile = matrix.profile()?;
    let rate = profile.rate.value();
    match d.decoder {
        DecoderKind::Float => {
            let iters = d.iters.unwrap_or(5);
            if iters == 0 {
                return Err(usage("--iters must be at least 1"));
            }
            Ok(ResolvedDecoder {
                cfg: DecoderConfig::float(iters),
                artifact_input: None,
                description: json!({ "decoder": "float", "iters": iters }),
            })
        }
        DecoderKind::Fixed => {
            let iters = d.iters.unwrap_or(5);
            if iters == 0 {
                return Err(usage("--iters must be at least 1"));
            }
            if d.q_msg < 2 || d.q_msg > 16 || d.q_ch < 1 || d.q_ch > 16 {
                return Err(usage(format!(
                    "fixed-point widths out of range: --q-ch {} --q-msg {} (q_msg >= 2)",
                    d.q_ch, d.q_msg
                )));
            }
            let scale = match d.fixed_scale {
                Some(s) if s > 0.0 && s.is_finite() => s,
                Some(s) => return Err(usage(format!("--fixed-scale must be positive, got {s}"))),
                None => default_fixed_scale(d.design_snr_db, rate, d.q_ch)?,
            };
            Ok(ResolvedDecoder {
                cfg: DecoderConfig::fixed(iters, d.q_ch, d.q_msg, scale),
                artifact_input: None,
                description: json!({
                    "decoder": "fixed", "iters": iters, "q_ch": d.q_ch, "q_msg": d.q_msg,
                    "fixed_scale": scale, "design_snr_db": d.design_snr_db,
                }),
            })
        }
        DecoderKind::Lut => {
            let path = &d.artifact;
            let text = fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
            let artifact = DesignArtifact::from_json(&text)?;
            if let Some(i) = d.iters {
                if i != artifact.iterations {
                    return Err(Failure::Data(format!(
                        "artifact is designed for {} iterations, --iters {i} requested",
                        artifact.iterations
                    )));
                }
            }
            if (artifact.profile.d_v, artifact.profile.d_c) != (profile.d_v, profile.d_c) {
                return Err(Failure::Data(format!(
                    "artifact is designed for a ({}, {}) code, matrix is ({}, {})",
                    artifact.profile.d_v, artifact.profile.d_c, profile.d_v, profile.d_c
                )));
            }
            let hash = sha256_hex(text.as_bytes());
            let description = json!({
                "decoder": "lut", "iters": artifact.iterations, "q_ch": artifact.q_ch,
                "q_msg": artifact.q_msg, "design_snr_db": artifact.design_ebn0_db,
            });
            Ok(ResolvedDecoder {
                cfg: DecoderConfig::lut(artifact),
                artifact_input: Some((InputFile::new(path, text.as_bytes()), hash)),
                description,
            })
        }
    }
}

fn parse_snr_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| usage(format!("invalid SNR value {t:?} in --snr-list")))
        })
        .collect()
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn cmd_simulate(a: SimulateArgs) -> CliResult<()> {
    let snr_points = parse_snr_list(&a.snr_list)?;
    if snr_points.is_empty() {
        return Err(usage("--snr-list is empty"));
    }
    if a.target_errors == 0 || a.max_frames == 0 {
        return Err(usage("--target-errors and --max-frames must be at least 1"));
    }
    let workers = a.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    let code = load_code(&a.code)?;
    let dec = resolve_decoder(&a.decoder, &code.matrix)?;
    let graph = TannerGraph::new(&code.matrix);
    let rate = code.matrix.profile()?.rate.value();
    let cfg = SimConfig {
        snr_points,
        max_frames: a.max_frames,
        target_frame_errors: a.target_errors,
        seed: a.seed,
        workers,
    };
    let result = sim::run_fer(&cfg, &dec.cfg, &graph, rate)?;
    let csv = sim::to_csv(&result, a.extended);
    fs::write(&a.out, &csv).map_err(|e| Failure::Data(format!("{}: {e}", a.out.display())))?;
    for p in &result.points {
        println!(
            "{} dB: FER {:.4e} [{:.4e}, {:.4e}]  BER {:.4e}  ({} errors / {} frames, {:.1} s)",
            p.ebn0_db, p.fer, p.fer_lo, p.fer_hi, p.ber, p.frame_errors, p.frames, p.wall_time_s
        );
    }
    let mut inputs = code.inputs;
    let mut artifact_hash = None;
    if let Some((f, h)) = dec.artifact_input {
        inputs.push(f);
        artifact_hash = Some(h);
    }
    RunManifest {
        subcommand: "simulate".into(),
        config: json!({
            "code": code.description,
            "decoder": dec.description,
            "snr_list": cfg.snr_points,
            "target_errors": a.target_errors,
            "max_frames": a.max_frames,
            "workers": workers,
            "extended": a.extended,
        }),
        seed: Some(a.seed),
        inputs,
        artifact_hash,
        outputs: vec![InputFile::new(&a.out, csv.as_bytes())],
    }
    .write_next_to(&a.out)
}

fn cmd_decode(a: DecodeArgs) -> CliResult<()> {
    let code = load_code(&a.code)?;
    let dec = resolve_decoder(&a.decoder, &code.matrix)?;
    let graph = TannerGraph::new(&code.matrix);
    let text = fs::read_to_string(&a.llr_file).map_err(|e| Failure::Data(format!("{}: {e}", a.llr_file.display())))?;
    let tokens: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut decoder = Decoder::new(&dec.cfg, &graph)?;
    let bad = |line: usize, t: &str| Failure::Data(format!("{}: line {line}: invalid value {t:?}", a.llr_file.display()));
    let (bits, diag) = match (a.input, a.decoder.decoder) {
        (InputKind::Llr, _) | (InputKind::Quantized, DecoderKind::Float) => {
            let v = tokens
                .iter()
                .map(|&(i, t)| t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad(i, t)))
                .collect::<CliResult<Vec<f64>>>()?;
            decoder.decode_llrs(&v)?
        }
        (InputKind::Quantized, DecoderKind::Fixed) => {
            let v = tokens
                .iter()
                .map(|&(i, t)| t.parse::<i32>().map_err(|_| bad(i, t)))
                .collect::<CliResult<Vec<i32>>>()?;
            decoder.decode(ChannelValues::Fixed(&v))?
        }
        (InputKind::Quantized, DecoderKind::Lut) => {
            let v = tokens
                .iter()
                .map(|&(i, t)| t.parse::<u8>().map_err(|_| bad(i, t)))
                .collect::<CliResult<Vec<u8>>>()?;
            decoder.decode(ChannelValues::Labels(&v))?
        }
    };
    let mut out = String::with_capacity(2 * bits.len());
    for b in bits {
        out.push(if *b == 0 { '0' } else { '1' });
        out.push('\n');
    }
    fs::write(&a.out, &out).map_err(|e| Failure::Data(format!("{}: {e}", a.out.display())))?;
    let ones = bits.iter().filter(|&&b| b != 0).count();
    eprintln!(
        "syndrome {}; {ones} of {} bits decoded as 1; {} saturations",
        if diag.syndrome_ok { "satisfied" } else { "violated" },
        bits.len(),
        diag.saturations
    );
    let mut inputs = code.inputs;
    inputs.push(InputFile::new(&a.llr_file, text.as_bytes()));
    let mut artifact_hash = None;
    if let Some((f, h)) = dec.artifact_input {
        inputs.push(f);
        artifact_hash = Some(h);
    }
    RunManifest {
        subcommand: "decode".into(),
        config: json!({
            "code": code.description,
            "decoder": dec.description,
            "input": format!("{:?}", a.input).to_lowercase(),
        }),
        seed: None,
        inputs,
        artifact_hash,
        outputs: vec![InputFile::new(&a.out, out.as_bytes())],
    }
    .write_next_to(&a.out)
}

fn cmd_pipeline_report(a: PipelineArgs) -> CliResult<()> {
    let checks = [
        ("--n", a.n),
        ("--dv", a.dv),
        ("--iters", a.iters),
        ("--q-msg", a.q_msg),
        ("--q-ch", a.q_ch),
        ("--adder-q-msg", a.adder_q_msg),
        ("--adder-q-ch", a.adder_q_ch),
    ];
    if let Some((name, _)) = checks.iter().find(|(_, v)| *v == 0) {
        return Err(usage(format!("{name} must be positive")));
    }
    for (name, f) in [("--freq-ghz", a.freq_ghz), ("--adder-freq-ghz", a.adder_freq_ghz)] {
        if !(f > 0.0 && f.is_finite()) {
            return Err(usage(format!("{name} must be positive, got {f}")));
        }
    }
    let lut = PipelineParams {
        n: a.n,
        d_v: a.dv,
        iterations: a.iters,
        q_msg: a.q_msg,
        q_ch: a.q_ch,
    };
    let adder = PipelineParams {
        q_msg: a.adder_q_msg,
        q_ch: a.adder_q_ch,
        ..lut
    };
    let mut columns = Vec::new();
    if a.variant != PipelineVariant::Adder {
        columns.push(("LUT-based", pipeline::report(&lut, a.freq_ghz)?));
    }
    if a.variant != PipelineVariant::Lut {
        columns.push(("Adder-based MS", pipeline::report(&adder, a.adder_freq_ghz)?));
    }
    print_pipeline_table(&columns);
    let ratio = (columns.len() == 2).then(|| pipeline::wire_ratio(&columns[0].1.wires, &columns[1].1.wires));
    if let Some(r) = ratio {
        println!(
            "wire ratio LUT/adder: {:.4} (messages only), {:.4} (with channel forwarding)",
            r.messages_only, r.with_channel
        );
    }
    if let Some(path) = &a.json {
        let doc = json!({
            "variants": columns.iter().map(|(name, r)| json!({ "name": name, "report": r })).collect::<Vec<_>>(),
            "wire_ratio": ratio,
        });
        let text = serde_json::to_string_pretty(&doc)? + "\n";
        fs::write(path, &text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn print_pipeline_table(columns: &[(&str, pipeline::PipelineReport)]) {
    let rows: Vec<(&str, Box<dyn Fn(&pipeline::PipelineReport) -> String>)> = vec![
        ("Q_ch / Q_msg [bits]", Box::new(|r| format!("{} / {}", r.params.q_ch, r.params.q_msg))),
        ("Frequency [MHz]", Box::new(|r| format!("{:.0}", r.f_ghz * 1000.0))),
        ("Throughput [Gbps]", Box::new(|r| format!("{:.0}", r.timing.throughput_gbps))),
        ("Latency [cycles]", Box::new(|r| r.timing.latency_cycles.to_string())),
        ("Latency [ns]", Box::new(|r| format!("{:.2}", r.timing.latency_ns))),
        ("Register bits", Box::new(|r| r.registers.total_bits.to_string())),
        ("Wires per stage boundary", Box::new(|r| r.wires.total().to_string())),
        ("  of which messages", Box::new(|r| r.wires.message_wires.to_string())),
    ];
    print!("{:<26}", "");
    for (name, _) in columns {
        print!("{name:>18}");
    }
    println!();
    for (label, f) in &rows {
        print!("{label:<26}");
        for (_, r) in columns {
            print!("{:>18}", f(r));
        }
        println!();
    }
}
