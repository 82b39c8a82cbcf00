//! Monte Carlo FER/BER estimation over the BI-AWGN channel.
//!
//! The all-zero codeword is transmitted. Frame `f` of SNR point `s` draws its
//! noise from a ChaCha8 stream keyed by the run seed with stream number
//! `(s << 40) | f`, so every frame is reproducible on its own. Frames are
//! decoded in fixed-size batches in parallel and then accounted strictly in
//! frame order, stopping exactly at the frame that reaches the error target.
//! Results therefore do not depend on the number of workers.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::Awgn;
use crate::code::TannerGraph;
use crate::decoder::{Decoder, DecoderConfig};
use crate::error::{Error, Result};

/// Frames decoded per parallel batch; fixed so that the amount of surplus
/// work never depends on the worker count.
pub const BATCH_FRAMES: u64 = 256;

/// Default frame-error target per SNR point.
pub const DEFAULT_TARGET_ERRORS: u64 = 100;

const WILSON_Z: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Eb/N0 values in dB.
    pub snr_points: Vec<f64>,
    pub max_frames: u64,
    pub target_frame_errors: u64,
    pub seed: u64,
    /// Worker threads; does not influence results.
    pub workers: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target_frame_errors == 0 {
            return Err(Error::Config("target_frame_errors must be >= 1".into()));
        }
        if self.max_frames == 0 {
            return Err(Error::Config("max_frames must be >= 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be >= 1".into()));
        }
        if let Some(s) = self.snr_points.iter().find(|s| !s.is_finite()) {
            return Err(Error::Config(format!("SNR point {s} is not finite")));
        }
        if self.snr_points.len() >= 1 << 23 {
            return Err(Error::Config("too many SNR points".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimPoint {
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    /// Wilson 95% interval of the FER.
    pub fer_lo: f64,
    pub fer_hi: f64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimResult {
    pub points: Vec<SimPoint>,
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Per-frame generator for frame `frame` of SNR point `snr_index`.
pub fn frame_rng(seed: u64, snr_index: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((snr_index as u64) << 40) | frame);
    rng
}

/// Simulates every SNR point of `cfg` with the given decoder.
pub fn run_fer(cfg: &SimConfig, decoder: &DecoderConfig, graph: &TannerGraph, rate: f64) -> Result<SimResult> {
    cfg.validate()?;
    decoder.validate()?;
    if cfg.max_frames >= 1 << 40 {
        return Err(Error::Config("max_frames must be below 2^40".into()));
    }
    // fail early on configuration/graph mismatches
    Decoder::new(decoder, graph)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let n = graph.n_vns();
    let mut points = Vec::with_capacity(cfg.snr_points.len());
    for (si, &snr) in cfg.snr_points.iter().enumerate() {
        let start = Instant::now();
        let ch = Awgn::from_ebn0_rate(snr, rate);
        let (mut frames, mut frame_errors, mut bit_errors) = (0u64, 0u64, 0u64);
        'batches: while frames < cfg.max_frames && frame_errors < cfg.target_frame_errors {
            let end = (frames + BATCH_FRAMES).min(cfg.max_frames);
            let outcomes: Vec<Result<u64>> = pool.install(|| {
                (frames..end)
                    .into_par_iter()
                    .map_init(
                        || (Decoder::new(decoder, graph), vec![0.0; n]),
                        |(dec, llrs), f| {
                            let dec = dec.as_mut().map_err(|e| Error::Config(e.to_string()))?;
                            let mut rng = frame_rng(cfg.seed, si, f);
                            ch.all_zero_llrs(&mut rng, llrs);
                            let (bits, _) = dec.decode_llrs(llrs)?;
                            Ok(bits.iter().map(|&b| u64::from(b)).sum())
                        },
                    )
                    .collect()
            });
            for errs in outcomes {
                let errs = errs?;
                frames += 1;
                if errs > 0 {
                    frame_errors += 1;
                    bit_errors += errs;
                    if frame_errors >= cfg.target_frame_errors {
                        break 'batches;
                    }
                }
            }
        }
        let (fer_lo, fer_hi) = wilson_interval(frame_errors, frames);
        points.push(SimPoint {
            ebn0_db: snr,
            frames,
            frame_errors,
            bit_errors,
            fer: frame_errors as f64 / frames as f64,
            ber: bit_errors as f64 / (frames as f64 * n as f64),
            fer_lo,
            fer_hi,
            wall_time_s: start.elapsed().as_secs_f64(),
        });
    }
    Ok(SimResult { points })
}

pub const CSV_HEADER: &str = "ebn0_db,fer";
pub const CSV_HEADER_EXTENDED: &str = "ebn0_db,fer,frames,frame_errors,bit_errors,ber,fer_lo,fer_hi";

/// CSV text of a result. Numbers use Rust's shortest round-trip formatting;
/// wall time is left out so that output bytes are reproducible.
pub fn to_csv(result: &SimResult, extended: bool) -> String {
    let mut s = String::new();
    s.push_str(if extended { CSV_HEADER_EXTENDED } else { CSV_HEADER });
    s.push('\n');
    for p in &result.points {
        if extended {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                p.ebn0_db, p.fer, p.frames, p.frame_errors, p.bit_errors, p.ber, p.fer_lo, p.fer_hi
            );
        } else {
            let _ = writeln!(s, "{},{}", p.ebn0_db, p.fer);
        }
    }
    s
}

pub fn write_csv(result: &SimResult, path: &Path, extended: bool) -> Result<()> {
    std::fs::write(path, to_csv(result, extended))?;
    Ok(())
}

/// Reads the `(ebn0_db, fer)` columns of either CSV layout.
pub fn parse_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != CSV_HEADER && header != CSV_HEADER_EXTENDED {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let mut cols = l.split(',');
            let mut next = || {
                cols.next()
                    .and_then(|c| c.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Config(format!("CSV line {}: malformed row {l:?}", i + 2)))
            };
            Ok((next()?, next()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(ebn0_db: f64, fer: f64) -> SimPoint {
        SimPoint {
            ebn0_db,
            frames: 1000,
            frame_errors: 1,
            bit_errors: 3,
            fer,
            ber: 0.0,
            fer_lo: 0.0,
            fer_hi: 0.0,
            wall_time_s: 1.0,
        }
    }

    #[test]
    fn csv_examples() {
        assert_eq!(to_csv(&SimResult::default(), false), "ebn0_db,fer\n");
        let r = SimResult {
            points: vec![point(4.5, 1e-3)],
        };
        assert_eq!(to_csv(&r, false), "ebn0_db,fer\n4.5,0.001\n");
        assert_eq!(parse_csv(&to_csv(&r, true)).unwrap(), vec![(4.5, 0.001)]);
    }

    #[test]
    fn wilson_brackets_estimate() {
        for (e, n) in [(0, 10), (1, 10), (5, 100), (100, 100), (100, 12345)] {
            let (lo, hi) = wilson_interval(e, n);
            let p = e as f64 / n as f64;
            assert!(lo <= p && p <= hi, "{e}/{n}");
        }
    }
}
