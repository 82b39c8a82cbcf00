//! Monte Carlo harness: reproducibility, stopping rule and CSV format.

use faldpc::code::{GeneratedCode, TannerGraph, DEFAULT_CODE_SEED};
use faldpc::decoder::DecoderConfig;
use faldpc::sim::{parse_csv, run_fer, to_csv, wilson_interval, SimConfig};

fn graph() -> TannerGraph {
    TannerGraph::new(&GeneratedCode::Regular3x6N96.build(DEFAULT_CODE_SEED).unwrap())
}

fn config(workers: usize) -> SimConfig {
    SimConfig {
        snr_points: vec![1.0, 2.5, 4.0],
        max_frames: 3000,
        target_frame_errors: 25,
        seed: 11,
        workers,
    }
}

#[test]
fn results_do_not_depend_on_workers() {
    let g = graph();
    let dec = DecoderConfig::float(5);
    let one = to_csv(&run_fer(&config(1), &dec, &g, 0.5).unwrap(), true);
    let four = to_csv(&run_fer(&config(4), &dec, &g, 0.5).unwrap(), true);
    assert_eq!(one, four);
    let other_seed = SimConfig { seed: 12, ..config(1) };
    assert_ne!(one, to_csv(&run_fer(&other_seed, &dec, &g, 0.5).unwrap(), true));
}

#[test]
fn stops_exactly_at_target_or_budget() {
    let g = graph();
    let r = run_fer(&config(2), &DecoderConfig::fixed(5, 4, 4, 0.8), &g, 0.5).unwrap();
    for p in &r.points {
        assert!(p.frame_errors == 25 || p.frames == 3000, "{p:?}");
        assert!(p.frames <= 3000);
        assert!(p.fer_lo <= p.fer && p.fer <= p.fer_hi);
        assert!(p.bit_errors >= p.frame_errors);
    }
    assert!(r.points[0].fer > r.points[2].fer);
}

#[test]
fn high_snr_smoke_run() {
    let g = graph();
    let cfg = SimConfig {
        snr_points: vec![10.0],
        max_frames: 100,
        ..config(1)
    };
    let r = run_fer(&cfg, &DecoderConfig::float(5), &g, 0.5).unwrap();
    assert_eq!((r.points[0].frames, r.points[0].frame_errors), (100, 0));
}

#[test]
fn invalid_configs_are_rejected() {
    let g = graph();
    let dec = DecoderConfig::float(5);
    for bad in [
        SimConfig { workers: 0, ..config(1) },
        SimConfig { target_frame_errors: 0, ..config(1) },
        SimConfig { max_frames: 0, ..config(1) },
        SimConfig { snr_points: vec![f64::NAN], ..config(1) },
    ] {
        assert!(run_fer(&bad, &dec, &g, 0.5).is_err());
    }
}

#[test]
fn csv_round_trip() {
    let g = graph();
    let r = run_fer(&config(1), &DecoderConfig::float(3), &g, 0.5).unwrap();
    for extended in [false, true] {
        let parsed = parse_csv(&to_csv(&r, extended)).unwrap();
        let want: Vec<(f64, f64)> = r.points.iter().map(|p| (p.ebn0_db, p.fer)).collect();
        assert_eq!(parsed, want);
    }
    assert!(parse_csv("snr,fer\n1,0.5\n").is_err());
    assert!(parse_csv("ebn0_db,fer\n1,x\n").is_err());
}

#[test]
fn wilson_interval_reference_values() {
    // closed-form Wilson bounds for 10 of 100 at z = 1.96
    let (lo, hi) = wilson_interval(10, 100);
    assert!((lo - 0.05523).abs() < 1e-4 && (hi - 0.17437).abs() < 1e-4, "{lo} {hi}");
    assert_eq!(wilson_interval(0, 50).0, 0.0);
    assert_eq!(wilson_interval(50, 50).1, 1.0);
}
