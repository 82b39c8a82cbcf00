//! Decoder properties shared by all three variants.

use faldpc::artifact::{DesignArtifact, DesignParams};
use faldpc::channel::Awgn;
use faldpc::code::{GeneratedCode, TannerGraph, DEFAULT_CODE_SEED};
use faldpc::decoder::{cn_update_minsum, cn_update_naive, ChannelValues, Decoder, DecoderConfig, Label};
use faldpc::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn toy_graph(code: GeneratedCode) -> TannerGraph {
    TannerGraph::new(&code.build(DEFAULT_CODE_SEED).unwrap())
}

fn toy_lut(iterations: usize) -> DecoderConfig {
    let h = GeneratedCode::Regular3x6N96.build(DEFAULT_CODE_SEED).unwrap();
    let a = DesignArtifact::design(&DesignParams {
        profile: h.profile().unwrap(),
        design_ebn0_db: 2.5,
        iterations,
        q_ch: 4,
        q_msg: 3,
        fine_bins: 400,
        vn_shape: None,
        decision_shape: None,
    })
    .unwrap();
    DecoderConfig::lut(a)
}

fn all_variants() -> Vec<DecoderConfig> {
    vec![DecoderConfig::float(5), DecoderConfig::fixed(5, 4, 4, 0.9), DecoderConfig::fixed(5, 5, 5, 0.5), toy_lut(5)]
}

fn noisy_frame(ebn0_db: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut v = vec![0.0; n];
    Awgn::from_ebn0_rate(ebn0_db, 0.5).all_zero_llrs(&mut ChaCha8Rng::seed_from_u64(seed), &mut v);
    v
}

#[test]
fn noiseless_input_decodes_to_zero() {
    for code in [GeneratedCode::Regular3x6N96, GeneratedCode::Regular3x6N1008] {
        let g = toy_graph(code);
        for cfg in all_variants() {
            let mut dec = Decoder::new(&cfg, &g).unwrap();
            let (bits, diag) = dec.decode_llrs(&vec![20.0; g.n_vns()]).unwrap();
            assert!(bits.iter().all(|&b| b == 0), "{}", cfg.name());
            assert!(diag.syndrome_ok);
        }
    }
}

#[test]
fn negated_channel_flips_every_bit() {
    let g = toy_graph(GeneratedCode::Regular3x6N96);
    for cfg in all_variants() {
        let mut dec = Decoder::new(&cfg, &g).unwrap();
        for seed in 0..200 {
            let llrs = noisy_frame(1.5, g.n_vns(), seed);
            let neg: Vec<f64> = llrs.iter().map(|v| -v).collect();
            let a = dec.decode_llrs(&llrs).unwrap().0.to_vec();
            let b = dec.decode_llrs(&neg).unwrap().0.to_vec();
            assert!(a.iter().zip(&b).all(|(x, y)| x ^ y == 1), "{} seed {seed}", cfg.name());
        }
    }
}

#[test]
fn single_flipped_position_is_corrected() {
    let g = toy_graph(GeneratedCode::Regular3x6N96);
    let cfg = DecoderConfig::float(5);
    let mut dec = Decoder::new(&cfg, &g).unwrap();
    for pos in 0..g.n_vns() {
        let mut llrs = vec![8.0; g.n_vns()];
        llrs[pos] = -8.0;
        let (bits, diag) = dec.decode_llrs(&llrs).unwrap();
        assert!(bits.iter().all(|&b| b == 0) && diag.syndrome_ok, "position {pos}");
    }
}

#[test]
fn float_decisions_are_scale_invariant() {
    let g = toy_graph(GeneratedCode::Regular3x6N1008);
    let cfg = DecoderConfig::float(5);
    let mut dec = Decoder::new(&cfg, &g).unwrap();
    for seed in 0..50 {
        let llrs = noisy_frame(1.2, g.n_vns(), seed);
        let base = dec.decode_llrs(&llrs).unwrap().0.to_vec();
        for c in [0.25, 3.0, 1024.0] {
            let scaled: Vec<f64> = llrs.iter().map(|v| v * c).collect();
            assert_eq!(dec.decode_llrs(&scaled).unwrap().0, &base[..], "scale {c} seed {seed}");
        }
    }
}

fn fixed_float_agreement(scale: f64) -> f64 {
    let g = toy_graph(GeneratedCode::Regular3x6N1008);
    let float = DecoderConfig::float(5);
    let fixed = DecoderConfig::fixed(5, 12, 12, scale);
    let mut fd = Decoder::new(&float, &g).unwrap();
    let mut xd = Decoder::new(&fixed, &g).unwrap();
    let (mut agree, mut total) = (0usize, 0usize);
    for seed in 0..100 {
        let llrs = noisy_frame(2.0, g.n_vns(), seed);
        let a = fd.decode_llrs(&llrs).unwrap().0.to_vec();
        let b = xd.decode_llrs(&llrs).unwrap().0;
        agree += a.iter().zip(b).filter(|(x, y)| x == y).count();
        total += a.len();
    }
    agree as f64 / total as f64
}

#[test]
fn wide_fixed_point_tracks_float() {
    let coarse = fixed_float_agreement(0.02);
    let fine = fixed_float_agreement(0.005);
    assert!(fine >= 0.999, "agreement {fine}");
    assert!(fine >= coarse, "{fine} < {coarse}");
}

#[test]
fn saturation_is_reported() {
    let g = toy_graph(GeneratedCode::Regular3x6N96);
    let cfg = DecoderConfig::fixed(3, 4, 2, 1.0);
    let mut dec = Decoder::new(&cfg, &g).unwrap();
    let (_, diag) = dec.decode_llrs(&vec![50.0; g.n_vns()]).unwrap();
    assert!(diag.saturations > 0);
}

#[test]
fn input_validation() {
    let g = toy_graph(GeneratedCode::Regular3x6N96);
    let n = g.n_vns();
    let float = DecoderConfig::float(2);
    let mut dec = Decoder::new(&float, &g).unwrap();
    assert!(matches!(dec.decode_llrs(&vec![1.0; n - 1]), Err(Error::Length { .. })));
    assert!(dec.decode(ChannelValues::Labels(&vec![0; n])).is_err());

    let lut = toy_lut(2);
    let mut dec = Decoder::new(&lut, &g).unwrap();
    let mut labels = vec![15u8; n];
    assert!(dec.decode(ChannelValues::Labels(&labels)).unwrap().1.syndrome_ok);
    labels[3] = 16;
    assert!(matches!(dec.decode(ChannelValues::Labels(&labels)), Err(Error::LabelRange { .. })));

    let fixed = DecoderConfig::fixed(2, 4, 4, 1.0);
    let mut dec = Decoder::new(&fixed, &g).unwrap();
    assert!(dec.decode(ChannelValues::Fixed(&vec![15; n])).is_ok());
    assert!(dec.decode(ChannelValues::Fixed(&vec![2; n])).is_err());
    assert!(dec.decode(ChannelValues::Fixed(&vec![17; n])).is_err());

    let ieee = toy_graph(GeneratedCode::Ieee8023anLike);
    assert!(Decoder::new(&lut, &ieee).is_err());
}

#[test]
fn lut_decoder_runs_designed_iterations() {
    let mut cfg = toy_lut(3);
    cfg.iterations = 4;
    assert!(cfg.validate().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn two_min_equals_naive_float(v in prop::collection::vec(-10.0f64..10.0, 2..40)) {
        let mut a = vec![0.0; v.len()];
        let mut b = vec![0.0; v.len()];
        cn_update_minsum(&v, &mut a);
        cn_update_naive(&v, &mut b);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn two_min_equals_naive_fixed(v in prop::collection::vec(-7i32..=7, 2..40)) {
        let v: Vec<i32> = v.into_iter().map(|x| 2 * x + 1).collect();
        let mut a = vec![0; v.len()];
        let mut b = vec![0; v.len()];
        cn_update_minsum(&v, &mut a);
        cn_update_naive(&v, &mut b);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn two_min_equals_naive_labels(v in prop::collection::vec(0u8..8, 2..40)) {
        let v: Vec<Label> = v.into_iter().map(|value| Label { value, size: 8 }).collect();
        let mut a = v.clone();
        let mut b = v.clone();
        cn_update_minsum(&v, &mut a);
        cn_update_naive(&v, &mut b);
        prop_assert_eq!(a, b);
    }
}
