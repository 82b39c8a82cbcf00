//! Channel LLR quantizers: the MI-maximizing quantizer feeding the LUT
//! decoder and the uniform mid-rise quantizer feeding fixed-point min-sum.

use serde::{Deserialize, Serialize};

use crate::channel::Awgn;
use crate::error::{Error, Result};
use crate::prob::{mutual_information, ConditionalPmf};
use crate::quantizer::{design_quantizer, Symmetry};

/// Default number of equal-probability micro-bins discretizing the LLR density.
pub const DEFAULT_FINE_BINS: usize = 2000;

/// Max-MI quantizer of the channel LLR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelQuantizer {
    pub levels: usize,
    /// `levels - 1` increasing LLR cut points, symmetric about 0.
    pub thresholds: Vec<f64>,
    /// Label distribution at the design operating point.
    pub pmf: ConditionalPmf,
    /// MI of the fine discretization the quantizer was designed from.
    pub fine_mi: f64,
    pub achieved_mi: f64,
}

impl ChannelQuantizer {
    /// Label of an LLR value. Labels are in ascending LLR order; a value equal
    /// to a positive threshold falls in the upper cell, and negative values
    /// are labeled as the mirror of their magnitude.
    #[inline]
    pub fn label(&self, llr: f64) -> u8 {
        let half = self.levels / 2;
        let upper = &self.thresholds[half..];
        let mag = llr.abs();
        let k = half + upper.partition_point(|&t| t <= mag);
        let k = if llr < 0.0 { self.levels - 1 - k } else { k };
        k as u8
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.levels;
        if k < 2 || !k.is_multiple_of(2) || k > 256 {
            return Err(Error::Config(format!("channel levels must be even in 2..=256, got {k}")));
        }
        if self.thresholds.len() != k - 1 || self.pmf.size() != k {
            return Err(Error::Artifact("channel quantizer size mismatch".into()));
        }
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Artifact("channel thresholds not increasing".into()));
        }
        let asym = (0..k - 1)
            .map(|i| (self.thresholds[i] + self.thresholds[k - 2 - i]).abs())
            .fold(0.0, f64::max);
        if asym > 1e-9 {
            return Err(Error::Asymmetric { deviation: asym });
        }
        Ok(())
    }
}

/// Equal-mixture-probability discretization of the channel LLR into
/// `fine_bins` micro-bins. Returns the upper-half bin edges
/// `0 = t_0 < ... < t_{B/2} = inf` and the symmetric bin distribution.
pub fn fine_discretization(ch: &Awgn, fine_bins: usize) -> Result<(Vec<f64>, ConditionalPmf)> {
    if fine_bins < 2 || !fine_bins.is_multiple_of(2) {
        return Err(Error::Config(format!("fine_bins must be even and >= 2, got {fine_bins}")));
    }
    let half = fine_bins / 2;
    let mut edges = Vec::with_capacity(half + 1);
    edges.push(0.0);
    for j in 1..half {
        edges.push(ch.llr_mixture_quantile_upper(0.5 + j as f64 / fine_bins as f64));
    }
    edges.push(f64::INFINITY);
    let mut p0 = vec![0.0; fine_bins];
    for j in 0..half {
        let (lo, hi) = (edges[j], edges[j + 1]);
        p0[half + j] = ch.llr_interval0(lo, hi);
        p0[half - 1 - j] = ch.llr_interval0(-hi, -lo);
    }
    let pmf = symmetric_from_p0(p0)?;
    Ok((edges, pmf))
}

/// Designs the `levels`-level max-MI quantizer of the channel LLR at
/// `ebn0_db` for a code of the given rate.
pub fn design_channel_quantizer(ebn0_db: f64, rate: f64, levels: usize, fine_bins: usize) -> Result<ChannelQuantizer> {
    if levels < 2 || !levels.is_multiple_of(2) || levels > 256 {
        return Err(Error::Config(format!("channel levels must be even in 2..=256, got {levels}")));
    }
    if fine_bins < levels {
        return Err(Error::Config(format!("{fine_bins} fine bins cannot fill {levels} levels")));
    }
    let ch = Awgn::from_ebn0_rate(ebn0_db, rate);
    let (edges, fine) = fine_discretization(&ch, fine_bins)?;
    let q = design_quantizer(&fine, levels, Symmetry::Mirror)?;
    let half_bins = fine_bins / 2;
    let mut upper = Vec::with_capacity(levels / 2 - 1);
    for j in 1..half_bins {
        if q.map[half_bins + j] != q.map[half_bins + j - 1] {
            upper.push(edges[j]);
        }
    }
    if upper.len() != levels / 2 - 1 {
        return Err(Error::Distribution(format!(
            "channel quantizer produced {} cells instead of {levels}",
            2 * upper.len() + 2
        )));
    }
    let mut thresholds: Vec<f64> = upper.iter().rev().map(|t| -t).collect();
    thresholds.push(0.0);
    thresholds.extend_from_slice(&upper);
    Ok(ChannelQuantizer {
        levels,
        thresholds,
        fine_mi: mutual_information(&fine),
        achieved_mi: q.achieved_mi,
        pmf: q.output,
    })
}

/// Uniform mid-rise quantizer of `q` bits with step `scale` (LLR units):
/// cell `k` of each sign covers `[k scale, (k + 1) scale)` in magnitude, the
/// outermost cell extends to infinity. Values are returned as odd integers in
/// half-step units, `+-(2k + 1)`.
#[inline]
pub fn uniform_level(llr: f64, q: u32, scale: f64) -> i32 {
    let max_k = (1i64 << (q - 1)) - 1;
    let k = ((llr.abs() / scale).floor() as i64).min(max_k) as i32;
    if llr < 0.0 {
        -(2 * k + 1)
    } else {
        2 * k + 1
    }
}

/// Label distribution of the `q`-bit uniform quantizer, labels in ascending
/// value order.
pub fn uniform_channel_pmf(ch: &Awgn, q: u32, scale: f64) -> Result<ConditionalPmf> {
    let half = 1usize << (q - 1);
    let mut p0 = vec![0.0; 2 * half];
    for k in 0..half {
        let lo = k as f64 * scale;
        let hi = if k + 1 == half { f64::INFINITY } else { (k + 1) as f64 * scale };
        p0[half + k] = ch.llr_interval0(lo, hi);
        p0[half - 1 - k] = ch.llr_interval0(-hi, -lo);
    }
    symmetric_from_p0(p0)
}

/// Step size maximizing the MI of the `q`-bit uniform channel quantizer,
/// searched on a grid of clipping ranges between 0.25 and 3 times the LLR
/// mean plus three standard deviations.
pub fn default_fixed_scale(ebn0_db: f64, rate: f64, q: u32) -> Result<f64> {
    if !(1..=16).contains(&q) {
        return Err(Error::Config(format!("channel bit-width {q} out of range 1..=16")));
    }
    let ch = Awgn::from_ebn0_rate(ebn0_db, rate);
    let span = ch.llr_mean() + 3.0 * ch.llr_std();
    let levels = (1u64 << (q - 1)) as f64;
    let steps = 600;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..=steps {
        let clip = span * (0.25 + 2.75 * i as f64 / steps as f64);
        let scale = clip / levels;
        let mi = mutual_information(&uniform_channel_pmf(&ch, q, scale)?);
        if mi > best.0 {
            best = (mi, scale);
        }
    }
    Ok(best.1)
}

fn symmetric_from_p0(p0: Vec<f64>) -> Result<ConditionalPmf> {
    let p1 = p0.iter().rev().copied().collect();
    ConditionalPmf::normalized(p0, p1)
}
