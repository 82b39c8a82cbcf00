//! Flooding decoders with a fixed number of iterations: floating-point
//! min-sum, fixed-point min-sum and the LUT decoder.
//!
//! Every variant runs the same schedule as the unrolled pipeline: the VN
//! stage of iteration 1 forwards the channel value only, each iteration ends
//! with a CN stage, and a decision stage follows the last CN stage. There is
//! no early termination.

use crate::artifact::DesignArtifact;
use crate::channel_quantizer::uniform_level;
use crate::code::TannerGraph;
use crate::density::{label_of, magnitude_rank};
use crate::error::{Error, Result};

/// A message type the min-sum check node can operate on.
pub trait MinSumMessage: Copy {
    type Magnitude: Copy + PartialOrd;
    fn is_negative(self) -> bool;
    fn magnitude(self) -> Self::Magnitude;
    /// Message with the magnitude of `self` and the given sign.
    fn with_sign(self, negative: bool) -> Self;
}

impl MinSumMessage for f64 {
    type Magnitude = f64;

    #[inline]
    fn is_negative(self) -> bool {
        self < 0.0
    }

    #[inline]
    fn magnitude(self) -> f64 {
        self.abs()
    }

    #[inline]
    fn with_sign(self, negative: bool) -> f64 {
        if negative {
            -self.abs()
        } else {
            self.abs()
        }
    }
}

impl MinSumMessage for i32 {
    type Magnitude = i32;

    #[inline]
    fn is_negative(self) -> bool {
        self < 0
    }

    #[inline]
    fn magnitude(self) -> i32 {
        self.abs()
    }

    #[inline]
    fn with_sign(self, negative: bool) -> i32 {
        if negative {
            -self.abs()
        } else {
            self.abs()
        }
    }
}

/// A label of a sign-symmetric message alphabet of the given size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Label {
    pub value: u8,
    pub size: u8,
}

impl MinSumMessage for Label {
    type Magnitude = usize;

    #[inline]
    fn is_negative(self) -> bool {
        self.value < self.size / 2
    }

    #[inline]
    fn magnitude(self) -> usize {
        magnitude_rank(self.value.into(), self.size.into())
    }

    #[inline]
    fn with_sign(self, negative: bool) -> Label {
        let value = label_of(negative, self.magnitude(), self.size.into()) as u8;
        Label { value, ..self }
    }
}

/// Min-sum check node by the two-minimum method: output `j` carries the
/// sign parity of all other inputs and the smallest magnitude among them.
pub fn cn_update_minsum<T: MinSumMessage>(inputs: &[T], out: &mut [T]) {
    debug_assert_eq!(inputs.len(), out.len());
    let mut parity = false;
    let mut min1 = 0usize;
    let mut min2 = usize::MAX;
    for (i, m) in inputs.iter().enumerate() {
        parity ^= m.is_negative();
        if i == 0 {
            continue;
        }
        if m.magnitude() < inputs[min1].magnitude() {
            min2 = min1;
            min1 = i;
        } else if min2 == usize::MAX || m.magnitude() < inputs[min2].magnitude() {
            min2 = i;
        }
    }
    for (j, o) in out.iter_mut().enumerate() {
        let src = if j == min1 { min2 } else { min1 };
        let negative = parity ^ inputs[j].is_negative();
        *o = match inputs.get(src) {
            Some(m) => m.with_sign(negative),
            // a degree-1 check node has no other inputs
            None => inputs[j].with_sign(false),
        };
    }
}

/// Reference check node: leave-one-out sign product and minimum.
pub fn cn_update_naive<T: MinSumMessage>(inputs: &[T], out: &mut [T]) {
    for (j, o) in out.iter_mut().enumerate() {
        let mut negative = false;
        let mut best: Option<T> = None;
        for (i, &m) in inputs.iter().enumerate() {
            if i == j {
                continue;
            }
            negative ^= m.is_negative();
            if best.is_none_or(|b| m.magnitude() < b.magnitude()) {
                best = Some(m);
            }
        }
        *o = best.map_or(inputs[j].with_sign(false), |b| b.with_sign(negative));
    }
}

/// Floating-point VN update: channel plus the sum of the inputs.
#[inline]
pub fn vn_update_float(channel: f64, inputs: &[f64]) -> f64 {
    channel + inputs.iter().sum::<f64>()
}

/// Fixed-point message format: odd integers in half-step units, magnitudes
/// up to `2^q - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedFormat {
    pub q_msg: u32,
}

impl FixedFormat {
    /// Largest magnitude index `k` of `+-(2k + 1)`.
    #[inline]
    pub fn max_index(self) -> i32 {
        (1 << (self.q_msg - 1)) - 1
    }

    /// Re-quantizes a widened sum to the message format. The magnitude index
    /// is `floor(|sum| / 2)`, saturated; a zero sum takes the sign of the
    /// channel value. Returns the message and whether it saturated.
    #[inline]
    pub fn requantize(self, sum: i32, channel: i32) -> (i32, bool) {
        let k = sum.abs() / 2;
        let max = self.max_index();
        let saturated = k > max;
        let k = k.min(max);
        let negative = sum < 0 || (sum == 0 && channel < 0);
        (if negative { -(2 * k + 1) } else { 2 * k + 1 }, saturated)
    }
}

/// Fixed-point VN update: widened integer sum, then re-quantization.
#[inline]
pub fn vn_update_fixed(format: FixedFormat, channel: i32, inputs: &[i32]) -> (i32, bool) {
    let sum = channel + inputs.iter().sum::<i32>();
    format.requantize(sum, channel)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    FloatMs,
    /// `scale` is the quantizer step in LLR units.
    FixedMs { q_ch: u32, q_msg: u32, scale: f64 },
    Lut(Box<DesignArtifact>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoderConfig {
    pub iterations: usize,
    pub variant: Variant,
}

impl DecoderConfig {
    pub fn float(iterations: usize) -> Self {
        Self {
            iterations,
            variant: Variant::FloatMs,
        }
    }

    pub fn fixed(iterations: usize, q_ch: u32, q_msg: u32, scale: f64) -> Self {
        Self {
            iterations,
            variant: Variant::FixedMs { q_ch, q_msg, scale },
        }
    }

    /// LUT decoder running as many iterations as the artifact was designed for.
    pub fn lut(artifact: DesignArtifact) -> Self {
        Self {
            iterations: artifact.iterations,
            variant: Variant::Lut(Box::new(artifact)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.variant {
            Variant::FloatMs => "float",
            Variant::FixedMs { .. } => "fixed",
            Variant::Lut(_) => "lut",
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("at least one iteration is required".into()));
        }
        match &self.variant {
            Variant::FloatMs => {}
            Variant::FixedMs { q_ch, q_msg, scale } => {
                if !(2..=16).contains(q_msg) || !(1..=16).contains(q_ch) {
                    return Err(Error::Config(format!(
                        "fixed-point widths out of range: q_ch = {q_ch}, q_msg = {q_msg} (q_msg >= 2)"
                    )));
                }
                if !(*scale > 0.0 && scale.is_finite()) {
                    return Err(Error::Config(format!("fixed-point scale must be positive, got {scale}")));
                }
            }
            Variant::Lut(a) => {
                a.validate()?;
                if a.iterations != self.iterations {
                    return Err(Error::Config(format!(
                        "artifact is designed for {} iterations, decoder configured for {}",
                        a.iterations, self.iterations
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Per-call diagnostics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub syndrome_ok: bool,
    /// Fixed-point VN outputs clipped to the largest magnitude.
    pub saturations: u64,
}

/// Channel values in the representation a decoder variant consumes.
#[derive(Debug, Clone, Copy)]
pub enum ChannelValues<'a> {
    Llr(&'a [f64]),
    Fixed(&'a [i32]),
    Labels(&'a [u8]),
}

/// Reusable decoder state for one configuration and graph.
pub struct Decoder<'a> {
    graph: &'a TannerGraph,
    cfg: &'a DecoderConfig,
    f_v2c: Vec<f64>,
    f_c2v: Vec<f64>,
    i_v2c: Vec<i32>,
    i_c2v: Vec<i32>,
    l_v2c: Vec<Label>,
    l_c2v: Vec<Label>,
    fixed_ch: Vec<i32>,
    label_ch: Vec<u8>,
    bits: Vec<u8>,
}

const MAX_DEGREE: usize = 64;

impl<'a> Decoder<'a> {
    pub fn new(cfg: &'a DecoderConfig, graph: &'a TannerGraph) -> Result<Self> {
        cfg.validate()?;
        if graph.max_vn_degree() > MAX_DEGREE || graph.max_cn_degree() > MAX_DEGREE {
            return Err(Error::Config(format!("node degrees above {MAX_DEGREE} are not supported")));
        }
        if let Variant::Lut(a) = &cfg.variant {
            let d_v = a.profile.d_v;
            if (0..graph.n_vns()).any(|n| graph.vn_degree(n) != d_v) {
                return Err(Error::Config(format!(
                    "artifact is designed for d_v = {d_v}, graph has other VN degrees"
                )));
            }
        }
        let e = graph.edge_count();
        let (f, i, l) = match cfg.variant {
            Variant::FloatMs => (e, 0, 0),
            Variant::FixedMs { .. } => (0, e, 0),
            Variant::Lut(_) => (0, 0, e),
        };
        let zero_label = Label { value: 0, size: 0 };
        Ok(Self {
            graph,
            cfg,
            f_v2c: vec![0.0; f],
            f_c2v: vec![0.0; f],
            i_v2c: vec![0; i],
            i_c2v: vec![0; i],
            l_v2c: vec![zero_label; l],
            l_c2v: vec![zero_label; l],
            fixed_ch: Vec::new(),
            label_ch: Vec::new(),
            bits: vec![0; graph.n_vns()],
        })
    }

    /// Decodes raw channel LLRs, quantizing them first as the variant
    /// requires.
    pub fn decode_llrs(&mut self, llrs: &[f64]) -> Result<(&[u8], Diagnostics)> {
        self.check_len(llrs.len())?;
        let cfg = self.cfg;
        match &cfg.variant {
            Variant::FloatMs => self.run_float(llrs),
            Variant::FixedMs { q_ch, scale, .. } => {
                let mut ch = std::mem::take(&mut self.fixed_ch);
                ch.clear();
                ch.extend(llrs.iter().map(|&l| uniform_level(l, *q_ch, *scale)));
                let r = self.run_fixed(&ch);
                self.fixed_ch = ch;
                r
            }
            Variant::Lut(a) => {
                let mut ch = std::mem::take(&mut self.label_ch);
                ch.clear();
                ch.extend(llrs.iter().map(|&l| a.channel.label(l)));
                let r = self.run_lut(&ch);
                self.label_ch = ch;
                r
            }
        }
        .map(|d| (self.bits.as_slice(), d))
    }

    /// Decodes channel values already in the variant's representation.
    pub fn decode(&mut self, values: ChannelValues<'_>) -> Result<(&[u8], Diagnostics)> {
        let cfg = self.cfg;
        let d = match (values, &cfg.variant) {
            (ChannelValues::Llr(v), Variant::FloatMs) => {
                self.check_len(v.len())?;
                self.run_float(v)?
            }
            (ChannelValues::Fixed(v), Variant::FixedMs { q_ch, .. }) => {
                self.check_len(v.len())?;
                let max = (1i32 << q_ch) - 1;
                if let Some(&bad) = v.iter().find(|&&c| c % 2 == 0 || c.abs() > max) {
                    return Err(Error::Config(format!(
                        "fixed-point channel value {bad} is not an odd integer within +-{max}"
                    )));
                }
                self.run_fixed(v)?
            }
            (ChannelValues::Labels(v), Variant::Lut(a)) => {
                self.check_len(v.len())?;
                let size = a.channel.levels;
                if let Some(&bad) = v.iter().find(|&&c| usize::from(c) >= size) {
                    return Err(Error::LabelRange {
                        label: bad.into(),
                        size,
                    });
                }
                self.run_lut(v)?
            }
            _ => {
                return Err(Error::Config(format!(
                    "channel representation does not match the {} decoder",
                    self.cfg.name()
                )))
            }
        };
        Ok((self.bits.as_slice(), d))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.graph.n_vns() {
            return Err(Error::Length {
                expected: self.graph.n_vns(),
                got: len,
            });
        }
        Ok(())
    }

    fn finish(&self, saturations: u64) -> Result<Diagnostics> {
        let syndrome_ok = (0..self.graph.n_cns()).all(|m| {
            self.graph
                .cn_edges(m)
                .fold(0u8, |acc, (n, _)| acc ^ self.bits[n])
                == 0
        });
        Ok(Diagnostics {
            syndrome_ok,
            saturations,
        })
    }

    fn run_float(&mut self, llrs: &[f64]) -> Result<Diagnostics> {
        let g = self.graph;
        for n in 0..g.n_vns() {
            for e in g.vn_edge_range(n) {
                self.f_v2c[e] = llrs[n];
            }
        }
        cn_stage(g, &self.f_v2c, &mut self.f_c2v);
        let mut others = [0.0f64; MAX_DEGREE];
        for _ in 1..self.cfg.iterations {
            for n in 0..g.n_vns() {
                let r = g.vn_edge_range(n);
                let inc = &self.f_c2v[r.clone()];
                for (j, e) in r.enumerate() {
                    let k = gather_others(inc, j, &mut others);
                    self.f_v2c[e] = vn_update_float(llrs[n], &others[..k]);
                }
            }
            cn_stage(g, &self.f_v2c, &mut self.f_c2v);
        }
        for n in 0..g.n_vns() {
            let total = vn_update_float(llrs[n], &self.f_c2v[g.vn_edge_range(n)]);
            self.bits[n] = u8::from(total < 0.0);
        }
        self.finish(0)
    }

    fn run_fixed(&mut self, ch: &[i32]) -> Result<Diagnostics> {
        let Variant::FixedMs { q_msg, .. } = self.cfg.variant else {
            unreachable!("fixed decoder run with another variant")
        };
        let format = FixedFormat { q_msg };
        let g = self.graph;
        let mut saturations = 0u64;
        for n in 0..g.n_vns() {
            let (v, sat) = format.requantize(ch[n], ch[n]);
            saturations += u64::from(sat);
            for e in g.vn_edge_range(n) {
                self.i_v2c[e] = v;
            }
        }
        cn_stage(g, &self.i_v2c, &mut self.i_c2v);
        let mut others = [0i32; MAX_DEGREE];
        for _ in 1..self.cfg.iterations {
            for n in 0..g.n_vns() {
                let r = g.vn_edge_range(n);
                let inc = &self.i_c2v[r.clone()];
                for (j, e) in r.enumerate() {
                    let k = gather_others(inc, j, &mut others);
                    let (v, sat) = vn_update_fixed(format, ch[n], &others[..k]);
                    saturations += u64::from(sat);
                    self.i_v2c[e] = v;
                }
            }
            cn_stage(g, &self.i_v2c, &mut self.i_c2v);
        }
        for n in 0..g.n_vns() {
            let total = ch[n] + self.i_c2v[g.vn_edge_range(n)].iter().sum::<i32>();
            self.bits[n] = u8::from(total < 0 || (total == 0 && ch[n] < 0));
        }
        self.finish(saturations)
    }

    fn run_lut(&mut self, ch: &[u8]) -> Result<Diagnostics> {
        let cfg = self.cfg;
        let Variant::Lut(a) = &cfg.variant else {
            unreachable!("LUT decoder run with another variant")
        };
        let g = self.graph;
        let size = a.message_levels() as u8;
        let first = &a.vn_trees[0];
        for n in 0..g.n_vns() {
            let value = first.eval(ch[n], &[]);
            for e in g.vn_edge_range(n) {
                self.l_v2c[e] = Label { value, size };
            }
        }
        cn_stage(g, &self.l_v2c, &mut self.l_c2v);
        let mut others = [0u8; MAX_DEGREE];
        let mut incoming = [0u8; MAX_DEGREE];
        for tree in &a.vn_trees[1..] {
            for n in 0..g.n_vns() {
                let r = g.vn_edge_range(n);
                let d = r.len();
                for (slot, l) in incoming.iter_mut().zip(&self.l_c2v[r.clone()]) {
                    *slot = l.value;
                }
                for (j, e) in r.enumerate() {
                    let k = gather_others(&incoming[..d], j, &mut others);
                    let value = tree.eval(ch[n], &others[..k]);
                    self.l_v2c[e] = Label { value, size };
                }
            }
            cn_stage(g, &self.l_v2c, &mut self.l_c2v);
        }
        for n in 0..g.n_vns() {
            let r = g.vn_edge_range(n);
            let d = r.len();
            for (slot, l) in incoming.iter_mut().zip(&self.l_c2v[r]) {
                *slot = l.value;
            }
            self.bits[n] = a.decision.decide(ch[n], &incoming[..d]);
        }
        self.finish(0)
    }
}

/// Copies all entries of `inc` except position `skip` into `out`.
#[inline]
fn gather_others<T: Copy>(inc: &[T], skip: usize, out: &mut [T]) -> usize {
    let mut k = 0;
    for (i, &v) in inc.iter().enumerate() {
        if i != skip {
            out[k] = v;
            k += 1;
        }
    }
    k
}

fn cn_stage<T: MinSumMessage + Default>(g: &TannerGraph, v2c: &[T], c2v: &mut [T]) {
    let mut inputs = [T::default(); MAX_DEGREE];
    let mut outputs = [T::default(); MAX_DEGREE];
    for m in 0..g.n_cns() {
        let ids = g.cn_edge_ids(m);
        let d = ids.len();
        for (slot, &e) in inputs.iter_mut().zip(ids) {
            *slot = v2c[e as usize];
        }
        cn_update_minsum(&inputs[..d], &mut outputs[..d]);
        for (&o, &e) in outputs.iter().zip(ids) {
            c2v[e as usize] = o;
        }
    }
}

impl Default for Label {
    fn default() -> Self {
        Label { value: 0, size: 2 }
    }
}

/// Decodes one frame of channel values (raw LLRs for the float variant,
/// odd half-step integers for fixed-point, channel labels for LUT).
pub fn decode(cfg: &DecoderConfig, graph: &TannerGraph, values: ChannelValues<'_>) -> Result<(Vec<u8>, Diagnostics)> {
    let mut dec = Decoder::new(cfg, graph)?;
    let (bits, d) = dec.decode(values)?;
    Ok((bits.to_vec(), d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_min_hand_example() {
        let mut out = [0.0; 3];
        cn_update_minsum(&[3.0, -1.0, 2.0], &mut out);
        assert_eq!(out, [-1.0, 2.0, -1.0]);
        let mut out = [0.0; 4];
        cn_update_minsum(&[5.0; 4], &mut out);
        assert_eq!(out, [5.0; 4]);
    }

    #[test]
    fn two_min_first_input_is_minimum() {
        let inputs = [1.0, 4.0, -2.0, 3.0];
        let (mut a, mut b) = ([0.0; 4], [0.0; 4]);
        cn_update_minsum(&inputs, &mut a);
        cn_update_naive(&inputs, &mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn label_sign_and_rank() {
        let l = Label { value: 1, size: 8 };
        assert!(l.is_negative());
        assert_eq!(l.magnitude(), 2);
        assert_eq!(l.with_sign(false).value, 6);
    }

    #[test]
    fn vn_float_examples() {
        assert_eq!(vn_update_float(0.0, &[0.0; 5]), 0.0);
        assert_eq!(vn_update_float(2.0, &[1.0, -3.0, 1.0, 1.0, -1.0]), 1.0);
    }

    #[test]
    fn fixed_requantization() {
        let f = FixedFormat { q_msg: 3 };
        assert_eq!(f.requantize(100, 1), (7, true));
        assert_eq!(f.requantize(-100, 1), (-7, true));
        assert_eq!(f.requantize(7, 1), (7, false));
        assert_eq!(f.requantize(6, 1), (7, false));
        assert_eq!(f.requantize(5, 1), (5, false));
        assert_eq!(f.requantize(1, -1), (1, false));
        assert_eq!(f.requantize(0, -1), (-1, false));
        assert_eq!(f.requantize(0, 3), (1, false));
    }
}
