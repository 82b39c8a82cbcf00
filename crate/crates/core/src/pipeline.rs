//! Analytical cost model of the fully unrolled decoder: register bits,
//! latency, throughput and inter-stage wires.
//!
//! The pipeline has `2I` stages. Each of the `2I - 1` stages before the
//! decision stage registers `N d_v` messages of `q_msg` bits plus `N`
//! forwarded channel values of `q_ch` bits; the decision stage registers `N`
//! decoded bits.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PipelineParams {
    pub n: u64,
    pub d_v: u64,
    pub iterations: u64,
    pub q_msg: u64,
    pub q_ch: u64,
}

impl PipelineParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("n", self.n),
            ("d_v", self.d_v),
            ("iterations", self.iterations),
            ("q_msg", self.q_msg),
            ("q_ch", self.q_ch),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("{name} must be positive")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StageKind {
    Vn,
    Cn,
    Decision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageRegisters {
    pub stage: u64,
    pub kind: StageKind,
    pub message_bits: u64,
    pub channel_bits: u64,
    pub decision_bits: u64,
}

impl StageRegisters {
    pub fn total(&self) -> u64 {
        self.message_bits + self.channel_bits + self.decision_bits
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegisterBudget {
    pub total_bits: u64,
    pub stages: Vec<StageRegisters>,
}

/// `(2I - 1) N (d_v q_msg + q_ch) + N` with its per-stage breakdown.
pub fn register_budget(p: &PipelineParams) -> Result<RegisterBudget> {
    p.validate()?;
    let overflow = || Error::Config("register count overflows 64 bits".into());
    let mut stages = Vec::new();
    for s in 0..2 * p.iterations - 1 {
        let message_bits = p.n.checked_mul(p.d_v).and_then(|v| v.checked_mul(p.q_msg)).ok_or_else(overflow)?;
        let channel_bits = p.n.checked_mul(p.q_ch).ok_or_else(overflow)?;
        stages.push(StageRegisters {
            stage: s + 1,
            kind: if s % 2 == 0 { StageKind::Vn } else { StageKind::Cn },
            message_bits,
            channel_bits,
            decision_bits: 0,
        });
    }
    stages.push(StageRegisters {
        stage: 2 * p.iterations,
        kind: StageKind::Decision,
        message_bits: 0,
        channel_bits: 0,
        decision_bits: p.n,
    });
    let total_bits = stages
        .iter()
        .try_fold(0u64, |acc, s| acc.checked_add(s.total()))
        .ok_or_else(overflow)?;
    Ok(RegisterBudget { total_bits, stages })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timing {
    pub latency_cycles: u64,
    pub latency_ns: f64,
    pub throughput_gbps: f64,
}

/// Latency `2I / f` and throughput `N f` for a clock of `f_ghz` GHz.
pub fn timing(n: u64, iterations: u64, f_ghz: f64) -> Result<Timing> {
    if !(f_ghz > 0.0 && f_ghz.is_finite()) {
        return Err(Error::Config(format!("clock frequency must be positive, got {f_ghz} GHz")));
    }
    if n == 0 || iterations == 0 {
        return Err(Error::Config("n and iterations must be positive".into()));
    }
    let latency_cycles = 2 * iterations;
    Ok(Timing {
        latency_cycles,
        latency_ns: latency_cycles as f64 / f_ghz,
        throughput_gbps: n as f64 * f_ghz,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WireBudget {
    /// `N d_v q_msg`.
    pub message_wires: u64,
    /// `N q_ch`.
    pub channel_wires: u64,
}

impl WireBudget {
    pub fn total(&self) -> u64 {
        self.message_wires + self.channel_wires
    }
}

/// Wires crossing one stage boundary.
pub fn wire_budget(n: u64, d_v: u64, q_msg: u64, q_ch: u64) -> Result<WireBudget> {
    PipelineParams {
        n,
        d_v,
        iterations: 1,
        q_msg,
        q_ch,
    }
    .validate()?;
    Ok(WireBudget {
        message_wires: n * d_v * q_msg,
        channel_wires: n * q_ch,
    })
}

/// Wire ratio of configuration `a` over `b`, messages only and including
/// channel forwarding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WireRatio {
    pub messages_only: f64,
    pub with_channel: f64,
}

pub fn wire_ratio(a: &WireBudget, b: &WireBudget) -> WireRatio {
    WireRatio {
        messages_only: a.message_wires as f64 / b.message_wires as f64,
        with_channel: a.total() as f64 / b.total() as f64,
    }
}

/// All derivable figures for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub params: PipelineParams,
    pub f_ghz: f64,
    pub registers: RegisterBudget,
    pub timing: Timing,
    pub wires: WireBudget,
}

pub fn report(p: &PipelineParams, f_ghz: f64) -> Result<PipelineReport> {
    Ok(PipelineReport {
        params: *p,
        f_ghz,
        registers: register_budget(p)?,
        timing: timing(p.n, p.iterations, f_ghz)?,
        wires: wire_budget(p.n, p.d_v, p.q_msg, p.q_ch)?,
    })
}
