//! Design artifact: everything the LUT decoder needs, plus the design
//! diagnostics, in one versioned JSON document.
//!
//! Layout (format version 1):
//!
//! ```text
//! {
//!   "format_version": 1,
//!   "profile":   { "d_v", "d_c", "rate": { "num", "den" } },
//!   "design_ebn0_db", "iterations", "q_ch", "q_msg", "fine_bins",
//!   "vn_shape", "decision_shape",          // tree shape strings
//!   "channel":   { "levels", "thresholds", "pmf": { "p0", "p1" }, "fine_mi", "achieved_mi" },
//!   "vn_trees":  [ LutTree, ... ],          // one per iteration, first is channel-only
//!   "decision":  LutTree,                   // binary root
//!   "mi_trace":  [ [iteration, mi], ... ],
//!   "decision_mi",
//!   "states":    [ { "iteration", "vn_out", "cn_out", "vn_mi", "cn_mi" }, ... ]
//! }
//! ```
//!
//! A `LutTree` holds its `shape`, `channel_size`, `message_size`,
//! `check_slots` and a post-ordered `nodes` list; each node has `inputs`
//! (`"Channel"`, `{"Check": slot}` or `{"Node": index}`) and a `table` with
//! `input_arities`, `output_size`, the flat mixed-radix `table` (last input
//! varies fastest), `achieved_mi`, `input_mi` and `void_levels`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel_quantizer::{design_channel_quantizer, ChannelQuantizer};
use crate::code::CodeProfile;
use crate::density::{run_de, DeState, DesignSchedule};
use crate::error::{Error, Result};
use crate::prob::ConditionalPmf;
use crate::tree::{DecisionTree, LutTree, TreeShape};

pub const FORMAT_VERSION: u32 = 1;

/// Parameters of one design run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignParams {
    pub profile: CodeProfile,
    pub design_ebn0_db: f64,
    pub iterations: usize,
    pub q_ch: u32,
    pub q_msg: u32,
    pub fine_bins: usize,
    pub vn_shape: Option<TreeShape>,
    pub decision_shape: Option<TreeShape>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignArtifact {
    pub format_version: u32,
    pub profile: CodeProfile,
    pub design_ebn0_db: f64,
    pub iterations: usize,
    pub q_ch: u32,
    pub q_msg: u32,
    pub fine_bins: usize,
    pub vn_shape: TreeShape,
    pub decision_shape: TreeShape,
    pub channel: ChannelQuantizer,
    pub vn_trees: Vec<LutTree>,
    pub decision: DecisionTree,
    pub mi_trace: Vec<(usize, f64)>,
    pub decision_mi: f64,
    pub states: Vec<DeState>,
}

fn check_bits(name: &str, q: u32, min: u32) -> Result<usize> {
    if q < min || q > 8 {
        return Err(Error::Config(format!("{name} must be in {min}..=8 bits, got {q}")));
    }
    Ok(1usize << q)
}

impl DesignArtifact {
    /// Channel quantizer design followed by density evolution.
    pub fn design(params: &DesignParams) -> Result<Self> {
        let levels = check_bits("q_ch", params.q_ch, 1)?;
        let m = check_bits("q_msg", params.q_msg, 2)?;
        let rate = params.profile.rate.value();
        let channel = design_channel_quantizer(params.design_ebn0_db, rate, levels, params.fine_bins)?;
        let schedule = DesignSchedule {
            iterations: params.iterations,
            message_levels: m,
            vn_shape: params.vn_shape.clone(),
            decision_shape: params.decision_shape.clone(),
        };
        let out = run_de(&channel.pmf, &params.profile, &schedule)?;
        Ok(Self {
            format_version: FORMAT_VERSION,
            profile: params.profile,
            design_ebn0_db: params.design_ebn0_db,
            iterations: params.iterations,
            q_ch: params.q_ch,
            q_msg: params.q_msg,
            fine_bins: params.fine_bins,
            vn_shape: schedule.vn_shape_for(params.profile.d_v),
            decision_shape: schedule.decision_shape_for(params.profile.d_v),
            channel,
            vn_trees: out.vn_trees,
            decision: out.decision,
            mi_trace: out.mi_trace,
            decision_mi: out.decision_mi,
            states: out.states,
        })
    }

    pub fn message_levels(&self) -> usize {
        1 << self.q_msg
    }

    /// Consistency of sizes, counts and tables.
    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Artifact(format!(
                "unsupported format version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let levels = check_bits("q_ch", self.q_ch, 1)?;
        let m = check_bits("q_msg", self.q_msg, 2)?;
        if self.channel.levels != levels {
            return Err(Error::Artifact(format!(
                "channel quantizer has {} levels, q_ch = {} needs {levels}",
                self.channel.levels, self.q_ch
            )));
        }
        self.channel.validate()?;
        ConditionalPmf::new(self.channel.pmf.p0().to_vec(), self.channel.pmf.p1().to_vec())?;
        if self.iterations == 0 || self.vn_trees.len() != self.iterations {
            return Err(Error::Artifact(format!(
                "{} VN trees for {} iterations",
                self.vn_trees.len(),
                self.iterations
            )));
        }
        let d_v = self.profile.d_v;
        for (i, t) in self.vn_trees.iter().enumerate() {
            t.validate()?;
            let slots = if i == 0 { 0 } else { d_v - 1 };
            if t.channel_size != levels || t.message_size != m || t.check_slots != slots || t.output_size() != m {
                return Err(Error::Artifact(format!("VN tree {} has mismatched sizes", i + 1)));
            }
        }
        let dt = self.decision.tree();
        dt.validate()?;
        if dt.channel_size != levels || dt.message_size != m || dt.check_slots != d_v || dt.output_size() != 2 {
            return Err(Error::Artifact("decision tree has mismatched sizes".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let a: Self = serde_json::from_str(text)?;
        a.validate()?;
        Ok(a)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// SHA-256 of the serialized artifact, hex encoded.
    pub fn hash(&self) -> Result<String> {
        Ok(sha256_hex(self.to_json()?.as_bytes()))
    }

    /// Every table of every tree, VN trees first.
    pub fn tables(&self) -> impl Iterator<Item = &crate::tree::LutTable> {
        self.vn_trees
            .iter()
            .chain(std::iter::once(self.decision.tree()))
            .flat_map(|t| t.nodes.iter().map(|n| &n.table))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
