//! Discrete density evolution for min-sum check nodes and LUT variable nodes
//! on a cycle-free regular ensemble.
//!
//! Messages are labels of a sign-symmetric alphabet of even size `M`: label
//! `k < M/2` is negative, and its magnitude rank is `M/2 - 1 - k`; label
//! `k >= M/2` is positive with rank `k - M/2`. The min-sum check node
//! therefore works on labels directly: sign parity and minimum rank.

use serde::{Deserialize, Serialize};

use crate::code::CodeProfile;
use crate::error::{Error, Result};
use crate::prob::{mutual_information, ConditionalPmf};
use crate::quantizer::SYMMETRY_TOL;
use crate::tree::{design_decision_tree, design_vn_tree, DecisionTree, LutTree, TreeShape};

/// Magnitude rank of a label (0 = least reliable).
#[inline]
pub fn magnitude_rank(label: usize, size: usize) -> usize {
    let half = size / 2;
    if label < half {
        half - 1 - label
    } else {
        label - half
    }
}

/// Label with the given sign and magnitude rank.
#[inline]
pub fn label_of(negative: bool, rank: usize, size: usize) -> usize {
    let half = size / 2;
    if negative {
        half - 1 - rank
    } else {
        half + rank
    }
}

/// Distribution of `sign(prod) * min |.|` over `d_c - 1` i.i.d. inputs whose
/// bits XOR to the output bit.
///
/// For a symmetric input the `x = 0` branch equals the min-sum of i.i.d.
/// draws from `p0`, and the `x = 1` branch is its mirror. The pairwise step
/// works on the joint survival function `P(parity = s, rank >= t)`, which
/// factorizes over independent inputs.
pub fn cn_evolve(input: &ConditionalPmf, d_c: usize) -> Result<ConditionalPmf> {
    if d_c < 2 {
        return Err(Error::Config(format!("check degree must be >= 2, got {d_c}")));
    }
    let n = input.size();
    if !n.is_multiple_of(2) {
        return Err(Error::Distribution(format!("alphabet size {n} is odd")));
    }
    let deviation = input.symmetry_deviation();
    if deviation > SYMMETRY_TOL {
        return Err(Error::Asymmetric { deviation });
    }
    let half = n / 2;
    // surv[s][t] = P(sign = s, rank >= t), s = 0 positive, 1 negative
    let survival = |p: &[f64]| {
        let mut sv = [vec![0.0; half + 1], vec![0.0; half + 1]];
        for t in (0..half).rev() {
            sv[0][t] = sv[0][t + 1] + p[label_of(false, t, n)];
            sv[1][t] = sv[1][t + 1] + p[label_of(true, t, n)];
        }
        sv
    };
    let single = survival(input.p0());
    let mut acc = single.clone();
    for _ in 0..d_c - 2 {
        for t in 0..half {
            let (a0, a1) = (acc[0][t], acc[1][t]);
            let (b0, b1) = (single[0][t], single[1][t]);
            acc[0][t] = a0 * b0 + a1 * b1;
            acc[1][t] = a0 * b1 + a1 * b0;
        }
    }
    let mut p0 = vec![0.0; n];
    for t in 0..half {
        p0[label_of(false, t, n)] = (acc[0][t] - acc[0][t + 1]).max(0.0);
        p0[label_of(true, t, n)] = (acc[1][t] - acc[1][t + 1]).max(0.0);
    }
    let p1 = p0.iter().rev().copied().collect();
    ConditionalPmf::normalized(p0, p1)
}

/// Pushes the channel and check-message distributions through a designed
/// tree (all inputs conditioned on the same bit).
pub fn vn_joint_push(channel: &ConditionalPmf, check: &ConditionalPmf, tree: &LutTree) -> Result<ConditionalPmf> {
    tree.push(channel, check)
}

/// Iteration schedule and alphabet sizes of a design run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSchedule {
    pub iterations: usize,
    /// `|M|`, the message alphabet size.
    pub message_levels: usize,
    /// VN tree shape for iterations 2..=I; `None` selects the default for
    /// the code's `d_v`.
    pub vn_shape: Option<TreeShape>,
    pub decision_shape: Option<TreeShape>,
}

impl DesignSchedule {
    pub fn new(iterations: usize, message_levels: usize) -> Self {
        Self {
            iterations,
            message_levels,
            vn_shape: None,
            decision_shape: None,
        }
    }

    pub fn vn_shape_for(&self, d_v: usize) -> TreeShape {
        self.vn_shape.clone().unwrap_or_else(|| TreeShape::default_vn(d_v))
    }

    pub fn decision_shape_for(&self, d_v: usize) -> TreeShape {
        self.decision_shape
            .clone()
            .unwrap_or_else(|| TreeShape::default_decision(d_v))
    }
}

/// Distributions after one iteration of the design loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeState {
    pub iteration: usize,
    pub vn_out: ConditionalPmf,
    pub cn_out: ConditionalPmf,
    pub vn_mi: f64,
    pub cn_mi: f64,
}

/// Output of [`run_de`].
#[derive(Debug, Clone, PartialEq)]
pub struct DeOutcome {
    /// One VN tree per iteration; the first consumes the channel only.
    pub vn_trees: Vec<LutTree>,
    pub decision: DecisionTree,
    pub states: Vec<DeState>,
    /// `(iteration, MI after the VN stage)`.
    pub mi_trace: Vec<(usize, f64)>,
    /// MI of the decision output.
    pub decision_mi: f64,
}

const DEGENERATE_MI: f64 = 1e-12;

/// Runs the design loop: iteration 1 quantizes the channel to `|M|` labels,
/// each later iteration designs a VN tree for the current check-message
/// distribution, every iteration ends with a CN stage, and a decision tree
/// is designed on the final check-message distribution.
pub fn run_de(channel: &ConditionalPmf, profile: &CodeProfile, schedule: &DesignSchedule) -> Result<DeOutcome> {
    let m = schedule.message_levels;
    if schedule.iterations == 0 {
        return Err(Error::Config("at least one iteration is required".into()));
    }
    if m < 2 || !m.is_multiple_of(2) || m > 256 {
        return Err(Error::Config(format!("message alphabet size must be even in 2..=256, got {m}")));
    }
    let vn_shape = schedule.vn_shape_for(profile.d_v);
    vn_shape.expect_leaves(profile.d_v - 1)?;
    let dec_shape = schedule.decision_shape_for(profile.d_v);
    dec_shape.expect_leaves(profile.d_v)?;

    let mut vn_trees = Vec::with_capacity(schedule.iterations);
    let mut states = Vec::with_capacity(schedule.iterations);
    let mut mi_trace = Vec::with_capacity(schedule.iterations);
    let mut check: Option<ConditionalPmf> = None;
    for i in 1..=schedule.iterations {
        let (tree, vn_out) = match &check {
            None => {
                let tree = design_vn_tree(channel, channel, &TreeShape::channel_only(), m)?;
                let out = tree.push(channel, channel)?;
                (tree, out)
            }
            Some(c) => {
                let tree = design_vn_tree(channel, c, &vn_shape, m)?;
                let out = vn_joint_push(channel, c, &tree)?;
                (tree, out)
            }
        };
        let vn_mi = mutual_information(&vn_out);
        if vn_mi < DEGENERATE_MI {
            return Err(Error::BelowThreshold {
                stage: format!("VN stage of iteration {i}"),
            });
        }
        let cn_out = cn_evolve(&vn_out, profile.d_c)?;
        let cn_mi = mutual_information(&cn_out);
        if cn_mi < DEGENERATE_MI {
            return Err(Error::BelowThreshold {
                stage: format!("CN stage of iteration {i}"),
            });
        }
        mi_trace.push((i, vn_mi));
        vn_trees.push(tree);
        states.push(DeState {
            iteration: i,
            vn_out,
            cn_out: cn_out.clone(),
            vn_mi,
            cn_mi,
        });
        check = Some(cn_out);
    }
    let last = check.expect("at least one iteration");
    let decision = design_decision_tree(channel, &last, &dec_shape, m)?;
    let decision_mi = mutual_information(&decision.tree().push(channel, &last)?);
    Ok(DeOutcome {
        vn_trees,
        decision,
        states,
        mi_trace,
        decision_mi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_and_labels() {
        assert_eq!(magnitude_rank(0, 8), 3);
        assert_eq!(magnitude_rank(3, 8), 0);
        assert_eq!(magnitude_rank(4, 8), 0);
        assert_eq!(magnitude_rank(7, 8), 3);
        for k in 0..8 {
            assert_eq!(label_of(k < 4, magnitude_rank(k, 8), 8), k);
        }
    }

    #[test]
    fn degree_two_passes_through() {
        let d = ConditionalPmf::from_symmetric_half(vec![0.05, 0.1, 0.25, 0.6]).unwrap();
        let out = cn_evolve(&d, 2).unwrap();
        for k in 0..4 {
            assert!((out.p0()[k] - d.p0()[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn binary_degree_three() {
        let d = ConditionalPmf::from_symmetric_half(vec![0.1, 0.9]).unwrap();
        let out = cn_evolve(&d, 3).unwrap();
        assert!((out.p0()[1] - 0.82).abs() < 1e-15);
    }

    #[test]
    fn rejects_asymmetric() {
        let d = ConditionalPmf::new(vec![0.7, 0.3], vec![0.4, 0.6]).unwrap();
        assert!(matches!(cn_evolve(&d, 3), Err(Error::Asymmetric { .. })));
    }
}
