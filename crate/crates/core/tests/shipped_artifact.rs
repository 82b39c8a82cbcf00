//! Checks on the shipped matrices and LUT design in `data/`.

use faldpc::artifact::{DesignArtifact, DesignParams};
use faldpc::channel_quantizer::DEFAULT_FINE_BINS;
use faldpc::code::{GeneratedCode, ParityCheckMatrix, DEFAULT_CODE_SEED};
use faldpc::prob::{mutual_information, ConditionalPmf};
use faldpc::quantizer::{is_contiguous, uniform_baseline_mi};
use faldpc::tree::{joint_of, share_tables, vn_instances, LutTree, NodeInput};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
const ARTIFACT: &str = "lut_8023an_4p5db_q4_q3_i5.json";

fn read(name: &str) -> String {
    std::fs::read_to_string(format!("{DATA}/{name}")).unwrap()
}

fn shipped() -> DesignArtifact {
    DesignArtifact::from_json(&read(ARTIFACT)).unwrap()
}

/// `(tree, check distribution it was designed for)`, decision tree last.
fn trees_with_inputs(a: &DesignArtifact) -> Vec<(&LutTree, &ConditionalPmf)> {
    let mut out = Vec::new();
    for (i, t) in a.vn_trees.iter().enumerate() {
        let check = if i == 0 { &a.channel.pmf } else { &a.states[i - 1].cn_out };
        out.push((t, check));
    }
    out.push((a.decision.tree(), &a.states.last().unwrap().cn_out));
    out
}

/// Input joint of every node of a tree.
fn node_joints(tree: &LutTree, channel: &ConditionalPmf, check: &ConditionalPmf) -> Vec<ConditionalPmf> {
    let mut outs: Vec<ConditionalPmf> = Vec::new();
    let mut joints = Vec::new();
    for node in &tree.nodes {
        let joint = joint_of(&node.inputs, channel, check, &outs).unwrap();
        let map: Vec<usize> = node.table.table.iter().map(|&v| v.into()).collect();
        outs.push(joint.push_forward(&map, node.table.output_size).unwrap());
        joints.push(joint);
    }
    joints
}

#[test]
fn matrices_regenerate_bit_identically() {
    for (code, file) in [
        (GeneratedCode::Ieee8023anLike, "ieee8023an_like_6_32_2048.alist"),
        (GeneratedCode::Regular3x6N1008, "regular_3_6_1008.alist"),
        (GeneratedCode::Regular3x6N96, "regular_3_6_96.alist"),
    ] {
        let text = read(file);
        let h = code.build(DEFAULT_CODE_SEED).unwrap();
        assert_eq!(h.to_alist(), text, "{file}");
        assert_eq!(ParityCheckMatrix::parse_alist(&text).unwrap(), h);
    }
}

#[test]
fn ieee_like_matrix_shape() {
    let h = ParityCheckMatrix::parse_alist(&read("ieee8023an_like_6_32_2048.alist")).unwrap();
    assert_eq!((h.n_rows(), h.n_cols()), (384, 2048));
    let p = h.profile().unwrap();
    assert_eq!((p.d_v, p.d_c), (6, 32));
    assert!(h.check_syndrome(&vec![0; 2048]).unwrap());
}

#[test]
fn artifact_regenerates_bit_identically() {
    let h = GeneratedCode::Ieee8023anLike.build(DEFAULT_CODE_SEED).unwrap();
    let a = DesignArtifact::design(&DesignParams {
        profile: h.profile().unwrap(),
        design_ebn0_db: 4.5,
        iterations: 5,
        q_ch: 4,
        q_msg: 3,
        fine_bins: DEFAULT_FINE_BINS,
        vn_shape: None,
        decision_shape: None,
    })
    .unwrap();
    assert_eq!(a.to_json().unwrap(), read(ARTIFACT));
}

#[test]
fn artifact_structure() {
    let a = shipped();
    assert_eq!(a.vn_trees.len(), 5);
    assert_eq!(a.channel.levels, 16);
    assert_eq!(a.message_levels(), 8);
    let root = &a.vn_trees[1].root().table;
    assert_eq!(root.input_arities, vec![8, 16]);
    assert_eq!(root.table.len(), 128);
    assert!(root.table.iter().all(|&v| v < 8));
    assert_eq!(a.decision.tree().output_size(), 2);
}

#[test]
fn mi_trace_strictly_increases() {
    let a = shipped();
    assert!(a.mi_trace.windows(2).all(|w| w[1].1 > w[0].1), "{:?}", a.mi_trace);
    for (i, s) in a.states.iter().enumerate().skip(1) {
        assert!(s.vn_mi >= a.states[i - 1].cn_mi, "VN stage {} loses information", i + 1);
    }
}

#[test]
fn tables_are_symmetric_contiguous_and_bounded() {
    let a = shipped();
    for (tree, check) in trees_with_inputs(&a) {
        for (node, joint) in tree.nodes.iter().zip(node_joints(tree, &a.channel.pmf, check)) {
            let t = &node.table;
            let map: Vec<usize> = t.table.iter().map(|&v| v.into()).collect();
            assert!(t.is_mirror_symmetric());
            assert!(is_contiguous(&joint, &map));
            let achieved = mutual_information(&joint.push_forward(&map, t.output_size).unwrap());
            assert!((achieved - t.achieved_mi).abs() < 1e-12);
            assert!(t.achieved_mi <= mutual_information(&joint) + 1e-12);
            assert!(t.achieved_mi + 1e-12 >= uniform_baseline_mi(&joint, t.output_size));
        }
    }
}

/// Composes the tables offline into one flat table over all leaf values
/// (channel first, then check slots) and compares with tree evaluation.
#[test]
fn tree_evaluation_equals_composed_table() {
    let a = shipped();
    let tree = &a.vn_trees[4];
    let (l, m, slots) = (tree.channel_size, tree.message_size, tree.check_slots);
    let total = l * m.pow(slots as u32);
    let leaf = |idx: usize, input: NodeInput| -> usize {
        match input {
            NodeInput::Channel => idx / m.pow(slots as u32),
            NodeInput::Check(s) => (idx / m.pow((slots - 1 - s) as u32)) % m,
            NodeInput::Node(_) => unreachable!(),
        }
    };
    let mut layers: Vec<Vec<u8>> = Vec::new();
    for node in &tree.nodes {
        let layer = (0..total)
            .map(|idx| {
                let args: Vec<usize> = node
                    .inputs
                    .iter()
                    .map(|&inp| match inp {
                        NodeInput::Node(j) => layers[j][idx].into(),
                        other => leaf(idx, other),
                    })
                    .collect();
                node.table.lookup(&args) as u8
            })
            .collect();
        layers.push(layer);
    }
    let flat = layers.last().unwrap();
    let mut checks = vec![0u8; slots];
    for (idx, &want) in flat.iter().enumerate() {
        for (s, c) in checks.iter_mut().enumerate() {
            *c = leaf(idx, NodeInput::Check(s)) as u8;
        }
        assert_eq!(tree.eval(leaf(idx, NodeInput::Channel) as u8, &checks), want);
    }
}

#[test]
fn mirrored_inputs_mirror_the_output() {
    let a = shipped();
    let tree = &a.vn_trees[2];
    let (l, m) = (tree.channel_size as u8, tree.message_size as u8);
    let mut state = 12345u64;
    for _ in 0..10_000 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
        let ch = (state >> 40) as u8 % l;
        let checks: Vec<u8> = (0..tree.check_slots).map(|s| (state >> (8 * s)) as u8 % m).collect();
        let mirrored: Vec<u8> = checks.iter().map(|&c| m - 1 - c).collect();
        assert_eq!(tree.eval(l - 1 - ch, &mirrored), m - 1 - tree.eval(ch, &checks));
    }
}

/// Per-VN sharing for the default degree-6 shape: of the 6 x 5 nodes, the
/// bottom pairs repeat across outputs. Counting distinct (table, inputs):
/// 3 + 3 pair nodes, 5 four-input nodes, 6 + 6 upper nodes.
#[test]
fn sharing_across_vn_outputs() {
    let a = shipped();
    for tree in &a.vn_trees[1..] {
        let set = share_tables(&vn_instances(tree, 6));
        assert_eq!(set.total_nodes, 30);
        assert_eq!(set.unique_nodes(), 23);
        assert_eq!(set.roots.len(), 6);
    }
    let first = share_tables(&vn_instances(&a.vn_trees[0], 6));
    assert_eq!((first.total_nodes, first.unique_nodes()), (6, 1));
}
