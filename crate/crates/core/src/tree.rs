//! LUT trees: hierarchies of small look-up tables replacing the VN update
//! and the final bit decision.
//!
//! A tree's topology is described by a [`TreeShape`]:
//!
//! ```text
//! shape := node
//! node  := '(' item+ ')'
//! item  := node | 'c' | 'L'
//! ```
//!
//! `c` is a check-to-variable message leaf and `L` the channel leaf. Every
//! parenthesized group is one LUT whose inputs are its items, left to right.
//! Whitespace between items is optional. Check leaves are numbered in
//! left-to-right order; that numbering is the slot order used when the tree
//! is evaluated.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::prob::ConditionalPmf;
use crate::quantizer::{self, design_quantizer, Symmetry};

/// Upper bound on LUT nodes per tree; evaluation keeps node outputs on the
/// stack.
pub const MAX_TREE_NODES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeItem {
    Channel,
    Check,
    Node(Vec<ShapeItem>),
}

/// Textual LUT tree topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeShape {
    root: Vec<ShapeItem>,
}

impl TreeShape {
    pub fn root(&self) -> &[ShapeItem] {
        &self.root
    }

    pub fn channel_leaves(&self) -> usize {
        count(&self.root, &|i| matches!(i, ShapeItem::Channel))
    }

    pub fn check_leaves(&self) -> usize {
        count(&self.root, &|i| matches!(i, ShapeItem::Check))
    }

    /// Tree used for one VN output of degree `d_v`: one channel leaf and
    /// `d_v - 1` check leaves. For `d_v = 6` this is the two-input tree
    /// `((((c c)(c c)) c) L)`; otherwise the check leaves are paired up level
    /// by level and the result is joined with the channel at the root.
    pub fn default_vn(d_v: usize) -> Self {
        if d_v == 6 {
            return "((((c c)(c c)) c) L)".parse().expect("static shape");
        }
        let mut items = vec![pair_up(d_v.saturating_sub(1))];
        items.retain(|i| !matches!(i, ShapeItem::Node(v) if v.is_empty()));
        items.push(ShapeItem::Channel);
        Self { root: items }
    }

    /// Decision tree for degree `d_v`: `d_v` check leaves plus the channel.
    /// For `d_v = 6` this is `((c c c)(c c c) L)`.
    pub fn default_decision(d_v: usize) -> Self {
        if d_v == 6 {
            return "((c c c)(c c c) L)".parse().expect("static shape");
        }
        Self {
            root: vec![pair_up(d_v), ShapeItem::Channel],
        }
    }

    /// A single LUT over the channel leaf.
    pub fn channel_only() -> Self {
        Self {
            root: vec![ShapeItem::Channel],
        }
    }

    /// Checks the leaf counts of a VN (`checks = d_v - 1`) or decision
    /// (`checks = d_v`) tree.
    pub fn expect_leaves(&self, checks: usize) -> Result<()> {
        if self.channel_leaves() != 1 || self.check_leaves() != checks {
            return Err(Error::Shape(format!(
                "shape {self} has {} channel and {} check leaves; expected 1 and {checks}",
                self.channel_leaves(),
                self.check_leaves()
            )));
        }
        Ok(())
    }
}

fn count(items: &[ShapeItem], pred: &dyn Fn(&ShapeItem) -> bool) -> usize {
    items
        .iter()
        .map(|i| match i {
            ShapeItem::Node(c) => count(c, pred),
            other => usize::from(pred(other)),
        })
        .sum()
}

/// Balanced pairing of `k` check leaves, returned as one item.
fn pair_up(k: usize) -> ShapeItem {
    let mut level: Vec<ShapeItem> = (0..k).map(|_| ShapeItem::Check).collect();
    while level.len() > 1 {
        let mut next = Vec::new();
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(ShapeItem::Node(vec![a, b])),
                None => next.push(a),
            }
        }
        level = next;
    }
    level.pop().unwrap_or(ShapeItem::Node(Vec::new()))
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_items(f: &mut fmt::Formatter<'_>, items: &[ShapeItem]) -> fmt::Result {
            f.write_str("(")?;
            for (i, item) in items.iter().enumerate() {
                let prev_leaf = i > 0 && !matches!(items[i - 1], ShapeItem::Node(_));
                match item {
                    ShapeItem::Node(c) => write_items(f, c)?,
                    leaf => {
                        if prev_leaf {
                            f.write_str(" ")?;
                        }
                        f.write_str(if *leaf == ShapeItem::Channel { "L" } else { "c" })?;
                    }
                }
                if matches!(item, ShapeItem::Node(_))
                    && items.get(i + 1).is_some_and(|n| !matches!(n, ShapeItem::Node(_)))
                {
                    f.write_str(" ")?;
                }
            }
            f.write_str(")")
        }
        write_items(f, &self.root)
    }
}

impl FromStr for TreeShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        fn node(chars: &[char], pos: &mut usize, skip: &dyn Fn(&mut usize)) -> Result<Vec<ShapeItem>> {
            if chars.get(*pos) != Some(&'(') {
                return Err(Error::Shape(format!("expected '(' at offset {pos}")));
            }
            *pos += 1;
            let mut items = Vec::new();
            loop {
                skip(pos);
                match chars.get(*pos) {
                    Some('(') => items.push(ShapeItem::Node(node(chars, pos, skip)?)),
                    Some('c') => {
                        items.push(ShapeItem::Check);
                        *pos += 1;
                    }
                    Some('L') => {
                        items.push(ShapeItem::Channel);
                        *pos += 1;
                    }
                    Some(')') => {
                        *pos += 1;
                        if items.is_empty() {
                            return Err(Error::Shape("empty group '()'".into()));
                        }
                        return Ok(items);
                    }
                    Some(ch) => {
                        return Err(Error::Shape(format!("unexpected {ch:?} at offset {pos}")))
                    }
                    None => return Err(Error::Shape("unbalanced parentheses".into())),
                }
            }
        }
        skip_ws(&mut pos);
        let root = node(&chars, &mut pos, &skip_ws)?;
        skip_ws(&mut pos);
        if pos != chars.len() {
            return Err(Error::Shape(format!("trailing input at offset {pos}")));
        }
        Ok(Self { root })
    }
}

impl Serialize for TreeShape {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TreeShape {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One look-up table over a mixed-radix input index (last input fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LutTable {
    pub input_arities: Vec<usize>,
    pub output_size: usize,
    pub table: Vec<u8>,
    /// `I(output; x)` of the design distribution, bits.
    pub achieved_mi: f64,
    /// `I(inputs; x)` of the design distribution, bits.
    pub input_mi: f64,
    /// Output labels that received no probability mass in the design.
    #[serde(default)]
    pub void_levels: Vec<usize>,
}

impl LutTable {
    pub fn identity(size: usize) -> Self {
        Self {
            input_arities: vec![size],
            output_size: size,
            table: (0..size as u8).collect(),
            achieved_mi: f64::NAN,
            input_mi: f64::NAN,
            void_levels: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n: usize = self.input_arities.iter().product();
        if self.table.len() != n {
            return Err(Error::Tree(format!(
                "table has {} entries, arities {:?} need {n}",
                self.table.len(),
                self.input_arities
            )));
        }
        if self.output_size == 0 || self.output_size > 256 {
            return Err(Error::Tree(format!("bad output size {}", self.output_size)));
        }
        if let Some(&v) = self.table.iter().find(|&&v| usize::from(v) >= self.output_size) {
            return Err(Error::LabelRange {
                label: v.into(),
                size: self.output_size,
            });
        }
        Ok(())
    }

    /// Mixed-radix index of an input tuple.
    pub fn index(&self, inputs: &[usize]) -> usize {
        inputs
            .iter()
            .zip(&self.input_arities)
            .fold(0, |acc, (&k, &a)| acc * a + k)
    }

    pub fn lookup(&self, inputs: &[usize]) -> usize {
        self.table[self.index(inputs)].into()
    }

    /// Mirroring every input mirrors the output.
    pub fn is_mirror_symmetric(&self) -> bool {
        let map: Vec<usize> = self.table.iter().map(|&v| v.into()).collect();
        quantizer::is_mirror_symmetric(&map, self.output_size)
    }

    /// Plain-text dump: a header line `lut <output_size> <arity>...`, then one
    /// output label per line in mixed-radix order, last input fastest.
    pub fn to_dump(&self) -> String {
        let mut s = format!("lut {}", self.output_size);
        for a in &self.input_arities {
            s.push_str(&format!(" {a}"));
        }
        s.push('\n');
        for v in &self.table {
            s.push_str(&format!("{v}\n"));
        }
        s
    }

    /// Inverse of [`LutTable::to_dump`]; design diagnostics are left as NaN.
    pub fn from_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines.next().unwrap_or_default().split_whitespace().collect();
        let bad = |msg: String| Error::Tree(format!("table dump: {msg}"));
        if header.len() < 3 || header[0] != "lut" {
            return Err(bad("expected header 'lut <output_size> <arity>...'".into()));
        }
        let nums = header[1..]
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| bad(format!("invalid header field {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let table = lines
            .map(|l| l.trim().parse::<u8>().map_err(|_| bad(format!("invalid label {l:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let t = Self {
            input_arities: nums[1..].to_vec(),
            output_size: nums[0],
            table,
            achieved_mi: f64::NAN,
            input_mi: f64::NAN,
            void_levels: Vec::new(),
        };
        t.validate()?;
        Ok(t)
    }
}

/// Input of a tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeInput {
    Channel,
    /// Check-message slot, numbered left to right in the shape.
    Check(usize),
    /// Output of an earlier node.
    Node(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LutNode {
    pub inputs: Vec<NodeInput>,
    pub table: LutTable,
}

/// Topologically ordered LUT hierarchy; the last node is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LutTree {
    pub shape: TreeShape,
    pub channel_size: usize,
    pub message_size: usize,
    pub check_slots: usize,
    pub nodes: Vec<LutNode>,
}

/// Node wiring of a shape, children before parents.
fn compile(shape: &TreeShape) -> Result<Vec<Vec<NodeInput>>> {
    fn walk(items: &[ShapeItem], slot: &mut usize, out: &mut Vec<Vec<NodeInput>>) -> usize {
        let inputs = items
            .iter()
            .map(|i| match i {
                ShapeItem::Channel => NodeInput::Channel,
                ShapeItem::Check => {
                    *slot += 1;
                    NodeInput::Check(*slot - 1)
                }
                ShapeItem::Node(c) => NodeInput::Node(walk(c, slot, out)),
            })
            .collect();
        out.push(inputs);
        out.len() - 1
    }
    let mut out = Vec::new();
    let mut slot = 0;
    walk(shape.root(), &mut slot, &mut out);
    if out.len() > MAX_TREE_NODES {
        return Err(Error::Shape(format!(
            "{} LUT nodes exceed the limit of {MAX_TREE_NODES}",
            out.len()
        )));
    }
    Ok(out)
}

impl LutTree {
    pub fn root(&self) -> &LutNode {
        self.nodes.last().expect("tree has a root")
    }

    pub fn output_size(&self) -> usize {
        self.root().table.output_size
    }

    fn input_size(&self, input: NodeInput) -> usize {
        match input {
            NodeInput::Channel => self.channel_size,
            NodeInput::Check(_) => self.message_size,
            NodeInput::Node(i) => self.nodes[i].table.output_size,
        }
    }

    /// Structural checks: acyclic wiring, each leaf used once, arities match.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() || self.nodes.len() > MAX_TREE_NODES {
            return Err(Error::Tree(format!("bad node count {}", self.nodes.len())));
        }
        let mut used_checks = vec![false; self.check_slots];
        let mut used_nodes = vec![false; self.nodes.len()];
        let mut channels = 0;
        for (i, node) in self.nodes.iter().enumerate() {
            node.table.validate()?;
            if node.inputs.len() != node.table.input_arities.len() {
                return Err(Error::Tree(format!("node {i}: input count mismatch")));
            }
            for (&inp, &arity) in node.inputs.iter().zip(&node.table.input_arities) {
                match inp {
                    NodeInput::Channel => channels += 1,
                    NodeInput::Check(s) => {
                        if s >= self.check_slots || std::mem::replace(&mut used_checks[s], true) {
                            return Err(Error::Tree(format!("node {i}: bad check slot {s}")));
                        }
                    }
                    NodeInput::Node(j) => {
                        if j >= i || std::mem::replace(&mut used_nodes[j], true) {
                            return Err(Error::Tree(format!("node {i}: bad child {j}")));
                        }
                    }
                }
                if self.input_size(inp) != arity {
                    return Err(Error::Tree(format!(
                        "node {i}: arity {arity} does not match input size {}",
                        self.input_size(inp)
                    )));
                }
            }
        }
        if channels != 1 || used_checks.iter().any(|u| !u) {
            return Err(Error::Tree("every leaf must be used exactly once".into()));
        }
        if used_nodes[..self.nodes.len() - 1].iter().any(|u| !u) {
            return Err(Error::Tree("tree has more than one root".into()));
        }
        Ok(())
    }

    /// Evaluates the tree by table look-ups only.
    #[inline]
    pub fn eval(&self, channel: u8, checks: &[u8]) -> u8 {
        let mut out = [0u8; MAX_TREE_NODES];
        for (i, node) in self.nodes.iter().enumerate() {
            let mut idx = 0usize;
            for (&inp, &arity) in node.inputs.iter().zip(&node.table.input_arities) {
                let label = match inp {
                    NodeInput::Channel => channel,
                    NodeInput::Check(s) => checks[s],
                    NodeInput::Node(j) => out[j],
                };
                idx = idx * arity + usize::from(label);
            }
            out[i] = node.table.table[idx];
        }
        out[self.nodes.len() - 1]
    }

    /// Like [`LutTree::eval`] but rejects out-of-range labels.
    pub fn eval_checked(&self, channel: usize, checks: &[usize]) -> Result<usize> {
        if channel >= self.channel_size {
            return Err(Error::LabelRange {
                label: channel,
                size: self.channel_size,
            });
        }
        if checks.len() != self.check_slots {
            return Err(Error::Length {
                expected: self.check_slots,
                got: checks.len(),
            });
        }
        if let Some(&c) = checks.iter().find(|&&c| c >= self.message_size) {
            return Err(Error::LabelRange {
                label: c,
                size: self.message_size,
            });
        }
        let labels: Vec<u8> = checks.iter().map(|&c| c as u8).collect();
        Ok(self.eval(channel as u8, &labels).into())
    }

    /// Distribution of the root output when the channel leaf follows
    /// `channel` and every check leaf independently follows `check`.
    pub fn push(&self, channel: &ConditionalPmf, check: &ConditionalPmf) -> Result<ConditionalPmf> {
        self.check_leaf_sizes(channel, check)?;
        let mut outs: Vec<ConditionalPmf> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let joint = joint_of(&node.inputs, channel, check, &outs)?;
            let map: Vec<usize> = node.table.table.iter().map(|&v| v.into()).collect();
            outs.push(joint.push_forward(&map, node.table.output_size)?);
        }
        Ok(outs.pop().expect("tree has a root"))
    }

    fn check_leaf_sizes(&self, channel: &ConditionalPmf, check: &ConditionalPmf) -> Result<()> {
        if channel.size() != self.channel_size {
            return Err(Error::Tree(format!(
                "channel distribution has {} symbols, tree expects {}",
                channel.size(),
                self.channel_size
            )));
        }
        if self.check_slots > 0 && check.size() != self.message_size {
            return Err(Error::Tree(format!(
                "check distribution has {} symbols, tree expects {}",
                check.size(),
                self.message_size
            )));
        }
        Ok(())
    }
}

/// Product distribution over a node's inputs, mixed-radix flattened.
pub fn joint_of(
    inputs: &[NodeInput],
    channel: &ConditionalPmf,
    check: &ConditionalPmf,
    node_outputs: &[ConditionalPmf],
) -> Result<ConditionalPmf> {
    let dists: Vec<&ConditionalPmf> = inputs
        .iter()
        .map(|&i| match i {
            NodeInput::Channel => channel,
            NodeInput::Check(_) => check,
            NodeInput::Node(j) => &node_outputs[j],
        })
        .collect();
    product(&dists)
}

/// Product of independent conditional distributions (given the same bit).
pub fn product(dists: &[&ConditionalPmf]) -> Result<ConditionalPmf> {
    let mut p0 = vec![1.0];
    let mut p1 = vec![1.0];
    for d in dists {
        let mut q0 = Vec::with_capacity(p0.len() * d.size());
        let mut q1 = Vec::with_capacity(p1.len() * d.size());
        for (&a0, &a1) in p0.iter().zip(&p1) {
            for k in 0..d.size() {
                q0.push(a0 * d.p0()[k]);
                q1.push(a1 * d.p1()[k]);
            }
        }
        p0 = q0;
        p1 = q1;
    }
    ConditionalPmf::normalized(p0, p1)
}

/// Designs every table of `shape` bottom-up. Internal nodes quantize to
/// `message_size` labels and the root to `root_size`.
fn design_tree(
    shape: &TreeShape,
    channel: &ConditionalPmf,
    check: &ConditionalPmf,
    message_size: usize,
    root_size: usize,
) -> Result<LutTree> {
    let wiring = compile(shape)?;
    let n_nodes = wiring.len();
    let mut nodes = Vec::with_capacity(n_nodes);
    let mut outs: Vec<ConditionalPmf> = Vec::with_capacity(n_nodes);
    for (i, inputs) in wiring.into_iter().enumerate() {
        let out_size = if i + 1 == n_nodes { root_size } else { message_size };
        let joint = joint_of(&inputs, channel, check, &outs)?;
        let q = design_quantizer(&joint, out_size, Symmetry::Mirror)?;
        let input_arities = inputs
            .iter()
            .map(|&inp| match inp {
                NodeInput::Channel => channel.size(),
                NodeInput::Check(_) => check.size(),
                NodeInput::Node(j) => outs[j].size(),
            })
            .collect();
        nodes.push(LutNode {
            inputs,
            table: LutTable {
                input_arities,
                output_size: out_size,
                table: q.map.iter().map(|&v| v as u8).collect(),
                achieved_mi: q.achieved_mi,
                input_mi: q.input_mi,
                void_levels: q.void_levels,
            },
        });
        outs.push(q.output);
    }
    let tree = LutTree {
        shape: shape.clone(),
        channel_size: channel.size(),
        message_size,
        check_slots: shape.check_leaves(),
        nodes,
    };
    tree.validate()?;
    Ok(tree)
}

/// Designs the LUT tree computing one VN output. `check` is the CN-to-VN
/// message distribution of the current iteration.
pub fn design_vn_tree(
    channel: &ConditionalPmf,
    check: &ConditionalPmf,
    shape: &TreeShape,
    out_size: usize,
) -> Result<LutTree> {
    if shape.channel_leaves() != 1 {
        return Err(Error::Shape(format!("shape {shape} needs exactly one channel leaf")));
    }
    design_tree(shape, channel, check, out_size, out_size)
}

/// Binary-output LUT tree for the final decision.
///
/// The root uses the same label convention as every other table: label 0
/// collects the negative-LLR inputs, so the decoded bit is `1 - label`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree(pub LutTree);

impl DecisionTree {
    #[inline]
    pub fn decide(&self, channel: u8, checks: &[u8]) -> u8 {
        1 - self.0.eval(channel, checks)
    }

    pub fn tree(&self) -> &LutTree {
        &self.0
    }
}

pub fn design_decision_tree(
    channel: &ConditionalPmf,
    check_final: &ConditionalPmf,
    shape: &TreeShape,
    message_size: usize,
) -> Result<DecisionTree> {
    if shape.channel_leaves() != 1 {
        return Err(Error::Shape(format!("shape {shape} needs exactly one channel leaf")));
    }
    Ok(DecisionTree(design_tree(
        shape,
        channel,
        check_final,
        message_size,
        2,
    )?))
}

/// A tree instance with its check slots bound to concrete input ids.
#[derive(Debug, Clone)]
pub struct BoundTree<'a> {
    pub tree: &'a LutTree,
    /// `bindings[slot]` is the input id feeding check slot `slot`.
    pub bindings: Vec<usize>,
}

/// Bindings of the `d_v` per-output trees of one VN: the tree for output `j`
/// reads the other `d_v - 1` inputs in ascending order.
pub fn vn_instances(tree: &LutTree, d_v: usize) -> Vec<BoundTree<'_>> {
    (0..d_v)
        .map(|j| BoundTree {
            tree,
            bindings: (0..d_v).filter(|&k| k != j).collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SharedInput {
    Channel,
    Input(usize),
    Node(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SharedNode {
    pub table_id: usize,
    pub inputs: Vec<SharedInput>,
}

/// Deduplicated pool of LUT nodes across several bound trees.
#[derive(Debug, Clone, Default)]
pub struct SharedTreeSet {
    /// Distinct table contents referenced by `nodes`.
    pub tables: Vec<LutTable>,
    pub nodes: Vec<SharedNode>,
    /// Root node of every input tree, in input order.
    pub roots: Vec<usize>,
    /// Node count before sharing.
    pub total_nodes: usize,
}

impl SharedTreeSet {
    pub fn unique_nodes(&self) -> usize {
        self.nodes.len()
    }
}

/// Merges structurally identical nodes (same table content, same wiring over
/// the same bound inputs).
pub fn share_tables(trees: &[BoundTree<'_>]) -> SharedTreeSet {
    let mut set = SharedTreeSet::default();
    let mut table_ids: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut node_ids: HashMap<SharedNode, usize> = HashMap::new();
    for bt in trees {
        let mut local = Vec::with_capacity(bt.tree.nodes.len());
        for node in &bt.tree.nodes {
            set.total_nodes += 1;
            let key = table_key(&node.table);
            let next = set.tables.len();
            let table_id = *table_ids.entry(key).or_insert_with(|| {
                set.tables.push(node.table.clone());
                next
            });
            let inputs = node
                .inputs
                .iter()
                .map(|&i| match i {
                    NodeInput::Channel => SharedInput::Channel,
                    NodeInput::Check(s) => SharedInput::Input(bt.bindings[s]),
                    NodeInput::Node(j) => SharedInput::Node(local[j]),
                })
                .collect();
            let shared = SharedNode { table_id, inputs };
            let next = set.nodes.len();
            let id = *node_ids.entry(shared.clone()).or_insert_with(|| {
                set.nodes.push(shared);
                next
            });
            local.push(id);
        }
        set.roots.push(*local.last().expect("tree has a root"));
    }
    set
}

fn table_key(t: &LutTable) -> Vec<u8> {
    let mut key = Vec::with_capacity(t.table.len() + 4 * t.input_arities.len() + 4);
    for &a in &t.input_arities {
        key.extend_from_slice(&(a as u32).to_le_bytes());
    }
    key.extend_from_slice(&(t.output_size as u32).to_le_bytes());
    key.extend_from_slice(&t.table);
    key
}
