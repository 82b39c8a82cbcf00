//! Mutual-information-maximizing deterministic quantizers.
//!
//! For a binary input, an MI-optimal deterministic quantizer can always be
//! found among the partitions that are contiguous once the input atoms are
//! sorted by LLR. [`design_quantizer`] sorts the atoms, tabulates cumulative
//! masses, and runs a dynamic program over the cell boundaries with cost
//! `O(n^2 K)` for `n` atoms and `K` output levels.
//!
//! Two flavours exist. [`Symmetry::Free`] returns a global optimum and only
//! prefers the mirror-symmetric solution among ties. [`Symmetry::Mirror`]
//! restricts the search to partitions that are symmetric about LLR 0, which is
//! what the decoder needs: output labels below `K/2` are then guaranteed to be
//! negative, and mirrored inputs map to mirrored outputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{self, mi_term, mutual_information, ConditionalPmf};

/// Largest asymmetry accepted before a joint is symmetrized.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// A free optimum must beat the best symmetric partition by more than this
/// (in bits) before the asymmetric one is returned.
const TIE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// Any contiguous partition; symmetric solutions win ties.
    Free,
    /// Partitions symmetric about LLR 0 only (needs even `n` and `K`).
    Mirror,
}

/// Result of one quantizer design.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantizer {
    /// `map[atom]` is the output label.
    pub map: Vec<usize>,
    pub out_size: usize,
    /// Distribution of the output labels.
    pub output: ConditionalPmf,
    /// `I(output; x)` in bits.
    pub achieved_mi: f64,
    /// `I(input; x)` in bits.
    pub input_mi: f64,
    /// Output labels carrying no mass.
    pub void_levels: Vec<usize>,
    /// True when the returned partition is mirror symmetric.
    pub symmetric: bool,
}

/// Atom order used by the DP: ascending LLR, ties by atom index. Void atoms
/// are placed at LLR 0.
pub fn llr_order(joint: &ConditionalPmf) -> Vec<usize> {
    let llrs: Vec<f64> = prob::llr_labels(joint)
        .into_iter()
        .map(|l| l.unwrap_or(0.0))
        .collect();
    let mut order: Vec<usize> = (0..joint.size()).collect();
    order.sort_by(|&a, &b| llrs[a].total_cmp(&llrs[b]).then(a.cmp(&b)));
    order
}

struct Prefix {
    s0: Vec<f64>,
    s1: Vec<f64>,
}

impl Prefix {
    fn new(joint: &ConditionalPmf, order: &[usize]) -> Self {
        let mut s0 = Vec::with_capacity(order.len() + 1);
        let mut s1 = Vec::with_capacity(order.len() + 1);
        let (mut a, mut b) = (0.0, 0.0);
        s0.push(0.0);
        s1.push(0.0);
        for &k in order {
            a += joint.p0()[k];
            b += joint.p1()[k];
            s0.push(a);
            s1.push(b);
        }
        Self { s0, s1 }
    }

    /// MI contribution of the cell holding sorted positions `lo..hi`.
    #[inline]
    fn cost(&self, lo: usize, hi: usize) -> f64 {
        mi_term(
            (self.s0[hi] - self.s0[lo]).max(0.0),
            (self.s1[hi] - self.s1[lo]).max(0.0),
        )
    }
}

/// Best split of sorted positions `start..end` into `cells` nonempty
/// contiguous cells. Returns the MI and the cell end positions.
fn partition_dp(prefix: &Prefix, start: usize, end: usize, cells: usize) -> (f64, Vec<usize>) {
    let n = end - start;
    debug_assert!(cells >= 1 && cells <= n);
    // best[k][j]: best value for the first j atoms of the range in k+1 cells
    let mut best = vec![vec![f64::NEG_INFINITY; n + 1]; cells];
    let mut arg = vec![vec![0usize; n + 1]; cells];
    for j in 1..=n {
        best[0][j] = prefix.cost(start, start + j);
    }
    for k in 1..cells {
        // k+1 cells need at least k+1 atoms; leave room for the remaining cells
        for j in (k + 1)..=(n - (cells - 1 - k)) {
            let mut v = f64::NEG_INFINITY;
            let mut a = k;
            for i in k..j {
                let c = best[k - 1][i] + prefix.cost(start + i, start + j);
                if c > v {
                    v = c;
                    a = i;
                }
            }
            best[k][j] = v;
            arg[k][j] = a;
        }
    }
    let mut ends = vec![0usize; cells];
    let mut j = n;
    for k in (0..cells).rev() {
        ends[k] = start + j;
        j = if k > 0 { arg[k][j] } else { 0 };
    }
    (best[cells - 1][n], ends)
}

fn labels_from_ends(order: &[usize], start: usize, ends: &[usize], first_label: usize, map: &mut [usize]) {
    let mut lo = start;
    for (c, &hi) in ends.iter().enumerate() {
        for &atom in &order[lo..hi] {
            map[atom] = first_label + c;
        }
        lo = hi;
    }
}

/// Symmetric design: the middle boundary sits at `n/2` and the upper half is
/// partitioned into `K/2` cells, mirrored onto the lower half.
fn mirror_design(prefix: &Prefix, order: &[usize], out_size: usize) -> (f64, Vec<usize>) {
    let n = order.len();
    let half = n / 2;
    let cells = (out_size / 2).min(half);
    let (v, ends) = partition_dp(prefix, half, n, cells);
    let mut map = vec![0usize; n];
    labels_from_ends(order, half, &ends, out_size / 2, &mut map);
    for p in 0..half {
        // sorted position p holds the mirror of the atom at position n-1-p
        map[order[p]] = out_size - 1 - map[order[n - 1 - p]];
    }
    (2.0 * v, map)
}

fn free_design(prefix: &Prefix, order: &[usize], out_size: usize) -> (f64, Vec<usize>) {
    let n = order.len();
    let cells = out_size.min(n);
    let (v, ends) = partition_dp(prefix, 0, n, cells);
    let mut map = vec![0usize; n];
    labels_from_ends(order, 0, &ends, (out_size - cells) / 2, &mut map);
    (v, map)
}

/// Designs the MI-maximizing deterministic map from the atoms of `joint` to
/// `out_size` labels.
///
/// The joint must be symmetric (`p0[k] = p1[n-1-k]`) within
/// [`SYMMETRY_TOL`]; it is symmetrized exactly before the design. When
/// `out_size` exceeds the number of atoms, only `n` levels are used and the
/// rest are reported in `void_levels`.
pub fn design_quantizer(joint: &ConditionalPmf, out_size: usize, symmetry: Symmetry) -> Result<Quantizer> {
    let n = joint.size();
    if out_size < 2 {
        return Err(Error::Config(format!("out_size must be >= 2, got {out_size}")));
    }
    if out_size > 256 {
        return Err(Error::Config(format!("out_size {out_size} exceeds 256 labels")));
    }
    let deviation = joint.symmetry_deviation();
    if deviation > SYMMETRY_TOL {
        return Err(Error::Asymmetric { deviation });
    }
    let mirror_ok = n.is_multiple_of(2) && out_size.is_multiple_of(2);
    if symmetry == Symmetry::Mirror && !mirror_ok {
        return Err(Error::Config(format!(
            "mirror-symmetric design needs even sizes, got {n} atoms and {out_size} levels"
        )));
    }
    let joint = prob::symmetrize(joint);
    let order = llr_order(&joint);
    let prefix = Prefix::new(&joint, &order);

    let (map, symmetric) = match symmetry {
        Symmetry::Mirror => (mirror_design(&prefix, &order, out_size).1, true),
        Symmetry::Free => {
            let (free_v, free_map) = free_design(&prefix, &order, out_size);
            if mirror_ok {
                let (sym_v, sym_map) = mirror_design(&prefix, &order, out_size);
                if sym_v >= free_v - TIE_TOL {
                    (sym_map, true)
                } else {
                    (free_map, false)
                }
            } else {
                (free_map, false)
            }
        }
    };

    let mut output = joint.push_forward(&map, out_size)?;
    if symmetric {
        output = prob::symmetrize(&output);
    }
    let void_levels = (0..out_size).filter(|&k| output.is_void(k)).collect();
    Ok(Quantizer {
        achieved_mi: mutual_information(&output),
        input_mi: mutual_information(&joint),
        map,
        out_size,
        output,
        void_levels,
        symmetric,
    })
}

/// MI of a uniform-width LLR quantizer with `out_size` levels, used as a
/// baseline. Cells have width `2 L / K` over `[-L, L]`, where `L` is the
/// largest finite atom LLR magnitude; atoms beyond fall in the outer cells.
/// For even `K` zero-LLR atoms are split by sorted position, like the DP.
pub fn uniform_baseline_mi(joint: &ConditionalPmf, out_size: usize) -> f64 {
    let joint = prob::symmetrize(joint);
    let n = joint.size();
    let llrs: Vec<f64> = prob::llr_labels(&joint)
        .into_iter()
        .map(|l| l.unwrap_or(0.0))
        .collect();
    let lmax = llrs
        .iter()
        .filter(|v| v.is_finite())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let lmax = if lmax > 0.0 { lmax } else { 1.0 };
    let k = out_size;
    let width = 2.0 * lmax / k as f64;
    let order = llr_order(&joint);
    let mut pos = vec![0usize; n];
    for (p, &a) in order.iter().enumerate() {
        pos[a] = p;
    }
    let map: Vec<usize> = (0..n)
        .map(|a| {
            let l = llrs[a];
            if k.is_multiple_of(2) {
                let upper = l > 0.0 || (l == 0.0 && pos[a] >= n / 2);
                let steps = ((l.abs() / width).floor() as usize).min(k / 2 - 1);
                if upper {
                    k / 2 + steps
                } else {
                    k / 2 - 1 - steps
                }
            } else {
                (((l + lmax) / width).floor().max(0.0) as usize).min(k - 1)
            }
        })
        .collect();
    joint
        .push_forward(&map, k)
        .map(|q| mutual_information(&q))
        .unwrap_or(0.0)
}

/// Checks that `map` is non-decreasing along the LLR order of `joint`.
pub fn is_contiguous(joint: &ConditionalPmf, map: &[usize]) -> bool {
    let order = llr_order(&prob::symmetrize(joint));
    order.windows(2).all(|w| map[w[0]] <= map[w[1]])
}

/// Checks `map[n-1-k] = K-1-map[k]` for every atom.
pub fn is_mirror_symmetric(map: &[usize], out_size: usize) -> bool {
    let n = map.len();
    (0..n).all(|k| map[n - 1 - k] + map[k] == out_size - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(p0: &[f64]) -> ConditionalPmf {
        ConditionalPmf::from_symmetric_half(p0.to_vec()).unwrap()
    }

    #[test]
    fn identity_when_no_compression() {
        let d = sym(&[0.05, 0.15, 0.3, 0.5]);
        let q = design_quantizer(&d, 4, Symmetry::Free).unwrap();
        assert_eq!(q.map, vec![0, 1, 2, 3]);
        assert!((q.achieved_mi - mutual_information(&d)).abs() < 1e-15);

        let d = sym(&[0.2, 0.8]);
        let q = design_quantizer(&d, 2, Symmetry::Mirror).unwrap();
        assert_eq!(q.map, vec![0, 1]);
        assert!((q.achieved_mi - mutual_information(&d)).abs() < 1e-15);
    }

    #[test]
    fn sign_split_for_two_levels() {
        let d = sym(&[0.02, 0.08, 0.2, 0.7]);
        let q = design_quantizer(&d, 2, Symmetry::Mirror).unwrap();
        assert_eq!(q.map, vec![0, 0, 1, 1]);
        assert!(is_mirror_symmetric(&q.map, 2));
    }

    #[test]
    fn rejects_asymmetric() {
        let d = ConditionalPmf::new(vec![0.7, 0.3], vec![0.4, 0.6]).unwrap();
        assert!(matches!(
            design_quantizer(&d, 2, Symmetry::Free),
            Err(Error::Asymmetric { .. })
        ));
    }

    #[test]
    fn more_levels_than_atoms() {
        let d = sym(&[0.3, 0.7]);
        let q = design_quantizer(&d, 4, Symmetry::Mirror).unwrap();
        assert_eq!(q.map, vec![1, 2]);
        assert_eq!(q.void_levels, vec![0, 3]);
    }

    #[test]
    fn asymmetric_optimum_is_found_in_free_mode() {
        // A heavy, nearly uninformative pair near LLR 0 plus a reliable tail:
        // the best 2-level map isolates one tail (a Z channel) rather than
        // splitting at LLR 0.
        let d = sym(&[0.0005, 0.24, 0.26, 0.4995]);
        let free = design_quantizer(&d, 2, Symmetry::Free).unwrap();
        let mirror = design_quantizer(&d, 2, Symmetry::Mirror).unwrap();
        assert!(!free.symmetric);
        assert!(free.achieved_mi > mirror.achieved_mi + 1e-3);
    }

    #[test]
    fn baseline_never_beats_design() {
        let d = sym(&[0.01, 0.03, 0.06, 0.1, 0.15, 0.2, 0.2, 0.25]);
        for k in [2, 4, 6] {
            let q = design_quantizer(&d, k, Symmetry::Mirror).unwrap();
            assert!(q.achieved_mi + 1e-15 >= uniform_baseline_mi(&d, k));
            assert!(is_contiguous(&d, &q.map));
        }
    }
}
