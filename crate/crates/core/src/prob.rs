//! Binary-input conditional distributions over finite, labeled alphabets.
//!
//! A [`ConditionalPmf`] holds `p(k | x = 0)` and `p(k | x = 1)` for every
//! symbol `k`. Mutual information is reported in bits under a uniform prior
//! on `x`; LLRs are natural-log `ln p(k|0) - ln p(k|1)`, so a positive value
//! favors bit 0.
//!
//! Symbols are ordered so that label `k` mirrors label `size - 1 - k`. For a
//! symmetric distribution this means `p(k|0) = p(size-1-k|1)` and the sign of
//! a message can be read directly from its label: labels below `size / 2`
//! carry negative LLRs.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `sum(p) == 1` accepted by [`ConditionalPmf::new`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Total mass below which a symbol is considered void under both hypotheses.
pub const VOID_MASS: f64 = 1e-15;

/// Tolerance on the mirror property of LLR labels.
pub const LLR_SYMMETRY_TOL: f64 = 1e-9;

/// Ordered, sign-symmetric message alphabet with per-label LLR values.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageAlphabet {
    llr_values: Vec<f64>,
}

impl MessageAlphabet {
    /// Builds an alphabet, checking even size, strictly increasing LLRs and
    /// the mirror property `llr[k] = -llr[size - 1 - k]`.
    pub fn new(llr_values: Vec<f64>) -> Result<Self> {
        let n = llr_values.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Distribution(format!(
                "alphabet size must be even and positive, got {n}"
            )));
        }
        if llr_values.iter().any(|v| v.is_nan()) {
            return Err(Error::Distribution("alphabet contains a void LLR".into()));
        }
        if llr_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Distribution(
                "alphabet LLRs must be strictly increasing".into(),
            ));
        }
        for k in 0..n / 2 {
            let (a, b) = (llr_values[k], llr_values[n - 1 - k]);
            let ok = if a.is_infinite() || b.is_infinite() {
                a == -b
            } else {
                (a + b).abs() <= LLR_SYMMETRY_TOL
            };
            if !ok {
                return Err(Error::Distribution(format!(
                    "alphabet LLRs not mirror symmetric at label {k}: {a} vs {b}"
                )));
            }
        }
        Ok(Self { llr_values })
    }

    pub fn size(&self) -> usize {
        self.llr_values.len()
    }

    pub fn llr_values(&self) -> &[f64] {
        &self.llr_values
    }

    /// True when `label` carries a negative LLR (favors bit 1).
    pub fn is_negative(&self, label: usize) -> bool {
        is_negative_label(label, self.size())
    }
}

/// Sign-from-label rule for a symmetric alphabet of `size` labels.
#[inline]
pub fn is_negative_label(label: usize, size: usize) -> bool {
    label < size / 2
}

/// Mirror of `label` in an alphabet of `size` labels.
#[inline]
pub fn mirror_label(label: usize, size: usize) -> usize {
    size - 1 - label
}

/// Pair of conditional probability vectors `p(k | x=0)`, `p(k | x=1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalPmf {
    p0: Vec<f64>,
    p1: Vec<f64>,
}

impl ConditionalPmf {
    pub fn new(p0: Vec<f64>, p1: Vec<f64>) -> Result<Self> {
        if p0.len() != p1.len() {
            return Err(Error::Length {
                expected: p0.len(),
                got: p1.len(),
            });
        }
        if p0.is_empty() {
            return Err(Error::Distribution("empty alphabet".into()));
        }
        for (name, p) in [("p0", &p0), ("p1", &p1)] {
            if p.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::Distribution(format!(
                    "{name} has a negative or non-finite entry"
                )));
            }
            let s: f64 = p.iter().sum();
            if (s - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::Distribution(format!("{name} sums to {s}")));
            }
        }
        Ok(Self { p0, p1 })
    }

    /// Like [`ConditionalPmf::new`] but rescales each vector to unit sum
    /// first. Intended for numerically produced distributions.
    pub fn normalized(mut p0: Vec<f64>, mut p1: Vec<f64>) -> Result<Self> {
        for p in [&mut p0, &mut p1] {
            let s: f64 = p.iter().sum();
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::Distribution(format!("cannot normalize mass {s}")));
            }
            p.iter_mut().for_each(|v| *v /= s);
        }
        Self::new(p0, p1)
    }

    /// Builds the symmetric distribution whose `x = 0` branch is `p0`.
    pub fn from_symmetric_half(p0: Vec<f64>) -> Result<Self> {
        let p1 = p0.iter().rev().copied().collect();
        Self::new(p0, p1)
    }

    pub fn size(&self) -> usize {
        self.p0.len()
    }

    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    pub fn p1(&self) -> &[f64] {
        &self.p1
    }

    /// `p(k | x)` for `x` in `{0, 1}`.
    pub fn prob(&self, k: usize, x: u8) -> f64 {
        if x == 0 {
            self.p0[k]
        } else {
            self.p1[k]
        }
    }

    /// True if symbol `k` has (numerically) no mass under either hypothesis.
    pub fn is_void(&self, k: usize) -> bool {
        self.p0[k] + self.p1[k] < VOID_MASS
    }

    /// Alphabet of LLR labels for this distribution; fails if the LLRs do not
    /// form a valid sign-symmetric alphabet (e.g. void symbols present).
    pub fn alphabet(&self) -> Result<MessageAlphabet> {
        let llrs = llr_labels(self)
            .into_iter()
            .map(|v| v.unwrap_or(f64::NAN))
            .collect();
        MessageAlphabet::new(llrs)
    }

    /// Distribution of `map(symbol)` over an output alphabet of `out_size`.
    pub fn push_forward(&self, map: &[usize], out_size: usize) -> Result<ConditionalPmf> {
        if map.len() != self.size() {
            return Err(Error::Length {
                expected: self.size(),
                got: map.len(),
            });
        }
        let mut q0 = vec![0.0; out_size];
        let mut q1 = vec![0.0; out_size];
        for (k, &j) in map.iter().enumerate() {
            if j >= out_size {
                return Err(Error::LabelRange {
                    label: j,
                    size: out_size,
                });
            }
            q0[j] += self.p0[k];
            q1[j] += self.p1[k];
        }
        Ok(ConditionalPmf { p0: q0, p1: q1 })
    }

    /// Largest `|p0[k] - p1[size-1-k]|`.
    pub fn symmetry_deviation(&self) -> f64 {
        let n = self.size();
        (0..n)
            .map(|k| (self.p0[k] - self.p1[n - 1 - k]).abs())
            .fold(0.0, f64::max)
    }

    /// Plain-text table: header `# pmf |M|=<size>`, then `label llr p0 p1`
    /// per symbol. Void symbols print `nan` as their LLR.
    pub fn to_text(&self) -> String {
        let mut s = format!("# pmf |M|={}\n", self.size());
        for (k, llr) in llr_labels(self).into_iter().enumerate() {
            let llr = llr.unwrap_or(f64::NAN);
            let _ = writeln!(s, "{k} {llr:?} {:?} {:?}", self.p0[k], self.p1[k]);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Distribution("empty pmf text".into()))?;
        let size: usize = header
            .trim()
            .strip_prefix("# pmf |M|=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Distribution(format!("bad pmf header {header:?}")))?;
        let mut p0 = Vec::with_capacity(size);
        let mut p1 = Vec::with_capacity(size);
        for (k, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::Distribution(format!("bad pmf row {line:?}")));
            }
            let label: usize = fields[0]
                .parse()
                .map_err(|_| Error::Distribution(format!("bad label in {line:?}")))?;
            if label != k {
                return Err(Error::Distribution(format!(
                    "pmf rows out of order: expected label {k}, got {label}"
                )));
            }
            let parse = |f: &str| -> Result<f64> {
                f.parse()
                    .map_err(|_| Error::Distribution(format!("bad number {f:?}")))
            };
            p0.push(parse(fields[2])?);
            p1.push(parse(fields[3])?);
        }
        if p0.len() != size {
            return Err(Error::Length {
                expected: size,
                got: p0.len(),
            });
        }
        Self::new(p0, p1)
    }
}

/// `p log2(p / q)` with `0 log 0 = 0`.
#[inline]
fn plogp_ratio(p: f64, q: f64) -> f64 {
    if p > 0.0 {
        p * (p / q).log2()
    } else {
        0.0
    }
}

/// Contribution of one output symbol with masses `(a, b)` under `x = 0, 1`
/// to the mutual information with a uniform binary input.
#[inline]
pub fn mi_term(a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    if m <= 0.0 {
        return 0.0;
    }
    0.5 * (plogp_ratio(a, m) + plogp_ratio(b, m))
}

/// `I(symbol; x)` in bits for a uniform prior on `x`.
pub fn mutual_information(d: &ConditionalPmf) -> f64 {
    let mi: f64 = d
        .p0
        .iter()
        .zip(&d.p1)
        .map(|(&a, &b)| mi_term(a, b))
        .sum();
    mi.clamp(0.0, 1.0)
}

/// Per-symbol natural-log LLR `ln p0 - ln p1`; `None` marks a void symbol.
///
/// The difference of logarithms is used instead of the log of a quotient so
/// that mirrored symbols of a symmetric distribution get exactly negated
/// values.
pub fn llr_labels(d: &ConditionalPmf) -> Vec<Option<f64>> {
    (0..d.size())
        .map(|k| {
            if d.is_void(k) {
                None
            } else {
                Some(d.p0[k].ln() - d.p1[k].ln())
            }
        })
        .collect()
}

/// `p0[k] == p1[size-1-k]` for every `k`, within `tol`.
pub fn check_symmetry(d: &ConditionalPmf, tol: f64) -> bool {
    d.size().is_multiple_of(2) && d.symmetry_deviation() <= tol
}

/// Averages each symbol with its mirror so that the result is exactly
/// symmetric. Idempotent.
pub fn symmetrize(d: &ConditionalPmf) -> ConditionalPmf {
    let n = d.size();
    let p0: Vec<f64> = (0..n).map(|k| 0.5 * (d.p0[k] + d.p1[n - 1 - k])).collect();
    let p1: Vec<f64> = (0..n).map(|k| p0[n - 1 - k]).collect();
    ConditionalPmf { p0, p1 }
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let t = |v: f64| if v > 0.0 { -v * v.log2() } else { 0.0 };
    t(p) + t(1.0 - p)
}
