//! Sparse parity-check matrices, Tanner graphs and regular-code profiles.

mod alist;
mod qc;

pub use qc::{generated_code, DEFAULT_CODE_SEED, quasi_cyclic_regular, GeneratedCode, QcCode};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse binary matrix `H`, stored as both column and row supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n_cols: usize,
    n_rows: usize,
    column_supports: Vec<Vec<usize>>,
    row_supports: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds a matrix from its column supports. Each support is sorted and
    /// checked for duplicates and range.
    pub fn from_column_supports(n_rows: usize, mut columns: Vec<Vec<usize>>) -> Result<Self> {
        let n_cols = columns.len();
        let mut rows = vec![Vec::new(); n_rows];
        for (n, col) in columns.iter_mut().enumerate() {
            col.sort_unstable();
            if col.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Matrix(format!("column {n} has a duplicate entry")));
            }
            for &m in col.iter() {
                if m >= n_rows {
                    return Err(Error::Matrix(format!(
                        "column {n}: row index {m} out of range ({n_rows} rows)"
                    )));
                }
                rows[m].push(n);
            }
        }
        Ok(Self {
            n_cols,
            n_rows,
            column_supports: columns,
            row_supports: rows,
        })
    }

    /// Builds a matrix from a dense 0/1 row-major description.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut columns = vec![Vec::new(); n_cols];
        for (m, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::Matrix(format!("row {m} has length {}", row.len())));
            }
            for (n, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => columns[n].push(m),
                    _ => return Err(Error::Matrix(format!("entry ({m},{n}) is {v}"))),
                }
            }
        }
        Self::from_column_supports(n_rows, columns)
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn column_supports(&self) -> &[Vec<usize>] {
        &self.column_supports
    }

    pub fn row_supports(&self) -> &[Vec<usize>] {
        &self.row_supports
    }

    pub fn nnz(&self) -> usize {
        self.column_supports.iter().map(Vec::len).sum()
    }

    /// Parses MacKay's alist text format.
    pub fn parse_alist(text: &str) -> Result<Self> {
        alist::parse(text)
    }

    /// Writes MacKay's alist text format (zero-padded for irregular rows or
    /// columns).
    pub fn to_alist(&self) -> String {
        alist::write(self)
    }

    /// Column and row weights if they are constant; errors otherwise.
    pub fn profile(&self) -> Result<CodeProfile> {
        let d_v = self.column_supports.first().map_or(0, Vec::len);
        let d_c = self.row_supports.first().map_or(0, Vec::len);
        if let Some(n) = self.column_supports.iter().position(|c| c.len() != d_v) {
            return Err(Error::Irregular(format!(
                "column {n} has weight {} (column 0 has {d_v})",
                self.column_supports[n].len()
            )));
        }
        if let Some(m) = self.row_supports.iter().position(|r| r.len() != d_c) {
            return Err(Error::Irregular(format!(
                "row {m} has weight {} (row 0 has {d_c})",
                self.row_supports[m].len()
            )));
        }
        CodeProfile::new(d_v, d_c, Rate::designed(self.n_cols, self.n_rows))
    }

    /// True iff `H * word = 0 (mod 2)`.
    pub fn check_syndrome(&self, word: &[u8]) -> Result<bool> {
        if word.len() != self.n_cols {
            return Err(Error::Length {
                expected: self.n_cols,
                got: word.len(),
            });
        }
        Ok(self
            .row_supports
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &n| acc ^ (word[n] & 1)) == 0))
    }
}

/// Reduced rational code rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rate {
    pub num: u64,
    pub den: u64,
}

impl Rate {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::Config(format!("rate {num}/{den} not in (0, 1)")));
        }
        let g = gcd(num, den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    /// `1 - M/N`, the designed rate of an `M x N` parity-check matrix.
    pub fn designed(n: usize, m: usize) -> Self {
        let (num, den) = ((n - m.min(n)) as u64, n.max(1) as u64);
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Degree profile of a `(d_v, d_c)`-regular code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeProfile {
    pub d_v: usize,
    pub d_c: usize,
    pub rate: Rate,
}

impl CodeProfile {
    pub fn new(d_v: usize, d_c: usize, rate: Rate) -> Result<Self> {
        if d_v == 0 || d_v >= d_c {
            return Err(Error::Config(format!(
                "need 0 < d_v < d_c, got d_v={d_v}, d_c={d_c}"
            )));
        }
        Ok(Self { d_v, d_c, rate })
    }
}

/// Bipartite VN/CN adjacency with stable edge ids.
///
/// Edge ids are assigned column-major: the edges of VN 0 come first, in the
/// order of its (sorted) column support, then VN 1, and so on. Each CN lists
/// its edges ordered by VN index.
#[derive(Debug, Clone)]
pub struct TannerGraph {
    vn_start: Vec<usize>,
    edge_cn: Vec<u32>,
    edge_vn: Vec<u32>,
    cn_start: Vec<usize>,
    cn_edge_ids: Vec<u32>,
}

impl TannerGraph {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let mut vn_start = Vec::with_capacity(h.n_cols() + 1);
        let mut edge_cn = Vec::with_capacity(h.nnz());
        let mut edge_vn = Vec::with_capacity(h.nnz());
        vn_start.push(0);
        for (n, col) in h.column_supports().iter().enumerate() {
            for &m in col {
                edge_cn.push(m as u32);
                edge_vn.push(n as u32);
            }
            vn_start.push(edge_cn.len());
        }
        let mut cn_start = vec![0usize; h.n_rows() + 1];
        for &m in &edge_cn {
            cn_start[m as usize + 1] += 1;
        }
        for m in 0..h.n_rows() {
            cn_start[m + 1] += cn_start[m];
        }
        let mut fill = cn_start.clone();
        let mut cn_edge_ids = vec![0u32; edge_cn.len()];
        // Edge ids increase with VN index, so each CN's list ends up sorted by VN.
        for (e, &m) in edge_cn.iter().enumerate() {
            cn_edge_ids[fill[m as usize]] = e as u32;
            fill[m as usize] += 1;
        }
        Self {
            vn_start,
            edge_cn,
            edge_vn,
            cn_start,
            cn_edge_ids,
        }
    }

    pub fn n_vns(&self) -> usize {
        self.vn_start.len() - 1
    }

    pub fn n_cns(&self) -> usize {
        self.cn_start.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_cn.len()
    }

    /// Contiguous edge-id range of VN `n`.
    pub fn vn_edge_range(&self, n: usize) -> std::ops::Range<usize> {
        self.vn_start[n]..self.vn_start[n + 1]
    }

    /// Edge ids of CN `m`, ordered by VN index.
    pub fn cn_edge_ids(&self, m: usize) -> &[u32] {
        &self.cn_edge_ids[self.cn_start[m]..self.cn_start[m + 1]]
    }

    /// `(cn, edge)` pairs of VN `n`.
    pub fn vn_edges(&self, n: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vn_edge_range(n)
            .map(move |e| (self.edge_cn[e] as usize, e))
    }

    /// `(vn, edge)` pairs of CN `m`.
    pub fn cn_edges(&self, m: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cn_edge_ids(m)
            .iter()
            .map(move |&e| (self.edge_vn[e as usize] as usize, e as usize))
    }

    pub fn vn_degree(&self, n: usize) -> usize {
        self.vn_start[n + 1] - self.vn_start[n]
    }

    pub fn cn_degree(&self, m: usize) -> usize {
        self.cn_start[m + 1] - self.cn_start[m]
    }

    pub fn max_vn_degree(&self) -> usize {
        (0..self.n_vns()).map(|n| self.vn_degree(n)).max().unwrap_or(0)
    }

    pub fn max_cn_degree(&self) -> usize {
        (0..self.n_cns()).map(|m| self.cn_degree(m)).max().unwrap_or(0)
    }
}
