//! Seeded quasi-cyclic construction of regular LDPC matrices.
//!
//! The base matrix is a full `d_v x d_c` array of `z x z` circulant
//! permutation matrices. Shifts are drawn from a seeded generator, column by
//! column, rejecting any choice that would close a length-4 cycle, so the
//! resulting Tanner graph has girth at least 6.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ParityCheckMatrix;
use crate::error::{Error, Result};

/// Circulant shifts plus the expanded matrix.
#[derive(Debug, Clone)]
pub struct QcCode {
    pub z: usize,
    /// `shifts[i][j]`: row `r` of block `(i, j)` connects to column `(r + s) mod z`.
    pub shifts: Vec<Vec<usize>>,
    pub matrix: ParityCheckMatrix,
}

const MAX_RESTARTS: usize = 64;
const MAX_NODES_PER_COLUMN: usize = 200_000;

/// Builds a `(d_v, d_c)`-regular, girth >= 6 quasi-cyclic matrix with
/// circulant size `z` (so `N = d_c z`, `M = d_v z`).
pub fn quasi_cyclic_regular(d_v: usize, d_c: usize, z: usize, seed: u64) -> Result<QcCode> {
    if d_v == 0 || d_v >= d_c {
        return Err(Error::Config(format!("need 0 < d_v < d_c, got ({d_v}, {d_c})")));
    }
    if z < d_c {
        return Err(Error::Config(format!(
            "circulant size {z} too small for a 4-cycle-free array with {d_c} block columns"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESTARTS {
        if let Some(shifts) = try_shifts(d_v, d_c, z, &mut rng) {
            let matrix = expand(&shifts, z)?;
            return Ok(QcCode { z, shifts, matrix });
        }
    }
    Err(Error::Matrix(format!(
        "no 4-cycle-free shift assignment found for ({d_v}, {d_c}), z = {z}"
    )))
}

fn pair_index(a: usize, b: usize, d_v: usize) -> usize {
    a * d_v + b
}

fn try_shifts(d_v: usize, d_c: usize, z: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
    // used[(a, b)][d]: difference s_a - s_b (mod z) already taken by an earlier column
    let mut used = vec![vec![false; z]; d_v * d_v];
    let mut shifts = vec![vec![0usize; d_c]; d_v];
    for j in 0..d_c {
        let col = search_column(d_v, z, &used, rng)?;
        for a in 0..d_v {
            shifts[a][j] = col[a];
            for b in 0..a {
                used[pair_index(b, a, d_v)][(col[b] + z - col[a]) % z] = true;
            }
        }
    }
    Some(shifts)
}

fn search_column(d_v: usize, z: usize, used: &[Vec<bool>], rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let mut col = vec![0usize; d_v];
    col[0] = rng.random_range(0..z);
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); d_v];
    let mut cursor = vec![0usize; d_v];
    let mut visited = 0usize;
    let mut level = 1;
    let fresh = |rng: &mut ChaCha8Rng| {
        let mut c: Vec<usize> = (0..z).collect();
        c.shuffle(rng);
        c
    };
    if d_v == 1 {
        return Some(col);
    }
    candidates[1] = fresh(rng);
    loop {
        if visited > MAX_NODES_PER_COLUMN {
            return None;
        }
        let mut placed = false;
        while cursor[level] < z {
            let s = candidates[level][cursor[level]];
            cursor[level] += 1;
            visited += 1;
            let ok = (0..level).all(|b| !used[pair_index(b, level, d_v)][(col[b] + z - s) % z]);
            if ok {
                col[level] = s;
                placed = true;
                break;
            }
        }
        if placed {
            if level + 1 == d_v {
                return Some(col);
            }
            level += 1;
            candidates[level] = fresh(rng);
            cursor[level] = 0;
        } else {
            if level == 1 {
                return None;
            }
            level -= 1;
        }
    }
}

fn expand(shifts: &[Vec<usize>], z: usize) -> Result<ParityCheckMatrix> {
    let d_v = shifts.len();
    let d_c = shifts[0].len();
    let mut columns = vec![Vec::with_capacity(d_v); d_c * z];
    for (i, row) in shifts.iter().enumerate() {
        for (j, &s) in row.iter().enumerate() {
            for t in 0..z {
                // column j*z + t meets row i*z + r with r + s = t (mod z)
                columns[j * z + t].push(i * z + (t + z - s) % z);
            }
        }
    }
    ParityCheckMatrix::from_column_supports(d_v * z, columns)
}

/// Seed of the shipped matrices.
pub const DEFAULT_CODE_SEED: u64 = 1;

/// Named matrices shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratedCode {
    /// (6,32)-regular, N = 2048, M = 384, z = 64; same dimensions and rate as
    /// the 10GBASE-T code.
    Ieee8023anLike,
    /// (3,6)-regular, N = 1008, z = 168.
    Regular3x6N1008,
    /// (3,6)-regular, N = 96, z = 16.
    Regular3x6N96,
}

impl GeneratedCode {
    pub const ALL: [GeneratedCode; 3] = [
        GeneratedCode::Ieee8023anLike,
        GeneratedCode::Regular3x6N1008,
        GeneratedCode::Regular3x6N96,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratedCode::Ieee8023anLike => "802.3an-like",
            GeneratedCode::Regular3x6N1008 => "3-6-1008",
            GeneratedCode::Regular3x6N96 => "3-6-96",
        }
    }

    /// `(d_v, d_c, z)`.
    pub fn parameters(self) -> (usize, usize, usize) {
        match self {
            GeneratedCode::Ieee8023anLike => (6, 32, 64),
            GeneratedCode::Regular3x6N1008 => (3, 6, 168),
            GeneratedCode::Regular3x6N96 => (3, 6, 16),
        }
    }

    pub fn build(self, seed: u64) -> Result<ParityCheckMatrix> {
        let (d_v, d_c, z) = self.parameters();
        Ok(quasi_cyclic_regular(d_v, d_c, z, seed)?.matrix)
    }
}

impl fmt::Display for GeneratedCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratedCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratedCode::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = GeneratedCode::ALL.iter().map(|c| c.name()).collect();
                Error::Config(format!("unknown code {s:?}; expected one of {names:?}"))
            })
    }
}

/// Shorthand for [`GeneratedCode::build`].
pub fn generated_code(code: GeneratedCode, seed: u64) -> Result<ParityCheckMatrix> {
    code.build(seed)
}
