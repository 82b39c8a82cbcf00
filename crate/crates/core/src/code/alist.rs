//! MacKay alist format.
//!
//! ```text
//! N M
//! max_col_weight max_row_weight
//! <N column weights>
//! <M row weights>
//! <N lines: 1-based row indices of each column, zero padding allowed at the end>
//! <M lines: 1-based column indices of each row, zero padding allowed at the end>
//! ```

use std::fmt::Write as _;

use super::ParityCheckMatrix;
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Alist {
        line,
        msg: msg.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    /// Next non-blank line as `(1-based line number, numbers)`.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        loop {
            let Some((i, line)) = self.inner.next() else {
                return Err(err(self.last + 1, format!("truncated file: expected {what}")));
            };
            self.last = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| err(i + 1, format!("not a non-negative integer: {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((i + 1, nums));
        }
    }

    fn rest_is_blank(&mut self) -> Option<usize> {
        self.inner
            .find(|(_, l)| !l.trim().is_empty())
            .map(|(i, _)| i + 1)
    }
}

fn expect_len(line: usize, nums: &[usize], n: usize, what: &str) -> Result<()> {
    if nums.len() != n {
        return Err(err(
            line,
            format!("malformed header: expected {n} {what}, found {}", nums.len()),
        ));
    }
    Ok(())
}

/// Reads one support line; zeros are padding and may only trail the indices.
fn support_line(
    line: usize,
    nums: &[usize],
    weight: usize,
    max_weight: usize,
    bound: usize,
) -> Result<Vec<usize>> {
    if nums.len() > max_weight.max(weight) {
        return Err(err(
            line,
            format!("{} entries exceed declared maximum weight {max_weight}", nums.len()),
        ));
    }
    let nonzero = nums.iter().take_while(|&&v| v != 0).count();
    if nums[nonzero..].iter().any(|&v| v != 0) {
        return Err(err(line, "padding zero followed by an index"));
    }
    if nonzero != weight {
        return Err(err(
            line,
            format!("expected {weight} indices, found {nonzero}"),
        ));
    }
    let mut out = Vec::with_capacity(weight);
    for &v in &nums[..nonzero] {
        if v > bound {
            return Err(err(line, format!("index out of range: {v} > {bound}")));
        }
        out.push(v - 1);
    }
    let mut sorted = out.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(err(line, "duplicate index"));
    }
    Ok(out)
}

pub(super) fn parse(text: &str) -> Result<ParityCheckMatrix> {
    let mut lines = Lines::new(text);
    let (l, dims) = lines.next_numbers("dimensions")?;
    expect_len(l, &dims, 2, "dimensions")?;
    let (n, m) = (dims[0], dims[1]);
    if n == 0 || m == 0 {
        return Err(err(l, "malformed header: zero dimension"));
    }
    let (l, maxw) = lines.next_numbers("maximum weights")?;
    expect_len(l, &maxw, 2, "maximum weights")?;
    let (max_col, max_row) = (maxw[0], maxw[1]);
    let (l, col_w) = lines.next_numbers("column weights")?;
    expect_len(l, &col_w, n, "column weights")?;
    let l_cw = l;
    let (l, row_w) = lines.next_numbers("row weights")?;
    expect_len(l, &row_w, m, "row weights")?;
    let l_rw = l;

    if col_w.iter().copied().max() != Some(max_col) {
        return Err(err(
            l_cw,
            format!("declared max column weight {max_col} does not match column weights"),
        ));
    }
    if row_w.iter().copied().max() != Some(max_row) {
        return Err(err(
            l_rw,
            format!("declared max row weight {max_row} does not match row weights"),
        ));
    }

    let mut columns = Vec::with_capacity(n);
    for &w in &col_w {
        let (l, nums) = lines.next_numbers("column support")?;
        columns.push(support_line(l, &nums, w, max_col, m)?);
    }
    let mut rows = Vec::with_capacity(m);
    let mut row_lines = Vec::with_capacity(m);
    for &w in &row_w {
        let (l, nums) = lines.next_numbers("row support")?;
        rows.push(support_line(l, &nums, w, max_row, n)?);
        row_lines.push(l);
    }
    if let Some(l) = lines.rest_is_blank() {
        return Err(err(l, "trailing data after row supports"));
    }

    let h = ParityCheckMatrix::from_column_supports(m, columns)
        .map_err(|e| err(0, e.to_string()))?;
    for (r, mut listed) in rows.into_iter().enumerate() {
        listed.sort_unstable();
        if listed != h.row_supports()[r] {
            return Err(err(
                row_lines[r],
                format!("row {} support disagrees with column supports", r + 1),
            ));
        }
    }
    Ok(h)
}

pub(super) fn write(h: &ParityCheckMatrix) -> String {
    let col_w: Vec<usize> = h.column_supports().iter().map(Vec::len).collect();
    let row_w: Vec<usize> = h.row_supports().iter().map(Vec::len).collect();
    let max_col = col_w.iter().copied().max().unwrap_or(0);
    let max_row = row_w.iter().copied().max().unwrap_or(0);
    let join = |v: &[usize]| {
        v.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", h.n_cols(), h.n_rows());
    let _ = writeln!(s, "{max_col} {max_row}");
    let _ = writeln!(s, "{}", join(&col_w));
    let _ = writeln!(s, "{}", join(&row_w));
    for (supports, max) in [(h.column_supports(), max_col), (h.row_supports(), max_row)] {
        for sup in supports {
            let mut v: Vec<usize> = sup.iter().map(|&i| i + 1).collect();
            v.resize(max, 0);
            let _ = writeln!(s, "{}", join(&v));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n";

    #[test]
    fn parses_small() {
        let h = parse(SMALL).unwrap();
        assert_eq!(h.column_supports(), &[vec![0], vec![0, 1], vec![1]]);
    }

    #[test]
    fn padded_columns_accepted() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        assert_eq!(parse(text).unwrap(), parse(SMALL).unwrap());
    }

    #[test]
    fn index_out_of_range() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 4\n2 3\n";
        let e = parse(text).unwrap_err().to_string();
        assert!(e.contains("index out of range"), "{e}");
        assert!(e.contains("line 8"), "{e}");
    }

    #[test]
    fn padding_misuse() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n0 1\n1 2\n2\n1 2\n2 3\n";
        let e = parse(text).unwrap_err().to_string();
        assert!(e.contains("padding"), "{e}");
    }

    #[test]
    fn truncated() {
        let e = parse("3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n").unwrap_err().to_string();
        assert!(e.contains("truncated"), "{e}");
    }

    #[test]
    fn malformed_header() {
        assert!(parse("3\n").unwrap_err().to_string().contains("line 1"));
        assert!(parse("3 2\n3 2\n1 2 1\n2 2\n").is_err());
    }

    #[test]
    fn inconsistent_rows() {
        let text = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 3\n2 3\n";
        assert!(parse(text).is_err());
    }

    #[test]
    fn writes_what_it_reads() {
        let h = parse(SMALL).unwrap();
        assert_eq!(parse(&write(&h)).unwrap(), h);
    }
}
