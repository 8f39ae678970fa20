//! Sparse-triple text format.
//!
//! ```text
//! rows cols
//! i j value      (1-based, one line per nonzero entry, row-major)
//! 0 0 0
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::IntMatrix;
use crate::{Error, Result};

pub fn write_sparse(m: &IntMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for (r, c, v) in m.nonzero_entries() {
        out.push_str(&format!("{} {} {}\n", r + 1, c + 1, v));
    }
    out.push_str("0 0 0\n");
    out
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_sparse(text: &str) -> Result<IntMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [rows, cols] = dims[..] else {
        return Err(err(ln, "header must be `rows cols`"));
    };
    let rows: usize = rows.parse().map_err(|_| err(ln, "bad row count"))?;
    let cols: usize = cols.parse().map_err(|_| err(ln, "bad column count"))?;
    let mut m = IntMatrix::zeros(rows, cols);
    let mut seen = std::collections::HashSet::new();

    for (ln, line) in lines.by_ref() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [i, j, v] = fields[..] else {
            return Err(err(ln, "entry must be `i j value`"));
        };
        let i: usize = i.parse().map_err(|_| err(ln, "bad row index"))?;
        let j: usize = j.parse().map_err(|_| err(ln, "bad column index"))?;
        let v: BigInt = v.parse().map_err(|_| err(ln, "bad value"))?;
        if i == 0 && j == 0 {
            if !v.is_zero() {
                return Err(err(ln, "terminator must be `0 0 0`"));
            }
            if let Some((ln, _)) = lines.next() {
                return Err(err(ln, "content after terminator"));
            }
            return Ok(m);
        }
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(err(ln, format!("entry ({i}, {j}) outside {rows}x{cols}")));
        }
        if v.is_zero() {
            return Err(err(ln, "explicit zero entry"));
        }
        if !seen.insert((i, j)) {
            return Err(err(ln, format!("duplicate entry ({i}, {j})")));
        }
        m.set(i - 1, j - 1, v)?;
    }
    Err(err(text.lines().count(), "missing `0 0 0` terminator"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_expected_text() {
        let m = IntMatrix::from_rows(&[vec![0, -3], vec![7, 0]]).unwrap();
        assert_eq!(write_sparse(&m), "2 2\n1 2 -3\n2 1 7\n0 0 0\n");
        assert_eq!(parse_sparse(&write_sparse(&m)).unwrap(), m);
    }

    #[test]
    fn empty_matrix() {
        let m = IntMatrix::zeros(0, 3);
        assert_eq!(parse_sparse(&write_sparse(&m)).unwrap(), m);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_sparse("").is_err());
        assert!(parse_sparse("2 2\n1 1 1\n").is_err());
        assert!(parse_sparse("2 2\n3 1 1\n0 0 0\n").is_err());
        assert!(parse_sparse("2 2\n1 1 1\n1 1 2\n0 0 0\n").is_err());
        assert!(parse_sparse("2 2\n1 1 0\n0 0 0\n").is_err());
        assert!(parse_sparse("2 2\n0 0 0\n1 1 1\n").is_err());
        assert!(parse_sparse("2\n0 0 0\n").is_err());
        assert!(parse_sparse("2 2\n1 x 1\n0 0 0\n").is_err());
    }
}
