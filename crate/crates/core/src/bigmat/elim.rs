//! Elimination kernels shared by the determinant, inverse and Smith form
//! routines. They are generic over a scalar whose arithmetic may fail: the
//! `i64` instance reports overflow as `None`, after which callers rerun the
//! same kernel on `BigInt`. Both instances perform identical operations, so
//! the fast path never changes a result.

use std::fmt::Debug;

use num_bigint::BigInt;

pub(crate) trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `|self| < |other|`
    fn abs_lt(&self, other: &Self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    /// Truncating quotient.
    fn quot(&self, d: &Self) -> Option<Self>;
    /// `self - q * x`
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        self.checked_div(*d)
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*x)?)
    }
    fn from_i64(v: i64) -> Self {
        v
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        num_traits::One::is_one(&num_traits::Signed::abs(self))
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn quot(&self, d: &Self) -> Option<Self> {
        Some(self / d)
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        Some(self - q * x)
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

fn swap_rows<S>(a: &mut [S], cols: usize, x: usize, y: usize) {
    if x != y {
        for c in 0..cols {
            a.swap(x * cols + c, y * cols + c);
        }
    }
}

fn swap_cols<S>(a: &mut [S], rows: usize, cols: usize, x: usize, y: usize) {
    if x != y {
        for r in 0..rows {
            a.swap(r * cols + x, r * cols + y);
        }
    }
}

/// `row[dst] -= q * row[src]` restricted to the listed nonzero columns of `src`.
fn row_sub<S: Scalar>(a: &mut [S], cols: usize, dst: usize, q: &S, src: &[(usize, S)]) -> Option<()> {
    for (c, x) in src {
        let i = dst * cols + c;
        a[i] = a[i].sub_mul(q, x)?;
    }
    Some(())
}

fn nonzero_in_row<S: Scalar>(a: &[S], cols: usize, r: usize, from: usize) -> Vec<(usize, S)> {
    (from..cols)
        .filter(|&c| !a[r * cols + c].is_zero())
        .map(|c| (c, a[r * cols + c].clone()))
        .collect()
}

/// Reduces column `t` below the diagonal to zero using Euclidean row
/// operations among rows `t..rows`. Returns `Some(false)` if the column is
/// entirely zero from row `t` down, and `Some(true)` once row `t` holds the
/// only nonzero entry. `flips` counts the row swaps performed.
fn euclid_column<S: Scalar>(
    a: &mut [S],
    rows: usize,
    cols: usize,
    t: usize,
    flips: &mut usize,
) -> Option<bool> {
    loop {
        let mut best: Option<usize> = None;
        for r in t..rows {
            let v = &a[r * cols + t];
            if !v.is_zero() && best.is_none_or(|b| v.abs_lt(&a[b * cols + t])) {
                best = Some(r);
            }
        }
        let Some(p) = best else { return Some(false) };
        if p != t {
            swap_rows(a, cols, p, t);
            *flips += 1;
        }
        let pivot = a[t * cols + t].clone();
        let prow = nonzero_in_row(a, cols, t, t);
        let mut clean = true;
        for r in t + 1..rows {
            if a[r * cols + t].is_zero() {
                continue;
            }
            let q = a[r * cols + t].quot(&pivot)?;
            row_sub(a, cols, r, &q, &prow)?;
            if !a[r * cols + t].is_zero() {
                clean = false;
            }
        }
        if clean {
            return Some(true);
        }
    }
}

/// Determinant of an `n x n` matrix. `None` signals overflow.
pub(crate) fn determinant<S: Scalar>(n: usize, mut a: Vec<S>) -> Option<S> {
    let mut flips = 0;
    for t in 0..n {
        if !euclid_column(&mut a, n, n, t, &mut flips)? {
            return Some(S::zero());
        }
    }
    let mut det = S::from_i64(1);
    for t in 0..n {
        det = det.mul(&a[t * n + t])?;
    }
    if flips % 2 == 1 {
        det = det.neg()?;
    }
    Some(det)
}

/// Inverse of an `n x n` matrix over the integers. The outer `None` signals
/// overflow; the inner `None` means the matrix is not unimodular.
pub(crate) fn inverse<S: Scalar>(n: usize, a: Vec<S>) -> Option<Option<Vec<S>>> {
    let w = 2 * n;
    let mut aug = Vec::with_capacity(n * w);
    for r in 0..n {
        aug.extend_from_slice(&a[r * n..(r + 1) * n]);
        for c in 0..n {
            aug.push(S::from_i64(i64::from(r == c)));
        }
    }
    let mut flips = 0;
    for t in 0..n {
        if !euclid_column(&mut aug, n, w, t, &mut flips)? {
            return Some(None);
        }
        if !aug[t * w + t].is_unit() {
            return Some(None);
        }
        if aug[t * w + t] != S::from_i64(1) {
            for c in t..w {
                aug[t * w + c] = aug[t * w + c].neg()?;
            }
        }
        let prow = nonzero_in_row(&aug, w, t, t);
        for r in 0..t {
            let q = aug[r * w + t].clone();
            if !q.is_zero() {
                row_sub(&mut aug, w, r, &q, &prow)?;
            }
        }
    }
    let mut out = Vec::with_capacity(n * n);
    for r in 0..n {
        out.extend_from_slice(&aug[r * w + n..(r + 1) * w]);
    }
    Some(Some(out))
}

/// Diagonalizes a `rows x cols` matrix by unimodular row and column
/// operations and returns the nonzero diagonal entries (signs unnormalized).
///
/// Pivoting picks the nonzero entry of least absolute value, stopping the
/// search early at a unit. Row `t` and column `t` are then cleared by
/// Euclidean steps; any remainder smaller than the pivot becomes the next
/// pivot, so `|pivot|` strictly decreases until both are clear.
pub(crate) fn diagonalize<S: Scalar>(rows: usize, cols: usize, mut a: Vec<S>) -> Option<Vec<S>> {
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = find_pivot(&a, rows, cols, t) else { break };
        swap_rows(&mut a, cols, t, pr);
        swap_cols(&mut a, rows, cols, t, pc);
        loop {
            let pivot = a[t * cols + t].clone();
            let mut dirty = false;

            let prow = nonzero_in_row(&a, cols, t, t);
            for r in t + 1..rows {
                if a[r * cols + t].is_zero() {
                    continue;
                }
                let q = a[r * cols + t].quot(&pivot)?;
                if !q.is_zero() {
                    row_sub(&mut a, cols, r, &q, &prow)?;
                }
                if !a[r * cols + t].is_zero() {
                    dirty = true;
                }
            }

            let pcol: Vec<(usize, S)> = (t..rows)
                .filter(|&r| !a[r * cols + t].is_zero())
                .map(|r| (r, a[r * cols + t].clone()))
                .collect();
            for c in t + 1..cols {
                if a[t * cols + c].is_zero() {
                    continue;
                }
                let q = a[t * cols + c].quot(&pivot)?;
                if !q.is_zero() {
                    for (r, x) in &pcol {
                        let i = r * cols + c;
                        a[i] = a[i].sub_mul(&q, x)?;
                    }
                }
                if !a[t * cols + c].is_zero() {
                    dirty = true;
                }
            }

            if !dirty {
                break;
            }
            // Promote the smallest leftover in row t or column t.
            let mut best: Option<(bool, usize)> = None;
            let mut best_val: Option<S> = None;
            for r in t + 1..rows {
                let v = &a[r * cols + t];
                if !v.is_zero() && best_val.as_ref().is_none_or(|b| v.abs_lt(b)) {
                    best = Some((true, r));
                    best_val = Some(v.clone());
                }
            }
            for c in t + 1..cols {
                let v = &a[t * cols + c];
                if !v.is_zero() && best_val.as_ref().is_none_or(|b| v.abs_lt(b)) {
                    best = Some((false, c));
                    best_val = Some(v.clone());
                }
            }
            match best {
                Some((true, r)) => swap_rows(&mut a, cols, t, r),
                Some((false, c)) => swap_cols(&mut a, rows, cols, t, c),
                None => unreachable!("dirty implies a leftover entry"),
            }
        }
        diag.push(a[t * cols + t].clone());
    }
    Some(diag)
}

fn find_pivot<S: Scalar>(a: &[S], rows: usize, cols: usize, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..rows {
        for c in t..cols {
            let v = &a[r * cols + c];
            if v.is_zero() {
                continue;
            }
            if v.is_unit() {
                return Some((r, c));
            }
            if best.is_none_or(|(br, bc)| v.abs_lt(&a[br * cols + bc])) {
                best = Some((r, c));
            }
        }
    }
    best
}
