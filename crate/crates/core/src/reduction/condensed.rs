//! The condensed matrix `B̄(m)` and one level of the 2-local diagonal-killing
//! reduction.
//!
//! Rows are labelled `[i,k]` (`1 <= k <= i <= m`) and columns `[j,l]`
//! (`0 <= j <= m`, `1 <= l <= j+1`), both ordered by the first index and
//! then the second. A well-formed `B̄(m)` has
//!
//! * the `D̄_i` entries `i + 1 - k` at `([i,k], [i,k])`,
//! * an even "main diagonal" entry at `([i,k], [i-1,k])`,
//! * zeros elsewhere.
//!
//! Each label stands for a scalar block of `B`: row `[i,k]` and column
//! `[j,l]` carry weights (block sizes), initially `C(n, k-1) - C(n, k-2)` and
//! `C(n, l-1) - C(n, l-2)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::local2::Local2;
use crate::binom::full_rank_count;
use crate::{Error, IntMatrix, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RowLabel {
    pub i: usize,
    pub k: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ColLabel {
    pub j: usize,
    pub l: usize,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.i, self.k)
    }
}

impl fmt::Display for ColLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.j, self.l)
    }
}

fn row_index(i: usize, k: usize) -> usize {
    i * (i - 1) / 2 + (k - 1)
}

fn col_index(j: usize, l: usize) -> usize {
    j * (j + 1) / 2 + (l - 1)
}

fn row_count(m: usize) -> usize {
    m * (m + 1) / 2
}

fn col_count(m: usize) -> usize {
    (m + 1) * (m + 2) / 2
}

fn row_labels(m: usize) -> impl Iterator<Item = RowLabel> {
    (1..=m).flat_map(|i| (1..=i).map(move |k| RowLabel { i, k }))
}

fn col_labels(m: usize) -> impl Iterator<Item = ColLabel> {
    (0..=m).flat_map(|j| (1..=j + 1).map(move |l| ColLabel { j, l }))
}

/// Sparse matrix over the 2-local integers with a column index, supporting
/// the elementary operations of the reduction.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Sparse {
    rows: Vec<BTreeMap<usize, Local2>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Sparse {
    fn new(nrows: usize, ncols: usize) -> Self {
        Sparse {
            rows: vec![BTreeMap::new(); nrows],
            cols: vec![BTreeSet::new(); ncols],
        }
    }

    fn get(&self, r: usize, c: usize) -> Local2 {
        self.rows[r].get(&c).cloned().unwrap_or_else(Local2::zero)
    }

    fn set(&mut self, r: usize, c: usize, v: Local2) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
        }
    }

    /// `col[dst] += factor * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &Local2) {
        let touched: Vec<usize> = self.cols[src].iter().copied().collect();
        for r in touched {
            let v = &self.get(r, dst) + &(factor * &self.get(r, src));
            self.set(r, dst, v);
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &Local2) {
        let touched: Vec<(usize, Local2)> =
            self.rows[src].iter().map(|(c, v)| (*c, v.clone())).collect();
        for (c, v) in touched {
            let nv = &self.get(dst, c) + &(factor * &v);
            self.set(dst, c, nv);
        }
    }

    fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }
}

/// A (concrete member of the class) `B̄(m)` at a given recursion depth,
/// with the multiplicity weight of every row and column label.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CondensedMatrix {
    m: usize,
    depth: u32,
    entries: Sparse,
    row_weights: Vec<BigUint>,
    col_weights: Vec<BigUint>,
}

/// `B̄(m)` for the cube of dimension `n = 2m`: main diagonal entries
/// `n - 2(i-1)` (the diagonal of `B` on its block row `i-1`), `D̄_i` as in
/// the module docs, and the block sizes of `B` as weights.
pub fn build_condensed(m: usize) -> Result<CondensedMatrix> {
    if m < 1 {
        return Err(Error::InvalidParameter("condensed matrix needs m >= 1".into()));
    }
    let n = 2 * m as u64;
    let weight = |idx: usize| full_rank_count(n, idx as i64 - 1);
    let mut c = CondensedMatrix {
        m,
        depth: 0,
        entries: Sparse::new(row_count(m), col_count(m)),
        row_weights: row_labels(m).map(|r| weight(r.k)).collect(),
        col_weights: col_labels(m).map(|c| weight(c.l)).collect(),
    };
    for RowLabel { i, k } in row_labels(m) {
        let r = row_index(i, k);
        c.entries
            .set(r, col_index(i - 1, k), Local2::from(2 * (m - i + 1) as i64));
        c.entries.set(r, col_index(i, k), Local2::from((i + 1 - k) as i64));
    }
    Ok(c)
}

impl CondensedMatrix {
    /// `B̄(0)`: no rows and the single column `[0,1]`.
    fn empty(depth: u32, col_weight: BigUint) -> Self {
        CondensedMatrix {
            m: 0,
            depth,
            entries: Sparse::new(0, 1),
            row_weights: Vec::new(),
            col_weights: vec![col_weight],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `(m(m+1)/2, (m+1)(m+2)/2)`
    pub fn shape(&self) -> (usize, usize) {
        (row_count(self.m), col_count(self.m))
    }

    pub fn entry(&self, r: RowLabel, c: ColLabel) -> Local2 {
        self.entries.get(row_index(r.i, r.k), col_index(c.j, c.l))
    }

    pub fn row_weight(&self, r: RowLabel) -> &BigUint {
        &self.row_weights[row_index(r.i, r.k)]
    }

    pub fn col_weight(&self, c: ColLabel) -> &BigUint {
        &self.col_weights[col_index(c.j, c.l)]
    }

    pub fn row_labels(&self) -> impl Iterator<Item = RowLabel> {
        row_labels(self.m)
    }

    pub fn col_labels(&self) -> impl Iterator<Item = ColLabel> {
        col_labels(self.m)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.nnz()
    }

    /// Total weight of all rows: the number of rows of the block matrix.
    pub fn total_row_weight(&self) -> BigUint {
        self.row_weights.iter().sum()
    }

    /// Checks the shape of `B̄(m)`: exact `D̄` entries, main diagonal
    /// divisible by 2, nothing else, and square scalar blocks.
    pub fn check_well_formed(&self) -> Result<()> {
        for r in self.row_labels() {
            let ri = row_index(r.i, r.k);
            let diag_col = ColLabel { j: r.i - 1, l: r.k };
            let dbar_col = ColLabel { j: r.i, l: r.k };
            for (&c, v) in &self.entries.rows[ri] {
                let c = col_labels(self.m).nth(c).expect("column in range");
                if c == dbar_col {
                    if v != &Local2::from((r.i + 1 - r.k) as i64) {
                        return Err(Error::Structure(format!(
                            "D̄ entry at ({r}, {c}) is {v}, expected {}",
                            r.i + 1 - r.k
                        )));
                    }
                } else if c == diag_col {
                    if !v.divisible_by_pow2(1) {
                        return Err(Error::Structure(format!(
                            "main diagonal entry at ({r}, {c}) is {v}, not a multiple of 2"
                        )));
                    }
                } else {
                    return Err(Error::Structure(format!("stray entry {v} at ({r}, {c})")));
                }
            }
            if self.entry(r, dbar_col).is_zero() {
                return Err(Error::Structure(format!("missing D̄ entry in row {r}")));
            }
            let w = self.row_weight(r);
            if w != self.col_weight(diag_col) || w != self.col_weight(dbar_col) {
                return Err(Error::Structure(format!("non-square scalar block in row {r}")));
            }
        }
        Ok(())
    }

    /// Expands every label into its scalar block, giving the full matrix the
    /// condensed one stands for. Requires integer entries and weights that
    /// fit in memory.
    pub fn expand(&self) -> Result<IntMatrix> {
        let to_usize = |w: &BigUint| -> Result<usize> {
            w.try_into()
                .map_err(|_| Error::InvalidParameter(format!("weight {w} too large to expand")))
        };
        let row_w: Vec<usize> = self.row_weights.iter().map(to_usize).collect::<Result<_>>()?;
        let col_w: Vec<usize> = self.col_weights.iter().map(to_usize).collect::<Result<_>>()?;
        let prefix = |w: &[usize]| -> Vec<usize> {
            std::iter::once(0)
                .chain(w.iter().scan(0, |acc, x| {
                    *acc += x;
                    Some(*acc)
                }))
                .collect()
        };
        let (ro, co) = (prefix(&row_w), prefix(&col_w));
        let mut out = IntMatrix::zeros(*ro.last().unwrap(), *co.last().unwrap());
        for (r, row) in self.entries.rows.iter().enumerate() {
            for (&c, v) in row {
                if row_w[r] != col_w[c] {
                    return Err(Error::Structure(format!(
                        "entry at row {r}, column {c} joins blocks of sizes {} and {}",
                        row_w[r], col_w[c]
                    )));
                }
                let v: BigInt = v.as_integer().ok_or_else(|| {
                    Error::InvalidParameter(format!("entry {v} is not an integer"))
                })?;
                for x in 0..row_w[r] {
                    out.set(ro[r] + x, co[c] + x, v.clone())?;
                }
            }
        }
        Ok(out)
    }
}

/// An odd `D̄` entry split off by the reduction: it contributes the
/// elementary divisor `2^depth` with multiplicity `weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddPivot {
    pub label: RowLabel,
    pub entry: Local2,
    pub weight: BigUint,
    pub depth: u32,
}

/// One level of the reduction: the split-off odd diagonal `D(m)` and the two
/// halved residuals `A'(m)/2` (even `i`) and `A''(m)/2` (odd `i`).
#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub pivots: Vec<OddPivot>,
    pub even: CondensedMatrix,
    pub odd: CondensedMatrix,
    /// The working matrix after all row and column operations, before the
    /// split.
    pub reduced: CondensedMatrix,
}

fn structure(msg: String) -> Error {
    Error::Structure(msg)
}

/// Runs the diagonal-killing operations on `c`, splits off the odd pivots
/// and returns the two residual blocks divided by 2, each checked to be a
/// well-formed condensed matrix of parameter `⌊m/2⌋` and `⌊(m-1)/2⌋`.
///
/// For an odd entry `u` at `([i,k],[i,k])` with main diagonal entry `d` at
/// `([i,k],[i-1,k])`: column `[i-1,k]` loses `(d/u)` times column `[i,k]`,
/// which kills `d` and leaves a multiple of 4 at `([i+1,k],[i-1,k])`; then
/// row `[i+1,k]` loses `(e/u)` times row `[i,k]`, where `e` is the main
/// diagonal entry at `([i+1,k],[i,k])`. All multipliers are 2-local.
///
/// Residual relabelling: even `i = 2i'` keeps odd `k = 2k'-1` and maps
/// `[i,k] -> [i',k']`, columns `[2j', 2l'-1] -> [j',l']`; odd `i = 2i'+1`
/// keeps even `k = 2k'` and maps `[i,k] -> [i',k']`, columns
/// `[2j'+1, 2l'] -> [j',l']`.
pub fn reduce_condensed(c: &CondensedMatrix) -> Result<ReductionStep> {
    c.check_well_formed()?;
    let m = c.m;
    let mut work = c.clone();
    let a = &mut work.entries;
    let mut pivots = Vec::new();

    for i in 1..=m {
        for k in (1..=i).filter(|k| (i + 1 - k) % 2 == 1) {
            let r = row_index(i, k);
            let pc = col_index(i, k);
            let u = a.get(r, pc);
            if !u.is_unit() {
                return Err(structure(format!("pivot {u} at [{i},{k}] is not odd")));
            }
            let diag_col = col_index(i - 1, k);
            let d = a.get(r, diag_col);
            let factor = -&d.div_unit(&u).expect("unit");
            a.add_col_multiple(diag_col, pc, &factor);
            if !a.get(r, diag_col).is_zero() {
                return Err(structure(format!("column step left an entry in row [{i},{k}]")));
            }
            if i < m {
                let below = row_index(i + 1, k);
                let fresh = a.get(below, diag_col);
                if !fresh.divisible_by_pow2(2) {
                    return Err(structure(format!(
                        "new entry {fresh} at ([{},{k}],[{},{k}]) is not a multiple of 4",
                        i + 1,
                        i - 1
                    )));
                }
                let e = a.get(below, pc);
                let factor = -&e.div_unit(&u).expect("unit");
                a.add_row_multiple(below, r, &factor);
                if !a.get(below, pc).is_zero() {
                    return Err(structure(format!("row step left an entry in column [{i},{k}]")));
                }
            }
            pivots.push(OddPivot {
                label: RowLabel { i, k },
                entry: u,
                weight: c.row_weights[r].clone(),
                depth: c.depth,
            });
        }
    }

    // Pivot rows and columns must be isolated.
    for p in &pivots {
        let r = row_index(p.label.i, p.label.k);
        let pc = col_index(p.label.i, p.label.k);
        if a.rows[r].len() != 1 || a.cols[pc].len() != 1 {
            return Err(structure(format!("pivot {} is not isolated", p.label)));
        }
    }

    let (m_even, m_odd) = (m / 2, m.saturating_sub(1) / 2);
    let mut even = Sparse::new(row_count(m_even), col_count(m_even));
    let mut odd = Sparse::new(row_count(m_odd), col_count(m_odd));
    let mut even_rw = vec![BigUint::zero(); row_count(m_even)];
    let mut odd_rw = vec![BigUint::zero(); row_count(m_odd)];
    let mut even_cw = vec![BigUint::zero(); col_count(m_even)];
    let mut odd_cw = vec![BigUint::zero(); col_count(m_odd)];

    // Column relabelling; pivot columns map to nothing.
    let col_map: Vec<Option<(bool, usize)>> = col_labels(m)
        .map(|ColLabel { j, l }| {
            if l <= j && (j + 1 - l) % 2 == 1 {
                None
            } else if j % 2 == 0 {
                Some((true, col_index(j / 2, l.div_ceil(2))))
            } else {
                Some((false, col_index((j - 1) / 2, l / 2)))
            }
        })
        .collect();
    for (ci, target) in col_map.iter().enumerate() {
        match target {
            Some((true, t)) => even_cw[*t] = c.col_weights[ci].clone(),
            Some((false, t)) => odd_cw[*t] = c.col_weights[ci].clone(),
            None => {}
        }
    }

    for RowLabel { i, k } in row_labels(m) {
        if (i + 1 - k) % 2 == 1 {
            continue;
        }
        let r = row_index(i, k);
        let (to_even, target) = if i % 2 == 0 {
            (true, row_index(i / 2, k.div_ceil(2)))
        } else {
            (false, row_index((i - 1) / 2, k / 2))
        };
        let (dst, rw) = if to_even {
            (&mut even, &mut even_rw)
        } else {
            (&mut odd, &mut odd_rw)
        };
        rw[target] = c.row_weights[r].clone();
        for (&cj, v) in &a.rows[r] {
            let Some((col_even, tc)) = col_map[cj] else {
                return Err(structure(format!("row [{i},{k}] meets a pivot column")));
            };
            if col_even != to_even {
                return Err(structure(format!(
                    "row [{i},{k}] has an entry across the parity split"
                )));
            }
            let half = v.halve().ok_or_else(|| {
                structure(format!("residual entry {v} in row [{i},{k}] is odd"))
            })?;
            dst.set(target, tc, half);
        }
    }

    let depth = c.depth + 1;
    let finish = |m: usize, entries: Sparse, rw: Vec<BigUint>, cw: Vec<BigUint>| {
        let cm = if m == 0 {
            CondensedMatrix::empty(depth, cw[0].clone())
        } else {
            CondensedMatrix {
                m,
                depth,
                entries,
                row_weights: rw,
                col_weights: cw,
            }
        };
        cm.check_well_formed().map(|_| cm)
    };
    Ok(ReductionStep {
        pivots,
        even: finish(m_even, even, even_rw, even_cw)?,
        odd: finish(m_odd, odd, odd_rw, odd_cw)?,
        reduced: work,
    })
}

/// Drives the reduction to the bottom. Returns the exponent `e` of every
/// split-off pivot with its accumulated weight.
pub fn two_local_multiplicities(c: &CondensedMatrix) -> Result<BTreeMap<u32, BigUint>> {
    let mut out: BTreeMap<u32, BigUint> = BTreeMap::new();
    let mut pending = vec![c.clone()];
    while let Some(cur) = pending.pop() {
        if cur.m == 0 {
            continue;
        }
        let step = reduce_condensed(&cur)?;
        for p in step.pivots {
            *out.entry(p.depth).or_default() += p.weight;
        }
        pending.push(step.even);
        pending.push(step.odd);
    }
    Ok(out)
}
