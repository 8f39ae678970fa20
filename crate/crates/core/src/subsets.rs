//! k-subsets of `{1..n}`: colexicographic and complement-induced orders,
//! Frankl rank, and the inclusion matrices `W_{t,k}`.
//!
//! A subset `{e_1 < ... < e_k}` is identified with the bitmask having bit
//! `e - 1` set for each element; colex order is then plain numeric order of
//! the masks, and the colex rank is `sum_j C(e_j - 1, j)` (combinatorial
//! number system).

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::binom::choose;
use crate::{Error, IntMatrix, Result};

/// Largest supported ground set; subsets are stored alongside a `u64` mask.
pub const MAX_GROUND: usize = 63;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    elems: Vec<usize>,
}

impl Subset {
    /// Validates that `elems` is strictly increasing and within `1..=n`.
    pub fn new(elems: Vec<usize>, n: usize) -> Result<Self> {
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "subset elements {elems:?} are not strictly increasing"
            )));
        }
        if elems.first().is_some_and(|&e| e < 1) || elems.last().is_some_and(|&e| e > n) {
            return Err(Error::InvalidParameter(format!(
                "subset {elems:?} is not contained in 1..={n}"
            )));
        }
        Ok(Subset { elems })
    }

    pub fn empty() -> Self {
        Subset { elems: Vec::new() }
    }

    pub fn from_mask(mask: u64) -> Self {
        let elems = (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
        Subset { elems }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn mask(&self) -> u64 {
        self.elems.iter().fold(0, |m, &e| m | 1 << (e - 1))
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.mask() & !other.mask() == 0
    }

    pub fn complement(&self, n: usize) -> Subset {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Subset::from_mask(full & !self.mask())
    }

    /// Position in the colex order of subsets of the same size.
    pub fn colex_rank(&self) -> usize {
        self.elems
            .iter()
            .enumerate()
            .map(|(j, &e)| choose(e - 1, j + 1))
            .sum()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Colexicographic order.
    Colex,
    /// Complements of the colex-ordered `(n - k)`-subsets, in that order.
    /// Only defined for `2k >= n`.
    Complement,
}

/// The `k`-subset of colex rank `rank`.
fn colex_unrank(k: usize, mut rank: usize) -> Subset {
    let mut elems = vec![0; k];
    for j in (1..=k).rev() {
        // largest c with C(c, j) <= rank
        let mut c = j - 1;
        while choose(c + 1, j) <= rank {
            c += 1;
        }
        rank -= choose(c, j);
        elems[j - 1] = c + 1;
    }
    Subset { elems }
}

fn colex_masks(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(choose(n, k));
    if k == 0 {
        out.push(0);
        return out;
    }
    let limit = 1u128 << n;
    let mut x: u64 = (1u64 << k) - 1;
    while u128::from(x) < limit {
        out.push(x);
        // next mask with the same popcount (Gosper)
        let c = x & x.wrapping_neg();
        let r = x.wrapping_add(c);
        if r == 0 {
            break;
        }
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

fn check_args(n: usize, k: usize, kind: OrderKind) -> Result<()> {
    if n > MAX_GROUND {
        return Err(Error::InvalidParameter(format!(
            "ground set size {n} exceeds {MAX_GROUND}"
        )));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("subset size {k} exceeds n = {n}")));
    }
    if kind == OrderKind::Complement && 2 * k < n {
        return Err(Error::InvalidParameter(format!(
            "complement order needs 2k >= n (n = {n}, k = {k})"
        )));
    }
    Ok(())
}

/// All `k`-subsets of `{1..n}` in the requested order.
pub fn enumerate(n: usize, k: usize, kind: OrderKind) -> Result<Vec<Subset>> {
    check_args(n, k, kind)?;
    Ok(match kind {
        OrderKind::Colex => colex_masks(n, k).into_iter().map(Subset::from_mask).collect(),
        OrderKind::Complement => colex_masks(n, n - k)
            .into_iter()
            .map(|m| Subset::from_mask(m).complement(n))
            .collect(),
    })
}

/// A fixed total order on the `k`-subsets of `{1..n}` with O(k) lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetOrder {
    n: usize,
    k: usize,
    kind: OrderKind,
    subsets: Vec<Subset>,
}

impl SubsetOrder {
    pub fn new(n: usize, k: usize, kind: OrderKind) -> Result<Self> {
        let subsets = enumerate(n, k, kind)?;
        Ok(SubsetOrder { n, k, kind, subsets })
    }

    pub fn colex(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, OrderKind::Colex)
    }

    pub fn complement(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, OrderKind::Complement)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Subset> {
        self.subsets.get(i)
    }

    pub fn subsets(&self) -> &[Subset] {
        &self.subsets
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subset> {
        self.subsets.iter()
    }

    pub fn index_of(&self, s: &Subset) -> Option<usize> {
        if s.len() != self.k || s.elements().last().is_some_and(|&e| e > self.n) {
            return None;
        }
        Some(match self.kind {
            OrderKind::Colex => s.colex_rank(),
            OrderKind::Complement => s.complement(self.n).colex_rank(),
        })
    }

    /// The subset at colex position `rank` (independent of `kind`).
    pub fn colex_unrank(&self, rank: usize) -> Option<Subset> {
        (rank < choose(self.n, self.k)).then(|| colex_unrank(self.k, rank))
    }
}

/// Frankl's criterion: `{i_1 < ... < i_t}` has rank `t` iff `i_j >= 2j`.
pub fn has_full_rank(s: &Subset) -> bool {
    s.elements().iter().enumerate().all(|(j, &e)| e >= 2 * (j + 1))
}

/// `C(n, t) - C(n, t - 1)` for `t <= n / 2`.
pub fn count_full_rank(n: usize, t: usize) -> Result<usize> {
    if 2 * t > n {
        return Err(Error::InvalidParameter(format!("need t <= n/2 (n = {n}, t = {t})")));
    }
    Ok(choose(n, t) - if t == 0 { 0 } else { choose(n, t - 1) })
}

/// The `t`-subsets of rank `t`, in colex order.
pub fn full_rank_subsets(n: usize, t: usize) -> Result<Vec<Subset>> {
    if 2 * t > n {
        return Err(Error::InvalidParameter(format!("need t <= n/2 (n = {n}, t = {t})")));
    }
    Ok(enumerate(n, t, OrderKind::Colex)?
        .into_iter()
        .filter(has_full_rank)
        .collect())
}

/// Matrix of the incidence map between the row subsets and the column
/// subsets: entry 1 when the smaller of the two is contained in the larger.
pub fn incidence_matrix(rows: &SubsetOrder, cols: &SubsetOrder) -> Result<IntMatrix> {
    if rows.n != cols.n {
        return Err(Error::InvalidParameter(format!(
            "row order is on {} points, column order on {}",
            rows.n, cols.n
        )));
    }
    let rmasks: Vec<u64> = rows.iter().map(Subset::mask).collect();
    let cmasks: Vec<u64> = cols.iter().map(Subset::mask).collect();
    let up = rows.k <= cols.k;
    Ok(IntMatrix::from_fn(rmasks.len(), cmasks.len(), |r, c| {
        let (small, large) = if up { (rmasks[r], cmasks[c]) } else { (cmasks[c], rmasks[r]) };
        if small & !large == 0 {
            BigInt::one()
        } else {
            BigInt::default()
        }
    }))
}

/// `W_{t,k}` with colex orders on both sides.
pub fn inclusion_matrix(n: usize, t: usize, k: usize) -> Result<IntMatrix> {
    incidence_matrix(&SubsetOrder::colex(n, t)?, &SubsetOrder::colex(n, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Subset {
        Subset { elems: v.to_vec() }
    }

    #[test]
    fn colex_order_n4_k2() {
        let got = enumerate(4, 2, OrderKind::Colex).unwrap();
        let want = [[1, 2], [1, 3], [2, 3], [1, 4], [2, 4], [3, 4]];
        assert_eq!(got, want.iter().map(|w| s(w)).collect::<Vec<_>>());
    }

    #[test]
    fn empty_subset_order() {
        for n in 0..6 {
            assert_eq!(enumerate(n, 0, OrderKind::Colex).unwrap(), vec![Subset::empty()]);
        }
    }

    #[test]
    fn complement_order_n4_k3() {
        let got = enumerate(4, 3, OrderKind::Complement).unwrap();
        let want = [[2, 3, 4], [1, 3, 4], [1, 2, 4], [1, 2, 3]];
        assert_eq!(got, want.iter().map(|w| s(w)).collect::<Vec<_>>());
    }

    #[test]
    fn bad_orders() {
        assert!(enumerate(4, 5, OrderKind::Colex).is_err());
        assert!(enumerate(4, 1, OrderKind::Complement).is_err());
        assert!(enumerate(64, 1, OrderKind::Colex).is_err());
        assert!(Subset::new(vec![2, 1], 4).is_err());
        assert!(Subset::new(vec![1, 5], 4).is_err());
        assert!(Subset::new(vec![0], 4).is_err());
    }

    #[test]
    fn rank_and_unrank() {
        for n in 0..=10 {
            for k in 0..=n {
                let order = SubsetOrder::colex(n, k).unwrap();
                assert_eq!(order.len(), choose(n, k));
                for (i, sub) in order.iter().enumerate() {
                    assert_eq!(order.index_of(sub), Some(i));
                    assert_eq!(order.colex_unrank(i).as_ref(), Some(sub));
                }
                if 2 * k >= n {
                    let comp = SubsetOrder::complement(n, k).unwrap();
                    for (i, sub) in comp.iter().enumerate() {
                        assert_eq!(comp.index_of(sub), Some(i));
                    }
                }
            }
        }
    }

    #[test]
    fn frankl_rank() {
        assert!(has_full_rank(&s(&[2, 4])));
        assert!(!has_full_rank(&s(&[1, 4])));
        assert!(has_full_rank(&Subset::empty()));
        assert_eq!(count_full_rank(4, 2).unwrap(), 2);
        assert_eq!(count_full_rank(4, 1).unwrap(), 3);
        assert_eq!(count_full_rank(7, 0).unwrap(), 1);
        assert!(count_full_rank(4, 3).is_err());
        assert_eq!(full_rank_subsets(4, 2).unwrap(), vec![s(&[2, 4]), s(&[3, 4])]);
        assert_eq!(full_rank_subsets(4, 1).unwrap(), vec![s(&[2]), s(&[3]), s(&[4])]);
    }

    #[test]
    fn w12_for_n4() {
        let w = inclusion_matrix(4, 1, 2).unwrap();
        let want = IntMatrix::from_rows(&[
            vec![1, 1, 0, 1, 0, 0],
            vec![1, 0, 1, 0, 1, 0],
            vec![0, 1, 1, 0, 0, 1],
            vec![0, 0, 0, 1, 1, 1],
        ])
        .unwrap();
        assert_eq!(w, want);
    }

    #[test]
    fn w01_is_all_ones() {
        for n in 1..8 {
            let w = inclusion_matrix(n, 0, 1).unwrap();
            assert_eq!(w, IntMatrix::from_rows(&[vec![1; n]]).unwrap());
        }
    }

    #[test]
    fn downward_map_is_transpose() {
        let up = inclusion_matrix(6, 2, 4).unwrap();
        let down = inclusion_matrix(6, 4, 2).unwrap();
        assert_eq!(down, up.transpose());
    }

    #[test]
    fn mismatched_ground_sets() {
        let a = SubsetOrder::colex(4, 1).unwrap();
        let b = SubsetOrder::colex(5, 2).unwrap();
        assert!(incidence_matrix(&a, &b).is_err());
    }
}
