//! The n-cube `Q_n` in the vertex basis and the monomial basis, and the
//! block decomposition `Ã = diag(M, N)` for even `n`.
//!
//! Vertices and monomials are indexed by subsets of `{1..n}`, listed by
//! size ascending and colex within each size.

use num_bigint::BigInt;

use crate::binom::choose;
use crate::snf;
use crate::subsets::{incidence_matrix, SubsetOrder};
use crate::{Error, IntMatrix, Result};

/// Default bound on `n` for constructions of size `2^n x 2^n`.
pub const DEFAULT_SIZE_CAP: u32 = 14;

fn check_n(n: u32, cap: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    Ok(())
}

/// Subset masks in graded colex order, with the inverse lookup table.
struct Graded {
    masks: Vec<u64>,
    index: Vec<usize>,
}

impl Graded {
    fn new(n: u32) -> Self {
        let n = n as usize;
        let mut masks = Vec::with_capacity(1 << n);
        for k in 0..=n {
            let order = SubsetOrder::colex(n, k).expect("n is within the cap");
            masks.extend(order.iter().map(|s| s.mask()));
        }
        let mut index = vec![0; 1 << n];
        for (i, &m) in masks.iter().enumerate() {
            index[m as usize] = i;
        }
        Graded { masks, index }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeAdjacency {
    pub n: u32,
    pub matrix: IntMatrix,
}

pub fn adjacency(n: u32) -> Result<CubeAdjacency> {
    adjacency_capped(n, DEFAULT_SIZE_CAP)
}

pub fn adjacency_capped(n: u32, cap: u32) -> Result<CubeAdjacency> {
    check_n(n, cap)?;
    let g = Graded::new(n);
    let size = g.masks.len();
    let mut matrix = IntMatrix::zeros(size, size);
    for (r, &s) in g.masks.iter().enumerate() {
        for bit in 0..n {
            let t = s ^ (1 << bit);
            matrix.set(r, g.index[t as usize], 1)?;
        }
    }
    Ok(CubeAdjacency { n, matrix })
}

/// The Laplacian `nI - A`.
pub fn laplacian(n: u32) -> Result<IntMatrix> {
    let a = adjacency(n)?.matrix;
    let size = a.rows();
    let ni = IntMatrix::from_diagonal(size, size, &vec![BigInt::from(n); size])?;
    ni.add(&a.scaled(&BigInt::from(-1)))
}

/// Matrix of the adjacency operator on the monomial basis `X_I`. Column `I`
/// holds the coefficients of `α(X_I) = (n - 2|I|) X_I + sum_{J ⊂ I, |J| = |I|-1} X_J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialAdjacency {
    pub n: u32,
    pub matrix: IntMatrix,
}

pub fn monomial_adjacency(n: u32) -> Result<MonomialAdjacency> {
    monomial_adjacency_capped(n, DEFAULT_SIZE_CAP)
}

pub fn monomial_adjacency_capped(n: u32, cap: u32) -> Result<MonomialAdjacency> {
    check_n(n, cap)?;
    let g = Graded::new(n);
    let size = g.masks.len();
    let mut matrix = IntMatrix::zeros(size, size);
    for (c, &i) in g.masks.iter().enumerate() {
        let weight = i.count_ones() as i64;
        matrix.set(c, c, i64::from(n) - 2 * weight)?;
        for bit in 0..n {
            if i >> bit & 1 == 1 {
                matrix.set(g.index[(i ^ (1 << bit)) as usize], c, 1)?;
            }
        }
    }
    Ok(MonomialAdjacency { n, matrix })
}

/// Basis change from monomials to vertex indicators: `Z[S, I] = [I ⊆ S]`.
/// Lower unitriangular in the graded order.
pub fn zeta_matrix(n: u32) -> Result<IntMatrix> {
    zeta_matrix_capped(n, DEFAULT_SIZE_CAP)
}

pub fn zeta_matrix_capped(n: u32, cap: u32) -> Result<IntMatrix> {
    check_n(n, cap)?;
    let g = Graded::new(n);
    let size = g.masks.len();
    Ok(IntMatrix::from_fn(size, size, |r, c| {
        let (s, i) = (g.masks[r], g.masks[c]);
        BigInt::from(u8::from(i & !s == 0))
    }))
}

/// `A Z = Z Ã`: the vertex and monomial matrices describe the same operator.
pub fn verify_conjugacy(n: u32) -> Result<bool> {
    let a = adjacency(n)?.matrix;
    let at = monomial_adjacency(n)?.matrix;
    let z = zeta_matrix(n)?;
    Ok(a.multiply(&z)? == z.multiply(&at)?)
}

/// The diagonal blocks of `Ã` for even `n = 2m`.
///
/// `upper` is `M`: rows are the subsets of size `< m`,
/// columns those of size `<= m`, all in colex order. `lower` is `N`: rows of
/// size `>= m`, columns of size `> m`, ordered by complementation (including
/// the second, complement-induced ordering on the `m`-subsets).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPair {
    pub n: u32,
    pub upper: IntMatrix,
    pub lower: IntMatrix,
}

fn scalar(size: usize, v: i64) -> IntMatrix {
    IntMatrix::from_diagonal(size, size, &vec![BigInt::from(v); size]).expect("square")
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

fn check_even(n: u32) -> Result<u32> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::InvalidParameter(format!("n = {n} must be even and positive")));
    }
    Ok(n / 2)
}

/// Builds `M`. Needs no `2^n` storage, so it is only bounded by the subset
/// machinery.
pub fn upper_block(n: u32) -> Result<IntMatrix> {
    let m = check_even(n)? as usize;
    let nn = n as usize;
    let row_sizes: Vec<usize> = (0..m).map(|i| choose(nn, i)).collect();
    let col_sizes: Vec<usize> = (0..=m).map(|i| choose(nn, i)).collect();
    let (ro, co) = (offsets(&row_sizes), offsets(&col_sizes));
    let mut out = IntMatrix::zeros(ro[m], co[m + 1]);
    for i in 0..m {
        out.set_block(ro[i], co[i], &scalar(row_sizes[i], (nn - 2 * i) as i64))?;
        let w = incidence_matrix(&SubsetOrder::colex(nn, i)?, &SubsetOrder::colex(nn, i + 1)?)?;
        out.set_block(ro[i], co[i + 1], &w)?;
    }
    Ok(out)
}

/// Builds `N`.
pub fn lower_block(n: u32) -> Result<IntMatrix> {
    let m = check_even(n)? as usize;
    let nn = n as usize;
    let row_sizes: Vec<usize> = (m..=nn).map(|r| choose(nn, r)).collect();
    let col_sizes: Vec<usize> = (m + 1..=nn).map(|c| choose(nn, c)).collect();
    let (ro, co) = (offsets(&row_sizes), offsets(&col_sizes));
    let mut out = IntMatrix::zeros(*ro.last().unwrap(), *co.last().unwrap());
    for c in m + 1..=nn {
        let (bi, bj) = (c - m, c - m - 1);
        let w = incidence_matrix(
            &SubsetOrder::complement(nn, c - 1)?,
            &SubsetOrder::complement(nn, c)?,
        )?;
        out.set_block(ro[bi - 1], co[bj], &w)?;
        out.set_block(ro[bi], co[bj], &scalar(row_sizes[bi], nn as i64 - 2 * c as i64))?;
    }
    Ok(out)
}

pub fn blocks(n: u32) -> Result<BlockPair> {
    check_n(n, DEFAULT_SIZE_CAP)?;
    Ok(BlockPair {
        n,
        upper: upper_block(n)?,
        lower: lower_block(n)?,
    })
}

impl BlockPair {
    /// `diag(M, N)`: the monomial matrix with the dual ordering on `m`-sets.
    pub fn monomial(&self) -> IntMatrix {
        self.upper.block_diag(&self.lower)
    }

    /// `N'`: reverse the block rows and block columns of `N`, then transpose.
    pub fn lower_reversed(&self) -> IntMatrix {
        let nn = self.n as usize;
        let m = nn / 2;
        let row_sizes: Vec<usize> = (m..=nn).map(|r| choose(nn, r)).collect();
        let col_sizes: Vec<usize> = (m + 1..=nn).map(|c| choose(nn, c)).collect();
        let reversed = |sizes: &[usize]| -> Vec<usize> {
            let off = offsets(sizes);
            (0..sizes.len()).rev().flat_map(|b| off[b]..off[b + 1]).collect()
        };
        self.lower
            .submatrix(&reversed(&row_sizes), &reversed(&col_sizes))
            .expect("permutation of in-range indices")
            .transpose()
    }

    /// Applies the alternating sign flips (block column 0, block row 1,
    /// block column 2, ...) to `N'`. The result equals `M` exactly.
    pub fn sign_flipped(&self) -> IntMatrix {
        let nn = self.n as usize;
        let m = nn / 2;
        let sizes: Vec<usize> = (0..=m).map(|i| choose(nn, i)).collect();
        let off = offsets(&sizes);
        let mut x = self.lower_reversed();
        for idx in 0..=m {
            if idx % 2 == 0 {
                for c in off[idx]..off[idx + 1] {
                    x.negate_col(c);
                }
            } else if idx < m {
                for r in off[idx]..off[idx + 1] {
                    x.negate_row(r);
                }
            }
        }
        x
    }
}

/// `M` and `Nᵗ` are integrally equivalent: their Smith forms agree and the
/// explicit sign-flip sequence turns `N'` into `M`.
pub fn verify_half_lemma(n: u32) -> Result<bool> {
    let pair = blocks(n)?;
    let same_snf = snf(&pair.upper) == snf(&pair.lower.transpose());
    Ok(same_snf && pair.sign_flipped() == pair.upper)
}

/// Sanity helper: the identity `W_{n-k,n-t}` (complement orders) `= W_{t,k}ᵗ`
/// (colex orders) for `0 <= t < k <= n/2`.
pub fn verify_complement_transpose(n: usize, t: usize, k: usize) -> Result<bool> {
    if !(t < k && 2 * k <= n) {
        return Err(Error::InvalidParameter(format!("need {t} < {k} <= n/2, n = {n}")));
    }
    let lhs = incidence_matrix(
        &SubsetOrder::complement(n, n - k)?,
        &SubsetOrder::complement(n, n - t)?,
    )?;
    let rhs = incidence_matrix(&SubsetOrder::colex(n, t)?, &SubsetOrder::colex(n, k)?)?;
    Ok(lhs == rhs.transpose())
}

/// Row sums of the adjacency matrix (each should be `n`).
pub fn row_sums(m: &IntMatrix) -> Vec<BigInt> {
    (0..m.rows()).map(|r| m.row(r).iter().sum()).collect()
}


#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn small_cubes() {
        assert_eq!(adjacency(1).unwrap().matrix, m(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(
            adjacency(2).unwrap().matrix,
            m(&[
                vec![0, 1, 1, 0],
                vec![1, 0, 0, 1],
                vec![1, 0, 0, 1],
                vec![0, 1, 1, 0],
            ])
        );
    }

    #[test]
    fn size_limits() {
        assert!(matches!(adjacency(0), Err(Error::InvalidParameter(_))));
        assert_eq!(adjacency(15), Err(Error::SizeCap { n: 15, cap: 14 }));
        assert_eq!(adjacency_capped(5, 4), Err(Error::SizeCap { n: 5, cap: 4 }));
        assert!(zeta_matrix(15).is_err());
        assert!(monomial_adjacency(15).is_err());
    }

    #[test]
    fn monomial_columns() {
        let at = monomial_adjacency(2).unwrap().matrix;
        // order: {}, {1}, {2}, {1,2}
        assert_eq!(
            at,
            m(&[
                vec![2, 1, 1, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, 0, 1],
                vec![0, 0, 0, -2],
            ])
        );
        let at5 = monomial_adjacency(5).unwrap().matrix;
        assert_eq!(at5[(0, 0)], BigInt::from(5));
        assert!((1..32).all(|r| at5[(r, 0)] == BigInt::default()));
    }

    #[test]
    fn zeta_n1() {
        assert_eq!(zeta_matrix(1).unwrap(), m(&[vec![1, 0], vec![1, 1]]));
    }

    #[test]
    fn conjugacy_small() {
        for n in 1..=5 {
            assert!(verify_conjugacy(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn m_block_n4() {
        let want = m(&[
            vec![4, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0],
            vec![0, 2, 0, 0, 0, 1, 1, 0, 1, 0, 0],
            vec![0, 0, 2, 0, 0, 1, 0, 1, 0, 1, 0],
            vec![0, 0, 0, 2, 0, 0, 1, 1, 0, 0, 1],
            vec![0, 0, 0, 0, 2, 0, 0, 0, 1, 1, 1],
        ]);
        assert_eq!(upper_block(4).unwrap(), want);
    }

    #[test]
    fn m_block_n2() {
        assert_eq!(upper_block(2).unwrap(), m(&[vec![2, 1, 1]]));
        assert_eq!(lower_block(2).unwrap(), m(&[vec![1], vec![1], vec![-2]]));
    }

    #[test]
    fn odd_n_has_no_blocks() {
        assert!(blocks(3).is_err());
        assert!(upper_block(5).is_err());
        assert!(verify_half_lemma(3).is_err());
    }

    #[test]
    fn n_prime_is_m_with_negated_diagonal() {
        for n in [2, 4, 6] {
            let pair = blocks(n).unwrap();
            let np = pair.lower_reversed();
            let mut expected = pair.upper.clone();
            for i in 0..expected.rows() {
                let v = -expected[(i, i)].clone();
                expected.set(i, i, v).unwrap();
            }
            assert_eq!(np, expected, "n = {n}");
            assert_eq!(pair.sign_flipped(), pair.upper);
        }
    }

    #[test]
    fn complement_transpose_identity() {
        for n in 2..=8 {
            for k in 1..=n / 2 {
                for t in 0..k {
                    assert!(verify_complement_transpose(n, t, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn half_lemma_small() {
        assert!(verify_half_lemma(2).unwrap());
        assert!(verify_half_lemma(4).unwrap());
    }
}
