//! Canonical bases of the subset modules and the diagonal forms of the
//! inclusion matrices.
//!
//! For `j <= k <= n/2`, `E_{j,k}` is the block of `W_{j,k}` on the rows of
//! full-rank `j`-subsets, and `E_k` stacks `E_{0,k}, ..., E_{k,k}`. `E_k` is
//! unimodular, and `E_t W_{t,k} = D_{t,k} E_k` where `D_{t,k}` is the
//! diagonal matrix carrying `C(k - j, t - j)` with multiplicity
//! `C(n, j) - C(n, j - 1)`.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::binom::choose;
use crate::subsets::{count_full_rank, full_rank_subsets, inclusion_matrix, Subset, SubsetOrder};
use crate::{DiagonalForm, Error, IntMatrix, Result};

fn check_bounds(n: usize, j: usize, k: usize) -> Result<()> {
    if j > k || 2 * k > n {
        return Err(Error::InvalidParameter(format!(
            "need {j} <= {k} <= n/2 with n = {n}"
        )));
    }
    Ok(())
}

/// Rows of `W_{j,k}` labelled by the full-rank `j`-subsets, in colex order.
pub fn build_e_jk(n: usize, j: usize, k: usize) -> Result<IntMatrix> {
    check_bounds(n, j, k)?;
    let rows = full_rank_subsets(n, j)?;
    let cols = SubsetOrder::colex(n, k)?;
    let cmasks: Vec<u64> = cols.iter().map(Subset::mask).collect();
    Ok(IntMatrix::from_fn(rows.len(), cmasks.len(), |r, c| {
        let jm = rows[r].mask();
        BigInt::from(u8::from(jm & !cmasks[c] == 0))
    }))
}

/// The canonical basis `E_k` of the `k`-subset module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalBasis {
    pub n: usize,
    pub k: usize,
    pub matrix: IntMatrix,
    /// `(j, J)` for each row: the row is the image of the full-rank
    /// `j`-subset `J`. Ascending in `j`, colex within each `j`.
    pub row_labels: Vec<(usize, Subset)>,
}

pub fn build_e(n: usize, k: usize) -> Result<CanonicalBasis> {
    check_bounds(n, k, k)?;
    let size = choose(n, k);
    let mut matrix = IntMatrix::zeros(size, size);
    let mut row_labels = Vec::with_capacity(size);
    let mut r0 = 0;
    for j in 0..=k {
        let block = build_e_jk(n, j, k)?;
        matrix.set_block(r0, 0, &block)?;
        r0 += block.rows();
        row_labels.extend(full_rank_subsets(n, j)?.into_iter().map(|s| (j, s)));
    }
    debug_assert_eq!(r0, size);
    Ok(CanonicalBasis {
        n,
        k,
        matrix,
        row_labels,
    })
}

/// `E(k) = diag(E_0, E_1, ..., E_k)`.
pub fn canonical_block(n: usize, k: usize) -> Result<IntMatrix> {
    let parts = (0..=k)
        .map(|j| build_e(n, j).map(|e| e.matrix))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::block_diag_all(&parts))
}

/// Wilson's diagonal form `D_{t,k}` of `W_{t,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WilsonForm {
    pub n: usize,
    pub t: usize,
    pub k: usize,
    pub matrix: IntMatrix,
}

impl WilsonForm {
    /// Leading-diagonal entries, in block order `j = 0..t`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.t.min(self.k) + 1)
            .flat_map(|j| {
                let v = BigInt::from(choose(self.k - j, self.t - j));
                let mult = count_full_rank(self.n, j).expect("j <= t <= n/2");
                std::iter::repeat_n(v, mult)
            })
            .collect()
    }

    pub fn diagonal_form(&self) -> DiagonalForm {
        let rows = BigUint::from(self.matrix.rows());
        let cols = BigUint::from(self.matrix.cols());
        DiagonalForm::new(
            self.diagonal().into_iter().map(|v| (v, BigUint::one())),
            BigUint::from(0u32),
        )
        .and_then(|d| d.with_ambient(rows, cols))
        .expect("binomial entries are positive and fill the rows")
    }
}

pub fn wilson_form(n: usize, t: usize, k: usize) -> Result<WilsonForm> {
    check_bounds(n, t, k)?;
    let mut form = WilsonForm {
        n,
        t,
        k,
        matrix: IntMatrix::zeros(choose(n, t), choose(n, k)),
    };
    let diag = form.diagonal();
    debug_assert_eq!(diag.len(), choose(n, t));
    form.matrix = IntMatrix::from_diagonal(choose(n, t), choose(n, k), &diag)?;
    Ok(form)
}

/// Checks `E_t W_{t,k} = D_{t,k} E_k`, which with `E_k` unimodular is the
/// statement `E_t W_{t,k} E_k^{-1} = D_{t,k}`.
pub fn verify_bier(n: usize, t: usize, k: usize) -> Result<bool> {
    check_bounds(n, t, k)?;
    let et = build_e(n, t)?.matrix;
    let ek = build_e(n, k)?.matrix;
    let w = inclusion_matrix(n, t, k)?;
    let d = wilson_form(n, t, k)?.matrix;
    Ok(et.multiply(&w)? == d.multiply(&ek)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn e_blocks_n4() {
        assert_eq!(build_e_jk(4, 0, 2).unwrap(), m(&[vec![1; 6]]));
        assert_eq!(
            build_e_jk(4, 1, 2).unwrap(),
            m(&[
                vec![1, 0, 1, 0, 1, 0],
                vec![0, 1, 1, 0, 0, 1],
                vec![0, 0, 0, 1, 1, 1],
            ])
        );
        assert_eq!(
            build_e_jk(4, 2, 2).unwrap(),
            m(&[vec![0, 0, 0, 0, 1, 0], vec![0, 0, 0, 0, 0, 1]])
        );
        assert!(build_e_jk(4, 1, 3).is_err());
        assert!(build_e_jk(4, 2, 1).is_err());
    }

    #[test]
    fn e1_n4() {
        let e = build_e(4, 1).unwrap();
        assert_eq!(
            e.matrix,
            m(&[
                vec![1, 1, 1, 1],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ])
        );
        let labels: Vec<usize> = e.row_labels.iter().map(|(j, _)| *j).collect();
        assert_eq!(labels, vec![0, 1, 1, 1]);
    }

    #[test]
    fn e0_is_identity() {
        for n in 0..8 {
            assert_eq!(build_e(n, 0).unwrap().matrix, IntMatrix::identity(1));
        }
    }

    #[test]
    fn wilson_examples() {
        let d = wilson_form(4, 1, 2).unwrap();
        assert_eq!(d.matrix.shape(), (4, 6));
        assert_eq!(d.diagonal(), [2, 1, 1, 1].map(BigInt::from).to_vec());
        let d = wilson_form(4, 0, 1).unwrap();
        assert_eq!(d.matrix, m(&[vec![1, 0, 0, 0]]));
        let d = wilson_form(6, 2, 2).unwrap();
        assert_eq!(d.matrix, IntMatrix::identity(15));
        assert!(wilson_form(4, 2, 1).is_err());
        assert!(wilson_form(5, 1, 3).is_err());
    }

    #[test]
    fn bier_small() {
        assert!(verify_bier(4, 1, 2).unwrap());
        for n in 0..7 {
            for t in 0..=n / 2 {
                assert!(verify_bier(n, t, t).unwrap());
            }
        }
    }

    #[test]
    fn canonical_block_shape() {
        let e2 = canonical_block(4, 2).unwrap();
        assert_eq!(e2.shape(), (11, 11));
        assert!(e2.is_unimodular().unwrap());
    }
}
