use num_bigint::BigInt;

use super::divisors::{is_prime, ElemDivTable, InvariantFactors};
use super::elim;
use super::matrix::IntMatrix;
use crate::{Error, Result};

/// Smith normal form of an arbitrary integer matrix.
///
/// The matrix is diagonalized by unimodular row and column operations
/// (least-magnitude pivoting, `i64` arithmetic with a `BigInt` rerun on
/// overflow); the diagonal is then repaired into a divisibility chain.
/// The zero matrix gives no factors and `zero_count = min(rows, cols)`.
pub fn snf(m: &IntMatrix) -> InvariantFactors {
    let (rows, cols) = m.shape();
    let diag: Vec<BigInt> = match m
        .to_small()
        .and_then(|small| elim::diagonalize(rows, cols, small))
    {
        Some(d) => d.into_iter().map(BigInt::from).collect(),
        None => elim::diagonalize(rows, cols, m.data().to_vec())
            .expect("big arithmetic cannot overflow"),
    };
    let zeros = rows.min(cols) - diag.len();
    InvariantFactors::from_diagonal_entries(diag, zeros)
}

/// Multiplicities of `p^e` among the p-elementary divisors of `m`.
pub fn p_elementary_divisors(m: &IntMatrix, p: u64) -> Result<ElemDivTable> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    snf(m).elementary_divisors(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::Zero;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn factors(v: &[i64], zeros: usize) -> InvariantFactors {
        InvariantFactors::new(v.iter().map(|&x| BigInt::from(x)).collect(), zeros).unwrap()
    }

    #[test]
    fn coprime_diagonal() {
        let d = IntMatrix::from_diagonal(2, 2, &[2, 3]).unwrap();
        assert_eq!(snf(&d), factors(&[1, 6], 0));
    }

    #[test]
    fn four_cycle() {
        let c4 = m(&[
            vec![0, 1, 1, 0],
            vec![1, 0, 0, 1],
            vec![1, 0, 0, 1],
            vec![0, 1, 1, 0],
        ]);
        assert_eq!(snf(&c4), factors(&[1, 1], 2));
    }

    #[test]
    fn zero_and_empty_matrices() {
        assert_eq!(snf(&IntMatrix::zeros(3, 5)), factors(&[], 3));
        assert_eq!(snf(&IntMatrix::zeros(0, 4)), factors(&[], 0));
    }

    #[test]
    fn needs_divisibility_repair() {
        // diag(2, 3, 4) -> [1, 2, 12]
        let d = IntMatrix::from_diagonal(3, 3, &[4, 3, 2]).unwrap();
        assert_eq!(snf(&d), factors(&[1, 2, 12], 0));
    }

    #[test]
    fn dense_example() {
        // Classic example: SNF of [[2,4,4],[-6,6,12],[10,-4,-16]] is diag(2, 6, 12).
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(snf(&a), factors(&[2, 6, 12], 0));
    }

    #[test]
    fn overflowing_entries() {
        let big: BigInt = "340282366920938463463374607431768211456".parse().unwrap(); // 2^128
        let mut a = IntMatrix::zeros(2, 2);
        a.set(0, 0, big.clone()).unwrap();
        a.set(1, 1, big.clone() * 3).unwrap();
        let f = snf(&a);
        assert_eq!(f.to_vec(), vec![big.clone(), big * 3]);
    }

    #[test]
    fn elementary_divisor_tables() {
        let d = IntMatrix::from_diagonal(3, 3, &[4, 6, 0]).unwrap();
        let t = p_elementary_divisors(&d, 2).unwrap();
        assert_eq!(t.multiplicity(0), BigUint::zero());
        assert_eq!(t.multiplicity(1), BigUint::from(1u32));
        assert_eq!(t.multiplicity(2), BigUint::from(1u32));
        assert_eq!(t.free_rank(), &BigUint::from(1u32));

        let t7 = p_elementary_divisors(&IntMatrix::identity(3), 7).unwrap();
        assert_eq!(t7.multiplicity(0), BigUint::from(3u32));
        assert_eq!(t7.free_rank(), &BigUint::zero());

        assert_eq!(p_elementary_divisors(&d, 6), Err(Error::NotPrime(6)));
        assert_eq!(p_elementary_divisors(&d, 1), Err(Error::NotPrime(1)));
    }
}
