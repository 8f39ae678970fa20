use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use proptest::prelude::*;
use smithcube::bigmat::text::{parse_sparse, write_sparse};
use smithcube::bigmat::{is_prime, p_adic_valuation};
use smithcube::{
    diagonal_form_to_invariant_factors, p_elementary_divisors, snf, DiagonalForm, ElemDivTable,
    IntMatrix, InvariantFactors,
};

fn matrix(max_dim: usize, max_entry: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-max_entry..=max_entry, r * c).prop_map(move |v| {
            IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j]))
        })
    })
}

#[derive(Clone, Debug)]
enum Op {
    AddRow(usize, usize, i64),
    AddCol(usize, usize, i64),
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    NegRow(usize),
    NegCol(usize),
}

fn ops(n: usize) -> impl Strategy<Value = Vec<Op>> {
    let op = (0..6u8, 0..n.max(1), 0..n.max(1), -3i64..=3).prop_map(|(kind, a, b, k)| match kind {
        0 => Op::AddRow(a, b, k),
        1 => Op::AddCol(a, b, k),
        2 => Op::SwapRows(a, b),
        3 => Op::SwapCols(a, b),
        4 => Op::NegRow(a),
        _ => Op::NegCol(a),
    });
    prop::collection::vec(op, 0..24)
}

/// Applies row ops (modulo the row count) and column ops (modulo the
/// column count); each is an elementary unimodular operation.
fn apply(m: &IntMatrix, ops: &[Op]) -> IntMatrix {
    let mut x = m.clone();
    let (r, c) = x.shape();
    for op in ops {
        match *op {
            Op::AddRow(a, b, k) if r > 1 && a % r != b % r => {
                x.add_row_multiple(a % r, b % r, &BigInt::from(k))
            }
            Op::AddCol(a, b, k) if c > 1 && a % c != b % c => {
                x.add_col_multiple(a % c, b % c, &BigInt::from(k))
            }
            Op::SwapRows(a, b) if r > 0 => x.swap_rows(a % r, b % r),
            Op::SwapCols(a, b) if c > 0 => x.swap_cols(a % c, b % c),
            Op::NegRow(a) if r > 0 => x.negate_row(a % r),
            Op::NegCol(a) if c > 0 => x.negate_col(a % c),
            _ => {}
        }
    }
    x
}

fn primes_dividing(f: &InvariantFactors) -> Vec<u64> {
    let top = f.runs().last().map(|(v, _)| v.clone()).unwrap_or_else(|| BigInt::from(1));
    let mut rest: u64 = top.try_into().expect("test matrices have small invariant factors");
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            out.push(p);
            while rest.is_multiple_of(p) {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        out.push(rest);
    }
    out
}

fn square(max_dim: usize, max_entry: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(-max_entry..=max_entry, n * n)
            .prop_map(move |v| IntMatrix::from_fn(n, n, |i, j| BigInt::from(v[i * n + j])))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_invariant_under_unimodular_ops(m in matrix(6, 9), o in ops(6)) {
        prop_assert_eq!(snf(&apply(&m, &o)), snf(&m));
    }

    #[test]
    fn snf_invariant_under_transpose(m in matrix(7, 20)) {
        prop_assert_eq!(snf(&m.transpose()), snf(&m));
    }

    #[test]
    fn snf_is_a_divisibility_chain(m in matrix(7, 50)) {
        let f = snf(&m);
        let v = f.to_vec();
        for w in v.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        let (r, c) = m.shape();
        prop_assert_eq!(f.rank() + f.zero_count(), BigUint::from(r.min(c)));
    }

    #[test]
    fn snf_product_matches_determinant(m in square(5, 9)) {
        let det = m.determinant().unwrap();
        let f = snf(&m);
        if det.is_zero() {
            prop_assert!(!f.zero_count().is_zero());
        } else {
            let prod: BigInt = f.to_vec().iter().product();
            prop_assert_eq!(prod, det.magnitude().clone().into());
        }
    }

    #[test]
    fn elementary_tables_reconstruct_snf(m in matrix(6, 30)) {
        let f = snf(&m);
        let tables: Vec<ElemDivTable> = primes_dividing(&f)
            .into_iter()
            .map(|p| p_elementary_divisors(&m, p).unwrap())
            .collect();
        for t in &tables {
            prop_assert_eq!(t.free_rank(), f.zero_count());
            prop_assert_eq!(t.total(), f.rank() + f.zero_count());
        }
        let back = InvariantFactors::from_elementary_divisors(f.rank(), f.zero_count().clone(), &tables).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn diagonal_conversion_keeps_valuations(
        vals in prop::collection::vec((1i64..=500, any::<bool>()), 0..12),
        zeros in 0usize..4,
    ) {
        let entries: Vec<i64> = vals.iter().map(|&(v, neg)| if neg { -v } else { v }).collect();
        let d = DiagonalForm::from_values(&entries, zeros).unwrap();
        let f = diagonal_form_to_invariant_factors(&d);
        prop_assert_eq!(f.zero_count(), &BigUint::from(zeros));
        for p in (2..=500u64).filter(|&p| is_prime(p)) {
            let mut want: BTreeMap<u32, BigUint> = BTreeMap::new();
            for &v in &entries {
                *want.entry(p_adic_valuation(&BigInt::from(v), p).unwrap()).or_default() += 1u32;
            }
            let table = f.elementary_divisors(p).unwrap();
            prop_assert_eq!(table.multiplicities(), &want);
        }
        // order and sign of the input do not matter
        let mut rev: Vec<i64> = entries.iter().rev().map(|v| -v).collect();
        rev.rotate_left(entries.len() / 2);
        let g = diagonal_form_to_invariant_factors(&DiagonalForm::from_values(&rev, zeros).unwrap());
        prop_assert_eq!(g, f);
    }

    #[test]
    fn diagonal_conversion_matches_snf(vals in prop::collection::vec(-60i64..=60, 1..8)) {
        let zeros = vals.iter().filter(|v| **v == 0).count();
        let nonzero: Vec<i64> = vals.iter().copied().filter(|v| *v != 0).collect();
        let d = DiagonalForm::from_values(&nonzero, zeros).unwrap();
        let m = IntMatrix::from_diagonal(vals.len(), vals.len(), &vals).unwrap();
        prop_assert_eq!(diagonal_form_to_invariant_factors(&d), snf(&m));
    }

    #[test]
    fn sparse_text_round_trip(m in matrix(8, 1_000_000)) {
        let text = write_sparse(&m);
        prop_assert_eq!(parse_sparse(&text).unwrap(), m);
    }
}

#[test]
fn fixtures() {
    let f = |v: &[i64], z: usize| InvariantFactors::new(v.iter().map(|&x| BigInt::from(x)).collect(), z).unwrap();
    let d = |v: &[i64], z: usize| diagonal_form_to_invariant_factors(&DiagonalForm::from_values(v, z).unwrap());
    assert_eq!(d(&[3, 3, 1, 1, 1, 1, 1, 1], 0), f(&[1, 1, 1, 1, 1, 1, 3, 3], 0));
    assert_eq!(d(&[1, 1, 1, 1, 1, 1, 1, 1, 2, 2], 6), f(&[1, 1, 1, 1, 1, 1, 1, 1, 2, 2], 6));
    assert_eq!(d(&[-5], 0), f(&[5], 0));

    let m = IntMatrix::from_rows(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 0]]).unwrap();
    let t = p_elementary_divisors(&m, 2).unwrap();
    assert_eq!(t.multiplicities(), &BTreeMap::from([(1, BigUint::from(1u32)), (2, BigUint::from(1u32))]));
    assert_eq!(t.free_rank(), &BigUint::from(1u32));
    assert!(p_elementary_divisors(&m, 1).is_err());
    assert!(p_elementary_divisors(&m, 6).is_err());
    let id = IntMatrix::identity(3);
    assert_eq!(p_elementary_divisors(&id, 7).unwrap().multiplicity(0), BigUint::from(3u32));
}
