//! The 2-local structural reduction and the closed-form Smith group of `Q_n`.
//!
//! For `n = 2m`, `M` is integrally equivalent to
//! `B = E(m-1) · M · E(m)^{-1}`, whose diagonal blocks are `(n - 2i)I` and
//! whose superdiagonal blocks are the Wilson forms `D_{i-1,i}`. Over the
//! 2-local integers `B` is equivalent to `B'` (its diagonal zeroed), which is
//! already diagonal. The condensed matrix `B̄(m)` in [`condensed`] is used
//! to carry out that equivalence exactly.

pub mod condensed;
mod local2;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::binom::{binomial, choose, full_rank_count};
use crate::canonical::{canonical_block, wilson_form};
use crate::bigmat::{is_prime, p_adic_valuation};
use crate::canonical::build_e;
use crate::cube::{adjacency_capped, laplacian, upper_block};
use crate::{
    diagonal_form_to_invariant_factors, p_elementary_divisors, DiagonalForm, ElemDivTable, Error,
    IntMatrix, InvariantFactors, Result,
};

pub use condensed::{
    build_condensed, reduce_condensed, two_local_multiplicities, ColLabel, CondensedMatrix,
    OddPivot, ReductionStep, RowLabel,
};
pub use local2::Local2;

/// Default bound on `n` for routes that run generic elimination on the
/// `2^n x 2^n` adjacency matrix.
pub const DEFAULT_ORACLE_CAP: u32 = 10;

fn half(n: u32) -> Result<u32> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n = {n} must be even and positive")));
    }
    Ok(n / 2)
}

/// `B` and `B'` for even `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BMatrices {
    pub n: u32,
    pub b: IntMatrix,
    pub b_prime: IntMatrix,
}

/// Computes `B = E(m-1) · M · E(m)^{-1}` and checks its shape: scalar
/// diagonal blocks `(n - 2i)I` and superdiagonal blocks `D_{i,i+1}`.
pub fn build_b(n: u32) -> Result<BMatrices> {
    let m = half(n)? as usize;
    let nn = n as usize;
    let upper = upper_block(n)?;
    let left = canonical_block(nn, m - 1)?;
    let right_inv = IntMatrix::block_diag_all(
        &(0..=m)
            .map(|k| build_e(nn, k)?.matrix.inverse_unimodular())
            .collect::<Result<Vec<_>>>()?,
    );
    let b = left.multiply(&upper)?.multiply(&right_inv)?;

    let mut expected = IntMatrix::zeros(b.rows(), b.cols());
    let (mut r0, mut c0) = (0, 0);
    for i in 0..m {
        let size = choose(nn, i);
        let d = BigInt::from(nn as i64 - 2 * i as i64);
        for x in 0..size {
            expected.set(r0 + x, c0 + x, d.clone())?;
        }
        expected.set_block(r0, c0 + size, &wilson_form(nn, i, i + 1)?.matrix)?;
        r0 += size;
        c0 += size;
    }
    if b != expected {
        return Err(Error::Structure(format!(
            "E(m-1) M E(m)^-1 for n = {n} is not block bidiagonal with Wilson blocks"
        )));
    }
    let mut b_prime = b.clone();
    for r in 0..b.rows() {
        b_prime.set(r, r, 0)?;
    }
    Ok(BMatrices { n, b, b_prime })
}

/// `Σ_{i=k}^{m} [C(n, i-k) - C(n, i-1-k)]`, the multiplicity of `k` in `B'`.
pub fn telescoping_sum(n: u64, k: u64, m: u64) -> BigUint {
    (k..=m).map(|i| full_rank_count(n, (i - k) as i64)).sum()
}

/// Closed-form Smith data of `M` (equivalently `B'`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSummary {
    pub n: u32,
    /// `k ↦ C(n, m - k)` for `k = 1..m`.
    pub nonzero: BTreeMap<BigUint, BigUint>,
    /// Columns of `M` beyond its rank: `C(n, m)`.
    pub surplus_columns: BigUint,
    pub invariant_factors: InvariantFactors,
}

pub fn snf_bprime_closed_form(n: u32) -> Result<HalfSummary> {
    let m = half(n)? as u64;
    let nonzero: BTreeMap<BigUint, BigUint> = (1..=m)
        .map(|k| (BigUint::from(k), binomial(n as u64, (m - k) as i64)))
        .collect();
    let form = DiagonalForm::new(
        nonzero.iter().map(|(k, c)| (BigInt::from(k.clone()), c.clone())),
        BigUint::zero(),
    )?;
    Ok(HalfSummary {
        n,
        invariant_factors: diagonal_form_to_invariant_factors(&form),
        nonzero,
        surplus_columns: binomial(n as u64, m as i64),
    })
}

/// 2-elementary divisors of `M` by the recursive condensed reduction.
pub fn two_local_divisors_of_m(n: u32) -> Result<ElemDivTable> {
    let m = half(n)? as usize;
    let mult = two_local_multiplicities(&build_condensed(m)?)?;
    ElemDivTable::new(2, mult, BigUint::zero())
}

/// `e ↦ Σ_{1 <= k <= m, v_2(k) = e} C(n, m - k)`.
pub fn two_local_closed_form(n: u32) -> Result<ElemDivTable> {
    let m = half(n)? as u64;
    let mut mult: BTreeMap<u32, BigUint> = BTreeMap::new();
    for k in 1..=m {
        *mult.entry(k.trailing_zeros()).or_default() += binomial(n as u64, (m - k) as i64);
    }
    ElemDivTable::new(2, mult, BigUint::zero())
}

/// The Smith group of `Q_n`: free rank, a diagonal form of the torsion part
/// (value ↦ multiplicity), and the invariant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithGroupSummary {
    pub n: u32,
    pub free_rank: BigUint,
    pub nonzero: BTreeMap<BigUint, BigUint>,
    pub invariant_factors: InvariantFactors,
}

impl SmithGroupSummary {
    pub fn from_diagonal(
        n: u32,
        free_rank: BigUint,
        nonzero: BTreeMap<BigUint, BigUint>,
    ) -> Result<Self> {
        let form = DiagonalForm::new(
            nonzero.iter().map(|(v, c)| (BigInt::from(v.clone()), c.clone())),
            free_rank.clone(),
        )?;
        Ok(SmithGroupSummary {
            n,
            invariant_factors: diagonal_form_to_invariant_factors(&form),
            free_rank,
            nonzero,
        })
    }

    pub fn from_invariant_factors(n: u32, inv: InvariantFactors) -> Self {
        let nonzero = inv
            .runs()
            .iter()
            .map(|(v, c)| (v.magnitude().clone(), c.clone()))
            .collect();
        SmithGroupSummary {
            n,
            free_rank: inv.zero_count().clone(),
            nonzero,
            invariant_factors: inv,
        }
    }

    /// Number of diagonal positions; `2^n` for the cube.
    pub fn total(&self) -> BigUint {
        self.nonzero.values().sum::<BigUint>() + &self.free_rank
    }

    /// Same group: equal free rank and invariant factors.
    pub fn same_group(&self, other: &SmithGroupSummary) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }

    /// `free_rank R` followed by `value multiplicity` lines, ascending.
    pub fn to_text(&self) -> String {
        let mut out = format!("free_rank {}\n", self.free_rank);
        for (v, c) in &self.nonzero {
            out.push_str(&format!("{v} {c}\n"));
        }
        out
    }

    pub fn parse(n: u32, text: &str) -> Result<Self> {
        let parse_err = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let free_rank = first
            .trim()
            .strip_prefix("free_rank ")
            .and_then(|v| v.trim().parse::<BigUint>().ok())
            .ok_or_else(|| parse_err(1, "expected `free_rank R`"))?;
        let mut nonzero = BTreeMap::new();
        let mut last: Option<BigUint> = None;
        for (idx, line) in lines {
            let mut parts = line.split_whitespace();
            let (Some(v), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err(idx + 1, "expected `value multiplicity`"));
            };
            let v: BigUint = v.parse().map_err(|_| parse_err(idx + 1, "bad value"))?;
            let c: BigUint = c.parse().map_err(|_| parse_err(idx + 1, "bad multiplicity"))?;
            if v.is_zero() || c.is_zero() {
                return Err(parse_err(idx + 1, "values and multiplicities must be positive"));
            }
            if last.as_ref().is_some_and(|l| l >= &v) {
                return Err(parse_err(idx + 1, "values must be strictly ascending"));
            }
            last = Some(v.clone());
            nonzero.insert(v, c);
        }
        Self::from_diagonal(n, free_rank, nonzero)
    }
}

impl fmt::Display for SmithGroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Eigenvalues `n - 2l` with multiplicity `C(n, l)`, keyed by value.
pub fn eigenvalues(n: u32) -> BTreeMap<BigInt, BigUint> {
    (0..=n as i64)
        .map(|l| (BigInt::from(n as i64 - 2 * l), binomial(n as u64, l)))
        .collect()
}

/// Closed-form Smith group. Even `n`: `C(n, m)` zeros and `k` with
/// multiplicity `2 C(n, m - k)`. Odd `n`: the eigenvalue diagonal.
pub fn smith_group(n: u32) -> Result<SmithGroupSummary> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let nn = n as u64;
    if n.is_multiple_of(2) {
        let m = nn / 2;
        let nonzero = (1..=m)
            .map(|k| (BigUint::from(k), binomial(nn, (m - k) as i64) * 2u32))
            .collect();
        SmithGroupSummary::from_diagonal(n, binomial(nn, m as i64), nonzero)
    } else {
        let mut nonzero: BTreeMap<BigUint, BigUint> = BTreeMap::new();
        for (v, c) in eigenvalues(n) {
            *nonzero.entry(v.magnitude().clone()).or_default() += c;
        }
        SmithGroupSummary::from_diagonal(n, BigUint::zero(), nonzero)
    }
}

/// Smith group by generic elimination on the adjacency matrix.
pub fn smith_group_oracle(n: u32, cap: u32) -> Result<SmithGroupSummary> {
    let a = adjacency_capped(n, cap)?;
    Ok(SmithGroupSummary::from_invariant_factors(n, crate::snf(&a.matrix)))
}

/// Smith group from the structural route (even `n`): the 2-part comes from
/// the condensed reduction of `M`, doubled for `Ã = diag(M, N)`; the odd
/// part comes from the eigenvalue diagonal, which is a `ℤ_(p)` diagonal
/// form for every odd `p`.
pub fn smith_group_via_reduction(n: u32) -> Result<SmithGroupSummary> {
    let m = half(n)?;
    let nn = n as u64;
    let two = two_local_divisors_of_m(n)?;
    let doubled = two.iter().map(|(e, c)| (e, c * 2u32)).collect();
    let mut tables = vec![ElemDivTable::new(2, doubled, BigUint::zero())?];

    let eig: Vec<(BigInt, BigUint)> = eigenvalues(n).into_iter().filter(|(v, _)| !v.is_zero()).collect();
    for p in (3..=nn).filter(|&p| is_prime(p)) {
        let mut mult: BTreeMap<u32, BigUint> = BTreeMap::new();
        for (v, c) in &eig {
            let e = p_adic_valuation(v, p).expect("nonzero");
            if e > 0 {
                *mult.entry(e).or_default() += c;
            }
        }
        tables.push(ElemDivTable::new(p, mult, BigUint::zero())?);
    }
    let free_rank = binomial(nn, m as i64);
    let rank = (BigUint::one() << n) - &free_rank;
    let inv = InvariantFactors::from_elementary_divisors(rank, free_rank, &tables)?;
    Ok(SmithGroupSummary::from_invariant_factors(n, inv))
}

/// Both sides of the conjectured relation between the 2-elementary divisors
/// of `A` and the 2-adic valuations of its eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureCheck {
    pub n: u32,
    /// Whether the divisor side came from generic elimination.
    pub used_oracle: bool,
    /// `i ↦` multiplicity of `2^i` as a 2-elementary divisor of `A`.
    pub divisors: BTreeMap<u32, BigUint>,
    /// `i ↦ #{λ ≠ 0 : v_2(λ) = i + 1}`.
    pub eigenvalue_counts: BTreeMap<u32, BigUint>,
}

impl ConjectureCheck {
    pub fn holds(&self) -> bool {
        self.divisors == self.eigenvalue_counts
    }
}

/// Uses generic elimination for `n <= oracle_cap` and the closed form
/// beyond.
pub fn verify_conjecture(n: u32, oracle_cap: u32) -> Result<ConjectureCheck> {
    half(n)?;
    let used_oracle = n <= oracle_cap;
    let table = if used_oracle {
        p_elementary_divisors(&adjacency_capped(n, oracle_cap)?.matrix, 2)?
    } else {
        smith_group(n)?.invariant_factors.elementary_divisors(2)?
    };
    let mut eigenvalue_counts: BTreeMap<u32, BigUint> = BTreeMap::new();
    for (v, c) in eigenvalues(n) {
        if v.is_zero() {
            continue;
        }
        let e = p_adic_valuation(&v, 2).expect("nonzero");
        if e == 0 {
            return Err(Error::Structure(format!("odd eigenvalue {v} for even n = {n}")));
        }
        *eigenvalue_counts.entry(e - 1).or_default() += c;
    }
    Ok(ConjectureCheck {
        n,
        used_oracle,
        divisors: table.multiplicities().clone(),
        eigenvalue_counts,
    })
}

/// Multiplicities of `2^i` for `i < s` in `A` and in the Laplacian
/// `nI - A`, where `n = 2^s`. The two matrices agree modulo `2^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianReport {
    pub n: u32,
    pub s: u32,
    /// `(i, multiplicity in A, multiplicity in nI - A)` for `i < s`.
    pub rows: Vec<(u32, BigUint, BigUint)>,
}

impl LaplacianReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|(_, a, l)| a == l)
    }
}

pub fn laplacian_partial_check(n: u32, cap: u32) -> Result<LaplacianReport> {
    if !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("n = {n} is not a power of 2")));
    }
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let s = n.trailing_zeros();
    let a = p_elementary_divisors(&adjacency_capped(n, cap)?.matrix, 2)?;
    let l = p_elementary_divisors(&laplacian(n)?, 2)?;
    Ok(LaplacianReport {
        n,
        s,
        rows: (0..s)
            .map(|i| (i, a.multiplicity(i), l.multiplicity(i)))
            .collect(),
    })
}
