//! Diagonal forms, invariant factors and p-elementary divisors.
//!
//! Multiplicities are big integers throughout: the closed-form Smith group of
//! `Q_100` has multiplicities far beyond `u64`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent of `p` in `v`; `None` for `v = 0`. Panics if `p < 2`.
pub fn p_adic_valuation(v: &BigInt, p: u64) -> Option<u32> {
    assert!(p >= 2, "valuation base must be at least 2");
    if v.is_zero() {
        return None;
    }
    let p = BigUint::from(p);
    let mut m = v.magnitude().clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(e);
        }
        m = q;
        e += 1;
    }
}

/// Prime factorization by trial division. Adequate for the small entries
/// this crate produces; the cost grows with the second-largest prime factor.
fn factorize(v: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    if let Some(mut small) = v.to_u64() {
        let mut d = 2u64;
        while d.saturating_mul(d) <= small {
            let mut e = 0;
            while small % d == 0 {
                small /= d;
                e += 1;
            }
            if e > 0 {
                out.push((BigUint::from(d), e));
            }
            d += 1;
        }
        if small > 1 {
            out.push((BigUint::from(small), 1));
        }
        return out;
    }
    let mut rem = v.clone();
    let mut d = BigUint::from(2u32);
    while &d * &d <= rem {
        let mut e = 0;
        loop {
            let (q, r) = rem.div_rem(&d);
            if !r.is_zero() {
                break;
            }
            rem = q;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1u32;
    }
    if rem > BigUint::one() {
        out.push((rem, 1));
    }
    out
}

/// Invariant factors `d_1 | d_2 | ... | d_r` (all positive), stored as runs
/// of equal values, plus the number of zero diagonal positions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct InvariantFactors {
    runs: Vec<(BigInt, BigUint)>,
    zero_count: BigUint,
}

impl InvariantFactors {
    pub fn new(factors: Vec<BigInt>, zero_count: usize) -> Result<Self> {
        Self::from_runs(
            factors.into_iter().map(|f| (f, BigUint::one())).collect(),
            BigUint::from(zero_count),
        )
    }

    /// Validates positivity and the divisibility chain, merging equal
    /// neighbours and dropping empty runs.
    pub fn from_runs(runs: Vec<(BigInt, BigUint)>, zero_count: BigUint) -> Result<Self> {
        let mut merged: Vec<(BigInt, BigUint)> = Vec::with_capacity(runs.len());
        for (value, count) in runs {
            if count.is_zero() {
                continue;
            }
            if !value.is_positive() {
                return Err(Error::InvalidParameter(format!(
                    "invariant factor {value} is not positive"
                )));
            }
            match merged.last_mut() {
                Some((last, c)) if *last == value => {
                    *c += count;
                    continue;
                }
                Some((last, _)) if !value.is_multiple_of(last) => {
                    return Err(Error::InvalidParameter(format!(
                        "{last} does not divide {value}"
                    )));
                }
                _ => merged.push((value, count)),
            }
        }
        Ok(InvariantFactors {
            runs: merged,
            zero_count,
        })
    }

    /// Turns the nonzero diagonal of any diagonal form into invariant
    /// factors by repeated `(a, b) -> (gcd, lcm)` exchanges.
    pub(crate) fn from_diagonal_entries(diag: Vec<BigInt>, zero_count: usize) -> Self {
        let mut d: Vec<BigInt> = diag.into_iter().map(|v| v.abs()).collect();
        d.sort();
        let ones = d.iter().take_while(|v| v.is_one()).count();
        let rest = &mut d[ones..];
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                if rest[j].is_multiple_of(&rest[i]) {
                    continue;
                }
                let g = rest[i].gcd(&rest[j]);
                let l = &rest[i] / &g * &rest[j];
                rest[i] = g;
                rest[j] = l;
            }
        }
        Self::new(d, zero_count).expect("gcd/lcm sweep yields a divisibility chain")
    }

    /// Reassembles invariant factors from per-prime valuation data.
    ///
    /// For each prime the exponents are sorted ascending and laid against the
    /// `rank` positions from the top, so position `q` receives
    /// `prod_p p^{e_p(q)}`. Positions not covered by a table get exponent 0.
    pub fn from_elementary_divisors(
        rank: BigUint,
        zero_count: BigUint,
        tables: &[ElemDivTable],
    ) -> Result<Self> {
        let per_prime: Vec<(BigUint, BTreeMap<u32, BigUint>)> = tables
            .iter()
            .map(|t| (BigUint::from(t.prime), t.mult.clone()))
            .collect();
        assemble(&rank, zero_count, per_prime)
    }

    pub fn runs(&self) -> &[(BigInt, BigUint)] {
        &self.runs
    }

    pub fn zero_count(&self) -> &BigUint {
        &self.zero_count
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> BigUint {
        self.runs.iter().map(|(_, c)| c).sum()
    }

    pub fn multiplicity(&self, value: &BigInt) -> BigUint {
        self.runs
            .iter()
            .find(|(v, _)| v == value)
            .map_or_else(BigUint::zero, |(_, c)| c.clone())
    }

    /// The expanded list `d_1, ..., d_r`. Panics if `r` does not fit in memory
    /// (use [`runs`](Self::runs) for closed-form results).
    pub fn to_vec(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for (v, c) in &self.runs {
            let c = c.to_usize().expect("run too long to expand");
            out.extend(std::iter::repeat_n(v.clone(), c));
        }
        out
    }

    pub fn elementary_divisors(&self, p: u64) -> Result<ElemDivTable> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut mult = BTreeMap::new();
        for (v, c) in &self.runs {
            let e = p_adic_valuation(v, p).expect("factors are nonzero");
            *mult.entry(e).or_insert_with(BigUint::zero) += c;
        }
        ElemDivTable::new(p, mult, self.zero_count.clone())
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.runs.iter().map(|(v, c)| format!("{v}x{c}")).collect();
        write!(f, "[{}] zeros {}", parts.join(", "), self.zero_count)
    }
}

impl fmt::Debug for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn assemble(
    rank: &BigUint,
    zero_count: BigUint,
    per_prime: Vec<(BigUint, BTreeMap<u32, BigUint>)>,
) -> Result<InvariantFactors> {
    // For each prime: ascending (start_position, exponent) segments.
    let mut segments: Vec<(BigUint, Vec<(BigUint, u32)>)> = Vec::new();
    let mut breaks: BTreeSet<BigUint> = BTreeSet::new();
    breaks.insert(BigUint::zero());
    breaks.insert(rank.clone());
    for (p, mult) in per_prime {
        let positive: BigUint = mult.iter().filter(|(e, _)| **e > 0).map(|(_, c)| c).sum();
        if &positive > rank {
            return Err(Error::InvalidParameter(format!(
                "{positive} positive {p}-valuations exceed rank {rank}"
            )));
        }
        let mut pos = rank - &positive;
        let mut segs = vec![(BigUint::zero(), 0u32)];
        for (&e, c) in mult.iter().filter(|(e, c)| **e > 0 && !c.is_zero()) {
            segs.push((pos.clone(), e));
            breaks.insert(pos.clone());
            pos += c;
        }
        segments.push((p, segs));
    }
    let breaks: Vec<BigUint> = breaks.into_iter().collect();
    let mut runs = Vec::new();
    for w in breaks.windows(2) {
        let (start, end) = (&w[0], &w[1]);
        if start >= end {
            continue;
        }
        let mut value = BigUint::one();
        for (p, segs) in &segments {
            let e = segs
                .iter()
                .rev()
                .find(|(s, _)| s <= start)
                .map_or(0, |(_, e)| *e);
            value *= p.pow(e);
        }
        runs.push((BigInt::from(value), end - start));
    }
    InvariantFactors::from_runs(runs, zero_count)
}

/// Multiplicity of each `p^e` among the p-elementary divisors, plus the
/// free rank (number of zero invariant factors).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemDivTable {
    prime: u64,
    mult: BTreeMap<u32, BigUint>,
    free_rank: BigUint,
}

impl ElemDivTable {
    pub fn new(prime: u64, mult: BTreeMap<u32, BigUint>, free_rank: BigUint) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        let mult = mult.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(ElemDivTable {
            prime,
            mult,
            free_rank,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn multiplicity(&self, e: u32) -> BigUint {
        self.mult.get(&e).cloned().unwrap_or_default()
    }

    /// `(exponent, multiplicity)` pairs with nonzero multiplicity, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigUint)> {
        self.mult.iter().map(|(e, c)| (*e, c))
    }

    pub fn multiplicities(&self) -> &BTreeMap<u32, BigUint> {
        &self.mult
    }

    pub fn free_rank(&self) -> &BigUint {
        &self.free_rank
    }

    /// `sum_e mult(e) + free_rank`: the number of diagonal positions.
    pub fn total(&self) -> BigUint {
        self.mult.values().sum::<BigUint>() + &self.free_rank
    }
}

impl fmt::Display for ElemDivTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .mult
            .iter()
            .map(|(e, c)| format!("{}^{e}x{c}", self.prime))
            .collect();
        write!(f, "{{{}}} free {}", parts.join(", "), self.free_rank)
    }
}

impl fmt::Debug for ElemDivTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A diagonal form: a multiset of nonzero diagonal entries and a count of
/// zero diagonal positions, for a matrix of shape `ambient`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagonalForm {
    entries: BTreeMap<BigInt, BigUint>,
    zero_count: BigUint,
    ambient: (BigUint, BigUint),
}

impl DiagonalForm {
    /// A square diagonal form with the given entries and multiplicities.
    pub fn new(
        entries: impl IntoIterator<Item = (BigInt, BigUint)>,
        zero_count: BigUint,
    ) -> Result<Self> {
        let mut map: BTreeMap<BigInt, BigUint> = BTreeMap::new();
        for (v, c) in entries {
            if c.is_zero() {
                continue;
            }
            if v.is_zero() {
                return Err(Error::InvalidParameter(
                    "diagonal form entries must be nonzero; count zeros separately".into(),
                ));
            }
            *map.entry(v).or_default() += c;
        }
        let size = map.values().sum::<BigUint>() + &zero_count;
        Ok(DiagonalForm {
            entries: map,
            zero_count,
            ambient: (size.clone(), size),
        })
    }

    /// Convenience constructor from a plain list of nonzero entries.
    pub fn from_values(values: &[i64], zero_count: usize) -> Result<Self> {
        Self::new(
            values.iter().map(|&v| (BigInt::from(v), BigUint::one())),
            BigUint::from(zero_count),
        )
    }

    /// Re-targets the form at a `rows x cols` matrix; the number of diagonal
    /// positions must equal `min(rows, cols)`.
    pub fn with_ambient(mut self, rows: BigUint, cols: BigUint) -> Result<Self> {
        if self.size() != rows.clone().min(cols.clone()) {
            return Err(Error::Dimension(format!(
                "{} diagonal positions do not match a {rows}x{cols} matrix",
                self.size()
            )));
        }
        self.ambient = (rows, cols);
        Ok(self)
    }

    pub fn entries(&self) -> &BTreeMap<BigInt, BigUint> {
        &self.entries
    }

    pub fn zero_count(&self) -> &BigUint {
        &self.zero_count
    }

    pub fn ambient(&self) -> &(BigUint, BigUint) {
        &self.ambient
    }

    /// Number of diagonal positions.
    pub fn size(&self) -> BigUint {
        self.entries.values().sum::<BigUint>() + &self.zero_count
    }
}

/// Invariant factors of any diagonal form, via per-prime valuation sorting.
/// Invariant under the sign and order of the entries.
pub fn diagonal_form_to_invariant_factors(d: &DiagonalForm) -> InvariantFactors {
    let rank: BigUint = d.entries.values().sum();
    let mut per_prime: BTreeMap<BigUint, BTreeMap<u32, BigUint>> = BTreeMap::new();
    for (v, c) in &d.entries {
        for (p, e) in factorize(v.magnitude()) {
            *per_prime.entry(p).or_default().entry(e).or_default() += c;
        }
    }
    assemble(&rank, d.zero_count.clone(), per_prime.into_iter().collect())
        .expect("valuation counts never exceed the rank")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn factors(v: &[i64], zeros: usize) -> InvariantFactors {
        InvariantFactors::new(v.iter().map(|&x| big(x)).collect(), zeros).unwrap()
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_valuation(&big(48), 2), Some(4));
        assert_eq!(p_adic_valuation(&big(-48), 3), Some(1));
        assert_eq!(p_adic_valuation(&big(7), 2), Some(0));
        assert_eq!(p_adic_valuation(&big(0), 2), None);
    }

    #[test]
    fn factorization() {
        let f = factorize(&BigUint::from(360u32));
        let f: Vec<(u64, u32)> = f.into_iter().map(|(p, e)| (p.to_u64().unwrap(), e)).collect();
        assert_eq!(f, vec![(2, 3), (3, 2), (5, 1)]);
        let big_prime: BigUint = "4294967311".parse().unwrap(); // 2^32 + 15, prime
        let f = factorize(&(&big_prime * 6u32));
        assert_eq!(f.len(), 3);
        assert_eq!(f[2].0, big_prime);
    }

    #[test]
    fn chain_validation() {
        assert!(InvariantFactors::new(vec![big(2), big(3)], 0).is_err());
        assert!(InvariantFactors::new(vec![big(0)], 0).is_err());
        let f = factors(&[1, 1, 2, 2, 6], 1);
        assert_eq!(f.runs().len(), 3);
        assert_eq!(f.rank(), BigUint::from(5u32));
        assert_eq!(f.to_vec().len(), 5);
    }

    #[test]
    fn eigenvalue_diagonal_n3() {
        let d = DiagonalForm::from_values(&[3, 1, 1, 1, -1, -1, -1, -3], 0).unwrap();
        assert_eq!(
            diagonal_form_to_invariant_factors(&d),
            factors(&[1, 1, 1, 1, 1, 1, 3, 3], 0)
        );
    }

    #[test]
    fn closed_form_n4() {
        let mut v = vec![1; 8];
        v.extend([2, 2]);
        let d = DiagonalForm::from_values(&v, 6).unwrap();
        assert_eq!(diagonal_form_to_invariant_factors(&d), factors(&v, 6));
    }

    #[test]
    fn sign_invariance() {
        let d = DiagonalForm::from_values(&[-5], 0).unwrap();
        assert_eq!(diagonal_form_to_invariant_factors(&d), factors(&[5], 0));
    }

    #[test]
    fn coprime_entries_combine() {
        let d = DiagonalForm::from_values(&[2, 3], 0).unwrap();
        assert_eq!(diagonal_form_to_invariant_factors(&d), factors(&[1, 6], 0));
        assert_eq!(
            InvariantFactors::from_diagonal_entries(vec![big(2), big(3)], 0),
            factors(&[1, 6], 0)
        );
    }

    #[test]
    fn zero_entries_rejected() {
        assert!(DiagonalForm::from_values(&[1, 0], 0).is_err());
    }

    #[test]
    fn ambient_must_match() {
        let d = DiagonalForm::from_values(&[1, 2], 1).unwrap();
        assert!(d
            .clone()
            .with_ambient(BigUint::from(3u32), BigUint::from(5u32))
            .is_ok());
        assert!(d
            .with_ambient(BigUint::from(2u32), BigUint::from(5u32))
            .is_err());
    }

    #[test]
    fn elementary_table_round_trip() {
        let f = factors(&[1, 2, 2, 12, 24], 3);
        let t2 = f.elementary_divisors(2).unwrap();
        let t3 = f.elementary_divisors(3).unwrap();
        assert_eq!(t2.multiplicity(0), BigUint::one());
        assert_eq!(t2.multiplicity(1), BigUint::from(2u32));
        assert_eq!(t2.multiplicity(2), BigUint::one());
        assert_eq!(t2.multiplicity(3), BigUint::one());
        assert_eq!(t2.total(), BigUint::from(8u32));
        let back = InvariantFactors::from_elementary_divisors(
            f.rank(),
            f.zero_count().clone(),
            &[t2, t3],
        )
        .unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn table_rejects_composite() {
        assert_eq!(
            ElemDivTable::new(4, BTreeMap::new(), BigUint::zero()),
            Err(Error::NotPrime(4))
        );
        assert!(factors(&[1], 0).elementary_divisors(1).is_err());
    }
}
