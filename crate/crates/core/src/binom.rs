//! Binomial coefficients, with `C(n, k) = 0` for `k < 0` or `k > n`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// `C(n, k)` as a big integer; zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Signed variant, convenient for telescoping differences.
pub fn binomial_signed(n: u64, k: i64) -> BigInt {
    BigInt::from(binomial(n, k))
}

/// `C(n, k)` for small arguments. Panics on overflow of `usize`.
pub fn choose(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc
            .checked_mul(n - i)
            .expect("binomial coefficient overflows usize")
            / (i + 1);
    }
    acc
}

/// `n_j = C(n, j) - C(n, j - 1)`: the number of `j`-subsets of full rank.
pub fn full_rank_count(n: u64, j: i64) -> BigUint {
    let hi = binomial(n, j);
    let lo = binomial(n, j - 1);
    if hi >= lo {
        hi - lo
    } else {
        BigUint::zero()
    }
}
