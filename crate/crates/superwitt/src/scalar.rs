//! Exact rational scalars and small combinatorial helpers.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Every coefficient in the crate is an arbitrary-precision rational,
/// kept in lowest terms with a positive denominator by construction.
pub type Scalar = num_rational::BigRational;

/// Rational `num/den`.  Panics when `den == 0`.
pub fn q(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a scalar.
pub fn qi(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn is_integer(x: &Scalar) -> bool {
    x.denom().is_one()
}

pub fn to_i64(x: &Scalar) -> Option<i64> {
    if is_integer(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

/// `k!` as a big integer.
pub fn factorial(k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 2..=k {
        acc *= BigInt::from(j);
    }
    acc
}

/// Binomial coefficient `C(n, k)` as a scalar.
pub fn binom(n: u64, k: u64) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
    }
    Scalar::new(acc, factorial(k))
}

/// `r^k / k!` for multi-indices, the coefficient attached to a jet of
/// multi-degree `k` when an operator family is evaluated at `r`.
/// Requires `r.len() == k.len()`.
pub fn power_over_factorial(r: &[i64], k: &[i64]) -> Scalar {
    debug_assert_eq!(r.len(), k.len());
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (ri, ki) in r.iter().zip(k.iter()) {
        debug_assert!(*ki >= 0);
        num *= BigInt::from(*ri).pow(*ki as u32);
        den *= factorial(*ki as u64);
    }
    Scalar::new(num, den)
}

/// All multi-indices `k` in `{0..=per_var}^len`.
pub fn multi_indices(len: usize, per_var: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, per_var: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..=per_var {
            cur.push(v);
            rec(len, per_var, cur, out);
            cur.pop();
        }
    }
    rec(len, per_var, &mut cur, &mut out);
    out
}

/// All integer vectors of the given length with sup-norm at most `radius`.
pub fn window(len: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, radius: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in -radius..=radius {
            cur.push(v);
            rec(len, radius, cur, out);
            cur.pop();
        }
    }
    rec(len, radius, &mut cur, &mut out);
    out
}

/// Sup-norm of an integer vector.
pub fn sup_norm(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// Sum of absolute values; the termination metric for window reductions.
pub fn l1_norm(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn sign_scalar(neg: bool) -> Scalar {
    if neg {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// Apply an optional sign flip to a scalar.
pub fn signed(c: Scalar, neg: bool) -> Scalar {
    if neg {
        -c
    } else {
        c
    }
}

/// True when the scalar is a negative rational; used for printing.
pub fn is_negative(x: &Scalar) -> bool {
    x.is_negative()
}
