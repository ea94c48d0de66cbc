//! Residue storage backends.
//!
//! Coefficients are residues modulo a power of `p`. When every modulus in
//! play fits in 32 bits the residues live in `u64` words and dot products
//! accumulate in `u128` without intermediate reductions; otherwise they fall
//! back to `BigUint`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;

pub(crate) const NARROW_LIMIT: u64 = 1 << 32;

pub(crate) trait Limb: Clone + Eq + Debug + Send + Sync + 'static {
    type Acc;

    fn from_big(v: &BigUint) -> Self;
    fn to_big(&self) -> BigUint;
    fn add_mod(&self, b: &Self, m: &Self) -> Self;
    fn sub_mod(&self, b: &Self, m: &Self) -> Self;
    fn mul_mod(&self, b: &Self, m: &Self) -> Self;
    fn acc_zero() -> Self::Acc;
    fn acc_add_mul(acc: &mut Self::Acc, a: &Self, b: &Self);
    fn acc_reduce(acc: Self::Acc, m: &Self) -> Self;
}

impl Limb for u64 {
    type Acc = u128;

    fn from_big(v: &BigUint) -> Self {
        v.to_u64().expect("narrow residue overflow")
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
    #[inline]
    fn add_mod(&self, b: &Self, m: &Self) -> Self {
        let s = self + b;
        if s >= *m {
            s - m
        } else {
            s
        }
    }
    #[inline]
    fn sub_mod(&self, b: &Self, m: &Self) -> Self {
        if self >= b {
            self - b
        } else {
            self + m - b
        }
    }
    #[inline]
    fn mul_mod(&self, b: &Self, m: &Self) -> Self {
        (self * b) % m
    }
    #[inline]
    fn acc_zero() -> u128 {
        0
    }
    #[inline]
    fn acc_add_mul(acc: &mut u128, a: &Self, b: &Self) {
        *acc += (*a as u128) * (*b as u128);
    }
    #[inline]
    fn acc_reduce(acc: u128, m: &Self) -> Self {
        if acc < (1u128 << 64) {
            (acc as u64) % m
        } else {
            (acc % (*m as u128)) as u64
        }
    }
}

impl Limb for BigUint {
    type Acc = BigUint;

    fn from_big(v: &BigUint) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
    fn add_mod(&self, b: &Self, m: &Self) -> Self {
        let s = self + b;
        if &s >= m {
            s - m
        } else {
            s
        }
    }
    fn sub_mod(&self, b: &Self, m: &Self) -> Self {
        if self >= b {
            self - b
        } else {
            self + m - b
        }
    }
    fn mul_mod(&self, b: &Self, m: &Self) -> Self {
        (self * b) % m
    }
    fn acc_zero() -> BigUint {
        Zero::zero()
    }
    fn acc_add_mul(acc: &mut BigUint, a: &Self, b: &Self) {
        if !Zero::is_zero(a) && !Zero::is_zero(b) {
            *acc += a * b;
        }
    }
    fn acc_reduce(acc: BigUint, m: &Self) -> Self {
        acc % m
    }
}

/// `p^e` for `e in 0..=max`.
pub(crate) fn big_powers(p: u64, max: u32) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut cur = BigUint::one();
    let pb = BigUint::from(p);
    for _ in 0..=max {
        out.push(cur.clone());
        cur *= &pb;
    }
    out
}
