//! Scalars of `Z_p` and `F_p` at tracked finite precision.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limb::{big_powers, NARROW_LIMIT};

/// Extra p-adic digits kept on the action parameter beyond the working precision.
pub const EPSILON_GUARD: u32 = 5;

/// Coefficient ring flavour: `Z_p[[X]]` or `F_p[[X]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Integral,
    CharP,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Integral => "integral",
            Mode::CharP => "charp",
        }
    }
}

/// An order or valuation which is either known exactly or only bounded below
/// because every visible digit vanished.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    AtLeast(u32),
}

impl Order {
    /// The value if finite, the bound otherwise.
    pub fn lower_bound(self) -> u32 {
        match self {
            Order::Finite(v) | Order::AtLeast(v) => v,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(v) => Some(v),
            Order::AtLeast(_) => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

struct CtxInner {
    p: u64,
    k: u32,
    mode: Mode,
    big_pow: Vec<BigUint>,
    narrow_pow: Vec<u64>,
}

/// Prime, filtration level `K` and coefficient mode shared by every object
/// computed together. Cheap to clone.
#[derive(Clone)]
pub struct PrecisionContext(Arc<CtxInner>);

impl PrecisionContext {
    pub fn new(p: u64, k: u32, mode: Mode) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidPrecision("K must be at least 1".into()));
        }
        let big_pow = big_powers(p, k + EPSILON_GUARD + 1);
        let narrow_pow = big_pow
            .iter()
            .map_while(|v| v.to_u64().filter(|&x| x < NARROW_LIMIT))
            .collect();
        Ok(PrecisionContext(Arc::new(CtxInner { p, k, mode, big_pow, narrow_pow })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// The filtration level: objects are known modulo `m^K` (resp. `G_K`).
    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn mode(&self) -> Mode {
        self.0.mode
    }

    /// Same prime, level and mode.
    pub fn same(&self, other: &PrecisionContext) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.mode == other.0.mode)
    }

    /// A context with the same prime and mode at a different level.
    pub fn with_level(&self, k: u32) -> Result<Self> {
        if k == self.k() {
            return Ok(self.clone());
        }
        PrecisionContext::new(self.p(), k, self.mode())
    }

    pub(crate) fn check(&self, other: &PrecisionContext) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("{self:?} vs {other:?}")))
        }
    }

    /// `p^e`, computed on the fly past the cached range.
    pub fn pow(&self, e: u32) -> BigUint {
        match self.0.big_pow.get(e as usize) {
            Some(v) => v.clone(),
            None => num_traits::pow(BigUint::from(self.0.p), e as usize),
        }
    }

    pub(crate) fn big_pows(&self) -> &[BigUint] {
        &self.0.big_pow
    }

    pub(crate) fn narrow_pows(&self) -> &[u64] {
        &self.0.narrow_pow
    }

    /// p-adic precision exponent of the coefficient of `X^a` in an element of
    /// `R / m^level`.
    #[inline]
    pub fn coeff_exp(&self, level: u32, a: u32) -> u32 {
        if a >= level {
            0
        } else {
            match self.0.mode {
                Mode::Integral => level - a,
                Mode::CharP => 1,
            }
        }
    }

    /// Largest p-adic exponent appearing at this level.
    #[inline]
    pub(crate) fn max_exp(&self, level: u32) -> u32 {
        match self.0.mode {
            Mode::Integral => level,
            Mode::CharP => level.min(1),
        }
    }

    /// Whether residues at this level fit the word-sized backend.
    #[inline]
    pub(crate) fn is_narrow(&self, level: u32) -> bool {
        (self.max_exp(level) as usize) < self.0.narrow_pow.len()
    }

    /// Scalar at the natural precision of this context (`K` for `Z_p`, 1 for `F_p`).
    pub fn scalar(&self, v: i64) -> PadicInt {
        let prec = self.max_exp(self.k());
        PadicInt::from_signed(self.p(), &BigInt::from(v), prec)
    }
}

impl fmt::Debug for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrecisionContext(p={}, K={}, {})", self.p(), self.k(), self.mode().as_str())
    }
}

impl PartialEq for PrecisionContext {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for PrecisionContext {}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `residue mod p^prec`. `prec == 0` is the fully unknown scalar.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    residue: BigUint,
    prec: u32,
}

impl PadicInt {
    /// Strict constructor: the residue must already be reduced.
    pub fn new(p: u64, residue: BigUint, prec: u32) -> Result<Self> {
        let modulus = num_traits::pow(BigUint::from(p), prec as usize);
        if residue >= modulus && !(prec == 0 && residue.is_zero()) {
            return Err(Error::Schema(format!("residue {residue} not reduced modulo {p}^{prec}")));
        }
        Ok(PadicInt { p, residue, prec })
    }

    /// Reduces an arbitrary nonnegative integer.
    pub fn reduced(p: u64, value: BigUint, prec: u32) -> Self {
        let modulus = num_traits::pow(BigUint::from(p), prec as usize);
        PadicInt { p, residue: value % modulus, prec }
    }

    pub fn from_signed(p: u64, value: &BigInt, prec: u32) -> Self {
        let modulus = BigInt::from(num_traits::pow(BigUint::from(p), prec as usize));
        let r = value.mod_floor(&modulus);
        PadicInt { p, residue: r.to_biguint().expect("mod_floor is nonnegative"), prec }
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        PadicInt { p, residue: BigUint::zero(), prec }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        PadicInt::reduced(p, BigUint::one(), prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.prec as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// Lift to the symmetric range `(-p^prec/2, p^prec/2]`.
    pub fn balanced(&self) -> BigInt {
        let m = self.modulus();
        let r = BigInt::from_biguint(Sign::Plus, self.residue.clone());
        if &self.residue * 2u32 > m {
            r - BigInt::from(m)
        } else {
            r
        }
    }

    fn check_prime(&self, other: &PadicInt) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ContextMismatch(format!(
                "scalars over different primes {} and {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check_prime(other)?;
        let prec = self.prec.min(other.prec);
        Ok(PadicInt::reduced(self.p, &self.residue + &other.residue, prec))
    }

    pub fn sub(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check_prime(other)?;
        let prec = self.prec.min(other.prec);
        let m = num_traits::pow(BigUint::from(self.p), prec as usize);
        let a = &self.residue % &m;
        let b = &other.residue % &m;
        let r = if a >= b { a - b } else { a + &m - b };
        Ok(PadicInt { p: self.p, residue: r, prec })
    }

    pub fn mul(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check_prime(other)?;
        let prec = self.prec.min(other.prec);
        Ok(PadicInt::reduced(self.p, &self.residue * &other.residue, prec))
    }

    pub fn neg(&self) -> PadicInt {
        PadicInt::zero(self.p, self.prec).sub(self).expect("same prime")
    }

    /// p-adic valuation; `AtLeast(prec)` for a vanishing residue.
    pub fn val(&self) -> Order {
        if self.residue.is_zero() {
            return Order::AtLeast(self.prec);
        }
        Order::Finite(valuation(&self.residue, self.p))
    }

    pub fn is_unit(&self) -> bool {
        self.prec > 0 && self.val() == Order::Finite(0)
    }

    /// Inverse by Newton-Hensel lifting of the inverse modulo `p`.
    pub fn inv(&self) -> Result<PadicInt> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self:?} has positive valuation")));
        }
        let p = BigUint::from(self.p);
        let a0 = &self.residue % &p;
        // a^(p-2) mod p by Fermat
        let mut x = a0.modpow(&(&p - 2u32), &p);
        let mut cur = 1u32;
        while cur < self.prec {
            cur = (2 * cur).min(self.prec);
            let m = num_traits::pow(p.clone(), cur as usize);
            let ax = (&self.residue * &x) % &m;
            let two_minus = (BigUint::from(2u32) + &m - ax) % &m;
            x = (&x * two_minus) % &m;
        }
        Ok(PadicInt::reduced(self.p, x, self.prec))
    }

    /// Same residue class at a lower precision.
    pub fn truncate(&self, prec: u32) -> PadicInt {
        PadicInt::reduced(self.p, self.residue.clone(), prec.min(self.prec))
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.p, self.prec)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub(crate) fn valuation(v: &BigUint, p: u64) -> u32 {
    debug_assert!(!v.is_zero());
    if let Some(mut x) = v.to_u64() {
        let mut n = 0;
        while x % p == 0 {
            x /= p;
            n += 1;
        }
        return n;
    }
    let pb = BigUint::from(p);
    let mut x = v.clone();
    let mut n = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return n;
        }
        x = q;
        n += 1;
    }
}
