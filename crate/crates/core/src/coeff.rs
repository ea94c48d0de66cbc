//! The coefficient ring `R = Z_p[[X]]` (or `F_p[[X]]`) modulo powers of its
//! maximal ideal, stored with triangular precision.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limb::Limb;
use crate::padic::{valuation, Mode, Order, PadicInt, PrecisionContext, EPSILON_GUARD};

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) enum Store {
    Narrow(Vec<u64>),
    Wide(Vec<BigUint>),
}

pub(crate) trait Backend: Limb {
    fn pows(ctx: &PrecisionContext) -> &[Self];
    fn wrap(v: Vec<Self>) -> Store;
}

impl Backend for u64 {
    fn pows(ctx: &PrecisionContext) -> &[u64] {
        ctx.narrow_pows()
    }
    fn wrap(v: Vec<u64>) -> Store {
        Store::Narrow(v)
    }
}

impl Backend for BigUint {
    fn pows(ctx: &PrecisionContext) -> &[BigUint] {
        ctx.big_pows()
    }
    fn wrap(v: Vec<BigUint>) -> Store {
        Store::Wide(v)
    }
}

/// Moduli of the coefficients at one level.
pub(crate) struct Mods<'a, T> {
    pows: &'a [T],
    level: usize,
    charp: bool,
}

impl<'a, T: Backend> Mods<'a, T> {
    pub(crate) fn new(ctx: &'a PrecisionContext, level: u32) -> Self {
        Mods { pows: T::pows(ctx), level: level as usize, charp: ctx.mode() == Mode::CharP }
    }

    #[inline(always)]
    pub(crate) fn at(&self, a: usize) -> &T {
        if self.charp {
            &self.pows[1]
        } else {
            &self.pows[self.level - a]
        }
    }
}

// Dispatch a closure body over both backends of one or more stores of equal kind.
macro_rules! dispatch {
    ($s:expr, |$v:ident : $t:ident| $body:expr) => {
        match $s {
            Store::Narrow($v) => {
                type $t = u64;
                $body
            }
            Store::Wide($v) => {
                type $t = BigUint;
                $body
            }
        }
    };
    ($s1:expr, $s2:expr, |$v1:ident, $v2:ident : $t:ident| $body:expr) => {
        match ($s1, $s2) {
            (Store::Narrow($v1), Store::Narrow($v2)) => {
                type $t = u64;
                $body
            }
            (Store::Wide($v1), Store::Wide($v2)) => {
                type $t = BigUint;
                $body
            }
            _ => unreachable!("backend mismatch at equal level"),
        }
    };
}
pub(crate) use dispatch;

/// An element of `R / m^level`.
///
/// The coefficient of `X^a` is a residue modulo `p^(level - a)` in the
/// integral case and modulo `p` in characteristic `p`; degrees `>= level`
/// are not stored.
#[derive(Clone, PartialEq, Eq)]
pub struct CoeffSeries {
    ctx: PrecisionContext,
    level: u32,
    pub(crate) data: Store,
}

impl CoeffSeries {
    fn check_level(ctx: &PrecisionContext, level: u32) {
        assert!(
            level <= ctx.k() + EPSILON_GUARD,
            "level {level} exceeds the supported range of {ctx:?}"
        );
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self::zero_at(ctx, ctx.k())
    }

    pub fn zero_at(ctx: &PrecisionContext, level: u32) -> Self {
        Self::check_level(ctx, level);
        let n = level as usize;
        let data =
            if ctx.is_narrow(level) { Store::Narrow(vec![0; n]) } else { Store::Wide(vec![BigUint::zero(); n]) };
        CoeffSeries { ctx: ctx.clone(), level, data }
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Self::constant_at(ctx, ctx.k(), &BigInt::one())
    }

    pub fn x(ctx: &PrecisionContext) -> Self {
        Self::from_ints(ctx, &[0, 1])
    }

    /// Constant `c` (reduced) at the given level.
    pub fn constant_at(ctx: &PrecisionContext, level: u32, c: &BigInt) -> Self {
        Self::from_bigints(ctx, level, std::slice::from_ref(c))
    }

    /// Series from small integer coefficients at level `K`, reducing each.
    pub fn from_ints(ctx: &PrecisionContext, coeffs: &[i64]) -> Self {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_bigints(ctx, ctx.k(), &big)
    }

    /// Series from arbitrary integer coefficients, reducing each into its modulus.
    pub fn from_bigints(ctx: &PrecisionContext, level: u32, coeffs: &[BigInt]) -> Self {
        let mut out = Self::zero_at(ctx, level);
        let get = |a: usize| -> BigUint {
            let m = BigInt::from(ctx.pow(ctx.coeff_exp(level, a as u32)));
            coeffs[a].mod_floor(&m).to_biguint().expect("nonnegative")
        };
        let n = coeffs.len().min(level as usize);
        match &mut out.data {
            Store::Narrow(v) => {
                for (a, slot) in v.iter_mut().enumerate().take(n) {
                    *slot = get(a).to_u64().expect("narrow");
                }
            }
            Store::Wide(v) => {
                for (a, slot) in v.iter_mut().enumerate().take(n) {
                    *slot = get(a);
                }
            }
        }
        out
    }

    /// Strict constructor from residues; rejects entries outside their modulus.
    pub fn from_residues(ctx: &PrecisionContext, level: u32, residues: &[BigUint]) -> Result<Self> {
        if residues.len() > level as usize && residues[level as usize..].iter().any(|r| !r.is_zero()) {
            return Err(Error::Schema(format!("nonzero coefficient beyond degree {}", level as i64 - 1)));
        }
        for (a, r) in residues.iter().enumerate().take(level as usize) {
            let m = ctx.pow(ctx.coeff_exp(level, a as u32));
            if r >= &m {
                return Err(Error::Schema(format!("coefficient of X^{a} is {r}, not reduced modulo {m}")));
            }
        }
        let big: Vec<BigInt> = residues.iter().map(|r| BigInt::from(r.clone())).collect();
        Ok(Self::from_bigints(ctx, level, &big))
    }

    pub(crate) fn from_store(ctx: &PrecisionContext, level: u32, data: Store) -> Self {
        CoeffSeries { ctx: ctx.clone(), level, data }
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.level as usize
    }

    pub fn is_empty(&self) -> bool {
        self.level == 0
    }

    /// Residue of the coefficient of `X^a` (zero past the stored range).
    pub fn residue(&self, a: usize) -> BigUint {
        if a >= self.len() {
            return BigUint::zero();
        }
        match &self.data {
            Store::Narrow(v) => BigUint::from(v[a]),
            Store::Wide(v) => v[a].clone(),
        }
    }

    pub fn residues(&self) -> Vec<BigUint> {
        (0..self.len()).map(|a| self.residue(a)).collect()
    }

    /// The coefficient of `X^a` as a scalar at its tracked precision.
    pub fn coeff(&self, a: usize) -> PadicInt {
        let e = self.ctx.coeff_exp(self.level, a as u32);
        PadicInt::reduced(self.ctx.p(), self.residue(a), e)
    }

    /// Coefficients lifted to the symmetric residue range.
    pub fn balanced(&self) -> Vec<BigInt> {
        (0..self.len()).map(|a| self.coeff(a).balanced()).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Store::Narrow(v) => v.iter().all(|&c| c == 0),
            Store::Wide(v) => v.iter().all(Zero::is_zero),
        }
    }

    /// Index of the last nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        match &self.data {
            Store::Narrow(v) => v.iter().rposition(|&c| c != 0),
            Store::Wide(v) => v.iter().rposition(|c| !c.is_zero()),
        }
    }

    fn check(&self, other: &CoeffSeries) -> Result<()> {
        self.ctx.check(&other.ctx)
    }

    /// Image in `R / m^level` for `level <= self.level`.
    pub fn truncate(&self, level: u32) -> CoeffSeries {
        if level >= self.level {
            return self.clone();
        }
        let ctx = &self.ctx;
        let narrow = ctx.is_narrow(level);
        let n = level as usize;
        let data = match (&self.data, narrow) {
            (Store::Narrow(v), _) => {
                let m = Mods::<u64>::new(ctx, level);
                Store::Narrow((0..n).map(|a| v[a] % m.at(a)).collect())
            }
            (Store::Wide(v), true) => {
                let m = Mods::<BigUint>::new(ctx, level);
                Store::Narrow((0..n).map(|a| (&v[a] % m.at(a)).to_u64().expect("narrow")).collect())
            }
            (Store::Wide(v), false) => {
                let m = Mods::<BigUint>::new(ctx, level);
                Store::Wide((0..n).map(|a| &v[a] % m.at(a)).collect())
            }
        };
        CoeffSeries { ctx: ctx.clone(), level, data }
    }

    /// Re-embed the stored representative at a higher level.
    ///
    /// Only meaningful where the caller knows the extra digits are multiplied
    /// into the working ideal.
    pub fn extend(&self, level: u32) -> CoeffSeries {
        if level <= self.level {
            return self.truncate(level);
        }
        Self::check_level(&self.ctx, level);
        let n = level as usize;
        let data = match (&self.data, self.ctx.is_narrow(level)) {
            (Store::Narrow(v), true) => {
                let mut w = v.clone();
                w.resize(n, 0);
                Store::Narrow(w)
            }
            (Store::Narrow(v), false) => {
                let mut w: Vec<BigUint> = v.iter().map(|&c| BigUint::from(c)).collect();
                w.resize(n, BigUint::zero());
                Store::Wide(w)
            }
            (Store::Wide(v), _) => {
                let mut w = v.clone();
                w.resize(n, BigUint::zero());
                Store::Wide(w)
            }
        };
        CoeffSeries { ctx: self.ctx.clone(), level, data }
    }

    /// Bring `self` to `level`, truncating or re-embedding as needed.
    pub(crate) fn at_level(&self, level: u32) -> CoeffSeries {
        if level == self.level {
            self.clone()
        } else if level < self.level {
            self.truncate(level)
        } else {
            self.extend(level)
        }
    }

    fn binary<F>(&self, other: &CoeffSeries, f: F) -> Result<CoeffSeries>
    where
        F: Fn(&Store, &Store, u32) -> Store,
    {
        self.check(other)?;
        let level = self.level.min(other.level);
        let (a, b) = (self.truncate(level), other.truncate(level));
        let data = f(&a.data, &b.data, level);
        Ok(CoeffSeries { ctx: self.ctx.clone(), level, data })
    }

    pub fn add(&self, other: &CoeffSeries) -> Result<CoeffSeries> {
        let ctx = self.ctx.clone();
        self.binary(other, |x, y, level| {
            dispatch!(x, y, |x, y: T| T::wrap(add_kernel(x, y, &Mods::<T>::new(&ctx, level))))
        })
    }

    pub fn sub(&self, other: &CoeffSeries) -> Result<CoeffSeries> {
        let ctx = self.ctx.clone();
        self.binary(other, |x, y, level| {
            dispatch!(x, y, |x, y: T| T::wrap(sub_kernel(x, y, &Mods::<T>::new(&ctx, level))))
        })
    }

    pub fn neg(&self) -> CoeffSeries {
        CoeffSeries::zero_at(&self.ctx, self.level).sub(self).expect("same context")
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &CoeffSeries) -> Result<CoeffSeries> {
        let ctx = self.ctx.clone();
        self.binary(other, |x, y, level| {
            dispatch!(x, y, |x, y: T| T::wrap(mul_kernel(x, y, &Mods::<T>::new(&ctx, level))))
        })
    }

    /// Product by an integer scalar.
    pub fn scale(&self, c: &BigInt) -> CoeffSeries {
        let ctx = &self.ctx;
        let level = self.level;
        let data = dispatch!(&self.data, |v: T| {
            let m = Mods::<T>::new(ctx, level);
            T::wrap(
                v.iter()
                    .enumerate()
                    .map(|(a, x)| {
                        let ma = m.at(a);
                        let cm = BigInt::from(ma.to_big());
                        let cr = T::from_big(&c.mod_floor(&cm).to_biguint().expect("nonnegative"));
                        x.mul_mod(&cr, ma)
                    })
                    .collect(),
            )
        });
        CoeffSeries { ctx: ctx.clone(), level, data }
    }

    /// Product by `X^k`.
    pub fn shift_x(&self, k: usize) -> CoeffSeries {
        let b = self.balanced();
        let mut out = vec![BigInt::zero(); k];
        out.extend(b);
        CoeffSeries::from_bigints(&self.ctx, self.level, &out)
    }

    /// `min_a (v_p(c_a) + a)`; `AtLeast(level)` when every stored coefficient vanishes.
    pub fn m_order(&self) -> Order {
        let p = self.ctx.p();
        let charp = self.ctx.mode() == Mode::CharP;
        let mut best: Option<u32> = None;
        for a in 0..self.len() {
            if best.is_some_and(|b| b <= a as u32) {
                break;
            }
            let v = match &self.data {
                Store::Narrow(v) => {
                    let c = v[a];
                    if c == 0 {
                        continue;
                    }
                    if charp {
                        0
                    } else {
                        let mut x = c;
                        let mut n = 0;
                        while x % p == 0 {
                            x /= p;
                            n += 1;
                        }
                        n
                    }
                }
                Store::Wide(v) => {
                    if v[a].is_zero() {
                        continue;
                    }
                    if charp {
                        0
                    } else {
                        valuation(&v[a], p)
                    }
                }
            };
            let cand = v + a as u32;
            best = Some(best.map_or(cand, |b| b.min(cand)));
        }
        match best {
            Some(b) => Order::Finite(b),
            None => Order::AtLeast(self.level),
        }
    }

    /// Membership in `m^k` (always true for `k <= 0` or beyond the stored precision).
    pub fn in_m_power(&self, k: u32) -> bool {
        self.m_order().lower_bound() >= k.min(self.level)
    }

    /// Whether the constant term is a unit.
    pub fn is_unit(&self) -> bool {
        if self.level == 0 {
            return false;
        }
        let p = self.ctx.p();
        match &self.data {
            Store::Narrow(v) => v[0] % p != 0,
            Store::Wide(v) => !(&v[0] % p).is_zero(),
        }
    }

    /// Inverse of a unit via the geometric series in `h = 1 - r_0^{-1} r`.
    pub fn inv(&self) -> Result<CoeffSeries> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("constant term of {self:?} lies in the maximal ideal")));
        }
        let c0 = self.coeff(0).inv()?;
        let c = BigInt::from(c0.residue().clone());
        let one = CoeffSeries::constant_at(&self.ctx, self.level, &BigInt::one());
        let h = one.sub(&self.scale(&c))?;
        // (1 + h)(1 + h^2)(1 + h^4)... covers all powers below 2^t; h^level = 0
        let mut sum = one.clone();
        let mut hp = h;
        let mut covered = 1u32;
        while covered < self.level {
            sum = sum.mul(&one.add(&hp)?)?;
            hp = hp.mul(&hp)?;
            covered *= 2;
        }
        Ok(sum.scale(&c))
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, e: &BigUint) -> CoeffSeries {
        let mut result = CoeffSeries::constant_at(&self.ctx, self.level, &BigInt::one());
        let mut base = self.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = result.mul(&base).expect("same context");
            }
            if i + 1 < bits {
                base = base.mul(&base).expect("same context");
            }
        }
        result
    }

    /// Substitution `X -> t` for `t` in the maximal ideal, by Horner's rule.
    pub fn compose(&self, t: &CoeffSeries) -> Result<CoeffSeries> {
        self.check(t)?;
        if t.level > 0 && t.m_order().lower_bound() < 1 {
            return Err(Error::SubstitutionDiverges(format!("{t:?}")));
        }
        let level = self.level.min(t.level);
        let t = t.truncate(level);
        let coeffs = self.balanced();
        let mut acc = CoeffSeries::zero_at(&self.ctx, level);
        for a in (0..level as usize).rev() {
            acc = acc.mul(&t)?;
            acc = acc.add(&CoeffSeries::constant_at(&self.ctx, level, &coeffs[a]))?;
        }
        Ok(acc)
    }

    /// Reduction modulo `p`: the image in `F_p[[X]]` at the same level.
    pub fn reduce_mod_p(&self) -> Result<CoeffSeries> {
        let ctx = PrecisionContext::new(self.ctx.p(), self.ctx.k(), Mode::CharP)?;
        let coeffs: Vec<BigInt> = self.residues().into_iter().map(BigInt::from).collect();
        Ok(CoeffSeries::from_bigints(&ctx, self.level, &coeffs))
    }

    /// The same integer coefficients read in another context.
    pub fn recontext(&self, ctx: &PrecisionContext, level: u32) -> CoeffSeries {
        CoeffSeries::from_bigints(ctx, level, &self.balanced())
    }
}

impl fmt::Debug for CoeffSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for a in 0..self.len() {
            let r = self.coeff(a).balanced();
            if r.sign() == Sign::NoSign {
                continue;
            }
            terms.push(match a {
                0 => format!("{r}"),
                1 => format!("{r}*X"),
                _ => format!("{r}*X^{a}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} (mod m^{})", terms.join(" + "), self.level)
    }
}

#[inline]
pub(crate) fn add_kernel<T: Backend>(x: &[T], y: &[T], m: &Mods<'_, T>) -> Vec<T> {
    x.iter().zip(y).enumerate().map(|(a, (u, v))| u.add_mod(v, m.at(a))).collect()
}

#[inline]
pub(crate) fn sub_kernel<T: Backend>(x: &[T], y: &[T], m: &Mods<'_, T>) -> Vec<T> {
    x.iter().zip(y).enumerate().map(|(a, (u, v))| u.sub_mod(v, m.at(a))).collect()
}

#[inline]
pub(crate) fn mul_kernel<T: Backend>(x: &[T], y: &[T], m: &Mods<'_, T>) -> Vec<T> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = T::acc_zero();
        for a in 0..=k {
            T::acc_add_mul(&mut acc, &x[a], &y[k - a]);
        }
        out.push(T::acc_reduce(acc, m.at(k)));
    }
    out
}
