//! The automorphism `sigma` and the `sigma`-derivation `delta = sigma - id`
//! induced by `X -> (1+X)^eps - 1`, and the twist coefficients `(Y^n r)_i`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::coeff::{dispatch, Backend, CoeffSeries, Mods, Store};
use crate::error::{Error, Result};
use crate::padic::{Mode, PadicInt, PrecisionContext, EPSILON_GUARD};
use crate::random;

/// `sigma(X)^a` for `a < level`, stored transposed: entry `[b * level + a]`
/// is the coefficient of `X^b` in `sigma(X)^a`.
struct PowTable {
    level: usize,
    data: Store,
}

struct SkewInner {
    ctx: PrecisionContext,
    epsilon: PadicInt,
    exponent: BigUint,
    sigma_x: CoeffSeries,
    sigma_inv_x: CoeffSeries,
    tables: Vec<OnceLock<PowTable>>,
    inverse: OnceLock<SkewData>,
    lifted: OnceLock<SkewData>,
    drop_degree: Option<usize>,
}

/// The skew pair `(sigma, delta)` over a fixed precision context.
#[derive(Clone)]
pub struct SkewData(Arc<SkewInner>);

impl SkewData {
    /// Builds `sigma` from the action parameter `eps`, which must be `1 mod p`.
    pub fn new(ctx: &PrecisionContext, epsilon: &BigInt) -> Result<Self> {
        let prec = ctx.k() + EPSILON_GUARD;
        let eps = PadicInt::from_signed(ctx.p(), epsilon, prec);
        Self::from_padic(ctx, &eps)
    }

    /// As [`SkewData::new`] with the parameter given at a tracked precision of at least `K`.
    pub fn from_padic(ctx: &PrecisionContext, epsilon: &PadicInt) -> Result<Self> {
        Self::build(ctx, epsilon, None)
    }

    fn build(ctx: &PrecisionContext, epsilon: &PadicInt, drop_degree: Option<usize>) -> Result<Self> {
        let k = ctx.k();
        if epsilon.p() != ctx.p() {
            return Err(Error::ContextMismatch(format!("parameter over p={} in {ctx:?}", epsilon.p())));
        }
        if epsilon.prec() < k {
            return Err(Error::InvalidPrecision(format!(
                "action parameter known to p^{} but K = {k}",
                epsilon.prec()
            )));
        }
        let one = PadicInt::one(ctx.p(), epsilon.prec());
        if !epsilon.sub(&one)?.truncate(1).is_zero() {
            return Err(Error::InvalidAction(format!("{epsilon} is not congruent to 1 modulo p")));
        }
        let epsilon = epsilon.truncate(k + EPSILON_GUARD);
        let inv = epsilon.inv()?;
        let exponent = epsilon.truncate(k).residue().clone();
        let inv_exponent = inv.truncate(k).residue().clone();
        let gamma = CoeffSeries::from_ints(ctx, &[1, 1]);
        let one_k = CoeffSeries::one(ctx);
        let sigma_x = gamma.pow(&exponent).sub(&one_k)?;
        let sigma_inv_x = gamma.pow(&inv_exponent).sub(&one_k)?;
        let tables = (0..=k).map(|_| OnceLock::new()).collect();
        Ok(SkewData(Arc::new(SkewInner {
            ctx: ctx.clone(),
            epsilon,
            exponent,
            sigma_x,
            sigma_inv_x,
            tables,
            inverse: OnceLock::new(),
            lifted: OnceLock::new(),
            drop_degree,
        })))
    }

    /// A deliberately broken copy whose `sigma` forgets the coefficient of
    /// `X^degree` in every image. Used to check that axiom validation notices.
    #[doc(hidden)]
    pub fn corrupted(&self, degree: usize) -> SkewData {
        Self::build(&self.0.ctx, &self.0.epsilon, Some(degree)).expect("already validated")
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.0.ctx
    }

    /// The action parameter at its stored precision `K + 5`.
    pub fn epsilon(&self) -> &PadicInt {
        &self.0.epsilon
    }

    /// `eps mod p^K`, the integer exponent used for `sigma`.
    pub fn exponent(&self) -> &BigUint {
        &self.0.exponent
    }

    pub fn sigma_x(&self) -> &CoeffSeries {
        &self.0.sigma_x
    }

    pub fn sigma_inv_x(&self) -> &CoeffSeries {
        &self.0.sigma_inv_x
    }

    /// Whether `sigma` is the identity at this precision.
    pub fn is_trivial(&self) -> bool {
        self.0.exponent.is_one()
    }

    /// Same context and same action modulo `p^K`.
    pub fn same(&self, other: &SkewData) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.ctx().same(other.ctx())
                && self.0.exponent == other.0.exponent
                && self.0.drop_degree == other.0.drop_degree)
    }

    pub(crate) fn check(&self, other: &SkewData) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("{self:?} vs {other:?}")))
        }
    }

    /// The data `(sigma^{-1}, sigma^{-1} - id)` of the opposite representation.
    pub fn inverse(&self) -> &SkewData {
        self.0.inverse.get_or_init(|| {
            let inv = self.0.epsilon.inv().expect("unit");
            SkewData::build(&self.0.ctx, &inv, None).expect("inverse of a valid parameter")
        })
    }

    /// The same action one level higher, with the parameter digits already stored.
    pub(crate) fn lifted(&self) -> &SkewData {
        self.0.lifted.get_or_init(|| {
            let ctx = self.0.ctx.with_level(self.0.ctx.k() + 1).expect("valid level");
            SkewData::build(&ctx, &self.0.epsilon, self.0.drop_degree).expect("valid parameter")
        })
    }

    /// The same integer parameter at an arbitrary level.
    pub fn at_level(&self, k: u32) -> Result<SkewData> {
        let ctx = self.0.ctx.with_level(k)?;
        let eps = BigInt::from(self.0.epsilon.residue().clone());
        let prec = k + EPSILON_GUARD;
        SkewData::build(&ctx, &PadicInt::from_signed(ctx.p(), &eps, prec), self.0.drop_degree)
    }

    fn table(&self, level: u32) -> &PowTable {
        self.0.tables[level as usize].get_or_init(|| {
            let ctx = &self.0.ctx;
            let l = level as usize;
            let sx = self.0.sigma_x.truncate(level);
            let mut pows = Vec::with_capacity(l);
            let mut cur = CoeffSeries::one(ctx).truncate(level);
            for _ in 0..l {
                pows.push(cur.clone());
                cur = cur.mul(&sx).expect("same context");
            }
            if let Some(d) = self.0.drop_degree {
                for s in pows.iter_mut().skip(1) {
                    let mut c = s.balanced();
                    if d < c.len() {
                        c[d] = BigInt::zero();
                    }
                    *s = CoeffSeries::from_bigints(ctx, level, &c);
                }
            }
            let data = if ctx.is_narrow(level) {
                let mut v = vec![0u64; l * l];
                for (a, s) in pows.iter().enumerate() {
                    if let Store::Narrow(c) = &s.data {
                        for b in 0..l {
                            v[b * l + a] = c[b];
                        }
                    }
                }
                Store::Narrow(v)
            } else {
                let mut v = vec![BigUint::zero(); l * l];
                for (a, s) in pows.iter().enumerate() {
                    for b in 0..l {
                        v[b * l + a] = s.residue(b);
                    }
                }
                Store::Wide(v)
            };
            PowTable { level: l, data }
        })
    }

    /// `sigma(r)`, the substitution `X -> sigma(X)`.
    pub fn apply_sigma(&self, r: &CoeffSeries) -> CoeffSeries {
        assert!(r.ctx().same(self.ctx()), "context mismatch in apply_sigma");
        let level = r.level();
        if level == 0 {
            return r.clone();
        }
        let t = self.table(level);
        let ctx = self.ctx();
        let data = dispatch!(&r.data, &t.data, |x, tab: T| {
            T::wrap(sigma_kernel::<T>(x, tab, t.level, &Mods::<T>::new(ctx, level)))
        });
        crate::coeff::CoeffSeries::from_store(ctx, level, data)
    }

    pub fn apply_sigma_inv(&self, r: &CoeffSeries) -> CoeffSeries {
        self.inverse().apply_sigma(r)
    }

    /// `delta(r) = sigma(r) - r`.
    pub fn apply_delta(&self, r: &CoeffSeries) -> CoeffSeries {
        self.apply_sigma(r).sub(r).expect("same context")
    }

    /// `sigma^n(r)` for `n >= 0`.
    pub fn apply_sigma_pow(&self, r: &CoeffSeries, n: usize) -> CoeffSeries {
        (0..n).fold(r.clone(), |acc, _| self.apply_sigma(&acc))
    }

    /// Rows `0..=n` of the twist table of `r`: row `m` lists `(Y^m r)_0 .. (Y^m r)_m`.
    pub fn twist_rows(&self, r: &CoeffSeries, n: usize) -> Vec<Vec<CoeffSeries>> {
        let mut rows = vec![vec![r.clone()]];
        for m in 0..n {
            let prev = &rows[m];
            let zero = CoeffSeries::zero_at(self.ctx(), r.level());
            let next: Vec<CoeffSeries> = (0..=m + 1)
                .map(|j| {
                    let below = if j == 0 { &zero } else { &prev[j - 1] };
                    let here = if j <= m { &prev[j] } else { &zero };
                    self.apply_sigma(below).add(&self.apply_delta(here)).expect("same context")
                })
                .collect();
            rows.push(next);
        }
        rows
    }

    /// `[(Y^n r)_0, ..., (Y^n r)_n]`, the coefficients of `Y^n r = sum_i (Y^n r)_i Y^i`.
    pub fn twist_table(&self, r: &CoeffSeries, n: usize) -> Vec<CoeffSeries> {
        self.twist_rows(r, n).pop().expect("nonempty")
    }

    /// Checks the ring-homomorphism and derivation axioms on random samples.
    pub fn validate_axioms<R: Rng>(&self, samples: usize, rng: &mut R) -> AxiomReport {
        let ctx = self.ctx();
        let k = ctx.k();
        let mut checks = vec![
            AxiomCheck::new("sigma_multiplicative"),
            AxiomCheck::new("leibniz_rule"),
            AxiomCheck::new("delta_into_m"),
            AxiomCheck::new("delta_m_into_m2"),
        ];
        for _ in 0..samples.max(1) {
            let r = random::coeff(ctx, k, rng);
            let s = random::coeff(ctx, k, rng);
            let rs = r.mul(&s).expect("same context");
            let (sr, ss) = (self.apply_sigma(&r), self.apply_sigma(&s));
            let lhs = self.apply_sigma(&rs);
            let rhs = sr.mul(&ss).expect("same context");
            checks[0].record(lhs == rhs, || format!("r = {r:?}, s = {s:?}"));
            let dl = self.apply_delta(&rs);
            let dr = self
                .apply_delta(&r)
                .mul(&s)
                .and_then(|a| sr.mul(&self.apply_delta(&s)).and_then(|b| a.add(&b)))
                .expect("same context");
            checks[1].record(dl == dr, || format!("r = {r:?}, s = {s:?}"));
            let d = self.apply_delta(&r);
            checks[2].record(d.in_m_power(1), || format!("delta({r:?}) = {d:?}"));
            let t = random::coeff_in_m_power(ctx, k, 1, rng);
            let dt = self.apply_delta(&t);
            checks[3].record(dt.in_m_power(2), || format!("delta({t:?}) = {dt:?}"));
        }
        let mut auto = AxiomCheck::new("sigma_preserves_m");
        let sx = self.sigma_x();
        let round = self.apply_sigma(self.sigma_inv_x());
        let ok = sx.in_m_power(1) && (k < 2 || !sx.in_m_power(2)) && round == CoeffSeries::x(ctx);
        auto.record(ok, || format!("sigma(X) = {sx:?}, sigma(sigma^-1(X)) = {round:?}"));
        checks.push(auto);
        AxiomReport { samples, checks }
    }
}

impl fmt::Debug for SkewData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewData({:?}, eps={})", self.ctx(), self.0.epsilon)
    }
}

impl Eq for SkewData {}

impl PartialEq for SkewData {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

#[inline]
fn sigma_kernel<T: Backend>(x: &[T], tab: &[T], l: usize, m: &Mods<'_, T>) -> Vec<T> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    for b in 0..n {
        let row = &tab[b * l..b * l + b + 1];
        let mut acc = T::acc_zero();
        for (xa, sa) in x.iter().zip(row) {
            T::acc_add_mul(&mut acc, xa, sa);
        }
        out.push(T::acc_reduce(acc, m.at(b)));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub counterexample: Option<String>,
}

impl AxiomCheck {
    fn new(name: &'static str) -> Self {
        AxiomCheck { name, passed: 0, failed: 0, counterexample: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Characteristic `p` coefficients with the integral action still in force.
pub fn charp_skew(p: u64, k: u32, epsilon: i64) -> Result<SkewData> {
    let ctx = PrecisionContext::new(p, k, Mode::CharP)?;
    SkewData::new(&ctx, &BigInt::from(epsilon))
}
