//! Cyclotomic elements of `Z_p[[X]]`, normality witnesses in the skew
//! Iwasawa algebra, descent of two-sided ideals to the coefficient ring,
//! and growth of coinvariant ranks.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeff::CoeffSeries;
use crate::error::{Error, Result};
use crate::linalg::{snf_rank, SnfResult};
use crate::padic::{PadicInt, PrecisionContext};
use crate::par::{self, Exec};
use crate::series::{binomial, SkewSeries, ZPoly};
use crate::skew::SkewData;

/// `omega_n = (1+X)^(p^n) - 1`, with `omega_{-1} = 1`.
pub fn omega(ctx: &PrecisionContext, n: i64) -> CoeffSeries {
    if n < 0 {
        return CoeffSeries::one(ctx);
    }
    // omega_n lies in m^(n+1)
    if n + 1 >= ctx.k() as i64 {
        return CoeffSeries::zero(ctx);
    }
    let gamma = CoeffSeries::from_ints(ctx, &[1, 1]);
    let e = num_traits::pow(BigUint::from(ctx.p()), n as usize);
    gamma.pow(&e).sub(&CoeffSeries::one(ctx)).expect("same context")
}

/// `xi_n = omega_n / omega_{n-1}` from its sum form; `xi_0 = X`.
pub fn xi(ctx: &PrecisionContext, n: u32) -> CoeffSeries {
    if n == 0 {
        return CoeffSeries::x(ctx);
    }
    let base = omega(ctx, n as i64 - 1).add(&CoeffSeries::one(ctx)).expect("same context");
    let mut term = CoeffSeries::one(ctx);
    let mut sum = CoeffSeries::zero(ctx);
    for _ in 0..ctx.p() {
        sum = sum.add(&term).expect("same context");
        term = term.mul(&base).expect("same context");
    }
    sum
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerReport {
    pub passed: bool,
    /// Set when `omega_{n_max}` already vanishes at the working precision.
    pub vacuous_tail: bool,
    pub failures: Vec<String>,
}

/// Checks `xi_n omega_{n-1} = omega_n`, `xi_n(0) = p` and `omega_n(0) = 0` for `1 <= n <= n_max`.
pub fn omega_tower_check(ctx: &PrecisionContext, n_max: u32) -> TowerReport {
    let mut failures = Vec::new();
    let p = BigUint::from(ctx.p());
    for n in 1..=n_max {
        let w = omega(ctx, n as i64);
        let prod = xi(ctx, n).mul(&omega(ctx, n as i64 - 1)).expect("same context");
        if prod != w {
            failures.push(format!("xi_{n} omega_{} != omega_{n}", n - 1));
        }
        let x0 = xi(ctx, n).coeff(0);
        if x0.residue() != &(&p % x0.modulus()) {
            failures.push(format!("xi_{n}(0) = {x0}"));
        }
        if !w.coeff(0).is_zero() {
            failures.push(format!("omega_{n}(0) != 0"));
        }
    }
    let vacuous_tail = omega(ctx, n_max as i64).is_zero();
    TowerReport { passed: failures.is_empty(), vacuous_tail, failures }
}

/// `u` with `sigma(omega_n) = omega_n u`, and `w = u Y + (u - 1)` with `Y omega_n = omega_n w`.
pub fn normal_witness(sd: &SkewData, n: u32) -> Result<(CoeffSeries, SkewSeries)> {
    let ctx = sd.ctx();
    let eps = sd.epsilon();
    if !eps.sub(&PadicInt::one(ctx.p(), eps.prec()))?.truncate(1).is_zero() {
        return Err(Error::InvalidAction(format!("{eps} is not congruent to 1 modulo p")));
    }
    let k = ctx.k();
    let w = omega(ctx, n as i64);
    let e = sd.exponent();
    let mut u = CoeffSeries::zero(ctx);
    let mut wp = CoeffSeries::one(ctx);
    let mut c = BigUint::one();
    for i in 1..=k as u64 {
        // C(e, i) from C(e, i-1)
        if &BigUint::from(i) > e {
            break;
        }
        c = c * (e - BigUint::from(i - 1)) / i;
        u = u.add(&wp.scale(&BigInt::from(c.clone())))?;
        wp = wp.mul(&w)?;
    }
    let row0 = u.sub(&CoeffSeries::one(ctx))?;
    let witness = SkewSeries::from_rows(sd, vec![row0, u.clone()]);
    Ok((u, witness))
}

#[derive(Debug, Clone)]
pub struct Descent {
    pub r: CoeffSeries,
    pub steps: usize,
    /// Z-degree before each step and after the last.
    pub degrees: Vec<usize>,
}

/// Finds a nonzero `r` of `R` in every two-sided ideal containing `b`, by
/// replacing `b` of `Z`-degree `s` with `sigma^s(gamma) b - b gamma`,
/// `gamma = 1 + X`, until a single term `r Z^i` remains.
pub fn descend_ideal(sd: &SkewData, b: &ZPoly) -> Result<Descent> {
    sd.check(&b.sd)?;
    let ctx = sd.ctx();
    if sd.sigma_x() == &CoeffSeries::x(ctx) {
        return Err(Error::DegenerateAction(ctx.k()));
    }
    let mut coeffs: Vec<CoeffSeries> = b.coeffs.clone();
    let mut steps = 0;
    let mut degrees = Vec::new();
    let gamma = CoeffSeries::from_ints(ctx, &[1, 1]);
    loop {
        let Some(s) = coeffs.iter().rposition(|c| !c.is_zero()) else {
            return Err(Error::VanishedAtPrecision { steps });
        };
        degrees.push(s);
        let nonzero: Vec<usize> = (0..=s).filter(|&i| !coeffs[i].is_zero()).collect();
        if nonzero.len() == 1 {
            return Ok(Descent { r: coeffs[s].clone(), steps, degrees });
        }
        let top = sd.apply_sigma_pow(&gamma, s);
        let mut sig = gamma.clone();
        let mut next = Vec::with_capacity(s);
        for c in coeffs.iter().take(s) {
            next.push(c.mul(&top.sub(&sig)?)?);
            sig = sd.apply_sigma(&sig);
        }
        coeffs = next;
        steps += 1;
    }
}

/// A finitely generated `Z_p[[X]]`-module in normal form: free rank `d`,
/// torsion summands `Lambda / F_i` and `Lambda / p^(n_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSpec {
    pub d: u32,
    /// Lower coefficients of each monic `F_i`, constant term first.
    pub torsion: Vec<Vec<BigInt>>,
    pub p_power_ranks: Vec<u32>,
}

impl ModuleSpec {
    pub fn validate(&self, p: u64) -> Result<()> {
        let pb = BigInt::from(p);
        for (i, f) in self.torsion.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::Schema(format!("torsion polynomial {i} has degree 0")));
            }
            if f.iter().any(|c| !c.is_multiple_of(&pb)) {
                return Err(Error::Schema(format!("torsion polynomial {i} is not distinguished")));
            }
        }
        if self.p_power_ranks.contains(&0) {
            return Err(Error::Schema("p-power summand with exponent 0".into()));
        }
        Ok(())
    }
}

/// Lower coefficients of `xi_n` as an integer polynomial.
pub fn xi_poly(p: u64, n: u32) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::zero()];
    }
    let step = num_traits::pow(BigUint::from(p), n as usize - 1);
    let deg = (p - 1) as usize * step.iter_u64_digits().next().unwrap_or(0) as usize;
    let mut c = vec![BigInt::zero(); deg + 1];
    for i in 0..p {
        let e = BigUint::from(i) * &step;
        let e64 = e.iter_u64_digits().next().unwrap_or(0);
        for (k, slot) in c.iter_mut().enumerate().take(e64 as usize + 1) {
            *slot += BigInt::from(binomial(e64, k as u64));
        }
    }
    c.pop();
    c
}

/// Lower coefficients of `omega_n = (1+X)^(p^n) - 1`.
pub fn omega_poly(p: u64, n: u32) -> Vec<BigInt> {
    let e = p.pow(n);
    (0..e).map(|k| if k == 0 { BigInt::zero() } else { BigInt::from(binomial(e, k)) }).collect()
}

fn polymulmod(a: &[BigInt], b: &[BigInt], f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let d = f.len();
    let mut prod = vec![BigInt::zero(); 2 * d];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    // X^d = -sum f_i X^i
    for k in (d..2 * d).rev() {
        let top = std::mem::take(&mut prod[k]).mod_floor(m);
        if top.is_zero() {
            continue;
        }
        for (i, fi) in f.iter().enumerate() {
            prod[k - d + i] -= &top * fi;
        }
    }
    prod.truncate(d);
    prod.iter().map(|x| x.mod_floor(m)).collect()
}

/// Elementary divisors of multiplication by `omega_n` on `Z_p[X]/F` over `Z/p^M`.
pub fn coinvariant_snf(p: u64, f: &[BigInt], n: u32, m: u32, guard: u32) -> SnfResult {
    let d = f.len();
    let modulus = BigInt::from(num_traits::pow(BigUint::from(p), m as usize));
    let mut one = vec![BigInt::zero(); d];
    one[0] = BigInt::one();
    let mut gamma = vec![BigInt::zero(); d];
    gamma[0] = BigInt::one();
    if d > 1 {
        gamma[1] = BigInt::one();
    } else {
        // X = -f_0 in Z_p[X]/(X + f_0)
        gamma[0] = (BigInt::one() - &f[0]).mod_floor(&modulus);
    }
    let mut acc = one.clone();
    let mut base = gamma;
    let mut e = num_traits::pow(BigUint::from(p), n as usize);
    while !e.is_zero() {
        if e.bit(0) {
            acc = polymulmod(&acc, &base, f, &modulus);
        }
        e >>= 1;
        if !e.is_zero() {
            base = polymulmod(&base, &base, f, &modulus);
        }
    }
    acc[0] -= BigInt::one();
    let w = acc;
    let mut cols = Vec::with_capacity(d);
    let mut xi = one;
    for _ in 0..d {
        cols.push(polymulmod(&w, &xi, f, &modulus));
        let mut shifted = vec![BigInt::zero(); d];
        shifted[1..d].clone_from_slice(&xi[..(d - 1)]);
        if d == 1 {
            shifted[0] = BigInt::zero();
        }
        let top = xi[d - 1].clone();
        for (i, fi) in f.iter().enumerate() {
            shifted[i] -= &top * fi;
        }
        xi = shifted.iter().map(|x| x.mod_floor(&modulus)).collect();
    }
    let matrix: Vec<Vec<PadicInt>> = (0..d)
        .map(|r| cols.iter().map(|c| PadicInt::from_signed(p, &c[r], m)).collect())
        .collect();
    snf_rank(p, m, &matrix, guard)
}

/// `Z_p`-rank of `(Z_p[[X]]/F) / omega_n`.
pub fn coinvariant_rank(p: u64, f: &[BigInt], n: u32, m: u32, guard: u32) -> Result<usize> {
    let r = coinvariant_snf(p, f, n, m, guard);
    if r.precision_flag {
        return Err(Error::PrecisionInsufficient(format!(
            "elementary divisor within {guard} of precision {m} (valuations {:?})",
            r.valuations
        )));
    }
    Ok(r.rank_at_precision)
}

#[derive(Debug, Clone, Serialize)]
pub struct RankRow {
    pub n: u32,
    pub lambda: u64,
    pub flag: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankGrowth {
    pub rows: Vec<RankRow>,
    pub d: Option<u64>,
    pub c: Option<i64>,
    pub stable_from: Option<u32>,
    pub stabilized: bool,
}

/// `lambda_n = rank of M / omega_n M` for `0 <= n <= n_max`, with the fit
/// `lambda_n = d p^n + c`.
///
/// `d` comes from the last two values. The fit counts as stabilized when it
/// holds on at least three consecutive indices ending at `n_max`.
pub fn rank_growth(p: u64, spec: &ModuleSpec, n_max: u32, m: u32, guard: u32, exec: Exec) -> Result<RankGrowth> {
    spec.validate(p)?;
    if n_max < 2 {
        return Err(Error::InvalidPrecision("n_max must be at least 2".into()));
    }
    let rows = par::map(exec, (0..=n_max).collect(), |n| {
        let mut lambda = 0u64;
        let mut flag = false;
        if spec.d > 0 {
            let free = coinvariant_snf(p, &omega_poly(p, n), n, m, guard);
            flag |= free.precision_flag;
            lambda += spec.d as u64 * free.rank_at_precision as u64;
        }
        for f in &spec.torsion {
            let t = coinvariant_snf(p, f, n, m, guard);
            flag |= t.precision_flag;
            lambda += t.rank_at_precision as u64;
        }
        RankRow { n, lambda, flag }
    });
    let pw = |n: u32| p.pow(n) as i64;
    let (a, b) = (rows[n_max as usize - 1].lambda as i64, rows[n_max as usize].lambda as i64);
    let step = pw(n_max) - pw(n_max - 1);
    let mut fit = None;
    if (b - a) % step == 0 && b >= a {
        let d = (b - a) / step;
        let c = b - d * pw(n_max);
        let mut from = n_max;
        while from > 0 && rows[from as usize - 1].lambda as i64 - d * pw(from - 1) == c {
            from -= 1;
        }
        fit = Some((d as u64, c, from));
    }
    Ok(match fit {
        Some((d, c, from)) => RankGrowth { rows, d: Some(d), c: Some(c), stable_from: Some(from), stabilized: from + 2 <= n_max },
        None => RankGrowth { rows, d: None, c: None, stable_from: None, stabilized: false },
    })
}
