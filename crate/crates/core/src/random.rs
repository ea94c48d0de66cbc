//! Seeded random elements for property sweeps.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeff::CoeffSeries;
use crate::padic::PrecisionContext;
use crate::series::SkewSeries;
use crate::skew::SkewData;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform element of `R / m^level`.
pub fn coeff<R: Rng>(ctx: &PrecisionContext, level: u32, rng: &mut R) -> CoeffSeries {
    let coeffs: Vec<BigInt> = (0..level)
        .map(|a| {
            let m = ctx.pow(ctx.coeff_exp(level, a));
            BigInt::from(rng.gen_biguint_below(&m))
        })
        .collect();
    CoeffSeries::from_bigints(ctx, level, &coeffs)
}

/// Uniform element of `m^k / m^level`.
pub fn coeff_in_m_power<R: Rng>(ctx: &PrecisionContext, level: u32, k: u32, rng: &mut R) -> CoeffSeries {
    let p = BigInt::from(ctx.p());
    let coeffs: Vec<BigInt> = (0..level)
        .map(|a| {
            let m = ctx.pow(ctx.coeff_exp(level, a));
            let c = BigInt::from(rng.gen_biguint_below(&m));
            if a >= k {
                c
            } else {
                match ctx.mode() {
                    crate::padic::Mode::Integral => c * num_traits::pow(p.clone(), (k - a) as usize),
                    crate::padic::Mode::CharP => BigInt::zero(),
                }
            }
        })
        .collect();
    CoeffSeries::from_bigints(ctx, level, &coeffs)
}

/// Random unit of `R / m^level`.
pub fn unit<R: Rng>(ctx: &PrecisionContext, level: u32, rng: &mut R) -> CoeffSeries {
    let mut r = coeff(ctx, level, rng);
    let c0: u64 = rng.gen_range(1..ctx.p());
    let fix = BigInt::from(c0) - BigInt::from(r.residue(0) % BigUint::from(ctx.p()));
    r = r.add(&CoeffSeries::constant_at(ctx, level, &fix)).expect("same context");
    r
}

/// Uniform element of `A / G_K`.
pub fn series<R: Rng>(sd: &SkewData, rng: &mut R) -> SkewSeries {
    let ctx = sd.ctx();
    let k = ctx.k();
    SkewSeries::from_rows(sd, (0..k).map(|j| coeff(ctx, k - j, rng)).collect())
}

/// Random series of reduced order exactly `s`: rows below `s` in `m`, row `s` a unit.
pub fn series_with_order<R: Rng>(sd: &SkewData, s: usize, rng: &mut R) -> SkewSeries {
    let ctx = sd.ctx();
    let k = ctx.k();
    let rows = (0..k)
        .map(|j| {
            let level = k - j;
            match (j as usize).cmp(&s) {
                std::cmp::Ordering::Less => coeff_in_m_power(ctx, level, 1, rng),
                std::cmp::Ordering::Equal => unit(ctx, level, rng),
                std::cmp::Ordering::Greater => coeff(ctx, level, rng),
            }
        })
        .collect();
    SkewSeries::from_rows(sd, rows)
}

/// Random unit of `A / G_K`.
pub fn unit_series<R: Rng>(sd: &SkewData, rng: &mut R) -> SkewSeries {
    series_with_order(sd, 0, rng)
}

/// Random scalar which is `1 mod p`, e.g. an action parameter.
pub fn one_mod_p<R: Rng>(p: u64, prec: u32, rng: &mut R) -> BigUint {
    let m = num_traits::pow(BigUint::from(p), prec.saturating_sub(1) as usize);
    rng.gen_biguint_below(&m) * p + 1u32
}
