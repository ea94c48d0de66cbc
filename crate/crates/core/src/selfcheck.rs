//! Randomized invariant suites, runnable from the command line.

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use crate::coeff::CoeffSeries;
use crate::error::Result;
use crate::io::{self, Reader};
use crate::iwasawa::{self, ModuleSpec};
use crate::padic::{Mode, PrecisionContext};
use crate::par::{self, Exec};
use crate::random::{self, SeededRng};
use crate::series::SkewSeries;
use crate::skew::SkewData;
use crate::weierstrass::{w_divide, w_divide_oracle, w_prepare};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, passed: 0, failed: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn record_result<T>(&mut self, r: Result<T>, ok: impl FnOnce(&T) -> bool, what: impl FnOnce() -> String) {
        match r {
            Ok(v) => {
                let good = ok(&v);
                self.record(good, what)
            }
            Err(e) => self.record(false, || format!("{}: {e}", what())),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheckReport {
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteReport>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }
}

#[derive(Debug, Clone)]
pub struct SelfCheckConfig {
    pub seed: u64,
    /// Random samples per configuration and suite.
    pub samples: usize,
    pub primes: Vec<u64>,
    pub precisions: Vec<u32>,
    pub exec: Exec,
}

impl Default for SelfCheckConfig {
    fn default() -> Self {
        SelfCheckConfig { seed: 42, samples: 40, primes: vec![2, 3, 5], precisions: vec![4, 6], exec: Exec::default_mode() }
    }
}

type Suite = fn(&[SkewData], usize, &mut SeededRng) -> SuiteReport;

/// Runs every suite; each suite gets its own generator derived from the seed.
pub fn run(cfg: &SelfCheckConfig) -> SelfCheckReport {
    let mut configs = Vec::new();
    for &p in &cfg.primes {
        for &k in &cfg.precisions {
            for mode in [Mode::Integral, Mode::CharP] {
                let ctx = PrecisionContext::new(p, k, mode).expect("valid defaults");
                for eps in [1, 1 + p as i64] {
                    configs.push(SkewData::new(&ctx, &BigInt::from(eps)).expect("eps = 1 mod p"));
                }
            }
        }
    }
    let suites: Vec<(usize, Suite)> = vec![
        coeff_ring as Suite,
        axioms,
        skew_ring,
        twist_bounds,
        weierstrass,
        division_oracle,
        conversions,
        cyclotomic,
        descent,
        serialization,
    ]
    .into_iter()
    .enumerate()
    .collect();
    let samples = cfg.samples;
    let seed = cfg.seed;
    let suites = par::map(cfg.exec, suites, |(i, suite)| {
        let mut rng = random::rng(seed.wrapping_add(i as u64 * 0x9e37_79b9));
        suite(&configs, samples, &mut rng)
    });
    let mut suites = suites;
    suites.push(rank_growth());
    SelfCheckReport { seed, samples, suites }
}

fn tag(sd: &SkewData) -> String {
    let c = sd.ctx();
    format!("p={} K={} {} eps={}", c.p(), c.k(), c.mode().as_str(), sd.epsilon())
}

fn coeff_ring(configs: &[SkewData], samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let mut rep = SuiteReport::new("coeff_ring");
    for sd in configs.iter().filter(|s| s.is_trivial()) {
        let ctx = sd.ctx();
        let k = ctx.k();
        for _ in 0..samples {
            let a = random::coeff(ctx, k, rng);
            let b = random::coeff(ctx, k, rng);
            let ab = a.mul(&b).expect("same context");
            let bound = (a.m_order().lower_bound() + b.m_order().lower_bound()).min(k);
            rep.record(ab.m_order().lower_bound() >= bound, || format!("{}: filtration on {a:?} * {b:?}", tag(sd)));
            let t = random::coeff_in_m_power(ctx, k, 1, rng);
            let u = random::coeff_in_m_power(ctx, k, 1, rng);
            let lhs = a.compose(&t).and_then(|x| x.compose(&u));
            let rhs = t.compose(&u).and_then(|tu| a.compose(&tu));
            rep.record(lhs.is_ok() && lhs == rhs, || format!("{}: composition associativity", tag(sd)));
            let red = |x: &CoeffSeries| x.reduce_mod_p().expect("reducible");
            rep.record(
                red(&a.add(&b).unwrap()) == red(&a).add(&red(&b)).unwrap()
                    && red(&ab) == red(&a).mul(&red(&b)).unwrap(),
                || format!("{}: reduction mod p", tag(sd)),
            );
            let v = random::unit(ctx, k, rng);
            rep.record_result(
                v.inv(),
                |w| v.mul(w).unwrap() == CoeffSeries::one(ctx),
                || format!("{}: inverse of {v:?}", tag(sd)),
            );
        }
    }
    rep
}

fn axioms(configs: &[SkewData], samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let mut rep = SuiteReport::new("skew_axioms");
    for sd in configs {
        let r = sd.validate_axioms(samples, rng);
        rep.record(r.passed(), || format!("{}: {:?}", tag(sd), r.checks.iter().find(|c| c.failed > 0)));
        let back = sd.sigma_x().compose(sd.sigma_inv_x());
        rep.record(back.as_ref() == Ok(&CoeffSeries::x(sd.ctx())), || format!("{}: sigma inverse", tag(sd)));
    }
    rep
}

fn skew_ring(configs: &[SkewData], samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let mut rep = SuiteReport::new("skew_series");
    for sd in configs {
        let ctx = sd.ctx();
        let y = SkewSeries::y(sd);
        for _ in 0..samples {
            let r = random::coeff(ctx, ctx.k(), rng);
            let rs = SkewSeries::constant(sd, &r);
            let lhs = y.mul(&rs).unwrap();
            let rhs = SkewSeries::from_rows(sd, vec![sd.apply_delta(&r), sd.apply_sigma(&r)]);
            rep.record(lhs.eq_mod_gk(&rhs), || format!("{}: Y r for r = {r:?}", tag(sd)));
            let (a, b, c) = (random::series(sd, rng), random::series(sd, rng), random::series(sd, rng));
            let l = a.mul(&b).and_then(|ab| ab.mul(&c));
            let rr = b.mul(&c).and_then(|bc| a.mul(&bc));
            rep.record(l.is_ok() && l == rr, || format!("{}: associativity", tag(sd)));
            let d = a.mul(&b.add(&c).unwrap()).unwrap();
            rep.record(
                d.eq_mod_gk(&a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()),
                || format!("{}: distributivity", tag(sd)),
            );
            let red = a.mul(&b).unwrap().reduce();
            rep.record(red == a.reduce().mul(&b.reduce()), || format!("{}: reduction to k[[Y]]", tag(sd)));
            let u = random::unit_series(sd, rng);
            rep.record_result(
                u.inv(),
                |v| u.mul(v).unwrap().eq_mod_gk(&SkewSeries::one(sd)) && v.mul(&u).unwrap().eq_mod_gk(&SkewSeries::one(sd)),
                || format!("{}: inverse", tag(sd)),
            );
            let s = rng.gen_range(1..ctx.k() as usize);
            let nu = random::series_with_order(sd, s, rng);
            rep.record(nu.inv().is_err(), || format!("{}: non-unit inverted", tag(sd)));
        }
    }
    rep
}

fn twist_bounds(configs: &[SkewData], samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let mut rep = SuiteReport::new("twist_bounds");
    for sd in configs {
        let ctx = sd.ctx();
        let k = ctx.k();
        for _ in 0..samples {
            let lift = rng.gen_range(0..k);
            let r = random::coeff_in_m_power(ctx, k, lift, rng);
            let n = rng.gen_range(0..=6usize);
            let ord = r.m_order().lower_bound();
            for (i, t) in sd.twist_table(&r, n).iter().enumerate() {
                let bound = (ord as i64 + n as i64 - i as i64).clamp(0, k as i64) as u32;
                rep.record(t.m_order().lower_bound() >= bound, || format!("{}: (Y^{n} r)_{i} for r = {r:?}", tag(sd)));
            }
        }
    }
    rep
}

fn weierstrass(configs: &[SkewData], samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let mut rep = SuiteReport::new("weierstrass");
    for sd in configs {
        let k = sd.ctx().k() as usize;
        for _ in 0..samples {
            let s = rng.gen_range(1..k.min(5));
            let f = random::series_with_order(sd, s, rng);
            rep.record_result(
                w_prepare(&f),
                |(eps, big_f)| {
                    big_f.degree() == s
                        && big_f.lower().iter().all(|a| a.m_order().lower_bound() >= 1)
                        && eps.mul(&big_f.to_series()).map(|e| e.eq_mod_gk(&f)).unwrap_or(false)
                },
                || format!("{}: preparation of {f:?}", tag(sd)),
            );
            let g = random::series(sd, rng);
            rep.record_result(
                w_divide(&g, &f),
                |(q, rem)| {
                    rem.degree().is_none_or(|d| d < s)
                        && q.mul(&f).and_then(|qf| qf.add(rem)).map(|x| x.eq_mod_gk(&g)).unwrap_or(false)
                },
                || format!("{}: division of {g:?} by {f:?}", tag(sd)),
            );
        }
    }
    rep
}

fn division_oracle(configs: &[SkewData], samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let mut rep = SuiteReport::new("division_oracle");
    for sd in configs.iter().filter(|s| s.ctx().k() <= 4 && s.ctx().p() <= 3) {
        for _ in 0..samples {
            let s = rng.gen_range(1..=2);
            let f = random::series_with_order(sd, s, rng);
            let g = random::series(sd, rng);
            let fast = w_divide(&g, &f);
            let slow = w_divide_oracle(&g, &f);
            rep.record(fast.is_ok() && fast == slow, || format!("{}: {g:?} / {f:?}", tag(sd)));
        }
    }
    rep
}

fn conversions(configs: &[SkewData], samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let mut rep = SuiteReport::new("conversions");
    for sd in configs {
        for _ in 0..samples {
            let f = random::series(sd, rng);
            let right = f.left_to_right();
            rep.record(right.right_to_left() == f, || format!("{}: left/right involution", tag(sd)));
            // right form sum_j Y^j b_j rebuilt by multiplication
            let mut sum = SkewSeries::zero(sd);
            for (j, b) in right.rows().iter().enumerate() {
                let term = SkewSeries::y_pow(sd, j).mul(&SkewSeries::constant(sd, &b.extend(sd.ctx().k()))).unwrap();
                sum = sum.add(&term).unwrap();
            }
            rep.record(sum.eq_mod_gk(&f), || format!("{}: right coefficients of {f:?}", tag(sd)));
            let deg = rng.gen_range(0..sd.ctx().k() as usize);
            let poly = f.low(deg + 1);
            rep.record_result(
                poly.to_z_form(deg).and_then(|z| SkewSeries::from_z_form(&z)),
                |back| back.eq_mod_gk(&poly),
                || format!("{}: Z-form of {poly:?}", tag(sd)),
            );
        }
    }
    rep
}

fn cyclotomic(configs: &[SkewData], _samples: usize, _rng: &mut SeededRng) -> SuiteReport {
    let mut rep = SuiteReport::new("cyclotomic");
    for sd in configs {
        let ctx = sd.ctx();
        let tower = iwasawa::omega_tower_check(ctx, 3);
        rep.record(tower.passed, || format!("{}: {:?}", tag(sd), tower.failures));
        for n in 0..=3u32 {
            let w = iwasawa::omega(ctx, n as i64);
            let bound = (n + 1).min(ctx.k());
            rep.record(w.m_order().lower_bound() >= bound, || format!("{}: order of omega_{n}", tag(sd)));
            rep.record_result(
                iwasawa::normal_witness(sd, n),
                |(u, wit)| {
                    let ws = SkewSeries::constant(sd, &w);
                    u.is_unit()
                        && sd.apply_sigma(&w) == w.mul(u).unwrap()
                        && SkewSeries::y(sd).mul(&ws).unwrap().eq_mod_gk(&ws.mul(wit).unwrap())
                },
                || format!("{}: normality witness for omega_{n}", tag(sd)),
            );
        }
    }
    rep
}

fn descent(configs: &[SkewData], samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let mut rep = SuiteReport::new("descent");
    // sigma can be the identity at precision even for eps != 1, e.g. over F_5 with K = 4
    for sd in configs.iter().filter(|s| s.sigma_x() != &CoeffSeries::x(s.ctx())) {
        let ctx = sd.ctx();
        for _ in 0..samples {
            let deg = rng.gen_range(0..=4usize);
            let coeffs: Vec<CoeffSeries> = (0..=deg).map(|_| random::coeff(ctx, ctx.k(), rng)).collect();
            let b = crate::series::ZPoly::new(sd, coeffs);
            match iwasawa::descend_ideal(sd, &b) {
                Ok(d) => {
                    let decreasing = d.degrees.windows(2).all(|w| w[1] < w[0]);
                    rep.record(decreasing && !d.r.is_zero(), || format!("{}: descent trace {:?}", tag(sd), d.degrees));
                }
                Err(e) => rep.record(e.is_precision(), || format!("{}: descent failed with {e}", tag(sd))),
            }
        }
    }
    rep
}

fn serialization(configs: &[SkewData], samples: usize, rng: &mut SeededRng) -> SuiteReport {
    let mut rep = SuiteReport::new("serialization");
    let strict = Reader::strict();
    for sd in configs {
        for _ in 0..samples.min(4) {
            let f = random::series(sd, rng);
            let text = io::render(&io::skew_series_json(&f));
            let back = io::parse(&text).and_then(|v| strict.skew_series(&v));
            rep.record(
                back.as_ref().is_ok_and(|b| io::render(&io::skew_series_json(b)) == text && b == &f),
                || format!("{}: skew_series round trip", tag(sd)),
            );
            let r = f.row(0);
            let text = io::render(&io::coeff_series_json(&r));
            let back = io::parse(&text).and_then(|v| strict.coeff_series(&v));
            rep.record(back.as_ref() == Ok(&r), || format!("{}: coeff_series round trip", tag(sd)));
            if let Ok((_, big_f)) = w_prepare(&random::series_with_order(sd, 1, rng)) {
                let text = io::render(&io::distinguished_json(&big_f));
                let back = io::parse(&text).and_then(|v| strict.distinguished(&v));
                rep.record(back.as_ref() == Ok(&big_f), || format!("{}: distinguished round trip", tag(sd)));
            }
        }
        // a residue at its modulus must be refused
        let ctx = sd.ctx();
        let modulus = ctx.pow(ctx.coeff_exp(ctx.k(), 0)).to_string();
        let mut v = io::coeff_series_json(&CoeffSeries::zero(ctx));
        v["coeffs"][0] = serde_json::Value::from(modulus);
        rep.record(strict.coeff_series(&v).is_err(), || format!("{}: unreduced residue accepted", tag(sd)));
    }
    rep
}

fn rank_growth() -> SuiteReport {
    let mut rep = SuiteReport::new("rank_growth");
    let xi1 = iwasawa::xi_poly(2, 1);
    let cases = [
        (ModuleSpec { d: 1, torsion: vec![], p_power_ranks: vec![] }, (1, 0, 0)),
        (ModuleSpec { d: 0, torsion: vec![vec![BigInt::from(0)]], p_power_ranks: vec![] }, (0, 1, 0)),
        (ModuleSpec { d: 1, torsion: vec![xi1], p_power_ranks: vec![1] }, (1, 1, 1)),
    ];
    for (spec, (d, c, from)) in cases {
        let g = iwasawa::rank_growth(2, &spec, 3, 8, 2, Exec::Sequential);
        rep.record_result(
            g,
            |g| g.d == Some(d) && g.c == Some(c) && g.stable_from == Some(from) && g.stabilized,
            || format!("rank growth of {spec:?}"),
        );
    }
    for n in 0..4 {
        let r = iwasawa::coinvariant_rank(3, &[BigInt::from(-3)], n, 12, 2);
        rep.record(r == Ok(0), || format!("coinvariants of X - 3 at n = {n}"));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let cfg = SelfCheckConfig { samples: 2, primes: vec![3], precisions: vec![4], ..Default::default() };
        let rep = run(&cfg);
        for s in &rep.suites {
            assert_eq!(s.failed, 0, "{}: {:?}", s.name, s.first_failure);
        }
    }
}
