//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;
use skewps::io::{self, Reader};
use skewps::iwasawa::{self, ModuleSpec};
use skewps::par::Exec;
use skewps::random::{self, SeededRng};
use skewps::{
    w_divide, w_divide_oracle, w_prepare, CoeffSeries, Error, Mode, PrecisionContext, SkewData, SkewSeries, ZPoly,
};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn sd(p: u64, k: u32, eps: i64, mode: Mode) -> SkewData {
    SkewData::new(&PrecisionContext::new(p, k, mode).unwrap(), &BigInt::from(eps)).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn preparation_round_trip(rng: &mut SeededRng) -> Outcome {
    let start = Instant::now();
    let (mut runs, mut bad) = (0, Vec::new());
    for p in [2u64, 3, 5] {
        for t in [0i64, 1, 2] {
            for k in [4u32, 6, 8] {
                let s_data = sd(p, k, 1 + t * p as i64, Mode::Integral);
                for _ in 0..100 {
                    // a unit in row K lies in G_K, so s = K cannot be seen
                    let s = rng.gen_range(1..=4usize.min(k as usize - 1));
                    let f = random::series_with_order(&s_data, s, rng);
                    runs += 1;
                    let ok = match w_prepare(&f) {
                        Ok((eps, big_f)) => {
                            big_f.degree() == s
                                && big_f.lower().iter().all(|a| a.m_order().lower_bound() >= 1)
                                && eps.mul(&big_f.to_series()).unwrap().eq_mod_gk(&f)
                        }
                        Err(_) => false,
                    };
                    if !ok && bad.len() < 3 {
                        bad.push(format!("{s_data:?} f = {f:?}"));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(120);
    outcome(ok, format!("{runs} preparations in {}, failures {bad:?}", secs(elapsed)))
}

fn grid_series(sd: &SkewData, entries: &[(usize, usize)], values: &[i64]) -> SkewSeries {
    let k = sd.ctx().k() as usize;
    let mut rows = vec![vec![0i64; k]; k];
    for (&(j, a), &v) in entries.iter().zip(values) {
        rows[j][a] = v;
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    SkewSeries::from_int_rows(sd, &refs)
}

fn division_oracle(rng: &mut SeededRng) -> Outcome {
    // every (j, a) with j + a < 3, each coefficient drawn from {0, 1, 2}
    let s_data = sd(2, 3, 1, Mode::Integral);
    let entries = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)];
    let grid = [0i64, 1, 2];
    let all: Vec<Vec<i64>> = (0..729)
        .map(|mut code| {
            (0..6)
                .map(|_| {
                    let d = grid[code % 3];
                    code /= 3;
                    d
                })
                .collect()
        })
        .collect();
    let divisors: Vec<SkewSeries> = all
        .iter()
        .map(|v| grid_series(&s_data, &entries, v))
        .filter(|f| f.reduced_order() == skewps::Order::Finite(1))
        .collect();
    let dividends: Vec<SkewSeries> = all.iter().map(|v| grid_series(&s_data, &entries, v)).collect();
    let mut mismatches = Vec::new();
    let mut exhaustive = 0;
    for f in &divisors {
        for g in &dividends {
            exhaustive += 1;
            let fast = w_divide(g, f);
            if fast.is_err() || fast != w_divide_oracle(g, f) {
                mismatches.push(format!("{g:?} / {f:?}"));
            }
        }
    }
    let mut random_runs = 0;
    for p in [2u64, 3] {
        for t in [0i64, 1, 2] {
            let s_data = sd(p, 4, 1 + t * p as i64, Mode::Integral);
            for _ in 0..40 {
                let s = rng.gen_range(1..=3usize);
                let f = random::series_with_order(&s_data, s, rng);
                let g = random::series(&s_data, rng);
                random_runs += 1;
                let fast = w_divide(&g, &f);
                if fast.is_err() || fast != w_divide_oracle(&g, &f) {
                    mismatches.push(format!("{s_data:?}: {g:?} / {f:?}"));
                }
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "{exhaustive} grid pairs ({} divisors), {random_runs} random at K=4, mismatches {}{}",
            divisors.len(),
            mismatches.len(),
            mismatches.first().map(|m| format!(", first {m}")).unwrap_or_default()
        ),
    )
}

fn commutative_degeneration(rng: &mut SeededRng) -> Outcome {
    let mut bad = Vec::new();
    let mut runs = 0;
    for (p, k, mode) in [(2u64, 4u32, Mode::Integral), (3, 5, Mode::Integral), (5, 4, Mode::Integral), (3, 6, Mode::CharP)] {
        let s_data = sd(p, k, 1, mode);
        for _ in 0..30 {
            runs += 1;
            let f = random::series(&s_data, rng);
            let g = random::series(&s_data, rng);
            if f.mul(&g).unwrap() != common::commutative_mul(&f, &g) {
                bad.push(format!("{s_data:?}: product of {f:?} and {g:?}"));
            }
            let s = rng.gen_range(1..k.min(4) as usize);
            let h = random::series_with_order(&s_data, s, rng);
            let (eps, big_f) = w_prepare(&h).unwrap();
            let (eps_ref, f_ref) = common::commutative_prepare(&h, s);
            if eps != eps_ref || big_f.to_series() != f_ref {
                bad.push(format!("{s_data:?}: preparation of {h:?}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{runs} products and {runs} preparations, failures {}{}", bad.len(),
        bad.first().map(|m| format!(", first {m}")).unwrap_or_default()))
}

fn twist_bounds(rng: &mut SeededRng) -> Outcome {
    let mut samples = 0;
    let mut violations = Vec::new();
    let mut configs = 0;
    for p in [2u64, 3, 5] {
        for k in [4u32, 8] {
            for mode in [Mode::Integral, Mode::CharP] {
                for t in [0i64, 1, 2] {
                    let s_data = sd(p, k, 1 + t * p as i64, mode);
                    configs += 1;
                    for _ in 0..1000 {
                        let lift = rng.gen_range(0..k);
                        let r = random::coeff_in_m_power(s_data.ctx(), k, lift, rng);
                        let n = rng.gen_range(0..=6usize);
                        let ord = r.m_order().lower_bound() as i64;
                        for (i, c) in s_data.twist_table(&r, n).iter().enumerate() {
                            samples += 1;
                            let bound = (ord + n as i64 - i as i64).clamp(0, k as i64) as u32;
                            if c.m_order().lower_bound() < bound {
                                violations.push(format!("{s_data:?}: (Y^{n} r)_{i}, r = {r:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    outcome(violations.is_empty(), format!("{samples} coefficient checks over {configs} configurations, violations {}", violations.len()))
}

fn cyclotomic_tower() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (p, k) in [(2u64, 8u32), (3, 27)] {
        let ctx = PrecisionContext::new(p, k, Mode::Integral).unwrap();
        let r = iwasawa::omega_tower_check(&ctx, 3);
        ok &= r.passed && !r.vacuous_tail;
        notes.push(format!("p={p} K={k}: {}", if r.passed { "tower holds" } else { "tower fails" }));
    }
    let two = PrecisionContext::new(2, 8, Mode::Integral).unwrap();
    let three = PrecisionContext::new(3, 27, Mode::Integral).unwrap();
    let xi_ok = iwasawa::xi(&two, 1) == CoeffSeries::from_ints(&two, &[2, 1])
        && iwasawa::xi(&three, 1) == CoeffSeries::from_ints(&three, &[3, 3, 1]);
    ok &= xi_ok;
    notes.push(format!("xi_1 expansions {}", if xi_ok { "match" } else { "differ" }));
    outcome(ok, notes.join(", "))
}

fn normality_witnesses() -> Outcome {
    let mut checks = 0;
    let mut bad = Vec::new();
    for p in [2u64, 3] {
        for mode in [Mode::Integral, Mode::CharP] {
            for k in [6u32, 8] {
                let s_data = sd(p, k, 1 + p as i64, mode);
                for n in 0..=2 {
                    checks += 1;
                    let w = SkewSeries::constant(&s_data, &iwasawa::omega(s_data.ctx(), n as i64));
                    let ok = match iwasawa::normal_witness(&s_data, n) {
                        Ok((_, wit)) => SkewSeries::y(&s_data).mul(&w).unwrap().eq_mod_gk(&w.mul(&wit).unwrap()),
                        Err(_) => false,
                    };
                    if !ok {
                        bad.push(format!("{s_data:?} n={n}"));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checks} witnesses, failures {bad:?}"))
}

fn ideal_descent(rng: &mut SeededRng) -> Outcome {
    let s_data = sd(3, 8, 4, Mode::Integral);
    let ctx = s_data.ctx().clone();
    let b = ZPoly::new(&s_data, vec![CoeffSeries::x(&ctx), CoeffSeries::one(&ctx)]);
    let expect = CoeffSeries::from_ints(&ctx, &[0, 1, 1]).mul(&CoeffSeries::from_ints(&ctx, &[0, 3, 3, 1])).unwrap();
    let example = iwasawa::descend_ideal(&s_data, &b).map(|d| d.r == expect).unwrap_or(false);
    let big = sd(3, 12, 4, Mode::Integral);
    let (mut decreasing, mut vanished, mut broken) = (0, 0, 0);
    for _ in 0..100 {
        let deg = rng.gen_range(0..=4usize);
        let coeffs = (0..=deg).map(|_| random::coeff(big.ctx(), 12, rng)).collect();
        match iwasawa::descend_ideal(&big, &ZPoly::new(&big, coeffs)) {
            Ok(d) if d.degrees.windows(2).all(|w| w[1] < w[0]) && !d.r.is_zero() => decreasing += 1,
            Err(Error::VanishedAtPrecision { .. }) => vanished += 1,
            _ => broken += 1,
        }
    }
    outcome(
        example && broken == 0,
        format!(
            "X + Z example {}, random: {decreasing} strictly decreasing, {vanished} vanished at precision, {broken} violations",
            if example { "matches" } else { "differs" }
        ),
    )
}

fn rank_growth() -> Outcome {
    let start = Instant::now();
    let specs = [
        (ModuleSpec { d: 1, torsion: vec![], p_power_ranks: vec![] }, (1u64, 0i64, 0u32)),
        (ModuleSpec { d: 0, torsion: vec![vec![BigInt::from(0)]], p_power_ranks: vec![] }, (0, 1, 0)),
        (ModuleSpec { d: 1, torsion: vec![iwasawa::xi_poly(2, 1)], p_power_ranks: vec![] }, (1, 1, 1)),
    ];
    let mut got = Vec::new();
    let mut ok = true;
    for (spec, (d, c, from)) in &specs {
        match iwasawa::rank_growth(2, spec, 3, 8, 2, Exec::default_mode()) {
            Ok(g) => {
                ok &= g.d == Some(*d) && g.c == Some(*c) && g.stable_from == Some(*from);
                got.push(format!("({:?},{:?}) from {:?}", g.d, g.c, g.stable_from));
            }
            Err(e) => {
                ok = false;
                got.push(e.to_string());
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(ok && elapsed < Duration::from_secs(30), format!("{} in {}", got.join(", "), secs(elapsed)))
}

fn unit_inversion(rng: &mut SeededRng) -> Outcome {
    let (mut inverted, mut refused, mut bad) = (0, 0, Vec::new());
    for p in [2u64, 3, 5] {
        for k in [4u32, 6] {
            for mode in [Mode::Integral, Mode::CharP] {
                let s_data = sd(p, k, 1 + p as i64, mode);
                let one = SkewSeries::one(&s_data);
                for _ in 0..100 {
                    let u = random::unit_series(&s_data, rng);
                    match u.inv() {
                        Ok(v) if u.mul(&v).unwrap().eq_mod_gk(&one) && v.mul(&u).unwrap().eq_mod_gk(&one) => inverted += 1,
                        _ => bad.push(format!("{s_data:?}: unit {u:?}")),
                    }
                    let f = random::series(&s_data, rng);
                    let unit = f.row(0).is_unit();
                    match (f.inv(), unit) {
                        (Err(Error::NotAUnit(_)), false) => refused += 1,
                        (Ok(_), true) => inverted += 1,
                        _ => bad.push(format!("{s_data:?}: {f:?}")),
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{inverted} inverses, {refused} refusals, {} mismatches", bad.len()))
}

fn serialization(rng: &mut SeededRng) -> Outcome {
    let strict = Reader::strict();
    let mut failures = Vec::new();
    for (p, k, mode) in [(2u64, 5u32, Mode::Integral), (3, 8, Mode::Integral), (5, 4, Mode::CharP)] {
        let s_data = sd(p, k, 1 + p as i64, mode);
        for _ in 0..20 {
            let f = random::series(&s_data, rng);
            let text = io::render(&io::skew_series_json(&f));
            let again = io::parse(&text).and_then(|v| strict.skew_series(&v)).map(|g| io::render(&io::skew_series_json(&g)));
            if again.as_deref() != Ok(text.as_str()) {
                failures.push("skew_series".to_string());
            }
            let r = f.row(0);
            let text = io::render(&io::coeff_series_json(&r));
            let again = io::parse(&text).and_then(|v| strict.coeff_series(&v)).map(|g| io::render(&io::coeff_series_json(&g)));
            if again.as_deref() != Ok(text.as_str()) {
                failures.push("coeff_series".to_string());
            }
            let (_, big_f) = w_prepare(&random::series_with_order(&s_data, 2, rng)).unwrap();
            let text = io::render(&io::distinguished_json(&big_f));
            let again = io::parse(&text).and_then(|v| strict.distinguished(&v)).map(|g| io::render(&io::distinguished_json(&g)));
            if again.as_deref() != Ok(text.as_str()) {
                failures.push("distinguished".to_string());
            }
        }
        let text = io::render(&io::skew_data_json(&s_data));
        if io::parse(&text).and_then(|v| strict.skew_data(&v)).map(|d| io::render(&io::skew_data_json(&d))).as_deref() != Ok(text.as_str()) {
            failures.push("skew_data".to_string());
        }
    }
    let rejects = [
        r#"{"kind":"coeff_series","p":3,"K":2,"mode":"integral","coeffs":["9","0"]}"#,
        r#"{"kind":"coeff_series","p":3,"K":2,"mode":"integral","coeffs":["-1","0"]}"#,
        r#"{"kind":"coeff_series","p":3,"K":2,"mode":"integral","coeffs":[1,0]}"#,
        r#"{"kind":"coeff_series","p":4,"K":2,"mode":"integral","coeffs":["1","0"]}"#,
        r#"{"kind":"skew_series","skew":{"kind":"skew_data","p":3,"K":2,"epsilon":"4"},"rows":[["0","0"],["3"]]}"#,
    ];
    for (i, text) in rejects.iter().enumerate() {
        let v = io::parse(text).unwrap();
        let res = match io::kind_of(&v).unwrap() {
            "coeff_series" => strict.coeff_series(&v).map(|_| ()),
            _ => strict.skew_series(&v).map(|_| ()),
        };
        if !matches!(res, Err(Error::Schema(_))) {
            failures.push(format!("malformed document {i} accepted"));
        }
    }
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_skewps")).args(["selfcheck", "--seed", "42"]).output();
    let elapsed = start.elapsed();
    let selfcheck = match &status {
        Ok(o) => o.status.code() == Some(0) && elapsed < Duration::from_secs(300),
        Err(_) => false,
    };
    outcome(
        failures.is_empty() && selfcheck,
        format!(
            "round trips and rejections: {} failures; selfcheck seed 42 {} in {}",
            failures.len(),
            if selfcheck { "exit 0" } else { "FAILED" },
            secs(elapsed)
        ),
    )
}

fn main() {
    let mut rng = random::rng(20_260_101);
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut SeededRng) -> Outcome>)> = vec![
        ("preparation round trip", Box::new(preparation_round_trip)),
        ("division oracle equivalence", Box::new(division_oracle)),
        ("commutative degeneration", Box::new(commutative_degeneration)),
        ("twist order bounds", Box::new(twist_bounds)),
        ("cyclotomic tower", Box::new(|_| cyclotomic_tower())),
        ("normality witnesses", Box::new(|_| normality_witnesses())),
        ("ideal descent", Box::new(ideal_descent)),
        ("rank growth", Box::new(|_| rank_growth())),
        ("unit inversion", Box::new(unit_inversion)),
        ("serialization and selfcheck", Box::new(serialization)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let o = run(&mut rng);
        if !o.ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<30} {} ({}) {}",
            i + 1,
            name,
            if o.ok { "PASS" } else { "FAIL" },
            secs(start.elapsed()),
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
