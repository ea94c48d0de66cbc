//! Command-line surface.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{self, Reader};
use crate::iwasawa;
use crate::padic::{Mode, PrecisionContext};
use crate::par::Exec;
use crate::random;
use crate::selfcheck::{self, SelfCheckConfig};
use crate::series::SkewSeries;
use crate::skew::SkewData;
use crate::weierstrass::{w_divide, w_prepare};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Selfcheck,
    Prepare,
    Divide,
    Invert,
    Omega,
    Xi,
    Descend,
    Rankgrowth,
    Axioms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Zp,
    Fp,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Zp => Mode::Integral,
            ModeArg::Fp => Mode::CharP,
        }
    }
}

/// Exact arithmetic in skew power series rings over Z_p[[X]] and F_p[[X]].
#[derive(Debug, Clone, Parser)]
#[command(name = "skewps", version, about)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Residue characteristic.
    #[arg(long, default_value_t = 3)]
    pub p: u64,
    /// Working precision (the SNF precision for rankgrowth).
    #[arg(long = "K", default_value_t = 8)]
    pub k: u32,
    /// Action parameter, congruent to 1 mod p.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub epsilon: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Zp)]
    pub mode: ModeArg,
    /// Input JSON; divide takes the dividend then the divisor.
    #[arg(long = "in")]
    pub input: Vec<PathBuf>,
    /// Output file, written atomically. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub n: i64,
    #[arg(long = "n-max", default_value_t = 3)]
    pub n_max: u32,
    /// Guard band for elementary divisors near the precision.
    #[arg(long, default_value_t = 2)]
    pub guard: u32,
    /// Reduce non-canonical input residues instead of rejecting them.
    #[arg(long)]
    pub normalize: bool,
    /// Where rankgrowth writes its JSON summary (default stderr).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Random samples per configuration for selfcheck and axioms.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Run without the thread pool.
    #[arg(long)]
    pub sequential: bool,
}

/// 0 on success, 1 for mathematical and configuration errors, 2 for
/// precision errors, 3 for schema and I/O errors.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_schema() {
        3
    } else if e.is_precision() {
        2
    } else {
        1
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => io::write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl Args {
    fn reader(&self) -> Reader {
        Reader { normalize: self.normalize }
    }

    fn ctx(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.p, self.k, self.mode.into())
    }

    fn skew(&self) -> Result<SkewData> {
        let eps = BigInt::from_str(&self.epsilon)
            .map_err(|_| Error::InvalidAction(format!("\"{}\" is not an integer", self.epsilon)))?;
        SkewData::new(&self.ctx()?, &eps)
    }

    fn inputs(&self, count: usize) -> Result<Vec<Value>> {
        if self.input.len() != count {
            return Err(Error::Io(format!("expected {count} --in file(s), got {}", self.input.len())));
        }
        self.input.iter().map(|p| io::read_json(p)).collect()
    }

    fn series(&self, v: &Value) -> Result<SkewSeries> {
        self.reader().skew_series(v)
    }

    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default_mode()
        }
    }

    fn write_json(&self, v: Value) -> Result<()> {
        emit(self.out.as_deref(), &io::render(&io::with_seed(v, self.seed)))
    }
}

/// Runs one job.
pub fn run(args: &Args) -> Result<()> {
    match args.command {
        Command::Prepare => {
            let f = args.series(&args.inputs(1)?[0])?;
            let (eps, big_f) = w_prepare(&f)?;
            args.write_json(json!({
                "kind": "preparation",
                "eps": io::skew_series_json(&eps),
                "F": io::distinguished_json(&big_f),
            }))
        }
        Command::Divide => {
            let docs = args.inputs(2)?;
            let g = args.series(&docs[0])?;
            let f = args.series(&docs[1])?;
            let (q, rem) = w_divide(&g, &f)?;
            args.write_json(json!({
                "kind": "division",
                "q": io::skew_series_json(&q),
                "rem": io::skew_series_json(&rem),
            }))
        }
        Command::Invert => {
            let f = args.series(&args.inputs(1)?[0])?;
            args.write_json(io::skew_series_json(&f.inv()?))
        }
        Command::Omega => {
            if args.n < -1 {
                return Err(Error::InvalidPrecision(format!("omega index {} below -1", args.n)));
            }
            args.write_json(io::coeff_series_json(&iwasawa::omega(&args.ctx()?, args.n)))
        }
        Command::Xi => {
            let n = u32::try_from(args.n).map_err(|_| Error::InvalidPrecision(format!("xi index {} below 0", args.n)))?;
            args.write_json(io::coeff_series_json(&iwasawa::xi(&args.ctx()?, n)))
        }
        Command::Descend => {
            let doc = &args.inputs(1)?[0];
            let b = match io::kind_of(doc)? {
                "skew_series" => {
                    let f = args.series(doc)?;
                    f.to_z_form(f.degree().unwrap_or(0))?
                }
                _ => args.reader().z_poly(doc)?,
            };
            let d = iwasawa::descend_ideal(&b.sd, &b)?;
            args.write_json(json!({
                "kind": "descent",
                "r": io::coeff_series_json(&d.r),
                "steps": d.steps,
                "degrees": d.degrees,
            }))
        }
        Command::Rankgrowth => {
            let (p, spec) = args.reader().module_spec(&args.inputs(1)?[0])?;
            let g = iwasawa::rank_growth(p, &spec, args.n_max, args.k, args.guard, args.exec())?;
            emit(args.out.as_deref(), &io::rank_growth_csv(&g))?;
            let summary = io::render(&io::with_seed(io::rank_growth_summary(&g), args.seed));
            match &args.summary {
                Some(path) => io::write_atomic(path, summary.as_bytes())?,
                None => eprint!("{summary}"),
            }
            if g.rows.iter().any(|r| r.flag) {
                return Err(Error::PrecisionInsufficient(format!(
                    "elementary divisor within {} of precision {}",
                    args.guard, args.k
                )));
            }
            Ok(())
        }
        Command::Axioms => {
            let sd = args.skew()?;
            let report = sd.validate_axioms(args.samples.unwrap_or(100), &mut random::rng(args.seed));
            let passed = report.passed();
            let mut v = serde_json::to_value(&report).expect("plain data");
            v["kind"] = json!("axiom_report");
            v["passed"] = json!(passed);
            v["skew"] = io::skew_data_json(&sd);
            args.write_json(v)?;
            if !passed {
                return Err(Error::CheckFailed("axiom validation".into()));
            }
            Ok(())
        }
        Command::Selfcheck => {
            let mut cfg = SelfCheckConfig { seed: args.seed, exec: args.exec(), ..Default::default() };
            if let Some(s) = args.samples {
                cfg.samples = s;
            }
            let report = selfcheck::run(&cfg);
            for s in &report.suites {
                eprintln!("{:<16} {:>6} passed {:>4} failed", s.name, s.passed, s.failed);
            }
            let passed = report.passed();
            let mut v = serde_json::to_value(&report).expect("plain data");
            v["kind"] = json!("selfcheck");
            v["passed"] = json!(passed);
            args.write_json(v)?;
            if !passed {
                let first = report.suites.iter().find_map(|s| s.first_failure.clone()).unwrap_or_default();
                return Err(Error::CheckFailed(first));
            }
            Ok(())
        }
    }
}
