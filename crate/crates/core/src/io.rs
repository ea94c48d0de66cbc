//! JSON and CSV interchange.
//!
//! Every residue travels as a decimal string. Input is validated strictly:
//! a residue must be written canonically (no sign, no leading zeros) and lie
//! below its modulus, unless the reader is in normalizing mode, in which case
//! any integer is accepted and reduced.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coeff::CoeffSeries;
use crate::error::{Error, Result};
use crate::iwasawa::{ModuleSpec, RankGrowth};
use crate::padic::{Mode, PadicInt, PrecisionContext, EPSILON_GUARD};
use crate::series::{SkewSeries, ZPoly};
use crate::skew::SkewData;
use crate::weierstrass::DistinguishedPoly;

fn default_mode() -> String {
    Mode::Integral.as_str().into()
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct CoeffJson {
    kind: String,
    p: u64,
    #[serde(rename = "K")]
    k: u32,
    mode: String,
    coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct SkewJson {
    kind: String,
    p: u64,
    #[serde(rename = "K")]
    k: u32,
    #[serde(default = "default_mode")]
    mode: String,
    epsilon: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct SeriesJson {
    kind: String,
    skew: SkewJson,
    rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct DistJson {
    kind: String,
    s: usize,
    skew: SkewJson,
    lower: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct ZPolyJson {
    kind: String,
    skew: SkewJson,
    coeffs: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct ModuleJson {
    kind: String,
    p: u64,
    d: u32,
    torsion: Vec<Vec<String>>,
    p_power_ranks: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

/// Reader settings.
#[derive(Debug, Clone, Copy, Default)]
pub struct Reader {
    /// Accept signed or non-canonical integers and reduce them.
    pub normalize: bool,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn expect_kind(found: &str, want: &str) -> Result<()> {
    if found != want {
        return Err(schema(format!("expected kind \"{want}\", found \"{found}\"")));
    }
    Ok(())
}

fn mode_from_str(s: &str) -> Result<Mode> {
    match s {
        "integral" => Ok(Mode::Integral),
        "charp" => Ok(Mode::CharP),
        other => Err(schema(format!("unknown mode \"{other}\""))),
    }
}

fn context(p: u64, k: u32, mode: &str) -> Result<PrecisionContext> {
    PrecisionContext::new(p, k, mode_from_str(mode)?).map_err(|e| schema(e.to_string()))
}

impl Reader {
    pub fn strict() -> Self {
        Reader { normalize: false }
    }

    pub fn normalizing() -> Self {
        Reader { normalize: true }
    }

    fn integer(&self, s: &str) -> Result<BigInt> {
        let canonical = s == "0" || (!s.is_empty() && !s.starts_with('0') && s.bytes().all(|b| b.is_ascii_digit()));
        if canonical {
            return Ok(BigInt::from_str(s).expect("digits"));
        }
        if self.normalize {
            if let Ok(v) = BigInt::from_str(s.trim()) {
                return Ok(v);
            }
        }
        Err(schema(format!("\"{s}\" is not a canonical decimal residue")))
    }

    fn residues(&self, xs: &[String]) -> Result<Vec<BigInt>> {
        xs.iter().map(|s| self.integer(s)).collect()
    }

    fn coeff_at(&self, ctx: &PrecisionContext, level: u32, xs: &[String], what: &str) -> Result<CoeffSeries> {
        let vals = self.residues(xs)?;
        if self.normalize {
            return Ok(CoeffSeries::from_bigints(ctx, level, &vals));
        }
        let res: Vec<BigUint> = vals.into_iter().map(|v| v.to_biguint().expect("unsigned")).collect();
        CoeffSeries::from_residues(ctx, level, &res).map_err(|e| schema(format!("{what}: {e}")))
    }

    fn skew_from(&self, j: &SkewJson) -> Result<SkewData> {
        expect_kind(&j.kind, "skew_data")?;
        let ctx = context(j.p, j.k, &j.mode)?;
        let eps = self.integer(&j.epsilon)?;
        let prec = j.k + EPSILON_GUARD;
        if !self.normalize && BigInt::from(ctx.pow(prec)) <= eps {
            return Err(schema(format!("epsilon {eps} not reduced modulo p^{prec}")));
        }
        SkewData::new(&ctx, &eps)
    }

    fn rows_at(&self, sd: &SkewData, rows: &[Vec<String>], what: &str) -> Result<Vec<CoeffSeries>> {
        let ctx = sd.ctx();
        let k = ctx.k() as usize;
        let mut out = Vec::new();
        for (j, row) in rows.iter().enumerate() {
            if j >= k {
                if self.normalize || row.iter().all(|s| s == "0") {
                    continue;
                }
                return Err(schema(format!("{what}: nonzero row {j} at or beyond K = {k}")));
            }
            out.push(self.coeff_at(ctx, (k - j) as u32, row, &format!("{what} row {j}"))?);
        }
        Ok(out)
    }

    pub fn coeff_series(&self, v: &Value) -> Result<CoeffSeries> {
        let j: CoeffJson = from_value(v)?;
        expect_kind(&j.kind, "coeff_series")?;
        let ctx = context(j.p, j.k, &j.mode)?;
        self.coeff_at(&ctx, j.k, &j.coeffs, "coeffs")
    }

    pub fn skew_data(&self, v: &Value) -> Result<SkewData> {
        self.skew_from(&from_value(v)?)
    }

    pub fn skew_series(&self, v: &Value) -> Result<SkewSeries> {
        let j: SeriesJson = from_value(v)?;
        expect_kind(&j.kind, "skew_series")?;
        let sd = self.skew_from(&j.skew)?;
        let rows = self.rows_at(&sd, &j.rows, "rows")?;
        Ok(SkewSeries::from_rows(&sd, rows))
    }

    pub fn distinguished(&self, v: &Value) -> Result<DistinguishedPoly> {
        let j: DistJson = from_value(v)?;
        expect_kind(&j.kind, "distinguished")?;
        if j.lower.len() != j.s {
            return Err(schema(format!("s = {} but {} lower coefficients", j.s, j.lower.len())));
        }
        let sd = self.skew_from(&j.skew)?;
        let lower = self.rows_at(&sd, &j.lower, "lower")?;
        if lower.len() != j.s {
            return Err(schema(format!("degree {} not below K", j.s)));
        }
        DistinguishedPoly::new(&sd, lower).map_err(|e| schema(e.to_string()))
    }

    pub fn z_poly(&self, v: &Value) -> Result<ZPoly> {
        let j: ZPolyJson = from_value(v)?;
        expect_kind(&j.kind, "z_poly")?;
        let sd = self.skew_from(&j.skew)?;
        let k = sd.ctx().k();
        let coeffs = j
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| self.coeff_at(sd.ctx(), k, c, &format!("coefficient of Z^{i}")))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZPoly::new(&sd, coeffs))
    }

    pub fn module_spec(&self, v: &Value) -> Result<(u64, ModuleSpec)> {
        let j: ModuleJson = from_value(v)?;
        expect_kind(&j.kind, "module_spec")?;
        let torsion = j
            .torsion
            .iter()
            .map(|f| f.iter().map(|s| BigInt::from_str(s).map_err(|_| schema(format!("\"{s}\" is not an integer")))).collect())
            .collect::<Result<Vec<Vec<BigInt>>>>()?;
        let spec = ModuleSpec { d: j.d, torsion, p_power_ranks: j.p_power_ranks };
        if !crate::padic::is_prime(j.p) {
            return Err(schema(format!("{} is not a prime", j.p)));
        }
        spec.validate(j.p)?;
        Ok((j.p, spec))
    }
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| schema(e.to_string()))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("plain data")
}

fn strings(r: &CoeffSeries) -> Vec<String> {
    r.residues().iter().map(|x| x.to_string()).collect()
}

fn skew_json(sd: &SkewData) -> SkewJson {
    let ctx = sd.ctx();
    SkewJson {
        kind: "skew_data".into(),
        p: ctx.p(),
        k: ctx.k(),
        mode: ctx.mode().as_str().into(),
        epsilon: sd.epsilon().residue().to_string(),
        seed: None,
    }
}

pub fn coeff_series_json(r: &CoeffSeries) -> Value {
    let ctx = r.ctx();
    to_value(&CoeffJson {
        kind: "coeff_series".into(),
        p: ctx.p(),
        k: r.level(),
        mode: ctx.mode().as_str().into(),
        coeffs: strings(r),
        seed: None,
    })
}

pub fn skew_data_json(sd: &SkewData) -> Value {
    to_value(&skew_json(sd))
}

pub fn skew_series_json(f: &SkewSeries) -> Value {
    to_value(&SeriesJson {
        kind: "skew_series".into(),
        skew: skew_json(f.sd()),
        rows: f.rows().iter().map(strings).collect(),
        seed: None,
    })
}

pub fn distinguished_json(f: &DistinguishedPoly) -> Value {
    to_value(&DistJson {
        kind: "distinguished".into(),
        s: f.degree(),
        skew: skew_json(f.sd()),
        lower: f.lower().iter().map(strings).collect(),
        seed: None,
    })
}

pub fn z_poly_json(b: &ZPoly) -> Value {
    to_value(&ZPolyJson {
        kind: "z_poly".into(),
        skew: skew_json(&b.sd),
        coeffs: b.coeffs.iter().map(strings).collect(),
        seed: None,
    })
}

pub fn module_spec_json(p: u64, spec: &ModuleSpec) -> Value {
    to_value(&ModuleJson {
        kind: "module_spec".into(),
        p,
        d: spec.d,
        torsion: spec.torsion.iter().map(|f| f.iter().map(|c| c.to_string()).collect()).collect(),
        p_power_ranks: spec.p_power_ranks.clone(),
        seed: None,
    })
}

/// Residue and precision of a p-adic integer.
pub fn padic_json(x: &PadicInt) -> Value {
    serde_json::json!({ "residue": x.residue().to_string(), "prec": x.prec() })
}

/// Adds the seed to a top-level document.
pub fn with_seed(mut v: Value, seed: u64) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("seed".into(), Value::from(seed));
    }
    v
}

/// Canonical text form: pretty-printed with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema(format!("malformed JSON: {e}")))
}

/// The `kind` tag of a document.
pub fn kind_of(v: &Value) -> Result<&str> {
    v.get("kind").and_then(Value::as_str).ok_or_else(|| schema("missing \"kind\""))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn rank_growth_csv(g: &RankGrowth) -> String {
    let mut s = String::from("n,lambda_n,flag\n");
    for r in &g.rows {
        s.push_str(&format!("{},{},{}\n", r.n, r.lambda, r.flag));
    }
    s
}

pub fn rank_growth_summary(g: &RankGrowth) -> Value {
    serde_json::json!({
        "d": g.d,
        "c": g.c,
        "stable_from": g.stable_from,
        "stabilized": g.stabilized,
        "flagged": g.rows.iter().any(|r| r.flag),
    })
}
