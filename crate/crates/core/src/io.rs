//! Instance files, report documents and SVG figures.
//!
//! An instance is one JSON document:
//!
//! ```json
//! {
//!   "space": {"dim": 2, "norm": "l2"},
//!   "cone": [[1, 1]],
//!   "set": {"polytopes": [[[-1, 0], [0, 0]]]},
//!   "approx": {"dPoints": [[1, 0], [0, -1]], "eps": 1},
//!   "functional": {"f": [1, 1], "alpha": "4/3"},
//!   "query": {"x0": [0, 0], "notions": ["BeApprox", "AMin"]}
//! }
//! ```
//!
//! Numbers may be JSON numbers or strings holding a decimal or a `p/q`
//! rational. `coneK` (a second cone, for SSP queries), `approx`, `functional`
//! and `query` are optional; `set` may hold `points`, `polytopes` or both.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Number, Value};
use sha2::{Digest, Sha256};

use crate::approx::{
    is_approx_benson, is_approx_henig, is_amin, lambda_bound, AMinQuery, ApproxSet, ApproxSpec,
};
use crate::augdual::AugmentedFunctional;
use crate::efficiency::{
    benson_cone, borwein_cone, classify_notion, hurwicz_cone, tbo_cone, verify_separating, FeasibleSet,
    HenigSearch, Notion, Verdict,
};
use crate::numlin::{dot, norm2, sub, unit, Norm, PolyhedralCone, Polytope, Space, Vector};
use crate::scalarize::{certify_benson, certify_ghe, certify_tbo, minimize_g, Certification, ScalarProblem};
use crate::separation::{ssp_check, ssp_witness};
use crate::{Error, Result, TAU_GEOM};

/// A notion that can be requested in a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryNotion {
    Core(Notion),
    BeApprox,
    HeApprox,
    AMin,
}

impl QueryNotion {
    pub fn parse(s: &str) -> Option<QueryNotion> {
        match s {
            "BeApprox" => Some(QueryNotion::BeApprox),
            "HeApprox" => Some(QueryNotion::HeApprox),
            "AMin" => Some(QueryNotion::AMin),
            _ => Notion::parse(s).map(QueryNotion::Core),
        }
    }
}

impl std::fmt::Display for QueryNotion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QueryNotion::Core(n) => write!(f, "{n}"),
            QueryNotion::BeApprox => f.write_str("BeApprox"),
            QueryNotion::HeApprox => f.write_str("HeApprox"),
            QueryNotion::AMin => f.write_str("AMin"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub x0: Vector,
    pub notions: Vec<QueryNotion>,
}

/// A validated instance document.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub space: Space,
    pub cone: PolyhedralCone,
    pub cone_k: Option<PolyhedralCone>,
    pub set: Option<FeasibleSet>,
    pub approx: Option<ApproxSpec>,
    pub functional: Option<(Vector, f64)>,
    pub query: Option<Query>,
    /// SHA-256 of the document bytes, hex encoded.
    pub digest: String,
}

fn bad(path: &str, what: &str) -> Error {
    Error::InvalidInput(format!("{path}: {what}"))
}

/// A JSON number, or a string holding a decimal or `p/q`.
pub fn parse_number(v: &Value, path: &str) -> Result<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| bad(path, "number out of range"))?,
        Value::String(s) => {
            let s = s.trim();
            let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(path, &format!("cannot parse {s:?}")));
            match s.split_once('/') {
                Some((p, q)) => {
                    let q = parse(q)?;
                    if q == 0.0 {
                        return Err(bad(path, "zero denominator"));
                    }
                    parse(p)? / q
                }
                None => parse(s)?,
            }
        }
        _ => return Err(bad(path, "expected a number")),
    };
    if !x.is_finite() {
        return Err(bad(path, "non-finite number"));
    }
    Ok(x)
}

fn parse_vector(v: &Value, path: &str, dim: usize) -> Result<Vector> {
    let arr = v.as_array().ok_or_else(|| bad(path, "expected an array of numbers"))?;
    if arr.len() != dim {
        return Err(bad(path, &format!("expected {dim} coordinates, got {}", arr.len())));
    }
    arr.iter().enumerate().map(|(i, x)| parse_number(x, &format!("{path}[{i}]"))).collect()
}

fn parse_vectors(v: &Value, path: &str, dim: usize) -> Result<Vec<Vector>> {
    let arr = v.as_array().ok_or_else(|| bad(path, "expected an array of vectors"))?;
    if arr.is_empty() {
        return Err(bad(path, "empty list"));
    }
    arr.iter().enumerate().map(|(i, x)| parse_vector(x, &format!("{path}[{i}]"), dim)).collect()
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v.as_object().ok_or_else(|| bad(path, "expected an object"))?;
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(bad(path, &format!("unknown field {k:?}")));
        }
    }
    Ok(obj)
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad(path, &format!("missing field {key:?}")))
}

/// Parse and validate an instance; `norm` overrides the file's norm.
pub fn parse_instance(text: &str, norm: Option<Norm>) -> Result<InstanceFile> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))?;
    let top = object(&root, "$", &["space", "cone", "coneK", "set", "approx", "functional", "query"])?;

    let sp = object(field(top, "$", "space")?, "space", &["dim", "norm"])?;
    let dim = field(sp, "space", "dim")?.as_u64().filter(|d| *d >= 1).ok_or_else(|| bad("space.dim", "expected a positive integer"))? as usize;
    let file_norm = match sp.get("norm") {
        None => Norm::L2,
        Some(v) => v.as_str().and_then(Norm::parse).ok_or_else(|| bad("space.norm", "expected \"l1\", \"l2\" or \"linf\""))?,
    };
    let space = Space::new(dim, norm.unwrap_or(file_norm))?;

    let cone = PolyhedralCone::new(parse_vectors(field(top, "$", "cone")?, "cone", dim)?, space.norm)?;
    let cone_k = top.get("coneK").map(|v| PolyhedralCone::new(parse_vectors(v, "coneK", dim)?, space.norm)).transpose()?;

    let set = match top.get("set") {
        None => None,
        Some(v) => {
            let s = object(v, "set", &["points", "polytopes"])?;
            let mut blocks = Vec::new();
            if let Some(p) = s.get("points") {
                blocks.extend(parse_vectors(p, "set.points", dim)?.into_iter().map(Polytope::point));
            }
            if let Some(ps) = s.get("polytopes") {
                let arr = ps.as_array().ok_or_else(|| bad("set.polytopes", "expected an array of vertex lists"))?;
                for (i, p) in arr.iter().enumerate() {
                    blocks.push(Polytope::new(parse_vectors(p, &format!("set.polytopes[{i}]"), dim)?)?);
                }
            }
            if blocks.is_empty() {
                return Err(bad("set", "no points or polytopes"));
            }
            Some(FeasibleSet::new(blocks)?)
        }
    };

    let approx = match top.get("approx") {
        None => None,
        Some(v) => {
            let ap = object(v, "approx", &["dPoints", "dPolytope", "eps"])?;
            let d = match (ap.get("dPoints"), ap.get("dPolytope")) {
                (Some(p), None) => ApproxSet::Points(parse_vectors(p, "approx.dPoints", dim)?),
                (None, Some(p)) => ApproxSet::Polytope(Polytope::new(parse_vectors(p, "approx.dPolytope", dim)?)?),
                _ => return Err(bad("approx", "give exactly one of dPoints and dPolytope")),
            };
            Some(ApproxSpec::new(d, parse_number(field(ap, "approx", "eps")?, "approx.eps")?, &cone)?)
        }
    };

    let functional = match top.get("functional") {
        None => None,
        Some(v) => {
            let fo = object(v, "functional", &["f", "alpha"])?;
            let f = parse_vector(field(fo, "functional", "f")?, "functional.f", dim)?;
            Some((f, parse_number(field(fo, "functional", "alpha")?, "functional.alpha")?))
        }
    };

    let query = match top.get("query") {
        None => None,
        Some(v) => {
            let q = object(v, "query", &["x0", "notions"])?;
            let x0 = parse_vector(field(q, "query", "x0")?, "query.x0", dim)?;
            let notions = match q.get("notions") {
                None => Notion::ALL.into_iter().map(QueryNotion::Core).collect(),
                Some(ns) => ns
                    .as_array()
                    .ok_or_else(|| bad("query.notions", "expected an array of names"))?
                    .iter()
                    .map(|n| n.as_str().and_then(QueryNotion::parse).ok_or_else(|| bad("query.notions", &format!("unknown notion {n}"))))
                    .collect::<Result<Vec<_>>>()?,
            };
            Some(Query { x0, notions })
        }
    };

    let digest = Sha256::digest(text.as_bytes()).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    });
    Ok(InstanceFile { space, cone, cone_k, set, approx, functional, query, digest })
}

impl InstanceFile {
    pub fn set(&self) -> Result<&FeasibleSet> {
        self.set.as_ref().ok_or_else(|| bad("set", "required for this command"))
    }

    pub fn query(&self) -> Result<&Query> {
        self.query.as_ref().ok_or_else(|| bad("query", "required for this command"))
    }

    pub fn approx(&self) -> Result<&ApproxSpec> {
        self.approx.as_ref().ok_or_else(|| bad("approx", "required for approximate notions"))
    }

    pub fn functional(&self) -> Result<AugmentedFunctional> {
        let (f, alpha) = self.functional.clone().ok_or_else(|| bad("functional", "required for AMin"))?;
        AugmentedFunctional::new(&self.cone, f, alpha, &self.space)
    }
}

/// One line of a classification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictEntry {
    pub notion: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vector>,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub instance_digest: String,
    pub verdicts: Vec<VerdictEntry>,
    /// Wall-clock seconds per notion; absent unless requested, so that
    /// reports stay byte-identical across runs.
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn has_unknown(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == "unknown")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[derive(Default)]
pub struct ClassifyOptions {
    pub timings: bool,
    pub henig: HenigSearch,
}


fn entry(notion: String, v: Verdict) -> Result<VerdictEntry> {
    Ok(match v {
        Verdict::Yes(c) => VerdictEntry {
            notion,
            status: "yes".into(),
            certificate: Some(serde_json::to_value(c).map_err(|e| Error::NumericalFailure(e.to_string()))?),
            counterexample: None,
            notes: String::new(),
        },
        Verdict::No(y) => VerdictEntry { notion, status: "no".into(), certificate: None, counterexample: Some(y), notes: String::new() },
        Verdict::Unknown(why) => VerdictEntry { notion, status: "unknown".into(), certificate: None, counterexample: None, notes: why },
    })
}

/// Classify the query point for every requested notion.
pub fn classify_instance(inst: &InstanceFile, opts: &ClassifyOptions) -> Result<Report> {
    let a = inst.set()?;
    let q = inst.query()?;
    let c = &inst.cone;
    let mut verdicts = Vec::with_capacity(q.notions.len());
    let mut timings = BTreeMap::new();
    for &n in &q.notions {
        let start = Instant::now();
        let e = match n {
            QueryNotion::Core(core) => entry(n.to_string(), classify_notion(core, a, c, &q.x0, &inst.space, &opts.henig)?)?,
            QueryNotion::BeApprox => entry(n.to_string(), is_approx_benson(a, c, inst.approx()?, &q.x0)?)?,
            QueryNotion::HeApprox => {
                entry(n.to_string(), is_approx_henig(a, c, inst.approx()?, &q.x0, &inst.space, &opts.henig)?)?
            }
            QueryNotion::AMin => {
                let fa = inst.functional()?;
                let lambda = lambda_bound(inst.approx()?, &fa, &inst.space)?;
                amin_entry(a, fa, &q.x0, lambda, &inst.space)?
            }
        };
        timings.insert(n.to_string(), start.elapsed().as_secs_f64());
        verdicts.push(e);
    }
    Ok(Report { instance_digest: inst.digest.clone(), verdicts, timings: opts.timings.then_some(timings) })
}

fn amin_entry(a: &FeasibleSet, fa: AugmentedFunctional, x0: &[f64], lambda: f64, space: &Space) -> Result<VerdictEntry> {
    let problem = ScalarProblem::new(fa.clone(), x0.to_vec(), a.clone(), *space)?;
    let min_value = minimize_g(&problem)?.min_value;
    let member = is_amin(a, &AMinQuery { fa: fa.clone(), x0: x0.to_vec(), lambda }, space)?;
    Ok(VerdictEntry {
        notion: "AMin".into(),
        status: if member { "yes" } else { "no" }.into(),
        certificate: Some(json!({"kind": "amin", "f": fa.f, "alpha": fa.alpha, "lambda": lambda, "minValue": min_value})),
        counterexample: None,
        notes: format!("lambda = {}", fmt17(lambda)),
    })
}

/// `is_amin` for a user-supplied pair; `lambda` defaults to the bound from
/// the instance's approximation set.
pub fn amin_report(inst: &InstanceFile, f: Vector, alpha: f64, lambda: Option<f64>) -> Result<Report> {
    let a = inst.set()?;
    let q = inst.query()?;
    let fa = AugmentedFunctional::new(&inst.cone, f, alpha, &inst.space)?;
    let lambda = match lambda {
        Some(l) => l,
        None => lambda_bound(inst.approx()?, &fa, &inst.space)?,
    };
    Ok(Report {
        instance_digest: inst.digest.clone(),
        verdicts: vec![amin_entry(a, fa, &q.x0, lambda, &inst.space)?],
        timings: None,
    })
}

/// SSP of `(cone, coneK)` with the witness when it holds.
pub fn ssp_report(inst: &InstanceFile) -> Result<Value> {
    let k = inst.cone_k.as_ref().ok_or_else(|| bad("coneK", "required for the ssp command"))?;
    let v = ssp_check(&inst.cone, k, &inst.space)?;
    let witness = if v.holds { Some(ssp_witness(&inst.cone, k, &inst.space)?) } else { None };
    Ok(json!({
        "instanceDigest": inst.digest,
        "holds": v.holds,
        "distance": v.distance,
        "exact": v.exact,
        "bracket": [v.bracket.0, v.bracket.1],
        "witness": witness,
    }))
}

/// Which certificate search to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifyKind {
    Benson,
    Ghe,
    Tbo,
}

impl CertifyKind {
    pub fn parse(s: &str) -> Option<CertifyKind> {
        match s.to_ascii_lowercase().as_str() {
            "benson" | "be" => Some(CertifyKind::Benson),
            "ghe" => Some(CertifyKind::Ghe),
            "tbo" => Some(CertifyKind::Tbo),
            _ => None,
        }
    }
}

pub fn certify_report(inst: &InstanceFile, kind: CertifyKind, budget: usize, seed: u64) -> Result<(Certification, Value)> {
    let a = inst.set()?;
    let x0 = &inst.query()?.x0;
    let cert = match kind {
        CertifyKind::Benson => certify_benson(a, &inst.cone, x0, &inst.space, budget, seed)?,
        CertifyKind::Ghe => certify_ghe(a, &inst.cone, x0, &inst.space, budget, seed)?,
        CertifyKind::Tbo => certify_tbo(a, &inst.cone, x0, &inst.space, budget, seed)?,
    };
    let mut v = serde_json::to_value(&cert).map_err(|e| Error::NumericalFailure(e.to_string()))?;
    v["instanceDigest"] = json!(inst.digest);
    Ok((cert, v))
}

/// Evaluate `g` for a user pair: global minimum, minimizers, per-block minima.
pub fn scalarize_report(inst: &InstanceFile, f: Vector, alpha: f64) -> Result<Value> {
    let a = inst.set()?;
    let x0 = &inst.query()?.x0;
    let fa = AugmentedFunctional::new(&inst.cone, f, alpha, &inst.space)?;
    let sol = minimize_g(&ScalarProblem::new(fa.clone(), x0.clone(), a.clone(), inst.space)?)?;
    Ok(json!({
        "instanceDigest": inst.digest,
        "f": fa.f,
        "alpha": fa.alpha,
        "classTag": fa.class_tag,
        "solution": sol,
    }))
}

/// Re-check the certificates of a rendered report against the instance;
/// returns the notions whose certificate did not re-validate.
pub fn reverify_report(inst: &InstanceFile, report: &Value) -> Result<Vec<String>> {
    let a = inst.set()?;
    let q = inst.query()?;
    let c = &inst.cone;
    let entries = report["verdicts"].as_array().ok_or_else(|| bad("report", "missing verdicts"))?;
    let mut failed = Vec::new();
    for e in entries {
        let notion = e["notion"].as_str().unwrap_or_default().to_string();
        let cert = &e["certificate"];
        let ok = match cert["kind"].as_str() {
            Some("separating") => {
                let hs: Vec<Vector> = cert["functionals"]
                    .as_array()
                    .map(|hs| hs.iter().map(|h| parse_vector(h, "functionals", inst.space.dim)).collect())
                    .transpose()?
                    .unwrap_or_default();
                let union = match Notion::parse(&notion) {
                    Some(Notion::Be) => Some(benson_cone(a, c, &q.x0)),
                    Some(Notion::Bo) => Some(borwein_cone(a, &q.x0)),
                    Some(Notion::Hu) => Some(hurwicz_cone(a, c, &q.x0)),
                    Some(Notion::TBo) => Some(tbo_cone(a, c, &q.x0)?),
                    _ => None,
                };
                union.is_none_or(|u| verify_separating(&hs, &u, c))
            }
            Some("positive") => {
                let f = parse_vector(&cert["f"], "f", inst.space.dim)?;
                let fx0 = dot(&f, &q.x0);
                c.generators().iter().all(|g| dot(&f, g) > 0.0) && a.vertices().all(|v| dot(&f, v) >= fx0 - TAU_GEOM)
            }
            Some("amin") => {
                let f = parse_vector(&cert["f"], "f", inst.space.dim)?;
                let alpha = parse_number(&cert["alpha"], "alpha")?;
                let lambda = parse_number(&cert["lambda"], "lambda")?;
                let fa = AugmentedFunctional::new(c, f, alpha, &inst.space)?;
                let member = is_amin(a, &AMinQuery { fa, x0: q.x0.clone(), lambda }, &inst.space)?;
                member == (e["status"] == "yes")
            }
            _ => {
                // Other certificates are re-derived by the classifier.
                match QueryNotion::parse(&notion) {
                    Some(QueryNotion::Core(n)) => {
                        classify_notion(n, a, c, &q.x0, &inst.space, &HenigSearch::default())?.status() == e["status"]
                    }
                    _ => true,
                }
            }
        };
        if !ok {
            failed.push(notion);
        }
    }
    Ok(failed)
}

/// Shortest decimal rendering of `x` to 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if neg { "-" } else { "" };
    if (-7..21).contains(&exp) {
        let body = if exp >= 0 {
            let e = exp as usize + 1;
            if digits.len() <= e {
                format!("{digits}{}", "0".repeat(e - digits.len()))
            } else {
                format!("{}.{}", &digits[..e], &digits[e..])
            }
        } else {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        };
        format!("{sign}{body}")
    } else if digits.len() == 1 {
        format!("{sign}{digits}e{exp}")
    } else {
        format!("{sign}{}.{}e{exp}", &digits[..1], &digits[1..])
    }
}

fn fix_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Value::Number(n),
        Value::Number(n) => match n.as_f64() {
            Some(x) if x.is_finite() => Value::Number(Number::from_string_unchecked(fmt17(x))),
            _ => Value::Null,
        },
        Value::Array(a) => Value::Array(a.into_iter().map(fix_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, fix_numbers(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with every float at 17 significant digits.
pub fn render_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::NumericalFailure(e.to_string()))?;
    serde_json::to_string_pretty(&fix_numbers(v)).map_err(|e| Error::NumericalFailure(e.to_string()))
}

/// Static 2-D figure: `C` and `-C` at `x0`, the blocks of `A`, and the
/// counterexample directions of the report as arrows.
pub fn render_svg(inst: &InstanceFile, report: Option<&Report>) -> Result<String> {
    if inst.space.dim != 2 {
        return Err(Error::InvalidInput("SVG output needs a 2-D instance".into()));
    }
    let a = inst.set()?;
    let x0 = inst.query.as_ref().map(|q| q.x0.clone()).unwrap_or_else(|| vec![0.0, 0.0]);
    let mut pts: Vec<Vector> = a.vertices().cloned().collect();
    pts.push(x0.clone());
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
    for i in 0..2 {
        lo[i] -= span * 0.5;
        hi[i] += span * 0.5;
    }
    let size = 480.0;
    let s = size / (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let px = |p: &[f64]| ((p[0] - lo[0]) * s, size - (p[1] - lo[1]) * s);
    let pt = |p: &[f64]| {
        let (x, y) = px(p);
        format!("{x:.2},{y:.2}")
    };
    let reach = span * 2.0;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
         <defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">\
         <path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker></defs>\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for (cone, fill) in [(inst.cone.clone(), "#3498db"), (inst.cone.neg(), "#e67e22")] {
        let mut rays: Vec<Vector> = cone.generators().iter().filter_map(|g| unit(g)).collect();
        let mid = unit(&rays.iter().fold(vec![0.0, 0.0], |m, r| crate::numlin::add(&m, r))).unwrap_or_else(|| rays[0].clone());
        rays.sort_by(|p, q| angle_from(&mid, p).total_cmp(&angle_from(&mid, q)));
        let poly: Vec<String> = std::iter::once(pt(&x0))
            .chain(rays.iter().map(|r| pt(&crate::numlin::add(&x0, &crate::numlin::scale(r, reach)))))
            .collect();
        let _ = writeln!(out, "<polygon points=\"{}\" fill=\"{fill}\" fill-opacity=\"0.2\" stroke=\"{fill}\"/>", poly.join(" "));
    }
    for b in &a.blocks {
        let vs = b.vertices();
        match vs.len() {
            1 => {
                let (x, y) = px(&vs[0]);
                let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"#2c3e50\"/>");
            }
            _ => {
                let center = crate::numlin::scale(&vs.iter().fold(vec![0.0, 0.0], |m, v| crate::numlin::add(&m, v)), 1.0 / vs.len() as f64);
                let mut sorted = vs.to_vec();
                sorted.sort_by(|p, q| {
                    let (dp, dq) = (sub(p, &center), sub(q, &center));
                    dp[1].atan2(dp[0]).total_cmp(&dq[1].atan2(dq[0]))
                });
                let poly: Vec<String> = sorted.iter().map(|v| pt(v)).collect();
                let _ = writeln!(
                    out,
                    "<polygon points=\"{}\" fill=\"#2c3e50\" fill-opacity=\"0.35\" stroke=\"#2c3e50\" stroke-width=\"2\"/>",
                    poly.join(" ")
                );
            }
        }
    }
    if let Some(r) = report {
        for e in &r.verdicts {
            if let Some(y) = e.counterexample.as_ref().filter(|y| norm2(y) > 0.0) {
                let tip = crate::numlin::add(&x0, &crate::numlin::scale(y, span * 0.4 / norm2(y)));
                let ((x1, y1), (x2, y2)) = (px(&x0), px(&tip));
                let _ = writeln!(
                    out,
                    "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#c0392b\" stroke-width=\"2\" marker-end=\"url(#head)\"><title>{}</title></line>",
                    e.notion
                );
            }
        }
    }
    let (x, y) = px(&x0);
    let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"#c0392b\"/>");
    out.push_str("</svg>\n");
    Ok(out)
}

fn angle_from(mid: &[f64], r: &[f64]) -> f64 {
    let cross = mid[0] * r[1] - mid[1] * r[0];
    cross.atan2(dot(mid, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = r#"{
        "space": {"dim": 2, "norm": "l2"},
        "cone": [[1, 1]],
        "set": {"polytopes": [[[-1, 0], [0, 0]]]},
        "approx": {"dPoints": [[1, 0], ["0.70710678118654752", "-0.70710678118654752"], [0, -1]], "eps": 1},
        "functional": {"f": [1, 1], "alpha": "4/3"},
        "query": {"x0": [0, 0], "notions": ["BeApprox", "AMin"]}
    }"#;

    #[test]
    fn numbers_accept_rationals() {
        assert_eq!(parse_number(&json!("4/3"), "x").unwrap(), 4.0 / 3.0);
        assert_eq!(parse_number(&json!("-0.5"), "x").unwrap(), -0.5);
        assert_eq!(parse_number(&json!(2), "x").unwrap(), 2.0);
        assert!(parse_number(&json!("1/0"), "x").is_err());
        assert!(parse_number(&json!("abc"), "x").is_err());
    }

    #[test]
    fn fmt17_examples() {
        assert_eq!(fmt17(1.0), "1");
        assert_eq!(fmt17(-0.75), "-0.75");
        assert_eq!(fmt17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt17(2f64.powi(-30)), "9.3132257461547852e-10");
        assert_eq!(fmt17(1e30), "1e30");
        assert_eq!(fmt17(123456.5), "123456.5");
        assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn golden_report() {
        let inst = parse_instance(GOLDEN, None).unwrap();
        let r = classify_instance(&inst, &ClassifyOptions::default()).unwrap();
        assert_eq!(r.verdicts[0].status, "no");
        let y = r.verdicts[0].counterexample.as_ref().unwrap();
        assert!((y[0] + 1.0).abs() < 1e-9 && (y[1] + 1.0).abs() < 1e-9);
        assert_eq!(r.verdicts[1].status, "yes");
        assert!(r.verdicts[1].notes.starts_with("lambda = 0.333333333333333"));
        let text = render_json(&r).unwrap();
        assert_eq!(text, render_json(&classify_instance(&inst, &ClassifyOptions::default()).unwrap()).unwrap());
        let back: Value = serde_json::from_str(&text).unwrap();
        assert!(reverify_report(&inst, &back).unwrap().is_empty());
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse_instance("{", None), Err(Error::InvalidInput(_))));
        let extra = r#"{"space": {"dim": 2}, "cone": [[1, 0]], "bogus": 1}"#;
        assert!(parse_instance(extra, None).is_err());
        let short = r#"{"space": {"dim": 2}, "cone": [[1]]}"#;
        assert!(parse_instance(short, None).is_err());
        let ok = r#"{"space": {"dim": 2}, "cone": [[1, 0], [0, 1]]}"#;
        assert_eq!(parse_instance(ok, Some(Norm::Linf)).unwrap().space.norm, Norm::Linf);
    }

    #[test]
    fn svg_has_the_pieces() {
        let inst = parse_instance(GOLDEN, None).unwrap();
        let r = classify_instance(&inst, &ClassifyOptions::default()).unwrap();
        let svg = render_svg(&inst, Some(&r)).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<polygon") && svg.contains("marker-end"));
    }
}
