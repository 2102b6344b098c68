//! JSON documents read and written by the command-line tool.
//!
//! Input documents carry a `schema` field naming their kind. Families may
//! embed their groupoid and coefficients inline or point at other
//! documents by path, resolved relative to the referring file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coefficients::{Coefficients, FiniteRing, RawRing, RawSemigroupoid, Semigroupoid, RING_SCHEMA, SEMIGROUPOID_SCHEMA};
use crate::domination::Domination;
use crate::error::Error;
use crate::family::{FnFamily, ProductMode};
use crate::function::PartialFn;
use crate::groupoid::{FiniteGroupoid, RawGroupoid, GROUPOID_SCHEMA};
use crate::morphism;
use crate::report::{Budget, Report, Status};
use crate::ultrafilter::{verify_recovery, BijectionRow};
use crate::TOOL_VERSION;

pub const FNFAMILY_SCHEMA: &str = "fnfamily/v1";
pub const MORPHISM_SCHEMA: &str = "morphism/v1";
pub const RECONSTRUCTION_SCHEMA: &str = "reconstruction-report/v1";

/// Coefficients known by name: `trivial` (the one-element monoid), `F2`,
/// `F3`, `F4`, `F5`, `F7`, ... and `Z/n`.
pub fn builtin_coefficients(name: &str) -> Result<Coefficients, Error> {
    if name == "trivial" {
        return Ok(Coefficients::semigroupoid(Semigroupoid::trivial()));
    }
    if let Some(q) = name.strip_prefix('F').and_then(|q| q.parse().ok()) {
        return Ok(Coefficients::ring(FiniteRing::galois_field(q)?));
    }
    if let Some(n) = name.strip_prefix("Z/").and_then(|n| n.parse::<usize>().ok()).filter(|&n| n >= 2) {
        return Ok(Coefficients::ring(FiniteRing::integers_mod(n)));
    }
    Err(Error::Schema(format!("unknown built-in coefficients `{name}`")))
}

/// A reference to another document, or the document itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source {
    Path { path: String },
    Builtin { builtin: String },
    Inline(Value),
}

/// How the elements of a family are given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construct {
    /// Every ring-valued function (homogeneous ones on graded groupoids),
    /// under convolution.
    Steinberg,
    /// Every `Y^×`-valued function on a bisection.
    CanonicalBumpy,
    /// Every `Y`-valued function on a bisection.
    AllOnBisections,
}

/// The `fnfamily/v1` document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFamily {
    pub schema: String,
    pub groupoid: Source,
    pub coefficients: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ProductMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construct: Option<Construct>,
    /// Each element maps arrow names to coefficient names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<BTreeMap<String, String>>>,
}

/// The `morphism/v1` document: either an explicit element map (elements
/// written as `{arrow:value,...}`) or the map induced by an arrow bijection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMorphism {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub induced_by_arrow_map: Option<BTreeMap<String, String>>,
}

/// Any input document.
#[derive(Clone, Debug)]
pub enum Document {
    Groupoid(FiniteGroupoid),
    Ring(FiniteRing),
    Semigroupoid(Semigroupoid),
    Family(FnFamily),
    Morphism(RawMorphism),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Groupoid(_) => GROUPOID_SCHEMA,
            Document::Ring(_) => RING_SCHEMA,
            Document::Semigroupoid(_) => SEMIGROUPOID_SCHEMA,
            Document::Family(_) => FNFAMILY_SCHEMA,
            Document::Morphism(_) => MORPHISM_SCHEMA,
        }
    }
}

fn schema_of(v: &Value) -> Result<&str, Error> {
    v.get("schema").and_then(Value::as_str).ok_or_else(|| Error::Schema("missing `schema` field".into()))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, Error> {
    serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

fn resolve(base: &Path, source: &Source) -> Result<Value, Error> {
    match source {
        Source::Path { path } => read_json(&base.join(path)),
        Source::Inline(v) => Ok(v.clone()),
        Source::Builtin { builtin } => Err(Error::Schema(format!("built-in `{builtin}` is only allowed for coefficients"))),
    }
}

/// Parses any document from a JSON value; `base` resolves relative paths.
pub fn parse_document(v: Value, base: &Path) -> Result<Document, Error> {
    match schema_of(&v)? {
        GROUPOID_SCHEMA => Ok(Document::Groupoid(FiniteGroupoid::validate(&from_value::<RawGroupoid>(v)?)?)),
        RING_SCHEMA => Ok(Document::Ring(FiniteRing::validate(&from_value::<RawRing>(v)?)?)),
        SEMIGROUPOID_SCHEMA => Ok(Document::Semigroupoid(Semigroupoid::validate(&from_value::<RawSemigroupoid>(v)?)?)),
        FNFAMILY_SCHEMA => Ok(Document::Family(build_family(&from_value(v)?, base, &Budget::unlimited())?)),
        MORPHISM_SCHEMA => {
            let m: RawMorphism = from_value(v)?;
            if m.map.is_some() == m.induced_by_arrow_map.is_some() {
                return Err(Error::Schema("a morphism needs exactly one of `map` and `induced_by_arrow_map`".into()));
            }
            Ok(Document::Morphism(m))
        }
        other => Err(Error::Schema(format!("unknown schema `{other}`"))),
    }
}

/// Reads and validates a document file.
pub fn load_document(path: &Path) -> Result<Document, Error> {
    let v = read_json(path)?;
    parse_document(v, &parent(path))
}

fn parent(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Reads a groupoid document.
pub fn load_groupoid(path: &Path) -> Result<FiniteGroupoid, Error> {
    match load_document(path)? {
        Document::Groupoid(g) => Ok(g),
        d => Err(Error::Schema(format!("expected {GROUPOID_SCHEMA}, found {}", d.kind()))),
    }
}

/// Coefficients from a ring or semigroupoid document, or a built-in name.
pub fn coefficients_from(source: &Source, base: &Path) -> Result<Coefficients, Error> {
    if let Source::Builtin { builtin } = source {
        return builtin_coefficients(builtin);
    }
    let v = resolve(base, source)?;
    match schema_of(&v)? {
        RING_SCHEMA => Ok(Coefficients::ring(FiniteRing::validate(&from_value(v)?)?)),
        SEMIGROUPOID_SCHEMA => Ok(Coefficients::semigroupoid(Semigroupoid::validate(&from_value(v)?)?)),
        other => Err(Error::Schema(format!("expected coefficients, found `{other}`"))),
    }
}

/// Coefficients named on the command line: a built-in name or a path.
pub fn load_coefficients(spec: &str) -> Result<Coefficients, Error> {
    let path = Path::new(spec);
    if path.exists() {
        coefficients_from(&Source::Path { path: spec.to_string() }, Path::new(""))
    } else {
        builtin_coefficients(spec)
    }
}

/// Builds and validates the family a document describes.
pub fn build_family(raw: &RawFamily, base: &Path, budget: &Budget) -> Result<FnFamily, Error> {
    if raw.schema != FNFAMILY_SCHEMA {
        return Err(Error::Schema(format!("expected {FNFAMILY_SCHEMA}")));
    }
    let gv = resolve(base, &raw.groupoid)?;
    if schema_of(&gv).unwrap_or(GROUPOID_SCHEMA) != GROUPOID_SCHEMA {
        return Err(Error::Schema("family groupoid is not a groupoid document".into()));
    }
    let g = Arc::new(FiniteGroupoid::validate(&from_value(gv)?)?);
    let c = Arc::new(coefficients_from(&raw.coefficients, base)?);
    match (raw.construct, &raw.elements) {
        (Some(kind), None) => {
            let family = match kind {
                Construct::Steinberg => FnFamily::steinberg(g, c)?,
                Construct::CanonicalBumpy => FnFamily::canonical_bumpy(g, c)?,
                Construct::AllOnBisections => FnFamily::all_on_bisections(g, c)?,
            };
            if raw.mode.is_some_and(|m| m != family.mode()) {
                return Err(Error::Schema(format!("construction {kind:?} fixes the product mode")));
            }
            Ok(family)
        }
        (None, Some(elements)) => {
            let functions = elements
                .iter()
                .map(|e| {
                    let pairs = e
                        .iter()
                        .map(|(x, v)| {
                            let arrow = g.arrow(x).ok_or_else(|| Error::Schema(format!("unknown arrow `{x}`")))?;
                            let value = c.y().element(v).ok_or_else(|| Error::Schema(format!("unknown coefficient `{v}`")))?;
                            Ok((arrow, value))
                        })
                        .collect::<Result<Vec<_>, Error>>()?;
                    PartialFn::from_pairs(pairs).map_err(|x| Error::Schema(format!("arrow `{}` listed twice", g.name(x))))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(FnFamily::classify(g, c, raw.mode.unwrap_or(ProductMode::Bisection), functions, budget)?)
        }
        _ => Err(Error::Schema("a family needs exactly one of `construct` and `elements`".into())),
    }
}

/// Resolves a morphism document against its source and target families.
pub fn resolve_morphism(m: &RawMorphism, a: &FnFamily, b: &FnFamily) -> Result<Vec<usize>, Error> {
    if let Some(pairs) = &m.map {
        return Ok(morphism::map_from_names(a, b, pairs)?);
    }
    let arrows = m.induced_by_arrow_map.as_ref().ok_or_else(|| Error::Schema("empty morphism".into()))?;
    let (g, h) = (a.groupoid(), b.groupoid());
    let mut sigma = vec![usize::MAX; g.len()];
    for (x, y) in arrows {
        let i = g.arrow(x).ok_or_else(|| Error::Schema(format!("unknown source arrow `{x}`")))?;
        sigma[i] = h.arrow(y).ok_or_else(|| Error::Schema(format!("unknown target arrow `{y}`")))?;
    }
    if let Some(x) = sigma.iter().position(|&s| s == usize::MAX) {
        return Err(Error::Schema(format!("arrow `{}` has no image", g.name(x))));
    }
    Ok(morphism::induced_by_arrow_map(a, b, &sigma)?)
}

/// Writes a family's elements as a self-contained `fnfamily/v1` document.
pub fn family_document(f: &FnFamily) -> RawFamily {
    let g = f.groupoid();
    let y = f.y();
    let coefficients = match f.coefficients().as_ring() {
        Some(r) => serde_json::to_value(r.to_raw()),
        None => serde_json::to_value(y.to_raw()),
    }
    .expect("serialisable");
    RawFamily {
        schema: FNFAMILY_SCHEMA.into(),
        groupoid: Source::Inline(serde_json::to_value(g.to_raw()).expect("serialisable")),
        coefficients: Source::Inline(coefficients),
        mode: Some(f.mode()),
        construct: None,
        elements: Some(
            f.elements().iter().map(|e| e.iter().map(|(x, v)| (g.name(x).to_string(), y.name(v).to_string())).collect()).collect(),
        ),
    }
}

/// The `reconstruction-report/v1` document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub schema: String,
    pub tool_version: String,
    pub groupoid_digest: String,
    pub coefficients: Vec<String>,
    pub graded: bool,
    pub family_size: usize,
    pub ultrafilters: usize,
    pub status: Status,
    pub report: Report,
    pub bijection: Vec<BijectionRow>,
}

impl ReconstructionReport {
    /// Builds the canonical bumpy family on `g` and checks recovery.
    pub fn build(g: FiniteGroupoid, c: Coefficients, budget: &Budget) -> Result<Self, Error> {
        let graded = g.grading().is_some();
        let digest = g.canonical_digest();
        let family = FnFamily::canonical_bumpy(Arc::new(g), Arc::new(c))?;
        let d = Domination::new(&family);
        let (report, rec) = verify_recovery(&d, budget);
        Ok(ReconstructionReport {
            schema: RECONSTRUCTION_SCHEMA.into(),
            tool_version: TOOL_VERSION.into(),
            groupoid_digest: digest,
            coefficients: family.y().names().to_vec(),
            graded,
            family_size: family.len(),
            ultrafilters: rec.as_ref().map_or(0, |r| r.ultrafilters.len()),
            status: report.status(),
            bijection: rec.as_ref().map(|r| r.bijection(&d)).unwrap_or_default(),
            report,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::pair;

    #[test]
    fn inline_family_round_trips() {
        let g = pair(2);
        let raw = RawFamily {
            schema: FNFAMILY_SCHEMA.into(),
            groupoid: Source::Inline(serde_json::to_value(g.to_raw()).unwrap()),
            coefficients: Source::Builtin { builtin: "F2".into() },
            mode: None,
            construct: Some(Construct::CanonicalBumpy),
            elements: None,
        };
        let f = build_family(&raw, Path::new(""), &Budget::unlimited()).unwrap();
        assert_eq!(f.len(), 7);
        let doc = family_document(&f);
        let text = serde_json::to_string(&doc).unwrap();
        let back = match parse_document(serde_json::from_str(&text).unwrap(), Path::new("")).unwrap() {
            Document::Family(b) => b,
            _ => panic!("not a family"),
        };
        assert_eq!(back.elements(), f.elements());
        assert_eq!(back.mode(), ProductMode::Bisection);
    }

    #[test]
    fn schema_errors_are_reported() {
        assert!(matches!(parse_document(serde_json::json!({"arrows": []}), Path::new("")), Err(Error::Schema(_))));
        assert!(matches!(parse_document(serde_json::json!({"schema": "nope/v9"}), Path::new("")), Err(Error::Schema(_))));
        assert!(builtin_coefficients("F6").is_err());
        assert_eq!(builtin_coefficients("Z/4").unwrap().y().len(), 3);
    }

    #[test]
    fn explicit_morphism_by_names() {
        let g = pair(2);
        let raw = RawFamily {
            schema: FNFAMILY_SCHEMA.into(),
            groupoid: Source::Inline(serde_json::to_value(g.to_raw()).unwrap()),
            coefficients: Source::Builtin { builtin: "trivial".into() },
            mode: None,
            construct: Some(Construct::CanonicalBumpy),
            elements: None,
        };
        let f = build_family(&raw, Path::new(""), &Budget::unlimited()).unwrap();
        let m = RawMorphism {
            schema: MORPHISM_SCHEMA.into(),
            map: None,
            induced_by_arrow_map: Some(
                [("(1,1)", "(2,2)"), ("(1,2)", "(2,1)"), ("(2,1)", "(1,2)"), ("(2,2)", "(1,1)")]
                    .into_iter()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect(),
            ),
        };
        let phi = resolve_morphism(&m, &f, &f).unwrap();
        let pairs: Vec<(String, String)> = (0..f.len()).map(|i| (f.render(i), f.render(phi[i]))).collect();
        let explicit = RawMorphism { schema: MORPHISM_SCHEMA.into(), map: Some(pairs), induced_by_arrow_map: None };
        assert_eq!(resolve_morphism(&explicit, &f, &f).unwrap(), phi);
    }
}
