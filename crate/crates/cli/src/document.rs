//! The JSON body document: objects, declared groupoids, responses and the
//! composite to analyse.

use std::path::Path;
use std::sync::Arc;

use compomat::groupoid::{Arrow, Body, FiniteGroupoid, Mode, ObjectId, Payload, TableSpec};
use compomat::jet::{signed_permutations, RationalMatrix3};
use compomat::material::{
    build_material_groupoid, Composite, MaterialGroupoid, MechanicalResponse, ParamValue, Params,
    ResponseRegistry,
};
use compomat::rational::Rational;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyDocument {
    pub schema_version: String,
    pub objects: Vec<String>,
    pub groupoids: Vec<GroupoidDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub responses: Option<Vec<ResponseDecl>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub composite: Option<CompositeDecl>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupoidMode {
    Matrix,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDecl {
    pub name: String,
    pub mode: GroupoidMode,
    /// Defaults to every object of the document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<String>>,
    pub arrows: Vec<ArrowDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<TablesDecl>,
}

/// `payload` is a matrix `[[a,b,c],[d,e,f],[g,h,i]]` in matrix mode and a
/// label in table mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDecl {
    pub src: String,
    pub dst: String,
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablesDecl {
    /// `[g, h, g·h]`
    pub compose: Vec<[String; 3]>,
    /// `[object, label]`
    pub identity: Vec<[String; 2]>,
    /// `[label, inverse label]`
    pub inverse: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseDecl {
    pub name: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Map<String, serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeDecl {
    pub omega1: MaterialSource,
    pub omega2: MaterialSource,
    /// Refuse composites whose materials are not transitive (default true).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub require_transitive: Option<bool>,
}

/// Exactly one of `groupoid` (a declared matrix groupoid) or `response`
/// (extraction by the material predicate).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response: Option<String>,
    /// Candidate matrices tried for every ordered pair of points; all 48
    /// signed permutations when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<String>,
}

fn json_error(source_name: &str, e: serde_json::Error) -> CliError {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => CliError::schema(format!("{source_name}: line {}, column {}", e.line(), e.column()), e.to_string()),
        _ => CliError::Parse { source_name: source_name.into(), line: e.line(), column: e.column(), message: e.to_string() },
    }
}

/// Parses and validates a document held in memory.
pub fn parse_document(source_name: &str, text: &str) -> Result<BodyDocument, CliError> {
    let doc: BodyDocument = serde_json::from_str(text).map_err(|e| json_error(source_name, e))?;
    validate(&doc)?;
    Ok(doc)
}

pub fn parse_body_file(path: &Path) -> Result<BodyDocument, CliError> {
    let text = read(path)?;
    parse_document(&path.display().to_string(), &text)
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Canonical serialization: two-space indentation and a final newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub(crate) fn parse_matrix(location: &str, s: &str) -> Result<RationalMatrix3, CliError> {
    s.parse().map_err(|e| CliError::schema(location, format!("bad matrix {s:?}: {e}")))
}

fn parse_rational(location: &str, s: &str) -> Result<Rational, CliError> {
    s.parse().map_err(|e| CliError::schema(location, format!("bad rational {s:?}: {e}")))
}

/// Field-level checks that need no name resolution.
fn validate(doc: &BodyDocument) -> Result<(), CliError> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(CliError::schema("schema_version", format!("expected {SCHEMA_VERSION:?}, found {:?}", doc.schema_version)));
    }
    if doc.objects.is_empty() {
        return Err(CliError::schema("objects", "at least one object is required"));
    }
    for (i, g) in doc.groupoids.iter().enumerate() {
        match g.mode {
            GroupoidMode::Matrix => {
                if g.tables.is_some() {
                    return Err(CliError::schema(format!("groupoids[{i}].tables"), "only table-mode groupoids carry tables"));
                }
                for (j, a) in g.arrows.iter().enumerate() {
                    let m = parse_matrix(&format!("groupoids[{i}].arrows[{j}].payload"), &a.payload)?;
                    if m.determinant().is_zero() {
                        return Err(CliError::schema(format!("groupoids[{i}].arrows[{j}].payload"), "singular matrix"));
                    }
                }
            }
            GroupoidMode::Table => {
                if g.tables.is_none() {
                    return Err(CliError::schema(format!("groupoids[{i}]"), "table-mode groupoids need tables"));
                }
            }
        }
    }
    for (i, r) in doc.responses.iter().flatten().enumerate() {
        for (j, s) in r.samples.iter().flatten().enumerate() {
            parse_matrix(&format!("responses[{i}].samples[{j}]"), s)?;
        }
        for (key, v) in r.params.iter().flatten() {
            param_value(&format!("responses[{i}].params.{key}"), v)?;
        }
    }
    if let Some(c) = &doc.composite {
        for (side, src) in [("omega1", &c.omega1), ("omega2", &c.omega2)] {
            let loc = format!("composite.{side}");
            match (&src.groupoid, &src.response) {
                (Some(_), None) => {
                    if src.candidates.is_some() || src.tol.is_some() {
                        return Err(CliError::schema(loc, "candidates and tol only apply to response extraction"));
                    }
                }
                (None, Some(_)) => {
                    for (j, m) in src.candidates.iter().flatten().enumerate() {
                        parse_matrix(&format!("{loc}.candidates[{j}]"), m)?;
                    }
                    if let Some(t) = &src.tol {
                        let t = parse_rational(&format!("{loc}.tol"), t)?;
                        if t < Rational::zero() {
                            return Err(CliError::schema(format!("{loc}.tol"), "tolerance must be non-negative"));
                        }
                    }
                }
                _ => return Err(CliError::schema(loc, "give exactly one of groupoid or response")),
            }
        }
    }
    Ok(())
}

fn param_value(location: &str, v: &serde_json::Value) -> Result<ParamValue, CliError> {
    use serde_json::Value;
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(ParamValue::Scalar(Rational::from(i))),
            None => Err(CliError::schema(location, "non-integer numbers must be written as \"p/q\" strings")),
        },
        Value::String(s) if s.trim_start().starts_with('[') => Ok(ParamValue::Matrix(parse_matrix(location, s)?)),
        Value::String(s) => Ok(s.parse::<Rational>().map_or_else(|_| ParamValue::Text(s.clone()), ParamValue::Scalar)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| param_value(&format!("{location}[{i}]"), x))
            .collect::<Result<_, _>>()
            .map(ParamValue::List),
        _ => Err(CliError::schema(location, "parameters are numbers, strings or lists")),
    }
}

/// Options that influence resolution.
#[derive(Debug, Clone)]
pub struct ResolveOptions {
    /// Overrides every `tol` of the document.
    pub tol: Option<Rational>,
    /// Upper bound on the arrows of any groupoid.
    pub cap: usize,
}

/// A document with every name resolved to engine objects.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub body: Arc<Body>,
    pub groupoids: Vec<(String, FiniteGroupoid)>,
    pub composite: Option<Composite>,
}

impl Resolved {
    pub fn composite(&self) -> Result<&Composite, CliError> {
        self.composite.as_ref().ok_or_else(|| CliError::Resolution("the document declares no composite".into()))
    }
}

fn object(body: &Body, location: &str, name: &str) -> Result<ObjectId, CliError> {
    body.id(name).ok_or_else(|| CliError::Resolution(format!("{location}: unknown object {name:?}")))
}

fn build_groupoid(body: &Arc<Body>, i: usize, g: &GroupoidDecl) -> Result<FiniteGroupoid, CliError> {
    let loc = format!("groupoids[{i}] ({})", g.name);
    let objects: Vec<ObjectId> = match &g.objects {
        Some(names) => names.iter().map(|n| object(body, &loc, n)).collect::<Result<_, _>>()?,
        None => body.objects().collect(),
    };
    let ends = |a: &ArrowDecl| -> Result<(ObjectId, ObjectId), CliError> {
        Ok((object(body, &loc, &a.src)?, object(body, &loc, &a.dst)?))
    };
    match g.mode {
        GroupoidMode::Matrix => {
            let arrows = g
                .arrows
                .iter()
                .map(|a| {
                    let (s, d) = ends(a)?;
                    Ok(Arrow::matrix(s, d, parse_matrix(&loc, &a.payload)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(FiniteGroupoid::matrix(body.clone(), objects, arrows)?)
        }
        GroupoidMode::Table => {
            let t = g.tables.as_ref().expect("validated");
            let mut spec = TableSpec::default();
            for a in &g.arrows {
                let (s, d) = ends(a)?;
                spec.arrows.push((s, d, a.payload.clone()));
            }
            spec.compose = t.compose.iter().map(|[a, b, c]| (a.clone(), b.clone(), c.clone())).collect();
            for [x, label] in &t.identity {
                spec.identity.push((object(body, &loc, x)?, label.clone()));
            }
            spec.inverse = t.inverse.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
            Ok(FiniteGroupoid::tabular(body.clone(), objects, spec)?)
        }
    }
}

fn build_response(
    body: &Arc<Body>,
    registry: &ResponseRegistry,
    i: usize,
    r: &ResponseDecl,
) -> Result<MechanicalResponse, CliError> {
    let mut params = Params::new();
    for (key, v) in r.params.iter().flatten() {
        params.insert(key.clone(), param_value(&format!("responses[{i}].params.{key}"), v)?);
    }
    let samples = match &r.samples {
        Some(s) => Some(
            s.iter()
                .enumerate()
                .map(|(j, m)| parse_matrix(&format!("responses[{i}].samples[{j}]"), m))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    Ok(registry.build(&r.name, &r.kind, body.clone(), &params, samples)?)
}

fn material(
    doc: &BodyDocument,
    resolved: &Resolved,
    responses: &[MechanicalResponse],
    side: &str,
    src: &MaterialSource,
    opts: &ResolveOptions,
) -> Result<MaterialGroupoid, CliError> {
    if let Some(name) = &src.groupoid {
        let (_, g) = resolved
            .groupoids
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| CliError::Resolution(format!("composite.{side}: unknown groupoid {name:?}")))?;
        if g.mode() != Mode::MatrixDerived {
            return Err(CliError::Resolution(format!("composite.{side}: groupoid {name:?} is not matrix-valued")));
        }
        return Ok(MaterialGroupoid::declared(g.clone())?);
    }
    let name = src.response.as_ref().expect("validated");
    let w = doc
        .responses
        .iter()
        .flatten()
        .zip(responses)
        .find(|(d, _)| &d.name == name)
        .map(|(_, w)| w)
        .ok_or_else(|| CliError::Resolution(format!("composite.{side}: unknown response {name:?}")))?;
    let mats = match &src.candidates {
        Some(c) => c.iter().map(|m| parse_matrix(&format!("composite.{side}.candidates"), m)).collect::<Result<Vec<_>, _>>()?,
        None => signed_permutations(),
    };
    let n = resolved.body.len();
    if n * n * mats.len() > opts.cap.saturating_mul(64) {
        return Err(CliError::SizeCap(format!("{} candidate arrows exceed the cap", n * n * mats.len())));
    }
    let candidates: Vec<Arrow> = resolved
        .body
        .objects()
        .flat_map(|x| resolved.body.objects().map(move |y| (x, y)))
        .flat_map(|(x, y)| mats.iter().map(move |m| Arrow::matrix(x, y, m.clone())))
        .collect();
    let tol = match (&opts.tol, &src.tol) {
        (Some(t), _) => t.clone(),
        (None, Some(t)) => parse_rational(&format!("composite.{side}.tol"), t)?,
        (None, None) => Rational::zero(),
    };
    Ok(build_material_groupoid(w, candidates, &tol)?)
}

/// Resolves names, builds the groupoids and the composite.
pub fn resolve(doc: &BodyDocument, opts: &ResolveOptions) -> Result<Resolved, CliError> {
    let body = Body::new(doc.objects.iter().cloned()).map_err(|e| CliError::schema("objects", e.to_string()))?;
    let mut resolved = Resolved { body: body.clone(), groupoids: Vec::new(), composite: None };
    for (i, g) in doc.groupoids.iter().enumerate() {
        if resolved.groupoids.iter().any(|(n, _)| n == &g.name) {
            return Err(CliError::schema(format!("groupoids[{i}].name"), format!("duplicate groupoid name {:?}", g.name)));
        }
        if g.arrows.len() > opts.cap {
            return Err(CliError::SizeCap(format!("groupoid {:?} has {} arrows, above the cap of {}", g.name, g.arrows.len(), opts.cap)));
        }
        resolved.groupoids.push((g.name.clone(), build_groupoid(&body, i, g)?));
    }
    let registry = ResponseRegistry::default();
    let responses = doc
        .responses
        .iter()
        .flatten()
        .enumerate()
        .map(|(i, r)| build_response(&body, &registry, i, r))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(c) = &doc.composite {
        let o1 = material(doc, &resolved, &responses, "omega1", &c.omega1, opts)?;
        let o2 = material(doc, &resolved, &responses, "omega2", &c.omega2, opts)?;
        resolved.composite = Some(Composite::new(o1, o2, c.require_transitive.unwrap_or(true))?);
    }
    Ok(resolved)
}

fn arrow_decl(body: &Body, a: &Arrow) -> ArrowDecl {
    let payload = match &a.payload {
        Payload::Matrix(m) => m.to_string(),
        Payload::Label(l) => l.to_string(),
    };
    ArrowDecl { src: body.name(a.src).to_string(), dst: body.name(a.dst).to_string(), payload }
}

fn groupoid_decl(name: &str, g: &FiniteGroupoid) -> GroupoidDecl {
    let body = g.body();
    let objects = (g.objects().len() != body.len())
        .then(|| g.objects().iter().map(|&x| body.name(x).to_string()).collect());
    match g.table_spec() {
        None => GroupoidDecl {
            name: name.to_string(),
            mode: GroupoidMode::Matrix,
            objects,
            arrows: g.arrows().iter().map(|a| arrow_decl(body, a)).collect(),
            tables: None,
        },
        Some(spec) => GroupoidDecl {
            name: name.to_string(),
            mode: GroupoidMode::Table,
            objects,
            arrows: spec
                .arrows
                .iter()
                .map(|(s, d, l)| ArrowDecl { src: body.name(*s).into(), dst: body.name(*d).into(), payload: l.clone() })
                .collect(),
            tables: Some(TablesDecl {
                compose: spec.compose.iter().map(|(a, b, c)| [a.clone(), b.clone(), c.clone()]).collect(),
                identity: spec.identity.iter().map(|(x, l)| [body.name(*x).to_string(), l.clone()]).collect(),
                inverse: spec.inverse.iter().map(|(a, b)| [a.clone(), b.clone()]).collect(),
            }),
        },
    }
}

/// A document declaring `groupoids` and, if given, the composite of the two
/// named materials.
pub fn export(body: &Body, groupoids: &[(String, FiniteGroupoid)], composite: Option<(&str, &str)>) -> BodyDocument {
    let source = |name: &str| MaterialSource { groupoid: Some(name.to_string()), response: None, candidates: None, tol: None };
    BodyDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        objects: body.names().to_vec(),
        groupoids: groupoids.iter().map(|(n, g)| groupoid_decl(n, g)).collect(),
        responses: None,
        composite: composite.map(|(a, b)| CompositeDecl { omega1: source(a), omega2: source(b), require_transitive: None }),
    }
}

pub(crate) fn arrow_from_decl(body: &Body, location: &str, a: &ArrowDecl) -> Result<Arrow, CliError> {
    Ok(Arrow::matrix(object(body, location, &a.src)?, object(body, location, &a.dst)?, parse_matrix(location, &a.payload)?))
}

pub(crate) fn decl_of(body: &Body, a: &Arrow) -> ArrowDecl {
    arrow_decl(body, a)
}
