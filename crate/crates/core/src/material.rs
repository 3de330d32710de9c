//! Mechanical responses, material isomorphisms, material groupoids and
//! composites.
//!
//! A response `W(X, F)` assigns a rational vector to a body point and a
//! deformation gradient. An arrow `P: X → Y` is a material isomorphism when
//! `W(X, F·P) = W(Y, F)` for every `F`; finitely, "every `F`" means every
//! matrix of the response's sample set, so acceptance is a falsifier rather
//! than a proof.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::groupoid::{
    ambient_compose, ambient_identity, ambient_inverse, generate_closure, intersect, Arrow, Body, FiniteGroupoid,
    GroupoidError, Mode, ObjectId,
};
use crate::jet::{signed_permutations, RationalMatrix3};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MaterialError {
    #[error("response has an empty sample set")]
    EmptySampleSet,
    #[error("reference change matrix is singular")]
    Singular,
    #[error("accepted arrows are not closed: {0}")]
    NotClosed(String),
    #[error("unknown response kind {0:?}")]
    UnknownKind(String),
    #[error("bad parameters for response {kind:?}: {reason}")]
    BadParams { kind: String, reason: String },
    #[error("response table has no entry for point {point} at F = {f}")]
    MissingTableEntry { point: String, f: String },
    #[error("{which} is not transitive")]
    NotTransitive { which: &'static str },
    #[error("material groupoids live over different bodies")]
    ObjectMismatch,
    #[error("material groupoids must be matrix-derived")]
    NotMatrixDerived,
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// Closed-form part of a mechanical response.
pub trait ResponseLaw: Send + Sync + fmt::Debug {
    /// Registry tag.
    fn kind(&self) -> &str;

    /// Dimension of the value space.
    fn dim(&self) -> usize;

    fn value(&self, x: ObjectId, f: &RationalMatrix3) -> Result<Vec<Rational>, MaterialError>;
}

/// `W(X, F) = w_X · det F`, with all weights 1 by default.
#[derive(Debug, Clone, Default)]
pub struct DetLaw {
    pub weights: Option<Vec<Rational>>,
}

impl ResponseLaw for DetLaw {
    fn kind(&self) -> &str {
        "det"
    }

    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: ObjectId, f: &RationalMatrix3) -> Result<Vec<Rational>, MaterialError> {
        let d = f.determinant();
        Ok(vec![match &self.weights {
            Some(w) => &w[x.index()] * &d,
            None => d,
        }])
    }
}

/// `W(X, F) = trace(FᵀF)`, the same at every point.
#[derive(Debug, Clone, Default)]
pub struct TraceCtcLaw;

impl ResponseLaw for TraceCtcLaw {
    fn kind(&self) -> &str {
        "trace_CtC"
    }

    fn dim(&self) -> usize {
        1
    }

    fn value(&self, _x: ObjectId, f: &RationalMatrix3) -> Result<Vec<Rational>, MaterialError> {
        // trace(FᵀF) is the sum of squared entries
        let mut t = Rational::zero();
        for row in f.entries() {
            for e in row {
                t = &t + &(e * e);
            }
        }
        Ok(vec![t])
    }
}

/// Explicit values over body × matrices. Lookups outside the table are
/// errors, so material-isomorphism checks need `F·P` in the table too.
#[derive(Debug, Clone)]
pub struct PointwiseTableLaw {
    body: Arc<Body>,
    dim: usize,
    table: HashMap<(ObjectId, RationalMatrix3), Vec<Rational>>,
}

impl PointwiseTableLaw {
    pub fn new(
        body: Arc<Body>,
        entries: impl IntoIterator<Item = (ObjectId, RationalMatrix3, Vec<Rational>)>,
    ) -> Result<Self, MaterialError> {
        let bad = |reason: String| MaterialError::BadParams { kind: "pointwise_table".into(), reason };
        let mut table = HashMap::new();
        let mut dim = None;
        for (x, f, v) in entries {
            if !body.contains(x) {
                return Err(bad(format!("unknown point {x}")));
            }
            if *dim.get_or_insert(v.len()) != v.len() {
                return Err(bad("values have inconsistent dimensions".into()));
            }
            table.insert((x, f), v);
        }
        Ok(Self { body, dim: dim.unwrap_or(1), table })
    }
}

impl ResponseLaw for PointwiseTableLaw {
    fn kind(&self) -> &str {
        "pointwise_table"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: ObjectId, f: &RationalMatrix3) -> Result<Vec<Rational>, MaterialError> {
        self.table.get(&(x, f.clone())).cloned().ok_or_else(|| MaterialError::MissingTableEntry {
            point: self.body.name(x).to_string(),
            f: f.to_string(),
        })
    }
}

/// `W(X, F)` = the sorted orbit `{F·R_X·k : k ∈ K}` flattened, for a finite
/// group `K` and per-point frames `R_X` (identity by default).
///
/// `P: X → Y` is then a material isomorphism exactly when
/// `P ∈ R_Y·K·R_X⁻¹`, which makes this law a response whose material
/// groupoid is known in closed form.
#[derive(Debug, Clone)]
pub struct OrbitInvariantLaw {
    group: Vec<RationalMatrix3>,
    frames: Option<Vec<RationalMatrix3>>,
}

impl OrbitInvariantLaw {
    /// `generators` must generate a finite group (at most 48 elements).
    pub fn new(generators: Vec<RationalMatrix3>, frames: Option<Vec<RationalMatrix3>>) -> Result<Self, MaterialError> {
        let bad = |reason: String| MaterialError::BadParams { kind: "orbit_invariant".into(), reason };
        let body = Body::numbered(1);
        let x = ObjectId(0);
        let seeds = generators.into_iter().map(|g| Arrow::matrix(x, x, g));
        let g = generate_closure(body, [x], seeds, 48).map_err(|e| bad(e.to_string()))?;
        let group = g.arrows().iter().filter_map(|a| a.as_matrix().cloned()).collect();
        if let Some(fr) = &frames {
            if fr.iter().any(|m| m.determinant().is_zero()) {
                return Err(bad("singular frame".into()));
            }
        }
        Ok(Self { group, frames })
    }

    pub fn group(&self) -> &[RationalMatrix3] {
        &self.group
    }
}

impl ResponseLaw for OrbitInvariantLaw {
    fn kind(&self) -> &str {
        "orbit_invariant"
    }

    fn dim(&self) -> usize {
        9 * self.group.len()
    }

    fn value(&self, x: ObjectId, f: &RationalMatrix3) -> Result<Vec<Rational>, MaterialError> {
        let base = match &self.frames {
            Some(fr) => f.mul(&fr[x.index()]),
            None => f.clone(),
        };
        let mut orbit: Vec<RationalMatrix3> = self.group.iter().map(|k| base.mul(k)).collect();
        orbit.sort();
        Ok(orbit.iter().flat_map(|m| m.entries().iter().flatten().cloned()).collect())
    }
}

/// Loosely typed parameters handed to registry constructors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamValue {
    Scalar(Rational),
    Matrix(RationalMatrix3),
    Text(String),
    List(Vec<ParamValue>),
}

pub type Params = BTreeMap<String, ParamValue>;

type LawConstructor =
    Box<dyn Fn(&Arc<Body>, &Params, &[RationalMatrix3]) -> Result<Arc<dyn ResponseLaw>, MaterialError> + Send + Sync>;

/// Maps response tags to constructors.
pub struct ResponseRegistry {
    constructors: BTreeMap<String, LawConstructor>,
}

impl fmt::Debug for ResponseRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResponseRegistry").field("kinds", &self.kinds()).finish()
    }
}

fn param_matrices(kind: &str, v: &ParamValue) -> Result<Vec<RationalMatrix3>, MaterialError> {
    let bad = || MaterialError::BadParams { kind: kind.into(), reason: "expected a list of 3x3 matrices".into() };
    match v {
        ParamValue::Matrix(m) => Ok(vec![m.clone()]),
        ParamValue::List(items) => items
            .iter()
            .map(|i| match i {
                ParamValue::Matrix(m) => Ok(m.clone()),
                _ => Err(bad()),
            })
            .collect(),
        _ => Err(bad()),
    }
}

fn param_scalars(kind: &str, v: &ParamValue) -> Result<Vec<Rational>, MaterialError> {
    let bad = || MaterialError::BadParams { kind: kind.into(), reason: "expected a list of rationals".into() };
    match v {
        ParamValue::List(items) => items
            .iter()
            .map(|i| match i {
                ParamValue::Scalar(r) => Ok(r.clone()),
                _ => Err(bad()),
            })
            .collect(),
        _ => Err(bad()),
    }
}

fn check_len(kind: &str, what: &str, got: usize, body: &Body) -> Result<(), MaterialError> {
    if got == body.len() {
        Ok(())
    } else {
        Err(MaterialError::BadParams {
            kind: kind.into(),
            reason: format!("{what} needs one entry per body point ({} expected, {got} given)", body.len()),
        })
    }
}

impl Default for ResponseRegistry {
    fn default() -> Self {
        let mut r = Self { constructors: BTreeMap::new() };
        r.register("det", |body, params, _| {
            let weights = match params.get("weights") {
                Some(v) => {
                    let w = param_scalars("det", v)?;
                    check_len("det", "weights", w.len(), body)?;
                    Some(w)
                }
                None => None,
            };
            Ok(Arc::new(DetLaw { weights }))
        });
        r.register("trace_CtC", |_, _, _| Ok(Arc::new(TraceCtcLaw)));
        r.register("pointwise_table", |body, params, samples| {
            // values[point][sample] = vector
            let bad = |reason: &str| MaterialError::BadParams { kind: "pointwise_table".into(), reason: reason.into() };
            let Some(ParamValue::List(per_point)) = params.get("values") else {
                return Err(bad("missing values table"));
            };
            check_len("pointwise_table", "values", per_point.len(), body)?;
            let mut entries = Vec::new();
            for (x, row) in body.objects().zip(per_point) {
                let ParamValue::List(per_sample) = row else { return Err(bad("values rows must be lists")) };
                if per_sample.len() != samples.len() {
                    return Err(bad("values rows need one entry per sample"));
                }
                for (f, v) in samples.iter().zip(per_sample) {
                    entries.push((x, f.clone(), param_scalars("pointwise_table", v)?));
                }
            }
            Ok(Arc::new(PointwiseTableLaw::new(body.clone(), entries)?))
        });
        r.register("orbit_invariant", |body, params, _| {
            let group = match params.get("group") {
                Some(v) => param_matrices("orbit_invariant", v)?,
                None => vec![],
            };
            let frames = match params.get("frames") {
                Some(v) => {
                    let fr = param_matrices("orbit_invariant", v)?;
                    check_len("orbit_invariant", "frames", fr.len(), body)?;
                    Some(fr)
                }
                None => None,
            };
            Ok(Arc::new(OrbitInvariantLaw::new(group, frames)?))
        });
        r
    }
}

impl ResponseRegistry {
    pub fn register<F>(&mut self, kind: &str, constructor: F)
    where
        F: Fn(&Arc<Body>, &Params, &[RationalMatrix3]) -> Result<Arc<dyn ResponseLaw>, MaterialError>
            + Send
            + Sync
            + 'static,
    {
        self.constructors.insert(kind.to_string(), Box::new(constructor));
    }

    pub fn kinds(&self) -> Vec<&str> {
        self.constructors.keys().map(String::as_str).collect()
    }

    /// Builds a response; `samples` defaults to [`default_sample_set`].
    pub fn build(
        &self,
        name: &str,
        kind: &str,
        body: Arc<Body>,
        params: &Params,
        samples: Option<Vec<RationalMatrix3>>,
    ) -> Result<MechanicalResponse, MaterialError> {
        let ctor = self.constructors.get(kind).ok_or_else(|| MaterialError::UnknownKind(kind.to_string()))?;
        let samples = samples.unwrap_or_else(default_sample_set);
        let law = ctor(&body, params, &samples)?;
        Ok(MechanicalResponse::new(name, body, law, samples))
    }
}

/// All 48 signed permutation matrices, the three axis stretches
/// `diag(2,1,1)`, `diag(1,2,1)`, `diag(1,1,2)` and their inverses; sorted.
pub fn default_sample_set() -> Vec<RationalMatrix3> {
    let mut s = signed_permutations();
    let (one, two, half) = (Rational::one(), Rational::from_integer(2), Rational::new(1, 2));
    for axis in 0..3 {
        for k in [&two, &half] {
            let mut d = [one.clone(), one.clone(), one.clone()];
            d[axis] = k.clone();
            s.push(RationalMatrix3::diag(d));
        }
    }
    s.sort();
    s
}

/// A response `W` on a body together with the sample set it is checked on.
#[derive(Debug, Clone)]
pub struct MechanicalResponse {
    name: String,
    body: Arc<Body>,
    law: Arc<dyn ResponseLaw>,
    /// Accumulated reference change: evaluates `law(X, F·reference)`.
    reference: Option<RationalMatrix3>,
    samples: Arc<Vec<RationalMatrix3>>,
}

impl MechanicalResponse {
    pub fn new(name: &str, body: Arc<Body>, law: Arc<dyn ResponseLaw>, samples: Vec<RationalMatrix3>) -> Self {
        Self { name: name.to_string(), body, law, reference: None, samples: Arc::new(samples) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &str {
        self.law.kind()
    }

    pub fn body(&self) -> &Arc<Body> {
        &self.body
    }

    pub fn dim(&self) -> usize {
        self.law.dim()
    }

    pub fn samples(&self) -> &[RationalMatrix3] {
        &self.samples
    }

    pub fn with_samples(mut self, samples: Vec<RationalMatrix3>) -> Self {
        self.samples = Arc::new(samples);
        self
    }

    pub fn value(&self, x: ObjectId, f: &RationalMatrix3) -> Result<Vec<Rational>, MaterialError> {
        match &self.reference {
            Some(c) => self.law.value(x, &f.mul(c)),
            None => self.law.value(x, f),
        }
    }
}

/// `W₁(X, F) = W(X, F·C01)`; the sample set is kept.
pub fn change_reference(w: &MechanicalResponse, c01: &RationalMatrix3) -> Result<MechanicalResponse, MaterialError> {
    if c01.determinant().is_zero() {
        return Err(MaterialError::Singular);
    }
    // W₁(X, F) = W(X, F·C01) = law(X, F·C01·R) for an earlier reference R
    let reference = match &w.reference {
        Some(r) => c01.mul(r),
        None => c01.clone(),
    };
    let mut out = w.clone();
    out.reference = if reference.is_identity() { None } else { Some(reference) };
    Ok(out)
}

fn within(a: &[Rational], b: &[Rational], tol: &Rational) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= *tol)
}

/// `W(X, F·P) = W(Y, F)` within `tol` (∞-norm) for every sample `F`.
pub fn is_material_isomorphism(w: &MechanicalResponse, p: &Arrow, tol: &Rational) -> Result<bool, MaterialError> {
    if w.samples.is_empty() {
        return Err(MaterialError::EmptySampleSet);
    }
    let m = p.as_matrix().ok_or(MaterialError::NotMatrixDerived)?;
    if m.determinant().is_zero() {
        return Err(MaterialError::Singular);
    }
    for x in [p.src, p.dst] {
        if !w.body.contains(x) {
            return Err(GroupoidError::UnknownObject(x).into());
        }
    }
    for f in w.samples.iter() {
        if !within(&w.value(p.src, &f.mul(m))?, &w.value(p.dst, f)?, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Declared,
    ExtractedFrom { response: String, tol: Rational },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialGroupoid {
    pub groupoid: FiniteGroupoid,
    pub provenance: Provenance,
}

impl MaterialGroupoid {
    /// Wraps a fixture-declared matrix-derived groupoid.
    pub fn declared(groupoid: FiniteGroupoid) -> Result<Self, MaterialError> {
        if groupoid.mode() != Mode::MatrixDerived {
            return Err(MaterialError::NotMatrixDerived);
        }
        Ok(Self { groupoid, provenance: Provenance::Declared })
    }
}

/// Closure witness for an arrow set: a composable pair whose product, or an
/// arrow whose inverse, lies outside it.
fn closure_gap(arrows: &HashSet<Arrow>) -> Result<Option<String>, GroupoidError> {
    let mut sorted: Vec<&Arrow> = arrows.iter().collect();
    sorted.sort();
    let mut by_dst: BTreeMap<ObjectId, Vec<&Arrow>> = BTreeMap::new();
    for a in &sorted {
        by_dst.entry(a.dst).or_default().push(a);
    }
    for g in &sorted {
        let inv = ambient_inverse(g)?;
        if !arrows.contains(&inv) {
            return Ok(Some(format!("inverse of {g:?} was not accepted")));
        }
        for h in by_dst.get(&g.src).into_iter().flatten() {
            let gh = ambient_compose(g, h)?;
            if !arrows.contains(&gh) {
                return Ok(Some(format!("{g:?}·{h:?} = {gh:?} was not accepted")));
            }
        }
    }
    Ok(None)
}

/// Filters `candidates` through [`is_material_isomorphism`], adds the
/// identities and verifies closure; a gap is reported, never repaired.
pub fn build_material_groupoid(
    w: &MechanicalResponse,
    candidates: impl IntoIterator<Item = Arrow>,
    tol: &Rational,
) -> Result<MaterialGroupoid, MaterialError> {
    if w.samples.is_empty() {
        return Err(MaterialError::EmptySampleSet);
    }
    let candidates: Vec<Arrow> = candidates.into_iter().collect();
    let verdicts: Vec<Result<bool, MaterialError>> =
        candidates.par_iter().map(|p| is_material_isomorphism(w, p, tol)).collect();
    let mut accepted: HashSet<Arrow> = w.body.objects().map(ambient_identity).collect();
    for (p, v) in candidates.into_iter().zip(verdicts) {
        if v? {
            accepted.insert(p);
        }
    }
    if let Some(gap) = closure_gap(&accepted)? {
        return Err(MaterialError::NotClosed(gap));
    }
    let groupoid = FiniteGroupoid::matrix_over(w.body.clone(), accepted)?;
    Ok(MaterialGroupoid {
        groupoid,
        provenance: Provenance::ExtractedFrom { response: w.name.clone(), tol: tol.clone() },
    })
}

/// Two material groupoids over one body.
#[derive(Debug, Clone, PartialEq)]
pub struct Composite {
    pub body: Arc<Body>,
    pub omega1: MaterialGroupoid,
    pub omega2: MaterialGroupoid,
}

impl Composite {
    /// Checks the shared body; with `require_transitive`, also that each
    /// material is uniform on its own.
    pub fn new(omega1: MaterialGroupoid, omega2: MaterialGroupoid, require_transitive: bool) -> Result<Self, MaterialError> {
        let (g1, g2) = (&omega1.groupoid, &omega2.groupoid);
        if g1.body() != g2.body() || g1.objects() != g2.objects() || g1.objects().len() != g1.body().len() {
            return Err(MaterialError::ObjectMismatch);
        }
        if g1.mode() != Mode::MatrixDerived || g2.mode() != Mode::MatrixDerived {
            return Err(MaterialError::NotMatrixDerived);
        }
        if require_transitive {
            if !g1.is_transitive() {
                return Err(MaterialError::NotTransitive { which: "omega1" });
            }
            if !g2.is_transitive() {
                return Err(MaterialError::NotTransitive { which: "omega2" });
            }
        }
        Ok(Self { body: g1.body().clone(), omega1, omega2 })
    }

    pub fn omega1(&self) -> &FiniteGroupoid {
        &self.omega1.groupoid
    }

    pub fn omega2(&self) -> &FiniteGroupoid {
        &self.omega2.groupoid
    }

    pub fn objects(&self) -> &[ObjectId] {
        self.omega1.groupoid.objects()
    }
}

/// The composite's own material groupoid `Ω1 ∩ Ω2`; the composite is
/// uniform when it is transitive.
pub fn composite_groupoid(c: &Composite) -> Result<FiniteGroupoid, MaterialError> {
    Ok(intersect(c.omega1(), c.omega2())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::groupoid::OrbitKind;
    use proptest::prelude::*;

    fn det_response(n: usize) -> MechanicalResponse {
        ResponseRegistry::default().build("W", "det", Body::numbered(n), &Params::new(), None).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn all_pairs(n: u32, mats: &[RationalMatrix3]) -> Vec<Arrow> {
        (0..n)
            .flat_map(|s| (0..n).flat_map(move |d| mats.iter().map(move |m| Arrow::matrix(ObjectId(s), ObjectId(d), m.clone()))))
            .collect()
    }

    #[test]
    fn sample_set_shape() {
        let s = default_sample_set();
        assert_eq!(s.len(), 54);
        assert!(s.iter().all(|m| !m.determinant().is_zero()));
        let uniq: HashSet<_> = s.iter().collect();
        assert_eq!(uniq.len(), 54);
    }

    #[test]
    fn det_isomorphisms() {
        let w = det_response(2);
        let (x, y) = (ObjectId(0), ObjectId(1));
        let zero = Rational::zero();
        let a = RationalMatrix3::from_integers([[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
        assert!(is_material_isomorphism(&w, &Arrow::matrix(x, y, a), &zero).unwrap());
        assert!(is_material_isomorphism(&w, &ambient_identity(x), &zero).unwrap());
        let d = RationalMatrix3::diag([2.into(), 1.into(), 1.into()]);
        assert!(!is_material_isomorphism(&w, &Arrow::matrix(x, y, d.clone()), &zero).unwrap());
        // |2 det F - det F| reaches 2 on the stretch samples
        assert!(!is_material_isomorphism(&w, &Arrow::matrix(x, y, d.clone()), &Rational::one()).unwrap());
        assert!(is_material_isomorphism(&w, &Arrow::matrix(x, y, d), &Rational::from_integer(2)).unwrap());
        let empty = w.clone().with_samples(vec![]);
        assert_eq!(
            is_material_isomorphism(&empty, &ambient_identity(x), &zero).unwrap_err(),
            MaterialError::EmptySampleSet
        );
    }

    #[test]
    fn reference_changes() {
        let w = det_response(2);
        let x = ObjectId(1);
        let same = change_reference(&w, &RationalMatrix3::identity()).unwrap();
        let half = change_reference(&w, &RationalMatrix3::diag([r(1, 2), 1.into(), 1.into()])).unwrap();
        for f in w.samples() {
            assert_eq!(same.value(x, f).unwrap(), w.value(x, f).unwrap());
            assert_eq!(half.value(x, f).unwrap(), vec![&f.determinant() * &r(1, 2)]);
        }
        assert_eq!(change_reference(&w, &RationalMatrix3::zero()).unwrap_err(), MaterialError::Singular);
    }

    #[test]
    fn det_groupoid_keeps_determinant_one() {
        let w = det_response(2);
        let mg = build_material_groupoid(&w, all_pairs(2, &signed_permutations()), &Rational::zero()).unwrap();
        for s in 0..2 {
            for d in 0..2 {
                let hom = mg.groupoid.hom_set(ObjectId(s), ObjectId(d)).unwrap();
                assert_eq!(hom.len(), 24);
                assert!(hom.iter().all(|a| a.as_matrix().unwrap().determinant().is_one()));
            }
        }
        assert!(mg.groupoid.check_axioms().passed);
        assert!(matches!(mg.provenance, Provenance::ExtractedFrom { .. }));

        let ids = build_material_groupoid(&w, [], &Rational::zero()).unwrap();
        assert_eq!(ids.groupoid.len(), 2);
        assert_eq!(ids.groupoid.orbit_partition().kind, OrbitKind::TotallyIntransitive);
    }

    #[test]
    fn incomplete_candidates_are_not_closed() {
        let w = det_response(3);
        let a = RationalMatrix3::from_integers([[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
        // X→Y and Y→Z but no X→Z
        let c = [Arrow::matrix(ObjectId(0), ObjectId(1), a.clone()), Arrow::matrix(ObjectId(1), ObjectId(2), a)];
        assert!(matches!(build_material_groupoid(&w, c, &Rational::zero()), Err(MaterialError::NotClosed(_))));
    }

    #[test]
    fn crystalline_omega1_is_recovered_from_an_orbit_response() {
        let cry = fixtures::crystalline_default();
        let a = RationalMatrix3::from_integers([[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
        let mut params = Params::new();
        params.insert("group".into(), ParamValue::List(vec![ParamValue::Matrix(a)]));
        let w = ResponseRegistry::default().build("W1", "orbit_invariant", cry.body.clone(), &params, None).unwrap();
        let declared = cry.omega1();
        let pool: Vec<Arrow> = declared.arrows().iter().chain(cry.omega2().arrows()).cloned().collect();
        let extracted = build_material_groupoid(&w, pool, &Rational::zero()).unwrap();
        assert!(extracted.groupoid.same_arrows(declared));
    }

    #[test]
    fn registry_rejects_unknown_kinds_and_bad_params() {
        let reg = ResponseRegistry::default();
        assert_eq!(reg.kinds(), vec!["det", "orbit_invariant", "pointwise_table", "trace_CtC"]);
        let body = Body::numbered(2);
        assert!(matches!(
            reg.build("W", "nope", body.clone(), &Params::new(), None),
            Err(MaterialError::UnknownKind(_))
        ));
        let mut p = Params::new();
        p.insert("weights".into(), ParamValue::List(vec![ParamValue::Scalar(Rational::one())]));
        assert!(matches!(reg.build("W", "det", body, &p, None), Err(MaterialError::BadParams { .. })));
    }

    #[test]
    fn pointwise_table_lookup() {
        let body = Body::numbered(2);
        let samples = vec![RationalMatrix3::identity()];
        let mut p = Params::new();
        let row = |v: i64| ParamValue::List(vec![ParamValue::List(vec![ParamValue::Scalar(v.into())])]);
        p.insert("values".into(), ParamValue::List(vec![row(1), row(1)]));
        let w = ResponseRegistry::default().build("T", "pointwise_table", body, &p, Some(samples)).unwrap();
        let (x, y) = (ObjectId(0), ObjectId(1));
        assert!(is_material_isomorphism(&w, &Arrow::matrix(x, y, RationalMatrix3::identity()), &Rational::zero()).unwrap());
        let a = RationalMatrix3::from_integers([[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
        assert!(matches!(
            is_material_isomorphism(&w, &Arrow::matrix(x, y, a), &Rational::zero()),
            Err(MaterialError::MissingTableEntry { .. })
        ));
    }

    #[test]
    fn weighted_det_is_not_uniform_under_signed_permutations() {
        let mut p = Params::new();
        p.insert("weights".into(), ParamValue::List(vec![ParamValue::Scalar(1.into()), ParamValue::Scalar(2.into())]));
        let w = ResponseRegistry::default().build("W", "det", Body::numbered(2), &p, None).unwrap();
        let mg = build_material_groupoid(&w, all_pairs(2, &signed_permutations()), &Rational::zero()).unwrap();
        assert!(!mg.groupoid.is_transitive());
        assert_eq!(mg.groupoid.hom_len(ObjectId(0), ObjectId(1)), 0);
    }

    #[test]
    fn composite_intersection() {
        let cry = fixtures::crystalline_default();
        let common = composite_groupoid(&cry).unwrap();
        assert!(common.is_transitive());
        assert_eq!(common.len(), 9);
        let same = Composite::new(cry.omega1.clone(), cry.omega1.clone(), true).unwrap();
        assert!(composite_groupoid(&same).unwrap().same_arrows(cry.omega1()));
        let tri = fixtures::triclinic_default();
        let common = composite_groupoid(&tri).unwrap();
        assert_eq!(common.orbit_partition().kind, OrbitKind::TotallyIntransitive);
        let other = fixtures::pair_composite(2);
        assert_eq!(Composite::new(cry.omega1.clone(), other.omega2, false).unwrap_err(), MaterialError::ObjectMismatch);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn reference_change_is_a_right_action(i in 0usize..54, j in 0usize..54, x in 0u32..3) {
            let w = det_response(3);
            let s = default_sample_set();
            let (c, d) = (&s[i], &s[j]);
            let w1 = change_reference(&w, c).unwrap();
            let w2 = change_reference(&w1, d).unwrap();
            let back = change_reference(&w1, &c.inverse().unwrap()).unwrap();
            for f in &s {
                prop_assert_eq!(w1.value(ObjectId(x), f).unwrap(), w.value(ObjectId(x), &f.mul(c)).unwrap());
                prop_assert_eq!(w2.value(ObjectId(x), f).unwrap(), w.value(ObjectId(x), &f.mul(d).mul(c)).unwrap());
                prop_assert_eq!(back.value(ObjectId(x), f).unwrap(), w.value(ObjectId(x), f).unwrap());
            }
        }

        #[test]
        fn accepted_isomorphisms_are_inverse_and_composition_closed(i in 0usize..48, j in 0usize..48) {
            let sp = signed_permutations();
            let law = OrbitInvariantLaw::new(vec![sp[i].clone()], None).unwrap();
            let w = MechanicalResponse::new("W", Body::numbered(3), Arc::new(law), default_sample_set());
            let zero = Rational::zero();
            let p = Arrow::matrix(ObjectId(0), ObjectId(1), sp[j].clone());
            let q = Arrow::matrix(ObjectId(1), ObjectId(2), sp[i].clone());
            if is_material_isomorphism(&w, &p, &zero).unwrap() {
                prop_assert!(is_material_isomorphism(&w, &ambient_inverse(&p).unwrap(), &zero).unwrap());
                if is_material_isomorphism(&w, &q, &zero).unwrap() {
                    prop_assert!(is_material_isomorphism(&w, &ambient_compose(&q, &p).unwrap(), &zero).unwrap());
                }
            }
        }
    }
}
