//! Finite groupoids.
//!
//! Composition follows the convention `g·h` = "apply `h`, then `g`": it is
//! defined when `src(g) == dst(h)` and yields an arrow from `src(h)` to
//! `dst(g)`.
//!
//! A [`FiniteGroupoid`] is either *tabular* (explicit composition, identity
//! and inverse tables over labelled arrows) or *matrix-derived* (arrows carry
//! exact 3×3 matrices and the structure maps are matrix product, identity and
//! inverse). Construction never enforces the axioms; [`FiniteGroupoid::check_axioms`]
//! reports every violation as data so broken structures can be studied.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::jet::RationalMatrix3;

/// Default maximum number of arrows produced by [`generate_closure`].
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Dense index of a body point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ObjectId(pub u32);

impl ObjectId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Named point set; ids are dense `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Body {
    names: Vec<String>,
}

impl Body {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>, GroupoidError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(GroupoidError::DuplicateName(n.clone()));
            }
        }
        Ok(Arc::new(Self { names }))
    }

    /// Body with points named `"1"`..`"n"`.
    pub fn numbered(n: usize) -> Arc<Self> {
        Arc::new(Self { names: (1..=n).map(|i| i.to_string()).collect() })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> + '_ {
        (0..self.names.len() as u32).map(ObjectId)
    }

    pub fn name(&self, id: ObjectId) -> &str {
        &self.names[id.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<ObjectId> {
        self.names.iter().position(|n| n == name).map(|i| ObjectId(i as u32))
    }

    pub fn contains(&self, id: ObjectId) -> bool {
        id.index() < self.names.len()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    Label(Arc<str>),
    Matrix(Arc<RationalMatrix3>),
}

impl Payload {
    pub fn matrix(m: RationalMatrix3) -> Self {
        Payload::Matrix(Arc::new(m))
    }

    pub fn label(s: &str) -> Self {
        Payload::Label(Arc::from(s))
    }
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Label(l) => f.write_str(l),
            Payload::Matrix(m) => write!(f, "{m}"),
        }
    }
}

impl fmt::Debug for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A morphism `src → dst`. Equality and order are structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub src: ObjectId,
    pub dst: ObjectId,
    pub payload: Payload,
}

impl Arrow {
    pub fn new(src: ObjectId, dst: ObjectId, payload: Payload) -> Self {
        Self { src, dst, payload }
    }

    pub fn matrix(src: ObjectId, dst: ObjectId, m: RationalMatrix3) -> Self {
        Self::new(src, dst, Payload::matrix(m))
    }

    pub fn label(src: ObjectId, dst: ObjectId, label: &str) -> Self {
        Self::new(src, dst, Payload::label(label))
    }

    pub fn as_matrix(&self) -> Option<&RationalMatrix3> {
        match &self.payload {
            Payload::Matrix(m) => Some(m),
            Payload::Label(_) => None,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }

    pub fn display(&self, body: &Body) -> String {
        format!("{}->{} {}", body.name(self.src), body.name(self.dst), self.payload)
    }
}

impl fmt::Debug for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}->{} {})", self.src.0, self.dst.0, self.payload)
    }
}

/// Identity arrow of the ambient 1-jet groupoid at `x`.
pub fn ambient_identity(x: ObjectId) -> Arrow {
    Arrow::matrix(x, x, RationalMatrix3::identity())
}

/// `g·h` in the ambient 1-jet groupoid (matrix product, `h` first).
pub fn ambient_compose(g: &Arrow, h: &Arrow) -> Result<Arrow, GroupoidError> {
    if g.src != h.dst {
        return Err(GroupoidError::NotComposable(Box::new(g.clone()), Box::new(h.clone())));
    }
    match (&g.payload, &h.payload) {
        (Payload::Matrix(a), Payload::Matrix(b)) => Ok(Arrow::matrix(h.src, g.dst, a.mul(b))),
        _ => Err(GroupoidError::ModeMismatch("ambient composition needs matrix payloads".into())),
    }
}

/// Inverse in the ambient 1-jet groupoid.
pub fn ambient_inverse(g: &Arrow) -> Result<Arrow, GroupoidError> {
    match &g.payload {
        Payload::Matrix(m) => {
            let inv = m.inverse().map_err(|_| GroupoidError::Singular(Box::new(g.clone())))?;
            Ok(Arrow::matrix(g.dst, g.src, inv))
        }
        Payload::Label(_) => Err(GroupoidError::ModeMismatch("ambient inverse needs a matrix payload".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupoidError {
    #[error("arrows {0:?} and {1:?} are not composable")]
    NotComposable(Box<Arrow>, Box<Arrow>),
    #[error("arrow {0:?} is not in the groupoid")]
    NotInGroupoid(Box<Arrow>),
    #[error("unknown object {0}")]
    UnknownObject(ObjectId),
    #[error("duplicate object name {0:?}")]
    DuplicateName(String),
    #[error("duplicate arrow label {0:?}")]
    DuplicateLabel(String),
    #[error("groupoids live over different object sets")]
    ObjectMismatch,
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("matrix of arrow {0:?} is singular")]
    Singular(Box<Arrow>),
    #[error("structure not closed: {0}")]
    NotClosed(String),
    #[error("generated groupoid exceeds the cap of {0} arrows")]
    ClosureExceedsCap(usize),
}

/// Which law a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    /// A structure map leaves the arrow set, or refers to something missing.
    Closure,
    /// `α(g·h) = α(h)`, `β(g·h) = β(g)`.
    SourceTarget,
    Associativity,
    /// Identities exist and are two-sided units.
    Identity,
    /// Inverses exist and are two-sided.
    Inverse,
}

impl AxiomId {
    pub fn as_str(self) -> &'static str {
        match self {
            AxiomId::Closure => "closure",
            AxiomId::SourceTarget => "source_target",
            AxiomId::Associativity => "associativity",
            AxiomId::Identity => "identity",
            AxiomId::Inverse => "inverse",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: AxiomId,
    pub arrows: Vec<Arrow>,
    pub explanation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self { passed: violations.is_empty(), violations }
    }

    pub fn has(&self, axiom: AxiomId) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    Transitive,
    TotallyIntransitive,
    Intermediate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub classes: Vec<Vec<ObjectId>>,
    pub kind: OrbitKind,
}

/// Explicit structure tables of a tabular groupoid, by label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableSpec {
    pub arrows: Vec<(ObjectId, ObjectId, String)>,
    /// `(g, h, g·h)`.
    pub compose: Vec<(String, String, String)>,
    pub identity: Vec<(ObjectId, String)>,
    pub inverse: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Entry {
    Arrow(u32),
    /// The table names a label that is not an arrow of the groupoid.
    Missing,
}

#[derive(Debug, Clone)]
struct Tables {
    compose: HashMap<(u32, u32), Entry>,
    identity: BTreeMap<ObjectId, Entry>,
    inverse: HashMap<u32, Entry>,
    /// Table rows whose operands are not arrows.
    dangling: Vec<String>,
    spec: TableSpec,
}

#[derive(Debug, Clone)]
enum Structure {
    Tabular(Box<Tables>),
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Tabular,
    MatrixDerived,
}

#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    body: Arc<Body>,
    objects: Vec<ObjectId>,
    arrows: Vec<Arrow>,
    index: HashMap<Arrow, u32>,
    /// `(src, dst)` → indices into `arrows`, ascending.
    hom: HashMap<(ObjectId, ObjectId), Vec<u32>>,
    structure: Structure,
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body
            && self.objects == other.objects
            && self.arrows == other.arrows
            && self.mode() == other.mode()
            && match (&self.structure, &other.structure) {
                (Structure::Tabular(a), Structure::Tabular(b)) => {
                    a.compose == b.compose && a.identity == b.identity && a.inverse == b.inverse
                }
                _ => true,
            }
    }
}

fn normalize_objects(body: &Body, objects: impl IntoIterator<Item = ObjectId>) -> Result<Vec<ObjectId>, GroupoidError> {
    let set: BTreeSet<ObjectId> = objects.into_iter().collect();
    if let Some(bad) = set.iter().find(|o| !body.contains(**o)) {
        return Err(GroupoidError::UnknownObject(*bad));
    }
    Ok(set.into_iter().collect())
}

impl FiniteGroupoid {
    fn assemble(body: Arc<Body>, objects: Vec<ObjectId>, mut arrows: Vec<Arrow>, structure: Structure) -> Self {
        arrows.sort();
        arrows.dedup();
        let index = arrows.iter().enumerate().map(|(i, a)| (a.clone(), i as u32)).collect();
        let mut hom: HashMap<(ObjectId, ObjectId), Vec<u32>> = HashMap::new();
        for (i, a) in arrows.iter().enumerate() {
            hom.entry((a.src, a.dst)).or_default().push(i as u32);
        }
        Self { body, objects, arrows, index, hom, structure }
    }

    /// Matrix-derived groupoid over `objects` with the given arrows.
    ///
    /// Payloads must be invertible matrices between listed objects; the
    /// groupoid axioms are not checked here.
    pub fn matrix(
        body: Arc<Body>,
        objects: impl IntoIterator<Item = ObjectId>,
        arrows: impl IntoIterator<Item = Arrow>,
    ) -> Result<Self, GroupoidError> {
        let objects = normalize_objects(&body, objects)?;
        let arrows: Vec<Arrow> = arrows.into_iter().collect();
        for a in &arrows {
            for end in [a.src, a.dst] {
                if objects.binary_search(&end).is_err() {
                    return Err(GroupoidError::UnknownObject(end));
                }
            }
            match &a.payload {
                Payload::Matrix(m) if m.determinant().is_zero() => {
                    return Err(GroupoidError::Singular(Box::new(a.clone())))
                }
                Payload::Matrix(_) => {}
                Payload::Label(_) => {
                    return Err(GroupoidError::ModeMismatch("label payload in a matrix-derived groupoid".into()))
                }
            }
        }
        Ok(Self::assemble(body, objects, arrows, Structure::Matrix))
    }

    /// Matrix-derived groupoid over the whole body.
    pub fn matrix_over(body: Arc<Body>, arrows: impl IntoIterator<Item = Arrow>) -> Result<Self, GroupoidError> {
        let objects: Vec<ObjectId> = body.objects().collect();
        Self::matrix(body, objects, arrows)
    }

    /// Tabular groupoid from explicit tables. Labels must be unique; table
    /// rows may reference labels that are not arrows (reported by
    /// [`check_axioms`](Self::check_axioms)).
    pub fn tabular(
        body: Arc<Body>,
        objects: impl IntoIterator<Item = ObjectId>,
        spec: TableSpec,
    ) -> Result<Self, GroupoidError> {
        let objects = normalize_objects(&body, objects)?;
        let mut labels: HashMap<&str, Arrow> = HashMap::new();
        for (src, dst, label) in &spec.arrows {
            for end in [*src, *dst] {
                if objects.binary_search(&end).is_err() {
                    return Err(GroupoidError::UnknownObject(end));
                }
            }
            if labels.insert(label, Arrow::label(*src, *dst, label)).is_some() {
                return Err(GroupoidError::DuplicateLabel(label.clone()));
            }
        }
        let arrows: Vec<Arrow> = labels.values().cloned().collect();
        let mut g = Self::assemble(body, objects, arrows, Structure::Matrix);
        let idx = |label: &str| labels.get(label).map(|a| g.index[a]);
        let entry = |label: &str| idx(label).map_or(Entry::Missing, Entry::Arrow);

        let mut tables = Tables {
            compose: HashMap::new(),
            identity: BTreeMap::new(),
            inverse: HashMap::new(),
            dangling: Vec::new(),
            spec: spec.clone(),
        };
        for (a, b, c) in &spec.compose {
            match (idx(a), idx(b)) {
                (Some(i), Some(j)) => {
                    tables.compose.insert((i, j), entry(c));
                }
                _ => tables.dangling.push(format!("composition row ({a}, {b}) -> {c} names a missing arrow")),
            }
        }
        for (x, label) in &spec.identity {
            if objects_contains(&g.objects, *x) {
                tables.identity.insert(*x, entry(label));
            } else {
                tables.dangling.push(format!("identity row for unknown object {x}"));
            }
        }
        for (a, b) in &spec.inverse {
            match idx(a) {
                Some(i) => {
                    tables.inverse.insert(i, entry(b));
                }
                None => tables.dangling.push(format!("inverse row {a} -> {b} names a missing arrow")),
            }
        }
        g.structure = Structure::Tabular(Box::new(tables));
        Ok(g)
    }

    pub fn body(&self) -> &Arc<Body> {
        &self.body
    }

    pub fn objects(&self) -> &[ObjectId] {
        &self.objects
    }

    /// Arrows in canonical order.
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn mode(&self) -> Mode {
        match self.structure {
            Structure::Tabular(_) => Mode::Tabular,
            Structure::Matrix => Mode::MatrixDerived,
        }
    }

    /// The tables this groupoid was built from (tabular mode only).
    pub fn table_spec(&self) -> Option<&TableSpec> {
        match &self.structure {
            Structure::Tabular(t) => Some(&t.spec),
            Structure::Matrix => None,
        }
    }

    pub fn contains(&self, a: &Arrow) -> bool {
        self.index.contains_key(a)
    }

    pub fn has_object(&self, x: ObjectId) -> bool {
        objects_contains(&self.objects, x)
    }

    fn require_object(&self, x: ObjectId) -> Result<(), GroupoidError> {
        if self.has_object(x) {
            Ok(())
        } else {
            Err(GroupoidError::UnknownObject(x))
        }
    }

    fn require_arrow(&self, a: &Arrow) -> Result<u32, GroupoidError> {
        self.index
            .get(a)
            .copied()
            .ok_or_else(|| GroupoidError::NotInGroupoid(Box::new(a.clone())))
    }

    /// Arrows `x → y` in canonical order, borrowed.
    pub fn hom(&self, x: ObjectId, y: ObjectId) -> impl Iterator<Item = &Arrow> + '_ {
        self.hom
            .get(&(x, y))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(move |&i| &self.arrows[i as usize])
    }

    pub fn hom_len(&self, x: ObjectId, y: ObjectId) -> usize {
        self.hom.get(&(x, y)).map_or(0, Vec::len)
    }

    /// All arrows from `x` to `y`, sorted.
    pub fn hom_set(&self, x: ObjectId, y: ObjectId) -> Result<Vec<Arrow>, GroupoidError> {
        self.require_object(x)?;
        self.require_object(y)?;
        Ok(self.hom(x, y).cloned().collect())
    }

    /// Isotropy group at `x`.
    pub fn isotropy(&self, x: ObjectId) -> Result<Vec<Arrow>, GroupoidError> {
        self.hom_set(x, x)
    }

    /// Arrows with source `x` (the α-fibre).
    pub fn alpha_fibre(&self, x: ObjectId) -> Result<Vec<Arrow>, GroupoidError> {
        self.require_object(x)?;
        Ok(self.arrows.iter().filter(|a| a.src == x).cloned().collect())
    }

    /// Arrows with target `x` (the β-fibre).
    pub fn beta_fibre(&self, x: ObjectId) -> Result<Vec<Arrow>, GroupoidError> {
        self.require_object(x)?;
        Ok(self.arrows.iter().filter(|a| a.dst == x).cloned().collect())
    }

    fn compose_idx(&self, g: u32, h: u32) -> Option<Entry> {
        match &self.structure {
            Structure::Tabular(t) => t.compose.get(&(g, h)).copied(),
            Structure::Matrix => {
                let prod = ambient_compose(&self.arrows[g as usize], &self.arrows[h as usize]).ok()?;
                Some(self.index.get(&prod).map_or(Entry::Missing, |&i| Entry::Arrow(i)))
            }
        }
    }

    fn identity_idx(&self, x: ObjectId) -> Option<Entry> {
        match &self.structure {
            Structure::Tabular(t) => t.identity.get(&x).copied(),
            Structure::Matrix => Some(self.index.get(&ambient_identity(x)).map_or(Entry::Missing, |&i| Entry::Arrow(i))),
        }
    }

    fn inverse_idx(&self, g: u32) -> Option<Entry> {
        match &self.structure {
            Structure::Tabular(t) => t.inverse.get(&g).copied(),
            Structure::Matrix => {
                let inv = ambient_inverse(&self.arrows[g as usize]).ok()?;
                Some(self.index.get(&inv).map_or(Entry::Missing, |&i| Entry::Arrow(i)))
            }
        }
    }

    fn resolve(&self, e: Option<Entry>, what: impl FnOnce() -> String) -> Result<Arrow, GroupoidError> {
        match e {
            Some(Entry::Arrow(i)) => Ok(self.arrows[i as usize].clone()),
            _ => Err(GroupoidError::NotClosed(what())),
        }
    }

    /// `g·h` (apply `h`, then `g`).
    pub fn compose(&self, g: &Arrow, h: &Arrow) -> Result<Arrow, GroupoidError> {
        let gi = self.require_arrow(g)?;
        let hi = self.require_arrow(h)?;
        if g.src != h.dst {
            return Err(GroupoidError::NotComposable(Box::new(g.clone()), Box::new(h.clone())));
        }
        self.resolve(self.compose_idx(gi, hi), || format!("{g:?}·{h:?} is undefined"))
    }

    pub fn inverse(&self, g: &Arrow) -> Result<Arrow, GroupoidError> {
        let gi = self.require_arrow(g)?;
        self.resolve(self.inverse_idx(gi), || format!("inverse of {g:?} is missing"))
    }

    pub fn identity(&self, x: ObjectId) -> Result<Arrow, GroupoidError> {
        self.require_object(x)?;
        self.resolve(self.identity_idx(x), || format!("identity at {x} is missing"))
    }

    /// Exhaustively checks closure, source/target laws, associativity over
    /// all composable triples, unit laws and inverse laws.
    pub fn check_axioms(&self) -> AxiomReport {
        let n = self.arrows.len();
        let mut violations = Vec::new();
        let arrow = |i: u32| self.arrows[i as usize].clone();

        if let Structure::Tabular(t) = &self.structure {
            for d in &t.dangling {
                violations.push(Violation { axiom: AxiomId::Closure, arrows: vec![], explanation: d.clone() });
            }
        }

        // identities
        let mut identity: HashMap<ObjectId, u32> = HashMap::new();
        for &x in &self.objects {
            match self.identity_idx(x) {
                Some(Entry::Arrow(e)) => {
                    let a = &self.arrows[e as usize];
                    if a.src != x || a.dst != x {
                        violations.push(Violation {
                            axiom: AxiomId::Identity,
                            arrows: vec![a.clone()],
                            explanation: format!("identity at {x} is not a loop at {x}"),
                        });
                    } else {
                        identity.insert(x, e);
                    }
                }
                _ => violations.push(Violation {
                    axiom: AxiomId::Identity,
                    arrows: vec![],
                    explanation: format!("identity at {x} is missing"),
                }),
            }
        }

        // composition table over composable pairs
        let mut by_dst: HashMap<ObjectId, Vec<u32>> = HashMap::new();
        for (i, a) in self.arrows.iter().enumerate() {
            by_dst.entry(a.dst).or_default().push(i as u32);
        }
        let empty = Vec::new();
        let composable = |g: u32| by_dst.get(&self.arrows[g as usize].src).unwrap_or(&empty);
        let rows: Vec<(Vec<(u32, u32)>, Vec<Violation>)> = (0..n as u32)
            .into_par_iter()
            .map(|g| {
                let mut row = Vec::new();
                let mut vs = Vec::new();
                for &h in composable(g) {
                    match self.compose_idx(g, h) {
                        Some(Entry::Arrow(r)) => {
                            let (ga, ha, ra) = (&self.arrows[g as usize], &self.arrows[h as usize], &self.arrows[r as usize]);
                            if ra.src != ha.src || ra.dst != ga.dst {
                                vs.push(Violation {
                                    axiom: AxiomId::SourceTarget,
                                    arrows: vec![ga.clone(), ha.clone(), ra.clone()],
                                    explanation: "composite has the wrong source or target".into(),
                                });
                            }
                            row.push((h, r));
                        }
                        _ => vs.push(Violation {
                            axiom: AxiomId::Closure,
                            arrows: vec![arrow(g), arrow(h)],
                            explanation: "composite of a composable pair is not an arrow".into(),
                        }),
                    }
                }
                (row, vs)
            })
            .collect();
        let mut table = PairTable::new(n);
        for (g, (row, vs)) in rows.into_iter().enumerate() {
            for (h, r) in row {
                table.set(g as u32, h, r);
            }
            violations.extend(vs);
        }

        // associativity over composable triples (g, h, k): src g = dst h, src h = dst k
        let assoc: Vec<Violation> = (0..n as u32)
            .into_par_iter()
            .flat_map_iter(|g| {
                let mut vs = Vec::new();
                for &h in composable(g) {
                    let Some(gh) = table.get(g, h) else { continue };
                    for &k in composable(h) {
                        let Some(hk) = table.get(h, k) else { continue };
                        let (Some(left), Some(right)) = (table.get(gh, k), table.get(g, hk)) else {
                            continue;
                        };
                        if left != right {
                            vs.push(Violation {
                                axiom: AxiomId::Associativity,
                                arrows: vec![arrow(g), arrow(h), arrow(k)],
                                explanation: format!("(g·h)·k = {:?} but g·(h·k) = {:?}", arrow(left), arrow(right)),
                            });
                        }
                    }
                }
                vs
            })
            .collect();
        violations.extend(assoc);

        // units and inverses
        for (gi, g) in self.arrows.iter().enumerate() {
            let gi = gi as u32;
            if let (Some(&es), Some(&et)) = (identity.get(&g.src), identity.get(&g.dst)) {
                if table.get(gi, es) != Some(gi) || table.get(et, gi) != Some(gi) {
                    violations.push(Violation {
                        axiom: AxiomId::Identity,
                        arrows: vec![g.clone()],
                        explanation: "identity is not a two-sided unit".into(),
                    });
                }
            }
            match self.inverse_idx(gi) {
                Some(Entry::Arrow(inv)) => {
                    let ok = identity.get(&g.src).is_some_and(|&e| table.get(inv, gi) == Some(e))
                        && identity.get(&g.dst).is_some_and(|&e| table.get(gi, inv) == Some(e));
                    if !ok {
                        violations.push(Violation {
                            axiom: AxiomId::Inverse,
                            arrows: vec![g.clone(), arrow(inv)],
                            explanation: "inverse is not two-sided".into(),
                        });
                    }
                }
                _ => violations.push(Violation {
                    axiom: AxiomId::Inverse,
                    arrows: vec![g.clone()],
                    explanation: "inverse is missing".into(),
                }),
            }
        }

        AxiomReport::from_violations(violations)
    }

    /// `hom(x, x)` satisfies the group axioms under this groupoid's structure.
    pub fn is_isotropy_group(&self, x: ObjectId) -> bool {
        let Ok(e) = self.identity(x) else { return false };
        let elems: Vec<&Arrow> = self.hom(x, x).collect();
        elems.iter().all(|g| {
            self.compose(g, &e).as_ref() == Ok(*g)
                && self.compose(&e, g).as_ref() == Ok(*g)
                && self.inverse(g).is_ok_and(|i| self.compose(&i, g).as_ref() == Ok(&e))
                && elems.iter().all(|h| {
                    self.compose(g, h).is_ok_and(|gh| {
                        gh.is_loop()
                            && elems.iter().all(|k| {
                                let left = self.compose(&gh, k);
                                let right = self.compose(h, k).and_then(|hk| self.compose(g, &hk));
                                left.is_ok() && left == right
                            })
                    })
                })
        })
    }

    /// Connected components of "`hom(x, y)` non-empty".
    pub fn orbit_partition(&self) -> OrbitPartition {
        let pos: HashMap<ObjectId, usize> = self.objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let mut parent: Vec<usize> = (0..self.objects.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for a in &self.arrows {
            let (ra, rb) = (find(&mut parent, pos[&a.src]), find(&mut parent, pos[&a.dst]));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut classes: BTreeMap<usize, Vec<ObjectId>> = BTreeMap::new();
        for (i, &o) in self.objects.iter().enumerate() {
            let r = find(&mut parent, i);
            classes.entry(r).or_default().push(o);
        }
        let classes: Vec<Vec<ObjectId>> = classes.into_values().collect();
        let kind = if classes.len() <= 1 {
            OrbitKind::Transitive
        } else if classes.iter().all(|c| c.len() == 1) {
            OrbitKind::TotallyIntransitive
        } else {
            OrbitKind::Intermediate
        };
        OrbitPartition { classes, kind }
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_partition().kind == OrbitKind::Transitive
    }

    /// Arrow-set equality.
    pub fn same_arrows(&self, other: &Self) -> bool {
        self.objects == other.objects && self.arrows == other.arrows
    }

    /// Every arrow of `self` is an arrow of `other`.
    pub fn arrows_subset_of(&self, other: &Self) -> bool {
        self.arrows.iter().all(|a| other.contains(a))
    }
}

fn objects_contains(objects: &[ObjectId], x: ObjectId) -> bool {
    objects.binary_search(&x).is_ok()
}

/// Composition results indexed by arrow pair; dense for small groupoids.
enum PairTable {
    Dense { n: usize, cells: Vec<u32> },
    Sparse(HashMap<(u32, u32), u32>),
}

impl PairTable {
    const DENSE_LIMIT: usize = 2048;

    fn new(n: usize) -> Self {
        if n <= Self::DENSE_LIMIT {
            PairTable::Dense { n, cells: vec![u32::MAX; n * n] }
        } else {
            PairTable::Sparse(HashMap::new())
        }
    }

    fn set(&mut self, g: u32, h: u32, r: u32) {
        match self {
            PairTable::Dense { n, cells } => cells[g as usize * *n + h as usize] = r,
            PairTable::Sparse(m) => {
                m.insert((g, h), r);
            }
        }
    }

    fn get(&self, g: u32, h: u32) -> Option<u32> {
        match self {
            PairTable::Dense { n, cells } => Some(cells[g as usize * *n + h as usize]).filter(|&r| r != u32::MAX),
            PairTable::Sparse(m) => m.get(&(g, h)).copied(),
        }
    }
}

/// Groupoid of the arrows common to both inputs.
///
/// Matrix-derived inputs intersect structurally. Tabular inputs keep the
/// first input's table rows that stay inside the common arrows, and must
/// share at least one label.
pub fn intersect(g1: &FiniteGroupoid, g2: &FiniteGroupoid) -> Result<FiniteGroupoid, GroupoidError> {
    if g1.body != g2.body || g1.objects != g2.objects {
        return Err(GroupoidError::ObjectMismatch);
    }
    let common: Vec<Arrow> = g1.arrows.iter().filter(|a| g2.contains(a)).cloned().collect();
    match (&g1.structure, &g2.structure) {
        (Structure::Matrix, Structure::Matrix) => {
            FiniteGroupoid::matrix(g1.body.clone(), g1.objects.clone(), common)
        }
        (Structure::Tabular(t), Structure::Tabular(_)) => {
            if common.is_empty() {
                return Err(GroupoidError::ModeMismatch("tabular groupoids share no labels".into()));
            }
            let keep: HashSet<&str> = common
                .iter()
                .filter_map(|a| match &a.payload {
                    Payload::Label(l) => Some(&**l),
                    Payload::Matrix(_) => None,
                })
                .collect();
            let spec = TableSpec {
                arrows: t.spec.arrows.iter().filter(|(_, _, l)| keep.contains(l.as_str())).cloned().collect(),
                compose: t
                    .spec
                    .compose
                    .iter()
                    .filter(|(a, b, c)| keep.contains(a.as_str()) && keep.contains(b.as_str()) && keep.contains(c.as_str()))
                    .cloned()
                    .collect(),
                identity: t.spec.identity.iter().filter(|(_, l)| keep.contains(l.as_str())).cloned().collect(),
                inverse: t
                    .spec
                    .inverse
                    .iter()
                    .filter(|(a, b)| keep.contains(a.as_str()) && keep.contains(b.as_str()))
                    .cloned()
                    .collect(),
            };
            FiniteGroupoid::tabular(g1.body.clone(), g1.objects.clone(), spec)
        }
        _ => Err(GroupoidError::ModeMismatch("cannot intersect tabular with matrix-derived groupoids".into())),
    }
}

/// Smallest matrix-derived groupoid over `objects` containing `seeds`.
pub fn generate_closure(
    body: Arc<Body>,
    objects: impl IntoIterator<Item = ObjectId>,
    seeds: impl IntoIterator<Item = Arrow>,
    cap: usize,
) -> Result<FiniteGroupoid, GroupoidError> {
    let objects = normalize_objects(&body, objects)?;
    let mut set: HashSet<Arrow> = HashSet::new();
    let mut by_src: HashMap<ObjectId, Vec<Arrow>> = HashMap::new();
    let mut by_dst: HashMap<ObjectId, Vec<Arrow>> = HashMap::new();
    let mut queue: Vec<Arrow> = Vec::new();

    let push = |a: Arrow, set: &mut HashSet<Arrow>, queue: &mut Vec<Arrow>| -> Result<(), GroupoidError> {
        if set.insert(a.clone()) {
            if set.len() > cap {
                return Err(GroupoidError::ClosureExceedsCap(cap));
            }
            queue.push(a);
        }
        Ok(())
    };

    for &x in &objects {
        push(ambient_identity(x), &mut set, &mut queue)?;
    }
    for s in seeds {
        for end in [s.src, s.dst] {
            if !objects_contains(&objects, end) {
                return Err(GroupoidError::UnknownObject(end));
            }
        }
        ambient_inverse(&s)?;
        push(s, &mut set, &mut queue)?;
    }

    while let Some(a) = queue.pop() {
        let mut fresh = vec![ambient_inverse(&a)?];
        // a·h for h ending at src(a), g·a for g starting at dst(a)
        for h in by_dst.get(&a.src).into_iter().flatten() {
            fresh.push(ambient_compose(&a, h)?);
        }
        for g in by_src.get(&a.dst).into_iter().flatten() {
            fresh.push(ambient_compose(g, &a)?);
        }
        if a.src == a.dst {
            fresh.push(ambient_compose(&a, &a)?);
        }
        by_src.entry(a.src).or_default().push(a.clone());
        by_dst.entry(a.dst).or_default().push(a);
        for f in fresh {
            push(f, &mut set, &mut queue)?;
        }
    }
    FiniteGroupoid::matrix(body, objects, set)
}

/// `h` is a subgroupoid of `g`: objects and arrows included, and `h` is
/// itself a groupoid.
pub fn is_subgroupoid(h: &FiniteGroupoid, g: &FiniteGroupoid) -> bool {
    h.body == g.body
        && h.objects.iter().all(|o| g.has_object(*o))
        && h.arrows_subset_of(g)
        && h.check_axioms().passed
}
