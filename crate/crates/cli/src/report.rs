//! Serializable reports and their text rendering.

use std::fmt::Write as _;

use compomat::double::Square;
use compomat::groupoid::{Arrow, AxiomReport, Body, FiniteGroupoid, Mode, OrbitKind, OrbitPartition};
use compomat::uniformity::{Evidence, Flag, Relation, TriclinicSearchReport, UniformityReport, WEAK_UNIFORMITY_SEMANTICS};
use serde::Serialize;

use crate::document::{decl_of, ArrowDecl, SCHEMA_VERSION};

#[derive(Debug, Clone, Serialize)]
pub struct SquareJson {
    pub bottom: ArrowDecl,
    pub top: ArrowDecl,
    pub right: ArrowDecl,
    pub left: ArrowDecl,
}

impl SquareJson {
    pub fn new(body: &Body, s: &Square) -> Self {
        Self { bottom: decl_of(body, &s.bottom), top: decl_of(body, &s.top), right: decl_of(body, &s.right), left: decl_of(body, &s.left) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RoleArrow {
    pub role: String,
    #[serde(flatten)]
    pub arrow: ArrowDecl,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvidenceJson {
    pub note: String,
    pub points: Vec<String>,
    pub arrows: Vec<RoleArrow>,
    pub squares: Vec<SquareJson>,
}

impl EvidenceJson {
    fn new(body: &Body, e: &Evidence) -> Self {
        Self {
            note: e.note.clone(),
            points: e.points.iter().map(|&p| body.name(p).to_string()).collect(),
            arrows: e.arrows.iter().map(|(r, a)| RoleArrow { role: r.clone(), arrow: decl_of(body, a) }).collect(),
            squares: e.squares.iter().map(|s| SquareJson::new(body, s)).collect(),
        }
    }

    fn text(&self) -> String {
        let mut s = self.note.clone();
        if !self.points.is_empty() {
            write!(s, "; points {}", self.points.join(", ")).unwrap();
        }
        for a in &self.arrows {
            write!(s, "; {} {}->{} {}", a.role, a.arrow.src, a.arrow.dst, a.arrow.payload).unwrap();
        }
        if !self.squares.is_empty() {
            write!(s, "; {} square(s)", self.squares.len()).unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagJson {
    pub holds: bool,
    pub witness: Option<EvidenceJson>,
    pub counterexample: Option<EvidenceJson>,
}

impl FlagJson {
    fn new(body: &Body, f: &Flag) -> Self {
        Self {
            holds: f.holds,
            witness: f.witness.as_ref().map(|e| EvidenceJson::new(body, e)),
            counterexample: f.counterexample.as_ref().map(|e| EvidenceJson::new(body, e)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionJson {
    pub point: String,
    pub omega2_in_omega1: bool,
    pub omega1_in_omega2: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckJson {
    pub id: String,
    pub statement: String,
    pub relation: &'static str,
    pub lhs: bool,
    pub rhs: bool,
    pub applicable: bool,
    pub agree: bool,
}

fn ordered_map<S: serde::Serializer, V: Serialize>(entries: &[(String, V)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(entries.len()))?;
    for (k, v) in entries {
        m.serialize_entry(k, v)?;
    }
    m.end()
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub target: String,
    pub objects: Vec<String>,
    pub weak_uniformity_semantics: &'static str,
    pub materials_transitive: bool,
    #[serde(serialize_with = "ordered_map")]
    pub flags: Vec<(String, FlagJson)>,
    pub isotropy_inclusions: Vec<InclusionJson>,
    pub crosschecks: Vec<CrossCheckJson>,
    pub all_agree: bool,
}

impl ClassifyReport {
    pub fn new(target: &str, body: &Body, r: &UniformityReport) -> Self {
        let flags = r
            .flags()
            .into_iter()
            .map(|(name, f)| (name.to_string(), FlagJson::new(body, f)))
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            command: "classify",
            target: target.to_string(),
            objects: body.names().to_vec(),
            weak_uniformity_semantics: WEAK_UNIFORMITY_SEMANTICS,
            materials_transitive: r.materials_transitive,
            flags,
            isotropy_inclusions: r
                .isotropy_inclusions
                .iter()
                .map(|i| InclusionJson {
                    point: body.name(i.point).to_string(),
                    omega2_in_omega1: i.omega2_in_omega1,
                    omega1_in_omega2: i.omega1_in_omega2,
                })
                .collect(),
            crosschecks: r
                .crosschecks
                .iter()
                .map(|c| CrossCheckJson {
                    id: c.id.to_string(),
                    statement: c.statement.to_string(),
                    relation: match c.relation {
                        Relation::Equivalence => "equivalence",
                        Relation::Implication => "implication",
                    },
                    lhs: c.lhs,
                    rhs: c.rhs,
                    applicable: c.applicable,
                    agree: c.agree,
                })
                .collect(),
            all_agree: r.all_agree(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "target: {}", self.target).unwrap();
        writeln!(s, "objects: {}", self.objects.join(", ")).unwrap();
        writeln!(s, "materials transitive: {}", self.materials_transitive).unwrap();
        writeln!(s, "weak uniformity semantics: {}", self.weak_uniformity_semantics).unwrap();
        for (name, f) in &self.flags {
            write!(s, "{name}: {}", f.holds).unwrap();
            if let Some(cx) = &f.counterexample {
                write!(s, "  ({})", cx.text()).unwrap();
            }
            s.push('\n');
        }
        writeln!(s, "isotropy inclusions:").unwrap();
        for i in &self.isotropy_inclusions {
            writeln!(s, "  {}: omega2 in omega1 {}, omega1 in omega2 {}", i.point, i.omega2_in_omega1, i.omega1_in_omega2).unwrap();
        }
        writeln!(s, "cross-checks:").unwrap();
        for c in &self.crosschecks {
            let tag = match (c.applicable, c.agree) {
                (false, _) => "n/a",
                (true, true) => "agree",
                (true, false) => "DISAGREE",
            };
            writeln!(s, "  [{tag}] {} (lhs {}, rhs {})", c.id, c.lhs, c.rhs).unwrap();
        }
        writeln!(s, "all cross-checks agree: {}", self.all_agree).unwrap();
        s
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Tabular => "table",
        Mode::MatrixDerived => "matrix",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitsJson {
    pub kind: &'static str,
    pub classes: Vec<Vec<String>>,
}

impl OrbitsJson {
    pub fn new(body: &Body, p: &OrbitPartition) -> Self {
        Self {
            kind: match p.kind {
                OrbitKind::Transitive => "transitive",
                OrbitKind::TotallyIntransitive => "totally_intransitive",
                OrbitKind::Intermediate => "intermediate",
            },
            classes: p.classes.iter().map(|c| c.iter().map(|&x| body.name(x).to_string()).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationJson {
    pub axiom: &'static str,
    pub arrows: Vec<ArrowDecl>,
    pub explanation: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupoidAxiomsJson {
    pub name: String,
    pub mode: &'static str,
    pub objects: usize,
    pub arrows: usize,
    pub passed: bool,
    pub violations: Vec<ViolationJson>,
    pub orbits: OrbitsJson,
}

impl GroupoidAxiomsJson {
    pub fn new(name: &str, g: &FiniteGroupoid, r: &AxiomReport) -> Self {
        let body = g.body();
        Self {
            name: name.to_string(),
            mode: mode_name(g.mode()),
            objects: g.objects().len(),
            arrows: g.len(),
            passed: r.passed,
            violations: r
                .violations
                .iter()
                .map(|v| ViolationJson {
                    axiom: v.axiom.as_str(),
                    arrows: v.arrows.iter().map(|a| decl_of(body, a)).collect(),
                    explanation: v.explanation.clone(),
                })
                .collect(),
            orbits: OrbitsJson::new(body, &g.orbit_partition()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomsReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub target: String,
    pub passed: bool,
    pub groupoids: Vec<GroupoidAxiomsJson>,
}

impl AxiomsReport {
    pub fn text(&self) -> String {
        let mut s = format!("target: {}\n", self.target);
        for g in &self.groupoids {
            writeln!(
                s,
                "{} ({}, {} objects, {} arrows): {}; orbits {}",
                g.name,
                g.mode,
                g.objects,
                g.arrows,
                if g.passed { "passed" } else { "failed" },
                g.orbits.kind
            )
            .unwrap();
            for v in &g.violations {
                writeln!(s, "  {}: {}", v.axiom, v.explanation).unwrap();
            }
        }
        writeln!(s, "passed: {}", self.passed).unwrap();
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SquaresReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub target: String,
    pub count: usize,
    pub squares: Vec<SquareJson>,
}

impl SquaresReport {
    pub fn text(&self) -> String {
        let mut s = format!("target: {}\ncompletions: {}\n", self.target, self.count);
        for q in &self.squares {
            writeln!(
                s,
                "  bottom {} | right {} | top {} | left {}",
                arrow_text(&q.bottom),
                arrow_text(&q.right),
                arrow_text(&q.top),
                arrow_text(&q.left)
            )
            .unwrap();
        }
        s
    }
}

fn arrow_text(a: &ArrowDecl) -> String {
    format!("{}->{} {}", a.src, a.dst, a.payload)
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreArrowJson {
    pub src: String,
    pub dst: String,
    pub top: String,
    pub left: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub target: String,
    pub arrow_count: usize,
    pub axioms_passed: bool,
    pub orbits: OrbitsJson,
    pub arrows: Vec<CoreArrowJson>,
}

impl CoreReport {
    pub fn text(&self) -> String {
        let mut s = format!(
            "target: {}\ncore arrows: {}\naxioms passed: {}\norbits: {}\n",
            self.target, self.arrow_count, self.axioms_passed, self.orbits.kind
        );
        for a in &self.arrows {
            writeln!(s, "  {}->{} top {} left {}", a.src, a.dst, a.top, a.left).unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntersectReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub target: String,
    pub arrow_count: usize,
    pub uniform: bool,
    pub orbits: OrbitsJson,
    pub arrows: Vec<ArrowDecl>,
}

impl IntersectReport {
    pub fn new(target: &str, g: &FiniteGroupoid) -> Self {
        let body = g.body();
        Self {
            schema_version: SCHEMA_VERSION,
            command: "intersect",
            target: target.to_string(),
            arrow_count: g.len(),
            uniform: g.is_transitive(),
            orbits: OrbitsJson::new(body, &g.orbit_partition()),
            arrows: g.arrows().iter().map(|a: &Arrow| decl_of(body, a)).collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = format!(
            "target: {}\nshared arrows: {}\nuniform: {}\norbits: {}\n",
            self.target, self.arrow_count, self.uniform, self.orbits.kind
        );
        for c in &self.orbits.classes {
            writeln!(s, "  {{{}}}", c.join(", ")).unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchSpaceJson {
    pub n_points: usize,
    pub pool: String,
    pub pool_size: usize,
    pub instances: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchInstanceJson {
    pub n_points: usize,
    pub pool: String,
    pub implants: Vec<usize>,
    pub uniform: bool,
    pub completely_non_uniform: bool,
    pub commuting_distinct: bool,
    pub weak_midpoint: bool,
    pub weak_corners: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub target: String,
    pub spaces: Vec<SearchSpaceJson>,
    pub instances: usize,
    pub completely_non_uniform: usize,
    pub distinct_condition_without_uniformity: usize,
    pub claim_realized_corners: usize,
    pub claim_realized_midpoint: usize,
    /// Completely non-uniform instances satisfying the commuting condition
    /// on pairwise distinct points.
    pub distinct_condition_instances: Vec<SearchInstanceJson>,
}

impl SearchReport {
    pub fn new(target: &str, spaces: Vec<SearchSpaceJson>, r: &TriclinicSearchReport) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: "triclinic_search",
            target: target.to_string(),
            spaces,
            instances: r.findings.len(),
            completely_non_uniform: r.count(|f| f.completely_non_uniform),
            distinct_condition_without_uniformity: r.count(|f| !f.uniform && f.commuting_distinct),
            claim_realized_corners: r.count(|f| f.realizes_claim_corners()),
            claim_realized_midpoint: r.count(|f| f.realizes_claim_midpoint()),
            distinct_condition_instances: r
                .findings
                .iter()
                .filter(|f| f.completely_non_uniform && f.commuting_distinct)
                .map(|f| SearchInstanceJson {
                    n_points: f.n_points,
                    pool: f.pool_name.clone(),
                    implants: f.implant_indices.clone(),
                    uniform: f.uniform,
                    completely_non_uniform: f.completely_non_uniform,
                    commuting_distinct: f.commuting_distinct,
                    weak_midpoint: f.weak_midpoint,
                    weak_corners: f.weak_corners,
                })
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = format!("target: {}\n", self.target);
        for sp in &self.spaces {
            writeln!(s, "  {} points, {} ({}): {} instances", sp.n_points, sp.pool, sp.pool_size, sp.instances).unwrap();
        }
        writeln!(s, "instances: {}", self.instances).unwrap();
        writeln!(s, "completely non-uniform: {}", self.completely_non_uniform).unwrap();
        writeln!(s, "distinct-point condition without uniformity: {}", self.distinct_condition_without_uniformity).unwrap();
        writeln!(s, "completely non-uniform yet weakly uniform (corners): {}", self.claim_realized_corners).unwrap();
        writeln!(s, "completely non-uniform yet weakly uniform (midpoint): {}", self.claim_realized_midpoint).unwrap();
        s
    }
}
