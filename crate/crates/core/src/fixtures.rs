//! Ready-made groupoids and composites: the pair groupoid, groups over a
//! point, crystalline and triclinic composites, seeded random generators and
//! deliberately broken tables for axiom tests.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::groupoid::{generate_closure, AxiomId, Arrow, Body, FiniteGroupoid, GroupoidError, ObjectId, TableSpec};
use crate::jet::{classify_matrix, signed_permutations, RationalMatrix3};
use crate::material::{Composite, MaterialError, MaterialGroupoid};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixtureError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// The 3-cycle permutation matrix.
pub fn cycle_a() -> RationalMatrix3 {
    RationalMatrix3::from_integers([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
}

/// A signed 3-cycle, also of order 3, generating a different group than [`cycle_a`].
pub fn cycle_s() -> RationalMatrix3 {
    RationalMatrix3::from_integers([[0, 0, -1], [1, 0, 0], [0, -1, 0]])
}

/// Point names `X, Y, Z, T, U, V, W`, then `P8, P9, ...`.
pub fn point_names(n: usize) -> Vec<String> {
    const NAMES: [&str; 7] = ["X", "Y", "Z", "T", "U", "V", "W"];
    (0..n).map(|i| NAMES.get(i).map_or_else(|| format!("P{}", i + 1), |s| s.to_string())).collect()
}

fn lettered_body(n: usize) -> Arc<Body> {
    Body::new(point_names(n)).expect("generated names are unique")
}

fn oid(i: usize) -> ObjectId {
    ObjectId(i as u32)
}

fn pair_label(a: usize, b: usize) -> String {
    format!("({},{})", a + 1, b + 1)
}

/// Tables of the pair groupoid on `n` points: one arrow `(a,b)` per ordered
/// pair, `(b,c)·(a,b) = (a,c)`.
pub fn pair_table_spec(n: usize) -> TableSpec {
    let mut spec = TableSpec::default();
    for a in 0..n {
        spec.identity.push((oid(a), pair_label(a, a)));
        for b in 0..n {
            spec.arrows.push((oid(a), oid(b), pair_label(a, b)));
            spec.inverse.push((pair_label(a, b), pair_label(b, a)));
            for c in 0..n {
                spec.compose.push((pair_label(b, c), pair_label(a, b), pair_label(a, c)));
            }
        }
    }
    spec
}

/// Tabular pair groupoid on points `"1"..="n"`.
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    FiniteGroupoid::tabular(Body::numbered(n), (0..n).map(oid), pair_table_spec(n)).expect("pair tables are well formed")
}

/// Removes the arrow with the named endpoints from `spec`, together with the
/// rows that use it as an operand; rows producing it are left dangling.
pub fn delete_arrow(spec: &TableSpec, label: &str) -> TableSpec {
    TableSpec {
        arrows: spec.arrows.iter().filter(|(_, _, l)| l != label).cloned().collect(),
        compose: spec.compose.iter().filter(|(a, b, _)| a != label && b != label).cloned().collect(),
        identity: spec.identity.iter().filter(|(_, l)| l != label).cloned().collect(),
        inverse: spec.inverse.iter().filter(|(a, _)| a != label).cloned().collect(),
    }
}

/// Pair groupoid with the arrow `from → to` (point names) deleted.
pub fn pair_groupoid_without(n: usize, (from, to): (&str, &str)) -> FiniteGroupoid {
    let body = Body::numbered(n);
    let a = body.id(from).expect("point exists").index();
    let b = body.id(to).expect("point exists").index();
    let spec = delete_arrow(&pair_table_spec(n), &pair_label(a, b));
    FiniteGroupoid::tabular(body, (0..n).map(oid), spec).expect("labels stay unique")
}

/// A finite group given by its multiplication table: `mul[i][j]` is the
/// index of `elements[i]·elements[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Cyclic group `Z/n` with elements `"0".."n-1"`.
    pub fn cyclic(n: usize) -> Self {
        Self {
            elements: (0..n).map(|i| i.to_string()).collect(),
            mul: (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect(),
        }
    }

    /// Symmetric group on three letters, elements written as images of `012`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let name = |p: &[usize; 3]| p.iter().map(|d| d.to_string()).collect::<String>();
        let mul = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        // (p·q)(i) = p(q(i))
                        let pq = [p[q[0]], p[q[1]], p[q[2]]];
                        perms.iter().position(|r| *r == pq).expect("S3 is closed")
                    })
                    .collect()
            })
            .collect();
        Self { elements: perms.iter().map(name).collect(), mul }
    }

    fn identity_index(&self) -> Option<usize> {
        let n = self.elements.len();
        (0..n).find(|&e| (0..n).all(|i| self.mul[e][i] == i && self.mul[i][e] == i))
    }

    fn validate(&self) -> Result<usize, FixtureError> {
        let n = self.elements.len();
        let bad = |m: String| Err(FixtureError::NotAGroup(m));
        if n == 0 {
            return bad("empty table".into());
        }
        if self.mul.len() != n || self.mul.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return bad("table is not square over its elements".into());
        }
        if self.elements.iter().collect::<BTreeSet<_>>().len() != n {
            return bad("duplicate element names".into());
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return bad(format!("not associative at ({}, {}, {})", self.elements[a], self.elements[b], self.elements[c]));
                    }
                }
            }
        }
        let Some(e) = self.identity_index() else { return bad("no identity".into()) };
        for a in 0..n {
            if !(0..n).any(|b| self.mul[a][b] == e && self.mul[b][a] == e) {
                return bad(format!("{} has no inverse", self.elements[a]));
            }
        }
        Ok(e)
    }

    fn spec(&self, e: usize) -> TableSpec {
        let n = self.elements.len();
        let x = oid(0);
        let el = |i: usize| self.elements[i].clone();
        let mut spec = TableSpec::default();
        spec.identity.push((x, el(e)));
        for a in 0..n {
            spec.arrows.push((x, x, el(a)));
            let inv = (0..n).find(|&b| self.mul[a][b] == e).unwrap_or(e);
            spec.inverse.push((el(a), el(inv)));
            for b in 0..n {
                spec.compose.push((el(a), el(b), el(self.mul[a][b])));
            }
        }
        spec
    }
}

/// A group as a groupoid over a single point `"*"`.
pub fn group_as_groupoid(table: &GroupTable) -> Result<FiniteGroupoid, FixtureError> {
    let e = table.validate()?;
    let body = Body::new(["*"])?;
    Ok(FiniteGroupoid::tabular(body, [oid(0)], table.spec(e))?)
}

/// Parameters of a crystalline composite: both materials have three
/// symmetries per point, generated by `g` (Ω1) and `h` (Ω2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystallineParams {
    pub n_points: usize,
    pub g: RationalMatrix3,
    pub h: RationalMatrix3,
    /// `transports[x][y]` = `g(X,Y)`, a cocycle with identity diagonal.
    /// `None` means every transport is the identity.
    pub transports: Option<Vec<Vec<RationalMatrix3>>>,
}

impl Default for CrystallineParams {
    fn default() -> Self {
        Self { n_points: 3, g: cycle_a(), h: cycle_s(), transports: None }
    }
}

/// Per-point conjugates `t(X0,X)·k·t(X0,X)⁻¹` of the powers of `k`.
fn crystalline_groupoid(
    body: &Arc<Body>,
    k: &RationalMatrix3,
    transports: &[Vec<RationalMatrix3>],
) -> Result<FiniteGroupoid, FixtureError> {
    let n = body.len();
    let mut arrows = Vec::new();
    for x in 0..n {
        let t0x = &transports[0][x];
        let k_x = t0x.mul(k).mul(&t0x.inverse().map_err(|_| FixtureError::InvalidParams("singular transport".into()))?);
        for y in 0..n {
            for p in 0..3 {
                arrows.push(Arrow::matrix(oid(x), oid(y), transports[x][y].mul(&k_x.pow(p))));
            }
        }
    }
    let g = FiniteGroupoid::matrix_over(body.clone(), arrows)?;
    if !g.check_axioms().passed {
        return Err(FixtureError::InvalidParams("symmetries are not compatible with the transports".into()));
    }
    Ok(g)
}

pub fn crystalline_composite(p: &CrystallineParams) -> Result<Composite, FixtureError> {
    let bad = |m: &str| Err(FixtureError::InvalidParams(m.into()));
    if p.n_points < 2 {
        return bad("need at least two points");
    }
    for (name, m) in [("g", &p.g), ("h", &p.h)] {
        let class = classify_matrix(m);
        if !class.orthogonal {
            return Err(FixtureError::InvalidParams(format!("{name} is not orthogonal")));
        }
        if class.finite_order != Some(3) {
            return Err(FixtureError::InvalidParams(format!(
                "{name} must have order 3 so each point has exactly three symmetries"
            )));
        }
    }
    if p.h == p.g || p.h == p.g.pow(2) {
        return bad("h must differ from g and g⁻¹");
    }
    let n = p.n_points;
    let transports = match &p.transports {
        Some(t) => {
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return bad("transports must be an n×n table");
            }
            for x in 0..n {
                if !t[x][x].is_identity() {
                    return bad("transport from a point to itself must be the identity");
                }
                for y in 0..n {
                    for z in 0..n {
                        if t[x][z] != t[y][z].mul(&t[x][y]) {
                            return bad("transports are not a cocycle");
                        }
                    }
                }
            }
            t.clone()
        }
        None => vec![vec![RationalMatrix3::identity(); n]; n],
    };
    let body = lettered_body(n);
    let o1 = crystalline_groupoid(&body, &p.g, &transports)?;
    let o2 = crystalline_groupoid(&body, &p.h, &transports)?;
    Ok(Composite::new(MaterialGroupoid::declared(o1)?, MaterialGroupoid::declared(o2)?, true)?)
}

/// The crystalline composite with `g = A`, `h = S` on `X, Y, Z`.
pub fn crystalline_default() -> Composite {
    crystalline_composite(&CrystallineParams::default()).expect("default crystalline parameters are valid")
}

/// The six equalities deciding whether the square with bottom `g_X` and
/// right `g_{X,Y}·h_X` completes in a crystalline composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjugacyConditions {
    /// `h² = g²`
    pub i: bool,
    /// `g·h⁻¹·g = h`
    pub ii: bool,
    /// `g⁻¹·h⁻¹·g = h`
    pub iii: bool,
    /// `g = I`
    pub iv: bool,
    /// `g·h·g = h`
    pub v: bool,
    /// `g⁻¹·h·g = h`
    pub vi: bool,
}

impl ConjugacyConditions {
    /// Conditions ii), iii), v), vi): the ones not ruled out by construction.
    pub fn any_nontrivial(&self) -> bool {
        self.ii || self.iii || self.v || self.vi
    }

    pub fn any(&self) -> bool {
        self.i || self.iv || self.any_nontrivial()
    }
}

pub fn conjugacy_conditions(g: &RationalMatrix3, h: &RationalMatrix3) -> ConjugacyConditions {
    let gi = g.inverse().expect("symmetries are invertible");
    let hi = h.inverse().expect("symmetries are invertible");
    ConjugacyConditions {
        i: h.mul(h) == g.mul(g),
        ii: g.mul(&hi).mul(g) == *h,
        iii: gi.mul(&hi).mul(g) == *h,
        iv: g.is_identity(),
        v: g.mul(h).mul(g) == *h,
        vi: gi.mul(h).mul(g) == *h,
    }
}

/// Implants of two triclinic materials; `Ω_i(X → Y) = {P_i(Y)⁻¹·P_i(X)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriclinicParams {
    pub implants1: Vec<RationalMatrix3>,
    pub implants2: Vec<RationalMatrix3>,
}

impl TriclinicParams {
    pub fn n_points(&self) -> usize {
        self.implants1.len()
    }

    /// `P_i(Y)⁻¹·P_i(X)`.
    pub fn transport(&self, material: u8, x: usize, y: usize) -> RationalMatrix3 {
        let p = if material == 1 { &self.implants1 } else { &self.implants2 };
        p[y].inverse().expect("implants are invertible").mul(&p[x])
    }
}

fn triclinic_groupoid(body: &Arc<Body>, p: &TriclinicParams, material: u8) -> Result<FiniteGroupoid, FixtureError> {
    let n = body.len();
    let arrows = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| Arrow::matrix(oid(x), oid(y), p.transport(material, x, y)));
    Ok(FiniteGroupoid::matrix_over(body.clone(), arrows)?)
}

pub fn triclinic_composite(p: &TriclinicParams) -> Result<Composite, FixtureError> {
    let n = p.n_points();
    if n == 0 || p.implants2.len() != n {
        return Err(FixtureError::InvalidParams("implants must cover the same non-empty body".into()));
    }
    if p.implants1.iter().chain(&p.implants2).any(|m| m.determinant().is_zero()) {
        return Err(FixtureError::InvalidParams("implants must be invertible".into()));
    }
    let body = lettered_body(n);
    let o1 = triclinic_groupoid(&body, p, 1)?;
    let o2 = triclinic_groupoid(&body, p, 2)?;
    Ok(Composite::new(MaterialGroupoid::declared(o1)?, MaterialGroupoid::declared(o2)?, true)?)
}

/// Three points, `P1 ≡ I`, `P2 = (I, A⁻¹, A)`: the two materials commute on
/// every triple of distinct points while sharing no arrow between distinct
/// points.
pub fn triclinic_default_params() -> TriclinicParams {
    let a = cycle_a();
    TriclinicParams {
        implants1: vec![RationalMatrix3::identity(); 3],
        implants2: vec![RationalMatrix3::identity(), a.pow(2), a],
    }
}

pub fn triclinic_default() -> Composite {
    triclinic_composite(&triclinic_default_params()).expect("default triclinic parameters are valid")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingCheck {
    pub holds: bool,
    /// First failing `(X, Y, Z)` in lexicographic order.
    pub failing: Option<[ObjectId; 3]>,
}

/// `t2(Y,Z)·t1(X,Y) = t1(Y,Z)·t2(X,Y)` over all triples, or only over
/// triples of pairwise-distinct points.
pub fn check_commuting_condition(p: &TriclinicParams, distinct_only: bool) -> CommutingCheck {
    let n = p.n_points();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if distinct_only && (x == y || y == z || x == z) {
                    continue;
                }
                let lhs = p.transport(2, y, z).mul(&p.transport(1, x, y));
                let rhs = p.transport(1, y, z).mul(&p.transport(2, x, y));
                if lhs != rhs {
                    return CommutingCheck { holds: false, failing: Some([oid(x), oid(y), oid(z)]) };
                }
            }
        }
    }
    CommutingCheck { holds: true, failing: None }
}

/// A finite matrix group, closed under products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGroup {
    pub name: String,
    pub elements: Vec<RationalMatrix3>,
}

impl MatrixGroup {
    pub fn generated(name: &str, generators: &[RationalMatrix3]) -> Self {
        let x = oid(0);
        let seeds = generators.iter().map(|g| Arrow::matrix(x, x, g.clone()));
        let g = generate_closure(Body::numbered(1), [x], seeds, 48).expect("pool groups are finite");
        Self { name: name.to_string(), elements: g.arrows().iter().filter_map(|a| a.as_matrix().cloned()).collect() }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Groups of order at most 3.
pub fn small_group_pool() -> Vec<MatrixGroup> {
    let d = |a, b, c| RationalMatrix3::from_integers([[a, 0, 0], [0, b, 0], [0, 0, c]]);
    vec![
        MatrixGroup::generated("trivial", &[]),
        MatrixGroup::generated("C2 rotation", &[d(-1, -1, 1)]),
        MatrixGroup::generated("C2 mirror", &[d(-1, 1, 1)]),
        MatrixGroup::generated("inversion", &[d(-1, -1, -1)]),
        MatrixGroup::generated("C3 <A>", &[cycle_a()]),
        MatrixGroup::generated("C3 <S>", &[cycle_s()]),
    ]
}

/// [`small_group_pool`] plus groups of order 4 and 6.
pub fn standard_group_pool() -> Vec<MatrixGroup> {
    let d = |a, b, c| RationalMatrix3::from_integers([[a, 0, 0], [0, b, 0], [0, 0, c]]);
    let mut pool = small_group_pool();
    pool.extend([
        MatrixGroup::generated("C4", &[RationalMatrix3::from_integers([[0, -1, 0], [1, 0, 0], [0, 0, 1]])]),
        MatrixGroup::generated("V4", &[d(-1, -1, 1), d(-1, 1, -1)]),
        MatrixGroup::generated(
            "S3 permutations",
            &[cycle_a(), RationalMatrix3::from_integers([[0, 1, 0], [1, 0, 0], [0, 0, 1]])],
        ),
        MatrixGroup::generated("C6 <-A>", &[cycle_a().scale(&(-1).into())]),
    ]);
    pool
}

/// Transitive matrix groupoid with arrows `R_Y·k·R_X⁻¹` (`k ∈ K`).
fn framed_groupoid(body: &Arc<Body>, group: &MatrixGroup, frames: &[RationalMatrix3]) -> FiniteGroupoid {
    let n = body.len();
    let inv: Vec<RationalMatrix3> = frames.iter().map(|f| f.inverse().expect("frames are invertible")).collect();
    let mut arrows = Vec::with_capacity(n * n * group.order());
    for x in 0..n {
        for y in 0..n {
            for k in &group.elements {
                arrows.push(Arrow::matrix(oid(x), oid(y), frames[y].mul(k).mul(&inv[x])));
            }
        }
    }
    FiniteGroupoid::matrix_over(body.clone(), arrows).expect("framed arrows are valid")
}

/// Seeded composite of two transitive materials. Each material's isotropy
/// at `X` is `R_X·K·R_X⁻¹` for a pool group `K` and signed-permutation
/// frames `R`; frames and groups are shared, nested or independent at
/// random, so every relation between Ω1 and Ω2 shows up across seeds.
pub fn random_composite(seed: u64, n_points: usize, pool: &[MatrixGroup]) -> Composite {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sp = signed_permutations();
    let body = lettered_body(n_points);
    let frames = |rng: &mut ChaCha8Rng| -> Vec<RationalMatrix3> {
        (0..n_points).map(|_| sp.choose(rng).expect("non-empty").clone()).collect()
    };
    let trivial = MatrixGroup::generated("trivial", &[]);
    let k1 = pool.choose(&mut rng).expect("pool is non-empty").clone();
    let f1 = frames(&mut rng);
    let (k2, f2) = match rng.gen_range(0..4) {
        0 => (pool.choose(&mut rng).expect("pool is non-empty").clone(), frames(&mut rng)),
        1 => (pool.choose(&mut rng).expect("pool is non-empty").clone(), f1.clone()),
        2 => (k1.clone(), f1.clone()),
        _ => (trivial, f1.clone()),
    };
    let (mut o1, mut o2) = (framed_groupoid(&body, &k1, &f1), framed_groupoid(&body, &k2, &f2));
    if rng.gen_bool(0.5) {
        std::mem::swap(&mut o1, &mut o2);
    }
    Composite::new(
        MaterialGroupoid::declared(o1).expect("matrix-derived"),
        MaterialGroupoid::declared(o2).expect("matrix-derived"),
        true,
    )
    .expect("framed groupoids share the body and are transitive")
}

/// Ω1 = Ω2 = identity matrices between every pair of points `"1"..="n"`.
pub fn pair_composite(n: usize) -> Composite {
    let body = Body::numbered(n);
    let arrows = (0..n).flat_map(|x| (0..n).map(move |y| Arrow::matrix(oid(x), oid(y), RationalMatrix3::identity())));
    let g = FiniteGroupoid::matrix_over(body, arrows).expect("identity transports are valid");
    let m = MaterialGroupoid::declared(g).expect("matrix-derived");
    Composite::new(m.clone(), m, true).expect("shared body")
}

/// Ω1 = Ω2 = identities only (not transitive for `n > 1`).
pub fn identities_composite(n: usize) -> Composite {
    let body = Body::numbered(n);
    let g = generate_closure(body, (0..n).map(oid), [], n).expect("identities fit");
    let m = MaterialGroupoid::declared(g).expect("matrix-derived");
    Composite::new(m.clone(), m, false).expect("shared body")
}

/// Both materials equal to `m`.
pub fn same_material_composite(m: &MaterialGroupoid) -> Composite {
    Composite::new(m.clone(), m.clone(), false).expect("shared body")
}

fn perm_name(p: &[usize]) -> String {
    p.iter().map(|d| d.to_string()).collect()
}

/// Seeded action groupoid of a permutation group on at most four points,
/// as explicit tables. Arrow `g@x` goes from `x` to `g(x)`.
pub fn random_action_groupoid(seed: u64) -> FiniteGroupoid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=4usize);
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let mut p: Vec<usize> = (0..m).collect();
        p.shuffle(&mut rng);
        gens.push(p);
    }
    // closure of the generators under composition
    let id: Vec<usize> = (0..m).collect();
    let mut group: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
    let mut frontier = vec![id.clone()];
    while let Some(p) = frontier.pop() {
        for g in &gens {
            let q: Vec<usize> = (0..m).map(|i| g[p[i]]).collect();
            if group.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    let label = |g: &[usize], x: usize| format!("{}@{}", perm_name(g), x + 1);
    let mut spec = TableSpec::default();
    for x in 0..m {
        spec.identity.push((oid(x), label(&id, x)));
        for g in &group {
            let gx = g[x];
            spec.arrows.push((oid(x), oid(gx), label(g, x)));
            let mut ginv = vec![0; m];
            for (i, &gi) in g.iter().enumerate() {
                ginv[gi] = i;
            }
            spec.inverse.push((label(g, x), label(&ginv, gx)));
            for h in &group {
                // (h, g(x))·(g, x) = (h∘g, x)
                let hg: Vec<usize> = (0..m).map(|i| h[g[i]]).collect();
                spec.compose.push((label(h, gx), label(g, x), label(&hg, x)));
            }
        }
    }
    FiniteGroupoid::tabular(Body::numbered(m), (0..m).map(oid), spec).expect("action tables are well formed")
}

/// A deliberately broken groupoid and the axiom its defect must trip.
#[derive(Debug, Clone)]
pub struct AxiomMutation {
    pub name: String,
    pub groupoid: FiniteGroupoid,
    pub expected: AxiomId,
}

fn retarget_compose(spec: &TableSpec, g: &str, h: &str, result: &str) -> TableSpec {
    let mut s = spec.clone();
    for row in &mut s.compose {
        if row.0 == g && row.1 == h {
            row.2 = result.to_string();
        }
    }
    s
}

/// Twenty single-defect variants of known groupoids.
pub fn axiom_mutations() -> Vec<AxiomMutation> {
    let mut out = Vec::new();
    let mut push = |name: String, body: Arc<Body>, objects: usize, spec: TableSpec, expected: AxiomId| {
        let groupoid = FiniteGroupoid::tabular(body, (0..objects).map(oid), spec).expect("mutations keep labels unique");
        out.push(AxiomMutation { name, groupoid, expected });
    };
    let pair = pair_table_spec(3);
    let nb = || Body::numbered(3);

    // deleted arrows leave their reverse without an inverse
    for (a, b) in [(0, 1), (1, 2), (0, 2), (2, 0)] {
        let spec = delete_arrow(&pair, &pair_label(a, b));
        push(format!("pair3 without {}", pair_label(a, b)), nb(), 3, spec, AxiomId::Inverse);
    }
    // composite pointing at an arrow with the wrong endpoints
    for (g, h, r) in [("(2,3)", "(1,2)", "(2,2)"), ("(1,1)", "(2,1)", "(1,2)"), ("(3,1)", "(3,3)", "(1,3)")] {
        push(format!("pair3 {g}·{h} := {r}"), nb(), 3, retarget_compose(&pair, g, h, r), AxiomId::SourceTarget);
    }
    // dropped table rows
    let mut spec = pair.clone();
    spec.compose.retain(|(a, b, _)| !(a == "(2,3)" && b == "(1,2)"));
    push("pair3 missing (2,3)·(1,2)".into(), nb(), 3, spec, AxiomId::Closure);
    let mut spec = pair.clone();
    spec.identity.retain(|(x, _)| *x != oid(1));
    push("pair3 missing identity at 2".into(), nb(), 3, spec, AxiomId::Identity);
    let mut spec = pair.clone();
    spec.inverse.retain(|(a, _)| a != "(1,3)");
    push("pair3 missing inverse of (1,3)".into(), nb(), 3, spec, AxiomId::Inverse);
    let mut spec = pair.clone();
    for row in &mut spec.identity {
        if row.0 == oid(0) {
            row.1 = "(1,2)".into();
        }
    }
    push("pair3 identity at 1 := (1,2)".into(), nb(), 3, spec, AxiomId::Identity);

    // groups: corrupted cells keep endpoints but break associativity
    let star = || Body::new(["*"]).expect("single name");
    for (table, name, g, h, r) in [
        (GroupTable::cyclic(3), "C3", "1", "1", "0"),
        (GroupTable::cyclic(3), "C3", "1", "2", "1"),
        (GroupTable::cyclic(4), "C4", "1", "1", "3"),
        (GroupTable::cyclic(4), "C4", "2", "3", "0"),
        (GroupTable::cyclic(5), "C5", "2", "2", "1"),
        (GroupTable::symmetric3(), "S3", "120", "120", "012"),
        (GroupTable::symmetric3(), "S3", "021", "102", "120"),
    ] {
        let e = table.validate().expect("seed tables are groups");
        let spec = retarget_compose(&table.spec(e), g, h, r);
        push(format!("{name} {g}·{h} := {r}"), star(), 1, spec, AxiomId::Associativity);
    }
    // wrong inverses
    let c4 = GroupTable::cyclic(4);
    let mut spec = c4.spec(0);
    for row in &mut spec.inverse {
        if row.0 == "1" {
            row.1 = "1".into();
        }
    }
    push("C4 inverse of 1 := 1".into(), star(), 1, spec, AxiomId::Inverse);
    let mut spec = pair.clone();
    for row in &mut spec.inverse {
        if row.0 == "(2,3)" {
            row.1 = "(2,3)".into();
        }
    }
    push("pair3 inverse of (2,3) := (2,3)".into(), nb(), 3, spec, AxiomId::Inverse);
    out
}
