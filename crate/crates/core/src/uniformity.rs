//! Uniformity notions for composites, decided by exhaustive search over the
//! squares each definition quantifies over, plus cross-checks of the known
//! relations between them computed along unrelated code paths.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::double::{Direction, Side, Square, SquareError};
use crate::fixtures::{check_commuting_condition, triclinic_composite, TriclinicParams};
use crate::groupoid::{ambient_identity, Arrow, FiniteGroupoid, ObjectId, OrbitKind};
use crate::jet::RationalMatrix3;
use crate::material::{composite_groupoid, Composite, MaterialError};

/// Concrete data backing a verdict.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Evidence {
    pub note: String,
    pub points: Vec<ObjectId>,
    /// `(role, arrow)` pairs, e.g. `("g2", ...)`.
    pub arrows: Vec<(String, Arrow)>,
    pub squares: Vec<Square>,
}

impl Evidence {
    fn note(note: impl Into<String>) -> Self {
        Self { note: note.into(), ..Default::default() }
    }

    fn points(mut self, p: impl IntoIterator<Item = ObjectId>) -> Self {
        self.points.extend(p);
        self
    }

    fn arrow(mut self, role: &str, a: &Arrow) -> Self {
        self.arrows.push((role.to_string(), a.clone()));
        self
    }

    fn square(mut self, s: Square) -> Self {
        self.squares.push(s);
        self
    }
}

/// A decided property. A false flag always carries a counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub holds: bool,
    pub witness: Option<Evidence>,
    pub counterexample: Option<Evidence>,
}

impl Flag {
    fn from_search(counterexample: Option<Evidence>) -> Self {
        Self { holds: counterexample.is_none(), witness: None, counterexample }
    }

    fn with_witness(mut self, w: Evidence) -> Self {
        if self.holds {
            self.witness = Some(w);
        }
        self
    }
}

fn m(a: &Arrow) -> &RationalMatrix3 {
    a.as_matrix().expect("composite arrows carry matrices")
}

fn commutes(bottom: &Arrow, top: &Arrow, right: &Arrow, left: &Arrow) -> bool {
    m(left).mul(m(bottom)) == m(top).mul(m(right))
}

fn sq(bottom: &Arrow, top: &Arrow, right: &Arrow, left: &Arrow) -> Square {
    Square { bottom: bottom.clone(), top: top.clone(), right: right.clone(), left: left.clone() }
}

fn first_failure<T: Sync>(items: &[T], f: impl Fn(&T) -> Option<Evidence> + Sync + Send) -> Option<Evidence> {
    items.par_iter().find_map_first(f)
}

/// A square with some sides fixed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialSquare {
    pub bottom: Option<Arrow>,
    pub top: Option<Arrow>,
    pub right: Option<Arrow>,
    pub left: Option<Arrow>,
}

impl PartialSquare {
    fn sides(&self) -> [(Side, Option<&Arrow>); 4] {
        [
            (Side::Bottom, self.bottom.as_ref()),
            (Side::Top, self.top.as_ref()),
            (Side::Right, self.right.as_ref()),
            (Side::Left, self.left.as_ref()),
        ]
    }

    pub fn present(&self) -> usize {
        self.sides().iter().filter(|(_, a)| a.is_some()).count()
    }

    /// Corner identifications among the present sides.
    fn check(&self, c: &Composite) -> Result<(), SquareError> {
        let bad = |m: &str| Err(SquareError::InvalidPartial(m.into()));
        if self.present() == 0 {
            return bad("no side given");
        }
        for (side, a) in self.sides() {
            let Some(a) = a else { continue };
            let g = match side {
                Side::Bottom | Side::Top => c.omega1(),
                Side::Right | Side::Left => c.omega2(),
            };
            if !g.contains(a) {
                return Err(SquareError::InvalidPartial(format!("{} side is not in its material groupoid", side.as_str())));
            }
        }
        let (b, t, r, l) = (&self.bottom, &self.top, &self.right, &self.left);
        let pairs = [
            (b.as_ref().map(|a| a.src), r.as_ref().map(|a| a.src), "bottom and right must share their source"),
            (t.as_ref().map(|a| a.src), r.as_ref().map(|a| a.dst), "top must start where right ends"),
            (b.as_ref().map(|a| a.dst), l.as_ref().map(|a| a.src), "left must start where bottom ends"),
            (t.as_ref().map(|a| a.dst), l.as_ref().map(|a| a.dst), "top and left must share their target"),
        ];
        for (p, q, msg) in pairs {
            if let (Some(p), Some(q)) = (p, q) {
                if p != q {
                    return bad(msg);
                }
            }
        }
        Ok(())
    }
}

/// Every commutative square of `c` that extends `p`, in canonical order.
pub fn complete_square(c: &Composite, p: &PartialSquare) -> Result<Vec<Square>, SquareError> {
    p.check(c)?;
    let (o1, o2) = (c.omega1(), c.omega2());
    let pick = |fixed: &Option<Arrow>, g: &'_ FiniteGroupoid| -> Vec<Arrow> {
        match fixed {
            Some(a) => vec![a.clone()],
            None => g.arrows().to_vec(),
        }
    };
    let mut out = Vec::new();
    for g1 in pick(&p.bottom, o1) {
        for g2 in pick(&p.right, o2).iter().filter(|g2| g2.src == g1.src) {
            for h2 in pick(&p.left, o2).iter().filter(|h2| h2.src == g1.dst) {
                for h1 in pick(&p.top, o1).iter().filter(|h1| h1.src == g2.dst && h1.dst == h2.dst) {
                    if commutes(&g1, h1, g2, h2) {
                        out.push(sq(&g1, h1, g2, h2));
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Ω1 ∩ Ω2 is transitive. The witness lists one shared arrow from the first
/// point to every point.
pub fn is_uniform(c: &Composite) -> Result<Flag, MaterialError> {
    let common = composite_groupoid(c)?;
    let objects = c.objects();
    for &x in objects {
        for &y in objects {
            if common.hom_len(x, y) == 0 {
                return Ok(Flag::from_search(Some(
                    Evidence::note("no arrow of both materials between these points").points([x, y]),
                )));
            }
        }
    }
    let mut w = Evidence::note("shared material isomorphisms from the first point");
    if let Some(&x0) = objects.first() {
        for &y in objects {
            w = w.arrow(&format!("shared {}", c.body.name(y)), common.hom(x0, y).next().expect("non-empty hom"));
        }
    }
    Ok(Flag::from_search(None).with_witness(w))
}

/// Horizontal: every `(right, bottom, left)` with matching corners has a top
/// in Ω1 closing a commutative square. Vertical: every
/// `(bottom, right, top)` has a left in Ω2.
pub fn is_directionally_transitive(c: &Composite, direction: Direction) -> Flag {
    let (o1, o2) = (c.omega1(), c.omega2());
    let cx = match direction {
        Direction::Horizontal => first_failure(o1.arrows(), |g1| {
            for g2 in o2.arrows().iter().filter(|g2| g2.src == g1.src) {
                for h2 in o2.arrows().iter().filter(|h2| h2.src == g1.dst) {
                    if !o1.hom(g2.dst, h2.dst).any(|h1| commutes(g1, h1, g2, h2)) {
                        return Some(
                            Evidence::note("no top side closes this square")
                                .arrow("bottom", g1)
                                .arrow("right", g2)
                                .arrow("left", h2),
                        );
                    }
                }
            }
            None
        }),
        Direction::Vertical => first_failure(o1.arrows(), |g1| {
            for g2 in o2.arrows().iter().filter(|g2| g2.src == g1.src) {
                for h1 in o1.arrows().iter().filter(|h1| h1.src == g2.dst) {
                    if !o2.hom(g1.dst, h1.dst).any(|h2| commutes(g1, h1, g2, h2)) {
                        return Some(
                            Evidence::note("no left side closes this square")
                                .arrow("bottom", g1)
                                .arrow("right", g2)
                                .arrow("top", h1),
                        );
                    }
                }
            }
            None
        }),
    };
    Flag::from_search(cx)
}

/// Membership form of directional transitivity: `left·bottom·right⁻¹ ∈ Ω1`
/// (horizontal) or `top·right·bottom⁻¹ ∈ Ω2` (vertical).
pub fn membership_form(c: &Composite, direction: Direction) -> bool {
    let (a, b) = match direction {
        Direction::Horizontal => (c.omega1(), c.omega2()),
        Direction::Vertical => (c.omega2(), c.omega1()),
    };
    // for all (y2, y1, z2) ∈ b ×_{α,α} a ×_{β,α} b: z2·y1·y2⁻¹ ∈ a
    a.arrows().par_iter().all(|y1| {
        b.arrows().iter().filter(|y2| y2.src == y1.src).all(|y2| {
            let inv = m(y2).inverse().expect("invertible");
            b.arrows()
                .iter()
                .filter(|z2| z2.src == y1.dst)
                .all(|z2| a.contains(&Arrow::matrix(y2.dst, z2.dst, m(z2).mul(m(y1)).mul(&inv))))
        })
    })
}

/// Horizontal: every pair `(right, left)` of Ω2 arrows is completed by some
/// `(bottom, top)` of Ω1 to a commutative square. Vertical mirrors it.
pub fn is_weak_directionally_transitive(c: &Composite, direction: Direction) -> Flag {
    let (o1, o2) = (c.omega1(), c.omega2());
    let cx = match direction {
        Direction::Horizontal => first_failure(o2.arrows(), |g2| {
            for h2 in o2.arrows() {
                let found = o1
                    .hom(g2.src, h2.src)
                    .any(|g1| o1.hom(g2.dst, h2.dst).any(|h1| commutes(g1, h1, g2, h2)));
                if !found {
                    return Some(Evidence::note("no horizontal sides complete this pair").arrow("right", g2).arrow("left", h2));
                }
            }
            None
        }),
        Direction::Vertical => first_failure(o1.arrows(), |g1| {
            for h1 in o1.arrows() {
                let found = o2
                    .hom(g1.src, h1.src)
                    .any(|g2| o2.hom(g1.dst, h1.dst).any(|h2| commutes(g1, h1, g2, h2)));
                if !found {
                    return Some(Evidence::note("no vertical sides complete this pair").arrow("bottom", g1).arrow("top", h1));
                }
            }
            None
        }),
    };
    Flag::from_search(cx)
}

/// For every point `X`, loop `bottom` of Ω1 at `X` and `right` of Ω2 leaving
/// `X` (to `Y`), some `top: Y → X` in Ω1 and loop `left` of Ω2 at `X` make
/// the square commute.
pub fn is_strongly_uniform(c: &Composite) -> Flag {
    let (o1, o2) = (c.omega1(), c.omega2());
    let cx = first_failure(c.objects(), |&x| {
        for g1 in o1.hom(x, x) {
            for g2 in o2.arrows().iter().filter(|g2| g2.src == x) {
                let y = g2.dst;
                if !o1.hom(y, x).any(|h1| o2.hom(x, x).any(|h2| commutes(g1, h1, g2, h2))) {
                    return Some(
                        Evidence::note("symmetry of the first material and isomorphism of the second do not commute")
                            .points([x])
                            .arrow("bottom", g1)
                            .arrow("right", g2),
                    );
                }
            }
        }
        None
    });
    Flag::from_search(cx)
}

/// Which corner quadruples weak uniformity quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakVariant {
    /// All `(A, B, C, D)`.
    Corners,
    /// Quadruples with `B = C`.
    Midpoint,
}

/// Every corner quadruple `(A, B, C, D)` (`A = α(bottom)`, `B = β(bottom)`,
/// `C = β(right)`, `D = β(top)`) is realized by a commutative square.
pub fn is_weakly_uniform(c: &Composite, variant: WeakVariant) -> Flag {
    let (o1, o2) = (c.omega1(), c.omega2());
    let objects = c.objects();
    let cx = first_failure(objects, |&a| {
        for &b in objects {
            let cs: &[ObjectId] = match variant {
                WeakVariant::Corners => objects,
                WeakVariant::Midpoint => std::slice::from_ref(objects.iter().find(|o| **o == b).expect("b is an object")),
            };
            for &cc in cs {
                for &d in objects {
                    let found = o1.hom(a, b).any(|g1| {
                        o2.hom(a, cc).any(|g2| o2.hom(b, d).any(|h2| o1.hom(cc, d).any(|h1| commutes(g1, h1, g2, h2))))
                    });
                    if !found {
                        return Some(Evidence::note("no commutative square has these corners").points([a, b, cc, d]));
                    }
                }
            }
        }
        None
    });
    Flag::from_search(cx)
}

/// For all `X`, `Y`: some commutative square has identity bottom and right
/// at `X` and its left side ending at `Y`.
pub fn filling_uniformity_check(c: &Composite) -> Flag {
    let (o1, o2) = (c.omega1(), c.omega2());
    let objects = c.objects();
    let mut witness = Evidence::note("filled squares from the first point");
    let cx = first_failure(objects, |&x| {
        let e = ambient_identity(x);
        for &y in objects {
            if !o2.hom(x, y).any(|h2| o1.hom(x, y).any(|h1| commutes(&e, h1, &e, h2))) {
                return Some(Evidence::note("no square fills identities at the first point toward the second").points([x, y]));
            }
        }
        None
    });
    if cx.is_none() {
        if let Some(&x) = objects.first() {
            let e = ambient_identity(x);
            for &y in objects {
                let found = o2.hom(x, y).find_map(|h2| o1.hom(x, y).find(|h1| commutes(&e, h1, &e, h2)).map(|h1| (h1, h2)));
                if let Some((h1, h2)) = found {
                    witness = witness.square(sq(&e, h1, &e, h2));
                }
            }
        }
    }
    Flag::from_search(cx).with_witness(witness)
}

fn hom_matrices(g: &FiniteGroupoid, x: ObjectId, y: ObjectId) -> BTreeSet<&RationalMatrix3> {
    g.hom(x, y).map(m).collect()
}

/// Horizontal: `left·Ω1(X→Y)·right = Ω1(X'→Y')` for all Ω2 arrows
/// `right: X' → X`, `left: Y → Y'`. Vertical swaps the materials.
pub fn isotropy_conjugation_check(c: &Composite, direction: Direction) -> Flag {
    let (a, b) = match direction {
        Direction::Horizontal => (c.omega1(), c.omega2()),
        Direction::Vertical => (c.omega2(), c.omega1()),
    };
    let cx = first_failure(b.arrows(), |g| {
        for h in b.arrows() {
            let conj: BTreeSet<RationalMatrix3> = a.hom(g.dst, h.src).map(|k| m(h).mul(m(k)).mul(m(g))).collect();
            let target = hom_matrices(a, g.src, h.dst);
            if conj.len() != target.len() || !conj.iter().all(|k| target.contains(k)) {
                return Some(
                    Evidence::note("conjugated hom-set differs from the target hom-set")
                        .arrow("inner", g)
                        .arrow("outer", h),
                );
            }
        }
        None
    });
    Flag::from_search(cx)
}

/// `g·Iso(X)·g⁻¹ = Iso(X')` for every arrow `g: X → X'` of the other
/// material (horizontal: Ω1 isotropy conjugated by Ω2 arrows).
pub fn isotropy_groups_conjugate(c: &Composite, direction: Direction) -> Flag {
    let (a, b) = match direction {
        Direction::Horizontal => (c.omega1(), c.omega2()),
        Direction::Vertical => (c.omega2(), c.omega1()),
    };
    let cx = first_failure(b.arrows(), |g| {
        let inv = m(g).inverse().expect("invertible");
        let conj: BTreeSet<RationalMatrix3> = a.hom(g.src, g.src).map(|k| m(g).mul(m(k)).mul(&inv)).collect();
        let target = hom_matrices(a, g.dst, g.dst);
        if conj.len() != target.len() || !conj.iter().all(|k| target.contains(k)) {
            Some(Evidence::note("isotropy groups are not conjugate along this arrow").arrow("conjugator", g))
        } else {
            None
        }
    });
    Flag::from_search(cx)
}

/// Per-point inclusions of isotropy groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsotropyInclusion {
    pub point: ObjectId,
    pub omega2_in_omega1: bool,
    pub omega1_in_omega2: bool,
}

pub fn isotropy_inclusions(c: &Composite) -> Vec<IsotropyInclusion> {
    c.objects()
        .iter()
        .map(|&x| {
            let i1 = hom_matrices(c.omega1(), x, x);
            let i2 = hom_matrices(c.omega2(), x, x);
            IsotropyInclusion { point: x, omega2_in_omega1: i2.is_subset(&i1), omega1_in_omega2: i1.is_subset(&i2) }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equivalence,
    Implication,
}

/// One known relation between properties, with both sides evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub id: &'static str,
    pub statement: &'static str,
    pub relation: Relation,
    pub lhs: bool,
    pub rhs: bool,
    /// False when the relation assumes both materials are transitive and
    /// this composite is not.
    pub applicable: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityReport {
    pub uniform: Flag,
    pub horizontally_transitive: Flag,
    pub vertically_transitive: Flag,
    pub weak_horizontally_transitive: Flag,
    pub weak_vertically_transitive: Flag,
    pub strongly_uniform: Flag,
    pub weakly_uniform_corners: Flag,
    pub weakly_uniform_midpoint: Flag,
    pub filling_condition: Flag,
    pub hom_conjugation_horizontal: Flag,
    pub hom_conjugation_vertical: Flag,
    pub isotropy_conjugate_horizontal: Flag,
    pub isotropy_conjugate_vertical: Flag,
    pub isotropy_inclusions: Vec<IsotropyInclusion>,
    /// Both materials are transitive.
    pub materials_transitive: bool,
    pub crosschecks: Vec<CrossCheck>,
}

/// How weak uniformity is read: a square realizing every corner quadruple.
pub const WEAK_UNIFORMITY_SEMANTICS: &str = "corners";

impl UniformityReport {
    /// Named flags in report order.
    pub fn flags(&self) -> Vec<(&'static str, &Flag)> {
        vec![
            ("uniform", &self.uniform),
            ("horizontally_transitive", &self.horizontally_transitive),
            ("vertically_transitive", &self.vertically_transitive),
            ("weak_horizontally_transitive", &self.weak_horizontally_transitive),
            ("weak_vertically_transitive", &self.weak_vertically_transitive),
            ("strongly_uniform", &self.strongly_uniform),
            ("weakly_uniform_corners", &self.weakly_uniform_corners),
            ("weakly_uniform_midpoint", &self.weakly_uniform_midpoint),
            ("filling_condition", &self.filling_condition),
            ("hom_conjugation_horizontal", &self.hom_conjugation_horizontal),
            ("hom_conjugation_vertical", &self.hom_conjugation_vertical),
            ("isotropy_conjugate_horizontal", &self.isotropy_conjugate_horizontal),
            ("isotropy_conjugate_vertical", &self.isotropy_conjugate_vertical),
        ]
    }

    /// Every applicable cross-check agrees.
    pub fn all_agree(&self) -> bool {
        self.crosschecks.iter().all(|c| !c.applicable || c.agree)
    }
}

/// Decides every flag by its own search and evaluates each known relation
/// from independently computed sides.
pub fn classify_composite(c: &Composite) -> Result<UniformityReport, MaterialError> {
    use Direction::{Horizontal as H, Vertical as V};
    let uniform = is_uniform(c)?;
    let horizontal = is_directionally_transitive(c, H);
    let vertical = is_directionally_transitive(c, V);
    let weak_h = is_weak_directionally_transitive(c, H);
    let weak_v = is_weak_directionally_transitive(c, V);
    let strong = is_strongly_uniform(c);
    let corners = is_weakly_uniform(c, WeakVariant::Corners);
    let midpoint = is_weakly_uniform(c, WeakVariant::Midpoint);
    let filling = filling_uniformity_check(c);
    let hom_h = isotropy_conjugation_check(c, H);
    let hom_v = isotropy_conjugation_check(c, V);
    let iso_h = isotropy_groups_conjugate(c, H);
    let iso_v = isotropy_groups_conjugate(c, V);
    let inclusions = isotropy_inclusions(c);
    let materials_transitive = c.omega1().is_transitive() && c.omega2().is_transitive();

    let u = uniform.holds;
    let inc21 = inclusions.iter().all(|i| i.omega2_in_omega1);
    let inc12 = inclusions.iter().all(|i| i.omega1_in_omega2);
    let o2_in_o1 = c.omega2().arrows_subset_of(c.omega1());
    let o1_in_o2 = c.omega1().arrows_subset_of(c.omega2());
    let equal = c.omega1().same_arrows(c.omega2());

    let check = |id, statement, relation, lhs: bool, rhs: bool, needs_transitive: bool| {
        let agree = match relation {
            Relation::Equivalence => lhs == rhs,
            Relation::Implication => !lhs || rhs,
        };
        CrossCheck { id, statement, relation, lhs, rhs, applicable: materials_transitive || !needs_transitive, agree }
    };
    use Relation::{Equivalence as Iff, Implication as Implies};
    let crosschecks = vec![
        check("horizontal_iff_uniform_and_isotropy_2_in_1", "horizontally transitive <=> uniform and every Omega2 isotropy group lies in Omega1's", Iff, horizontal.holds, u && inc21, true),
        check("vertical_iff_uniform_and_isotropy_1_in_2", "vertically transitive <=> uniform and every Omega1 isotropy group lies in Omega2's", Iff, vertical.holds, u && inc12, true),
        check("both_directions_iff_uniform_and_equal_materials", "horizontally and vertically transitive <=> uniform and Omega1 = Omega2", Iff, horizontal.holds && vertical.holds, u && equal, true),
        check("weak_horizontal_iff_horizontal", "weakly horizontally transitive <=> horizontally transitive", Iff, weak_h.holds, horizontal.holds, true),
        check("weak_vertical_iff_vertical", "weakly vertically transitive <=> vertically transitive", Iff, weak_v.holds, vertical.holds, true),
        check("weak_horizontal_iff_omega2_in_omega1", "weakly horizontally transitive <=> Omega2 is a subgroupoid of Omega1", Iff, weak_h.holds, o2_in_o1, true),
        check("weak_vertical_iff_omega1_in_omega2", "weakly vertically transitive <=> Omega1 is a subgroupoid of Omega2", Iff, weak_v.holds, o1_in_o2, true),
        check("horizontal_iff_membership_form", "horizontally transitive <=> left.bottom.right^-1 lies in Omega1 for every admissible triple", Iff, horizontal.holds, membership_form(c, H), false),
        check("vertical_iff_membership_form", "vertically transitive <=> the mirrored product lies in Omega2 for every admissible triple", Iff, vertical.holds, membership_form(c, V), false),
        check("horizontal_iff_hom_set_conjugation", "horizontally transitive <=> Omega2 arrows conjugate Omega1 hom-sets onto hom-sets", Iff, horizontal.holds, hom_h.holds, false),
        check("vertical_iff_hom_set_conjugation", "vertically transitive <=> Omega1 arrows conjugate Omega2 hom-sets onto hom-sets", Iff, vertical.holds, hom_v.holds, false),
        check("horizontal_implies_isotropy_conjugation", "horizontally transitive => Omega2 arrows conjugate Omega1 isotropy groups", Implies, horizontal.holds, iso_h.holds, false),
        check("vertical_implies_isotropy_conjugation", "vertically transitive => Omega1 arrows conjugate Omega2 isotropy groups", Implies, vertical.holds, iso_v.holds, false),
        check("filling_iff_uniform", "identity-filling condition <=> uniform", Iff, filling.holds, u, false),
        check("strong_implies_uniform", "strongly uniform => uniform", Implies, strong.holds, u, true),
        check("uniform_implies_weak_corners", "uniform => weakly uniform (corners)", Implies, u, corners.holds, false),
    ];

    Ok(UniformityReport {
        uniform,
        horizontally_transitive: horizontal,
        vertically_transitive: vertical,
        weak_horizontally_transitive: weak_h,
        weak_vertically_transitive: weak_v,
        strongly_uniform: strong,
        weakly_uniform_corners: corners,
        weakly_uniform_midpoint: midpoint,
        filling_condition: filling,
        hom_conjugation_horizontal: hom_h,
        hom_conjugation_vertical: hom_v,
        isotropy_conjugate_horizontal: iso_h,
        isotropy_conjugate_vertical: iso_v,
        isotropy_inclusions: inclusions,
        materials_transitive,
        crosschecks,
    })
}

/// One family of implants searched by [`triclinic_search`].
#[derive(Debug, Clone)]
pub struct TriclinicSearchSpace {
    pub n_points: usize,
    pub pool_name: String,
    pub pool: Vec<RationalMatrix3>,
}

/// Flags of one searched triclinic instance (`P1 ≡ I`, `P2(first) = I`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriclinicFinding {
    pub n_points: usize,
    pub pool_name: String,
    /// Indices into the pool for `P2` at the points after the first.
    pub implant_indices: Vec<usize>,
    pub commuting_distinct: bool,
    pub commuting_all: bool,
    pub uniform: bool,
    /// Ω1 ∩ Ω2 has no arrow between distinct points.
    pub completely_non_uniform: bool,
    pub weak_midpoint: bool,
    pub weak_corners: bool,
    pub equal_materials: bool,
}

impl TriclinicFinding {
    /// Completely non-uniform yet weakly uniform in the corners sense.
    pub fn realizes_claim_corners(&self) -> bool {
        self.completely_non_uniform && self.weak_corners
    }

    pub fn realizes_claim_midpoint(&self) -> bool {
        self.completely_non_uniform && self.weak_midpoint
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriclinicSearchReport {
    pub findings: Vec<TriclinicFinding>,
}

impl TriclinicSearchReport {
    pub fn count(&self, f: impl Fn(&TriclinicFinding) -> bool) -> usize {
        self.findings.iter().filter(|x| f(x)).count()
    }
}

fn decode(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(index % base);
        index /= base;
    }
    out
}

/// Classifies one triclinic instance with the generic classifiers.
pub fn triclinic_finding(space: &TriclinicSearchSpace, implant_indices: Vec<usize>) -> Result<TriclinicFinding, MaterialError> {
    let n = space.n_points;
    let mut implants2 = vec![RationalMatrix3::identity()];
    implants2.extend(implant_indices.iter().map(|&i| space.pool[i].clone()));
    let params = TriclinicParams { implants1: vec![RationalMatrix3::identity(); n], implants2 };
    let c = triclinic_composite(&params).map_err(|e| match e {
        crate::fixtures::FixtureError::Material(m) => m,
        other => MaterialError::NotClosed(other.to_string()),
    })?;
    let common = composite_groupoid(&c)?;
    Ok(TriclinicFinding {
        n_points: n,
        pool_name: space.pool_name.clone(),
        implant_indices,
        commuting_distinct: check_commuting_condition(&params, true).holds,
        commuting_all: check_commuting_condition(&params, false).holds,
        uniform: common.is_transitive(),
        completely_non_uniform: common.orbit_partition().kind == OrbitKind::TotallyIntransitive,
        weak_midpoint: is_weakly_uniform(&c, WeakVariant::Midpoint).holds,
        weak_corners: is_weakly_uniform(&c, WeakVariant::Corners).holds,
        equal_materials: c.omega1().same_arrows(c.omega2()),
    })
}

/// Exhaustive search over implants drawn from each space's pool. Any pair of
/// implants is equivalent, by a change of frame at every point, to one with
/// `P1 ≡ I` and `P2(first point) = I`, so only the remaining `n - 1` values
/// of `P2` vary.
pub fn triclinic_search(spaces: &[TriclinicSearchSpace]) -> Result<TriclinicSearchReport, MaterialError> {
    let mut findings = Vec::new();
    for space in spaces {
        let free = space.n_points.saturating_sub(1);
        let total = space.pool.len().pow(free as u32);
        let batch: Result<Vec<TriclinicFinding>, MaterialError> = (0..total)
            .into_par_iter()
            .map(|i| triclinic_finding(space, decode(i, space.pool.len(), free)))
            .collect();
        findings.extend(batch?);
    }
    Ok(TriclinicSearchReport { findings })
}
