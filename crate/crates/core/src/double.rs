//! Squares of a composite: the coarse double groupoid of two material
//! groupoids and its commutative part.
//!
//! A square has horizontal sides `bottom: A → B` and `top: C → D` from Ω1,
//! and vertical sides `right: A → C` and `left: B → D` from Ω2:
//!
//! ```text
//!   D <--top--- C
//!   ^           ^
//!  left       right
//!   |           |
//!   B <-bottom- A
//! ```
//!
//! It commutes when `left·bottom = top·right`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::groupoid::{ambient_identity, Arrow, Body, FiniteGroupoid, GroupoidError, ObjectId, TableSpec};
use crate::jet::RationalMatrix3;
use crate::material::Composite;

/// Default maximum number of squares [`enumerate_squares`] materializes.
pub const DEFAULT_SQUARE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Ω1 sides (bottom/top).
    Horizontal,
    /// Ω2 sides (right/left).
    Vertical,
}

/// Which side of a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Bottom,
    Top,
    Right,
    Left,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Bottom => "bottom",
            Side::Top => "top",
            Side::Right => "right",
            Side::Left => "left",
        }
    }
}

/// The four corner identifications, numbered as in [`SquareError::CornerMismatch`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    /// `α(bottom) = α(right)`
    SourceSource,
    /// `α(top) = β(right)`
    TopRight,
    /// `β(bottom) = α(left)`
    BottomLeft,
    /// `β(top) = β(left)`
    TargetTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SquareError {
    #[error("corner mismatch: {0:?}")]
    CornerMismatch(Corner),
    #[error("{side:?} side {arrow:?} is not in its groupoid")]
    WrongGroupoid { side: Side, arrow: Box<Arrow> },
    #[error("squares do not share the vertical side required by the vertical product")]
    NotComposableVertically,
    #[error("squares do not share the horizontal side required by the horizontal product")]
    NotComposableHorizontally,
    #[error("2x2 block is not composable: {0}")]
    NotComposableBlock(&'static str),
    #[error("more than {0} squares")]
    SizeCap(usize),
    #[error("invalid partial square: {0}")]
    InvalidPartial(String),
    #[error("square sides must carry matrices")]
    NotMatrix,
}

impl From<GroupoidError> for SquareError {
    fn from(_: GroupoidError) -> Self {
        SquareError::NotMatrix
    }
}

fn mat(a: &Arrow) -> &RationalMatrix3 {
    a.as_matrix().expect("square sides are matrix arrows")
}

fn then(g: &Arrow, h: &Arrow) -> Arrow {
    // g·h; endpoints are guaranteed by the caller's corner checks
    Arrow::matrix(h.src, g.dst, mat(g).mul(mat(h)))
}

fn inv(g: &Arrow) -> Arrow {
    Arrow::matrix(g.dst, g.src, mat(g).inverse().expect("arrow matrices are invertible"))
}

/// Ordering is lexicographic on (bottom, top, right, left).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub bottom: Arrow,
    pub top: Arrow,
    pub right: Arrow,
    pub left: Arrow,
}

fn corner_check(bottom: &Arrow, top: &Arrow, right: &Arrow, left: &Arrow) -> Result<(), SquareError> {
    if bottom.src != right.src {
        return Err(SquareError::CornerMismatch(Corner::SourceSource));
    }
    if top.src != right.dst {
        return Err(SquareError::CornerMismatch(Corner::TopRight));
    }
    if bottom.dst != left.src {
        return Err(SquareError::CornerMismatch(Corner::BottomLeft));
    }
    if top.dst != left.dst {
        return Err(SquareError::CornerMismatch(Corner::TargetTarget));
    }
    Ok(())
}

impl Square {
    /// Square with checked corners and matrix sides, without groupoid
    /// membership checks (see [`make_square`]).
    pub fn new(bottom: Arrow, top: Arrow, right: Arrow, left: Arrow) -> Result<Self, SquareError> {
        if [&bottom, &top, &right, &left].iter().any(|a| a.as_matrix().is_none()) {
            return Err(SquareError::NotMatrix);
        }
        corner_check(&bottom, &top, &right, &left)?;
        Ok(Self { bottom, top, right, left })
    }

    /// `(A, B, C, D)` = (α(bottom), β(bottom), β(right), β(top)).
    pub fn corners(&self) -> [ObjectId; 4] {
        [self.bottom.src, self.bottom.dst, self.right.dst, self.top.dst]
    }

    pub fn side(&self, side: Side) -> &Arrow {
        match side {
            Side::Bottom => &self.bottom,
            Side::Top => &self.top,
            Side::Right => &self.right,
            Side::Left => &self.left,
        }
    }

    pub fn display(&self, body: &Body) -> String {
        format!(
            "bottom {} | top {} | right {} | left {}",
            self.bottom.display(body),
            self.top.display(body),
            self.right.display(body),
            self.left.display(body)
        )
    }
}

/// Builds a square whose horizontal sides lie in Ω1 and vertical sides in Ω2.
pub fn make_square(c: &Composite, g1: Arrow, h1: Arrow, g2: Arrow, h2: Arrow) -> Result<Square, SquareError> {
    for (side, a, g) in [
        (Side::Bottom, &g1, c.omega1()),
        (Side::Top, &h1, c.omega1()),
        (Side::Right, &g2, c.omega2()),
        (Side::Left, &h2, c.omega2()),
    ] {
        if !g.contains(a) {
            return Err(SquareError::WrongGroupoid { side, arrow: Box::new(a.clone()) });
        }
    }
    Square::new(g1, h1, g2, h2)
}

/// `left·bottom = top·right`.
pub fn is_commutative(sq: &Square) -> bool {
    mat(&sq.left).mul(mat(&sq.bottom)) == mat(&sq.top).mul(mat(&sq.right))
}

/// The four rearrangements of the commutativity equation, each evaluated on
/// its own:
///
/// 1. `left·bottom = top·right`
/// 2. `bottom·right⁻¹ = left⁻¹·top`
/// 3. `top⁻¹·left = right·bottom⁻¹`
/// 4. `right⁻¹·top⁻¹ = bottom⁻¹·left⁻¹`
pub fn equivalent_conditions(sq: &Square) -> [bool; 4] {
    let (b, t, r, l) = (mat(&sq.bottom), mat(&sq.top), mat(&sq.right), mat(&sq.left));
    let i = |m: &RationalMatrix3| m.inverse().expect("arrow matrices are invertible");
    [
        l.mul(b) == t.mul(r),
        b.mul(&i(r)) == i(l).mul(t),
        i(t).mul(l) == r.mul(&i(b)),
        i(r).mul(&i(t)) == i(b).mul(&i(l)),
    ]
}

/// `sq ⊥□ sq'`: composes the horizontal sides across the shared vertical
/// side `sq.right = sq'.left`.
pub fn vertical_product(sq: &Square, sq2: &Square) -> Result<Square, SquareError> {
    if sq.right != sq2.left {
        return Err(SquareError::NotComposableVertically);
    }
    Ok(Square {
        bottom: then(&sq.bottom, &sq2.bottom),
        top: then(&sq.top, &sq2.top),
        right: sq2.right.clone(),
        left: sq.left.clone(),
    })
}

/// `sq ⊞□ sq'`: composes the vertical sides across the shared horizontal
/// side `sq.bottom = sq'.top`.
pub fn horizontal_product(sq: &Square, sq2: &Square) -> Result<Square, SquareError> {
    if sq.bottom != sq2.top {
        return Err(SquareError::NotComposableHorizontally);
    }
    Ok(Square {
        bottom: sq2.bottom.clone(),
        top: sq.top.clone(),
        right: then(&sq.right, &sq2.right),
        left: then(&sq.left, &sq2.left),
    })
}

/// `ε̃_H(g)` (top = bottom = `g`, identity verticals) or `ε̃_V(g)`
/// (left = right = `g`, identity horizontals).
pub fn unit_square(c: &Composite, direction: Direction, g: &Arrow) -> Result<Square, SquareError> {
    let (group, side) = match direction {
        Direction::Horizontal => (c.omega1(), Side::Bottom),
        Direction::Vertical => (c.omega2(), Side::Right),
    };
    if !group.contains(g) {
        return Err(SquareError::WrongGroupoid { side, arrow: Box::new(g.clone()) });
    }
    Ok(unit_square_of(direction, g))
}

/// [`unit_square`] without the membership check.
pub fn unit_square_of(direction: Direction, g: &Arrow) -> Square {
    let (es, et) = (ambient_identity(g.src), ambient_identity(g.dst));
    match direction {
        Direction::Horizontal => Square { bottom: g.clone(), top: g.clone(), right: es, left: et },
        Direction::Vertical => Square { bottom: es, top: et, right: g.clone(), left: g.clone() },
    }
}

/// `ĩ_H` swaps the horizontal sides and inverts the vertical ones; `ĩ_V`
/// swaps the vertical sides and inverts the horizontal ones.
pub fn invert_square(sq: &Square, direction: Direction) -> Square {
    match direction {
        Direction::Horizontal => Square {
            bottom: sq.top.clone(),
            top: sq.bottom.clone(),
            right: inv(&sq.right),
            left: inv(&sq.left),
        },
        Direction::Vertical => Square {
            bottom: inv(&sq.bottom),
            top: inv(&sq.top),
            right: sq.left.clone(),
            left: sq.right.clone(),
        },
    }
}

/// Interchange law on the block
///
/// ```text
///   g | h
///   --+--
///   a | b
/// ```
///
/// `(g ⊥□ h) ⊞□ (a ⊥□ b) = (g ⊞□ a) ⊥□ (h ⊞□ b)`.
pub fn interchange_check(g: &Square, h: &Square, a: &Square, b: &Square) -> Result<bool, SquareError> {
    if g.right != h.left {
        return Err(SquareError::NotComposableBlock("top row does not share a vertical side"));
    }
    if a.right != b.left {
        return Err(SquareError::NotComposableBlock("bottom row does not share a vertical side"));
    }
    if g.bottom != a.top {
        return Err(SquareError::NotComposableBlock("left column does not share a horizontal side"));
    }
    if h.bottom != b.top {
        return Err(SquareError::NotComposableBlock("right column does not share a horizontal side"));
    }
    let rows_first = horizontal_product(&vertical_product(g, h)?, &vertical_product(a, b)?)?;
    let columns_first = vertical_product(&horizontal_product(g, a)?, &horizontal_product(h, b)?)?;
    Ok(rows_first == columns_first)
}

/// A materialized set of squares in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareSet {
    pub squares: Vec<Square>,
    pub commutative_only: bool,
}

impl SquareSet {
    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }
}

/// Every corner-consistent square of the composite, or only the commutative
/// ones. Fails with [`SquareError::SizeCap`] past `cap` squares.
pub fn enumerate_squares(c: &Composite, commutative_only: bool, cap: usize) -> Result<SquareSet, SquareError> {
    let (o1, o2) = (c.omega1(), c.omega2());
    let count = AtomicUsize::new(0);
    let over = AtomicBool::new(false);
    let chunks: Vec<Vec<Square>> = o1
        .arrows()
        .par_iter()
        .map(|g1| {
            let mut out = Vec::new();
            for g2 in o2.arrows().iter().filter(|g2| g2.src == g1.src) {
                for h2 in o2.arrows().iter().filter(|h2| h2.src == g1.dst) {
                    if over.load(Ordering::Relaxed) {
                        return out;
                    }
                    let mut push = |h1: &Arrow| {
                        if count.fetch_add(1, Ordering::Relaxed) >= cap {
                            over.store(true, Ordering::Relaxed);
                        } else {
                            out.push(Square { bottom: g1.clone(), top: h1.clone(), right: g2.clone(), left: h2.clone() });
                        }
                    };
                    if commutative_only {
                        // the only candidate top is h2·g1·g2⁻¹
                        let h1 = then(&then(h2, g1), &inv(g2));
                        if o1.contains(&h1) {
                            push(&h1);
                        }
                    } else {
                        for h1 in o1.hom(g2.dst, h2.dst) {
                            push(h1);
                        }
                    }
                }
            }
            out
        })
        .collect();
    if over.load(Ordering::Relaxed) {
        return Err(SquareError::SizeCap(cap));
    }
    let mut squares: Vec<Square> = chunks.into_iter().flatten().collect();
    squares.par_sort_unstable();
    Ok(SquareSet { squares, commutative_only })
}

/// The core groupoid: commutative squares with identity bottom and right,
/// i.e. pairs `(top, left)` of parallel arrows `X → Y`, composed by
/// `K₁·K₂ = (K₁ ⊥□ ε̃_H(top K₂)) ⊞□ K₂`.
#[derive(Debug, Clone)]
pub struct CoreGroupoid {
    pub groupoid: FiniteGroupoid,
    squares: BTreeMap<Arrow, Square>,
}

impl CoreGroupoid {
    /// The square behind a core arrow.
    pub fn square(&self, a: &Arrow) -> Option<&Square> {
        self.squares.get(a)
    }

    pub fn squares(&self) -> impl Iterator<Item = (&Arrow, &Square)> {
        self.squares.iter()
    }
}

fn core_label(body: &Body, sq: &Square) -> String {
    format!("{}->{} top {} left {}", body.name(sq.top.src), body.name(sq.top.dst), sq.top.payload, sq.left.payload)
}

pub fn core_groupoid(c: &Composite) -> Result<CoreGroupoid, SquareError> {
    let (o1, o2) = (c.omega1(), c.omega2());
    let body = &c.body;
    let objects = c.objects();

    // (x, y) -> squares, with their labels
    let mut by_pair: BTreeMap<(ObjectId, ObjectId), Vec<(String, Square)>> = BTreeMap::new();
    for &x in objects {
        let e = ambient_identity(x);
        for &y in objects {
            for h1 in o1.hom(x, y) {
                for h2 in o2.hom(x, y) {
                    let sq = Square { bottom: e.clone(), top: h1.clone(), right: e.clone(), left: h2.clone() };
                    if is_commutative(&sq) {
                        by_pair.entry((x, y)).or_default().push((core_label(body, &sq), sq));
                    }
                }
            }
        }
    }
    let lookup: BTreeMap<&Square, &str> =
        by_pair.values().flatten().map(|(l, s)| (s, l.as_str())).collect();

    let mut spec = TableSpec::default();
    for ((x, y), list) in &by_pair {
        for (label, _) in list {
            spec.arrows.push((*x, *y, label.clone()));
        }
    }
    for &x in objects {
        let e = ambient_identity(x);
        let unit = Square { bottom: e.clone(), top: e.clone(), right: e.clone(), left: e };
        if let Some(l) = lookup.get(&unit) {
            spec.identity.push((x, l.to_string()));
        }
    }
    // K1 ∘ K2 with K2: x → y, K1: y → z
    for ((_, y), k2s) in &by_pair {
        for &z in objects {
            let Some(k1s) = by_pair.get(&(*y, z)) else { continue };
            for (l2, k2) in k2s {
                let unit = unit_square_of(Direction::Horizontal, &k2.top);
                for (l1, k1) in k1s {
                    let prod = horizontal_product(&vertical_product(k1, &unit)?, k2)?;
                    let result = lookup.get(&prod).map_or_else(|| format!("<outside core: {prod:?}>"), |s| s.to_string());
                    spec.compose.push((l1.clone(), l2.clone(), result));
                }
            }
        }
    }
    // inverses read off the composition table
    let identity_of: BTreeMap<ObjectId, &str> = spec.identity.iter().map(|(x, l)| (*x, l.as_str())).collect();
    let compose_index: BTreeMap<(&str, &str), &str> =
        spec.compose.iter().map(|(a, b, r)| ((a.as_str(), b.as_str()), r.as_str())).collect();
    let mut inverses = Vec::new();
    for ((x, y), list) in &by_pair {
        for (l, _) in list {
            let mut candidates = by_pair.get(&(*y, *x)).into_iter().flatten();
            if let Some((li, _)) =
                candidates.find(|(li, _)| compose_index.get(&(li.as_str(), l.as_str())) == identity_of.get(x))
            {
                inverses.push((l.clone(), li.clone()));
            }
        }
    }
    spec.inverse = inverses;

    let groupoid = FiniteGroupoid::tabular(body.clone(), objects.to_vec(), spec)?;
    let squares = by_pair
        .into_iter()
        .flat_map(|((x, y), list)| list.into_iter().map(move |(l, s)| (Arrow::label(x, y, &l), s)))
        .collect();
    Ok(CoreGroupoid { groupoid, squares })
}
