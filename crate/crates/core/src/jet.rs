//! Exact 3×3 rational matrices standing in for 1-jets of local
//! diffeomorphisms.

use std::fmt;
use std::str::FromStr;

use crate::rational::{ParseRationalError, Rational};

/// Default bound for [`classify_matrix`]'s order search: the order of the
/// largest crystallographic point group.
pub const DEFAULT_ORDER_BOUND: u32 = 48;

/// Default tolerance of the floating-point view.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("matrix is singular")]
    Singular,
    #[error("expected a 3x3 matrix, got {rows} rows")]
    BadShape { rows: usize },
    #[error("bad matrix entry at ({row},{col}): {source}")]
    BadEntry {
        row: usize,
        col: usize,
        #[source]
        source: ParseRationalError,
    },
}

/// A 3×3 matrix of exact rationals, row-major.
///
/// Ordering is lexicographic over the row-major entries, which gives arrows
/// a canonical total order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalMatrix3 {
    entries: [[Rational; 3]; 3],
}

impl RationalMatrix3 {
    pub fn new(entries: [[Rational; 3]; 3]) -> Self {
        Self { entries }
    }

    pub fn from_integers(rows: [[i64; 3]; 3]) -> Self {
        Self::new(rows.map(|r| r.map(Rational::from_integer)))
    }

    pub fn identity() -> Self {
        Self::diag([Rational::one(), Rational::one(), Rational::one()])
    }

    pub fn zero() -> Self {
        Self::new(Default::default())
    }

    pub fn diag(d: [Rational; 3]) -> Self {
        let mut m = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            m.entries[i][i] = v;
        }
        m
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[[Rational; 3]; 3] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                let e = &self.entries[i][j];
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn transpose(&self) -> Self {
        let e = &self.entries;
        Self::new(std::array::from_fn(|i| std::array::from_fn(|j| e[j][i].clone())))
    }

    pub fn determinant(&self) -> Rational {
        let e = &self.entries;
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| &(&e[r1][c1] * &e[r2][c2]) - &(&e[r1][c2] * &e[r2][c1]);
        let a = &e[0][0] * &minor(1, 2, 1, 2);
        let b = &e[0][1] * &minor(1, 2, 0, 2);
        let c = &e[0][2] * &minor(1, 2, 0, 1);
        &(&a - &b) + &c
    }

    /// Adjugate (transpose of the cofactor matrix).
    pub fn adjugate(&self) -> Self {
        let e = &self.entries;
        let cofactor = |i: usize, j: usize| {
            let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
            let m = &(&e[rows[0]][cols[0]] * &e[rows[1]][cols[1]]) - &(&e[rows[0]][cols[1]] * &e[rows[1]][cols[0]]);
            if (i + j).is_multiple_of(2) {
                m
            } else {
                -m
            }
        };
        Self::new(std::array::from_fn(|i| std::array::from_fn(|j| cofactor(j, i))))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.entries.clone().map(|r| r.map(|v| &v * k)))
    }

    /// Exact product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.entries;
        let b = &rhs.entries;
        Self::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = &a[i][0] * &b[0][j];
                for k in 1..3 {
                    if !a[i][k].is_zero() && !b[k][j].is_zero() {
                        acc = &acc + &(&a[i][k] * &b[k][j]);
                    }
                }
                acc
            })
        }))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::new(std::array::from_fn(|i| std::array::from_fn(|j| &self.entries[i][j] - &rhs.entries[i][j])))
    }

    /// Exact inverse via adjugate over determinant.
    pub fn inverse(&self) -> Result<Self, JetError> {
        let det_inv = self.determinant().recip().ok_or(JetError::Singular)?;
        Ok(self.adjugate().scale(&det_inv))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Row-major `"p/q"` strings.
    pub fn to_strings(&self) -> [[String; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.entries[i][j].to_string()))
    }

    pub fn from_strings<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self, JetError> {
        if rows.len() != 3 {
            return Err(JetError::BadShape { rows: rows.len() });
        }
        let mut m = Self::zero();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != 3 {
                return Err(JetError::BadShape { rows: rows.len() });
            }
            for (j, s) in row.iter().enumerate() {
                m.entries[i][j] = s
                    .as_ref()
                    .parse()
                    .map_err(|source| JetError::BadEntry { row: i, col: j, source })?;
            }
        }
        Ok(m)
    }

    /// Floating-point view, for numeric checks only.
    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.entries[i][j].to_f64()))
    }

    /// Entrywise comparison of the floating-point views within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let (a, b) = (self.to_f64(), other.to_f64());
        (0..3).all(|i| (0..3).all(|j| (a[i][j] - b[i][j]).abs() <= tol))
    }
}

/// Compact `[[a,b,c],[d,e,f],[g,h,i]]` form, used as the payload string of
/// matrix arrows.
impl fmt::Display for RationalMatrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{},{},{}]", row[0], row[1], row[2])?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RationalMatrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RationalMatrix3 {
    type Err = JetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let rows: Vec<Vec<&str>> = inner.split("],[").map(|r| r.split(',').collect()).collect();
        Self::from_strings(&rows)
    }
}

/// Exact product `a · b`.
pub fn mat_compose(a: &RationalMatrix3, b: &RationalMatrix3) -> RationalMatrix3 {
    a.mul(b)
}

pub fn mat_inverse(m: &RationalMatrix3) -> Result<RationalMatrix3, JetError> {
    m.inverse()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixClass {
    pub invertible: bool,
    pub orthogonal: bool,
    pub determinant: Rational,
    /// Least `k ≤ bound` with `M^k = I`.
    pub finite_order: Option<u32>,
}

pub fn classify_matrix(m: &RationalMatrix3) -> MatrixClass {
    classify_matrix_with_bound(m, DEFAULT_ORDER_BOUND)
}

pub fn classify_matrix_with_bound(m: &RationalMatrix3, bound: u32) -> MatrixClass {
    let determinant = m.determinant();
    let invertible = !determinant.is_zero();
    let orthogonal = m.transpose().mul(m).is_identity();
    let mut finite_order = None;
    if invertible {
        let mut power = m.clone();
        for k in 1..=bound {
            if power.is_identity() {
                finite_order = Some(k);
                break;
            }
            power = power.mul(m);
        }
    }
    MatrixClass { invertible, orthogonal, determinant, finite_order }
}

/// All 48 signed permutation matrices, in canonical order.
pub fn signed_permutations() -> Vec<RationalMatrix3> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(48);
    for perm in PERMS {
        for signs in 0..8u8 {
            let mut rows = [[0i64; 3]; 3];
            for (i, &j) in perm.iter().enumerate() {
                rows[i][j] = if signs & (1 << i) != 0 { -1 } else { 1 };
            }
            out.push(RationalMatrix3::from_integers(rows));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a3() -> RationalMatrix3 {
        RationalMatrix3::from_integers([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    }

    fn s3() -> RationalMatrix3 {
        RationalMatrix3::from_integers([[0, 0, -1], [1, 0, 0], [0, -1, 0]])
    }

    fn diag(a: i64, b: i64, c: i64) -> RationalMatrix3 {
        RationalMatrix3::diag([a.into(), b.into(), c.into()])
    }

    #[test]
    fn compose_examples() {
        let m = RationalMatrix3::from_integers([[1, 2, 3], [0, 1, 4], [5, 6, 0]]);
        assert_eq!(mat_compose(&RationalMatrix3::identity(), &m), m);
        let a = a3();
        assert!(mat_compose(&mat_compose(&a, &a), &a).is_identity());
        let half = RationalMatrix3::diag([Rational::new(1, 2), 1.into(), 1.into()]);
        assert!(mat_compose(&half, &diag(2, 1, 1)).is_identity());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mat_inverse(&RationalMatrix3::identity()).unwrap(), RationalMatrix3::identity());
        let a = a3();
        let inv = mat_inverse(&a).unwrap();
        assert_eq!(inv, a.transpose());
        assert_eq!(inv, a.pow(2));
        assert_eq!(
            mat_inverse(&diag(2, 1, 1)).unwrap(),
            RationalMatrix3::diag([Rational::new(1, 2), 1.into(), 1.into()])
        );
        let m = RationalMatrix3::from_integers([[1, 2, 3], [0, 1, 4], [5, 6, 0]]);
        let expected = RationalMatrix3::from_integers([[-24, 18, 5], [20, -15, -4], [-5, 4, 1]]);
        assert_eq!(mat_inverse(&m).unwrap(), expected);
        let singular = RationalMatrix3::from_integers([[1, 2, 3], [2, 4, 6], [0, 0, 1]]);
        assert_eq!(mat_inverse(&singular), Err(JetError::Singular));
    }

    #[test]
    fn classify_examples() {
        let c = classify_matrix(&a3());
        assert!(c.invertible && c.orthogonal);
        assert_eq!(c.determinant, Rational::one());
        assert_eq!(c.finite_order, Some(3));

        let c = classify_matrix(&s3());
        assert!(c.invertible && c.orthogonal);
        assert_eq!(c.determinant, Rational::one());
        assert_eq!(c.finite_order, Some(3));

        let c = classify_matrix(&diag(2, 1, 1));
        assert!(c.invertible && !c.orthogonal);
        assert_eq!(c.finite_order, None);

        let c = classify_matrix(&RationalMatrix3::zero());
        assert!(!c.invertible && c.finite_order.is_none());
    }

    #[test]
    fn signed_permutation_census() {
        let all = signed_permutations();
        assert_eq!(all.len(), 48);
        let det_one = all.iter().filter(|m| m.determinant().is_one()).count();
        assert_eq!(det_one, 24);
        assert!(all.iter().all(|m| classify_matrix(m).orthogonal));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn string_forms() {
        let m = RationalMatrix3::diag([Rational::new(1, 2), (-3).into(), 1.into()]);
        let s = m.to_string();
        assert_eq!(s, "[[1/2,0,0],[0,-3,0],[0,0,1]]");
        assert_eq!(s.parse::<RationalMatrix3>().unwrap(), m);
        assert!(matches!("[[1,0],[0,1]]".parse::<RationalMatrix3>(), Err(JetError::BadShape { .. })));
        assert!(matches!(
            "[[1/0,0,0],[0,1,0],[0,0,1]]".parse::<RationalMatrix3>(),
            Err(JetError::BadEntry { row: 0, col: 0, .. })
        ));
    }

    #[test]
    fn float_view() {
        let m = RationalMatrix3::diag([Rational::new(1, 3), 1.into(), 1.into()]);
        let approx = RationalMatrix3::diag([Rational::new(333_333_333_333, 1_000_000_000_000), 1.into(), 1.into()]);
        assert!(m.approx_eq(&approx, DEFAULT_FLOAT_TOL));
        assert_ne!(m, approx);
    }

    fn small_matrix() -> impl Strategy<Value = RationalMatrix3> {
        proptest::array::uniform3(proptest::array::uniform3((-4i64..=4, 1i64..=3)))
            .prop_map(|rows| RationalMatrix3::new(rows.map(|r| r.map(|(n, d)| Rational::new(n, d)))))
    }

    proptest! {
        #[test]
        fn product_is_associative(a in small_matrix(), b in small_matrix(), c in small_matrix()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn inverse_is_two_sided(m in small_matrix()) {
            if let Ok(inv) = m.inverse() {
                prop_assert!(m.mul(&inv).is_identity());
                prop_assert!(inv.mul(&m).is_identity());
                prop_assert_eq!(m.determinant() * inv.determinant(), Rational::one());
            } else {
                prop_assert!(m.determinant().is_zero());
            }
        }

        #[test]
        fn orthogonality_passes_to_inverse(i in 0usize..48) {
            let m = &signed_permutations()[i];
            let inv = m.inverse().unwrap();
            prop_assert!(classify_matrix(&inv).orthogonal);
            prop_assert!(classify_matrix(m).determinant.abs().is_one());
        }
    }
}
