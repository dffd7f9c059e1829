//! Seifert-matrix invariants of knots and linking numbers of links.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, IntegerMatrix, LaurentPolynomial, PolyMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnotError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("Seifert matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("strict Seifert matrix must have even size, got {0}")]
    OddSize(usize),
    #[error("strict Seifert matrix needs det(S - S^T) = 1, got {0}")]
    BadIntersectionForm(BigInt),
    #[error("polynomial is not a knot Alexander polynomial: value {0} at t = 1")]
    NotKnotPolynomial(BigInt),
    #[error("polynomial {0} is not symmetric up to a unit")]
    Asymmetric(String),
    #[error("the zero polynomial is not an Alexander polynomial")]
    ZeroPolynomial,
    #[error("census declares no components")]
    NoComponents,
    #[error("unknown component label `{0}`")]
    UnknownComponent(String),
    #[error("duplicate component label `{0}`")]
    DuplicateComponent(String),
    #[error("linking number needs two distinct components, got `{0}` twice")]
    SameComponent(String),
    #[error("crossing sign must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("odd signed crossing count {count} between `{a}` and `{b}`")]
    OddCrossingSum { a: String, b: String, count: i64 },
}

/// A square integer matrix presented as a Seifert matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertMatrix {
    matrix: IntegerMatrix,
    strict: bool,
}

impl SeifertMatrix {
    /// Wraps `matrix`. With `strict`, the size must be even and
    /// `det(S - S^T) = 1`, as for a genuine knot Seifert form.
    pub fn new(matrix: IntegerMatrix, strict: bool) -> Result<Self, KnotError> {
        if !matrix.is_square() {
            return Err(KnotError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if strict {
            let n = matrix.rows();
            if !n.is_multiple_of(2) {
                return Err(KnotError::OddSize(n));
            }
            let mut diff = matrix.clone();
            let t = matrix.transpose();
            for i in 0..n {
                for j in 0..n {
                    diff[(i, j)] -= &t[(i, j)];
                }
            }
            let det = diff.det()?;
            if !det.is_one() {
                return Err(KnotError::BadIntersectionForm(det));
            }
        }
        Ok(Self { matrix, strict })
    }

    pub fn from_rows(rows: &[Vec<i64>], strict: bool) -> Result<Self, KnotError> {
        Self::new(IntegerMatrix::from_rows(rows)?, strict)
    }

    /// The 0x0 Seifert matrix of the unknot.
    pub fn unknot() -> Self {
        Self {
            matrix: IntegerMatrix::zeros(0, 0),
            strict: true,
        }
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }
}

/// `det(S - t S^T)`, computed without normalizing the unit.
pub fn alexander_from_seifert(s: &SeifertMatrix) -> Result<LaurentPolynomial, KnotError> {
    let m = s.matrix();
    let n = m.rows();
    let t = LaurentPolynomial::t();
    let pencil = PolyMatrix::from_fn(n, n, |i, j| {
        &LaurentPolynomial::constant(m[(i, j)].clone()) - &t.scale(&m[(j, i)])
    });
    Ok(pencil.det()?)
}

/// The representative `q = ±t^k p` with `q(1) = 1` and `q(t) = q(1/t)`.
pub fn conway_normalize(p: &LaurentPolynomial) -> Result<LaurentPolynomial, KnotError> {
    let witness = p
        .symmetry_witness()
        .map_err(|_| KnotError::ZeroPolynomial)?
        .ok_or_else(|| KnotError::Asymmetric(p.to_string()))?;
    let at_one = p.value_at_one();
    if at_one.abs() != BigInt::one() {
        return Err(KnotError::NotKnotPolynomial(at_one));
    }
    // |p(1)| = 1 rules out both an odd span and an antisymmetric witness
    debug_assert!(witness.shift % 2 == 0 && witness.sign == 1);
    let q = p.shift(-witness.shift / 2).scale(&at_one);
    if q.reverse() != q {
        return Err(KnotError::Asymmetric(p.to_string()));
    }
    Ok(q)
}

/// The ordinary-polynomial representative of lowest degree with positive
/// leading coefficient, e.g. `2*t^2 - 5*t + 2`.
pub fn positive_representative(p: &LaurentPolynomial) -> Result<LaurentPolynomial, KnotError> {
    let (lo, hi) = match (p.min_exponent(), p.max_exponent()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(KnotError::ZeroPolynomial),
    };
    let sign = if p.coefficient(hi).is_negative() {
        BigInt::from(-1)
    } else {
        BigInt::one()
    };
    Ok(p.shift(-lo).scale(&sign))
}

/// True when `p` and `q` differ by a unit `±t^k`.
pub fn unit_equivalent(p: &LaurentPolynomial, q: &LaurentPolynomial) -> bool {
    match (positive_representative(p), positive_representative(q)) {
        (Ok(a), Ok(b)) => a == b,
        _ => p.is_zero() && q.is_zero(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnotPolynomialReport {
    #[serde(serialize_with = "crate::serialize_display")]
    pub alexander_raw: LaurentPolynomial,
    #[serde(serialize_with = "crate::serialize_display")]
    pub conway_normalized: LaurentPolynomial,
    /// `|Δ(-1)|`, the knot determinant.
    #[serde(serialize_with = "crate::serialize_int")]
    pub delta_at_minus_one: BigInt,
    #[serde(serialize_with = "crate::serialize_int")]
    pub second_derivative_at_one_normalized: BigInt,
}

pub fn knot_report(s: &SeifertMatrix) -> Result<KnotPolynomialReport, KnotError> {
    let raw = alexander_from_seifert(s)?;
    let conway = conway_normalize(&raw)?;
    Ok(KnotPolynomialReport {
        delta_at_minus_one: conway.value_at_minus_one().abs(),
        second_derivative_at_one_normalized: conway.second_derivative_at_one(),
        alexander_raw: raw,
        conway_normalized: conway,
    })
}

/// Necessary condition for unknottedness: the Alexander polynomial is a unit.
/// Passing it does not prove the knot is trivial.
pub fn alexander_screen(s: &SeifertMatrix) -> Result<bool, KnotError> {
    Ok(conway_normalize(&alexander_from_seifert(s)?)? == LaurentPolynomial::one())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(String, String, i64)", into = "(String, String, i64)")]
pub struct Crossing {
    pub a: String,
    pub b: String,
    pub sign: i64,
}

impl From<(String, String, i64)> for Crossing {
    fn from((a, b, sign): (String, String, i64)) -> Self {
        Self { a, b, sign }
    }
}

impl From<Crossing> for (String, String, i64) {
    fn from(c: Crossing) -> Self {
        (c.a, c.b, c.sign)
    }
}

/// Signed crossings of a link diagram, labelled by component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingCensus {
    pub components: Vec<String>,
    pub crossings: Vec<Crossing>,
}

impl CrossingCensus {
    pub fn validate(&self) -> Result<(), KnotError> {
        if self.components.is_empty() {
            return Err(KnotError::NoComponents);
        }
        let mut seen = BTreeSet::new();
        for c in &self.components {
            if !seen.insert(c.as_str()) {
                return Err(KnotError::DuplicateComponent(c.clone()));
            }
        }
        for x in &self.crossings {
            for label in [&x.a, &x.b] {
                if !seen.contains(label.as_str()) {
                    return Err(KnotError::UnknownComponent(label.clone()));
                }
            }
            if x.sign != 1 && x.sign != -1 {
                return Err(KnotError::BadSign(x.sign));
            }
        }
        Ok(())
    }

    /// Concatenation of two censuses over the union of their components.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut components = self.components.clone();
        for c in &other.components {
            if !components.contains(c) {
                components.push(c.clone());
            }
        }
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().cloned());
        Self {
            components,
            crossings,
        }
    }
}

/// Half the signed count of crossings between components `a` and `b`.
pub fn linking_number(census: &CrossingCensus, a: &str, b: &str) -> Result<i64, KnotError> {
    census.validate()?;
    if a == b {
        return Err(KnotError::SameComponent(a.to_string()));
    }
    for label in [a, b] {
        if !census.components.iter().any(|c| c == label) {
            return Err(KnotError::UnknownComponent(label.to_string()));
        }
    }
    let count: i64 = census
        .crossings
        .iter()
        .filter(|x| (x.a == a && x.b == b) || (x.a == b && x.b == a))
        .map(|x| x.sign)
        .sum();
    if count % 2 != 0 {
        return Err(KnotError::OddCrossingSum {
            a: a.to_string(),
            b: b.to_string(),
            count,
        });
    }
    Ok(count / 2)
}

/// Strict Seifert matrix `A + U`, where `A` is the symmetric matrix whose
/// upper triangle (row by row) is `upper` and `U` has a single `1` above the
/// diagonal in each 2x2 block, so `U - U^T` is the standard symplectic form.
///
/// Every strict Seifert matrix of genus `genus` arises this way up to
/// congruence; it is the generator used by the randomized checks.
pub fn seifert_from_symmetric(genus: usize, upper: &[i64]) -> Result<SeifertMatrix, KnotError> {
    let n = 2 * genus;
    if upper.len() != n * (n + 1) / 2 {
        return Err(AlgebraError::BadShape {
            rows: n,
            cols: n,
            len: upper.len(),
        }
        .into());
    }
    let mut m = IntegerMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[(i, j)] = BigInt::from(upper[k]);
            m[(j, i)] = BigInt::from(upper[k]);
            k += 1;
        }
    }
    for b in 0..genus {
        m[(2 * b, 2 * b + 1)] += 1;
    }
    SeifertMatrix::new(m, true)
}

/// Seifert matrix of the knot whose `1/n` surgeries bound the cork family.
pub fn cork_knot_seifert() -> SeifertMatrix {
    SeifertMatrix::from_rows(&[vec![3, -1], vec![-2, 0]], true)
        .expect("cork knot Seifert matrix is a valid strict Seifert matrix")
}

/// A trefoil Seifert matrix.
pub fn trefoil_seifert() -> SeifertMatrix {
    SeifertMatrix::from_rows(&[vec![-1, 1], vec![0, -1]], true)
        .expect("trefoil Seifert matrix is a valid strict Seifert matrix")
}

/// Crossing census of the two-component link `L^n`: a clasp of four
/// crossings between the components with linking number one, and `n` full
/// left-handed twists of two strands of the second component.
pub fn cork_link_census(n: u32) -> CrossingCensus {
    let k = |a: &str, b: &str, sign| Crossing {
        a: a.into(),
        b: b.into(),
        sign,
    };
    let mut crossings = vec![
        k("K1", "K2", 1),
        k("K2", "K1", 1),
        k("K1", "K2", 1),
        k("K2", "K1", -1),
    ];
    for _ in 0..n {
        crossings.push(k("K2", "K2", -1));
        crossings.push(k("K2", "K2", -1));
    }
    CrossingCensus {
        components: vec!["K1".into(), "K2".into()],
        crossings,
    }
}
