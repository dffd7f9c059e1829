use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

/// An integer Laurent polynomial in `t`, stored sparsely.
///
/// The map never holds a zero coefficient, so structural equality is
/// polynomial equality and the zero polynomial is the empty map.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

/// Witness that `p(1/t) = sign * t^(-shift) * p(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryWitness {
    pub sign: i8,
    pub shift: i64,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * t^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Ordinary polynomial `c[0] + c[1] t + c[2] t^2 + ...`.
    pub fn from_coefficients<C: Into<BigInt> + Clone>(coeffs: &[C]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64, c.clone().into())),
        )
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `t^k * self`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// `p(1/t)`.
    pub fn reverse(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Exact value at a nonzero integer, or at zero when no negative
    /// exponents are present.
    pub fn eval(&self, x: &BigInt) -> Result<BigRational, AlgebraError> {
        if x.is_zero() {
            return match self.min_exponent() {
                Some(e) if e < 0 => Err(AlgebraError::EvalAtZero),
                _ => Ok(BigRational::from_integer(self.coefficient(0))),
            };
        }
        let xr = BigRational::from_integer(x.clone());
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            acc += BigRational::from_integer(c.clone()) * pow_signed(&xr, *e);
        }
        Ok(acc)
    }

    /// Value at an integer when it is an integer (always the case at `±1`).
    pub fn eval_integer(&self, x: i64) -> Result<Option<BigInt>, AlgebraError> {
        let v = self.eval(&BigInt::from(x))?;
        Ok(v.is_integer().then(|| v.to_integer()))
    }

    /// `p(1)`; the sum of the coefficients.
    pub fn value_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// `p(-1)`.
    pub fn value_at_minus_one(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| if e.is_odd() { -c } else { c.clone() })
            .sum()
    }

    /// Formal derivative, including negative exponents.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (e - 1, c * BigInt::from(*e))),
        )
    }

    /// `p''(1) = Σ c_e e (e - 1)`.
    pub fn second_derivative_at_one(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| c * BigInt::from(*e) * BigInt::from(e - 1))
            .sum()
    }

    /// Returns the unique `(sign, shift)` with `p(1/t) = sign * t^(-shift) * p(t)`,
    /// if any.
    pub fn symmetry_witness(&self) -> Result<Option<SymmetryWitness>, AlgebraError> {
        let (lo, hi) = match (self.min_exponent(), self.max_exponent()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(AlgebraError::ZeroPolynomial),
        };
        let shift = lo + hi;
        let sign: i8 = if self.terms[&lo] == self.terms[&hi] {
            1
        } else if self.terms[&lo] == -&self.terms[&hi] {
            -1
        } else {
            return Ok(None);
        };
        let candidate = self.shift(-shift).scale(&BigInt::from(sign));
        Ok((candidate == self.reverse()).then_some(SymmetryWitness { sign, shift }))
    }

    /// Exact quotient `self / divisor` in `Z[t, 1/t]`, or `None` when the
    /// divisor does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let d_lo = divisor.min_exponent()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d_hi = divisor.max_exponent()?;
        let lead = &divisor.terms[&d_hi];
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        // Long division from the top; anything left below the divisor's span
        // after the loop is a genuine remainder.
        while let Some(r_hi) = rem.max_exponent() {
            let r_lo = rem.min_exponent().unwrap();
            if r_hi - r_lo < d_hi - d_lo {
                return None;
            }
            let (q, r) = rem.terms[&r_hi].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            let term = Self::monomial(q, r_hi - d_hi);
            rem = &rem - &(&term * divisor);
            quotient = &quotient + &term;
        }
        Some(quotient)
    }
}

fn pow_signed(x: &BigRational, e: i64) -> BigRational {
    let mut base = if e < 0 { x.recip() } else { x.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = BigRational::one();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    acc
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

/// Canonical rendering: decreasing exponents, e.g. `-2*t^2 + 5*t - 2`.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let var = match *e {
                0 => String::new(),
                1 => "t".to_string(),
                e => format!("t^{e}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPolynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(terms.iter().copied())
    }

    fn cork_delta() -> LaurentPolynomial {
        p(&[(2, 2), (1, -5), (0, 2)])
    }

    #[test]
    fn ring_examples() {
        let t = LaurentPolynomial::t();
        let one = LaurentPolynomial::one();
        assert_eq!(&(&t + &one) * &(&t - &one), p(&[(2, 1), (0, -1)]));
        assert_eq!(&cork_delta() + &LaurentPolynomial::zero(), cork_delta());
        let minus_inv = LaurentPolynomial::monomial(-1, -1);
        assert_eq!(&cork_delta() * &minus_inv, p(&[(1, -2), (0, 5), (-1, -2)]));
    }

    #[test]
    fn zero_coefficients_cancel_out() {
        let q = &cork_delta() - &cork_delta();
        assert!(q.is_zero());
        assert_eq!(q, LaurentPolynomial::zero());
        assert_eq!(LaurentPolynomial::monomial(0, 5), LaurentPolynomial::zero());
    }

    #[test]
    fn evaluation() {
        let d = cork_delta();
        assert_eq!(d.eval_integer(1).unwrap(), Some(BigInt::from(-1)));
        assert_eq!(d.eval_integer(-1).unwrap(), Some(BigInt::from(9)));
        assert_eq!(d.value_at_minus_one(), BigInt::from(9));
        assert_eq!(
            LaurentPolynomial::one().eval_integer(17).unwrap(),
            Some(BigInt::from(1))
        );
        let inv = LaurentPolynomial::monomial(1, -1);
        assert_eq!(inv.eval(&BigInt::from(0)), Err(AlgebraError::EvalAtZero));
        assert_eq!(inv.eval_integer(2).unwrap(), None);
        assert_eq!(
            inv.eval(&BigInt::from(2)).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(
            d.eval(&BigInt::from(0)).unwrap(),
            BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn derivatives() {
        assert_eq!(cork_delta().derivative(), p(&[(1, 4), (0, -5)]));
        assert_eq!(cork_delta().second_derivative_at_one(), BigInt::from(4));
        assert_eq!(
            LaurentPolynomial::monomial(1, -1).derivative(),
            LaurentPolynomial::monomial(-1, -2)
        );
        let conway = p(&[(1, -2), (0, 5), (-1, -2)]);
        assert_eq!(conway.second_derivative_at_one(), BigInt::from(-4));
    }

    #[test]
    fn symmetry_witnesses() {
        assert_eq!(
            cork_delta().symmetry_witness().unwrap(),
            Some(SymmetryWitness { sign: 1, shift: 2 })
        );
        assert_eq!(
            p(&[(2, 1), (1, 2), (0, 3)]).symmetry_witness().unwrap(),
            None
        );
        assert_eq!(
            LaurentPolynomial::one().symmetry_witness().unwrap(),
            Some(SymmetryWitness { sign: 1, shift: 0 })
        );
        // t^2 + t = t(t + 1) reverses to t^-1 (t + 1)
        assert_eq!(
            p(&[(2, 1), (1, 1)]).symmetry_witness().unwrap(),
            Some(SymmetryWitness { sign: 1, shift: 3 })
        );
        assert_eq!(
            p(&[(1, 1), (0, -1)]).symmetry_witness().unwrap(),
            Some(SymmetryWitness { sign: -1, shift: 1 })
        );
        assert_eq!(
            LaurentPolynomial::zero().symmetry_witness(),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(cork_delta().to_string(), "2*t^2 - 5*t + 2");
        assert_eq!((-cork_delta()).to_string(), "-2*t^2 + 5*t - 2");
        assert_eq!(
            p(&[(1, -2), (0, 5), (-1, -2)]).to_string(),
            "-2*t + 5 - 2*t^-1"
        );
        assert_eq!(p(&[(3, 1), (-2, -1)]).to_string(), "t^3 - t^-2");
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let t = LaurentPolynomial::t();
        let one = LaurentPolynomial::one();
        let a = &t + &one;
        let b = p(&[(-1, 2), (0, -5)]);
        assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
        assert_eq!((&a * &b).div_exact(&a), Some(b));
        assert_eq!(a.div_exact(&p(&[(0, 2)])), None);
        assert_eq!(a.div_exact(&(&t - &one)), None);
        assert_eq!(a.div_exact(&LaurentPolynomial::zero()), None);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPolynomial> {
        proptest::collection::vec((-4i64..5, -6i64..7), 0..6)
            .prop_map(LaurentPolynomial::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a + &(-&a)).is_zero());
        }

        #[test]
        fn second_derivative_matches_double_derivative(a in arb_poly()) {
            let twice = a.derivative().derivative();
            prop_assert_eq!(twice.value_at_one(), a.second_derivative_at_one());
        }

        #[test]
        fn division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
