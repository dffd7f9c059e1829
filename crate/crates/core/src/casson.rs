//! Casson invariant of `1/n` surgery on a knot: `λ = n · Δ''(1) / 2`.
//!
//! `Δ''(1)` depends on which unit multiple of the Alexander polynomial is
//! differentiated, so every result carries the [`Convention`] it was
//! computed under. The symmetric representative with `Δ(1) = 1` is the
//! default. [`Convention::PositiveRepresentative`] differentiates the
//! ordinary polynomial of lowest degree with positive leading coefficient
//! instead (for the cork knot that is `2t² - 5t + 2`).
//!
//! Writing the positive representative as `s·t^j·q` with `q` Conway
//! normalized, symmetry forces `q'(1) = 0` and so
//! `λ_positive = s · (λ_conway + n·j(j-1)/2)`. For knots of genus one
//! (`j ≤ 1`) the two conventions differ only by the sign `s`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::knot::{self, KnotError, KnotPolynomialReport, SeifertMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CassonError {
    #[error("surgery coefficient 1/n needs n != 0")]
    ZeroSurgery,
    #[error(transparent)]
    Knot(#[from] KnotError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    #[default]
    ConwayNormalized,
    #[serde(rename = "paper_representative")]
    PositiveRepresentative,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::ConwayNormalized => "conway_normalized",
            Convention::PositiveRepresentative => "paper_representative",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KnotSource {
    Seifert(SeifertMatrix),
    Report(KnotPolynomialReport),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryDescription {
    pub knot: KnotSource,
    pub n: i64,
}

impl SurgeryDescription {
    pub fn new(knot: SeifertMatrix, n: i64) -> Result<Self, CassonError> {
        if n == 0 {
            return Err(CassonError::ZeroSurgery);
        }
        Ok(Self {
            knot: KnotSource::Seifert(knot),
            n,
        })
    }

    pub fn from_report(report: KnotPolynomialReport, n: i64) -> Result<Self, CassonError> {
        if n == 0 {
            return Err(CassonError::ZeroSurgery);
        }
        Ok(Self {
            knot: KnotSource::Report(report),
            n,
        })
    }

    fn report(&self) -> Result<KnotPolynomialReport, CassonError> {
        match &self.knot {
            KnotSource::Seifert(s) => Ok(knot::knot_report(s)?),
            KnotSource::Report(r) => Ok(r.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CassonResult {
    #[serde(serialize_with = "crate::serialize_int")]
    pub lambda: BigInt,
    pub convention: Convention,
}

impl CassonResult {
    pub fn magnitude(&self) -> BigInt {
        self.lambda.abs()
    }
}

pub fn casson_one_over_n(
    desc: &SurgeryDescription,
    convention: Convention,
) -> Result<CassonResult, CassonError> {
    if desc.n == 0 {
        return Err(CassonError::ZeroSurgery);
    }
    let report = desc.report()?;
    let second = match convention {
        Convention::ConwayNormalized => report.conway_normalized.second_derivative_at_one(),
        Convention::PositiveRepresentative => {
            knot::positive_representative(&report.conway_normalized)?.second_derivative_at_one()
        }
    };
    let (half, rem) = (BigInt::from(desc.n) * second).div_rem(&BigInt::from(2));
    debug_assert!(rem.is_zero(), "Δ''(1) of a knot polynomial is even");
    Ok(CassonResult {
        lambda: half,
        convention,
    })
}

/// `|λ|`, identical under both conventions for genus-one knots.
pub fn casson_magnitude(desc: &SurgeryDescription) -> Result<BigInt, CassonError> {
    Ok(casson_one_over_n(desc, Convention::ConwayNormalized)?.magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::{cork_knot_seifert, trefoil_seifert};
    use num_traits::One;
    use proptest::prelude::*;

    fn cork(n: i64) -> SurgeryDescription {
        SurgeryDescription::new(cork_knot_seifert(), n).unwrap()
    }

    #[test]
    fn cork_family_values() {
        for n in 1..=3 {
            let pos = casson_one_over_n(&cork(n), Convention::PositiveRepresentative).unwrap();
            assert_eq!(pos.lambda, BigInt::from(2 * n));
            let con = casson_one_over_n(&cork(n), Convention::ConwayNormalized).unwrap();
            assert_eq!(con.lambda, BigInt::from(-2 * n));
            assert_eq!(casson_magnitude(&cork(n)).unwrap(), BigInt::from(2 * n));
        }
        assert_ne!(
            casson_magnitude(&cork(1)).unwrap(),
            casson_magnitude(&cork(2)).unwrap()
        );
    }

    #[test]
    fn unknot_and_trefoil() {
        for n in [-3, 1, 7] {
            let d = SurgeryDescription::new(SeifertMatrix::unknot(), n).unwrap();
            assert!(casson_magnitude(&d).unwrap().is_zero());
        }
        let d = SurgeryDescription::new(trefoil_seifert(), 1).unwrap();
        assert_eq!(casson_magnitude(&d).unwrap(), BigInt::one());
    }

    #[test]
    fn zero_surgery_rejected() {
        assert_eq!(
            SurgeryDescription::new(cork_knot_seifert(), 0),
            Err(CassonError::ZeroSurgery)
        );
        let bad = SurgeryDescription {
            knot: KnotSource::Seifert(cork_knot_seifert()),
            n: 0,
        };
        assert_eq!(
            casson_one_over_n(&bad, Convention::default()),
            Err(CassonError::ZeroSurgery)
        );
    }

    #[test]
    fn precomputed_report_matches() {
        let r = knot::knot_report(&cork_knot_seifert()).unwrap();
        let d = SurgeryDescription::from_report(r, 5).unwrap();
        assert_eq!(casson_magnitude(&d).unwrap(), BigInt::from(10));
    }

    #[test]
    fn genus_two_conventions_differ_by_more_than_sign() {
        // (3_1 # 3_1): Conway q = (t - 1 + 1/t)^2, q''(1) = 4 but the
        // positive representative t^4 - 2t^3 + 3t^2 - 2t + 1 has r''(1) = 6.
        let s = SeifertMatrix::from_rows(
            &[
                vec![-1, 1, 0, 0],
                vec![0, -1, 0, 0],
                vec![0, 0, -1, 1],
                vec![0, 0, 0, -1],
            ],
            true,
        )
        .unwrap();
        let d = SurgeryDescription::new(s, 1).unwrap();
        let con = casson_one_over_n(&d, Convention::ConwayNormalized).unwrap();
        let pos = casson_one_over_n(&d, Convention::PositiveRepresentative).unwrap();
        assert_eq!(con.lambda, BigInt::from(2));
        assert_eq!(pos.lambda, BigInt::from(3));
    }

    fn arb_strict() -> impl Strategy<Value = SeifertMatrix> {
        (1usize..=3).prop_flat_map(|g| {
            let n = 2 * g;
            proptest::collection::vec(-4i64..=4, n * (n + 1) / 2)
                .prop_map(move |sym| crate::knot::seifert_from_symmetric(g, &sym).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn linear_in_n(s in arb_strict(), n1 in -20i64..20, n2 in -20i64..20) {
            prop_assume!(n1 != 0 && n2 != 0 && n1 + n2 != 0);
            let report = knot::knot_report(&s).unwrap();
            let at = |n| {
                casson_one_over_n(
                    &SurgeryDescription::from_report(report.clone(), n).unwrap(),
                    Convention::ConwayNormalized,
                )
                .unwrap()
                .lambda
            };
            prop_assert_eq!(at(n1 + n2), at(n1) + at(n2));
        }

        #[test]
        fn convention_relation(s in arb_strict(), n in 1i64..10) {
            let report = knot::knot_report(&s).unwrap();
            let d = SurgeryDescription::from_report(report.clone(), n).unwrap();
            let con = casson_one_over_n(&d, Convention::ConwayNormalized).unwrap().lambda;
            let pos = casson_one_over_n(&d, Convention::PositiveRepresentative).unwrap().lambda;
            let rep = knot::positive_representative(&report.conway_normalized).unwrap();
            let sign = rep.value_at_one();
            let j = rep.max_exponent().unwrap() / 2;
            prop_assert_eq!(&pos, &(&sign * (&con + BigInt::from(n * j * (j - 1) / 2))));
            if j <= 1 {
                prop_assert_eq!(pos, sign * con);
            }
        }
    }
}
