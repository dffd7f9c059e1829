//! Exact computations for a family of Mazur-type corks `Wⁿ`.
//!
//! The crate covers Alexander polynomials from Seifert matrices
//! ([`knot`]), Casson invariants of `1/n` surgeries ([`casson`]), Legendrian
//! front invariants and link admissibility ([`legendrian`]), homology of
//! planar Lefschetz fibrations and their boundaries ([`palf`]), and a small
//! forward-chaining engine that assembles those results with the cited
//! theorems into checkable certificates ([`certify`]).
//!
//! The guide in `book/` walks through each piece; its code listings are
//! compiled as doctests of this crate.

pub mod algebra;
pub mod casson;
pub mod certify;
pub mod knot;
pub mod legendrian;
pub mod palf;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/knots.md")]
    mod knots {}
    #[doc = include_str!("../../../book/src/casson.md")]
    mod casson {}
    #[doc = include_str!("../../../book/src/legendrian.md")]
    mod legendrian {}
    #[doc = include_str!("../../../book/src/palf.md")]
    mod palf {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// Integers as JSON numbers when they fit in an `i64`, strings otherwise.
pub(crate) fn serialize_int<S: serde::Serializer>(
    value: &num_bigint::BigInt,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    use num_traits::ToPrimitive;
    match value.to_i64() {
        Some(v) => serializer.serialize_i64(v),
        None => serializer.collect_str(value),
    }
}

pub(crate) fn serialize_ints<S: serde::Serializer>(
    values: &[num_bigint::BigInt],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Int<'a>(&'a num_bigint::BigInt);
    impl serde::Serialize for Int<'_> {
        fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize_int(self.0, s)
        }
    }
    let mut seq = serializer.serialize_seq(Some(values.len()))?;
    for v in values {
        seq.serialize_element(&Int(v))?;
    }
    seq.end()
}
