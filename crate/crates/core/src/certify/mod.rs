//! Forward-chaining certificates.
//!
//! Facts are ground atoms such as `pi_cplus_zero(xi2^1)`; rules are Horn
//! clauses loaded from a declarative table (bundled in `data/rules.json`),
//! each carrying the citation of the theorem it encodes. [`derive`] runs
//! the rules to a fixpoint and returns a [`Certificate`] whose derived
//! facts record the rule and parent facts they came from. Floer-theoretic
//! statements appear only as predicate names; nothing here computes them.

mod atom;
mod engine;
mod pipeline;

pub use atom::{Atom, Pattern, PatternTerm, Term};
pub use engine::{derive, Certificate, CertifiedFact, FactInput, Provenance, TraceNode};
pub use pipeline::{cork_family_certificate, CertificateItem, FamilyCertificate, ITEM_TITLES};

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("cannot parse atom `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{predicate}` takes {expected} arguments, got {got}")]
    Arity {
        predicate: String,
        expected: usize,
        got: usize,
    },
    #[error("rule {rule}: {reason}")]
    BadRule { rule: String, reason: String },
    #[error("rule table: {0}")]
    Table(String),
    #[error("input fact `{0}` claims a derived provenance")]
    DerivedInput(String),
    #[error("contradiction: both `{0}` and `{1}` hold")]
    Contradiction(String, String),
    #[error("premise `{premise}` missing for rule {rule}: {reason}")]
    PremiseGap {
        premise: String,
        rule: String,
        reason: String,
    },
    #[error("trace replay failed at fact {fact}: {reason}")]
    Replay { fact: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub premises: Vec<Pattern>,
    pub conclusion: Pattern,
    /// Variable pairs that must bind to different terms.
    pub distinct: Vec<(String, String)>,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub predicates: BTreeMap<String, usize>,
    pub contradictions: Vec<(String, String)>,
    pub rules: Vec<Rule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    id: String,
    premises: Vec<String>,
    conclusion: String,
    #[serde(default)]
    distinct: Vec<(String, String)>,
    citation: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    predicates: BTreeMap<String, usize>,
    #[serde(default)]
    contradictions: Vec<(String, String)>,
    rules: Vec<RawRule>,
}

const BUNDLED_RULES: &str = include_str!("../../data/rules.json");

impl RuleSet {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_RULES).expect("bundled rule table is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, CertifyError> {
        let raw: RawTable =
            serde_json::from_str(text).map_err(|e| CertifyError::Table(e.to_string()))?;
        let mut set = RuleSet {
            predicates: raw.predicates,
            contradictions: raw.contradictions,
            rules: Vec::new(),
        };
        for (a, b) in &set.contradictions {
            for p in [a, b] {
                if !set.predicates.contains_key(p) {
                    return Err(CertifyError::UnknownPredicate(p.clone()));
                }
            }
        }
        let mut ids = BTreeSet::new();
        for r in raw.rules {
            let bad = |reason: &str| CertifyError::BadRule {
                rule: r.id.clone(),
                reason: reason.to_string(),
            };
            if !ids.insert(r.id.clone()) {
                return Err(bad("duplicate rule id"));
            }
            if r.citation.trim().is_empty() {
                return Err(bad("citation is empty"));
            }
            if r.premises.is_empty() {
                return Err(bad("rule has no premises"));
            }
            let premises = r
                .premises
                .iter()
                .map(|p| Pattern::parse(p))
                .collect::<Result<Vec<_>, _>>()?;
            let conclusion = Pattern::parse(&r.conclusion)?;
            for p in premises.iter().chain([&conclusion]) {
                set.check_arity(&p.predicate, p.args.len())?;
            }
            let bound: BTreeSet<&str> = premises.iter().flat_map(Pattern::variables).collect();
            if let Some(v) = conclusion.variables().find(|v| !bound.contains(v)) {
                return Err(bad(&format!(
                    "conclusion variable {v} is not bound by a premise"
                )));
            }
            if let Some((a, b)) = r
                .distinct
                .iter()
                .find(|(a, b)| !bound.contains(a.as_str()) || !bound.contains(b.as_str()))
            {
                return Err(bad(&format!(
                    "distinct pair ({a}, {b}) names an unbound variable"
                )));
            }
            set.rules.push(Rule {
                id: r.id,
                premises,
                conclusion,
                distinct: r.distinct,
                citation: r.citation,
            });
        }
        Ok(set)
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub(crate) fn check_arity(&self, predicate: &str, got: usize) -> Result<(), CertifyError> {
        match self.predicates.get(predicate) {
            None => Err(CertifyError::UnknownPredicate(predicate.to_string())),
            Some(&expected) if expected != got => Err(CertifyError::Arity {
                predicate: predicate.to_string(),
                expected,
                got,
            }),
            Some(_) => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_loads() {
        let rules = RuleSet::bundled();
        assert_eq!(rules.rules.len(), 8);
        assert!(rules
            .rules
            .iter()
            .all(|r| !r.citation.is_empty() && !r.premises.is_empty()));
        assert!(rules.rule("R5").is_some());
    }

    #[test]
    fn table_validation() {
        let table =
            |rule: &str| format!(r#"{{"predicates": {{"p": 1, "q": 2}}, "rules": [{rule}]}}"#);
        let err = |rule: &str| RuleSet::from_json(&table(rule)).unwrap_err();
        assert!(matches!(
            err(r#"{"id": "A", "premises": [], "conclusion": "p(X)", "citation": "c"}"#),
            CertifyError::BadRule { .. }
        ));
        assert!(matches!(
            err(r#"{"id": "A", "premises": ["p(X)"], "conclusion": "p(X)", "citation": " "}"#),
            CertifyError::BadRule { .. }
        ));
        assert!(matches!(
            err(r#"{"id": "A", "premises": ["p(X)"], "conclusion": "q(X, Y)", "citation": "c"}"#),
            CertifyError::BadRule { .. }
        ));
        assert!(matches!(
            err(r#"{"id": "A", "premises": ["p(X, Y)"], "conclusion": "p(X)", "citation": "c"}"#),
            CertifyError::Arity { .. }
        ));
        assert!(matches!(
            err(r#"{"id": "A", "premises": ["r(X)"], "conclusion": "p(X)", "citation": "c"}"#),
            CertifyError::UnknownPredicate(_)
        ));
        assert!(RuleSet::from_json(&table(
            r#"{"id": "A", "premises": ["q(X, Y)"], "conclusion": "p(X)", "distinct": [["X", "Y"]], "citation": "c"}"#
        ))
        .is_ok());
        assert!(matches!(
            RuleSet::from_json("[]"),
            Err(CertifyError::Table(_))
        ));
    }
}
