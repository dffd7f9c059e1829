use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::atom::Bindings;
use super::{Atom, CertifyError, Rule, RuleSet, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Computed {
        module: String,
        operation: String,
    },
    Asserted {
        #[serde(skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Derived {
        rule: String,
        citation: String,
        parents: Vec<usize>,
    },
}

impl Provenance {
    pub fn computed(module: &str, operation: &str) -> Self {
        Provenance::Computed {
            module: module.into(),
            operation: operation.into(),
        }
    }

    pub fn asserted(note: impl Into<String>) -> Self {
        Provenance::Asserted {
            note: Some(note.into()),
        }
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self, Provenance::Derived { .. })
    }
}

/// A leaf fact handed to [`derive`].
///
/// JSON form: `{"atom": "homology_sphere(Y)", "computed": "palf.boundary_homology"}`;
/// without `computed` the fact counts as asserted, with an optional `note`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(try_from = "RawFact")]
pub struct FactInput {
    pub atom: Atom,
    pub provenance: Provenance,
}

impl FactInput {
    pub fn new(atom: Atom, provenance: Provenance) -> Self {
        Self { atom, provenance }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFact {
    atom: String,
    #[serde(default)]
    computed: Option<String>,
    #[serde(default)]
    note: Option<String>,
}

impl TryFrom<RawFact> for FactInput {
    type Error = CertifyError;

    fn try_from(raw: RawFact) -> Result<Self, CertifyError> {
        let atom = Atom::parse(&raw.atom)?;
        let provenance = match raw.computed {
            Some(c) => {
                let (module, operation) = c.split_once('.').ok_or_else(|| CertifyError::Parse {
                    text: c.clone(),
                    reason: "expected `module.operation`".into(),
                })?;
                Provenance::computed(module, operation)
            }
            None => Provenance::Asserted { note: raw.note },
        };
        Ok(Self { atom, provenance })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifiedFact {
    pub id: usize,
    #[serde(serialize_with = "crate::serialize_display")]
    pub atom: Atom,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceNode {
    pub id: usize,
    pub children: Vec<TraceNode>,
}

/// Derivation DAG restricted to what the conclusions depend on. Fact ids
/// are 1-based and every parent id is smaller than its child's, so the
/// list order is a topological order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub facts: Vec<CertifiedFact>,
    pub conclusions: Vec<usize>,
    /// Forward-chaining rounds that added at least one fact.
    pub rounds: usize,
    /// Upper bound on the rounds: the number of ground atoms over the
    /// input terms.
    pub round_bound: usize,
}

impl Certificate {
    pub fn is_empty(&self) -> bool {
        self.conclusions.is_empty()
    }

    pub fn fact(&self, id: usize) -> Option<&CertifiedFact> {
        id.checked_sub(1).and_then(|i| self.facts.get(i))
    }

    pub fn find(&self, atom: &Atom) -> Option<&CertifiedFact> {
        self.facts.iter().find(|f| &f.atom == atom)
    }

    pub fn conclusion_atoms(&self) -> BTreeSet<Atom> {
        self.conclusions
            .iter()
            .filter_map(|&id| self.fact(id))
            .map(|f| f.atom.clone())
            .collect()
    }

    pub fn trace(&self, id: usize) -> Option<TraceNode> {
        let fact = self.fact(id)?;
        let children = match &fact.provenance {
            Provenance::Derived { parents, .. } => parents
                .iter()
                .map(|&p| self.trace(p))
                .collect::<Option<Vec<_>>>()?,
            _ => Vec::new(),
        };
        Some(TraceNode { id, children })
    }

    /// Re-applies every recorded rule to its recorded parents and checks
    /// that it yields exactly the recorded fact.
    pub fn replay(&self, rules: &RuleSet) -> Result<(), CertifyError> {
        for (pos, fact) in self.facts.iter().enumerate() {
            let fail = |reason: String| CertifyError::Replay {
                fact: fact.id,
                reason,
            };
            if fact.id != pos + 1 {
                return Err(fail(format!("out of order at position {}", pos + 1)));
            }
            rules.check_arity(&fact.atom.predicate, fact.atom.args.len())?;
            let Provenance::Derived { rule, parents, .. } = &fact.provenance else {
                continue;
            };
            let rule = rules
                .rule(rule)
                .ok_or_else(|| fail(format!("unknown rule {rule}")))?;
            if parents.len() != rule.premises.len() {
                return Err(fail(format!(
                    "{} parents for {} premises",
                    parents.len(),
                    rule.premises.len()
                )));
            }
            let mut b = Bindings::new();
            for (premise, &parent) in rule.premises.iter().zip(parents) {
                if parent >= fact.id {
                    return Err(fail(format!("parent F{parent} is not older")));
                }
                let atom = &self
                    .fact(parent)
                    .ok_or_else(|| fail(format!("missing F{parent}")))?
                    .atom;
                b = premise
                    .unify(atom, &b)
                    .ok_or_else(|| fail(format!("F{parent} does not match its premise")))?;
            }
            if !distinct_ok(rule, &b) {
                return Err(fail("distinct constraint violated".into()));
            }
            if rule.conclusion.instantiate(&b).as_ref() != Some(&fact.atom) {
                return Err(fail("rule does not produce this atom".into()));
            }
        }
        for &c in &self.conclusions {
            if self.fact(c).is_none() {
                return Err(CertifyError::Replay {
                    fact: c,
                    reason: "conclusion not in the fact list".into(),
                });
            }
        }
        Ok(())
    }

    /// One block per fact, in id order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let ids = |xs: &[usize]| {
            xs.iter()
                .map(|x| format!("F{x}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        writeln!(out, "conclusions: {}", ids(&self.conclusions)).unwrap();
        writeln!(out, "rounds: {} (bound {})", self.rounds, self.round_bound).unwrap();
        for f in &self.facts {
            writeln!(out, "fact F{}", f.id).unwrap();
            writeln!(out, "  atom: {}", f.atom).unwrap();
            match &f.provenance {
                Provenance::Computed { module, operation } => {
                    writeln!(out, "  provenance: computed({module}, {operation})").unwrap()
                }
                Provenance::Asserted { note } => {
                    writeln!(out, "  provenance: asserted").unwrap();
                    if let Some(n) = note {
                        writeln!(out, "  note: {n}").unwrap();
                    }
                }
                Provenance::Derived {
                    rule,
                    citation,
                    parents,
                } => {
                    writeln!(out, "  rule: {rule}").unwrap();
                    writeln!(out, "  citation: {citation}").unwrap();
                    writeln!(out, "  parents: {}", ids(parents)).unwrap();
                }
            }
        }
        out
    }
}

fn distinct_ok(rule: &Rule, b: &Bindings) -> bool {
    rule.distinct.iter().all(|(x, y)| b.get(x) != b.get(y))
}

/// Fixpoint of the rules over the input facts, before pruning.
pub(crate) struct Closure {
    /// `(atom, provenance)` with parents as indices into this list.
    entries: Vec<(Atom, Provenance)>,
    index: BTreeMap<Atom, usize>,
    first_derived: usize,
    rounds: usize,
    round_bound: usize,
}

impl Closure {
    pub(crate) fn compute(rules: &RuleSet, inputs: &[FactInput]) -> Result<Self, CertifyError> {
        let mut sorted: Vec<&FactInput> = inputs.iter().collect();
        for f in &sorted {
            rules.check_arity(&f.atom.predicate, f.atom.args.len())?;
            if !f.provenance.is_leaf() {
                return Err(CertifyError::DerivedInput(f.atom.to_string()));
            }
        }
        sorted.sort_by(|a, b| {
            a.atom
                .cmp(&b.atom)
                .then_with(|| format!("{:?}", a.provenance).cmp(&format!("{:?}", b.provenance)))
        });

        let mut c = Closure {
            entries: Vec::new(),
            index: BTreeMap::new(),
            first_derived: 0,
            rounds: 0,
            round_bound: 0,
        };
        for f in sorted {
            if !c.index.contains_key(&f.atom) {
                c.index.insert(f.atom.clone(), c.entries.len());
                c.entries.push((f.atom.clone(), f.provenance.clone()));
            }
        }
        c.first_derived = c.entries.len();

        let terms: BTreeSet<&Term> = c.entries.iter().flat_map(|(a, _)| &a.args).collect();
        c.round_bound = rules
            .predicates
            .values()
            .map(|&arity| terms.len().saturating_pow(arity as u32))
            .fold(0usize, usize::saturating_add);

        loop {
            let mut fresh: Vec<(Atom, Provenance)> = Vec::new();
            let mut fresh_atoms = BTreeSet::new();
            let by_predicate = c.by_predicate();
            for rule in &rules.rules {
                let mut matches = Vec::new();
                c.join(
                    rule,
                    0,
                    &Bindings::new(),
                    &mut Vec::new(),
                    &by_predicate,
                    &mut matches,
                );
                for (b, parents) in matches {
                    if !distinct_ok(rule, &b) {
                        continue;
                    }
                    let atom = rule
                        .conclusion
                        .instantiate(&b)
                        .expect("conclusion variables are bound by premises");
                    if c.index.contains_key(&atom) || !fresh_atoms.insert(atom.clone()) {
                        continue;
                    }
                    fresh.push((
                        atom,
                        Provenance::Derived {
                            rule: rule.id.clone(),
                            citation: rule.citation.clone(),
                            parents,
                        },
                    ));
                }
            }
            if fresh.is_empty() {
                break;
            }
            c.rounds += 1;
            assert!(
                c.rounds <= c.round_bound,
                "forward chaining exceeded its bound"
            );
            for (atom, prov) in fresh {
                c.index.insert(atom.clone(), c.entries.len());
                c.entries.push((atom, prov));
            }
        }

        for (p, q) in &rules.contradictions {
            for (atom, _) in &c.entries {
                if &atom.predicate != p {
                    continue;
                }
                let twin = Atom::new(q.clone(), atom.args.clone());
                if c.index.contains_key(&twin) {
                    return Err(CertifyError::Contradiction(
                        atom.to_string(),
                        twin.to_string(),
                    ));
                }
            }
        }
        Ok(c)
    }

    fn by_predicate(&self) -> BTreeMap<&str, Vec<usize>> {
        let mut m: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, (a, _)) in self.entries.iter().enumerate() {
            m.entry(a.predicate.as_str()).or_default().push(i);
        }
        m
    }

    fn join(
        &self,
        rule: &Rule,
        k: usize,
        b: &Bindings,
        parents: &mut Vec<usize>,
        by_predicate: &BTreeMap<&str, Vec<usize>>,
        out: &mut Vec<(Bindings, Vec<usize>)>,
    ) {
        let Some(premise) = rule.premises.get(k) else {
            out.push((b.clone(), parents.clone()));
            return;
        };
        let Some(candidates) = by_predicate.get(premise.predicate.as_str()) else {
            return;
        };
        for &i in candidates {
            if let Some(next) = premise.unify(&self.entries[i].0, b) {
                parents.push(i);
                self.join(rule, k + 1, &next, parents, by_predicate, out);
                parents.pop();
            }
        }
    }

    pub(crate) fn lookup(&self, atom: &Atom) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub(crate) fn derived(&self) -> Vec<usize> {
        (self.first_derived..self.entries.len()).collect()
    }

    /// Keeps what `conclusions` depend on and renumbers from 1.
    pub(crate) fn certificate(&self, conclusions: &[usize]) -> Certificate {
        let mut keep = BTreeSet::new();
        let mut stack: Vec<usize> = conclusions.to_vec();
        while let Some(i) = stack.pop() {
            if keep.insert(i) {
                if let Provenance::Derived { parents, .. } = &self.entries[i].1 {
                    stack.extend(parents);
                }
            }
        }
        let new_id: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(n, &i)| (i, n + 1)).collect();
        let facts = keep
            .iter()
            .map(|&i| {
                let (atom, prov) = &self.entries[i];
                let provenance = match prov {
                    Provenance::Derived {
                        rule,
                        citation,
                        parents,
                    } => Provenance::Derived {
                        rule: rule.clone(),
                        citation: citation.clone(),
                        parents: parents.iter().map(|p| new_id[p]).collect(),
                    },
                    other => other.clone(),
                };
                CertifiedFact {
                    id: new_id[&i],
                    atom: atom.clone(),
                    provenance,
                }
            })
            .collect();
        Certificate {
            facts,
            conclusions: conclusions.iter().map(|c| new_id[c]).collect(),
            rounds: self.rounds,
            round_bound: self.round_bound,
        }
    }
}

/// Runs `rules` to a fixpoint over `facts`. Every derived fact is a
/// conclusion of the returned certificate. Contradictory closures are
/// reported as errors and produce no certificate.
pub fn derive(rules: &RuleSet, facts: &[FactInput]) -> Result<Certificate, CertifyError> {
    let closure = Closure::compute(rules, facts)?;
    Ok(closure.certificate(&closure.derived()))
}
