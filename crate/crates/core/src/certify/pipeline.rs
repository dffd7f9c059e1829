use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use super::engine::{Certificate, Closure, FactInput, Provenance};
use super::{Atom, CertifyError, RuleSet, Term};
use crate::casson::CassonResult;
use crate::legendrian::AdmissibilityCertificate;
use crate::palf::HomologyReport;

pub const ITEM_TITLES: [&str; 4] = [
    "the two Stein structures on W^n have the same Spin^c structure",
    "the induced contact structures are not isotopic (pi(c+) nonzero versus zero)",
    "the boundary has Casson invariant of magnitude 2n",
    "the boundary is irreducible",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateItem {
    pub title: &'static str,
    #[serde(serialize_with = "atoms_as_text")]
    pub atoms: Vec<Atom>,
    pub fact_ids: Vec<usize>,
}

fn atoms_as_text<S: serde::Serializer>(atoms: &[Atom], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(atoms.iter().map(ToString::to_string))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCertificate {
    pub n: u32,
    pub items: Vec<CertificateItem>,
    pub certificate: Certificate,
}

impl FamilyCertificate {
    pub fn to_text(&self) -> String {
        let mut out = format!("certificate for n = {}\n", self.n);
        for (k, item) in self.items.iter().enumerate() {
            writeln!(out, "item {}: {}", k + 1, item.title).unwrap();
            for (atom, id) in item.atoms.iter().zip(&item.fact_ids) {
                writeln!(out, "  F{id} {atom}").unwrap();
            }
        }
        out.push_str(&self.certificate.to_text());
        out
    }
}

struct Subjects {
    w: String,
    j1: String,
    j2: String,
    xi1: String,
    xi2: String,
    boundary: String,
}

impl Subjects {
    fn new(n: u32) -> Self {
        Self {
            w: format!("W^{n}"),
            j1: format!("J1^{n}"),
            j2: format!("J2^{n}"),
            xi1: format!("xi1^{n}"),
            xi2: format!("xi2^{n}"),
            boundary: format!("dW^{n}"),
        }
    }
}

fn atom(predicate: &str, args: &[&str]) -> Atom {
    Atom::new(predicate, args.iter().map(|a| Term::sym(*a)).collect())
}

fn gap(premise: &Atom, rule: &str, reason: String) -> CertifyError {
    CertifyError::PremiseGap {
        premise: premise.to_string(),
        rule: rule.into(),
        reason,
    }
}

/// Assembles the facts computed by the other modules for the member `W^n`
/// of the cork family and derives the four conclusions.
///
/// A computed premise that is false stops the pipeline with
/// [`CertifyError::PremiseGap`] naming the premise and the rule it feeds.
/// Facts that no module here can compute (the Stein structures, the
/// surgery description of the boundary, contractibility beyond homology)
/// enter as assertions and say so in the certificate.
pub fn cork_family_certificate(
    n: u32,
    palf: &HomologyReport,
    admissibility: &AdmissibilityCertificate,
    casson: &CassonResult,
) -> Result<FamilyCertificate, CertifyError> {
    let rules = RuleSet::bundled();
    let s = Subjects::new(n);
    let mut facts = Vec::new();

    let contractible = atom("is_contractible", &[&s.w]);
    if !palf.is_homology_ball || palf.euler != 1 {
        return Err(gap(
            &contractible,
            "R6",
            format!(
                "total space is not a homology ball (euler {}, H1 {:?}, b2 {})",
                palf.euler, palf.h1_total_space, palf.h2_rank
            ),
        ));
    }
    facts.push(FactInput::new(
        contractible,
        Provenance::asserted(
            "homology ball computed by palf.homology_report; trivial fundamental group taken from the handle picture",
        ),
    ));
    for j in [&s.j1, &s.j2] {
        facts.push(FactInput::new(
            atom("stein_structure_on", &[j, &s.w]),
            Provenance::asserted(format!("Stein handlebody structure on {}", s.w)),
        ));
    }

    let admissible = atom("admissible_link_filling", &[&s.j1]);
    if !admissibility.verdict {
        return Err(gap(
            &admissible,
            "R2",
            format!(
                "admissibility verdict false; failed condition(s): {}",
                admissibility.failed_conditions().join(", ")
            ),
        ));
    }
    facts.push(FactInput::new(
        admissible,
        Provenance::computed("legendrian", "check_admissibility"),
    ));

    let planar = atom("planar_palf_filling", &[&s.j2]);
    if !palf.is_palf {
        return Err(gap(
            &planar,
            "R7",
            "the monodromy word is not a product of positive essential twists".into(),
        ));
    }
    facts.push(FactInput::new(
        planar,
        Provenance::computed("palf", "is_palf"),
    ));
    for (j, xi) in [(&s.j1, &s.xi1), (&s.j2, &s.xi2)] {
        facts.push(FactInput::new(
            atom("induces", &[j, xi]),
            Provenance::asserted("contact structure induced on the boundary"),
        ));
    }

    let sphere = atom("homology_sphere", &[&s.boundary]);
    if !palf.boundary_is_homology_sphere {
        return Err(gap(
            &sphere,
            "R5",
            format!("boundary H1 has invariant factors {:?}", palf.boundary_h1),
        ));
    }
    facts.push(FactInput::new(
        sphere,
        Provenance::computed("palf", "boundary_homology"),
    ));
    facts.push(FactInput::new(
        Atom::new(
            "is_one_over_n_surgery",
            vec![Term::sym(s.boundary.as_str()), Term::int(n)],
        ),
        Provenance::asserted(format!("{} is 1/{n} surgery on the cork knot", s.boundary)),
    ));

    let expected = BigInt::from(2u32) * BigInt::from(n);
    let casson_atom = Atom::new(
        "casson_magnitude",
        vec![Term::sym(s.boundary.as_str()), Term::Int(expected.clone())],
    );
    if casson.magnitude() != expected {
        return Err(gap(
            &casson_atom,
            "item 3",
            format!(
                "computed |lambda| = {}, expected {expected}",
                casson.magnitude()
            ),
        ));
    }
    facts.push(FactInput::new(
        casson_atom.clone(),
        Provenance::computed("casson", "casson_magnitude"),
    ));

    let closure = Closure::compute(&rules, &facts)?;
    let groups: [Vec<Atom>; 4] = [
        vec![atom("spinc_equal", &[&s.j1, &s.j2])],
        vec![
            atom("pi_cplus_nonzero", &[&s.xi1]),
            atom("pi_cplus_zero", &[&s.xi2]),
            atom("cplus_distinct", &[&s.xi1, &s.xi2]),
            atom("not_isotopic", &[&s.xi1, &s.xi2]),
        ],
        vec![casson_atom],
        vec![atom("irreducible", &[&s.boundary])],
    ];
    let mut indices = Vec::new();
    for a in groups.iter().flatten() {
        let i = closure.lookup(a).ok_or_else(|| CertifyError::PremiseGap {
            premise: a.to_string(),
            rule: "-".into(),
            reason: "not derivable from the assembled facts".into(),
        })?;
        indices.push(i);
    }
    let certificate = closure.certificate(&indices);
    certificate.replay(&rules)?;

    let mut ids = certificate.conclusions.iter().copied();
    let items = groups
        .into_iter()
        .zip(ITEM_TITLES)
        .map(|(atoms, title)| CertificateItem {
            title,
            fact_ids: ids.by_ref().take(atoms.len()).collect(),
            atoms,
        })
        .collect();
    Ok(FamilyCertificate {
        n,
        items,
        certificate,
    })
}
