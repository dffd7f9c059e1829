use std::fmt::Write as _;

use corkkit::casson::{self, CassonResult, Convention, SurgeryDescription};
use corkkit::certify::{self, FamilyCertificate, RuleSet};
use corkkit::knot::{self, SeifertMatrix};
use corkkit::legendrian::{
    self, AdmissibilityCertificate, AdmissibilityInput, UnknottedAssertion, CONDITION_NAMES,
};
use corkkit::palf::{self, CurveTemplate, HomologyReport};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::scene::{require, Scene};
use crate::{CliError, Options, Output};

fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ints(v: &[num_bigint::BigInt]) -> String {
    if v.is_empty() {
        "0".into()
    } else {
        v.iter()
            .map(|d| {
                if d == &0.into() {
                    "Z".to_string()
                } else {
                    format!("Z/{d}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn alexander(scene: &Scene, opts: &Options) -> Result<Output, CliError> {
    let s = scene.seifert_matrix(opts.strict_seifert)?;
    let report = knot::knot_report(&s).map_err(compute)?;
    let rep = knot::positive_representative(&report.conway_normalized).map_err(compute)?;
    let mut human = String::new();
    writeln!(human, "det(S - tS^T)            {}", report.alexander_raw).unwrap();
    writeln!(
        human,
        "Conway normalized        {}",
        report.conway_normalized
    )
    .unwrap();
    writeln!(human, "positive representative  {rep}").unwrap();
    writeln!(
        human,
        "determinant |Δ(-1)|      {}",
        report.delta_at_minus_one
    )
    .unwrap();
    writeln!(
        human,
        "Δ''(1), normalized       {}",
        report.second_derivative_at_one_normalized
    )
    .unwrap();
    let mut machine = to_value(&report);
    machine["positive_representative"] = json!(rep.to_string());
    machine["strict"] = json!(s.is_strict());
    Ok(Output {
        human,
        machine: json!({ "alexander": machine }),
        failure: None,
    })
}

pub fn casson(scene: &Scene, opts: &Options) -> Result<Output, CliError> {
    let s = scene.seifert_matrix(opts.strict_seifert)?;
    let surgery = require(&scene.surgery, "surgery")?;
    if surgery.n.is_empty() {
        return Err(CliError::Schema("surgery.n: empty list".into()));
    }
    let report = knot::knot_report(&s).map_err(compute)?;
    let mut human = format!("convention: {}\n", opts.convention);
    let mut rows = Vec::new();
    for (i, &n) in surgery.n.iter().enumerate() {
        let desc = SurgeryDescription::from_report(report.clone(), n)
            .map_err(|e| CliError::Schema(format!("surgery.n[{i}]: {e}")))?;
        let r = casson::casson_one_over_n(&desc, opts.convention).map_err(compute)?;
        writeln!(
            human,
            "1/{n} surgery: lambda = {} (|lambda| = {})",
            r.lambda,
            r.magnitude()
        )
        .unwrap();
        let mut row = to_value(&r);
        row["n"] = json!(n);
        row["magnitude"] = to_value(casson_int(&r.magnitude()));
        rows.push(row);
    }
    Ok(Output {
        human,
        machine: json!({ "casson": rows }),
        failure: None,
    })
}

fn casson_int(v: &num_bigint::BigInt) -> Value {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

pub fn legendrian(scene: &Scene) -> Result<Output, CliError> {
    let front = scene.front()?;
    let tb = legendrian::thurston_bennequin(&front).map_err(compute)?;
    let rot = legendrian::rotation_number(&front).map_err(compute)?;
    let mut human = String::new();
    writeln!(
        human,
        "writhe {}  cusps {}  tb {tb}  rot {rot}",
        legendrian::writhe(&front),
        front.cusps()
    )
    .unwrap();
    writeln!(human, "Stein framing (tb - 1)  {}", tb - 1).unwrap();
    let mut stabs = Vec::new();
    for sign in [1i8, -1] {
        let g = legendrian::stabilize(&front, sign).map_err(compute)?;
        let (t, r) = (
            legendrian::thurston_bennequin(&g).map_err(compute)?,
            legendrian::rotation_number(&g).map_err(compute)?,
        );
        let framing = legendrian::contact_framing(&g).map_err(compute)?;
        writeln!(
            human,
            "stabilized ({sign:+}): tb {t}  rot {r}  framing {framing}"
        )
        .unwrap();
        stabs.push(json!({ "sign": sign, "tb": t, "rot": r, "framing": framing }));
    }
    let mut machine = json!({
        "front": front,
        "writhe": legendrian::writhe(&front),
        "tb": tb,
        "rot": rot,
        "framing": tb - 1,
        "stabilizations": stabs,
    });

    if let Some(census) = &scene.census {
        census
            .validate()
            .map_err(|e| CliError::Schema(format!("census: {e}")))?;
        if let [a, b] = census.components.as_slice() {
            let lk = knot::linking_number(census, a, b).map_err(compute)?;
            writeln!(human, "lk({a}, {b}) = {lk}").unwrap();
            machine["linking_number"] = json!(lk);
        }
    }
    if let Some(adm) = &scene.admissibility {
        let census = require(&scene.census, "census")?.clone();
        let mut unknotted = Vec::new();
        for k in 0..2 {
            let screen =
                match &adm.screens {
                    Some(m) => Some(SeifertMatrix::from_rows(&m[k], false).map_err(|e| {
                        CliError::Schema(format!("admissibility.screens[{k}]: {e}"))
                    })?),
                    None => None,
                };
            unknotted.push(UnknottedAssertion {
                asserted: adm.unknotted[k],
                screen,
            });
        }
        let input = AdmissibilityInput {
            unknotted: unknotted.try_into().expect("two components"),
            involution_asserted: adm.involution,
            census,
            tb_witness: front,
        };
        let cert = legendrian::check_admissibility(&input).map_err(compute)?;
        writeln!(human, "admissible: {}", yes(cert.verdict)).unwrap();
        for (name, status) in CONDITION_NAMES.iter().zip(&cert.conditions) {
            writeln!(
                human,
                "  {name}: {}",
                to_value(status).as_str().unwrap_or("?")
            )
            .unwrap();
        }
        machine["admissibility"] = to_value(&cert);
    }
    Ok(Output {
        human,
        machine: json!({ "legendrian": machine }),
        failure: None,
    })
}

fn homology_lines(out: &mut String, r: &HomologyReport) {
    let rows = [
        ("euler characteristic", r.euler.to_string()),
        ("H1(total space)", ints(&r.h1_total_space)),
        ("rank H2(total space)", r.h2_rank.to_string()),
        ("homology ball", yes(r.is_homology_ball).into()),
        ("H1(boundary)", ints(&r.boundary_h1)),
        (
            "boundary homology sphere",
            yes(r.boundary_is_homology_sphere).into(),
        ),
        ("positive allowable", yes(r.is_palf).into()),
    ];
    for (label, value) in rows {
        writeln!(out, "{label:<26}{value}").unwrap();
    }
}

pub fn palf(scene: &Scene) -> Result<Output, CliError> {
    let p = scene.palf()?;
    let r = palf::homology_report(&p).map_err(compute)?;
    let mut human = String::new();
    homology_lines(&mut human, &r);
    Ok(Output {
        human,
        machine: json!({ "palf": r }),
        failure: None,
    })
}

fn template(opts: &Options) -> Result<CurveTemplate, CliError> {
    match &opts.wn_curves {
        None => Ok(CurveTemplate::bundled()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Schema(format!("--wn-curves `{}`: {e}", path.display())))?;
            CurveTemplate::from_json(&text)
                .map_err(|e| CliError::Schema(format!("--wn-curves: {e}")))
        }
    }
}

/// Everything computed for one member of the family.
#[derive(Serialize)]
struct Member {
    n: u32,
    palf: HomologyReport,
    tb: i64,
    admissibility: AdmissibilityCertificate,
    casson_conway: CassonResult,
    casson_positive: CassonResult,
    certificate: FamilyCertificate,
}

fn member(n: u32, t: &CurveTemplate, convention: Convention) -> Result<Member, CliError> {
    let fail = |e: &dyn std::fmt::Display| CliError::Compute(format!("n = {n}: {e}"));
    let p = palf::wn_family_from(t, n).map_err(|e| fail(&e))?;
    let report = palf::homology_report(&p).map_err(|e| fail(&e))?;
    let tb = legendrian::thurston_bennequin(&legendrian::cork_front(n)).map_err(|e| fail(&e))?;
    let admissibility =
        legendrian::check_admissibility(&AdmissibilityInput::cork_link(n)).map_err(|e| fail(&e))?;
    let desc =
        SurgeryDescription::new(knot::cork_knot_seifert(), i64::from(n)).map_err(|e| fail(&e))?;
    let casson_conway =
        casson::casson_one_over_n(&desc, Convention::ConwayNormalized).map_err(|e| fail(&e))?;
    let casson_positive = casson::casson_one_over_n(&desc, Convention::PositiveRepresentative)
        .map_err(|e| fail(&e))?;
    let chosen = match convention {
        Convention::ConwayNormalized => &casson_conway,
        Convention::PositiveRepresentative => &casson_positive,
    };
    let certificate = certify::cork_family_certificate(n, &report, &admissibility, chosen)
        .map_err(|e| fail(&e))?;
    Ok(Member {
        n,
        palf: report,
        tb,
        admissibility,
        casson_conway,
        casson_positive,
        certificate,
    })
}

pub fn family(scene: &Scene, opts: &Options) -> Result<Output, CliError> {
    let range = require(&scene.family, "family")?;
    if range.n_min < 1 || range.n_min > range.n_max {
        return Err(CliError::Schema(format!(
            "family: need 1 <= n_min <= n_max, got {}..{}",
            range.n_min, range.n_max
        )));
    }
    let t = template(opts)?;
    let members: Vec<Member> = (range.n_min..=range.n_max)
        .into_par_iter()
        .map(|n| member(n, &t, opts.convention))
        .collect::<Result<_, _>>()?;
    let mut human = String::new();
    for m in &members {
        writeln!(human, "== W^{} ==", m.n).unwrap();
        homology_lines(&mut human, &m.palf);
        writeln!(human, "{:<26}{}", "tb of the 2-handle front", m.tb).unwrap();
        writeln!(
            human,
            "{:<26}{}",
            "admissible",
            yes(m.admissibility.verdict)
        )
        .unwrap();
        writeln!(
            human,
            "Casson lambda             {} (conway_normalized), {} (paper_representative)",
            m.casson_conway.lambda, m.casson_positive.lambda
        )
        .unwrap();
        human.push_str(&m.certificate.to_text());
        human.push('\n');
    }
    Ok(Output {
        human,
        machine: json!({ "family": members }),
        failure: None,
    })
}

pub fn certify(scene: &Scene) -> Result<Output, CliError> {
    let section = require(&scene.certify, "certify")?;
    let rules = RuleSet::bundled();
    let cert = certify::derive(&rules, &section.facts).map_err(|e| match e {
        certify::CertifyError::Contradiction(..) => compute(e),
        other => CliError::Schema(format!("certify.facts: {other}")),
    })?;
    Ok(Output {
        human: cert.to_text(),
        machine: json!({ "certify": cert }),
        failure: None,
    })
}

#[derive(Serialize)]
struct LedgerRow {
    n: u32,
    euler: Option<i64>,
    homology_ball: Option<bool>,
    boundary_sphere: Option<bool>,
    tb: Option<i64>,
    lambda_conway: Option<Value>,
    lambda_paper: Option<Value>,
    certificate: String,
}

pub fn ledger(n_max: u32, opts: &Options) -> Result<Output, CliError> {
    if n_max < 1 {
        return Err(CliError::Schema("--n-max: must be at least 1".into()));
    }
    let t = template(opts)?;
    let rows: Vec<LedgerRow> = (1..=n_max)
        .into_par_iter()
        .map(|n| match member(n, &t, opts.convention) {
            Ok(m) => LedgerRow {
                n,
                euler: Some(m.palf.euler),
                homology_ball: Some(m.palf.is_homology_ball),
                boundary_sphere: Some(m.palf.boundary_is_homology_sphere),
                tb: Some(m.tb),
                lambda_conway: Some(casson_int(&m.casson_conway.lambda)),
                lambda_paper: Some(casson_int(&m.casson_positive.lambda)),
                certificate: format!(
                    "ok ({} items, {} facts)",
                    m.certificate.items.len(),
                    m.certificate.certificate.facts.len()
                ),
            },
            Err(e) => LedgerRow {
                n,
                euler: None,
                homology_ball: None,
                boundary_sphere: None,
                tb: None,
                lambda_conway: None,
                lambda_paper: None,
                certificate: format!("failed: {e}"),
            },
        })
        .collect();

    let show = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let mut human = format!(
        "{:>4} {:>4} {:>5} {:>7} {:>4} {:>15} {:>14}  certificate\n",
        "n", "chi", "ball", "sphere", "tb", "lambda(conway)", "lambda(paper)"
    );
    for r in &rows {
        writeln!(
            human,
            "{:>4} {:>4} {:>5} {:>7} {:>4} {:>15} {:>14}  {}",
            r.n,
            show(r.euler.map(|x| x.to_string())),
            show(r.homology_ball.map(|b| yes(b).to_string())),
            show(r.boundary_sphere.map(|b| yes(b).to_string())),
            show(r.tb.map(|x| x.to_string())),
            show(r.lambda_conway.as_ref().map(Value::to_string)),
            show(r.lambda_paper.as_ref().map(Value::to_string)),
            r.certificate
        )
        .unwrap();
    }
    let failed: Vec<u32> = rows
        .iter()
        .filter(|r| r.euler.is_none())
        .map(|r| r.n)
        .collect();
    let failure = (!failed.is_empty())
        .then(|| CliError::Compute(format!("ledger rows failed for n = {failed:?}")));
    Ok(Output {
        human,
        machine: json!({ "ledger": rows }),
        failure,
    })
}
