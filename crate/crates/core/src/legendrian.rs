//! Legendrian front censuses and the admissibility check for two-component
//! links whose dotted/2-handle diagram yields a Stein cork.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::knot::{self, CrossingCensus, KnotError, SeifertMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LegendrianError {
    #[error("front needs an even number of cusps, at least two (got {up} up, {down} down)")]
    BadCuspCount { up: u64, down: u64 },
    #[error("stabilization sign must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("admissibility needs a census with exactly two components, got {0}")]
    NotTwoComponents(usize),
    #[error(transparent)]
    Knot(#[from] KnotError),
}

/// Crossing and cusp counts of a Legendrian front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontDiagram {
    #[serde(rename = "pos")]
    pub positive_crossings: u64,
    #[serde(rename = "neg")]
    pub negative_crossings: u64,
    #[serde(rename = "up")]
    pub up_cusps: u64,
    #[serde(rename = "down")]
    pub down_cusps: u64,
}

impl FrontDiagram {
    pub fn new(pos: u64, neg: u64, up: u64, down: u64) -> Result<Self, LegendrianError> {
        let f = Self {
            positive_crossings: pos,
            negative_crossings: neg,
            up_cusps: up,
            down_cusps: down,
        };
        f.validate()?;
        Ok(f)
    }

    /// Standard Legendrian unknot: one cusp of each kind.
    pub fn unknot() -> Self {
        Self::new(0, 0, 1, 1).unwrap()
    }

    pub fn validate(&self) -> Result<(), LegendrianError> {
        let total = self.up_cusps + self.down_cusps;
        // an even total forces up and down to share parity
        if total < 2 || !total.is_multiple_of(2) {
            return Err(LegendrianError::BadCuspCount {
                up: self.up_cusps,
                down: self.down_cusps,
            });
        }
        Ok(())
    }

    pub fn cusps(&self) -> u64 {
        self.up_cusps + self.down_cusps
    }
}

pub fn writhe(f: &FrontDiagram) -> i64 {
    f.positive_crossings as i64 - f.negative_crossings as i64
}

/// `writhe - cusps/2`.
pub fn thurston_bennequin(f: &FrontDiagram) -> Result<i64, LegendrianError> {
    f.validate()?;
    Ok(writhe(f) - (f.cusps() / 2) as i64)
}

/// `(down - up) / 2`.
pub fn rotation_number(f: &FrontDiagram) -> Result<i64, LegendrianError> {
    f.validate()?;
    Ok((f.down_cusps as i64 - f.up_cusps as i64) / 2)
}

/// Adds a zig-zag: two down cusps for `+1`, two up cusps for `-1`.
pub fn stabilize(f: &FrontDiagram, sign: i8) -> Result<FrontDiagram, LegendrianError> {
    f.validate()?;
    let mut g = *f;
    match sign {
        1 => g.down_cusps += 2,
        -1 => g.up_cusps += 2,
        s => return Err(LegendrianError::BadSign(s)),
    }
    Ok(g)
}

/// Framing of a Stein 2-handle attached along the front: `tb - 1`.
pub fn contact_framing(f: &FrontDiagram) -> Result<i64, LegendrianError> {
    Ok(thurston_bennequin(f)? - 1)
}

/// Front of the 2-handle attaching circle of the `n`-th cork drawn in
/// `S¹×S²`: `2n + 1` positive crossings and `4n - 2` cusps.
///
/// The split of cusps into up and down is not determined by the counts
/// used here; this front has rotation number one.
pub fn cork_front(n: u32) -> FrontDiagram {
    assert!(n >= 1, "cork family starts at n = 1");
    let n = u64::from(n);
    FrontDiagram::new(2 * n + 1, 0, 2 * n - 2, 2 * n).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    ComputedPass,
    Asserted,
    ScreenPassed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknottedAssertion {
    pub asserted: bool,
    /// Optional Seifert matrix for the Alexander screen.
    pub screen: Option<SeifertMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityInput {
    pub unknotted: [UnknottedAssertion; 2],
    pub involution_asserted: bool,
    pub census: CrossingCensus,
    pub tb_witness: FrontDiagram,
}

impl AdmissibilityInput {
    /// The inputs for `L^n`: unknottedness and the exchanging involution
    /// asserted, with the trivial Alexander screen on each component.
    pub fn cork_link(n: u32) -> Self {
        let screened = || UnknottedAssertion {
            asserted: true,
            screen: Some(SeifertMatrix::unknot()),
        };
        Self {
            unknotted: [screened(), screened()],
            involution_asserted: true,
            census: knot::cork_link_census(n),
            tb_witness: cork_front(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityCertificate {
    pub verdict: bool,
    /// Status of the four conditions: unknotted components, exchanging
    /// involution, linking number ±1, tb witness at least one.
    pub conditions: [ConditionStatus; 4],
    pub linking_number: i64,
    pub tb_achieved: i64,
}

pub const CONDITION_NAMES: [&str; 4] = [
    "components unknotted",
    "involution exchanges components",
    "linking number is +-1",
    "tb witness at least +1",
];

impl AdmissibilityCertificate {
    pub fn failed_conditions(&self) -> Vec<&'static str> {
        self.conditions
            .iter()
            .zip(CONDITION_NAMES)
            .filter(|(s, _)| **s == ConditionStatus::Failed)
            .map(|(_, n)| n)
            .collect()
    }
}

pub fn check_admissibility(
    input: &AdmissibilityInput,
) -> Result<AdmissibilityCertificate, LegendrianError> {
    input.census.validate()?;
    let [k1, k2] = match input.census.components.as_slice() {
        [a, b] => [a.as_str(), b.as_str()],
        other => return Err(LegendrianError::NotTwoComponents(other.len())),
    };

    let unknotted = if input.unknotted.iter().any(|u| !u.asserted) {
        ConditionStatus::Failed
    } else {
        let mut screens = Vec::new();
        for u in &input.unknotted {
            if let Some(s) = &u.screen {
                screens.push(knot::alexander_screen(s)?);
            }
        }
        if screens.contains(&false) {
            ConditionStatus::Failed
        } else if screens.len() == input.unknotted.len() {
            ConditionStatus::ScreenPassed
        } else {
            ConditionStatus::Asserted
        }
    };
    let involution = if input.involution_asserted {
        ConditionStatus::Asserted
    } else {
        ConditionStatus::Failed
    };
    let lk = knot::linking_number(&input.census, k1, k2)?;
    let linking = if lk.abs() == 1 {
        ConditionStatus::ComputedPass
    } else {
        ConditionStatus::Failed
    };
    let tb = thurston_bennequin(&input.tb_witness)?;
    let tb_status = if tb >= 1 {
        ConditionStatus::ComputedPass
    } else {
        ConditionStatus::Failed
    };
    let conditions = [unknotted, involution, linking, tb_status];
    Ok(AdmissibilityCertificate {
        verdict: !conditions.contains(&ConditionStatus::Failed),
        conditions,
        linking_number: lk,
        tb_achieved: tb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::Crossing;
    use proptest::prelude::*;

    #[test]
    fn writhe_examples() {
        assert_eq!(writhe(&FrontDiagram::unknot()), 0);
        for n in 1..6 {
            assert_eq!(writhe(&cork_front(n)), 2 * n as i64 + 1);
        }
        assert_eq!(writhe(&FrontDiagram::new(3, 1, 1, 1).unwrap()), 2);
    }

    #[test]
    fn tb_examples() {
        assert_eq!(thurston_bennequin(&FrontDiagram::unknot()).unwrap(), -1);
        for n in 1..=50 {
            let f = cork_front(n);
            assert_eq!(f.cusps() / 2, 2 * n as u64 - 1);
            assert_eq!(thurston_bennequin(&f).unwrap(), 2);
        }
        assert_eq!(
            thurston_bennequin(&FrontDiagram::new(3, 0, 0, 2).unwrap()).unwrap(),
            2
        );
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(
            rotation_number(&FrontDiagram::new(4, 0, 1, 1).unwrap()).unwrap(),
            0
        );
        assert_eq!(
            rotation_number(&FrontDiagram::new(0, 0, 0, 2).unwrap()).unwrap(),
            1
        );
        let f = cork_front(2);
        let r = rotation_number(&f).unwrap();
        assert_eq!(rotation_number(&stabilize(&f, 1).unwrap()).unwrap(), r + 1);
        assert_eq!(rotation_number(&stabilize(&f, -1).unwrap()).unwrap(), r - 1);
    }

    #[test]
    fn stabilization_examples() {
        let s = stabilize(&FrontDiagram::unknot(), 1).unwrap();
        assert_eq!(s, FrontDiagram::new(0, 0, 1, 3).unwrap());
        assert_eq!(thurston_bennequin(&s).unwrap(), -2);
        assert_eq!(rotation_number(&s).unwrap(), 1);

        let once = stabilize(&cork_front(1), 1).unwrap();
        assert_eq!(thurston_bennequin(&once).unwrap(), 1);
        assert_eq!(contact_framing(&once).unwrap(), 0);

        let twice = stabilize(&stabilize(&FrontDiagram::unknot(), 1).unwrap(), -1).unwrap();
        assert_eq!(thurston_bennequin(&twice).unwrap(), -3);
        assert_eq!(rotation_number(&twice).unwrap(), 0);

        assert_eq!(
            stabilize(&FrontDiagram::unknot(), 0),
            Err(LegendrianError::BadSign(0))
        );
    }

    #[test]
    fn framing_examples() {
        assert_eq!(contact_framing(&FrontDiagram::unknot()).unwrap(), -2);
        assert_eq!(contact_framing(&cork_front(3)).unwrap(), 1);
    }

    #[test]
    fn invalid_fronts() {
        assert!(FrontDiagram::new(0, 0, 0, 0).is_err());
        assert!(FrontDiagram::new(0, 0, 1, 2).is_err());
        let bad = FrontDiagram {
            positive_crossings: 0,
            negative_crossings: 0,
            up_cusps: 2,
            down_cusps: 1,
        };
        assert!(thurston_bennequin(&bad).is_err());
        assert!(rotation_number(&bad).is_err());
    }

    #[test]
    fn front_json_shape() {
        let f: FrontDiagram =
            serde_json::from_str(r#"{"pos": 3, "neg": 0, "up": 0, "down": 2}"#).unwrap();
        assert_eq!(f, cork_front(1));
        assert!(serde_json::from_str::<FrontDiagram>(r#"{"pos": 3}"#).is_err());
    }

    #[test]
    fn cork_links_are_admissible() {
        for n in 1..=10 {
            let cert = check_admissibility(&AdmissibilityInput::cork_link(n)).unwrap();
            assert!(cert.verdict, "n = {n}: {cert:?}");
            assert_eq!(cert.tb_achieved, 2);
            assert_eq!(cert.linking_number.abs(), 1);
            assert_eq!(cert.conditions[0], ConditionStatus::ScreenPassed);
            assert_eq!(cert.conditions[1], ConditionStatus::Asserted);
        }
    }

    #[test]
    fn failing_conditions() {
        let mut input = AdmissibilityInput::cork_link(1);
        input.tb_witness = FrontDiagram::unknot();
        let cert = check_admissibility(&input).unwrap();
        assert!(!cert.verdict);
        assert_eq!(cert.conditions[3], ConditionStatus::Failed);
        assert_eq!(cert.failed_conditions(), vec![CONDITION_NAMES[3]]);

        let mut input = AdmissibilityInput::cork_link(1);
        input.census.crossings.retain(|c| c.a == c.b);
        let cert = check_admissibility(&input).unwrap();
        assert_eq!(cert.linking_number, 0);
        assert_eq!(cert.conditions[2], ConditionStatus::Failed);
        assert!(!cert.verdict);

        let mut input = AdmissibilityInput::cork_link(1);
        input.unknotted[1].screen = Some(crate::knot::trefoil_seifert());
        assert_eq!(
            check_admissibility(&input).unwrap().conditions[0],
            ConditionStatus::Failed
        );

        let mut input = AdmissibilityInput::cork_link(1);
        input.unknotted[0].screen = None;
        assert_eq!(
            check_admissibility(&input).unwrap().conditions[0],
            ConditionStatus::Asserted
        );

        let mut input = AdmissibilityInput::cork_link(1);
        input.census.components.push("K3".into());
        assert_eq!(
            check_admissibility(&input),
            Err(LegendrianError::NotTwoComponents(3))
        );

        let mut input = AdmissibilityInput::cork_link(1);
        input.census.crossings.push(Crossing {
            a: "K1".into(),
            b: "K2".into(),
            sign: 1,
        });
        assert!(matches!(
            check_admissibility(&input),
            Err(LegendrianError::Knot(KnotError::OddCrossingSum { .. }))
        ));
    }

    fn arb_front() -> impl Strategy<Value = FrontDiagram> {
        (0u64..50, 0u64..50, 0u64..20, 0u64..20).prop_filter_map("valid front", |(p, n, u, d)| {
            FrontDiagram::new(p, n, u, d).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn stabilization_laws(f in arb_front(), positive in prop::bool::ANY) {
            let s = if positive { 1 } else { -1 };
            let g = stabilize(&f, s).unwrap();
            prop_assert_eq!(thurston_bennequin(&g).unwrap(), thurston_bennequin(&f).unwrap() - 1);
            prop_assert_eq!(rotation_number(&g).unwrap(), rotation_number(&f).unwrap() + i64::from(s));
        }

        #[test]
        fn invariants_are_exact_integers(f in arb_front()) {
            prop_assert_eq!(2 * (thurston_bennequin(&f).unwrap() - writhe(&f)), -(f.cusps() as i64));
            prop_assert_eq!(2 * rotation_number(&f).unwrap(), f.down_cusps as i64 - f.up_cusps as i64);
        }

        #[test]
        fn failing_an_asserted_condition_never_helps(
            n in 1u32..6,
            drop_unknot in prop::bool::ANY,
            drop_involution in prop::bool::ANY,
        ) {
            let base = AdmissibilityInput::cork_link(n);
            let before = check_admissibility(&base).unwrap();
            let mut worse = base.clone();
            worse.unknotted[0].asserted &= !drop_unknot;
            worse.involution_asserted &= !drop_involution;
            let after = check_admissibility(&worse).unwrap();
            prop_assert!(before.verdict || !after.verdict);
            if drop_unknot || drop_involution {
                prop_assert!(!after.verdict);
            }
        }
    }
}
