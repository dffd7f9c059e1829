//! Planar positive allowable Lefschetz fibrations over the disk.
//!
//! The fiber is a disk with `h` holes and each vanishing cycle is recorded
//! by the set of holes it encloses, i.e. by its class in `H₁(fiber) = Zʰ`.
//! The total space is a 0-handle, `h` 1-handles and one 2-handle per
//! letter of the monodromy word, so its chain complex is
//! `Zᵐ --B--> Zʰ --0--> Z` with `B` the [`incidence_matrix`]. The boundary
//! is surgery on the link obtained by turning every dotted circle into a
//! 0-framed unknot; its linking matrix is the block matrix
//! `[[0, B], [Bᵀ, F]]` returned by [`boundary_linking_matrix`].
//!
//! Curve pairs whose enclosed sets are nested or disjoint sit on the page as
//! disjoint round circles at different heights and link zero times. Any
//! other pair needs its linking number supplied explicitly.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{smith_normal_form, IntegerMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PalfError {
    #[error("letter {letter}: curve encloses no holes")]
    EmptyCurve { letter: usize },
    #[error("letter {letter}: hole {hole} outside 1..={holes}")]
    HoleOutOfRange {
        letter: usize,
        hole: usize,
        holes: usize,
    },
    #[error("letter {letter}: twist sign must be +1 or -1, got {sign}")]
    BadSign { letter: usize, sign: i64 },
    #[error("letters {0} and {1} are not nested or disjoint and have no linking override")]
    MissingOverride(usize, usize),
    #[error("override ({0}, {1}) does not name two distinct letters of the word")]
    BadOverride(usize, usize),
    #[error("cork family index must be at least 1, got {0}")]
    FamilyIndex(u32),
    #[error("curve template: {0}")]
    Template(String),
    #[error("W^{n} transcription rejected: {reason}")]
    SelfValidation { n: u32, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanarFiber {
    pub holes: usize,
}

/// A page curve, up to homology: the nonempty set of holes it encloses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PageCurve {
    enclosed: BTreeSet<usize>,
}

impl PageCurve {
    /// Holes are numbered from 1. Returns `None` for the empty set.
    pub fn new(holes: impl IntoIterator<Item = usize>) -> Option<Self> {
        let enclosed: BTreeSet<usize> = holes.into_iter().collect();
        (!enclosed.is_empty()).then_some(Self { enclosed })
    }

    pub fn enclosed(&self) -> &BTreeSet<usize> {
        &self.enclosed
    }

    /// Nested or disjoint.
    pub fn is_laminar_with(&self, other: &Self) -> bool {
        self.enclosed.is_subset(&other.enclosed)
            || other.enclosed.is_subset(&self.enclosed)
            || self.enclosed.is_disjoint(&other.enclosed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistLetter {
    pub label: Option<String>,
    pub curve: PageCurve,
    /// `+1` for a right-handed Dehn twist.
    pub sign: i8,
}

impl TwistLetter {
    pub fn positive(curve: PageCurve) -> Self {
        Self {
            label: None,
            curve,
            sign: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TwistWord(pub Vec<TwistLetter>);

impl TwistWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Positive (every twist right-handed) and allowable (every curve encloses
/// a hole). The empty word is the trivial fibration.
pub fn is_palf(word: &TwistWord) -> bool {
    word.0
        .iter()
        .all(|l| l.sign == 1 && !l.curve.enclosed.is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PalfPresentation {
    fiber: PlanarFiber,
    word: TwistWord,
    /// Keyed by 0-based letter indices `(i, j)` with `i < j`.
    linking_overrides: BTreeMap<(usize, usize), i64>,
}

impl PalfPresentation {
    pub fn new(
        fiber: PlanarFiber,
        word: TwistWord,
        linking_overrides: BTreeMap<(usize, usize), i64>,
    ) -> Result<Self, PalfError> {
        for (k, letter) in word.0.iter().enumerate() {
            if letter.sign != 1 && letter.sign != -1 {
                return Err(PalfError::BadSign {
                    letter: k + 1,
                    sign: letter.sign.into(),
                });
            }
            if let Some(&hole) = letter
                .curve
                .enclosed
                .iter()
                .find(|&&h| h == 0 || h > fiber.holes)
            {
                return Err(PalfError::HoleOutOfRange {
                    letter: k + 1,
                    hole,
                    holes: fiber.holes,
                });
            }
        }
        let mut overrides = BTreeMap::new();
        for (&(i, j), &lk) in &linking_overrides {
            if i == j || i.max(j) >= word.len() {
                return Err(PalfError::BadOverride(i + 1, j + 1));
            }
            overrides.insert((i.min(j), i.max(j)), lk);
        }
        Ok(Self {
            fiber,
            word,
            linking_overrides: overrides,
        })
    }

    pub fn fiber(&self) -> PlanarFiber {
        self.fiber
    }

    pub fn word(&self) -> &TwistWord {
        &self.word
    }

    pub fn holes(&self) -> usize {
        self.fiber.holes
    }

    pub fn letters(&self) -> usize {
        self.word.len()
    }

    /// Letter-level linking number on the page, if determined.
    fn page_linking(&self, i: usize, j: usize) -> Result<i64, PalfError> {
        let key = (i.min(j), i.max(j));
        if let Some(&lk) = self.linking_overrides.get(&key) {
            return Ok(lk);
        }
        if self.word.0[i].curve.is_laminar_with(&self.word.0[j].curve) {
            Ok(0)
        } else {
            Err(PalfError::MissingOverride(key.0 + 1, key.1 + 1))
        }
    }

    /// The same presentation with its letters permuted by `order`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut position = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let word = TwistWord(order.iter().map(|&k| self.word.0[k].clone()).collect());
        let overrides = self
            .linking_overrides
            .iter()
            .map(|(&(i, j), &lk)| ((position[i], position[j]), lk))
            .collect();
        Self::new(self.fiber, word, overrides).expect("permutation preserves validity")
    }

    /// Appends one letter, keeping existing overrides.
    pub fn with_letter(&self, letter: TwistLetter) -> Result<Self, PalfError> {
        let mut word = self.word.clone();
        word.0.push(letter);
        Self::new(self.fiber, word, self.linking_overrides.clone())
    }
}

/// `1 - h + m`: one 0-handle, `h` 1-handles, `m` 2-handles.
pub fn euler_characteristic(p: &PalfPresentation) -> i64 {
    1 - p.holes() as i64 + p.letters() as i64
}

/// `h x m` matrix whose column `j` is the indicator of letter `j`'s holes.
pub fn incidence_matrix(p: &PalfPresentation) -> IntegerMatrix {
    let mut b = IntegerMatrix::zeros(p.holes(), p.letters());
    for (j, letter) in p.word.0.iter().enumerate() {
        for &h in &letter.curve.enclosed {
            b[(h - 1, j)] = BigInt::from(1);
        }
    }
    b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TotalSpaceHomology {
    /// Invariant factors of `H₁`, `0` for each free summand.
    #[serde(serialize_with = "crate::serialize_ints")]
    pub h1: Vec<BigInt>,
    pub h2_rank: usize,
}

pub fn total_space_homology(p: &PalfPresentation) -> TotalSpaceHomology {
    let snf = smith_normal_form(&incidence_matrix(p));
    TotalSpaceHomology {
        h1: snf.cokernel_factors(),
        h2_rank: p.letters() - snf.rank(),
    }
}

/// Linking matrix of the surgery diagram of the boundary: dotted circles
/// first (0-framed), then one component per letter with framing `-1` for a
/// right-handed twist and `+1` for a left-handed one.
pub fn boundary_linking_matrix(p: &PalfPresentation) -> Result<IntegerMatrix, PalfError> {
    let (h, m) = (p.holes(), p.letters());
    let b = incidence_matrix(p);
    let mut l = IntegerMatrix::zeros(h + m, h + m);
    for i in 0..h {
        for j in 0..m {
            l[(i, h + j)] = b[(i, j)].clone();
            l[(h + j, i)] = b[(i, j)].clone();
        }
    }
    for i in 0..m {
        l[(h + i, h + i)] = BigInt::from(-i64::from(p.word.0[i].sign));
        for j in i + 1..m {
            let lk = BigInt::from(p.page_linking(i, j)?);
            l[(h + i, h + j)] = lk.clone();
            l[(h + j, h + i)] = lk;
        }
    }
    Ok(l)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryHomology {
    #[serde(serialize_with = "crate::serialize_ints")]
    pub h1: Vec<BigInt>,
    pub is_homology_sphere: bool,
}

pub fn boundary_homology(p: &PalfPresentation) -> Result<BoundaryHomology, PalfError> {
    let h1 = smith_normal_form(&boundary_linking_matrix(p)?).cokernel_factors();
    Ok(BoundaryHomology {
        is_homology_sphere: h1.is_empty(),
        h1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub euler: i64,
    #[serde(serialize_with = "crate::serialize_ints")]
    pub h1_total_space: Vec<BigInt>,
    pub h2_rank: usize,
    pub is_homology_ball: bool,
    #[serde(serialize_with = "crate::serialize_ints")]
    pub boundary_h1: Vec<BigInt>,
    pub boundary_is_homology_sphere: bool,
    /// The word is positive and allowable.
    pub is_palf: bool,
}

pub fn homology_report(p: &PalfPresentation) -> Result<HomologyReport, PalfError> {
    let total = total_space_homology(p);
    let boundary = boundary_homology(p)?;
    Ok(HomologyReport {
        euler: euler_characteristic(p),
        is_homology_ball: total.h1.is_empty() && total.h2_rank == 0,
        h1_total_space: total.h1,
        h2_rank: total.h2_rank,
        boundary_h1: boundary.h1,
        boundary_is_homology_sphere: boundary.is_homology_sphere,
        is_palf: is_palf(&p.word),
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LetterInput {
    curve: Vec<usize>,
    sign: i64,
    #[serde(default)]
    label: Option<String>,
}

/// JSON form: `{"fiber": {"holes": h}, "word": [{"curve": [1, 2], "sign": 1}],
/// "overrides": [[i, j, lk]]}` with 1-based letter indices in overrides.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PalfInput {
    fiber: PlanarFiber,
    #[serde(default)]
    word: Vec<LetterInput>,
    #[serde(default)]
    overrides: Vec<(usize, usize, i64)>,
}

impl TryFrom<PalfInput> for PalfPresentation {
    type Error = PalfError;

    fn try_from(input: PalfInput) -> Result<Self, PalfError> {
        let mut letters = Vec::with_capacity(input.word.len());
        for (k, l) in input.word.into_iter().enumerate() {
            let sign = match l.sign {
                1 => 1,
                -1 => -1,
                s => {
                    return Err(PalfError::BadSign {
                        letter: k + 1,
                        sign: s,
                    })
                }
            };
            let curve = PageCurve::new(l.curve).ok_or(PalfError::EmptyCurve { letter: k + 1 })?;
            letters.push(TwistLetter {
                label: l.label,
                curve,
                sign,
            });
        }
        let mut overrides = BTreeMap::new();
        for (i, j, lk) in input.overrides {
            if i == 0 || j == 0 {
                return Err(PalfError::BadOverride(i, j));
            }
            overrides.insert((i - 1, j - 1), lk);
        }
        PalfPresentation::new(input.fiber, TwistWord(letters), overrides)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateCurve {
    pub name: String,
    #[serde(default)]
    pub holes: Vec<usize>,
    /// Also enclose every hole owned by the repeated curves.
    #[serde(default)]
    pub family_holes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepeatedCurve {
    pub name: String,
    /// Fixed holes each copy encloses.
    #[serde(default)]
    pub holes: Vec<usize>,
    /// Each copy adds a new hole and encloses it.
    #[serde(default)]
    pub own_hole: bool,
}

/// Curve data for the cork family as a function of `n`: fixed curves, then
/// `n` copies of a repeated curve (named `d1`, `d2`, ...).
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveTemplate {
    #[serde(default)]
    pub description: String,
    pub fixed_holes: usize,
    pub curves: Vec<TemplateCurve>,
    pub repeated: RepeatedCurve,
    /// Linking numbers by curve name.
    #[serde(default)]
    pub overrides: Vec<(String, String, i64)>,
}

const BUNDLED_TEMPLATE: &str = include_str!("../data/wn_curves.json");

impl CurveTemplate {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_TEMPLATE).expect("bundled curve template parses")
    }

    pub fn from_json(text: &str) -> Result<Self, PalfError> {
        serde_json::from_str(text).map_err(|e| PalfError::Template(e.to_string()))
    }

    /// Instantiates the template without validating homology.
    pub fn instantiate(&self, n: u32) -> Result<PalfPresentation, PalfError> {
        if n < 1 {
            return Err(PalfError::FamilyIndex(n));
        }
        let n = n as usize;
        let own = self.repeated.own_hole;
        let holes = self.fixed_holes + if own { n } else { 0 };
        let family: Vec<usize> = if own {
            (self.fixed_holes + 1..=holes).collect()
        } else {
            Vec::new()
        };
        let mut letters = Vec::new();
        let mut push = |name: String, set: Vec<usize>| -> Result<(), PalfError> {
            let curve = PageCurve::new(set)
                .ok_or_else(|| PalfError::Template(format!("curve `{name}` encloses no holes")))?;
            letters.push(TwistLetter {
                label: Some(name),
                curve,
                sign: 1,
            });
            Ok(())
        };
        for c in &self.curves {
            let mut set = c.holes.clone();
            if c.family_holes {
                set.extend(&family);
            }
            push(c.name.clone(), set)?;
        }
        for i in 1..=n {
            let mut set = self.repeated.holes.clone();
            if own {
                set.push(self.fixed_holes + i);
            }
            push(format!("{}{i}", self.repeated.name), set)?;
        }
        for l in &letters {
            if let Some(&h) = l.curve.enclosed.iter().find(|&&h| h == 0 || h > holes) {
                return Err(PalfError::Template(format!(
                    "curve `{}` encloses hole {h} outside 1..={holes}",
                    l.label.as_deref().unwrap_or("?")
                )));
            }
        }
        let index_of = |name: &str| {
            letters
                .iter()
                .position(|l| l.label.as_deref() == Some(name))
                .ok_or_else(|| {
                    PalfError::Template(format!("override names unknown curve `{name}`"))
                })
        };
        let mut overrides = BTreeMap::new();
        for (a, b, lk) in &self.overrides {
            overrides.insert((index_of(a)?, index_of(b)?), *lk);
        }
        PalfPresentation::new(PlanarFiber { holes }, TwistWord(letters), overrides)
    }
}

/// The planar PALF on the cork `Wⁿ` from the bundled curve data.
pub fn wn_family(n: u32) -> Result<PalfPresentation, PalfError> {
    wn_family_from(&CurveTemplate::bundled(), n)
}

/// Like [`wn_family`] with caller-supplied curve data. The result must be a
/// positive fibration with `n + 3` holes and `n + 3` letters whose total
/// space is a homology ball with homology-sphere boundary; anything else is
/// rejected as a bad transcription.
pub fn wn_family_from(template: &CurveTemplate, n: u32) -> Result<PalfPresentation, PalfError> {
    let p = template.instantiate(n)?;
    let reject = |reason: String| PalfError::SelfValidation { n, reason };
    let expected = n as usize + 3;
    if p.holes() != expected || p.letters() != expected {
        return Err(reject(format!(
            "expected {expected} holes and {expected} curves, got {} and {}",
            p.holes(),
            p.letters()
        )));
    }
    if !is_palf(p.word()) {
        return Err(reject(
            "word is not a positive allowable factorization".into(),
        ));
    }
    let report = homology_report(&p)?;
    if !report.is_homology_ball {
        return Err(reject(format!(
            "total space is not a homology ball (H1 factors {:?}, b2 = {})",
            report.h1_total_space, report.h2_rank
        )));
    }
    if !report.boundary_is_homology_sphere {
        return Err(reject(format!(
            "boundary is not a homology sphere (H1 factors {:?})",
            report.boundary_h1
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};
    use proptest::prelude::*;

    fn abs_det(m: &IntegerMatrix) -> BigInt {
        m.det().unwrap().abs()
    }

    fn pres(holes: usize, curves: &[&[usize]]) -> PalfPresentation {
        let word = TwistWord(
            curves
                .iter()
                .map(|c| TwistLetter::positive(PageCurve::new(c.iter().copied()).unwrap()))
                .collect(),
        );
        PalfPresentation::new(PlanarFiber { holes }, word, BTreeMap::new()).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn euler_examples() {
        for n in 1..=10 {
            assert_eq!(euler_characteristic(&wn_family(n).unwrap()), 1);
        }
        assert_eq!(euler_characteristic(&pres(1, &[&[1]])), 1);
        assert_eq!(euler_characteristic(&pres(2, &[])), -1);
    }

    #[test]
    fn incidence_examples() {
        assert_eq!(
            incidence_matrix(&pres(1, &[&[1]])),
            IntegerMatrix::from_rows(&[[1]]).unwrap()
        );
        assert_eq!(
            incidence_matrix(&pres(3, &[&[1], &[1, 2], &[1, 2, 3]])),
            IntegerMatrix::from_rows(&[[1, 1, 1], [0, 1, 1], [0, 0, 1]]).unwrap()
        );
        for n in 1..=10 {
            let b = incidence_matrix(&wn_family(n).unwrap());
            assert_eq!((b.rows(), b.cols()), (n as usize + 3, n as usize + 3));
            assert_eq!(abs_det(&b), BigInt::one());
        }
    }

    #[test]
    fn total_space_examples() {
        let hopf = total_space_homology(&pres(1, &[&[1]]));
        assert!(hopf.h1.is_empty());
        assert_eq!(hopf.h2_rank, 0);
        let two = total_space_homology(&pres(2, &[]));
        assert_eq!(two.h1, ints(&[0, 0]));
        assert_eq!(two.h2_rank, 0);
        // the same curve twice: H2 = Z
        let doubled = total_space_homology(&pres(1, &[&[1], &[1]]));
        assert!(doubled.h1.is_empty());
        assert_eq!(doubled.h2_rank, 1);
    }

    #[test]
    fn boundary_examples() {
        let hopf = pres(1, &[&[1]]);
        let l = boundary_linking_matrix(&hopf).unwrap();
        assert_eq!(l, IntegerMatrix::from_rows(&[[0, 1], [1, -1]]).unwrap());
        assert_eq!(l.det().unwrap(), BigInt::from(-1));
        assert!(boundary_homology(&hopf).unwrap().is_homology_sphere);

        let empty = pres(2, &[]);
        assert!(boundary_linking_matrix(&empty).unwrap().is_zero());
        assert_eq!(boundary_homology(&empty).unwrap().h1, ints(&[0, 0]));

        let s1s2 = boundary_homology(&pres(1, &[])).unwrap();
        assert_eq!(s1s2.h1, ints(&[0]));
        assert!(!s1s2.is_homology_sphere);

        // twice-twisted annulus: L(2, 1)
        let lens = boundary_homology(&pres(1, &[&[1], &[1]])).unwrap();
        assert_eq!(lens.h1, ints(&[2]));
    }

    #[test]
    fn negative_twists_flip_framing() {
        let word = TwistWord(vec![TwistLetter {
            label: None,
            curve: PageCurve::new([1]).unwrap(),
            sign: -1,
        }]);
        let p =
            PalfPresentation::new(PlanarFiber { holes: 1 }, word.clone(), BTreeMap::new()).unwrap();
        assert!(!is_palf(&word));
        assert_eq!(
            boundary_linking_matrix(&p).unwrap(),
            IntegerMatrix::from_rows(&[[0, 1], [1, 1]]).unwrap()
        );
        assert!(!homology_report(&p).unwrap().is_palf);
    }

    #[test]
    fn overrides_and_non_laminar_pairs() {
        let p = pres(3, &[&[1, 2], &[2, 3]]);
        assert_eq!(
            boundary_linking_matrix(&p),
            Err(PalfError::MissingOverride(1, 2))
        );
        let with =
            PalfPresentation::new(p.fiber(), p.word().clone(), BTreeMap::from([((1, 0), 1)]))
                .unwrap();
        let l = boundary_linking_matrix(&with).unwrap();
        assert_eq!(l[(3, 4)], BigInt::one());
        assert_eq!(l[(4, 3)], BigInt::one());
        assert_eq!(
            PalfPresentation::new(p.fiber(), p.word().clone(), BTreeMap::from([((0, 5), 1)])),
            Err(PalfError::BadOverride(1, 6))
        );
    }

    #[test]
    fn invalid_presentations() {
        let word = TwistWord(vec![TwistLetter::positive(PageCurve::new([4]).unwrap())]);
        assert_eq!(
            PalfPresentation::new(PlanarFiber { holes: 3 }, word.clone(), BTreeMap::new()),
            Err(PalfError::HoleOutOfRange {
                letter: 1,
                hole: 4,
                holes: 3
            })
        );
        assert!(PalfPresentation::new(PlanarFiber { holes: 0 }, word, BTreeMap::new()).is_err());
        assert!(PalfPresentation::new(
            PlanarFiber { holes: 0 },
            TwistWord::default(),
            BTreeMap::new()
        )
        .is_ok());
        assert!(PageCurve::new([]).is_none());
    }

    #[test]
    fn json_input() {
        let input: PalfInput = serde_json::from_str(
            r#"{"fiber": {"holes": 3}, "word": [{"curve": [1, 2], "sign": 1}, {"curve": [2, 3], "sign": 1}],
                "overrides": [[1, 2, -1]]}"#,
        )
        .unwrap();
        let p = PalfPresentation::try_from(input).unwrap();
        assert_eq!(
            boundary_linking_matrix(&p).unwrap()[(3, 4)],
            BigInt::from(-1)
        );

        let input: PalfInput =
            serde_json::from_str(r#"{"fiber": {"holes": 1}, "word": [{"curve": [], "sign": 1}]}"#)
                .unwrap();
        assert_eq!(
            PalfPresentation::try_from(input),
            Err(PalfError::EmptyCurve { letter: 1 })
        );
        let input: PalfInput =
            serde_json::from_str(r#"{"fiber": {"holes": 1}, "word": [{"curve": [1], "sign": 2}]}"#)
                .unwrap();
        assert_eq!(
            PalfPresentation::try_from(input),
            Err(PalfError::BadSign { letter: 1, sign: 2 })
        );
    }

    #[test]
    fn is_palf_examples() {
        assert!(is_palf(wn_family(3).unwrap().word()));
        assert!(is_palf(&TwistWord::default()));
    }

    #[test]
    fn cork_family_shape() {
        let p = wn_family(1).unwrap();
        assert_eq!((p.holes(), p.letters()), (4, 4));
        let labels: Vec<_> = p
            .word()
            .0
            .iter()
            .map(|l| l.label.clone().unwrap())
            .collect();
        assert_eq!(labels, ["a", "b", "c", "d1"]);
        for n in 1..=10 {
            let r = homology_report(&wn_family(n).unwrap()).unwrap();
            assert_eq!(r.euler, 1);
            assert!(r.is_homology_ball && r.boundary_is_homology_sphere && r.is_palf);
        }
        assert_eq!(wn_family(0), Err(PalfError::FamilyIndex(0)));
    }

    #[test]
    fn bad_transcriptions_are_rejected() {
        let mut t = CurveTemplate::bundled();
        // c parallel to b: B is singular
        t.curves[2].holes = vec![1, 2];
        t.curves[2].family_holes = false;
        assert!(matches!(
            wn_family_from(&t, 2),
            Err(PalfError::SelfValidation { n: 2, .. })
        ));

        let mut t = CurveTemplate::bundled();
        t.curves.pop();
        assert!(matches!(
            wn_family_from(&t, 1),
            Err(PalfError::SelfValidation { .. })
        ));

        let mut t = CurveTemplate::bundled();
        t.curves[0].holes = vec![9];
        assert!(matches!(wn_family_from(&t, 1), Err(PalfError::Template(_))));

        let mut t = CurveTemplate::bundled();
        t.curves[2].holes = vec![2, 3];
        assert_eq!(wn_family_from(&t, 1), Err(PalfError::MissingOverride(2, 3)));

        let mut t = CurveTemplate::bundled();
        t.curves[1].holes = vec![1];
        t.curves[1].family_holes = false;
        let err = wn_family_from(&t, 1).unwrap_err();
        assert!(err.to_string().contains("homology ball"), "{err}");
        assert!(CurveTemplate::from_json("{").is_err());
    }

    /// Random laminar family of `h` intervals in a shuffled hole order.
    fn arb_laminar_square() -> impl Strategy<Value = PalfPresentation> {
        (1usize..=8)
            .prop_flat_map(|h| {
                (
                    Just(h),
                    Just(()).prop_perturb(move |_, mut rng| {
                        let mut order: Vec<usize> = (1..=h).collect();
                        for i in (1..h).rev() {
                            let j = (rng.next_u32() as usize) % (i + 1);
                            order.swap(i, j);
                        }
                        let mut kept: Vec<PageCurve> = Vec::new();
                        let mut tries = 0;
                        while kept.len() < h && tries < 500 {
                            tries += 1;
                            let a = (rng.next_u32() as usize) % h;
                            let b = a + (rng.next_u32() as usize) % (h - a);
                            let c = PageCurve::new(order[a..=b].iter().copied()).unwrap();
                            if kept.iter().all(|k| k.is_laminar_with(&c)) {
                                kept.push(c);
                            }
                        }
                        while kept.len() < h {
                            kept.push(PageCurve::new([order[0]]).unwrap());
                        }
                        kept
                    }),
                )
            })
            .prop_map(|(h, curves)| {
                let word = TwistWord(curves.into_iter().map(TwistLetter::positive).collect());
                PalfPresentation::new(PlanarFiber { holes: h }, word, BTreeMap::new()).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn block_determinant_identity(p in arb_laminar_square()) {
            let b = incidence_matrix(&p).det().unwrap();
            let l = boundary_linking_matrix(&p).unwrap().det().unwrap();
            prop_assert_eq!(l.abs(), &b * &b);
        }

        #[test]
        fn ball_iff_sphere_for_square(p in arb_laminar_square()) {
            let r = homology_report(&p).unwrap();
            prop_assert_eq!(
                r.is_homology_ball,
                r.boundary_is_homology_sphere && p.holes() == p.letters()
            );
            prop_assert_eq!(r.euler, 1 - p.holes() as i64 + p.letters() as i64);
        }

        #[test]
        fn letter_order_is_irrelevant(p in arb_laminar_square(), seed in any::<u64>()) {
            let m = p.letters();
            let mut order: Vec<usize> = (0..m).collect();
            let mut s = seed;
            for i in (1..m).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let q = p.permuted(&order);
            prop_assert_eq!(homology_report(&p).unwrap(), homology_report(&q).unwrap());
        }

        #[test]
        fn appending_a_letter_adds_one_to_euler(p in arb_laminar_square(), hole in 1usize..=8) {
            let hole = 1 + (hole - 1) % p.holes();
            let q = p.with_letter(TwistLetter::positive(PageCurve::new([hole]).unwrap())).unwrap();
            prop_assert_eq!(euler_characteristic(&q), euler_characteristic(&p) + 1);
        }
    }
}
