//! Pluralist egalitarian social value of multi-person options under
//! ambiguity.
//!
//! The value of an option is
//!
//! ```text
//! V = sum_i H_alpha(person i's prospect)
//!     - beta  * ex-ante inequality   (spread of the H_alpha values)
//!     - gamma * ex-post inequality   (Hurwicz-weighted expected spread of final well-being)
//! ```
//!
//! where `H_alpha` is the Hurwicz value with pessimism `alpha`, spread is
//! the mean absolute pairwise difference, and the ex-post term is a bad,
//! so its pessimistic end is the *largest* expected spread over the
//! credal set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prospects::{
    mean_abs_pairwise_difference, own_wellbeing, ChanceInfo, CredalSet, OutcomeProfile, Pessimism, Prospect,
    WellBeing, TOLERANCE,
};

pub const BLIND: WellBeing = 50.0;
pub const CURED: WellBeing = 80.0;
/// Well-being of the partial impairment before any shortfall.
pub const HALFWAY: WellBeing = 65.0;
/// Exclusive upper bound on the partial-impairment shortfall.
pub const MAX_COST: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeuParams {
    pub alpha: Pessimism,
    /// Weight on ex-ante inequality (spread of individual prospect values).
    pub beta: f64,
    /// Weight on ex-post inequality (expected spread of final well-being).
    pub gamma: f64,
}

impl PeuParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let alpha = Pessimism::new(alpha)?;
        for (name, value) in [("beta", beta), ("gamma", gamma)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::NegativeWeight { name, value });
            }
        }
        Ok(Self { alpha, beta, gamma })
    }
}

impl Default for PeuParams {
    fn default() -> Self {
        Self { alpha: Pessimism::new(0.8).unwrap(), beta: 0.5, gamma: 0.25 }
    }
}

/// How the persons' cure events are coupled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Correlation {
    Independent,
    /// One shared event: everyone succeeds or everyone fails.
    Comonotone,
    /// Two persons, exactly one succeeds.
    Antitone,
}

/// One person's binary treatment: `success` with chance `chance`, else `failure`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Treatment {
    pub success: WellBeing,
    pub failure: WellBeing,
    pub chance: ChanceInfo,
}

impl Treatment {
    pub fn new(success: WellBeing, failure: WellBeing, chance: ChanceInfo) -> Self {
        Self { success, failure, chance }
    }

    pub fn certain(level: WellBeing) -> Self {
        Self::new(level, level, ChanceInfo::Precise(1.0))
    }

    fn shifted(&self, k: f64) -> Self {
        Self { success: self.success + k, failure: self.failure + k, chance: self.chance }
    }
}

/// Per-person marginals plus their coupling; kept so an option can be
/// written back out in the same form it was described in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalSpec {
    pub correlation: Correlation,
    pub treatments: Vec<Treatment>,
}

/// A joint multi-person prospect under consideration by a social planner.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SocialOption {
    pub name: String,
    pub persons: Vec<String>,
    pub joint: Prospect,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marginals: Option<MarginalSpec>,
}

impl SocialOption {
    pub fn new(name: impl Into<String>, persons: Vec<String>, joint: Prospect) -> Result<Self> {
        if persons.is_empty() {
            return Err(Error::LengthMismatch { expected: 1, actual: 0 });
        }
        if joint.persons() != persons.len() {
            return Err(Error::LengthMismatch { expected: persons.len(), actual: joint.persons() });
        }
        Ok(Self { name: name.into(), persons, joint, marginals: None })
    }

    /// Builds the joint prospect from per-person treatments.
    ///
    /// Independent coupling with imprecise marginals yields the finite set
    /// of product distributions at the interval endpoints. Expectations are
    /// multilinear in the marginal chances, so those vertices attain every
    /// lower and upper expectation over the full product set. States that
    /// no member can reach are dropped.
    pub fn from_marginals(
        name: impl Into<String>,
        persons: Vec<String>,
        treatments: Vec<Treatment>,
        correlation: Correlation,
    ) -> Result<Self> {
        let name = name.into();
        if treatments.len() != persons.len() {
            return Err(Error::LengthMismatch { expected: persons.len(), actual: treatments.len() });
        }
        for (person, t) in persons.iter().zip(&treatments) {
            t.chance.validate(&format!("{name}: chance for {person}"))?;
            if !(t.success.is_finite() && t.failure.is_finite()) {
                return Err(Error::NonFinite(format!("{name}: well-being for {person}")));
            }
        }
        let (states, credal) = match correlation {
            Correlation::Independent => independent_joint(&treatments)?,
            Correlation::Comonotone => {
                let shared = treatments[0].chance;
                if let Some(t) = treatments.iter().find(|t| !t.chance.approx_eq(&shared)) {
                    return Err(Error::IncoherentCredalSet(format!(
                        "{name}: comonotone coupling needs equal chances, got {:?} and {:?}",
                        shared, t.chance
                    )));
                }
                let all = |f: fn(&Treatment) -> f64| OutcomeProfile::new(treatments.iter().map(f).collect());
                (vec![all(|t| t.success)?, all(|t| t.failure)?], binary_credal(shared))
            }
            Correlation::Antitone => {
                if treatments.len() != 2 {
                    return Err(Error::LengthMismatch { expected: 2, actual: treatments.len() });
                }
                let (a, b) = (treatments[0], treatments[1]);
                if !b.chance.approx_eq(&a.chance.complement()) {
                    return Err(Error::IncoherentCredalSet(format!(
                        "{name}: antitone coupling needs complementary chances, got {:?} and {:?}",
                        a.chance, b.chance
                    )));
                }
                (
                    vec![
                        OutcomeProfile::new(vec![a.success, b.failure])?,
                        OutcomeProfile::new(vec![a.failure, b.success])?,
                    ],
                    binary_credal(a.chance),
                )
            }
        };
        let mut option = Self::new(name, persons, Prospect::new(states, credal)?)?;
        option.marginals = Some(MarginalSpec { correlation, treatments });
        Ok(option)
    }

    /// Same option with `k` added to every well-being value.
    pub fn shifted(&self, k: f64) -> Self {
        Self {
            name: self.name.clone(),
            persons: self.persons.clone(),
            joint: self.joint.shifted(k),
            marginals: self.marginals.as_ref().map(|m| MarginalSpec {
                correlation: m.correlation,
                treatments: m.treatments.iter().map(|t| t.shifted(k)).collect(),
            }),
        }
    }
}

fn binary_credal(chance: ChanceInfo) -> CredalSet {
    match chance {
        ChanceInfo::Precise(p) => CredalSet::Point(vec![p, 1.0 - p]),
        c => CredalSet::Intervals(vec![c, c.complement()]),
    }
}

fn independent_joint(treatments: &[Treatment]) -> Result<(Vec<OutcomeProfile>, CredalSet)> {
    let n = treatments.len();
    if n > 16 {
        return Err(Error::LengthMismatch { expected: 16, actual: n });
    }
    // State k: bit i set means person i succeeds.
    let states: Vec<OutcomeProfile> = (0..1usize << n)
        .map(|k| {
            OutcomeProfile::new(
                treatments
                    .iter()
                    .enumerate()
                    .map(|(i, t)| if k >> i & 1 == 1 { t.success } else { t.failure })
                    .collect(),
            )
        })
        .collect::<Result<_>>()?;

    let imprecise: Vec<usize> = (0..n).filter(|&i| !treatments[i].chance.is_precise()).collect();
    let product = |chances: &[f64]| -> Vec<f64> {
        (0..1usize << n)
            .map(|k| {
                (0..n).map(|i| if k >> i & 1 == 1 { chances[i] } else { 1.0 - chances[i] }).product()
            })
            .collect()
    };
    let members: Vec<Vec<f64>> = (0..1usize << imprecise.len())
        .map(|corner| {
            let mut chances: Vec<f64> = treatments.iter().map(|t| t.chance.bounds().0).collect();
            for (j, &i) in imprecise.iter().enumerate() {
                if corner >> j & 1 == 1 {
                    chances[i] = treatments[i].chance.bounds().1;
                }
            }
            product(&chances)
        })
        .collect();

    let keep: Vec<usize> = (0..states.len()).filter(|&s| members.iter().any(|m| m[s] > 0.0)).collect();
    let credal = if members.len() == 1 {
        CredalSet::Point(members.into_iter().next().unwrap())
    } else {
        CredalSet::Finite(members)
    };
    let credal = credal.restrict(&keep);
    let states = keep.iter().map(|&s| states[s].clone()).collect();
    Ok((states, credal))
}

pub fn individual_value(option: &SocialOption, person: usize, params: &PeuParams) -> Result<f64> {
    let count = option.persons.len();
    if person >= count {
        return Err(Error::PersonIndexOutOfRange { index: person, count });
    }
    Ok(option.joint.hurwicz(params.alpha, own_wellbeing(person)))
}

fn individual_values(option: &SocialOption, params: &PeuParams) -> Vec<f64> {
    (0..option.persons.len()).map(|i| option.joint.hurwicz(params.alpha, own_wellbeing(i))).collect()
}

pub fn ex_ante_inequality(option: &SocialOption, params: &PeuParams) -> f64 {
    mean_abs_pairwise_difference(&individual_values(option, params))
}

/// Expected final-well-being spread, Hurwicz-aggregated as a bad: the
/// pessimistic weight goes to the largest expectation.
pub fn ex_post_inequality_value(option: &SocialOption, params: &PeuParams) -> f64 {
    let b = option.joint.eu_bounds(|profile| mean_abs_pairwise_difference(profile.values()));
    params.alpha.mix(b.max, b.min)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeuBreakdown {
    pub individual: Vec<f64>,
    pub total: f64,
    pub ex_ante_inequality: f64,
    pub ex_post_inequality: f64,
    pub value: f64,
}

pub fn peu_breakdown(option: &SocialOption, params: &PeuParams) -> PeuBreakdown {
    let individual = individual_values(option, params);
    let total = individual.iter().sum();
    let ex_ante = mean_abs_pairwise_difference(&individual);
    let ex_post = ex_post_inequality_value(option, params);
    PeuBreakdown {
        value: total - params.beta * ex_ante - params.gamma * ex_post,
        individual,
        total,
        ex_ante_inequality: ex_ante,
        ex_post_inequality: ex_post,
    }
}

pub fn peu_value(option: &SocialOption, params: &PeuParams) -> f64 {
    peu_breakdown(option, params).value
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    LeftPreferred,
    RightPreferred,
    Indifferent,
}

impl Relation {
    pub fn from_margin(margin: f64) -> Self {
        if margin > TOLERANCE {
            Relation::LeftPreferred
        } else if margin < -TOLERANCE {
            Relation::RightPreferred
        } else {
            Relation::Indifferent
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            Relation::LeftPreferred => Relation::RightPreferred,
            Relation::RightPreferred => Relation::LeftPreferred,
            Relation::Indifferent => Relation::Indifferent,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::LeftPreferred => "left_preferred",
            Relation::RightPreferred => "right_preferred",
            Relation::Indifferent => "indifferent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub left: String,
    pub right: String,
    pub relation: Relation,
    /// `V(left) - V(right)`.
    pub margin: f64,
}

pub fn compare(left: &SocialOption, right: &SocialOption, params: &PeuParams) -> Result<Verdict> {
    if left.persons != right.persons {
        return Err(Error::PersonSetMismatch { left: left.persons.clone(), right: right.persons.clone() });
    }
    let margin = peu_value(left, params) - peu_value(right, params);
    Ok(Verdict {
        left: left.name.clone(),
        right: right.name.clone(),
        relation: Relation::from_margin(margin),
        margin,
    })
}

pub fn default_persons() -> Vec<String> {
    vec!["Ann".to_string(), "Bea".to_string()]
}

pub const OPTION_TITLES: [&str; 8] = [
    "(1) inequality under certainty",
    "(2) equal risk, unequal final well-being",
    "(3) equality under risk",
    "(4) equality under certainty",
    "(5) equal uncertainty, unequal final well-being",
    "(6) equality under uncertainty",
    "(7) unequal uncertainty",
    "(8) equal moderate uncertainty",
];

/// The eight blindness treatments for Ann and Bea. `cost_c` is the
/// shortfall of option (4) below the halfway level 65.
pub fn builtin_options(cost_c: f64) -> Result<Vec<SocialOption>> {
    if !(0.0..MAX_COST).contains(&cost_c) {
        return Err(Error::CostOutOfRange(cost_c));
    }
    use ChanceInfo::{Interval, Precise, Vacuous};
    use Correlation::*;
    let cure = |chance| Treatment::new(CURED, BLIND, chance);
    let specs: [(Vec<Treatment>, Correlation); 8] = [
        (vec![cure(Precise(1.0)), cure(Precise(0.0))], Independent),
        (vec![cure(Precise(0.5)), cure(Precise(0.5))], Antitone),
        (vec![cure(Precise(0.5)), cure(Precise(0.5))], Comonotone),
        (vec![Treatment::certain(HALFWAY - cost_c); 2], Independent),
        (vec![cure(Vacuous), cure(Vacuous)], Antitone),
        (vec![cure(Vacuous), cure(Vacuous)], Comonotone),
        (vec![cure(Vacuous), cure(Precise(0.5))], Independent),
        (vec![cure(Interval(0.25, 0.75)), cure(Interval(0.25, 0.75))], Independent),
    ];
    specs
        .into_iter()
        .zip(OPTION_TITLES)
        .map(|((treatments, correlation), title)| {
            SocialOption::from_marginals(title, default_persons(), treatments, correlation)
        })
        .collect()
}

/// One of the twelve pairwise comparisons of the eight treatments.
#[derive(Debug, Clone, Copy)]
pub struct ComparisonSpec {
    pub label: char,
    /// 1-based option numbers.
    pub left: usize,
    pub right: usize,
    pub cost: CostSlot,
    pub expected: Relation,
    pub note: Option<&'static str>,
}

/// Which cost level option (4) takes in a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostSlot {
    Zero,
    ForG,
    Small,
}

pub const SECTION3_COMPARISONS: [ComparisonSpec; 12] = {
    use CostSlot::*;
    use Relation::*;
    const fn c(
        label: char,
        left: usize,
        right: usize,
        cost: CostSlot,
        expected: Relation,
        note: Option<&'static str>,
    ) -> ComparisonSpec {
        ComparisonSpec { label, left, right, cost, expected, note }
    }
    [
        c('A', 1, 2, Zero, RightPreferred, None),
        c('B', 3, 1, Zero, LeftPreferred, None),
        c('C', 3, 2, Zero, LeftPreferred, None),
        c('D', 4, 1, Zero, LeftPreferred, Some("read as (4) versus (1); a heading of (4) versus (4) is taken as a typo")),
        c('E', 4, 2, Zero, LeftPreferred, None),
        c('F', 4, 3, Zero, Indifferent, None),
        c('G', 4, 1, ForG, LeftPreferred, Some("read as (4) versus (1), not (3). Holds iff c < 15(beta+gamma)")),
        c('H', 4, 3, Small, RightPreferred, None),
        c('I', 5, 2, Zero, RightPreferred, None),
        c('J', 6, 3, Zero, RightPreferred, None),
        c('K', 7, 8, Zero, RightPreferred, None),
        c('L', 5, 1, Zero, RightPreferred, Some("option (1) is inequality under certainty")),
    ]
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub label: char,
    pub cost_c: f64,
    pub expected: Relation,
    pub verdict: Verdict,
    pub left_value: f64,
    pub right_value: f64,
    pub matches: bool,
    pub note: Option<&'static str>,
}

/// Options for each cost slot, built once and reused across parameter
/// sweeps.
#[derive(Debug, Clone)]
pub struct Section3Options {
    pub cost_small: f64,
    pub cost_g: f64,
    zero: Vec<SocialOption>,
    option4_small: SocialOption,
    option4_g: SocialOption,
}

impl Section3Options {
    pub fn new(cost_small: f64, cost_g: f64) -> Result<Self> {
        let zero = builtin_options(0.0)?;
        let option4_small = builtin_options(cost_small)?.swap_remove(3);
        let option4_g = builtin_options(cost_g)?.swap_remove(3);
        Ok(Self { cost_small, cost_g, zero, option4_small, option4_g })
    }

    fn pick(&self, number: usize, slot: CostSlot) -> (&SocialOption, f64) {
        match (number, slot) {
            (4, CostSlot::Small) => (&self.option4_small, self.cost_small),
            (4, CostSlot::ForG) => (&self.option4_g, self.cost_g),
            _ => (&self.zero[number - 1], 0.0),
        }
    }

    pub fn evaluate(&self, params: &PeuParams) -> Vec<ComparisonRow> {
        SECTION3_COMPARISONS
            .iter()
            .map(|spec| {
                let (left, cl) = self.pick(spec.left, spec.cost);
                let (right, cr) = self.pick(spec.right, spec.cost);
                let left_value = peu_value(left, params);
                let right_value = peu_value(right, params);
                let margin = left_value - right_value;
                let relation = Relation::from_margin(margin);
                ComparisonRow {
                    label: spec.label,
                    cost_c: cl.max(cr),
                    expected: spec.expected,
                    verdict: Verdict { left: left.name.clone(), right: right.name.clone(), relation, margin },
                    left_value,
                    right_value,
                    matches: relation == spec.expected,
                    note: spec.note,
                }
            })
            .collect()
    }

    pub fn all_match(&self, params: &PeuParams) -> bool {
        self.evaluate(params).iter().all(|r| r.matches)
    }
}

/// Evaluates comparisons A-L. Option (4) uses `c = 0` for D, E, F,
/// `cost_c_small` for H and `cost_c_for_g` for G. Mismatches are reported
/// in the rows, never raised.
pub fn reproduce_section3(params: &PeuParams, cost_c_small: f64, cost_c_for_g: f64) -> Result<Vec<ComparisonRow>> {
    Ok(Section3Options::new(cost_c_small, cost_c_for_g)?.evaluate(params))
}
