//! Outcomes, credal probability information and the primitive criteria
//! (expected utility, its bounds over a credal set, Hurwicz and maxmin).
//!
//! A [`Prospect`] pairs a finite list of outcome profiles with a
//! [`CredalSet`] describing what is known about their probabilities. The
//! credal set may be a single distribution, per-state probability
//! intervals, or a finite list of distributions whose convex hull is the
//! set of admissible distributions.
//!
//! Utilities are plain closures over [`OutcomeProfile`]s; [`own_wellbeing`]
//! gives the linear utility of one person's final well-being.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for sum-to-one checks and for treating two values as equal.
pub const TOLERANCE: f64 = 1e-9;

/// Lifetime well-being units.
pub type WellBeing = f64;

/// Final well-being of every person in a scenario, in person order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutcomeProfile(Vec<WellBeing>);

impl OutcomeProfile {
    pub fn new(values: Vec<WellBeing>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::LengthMismatch { expected: 1, actual: 0 });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("well-being {v}")));
        }
        Ok(Self(values))
    }

    pub fn single(value: WellBeing) -> Result<Self> {
        Self::new(vec![value])
    }

    pub fn persons(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, person: usize) -> WellBeing {
        self.0[person]
    }

    pub fn values(&self) -> &[WellBeing] {
        &self.0
    }

    pub(crate) fn shifted(&self, k: f64) -> Self {
        Self(self.0.iter().map(|v| v + k).collect())
    }
}

/// Linear utility of person `person`'s final well-being.
pub fn own_wellbeing(person: usize) -> impl Fn(&OutcomeProfile) -> f64 {
    move |profile| profile.get(person)
}

/// Mean absolute difference over all unordered pairs; zero for fewer than
/// two entries.
pub fn mean_abs_pairwise_difference(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            total += (values[i] - values[j]).abs();
        }
    }
    total / (n * (n - 1) / 2) as f64
}

/// What is known about the probability of a single event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChanceInfo {
    Precise(f64),
    Interval(f64, f64),
    Vacuous,
}

impl ChanceInfo {
    pub fn precise(p: f64) -> Result<Self> {
        let c = ChanceInfo::Precise(p);
        c.validate("precise chance")?;
        Ok(c)
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        let c = ChanceInfo::Interval(lo, hi);
        c.validate("interval chance")?;
        Ok(c)
    }

    pub fn validate(&self, what: &str) -> Result<()> {
        match *self {
            ChanceInfo::Precise(p) => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::ProbabilityOutOfRange { what: what.to_string(), value: p });
                }
            }
            ChanceInfo::Interval(lo, hi) => {
                if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi && hi <= 1.0) {
                    return Err(Error::IncoherentInterval { what: what.to_string(), lo, hi });
                }
            }
            ChanceInfo::Vacuous => {}
        }
        Ok(())
    }

    /// Lower and upper probability. `Vacuous` normalizes to `(0, 1)`.
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            ChanceInfo::Precise(p) => (p, p),
            ChanceInfo::Interval(lo, hi) => (lo, hi),
            ChanceInfo::Vacuous => (0.0, 1.0),
        }
    }

    /// Chance information for the complementary event.
    pub fn complement(&self) -> Self {
        match *self {
            ChanceInfo::Precise(p) => ChanceInfo::Precise(1.0 - p),
            ChanceInfo::Interval(lo, hi) => ChanceInfo::Interval(1.0 - hi, 1.0 - lo),
            ChanceInfo::Vacuous => ChanceInfo::Vacuous,
        }
    }

    pub fn is_precise(&self) -> bool {
        let (lo, hi) = self.bounds();
        (hi - lo).abs() <= TOLERANCE
    }

    /// Same information up to floating tolerance, with `Vacuous` equal to
    /// `Interval(0, 1)`.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let (a, b) = self.bounds();
        let (c, d) = other.bounds();
        (a - c).abs() <= TOLERANCE && (b - d).abs() <= TOLERANCE
    }
}

/// Set of probability distributions over a prospect's states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CredalSet {
    /// A single distribution.
    Point(Vec<f64>),
    /// Per-state lower/upper probabilities; the set is every distribution
    /// respecting all bounds.
    Intervals(Vec<ChanceInfo>),
    /// Convex hull of the listed distributions.
    Finite(Vec<Vec<f64>>),
}

fn check_distribution(dist: &[f64], states: usize) -> Result<()> {
    if dist.len() != states {
        return Err(Error::LengthMismatch { expected: states, actual: dist.len() });
    }
    for &p in dist {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange { what: "distribution entry".into(), value: p });
        }
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > TOLERANCE {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

impl CredalSet {
    pub fn validate(&self, states: usize) -> Result<()> {
        match self {
            CredalSet::Point(d) => check_distribution(d, states),
            CredalSet::Intervals(bounds) => {
                if bounds.len() != states {
                    return Err(Error::LengthMismatch { expected: states, actual: bounds.len() });
                }
                for (i, c) in bounds.iter().enumerate() {
                    c.validate(&format!("state {i}"))?;
                }
                let lo: f64 = bounds.iter().map(|c| c.bounds().0).sum();
                let hi: f64 = bounds.iter().map(|c| c.bounds().1).sum();
                if lo > 1.0 + TOLERANCE || hi < 1.0 - TOLERANCE {
                    return Err(Error::IncoherentCredalSet(format!(
                        "lower bounds sum to {lo}, upper bounds sum to {hi}; need lower <= 1 <= upper"
                    )));
                }
                Ok(())
            }
            CredalSet::Finite(members) => {
                if members.is_empty() {
                    return Err(Error::IncoherentCredalSet("finite credal set is empty".into()));
                }
                members.iter().try_for_each(|d| check_distribution(d, states))
            }
        }
    }

    /// Lowest and highest expectation of `values` over the set.
    ///
    /// Interval bounds use the greedy saturation rule: start every state at
    /// its lower bound, then hand the remaining mass to the highest-valued
    /// states first (for the upper expectation) or the lowest-valued first
    /// (for the lower one), each up to its upper bound.
    pub fn expectation_bounds(&self, values: &[f64]) -> (f64, f64) {
        match self {
            CredalSet::Point(d) => {
                let e = dot(d, values);
                (e, e)
            }
            CredalSet::Intervals(bounds) => {
                let mut order: Vec<usize> = (0..values.len()).collect();
                order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
                let low = saturate(bounds, values, order.iter().copied());
                let high = saturate(bounds, values, order.iter().rev().copied());
                (low, high)
            }
            CredalSet::Finite(members) => members
                .iter()
                .map(|d| dot(d, values))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e), hi.max(e))),
        }
    }

    /// Highest probability any member assigns to `state`.
    pub fn upper_probability(&self, state: usize) -> f64 {
        let mut indicator = vec![0.0; self.len()];
        indicator[state] = 1.0;
        self.expectation_bounds(&indicator).1
    }

    pub fn len(&self) -> usize {
        match self {
            CredalSet::Point(d) => d.len(),
            CredalSet::Intervals(b) => b.len(),
            CredalSet::Finite(m) => m.first().map_or(0, Vec::len),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Keep only the listed states, in order.
    pub(crate) fn restrict(&self, keep: &[usize]) -> Self {
        let pick = |d: &Vec<f64>| keep.iter().map(|&i| d[i]).collect::<Vec<_>>();
        match self {
            CredalSet::Point(d) => CredalSet::Point(pick(d)),
            CredalSet::Intervals(b) => CredalSet::Intervals(keep.iter().map(|&i| b[i]).collect()),
            CredalSet::Finite(m) => CredalSet::Finite(m.iter().map(pick).collect()),
        }
    }
}

fn dot(dist: &[f64], values: &[f64]) -> f64 {
    dist.iter().zip(values).map(|(p, v)| p * v).sum()
}

fn saturate(bounds: &[ChanceInfo], values: &[f64], order: impl Iterator<Item = usize>) -> f64 {
    let mut mass: Vec<f64> = bounds.iter().map(|c| c.bounds().0).collect();
    let mut remaining = 1.0 - mass.iter().sum::<f64>();
    for i in order {
        if remaining <= 0.0 {
            break;
        }
        let (lo, hi) = bounds[i].bounds();
        let add = (hi - lo).min(remaining);
        mass[i] += add;
        remaining -= add;
    }
    dot(&mass, values)
}

/// Pessimism index of the Hurwicz criterion: weight on the worst case.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Pessimism(f64);

impl Pessimism {
    pub const MAXMIN: Pessimism = Pessimism(1.0);
    pub const MAXMAX: Pessimism = Pessimism(0.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `alpha * worst + (1 - alpha) * best`.
    pub fn mix(self, worst: f64, best: f64) -> f64 {
        self.0 * worst + (1.0 - self.0) * best
    }
}

impl TryFrom<f64> for Pessimism {
    type Error = Error;
    fn try_from(alpha: f64) -> Result<Self> {
        Pessimism::new(alpha)
    }
}

impl From<Pessimism> for f64 {
    fn from(p: Pessimism) -> f64 {
        p.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EuBounds {
    pub min: f64,
    pub max: f64,
}

/// Outcome profiles with credal probability information over them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prospect {
    states: Vec<OutcomeProfile>,
    credal: CredalSet,
}

impl Prospect {
    pub fn new(states: Vec<OutcomeProfile>, credal: CredalSet) -> Result<Self> {
        let first = states.first().ok_or(Error::EmptyProspect)?;
        let arity = first.persons();
        if let Some(bad) = states.iter().find(|s| s.persons() != arity) {
            return Err(Error::LengthMismatch { expected: arity, actual: bad.persons() });
        }
        credal.validate(states.len())?;
        Ok(Self { states, credal })
    }

    /// Single-person prospect over the given well-being levels.
    pub fn over_wellbeing(levels: &[WellBeing], credal: CredalSet) -> Result<Self> {
        let states = levels.iter().map(|&w| OutcomeProfile::single(w)).collect::<Result<Vec<_>>>()?;
        Self::new(states, credal)
    }

    /// Two-outcome prospect: `success` with chance `chance`, else `failure`.
    pub fn binary(success: WellBeing, failure: WellBeing, chance: ChanceInfo) -> Result<Self> {
        chance.validate("success chance")?;
        let credal = match chance {
            ChanceInfo::Precise(p) => CredalSet::Point(vec![p, 1.0 - p]),
            c => CredalSet::Intervals(vec![c, c.complement()]),
        };
        Self::over_wellbeing(&[success, failure], credal)
    }

    pub fn states(&self) -> &[OutcomeProfile] {
        &self.states
    }

    pub fn credal(&self) -> &CredalSet {
        &self.credal
    }

    pub fn persons(&self) -> usize {
        self.states[0].persons()
    }

    fn utilities(&self, utility: impl Fn(&OutcomeProfile) -> f64) -> Vec<f64> {
        self.states.iter().map(utility).collect()
    }

    /// Expected utility under one distribution over the states.
    pub fn eu(&self, distribution: &[f64], utility: impl Fn(&OutcomeProfile) -> f64) -> Result<f64> {
        check_distribution(distribution, self.states.len())?;
        Ok(dot(distribution, &self.utilities(utility)))
    }

    pub fn eu_bounds(&self, utility: impl Fn(&OutcomeProfile) -> f64) -> EuBounds {
        let (min, max) = self.credal.expectation_bounds(&self.utilities(utility));
        EuBounds { min, max }
    }

    pub fn hurwicz(&self, alpha: Pessimism, utility: impl Fn(&OutcomeProfile) -> f64) -> f64 {
        let b = self.eu_bounds(utility);
        alpha.mix(b.min, b.max)
    }

    pub fn maxmin(&self, utility: impl Fn(&OutcomeProfile) -> f64) -> f64 {
        self.hurwicz(Pessimism::MAXMIN, utility)
    }

    /// Same prospect with `k` added to every well-being value.
    pub fn shifted(&self, k: f64) -> Self {
        Self {
            states: self.states.iter().map(|s| s.shifted(k)).collect(),
            credal: self.credal.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cure_or_blind(chance: ChanceInfo) -> Prospect {
        Prospect::binary(80.0, 50.0, chance).unwrap()
    }

    #[test]
    fn eu_of_even_treatment_is_65() {
        let p = cure_or_blind(ChanceInfo::Precise(0.5));
        assert_eq!(p.eu(&[0.5, 0.5], own_wellbeing(0)).unwrap(), 65.0);
    }

    #[test]
    fn eu_point_mass_picks_state() {
        let p = Prospect::over_wellbeing(&[10.0, 20.0, 30.0], CredalSet::Point(vec![0.0, 1.0, 0.0])).unwrap();
        assert_eq!(p.eu(&[0.0, 0.0, 1.0], own_wellbeing(0)).unwrap(), 30.0);
        assert_eq!(p.eu(&[0.0, 1.0, 0.0], own_wellbeing(0)).unwrap(), 20.0);
    }

    #[test]
    fn eu_quarter_chance_matches_sampling() {
        use rand::{Rng, SeedableRng};
        let p = cure_or_blind(ChanceInfo::Precise(0.25));
        let exact = p.eu(&[0.25, 0.75], own_wellbeing(0)).unwrap();
        assert!((exact - 57.5).abs() < 1e-12);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        let total: f64 = (0..n).map(|_| if rng.gen::<f64>() < 0.25 { 80.0 } else { 50.0 }).sum();
        assert!((total / n as f64 - exact).abs() < 0.05);
    }

    #[test]
    fn eu_rejects_bad_distributions() {
        let p = cure_or_blind(ChanceInfo::Precise(0.5));
        assert!(matches!(p.eu(&[1.0], own_wellbeing(0)), Err(Error::LengthMismatch { .. })));
        assert!(matches!(p.eu(&[0.5, 0.6], own_wellbeing(0)), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn interval_bounds_match_grid() {
        let p = cure_or_blind(ChanceInfo::Interval(0.25, 0.75));
        let b = p.eu_bounds(own_wellbeing(0));
        assert!((b.min - 57.5).abs() < 1e-12 && (b.max - 72.5).abs() < 1e-12);

        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..=1000 {
            let q = i as f64 / 1000.0;
            if (0.25..=0.75).contains(&q) {
                let e = q * 80.0 + (1.0 - q) * 50.0;
                lo = lo.min(e);
                hi = hi.max(e);
            }
        }
        assert!((b.min - lo).abs() < 1e-9 && (b.max - hi).abs() < 1e-9);
    }

    #[test]
    fn vacuous_bounds_are_extremes() {
        let b = cure_or_blind(ChanceInfo::Vacuous).eu_bounds(own_wellbeing(0));
        assert_eq!((b.min, b.max), (50.0, 80.0));
    }

    #[test]
    fn point_bounds_degenerate() {
        let b = cure_or_blind(ChanceInfo::Precise(0.3)).eu_bounds(own_wellbeing(0));
        assert!((b.min - 59.0).abs() < 1e-12);
        assert_eq!(b.min, b.max);
    }

    #[test]
    fn hurwicz_examples() {
        let moderate = cure_or_blind(ChanceInfo::Interval(0.25, 0.75));
        let h = moderate.hurwicz(Pessimism::new(0.8).unwrap(), own_wellbeing(0));
        assert!((h - 60.5).abs() < 1e-12);
        assert!((moderate.maxmin(own_wellbeing(0)) - 57.5).abs() < 1e-12);

        let vacuous = cure_or_blind(ChanceInfo::Vacuous);
        assert_eq!(vacuous.maxmin(own_wellbeing(0)), 50.0);

        let precise = cure_or_blind(ChanceInfo::Precise(0.5));
        for a in [0.0, 0.3, 1.0] {
            assert_eq!(precise.hurwicz(Pessimism::new(a).unwrap(), own_wellbeing(0)), 65.0);
        }
    }

    #[test]
    fn alpha_out_of_range_rejected() {
        assert_eq!(Pessimism::new(1.5), Err(Error::AlphaOutOfRange(1.5)));
        assert!(Pessimism::new(-0.1).is_err());
        assert!(Pessimism::new(f64::NAN).is_err());
    }

    #[test]
    fn incoherent_credal_sets_rejected() {
        let too_low = CredalSet::Intervals(vec![ChanceInfo::Interval(0.1, 0.2), ChanceInfo::Interval(0.1, 0.3)]);
        assert!(matches!(too_low.validate(2), Err(Error::IncoherentCredalSet(_))));
        let too_high = CredalSet::Intervals(vec![ChanceInfo::Interval(0.6, 0.9), ChanceInfo::Interval(0.5, 0.6)]);
        assert!(matches!(too_high.validate(2), Err(Error::IncoherentCredalSet(_))));
        let reversed = CredalSet::Intervals(vec![ChanceInfo::Interval(0.9, 0.2), ChanceInfo::Vacuous]);
        assert!(matches!(reversed.validate(2), Err(Error::IncoherentInterval { .. })));
        assert!(CredalSet::Finite(vec![]).validate(2).is_err());
        assert!(CredalSet::Point(vec![0.5, 0.4]).validate(2).is_err());
    }

    #[test]
    fn finite_set_enumerates_members() {
        let credal = CredalSet::Finite(vec![vec![1.0, 0.0], vec![0.2, 0.8], vec![0.5, 0.5]]);
        let p = Prospect::over_wellbeing(&[80.0, 50.0], credal).unwrap();
        let b = p.eu_bounds(own_wellbeing(0));
        assert!((b.min - 56.0).abs() < 1e-12);
        assert_eq!(b.max, 80.0);
    }

    #[test]
    fn three_state_interval_saturation() {
        // Greedy result checked against a brute-force grid over the simplex.
        let bounds = vec![
            ChanceInfo::Interval(0.1, 0.5),
            ChanceInfo::Interval(0.2, 0.6),
            ChanceInfo::Interval(0.0, 0.4),
        ];
        let values = [10.0, 40.0, 100.0];
        let credal = CredalSet::Intervals(bounds.clone());
        let (lo, hi) = credal.expectation_bounds(&values);

        let (mut blo, mut bhi) = (f64::INFINITY, f64::NEG_INFINITY);
        let steps = 200;
        for i in 0..=steps {
            for j in 0..=(steps - i) {
                let p = [i as f64 / steps as f64, j as f64 / steps as f64, (steps - i - j) as f64 / steps as f64];
                let ok = p.iter().zip(&bounds).all(|(x, c)| {
                    let (l, h) = c.bounds();
                    *x >= l - 1e-12 && *x <= h + 1e-12
                });
                if ok {
                    let e = dot(&p, &values);
                    blo = blo.min(e);
                    bhi = bhi.max(e);
                }
            }
        }
        assert!((lo - blo).abs() < 1e-9, "{lo} vs {blo}");
        assert!((hi - bhi).abs() < 1e-9, "{hi} vs {bhi}");
    }

    #[test]
    fn complement_and_vacuous_normalization() {
        assert_eq!(ChanceInfo::Vacuous.bounds(), (0.0, 1.0));
        assert!(ChanceInfo::Vacuous.approx_eq(&ChanceInfo::Interval(0.0, 1.0)));
        assert_eq!(ChanceInfo::Interval(0.25, 0.6).complement(), ChanceInfo::Interval(0.4, 0.75));
    }

    #[test]
    fn pairwise_difference_index() {
        assert_eq!(mean_abs_pairwise_difference(&[80.0, 50.0]), 30.0);
        assert_eq!(mean_abs_pairwise_difference(&[1.0]), 0.0);
        assert!((mean_abs_pairwise_difference(&[0.0, 3.0, 6.0]) - 4.0).abs() < 1e-12);
    }
}
