//! Two-stage Ellsberg drawing plans.
//!
//! Two urns hold red and black balls: the risky urn half and half, the
//! ambiguous urn an unknown proportion `p` of red. A plan draws twice with
//! replacement, first from one urn and then from one urn, and succeeds
//! when both balls have the same color. Each plan carries its own success
//! payoff; failure leaves a fixed, lower well-being.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prospects::{ChanceInfo, Pessimism, WellBeing, TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UrnKind {
    Risky,
    Ambiguous,
}

impl UrnKind {
    /// Chance of drawing red.
    pub fn red_chance(self) -> ChanceInfo {
        match self {
            UrnKind::Risky => ChanceInfo::Precise(0.5),
            UrnKind::Ambiguous => ChanceInfo::Vacuous,
        }
    }

    fn red_probability(self, composition: UrnComposition) -> f64 {
        match self {
            UrnKind::Risky => 0.5,
            UrnKind::Ambiguous => composition.p(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            UrnKind::Risky => "risky",
            UrnKind::Ambiguous => "ambiguous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    RR,
    AA,
    AR,
    RA,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::RR, Strategy::AA, Strategy::AR, Strategy::RA];

    pub fn from_urns(first: UrnKind, second: UrnKind) -> Self {
        use UrnKind::*;
        match (first, second) {
            (Risky, Risky) => Strategy::RR,
            (Ambiguous, Ambiguous) => Strategy::AA,
            (Ambiguous, Risky) => Strategy::AR,
            (Risky, Ambiguous) => Strategy::RA,
        }
    }

    pub fn first(self) -> UrnKind {
        match self {
            Strategy::RR | Strategy::RA => UrnKind::Risky,
            Strategy::AA | Strategy::AR => UrnKind::Ambiguous,
        }
    }

    pub fn second(self) -> UrnKind {
        match self {
            Strategy::RR | Strategy::AR => UrnKind::Risky,
            Strategy::AA | Strategy::RA => UrnKind::Ambiguous,
        }
    }

    pub fn index(self) -> usize {
        Strategy::ALL.iter().position(|&s| s == self).unwrap()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::RR => "RR",
            Strategy::AA => "AA",
            Strategy::AR => "AR",
            Strategy::RA => "RA",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Strategy::ALL.into_iter().find(|s| s.as_str().eq_ignore_ascii_case(name))
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Proportion of red balls in the ambiguous urn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UrnComposition(f64);

impl UrnComposition {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange { what: "ambiguous urn red proportion".into(), value: p });
        }
        Ok(Self(p))
    }

    pub fn p(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffSchedule {
    pub rr: WellBeing,
    pub aa: WellBeing,
    pub ar: WellBeing,
    pub ra: WellBeing,
    /// Well-being when the two colors differ.
    pub fail: WellBeing,
}

impl Default for PayoffSchedule {
    fn default() -> Self {
        Self { rr: 50.0, aa: 80.0, ar: 60.0, ra: 80.0, fail: 10.0 }
    }
}

impl PayoffSchedule {
    pub fn new(rr: f64, aa: f64, ar: f64, ra: f64, fail: f64) -> Result<Self> {
        let s = Self { rr, aa, ar, ra, fail };
        s.validate()?;
        Ok(s)
    }

    pub fn with_fail(fail: f64) -> Result<Self> {
        Self { fail, ..Self::default() }.validate_into()
    }

    /// Every plan pays `success`.
    pub fn equalized(success: f64, fail: f64) -> Result<Self> {
        Self::new(success, success, success, success, fail)
    }

    fn validate_into(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.rr, self.aa, self.ar, self.ra, self.fail];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPayoffs("non-finite payoff".into()));
        }
        let min_success = [self.rr, self.aa, self.ar, self.ra].into_iter().fold(f64::INFINITY, f64::min);
        if self.fail >= min_success {
            return Err(Error::InvalidPayoffs(format!(
                "failure well-being {} must be below every success payoff (min {min_success})",
                self.fail
            )));
        }
        Ok(())
    }

    pub fn success(&self, strategy: Strategy) -> WellBeing {
        match strategy {
            Strategy::RR => self.rr,
            Strategy::AA => self.aa,
            Strategy::AR => self.ar,
            Strategy::RA => self.ra,
        }
    }
}

/// Chance that both draws have the same color.
pub fn win_probability(strategy: Strategy, composition: UrnComposition) -> f64 {
    let p = composition.p();
    match strategy {
        Strategy::AA => p * p + (1.0 - p) * (1.0 - p),
        Strategy::RR | Strategy::AR | Strategy::RA => 0.5,
    }
}

/// Lowest and highest win probability over all compositions.
pub fn win_bounds(strategy: Strategy) -> (f64, f64) {
    match strategy {
        Strategy::AA => (0.5, 1.0),
        _ => (0.5, 0.5),
    }
}

pub fn expected_wellbeing(strategy: Strategy, composition: UrnComposition, schedule: &PayoffSchedule) -> f64 {
    mix_payoff(win_probability(strategy, composition), strategy, schedule)
}

fn mix_payoff(win: f64, strategy: Strategy, schedule: &PayoffSchedule) -> f64 {
    win * schedule.success(strategy) + (1.0 - win) * schedule.fail
}

/// Worst and best expected well-being over all compositions.
pub fn expected_wellbeing_bounds(strategy: Strategy, schedule: &PayoffSchedule) -> (f64, f64) {
    // Success pays more than failure, so expected well-being rises with
    // the win probability.
    let (lo, hi) = win_bounds(strategy);
    (mix_payoff(lo, strategy, schedule), mix_payoff(hi, strategy, schedule))
}

/// Hurwicz value of a whole plan evaluated once, over the unknown
/// composition.
pub fn strategy_hurwicz(strategy: Strategy, alpha: Pessimism, schedule: &PayoffSchedule) -> f64 {
    let (worst, best) = expected_wellbeing_bounds(strategy, schedule);
    alpha.mix(worst, best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    /// Strictly better at every composition.
    StrictlyDominates,
    /// Never worse, strictly better somewhere.
    WeaklyDominates,
    None,
}

impl Dominance {
    pub fn as_str(self) -> &'static str {
        match self {
            Dominance::StrictlyDominates => "strictly_dominates",
            Dominance::WeaklyDominates => "weakly_dominates",
            Dominance::None => "none",
        }
    }

    fn classify(diffs: impl Iterator<Item = f64>) -> Self {
        let (mut all_strict, mut never_worse, mut some_strict) = (true, true, false);
        for d in diffs {
            if d > TOLERANCE {
                some_strict = true;
            } else {
                all_strict = false;
            }
            if d < -TOLERANCE {
                never_worse = false;
            }
        }
        if all_strict {
            Dominance::StrictlyDominates
        } else if never_worse && some_strict {
            Dominance::WeaklyDominates
        } else {
            Dominance::None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DominanceEntry {
    pub row: Strategy,
    pub column: Strategy,
    pub wellbeing: Dominance,
    pub win_probability: Dominance,
}

/// Compositions checked for dominance.
pub const DOMINANCE_GRID_STEPS: usize = 100;

pub fn composition_grid(steps: usize) -> impl Iterator<Item = UrnComposition> {
    (0..=steps).map(move |i| UrnComposition(i as f64 / steps as f64))
}

/// Pairwise dominance of plans, composition by composition on a 0.01 grid
/// of `p`. Entry `[row][column]` says how `row` relates to `column`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceMatrix {
    entries: Vec<DominanceEntry>,
}

impl DominanceMatrix {
    pub fn get(&self, row: Strategy, column: Strategy) -> &DominanceEntry {
        &self.entries[row.index() * 4 + column.index()]
    }

    pub fn entries(&self) -> &[DominanceEntry] {
        &self.entries
    }

    /// Plans that strictly dominate `target` in expected well-being.
    pub fn strict_dominators(&self, target: Strategy) -> Vec<Strategy> {
        Strategy::ALL
            .into_iter()
            .filter(|&s| self.get(s, target).wellbeing == Dominance::StrictlyDominates)
            .collect()
    }

    /// Number of plans each plan dominates (weakly or strictly) in
    /// expected well-being.
    pub fn dominated_count(&self, strategy: Strategy) -> usize {
        Strategy::ALL.iter().filter(|&&s| self.get(strategy, s).wellbeing != Dominance::None).count()
    }
}

pub fn dominance_matrix(schedule: &PayoffSchedule) -> DominanceMatrix {
    let grid: Vec<UrnComposition> = composition_grid(DOMINANCE_GRID_STEPS).collect();
    let mut entries = Vec::with_capacity(16);
    for row in Strategy::ALL {
        for column in Strategy::ALL {
            let wellbeing = Dominance::classify(
                grid.iter()
                    .map(|&c| expected_wellbeing(row, c, schedule) - expected_wellbeing(column, c, schedule)),
            );
            let win = Dominance::classify(
                grid.iter().map(|&c| win_probability(row, c) - win_probability(column, c)),
            );
            entries.push(DominanceEntry { row, column, wellbeing, win_probability: win });
        }
    }
    DominanceMatrix { entries }
}

const CHUNK: u64 = 1 << 16;

/// Observed color-match frequency over `n_samples` simulated plays.
///
/// Samples are split into fixed chunks; chunk `k` draws from the ChaCha
/// stream `k` of the master seed, so the estimate does not depend on how
/// many threads run the chunks.
pub fn monte_carlo(strategy: Strategy, composition: UrnComposition, n_samples: u64, seed: u64) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let first = strategy.first().red_probability(composition);
    let second = strategy.second().red_probability(composition);
    let chunks = n_samples.div_ceil(CHUNK);
    let wins: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let len = CHUNK.min(n_samples - k * CHUNK);
            (0..len)
                .filter(|_| {
                    let a = rng.gen::<f64>() < first;
                    let b = rng.gen::<f64>() < second;
                    a == b
                })
                .count() as u64
        })
        .sum();
    Ok(wins as f64 / n_samples as f64)
}
