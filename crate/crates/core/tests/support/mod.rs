//! Generators shared by the property suites and the acceptance runner.

#![allow(dead_code)]

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::strategy::Strategy as Gen;

use peu_core::prospects::{ChanceInfo, CredalSet, Prospect};
use peu_core::social::{Correlation, PeuParams, SocialOption, Treatment};

pub const CASES: u32 = 1000;

pub fn config() -> ProptestConfig {
    ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() }
}

pub fn pool(n: usize) -> &'static rayon::ThreadPool {
    static POOLS: OnceLock<[rayon::ThreadPool; 2]> = OnceLock::new();
    let pools = POOLS.get_or_init(|| [1, 4].map(|k| rayon::ThreadPoolBuilder::new().num_threads(k).build().unwrap()));
    &pools[usize::from(n > 1)]
}

pub fn chance() -> impl Gen<Value = ChanceInfo> + Clone {
    prop_oneof![
        (0.0..=1.0f64).prop_map(|p| ChanceInfo::precise(p).unwrap()),
        (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b)| ChanceInfo::interval(a.min(b), a.max(b)).unwrap()),
        Just(ChanceInfo::Vacuous),
    ]
}

/// Three states whose interval chances always cover one third each.
pub fn prospect() -> impl Gen<Value = Prospect> {
    (prop::collection::vec(-100.0..100.0f64, 3), prop::collection::vec((0.0..0.3f64, 0.0..0.7f64), 3)).prop_map(
        |(levels, widths)| {
            let bounds: Vec<ChanceInfo> =
                widths.iter().map(|&(lo, w)| ChanceInfo::interval(lo, (lo + w + 0.34).min(1.0)).unwrap()).collect();
            Prospect::over_wellbeing(&levels, CredalSet::Intervals(bounds)).unwrap()
        },
    )
}

/// Two-person options; coupled treatments get matching chances.
pub fn option_with(name: &'static str, chance: impl Gen<Value = ChanceInfo> + Clone) -> impl Gen<Value = SocialOption> {
    (
        prop::collection::vec((0.0..100.0f64, 0.0..100.0f64), 2),
        chance.clone(),
        chance,
        prop_oneof![Just(Correlation::Independent), Just(Correlation::Comonotone), Just(Correlation::Antitone)],
    )
        .prop_map(move |(levels, c0, c1, corr)| {
            let c1 = match corr {
                Correlation::Independent => c1,
                Correlation::Comonotone => c0,
                Correlation::Antitone => c0.complement(),
            };
            let treatments = vec![Treatment::new(levels[0].0, levels[0].1, c0), Treatment::new(levels[1].0, levels[1].1, c1)];
            SocialOption::from_marginals(name, vec!["Ann".into(), "Bea".into()], treatments, corr).unwrap()
        })
}

pub fn option(name: &'static str) -> impl Gen<Value = SocialOption> {
    option_with(name, chance())
}

pub fn params() -> impl Gen<Value = PeuParams> {
    (0.0..=1.0f64, 0.0..2.0f64, 0.0..2.0f64).prop_map(|(a, b, g)| PeuParams::new(a, b, g).unwrap())
}

pub fn chance_precise() -> impl Gen<Value = ChanceInfo> + Clone {
    (0.0..=1.0f64).prop_map(|p| ChanceInfo::precise(p).unwrap())
}
