//! Report builders behind each `peu` subcommand.

use crate::ellsberg::{
    dominance_matrix, expected_wellbeing, expected_wellbeing_bounds, monte_carlo, strategy_hurwicz, win_bounds,
    win_probability, PayoffSchedule, Strategy, UrnComposition,
};
use crate::error::{Error, Result};
use crate::prospects::Pessimism;
use crate::report::{Cell, Provenance, Report, Table};
use crate::row;
use crate::scenario::Scenario;
use crate::sequential::{detect_violations, rectangularity_gap, simulate, AgentPolicy, DecisionTree, TraceRecord, ViolationReport};
use crate::social::{
    builtin_options, compare, peu_breakdown, PeuParams, Section3Options, SocialOption, SECTION3_COMPARISONS,
};
use crate::sweep::{heu_reversal, peu_region, Grid, HEU_AXES, PEU_AXES};

/// A finished report plus whether it found a disagreement with the
/// expected directions (reproduce only).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub mismatch: bool,
}

fn params_provenance(p: Provenance, params: &PeuParams) -> Provenance {
    p.param("alpha", params.alpha.value()).param("beta", params.beta).param("gamma", params.gamma)
}

fn schedule_provenance(p: Provenance, s: &PayoffSchedule) -> Provenance {
    p.param("payoff_rr", s.rr)
        .param("payoff_aa", s.aa)
        .param("payoff_ar", s.ar)
        .param("payoff_ra", s.ra)
        .param("w_fail", s.fail)
}

pub fn option_values_table(name: &str, options: &[SocialOption], params: &PeuParams) -> Table {
    let persons = options.first().map(|o| o.persons.clone()).unwrap_or_default();
    let mut columns = vec!["option".to_string()];
    columns.extend(persons.iter().map(|p| format!("value_{p}")));
    columns.extend(["total", "ex_ante_inequality", "ex_post_inequality", "peu_value"].map(String::from));
    let mut t = Table::with_columns(name, columns);
    for o in options {
        let b = peu_breakdown(o, params);
        let mut r: Vec<Cell> = vec![o.name.clone().into()];
        r.extend(b.individual.iter().map(|&v| Cell::from(v)));
        r.extend(row![b.total, b.ex_ante_inequality, b.ex_post_inequality, b.value]);
        t.push(r);
    }
    t
}

/// Comparisons A-L. `cost_c_small` applies to H, `cost_c_for_g` to G.
pub fn reproduce_section3(params: &PeuParams, cost_c_small: f64, cost_c_for_g: f64) -> Result<Outcome> {
    let options = Section3Options::new(cost_c_small, cost_c_for_g)?;
    let rows = options.evaluate(params);
    let prov = params_provenance(Provenance::new("reproduce --section 3"), params)
        .param("cost_c_g", cost_c_for_g)
        .param("cost_c_h", cost_c_small)
        .param("cost_c_def", 0.0);
    let mut report = Report::new("Pairwise comparisons A-L of the eight treatments", prov);

    report.tables.push(option_values_table("option values (c = 0)", &builtin_options(0.0)?, params));

    let mut t = Table::new(
        "verdicts",
        &["label", "left", "right", "cost_c", "left_value", "right_value", "margin", "relation", "expected", "match", "note"],
    );
    for r in &rows {
        t.push(row![
            r.label.to_string(),
            r.verdict.left.as_str(),
            r.verdict.right.as_str(),
            r.cost_c,
            r.left_value,
            r.right_value,
            r.verdict.margin,
            r.verdict.relation.as_str(),
            r.expected.as_str(),
            r.matches,
            r.note,
        ]);
    }
    report.tables.push(t);

    let matched = rows.iter().filter(|r| r.matches).count();
    let mut s = Table::new("summary", &["matches", "total", "mismatched"]);
    let bad: Vec<String> = rows.iter().filter(|r| !r.matches).map(|r| r.label.to_string()).collect();
    s.push(row![matched, rows.len(), bad.join(" ")]);
    report.tables.push(s);

    let g_limit = g_threshold(params);
    report.notes.push(format!(
        "G holds under these parameters iff c < 15(beta + gamma) = {g_limit}; the unrestricted range is 0 < c < 15."
    ));
    report.notes.push("D and G are compared against option (1); see the note column.".into());
    debug_assert_eq!(rows.len(), SECTION3_COMPARISONS.len());
    Ok(Outcome { report, mismatch: matched != rows.len() })
}

fn g_threshold(params: &PeuParams) -> f64 {
    15.0 * (params.beta + params.gamma)
}

pub struct Section4Args {
    pub alpha: Pessimism,
    pub schedule: PayoffSchedule,
    pub composition: UrnComposition,
    pub seed: u64,
}

fn trace_row(t: &TraceRecord) -> Vec<Cell> {
    let alt = |i: usize| t.stage_values[i].alternative.map(|a| a.1);
    row![
        t.policy.name(),
        t.first_choice.as_str(),
        format!("{:?}", t.first_color),
        t.second_choice.as_str(),
        format!("{:?}", t.second_color),
        t.realized.as_str(),
        t.won,
        t.wellbeing,
        t.stage_values[0].chosen_value,
        alt(0),
        t.stage_values[1].chosen_value,
        alt(1),
    ]
}

const TRACE_COLUMNS: [&str; 12] = [
    "agent",
    "first",
    "first_color",
    "second",
    "second_color",
    "realized",
    "won",
    "wellbeing",
    "stage1_value",
    "stage1_alternative",
    "stage2_value",
    "stage2_alternative",
];

const VIOLATION_COLUMNS: [&str; 8] = [
    "agent",
    "realized",
    "dominated_choice",
    "dominating",
    "dynamic_inconsistency",
    "ex_ante_best",
    "iia_violation",
    "iia_witness",
];

fn violation_row(agent: &str, v: &ViolationReport) -> Vec<Cell> {
    let witness = v.iia_witness.as_ref().map(|w| {
        let names = |m: &[Strategy]| m.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ");
        format!(
            "chooses {} from {{{}}} but {} from {{{}}}",
            w.chosen,
            names(&w.menu),
            w.chosen_from_submenu,
            names(&w.submenu)
        )
    });
    row![
        agent,
        v.realized.as_str(),
        v.dominated_choice,
        v.dominating.map(|s| s.as_str()),
        v.dynamic_inconsistency,
        v.ex_ante_best.as_str(),
        v.iia_violation,
        witness,
    ]
}

pub fn reproduce_section4(args: &Section4Args) -> Result<Outcome> {
    let Section4Args { alpha, schedule, composition, seed } = *args;
    let prov = schedule_provenance(Provenance::new("reproduce --section 4"), &schedule)
        .param("alpha", alpha.value())
        .param("p", composition.p())
        .seed(seed);
    let mut report = Report::new("Two-stage Ellsberg plans", prov);

    let mut t = Table::new("win probability bounds", &["strategy", "min", "max"]);
    for s in Strategy::ALL {
        let (lo, hi) = win_bounds(s);
        t.push(row![s.as_str(), lo, hi]);
    }
    report.tables.push(t);

    let matrix = dominance_matrix(&schedule);
    let mut t = Table::new("dominance", &["row", "column", "expected_wellbeing", "win_probability"]);
    for e in matrix.entries().iter().filter(|e| e.row != e.column) {
        t.push(row![e.row.as_str(), e.column.as_str(), e.wellbeing.as_str(), e.win_probability.as_str()]);
    }
    report.tables.push(t);

    let ps = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut columns = vec!["strategy".to_string()];
    columns.extend(ps.iter().map(|p| format!("p={p}")));
    columns.extend(["worst", "best", "hurwicz"].map(String::from));
    let mut t = Table::with_columns("expected well-being", columns);
    for s in Strategy::ALL {
        let mut r: Vec<Cell> = vec![s.as_str().into()];
        for &p in &ps {
            r.push(expected_wellbeing(s, UrnComposition::new(p)?, &schedule).into());
        }
        let (lo, hi) = expected_wellbeing_bounds(s, &schedule);
        r.extend(row![lo, hi, strategy_hurwicz(s, alpha, &schedule)]);
        t.push(r);
    }
    report.tables.push(t);

    let mut t = Table::new("recursive vs global", &["strategy", "recursive", "global", "gap"]);
    for g in rectangularity_gap(alpha, &schedule)? {
        t.push(row![g.strategy.as_str(), g.recursive, g.global, g.gap]);
    }
    report.tables.push(t);

    let tree = DecisionTree::two_stage(schedule);
    let agents = [AgentPolicy::Naive(alpha), AgentPolicy::Sophisticated(alpha), AgentPolicy::GlobalPlanner(alpha)];
    let mut traces = Table::new("agent traces", &TRACE_COLUMNS);
    let mut violations = Table::new("violations", &VIOLATION_COLUMNS);
    let mut results = vec![];
    for policy in agents {
        let trace = simulate(policy, &tree, composition, seed)?;
        let v = detect_violations(policy, &tree)?;
        traces.push(trace_row(&trace));
        violations.push(violation_row(policy.name(), &v));
        results.push((trace, v));
    }
    report.tables.push(traces);
    report.tables.push(violations);

    let (naive, soph, global) = (&results[0], &results[1], &results[2]);
    let best_global = Strategy::ALL
        .into_iter()
        .all(|s| strategy_hurwicz(Strategy::AA, alpha, &schedule) >= strategy_hurwicz(s, alpha, &schedule) - 1e-9);
    let claims: [(&str, bool); 6] = [
        (
            "AA wins at least as often as every plan at every p",
            crate::ellsberg::composition_grid(crate::ellsberg::DOMINANCE_GRID_STEPS)
                .all(|c| Strategy::ALL.into_iter().all(|s| win_probability(Strategy::AA, c) >= win_probability(s, c) - 1e-12)),
        ),
        ("RR is dominated by AR", matrix.get(Strategy::AR, Strategy::RR).wellbeing != crate::ellsberg::Dominance::None),
        ("global planner picks AA, which is optimal", global.0.realized == Strategy::AA && best_global),
        (
            "naive agent realizes RR, dominated and dynamically inconsistent",
            naive.0.realized == Strategy::RR && naive.1.dominated_choice && naive.1.dynamic_inconsistency,
        ),
        (
            "sophisticated agent realizes AR, consistent but violating contraction consistency",
            soph.0.realized == Strategy::AR && !soph.1.dynamic_inconsistency && soph.1.iia_violation,
        ),
        ("global planner raises no violation", !global.1.dominated_choice && !global.1.dynamic_inconsistency && !global.1.iia_violation),
    ];
    let mut t = Table::new("claims", &["claim", "holds"]);
    for (c, ok) in claims {
        t.push(row![c, ok]);
    }
    report.tables.push(t);

    report.notes.push(
        "Plans are keyed by urn order (RR, AA, AR, RA), never by Roman numeral, because the numeral-to-name mapping is inconsistent. Payoffs follow the names: RR 50, AA 80, AR 60, RA 80."
            .into(),
    );
    report.notes.push(
        "The phrase 'neither with ambiguous and risky nor with ambiguous and risky' names one plan twice; it is read as the pair {AR, AA}.".into(),
    );
    report.notes.push(
        "Contraction consistency is checked over all 15 menus of plans; a first urn with a single continuation in a menu is a simultaneous two-draw bet.".into(),
    );
    let mismatch = claims.iter().any(|c| !c.1);
    Ok(Outcome { report, mismatch })
}

pub fn reproduce(section: u8, params: &PeuParams, cost_c_small: f64, cost_c_for_g: f64, s4: &Section4Args) -> Result<Outcome> {
    match section {
        3 => reproduce_section3(params, cost_c_small, cost_c_for_g),
        4 => reproduce_section4(s4),
        other => Err(Error::UnknownSection(other)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    PeuParams,
    HeuReversal,
}

pub fn sweep(kind: SweepKind, grid_spec: &str, cost_c_small: f64, cost_c_for_g: f64) -> Result<Report> {
    match kind {
        SweepKind::PeuParams => {
            let grid = Grid::parse(grid_spec, &PEU_AXES)?;
            let options = Section3Options::new(cost_c_small, cost_c_for_g)?;
            let region = peu_region(&grid, &options)?;
            let prov = Provenance::new("sweep --kind peu-params")
                .param("grid", grid.describe())
                .param("cost_c_g", cost_c_for_g)
                .param("cost_c_h", cost_c_small);
            let mut report = Report::new("Parameters reproducing all twelve comparisons", prov);
            let mut s = Table::new("summary", &["grid_points", "region_points", "contains_default"]);
            s.push(row![region.grid_points, region.points.len(), region.contains(0.8, 0.5, 0.25)]);
            report.tables.push(s);
            let mut t = Table::new("region", &["alpha", "beta", "gamma"]);
            for p in &region.points {
                t.push(row![p[0], p[1], p[2]]);
            }
            report.tables.push(t);
            report.notes.push("Comparisons D, E, F use c = 0.".into());
            Ok(report)
        }
        SweepKind::HeuReversal => {
            let grid = Grid::parse(grid_spec, &HEU_AXES)?;
            let points = heu_reversal(&grid)?;
            let prov = Provenance::new("sweep --kind heu-reversal").param("grid", grid.describe());
            let mut report = Report::new("Ambiguous versus risky bet under the Hurwicz criterion", prov);

            let mut summary = Table::new("reversal region", &["alpha", "delta", "ambiguous_preferred_points", "max_q_ambiguous_preferred"]);
            for &a in grid.axis("alpha") {
                for &d in grid.axis("delta") {
                    let hits: Vec<f64> = points
                        .iter()
                        .filter(|p| p.alpha == a && p.delta == d && p.ambiguous_preferred())
                        .map(|p| p.q)
                        .collect();
                    let max_q = hits.iter().copied().reduce(f64::max);
                    summary.push(row![a, d, hits.len(), max_q]);
                }
            }
            report.tables.push(summary);

            let mut t = Table::new("points", &["alpha", "q", "delta", "lo", "hi", "ambiguous_value", "risky_value", "preferred"]);
            for p in &points {
                let pref = if p.ambiguous_preferred() {
                    "ambiguous"
                } else if (p.ambiguous_value - p.risky_value).abs() <= crate::prospects::TOLERANCE {
                    "indifferent"
                } else {
                    "risky"
                };
                t.push(row![p.alpha, p.q, p.delta, p.lo, p.hi, p.ambiguous_value, p.risky_value, pref]);
            }
            report.tables.push(t);
            report.notes.push("The ambiguous chance interval is [q - delta, q + delta] clipped to [0, 1]; both bets pay 1 on a win and 0 otherwise.".into());
            Ok(report)
        }
    }
}

pub fn evaluate(scenario: &Scenario, source: &str) -> Result<Report> {
    let params = &scenario.params;
    let prov = params_provenance(Provenance::new(&format!("evaluate --scenario {source}")), params)
        .param("options", scenario.options.len())
        .param("persons", scenario.persons.join(" "));
    let mut report = Report::new("Scenario evaluation", prov);
    report.tables.push(option_values_table("option values", &scenario.options, params));
    let mut t = Table::new("pairwise verdicts", &["left", "right", "margin", "relation"]);
    for (i, left) in scenario.options.iter().enumerate() {
        for right in &scenario.options[i + 1..] {
            let v = compare(left, right, params)?;
            t.push(row![v.left, v.right, v.margin, v.relation.as_str()]);
        }
    }
    report.tables.push(t);
    Ok(report)
}

pub fn ellsberg(composition: UrnComposition, samples: u64, seed: u64) -> Result<Report> {
    let prov = Provenance::new("ellsberg").param("p", composition.p()).param("samples", samples).seed(seed);
    let mut report = Report::new("Win probability: exact versus Monte Carlo", prov);
    let mut t = Table::new("win probability", &["strategy", "exact", "estimate", "abs_error", "three_sigma"]);
    for (i, s) in Strategy::ALL.into_iter().enumerate() {
        let exact = win_probability(s, composition);
        // Each plan gets its own sub-seed so estimates are independent.
        let est = monte_carlo(s, composition, samples, seed.wrapping_add(i as u64))?;
        let sigma = (exact * (1.0 - exact) / samples as f64).sqrt();
        t.push(row![s.as_str(), exact, est, (est - exact).abs(), 3.0 * sigma]);
    }
    report.tables.push(t);
    Ok(report)
}

pub fn sequential(policy: AgentPolicy, schedule: PayoffSchedule, composition: UrnComposition, seed: u64) -> Result<Report> {
    let prov = schedule_provenance(Provenance::new(&format!("sequential --agent {}", policy.name())), &schedule)
        .param("alpha", policy.alpha().value())
        .param("p", composition.p())
        .seed(seed);
    let mut report = Report::new("Sequential agent", prov);
    let tree = DecisionTree::two_stage(schedule);
    let trace = simulate(policy, &tree, composition, seed)?;
    let v = detect_violations(policy, &tree)?;
    let mut t = Table::new("trace", &TRACE_COLUMNS);
    t.push(trace_row(&trace));
    report.tables.push(t);
    let mut t = Table::new("violations", &VIOLATION_COLUMNS);
    t.push(violation_row(policy.name(), &v));
    report.tables.push(t);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4(alpha: f64) -> Section4Args {
        Section4Args {
            alpha: Pessimism::new(alpha).unwrap(),
            schedule: PayoffSchedule::default(),
            composition: UrnComposition::new(0.5).unwrap(),
            seed: 42,
        }
    }

    #[test]
    fn section3_defaults_match() {
        let o = reproduce_section3(&PeuParams::default(), 1.0, 1.0).unwrap();
        assert!(!o.mismatch);
        let s = o.report.table("summary").unwrap();
        assert_eq!(s.rows[0][0], Cell::Int(12));
    }

    #[test]
    fn section3_zero_weights_mismatch() {
        let o = reproduce_section3(&PeuParams::new(0.8, 0.0, 0.0).unwrap(), 1.0, 1.0).unwrap();
        assert!(o.mismatch);
        let s = o.report.table("summary").unwrap();
        let Cell::Text(bad) = &s.rows[0][2] else { panic!() };
        for label in ["A", "C", "G", "K"] {
            assert!(bad.split(' ').any(|x| x == label), "{bad}");
        }
    }

    #[test]
    fn section4_claims_hold_at_point_eight() {
        let o = reproduce_section4(&s4(0.8)).unwrap();
        let claims = o.report.table("claims").unwrap();
        for r in &claims.rows {
            assert_eq!(r[1], Cell::Bool(true), "{:?}", r[0]);
        }
        assert!(!o.mismatch);
        let v = o.report.table("violations").unwrap();
        assert_eq!(v.rows[0][1], Cell::from("RR"));
        assert_eq!(v.rows[0][2], Cell::Bool(true));
        assert_eq!(v.rows[1][1], Cell::from("AR"));
        assert_eq!(v.rows[1][6], Cell::Bool(true));
    }

    #[test]
    fn unknown_section() {
        let err = reproduce(5, &PeuParams::default(), 1.0, 1.0, &s4(0.8)).unwrap_err();
        assert_eq!(err, Error::UnknownSection(5));
    }

    #[test]
    fn evaluate_builtin_matches_reproduce() {
        let params = PeuParams::default();
        let file = crate::scenario::ScenarioFile::builtin(0.0, &params).unwrap();
        let scenario = file.validate().unwrap();
        let ev = evaluate(&scenario, "builtin").unwrap();
        let rep = reproduce_section3(&params, 1.0, 1.0).unwrap();
        assert_eq!(ev.table("option values").unwrap().rows, rep.report.table("option values (c = 0)").unwrap().rows);
    }

    #[test]
    fn ellsberg_report_errors_small() {
        let r = ellsberg(UrnComposition::new(0.3).unwrap(), 1_000_000, 42).unwrap();
        let t = r.table("win probability").unwrap();
        let aa = &t.rows[1];
        assert_eq!(aa[1], Cell::Num(0.3 * 0.3 + 0.7 * 0.7));
        let Cell::Num(err) = aa[3] else { panic!() };
        assert!(err < 0.002);
    }

    #[test]
    fn sweep_empty_grid() {
        let err = sweep(SweepKind::PeuParams, "alpha=1:0:0.1", 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::EmptyGrid(_)));
    }
}
