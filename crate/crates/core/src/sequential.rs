//! Two-stage decision tree and the agents that walk it.
//!
//! The tree alternates decision and chance nodes: pick the first urn,
//! observe a color, pick the second urn, observe a color, collect the
//! plan's payoff if the colors match. Chance nodes carry only their local
//! credal information. The second ambiguous draw is vacuous given the
//! first color: nothing observed at the first stage narrows the unknown
//! composition.
//!
//! Three agents use this tree:
//! - naive: scores each urn by its one-draw match chance at every stage,
//!   never looking ahead;
//! - sophisticated: backward induction with the Hurwicz value at every
//!   chance node;
//! - global planner: commits to the complete plan with the best Hurwicz
//!   value over the composition.
//!
//! Ties between options are broken by a fixed plan priority derived from
//! the dominance matrix (plans dominating more others first, then
//! `RR, AA, AR, RA` order), so every agent's menu choice is deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ellsberg::{
    dominance_matrix, strategy_hurwicz, DominanceMatrix, PayoffSchedule, Strategy, UrnComposition, UrnKind,
};
use crate::error::{Error, Result};
use crate::prospects::{ChanceInfo, CredalSet, Pessimism, WellBeing, TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Color {
    Red,
    Black,
}

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Node {
    Decision {
        /// Urn already drawn from, `None` at the root.
        first: Option<UrnKind>,
        options: Vec<(UrnKind, NodeId)>,
    },
    Chance {
        urn: UrnKind,
        /// Local chance of red at this node.
        red: ChanceInfo,
        red_child: NodeId,
        black_child: NodeId,
    },
    Terminal {
        strategy: Strategy,
        won: bool,
        wellbeing: WellBeing,
    },
}

/// Decision tree over a menu of complete plans.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    menu: Vec<Strategy>,
    schedule: PayoffSchedule,
}

impl DecisionTree {
    /// Full tree: either urn at either stage.
    pub fn two_stage(schedule: PayoffSchedule) -> Self {
        Self::from_menu(schedule, &Strategy::ALL).expect("full menu is nonempty")
    }

    /// Tree offering exactly the plans in `menu`.
    pub fn from_menu(schedule: PayoffSchedule, menu: &[Strategy]) -> Result<Self> {
        schedule.validate()?;
        let mut menu: Vec<Strategy> = Strategy::ALL.into_iter().filter(|s| menu.contains(s)).collect();
        menu.dedup();
        if menu.is_empty() {
            return Err(Error::MalformedTree("menu offers no plan".into()));
        }
        let mut tree = Self { nodes: vec![Node::Decision { first: None, options: vec![] }], menu, schedule };
        let mut root_options = vec![];
        for first in [UrnKind::Risky, UrnKind::Ambiguous] {
            let seconds: Vec<UrnKind> =
                tree.menu.iter().filter(|s| s.first() == first).map(|s| s.second()).collect();
            if seconds.is_empty() {
                continue;
            }
            let red_child = tree.add_second_stage(first, Color::Red, &seconds);
            let black_child = tree.add_second_stage(first, Color::Black, &seconds);
            let id = tree.push(Node::Chance { urn: first, red: first.red_chance(), red_child, black_child });
            root_options.push((first, id));
        }
        tree.nodes[0] = Node::Decision { first: None, options: root_options };
        Ok(tree)
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn add_second_stage(&mut self, first: UrnKind, observed: Color, seconds: &[UrnKind]) -> NodeId {
        let mut options = vec![];
        for &second in seconds {
            let strategy = Strategy::from_urns(first, second);
            let payoff = |color: Color| {
                let won = color == observed;
                let wellbeing = if won { self.schedule.success(strategy) } else { self.schedule.fail };
                Node::Terminal { strategy, won, wellbeing }
            };
            let (red, black) = (payoff(Color::Red), payoff(Color::Black));
            let red_child = self.push(red);
            let black_child = self.push(black);
            let id = self.push(Node::Chance { urn: second, red: second.red_chance(), red_child, black_child });
            options.push((second, id));
        }
        self.push(Node::Decision { first: Some(first), options })
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes.get(id).ok_or_else(|| Error::MalformedTree(format!("no node {id}")))
    }

    pub fn menu(&self) -> &[Strategy] {
        &self.menu
    }

    pub fn schedule(&self) -> &PayoffSchedule {
        &self.schedule
    }

    fn children_of(&self, id: NodeId, color: Color) -> Result<NodeId> {
        match self.node(id)? {
            Node::Chance { red_child, black_child, .. } => Ok(match color {
                Color::Red => *red_child,
                Color::Black => *black_child,
            }),
            _ => Err(Error::MalformedTree(format!("node {id} is not a chance node"))),
        }
    }
}

/// Hurwicz value of a binary chance node over its local red interval.
fn chance_value(red: ChanceInfo, red_value: f64, black_value: f64, alpha: Pessimism) -> f64 {
    let credal = match red {
        ChanceInfo::Precise(p) => CredalSet::Point(vec![p, 1.0 - p]),
        c => CredalSet::Intervals(vec![c, c.complement()]),
    };
    let (lo, hi) = credal.expectation_bounds(&[red_value, black_value]);
    alpha.mix(lo, hi)
}

/// Stagewise Hurwicz backward induction from `node`: terminals pay their
/// well-being, decisions take the best child, chance nodes take the
/// Hurwicz value over their local interval.
pub fn recursive_value(tree: &DecisionTree, node: NodeId, alpha: Pessimism) -> Result<f64> {
    match tree.node(node)? {
        Node::Terminal { wellbeing, .. } => Ok(*wellbeing),
        Node::Decision { options, .. } => {
            if options.is_empty() {
                return Err(Error::MalformedTree(format!("decision node {node} has no options")));
            }
            options
                .iter()
                .map(|&(_, child)| recursive_value(tree, child, alpha))
                .try_fold(f64::NEG_INFINITY, |best, v| Ok(best.max(v?)))
        }
        Node::Chance { red, red_child, black_child, .. } => {
            let r = recursive_value(tree, *red_child, alpha)?;
            let b = recursive_value(tree, *black_child, alpha)?;
            Ok(chance_value(*red, r, b, alpha))
        }
    }
}

/// Stagewise value of committing to `strategy` as a sequence of draws.
pub fn plan_value(strategy: Strategy, alpha: Pessimism, schedule: &PayoffSchedule) -> Result<f64> {
    let tree = DecisionTree::from_menu(*schedule, &[strategy])?;
    recursive_value(&tree, tree.root(), alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "alpha", rename_all = "snake_case")]
pub enum AgentPolicy {
    Naive(Pessimism),
    Sophisticated(Pessimism),
    GlobalPlanner(Pessimism),
}

impl AgentPolicy {
    pub fn alpha(&self) -> Pessimism {
        match *self {
            AgentPolicy::Naive(a) | AgentPolicy::Sophisticated(a) | AgentPolicy::GlobalPlanner(a) => a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AgentPolicy::Naive(_) => "naive",
            AgentPolicy::Sophisticated(_) => "sophisticated",
            AgentPolicy::GlobalPlanner(_) => "global",
        }
    }
}

/// Fixed total order on plans used to break value ties.
#[derive(Debug, Clone)]
struct Priority {
    order: Vec<Strategy>,
}

impl Priority {
    fn new(matrix: &DominanceMatrix) -> Self {
        let mut order = Strategy::ALL.to_vec();
        order.sort_by_key(|&s| std::cmp::Reverse(matrix.dominated_count(s)));
        Self { order }
    }

    fn rank(&self, s: Strategy) -> usize {
        self.order.iter().position(|&x| x == s).unwrap()
    }

    /// Index of the best `(value, plan)` candidate: highest value, ties
    /// within tolerance to the higher-priority plan.
    fn pick<T>(&self, candidates: &[(f64, Strategy, T)]) -> usize {
        let mut best = 0;
        for (i, c) in candidates.iter().enumerate().skip(1) {
            let b = &candidates[best];
            let better = if (c.0 - b.0).abs() <= TOLERANCE { self.rank(c.1) < self.rank(b.1) } else { c.0 > b.0 };
            if better {
                best = i;
            }
        }
        best
    }
}

/// One stage of a trace: the urn picked, the value the agent gave it, and
/// the best rejected alternative if there was one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageValue {
    pub chosen: UrnKind,
    pub chosen_value: f64,
    pub alternative: Option<(UrnKind, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub policy: AgentPolicy,
    pub first_choice: UrnKind,
    pub first_color: Color,
    pub second_choice: UrnKind,
    pub second_color: Color,
    pub realized: Strategy,
    pub won: bool,
    pub wellbeing: WellBeing,
    pub stage_values: [StageValue; 2],
}

/// Agent bound to a decision tree, with the plan priority for that tree's
/// payoff schedule.
struct Agent<'a> {
    policy: AgentPolicy,
    tree: &'a DecisionTree,
    priority: Priority,
}

/// What an agent does at one decision node.
struct StageChoice {
    chosen: UrnKind,
    child: NodeId,
    values: StageValue,
}

impl<'a> Agent<'a> {
    fn new(policy: AgentPolicy, tree: &'a DecisionTree) -> Self {
        let priority = Priority::new(&dominance_matrix(tree.schedule()));
        Self { policy, tree, priority }
    }

    fn alpha(&self) -> Pessimism {
        self.policy.alpha()
    }

    /// Naive one-draw score of an urn: Hurwicz value of its match chance.
    fn one_draw_score(&self, urn: UrnKind) -> f64 {
        let (lo, hi) = urn.red_chance().bounds();
        self.alpha().mix(lo, hi)
    }

    /// Value and plan for a subtree under sophisticated evaluation. With
    /// `fuse`, a first-stage branch with a single continuation is a
    /// simultaneous two-draw bet valued by its global Hurwicz value.
    fn solve(&self, node: NodeId, fuse: bool) -> Result<(f64, Strategy)> {
        match self.tree.node(node)? {
            Node::Terminal { wellbeing, strategy, .. } => Ok((*wellbeing, *strategy)),
            Node::Chance { red, red_child, black_child, .. } => {
                let (r, plan) = self.solve(*red_child, fuse)?;
                let (b, _) = self.solve(*black_child, fuse)?;
                if fuse {
                    if let Node::Decision { first: Some(_), options } = self.tree.node(*red_child)? {
                        if options.len() == 1 {
                            return Ok((strategy_hurwicz(plan, self.alpha(), self.tree.schedule()), plan));
                        }
                    }
                }
                Ok((chance_value(*red, r, b, self.alpha()), plan))
            }
            Node::Decision { options, .. } => {
                let candidates = options
                    .iter()
                    .map(|&(urn, child)| self.solve(child, fuse).map(|(v, plan)| (v, plan, urn)))
                    .collect::<Result<Vec<_>>>()?;
                if candidates.is_empty() {
                    return Err(Error::MalformedTree(format!("decision node {node} has no options")));
                }
                let best = &candidates[self.priority.pick(&candidates)];
                Ok((best.0, best.1))
            }
        }
    }

    fn decide(&self, node: NodeId, fuse: bool) -> Result<StageChoice> {
        let Node::Decision { first, options } = self.tree.node(node)? else {
            return Err(Error::MalformedTree(format!("node {node} is not a decision node")));
        };
        let candidates: Vec<(f64, Strategy, (UrnKind, NodeId))> = match self.policy {
            AgentPolicy::Naive(_) => options
                .iter()
                // The naive agent never forms a plan; the label is unused.
                .map(|&(urn, child)| (self.one_draw_score(urn), Strategy::from_urns(urn, urn), (urn, child)))
                .collect(),
            AgentPolicy::Sophisticated(_) => options
                .iter()
                .map(|&(urn, child)| self.solve(child, fuse).map(|(v, plan)| (v, plan, (urn, child))))
                .collect::<Result<_>>()?,
            AgentPolicy::GlobalPlanner(_) => options
                .iter()
                .flat_map(|&(urn, child)| {
                    self.tree
                        .menu()
                        .iter()
                        .filter(move |s| match first {
                            None => s.first() == urn,
                            Some(f) => s.first() == *f && s.second() == urn,
                        })
                        .map(move |&s| (strategy_hurwicz(s, self.alpha(), self.tree.schedule()), s, (urn, child)))
                })
                .collect(),
        };
        if candidates.is_empty() {
            return Err(Error::MalformedTree(format!("decision node {node} has no options")));
        }
        let pick = match self.policy {
            AgentPolicy::Naive(_) => naive_pick(&candidates),
            _ => self.priority.pick(&candidates),
        };
        let (value, _, (chosen, child)) = candidates[pick];
        let alternative = candidates
            .iter()
            .filter(|c| c.2 .0 != chosen)
            .map(|c| (c.2 .0, c.0))
            .fold(None, |acc: Option<(UrnKind, f64)>, c| match acc {
                Some(a) if a.1 >= c.1 => Some(a),
                _ => Some(c),
            });
        Ok(StageChoice { chosen, child, values: StageValue { chosen, chosen_value: value, alternative } })
    }

    /// Plan this agent picks from the tree's menu.
    fn menu_choice(&self, fuse: bool) -> Result<Strategy> {
        let stage1 = self.decide(self.tree.root(), fuse)?;
        let second_node = self.tree.children_of(stage1.child, Color::Red)?;
        let stage2 = self.decide(second_node, fuse)?;
        Ok(Strategy::from_urns(stage1.chosen, stage2.chosen))
    }

    /// Value this agent gives a complete plan it commits to in advance.
    fn ex_ante_plan_value(&self, strategy: Strategy) -> Result<f64> {
        match self.policy {
            AgentPolicy::GlobalPlanner(a) => Ok(strategy_hurwicz(strategy, a, self.tree.schedule())),
            AgentPolicy::Naive(a) | AgentPolicy::Sophisticated(a) => plan_value(strategy, a, self.tree.schedule()),
        }
    }
}

/// Highest one-draw score; ties go to the risky urn.
fn naive_pick(candidates: &[(f64, Strategy, (UrnKind, NodeId))]) -> usize {
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate().skip(1) {
        let b = &candidates[best];
        if c.0 > b.0 + TOLERANCE || ((c.0 - b.0).abs() <= TOLERANCE && c.2 .0 == UrnKind::Risky) {
            best = i;
        }
    }
    best
}

fn draw(rng: &mut ChaCha8Rng, urn: UrnKind, composition: UrnComposition) -> Color {
    let red = match urn {
        UrnKind::Risky => 0.5,
        UrnKind::Ambiguous => composition.p(),
    };
    if rng.gen::<f64>() < red {
        Color::Red
    } else {
        Color::Black
    }
}

/// Runs one agent through the tree. Choices do not depend on the seed;
/// the colors do.
pub fn simulate(
    policy: AgentPolicy,
    tree: &DecisionTree,
    composition: UrnComposition,
    seed: u64,
) -> Result<TraceRecord> {
    let agent = Agent::new(policy, tree);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let stage1 = agent.decide(tree.root(), false)?;
    let first_color = draw(&mut rng, stage1.chosen, composition);
    let second_node = tree.children_of(stage1.child, first_color)?;
    let stage2 = agent.decide(second_node, false)?;
    let second_color = draw(&mut rng, stage2.chosen, composition);

    let realized = Strategy::from_urns(stage1.chosen, stage2.chosen);
    let terminal = tree.children_of(stage2.child, second_color)?;
    let Node::Terminal { won, wellbeing, .. } = *tree.node(terminal)? else {
        return Err(Error::MalformedTree(format!("node {terminal} is not terminal")));
    };
    Ok(TraceRecord {
        policy,
        first_choice: stage1.chosen,
        first_color,
        second_choice: stage2.chosen,
        second_color,
        realized,
        won,
        wellbeing,
        stage_values: [stage1.values, stage2.values],
    })
}

/// Plan an agent picks from an arbitrary menu of complete plans.
pub fn choose_from_menu(policy: AgentPolicy, schedule: &PayoffSchedule, menu: &[Strategy]) -> Result<Strategy> {
    let tree = DecisionTree::from_menu(*schedule, menu)?;
    Agent::new(policy, &tree).menu_choice(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IiaWitness {
    pub menu: Vec<Strategy>,
    pub chosen: Strategy,
    pub submenu: Vec<Strategy>,
    pub chosen_from_submenu: Strategy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub realized: Strategy,
    pub dominated_choice: bool,
    /// Highest-priority plan strictly dominating the realized one.
    pub dominating: Option<Strategy>,
    pub dynamic_inconsistency: bool,
    /// Best complete plan by the agent's own ex-ante evaluation.
    pub ex_ante_best: Strategy,
    pub iia_violation: bool,
    pub iia_witness: Option<IiaWitness>,
}

fn menus() -> Vec<Vec<Strategy>> {
    let mut out: Vec<Vec<Strategy>> = (1u8..16)
        .map(|mask| Strategy::ALL.into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s).collect())
        .collect();
    out.sort_by_key(|m| std::cmp::Reverse(m.len()));
    out
}

/// Checks the agent's behavior on the full tree against dominance,
/// against its own ex-ante ranking of complete plans, and against
/// contraction consistency of its choices over all menus of plans.
///
/// Menu choices are induced from the tree each menu generates. When a
/// first urn has a single continuation in the menu, there is no
/// intermediate decision and the two draws form one simultaneous bet.
/// The sophisticated agent values such a bet as a whole, by its global
/// Hurwicz value.
pub fn detect_violations(policy: AgentPolicy, tree: &DecisionTree) -> Result<ViolationReport> {
    let schedule = tree.schedule();
    let full = DecisionTree::from_menu(*schedule, &Strategy::ALL)?;
    let agent = Agent::new(policy, &full);
    let realized = agent.menu_choice(false)?;

    let matrix = dominance_matrix(schedule);
    let dominating = matrix
        .strict_dominators(realized)
        .into_iter()
        .min_by_key(|&s| agent.priority.rank(s));

    let plans = Strategy::ALL
        .into_iter()
        .map(|s| agent.ex_ante_plan_value(s).map(|v| (v, s, ())))
        .collect::<Result<Vec<_>>>()?;
    let ex_ante_best = plans[agent.priority.pick(&plans)].1;

    let all_menus = menus();
    let mut choices = Vec::with_capacity(all_menus.len());
    for m in &all_menus {
        choices.push(choose_from_menu(policy, schedule, m)?);
    }
    let mut iia_witness = None;
    'outer: for (i, big) in all_menus.iter().enumerate() {
        let chosen = choices[i];
        for (j, small) in all_menus.iter().enumerate() {
            let proper_subset = small.len() < big.len() && small.iter().all(|s| big.contains(s));
            if proper_subset && small.contains(&chosen) && choices[j] != chosen {
                iia_witness = Some(IiaWitness {
                    menu: big.clone(),
                    chosen,
                    submenu: small.clone(),
                    chosen_from_submenu: choices[j],
                });
                break 'outer;
            }
        }
    }

    Ok(ViolationReport {
        realized,
        dominated_choice: dominating.is_some(),
        dominating,
        dynamic_inconsistency: ex_ante_best != realized,
        ex_ante_best,
        iia_violation: iia_witness.is_some(),
        iia_witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub strategy: Strategy,
    pub recursive: f64,
    pub global: f64,
    /// `global - recursive`.
    pub gap: f64,
}

/// Stagewise versus whole-plan Hurwicz value of every plan.
pub fn rectangularity_gap(alpha: Pessimism, schedule: &PayoffSchedule) -> Result<Vec<GapRow>> {
    Strategy::ALL
        .into_iter()
        .map(|strategy| {
            let recursive = plan_value(strategy, alpha, schedule)?;
            let global = strategy_hurwicz(strategy, alpha, schedule);
            Ok(GapRow { strategy, recursive, global, gap: global - recursive })
        })
        .collect()
}
