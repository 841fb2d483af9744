//! Goal selection among least-explored contexts and breadth-first search
//! over learned action models.

use std::collections::{BTreeSet, HashMap};

use crate::domain::{GroundAction, Universe};
use crate::learner::{head_binding, LearnedActionModel};
use crate::llc::{Llc, LlcActionTable, LlcId};
use crate::relational::{is_satisfied, satisfy, satisfy_from, Clause, ConstId, PredId, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_depth: 25,
            max_nodes: 50_000,
        }
    }
}

/// How a context's counts are reduced to one key for goal ordering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GoalAggregation {
    /// Sum over all schemas.
    #[default]
    Total,
    /// Smallest count of any single schema.
    MinOverActions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub actions: Vec<GroundAction>,
    pub goal: Clause,
    /// State predicted by the learned models after the last action.
    pub predicted: State,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Plan),
    /// Every state reachable under the models was examined.
    Unreachable,
    /// The depth or node bound cut the search short.
    BudgetExhausted,
}

/// Successor predicted by `model` for `args`, if its precondition holds.
/// Effects are applied under the first satisfying binding.
pub fn predict(model: &LearnedActionModel, state: &State, uni: &Universe, args: &[ConstId]) -> Option<State> {
    let pre = model.precondition.as_ref()?;
    let b = satisfy_from(pre, state, uni, head_binding(args)).next()?;
    let dels = model.dels.iter().map(|l| l.ground(&b)).collect::<Option<Vec<_>>>()?;
    let adds = model.adds.iter().map(|l| l.ground(&b)).collect::<Option<Vec<_>>>()?;
    let mut next = state.clone();
    next.apply(&dels, &adds);
    Some(next)
}

/// Ground actions the models predict to change `state`, with their results,
/// in schema order then binding order.
pub fn successors(models: &[LearnedActionModel], state: &State, uni: &Universe) -> Vec<(GroundAction, State)> {
    let mut out = Vec::new();
    for m in models {
        let Some(pre) = &m.precondition else { continue };
        let arity = m.arity;
        let mut seen: BTreeSet<Vec<ConstId>> = BTreeSet::new();
        for b in satisfy(pre, state, uni) {
            let args: Vec<ConstId> = b.values()[..arity].iter().map(|c| c.expect("total binding")).collect();
            if !seen.insert(args.clone()) {
                continue;
            }
            if let Some(next) = predict(m, state, uni, &args) {
                if next != *state {
                    out.push((GroundAction::new(m.schema, args), next));
                }
            }
        }
    }
    out
}

/// Replays `actions` through the models; `None` if some step is predicted
/// inapplicable.
pub fn simulate(
    models: &[LearnedActionModel],
    start: &State,
    uni: &Universe,
    actions: &[GroundAction],
) -> Option<State> {
    let mut s = start.clone();
    for a in actions {
        s = predict(&models[a.schema.index()], &s, uni, &a.args)?;
    }
    Some(s)
}

struct Node {
    state: State,
    parent: Option<(usize, GroundAction)>,
    depth: usize,
}

/// Breadth-first state space under the learned models, expanded on demand
/// and shared by every goal of one planning call. Nodes are kept in
/// generation order, so the first node satisfying a goal is the one a
/// separate BFS for that goal would stop at.
pub struct SearchSpace<'a> {
    models: &'a [LearnedActionModel],
    uni: &'a Universe,
    bounds: SearchBounds,
    nodes: Vec<Node>,
    index: HashMap<State, usize>,
    expanded: usize,
    truncated: bool,
}

impl<'a> SearchSpace<'a> {
    pub fn new(models: &'a [LearnedActionModel], start: &State, uni: &'a Universe, bounds: SearchBounds) -> Self {
        let mut index = HashMap::new();
        index.insert(start.clone(), 0);
        SearchSpace {
            models,
            uni,
            bounds,
            nodes: vec![Node {
                state: start.clone(),
                parent: None,
                depth: 0,
            }],
            index,
            expanded: 0,
            truncated: false,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn state(&self, node: usize) -> &State {
        &self.nodes[node].state
    }

    // Expands the next queued node; false once nothing is left to expand.
    fn expand_next(&mut self) -> bool {
        while self.expanded < self.nodes.len() {
            let k = self.expanded;
            self.expanded += 1;
            if self.nodes[k].depth >= self.bounds.max_depth {
                self.truncated = true;
                continue;
            }
            let depth = self.nodes[k].depth + 1;
            let succ = successors(self.models, &self.nodes[k].state, self.uni);
            let mut added = false;
            for (a, s) in succ {
                if self.index.contains_key(&s) {
                    continue;
                }
                if self.nodes.len() >= self.bounds.max_nodes {
                    self.truncated = true;
                    return added;
                }
                self.index.insert(s.clone(), self.nodes.len());
                self.nodes.push(Node {
                    state: s,
                    parent: Some((k, a)),
                    depth,
                });
                added = true;
            }
            if added {
                return true;
            }
        }
        false
    }

    /// First node in generation order passing `test`.
    pub fn find(&mut self, mut test: impl FnMut(usize, &State) -> bool) -> Result<usize, SearchOutcome> {
        let mut k = 0;
        loop {
            while k >= self.nodes.len() {
                if !self.expand_next() {
                    return Err(if self.truncated {
                        SearchOutcome::BudgetExhausted
                    } else {
                        SearchOutcome::Unreachable
                    });
                }
            }
            if test(k, &self.nodes[k].state) {
                return Ok(k);
            }
            k += 1;
        }
    }

    pub fn path(&self, mut node: usize) -> Vec<GroundAction> {
        let mut out = Vec::new();
        while let Some((p, a)) = &self.nodes[node].parent {
            out.push(a.clone());
            node = *p;
        }
        out.reverse();
        out
    }
}

/// Shortest plan under the models to a state where `goal` holds.
pub fn forward_plan(
    models: &[LearnedActionModel],
    start: &State,
    goal: &Clause,
    uni: &Universe,
    bounds: SearchBounds,
) -> SearchOutcome {
    let mut space = SearchSpace::new(models, start, uni, bounds);
    match space.find(|_, s| is_satisfied(goal, s, uni)) {
        Ok(k) => SearchOutcome::Found(Plan {
            actions: space.path(k),
            goal: goal.clone(),
            predicted: space.state(k).clone(),
        }),
        Err(o) => o,
    }
}

/// LLCs already tried during one planner call.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoalLedger {
    done: BTreeSet<LlcId>,
}

impl GoalLedger {
    pub fn new() -> Self {
        GoalLedger::default()
    }

    pub fn contains(&self, c: LlcId) -> bool {
        self.done.contains(&c)
    }

    pub fn len(&self) -> usize {
        self.done.len()
    }

    pub fn is_empty(&self) -> bool {
        self.done.is_empty()
    }
}

/// The untried LLCs sharing the smallest count key, in LLC order. They are
/// marked as tried.
pub fn contexts_with_least_actions(
    table: &LlcActionTable,
    done: &mut GoalLedger,
    aggregation: GoalAggregation,
) -> Vec<LlcId> {
    let key = |c: LlcId| match aggregation {
        GoalAggregation::Total => table.total(c),
        GoalAggregation::MinOverActions => table.min_over_actions(c) as u64,
    };
    let open: Vec<LlcId> = (0..table.llc_count() as u32)
        .map(LlcId)
        .filter(|c| !done.contains(*c))
        .collect();
    let Some(min) = open.iter().map(|c| key(*c)).min() else {
        return Vec::new();
    };
    let batch: Vec<LlcId> = open.into_iter().filter(|c| key(*c) == min).collect();
    done.done.extend(batch.iter().copied());
    batch
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlannerConfig {
    pub bounds: SearchBounds,
    pub aggregation: GoalAggregation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlannerReport {
    pub plan: Option<(LlcId, Plan)>,
    pub goals_tried: usize,
    pub goals_skipped: usize,
    pub nodes: usize,
}

/// Works through goal batches from least to most explored and returns the
/// first non-empty plan found.
pub fn llc_planner(
    state: &State,
    models: &[LearnedActionModel],
    table: &LlcActionTable,
    llcs: &[Llc],
    uni: &Universe,
    config: &PlannerConfig,
) -> PlannerReport {
    let effect_preds: BTreeSet<PredId> = models
        .iter()
        .filter(|m| m.precondition.is_some())
        .flat_map(|m| m.adds.iter().chain(&m.dels).map(|l| l.pred))
        .collect();
    let mut report = PlannerReport {
        plan: None,
        goals_tried: 0,
        goals_skipped: 0,
        nodes: 1,
    };
    let mut space = SearchSpace::new(models, state, uni, config.bounds);
    let mut done = GoalLedger::new();
    loop {
        let batch = contexts_with_least_actions(table, &mut done, config.aggregation);
        if batch.is_empty() {
            report.nodes = space.node_count();
            return report;
        }
        for g in batch {
            let llc = &llcs[g.index()];
            // Without an effect predicate the goal has the same truth value
            // in every node: unreachable, or an empty plan.
            if !llc.clause().predicates().any(|p| effect_preds.contains(&p)) {
                report.goals_skipped += 1;
                continue;
            }
            report.goals_tried += 1;
            let found = space.find(|_, s| llc.is_active(s, uni));
            if let Ok(k) = found {
                let actions = space.path(k);
                if !actions.is_empty() {
                    report.nodes = space.node_count();
                    report.plan = Some((
                        g,
                        Plan {
                            actions,
                            goal: llc.clause().clone(),
                            predicted: space.state(k).clone(),
                        },
                    ));
                    return report;
                }
            }
        }
    }
}
