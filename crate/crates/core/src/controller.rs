//! The agent loop: observe, choose an action, count it against every active
//! context, execute, record.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{DomainModel, GroundAction, ProblemInstance, SchemaId, Universe};
use crate::env::{EnvError, Grid, WorldState};
use crate::interaction::Interaction;
use crate::learner::{LearnedActionModel, Learner, LearnerConfig};
use crate::llc::{active_llcs, Llc, LlcActionTable, LlcId};
use crate::planner::{llc_planner, PlannerConfig};
use crate::relational::{Clause, Literal, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgentMode {
    Random,
    Explore,
    Planning,
}

impl AgentMode {
    pub const ALL: [AgentMode; 3] = [AgentMode::Random, AgentMode::Explore, AgentMode::Planning];

    pub fn name(self) -> &'static str {
        match self {
            AgentMode::Random => "random",
            AgentMode::Explore => "explore",
            AgentMode::Planning => "planning",
        }
    }
}

impl fmt::Display for AgentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How destination arguments are chosen for a schema.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Grounding {
    /// Each argument uniformly from the constants of its type.
    #[default]
    Uniform,
    /// The tile next to the agent in the schema's direction.
    Adjacent,
}

/// Which rule of action selection produced an action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tier {
    Plan,
    Lta,
    PlannerNew,
    Random,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::Plan => "plan",
            Tier::Lta => "lta",
            Tier::PlannerNew => "planner-new",
            Tier::Random => "random",
        }
    }
}

pub fn ground(
    schema: SchemaId,
    dom: &DomainModel,
    uni: &Universe,
    state: &State,
    grid: &Grid,
    grounding: Grounding,
    rng: &mut impl Rng,
) -> GroundAction {
    if grounding == Grounding::Adjacent {
        let dest =
            crate::env::parse_action_name(&dom.schema(schema).name).and_then(|(_, dir)| grid.destination(state, dir));
        if let Some((x, y)) = dest {
            return GroundAction::new(schema, [x, y]);
        }
    }
    let args = dom.schema(schema).params.iter().map(|ty| {
        let pool = uni.of_type(*ty);
        pool[rng.gen_range(0..pool.len())]
    });
    GroundAction::new(schema, args.collect::<Vec<_>>())
}

/// Schemas never taken in the largest number of currently active contexts.
/// Empty when every schema has been taken in every active context.
pub fn least_taken_actions(active: &[LlcId], table: &LlcActionTable) -> Vec<SchemaId> {
    let scores: Vec<usize> = (0..table.schema_count())
        .map(|a| {
            let a = SchemaId(a as u16);
            active.iter().filter(|c| table.count(**c, a) == 0).count()
        })
        .collect();
    let best = scores.iter().copied().max().unwrap_or(0);
    if best == 0 {
        return Vec::new();
    }
    scores
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == best)
        .map(|(a, _)| SchemaId(a as u16))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: AgentMode,
    pub steps: usize,
    pub seed: u64,
    pub grounding: Grounding,
    pub learner: LearnerConfig,
    pub planner: PlannerConfig,
}

impl RunConfig {
    pub fn new(mode: AgentMode, steps: usize, seed: u64) -> Self {
        RunConfig {
            mode,
            steps,
            seed,
            grounding: Grounding::Uniform,
            learner: LearnerConfig::default(),
            planner: PlannerConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub history: Vec<Interaction>,
    /// Unique tiles visited after each step.
    pub progress: Vec<usize>,
    pub tiers: Vec<Tier>,
    pub log: Vec<String>,
    pub models: Vec<LearnedActionModel>,
    pub table: LlcActionTable,
    pub planner_calls: usize,
}

// The parts of a model the planner reads.
type ModelShape = (Option<Clause>, Vec<Literal>, Vec<Literal>);

fn shapes(models: &[LearnedActionModel]) -> Vec<ModelShape> {
    models
        .iter()
        .map(|m| (m.precondition.clone(), m.adds.clone(), m.dels.clone()))
        .collect()
}

/// Controller state for one run.
pub struct Controller<'a> {
    dom: &'a DomainModel,
    uni: &'a Universe,
    llcs: &'a [Llc],
    config: RunConfig,
    world: WorldState,
    rng: ChaCha8Rng,
    plan: VecDeque<GroundAction>,
    table: LlcActionTable,
    learner: Learner,
    history: Vec<Interaction>,
    planner_calls: usize,
    // state and models of the last planner call that found nothing
    last_failure: Option<(State, Vec<ModelShape>)>,
}

impl<'a> Controller<'a> {
    pub fn new(
        dom: &'a DomainModel,
        problem: &'a ProblemInstance,
        llcs: &'a [Llc],
        config: RunConfig,
    ) -> Result<Self, EnvError> {
        Ok(Controller {
            dom,
            uni: &problem.universe,
            llcs,
            world: WorldState::new(dom, problem)?,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            plan: VecDeque::new(),
            table: LlcActionTable::new(llcs, dom),
            learner: Learner::new(dom, config.learner.clone()),
            history: Vec::new(),
            planner_calls: 0,
            last_failure: None,
            config,
        })
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn table(&self) -> &LlcActionTable {
        &self.table
    }

    pub fn history(&self) -> &[Interaction] {
        &self.history
    }

    pub fn pending_plan(&self) -> usize {
        self.plan.len()
    }

    fn random_action(&mut self, s: &State) -> GroundAction {
        let schema = SchemaId(self.rng.gen_range(0..self.dom.schemas().len()) as u16);
        self.ground(schema, s)
    }

    fn ground(&mut self, schema: SchemaId, s: &State) -> GroundAction {
        ground(
            schema,
            self.dom,
            self.uni,
            s,
            self.world.grid(),
            self.config.grounding,
            &mut self.rng,
        )
    }

    /// Picks the next action; the returned note describes a new plan.
    pub fn select_action(&mut self, s: &State, active: &[LlcId]) -> (GroundAction, Tier, Option<String>) {
        if self.config.mode == AgentMode::Random {
            return (self.random_action(s), Tier::Random, None);
        }
        if let Some(a) = self.plan.pop_front() {
            return (a, Tier::Plan, None);
        }
        let lta = least_taken_actions(active, &self.table);
        if !lta.is_empty() {
            let pick = lta[self.rng.gen_range(0..lta.len())];
            return (self.ground(pick, s), Tier::Lta, None);
        }
        if self.config.mode == AgentMode::Planning {
            self.learner.learn_all(self.dom, &self.history, self.uni);
            // A failed call is a function of state and models alone: every
            // inactive LLC was tried, so the count table only affects order.
            let unchanged = self
                .last_failure
                .as_ref()
                .is_some_and(|(fs, fm)| fs == s && *fm == shapes(self.learner.models()));
            let report = if unchanged {
                None
            } else {
                self.planner_calls += 1;
                llc_planner(
                    s,
                    self.learner.models(),
                    &self.table,
                    self.llcs,
                    self.uni,
                    &self.config.planner,
                )
                .plan
            };
            if report.is_none() && !unchanged {
                self.last_failure = Some((s.clone(), shapes(self.learner.models())));
            }
            if let Some((_, plan)) = report {
                let note = format!(
                    "goal={} plan=[{}]",
                    plan.goal.display(self.dom),
                    plan.actions
                        .iter()
                        .map(|a| a.display(self.dom, self.uni).to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                self.plan = plan.actions.into();
                let first = self.plan.pop_front().expect("plans are non-empty");
                return (first, Tier::PlannerNew, Some(note));
            }
        }
        (self.random_action(s), Tier::Random, None)
    }

    /// Runs one step and returns the interaction, tier and run-log line.
    pub fn step(&mut self) -> (Tier, String) {
        let s = self.world.observe().clone();
        let active = active_llcs(self.llcs, &s, self.uni);
        let (action, tier, note) = self.select_action(&s, &active);
        self.table
            .record_action(&active, action.schema)
            .expect("actions come from the domain's schemas");
        self.world.step(&action);
        let i = Interaction::new(s, action, self.world.observe().clone());
        if !i.is_positive() && matches!(tier, Tier::Plan | Tier::PlannerNew) {
            self.plan.clear();
        }
        let mut line = format!(
            "{}\t{}\t{}\t{}",
            self.history.len(),
            tier.name(),
            i.action.display(self.dom, self.uni),
            if i.is_positive() { "positive" } else { "negative" }
        );
        if let Some(n) = note {
            line.push('\t');
            line.push_str(&n);
        }
        self.history.push(i);
        (tier, line)
    }

    /// Runs the configured number of steps and learns final models.
    pub fn run(mut self) -> RunOutput {
        let mut progress = Vec::with_capacity(self.config.steps);
        let mut tiers = Vec::with_capacity(self.config.steps);
        let mut log = Vec::with_capacity(self.config.steps);
        for _ in 0..self.config.steps {
            let (tier, line) = self.step();
            tiers.push(tier);
            log.push(line);
            progress.push(self.world.exploration_progress());
        }
        self.learner.learn_all(self.dom, &self.history, self.uni);
        RunOutput {
            models: self.learner.models().to_vec(),
            history: self.history,
            progress,
            tiers,
            log,
            table: self.table,
            planner_calls: self.planner_calls,
        }
    }
}

/// Runs one agent from the problem's initial state.
pub fn run(
    dom: &DomainModel,
    problem: &ProblemInstance,
    llcs: &[Llc],
    config: RunConfig,
) -> Result<RunOutput, EnvError> {
    Ok(Controller::new(dom, problem, llcs, config)?.run())
}
