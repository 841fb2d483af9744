//! Experiment driver and evaluation: perfect-model accuracy on the test
//! states, exploration-progress tables and per-run artifacts.

use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::controller::{self, AgentMode, Grounding, RunConfig, RunOutput};
use crate::domain::{DomainModel, ProblemInstance, SchemaId, Universe};
use crate::env::{parse_action_name, ActionKind, Direction, EnvError, Grid};
use crate::interaction::{write_interaction_log, LogError};
use crate::learner::{head_binding, LearnedActionModel, ModelStatus};
use crate::llc::generate_llcs;
use crate::pddl::{parse_domain, parse_problem, PddlError};
use crate::relational::{satisfy_from, write_literal, Clause, Literal, State, Term, Var};
use crate::rules::{parse_rules, render_rule, RuleError};
use crate::scenario;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Pddl { path: String, source: Box<PddlError> },
    #[error("{path}: {source}")]
    Rules { path: String, source: RuleError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Log { path: String, source: LogError },
    #[error("{path}: line {line}: {msg}")]
    Models { path: String, line: usize, msg: String },
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("progress traces: {0}")]
    Progress(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Ground-truth preconditions, one per schema.
#[derive(Clone, Debug)]
pub struct PerfectModel {
    rules: Vec<Option<Clause>>,
}

impl PerfectModel {
    pub fn parse(text: &str, dom: &DomainModel) -> Result<Self, RuleError> {
        let mut rules = vec![None; dom.schemas().len()];
        for r in parse_rules(text, dom)? {
            rules[r.schema.index()] = Some(r.body);
        }
        Ok(PerfectModel { rules })
    }

    /// The shipped rules for the grid-world domain.
    pub fn shipped(dom: &DomainModel) -> Self {
        Self::parse(scenario::PERFECT_MODEL_RULES, dom).expect("shipped perfect model parses")
    }

    pub fn precondition(&self, schema: SchemaId) -> Option<&Clause> {
        self.rules.get(schema.index()).and_then(Option::as_ref)
    }

    pub fn preconditions(&self) -> &[Option<Clause>] {
        &self.rules
    }

    /// The rules as complete action models for the grid domain: a move
    /// relocates the `agentat` atom of its body to the target tile, door
    /// actions swap `cdoor` and `odoor` on the target.
    pub fn transition_models(&self, dom: &DomainModel) -> Vec<LearnedActionModel> {
        let pred = |n: &str| dom.predicate_id(n);
        let target = || [Term::Var(Var(0)), Term::Var(Var(1))];
        dom.schema_ids()
            .map(|s| {
                let mut m = LearnedActionModel::unknown(s, dom.schema(s).params.len());
                let (Some(pre), Some((kind, _))) = (self.precondition(s), parse_action_name(&dom.schema(s).name))
                else {
                    return m;
                };
                let (Some(agentat), Some(cdoor), Some(odoor)) = (pred("agentat"), pred("cdoor"), pred("odoor")) else {
                    return m;
                };
                match kind {
                    ActionKind::Move => {
                        let Some(from) = pre.literals().iter().find(|l| l.pred == agentat && !l.negated) else {
                            return m;
                        };
                        m.dels = vec![from.clone()];
                        m.adds = vec![Literal::positive(agentat, target())];
                    }
                    ActionKind::OpenDoor => {
                        m.dels = vec![Literal::positive(cdoor, target())];
                        m.adds = vec![Literal::positive(odoor, target())];
                    }
                    ActionKind::CloseDoor => {
                        m.dels = vec![Literal::positive(odoor, target())];
                        m.adds = vec![Literal::positive(cdoor, target())];
                    }
                }
                m.precondition = Some(pre.clone());
                m.status = ModelStatus::Learned;
                m
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DoorTag {
    ClosedDoor,
    OpenDoor,
}

impl DoorTag {
    pub fn from_name(name: &str) -> Option<DoorTag> {
        if name.starts_with("closed-door") {
            Some(DoorTag::ClosedDoor)
        } else if name.starts_with("open-door") {
            Some(DoorTag::OpenDoor)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct TestState {
    pub name: String,
    pub tag: DoorTag,
    pub problem: ProblemInstance,
}

pub fn shipped_test_states(dom: &DomainModel) -> Vec<TestState> {
    scenario::TEST_STATES
        .iter()
        .map(|(name, text)| TestState {
            name: name.to_string(),
            tag: DoorTag::from_name(name).expect("shipped names carry a tag"),
            problem: parse_problem(text, dom).expect("shipped test states parse"),
        })
        .collect()
}

/// Loads every `*.pddl` file of a directory in name order. The tag comes
/// from the `closed-door` / `open-door` file name prefix.
pub fn load_test_states(dir: &Path, dom: &DomainModel) -> Result<Vec<TestState>, HarnessError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "pddl"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(HarnessError::Config(format!("no .pddl files in {}", dir.display())));
    }
    paths
        .iter()
        .map(|p| {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let tag = DoorTag::from_name(&name).ok_or_else(|| {
                HarnessError::Config(format!(
                    "{}: name must start with closed-door or open-door",
                    p.display()
                ))
            })?;
            let text = fs::read_to_string(p).map_err(io_err(p))?;
            let problem = parse_problem(&text, dom).map_err(|source| HarnessError::Pddl {
                path: p.display().to_string(),
                source: Box::new(source),
            })?;
            Ok(TestState { name, tag, problem })
        })
        .collect()
}

/// Precision, recall and F1 as rounded percentages, with the raw counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Score {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub precision: u32,
    pub recall: u32,
    pub f1: u32,
}

// Percentage rounded half up; 0 when undefined.
fn percent(num: usize, den: usize) -> u32 {
    if den == 0 {
        return 0;
    }
    ((200 * num + den) / (2 * den)) as u32
}

impl Score {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Score {
        Score {
            tp,
            fp,
            fn_,
            precision: percent(tp, tp + fp),
            recall: percent(tp, tp + fn_),
            f1: percent(2 * tp, 2 * tp + fp + fn_),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccuracyRow {
    pub schema: SchemaId,
    pub name: String,
    pub score: Score,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccuracyReport {
    pub rows: Vec<AccuracyRow>,
}

impl AccuracyReport {
    pub fn row(&self, name: &str) -> Option<&AccuracyRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// Schemas with nonzero F1.
    pub fn learned(&self) -> Vec<SchemaId> {
        self.rows.iter().filter(|r| r.score.f1 > 0).map(|r| r.schema).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("schema,precision,recall,f1,tp,fp,fn\n");
        for r in &self.rows {
            let c = r.score;
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.name, c.precision, c.recall, c.f1, c.tp, c.fp, c.fn_
            );
        }
        s
    }

    pub fn to_table(&self) -> String {
        let w = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(6).max(6);
        let mut s = format!("{:<w$}  {:>3}  {:>3}  {:>3}\n", "action", "P", "R", "F1");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<w$}  {:>3}  {:>3}  {:>3}",
                r.name, r.score.precision, r.score.recall, r.score.f1
            );
        }
        s
    }
}

/// Reporting order: moves, then close, then open; within each
/// w, e, n, s, nw, ne, sw, se. Other schemas follow in domain order.
pub fn report_order(dom: &DomainModel) -> Vec<SchemaId> {
    const DIRS: [Direction; 8] = [
        Direction::W,
        Direction::E,
        Direction::N,
        Direction::S,
        Direction::NW,
        Direction::NE,
        Direction::SW,
        Direction::SE,
    ];
    let rank = |s: SchemaId| match parse_action_name(&dom.schema(s).name) {
        Some((kind, dir)) => {
            let k = match kind {
                ActionKind::Move => 0,
                ActionKind::CloseDoor => 1,
                ActionKind::OpenDoor => 2,
            };
            (k, DIRS.iter().position(|d| *d == dir).unwrap_or(8), s.index())
        }
        None => (3, 0, s.index()),
    };
    let mut ids: Vec<SchemaId> = dom.schema_ids().collect();
    ids.sort_by_key(|s| rank(*s));
    ids
}

fn holds(pre: Option<&Clause>, state: &State, uni: &Universe, args: &[crate::relational::ConstId]) -> bool {
    pre.is_some_and(|c| satisfy_from(c, state, uni, head_binding(args)).next().is_some())
}

/// Scores each schema's learned precondition against the perfect one at
/// the direction-adjacent destination of every test state. A schema with
/// no destination in a state (grid edge) is not executable under either
/// model there.
pub fn evaluate_accuracy(
    dom: &DomainModel,
    learned: &[Option<Clause>],
    perfect: &PerfectModel,
    tests: &[TestState],
) -> Result<AccuracyReport, HarnessError> {
    let mut counts = vec![(0usize, 0usize, 0usize); dom.schemas().len()];
    for t in tests {
        let state = &t.problem.init;
        let uni = &t.problem.universe;
        let grid = Grid::new(dom, state)?;
        for s in dom.schema_ids() {
            let Some((_, dir)) = parse_action_name(&dom.schema(s).name) else {
                continue;
            };
            let Some((x, y)) = grid.destination(state, dir) else {
                continue;
            };
            let args = [x, y];
            let truth = holds(perfect.precondition(s), state, uni, &args);
            let guess = holds(learned.get(s.index()).and_then(Option::as_ref), state, uni, &args);
            let c = &mut counts[s.index()];
            match (truth, guess) {
                (true, true) => c.0 += 1,
                (false, true) => c.1 += 1,
                (true, false) => c.2 += 1,
                (false, false) => {}
            }
        }
    }
    Ok(AccuracyReport {
        rows: report_order(dom)
            .into_iter()
            .map(|s| {
                let (tp, fp, fn_) = counts[s.index()];
                AccuracyRow {
                    schema: s,
                    name: dom.schema(s).name.clone(),
                    score: Score::from_counts(tp, fp, fn_),
                }
            })
            .collect(),
    })
}

pub fn preconditions_of(models: &[LearnedActionModel], dom: &DomainModel) -> Vec<Option<Clause>> {
    let mut out = vec![None; dom.schemas().len()];
    for m in models {
        out[m.schema.index()] = m.precondition.clone();
    }
    out
}

/// Per-step min/mean/max of unique tiles for each mode. Steps are
/// numbered from 1; every trace of every mode must have the same length.
pub fn emit_progress_table(traces: &[(AgentMode, Vec<Vec<usize>>)]) -> Result<String, HarnessError> {
    let mut len = None;
    for (mode, runs) in traces {
        if runs.is_empty() {
            return Err(HarnessError::Progress(format!("no runs for mode {mode}")));
        }
        for r in runs {
            match len {
                None => len = Some(r.len()),
                Some(l) if l != r.len() => {
                    return Err(HarnessError::Progress(format!(
                        "mode {mode} has a trace of length {} where {l} was expected",
                        r.len()
                    )))
                }
                _ => {}
            }
        }
    }
    let mut s = String::from("step");
    for (mode, _) in traces {
        let _ = write!(s, ",{mode}_min,{mode}_mean,{mode}_max");
    }
    s.push('\n');
    for step in 0..len.unwrap_or(0) {
        let _ = write!(s, "{}", step + 1);
        for (_, runs) in traces {
            let vals = runs.iter().map(|r| r[step]);
            let min = vals.clone().min().unwrap_or(0);
            let max = vals.clone().max().unwrap_or(0);
            let mean = vals.sum::<usize>() as f64 / runs.len() as f64;
            let _ = write!(s, ",{min},{mean:.3},{max}");
        }
        s.push('\n');
    }
    Ok(s)
}

#[derive(Serialize, Deserialize)]
struct ModelRecord {
    schema: String,
    status: String,
    precondition: Option<String>,
    adds: Vec<String>,
    dels: Vec<String>,
    residual_errors: usize,
    effect_conflict: bool,
    positives: usize,
    negatives: usize,
}

fn effect_text(lits: &[Literal], dom: &DomainModel, uni: &Universe) -> Vec<String> {
    lits.iter()
        .map(|l| {
            let mut s = String::new();
            let _ = write_literal(&mut s, l, dom, Some(uni));
            s
        })
        .collect()
}

/// One JSON object per schema; the precondition is in rule text.
pub fn write_models(models: &[LearnedActionModel], dom: &DomainModel, uni: &Universe) -> String {
    let mut out = String::new();
    for m in models {
        let pre = m.precondition.as_ref();
        let rec = ModelRecord {
            schema: dom.schema(m.schema).name.clone(),
            status: match m.status {
                ModelStatus::Learned => "learned".into(),
                ModelStatus::Unknown => "unknown".into(),
            },
            precondition: pre.map(|c| render_rule(dom, m.schema, c)),
            adds: effect_text(&m.adds, dom, uni),
            dels: effect_text(&m.dels, dom, uni),
            residual_errors: m.residual_errors,
            effect_conflict: m.effect_conflict,
            positives: m.positives,
            negatives: m.negatives,
        };
        out.push_str(&serde_json::to_string(&rec).expect("model records serialize"));
        out.push('\n');
    }
    out
}

/// Reads the preconditions of a models file, indexed by schema.
pub fn read_models(text: &str, dom: &DomainModel, path: &str) -> Result<Vec<Option<Clause>>, HarnessError> {
    let mut out = vec![None; dom.schemas().len()];
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| HarnessError::Models {
            path: path.to_string(),
            line: n + 1,
            msg,
        };
        let rec: ModelRecord = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let schema = dom
            .schema_id(&rec.schema)
            .ok_or_else(|| bad(format!("unknown schema `{}`", rec.schema)))?;
        if let Some(rule) = rec.precondition {
            let parsed = parse_rules(&rule, dom).map_err(|e| bad(e.to_string()))?;
            match parsed.as_slice() {
                [r] if r.schema == schema => out[schema.index()] = Some(r.body.clone()),
                _ => return Err(bad(format!("precondition is not a single rule for `{}`", rec.schema))),
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Domain file; the shipped domain when absent.
    pub domain: Option<PathBuf>,
    /// Problem file; the shipped Scenario 1 when absent.
    pub scenario: Option<PathBuf>,
    pub modes: Vec<AgentMode>,
    pub runs: usize,
    pub steps: usize,
    pub llc_size: usize,
    pub seed: u64,
    pub grounding: Grounding,
    pub workers: Option<usize>,
    pub out: PathBuf,
}

impl ExperimentConfig {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            domain: None,
            scenario: None,
            modes: AgentMode::ALL.to_vec(),
            runs: 3,
            steps: 4000,
            llc_size: 2,
            seed: 0,
            grounding: Grounding::Uniform,
            workers: None,
            out: out.into(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.into()));
        if self.modes.is_empty() {
            return bad("at least one mode is required");
        }
        if self.runs == 0 {
            return bad("runs must be at least 1");
        }
        if !(1..=3).contains(&self.llc_size) {
            return bad("llc size must be between 1 and 3");
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1");
        }
        if self.modes.iter().enumerate().any(|(i, m)| self.modes[..i].contains(m)) {
            return bad("modes must not repeat");
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub mode: AgentMode,
    pub run: usize,
    pub seed: u64,
    pub progress: Vec<usize>,
    pub accuracy: AccuracyReport,
    pub planner_calls: usize,
}

impl RunSummary {
    pub fn final_tiles(&self) -> usize {
        self.progress.last().copied().unwrap_or(1)
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSummary {
    pub runs: Vec<RunSummary>,
    pub progress_table: String,
}

impl ExperimentSummary {
    pub fn of_mode(&self, mode: AgentMode) -> impl Iterator<Item = &RunSummary> {
        self.runs.iter().filter(move |r| r.mode == mode)
    }

    /// Mean unique tiles at the last step.
    pub fn mean_final_tiles(&self, mode: AgentMode) -> f64 {
        let v: Vec<usize> = self.of_mode(mode).map(RunSummary::final_tiles).collect();
        v.iter().sum::<usize>() as f64 / v.len().max(1) as f64
    }

    /// Mean number of schemas with nonzero F1 per run.
    pub fn mean_learned(&self, mode: AgentMode) -> f64 {
        let v: Vec<usize> = self.of_mode(mode).map(|r| r.accuracy.learned().len()).collect();
        v.iter().sum::<usize>() as f64 / v.len().max(1) as f64
    }

    pub fn to_text(&self, modes: &[AgentMode]) -> String {
        let mut s = String::from("mode      runs  tiles(min/mean/max)   learned per run   planner calls\n");
        for &m in modes {
            let runs: Vec<&RunSummary> = self.of_mode(m).collect();
            let tiles: Vec<usize> = runs.iter().map(|r| r.final_tiles()).collect();
            let learned: Vec<String> = runs.iter().map(|r| r.accuracy.learned().len().to_string()).collect();
            let calls: Vec<String> = runs.iter().map(|r| r.planner_calls.to_string()).collect();
            let _ = writeln!(
                s,
                "{:<8}  {:>4}  {:>3} / {:>6.2} / {:>3}    {:<16}  {}",
                m.name(),
                runs.len(),
                tiles.iter().min().unwrap_or(&0),
                self.mean_final_tiles(m),
                tiles.iter().max().unwrap_or(&0),
                learned.join(","),
                calls.join(",")
            );
        }
        s
    }
}

fn read_text(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path).map_err(io_err(path))
}

/// Parses a domain file, or returns the shipped domain.
pub fn load_domain(domain: Option<&Path>) -> Result<DomainModel, HarnessError> {
    match domain {
        None => Ok(scenario::domain()),
        Some(p) => parse_domain(&read_text(p)?).map_err(|source| HarnessError::Pddl {
            path: p.display().to_string(),
            source: Box::new(source),
        }),
    }
}

/// Loads the domain and problem named by a config (or the shipped ones).
pub fn load_inputs(
    domain: Option<&Path>,
    scenario: Option<&Path>,
) -> Result<(DomainModel, ProblemInstance), HarnessError> {
    let dom = load_domain(domain)?;
    let problem = match scenario {
        None => scenario::scenario1(),
        Some(p) => parse_problem(&read_text(p)?, &dom).map_err(|source| HarnessError::Pddl {
            path: p.display().to_string(),
            source: Box::new(source),
        })?,
    };
    Grid::new(&dom, &problem.init)?;
    Ok((dom, problem))
}

fn write_file(path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(path, text).map_err(io_err(path))
}

fn write_run_artifacts(
    dir: &Path,
    out: &RunOutput,
    accuracy: &AccuracyReport,
    dom: &DomainModel,
    uni: &Universe,
) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let log_path = dir.join("interactions.jsonl");
    let f = fs::File::create(&log_path).map_err(io_err(&log_path))?;
    write_interaction_log(&out.history, dom, uni, BufWriter::new(f)).map_err(|source| HarnessError::Log {
        path: log_path.display().to_string(),
        source,
    })?;
    let mut run_log = String::from("step\ttier\taction\tlabel\tplan\n");
    for l in &out.log {
        run_log.push_str(l);
        run_log.push('\n');
    }
    write_file(&dir.join("run.log"), &run_log)?;
    write_file(&dir.join("models.jsonl"), &write_models(&out.models, dom, uni))?;
    write_file(&dir.join("accuracy.csv"), &accuracy.to_csv())?;
    write_file(&dir.join("accuracy.txt"), &accuracy.to_table())?;
    let mut prog = String::from("step,tiles\n");
    for (k, p) in out.progress.iter().enumerate() {
        let _ = writeln!(prog, "{},{p}", k + 1);
    }
    write_file(&dir.join("progress.csv"), &prog)
}

/// Runs every (mode, run) pair, writing `<out>/<mode>-<run>/` artifacts,
/// `<out>/progress.csv` and `<out>/summary.txt`. Run `r` uses seed
/// `seed + r` in every mode.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary, HarnessError> {
    config.validate()?;
    let (dom, problem) = load_inputs(config.domain.as_deref(), config.scenario.as_deref())?;
    let llcs = generate_llcs(&dom, config.llc_size);
    let perfect = PerfectModel::parse(scenario::PERFECT_MODEL_RULES, &dom).map_err(|source| HarnessError::Rules {
        path: "perfect model".into(),
        source,
    })?;
    let tests = shipped_test_states(&dom);
    fs::create_dir_all(&config.out).map_err(io_err(&config.out))?;

    let jobs: Vec<(AgentMode, usize)> = config
        .modes
        .iter()
        .flat_map(|m| (0..config.runs).map(move |r| (*m, r)))
        .collect();
    let work = || {
        jobs.par_iter()
            .map(|&(mode, run)| {
                let seed = config.seed.wrapping_add(run as u64);
                let mut rc = RunConfig::new(mode, config.steps, seed);
                rc.grounding = config.grounding;
                let out = controller::run(&dom, &problem, &llcs, rc)?;
                let accuracy = evaluate_accuracy(&dom, &preconditions_of(&out.models, &dom), &perfect, &tests)?;
                let dir = config.out.join(format!("{}-{}", mode.name(), run));
                write_run_artifacts(&dir, &out, &accuracy, &dom, &problem.universe)?;
                Ok(RunSummary {
                    mode,
                    run,
                    seed,
                    progress: out.progress,
                    accuracy,
                    planner_calls: out.planner_calls,
                })
            })
            .collect::<Result<Vec<_>, HarnessError>>()
    };
    let runs = match config.workers {
        None => work()?,
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?
            .install(work)?,
    };

    let traces: Vec<(AgentMode, Vec<Vec<usize>>)> = config
        .modes
        .iter()
        .map(|m| {
            (
                *m,
                runs.iter()
                    .filter(|r| r.mode == *m)
                    .map(|r| r.progress.clone())
                    .collect(),
            )
        })
        .collect();
    let progress_table = emit_progress_table(&traces)?;
    write_file(&config.out.join("progress.csv"), &progress_table)?;
    let summary = ExperimentSummary { runs, progress_table };
    write_file(&config.out.join("summary.txt"), &summary.to_text(&config.modes))?;
    Ok(summary)
}
