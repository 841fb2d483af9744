//! Precondition and effect learning from labelled interactions.
//!
//! Preconditions are learned one clause per schema with a greedy FOIL-style
//! search: starting from the head variables, add the literal with the best
//! information gain among those that keep every positive example covered,
//! until no negative example is covered or nothing helps. Effects are the
//! lifted state differences of the positive examples.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::domain::{DomainModel, SchemaId, Universe};
use crate::interaction::Interaction;
use crate::relational::{satisfy_from, unify_literal, Binding, Clause, Literal, PredId, State, Term, TypeId, Var};

/// Body literals allowed for one predicate: either sign, any argument may
/// be a head variable, an earlier existential or a fresh existential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeDeclaration {
    pub pred: PredId,
    pub arg_types: Vec<TypeId>,
}

impl ModeDeclaration {
    pub fn from_domain(dom: &DomainModel) -> Vec<ModeDeclaration> {
        dom.predicate_ids()
            .map(|p| ModeDeclaration {
                pred: p,
                arg_types: dom.predicate(p).params.clone(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnerConfig {
    /// Fresh existential variables allowed per clause.
    pub max_existentials: usize,
    pub max_body: usize,
    /// Keep at most this many negatives per schema (evenly strided).
    pub negative_cap: Option<usize>,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            max_existentials: 2,
            max_body: 8,
            negative_cap: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelStatus {
    Unknown,
    Learned,
}

/// Learned precondition and effects for one schema. Clause variables
/// `V0..V(h-1)` are the action arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnedActionModel {
    pub schema: SchemaId,
    pub arity: usize,
    pub precondition: Option<Clause>,
    pub adds: Vec<Literal>,
    pub dels: Vec<Literal>,
    pub status: ModelStatus,
    /// Training negatives the precondition still accepts.
    pub residual_errors: usize,
    pub effect_conflict: bool,
    pub positives: usize,
    pub negatives: usize,
}

impl LearnedActionModel {
    pub fn unknown(schema: SchemaId, arity: usize) -> Self {
        LearnedActionModel {
            schema,
            arity,
            precondition: None,
            adds: Vec::new(),
            dels: Vec::new(),
            status: ModelStatus::Unknown,
            residual_errors: 0,
            effect_conflict: false,
            positives: 0,
            negatives: 0,
        }
    }

    pub fn is_learned(&self) -> bool {
        self.status == ModelStatus::Learned
    }

    /// Whether the action with these arguments is predicted to succeed.
    pub fn executable(&self, state: &State, uni: &Universe, args: &[crate::relational::ConstId]) -> bool {
        match &self.precondition {
            None => false,
            Some(pre) => satisfy_from(pre, state, uni, head_binding(args)).next().is_some(),
        }
    }
}

pub fn head_binding(args: &[crate::relational::ConstId]) -> Binding {
    Binding::from_values(args.iter().map(|c| Some(*c)))
}

struct Examples<'a> {
    states: Vec<&'a State>,
    positive: Vec<bool>,
    n_pos: usize,
}

type Tuple = (u32, Binding);

#[derive(Clone, Copy, Debug, Default)]
struct Cover {
    pos_tuples: usize,
    neg_tuples: usize,
    // positive tuples before that keep an extension
    kept: usize,
    pos_examples: usize,
    neg_examples: usize,
}

fn info(p: usize, n: usize) -> f64 {
    (p as f64 / (p + n) as f64).log2()
}

fn gain(before: &Cover, after: &Cover) -> f64 {
    if after.pos_tuples == 0 {
        return f64::NEG_INFINITY;
    }
    after.kept as f64 * (info(after.pos_tuples, after.neg_tuples) - info(before.pos_tuples, before.neg_tuples))
}

fn extensions<'t>(lit: &'t Literal, state: &'t State, b: &'t Binding) -> Box<dyn Iterator<Item = Binding> + 't> {
    if lit.negated {
        let atom = lit.ground(b).expect("negated literals use bound variables");
        Box::new((!state.contains(&atom)).then(|| b.clone()).into_iter())
    } else {
        Box::new(
            state
                .with_predicate(lit.pred)
                .filter_map(move |a| unify_literal(lit, a, b)),
        )
    }
}

fn measure(tuples: &[Tuple], ex: &Examples) -> Cover {
    let mut c = Cover::default();
    let mut last: Option<u32> = None;
    for (e, _) in tuples {
        if ex.positive[*e as usize] {
            c.pos_tuples += 1;
        } else {
            c.neg_tuples += 1;
        }
        if last != Some(*e) {
            last = Some(*e);
            if ex.positive[*e as usize] {
                c.pos_examples += 1;
            } else {
                c.neg_examples += 1;
            }
        }
    }
    c.kept = c.pos_tuples;
    c
}

// Coverage after adding `lit`, without materialising the new tuples.
fn evaluate(lit: &Literal, tuples: &[Tuple], ex: &Examples, width: usize) -> Cover {
    let mut c = Cover::default();
    let mut last_ex: Option<u32> = None;
    let mut ex_counted = false;
    for (e, b) in tuples {
        let b = b.clone().resized(width);
        let n = extensions(lit, ex.states[*e as usize], &b).count();
        if last_ex != Some(*e) {
            last_ex = Some(*e);
            ex_counted = false;
        }
        if n == 0 {
            continue;
        }
        let pos = ex.positive[*e as usize];
        if pos {
            c.pos_tuples += n;
            c.kept += 1;
        } else {
            c.neg_tuples += n;
        }
        if !ex_counted {
            ex_counted = true;
            if pos {
                c.pos_examples += 1;
            } else {
                c.neg_examples += 1;
            }
        }
    }
    c
}

fn extend(lit: &Literal, tuples: &[Tuple], ex: &Examples, width: usize) -> Vec<Tuple> {
    let mut out = Vec::new();
    for (e, b) in tuples {
        let b = b.clone().resized(width);
        for nb in extensions(lit, ex.states[*e as usize], &b) {
            out.push((*e, nb));
        }
    }
    out
}

// Candidate literals over the clause's variables. Positive literals may add
// up to `fresh` new variables and must reuse an existing one; negated
// literals only use existing variables.
fn candidates(modes: &[ModeDeclaration], clause: &Clause, fresh: usize) -> Vec<(Literal, Vec<TypeId>)> {
    let mut out = Vec::new();
    let existing = clause.var_count();
    for m in modes {
        let mut patterns = Vec::new();
        arg_patterns(
            &m.arg_types,
            clause.var_types().to_vec(),
            &mut Vec::new(),
            &mut patterns,
        );
        for (vars, types) in patterns {
            let new = types.len() - existing;
            if new > fresh {
                continue;
            }
            let args: Vec<Term> = vars.iter().map(|v| Term::Var(*v)).collect();
            let links = vars.iter().any(|v| v.index() < existing);
            if links {
                let lit = Literal::positive(m.pred, args.clone());
                if !clause.literals().contains(&lit) {
                    out.push((lit, types[existing..].to_vec()));
                }
            }
            if new == 0 {
                let lit = Literal::negative(m.pred, args);
                if !clause.literals().contains(&lit) {
                    out.push((lit, Vec::new()));
                }
            }
        }
    }
    out
}

fn arg_patterns(params: &[TypeId], types: Vec<TypeId>, cur: &mut Vec<Var>, out: &mut Vec<(Vec<Var>, Vec<TypeId>)>) {
    let i = cur.len();
    if i == params.len() {
        out.push((cur.clone(), types));
        return;
    }
    for v in 0..types.len() {
        if types[v] == params[i] {
            cur.push(Var(v as u16));
            arg_patterns(params, types.clone(), cur, out);
            cur.pop();
        }
    }
    cur.push(Var(types.len() as u16));
    let mut t = types;
    t.push(params[i]);
    arg_patterns(params, t, cur, out);
    cur.pop();
}

// Example-level gain first (negative examples excluded), tuple-level FOIL
// gain second. Tuple gain alone rewards literals that only multiply
// bindings.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
struct Score {
    examples: f64,
    tuples: f64,
}

impl Score {
    fn between(before: &Cover, after: &Cover) -> Score {
        let examples = if after.pos_examples == 0 {
            f64::NEG_INFINITY
        } else {
            after.pos_examples as f64
                * (info(after.pos_examples, after.neg_examples) - info(before.pos_examples, before.neg_examples))
        };
        Score {
            examples,
            tuples: gain(before, after),
        }
    }

    fn then(self, next: Score) -> Score {
        Score {
            examples: self.examples + next.examples,
            tuples: self.tuples + next.tuples,
        }
    }

    fn positive(&self) -> bool {
        self.examples > 0.0 || (self.examples == 0.0 && self.tuples > 0.0)
    }
}

struct Choice {
    lit: Literal,
    types: Vec<TypeId>,
    score: Score,
}

impl Choice {
    fn better_than(&self, other: &Choice) -> bool {
        if self.score != other.score {
            return self.score > other.score;
        }
        if self.types.len() != other.types.len() {
            return self.types.len() < other.types.len();
        }
        self.lit < other.lit
    }
}

/// Learns a precondition clause from `(state, args)` examples, refining
/// `start`, whose first `head` variables are the action arguments. Returns
/// the clause and the number of negatives it still covers, or `None`
/// without positives.
pub fn learn_preconditions(
    start: Clause,
    head: usize,
    positives: &[(&State, &[crate::relational::ConstId])],
    negatives: &[(&State, &[crate::relational::ConstId])],
    modes: &[ModeDeclaration],
    config: &LearnerConfig,
) -> Option<(Clause, usize)> {
    if positives.is_empty() {
        return None;
    }
    let h = head;
    let ex = Examples {
        states: positives.iter().chain(negatives).map(|(s, _)| *s).collect(),
        positive: positives
            .iter()
            .map(|_| true)
            .chain(negatives.iter().map(|_| false))
            .collect(),
        n_pos: positives.len(),
    };
    let mut tuples: Vec<Tuple> = positives
        .iter()
        .chain(negatives)
        .enumerate()
        .map(|(i, (_, args))| (i as u32, head_binding(args)))
        .collect();
    let mut clause = Clause::empty(start.var_types()[..h].to_vec());
    for lit in start.literals() {
        let top = lit.vars().map(|v| v.index() + 1).max().unwrap_or(0);
        let new: Vec<TypeId> = start.var_types()[clause.var_count().min(top)..top].to_vec();
        let w = clause.var_count() + new.len();
        tuples = extend(lit, &tuples, &ex, w);
        clause.push(lit.clone(), &new);
    }
    let mut cover = measure(&tuples, &ex);

    while cover.neg_examples > 0 && clause.len() < config.max_body {
        let fresh_left = config.max_existentials.saturating_sub(clause.var_count() - h);
        let cands = candidates(modes, &clause, fresh_left);
        let width = |extra: usize| clause.var_count() + extra;

        // Variable-introducing literals are scored by their best
        // continuation, since a fresh variable often pays off only once a
        // second literal constrains it. Only the first literal is committed.
        let mut best: Option<Choice> = None;
        for (lit, types) in &cands {
            let w1 = width(types.len());
            let c1 = evaluate(lit, &tuples, &ex, w1);
            if c1.pos_examples < ex.n_pos {
                continue;
            }
            let g1 = Score::between(&cover, &c1);
            let mut score = g1;
            if !types.is_empty() && clause.len() + 1 < config.max_body {
                let t1 = extend(lit, &tuples, &ex, w1);
                let mut inner = clause.clone();
                inner.push(lit.clone(), types);
                let fresh2 = config.max_existentials.saturating_sub(inner.var_count() - h);
                for (second, types2) in candidates(modes, &inner, fresh2) {
                    let c2 = evaluate(&second, &t1, &ex, inner.var_count() + types2.len());
                    if c2.pos_examples < ex.n_pos {
                        continue;
                    }
                    let pair = g1.then(Score::between(&c1, &c2));
                    if pair > score {
                        score = pair;
                    }
                }
            }
            let choice = Choice {
                lit: lit.clone(),
                types: types.clone(),
                score,
            };
            if score.positive() && best.as_ref().is_none_or(|b| choice.better_than(b)) {
                best = Some(choice);
            }
        }

        let Some(choice) = best else { break };
        let w = clause.var_count() + choice.types.len();
        tuples = extend(&choice.lit, &tuples, &ex, w);
        clause.push(choice.lit, &choice.types);
        cover = measure(&tuples, &ex);
    }
    let residual = cover.neg_examples;
    let start: Vec<Tuple> = positives
        .iter()
        .chain(negatives)
        .enumerate()
        .map(|(i, (_, args))| (i as u32, head_binding(args)))
        .collect();
    Some((reduce(clause, h, &start, &ex, residual), residual))
}

// Drops literals, first to last, while the clause stays safe and covers no
// more negative examples.
fn reduce(mut clause: Clause, head: usize, start: &[Tuple], ex: &Examples, residual: usize) -> Clause {
    let mut i = 0;
    while i < clause.len() {
        let mut lits = clause.literals().to_vec();
        lits.remove(i);
        match rebuild(&lits, clause.var_types(), head) {
            Some(c) if negatives_covered(&c, start, ex) <= residual => clause = c,
            _ => i += 1,
        }
    }
    clause
}

// Renumbers existentials by first use; `None` when a negated literal or a
// head-free component would be left without a positive binding.
fn rebuild(lits: &[Literal], types: &[TypeId], head: usize) -> Option<Clause> {
    let bound: std::collections::BTreeSet<Var> = lits.iter().filter(|l| !l.negated).flat_map(|l| l.vars()).collect();
    if lits
        .iter()
        .filter(|l| l.negated)
        .flat_map(|l| l.vars())
        .any(|v| v.index() >= head && !bound.contains(&v))
    {
        return None;
    }
    let mut map: Vec<Option<u16>> = vec![None; types.len()];
    let mut new_types: Vec<TypeId> = types[..head].to_vec();
    for (v, m) in map.iter_mut().enumerate().take(head) {
        *m = Some(v as u16);
    }
    let mut out = Vec::with_capacity(lits.len());
    for l in lits {
        let args = l.args.iter().map(|t| match t {
            Term::Var(v) => {
                let slot = &mut map[v.index()];
                let id = *slot.get_or_insert_with(|| {
                    new_types.push(types[v.index()]);
                    (new_types.len() - 1) as u16
                });
                Term::Var(Var(id))
            }
            c => *c,
        });
        out.push(Literal {
            pred: l.pred,
            negated: l.negated,
            args: args.collect(),
        });
    }
    Some(Clause::new(out, new_types))
}

fn negatives_covered(clause: &Clause, start: &[Tuple], ex: &Examples) -> usize {
    let mut tuples = start.to_vec();
    let mut lits: Vec<&Literal> = clause.literals().iter().filter(|l| !l.negated).collect();
    lits.extend(clause.literals().iter().filter(|l| l.negated));
    for lit in lits {
        tuples = extend(lit, &tuples, ex, clause.var_count());
    }
    measure(&tuples, ex).neg_examples
}

/// Lifted add and delete lists with a flag set when examples disagreed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Effects {
    pub adds: Vec<Literal>,
    pub dels: Vec<Literal>,
    pub conflict: bool,
}

fn lift(atom: &crate::relational::GroundAtom, b: &Binding, head: usize) -> Literal {
    let vals = b.values();
    let args = atom.args.iter().map(|c| {
        let find = |range: std::ops::Range<usize>| range.into_iter().find(|&i| vals[i] == Some(*c));
        match find(0..head.min(vals.len())).or_else(|| find(head.min(vals.len())..vals.len())) {
            Some(i) => Term::Var(Var(i as u16)),
            None => Term::Const(*c),
        }
    });
    Literal::positive(atom.pred, args)
}

/// Lifts each positive's state difference through the first precondition
/// binding and keeps the most frequent result.
pub fn derive_effects(positives: &[&Interaction], precondition: Option<&Clause>, universe: &Universe) -> Effects {
    let mut tally: BTreeMap<(Vec<Literal>, Vec<Literal>), usize> = BTreeMap::new();
    for i in positives {
        let head = i.action.args.len();
        let start = head_binding(&i.action.args);
        let b = precondition
            .and_then(|pre| satisfy_from(pre, &i.prior, universe, start.clone()).next())
            .unwrap_or(start);
        let d = crate::relational::state_diff(&i.prior, &i.post);
        let adds: Vec<Literal> = d.adds.iter().map(|a| lift(a, &b, head)).collect();
        let dels: Vec<Literal> = d.dels.iter().map(|a| lift(a, &b, head)).collect();
        *tally.entry((adds, dels)).or_default() += 1;
    }
    let conflict = tally.len() > 1;
    // most frequent; ties go to the smallest key
    let best = tally
        .into_iter()
        .fold(None::<((Vec<Literal>, Vec<Literal>), usize)>, |acc, (k, n)| match acc {
            Some((_, m)) if m >= n => acc,
            _ => Some((k, n)),
        });
    match best {
        Some(((adds, dels), _)) => Effects { adds, dels, conflict },
        None => Effects::default(),
    }
}

/// Starting body for a schema: a deleted atom held before the action, so
/// the lifted delete lists of the positives are a sound first refinement.
/// Arguments map to head variables, other constants to fresh variables in
/// order of first use. Returns the bare head unless every positive lifts to
/// the same list.
pub fn delete_seed(dom: &DomainModel, schema: SchemaId, positives: &[&Interaction]) -> Clause {
    let head = dom.schema(schema).params.clone();
    let mut seed: Option<Clause> = None;
    for i in positives {
        let dels = crate::relational::state_diff(&i.prior, &i.post).dels;
        let mut fresh: Vec<crate::relational::ConstId> = Vec::new();
        let mut types = head.clone();
        let mut lits = Vec::new();
        for atom in &dels {
            let params = &dom.predicate(atom.pred).params;
            let args: Vec<Term> = atom
                .args
                .iter()
                .zip(params)
                .map(|(c, ty)| {
                    if let Some(k) = i.action.args.iter().position(|a| a == c) {
                        return Term::Var(Var(k as u16));
                    }
                    let k = fresh.iter().position(|f| f == c).unwrap_or_else(|| {
                        fresh.push(*c);
                        types.push(*ty);
                        fresh.len() - 1
                    });
                    Term::Var(Var((head.len() + k) as u16))
                })
                .collect();
            lits.push(Literal::positive(atom.pred, args));
        }
        let c = Clause::new(lits, types);
        match &seed {
            None => seed = Some(c),
            Some(prev) if *prev == c => {}
            Some(_) => return Clause::empty(head),
        }
    }
    seed.unwrap_or_else(|| Clause::empty(head))
}

fn as_example(i: &Interaction) -> (&State, &[crate::relational::ConstId]) {
    (&i.prior, &i.action.args[..])
}

/// Learns a model for one schema from its interactions.
pub fn learn_model<'a>(
    dom: &DomainModel,
    schema: SchemaId,
    interactions: &[&'a Interaction],
    universe: &Universe,
    modes: &[ModeDeclaration],
    config: &LearnerConfig,
) -> LearnedActionModel {
    let pos: Vec<&'a Interaction> = interactions.iter().copied().filter(|i| i.is_positive()).collect();
    let mut neg: Vec<&'a Interaction> = interactions.iter().copied().filter(|i| !i.is_positive()).collect();
    let negatives_seen = neg.len();
    if let Some(cap) = config.negative_cap {
        if neg.len() > cap && cap > 0 {
            let stride = neg.len() as f64 / cap as f64;
            neg = (0..cap).map(|k| neg[(k as f64 * stride) as usize]).collect();
        } else if cap == 0 {
            neg.clear();
        }
    }
    let mut model = LearnedActionModel::unknown(schema, dom.schema(schema).params.len());
    model.positives = pos.len();
    model.negatives = negatives_seen;
    // identical (state, arguments) pairs carry no extra information
    let dedup = |items: &[&'a Interaction]| {
        let mut seen = std::collections::HashSet::new();
        items
            .iter()
            .map(|i| as_example(i))
            .filter(|e| seen.insert(*e))
            .collect::<Vec<_>>()
    };
    let p = dedup(&pos);
    let n = dedup(&neg);
    let start = delete_seed(dom, schema, &pos);
    let head = dom.schema(schema).params.len();
    let Some((clause, residual)) = learn_preconditions(start, head, &p, &n, modes, config) else {
        return model;
    };
    let eff = derive_effects(&pos, Some(&clause), universe);
    model.precondition = Some(clause);
    model.adds = eff.adds;
    model.dels = eff.dels;
    model.effect_conflict = eff.conflict;
    model.residual_errors = residual;
    model.status = ModelStatus::Learned;
    model
}

/// Per-schema model cache that relearns only schemas with new interactions.
#[derive(Clone, Debug)]
pub struct Learner {
    config: LearnerConfig,
    modes: Vec<ModeDeclaration>,
    models: Vec<LearnedActionModel>,
    by_schema: Vec<Vec<usize>>,
    seen: usize,
}

impl Learner {
    pub fn new(dom: &DomainModel, config: LearnerConfig) -> Self {
        Learner {
            config,
            modes: ModeDeclaration::from_domain(dom),
            models: dom
                .schema_ids()
                .map(|s| LearnedActionModel::unknown(s, dom.schema(s).params.len()))
                .collect(),
            by_schema: vec![Vec::new(); dom.schemas().len()],
            seen: 0,
        }
    }

    pub fn models(&self) -> &[LearnedActionModel] {
        &self.models
    }

    /// Brings models up to date with `history`, which must extend the
    /// history passed previously. Returns the schemas that were relearned.
    pub fn learn_all(&mut self, dom: &DomainModel, history: &[Interaction], universe: &Universe) -> Vec<SchemaId> {
        assert!(history.len() >= self.seen, "history shrank between calls");
        let mut dirty = vec![false; self.models.len()];
        for (k, i) in history.iter().enumerate().skip(self.seen) {
            self.by_schema[i.action.schema.index()].push(k);
            dirty[i.action.schema.index()] = true;
        }
        self.seen = history.len();
        let dirty: Vec<SchemaId> = dom.schema_ids().filter(|s| dirty[s.index()]).collect();
        let fresh: Vec<LearnedActionModel> = dirty
            .par_iter()
            .map(|s| {
                let items: Vec<&Interaction> = self.by_schema[s.index()].iter().map(|&k| &history[k]).collect();
                learn_model(dom, *s, &items, universe, &self.modes, &self.config)
            })
            .collect();
        for m in fresh {
            let idx = m.schema.index();
            self.models[idx] = m;
        }
        dirty
    }
}
