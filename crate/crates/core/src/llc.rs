//! Lifted linked clauses: generation, activity and the per-context action
//! count table.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::domain::{DomainModel, SchemaId, Universe};
use crate::interaction::Interaction;
use crate::relational::{canonicalize, is_satisfied, Clause, Literal, PredId, State, Term, TypeId, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LlcId(pub u32);

impl LlcId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A canonical connected conjunction of lifted literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Llc {
    clause: Clause,
}

impl Llc {
    pub fn clause(&self) -> &Clause {
        &self.clause
    }

    pub fn size(&self) -> usize {
        self.clause.len()
    }

    pub fn is_active(&self, state: &State, universe: &Universe) -> bool {
        is_satisfied(&self.clause, state, universe)
    }

    pub fn display<'a>(&'a self, dom: &'a DomainModel) -> impl std::fmt::Display + 'a {
        self.clause.display(dom)
    }
}

/// The bound `binom(M! * 2 * |P|, n)` on LLCs of size `n`.
pub fn llc_upper_bound(dom: &DomainModel, n: usize) -> u128 {
    let m_fact: u128 = (1..=dom.max_arity() as u128).product();
    binomial(m_fact * 2 * dom.predicates().len() as u128, n as u128)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Every LLC of size `1..=max_size`, ordered by size then rendered text.
///
/// Size `k` clauses are built by adding one linked literal to each size
/// `k-1` clause; every connected clause has a literal whose removal keeps
/// it connected, so this reaches all of them. Cost grows quickly past 3.
pub fn generate_llcs(dom: &DomainModel, max_size: usize) -> Vec<Llc> {
    let mut all: Vec<Clause> = Vec::new();
    let mut layer: BTreeSet<Clause> = BTreeSet::new();
    for pred in dom.predicate_ids() {
        let params = &dom.predicate(pred).params;
        for args in arg_patterns(params, &[]) {
            for negated in [false, true] {
                let (lit, types) = args.clone();
                let clause = Clause::new(vec![make_literal(pred, negated, &lit)], types);
                layer.insert(canonicalize(&clause));
            }
        }
    }
    if max_size == 0 {
        layer.clear();
    }
    for _ in 1..max_size {
        let mut next = BTreeSet::new();
        for base in &layer {
            for pred in dom.predicate_ids() {
                let params = &dom.predicate(pred).params;
                for (vars, types) in arg_patterns(params, base.var_types()) {
                    if !vars.iter().any(|v| v.index() < base.var_count()) {
                        continue;
                    }
                    for negated in [false, true] {
                        let lit = make_literal(pred, negated, &vars);
                        if base.literals().contains(&lit) {
                            continue;
                        }
                        let mut c = base.clone();
                        c.push(lit, &types[base.var_count()..]);
                        next.insert(canonicalize(&c));
                    }
                }
            }
        }
        all.extend(std::mem::take(&mut layer));
        layer = next;
    }
    all.extend(layer);
    let mut out: Vec<(usize, String, Clause)> = all
        .into_iter()
        .map(|c| (c.len(), c.display(dom).to_string(), c))
        .collect();
    out.sort();
    out.into_iter().map(|(_, _, clause)| Llc { clause }).collect()
}

fn make_literal(pred: PredId, negated: bool, vars: &[Var]) -> Literal {
    let args = vars.iter().map(|v| Term::Var(*v));
    if negated {
        Literal::negative(pred, args)
    } else {
        Literal::positive(pred, args)
    }
}

// Type-consistent argument tuples over the existing variables plus fresh
// ones, with fresh variables numbered in order of first use. Returns each
// tuple with the extended variable type list.
fn arg_patterns(params: &[TypeId], existing: &[TypeId]) -> Vec<(Vec<Var>, Vec<TypeId>)> {
    let mut out = Vec::new();
    let mut types = existing.to_vec();
    let mut cur = Vec::with_capacity(params.len());
    fn rec(params: &[TypeId], types: &mut Vec<TypeId>, cur: &mut Vec<Var>, out: &mut Vec<(Vec<Var>, Vec<TypeId>)>) {
        let i = cur.len();
        if i == params.len() {
            out.push((cur.clone(), types.clone()));
            return;
        }
        for v in 0..types.len() {
            if types[v] == params[i] {
                cur.push(Var(v as u16));
                rec(params, types, cur, out);
                cur.pop();
            }
        }
        cur.push(Var(types.len() as u16));
        types.push(params[i]);
        rec(params, types, cur, out);
        types.pop();
        cur.pop();
    }
    rec(params, &mut types, &mut cur, &mut out);
    out
}

/// One line per LLC, in generation order.
pub fn dump_llcs(llcs: &[Llc], dom: &DomainModel) -> String {
    let mut s = String::new();
    for l in llcs {
        s.push_str(&l.clause.display(dom).to_string());
        s.push('\n');
    }
    s
}

/// Indices of the LLCs active in `state`.
pub fn active_llcs(llcs: &[Llc], state: &State, universe: &Universe) -> Vec<LlcId> {
    llcs.iter()
        .enumerate()
        .filter(|(_, l)| {
            // cheap rejection before search
            l.clause
                .literals()
                .iter()
                .all(|lit| lit.negated || state.has_predicate(lit.pred))
                && l.is_active(state, universe)
        })
        .map(|(i, _)| LlcId(i as u32))
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("unknown action schema #{0}")]
    UnknownSchema(u16),
    #[error("unknown LLC #{0}")]
    UnknownLlc(u32),
}

/// Counts of schema executions per active LLC.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LlcActionTable {
    schemas: usize,
    counts: Vec<u32>,
    totals: Vec<u64>,
    by_predicate: Vec<Vec<LlcId>>,
}

impl LlcActionTable {
    pub fn new(llcs: &[Llc], dom: &DomainModel) -> Self {
        let mut by_predicate = vec![Vec::new(); dom.predicates().len()];
        for (i, l) in llcs.iter().enumerate() {
            let preds: BTreeSet<PredId> = l.clause.predicates().collect();
            for p in preds {
                by_predicate[p.0 as usize].push(LlcId(i as u32));
            }
        }
        let schemas = dom.schemas().len();
        LlcActionTable {
            schemas,
            counts: vec![0; llcs.len() * schemas],
            totals: vec![0; llcs.len()],
            by_predicate,
        }
    }

    pub fn llc_count(&self) -> usize {
        self.totals.len()
    }

    pub fn schema_count(&self) -> usize {
        self.schemas
    }

    /// Adds one execution of `schema` to every active LLC.
    pub fn record_action(&mut self, active: &[LlcId], schema: SchemaId) -> Result<(), TableError> {
        if schema.index() >= self.schemas {
            return Err(TableError::UnknownSchema(schema.0));
        }
        if let Some(bad) = active.iter().find(|c| c.index() >= self.totals.len()) {
            return Err(TableError::UnknownLlc(bad.0));
        }
        for c in active {
            self.counts[c.index() * self.schemas + schema.index()] += 1;
            self.totals[c.index()] += 1;
        }
        Ok(())
    }

    pub fn count(&self, llc: LlcId, schema: SchemaId) -> u32 {
        self.counts[llc.index() * self.schemas + schema.index()]
    }

    /// Executions of any schema while `llc` was active.
    pub fn total(&self, llc: LlcId) -> u64 {
        self.totals[llc.index()]
    }

    /// Smallest per-schema count for `llc`.
    pub fn min_over_actions(&self, llc: LlcId) -> u32 {
        let row = &self.counts[llc.index() * self.schemas..(llc.index() + 1) * self.schemas];
        row.iter().copied().min().unwrap_or(0)
    }

    /// LLCs mentioning `pred`.
    pub fn mentioning(&self, pred: PredId) -> &[LlcId] {
        &self.by_predicate[pred.0 as usize]
    }
}

/// Interactions of `schema` whose prior state activates `llc`, by rescan.
pub fn examples_count(llc: &Llc, schema: SchemaId, history: &[Interaction], universe: &Universe) -> usize {
    history
        .iter()
        .filter(|i| i.action.schema == schema && llc.is_active(&i.prior, universe))
        .count()
}
