//! Independent oracles shared by the integration tests and the acceptance
//! runner. Nothing here calls the code it is used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use llc_explorer::domain::{DomainModel, GroundAction, ProblemInstance, SchemaId, Universe};
use llc_explorer::env::{parse_action_name, Grid};
use llc_explorer::interaction::Interaction;
use llc_explorer::relational::{Clause, ConstId, GroundAtom, Literal, PredId, State, Term, TypeId, Var};
use rand::seq::SliceRandom;
use rand::Rng;

// ---------------------------------------------------------------- LLCs

fn render(lits: &[(PredId, bool, Vec<usize>)], dom: &DomainModel) -> String {
    let mut parts: Vec<String> = lits
        .iter()
        .map(|(p, neg, vars)| {
            let args: Vec<String> = vars.iter().map(|v| format!("V{v}")).collect();
            format!(
                "{}{}({})",
                if *neg { "not " } else { "" },
                dom.predicate(*p).name,
                args.join(", ")
            )
        })
        .collect();
    parts.sort();
    parts.join(", ")
}

/// Key that is equal for two literal sets iff some variable renaming maps
/// one onto the other: try every literal order, number variables by first
/// appearance, keep the smallest rendering.
pub fn iso_key(lits: &[(PredId, bool, Vec<usize>)], dom: &DomainModel) -> String {
    let mut best: Option<String> = None;
    let mut idx: Vec<usize> = (0..lits.len()).collect();
    permutations(&mut idx, 0, &mut |order| {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        let renamed: Vec<(PredId, bool, Vec<usize>)> = order
            .iter()
            .map(|&i| {
                let (p, n, vars) = &lits[i];
                let vs = vars
                    .iter()
                    .map(|v| {
                        let next = map.len();
                        *map.entry(*v).or_insert(next)
                    })
                    .collect();
                (*p, *n, vs)
            })
            .collect();
        let r = render(&renamed, dom);
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    });
    best.unwrap_or_default()
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

pub fn clause_lits(c: &Clause) -> Vec<(PredId, bool, Vec<usize>)> {
    c.literals()
        .iter()
        .map(|l| {
            let vars = l
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => v.index(),
                    Term::Const(_) => panic!("LLCs are lifted"),
                })
                .collect();
            (l.pred, l.negated, vars)
        })
        .collect()
}

/// All LLCs of size 1 and 2 by enumeration over a fixed variable pool:
/// every typed literal, every pair of distinct literals sharing a variable,
/// deduplicated up to renaming.
pub fn llc_oracle_upto2(dom: &DomainModel) -> BTreeSet<String> {
    // 4 variables per type is enough for two literals of arity 2
    let pool = |ty: TypeId| (0..4).map(move |k| ty.0 as usize * 4 + k);
    let mut lits: Vec<(PredId, bool, Vec<usize>)> = Vec::new();
    for p in dom.predicate_ids() {
        let params = dom.predicate(p).params.clone();
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for ty in &params {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    pool(*ty).map(move |v| {
                        let mut t = t.clone();
                        t.push(v);
                        t
                    })
                })
                .collect();
        }
        for t in tuples {
            for neg in [false, true] {
                lits.push((p, neg, t.clone()));
            }
        }
    }
    let mut out = BTreeSet::new();
    for a in &lits {
        out.insert(iso_key(std::slice::from_ref(a), dom));
    }
    for (i, a) in lits.iter().enumerate() {
        for b in &lits[i + 1..] {
            if a.2.iter().any(|v| b.2.contains(v)) {
                out.insert(iso_key(&[a.clone(), b.clone()], dom));
            }
        }
    }
    out
}

// ---------------------------------------------------------- satisfaction

/// Every total assignment of the clause's variables to constants of their
/// types under which the clause holds, closed world.
pub fn brute_force_bindings(c: &Clause, s: &State, uni: &Universe) -> BTreeSet<Vec<ConstId>> {
    let mut out = BTreeSet::new();
    let domains: Vec<&[ConstId]> = c.var_types().iter().map(|t| uni.of_type(*t)).collect();
    let mut cur = vec![ConstId(0); domains.len()];
    fn rec(
        k: usize,
        domains: &[&[ConstId]],
        cur: &mut Vec<ConstId>,
        c: &Clause,
        s: &State,
        out: &mut BTreeSet<Vec<ConstId>>,
    ) {
        if k == domains.len() {
            let ok = c.literals().iter().all(|l| {
                let atom = GroundAtom::new(
                    l.pred,
                    l.args.iter().map(|t| match t {
                        Term::Var(v) => cur[v.index()],
                        Term::Const(c) => *c,
                    }),
                );
                s.contains(&atom) != l.negated
            });
            if ok {
                out.insert(cur.clone());
            }
            return;
        }
        for &v in domains[k] {
            cur[k] = v;
            rec(k + 1, domains, cur, c, s, out);
        }
    }
    rec(0, &domains, &mut cur, c, s, &mut out);
    out
}

/// A 5x5 coordinate universe for the grid domain.
pub fn universe5(dom: &DomainModel) -> Universe {
    let mut u = Universe::new(dom.types().len());
    let x = dom.type_id("xcoord").unwrap();
    let y = dom.type_id("ycoord").unwrap();
    for i in 1..=5 {
        u.add(format!("x{i}"), x);
    }
    for i in 1..=5 {
        u.add(format!("y{i}"), y);
    }
    u
}

/// Random clause with 1..=3 literals over up to 4 variables and a random
/// state with at most 30 atoms.
pub fn random_instance(dom: &DomainModel, uni: &Universe, rng: &mut impl Rng) -> (Clause, State) {
    let preds: Vec<PredId> = dom.predicate_ids().collect();
    let mut var_types: Vec<TypeId> = Vec::new();
    let mut lits = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let p = *preds.choose(rng).unwrap();
        let args: Vec<Term> = dom
            .predicate(p)
            .params
            .iter()
            .map(|ty| {
                let same: Vec<usize> = (0..var_types.len()).filter(|&v| var_types[v] == *ty).collect();
                if !same.is_empty() && (var_types.len() >= 4 || rng.gen_bool(0.5)) {
                    Term::Var(Var(*same.choose(rng).unwrap() as u16))
                } else if var_types.len() < 4 {
                    var_types.push(*ty);
                    Term::Var(Var((var_types.len() - 1) as u16))
                } else {
                    Term::Const(*uni.of_type(*ty).choose(rng).unwrap())
                }
            })
            .collect();
        lits.push(if rng.gen_bool(0.3) {
            Literal::negative(p, args)
        } else {
            Literal::positive(p, args)
        });
    }
    let clause = Clause::new(lits, var_types);
    let mut state = State::new();
    for _ in 0..rng.gen_range(0..=30) {
        let p = *preds.choose(rng).unwrap();
        let args: Vec<ConstId> = dom
            .predicate(p)
            .params
            .iter()
            .map(|ty| *uni.of_type(*ty).choose(rng).unwrap())
            .collect();
        state.insert(GroundAtom::new(p, args));
    }
    (clause, state)
}

// ------------------------------------------------------------ simulator

/// Every ground action of the given schemas with two coordinate arguments.
pub fn all_groundings(dom: &DomainModel, uni: &Universe, schemas: &[SchemaId]) -> Vec<GroundAction> {
    let mut out = Vec::new();
    for &s in schemas {
        let params = &dom.schema(s).params;
        for &x in uni.of_type(params[0]) {
            for &y in uni.of_type(params[1]) {
                out.push(GroundAction::new(s, [x, y]));
            }
        }
    }
    out
}

/// Ground-truth successor through the simulator's transition function.
pub fn env_step(dom: &DomainModel, grid: &Grid, s: &State, a: &GroundAction) -> State {
    let (kind, dir) = parse_action_name(&dom.schema(a.schema).name).expect("grid schema");
    grid.apply(s, kind, dir, (a.args[0], a.args[1]))
}

/// States reachable from `start` using `schemas`, with their BFS depth.
pub fn reachable(dom: &DomainModel, uni: &Universe, start: &State, schemas: &[SchemaId]) -> BTreeMap<State, usize> {
    let grid = Grid::new(dom, start).unwrap();
    let acts = all_groundings(dom, uni, schemas);
    let mut depth = BTreeMap::from([(start.clone(), 0usize)]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(s) = queue.pop_front() {
        let d = depth[&s];
        for a in &acts {
            let n = env_step(dom, &grid, &s, a);
            if !depth.contains_key(&n) {
                depth.insert(n.clone(), d + 1);
                queue.push_back(n);
            }
        }
    }
    depth
}

/// Every grounding of `schemas` attempted from every state reachable in
/// `problem`, as labelled interactions.
pub fn saturation_set(dom: &DomainModel, problem: &ProblemInstance, schemas: &[SchemaId]) -> Vec<Interaction> {
    let all: Vec<SchemaId> = dom.schema_ids().collect();
    let states = reachable(dom, &problem.universe, &problem.init, &all);
    let grid = Grid::new(dom, &problem.init).unwrap();
    let acts = all_groundings(dom, &problem.universe, schemas);
    let mut out = Vec::new();
    for s in states.keys() {
        for a in &acts {
            let post = env_step(dom, &grid, s, a);
            out.push(Interaction::new(s.clone(), a.clone(), post));
        }
    }
    out
}

pub fn schema_ids(dom: &DomainModel, names: &[&str]) -> Vec<SchemaId> {
    names.iter().map(|n| dom.schema_id(n).unwrap()).collect()
}

pub const MOVES: [&str; 8] = [
    "move_n", "move_s", "move_e", "move_w", "move_ne", "move_nw", "move_se", "move_sw",
];

/// Four tiles in a row with a closed door north of the third one.
pub const CORRIDOR: &str = "(define (problem corridor) (:domain dcss)
  (:objects x1 x2 x3 x4 - xcoord y1 y2 - ycoord)
  (:init (agentat x1 y1) (west x2 x1) (west x3 x2) (west x4 x3) (north y2 y1)
         (wall x1 y2) (wall x2 y2) (wall x4 y2) (cdoor x3 y2)))";

/// A 3x3 room, closed door in the middle of the north row.
pub const ROOM: &str = "(define (problem room) (:domain dcss)
  (:objects x1 x2 x3 - xcoord y1 y2 y3 - ycoord)
  (:init (agentat x1 y1) (west x2 x1) (west x3 x2) (north y2 y1) (north y3 y2)
         (wall x1 y3) (wall x3 y3) (cdoor x2 y3) (wall x2 y2)))";

/// Pearson chi-square statistic of observed counts against a uniform
/// expectation.
pub fn chi_square_uniform(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    let e = n as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}
