//! Terms, atoms, literals and clauses over a typed finite universe, with
//! unification and closed-world clause satisfaction.
//!
//! Negated literals are evaluated by negation as failure: a negated literal
//! holds when its grounding is absent from the state. Variables that no
//! positive literal binds range over every constant of their type.

use std::collections::BTreeSet;
use std::fmt;

use smallvec::SmallVec;

use crate::domain::{DomainModel, Universe};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u16);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type Args<T> = SmallVec<[T; 4]>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: PredId,
    pub args: Args<ConstId>,
}

impl GroundAtom {
    pub fn new(pred: PredId, args: impl IntoIterator<Item = ConstId>) -> Self {
        GroundAtom {
            pred,
            args: args.into_iter().collect(),
        }
    }

    pub fn display<'a>(&'a self, dom: &'a DomainModel, uni: &'a Universe) -> impl fmt::Display + 'a {
        AtomDisplay { atom: self, dom, uni }
    }
}

struct AtomDisplay<'a> {
    atom: &'a GroundAtom,
    dom: &'a DomainModel,
    uni: &'a Universe,
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.dom.predicate(self.atom.pred).name)?;
        for (i, c) in self.atom.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(self.uni.name(*c))?;
        }
        f.write_str(")")
    }
}

/// A fully observed state: a set of ground atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State {
    atoms: BTreeSet<GroundAtom>,
}

impl State {
    pub fn new() -> Self {
        State::default()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn insert(&mut self, atom: GroundAtom) -> bool {
        self.atoms.insert(atom)
    }

    pub fn remove(&mut self, atom: &GroundAtom) -> bool {
        self.atoms.remove(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundAtom> {
        self.atoms.iter()
    }

    /// Atoms of one predicate, in argument order.
    pub fn with_predicate(&self, pred: PredId) -> impl Iterator<Item = &GroundAtom> {
        let lower = GroundAtom {
            pred,
            args: Args::new(),
        };
        self.atoms.range(lower..).take_while(move |a| a.pred == pred)
    }

    pub fn has_predicate(&self, pred: PredId) -> bool {
        self.with_predicate(pred).next().is_some()
    }

    /// Removes `dels` then inserts `adds`.
    pub fn apply<'a>(
        &mut self,
        dels: impl IntoIterator<Item = &'a GroundAtom>,
        adds: impl IntoIterator<Item = &'a GroundAtom>,
    ) {
        for d in dels {
            self.atoms.remove(d);
        }
        for a in adds {
            self.atoms.insert(a.clone());
        }
    }
}

impl FromIterator<GroundAtom> for State {
    fn from_iter<I: IntoIterator<Item = GroundAtom>>(iter: I) -> Self {
        State {
            atoms: iter.into_iter().collect(),
        }
    }
}

/// Added and removed atoms between two states.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StateDiff {
    pub adds: BTreeSet<GroundAtom>,
    pub dels: BTreeSet<GroundAtom>,
}

impl StateDiff {
    pub fn is_empty(&self) -> bool {
        self.adds.is_empty() && self.dels.is_empty()
    }
}

pub fn state_diff(before: &State, after: &State) -> StateDiff {
    StateDiff {
        adds: after.atoms.difference(&before.atoms).cloned().collect(),
        dels: before.atoms.difference(&after.atoms).cloned().collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Const(ConstId),
}

/// A possibly negated lifted atom. The derived order (predicate, sign with
/// positive first, arguments) is the canonical literal order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub pred: PredId,
    pub negated: bool,
    pub args: Args<Term>,
}

impl Literal {
    pub fn positive(pred: PredId, args: impl IntoIterator<Item = Term>) -> Self {
        Literal {
            pred,
            negated: false,
            args: args.into_iter().collect(),
        }
    }

    pub fn negative(pred: PredId, args: impl IntoIterator<Item = Term>) -> Self {
        Literal {
            pred,
            negated: true,
            args: args.into_iter().collect(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(*v),
            Term::Const(_) => None,
        })
    }

    /// Grounds the literal's atom; `None` if some variable is unbound.
    pub fn ground(&self, b: &Binding) -> Option<GroundAtom> {
        let mut args = Args::new();
        for t in &self.args {
            args.push(match *t {
                Term::Const(c) => c,
                Term::Var(v) => b.get(v)?,
            });
        }
        Some(GroundAtom { pred: self.pred, args })
    }
}

/// A conjunction of literals whose variables are `V0..Vk` with declared types.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
    var_types: Vec<TypeId>,
}

impl Clause {
    /// # Panics
    /// If a literal mentions a variable without a declared type.
    pub fn new(literals: Vec<Literal>, var_types: Vec<TypeId>) -> Self {
        for lit in &literals {
            for v in lit.vars() {
                assert!(v.index() < var_types.len(), "variable V{} has no declared type", v.0);
            }
        }
        Clause { literals, var_types }
    }

    pub fn empty(var_types: Vec<TypeId>) -> Self {
        Clause {
            literals: Vec::new(),
            var_types,
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn var_types(&self) -> &[TypeId] {
        &self.var_types
    }

    pub fn var_count(&self) -> usize {
        self.var_types.len()
    }

    pub fn var_type(&self, v: Var) -> TypeId {
        self.var_types[v.index()]
    }

    /// Appends a literal, declaring any new variables it introduces.
    pub fn push(&mut self, lit: Literal, new_var_types: &[TypeId]) {
        self.var_types.extend_from_slice(new_var_types);
        for v in lit.vars() {
            assert!(v.index() < self.var_types.len());
        }
        self.literals.push(lit);
    }

    pub fn predicates(&self) -> impl Iterator<Item = PredId> + '_ {
        self.literals.iter().map(|l| l.pred)
    }

    pub fn display<'a>(&'a self, dom: &'a DomainModel) -> ClauseDisplay<'a> {
        ClauseDisplay {
            clause: self,
            dom,
            uni: None,
        }
    }

    pub fn display_with<'a>(&'a self, dom: &'a DomainModel, uni: &'a Universe) -> ClauseDisplay<'a> {
        ClauseDisplay {
            clause: self,
            dom,
            uni: Some(uni),
        }
    }
}

pub struct ClauseDisplay<'a> {
    clause: &'a Clause,
    dom: &'a DomainModel,
    uni: Option<&'a Universe>,
}

impl fmt::Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lit) in self.clause.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write_literal(f, lit, self.dom, self.uni)?;
        }
        Ok(())
    }
}

pub(crate) fn write_literal(
    f: &mut impl fmt::Write,
    lit: &Literal,
    dom: &DomainModel,
    uni: Option<&Universe>,
) -> fmt::Result {
    if lit.negated {
        f.write_str("not ")?;
    }
    write!(f, "{}(", dom.predicate(lit.pred).name)?;
    for (i, t) in lit.args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        match (t, uni) {
            (Term::Var(v), _) => write!(f, "V{}", v.0)?,
            (Term::Const(c), Some(u)) => f.write_str(u.name(*c))?,
            (Term::Const(c), None) => write!(f, "#{}", c.0)?,
        }
    }
    f.write_str(")")
}

/// A partial assignment of constants to clause variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Binding(SmallVec<[Option<ConstId>; 8]>);

impl Binding {
    pub fn new(var_count: usize) -> Self {
        Binding(std::iter::repeat_n(None, var_count).collect())
    }

    pub fn from_values(values: impl IntoIterator<Item = Option<ConstId>>) -> Self {
        Binding(values.into_iter().collect())
    }

    pub fn get(&self, v: Var) -> Option<ConstId> {
        self.0.get(v.index()).copied().flatten()
    }

    pub fn set(&mut self, v: Var, c: ConstId) {
        if self.0.len() <= v.index() {
            self.0.resize(v.index() + 1, None);
        }
        self.0[v.index()] = Some(c);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn values(&self) -> &[Option<ConstId>] {
        &self.0
    }

    /// Widens to `n` slots (new slots unbound).
    pub fn resized(mut self, n: usize) -> Self {
        self.0.resize(n, None);
        self
    }
}

/// Extends `b` so that the positive literal `lit` maps onto `atom`.
pub fn unify_literal(lit: &Literal, atom: &GroundAtom, b: &Binding) -> Option<Binding> {
    if lit.pred != atom.pred || lit.args.len() != atom.args.len() {
        return None;
    }
    let mut out = b.clone();
    for (t, &c) in lit.args.iter().zip(atom.args.iter()) {
        match *t {
            Term::Const(k) if k != c => return None,
            Term::Const(_) => {}
            Term::Var(v) => match out.get(v) {
                Some(bound) if bound != c => return None,
                Some(_) => {}
                None => out.set(v, c),
            },
        }
    }
    Some(out)
}

/// Every total binding of the clause variables under which the clause holds.
pub fn satisfy<'a>(clause: &'a Clause, state: &'a State, universe: &'a Universe) -> Satisfier<'a> {
    satisfy_from(clause, state, universe, Binding::new(clause.var_count()))
}

/// Like [`satisfy`], starting from a partial binding.
pub fn satisfy_from<'a>(clause: &'a Clause, state: &'a State, universe: &'a Universe, start: Binding) -> Satisfier<'a> {
    Satisfier::new(clause, state, universe, start.resized(clause.var_count()))
}

pub fn is_satisfied(clause: &Clause, state: &State, universe: &Universe) -> bool {
    satisfy(clause, state, universe).next().is_some()
}

enum Step<'a> {
    Match { lit: usize, atoms: Vec<&'a GroundAtom> },
    Enumerate { var: Var, domain: &'a [ConstId] },
    Check { lit: usize },
}

/// Lazy backtracking enumeration of satisfying bindings.
pub struct Satisfier<'a> {
    clause: &'a Clause,
    state: &'a State,
    steps: Vec<Step<'a>>,
    cursors: Vec<usize>,
    frames: Vec<Binding>,
    level: usize,
    exhausted: bool,
}

impl<'a> Satisfier<'a> {
    fn new(clause: &'a Clause, state: &'a State, universe: &'a Universe, start: Binding) -> Self {
        let mut bound: Vec<bool> = start.values().iter().map(Option::is_some).collect();
        let lits = clause.literals();
        let mut steps = Vec::with_capacity(lits.len() + 2);
        let mut placed = vec![false; lits.len()];
        let all_bound = |lit: &Literal, bound: &[bool]| lit.vars().all(|v| bound[v.index()]);

        let place_checks = |bound: &[bool], placed: &mut Vec<bool>, steps: &mut Vec<Step<'a>>| {
            for (i, lit) in lits.iter().enumerate() {
                if lit.negated && !placed[i] && all_bound(lit, bound) {
                    placed[i] = true;
                    steps.push(Step::Check { lit: i });
                }
            }
        };
        place_checks(&bound, &mut placed, &mut steps);

        // Positive literals, most-bound first.
        loop {
            let next = lits
                .iter()
                .enumerate()
                .filter(|(i, l)| !l.negated && !placed[*i])
                .max_by_key(|(i, l)| {
                    let b = l.vars().filter(|v| bound[v.index()]).count();
                    (b, std::cmp::Reverse(*i))
                })
                .map(|(i, _)| i);
            let Some(i) = next else { break };
            placed[i] = true;
            let lit = &lits[i];
            steps.push(Step::Match {
                lit: i,
                atoms: state.with_predicate(lit.pred).collect(),
            });
            for v in lit.vars() {
                bound[v.index()] = true;
            }
            place_checks(&bound, &mut placed, &mut steps);
        }

        // Remaining negated literals range their free variables over the universe.
        for (i, lit) in lits.iter().enumerate() {
            if placed[i] {
                continue;
            }
            for v in lit.vars() {
                if !bound[v.index()] {
                    bound[v.index()] = true;
                    steps.push(Step::Enumerate {
                        var: v,
                        domain: universe.of_type(clause.var_type(v)),
                    });
                }
            }
            placed[i] = true;
            steps.push(Step::Check { lit: i });
        }
        for (i, b) in bound.iter_mut().enumerate() {
            if !*b {
                *b = true;
                let var = Var(i as u16);
                steps.push(Step::Enumerate {
                    var,
                    domain: universe.of_type(clause.var_type(var)),
                });
            }
        }

        let n = steps.len();
        let mut frames = vec![Binding::default(); n + 1];
        frames[0] = start;
        Satisfier {
            clause,
            state,
            steps,
            cursors: vec![0; n + 1],
            frames,
            level: 0,
            exhausted: false,
        }
    }

    fn advance(&mut self, lvl: usize) -> Option<Binding> {
        let cursor = &mut self.cursors[lvl];
        let frame = &self.frames[lvl];
        match &self.steps[lvl] {
            Step::Match { lit, atoms } => {
                let lit = &self.clause.literals()[*lit];
                while *cursor < atoms.len() {
                    let atom = atoms[*cursor];
                    *cursor += 1;
                    if let Some(b) = unify_literal(lit, atom, frame) {
                        return Some(b);
                    }
                }
                None
            }
            Step::Enumerate { var, domain } => {
                if *cursor < domain.len() {
                    let mut b = frame.clone();
                    b.set(*var, domain[*cursor]);
                    *cursor += 1;
                    Some(b)
                } else {
                    None
                }
            }
            Step::Check { lit } => {
                if *cursor > 0 {
                    return None;
                }
                *cursor = 1;
                let atom = self.clause.literals()[*lit]
                    .ground(frame)
                    .expect("check scheduled after its variables are bound");
                (!self.state.contains(&atom)).then(|| frame.clone())
            }
        }
    }
}

impl Iterator for Satisfier<'_> {
    type Item = Binding;

    fn next(&mut self) -> Option<Binding> {
        if self.exhausted {
            return None;
        }
        loop {
            if self.level == self.steps.len() {
                let out = self.frames[self.level].clone();
                if self.level == 0 {
                    self.exhausted = true;
                } else {
                    self.level -= 1;
                }
                return Some(out);
            }
            let lvl = self.level;
            match self.advance(lvl) {
                Some(b) => {
                    self.frames[lvl + 1] = b;
                    self.cursors[lvl + 1] = 0;
                    self.level += 1;
                }
                None => {
                    if lvl == 0 {
                        self.exhausted = true;
                        return None;
                    }
                    self.cursors[lvl] = 0;
                    self.level -= 1;
                }
            }
        }
    }
}

/// Canonical form of a clause: duplicate literals dropped, literals in
/// (predicate, sign, argument pattern) order, variables renamed `V0, V1, ...`
/// by first occurrence. Alpha-equivalent clauses map to the same value.
///
/// Literals sharing a predicate and sign are ordered by trying every
/// permutation of the group, so cost grows factorially with such repeats.
pub fn canonicalize(clause: &Clause) -> Clause {
    let mut lits: Vec<Literal> = Vec::with_capacity(clause.len());
    for l in clause.literals() {
        if !lits.contains(l) {
            lits.push(l.clone());
        }
    }
    lits.sort_by_key(|a| (a.pred, a.negated));

    let mut groups: Vec<std::ops::Range<usize>> = Vec::new();
    let mut start = 0;
    for i in 1..=lits.len() {
        if i == lits.len() || (lits[i].pred, lits[i].negated) != (lits[start].pred, lits[start].negated) {
            groups.push(start..i);
            start = i;
        }
    }

    let mut best: Option<(Vec<Literal>, Vec<Var>)> = None;
    let mut order: Vec<usize> = (0..lits.len()).collect();
    permute_groups(&groups, 0, &mut order, &mut |order| {
        let (renamed, seen) = rename_in_order(&lits, order);
        if best.as_ref().is_none_or(|(b, _)| renamed < *b) {
            best = Some((renamed, seen));
        }
    });
    let (literals, seen) = best.unwrap_or_default();

    let mut var_types: Vec<TypeId> = seen.iter().map(|v| clause.var_type(*v)).collect();
    // Variables that occur in no literal keep their relative order at the end.
    for (i, ty) in clause.var_types().iter().enumerate() {
        if !seen.contains(&Var(i as u16)) {
            var_types.push(*ty);
        }
    }
    Clause { literals, var_types }
}

fn rename_in_order(lits: &[Literal], order: &[usize]) -> (Vec<Literal>, Vec<Var>) {
    let mut seen: Vec<Var> = Vec::new();
    let renamed = order
        .iter()
        .map(|&i| {
            let l = &lits[i];
            Literal {
                pred: l.pred,
                negated: l.negated,
                args: l
                    .args
                    .iter()
                    .map(|t| match *t {
                        Term::Var(v) => {
                            let pos = seen.iter().position(|s| *s == v).unwrap_or_else(|| {
                                seen.push(v);
                                seen.len() - 1
                            });
                            Term::Var(Var(pos as u16))
                        }
                        c => c,
                    })
                    .collect(),
            }
        })
        .collect();
    (renamed, seen)
}

fn permute_groups(
    groups: &[std::ops::Range<usize>],
    g: usize,
    order: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if g == groups.len() {
        visit(order);
        return;
    }
    let range = groups[g].clone();
    heap_permute(order, range.start, range.end - range.start, &mut |order| {
        permute_groups(groups, g + 1, order, visit)
    });
}

// Visits every permutation of order[start..start+k] (Heap's algorithm).
fn heap_permute(order: &mut Vec<usize>, start: usize, k: usize, visit: &mut dyn FnMut(&mut Vec<usize>)) {
    if k <= 1 {
        visit(order);
        return;
    }
    for i in 0..k - 1 {
        heap_permute(order, start, k - 1, visit);
        if k.is_multiple_of(2) {
            order.swap(start + i, start + k - 1);
        } else {
            order.swap(start, start + k - 1);
        }
    }
    heap_permute(order, start, k - 1, visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario;

    fn lit(dom: &DomainModel, name: &str, neg: bool, vars: &[u16]) -> Literal {
        let args = vars.iter().map(|v| Term::Var(Var(*v)));
        let p = dom.predicate_id(name).unwrap();
        if neg {
            Literal::negative(p, args)
        } else {
            Literal::positive(p, args)
        }
    }

    #[test]
    fn unify_binds_positionally() {
        let dom = scenario::domain();
        let prob = scenario::scenario1();
        let u = &prob.universe;
        let at = lit(&dom, "agentat", false, &[0, 1]);
        let atom = GroundAtom::new(
            dom.predicate_id("agentat").unwrap(),
            [u.lookup("x2").unwrap(), u.lookup("y3").unwrap()],
        );
        let b = unify_literal(&at, &atom, &Binding::new(2)).unwrap();
        assert_eq!(b.get(Var(0)), u.lookup("x2"));
        assert_eq!(b.get(Var(1)), u.lookup("y3"));
    }

    #[test]
    fn unify_rejects_predicate_mismatch_and_conflict() {
        let dom = scenario::domain();
        let prob = scenario::scenario1();
        let u = &prob.universe;
        let wall = lit(&dom, "wall", false, &[0, 1]);
        let cdoor = GroundAtom::new(
            dom.predicate_id("cdoor").unwrap(),
            [u.lookup("x8").unwrap(), u.lookup("y4").unwrap()],
        );
        assert!(unify_literal(&wall, &cdoor, &Binding::new(2)).is_none());

        // north(Y2, Y) against north(y2, y1) with Y2 already bound to y3
        let north = lit(&dom, "north", false, &[0, 1]);
        let atom = GroundAtom::new(
            dom.predicate_id("north").unwrap(),
            [u.lookup("y2").unwrap(), u.lookup("y1").unwrap()],
        );
        let mut b = Binding::new(2);
        b.set(Var(0), u.lookup("y3").unwrap());
        assert!(unify_literal(&north, &atom, &b).is_none());
    }

    #[test]
    fn satisfy_agent_position_in_initial_state() {
        let dom = scenario::domain();
        let prob = scenario::scenario1();
        let x = dom.type_id("xcoord").unwrap();
        let y = dom.type_id("ycoord").unwrap();
        let c = Clause::new(vec![lit(&dom, "agentat", false, &[0, 1])], vec![x, y]);
        let all: Vec<_> = satisfy(&c, &prob.init, &prob.universe).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].get(Var(0)), prob.universe.lookup("x1"));
        assert_eq!(all[0].get(Var(1)), prob.universe.lookup("y1"));

        let c2 = Clause::new(
            vec![lit(&dom, "agentat", false, &[0, 1]), lit(&dom, "wall", true, &[0, 1])],
            vec![x, y],
        );
        assert_eq!(satisfy(&c2, &prob.init, &prob.universe).count(), 1);
    }

    #[test]
    fn contradiction_is_unsatisfiable() {
        let dom = scenario::domain();
        let prob = scenario::scenario1();
        let x = dom.type_id("xcoord").unwrap();
        let y = dom.type_id("ycoord").unwrap();
        let c = Clause::new(
            vec![lit(&dom, "wall", false, &[0, 1]), lit(&dom, "wall", true, &[0, 1])],
            vec![x, y],
        );
        assert_eq!(satisfy(&c, &prob.init, &prob.universe).count(), 0);
    }

    #[test]
    fn negation_only_variables_range_over_universe() {
        let dom = scenario::domain();
        let prob = scenario::scenario1();
        let x = dom.type_id("xcoord").unwrap();
        let y = dom.type_id("ycoord").unwrap();
        let c = Clause::new(vec![lit(&dom, "wall", true, &[0, 1])], vec![x, y]);
        // 45 tiles, 12 walls
        assert_eq!(satisfy(&c, &prob.init, &prob.universe).count(), 33);
        assert_eq!(satisfy(&c, &State::new(), &prob.universe).count(), 45);
    }

    #[test]
    fn empty_clause_has_one_binding() {
        let prob = scenario::scenario1();
        let c = Clause::empty(vec![]);
        assert_eq!(satisfy(&c, &prob.init, &prob.universe).count(), 1);
    }

    #[test]
    fn state_diff_identity_and_move() {
        let dom = scenario::domain();
        let prob = scenario::scenario1();
        let u = &prob.universe;
        assert!(state_diff(&prob.init, &prob.init).is_empty());
        let at = dom.predicate_id("agentat").unwrap();
        let old = GroundAtom::new(at, [u.lookup("x1").unwrap(), u.lookup("y1").unwrap()]);
        let new = GroundAtom::new(at, [u.lookup("x2").unwrap(), u.lookup("y1").unwrap()]);
        let mut s2 = prob.init.clone();
        s2.apply([&old], [&new]);
        let d = state_diff(&prob.init, &s2);
        assert_eq!(d.adds.into_iter().collect::<Vec<_>>(), vec![new]);
        assert_eq!(d.dels.into_iter().collect::<Vec<_>>(), vec![old]);
    }

    #[test]
    fn canonical_order_puts_agentat_first() {
        // {at(B,A), agentat(A)} -> {agentat(V0), at(V1,V0)}
        let obj = vec!["object".to_string()];
        let t = TypeId(0);
        let dom = DomainModel::new(
            "t",
            obj,
            vec![
                crate::domain::PredicateSignature {
                    name: "at".into(),
                    params: vec![t, t],
                },
                crate::domain::PredicateSignature {
                    name: "agentat".into(),
                    params: vec![t],
                },
            ],
            vec![],
        );
        // A = V0, B = V1
        let c = Clause::new(
            vec![lit(&dom, "at", false, &[1, 0]), lit(&dom, "agentat", false, &[0])],
            vec![t, t],
        );
        let canon = canonicalize(&c);
        assert_eq!(canon.display(&dom).to_string(), "agentat(V0), at(V1, V0)");
        assert_eq!(canonicalize(&canon), canon);
    }
}
