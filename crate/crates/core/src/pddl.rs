//! Parser and writer for the STRIPS-typing subset of PDDL used by the
//! scenarios: domains declare types, predicates and parameter-only action
//! headers; problems declare typed objects and an initial state.
//!
//! Keywords are case-insensitive; symbols keep their case.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::domain::{ActionSchema, DomainModel, PredicateSignature, ProblemInstance, Universe};
use crate::relational::{GroundAtom, State, TypeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PddlError {
    #[error("syntax error at {}:{}: {msg}", pos.line, pos.col)]
    Syntax { pos: Pos, msg: String },
    #[error("duplicate {kind} `{name}` at {}:{}", pos.line, pos.col)]
    Duplicate { kind: &'static str, name: String, pos: Pos },
    #[error("undeclared {kind} `{name}` at {}:{}", pos.line, pos.col)]
    Undeclared { kind: &'static str, name: String, pos: Pos },
    #[error("atom `{atom}` at {}:{}: expected {expected} arguments, found {found}", pos.line, pos.col)]
    Arity {
        atom: String,
        expected: usize,
        found: usize,
        pos: Pos,
    },
    #[error("atom `{atom}` at {}:{}: argument `{arg}` has type {found}, expected {expected}", pos.line, pos.col)]
    Type {
        atom: String,
        arg: String,
        expected: String,
        found: String,
        pos: Pos,
    },
    #[error("unsupported construct `{what}` at {}:{}", pos.line, pos.col)]
    Unsupported { what: String, pos: Pos },
}

fn syntax(pos: Pos, msg: impl Into<String>) -> PddlError {
    PddlError::Syntax { pos, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexpr {
    Symbol(String, Pos),
    List(Vec<Sexpr>, Pos),
}

impl Sexpr {
    pub fn pos(&self) -> Pos {
        match self {
            Sexpr::Symbol(_, p) | Sexpr::List(_, p) => *p,
        }
    }

    fn symbol(&self) -> Option<&str> {
        match self {
            Sexpr::Symbol(s, _) => Some(s),
            Sexpr::List(..) => None,
        }
    }

    fn expect_symbol(&self, what: &str) -> Result<&str, PddlError> {
        self.symbol()
            .ok_or_else(|| syntax(self.pos(), format!("expected {what}, found a list")))
    }

    fn expect_list(&self, what: &str) -> Result<&[Sexpr], PddlError> {
        match self {
            Sexpr::List(items, _) => Ok(items),
            Sexpr::Symbol(s, p) => Err(syntax(*p, format!("expected {what}, found `{s}`"))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        self.symbol().is_some_and(|s| s.eq_ignore_ascii_case(kw))
    }
}

/// Reads every top-level s-expression. `;` starts a line comment.
pub fn read_sexprs(text: &str) -> Result<Vec<Sexpr>, PddlError> {
    let mut stack: Vec<(Vec<Sexpr>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let here = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                chars.next();
                col += 1;
                stack.push((Vec::new(), here));
            }
            ')' => {
                chars.next();
                col += 1;
                let (items, start) = stack.pop().ok_or_else(|| syntax(here, "unbalanced `)`"))?;
                let list = Sexpr::List(items, start);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => top.push(list),
                }
            }
            _ => {
                let mut sym = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    sym.push(c);
                    chars.next();
                    col += 1;
                }
                let atom = Sexpr::Symbol(sym, here);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(atom),
                    None => top.push(atom),
                }
            }
        }
    }
    if let Some((_, start)) = stack.last() {
        return Err(syntax(*start, "unclosed `(`"));
    }
    Ok(top)
}

fn single_define(text: &str) -> Result<Vec<Sexpr>, PddlError> {
    let mut forms = read_sexprs(text)?;
    if forms.len() != 1 {
        let pos = forms.get(1).map(Sexpr::pos).unwrap_or(Pos { line: 1, col: 1 });
        return Err(syntax(pos, "expected exactly one (define ...) form"));
    }
    let form = forms.remove(0);
    let pos = form.pos();
    let Sexpr::List(items, _) = form else {
        return Err(syntax(pos, "expected (define ...)"));
    };
    if !items.first().is_some_and(|s| s.is_keyword("define")) {
        return Err(syntax(pos, "expected (define ...)"));
    }
    Ok(items)
}

// (name, position, declared type with its position)
type TypedName<'a> = (&'a str, Pos, Option<(&'a str, Pos)>);

/// Splits `a b - t c - u d` into `(name, Some(type))` pairs; untyped names
/// get `None`.
fn typed_list(items: &[Sexpr]) -> Result<Vec<TypedName<'_>>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<(&str, Pos)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let s = items[i].expect_symbol("a name")?;
        if s == "-" {
            let ty = items
                .get(i + 1)
                .ok_or_else(|| syntax(items[i].pos(), "`-` without a type"))?;
            let ty_name = ty.expect_symbol("a type name")?;
            if pending.is_empty() {
                return Err(syntax(items[i].pos(), "`-` without preceding names"));
            }
            for (n, p) in pending.drain(..) {
                out.push((n, p, Some((ty_name, ty.pos()))));
            }
            i += 2;
        } else {
            pending.push((s, items[i].pos()));
            i += 1;
        }
    }
    out.extend(pending.into_iter().map(|(n, p)| (n, p, None)));
    Ok(out)
}

const DEFAULT_TYPE: &str = "object";

struct TypeTable {
    names: Vec<String>,
}

impl TypeTable {
    fn resolve(&mut self, ty: Option<(&str, Pos)>, declared: bool) -> Result<TypeId, PddlError> {
        let (name, pos) = ty.unwrap_or((DEFAULT_TYPE, Pos { line: 0, col: 0 }));
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(TypeId(i as u16));
        }
        if name == DEFAULT_TYPE || !declared {
            self.names.push(name.to_string());
            return Ok(TypeId(self.names.len() as u16 - 1));
        }
        Err(PddlError::Undeclared {
            kind: "type",
            name: name.to_string(),
            pos,
        })
    }
}

pub fn parse_domain(text: &str) -> Result<DomainModel, PddlError> {
    let items = single_define(text)?;
    let mut name = String::new();
    let mut types = TypeTable { names: Vec::new() };
    let mut types_declared = false;
    let mut predicates: Vec<PredicateSignature> = Vec::new();
    let mut schemas: Vec<ActionSchema> = Vec::new();

    for section in &items[1..] {
        let list = section.expect_list("a domain section")?;
        let Some(head) = list.first() else {
            return Err(syntax(section.pos(), "empty section"));
        };
        let kw = head.expect_symbol("a section keyword")?.to_ascii_lowercase();
        match kw.as_str() {
            "domain" => {
                name = list
                    .get(1)
                    .ok_or_else(|| syntax(section.pos(), "missing domain name"))?
                    .expect_symbol("a domain name")?
                    .to_string();
            }
            ":requirements" => {}
            ":types" => {
                types_declared = true;
                for (t, pos, parent) in typed_list(&list[1..])? {
                    if types.names.iter().any(|n| n == t) {
                        return Err(PddlError::Duplicate {
                            kind: "type",
                            name: t.into(),
                            pos,
                        });
                    }
                    if let Some((p, ppos)) = parent {
                        if p != DEFAULT_TYPE {
                            return Err(PddlError::Unsupported {
                                what: format!("type hierarchy `{t} - {p}`"),
                                pos: ppos,
                            });
                        }
                    }
                    types.names.push(t.to_string());
                }
            }
            ":predicates" => {
                for decl in &list[1..] {
                    let parts = decl.expect_list("a predicate declaration")?;
                    let pname = parts
                        .first()
                        .ok_or_else(|| syntax(decl.pos(), "empty predicate declaration"))?
                        .expect_symbol("a predicate name")?;
                    if predicates.iter().any(|p| p.name == pname) {
                        return Err(PddlError::Duplicate {
                            kind: "predicate",
                            name: pname.into(),
                            pos: decl.pos(),
                        });
                    }
                    let mut params = Vec::new();
                    for (_, _, ty) in typed_list(&parts[1..])? {
                        params.push(types.resolve(ty, types_declared)?);
                    }
                    if params.is_empty() {
                        return Err(PddlError::Unsupported {
                            what: format!("zero-arity predicate `{pname}`"),
                            pos: decl.pos(),
                        });
                    }
                    predicates.push(PredicateSignature {
                        name: pname.into(),
                        params,
                    });
                }
            }
            ":action" => {
                let aname = list
                    .get(1)
                    .ok_or_else(|| syntax(section.pos(), "missing action name"))?
                    .expect_symbol("an action name")?;
                if schemas.iter().any(|s| s.name == aname) {
                    return Err(PddlError::Duplicate {
                        kind: "action",
                        name: aname.into(),
                        pos: section.pos(),
                    });
                }
                let mut params = Vec::new();
                let mut i = 2;
                while i < list.len() {
                    let key = &list[i];
                    if key.is_keyword(":parameters") {
                        let plist = list
                            .get(i + 1)
                            .ok_or_else(|| syntax(key.pos(), "missing parameter list"))?
                            .expect_list("a parameter list")?;
                        for (_, _, ty) in typed_list(plist)? {
                            params.push(types.resolve(ty, types_declared)?);
                        }
                        i += 2;
                    } else {
                        return Err(PddlError::Unsupported {
                            what: key.symbol().unwrap_or("(...)").to_string(),
                            pos: key.pos(),
                        });
                    }
                }
                schemas.push(ActionSchema {
                    name: aname.into(),
                    params,
                });
            }
            other => {
                return Err(PddlError::Unsupported {
                    what: other.into(),
                    pos: head.pos(),
                });
            }
        }
    }
    Ok(DomainModel::new(name, types.names, predicates, schemas))
}

pub fn parse_problem(text: &str, dom: &DomainModel) -> Result<ProblemInstance, PddlError> {
    let items = single_define(text)?;
    let mut name = String::new();
    let mut universe = Universe::new(dom.types().len());
    let mut init = State::new();

    for section in &items[1..] {
        let list = section.expect_list("a problem section")?;
        let Some(head) = list.first() else {
            return Err(syntax(section.pos(), "empty section"));
        };
        let kw = head.expect_symbol("a section keyword")?.to_ascii_lowercase();
        match kw.as_str() {
            "problem" => {
                name = list
                    .get(1)
                    .ok_or_else(|| syntax(section.pos(), "missing problem name"))?
                    .expect_symbol("a problem name")?
                    .to_string();
            }
            ":domain" | ":goal" => {}
            ":objects" => {
                for (obj, pos, ty) in typed_list(&list[1..])? {
                    let tname = ty.map(|t| t.0).unwrap_or(DEFAULT_TYPE);
                    let tid = dom.type_id(tname).ok_or_else(|| PddlError::Undeclared {
                        kind: "type",
                        name: tname.into(),
                        pos: ty.map(|t| t.1).unwrap_or(pos),
                    })?;
                    if universe.add(obj, tid).is_none() {
                        return Err(PddlError::Duplicate {
                            kind: "object",
                            name: obj.into(),
                            pos,
                        });
                    }
                }
            }
            ":init" => {
                for fact in &list[1..] {
                    init.insert(parse_ground_atom(fact, dom, &universe)?);
                }
            }
            other => {
                return Err(PddlError::Unsupported {
                    what: other.into(),
                    pos: head.pos(),
                });
            }
        }
    }
    Ok(ProblemInstance { name, universe, init })
}

fn parse_ground_atom(fact: &Sexpr, dom: &DomainModel, uni: &Universe) -> Result<GroundAtom, PddlError> {
    let parts = fact.expect_list("a ground atom")?;
    let pos = fact.pos();
    let pname = parts
        .first()
        .ok_or_else(|| syntax(pos, "empty atom"))?
        .expect_symbol("a predicate name")?;
    let render = || {
        let args: Vec<&str> = parts.iter().filter_map(Sexpr::symbol).collect();
        format!("({})", args.join(" "))
    };
    let pid = dom.predicate_id(pname).ok_or_else(|| PddlError::Undeclared {
        kind: "predicate",
        name: pname.into(),
        pos,
    })?;
    let sig = dom.predicate(pid);
    if parts.len() - 1 != sig.arity() {
        return Err(PddlError::Arity {
            atom: render(),
            expected: sig.arity(),
            found: parts.len() - 1,
            pos,
        });
    }
    let mut args = Vec::with_capacity(sig.arity());
    for (arg, &ty) in parts[1..].iter().zip(&sig.params) {
        let a = arg.expect_symbol("an object name")?;
        let c = uni.lookup(a).ok_or_else(|| PddlError::Undeclared {
            kind: "object",
            name: a.into(),
            pos: arg.pos(),
        })?;
        let found = uni.constant(c).ty;
        if found != ty {
            return Err(PddlError::Type {
                atom: render(),
                arg: a.into(),
                expected: dom.type_name(ty).into(),
                found: dom.type_name(found).into(),
                pos: arg.pos(),
            });
        }
        args.push(c);
    }
    Ok(GroundAtom::new(pid, args))
}

/// Renders a problem as PDDL that [`parse_problem`] reads back unchanged.
pub fn write_problem(problem: &ProblemInstance, dom: &DomainModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(define (problem {})", problem.name);
    let _ = writeln!(out, "  (:domain {})", dom.name);
    out.push_str("  (:objects");
    let uni = &problem.universe;
    let mut seen: HashSet<TypeId> = HashSet::new();
    for c in uni.constants() {
        if !seen.insert(c.ty) {
            continue;
        }
        out.push_str("\n   ");
        for id in uni.of_type(c.ty) {
            let _ = write!(out, " {}", uni.name(*id));
        }
        let _ = write!(out, " - {}", dom.type_name(c.ty));
    }
    out.push_str(")\n  (:init");
    for atom in problem.init.iter() {
        let _ = write!(out, "\n    ({}", dom.predicate(atom.pred).name);
        for a in &atom.args {
            let _ = write!(out, " {}", uni.name(*a));
        }
        out.push(')');
    }
    out.push_str("))\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario;

    fn count(p: &ProblemInstance, dom: &DomainModel, pred: &str) -> usize {
        p.init.with_predicate(dom.predicate_id(pred).unwrap()).count()
    }

    #[test]
    fn scenario1_facts() {
        let dom = scenario::domain();
        let p = parse_problem(scenario::SCENARIO1_PDDL, &dom).unwrap();
        assert_eq!(count(&p, &dom, "agentat"), 1);
        assert_eq!(count(&p, &dom, "cdoor"), 1);
        assert_eq!(count(&p, &dom, "wall"), 12);
        assert_eq!(count(&p, &dom, "north"), 4);
        assert_eq!(count(&p, &dom, "west"), 8);
        assert_eq!(p.universe.of_type(dom.type_id("xcoord").unwrap()).len(), 9);
        assert_eq!(p.universe.of_type(dom.type_id("ycoord").unwrap()).len(), 5);
        let at = dom.predicate_id("agentat").unwrap();
        let x1 = p.universe.lookup("x1").unwrap();
        let y1 = p.universe.lookup("y1").unwrap();
        assert!(p.init.contains(&GroundAtom::new(at, [x1, y1])));
    }

    #[test]
    fn domain_has_24_schemas() {
        let dom = scenario::domain();
        assert_eq!(dom.schemas().len(), 24);
        for kind in ["move", "open_door", "close_door"] {
            let n = dom
                .schemas()
                .iter()
                .filter(|s| {
                    s.name
                        .strip_prefix(kind)
                        .is_some_and(|r| r.starts_with('_') && r.len() <= 3)
                })
                .count();
            assert_eq!(n, 8, "{kind}");
        }
        assert_eq!(dom.predicates().len(), 6);
        assert_eq!(dom.max_arity(), 2);
    }

    #[test]
    fn empty_init_and_empty_domain() {
        let dom = scenario::domain();
        let p = parse_problem(
            "(define (problem e) (:domain dcss) (:objects a - xcoord) (:init))",
            &dom,
        )
        .unwrap();
        assert!(p.init.is_empty());
        let d = parse_domain("(define (domain empty) (:types t))").unwrap();
        assert!(d.predicates().is_empty());
    }

    #[test]
    fn arity_and_type_errors() {
        let dom = scenario::domain();
        let err = parse_problem(
            "(define (problem e) (:objects x1 - xcoord y1 - ycoord) (:init (wall x1)))",
            &dom,
        )
        .unwrap_err();
        assert!(
            matches!(
                err,
                PddlError::Arity {
                    expected: 2,
                    found: 1,
                    ..
                }
            ),
            "{err}"
        );
        let err = parse_problem(
            "(define (problem e) (:objects x1 - xcoord y1 - ycoord) (:init (wall y1 x1)))",
            &dom,
        )
        .unwrap_err();
        assert!(matches!(err, PddlError::Type { .. }), "{err}");
        let err = parse_problem("(define (problem e) (:objects x1 - xcoord) (:init (lava x1)))", &dom).unwrap_err();
        assert!(matches!(err, PddlError::Undeclared { kind: "predicate", .. }));
    }

    #[test]
    fn syntax_error_reports_position() {
        let dom = scenario::domain();
        let err = parse_problem("(define (problem e)\n  (:init (wall x1 y1)", &dom).unwrap_err();
        match err {
            PddlError::Syntax { pos, .. } => assert_eq!(pos, Pos { line: 2, col: 3 }),
            other => panic!("{other}"),
        }
        let err = read_sexprs("(a))").unwrap_err();
        assert!(matches!(
            err,
            PddlError::Syntax {
                pos: Pos { line: 1, col: 4 },
                ..
            }
        ));
    }

    #[test]
    fn duplicate_predicate_rejected() {
        let err = parse_domain("(define (domain d) (:types t) (:predicates (p ?a - t) (p ?b - t)))").unwrap_err();
        assert!(matches!(err, PddlError::Duplicate { kind: "predicate", .. }));
    }

    #[test]
    fn keywords_case_insensitive() {
        let d =
            parse_domain("(DEFINE (DOMAIN D) (:TYPES t) (:PREDICATES (P ?a - t)) (:ACTION Go :PARAMETERS (?a - t)))")
                .unwrap();
        assert_eq!(d.name, "D");
        assert!(d.predicate_id("P").is_some());
        assert!(d.schema_id("Go").is_some());
    }

    #[test]
    fn preconditions_are_rejected() {
        let err = parse_domain(
            "(define (domain d) (:types t) (:predicates (p ?a - t)) (:action a :parameters (?x - t) :precondition (p ?x)))",
        )
        .unwrap_err();
        assert!(matches!(err, PddlError::Unsupported { .. }));
    }
}
