//! Rule text in the `head(X, Y) :- body, not lit.` form.
//!
//! Head arguments become `V0..V(h-1)` in order; body-only variables follow
//! in order of first appearance. Variables start with an uppercase letter.
//! Constants are not accepted. `%` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::domain::{DomainModel, SchemaId};
use crate::relational::{write_literal, Clause, Literal, Term, TypeId, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown {kind} `{name}`")]
    Unknown {
        kind: &'static str,
        name: String,
        line: usize,
    },
    #[error("line {line}: `{name}` expects {expected} arguments, found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        line: usize,
    },
    #[error("line {line}: variable {var} used as both {a} and {b}")]
    Type {
        var: String,
        a: String,
        b: String,
        line: usize,
    },
    #[error("line {line}: duplicate rule for `{schema}`")]
    Duplicate { schema: String, line: usize },
}

/// A precondition rule for one schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub schema: SchemaId,
    pub body: Clause,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Open,
    Close,
    Comma,
    Dot,
    Neck,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, RuleError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let src = raw.split('%').next().unwrap_or("");
        let mut chars = src.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            match c {
                c if c.is_whitespace() => {}
                '(' => out.push((Tok::Open, line)),
                ')' => out.push((Tok::Close, line)),
                ',' => out.push((Tok::Comma, line)),
                '.' => out.push((Tok::Dot, line)),
                ':' => {
                    if chars.next_if(|(_, c)| *c == '-').is_none() {
                        return Err(RuleError::Syntax {
                            line,
                            msg: "expected `:-`".into(),
                        });
                    }
                    out.push((Tok::Neck, line));
                }
                c if c.is_alphanumeric() || c == '_' => {
                    let mut end = i + c.len_utf8();
                    while let Some((j, d)) = chars.next_if(|(_, d)| d.is_alphanumeric() || *d == '_' || *d == '-') {
                        end = j + d.len_utf8();
                    }
                    out.push((Tok::Ident(src[i..end].to_string()), line));
                }
                other => {
                    return Err(RuleError::Syntax {
                        line,
                        msg: format!("unexpected character `{other}`"),
                    });
                }
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    dom: &'a DomainModel,
}

// Name and argument variables of one `name(A, B)` occurrence.
type RawAtom = (String, Vec<String>, usize);

impl Parser<'_> {
    fn line(&self) -> usize {
        self.toks.get(self.at).or_else(|| self.toks.last()).map_or(1, |t| t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.0.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), RuleError> {
        let line = self.line();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(RuleError::Syntax {
                line,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn ident(&mut self) -> Result<String, RuleError> {
        let line = self.line();
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => Err(RuleError::Syntax {
                line,
                msg: "expected a name".into(),
            }),
        }
    }

    fn atom(&mut self, name: String) -> Result<RawAtom, RuleError> {
        let line = self.line();
        self.expect(Tok::Open, "`(`")?;
        let mut args = Vec::new();
        loop {
            let a = self.ident()?;
            if !a.starts_with(|c: char| c.is_uppercase()) {
                return Err(RuleError::Syntax {
                    line,
                    msg: format!("`{a}` is not a variable; constants are not allowed in rules"),
                });
            }
            args.push(a);
            match self.next() {
                Some(Tok::Comma) => {}
                Some(Tok::Close) => break,
                _ => {
                    return Err(RuleError::Syntax {
                        line,
                        msg: "expected `,` or `)`".into(),
                    })
                }
            }
        }
        Ok((name, args, line))
    }

    fn rule(&mut self) -> Result<Rule, RuleError> {
        let head_name = self.ident()?;
        let (head_name, head_args, line) = self.atom(head_name)?;
        let schema = self.dom.schema_id(&head_name).ok_or_else(|| RuleError::Unknown {
            kind: "action schema",
            name: head_name.clone(),
            line,
        })?;
        let params = &self.dom.schema(schema).params;
        if params.len() != head_args.len() {
            return Err(RuleError::Arity {
                name: head_name,
                expected: params.len(),
                found: head_args.len(),
                line,
            });
        }

        let mut vars: HashMap<String, Var> = HashMap::new();
        let mut types: Vec<TypeId> = Vec::new();
        for (a, ty) in head_args.iter().zip(params) {
            if vars.insert(a.clone(), Var(types.len() as u16)).is_some() {
                return Err(RuleError::Syntax {
                    line,
                    msg: format!("head variable {a} repeated"),
                });
            }
            types.push(*ty);
        }

        let mut body = Vec::new();
        match self.next() {
            Some(Tok::Dot) => {}
            Some(Tok::Neck) => loop {
                let mut name = self.ident()?;
                let negated = name == "not";
                if negated {
                    name = self.ident()?;
                }
                let (name, args, line) = self.atom(name)?;
                body.push(self.literal(name, args, negated, line, &mut vars, &mut types)?);
                match self.next() {
                    Some(Tok::Comma) => {}
                    Some(Tok::Dot) => break,
                    _ => {
                        return Err(RuleError::Syntax {
                            line,
                            msg: "expected `,` or `.`".into(),
                        })
                    }
                }
            },
            _ => {
                return Err(RuleError::Syntax {
                    line,
                    msg: "expected `:-` or `.`".into(),
                })
            }
        }
        Ok(Rule {
            schema,
            body: Clause::new(body, types),
        })
    }

    fn literal(
        &self,
        name: String,
        args: Vec<String>,
        negated: bool,
        line: usize,
        vars: &mut HashMap<String, Var>,
        types: &mut Vec<TypeId>,
    ) -> Result<Literal, RuleError> {
        let pred = self.dom.predicate_id(&name).ok_or_else(|| RuleError::Unknown {
            kind: "predicate",
            name: name.clone(),
            line,
        })?;
        let sig = self.dom.predicate(pred);
        if sig.arity() != args.len() {
            return Err(RuleError::Arity {
                name,
                expected: sig.arity(),
                found: args.len(),
                line,
            });
        }
        let mut terms = Vec::with_capacity(args.len());
        for (a, ty) in args.into_iter().zip(&sig.params) {
            let v = match vars.get(&a) {
                Some(&v) => {
                    if types[v.index()] != *ty {
                        return Err(RuleError::Type {
                            var: a,
                            a: self.dom.type_name(types[v.index()]).to_string(),
                            b: self.dom.type_name(*ty).to_string(),
                            line,
                        });
                    }
                    v
                }
                None => {
                    let v = Var(types.len() as u16);
                    types.push(*ty);
                    vars.insert(a, v);
                    v
                }
            };
            terms.push(Term::Var(v));
        }
        Ok(Literal {
            pred,
            negated,
            args: terms.into_iter().collect(),
        })
    }
}

/// Parses a rule file. Each schema may have at most one rule.
pub fn parse_rules(text: &str, dom: &DomainModel) -> Result<Vec<Rule>, RuleError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
        dom,
    };
    let mut rules: Vec<Rule> = Vec::new();
    while p.at < p.toks.len() {
        let line = p.line();
        let rule = p.rule()?;
        if rules.iter().any(|r| r.schema == rule.schema) {
            return Err(RuleError::Duplicate {
                schema: dom.schema(rule.schema).name.clone(),
                line,
            });
        }
        rules.push(rule);
    }
    Ok(rules)
}

/// Renders a rule; the first `h` clause variables are the head arguments.
pub fn render_rule(dom: &DomainModel, schema: SchemaId, body: &Clause) -> String {
    let arity = dom.schema(schema).params.len();
    let mut s = format!("{}(", dom.schema(schema).name);
    for i in 0..arity {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "V{i}");
    }
    s.push(')');
    if !body.is_empty() {
        s.push_str(" :- ");
        for (i, lit) in body.literals().iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            let _ = write_literal(&mut s, lit, dom, None);
        }
    }
    s.push('.');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario;

    #[test]
    fn perfect_model_has_a_rule_per_schema() {
        let dom = scenario::domain();
        let rules = parse_rules(scenario::PERFECT_MODEL_RULES, &dom).unwrap();
        assert_eq!(rules.len(), 24);
    }

    #[test]
    fn head_variables_come_first() {
        let dom = scenario::domain();
        let r = &parse_rules(
            "move_se(X, Y) :- agentat(X2, Y2), north(Y2, Y), west(X2, X), not wall(X, Y).",
            &dom,
        )
        .unwrap()[0];
        assert_eq!(
            render_rule(&dom, r.schema, &r.body),
            "move_se(V0, V1) :- agentat(V2, V3), north(V3, V1), west(V2, V0), not wall(V0, V1)."
        );
        let x = dom.type_id("xcoord").unwrap();
        let y = dom.type_id("ycoord").unwrap();
        assert_eq!(r.body.var_types(), &[x, y, x, y]);
    }

    #[test]
    fn render_parse_round_trip() {
        let dom = scenario::domain();
        for r in parse_rules(scenario::PERFECT_MODEL_RULES, &dom).unwrap() {
            let text = render_rule(&dom, r.schema, &r.body);
            let back = parse_rules(&text, &dom).unwrap();
            assert_eq!(back, vec![r]);
        }
    }

    #[test]
    fn bodyless_rule() {
        let dom = scenario::domain();
        let r = parse_rules("move_n(A, B).", &dom).unwrap();
        assert!(r[0].body.is_empty());
        assert_eq!(r[0].body.var_count(), 2);
    }

    #[test]
    fn errors() {
        let dom = scenario::domain();
        assert!(matches!(
            parse_rules("fly(X, Y).", &dom),
            Err(RuleError::Unknown { .. })
        ));
        assert!(matches!(parse_rules("move_n(X).", &dom), Err(RuleError::Arity { .. })));
        assert!(matches!(
            parse_rules("move_n(X, Y) :- wall(Y, X).", &dom),
            Err(RuleError::Type { .. })
        ));
        assert!(matches!(
            parse_rules("move_n(X, Y) :- wall(x1, Y).", &dom),
            Err(RuleError::Syntax { .. })
        ));
        assert!(matches!(
            parse_rules("move_n(X, Y).\nmove_n(A, B).", &dom),
            Err(RuleError::Duplicate { line: 2, .. })
        ));
        assert!(matches!(
            parse_rules("move_n(X, Y) :- wall(X, Y)", &dom),
            Err(RuleError::Syntax { .. })
        ));
    }
}
