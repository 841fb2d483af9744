//! Labelled interactions and the line-delimited interaction log.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{DomainModel, GroundAction, Universe};
use crate::relational::{state_diff, GroundAtom, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

/// A `(prior, action, post)` triple. The action succeeded iff the state changed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interaction {
    pub prior: State,
    pub action: GroundAction,
    pub post: State,
    pub label: Label,
}

impl Interaction {
    pub fn new(prior: State, action: GroundAction, post: State) -> Self {
        let label = label_for(&prior, &post);
        Interaction {
            prior,
            action,
            post,
            label,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.label == Label::Positive
    }
}

pub fn label_for(prior: &State, post: &State) -> Label {
    if prior == post {
        Label::Negative
    } else {
        Label::Positive
    }
}

#[derive(Debug, Error)]
pub enum LogError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("record {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("record {line}: {msg}")]
    Invalid { line: usize, msg: String },
}

#[derive(Serialize, Deserialize)]
struct Record {
    step: usize,
    action: String,
    args: Vec<String>,
    label: Label,
    adds: Vec<Vec<String>>,
    dels: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prior: Option<Vec<Vec<String>>>,
}

fn atom_names(atom: &GroundAtom, dom: &DomainModel, uni: &Universe) -> Vec<String> {
    std::iter::once(dom.predicate(atom.pred).name.clone())
        .chain(atom.args.iter().map(|c| uni.name(*c).to_string()))
        .collect()
}

fn parse_atom(names: &[String], dom: &DomainModel, uni: &Universe, line: usize) -> Result<GroundAtom, LogError> {
    let bad = |msg: String| LogError::Invalid { line, msg };
    let (pred, args) = names.split_first().ok_or_else(|| bad("empty atom".into()))?;
    let p = dom
        .predicate_id(pred)
        .ok_or_else(|| bad(format!("unknown predicate `{pred}`")))?;
    if dom.predicate(p).arity() != args.len() {
        return Err(bad(format!("wrong arity for `{pred}`")));
    }
    let args = args
        .iter()
        .map(|a| uni.lookup(a).ok_or_else(|| bad(format!("unknown object `{a}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroundAtom::new(p, args))
}

/// Writes one record per interaction and returns the record count. The
/// first record carries the full prior state; later ones only the diff.
pub fn write_interaction_log(
    history: &[Interaction],
    dom: &DomainModel,
    uni: &Universe,
    mut sink: impl Write,
) -> Result<usize, LogError> {
    for (step, i) in history.iter().enumerate() {
        let diff = state_diff(&i.prior, &i.post);
        let rec = Record {
            step,
            action: dom.schema(i.action.schema).name.clone(),
            args: i.action.args.iter().map(|c| uni.name(*c).to_string()).collect(),
            label: i.label,
            adds: diff.adds.iter().map(|a| atom_names(a, dom, uni)).collect(),
            dels: diff.dels.iter().map(|a| atom_names(a, dom, uni)).collect(),
            prior: (step == 0).then(|| i.prior.iter().map(|a| atom_names(a, dom, uni)).collect()),
        };
        serde_json::to_writer(&mut sink, &rec).map_err(|source| LogError::Json { line: step + 1, source })?;
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(history.len())
}

/// Rebuilds a history by replaying each record's diff from the first prior.
pub fn read_interaction_log(
    source: impl BufRead,
    dom: &DomainModel,
    uni: &Universe,
) -> Result<Vec<Interaction>, LogError> {
    let mut out: Vec<Interaction> = Vec::new();
    let mut current: Option<State> = None;
    for (n, text) in source.lines().enumerate() {
        let line = n + 1;
        let text = text?;
        if text.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&text).map_err(|source| LogError::Json { line, source })?;
        let bad = |msg: String| LogError::Invalid { line, msg };
        if rec.step != out.len() {
            return Err(bad(format!("expected step {}, found {}", out.len(), rec.step)));
        }
        let prior = match (current.take(), rec.prior) {
            (_, Some(atoms)) => atoms
                .iter()
                .map(|a| parse_atom(a, dom, uni, line))
                .collect::<Result<State, _>>()?,
            (Some(s), None) => s,
            (None, None) => return Err(bad("first record lacks the prior state".into())),
        };
        let schema = dom
            .schema_id(&rec.action)
            .ok_or_else(|| bad(format!("unknown action `{}`", rec.action)))?;
        let args = rec
            .args
            .iter()
            .map(|a| uni.lookup(a).ok_or_else(|| bad(format!("unknown object `{a}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let adds = rec
            .adds
            .iter()
            .map(|a| parse_atom(a, dom, uni, line))
            .collect::<Result<Vec<_>, _>>()?;
        let dels = rec
            .dels
            .iter()
            .map(|a| parse_atom(a, dom, uni, line))
            .collect::<Result<Vec<_>, _>>()?;
        let mut post = prior.clone();
        post.apply(&dels, &adds);
        let i = Interaction::new(prior, GroundAction::new(schema, args), post);
        if i.label != rec.label {
            return Err(bad("label disagrees with the recorded diff".into()));
        }
        current = Some(i.post.clone());
        out.push(i);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario;

    #[test]
    fn labels() {
        let p = scenario::scenario1();
        let dom = scenario::domain();
        let a = GroundAction::new(
            dom.schema_id("move_n").unwrap(),
            [crate::relational::ConstId(0), crate::relational::ConstId(9)],
        );
        let same = Interaction::new(p.init.clone(), a.clone(), p.init.clone());
        assert_eq!(same.label, Label::Negative);
        let mut moved = p.init.clone();
        moved.remove(&p.init.iter().next().unwrap().clone());
        assert_eq!(Interaction::new(p.init.clone(), a, moved).label, Label::Positive);
    }

    #[test]
    fn empty_history_writes_nothing() {
        let dom = scenario::domain();
        let p = scenario::scenario1();
        let mut buf = Vec::new();
        assert_eq!(write_interaction_log(&[], &dom, &p.universe, &mut buf).unwrap(), 0);
        assert!(buf.is_empty());
        assert!(read_interaction_log(&buf[..], &dom, &p.universe).unwrap().is_empty());
    }

    #[test]
    fn reader_rejects_missing_prior() {
        let dom = scenario::domain();
        let p = scenario::scenario1();
        let text = r#"{"step":0,"action":"move_n","args":["x1","y2"],"label":"negative","adds":[],"dels":[]}"#;
        assert!(matches!(
            read_interaction_log(text.as_bytes(), &dom, &p.universe),
            Err(LogError::Invalid { line: 1, .. })
        ));
    }
}
