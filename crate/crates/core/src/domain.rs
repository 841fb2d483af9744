//! Domain vocabulary: types, predicate signatures, action schemas and the
//! typed constant universe of a problem.

use std::collections::HashMap;

use crate::relational::{ConstId, PredId, State, TypeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateSignature {
    pub name: String,
    pub params: Vec<TypeId>,
}

impl PredicateSignature {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// An action name with typed parameters. Agents receive schemas without
/// preconditions or effects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<TypeId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemaId(pub u16);

impl SchemaId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Types, predicates and action schemas of a planning domain.
///
/// Predicates are indexed in name order so that `PredId` order coincides
/// with the lexicographic order used by canonical clauses. Types and
/// schemas keep file order.
#[derive(Clone, Debug)]
pub struct DomainModel {
    pub name: String,
    types: Vec<String>,
    predicates: Vec<PredicateSignature>,
    schemas: Vec<ActionSchema>,
    type_index: HashMap<String, TypeId>,
    pred_index: HashMap<String, PredId>,
    schema_index: HashMap<String, SchemaId>,
}

impl DomainModel {
    /// Builds a domain. Callers are responsible for rejecting duplicate
    /// names; later duplicates shadow earlier ones in the lookup tables.
    pub fn new(
        name: impl Into<String>,
        types: Vec<String>,
        mut predicates: Vec<PredicateSignature>,
        schemas: Vec<ActionSchema>,
    ) -> Self {
        predicates.sort_by(|a, b| a.name.cmp(&b.name));
        let type_index = types
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), TypeId(i as u16)))
            .collect();
        let pred_index = predicates
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), PredId(i as u16)))
            .collect();
        let schema_index = schemas
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.clone(), SchemaId(i as u16)))
            .collect();
        DomainModel {
            name: name.into(),
            types,
            predicates,
            schemas,
            type_index,
            pred_index,
            schema_index,
        }
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn type_name(&self, ty: TypeId) -> &str {
        &self.types[ty.0 as usize]
    }

    pub fn type_id(&self, name: &str) -> Option<TypeId> {
        self.type_index.get(name).copied()
    }

    pub fn predicates(&self) -> &[PredicateSignature] {
        &self.predicates
    }

    pub fn predicate(&self, id: PredId) -> &PredicateSignature {
        &self.predicates[id.0 as usize]
    }

    pub fn predicate_id(&self, name: &str) -> Option<PredId> {
        self.pred_index.get(name).copied()
    }

    pub fn predicate_ids(&self) -> impl Iterator<Item = PredId> {
        (0..self.predicates.len()).map(|i| PredId(i as u16))
    }

    pub fn schemas(&self) -> &[ActionSchema] {
        &self.schemas
    }

    pub fn schema(&self, id: SchemaId) -> &ActionSchema {
        &self.schemas[id.index()]
    }

    pub fn schema_id(&self, name: &str) -> Option<SchemaId> {
        self.schema_index.get(name).copied()
    }

    pub fn schema_ids(&self) -> impl Iterator<Item = SchemaId> {
        (0..self.schemas.len()).map(|i| SchemaId(i as u16))
    }

    /// Maximum predicate arity (`M` in the LLC bound).
    pub fn max_arity(&self) -> usize {
        self.predicates.iter().map(|p| p.arity()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constant {
    pub name: String,
    pub ty: TypeId,
}

/// The typed constants of a problem, in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Universe {
    constants: Vec<Constant>,
    by_type: Vec<Vec<ConstId>>,
    index: HashMap<String, ConstId>,
}

impl Universe {
    pub fn new(type_count: usize) -> Self {
        Universe {
            constants: Vec::new(),
            by_type: vec![Vec::new(); type_count],
            index: HashMap::new(),
        }
    }

    /// Adds a constant, returning `None` if the name is already taken.
    pub fn add(&mut self, name: impl Into<String>, ty: TypeId) -> Option<ConstId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return None;
        }
        let id = ConstId(self.constants.len() as u16);
        if self.by_type.len() <= ty.0 as usize {
            self.by_type.resize(ty.0 as usize + 1, Vec::new());
        }
        self.by_type[ty.0 as usize].push(id);
        self.index.insert(name.clone(), id);
        self.constants.push(Constant { name, ty });
        Some(id)
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }

    pub fn constants(&self) -> &[Constant] {
        &self.constants
    }

    pub fn constant(&self, id: ConstId) -> &Constant {
        &self.constants[id.0 as usize]
    }

    pub fn name(&self, id: ConstId) -> &str {
        &self.constants[id.0 as usize].name
    }

    pub fn lookup(&self, name: &str) -> Option<ConstId> {
        self.index.get(name).copied()
    }

    /// Constants of a type in declaration order.
    pub fn of_type(&self, ty: TypeId) -> &[ConstId] {
        self.by_type.get(ty.0 as usize).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// A parsed problem: its objects and initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    pub name: String,
    pub universe: Universe,
    pub init: State,
}

/// A schema with its parameters fixed to constants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAction {
    pub schema: SchemaId,
    pub args: crate::relational::Args<ConstId>,
}

impl GroundAction {
    pub fn new(schema: SchemaId, args: impl IntoIterator<Item = ConstId>) -> Self {
        GroundAction {
            schema,
            args: args.into_iter().collect(),
        }
    }

    pub fn display<'a>(&'a self, dom: &'a DomainModel, uni: &'a Universe) -> impl std::fmt::Display + 'a {
        GroundActionDisplay { action: self, dom, uni }
    }
}

struct GroundActionDisplay<'a> {
    action: &'a GroundAction,
    dom: &'a DomainModel,
    uni: &'a Universe,
}

impl std::fmt::Display for GroundActionDisplay<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(", self.dom.schema(self.action.schema).name)?;
        for (i, c) in self.action.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(self.uni.name(*c))?;
        }
        f.write_str(")")
    }
}
