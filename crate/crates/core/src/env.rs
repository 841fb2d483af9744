//! Deterministic grid-world simulator with 8-direction movement and doors.
//!
//! `north(a, b)` means row `a` lies immediately north of row `b`;
//! `west(a, b)` means column `a` lies immediately west of column `b`.
//! Failed actions leave the state unchanged.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::domain::{DomainModel, GroundAction, ProblemInstance, SchemaId, Universe};
use crate::relational::{ConstId, GroundAtom, PredId, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::N,
        Direction::NE,
        Direction::E,
        Direction::SE,
        Direction::S,
        Direction::SW,
        Direction::W,
        Direction::NW,
    ];

    pub fn from_suffix(s: &str) -> Option<Direction> {
        Some(match s {
            "n" => Direction::N,
            "ne" => Direction::NE,
            "e" => Direction::E,
            "se" => Direction::SE,
            "s" => Direction::S,
            "sw" => Direction::SW,
            "w" => Direction::W,
            "nw" => Direction::NW,
            _ => return None,
        })
    }

    // (north +1 / south -1, east +1 / west -1)
    fn offsets(self) -> (i8, i8) {
        match self {
            Direction::N => (1, 0),
            Direction::NE => (1, 1),
            Direction::E => (0, 1),
            Direction::SE => (-1, 1),
            Direction::S => (-1, 0),
            Direction::SW => (-1, -1),
            Direction::W => (0, -1),
            Direction::NW => (1, -1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActionKind {
    Move,
    OpenDoor,
    CloseDoor,
}

/// Splits a schema name like `open_door_ne` into kind and direction.
pub fn parse_action_name(name: &str) -> Option<(ActionKind, Direction)> {
    let (kind, dir) = if let Some(d) = name.strip_prefix("move_") {
        (ActionKind::Move, d)
    } else if let Some(d) = name.strip_prefix("open_door_") {
        (ActionKind::OpenDoor, d)
    } else {
        (ActionKind::CloseDoor, name.strip_prefix("close_door_")?)
    };
    Some((kind, Direction::from_suffix(dir)?))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnvError {
    #[error("domain lacks predicate `{0}`")]
    MissingPredicate(&'static str),
    #[error("expected exactly one agentat fact, found {0}")]
    AgentCount(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridPredicates {
    pub agentat: PredId,
    pub wall: PredId,
    pub cdoor: PredId,
    pub odoor: PredId,
    pub north: PredId,
    pub west: PredId,
}

impl GridPredicates {
    pub fn from_domain(dom: &DomainModel) -> Result<Self, EnvError> {
        let get = |n: &'static str| dom.predicate_id(n).ok_or(EnvError::MissingPredicate(n));
        Ok(GridPredicates {
            agentat: get("agentat")?,
            wall: get("wall")?,
            cdoor: get("cdoor")?,
            odoor: get("odoor")?,
            north: get("north")?,
            west: get("west")?,
        })
    }
}

pub type Tile = (ConstId, ConstId);

/// Adjacency read from the `north`/`west` facts of a state.
#[derive(Clone, Debug)]
pub struct Grid {
    pub preds: GridPredicates,
    north_of: HashMap<ConstId, ConstId>,
    south_of: HashMap<ConstId, ConstId>,
    west_of: HashMap<ConstId, ConstId>,
    east_of: HashMap<ConstId, ConstId>,
}

impl Grid {
    pub fn new(dom: &DomainModel, state: &State) -> Result<Self, EnvError> {
        let preds = GridPredicates::from_domain(dom)?;
        let mut g = Grid {
            preds,
            north_of: HashMap::new(),
            south_of: HashMap::new(),
            west_of: HashMap::new(),
            east_of: HashMap::new(),
        };
        for a in state.with_predicate(preds.north) {
            g.north_of.insert(a.args[1], a.args[0]);
            g.south_of.insert(a.args[0], a.args[1]);
        }
        for a in state.with_predicate(preds.west) {
            g.west_of.insert(a.args[1], a.args[0]);
            g.east_of.insert(a.args[0], a.args[1]);
        }
        Ok(g)
    }

    pub fn agent(&self, state: &State) -> Option<Tile> {
        let mut it = state.with_predicate(self.preds.agentat);
        let a = it.next()?;
        it.next().is_none().then(|| (a.args[0], a.args[1]))
    }

    pub fn neighbor(&self, (x, y): Tile, dir: Direction) -> Option<Tile> {
        let (dy, dx) = dir.offsets();
        let y = match dy {
            1 => *self.north_of.get(&y)?,
            -1 => *self.south_of.get(&y)?,
            _ => y,
        };
        let x = match dx {
            1 => *self.east_of.get(&x)?,
            -1 => *self.west_of.get(&x)?,
            _ => x,
        };
        Some((x, y))
    }

    /// The tile next to the agent in `dir`, if the agent and that tile exist.
    pub fn destination(&self, state: &State, dir: Direction) -> Option<Tile> {
        self.neighbor(self.agent(state)?, dir)
    }

    pub fn atom(&self, pred: PredId, (x, y): Tile) -> GroundAtom {
        GroundAtom::new(pred, [x, y])
    }

    /// Ground-truth transition. Returns the successor, equal to `state` on failure.
    pub fn apply(&self, state: &State, kind: ActionKind, dir: Direction, target: Tile) -> State {
        let Some(agent) = self.agent(state) else {
            return state.clone();
        };
        if self.neighbor(agent, dir) != Some(target) {
            return state.clone();
        }
        let p = &self.preds;
        let has = |pred| state.contains(&self.atom(pred, target));
        let mut next = state.clone();
        match kind {
            ActionKind::Move if !has(p.wall) && !has(p.cdoor) => {
                next.apply([&self.atom(p.agentat, agent)], [&self.atom(p.agentat, target)]);
            }
            ActionKind::OpenDoor if has(p.cdoor) => {
                next.apply([&self.atom(p.cdoor, target)], [&self.atom(p.odoor, target)]);
            }
            ActionKind::CloseDoor if has(p.odoor) => {
                next.apply([&self.atom(p.odoor, target)], [&self.atom(p.cdoor, target)]);
            }
            _ => {}
        }
        next
    }

    fn ordered(first: Option<ConstId>, next: &HashMap<ConstId, ConstId>) -> Vec<ConstId> {
        let mut out = Vec::new();
        let mut cur = first;
        while let Some(c) = cur {
            if out.contains(&c) {
                break;
            }
            out.push(c);
            cur = next.get(&c).copied();
        }
        out
    }

    /// Columns west to east and rows north to south, following adjacency.
    pub fn layout(&self, uni: &Universe, dom: &DomainModel) -> (Vec<ConstId>, Vec<ConstId>) {
        let pick = |ty: &str, back: &HashMap<ConstId, ConstId>, fwd: &HashMap<ConstId, ConstId>| {
            let consts = dom.type_id(ty).map(|t| uni.of_type(t)).unwrap_or(&[]);
            let start = consts
                .iter()
                .copied()
                .find(|c| !back.contains_key(c) && fwd.contains_key(c))
                .or_else(|| consts.first().copied());
            Self::ordered(start, fwd)
        };
        (
            pick("xcoord", &self.west_of, &self.east_of),
            pick("ycoord", &self.north_of, &self.south_of),
        )
    }
}

/// The simulator: current state, schema decoding and visited tiles.
#[derive(Clone, Debug)]
pub struct WorldState {
    state: State,
    grid: Grid,
    kinds: Vec<Option<(ActionKind, Direction)>>,
    visited: BTreeSet<Tile>,
}

impl WorldState {
    pub fn new(dom: &DomainModel, problem: &ProblemInstance) -> Result<Self, EnvError> {
        let grid = Grid::new(dom, &problem.init)?;
        let agents = problem.init.with_predicate(grid.preds.agentat).count();
        if agents != 1 {
            return Err(EnvError::AgentCount(agents));
        }
        let agent = grid.agent(&problem.init).expect("one agent");
        Ok(WorldState {
            state: problem.init.clone(),
            kinds: dom.schemas().iter().map(|s| parse_action_name(&s.name)).collect(),
            grid,
            visited: BTreeSet::from([agent]),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn action_kind(&self, schema: SchemaId) -> Option<(ActionKind, Direction)> {
        self.kinds.get(schema.index()).copied().flatten()
    }

    /// Executes `action`; returns whether the state changed.
    pub fn step(&mut self, action: &GroundAction) -> bool {
        let Some((kind, dir)) = self.action_kind(action.schema) else {
            return false;
        };
        let [x, y] = action.args[..] else {
            return false;
        };
        let next = self.grid.apply(&self.state, kind, dir, (x, y));
        if next == self.state {
            return false;
        }
        self.state = next;
        if let Some(agent) = self.grid.agent(&self.state) {
            self.visited.insert(agent);
        }
        true
    }

    pub fn observe(&self) -> &State {
        &self.state
    }

    pub fn agent(&self) -> Tile {
        self.grid.agent(&self.state).expect("one agent")
    }

    /// Number of distinct tiles the agent has occupied.
    pub fn exploration_progress(&self) -> usize {
        self.visited.len()
    }

    pub fn visited(&self) -> &BTreeSet<Tile> {
        &self.visited
    }

    /// ASCII map, north at the top: `W` wall, `A` agent, `CD`/`OD` doors.
    pub fn render(&self, dom: &DomainModel, uni: &Universe) -> String {
        let (cols, rows) = self.grid.layout(uni, dom);
        let p = &self.grid.preds;
        let mut s = String::new();
        for y in &rows {
            for x in &cols {
                let t = (*x, *y);
                let cell = if self.state.contains(&self.grid.atom(p.agentat, t)) {
                    "A"
                } else if self.state.contains(&self.grid.atom(p.wall, t)) {
                    "W"
                } else if self.state.contains(&self.grid.atom(p.cdoor, t)) {
                    "CD"
                } else if self.state.contains(&self.grid.atom(p.odoor, t)) {
                    "OD"
                } else {
                    "."
                };
                let _ = write!(s, "{cell:<3}");
            }
            s.truncate(s.trim_end().len());
            s.push('\n');
        }
        s
    }
}
