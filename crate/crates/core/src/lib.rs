//! Action-model learning by an exploring agent in a grid world.
//!
//! An agent explores by counting how often each action schema was taken
//! while each lifted linked clause (LLC) was active, learns precondition
//! clauses and effects from its own interactions, and plans towards
//! contexts it has rarely seen.

pub mod controller;
pub mod domain;
pub mod env;
pub mod harness;
pub mod interaction;
pub mod learner;
pub mod llc;
pub mod pddl;
pub mod planner;
pub mod relational;
pub mod rules;
pub mod scenario;
