//! Shipped domain, scenarios, perfect-model rules and test states.

use crate::domain::{DomainModel, ProblemInstance};
use crate::pddl::{parse_domain, parse_problem};

pub const DOMAIN_PDDL: &str = include_str!("../data/dcss-domain.pddl");
pub const SCENARIO1_PDDL: &str = include_str!("../data/scenario1.pddl");
pub const SCENARIO2_PDDL: &str = include_str!("../data/scenario2.pddl");
pub const PERFECT_MODEL_RULES: &str = include_str!("../data/perfect-model.lp");

macro_rules! test_state {
    ($name:literal) => {
        ($name, include_str!(concat!("../data/test-states/", $name, ".pddl")))
    };
}

/// The authored evaluation states as `(file stem, PDDL text)`.
pub const TEST_STATES: [(&str, &str); 16] = [
    test_state!("closed-door-1-n"),
    test_state!("closed-door-2-ne"),
    test_state!("closed-door-3-e"),
    test_state!("closed-door-4-se"),
    test_state!("closed-door-5-s"),
    test_state!("closed-door-6-sw"),
    test_state!("closed-door-7-w"),
    test_state!("closed-door-8-nw"),
    test_state!("open-door-1-n"),
    test_state!("open-door-2-ne"),
    test_state!("open-door-3-e"),
    test_state!("open-door-4-se"),
    test_state!("open-door-5-s"),
    test_state!("open-door-6-sw"),
    test_state!("open-door-7-w"),
    test_state!("open-door-8-nw"),
];

/// The grid-world domain with 24 parameter-only action schemas.
pub fn domain() -> DomainModel {
    parse_domain(DOMAIN_PDDL).expect("shipped domain parses")
}

pub fn scenario1() -> ProblemInstance {
    parse_problem(SCENARIO1_PDDL, &domain()).expect("shipped scenario parses")
}

pub fn scenario2() -> ProblemInstance {
    parse_problem(SCENARIO2_PDDL, &domain()).expect("shipped scenario parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_files_parse() {
        let dom = domain();
        assert_eq!(scenario1().universe.len(), 14);
        assert_eq!(scenario2().universe.len(), 10);
        for (name, text) in TEST_STATES {
            parse_problem(text, &dom).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
