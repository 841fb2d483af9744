mod common;

use std::collections::BTreeSet;

use llc_explorer::relational::{is_satisfied, satisfy, ConstId};
use llc_explorer::scenario;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn satisfy_agrees_with_exhaustive_grounding() {
    let dom = scenario::domain();
    let uni = common::universe5(&dom);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nonempty = 0;
    for n in 0..500 {
        let (clause, state) = common::random_instance(&dom, &uni, &mut rng);
        let got: Vec<Vec<ConstId>> = satisfy(&clause, &state, &uni)
            .map(|b| b.values().iter().map(|c| c.expect("total binding")).collect())
            .collect();
        let set: BTreeSet<Vec<ConstId>> = got.iter().cloned().collect();
        assert_eq!(set.len(), got.len(), "instance {n}: duplicate bindings");
        let want = common::brute_force_bindings(&clause, &state, &uni);
        assert_eq!(set, want, "instance {n}: {}", clause.display_with(&dom, &uni));
        assert_eq!(is_satisfied(&clause, &state, &uni), !want.is_empty());
        nonempty += usize::from(!want.is_empty());
    }
    // the generator produces both outcomes
    assert!(nonempty > 50 && nonempty < 450, "{nonempty}");
}

#[test]
fn agent_on_open_floor_has_one_binding() {
    let dom = scenario::domain();
    let p = scenario::scenario1();
    let c = llc_explorer::rules::parse_rules("move_n(X, Y) :- agentat(X, Y), not wall(X, Y).", &dom).unwrap();
    let b = common::brute_force_bindings(&c[0].body, &p.init, &p.universe);
    assert_eq!(b.len(), 1);
    assert_eq!(satisfy(&c[0].body, &p.init, &p.universe).count(), 1);
}
