mod common;

use llc_explorer::env::Grid;
use llc_explorer::harness::PerfectModel;
use llc_explorer::learner::head_binding;
use llc_explorer::relational::satisfy_from;
use llc_explorer::scenario;

#[test]
fn simulator_agrees_with_perfect_model_everywhere() {
    let dom = scenario::domain();
    let p = scenario::scenario1();
    let perfect = PerfectModel::shipped(&dom);
    let all: Vec<_> = dom.schema_ids().collect();
    let states = common::reachable(&dom, &p.universe, &p.init, &all);
    // every non-wall tile, the door tile included once it is open
    let grid = Grid::new(&dom, &p.init).unwrap();
    let tiles: std::collections::BTreeSet<_> = states.keys().map(|s| grid.agent(s).unwrap()).collect();
    assert_eq!(tiles.len(), 33);
    let acts = common::all_groundings(&dom, &p.universe, &all);
    let mut successes = 0;
    for s in states.keys() {
        for a in &acts {
            let changed = common::env_step(&dom, &grid, s, a) != *s;
            let pre = perfect.precondition(a.schema).unwrap();
            let holds = satisfy_from(pre, s, &p.universe, head_binding(&a.args))
                .next()
                .is_some();
            assert_eq!(changed, holds, "{}", a.display(&dom, &p.universe));
            successes += usize::from(changed);
        }
    }
    assert!(successes > 0);
}

#[test]
fn test_states_follow_the_authoring_rules() {
    let dom = scenario::domain();
    let perfect = PerfectModel::shipped(&dom);
    let tests = llc_explorer::harness::shipped_test_states(&dom);
    assert_eq!(tests.len(), 16);
    let closed = tests
        .iter()
        .filter(|t| t.tag == llc_explorer::harness::DoorTag::ClosedDoor)
        .count();
    assert_eq!(closed, 8);
    for t in &tests {
        let grid = Grid::new(&dom, &t.problem.init).unwrap();
        let mut ok = Vec::new();
        let mut moves_ok = 0;
        let mut moves_fail = 0;
        for s in dom.schema_ids() {
            let name = &dom.schema(s).name;
            let (_, dir) = llc_explorer::env::parse_action_name(name).unwrap();
            let Some((x, y)) = grid.destination(&t.problem.init, dir) else {
                continue;
            };
            let pre = perfect.precondition(s).unwrap();
            if satisfy_from(pre, &t.problem.init, &t.problem.universe, head_binding(&[x, y]))
                .next()
                .is_some()
            {
                ok.push(name.clone());
                moves_ok += usize::from(name.starts_with("move_"));
            } else {
                moves_fail += usize::from(name.starts_with("move_"));
            }
        }
        assert!(moves_ok > 0 && moves_fail > 0, "{}: {ok:?}", t.name);
        if t.name == "open-door-4-se" {
            assert_eq!(ok, ["move_s", "move_e", "move_se", "close_door_se"]);
        }
    }
}
