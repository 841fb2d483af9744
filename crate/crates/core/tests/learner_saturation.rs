mod common;

use llc_explorer::harness::{evaluate_accuracy, shipped_test_states, PerfectModel};
use llc_explorer::interaction::Interaction;
use llc_explorer::learner::{learn_model, LearnerConfig, ModeDeclaration};
use llc_explorer::scenario;

#[test]
fn exhaustive_movement_data_gives_perfect_scores() {
    let dom = scenario::domain();
    let p = scenario::scenario1();
    let moves = common::schema_ids(&dom, &common::MOVES);
    let data = common::saturation_set(&dom, &p, &moves);
    let modes = ModeDeclaration::from_domain(&dom);
    let mut learned = vec![None; dom.schemas().len()];
    for &s in &moves {
        let items: Vec<&Interaction> = data.iter().filter(|i| i.action.schema == s).collect();
        let m = learn_model(&dom, s, &items, &p.universe, &modes, &LearnerConfig::default());
        assert_eq!(m.residual_errors, 0, "{}", dom.schema(s).name);
        learned[s.index()] = m.precondition;
    }
    let report = evaluate_accuracy(&dom, &learned, &PerfectModel::shipped(&dom), &shipped_test_states(&dom)).unwrap();
    for name in common::MOVES {
        let row = report.row(name).unwrap();
        assert_eq!(row.score.f1, 100, "{name}: {:?}", row.score);
    }
}
