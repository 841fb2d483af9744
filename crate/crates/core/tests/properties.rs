mod common;

use llc_explorer::controller::{self, AgentMode, Grounding, RunConfig};
use llc_explorer::domain::ProblemInstance;
use llc_explorer::harness::Score;
use llc_explorer::interaction::{read_interaction_log, write_interaction_log};
use llc_explorer::llc::generate_llcs;
use llc_explorer::pddl::{parse_problem, write_problem};
use llc_explorer::relational::{canonicalize, Clause, Literal, Term, Var};
use llc_explorer::scenario;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rename(c: &Clause, rng: &mut ChaCha8Rng) -> Clause {
    let n = c.var_count();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut types = vec![c.var_types()[0]; n];
    for (old, &new) in perm.iter().enumerate() {
        types[new] = c.var_types()[old];
    }
    let mut lits: Vec<Literal> = c
        .literals()
        .iter()
        .map(|l| {
            let args: Vec<Term> = l
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => Term::Var(Var(perm[v.index()] as u16)),
                    Term::Const(k) => Term::Const(*k),
                })
                .collect();
            if l.negated {
                Literal::negative(l.pred, args)
            } else {
                Literal::positive(l.pred, args)
            }
        })
        .collect();
    lits.shuffle(rng);
    Clause::new(lits, types)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_renaming_and_order(seed in any::<u64>()) {
        let dom = scenario::domain();
        let uni = common::universe5(&dom);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, _) = common::random_instance(&dom, &uni, &mut rng);
        let r = rename(&c, &mut rng);
        prop_assert_eq!(canonicalize(&c), canonicalize(&r));
        prop_assert_eq!(canonicalize(&canonicalize(&c)), canonicalize(&c));
    }

    #[test]
    fn problem_text_round_trips(seed in any::<u64>()) {
        let dom = scenario::domain();
        let uni = common::universe5(&dom);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, init) = common::random_instance(&dom, &uni, &mut rng);
        let p = ProblemInstance { name: "random".into(), universe: uni, init };
        let back = parse_problem(&write_problem(&p, &dom), &dom).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn interaction_log_round_trips(seed in 0u64..1000, mode in 0usize..2) {
        let dom = scenario::domain();
        let p = scenario::scenario1();
        let llcs = generate_llcs(&dom, 1);
        let mut cfg = RunConfig::new(AgentMode::ALL[mode], 100, seed);
        cfg.grounding = Grounding::Adjacent;
        let out = controller::run(&dom, &p, &llcs, cfg).unwrap();
        let mut buf = Vec::new();
        prop_assert_eq!(write_interaction_log(&out.history, &dom, &p.universe, &mut buf).unwrap(), 100);
        let back = read_interaction_log(buf.as_slice(), &dom, &p.universe).unwrap();
        prop_assert_eq!(back, out.history);
    }

    #[test]
    fn scores_are_bounded_percentages(tp in 0usize..500, fp in 0usize..500, fn_ in 0usize..500) {
        let s = Score::from_counts(tp, fp, fn_);
        prop_assert!(s.precision <= 100 && s.recall <= 100 && s.f1 <= 100);
        if tp == 0 {
            prop_assert_eq!(s.f1, 0);
        } else {
            // a harmonic mean lies between its terms, up to rounding
            let lo = s.precision.min(s.recall);
            let hi = s.precision.max(s.recall);
            prop_assert!(s.f1 + 1 >= lo && s.f1 <= hi + 1, "{:?}", s);
        }
        if fp == 0 && tp > 0 {
            prop_assert_eq!(s.precision, 100);
        }
    }

    #[test]
    fn exploration_progress_grows_by_at_most_one(seed in 0u64..1000, mode in 0usize..2) {
        let dom = scenario::domain();
        let p = scenario::scenario1();
        let llcs = generate_llcs(&dom, 1);
        let mut cfg = RunConfig::new(AgentMode::ALL[mode], 150, seed);
        cfg.grounding = Grounding::Adjacent;
        let out = controller::run(&dom, &p, &llcs, cfg).unwrap();
        prop_assert_eq!(out.progress.len(), 150);
        let mut prev = 1;
        for &t in &out.progress {
            prop_assert!(t == prev || t == prev + 1);
            prop_assert!(t <= 33);
            prev = t;
        }
    }
}
