use std::collections::BTreeSet;

use mcl_core::decide::{decide_sat, decide_valid, hub_conjunction, Decider};
use mcl_core::formula::{parse, AgentUniverse, Coalition, Formula};
use mcl_core::model::{all_profiles, classify, oplus, GameModel, JointAction};
use mcl_core::normalform::{conjunction_of, normalize};
use mcl_core::oracle::{ladder_model, FormulaGen};
use mcl_core::semantics::{eval, eval_all};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ab() -> AgentUniverse {
    AgentUniverse::new(["a", "b"]).unwrap()
}

fn atoms() -> Vec<String> {
    vec!["p".into(), "q".into()]
}

fn model(seed: u64, max_states: usize) -> GameModel {
    ladder_model(&ab(), &atoms(), max_states, 2, seed, 0).unwrap()
}

fn formula(seed: u64, max_depth: usize) -> Formula {
    let gen = FormulaGen::new(ab(), &["p", "q"], max_depth, 6);
    gen.sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::top()),
        prop::sample::select(vec!["p", "q", "r_1"]).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (0u64..4, inner).prop_map(|(bits, f)| Formula::can(Coalition::from_bits(bits), f)),
        ]
    })
}

/// Every joint action of `c` over `m` actions.
fn joint_actions(n_agents: usize, m: usize, c: Coalition) -> Vec<JointAction> {
    let members: Vec<usize> = c.members().collect();
    all_profiles(members.len(), m)
        .into_iter()
        .map(|choice| {
            let mut slots = vec![None; n_agents];
            for (k, &agent) in members.iter().enumerate() {
                slots[agent] = Some(choice[k]);
            }
            JointAction::from_slots(slots)
        })
        .collect()
}

// Direct reading of the dual clause: every available σ_A has an outcome
// satisfying φ.
fn dual_direct(m: &GameModel, s: usize, c: Coalition, phi: &Formula) -> bool {
    let truth = eval_all(m, phi).unwrap();
    m.av(c, s)
        .unwrap()
        .iter()
        .all(|ja| m.out(c, s, ja).unwrap().iter().any(|&t| truth[t]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(f in arb_formula()) {
        let u = ab();
        let text = f.print(&u);
        prop_assert_eq!(parse(&text, &u).unwrap(), f);
    }

    #[test]
    fn depth_of_lowered_sugar(f in arb_formula()) {
        prop_assert_eq!(Formula::boxed(f.clone()).modal_depth(), f.modal_depth() + 1);
        prop_assert_eq!(Formula::diamond(f.clone()).modal_depth(), f.modal_depth() + 1);
        prop_assert_eq!(Formula::not(f.clone()).modal_depth(), f.modal_depth());
    }

    #[test]
    fn eval_routes_agree(ms in any::<u64>(), fs in any::<u64>()) {
        let m = model(ms, 4);
        let f = formula(fs, 2);
        let all = eval_all(&m, &f).unwrap();
        for (s, &expected) in all.iter().enumerate() {
            prop_assert_eq!(eval(&m, s, &f).unwrap(), expected);
        }
    }

    #[test]
    fn duality_and_box_diamond(ms in any::<u64>(), fs in any::<u64>(), bits in 0u64..4) {
        let m = model(ms, 4);
        let phi = formula(fs, 1);
        let c = Coalition::from_bits(bits);
        let truth = eval_all(&m, &phi).unwrap();
        for s in 0..m.n_states() {
            prop_assert_eq!(eval(&m, s, &Formula::dual(c, phi.clone())).unwrap(), dual_direct(&m, s, c, &phi));
            let succ = m.successors(s);
            prop_assert_eq!(eval(&m, s, &Formula::boxed(phi.clone())).unwrap(), succ.iter().all(|&t| truth[t]));
            prop_assert_eq!(eval(&m, s, &Formula::diamond(phi.clone())).unwrap(), succ.iter().any(|&t| truth[t]));
        }
    }

    #[test]
    fn coalition_monotonicity_and_liveness(ms in any::<u64>(), fs in any::<u64>(), a in 0u64..4, b in 0u64..4) {
        let m = model(ms, 4);
        let phi = formula(fs, 1);
        let small = Coalition::from_bits(a);
        let big = small.union(Coalition::from_bits(b));
        for s in 0..m.n_states() {
            if eval(&m, s, &Formula::can(small, phi.clone())).unwrap() {
                prop_assert!(eval(&m, s, &Formula::can(big, phi.clone())).unwrap());
            }
            prop_assert!(!eval(&m, s, &Formula::can(small, Formula::bot())).unwrap());
        }
    }

    #[test]
    fn padding_is_harmless(ms in any::<u64>(), fs in any::<u64>(), a in 0u64..4) {
        let m = model(ms, 4);
        let phi = formula(fs, 1);
        let grand_bot = Formula::can(Coalition::full(2), Formula::bot());
        let live = Formula::implies(Formula::can(Coalition::from_bits(a), phi), Formula::can(Coalition::EMPTY, Formula::top()));
        for s in 0..m.n_states() {
            prop_assert!(!eval(&m, s, &grand_bot).unwrap());
            prop_assert!(eval(&m, s, &live).unwrap());
        }
    }

    #[test]
    fn availability_identities(ms in any::<u64>()) {
        let m = model(ms, 4);
        let u = m.universe().clone();
        let n = u.len();
        let k = m.actions().len();
        let cgm = classify(&m).is_cgm;
        for s in 0..m.n_states() {
            for c in u.coalitions() {
                let av = m.av(c, s).unwrap();
                // available iff nonempty outcome
                let by_outcome: BTreeSet<JointAction> = joint_actions(n, k, c)
                    .into_iter()
                    .filter(|ja| !m.out(c, s, ja).unwrap().is_empty())
                    .collect();
                prop_assert_eq!(&av, &by_outcome);
                if cgm {
                    prop_assert!(!av.is_empty());
                    let family: Vec<_> = c
                        .members()
                        .map(|x| (Coalition::singleton(x), m.av(Coalition::singleton(x), s).unwrap()))
                        .collect();
                    prop_assert_eq!(&oplus(n, &family).unwrap(), &av);
                }
                for d in u.coalitions().filter(|d| d.is_disjoint(c)) {
                    let both = m.av(c.union(d), s).unwrap();
                    let av_d = m.av(d, s).unwrap();
                    for j in &both {
                        prop_assert!(av.contains(&j.restrict(c)));
                    }
                    for x in &av {
                        prop_assert!(av_d.iter().any(|y| both.contains(&x.merge(y).unwrap())));
                        if cgm {
                            for y in &av_d {
                                prop_assert!(both.contains(&x.merge(y).unwrap()));
                            }
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn normal_form_equivalent_and_depth_preserving(fs in any::<u64>(), ms in any::<u64>()) {
        let u = ab();
        let f = formula(fs, 2);
        prop_assume!(f.modal_depth() >= 1);
        let clauses = normalize(&f, &u).unwrap();
        prop_assert_eq!(clauses.iter().map(|c| c.modal_depth()).max(), Some(f.modal_depth()));
        prop_assert!(clauses.iter().all(|c| c.is_well_formed(&u)));
        let g = conjunction_of(&clauses);
        for k in 0..10 {
            let m = ladder_model(&u, &atoms(), 3, 2, ms, k).unwrap();
            prop_assert_eq!(eval_all(&m, &f).unwrap(), eval_all(&m, &g).unwrap());
        }
    }

    #[test]
    fn invalid_verdicts_are_certified(fs in any::<u64>()) {
        let u = ab();
        let f = formula(fs, 2);
        let v = decide_valid(&f, &u).unwrap();
        prop_assert_eq!(v.valid, v.countermodel.is_none());
        if let Some(pm) = &v.countermodel {
            prop_assert!(pm.model.validate().is_ok());
            prop_assert!(!eval(&pm.model, pm.state, &f).unwrap());
            if let Some(sf) = &v.failing_clause {
                if v.game_form.is_some() {
                    prop_assert!(eval(&pm.model, pm.state, &hub_conjunction(sf)).unwrap());
                }
            }
        }
    }

    #[test]
    fn hub_profiles_extending_sigma_are_unique(fs in any::<u64>()) {
        let u = ab();
        let f = formula(fs, 2);
        let v = decide_valid(&f, &u).unwrap();
        if let (Some(pm), Some(gf), Some(sf)) = (&v.countermodel, &v.game_form, &v.failing_clause) {
            let av: Vec<&Vec<usize>> = pm.model.av_ag(gf.hub).collect();
            for (i, (a, _)) in sf.ni.iter().enumerate() {
                if a.is_empty() {
                    continue;
                }
                let partial = JointAction::from_profile(&gf.sigma[i]).restrict(*a);
                let ext: Vec<_> = av.iter().filter(|p| partial.is_extended_by(p)).collect();
                prop_assert_eq!(ext.len(), 1);
                prop_assert_eq!(ext[0], &&gf.sigma[i]);
            }
        }
    }

    #[test]
    fn sat_witnesses_satisfy(fs in any::<u64>()) {
        let u = ab();
        let f = formula(fs, 2);
        let s = decide_sat(&f, &u).unwrap();
        if let Some(w) = &s.witness {
            prop_assert!(eval(&w.model, w.state, &f).unwrap());
        }
        let negation_valid = decide_valid(&Formula::not(f), &u).unwrap().valid;
        prop_assert_eq!(s.satisfiable, !negation_valid);
    }

    #[test]
    fn valid_formulas_hold_on_samples(fs in any::<u64>(), ms in any::<u64>()) {
        let u = ab();
        let f = formula(fs, 2);
        if Decider::new(&u).valid(&f).unwrap().valid {
            for k in 0..20 {
                let m = ladder_model(&u, &atoms(), 3, 2, ms, k).unwrap();
                prop_assert!(eval_all(&m, &f).unwrap().iter().all(|&b| b));
            }
        }
    }
}
