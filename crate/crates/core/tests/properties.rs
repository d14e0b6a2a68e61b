use aggsem::eval2::{sat2, tp};
use aggsem::fixpoints::{kripke_kleene, stable_check, well_founded, Engine};
use aggsem::interp::{all_consistent_pairs, all_interpretations, enumerate_interval};
use aggsem::oracle::generate::{self, GeneratorConfig};
use aggsem::oracle::gz_stable_via_reduct;
use aggsem::ternary::{sat3, truth3};
use aggsem::{BodyElement, Interpretation, Pair, Program, SemanticsId, TruthValue};
use proptest::prelude::*;

fn program(seed: u64) -> Program {
    generate::random_program(&mut generate::rng(seed), &GeneratorConfig::default())
}

fn plain_program(seed: u64) -> Program {
    generate::random_program(&mut generate::rng(seed), &GeneratorConfig::aggregate_free())
}

fn elements(p: &Program) -> Vec<BodyElement> {
    let mut out: Vec<BodyElement> = Vec::new();
    for r in &p.rules {
        for e in &r.body {
            if !out.contains(e) {
                out.push(e.clone());
            }
        }
    }
    out
}

const WITH_TRUTH: [SemanticsId; 3] = [SemanticsId::Triv, SemanticsId::Ult, SemanticsId::Bnd];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_programs_parse_back(seed in any::<u64>()) {
        let p = program(seed);
        let again: Program = p.to_string().parse().unwrap();
        prop_assert_eq!(&again, &p);
        prop_assert_eq!(again.to_string(), p.to_string());
    }

    #[test]
    fn combining_rules_keeps_the_immediate_consequences(seed in any::<u64>()) {
        let p = program(seed);
        let combined = p.combine_rules_per_head();
        for i in all_interpretations(p.width()) {
            let mut via_bodies = Interpretation::empty(p.width());
            for h in &combined.heads {
                let mut fired = false;
                for b in &h.bodies {
                    fired |= sat2(b, &i).unwrap();
                }
                if fired {
                    via_bodies.insert(h.head);
                }
            }
            prop_assert_eq!(via_bodies, tp(&p, &i).unwrap());
        }
    }

    #[test]
    fn interval_has_two_to_the_gap_members(width in 1usize..=10, a in any::<u64>(), b in any::<u64>()) {
        let y = Interpretation::from_bits(width, a);
        let x = Interpretation::from_bits(width, a & b);
        let members: Vec<_> = enumerate_interval(&x, &y, None).unwrap().collect();
        prop_assert_eq!(members.len(), 1usize << (y.len() - x.len()));
        for z in &members {
            prop_assert!(x.is_subset(z) && z.is_subset(&y));
        }
        let mut bits: Vec<u64> = members.iter().map(|z| z.bits()).collect();
        bits.dedup();
        prop_assert_eq!(bits.len(), members.len());
    }

    #[test]
    fn satisfaction_is_truth(seed in any::<u64>()) {
        let p = program(seed);
        for id in WITH_TRUTH {
            let rel = id.relation();
            for e in elements(&p) {
                for pair in all_consistent_pairs(p.width()) {
                    let t = truth3(rel, &e, &pair).unwrap();
                    prop_assert_eq!(sat3(rel, &e, &pair).unwrap(), t == TruthValue::True, "{} on {:?}", id, pair);
                }
            }
        }
    }

    #[test]
    fn exact_pairs_agree_with_two_valued_satisfaction(seed in any::<u64>()) {
        let p = program(seed);
        let plain = plain_program(seed);
        for (prog, ids) in [
            (&p, &[SemanticsId::Triv, SemanticsId::Gz, SemanticsId::Ult, SemanticsId::Lpst,
                   SemanticsId::Bnd, SemanticsId::Mr, SemanticsId::Flp][..]),
            (&plain, &[SemanticsId::Gl][..]),
        ] {
            for i in all_interpretations(prog.width()) {
                let exact = Pair::exact(i);
                for e in elements(prog) {
                    let two = sat2(std::slice::from_ref(&e), &i).unwrap();
                    for id in ids {
                        prop_assert_eq!(sat3(id.relation(), &e, &exact).unwrap(), two, "{}", id);
                    }
                }
                for h in &prog.combine_rules_per_head().heads {
                    let two = h.bodies.iter().any(|b| sat2(b, &i).unwrap());
                    let ultimate = SemanticsId::Ultimate.relation();
                    prop_assert_eq!(ultimate.satisfies_any(&h.bodies, &exact).unwrap(), two);
                }
            }
        }
    }

    #[test]
    fn mr_is_monotone_in_the_lower_bound(seed in any::<u64>()) {
        let p = program(seed);
        let mr = SemanticsId::Mr.relation();
        for pair in all_consistent_pairs(p.width()) {
            for e in elements(&p) {
                if !sat3(mr, &e, &pair).unwrap() {
                    continue;
                }
                for lower in enumerate_interval(&pair.lower, &pair.upper, None).unwrap() {
                    let bigger = Pair::consistent(lower, pair.upper).unwrap();
                    prop_assert!(sat3(mr, &e, &bigger).unwrap());
                }
            }
        }
    }

    #[test]
    fn least_fixpoints_take_few_steps(seed in any::<u64>()) {
        let p = program(seed);
        for id in [SemanticsId::Triv, SemanticsId::Gz, SemanticsId::Ult, SemanticsId::Bnd, SemanticsId::Mr] {
            let engine = Engine::new(id.relation(), &p).unwrap();
            for y in all_interpretations(p.width()) {
                let (_, steps) = engine.lfp_lower_counted(&y).unwrap();
                prop_assert!(steps <= p.width() + 1, "{} took {} steps", id, steps);
            }
        }
    }

    #[test]
    fn kripke_kleene_is_below_well_founded(seed in any::<u64>()) {
        let p = program(seed);
        for id in WITH_TRUTH {
            let kk = kripke_kleene(id.relation(), &p).unwrap();
            let wf = well_founded(id.relation(), &p).unwrap().pair;
            prop_assert!(kk.precision_leq(&wf), "{}", id);
            prop_assert!(wf.is_consistent());
        }
    }

    #[test]
    fn gz_stability_agrees_with_the_reduct(seed in any::<u64>()) {
        let p = program(seed);
        for y in all_interpretations(p.width()) {
            prop_assert_eq!(
                stable_check(SemanticsId::Gz.relation(), &p, &y).unwrap(),
                gz_stable_via_reduct(&p, &y).unwrap(),
                "{} at {}", p, p.universe.format(&y)
            );
        }
    }
}

#[test]
fn precision_order_is_a_partial_order_on_pairs() {
    let pairs: Vec<Pair> = all_consistent_pairs(3).collect();
    for a in &pairs {
        assert!(a.precision_leq(a));
        for b in &pairs {
            if a.precision_leq(b) && b.precision_leq(a) {
                assert_eq!(a, b);
            }
            for c in &pairs {
                if a.precision_leq(b) && b.precision_leq(c) {
                    assert!(a.precision_leq(c));
                }
            }
        }
    }
    assert_eq!(pairs.len(), 27);
}
