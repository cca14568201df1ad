mod common;

use common::*;
use entail_core::rational::rat;
use entail_core::{decide, decide_lp, prune, EntailmentQuery, Error, Method, Regime};

#[test]
fn characterizations_agree_with_the_lp() {
    let mut stats = AgreementStats::default();
    for seed in 0..500u64 {
        let g = gamma(REGIME_GAMMAS[(seed % 6) as usize]);
        let q = random_query(seed, 6, 3, g);
        if let Err(e) = cross_check(&q, &mut stats) {
            panic!(
                "seed {seed}: {e}\n{} ⊨ {:?} at {}",
                q.premises(),
                q.conclusion(),
                q.gamma()
            );
        }
    }
    assert!(stats.holds >= 50, "{stats:?}");
    assert!(stats.proper_holds >= 10, "{stats:?}");
}

#[test]
fn auto_dispatch_agrees_with_the_lp_at_every_gamma() {
    for seed in 0..300u64 {
        for g in [rat(0, 1), rat(1, 3), rat(1, 2), rat(4, 5), rat(1, 1)] {
            let q = random_query(seed, 6, 4, g);
            let auto = decide(&q, Method::Auto).unwrap();
            let lp = decide_lp(&q).unwrap();
            assert_eq!(auto.holds, lp.holds, "seed {seed} γ={}", q.gamma());
            verify_evidence(&q, &auto).unwrap();
            if q.gamma() == &rat(0, 1) || q.gamma() == &rat(1, 1) {
                assert_eq!(auto.regime, Regime::LpDirect);
            }
        }
    }
}

#[test]
fn one_premise_verdict_does_not_depend_on_gamma() {
    for seed in 0..400u64 {
        let verdicts: Vec<bool> = [rat(1, 10), rat(1, 2), rat(9, 10)]
            .into_iter()
            .map(|g| {
                let mut q = random_query(seed, 6, 1, g.clone());
                if q.k() == 0 {
                    q = random_query(seed + 7, 6, 1, g);
                }
                decide_lp(&q).unwrap().holds
            })
            .collect();
        assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "seed {seed}: {verdicts:?}");
    }
}

#[test]
fn entailment_is_upward_closed_in_gamma() {
    let ladder = [
        rat(1, 10),
        rat(1, 4),
        rat(2, 5),
        rat(1, 2),
        rat(57, 100),
        rat(2, 3),
        rat(3, 4),
        rat(9, 10),
        rat(99, 100),
    ];
    let mut changes = 0;
    for seed in 0..200u64 {
        let base = random_query(seed, 6, 3, rat(1, 2));
        let verdicts: Vec<bool> = ladder
            .iter()
            .map(|g| decide_lp(&base.with_gamma(g.clone()).unwrap()).unwrap().holds)
            .collect();
        if let Some(first) = verdicts.iter().position(|&h| h) {
            assert!(verdicts[first..].iter().all(|&h| h), "seed {seed}: {verdicts:?}");
            changes += (first > 0) as usize;
        }
    }
    assert!(changes > 0, "no query switched verdict along the ladder");
}

#[test]
fn characterization_method_refuses_gamma_zero_and_one() {
    for g in [rat(0, 1), rat(1, 1)] {
        let q = two_premise_query(g);
        assert!(matches!(decide(&q, Method::Characterization), Err(Error::Contract(_))));
        assert!(decide(&q, Method::Lp).is_ok());
    }
}

fn prune_invariants(rules: &entail_core::ImplicationSet, g: &entail_core::Rational) {
    let kept = prune(rules, g).unwrap();
    for rule in rules.iter() {
        let q = EntailmentQuery::new(kept.clone(), *rule, g.clone()).unwrap();
        assert!(decide_lp(&q).unwrap().holds, "pruned set lost {rule:?}");
    }
    // Kept rules appear in input order.
    let mut cursor = 0;
    for rule in kept.iter() {
        cursor += rules.implications()[cursor..].iter().position(|r| r == rule).unwrap() + 1;
    }
}

#[test]
fn pruned_sets_entail_every_input_rule() {
    for seed in 0..150u64 {
        let q = random_query(seed, 6, 4, rat(1, 2));
        for g in [rat(1, 5), rat(1, 2), rat(7, 10)] {
            prune_invariants(q.premises(), &g);
        }
    }
    let golden = query_in(
        &universe(&["A", "B", "C", "D"]),
        &[("A", "BC"), ("A", "BD"), ("ACD", "B")],
        ("A", "A"),
        rat(1, 2),
    );
    let kept = prune(golden.premises(), &rat(1, 2)).unwrap();
    assert_eq!(kept.implications(), &golden.premises().implications()[..2]);
}
