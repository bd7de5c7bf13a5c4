//! Property tests for the invariants of every module.

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtl::contextuality;
use qtl::decide::{self, order_supports, Limits, Logic, Verdict};
use qtl::lin::LinSystem;
use qtl::logic::{parse_prop, satisfies, QtlFormula};
use qtl::prop::{self, symbols, Assignment, PropFormula, SymbolSet};
use qtl::team::{cover_leq, team_from_table, ProbabilityTable, QuantumTeam};
use qtl::{rational as q, Rational};

fn prop_formula() -> impl Strategy<Value = PropFormula> {
    let leaf = (0u32..4).prop_map(PropFormula::var);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(PropFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.iff(b)),
        ]
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to 10 rows over `p0..p2` with random nonempty domains.
fn random_team(seed: u64, multi: bool) -> QuantumTeam {
    let mut r = rng(seed);
    let rows = (0..r.gen_range(1..=10))
        .map(|_| {
            let mut pairs = Vec::new();
            for p in 0..3u32 {
                if multi || r.gen_bool(0.6) {
                    pairs.push((p, r.gen_bool(0.5)));
                }
            }
            if pairs.is_empty() {
                pairs.push((r.gen_range(0..3), r.gen_bool(0.5)));
            }
            Assignment::from_bits(pairs)
        })
        .collect();
    QuantumTeam::new(rows).unwrap()
}

fn nonempty_subsets(set: &SymbolSet) -> Vec<SymbolSet> {
    let syms: Vec<_> = set.iter().copied().collect();
    (1..1u32 << syms.len())
        .map(|m| syms.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, s)| *s).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn prop_formula_round_trips(f in prop_formula()) {
        let back = parse_prop(&f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn qtl_formula_round_trips(seed in any::<u64>()) {
        let f = common::random_qtl(&mut rng(seed));
        let back: QtlFormula = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn evaluation_matches_reference(f in prop_formula(), bits in any::<u8>()) {
        let s = Assignment::from_bits((0..4).map(|i| (i, bits >> i & 1 == 1)));
        prop_assert_eq!(prop::eval(&f, &s).unwrap(), common::eval_prop(&f, &s));
    }

    #[test]
    fn team_text_round_trips(seed in any::<u64>()) {
        let x = random_team(seed, false);
        let back: QuantumTeam = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn table_text_and_team_round_trip(seed in any::<u64>()) {
        let t = common::random_table(&mut rng(seed));
        let back: ProbabilityTable = t.to_string().parse().unwrap();
        prop_assert_eq!(&back, &t);
        let cover = t.cover();
        let x = team_from_table(&t);
        prop_assert_eq!(x.associated_table(&cover.base(), &cover).unwrap(), t);
    }

    #[test]
    fn probabilities_sum_to_one(seed in any::<u64>()) {
        let x = random_team(seed, false);
        for q_set in x.support() {
            for u in nonempty_subsets(&q_set) {
                let total: Rational = prop::assignments(&u).iter().map(|v| x.prob(&u, v).unwrap()).sum();
                prop_assert_eq!(total, q(1, 1));
            }
        }
    }

    #[test]
    fn negation_and_additivity_on_a_fixed_support(seed in any::<u64>(), f in prop_formula(), g in prop_formula()) {
        let x = random_team(seed, true);
        let u = symbols(0..3);
        let restrict = |h: &PropFormula| -> PropFormula {
            // rename p3 to p2 so the formula fits the team domain
            let text = h.to_string().replace("p3", "p2");
            parse_prop(&text).unwrap()
        };
        let (f, g) = (restrict(&f), restrict(&g));
        let e = |h: &PropFormula| x.expectation(Some(&u), h).unwrap();
        prop_assert_eq!(e(&f) + e(&f.clone().not()), q(1, 1));
        prop_assert_eq!(e(&f.clone().and(g.clone())) + e(&f.clone().and(g.not())), e(&f));
        prop_assert_eq!(x.expectation(None, &f).unwrap(), e(&f));
    }

    #[test]
    fn expectation_matches_row_count(seed in any::<u64>(), f in prop_formula()) {
        let x = random_team(seed, false);
        let f = parse_prop(&f.to_string().replace("p3", "p0")).unwrap();
        let c = qtl::logic::Component::normal(f.clone());
        match (x.expectation(None, &f), common::count_value(&x, &c)) {
            (Ok(v), Some(w)) => prop_assert_eq!(v, w),
            (Err(_), None) => {}
            (a, b) => prop_assert!(false, "library {:?}, count {:?}", a, b),
        }
    }

    #[test]
    fn exactly_one_of_formula_and_negation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_team(r.gen(), false);
        let alpha = common::random_qtl(&mut r);
        match satisfies(&x, &alpha) {
            Ok(v) => {
                prop_assert_eq!(satisfies(&x, &alpha.clone().not()).unwrap(), !v);
                prop_assert_eq!(common::oracle_satisfies(&x, &alpha), Some(v));
            }
            Err(_) => prop_assert!(!cover_leq(alpha.support().iter(), x.support().iter())),
        }
    }

    #[test]
    fn cover_order_is_a_preorder(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let sets = |seed| random_team(seed, false).support();
        let (x, y, z) = (sets(a), sets(b), sets(c));
        prop_assert!(cover_leq(x.iter(), x.iter()));
        if cover_leq(x.iter(), y.iter()) && cover_leq(y.iter(), z.iter()) {
            prop_assert!(cover_leq(x.iter(), z.iter()));
        }
    }

    #[test]
    fn linear_witnesses_are_exact(seed in any::<u64>()) {
        let (n, cs) = common::random_system(&mut rng(seed));
        let system = LinSystem::from_constraints(cs.iter().map(|c| c.to_lin()));
        let first = system.feasible();
        prop_assert_eq!(&first, &system.feasible());
        match first {
            Some(mut w) => {
                w.resize(n, q(0, 1));
                prop_assert!(cs.iter().all(|c| c.holds(&w)));
                prop_assert!(common::infeasibility_certificate(n, &cs).is_none());
            }
            None => prop_assert!(common::infeasibility_certificate(n, &cs).is_some()),
        }
    }

    #[test]
    fn supports_are_ordered_supersets_first(seed in any::<u64>()) {
        let sets = random_team(seed, false).support();
        let order = order_supports(sets.iter());
        for (i, v) in order.iter().enumerate() {
            prop_assert!(order[i + 1..].iter().all(|w| !(v.is_subset(w) && v != w)));
        }
    }

    #[test]
    fn marginals_of_one_distribution_are_non_contextual(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = loop {
            let t = common::random_table(&mut r);
            let sets = t.cover();
            if sets.sets().iter().any(|u| sets.sets().iter().any(|w| u != w && u.is_subset(w))) {
                break t;
            }
        };
        let c = contextuality::classify(&t).unwrap();
        prop_assert_eq!(c.class, contextuality::Class::NonContextual);
        let g = c.global_section.unwrap();
        for d in t.entries() {
            prop_assert_eq!(&g.marginal(d.domain()).unwrap(), d);
        }
    }
}

const BELL_COVER: &str = "{p0,p1};{p0,p3};{p1,p2};{p2,p3}";

fn bell_formulas() -> Vec<PropFormula> {
    qtl::logic::parse_prop_list(qtl::data::BELL_FORMULAS).unwrap()
}

/// Up to 12 total assignments over `p0..p3`.
fn random_multi_team(seed: u64) -> QuantumTeam {
    let mut r = rng(seed);
    let rows = (0..r.gen_range(1..=12))
        .map(|_| Assignment::from_bits((0..4).map(|p| (p, r.gen_bool(0.5)))))
        .collect();
    QuantumTeam::new(rows).unwrap()
}

/// Independent entries on the four pair contexts.
fn random_pair_table(seed: u64) -> ProbabilityTable {
    let mut r = rng(seed);
    let cover: qtl::team::Cover = BELL_COVER.parse().unwrap();
    let entries = cover
        .sets()
        .iter()
        .map(|u| {
            let states = prop::assignments(u);
            let den: i64 = r.gen_range(1..=8);
            let mut units = vec![0i64; states.len()];
            for _ in 0..den {
                units[r.gen_range(0..states.len())] += 1;
            }
            qtl::team::Distribution::new(u.clone(), states.into_iter().zip(units).map(|(s, n)| (s, q(n, den)))).unwrap()
        })
        .collect();
    ProbabilityTable::new(entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multi_team_tables_have_sections_and_no_violation(seed in any::<u64>()) {
        let x = random_multi_team(seed);
        let cover: qtl::team::Cover = BELL_COVER.parse().unwrap();
        let t = x.associated_table(&x.domain(), &cover).unwrap();
        prop_assert!(contextuality::has_global_section(&t).unwrap());
        prop_assert!(!contextuality::is_strongly_contextual(&t).unwrap());
        prop_assert_eq!(contextuality::violation(&t, &bell_formulas()).unwrap(), q(0, 1));
    }

    #[test]
    fn contextuality_hierarchy_is_consistent(seed in any::<u64>()) {
        let t = random_pair_table(seed);
        let c = contextuality::classify(&t).unwrap();
        let v = contextuality::violation(&t, &bell_formulas()).unwrap();
        if c.class == contextuality::Class::NonContextual {
            prop_assert_eq!(v.clone(), q(0, 1));
        }
        if contextuality::is_strongly_contextual(&t).unwrap() {
            prop_assert!(!contextuality::has_global_section(&t).unwrap());
        }
        let mut shuffled = bell_formulas();
        shuffled.reverse();
        shuffled.swap(0, 2);
        prop_assert_eq!(contextuality::violation(&t, &shuffled).unwrap(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn logical_bell_inequalities_are_ptl_valid(seed in any::<u64>(), k in 2usize..=3) {
        let mut r = rng(seed);
        let mut phis: Vec<PropFormula> = (0..k - 1).map(|_| common::random_prop(&mut r, &[0, 1, 2], 2)).collect();
        let all = PropFormula::conjunction(phis.clone()).unwrap();
        phis.push(all.not().and(common::random_prop(&mut r, &[0, 1, 2], 1)));
        let inequality = contextuality::derive_bell(&phis).unwrap();
        prop_assert!(decide::ptl_valid(&inequality).unwrap());
    }

    #[test]
    fn decide_is_consistent(seed in any::<u64>()) {
        let alpha = common::random_qtl(&mut rng(seed));
        let d = decide::decide(&alpha, Logic::Qtl, &Limits::default()).unwrap();
        if let Some(x) = &d.witness {
            prop_assert_eq!(common::oracle_satisfies(x, &alpha), Some(true));
        }
        if let Some(x) = &d.counter_witness {
            prop_assert_eq!(common::oracle_satisfies(x, &alpha.clone().not()), Some(true));
        }
        prop_assert_eq!(d.verdict == Verdict::Valid, d.counter_witness.is_none());
        prop_assert_eq!(d.verdict == Verdict::Unsatisfiable, d.witness.is_none());
    }

    #[test]
    fn ptl_witnesses_are_multi_teams(seed in any::<u64>()) {
        let alpha = common::random_qtl(&mut rng(seed));
        let normal = alpha.map_components(&mut |c| Ok(qtl::logic::Component::normal(c.formula().clone()))).unwrap();
        if let Some(x) = decide::ptl_satisfiable(&normal).unwrap() {
            prop_assert!(x.is_multi_team());
            prop_assert!(qtl::logic::ptl_satisfies(&x, &normal).unwrap());
        }
    }
}
