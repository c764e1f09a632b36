//! Property tests for the structural invariants: parser round trips,
//! substitution laws, evaluation/substitution compatibility, quotient
//! homomorphisms, and oracle agreement on random algebras.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use semisum::algebra::FiniteAlgebra;
use semisum::congruence::{
    all_congruences, congruence_generated, semilattice_replica, Partition,
};
use semisum::equation::{semilattice_base, Identity, QuasiIdentity};
use semisum::signature::Signature;
use semisum::sums::{find_right_units, plonka_sum, strict_lallement_from_units, UnitData};
use semisum::term::{enumerate_terms, Term};

fn sig() -> Signature {
    Signature::parse("mul 2").unwrap()
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::var("x")),
        Just(Term::var("y")),
        Just(Term::var("z")),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Term::app("mul", vec![a, b]))
    })
}

fn arb_groupoid(max_size: usize) -> impl Strategy<Value = FiniteAlgebra> {
    (1..=max_size).prop_flat_map(move |n| {
        proptest::collection::vec(0..n, n * n).prop_map(move |table| {
            FiniteAlgebra::new("rand", sig(), n, vec![table]).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn parse_print_round_trip(t in arb_term()) {
        let printed = t.to_string();
        let reparsed = Term::parse(&printed, &sig()).unwrap();
        prop_assert_eq!(reparsed, t);
    }

    #[test]
    fn substitution_composes(
        t in arb_term(),
        e1 in proptest::collection::btree_map("[xyz]", arb_term(), 3..=3),
        e2 in proptest::collection::btree_map("[xyz]", arb_term(), 3..=3),
    ) {
        // guard: both environments bind all three variables
        prop_assume!(e1.len() == 3 && e2.len() == 3);
        let once = t.substitute(&e1).unwrap().substitute(&e2).unwrap();
        let composed: BTreeMap<String, Term> = e1
            .iter()
            .map(|(v, u)| (v.clone(), u.substitute(&e2).unwrap()))
            .collect();
        prop_assert_eq!(once, t.substitute(&composed).unwrap());
    }

    #[test]
    fn eval_respects_substitution(
        t in arb_term(),
        env in proptest::collection::btree_map("[xyz]", arb_term(), 3..=3),
        alg in arb_groupoid(4),
        picks in proptest::collection::vec(0..4usize, 3),
    ) {
        prop_assume!(env.len() == 3);
        let asg: BTreeMap<String, usize> = ["x", "y", "z"]
            .iter()
            .zip(&picks)
            .map(|(v, &e)| (v.to_string(), e % alg.size()))
            .collect();
        let direct = alg.eval(&t.substitute(&env).unwrap(), &asg).unwrap();
        let pushed: BTreeMap<String, usize> = env
            .iter()
            .map(|(v, u)| (v.clone(), alg.eval(u, &asg).unwrap()))
            .collect();
        prop_assert_eq!(direct, alg.eval(&t, &pushed).unwrap());
    }

    #[test]
    fn identity_agrees_with_premise_free_quasi(
        lhs in arb_term(),
        rhs in arb_term(),
        alg in arb_groupoid(4),
    ) {
        let id = Identity::new(lhs, rhs);
        let quasi = QuasiIdentity { premises: Vec::new(), conclusion: id.clone() };
        let a = alg.satisfies_identity(&id).unwrap();
        let b = alg.satisfies_quasi(&quasi).unwrap();
        prop_assert_eq!(a.holds(), b.holds());
        prop_assert_eq!(a.witness(), b.witness());
    }

    #[test]
    fn replica_quotient_is_a_semilattice_and_minimal(alg in arb_groupoid(4)) {
        let replica = semilattice_replica(&alg).unwrap();
        let (quotient, block_map) = alg.quotient(&replica).unwrap();
        let base = semilattice_base(alg.signature()).unwrap();
        prop_assert!(quotient.satisfies_all(&base).unwrap().holds());
        // natural map is a surjective homomorphism
        let mut seen = vec![false; quotient.size()];
        for &b in &block_map {
            seen[b] = true;
        }
        prop_assert!(seen.into_iter().all(|s| s));
        // minimality against the brute-force oracle
        for theta in all_congruences(&alg).unwrap() {
            let (q, _) = alg.quotient(&theta).unwrap();
            if q.satisfies_all(&base).unwrap().holds() {
                prop_assert!(replica.refines(&theta));
            }
        }
    }

    #[test]
    fn generated_congruence_is_least(
        alg in arb_groupoid(4),
        raw_pairs in proptest::collection::vec((0..4usize, 0..4usize), 1..3),
    ) {
        let pairs: Vec<(usize, usize)> = raw_pairs
            .into_iter()
            .map(|(a, b)| (a % alg.size(), b % alg.size()))
            .collect();
        let generated = congruence_generated(&alg, &pairs);
        let oracle = all_congruences(&alg)
            .unwrap()
            .into_iter()
            .filter(|c| pairs.iter().all(|&(a, b)| c.same(a, b)))
            .fold(None::<Partition>, |best, c| match best {
                None => Some(c),
                Some(best) => Some(if c.refines(&best) { c } else { best }),
            })
            .unwrap();
        prop_assert_eq!(generated, oracle);
    }
}

#[test]
fn enumerated_terms_are_distinct_and_exact() {
    let s = sig();
    for (vars, depth) in [(1usize, 2usize), (2, 2), (3, 1)] {
        let names: Vec<String> = semisum::term::numbered_vars(vars);
        for exact in [false, true] {
            let terms = enumerate_terms(&s, &names, depth, exact);
            let unique: BTreeSet<String> = terms.iter().map(|t| t.to_string()).collect();
            assert_eq!(unique.len(), terms.len(), "duplicates at {vars}/{depth}");
            if exact {
                for t in &terms {
                    assert!(t.is_member_tn(vars), "{t} not in T_{vars}");
                }
            }
        }
    }
}

#[test]
fn unit_derived_sums_round_trip_through_the_audit() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5EED_0707);
    for _ in 0..20 {
        let sys = semisum::sums::random_left_zero_plonka_system(&mut rng, 6);
        let (sum, dec) = plonka_sum(&sys).unwrap();
        // in a left-zero band every element is a right unit; pick the
        // first candidate per block
        let mut units = UnitData::default();
        for (s, block) in dec.blocks.iter().enumerate() {
            let candidates = find_right_units(&block.algebra);
            units.units.insert((0, s), candidates["mul"][0]);
        }
        let (rebuilt, _) = strict_lallement_from_units(&sum, &units).unwrap();
        assert!(rebuilt.same_tables(&sum), "{}", sum.name());
    }
}
