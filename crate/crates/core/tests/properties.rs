use proptest::prelude::*;

use staircase::complex::staircase_from_steps;
use staircase::seq::seq_normalize;
use staircase::simplify::{change_basis, epsilon, epsilon_hook, reduced_representative, tau, BasisChange, Outcome};
use staircase::{BifilteredComplex, StepSequence};

fn steps(max_len: usize) -> impl Strategy<Value = StepSequence> {
    prop::collection::vec(1i64..=4, 1..=max_len).prop_map(StepSequence::new)
}

fn stair(s: &StepSequence) -> BifilteredComplex {
    staircase_from_steps(s).unwrap()
}

fn eps(c: &BifilteredComplex) -> i64 {
    match epsilon(c).unwrap() {
        Outcome::Decided(v) => v,
        Outcome::Undecided(r) => panic!("undecided: {r}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructions_stay_valid(a in steps(3), b in steps(2)) {
        let (ca, cb) = (stair(&a), stair(&b));
        for c in [&ca, &ca.dual(), &ca.tensor(&cb), &ca.tensor(&cb.dual())] {
            prop_assert!(c.validate().is_ok());
        }
    }

    #[test]
    fn basis_changes_preserve_invariants(a in steps(2), b in steps(2), picks in prop::collection::vec((0usize..64, 0usize..64), 1..8)) {
        let t = stair(&a).tensor(&stair(&b));
        let ids: Vec<String> = t.generators().iter().map(|g| g.id.clone()).collect();
        let mut c = t.clone();
        for (n, l) in picks {
            let bc = BasisChange { n: ids[n % ids.len()].clone(), l: ids[l % ids.len()].clone() };
            if let Ok(next) = change_basis(&c, &bc) {
                prop_assert!(next.validate().is_ok());
                c = next;
            }
        }
        prop_assert_eq!(tau(&c).unwrap(), a.tau() + b.tau());
        prop_assert_eq!(eps(&c), 1);
    }

    #[test]
    fn epsilon_and_tau_under_duals(a in steps(3), b in steps(2)) {
        let (ca, cb) = (stair(&a), stair(&b));
        prop_assert_eq!(eps(&ca.dual()), -eps(&ca));
        prop_assert_eq!(eps(&ca.tensor(&ca.dual())), 0);
        prop_assert_eq!(tau(&ca.tensor(&cb)).unwrap(), tau(&ca).unwrap() + tau(&cb).unwrap());
        prop_assert_eq!(tau(&ca.dual()).unwrap(), -tau(&ca).unwrap());
    }

    #[test]
    fn staircases_reduce_to_themselves(a in steps(4)) {
        prop_assert_eq!(reduced_representative(&stair(&a)).unwrap(), Outcome::Decided(a));
    }

    #[test]
    fn normalizing_is_idempotent(v in prop::collection::vec(-3i64..=3, 0..10)) {
        let once = seq_normalize(&v);
        prop_assert_eq!(seq_normalize(once.entries()), once);
    }

    #[test]
    fn serialization_round_trips(a in steps(2), b in steps(2)) {
        let t = stair(&a).tensor(&stair(&b).dual());
        let s = t.to_json();
        let back = BifilteredComplex::from_json(&s).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.to_json(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The direct hook computation agrees with epsilon from simplified bases.
    #[test]
    fn hook_oracle_agrees(a in steps(2), b in steps(2)) {
        let t = stair(&a).tensor(&stair(&b).dual());
        prop_assert_eq!(epsilon_hook(&t).unwrap(), eps(&t));
        let u = stair(&b).tensor(&stair(&a).dual());
        prop_assert_eq!(epsilon_hook(&u).unwrap(), -eps(&t));
    }
}
