use proptest::prelude::*;

use crshadow::random::{random_system, rng};
use crshadow::rational::{abs_diff, int, ratio, Rational};
use crshadow::sft::{forbidden_words, rho, rho_line, sft_member, shift_apply};
use crshadow::Lasso;

fn lasso() -> impl Strategy<Value = Lasso<Rational>> {
    let term = (0i64..4).prop_map(|k| ratio(k, 3));
    (prop::collection::vec(term.clone(), 0..4), prop::collection::vec(term, 1..4))
        .prop_map(|(p, c)| Lasso::new(p, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rho_is_a_metric(a in lasso(), b in lasso(), c in lasso()) {
        let ab = rho_line(&a, &b);
        prop_assert_eq!(&ab, &rho_line(&b, &a));
        prop_assert!(ab >= int(0));
        prop_assert_eq!(ab == int(0), a.same_sequence(&b));
        prop_assert_eq!(rho_line(&a, &a.canonical()), int(0));
        prop_assert!(rho_line(&a, &c) <= &ab + rho_line(&b, &c));
    }

    #[test]
    fn shift_is_two_lipschitz(a in lasso(), b in lasso()) {
        prop_assert!(rho_line(&shift_apply(&a), &shift_apply(&b)) <= rho_line(&a, &b) * int(2));
    }

    #[test]
    fn rho_matches_a_long_partial_sum(a in lasso(), b in lasso()) {
        // The tail after 40 terms is at most (max distance) / 2^40.
        let (xa, xb) = (a.unroll(40), b.unroll(40));
        let mut partial = int(0);
        let mut w = ratio(1, 2);
        for (x, y) in xa.iter().zip(&xb) {
            partial += abs_diff(x, y) * &w;
            w /= int(2);
        }
        let exact = rho_line(&a, &b);
        prop_assert!(partial <= exact);
        prop_assert!(&exact - &partial <= w * int(2));
    }

    #[test]
    fn trajectories_are_sft_members(seed in any::<u64>()) {
        let g = random_system(&mut rng(seed), 4);
        let f = forbidden_words(&g).unwrap();
        for x in g.legal_set().iter() {
            for t in g.trajectory_lassos_bounded(x, g.space().len() + 2) {
                prop_assert!(sft_member(&t, &f).unwrap());
                prop_assert_eq!(rho(&g, &t, &t).unwrap(), int(0));
            }
        }
    }
}
