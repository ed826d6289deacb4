use proptest::prelude::*;
use superdirac::exactla::{kernel_basis, mat_vec, qf, rank, Mat, Q};
use superdirac::weights::{RootDatum, Shift, Weight};

fn rational() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

fn weight(m: usize, n: usize) -> impl Strategy<Value = Weight> {
    (proptest::collection::vec(rational(), m), proptest::collection::vec(rational(), n))
        .prop_map(|(eps, del)| Weight { eps, del })
}

fn matrix() -> impl Strategy<Value = (Mat, usize)> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        (proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r), Just(c)).prop_map(|(rows, c)| {
            (rows.into_iter().map(|row| row.into_iter().map(|x| qf(x, 1)).collect()).collect(), c)
        })
    })
}

proptest! {
    #[test]
    fn pairing_is_weyl_invariant(a in weight(2, 3), b in weight(2, 3)) {
        let d = RootDatum::new(2, 3, 1, 1).unwrap();
        for w in d.weyl_group() {
            prop_assert_eq!(d.pairing(&w.act(&a), &w.act(&b)), d.pairing(&a, &b));
        }
    }

    #[test]
    fn dot_action_is_a_group_action(l in weight(3, 2)) {
        let d = RootDatum::new(3, 2, 2, 1).unwrap();
        let ws = d.weyl_group();
        for x in &ws {
            for y in ws.iter().step_by(3) {
                for s in [Shift::Full, Shift::Even] {
                    let lhs = d.dot_action(&x.compose(y), &l, s);
                    let rhs = d.dot_action(x, &d.dot_action(y, &l, s), s);
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn same_infinitesimal_character_reflexive_and_symmetric(a in weight(2, 1), b in weight(2, 1)) {
        let d = RootDatum::new(2, 1, 1, 1).unwrap();
        prop_assert!(d.same_infinitesimal_character(&a, &a));
        prop_assert_eq!(d.same_infinitesimal_character(&a, &b), d.same_infinitesimal_character(&b, &a));
    }

    #[test]
    fn kernel_basis_is_a_kernel((a, cols) in matrix()) {
        let k = kernel_basis(&a, cols);
        prop_assert_eq!(k.len() + rank(&a, cols), cols);
        for v in &k {
            prop_assert!(mat_vec(&a, v).iter().all(|x| *x == qf(0, 1)));
        }
    }
}
