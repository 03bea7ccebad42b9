use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;

use polyforge::action::{action_matrices, ActionPair};
use polyforge::coset::{enumerate, EnumConfig};
use polyforge::kernel::{certify_free_abelian_rank4, CoordinateMap};
use polyforge::linalg::{smith_normal_form, IntMatrix};
use polyforge::polytope::{euler_genus, mirror_substitution};
use polyforge::presets;
use polyforge::quotient::{build_pair_group, PairElement, PairGroup};
use polyforge::word::{Letter, Word};

struct Fixture {
    map: CoordinateMap,
    action: ActionPair,
    pair: PairGroup,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let u = presets::group_u();
        let c = presets::case(1).unwrap();
        let t = enumerate(&u, &c.basis, &EnumConfig::default()).unwrap();
        let map = certify_free_abelian_rank4(&u, &t, &c.basis).unwrap();
        let action = action_matrices(&map).unwrap();
        let pair = build_pair_group(&c, 3, &map).unwrap();
        Fixture { map, action, pair }
    })
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..2usize, any::<bool>()), 0..max_len)
        .prop_map(|ls| Word::new(ls.into_iter().map(|(g, inv)| Letter::new(g, inv))))
}

/// A random element of the kernel: a product of conjugates of basis words.
fn kernel_word() -> impl Strategy<Value = Word> {
    prop::collection::vec((0..4usize, any::<bool>(), word(6)), 0..5).prop_map(|parts| {
        let basis = presets::case(1).unwrap().basis;
        parts.into_iter().fold(Word::identity(), |acc, (i, inv, g)| {
            let x = if inv { basis[i].inverse() } else { basis[i].clone() };
            &acc * &x.conjugate(&g)
        })
    })
}

fn add(x: &[BigInt; 4], y: &[BigInt; 4]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coordinates_are_additive(u in kernel_word(), v in kernel_word()) {
        let m = &fixture().map;
        let (cu, cv) = (m.coordinates(&u).unwrap(), m.coordinates(&v).unwrap());
        prop_assert_eq!(m.coordinates(&(&u * &v)).unwrap().to_vec(), add(&cu, &cv));
        let neg: Vec<BigInt> = cu.iter().map(|x| -x).collect();
        prop_assert_eq!(m.coordinates(&u.inverse()).unwrap().to_vec(), neg);
    }

    #[test]
    fn conjugation_acts_by_matrices(u in kernel_word(), g in word(8)) {
        let f = fixture();
        let cu = f.map.coordinates(&u).unwrap();
        let ag = f.action.evaluate(&g).unwrap();
        prop_assert_eq!(f.map.coordinates(&u.conjugate(&g)).unwrap().to_vec(), ag.left_apply(&cu));
    }

    #[test]
    fn pair_group_inverse_letters_cancel(w in word(20), g in 0..2usize) {
        let p = &fixture().pair;
        let e = p.evaluate_word_pair(&w);
        for l in [Letter::pos(g), Letter::neg(g)] {
            prop_assert_eq!(p.apply_generator(&p.apply_generator(&e, l), l.inverse()), e);
        }
    }

    #[test]
    fn pair_group_evaluation_is_multiplicative(u in word(15), v in word(15)) {
        let p = &fixture().pair;
        let uv = &u * &v;
        prop_assert_eq!(p.evaluate_word_pair(&uv), p.apply_word(&p.evaluate_word_pair(&u), &v));
        prop_assert!(p.evaluate_word_pair(&(&u * &u.inverse())).is_identity());
    }

    #[test]
    fn kernel_words_map_to_pure_translations(u in kernel_word()) {
        let p = &fixture().pair;
        let e = p.evaluate_word_pair(&u);
        prop_assert_eq!(e.q, PairElement::identity().q);
    }

    #[test]
    fn smith_form_is_unimodular_invariant(
        rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..5),
        ops in prop::collection::vec((0..3usize, 0..3usize, -2i64..=2), 0..8),
    ) {
        let m = IntMatrix::from_rows(&rows);
        let mut v = IntMatrix::identity(3);
        for (i, j, k) in ops {
            if i != j {
                let mut e = IntMatrix::identity(3);
                e[(i, j)] = BigInt::from(k);
                v = &v * &e;
            }
        }
        prop_assert_eq!(smith_normal_form(&(&m * &v)), smith_normal_form(&m));
        prop_assert_eq!(smith_normal_form(&m), smith_normal_form(&m.transpose()));
    }

    #[test]
    fn euler_characteristic_matches_genus(k in 1u64..5000) {
        let order = 16 * k;
        let (chi, g) = euler_genus(order, 4, 8).unwrap();
        prop_assert_eq!(2 - 2 * g, chi);
        prop_assert_eq!(chi * 8, -(order as i64));
        // odd characteristic is not a closed orientable surface
        prop_assert!(euler_genus(order - 8, 4, 8).is_err());
    }

    #[test]
    fn mirror_substitution_is_an_involution(w in word(30)) {
        let s = mirror_substitution();
        let twice = w.substitute(&s).unwrap().substitute(&s).unwrap();
        prop_assert_eq!(twice, w.free_reduce());
    }

    #[test]
    fn word_inverse_and_reduction(w in word(30)) {
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert!((&w * &w.inverse()).is_empty());
        let r = w.free_reduce();
        prop_assert_eq!(r.free_reduce(), r);
    }
}
