use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::random::{random_group, random_hom};

fn arb_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-20i64..=20, r * c).prop_map(move |v| {
            IntMatrix::from_flat(r, c, v.into_iter().map(BigInt::from).collect())
        })
    })
}

fn random_element<R: Rng>(rng: &mut R, g: &FgAbGroup) -> Element {
    let c: Vec<i64> = (0..g.ngens()).map(|_| rng.gen_range(-9..=9)).collect();
    g.element_i64(&c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_smith_form(m in arb_matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(s.u.determinant().abs().is_one());
        prop_assert!(s.v.determinant().abs().is_one());
        prop_assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(m.cols()));
        let d = s.diagonal();
        for w in d.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn prop_quotient_round_trip(seed in any::<u64>(), k in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_group(&mut rng, 3, 12);
        let gens = (0..k).map(|_| random_element(&mut rng, &g)).collect();
        let s = Subgroup::from_generators(&g, gens).unwrap();
        let q = quotient(&g, &s).unwrap();
        prop_assert!(q.projection().kernel().same_as(&s).unwrap());
        prop_assert!(q.projection().is_surjective());
        prop_assert!(q.projection().image().is_whole());
        let x = random_element(&mut rng, q.group());
        prop_assert_eq!(q.projection().apply(&q.lift(&x)).unwrap(), x);
    }

    #[test]
    fn prop_composition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gs: Vec<FgAbGroup> = (0..4).map(|_| random_group(&mut rng, 3, 12)).collect();
        let f = random_hom(&mut rng, &gs[0], &gs[1], 4);
        let g = random_hom(&mut rng, &gs[1], &gs[2], 4);
        let h = random_hom(&mut rng, &gs[2], &gs[3], 4);
        let left = h.compose(&g).unwrap().compose(&f).unwrap();
        prop_assert_eq!(&left, &h.compose(&g.compose(&f).unwrap()).unwrap());
        for _ in 0..50 {
            let x = random_element(&mut rng, &gs[0]);
            prop_assert_eq!(left.apply(&x).unwrap(), h.apply(&g.apply(&f.apply(&x).unwrap()).unwrap()).unwrap());
        }
    }

    #[test]
    fn prop_canonical_form_is_idempotent(m in arb_matrix()) {
        let p = group_from_presentation(&m);
        let again = group_from_presentation(&p.group.relation_rows());
        prop_assert_eq!(&again.group, &p.group);
        // canonical coordinates of a lifted element give it back
        for e in p.group.generators() {
            prop_assert_eq!(p.to_canonical(&p.lift(&e)), e);
        }
    }
}
