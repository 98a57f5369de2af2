use cremona_core::cyclo::{canonicalize, CycNum, CycloField};
use proptest::prelude::*;

const CONDUCTORS: [u32; 6] = [3, 4, 5, 8, 12, 15];

fn element(n: u32, terms: &[(i8, u8, u8)]) -> CycNum {
    let f = CycloField::new(n).unwrap();
    let t: Vec<(i64, i64, i64)> = terms.iter().map(|&(p, q, e)| (p as i64, q as i64 % 7 + 1, e as i64)).collect();
    canonicalize(&f, &t).unwrap()
}

fn terms() -> impl Strategy<Value = Vec<(i8, u8, u8)>> {
    prop::collection::vec(any::<(i8, u8, u8)>(), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(ci in 0usize..CONDUCTORS.len(), a in terms(), b in terms(), c in terms()) {
        let n = CONDUCTORS[ci];
        let (a, b, c) = (element(n, &a), element(n, &b), element(n, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverses(ci in 0usize..CONDUCTORS.len(), a in terms()) {
        let a = element(CONDUCTORS[ci], &a);
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.invert().unwrap()).is_one());
    }

    #[test]
    fn embedding_is_multiplicative(ci in 0usize..CONDUCTORS.len(), a in terms(), b in terms()) {
        let n = CONDUCTORS[ci];
        let (a, b) = (element(n, &a), element(n, &b));
        let lhs = (&a * &b).embed_complex();
        let rhs = a.embed_complex() * b.embed_complex();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        let sum = (&a + &b).embed_complex() - (a.embed_complex() + b.embed_complex());
        prop_assert!(sum.norm() <= 1e-9 * (1.0 + a.embed_complex().norm() + b.embed_complex().norm()));
    }
}

#[test]
fn roots_of_unity_have_exact_order() {
    for n in 1..=30 {
        let f = CycloField::new(n).unwrap();
        let w = f.omega(1);
        assert!(w.pow(n as u64).is_one());
        for k in 1..n {
            assert!(!w.pow(k as u64).is_one(), "w^{k} = 1 in conductor {n}");
        }
    }
}
