use std::collections::BTreeMap;

use num_bigint::BigInt;
use pi1_core::field::{make_field, Field};
use pi1_core::newman::{decompose_sigma, truncated_counts_oracle};
use pi1_core::pipeline::{
    compute_pi1, compute_pi1_sequential, parse_spec, render_json, render_text,
};
use pi1_core::witt::{all_witt_vectors, ghost_value, witt_add, witt_addition_polys, WittVector};
use proptest::prelude::*;
use serde_json::{json, Value};

fn component() -> impl Strategy<Value = Value> {
    prop_oneof![
        Just(json!({"kind": "point"})),
        (2usize..10).prop_map(|o| json!({"kind": "truncated_poly", "order": o})),
        (1usize..4).prop_map(
            |r| json!({"kind": "monomial_quotient", "vars": r, "ideal": square_zero_ideal(r)})
        ),
        (2u32..4, 2u32..3).prop_map(
            |(a, b)| json!({"kind": "monomial_quotient", "vars": 2, "ideal": [[a, 0], [0, b]]})
        ),
    ]
}

fn square_zero_ideal(r: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for i in 0..r {
        for j in i..r {
            let mut e = vec![0; r];
            e[i] += 1;
            e[j] += 1;
            out.push(e);
        }
    }
    out
}

fn spec() -> impl Strategy<Value = Value> {
    (
        prop::sample::select(vec![2u64, 3, 5]),
        prop::collection::vec(prop::collection::vec(component(), 1..4), 1..4),
    )
        .prop_map(|(p, branches)| json!({"p": p, "branches": branches}))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn expression_invariants(v in spec()) {
        let s = parse_spec(&v.to_string()).unwrap();
        let e = compute_pi1(&s).unwrap();
        let m: usize = s.algebras.iter().map(|b| b.len() - 1).sum();
        prop_assert_eq!(e.zhat_mult, m);
        let mut union = BTreeMap::new();
        for a in s.algebras.iter().flatten() {
            for (l, c) in decompose_sigma(a).unwrap().counts {
                *union.entry(l).or_insert(0) += c;
            }
        }
        prop_assert_eq!(&e.nw_counts, &union);
        for c in e.branches.iter().flat_map(|b| &b.components) {
            let max = c.factors.iter().map(|f| f.length).max().unwrap_or(0);
            prop_assert_eq!(c.height, max);
        }
        prop_assert_eq!(e, compute_pi1_sequential(&s).unwrap());
    }

    #[test]
    fn permutation_invariance(v in spec(), seed in any::<u64>()) {
        let s = parse_spec(&v.to_string()).unwrap();
        let e = compute_pi1(&s).unwrap();
        let mut w = v.clone();
        let branches = w["branches"].as_array_mut().unwrap();
        let k = branches.len();
        branches.rotate_left(seed as usize % k);
        for b in branches.iter_mut() {
            let b = b.as_array_mut().unwrap();
            let n = b.len();
            b.rotate_right((seed >> 8) as usize % n);
        }
        let e2 = compute_pi1(&parse_spec(&w.to_string()).unwrap()).unwrap();
        prop_assert_eq!(render_text(&e), render_text(&e2));
        prop_assert_eq!(render_json(&e), render_json(&e2));
    }

    #[test]
    fn witt_addition_is_a_group_law(p in prop::sample::select(vec![2u64, 3, 5]), a in prop::collection::vec(0i64..5, 3), b in prop::collection::vec(0i64..5, 3), c in prop::collection::vec(0i64..5, 3)) {
        let f = Field::prime(p).unwrap();
        let w = |v: &[i64]| WittVector::new(p, v.iter().map(|x| f.from_int(*x)).collect());
        let (x, y, z) = (w(&a), w(&b), w(&c));
        let add = |u: &WittVector, v: &WittVector| witt_add(u, v, &f).unwrap();
        prop_assert_eq!(add(&x, &y), add(&y, &x));
        prop_assert_eq!(add(&add(&x, &y), &z), add(&x, &add(&y, &z)));
        prop_assert_eq!(add(&x, &WittVector::zero(p, 3)), x);
    }

    #[test]
    fn witt_polys_respect_ghost_components(p in prop::sample::select(vec![2u64, 3]), a in prop::collection::vec(-20i64..20, 3), b in prop::collection::vec(-20i64..20, 3)) {
        let s = witt_addition_polys(p, 3).unwrap();
        let x: Vec<BigInt> = a.iter().map(|v| BigInt::from(*v)).collect();
        let y: Vec<BigInt> = b.iter().map(|v| BigInt::from(*v)).collect();
        let sum: Vec<BigInt> = s.iter().map(|q| q.eval_int(&x, &y)).collect();
        for n in 0..3 {
            prop_assert_eq!(ghost_value(p, n, &sum), ghost_value(p, n, &x) + ghost_value(p, n, &y));
        }
    }
}

#[test]
fn floor_oracle_in_extension_fields() {
    for (p, n) in [(2u64, 2usize), (3, 2)] {
        for m in 1..=12u64 {
            let s = format!(
                r#"{{"p":{p},"n":{n},"branches":[[{{"kind":"truncated_poly","order":{}}}]]}}"#,
                m + 1
            );
            let e = compute_pi1(&parse_spec(&s).unwrap()).unwrap();
            assert_eq!(e.nw_counts, truncated_counts_oracle(p, m));
        }
    }
}

#[test]
fn witt_groups_have_the_expected_exponent() {
    // W_2(F_p) is cyclic of order p^2, W_2(F_4) is (Z/4)^2.
    for p in [2u64, 3] {
        let f = Field::prime(p).unwrap();
        let one = WittVector::new(p, vec![f.one(), f.zero()]);
        let mut x = one.clone();
        let mut k = 1;
        while x != WittVector::zero(p, 2) {
            x = witt_add(&x, &one, &f).unwrap();
            k += 1;
        }
        assert_eq!(k, p * p);
    }
    let f4 = make_field(2, 2, None).unwrap();
    for u in all_witt_vectors(&f4, 2) {
        let two = witt_add(&u, &u, &f4).unwrap();
        assert_eq!(witt_add(&two, &two, &f4).unwrap(), WittVector::zero(2, 2));
    }
}
