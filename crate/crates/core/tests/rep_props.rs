use pi1_core::algebra::LocalAlgebra;
use pi1_core::field::{Fe, Field};
use pi1_core::fixtures::fixture_algebras;
use pi1_core::matrix::Matrix;
use pi1_core::rep::{
    are_isomorphic, make_sa_object, normalize_triple, tensor_sa, unit_group_dim1, AlgebraMatrix,
    SAObject, TripleObject,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_object(rng: &mut ChaCha8Rng, a: &LocalAlgebra, r: usize) -> SAObject {
    let f = a.field();
    let el: Vec<Fe> = f.elements().collect();
    let comps = (0..a.dim())
        .map(|_| {
            Matrix::new(
                r,
                r,
                (0..r * r).map(|_| el[rng.gen_range(0..el.len())]).collect(),
            )
        })
        .collect();
    make_sa_object(a, comps).unwrap()
}

fn algebras() -> Vec<LocalAlgebra> {
    let mut out: Vec<LocalAlgebra> = fixture_algebras(&Field::prime(2).unwrap())
        .into_iter()
        .map(|x| x.1)
        .collect();
    out.extend(
        fixture_algebras(&Field::prime(3).unwrap())
            .into_iter()
            .take(4)
            .map(|x| x.1),
    );
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_associative(seed in any::<u64>(), k in 0usize..15, dims in (1usize..3, 1usize..3, 1usize..3)) {
        let all = algebras();
        let a = &all[k % all.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_object(&mut rng, a, dims.0);
        let y = random_object(&mut rng, a, dims.1);
        let z = random_object(&mut rng, a, dims.2);
        // The Kronecker product is associative on the nose, so the
        // re-association map is the identity on indices.
        let left = tensor_sa(&tensor_sa(&x, &y).unwrap(), &z).unwrap();
        let right = tensor_sa(&x, &tensor_sa(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn unit_laws(seed in any::<u64>(), k in 0usize..15, r in 1usize..4) {
        let all = algebras();
        let a = &all[k % all.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_object(&mut rng, a, r);
        let one = SAObject::unit(a);
        prop_assert_eq!(&tensor_sa(&x, &one).unwrap(), &x);
        prop_assert_eq!(&tensor_sa(&one, &x).unwrap(), &x);
    }

    #[test]
    fn tensor_is_commutative_up_to_swap(seed in any::<u64>(), k in 0usize..15) {
        // Over a commutative algebra X⊗Y and Y⊗X are isomorphic via the swap.
        let all = algebras();
        let a = &all[k % all.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_object(&mut rng, a, 2);
        let y = random_object(&mut rng, a, 1);
        let xy = tensor_sa(&x, &y).unwrap();
        let yx = tensor_sa(&y, &x).unwrap();
        prop_assert_eq!(xy, yx);
    }
}

#[test]
fn one_dimensional_objects_are_determined_by_their_unit() {
    let f = Field::prime(2).unwrap();
    let a = LocalAlgebra::truncated_poly(&f, 4).unwrap();
    let g = unit_group_dim1(&a);
    for u in &g.elements {
        for v in &g.elements {
            let iso =
                are_isomorphic(&SAObject::from_unit(&a, u), &SAObject::from_unit(&a, v)).unwrap();
            assert_eq!(iso.is_some(), u == v);
        }
    }
}

#[test]
fn unit_groups_over_f3() {
    let f = Field::prime(3).unwrap();
    let g = unit_group_dim1(&LocalAlgebra::truncated_poly(&f, 4).unwrap());
    assert_eq!(g.order(), 27);
    assert!(g.is_group() && g.matches_units());
    // (1+t)^3 = 1 + t^3 is not 1, while (1+t)^9 = 1.
    assert_eq!(g.exponent(), 9);
}

#[test]
fn mixed_triple_normalizes() {
    let f = Field::prime(2).unwrap();
    let a1 = LocalAlgebra::truncated_poly(&f, 2).unwrap();
    let a2 = LocalAlgebra::truncated_poly(&f, 1).unwrap();
    let g1 = Matrix::from_rows(&[vec![Fe::ONE, Fe::ONE], vec![Fe::ZERO, Fe::ONE]]);
    let g2 = Matrix::identity(2);
    let b = Matrix::from_rows(&[vec![Fe::ZERO, Fe::ONE], vec![Fe::ONE, Fe::ZERO]]);
    let t = TripleObject {
        components: vec![a1.clone(), a2.clone()],
        v_dim: 2,
        w_dim: 2,
        betas: vec![
            AlgebraMatrix {
                scalar: g1.clone(),
                parts: vec![b.clone()],
            },
            AlgebraMatrix {
                scalar: g2,
                parts: vec![],
            },
        ],
    };
    let (objs, trans) = normalize_triple(&t).unwrap();
    assert_eq!(objs.len(), 2);
    assert_eq!(
        objs[0].components,
        vec![b.mul(&g1.inverse(&f).unwrap(), &f).unwrap()]
    );
    assert_eq!(
        objs[1],
        SAObject {
            dim: 2,
            ..SAObject::unit(&a2)
        }
    );
    assert_eq!(trans, vec![g1]);
}
