use pi1_core::algebra::LocalAlgebra;
use pi1_core::field::{make_field, Fe, Field};
use pi1_core::fixtures::fixture_algebras;
use pi1_core::matrix::Matrix;
use pi1_core::newman::{decompose_sigma, dual_coalgebra, filtration_dims, regular_basis, ver_dual};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_invertible(rng: &mut ChaCha8Rng, f: &Field, n: usize) -> Matrix {
    let el: Vec<Fe> = f.elements().collect();
    loop {
        let m = Matrix::new(
            n,
            n,
            (0..n * n).map(|_| el[rng.gen_range(0..el.len())]).collect(),
        );
        if m.is_invertible(f) {
            return m;
        }
    }
}

#[test]
fn decomposition_is_basis_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for p in [2u64, 3] {
        let f = Field::prime(p).unwrap();
        for (name, a) in fixture_algebras(&f) {
            let d = decompose_sigma(&a).unwrap();
            for _ in 0..20 {
                let b = a
                    .change_basis(&random_invertible(&mut rng, &f, a.dim()))
                    .unwrap();
                b.validate().unwrap();
                assert_eq!(decompose_sigma(&b).unwrap(), d, "{name} over F{p}");
                assert_eq!(filtration_dims(&b), filtration_dims(&a));
            }
        }
    }
}

#[test]
fn dual_coalgebras_are_coassociative() {
    for p in [2u64, 3] {
        for (name, a) in fixture_algebras(&Field::prime(p).unwrap()) {
            assert!(dual_coalgebra(&a).is_coassociative(), "{name}");
        }
    }
}

#[test]
fn regular_bases_over_extension_fields() {
    let f4 = make_field(2, 2, None).unwrap();
    let f9 = make_field(3, 2, None).unwrap();
    for f in [f4, f9] {
        for (name, a) in fixture_algebras(&f) {
            let basis = regular_basis(&a);
            assert!(basis.check(&ver_dual(&a)), "{name}");
            assert_eq!(basis.length_counts(), decompose_sigma(&a).unwrap().counts);
        }
    }
}

#[test]
fn base_change_preserves_invariants() {
    let f2 = Field::prime(2).unwrap();
    let f8 = make_field(2, 3, None).unwrap();
    let emb = f2.embedding_into(&f8).unwrap();
    for (name, a) in fixture_algebras(&f2) {
        let b = a.base_change(&emb);
        assert_eq!(filtration_dims(&a), filtration_dims(&b), "{name}");
        assert_eq!(a.height(), b.height());
        assert_eq!(
            decompose_sigma(&a).unwrap().counts,
            decompose_sigma(&b).unwrap().counts
        );
    }
}

#[test]
fn two_variable_quotient_by_hand() {
    // On k[x,y]/(x^4, y^2) over F_2 the Frobenius sends x to x^2 and kills
    // every other monomial of m, and its square is zero: d = [0, 6, 7, 7].
    let f = Field::prime(2).unwrap();
    let a = LocalAlgebra::monomial_quotient(&f, 2, &[vec![4, 0], vec![0, 2]]).unwrap();
    assert_eq!(a.dim(), 7);
    assert_eq!(filtration_dims(&a), [0, 6, 7, 7]);
    let d = decompose_sigma(&a).unwrap();
    assert_eq!(d.counts, [(1, 5), (2, 1)].into());
    assert_eq!(d.height, 2);
}
