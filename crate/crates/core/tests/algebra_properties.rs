use evolia_core::{Element, EvolutionAlgebra, Ring};
use proptest::prelude::*;

fn algebra_and_elements(modulus: u64, n: usize) -> impl Strategy<Value = (EvolutionAlgebra, Vec<Element>)> {
    let entries = proptest::collection::vec(0..modulus as i64, n * n);
    let elems = proptest::collection::vec(proptest::collection::vec(0..modulus as i64, n), 3);
    (entries, elems).prop_map(move |(cs, es)| {
        let r = Ring::modular(modulus).unwrap();
        let cols: Vec<&[i64]> = cs.chunks(n).collect();
        let a = EvolutionAlgebra::from_int_columns(&r, &cols).unwrap();
        let es = es.iter().map(|e| a.element_from_ints(e).unwrap()).collect();
        (a, es)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn multiplication_is_commutative_and_bilinear((a, es) in (2usize..5).prop_flat_map(|n| algebra_and_elements(36, n))) {
        let (x, y, z) = (&es[0], &es[1], &es[2]);
        prop_assert_eq!(a.multiply(x, y).unwrap(), a.multiply(y, x).unwrap());
        let lhs = a.multiply(x, &a.add(y, z).unwrap()).unwrap();
        let rhs = a.add(&a.multiply(x, y).unwrap(), &a.multiply(x, z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let k = a.ring().from_i64(7);
        prop_assert_eq!(
            a.multiply(&a.scale(&k, x).unwrap(), y).unwrap(),
            a.scale(&k, &a.multiply(x, y).unwrap()).unwrap()
        );
    }

    #[test]
    fn basis_products((a, _) in (1usize..5).prop_flat_map(|n| algebra_and_elements(12, n))) {
        let n = a.dimension();
        for i in 0..n {
            for j in 0..n {
                let p = a.multiply(&a.basis(i), &a.basis(j)).unwrap();
                if i == j {
                    prop_assert_eq!(p.coeffs().to_vec(), a.structure().column(i));
                } else {
                    prop_assert!(p.is_zero());
                }
            }
        }
    }

    #[test]
    fn power_formula_matches_iterated_products((a, es) in (1usize..4).prop_flat_map(|n| algebra_and_elements(36, n)), k in 1usize..12) {
        let x = &es[0];
        let mut iterated = x.clone();
        for _ in 1..k {
            iterated = a.multiply(&iterated, x).unwrap();
        }
        prop_assert_eq!(a.principal_power(x, k).unwrap(), iterated);
        // The left multiplication operator is C_alpha.
        let l = a.left_mult_matrix(x).unwrap();
        let y = &es[1];
        prop_assert_eq!(l.mul_vec(y.coeffs()).unwrap(), a.multiply(x, y).unwrap().coeffs().to_vec());
    }

    #[test]
    fn plenary_powers_square((a, es) in (1usize..4).prop_flat_map(|n| algebra_and_elements(8, n)), k in 1usize..8) {
        let x = &es[0];
        let prev = if k == 1 { x.clone() } else { a.plenary_power(x, k - 1).unwrap() };
        prop_assert_eq!(a.plenary_power(x, k).unwrap(), a.multiply(&prev, &prev).unwrap());
    }

    #[test]
    fn reordering_preserves_products((a, es) in (2usize..5).prop_flat_map(|n| algebra_and_elements(10, n)), seed in any::<u64>()) {
        let n = a.dimension();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let b = a.reordered(&perm).unwrap();
        // Coordinates move with the basis: new x_r is old x_perm[r].
        let relabel = |e: &Element| b.element(perm.iter().map(|&p| e.coeffs()[p].clone()).collect()).unwrap();
        let p = a.multiply(&es[0], &es[1]).unwrap();
        prop_assert_eq!(relabel(&p), b.multiply(&relabel(&es[0]), &relabel(&es[1])).unwrap());
    }
}

#[test]
fn example_products() {
    let r = Ring::modular(36).unwrap();
    let a = EvolutionAlgebra::from_int_columns(&r, &[&[6, 2], &[2, 12]]).unwrap();
    let x = a.element_from_ints(&[1, 1]).unwrap();
    assert_eq!(a.multiply(&x, &x).unwrap().to_string(), "8x1+14x2");
    assert_eq!(a.principal_power(&x, 1).unwrap(), x);
    assert!(a.principal_power(&x, 0).is_err());
}
