use proptest::prelude::*;
use superq_core::graded::{koszul_sign, Parity, Sign};
use superq_core::picard::{
    as_sign, braiding_sign, commutator_under_rechoice, equivalent, find_splitting, free_picard, picard_by_name,
    spin_cocycle, spin_cocycle_with, Lift,
};
use superq_core::superpoly::{SuperDerivation, SuperPolynomial};
use superq_core::theta::{
    check_q_squared, component_matrix, exp_q, line_algebra, non_homomorphism_witness, q_operator, shift_op,
    taylor_shift, theta_sweep,
};
use superq_core::Scalar;

fn power(l: &Lift, k: usize) -> Lift {
    (0..k).fold(Lift::one(), |acc, _| acc.mul(l))
}

/// Coxeter relations of the double cover, checked on the Clifford lifts directly.
#[test]
fn lifts_satisfy_the_twisted_coxeter_relations() {
    let t: Vec<Lift> = (0..5).map(Lift::transposition).collect();
    for i in 0..5 {
        assert_eq!(power(&t[i], 2), Lift::one());
        for j in 0..5 {
            // transpositions lift to involutions, so braids close up and distant lifts anticommute
            match i.abs_diff(j) {
                0 => {}
                1 => assert_eq!(power(&t[i].mul(&t[j]), 3), Lift::one(), "t{i} t{j}"),
                _ => assert_eq!(power(&t[i].mul(&t[j]), 2), Lift::one().neg(), "t{i} t{j}"),
            }
        }
    }
}

#[test]
fn cocycle_identity_and_commutator() {
    let t = spin_cocycle(4).unwrap();
    let c = t.verify();
    assert!(c.passed);
    assert_eq!(c.triples, 13824);
    let g = t.index_of(&[1, 0, 2, 3]).unwrap();
    let h = t.index_of(&[0, 1, 3, 2]).unwrap();
    assert_eq!(t.commutator_sign(g, h).unwrap(), Sign::Minus);
    let signs = commutator_under_rechoice(4, &[1, 0, 2, 3], &[0, 1, 3, 2], 10, 5).unwrap();
    assert!(signs.iter().all(|s| *s == Sign::Minus));
    // a re-chosen section changes the cocycle by a coboundary, never the identity
    let flips: Vec<bool> = (0..24).map(|i| i % 3 == 1).collect();
    assert!(spin_cocycle_with(4, Some(&flips)).unwrap().verify().passed);
    assert!(find_splitting(&spin_cocycle(3).unwrap()).unwrap().is_some());
}

#[test]
fn picard_examples() {
    let f = free_picard();
    for m in -10i64..=10 {
        for n in -10i64..=10 {
            let s = as_sign(&f, &braiding_sign(&f, m, n).unwrap()).unwrap();
            let parity = |k: i64| if k.rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd };
            assert_eq!(s, koszul_sign(parity(m), parity(n)));
        }
    }
    let a = picard_by_name("omega-tau12").unwrap();
    let b = picard_by_name("tau01-mod2").unwrap();
    assert!(equivalent(&a, &b).unwrap());
    let zero = picard_by_name("z2-z2-zero").unwrap();
    let id = picard_by_name("tau01-mod2").unwrap();
    assert!(!equivalent(&zero, &id).unwrap());
}

#[test]
fn theta_suite() {
    assert!(check_q_squared(10).passed);
    let alg = line_algebra();
    let t = SuperPolynomial::var(&alg, "t").unwrap();
    assert_eq!(exp_q(&t).value, SuperPolynomial::parse(&alg, "t + xi + 1/2").unwrap());
    let (f, g) = non_homomorphism_witness().unwrap();
    assert_ne!(exp_q(&(&f * &g)).value, &exp_q(&f).value * &exp_q(&g).value);
    let sweep = theta_sweep(20).unwrap();
    assert!(sweep.passed && sweep.count == 41);
    assert!(sweep.terms.iter().all(|t| t.odd_reindex_mismatch));
}

#[test]
fn component_matrices_compose() {
    let alg = line_algebra();
    let q = q_operator(&alg);
    let dt = SuperDerivation::partial_even(&alg, 0);
    let ops = [vec![q.clone()], vec![dt.clone()], vec![q.clone(), q.clone()], vec![q.clone(), dt.clone()]];
    for a in &ops {
        for b in &ops {
            let joined: Vec<SuperDerivation> = a.iter().chain(b).cloned().collect();
            let lhs = component_matrix(&joined).unwrap();
            let rhs = component_matrix(a).unwrap().mul(&component_matrix(b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}

proptest! {
    #[test]
    fn shift_matches_taylor(coeffs in proptest::collection::vec(-20i64..=20, 0..=9)) {
        let c: Vec<Scalar> = coeffs.into_iter().map(Scalar::from_int).collect();
        prop_assert_eq!(shift_op(&c), taylor_shift(&c));
    }

    #[test]
    fn exp_q_is_linear(a in -5i64..=5, b in -5i64..=5, seed in any::<u64>()) {
        let alg = line_algebra();
        let mut sampler = superq_core::superpoly::PolySampler::new(seed);
        let f = sampler.polynomial(&alg, None);
        let g = sampler.polynomial(&alg, None);
        let (a, b) = (Scalar::from_int(a), Scalar::from_int(b));
        let lhs = exp_q(&(&f.scale(&a) + &g.scale(&b))).value;
        let rhs = &exp_q(&f).value.scale(&a) + &exp_q(&g).value.scale(&b);
        prop_assert_eq!(lhs, rhs);
    }
}
