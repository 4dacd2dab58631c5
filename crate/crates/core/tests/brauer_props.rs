use superq_core::graded::SuperDimension;
use superq_core::wall_brauer::{
    brauer_table, clifford_n, matrix_superalgebra, queer_superalgebra, tensor_superalgebras, FiniteSuperAlgebra,
    WallType,
};
use superq_core::Scalar;

fn sd(even: usize, odd: usize) -> SuperDimension {
    SuperDimension { even, odd }
}

#[test]
fn supercenters_up_to_three() {
    for p in 0..=3 {
        for q in 0..=3 {
            if p + q == 0 {
                continue;
            }
            let c = matrix_superalgebra::<Scalar>(p, q).unwrap().supercenter();
            assert!(c.verified);
            assert_eq!(c.superdim, sd(1, 0), "M({p}|{q})");
        }
    }
    for n in 1..=3 {
        let c = queer_superalgebra::<Scalar>(n).unwrap().supercenter();
        assert!(c.verified);
        assert_eq!(c.superdim, sd(1, 1), "Q({n})");
    }
}

#[test]
fn sweep_to_two() {
    let t = brauer_table(2, 2, 2).unwrap();
    assert!(t.all_ok && t.type_law_is_z2);
    assert_eq!(t.cells.len(), t.algebras.len().pow(2));
}

/// Clifford algebras give an independent route to the type law: Cliff_n is M-type iff n is even.
#[test]
fn clifford_types_follow_parity() {
    let cl: Vec<FiniteSuperAlgebra<Scalar>> = (1..=4).map(|n| clifford_n(n).unwrap()).collect();
    for (i, a) in cl.iter().enumerate() {
        let expected = if (i + 1) % 2 == 0 { WallType::M } else { WallType::Q };
        assert_eq!(a.wall_type(), expected, "Cliff{}", i + 1);
    }
    let t = tensor_superalgebras(&cl[0], &cl[0]);
    assert_eq!((t.superdim(), t.wall_type()), (cl[1].superdim(), WallType::M));
}

#[test]
fn tensor_products_associate() {
    let algs = [matrix_superalgebra::<Scalar>(1, 1).unwrap(), queer_superalgebra(1).unwrap(), clifford_n(1).unwrap()];
    for a in &algs {
        for b in &algs {
            for c in &algs {
                let l = tensor_superalgebras(&tensor_superalgebras(a, b), c);
                let r = tensor_superalgebras(a, &tensor_superalgebras(b, c));
                assert_eq!(l.superdim(), r.superdim());
                assert_eq!(l.wall_type(), r.wall_type());
                l.validate_associative().unwrap();
            }
        }
    }
}
