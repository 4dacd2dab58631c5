use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superq_core::catalog::{quadratic, QUADRATIC_NAMES};
use superq_core::linalg::{sparse_from_dense, Matrix};
use superq_core::quadratic::{monomials, random_quadratic_space, Limits, QuadraticSpace, SliceResult};
use superq_core::Scalar;

fn lim() -> Limits {
    Limits::default()
}

/// Dense rank of the degree-3 ideal span `B · I₂` inside `Sym³`.
fn dense_degree3(space: &QuadraticSpace) -> u64 {
    let n = space.dim_b();
    let cubes = monomials(n, 3);
    let mut rows = Vec::new();
    for a in 0..n {
        for q in &space.quadric_equations().generators {
            let mut row = vec![Scalar::zero(); cubes.len()];
            for (i, j, c) in &q.terms {
                let mut m = vec![a as u8, *i as u8, *j as u8];
                m.sort_unstable();
                let col = cubes.iter().position(|x| *x == m).unwrap();
                row[col] += c;
            }
            rows.push(row);
        }
    }
    (cubes.len() - Matrix::from_rows(rows).rank()) as u64
}

#[test]
fn d10_degree3_matches_dense_elimination() {
    let s = quadratic("d10-n10").unwrap();
    assert_eq!(dense_degree3(&s), 672);
    assert_eq!(s.hilbert_series(3, &lim()).unwrap().coefficients[3], 672);
}

#[test]
fn d4_matches_monomial_count_on_two_planes() {
    // R = k[s, s'] / (s_i s'_j): surviving monomials are pure in s or pure in s'
    let s = quadratic("d4-n11").unwrap();
    let h = s.hilbert_series(5, &lim()).unwrap().coefficients;
    for d in 0..=5usize {
        let count = monomials(4, d).iter().filter(|m| m.iter().all(|&v| v < 2) || m.iter().all(|&v| v >= 2)).count();
        assert_eq!(h[d], count as u64, "degree {d}");
    }
}

/// Coefficients of `1 / h(−t)` through degree `n`.
fn inverse_alternating(h: &[u64], n: usize) -> Vec<i128> {
    let a: Vec<i128> = (0..=n).map(|i| if i % 2 == 0 { h[i] as i128 } else { -(h[i] as i128) }).collect();
    let mut inv = vec![0i128; n + 1];
    inv[0] = 1;
    for d in 1..=n {
        inv[d] = -(1..=d).map(|i| a[i] * inv[d - i]).sum::<i128>();
    }
    inv
}

/// Peels PBW factors off a series by dividing, rather than multiplying.
fn peel_lie_dims(series: &[i128]) -> Vec<i128> {
    let n = series.len() - 1;
    let mut cur = series.to_vec();
    let mut dims = Vec::new();
    for d in 1..=n {
        let l = cur[d];
        dims.push(l);
        for _ in 0..l {
            if d % 2 == 1 {
                // divide by (1 + t^d)
                for i in d..=n {
                    cur[i] -= cur[i - d];
                }
            } else {
                // multiply by (1 − t^d)
                for i in (d..=n).rev() {
                    cur[i] -= cur[i - d];
                }
            }
        }
    }
    dims
}

#[test]
fn d10_lie_dims_by_series_inversion() {
    let s = quadratic("d10-n10").unwrap();
    let h = s.hilbert_series(3, &lim()).unwrap().coefficients;
    let dual = inverse_alternating(&h, 3);
    assert_eq!(dual, vec![1, 16, 130, 736]);
    assert_eq!(peel_lie_dims(&dual), vec![16, 10, 16]);
    let computed = s.lie_dims(3, &lim()).unwrap().dims;
    assert_eq!(computed.iter().map(|&x| x as i128).collect::<Vec<_>>(), peel_lie_dims(&dual));
}

fn ci_and_lie_agree(s: &QuadraticSpace) {
    let ci = s.is_complete_intersection(4, &lim()).unwrap().is_ci;
    let lie = s.lie_dims(4, &lim()).unwrap().dims;
    assert_eq!(ci, lie[2] == 0 && lie[3] == 0, "{}: lie dims {:?}", s.name(), lie);
}

#[test]
fn ci_iff_lie_vanishing_on_catalog() {
    for name in QUADRATIC_NAMES {
        ci_and_lie_agree(&quadratic(name).unwrap());
    }
}

#[test]
fn ci_iff_lie_vanishing_on_random_spaces() {
    for seed in 0..20u64 {
        let dim_b = 2 + (seed % 5) as usize;
        let dim_v = 1 + (seed / 5 % 3) as usize;
        let s = random_quadratic_space(dim_b, dim_v, seed).unwrap();
        ci_and_lie_agree(&s);
        assert!(s.koszul_witness(3, &lim()).unwrap().sums.len() == 3);
    }
}

/// Three quadrics in three variables meeting in one point of P²: not a complete
/// intersection, yet no Lie dimensions appear past degree 2. The dual is not the
/// Koszul dual, so the vanishing criterion needs Koszulness.
#[test]
fn non_koszul_space_escapes_the_lie_criterion() {
    let s = random_quadratic_space(3, 3, 2).unwrap();
    assert!(!s.is_complete_intersection(4, &lim()).unwrap().is_ci);
    assert!(!s.koszul_witness(4, &lim()).unwrap().passed);
    let lie = s.lie_dims(6, &lim()).unwrap().dims;
    assert!(lie[2..].iter().all(|&d| d == 0), "{lie:?}");
}

#[test]
fn random_susy_algebras_validate() {
    for seed in 100..120u64 {
        let s = random_quadratic_space(4, 3, seed).unwrap();
        let t = s.susy_algebra();
        assert!(t.validate().passed);
        assert_eq!(format!("{:?}", t.nilpotency_class(4)), "Class(2)");
    }
}

#[test]
fn d10_supercharges() {
    let s = quadratic("d10-n10").unwrap();
    let r = s.susy_vector_fields().check_homomorphism(&s);
    assert!(r.passed);
}

#[test]
fn maurer_cartan_points_square_to_zero() {
    let s = quadratic("d4-n11").unwrap();
    let t = s.susy_algebra();
    let b = vec![(0, Scalar::from_int(2)), (1, Scalar::from_int(-3))];
    assert!(s.gamma_bilinear(&[Scalar::from_int(2), Scalar::from_int(-3), Scalar::zero(), Scalar::zero()], &[Scalar::from_int(2), Scalar::from_int(-3), Scalar::zero(), Scalar::zero()]).iter().all(Scalar::is_zero));
    assert!(t.bracket(&b, &b).is_empty());
}

#[test]
fn random_twelve_dimensional_d10_slice_is_not_ci() {
    let s = quadratic("d10-n10").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let vectors: Vec<Vec<Scalar>> =
        (0..12).map(|_| (0..16).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect()).collect();
    assert!(!s.is_null_subalgebra(&vectors, 3, &lim()).unwrap());
}

fn e(n: usize, k: usize) -> Vec<Scalar> {
    (0..n).map(|i| Scalar::from_int(i64::from(i == k))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn slice_of_slice(seed in any::<u64>()) {
        let s = random_quadratic_space(5, 3, seed % 1000).unwrap();
        // B' = first four coordinates, B'' = first two
        let outer: Vec<Vec<Scalar>> = (0..4).map(|k| e(5, k)).collect();
        let inner_in_b: Vec<Vec<Scalar>> = (0..2).map(|k| e(5, k)).collect();
        let inner_in_outer: Vec<Vec<Scalar>> = (0..2).map(|k| e(4, k)).collect();
        let direct = s.slice(&inner_in_b).unwrap();
        let nested = match s.slice(&outer).unwrap() {
            SliceResult::Space(sp) => sp.slice(&inner_in_outer).unwrap(),
            SliceResult::Abelian { .. } => SliceResult::Abelian { dim_b: 2 },
        };
        prop_assert_eq!(direct.dim_v(), nested.dim_v());
        if let (SliceResult::Space(a), SliceResult::Space(b)) = (&direct, &nested) {
            prop_assert_eq!(a.hilbert_series(4, &lim()).unwrap(), b.hilbert_series(4, &lim()).unwrap());
        }
    }

    #[test]
    fn more_quadrics_never_increase_the_series(seed in any::<u64>()) {
        let s = random_quadratic_space(4, 3, seed % 1000).unwrap();
        // drop the last V coordinate: the ideal loses one generator
        let json = s.to_json();
        let entries = json.gamma.iter().map(|g| (g.i - 1, g.j - 1, sparse_from_dense(&g.v[..2]))).filter(|x| !x.2.is_empty()).collect();
        let smaller = QuadraticSpace::new("drop", 4, 2, entries).unwrap();
        let big = s.hilbert_series(4, &lim()).unwrap().coefficients;
        let small = smaller.hilbert_series(4, &lim()).unwrap().coefficients;
        prop_assert!(big.iter().zip(&small).all(|(b, s)| b <= s));
    }

    #[test]
    fn canonical_key_ignores_entry_order(seed in any::<u64>()) {
        let s = random_quadratic_space(4, 2, seed % 1000).unwrap();
        let mut json = s.to_json();
        json.gamma.reverse();
        json.name = "renamed".into();
        prop_assert_eq!(QuadraticSpace::from_json(&json).unwrap().canonical_key(), s.canonical_key());
    }
}
