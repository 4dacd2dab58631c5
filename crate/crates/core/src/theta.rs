//! The odd operator `Q = ∂_ξ + ξ∂_t` on `k[t] ⊗ Λ[ξ]`, its component
//! matrices, `e^Q` on polynomials, the shift operator, and termwise checks on
//! the formal theta terms `Θ_n = e^{n²t}(1 + nξ)`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::Parity;
use crate::scalar::{binomial, factorial, Scalar};
use crate::superpoly::{FreeSCAlgebra, Monomial, SuperDerivation, SuperPolynomial};

/// `k[t] ⊗ Λ[ξ]` with generators named `t` and `xi`.
pub fn line_algebra() -> Arc<FreeSCAlgebra> {
    FreeSCAlgebra::new(&["t"], &["xi"]).expect("distinct names")
}

fn mono(a: u32, b: bool) -> Monomial {
    Monomial::new(vec![a], if b { &[0] } else { &[] }).expect("valid monomial")
}

/// `Q(t) = ξ`, `Q(ξ) = 1`.
pub fn q_operator(alg: &Arc<FreeSCAlgebra>) -> SuperDerivation {
    let q = SuperDerivation::from_images(alg, Parity::Odd, vec![SuperPolynomial::odd_gen(alg, 0)], vec![SuperPolynomial::one(alg)])
        .expect("parities match");
    let dt = SuperDerivation::partial_even(alg, 0);
    for a in 0..=6 {
        for b in [false, true] {
            let f = SuperPolynomial::monomial(alg, mono(a, b), Scalar::one());
            assert_eq!(q.apply_n(&f, 2).expect("same algebra"), dt.apply(&f).expect("same algebra"), "Q² = ∂_t");
        }
    }
    q
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareCheck {
    pub max_t_degree: u32,
    pub monomials: usize,
    pub passed: bool,
}

/// `Q(Q(t^a ξ^b)) = ∂_t(t^a ξ^b)` for `a ≤ max_t_degree`.
pub fn check_q_squared(max_t_degree: u32) -> SquareCheck {
    let alg = line_algebra();
    let q = q_operator(&alg);
    let dt = SuperDerivation::partial_even(&alg, 0);
    let mut passed = true;
    let mut count = 0;
    for a in 0..=max_t_degree {
        for b in [false, true] {
            count += 1;
            let f = SuperPolynomial::monomial(&alg, mono(a, b), Scalar::one());
            passed &= q.apply_n(&f, 2).expect("same algebra") == dt.apply(&f).expect("same algebra");
        }
    }
    SquareCheck { max_t_degree, monomials: count, passed }
}

/// Polynomial in `∂_t`: `coeffs[k]` multiplies `∂_t^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DtPoly(pub Vec<Scalar>);

impl DtPoly {
    fn trimmed(mut v: Vec<Scalar>) -> Self {
        while v.last().is_some_and(Scalar::is_zero) {
            v.pop();
        }
        DtPoly(v)
    }

    pub fn zero() -> Self {
        DtPoly(Vec::new())
    }

    pub fn monomial(k: usize) -> Self {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = Scalar::one();
        DtPoly(v)
    }

    pub fn add(&self, o: &DtPoly) -> DtPoly {
        let n = self.0.len().max(o.0.len());
        let get = |v: &Vec<Scalar>, i: usize| v.get(i).cloned().unwrap_or_default();
        Self::trimmed((0..n).map(|i| get(&self.0, i) + get(&o.0, i)).collect())
    }

    pub fn mul(&self, o: &DtPoly) -> DtPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return Self::zero();
        }
        let mut v = vec![Scalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        Self::trimmed(v)
    }
}

/// Operator on the free `k[t]`-module with basis `(1, ξ)`; rows are output components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentMatrix(pub [[DtPoly; 2]; 2]);

impl ComponentMatrix {
    pub fn mul(&self, o: &ComponentMatrix) -> ComponentMatrix {
        let e = |i: usize, j: usize| self.0[i][0].mul(&o.0[0][j]).add(&self.0[i][1].mul(&o.0[1][j]));
        ComponentMatrix([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

/// Composition `ops[0] ∘ ops[1] ∘ …` of derivations of the line algebra.
pub fn apply_composite(ops: &[SuperDerivation], f: &SuperPolynomial) -> SuperPolynomial {
    ops.iter().rev().fold(f.clone(), |acc, d| d.apply(&acc).expect("same algebra"))
}

/// Reads off the matrix of a composite operator by probing `t^m` and `t^m ξ`;
/// fails if the coefficients depend on `t`.
pub fn component_matrix(ops: &[SuperDerivation]) -> Result<ComponentMatrix> {
    let alg = line_algebra();
    let order = ops.len() as u32;
    let top = order + 2;
    let mut entries: [[Vec<Scalar>; 2]; 2] = Default::default();
    for (j, odd_in) in [false, true].into_iter().enumerate() {
        let probe = |m: u32| apply_composite(ops, &SuperPolynomial::monomial(&alg, mono(m, odd_in), Scalar::one()));
        let image = probe(top);
        for (i, odd_out) in [false, true].into_iter().enumerate() {
            let coeffs: Vec<Scalar> = (0..=top)
                .map(|k| {
                    let c = image.coefficient(&mono(top - k, odd_out));
                    let falling = &factorial(top as u64) / &factorial((top - k) as u64);
                    &c / &falling
                })
                .collect();
            entries[i][j] = coeffs;
        }
        // constant coefficients: the same symbol must describe every lower probe
        for m in 0..top {
            let image = probe(m);
            for (i, odd_out) in [false, true].into_iter().enumerate() {
                for k in 0..=m {
                    let falling = &factorial(m as u64) / &factorial((m - k) as u64);
                    let expected = &entries[i][j][k as usize] * &falling;
                    if image.coefficient(&mono(m - k, odd_out)) != expected {
                        return Err(Error::Unsupported("operator does not have constant coefficients in t".into()));
                    }
                }
            }
        }
    }
    let [[a, b], [c, d]] = entries;
    Ok(ComponentMatrix([[DtPoly::trimmed(a), DtPoly::trimmed(b)], [DtPoly::trimmed(c), DtPoly::trimmed(d)]]))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpQ {
    pub value: SuperPolynomial,
    /// Number of nonzero terms `Q^k f / k!` summed.
    pub terms: usize,
}

/// `e^Q f = Σ Q^k f / k!`, a finite sum since `Q² = ∂_t`.
pub fn exp_q(f: &SuperPolynomial) -> ExpQ {
    let alg = f.algebra().clone();
    let q = q_operator(&alg);
    let mut value = SuperPolynomial::zero(&alg);
    let mut cur = f.clone();
    let mut k = 0u64;
    while !cur.is_zero() {
        value = &value + &cur.scale(&factorial(k).inv().expect("nonzero"));
        cur = q.apply(&cur).expect("same algebra");
        k += 1;
    }
    ExpQ { value, terms: k as usize }
}

/// `f(t + 1)` for `f = Σ coeffs[i] t^i`, by binomial substitution.
pub fn shift_op(coeffs: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); coeffs.len()];
    for (i, c) in coeffs.iter().enumerate() {
        for (j, o) in out.iter_mut().enumerate().take(i + 1) {
            *o += &(c * &binomial(i as u64, j as u64));
        }
    }
    out
}

/// `Σ_k f^{(k)}(t) / k!` computed with the derivation `∂_t`.
pub fn taylor_shift(coeffs: &[Scalar]) -> Vec<Scalar> {
    let alg = line_algebra();
    let dt = SuperDerivation::partial_even(&alg, 0);
    let f = SuperPolynomial::from_terms(&alg, coeffs.iter().enumerate().map(|(i, c)| (mono(i as u32, false), c.clone())));
    let mut acc = SuperPolynomial::zero(&alg);
    let mut cur = f;
    let mut k = 0u64;
    while !cur.is_zero() {
        acc = &acc + &cur.scale(&factorial(k).inv().expect("nonzero"));
        cur = dt.apply(&cur).expect("same algebra");
        k += 1;
    }
    (0..coeffs.len()).map(|i| acc.coefficient(&mono(i as u32, false))).collect()
}

/// `e^{a t}(c₀ + c₁ξ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpTerm {
    pub t_exponent: Scalar,
    pub even: Scalar,
    pub odd: Scalar,
}

impl ExpTerm {
    /// `Q(e^{at}(c₀ + c₁ξ)) = e^{at}(c₁ + a c₀ ξ)`.
    pub fn apply_q(&self) -> ExpTerm {
        ExpTerm { t_exponent: self.t_exponent.clone(), even: self.odd.clone(), odd: &self.t_exponent * &self.even }
    }

    pub fn apply_dt(&self) -> ExpTerm {
        ExpTerm { t_exponent: self.t_exponent.clone(), even: &self.t_exponent * &self.even, odd: &self.t_exponent * &self.odd }
    }

    pub fn scale(&self, c: &Scalar) -> ExpTerm {
        ExpTerm { t_exponent: self.t_exponent.clone(), even: &self.even * c, odd: &self.odd * c }
    }

    /// Taylor polynomial of the term through `t`-degree `degree`.
    pub fn truncate(&self, alg: &Arc<FreeSCAlgebra>, degree: u32) -> SuperPolynomial {
        let mut terms = Vec::new();
        for m in 0..=degree {
            let c = &self.t_exponent.pow(m) / &factorial(m as u64);
            terms.push((mono(m, false), &c * &self.even));
            terms.push((mono(m, true), &c * &self.odd));
        }
        SuperPolynomial::from_terms(alg, terms)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaTerm {
    pub n: i64,
    pub t_exponent: i64,
    pub x_eigenvalue: i64,
    pub odd_coefficient: Scalar,
    pub eigen_ok: bool,
    pub heat_ok: bool,
    pub periodicity_ok: bool,
    /// `1 + nξ` and `1 + (n+1)ξ` differ, so the odd part does not follow the reindexing.
    pub odd_reindex_mismatch: bool,
}

const TRUNCATION: u32 = 6;

/// Exponent `a·t + b·x + c·ω` of a formal term, with `ω` standing for `2πi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Exponent {
    t: i64,
    x: i64,
    omega: i64,
}

impl Exponent {
    /// Substitutes `x ↦ x + dt·t + dω·ω`.
    fn substitute_x(self, dt: i64, domega: i64) -> Self {
        Exponent { t: self.t + self.x * dt, x: self.x, omega: self.omega + self.x * domega }
    }

    fn times(self, o: Self) -> Self {
        Exponent { t: self.t + o.t, x: self.x + o.x, omega: self.omega + o.omega }
    }

    fn at_x0(self) -> Self {
        Exponent { x: 0, ..self }
    }

    /// `e^{kω} = 1` for every integer `k`; all coefficients here are integers.
    fn reduce_omega(self) -> Self {
        Exponent { omega: 0, ..self }
    }
}

/// Builds `Θ_n` and checks `QΘ_n = nΘ_n`, `∂_tΘ_n = n²Θ_n`, and the exponent identities.
pub fn theta_term(n: i64) -> ThetaTerm {
    let term = ExpTerm { t_exponent: Scalar::from_int(n * n), even: Scalar::one(), odd: Scalar::from_int(n) };
    let nn = Scalar::from_int(n);
    let symbolic_eigen = term.apply_q() == term.scale(&nn);
    // independent check on the Taylor truncation: QΘ − nΘ only has terms of t-degree ≥ TRUNCATION
    let alg = line_algebra();
    let q = q_operator(&alg);
    let trunc = term.truncate(&alg, TRUNCATION);
    let diff = &q.apply(&trunc).expect("same algebra") - &trunc.scale(&nn);
    let truncated_eigen = diff.terms().keys().all(|m| m.even_exponents()[0] >= TRUNCATION);
    let heat_ok = term.apply_dt() == term.apply_q().apply_q() && term.apply_dt() == term.scale(&(&nn * &nn));
    // e^{n²t + n(x + 2t)} against e^{−t−x}·e^{(n+1)²t + (n+1)x}, even parts at x = 0
    let shifted = Exponent { t: n * n, x: n, omega: 0 }.substitute_x(2, 0).at_x0();
    let next = Exponent { t: (n + 1) * (n + 1), x: n + 1, omega: 0 }.times(Exponent { t: -1, x: -1, omega: 0 }).at_x0();
    // x ↦ x + ω with the formal rule e^{kω} = 1 for integer k
    let periodic = Exponent { t: n * n, x: n, omega: 0 }.substitute_x(0, 1).reduce_omega();
    let periodicity_ok = shifted == next && periodic == Exponent { t: n * n, x: n, omega: 0 };
    let odd_reindex_mismatch = Scalar::from_int(n + 1) != nn;
    ThetaTerm {
        n,
        t_exponent: n * n,
        x_eigenvalue: n,
        odd_coefficient: nn,
        eigen_ok: symbolic_eigen && truncated_eigen,
        heat_ok,
        periodicity_ok,
        odd_reindex_mismatch,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaSweep {
    pub n_max: i64,
    pub count: usize,
    pub passed: bool,
    pub terms: Vec<ThetaTerm>,
}

pub fn theta_sweep(n_max: i64) -> Result<ThetaSweep> {
    if n_max < 1 {
        return Err(Error::Precondition("sweep bound must be at least 1".into()));
    }
    let terms: Vec<ThetaTerm> = (-n_max..=n_max).map(theta_term).collect();
    let passed = terms.iter().all(|t| t.eigen_ok && t.heat_ok && t.periodicity_ok);
    Ok(ThetaSweep { n_max, count: terms.len(), passed, terms })
}

/// Polynomials `f`, `g` with `e^Q(fg) ≠ e^Q(f)e^Q(g)`, searched among `t^a ξ^b`.
pub fn non_homomorphism_witness() -> Option<(SuperPolynomial, SuperPolynomial)> {
    let alg = line_algebra();
    let basis: Vec<SuperPolynomial> = (0..3)
        .flat_map(|a| [false, true].map(|b| SuperPolynomial::monomial(&alg, mono(a, b), Scalar::one())))
        .collect();
    for f in &basis {
        for g in &basis {
            if exp_q(&(f * g)).value != &exp_q(f).value * &exp_q(g).value {
                return Some((f.clone(), g.clone()));
            }
        }
    }
    None
}
