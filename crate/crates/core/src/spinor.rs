//! Spinors for the split form on `V = W ⊕ W*` in dimensions 2, 4 and 10.
//!
//! `S = Λ(W)` with `w` acting by wedge and `w*` by contraction. The Gram
//! matrix is `B(w_i, w*_j) = ½δ_ij`, so that `v·v·s = q(v)s` with
//! `q(v) = B(v, v)`. Spinors are dense vectors indexed by subset bitmasks;
//! vectors of `V` are dense in the order `w_1..w_k, w*_1..w*_k`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::Parity;
use crate::lie_super::LieSuperAlgebra;
use crate::linalg::{sparse_from_dense, Echelon, Matrix, SparseVec};
use crate::quadratic::{QuadraticSpace, SliceResult};
use crate::scalar::Scalar;

/// Deliberate defects for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Perturbation {
    None,
    /// `w*` acts by minus the contraction.
    ContractionSign,
    /// One entry of the pairing changes sign.
    Beta,
}

#[derive(Clone, Debug)]
pub struct SpinorModel {
    d: usize,
    k: usize,
    perturbation: Perturbation,
    /// Bitmasks of `S₊` and `S₋` in increasing order.
    plus: Vec<usize>,
    minus: Vec<usize>,
    /// `gamma[s * 2^k + t]` = `Γ(e_s, e_t)` as a dense vector in `V`.
    gamma: Vec<Vec<Scalar>>,
}

fn below(mask: usize, i: usize) -> u32 {
    (mask & ((1usize << i) - 1)).count_ones()
}

fn sign(parity_count: u32) -> Scalar {
    if parity_count.is_multiple_of(2) {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

/// Build and verify the model; `d ∈ {2, 4, 10}`.
pub fn build_spinor_model(d: usize) -> Result<SpinorModel> {
    let m = build_perturbed(d, Perturbation::None)?;
    let clifford = m.clifford_basis_check();
    if let Some(c) = clifford {
        return Err(Error::Inconsistency(format!("Clifford identity fails: {c}")));
    }
    if let Some((s, t)) = m.gamma_asymmetry() {
        return Err(Error::Inconsistency(format!("Γ is not symmetric at ({s}, {t})")));
    }
    if m.gamma_rank() != d {
        return Err(Error::Inconsistency("Γ is not surjective".into()));
    }
    Ok(m)
}

/// Same construction without the verification step.
pub fn build_perturbed(d: usize, perturbation: Perturbation) -> Result<SpinorModel> {
    if !matches!(d, 2 | 4 | 10) {
        return Err(Error::Unsupported(format!("spinor model for d = {d}; supported: 2, 4, 10")));
    }
    let k = d / 2;
    let n = 1usize << k;
    let plus = (0..n).filter(|m| m.count_ones() % 2 == 0).collect();
    let minus = (0..n).filter(|m| m.count_ones() % 2 == 1).collect();
    let mut model = SpinorModel { d, k, perturbation, plus, minus, gamma: Vec::new() };
    let mut gamma = Vec::with_capacity(n * n);
    for s in 0..n {
        for t in 0..n {
            gamma.push(model.gamma_basis_from_beta(s, t));
        }
    }
    model.gamma = gamma;
    Ok(model)
}

impl SpinorModel {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn spinor_dim(&self) -> usize {
        1 << self.k
    }

    /// Bitmasks spanning `S₊` (even subsets).
    pub fn plus_basis(&self) -> &[usize] {
        &self.plus
    }

    pub fn minus_basis(&self) -> &[usize] {
        &self.minus
    }

    pub fn v_names(&self) -> Vec<String> {
        let mut out: Vec<String> = (1..=self.k).map(|i| format!("w{i}")).collect();
        out.extend((1..=self.k).map(|i| format!("w{i}*")));
        out
    }

    pub fn spinor_name(&self, mask: usize) -> String {
        let digits: String = (0..self.k).filter(|i| mask >> i & 1 == 1).map(|i| char::from(b'1' + i as u8)).collect();
        format!("s{digits}")
    }

    /// `B(u, v) = ½ Σ (u_i v*_i + u*_i v_i)`.
    pub fn bilinear(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let k = self.k;
        let mut acc = Scalar::zero();
        for i in 0..k {
            acc += &(&u[i] * &v[k + i]);
            acc += &(&u[k + i] * &v[i]);
        }
        acc * Scalar::new(1, 2)
    }

    pub fn q(&self, v: &[Scalar]) -> Scalar {
        self.bilinear(v, v)
    }

    /// Action of the basis vector `index` of `V` on the basis spinor `mask`.
    fn act_basis(&self, index: usize, mask: usize) -> Option<(usize, Scalar)> {
        if index < self.k {
            let i = index;
            if mask >> i & 1 == 1 {
                return None;
            }
            Some((mask | 1 << i, sign(below(mask, i))))
        } else {
            let i = index - self.k;
            if mask >> i & 1 == 0 {
                return None;
            }
            let mut s = sign(below(mask, i));
            if self.perturbation == Perturbation::ContractionSign {
                s = -s;
            }
            Some((mask & !(1 << i), s))
        }
    }

    /// Clifford multiplication `v·s`.
    pub fn clifford_mult(&self, v: &[Scalar], s: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.spinor_dim()];
        for (a, va) in v.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            for (mask, sm) in s.iter().enumerate() {
                if sm.is_zero() {
                    continue;
                }
                if let Some((m2, c)) = self.act_basis(a, mask) {
                    out[m2] += &(&(va * sm) * &c);
                }
            }
        }
        out
    }

    /// Top coefficient of `α(e_s) ∧ e_t`.
    pub fn beta_basis(&self, s: usize, t: usize) -> Scalar {
        let full = (1usize << self.k) - 1;
        if s & t != 0 || s | t != full {
            return Scalar::zero();
        }
        let r = s.count_ones();
        // reordering e_s e_t into increasing order
        let inversions: u32 = (0..self.k).filter(|i| t >> i & 1 == 1).map(|i| (s >> i).count_ones()).sum();
        // reversal for odd k; for even k the reversal makes the symmetrized Γ
        // vanish on S₊⊗S₋, so the conjugation twist (one more factor (−1)^r) is used
        let twist = if self.k % 2 == 1 { r * r.saturating_sub(1) / 2 } else { r * (r + 1) / 2 };
        let mut c = sign(twist + inversions);
        if self.perturbation == Perturbation::Beta && s == 0 {
            c = -c;
        }
        c
    }

    pub fn beta(&self, s: &[Scalar], t: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (a, x) in s.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let b = ((1usize << self.k) - 1) ^ a;
            if !t[b].is_zero() {
                acc += &(&(x * &t[b]) * &self.beta_basis(a, b));
            }
        }
        acc
    }

    fn basis_spinor(&self, mask: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.spinor_dim()];
        v[mask] = Scalar::one();
        v
    }

    fn basis_vector(&self, index: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.d];
        v[index] = Scalar::one();
        v
    }

    fn gamma_basis_from_beta(&self, s: usize, t: usize) -> Vec<Scalar> {
        let (es, et) = (self.basis_spinor(s), self.basis_spinor(t));
        let k = self.k;
        let mut out = vec![Scalar::zero(); self.d];
        for i in 0..self.d {
            let e = self.basis_vector(i);
            let val = self.beta(&es, &self.clifford_mult(&e, &et)) + self.beta(&et, &self.clifford_mult(&e, &es));
            // B(Γ, w_i) is half the w*_i coordinate and vice versa
            let target = if i < k { k + i } else { i - k };
            out[target] = val;
        }
        out
    }

    /// `Γ(s, t)` for dense spinors.
    pub fn gamma(&self, s: &[Scalar], t: &[Scalar]) -> Vec<Scalar> {
        let n = self.spinor_dim();
        let mut out = vec![Scalar::zero(); self.d];
        for (a, x) in s.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in t.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = x * y;
                for (o, g) in out.iter_mut().zip(&self.gamma[a * n + b]) {
                    if !g.is_zero() {
                        *o += &(&c * g);
                    }
                }
            }
        }
        out
    }

    pub fn gamma_basis(&self, s: usize, t: usize) -> &[Scalar] {
        &self.gamma[s * self.spinor_dim() + t]
    }

    fn gamma_asymmetry(&self) -> Option<(usize, usize)> {
        let n = self.spinor_dim();
        for s in 0..n {
            for t in s + 1..n {
                if self.gamma_basis(s, t) != self.gamma_basis(t, s) {
                    return Some((s, t));
                }
            }
        }
        None
    }

    fn gamma_rank(&self) -> usize {
        let mut e = Echelon::new(self.d);
        for g in &self.gamma {
            e.insert(sparse_from_dense(g));
        }
        e.rank()
    }

    fn clifford_basis_check(&self) -> Option<String> {
        let n = self.spinor_dim();
        for a in 0..self.d {
            for b in a..self.d {
                let (ea, eb) = (self.basis_vector(a), self.basis_vector(b));
                let two_b = self.bilinear(&ea, &eb) * Scalar::from_int(2);
                for mask in 0..n {
                    let s = self.basis_spinor(mask);
                    let lhs = add(&self.clifford_mult(&ea, &self.clifford_mult(&eb, &s)), &self.clifford_mult(&eb, &self.clifford_mult(&ea, &s)));
                    let rhs: Vec<Scalar> = s.iter().map(|x| x * &two_b).collect();
                    if lhs != rhs {
                        let names = self.v_names();
                        return Some(format!("e_a = {}, e_b = {}, s = {}", names[a], names[b], self.spinor_name(mask)));
                    }
                }
            }
        }
        None
    }

    /// Exhaustive basis check plus `trials` random `v·v·s = q(v)s` and polarized identities.
    pub fn clifford_check(&self, trials: usize, seed: u64) -> CliffordReport {
        let mut counterexample = self.clifford_basis_check();
        let basis_passed = counterexample.is_none();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0;
        while done < trials && counterexample.is_none() {
            let u = random_dense(&mut rng, self.d, 3);
            let v = random_dense(&mut rng, self.d, 3);
            let s = random_dense(&mut rng, self.spinor_dim(), 3);
            let vvs = self.clifford_mult(&v, &self.clifford_mult(&v, &s));
            let qv = self.q(&v);
            if vvs != s.iter().map(|x| x * &qv).collect::<Vec<_>>() {
                counterexample = Some(format!("v·(v·s) ≠ q(v)s at trial {}", done + 1));
            }
            let lhs = add(&self.clifford_mult(&u, &self.clifford_mult(&v, &s)), &self.clifford_mult(&v, &self.clifford_mult(&u, &s)));
            let two_b = self.bilinear(&u, &v) * Scalar::from_int(2);
            if counterexample.is_none() && lhs != s.iter().map(|x| x * &two_b).collect::<Vec<_>>() {
                counterexample = Some(format!("u·(v·s) + v·(u·s) ≠ 2B(u,v)s at trial {}", done + 1));
            }
            done += 1;
        }
        CliffordReport { d: self.d, trials: done, seed, basis_passed, passed: counterexample.is_none(), counterexample }
    }

    /// `ρ(e_a ∧ e_b) = ¼[γ_a, γ_b]` as a matrix on `S`.
    pub fn rho(&self, a: usize, b: usize) -> Matrix<Scalar> {
        let ga = self.gamma_transpose(&self.basis_vector(a));
        let gb = self.gamma_transpose(&self.basis_vector(b));
        ga.mul(&gb).add(&gb.mul(&ga).scale(&Scalar::from_int(-1))).scale(&Scalar::new(1, 4))
    }

    /// `(e_a ∧ e_b)·x = B(e_b, x) e_a − B(e_a, x) e_b`.
    pub fn omega_on_v(&self, a: usize, b: usize, x: &[Scalar]) -> Vec<Scalar> {
        let (ea, eb) = (self.basis_vector(a), self.basis_vector(b));
        let ca = self.bilinear(&eb, x);
        let cb = self.bilinear(&ea, x);
        let mut out = vec![Scalar::zero(); self.d];
        out[a] += &ca;
        out[b] -= &cb;
        out
    }

    /// `Γ(ρ(ω)s, t) + Γ(s, ρ(ω)t) = ω·Γ(s, t)` for every elementary `ω` and all basis pairs.
    pub fn equivariance_check(&self) -> EquivarianceReport {
        let n = self.spinor_dim();
        let mut checks = 0;
        let mut omegas = 0;
        let mut first_failure = None;
        'outer: for a in 0..self.d {
            for b in a + 1..self.d {
                omegas += 1;
                let rho = self.rho(a, b);
                let images: Vec<Vec<Scalar>> = (0..n).map(|m| rho.column(m)).collect();
                for s in 0..n {
                    for t in s..n {
                        checks += 1;
                        let lhs = add(&self.gamma(&images[s], &self.basis_spinor(t)), &self.gamma(&self.basis_spinor(s), &images[t]));
                        let rhs = self.omega_on_v(a, b, self.gamma_basis(s, t));
                        if lhs != rhs {
                            let names = self.v_names();
                            first_failure = Some(format!(
                                "ω = {}∧{}, s = {}, t = {}",
                                names[a],
                                names[b],
                                self.spinor_name(s),
                                self.spinor_name(t)
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        EquivarianceReport { d: self.d, omegas, checks, passed: first_failure.is_none(), first_failure }
    }

    /// Clifford multiplication by `v` as a matrix on all of `S`; it exchanges `S₊` and `S₋`.
    pub fn gamma_transpose(&self, v: &[Scalar]) -> Matrix<Scalar> {
        let n = self.spinor_dim();
        let mut m = Matrix::zeros(n, n);
        for mask in 0..n {
            let col = self.clifford_mult(v, &self.basis_spinor(mask));
            for (r, x) in col.into_iter().enumerate() {
                if !x.is_zero() {
                    m.set(r, mask, x);
                }
            }
        }
        m
    }

    /// Export `B = S₊^{⊕p} ⊕ S₋^{⊕q}`; copy `a` of `S₊` pairs with copy `a` of `S₋`.
    pub fn to_quadratic_space(&self, p: usize, q: usize) -> Result<QuadraticSpace> {
        if p + q == 0 || p > 4 || q > 4 {
            return Err(Error::Precondition(format!("N = ({p},{q}) is not admissible: need 1 ≤ p + q, p, q ≤ 4")));
        }
        // (chirality, copy, mask)
        let mut slots: Vec<(bool, usize, usize)> = Vec::new();
        for c in 0..p {
            slots.extend(self.plus.iter().map(|&m| (true, c, m)));
        }
        for c in 0..q {
            slots.extend(self.minus.iter().map(|&m| (false, c, m)));
        }
        let multi = p > 1 || q > 1;
        let b_names: Vec<String> = if self.d == 2 {
            slots
                .iter()
                .map(|&(plus, c, _)| {
                    let base = if plus { "Q+" } else { "Q-" };
                    if multi { format!("{base}{}", c + 1) } else { base.to_string() }
                })
                .collect()
        } else {
            slots
                .iter()
                .map(|&(plus, c, m)| {
                    let base = self.spinor_name(m);
                    if multi { format!("{base}{}{}", if plus { "+" } else { "-" }, c + 1) } else { base }
                })
                .collect()
        };
        let mut entries = Vec::new();
        for i in 0..slots.len() {
            for j in i..slots.len() {
                let (_, ci, mi) = slots[i];
                let (_, cj, mj) = slots[j];
                if ci != cj {
                    continue;
                }
                let g = self.to_output_basis(self.gamma_basis(mi, mj));
                let sv = sparse_from_dense(&g);
                if !sv.is_empty() {
                    entries.push((i, j, sv));
                }
            }
        }
        let name = format!("d{}-n{}{}", self.d, p, q);
        let v_names = if self.d == 2 { vec!["H".to_string(), "P".to_string()] } else { self.v_names() };
        let space = QuadraticSpace::new(name, slots.len(), self.d, entries).map_err(|e| match e {
            Error::Invalid(msg) => Error::Precondition(format!("N = ({p},{q}) is not admissible in d = {}: {msg}", self.d)),
            other => other,
        })?;
        space.with_names(b_names, v_names)
    }

    /// In d = 2 the exported `V` uses `H = w + w*`, `P = w* − w`.
    fn to_output_basis(&self, x: &[Scalar]) -> Vec<Scalar> {
        if self.d != 2 {
            return x.to_vec();
        }
        let half = Scalar::new(1, 2);
        let (a, b) = (&x[0], &x[1]);
        vec![&(a + b) * &half, &(b - a) * &half]
    }

    /// `Γ(s, s) = 0` for `s ∈ S₊` given in `plus_basis` coordinates.
    pub fn pure_spinor_check(&self, s: &[Scalar]) -> Result<bool> {
        let full = self.embed_plus(s)?;
        Ok(self.gamma(&full, &full).iter().all(Scalar::is_zero))
    }

    /// Dense spinor from `S₊` coordinates.
    pub fn embed_plus(&self, s: &[Scalar]) -> Result<Vec<Scalar>> {
        if s.len() != self.plus.len() {
            return Err(Error::MalformedInput(format!("expected {} coordinates in S₊", self.plus.len())));
        }
        let mut full = vec![Scalar::zero(); self.spinor_dim()];
        for (x, &m) in s.iter().zip(&self.plus) {
            full[m] = x.clone();
        }
        Ok(full)
    }

    /// `L_v = Ker(Γ_v|S₊)` for a null `v ≠ 0` in d = 10, with its checks.
    pub fn null_slice(&self, v: &[Scalar]) -> Result<NullSlice> {
        if self.d != 10 {
            return Err(Error::Precondition("null slices are defined for d = 10".into()));
        }
        if v.len() != self.d {
            return Err(Error::MalformedInput(format!("expected {} coordinates", self.d)));
        }
        if v.iter().all(Scalar::is_zero) {
            return Err(Error::Precondition("v must be nonzero".into()));
        }
        if !self.q(v).is_zero() {
            return Err(Error::Precondition(format!("q(v) = {} ≠ 0", self.q(v))));
        }
        let gv = self.gamma_transpose(v);
        let restrict = |from: &[usize], to: &[usize]| {
            let rows: Vec<Vec<Scalar>> = to.iter().map(|&r| from.iter().map(|&c| gv.get(r, c).clone()).collect()).collect();
            Matrix::from_rows(rows)
        };
        let plus_to_minus = restrict(&self.plus, &self.minus);
        let minus_to_plus = restrict(&self.minus, &self.plus);
        let kernel = plus_to_minus.kernel();
        let mut ker = Echelon::new(self.plus.len());
        for x in &kernel {
            ker.insert(sparse_from_dense(x));
        }
        let image_rank = minus_to_plus.rank();
        let mut joint = ker.clone();
        for c in 0..minus_to_plus.cols {
            joint.insert(sparse_from_dense(&minus_to_plus.column(c)));
        }
        let kernel_equals_image = image_rank == kernel.len() && joint.rank() == kernel.len();
        // Γ(l_a, l_b) = c_ab v
        let pivot = v.iter().position(|x| !x.is_zero()).expect("nonzero");
        let mut coefficients = Vec::new();
        let mut image_in_line = true;
        for a in 0..kernel.len() {
            for b in a..kernel.len() {
                let g = self.gamma(&self.embed_plus(&kernel[a])?, &self.embed_plus(&kernel[b])?);
                let c = &g[pivot] / &v[pivot];
                if g.iter().zip(v).any(|(x, y)| *x != &c * y) {
                    image_in_line = false;
                }
                coefficients.push((a, b, c));
            }
        }
        let image_is_line = image_in_line && coefficients.iter().any(|(_, _, c)| !c.is_zero());
        let mut basis: Vec<(String, Parity)> = (1..=kernel.len()).map(|i| (format!("l{i}"), Parity::Odd)).collect();
        basis.push(("v".to_string(), Parity::Even));
        let vi = kernel.len();
        let entries: Vec<(usize, usize, SparseVec<Scalar>)> =
            coefficients.iter().filter(|(_, _, c)| !c.is_zero()).map(|(a, b, c)| (*a, *b, vec![(vi, c.clone())])).collect();
        let null_algebra = LieSuperAlgebra::new("null", basis, entries)?;
        let space = self.to_quadratic_space(1, 0)?;
        let slice = space.slice(&kernel)?;
        Ok(NullSlice { dim: kernel.len(), l_basis: kernel, kernel_equals_image, image_is_line, null_algebra, slice })
    }
}

fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn random_dense(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<Scalar> {
    (0..n).map(|_| Scalar::from_int(rng.gen_range(-bound..=bound))).collect()
}

/// Random nonzero null vector `Σ c_i w_i + d_i w*_i` with `Σ c_i d_i = 0`.
pub fn random_null_vector(k: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let mut c: Vec<Scalar> = (0..k).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect();
    let mut d: Vec<Scalar> = (0..k).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect();
    let last = k - 1;
    if c[last].is_zero() {
        c[last] = Scalar::from_int(rng.gen_range(1..=3));
    }
    let mut acc = Scalar::zero();
    for i in 0..last {
        acc += &(&c[i] * &d[i]);
    }
    d[last] = -(&acc / &c[last]);
    // a hyperbolic rotation: swap the roles of w_j and w*_j in a random coordinate
    let j = rng.gen_range(0..k);
    if rng.gen_bool(0.5) {
        std::mem::swap(&mut c[j], &mut d[j]);
    }
    c.extend(d);
    c
}

#[derive(Clone, Debug, Serialize)]
pub struct CliffordReport {
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    pub basis_passed: bool,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivarianceReport {
    pub d: usize,
    pub omegas: usize,
    pub checks: usize,
    pub passed: bool,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct NullSlice {
    pub dim: usize,
    /// Basis of `L_v` in `S₊` coordinates.
    pub l_basis: Vec<Vec<Scalar>>,
    pub kernel_equals_image: bool,
    /// `Γ(Sym²L_v) = span(v)`.
    pub image_is_line: bool,
    /// The `(1|8)` null subalgebra spanned by `L_v` and `v`.
    pub null_algebra: LieSuperAlgebra,
    pub slice: SliceResult,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::Limits;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn dimensions() {
        for (d, half) in [(2, 1), (4, 2), (10, 16)] {
            let m = build_spinor_model(d).unwrap();
            assert_eq!(m.plus_basis().len(), half);
            assert_eq!(m.minus_basis().len(), half);
        }
        assert!(matches!(build_spinor_model(6), Err(Error::Unsupported(_))));
    }

    #[test]
    fn clifford_and_negative_control() {
        let m = build_spinor_model(10).unwrap();
        assert!(m.clifford_check(200, 7).passed);
        let bad = build_perturbed(10, Perturbation::ContractionSign).unwrap();
        assert!(!bad.clifford_check(10, 7).passed);
        let w1 = v(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let s = v(&(0..32).map(|i| i % 5 - 2).collect::<Vec<_>>());
        assert!(m.clifford_mult(&w1, &m.clifford_mult(&w1, &s)).iter().all(Scalar::is_zero));
    }

    #[test]
    fn equivariance() {
        assert!(build_spinor_model(4).unwrap().equivariance_check().passed);
        let r = build_spinor_model(10).unwrap().equivariance_check();
        assert!(r.passed, "{:?}", r.first_failure);
        assert_eq!(r.omegas, 45);
        let bad = build_perturbed(10, Perturbation::Beta).unwrap();
        assert!(!bad.equivariance_check().passed);
    }

    #[test]
    fn d4_gamma_is_mixed() {
        let m = build_spinor_model(4).unwrap();
        for &a in m.plus_basis() {
            for &b in m.plus_basis() {
                assert!(m.gamma_basis(a, b).iter().all(Scalar::is_zero));
            }
        }
        for &a in m.minus_basis() {
            for &b in m.minus_basis() {
                assert!(m.gamma_basis(a, b).iter().all(Scalar::is_zero));
            }
        }
        let s = m.to_quadratic_space(1, 1).unwrap();
        assert_eq!((s.dim_b(), s.dim_v()), (4, 4));
        assert!(m.to_quadratic_space(1, 0).is_err());
    }

    #[test]
    fn d2_matches_bracket_table() {
        let s = build_spinor_model(2).unwrap().to_quadratic_space(1, 1).unwrap();
        // [Q+, Q+] = H + P, [Q-, Q-] = H - P, [Q+, Q-] = 0
        assert_eq!(s.gamma(0, 0), &sparse_from_dense(&v(&[1, 1])));
        assert_eq!(s.gamma(1, 1), &sparse_from_dense(&v(&[1, -1])));
        assert!(s.gamma(0, 1).is_empty());
    }

    #[test]
    fn gamma_transpose_squares() {
        let m = build_spinor_model(10).unwrap();
        let w1 = v(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let g = m.gamma_transpose(&w1);
        assert!(g.mul(&g).is_zero());
        let h = v(&[1, 0, 0, 0, 0, 1, 0, 0, 0, 0]);
        assert_eq!(m.q(&h), Scalar::one());
        let g = m.gamma_transpose(&h);
        assert_eq!(g.mul(&g), Matrix::identity(32));
        assert!(m.gamma_transpose(&v(&[0; 10])).is_zero());
    }

    #[test]
    fn null_slices() {
        let m = build_spinor_model(10).unwrap();
        let ns = m.null_slice(&v(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(ns.dim, 8);
        assert!(ns.kernel_equals_image && ns.image_is_line);
        assert_eq!(ns.slice.dim_v(), 1);
        let space = m.to_quadratic_space(1, 0).unwrap();
        assert!(space.is_null_subalgebra(&ns.l_basis, 4, &Limits::default()).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let nv = random_null_vector(5, &mut rng);
            assert!(m.q(&nv).is_zero());
            let ns = m.null_slice(&nv).unwrap();
            assert_eq!(ns.dim, 8);
            assert!(ns.kernel_equals_image && ns.image_is_line);
        }
        assert!(matches!(m.null_slice(&v(&[1, 0, 0, 0, 0, 1, 0, 0, 0, 0])), Err(Error::Precondition(_))));
    }

    #[test]
    fn pure_spinors() {
        let m = build_spinor_model(10).unwrap();
        let mut vac = vec![Scalar::zero(); 16];
        vac[0] = Scalar::one();
        assert!(m.pure_spinor_check(&vac).unwrap());
        assert!(m.pure_spinor_check(&vec![Scalar::zero(); 16]).unwrap());
        let dense: Vec<Scalar> = (0..16).map(|i| Scalar::from_int(i % 3 + 1)).collect();
        assert!(!m.pure_spinor_check(&dense).unwrap());
    }
}
