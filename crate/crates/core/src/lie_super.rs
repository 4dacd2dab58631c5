//! Finite-dimensional Lie superalgebras given by structure constants, and the
//! group of even `A`-points of a nilpotent one under the Hausdorff series.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{koszul_sign, Parity, SuperDimension};
use crate::linalg::{axpy, sparse_scale, Echelon, SparseVec};
use crate::scalar::{factorial, Scalar};
use crate::superpoly::{FreeSCAlgebra, PolySampler, SuperPolynomial};
use crate::wall_brauer::FiniteSuperAlgebra;

/// Deepest bracket the Hausdorff product supports.
pub const MAX_BCH_DEPTH: usize = 6;

#[derive(Clone, Debug)]
pub struct LieSuperAlgebra {
    name: String,
    names: Vec<String>,
    parities: Vec<Parity>,
    /// `brackets[i * n + j] = [e_i, e_j]`
    brackets: Vec<SparseVec<Scalar>>,
    class: OnceLock<Nilpotency>,
}

impl PartialEq for LieSuperAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.parities == other.parities && self.brackets == other.brackets
    }
}

/// One failed axiom on a basis pair or triple (1-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub algebra: String,
    pub dim: SuperDimension,
    pub passed: bool,
    pub violation_count: usize,
    /// At most [`ValidationReport::MAX_LISTED`] entries.
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub const MAX_LISTED: usize = 200;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum Nilpotency {
    Class(usize),
    NotNilpotentUpTo(usize),
}

impl LieSuperAlgebra {
    /// Entries are 0-based `(i, j, [e_i, e_j])`. A pair given only as `(i, j)`
    /// gets its mirror `[e_j, e_i] = −(−1)^{|i||j|}[e_i, e_j]` filled in.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<(String, Parity)>,
        entries: Vec<(usize, usize, SparseVec<Scalar>)>,
    ) -> Result<Self> {
        let n = basis.len();
        let mut brackets: Vec<Option<SparseVec<Scalar>>> = vec![None; n * n];
        for (i, j, v) in entries {
            if i >= n || j >= n || v.iter().any(|(k, _)| *k >= n) {
                return Err(Error::MalformedInput(format!("bracket entry ({}, {}) out of range", i + 1, j + 1)));
            }
            let slot = &mut brackets[i * n + j];
            *slot = Some(match slot.take() {
                Some(old) => axpy(&old, &Scalar::one(), &v),
                None => v,
            });
        }
        let (names, parities): (Vec<String>, Vec<Parity>) = basis.into_iter().unzip();
        let mut filled = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                filled[i * n + j] = match (&brackets[i * n + j], &brackets[j * n + i]) {
                    (Some(v), _) => v.clone(),
                    (None, Some(w)) => {
                        let s = -koszul_sign(parities[i], parities[j]).to_scalar();
                        sparse_scale(w, &s)
                    }
                    (None, None) => Vec::new(),
                };
            }
        }
        Ok(LieSuperAlgebra { name: name.into(), names, parities, brackets: filled, class: OnceLock::new() })
    }

    pub fn abelian(name: impl Into<String>, basis: Vec<(String, Parity)>) -> Self {
        Self::new(name, basis, Vec::new()).expect("no entries")
    }

    /// `[x, y] = xy − (−1)^{|x||y|} yx` on an associative superalgebra.
    pub fn from_associative(a: &FiniteSuperAlgebra<Scalar>) -> Result<Self> {
        a.validate_associative()?;
        let n = a.dim();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = a.supercommutator(&a.basis_element(i), &a.basis_element(j));
                if !v.is_empty() {
                    entries.push((i, j, v));
                }
            }
        }
        let basis = a.basis_names().iter().cloned().zip(a.parities().iter().copied()).collect();
        Self::new(format!("gl({})", a.name()), basis, entries)
    }

    /// Free nilpotent Lie algebra of class 3 on two even generators:
    /// `X, Y, Z = [X,Y], U = [X,Z], W = [Y,Z]`.
    pub fn free_nilpotent_class3() -> Self {
        let basis = ["X", "Y", "Z", "U", "W"].iter().map(|s| (s.to_string(), Parity::Even)).collect();
        let one = |k: usize| vec![(k, Scalar::one())];
        Self::new("n3", basis, vec![(0, 1, one(2)), (0, 2, one(3)), (1, 2, one(4))]).expect("valid table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn superdim(&self) -> SuperDimension {
        let odd = self.parities.iter().filter(|p| p.is_odd()).count();
        SuperDimension::new(self.dim() - odd, odd)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec<Scalar> {
        &self.brackets[i * self.dim() + j]
    }

    /// Bilinear extension of the table.
    pub fn bracket(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec<Scalar> {
        let mut out = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let v = self.bracket_basis(*i, *j);
                if !v.is_empty() {
                    out = axpy(&out, &(a * b), v);
                }
            }
        }
        out
    }

    /// Copy with one structure constant replaced (no mirror update); for negative controls.
    pub fn with_constant(&self, i: usize, j: usize, k: usize, c: Scalar) -> Self {
        let mut out = self.clone();
        out.class = OnceLock::new();
        let n = self.dim();
        let slot = &mut out.brackets[i * n + j];
        let mut v: Vec<(usize, Scalar)> = slot.iter().filter(|(kk, _)| *kk != k).cloned().collect();
        if !c.is_zero() {
            v.push((k, c));
        }
        v.sort_by_key(|e| e.0);
        *slot = v;
        out
    }

    /// Exhaustive check of parity, super-antisymmetry and super-Jacobi on basis elements.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let mut violations = Vec::new();
        let mut count = 0usize;
        let mut push = |axiom: &'static str, idx: Vec<usize>| {
            count += 1;
            if violations.len() < ValidationReport::MAX_LISTED {
                violations.push(Violation { axiom, indices: idx.into_iter().map(|i| i + 1).collect() });
            }
        };
        for i in 0..n {
            for j in 0..n {
                let v = self.bracket_basis(i, j);
                if v.iter().any(|(k, _)| self.parities[*k] != self.parities[i] + self.parities[j]) {
                    push("parity", vec![i, j]);
                }
                if j >= i {
                    let s = koszul_sign(self.parities[i], self.parities[j]).to_scalar();
                    if axpy(v, &s, self.bracket_basis(j, i)) != Vec::new() {
                        push("antisymmetry", vec![i, j]);
                    }
                }
            }
        }
        // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]
        let e = |i: usize| vec![(i, Scalar::one())];
        for i in 0..n {
            for j in 0..n {
                let s = koszul_sign(self.parities[i], self.parities[j]).to_scalar();
                let xy = self.bracket_basis(i, j);
                for k in 0..n {
                    let lhs = self.bracket(&e(i), self.bracket_basis(j, k));
                    let r1 = self.bracket(xy, &e(k));
                    let r2 = self.bracket(&e(j), self.bracket_basis(i, k));
                    let rhs = axpy(&r1, &s, &r2);
                    if lhs != rhs {
                        push("jacobi", vec![i, j, k]);
                    }
                }
            }
        }
        ValidationReport { algebra: self.name.clone(), dim: self.superdim(), passed: count == 0, violation_count: count, violations }
    }

    /// `g¹ = g`, `gᵏ⁺¹ = [g, gᵏ]`, as echelon bases; stops once a term is zero
    /// or repeats, or after `max_terms` terms.
    pub fn lower_central_series(&self, max_terms: usize) -> Vec<Echelon<Scalar>> {
        let n = self.dim();
        let mut full = Echelon::new(n);
        for i in 0..n {
            full.insert(vec![(i, Scalar::one())]);
        }
        let mut series = vec![full];
        while series.len() < max_terms {
            let last = series.last().expect("nonempty");
            if last.rank() == 0 {
                break;
            }
            let mut next = Echelon::new(n);
            'outer: for i in 0..n {
                for v in last.rows() {
                    next.insert(self.bracket(&[(i, Scalar::one())], v));
                    if next.rank() == last.rank() {
                        break 'outer;
                    }
                }
            }
            let stalled = next.rank() == last.rank();
            series.push(next);
            if stalled {
                break;
            }
        }
        series
    }

    /// Smallest `N ≤ max_n` with all `(N+1)`-fold brackets zero.
    pub fn nilpotency_class(&self, max_n: usize) -> Nilpotency {
        let series = self.lower_central_series(max_n + 1);
        match series.iter().position(|e| e.rank() == 0) {
            Some(pos) if pos <= max_n => Nilpotency::Class(pos),
            _ => Nilpotency::NotNilpotentUpTo(max_n),
        }
    }

    /// Cached class, searched up to [`MAX_BCH_DEPTH`].
    pub fn bch_class(&self) -> Nilpotency {
        *self.class.get_or_init(|| self.nilpotency_class(MAX_BCH_DEPTH))
    }

    pub fn to_json(&self) -> LieJson {
        let n = self.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.bracket_basis(i, j) {
                    brackets.push((i + 1, j + 1, k + 1, c.clone()));
                }
            }
        }
        LieJson {
            name: self.name.clone(),
            basis: self.names.iter().cloned().zip(self.parities.iter().copied()).collect(),
            brackets,
        }
    }

    /// Parses without validating.
    pub fn from_json(j: &LieJson) -> Result<Self> {
        let n = j.basis.len();
        let mut entries: HashMap<(usize, usize), SparseVec<Scalar>> = HashMap::new();
        for (i, jj, k, c) in &j.brackets {
            if [*i, *jj, *k].iter().any(|&x| x == 0 || x > n) {
                return Err(Error::MalformedInput(format!("bracket triple ({i}, {jj}, {k}) out of range 1..={n}")));
            }
            let e = entries.entry((i - 1, jj - 1)).or_default();
            *e = axpy(e, c, &[(k - 1, Scalar::one())]);
        }
        let mut list: Vec<(usize, usize, SparseVec<Scalar>)> = entries.into_iter().map(|((i, j), v)| (i, j, v)).collect();
        list.sort_by_key(|e| (e.0, e.1));
        Self::new(j.name.clone(), j.basis.clone(), list)
    }

    /// Parses and validates; an invalid table is refused unless `force`.
    pub fn load(j: &LieJson, force: bool) -> Result<(Self, ValidationReport)> {
        let g = Self::from_json(j)?;
        let report = g.validate();
        if !report.passed && !force {
            let first = report.violations.first().map(|v| format!("{} at {:?}", v.axiom, v.indices)).unwrap_or_default();
            return Err(Error::Invalid(format!("{}: {} violations, first {first}", g.name, report.violation_count)));
        }
        Ok((g, report))
    }
}

/// Serialized form with 1-based `(i, j, k, c)` meaning `[e_i, e_j] ∋ c e_k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieJson {
    pub name: String,
    pub basis: Vec<(String, Parity)>,
    pub brackets: Vec<(usize, usize, usize, Scalar)>,
}

/// An even element `Σ e_i ⊗ a_i` of `g ⊗ A` (`a_i` of the parity of `e_i`).
#[derive(Clone, Debug, PartialEq)]
pub struct APoint {
    algebra: Arc<LieSuperAlgebra>,
    coords: Vec<SuperPolynomial>,
}

impl APoint {
    pub fn new(algebra: &Arc<LieSuperAlgebra>, coords: Vec<SuperPolynomial>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::MalformedInput("wrong number of coordinates".into()));
        }
        for w in coords.windows(2) {
            if w[0].algebra() != w[1].algebra() {
                return Err(Error::IncompatibleAlgebras("coordinates over different algebras".into()));
            }
        }
        for (i, c) in coords.iter().enumerate() {
            if !c.has_parity(algebra.parities[i]) {
                return Err(Error::Invalid(format!("coordinate {} breaks total even parity", i + 1)));
            }
        }
        Ok(APoint { algebra: algebra.clone(), coords })
    }

    pub fn zero(algebra: &Arc<LieSuperAlgebra>, coefficients: &Arc<FreeSCAlgebra>) -> Self {
        APoint { algebra: algebra.clone(), coords: vec![SuperPolynomial::zero(coefficients); algebra.dim()] }
    }

    /// A random point; odd coordinates vanish when `A` has no odd generators.
    pub fn random(algebra: &Arc<LieSuperAlgebra>, coefficients: &Arc<FreeSCAlgebra>, sampler: &mut PolySampler) -> Self {
        let coords = algebra
            .parities
            .iter()
            .map(|p| {
                if p.is_odd() && coefficients.n_odd() == 0 {
                    SuperPolynomial::zero(coefficients)
                } else {
                    sampler.polynomial(coefficients, Some(*p))
                }
            })
            .collect();
        APoint { algebra: algebra.clone(), coords }
    }

    pub fn coords(&self) -> &[SuperPolynomial] {
        &self.coords
    }

    pub fn coefficient_algebra(&self) -> &Arc<FreeSCAlgebra> {
        self.coords.first().map(|c| c.algebra()).expect("nonzero-dimensional algebra")
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(SuperPolynomial::is_zero)
    }

    /// Every coordinate has the parity of its basis element.
    pub fn is_even(&self) -> bool {
        self.coords.iter().zip(&self.algebra.parities).all(|(c, p)| c.has_parity(*p))
    }

    fn check_compatible(&self, other: &APoint) -> Result<()> {
        if *self.algebra != *other.algebra {
            return Err(Error::IncompatibleAlgebras("A-points of different Lie superalgebras".into()));
        }
        if self.algebra.dim() > 0 && self.coefficient_algebra() != other.coefficient_algebra() {
            return Err(Error::IncompatibleAlgebras("A-points over different coefficient algebras".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &APoint) -> Result<APoint> {
        self.check_compatible(other)?;
        Ok(APoint { algebra: self.algebra.clone(), coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() })
    }

    pub fn scale(&self, c: &Scalar) -> APoint {
        APoint { algebra: self.algebra.clone(), coords: self.coords.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn neg(&self) -> APoint {
        self.scale(&Scalar::from_int(-1))
    }

    /// `[x⊗a, y⊗b] = (−1)^{|a||y|} [x, y] ⊗ ab`.
    pub fn bracket(&self, other: &APoint) -> Result<APoint> {
        self.check_compatible(other)?;
        let g = &self.algebra;
        let mut out = APoint::zero(g, self.coefficient_algebra());
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                let v = g.bracket_basis(i, j);
                if b.is_zero() || v.is_empty() {
                    continue;
                }
                let ab = (a * b).scale(&koszul_sign(g.parities[i], g.parities[j]).to_scalar());
                for (k, c) in v {
                    out.coords[*k] = &out.coords[*k] + &ab.scale(c);
                }
            }
        }
        Ok(out)
    }
}

/// Words in `X = 0`, `Y = 1` with the coefficient of their right-nested
/// bracket in the degree-`n` Hausdorff term (already divided by `n`).
type DynkinTerms = Vec<Vec<(Vec<u8>, Scalar)>>;

fn dynkin_terms() -> &'static DynkinTerms {
    static TERMS: OnceLock<DynkinTerms> = OnceLock::new();
    TERMS.get_or_init(|| compute_dynkin_terms(MAX_BCH_DEPTH))
}

/// Coefficients of `log(e^X e^Y)` in the free associative algebra, truncated
/// at degree `depth`; by Dynkin–Specht–Wever the degree-`n` part equals
/// `(1/n) Σ c_w [w]` with `[w]` the right-nested bracket of the word `w`.
pub fn compute_dynkin_terms(depth: usize) -> DynkinTerms {
    type Poly = HashMap<Vec<u8>, Scalar>;
    let add_into = |acc: &mut Poly, w: Vec<u8>, c: Scalar| {
        let e = acc.entry(w).or_default();
        *e += c;
    };
    let mul = |p: &Poly, q: &Poly| -> Poly {
        let mut out = Poly::new();
        for (w1, c1) in p {
            for (w2, c2) in q {
                if w1.len() + w2.len() <= depth {
                    let mut w = w1.clone();
                    w.extend(w2);
                    let e = out.entry(w).or_default();
                    *e += c1 * c2;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    // Z = e^X e^Y − 1
    let mut z = Poly::new();
    for a in 0..=depth {
        for b in 0..=depth - a {
            if a + b == 0 {
                continue;
            }
            let mut w = vec![0u8; a];
            w.extend(std::iter::repeat_n(1u8, b));
            let c = (factorial(a as u64) * factorial(b as u64)).inv().expect("nonzero");
            add_into(&mut z, w, c);
        }
    }
    let mut log = Poly::new();
    let mut power = z.clone();
    for k in 1..=depth {
        let c = Scalar::new(if k % 2 == 1 { 1 } else { -1 }, k as i64);
        for (w, x) in &power {
            add_into(&mut log, w.clone(), x * &c);
        }
        power = mul(&power, &z);
    }
    let mut out: DynkinTerms = vec![Vec::new(); depth + 1];
    for (w, c) in log {
        if c.is_zero() {
            continue;
        }
        let n = w.len();
        out[n].push((w, &c * &Scalar::new(1, n as i64)));
    }
    for terms in &mut out {
        terms.sort();
    }
    out
}

/// Hausdorff product `x·y = x + y + ½[x,y] + ⋯`, truncated at the class of `g`.
pub fn bch_multiply(x: &APoint, y: &APoint) -> Result<APoint> {
    x.check_compatible(y)?;
    let class = match x.algebra.bch_class() {
        Nilpotency::Class(c) => c,
        Nilpotency::NotNilpotentUpTo(_) => {
            return Err(Error::Unsupported(format!(
                "{} is not nilpotent of class ≤ {MAX_BCH_DEPTH}",
                x.algebra.name
            )))
        }
    };
    let terms = dynkin_terms();
    let mut memo: HashMap<Vec<u8>, APoint> = HashMap::new();
    let mut out = x.add(y)?;
    for n in 2..=class {
        for (w, c) in &terms[n] {
            let b = nested(w, x, y, &mut memo)?;
            out = out.add(&b.scale(c))?;
        }
    }
    Ok(out)
}

fn nested(w: &[u8], x: &APoint, y: &APoint, memo: &mut HashMap<Vec<u8>, APoint>) -> Result<APoint> {
    if let Some(v) = memo.get(w) {
        return Ok(v.clone());
    }
    let head = if w[0] == 0 { x } else { y };
    let v = if w.len() == 1 {
        head.clone()
    } else if w[w.len() - 1] == w[w.len() - 2] {
        // innermost bracket [a, a] of an even point vanishes
        APoint::zero(&x.algebra, x.coefficient_algebra())
    } else {
        let inner = nested(&w[1..], x, y, memo)?;
        head.bracket(&inner)?
    };
    memo.insert(w.to_vec(), v.clone());
    Ok(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub algebra: String,
    pub class: Nilpotency,
    pub trials: usize,
    pub seed: u64,
    pub associativity: bool,
    pub identity: bool,
    pub inverses: bool,
    pub closure: bool,
    pub passed: bool,
    pub first_failure: Option<String>,
}

/// Randomized check of the group axioms for [`bch_multiply`] on even `A`-points.
pub fn apoints_group_report(
    g: &Arc<LieSuperAlgebra>,
    coefficients: &Arc<FreeSCAlgebra>,
    trials: usize,
    seed: u64,
) -> Result<GroupReport> {
    let class = g.bch_class();
    if let Nilpotency::NotNilpotentUpTo(_) = class {
        return Err(Error::Precondition(format!("{} is not nilpotent", g.name)));
    }
    let mut sampler = PolySampler::new(seed);
    sampler.max_degree = 3;
    sampler.max_terms = 3;
    let (mut assoc, mut ident, mut inv, mut closure) = (true, true, true, true);
    let mut first_failure = None;
    let zero = APoint::zero(g, coefficients);
    for t in 0..trials {
        let x = APoint::random(g, coefficients, &mut sampler);
        let y = APoint::random(g, coefficients, &mut sampler);
        let z = APoint::random(g, coefficients, &mut sampler);
        let xy = bch_multiply(&x, &y)?;
        let left = bch_multiply(&xy, &z)?;
        let right = bch_multiply(&x, &bch_multiply(&y, &z)?)?;
        let checks = [
            (&mut assoc, left == right, "associativity"),
            (&mut ident, bch_multiply(&x, &zero)? == x && bch_multiply(&zero, &x)? == x, "identity"),
            (&mut inv, bch_multiply(&x, &x.neg())?.is_zero() && bch_multiply(&x.neg(), &x)?.is_zero(), "inverse"),
            (&mut closure, xy.is_even(), "closure"),
        ];
        for (flag, ok, what) in checks {
            if !ok {
                *flag = false;
                first_failure.get_or_insert_with(|| format!("{what} failed at trial {t}"));
            }
        }
    }
    Ok(GroupReport {
        algebra: g.name.clone(),
        class,
        trials,
        seed,
        associativity: assoc,
        identity: ident,
        inverses: inv,
        closure,
        passed: assoc && ident && inv && closure,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wall_brauer::{clifford_n, matrix_superalgebra};

    #[test]
    fn dynkin_low_degrees() {
        let t = compute_dynkin_terms(3);
        // degree 2: ½·(½ XY − ½ YX) so that the sum is ½[X,Y]
        assert_eq!(t[2], vec![(vec![0, 1], Scalar::new(1, 4)), (vec![1, 0], Scalar::new(-1, 4))]);
    }

    #[test]
    fn class_three_product() {
        // expected x + y + ½[x,y] + (1/12)[x,[x,y]] − (1/12)[y,[x,y]]
        let g = Arc::new(LieSuperAlgebra::free_nilpotent_class3());
        let a = FreeSCAlgebra::new(&["s", "t"], &[] as &[&str]).unwrap();
        let s = SuperPolynomial::even_gen(&a, 0);
        let t = SuperPolynomial::even_gen(&a, 1);
        let z = SuperPolynomial::zero(&a);
        let x = APoint::new(&g, vec![s.clone(), z.clone(), z.clone(), z.clone(), z.clone()]).unwrap();
        let y = APoint::new(&g, vec![z.clone(), t.clone(), z.clone(), z.clone(), z.clone()]).unwrap();
        let xy = bch_multiply(&x, &y).unwrap();
        let st = &s * &t;
        assert_eq!(xy.coords()[2], st.scale(&Scalar::new(1, 2)));
        assert_eq!(xy.coords()[3], (&st * &s).scale(&Scalar::new(1, 12)));
        assert_eq!(xy.coords()[4], (&st * &t).scale(&Scalar::new(-1, 12)));
    }

    #[test]
    fn associative_examples() {
        let c1 = LieSuperAlgebra::from_associative(&clifford_n(1).unwrap()).unwrap();
        assert_eq!(c1.bracket_basis(1, 1), &vec![(0, Scalar::from_int(2))]);
        let m10 = LieSuperAlgebra::from_associative(&matrix_superalgebra(1, 0).unwrap()).unwrap();
        assert!(m10.bracket_basis(0, 0).is_empty());
        let m11 = LieSuperAlgebra::from_associative(&matrix_superalgebra(1, 1).unwrap()).unwrap();
        assert_eq!(m11.superdim(), SuperDimension::new(2, 2));
        assert!(m11.validate().passed);
        assert_eq!(m11.nilpotency_class(10), Nilpotency::NotNilpotentUpTo(10));
    }

    #[test]
    fn perturbed_table_fails_with_witness() {
        let g = LieSuperAlgebra::free_nilpotent_class3();
        assert!(g.validate().passed);
        let bad = g.with_constant(0, 1, 2, Scalar::from_int(2));
        let r = bad.validate();
        assert!(!r.passed);
        assert!(r.violations.iter().any(|v| v.axiom == "antisymmetry" && v.indices == vec![1, 2]));
    }

    #[test]
    fn classes() {
        let ab = LieSuperAlgebra::abelian("ab", vec![("a".into(), Parity::Even), ("b".into(), Parity::Odd)]);
        assert_eq!(ab.nilpotency_class(10), Nilpotency::Class(1));
        assert_eq!(LieSuperAlgebra::free_nilpotent_class3().nilpotency_class(10), Nilpotency::Class(3));
    }

    #[test]
    fn json_round_trip_and_mirror_fill() {
        let g = LieSuperAlgebra::free_nilpotent_class3();
        let j = g.to_json();
        let back = LieSuperAlgebra::from_json(&j).unwrap();
        assert_eq!(back, g);
        let half = LieJson { name: "h".into(), basis: j.basis.clone(), brackets: vec![(1, 2, 3, Scalar::one()), (1, 3, 4, Scalar::one()), (2, 3, 5, Scalar::one())] };
        assert_eq!(LieSuperAlgebra::from_json(&half).unwrap(), g);
        let mut bad = j.clone();
        bad.brackets.push((1, 2, 4, Scalar::one()));
        assert!(LieSuperAlgebra::load(&bad, false).is_err());
        assert!(LieSuperAlgebra::load(&bad, true).is_ok());
    }

    #[test]
    fn class_two_product() {
        // Heisenberg: [X, Y] = Z
        let basis = ["X", "Y", "Z"].iter().map(|s| (s.to_string(), Parity::Even)).collect();
        let g = Arc::new(LieSuperAlgebra::new("heis", basis, vec![(0, 1, vec![(2, Scalar::one())])]).unwrap());
        let a = FreeSCAlgebra::new(&["s", "t"], &[] as &[&str]).unwrap();
        let s = SuperPolynomial::even_gen(&a, 0);
        let t = SuperPolynomial::even_gen(&a, 1);
        let z = SuperPolynomial::zero(&a);
        let x = APoint::new(&g, vec![s.clone(), z.clone(), z.clone()]).unwrap();
        let y = APoint::new(&g, vec![z.clone(), t.clone(), z.clone()]).unwrap();
        let xy = bch_multiply(&x, &y).unwrap();
        assert_eq!(xy.coords()[2], (&s * &t).scale(&Scalar::new(1, 2)));
        assert!(bch_multiply(&x, &x.neg()).unwrap().is_zero());
    }

    #[test]
    fn group_reports() {
        let a = FreeSCAlgebra::new(&["s"], &["eta1", "eta2"]).unwrap();
        let n3 = Arc::new(LieSuperAlgebra::free_nilpotent_class3());
        assert!(apoints_group_report(&n3, &a, 20, 1).unwrap().passed);
        let ab = Arc::new(LieSuperAlgebra::abelian("ab", vec![("a".into(), Parity::Even), ("b".into(), Parity::Odd)]));
        assert!(apoints_group_report(&ab, &a, 20, 2).unwrap().passed);
        let m11 = Arc::new(LieSuperAlgebra::from_associative(&matrix_superalgebra(1, 1).unwrap()).unwrap());
        assert!(apoints_group_report(&m11, &a, 1, 0).is_err());
    }
}
