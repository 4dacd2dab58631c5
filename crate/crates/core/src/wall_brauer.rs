//! Finite-dimensional associative superalgebras, their supercenters and Wall
//! types, the super-Brauer multiplication table, and the half tensor product
//! of two irreducible `Q₁`-modules.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, GaussRational};
use crate::graded::{koszul_sign, Parity, SuperDimension};
use crate::linalg::{axpy, sparse_from_dense, sparse_scale, sparse_to_dense, Echelon, Matrix, SparseVec};
use crate::scalar::Scalar;

/// Associative superalgebra given by structure constants on a homogeneous basis.
#[derive(Clone, Debug)]
pub struct FiniteSuperAlgebra<F: Field> {
    name: String,
    basis_names: Vec<String>,
    parities: Vec<Parity>,
    /// `table[i * n + j] = e_i e_j`
    table: Vec<SparseVec<F>>,
    unit: SparseVec<F>,
    /// Homogeneous elements generating the algebra together with the unit.
    generators: Vec<SparseVec<F>>,
}

impl<F: Field> FiniteSuperAlgebra<F> {
    /// Checks shape and parity additivity; associativity is checked by
    /// [`FiniteSuperAlgebra::validate_associative`].
    pub fn new(
        name: impl Into<String>,
        basis_names: Vec<String>,
        parities: Vec<Parity>,
        table: Vec<SparseVec<F>>,
        unit: SparseVec<F>,
        generators: Option<Vec<SparseVec<F>>>,
    ) -> Result<Self> {
        let n = parities.len();
        if basis_names.len() != n || table.len() != n * n {
            return Err(Error::MalformedInput("structure-constant table has the wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                for (k, _) in &table[i * n + j] {
                    if *k >= n {
                        return Err(Error::MalformedInput(format!("basis index {k} out of range")));
                    }
                    if parities[*k] != parities[i] + parities[j] {
                        return Err(Error::Invalid(format!(
                            "product e{} e{} has a component on e{} of the wrong parity",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        if unit.iter().any(|(k, _)| *k >= n || parities[*k].is_odd()) {
            return Err(Error::Invalid("unit must be an even element".into()));
        }
        let generators = match generators {
            Some(g) => g,
            None => (0..n).map(|i| vec![(i, F::one())]).collect(),
        };
        let alg = FiniteSuperAlgebra { name: name.into(), basis_names, parities, table, unit, generators };
        for g in &alg.generators {
            if alg.homogeneous_parity(g).is_none() {
                return Err(Error::Invalid("generators must be homogeneous".into()));
            }
        }
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn superdim(&self) -> SuperDimension {
        let odd = self.parities.iter().filter(|p| p.is_odd()).count();
        SuperDimension::new(self.dim() - odd, odd)
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn unit(&self) -> &SparseVec<F> {
        &self.unit
    }

    pub fn generators(&self) -> &[SparseVec<F>] {
        &self.generators
    }

    pub fn product_basis(&self, i: usize, j: usize) -> &SparseVec<F> {
        &self.table[i * self.dim() + j]
    }

    pub fn basis_element(&self, i: usize) -> SparseVec<F> {
        vec![(i, F::one())]
    }

    /// Parity of a homogeneous element (zero counts as even).
    pub fn homogeneous_parity(&self, x: &[(usize, F)]) -> Option<Parity> {
        let mut it = x.iter().map(|(k, _)| self.parities[*k]);
        match it.next() {
            None => Some(Parity::Even),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    pub fn multiply(&self, x: &[(usize, F)], y: &[(usize, F)]) -> SparseVec<F> {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a.mul(b);
                for (k, c) in self.product_basis(*i, *j) {
                    let e = acc.entry(*k).or_insert_with(F::zero);
                    *e = e.add(&ab.mul(c));
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// `xy − (−1)^{|x||y|} yx` for homogeneous `x`, `y`.
    pub fn supercommutator(&self, x: &[(usize, F)], y: &[(usize, F)]) -> SparseVec<F> {
        let px = self.homogeneous_parity(x).expect("homogeneous");
        let py = self.homogeneous_parity(y).expect("homogeneous");
        let s = F::from_scalar(koszul_sign(px, py).to_scalar());
        axpy(&self.multiply(x, y), &s.neg(), &self.multiply(y, x))
    }

    /// Exhaustive associativity and unit check on basis triples.
    pub fn validate_associative(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            let ei = self.basis_element(i);
            if self.multiply(&self.unit, &ei) != ei || self.multiply(&ei, &self.unit) != ei {
                return Err(Error::Invalid(format!("{}: unit fails on {}", self.name, self.basis_names[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.product_basis(i, j);
                for k in 0..n {
                    let left = self.multiply(ij, &self.basis_element(k));
                    let right = self.multiply(&self.basis_element(i), self.product_basis(j, k));
                    if left != right {
                        return Err(Error::Invalid(format!(
                            "{}: associativity fails on ({}, {}, {})",
                            self.name, self.basis_names[i], self.basis_names[j], self.basis_names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Homogeneous basis of the center `{z : z g = g z}` for every generator
    /// `g`, solved separately in each parity and re-verified against the whole
    /// basis. The plain commutator is used: with the graded sign the odd
    /// involution of `Q_n` would not count, and `(1|0)` vs `(1|1)` would no
    /// longer separate the two types.
    pub fn supercenter(&self) -> Supercenter<F> {
        let mut basis = Vec::new();
        let mut sd = SuperDimension::default();
        for p in [Parity::Even, Parity::Odd] {
            let cols: Vec<usize> = (0..self.dim()).filter(|&k| self.parities[k] == p).collect();
            let mut ech = Echelon::new(cols.len());
            for g in &self.generators {
                // one equation per output coordinate of z g − g z
                let mut rows: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
                for (c, &k) in cols.iter().enumerate() {
                    let ek = self.basis_element(k);
                    let v = axpy(&self.multiply(&ek, g), &F::one().neg(), &self.multiply(g, &ek));
                    for (m, x) in v {
                        rows.entry(m).or_default().push((c, x));
                    }
                }
                for (_, r) in rows {
                    ech.insert(r);
                }
            }
            for kv in ech.kernel() {
                let z: SparseVec<F> =
                    kv.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (cols[c], x.clone())).collect();
                basis.push(z);
                match p {
                    Parity::Even => sd.even += 1,
                    Parity::Odd => sd.odd += 1,
                }
            }
        }
        let verified = basis.iter().all(|z| {
            (0..self.dim()).all(|a| {
                let ea = self.basis_element(a);
                self.multiply(z, &ea) == self.multiply(&ea, z)
            })
        });
        Supercenter { basis, superdim: sd, verified }
    }

    pub fn wall_type(&self) -> WallType {
        WallType::from_supercenter(self.supercenter().superdim)
    }
}

impl FiniteSuperAlgebra<Scalar> {
    /// The same algebra over a larger field.
    pub fn lift<G: Field>(&self) -> FiniteSuperAlgebra<G> {
        let conv = |v: &SparseVec<Scalar>| v.iter().map(|(k, x)| (*k, G::from_scalar(x.clone()))).collect();
        FiniteSuperAlgebra {
            name: self.name.clone(),
            basis_names: self.basis_names.clone(),
            parities: self.parities.clone(),
            table: self.table.iter().map(conv).collect(),
            unit: conv(&self.unit),
            generators: self.generators.iter().map(conv).collect(),
        }
    }

    pub fn to_json(&self) -> AlgebraJson {
        let n = self.dim();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.product_basis(i, j) {
                    products.push((i + 1, j + 1, k + 1, c.clone()));
                }
            }
        }
        AlgebraJson {
            name: self.name.clone(),
            basis: self.basis_names.iter().zip(&self.parities).map(|(n, p)| (n.clone(), *p)).collect(),
            products,
            unit: self.unit.iter().map(|(k, c)| (k + 1, c.clone())).collect(),
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let n = j.basis.len();
        let mut table = vec![Vec::new(); n * n];
        for (i, jj, k, c) in &j.products {
            if *i == 0 || *jj == 0 || *k == 0 || *i > n || *jj > n || *k > n {
                return Err(Error::MalformedInput(format!("index out of range in ({i}, {jj}, {k})")));
            }
            let slot: &mut SparseVec<Scalar> = &mut table[(i - 1) * n + (jj - 1)];
            *slot = axpy(slot, c, &[(k - 1, Scalar::one())]);
        }
        let mut unit = Vec::new();
        for (k, c) in &j.unit {
            if *k == 0 || *k > n {
                return Err(Error::MalformedInput(format!("unit index {k} out of range")));
            }
            unit = axpy(&unit, c, &[(k - 1, Scalar::one())]);
        }
        let alg = Self::new(
            j.name.clone(),
            j.basis.iter().map(|b| b.0.clone()).collect(),
            j.basis.iter().map(|b| b.1).collect(),
            table,
            unit,
            None,
        )?;
        alg.validate_associative()?;
        Ok(alg)
    }
}

/// Serialized form: 1-based `(i, j, k, c)` meaning `e_i e_j ∋ c e_k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub name: String,
    pub basis: Vec<(String, Parity)>,
    pub products: Vec<(usize, usize, usize, Scalar)>,
    pub unit: Vec<(usize, Scalar)>,
}

#[derive(Clone, Debug)]
pub struct Supercenter<F: Field> {
    pub basis: Vec<SparseVec<F>>,
    pub superdim: SuperDimension,
    /// Every basis vector commutes with the whole algebra.
    pub verified: bool,
}

/// Wall type of a central simple superalgebra.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum WallType {
    M,
    Q,
    Indeterminate,
}

impl WallType {
    pub fn from_supercenter(sd: SuperDimension) -> Self {
        match (sd.even, sd.odd) {
            (1, 0) => WallType::M,
            (1, 1) => WallType::Q,
            _ => WallType::Indeterminate,
        }
    }

    /// Class in `Z/2` (`M ↦ 0`, `Q ↦ 1`).
    pub fn class(self) -> Option<Parity> {
        match self {
            WallType::M => Some(Parity::Even),
            WallType::Q => Some(Parity::Odd),
            WallType::Indeterminate => None,
        }
    }

    pub fn from_class(p: Parity) -> Self {
        match p {
            Parity::Even => WallType::M,
            Parity::Odd => WallType::Q,
        }
    }

    /// Product in the super-Brauer group.
    pub fn compose(self, other: WallType) -> WallType {
        match (self.class(), other.class()) {
            (Some(a), Some(b)) => WallType::from_class(a + b),
            _ => WallType::Indeterminate,
        }
    }
}

impl fmt::Display for WallType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WallType::M => "M",
            WallType::Q => "Q",
            WallType::Indeterminate => "?",
        })
    }
}

fn unit_vec<F: Field>(i: usize) -> SparseVec<F> {
    vec![(i, F::one())]
}

/// `End(k^{p|q})` on the matrix units `E_ij`.
pub fn matrix_superalgebra<F: Field>(p: usize, q: usize) -> Result<FiniteSuperAlgebra<F>> {
    let n = p + q;
    if n == 0 {
        return Err(Error::Precondition("M_{0|0} is not an algebra with unit".into()));
    }
    let par = |i: usize| Parity::from_bit(usize::from(i >= p));
    let idx = |i: usize, j: usize| i * n + j;
    let mut names = Vec::new();
    let mut parities = Vec::new();
    for i in 0..n {
        for j in 0..n {
            names.push(format!("E{}{}", i + 1, j + 1));
            parities.push(par(i) + par(j));
        }
    }
    let mut table = vec![Vec::new(); n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                table[idx(i, j) * n * n + idx(j, l)] = unit_vec(idx(i, l));
            }
        }
    }
    let unit = (0..n).map(|i| (idx(i, i), F::one())).collect();
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        gens.push(unit_vec(idx(i, i + 1)));
        gens.push(unit_vec(idx(i + 1, i)));
    }
    FiniteSuperAlgebra::new(format!("M{p}|{q}"), names, parities, table, unit, Some(gens))
}

/// `Q_n ⊂ M_{n|n}`: blocks `[[a, b], [b, a]]` on the basis `A_ij` (even) and `B_ij` (odd).
pub fn queer_superalgebra<F: Field>(n: usize) -> Result<FiniteSuperAlgebra<F>> {
    if n == 0 {
        return Err(Error::Precondition("Q_n needs n ≥ 1".into()));
    }
    let a = |i: usize, j: usize| i * n + j;
    let b = |i: usize, j: usize| n * n + i * n + j;
    let d = 2 * n * n;
    let mut names = Vec::new();
    let mut parities = Vec::new();
    for (prefix, p) in [("A", Parity::Even), ("B", Parity::Odd)] {
        for i in 0..n {
            for j in 0..n {
                names.push(format!("{prefix}{}{}", i + 1, j + 1));
                parities.push(p);
            }
        }
    }
    let mut table = vec![Vec::new(); d * d];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                table[a(i, j) * d + a(j, l)] = unit_vec(a(i, l));
                table[a(i, j) * d + b(j, l)] = unit_vec(b(i, l));
                table[b(i, j) * d + a(j, l)] = unit_vec(b(i, l));
                table[b(i, j) * d + b(j, l)] = unit_vec(a(i, l));
            }
        }
    }
    let unit = (0..n).map(|i| (a(i, i), F::one())).collect();
    let mut gens = vec![unit_vec(b(0, 0))];
    for i in 0..n - 1 {
        gens.push(unit_vec(a(i, i + 1)));
        gens.push(unit_vec(a(i + 1, i)));
    }
    FiniteSuperAlgebra::new(format!("Q{n}"), names, parities, table, unit, Some(gens))
}

/// `Cliff_n`: odd generators with `ξ_i² = 1`, `ξ_iξ_j = −ξ_jξ_i`; basis indexed by subsets.
pub fn clifford_n<F: Field>(n: usize) -> Result<FiniteSuperAlgebra<F>> {
    if n > 12 {
        return Err(Error::ResourceGuard(format!("Cliff_{n} has dimension 2^{n}")));
    }
    let d = 1usize << n;
    let names = (0..d)
        .map(|s| {
            if s == 0 {
                "1".to_string()
            } else {
                (0..n).filter(|i| s >> i & 1 == 1).map(|i| format!("xi{}", i + 1)).collect::<Vec<_>>().join("")
            }
        })
        .collect();
    let parities = (0..d).map(|s: usize| Parity::from_bit(s.count_ones() as usize)).collect();
    let mut table = Vec::with_capacity(d * d);
    for s in 0..d {
        for t in 0..d {
            let mut inv = 0u32;
            for j in 0..n {
                if t >> j & 1 == 1 {
                    inv += (s >> (j + 1)).count_ones();
                }
            }
            let c = if inv.is_multiple_of(2) { F::one() } else { F::one().neg() };
            table.push(vec![(s ^ t, c)]);
        }
    }
    let gens = (0..n).map(|i| unit_vec(1 << i)).collect();
    FiniteSuperAlgebra::new(format!("Cliff{n}"), names, parities, table, unit_vec(0), Some(gens))
}

/// `A ⊕ B` (not simple; used as a control).
pub fn direct_sum<F: Field>(a: &FiniteSuperAlgebra<F>, b: &FiniteSuperAlgebra<F>) -> FiniteSuperAlgebra<F> {
    let (na, nb) = (a.dim(), b.dim());
    let n = na + nb;
    let mut table = vec![Vec::new(); n * n];
    for i in 0..na {
        for j in 0..na {
            table[i * n + j] = a.product_basis(i, j).clone();
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            table[(na + i) * n + na + j] = b.product_basis(i, j).iter().map(|(k, c)| (k + na, c.clone())).collect();
        }
    }
    let mut unit = a.unit.clone();
    unit.extend(b.unit.iter().map(|(k, c)| (k + na, c.clone())));
    let names = a.basis_names.iter().chain(&b.basis_names).cloned().collect();
    let parities = a.parities.iter().chain(&b.parities).copied().collect();
    FiniteSuperAlgebra::new(format!("{}+{}", a.name, b.name), names, parities, table, unit, None)
        .expect("direct sum of valid algebras")
}

/// `A ⊗ B` with `(a₁⊗b₁)(a₂⊗b₂) = (−1)^{|b₁||a₂|} a₁a₂ ⊗ b₁b₂`; basis `(i, j) ↦ i·dim B + j`.
pub fn tensor_superalgebras<F: Field>(a: &FiniteSuperAlgebra<F>, b: &FiniteSuperAlgebra<F>) -> FiniteSuperAlgebra<F> {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let pair = |x: &[(usize, F)], y: &[(usize, F)]| -> SparseVec<F> {
        let mut out = Vec::with_capacity(x.len() * y.len());
        for (i, u) in x {
            for (j, v) in y {
                out.push((i * nb + j, u.mul(v)));
            }
        }
        out
    };
    let mut table = Vec::with_capacity(n * n);
    for i1 in 0..na {
        for j1 in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    let mut v = pair(a.product_basis(i1, i2), b.product_basis(j1, j2));
                    if koszul_sign(b.parities[j1], a.parities[i2]) == crate::graded::Sign::Minus {
                        v = sparse_scale(&v, &F::one().neg());
                    }
                    table.push(v);
                }
            }
        }
    }
    let mut names = Vec::with_capacity(n);
    let mut parities = Vec::with_capacity(n);
    for i in 0..na {
        for j in 0..nb {
            names.push(format!("{}⊗{}", a.basis_names[i], b.basis_names[j]));
            parities.push(a.parities[i] + b.parities[j]);
        }
    }
    let mut gens: Vec<SparseVec<F>> = a.generators.iter().map(|g| pair(g, &b.unit)).collect();
    gens.extend(b.generators.iter().map(|h| pair(&a.unit, h)));
    FiniteSuperAlgebra {
        name: format!("{}⊗{}", a.name, b.name),
        basis_names: names,
        parities,
        table,
        unit: pair(&a.unit, &b.unit),
        generators: gens,
    }
}

/// Super-dimension of the algebra `M_{p|q}`.
pub fn matrix_algebra_superdim(p: usize, q: usize) -> SuperDimension {
    SuperDimension::new(p * p + q * q, 2 * p * q)
}

/// Super-dimension of the algebra `Q_n`.
pub fn queer_algebra_superdim(n: usize) -> SuperDimension {
    SuperDimension::new(n * n, n * n)
}

/// A catalog algebra in the Brauer sweep.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum SimpleKind {
    Matrix { p: usize, q: usize },
    Queer { n: usize },
}

impl SimpleKind {
    pub fn build(self) -> FiniteSuperAlgebra<Scalar> {
        match self {
            SimpleKind::Matrix { p, q } => matrix_superalgebra(p, q).expect("p+q ≥ 1"),
            SimpleKind::Queer { n } => queer_superalgebra(n).expect("n ≥ 1"),
        }
    }

    pub fn label(self) -> String {
        match self {
            SimpleKind::Matrix { p, q } => format!("M{p}|{q}"),
            SimpleKind::Queer { n } => format!("Q{n}"),
        }
    }

    pub fn expected_type(self) -> WallType {
        match self {
            SimpleKind::Matrix { .. } => WallType::M,
            SimpleKind::Queer { .. } => WallType::Q,
        }
    }

    /// The simple algebra that the tensor-product rules predict for `self ⊗ other`.
    pub fn predicted_product(self, other: SimpleKind) -> (SimpleKind, &'static str) {
        use SimpleKind::*;
        match (self, other) {
            (Matrix { p, q }, Matrix { p: r, q: s }) => (Matrix { p: p * r + q * s, q: p * s + q * r }, "MxM"),
            (Matrix { p, q }, Queer { n }) | (Queer { n }, Matrix { p, q }) => (Queer { n: (p + q) * n }, "MxQ"),
            (Queer { n: m }, Queer { n }) => (Matrix { p: m * n, q: m * n }, "QxQ"),
        }
    }

    pub fn superdim(self) -> SuperDimension {
        match self {
            SimpleKind::Matrix { p, q } => matrix_algebra_superdim(p, q),
            SimpleKind::Queer { n } => queer_algebra_superdim(n),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BrauerCell {
    pub left: String,
    pub right: String,
    pub rule: &'static str,
    pub superdim: SuperDimension,
    pub detected: WallType,
    pub predicted: String,
    pub predicted_superdim: SuperDimension,
    pub predicted_type: WallType,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BrauerTable {
    pub algebras: Vec<String>,
    pub factor_types: Vec<WallType>,
    pub cells: Vec<BrauerCell>,
    /// `M` is the identity and `Q·Q = M`, checked on every cell.
    pub type_law_is_z2: bool,
    pub all_ok: bool,
}

impl BrauerTable {
    /// Matrix with algebras as rows and columns; cells are `type:dim`.
    pub fn to_tsv(&self) -> String {
        let n = self.algebras.len();
        let mut out = String::from("factor");
        for a in &self.algebras {
            out.push('\t');
            out.push_str(a);
        }
        out.push('\n');
        for i in 0..n {
            out.push_str(&self.algebras[i]);
            for j in 0..n {
                let c = &self.cells[i * n + j];
                out.push_str(&format!("\t{}:{}", c.detected, c.superdim.total()));
            }
            out.push('\n');
        }
        out
    }
}

/// Catalog of simple algebras within the bounds, in sweep order.
pub fn brauer_catalog(maxp: usize, maxq: usize, maxn: usize) -> Vec<SimpleKind> {
    let mut out = Vec::new();
    for p in 0..=maxp {
        for q in 0..=maxq {
            if p + q > 0 {
                out.push(SimpleKind::Matrix { p, q });
            }
        }
    }
    out.extend((1..=maxn).map(|n| SimpleKind::Queer { n }));
    out
}

/// Tensors every ordered pair of catalog algebras, detects dimension and
/// Wall type, and compares against the predicted simple algebra.
pub fn brauer_table(maxp: usize, maxq: usize, maxn: usize) -> Result<BrauerTable> {
    if maxp + maxq == 0 || maxn == 0 {
        return Err(Error::Precondition("bounds must allow at least one matrix and one queer algebra".into()));
    }
    let kinds = brauer_catalog(maxp, maxq, maxn);
    let largest = kinds.iter().map(|k| k.superdim().total()).max().unwrap_or(0);
    if largest * largest > 1 << 12 {
        return Err(Error::ResourceGuard(format!("tensor products up to dimension {}", largest * largest)));
    }
    let algebras: Vec<FiniteSuperAlgebra<Scalar>> = kinds.iter().map(|k| k.build()).collect();
    for a in &algebras {
        a.validate_associative()?;
    }
    let factor_types: Vec<WallType> = algebras.iter().map(|a| a.wall_type()).collect();
    let mut cells = Vec::new();
    let mut law = true;
    for (i, a) in algebras.iter().enumerate() {
        for (j, b) in algebras.iter().enumerate() {
            let t = tensor_superalgebras(a, b);
            let detected = t.wall_type();
            let (pred, rule) = kinds[i].predicted_product(kinds[j]);
            let ok = t.superdim() == pred.superdim() && detected == pred.expected_type();
            law &= detected == factor_types[i].compose(factor_types[j]);
            cells.push(BrauerCell {
                left: kinds[i].label(),
                right: kinds[j].label(),
                rule,
                superdim: t.superdim(),
                detected,
                predicted: pred.label(),
                predicted_superdim: pred.superdim(),
                predicted_type: pred.expected_type(),
                ok,
            });
        }
    }
    let types_ok = factor_types.iter().zip(&kinds).all(|(t, k)| *t == k.expected_type());
    let all_ok = law && types_ok && cells.iter().all(|c| c.ok);
    Ok(BrauerTable { algebras: kinds.iter().map(|k| k.label()).collect(), factor_types, cells, type_law_is_z2: law, all_ok })
}

/// Left supermodule: one action matrix per algebra basis element.
#[derive(Clone, Debug)]
pub struct SuperModule<F: Field> {
    algebra: Arc<FiniteSuperAlgebra<F>>,
    parities: Vec<Parity>,
    action: Vec<Matrix<F>>,
}

impl<F: Field> SuperModule<F> {
    pub fn new(algebra: Arc<FiniteSuperAlgebra<F>>, parities: Vec<Parity>, action: Vec<Matrix<F>>) -> Result<Self> {
        let m = SuperModule { algebra, parities, action };
        m.validate()?;
        Ok(m)
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(algebra: Arc<FiniteSuperAlgebra<F>>) -> Self {
        let n = algebra.dim();
        let action = (0..n)
            .map(|i| {
                let mut mat = Matrix::zeros(n, n);
                for j in 0..n {
                    for (k, c) in algebra.product_basis(i, j) {
                        mat.set(*k, j, c.clone());
                    }
                }
                mat
            })
            .collect();
        SuperModule { parities: algebra.parities().to_vec(), algebra, action }
    }

    pub fn algebra(&self) -> &Arc<FiniteSuperAlgebra<F>> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn superdim(&self) -> SuperDimension {
        let odd = self.parities.iter().filter(|p| p.is_odd()).count();
        SuperDimension::new(self.dim() - odd, odd)
    }

    /// Matrix of the action of an algebra element.
    pub fn act(&self, a: &[(usize, F)]) -> Matrix<F> {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (i, c) in a {
            out = out.add(&self.action[*i].scale(c));
        }
        out
    }

    /// Unit, associativity and parity checks.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let alg = &self.algebra;
        if self.action.len() != alg.dim() || self.action.iter().any(|m| m.rows != n || m.cols != n) {
            return Err(Error::MalformedInput("action table has the wrong shape".into()));
        }
        if self.act(alg.unit()) != Matrix::identity(n) {
            return Err(Error::Invalid("unit does not act as the identity".into()));
        }
        for (i, m) in self.action.iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    if !m.get(r, c).is_zero() && self.parities[r] != self.parities[c] + alg.parities()[i] {
                        return Err(Error::Invalid(format!("action of {} is not homogeneous", alg.basis_names()[i])));
                    }
                }
            }
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                if self.action[i].mul(&self.action[j]) != self.act(alg.product_basis(i, j)) {
                    return Err(Error::Invalid(format!(
                        "action is not associative on ({}, {})",
                        alg.basis_names()[i],
                        alg.basis_names()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `ΠM`: flipped grading, odd elements act with an extra sign.
    pub fn parity_shift(&self) -> Self {
        let minus = F::one().neg();
        SuperModule {
            algebra: self.algebra.clone(),
            parities: self.parities.iter().map(|p| p.flip()).collect(),
            action: self
                .action
                .iter()
                .zip(self.algebra.parities())
                .map(|(m, p)| if p.is_odd() { m.scale(&minus) } else { m.clone() })
                .collect(),
        }
    }

    /// `V ⊗ W` over `A ⊗ B`: `(a⊗b)(v⊗w) = (−1)^{|b||v|} av ⊗ bw`; basis `(i, j) ↦ i·dim W + j`.
    pub fn tensor(&self, other: &SuperModule<F>, algebra: Arc<FiniteSuperAlgebra<F>>) -> Result<Self> {
        let (na, nb) = (self.algebra.dim(), other.algebra.dim());
        if algebra.dim() != na * nb {
            return Err(Error::IncompatibleAlgebras("algebra is not the tensor of the two module algebras".into()));
        }
        let (dv, dw) = (self.dim(), other.dim());
        let n = dv * dw;
        let mut action = Vec::with_capacity(na * nb);
        for a in 0..na {
            for b in 0..nb {
                let pb = other.algebra.parities()[b];
                let mut m = Matrix::zeros(n, n);
                for v in 0..dv {
                    let s = if koszul_sign(pb, self.parities[v]) == crate::graded::Sign::Minus {
                        F::one().neg()
                    } else {
                        F::one()
                    };
                    for w in 0..dw {
                        for v2 in 0..dv {
                            let x = self.action[a].get(v2, v);
                            if x.is_zero() {
                                continue;
                            }
                            for w2 in 0..dw {
                                let y = other.action[b].get(w2, w);
                                if y.is_zero() {
                                    continue;
                                }
                                m.set(v2 * dw + w2, v * dw + w, s.mul(&x.mul(y)));
                            }
                        }
                    }
                }
                action.push(m);
            }
        }
        let parities =
            self.parities.iter().flat_map(|p| other.parities.iter().map(move |q| *p + *q)).collect();
        SuperModule::new(algebra, parities, action)
    }
}

/// Even (or odd) `T` with `T ρ₁(g) = (−1)^{|T||g|} ρ₂(g) T` for every generator,
/// preferring an invertible one. Returns the dimension of the solution space
/// and an invertible solution if one exists among simple combinations.
pub fn find_intertwiner<F: Field>(
    m1: &SuperModule<F>,
    m2: &SuperModule<F>,
    parity: Parity,
) -> (usize, Option<Matrix<F>>) {
    let (n1, n2) = (m1.dim(), m2.dim());
    // unknowns T[r][c], r in m2, c in m1, homogeneous of the requested parity
    let unknowns: Vec<(usize, usize)> = (0..n2)
        .flat_map(|r| (0..n1).map(move |c| (r, c)))
        .filter(|&(r, c)| m2.parities[r] == m1.parities[c] + parity)
        .collect();
    let mut ech = Echelon::new(unknowns.len());
    for g in m1.algebra.generators() {
        let pg = m1.algebra.homogeneous_parity(g).expect("homogeneous");
        let s = F::from_scalar(koszul_sign(parity, pg).to_scalar());
        let a1 = m1.act(g);
        let a2 = m2.act(g);
        // (T a1 − s a2 T)[r][c] = Σ_k T[r][k] a1[k][c] − s Σ_k a2[r][k] T[k][c]
        for r in 0..n2 {
            for c in 0..n1 {
                let mut row: BTreeMap<usize, F> = BTreeMap::new();
                for (u, &(tr, tc)) in unknowns.iter().enumerate() {
                    let mut coef = F::zero();
                    if tr == r {
                        coef = coef.add(a1.get(tc, c));
                    }
                    if tc == c {
                        coef = coef.sub(&s.mul(a2.get(r, tr)));
                    }
                    if !coef.is_zero() {
                        row.insert(u, coef);
                    }
                }
                ech.insert(row.into_iter().collect());
            }
        }
    }
    let kernel = ech.kernel();
    let to_matrix = |v: &[F]| {
        let mut t = Matrix::zeros(n2, n1);
        for (u, &(r, c)) in unknowns.iter().enumerate() {
            t.set(r, c, v[u].clone());
        }
        t
    };
    let dim = kernel.len();
    if n1 != n2 {
        return (dim, None);
    }
    let mut candidates: Vec<Vec<F>> = kernel.clone();
    if dim > 1 {
        // a few fixed integer combinations
        for w in 1..=3i64 {
            let mut v = vec![F::zero(); unknowns.len()];
            for (k, b) in kernel.iter().enumerate() {
                let c = F::from_int(1 + (k as i64 * w) % 5);
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x.add(&c.mul(y));
                }
            }
            candidates.push(v);
        }
    }
    for v in candidates {
        let t = to_matrix(&v);
        if t.inverse().is_some() {
            return (dim, Some(t));
        }
    }
    (dim, None)
}

/// Standard `Q₁`-module `k^{1|1}`: `ξ` swaps the two basis vectors.
pub fn standard_q1_module<F: Field>() -> SuperModule<F> {
    let alg = Arc::new(clifford_n::<F>(1).expect("Cliff1"));
    SuperModule::regular(alg)
}

/// Outcome of [`half_tensor`].
#[derive(Clone, Debug, Serialize)]
pub struct HalfTensorReport {
    pub v: SuperDimension,
    pub w: SuperDimension,
    pub x: SuperDimension,
    /// `Q₁⊗Q₁ → End(k^{1|1})` over Q(i) is a superalgebra isomorphism.
    pub matrix_identification: bool,
    /// `X ⊕ ΠX → V⊗W, (x, y) ↦ x + E₂₁ y` is an even isomorphism.
    pub decomposition: bool,
    /// `E₁₂ ∘ τ` maps `X(V,W)` isomorphically onto `X(W,V)` and is odd.
    pub swap_odd_iso: bool,
    /// No even element `a` of `Q₁⊗Q₁` makes `a ∘ τ` an isomorphism `X(V,W) → X(W,V)`.
    pub swap_no_even_iso: bool,
    /// An even invertible `Q₁⊗Q₁`-intertwiner `ΠV⊗W → Π(V⊗W)` exists and carries
    /// `X(ΠV,W)` onto `ΠX(V,W)`.
    pub parity_shift_commutes: bool,
}

/// The half tensor product data for two irreducible `Q₁`-modules.
pub struct HalfTensor {
    /// `Q₁ ⊗ Q₁` over Q(i).
    pub algebra: Arc<FiniteSuperAlgebra<GaussRational>>,
    /// `V ⊗ W` as a module over it.
    pub module: SuperModule<GaussRational>,
    /// Columns span `X = e·(V⊗W)`.
    pub x_basis: Vec<Vec<GaussRational>>,
    pub x_parities: Vec<Parity>,
    pub e: SparseVec<GaussRational>,
    pub e21: SparseVec<GaussRational>,
    pub e12: SparseVec<GaussRational>,
    /// Parities of the bases of `V` and `W`.
    pub factor_parities: (Vec<Parity>, Vec<Parity>),
}

impl HalfTensor {
    pub fn superdim(&self) -> SuperDimension {
        let odd = self.x_parities.iter().filter(|p| p.is_odd()).count();
        SuperDimension::new(self.x_parities.len() - odd, odd)
    }
}

/// Matrix units of `Q₁ ⊗ Q₁` over Q(i): with `J = ξ₁ξ₂` (so `J² = −1`),
/// `E₁₁ = (1 + iJ)/2`, `E₂₁ = ξ₁E₁₁`, `E₁₂ = E₁₁ξ₁`, `E₂₂ = 1 − E₁₁`.
/// Basis order of the tensor algebra: `1⊗1, 1⊗ξ, ξ⊗1, ξ⊗ξ`.
pub fn q1q1_matrix_units(alg: &FiniteSuperAlgebra<GaussRational>) -> [SparseVec<GaussRational>; 4] {
    let half = GaussRational::from_scalar(Scalar::new(1, 2));
    let one = alg.unit().clone();
    let xi1 = vec![(2, GaussRational::one())];
    let j = vec![(3, GaussRational::one())];
    let e11 = axpy(&sparse_scale(&one, &half), &GaussRational::i().mul(&half), &j);
    let e21 = alg.multiply(&xi1, &e11);
    let e12 = alg.multiply(&e11, &xi1);
    let e22 = axpy(&one, &GaussRational::one().neg(), &e11);
    [e11, e12, e21, e22]
}

/// Checks that `E_ab ↦` the elements above is a superalgebra isomorphism `M_{1|1} → Q₁⊗Q₁`.
pub fn check_matrix_identification(alg: &FiniteSuperAlgebra<GaussRational>) -> bool {
    let units = q1q1_matrix_units(alg);
    let m = matrix_superalgebra::<GaussRational>(1, 1).expect("M1|1");
    // M1|1 basis order E11, E12, E21, E22 matches `units`
    let image = |v: &SparseVec<GaussRational>| {
        v.iter().fold(Vec::new(), |acc: SparseVec<GaussRational>, (k, c)| axpy(&acc, c, &units[*k]))
    };
    for i in 0..4 {
        if alg.homogeneous_parity(&units[i]) != Some(m.parities()[i]) {
            return false;
        }
        for j in 0..4 {
            if alg.multiply(&units[i], &units[j]) != image(m.product_basis(i, j)) {
                return false;
            }
        }
    }
    let rows: Vec<Vec<GaussRational>> = units.iter().map(|u| sparse_to_dense(u, 4)).collect();
    let unit_ok = image(m.unit()) == *alg.unit();
    unit_ok && Matrix::from_rows(rows).rank() == 4
}

fn check_q1_module(m: &SuperModule<GaussRational>, label: &str) -> Result<()> {
    if m.algebra().dim() != 2 || m.algebra().parities() != [Parity::Even, Parity::Odd] {
        return Err(Error::Precondition(format!("{label} is not a module over Q1")));
    }
    if m.superdim() != SuperDimension::new(1, 1) {
        return Err(Error::Precondition(format!("{label} is not irreducible: superdimension {}", m.superdim())));
    }
    m.validate()
}

/// Builds `X = I ⊗_{Q₁⊗Q₁} (V⊗W)`, realized as `E₁₁·(V⊗W)` with `I = E₁₁·(Q₁⊗Q₁)`.
pub fn half_tensor(v: &SuperModule<GaussRational>, w: &SuperModule<GaussRational>) -> Result<HalfTensor> {
    check_q1_module(v, "V")?;
    check_q1_module(w, "W")?;
    let algebra = Arc::new(tensor_superalgebras(v.algebra(), w.algebra()));
    let module = v.tensor(w, algebra.clone())?;
    let [e, e12, e21, _] = q1q1_matrix_units(&algebra);
    let pe = module.act(&e);
    let mut ech = Echelon::new(module.dim());
    let mut x_basis = Vec::new();
    let mut x_parities = Vec::new();
    // image of e restricted to each parity keeps the basis homogeneous
    for c in 0..module.dim() {
        let col = pe.column(c);
        if ech.insert(sparse_from_dense(&col)) {
            x_parities.push(module.parities()[c]);
            x_basis.push(col);
        }
    }
    Ok(HalfTensor {
        algebra,
        module,
        x_basis,
        x_parities,
        e,
        e21,
        e12,
        factor_parities: (v.parities().to_vec(), w.parities().to_vec()),
    })
}

fn columns_matrix(cols: &[Vec<GaussRational>], n: usize) -> Matrix<GaussRational> {
    let mut m = Matrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            m.set(i, j, c[i].clone());
        }
    }
    m
}

/// Checks `V⊗W ≅ X ⊕ ΠX` via `(x, y) ↦ x + E₂₁y`.
pub fn check_decomposition(h: &HalfTensor) -> bool {
    let n = h.module.dim();
    let e21 = h.module.act(&h.e21);
    let mut cols = h.x_basis.clone();
    let mut parities: Vec<Parity> = h.x_parities.clone();
    for (x, p) in h.x_basis.iter().zip(&h.x_parities) {
        cols.push(e21.mul_vec(x));
        parities.push(p.flip());
    }
    // each image column must be homogeneous of the declared parity
    let homogeneous = cols.iter().zip(&parities).all(|(c, p)| {
        c.iter().enumerate().all(|(i, x)| x.is_zero() || h.module.parities()[i] == *p)
    });
    homogeneous && cols.len() == n && columns_matrix(&cols, n).rank() == n
}

/// Coordinates of `y ∈ X` in the basis `x_basis`, if `y` lies in `X`.
fn x_coordinates(h: &HalfTensor, y: &[GaussRational]) -> Option<Vec<GaussRational>> {
    let n = h.module.dim();
    let k = h.x_basis.len();
    let mut cols = h.x_basis.clone();
    cols.push(y.to_vec());
    let m = columns_matrix(&cols, n);
    let ker = m.kernel();
    if ker.is_empty() {
        return None;
    }
    let v = ker.into_iter().find(|v| !v[k].is_zero())?;
    let inv = v[k].inv()?.neg();
    Some(v[..k].iter().map(|x| x.mul(&inv)).collect())
}

/// The braiding `V⊗W → W⊗V`, `v⊗w ↦ (−1)^{|v||w|} w⊗v`.
fn braiding(pv: &[Parity], pw: &[Parity]) -> Matrix<GaussRational> {
    let (dv, dw) = (pv.len(), pw.len());
    let mut t = Matrix::zeros(dv * dw, dv * dw);
    for i in 0..dv {
        for j in 0..dw {
            let s = koszul_sign(pv[i], pw[j]).to_scalar();
            t.set(j * dv + i, i * dw + j, GaussRational::from_scalar(s));
        }
    }
    t
}

/// For `X(V,W)` and `X(W,V)`: the maps `a ∘ τ` (`a` homogeneous in `Q₁⊗Q₁` of
/// the given parity) that carry `X(V,W)` into `X(W,V)`; returns the largest
/// rank achieved on a basis of that solution space.
pub fn swap_map_rank(hvw: &HalfTensor, hwv: &HalfTensor, parity: Parity) -> (usize, usize) {
    let tau = braiding(&hvw.factor_parities.0, &hvw.factor_parities.1);
    let n = hvw.module.dim();
    let alg = &hwv.algebra;
    let basis: Vec<usize> = (0..alg.dim()).filter(|&k| alg.parities()[k] == parity).collect();
    // constraint: (1 − e)·a·τ·x = 0 for each x in X(V,W)
    let one_minus_e = hwv.module.act(&axpy(alg.unit(), &GaussRational::one().neg(), &hwv.e));
    let mut ech = Echelon::new(basis.len());
    let images: Vec<Vec<Vec<GaussRational>>> = basis
        .iter()
        .map(|&k| {
            let a = hwv.module.act(&alg.basis_element(k));
            hvw.x_basis.iter().map(|x| one_minus_e.mul_vec(&a.mul_vec(&tau.mul_vec(x)))).collect()
        })
        .collect();
    for xi in 0..hvw.x_basis.len() {
        for r in 0..n {
            let row: Vec<GaussRational> = (0..basis.len()).map(|b| images[b][xi][r].clone()).collect();
            ech.insert(sparse_from_dense(&row));
        }
    }
    let kernel = ech.kernel();
    let mut best = 0;
    for v in &kernel {
        let a: SparseVec<GaussRational> =
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(b, c)| (basis[b], c.clone())).collect();
        let act = hwv.module.act(&a);
        let cols: Vec<Vec<GaussRational>> =
            hvw.x_basis.iter().map(|x| act.mul_vec(&tau.mul_vec(x))).collect();
        let coords: Option<Vec<Vec<GaussRational>>> = cols.iter().map(|c| x_coordinates(hwv, c)).collect();
        if let Some(coords) = coords {
            best = best.max(columns_matrix(&coords, hwv.x_basis.len()).rank());
        }
    }
    (kernel.len(), best)
}

/// Runs the whole half-tensor verification for `V`, `W`.
pub fn half_tensor_report(v: &SuperModule<GaussRational>, w: &SuperModule<GaussRational>) -> Result<HalfTensorReport> {
    let hvw = half_tensor(v, w)?;
    let hwv = half_tensor(w, v)?;
    let (_, odd_rank) = swap_map_rank(&hvw, &hwv, Parity::Odd);
    let (_, even_rank) = swap_map_rank(&hvw, &hwv, Parity::Even);
    let k = hvw.x_basis.len();
    let parity_shift_commutes = parity_shift_check(v, w, &hvw)?;
    Ok(HalfTensorReport {
        v: v.superdim(),
        w: w.superdim(),
        x: hvw.superdim(),
        matrix_identification: check_matrix_identification(&hvw.algebra),
        decomposition: check_decomposition(&hvw),
        swap_odd_iso: odd_rank == k,
        swap_no_even_iso: even_rank < k,
        parity_shift_commutes,
    })
}

/// `X(ΠV, W) ≅ ΠX(V, W)`, certified by an explicit even intertwiner.
pub fn parity_shift_check(
    v: &SuperModule<GaussRational>,
    w: &SuperModule<GaussRational>,
    hvw: &HalfTensor,
) -> Result<bool> {
    let shifted = half_tensor(&v.parity_shift(), w)?;
    let target = hvw.module.parity_shift();
    let (_, t) = find_intertwiner(&shifted.module, &target, Parity::Even);
    let Some(t) = t else { return Ok(false) };
    // T(X(ΠV,W)) ⊆ e·Π(V⊗W), which has the same underlying space as X(V,W)
    let pe = target.act(&hvw.e);
    let maps_into = shifted.x_basis.iter().all(|x| {
        let y = t.mul_vec(x);
        pe.mul_vec(&y) == y
    });
    Ok(maps_into && shifted.superdim() == hvw.superdim().parity_shift())
}
