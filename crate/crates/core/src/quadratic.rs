//! Quadratic spaces `Γ: Sym²(B) → V` and everything computed from them: the
//! supersymmetry algebra, the quadric ideal, Hilbert series of the coordinate
//! algebra and of its quadratic dual, graded Lie dimensions, slices,
//! supercharge vector fields and constraint equations.
//!
//! All rank computations are split into weight blocks of the largest diagonal
//! torus preserving `Γ` (weights `u` on `B`, `y` on `V` with
//! `u_i + u_j = y_k` whenever `Γ_ij` has a `k`-component). Every relation
//! used below is homogeneous for these weights, so the ranks add up.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{Parity, SuperDimension};
use crate::lie_super::LieSuperAlgebra;
use crate::linalg::{rational_rank, sparse_from_dense, Echelon, SparseVec};
use crate::scalar::{binomial, Scalar};
use crate::superpoly::{FreeSCAlgebra, Monomial, SuperDerivation, SuperPolynomial};

/// Size guards for the degree-wise rank computations.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Limits {
    /// Largest `dim Sym^d(B)` attempted.
    pub max_sym_dim: u64,
    /// Largest `(dim B)^d` attempted for the dual algebra.
    pub max_tensor_dim: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_sym_dim: 250_000, max_tensor_dim: 70_000 }
    }
}

/// Index of the unordered pair `i ≤ j` among `n` basis vectors.
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSpace {
    name: String,
    dim_b: usize,
    dim_v: usize,
    /// `gamma[pair_index(i, j)] = Γ(e_i, e_j)` as a sparse vector in `V`.
    gamma: Vec<SparseVec<Scalar>>,
    b_names: Vec<String>,
    v_names: Vec<String>,
}

/// JSON entry: 1-based `i ≤ j` and the `dimV` coordinates of `Γ(e_i, e_j)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaEntry {
    pub i: usize,
    pub j: usize,
    pub v: Vec<Scalar>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadraticSpaceJson {
    #[serde(default)]
    pub name: String,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    pub gamma: Vec<GammaEntry>,
}

impl QuadraticSpace {
    /// `entries` are 0-based `(i, j, Γ(e_i, e_j))`; `(j, i)` is the same entry.
    pub fn new(
        name: impl Into<String>,
        dim_b: usize,
        dim_v: usize,
        entries: Vec<(usize, usize, SparseVec<Scalar>)>,
    ) -> Result<Self> {
        if dim_b == 0 || dim_v == 0 {
            return Err(Error::MalformedInput("dimB and dimV must be positive".into()));
        }
        let mut gamma = vec![Vec::new(); dim_b * (dim_b + 1) / 2];
        let mut seen = vec![false; gamma.len()];
        for (i, j, v) in entries {
            if i >= dim_b || j >= dim_b || v.iter().any(|(k, _)| *k >= dim_v) {
                return Err(Error::MalformedInput(format!("gamma entry ({}, {}) out of range", i + 1, j + 1)));
            }
            let p = pair_index(i, j, dim_b);
            if seen[p] {
                return Err(Error::MalformedInput(format!("gamma entry ({}, {}) given twice", i + 1, j + 1)));
            }
            seen[p] = true;
            gamma[p] = v;
        }
        let space = QuadraticSpace {
            name: name.into(),
            dim_b,
            dim_v,
            gamma,
            b_names: (1..=dim_b).map(|i| format!("Q{i}")).collect(),
            v_names: (1..=dim_v).map(|i| format!("V{i}")).collect(),
        };
        let rank = space.gamma_rank();
        if rank != dim_v {
            return Err(Error::Invalid(format!("Γ is not surjective: rank {rank} < dimV = {dim_v}")));
        }
        Ok(space)
    }

    pub fn with_names(mut self, b_names: Vec<String>, v_names: Vec<String>) -> Result<Self> {
        if b_names.len() != self.dim_b || v_names.len() != self.dim_v {
            return Err(Error::MalformedInput("wrong number of basis names".into()));
        }
        self.b_names = b_names;
        self.v_names = v_names;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn b_names(&self) -> &[String] {
        &self.b_names
    }

    pub fn v_names(&self) -> &[String] {
        &self.v_names
    }

    pub fn gamma(&self, i: usize, j: usize) -> &SparseVec<Scalar> {
        &self.gamma[pair_index(i, j, self.dim_b)]
    }

    fn gamma_rank(&self) -> usize {
        // rank of the dimV × pairs coefficient matrix, computed on its transpose
        let mut e = Echelon::new(self.dim_v);
        for g in &self.gamma {
            e.insert(g.clone());
            if e.is_full() {
                break;
            }
        }
        e.rank()
    }

    /// `Γ(x, y)` for dense vectors in `B`.
    pub fn gamma_bilinear(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim_v];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, g) in self.gamma(i, j) {
                    out[*k] += &c * g;
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> QuadraticSpaceJson {
        let mut gamma = Vec::new();
        for (i, j) in pairs(self.dim_b) {
            let g = self.gamma(i, j);
            if !g.is_empty() {
                let mut v = vec![Scalar::zero(); self.dim_v];
                for (k, c) in g {
                    v[*k] = c.clone();
                }
                gamma.push(GammaEntry { i: i + 1, j: j + 1, v });
            }
        }
        QuadraticSpaceJson { name: self.name.clone(), dim_b: self.dim_b, dim_v: self.dim_v, gamma }
    }

    pub fn from_json(j: &QuadraticSpaceJson) -> Result<Self> {
        let mut entries = Vec::new();
        for e in &j.gamma {
            if e.i == 0 || e.j == 0 || e.i > j.dim_b || e.j > j.dim_b {
                return Err(Error::MalformedInput(format!("gamma index ({}, {}) out of range 1..={}", e.i, e.j, j.dim_b)));
            }
            if e.i > e.j {
                return Err(Error::MalformedInput(format!("gamma entry ({}, {}) must have i ≤ j", e.i, e.j)));
            }
            if e.v.len() != j.dim_v {
                return Err(Error::MalformedInput(format!(
                    "gamma entry ({}, {}) has {} coordinates, expected {}",
                    e.i,
                    e.j,
                    e.v.len(),
                    j.dim_v
                )));
            }
            entries.push((e.i - 1, e.j - 1, sparse_from_dense(&e.v)));
        }
        let name = if j.name.is_empty() { "unnamed".to_string() } else { j.name.clone() };
        Self::new(name, j.dim_b, j.dim_v, entries)
    }

    /// Canonical text of the table: independent of entry order and of the name.
    pub fn canonical_key(&self) -> String {
        let mut out = format!("B={};V={}", self.dim_b, self.dim_v);
        for (i, j) in pairs(self.dim_b) {
            let g = self.gamma(i, j);
            if !g.is_empty() {
                out.push_str(&format!(";{},{}:", i + 1, j + 1));
                let parts: Vec<String> = g.iter().map(|(k, c)| format!("{}={}", k + 1, c)).collect();
                out.push_str(&parts.join(","));
            }
        }
        out
    }

    /// Integer weights `(u, y)` spanning all diagonal gradings preserved by `Γ`.
    pub fn diagonal_weights(&self) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
        let (n, m) = (self.dim_b, self.dim_v);
        let mut e = Echelon::new(n + m);
        for (i, j) in pairs(n) {
            for (k, _) in self.gamma(i, j) {
                let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                *row.entry(i).or_default() += Scalar::one();
                *row.entry(j).or_default() += Scalar::one();
                row.insert(n + k, Scalar::from_int(-1));
                e.insert(row.into_iter().filter(|(_, c)| !c.is_zero()).collect());
            }
        }
        let kernel = e.kernel();
        let scaled: Vec<Vec<i64>> = kernel
            .iter()
            .map(|v| {
                let l = crate::scalar::lcm_of_denominators(v.iter());
                let l = Scalar::from(l);
                v.iter().map(|x| (x * &l).to_i64().expect("small weights")).collect()
            })
            .collect();
        let u = (0..n).map(|i| scaled.iter().map(|w| w[i]).collect()).collect();
        let y = (0..m).map(|k| scaled.iter().map(|w| w[n + k]).collect()).collect();
        (u, y)
    }

    /// Lie superalgebra `t_Γ`: odd `B` (indices `0..dimB`), even central `V`, `[b, b'] = Γ(b, b')`.
    pub fn susy_algebra(&self) -> LieSuperAlgebra {
        let n = self.dim_b;
        let mut basis: Vec<(String, Parity)> = self.b_names.iter().map(|s| (s.clone(), Parity::Odd)).collect();
        basis.extend(self.v_names.iter().map(|s| (s.clone(), Parity::Even)));
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let g = self.gamma(i, j);
                if !g.is_empty() {
                    entries.push((i, j, g.iter().map(|(k, c)| (n + k, c.clone())).collect()));
                }
            }
        }
        LieSuperAlgebra::new(format!("t({})", self.name), basis, entries).expect("indices in range")
    }

    /// The `dimV` quadrics `λ_k(Γ(b, b))`.
    pub fn quadric_equations(&self) -> QuadricIdeal {
        let n = self.dim_b;
        let mut generators = vec![Quadric { terms: Vec::new() }; self.dim_v];
        for (i, j) in pairs(n) {
            for (k, c) in self.gamma(i, j) {
                let coef = if i == j { c.clone() } else { c * &Scalar::from_int(2) };
                generators[*k].terms.push((i, j, coef));
            }
        }
        let rank = {
            let mut e = Echelon::new(n * (n + 1) / 2);
            for q in &generators {
                e.insert(q.terms.iter().map(|(i, j, c)| (pair_index(*i, *j, n), c.clone())).collect());
            }
            e.rank()
        };
        assert_eq!(rank, self.dim_v, "surjective Γ gives independent quadrics");
        QuadricIdeal { dim_b: n, generators }
    }

    /// `h_d = dim Sym^d − rank(Sym^{d−2} · I₂)` for `d ≤ n_max`.
    pub fn hilbert_series(&self, n_max: usize, limits: &Limits) -> Result<HilbertSeries> {
        let n = self.dim_b;
        let ideal = self.quadric_equations();
        let (wb, _) = self.diagonal_weights();
        let mut coefficients = Vec::with_capacity(n_max + 1);
        for d in 0..=n_max {
            let total = sym_dim(n, d);
            if d < 2 {
                coefficients.push(total);
                continue;
            }
            if total > limits.max_sym_dim {
                return Err(Error::ResourceGuard(format!(
                    "dim Sym^{d}(B) = {total} exceeds the limit {}",
                    limits.max_sym_dim
                )));
            }
            let mons = monomials(n, d);
            let mut blocks: HashMap<Vec<i64>, usize> = HashMap::new();
            let mut block_sizes: Vec<usize> = Vec::new();
            let mut lookup: HashMap<Vec<u8>, (usize, usize)> = HashMap::with_capacity(mons.len());
            for m in mons {
                let w = weight_of(&m, &wb);
                let next = blocks.len();
                let b = *blocks.entry(w).or_insert(next);
                if b == block_sizes.len() {
                    block_sizes.push(0);
                }
                lookup.insert(m, (b, block_sizes[b]));
                block_sizes[b] += 1;
            }
            let mut block_rows: Vec<Vec<SparseVec<Scalar>>> = vec![Vec::new(); block_sizes.len()];
            for m in monomials(n, d - 2) {
                for q in &ideal.generators {
                    let mut block = None;
                    let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for (i, j, c) in &q.terms {
                        let mut prod = m.clone();
                        prod.push(*i as u8);
                        prod.push(*j as u8);
                        prod.sort_unstable();
                        let (b, col) = lookup[&prod];
                        debug_assert!(block.is_none_or(|x| x == b), "quadric not weight-homogeneous");
                        block = Some(b);
                        *row.entry(col).or_default() += c;
                    }
                    if let Some(b) = block {
                        let row: SparseVec<Scalar> = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                        if !row.is_empty() {
                            block_rows[b].push(row);
                        }
                    }
                }
            }
            let rank: usize =
                block_rows.into_iter().zip(&block_sizes).map(|(rows, &cols)| rational_rank(cols, rows)).sum();
            coefficients.push(total - rank as u64);
        }
        Ok(HilbertSeries { coefficients })
    }

    /// Compares the Hilbert series with `(1 − t²)^{dimV} / (1 − t)^{dimB}`.
    pub fn is_complete_intersection(&self, n_max: usize, limits: &Limits) -> Result<CiVerdict> {
        let h = self.hilbert_series(n_max, limits)?;
        Ok(ci_verdict(&h, self.dim_b, self.dim_v))
    }

    /// Kernel of `Γ` on `Sym²(B)`, as symmetric tensors `Σ w_ab e_a⊗e_b`.
    pub fn dual_relations(&self) -> Vec<SparseVec<Scalar>> {
        let n = self.dim_b;
        let (wb, _) = self.diagonal_weights();
        let mut by_weight: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, j) in pairs(n) {
            by_weight.entry(add_weights(&wb[i], &wb[j])).or_default().push((i, j));
        }
        let mut out = Vec::new();
        for (_, ps) in by_weight {
            // columns = pairs in this block; one equation per V coordinate
            let mut rows: BTreeMap<usize, SparseVec<Scalar>> = BTreeMap::new();
            for (c, &(i, j)) in ps.iter().enumerate() {
                let factor = if i == j { Scalar::one() } else { Scalar::from_int(2) };
                for (k, g) in self.gamma(i, j) {
                    rows.entry(*k).or_default().push((c, g * &factor));
                }
            }
            let mut e = Echelon::new(ps.len());
            for (_, r) in rows {
                e.insert(r);
            }
            for kv in e.kernel() {
                let mut t: Vec<(usize, Scalar)> = Vec::new();
                for (c, x) in kv.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let (i, j) = ps[c];
                    t.push((i * n + j, x.clone()));
                    if i != j {
                        t.push((j * n + i, x.clone()));
                    }
                }
                t.sort_by_key(|e| e.0);
                out.push(t);
            }
        }
        out
    }

    /// Hilbert series of `T(B)/(W)` with `W = Ker Γ ⊂ Sym²(B)`, computed
    /// degree by degree as `R^!_d = (R^!_{d−1} ⊗ B) / (R^!_{d−2} ⊗ W)`.
    pub fn dual_hilbert_series(&self, n_max: usize, limits: &Limits) -> Result<HilbertSeries> {
        let n = self.dim_b;
        let tensor_dim = (n as u64).checked_pow(n_max as u32).unwrap_or(u64::MAX);
        if tensor_dim > limits.max_tensor_dim {
            return Err(Error::ResourceGuard(format!(
                "(dim B)^{n_max} = {tensor_dim} exceeds the limit {}",
                limits.max_tensor_dim
            )));
        }
        let (wb, _) = self.diagonal_weights();
        let relations = self.dual_relations();
        let mut coefficients = vec![1u64];
        if n_max == 0 {
            return Ok(HilbertSeries { coefficients });
        }
        // per level: weight of each basis element, and normal forms of the
        // candidates (r, a) ↦ r·n + a of that level in terms of its basis
        let mut prev_count = 1;
        let mut cur_weights: Vec<Vec<i64>> = wb.clone();
        let mut cur_nf: Vec<SparseVec<Scalar>> = (0..n).map(|a| vec![(a, Scalar::one())]).collect();
        coefficients.push(n as u64);
        for _d in 2..=n_max {
            // candidates of the new level
            let ncand = cur_weights.len() * n;
            let mut blocks: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
            for r in 0..cur_weights.len() {
                for a in 0..n {
                    blocks.entry(add_weights(&cur_weights[r], &wb[a])).or_default().push(r * n + a);
                }
            }
            let mut where_: Vec<(usize, usize)> = vec![(0, 0); ncand];
            let block_list: Vec<(Vec<i64>, Vec<usize>)> = blocks.into_iter().collect();
            for (b, (_, cols)) in block_list.iter().enumerate() {
                for (local, &c) in cols.iter().enumerate() {
                    where_[c] = (b, local);
                }
            }
            let mut echs: Vec<Echelon<Scalar>> = block_list.iter().map(|(_, c)| Echelon::new(c.len())).collect();
            // relation rows: for r2 in level d−2, w in W: Σ w_ab NF_{d−1}(r2·e_a) ⊗ e_b
            for r2 in 0..prev_count {
                for w in &relations {
                    let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                    let mut block = None;
                    for (ab, c) in w {
                        let (a, b) = (ab / n, ab % n);
                        for (r1, x) in &cur_nf[r2 * n + a] {
                            let cand = r1 * n + b;
                            let (blk, local) = where_[cand];
                            debug_assert!(block.is_none_or(|q| q == blk));
                            block = Some(blk);
                            *row.entry(local).or_default() += c * x;
                        }
                    }
                    if let Some(blk) = block {
                        if !echs[blk].is_full() {
                            echs[blk].insert(row.into_iter().filter(|(_, c)| !c.is_zero()).collect());
                        }
                    }
                }
            }
            // new basis = free columns, block by block
            let mut new_weights = Vec::new();
            let mut new_index: Vec<Option<usize>> = vec![None; ncand];
            for (b, (w, cols)) in block_list.iter().enumerate() {
                echs[b].fully_reduce();
                for local in echs[b].free_columns() {
                    new_index[cols[local]] = Some(new_weights.len());
                    new_weights.push(w.clone());
                }
            }
            let mut new_nf: Vec<SparseVec<Scalar>> = Vec::with_capacity(ncand);
            for c in 0..ncand {
                if let Some(i) = new_index[c] {
                    new_nf.push(vec![(i, Scalar::one())]);
                } else {
                    let (b, local) = where_[c];
                    let cols = &block_list[b].1;
                    let nf = echs[b].normal_form(&[(local, Scalar::one())]);
                    let mut v: Vec<(usize, Scalar)> =
                        nf.into_iter().map(|(l, x)| (new_index[cols[l]].expect("free column"), x)).collect();
                    v.sort_by_key(|e| e.0);
                    new_nf.push(v);
                }
            }
            coefficients.push(new_weights.len() as u64);
            prev_count = cur_weights.len();
            cur_weights = new_weights;
            cur_nf = new_nf;
        }
        Ok(HilbertSeries { coefficients })
    }

    /// Graded dimensions of `t̃_Γ` extracted from the dual series.
    pub fn lie_dims(&self, n_max: usize, limits: &Limits) -> Result<GradedLieDims> {
        let h = self.dual_hilbert_series(n_max, limits)?;
        lie_dims_from_dual(&h.coefficients)
    }

    pub fn koszul_witness(&self, n_max: usize, limits: &Limits) -> Result<KoszulReport> {
        let h = self.hilbert_series(n_max, limits)?;
        let hd = self.dual_hilbert_series(n_max, limits)?;
        Ok(koszul_witness_from(&h.coefficients, &hd.coefficients))
    }

    /// Restriction of `Γ` to the span of `vectors` (dense, in `B`).
    pub fn slice(&self, vectors: &[Vec<Scalar>]) -> Result<SliceResult> {
        let k = vectors.len();
        if vectors.iter().any(|v| v.len() != self.dim_b) {
            return Err(Error::MalformedInput(format!("slice vectors must have {} coordinates", self.dim_b)));
        }
        let mut e = Echelon::new(self.dim_b);
        for v in vectors {
            if !e.insert(sparse_from_dense(v)) {
                return Err(Error::Precondition("slice vectors are linearly dependent".into()));
            }
        }
        let images: Vec<(usize, usize, Vec<Scalar>)> = pairs(k)
            .into_iter()
            .map(|(a, b)| (a, b, self.gamma_bilinear(&vectors[a], &vectors[b])))
            .collect();
        let mut image = Echelon::new(self.dim_v);
        for (_, _, g) in &images {
            image.insert(sparse_from_dense(g));
        }
        if image.rank() == 0 {
            return Ok(SliceResult::Abelian { dim_b: k });
        }
        image.fully_reduce();
        // coordinates in the reduced basis are read off at the pivot columns
        let pivots = image.pivots();
        let entries = images
            .into_iter()
            .map(|(a, b, g)| {
                let coords: Vec<Scalar> = pivots.iter().map(|&p| g[p].clone()).collect();
                (a, b, sparse_from_dense(&coords))
            })
            .collect();
        let space = QuadraticSpace::new(format!("{}|slice{}", self.name, k), k, pivots.len(), entries)?;
        Ok(SliceResult::Space(space))
    }

    /// The slice is a complete intersection through degree `n_max` (an abelian slice counts).
    pub fn is_null_subalgebra(&self, vectors: &[Vec<Scalar>], n_max: usize, limits: &Limits) -> Result<bool> {
        match self.slice(vectors)? {
            SliceResult::Abelian { .. } => Ok(true),
            SliceResult::Space(s) => Ok(s.is_complete_intersection(n_max, limits)?.is_ci),
        }
    }

    /// `D_b = ∂_{ξ_b} + ½ Σ_c ξ_c ∂_{x_{Γ(b, e_c)}}` and `∂_v` on `k[x_V] ⊗ Λ[ξ_B]`.
    pub fn susy_vector_fields(&self) -> SusyFields {
        let even: Vec<String> = (1..=self.dim_v).map(|k| format!("x{k}")).collect();
        let odd: Vec<String> = (1..=self.dim_b).map(|i| format!("xi{i}")).collect();
        let alg = FreeSCAlgebra::new(&even, &odd).expect("distinct names");
        let half = Scalar::new(1, 2);
        let mut d = Vec::with_capacity(self.dim_b);
        for b in 0..self.dim_b {
            let mut even_images = vec![SuperPolynomial::zero(&alg); self.dim_v];
            for c in 0..self.dim_b {
                let xi_c = SuperPolynomial::odd_gen(&alg, c);
                for (k, g) in self.gamma(b, c) {
                    even_images[*k] = &even_images[*k] + &xi_c.scale(&(g * &half));
                }
            }
            let mut odd_images = vec![SuperPolynomial::zero(&alg); self.dim_b];
            odd_images[b] = SuperPolynomial::one(&alg);
            d.push(SuperDerivation::from_images(&alg, Parity::Odd, even_images, odd_images).expect("parities match"));
        }
        let partials = (0..self.dim_v).map(|k| SuperDerivation::partial_even(&alg, k)).collect();
        SusyFields { algebra: alg, d, partials }
    }

    /// Kernel of `{D_b Φ = 0 : b ∈ B'}` on superfields of total degree ≤ m,
    /// for each `m ≤ max_degree`. Requires `Γ` to vanish on `Sym²(B')`.
    pub fn chiral_superfields(&self, vectors: &[Vec<Scalar>], max_degree: usize) -> Result<ChiralReport> {
        for (a, b) in pairs(vectors.len()) {
            if self.gamma_bilinear(&vectors[a], &vectors[b]).iter().any(|x| !x.is_zero()) {
                return Err(Error::Precondition(format!(
                    "Γ does not vanish on the span of the given vectors (pair {}, {})",
                    a + 1,
                    b + 1
                )));
            }
        }
        let fields = self.susy_vector_fields();
        let alg = fields.algebra.clone();
        let ops: Vec<SuperDerivation> = vectors.iter().map(|v| fields.d_of(v)).collect();
        let mons = superfield_monomials(self.dim_v, self.dim_b, max_degree);
        let index: HashMap<Monomial, usize> = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let images: Vec<Vec<SparseVec<Scalar>>> = mons
            .iter()
            .map(|m| {
                let p = SuperPolynomial::monomial(&alg, m.clone(), Scalar::one());
                ops.iter()
                    .map(|d| {
                        let img = d.apply(&p).expect("same algebra");
                        let mut v: SparseVec<Scalar> =
                            img.terms().iter().map(|(mm, c)| (index[mm], c.clone())).collect();
                        v.sort_by_key(|e| e.0);
                        v
                    })
                    .collect()
            })
            .collect();
        let mut dims = Vec::new();
        let mut basis = Vec::new();
        for m in 0..=max_degree {
            let cols: Vec<usize> = (0..mons.len()).filter(|&i| mons[i].degree() as usize <= m).collect();
            // equations: one per (operator, output monomial)
            let mut rows: BTreeMap<(usize, usize), SparseVec<Scalar>> = BTreeMap::new();
            for (c, &i) in cols.iter().enumerate() {
                for (o, img) in images[i].iter().enumerate() {
                    for (out, x) in img {
                        rows.entry((o, *out)).or_default().push((c, x.clone()));
                    }
                }
            }
            let mut e = Echelon::new(cols.len());
            for (_, r) in rows {
                e.insert(r);
            }
            let kernel = e.kernel();
            dims.push(kernel.len());
            if m == max_degree {
                basis = kernel
                    .iter()
                    .map(|v| {
                        SuperPolynomial::from_terms(
                            &alg,
                            v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (mons[cols[c]].clone(), x.clone())),
                        )
                    })
                    .collect();
            }
        }
        Ok(ChiralReport { max_degree, filtration_dims: dims, basis })
    }

    /// Components `F(b, b') = D_b A_{b'} + D_{b'} A_b + A_b A_{b'} + A_{b'} A_b − A_{Γ(b,b')}`
    /// of the curvature of `∇_b = D_b + A_b` on `B'` (pairs `a ≤ b` of the given vectors).
    pub fn constraint_curvature(
        &self,
        vectors: &[Vec<Scalar>],
        a_b: &[PolyMatrix],
        a_v: Option<&[PolyMatrix]>,
    ) -> Result<Vec<CurvatureComponent>> {
        if a_b.len() != vectors.len() {
            return Err(Error::MalformedInput("one connection matrix per slice vector is required".into()));
        }
        let fields = self.susy_vector_fields();
        let r = a_b.first().map_or(0, PolyMatrix::size);
        for a in a_b.iter().chain(a_v.unwrap_or(&[])) {
            if a.size() != r {
                return Err(Error::MalformedInput("connection matrices have different sizes".into()));
            }
            if a.entries.iter().flatten().any(|p| p.algebra() != &fields.algebra) {
                return Err(Error::IncompatibleAlgebras("connection entries must live in the superfield algebra".into()));
            }
        }
        if let Some(av) = a_v {
            if av.len() != self.dim_v {
                return Err(Error::MalformedInput(format!("{} even potentials expected", self.dim_v)));
            }
        }
        for a in a_b {
            if !a.entries.iter().flatten().all(|p| p.has_parity(Parity::Odd)) {
                return Err(Error::Precondition("odd connection matrices are required".into()));
            }
        }
        let ops: Vec<SuperDerivation> = vectors.iter().map(|v| fields.d_of(v)).collect();
        let mut out = Vec::new();
        for (a, b) in pairs(vectors.len()) {
            let mut f = a_b[b].apply(&ops[a]).add(&a_b[a].apply(&ops[b]));
            f = f.add(&a_b[a].mul(&a_b[b])).add(&a_b[b].mul(&a_b[a]));
            if let Some(av) = a_v {
                let g = self.gamma_bilinear(&vectors[a], &vectors[b]);
                for (k, c) in g.iter().enumerate() {
                    if !c.is_zero() {
                        f = f.add(&av[k].scale(&-c));
                    }
                }
            }
            out.push(CurvatureComponent { pair: (a + 1, b + 1), vanishes: f.is_zero(), matrix: f });
        }
        Ok(out)
    }
}

fn add_weights(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn weight_of(m: &[u8], w: &[Vec<i64>]) -> Vec<i64> {
    let mut out = vec![0i64; w.first().map_or(0, Vec::len)];
    for &v in m {
        for (o, x) in out.iter_mut().zip(&w[v as usize]) {
            *o += x;
        }
    }
    out
}

/// `dim Sym^d(k^n)`.
pub fn sym_dim(n: usize, d: usize) -> u64 {
    if n == 0 {
        return u64::from(d == 0);
    }
    binomial((n + d - 1) as u64, d as u64).to_i64().map_or(u64::MAX, |x| x as u64)
}

/// Nondecreasing index sequences of length `d` over `0..n`.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, d: usize, start: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u8);
            rec(n, d, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, 0, &mut Vec::with_capacity(d), &mut out);
    out
}

fn superfield_monomials(m: usize, n: usize, max_degree: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for odd in 0u64..(1u64 << n) {
        let k = odd.count_ones() as usize;
        if k > max_degree {
            continue;
        }
        let support: Vec<usize> = (0..n).filter(|i| odd >> i & 1 == 1).collect();
        for d in 0..=(max_degree - k) {
            for mono in monomials(m, d) {
                let mut even = vec![0u32; m];
                for v in mono {
                    even[v as usize] += 1;
                }
                out.push(Monomial::new(even, &support).expect("sorted support"));
            }
        }
    }
    out.sort();
    out
}

/// A quadratic form `Σ c · b_i b_j` (`i ≤ j`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quadric {
    pub terms: Vec<(usize, usize, Scalar)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadricIdeal {
    pub dim_b: usize,
    pub generators: Vec<Quadric>,
}

impl QuadricIdeal {
    /// Generators as polynomials in even variables named after `B`, or
    /// `b1, b2, …` when those names are not valid generator names.
    pub fn to_polynomials(&self, names: &[String]) -> Vec<SuperPolynomial> {
        let alg = FreeSCAlgebra::new(names, &[] as &[String]).unwrap_or_else(|_| {
            let fallback: Vec<String> = (1..=self.dim_b).map(|i| format!("b{i}")).collect();
            FreeSCAlgebra::new(&fallback, &[] as &[String]).expect("distinct names")
        });
        self.generators
            .iter()
            .map(|q| {
                SuperPolynomial::from_terms(
                    &alg,
                    q.terms.iter().map(|(i, j, c)| {
                        let mut e = vec![0u32; self.dim_b];
                        e[*i] += 1;
                        e[*j] += 1;
                        (Monomial::new(e, &[]).expect("no odd part"), c.clone())
                    }),
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    pub coefficients: Vec<u64>,
}

impl HilbertSeries {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }
}

/// Coefficients of `(1 − t²)^{dim_v} / (1 − t)^{dim_b}` through `n_max`.
pub fn ci_series(dim_b: usize, dim_v: usize, n_max: usize) -> Vec<i128> {
    let mut num = vec![0i128; n_max + 1];
    for j in 0..=dim_v {
        if 2 * j > n_max {
            break;
        }
        let c = binomial(dim_v as u64, j as u64).to_i64().expect("small") as i128;
        num[2 * j] = if j % 2 == 0 { c } else { -c };
    }
    (0..=n_max)
        .map(|d| (0..=d).map(|i| num[i] * sym_dim(dim_b, d - i) as i128).sum())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CiVerdict {
    pub is_ci: bool,
    pub through_degree: usize,
    pub series: Vec<u64>,
    pub expected: Vec<i128>,
    /// `(degree, actual, expected)` of the first mismatch.
    pub first_failure: Option<(usize, u64, i128)>,
}

pub fn ci_verdict(h: &HilbertSeries, dim_b: usize, dim_v: usize) -> CiVerdict {
    let n = h.degree();
    let expected = ci_series(dim_b, dim_v, n);
    let first_failure = (0..=n).find(|&d| h.coefficients[d] as i128 != expected[d]).map(|d| (d, h.coefficients[d], expected[d]));
    CiVerdict { is_ci: first_failure.is_none(), through_degree: n, series: h.coefficients.clone(), expected, first_failure }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedLieDims {
    /// `dims[d - 1] = dim t̃^d`.
    pub dims: Vec<u64>,
}

/// Product `Π_{d odd}(1+t^d)^{L_d} Π_{d even}(1−t^d)^{−L_d}` through `n_max`.
pub fn pbw_series(dims: &[u64], n_max: usize) -> Vec<i128> {
    let mut p = vec![0i128; n_max + 1];
    p[0] = 1;
    for (idx, &l) in dims.iter().enumerate() {
        let d = idx + 1;
        if d > n_max {
            break;
        }
        // (1 + t^d)^L for odd d, (1 − t^d)^{−L} = Σ C(L + m − 1, m) t^{dm} for even d
        let mut factor = vec![0i128; n_max + 1];
        for m in 0..=n_max / d {
            let c = if m == 0 {
                Scalar::one()
            } else if d % 2 == 1 {
                binomial(l, m as u64)
            } else if l == 0 {
                Scalar::zero()
            } else {
                binomial(l + m as u64 - 1, m as u64)
            };
            factor[d * m] = c.to_i64().map(i128::from).expect("PBW coefficient fits in i64");
        }
        let mut next = vec![0i128; n_max + 1];
        for i in 0..=n_max {
            if p[i] == 0 {
                continue;
            }
            for j in 0..=n_max - i {
                next[i + j] += p[i] * factor[j];
            }
        }
        p = next;
    }
    p
}

/// Inverts the super-PBW formula degree by degree.
pub fn lie_dims_from_dual(h_dual: &[u64]) -> Result<GradedLieDims> {
    let n_max = h_dual.len().saturating_sub(1);
    let mut dims: Vec<u64> = Vec::new();
    for d in 1..=n_max {
        let p = pbw_series(&dims, d);
        let l = h_dual[d] as i128 - p[d];
        if l < 0 {
            return Err(Error::Inconsistency(format!("negative Lie dimension {l} in degree {d}")));
        }
        dims.push(l as u64);
    }
    let check = pbw_series(&dims, n_max);
    if (0..=n_max).any(|d| check[d] != h_dual[d] as i128) {
        return Err(Error::Inconsistency("PBW product does not reproduce the dual series".into()));
    }
    Ok(GradedLieDims { dims })
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulReport {
    pub hilbert: Vec<u64>,
    pub dual: Vec<u64>,
    /// `Σ_{i+j=d} (−1)^j h_i h^!_j` for `d = 1..N`.
    pub sums: Vec<i128>,
    pub passed: bool,
    pub first_failure: Option<usize>,
}

pub fn koszul_witness_from(h: &[u64], h_dual: &[u64]) -> KoszulReport {
    let n = h.len().min(h_dual.len()).saturating_sub(1);
    let sums: Vec<i128> = (1..=n)
        .map(|d| {
            (0..=d)
                .map(|j| {
                    let v = h[d - j] as i128 * h_dual[j] as i128;
                    if j % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                })
                .sum()
        })
        .collect();
    let first_failure = sums.iter().position(|&s| s != 0).map(|i| i + 1);
    KoszulReport { hilbert: h.to_vec(), dual: h_dual.to_vec(), sums, passed: first_failure.is_none(), first_failure }
}

#[derive(Clone, Debug)]
pub enum SliceResult {
    Space(QuadraticSpace),
    /// `Γ` vanishes on the slice.
    Abelian { dim_b: usize },
}

impl SliceResult {
    pub fn dim_b(&self) -> usize {
        match self {
            SliceResult::Space(s) => s.dim_b(),
            SliceResult::Abelian { dim_b } => *dim_b,
        }
    }

    pub fn dim_v(&self) -> usize {
        match self {
            SliceResult::Space(s) => s.dim_v(),
            SliceResult::Abelian { .. } => 0,
        }
    }
}

/// Supercharge vector fields on `k[x_V] ⊗ Λ[ξ_B]`.
pub struct SusyFields {
    pub algebra: Arc<FreeSCAlgebra>,
    pub d: Vec<SuperDerivation>,
    pub partials: Vec<SuperDerivation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomomorphismReport {
    pub pairs_checked: usize,
    pub passed: bool,
    pub failures: Vec<(String, String)>,
}

impl SusyFields {
    /// `D_v = Σ v_c D_c`.
    pub fn d_of(&self, v: &[Scalar]) -> SuperDerivation {
        let mut out = SuperDerivation::zero(&self.algebra, Parity::Odd);
        for (c, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out = out.try_add(&self.d[c].scale(x)).expect("same parity");
            }
        }
        out
    }

    /// `∂_v = Σ v_k ∂_{x_k}`.
    pub fn partial_of(&self, v: &[(usize, Scalar)]) -> SuperDerivation {
        let mut out = SuperDerivation::zero(&self.algebra, Parity::Even);
        for (k, x) in v {
            out = out.try_add(&self.partials[*k].scale(x)).expect("same parity");
        }
        out
    }

    /// Checks that `b ↦ D_b`, `v ↦ ∂_v` respects brackets on all basis pairs of `t_Γ`.
    pub fn check_homomorphism(&self, space: &QuadraticSpace) -> HomomorphismReport {
        let t = space.susy_algebra();
        let n = space.dim_b();
        let ops: Vec<&SuperDerivation> = self.d.iter().chain(&self.partials).collect();
        let image = |v: &SparseVec<Scalar>| -> SuperDerivation {
            let mut odd = SuperDerivation::zero(&self.algebra, Parity::Odd);
            let mut even = SuperDerivation::zero(&self.algebra, Parity::Even);
            for (k, c) in v {
                if *k < n {
                    odd = odd.try_add(&self.d[*k].scale(c)).expect("odd");
                } else {
                    even = even.try_add(&self.partials[k - n].scale(c)).expect("even");
                }
            }
            if odd.is_zero() {
                even
            } else {
                odd
            }
        };
        let mut failures = Vec::new();
        let mut count = 0;
        for i in 0..ops.len() {
            for j in i..ops.len() {
                count += 1;
                let lhs = ops[i].supercommutator(ops[j]).expect("same algebra");
                let rhs = image(t.bracket_basis(i, j));
                let same = lhs.even_images() == rhs.even_images() && lhs.odd_images() == rhs.odd_images();
                if !same {
                    failures.push((t.names()[i].clone(), t.names()[j].clone()));
                }
            }
        }
        HomomorphismReport { pairs_checked: count, passed: failures.is_empty(), failures }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiralReport {
    pub max_degree: usize,
    /// `filtration_dims[m]` = dimension of solutions of total degree ≤ m.
    pub filtration_dims: Vec<usize>,
    pub basis: Vec<SuperPolynomial>,
}

/// Square matrix of superfields.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    pub entries: Vec<Vec<SuperPolynomial>>,
}

impl PolyMatrix {
    pub fn zeros(alg: &Arc<FreeSCAlgebra>, r: usize) -> Self {
        PolyMatrix { entries: vec![vec![SuperPolynomial::zero(alg); r]; r] }
    }

    pub fn identity(alg: &Arc<FreeSCAlgebra>, r: usize) -> Self {
        let mut m = Self::zeros(alg, r);
        for i in 0..r {
            m.entries[i][i] = SuperPolynomial::one(alg);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(SuperPolynomial::is_zero)
    }

    pub fn add(&self, o: &PolyMatrix) -> PolyMatrix {
        PolyMatrix {
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> PolyMatrix {
        PolyMatrix { entries: self.entries.iter().map(|r| r.iter().map(|x| x.scale(c)).collect()).collect() }
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        let r = self.size();
        let alg = self.entries[0][0].algebra().clone();
        let mut out = Self::zeros(&alg, r);
        for i in 0..r {
            for j in 0..r {
                let mut acc = SuperPolynomial::zero(&alg);
                for k in 0..r {
                    acc = &acc + &(&self.entries[i][k] * &o.entries[k][j]);
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    /// Entrywise application of a derivation.
    pub fn apply(&self, d: &SuperDerivation) -> PolyMatrix {
        PolyMatrix {
            entries: self.entries.iter().map(|r| r.iter().map(|x| d.apply(x).expect("same algebra")).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CurvatureComponent {
    /// 1-based indices into the slice vectors.
    pub pair: (usize, usize),
    pub vanishes: bool,
    pub matrix: PolyMatrix,
}

/// Potentials `A_b = g⁻¹ D_b(g)`, `A_v = g⁻¹ ∂_v(g)` of the gauge transform of
/// the trivial connection by an even invertible `g` with inverse `g_inv`.
pub fn pure_gauge(fields: &SusyFields, vectors: &[Vec<Scalar>], g: &PolyMatrix, g_inv: &PolyMatrix) -> (Vec<PolyMatrix>, Vec<PolyMatrix>) {
    let a_b = vectors.iter().map(|v| g_inv.mul(&g.apply(&fields.d_of(v)))).collect();
    let a_v = fields.partials.iter().map(|p| g_inv.mul(&g.apply(p))).collect();
    (a_b, a_v)
}

/// Random surjective `Γ` with small integer entries; deterministic in `seed`.
pub fn random_quadratic_space(dim_b: usize, dim_v: usize, seed: u64) -> Result<QuadraticSpace> {
    let npairs = dim_b * (dim_b + 1) / 2;
    if dim_v > npairs {
        return Err(Error::Precondition(format!("dimV = {dim_v} exceeds dim Sym²B = {npairs}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let mut entries = Vec::new();
        for (i, j) in pairs(dim_b) {
            let v: Vec<Scalar> = (0..dim_v)
                .map(|_| if rng.gen_bool(0.4) { Scalar::from_int(rng.gen_range(-2..=2)) } else { Scalar::zero() })
                .collect();
            let sv = sparse_from_dense(&v);
            if !sv.is_empty() {
                entries.push((i, j, sv));
            }
        }
        if let Ok(s) = QuadraticSpace::new(format!("random-{dim_b}-{dim_v}-{seed}"), dim_b, dim_v, entries) {
            return Ok(s);
        }
    }
    Err(Error::Inconsistency("no surjective sample found".into()))
}

/// Counts complete-intersection slices among random `k`-dimensional subspaces.
#[derive(Clone, Debug, Serialize)]
pub struct SliceSample {
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub complete_intersections: usize,
    /// Histogram of `dim V'` over the samples.
    pub dim_v_counts: BTreeMap<usize, usize>,
}

/// Experimental search over random slices; no maximality claim.
pub fn sample_slices(space: &QuadraticSpace, k: usize, trials: usize, seed: u64, n_max: usize, limits: &Limits) -> Result<SliceSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ci = 0;
    let mut hist = BTreeMap::new();
    let mut done = 0;
    while done < trials {
        let vectors: Vec<Vec<Scalar>> =
            (0..k).map(|_| (0..space.dim_b()).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect()).collect();
        let slice = match space.slice(&vectors) {
            Ok(s) => s,
            Err(Error::Precondition(_)) => continue,
            Err(e) => return Err(e),
        };
        done += 1;
        *hist.entry(slice.dim_v()).or_insert(0) += 1;
        let is_ci = match &slice {
            SliceResult::Abelian { .. } => true,
            SliceResult::Space(s) => s.is_complete_intersection(n_max, limits)?.is_ci,
        };
        ci += usize::from(is_ci);
    }
    Ok(SliceSample { k, trials, seed, complete_intersections: ci, dim_v_counts: hist })
}

/// Super-dimension `(dimV | dimB)` of `t_Γ`.
pub fn susy_superdim(space: &QuadraticSpace) -> SuperDimension {
    SuperDimension::new(space.dim_v(), space.dim_b())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::quadratic;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn pair_index_is_dense() {
        let n = 5;
        let idx: Vec<usize> = pairs(n).iter().map(|&(i, j)| pair_index(i, j, n)).collect();
        assert_eq!(idx, (0..15).collect::<Vec<_>>());
        assert_eq!(pair_index(3, 1, n), pair_index(1, 3, n));
    }

    #[test]
    fn d2_series() {
        let s = quadratic("d2-n11").unwrap();
        assert_eq!(s.hilbert_series(3, &lim()).unwrap().coefficients, vec![1, 2, 1, 0]);
        assert_eq!(s.dual_hilbert_series(3, &lim()).unwrap().coefficients, vec![1, 2, 3, 4]);
        assert_eq!(s.lie_dims(3, &lim()).unwrap().dims, vec![2, 2, 0]);
        assert!(s.koszul_witness(3, &lim()).unwrap().passed);
        assert!(s.is_complete_intersection(3, &lim()).unwrap().is_ci);
    }

    #[test]
    fn d4_series() {
        let s = quadratic("d4-n11").unwrap();
        let h = s.hilbert_series(3, &lim()).unwrap();
        assert_eq!(h.coefficients, vec![1, 4, 6, 8]);
        let ci = s.is_complete_intersection(3, &lim()).unwrap();
        assert!(!ci.is_ci);
        assert_eq!(ci.first_failure, Some((3, 8, 4)));
        assert!(s.koszul_witness(4, &lim()).unwrap().passed);
        assert!(s.lie_dims(3, &lim()).unwrap().dims[2] > 0);
    }

    #[test]
    fn d10_series() {
        let s = quadratic("d10-n10").unwrap();
        assert_eq!(s.quadric_equations().generators.len(), 10);
        assert_eq!(s.hilbert_series(4, &lim()).unwrap().coefficients, vec![1, 16, 126, 672, 2772]);
        let ci = s.is_complete_intersection(4, &lim()).unwrap();
        assert_eq!(ci.first_failure, Some((3, 672, 656)));
        let dual = s.dual_hilbert_series(4, &lim()).unwrap();
        assert_eq!(dual.coefficients, vec![1, 16, 130, 736, 3376]);
        assert_eq!(lie_dims_from_dual(&dual.coefficients[..4]).unwrap().dims, vec![16, 10, 16]);
        assert!(koszul_witness_from(&[1, 16, 126, 672, 2772], &dual.coefficients).passed);
    }

    #[test]
    fn full_square_and_guards() {
        // Γ = identity on Sym²(k²)
        let e = |k: usize| vec![(k, Scalar::one())];
        let s = QuadraticSpace::new("sq", 2, 3, vec![(0, 0, e(0)), (0, 1, e(1)), (1, 1, e(2))]).unwrap();
        assert_eq!(s.hilbert_series(3, &lim()).unwrap().coefficients, vec![1, 2, 0, 0]);
        assert_eq!(s.dual_hilbert_series(3, &lim()).unwrap().coefficients, vec![1, 2, 4, 8]);
        assert!(s.dual_relations().is_empty());
        let tight = Limits { max_sym_dim: 10, max_tensor_dim: 10 };
        assert!(matches!(quadratic("d10-n10").unwrap().hilbert_series(3, &tight), Err(Error::ResourceGuard(_))));
        assert!(matches!(s.dual_hilbert_series(4, &tight), Err(Error::ResourceGuard(_))));
    }

    #[test]
    fn rejects_non_surjective_and_bad_json() {
        assert!(matches!(QuadraticSpace::new("x", 2, 2, vec![(0, 0, vec![(0, Scalar::one())])]), Err(Error::Invalid(_))));
        let j: QuadraticSpaceJson = serde_json::from_str(r#"{"dimB":1,"dimV":1,"gamma":[{"i":1,"j":2,"v":["1"]}]}"#).unwrap();
        assert!(matches!(QuadraticSpace::from_json(&j), Err(Error::MalformedInput(_))));
        let s = quadratic("d4-n11").unwrap();
        let back = QuadraticSpace::from_json(&serde_json::from_str(&serde_json::to_string(&s.to_json()).unwrap()).unwrap()).unwrap();
        assert_eq!(back.canonical_key(), s.canonical_key());
    }

    #[test]
    fn lie_dims_reject_negative() {
        assert!(matches!(lie_dims_from_dual(&[1, 2, 0]), Err(Error::Inconsistency(_))));
        assert!(!koszul_witness_from(&[1, 2, 1], &[1, 2, 2]).passed);
    }

    #[test]
    fn susy_fields_represent_the_algebra() {
        for name in ["d2-n11", "d4-n11"] {
            let s = quadratic(name).unwrap();
            let f = s.susy_vector_fields();
            assert!(f.check_homomorphism(&s).passed);
            assert!(s.susy_algebra().validate().passed);
        }
    }

    #[test]
    fn slices() {
        let s = quadratic("d4-n11").unwrap();
        let e = |k: usize| (0..4).map(|i| Scalar::from_int(i64::from(i == k))).collect::<Vec<_>>();
        // S₊ alone is abelian
        let plus: Vec<Vec<Scalar>> = vec![e(0), e(1)];
        assert!(matches!(s.slice(&plus).unwrap(), SliceResult::Abelian { dim_b: 2 }));
        assert!(s.is_null_subalgebra(&plus, 3, &lim()).unwrap());
        assert!(matches!(s.slice(&[e(0), e(0)]), Err(Error::Precondition(_))));
        let whole = s.slice(&[e(0), e(1), e(2), e(3)]).unwrap();
        assert_eq!(whole.dim_v(), 4);
        // one point on each line
        let chord = s.slice(&[e(0), e(2)]).unwrap();
        assert_eq!(chord.dim_v(), 1);
        assert!(s.is_null_subalgebra(&[e(0), e(2)], 4, &lim()).unwrap());
        assert!(!s.is_null_subalgebra(&[e(0), e(1), e(2)], 4, &lim()).unwrap());
    }

    /// Dense oracle: dimension of solutions of `D_b Φ = 0` among all
    /// superfields of total degree ≤ m, by brute-force column elimination.
    fn chiral_oracle(s: &QuadraticSpace, vectors: &[Vec<Scalar>], m: usize) -> usize {
        let f = s.susy_vector_fields();
        let mons = superfield_monomials(s.dim_v(), s.dim_b(), m);
        let ops: Vec<SuperDerivation> = vectors.iter().map(|v| f.d_of(v)).collect();
        let images: Vec<Vec<SuperPolynomial>> = mons
            .iter()
            .map(|mo| {
                let p = SuperPolynomial::monomial(&f.algebra, mo.clone(), Scalar::one());
                ops.iter().map(|d| d.apply(&p).unwrap()).collect()
            })
            .collect();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut outs: Vec<(usize, Monomial)> = Vec::new();
        for img in &images {
            for (o, p) in img.iter().enumerate() {
                for mo in p.terms().keys() {
                    if !outs.contains(&(o, mo.clone())) {
                        outs.push((o, mo.clone()));
                    }
                }
            }
        }
        for (o, mo) in &outs {
            rows.push(images.iter().map(|img| img[*o].coefficient(mo)).collect());
        }
        if rows.is_empty() {
            return mons.len();
        }
        mons.len() - crate::linalg::Matrix::from_rows(rows).rank()
    }

    #[test]
    fn chiral_superfields_match_oracle() {
        let s = quadratic("d4-n11").unwrap();
        let e = |k: usize| (0..4).map(|i| Scalar::from_int(i64::from(i == k))).collect::<Vec<_>>();
        let vectors = vec![e(0), e(1)];
        let r = s.chiral_superfields(&vectors, 3).unwrap();
        for m in 0..=3 {
            assert_eq!(r.filtration_dims[m], chiral_oracle(&s, &vectors, m), "m = {m}");
        }
        assert_eq!(r.filtration_dims[0], 1);
        let fields = s.susy_vector_fields();
        for phi in &r.basis {
            for v in &vectors {
                assert!(fields.d_of(v).apply(phi).unwrap().is_zero());
            }
        }
        assert!(matches!(s.chiral_superfields(&[e(0), e(2)], 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn curvature_of_pure_gauge_vanishes() {
        let s = quadratic("d2-n11").unwrap();
        let f = s.susy_vector_fields();
        let alg = f.algebra.clone();
        let x1 = SuperPolynomial::even_gen(&alg, 0);
        let one = SuperPolynomial::one(&alg);
        let zero = SuperPolynomial::zero(&alg);
        let g = PolyMatrix { entries: vec![vec![one.clone(), x1.clone()], vec![zero.clone(), one.clone()]] };
        let g_inv = PolyMatrix { entries: vec![vec![one.clone(), -&x1], vec![zero.clone(), one.clone()]] };
        assert_eq!(g.mul(&g_inv), PolyMatrix::identity(&alg, 2));
        let e = |k: usize| (0..2).map(|i| Scalar::from_int(i64::from(i == k))).collect::<Vec<_>>();
        let vectors = vec![e(0), e(1)];
        let (a_b, a_v) = pure_gauge(&f, &vectors, &g, &g_inv);
        let comps = s.constraint_curvature(&vectors, &a_b, Some(&a_v)).unwrap();
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.vanishes));
        // dropping the even potentials leaves the Γ term
        let comps = s.constraint_curvature(&vectors, &a_b, None).unwrap();
        assert!(comps.iter().any(|c| !c.vanishes));
    }

    #[test]
    fn weights_are_homogeneous() {
        let s = quadratic("d10-n10").unwrap();
        let (u, y) = s.diagonal_weights();
        assert!(!u[0].is_empty());
        for i in 0..16 {
            for j in i..16 {
                for (k, _) in s.gamma(i, j) {
                    assert_eq!(add_weights(&u[i], &u[j]), y[*k]);
                }
            }
        }
    }
}
