//! Picard groupoids through their classifying triples `(π₀, π₁, k)`, and
//! the spin 2-cocycle on symmetric groups.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{Parity, Sign};

/// Candidate assignments examined by the isomorphism searches before giving up.
pub const SEARCH_LIMIT: u64 = 1_000_000;

/// `⊕ Z/o_i`, with `o_i = 0` standing for `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub orders: Vec<u64>,
}

/// Free rank plus invariant factors `d_1 | d_2 | …`, all `> 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub free_rank: usize,
    pub invariant_factors: Vec<u64>,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl FinAbGroup {
    pub fn new(orders: Vec<u64>) -> Self {
        FinAbGroup { orders }
    }

    pub fn z() -> Self {
        Self::new(vec![0])
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n])
    }

    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    pub fn canonical(&self) -> CanonicalForm {
        let free_rank = self.orders.iter().filter(|&&o| o == 0).count();
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &o in self.orders.iter().filter(|&&o| o > 1) {
            for (p, e) in prime_powers(o) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for (p, mut es) in by_prime {
            es.sort_unstable_by(|a, b| b.cmp(a));
            // largest exponents go into the last factors
            for (i, e) in es.into_iter().enumerate() {
                factors[len - 1 - i] *= p.pow(e);
            }
        }
        CanonicalForm { free_rank, invariant_factors: factors }
    }

    pub fn is_cyclic(&self) -> bool {
        let c = self.canonical();
        c.free_rank + c.invariant_factors.len() <= 1
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.orders).map(|(&v, &o)| if o == 0 { v } else { v.rem_euclid(o as i64) }).collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        self.reduce(&x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    pub fn scale(&self, n: i64, x: &[i64]) -> Vec<i64> {
        self.reduce(&x.iter().map(|a| a * n).collect::<Vec<_>>())
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        self.reduce(x).iter().all(|&v| v == 0)
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.ngens()]
    }

    pub fn torsion_order(&self) -> u64 {
        self.orders.iter().filter(|&&o| o > 0).product()
    }

    /// All elements with zero free coordinates.
    pub fn torsion_elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![self.zero()];
        for (i, &o) in self.orders.iter().enumerate() {
            if o <= 1 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * o as usize);
            for x in &out {
                for v in 0..o as i64 {
                    let mut y = x.clone();
                    y[i] = v;
                    next.push(y);
                }
            }
            out = next;
        }
        out
    }
}

/// A homomorphism given by the images of the generators.
pub type Hom = Vec<Vec<i64>>;

fn apply_hom(target: &FinAbGroup, hom: &Hom, x: &[i64]) -> Vec<i64> {
    let mut out = target.zero();
    for (xi, img) in x.iter().zip(hom) {
        out = target.add(&out, &target.scale(*xi, img));
    }
    out
}

/// All isomorphisms `g → h`; complete for free rank ≤ 1.
pub fn isomorphisms(g: &FinAbGroup, h: &FinAbGroup) -> Result<Vec<Hom>> {
    let (cg, ch) = (g.canonical(), h.canonical());
    if cg != ch {
        return Ok(Vec::new());
    }
    if cg.free_rank > 1 {
        return Err(Error::Unsupported("isomorphism search needs free rank ≤ 1".into()));
    }
    let torsion_h = h.torsion_elements();
    let free_h = h.orders.iter().position(|&o| o == 0);
    let mut choices: Vec<Vec<Vec<i64>>> = Vec::new();
    for &o in &g.orders {
        if o == 0 {
            let f = free_h.expect("same free rank");
            let mut c = Vec::new();
            for s in [1i64, -1] {
                for t in &torsion_h {
                    let mut y = t.clone();
                    y[f] = s;
                    c.push(y);
                }
            }
            choices.push(c);
        } else {
            choices.push(torsion_h.iter().filter(|x| h.is_zero(&h.scale(o as i64, x))).cloned().collect());
        }
    }
    let total = choices.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64)).unwrap_or(u64::MAX);
    if total > SEARCH_LIMIT {
        return Err(Error::ResourceGuard(format!("{total} candidate generator assignments exceed {SEARCH_LIMIT}")));
    }
    let torsion_g = g.torsion_elements();
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    if choices.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        let hom: Hom = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
        let mut seen = std::collections::HashSet::with_capacity(torsion_g.len());
        if torsion_g.iter().all(|x| seen.insert(apply_hom(h, &hom, x))) {
            out.push(hom);
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PicardData {
    pub name: String,
    pub pi0: FinAbGroup,
    pub pi1: FinAbGroup,
    /// `k(g_i)` for each generator of `π₀`, in `π₁` coordinates.
    pub k: Hom,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PicardJson {
    #[serde(default)]
    pub name: String,
    pub pi0: Vec<u64>,
    pub pi1: Vec<u64>,
    /// `[generator index (1-based), image coordinates]`.
    pub k: Vec<(usize, Vec<i64>)>,
}

impl PicardData {
    /// Checks that `k` respects the relations of `π₀` and that `2k = 0`.
    pub fn new(name: impl Into<String>, pi0: FinAbGroup, pi1: FinAbGroup, k: Hom) -> Result<Self> {
        if k.len() != pi0.ngens() || k.iter().any(|x| x.len() != pi1.ngens()) {
            return Err(Error::MalformedInput("k must give one π₁ element per generator of π₀".into()));
        }
        let k: Hom = k.iter().map(|x| pi1.reduce(x)).collect();
        for (i, (img, &o)) in k.iter().zip(&pi0.orders).enumerate() {
            if o > 0 && !pi1.is_zero(&pi1.scale(o as i64, img)) {
                return Err(Error::Invalid(format!("k is not well defined: {o}·k(g{}) ≠ 0", i + 1)));
            }
            if !pi1.is_zero(&pi1.scale(2, img)) {
                return Err(Error::Invalid(format!("2·k(g{}) ≠ 0", i + 1)));
            }
        }
        Ok(PicardData { name: name.into(), pi0, pi1, k })
    }

    pub fn k_of(&self, x: &[i64]) -> Vec<i64> {
        apply_hom(&self.pi1, &self.k, x)
    }

    pub fn to_json(&self) -> PicardJson {
        PicardJson {
            name: self.name.clone(),
            pi0: self.pi0.orders.clone(),
            pi1: self.pi1.orders.clone(),
            k: self.k.iter().enumerate().map(|(i, x)| (i + 1, x.clone())).collect(),
        }
    }

    pub fn from_json(j: &PicardJson) -> Result<Self> {
        let pi0 = FinAbGroup::new(j.pi0.clone());
        let pi1 = FinAbGroup::new(j.pi1.clone());
        let mut k = vec![pi1.zero(); pi0.ngens()];
        for (i, img) in &j.k {
            if *i == 0 || *i > pi0.ngens() {
                return Err(Error::MalformedInput(format!("generator index {i} out of range")));
            }
            k[i - 1] = img.clone();
        }
        Self::new(j.name.clone(), pi0, pi1, k)
    }
}

/// `(Z, Z/2, reduction mod 2)`.
pub fn free_picard() -> PicardData {
    PicardData::new("tau01", FinAbGroup::z(), FinAbGroup::cyclic(2), vec![vec![1]]).expect("valid")
}

/// The truncations of the sphere spectrum used here, by name.
pub fn sphere_truncations() -> Vec<PicardData> {
    let z2 = FinAbGroup::cyclic(2);
    vec![
        free_picard(),
        // π₀ = π₁^st, π₁ = π₂^st, k = multiplication by η
        PicardData::new("omega-tau12", z2.clone(), z2.clone(), vec![vec![1]]).expect("valid"),
        PicardData::new("tau01-mod2", z2.clone(), z2, vec![vec![1]]).expect("valid"),
    ]
}

/// Sphere truncations plus two triples with trivial `k`.
pub fn picard_catalog() -> Vec<PicardData> {
    let mut out = sphere_truncations();
    let z2 = FinAbGroup::cyclic(2);
    out.push(PicardData::new("z2-z2-zero", z2.clone(), z2.clone(), vec![vec![0]]).expect("valid"));
    out.push(PicardData::new("z-z2-zero", FinAbGroup::z(), z2, vec![vec![0]]).expect("valid"));
    out
}

pub fn picard_by_name(name: &str) -> Result<PicardData> {
    picard_catalog().into_iter().find(|p| p.name == name).ok_or_else(|| Error::MalformedInput(format!("unknown Picard triple '{name}'")))
}

/// Isomorphisms `φ₀`, `φ₁` with `φ₁ ∘ k = k' ∘ φ₀`, if any.
pub fn equivalence(p: &PicardData, q: &PicardData) -> Result<Option<(Hom, Hom)>> {
    let a0 = isomorphisms(&p.pi0, &q.pi0)?;
    let a1 = isomorphisms(&p.pi1, &q.pi1)?;
    let pairs = (a0.len() as u64).saturating_mul(a1.len() as u64);
    if pairs > SEARCH_LIMIT {
        return Err(Error::ResourceGuard(format!("{pairs} isomorphism pairs exceed {SEARCH_LIMIT}")));
    }
    for phi0 in &a0 {
        for phi1 in &a1 {
            let commutes = (0..p.pi0.ngens()).all(|i| apply_hom(&q.pi1, phi1, &p.k[i]) == q.k_of(&phi0[i]));
            if commutes {
                return Ok(Some((phi0.clone(), phi1.clone())));
            }
        }
    }
    Ok(None)
}

pub fn equivalent(p: &PicardData, q: &PicardData) -> Result<bool> {
    Ok(equivalence(p, q)?.is_some())
}

/// `k(g)^{ab}` (written additively: `ab·k(g)`) for cyclic `π₀` generated by its only generator.
pub fn braiding_sign(p: &PicardData, a: i64, b: i64) -> Result<Vec<i64>> {
    if p.pi0.ngens() != 1 {
        return Err(Error::Unsupported("braiding signs need π₀ presented by a single generator".into()));
    }
    Ok(p.pi1.scale(a * b, &p.k[0]))
}

/// Reads an element of `π₁ = Z/2` as a sign.
pub fn as_sign(p: &PicardData, x: &[i64]) -> Option<Sign> {
    (p.pi1.orders == [2]).then(|| if p.pi1.is_zero(x) { Sign::Plus } else { Sign::Minus })
}

/// Permutation in one-line notation, 0-based: `p[i]` is the image of `i`.
pub type Perm = Vec<u8>;

pub fn compose(g: &[u8], h: &[u8]) -> Perm {
    h.iter().map(|&x| g[x as usize]).collect()
}

pub fn one_line(p: &[u8]) -> String {
    p.iter().map(|&x| char::from(b'1' + x)).collect()
}

pub fn sign_of_perm(p: &[u8]) -> Parity {
    let inv = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    Parity::from_bit(inv)
}

fn all_perms(n: usize) -> Vec<Perm> {
    let mut cur: Perm = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// Lexicographically smallest reduced word `[i₁, …]` with `p = σ_{i₁}⋯σ_{i_r}`, `σ_i = (i, i+1)` 0-based.
pub fn reduced_word(p: &[u8]) -> Vec<u8> {
    let mut g = p.to_vec();
    let mut word = Vec::new();
    loop {
        let pos: Vec<usize> = {
            let mut pos = vec![0; g.len()];
            for (i, &x) in g.iter().enumerate() {
                pos[x as usize] = i;
            }
            pos
        };
        // smallest left descent: value i+1 appears before value i
        let Some(i) = (0..g.len().saturating_sub(1)).find(|&i| pos[i] > pos[i + 1]) else {
            return word;
        };
        word.push(i as u8);
        for x in g.iter_mut() {
            if *x as usize == i {
                *x = i as u8 + 1;
            } else if *x as usize == i + 1 {
                *x = i as u8;
            }
        }
    }
}

/// `word / 2^{j/2}` in the Clifford algebra with `e_i² = 1`; integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub word: BTreeMap<u32, i128>,
    pub half_exponent: u32,
}

impl Lift {
    pub fn one() -> Self {
        Lift { word: BTreeMap::from([(0, 1)]), half_exponent: 0 }
    }

    /// `(e_i − e_{i+1}) / √2`.
    pub fn transposition(i: u8) -> Self {
        Lift { word: BTreeMap::from([(1 << i, 1), (1 << (i + 1), -1)]), half_exponent: 1 }
    }

    fn reduce(mut self) -> Self {
        self.word.retain(|_, c| *c != 0);
        while self.half_exponent >= 2 && self.word.values().all(|c| c % 2 == 0) {
            for c in self.word.values_mut() {
                *c /= 2;
            }
            self.half_exponent -= 2;
        }
        self
    }

    pub fn mul(&self, o: &Lift) -> Lift {
        let mut word: BTreeMap<u32, i128> = BTreeMap::new();
        for (&a, &x) in &self.word {
            for (&b, &y) in &o.word {
                // moving each generator of b past the larger ones of a
                let swaps: u32 = (0..32).filter(|t| b >> t & 1 == 1).map(|t| (a >> (t + 1)).count_ones()).sum();
                let v = if swaps.is_multiple_of(2) { x * y } else { -x * y };
                *word.entry(a ^ b).or_insert(0) += v;
            }
        }
        Lift { word, half_exponent: self.half_exponent + o.half_exponent }.reduce()
    }

    pub fn neg(&self) -> Lift {
        Lift { word: self.word.iter().map(|(&m, &c)| (m, -c)).collect(), half_exponent: self.half_exponent }
    }

    /// `Some(ε)` when `self = ε·other`.
    pub fn sign_relative_to(&self, other: &Lift) -> Option<Sign> {
        if self == other {
            Some(Sign::Plus)
        } else if self == &other.neg() {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

/// Largest `n` whose cocycle table is stored.
pub const MAX_TABULATED: usize = 6;

/// `c(g, h)` with `s(g)s(h) = c(g, h) s(gh)` for the canonical section `s`.
pub struct SpinCocycleTable {
    n: usize,
    perms: Vec<Perm>,
    index: HashMap<Perm, usize>,
    sections: Vec<Lift>,
    table: Option<Vec<Sign>>,
}

impl SpinCocycleTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn section(&self, g: usize) -> &Lift {
        &self.sections[g]
    }

    pub fn index_of(&self, p: &[u8]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn product_index(&self, g: usize, h: usize) -> usize {
        self.index[&compose(&self.perms[g], &self.perms[h])]
    }

    fn compute(&self, g: usize, h: usize) -> Sign {
        let gh = self.product_index(g, h);
        self.sections[g]
            .mul(&self.sections[h])
            .sign_relative_to(&self.sections[gh])
            .expect("both lifts cover gh")
    }

    pub fn cocycle(&self, g: usize, h: usize) -> Sign {
        match &self.table {
            Some(t) => t[g * self.perms.len() + h],
            None => self.compute(g, h),
        }
    }

    /// `c(g,h)c(gh,l) = c(h,l)c(g,hl)` on all triples.
    pub fn verify(&self) -> CocycleCheck {
        let m = self.perms.len();
        let mut triples = 0u64;
        let mut first_failure = None;
        let prod: Vec<usize> = (0..m * m).map(|x| self.product_index(x / m, x % m)).collect();
        'outer: for g in 0..m {
            for h in 0..m {
                let gh = prod[g * m + h];
                for l in 0..m {
                    triples += 1;
                    let hl = prod[h * m + l];
                    if self.cocycle(g, h) * self.cocycle(gh, l) != self.cocycle(h, l) * self.cocycle(g, hl) {
                        first_failure = Some([g, h, l].map(|i| one_line(&self.perms[i])).to_vec());
                        break 'outer;
                    }
                }
            }
        }
        CocycleCheck { n: self.n, pairs: (m * m) as u64, triples, passed: first_failure.is_none(), first_failure }
    }

    /// `c(g,h)c(h,g)` for commuting `g`, `h`: the sign of the commutator of their lifts.
    pub fn commutator_sign(&self, g: usize, h: usize) -> Result<Sign> {
        if self.product_index(g, h) != self.product_index(h, g) {
            return Err(Error::Precondition("the permutations do not commute".into()));
        }
        Ok(self.cocycle(g, h) * self.cocycle(h, g))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleCheck {
    pub n: usize,
    pub pairs: u64,
    pub triples: u64,
    pub passed: bool,
    pub first_failure: Option<Vec<String>>,
}

/// Cocycle for the canonical section, optionally with some lifts negated.
pub fn spin_cocycle_with(n: usize, flips: Option<&[bool]>) -> Result<SpinCocycleTable> {
    if !(2..=8).contains(&n) {
        return Err(Error::Precondition(format!("spin cocycle needs 2 ≤ n ≤ 8, got {n}")));
    }
    let perms = all_perms(n);
    if flips.is_some_and(|f| f.len() != perms.len()) {
        return Err(Error::MalformedInput("one flip per permutation is required".into()));
    }
    let index: HashMap<Perm, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let sections: Vec<Lift> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut l = Lift::one();
            for &s in &reduced_word(p) {
                l = l.mul(&Lift::transposition(s));
            }
            if flips.is_some_and(|f| f[i]) {
                l = l.neg();
            }
            l
        })
        .collect();
    let mut t = SpinCocycleTable { n, perms, index, sections, table: None };
    if n <= MAX_TABULATED {
        let m = t.perms.len();
        t.table = Some((0..m * m).map(|x| t.compute(x / m, x % m)).collect());
    }
    Ok(t)
}

pub fn spin_cocycle(n: usize) -> Result<SpinCocycleTable> {
    spin_cocycle_with(n, None)
}

/// `ε: S_n → ±1` with `ε(g)ε(h)ε(gh) = c(g,h)` for all pairs, by exhaustive search (n ≤ 3).
pub fn find_splitting(t: &SpinCocycleTable) -> Result<Option<Vec<Sign>>> {
    let m = t.perms.len();
    if m > 20 {
        return Err(Error::ResourceGuard(format!("2^{m} sign choices is too many for exhaustive search")));
    }
    for bits in 0u64..(1 << m) {
        let eps = |g: usize| if bits >> g & 1 == 1 { Sign::Minus } else { Sign::Plus };
        let ok = (0..m).all(|g| (0..m).all(|h| eps(g) * eps(h) * eps(t.product_index(g, h)) * t.cocycle(g, h) == Sign::Plus));
        if ok {
            return Ok(Some((0..m).map(eps).collect()));
        }
    }
    Ok(None)
}

/// Re-derives the commutator sign of `g`, `h` under `trials` random re-choices of the section.
pub fn commutator_under_rechoice(n: usize, g: &[u8], h: &[u8], trials: usize, seed: u64) -> Result<Vec<Sign>> {
    let m = all_perms(n).len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let flips: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
        let t = spin_cocycle_with(n, Some(&flips))?;
        let gi = t.index_of(g).ok_or_else(|| Error::MalformedInput("not a permutation of the right size".into()))?;
        let hi = t.index_of(h).ok_or_else(|| Error::MalformedInput("not a permutation of the right size".into()))?;
        out.push(t.commutator_sign(gi, hi)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignCharacterData {
    pub n: usize,
    /// One-line notation, 1-based digits.
    pub perms: Vec<String>,
    pub sgn: Vec<Parity>,
    pub sgn_is_homomorphism: bool,
    /// `cocycle[g][h]`, present for tabulated `n`.
    pub cocycle: Option<Vec<Vec<Sign>>>,
}

pub fn sign_character_data(n: usize) -> Result<SignCharacterData> {
    let t = spin_cocycle(n)?;
    let m = t.perms.len();
    let sgn: Vec<Parity> = t.perms.iter().map(|p| sign_of_perm(p)).collect();
    let sgn_is_homomorphism = (0..m).all(|g| (0..m).all(|h| sgn[t.product_index(g, h)] == sgn[g] + sgn[h]));
    let cocycle = t.table.as_ref().map(|_| (0..m).map(|g| (0..m).map(|h| t.cocycle(g, h)).collect()).collect());
    Ok(SignCharacterData { n, perms: t.perms.iter().map(|p| one_line(p)).collect(), sgn, sgn_is_homomorphism, cocycle })
}

impl SignCharacterData {
    /// Cocycle table as TSV; `None` when the table is not stored.
    pub fn to_tsv(&self) -> Option<String> {
        let c = self.cocycle.as_ref()?;
        let mut out = format!("g\\h\t{}\n", self.perms.join("\t"));
        for (g, row) in c.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|s| s.to_i64().to_string()).collect();
            out.push_str(&format!("{}\t{}\n", self.perms[g], cells.join("\t")));
        }
        Some(out)
    }
}
