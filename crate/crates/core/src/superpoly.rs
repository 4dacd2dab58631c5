//! Free supercommutative algebras `k[x_1..x_m] ⊗ Λ[ξ_1..ξ_n]`.
//!
//! Elements are kept in normal form: a map from [`Monomial`] to nonzero
//! coefficient, where a monomial stores even exponents and the set of odd
//! generators present (always read in increasing index order). Every
//! operation that produces an odd product reorders the odd factors to this
//! canonical order and applies the corresponding Koszul sign, so two
//! polynomials are equal exactly when their term maps are.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{koszul_sign, Parity, Sign};
use crate::scalar::Scalar;

/// Generator names of a free supercommutative algebra.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct FreeSCAlgebra {
    even_names: Vec<String>,
    odd_names: Vec<String>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl FreeSCAlgebra {
    pub fn new<S: AsRef<str>>(even: &[S], odd: &[S]) -> Result<Arc<Self>> {
        let even_names: Vec<String> = even.iter().map(|s| s.as_ref().to_string()).collect();
        let odd_names: Vec<String> = odd.iter().map(|s| s.as_ref().to_string()).collect();
        if odd_names.len() > 64 {
            return Err(Error::Unsupported("more than 64 odd generators".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in even_names.iter().chain(&odd_names) {
            if !valid_name(n) {
                return Err(Error::MalformedInput(format!("invalid generator name {n:?}")));
            }
            if !seen.insert(n.clone()) {
                return Err(Error::NameCollision(n.clone()));
            }
        }
        Ok(Arc::new(FreeSCAlgebra { even_names, odd_names }))
    }

    /// Generators `x1..xm` and `xi1..xin`.
    pub fn standard(m: usize, n: usize) -> Arc<Self> {
        let even: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
        let odd: Vec<String> = (1..=n).map(|i| format!("xi{i}")).collect();
        Self::new(&even, &odd).expect("standard names are valid")
    }

    pub fn n_even(&self) -> usize {
        self.even_names.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odd_names.len()
    }

    pub fn even_names(&self) -> &[String] {
        &self.even_names
    }

    pub fn odd_names(&self) -> &[String] {
        &self.odd_names
    }

    fn lookup(&self, name: &str) -> Option<(Parity, usize)> {
        if let Some(i) = self.even_names.iter().position(|n| n == name) {
            return Some((Parity::Even, i));
        }
        self.odd_names.iter().position(|n| n == name).map(|i| (Parity::Odd, i))
    }
}

fn same_algebra(a: &Arc<FreeSCAlgebra>, b: &Arc<FreeSCAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn check_same(a: &Arc<FreeSCAlgebra>, b: &Arc<FreeSCAlgebra>) -> Result<()> {
    if same_algebra(a, b) {
        Ok(())
    } else {
        Err(Error::IncompatibleAlgebras(format!(
            "{:?}|{:?} vs {:?}|{:?}",
            a.even_names, a.odd_names, b.even_names, b.odd_names
        )))
    }
}

/// `x^a · ξ_S` with `S` read in increasing order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    even: Vec<u32>,
    odd: u64,
}

impl Monomial {
    pub fn one(m: usize) -> Self {
        Monomial { even: vec![0; m], odd: 0 }
    }

    /// Fails if `odd_support` is not strictly increasing.
    pub fn new(even: Vec<u32>, odd_support: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for w in odd_support.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::MalformedInput(format!(
                    "odd support {odd_support:?} is not strictly increasing"
                )));
            }
        }
        for &i in odd_support {
            if i >= 64 {
                return Err(Error::Unsupported("odd index beyond 63".into()));
            }
            mask |= 1 << i;
        }
        Ok(Monomial { even, odd: mask })
    }

    pub fn even_exponents(&self) -> &[u32] {
        &self.even
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    pub fn odd_support(&self) -> Vec<usize> {
        (0..64).filter(|i| self.odd >> i & 1 == 1).collect()
    }

    pub fn odd_count(&self) -> usize {
        self.odd.count_ones() as usize
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd_count())
    }

    pub fn degree(&self) -> u32 {
        self.even.iter().sum::<u32>() + self.odd.count_ones()
    }

    /// Product with the Koszul sign of merging the odd supports, or `None`
    /// when an odd generator repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Sign, Monomial)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let even = self.even.iter().zip(&other.even).map(|(a, b)| a + b).collect();
        Some((merge_sign(self.odd, other.odd), Monomial { even, odd: self.odd | other.odd }))
    }
}

/// Sign of rewriting `ξ_S ξ_T` (disjoint supports) in increasing order: one
/// transposition for every pair `s ∈ S`, `t ∈ T` with `s > t`.
fn merge_sign(s: u64, t: u64) -> Sign {
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (s >> j).count_ones();
    }
    Sign::pow_neg_one(inversions as usize)
}

impl Ord for Monomial {
    /// Graded order: total degree, then even exponents, then odd support.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.even.cmp(&self.even))
            .then_with(|| other.odd.reverse_bits().cmp(&self.odd.reverse_bits()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of a free supercommutative algebra in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperPolynomial {
    algebra: Arc<FreeSCAlgebra>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SuperPolynomial {
    pub fn zero(algebra: &Arc<FreeSCAlgebra>) -> Self {
        SuperPolynomial { algebra: algebra.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(algebra: &Arc<FreeSCAlgebra>, c: Scalar) -> Self {
        let mut p = Self::zero(algebra);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(algebra.n_even()), c);
        }
        p
    }

    pub fn one(algebra: &Arc<FreeSCAlgebra>) -> Self {
        Self::constant(algebra, Scalar::one())
    }

    pub fn even_gen(algebra: &Arc<FreeSCAlgebra>, i: usize) -> Self {
        let mut m = Monomial::one(algebra.n_even());
        m.even[i] = 1;
        Self::monomial(algebra, m, Scalar::one())
    }

    pub fn odd_gen(algebra: &Arc<FreeSCAlgebra>, i: usize) -> Self {
        let mut m = Monomial::one(algebra.n_even());
        m.odd = 1 << i;
        Self::monomial(algebra, m, Scalar::one())
    }

    /// Generator by name.
    pub fn var(algebra: &Arc<FreeSCAlgebra>, name: &str) -> Result<Self> {
        match algebra.lookup(name) {
            Some((Parity::Even, i)) => Ok(Self::even_gen(algebra, i)),
            Some((Parity::Odd, i)) => Ok(Self::odd_gen(algebra, i)),
            None => Err(Error::MalformedInput(format!("unknown generator {name:?}"))),
        }
    }

    pub fn monomial(algebra: &Arc<FreeSCAlgebra>, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.even.len(), algebra.n_even(), "monomial arity");
        let mut p = Self::zero(algebra);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(algebra: &Arc<FreeSCAlgebra>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(algebra);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn algebra(&self) -> &Arc<FreeSCAlgebra> {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&Monomial::one(self.algebra.n_even())).cloned().unwrap_or_default()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Parity if every term has the same parity; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        match it.next() {
            None => Some(Parity::Even),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    /// True if the polynomial is homogeneous of parity `p` (zero always is).
    pub fn has_parity(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| m.parity() == p)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_same(&self.algebra, &other.algebra)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.algebra);
        }
        SuperPolynomial {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Product in normal form.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_same(&self.algebra, &other.algebra)?;
        let mut out = Self::zero(&self.algebra);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((s, m)) = m1.mul(m2) {
                    out.add_term(m, &s.apply(&(c1 * c2)));
                }
            }
        }
        Ok(out)
    }

    /// Component of the given parity.
    pub fn part(&self, p: Parity) -> Self {
        SuperPolynomial {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.parity() == p).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// `∂/∂x_i` (ordinary partial derivative in an even variable).
    pub fn partial_even(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (m, c) in &self.terms {
            let e = m.even[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.even[i] -= 1;
            out.add_term(m2, &(c * &Scalar::from_int(e as i64)));
        }
        out
    }

    /// Substitutes `x_i ↦ x_i + shift` for an even variable (exact binomial expansion).
    pub fn shift_even(&self, i: usize, shift: &Scalar) -> Self {
        let mut out = Self::zero(&self.algebra);
        for (m, c) in &self.terms {
            let e = m.even[i];
            for k in 0..=e {
                let mut m2 = m.clone();
                m2.even[i] = k;
                let coef = c * &crate::scalar::binomial(e as u64, k as u64) * shift.pow(e - k);
                out.add_term(m2, &coef);
            }
        }
        out
    }

    /// Re-embeds into `target` via generator index maps.
    pub fn reindex(&self, target: &Arc<FreeSCAlgebra>, even_map: &[usize], odd_map: &[usize]) -> Self {
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut even = vec![0; target.n_even()];
            for (i, &e) in m.even.iter().enumerate() {
                even[even_map[i]] += e;
            }
            // odd factors in source order, then sorted into target order
            let mut acc = Monomial { even, odd: 0 };
            let mut sign = Sign::Plus;
            for j in m.odd_support() {
                let bit = Monomial { even: vec![0; target.n_even()], odd: 1 << odd_map[j] };
                let (s, prod) = acc.mul(&bit).expect("odd map is injective");
                sign = sign * s;
                acc = prod;
            }
            out.add_term(acc, &sign.apply(c));
        }
        out
    }

    /// Canonical textual form; see [`SuperPolynomial::parse`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses sums of terms such as `3/2 * x1^2 * xi1 xi2 - xi2`. Odd factors
    /// may appear in any order; the Koszul sign of sorting them is applied.
    pub fn parse(algebra: &Arc<FreeSCAlgebra>, text: &str) -> Result<Self> {
        parse::parse_polynomial(algebra, text)
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.even.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.algebra.even_names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.algebra.even_names[i], e)),
                }
            }
            for j in m.odd_support() {
                factors.push(self.algebra.odd_names[j].clone());
            }
            let neg = c.is_negative();
            let a = c.abs();
            let body = if factors.is_empty() {
                a.to_string()
            } else if a.is_one() {
                factors.join(" * ")
            } else {
                format!("{} * {}", a, factors.join(" * "))
            };
            match (k, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SuperPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

// Operator sugar; these panic on mismatched algebras. Use `try_add` /
// `multiply` for the checked versions.
impl Add for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.try_add(rhs).expect("adding polynomials over different algebras")
    }
}

impl Sub for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.try_add(&-rhs).expect("subtracting polynomials over different algebras")
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Mul for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.multiply(rhs).expect("multiplying polynomials over different algebras")
    }
}

mod parse {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(String),
        Ident(String),
        Caret,
        Star,
        Plus,
        Minus,
    }

    fn tokenize(s: &str) -> Result<Vec<Tok>> {
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        let mut out = Vec::new();
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                out.push(Tok::Num(chars[start..i].iter().collect()));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            } else {
                out.push(match c {
                    '^' => Tok::Caret,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    _ => return Err(Error::MalformedInput(format!("unexpected character {c:?}"))),
                });
                i += 1;
            }
        }
        Ok(out)
    }

    pub(super) fn parse_polynomial(algebra: &Arc<FreeSCAlgebra>, text: &str) -> Result<SuperPolynomial> {
        let toks = tokenize(text)?;
        if toks.is_empty() {
            return Err(Error::MalformedInput("empty polynomial".into()));
        }
        let mut pos = 0;
        let mut out = SuperPolynomial::zero(algebra);
        let mut first = true;
        while pos < toks.len() {
            let mut sign = Sign::Plus;
            match toks[pos] {
                Tok::Plus if !first => pos += 1,
                Tok::Minus => {
                    sign = Sign::Minus;
                    pos += 1;
                }
                _ if first => {}
                _ => return Err(Error::MalformedInput(format!("expected + or - in {text:?}"))),
            }
            first = false;
            let term = parse_term(algebra, &toks, &mut pos, text)?;
            out = &out + &term.scale(&sign.to_scalar());
        }
        Ok(out)
    }

    fn parse_term(algebra: &Arc<FreeSCAlgebra>, toks: &[Tok], pos: &mut usize, text: &str) -> Result<SuperPolynomial> {
        let bad = || Error::MalformedInput(format!("malformed term in {text:?}"));
        let mut acc = SuperPolynomial::one(algebra);
        loop {
            match toks.get(*pos) {
                Some(Tok::Num(n)) => {
                    let c: Scalar = n.parse()?;
                    acc = acc.scale(&c);
                    *pos += 1;
                }
                Some(Tok::Ident(name)) => {
                    let g = SuperPolynomial::var(algebra, name)?;
                    *pos += 1;
                    let mut e = 1u32;
                    if toks.get(*pos) == Some(&Tok::Caret) {
                        *pos += 1;
                        match toks.get(*pos) {
                            Some(Tok::Num(n)) => {
                                e = n.parse().map_err(|_| bad())?;
                                *pos += 1;
                            }
                            _ => return Err(bad()),
                        }
                    }
                    for _ in 0..e {
                        acc = &acc * &g;
                    }
                }
                _ => return Err(bad()),
            }
            match toks.get(*pos) {
                Some(Tok::Star) => *pos += 1,
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) => {}
                _ => break,
            }
        }
        Ok(acc)
    }
}

/// Result of [`tensor_algebras`]: the combined algebra and the two embeddings.
#[derive(Clone, Debug)]
pub struct TensorAlgebra {
    pub algebra: Arc<FreeSCAlgebra>,
    left_even: Vec<usize>,
    left_odd: Vec<usize>,
    right_even: Vec<usize>,
    right_odd: Vec<usize>,
}

impl TensorAlgebra {
    /// `a ↦ a ⊗ 1`.
    pub fn embed_left(&self, a: &SuperPolynomial) -> SuperPolynomial {
        a.reindex(&self.algebra, &self.left_even, &self.left_odd)
    }

    /// `b ↦ 1 ⊗ b`.
    pub fn embed_right(&self, b: &SuperPolynomial) -> SuperPolynomial {
        b.reindex(&self.algebra, &self.right_even, &self.right_odd)
    }

    /// The image of `a ⊗ b`, i.e. `(a⊗1)(1⊗b)`.
    pub fn pure_tensor(&self, a: &SuperPolynomial, b: &SuperPolynomial) -> SuperPolynomial {
        &self.embed_left(a) * &self.embed_right(b)
    }
}

/// `A ⊗ B` as a free algebra on the union of the generators. Names of `B`
/// may be renamed first; a collision that survives renaming is an error.
pub fn tensor_algebras(
    a: &Arc<FreeSCAlgebra>,
    b: &Arc<FreeSCAlgebra>,
    renaming: Option<&HashMap<String, String>>,
) -> Result<TensorAlgebra> {
    let rename = |n: &String| renaming.and_then(|r| r.get(n)).cloned().unwrap_or_else(|| n.clone());
    let even: Vec<String> = a.even_names.iter().cloned().chain(b.even_names.iter().map(rename)).collect();
    let odd: Vec<String> = a.odd_names.iter().cloned().chain(b.odd_names.iter().map(rename)).collect();
    let algebra = FreeSCAlgebra::new(&even, &odd)?;
    let (ma, na) = (a.n_even(), a.n_odd());
    Ok(TensorAlgebra {
        algebra,
        left_even: (0..ma).collect(),
        left_odd: (0..na).collect(),
        right_even: (ma..ma + b.n_even()).collect(),
        right_odd: (na..na + b.n_odd()).collect(),
    })
}

/// A homogeneous super-derivation, stored by its values on generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperDerivation {
    algebra: Arc<FreeSCAlgebra>,
    parity: Parity,
    even_images: Vec<SuperPolynomial>,
    odd_images: Vec<SuperPolynomial>,
}

impl SuperDerivation {
    /// Checks that each image has parity `parity(generator) + parity`.
    pub fn from_images(
        algebra: &Arc<FreeSCAlgebra>,
        parity: Parity,
        even_images: Vec<SuperPolynomial>,
        odd_images: Vec<SuperPolynomial>,
    ) -> Result<Self> {
        if even_images.len() != algebra.n_even() || odd_images.len() != algebra.n_odd() {
            return Err(Error::MalformedInput("wrong number of generator images".into()));
        }
        for p in even_images.iter().chain(&odd_images) {
            check_same(algebra, &p.algebra)?;
        }
        for (i, p) in even_images.iter().enumerate() {
            if !p.has_parity(parity) {
                return Err(Error::Invalid(format!(
                    "image of {} is not of parity {parity}",
                    algebra.even_names[i]
                )));
            }
        }
        for (i, p) in odd_images.iter().enumerate() {
            if !p.has_parity(parity.flip()) {
                return Err(Error::Invalid(format!(
                    "image of {} is not of parity {}",
                    algebra.odd_names[i],
                    parity.flip()
                )));
            }
        }
        Ok(SuperDerivation { algebra: algebra.clone(), parity, even_images, odd_images })
    }

    pub fn zero(algebra: &Arc<FreeSCAlgebra>, parity: Parity) -> Self {
        let z = SuperPolynomial::zero(algebra);
        SuperDerivation {
            algebra: algebra.clone(),
            parity,
            even_images: vec![z.clone(); algebra.n_even()],
            odd_images: vec![z; algebra.n_odd()],
        }
    }

    /// `∂/∂x_i`.
    pub fn partial_even(algebra: &Arc<FreeSCAlgebra>, i: usize) -> Self {
        let mut d = Self::zero(algebra, Parity::Even);
        d.even_images[i] = SuperPolynomial::one(algebra);
        d
    }

    /// `∂/∂ξ_i` (odd, acting from the left).
    pub fn partial_odd(algebra: &Arc<FreeSCAlgebra>, i: usize) -> Self {
        let mut d = Self::zero(algebra, Parity::Odd);
        d.odd_images[i] = SuperPolynomial::one(algebra);
        d
    }

    pub fn algebra(&self) -> &Arc<FreeSCAlgebra> {
        &self.algebra
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn even_images(&self) -> &[SuperPolynomial] {
        &self.even_images
    }

    pub fn odd_images(&self) -> &[SuperPolynomial] {
        &self.odd_images
    }

    pub fn is_zero(&self) -> bool {
        self.even_images.iter().chain(&self.odd_images).all(SuperPolynomial::is_zero)
    }

    /// `D + E` (same parity).
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_same(&self.algebra, &other.algebra)?;
        if self.parity != other.parity {
            return Err(Error::Invalid("adding derivations of different parity".into()));
        }
        Ok(SuperDerivation {
            algebra: self.algebra.clone(),
            parity: self.parity,
            even_images: self.even_images.iter().zip(&other.even_images).map(|(a, b)| a + b).collect(),
            odd_images: self.odd_images.iter().zip(&other.odd_images).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        SuperDerivation {
            algebra: self.algebra.clone(),
            parity: self.parity,
            even_images: self.even_images.iter().map(|p| p.scale(c)).collect(),
            odd_images: self.odd_images.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `f·D` for homogeneous `f`; the parity is `parity(f) + parity(D)`.
    pub fn left_multiply(&self, f: &SuperPolynomial) -> Result<Self> {
        check_same(&self.algebra, &f.algebra)?;
        let pf = f.parity().ok_or_else(|| Error::Invalid("coefficient is not homogeneous".into()))?;
        Self::from_images(
            &self.algebra,
            pf + self.parity,
            self.even_images.iter().map(|p| f * p).collect(),
            self.odd_images.iter().map(|p| f * p).collect(),
        )
    }

    /// Value on a single monomial via the super-Leibniz rule, splitting the
    /// monomial as `x^a · ξ_{s1} ⋯ ξ_{sr}` and passing `D` left to right.
    fn apply_monomial(&self, m: &Monomial) -> SuperPolynomial {
        let alg = &self.algebra;
        let mut out = SuperPolynomial::zero(alg);
        let odd_part = SuperPolynomial::monomial(alg, Monomial { even: vec![0; alg.n_even()], odd: m.odd }, Scalar::one());
        // even factors are central and even: D(x^a) ξ_S
        for i in 0..alg.n_even() {
            let e = m.even[i];
            if e == 0 || self.even_images[i].is_zero() {
                continue;
            }
            let mut rest = m.clone();
            rest.even[i] -= 1;
            rest.odd = 0;
            let lower = SuperPolynomial::monomial(alg, rest, Scalar::from_int(e as i64));
            out = &out + &(&(&lower * &self.even_images[i]) * &odd_part);
        }
        // x^a D(ξ_{s1}⋯ξ_{sr}) with the sign (-1)^{|D|·(j-1)} at position j
        let xa = SuperPolynomial::monomial(alg, Monomial { even: m.even.clone(), odd: 0 }, Scalar::one());
        let support = m.odd_support();
        for (j, &s) in support.iter().enumerate() {
            if self.odd_images[s].is_zero() {
                continue;
            }
            let before = support[..j].iter().fold(0u64, |acc, &k| acc | 1 << k);
            let after = support[j + 1..].iter().fold(0u64, |acc, &k| acc | 1 << k);
            let left = SuperPolynomial::monomial(alg, Monomial { even: vec![0; alg.n_even()], odd: before }, Scalar::one());
            let right = SuperPolynomial::monomial(alg, Monomial { even: vec![0; alg.n_even()], odd: after }, Scalar::one());
            let sign = if self.parity.is_odd() { Sign::pow_neg_one(j) } else { Sign::Plus };
            let term = &(&(&xa * &left) * &self.odd_images[s]) * &right;
            out = &out + &term.scale(&sign.to_scalar());
        }
        out
    }

    /// Extension of the generator images to the whole algebra.
    pub fn apply(&self, f: &SuperPolynomial) -> Result<SuperPolynomial> {
        check_same(&self.algebra, &f.algebra)?;
        let mut out = SuperPolynomial::zero(&self.algebra);
        for (m, c) in &f.terms {
            out = &out + &self.apply_monomial(m).scale(c);
        }
        Ok(out)
    }

    /// `D ∘ D ∘ ⋯` applied `k` times.
    pub fn apply_n(&self, f: &SuperPolynomial, k: usize) -> Result<SuperPolynomial> {
        let mut cur = f.clone();
        for _ in 0..k {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// `[D, E] = D∘E − (−1)^{|D||E|} E∘D`, computed on generators.
    pub fn supercommutator(&self, other: &Self) -> Result<Self> {
        check_same(&self.algebra, &other.algebra)?;
        let sign = koszul_sign(self.parity, other.parity).to_scalar();
        let on = |g: &SuperPolynomial| -> Result<SuperPolynomial> {
            let de = self.apply(&other.apply(g)?)?;
            let ed = other.apply(&self.apply(g)?)?;
            Ok(&de - &ed.scale(&sign))
        };
        let alg = &self.algebra;
        let even_images = (0..alg.n_even()).map(|i| on(&SuperPolynomial::even_gen(alg, i))).collect::<Result<_>>()?;
        let odd_images = (0..alg.n_odd()).map(|i| on(&SuperPolynomial::odd_gen(alg, i))).collect::<Result<_>>()?;
        Self::from_images(alg, self.parity + other.parity, even_images, odd_images)
    }
}

/// Deterministic generator for sample polynomials: coefficients in `[-9, 9]`,
/// total degree at most `max_degree`.
pub struct PolySampler {
    rng: ChaCha8Rng,
    pub max_degree: u32,
    pub max_terms: usize,
}

impl PolySampler {
    pub fn new(seed: u64) -> Self {
        PolySampler { rng: ChaCha8Rng::seed_from_u64(seed), max_degree: 4, max_terms: 4 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coefficient(&mut self) -> Scalar {
        loop {
            let c: i64 = self.rng.gen_range(-9..=9);
            if c != 0 {
                return Scalar::from_int(c);
            }
        }
    }

    pub fn monomial(&mut self, algebra: &Arc<FreeSCAlgebra>, parity: Option<Parity>) -> Monomial {
        loop {
            let deg = self.rng.gen_range(0..=self.max_degree);
            let mut even = vec![0u32; algebra.n_even()];
            let mut odd = 0u64;
            for _ in 0..deg {
                let total = algebra.n_even() + algebra.n_odd();
                if total == 0 {
                    break;
                }
                let g = self.rng.gen_range(0..total);
                if g < algebra.n_even() {
                    even[g] += 1;
                } else {
                    odd |= 1 << (g - algebra.n_even());
                }
            }
            let m = Monomial { even, odd };
            if parity.is_none_or(|p| m.parity() == p) {
                return m;
            }
            if parity == Some(Parity::Odd) && algebra.n_odd() == 0 {
                panic!("no odd elements in a purely even algebra");
            }
        }
    }

    /// A random element, homogeneous of `parity` when given.
    pub fn polynomial(&mut self, algebra: &Arc<FreeSCAlgebra>, parity: Option<Parity>) -> SuperPolynomial {
        let n = self.rng.gen_range(1..=self.max_terms);
        let mut p = SuperPolynomial::zero(algebra);
        for _ in 0..n {
            let m = self.monomial(algebra, parity);
            let c = self.coefficient();
            p.add_term(m, &c);
        }
        p
    }

    pub fn parity(&mut self) -> Parity {
        Parity::from_bit(self.rng.gen_range(0..2))
    }
}

/// Outcome of [`leibniz_check`].
#[derive(Clone, Debug, Serialize)]
pub struct LeibnizReport {
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    /// `(a, b)` with `D(ab) ≠ D(a)b + (−1)^{|D||a|} a D(b)`.
    pub counterexample: Option<(String, String)>,
}

/// Randomized check of the super-Leibniz rule for `D`.
pub fn leibniz_check(d: &SuperDerivation, trials: usize, seed: u64) -> LeibnizReport {
    leibniz_check_with(d, trials, seed, |d, f| d.apply(f).expect("same algebra"))
}

/// [`leibniz_check`] against an arbitrary extension rule `apply`.
pub fn leibniz_check_with<F>(d: &SuperDerivation, trials: usize, seed: u64, apply: F) -> LeibnizReport
where
    F: Fn(&SuperDerivation, &SuperPolynomial) -> SuperPolynomial,
{
    let mut sampler = PolySampler::new(seed);
    let alg = d.algebra().clone();
    for _ in 0..trials.max(1) {
        let pa = if alg.n_odd() == 0 { Parity::Even } else { sampler.parity() };
        let a = sampler.polynomial(&alg, Some(pa));
        let b = sampler.polynomial(&alg, None);
        let lhs = apply(d, &(&a * &b));
        let sign = koszul_sign(d.parity(), pa).to_scalar();
        let rhs = &(&apply(d, &a) * &b) + &(&a * &apply(d, &b)).scale(&sign);
        if lhs != rhs {
            return LeibnizReport {
                trials,
                seed,
                passed: false,
                counterexample: Some((a.to_string(), b.to_string())),
            };
        }
    }
    LeibnizReport { trials, seed, passed: true, counterexample: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> Arc<FreeSCAlgebra> {
        FreeSCAlgebra::new(&["x"], &["xi1", "xi2"]).unwrap()
    }

    fn p(a: &Arc<FreeSCAlgebra>, s: &str) -> SuperPolynomial {
        SuperPolynomial::parse(a, s).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let a = alg();
        assert_eq!(&p(&a, "xi2") * &p(&a, "xi1"), p(&a, "-xi1 * xi2"));
        assert!((&p(&a, "xi1") * &p(&a, "xi1")).is_zero());
        assert_eq!(&p(&a, "x + xi1 xi2") * &p(&a, "x"), p(&a, "x^2 + x * xi1 * xi2"));
    }

    #[test]
    fn parse_sorts_odd_factors_with_sign() {
        let a = alg();
        assert_eq!(p(&a, "xi2 xi1"), p(&a, "-1 * xi1 * xi2"));
        assert!(p(&a, "xi1 * x * xi1").is_zero());
        for bad in ["", "x +", "1.5 * x", "y", "x^", "* x"] {
            assert!(SuperPolynomial::parse(&a, bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn mismatched_algebras_error() {
        let a = alg();
        let b = FreeSCAlgebra::standard(1, 1);
        let e = SuperPolynomial::one(&a).multiply(&SuperPolynomial::one(&b));
        assert!(matches!(e, Err(Error::IncompatibleAlgebras(_))));
    }

    #[test]
    fn derivation_examples() {
        let a = alg();
        let d1 = SuperDerivation::partial_odd(&a, 0);
        let d2 = SuperDerivation::partial_odd(&a, 1);
        let dx = SuperDerivation::partial_even(&a, 0);
        assert_eq!(d1.apply(&p(&a, "xi1 xi2")).unwrap(), p(&a, "xi2"));
        assert_eq!(d2.apply(&p(&a, "xi1 xi2")).unwrap(), p(&a, "-xi1"));
        assert_eq!(dx.apply(&p(&a, "x^2 xi1")).unwrap(), p(&a, "2 * x * xi1"));
    }

    #[test]
    fn odd_partial_sign_matches_both_leibniz_splittings() {
        // ∂_{ξ2}(ξ1ξ2) via ξ1·ξ2 and via −ξ2·ξ1
        let a = alg();
        let d2 = SuperDerivation::partial_odd(&a, 1);
        let x1 = p(&a, "xi1");
        let x2 = p(&a, "xi2");
        let split1 = &(&d2.apply(&x1).unwrap() * &x2) - &(&x1 * &d2.apply(&x2).unwrap());
        let split2 = -&(&(&d2.apply(&x2).unwrap() * &x1) - &(&x2 * &d2.apply(&x1).unwrap()));
        assert_eq!(split1, p(&a, "-xi1"));
        assert_eq!(split2, p(&a, "-xi1"));
    }

    #[test]
    fn supercommutator_examples() {
        let a = alg();
        let d1 = SuperDerivation::partial_odd(&a, 0);
        assert!(d1.supercommutator(&d1).unwrap().is_zero());

        let t = FreeSCAlgebra::new(&["t"], &["xi"]).unwrap();
        let q = SuperDerivation::partial_odd(&t, 0)
            .try_add(&SuperDerivation::partial_even(&t, 0).left_multiply(&SuperPolynomial::odd_gen(&t, 0)).unwrap())
            .unwrap();
        let qq = q.supercommutator(&q).unwrap();
        assert_eq!(qq, SuperDerivation::partial_even(&t, 0).scale(&Scalar::from_int(2)));

        let x = FreeSCAlgebra::new(&["x"], &[] as &[&str]).unwrap();
        let dx = SuperDerivation::partial_even(&x, 0);
        let xdx = dx.left_multiply(&SuperPolynomial::even_gen(&x, 0)).unwrap();
        assert_eq!(dx.supercommutator(&xdx).unwrap(), dx);
    }

    #[test]
    fn derivation_parity_is_validated() {
        let a = alg();
        let bad = SuperDerivation::from_images(
            &a,
            Parity::Even,
            vec![SuperPolynomial::odd_gen(&a, 0)],
            vec![SuperPolynomial::zero(&a), SuperPolynomial::zero(&a)],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn tensor_algebra_sign_rule() {
        let l = FreeSCAlgebra::new(&[] as &[&str], &["xi"]).unwrap();
        let r = FreeSCAlgebra::new(&[] as &[&str], &["eta"]).unwrap();
        let t = tensor_algebras(&l, &r, None).unwrap();
        let xi = t.embed_left(&SuperPolynomial::odd_gen(&l, 0));
        let eta = t.embed_right(&SuperPolynomial::odd_gen(&r, 0));
        assert_eq!(&xi * &eta, SuperPolynomial::parse(&t.algebra, "xi eta").unwrap());
        assert_eq!(&eta * &xi, SuperPolynomial::parse(&t.algebra, "-xi eta").unwrap());
        assert!(matches!(tensor_algebras(&l, &l, None), Err(Error::NameCollision(_))));
        let ren: HashMap<String, String> = [("xi".to_string(), "zeta".to_string())].into();
        assert!(tensor_algebras(&l, &l, Some(&ren)).is_ok());
        let unit = FreeSCAlgebra::standard(0, 0);
        let tu = tensor_algebras(&l, &unit, None).unwrap();
        assert_eq!(*tu.algebra, *l);
    }

    #[test]
    fn leibniz_negative_control() {
        let a = alg();
        let d = SuperDerivation::partial_odd(&a, 1);
        assert!(leibniz_check(&d, 100, 7).passed);
        // drop the Koszul sign in the extension rule
        let corrupted = |d: &SuperDerivation, f: &SuperPolynomial| {
            let mut out = SuperPolynomial::zero(d.algebra());
            for (m, c) in f.terms() {
                let support = m.odd_support();
                for &s in &support {
                    let rest: Vec<usize> = support.iter().copied().filter(|&k| k != s).collect();
                    let mono = Monomial::new(m.even_exponents().to_vec(), &rest).unwrap();
                    let img = &d.odd_images()[s];
                    out = &out + &(img * &SuperPolynomial::monomial(d.algebra(), mono, c.clone()));
                }
            }
            out
        };
        let report = leibniz_check_with(&d, 100, 7, corrupted);
        assert!(!report.passed);
        assert!(report.counterexample.is_some());
    }
}
