//! Parities, Koszul signs, super-dimensions and graded permutations.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An element of Z/2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: usize) -> Self {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        self + Parity::Odd
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() ^ rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "0",
            Parity::Odd => "1",
        })
    }
}

impl Serialize for Parity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.bit() as u8)
    }
}

impl<'de> Deserialize<'de> for Parity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(Parity::Even),
            1 => Ok(Parity::Odd),
            other => Err(serde::de::Error::custom(format!("parity must be 0 or 1, got {other}"))),
        }
    }
}

/// ±1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(p: Parity) -> Self {
        match p {
            Parity::Even => Sign::Plus,
            Parity::Odd => Sign::Minus,
        }
    }

    /// `(-1)^n`.
    pub fn pow_neg_one(n: usize) -> Self {
        Self::from_parity(Parity::from_bit(n))
    }

    pub fn to_parity(self) -> Parity {
        match self {
            Sign::Plus => Parity::Even,
            Sign::Minus => Parity::Odd,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_scalar(self) -> Scalar {
        Scalar::from_int(self.to_i64())
    }

    pub fn apply(self, x: &Scalar) -> Scalar {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => -x,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.to_parity() + rhs.to_parity())
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.to_i64() as i8)
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(serde::de::Error::custom(format!("sign must be 1 or -1, got {other}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// The Koszul sign `(-1)^{p·q}` picked up when homogeneous elements of
/// parities `p` and `q` are interchanged.
pub fn koszul_sign(p: Parity, q: Parity) -> Sign {
    Sign::from_parity(Parity::from_bit(p.bit() & q.bit()))
}

/// Super-dimension `(m|n)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct SuperDimension {
    pub even: usize,
    pub odd: usize,
}

impl SuperDimension {
    pub fn new(even: usize, odd: usize) -> Self {
        SuperDimension { even, odd }
    }

    pub fn total(self) -> usize {
        self.even + self.odd
    }

    pub fn parity_shift(self) -> Self {
        SuperDimension::new(self.odd, self.even)
    }
}

impl fmt::Display for SuperDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.even, self.odd)
    }
}

/// `(m|n)⊗(p|q) = (mp+nq | mq+np)`.
pub fn superdim_tensor(a: SuperDimension, b: SuperDimension) -> SuperDimension {
    SuperDimension::new(a.even * b.even + a.odd * b.odd, a.even * b.odd + a.odd * b.even)
}

/// A permutation of `r` graded slots.
///
/// `permutation[i]` is the original position of the element that ends up in
/// position `i`; `parities[j]` is the parity of the element originally at `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedPermutation {
    permutation: Vec<usize>,
    parities: Vec<Parity>,
}

impl GradedPermutation {
    pub fn new(permutation: Vec<usize>, parities: Vec<Parity>) -> Result<Self> {
        if permutation.len() != parities.len() {
            return Err(Error::MalformedInput(format!(
                "permutation of length {} with {} parities",
                permutation.len(),
                parities.len()
            )));
        }
        let mut seen = vec![false; permutation.len()];
        for &p in &permutation {
            if p >= seen.len() || seen[p] {
                return Err(Error::MalformedInput(format!("{permutation:?} is not a bijection")));
            }
            seen[p] = true;
        }
        Ok(GradedPermutation { permutation, parities })
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    /// Parities listed in the permuted order.
    pub fn permuted_parities(&self) -> Vec<Parity> {
        self.permutation.iter().map(|&j| self.parities[j]).collect()
    }
}

/// Sign of reordering graded elements: the product of [`koszul_sign`] over all
/// pairs whose relative order the permutation reverses.
pub fn reorder_sign(gp: &GradedPermutation) -> Sign {
    let p = &gp.permutation;
    let mut odd_inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] && gp.parities[p[i]].is_odd() && gp.parities[p[j]].is_odd() {
                odd_inversions += 1;
            }
        }
    }
    Sign::pow_neg_one(odd_inversions)
}
