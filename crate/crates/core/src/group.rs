//! Exact arithmetic for the permutation group S3.
//!
//! Elements are kept in the normal form `t^a c^b` with `t² = c³ = e` and
//! `tc = c²t`. The canonical index of an element is `3a + b`, which orders the
//! group as `(e, c, c², t, tc, tc²)`. Every diagonal single-spin table in the
//! crate is indexed in this order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Group order of S3.
pub const ORDER: usize = 6;

/// One element of S3 in the normal form `t^a c^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GroupElement(u8);

impl GroupElement {
    pub const E: Self = Self(0);
    pub const C: Self = Self(1);
    pub const C2: Self = Self(2);
    pub const T: Self = Self(3);
    pub const TC: Self = Self(4);
    pub const TC2: Self = Self(5);

    /// All six elements in canonical order.
    pub const ALL: [Self; ORDER] = [Self::E, Self::C, Self::C2, Self::T, Self::TC, Self::TC2];

    /// Builds `t^a c^b`; exponents are reduced mod 2 and mod 3.
    pub const fn from_exponents(a: u8, b: u8) -> Self {
        Self(3 * (a % 2) + b % 3)
    }

    /// Element with canonical index `i` (0..6).
    pub fn from_index(i: usize) -> Option<Self> {
        (i < ORDER).then_some(Self(i as u8))
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    /// Exponent of `t`.
    #[inline]
    pub const fn t_exp(self) -> u8 {
        self.0 / 3
    }

    /// Exponent of `c`.
    #[inline]
    pub const fn c_exp(self) -> u8 {
        self.0 % 3
    }

    #[inline]
    pub const fn is_identity(self) -> bool {
        self.0 == 0
    }

    /// True for the three reflections `t, tc, tc²`.
    #[inline]
    pub const fn is_reflection(self) -> bool {
        self.0 >= 3
    }

    /// Group product `self · rhs`.
    #[inline]
    pub const fn mul(self, rhs: Self) -> Self {
        Self(MUL_TABLE[self.0 as usize][rhs.0 as usize])
    }

    #[inline]
    pub const fn inverse(self) -> Self {
        Self(INV_TABLE[self.0 as usize])
    }

    /// `g · self · g⁻¹`.
    #[inline]
    pub const fn conjugate_by(self, g: Self) -> Self {
        g.mul(self).mul(g.inverse())
    }

    /// Conjugacy class of the element.
    pub const fn class(self) -> ConjugacyClass {
        match self.0 {
            0 => ConjugacyClass::Identity,
            1 | 2 => ConjugacyClass::Rotation,
            _ => ConjugacyClass::Reflection,
        }
    }

    /// Product of a sequence, taken left to right.
    pub fn product<I: IntoIterator<Item = Self>>(iter: I) -> Self {
        iter.into_iter().fold(Self::E, Self::mul)
    }

    pub const fn name(self) -> &'static str {
        NAMES[self.0 as usize]
    }
}

const NAMES: [&str; ORDER] = ["e", "c", "c2", "t", "tc", "tc2"];

// (t^a1 c^b1)(t^a2 c^b2) = t^(a1+a2) c^((-1)^a2 b1 + b2), using c^b t = t c^-b.
const fn build_mul_table() -> [[u8; ORDER]; ORDER] {
    let mut table = [[0u8; ORDER]; ORDER];
    let mut x = 0;
    while x < ORDER {
        let mut y = 0;
        while y < ORDER {
            let (a1, b1) = (x / 3, x % 3);
            let (a2, b2) = (y / 3, y % 3);
            let b1_moved = if a2 == 1 { (3 - b1) % 3 } else { b1 };
            table[x][y] = (3 * ((a1 + a2) % 2) + (b1_moved + b2) % 3) as u8;
            y += 1;
        }
        x += 1;
    }
    table
}

const fn build_inv_table() -> [u8; ORDER] {
    let mut inv = [0u8; ORDER];
    let mut x = 0;
    while x < ORDER {
        let mut y = 0;
        while y < ORDER {
            if MUL_TABLE[x][y] == 0 {
                inv[x] = y as u8;
            }
            y += 1;
        }
        x += 1;
    }
    inv
}

/// Cayley table indexed by canonical element index.
pub const MUL_TABLE: [[u8; ORDER]; ORDER] = build_mul_table();
const INV_TABLE: [u8; ORDER] = build_inv_table();

impl std::ops::Mul for GroupElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        GroupElement::mul(self, rhs)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| Self(i as u8))
            .ok_or_else(|| Error::Parse(format!("unknown S3 element `{s}`")))
    }
}

impl TryFrom<String> for GroupElement {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<GroupElement> for String {
    fn from(g: GroupElement) -> String {
        g.name().to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConjugacyClass {
    Identity,
    Rotation,
    Reflection,
}

/// Irreducible representations of S3. They label the vertex charges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Irrep {
    /// Trivial representation (vacuum charge `1`).
    Trivial,
    /// Sign representation (charge `Λ`).
    Sign,
    /// Two-dimensional representation (charge `Φ`).
    TwoDim,
}

impl Irrep {
    pub const ALL: [Irrep; 3] = [Irrep::Trivial, Irrep::Sign, Irrep::TwoDim];

    pub const fn dimension(self) -> usize {
        match self {
            Irrep::Trivial | Irrep::Sign => 1,
            Irrep::TwoDim => 2,
        }
    }

    /// Character table row, indexed in canonical element order.
    pub const fn characters(self) -> [f64; ORDER] {
        match self {
            Irrep::Trivial => [1.0; ORDER],
            Irrep::Sign => [1.0, 1.0, 1.0, -1.0, -1.0, -1.0],
            Irrep::TwoDim => [2.0, -1.0, -1.0, 0.0, 0.0, 0.0],
        }
    }

    #[inline]
    pub const fn character(self, g: GroupElement) -> f64 {
        self.characters()[g.index()]
    }

    /// Coefficients `(dim/|G|) χ(g)` of the central idempotent for this irrep.
    pub fn projector_coefficients(self) -> [f64; ORDER] {
        let scale = self.dimension() as f64 / ORDER as f64;
        self.characters().map(|x| scale * x)
    }
}

/// Primitive cube root of unity `e^{2πi/3}`.
pub fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

/// `(character(A, g))` for every pair; handy for exhaustive checks.
pub fn character(irrep: Irrep, g: GroupElement) -> f64 {
    irrep.character(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroupElement as G;

    #[test]
    fn named_products() {
        assert_eq!(G::T * G::C, G::TC);
        assert_eq!(G::C * G::T, G::TC2);
        assert_eq!(G::TC * G::TC, G::E);
        assert_eq!(G::T * G::C, G::C2 * G::T);
    }

    #[test]
    fn inverses() {
        assert_eq!(G::E.inverse(), G::E);
        assert_eq!(G::C.inverse(), G::C2);
        assert_eq!(G::TC.inverse(), G::TC);
        for g in G::ALL {
            assert_eq!(g * g.inverse(), G::E);
            assert_eq!(g.inverse() * g, G::E);
        }
    }

    #[test]
    fn associativity_and_identity() {
        for x in G::ALL {
            assert_eq!(G::E * x, x);
            assert_eq!(x * G::E, x);
            for y in G::ALL {
                for z in G::ALL {
                    assert_eq!((x * y) * z, x * (y * z));
                }
            }
        }
    }

    #[test]
    fn documented_characters() {
        assert_eq!(character(Irrep::TwoDim, G::E), 2.0);
        assert_eq!(character(Irrep::Sign, G::T), -1.0);
        assert_eq!(character(Irrep::TwoDim, G::TC), 0.0);
    }

    #[test]
    fn omega_is_cube_root() {
        let w = omega();
        assert!((w * w * w - 1.0).norm() < 1e-15);
        assert!((1.0 + w + w * w).norm() < 1e-15);
    }

    #[test]
    fn names_round_trip() {
        for g in G::ALL {
            assert_eq!(g.name().parse::<G>().unwrap(), g);
        }
        assert!("x".parse::<G>().is_err());
        let json = serde_json::to_string(&G::TC2).unwrap();
        assert_eq!(json, "\"tc2\"");
    }
}
