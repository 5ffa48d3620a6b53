//! Coefficient rings.
//!
//! Rings are passed around as context values: a [`Ring`] knows how to add and
//! multiply its elements, which lets prime fields carry their modulus and the
//! exterior and enveloping algebras carry their number of generators.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An associative unital ring, possibly noncommutative.
pub trait Ring: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Two-sided inverse, when it exists.
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Image of an integer under the unique ring map from `Z`.
    fn from_int(&self, v: i64) -> Self::Elem;

    /// Characteristic of the ring (0 for characteristic zero).
    fn characteristic(&self) -> u64;

    fn render(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Image of an arbitrary-precision integer.
    fn from_bigint(&self, v: &BigInt) -> Self::Elem {
        match v.to_i64() {
            Some(small) => self.from_int(small),
            None => {
                // Horner in base 2^32.
                let base = self.from_int(1 << 32);
                let (sign, digits) = v.to_u32_digits();
                let mut acc = self.zero();
                for d in digits.iter().rev() {
                    acc = self.add(&self.mul(&acc, &base), &self.from_int(i64::from(*d)));
                }
                if sign == num_bigint::Sign::Minus {
                    self.neg(&acc)
                } else {
                    acc
                }
            }
        }
    }
}

/// The integers, with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
    fn from_int(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

/// The rationals, with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inverse(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_int(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// The prime field `F_p`, elements stored as canonical residues in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Fails unless `p` is prime and fits comfortably in 32 bits.
    pub fn new(p: u64) -> Result<Self, Error> {
        if p > u64::from(u32::MAX) || !is_prime(p) {
            return Err(Error::UnsupportedRing(format!("F_{p}: modulus is not a supported prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inverse(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v % BigInt::from(self.p);
        let r = if r.is_negative() { r + BigInt::from(self.p) } else { r };
        r.to_u64().expect("residue fits in u64")
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Which coefficient domain a (co)homology computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coefficients {
    Integers,
    Rationals,
    /// `F_p`; the modulus is checked for primality where it is used.
    Prime(u64),
}

impl Coefficients {
    pub const F2: Coefficients = Coefficients::Prime(2);
    pub const F3: Coefficients = Coefficients::Prime(3);

    /// The grid used by the cross-validation suites.
    pub const STANDARD: [Coefficients; 4] =
        [Coefficients::Integers, Coefficients::Rationals, Coefficients::F2, Coefficients::F3];

    pub fn characteristic(&self) -> u64 {
        match self {
            Coefficients::Integers | Coefficients::Rationals => 0,
            Coefficients::Prime(p) => *p,
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Coefficients::Integers)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if let Coefficients::Prime(p) = self {
            PrimeField::new(*p)?;
        }
        Ok(())
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Rationals => write!(f, "Q"),
            Coefficients::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = Error;

    /// Accepts `Z`, `Q`, `F<p>` and `Fp:<p>` (case-insensitive).
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim().to_ascii_uppercase();
        let ring = match t.as_str() {
            "Z" | "ZZ" => Coefficients::Integers,
            "Q" | "QQ" => Coefficients::Rationals,
            _ => {
                let digits = t
                    .strip_prefix("FP:")
                    .or_else(|| t.strip_prefix("F_"))
                    .or_else(|| t.strip_prefix('F'))
                    .ok_or_else(|| Error::UnsupportedRing(s.to_string()))?;
                let p: u64 = digits.parse().map_err(|_| Error::UnsupportedRing(s.to_string()))?;
                Coefficients::Prime(p)
            }
        };
        ring.validate()?;
        Ok(ring)
    }
}
