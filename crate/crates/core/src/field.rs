//! Exact scalar fields: rationals, prime fields and the rationals adjoined a
//! primitive cube root of unity.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::FieldError;

/// Descriptor of the field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// Arbitrary-precision rationals.
    Rational,
    /// Residues modulo a prime `p < 2^31`.
    Prime(u32),
    /// `Q(w)` with `w^2 + w + 1 = 0`.
    Eisenstein,
}

impl Field {
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(FieldError::BadModulus(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldElement {
        match self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(n.into())),
            Field::Prime(p) => FieldElement::Prime { value: n.rem_euclid(p as i64) as u32, modulus: p },
            Field::Eisenstein => FieldElement::eisenstein(BigRational::from_integer(n.into()), BigRational::zero()),
        }
    }

    /// Image of a rational number. Fails in GF(p) when the denominator is
    /// divisible by `p`.
    pub fn from_rational(self, q: &BigRational) -> Result<FieldElement, FieldError> {
        match self {
            Field::Rational => Ok(FieldElement::Rational(q.clone())),
            Field::Eisenstein => Ok(FieldElement::eisenstein(q.clone(), BigRational::zero())),
            Field::Prime(p) => {
                let modulus = BigInt::from(p);
                let num = q.numer().mod_floor(&modulus).to_u32().unwrap_or(0);
                let den = q.denom().mod_floor(&modulus).to_u32().unwrap_or(0);
                if den == 0 {
                    return Err(FieldError::NotInvertible(q.to_string(), p));
                }
                let num = FieldElement::Prime { value: num, modulus: p };
                let den = FieldElement::Prime { value: den, modulus: p };
                Ok(&num * &den.inverse().expect("nonzero residue"))
            }
        }
    }

    /// Number of elements, if finite.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Prime(p) => Some(p as u64),
            _ => None,
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Prime(p) => p,
            _ => 0,
        }
    }

    /// All field elements in increasing residue order (finite fields only).
    pub fn elements(self) -> Option<Vec<FieldElement>> {
        match self {
            Field::Prime(p) => Some((0..p).map(|value| FieldElement::Prime { value, modulus: p }).collect()),
            _ => None,
        }
    }

    /// The primitive cube root of unity `w` (Eisenstein field only).
    pub fn omega(self) -> Option<FieldElement> {
        match self {
            Field::Eisenstein => Some(FieldElement::eisenstein(BigRational::zero(), BigRational::one())),
            _ => None,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "gf:{p}"),
            Field::Eisenstein => write!(f, "q(w)"),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "q" | "Q" => Ok(Field::Rational),
            "q(w)" | "Q(w)" => Ok(Field::Eisenstein),
            _ => {
                let p = s
                    .strip_prefix("gf:")
                    .and_then(|rest| rest.parse::<u32>().ok())
                    .ok_or_else(|| FieldError::BadDescriptor(s.to_string()))?;
                Field::prime(p)
            }
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A scalar in one of the supported exact fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime {
        value: u32,
        modulus: u32,
    },
    /// `a + b w`.
    Eisenstein(Box<(BigRational, BigRational)>),
}

impl FieldElement {
    pub fn eisenstein(a: BigRational, b: BigRational) -> Self {
        FieldElement::Eisenstein(Box::new((a, b)))
    }

    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rational,
            FieldElement::Prime { modulus, .. } => Field::Prime(*modulus),
            FieldElement::Eisenstein(_) => Field::Eisenstein,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Prime { value, .. } => *value == 0,
            FieldElement::Eisenstein(ab) => ab.0.is_zero() && ab.1.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Prime { value, .. } => *value == 1,
            FieldElement::Eisenstein(ab) => ab.0.is_one() && ab.1.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        same_field(self, other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        same_field(self, other)?;
        Ok(self * other)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElement::Rational(q) => FieldElement::Rational(q.recip()),
            FieldElement::Prime { value, modulus } => FieldElement::Prime {
                value: pow_mod(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                modulus: *modulus,
            },
            FieldElement::Eisenstein(ab) => {
                let (a, b) = (&ab.0, &ab.1);
                // (a + bw)(a - b - bw) = a^2 - ab + b^2
                let norm = a * a - a * b + b * b;
                FieldElement::eisenstein((a - b) / &norm, -b / &norm)
            }
        })
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }
}

fn same_field(a: &FieldElement, b: &FieldElement) -> Result<(), FieldError> {
    if a.field() == b.field() {
        Ok(())
    } else {
        Err(FieldError::Mismatch(a.field(), b.field()))
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn mismatch(a: &FieldElement, b: &FieldElement) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (FieldElement::Prime { value: a, modulus }, FieldElement::Prime { value: b, modulus: m2 })
                if modulus == m2 =>
            {
                FieldElement::Prime { value: ((*a as u64 + *b as u64) % *modulus as u64) as u32, modulus: *modulus }
            }
            (FieldElement::Eisenstein(a), FieldElement::Eisenstein(b)) => {
                FieldElement::eisenstein(&a.0 + &b.0, &a.1 + &b.1)
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: &FieldElement) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (FieldElement::Prime { value: a, modulus }, FieldElement::Prime { value: b, modulus: m2 })
                if modulus == m2 =>
            {
                FieldElement::Prime { value: ((*a as u64 * *b as u64) % *modulus as u64) as u32, modulus: *modulus }
            }
            (FieldElement::Eisenstein(x), FieldElement::Eisenstein(y)) => {
                // w^2 = -1 - w
                let (a, b) = (&x.0, &x.1);
                let (c, d) = (&y.0, &y.1);
                let bd = b * d;
                FieldElement::eisenstein(a * c - &bd, a * d + b * c - bd)
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Prime { value, modulus } => {
                FieldElement::Prime { value: if *value == 0 { 0 } else { modulus - value }, modulus: *modulus }
            }
            FieldElement::Eisenstein(ab) => FieldElement::eisenstein(-&ab.0, -&ab.1),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => write!(f, "{}", fmt_rational(q)),
            FieldElement::Prime { value, .. } => write!(f, "{value}"),
            FieldElement::Eisenstein(ab) => {
                let (a, b) = (&ab.0, &ab.1);
                match (a.is_zero(), b.is_zero()) {
                    (_, true) => write!(f, "{}", fmt_rational(a)),
                    (true, false) => write!(f, "{}*w", fmt_rational(b)),
                    (false, false) => {
                        let sign = if b.is_negative() { "-" } else { "+" };
                        write!(f, "{}{}{}*w", fmt_rational(a), sign, fmt_rational(&b.abs()))
                    }
                }
            }
        }
    }
}
