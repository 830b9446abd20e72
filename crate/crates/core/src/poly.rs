//! Multivariate polynomials with rational coefficients in named parameters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, FieldError};
use crate::field::{Field, FieldElement};

/// A power product of variables, sorted by name, every exponent positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps: BTreeMap<String, u32> = BTreeMap::new();
        for (v, e) in self.0.iter().chain(&other.0) {
            *exps.entry(v.clone()).or_default() += e;
        }
        Monomial(exps.into_iter().collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial in named parameters; the zero polynomial has no terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = ParamPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Self {
        let mut p = ParamPoly::zero();
        p.add_term(Monomial::var(name), BigRational::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The constant value if the polynomial involves no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.keys().filter_map(|m| m.0.iter().find(|(v, _)| v == var).map(|(_, e)| *e)).max().unwrap_or(0)
    }

    pub fn pow(&self, exp: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Value at a full assignment of the variables, mapped into `field`.
    pub fn evaluate(
        &self,
        field: Field,
        values: &BTreeMap<String, FieldElement>,
    ) -> Result<FieldElement, AlgebraError> {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut term = field.from_rational(c)?;
            for (v, e) in &m.0 {
                let x = values.get(v).ok_or_else(|| AlgebraError::Unevaluated(v.clone()))?;
                if x.field() != field {
                    return Err(FieldError::Mismatch(field, x.field()).into());
                }
                term = &term * &x.pow(*e);
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Replaces variables by polynomials; unmapped variables stay as they are.
    pub fn substitute(&self, map: &BTreeMap<String, ParamPoly>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut term = ParamPoly::constant(c.clone());
            for (v, e) in &m.0 {
                let base = map.get(v).cloned().unwrap_or_else(|| ParamPoly::var(v));
                term = &term * &base.pow(*e);
            }
            out = &out + &term;
        }
        out
    }
}

impl From<BigRational> for ParamPoly {
    fn from(c: BigRational) -> Self {
        ParamPoly::constant(c)
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;

    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;

    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self + &(-rhs)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;

    fn neg(self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;

    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

fn fmt_abs_rational(q: &BigRational) -> String {
    let q = q.abs();
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text: terms by descending degree, then by monomial; the output
/// parses back with [`crate::expr::parse_coeff`].
impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = fmt_abs_rational(c);
            if m.0.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}
