//! Coefficient expressions: a small recursive-descent parser and canonical printer.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := '-' factor | atom ('^' uint)?
//! atom     := rational | ident | '(' expr ')'
//! rational := uint ('/' posint)?
//! ```
//! Juxtaposition is rejected: `2a` is a syntax error, write `2*a`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::ParseError;
use crate::poly::ParamPoly;

const MAX_EXPONENT: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffExpr {
    Num(BigRational),
    Var(String),
    Neg(Box<CoeffExpr>),
    Add(Box<CoeffExpr>, Box<CoeffExpr>),
    Sub(Box<CoeffExpr>, Box<CoeffExpr>),
    Mul(Box<CoeffExpr>, Box<CoeffExpr>),
    Pow(Box<CoeffExpr>, u32),
}

pub fn parse_coeff(text: &str) -> Result<CoeffExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(e)
}

/// Parses and expands to a polynomial in one step.
pub fn parse_poly(text: &str) -> Result<ParamPoly, ParseError> {
    parse_coeff(text).map(|e| e.to_poly())
}

impl CoeffExpr {
    pub fn to_poly(&self) -> ParamPoly {
        match self {
            CoeffExpr::Num(q) => ParamPoly::constant(q.clone()),
            CoeffExpr::Var(v) => ParamPoly::var(v),
            CoeffExpr::Neg(x) => -&x.to_poly(),
            CoeffExpr::Add(a, b) => &a.to_poly() + &b.to_poly(),
            CoeffExpr::Sub(a, b) => &a.to_poly() - &b.to_poly(),
            CoeffExpr::Mul(a, b) => &a.to_poly() * &b.to_poly(),
            CoeffExpr::Pow(a, e) => a.to_poly().pow(*e),
        }
    }

    pub fn identifiers(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_identifiers(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_identifiers(&self, out: &mut Vec<String>) {
        match self {
            CoeffExpr::Num(_) => {}
            CoeffExpr::Var(v) => out.push(v.clone()),
            CoeffExpr::Neg(x) | CoeffExpr::Pow(x, _) => x.collect_identifiers(out),
            CoeffExpr::Add(a, b) | CoeffExpr::Sub(a, b) | CoeffExpr::Mul(a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
        }
    }

    /// Expands to a polynomial after checking every identifier is a known parameter.
    pub fn bind(&self, params: &[String]) -> Result<ParamPoly, String> {
        if let Some(unknown) = self.identifiers().into_iter().find(|v| !params.contains(v)) {
            return Err(format!("unknown parameter `{unknown}`"));
        }
        Ok(self.to_poly())
    }

    fn precedence(&self) -> u8 {
        match self {
            CoeffExpr::Add(..) | CoeffExpr::Sub(..) => 1,
            CoeffExpr::Mul(..) => 2,
            CoeffExpr::Neg(_) => 3,
            CoeffExpr::Pow(..) => 4,
            CoeffExpr::Num(q) if q < &BigRational::zero() => 3,
            CoeffExpr::Num(q) if !q.is_integer() => 4,
            CoeffExpr::Num(_) | CoeffExpr::Var(_) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            CoeffExpr::Num(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            CoeffExpr::Var(v) => write!(f, "{v}"),
            CoeffExpr::Neg(x) => {
                write!(f, "-")?;
                x.write_at(f, 3)
            }
            CoeffExpr::Add(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " + ")?;
                b.write_at(f, 2)
            }
            CoeffExpr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " - ")?;
                b.write_at(f, 2)
            }
            CoeffExpr::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)
            }
            CoeffExpr::Pow(a, e) => {
                a.write_at(f, 5)?;
                write!(f, "^{e}")
            }
        }
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<CoeffExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = CoeffExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = CoeffExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<CoeffExpr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = CoeffExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        if let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'(' {
                return Err(self.error("implicit multiplication is not allowed"));
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<CoeffExpr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(CoeffExpr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected exponent"));
            }
            let exp: u32 = digits
                .parse()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or(ParseError { offset: start, message: format!("exponent exceeds {MAX_EXPONENT}") })?;
            return Ok(CoeffExpr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<CoeffExpr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digit string");
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let den = self.digits();
                    let den: BigInt = den.parse().map_err(|_| self.error("expected denominator"))?;
                    if den.is_zero() {
                        return Err(ParseError { offset: at, message: "zero denominator".into() });
                    }
                    return Ok(CoeffExpr::Num(BigRational::new(num, den)));
                }
                Ok(CoeffExpr::Num(BigRational::from_integer(num)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(CoeffExpr::Var(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses `name=expr,name=expr` assignments as used on the command line.
pub fn parse_assignments(text: &str) -> Result<BTreeMap<String, ParamPoly>, String> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| format!("expected name=value, got `{part}`"))?;
        let poly = parse_poly(value.trim()).map_err(|e| format!("{part}: {e}"))?;
        out.insert(name.trim().to_string(), poly);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldElement};
    use proptest::prelude::*;

    fn eval(text: &str, a: i64) -> FieldElement {
        let mut vals = BTreeMap::new();
        vals.insert("a".to_string(), Field::Rational.from_i64(a));
        parse_poly(text).unwrap().evaluate(Field::Rational, &vals).unwrap()
    }

    #[test]
    fn literal_fraction() {
        assert_eq!(parse_coeff("2/3").unwrap(), CoeffExpr::Num(BigRational::new(2.into(), 3.into())));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(eval("(a+1)", 2), Field::Rational.from_i64(3));
        assert!(eval("a^2 - 1", -1).is_zero());
        assert_eq!(eval("-2^2", 0), Field::Rational.from_i64(-4));
        assert_eq!(eval("-a*3", 2), Field::Rational.from_i64(-6));
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_coeff("2a").unwrap_err();
        assert_eq!(e.offset, 1);
        let e = parse_coeff("a + ").unwrap_err();
        assert_eq!(e.offset, 4);
        let e = parse_coeff("(a+1").unwrap_err();
        assert_eq!(e.offset, 4);
        assert_eq!(parse_coeff("1/0").unwrap_err().offset, 2);
        assert!(parse_coeff("a ^ x").is_err());
        assert!(parse_coeff("").is_err());
    }

    #[test]
    fn unknown_parameter_at_bind() {
        let e = parse_coeff("a + c").unwrap();
        assert!(e.bind(&["a".to_string()]).is_err());
        assert!(e.bind(&["a".to_string(), "c".to_string()]).is_ok());
    }

    #[test]
    fn poly_display_reparses() {
        for text in ["a^2 - 1", "(a+1)*(b-2)", "-3/4*a + b^3 - 7", "1 - a", "0"] {
            if let Ok(p) = parse_poly(text) {
                assert_eq!(parse_poly(&p.to_string()).unwrap(), p, "{text}");
            }
        }
    }

    #[test]
    fn assignments() {
        let m = parse_assignments("a=2, b=-1").unwrap();
        assert_eq!(m["b"], ParamPoly::from_i64(-1));
        assert!(parse_assignments("a").is_err());
    }

    fn arb_expr() -> impl Strategy<Value = CoeffExpr> {
        let leaf = prop_oneof![
            (0i64..20, 1i64..5).prop_map(|(n, d)| CoeffExpr::Num(BigRational::new(n.into(), d.into()))),
            prop_oneof![Just("a"), Just("b"), Just("x1")].prop_map(|v| CoeffExpr::Var(v.to_string())),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|x| CoeffExpr::Neg(Box::new(x))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| CoeffExpr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| CoeffExpr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| CoeffExpr::Mul(Box::new(a), Box::new(b))),
                (inner, 0u32..4).prop_map(|(a, e)| CoeffExpr::Pow(Box::new(a), e)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 256, rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed), failure_persistence: None, ..ProptestConfig::default() })]

        #[test]
        fn print_parse_fixed_point(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = parse_coeff(&printed).unwrap();
            prop_assert_eq!(&reparsed, &e);
            prop_assert_eq!(reparsed.to_string(), printed);
        }

        #[test]
        fn canonical_poly_text_is_stable(e in arb_expr()) {
            let p = e.to_poly();
            let again = parse_poly(&p.to_string()).unwrap();
            prop_assert_eq!(again, p);
        }
    }
}
