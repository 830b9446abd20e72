//! Commutative algebras given by structure constants.
//!
//! Basis indices are 0-based in the API; text formats use 1-based `e1, e2, ...`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::AlgebraError;
use crate::field::{Field, FieldElement};
use crate::linalg::{Matrix, SubspaceBasis};
use crate::poly::ParamPoly;

pub type Vector = Vec<FieldElement>;

/// Commutative algebra with numeric structure constants. Commutativity is
/// structural: only `e_i e_j` with `i <= j` is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    name: String,
    field: Field,
    dim: usize,
    /// Products `e_i e_j` for `i <= j`, keyed by `(i, j)`; absent means zero.
    table: BTreeMap<(usize, usize), Vector>,
    /// `(i, j, k, c)` with `e_i e_j = ... + c e_k`, over both orders of `i != j`.
    terms: Vec<(usize, usize, usize, FieldElement)>,
}

impl Algebra {
    /// Builds an algebra from `(i, j, k, c)` meaning `e_i e_j += c e_k` (0-based).
    /// Entries with `i > j` are folded onto `(j, i)`.
    pub fn new(
        name: impl Into<String>,
        field: Field,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, FieldElement)>,
    ) -> Result<Self, AlgebraError> {
        let mut table: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for (i, j, k, c) in entries {
            for index in [i, j, k] {
                if index >= dim {
                    return Err(AlgebraError::IndexOutOfRange { index: index + 1, dim });
                }
            }
            if c.field() != field {
                return Err(crate::error::FieldError::Mismatch(field, c.field()).into());
            }
            let key = (i.min(j), i.max(j));
            let v = table.entry(key).or_insert_with(|| vec![field.zero(); dim]);
            v[k] = &v[k] + &c;
        }
        table.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        let mut terms = Vec::new();
        for (&(i, j), v) in &table {
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                terms.push((i, j, k, c.clone()));
                if i != j {
                    terms.push((j, i, k, c.clone()));
                }
            }
        }
        Ok(Algebra { name: name.into(), field, dim, table, terms })
    }

    /// Integer table with 1-based indices, e.g. `&[(1, 1, 2, 1)]` for `e1 e1 = e2`.
    pub fn from_table(
        name: impl Into<String>,
        field: Field,
        dim: usize,
        entries: &[(usize, usize, usize, i64)],
    ) -> Result<Self, AlgebraError> {
        for &(i, j, k, _) in entries {
            for index in [i, j, k] {
                if index == 0 || index > dim {
                    return Err(AlgebraError::IndexOutOfRange { index, dim });
                }
            }
        }
        Algebra::new(name, field, dim, entries.iter().map(|&(i, j, k, c)| (i - 1, j - 1, k - 1, field.from_i64(c))))
    }

    pub fn zero(field: Field, dim: usize) -> Self {
        Algebra::new("zero", field, dim, std::iter::empty()).expect("empty table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero products `e_i e_j` with `i <= j`.
    pub fn table(&self) -> &BTreeMap<(usize, usize), Vector> {
        &self.table
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> FieldElement {
        self.table.get(&(i.min(j), i.max(j))).map_or_else(|| self.field.zero(), |v| v[k].clone())
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    pub fn zero_vector(&self) -> Vector {
        vec![self.field.zero(); self.dim]
    }

    /// `x y` without argument validation.
    pub fn mul(&self, x: &[FieldElement], y: &[FieldElement]) -> Vector {
        let mut out = self.zero_vector();
        for (i, j, k, c) in &self.terms {
            let (a, b) = (&x[*i], &y[*j]);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            out[*k] = &out[*k] + &(&(a * b) * c);
        }
        out
    }

    pub fn multiply(&self, x: &[FieldElement], y: &[FieldElement]) -> Result<Vector, AlgebraError> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.mul(x, y))
    }

    fn check_vector(&self, x: &[FieldElement]) -> Result<(), AlgebraError> {
        if x.len() != self.dim {
            return Err(AlgebraError::Dimension { expected: self.dim, found: x.len() });
        }
        if let Some(bad) = x.iter().find(|c| c.field() != self.field) {
            return Err(crate::error::FieldError::Mismatch(self.field, bad.field()).into());
        }
        Ok(())
    }

    /// `(x y) z - x (y z)`.
    pub fn associator(
        &self,
        x: &[FieldElement],
        y: &[FieldElement],
        z: &[FieldElement],
    ) -> Result<Vector, AlgebraError> {
        self.check_vector(z)?;
        let left = self.mul(&self.multiply(x, y)?, z);
        let right = self.mul(x, &self.mul(y, z));
        Ok(sub(&left, &right))
    }

    /// `(yz, x, t) + (yt, x, z) + (zt, x, y)`.
    pub fn g_form(
        &self,
        x: &[FieldElement],
        y: &[FieldElement],
        z: &[FieldElement],
        t: &[FieldElement],
    ) -> Result<Vector, AlgebraError> {
        for v in [x, y, z, t] {
            self.check_vector(v)?;
        }
        let a = self.associator(&self.mul(y, z), x, t)?;
        let b = self.associator(&self.mul(y, t), x, z)?;
        let c = self.associator(&self.mul(z, t), x, y)?;
        Ok(add(&add(&a, &b), &c))
    }

    /// Product of two subspaces: the span of all pairwise products.
    pub fn product_space(&self, u: &SubspaceBasis, v: &SubspaceBasis) -> SubspaceBasis {
        let mut vectors = Vec::new();
        for a in u.vectors() {
            for b in v.vectors() {
                let p = self.mul(&a, &b);
                if p.iter().any(|x| !x.is_zero()) {
                    vectors.push(p);
                }
            }
        }
        SubspaceBasis::span(self.field, self.dim, &vectors).expect("vectors of the algebra")
    }

    pub fn square(&self) -> SubspaceBasis {
        let full = SubspaceBasis::full(self.field, self.dim);
        self.product_space(&full, &full)
    }

    /// `A^1 = A`, `A^k = sum_{i+j=k} A^i A^j`, listed until it reaches zero
    /// or stops changing.
    pub fn power_filtration(&self) -> Vec<SubspaceBasis> {
        let mut chain = vec![SubspaceBasis::full(self.field, self.dim)];
        let limit = 2 * self.dim + 2;
        for k in 2..=limit {
            let mut acc = SubspaceBasis::zero(self.field, self.dim);
            for i in 1..k {
                let j = k - i;
                if i > j {
                    break;
                }
                let p = self.product_space(&chain[i - 1], &chain[j - 1]);
                acc = acc.sum(&p).expect("same ambient space");
            }
            let done = acc.is_zero();
            chain.push(acc);
            if done {
                break;
            }
        }
        while chain.len() > 1 && chain[chain.len() - 1] == chain[chain.len() - 2] {
            chain.pop();
        }
        chain
    }

    pub fn is_nilpotent(&self) -> bool {
        self.power_filtration().last().is_some_and(SubspaceBasis::is_zero)
    }

    /// Length of the filtration up to and including the first zero term,
    /// i.e. the least `k` with `A^k = 0`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let chain = self.power_filtration();
        chain.last()?.is_zero().then_some(chain.len())
    }

    /// Matrix of `L_x : y -> x y` (columns are images of basis vectors).
    pub fn left_multiplication(&self, x: &[FieldElement]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        for (i, j, k, c) in &self.terms {
            if x[*i].is_zero() {
                continue;
            }
            let v = m.get(*k, *j) + &(&x[*i] * c);
            m.set(*k, *j, v);
        }
        m
    }

    /// `Ann(A) = {x : x A = 0}`.
    pub fn annihilator(&self) -> SubspaceBasis {
        let n = self.dim;
        let mut m = Matrix::zeros(self.field, n * n, n);
        for (i, j, k, c) in &self.terms {
            // row (j, k): coefficient of e_k in x e_j, as a function of x_i
            m.set(j * n + k, *i, c.clone());
        }
        m.kernel()
    }

    /// Transports the structure along the basis `f_j = sum_k P[k][j] e_k`.
    /// The result `B` makes `P`, read as a map `B -> A`, an isomorphism.
    pub fn change_of_basis(&self, p: &Matrix) -> Result<Algebra, AlgebraError> {
        if p.rows() != self.dim || p.cols() != self.dim {
            return Err(AlgebraError::Dimension { expected: self.dim, found: p.rows().max(p.cols()) });
        }
        let inv = p.inverse().ok_or(AlgebraError::Singular)?;
        let cols: Vec<Vector> = (0..self.dim).map(|j| p.column(j)).collect();
        let mut entries = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                let prod = self.mul(&cols[i], &cols[j]);
                let coords = inv.apply(&prod);
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, k, c));
                    }
                }
            }
        }
        Algebra::new(self.name.clone(), self.field, self.dim, entries)
    }

    /// Whether `phi` (columns are images `phi(e_j)` in `target`) is an
    /// isomorphism `self -> target`.
    pub fn is_isomorphism(&self, target: &Algebra, phi: &Matrix) -> bool {
        if phi.rows() != target.dim || phi.cols() != self.dim || self.dim != target.dim {
            return false;
        }
        if phi.field() != self.field || target.field != self.field {
            return false;
        }
        let cols: Vec<Vector> = (0..self.dim).map(|j| phi.column(j)).collect();
        for i in 0..self.dim {
            for j in i..self.dim {
                let lhs = match self.table.get(&(i, j)) {
                    Some(v) => phi.apply(v),
                    None => target.zero_vector(),
                };
                if lhs != target.mul(&cols[i], &cols[j]) {
                    return false;
                }
            }
        }
        phi.is_invertible()
    }

    /// Products as text, e.g. `e1e1=e2, e1e2=2e3`.
    pub fn table_string(&self) -> String {
        if self.table.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> =
            self.table.iter().map(|(&(i, j), v)| format!("e{}e{}={}", i + 1, j + 1, format_vector(v))).collect();
        parts.join(", ")
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}): {}", self.name, self.dim, self.table_string())
    }
}

/// `3e2 - e4` style rendering of a vector in the standard basis.
pub fn format_vector(v: &[FieldElement]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let s = c.to_string();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) if !matches!(c, FieldElement::Eisenstein(_)) => (true, rest.to_string()),
            _ => (false, s),
        };
        let coeff = match body.as_str() {
            "1" => String::new(),
            b if b.contains(['+', '-']) => format!("({b})"),
            b => b.to_string(),
        };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        out.push_str(&format!("{coeff}e{}", k + 1));
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

pub fn add(a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &FieldElement, a: &[FieldElement]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vector(a: &[FieldElement]) -> bool {
    a.iter().all(FieldElement::is_zero)
}

/// Algebra whose structure constants are polynomials in named parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamAlgebra {
    pub name: String,
    pub dim: usize,
    pub params: Vec<String>,
    /// `(i, j) -> (k -> c)` with `i <= j`, 0-based.
    pub sc: BTreeMap<(usize, usize), BTreeMap<usize, ParamPoly>>,
}

impl ParamAlgebra {
    pub fn new(name: impl Into<String>, dim: usize, params: Vec<String>) -> Self {
        ParamAlgebra { name: name.into(), dim, params, sc: BTreeMap::new() }
    }

    /// Adds `c e_k` to `e_i e_j` (0-based).
    pub fn add_product(&mut self, i: usize, j: usize, k: usize, c: ParamPoly) -> Result<(), AlgebraError> {
        for index in [i, j, k] {
            if index >= self.dim {
                return Err(AlgebraError::IndexOutOfRange { index: index + 1, dim: self.dim });
            }
        }
        let slot = self.sc.entry((i.min(j), i.max(j))).or_default().entry(k).or_insert_with(ParamPoly::zero);
        *slot = &*slot + &c;
        Ok(())
    }

    fn normalized(mut self) -> Self {
        for out in self.sc.values_mut() {
            out.retain(|_, c| !c.is_zero());
        }
        self.sc.retain(|_, out| !out.is_empty());
        self
    }

    pub fn evaluate(&self, field: Field, values: &BTreeMap<String, FieldElement>) -> Result<Algebra, AlgebraError> {
        let mut entries = Vec::new();
        for (&(i, j), out) in &self.sc {
            for (&k, c) in out {
                entries.push((i, j, k, c.evaluate(field, values)?));
            }
        }
        Algebra::new(self.name.clone(), field, self.dim, entries)
    }

    /// Evaluation at rational parameter values.
    pub fn evaluate_rational(
        &self,
        field: Field,
        values: &BTreeMap<String, num_rational::BigRational>,
    ) -> Result<Algebra, AlgebraError> {
        let mut mapped = BTreeMap::new();
        for (k, v) in values {
            mapped.insert(k.clone(), field.from_rational(v)?);
        }
        self.evaluate(field, &mapped)
    }

    pub fn substitute(&self, map: &BTreeMap<String, ParamPoly>) -> ParamAlgebra {
        let mut out = ParamAlgebra::new(self.name.clone(), self.dim, Vec::new());
        for (&(i, j), prods) in &self.sc {
            for (&k, c) in prods {
                out.add_product(i, j, k, c.substitute(map)).expect("same indices");
            }
        }
        let mut params: Vec<String> = out.sc.values().flat_map(|m| m.values().flat_map(|c| c.variables())).collect();
        params.sort();
        params.dedup();
        out.params = params;
        out.normalized()
    }

    pub fn from_algebra(a: &Algebra) -> Result<Self, AlgebraError> {
        let mut out = ParamAlgebra::new(a.name(), a.dim(), Vec::new());
        for (&(i, j), v) in a.table() {
            for (k, c) in v.iter().enumerate() {
                let q = c
                    .as_rational()
                    .ok_or_else(|| AlgebraError::UnsupportedField("rational structure constants".into()))?;
                out.add_product(i, j, k, ParamPoly::constant(q.clone()))?;
            }
        }
        Ok(out.normalized())
    }

    fn mul_symbolic(&self, x: &[ParamPoly], y: &[ParamPoly]) -> Vec<ParamPoly> {
        let mut out = vec![ParamPoly::zero(); self.dim];
        for (&(i, j), prods) in &self.sc {
            let mut coeff = &x[i] * &y[j];
            if i != j {
                coeff = &coeff + &(&x[j] * &y[i]);
            }
            if coeff.is_zero() {
                continue;
            }
            for (&k, c) in prods {
                out[k] = &out[k] + &(&coeff * c);
            }
        }
        out
    }

    /// Exact check over the polynomial ring that `phi` (columns are images,
    /// entries polynomial in the parameters) is a homomorphism `self -> target`
    /// with determinant a nonzero polynomial.
    pub fn is_symbolic_isomorphism(&self, target: &ParamAlgebra, phi: &[Vec<ParamPoly>]) -> bool {
        let n = self.dim;
        if target.dim != n || phi.len() != n || phi.iter().any(|r| r.len() != n) {
            return false;
        }
        let cols: Vec<Vec<ParamPoly>> = (0..n).map(|j| (0..n).map(|r| phi[r][j].clone()).collect()).collect();
        for i in 0..n {
            for j in i..n {
                let mut lhs = vec![ParamPoly::zero(); n];
                if let Some(prods) = self.sc.get(&(i, j)) {
                    for (&k, c) in prods {
                        for (r, slot) in lhs.iter_mut().enumerate() {
                            *slot = &*slot + &(c * &phi[r][k]);
                        }
                    }
                }
                if lhs != target.mul_symbolic(&cols[i], &cols[j]) {
                    return false;
                }
            }
        }
        !symbolic_determinant(phi).is_zero()
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn symbolic_determinant(m: &[Vec<ParamPoly>]) -> ParamPoly {
    let n = m.len();
    if n == 0 {
        return ParamPoly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = ParamPoly::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<ParamPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * &symbolic_determinant(&minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}
