//! Dense exact linear algebra over a [`Field`].

use std::fmt;

use crate::error::LinalgError;
use crate::field::{Field, FieldElement};

/// Dense row-major matrix whose entries all live in one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows, checking shape and that every entry lies in `field`.
    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElement>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::Ragged);
            }
            for x in row {
                if x.field() != field {
                    return Err(crate::error::FieldError::Mismatch(field, x.field()).into());
                }
                data.push(x);
            }
        }
        Ok(Matrix { field, rows: nrows, cols, data })
    }

    /// Like [`Matrix::from_rows`] with an explicit column count, so that
    /// zero-row matrices keep their width.
    pub fn from_rows_with_cols(field: Field, cols: usize, rows: Vec<Vec<FieldElement>>) -> Result<Self, LinalgError> {
        if rows.is_empty() {
            return Ok(Matrix::zeros(field, 0, cols));
        }
        let m = Matrix::from_rows(field, rows)?;
        if m.cols != cols {
            return Err(LinalgError::Dimension { expected: cols, found: m.cols });
        }
        Ok(m)
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Matrix::from_rows(field, rows).expect("rectangular integer matrix")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        debug_assert_eq!(v.field(), self.field);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension { expected: self.cols, found: other.rows });
        }
        if self.field != other.field {
            return Err(crate::error::FieldError::Mismatch(self.field, other.field).into());
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = &out.data[i * out.cols + j] + &(a * b);
                        out.data[i * out.cols + j] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows).map(|r| dot(self.field, self.row(r), v)).collect()
    }

    /// Reduced row-echelon form, rank and pivot columns.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(found) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, found);
            let inv = m.get(row, col).inverse().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let p = m.get(row, c);
                    if p.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&factor * p);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { rank: pivots.len(), rref: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, self.field.one());
        }
        let e = aug.echelon();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, e.rref.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Some solution of `M x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for (r, rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs.clone());
        }
        let e = aug.echelon();
        if e.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &p) in e.pivots.iter().enumerate() {
            x[p] = e.rref.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of `{v : M v = 0}`.
    pub fn kernel(&self) -> SubspaceBasis {
        let e = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        let vectors: Vec<Vec<FieldElement>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &p) in e.pivots.iter().enumerate() {
                    v[p] = -e.rref.get(r, f);
                }
                v
            })
            .collect();
        SubspaceBasis::span(self.field, self.cols, &vectors).expect("kernel vectors share the field")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form and rank.
pub fn echelonize(m: &Matrix) -> (Matrix, usize) {
    let e = m.echelon();
    (e.rref, e.rank)
}

pub fn kernel(m: &Matrix) -> SubspaceBasis {
    m.kernel()
}

pub fn dot(field: Field, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

/// A linear subspace of `F^n`, stored canonically as the nonzero rows of its
/// reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(field: Field, ambient_dim: usize) -> Self {
        SubspaceBasis { basis: Matrix::zeros(field, 0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Self {
        SubspaceBasis { basis: Matrix::identity(field, ambient_dim), pivots: (0..ambient_dim).collect() }
    }

    /// Span of arbitrary vectors of length `ambient_dim`.
    pub fn span(field: Field, ambient_dim: usize, vectors: &[Vec<FieldElement>]) -> Result<Self, LinalgError> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(LinalgError::Dimension { expected: ambient_dim, found: v.len() });
            }
        }
        let m = Matrix::from_rows_with_cols(field, ambient_dim, vectors.to_vec())?;
        Ok(Self::from_echelon(m.echelon()))
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix) -> Self {
        Self::from_echelon(m.echelon())
    }

    fn from_echelon(e: Echelon) -> Self {
        let rows = (0..e.rank).map(|r| e.rref.row(r).to_vec()).collect();
        let basis = Matrix::from_rows_with_cols(e.rref.field(), e.rref.cols(), rows).expect("rows of one matrix");
        SubspaceBasis { basis, pivots: e.pivots }
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<FieldElement>> {
        self.basis.to_rows()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v` modulo this subspace: the vector with
    /// zeros in every pivot column.
    pub fn reduce(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.ambient_dim(), "vector length");
        let mut out = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let c = out[p].clone();
            for (j, b) in self.basis.row(r).iter().enumerate() {
                if !b.is_zero() {
                    out[j] = &out[j] - &(&c * b);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).iter().all(FieldElement::is_zero)
    }

    /// Coefficients of `v` in the stored basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// `sum c_i b_i` over the stored basis rows.
    pub fn combine(&self, coeffs: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(coeffs.len(), self.dim(), "coefficient count");
        let mut out = vec![self.field().zero(); self.ambient_dim()];
        for (r, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(r).iter().enumerate() {
                if !b.is_zero() {
                    out[j] = &out[j] + &(c * b);
                }
            }
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<(), LinalgError> {
        if self.field() != other.field() {
            return Err(crate::error::FieldError::Mismatch(self.field(), other.field()).into());
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(LinalgError::Dimension { expected: self.ambient_dim(), found: other.ambient_dim() });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        let mut rows = self.vectors();
        rows.extend(other.vectors());
        Self::span(self.field(), self.ambient_dim(), &rows)
    }

    /// Intersection by the Zassenhaus construction.
    pub fn intersection(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        let n = self.ambient_dim();
        let field = self.field();
        let mut rows = Vec::new();
        for v in self.vectors() {
            let mut row = v.clone();
            row.extend(v);
            rows.push(row);
        }
        for v in other.vectors() {
            let mut row = v;
            row.extend(vec![field.zero(); n]);
            rows.push(row);
        }
        let e = Matrix::from_rows_with_cols(field, 2 * n, rows)?.echelon();
        let inter: Vec<Vec<FieldElement>> =
            e.pivots.iter().enumerate().filter(|(_, &p)| p >= n).map(|(r, _)| e.rref.row(r)[n..].to_vec()).collect();
        Self::span(field, n, &inter)
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_compatible(other)?;
        Ok(self.vectors().iter().all(|v| other.contains(v)))
    }

    /// Membership test with explicit compatibility checking.
    pub fn try_contains(&self, v: &[FieldElement]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim() {
            return Err(LinalgError::Dimension { expected: self.ambient_dim(), found: v.len() });
        }
        if let Some(x) = v.iter().find(|x| x.field() != self.field()) {
            return Err(crate::error::FieldError::Mismatch(self.field(), x.field()).into());
        }
        Ok(self.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GF2: Field = Field::Prime(2);

    #[test]
    fn identity_is_reduced() {
        let id = Matrix::identity(Field::Rational, 2);
        assert_eq!(echelonize(&id), (id.clone(), 2));
    }

    #[test]
    fn dependent_rows() {
        let m = Matrix::from_i64(Field::Rational, &[&[1, 2], &[2, 4]]);
        let expected = Matrix::from_i64(Field::Rational, &[&[1, 2], &[0, 0]]);
        assert_eq!(echelonize(&m), (expected, 1));
    }

    #[test]
    fn gf2_reduction() {
        let m = Matrix::from_i64(GF2, &[&[1, 1], &[1, 0]]);
        assert_eq!(echelonize(&m), (Matrix::identity(GF2, 2), 2));
    }

    #[test]
    fn mixed_entries_rejected() {
        let rows = vec![vec![Field::Rational.one(), Field::Prime(3).one()]];
        assert!(matches!(Matrix::from_rows(Field::Rational, rows), Err(LinalgError::Field(_))));
    }

    #[test]
    fn kernel_examples() {
        let q = Field::Rational;
        assert_eq!(Matrix::zeros(q, 3, 3).kernel(), SubspaceBasis::full(q, 3));
        assert!(Matrix::identity(q, 3).kernel().is_zero());
        let k = Matrix::from_i64(q, &[&[1, 2, 3]]).kernel();
        assert_eq!(k.dim(), 2);
        assert!(k.contains(&[q.from_i64(-2), q.from_i64(1), q.from_i64(0)]));
        assert!(k.contains(&[q.from_i64(-3), q.from_i64(0), q.from_i64(1)]));
    }

    fn e(field: Field, n: usize, coords: &[i64]) -> Vec<FieldElement> {
        assert_eq!(coords.len(), n);
        coords.iter().map(|&c| field.from_i64(c)).collect()
    }

    #[test]
    fn subspace_examples() {
        let q = Field::Rational;
        let a = SubspaceBasis::span(q, 2, &[e(q, 2, &[1, 0])]).unwrap();
        let b = SubspaceBasis::span(q, 2, &[e(q, 2, &[0, 1])]).unwrap();
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
        assert_eq!(a.intersection(&b).unwrap().dim(), 0);
        assert_eq!(a.intersection(&a).unwrap(), a);

        let a = SubspaceBasis::span(GF2, 3, &[e(GF2, 3, &[1, 1, 0]), e(GF2, 3, &[0, 0, 1])]).unwrap();
        let b = SubspaceBasis::span(GF2, 3, &[e(GF2, 3, &[0, 1, 0]), e(GF2, 3, &[0, 0, 1])]).unwrap();
        let expected = SubspaceBasis::span(GF2, 3, &[e(GF2, 3, &[0, 0, 1])]).unwrap();
        assert_eq!(a.intersection(&b).unwrap(), expected);
    }

    /// Intersection over GF(2) by listing every point of both subspaces.
    #[test]
    fn intersection_matches_point_enumeration() {
        let a = SubspaceBasis::span(GF2, 3, &[e(GF2, 3, &[1, 1, 0]), e(GF2, 3, &[0, 0, 1])]).unwrap();
        let b = SubspaceBasis::span(GF2, 3, &[e(GF2, 3, &[0, 1, 0]), e(GF2, 3, &[0, 0, 1])]).unwrap();
        let mut common = Vec::new();
        for bits in 0..8i64 {
            let v = e(GF2, 3, &[bits & 1, (bits >> 1) & 1, (bits >> 2) & 1]);
            if a.contains(&v) && b.contains(&v) {
                common.push(v);
            }
        }
        assert_eq!(common.len(), 2);
        let inter = a.intersection(&b).unwrap();
        assert_eq!(1 << inter.dim(), common.len());
        assert!(common.iter().all(|v| inter.contains(v)));
    }

    #[test]
    fn ambient_mismatch_is_error() {
        let a = SubspaceBasis::full(Field::Rational, 2);
        let b = SubspaceBasis::full(Field::Rational, 3);
        assert!(matches!(a.sum(&b), Err(LinalgError::Dimension { .. })));
        let c = SubspaceBasis::full(Field::Prime(5), 2);
        assert!(matches!(a.intersection(&c), Err(LinalgError::Field(_))));
    }

    #[test]
    fn solve_and_inverse() {
        let q = Field::Rational;
        let m = Matrix::from_i64(q, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(q, 2));
        let x = m.solve(&e(q, 2, &[3, 2])).unwrap();
        assert_eq!(x, e(q, 2, &[1, 1]));
        assert!(Matrix::from_i64(q, &[&[1, 1], &[1, 1]]).inverse().is_none());
        assert!(Matrix::from_i64(q, &[&[1, 1], &[1, 1]]).solve(&e(q, 2, &[0, 1])).is_none());
    }

    fn field_strategy() -> impl Strategy<Value = Field> {
        prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(7)),]
    }

    fn matrix_strategy() -> impl Strategy<Value = Matrix> {
        (field_strategy(), 0usize..5, 1usize..6).prop_flat_map(|(f, r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |xs| {
                let rows = xs.chunks(c).map(|ch| ch.iter().map(|&x| f.from_i64(x)).collect()).collect();
                Matrix::from_rows_with_cols(f, c, rows).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 256, rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed), failure_persistence: None, ..ProptestConfig::default() })]

        #[test]
        fn echelon_preserves_row_space(m in matrix_strategy()) {
            let (rref, _) = echelonize(&m);
            let original = SubspaceBasis::row_space(&m);
            let reduced = SubspaceBasis::row_space(&rref);
            for r in 0..m.rows() {
                prop_assert!(reduced.contains(m.row(r)));
            }
            for r in 0..rref.rows() {
                prop_assert!(original.contains(rref.row(r)));
            }
            prop_assert_eq!(echelonize(&rref).0, rref.clone());
            let e = m.echelon();
            prop_assert!(e.pivots.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn rank_nullity(m in matrix_strategy()) {
            let k = m.kernel();
            prop_assert_eq!(k.dim() + m.rank(), m.cols());
            for v in k.vectors() {
                prop_assert!(m.apply(&v).iter().all(FieldElement::is_zero));
            }
        }

        #[test]
        fn grassmann_formula(a in matrix_strategy(), rows in proptest::collection::vec(-3i64..4, 0..25)) {
            let n = a.cols();
            let f = a.field();
            let b_rows: Vec<Vec<FieldElement>> = rows.chunks_exact(n).map(|ch| ch.iter().map(|&x| f.from_i64(x)).collect()).collect();
            let sa = SubspaceBasis::row_space(&a);
            let sb = SubspaceBasis::span(f, n, &b_rows).unwrap();
            let sum = sa.sum(&sb).unwrap();
            let inter = sa.intersection(&sb).unwrap();
            prop_assert_eq!(sum.dim() + inter.dim(), sa.dim() + sb.dim());
            prop_assert!(inter.is_subspace_of(&sa).unwrap());
            prop_assert!(inter.is_subspace_of(&sb).unwrap());
        }
    }
}
