//! Second cohomology of a commutative algebra with trivial one-dimensional
//! coefficients: cocycles, coboundaries, a canonical complement of B² in Z²,
//! cocycle annihilators and the T_s / R_s / U_s membership test.
//!
//! Symmetric bilinear forms are written in Δ-coordinates: `Δij` with `i <= j`
//! takes the value 1 on `(e_i, e_j)` and on `(e_j, e_i)`, ordered
//! lexicographically `Δ11, Δ12, ..., Δnn`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::{Algebra, Vector};
use crate::error::AlgebraError;
use crate::field::{Field, FieldElement};
use crate::identities::{holds, Identity};
use crate::linalg::{Matrix, SubspaceBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variety {
    Ccd,
    Jordan,
    SymmetricAll,
}

impl std::str::FromStr for Variety {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ccd" => Ok(Variety::Ccd),
            "jordan" => Ok(Variety::Jordan),
            "all" | "symmetric_all" => Ok(Variety::SymmetricAll),
            other => Err(format!("unknown variety `{other}` (expected ccd, jordan or all)")),
        }
    }
}

/// Pairs `(i, j)` with `i <= j`, 0-based, in Δ-coordinate order.
pub fn delta_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Position of `Δij` in Δ-coordinates (0-based indices, either order).
pub fn delta_position(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * n - i * i.saturating_sub(1) / 2 + j - i
}

/// Number of Δ-coordinates for an `n`-dimensional algebra.
pub fn delta_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Symmetric bilinear form `sum c_ij Δij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    dim: usize,
    coeffs: Vec<FieldElement>,
}

impl BilinearForm {
    pub fn zero(field: Field, dim: usize) -> Self {
        BilinearForm { dim, coeffs: vec![field.zero(); delta_count(dim)] }
    }

    pub fn from_coeffs(dim: usize, coeffs: Vec<FieldElement>) -> Result<Self, AlgebraError> {
        if coeffs.len() != delta_count(dim) {
            return Err(AlgebraError::Dimension { expected: delta_count(dim), found: coeffs.len() });
        }
        Ok(BilinearForm { dim, coeffs })
    }

    /// `Δij` for 0-based `i, j`.
    pub fn delta(field: Field, dim: usize, i: usize, j: usize) -> Self {
        let mut f = BilinearForm::zero(field, dim);
        f.coeffs[delta_position(dim, i, j)] = field.one();
        f
    }

    /// `sum c Δij` from `(i, j, c)` terms with 0-based indices.
    pub fn from_terms(
        field: Field,
        dim: usize,
        terms: impl IntoIterator<Item = (usize, usize, FieldElement)>,
    ) -> Result<Self, AlgebraError> {
        let mut f = BilinearForm::zero(field, dim);
        for (i, j, c) in terms {
            for index in [i, j] {
                if index >= dim {
                    return Err(AlgebraError::IndexOutOfRange { index: index + 1, dim });
                }
            }
            let p = delta_position(dim, i, j);
            f.coeffs[p] = &f.coeffs[p] + &c;
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.coeffs.first().map_or(Field::Rational, FieldElement::field)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize, j: usize) -> &FieldElement {
        &self.coeffs[delta_position(self.dim, i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    /// `θ(x, y)`.
    pub fn eval(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let mut acc = self.field().zero();
        for (p, (i, j)) in delta_pairs(self.dim).into_iter().enumerate() {
            let c = &self.coeffs[p];
            if c.is_zero() {
                continue;
            }
            let mut t = &x[i] * &y[j];
            if i != j {
                t = &t + &(&x[j] * &y[i]);
            }
            acc = &acc + &(c * &t);
        }
        acc
    }

    /// Gram matrix `G[i][j] = θ(e_i, e_j)`.
    pub fn gram(&self) -> Matrix {
        let mut g = Matrix::zeros(self.field(), self.dim, self.dim);
        for (p, (i, j)) in delta_pairs(self.dim).into_iter().enumerate() {
            g.set(i, j, self.coeffs[p].clone());
            g.set(j, i, self.coeffs[p].clone());
        }
        g
    }

    /// `{x : θ(x, A) = 0}`.
    pub fn radical(&self) -> SubspaceBasis {
        self.gram().kernel()
    }

    pub fn add(&self, other: &BilinearForm) -> BilinearForm {
        BilinearForm { dim: self.dim, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &FieldElement) -> BilinearForm {
        BilinearForm { dim: self.dim, coeffs: self.coeffs.iter().map(|a| c * a).collect() }
    }

    /// Pull-back `(φθ)(x, y) = θ(φx, φy)`; columns of `phi` are images.
    pub fn pull_back(&self, phi: &Matrix) -> BilinearForm {
        let cols: Vec<Vector> = (0..self.dim).map(|j| phi.column(j)).collect();
        let coeffs = delta_pairs(self.dim).into_iter().map(|(i, j)| self.eval(&cols[i], &cols[j])).collect();
        BilinearForm { dim: self.dim, coeffs }
    }

    /// `(i, j, c)` for nonzero coefficients, 0-based.
    pub fn terms(&self) -> Vec<(usize, usize, FieldElement)> {
        delta_pairs(self.dim)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), c)| (i, j, c.clone()))
            .collect()
    }
}

/// Renders as `D12 + 2*D23`, `0` for the zero form.
impl fmt::Display for BilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (i, j, c)) in terms.into_iter().enumerate() {
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) if c.as_rational().is_some() || c.field().characteristic() != 0 => (true, rest.to_string()),
                _ => (false, s),
            };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let body = if body.contains(['+', '-']) { format!("({body})") } else { body };
            if body == "1" {
                write!(f, "D{}{}", i + 1, j + 1)?;
            } else {
                write!(f, "{body}*D{}{}", i + 1, j + 1)?;
            }
        }
        Ok(())
    }
}

/// A cocycle with values in an `s`-dimensional space: one form per new
/// basis vector `e_{n+1}, ..., e_{n+s}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cocycle {
    pub components: Vec<BilinearForm>,
}

impl Cocycle {
    pub fn new(components: Vec<BilinearForm>) -> Self {
        Cocycle { components }
    }

    pub fn single(form: BilinearForm) -> Self {
        Cocycle { components: vec![form] }
    }

    pub fn ext_dim(&self) -> usize {
        self.components.len()
    }

    pub fn base_dim(&self) -> Option<usize> {
        self.components.first().map(BilinearForm::dim)
    }
}

impl fmt::Display for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join("; "))
    }
}

/// Δ-coordinate row of the linear functional `θ -> θ(u, v)`.
fn form_row(n: usize, u: &[FieldElement], v: &[FieldElement], field: Field) -> Vec<FieldElement> {
    delta_pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let mut t = &u[i] * &v[j];
            if i != j {
                t = &t + &(&u[j] * &v[i]);
            }
            if t.is_zero() {
                field.zero()
            } else {
                t
            }
        })
        .collect()
}

fn combine_rows(plus: &[Vec<FieldElement>], minus: &[Vec<FieldElement>]) -> Vec<FieldElement> {
    let mut out = plus[0].clone();
    for r in &plus[1..] {
        out = out.iter().zip(r).map(|(a, b)| a + b).collect();
    }
    for r in minus {
        out = out.iter().zip(r).map(|(a, b)| a - b).collect();
    }
    out
}

/// Rows of the CCD cocycle condition
/// `θ((xy)a,b) + θ((xb)a,y) + θ(x,(yb)a) = θ((xy)b,a) + θ((xa)b,y) + θ(x,(ya)b)`
/// over basis 4-tuples `(x, y, a, b)` with `a < b`.
pub fn ccd_condition_rows(a: &Algebra) -> Vec<Vec<FieldElement>> {
    let n = a.dim();
    let f = a.field();
    let e: Vec<Vector> = (0..n).map(|i| a.basis_vector(i)).collect();
    let m = |u: &Vector, v: &Vector| a.mul(u, v);
    let row = |u: &Vector, v: &Vector| form_row(n, u, v, f);
    let mut rows = Vec::with_capacity(n.pow(4));
    for x in &e {
        for y in &e {
            let xy = m(x, y);
            // Swapping `a` and `b` negates the condition, so `a < b` suffices.
            for (pi, p) in e.iter().enumerate() {
                for q in &e[pi + 1..] {
                    let plus = [row(&m(&xy, p), q), row(&m(&m(x, q), p), y), row(x, &m(&m(y, q), p))];
                    let minus = [row(&m(&xy, q), p), row(&m(&m(x, p), q), y), row(x, &m(&m(y, p), q))];
                    rows.push(combine_rows(&plus, &minus));
                }
            }
        }
    }
    rows
}

/// Rows of the Jordan condition
/// `θ(xy,zt) + θ(xz,yt) + θ(xt,yz) = θ((xz)y,t) + θ((zt)y,x) + θ((tx)y,z)`.
pub fn jordan_condition_rows(a: &Algebra) -> Vec<Vec<FieldElement>> {
    let n = a.dim();
    let f = a.field();
    let e: Vec<Vector> = (0..n).map(|i| a.basis_vector(i)).collect();
    let m = |u: &Vector, v: &Vector| a.mul(u, v);
    let row = |u: &Vector, v: &Vector| form_row(n, u, v, f);
    let mut rows = Vec::with_capacity(n.pow(4));
    for x in &e {
        for y in &e {
            for z in &e {
                for t in &e {
                    let plus = [row(&m(x, y), &m(z, t)), row(&m(x, z), &m(y, t)), row(&m(x, t), &m(y, z))];
                    let minus = [row(&m(&m(x, z), y), t), row(&m(&m(z, t), y), x), row(&m(&m(t, x), y), z)];
                    rows.push(combine_rows(&plus, &minus));
                }
            }
        }
    }
    rows
}

/// Drops zero and repeated rows; the kernel is unchanged.
fn dedup_rows(rows: Vec<Vec<FieldElement>>) -> Vec<Vec<FieldElement>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in rows {
        if r.iter().all(FieldElement::is_zero) {
            continue;
        }
        let key: Vec<String> = r.iter().map(ToString::to_string).collect();
        if seen.insert(key) {
            out.push(r);
        }
    }
    out
}

fn kernel_of_rows(field: Field, cols: usize, rows: Vec<Vec<FieldElement>>) -> SubspaceBasis {
    let rows = dedup_rows(rows);
    if rows.is_empty() {
        return SubspaceBasis::full(field, cols);
    }
    Matrix::from_rows_with_cols(field, cols, rows).expect("rows of equal length").kernel()
}

/// Z² for the given variety, in Δ-coordinates. `Jordan` is the subspace of
/// `Ccd` cut out by the Jordan condition.
pub fn cocycle_space(a: &Algebra, variety: Variety) -> SubspaceBasis {
    let cols = delta_count(a.dim());
    match variety {
        Variety::SymmetricAll => SubspaceBasis::full(a.field(), cols),
        Variety::Ccd => kernel_of_rows(a.field(), cols, ccd_condition_rows(a)),
        Variety::Jordan => jordan_inside(a, &kernel_of_rows(a.field(), cols, ccd_condition_rows(a))),
    }
}

/// The part of `z2_ccd` satisfying the Jordan condition.
fn jordan_inside(a: &Algebra, z2_ccd: &SubspaceBasis) -> SubspaceBasis {
    let basis = z2_ccd.vectors();
    if basis.is_empty() {
        return z2_ccd.clone();
    }
    // Restrict the Jordan rows to Z²_CCD, solve in its coordinates, map back.
    let rows: Vec<Vec<FieldElement>> = dedup_rows(jordan_condition_rows(a))
        .iter()
        .map(|r| basis.iter().map(|b| crate::linalg::dot(a.field(), r, b)).collect())
        .collect();
    let inner = kernel_of_rows(a.field(), basis.len(), rows);
    let vecs: Vec<Vector> = inner.vectors().iter().map(|c| z2_ccd.combine(c)).collect();
    SubspaceBasis::span(a.field(), z2_ccd.ambient_dim(), &vecs).expect("Δ-coordinate vectors")
}

/// Kernel of the CCD condition computed from the raw `n^4` rows without
/// deduplication; used to check the optimized path.
pub fn cocycle_space_unreduced(a: &Algebra) -> SubspaceBasis {
    let cols = delta_count(a.dim());
    Matrix::from_rows_with_cols(a.field(), cols, ccd_condition_rows(a)).expect("rows of equal length").kernel()
}

/// `δf(x, y) = f(xy)` for the coordinate functionals `f = e_k^*`.
pub fn coboundary_forms(a: &Algebra) -> Vec<BilinearForm> {
    let n = a.dim();
    (0..n)
        .map(|k| {
            let coeffs = delta_pairs(n).into_iter().map(|(i, j)| a.structure_constant(i, j, k)).collect();
            BilinearForm { dim: n, coeffs }
        })
        .collect()
}

pub fn coboundary_space(a: &Algebra) -> SubspaceBasis {
    let vecs: Vec<Vector> = coboundary_forms(a).into_iter().map(|f| f.coeffs).collect();
    SubspaceBasis::span(a.field(), delta_count(a.dim()), &vecs).expect("Δ-coordinate vectors")
}

/// Z², Z²_J and B² together with a canonical complement of B² in Z².
///
/// The complement is obtained by reducing Z² modulo the echelon basis of B²
/// and echelonizing what remains; its pivots are the Δ-coordinates that carry
/// classes. Class coordinates of a cocycle are the entries of its reduced form
/// at those pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyBasis {
    pub algebra_dim: usize,
    pub z2_ccd: SubspaceBasis,
    pub z2_jordan: SubspaceBasis,
    pub b2: SubspaceBasis,
    /// Echelon basis of the chosen complement of B² in Z²_CCD.
    pub complement: SubspaceBasis,
    /// The image of Z²_J in class coordinates; zero when the algebra is not Jordan.
    pub jordan_classes: SubspaceBasis,
}

impl CohomologyBasis {
    pub fn field(&self) -> Field {
        self.b2.field()
    }

    pub fn h2_ccd_dim(&self) -> usize {
        self.complement.dim()
    }

    /// `dim Z²_J - dim B²` for a Jordan algebra (where B² ⊆ Z²_J), and 0
    /// otherwise.
    pub fn h2_jordan_dim(&self) -> usize {
        self.jordan_classes.dim()
    }

    /// Representatives of a basis of H²_CCD.
    pub fn classes(&self) -> Vec<BilinearForm> {
        self.complement.vectors().into_iter().map(|c| BilinearForm { dim: self.algebra_dim, coeffs: c }).collect()
    }

    /// Coordinates of `[θ]` in the basis [`CohomologyBasis::classes`], or
    /// `None` when `θ` is not a CCD cocycle.
    pub fn class_coordinates(&self, theta: &BilinearForm) -> Option<Vec<FieldElement>> {
        if !self.z2_ccd.contains(&theta.coeffs) {
            return None;
        }
        let r = self.b2.reduce(&theta.coeffs);
        self.complement.coordinates(&r)
    }

    /// The cocycle in the complement representing class coordinates `coords`.
    pub fn representative(&self, coords: &[FieldElement]) -> BilinearForm {
        BilinearForm { dim: self.algebra_dim, coeffs: self.complement.combine(coords) }
    }

    pub fn is_coboundary(&self, theta: &BilinearForm) -> bool {
        self.b2.contains(&theta.coeffs)
    }

    /// Whether `[θ]` lies in the Jordan part, i.e. `θ ∈ Z²_J + B²`.
    pub fn is_jordan_class(&self, theta: &BilinearForm) -> bool {
        self.class_coordinates(theta).is_some_and(|c| self.jordan_classes.contains(&c))
    }

    /// Solves `[θ] = sum α_i [ν_i]` for a list of classes `ν_i` (for example
    /// a published basis of H²). Returns `None` if there is no solution or
    /// the solution is not unique.
    pub fn express(&self, basis: &[BilinearForm], theta: &BilinearForm) -> Option<Vec<FieldElement>> {
        let target = self.class_coordinates(theta)?;
        let cols: Vec<Vec<FieldElement>> = basis.iter().map(|b| self.class_coordinates(b)).collect::<Option<_>>()?;
        let h = self.h2_ccd_dim();
        let mut m = Matrix::zeros(self.field(), h, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        if m.rank() != cols.len() {
            return None;
        }
        m.solve(&target)
    }
}

pub fn cohomology_basis(a: &Algebra) -> CohomologyBasis {
    let z2_ccd = cocycle_space(a, Variety::Ccd);
    let z2_jordan = jordan_inside(a, &z2_ccd);
    let b2 = coboundary_space(a);
    let field = a.field();
    let cols = delta_count(a.dim());
    let residues: Vec<Vector> = z2_ccd.vectors().iter().map(|v| b2.reduce(v)).collect();
    let complement = SubspaceBasis::span(field, cols, &residues).expect("Δ-coordinate vectors");
    let h = complement.dim();
    // Extensions of a non-Jordan algebra are never Jordan, so its Jordan part is zero.
    let base_is_jordan = holds(a, Identity::JordanLinearized);
    let jordan_coords: Vec<Vector> = if base_is_jordan {
        z2_jordan
            .vectors()
            .iter()
            .map(|v| complement.coordinates(&b2.reduce(v)).expect("Z²_J lies in Z²_CCD"))
            .collect()
    } else {
        Vec::new()
    };
    let jordan_classes = SubspaceBasis::span(field, h, &jordan_coords).expect("class coordinates");
    CohomologyBasis { algebra_dim: a.dim(), z2_ccd, z2_jordan, b2, complement, jordan_classes }
}

/// `Ann(θ) = ∩ Ann(θ_i)`, the common radical of the components.
pub fn cocycle_annihilator(a: &Algebra, theta: &Cocycle) -> Result<SubspaceBasis, AlgebraError> {
    let mut acc = SubspaceBasis::full(a.field(), a.dim());
    for c in &theta.components {
        if c.dim() != a.dim() {
            return Err(AlgebraError::Dimension { expected: a.dim(), found: c.dim() });
        }
        acc = acc.intersection(&c.radical())?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JordanSplit {
    /// All classes lie in H²_J: the extension is Jordan.
    R,
    /// Some class lies outside H²_J: the extension is not Jordan.
    U,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TsMembership {
    pub in_ts: bool,
    pub independent: bool,
    pub annihilator_meet_dim: usize,
    pub jordan_split: JordanSplit,
}

/// Membership of `⟨[θ_1], ..., [θ_s]⟩` in `T_s(A)`: the classes are
/// independent modulo B² and `∩ Ann(θ_i) ∩ Ann(A) = 0`.
pub fn membership_ts(
    a: &Algebra,
    coh: &CohomologyBasis,
    classes: &[BilinearForm],
) -> Result<TsMembership, AlgebraError> {
    let coords: Option<Vec<Vector>> = classes.iter().map(|c| coh.class_coordinates(c)).collect();
    let independent = match &coords {
        Some(cs) => SubspaceBasis::span(a.field(), coh.h2_ccd_dim(), cs)?.dim() == classes.len(),
        None => false,
    };
    let meet = cocycle_annihilator(a, &Cocycle::new(classes.to_vec()))?.intersection(&a.annihilator())?;
    let jordan = classes.iter().all(|c| coh.is_jordan_class(c));
    Ok(TsMembership {
        in_ts: independent && meet.is_zero(),
        independent,
        annihilator_meet_dim: meet.dim(),
        jordan_split: if jordan { JordanSplit::R } else { JordanSplit::U },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{alg, Q};

    fn d(n: usize, i: usize, j: usize) -> BilinearForm {
        BilinearForm::delta(Q, n, i - 1, j - 1)
    }

    #[test]
    fn delta_positions_follow_pair_order() {
        for n in 1..7 {
            for (p, (i, j)) in delta_pairs(n).into_iter().enumerate() {
                assert_eq!(delta_position(n, i, j), p);
                assert_eq!(delta_position(n, j, i), p);
            }
        }
    }

    #[test]
    fn zero_algebra_cocycles() {
        let z = Algebra::zero(Q, 2);
        assert_eq!(cocycle_space(&z, Variety::Ccd).dim(), 3);
        assert_eq!(coboundary_space(&z).dim(), 0);
    }

    #[test]
    fn small_tables() {
        let c3s01 = alg(3, &[(1, 1, 2, 1)]);
        let coh = cohomology_basis(&c3s01);
        assert_eq!(coh.z2_ccd.dim(), 6);
        assert_eq!(coh.b2.dim(), 1);
        assert_eq!((coh.h2_ccd_dim(), coh.h2_jordan_dim()), (5, 4));
        let c3s02 = alg(3, &[(1, 1, 2, 1), (1, 2, 3, 1)]);
        assert_eq!(coboundary_space(&c3s02).dim(), 2);
        let coh = cohomology_basis(&c3s02);
        assert_eq!((coh.h2_ccd_dim(), coh.h2_jordan_dim()), (2, 1));
        let c301 = alg(3, &[(1, 1, 2, 1), (2, 2, 3, 1)]);
        let coh = cohomology_basis(&c301);
        assert_eq!((coh.h2_ccd_dim(), coh.h2_jordan_dim()), (1, 0));
        assert!(coh.class_coordinates(&d(3, 1, 2)).is_some());
    }

    #[test]
    fn unreduced_system_has_same_kernel() {
        let a = alg(4, &[(1, 1, 2, 1), (1, 2, 3, 1), (2, 2, 4, 1)]);
        assert_eq!(cocycle_space(&a, Variety::Ccd), cocycle_space_unreduced(&a));
    }

    #[test]
    fn annihilators_of_forms() {
        let c3s01 = alg(3, &[(1, 1, 2, 1)]);
        let zero = Cocycle::single(BilinearForm::zero(Q, 3));
        assert_eq!(cocycle_annihilator(&c3s01, &zero).unwrap().dim(), 3);
        let ann = cocycle_annihilator(&c3s01, &Cocycle::single(d(3, 1, 2))).unwrap();
        assert_eq!(ann, SubspaceBasis::span(Q, 3, &[c3s01.basis_vector(2)]).unwrap());
        let pair = Cocycle::new(vec![d(3, 2, 2), d(3, 1, 3)]);
        assert!(cocycle_annihilator(&c3s01, &pair).unwrap().is_zero());
    }

    #[test]
    fn ts_membership() {
        let c301 = alg(3, &[(1, 1, 2, 1), (2, 2, 3, 1)]);
        let coh = cohomology_basis(&c301);
        let m = membership_ts(&c301, &coh, &[d(3, 1, 2)]).unwrap();
        assert!(!m.in_ts);
        assert_eq!(m.annihilator_meet_dim, 1);

        let c3s01 = alg(3, &[(1, 1, 2, 1)]);
        let coh = cohomology_basis(&c3s01);
        let m = membership_ts(&c3s01, &coh, &[d(3, 2, 3), d(3, 2, 2)]).unwrap();
        assert!(m.in_ts);
        assert_eq!(m.jordan_split, JordanSplit::U);
        let m = membership_ts(&c3s01, &coh, &[d(3, 1, 1)]).unwrap();
        assert!(!m.in_ts && !m.independent);
    }

    #[test]
    fn express_in_published_basis() {
        let c3s01 = alg(3, &[(1, 1, 2, 1)]);
        let coh = cohomology_basis(&c3s01);
        let basis = vec![d(3, 1, 2), d(3, 1, 3), d(3, 2, 3), d(3, 3, 3), d(3, 2, 2)];
        let theta = d(3, 1, 3).add(&d(3, 1, 1)).add(&d(3, 2, 2).scale(&Q.from_i64(3)));
        let got = coh.express(&basis, &theta).unwrap();
        let expected: Vec<FieldElement> = [0, 1, 0, 0, 3].iter().map(|&c| Q.from_i64(c)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn form_display() {
        let f = d(3, 1, 2).add(&d(3, 2, 3).scale(&Q.from_i64(-2)));
        assert_eq!(f.to_string(), "D12 - 2*D23");
        assert_eq!(BilinearForm::zero(Q, 2).to_string(), "0");
    }
}
