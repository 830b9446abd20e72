//! Central extensions `A_θ = A ⊕ V` with product `xy + θ(x, y)`, the
//! annihilator decomposition, and splitting an algebra back into a quotient
//! and a cocycle.

use serde::Serialize;

use crate::algebra::{Algebra, Vector};
use crate::cohomology::{cocycle_annihilator, BilinearForm, Cocycle};
use crate::error::AlgebraError;
use crate::linalg::{Matrix, SubspaceBasis};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    pub base: Algebra,
    pub cocycle: Cocycle,
}

/// The extension of `base` by `cocycle`; component `k` of the cocycle gives
/// the coefficient of the new basis vector `e_{n+k+1}`.
pub fn central_extension(base: &Algebra, cocycle: &Cocycle) -> Result<Algebra, AlgebraError> {
    let n = base.dim();
    let s = cocycle.ext_dim();
    let field = base.field();
    let mut entries = Vec::new();
    for (&(i, j), v) in base.table() {
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                entries.push((i, j, k, c.clone()));
            }
        }
    }
    for (k, form) in cocycle.components.iter().enumerate() {
        if form.dim() != n {
            return Err(AlgebraError::Dimension { expected: n, found: form.dim() });
        }
        if form.field() != field {
            return Err(crate::error::FieldError::Mismatch(field, form.field()).into());
        }
        for (i, j, c) in form.terms() {
            entries.push((i, j, n + k, c));
        }
    }
    Algebra::new(format!("{}_ext", base.name()), field, n + s, entries)
}

impl ExtensionSpec {
    pub fn build(&self) -> Result<Algebra, AlgebraError> {
        central_extension(&self.base, &self.cocycle)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnDecomposition {
    pub holds: bool,
    /// `Ann(A_θ)`.
    pub extension_annihilator: SubspaceBasis,
    /// `(Ann(θ) ∩ Ann(A)) ⊕ V`, embedded in `A_θ`.
    pub predicted: SubspaceBasis,
}

/// Compares `Ann(A_θ)` with `(Ann(θ) ∩ Ann(A)) ⊕ V`.
pub fn verify_ann_decomposition(spec: &ExtensionSpec) -> Result<AnnDecomposition, AlgebraError> {
    let ext = spec.build()?;
    let n = spec.base.dim();
    let total = ext.dim();
    let field = ext.field();
    let meet = cocycle_annihilator(&spec.base, &spec.cocycle)?.intersection(&spec.base.annihilator())?;
    let mut vectors: Vec<Vector> = meet
        .vectors()
        .into_iter()
        .map(|mut v| {
            v.resize(total, field.zero());
            v
        })
        .collect();
    vectors.extend((n..total).map(|k| ext.basis_vector(k)));
    let predicted = SubspaceBasis::span(field, total, &vectors)?;
    let extension_annihilator = ext.annihilator();
    Ok(AnnDecomposition { holds: predicted == extension_annihilator, extension_annihilator, predicted })
}

/// An algebra written as a central extension of its quotient by the annihilator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilatorSplit {
    #[serde(skip)]
    pub quotient: Algebra,
    #[serde(skip)]
    pub theta: Cocycle,
    /// Columns are the new basis in old coordinates: first the complement
    /// coordinate vectors, then the echelon basis of `Ann(A)`.
    #[serde(skip)]
    pub basis: Matrix,
    /// Old indices (0-based) of the complement coordinates, in order.
    pub complement: Vec<usize>,
    /// Pivot columns (0-based) of the echelon basis of `Ann(A)`.
    pub annihilator_pivots: Vec<usize>,
    /// Whether `basis` is a permutation matrix.
    pub is_permutation: bool,
}

impl AnnihilatorSplit {
    /// The input algebra written in the new basis; equal entry-wise to
    /// `central_extension(quotient, theta)`.
    pub fn rebased(&self, a: &Algebra) -> Result<Algebra, AlgebraError> {
        a.change_of_basis(&self.basis)
    }

    /// For a permutation basis: `order[new] = old` (0-based).
    pub fn permutation(&self) -> Option<Vec<usize>> {
        if !self.is_permutation {
            return None;
        }
        let n = self.basis.rows();
        Some((0..n).map(|c| (0..n).find(|&r| !self.basis.get(r, c).is_zero()).expect("unit column")).collect())
    }
}

/// Writes `A` as a central extension of `A / Ann(A)`. The complement of the
/// annihilator is spanned by the coordinate vectors outside the echelon pivots of `Ann(A)`, in input order;
/// the quotient product and `θ` are read off in the basis
/// (complement, annihilator basis).
pub fn split_annihilator(a: &Algebra) -> Result<AnnihilatorSplit, AlgebraError> {
    let n = a.dim();
    let field = a.field();
    let ann = a.annihilator();
    let m = ann.dim();
    if m == 0 {
        return Err(AlgebraError::NoAnnihilator);
    }
    let pivots = ann.pivots().to_vec();
    let complement: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    let mut columns: Vec<Vector> = complement.iter().map(|&i| a.basis_vector(i)).collect();
    columns.extend(ann.vectors());
    let mut basis = Matrix::zeros(field, n, n);
    for (c, col) in columns.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            basis.set(r, c, x.clone());
        }
    }
    let rebased = a.change_of_basis(&basis)?;
    let q = n - m;
    let mut entries = Vec::new();
    let mut components: Vec<Vec<(usize, usize, crate::field::FieldElement)>> = vec![Vec::new(); m];
    for (&(i, j), v) in rebased.table() {
        if i >= q || j >= q {
            // Annihilator vectors multiply to zero.
            continue;
        }
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < q {
                entries.push((i, j, k, c.clone()));
            } else {
                components[k - q].push((i, j, c.clone()));
            }
        }
    }
    let quotient = Algebra::new(format!("{}/Ann", a.name()), field, q, entries)?;
    let theta = Cocycle::new(
        components.into_iter().map(|terms| BilinearForm::from_terms(field, q, terms)).collect::<Result<_, _>>()?,
    );
    let is_permutation = columns
        .iter()
        .all(|c| c.iter().filter(|x| !x.is_zero()).count() == 1 && c.iter().all(|x| x.is_zero() || x.is_one()));
    Ok(AnnihilatorSplit { quotient, theta, basis, complement, annihilator_pivots: pivots, is_permutation })
}
