//! Basis-independent invariants used to separate non-isomorphic algebras.
//!
//! Equal fingerprints prove nothing; different fingerprints prove the
//! algebras are not isomorphic over the field of definition.

use serde::Serialize;

use crate::algebra::{symbolic_determinant, Algebra, Vector};
use crate::cohomology::{coboundary_space, cocycle_space, Variety};
use crate::error::AlgebraError;
use crate::field::{Field, FieldElement};
use crate::identities::{holds, Identity};
use crate::linalg::{Matrix, SubspaceBasis};
use crate::poly::ParamPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub dim: usize,
    /// `dim A^k` for `k = 1, 2, ...` until the chain stabilizes.
    pub filtration_dims: Vec<usize>,
    pub annihilator_dim: usize,
    pub square_dim: usize,
    /// `dim (A^k ∩ Ann A)` along the filtration.
    pub annihilator_in_powers: Vec<usize>,
    /// `dim {x : x A ⊆ Ann A}`.
    pub second_annihilator_dim: usize,
    pub derivation_dim: usize,
    pub z2_ccd_dim: usize,
    pub h2_ccd_dim: usize,
    pub jordan: bool,
    pub almost_jordan: bool,
    /// Rank of `L_x` for a generic `x` of `A^k`, along the filtration.
    pub generic_ranks: Vec<usize>,
}

/// Computes the fingerprint. Generic ranks are certified symbolically, which
/// needs rational structure constants.
pub fn fingerprint(a: &Algebra) -> Result<Fingerprint, AlgebraError> {
    if a.field() != Field::Rational {
        return Err(AlgebraError::UnsupportedField("rational structure constants".into()));
    }
    let chain = a.power_filtration();
    let ann = a.annihilator();
    let annihilator_in_powers =
        chain.iter().map(|p| p.intersection(&ann).map(|s| s.dim())).collect::<Result<Vec<_>, _>>()?;
    let z2 = cocycle_space(a, Variety::Ccd);
    let b2 = coboundary_space(a);
    let generic_ranks = chain.iter().filter(|p| !p.is_zero()).map(|p| generic_rank(a, p)).collect();
    Ok(Fingerprint {
        dim: a.dim(),
        filtration_dims: chain.iter().map(SubspaceBasis::dim).collect(),
        annihilator_dim: ann.dim(),
        square_dim: a.square().dim(),
        annihilator_in_powers,
        second_annihilator_dim: second_annihilator(a, &ann).dim(),
        derivation_dim: derivations(a).dim(),
        z2_ccd_dim: z2.dim(),
        h2_ccd_dim: z2.dim() - b2.dim(),
        jordan: holds(a, Identity::JordanLinearized),
        almost_jordan: holds(a, Identity::AlmostJordan),
        generic_ranks,
    })
}

/// Vectors `h` with `h · s = 0` for every `s` in the subspace, as rows.
fn orthogonal_rows(s: &SubspaceBasis) -> Vec<Vector> {
    s.basis().kernel().vectors()
}

/// `{x : x e_j ∈ Ann A for all j}`.
pub fn second_annihilator(a: &Algebra, ann: &SubspaceBasis) -> SubspaceBasis {
    let n = a.dim();
    let h = orthogonal_rows(ann);
    let mut m = Matrix::zeros(a.field(), n * h.len(), n);
    for i in 0..n {
        let ei = a.basis_vector(i);
        for j in 0..n {
            let p = a.mul(&ei, &a.basis_vector(j));
            for (r, row) in h.iter().enumerate() {
                m.set(j * h.len() + r, i, crate::linalg::dot(a.field(), row, &p));
            }
        }
    }
    m.kernel()
}

/// Derivations as a subspace of `F^{n^2}`; coordinate `k * n + i` is the
/// coefficient of `e_k` in `D(e_i)`.
pub fn derivations(a: &Algebra) -> SubspaceBasis {
    let n = a.dim();
    let f = a.field();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let mut row = vec![f.zero(); n * n];
                // D(e_i e_j)_k = sum_l c_ij^l d_kl
                for l in 0..n {
                    let c = a.structure_constant(i, j, l);
                    row[k * n + l] = &row[k * n + l] + &c;
                }
                // - (D(e_i) e_j)_k - (e_i D(e_j))_k
                for m in 0..n {
                    let c = a.structure_constant(m, j, k);
                    row[m * n + i] = &row[m * n + i] - &c;
                    let c = a.structure_constant(i, m, k);
                    row[m * n + j] = &row[m * n + j] - &c;
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    Matrix::from_rows_with_cols(f, n * n, rows).expect("rows of equal length").kernel()
}

/// Rank of `L_x` over the rational function field in the coordinates of `x`
/// along a basis of `w`: a lower bound from integer specializations, made
/// exact by checking that every larger minor vanishes identically.
pub fn generic_rank(a: &Algebra, w: &SubspaceBasis) -> usize {
    let n = a.dim();
    let basis = w.vectors();
    let ops: Vec<Matrix> = basis.iter().map(|b| a.left_multiplication(b)).collect();
    let field = a.field();
    let mut best = 0;
    for s in 0..6i64 {
        let mut m = Matrix::zeros(field, n, n);
        for (idx, op) in ops.iter().enumerate() {
            let t = field.from_i64((idx as i64 + 2).pow(s as u32 + 1) - s * 3);
            for r in 0..n {
                for c in 0..n {
                    let v = m.get(r, c) + &(&t * op.get(r, c));
                    m.set(r, c, v);
                }
            }
        }
        best = best.max(m.rank());
    }
    let symbolic: Vec<Vec<ParamPoly>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut p = ParamPoly::zero();
                    for (idx, op) in ops.iter().enumerate() {
                        if let FieldElement::Rational(q) = op.get(r, c) {
                            if !num_traits::Zero::is_zero(q) {
                                let term = &ParamPoly::constant(q.clone()) * &ParamPoly::var(&format!("t{idx}"));
                                p = &p + &term;
                            }
                        }
                    }
                    p
                })
                .collect()
        })
        .collect();
    let mut r = best;
    while r < n && has_nonzero_minor(&symbolic, r + 1) {
        r += 1;
    }
    r
}

fn has_nonzero_minor(m: &[Vec<ParamPoly>], size: usize) -> bool {
    let n = m.len();
    let subsets = index_subsets(n, size);
    for rows in &subsets {
        for cols in &subsets {
            let minor: Vec<Vec<ParamPoly>> =
                rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect();
            if !symbolic_determinant(&minor).is_zero() {
                return true;
            }
        }
    }
    false
}

fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{alg, Q};
    use proptest::prelude::*;

    #[test]
    fn c514_and_c541_differ() {
        let c514 = alg(5, &[(1, 1, 2, 1), (2, 2, 5, 1), (3, 3, 4, 1)]);
        let c541 = alg(5, &[(1, 1, 2, 1), (2, 2, 5, 1), (3, 4, 5, 1)]);
        let (f1, f2) = (fingerprint(&c514).unwrap(), fingerprint(&c541).unwrap());
        assert_eq!((f1.square_dim, f2.square_dim), (3, 2));
        assert_ne!(f1, f2);
    }

    #[test]
    fn nilpotency_index_separates_small_algebras() {
        let c4s01 = alg(4, &[(1, 1, 2, 1)]);
        let c401 = alg(4, &[(1, 1, 2, 1), (2, 2, 3, 1)]);
        let (f1, f2) = (fingerprint(&c4s01).unwrap(), fingerprint(&c401).unwrap());
        assert_eq!(f1.filtration_dims.len(), 3);
        assert_eq!(f2.filtration_dims, vec![4, 2, 1, 1, 0]);
        assert_ne!(f1, f2);
    }

    #[test]
    fn derivations_of_zero_algebra_are_all_maps() {
        assert_eq!(derivations(&Algebra::zero(Q, 3)).dim(), 9);
        // e1e1 = e2 in dimension 2: D(e1) = a e1 + b e2, D(e2) = 2a e2.
        assert_eq!(derivations(&alg(2, &[(1, 1, 2, 1)])).dim(), 2);
    }

    #[test]
    fn generic_rank_examples() {
        let a = alg(3, &[(1, 1, 2, 1), (1, 2, 3, 1)]);
        let full = SubspaceBasis::full(Q, 3);
        // L_x for x = (t0, t1, t2): image spanned by t0 e2 + t1 e3 and t0 e3.
        assert_eq!(generic_rank(&a, &full), 2);
        assert_eq!(generic_rank(&a, &a.square()), 1);
        assert_eq!(generic_rank(&Algebra::zero(Q, 3), &full), 0);
    }

    #[test]
    fn rational_field_required() {
        let a = Algebra::zero(Field::Prime(5), 2);
        assert!(fingerprint(&a).is_err());
    }

    fn invertible(n: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-2i64..3, n * n)
            .prop_map(move |xs| {
                let rows: Vec<Vec<FieldElement>> =
                    xs.chunks(n).map(|r| r.iter().map(|&c| Q.from_i64(c)).collect()).collect();
                Matrix::from_rows(Q, rows).unwrap()
            })
            .prop_filter("invertible", Matrix::is_invertible)
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 200, rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed), failure_persistence: None, ..ProptestConfig::default() })]

        #[test]
        fn invariant_under_basis_change(p in invertible(4)) {
            let a = alg(4, &[(1, 1, 2, 1), (1, 2, 3, 1), (1, 3, 4, 2), (2, 2, 4, 3)]);
            let b = a.change_of_basis(&p).unwrap();
            prop_assert_eq!(fingerprint(&a).unwrap(), fingerprint(&b).unwrap());
        }
    }
}
