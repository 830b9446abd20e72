//! Polynomial identities checked on structure constants.
//!
//! Multilinear identities are checked exactly on all basis tuples, in
//! lexicographic order; the first failing tuple is returned as a witness.

use serde::Serialize;

use crate::algebra::{add, is_zero_vector, scale, sub, Algebra, Vector};
use crate::field::{Field, FieldElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    Commutative,
    /// `((xy)a)b + ((xb)a)y + x((yb)a) = ((xy)b)a + ((xa)b)y + x((ya)b)`.
    Ccd,
    /// `2((yx)x)x + y x^3 = 3(y x^2)x`.
    AlmostJordan,
    /// `(xy)(zt) + (xz)(yt) + (xt)(yz) = ((xz)y)t + ((zt)y)x + ((tx)y)z`.
    JordanLinearized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// 1-based basis indices of a failing tuple.
    BasisTuple(Vec<usize>),
    /// Failing point of the sample grid: the vector `x` and the basis index of `y`.
    GridPoint { x: Vec<String>, y: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Set over fields of positive characteristic, where linearization is not
    /// an equivalence in general.
    pub heuristic: bool,
}

pub fn check_identity(a: &Algebra, which: Identity) -> IdentityCheck {
    let witness = match which {
        Identity::Commutative => commutative_witness(a),
        Identity::Ccd => first_failure(a, |x, y, p, q| ccd_defect(a, x, y, p, q)),
        Identity::JordanLinearized => first_failure(a, |x, y, z, t| jordan_defect(a, x, y, z, t)),
        Identity::AlmostJordan => {
            symmetric_failure(a).or_else(|| {
                // Full linearization loses nothing once 6 is invertible.
                if matches!(a.field().characteristic(), 2 | 3) {
                    almost_jordan_grid_failure(a)
                } else {
                    None
                }
            })
        }
    };
    IdentityCheck { identity: which, holds: witness.is_none(), witness, heuristic: a.field().characteristic() != 0 }
}

pub fn holds(a: &Algebra, which: Identity) -> bool {
    check_identity(a, which).holds
}

fn commutative_witness(a: &Algebra) -> Option<Witness> {
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (a.basis_vector(i), a.basis_vector(j));
            if a.mul(&x, &y) != a.mul(&y, &x) {
                return Some(Witness::BasisTuple(vec![i + 1, j + 1]));
            }
        }
    }
    None
}

fn first_failure(a: &Algebra, defect: impl Fn(&Vector, &Vector, &Vector, &Vector) -> Vector) -> Option<Witness> {
    let n = a.dim();
    let basis: Vec<Vector> = (0..n).map(|i| a.basis_vector(i)).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let d = defect(&basis[i], &basis[j], &basis[k], &basis[l]);
                    if !is_zero_vector(&d) {
                        return Some(Witness::BasisTuple(vec![i + 1, j + 1, k + 1, l + 1]));
                    }
                }
            }
        }
    }
    None
}

/// First failure of the linearized almost-Jordan identity; it is symmetric in
/// the three `x` slots, so only sorted triples are visited.
fn symmetric_failure(a: &Algebra) -> Option<Witness> {
    let n = a.dim();
    let basis: Vec<Vector> = (0..n).map(|i| a.basis_vector(i)).collect();
    for (y, by) in basis.iter().enumerate() {
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let d = almost_jordan_linearized(a, by, &basis[i], &basis[j], &basis[k]);
                    if !is_zero_vector(&d) {
                        return Some(Witness::BasisTuple(vec![y + 1, i + 1, j + 1, k + 1]));
                    }
                }
            }
        }
    }
    None
}

/// Left side minus right side of the CCD identity in variables `(x, y, a, b)`.
pub fn ccd_defect(alg: &Algebra, x: &Vector, y: &Vector, a: &Vector, b: &Vector) -> Vector {
    let m = |u: &Vector, v: &Vector| alg.mul(u, v);
    let xy = m(x, y);
    let lhs = add(&add(&m(&m(&xy, a), b), &m(&m(&m(x, b), a), y)), &m(x, &m(&m(y, b), a)));
    let rhs = add(&add(&m(&m(&xy, b), a), &m(&m(&m(x, a), b), y)), &m(x, &m(&m(y, a), b)));
    sub(&lhs, &rhs)
}

/// The linearized Jordan identity with `theta` the product itself.
pub fn jordan_defect(alg: &Algebra, x: &Vector, y: &Vector, z: &Vector, t: &Vector) -> Vector {
    let m = |u: &Vector, v: &Vector| alg.mul(u, v);
    let lhs = add(&add(&m(&m(x, y), &m(z, t)), &m(&m(x, z), &m(y, t))), &m(&m(x, t), &m(y, z)));
    let rhs = add(&add(&m(&m(&m(x, z), y), t), &m(&m(&m(z, t), y), x)), &m(&m(&m(t, x), y), z));
    sub(&lhs, &rhs)
}

/// `2((yx)x)x + y((xx)x) - 3(y(xx))x`.
pub fn almost_jordan_defect(alg: &Algebra, y: &Vector, x: &Vector) -> Vector {
    let m = |u: &Vector, v: &Vector| alg.mul(u, v);
    let field = alg.field();
    let x2 = m(x, x);
    let x3 = m(&x2, x);
    let first = scale(&field.from_i64(2), &m(&m(&m(y, x), x), x));
    let third = scale(&field.from_i64(3), &m(&m(y, &x2), x));
    sub(&add(&first, &m(y, &x3)), &third)
}

/// Full linearization in `x`: the sum over the six orderings of `(x1, x2, x3)`.
pub fn almost_jordan_linearized(alg: &Algebra, y: &Vector, x1: &Vector, x2: &Vector, x3: &Vector) -> Vector {
    let m = |u: &Vector, v: &Vector| alg.mul(u, v);
    let field = alg.field();
    let two = field.from_i64(2);
    let three = field.from_i64(3);
    let xs = [x1, x2, x3];
    let mut acc = alg.zero_vector();
    for (p, q, r) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
        let (a, b, c) = (xs[p], xs[q], xs[r]);
        let t1 = scale(&two, &m(&m(&m(y, a), b), c));
        let t2 = m(y, &m(&m(a, b), c));
        let t3 = scale(&three, &m(&m(y, &m(a, b)), c));
        acc = add(&acc, &sub(&add(&t1, &t2), &t3));
    }
    acc
}

/// The almost-Jordan identity on the grid of `x` with coordinates in
/// `{0, 1, -1, 2}`. The identity is linear in `y`, so `y` ranges over the basis.
pub fn almost_jordan_grid_failure(a: &Algebra) -> Option<Witness> {
    let n = a.dim();
    let field = a.field();
    let values: Vec<FieldElement> = [0, 1, -1, 2].iter().map(|&c| field.from_i64(c)).collect();
    let basis: Vec<Vector> = (0..n).map(|i| a.basis_vector(i)).collect();
    let total = 4usize.pow(n as u32);
    for code in 0..total {
        let mut rest = code;
        let x: Vector = (0..n)
            .map(|_| {
                let v = values[rest % 4].clone();
                rest /= 4;
                v
            })
            .collect();
        for (j, y) in basis.iter().enumerate() {
            if !is_zero_vector(&almost_jordan_defect(a, y, &x)) {
                return Some(Witness::GridPoint { x: x.iter().map(ToString::to_string).collect(), y: j + 1 });
            }
        }
    }
    None
}

/// True when identity checks over `field` are exact.
pub fn is_exact_field(field: Field) -> bool {
    field.characteristic() == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::alg;

    #[test]
    fn zero_algebra_satisfies_everything() {
        let z = Algebra::zero(Field::Rational, 3);
        for id in [Identity::Commutative, Identity::Ccd, Identity::AlmostJordan, Identity::JordanLinearized] {
            assert!(holds(&z, id), "{id:?}");
        }
    }

    #[test]
    fn c541_is_ccd() {
        let c541 = alg(5, &[(1, 1, 2, 1), (2, 2, 5, 1), (3, 4, 5, 1)]);
        assert!(holds(&c541, Identity::Ccd));
    }

    #[test]
    fn c525_ccd_but_not_jordan() {
        let c525 = alg(5, &[(1, 1, 2, 1), (1, 2, 3, 1), (1, 3, 4, 1), (2, 2, 5, 1)]);
        assert!(holds(&c525, Identity::Ccd));
        let check = check_identity(&c525, Identity::JordanLinearized);
        assert!(!check.holds);
        let Some(Witness::BasisTuple(t)) = check.witness else { panic!("expected basis witness") };
        let b = |i: usize| c525.basis_vector(i - 1);
        assert!(!is_zero_vector(&jordan_defect(&c525, &b(t[0]), &b(t[1]), &b(t[2]), &b(t[3]))));
    }

    #[test]
    fn jordan_implies_almost_jordan_and_ccd() {
        let samples = [
            alg(3, &[(1, 1, 2, 1), (1, 2, 3, 1)]),
            alg(4, &[(1, 1, 2, 1), (1, 2, 3, 1), (1, 3, 4, 1)]),
            alg(4, &[(1, 2, 3, 1), (3, 3, 4, 1)]),
            alg(2, &[(1, 1, 1, 1), (1, 2, 2, 1)]),
        ];
        for a in &samples {
            if holds(a, Identity::JordanLinearized) {
                assert!(holds(a, Identity::AlmostJordan), "{a}");
                assert!(holds(a, Identity::Ccd), "{a}");
            }
        }
    }

    #[test]
    fn grid_and_linearization_agree_on_unital_line() {
        // A one-dimensional unital algebra is Jordan; so is its square-zero double.
        let a = alg(1, &[(1, 1, 1, 1)]);
        assert!(holds(&a, Identity::AlmostJordan));
        assert!(holds(&a, Identity::JordanLinearized));
        assert!(almost_jordan_grid_failure(&a).is_none());
    }

    #[test]
    fn grid_catches_non_almost_jordan() {
        // e1e1 = e2, e2e1 = e3 style chain with e1e3 = e4 and e2e2 = e4 is CCD but not
        // almost-Jordan; the grid and the linearization must both notice.
        let a = alg(4, &[(1, 1, 2, 1), (1, 2, 3, 1), (1, 3, 4, 1)]);
        let linearized = first_failure(&a, |y, x1, x2, x3| almost_jordan_linearized(&a, y, x1, x2, x3));
        assert_eq!(linearized.is_some(), almost_jordan_grid_failure(&a).is_some());
        assert_eq!(linearized.is_some(), symmetric_failure(&a).is_some());
    }
}
