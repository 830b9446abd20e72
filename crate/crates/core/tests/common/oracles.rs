//! Independent recomputations used to cross-check library results.
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use ccd_core::algebra::Algebra;
use ccd_core::catalog::{record_base, record_cocycle, Catalog, CatalogEntry};
use ccd_core::cohomology::cohomology_basis;
use ccd_core::field::{Field, FieldElement};
use ccd_core::orbits::orbit_partition;

/// Rebuilds every recorded extension of `entry` at each sample by writing
/// out the extended multiplication table directly, and compares it with
/// the catalog table. Returns the number of (record, sample) pairs checked.
pub fn reconstruct_entry(catalog: &Catalog, entry: &CatalogEntry) -> Result<usize, String> {
    let field = Field::Rational;
    let mut checked = 0;
    for point in entry.sample_points() {
        let alg = entry.instantiate(field, &point).map_err(|e| e.to_string())?;
        for rec in &entry.extensions {
            let base = record_base(catalog, rec, field, &point).map_err(|e| e.to_string())?;
            let theta = record_cocycle(rec, base.dim(), field, &point).map_err(|e| e.to_string())?;
            let n = base.dim();
            let total = alg.dim();
            let unit = |i: usize, d: usize| -> Vec<FieldElement> {
                (0..d).map(|k| if k == i { field.one() } else { field.zero() }).collect()
            };
            for i in 0..total {
                for j in 0..total {
                    for k in 0..total {
                        let expected = if i >= n || j >= n {
                            field.zero()
                        } else if k < n {
                            base.structure_constant(i, j, k)
                        } else {
                            theta.components[k - n].eval(&unit(i, n), &unit(j, n))
                        };
                        if alg.structure_constant(i, j, k) != expected {
                            return Err(format!(
                                "{} from {}: e{}e{} coefficient of e{} differs",
                                entry.name,
                                rec.base,
                                i + 1,
                                j + 1,
                                k + 1
                            ));
                        }
                    }
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

type Form = [[u8; 3]; 3];

fn bit(x: &FieldElement) -> u8 {
    match x {
        FieldElement::Prime { value, modulus: 2 } => *value as u8,
        _ => panic!("expected an element of GF(2)"),
    }
}

fn columns(code: u32) -> [[u8; 3]; 3] {
    // Entry (r, c) is bit 3c + r: column c is the image of e_c.
    let mut m = [[0u8; 3]; 3];
    for c in 0..3 {
        for r in 0..3 {
            m[r][c] = ((code >> (3 * c + r)) & 1) as u8;
        }
    }
    m
}

fn invertible(m: &[[u8; 3]; 3]) -> bool {
    let col = |c: usize| (0..3).fold(0u8, |acc, r| acc | (m[r][c] << r));
    let (a, b, c) = (col(0), col(1), col(2));
    a != 0 && b != 0 && a != b && c != 0 && c != a && c != b && c != a ^ b
}

fn apply(m: &[[u8; 3]; 3], v: &[u8; 3]) -> [u8; 3] {
    let mut out = [0u8; 3];
    for (r, o) in out.iter_mut().enumerate() {
        *o = (0..3).fold(0, |acc, c| acc ^ (m[r][c] & v[c]));
    }
    out
}

fn pull_back(theta: &Form, m: &[[u8; 3]; 3]) -> Form {
    let mut out = [[0u8; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0;
            for k in 0..3 {
                for l in 0..3 {
                    s ^= m[k][i] & theta[k][l] & m[l][j];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

fn add(a: &Form, b: &Form) -> Form {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] ^= b[i][j];
        }
    }
    out
}

fn combine(forms: &[Form], mask: u32) -> Form {
    forms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold([[0; 3]; 3], |acc, (_, f)| add(&acc, f))
}

pub struct OrbitComparison {
    pub automorphisms: usize,
    pub library_automorphisms: usize,
    pub oracle_orbits: Vec<BTreeSet<Vec<u32>>>,
    pub library_orbits: Vec<BTreeSet<Vec<u32>>>,
    pub oracle_orbit_stabilizer: bool,
    pub library_orbit_stabilizer: bool,
}

impl OrbitComparison {
    pub fn agrees(&self) -> bool {
        self.automorphisms == self.library_automorphisms
            && self.oracle_orbits == self.library_orbits
            && self.oracle_orbit_stabilizer
            && self.library_orbit_stabilizer
    }
}

/// Orbits of Aut(A) on the 1-dimensional subspaces of H² for a
/// 3-dimensional algebra over GF(2), by looping over all 3x3 matrices and all
/// points, compared with `orbit_partition(a, 1)`.
pub fn gf2_line_orbits(a: &Algebra) -> OrbitComparison {
    assert_eq!(a.field(), Field::Prime(2));
    assert_eq!(a.dim(), 3);
    let mut mul = [[[0u8; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                mul[i][j][k] = bit(&a.structure_constant(i, j, k));
            }
        }
    }
    let product = |x: &[u8; 3], y: &[u8; 3]| -> [u8; 3] {
        let mut out = [0u8; 3];
        for i in 0..3 {
            for j in 0..3 {
                for (k, o) in out.iter_mut().enumerate() {
                    *o ^= x[i] & y[j] & mul[i][j][k];
                }
            }
        }
        out
    };
    let basis = |i: usize| -> [u8; 3] {
        let mut v = [0u8; 3];
        v[i] = 1;
        v
    };
    let automorphisms: Vec<[[u8; 3]; 3]> = (0..512u32)
        .map(columns)
        .filter(invertible)
        .filter(|m| {
            (0..3).all(|i| {
                (0..3).all(|j| {
                    apply(m, &product(&basis(i), &basis(j))) == product(&apply(m, &basis(i)), &apply(m, &basis(j)))
                })
            })
        })
        .collect();

    // Classes from the library; coboundaries written out here.
    let coh = cohomology_basis(a);
    let classes: Vec<Form> = coh
        .classes()
        .iter()
        .map(|f| {
            let mut m = [[0u8; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] = bit(&f.eval(&a.basis_vector(i), &a.basis_vector(j)));
                }
            }
            m
        })
        .collect();
    let coboundaries: Vec<Form> = (0..3)
        .map(|k| {
            let mut m = [[0u8; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] = mul[i][j][k];
                }
            }
            m
        })
        .collect();
    let h = classes.len();
    let coordinates = |theta: &Form| -> u32 {
        let hits: Vec<u32> = (0..1u32 << h)
            .filter(|&c| (0..1u32 << 3).any(|b| add(&combine(&classes, c), &combine(&coboundaries, b)) == *theta))
            .collect();
        assert_eq!(hits.len(), 1, "classes must be independent modulo coboundaries");
        hits[0]
    };

    // A line lies in T_1 when no nonzero annihilator vector is in the radical.
    let annihilator: Vec<[u8; 3]> = (1..8u8)
        .map(|c| [c & 1, c >> 1 & 1, c >> 2 & 1])
        .filter(|x| (0..3).all(|j| product(x, &basis(j)) == [0; 3]))
        .collect();
    let in_t1 = |c: u32| -> bool {
        let theta = combine(&classes, c);
        !annihilator.iter().any(|x| (0..3).all(|j| (0..3).fold(0, |acc, i| acc ^ (x[i] & theta[i][j])) == 0))
    };

    let to_vec = |c: u32| -> Vec<u32> { (0..h).map(|i| c >> i & 1).collect() };
    let mut seen = BTreeSet::new();
    let mut oracle_orbits = Vec::new();
    let mut oracle_orbit_stabilizer = true;
    for start in 1..1u32 << h {
        if seen.contains(&start) || !in_t1(start) {
            continue;
        }
        let mut orbit = BTreeSet::from([start]);
        let mut frontier = vec![start];
        while let Some(c) = frontier.pop() {
            for m in &automorphisms {
                let image = coordinates(&pull_back(&combine(&classes, c), m));
                if orbit.insert(image) {
                    frontier.push(image);
                }
            }
        }
        let stabilizer =
            automorphisms.iter().filter(|m| coordinates(&pull_back(&combine(&classes, start), m)) == start).count();
        oracle_orbit_stabilizer &= orbit.len() * stabilizer == automorphisms.len();
        seen.extend(orbit.iter().copied());
        oracle_orbits.push(orbit.into_iter().map(to_vec).collect::<BTreeSet<_>>());
    }
    oracle_orbits.sort();

    let report = orbit_partition(a, 1).expect("orbit partition");
    let mut library_orbits: Vec<BTreeSet<Vec<u32>>> =
        report.orbits.iter().map(|o| o.members.iter().map(|p| p.rows[0].clone()).collect()).collect();
    library_orbits.sort();
    OrbitComparison {
        automorphisms: automorphisms.len(),
        library_automorphisms: report.automorphism_count,
        oracle_orbits,
        library_orbits,
        oracle_orbit_stabilizer,
        library_orbit_stabilizer: report.orbit_stabilizer_ok,
    }
}

/// Sizes of the orbits found by the oracle, largest first.
pub fn orbit_sizes(orbits: &[BTreeSet<Vec<u32>>]) -> Vec<usize> {
    let mut sizes: Vec<usize> = orbits.iter().map(BTreeSet::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}
