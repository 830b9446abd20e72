//! Automorphisms, their action on cocycles, checks of stated action
//! formulas, and orbits of the automorphism group on Grassmannians of H²
//! over small prime fields.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::cohomology::{cohomology_basis, membership_ts, BilinearForm, Cocycle, CohomologyBasis, JordanSplit};
use crate::error::AlgebraError;
use crate::extensions::central_extension;
use crate::field::{Field, FieldElement};
use crate::iso::{iso_search, search_isomorphisms, SearchMode, SearchOptions};
use crate::linalg::Matrix;
use crate::poly::ParamPoly;

pub fn is_automorphism(a: &Algebra, phi: &Matrix) -> bool {
    a.is_isomorphism(a, phi)
}

/// `θ ↦ θ(φ(·), φ(·))` on every component.
pub fn act_on_cocycle(a: &Algebra, phi: &Matrix, theta: &Cocycle) -> Result<Cocycle, AlgebraError> {
    if !is_automorphism(a, phi) {
        return Err(AlgebraError::NotAutomorphism);
    }
    Ok(Cocycle::new(theta.components.iter().map(|c| c.pull_back(phi)).collect()))
}

/// Matrix of the action on H² in class coordinates: column `j` holds the
/// coordinates of the pulled-back `j`-th basis class.
pub fn action_matrix(coh: &CohomologyBasis, phi: &Matrix) -> Result<Matrix, AlgebraError> {
    let classes = coh.classes();
    let h = classes.len();
    let mut m = Matrix::zeros(coh.field(), h, h);
    for (j, class) in classes.iter().enumerate() {
        let coords = coh.class_coordinates(&class.pull_back(phi)).ok_or(AlgebraError::NotAutomorphism)?;
        for (i, c) in coords.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    Ok(m)
}

/// All automorphisms of an algebra over GF(p), within the size guards
/// `n <= 4` for p in {2, 3} and `n <= 3` for p in {5, 7}.
pub fn enumerate_automorphisms(a: &Algebra) -> Result<Vec<Matrix>, AlgebraError> {
    let Field::Prime(p) = a.field() else {
        return Err(AlgebraError::UnsupportedField("a prime field".into()));
    };
    let n = a.dim();
    let allowed = match p {
        2 | 3 => n <= 4,
        5 | 7 => n <= 3,
        _ => false,
    };
    if !allowed {
        return Err(AlgebraError::SizeGuard(format!("automorphisms in dimension {n} over GF({p})")));
    }
    let options = SearchOptions { mode: SearchMode::Guided, limit: None };
    Ok(search_isomorphisms(a, a, &options)?.0)
}

/// An `s`-dimensional subspace of GF(p)^h as its reduced echelon rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GrassmannPoint {
    pub rows: Vec<Vec<u32>>,
}

impl GrassmannPoint {
    /// Canonical form of the span of `vectors`, or `None` if they are dependent.
    pub fn from_vectors(vectors: &[Vec<u32>], p: u32) -> Option<Self> {
        let mut rows = vectors.to_vec();
        let h = rows.first().map_or(0, Vec::len);
        let pivots = rref_mod(&mut rows, h, p);
        (pivots.len() == vectors.len()).then_some(GrassmannPoint { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn elements(&self, field: Field) -> Vec<Vec<FieldElement>> {
        self.rows.iter().map(|r| r.iter().map(|&x| field.from_i64(i64::from(x))).collect()).collect()
    }

    /// Image under the class action matrix `m` (entries mod p).
    pub fn act(&self, m: &[Vec<u32>], p: u32) -> GrassmannPoint {
        let images: Vec<Vec<u32>> = self.rows.iter().map(|r| apply_mod(m, r, p)).collect();
        GrassmannPoint::from_vectors(&images, p).expect("automorphisms act invertibly")
    }
}

fn apply_mod(m: &[Vec<u32>], v: &[u32], p: u32) -> Vec<u32> {
    let q = u64::from(p);
    m.iter()
        .map(|row| (row.iter().zip(v).map(|(&a, &b)| u64::from(a) * u64::from(b) % q).sum::<u64>() % q) as u32)
        .collect()
}

fn rref_mod(rows: &mut Vec<Vec<u32>>, cols: usize, p: u32) -> Vec<usize> {
    let q = u64::from(p);
    let inv = |a: u32| -> u64 {
        let (mut base, mut e, mut acc) = (u64::from(a), p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        acc
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        let s = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = (u64::from(*x) * s % q) as u32;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = u64::from(row[c]);
                for (t, &pv) in row.iter_mut().zip(&pivot) {
                    *t = ((u64::from(*t) + q * q - f * u64::from(pv)) % q) as u32;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Every `s`-dimensional subspace of GF(p)^h, in increasing canonical order.
pub fn grassmannian(h: usize, s: usize, p: u32) -> Vec<GrassmannPoint> {
    let mut out = Vec::new();
    for pivots in combinations(h, s) {
        // Free slots: row r, column c > pivots[r], c not a pivot.
        let free: Vec<(usize, usize)> =
            (0..s).flat_map(|r| ((pivots[r] + 1)..h).filter(|c| !pivots.contains(c)).map(move |c| (r, c))).collect();
        let total = u64::from(p).pow(free.len() as u32);
        for code in 0..total {
            let mut rows = vec![vec![0u32; h]; s];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = 1;
            }
            let mut rest = code;
            for &(r, c) in &free {
                rows[r][c] = (rest % u64::from(p)) as u32;
                rest /= u64::from(p);
            }
            out.push(GrassmannPoint { rows });
        }
    }
    out.sort();
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
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

fn to_u32_matrix(m: &Matrix) -> Vec<Vec<u32>> {
    m.to_rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| match x {
                    FieldElement::Prime { value, .. } => *value,
                    _ => unreachable!("prime-field matrix"),
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Least point of the orbit in canonical order.
    pub representative: GrassmannPoint,
    pub size: usize,
    pub stabilizer: usize,
    pub jordan_split: JordanSplit,
    pub members: Vec<GrassmannPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub algebra: String,
    pub field: String,
    pub ext_dim: usize,
    pub h2_dim: usize,
    pub automorphism_count: usize,
    pub grassmannian_size: usize,
    pub ts_size: usize,
    pub orbits: Vec<Orbit>,
    /// `|orbit| * |stabilizer| = |Aut|` for every orbit.
    pub orbit_stabilizer_ok: bool,
    /// Every orbit is entirely in R_s or entirely in U_s.
    pub split_is_union_of_orbits: bool,
}

/// Classes of a point as cocycle representatives.
pub fn point_classes(coh: &CohomologyBasis, point: &GrassmannPoint) -> Vec<BilinearForm> {
    point.elements(coh.field()).iter().map(|c| coh.representative(c)).collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as root so roots are canonical.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Orbits of Aut(A) on T_s(A) over GF(p), with R/U tags.
pub fn orbit_partition(a: &Algebra, s: usize) -> Result<OrbitReport, AlgebraError> {
    let Field::Prime(p) = a.field() else {
        return Err(AlgebraError::UnsupportedField("a prime field".into()));
    };
    let coh = cohomology_basis(a);
    let h = coh.h2_ccd_dim();
    let automorphisms = enumerate_automorphisms(a)?;
    let actions: Vec<Vec<Vec<u32>>> = automorphisms
        .iter()
        .map(|phi| action_matrix(&coh, phi).map(|m| to_u32_matrix(&m)))
        .collect::<Result<_, _>>()?;
    let all = grassmannian(h, s, p);
    let grassmannian_size = all.len();
    let mut points = Vec::new();
    let mut tags = Vec::new();
    for point in all {
        let m = membership_ts(a, &coh, &point_classes(&coh, &point))?;
        if m.in_ts {
            points.push(point);
            tags.push(m.jordan_split);
        }
    }
    let index: HashMap<GrassmannPoint, usize> = points.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mut uf = UnionFind((0..points.len()).collect());
    for (i, point) in points.iter().enumerate() {
        for m in &actions {
            let image = point.act(m, p);
            let j = *index.get(&image).expect("T_s is stable under automorphisms");
            uf.union(i, j);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..points.len() {
        let root = uf.find(i);
        groups.entry(root).or_default().push(i);
    }
    let mut orbits = Vec::new();
    let mut orbit_stabilizer_ok = true;
    let mut split_is_union_of_orbits = true;
    for members in groups.values() {
        let representative = points[members[0]].clone();
        let stabilizer = actions.iter().filter(|m| representative.act(m, p) == representative).count();
        orbit_stabilizer_ok &= members.len() * stabilizer == automorphisms.len();
        let tag = tags[members[0]];
        split_is_union_of_orbits &= members.iter().all(|&i| tags[i] == tag);
        orbits.push(Orbit {
            representative,
            size: members.len(),
            stabilizer,
            jordan_split: tag,
            members: members.iter().map(|&i| points[i].clone()).collect(),
        });
    }
    Ok(OrbitReport {
        algebra: a.name().to_string(),
        field: a.field().to_string(),
        ext_dim: s,
        h2_dim: h,
        automorphism_count: automorphisms.len(),
        grassmannian_size,
        ts_size: points.len(),
        orbits,
        orbit_stabilizer_ok,
        split_is_union_of_orbits,
    })
}

/// For each orbit, whether the extensions built from its representative and
/// from up to `per_orbit` further members are isomorphic (by GF(p) search).
pub fn orbit_extension_soundness(
    a: &Algebra,
    report: &OrbitReport,
    per_orbit: usize,
) -> Result<Vec<bool>, AlgebraError> {
    let coh = cohomology_basis(a);
    let build = |point: &GrassmannPoint| central_extension(a, &Cocycle::new(point_classes(&coh, point)));
    report
        .orbits
        .iter()
        .map(|orbit| {
            let base = build(&orbit.representative)?;
            for member in orbit.members.iter().skip(1).take(per_orbit) {
                let other = build(member)?;
                let r = iso_search(&base, &other, SearchMode::Guided)?;
                if !(r.found && r.rechecked) {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect()
}

/// How sample automorphisms are drawn when checking action formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// Every matrix variable uniform in `{-3, ..., 3}`.
    Grid,
    /// Products of similitudes of `x1^2 + 2 x2 x3` on the first three
    /// coordinates, with the fourth column fixed by the multiplier.
    QuadraticSimilitude,
}

/// A stated action of automorphisms on cocycle coordinates.
#[derive(Clone, Debug)]
pub struct ActionFormulas {
    pub algebra: Algebra,
    /// Basis classes `∇_i` the coordinates `a1, a2, ...` refer to.
    pub nablas: Vec<BilinearForm>,
    /// Automorphism matrix; columns are images of basis vectors.
    pub matrix: Vec<Vec<ParamPoly>>,
    /// Stated new coordinates, in terms of the old ones and the matrix variables.
    pub stated: Vec<ParamPoly>,
    /// Coordinates held fixed, e.g. `a9 = 1`.
    pub fixed: BTreeMap<String, FieldElement>,
    pub sampler: Sampler,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaMismatch {
    pub index: usize,
    pub point: BTreeMap<String, String>,
    pub stated: String,
    pub computed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionFormulaReport {
    pub pass: bool,
    pub points_checked: usize,
    pub resampled: usize,
    /// Sample matrices that failed the automorphism check.
    pub non_automorphisms: usize,
    pub first_mismatch: Option<FormulaMismatch>,
}

pub fn coordinate_name(i: usize) -> String {
    format!("a{}", i + 1)
}

impl ActionFormulas {
    /// One draw of the matrix variables from the sampler.
    pub fn sample_matrix_values(&self, vars: &[String], rng: &mut ChaCha8Rng) -> BTreeMap<String, FieldElement> {
        let field = self.algebra.field();
        match self.sampler {
            Sampler::Grid => vars.iter().map(|v| (v.clone(), field.from_i64(rng.gen_range(-3..=3)))).collect(),
            Sampler::QuadraticSimilitude => similitude_sample(rng),
        }
    }

    /// The matrix at given variable values; it may be singular.
    pub fn matrix_at(&self, values: &BTreeMap<String, FieldElement>) -> Result<Matrix, AlgebraError> {
        let field = self.algebra.field();
        let rows: Vec<Vec<FieldElement>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|e| e.evaluate(field, values)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        Ok(Matrix::from_rows(field, rows)?)
    }

    /// A sampled invertible matrix of the stated shape, or `None` when the
    /// draw is singular.
    pub fn sample_matrix(&self, rng: &mut ChaCha8Rng) -> Result<Option<Matrix>, AlgebraError> {
        let values = self.sample_matrix_values(&matrix_variables(self), rng);
        let phi = self.matrix_at(&values)?;
        Ok(phi.is_invertible().then_some(phi))
    }
}

fn matrix_variables(formulas: &ActionFormulas) -> Vec<String> {
    let mut vars: Vec<String> = formulas.matrix.iter().flatten().flat_map(ParamPoly::variables).collect();
    vars.sort();
    vars.dedup();
    vars
}

/// Values of the matrix variables for one sample of the similitude sampler:
/// `x, y, z` / `a, b, c` / `p, q, r` are the first three columns, `t, d, s`
/// the free fourth-row entries.
fn similitude_sample(rng: &mut ChaCha8Rng) -> BTreeMap<String, FieldElement> {
    let f = Field::Rational;
    let q = |n: i64, d: i64| FieldElement::Rational(num_rational::BigRational::new(n.into(), d.into()));
    let mut g = Matrix::identity(f, 3);
    for _ in 0..4 {
        let w = q(rng.gen_range(-3..=3), 1);
        let half_w2 = &(&w * &w) * &q(1, 2);
        let generator = match rng.gen_range(0..5) {
            0 => {
                let lambda = q(*[-2, -1, 2, 3].choose(rng).expect("nonempty"), 1);
                let mut m = Matrix::zeros(f, 3, 3);
                for i in 0..3 {
                    m.set(i, i, lambda.clone());
                }
                m
            }
            1 => {
                let k = *[-3, -2, -1, 2, 3].choose(rng).expect("nonempty");
                let mut m = Matrix::zeros(f, 3, 3);
                m.set(0, 0, f.one());
                m.set(1, 1, q(k, 1));
                m.set(2, 2, q(1, k));
                m
            }
            2 => Matrix::from_i64(f, &[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]),
            // e1 -> e1 + w e2, e2 -> e2, e3 -> e3 - w e1 - w^2/2 e2.
            3 => Matrix::from_rows(
                f,
                vec![
                    vec![f.one(), f.zero(), -&w],
                    vec![w.clone(), f.one(), -&half_w2],
                    vec![f.zero(), f.zero(), f.one()],
                ],
            )
            .expect("3x3"),
            // Same with the roles of e2 and e3 exchanged.
            _ => Matrix::from_rows(
                f,
                vec![
                    vec![f.one(), -&w, f.zero()],
                    vec![f.zero(), f.one(), f.zero()],
                    vec![w.clone(), -&half_w2, f.one()],
                ],
            )
            .expect("3x3"),
        };
        g = g.mul(&generator).expect("3x3");
    }
    let mut values = BTreeMap::new();
    for (col, names) in [["x", "y", "z"], ["a", "b", "c"], ["p", "q", "r"]].iter().enumerate() {
        for (row, name) in names.iter().enumerate() {
            values.insert((*name).to_string(), g.get(row, col).clone());
        }
    }
    for name in ["t", "d", "s"] {
        values.insert(name.to_string(), q(rng.gen_range(-3..=3), 1));
    }
    values
}

/// Compares the stated action with the pulled-back cocycle, written in the
/// basis `nablas` modulo coboundaries, on `points` seeded samples.
/// Points whose matrix is singular are skipped and replaced.
pub fn verify_action_formulas(
    formulas: &ActionFormulas,
    points: usize,
    seed: u64,
) -> Result<ActionFormulaReport, AlgebraError> {
    let a = &formulas.algebra;
    let field = a.field();
    let coh = cohomology_basis(a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = matrix_variables(formulas);
    let mut checked = 0;
    let mut resampled = 0;
    let mut non_automorphisms = 0;
    let mut first_mismatch = None;
    while checked < points {
        if resampled > 20 * points {
            return Err(AlgebraError::Singular);
        }
        let mut values = formulas.sample_matrix_values(&vars, &mut rng);
        for i in 0..formulas.nablas.len() {
            let name = coordinate_name(i);
            let value = match formulas.fixed.get(&name) {
                Some(v) => v.clone(),
                None => field.from_i64(rng.gen_range(-3..=3)),
            };
            values.insert(name, value);
        }
        let phi = formulas.matrix_at(&values)?;
        if !phi.is_invertible() {
            resampled += 1;
            continue;
        }
        checked += 1;
        if !is_automorphism(a, &phi) {
            non_automorphisms += 1;
            continue;
        }
        let mut theta = BilinearForm::zero(field, a.dim());
        for (i, nabla) in formulas.nablas.iter().enumerate() {
            theta = theta.add(&nabla.scale(&values[&coordinate_name(i)]));
        }
        let computed = coh.express(&formulas.nablas, &theta.pull_back(&phi)).ok_or(AlgebraError::NotAutomorphism)?;
        for (index, (stated, got)) in formulas.stated.iter().zip(&computed).enumerate() {
            let expected = stated.evaluate(field, &values)?;
            if &expected != got && first_mismatch.is_none() {
                first_mismatch = Some(FormulaMismatch {
                    index,
                    point: values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                    stated: expected.to_string(),
                    computed: got.to_string(),
                });
            }
        }
    }
    Ok(ActionFormulaReport {
        pass: first_mismatch.is_none() && non_automorphisms == 0 && formulas.stated.len() == formulas.nablas.len(),
        points_checked: checked,
        resampled,
        non_automorphisms,
        first_mismatch,
    })
}
