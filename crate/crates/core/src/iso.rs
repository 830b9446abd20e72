//! Isomorphism search between algebras over small prime fields, plus exact
//! checks of supplied candidate maps.
//!
//! Finite-field results are search evidence: a found map is re-checked
//! exactly in the field of the search, and an exhausted search says nothing
//! about isomorphism over the complex numbers.

use serde::Serialize;

use crate::algebra::{Algebra, ParamAlgebra};
use crate::error::AlgebraError;
use crate::field::{Field, FieldElement};
use crate::linalg::{Matrix, SubspaceBasis};
use crate::poly::ParamPoly;

/// Structure constants over GF(p) as machine integers.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    p: u32,
    n: usize,
    /// `products[i * n + j]` is the coordinate vector of `e_i e_j`.
    products: Vec<Vec<u32>>,
}

impl PrimeTable {
    pub fn new(a: &Algebra) -> Result<Self, AlgebraError> {
        let Field::Prime(p) = a.field() else {
            return Err(AlgebraError::UnsupportedField("a prime field".into()));
        };
        let n = a.dim();
        let mut products = vec![vec![0; n]; n * n];
        for (&(i, j), v) in a.table() {
            let coords: Vec<u32> = v.iter().map(to_u32).collect();
            products[i * n + j] = coords.clone();
            products[j * n + i] = coords;
        }
        Ok(PrimeTable { p, n, products })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let (n, p) = (self.n, u64::from(self.p));
        let mut out = vec![0u64; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = u64::from(xi) * u64::from(yj) % p;
                for (o, &t) in out.iter_mut().zip(&self.products[i * n + j]) {
                    *o += c * u64::from(t);
                }
            }
        }
        out.into_iter().map(|v| (v % p) as u32).collect()
    }

    /// Matrix of `y -> x y` as rows: entry `[k][j]` is the `e_k` coefficient of `x e_j`.
    fn left_rows(&self, x: &[u32]) -> Vec<Vec<u32>> {
        let n = self.n;
        let mut rows = vec![vec![0u32; n]; n];
        for j in 0..n {
            let mut ej = vec![0u32; n];
            ej[j] = 1;
            for (k, c) in self.mul(x, &ej).into_iter().enumerate() {
                rows[k][j] = c;
            }
        }
        rows
    }
}

fn to_u32(c: &FieldElement) -> u32 {
    match c {
        FieldElement::Prime { value, .. } => *value,
        _ => unreachable!("prime-field table"),
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut base, mut exp, mut acc) = (u64::from(a), p - 2, 1u64);
    let m = u64::from(p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u32
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut Vec<Vec<u32>>, cols: usize, p: u32) -> Vec<usize> {
    let m = u64::from(p);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        let inv = u64::from(inv_mod(rows[r][c], p));
        for x in rows[r].iter_mut() {
            *x = (u64::from(*x) * inv % m) as u32;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = u64::from(row[c]);
                for (t, &pv) in row.iter_mut().zip(&pivot_row) {
                    *t = ((u64::from(*t) + m * m - f * u64::from(pv)) % m) as u32;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

fn rank(vectors: &[Vec<u32>], cols: usize, p: u32) -> usize {
    let mut rows = vectors.to_vec();
    rref(&mut rows, cols, p).len()
}

/// Solutions of `M v = b` (rows of `M` with `b` appended) as a particular
/// solution plus a kernel basis.
fn solve_affine(mut rows: Vec<Vec<u32>>, n: usize, p: u32) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
    let pivots = rref(&mut rows, n + 1, p);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut particular = vec![0u32; n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rows[r][n];
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u32; n];
            v[f] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = (p - rows[r][f]) % p;
            }
            v
        })
        .collect();
    Some((particular, kernel))
}

/// Rows `h` with `h . v = 0` exactly for `v` in the subspace.
fn check_rows(s: &SubspaceBasis) -> Vec<Vec<u32>> {
    s.basis().kernel().vectors().iter().map(|v| v.iter().map(to_u32).collect()).collect()
}

fn dot_mod(a: &[u32], b: &[u32], p: u32) -> u32 {
    let m = u64::from(p);
    (a.iter().zip(b).map(|(&x, &y)| u64::from(x) * u64::from(y) % m).sum::<u64>() % m) as u32
}

fn satisfies(rows: &[Vec<u32>], v: &[u32], p: u32) -> bool {
    rows.iter().all(|h| dot_mod(h, v, p) == 0)
}

/// Subspaces preserved by every isomorphism, computed on both sides:
/// the powers `A^k`, the annihilator and their intersections.
fn characteristic_subspaces(a: &Algebra) -> Result<Vec<SubspaceBasis>, AlgebraError> {
    let ann = a.annihilator();
    let mut out = Vec::new();
    for power in a.power_filtration() {
        out.push(power.intersection(&ann)?);
        out.push(power);
    }
    out.push(ann);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Column-by-column loop over all invertible matrices.
    Exhaustive,
    /// Images of the basis chosen one at a time: forced images are
    /// propagated from products and each free choice is cut down by the
    /// linear constraints it must satisfy.
    Guided,
    /// As `Guided`, with the annihilator components of generator images
    /// fixed to zero. Complete for algebras whose annihilator lies in the
    /// square; a heuristic otherwise.
    GuidedModAnnihilator,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Stop after this many maps.
    pub limit: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
}

struct Product {
    i: usize,
    j: usize,
    out: Vec<(usize, u32)>,
}

struct Search<'a> {
    b: &'a PrimeTable,
    n: usize,
    p: u32,
    products: Vec<Product>,
    /// Per basis index, check rows that its image must satisfy.
    image_rows: Vec<Vec<Vec<u32>>>,
    /// Check rows of `B^d` for the product `e_i e_j` of depth `d`.
    depth_rows: Vec<Option<Vec<Vec<u32>>>>,
    /// Extra rows for generators in the annihilator-stripped mode.
    generator_rows: Vec<Vec<Vec<u32>>>,
    naive: bool,
    limit: Option<usize>,
    found: Vec<Vec<Vec<u32>>>,
    stats: SearchStats,
}

/// All maps `A -> B` (columns are images of the basis) satisfying the
/// product table, up to `limit`. Both algebras must be over the same GF(p).
pub fn search_isomorphisms(
    a: &Algebra,
    b: &Algebra,
    options: &SearchOptions,
) -> Result<(Vec<Matrix>, SearchStats), AlgebraError> {
    if a.dim() != b.dim() {
        return Err(AlgebraError::Dimension { expected: a.dim(), found: b.dim() });
    }
    if a.field() != b.field() {
        return Err(crate::error::FieldError::Mismatch(a.field(), b.field()).into());
    }
    let (ta, tb) = (PrimeTable::new(a)?, PrimeTable::new(b)?);
    let (n, p) = (ta.n, ta.p);
    guard(options.mode, n, p)?;

    let sa = characteristic_subspaces(a)?;
    let sb = characteristic_subspaces(b)?;
    if sa.iter().map(SubspaceBasis::dim).ne(sb.iter().map(SubspaceBasis::dim)) {
        return Ok((Vec::new(), SearchStats::default()));
    }
    let naive = options.mode == SearchMode::Exhaustive;
    let mut image_rows = vec![Vec::new(); n];
    if !naive {
        for (s_a, s_b) in sa.iter().zip(&sb) {
            let rows = check_rows(s_b);
            for (k, target) in image_rows.iter_mut().enumerate() {
                if s_a.contains(&a.basis_vector(k)) {
                    target.extend(rows.iter().cloned());
                }
            }
        }
    }
    let powers_a = a.power_filtration();
    let powers_b = b.power_filtration();
    let mut products = Vec::new();
    let mut depth_rows = vec![None; n * n];
    for i in 0..n {
        for j in i..n {
            let v = &ta.products[i * n + j];
            let out: Vec<(usize, u32)> = v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c)).collect();
            if !naive {
                let prod = a.mul(&a.basis_vector(i), &a.basis_vector(j));
                let depth = powers_a.iter().rposition(|s| s.contains(&prod)).unwrap_or(0);
                if depth >= 2 && depth < powers_b.len() {
                    let rows = check_rows(&powers_b[depth]);
                    depth_rows[i * n + j] = Some(rows.clone());
                    depth_rows[j * n + i] = Some(rows);
                }
            }
            products.push(Product { i, j, out });
        }
    }
    let mut generator_rows = vec![Vec::new(); n];
    if options.mode == SearchMode::GuidedModAnnihilator {
        let outputs: Vec<bool> =
            (0..n).map(|k| products.iter().any(|pr| pr.out.iter().any(|&(l, _)| l == k))).collect();
        // Complement of Ann(B): coordinates off its echelon pivots.
        let ann_b = b.annihilator();
        let pivots = ann_b.pivots().to_vec();
        for (k, rows) in generator_rows.iter_mut().enumerate() {
            if !outputs[k] {
                for &c in &pivots {
                    let mut h = vec![0u32; n];
                    h[c] = 1;
                    rows.push(h);
                }
            }
        }
    }
    let mut search = Search {
        b: &tb,
        n,
        p,
        products,
        image_rows,
        depth_rows,
        generator_rows,
        naive,
        limit: options.limit,
        found: Vec::new(),
        stats: SearchStats::default(),
    };
    search.run(vec![None; n]);
    let field = a.field();
    let maps = search
        .found
        .iter()
        .map(|cols| {
            let mut m = Matrix::zeros(field, n, n);
            for (c, col) in cols.iter().enumerate() {
                for (r, &x) in col.iter().enumerate() {
                    m.set(r, c, field.from_i64(i64::from(x)));
                }
            }
            m
        })
        .collect();
    Ok((maps, search.stats))
}

fn guard(mode: SearchMode, n: usize, p: u32) -> Result<(), AlgebraError> {
    let ok = match mode {
        SearchMode::Exhaustive => (p == 2 && n <= 5) || (p == 3 && n <= 4),
        SearchMode::Guided | SearchMode::GuidedModAnnihilator => {
            (u64::from(p)).checked_pow(n as u32).is_some_and(|size| size <= 16_807)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(AlgebraError::SizeGuard(format!("{mode:?} search in dimension {n} over GF({p})")))
    }
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    fn independent(&self, assigned: &[Option<Vec<u32>>]) -> bool {
        let vs: Vec<Vec<u32>> = assigned.iter().flatten().cloned().collect();
        rank(&vs, self.n, self.p) == vs.len()
    }

    fn lhs(&self, pr: &Product, assigned: &[Option<Vec<u32>>]) -> Vec<u32> {
        let m = u64::from(self.p);
        let mut acc = vec![0u64; self.n];
        for &(l, c) in &pr.out {
            let v = assigned[l].as_ref().expect("assigned output");
            for (a, &x) in acc.iter_mut().zip(v) {
                *a += u64::from(c) * u64::from(x) % m;
            }
        }
        acc.into_iter().map(|x| (x % m) as u32).collect()
    }

    /// Applies forced assignments and checks every fully assigned product.
    fn propagate(&self, assigned: &mut [Option<Vec<u32>>]) -> bool {
        let (n, p) = (self.n, self.p);
        let m = u64::from(p);
        loop {
            let mut changed = false;
            for pr in &self.products {
                let (Some(vi), Some(vj)) = (&assigned[pr.i], &assigned[pr.j]) else { continue };
                let rhs = self.b.mul(vi, vj);
                if let Some(rows) = &self.depth_rows[pr.i * n + pr.j] {
                    if !satisfies(rows, &rhs, p) {
                        return false;
                    }
                }
                let open: Vec<(usize, u32)> = pr.out.iter().copied().filter(|&(l, _)| assigned[l].is_none()).collect();
                match open.len() {
                    0 => {
                        if self.lhs(pr, assigned) != rhs {
                            return false;
                        }
                    }
                    1 if !self.naive => {
                        let (k, ck) = open[0];
                        let mut rest = rhs;
                        for &(l, c) in &pr.out {
                            if l == k {
                                continue;
                            }
                            let v = assigned[l].as_ref().expect("assigned");
                            for (r, &x) in rest.iter_mut().zip(v) {
                                *r = ((u64::from(*r) + m * m - u64::from(c) * u64::from(x)) % m) as u32;
                            }
                        }
                        let inv = u64::from(inv_mod(ck, p));
                        let vk: Vec<u32> = rest.iter().map(|&r| (u64::from(r) * inv % m) as u32).collect();
                        if !satisfies(&self.image_rows[k], &vk, p) || !satisfies(&self.generator_rows[k], &vk, p) {
                            return false;
                        }
                        assigned[k] = Some(vk);
                        if !self.independent(assigned) {
                            return false;
                        }
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn candidates(&self, k: usize, assigned: &[Option<Vec<u32>>]) -> Vec<Vec<u32>> {
        let (n, p) = (self.n, self.p);
        if self.naive {
            return all_vectors(n, p);
        }
        let m = u64::from(p);
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for h in self.image_rows[k].iter().chain(&self.generator_rows[k]) {
            let mut r = h.clone();
            r.push(0);
            rows.push(r);
        }
        for pr in &self.products {
            let other = if pr.i == k && pr.j != k {
                pr.j
            } else if pr.j == k && pr.i != k {
                pr.i
            } else {
                continue;
            };
            let Some(vo) = &assigned[other] else { continue };
            let left = self.b.left_rows(vo);
            if let Some(h) = &self.depth_rows[pr.i * n + pr.j] {
                for hr in h {
                    let mut r: Vec<u32> = (0..n)
                        .map(|j| (0..n).map(|kk| u64::from(hr[kk]) * u64::from(left[kk][j]) % m).sum::<u64>() % m)
                        .map(|x| x as u32)
                        .collect();
                    r.push(0);
                    rows.push(r);
                }
            }
            if pr.out.iter().any(|&(l, _)| l != k && assigned[l].is_none()) {
                continue;
            }
            // vo * v_k - c_k v_k = sum over assigned outputs.
            let ck = pr.out.iter().find(|&&(l, _)| l == k).map_or(0, |&(_, c)| c);
            let mut target = vec![0u64; n];
            for &(l, c) in &pr.out {
                if l != k {
                    for (t, &x) in target.iter_mut().zip(assigned[l].as_ref().expect("assigned")) {
                        *t += u64::from(c) * u64::from(x) % m;
                    }
                }
            }
            for row_idx in 0..n {
                let mut r = left[row_idx].clone();
                r[row_idx] = ((u64::from(r[row_idx]) + m - u64::from(ck)) % m) as u32;
                r.push((target[row_idx] % m) as u32);
                rows.push(r);
            }
        }
        let Some((particular, kernel)) = solve_affine(rows, n, p) else { return Vec::new() };
        let d = kernel.len();
        let total = u64::from(p).pow(d as u32);
        (0..total)
            .map(|code| {
                let mut v: Vec<u64> = particular.iter().map(|&x| u64::from(x)).collect();
                let mut rest = code;
                for kv in &kernel {
                    let c = rest % u64::from(p);
                    rest /= u64::from(p);
                    for (x, &y) in v.iter_mut().zip(kv) {
                        *x += c * u64::from(y);
                    }
                }
                v.into_iter().map(|x| (x % m) as u32).collect()
            })
            .collect()
    }

    fn run(&mut self, mut assigned: Vec<Option<Vec<u32>>>) {
        self.stats.nodes += 1;
        if !self.propagate(&mut assigned) {
            return;
        }
        let Some(k) = assigned.iter().position(Option::is_none) else {
            self.found.push(assigned.into_iter().map(|v| v.expect("complete")).collect());
            return;
        };
        for v in self.candidates(k, &assigned) {
            if self.done() {
                return;
            }
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let mut next = assigned.clone();
            next[k] = Some(v);
            if !self.independent(&next) {
                continue;
            }
            self.run(next);
        }
    }
}

fn all_vectors(n: usize, p: u32) -> Vec<Vec<u32>> {
    let total = u64::from(p).pow(n as u32);
    (0..total)
        .map(|code| {
            let mut rest = code;
            (0..n)
                .map(|_| {
                    let c = (rest % u64::from(p)) as u32;
                    rest /= u64::from(p);
                    c
                })
                .collect()
        })
        .collect()
}

/// How an isomorphism question was settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Evidence {
    /// A supplied map checked exactly over the field of the algebras.
    ExactCandidate,
    /// A supplied map with polynomial entries checked over the rational
    /// function field in the parameters.
    SymbolicCandidate,
    /// Finite-field search; not a statement about the complex numbers.
    FiniteFieldSearch { mode: SearchMode, nodes: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub source: String,
    pub target: String,
    pub field: String,
    pub evidence: Evidence,
    pub found: bool,
    /// Columns of the map, as strings, when one was found.
    pub map: Option<Vec<Vec<String>>>,
    /// A found map re-checked with the exact isomorphism test.
    pub rechecked: bool,
}

fn columns_as_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.cols()).map(|c| m.column(c).iter().map(ToString::to_string).collect()).collect()
}

/// Searches for one isomorphism `a -> b` over GF(p).
pub fn iso_search(a: &Algebra, b: &Algebra, mode: SearchMode) -> Result<IsoReport, AlgebraError> {
    let options = SearchOptions { mode, limit: Some(1) };
    let (maps, stats) = search_isomorphisms(a, b, &options)?;
    let map = maps.into_iter().next();
    let rechecked = map.as_ref().is_some_and(|m| a.is_isomorphism(b, m));
    Ok(IsoReport {
        source: a.name().to_string(),
        target: b.name().to_string(),
        field: a.field().to_string(),
        evidence: Evidence::FiniteFieldSearch { mode, nodes: stats.nodes },
        found: map.is_some(),
        map: map.as_ref().map(columns_as_strings),
        rechecked,
    })
}

/// Checks a supplied map exactly in the field of the algebras.
pub fn check_candidate(a: &Algebra, b: &Algebra, phi: &Matrix) -> IsoReport {
    let ok = a.is_isomorphism(b, phi);
    IsoReport {
        source: a.name().to_string(),
        target: b.name().to_string(),
        field: a.field().to_string(),
        evidence: Evidence::ExactCandidate,
        found: ok,
        map: Some(columns_as_strings(phi)),
        rechecked: ok,
    }
}

/// Checks a supplied map with polynomial entries over the rational function
/// field in the parameters.
pub fn check_symbolic_candidate(a: &ParamAlgebra, b: &ParamAlgebra, phi: &[Vec<ParamPoly>]) -> IsoReport {
    let ok = a.is_symbolic_isomorphism(b, phi);
    let n = phi.len();
    IsoReport {
        source: a.name.clone(),
        target: b.name.clone(),
        field: "q(params)".into(),
        evidence: Evidence::SymbolicCandidate,
        found: ok,
        map: Some((0..n).map(|c| (0..n).map(|r| phi[r][c].to_string()).collect()).collect()),
        rechecked: ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, dim: usize, entries: &[(usize, usize, usize, i64)]) -> Algebra {
        Algebra::from_table("t", Field::Prime(p), dim, entries).unwrap()
    }

    fn c569(p: u32, alpha: i64) -> Algebra {
        gf(p, 5, &[(1, 1, 4, 1), (1, 2, 5, alpha), (1, 3, 5, 1), (2, 2, 5, 1), (2, 3, 4, 1), (4, 4, 5, 1)])
    }

    fn count(a: &Algebra, mode: SearchMode) -> usize {
        search_isomorphisms(a, a, &SearchOptions { mode, limit: None }).unwrap().0.len()
    }

    #[test]
    fn solver_handles_free_and_inconsistent_systems() {
        // x + y = 1 over GF(3).
        let (part, ker) = solve_affine(vec![vec![1, 1, 1]], 2, 3).unwrap();
        assert_eq!(part, vec![1, 0]);
        assert_eq!(ker, vec![vec![2, 1]]);
        assert!(solve_affine(vec![vec![1, 1, 1], vec![2, 2, 1]], 2, 3).is_none());
    }

    #[test]
    fn zero_algebra_automorphisms_are_gl() {
        let z = Algebra::zero(Field::Prime(2), 2);
        assert_eq!(count(&z, SearchMode::Exhaustive), 6);
        assert_eq!(count(&z, SearchMode::Guided), 6);
        let z3 = Algebra::zero(Field::Prime(2), 3);
        assert_eq!(count(&z3, SearchMode::Guided), 168);
    }

    #[test]
    fn guided_and_exhaustive_agree() {
        let samples = [
            gf(2, 3, &[(1, 1, 2, 1)]),
            gf(2, 4, &[(1, 1, 2, 1), (1, 2, 3, 1)]),
            gf(3, 3, &[(1, 2, 3, 1)]),
            gf(2, 4, &[(1, 1, 4, 1), (2, 3, 4, 1)]),
            gf(3, 4, &[(1, 1, 2, 1), (2, 2, 3, 1)]),
        ];
        for a in &samples {
            assert_eq!(count(a, SearchMode::Guided), count(a, SearchMode::Exhaustive), "{a}");
        }
    }

    #[test]
    fn every_found_map_is_an_isomorphism() {
        let a = gf(3, 4, &[(1, 1, 3, 1), (1, 2, 4, 1)]);
        let (maps, _) = search_isomorphisms(&a, &a, &SearchOptions { mode: SearchMode::Guided, limit: None }).unwrap();
        assert!(!maps.is_empty());
        assert!(maps.iter().all(|m| a.is_isomorphism(&a, m)));
    }

    #[test]
    fn non_isomorphic_pair_exhausts() {
        let a = gf(2, 4, &[(1, 1, 2, 1)]);
        let b = gf(2, 4, &[(1, 1, 2, 1), (2, 2, 3, 1)]);
        for mode in [SearchMode::Exhaustive, SearchMode::Guided] {
            let report = iso_search(&a, &b, mode).unwrap();
            assert!(!report.found);
        }
    }

    #[test]
    fn renamed_basis_is_found() {
        let a = gf(3, 4, &[(1, 1, 2, 1), (1, 2, 3, 1), (1, 3, 4, 1), (2, 2, 4, 1)]);
        let p = Matrix::from_i64(Field::Prime(3), &[&[1, 0, 0, 0], &[1, 1, 0, 0], &[2, 0, 1, 0], &[0, 1, 2, 1]]);
        let b = a.change_of_basis(&p).unwrap();
        for mode in [SearchMode::Exhaustive, SearchMode::Guided] {
            let report = iso_search(&a, &b, mode).unwrap();
            assert!(report.found && report.rechecked, "{mode:?}");
        }
    }

    #[test]
    fn c569_cube_root_of_unity_twist_over_gf7() {
        // 2 and 4 are the primitive cube roots of unity mod 7.
        let report = iso_search(&c569(7, 2), &c569(7, 4), SearchMode::GuidedModAnnihilator).unwrap();
        assert!(report.found && report.rechecked);
        assert!(matches!(report.evidence, Evidence::FiniteFieldSearch { .. }));
    }

    #[test]
    fn size_guards() {
        let a = Algebra::zero(Field::Prime(3), 5);
        let err = search_isomorphisms(&a, &a, &SearchOptions { mode: SearchMode::Exhaustive, limit: None });
        assert!(matches!(err, Err(AlgebraError::SizeGuard(_))));
        let q = Algebra::zero(Field::Rational, 2);
        assert!(iso_search(&q, &q, SearchMode::Guided).is_err());
    }

    #[test]
    fn candidate_identity() {
        let a = Algebra::from_table("a", Field::Rational, 3, &[(1, 1, 2, 1)]).unwrap();
        let r = check_candidate(&a, &a, &Matrix::identity(Field::Rational, 3));
        assert!(r.found && matches!(r.evidence, Evidence::ExactCandidate));
    }
}
