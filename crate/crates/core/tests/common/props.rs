//! Properties shared by the proptest suite and the acceptance harness. Each
//! takes an entry selector and a list of small integers that drive every
//! random choice, and reports the first violation.

use ccd_core::algebra::Algebra;
use ccd_core::cohomology::{coboundary_space, cocycle_space, BilinearForm, Cocycle, Variety};
use ccd_core::extensions::{central_extension, verify_ann_decomposition, ExtensionSpec};
use ccd_core::field::{Field, FieldElement};
use ccd_core::fingerprint::fingerprint;
use ccd_core::identities::{holds, Identity};
use ccd_core::linalg::{Matrix, SubspaceBasis};
use ccd_core::orbits::is_automorphism;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{catalog, draw_algebra, formulas, Draws};

const Q: Field = Field::Rational;

pub fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 200,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Entry selector plus the integer stream.
pub fn inputs() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (0usize..10_000, proptest::collection::vec(-3i64..=3, 1..40))
}

fn entries_up_to(dim: usize) -> Vec<usize> {
    catalog().entries.iter().enumerate().filter(|(_, e)| e.dim <= dim).map(|(i, _)| i).collect()
}

fn pick(pool: &[usize], selector: usize) -> &'static ccd_core::catalog::CatalogEntry {
    &catalog().entries[pool[selector % pool.len()]]
}

fn combination(space: &SubspaceBasis, draws: &mut Draws) -> Vec<FieldElement> {
    let coeffs: Vec<FieldElement> = (0..space.dim()).map(|_| Q.from_i64(draws.next())).collect();
    space.combine(&coeffs)
}

fn form(dim: usize, coeffs: Vec<FieldElement>) -> BilinearForm {
    BilinearForm::from_coeffs(dim, coeffs).unwrap()
}

/// A cocycle with `s` components drawn from Z²_CCD, optionally pushed off it.
fn draw_cocycle(a: &Algebra, draws: &mut Draws, perturb: bool) -> (Cocycle, bool) {
    let z2 = cocycle_space(a, Variety::Ccd);
    let s = 1 + draws.next().rem_euclid(2) as usize;
    let mut components = Vec::new();
    let mut in_z2 = true;
    for _ in 0..s {
        let mut c = combination(&z2, draws);
        if perturb {
            let k = draws.next().rem_euclid(c.len() as i64) as usize;
            c[k] = c[k].checked_add(&Q.one()).unwrap();
        }
        in_z2 &= z2.contains(&c);
        components.push(form(a.dim(), c));
    }
    (Cocycle::new(components), in_z2)
}

/// B² ⊆ Z²_CCD and Z²_J ⊆ Z²_CCD; B² ⊆ Z²_J when the algebra is Jordan.
pub fn nested_spaces(selector: usize, ints: Vec<i64>) -> Result<(), String> {
    let entry = pick(&entries_up_to(5), selector);
    let a = draw_algebra(entry, &mut Draws::new(ints));
    let ccd = cocycle_space(&a, Variety::Ccd);
    let jordan = cocycle_space(&a, Variety::Jordan);
    let b2 = coboundary_space(&a);
    let inside = |small: &SubspaceBasis, big: &SubspaceBasis| small.vectors().iter().all(|v| big.contains(v));
    if !inside(&b2, &ccd) {
        return Err(format!("{}: B² not inside Z²_CCD", a.name()));
    }
    if !inside(&jordan, &ccd) {
        return Err(format!("{}: Z²_J not inside Z²_CCD", a.name()));
    }
    if holds(&a, Identity::JordanLinearized) && !inside(&b2, &jordan) {
        return Err(format!("{}: B² not inside Z²_J", a.name()));
    }
    Ok(())
}

/// θ ∈ Z²_CCD exactly when the extension by θ is CCD.
pub fn cocycle_iff_ccd(selector: usize, ints: Vec<i64>) -> Result<(), String> {
    let entry = pick(&entries_up_to(4), selector);
    let mut draws = Draws::new(ints);
    let a = draw_algebra(entry, &mut draws);
    let perturb = draws.next() > 0;
    let (theta, in_z2) = draw_cocycle(&a, &mut draws, perturb);
    let ext = central_extension(&a, &theta).map_err(|e| e.to_string())?;
    let ccd = holds(&ext, Identity::Ccd);
    if ccd != in_z2 {
        return Err(format!("{}: cocycle membership {in_z2}, extension CCD {ccd}", a.name()));
    }
    Ok(())
}

/// Ann(A_θ) = (Ann(θ) ∩ Ann(A)) ⊕ V.
pub fn annihilator_decomposition(selector: usize, ints: Vec<i64>) -> Result<(), String> {
    let entry = pick(&entries_up_to(4), selector);
    let mut draws = Draws::new(ints);
    let base = draw_algebra(entry, &mut draws);
    let (cocycle, _) = draw_cocycle(&base, &mut draws, false);
    let name = base.name().to_string();
    let d = verify_ann_decomposition(&ExtensionSpec { base, cocycle }).map_err(|e| e.to_string())?;
    if !d.holds {
        return Err(format!(
            "{name}: Ann(A_θ) has dim {}, predicted {}",
            d.extension_annihilator.dim(),
            d.predicted.dim()
        ));
    }
    Ok(())
}

/// Pulling back by an automorphism keeps Z²_CCD, Z²_J and B² in place.
pub fn automorphisms_preserve_spaces(selector: usize, ints: Vec<i64>) -> Result<(), String> {
    let set = &formulas()[selector % formulas().len()];
    let a = &set.formulas.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(selector as u64);
    let phi = (0..100)
        .find_map(|_| set.formulas.sample_matrix(&mut rng).unwrap())
        .ok_or_else(|| format!("{}: no invertible sample", set.name))?;
    if !is_automorphism(a, &phi) {
        return Err(format!("{}: sampled matrix is not an automorphism", set.name));
    }
    let mut draws = Draws::new(ints);
    for (label, space) in [
        ("Z²_CCD", cocycle_space(a, Variety::Ccd)),
        ("Z²_J", cocycle_space(a, Variety::Jordan)),
        ("B²", coboundary_space(a)),
    ] {
        let theta = form(a.dim(), combination(&space, &mut draws));
        if !space.contains(theta.pull_back(&phi).coeffs()) {
            return Err(format!("{}: pull-back leaves {label}", set.name));
        }
    }
    Ok(())
}

/// A product of elementary matrices: a permutation, a scaling and a few
/// transvections `e_i -> e_i + c e_j`.
fn draw_invertible(n: usize, draws: &mut Draws) -> Matrix {
    let mut m = Matrix::identity(Q, n);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, draws.next().rem_euclid(i as i64 + 1) as usize);
    }
    let mut p = Matrix::zeros(Q, n, n);
    for (c, &r) in order.iter().enumerate() {
        let scale = match draws.next() {
            0 => 1,
            x => x,
        };
        p.set(r, c, Q.from_i64(scale));
    }
    m = m.mul(&p).unwrap();
    for _ in 0..2 + draws.next().rem_euclid(4) {
        let i = draws.next().rem_euclid(n as i64) as usize;
        let j = (i + 1 + draws.next().rem_euclid(n as i64 - 1) as usize) % n;
        let mut t = Matrix::identity(Q, n);
        t.set(j, i, Q.from_i64(draws.next()));
        m = m.mul(&t).unwrap();
    }
    m
}

/// The fingerprint does not see a change of basis.
pub fn fingerprint_invariance(selector: usize, ints: Vec<i64>) -> Result<(), String> {
    let entry = pick(&entries_up_to(5), selector);
    let mut draws = Draws::new(ints);
    let a = draw_algebra(entry, &mut draws);
    let p = draw_invertible(a.dim(), &mut draws);
    let b = a.change_of_basis(&p).map_err(|e| e.to_string())?;
    let (fa, fb) = (fingerprint(&a).map_err(|e| e.to_string())?, fingerprint(&b).map_err(|e| e.to_string())?);
    if fa != fb {
        return Err(format!("{}: fingerprint changed under basis change", a.name()));
    }
    Ok(())
}

/// CCD and almost-Jordan agree on catalog algebras and on extensions.
pub fn ccd_iff_almost_jordan(selector: usize, ints: Vec<i64>) -> Result<(), String> {
    let mut draws = Draws::new(ints);
    let a = if selector.is_multiple_of(2) {
        draw_algebra(pick(&entries_up_to(5), selector / 2), &mut draws)
    } else {
        let base = draw_algebra(pick(&entries_up_to(4), selector / 2), &mut draws);
        let perturb = draws.next() > 1;
        let (theta, _) = draw_cocycle(&base, &mut draws, perturb);
        central_extension(&base, &theta).map_err(|e| e.to_string())?
    };
    let (ccd, aj) = (holds(&a, Identity::Ccd), holds(&a, Identity::AlmostJordan));
    if ccd != aj {
        return Err(format!("{}: CCD {ccd}, almost-Jordan {aj}", a.name()));
    }
    Ok(())
}

pub type Property = fn(usize, Vec<i64>) -> Result<(), String>;

pub const ALL: [(&str, Property); 6] = [
    ("nested_spaces", nested_spaces),
    ("cocycle_iff_ccd", cocycle_iff_ccd),
    ("annihilator_decomposition", annihilator_decomposition),
    ("automorphisms_preserve_spaces", automorphisms_preserve_spaces),
    ("fingerprint_invariance", fingerprint_invariance),
    ("ccd_iff_almost_jordan", ccd_iff_almost_jordan),
];
