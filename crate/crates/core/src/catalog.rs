//! Machine-readable algebra catalog: loading, validation and the
//! verification harness.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, ParamAlgebra};
use crate::cohomology::{cohomology_basis, membership_ts, BilinearForm, Cocycle};
use crate::error::{AlgebraError, CatalogError};
use crate::expr::{parse_coeff, parse_poly, CoeffExpr};
use crate::extensions::{central_extension, split_annihilator};
use crate::field::{Field, FieldElement};
use crate::fingerprint::{fingerprint, Fingerprint};
use crate::identities::{check_identity, Identity};
use crate::iso::{check_candidate, check_symbolic_candidate, iso_search, Evidence, SearchMode};
use crate::linalg::Matrix;
use crate::orbits::{coordinate_name, ActionFormulas, Sampler};
use crate::poly::ParamPoly;

/// Identifier bound to a primitive cube root of unity in isomorphism records.
pub const OMEGA: &str = "w";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    version: u32,
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    dim: usize,
    #[serde(default)]
    params: Vec<RawParam>,
    #[serde(default)]
    products: Vec<RawProduct>,
    #[serde(default)]
    provenance: String,
    #[serde(default)]
    notes: Option<String>,
    expected: RawExpected,
    #[serde(default)]
    variant_of: Option<String>,
    #[serde(default)]
    extension_of: Option<OneOrMany<RawExtension>>,
    #[serde(default)]
    annihilator_split: Vec<RawSplit>,
    #[serde(default)]
    iso_exceptions: Vec<RawIsoException>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParam {
    name: String,
    #[serde(default)]
    excluded: Vec<String>,
    #[serde(default)]
    samples: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProduct {
    i: usize,
    j: usize,
    out: Vec<RawOut>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOut {
    k: usize,
    coeff: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    jordan: bool,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    Many(Vec<T>),
    One(T),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtension {
    base: String,
    #[serde(default)]
    base_params: BTreeMap<String, String>,
    cocycle: RawCocycle,
    #[serde(default)]
    orbit: Option<String>,
}

/// Either a list of components or, for one component, a flat term list.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawCocycle {
    Components(Vec<Vec<(usize, usize, String)>>),
    Single(Vec<(usize, usize, String)>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSplit {
    #[serde(default)]
    params: BTreeMap<String, String>,
    complement: Vec<usize>,
    annihilator: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIsoException {
    #[serde(default)]
    target_params: BTreeMap<String, String>,
    #[serde(default)]
    map: Option<Vec<Vec<String>>>,
    #[serde(default)]
    checks: Vec<RawIsoCheck>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIsoCheck {
    field: String,
    source: BTreeMap<String, String>,
    target: BTreeMap<String, String>,
    #[serde(default)]
    map: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: String,
    pub excluded: Vec<BigRational>,
    pub samples: Vec<BigRational>,
}

/// A recorded base algebra and cocycle; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionRecord {
    pub base: String,
    pub base_params: BTreeMap<String, ParamPoly>,
    pub cocycle: Vec<Vec<(usize, usize, ParamPoly)>>,
    pub orbit: Option<String>,
}

/// Expected output of `split_annihilator` at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRecord {
    pub params: BTreeMap<String, BigRational>,
    /// 0-based coordinates spanning the complement.
    pub complement: Vec<usize>,
    /// Reduced echelon basis of the annihilator.
    pub annihilator: Vec<Vec<BigRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCheck {
    pub field: Field,
    pub source: BTreeMap<String, BigRational>,
    pub target: BTreeMap<String, BigRational>,
    /// Numeric candidate map checked exactly; without one the field is searched.
    pub map: Option<Vec<Vec<BigRational>>>,
}

/// A stated isomorphism between two members of one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoException {
    /// Target parameters in terms of the source ones (may use `w`).
    pub target_params: BTreeMap<String, ParamPoly>,
    /// Candidate map; columns are images of basis vectors.
    pub map: Option<Vec<Vec<ParamPoly>>>,
    pub checks: Vec<IsoCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub dim: usize,
    pub params: Vec<ParamSpec>,
    pub algebra: ParamAlgebra,
    /// Every coefficient text in the entry, as written in the file.
    pub coefficient_texts: Vec<String>,
    pub provenance: String,
    pub notes: Option<String>,
    pub expected_jordan: bool,
    pub variant_of: Option<String>,
    pub extensions: Vec<ExtensionRecord>,
    pub splits: Vec<SplitRecord>,
    pub iso_exceptions: Vec<IsoException>,
}

impl CatalogEntry {
    pub fn param_names(&self) -> Vec<String> {
        self.params.iter().map(|p| p.name.clone()).collect()
    }

    /// All sample points: the product of the per-parameter samples, minus
    /// excluded values. An entry without parameters has one empty point.
    pub fn sample_points(&self) -> Vec<BTreeMap<String, BigRational>> {
        let mut points = vec![BTreeMap::new()];
        for p in &self.params {
            let mut next = Vec::new();
            for point in &points {
                for s in p.samples.iter().filter(|s| !p.excluded.contains(s)) {
                    let mut q = point.clone();
                    q.insert(p.name.clone(), s.clone());
                    next.push(q);
                }
            }
            points = next;
        }
        points
    }

    pub fn instantiate(&self, field: Field, point: &BTreeMap<String, BigRational>) -> Result<Algebra, AlgebraError> {
        let alg = self.algebra.evaluate_rational(field, point)?;
        Ok(alg.with_name(label(&self.name, point)))
    }
}

/// `C5_13[a=1,b=2]`, or the bare name without parameters.
pub fn label(name: &str, point: &BTreeMap<String, BigRational>) -> String {
    if point.is_empty() {
        name.to_string()
    } else {
        format!("{name}[{}]", format_point(point))
    }
}

pub fn format_point(point: &BTreeMap<String, BigRational>) -> String {
    point.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    index: BTreeMap<String, usize>,
}

impl Catalog {
    pub fn get(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.index.get(name).map(|&i| &self.entries[i]).ok_or_else(|| CatalogError::Unknown(name.to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
    parse_catalog(&text)
}

pub fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let raw: RawCatalog = serde_json::from_str(text)?;
    if raw.version != 1 {
        return Err(CatalogError::Schema {
            entry: "<root>".into(),
            message: format!("unsupported version {}", raw.version),
        });
    }
    let mut entries = Vec::new();
    let mut index = BTreeMap::new();
    for r in raw.entries {
        let name = r.name.clone();
        if index.insert(name.clone(), entries.len()).is_some() {
            return Err(CatalogError::Duplicate(name));
        }
        entries.push(convert_entry(r)?);
    }
    let catalog = Catalog { entries, index };
    for e in &catalog.entries {
        for rec in &e.extensions {
            let base = catalog.get(&rec.base)?;
            let mut keys: Vec<String> = rec.base_params.keys().cloned().collect();
            keys.sort();
            let mut expected = base.param_names();
            expected.sort();
            if keys != expected {
                return Err(schema(&e.name, format!("base {} needs parameters {expected:?}", rec.base)));
            }
            if rec.base_params.values().any(|p| !p.variables().is_empty() && e.params.is_empty()) {
                return Err(schema(&e.name, "base parameters use unknown names".into()));
            }
            if rec.cocycle.iter().flatten().any(|&(i, j, _)| i >= base.dim || j >= base.dim) {
                return Err(schema(&e.name, format!("cocycle index out of range for base {}", rec.base)));
            }
            if base.dim + rec.cocycle.len() != e.dim {
                return Err(schema(&e.name, format!("base {} plus cocycle has the wrong dimension", rec.base)));
            }
        }
        if let Some(v) = &e.variant_of {
            catalog.get(v)?;
        }
    }
    Ok(catalog)
}

/// Parses a single algebra file: one object in the catalog entry schema.
/// References to other entries are not resolved.
pub fn parse_entry(text: &str) -> Result<CatalogEntry, CatalogError> {
    let raw: RawEntry = serde_json::from_str(text)?;
    convert_entry(raw)
}

pub fn load_entry(path: impl AsRef<Path>) -> Result<CatalogEntry, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
    parse_entry(&text)
}

#[derive(Serialize)]
struct OutEntry {
    name: String,
    dim: usize,
    products: Vec<OutProduct>,
    provenance: String,
    expected: OutExpected,
}

#[derive(Serialize)]
struct OutProduct {
    i: usize,
    j: usize,
    out: Vec<OutTerm>,
}

#[derive(Serialize)]
struct OutTerm {
    k: usize,
    coeff: String,
}

#[derive(Serialize)]
struct OutExpected {
    jordan: bool,
}

/// An algebra as an algebra file in the catalog entry schema. Structure
/// constants are written with `Display`, so files round-trip over Q.
pub fn entry_json(a: &Algebra, provenance: &str) -> serde_json::Value {
    let products = a
        .table()
        .iter()
        .filter(|(&(i, j), _)| i <= j)
        .filter_map(|(&(i, j), v)| {
            let out: Vec<OutTerm> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| OutTerm { k: k + 1, coeff: c.to_string() })
                .collect();
            (!out.is_empty()).then_some(OutProduct { i: i + 1, j: j + 1, out })
        })
        .collect();
    let entry = OutEntry {
        name: a.name().to_string(),
        dim: a.dim(),
        products,
        provenance: provenance.to_string(),
        expected: OutExpected { jordan: check_identity(a, Identity::JordanLinearized).holds },
    };
    serde_json::to_value(entry).expect("entry serializes")
}

fn schema(entry: &str, message: String) -> CatalogError {
    CatalogError::Schema { entry: entry.to_string(), message }
}

struct Ctx<'a> {
    entry: &'a str,
    texts: Vec<String>,
}

impl Ctx<'_> {
    fn expr(&mut self, text: &str) -> Result<CoeffExpr, CatalogError> {
        self.texts.push(text.to_string());
        parse_coeff(text).map_err(|source| CatalogError::Coeff {
            entry: self.entry.to_string(),
            text: text.to_string(),
            source,
        })
    }

    fn poly(&mut self, text: &str, allowed: &[String]) -> Result<ParamPoly, CatalogError> {
        self.expr(text)?.bind(allowed).map_err(|m| schema(self.entry, format!("`{text}`: {m}")))
    }

    fn number(&mut self, text: &str) -> Result<BigRational, CatalogError> {
        self.poly(text, &[])?.as_constant().ok_or_else(|| schema(self.entry, format!("`{text}` is not a number")))
    }

    fn point(
        &mut self,
        raw: &BTreeMap<String, String>,
        names: &[String],
    ) -> Result<BTreeMap<String, BigRational>, CatalogError> {
        let mut out = BTreeMap::new();
        for (k, v) in raw {
            if !names.contains(k) {
                return Err(schema(self.entry, format!("unknown parameter `{k}`")));
            }
            out.insert(k.clone(), self.number(v)?);
        }
        if out.len() != names.len() {
            return Err(schema(self.entry, format!("parameter point must set {names:?}")));
        }
        Ok(out)
    }
}

fn check_index(entry: &str, index: usize, dim: usize) -> Result<usize, CatalogError> {
    if index == 0 || index > dim {
        return Err(schema(entry, AlgebraError::IndexOutOfRange { index, dim }.to_string()));
    }
    Ok(index - 1)
}

fn convert_entry(r: RawEntry) -> Result<CatalogEntry, CatalogError> {
    let mut ctx = Ctx { entry: &r.name, texts: Vec::new() };
    let mut params = Vec::new();
    for p in &r.params {
        let excluded = p.excluded.iter().map(|t| ctx.number(t)).collect::<Result<Vec<_>, _>>()?;
        let samples = p.samples.iter().map(|t| ctx.number(t)).collect::<Result<Vec<_>, _>>()?;
        if samples.iter().any(|s| excluded.contains(s)) {
            return Err(schema(&r.name, format!("a sample of `{}` is excluded", p.name)));
        }
        params.push(ParamSpec { name: p.name.clone(), excluded, samples });
    }
    let names: Vec<String> = params.iter().map(|p| p.name.clone()).collect();
    let mut algebra = ParamAlgebra::new(r.name.clone(), r.dim, names.clone());
    for prod in &r.products {
        let i = check_index(&r.name, prod.i, r.dim)?;
        let j = check_index(&r.name, prod.j, r.dim)?;
        if i > j {
            return Err(schema(&r.name, format!("product e{}e{} must be stored with i <= j", prod.i, prod.j)));
        }
        for out in &prod.out {
            let k = check_index(&r.name, out.k, r.dim)?;
            let c = ctx.poly(&out.coeff, &names)?;
            algebra.add_product(i, j, k, c)?;
        }
    }
    let mut extensions = Vec::new();
    let raw_ext = match r.extension_of {
        None => Vec::new(),
        Some(OneOrMany::One(x)) => vec![x],
        Some(OneOrMany::Many(xs)) => xs,
    };
    for x in raw_ext {
        let components = match x.cocycle {
            RawCocycle::Components(cs) => cs,
            RawCocycle::Single(c) => vec![c],
        };
        let mut cocycle = Vec::new();
        for comp in components {
            let mut terms = Vec::new();
            for (i, j, c) in comp {
                if i == 0 || j == 0 {
                    return Err(schema(&r.name, "cocycle indices are 1-based".into()));
                }
                terms.push((i - 1, j - 1, ctx.poly(&c, &names)?));
            }
            cocycle.push(terms);
        }
        let mut base_params = BTreeMap::new();
        for (k, v) in &x.base_params {
            base_params.insert(k.clone(), ctx.poly(v, &names)?);
        }
        extensions.push(ExtensionRecord { base: x.base, base_params, cocycle, orbit: x.orbit });
    }
    let mut splits = Vec::new();
    for s in &r.annihilator_split {
        let point = ctx.point(&s.params, &names)?;
        let complement = s.complement.iter().map(|&c| check_index(&r.name, c, r.dim)).collect::<Result<Vec<_>, _>>()?;
        let mut annihilator = Vec::new();
        for v in &s.annihilator {
            if v.len() != r.dim {
                return Err(schema(&r.name, "annihilator vector has the wrong length".into()));
            }
            annihilator.push(v.iter().map(|t| ctx.number(t)).collect::<Result<Vec<_>, _>>()?);
        }
        splits.push(SplitRecord { params: point, complement, annihilator });
    }
    let mut with_omega = names.clone();
    with_omega.push(OMEGA.to_string());
    let mut iso_exceptions = Vec::new();
    for x in &r.iso_exceptions {
        let mut target_params = BTreeMap::new();
        for (k, v) in &x.target_params {
            if !names.contains(k) {
                return Err(schema(&r.name, format!("unknown parameter `{k}`")));
            }
            target_params.insert(k.clone(), ctx.poly(v, &with_omega)?);
        }
        let map = match &x.map {
            None => None,
            Some(rows) => {
                if rows.len() != r.dim || rows.iter().any(|row| row.len() != r.dim) {
                    return Err(schema(&r.name, "isomorphism map must be square of the entry's dimension".into()));
                }
                Some(
                    rows.iter()
                        .map(|row| row.iter().map(|t| ctx.poly(t, &with_omega)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
        };
        let mut checks = Vec::new();
        for c in &x.checks {
            let field: Field = c.field.parse().map_err(|e: crate::error::FieldError| schema(&r.name, e.to_string()))?;
            let map = match &c.map {
                None => None,
                Some(rows) => {
                    if rows.len() != r.dim || rows.iter().any(|row| row.len() != r.dim) {
                        return Err(schema(&r.name, "isomorphism map must be square of the entry's dimension".into()));
                    }
                    Some(
                        rows.iter()
                            .map(|row| row.iter().map(|t| ctx.number(t)).collect::<Result<Vec<_>, _>>())
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
            };
            checks.push(IsoCheck {
                field,
                source: ctx.point(&c.source, &names)?,
                target: ctx.point(&c.target, &names)?,
                map,
            });
        }
        iso_exceptions.push(IsoException { target_params, map, checks });
    }
    let coefficient_texts = ctx.texts;
    Ok(CatalogEntry {
        name: r.name,
        dim: r.dim,
        params,
        algebra,
        coefficient_texts,
        provenance: r.provenance,
        notes: r.notes,
        expected_jordan: r.expected.jordan,
        variant_of: r.variant_of,
        extensions,
        splits,
        iso_exceptions,
    })
}

/// One line of the verification report.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ReportItem {
    pub entry: String,
    pub sample: String,
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub field: String,
    /// Identity checks over GF(p) are sampled, not proofs.
    pub heuristic: bool,
    pub items: Vec<ReportItem>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportItem> {
        self.items.iter().filter(|i| !i.pass)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub field: Field,
    /// Include the isomorphism-exception checks.
    pub iso_exceptions: bool,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            field: Field::Rational,
            iso_exceptions: true,
            threads: std::thread::available_parallelism().map_or(1, usize::from),
        }
    }
}

/// Runs every check of every entry at every sample point. The report is
/// sorted by entry, sample and check, so it does not depend on scheduling.
pub fn verify_catalog(catalog: &Catalog, options: &VerifyOptions) -> VerifyReport {
    let threads = options.threads.max(1);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut items: Vec<ReportItem> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        let Some(entry) = catalog.entries.get(i) else { break };
                        local.extend(verify_entry(catalog, entry, options));
                    }
                    local
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("verification worker")).collect()
    });
    items.sort();
    VerifyReport {
        field: options.field.to_string(),
        heuristic: !matches!(options.field, Field::Rational | Field::Eisenstein),
        items,
    }
}

fn item(entry: &str, sample: &str, check: impl Into<String>, result: Result<Option<String>, String>) -> ReportItem {
    let (pass, witness) = match result {
        Ok(w) => (true, w),
        Err(w) => (false, Some(w)),
    };
    ReportItem { entry: entry.to_string(), sample: sample.to_string(), check: check.into(), pass, witness }
}

/// All checks for one entry.
pub fn verify_entry(catalog: &Catalog, entry: &CatalogEntry, options: &VerifyOptions) -> Vec<ReportItem> {
    let field = options.field;
    let mut out = Vec::new();
    for point in entry.sample_points() {
        let sample = format_point(&point);
        let alg = match entry.instantiate(field, &point) {
            Ok(a) => a,
            Err(e) => {
                out.push(item(&entry.name, &sample, "instantiate", Err(e.to_string())));
                continue;
            }
        };
        out.extend(structural_checks(entry, &alg, &sample));
        for (n, rec) in entry.extensions.iter().enumerate() {
            let check = format!("extension:{}:{}", n + 1, rec.base);
            out.push(item(&entry.name, &sample, check, reconstruct(catalog, rec, &alg, field, &point)));
        }
        if let Some(rec) = entry.splits.iter().find(|s| s.params == point) {
            out.push(item(&entry.name, &sample, "annihilator_split", check_split(&alg, rec)));
        } else if entry.dim >= 4 {
            out.push(item(&entry.name, &sample, "annihilator_split", Err("no recorded split for this sample".into())));
        }
    }
    if options.iso_exceptions {
        for (n, x) in entry.iso_exceptions.iter().enumerate() {
            out.extend(check_iso_exception(entry, n, x));
        }
    }
    out
}

fn structural_checks(entry: &CatalogEntry, alg: &Algebra, sample: &str) -> Vec<ReportItem> {
    let mut out = Vec::new();
    let name = &entry.name;
    let describe = |c: &crate::identities::IdentityCheck| c.witness.as_ref().map(|w| format!("{w:?}"));
    let commutative = check_identity(alg, Identity::Commutative);
    out.push(item(
        name,
        sample,
        "commutative",
        if commutative.holds { Ok(None) } else { Err(describe(&commutative).unwrap_or_default()) },
    ));
    out.push(item(
        name,
        sample,
        "nilpotent",
        if alg.is_nilpotent() {
            Ok(alg.nilpotency_index().map(|k| format!("index {k}")))
        } else {
            Err("power filtration does not reach zero".into())
        },
    ));
    let ccd = check_identity(alg, Identity::Ccd);
    out.push(item(name, sample, "ccd", if ccd.holds { Ok(None) } else { Err(describe(&ccd).unwrap_or_default()) }));
    let jordan = check_identity(alg, Identity::JordanLinearized);
    out.push(item(
        name,
        sample,
        "jordan_flag",
        if jordan.holds == entry.expected_jordan {
            Ok(None)
        } else {
            Err(format!("expected jordan = {}, found {}", entry.expected_jordan, jordan.holds))
        },
    ));
    let almost = check_identity(alg, Identity::AlmostJordan);
    out.push(item(
        name,
        sample,
        "ccd_iff_almost_jordan",
        if almost.holds == ccd.holds {
            Ok(None)
        } else {
            Err(format!("ccd = {}, almost-Jordan = {}", ccd.holds, almost.holds))
        },
    ));
    let ann = alg.annihilator().dim();
    out.push(item(
        name,
        sample,
        "annihilator",
        if ann >= 1 { Ok(Some(format!("dim {ann}"))) } else { Err("Ann = 0".into()) },
    ));
    out
}

fn eval_point(
    field: Field,
    point: &BTreeMap<String, BigRational>,
) -> Result<BTreeMap<String, FieldElement>, AlgebraError> {
    point.iter().map(|(k, v)| Ok((k.clone(), field.from_rational(v)?))).collect()
}

/// The cocycle of a record at a parameter point.
pub fn record_cocycle(
    rec: &ExtensionRecord,
    base_dim: usize,
    field: Field,
    point: &BTreeMap<String, BigRational>,
) -> Result<Cocycle, AlgebraError> {
    let values = eval_point(field, point)?;
    let mut components = Vec::new();
    for comp in &rec.cocycle {
        let mut terms = Vec::new();
        for (i, j, c) in comp {
            terms.push((*i, *j, c.evaluate(field, &values)?));
        }
        components.push(BilinearForm::from_terms(field, base_dim, terms)?);
    }
    Ok(Cocycle::new(components))
}

/// The base algebra of a record at a parameter point of the extension.
pub fn record_base(
    catalog: &Catalog,
    rec: &ExtensionRecord,
    field: Field,
    point: &BTreeMap<String, BigRational>,
) -> Result<Algebra, CatalogError> {
    let base = catalog.get(&rec.base)?;
    let values = eval_point(field, point)?;
    let mut base_values = BTreeMap::new();
    for (k, p) in &rec.base_params {
        base_values.insert(k.clone(), p.evaluate(field, &values)?);
    }
    Ok(base.algebra.evaluate(field, &base_values)?)
}

fn reconstruct(
    catalog: &Catalog,
    rec: &ExtensionRecord,
    alg: &Algebra,
    field: Field,
    point: &BTreeMap<String, BigRational>,
) -> Result<Option<String>, String> {
    let base = record_base(catalog, rec, field, point).map_err(|e| e.to_string())?;
    let theta = record_cocycle(rec, base.dim(), field, point).map_err(|e| e.to_string())?;
    let ext = central_extension(&base, &theta).map_err(|e| e.to_string())?;
    if ext.table() == alg.table() {
        Ok(rec.orbit.clone())
    } else {
        Err(format!("reconstructed {}", ext.table_string()))
    }
}

/// `split_annihilator` gives the recorded complement and annihilator basis,
/// and the quotient extended by `θ` is the entry in the new basis.
fn check_split(alg: &Algebra, rec: &SplitRecord) -> Result<Option<String>, String> {
    let field = alg.field();
    let split = split_annihilator(alg).map_err(|e| e.to_string())?;
    if split.complement != rec.complement {
        return Err(format!("complement {:?}", split.complement.iter().map(|c| c + 1).collect::<Vec<_>>()));
    }
    let expected: Vec<Vec<FieldElement>> = rec
        .annihilator
        .iter()
        .map(|v| v.iter().map(|x| field.from_rational(x)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()
        .map_err(|e: crate::error::FieldError| e.to_string())?;
    let n = alg.dim();
    let q = rec.complement.len();
    let found: Vec<Vec<FieldElement>> = (q..n).map(|c| split.basis.column(c)).collect();
    if found != expected {
        return Err("annihilator basis differs from the record".into());
    }
    let rebuilt = central_extension(&split.quotient, &split.theta).map_err(|e| e.to_string())?;
    let inverse = split.basis.inverse().ok_or("split basis is singular")?;
    let back = rebuilt.change_of_basis(&inverse).map_err(|e| e.to_string())?;
    if back.table() != alg.table() {
        return Err(format!("rebuilt {}", back.table_string()));
    }
    Ok(split.permutation().map(|p| {
        let p: Vec<String> = p.iter().map(|i| (i + 1).to_string()).collect();
        format!("permutation {}", p.join(" "))
    }))
}

/// Checks one stated isomorphism exception: the symbolic map (over Q, or
/// over Q(w) at the finite-field check points' source values when `w`
/// occurs) and every finite-field search.
pub fn check_iso_exception(entry: &CatalogEntry, n: usize, x: &IsoException) -> Vec<ReportItem> {
    let mut out = Vec::new();
    let tag = format!("iso_exception:{}", n + 1);
    let uses_omega =
        x.target_params.values().chain(x.map.iter().flatten().flatten()).any(|p| p.variables().contains(OMEGA));
    if let Some(map) = &x.map {
        if uses_omega {
            for point in
                entry.sample_points().into_iter().filter(|p| p.values().all(|v| !num_traits::Zero::is_zero(v))).take(2)
            {
                let sample = format_point(&point);
                out.push(item(
                    &entry.name,
                    &sample,
                    format!("{tag}:exact:q(w)"),
                    exact_omega_check(entry, x, map, &point),
                ));
            }
        } else {
            let target = entry.algebra.substitute(&x.target_params);
            let report = check_symbolic_candidate(&entry.algebra, &target, map);
            out.push(item(
                &entry.name,
                "symbolic",
                format!("{tag}:symbolic"),
                if report.found {
                    Ok(Some(evidence_label(&report.evidence)))
                } else {
                    Err("candidate map is not an isomorphism".into())
                },
            ));
        }
    }
    for c in &x.checks {
        let sample = format!("{} -> {}", format_point(&c.source), format_point(&c.target));
        let result = (|| -> Result<Option<String>, String> {
            let a = entry.instantiate(c.field, &c.source).map_err(|e| e.to_string())?;
            let b = entry.instantiate(c.field, &c.target).map_err(|e| e.to_string())?;
            let r = match &c.map {
                Some(rows) => {
                    let rows: Vec<Vec<FieldElement>> = rows
                        .iter()
                        .map(|row| row.iter().map(|x| c.field.from_rational(x)).collect::<Result<_, _>>())
                        .collect::<Result<_, _>>()
                        .map_err(|e: crate::error::FieldError| e.to_string())?;
                    let phi = Matrix::from_rows(c.field, rows).map_err(|e| e.to_string())?;
                    check_candidate(&a, &b, &phi)
                }
                None => iso_search(&a, &b, SearchMode::Guided).map_err(|e| e.to_string())?,
            };
            if r.found && r.rechecked {
                Ok(Some(format!("{}; map columns {:?}", evidence_label(&r.evidence), r.map.unwrap_or_default())))
            } else {
                Err(format!("{}: no map found", evidence_label(&r.evidence)))
            }
        })();
        let kind = if c.map.is_some() { "candidate" } else { "search" };
        out.push(item(&entry.name, &sample, format!("{tag}:{kind}:{}", c.field), result));
    }
    out
}

fn evidence_label(e: &Evidence) -> String {
    match e {
        Evidence::ExactCandidate => "exact candidate map".into(),
        Evidence::SymbolicCandidate => "symbolic candidate map over the parameter function field".into(),
        Evidence::FiniteFieldSearch { mode, nodes } => {
            format!("finite-field search evidence ({mode:?}, {nodes} nodes)")
        }
    }
}

fn exact_omega_check(
    entry: &CatalogEntry,
    x: &IsoException,
    map: &[Vec<ParamPoly>],
    point: &BTreeMap<String, BigRational>,
) -> Result<Option<String>, String> {
    let field = Field::Eisenstein;
    let mut values = eval_point(field, point).map_err(|e| e.to_string())?;
    values.insert(OMEGA.to_string(), field.omega().expect("Eisenstein field"));
    let source = entry.algebra.evaluate(field, &values).map_err(|e| e.to_string())?;
    let mut target_values = values.clone();
    for (k, p) in &x.target_params {
        target_values.insert(k.clone(), p.evaluate(field, &values).map_err(|e| e.to_string())?);
    }
    let target = entry.algebra.evaluate(field, &target_values).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<FieldElement>> = map
        .iter()
        .map(|r| r.iter().map(|e| e.evaluate(field, &values)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()
        .map_err(|e: AlgebraError| e.to_string())?;
    let phi = Matrix::from_rows(field, rows).map_err(|e| e.to_string())?;
    let report = check_candidate(&source, &target, &phi);
    if report.found {
        Ok(Some(evidence_label(&report.evidence)))
    } else {
        Err("candidate map is not an isomorphism".into())
    }
}

/// parse, print, parse: the two trees must agree for every coefficient text.
pub fn coefficient_round_trip(catalog: &Catalog) -> Vec<(String, String)> {
    let mut failures = Vec::new();
    for e in &catalog.entries {
        for text in &e.coefficient_texts {
            let ok = parse_coeff(text)
                .ok()
                .and_then(|first| parse_coeff(&first.to_string()).ok().map(|second| first == second))
                .unwrap_or(false);
            if !ok {
                failures.push((e.name.clone(), text.clone()));
            }
        }
    }
    failures
}

#[derive(Clone, Debug, Serialize)]
pub struct DistinguishReport {
    pub algebras: usize,
    /// Labels sharing one fingerprint; these are not separated.
    pub unseparated: Vec<Vec<String>>,
}

/// Groups algebras by fingerprint.
pub fn distinguish_all(algebras: &[Algebra]) -> Result<DistinguishReport, AlgebraError> {
    let mut groups: BTreeMap<Fingerprint, Vec<String>> = BTreeMap::new();
    for a in algebras {
        groups.entry(fingerprint(a)?).or_default().push(a.name().to_string());
    }
    Ok(DistinguishReport {
        algebras: algebras.len(),
        unseparated: groups.into_values().filter(|g| g.len() > 1).collect(),
    })
}

/// One algebra per entry over Q, at the last sample of every parameter.
pub fn representatives(
    catalog: &Catalog,
    filter: impl Fn(&CatalogEntry) -> bool,
) -> Result<Vec<Algebra>, AlgebraError> {
    catalog
        .entries
        .iter()
        .filter(|e| filter(e))
        .map(|e| {
            let point: BTreeMap<String, BigRational> = e
                .params
                .iter()
                .map(|p| {
                    let s = p
                        .samples
                        .iter()
                        .rev()
                        .find(|s| !p.excluded.contains(s))
                        .cloned()
                        .unwrap_or_else(|| BigRational::from_integer(3.into()));
                    (p.name.clone(), s)
                })
                .collect();
            e.instantiate(Field::Rational, &point)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialExtensionReport {
    pub algebra: String,
    pub h2_dim: usize,
    /// `dim (∩ rad θ ∩ Ann A)` over all of Z²: when positive, no cocycle has
    /// `Ann(θ) ∩ Ann(A) = 0`, so there are no non-split extensions.
    pub common_meet_dim: usize,
    pub proven_trivial: bool,
    /// A class in T_1 when one was found among sums of basis classes.
    pub witness: Option<String>,
}

/// Whether every central extension is split, with a T_1 witness otherwise.
pub fn trivial_extension_check(a: &Algebra) -> Result<TrivialExtensionReport, AlgebraError> {
    let coh = cohomology_basis(a);
    let classes = coh.classes();
    let h = classes.len();
    let common_meet_dim =
        if h == 0 { a.annihilator().dim() } else { membership_ts(a, &coh, &classes)?.annihilator_meet_dim };
    let mut witness = None;
    if common_meet_dim == 0 && h <= 12 {
        for mask in 1u32..(1 << h) {
            let theta = classes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .fold(BilinearForm::zero(a.field(), a.dim()), |acc, (_, c)| acc.add(c));
            if membership_ts(a, &coh, std::slice::from_ref(&theta))?.in_ts {
                witness = Some(theta.to_string());
                break;
            }
        }
    }
    Ok(TrivialExtensionReport {
        algebra: a.name().to_string(),
        h2_dim: h,
        common_meet_dim,
        proven_trivial: common_meet_dim > 0 || h == 0,
        witness,
    })
}

/// Parses a matrix file: a JSON array of rows of coefficient expressions.
pub fn parse_matrix(text: &str, allowed: &[String]) -> Result<Vec<Vec<ParamPoly>>, CatalogError> {
    let rows: Vec<Vec<String>> = serde_json::from_str(text)?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(schema("<matrix>", "matrix must be square".into()));
    }
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|t| {
                    let p = parse_poly(t).map_err(|source| CatalogError::Coeff {
                        entry: "<matrix>".into(),
                        text: t.clone(),
                        source,
                    })?;
                    match p.variables().into_iter().find(|v| !allowed.contains(v)) {
                        Some(v) => Err(schema("<matrix>", format!("unknown parameter `{v}`"))),
                        None => Ok(p),
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFormulaFile {
    version: u32,
    formulas: Vec<RawFormulas>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFormulas {
    name: String,
    algebra: String,
    sampler: Sampler,
    nablas: Vec<Vec<(usize, usize, String)>>,
    matrix: Vec<Vec<String>>,
    stated: Vec<String>,
    #[serde(default)]
    fixed: BTreeMap<String, String>,
}

/// One set of stated action formulas, bound to its catalog algebra over Q.
#[derive(Clone, Debug)]
pub struct NamedFormulas {
    pub name: String,
    pub formulas: ActionFormulas,
}

pub fn load_action_formulas(path: impl AsRef<Path>, catalog: &Catalog) -> Result<Vec<NamedFormulas>, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
    parse_action_formulas(&text, catalog)
}

pub fn parse_action_formulas(text: &str, catalog: &Catalog) -> Result<Vec<NamedFormulas>, CatalogError> {
    let raw: RawFormulaFile = serde_json::from_str(text)?;
    if raw.version != 1 {
        return Err(schema("<root>", format!("unsupported version {}", raw.version)));
    }
    raw.formulas.into_iter().map(|r| convert_formulas(r, catalog)).collect()
}

fn convert_formulas(r: RawFormulas, catalog: &Catalog) -> Result<NamedFormulas, CatalogError> {
    let name = r.name.as_str();
    let entry = catalog.get(&r.algebra)?;
    if !entry.params.is_empty() {
        return Err(schema(name, format!("algebra {} has parameters", r.algebra)));
    }
    let field = Field::Rational;
    let algebra = entry.instantiate(field, &BTreeMap::new())?;
    let n = entry.dim;
    let poly =
        |t: &str| parse_poly(t).map_err(|source| CatalogError::Coeff { entry: name.into(), text: t.into(), source });

    if r.matrix.len() != n || r.matrix.iter().any(|row| row.len() != n) {
        return Err(schema(name, format!("matrix must be {n}x{n}")));
    }
    let matrix =
        r.matrix.iter().map(|row| row.iter().map(|t| poly(t)).collect()).collect::<Result<Vec<Vec<_>>, _>>()?;

    let mut nablas = Vec::new();
    for comp in &r.nablas {
        let mut terms = Vec::new();
        for (i, j, c) in comp {
            if *i == 0 || *j == 0 || *i > n || *j > n {
                return Err(schema(name, format!("nabla index ({i}, {j}) out of range")));
            }
            let value = poly(c)?
                .as_constant()
                .ok_or_else(|| schema(name, format!("nabla coefficient `{c}` is not a constant")))?;
            terms.push((i - 1, j - 1, field.from_rational(&value).map_err(AlgebraError::from)?));
        }
        nablas.push(BilinearForm::from_terms(field, n, terms)?);
    }
    if r.stated.len() != nablas.len() {
        return Err(schema(name, "one stated formula per nabla is required".into()));
    }

    let coords: Vec<String> = (0..nablas.len()).map(coordinate_name).collect();
    let mut fixed = BTreeMap::new();
    for (k, t) in &r.fixed {
        if !coords.contains(k) {
            return Err(schema(name, format!("fixed coordinate `{k}` does not exist")));
        }
        let value =
            poly(t)?.as_constant().ok_or_else(|| schema(name, format!("fixed value `{t}` is not a constant")))?;
        fixed.insert(k.clone(), field.from_rational(&value).map_err(AlgebraError::from)?);
    }

    let matrix_vars: Vec<String> = matrix.iter().flatten().flat_map(ParamPoly::variables).collect();
    if let Some(v) = matrix_vars.iter().find(|v| coords.contains(v)) {
        return Err(schema(name, format!("matrix variable `{v}` shadows a coordinate")));
    }
    let stated = r.stated.iter().map(|t| poly(t)).collect::<Result<Vec<_>, _>>()?;
    for p in &stated {
        if let Some(v) = p.variables().into_iter().find(|v| !coords.contains(v) && !matrix_vars.contains(v)) {
            return Err(schema(name, format!("stated formula uses unknown name `{v}`")));
        }
    }
    Ok(NamedFormulas {
        name: r.name.clone(),
        formulas: ActionFormulas { algebra, nablas, matrix, stated, fixed, sampler: r.sampler },
    })
}
