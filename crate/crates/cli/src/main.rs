//! `ccdalg`: verification, cohomology, extension, orbit and isomorphism
//! workflows over the algebra catalog.
//!
//! Exit codes: 0 when every check passes, 1 on verification failures (the
//! report is still printed), 2 on usage or schema errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use ccd_core::algebra::Algebra;
use ccd_core::catalog::{
    entry_json, load_action_formulas, load_catalog, load_entry, parse_matrix, trivial_extension_check, verify_catalog,
    Catalog, CatalogEntry, ReportItem, VerifyOptions,
};
use ccd_core::cohomology::{coboundary_space, cocycle_space, cohomology_basis, BilinearForm, Cocycle, Variety};
use ccd_core::expr::parse_poly;
use ccd_core::extensions::central_extension;
use ccd_core::field::{Field, FieldElement};
use ccd_core::fingerprint::fingerprint;
use ccd_core::iso::{check_candidate, iso_search, IsoReport, SearchMode};
use ccd_core::linalg::{Matrix, SubspaceBasis};
use ccd_core::orbits::{orbit_extension_soundness, orbit_partition, verify_action_formulas};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "ccdalg",
    version,
    about = "Commutative nilpotent algebras: identities, cohomology, extensions, orbits"
)]
struct Cli {
    /// Catalog used to resolve `catalog:NAME` arguments.
    #[arg(long, global = true, default_value = "data/catalog.json")]
    catalog: PathBuf,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized grid.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every catalog check at every recorded sample.
    Verify {
        /// q, gf:<p> or q(w).
        #[arg(long, default_value = "q")]
        field: String,
        /// Use the samples recorded in the catalog (the only source of samples).
        #[arg(long)]
        samples_from_file: bool,
        /// Skip the isomorphism-exception checks.
        #[arg(long)]
        no_iso: bool,
        /// Also check stated action formulas from this file.
        #[arg(long)]
        formulas: Option<PathBuf>,
        /// Sample points per formula set.
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Worker threads; the report does not depend on this.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Dimensions and a basis of the second cohomology.
    Cohomology {
        /// `catalog:NAME` or the path of an algebra file.
        algebra: String,
        /// Which cohomology to report; `all` lists both bases.
        #[arg(long, value_enum, default_value_t = VarietyArg::Ccd)]
        variety: VarietyArg,
        /// Parameter values, e.g. `a=1,b=-2`.
        #[arg(long)]
        params: Option<String>,
        /// q, gf:<p> or q(w).
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// Central extension by a cocycle; prints an algebra file.
    Extend {
        /// `catalog:NAME` or the path of an algebra file.
        base: String,
        /// One component: `i,j,coeff;i,j,coeff;...` with 1-based indices.
        /// Repeat for several components.
        #[arg(long, required = true)]
        cocycle: Vec<String>,
        /// Expected number of components.
        #[arg(long)]
        ext_dim: Option<usize>,
        /// Parameter values, e.g. `a=1,b=-2`.
        #[arg(long)]
        params: Option<String>,
        /// Name written into the algebra file.
        #[arg(long)]
        name: Option<String>,
        /// q, gf:<p> or q(w).
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// Orbits of the automorphism group on s-dimensional subspaces of H² over GF(p).
    Orbits {
        /// `catalog:NAME` or the path of an algebra file.
        algebra: String,
        /// Finite field gf:<p>.
        #[arg(long)]
        field: String,
        /// Dimension s of the subspaces.
        #[arg(long, default_value_t = 1)]
        ext_dim: usize,
        /// Parameter values, e.g. `a=1,b=-2`.
        #[arg(long)]
        params: Option<String>,
        /// Also compare extensions of this many further orbit members with the representative's.
        #[arg(long)]
        soundness: Option<usize>,
    },
    /// Decide or search for an isomorphism A -> B.
    Iso {
        /// `catalog:NAME` or the path of an algebra file.
        source: String,
        /// `catalog:NAME` or the path of an algebra file.
        target: String,
        /// Parameters for the source; a second occurrence applies to the target.
        #[arg(long)]
        params: Vec<String>,
        /// q, gf:<p> or q(w).
        #[arg(long, default_value = "q")]
        field: String,
        /// Loop over all invertible matrices instead of the guided search.
        #[arg(long, conflicts_with = "map")]
        exhaustive: bool,
        /// Candidate map: JSON array of rows of coefficient expressions.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Basis-independent invariants.
    Invariants {
        /// `catalog:NAME` or the path of an algebra file.
        algebra: String,
        /// Parameter values, e.g. `a=1,b=-2`.
        #[arg(long)]
        params: Option<String>,
        /// Also test for non-split one-dimensional extensions.
        #[arg(long)]
        extensions: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VarietyArg {
    Ccd,
    Jordan,
    All,
}

enum Failure {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Output text plus whether every check passed.
struct Outcome {
    text: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Verify { field, samples_from_file: _, no_iso, formulas, points, threads } => {
            verify(cli, field, *no_iso, formulas.as_ref(), *points, *threads)
        }
        Command::Cohomology { algebra, variety, params, field } => {
            let a = resolve(cli, algebra, params.as_deref(), field)?;
            cohomology(cli, &a, *variety)
        }
        Command::Extend { base, cocycle, ext_dim, params, name, field } => {
            let a = resolve(cli, base, params.as_deref(), field)?;
            extend(&a, cocycle, *ext_dim, params.as_deref(), name.as_deref())
        }
        Command::Orbits { algebra, field, ext_dim, params, soundness } => {
            let a = resolve(cli, algebra, params.as_deref(), field)?;
            orbits(cli, &a, *ext_dim, *soundness)
        }
        Command::Iso { source, target, params, field, exhaustive, map } => {
            if params.len() > 2 {
                return Err(Failure::Usage("--params may be given at most twice".into()));
            }
            let source_params = params.first().map(String::as_str);
            let target_params = params.get(1).or(params.first()).map(String::as_str);
            let a = resolve(cli, source, source_params, field)?;
            let b = resolve(cli, target, target_params, field)?;
            iso(cli, &a, &b, map.as_ref(), source_params, *exhaustive)
        }
        Command::Invariants { algebra, params, extensions } => {
            let a = resolve(cli, algebra, params.as_deref(), "q")?;
            invariants(cli, &a, *extensions)
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn parse_params(text: Option<&str>) -> Result<BTreeMap<String, BigRational>, Failure> {
    let mut out = BTreeMap::new();
    let Some(text) = text else { return Ok(out) };
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("parameter `{part}` is not of the form name=value")))?;
        let value = parse_poly(value.trim())?
            .as_constant()
            .ok_or_else(|| Failure::Usage(format!("parameter `{part}` is not a number")))?;
        out.insert(name.trim().to_string(), value);
    }
    Ok(out)
}

fn lookup_entry(cli: &Cli, spec: &str) -> Result<CatalogEntry, Failure> {
    match spec.strip_prefix("catalog:") {
        Some(name) => Ok(load_catalog(&cli.catalog)?.get(name)?.clone()),
        None => Ok(load_entry(spec)?),
    }
}

/// `catalog:NAME` or an algebra file, at the given parameters and field.
fn resolve(cli: &Cli, spec: &str, params: Option<&str>, field: &str) -> Result<Algebra, Failure> {
    let entry = lookup_entry(cli, spec)?;
    let field: Field = field.parse()?;
    let point = parse_params(params)?;
    let names = entry.param_names();
    if let Some(extra) = point.keys().find(|k| !names.contains(k)) {
        return Err(Failure::Usage(format!("{} has no parameter `{extra}`", entry.name)));
    }
    if let Some(missing) = names.iter().find(|n| !point.contains_key(*n)) {
        return Err(Failure::Usage(format!("{} needs --params {missing}=<value>", entry.name)));
    }
    for p in &entry.params {
        if p.excluded.contains(&point[&p.name]) {
            return Err(Failure::Usage(format!("{} = {} is excluded for {}", p.name, point[&p.name], entry.name)));
        }
    }
    Ok(entry.instantiate(field, &point)?)
}

fn verify(
    cli: &Cli,
    field: &str,
    no_iso: bool,
    formulas: Option<&PathBuf>,
    points: usize,
    threads: Option<usize>,
) -> Result<Outcome, Failure> {
    let catalog: Catalog = load_catalog(&cli.catalog)?;
    let mut options = VerifyOptions { field: field.parse()?, iso_exceptions: !no_iso, ..VerifyOptions::default() };
    if let Some(t) = threads {
        options.threads = t;
    }
    let mut report = verify_catalog(&catalog, &options);
    if let Some(path) = formulas {
        for set in load_action_formulas(path, &catalog)? {
            let r = verify_action_formulas(&set.formulas, points, cli.seed)?;
            let witness = r
                .first_mismatch
                .as_ref()
                .map(|m| format!("coordinate a{}: stated {} computed {}", m.index + 1, m.stated, m.computed));
            report.items.push(ReportItem {
                entry: set.name.clone(),
                sample: format!("seed={}", cli.seed),
                check: "action_formulas".into(),
                pass: r.pass,
                witness: witness.or_else(|| {
                    (r.non_automorphisms > 0).then(|| format!("{} non-automorphisms", r.non_automorphisms))
                }),
            });
        }
        report.items.sort();
    }
    let pass = report.all_pass();
    if cli.json {
        return Ok(Outcome { text: json(&report), pass });
    }
    let mut text = String::new();
    for f in report.failures() {
        let _ = writeln!(text, "FAIL {} [{}] {}: {}", f.entry, f.sample, f.check, f.witness.as_deref().unwrap_or(""));
    }
    let failed = report.failures().count();
    let _ = writeln!(
        text,
        "{} checks over {}{}, {} failed",
        report.items.len(),
        report.field,
        if report.heuristic { " (identity checks heuristic in positive characteristic)" } else { "" },
        failed
    );
    Ok(Outcome { text, pass })
}

#[derive(Serialize)]
struct CohomologyOut {
    algebra: String,
    field: String,
    variety: &'static str,
    #[serde(rename = "H2_ccd")]
    h2_ccd: usize,
    #[serde(rename = "H2_j")]
    h2_j: usize,
    z2_dim: usize,
    b2_dim: usize,
    basis: Vec<String>,
}

fn forms(a: &Algebra, space: &SubspaceBasis) -> Vec<BilinearForm> {
    space.vectors().into_iter().map(|v| BilinearForm::from_coeffs(a.dim(), v).expect("delta coordinates")).collect()
}

fn cohomology(cli: &Cli, a: &Algebra, variety: VarietyArg) -> Result<Outcome, Failure> {
    let coh = cohomology_basis(a);
    let b2 = coboundary_space(a);
    let (label, z2_dim, basis) = match variety {
        VarietyArg::Ccd => ("ccd", coh.z2_ccd.dim(), coh.classes()),
        VarietyArg::Jordan => (
            "jordan",
            coh.z2_jordan.dim(),
            coh.jordan_classes.vectors().iter().map(|c| coh.representative(c)).collect(),
        ),
        VarietyArg::All => {
            // Every symmetric form is a cocycle for the commutative variety;
            // classes are the forms outside B², read off a complement.
            let z2 = cocycle_space(a, Variety::SymmetricAll);
            let mut classes = Vec::new();
            let mut span = b2.clone();
            for f in forms(a, &z2) {
                if !span.contains(f.coeffs()) {
                    let mut vs = span.vectors();
                    vs.push(f.coeffs().to_vec());
                    span = SubspaceBasis::span(a.field(), z2.ambient_dim(), &vs)?;
                    classes.push(f);
                }
            }
            ("all", z2.dim(), classes)
        }
    };
    let out = CohomologyOut {
        algebra: a.name().to_string(),
        field: a.field().to_string(),
        variety: label,
        h2_ccd: coh.h2_ccd_dim(),
        h2_j: coh.h2_jordan_dim(),
        z2_dim,
        b2_dim: b2.dim(),
        basis: basis.iter().map(|f| format!("[{f}]")).collect(),
    };
    if cli.json {
        return Ok(Outcome { text: json(&out), pass: true });
    }
    let mut text = format!("{} over {}\nH2_ccd = {}, H2_j = {}\n", out.algebra, out.field, out.h2_ccd, out.h2_j);
    let _ = writeln!(text, "Z2 ({}) dim {}, B2 dim {}", out.variety, out.z2_dim, out.b2_dim);
    let _ = writeln!(text, "basis: {}", if out.basis.is_empty() { "(none)".to_string() } else { out.basis.join(", ") });
    Ok(Outcome { text, pass: true })
}

/// Parses `i,j,coeff;...` with coefficients evaluated at the parameters.
fn parse_component(text: &str, a: &Algebra, point: &BTreeMap<String, BigRational>) -> Result<BilinearForm, Failure> {
    let field = a.field();
    let values: BTreeMap<String, FieldElement> =
        point.iter().map(|(k, v)| Ok((k.clone(), field.from_rational(v)?))).collect::<Result<_, Failure>>()?;
    let mut terms = Vec::new();
    for term in text.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let mut parts = term.splitn(3, ',');
        let mut index = || -> Result<usize, Failure> {
            let t = parts.next().ok_or_else(|| Failure::Usage(format!("cocycle term `{term}` needs i,j,coeff")))?;
            let i: usize = t.trim().parse().map_err(|_| Failure::Usage(format!("bad index in `{term}`")))?;
            if i == 0 || i > a.dim() {
                return Err(Failure::Usage(format!("index {i} out of range in `{term}`")));
            }
            Ok(i - 1)
        };
        let (i, j) = (index()?, index()?);
        let coeff = parts.next().unwrap_or("1").trim();
        let value = parse_poly(coeff)?.evaluate(field, &values)?;
        terms.push((i, j, value));
    }
    Ok(BilinearForm::from_terms(field, a.dim(), terms)?)
}

fn extend(
    a: &Algebra,
    components: &[String],
    ext_dim: Option<usize>,
    params: Option<&str>,
    name: Option<&str>,
) -> Result<Outcome, Failure> {
    if let Some(s) = ext_dim {
        if s != components.len() {
            return Err(Failure::Usage(format!("--ext-dim {s} but {} --cocycle components", components.len())));
        }
    }
    let point = parse_params(params)?;
    let theta = Cocycle::new(components.iter().map(|c| parse_component(c, a, &point)).collect::<Result<_, _>>()?);
    let mut ext = central_extension(a, &theta)?;
    if let Some(n) = name {
        ext = ext.with_name(n);
    }
    let provenance = format!("central extension of {} by {}", a.name(), theta);
    Ok(Outcome { text: json(&entry_json(&ext, &provenance)), pass: true })
}

fn orbits(cli: &Cli, a: &Algebra, s: usize, soundness: Option<usize>) -> Result<Outcome, Failure> {
    if !matches!(a.field(), Field::Prime(_)) {
        return Err(Failure::Usage("orbits needs --field gf:<p>".into()));
    }
    let report = orbit_partition(a, s)?;
    let sound = match soundness {
        Some(k) => Some(orbit_extension_soundness(a, &report, k)?),
        None => None,
    };
    let pass = report.orbit_stabilizer_ok
        && report.split_is_union_of_orbits
        && sound.as_ref().is_none_or(|v| v.iter().all(|&b| b));
    if cli.json {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            report: &'a ccd_core::orbits::OrbitReport,
            soundness: Option<Vec<bool>>,
        }
        return Ok(Outcome { text: json(&Out { report: &report, soundness: sound }), pass });
    }
    let mut text = format!(
        "{} over {}: H2 dim {}, |Aut| = {}, {} of {} subspaces of dim {} in T_{}\n",
        report.algebra,
        report.field,
        report.h2_dim,
        report.automorphism_count,
        report.ts_size,
        report.grassmannian_size,
        s,
        s
    );
    for (i, o) in report.orbits.iter().enumerate() {
        let rows: Vec<String> = o.representative.rows.iter().map(|r| format!("{r:?}")).collect();
        let _ = write!(
            text,
            "orbit {}: size {}, stabilizer {}, {:?}, representative {}",
            i + 1,
            o.size,
            o.stabilizer,
            o.jordan_split,
            rows.join(" ")
        );
        if let Some(v) = &sound {
            let _ = write!(text, ", extensions agree: {}", v[i]);
        }
        text.push('\n');
    }
    let _ = writeln!(
        text,
        "orbit-stabilizer: {}, R/U split by orbits: {}",
        report.orbit_stabilizer_ok, report.split_is_union_of_orbits
    );
    Ok(Outcome { text, pass })
}

fn iso(
    cli: &Cli,
    a: &Algebra,
    b: &Algebra,
    map: Option<&PathBuf>,
    params: Option<&str>,
    exhaustive: bool,
) -> Result<Outcome, Failure> {
    let report: IsoReport = match map {
        Some(path) => {
            let point = parse_params(params)?;
            let names: Vec<String> = point.keys().cloned().collect();
            let rows = parse_matrix(&std::fs::read_to_string(path)?, &names)?;
            let field = a.field();
            let values: BTreeMap<String, FieldElement> =
                point.iter().map(|(k, v)| Ok((k.clone(), field.from_rational(v)?))).collect::<Result<_, Failure>>()?;
            let evaluated = rows
                .iter()
                .map(|r| r.iter().map(|e| e.evaluate(field, &values)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            check_candidate(a, b, &Matrix::from_rows(field, evaluated)?)
        }
        None => {
            if !matches!(a.field(), Field::Prime(_)) {
                return Err(Failure::Usage("searching needs --field gf:<p>; over Q supply --map".into()));
            }
            let mode = if exhaustive { SearchMode::Exhaustive } else { SearchMode::Guided };
            iso_search(a, b, mode)?
        }
    };
    let pass = report.found && (map.is_some() || report.rechecked);
    if cli.json {
        return Ok(Outcome { text: json(&report), pass });
    }
    let evidence = match &report.evidence {
        ccd_core::iso::Evidence::ExactCandidate => "supplied map checked exactly".to_string(),
        ccd_core::iso::Evidence::SymbolicCandidate => "supplied map checked symbolically".to_string(),
        ccd_core::iso::Evidence::FiniteFieldSearch { mode, nodes } => {
            format!("finite-field search evidence ({mode:?}, {nodes} nodes)")
        }
    };
    let verdict = if report.found {
        "isomorphic"
    } else if map.is_some() {
        "map is not an isomorphism"
    } else {
        "no isomorphism"
    };
    let mut text = format!("{} -> {} over {}: {verdict} [{evidence}]\n", report.source, report.target, report.field);
    if let Some(m) = &report.map {
        for (j, col) in m.iter().enumerate() {
            let _ = writeln!(text, "  e{} -> ({})", j + 1, col.join(", "));
        }
    }
    Ok(Outcome { text, pass })
}

fn invariants(cli: &Cli, a: &Algebra, extensions: bool) -> Result<Outcome, Failure> {
    let fp = fingerprint(a)?;
    let trivial = if extensions { Some(trivial_extension_check(a)?) } else { None };
    if cli.json {
        #[derive(Serialize)]
        struct Out<'a> {
            algebra: &'a str,
            fingerprint: &'a ccd_core::fingerprint::Fingerprint,
            #[serde(skip_serializing_if = "Option::is_none")]
            extensions: Option<&'a ccd_core::catalog::TrivialExtensionReport>,
        }
        let out = Out { algebra: a.name(), fingerprint: &fp, extensions: trivial.as_ref() };
        return Ok(Outcome { text: json(&out), pass: true });
    }
    let mut text = format!("{}\n", a.name());
    let index = a.nilpotency_index().map_or("none".to_string(), |k| k.to_string());
    let _ = writeln!(text, "dim {}, filtration {:?}, nilpotency index {index}", fp.dim, fp.filtration_dims);
    let _ = writeln!(
        text,
        "annihilator {}, square {}, annihilator in powers {:?}",
        fp.annihilator_dim, fp.square_dim, fp.annihilator_in_powers
    );
    let _ = writeln!(text, "second annihilator {}, derivations {}", fp.second_annihilator_dim, fp.derivation_dim);
    let _ = writeln!(
        text,
        "Z2_ccd {}, H2_ccd {}, Jordan {}, almost-Jordan {}",
        fp.z2_ccd_dim, fp.h2_ccd_dim, fp.jordan, fp.almost_jordan
    );
    let _ = writeln!(text, "generic ranks {:?}", fp.generic_ranks);
    if let Some(t) = &trivial {
        let _ = writeln!(
            text,
            "non-split extensions: {}",
            if t.proven_trivial {
                "none".to_string()
            } else {
                format!("exist, e.g. {}", t.witness.as_deref().unwrap_or("?"))
            }
        );
    }
    Ok(Outcome { text, pass: true })
}
