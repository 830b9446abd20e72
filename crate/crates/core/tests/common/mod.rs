#![allow(dead_code)]

pub mod oracles;
pub mod props;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use ccd_core::algebra::Algebra;
use ccd_core::catalog::{load_action_formulas, load_catalog, Catalog, CatalogEntry, NamedFormulas};
use ccd_core::field::Field;
use num_rational::BigRational;

pub const CATALOG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/catalog.json");
pub const FORMULAS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/action_formulas.json");
pub const SIGN_MAP: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/maps/c513_sign.json");

pub fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| load_catalog(CATALOG).expect("catalog loads"))
}

pub fn formulas() -> &'static [NamedFormulas] {
    static F: OnceLock<Vec<NamedFormulas>> = OnceLock::new();
    F.get_or_init(|| load_action_formulas(FORMULAS, catalog()).expect("action formulas load"))
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// A parameter-free catalog algebra over Q.
pub fn fixed(name: &str) -> Algebra {
    catalog().get(name).unwrap().instantiate(Field::Rational, &BTreeMap::new()).unwrap()
}

/// Cycles through a list of small integers.
pub struct Draws {
    values: Vec<i64>,
    at: usize,
}

impl Draws {
    pub fn new(values: Vec<i64>) -> Self {
        assert!(!values.is_empty());
        Draws { values, at: 0 }
    }

    pub fn next(&mut self) -> i64 {
        let v = self.values[self.at % self.values.len()];
        self.at += 1;
        v
    }
}

/// The entry at an integer parameter point, skipping excluded values.
pub fn draw_algebra(entry: &CatalogEntry, draws: &mut Draws) -> Algebra {
    let mut point = BTreeMap::new();
    for p in &entry.params {
        let mut v = draws.next();
        while p.excluded.contains(&q(v)) {
            v += 1;
        }
        point.insert(p.name.clone(), q(v));
    }
    entry.instantiate(Field::Rational, &point).unwrap()
}
