//! Oracle fixtures: committed JSON produced once by an independent
//! computer-algebra system. Comparisons are by group invariants only.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfield::{AlgebraicNum, NumberField};

/// One row of the quadratic table.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct QuadraticRow {
    pub poly: String,
    pub d: i64,
    pub ell: u64,
    pub class_number: u64,
    pub class_group: Vec<u64>,
    /// Invariants `l^a` of the torsion of the logarithmic class group.
    pub log_torsion: Vec<u64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct QuadraticTable {
    pub provenance: String,
    pub rows: Vec<QuadraticRow>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct BaseData {
    pub poly: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct TorsionUnit {
    pub order: u64,
    pub generator: Vec<String>,
}

/// Data of the extension field. Elements are power-basis coordinates.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ExtData {
    pub poly: String,
    pub class_number: Option<u64>,
    pub class_group: Option<Vec<u64>>,
    pub signature: Option<(usize, usize)>,
    pub units: Option<Vec<Vec<String>>>,
    pub torsion_unit: Option<TorsionUnit>,
    /// Rational primes below the places of `T_L`.
    pub s_primes: Option<Vec<u64>>,
    pub s_units: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct Expected {
    pub base_class_group: Vec<u64>,
    pub base_log_torsion: Vec<u64>,
    pub ext_log_torsion: Vec<u64>,
    pub log_unramified: bool,
    pub verdicts: Vec<String>,
    pub kernel_order: u64,
    /// Rational prime -> `e~(P/p)` for the pairs above it.
    pub e_tilde: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ExtensionFixture {
    pub name: String,
    pub provenance: String,
    pub ell: u64,
    pub base: BaseData,
    pub ext: ExtData,
    /// Image of the generator of the base in power-basis coordinates of
    /// the extension.
    pub embedding: Vec<String>,
    pub expected: Option<Expected>,
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read fixture {}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("malformed fixture {}: {}", path.display(), e)))
}

pub fn load_quadratic(path: &Path) -> Result<QuadraticTable> {
    read(path)
}

pub fn load_extension(path: &Path) -> Result<ExtensionFixture> {
    read(path)
}

/// Every `ext_*.json` in `dir`, sorted by file name.
pub fn load_extensions(dir: &Path) -> Result<Vec<ExtensionFixture>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Invalid(format!("{}: {}", dir.display(), e)))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("ext_") && n.ends_with(".json"))
        })
        .collect();
    paths.sort();
    paths.iter().map(|p| load_extension(p)).collect()
}

/// Parses power-basis coordinates into an element of `k`.
pub fn element(k: &NumberField, coords: &[String]) -> Result<AlgebraicNum> {
    if coords.len() != k.degree() {
        return Err(Error::Invalid(format!("{} coordinates for a field of degree {}", coords.len(), k.degree())));
    }
    let q: Vec<BigRational> = coords
        .iter()
        .map(|s| s.trim().parse::<BigRational>().map_err(|_| Error::Invalid(format!("bad rational {:?}", s))))
        .collect::<Result<_>>()?;
    Ok(k.from_power_basis(&q))
}

/// The committed fixture directory of this crate.
pub fn default_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}
