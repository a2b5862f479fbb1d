//! The built-in algebras, shipped as data files and re-validated at load.

use super::{load, MLattice, Profile};

/// Catalog names in canonical order.
pub const CATALOG_NAMES: [&str; 6] = ["2-chain", "godel3", "l3m", "diamond", "ba4", "sugihara3"];

const FILES: [(&str, &str); 6] = [
    ("2-chain", include_str!("../../catalog/2-chain.json")),
    ("godel3", include_str!("../../catalog/godel3.json")),
    ("l3m", include_str!("../../catalog/l3m.json")),
    ("diamond", include_str!("../../catalog/diamond.json")),
    ("ba4", include_str!("../../catalog/ba4.json")),
    ("sugihara3", include_str!("../../catalog/sugihara3.json")),
];

/// One catalog member with the profile it is validated under. Members
/// without shipped modal tables carry identity modalities.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub profile: Profile,
    pub algebra: MLattice,
    /// Whether the data file ships its own `box` and `dia` tables.
    pub modal: bool,
}

fn entry(name: &'static str, text: &str) -> CatalogEntry {
    let v: serde_json::Value = serde_json::from_str(text).expect("catalog files are valid JSON");
    let modal = v.get("box").is_some();
    let fle = v["signature"].as_array().is_some_and(|s| s.len() > 2);
    let profile = match (modal, fle) {
        (true, true) => Profile::MFle,
        (true, false) => Profile::MLat,
        (false, true) => Profile::Fle,
        (false, false) => Profile::Lat,
    };
    let algebra = load(text, profile).unwrap_or_else(|e| panic!("catalog algebra `{name}` fails validation: {e}"));
    CatalogEntry { name, profile, algebra, modal }
}

/// Every catalog member, validated, in canonical order.
pub fn catalog() -> Vec<CatalogEntry> {
    FILES.iter().map(|(name, text)| entry(name, text)).collect()
}

/// A catalog member by name.
pub fn catalog_entry(name: &str) -> Option<CatalogEntry> {
    FILES.iter().find(|(n, _)| *n == name).map(|(n, text)| entry(n, text))
}
