//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use onevar::algebra::{catalog, Algebra};
use onevar::proof::CalculusConfig;

/// One-variable theorems with the calculus each is provable in.
pub const THEOREMS: &[(&str, &str)] = &[
    // Quantifier laws: L1 to L4 and the star conditions, read as sequents.
    ("forall x P0(x) |- exists x P0(x)", "fle"),
    ("forall x P0(x) |- P0(x)", "fle"),
    ("P0(x) |- exists x P0(x)", "fle"),
    ("forall x (P0(x) & P1(x)) |- forall x P0(x) & forall x P1(x)", "fle"),
    ("forall x P0(x) & forall x P1(x) |- forall x (P0(x) & P1(x))", "fle"),
    ("exists x (P0(x) | P1(x)) |- exists x P0(x) | exists x P1(x)", "fle"),
    ("exists x P0(x) | exists x P1(x) |- exists x (P0(x) | P1(x))", "fle"),
    ("forall x exists x P0(x) |- exists x P0(x)", "fle"),
    ("exists x P0(x) |- forall x exists x P0(x)", "fle"),
    ("exists x forall x P0(x) |- forall x P0(x)", "fle"),
    ("forall x P0(x) |- exists x forall x P0(x)", "fle"),
    ("forall x forall x P0(x) |- forall x P0(x)", "fle"),
    ("exists x exists x P0(x) |- exists x P0(x)", "fle"),
    ("forall x (forall x P0(x) * forall x P1(x)) |- forall x P0(x) * forall x P1(x)", "fle"),
    ("forall x P0(x) * forall x P1(x) |- forall x (forall x P0(x) * forall x P1(x))", "fle"),
    ("forall x (forall x P0(x) -> forall x P1(x)) |- forall x P0(x) -> forall x P1(x)", "fle"),
    ("exists x (exists x P0(x) * exists x P1(x)) |- exists x P0(x) * exists x P1(x)", "fle"),
    ("forall x e |- e", "fle"),
    ("e |- forall x e", "fle"),
    // Both L6 directions.
    ("forall x (P0(x) -> forall x P1(x)) |- exists x P0(x) -> forall x P1(x)", "fle"),
    ("exists x P0(x) -> forall x P1(x) |- forall x (P0(x) -> forall x P1(x))", "fle"),
    ("forall x (forall x P0(x) -> P1(x)) |- forall x P0(x) -> forall x P1(x)", "fle"),
    ("forall x P0(x) -> forall x P1(x) |- forall x (forall x P0(x) -> P1(x))", "fle"),
    // Mixed quantifier and propositional structure.
    ("exists x (P0(x) * forall x P1(x)) |- exists x P0(x) * forall x P1(x)", "fle"),
    ("exists x P0(x) * forall x P1(x) |- exists x (P0(x) * forall x P1(x))", "fle"),
    ("forall x (P0(x) -> P1(x)), forall x P0(x) |- forall x P1(x)", "fle"),
    ("forall x (P0(x) -> P1(x)), exists x P0(x) |- exists x P1(x)", "fle"),
    ("exists x (P0(x) & P1(x)) |- exists x P0(x) & exists x P1(x)", "fle"),
    ("forall x P0(x) | forall x P1(x) |- forall x (P0(x) | P1(x))", "fle"),
    ("exists x (P0(x) * P1(x)) |- exists x P0(x) * exists x P1(x)", "fle"),
    ("forall x P0(x) * forall x P1(x) |- forall x (P0(x) * P1(x))", "fle"),
    // Propositional.
    ("P0(x) * P1(x) |- P1(x) * P0(x)", "fle"),
    ("P0(x) -> P1(x), P0(x) |- P1(x)", "fle"),
    ("P0(x) * P1(x) -> P2(x) |- P0(x) -> P1(x) -> P2(x)", "fle"),
    ("P0(x) -> P1(x) -> P2(x) |- P0(x) * P1(x) -> P2(x)", "fle"),
    ("P0(x) & P1(x) |- P1(x) & P0(x)", "fle"),
    ("P0(x) | P1(x) |- P1(x) | P0(x)", "fle"),
    ("|- P0(x) -> P0(x)", "fle"),
    ("P0(x), e |- P0(x)", "fle"),
    ("f |- f", "fle"),
    // Extensions.
    ("P0(x) |- P0(x) * P0(x)", "flec"),
    ("P0(x) -> P0(x) -> P1(x) |- P0(x) -> P1(x)", "flec"),
    ("forall x P0(x) |- forall x P0(x) * forall x P0(x)", "flec"),
    ("P0(x), P1(x) |- P0(x)", "flew"),
    ("P0(x) * P1(x) |- P0(x) & P1(x)", "flew"),
    ("f |- P0(x)", "flew"),
    ("forall x P0(x) |- P1(x) -> forall x P0(x)", "flew"),
    ("P0(x) & P1(x) |- P0(x) * P1(x)", "flewc"),
];

pub fn config(name: &str) -> CalculusConfig {
    CalculusConfig::preset(name).expect("known preset")
}

/// Catalog algebras (identity modalities dropped) whose algebraic
/// conditions match the structural rules of `cfg`.
pub fn matching_algebras(cfg: &CalculusConfig) -> Vec<Algebra> {
    catalog()
        .into_iter()
        .map(|e| e.algebra.base)
        .filter(|a| a.signature().has_fle())
        .filter(|a| !cfg.weakening_left || a.integral())
        .filter(|a| !cfg.weakening_right || a.f_is_bottom())
        .filter(|a| cfg.contraction.iter().all(|&k| a.contracts(k)))
        .collect()
}

/// Rule names a corpus is expected to exercise.
pub fn all_fo_rule_names() -> BTreeSet<&'static str> {
    [
        "id", "f=>", "=>e", "e=>", "=>f", "->=>", "=>->", "*=>", "=>*", "&=>1", "&=>2", "=>&", "|=>", "=>|1", "=>|2", "forall=>", "=>forall",
        "exists=>", "=>exists", "contract", "weak-left", "weak-right",
    ]
    .into_iter()
    .collect()
}
