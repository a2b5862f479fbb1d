//! Countermodel search for equations over a bounded family of m-lattices.

use std::str::FromStr;

use super::{catalog, eval_all, expansions, functional_power, small_lattices, AlgError, Equation, MLattice, Outcome};

/// Which m-lattices to scan, in this order: for each catalog member its
/// shipped modal tables and then all of its expansions, then every expansion
/// of every lattice up to `lattices` elements, then functional powers of the
/// catalog members up to exponent `powers`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scope {
    pub catalog: bool,
    pub expansions: bool,
    pub lattices: usize,
    pub powers: usize,
}

impl Default for Scope {
    fn default() -> Self {
        Scope { catalog: true, expansions: true, lattices: 0, powers: 0 }
    }
}

impl FromStr for Scope {
    type Err = String;

    /// A comma-separated list of `catalog`, `expansions`, `lattices:N` and
    /// `powers:W`, or `default`.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut scope = Scope { catalog: false, expansions: false, lattices: 0, powers: 0 };
        for part in s.split(',').map(str::trim) {
            let bound = |v: &str| v.parse::<usize>().map_err(|_| format!("bad bound in `{part}`"));
            match part.split_once(':') {
                None if part == "default" => {
                    scope.catalog = true;
                    scope.expansions = true;
                }
                None if part == "catalog" => scope.catalog = true,
                None if part == "expansions" => scope.expansions = true,
                Some(("lattices", v)) => scope.lattices = bound(v)?,
                Some(("powers", v)) => scope.powers = bound(v)?,
                _ => return Err(format!("unknown scope `{part}`")),
            }
        }
        Ok(scope)
    }
}

impl Scope {
    /// The m-lattices in scan order.
    pub fn members(&self) -> Result<Vec<MLattice>, AlgError> {
        let mut out = Vec::new();
        let cat = catalog();
        for entry in &cat {
            if self.catalog && entry.modal {
                out.push(entry.algebra.clone());
            }
            if self.expansions {
                out.extend(expansions(&entry.algebra.base)?);
            }
        }
        if self.lattices > 0 {
            for lat in small_lattices(self.lattices) {
                out.extend(expansions(&lat)?);
            }
        }
        for w in 2..=self.powers {
            for entry in &cat {
                out.push(functional_power(&entry.algebra.base, w)?);
            }
        }
        Ok(out)
    }
}

/// The first failing m-lattice with its assignment.
#[derive(Clone, Debug)]
pub struct Hit {
    pub algebra: MLattice,
    pub vars: Vec<u32>,
    pub values: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

/// Scans the scope in order. Members whose signature lacks a symbol of the
/// equation are skipped; if every member is skipped the signature error is
/// returned.
pub fn countermodel_search(eq: &Equation, scope: &Scope, cap: usize) -> Result<Option<Hit>, AlgError> {
    let mut last_sig_error = None;
    let mut applicable = false;
    for m in scope.members()? {
        match eval_all(&m, eq, cap) {
            Ok(Outcome::Holds) => applicable = true,
            Ok(Outcome::Fails { vars, values, lhs, rhs }) => return Ok(Some(Hit { algebra: m, vars, values, lhs, rhs })),
            Err(e @ AlgError::Signature(_)) => last_sig_error = Some(e),
            Err(e) => return Err(e),
        }
    }
    match last_sig_error {
        Some(e) if !applicable => Err(e),
        _ => Ok(None),
    }
}
