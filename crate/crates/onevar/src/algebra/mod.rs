//! Finite lattice-ordered algebras and their modal expansions.
//!
//! An [`Algebra`] is a carrier `0..n` with one table per signature symbol.
//! Validation is exhaustive: every defining condition of the requested
//! [`Profile`] is checked and the first failing tuple in lexicographic order
//! is reported. An [`MLattice`] adds unary `box` and `dia` tables.

mod catalog;
mod hunt;
mod lattices;
mod power;
mod relcomplete;
mod term;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::error::Code;

pub use catalog::{catalog, catalog_entry, CatalogEntry, CATALOG_NAMES};
pub use hunt::{countermodel_search, Hit, Scope};
pub use lattices::small_lattices;
pub use power::functional_power;
pub use relcomplete::{box_image, expand_from_subalgebra, expansions, relatively_complete_subalgebras, subuniverses, Subset};
pub use term::{builtin, builtin_names, eval_all, eval_single, eval_term, parse_equation, parse_term, star_law, Equation, Outcome, Rel, Single, Term, DEFAULT_CAP};

/// An operation symbol with its arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpSpec {
    pub name: String,
    pub arity: usize,
}

/// A lattice-oriented signature: a list of operation symbols that contains
/// binary `and` and `or`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    ops: Vec<OpSpec>,
}

impl Signature {
    /// Builds a signature, rejecting duplicate names or a missing lattice pair.
    pub fn new(ops: Vec<OpSpec>) -> Result<Self, AlgError> {
        for (i, op) in ops.iter().enumerate() {
            if ops[..i].iter().any(|o| o.name == op.name) {
                return Err(AlgError::Signature(format!("duplicate symbol `{}`", op.name)));
            }
            if op.name == "box" || op.name == "dia" {
                return Err(AlgError::Signature(format!("`{}` is reserved for the modalities", op.name)));
            }
        }
        let sig = Signature { ops };
        for name in ["and", "or"] {
            match sig.index(name) {
                Some(i) if sig.ops[i].arity == 2 => {}
                _ => return Err(AlgError::Signature(format!("signature needs a binary `{name}`"))),
            }
        }
        Ok(sig)
    }

    fn of(list: &[(&str, usize)]) -> Self {
        let ops = list.iter().map(|&(name, arity)| OpSpec { name: name.into(), arity }).collect();
        Signature::new(ops).expect("built-in signatures are well formed")
    }

    /// The pure lattice signature `{and, or}`.
    pub fn lat() -> Self {
        Signature::of(&[("and", 2), ("or", 2)])
    }

    /// The signature of pointed commutative residuated lattices.
    pub fn fle() -> Self {
        Signature::of(&[("and", 2), ("or", 2), ("mul", 2), ("imp", 2), ("e", 0), ("f", 0)])
    }

    pub fn ops(&self) -> &[OpSpec] {
        &self.ops
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    /// Whether every symbol of the FLE signature is present with its arity.
    pub fn has_fle(&self) -> bool {
        Signature::fle().ops.iter().all(|o| self.index(&o.name).is_some_and(|i| self.ops[i].arity == o.arity))
    }
}

/// Which defining conditions to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Lat,
    Fle,
    MLat,
    MFle,
}

impl Profile {
    pub fn modal(self) -> bool {
        matches!(self, Profile::MLat | Profile::MFle)
    }

    pub fn fle(self) -> bool {
        matches!(self, Profile::Fle | Profile::MFle)
    }
}

impl std::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "LAT" => Ok(Profile::Lat),
            "FLE" => Ok(Profile::Fle),
            "M-LAT" | "MLAT" => Ok(Profile::MLat),
            "M-FLE" | "MFLE" => Ok(Profile::MFle),
            _ => Err(format!("unknown profile `{s}` (expected LAT, FLE, M-LAT or M-FLE)")),
        }
    }
}

/// Failures of the algebra layer.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AlgError {
    #[error("condition `{condition}` fails at ({})", witness.join(", "))]
    Violation { condition: String, witness: Vec<String> },
    #[error("{0}")]
    Signature(String),
    #[error("{0}")]
    NotRelComplete(String),
    #[error("{0}")]
    Cap(String),
    #[error("malformed algebra: {0}")]
    Format(String),
    #[error(transparent)]
    Syntax(#[from] crate::syntax::SyntaxError),
}

impl AlgError {
    pub fn code(&self) -> Code {
        match self {
            AlgError::Violation { .. } => Code::Violation,
            AlgError::Signature(_) => Code::Signature,
            AlgError::NotRelComplete(_) => Code::NotRelComplete,
            AlgError::Cap(_) => Code::Cap,
            AlgError::Format(_) => Code::Schema,
            AlgError::Syntax(e) => e.code(),
        }
    }
}

/// The first failing instance of a named condition, as element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: String,
    pub witness: Vec<usize>,
}

/// A table of an operation of arity `k`, stored flat in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    arity: usize,
    data: Vec<usize>,
}

impl Table {
    pub fn new(arity: usize, data: Vec<usize>) -> Self {
        Table { arity, data }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn data(&self) -> &[usize] {
        &self.data
    }

    fn get(&self, n: usize, args: &[usize]) -> usize {
        self.data[args.iter().fold(0, |acc, &a| acc * n + a)]
    }
}

/// A finite algebra over a lattice-oriented signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub name: String,
    size: usize,
    labels: Vec<String>,
    sig: Signature,
    tables: Vec<Table>,
    and: usize,
    or: usize,
}

/// Calls `f` on every tuple in `0..n` of length `k` in lexicographic order,
/// stopping at the first tuple where it returns false.
pub(crate) fn first_failure(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    let mut t = vec![0; k];
    if n == 0 && k > 0 {
        return None;
    }
    loop {
        if !f(&t) {
            return Some(t);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

impl Algebra {
    /// Assembles an algebra, checking only that every table is total over
    /// the carrier. Use [`Algebra::validate`] for the algebraic conditions.
    pub fn new(name: impl Into<String>, size: usize, labels: Option<Vec<String>>, sig: Signature, tables: Vec<Table>) -> Result<Self, AlgError> {
        if size == 0 {
            return Err(AlgError::Format("the carrier must be non-empty".into()));
        }
        if tables.len() != sig.ops.len() {
            return Err(AlgError::Format(format!("{} tables for {} symbols", tables.len(), sig.ops.len())));
        }
        for (op, t) in sig.ops.iter().zip(&tables) {
            let want = size.checked_pow(op.arity as u32).ok_or_else(|| AlgError::Cap(format!("table of `{}` is too large", op.name)))?;
            if t.arity != op.arity || t.data.len() != want {
                return Err(AlgError::Format(format!("table of `{}` has the wrong shape", op.name)));
            }
            if let Some(&bad) = t.data.iter().find(|&&v| v >= size) {
                return Err(AlgError::Format(format!("table of `{}` contains {bad}, outside the carrier", op.name)));
            }
        }
        let labels = labels.unwrap_or_else(|| (0..size).map(|i| i.to_string()).collect());
        if labels.len() != size {
            return Err(AlgError::Format(format!("{} labels for {size} elements", labels.len())));
        }
        let and = sig.index("and").expect("signature invariant");
        let or = sig.index("or").expect("signature invariant");
        Ok(Algebra { name: name.into(), size, labels, sig, tables, and, or })
    }

    /// Builds an algebra by computing every table from a function.
    pub fn from_fn(name: impl Into<String>, size: usize, labels: Option<Vec<String>>, sig: Signature, f: impl Fn(&str, &[usize]) -> usize) -> Result<Self, AlgError> {
        let mut tables = Vec::new();
        for op in sig.ops() {
            let mut data = Vec::new();
            let mut args = vec![0; op.arity];
            first_failure(size, op.arity, |t| {
                args.copy_from_slice(t);
                data.push(f(&op.name, &args));
                true
            });
            tables.push(Table::new(op.arity, data));
        }
        Algebra::new(name, size, labels, sig, tables)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Looks up an element by its label.
    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Applies the operation with signature index `op`.
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.tables[op].get(self.size, args)
    }

    /// Applies an operation by name.
    pub fn op(&self, name: &str, args: &[usize]) -> Option<usize> {
        self.sig.index(name).map(|i| self.apply(i, args))
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.tables[self.and].data[a * self.size + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.tables[self.or].data[a * self.size + b]
    }

    /// The derived order `a <= b` iff `a & b = a`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    /// Meet of a non-empty list.
    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> Option<usize> {
        xs.into_iter().reduce(|a, b| self.meet(a, b))
    }

    /// Join of a non-empty list.
    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> Option<usize> {
        xs.into_iter().reduce(|a, b| self.join(a, b))
    }

    /// Least and greatest elements.
    pub fn bottom(&self) -> usize {
        self.meet_all(0..self.size).expect("non-empty carrier")
    }

    pub fn top(&self) -> usize {
        self.join_all(0..self.size).expect("non-empty carrier")
    }

    fn fail(&self, v: Violation) -> AlgError {
        AlgError::Violation { condition: v.condition, witness: v.witness.iter().map(|&a| self.labels[a].clone()).collect() }
    }

    /// The first violated lattice condition, if any.
    pub fn lattice_violation(&self) -> Option<Violation> {
        let n = self.size;
        let (m, j) = (|a, b| self.meet(a, b), |a, b| self.join(a, b));
        let checks: [(&str, usize, &dyn Fn(&[usize]) -> bool); 8] = [
            ("and-idempotent", 1, &|t| m(t[0], t[0]) == t[0]),
            ("or-idempotent", 1, &|t| j(t[0], t[0]) == t[0]),
            ("and-commutative", 2, &|t| m(t[0], t[1]) == m(t[1], t[0])),
            ("or-commutative", 2, &|t| j(t[0], t[1]) == j(t[1], t[0])),
            ("and-associative", 3, &|t| m(m(t[0], t[1]), t[2]) == m(t[0], m(t[1], t[2]))),
            ("or-associative", 3, &|t| j(j(t[0], t[1]), t[2]) == j(t[0], j(t[1], t[2]))),
            ("absorption-and-or", 2, &|t| m(t[0], j(t[0], t[1])) == t[0]),
            ("absorption-or-and", 2, &|t| j(t[0], m(t[0], t[1])) == t[0]),
        ];
        checks.iter().find_map(|(name, k, f)| first_failure(n, *k, f).map(|w| Violation { condition: (*name).into(), witness: w }))
    }

    /// The first violated residuated-lattice condition, assuming the lattice
    /// conditions hold.
    pub fn fle_violation(&self) -> Result<Option<Violation>, AlgError> {
        if !self.sig.has_fle() {
            return Err(AlgError::Signature(format!("`{}` lacks the FLE symbols mul, imp, e, f", self.name)));
        }
        let idx = |s| self.sig.index(s).expect("checked above");
        let (mul, imp, e) = (idx("mul"), idx("imp"), self.apply(idx("e"), &[]));
        let p = |a, b| self.apply(mul, &[a, b]);
        let r = |a, b| self.apply(imp, &[a, b]);
        let checks: [(&str, usize, &dyn Fn(&[usize]) -> bool); 4] = [
            ("mul-commutative", 2, &|t| p(t[0], t[1]) == p(t[1], t[0])),
            ("mul-associative", 3, &|t| p(p(t[0], t[1]), t[2]) == p(t[0], p(t[1], t[2]))),
            ("mul-identity", 1, &|t| p(t[0], e) == t[0]),
            // Tuples are (b, c, a): a * b <= c iff a <= b -> c.
            ("residuation", 3, &|t| self.le(p(t[2], t[0]), t[1]) == self.le(t[2], r(t[0], t[1]))),
        ];
        Ok(checks.iter().find_map(|(name, k, f)| first_failure(self.size, *k, f).map(|w| Violation { condition: (*name).into(), witness: w })))
    }

    /// Checks the lattice conditions and, for `fle`, the residuated ones.
    pub fn validate(&self, fle: bool) -> Result<(), AlgError> {
        if let Some(v) = self.lattice_violation() {
            return Err(self.fail(v));
        }
        if fle {
            if let Some(v) = self.fle_violation()? {
                return Err(self.fail(v));
            }
        }
        Ok(())
    }

    /// Whether `e` is the top element.
    pub fn integral(&self) -> bool {
        self.op("e", &[]) == Some(self.top())
    }

    /// Whether `f` is the bottom element.
    pub fn f_is_bottom(&self) -> bool {
        self.op("f", &[]) == Some(self.bottom())
    }

    /// Whether `a <= a^k` for every element, the algebraic form of `k`-ary
    /// contraction.
    pub fn contracts(&self, k: u32) -> bool {
        let Some(mul) = self.sig.index("mul") else { return false };
        (0..self.size).all(|a| {
            let pow = (1..k).fold(a, |acc, _| self.apply(mul, &[acc, a]));
            self.le(a, pow)
        })
    }

    /// Decodes the JSON file format.
    pub fn from_json(v: &Value) -> Result<(Self, Option<(Vec<usize>, Vec<usize>)>), AlgError> {
        let bad = |m: &str| AlgError::Format(m.to_string());
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        for key in obj.keys() {
            if !["name", "labels", "signature", "size", "tables", "box", "dia"].contains(&key.as_str()) {
                return Err(AlgError::Format(format!("unknown key `{key}`")));
            }
        }
        let sig: Vec<OpSpec> = serde_json::from_value(obj.get("signature").cloned().ok_or_else(|| bad("missing `signature`"))?)
            .map_err(|e| AlgError::Format(format!("bad signature: {e}")))?;
        let sig = Signature::new(sig)?;
        let size = obj.get("size").and_then(Value::as_u64).ok_or_else(|| bad("missing or non-integer `size`"))? as usize;
        let name = obj.get("name").and_then(Value::as_str).unwrap_or("algebra").to_string();
        let labels = match obj.get("labels") {
            None => None,
            Some(l) => Some(serde_json::from_value::<Vec<String>>(l.clone()).map_err(|e| AlgError::Format(format!("bad labels: {e}")))?),
        };
        let tables_obj = obj.get("tables").and_then(Value::as_object).ok_or_else(|| bad("missing `tables` object"))?;
        for key in tables_obj.keys() {
            if sig.index(key).is_none() {
                return Err(AlgError::Signature(format!("table for `{key}`, which is not in the signature")));
            }
        }
        let mut tables = Vec::new();
        for op in sig.ops() {
            let t = tables_obj.get(&op.name).ok_or_else(|| AlgError::Format(format!("missing table for `{}`", op.name)))?;
            let mut data = Vec::new();
            flatten(t, op.arity, size, &mut data).map_err(|m| AlgError::Format(format!("table of `{}`: {m}", op.name)))?;
            tables.push(Table::new(op.arity, data));
        }
        let alg = Algebra::new(name, size, labels, sig, tables)?;
        let modal = match (obj.get("box"), obj.get("dia")) {
            (None, None) => None,
            (Some(b), Some(d)) => {
                let (mut bx, mut dx) = (Vec::new(), Vec::new());
                flatten(b, 1, size, &mut bx).map_err(|m| AlgError::Format(format!("table of `box`: {m}")))?;
                flatten(d, 1, size, &mut dx).map_err(|m| AlgError::Format(format!("table of `dia`: {m}")))?;
                for &v in bx.iter().chain(&dx) {
                    if v >= size {
                        return Err(AlgError::Format(format!("modal table contains {v}, outside the carrier")));
                    }
                }
                Some((bx, dx))
            }
            _ => return Err(bad("`box` and `dia` must be given together")),
        };
        Ok((alg, modal))
    }

    /// Encodes the algebra in the JSON file format.
    pub fn to_json(&self) -> Value {
        let mut tables = serde_json::Map::new();
        for (op, t) in self.sig.ops.iter().zip(&self.tables) {
            tables.insert(op.name.clone(), nest(&t.data, t.arity, self.size));
        }
        serde_json::json!({
            "name": self.name,
            "labels": self.labels,
            "signature": self.sig.ops,
            "size": self.size,
            "tables": tables,
        })
    }
}

fn flatten(v: &Value, arity: usize, n: usize, out: &mut Vec<usize>) -> Result<(), String> {
    if arity == 0 {
        let x = v.as_u64().ok_or_else(|| format!("expected an element index, found {v}"))?;
        out.push(x as usize);
        return Ok(());
    }
    let arr = v.as_array().ok_or_else(|| format!("expected an array of length {n}"))?;
    if arr.len() != n {
        return Err(format!("expected an array of length {n}, found {}", arr.len()));
    }
    arr.iter().try_for_each(|x| flatten(x, arity - 1, n, out))
}

fn nest(data: &[usize], arity: usize, n: usize) -> Value {
    if arity == 0 {
        return Value::from(data[0]);
    }
    let stride = data.len() / n;
    Value::Array((0..n).map(|i| nest(&data[i * stride..(i + 1) * stride], arity - 1, n)).collect())
}

/// A finite algebra with unary `box` and `dia` operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MLattice {
    pub base: Algebra,
    boxes: Vec<usize>,
    dias: Vec<usize>,
}

impl MLattice {
    /// Pairs an algebra with modal tables, checking only their shape.
    pub fn new(base: Algebra, boxes: Vec<usize>, dias: Vec<usize>) -> Result<Self, AlgError> {
        let n = base.size;
        if boxes.len() != n || dias.len() != n || boxes.iter().chain(&dias).any(|&v| v >= n) {
            return Err(AlgError::Format("modal tables must map the carrier into itself".into()));
        }
        Ok(MLattice { base, boxes, dias })
    }

    /// The identity modalities.
    pub fn identity(base: Algebra) -> Self {
        let id: Vec<usize> = (0..base.size).collect();
        MLattice { base, boxes: id.clone(), dias: id }
    }

    pub fn size(&self) -> usize {
        self.base.size
    }

    pub fn name(&self) -> &str {
        &self.base.name
    }

    pub fn boxed(&self, a: usize) -> usize {
        self.boxes[a]
    }

    pub fn dia(&self, a: usize) -> usize {
        self.dias[a]
    }

    pub fn box_table(&self) -> &[usize] {
        &self.boxes
    }

    pub fn dia_table(&self) -> &[usize] {
        &self.dias
    }

    /// The first violated modal condition, assuming the base algebra is valid.
    pub fn modal_violation(&self) -> Option<Violation> {
        let a = &self.base;
        let n = a.size;
        let (b, d) = (|x: usize| self.boxes[x], |x: usize| self.dias[x]);
        let checks: [(&str, usize, &dyn Fn(&[usize]) -> bool); 6] = [
            ("L1-box", 1, &|t| a.meet(b(t[0]), t[0]) == b(t[0])),
            ("L2-box", 2, &|t| b(a.meet(t[0], t[1])) == a.meet(b(t[0]), b(t[1]))),
            ("L3-box", 1, &|t| b(d(t[0])) == d(t[0])),
            ("L1-dia", 1, &|t| a.join(d(t[0]), t[0]) == d(t[0])),
            ("L2-dia", 2, &|t| d(a.join(t[0], t[1])) == a.join(d(t[0]), d(t[1]))),
            ("L3-dia", 1, &|t| d(b(t[0])) == b(t[0])),
        ];
        if let Some(v) = checks.iter().find_map(|(name, k, f)| first_failure(n, *k, f).map(|w| Violation { condition: (*name).into(), witness: w })) {
            return Some(v);
        }
        self.star_violation("star-box", &self.boxes)
    }

    /// `m(op(m x1, ..., m xk)) = op(m x1, ..., m xk)` for every operation.
    fn star_violation(&self, prefix: &str, m: &[usize]) -> Option<Violation> {
        let a = &self.base;
        let mut args = Vec::new();
        for (i, op) in a.sig.ops.iter().enumerate() {
            let w = first_failure(a.size, op.arity, |t| {
                args.clear();
                args.extend(t.iter().map(|&x| m[x]));
                let v = a.apply(i, &args);
                m[v] == v
            });
            if let Some(w) = w {
                return Some(Violation { condition: format!("{prefix}:{}", op.name), witness: w });
            }
        }
        None
    }

    /// Validates the base algebra and the modal conditions.
    pub fn validate(&self, fle: bool) -> Result<(), AlgError> {
        self.base.validate(fle)?;
        match self.modal_violation() {
            Some(v) => Err(self.base.fail(v)),
            None => Ok(()),
        }
    }

    /// Laws that follow from the defining conditions: idempotence,
    /// monotonicity, the dual star conditions and, over FLE, both L6 laws.
    /// Used as an oracle against the validator.
    pub fn derived_violation(&self) -> Option<Violation> {
        let a = &self.base;
        let n = a.size;
        let (b, d) = (|x: usize| self.boxes[x], |x: usize| self.dias[x]);
        let checks: [(&str, usize, &dyn Fn(&[usize]) -> bool); 4] = [
            ("L4-box", 1, &|t| b(b(t[0])) == b(t[0])),
            ("L4-dia", 1, &|t| d(d(t[0])) == d(t[0])),
            ("L5-box", 2, &|t| !a.le(t[0], t[1]) || a.le(b(t[0]), b(t[1]))),
            ("L5-dia", 2, &|t| !a.le(t[0], t[1]) || a.le(d(t[0]), d(t[1]))),
        ];
        if let Some(v) = checks.iter().find_map(|(name, k, f)| first_failure(n, *k, f).map(|w| Violation { condition: (*name).into(), witness: w })) {
            return Some(v);
        }
        if let Some(v) = self.star_violation("star-dia", &self.dias) {
            return Some(v);
        }
        if !a.sig.has_fle() {
            return None;
        }
        let imp = a.sig.index("imp").expect("FLE signature");
        let r = |x, y| a.apply(imp, &[x, y]);
        let l6: [(&str, &dyn Fn(&[usize]) -> bool); 2] = [
            ("L6-box", &|t| b(r(t[0], b(t[1]))) == r(d(t[0]), b(t[1]))),
            ("L6-dia", &|t| b(r(b(t[0]), t[1])) == r(b(t[0]), b(t[1]))),
        ];
        l6.iter().find_map(|(name, f)| first_failure(n, 2, f).map(|w| Violation { condition: (*name).into(), witness: w }))
    }

    /// Decodes the JSON file format; the modal tables are required.
    pub fn from_json(v: &Value) -> Result<Self, AlgError> {
        match Algebra::from_json(v)? {
            (alg, Some((b, d))) => MLattice::new(alg, b, d),
            (_, None) => Err(AlgError::Format("missing `box` and `dia` tables".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.base.to_json();
        v["box"] = self.boxes.clone().into();
        v["dia"] = self.dias.clone().into();
        v
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} elements)", self.name, self.size)
    }
}

/// Loads an algebra file, validating it under `profile`. Non-modal profiles
/// ignore any modal tables; modal profiles require them.
pub fn load(text: &str, profile: Profile) -> Result<MLattice, AlgError> {
    let v: Value = serde_json::from_str(text).map_err(|e| AlgError::Format(e.to_string()))?;
    let (alg, modal) = Algebra::from_json(&v)?;
    let m = match modal {
        Some((b, d)) => MLattice::new(alg, b, d)?,
        None if profile.modal() => return Err(AlgError::Format("profile needs `box` and `dia` tables".into())),
        None => MLattice::identity(alg),
    };
    if profile.modal() {
        m.validate(profile.fle())?;
    } else {
        m.base.validate(profile.fle())?;
    }
    Ok(m)
}

/// Element labels keyed by variable, for reports.
pub fn describe_assignment(a: &Algebra, vars: &[u32], values: &[usize]) -> BTreeMap<String, String> {
    vars.iter().zip(values).map(|(v, &x)| (format!("v{v}"), a.label(x).to_string())).collect()
}

#[cfg(test)]
mod tests;
