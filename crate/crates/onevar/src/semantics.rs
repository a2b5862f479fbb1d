//! Finite first-order structures over finite algebras.
//!
//! A [`Structure`] interprets each predicate `Pi` as a map from the domain
//! `0..m` into the algebra. A formula whose only free variable is `x`
//! denotes a map from the domain into the algebra; quantifiers take the meet
//! or join over the whole domain, so evaluation is total.

use std::collections::BTreeMap;

use serde_json::Value;
use thiserror::Error;

use crate::algebra::{catalog, eval_term, functional_power, AlgError, Algebra, MLattice, Rel, Term};
use crate::error::Code;
use crate::syntax::{BinOp, Const, Formula, Modal, Parser, SyntaxError, Token, Var};

/// Failures of structure evaluation and search.
#[derive(Debug, Error)]
pub enum SemError {
    #[error("P{0} has no interpretation")]
    Uninterpreted(u32),
    #[error("`{0}` occurs free; only x may")]
    NotOneVar(Var),
    #[error(transparent)]
    Algebra(#[from] AlgError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Cap(String),
    #[error("malformed structure: {0}")]
    Format(String),
}

impl SemError {
    pub fn code(&self) -> Code {
        match self {
            SemError::Uninterpreted(_) => Code::Uninterpreted,
            SemError::NotOneVar(_) => Code::NotOneVar,
            SemError::Algebra(e) => e.code(),
            SemError::Syntax(e) => e.code(),
            SemError::Cap(_) => Code::Cap,
            SemError::Format(_) => Code::Schema,
        }
    }
}

/// An algebra, a domain size and an interpretation of some predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub algebra: Algebra,
    pub domain: usize,
    pub interp: BTreeMap<u32, Vec<usize>>,
}

/// Applies a connective pointwise, failing if the algebra lacks it.
fn op_index(a: &Algebra, name: &str) -> Result<usize, SemError> {
    a.signature().index(name).ok_or_else(|| SemError::Algebra(AlgError::Signature(format!("`{}` has no `{name}`", a.name))))
}

impl Structure {
    pub fn new(algebra: Algebra, domain: usize, interp: BTreeMap<u32, Vec<usize>>) -> Result<Self, SemError> {
        if domain == 0 {
            return Err(SemError::Format("the domain must be non-empty".into()));
        }
        for (p, vals) in &interp {
            if vals.len() != domain || vals.iter().any(|&v| v >= algebra.size()) {
                return Err(SemError::Format(format!("P{p} must map each of the {domain} points into the algebra")));
            }
        }
        Ok(Structure { algebra, domain, interp })
    }

    /// Evaluates with `x` ranging over the domain and the parameters fixed
    /// by `params`; the result has one entry per point.
    pub fn eval_with(&self, phi: &Formula, params: &dyn Fn(u32) -> Option<usize>) -> Result<Vec<usize>, SemError> {
        let a = &self.algebra;
        let m = self.domain;
        Ok(match phi {
            Formula::Atom(i, v) => {
                let vals = self.interp.get(i).ok_or(SemError::Uninterpreted(*i))?;
                match v {
                    Var::X => vals.clone(),
                    Var::Y(n) => vec![vals[params(*n).ok_or(SemError::NotOneVar(*v))?]; m],
                }
            }
            Formula::Const(c) => {
                let name = match c {
                    Const::E => "e",
                    Const::F => "f",
                };
                vec![a.apply(op_index(a, name)?, &[]); m]
            }
            Formula::Bin(op, l, r) => {
                let i = op_index(a, op.op_name())?;
                let (l, r) = (self.eval_with(l, params)?, self.eval_with(r, params)?);
                l.iter().zip(&r).map(|(&x, &y)| a.apply(i, &[x, y])).collect()
            }
            Formula::Forall(b) => vec![a.meet_all(self.eval_with(b, params)?).expect("non-empty domain"); m],
            Formula::Exists(b) => vec![a.join_all(self.eval_with(b, params)?).expect("non-empty domain"); m],
        })
    }

    /// The map denoted by a formula whose only free variable is `x`.
    pub fn eval_fo(&self, phi: &Formula) -> Result<Vec<usize>, SemError> {
        self.eval_with(phi, &|_| None)
    }

    /// Whether `phi ~ psi` (or `phi <= psi`) holds at every point.
    pub fn satisfies(&self, eq: &FoEquation) -> Result<bool, SemError> {
        let (l, r) = (self.eval_fo(&eq.lhs)?, self.eval_fo(&eq.rhs)?);
        Ok(l.iter().zip(&r).all(|(&x, &y)| match eq.rel {
            Rel::Eq => x == y,
            Rel::Le => self.algebra.le(x, y),
        }))
    }

    /// Whether `lhs <= rhs` at every point and for every assignment of the
    /// parameters `y1, y2, ...` to domain elements.
    pub fn valid_le(&self, lhs: &Formula, rhs: &Formula) -> Result<bool, SemError> {
        let mut ys: Vec<u32> = lhs.free_vars().into_iter().chain(rhs.free_vars()).filter_map(Var::index).collect();
        ys.sort_unstable();
        ys.dedup();
        let mut env = vec![0; ys.len()];
        loop {
            let params = |n: u32| ys.binary_search(&n).ok().map(|i| env[i]);
            let (l, r) = (self.eval_with(lhs, &params)?, self.eval_with(rhs, &params)?);
            if l.iter().zip(&r).any(|(&x, &y)| !self.algebra.le(x, y)) {
                return Ok(false);
            }
            let Some(i) = (0..env.len()).rev().find(|&i| env[i] + 1 < self.domain) else { return Ok(true) };
            env[i] += 1;
            env[i + 1..].iter_mut().for_each(|v| *v = 0);
        }
    }

    /// The value of `I(Pi)` as an element of the functional power, in the
    /// tuple indexing of [`functional_power`].
    pub fn tuple_index(&self, p: u32) -> Result<usize, SemError> {
        let vals = self.interp.get(&p).ok_or(SemError::Uninterpreted(p))?;
        Ok(vals.iter().fold(0, |acc, &v| acc * self.algebra.size() + v))
    }

    /// Decodes `{"algebra", "S", "I"}`. The algebra is resolved by the
    /// caller; values may be element indices or labels.
    pub fn from_json(v: &Value, resolve: &dyn Fn(&str) -> Result<Algebra, SemError>) -> Result<Self, SemError> {
        let bad = |m: &str| SemError::Format(m.to_string());
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        if let Some(k) = obj.keys().find(|k| !["algebra", "S", "I"].contains(&k.as_str())) {
            return Err(SemError::Format(format!("unknown key `{k}`")));
        }
        let algebra = resolve(obj.get("algebra").and_then(Value::as_str).ok_or_else(|| bad("`algebra` must be a file or catalog name"))?)?;
        let domain = obj.get("S").and_then(Value::as_u64).ok_or_else(|| bad("`S` must be the domain size"))? as usize;
        let mut interp = BTreeMap::new();
        for (k, vals) in obj.get("I").and_then(Value::as_object).ok_or_else(|| bad("missing `I` object"))? {
            let p = crate::syntax::indexed(k, 'P').ok_or_else(|| SemError::Format(format!("bad predicate `{k}`")))?;
            let vals = vals.as_array().ok_or_else(|| SemError::Format(format!("`{k}` must be an array")))?;
            let vals = vals
                .iter()
                .map(|x| match x {
                    Value::Number(n) => n.as_u64().map(|n| n as usize),
                    Value::String(s) => algebra.element(s),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| SemError::Format(format!("`{k}` must list element indices or labels")))?;
            interp.insert(p, vals);
        }
        Structure::new(algebra, domain, interp)
    }

    /// A one-line description such as `l3m, S=2, P0=[1,0], P1=[0,1]`.
    pub fn describe(&self) -> String {
        let mut out = format!("{}, S={}", self.algebra.name, self.domain);
        for (p, vals) in &self.interp {
            let labels: Vec<&str> = vals.iter().map(|&v| self.algebra.label(v)).collect();
            out.push_str(&format!(", P{p}=[{}]", labels.join(",")));
        }
        out
    }
}

/// The term of a modal formula: `pi` becomes the variable `vi`.
pub fn modal_term(alpha: &Modal) -> Term {
    match alpha {
        Modal::Atom(i) => Term::Var(*i),
        Modal::Const(Const::E) => Term::op("e", vec![]),
        Modal::Const(Const::F) => Term::op("f", vec![]),
        Modal::Bin(op, a, b) => Term::op(op.op_name(), vec![modal_term(a), modal_term(b)]),
        Modal::Square(a) => Term::Box(Box::new(modal_term(a))),
        Modal::Diamond(a) => Term::Dia(Box::new(modal_term(a))),
    }
}

/// Evaluates a modal formula in an m-lattice under `g`.
pub fn eval_modal(m: &MLattice, alpha: &Modal, g: &dyn Fn(u32) -> Option<usize>) -> Result<usize, SemError> {
    Ok(eval_term(m, &modal_term(alpha), g)?)
}

/// Compares the modal evaluation of `star(phi)` in the functional power
/// over the domain with the first-order value of `phi`. `power` must be
/// `functional_power(&st.algebra, st.domain)`.
pub fn check_bridge_in(st: &Structure, power: &MLattice, phi: &Formula) -> Result<bool, SemError> {
    if let Some(v) = phi.free_vars().into_iter().find(|v| *v != Var::X) {
        return Err(SemError::NotOneVar(v));
    }
    let fo = st.eval_fo(phi)?;
    let g = |p: u32| st.tuple_index(p).ok();
    let mut preds = std::collections::BTreeSet::new();
    phi.predicates(&mut preds);
    if let Some(&p) = preds.iter().find(|p| !st.interp.contains_key(p)) {
        return Err(SemError::Uninterpreted(p));
    }
    let modal = eval_modal(power, &crate::syntax::star(phi), &g)?;
    Ok(modal == fo.iter().fold(0, |acc, &v| acc * st.algebra.size() + v))
}

/// [`check_bridge_in`] with the functional power built on the spot.
pub fn check_bridge(st: &Structure, phi: &Formula) -> Result<bool, SemError> {
    let power = functional_power(&st.algebra, st.domain)?;
    check_bridge_in(st, &power, phi)
}

/// `phi ~ psi` or `phi <= psi` between one-variable formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoEquation {
    pub lhs: Formula,
    pub rel: Rel,
    pub rhs: Formula,
}

impl FoEquation {
    pub fn parse(text: &str) -> Result<Self, SemError> {
        let mut p = Parser::new(text)?;
        let lhs = p.formula()?.to_fo()?;
        let rel = if p.eat(&Token::Approx) {
            Rel::Eq
        } else if p.eat(&Token::Le) {
            Rel::Le
        } else {
            return Err(SyntaxError::Syntax { pos: p.pos(), msg: "expected `~` or `<=`".into() }.into());
        };
        let rhs = p.formula()?.to_fo()?;
        p.expect_end()?;
        for v in lhs.free_vars().into_iter().chain(rhs.free_vars()) {
            if v != Var::X {
                return Err(SemError::NotOneVar(v));
            }
        }
        Ok(FoEquation { lhs, rel, rhs })
    }

    fn predicates(&self, out: &mut std::collections::BTreeSet<u32>) {
        self.lhs.predicates(out);
        self.rhs.predicates(out);
    }
}

impl std::fmt::Display for FoEquation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rel = match self.rel {
            Rel::Eq => "~",
            Rel::Le => "<=",
        };
        write!(f, "{} {rel} {}", self.lhs, self.rhs)
    }
}

/// Algebras, domain sizes and the interpretation cap for a bounded search.
#[derive(Clone, Debug)]
pub struct SemScope {
    pub algebras: Vec<Algebra>,
    pub max_domain: usize,
    /// Interpretations per algebra and domain size above this are refused.
    pub cap: usize,
}

impl Default for SemScope {
    /// Every catalog algebra, domains up to 3.
    fn default() -> Self {
        SemScope { algebras: catalog().into_iter().map(|e| e.algebra.base).collect(), max_domain: 3, cap: 1 << 22 }
    }
}

/// Steps a vector of digits in `0..n` through lexicographic order.
pub(crate) fn next_tuple(t: &mut [usize], n: usize) -> bool {
    for i in (0..t.len()).rev() {
        t[i] += 1;
        if t[i] < n {
            return true;
        }
        t[i] = 0;
    }
    false
}

/// Calls `f` on every structure in the scope interpreting exactly `preds`:
/// algebras in order, then domain sizes, then interpretations with the
/// lowest predicate most significant. Stops when `f` returns `Some`.
/// Algebras lacking a connective used by the query are skipped by `f`
/// returning a signature error, which is swallowed here.
pub fn scan_structures<T>(
    scope: &SemScope,
    preds: &[u32],
    mut f: impl FnMut(&Structure) -> Result<Option<T>, SemError>,
) -> Result<Option<T>, SemError> {
    for alg in &scope.algebras {
        'sizes: for m in 1..=scope.max_domain {
            let n = alg.size();
            let digits = m * preds.len();
            if n.checked_pow(digits as u32).is_none_or(|c| c > scope.cap) {
                return Err(SemError::Cap(format!("{n}^{digits} interpretations over `{}` with |S| = {m} exceed the cap of {}", alg.name, scope.cap)));
            }
            let mut t = vec![0; digits];
            let mut st = Structure { algebra: alg.clone(), domain: m, interp: BTreeMap::new() };
            loop {
                st.interp = preds.iter().enumerate().map(|(k, &p)| (p, t[k * m..(k + 1) * m].to_vec())).collect();
                match f(&st) {
                    Ok(Some(hit)) => return Ok(Some(hit)),
                    Ok(None) => {}
                    Err(SemError::Algebra(AlgError::Signature(_))) => break 'sizes,
                    Err(e) => return Err(e),
                }
                if !next_tuple(&mut t, n) {
                    break;
                }
            }
        }
    }
    Ok(None)
}

/// A structure satisfying the assumptions and refuting the goal, with the
/// goal's two sides.
#[derive(Clone, Debug)]
pub struct FoHit {
    pub structure: Structure,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

/// The first structure in scope that satisfies every equation of `theory`
/// and refutes `goal`.
pub fn bounded_fo_countermodel(theory: &[FoEquation], goal: &FoEquation, scope: &SemScope) -> Result<Option<FoHit>, SemError> {
    let mut preds = std::collections::BTreeSet::new();
    goal.predicates(&mut preds);
    theory.iter().for_each(|t| t.predicates(&mut preds));
    let preds: Vec<u32> = preds.into_iter().collect();
    scan_structures(scope, &preds, |st| {
        for t in theory {
            if !st.satisfies(t)? {
                return Ok(None);
            }
        }
        if st.satisfies(goal)? {
            return Ok(None);
        }
        Ok(Some(FoHit { structure: st.clone(), lhs: st.eval_fo(&goal.lhs)?, rhs: st.eval_fo(&goal.rhs)? }))
    })
}

/// The first structure in scope where `lhs <= rhs` fails for some point or
/// parameter assignment.
pub fn refute_le(lhs: &Formula, rhs: &Formula, scope: &SemScope) -> Result<Option<Structure>, SemError> {
    let mut preds = std::collections::BTreeSet::new();
    lhs.predicates(&mut preds);
    rhs.predicates(&mut preds);
    let preds: Vec<u32> = preds.into_iter().collect();
    scan_structures(scope, &preds, |st| Ok(if st.valid_le(lhs, rhs)? { None } else { Some(st.clone()) }))
}

/// Whether a binary connective is interpreted by `a`.
pub fn supports(a: &Algebra, op: BinOp) -> bool {
    a.signature().index(op.op_name()).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog_entry;

    fn alg(name: &str) -> Algebra {
        catalog_entry(name).unwrap().algebra.base
    }

    fn godel_structure() -> Structure {
        let g = alg("godel3");
        let half = g.element("½").unwrap();
        Structure::new(g, 2, BTreeMap::from([(0, vec![half, 2])])).unwrap()
    }

    fn labels(st: &Structure, v: &[usize]) -> Vec<String> {
        v.iter().map(|&x| st.algebra.label(x).to_string()).collect()
    }

    #[test]
    fn evaluation_examples() {
        let st = godel_structure();
        let ev = |s: &str| labels(&st, &st.eval_fo(&s.parse().unwrap()).unwrap());
        assert_eq!(ev("forall x P0(x)"), ["½", "½"]);
        assert_eq!(ev("exists x P0(x)"), ["1", "1"]);
        assert_eq!(ev("P0(x) -> forall x P0(x)"), ["1", "½"]);
        assert_eq!(st.eval_fo(&"P1(x)".parse().unwrap()).unwrap_err().code(), Code::Uninterpreted);
        assert_eq!(st.eval_fo(&"P0(y1)".parse().unwrap()).unwrap_err().code(), Code::NotOneVar);
    }

    #[test]
    fn bridge_examples() {
        let st = godel_structure();
        for f in ["forall x P0(x)", "P0(x)", "P0(x) -> forall x P0(x)", "exists x (P0(x) * e) | f"] {
            assert!(check_bridge(&st, &f.parse().unwrap()).unwrap(), "{f}");
        }
        let b = alg("2-chain");
        let st = Structure::new(b, 2, BTreeMap::from([(0, vec![1, 0]), (1, vec![0, 1])])).unwrap();
        let phi: Formula = "exists x P0(x) * P1(x)".parse().unwrap();
        assert_eq!(st.eval_fo(&phi).unwrap(), [0, 1]);
        assert!(check_bridge(&st, &phi).unwrap());
    }

    #[test]
    fn countermodel_examples() {
        let none = FoEquation::parse("forall x (P0(x) & P1(x)) ~ forall x P0(x) & forall x P1(x)").unwrap();
        assert!(bounded_fo_countermodel(&[], &none, &SemScope::default()).unwrap().is_none());
        let goal = FoEquation::parse("exists x P0(x) * exists x P1(x) <= exists x (P0(x) * P1(x))").unwrap();
        let scope = SemScope { algebras: vec![alg("l3m")], max_domain: 2, ..SemScope::default() };
        let hit = bounded_fo_countermodel(&[], &goal, &scope).unwrap().unwrap();
        assert_eq!(hit.structure.describe(), "l3m, S=2, P0=[0,½], P1=[1,0]");
        assert_eq!((hit.lhs[0], hit.rhs[0]), (1, 0));
        let st = Structure::new(alg("l3m"), 2, BTreeMap::from([(0, vec![2, 0]), (1, vec![0, 2])])).unwrap();
        assert_eq!((st.eval_fo(&goal.lhs).unwrap()[0], st.eval_fo(&goal.rhs).unwrap()[0]), (2, 0));
        let ef = FoEquation::parse("e ~ f").unwrap();
        let scope = SemScope { algebras: vec![alg("2-chain")], max_domain: 1, ..SemScope::default() };
        assert_eq!(bounded_fo_countermodel(&[], &ef, &scope).unwrap().unwrap().structure.domain, 1);
        let theory = [FoEquation::parse("P0(x) ~ e").unwrap()];
        let goal = FoEquation::parse("exists x P0(x) <= forall x P0(x)").unwrap();
        assert!(bounded_fo_countermodel(&theory, &goal, &SemScope::default()).unwrap().is_none());
        assert_eq!(FoEquation::parse("P0(y1) ~ e").unwrap_err().code(), Code::NotOneVar);
    }

    #[test]
    fn parameters_range_over_the_domain() {
        let st = godel_structure();
        let (l, r): (Formula, Formula) = ("forall x P0(x)".parse().unwrap(), "P0(y1)".parse().unwrap());
        assert!(st.valid_le(&l, &r).unwrap());
        assert!(!st.valid_le(&r, &l).unwrap());
    }

    #[test]
    fn structure_files() {
        let v: Value = serde_json::json!({"algebra": "l3m", "S": 2, "I": {"P0": ["1", 0]}});
        let st = Structure::from_json(&v, &|n| Ok(alg(n))).unwrap();
        assert_eq!(st.interp[&0], [2, 0]);
        assert_eq!(st.describe(), "l3m, S=2, P0=[1,0]");
        let v: Value = serde_json::json!({"algebra": "l3m", "S": 2, "I": {"P0": [1]}});
        assert_eq!(Structure::from_json(&v, &|n| Ok(alg(n))).unwrap_err().code(), Code::Schema);
    }
}
