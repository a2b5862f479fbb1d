//! Multiset sequents, rule schemas, calculus configurations, derivation
//! checking and derivation metrics.
//!
//! Sequents and derivations are generic over the formula language so that
//! the first-order calculus and the modal certificate calculus share the
//! propositional rules, the structural rules and the checker skeleton.

pub mod build;
mod check;
mod json;
mod vars;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

use crate::error::Code;
use crate::syntax::{parse_fo, parse_fo_list, parse_modal, parse_modal_list, BinOp, Const, Formula, Lexer, Modal, SyntaxError, Token, Var};

pub use check::check_derivation;
pub(crate) use check::{check_tree, check_two, Node};
pub use json::{from_json, from_json_str, to_json, to_json_string, DecodeError};
pub use vars::{rename_free, substitute_free};

/// Operations the sequent machinery needs from a formula language.
pub trait Fm: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display {
    fn constant(c: Const) -> Self;
    fn binary(op: BinOp, a: Self, b: Self) -> Self;
    fn as_const(&self) -> Option<Const>;
    fn as_binary(&self) -> Option<(BinOp, &Self, &Self)>;
    fn parse(text: &str) -> Result<Self, SyntaxError>;
    fn parse_list(text: &str) -> Result<Vec<Self>, SyntaxError>;
    /// Whether the formula has the shape of the principal formula of the
    /// left rule `rule`.
    fn left_principal(&self, rule: Rule) -> bool {
        propositional_principal(self, rule)
    }
}

/// Shape test for the principal formulas of the propositional left rules.
fn propositional_principal<F: Fm>(f: &F, rule: Rule) -> bool {
    let op = f.as_binary().map(|(op, ..)| op);
    match rule {
        Rule::UnitLeft => f.as_const() == Some(Const::E),
        Rule::MulLeft => op == Some(BinOp::Mul),
        Rule::AndLeft1 | Rule::AndLeft2 => op == Some(BinOp::And),
        Rule::OrLeft => op == Some(BinOp::Or),
        Rule::ImpLeft => op == Some(BinOp::Imp),
        _ => false,
    }
}

impl Fm for Formula {
    fn constant(c: Const) -> Self {
        Formula::Const(c)
    }
    fn binary(op: BinOp, a: Self, b: Self) -> Self {
        Formula::bin(op, a, b)
    }
    fn as_const(&self) -> Option<Const> {
        match self {
            Formula::Const(c) => Some(*c),
            _ => None,
        }
    }
    fn as_binary(&self) -> Option<(BinOp, &Self, &Self)> {
        match self {
            Formula::Bin(op, a, b) => Some((*op, a, b)),
            _ => None,
        }
    }
    fn parse(text: &str) -> Result<Self, SyntaxError> {
        parse_fo(text)
    }
    fn parse_list(text: &str) -> Result<Vec<Self>, SyntaxError> {
        parse_fo_list(text)
    }
    fn left_principal(&self, rule: Rule) -> bool {
        match rule {
            Rule::ForallLeft => matches!(self, Formula::Forall(_)),
            Rule::ExistsLeft => matches!(self, Formula::Exists(_)),
            _ => propositional_principal(self, rule),
        }
    }
}

impl Fm for Modal {
    fn constant(c: Const) -> Self {
        Modal::Const(c)
    }
    fn binary(op: BinOp, a: Self, b: Self) -> Self {
        Modal::bin(op, a, b)
    }
    fn as_const(&self) -> Option<Const> {
        match self {
            Modal::Const(c) => Some(*c),
            _ => None,
        }
    }
    fn as_binary(&self) -> Option<(BinOp, &Self, &Self)> {
        match self {
            Modal::Bin(op, a, b) => Some((*op, a, b)),
            _ => None,
        }
    }
    fn parse(text: &str) -> Result<Self, SyntaxError> {
        parse_modal(text)
    }
    fn parse_list(text: &str) -> Result<Vec<Self>, SyntaxError> {
        parse_modal_list(text)
    }
    fn left_principal(&self, rule: Rule) -> bool {
        match rule {
            Rule::BoxLeft => matches!(self, Modal::Square(_)),
            Rule::DiaLeft => matches!(self, Modal::Diamond(_)),
            _ => propositional_principal(self, rule),
        }
    }
}

/// A sequent `Γ ⇒ Δ` with a multiset antecedent and at most one succedent
/// formula. The antecedent is kept sorted by rendered text, so equal
/// multisets compare equal and indices into it are canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent<F> {
    ante: Vec<F>,
    succ: Option<F>,
}

impl<F: Fm> Sequent<F> {
    pub fn new(mut ante: Vec<F>, succ: Option<F>) -> Self {
        canonical_sort(&mut ante);
        Sequent { ante, succ }
    }

    pub fn ante(&self) -> &[F] {
        &self.ante
    }

    pub fn succ(&self) -> Option<&F> {
        self.succ.as_ref()
    }

    pub fn into_parts(self) -> (Vec<F>, Option<F>) {
        (self.ante, self.succ)
    }

    /// Parses `G |- D`, where `G` is a comma-separated list and either side
    /// may be empty.
    pub fn parse(text: &str) -> Result<Self, SyntaxError> {
        let toks = Lexer::tokenize(text)?;
        let mut arrows = toks.iter().filter(|(t, _)| *t == Token::Turnstile);
        let Some(&(_, pos)) = arrows.next() else {
            return Err(SyntaxError::Syntax { pos: text.len(), msg: "expected `|-` in sequent".into() });
        };
        if let Some(&(_, second)) = arrows.next() {
            return Err(SyntaxError::Syntax { pos: second, msg: "more than one `|-` in sequent".into() });
        }
        let len = if text[pos..].starts_with("|-") { 2 } else { text[pos..].chars().next().map_or(1, char::len_utf8) };
        let ante = F::parse_list(&text[..pos])?;
        let succ_text = text[pos + len..].trim();
        let succ = if succ_text.is_empty() { None } else { Some(F::parse(succ_text)?) };
        Ok(Sequent::new(ante, succ))
    }

    /// Index of some occurrence of `f` in the antecedent.
    pub fn position(&self, f: &F) -> Option<usize> {
        self.ante.iter().position(|g| g == f)
    }

    /// The fused inequality `∏Γ ≤ ΣΔ`: a left fold of `·` over the
    /// antecedent in canonical order (`e` when empty), and the succedent or
    /// `f` when empty.
    pub fn fuse(&self) -> (F, F) {
        (product(&self.ante), self.succ.clone().unwrap_or_else(|| F::constant(Const::F)))
    }
}

impl<F: fmt::Display> fmt::Display for Sequent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.ante.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        if !self.ante.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str("|-")?;
        if let Some(s) = &self.succ {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

/// Sorts formulas into the canonical antecedent order.
pub fn canonical_sort<F: fmt::Display>(v: &mut [F]) {
    v.sort_by_cached_key(|f| f.to_string());
}

/// `∏Γ` over the given formulas in canonical order.
pub fn product<F: Fm>(formulas: &[F]) -> F {
    let mut sorted = formulas.to_vec();
    canonical_sort(&mut sorted);
    let mut it = sorted.into_iter();
    match it.next() {
        None => F::constant(Const::E),
        Some(first) => it.fold(first, |acc, g| F::binary(BinOp::Mul, acc, g)),
    }
}

/// Fused form of a sequent; see [`Sequent::fuse`].
pub fn fuse<F: Fm>(s: &Sequent<F>) -> (F, F) {
    s.fuse()
}

/// Multiset difference: removes one occurrence of each element of `sub`.
/// Returns `None` if `sub` is not contained in `whole`.
pub fn multiset_minus<F: PartialEq + Clone>(whole: &[F], sub: &[F]) -> Option<Vec<F>> {
    let mut rest = whole.to_vec();
    for s in sub {
        let i = rest.iter().position(|g| g == s)?;
        rest.remove(i);
    }
    Some(rest)
}

/// Which structural rules extend the base calculus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CalculusConfig {
    /// Exponents `k ≥ 2` for which `Π ⇒` may be derived from `Πᵏ ⇒`.
    pub contraction: BTreeSet<u32>,
    /// Left weakening (the `k = 0` case).
    pub weakening_left: bool,
    /// Right weakening: `Γ ⇒ φ` from `Γ ⇒`.
    pub weakening_right: bool,
}

impl CalculusConfig {
    pub fn fle() -> Self {
        CalculusConfig::default()
    }

    pub fn flew() -> Self {
        CalculusConfig { weakening_left: true, weakening_right: true, ..Default::default() }
    }

    pub fn flec() -> Self {
        CalculusConfig { contraction: BTreeSet::from([2]), ..Default::default() }
    }

    pub fn flewc() -> Self {
        CalculusConfig { contraction: BTreeSet::from([2]), weakening_left: true, weakening_right: true }
    }

    /// Looks up a preset by name (`fle`, `flew`, `flec`, `flewc`).
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "fle" => Some(Self::fle()),
            "flew" => Some(Self::flew()),
            "flec" => Some(Self::flec()),
            "flewc" => Some(Self::flewc()),
            _ => None,
        }
    }

    /// Without contraction, backward search terminates and is complete.
    pub fn is_terminating(&self) -> bool {
        self.contraction.is_empty()
    }
}

impl fmt::Display for CalculusConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, preset) in [("FLe", Self::fle()), ("FLew", Self::flew()), ("FLec", Self::flec()), ("FLewc", Self::flewc())] {
            if *self == preset {
                return f.write_str(name);
            }
        }
        write!(f, "FLe+{{contraction {:?}, wl {}, wr {}}}", self.contraction, self.weakening_left, self.weakening_right)
    }
}

/// Rule labels of the first-order calculus and the modal certificate
/// calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Id,
    ZeroLeft,
    UnitRight,
    UnitLeft,
    ZeroRight,
    ImpLeft,
    ImpRight,
    MulLeft,
    MulRight,
    AndLeft1,
    AndLeft2,
    AndRight,
    OrLeft,
    OrRight1,
    OrRight2,
    ForallLeft,
    ForallRight,
    ExistsLeft,
    ExistsRight,
    Contract(u32),
    WeakLeft,
    WeakRight,
    BoxLeft,
    DiaRight,
    BoxRight,
    DiaLeft,
    Cut,
}

impl Rule {
    /// Name used in the JSON format. Contraction carries its exponent in
    /// the `k` parameter.
    pub fn name(self) -> &'static str {
        match self {
            Rule::Id => "id",
            Rule::ZeroLeft => "f=>",
            Rule::UnitRight => "=>e",
            Rule::UnitLeft => "e=>",
            Rule::ZeroRight => "=>f",
            Rule::ImpLeft => "->=>",
            Rule::ImpRight => "=>->",
            Rule::MulLeft => "*=>",
            Rule::MulRight => "=>*",
            Rule::AndLeft1 => "&=>1",
            Rule::AndLeft2 => "&=>2",
            Rule::AndRight => "=>&",
            Rule::OrLeft => "|=>",
            Rule::OrRight1 => "=>|1",
            Rule::OrRight2 => "=>|2",
            Rule::ForallLeft => "forall=>",
            Rule::ForallRight => "=>forall",
            Rule::ExistsLeft => "exists=>",
            Rule::ExistsRight => "=>exists",
            Rule::Contract(_) => "contract",
            Rule::WeakLeft => "weak-left",
            Rule::WeakRight => "weak-right",
            Rule::BoxLeft => "[]=>",
            Rule::DiaRight => "=><>",
            Rule::BoxRight => "=>[]",
            Rule::DiaLeft => "<>=>",
            Rule::Cut => "cut",
        }
    }

    /// Inverse of [`Rule::name`]; `k` is needed for contraction.
    pub fn from_name(name: &str, k: Option<u32>) -> Option<Rule> {
        const ALL: [Rule; 26] = [
            Rule::Id,
            Rule::ZeroLeft,
            Rule::UnitRight,
            Rule::UnitLeft,
            Rule::ZeroRight,
            Rule::ImpLeft,
            Rule::ImpRight,
            Rule::MulLeft,
            Rule::MulRight,
            Rule::AndLeft1,
            Rule::AndLeft2,
            Rule::AndRight,
            Rule::OrLeft,
            Rule::OrRight1,
            Rule::OrRight2,
            Rule::ForallLeft,
            Rule::ForallRight,
            Rule::ExistsLeft,
            Rule::ExistsRight,
            Rule::WeakLeft,
            Rule::WeakRight,
            Rule::BoxLeft,
            Rule::DiaRight,
            Rule::BoxRight,
            Rule::DiaLeft,
            Rule::Cut,
        ];
        if name == "contract" {
            return k.map(Rule::Contract);
        }
        ALL.into_iter().find(|r| r.name() == name)
    }

    /// Whether the rule introduces an eigenvariable.
    pub fn is_eigen(self) -> bool {
        matches!(self, Rule::ForallRight | Rule::ExistsLeft)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Contract(k) => write!(f, "contract({k})"),
            r => f.write_str(r.name()),
        }
    }
}

/// Explicit rule parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params<F> {
    /// Index of the principal formula in the conclusion antecedent (left
    /// rules).
    pub principal: Option<usize>,
    /// Conclusion antecedent indices that go to the first premise of a
    /// two-premise rule with a context split.
    pub split: Option<Vec<usize>>,
    /// Instantiation variable of `forall=>` and `=>exists`.
    pub u: Option<Var>,
    /// Eigenvariable of `=>forall` and `exists=>`.
    pub y: Option<Var>,
    /// The sub-multiset acted on by a structural rule.
    pub pi: Option<Vec<F>>,
}

impl<F> Default for Params<F> {
    fn default() -> Self {
        Params { principal: None, split: None, u: None, y: None, pi: None }
    }
}

/// A derivation tree. Each node records its conclusion, rule, parameters
/// and premises.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation<F> {
    pub rule: Rule,
    pub conclusion: Sequent<F>,
    pub params: Params<F>,
    pub premises: Vec<Derivation<F>>,
}

/// First-order derivations.
pub type FoDerivation = Derivation<Formula>;
/// First-order sequents.
pub type FoSequent = Sequent<Formula>;

/// Derivation size measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Metrics {
    /// Maximum number of eigenvariable rules on a branch.
    pub md: usize,
    /// Number of nodes on the longest branch.
    pub ht: usize,
}

impl<F> Derivation<F> {
    pub fn metrics(&self) -> Metrics {
        let mut md = 0;
        let mut ht = 0;
        for p in &self.premises {
            let m = p.metrics();
            md = md.max(m.md);
            ht = ht.max(m.ht);
        }
        Metrics { md: md + usize::from(self.rule.is_eigen()), ht: ht + 1 }
    }

    /// Total number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Visits every node in pre-order.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Derivation<F>)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
    }

    /// Rules used anywhere in the tree.
    pub fn rules(&self) -> BTreeSet<Rule> {
        let mut out = BTreeSet::new();
        self.visit(&mut |n| {
            out.insert(n.rule);
        });
        out
    }
}

impl<F: Fm> Derivation<F> {
    /// Antecedent index of the principal formula of a left rule: the
    /// declared index, or the first formula of the right shape.
    pub fn principal_index(&self) -> Option<usize> {
        self.params
            .principal
            .or_else(|| self.conclusion.ante().iter().position(|f| f.left_principal(self.rule)))
    }

    /// The principal formula of a left rule.
    pub fn principal_formula(&self) -> Option<&F> {
        self.principal_index().and_then(|i| self.conclusion.ante().get(i))
    }

    /// For rules that split the context: the antecedent formulas passed to
    /// the first premise and the rest, both without the principal formula.
    pub fn context_split(&self) -> (Vec<F>, Vec<F>) {
        let exclude = if self.rule == Rule::ImpLeft { self.principal_index() } else { None };
        let split = self.params.split.clone().unwrap_or_default();
        let mut first = Vec::new();
        let mut second = Vec::new();
        for (i, f) in self.conclusion.ante().iter().enumerate() {
            if Some(i) == exclude {
                continue;
            }
            if split.contains(&i) {
                first.push(f.clone());
            } else {
                second.push(f.clone());
            }
        }
        (first, second)
    }
}

/// Convenience: `(md, ht)` of a derivation.
pub fn metrics<F>(d: &Derivation<F>) -> Metrics {
    d.metrics()
}

/// A checker rejection: the code, the path of premise indices from the root
/// to the offending node, and a human-readable detail.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("{code} at node {}: {detail}", path_string(.path))]
pub struct CheckError {
    pub code: Code,
    pub path: Vec<usize>,
    pub detail: String,
}

fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".into()
    } else {
        path.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

impl CheckError {
    pub fn new(code: Code, path: &[usize], detail: impl Into<String>) -> Self {
        CheckError { code, path: path.to_vec(), detail: detail.into() }
    }
}

/// Renders a derivation as an indented tree, one node per line.
pub fn render_tree<F: fmt::Display>(d: &Derivation<F>) -> String {
    fn go<F: fmt::Display>(d: &Derivation<F>, depth: usize, out: &mut String) {
        use std::fmt::Write;
        let _ = writeln!(out, "{}[{}] {}", "  ".repeat(depth), d.rule, d.conclusion);
        for p in &d.premises {
            go(p, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(d, 0, &mut out);
    out
}
