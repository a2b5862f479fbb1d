//! First-order formulas over unary predicates with one bindable variable.

use std::collections::BTreeSet;
use std::fmt;

use super::{needs_parens, BinOp, Const, SyntaxError, Var, PREC_UNARY};

/// A formula of the one-variable fragment extended with free parameters.
///
/// Only `x` is ever bound, and no parameter `yₙ` may occur under a
/// quantifier. Values built through [`super::parse_fo`] or the smart
/// constructors that take checked inputs respect this; [`Formula::check`]
/// verifies it for trees built by hand.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(u32, Var),
    Const(Const),
    Bin(BinOp, Box<Formula>, Box<Formula>),
    Forall(Box<Formula>),
    Exists(Box<Formula>),
}

impl Formula {
    pub fn atom(i: u32, v: Var) -> Self {
        Formula::Atom(i, v)
    }

    pub fn e() -> Self {
        Formula::Const(Const::E)
    }

    pub fn f() -> Self {
        Formula::Const(Const::F)
    }

    pub fn bin(op: BinOp, a: Formula, b: Formula) -> Self {
        Formula::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Self::bin(BinOp::And, a, b)
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Self::bin(BinOp::Or, a, b)
    }

    pub fn mul(a: Formula, b: Formula) -> Self {
        Self::bin(BinOp::Mul, a, b)
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Self::bin(BinOp::Imp, a, b)
    }

    pub fn forall(body: Formula) -> Self {
        Formula::Forall(Box::new(body))
    }

    pub fn exists(body: Formula) -> Self {
        Formula::Exists(Box::new(body))
    }

    /// Free variables.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    pub(crate) fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(_, v) => {
                out.insert(*v);
            }
            Formula::Const(_) => {}
            Formula::Bin(_, a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Forall(b) | Formula::Exists(b) => {
                // Only x is bound and parameters never occur below a
                // quantifier, so the body contributes nothing free.
                let mut inner = BTreeSet::new();
                b.collect_free(&mut inner);
                inner.remove(&Var::X);
                out.extend(inner);
            }
        }
    }

    /// Whether `v` occurs free.
    pub fn has_free(&self, v: Var) -> bool {
        match self {
            Formula::Atom(_, w) => *w == v,
            Formula::Const(_) => false,
            Formula::Bin(_, a, b) => a.has_free(v) || b.has_free(v),
            Formula::Forall(b) | Formula::Exists(b) => v != Var::X && b.has_free(v),
        }
    }

    /// True iff the formula has no free variables.
    pub fn is_closed(&self) -> bool {
        match self {
            Formula::Atom(..) => false,
            Formula::Const(_) => true,
            Formula::Bin(_, a, b) => a.is_closed() && b.is_closed(),
            Formula::Forall(b) | Formula::Exists(b) => b.free_vars().iter().all(|v| *v == Var::X),
        }
    }

    /// Replaces every free occurrence of `from` by `to`.
    pub fn substitute(&self, from: Var, to: Var) -> Formula {
        if from == to {
            return self.clone();
        }
        match self {
            Formula::Atom(i, v) => Formula::Atom(*i, if *v == from { to } else { *v }),
            Formula::Const(c) => Formula::Const(*c),
            Formula::Bin(op, a, b) => Formula::bin(*op, a.substitute(from, to), b.substitute(from, to)),
            Formula::Forall(b) if from != Var::X => Formula::forall(b.substitute(from, to)),
            Formula::Exists(b) if from != Var::X => Formula::exists(b.substitute(from, to)),
            Formula::Forall(_) | Formula::Exists(_) => self.clone(),
        }
    }

    /// The body of a quantified formula instantiated at `u`.
    pub fn instantiate(body: &Formula, u: Var) -> Formula {
        body.substitute(Var::X, u)
    }

    /// Checks the one-variable restriction: no parameter under a quantifier.
    pub fn check(&self) -> Result<(), SyntaxError> {
        self.check_inner(false)
    }

    fn check_inner(&self, under_quantifier: bool) -> Result<(), SyntaxError> {
        match self {
            Formula::Atom(_, v @ Var::Y(_)) if under_quantifier => Err(SyntaxError::Scope { var: *v }),
            Formula::Atom(..) | Formula::Const(_) => Ok(()),
            Formula::Bin(_, a, b) => {
                a.check_inner(under_quantifier)?;
                b.check_inner(under_quantifier)
            }
            Formula::Forall(b) | Formula::Exists(b) => b.check_inner(true),
        }
    }

    /// Largest parameter index occurring in the formula.
    pub fn max_param(&self) -> Option<u32> {
        match self {
            Formula::Atom(_, v) => v.index(),
            Formula::Const(_) => None,
            Formula::Bin(_, a, b) => a.max_param().max(b.max_param()),
            Formula::Forall(b) | Formula::Exists(b) => b.max_param(),
        }
    }

    /// Predicate indices occurring in the formula.
    pub fn predicates(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Atom(i, _) => {
                out.insert(*i);
            }
            Formula::Const(_) => {}
            Formula::Bin(_, a, b) => {
                a.predicates(out);
                b.predicates(out);
            }
            Formula::Forall(b) | Formula::Exists(b) => b.predicates(out),
        }
    }

    /// Number of connectives, quantifiers and atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Const(_) => 1,
            Formula::Bin(_, a, b) => 1 + a.size() + b.size(),
            Formula::Forall(b) | Formula::Exists(b) => 1 + b.size(),
        }
    }

    /// Nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Const(_) => 0,
            Formula::Bin(_, a, b) => 1 + a.depth().max(b.depth()),
            Formula::Forall(b) | Formula::Exists(b) => 1 + b.depth(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Bin(op, ..) => op.prec(),
            _ => PREC_UNARY,
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(i, v) => write!(f, "P{i}({v})"),
            Formula::Const(c) => f.write_str(c.symbol()),
            Formula::Bin(op, a, b) => {
                a.write_operand(f, needs_parens(*op, a.prec(), false))?;
                write!(f, " {} ", op.symbol())?;
                b.write_operand(f, needs_parens(*op, b.prec(), true))
            }
            Formula::Forall(b) => {
                f.write_str("forall x ")?;
                b.write_operand(f, b.prec() < PREC_UNARY)
            }
            Formula::Exists(b) => {
                f.write_str("exists x ")?;
                b.write_operand(f, b.prec() < PREC_UNARY)
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse_fo(s)
    }
}
