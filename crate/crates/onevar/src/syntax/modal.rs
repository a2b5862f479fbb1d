//! Propositional modal formulas with `[]` and `<>`.

use std::collections::BTreeSet;
use std::fmt;

use super::{needs_parens, BinOp, Const, SyntaxError, PREC_UNARY};

/// A modal formula over atoms `pᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modal {
    Atom(u32),
    Const(Const),
    Bin(BinOp, Box<Modal>, Box<Modal>),
    Square(Box<Modal>),
    Diamond(Box<Modal>),
}

impl Modal {
    pub fn atom(i: u32) -> Self {
        Modal::Atom(i)
    }

    pub fn e() -> Self {
        Modal::Const(Const::E)
    }

    pub fn f() -> Self {
        Modal::Const(Const::F)
    }

    pub fn bin(op: BinOp, a: Modal, b: Modal) -> Self {
        Modal::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn and(a: Modal, b: Modal) -> Self {
        Self::bin(BinOp::And, a, b)
    }

    pub fn or(a: Modal, b: Modal) -> Self {
        Self::bin(BinOp::Or, a, b)
    }

    pub fn mul(a: Modal, b: Modal) -> Self {
        Self::bin(BinOp::Mul, a, b)
    }

    pub fn imp(a: Modal, b: Modal) -> Self {
        Self::bin(BinOp::Imp, a, b)
    }

    pub fn square(a: Modal) -> Self {
        Modal::Square(Box::new(a))
    }

    pub fn diamond(a: Modal) -> Self {
        Modal::Diamond(Box::new(a))
    }

    /// True iff every atom occurrence lies under some `[]` or `<>`.
    pub fn is_closed(&self) -> bool {
        match self {
            Modal::Atom(_) => false,
            Modal::Const(_) | Modal::Square(_) | Modal::Diamond(_) => true,
            Modal::Bin(_, a, b) => a.is_closed() && b.is_closed(),
        }
    }

    /// Atom indices occurring in the formula.
    pub fn atoms(&self, out: &mut BTreeSet<u32>) {
        match self {
            Modal::Atom(i) => {
                out.insert(*i);
            }
            Modal::Const(_) => {}
            Modal::Bin(_, a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
            Modal::Square(a) | Modal::Diamond(a) => a.atoms(out),
        }
    }

    /// Renames every atom index through `map`.
    pub fn rename_atoms(&self, map: &dyn Fn(u32) -> u32) -> Modal {
        match self {
            Modal::Atom(i) => Modal::Atom(map(*i)),
            Modal::Const(c) => Modal::Const(*c),
            Modal::Bin(op, a, b) => Modal::bin(*op, a.rename_atoms(map), b.rename_atoms(map)),
            Modal::Square(a) => Modal::square(a.rename_atoms(map)),
            Modal::Diamond(a) => Modal::diamond(a.rename_atoms(map)),
        }
    }

    /// Nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Modal::Atom(_) | Modal::Const(_) => 0,
            Modal::Bin(_, a, b) => 1 + a.depth().max(b.depth()),
            Modal::Square(a) | Modal::Diamond(a) => 1 + a.depth(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Modal::Bin(op, ..) => op.prec(),
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

impl fmt::Display for Modal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modal::Atom(i) => write!(f, "p{i}"),
            Modal::Const(c) => f.write_str(c.symbol()),
            Modal::Bin(op, a, b) => {
                a.write_operand(f, needs_parens(*op, a.prec(), false))?;
                write!(f, " {} ", op.symbol())?;
                b.write_operand(f, needs_parens(*op, b.prec(), true))
            }
            Modal::Square(a) => {
                f.write_str("[]")?;
                a.write_operand(f, a.prec() < PREC_UNARY)
            }
            Modal::Diamond(a) => {
                f.write_str("<>")?;
                a.write_operand(f, a.prec() < PREC_UNARY)
            }
        }
    }
}

impl std::str::FromStr for Modal {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse_modal(s)
    }
}
