//! Formula languages: one-variable first-order formulas with free parameters,
//! modal formulas, their concrete grammar, and the standard translations.

mod formula;
mod modal;
mod parse;
mod translate;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::Code;

pub use formula::Formula;
pub use modal::Modal;
pub use parse::{parse_fo, parse_modal, parse_fo_list, parse_modal_list, Lexer, Token};
pub(crate) use parse::{indexed, Ast, Parser};
pub use translate::{circle, star};

/// A first-order variable: the distinguished bindable `x` or a parameter `yₙ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y(u32),
}

impl Var {
    /// Index of a parameter, `None` for `x`.
    pub fn index(self) -> Option<u32> {
        match self {
            Var::X => None,
            Var::Y(n) => Some(n),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => f.write_str("x"),
            Var::Y(n) => write!(f, "y{n}"),
        }
    }
}

impl FromStr for Var {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "x" {
            return Ok(Var::X);
        }
        s.strip_prefix('y')
            .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|rest| rest.parse().ok())
            .map(Var::Y)
            .ok_or_else(|| SyntaxError::Syntax {
                pos: 0,
                msg: format!("`{s}` is not a variable (expected x or yN)"),
            })
    }
}

/// The nullary connectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Const {
    E,
    F,
}

impl Const {
    pub fn symbol(self) -> &'static str {
        match self {
            Const::E => "e",
            Const::F => "f",
        }
    }
}

/// The binary connectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    And,
    Or,
    Mul,
    Imp,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Mul => "*",
            BinOp::Imp => "->",
        }
    }

    /// Operation name used in algebra signatures.
    pub fn op_name(self) -> &'static str {
        match self {
            BinOp::And => "and",
            BinOp::Or => "or",
            BinOp::Mul => "mul",
            BinOp::Imp => "imp",
        }
    }

    /// Binding strength; larger binds tighter.
    pub(crate) fn prec(self) -> u8 {
        match self {
            BinOp::Imp => 1,
            BinOp::Or => 2,
            BinOp::And => 3,
            BinOp::Mul => 4,
        }
    }

    pub(crate) fn right_assoc(self) -> bool {
        matches!(self, BinOp::Imp)
    }
}

/// Precedence of atoms, constants and prefix operators.
pub(crate) const PREC_UNARY: u8 = 5;

/// Writes `child` as an operand of `op` on the given side, adding parentheses
/// only where the grammar needs them.
pub(crate) fn needs_parens(op: BinOp, child_prec: u8, right: bool) -> bool {
    let p = op.prec();
    if child_prec != p {
        return child_prec < p;
    }
    // Same level: only the associative side may omit parentheses.
    op.right_assoc() != right
}

/// Parse failures.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("E-SYNTAX: {msg} (at byte {pos})")]
    Syntax { pos: usize, msg: String },
    #[error("E-BOUND-VAR: quantifier over `{var}`; only x may be bound")]
    BoundVar { var: String },
    #[error("E-SCOPE: `{var}` occurs free under a quantifier")]
    Scope { var: Var },
}

impl SyntaxError {
    pub fn code(&self) -> Code {
        match self {
            SyntaxError::Syntax { .. } => Code::Syntax,
            SyntaxError::BoundVar { .. } => Code::BoundVar,
            SyntaxError::Scope { .. } => Code::Scope,
        }
    }
}
