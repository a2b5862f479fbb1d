//! The standard translations between first-order and modal formulas.

use super::{Formula, Modal, Var};

/// Maps `∀` to `[]`, `∃` to `<>` and `Pᵢ(v)` to `pᵢ`, whatever `v` is.
pub fn star(phi: &Formula) -> Modal {
    match phi {
        Formula::Atom(i, _) => Modal::Atom(*i),
        Formula::Const(c) => Modal::Const(*c),
        Formula::Bin(op, a, b) => Modal::bin(*op, star(a), star(b)),
        Formula::Forall(b) => Modal::square(star(b)),
        Formula::Exists(b) => Modal::diamond(star(b)),
    }
}

/// Inverse of [`star`] on formulas whose only variable is `x`.
pub fn circle(alpha: &Modal) -> Formula {
    match alpha {
        Modal::Atom(i) => Formula::Atom(*i, Var::X),
        Modal::Const(c) => Formula::Const(*c),
        Modal::Bin(op, a, b) => Formula::bin(*op, circle(a), circle(b)),
        Modal::Square(a) => Formula::forall(circle(a)),
        Modal::Diamond(a) => Formula::exists(circle(a)),
    }
}
