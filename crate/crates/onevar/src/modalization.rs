//! Elimination of auxiliary variables: turning a derivation of a
//! one-variable sequent into a certificate in a modal sequent calculus.
//!
//! The modal calculus has the propositional rules and the configured
//! structural rules over modal formulas, plus `[]=>`, `=><>`, `=>[]` (all
//! antecedent formulas modalized), `<>=>` (context and succedent
//! modalized) and `cut`.
//!
//! Elimination maps propositional and structural nodes rule for rule and
//! quantifier instantiations at `x` to `[]=>` and `=><>`. An eigenvariable
//! rule whose context mentions `x` is replaced by an interpolant detour:
//! after renaming `x` apart, interpolation separates the context from the
//! eigenvariable by a sentence `χ`, and the certificate cuts `Γ ⇒ χ` against
//! `χ ⇒ □ψ` (or `◇φ ⇒ χ` against `Γ, χ ⇒ Δ`).

use thiserror::Error;

use crate::error::Code;
use crate::interpolation::{extract, InterpError};
use crate::proof::{
    build, check_derivation, check_tree, check_two, rename_free, substitute_free, CalculusConfig, CheckError, Derivation, FoDerivation,
    Node, Rule,
};
use crate::syntax::{star, Formula, Modal, Var};

/// Derivations in the modal certificate calculus.
pub type ModalDerivation = Derivation<Modal>;

/// Why elimination failed.
#[derive(Debug, Error)]
pub enum ElimError {
    #[error("input derivation rejected: {0}")]
    Unchecked(CheckError),
    #[error("{code}: conclusion mentions {var}; only x may occur free")]
    NotOneVar { code: Code, var: Var },
    #[error("internal interpolation failure: {0}")]
    Interpolation(#[from] InterpError),
    #[error("internal renaming failure: {0}")]
    Rename(CheckError),
}

impl ElimError {
    pub fn code(&self) -> Code {
        match self {
            ElimError::Unchecked(e) | ElimError::Rename(e) => e.code,
            ElimError::NotOneVar { code, .. } => *code,
            ElimError::Interpolation(e) => e.code,
        }
    }
}

fn body(m: &Modal) -> Option<&Modal> {
    match m {
        Modal::Square(a) | Modal::Diamond(a) => Some(a),
        _ => None,
    }
}

fn square(m: &Modal) -> Option<&Modal> {
    matches!(m, Modal::Square(_)).then(|| body(m)).flatten()
}

fn diamond(m: &Modal) -> Option<&Modal> {
    matches!(m, Modal::Diamond(_)).then(|| body(m)).flatten()
}

fn modal_special(n: &Node<'_, Modal>) -> Result<(), CheckError> {
    let delta = n.succ().cloned();
    let unmodalized = |mut fs: Vec<&Modal>, rule: &str| -> Result<(), CheckError> {
        match fs.drain(..).find(|f| !f.is_closed()) {
            Some(f) => Err(n.err(Code::Modalized, format!("{rule} needs modalized side formulas, `{f}` is not"))),
            None => Ok(()),
        }
    };
    match n.d.rule {
        Rule::BoxLeft => {
            n.premises(1)?;
            let (i, a) = n.principal("a box formula", square)?;
            let mut ante = n.rest(i);
            ante.push(a.clone());
            n.expect_premise(0, ante, delta, Code::Schema)
        }
        Rule::DiaRight => {
            n.premises(1)?;
            let a = n.succ_shape("a diamond formula", diamond)?;
            n.expect_premise(0, n.ante().to_vec(), Some(a.clone()), Code::Schema)
        }
        Rule::BoxRight => {
            n.premises(1)?;
            let a = n.succ_shape("a box formula", square)?;
            n.expect_premise(0, n.ante().to_vec(), Some(a.clone()), Code::Schema)?;
            unmodalized(n.ante().iter().collect(), "=>[]")
        }
        Rule::DiaLeft => {
            n.premises(1)?;
            let (i, a) = n.principal("a diamond formula", diamond)?;
            let rest = n.rest(i);
            let mut ante = rest.clone();
            ante.push(a.clone());
            n.expect_premise(0, ante, delta.clone(), Code::Schema)?;
            unmodalized(rest.iter().chain(delta.iter()).collect(), "<>=>")
        }
        Rule::Cut => {
            n.premises(2)?;
            let cut = n.d.premises[0]
                .conclusion
                .succ()
                .cloned()
                .ok_or_else(|| n.err(Code::Schema, "the left premise of cut must have a succedent"))?;
            let (g1, mut g2) = n.split(None)?;
            g2.push(cut.clone());
            check_two(n, (g1, Some(cut)), (g2, delta))
        }
        r => Err(n.err(Code::Schema, format!("rule {r} is not part of the modal calculus"))),
    }
}

/// Checks a modal certificate against the calculus `cfg`.
pub fn check_modal_derivation(d: &ModalDerivation, cfg: &CalculusConfig) -> Result<(), CheckError> {
    check_tree(d, cfg, &modal_special)
}

/// Checks `d` and turns it into a modal certificate whose conclusion is the
/// star translation of the conclusion of `d`.
pub fn eliminate(d: &FoDerivation, cfg: &CalculusConfig) -> Result<ModalDerivation, ElimError> {
    check_derivation(d, cfg).map_err(ElimError::Unchecked)?;
    let s = &d.conclusion;
    let mut vars = std::collections::BTreeSet::new();
    for f in s.ante().iter().chain(s.succ()) {
        f.collect_free(&mut vars);
    }
    if let Some(&var) = vars.iter().find(|&&v| v != Var::X) {
        return Err(ElimError::NotOneVar { code: Code::NotOneVar, var });
    }
    elim(d)
}

fn stars(fs: &[Formula]) -> Vec<Modal> {
    fs.iter().map(star).collect()
}

/// The recursion; `d` is checked and only `x` is free in its conclusion.
fn elim(d: &FoDerivation) -> Result<ModalDerivation, ElimError> {
    let s = &d.conclusion;
    let succ = s.succ();
    let sub = |i: usize| elim(&d.premises[i]);
    let principal = || star(d.principal_formula().expect("checked left rule"));
    let parts = |m: &Modal| match m {
        Modal::Bin(_, a, b) => ((**a).clone(), (**b).clone()),
        _ => unreachable!("checked rule with a binary principal formula"),
    };
    let quantified = |f: &Formula| match f {
        Formula::Forall(b) | Formula::Exists(b) => (**b).clone(),
        _ => unreachable!("checked quantifier rule"),
    };
    Ok(match d.rule {
        Rule::Id => build::id(star(succ.expect("checked"))),
        Rule::ZeroLeft => build::zero_left(),
        Rule::UnitRight => build::unit_right(),
        Rule::UnitLeft => build::unit_left(sub(0)?),
        Rule::ZeroRight => build::zero_right(sub(0)?),
        Rule::ImpLeft => build::imp_left(sub(0)?, sub(1)?, principal()),
        Rule::ImpRight => {
            let (a, _) = parts(&star(succ.expect("checked")));
            build::imp_right(sub(0)?, &a)
        }
        Rule::MulLeft => {
            let (a, b) = parts(&principal());
            build::mul_left(sub(0)?, &a, &b)
        }
        Rule::MulRight => build::mul_right(sub(0)?, sub(1)?),
        Rule::AndLeft1 | Rule::AndLeft2 => {
            let (a, b) = parts(&principal());
            build::and_left(sub(0)?, &a, &b, d.rule == Rule::AndLeft1)
        }
        Rule::AndRight => build::and_right(sub(0)?, sub(1)?),
        Rule::OrLeft => {
            let (a, b) = parts(&principal());
            build::or_left(sub(0)?, sub(1)?, &a, &b)
        }
        Rule::OrRight1 | Rule::OrRight2 => {
            let (a, b) = parts(&star(succ.expect("checked")));
            let first = d.rule == Rule::OrRight1;
            build::or_right(sub(0)?, if first { b } else { a }, first)
        }
        Rule::Contract(k) => build::contract(sub(0)?, stars(d.params.pi.as_ref().expect("checked")), k),
        Rule::WeakLeft => build::weak_left(sub(0)?, stars(d.params.pi.as_ref().expect("checked"))),
        Rule::WeakRight => build::weak_right(sub(0)?, star(succ.expect("checked"))),
        Rule::ForallLeft | Rule::ExistsRight => {
            // Only x can be free, so a checked instantiation is at x unless
            // the conclusion is closed; normalize that case to x.
            let u = d.params.u.expect("checked");
            let p = substitute_free(&d.premises[0], u, Var::X);
            let m = elim(&p)?;
            if d.rule == Rule::ForallLeft {
                build::box_left(m, &star(&quantified(d.principal_formula().expect("checked"))))
            } else {
                build::dia_right(m)
            }
        }
        Rule::ForallRight => {
            let y = d.params.y.expect("checked");
            if s.ante().iter().all(Formula::is_closed) {
                return Ok(build::box_right(elim(&substitute_free(&d.premises[0], y, Var::X))?));
            }
            let fresh = d.fresh_param();
            let p = rename_free(&d.premises[0], Var::X, fresh).map_err(ElimError::Rename)?;
            let r = extract(&p, p.conclusion.ante().to_vec(), fresh, y)?;
            debug_assert!(r.chi.is_closed());
            let m1 = elim(&substitute_free(&r.d1, fresh, Var::X))?;
            let m2 = elim(&substitute_free(&r.d2, y, Var::X))?;
            build::cut(m1, build::box_right(m2))
        }
        Rule::ExistsLeft => {
            let y = d.params.y.expect("checked");
            let pf = d.principal_formula().expect("checked");
            let phi = quantified(pf);
            let mut rest = s.ante().to_vec();
            rest.remove(d.principal_index().expect("checked"));
            if rest.iter().chain(succ).all(Formula::is_closed) {
                let m = elim(&substitute_free(&d.premises[0], y, Var::X))?;
                return Ok(build::dia_left(m, &star(&phi)));
            }
            let fresh = d.fresh_param();
            let p = rename_free(&d.premises[0], Var::X, fresh).map_err(ElimError::Rename)?;
            let r = extract(&p, vec![Formula::instantiate(&phi, y)], y, fresh)?;
            debug_assert!(r.chi.is_closed());
            let m1 = elim(&substitute_free(&r.d1, y, Var::X))?;
            let m2 = elim(&substitute_free(&r.d2, fresh, Var::X))?;
            build::cut(build::dia_left(m1, &star(&phi)), m2)
        }
        Rule::BoxLeft | Rule::DiaRight | Rule::BoxRight | Rule::DiaLeft | Rule::Cut => {
            unreachable!("checked first-order derivation uses rule {}", d.rule)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{from_json_str, Sequent};
    use crate::search::{prove, Budget, Verdict};

    fn proof(s: &str, cfg: &CalculusConfig) -> FoDerivation {
        match prove(&Sequent::parse(s).unwrap(), cfg, &Budget::default()) {
            Verdict::Proved(d) => d,
            v => panic!("{s}: {v:?}"),
        }
    }

    fn certify(d: &FoDerivation, cfg: &CalculusConfig) -> ModalDerivation {
        let m = eliminate(d, cfg).unwrap();
        check_modal_derivation(&m, cfg).unwrap();
        let want = Sequent::new(stars(d.conclusion.ante()), d.conclusion.succ().map(star));
        assert_eq!(m.conclusion, want);
        m
    }

    #[test]
    fn checker_examples() {
        let cfg = CalculusConfig::fle();
        let id: ModalDerivation = from_json_str(r#"{"rule": "id", "conclusion": "[]p0 |- []p0"}"#).unwrap();
        check_modal_derivation(&id, &cfg).unwrap();
        let bad: ModalDerivation = from_json_str(
            r#"{"rule": "=>[]", "conclusion": "p1 |- []p0", "premises": [{"rule": "id", "conclusion": "p1 |- p0"}]}"#,
        )
        .unwrap();
        assert_eq!(check_modal_derivation(&bad, &cfg).unwrap_err().code, Code::Modalized);
        let cut = build::cut(build::unit_right(), build::unit_left(build::id(Modal::atom(0))));
        assert_eq!(cut.conclusion.to_string(), "p0 |- p0");
        check_modal_derivation(&cut, &cfg).unwrap();
        let fo: ModalDerivation = from_json_str(
            r#"{"rule": "forall=>", "conclusion": "[]p0 |- p0", "params": {"u": "x"}, "premises": [{"rule": "id", "conclusion": "p0 |- p0"}]}"#,
        )
        .unwrap();
        assert_eq!(check_modal_derivation(&fo, &cfg).unwrap_err().code, Code::Schema);
    }

    #[test]
    fn elimination_examples() {
        let cfg = CalculusConfig::fle();
        let d = proof("forall x (P0(x) & P1(x)) |- forall x P0(x)", &cfg);
        let m = certify(&d, &cfg);
        assert_eq!(m.conclusion.to_string(), "[](p0 & p1) |- []p0");
        assert_eq!(m.rule, Rule::BoxRight);

        let d = proof("forall x P0(x) |- exists x P0(x)", &cfg);
        let m = certify(&d, &cfg);
        assert_eq!(m.conclusion.to_string(), "[]p0 |- <>p0");
        assert_eq!(m.rules(), [Rule::Id, Rule::DiaRight, Rule::BoxLeft].into_iter().collect());

        let d = build::id("P0(x)".parse::<Formula>().unwrap());
        let m = certify(&d, &cfg);
        assert_eq!((m.rule, m.conclusion.to_string().as_str()), (Rule::Id, "p0 |- p0"));
    }

    #[test]
    fn detours_through_interpolants() {
        let cfg = CalculusConfig::fle();
        for s in [
            "P0(x), P0(x) -> forall x P1(x) |- forall x P1(x)",
            "P0(x) * forall x P1(x) |- P0(x) * forall x P1(x)",
            "forall x (P0(x) -> forall x P1(x)) |- exists x P0(x) -> forall x P1(x)",
            "exists x P0(x) -> forall x P1(x) |- forall x (P0(x) -> forall x P1(x))",
            "P1(x), exists x P0(x) |- P1(x) * exists x P0(x)",
            "exists x (P0(x) * forall x P1(x)) |- exists x P0(x) * forall x P1(x)",
        ] {
            let d = proof(s, &cfg);
            certify(&d, &cfg);
        }
        let d = proof("P0(x), P0(x) -> forall x P1(x) |- forall x P1(x)", &cfg);
        assert_eq!(d.rule, Rule::ForallRight);
        assert_eq!(certify(&d, &cfg).rule, Rule::Cut);
        let d = proof("P1(x), exists x P0(x) |- P1(x) * exists x P0(x)", &cfg);
        assert_eq!(d.rule, Rule::ExistsLeft);
        assert_eq!(certify(&d, &cfg).rule, Rule::Cut);
    }

    #[test]
    fn rejects_extra_variables() {
        let d = build::id("P0(y1)".parse::<Formula>().unwrap());
        assert_eq!(eliminate(&d, &CalculusConfig::fle()).unwrap_err().code(), Code::NotOneVar);
    }
}
