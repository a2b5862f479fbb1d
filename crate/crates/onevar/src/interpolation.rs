//! Interpolant extraction from derivations of partitioned sequents.
//!
//! Given a derivation of `Γ, Π ⇒ Δ`, a variable `y` that may occur only in
//! `Γ` and a variable `z` that may occur only in `Π ⇒ Δ`, extraction yields a
//! formula `χ` over the shared variables together with derivations of
//! `Γ ⇒ χ` and `Π, χ ⇒ Δ`, neither using more eigenvariable rules along a
//! branch than the input.
//!
//! The recursion works on a generalized query: the antecedent is split into
//! a first part `A` and a second part `B`, each side has a set of private
//! variables, and the succedent belongs to the second side. Eigenvariables
//! become private to the side that owns their principal formula. Cases that
//! need the orientation reversed (the left premise of `→⇒`, instantiations
//! at a private variable of the other side) call the same recursion with the
//! sides exchanged.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::error::Code;
use crate::proof::{build, check_derivation, product, CalculusConfig, FoDerivation, Rule};
use crate::syntax::{Formula, Var};

/// Result of interpolation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpolant {
    pub chi: Formula,
    /// Derivation of `Γ ⇒ χ`.
    pub d1: FoDerivation,
    /// Derivation of `Π, χ ⇒ Δ`.
    pub d2: FoDerivation,
}

/// A rejected interpolation query.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("{code}: {detail}")]
pub struct InterpError {
    pub code: Code,
    pub detail: String,
}

impl InterpError {
    fn partition(detail: impl Into<String>) -> Self {
        InterpError { code: Code::Partition, detail: detail.into() }
    }
}

/// Checks `d` under `cfg`, then extracts an interpolant for the partition
/// whose `Γ` part consists of the conclusion antecedent indices `gamma`.
pub fn interpolate(d: &FoDerivation, gamma: &[usize], y: Var, z: Var, cfg: &CalculusConfig) -> Result<Interpolant, InterpError> {
    check_derivation(d, cfg).map_err(|e| InterpError { code: Code::Unchecked, detail: e.to_string() })?;
    let ante = d.conclusion.ante();
    let mut chosen = vec![false; ante.len()];
    for &i in gamma {
        if i >= ante.len() || chosen[i] {
            return Err(InterpError::partition(format!("invalid antecedent index {i}")));
        }
        chosen[i] = true;
    }
    let a = ante.iter().zip(&chosen).filter(|(_, &c)| c).map(|(f, _)| f.clone()).collect();
    extract(d, a, y, z)
}

/// Extracts an interpolant for an already checked derivation, with the `Γ`
/// part given as a sub-multiset of the antecedent.
pub fn extract(d: &FoDerivation, gamma: Vec<Formula>, y: Var, z: Var) -> Result<Interpolant, InterpError> {
    if y == z {
        return Err(InterpError::partition("y and z must differ"));
    }
    if y == Var::X || z == Var::X {
        return Err(InterpError::partition("y and z must differ from x"));
    }
    let s = &d.conclusion;
    if s.ante().iter().chain(s.succ()).any(|f| f.has_free(Var::X)) {
        return Err(InterpError::partition("x occurs free in the conclusion"));
    }
    let pi = crate::proof::multiset_minus(s.ante(), &gamma)
        .ok_or_else(|| InterpError::partition("the Γ part is not a sub-multiset of the antecedent"))?;
    if gamma.iter().any(|f| f.has_free(z)) {
        return Err(InterpError::partition(format!("{z} occurs in the Γ part")));
    }
    if pi.iter().chain(s.succ()).any(|f| f.has_free(y)) {
        return Err(InterpError::partition(format!("{y} occurs outside the Γ part")));
    }
    Ok(go(d, gamma, pi, &BTreeSet::from([y]), &BTreeSet::from([z])))
}

fn mentions(fs: &[Formula], vars: &BTreeSet<Var>) -> bool {
    vars.iter().any(|&v| fs.iter().any(|f| f.has_free(v)))
}

fn without(v: &[Formula], f: &Formula) -> Vec<Formula> {
    crate::proof::multiset_minus(v, std::slice::from_ref(f)).expect("formula present")
}

fn with(v: &[Formula], add: &[&Formula]) -> Vec<Formula> {
    let mut out = v.to_vec();
    out.extend(add.iter().map(|f| (*f).clone()));
    out
}

/// Splits `part` (a sub-multiset of `g1 ⊎ g2`) along a context split: the
/// elements of `part` that go with `g1`, the rest of `g1`, the elements of
/// `part` that go with `g2`, and the rest of `g2`.
fn divide(part: &[Formula], g1: &[Formula], g2: &[Formula]) -> (Vec<Formula>, Vec<Formula>, Vec<Formula>, Vec<Formula>) {
    let mut remaining = part.to_vec();
    let mut p1 = Vec::new();
    let mut o1 = Vec::new();
    for f in g1 {
        match remaining.iter().position(|g| g == f) {
            Some(i) => p1.push(remaining.remove(i)),
            None => o1.push(f.clone()),
        }
    }
    let o2 = crate::proof::multiset_minus(g2, &remaining).expect("partition covers the context");
    (p1, o1, remaining, o2)
}

fn private(set: &BTreeSet<Var>, add: Var) -> BTreeSet<Var> {
    let mut s = set.clone();
    s.insert(add);
    s
}

fn public(set: &BTreeSet<Var>, remove: Var) -> BTreeSet<Var> {
    let mut s = set.clone();
    s.remove(&remove);
    s
}

fn binary(f: &Formula) -> (&Formula, &Formula) {
    match f {
        Formula::Bin(_, a, b) => (a, b),
        _ => unreachable!("checked derivation: `{f}` is not binary"),
    }
}

fn body(f: &Formula) -> &Formula {
    match f {
        Formula::Forall(b) | Formula::Exists(b) => b,
        _ => unreachable!("checked derivation: `{f}` is not quantified"),
    }
}

/// Applies a single-premise propositional left rule with principal `p`.
fn left(rule: Rule, d: FoDerivation, p: &Formula) -> FoDerivation {
    match rule {
        Rule::UnitLeft => build::unit_left(d),
        Rule::MulLeft => {
            let (a, b) = binary(p);
            build::mul_left(d, a, b)
        }
        Rule::AndLeft1 | Rule::AndLeft2 => {
            let (a, b) = binary(p);
            build::and_left(d, a, b, rule == Rule::AndLeft1)
        }
        _ => unreachable!("not a single-premise propositional left rule"),
    }
}

/// Interpolates `a, b ⇒ Δ` (the conclusion of `d`): returns `χ` with
/// `a ⇒ χ` and `b, χ ⇒ Δ`. The variables in `ya` occur at most in `a`,
/// those in `zb` at most in `b` and `Δ`, and `χ` avoids both.
fn go(d: &FoDerivation, a: Vec<Formula>, b: Vec<Formula>, ya: &BTreeSet<Var>, zb: &BTreeSet<Var>) -> Interpolant {
    let succ = d.conclusion.succ();
    if !mentions(&a, ya) {
        return Interpolant { chi: product(&a), d1: build::product_right(&a), d2: build::product_left(d.clone(), &a) };
    }
    if !mentions(&b, zb) && !succ.is_some_and(|f| mentions(std::slice::from_ref(f), zb)) {
        let pb = product(&b);
        let delta = succ.cloned().unwrap_or_else(Formula::f);
        let chi = Formula::imp(pb.clone(), delta);
        let mut t = build::product_left(d.clone(), &b);
        if succ.is_none() {
            t = build::zero_right(t);
        }
        let d1 = build::imp_right(t, &pb);
        let sigma = match succ {
            Some(f) => build::id(f.clone()),
            None => build::zero_left(),
        };
        let d2 = build::imp_left(build::product_right(&b), sigma, chi.clone());
        return Interpolant { chi, d1, d2 };
    }
    let prem = |i: usize| &d.premises[i];
    let mut concl_vars = BTreeSet::new();
    for f in d.conclusion.ante().iter().chain(succ) {
        f.collect_free(&mut concl_vars);
    }
    match d.rule {
        Rule::Id | Rule::ZeroLeft | Rule::UnitRight => {
            unreachable!("an axiom always satisfies one of the shortcuts")
        }
        Rule::UnitLeft | Rule::MulLeft | Rule::AndLeft1 | Rule::AndLeft2 => {
            let p = d.principal_formula().expect("checked left rule");
            let comps: Vec<&Formula> = match d.rule {
                Rule::UnitLeft => vec![],
                Rule::MulLeft => {
                    let (x, y) = binary(p);
                    vec![x, y]
                }
                Rule::AndLeft1 => vec![binary(p).0],
                _ => vec![binary(p).1],
            };
            if a.contains(p) {
                let r = go(prem(0), with(&without(&a, p), &comps), b, ya, zb);
                Interpolant { d1: left(d.rule, r.d1, p), ..r }
            } else {
                let r = go(prem(0), a, with(&without(&b, p), &comps), ya, zb);
                Interpolant { d2: left(d.rule, r.d2, p), ..r }
            }
        }
        Rule::OrLeft => {
            let p = d.principal_formula().expect("checked left rule");
            let (x, y) = binary(p);
            if a.contains(p) {
                let rest = without(&a, p);
                let r1 = go(prem(0), with(&rest, &[x]), b.clone(), ya, zb);
                let r2 = go(prem(1), with(&rest, &[y]), b, ya, zb);
                let chi = Formula::or(r1.chi.clone(), r2.chi.clone());
                let d1 = build::or_left(
                    build::or_right(r1.d1, r2.chi.clone(), true),
                    build::or_right(r2.d1, r1.chi.clone(), false),
                    x,
                    y,
                );
                let d2 = build::or_left(r1.d2, r2.d2, &r1.chi, &r2.chi);
                Interpolant { chi, d1, d2 }
            } else {
                let rest = without(&b, p);
                let r1 = go(prem(0), a.clone(), with(&rest, &[x]), ya, zb);
                let r2 = go(prem(1), a, with(&rest, &[y]), ya, zb);
                let chi = Formula::and(r1.chi.clone(), r2.chi.clone());
                let d1 = build::and_right(r1.d1, r2.d1);
                let d2 = build::or_left(
                    build::and_left(r1.d2, &r1.chi, &r2.chi, true),
                    build::and_left(r2.d2, &r1.chi, &r2.chi, false),
                    x,
                    y,
                );
                Interpolant { chi, d1, d2 }
            }
        }
        Rule::ImpLeft => {
            let p = d.principal_formula().expect("checked left rule");
            let y = binary(p).1;
            let (g1, g2) = d.context_split();
            if a.contains(p) {
                let (a1, b1, a2, b2) = divide(&without(&a, p), &g1, &g2);
                let r2 = go(prem(1), with(&a2, &[y]), b2, ya, zb);
                // Left premise `a1, b1 ⇒ x` with `x` on the first side: swap.
                let r1 = go(prem(0), b1, a1, zb, ya);
                let chi = Formula::imp(r1.chi.clone(), r2.chi.clone());
                let d1 = build::imp_right(build::imp_left(r1.d2, r2.d1, p.clone()), &r1.chi);
                let d2 = build::imp_left(r1.d1, r2.d2, chi.clone());
                Interpolant { chi, d1, d2 }
            } else {
                let (a1, b1, a2, b2) = divide(&a, &g1, &g2);
                let r1 = go(prem(0), a1, b1, ya, zb);
                let r2 = go(prem(1), a2, with(&b2, &[y]), ya, zb);
                let chi = Formula::mul(r1.chi.clone(), r2.chi.clone());
                let d1 = build::mul_right(r1.d1, r2.d1);
                let d2 = build::mul_left(build::imp_left(r1.d2, r2.d2, p.clone()), &r1.chi, &r2.chi);
                Interpolant { chi, d1, d2 }
            }
        }
        Rule::MulRight => {
            let (g1, g2) = d.context_split();
            let (a1, b1, a2, b2) = divide(&a, &g1, &g2);
            let r1 = go(prem(0), a1, b1, ya, zb);
            let r2 = go(prem(1), a2, b2, ya, zb);
            let chi = Formula::mul(r1.chi.clone(), r2.chi.clone());
            let d1 = build::mul_right(r1.d1, r2.d1);
            let d2 = build::mul_left(build::mul_right(r1.d2, r2.d2), &r1.chi, &r2.chi);
            Interpolant { chi, d1, d2 }
        }
        Rule::AndRight => {
            let r1 = go(prem(0), a.clone(), b.clone(), ya, zb);
            let r2 = go(prem(1), a, b, ya, zb);
            let chi = Formula::and(r1.chi.clone(), r2.chi.clone());
            let d1 = build::and_right(r1.d1, r2.d1);
            let d2 = build::and_right(
                build::and_left(r1.d2, &r1.chi, &r2.chi, true),
                build::and_left(r2.d2, &r1.chi, &r2.chi, false),
            );
            Interpolant { chi, d1, d2 }
        }
        Rule::ImpRight => {
            let (x, _) = binary(succ.expect("checked"));
            let r = go(prem(0), a, with(&b, &[x]), ya, zb);
            Interpolant { d2: build::imp_right(r.d2, x), ..r }
        }
        Rule::ZeroRight => {
            let r = go(prem(0), a, b, ya, zb);
            Interpolant { d2: build::zero_right(r.d2), ..r }
        }
        Rule::OrRight1 | Rule::OrRight2 => {
            let (x, y) = binary(succ.expect("checked"));
            let first = d.rule == Rule::OrRight1;
            let other = if first { y } else { x };
            let r = go(prem(0), a, b, ya, zb);
            Interpolant { d2: build::or_right(r.d2, other.clone(), first), ..r }
        }
        Rule::WeakRight => {
            let r = go(prem(0), a, b, ya, zb);
            Interpolant { d2: build::weak_right(r.d2, succ.expect("checked").clone()), ..r }
        }
        Rule::WeakLeft | Rule::Contract(_) => {
            let pi = d.params.pi.as_ref().expect("checked structural rule");
            // Copies of Π formulas available in `a` are attributed to `a`.
            let mut avail = a.clone();
            let (mut pa, mut pb) = (Vec::new(), Vec::new());
            for f in pi {
                match avail.iter().position(|g| g == f) {
                    Some(i) => pa.push(avail.remove(i)),
                    None => pb.push(f.clone()),
                }
            }
            let (a2, b2) = match d.rule {
                Rule::Contract(k) => {
                    let grow = |v: &[Formula], p: &[Formula]| {
                        let mut out = v.to_vec();
                        for _ in 1..k {
                            out.extend(p.iter().cloned());
                        }
                        out
                    };
                    (grow(&a, &pa), grow(&b, &pb))
                }
                _ => (
                    crate::proof::multiset_minus(&a, &pa).expect("pi part of a"),
                    crate::proof::multiset_minus(&b, &pb).expect("pi part of b"),
                ),
            };
            let r = go(prem(0), a2, b2, ya, zb);
            let wrap = |dd: FoDerivation, p: Vec<Formula>| {
                if p.is_empty() {
                    dd
                } else if let Rule::Contract(k) = d.rule {
                    build::contract(dd, p, k)
                } else {
                    build::weak_left(dd, p)
                }
            };
            Interpolant { chi: r.chi, d1: wrap(r.d1, pa), d2: wrap(r.d2, pb) }
        }
        Rule::ExistsLeft => {
            let p = d.principal_formula().expect("checked left rule");
            let u = d.params.y.expect("checked eigenvariable");
            let inst = Formula::instantiate(body(p), u);
            if a.contains(p) {
                let r = go(prem(0), with(&without(&a, p), &[&inst]), b, &private(ya, u), &public(zb, u));
                Interpolant { d1: build::exists_left(r.d1, body(p), u), ..r }
            } else {
                let r = go(prem(0), a, with(&without(&b, p), &[&inst]), &public(ya, u), &private(zb, u));
                Interpolant { d2: build::exists_left(r.d2, body(p), u), ..r }
            }
        }
        Rule::ForallRight => {
            let u = d.params.y.expect("checked eigenvariable");
            let r = go(prem(0), a, b, &public(ya, u), &private(zb, u));
            Interpolant { d2: build::forall_right(r.d2, body(succ.expect("checked")), u), ..r }
        }
        Rule::ForallLeft => {
            let p = d.principal_formula().expect("checked left rule");
            let phi = body(p);
            let u = d.params.u.expect("checked instantiation");
            let inst = Formula::instantiate(phi, u);
            let fresh = !concl_vars.contains(&u);
            if a.contains(p) {
                let rest = without(&a, p);
                if !fresh && zb.contains(&u) {
                    let r = go(prem(0), rest, with(&b, &[&inst]), ya, zb);
                    let chi = Formula::mul(r.chi.clone(), p.clone());
                    let d1 = build::mul_right(r.d1, build::id(p.clone()));
                    let d2 = build::mul_left(build::forall_left(r.d2, phi, u), &r.chi, p);
                    return Interpolant { chi, d1, d2 };
                }
                let (ya2, zb2) = if fresh { (private(ya, u), public(zb, u)) } else { (ya.clone(), zb.clone()) };
                let r = go(prem(0), with(&rest, &[&inst]), b, &ya2, &zb2);
                Interpolant { d1: build::forall_left(r.d1, phi, u), ..r }
            } else {
                let rest = without(&b, p);
                if !fresh && ya.contains(&u) {
                    let r = go(prem(0), with(&a, &[&inst]), rest, ya, zb);
                    let chi = Formula::imp(p.clone(), r.chi.clone());
                    let d1 = build::imp_right(build::forall_left(r.d1, phi, u), p);
                    let d2 = build::imp_left(build::id(p.clone()), r.d2, chi.clone());
                    return Interpolant { chi, d1, d2 };
                }
                let (ya2, zb2) = if fresh { (public(ya, u), private(zb, u)) } else { (ya.clone(), zb.clone()) };
                let r = go(prem(0), a, with(&rest, &[&inst]), &ya2, &zb2);
                Interpolant { d2: build::forall_left(r.d2, phi, u), ..r }
            }
        }
        Rule::ExistsRight => {
            let q = succ.expect("checked");
            let phi = body(q);
            let u = d.params.u.expect("checked instantiation");
            let fresh = !concl_vars.contains(&u);
            if !fresh && ya.contains(&u) {
                // The instance belongs to the first side: swap.
                let r = go(prem(0), b, a, zb, ya);
                let chi = Formula::imp(r.chi.clone(), q.clone());
                let d1 = build::imp_right(build::exists_right(r.d2, phi, u), &r.chi);
                let d2 = build::imp_left(r.d1, build::id(q.clone()), chi.clone());
                return Interpolant { chi, d1, d2 };
            }
            let (ya2, zb2) = if fresh { (public(ya, u), private(zb, u)) } else { (ya.clone(), zb.clone()) };
            let r = go(prem(0), a, b, &ya2, &zb2);
            Interpolant { d2: build::exists_right(r.d2, phi, u), ..r }
        }
        Rule::BoxLeft | Rule::DiaRight | Rule::BoxRight | Rule::DiaLeft | Rule::Cut => {
            unreachable!("checked first-order derivation uses rule {}", d.rule)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fo(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn verify(d: &FoDerivation, gamma: &[usize], y: Var, z: Var) -> Interpolant {
        let cfg = CalculusConfig::fle();
        let r = interpolate(d, gamma, y, z, &cfg).unwrap();
        check_derivation(&r.d1, &cfg).unwrap();
        check_derivation(&r.d2, &cfg).unwrap();
        assert!(r.d1.metrics().md <= d.metrics().md && r.d2.metrics().md <= d.metrics().md);
        assert!(!r.chi.has_free(y) && !r.chi.has_free(z));
        r
    }

    #[test]
    fn instantiation_example() {
        let d = build::exists_right(build::id(fo("P0(y1)")), &fo("P0(x)"), Var::Y(1));
        let r = verify(&d, &[0], Var::Y(1), Var::Y(2));
        assert_eq!(r.chi.to_string(), "e -> exists x P0(x)");
        assert_eq!(r.d1.conclusion.to_string(), "P0(y1) |- e -> exists x P0(x)");
        assert_eq!(r.d2.conclusion.to_string(), "e -> exists x P0(x) |- exists x P0(x)");
    }

    #[test]
    fn empty_gamma_example() {
        let d = build::id(fo("P0(y2)"));
        let r = verify(&d, &[], Var::Y(1), Var::Y(2));
        assert_eq!(r.chi, Formula::e());
        assert_eq!(r.d1.conclusion.to_string(), "|- e");
        assert_eq!(r.d2.conclusion.to_string(), "P0(y2), e |- P0(y2)");
    }

    #[test]
    fn implication_example() {
        let d = build::imp_left(
            build::id(fo("P0(y1)")),
            build::forall_left(build::id(fo("P1(y2)")), &fo("P1(x)"), Var::Y(2)),
            fo("P0(y1) -> forall x P1(x)"),
        );
        assert_eq!(d.conclusion.to_string(), "P0(y1), P0(y1) -> forall x P1(x) |- P1(y2)");
        let r = verify(&d, &[0, 1], Var::Y(1), Var::Y(2));
        assert_eq!(r.chi.to_string(), "e -> forall x P1(x)");
        assert_eq!(r.d1.conclusion.to_string(), "P0(y1), P0(y1) -> forall x P1(x) |- e -> forall x P1(x)");
        assert_eq!(r.d2.conclusion.to_string(), "e -> forall x P1(x) |- P1(y2)");
    }

    #[test]
    fn crossing_instantiations() {
        // A universal on the Γ side instantiated at z.
        let tail = build::unit_left(build::id(fo("P0(y2)")));
        let p = build::imp_left(build::id(fo("P1(y1)")), tail, fo("P1(y1) -> e"));
        let d = build::forall_left(p, &fo("P0(x)"), Var::Y(2));
        assert_eq!(d.conclusion.to_string(), "P1(y1), P1(y1) -> e, forall x P0(x) |- P0(y2)");
        let r = verify(&d, &[0, 1, 2], Var::Y(1), Var::Y(2));
        assert_eq!(r.chi.to_string(), "(e -> e) * forall x P0(x)");
        // An existential succedent instantiated at y.
        let tail = build::unit_left(build::id(fo("P0(y1)")));
        let p = build::imp_left(build::id(fo("P1(y2)")), tail, fo("P1(y2) -> e"));
        let d = build::exists_right(p, &fo("P0(x)"), Var::Y(1));
        assert_eq!(d.conclusion.to_string(), "P0(y1), P1(y2), P1(y2) -> e |- exists x P0(x)");
        let r = verify(&d, &[0], Var::Y(1), Var::Y(2));
        assert!(r.chi.is_closed(), "{}", r.chi);
    }

    #[test]
    fn rejects_bad_partitions() {
        let cfg = CalculusConfig::fle();
        let d = build::id(fo("P0(y1)"));
        let e = interpolate(&d, &[], Var::Y(1), Var::Y(2), &cfg).unwrap_err();
        assert_eq!(e.code, Code::Partition);
        let e = interpolate(&d, &[0], Var::Y(1), Var::Y(1), &cfg).unwrap_err();
        assert_eq!(e.code, Code::Partition);
        let e = interpolate(&d, &[3], Var::Y(1), Var::Y(2), &cfg).unwrap_err();
        assert_eq!(e.code, Code::Partition);
        let mut bad = d.clone();
        bad.rule = Rule::ZeroLeft;
        let e = interpolate(&bad, &[0], Var::Y(1), Var::Y(2), &cfg).unwrap_err();
        assert_eq!(e.code, Code::Unchecked);
    }
}
