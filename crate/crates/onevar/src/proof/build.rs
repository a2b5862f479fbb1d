//! Forward construction of derivations, one rule application at a time.
//!
//! Each builder computes the conclusion from its premises and fills in the
//! index parameters in canonical order. Builders panic when the premises do
//! not have the shape the rule requires; callers construct them from
//! derivations they have already matched.

use super::{canonical_sort, Derivation, Fm, Params, Rule, Sequent};
use crate::syntax::{BinOp, Const, Formula, Modal, Var};

fn take<F: Fm>(v: &mut Vec<F>, f: &F) {
    let i = v
        .iter()
        .position(|g| g == f)
        .unwrap_or_else(|| panic!("builder: `{f}` not in antecedent"));
    v.remove(i);
}

/// Assembles a node, computing the principal index and split indices
/// against the canonical conclusion.
fn node<F: Fm>(
    rule: Rule,
    ante: Vec<F>,
    succ: Option<F>,
    principal: Option<&F>,
    split: Option<&[F]>,
    extra: Params<F>,
    premises: Vec<Derivation<F>>,
) -> Derivation<F> {
    let conclusion = Sequent::new(ante, succ);
    let ante = conclusion.ante();
    let mut used = vec![false; ante.len()];
    let mut find = |f: &F| {
        let j = (0..ante.len())
            .find(|&j| !used[j] && ante[j] == *f)
            .unwrap_or_else(|| panic!("builder: `{f}` missing from conclusion"));
        used[j] = true;
        j
    };
    let principal = principal.map(&mut find);
    let split = split.map(|s| s.iter().map(&mut find).collect());
    Derivation { rule, conclusion, params: Params { principal, split, ..extra }, premises }
}

fn parts<F: Fm>(d: &Derivation<F>) -> (Vec<F>, Option<F>) {
    (d.conclusion.ante().to_vec(), d.conclusion.succ().cloned())
}

fn bin<F: Fm>(f: &F, op: BinOp) -> (F, F) {
    match f.as_binary() {
        Some((o, a, b)) if o == op => (a.clone(), b.clone()),
        _ => panic!("builder: `{f}` is not a {} formula", op.symbol()),
    }
}

/// `A ⇒ A`.
pub fn id<F: Fm>(f: F) -> Derivation<F> {
    node(Rule::Id, vec![f.clone()], Some(f), None, None, Params::default(), vec![])
}

/// `f ⇒`.
pub fn zero_left<F: Fm>() -> Derivation<F> {
    node(Rule::ZeroLeft, vec![F::constant(Const::F)], None, None, None, Params::default(), vec![])
}

/// `⇒ e`.
pub fn unit_right<F: Fm>() -> Derivation<F> {
    node(Rule::UnitRight, vec![], Some(F::constant(Const::E)), None, None, Params::default(), vec![])
}

/// Adds `e` to the antecedent.
pub fn unit_left<F: Fm>(p: Derivation<F>) -> Derivation<F> {
    let (mut ante, succ) = parts(&p);
    let e = F::constant(Const::E);
    ante.push(e.clone());
    node(Rule::UnitLeft, ante, succ, Some(&e), None, Params::default(), vec![p])
}

/// `Γ ⇒ f` from `Γ ⇒`.
pub fn zero_right<F: Fm>(p: Derivation<F>) -> Derivation<F> {
    let (ante, succ) = parts(&p);
    assert!(succ.is_none(), "builder: =>f needs an empty succedent");
    node(Rule::ZeroRight, ante, Some(F::constant(Const::F)), None, None, Params::default(), vec![p])
}

/// `Γ₁, Γ₂, φ→ψ ⇒ Δ` from `Γ₁ ⇒ φ` and `Γ₂, ψ ⇒ Δ`.
pub fn imp_left<F: Fm>(p1: Derivation<F>, p2: Derivation<F>, principal: F) -> Derivation<F> {
    let (a, b) = bin(&principal, BinOp::Imp);
    let (g1, s1) = parts(&p1);
    assert_eq!(s1.as_ref(), Some(&a), "builder: ->=> first premise must prove the antecedent");
    let (mut g2, delta) = parts(&p2);
    take(&mut g2, &b);
    let mut ante = g1.clone();
    ante.extend(g2);
    ante.push(principal.clone());
    node(Rule::ImpLeft, ante, delta, Some(&principal), Some(&g1), Params::default(), vec![p1, p2])
}

/// `Γ ⇒ φ→ψ` from `Γ, φ ⇒ ψ`.
pub fn imp_right<F: Fm>(p: Derivation<F>, a: &F) -> Derivation<F> {
    let (mut ante, succ) = parts(&p);
    let b = succ.expect("builder: =>-> needs a succedent");
    take(&mut ante, a);
    node(Rule::ImpRight, ante, Some(F::binary(BinOp::Imp, a.clone(), b)), None, None, Params::default(), vec![p])
}

/// `Γ, φ·ψ ⇒ Δ` from `Γ, φ, ψ ⇒ Δ`.
pub fn mul_left<F: Fm>(p: Derivation<F>, a: &F, b: &F) -> Derivation<F> {
    let (mut ante, succ) = parts(&p);
    take(&mut ante, a);
    take(&mut ante, b);
    let m = F::binary(BinOp::Mul, a.clone(), b.clone());
    ante.push(m.clone());
    node(Rule::MulLeft, ante, succ, Some(&m), None, Params::default(), vec![p])
}

/// `Γ₁, Γ₂ ⇒ φ·ψ` from `Γ₁ ⇒ φ` and `Γ₂ ⇒ ψ`.
pub fn mul_right<F: Fm>(p1: Derivation<F>, p2: Derivation<F>) -> Derivation<F> {
    let (g1, a) = parts(&p1);
    let (g2, b) = parts(&p2);
    let succ = F::binary(BinOp::Mul, a.expect("builder: =>* premise"), b.expect("builder: =>* premise"));
    let mut ante = g1.clone();
    ante.extend(g2);
    node(Rule::MulRight, ante, Some(succ), None, Some(&g1), Params::default(), vec![p1, p2])
}

/// `Γ, φ∧ψ ⇒ Δ` from `Γ, φ ⇒ Δ` (`first`) or `Γ, ψ ⇒ Δ`.
pub fn and_left<F: Fm>(p: Derivation<F>, a: &F, b: &F, first: bool) -> Derivation<F> {
    let (mut ante, succ) = parts(&p);
    take(&mut ante, if first { a } else { b });
    let c = F::binary(BinOp::And, a.clone(), b.clone());
    ante.push(c.clone());
    let rule = if first { Rule::AndLeft1 } else { Rule::AndLeft2 };
    node(rule, ante, succ, Some(&c), None, Params::default(), vec![p])
}

/// `Γ ⇒ φ∧ψ` from `Γ ⇒ φ` and `Γ ⇒ ψ`.
pub fn and_right<F: Fm>(p1: Derivation<F>, p2: Derivation<F>) -> Derivation<F> {
    let (g, a) = parts(&p1);
    let (_, b) = parts(&p2);
    let succ = F::binary(BinOp::And, a.expect("builder: =>& premise"), b.expect("builder: =>& premise"));
    node(Rule::AndRight, g, Some(succ), None, None, Params::default(), vec![p1, p2])
}

/// `Γ, φ∨ψ ⇒ Δ` from `Γ, φ ⇒ Δ` and `Γ, ψ ⇒ Δ`.
pub fn or_left<F: Fm>(p1: Derivation<F>, p2: Derivation<F>, a: &F, b: &F) -> Derivation<F> {
    let (mut ante, succ) = parts(&p1);
    take(&mut ante, a);
    let d = F::binary(BinOp::Or, a.clone(), b.clone());
    ante.push(d.clone());
    node(Rule::OrLeft, ante, succ, Some(&d), None, Params::default(), vec![p1, p2])
}

/// `Γ ⇒ φ∨other` (`first`) or `Γ ⇒ other∨φ` from `Γ ⇒ φ`.
pub fn or_right<F: Fm>(p: Derivation<F>, other: F, first: bool) -> Derivation<F> {
    let (ante, succ) = parts(&p);
    let a = succ.expect("builder: =>| premise needs a succedent");
    let (succ, rule) = if first {
        (F::binary(BinOp::Or, a, other), Rule::OrRight1)
    } else {
        (F::binary(BinOp::Or, other, a), Rule::OrRight2)
    };
    node(rule, ante, Some(succ), None, None, Params::default(), vec![p])
}

/// Contraction: the premise contains `k` copies of `pi`; the conclusion one.
pub fn contract<F: Fm>(p: Derivation<F>, pi: Vec<F>, k: u32) -> Derivation<F> {
    let (mut ante, succ) = parts(&p);
    for _ in 1..k {
        for f in &pi {
            take(&mut ante, f);
        }
    }
    let extra = Params { pi: Some(sorted(pi)), ..Params::default() };
    node(Rule::Contract(k), ante, succ, None, None, extra, vec![p])
}

/// Left weakening by `pi`.
pub fn weak_left<F: Fm>(p: Derivation<F>, pi: Vec<F>) -> Derivation<F> {
    let (mut ante, succ) = parts(&p);
    ante.extend(pi.iter().cloned());
    let extra = Params { pi: Some(sorted(pi)), ..Params::default() };
    node(Rule::WeakLeft, ante, succ, None, None, extra, vec![p])
}

/// Right weakening: `Γ ⇒ δ` from `Γ ⇒`.
pub fn weak_right<F: Fm>(p: Derivation<F>, delta: F) -> Derivation<F> {
    let (ante, succ) = parts(&p);
    assert!(succ.is_none(), "builder: weak-right needs an empty succedent");
    node(Rule::WeakRight, ante, Some(delta), None, None, Params::default(), vec![p])
}

/// Cut: `Γ₁, Γ₂ ⇒ Δ` from `Γ₁ ⇒ α` and `Γ₂, α ⇒ Δ`.
pub fn cut<F: Fm>(p1: Derivation<F>, p2: Derivation<F>) -> Derivation<F> {
    let (g1, a) = parts(&p1);
    let a = a.expect("builder: cut needs a cut formula");
    let (mut g2, delta) = parts(&p2);
    take(&mut g2, &a);
    let mut ante = g1.clone();
    ante.extend(g2);
    node(Rule::Cut, ante, delta, None, Some(&g1), Params::default(), vec![p1, p2])
}

fn sorted<F: Fm>(mut v: Vec<F>) -> Vec<F> {
    canonical_sort(&mut v);
    v
}

/// `Π ⇒ ∏Π`.
pub fn product_right<F: Fm>(pi: &[F]) -> Derivation<F> {
    let pi = sorted(pi.to_vec());
    let mut it = pi.into_iter();
    let Some(first) = it.next() else {
        return unit_right();
    };
    it.fold(id(first), |acc, g| mul_right(acc, id(g)))
}

/// From `Γ, Π ⇒ Δ` derive `Γ, ∏Π ⇒ Δ`.
pub fn product_left<F: Fm>(d: Derivation<F>, pi: &[F]) -> Derivation<F> {
    let pi = sorted(pi.to_vec());
    let mut it = pi.into_iter();
    let Some(mut acc) = it.next() else {
        return unit_left(d);
    };
    let mut cur = d;
    for g in it {
        cur = mul_left(cur, &acc, &g);
        acc = F::binary(BinOp::Mul, acc, g);
    }
    cur
}

/// `Γ, ∀xφ ⇒ Δ` from `Γ, φ(u) ⇒ Δ`.
///
/// If the conclusion has free variables but `u` is not among them, the
/// premise is first re-instantiated at the least free variable of the
/// conclusion so that the instantiation condition holds.
pub fn forall_left(p: Derivation<Formula>, body: &Formula, u: Var) -> Derivation<Formula> {
    quantifier_instance(p, body, u, true)
}

/// `Γ ⇒ ∃xφ` from `Γ ⇒ φ(u)`, repairing `u` as in [`forall_left`].
pub fn exists_right(p: Derivation<Formula>, body: &Formula, u: Var) -> Derivation<Formula> {
    quantifier_instance(p, body, u, false)
}

fn quantifier_instance(p: Derivation<Formula>, body: &Formula, u: Var, left: bool) -> Derivation<Formula> {
    let (mut ante, mut succ) = parts(&p);
    let inst = Formula::instantiate(body, u);
    let q = if left {
        take(&mut ante, &inst);
        Formula::forall(body.clone())
    } else {
        assert_eq!(succ.as_ref(), Some(&inst), "builder: =>exists premise must prove the instance");
        succ = None;
        Formula::exists(body.clone())
    };
    let mut free = std::collections::BTreeSet::new();
    for f in ante.iter().chain(succ.iter()) {
        f.collect_free(&mut free);
    }
    let (p, u) = match free.iter().next() {
        Some(&v) if !free.contains(&u) => (super::substitute_free(&p, u, v), v),
        _ => (p, u),
    };
    let extra = Params { u: Some(u), ..Params::default() };
    if left {
        ante.push(q.clone());
        node(Rule::ForallLeft, ante, succ, Some(&q), None, extra, vec![p])
    } else {
        node(Rule::ExistsRight, ante, Some(q), None, None, extra, vec![p])
    }
}

/// `Γ ⇒ ∀xφ` from `Γ ⇒ φ(y)`, where `y` is not free in the conclusion.
pub fn forall_right(p: Derivation<Formula>, body: &Formula, y: Var) -> Derivation<Formula> {
    let (ante, succ) = parts(&p);
    assert_eq!(succ.as_ref(), Some(&Formula::instantiate(body, y)), "builder: =>forall premise mismatch");
    let extra = Params { y: Some(y), ..Params::default() };
    node(Rule::ForallRight, ante, Some(Formula::forall(body.clone())), None, None, extra, vec![p])
}

/// `Γ, ∃xφ ⇒ Δ` from `Γ, φ(y) ⇒ Δ`, where `y` is not free in the
/// conclusion.
pub fn exists_left(p: Derivation<Formula>, body: &Formula, y: Var) -> Derivation<Formula> {
    let (mut ante, succ) = parts(&p);
    take(&mut ante, &Formula::instantiate(body, y));
    let q = Formula::exists(body.clone());
    ante.push(q.clone());
    let extra = Params { y: Some(y), ..Params::default() };
    node(Rule::ExistsLeft, ante, succ, Some(&q), None, extra, vec![p])
}

/// `Γ, □α ⇒ Δ` from `Γ, α ⇒ Δ`.
pub fn box_left(p: Derivation<Modal>, a: &Modal) -> Derivation<Modal> {
    let (mut ante, succ) = parts(&p);
    take(&mut ante, a);
    let q = Modal::square(a.clone());
    ante.push(q.clone());
    node(Rule::BoxLeft, ante, succ, Some(&q), None, Params::default(), vec![p])
}

/// `Γ ⇒ ◇α` from `Γ ⇒ α`.
pub fn dia_right(p: Derivation<Modal>) -> Derivation<Modal> {
    let (ante, succ) = parts(&p);
    let a = succ.expect("builder: =><> needs a succedent");
    node(Rule::DiaRight, ante, Some(Modal::diamond(a)), None, None, Params::default(), vec![p])
}

/// `Γ ⇒ □α` from `Γ ⇒ α`.
pub fn box_right(p: Derivation<Modal>) -> Derivation<Modal> {
    let (ante, succ) = parts(&p);
    let a = succ.expect("builder: =>[] needs a succedent");
    node(Rule::BoxRight, ante, Some(Modal::square(a)), None, None, Params::default(), vec![p])
}

/// `Γ, ◇α ⇒ Δ` from `Γ, α ⇒ Δ`.
pub fn dia_left(p: Derivation<Modal>, a: &Modal) -> Derivation<Modal> {
    let (mut ante, succ) = parts(&p);
    take(&mut ante, a);
    let q = Modal::diamond(a.clone());
    ante.push(q.clone());
    node(Rule::DiaLeft, ante, succ, Some(&q), None, Params::default(), vec![p])
}
