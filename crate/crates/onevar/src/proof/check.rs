//! Node-by-node derivation checking.

use super::{multiset_minus, CalculusConfig, CheckError, Derivation, Fm, FoDerivation, Rule, Sequent};
use crate::error::Code;
use crate::syntax::{BinOp, Const, Formula, Var};

/// A node under inspection together with its path from the root.
pub(crate) struct Node<'a, F> {
    pub d: &'a Derivation<F>,
    pub path: &'a [usize],
}

impl<'a, F: Fm> Node<'a, F> {
    pub fn err(&self, code: Code, detail: impl Into<String>) -> CheckError {
        CheckError::new(code, self.path, detail)
    }

    pub fn ante(&self) -> &'a [F] {
        self.d.conclusion.ante()
    }

    pub fn succ(&self) -> Option<&'a F> {
        self.d.conclusion.succ()
    }

    /// The premises, required to number exactly `n`.
    pub fn premises(&self, n: usize) -> Result<&'a [Derivation<F>], CheckError> {
        let got = self.d.premises.len();
        if got != n {
            return Err(self.err(Code::Schema, format!("rule {} takes {n} premise(s), found {got}", self.d.rule)));
        }
        Ok(&self.d.premises)
    }

    /// The succedent, matched against a shape.
    pub fn succ_shape<R>(&self, what: &str, m: impl Fn(&'a F) -> Option<R>) -> Result<R, CheckError> {
        self.succ()
            .and_then(m)
            .ok_or_else(|| self.err(Code::Schema, format!("succedent must be {what}")))
    }

    /// Locates the principal formula of a left rule: the declared index, or
    /// the only distinct antecedent formula of the right shape.
    pub fn principal<R>(&self, what: &str, m: impl Fn(&'a F) -> Option<R>) -> Result<(usize, R), CheckError> {
        let ante = self.ante();
        if let Some(i) = self.d.params.principal {
            let f = ante
                .get(i)
                .ok_or_else(|| self.err(Code::Schema, format!("principal index {i} out of range")))?;
            let r = m(f).ok_or_else(|| self.err(Code::Schema, format!("principal formula `{f}` is not {what}")))?;
            return Ok((i, r));
        }
        let mut found: Option<usize> = None;
        for (i, f) in ante.iter().enumerate() {
            if m(f).is_some() {
                match found {
                    None => found = Some(i),
                    Some(j) if ante[j] == *f => {}
                    Some(_) => {
                        return Err(self.err(Code::Schema, format!("ambiguous principal formula ({what}); set params.principal")))
                    }
                }
            }
        }
        let i = found.ok_or_else(|| self.err(Code::Schema, format!("no antecedent formula is {what}")))?;
        Ok((i, m(&ante[i]).expect("matched above")))
    }

    /// The antecedent with the formula at `i` removed.
    pub fn rest(&self, i: usize) -> Vec<F> {
        let mut v = self.ante().to_vec();
        v.remove(i);
        v
    }

    /// Requires premise `k` to conclude exactly `ante ⇒ succ`.
    pub fn expect_premise(&self, k: usize, ante: Vec<F>, succ: Option<F>, code: Code) -> Result<(), CheckError> {
        let want = Sequent::new(ante, succ);
        let got = &self.d.premises[k].conclusion;
        if *got != want {
            return Err(self.err(code, format!("premise {k} should be `{want}` but is `{got}`")));
        }
        Ok(())
    }

    /// Splits the antecedent (minus `exclude`) by the declared `split`
    /// indices into the part for the first premise and the rest.
    pub fn split(&self, exclude: Option<usize>) -> Result<(Vec<F>, Vec<F>), CheckError> {
        let n = self.ante().len();
        let context = n - usize::from(exclude.is_some());
        let idx = match &self.d.params.split {
            Some(s) => s.clone(),
            None if context == 0 => Vec::new(),
            None => return Err(self.err(Code::Split, "missing split parameter")),
        };
        let mut taken = vec![false; n];
        for &i in &idx {
            if i >= n || Some(i) == exclude || taken[i] {
                return Err(self.err(Code::Split, format!("invalid split index {i}")));
            }
            taken[i] = true;
        }
        let mut first = Vec::new();
        let mut second = Vec::new();
        for (i, f) in self.ante().iter().enumerate() {
            if Some(i) == exclude {
                continue;
            }
            if taken[i] {
                first.push(f.clone());
            } else {
                second.push(f.clone());
            }
        }
        Ok((first, second))
    }

    /// Declared sub-multiset of a structural rule, which must occur in the
    /// conclusion antecedent.
    pub fn pi(&self) -> Result<(Vec<F>, Vec<F>), CheckError> {
        let pi = self
            .d
            .params
            .pi
            .clone()
            .ok_or_else(|| self.err(Code::Schema, "missing pi parameter"))?;
        let rest = multiset_minus(self.ante(), &pi)
            .ok_or_else(|| self.err(Code::Split, "pi is not a sub-multiset of the antecedent"))?;
        Ok((pi, rest))
    }
}

fn binary<F: Fm>(op: BinOp) -> impl Fn(&F) -> Option<(&F, &F)> {
    move |f: &F| match f.as_binary() {
        Some((o, a, b)) if o == op => Some((a, b)),
        _ => None,
    }
}

fn constant<F: Fm>(c: Const) -> impl Fn(&F) -> Option<()> {
    move |f: &F| (f.as_const() == Some(c)).then_some(())
}

fn with<F: Clone>(mut v: Vec<F>, extra: &[&F]) -> Vec<F> {
    v.extend(extra.iter().map(|f| (*f).clone()));
    v
}

/// Checks the rules shared by every calculus; other rules are delegated to
/// `special`.
fn check_node<F: Fm>(
    n: &Node<'_, F>,
    cfg: &CalculusConfig,
    special: &dyn Fn(&Node<'_, F>) -> Result<(), CheckError>,
) -> Result<(), CheckError> {
    let e = F::constant(Const::E);
    let f = F::constant(Const::F);
    let delta = n.succ().cloned();
    match n.d.rule {
        Rule::Id => {
            n.premises(0)?;
            match (n.ante(), n.succ()) {
                ([a], Some(b)) if a == b => Ok(()),
                _ => Err(n.err(Code::Schema, "identity axiom must have the form A |- A")),
            }
        }
        Rule::ZeroLeft => {
            n.premises(0)?;
            match (n.ante(), n.succ()) {
                ([a], None) if *a == f => Ok(()),
                _ => Err(n.err(Code::Schema, "axiom f=> must have the form f |-")),
            }
        }
        Rule::UnitRight => {
            n.premises(0)?;
            match (n.ante(), n.succ()) {
                ([], Some(a)) if *a == e => Ok(()),
                _ => Err(n.err(Code::Schema, "axiom =>e must have the form |- e")),
            }
        }
        Rule::UnitLeft => {
            n.premises(1)?;
            let (i, ()) = n.principal("e", constant(Const::E))?;
            n.expect_premise(0, n.rest(i), delta, Code::Schema)
        }
        Rule::ZeroRight => {
            n.premises(1)?;
            n.succ_shape("f", constant(Const::F))?;
            n.expect_premise(0, n.ante().to_vec(), None, Code::Schema)
        }
        Rule::ImpLeft => {
            n.premises(2)?;
            let (i, (a, b)) = n.principal("an implication", binary(BinOp::Imp))?;
            let (g1, g2) = n.split(Some(i))?;
            check_two(n, (g1, Some(a.clone())), (with(g2, &[b]), delta))
        }
        Rule::ImpRight => {
            n.premises(1)?;
            let (a, b) = n.succ_shape("an implication", binary(BinOp::Imp))?;
            n.expect_premise(0, with(n.ante().to_vec(), &[a]), Some(b.clone()), Code::Schema)
        }
        Rule::MulLeft => {
            n.premises(1)?;
            let (i, (a, b)) = n.principal("a product", binary(BinOp::Mul))?;
            n.expect_premise(0, with(n.rest(i), &[a, b]), delta, Code::Schema)
        }
        Rule::MulRight => {
            n.premises(2)?;
            let (a, b) = n.succ_shape("a product", binary(BinOp::Mul))?;
            let (g1, g2) = n.split(None)?;
            check_two(n, (g1, Some(a.clone())), (g2, Some(b.clone())))
        }
        Rule::AndLeft1 | Rule::AndLeft2 => {
            n.premises(1)?;
            let (i, (a, b)) = n.principal("a conjunction", binary(BinOp::And))?;
            let kept = if n.d.rule == Rule::AndLeft1 { a } else { b };
            n.expect_premise(0, with(n.rest(i), &[kept]), delta, Code::Schema)
        }
        Rule::AndRight => {
            n.premises(2)?;
            let (a, b) = n.succ_shape("a conjunction", binary(BinOp::And))?;
            n.expect_premise(0, n.ante().to_vec(), Some(a.clone()), Code::Schema)?;
            n.expect_premise(1, n.ante().to_vec(), Some(b.clone()), Code::Schema)
        }
        Rule::OrLeft => {
            n.premises(2)?;
            let (i, (a, b)) = n.principal("a disjunction", binary(BinOp::Or))?;
            n.expect_premise(0, with(n.rest(i), &[a]), delta.clone(), Code::Schema)?;
            n.expect_premise(1, with(n.rest(i), &[b]), delta, Code::Schema)
        }
        Rule::OrRight1 | Rule::OrRight2 => {
            n.premises(1)?;
            let (a, b) = n.succ_shape("a disjunction", binary(BinOp::Or))?;
            let kept = if n.d.rule == Rule::OrRight1 { a } else { b };
            n.expect_premise(0, n.ante().to_vec(), Some(kept.clone()), Code::Schema)
        }
        Rule::Contract(k) => {
            if !cfg.contraction.contains(&k) {
                return Err(n.err(Code::RuleDisabled, format!("contraction with exponent {k} is not enabled")));
            }
            n.premises(1)?;
            let (pi, mut rest) = n.pi()?;
            for _ in 0..k {
                rest.extend(pi.iter().cloned());
            }
            n.expect_premise(0, rest, delta, Code::Schema)
        }
        Rule::WeakLeft => {
            if !cfg.weakening_left {
                return Err(n.err(Code::RuleDisabled, "left weakening is not enabled"));
            }
            n.premises(1)?;
            let (_, rest) = n.pi()?;
            n.expect_premise(0, rest, delta, Code::Schema)
        }
        Rule::WeakRight => {
            if !cfg.weakening_right {
                return Err(n.err(Code::RuleDisabled, "right weakening is not enabled"));
            }
            n.premises(1)?;
            if n.succ().is_none() {
                return Err(n.err(Code::Schema, "right weakening needs a succedent"));
            }
            n.expect_premise(0, n.ante().to_vec(), None, Code::Schema)
        }
        _ => special(n),
    }
}

/// Checks both premises of a rule with a context split. Succedent
/// mismatches are schema errors; antecedent mismatches are split errors.
pub(crate) fn check_two<F: Fm>(
    n: &Node<'_, F>,
    first: (Vec<F>, Option<F>),
    second: (Vec<F>, Option<F>),
) -> Result<(), CheckError> {
    for (k, (ante, succ)) in [first, second].into_iter().enumerate() {
        let got = &n.d.premises[k].conclusion;
        if got.succ() != succ.as_ref() {
            let want = succ.map_or_else(|| "empty".to_string(), |s| format!("`{s}`"));
            return Err(n.err(Code::Schema, format!("premise {k} must have succedent {want}")));
        }
        n.expect_premise(k, ante, succ, Code::Split)?;
    }
    Ok(())
}

/// Walks the tree in pre-order and reports the first failing node.
pub(crate) fn check_tree<F: Fm>(
    d: &Derivation<F>,
    cfg: &CalculusConfig,
    special: &dyn Fn(&Node<'_, F>) -> Result<(), CheckError>,
) -> Result<(), CheckError> {
    fn go<F: Fm>(
        d: &Derivation<F>,
        cfg: &CalculusConfig,
        special: &dyn Fn(&Node<'_, F>) -> Result<(), CheckError>,
        path: &mut Vec<usize>,
    ) -> Result<(), CheckError> {
        check_node(&Node { d, path }, cfg, special)?;
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            go(p, cfg, special, path)?;
            path.pop();
        }
        Ok(())
    }
    go(d, cfg, special, &mut Vec::new())
}

fn forall_body(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Forall(b) => Some(b),
        _ => None,
    }
}

fn exists_body(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Exists(b) => Some(b),
        _ => None,
    }
}

fn conclusion_free(n: &Node<'_, Formula>) -> std::collections::BTreeSet<Var> {
    let mut out = std::collections::BTreeSet::new();
    for f in n.ante() {
        f.collect_free(&mut out);
    }
    if let Some(s) = n.succ() {
        s.collect_free(&mut out);
    }
    out
}

fn instantiation_var(n: &Node<'_, Formula>) -> Result<Var, CheckError> {
    let u = n.d.params.u.ok_or_else(|| n.err(Code::Schema, "missing instantiation variable u"))?;
    let free = conclusion_free(n);
    if !free.is_empty() && !free.contains(&u) {
        return Err(n.err(Code::Instvar, format!("instantiation variable {u} does not occur free in the conclusion")));
    }
    Ok(u)
}

fn eigenvariable(n: &Node<'_, Formula>) -> Result<Var, CheckError> {
    let y = n.d.params.y.ok_or_else(|| n.err(Code::Schema, "missing eigenvariable y"))?;
    if conclusion_free(n).contains(&y) {
        return Err(n.err(Code::Eigenvar, format!("eigenvariable {y} occurs free in the conclusion")));
    }
    Ok(y)
}

fn fo_special(n: &Node<'_, Formula>) -> Result<(), CheckError> {
    let delta = n.succ().cloned();
    match n.d.rule {
        Rule::ForallLeft => {
            n.premises(1)?;
            let (i, body) = n.principal("a universal formula", forall_body)?;
            let u = instantiation_var(n)?;
            n.expect_premise(0, with(n.rest(i), &[&Formula::instantiate(body, u)]), delta, Code::Schema)
        }
        Rule::ExistsRight => {
            n.premises(1)?;
            let body = n.succ_shape("an existential formula", exists_body)?;
            let u = instantiation_var(n)?;
            n.expect_premise(0, n.ante().to_vec(), Some(Formula::instantiate(body, u)), Code::Schema)
        }
        Rule::ForallRight => {
            n.premises(1)?;
            let body = n.succ_shape("a universal formula", forall_body)?;
            let y = eigenvariable(n)?;
            n.expect_premise(0, n.ante().to_vec(), Some(Formula::instantiate(body, y)), Code::Schema)
        }
        Rule::ExistsLeft => {
            n.premises(1)?;
            let (i, body) = n.principal("an existential formula", exists_body)?;
            let y = eigenvariable(n)?;
            n.expect_premise(0, with(n.rest(i), &[&Formula::instantiate(body, y)]), delta, Code::Schema)
        }
        r => Err(n.err(Code::Schema, format!("rule {r} is not part of the first-order calculus"))),
    }
}

/// Checks a first-order derivation against the calculus `cfg`.
pub fn check_derivation(d: &FoDerivation, cfg: &CalculusConfig) -> Result<(), CheckError> {
    check_tree(d, cfg, &fo_special)
}
