//! Variable renaming and substitution on whole derivations.

use super::{CheckError, FoDerivation, FoSequent, Params, Sequent};
use crate::error::Code;
use crate::syntax::{Formula, Var};

fn sequent_has_free(s: &FoSequent, v: Var) -> bool {
    s.ante().iter().any(|f| f.has_free(v)) || s.succ().is_some_and(|f| f.has_free(v))
}

fn subst_sequent(s: &FoSequent, from: Var, to: Var) -> FoSequent {
    Sequent::new(
        s.ante().iter().map(|f| f.substitute(from, to)).collect(),
        s.succ().map(|f| f.substitute(from, to)),
    )
}

fn subst_params(p: &Params<Formula>, from: Var, to: Var) -> Params<Formula> {
    let swap = |v: Option<Var>| v.map(|v| if v == from { to } else { v });
    Params {
        principal: None,
        split: None,
        u: swap(p.u),
        y: swap(p.y),
        pi: p.pi.as_ref().map(|pi| pi.iter().map(|f| f.substitute(from, to)).collect()),
    }
}

impl FoDerivation {
    /// Whether `v` occurs free in some sequent or as a rule parameter.
    pub fn mentions(&self, v: Var) -> bool {
        let mut hit = false;
        self.visit(&mut |n| {
            hit |= sequent_has_free(&n.conclusion, v)
                || n.params.u == Some(v)
                || n.params.y == Some(v)
                || n.params.pi.as_ref().is_some_and(|pi| pi.iter().any(|f| f.has_free(v)));
        });
        hit
    }

    /// Largest parameter index anywhere in the derivation.
    pub fn max_param(&self) -> Option<u32> {
        let mut m: Option<u32> = None;
        self.visit(&mut |n| {
            for f in n.conclusion.ante().iter().chain(n.conclusion.succ()) {
                m = m.max(f.max_param());
            }
            m = m.max(n.params.u.and_then(Var::index)).max(n.params.y.and_then(Var::index));
        });
        m
    }

    /// A parameter whose index exceeds every index in the derivation.
    pub fn fresh_param(&self) -> Var {
        Var::Y(self.max_param().map_or(1, |m| m + 1))
    }
}

/// Rebuilds a node with a new conclusion, recomputing index parameters so
/// they stay canonical after the antecedent is re-sorted.
fn rebuild(old: &FoDerivation, conclusion: FoSequent, mut params: Params<Formula>, premises: Vec<FoDerivation>, from: Var, to: Var) -> FoDerivation {
    let old_ante = old.conclusion.ante();
    let new_ante = conclusion.ante();
    let map = |i: usize, used: &mut Vec<bool>| -> usize {
        let target = old_ante[i].substitute(from, to);
        let j = (0..new_ante.len())
            .find(|&j| !used[j] && new_ante[j] == target)
            .expect("substitution preserves the antecedent multiset");
        used[j] = true;
        j
    };
    let mut used = vec![false; new_ante.len()];
    if let Some(p) = old.params.principal {
        params.principal = Some(map(p, &mut used));
    }
    if let Some(split) = &old.params.split {
        params.split = Some(split.iter().map(|&i| map(i, &mut used)).collect());
    }
    FoDerivation { rule: old.rule, conclusion, params, premises }
}

fn rename_all(d: &FoDerivation, from: Var, to: Var) -> FoDerivation {
    let premises = d.premises.iter().map(|p| rename_all(p, from, to)).collect();
    rebuild(d, subst_sequent(&d.conclusion, from, to), subst_params(&d.params, from, to), premises, from, to)
}

/// Renames `from` to `to` in every sequent and rule parameter. `to` must
/// not occur anywhere in `d`, free or as a parameter.
pub fn rename_free(d: &FoDerivation, from: Var, to: Var) -> Result<FoDerivation, CheckError> {
    if d.mentions(to) {
        return Err(CheckError::new(Code::NotFresh, &[], format!("{to} already occurs in the derivation")));
    }
    Ok(rename_all(d, from, to))
}

/// Replaces the free occurrences of `from` by `to` in the conclusion and
/// propagates the change upwards only as far as it is visible. Subtrees
/// whose conclusion does not mention `from` are left alone, and
/// eigenvariables that clash with `to` are renamed apart first, so the
/// result checks whenever `d` does.
pub fn substitute_free(d: &FoDerivation, from: Var, to: Var) -> FoDerivation {
    if from == to || !sequent_has_free(&d.conclusion, from) {
        return d.clone();
    }
    let mut params = subst_params(&d.params, from, to);
    let mut premises: Vec<FoDerivation> = d.premises.clone();
    if d.rule.is_eigen() && d.params.y == Some(to) {
        let fresh = Var::Y(d.max_param().max(to.index()).map_or(1, |m| m + 1));
        premises = premises.iter().map(|p| rename_all(p, to, fresh)).collect();
        params.y = Some(fresh);
    }
    let premises = premises.iter().map(|p| substitute_free(p, from, to)).collect();
    rebuild(d, subst_sequent(&d.conclusion, from, to), params, premises, from, to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{check_derivation, from_json_str, CalculusConfig};

    fn id(s: &str) -> FoDerivation {
        let f: Formula = s.parse().unwrap();
        crate::proof::build::id(f)
    }

    #[test]
    fn rename_examples() {
        let d = id("P0(x)");
        let r = rename_free(&d, Var::X, Var::Y(1)).unwrap();
        assert_eq!(r.conclusion.to_string(), "P0(y1) |- P0(y1)");
        let same = rename_free(&d, Var::Y(1), Var::Y(2)).unwrap();
        assert_eq!(same, d);
        let d = id("P0(y1)");
        assert_eq!(rename_free(&d, Var::X, Var::Y(1)).unwrap_err().code, Code::NotFresh);
    }

    #[test]
    fn substitution_renames_clashing_eigenvariables() {
        let json = r#"{
          "rule": "exists=>", "conclusion": "P0(y2), exists x P1(x) |- P0(y2) * exists x P1(x)",
          "params": {"y": "y1"},
          "premises": [
            {"rule": "=>*", "conclusion": "P0(y2), P1(y1) |- P0(y2) * exists x P1(x)", "params": {"split": [0]},
             "premises": [
               {"rule": "id", "conclusion": "P0(y2) |- P0(y2)"},
               {"rule": "=>exists", "conclusion": "P1(y1) |- exists x P1(x)", "params": {"u": "y1"},
                "premises": [{"rule": "id", "conclusion": "P1(y1) |- P1(y1)"}]}]}
          ]}"#;
        let d = from_json_str::<Formula>(json).unwrap();
        let cfg = CalculusConfig::fle();
        check_derivation(&d, &cfg).unwrap();
        let s = substitute_free(&d, Var::Y(2), Var::Y(1));
        assert_eq!(s.conclusion.to_string(), "P0(y1), exists x P1(x) |- P0(y1) * exists x P1(x)");
        assert_eq!(s.params.y, Some(Var::Y(3)));
        check_derivation(&s, &cfg).unwrap();
        assert_eq!(s.metrics(), d.metrics());
    }
}
