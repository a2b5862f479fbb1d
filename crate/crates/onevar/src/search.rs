//! Backward proof search for the first-order calculus and its structural
//! extensions.
//!
//! Search is a depth-first traversal over every rule instance whose
//! conclusion matches the goal, in a fixed order, with memoization of proved
//! goals and of failures. Without contraction every backward step shrinks the
//! goal, so the traversal terminates and an exhausted search is a refutation.
//! With contraction a branch-local loop check and a per-formula duplication
//! cap bound the space, and exhaustion is reported as `Unknown`.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::Code;
use crate::proof::{build, CalculusConfig, FoDerivation, FoSequent, Sequent};
use crate::syntax::{BinOp, Const, Formula, Var};

/// Search limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of goals expanded (memo hits are free).
    pub max_nodes: u64,
    /// Maximum branch length.
    pub max_depth: usize,
    /// Maximum number of copies of a formula that backward contraction may
    /// create.
    pub dup_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 500_000, max_depth: 128, dup_cap: 3 }
    }
}

/// Why a search ended without a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    /// `E-BUDGET` when the node budget ran out.
    pub code: Option<Code>,
    pub nodes: u64,
    pub reason: String,
}

/// Outcome of [`prove`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved(FoDerivation),
    /// The complete search space was exhausted without a proof.
    Refuted,
    Unknown(Diagnostics),
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }
}

/// Searches for a derivation of `s` in `cfg`.
pub fn prove(s: &FoSequent, cfg: &CalculusConfig, budget: &Budget) -> Verdict {
    let mut st = Search {
        cfg,
        budget,
        nodes: 0,
        aborted: false,
        proved: HashMap::new(),
        failed: HashMap::new(),
        branch: HashSet::new(),
    };
    if cfg.is_terminating() {
        return match st.goal(s, budget.max_depth) {
            Ok(d) => Verdict::Proved(d),
            Err(_) if st.aborted => st.unknown("node budget exhausted"),
            Err(0) => Verdict::Refuted,
            Err(_) => st.unknown("depth limit reached"),
        };
    }
    // Iterative deepening finds shallow proofs before contraction runs deep.
    let mut limit = 4.min(budget.max_depth);
    loop {
        match st.goal(s, limit) {
            Ok(d) => return Verdict::Proved(d),
            Err(_) if st.aborted => return st.unknown("node budget exhausted"),
            Err(flags) if flags & DEPTH == 0 || limit >= budget.max_depth => {
                return st.unknown("search space exhausted under loop check and duplication cap");
            }
            Err(_) => limit = (limit * 2).min(budget.max_depth),
        }
    }
}

/// A failure was influenced by the depth limit.
const DEPTH: u8 = 1;
/// A failure was influenced by the loop check.
const LOOP: u8 = 2;
/// A failure was influenced by the duplication cap.
const CAP: u8 = 4;

type Build = Box<dyn FnOnce(Vec<FoDerivation>) -> FoDerivation>;

struct Alt {
    premises: Vec<FoSequent>,
    build: Build,
}

fn alt(premises: Vec<FoSequent>, build: impl FnOnce(Vec<FoDerivation>) -> FoDerivation + 'static) -> Alt {
    Alt { premises, build: Box::new(build) }
}

fn one(mut v: Vec<FoDerivation>) -> FoDerivation {
    v.pop().expect("one premise")
}

fn two(v: Vec<FoDerivation>) -> (FoDerivation, FoDerivation) {
    let mut it = v.into_iter();
    (it.next().expect("two premises"), it.next().expect("two premises"))
}

struct Search<'a> {
    cfg: &'a CalculusConfig,
    budget: &'a Budget,
    nodes: u64,
    aborted: bool,
    proved: HashMap<FoSequent, FoDerivation>,
    /// Failed goals with the depth they failed at (`usize::MAX` when the
    /// failure did not depend on depth) and the failure flags.
    failed: HashMap<FoSequent, (usize, u8)>,
    branch: HashSet<FoSequent>,
}

impl Search<'_> {
    fn unknown(&self, reason: &str) -> Verdict {
        let code = self.aborted.then_some(Code::Budget);
        Verdict::Unknown(Diagnostics { code, nodes: self.nodes, reason: reason.into() })
    }

    /// Proves `s` within `depth` more levels, or fails with flags recording
    /// which incompleteness sources affected the failure.
    fn goal(&mut self, s: &FoSequent, depth: usize) -> Result<FoDerivation, u8> {
        if let Some(d) = self.proved.get(s) {
            return Ok(d.clone());
        }
        if let Some(&(at, flags)) = self.failed.get(s) {
            if depth <= at {
                return Err(flags);
            }
        }
        if self.aborted {
            return Err(DEPTH);
        }
        if depth == 0 {
            return Err(DEPTH);
        }
        let looping = !self.cfg.is_terminating();
        if looping && !self.branch.insert(s.clone()) {
            return Err(LOOP);
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            self.aborted = true;
        }
        let (alts, mut flags) = self.alternatives(s);
        let mut result = None;
        'alts: for a in alts {
            if self.aborted {
                break;
            }
            let mut ds = Vec::with_capacity(a.premises.len());
            for p in &a.premises {
                match self.goal(p, depth - 1) {
                    Ok(d) => ds.push(d),
                    Err(f) => {
                        flags |= f;
                        continue 'alts;
                    }
                }
            }
            result = Some((a.build)(ds));
            break;
        }
        if looping {
            self.branch.remove(s);
        }
        match result {
            Some(d) => {
                debug_assert_eq!(&d.conclusion, s);
                self.proved.insert(s.clone(), d.clone());
                Ok(d)
            }
            None if self.aborted => Err(flags | DEPTH),
            None => {
                if flags & LOOP == 0 {
                    let at = if flags & DEPTH == 0 { usize::MAX } else { depth };
                    self.failed.insert(s.clone(), (at, flags));
                }
                Err(flags)
            }
        }
    }

    /// Every backward rule instance for `s`, in search order, plus the
    /// flags for instances skipped by the duplication cap.
    fn alternatives(&self, s: &FoSequent) -> (Vec<Alt>, u8) {
        let ante = s.ante();
        let succ = s.succ();
        let groups = group(ante);
        let mut out = Vec::new();
        let mut flags = 0;

        // Axioms.
        match (ante, succ) {
            ([a], Some(b)) if a == b => {
                let a = a.clone();
                out.push(alt(vec![], move |_| build::id(a)));
            }
            ([Formula::Const(Const::F)], None) => out.push(alt(vec![], |_| build::zero_left())),
            ([], Some(Formula::Const(Const::E))) => out.push(alt(vec![], |_| build::unit_right())),
            _ => {}
        }

        let without = |f: &Formula| -> Vec<Formula> {
            let mut rest = ante.to_vec();
            let i = rest.iter().position(|g| g == f).expect("formula in antecedent");
            rest.remove(i);
            rest
        };
        let seq = |mut rest: Vec<Formula>, add: &[&Formula], succ: Option<&Formula>| -> FoSequent {
            rest.extend(add.iter().map(|f| (*f).clone()));
            Sequent::new(rest, succ.cloned())
        };
        let candidates = instantiation_candidates(s);
        let eigen = eigenvariable(s);

        // Invertible left rules.
        for (f, _) in &groups {
            match f {
                Formula::Const(Const::E) => {
                    out.push(alt(vec![seq(without(f), &[], succ)], |v| build::unit_left(one(v))));
                }
                Formula::Bin(BinOp::Mul, a, b) => {
                    let (a2, b2) = ((**a).clone(), (**b).clone());
                    out.push(alt(vec![seq(without(f), &[a, b], succ)], move |v| build::mul_left(one(v), &a2, &b2)));
                }
                Formula::Bin(BinOp::Or, a, b) => {
                    let (a2, b2) = ((**a).clone(), (**b).clone());
                    let ps = vec![seq(without(f), &[a], succ), seq(without(f), &[b], succ)];
                    out.push(alt(ps, move |v| {
                        let (p1, p2) = two(v);
                        build::or_left(p1, p2, &a2, &b2)
                    }));
                }
                Formula::Exists(body) => {
                    let inst = Formula::instantiate(body, eigen);
                    let body = (**body).clone();
                    out.push(alt(vec![seq(without(f), &[&inst], succ)], move |v| build::exists_left(one(v), &body, eigen)));
                }
                _ => {}
            }
        }

        // Invertible right rules.
        match succ {
            Some(Formula::Bin(BinOp::Imp, a, b)) => {
                let a2 = (**a).clone();
                out.push(alt(vec![seq(ante.to_vec(), &[a], Some(b))], move |v| build::imp_right(one(v), &a2)));
            }
            Some(Formula::Bin(BinOp::And, a, b)) => {
                let ps = vec![seq(ante.to_vec(), &[], Some(a)), seq(ante.to_vec(), &[], Some(b))];
                out.push(alt(ps, |v| {
                    let (p1, p2) = two(v);
                    build::and_right(p1, p2)
                }));
            }
            Some(Formula::Forall(body)) => {
                let inst = Formula::instantiate(body, eigen);
                let body = (**body).clone();
                out.push(alt(vec![seq(ante.to_vec(), &[], Some(&inst))], move |v| build::forall_right(one(v), &body, eigen)));
            }
            Some(Formula::Const(Const::F)) => {
                out.push(alt(vec![seq(ante.to_vec(), &[], None)], |v| build::zero_right(one(v))));
            }
            _ => {}
        }

        // Non-invertible right rules.
        match succ {
            Some(Formula::Bin(BinOp::Mul, a, b)) => {
                for (g1, g2) in splits(&groups) {
                    out.push(alt(vec![seq(g1, &[], Some(a)), seq(g2, &[], Some(b))], |v| {
                        let (p1, p2) = two(v);
                        build::mul_right(p1, p2)
                    }));
                }
            }
            Some(Formula::Bin(BinOp::Or, a, b)) => {
                let (a2, b2) = ((**a).clone(), (**b).clone());
                out.push(alt(vec![seq(ante.to_vec(), &[], Some(a))], move |v| build::or_right(one(v), b2, true)));
                out.push(alt(vec![seq(ante.to_vec(), &[], Some(b))], move |v| build::or_right(one(v), a2, false)));
            }
            Some(Formula::Exists(body)) => {
                for &u in &candidates {
                    let inst = Formula::instantiate(body, u);
                    let body = (**body).clone();
                    out.push(alt(vec![seq(ante.to_vec(), &[], Some(&inst))], move |v| build::exists_right(one(v), &body, u)));
                }
            }
            _ => {}
        }

        // Non-invertible left rules.
        for (f, _) in &groups {
            match f {
                Formula::Bin(BinOp::Imp, a, b) => {
                    let rest = without(f);
                    for (g1, g2) in splits(&group(&rest)) {
                        let imp = (*f).clone();
                        out.push(alt(vec![seq(g1, &[], Some(a)), seq(g2, &[b], succ)], move |v| {
                            let (p1, p2) = two(v);
                            build::imp_left(p1, p2, imp)
                        }));
                    }
                }
                Formula::Bin(BinOp::And, a, b) => {
                    for (first, c) in [(true, a), (false, b)] {
                        let (a2, b2) = ((**a).clone(), (**b).clone());
                        out.push(alt(vec![seq(without(f), &[c], succ)], move |v| build::and_left(one(v), &a2, &b2, first)));
                    }
                }
                Formula::Forall(body) => {
                    for &u in &candidates {
                        let inst = Formula::instantiate(body, u);
                        let body = (**body).clone();
                        out.push(alt(vec![seq(without(f), &[&inst], succ)], move |v| build::forall_left(one(v), &body, u)));
                    }
                }
                _ => {}
            }
        }

        // Structural rules. Single-formula weakening and contraction suffice:
        // acting on a larger Π is the composition of single-formula steps.
        if self.cfg.weakening_right {
            if let Some(d) = succ {
                let d = d.clone();
                out.push(alt(vec![seq(ante.to_vec(), &[], None)], move |v| build::weak_right(one(v), d)));
            }
        }
        if self.cfg.weakening_left {
            for (f, _) in &groups {
                let f2 = (*f).clone();
                out.push(alt(vec![seq(without(f), &[], succ)], move |v| build::weak_left(one(v), vec![f2])));
            }
        }
        for &k in &self.cfg.contraction {
            for (f, n) in &groups {
                if n + k as usize - 1 > self.budget.dup_cap {
                    flags |= CAP;
                    continue;
                }
                let copies: Vec<&Formula> = (1..k).map(|_| *f).collect();
                let f2 = (*f).clone();
                out.push(alt(vec![seq(ante.to_vec(), &copies, succ)], move |v| build::contract(one(v), vec![f2], k)));
            }
        }
        (out, flags)
    }
}

/// Distinct formulas of a canonical antecedent with their multiplicities.
fn group(ante: &[Formula]) -> Vec<(&Formula, usize)> {
    let mut out: Vec<(&Formula, usize)> = Vec::new();
    for f in ante {
        match out.last_mut() {
            Some((g, n)) if *g == f => *n += 1,
            _ => out.push((f, 1)),
        }
    }
    out
}

/// All ways to split a multiset in two, one per multiplicity vector.
fn splits(groups: &[(&Formula, usize)]) -> Vec<(Vec<Formula>, Vec<Formula>)> {
    let mut out = Vec::new();
    let mut counts = vec![0usize; groups.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (&(f, n), &m) in groups.iter().zip(&counts) {
            left.extend(std::iter::repeat_n(f.clone(), m));
            right.extend(std::iter::repeat_n(f.clone(), n - m));
        }
        out.push((left, right));
        let mut i = groups.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if counts[i] < groups[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
        }
    }
}

fn free_vars(s: &FoSequent) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for f in s.ante().iter().chain(s.succ()) {
        f.collect_free(&mut out);
    }
    out
}

/// Instantiation variables that satisfy the instantiation condition: the
/// free variables of the conclusion, or `y1` when it has none.
pub fn instantiation_candidates(s: &FoSequent) -> Vec<Var> {
    let fv = free_vars(s);
    if fv.is_empty() {
        vec![Var::Y(1)]
    } else {
        fv.into_iter().collect()
    }
}

/// The least parameter `yₙ` not free in `s`.
pub fn eigenvariable(s: &FoSequent) -> Var {
    let fv = free_vars(s);
    (1..).map(Var::Y).find(|v| !fv.contains(v)).expect("some parameter is unused")
}
