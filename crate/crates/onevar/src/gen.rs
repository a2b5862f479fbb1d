//! Seeded generators for formulas, derivations, partitions and structures.
//!
//! Everything is driven by a [`ChaCha8Rng`], so a seed fixes the output on
//! every platform.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::proof::{build, substitute_free, CalculusConfig, FoDerivation, FoSequent};
use crate::semantics::Structure;
use crate::syntax::{BinOp, Formula, Modal, Var};

const OPS: [BinOp; 4] = [BinOp::And, BinOp::Or, BinOp::Mul, BinOp::Imp];

/// A seeded source of random syntax and structures.
pub struct Gen {
    rng: ChaCha8Rng,
    /// Predicate (or atom) indices are drawn from `0..preds`.
    pub preds: u32,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), preds: 3 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A random formula of depth at most `depth` whose free variables come
    /// from `vars`. Quantifier bodies only use `x`, so quantified
    /// subformulas are sentences.
    pub fn formula(&mut self, depth: usize, vars: &[Var]) -> Formula {
        let leaf = depth == 0 || self.rng.gen_bool(0.25);
        if leaf {
            return match self.rng.gen_range(0..10) {
                0 => Formula::e(),
                1 => Formula::f(),
                _ => {
                    let v = if vars.is_empty() { Var::X } else { *vars.choose(&mut self.rng).expect("non-empty") };
                    Formula::atom(self.rng.gen_range(0..self.preds), v)
                }
            };
        }
        match self.rng.gen_range(0..6) {
            0 => Formula::forall(self.formula(depth - 1, &[Var::X])),
            1 => Formula::exists(self.formula(depth - 1, &[Var::X])),
            _ => {
                let op = *OPS.choose(&mut self.rng).expect("non-empty");
                Formula::bin(op, self.formula(depth - 1, vars), self.formula(depth - 1, vars))
            }
        }
    }

    /// A random modal formula of depth at most `depth`.
    pub fn modal(&mut self, depth: usize) -> Modal {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return match self.rng.gen_range(0..10) {
                0 => Modal::e(),
                1 => Modal::f(),
                _ => Modal::atom(self.rng.gen_range(0..self.preds)),
            };
        }
        match self.rng.gen_range(0..6) {
            0 => Modal::square(self.modal(depth - 1)),
            1 => Modal::diamond(self.modal(depth - 1)),
            _ => {
                let op = *OPS.choose(&mut self.rng).expect("non-empty");
                Modal::bin(op, self.modal(depth - 1), self.modal(depth - 1))
            }
        }
    }

    /// A random interpretation of predicates `0..preds` over `0..domain`.
    pub fn structure(&mut self, algebra: &Algebra, domain: usize) -> Structure {
        let interp: BTreeMap<u32, Vec<usize>> =
            (0..self.preds).map(|p| (p, (0..domain).map(|_| self.rng.gen_range(0..algebra.size())).collect())).collect();
        Structure::new(algebra.clone(), domain, interp).expect("values lie in the carrier")
    }

    fn leaf(&mut self, vars: &[Var]) -> FoDerivation {
        match self.rng.gen_range(0..12) {
            0 => build::zero_left(),
            1 => build::unit_right(),
            2 => build::id(self.formula(1, vars)),
            _ => {
                let v = *vars.choose(&mut self.rng).expect("non-empty");
                build::id(Formula::atom(self.rng.gen_range(0..self.preds), v))
            }
        }
    }

    /// A random derivation in the calculus `cfg`, built forward from axioms
    /// so that it checks by construction. Free variables of the conclusion
    /// come from `vars`, which must be non-empty.
    pub fn derivation(&mut self, depth: usize, vars: &[Var], cfg: &CalculusConfig) -> FoDerivation {
        if depth == 0 || self.rng.gen_bool(0.15) {
            return self.leaf(vars);
        }
        for _ in 0..16 {
            if let Some(d) = self.step(depth, vars, cfg) {
                return d;
            }
        }
        self.leaf(vars)
    }

    /// One random rule application on top of fresh sub-derivations, or
    /// `None` if the chosen rule does not apply.
    fn step(&mut self, depth: usize, vars: &[Var], cfg: &CalculusConfig) -> Option<FoDerivation> {
        let sub = |g: &mut Gen| g.derivation(depth - 1, vars, cfg);
        let rule = self.rng.gen_range(0..17);
        let d = sub(self);
        let ante = d.conclusion.ante().to_vec();
        let succ = d.conclusion.succ().cloned();
        let pick = |g: &mut Gen, fs: &[Formula]| fs.choose(&mut g.rng).cloned();
        Some(match rule {
            0 => {
                succ?;
                let d2 = sub(self);
                d2.conclusion.succ()?;
                build::mul_right(d, d2)
            }
            1 => {
                succ?;
                let a = pick(self, &ante)?;
                build::imp_right(d, &a)
            }
            2 => {
                if ante.len() < 2 {
                    return None;
                }
                let mut two: Vec<Formula> = ante.choose_multiple(&mut self.rng, 2).cloned().collect();
                two.shuffle(&mut self.rng);
                build::mul_left(d, &two[0], &two[1])
            }
            3 => {
                let phi = succ?;
                let d2 = sub(self);
                let psi = pick(self, d2.conclusion.ante())?;
                build::imp_left(d, d2, Formula::imp(phi, psi))
            }
            4 => {
                let a = pick(self, &ante)?;
                let b = self.formula(1, vars);
                if self.rng.gen_bool(0.5) {
                    build::and_left(d, &a, &b, true)
                } else {
                    build::and_left(d, &b, &a, false)
                }
            }
            5 => {
                succ?;
                build::and_right(d.clone(), d)
            }
            6 => {
                succ?;
                let other = self.formula(1, vars);
                let first = self.rng.gen_bool(0.5);
                build::or_right(d, other, first)
            }
            7 => {
                let a = pick(self, &ante)?;
                build::or_left(d.clone(), d, &a, &a)
            }
            8 => {
                let a = pick(self, &ante)?;
                let (body, u) = self.abstraction(&a)?;
                build::forall_left(d, &body, u)
            }
            9 => {
                let (body, u) = self.abstraction(succ.as_ref()?)?;
                build::exists_right(d, &body, u)
            }
            10 => {
                let s = succ?;
                let v = self.eigen_candidate(&s, &ante)?;
                let (d, body, y) = generalize(d, &s, v);
                build::forall_right(d, &body, y)
            }
            11 => {
                let i = self.rng.gen_range(0..ante.len().max(1));
                let a = ante.get(i)?.clone();
                let mut rest = ante.clone();
                rest.remove(i);
                rest.extend(succ.iter().cloned());
                let v = self.eigen_candidate(&a, &rest)?;
                let (d, body, y) = generalize(d, &a, v);
                build::exists_left(d, &body, y)
            }
            12 => {
                if succ.is_some() {
                    return None;
                }
                build::zero_right(d)
            }
            13 => build::unit_left(d),
            14 => {
                if !cfg.weakening_left {
                    return None;
                }
                let extra = self.formula(1, vars);
                build::weak_left(d, vec![extra])
            }
            15 => {
                if !cfg.weakening_right || succ.is_some() {
                    return None;
                }
                let extra = self.formula(1, vars);
                build::weak_right(d, extra)
            }
            _ => {
                let k = *cfg.contraction.iter().next()?;
                succ?;
                let a = pick(self, &ante)?;
                let mut cur = d.clone();
                for _ in 1..k {
                    cur = build::mul_right(cur, d.clone());
                }
                build::contract(cur, vec![a], k)
            }
        })
    }

    /// Writes `a` as `φ(u)` with `φ` a formula in `x` only: `u` is the single
    /// free variable of `a`, or a variable from the pool if `a` is closed.
    fn abstraction(&mut self, a: &Formula) -> Option<(Formula, Var)> {
        let free: Vec<Var> = a.free_vars().into_iter().collect();
        match free.as_slice() {
            [] => Some((a.clone(), Var::X)),
            [Var::X] => Some((a.clone(), Var::X)),
            [v] => Some((a.substitute(*v, Var::X), *v)),
            _ => None,
        }
    }

    /// A variable that is the only free variable of `a` and does not occur
    /// free in `others`.
    fn eigen_candidate(&mut self, a: &Formula, others: &[Formula]) -> Option<Var> {
        let free: Vec<Var> = a.free_vars().into_iter().collect();
        match free.as_slice() {
            [v] if !others.iter().any(|f| f.has_free(*v)) => Some(*v),
            _ => None,
        }
    }

    /// A random provable sequent together with a derivation of it.
    pub fn provable(&mut self, depth: usize, vars: &[Var], cfg: &CalculusConfig) -> FoDerivation {
        self.derivation(depth, vars, cfg)
    }

    /// A partition of the antecedent for interpolation: indices of the `Γ`
    /// part and the private variables `y` (only in `Γ`) and `z` (only
    /// outside it). Candidates come from `pool`.
    pub fn partition(&mut self, s: &FoSequent, pool: &[Var]) -> Option<(Vec<usize>, Var, Var)> {
        let mut pairs: Vec<(Var, Var)> = pool.iter().flat_map(|&y| pool.iter().map(move |&z| (y, z))).filter(|(y, z)| y != z).collect();
        pairs.shuffle(&mut self.rng);
        for (y, z) in pairs {
            let ante = s.ante();
            if ante.iter().any(|f| f.has_free(y) && f.has_free(z)) || s.succ().is_some_and(|f| f.has_free(y)) {
                continue;
            }
            let gamma: Vec<usize> =
                (0..ante.len()).filter(|&i| ante[i].has_free(y) || (!ante[i].has_free(z) && self.rng.gen_bool(0.5))).collect();
            return Some((gamma, y, z));
        }
        None
    }
}

/// Turns a derivation of `... φ(v) ...` into one of `... φ(y) ...` with `y`
/// a parameter, returning the body `φ(x)` and `y`.
fn generalize(d: FoDerivation, a: &Formula, v: Var) -> (FoDerivation, Formula, Var) {
    if v == Var::X {
        let y = d.fresh_param();
        (substitute_free(&d, Var::X, y), a.clone(), y)
    } else {
        (d, a.substitute(v, Var::X), v)
    }
}
