//! Terms, equations and quasi-equations over a signature with `box` and
//! `dia`, and their evaluation in finite m-lattices.
//!
//! Terms share the formula grammar: variables are `v0, v1, ...`, the infix
//! connectives stand for `and`, `or`, `mul` and `imp`, `[]` and `<>` for the
//! modalities, a bare name for a constant and `name(t, ...)` for any other
//! symbol. An equation is `s ~ t`, `s <= t` abbreviates `s & t ~ s`, and a
//! quasi-equation is `premise ==> conclusion`.

use std::fmt;

use crate::syntax::{indexed, needs_parens, Ast, BinOp, Parser, SyntaxError, Token, PREC_UNARY};

use super::{first_failure, AlgError, MLattice, OpSpec, Signature};

/// Assignments above this count are refused by [`eval_all`].
pub const DEFAULT_CAP: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u32),
    Op(String, Vec<Term>),
    Box(Box<Term>),
    Dia(Box<Term>),
}

impl Term {
    pub fn op(name: &str, args: Vec<Term>) -> Self {
        Term::Op(name.into(), args)
    }

    fn collect_vars(&self, out: &mut Vec<u32>) {
        match self {
            Term::Var(v) => out.push(*v),
            Term::Op(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Box(t) | Term::Dia(t) => t.collect_vars(out),
        }
    }

    fn infix(&self) -> Option<(BinOp, &Term, &Term)> {
        let Term::Op(name, args) = self else { return None };
        let op = [BinOp::And, BinOp::Or, BinOp::Mul, BinOp::Imp].into_iter().find(|op| op.op_name() == name)?;
        match args.as_slice() {
            [a, b] => Some((op, a, b)),
            _ => None,
        }
    }

    fn prec(&self) -> u8 {
        self.infix().map_or(PREC_UNARY, |(op, _, _)| op.prec())
    }

    fn from_ast(ast: &Ast) -> Result<Self, SyntaxError> {
        Ok(match ast {
            Ast::Name(n, _) => match indexed(n, 'v') {
                Some(i) => Term::Var(i),
                None => Term::Op(n.clone(), Vec::new()),
            },
            Ast::App(n, args, pos) => {
                let args = args.iter().map(Term::from_ast).collect::<Result<Vec<_>, _>>()?;
                match (n.as_str(), args.len()) {
                    ("box", 1) => Term::Box(Box::new(args.into_iter().next().expect("one argument"))),
                    ("dia", 1) => Term::Dia(Box::new(args.into_iter().next().expect("one argument"))),
                    ("box" | "dia", _) => return Err(SyntaxError::Syntax { pos: *pos, msg: format!("`{n}` takes one argument") }),
                    _ => Term::Op(n.clone(), args),
                }
            }
            Ast::Bin(op, a, b) => Term::Op(op.op_name().into(), vec![Term::from_ast(a)?, Term::from_ast(b)?]),
            Ast::Square(t) => Term::Box(Box::new(Term::from_ast(t)?)),
            Ast::Diamond(t) => Term::Dia(Box::new(Term::from_ast(t)?)),
            Ast::Forall(_, _, pos) | Ast::Exists(_, _, pos) => {
                return Err(SyntaxError::Syntax { pos: *pos, msg: "quantifiers do not occur in terms".into() })
            }
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((op, a, b)) = self.infix() {
            let side = |f: &mut fmt::Formatter<'_>, t: &Term, right: bool| {
                if needs_parens(op, t.prec(), right) {
                    write!(f, "({t})")
                } else {
                    write!(f, "{t}")
                }
            };
            side(f, a, false)?;
            write!(f, " {} ", op.symbol())?;
            return side(f, b, true);
        }
        let prefix = |f: &mut fmt::Formatter<'_>, sym: &str, t: &Term| {
            if t.prec() < PREC_UNARY {
                write!(f, "{sym}({t})")
            } else {
                write!(f, "{sym}{t}")
            }
        };
        match self {
            Term::Var(v) => write!(f, "v{v}"),
            Term::Op(name, args) if args.is_empty() => f.write_str(name),
            Term::Op(name, args) => write!(f, "{name}({})", args.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
            Term::Box(t) => prefix(f, "[]", t),
            Term::Dia(t) => prefix(f, "<>", t),
        }
    }
}

/// `~` or `<=`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Le,
}

impl Rel {
    fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "~",
            Rel::Le => "<=",
        }
    }
}

/// An equation or inequality, optionally guarded by one premise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub name: Option<String>,
    pub premise: Option<(Term, Rel, Term)>,
    pub lhs: Term,
    pub rel: Rel,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rel: Rel, rhs: Term) -> Self {
        Equation { name: None, premise: None, lhs, rel, rhs }
    }

    /// The variable indices that occur, ascending.
    pub fn vars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        if let Some((a, _, b)) = &self.premise {
            a.collect_vars(&mut out);
            b.collect_vars(&mut out);
        }
        self.lhs.collect_vars(&mut out);
        self.rhs.collect_vars(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, r, b)) = &self.premise {
            write!(f, "{a} {} {b} ==> ", r.symbol())?;
        }
        write!(f, "{} {} {}", self.lhs, self.rel.symbol(), self.rhs)
    }
}

/// Parses a term.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text)?;
    let ast = p.formula()?;
    p.expect_end()?;
    Term::from_ast(&ast)
}

fn relation(p: &mut Parser) -> Result<Rel, SyntaxError> {
    if p.eat(&Token::Approx) {
        Ok(Rel::Eq)
    } else if p.eat(&Token::Le) {
        Ok(Rel::Le)
    } else {
        Err(SyntaxError::Syntax { pos: p.pos(), msg: "expected `~` or `<=`".into() })
    }
}

/// Parses an equation, an inequality or a quasi-equation. The name of a
/// built-in law is accepted too.
pub fn parse_equation(text: &str) -> Result<Equation, SyntaxError> {
    if let Some(eq) = builtin(text.trim()) {
        return Ok(eq);
    }
    let mut p = Parser::new(text)?;
    let side = |p: &mut Parser| -> Result<(Term, Rel, Term), SyntaxError> {
        let a = Term::from_ast(&p.formula()?)?;
        let r = relation(p)?;
        let b = Term::from_ast(&p.formula()?)?;
        Ok((a, r, b))
    };
    let first = side(&mut p)?;
    let eq = if p.eat(&Token::Implies) {
        let (lhs, rel, rhs) = side(&mut p)?;
        Equation { name: None, premise: Some(first), lhs, rel, rhs }
    } else {
        let (lhs, rel, rhs) = first;
        Equation::new(lhs, rel, rhs)
    };
    p.expect_end()?;
    Ok(eq)
}

const FIXED: [(&str, &str); 15] = [
    ("L1-box", "[]v0 & v0 ~ []v0"),
    ("L2-box", "[](v0 & v1) ~ []v0 & []v1"),
    ("L3-box", "[]<>v0 ~ <>v0"),
    ("L1-dia", "<>v0 | v0 ~ <>v0"),
    ("L2-dia", "<>(v0 | v1) ~ <>v0 | <>v1"),
    ("L3-dia", "<>[]v0 ~ []v0"),
    ("L4-box", "[][]v0 ~ []v0"),
    ("L4-dia", "<><>v0 ~ <>v0"),
    ("L5-box", "v0 <= v1 ==> []v0 <= []v1"),
    ("L5-dia", "v0 <= v1 ==> <>v0 <= <>v1"),
    ("L6-box", "[](v0 -> []v1) ~ <>v0 -> []v1"),
    ("L6-dia", "[]([]v0 -> v1) ~ []v0 -> []v1"),
    ("constant-domain", "[]([]v0 | v1) ~ []v0 | []v1"),
    ("dia-mul", "<>v0 * <>v0 ~ <>(v0 * v0)"),
    ("dia-mul-general", "<>v0 * <>v1 ~ <>(v0 * v1)"),
];

/// The star law `m(op(m v0, ..., m vk)) ~ op(m v0, ..., m vk)` for one symbol,
/// with `m` either modality.
pub fn star_law(boxed: bool, op: &OpSpec) -> Equation {
    let wrap = |t: Term| if boxed { Term::Box(Box::new(t)) } else { Term::Dia(Box::new(t)) };
    let inner = Term::Op(op.name.clone(), (0..op.arity as u32).map(|i| wrap(Term::Var(i))).collect());
    let mut eq = Equation::new(wrap(inner.clone()), Rel::Eq, inner);
    eq.name = Some(format!("{}:{}", if boxed { "star-box" } else { "star-dia" }, op.name));
    eq
}

/// Looks up a built-in law: the fixed laws above or `star-box:<op>` and
/// `star-dia:<op>` for a symbol of the FLE signature.
pub fn builtin(name: &str) -> Option<Equation> {
    if let Some((_, text)) = FIXED.iter().find(|(n, _)| *n == name) {
        let mut eq = parse_equation(text).expect("built-in laws parse");
        eq.name = Some(name.into());
        return Some(eq);
    }
    let (prefix, op) = name.split_once(':')?;
    let boxed = match prefix {
        "star-box" => true,
        "star-dia" => false,
        _ => return None,
    };
    let sig = Signature::fle();
    sig.index(op).map(|i| star_law(boxed, &sig.ops()[i]))
}

/// Names accepted by [`builtin`].
pub fn builtin_names() -> Vec<String> {
    let mut out: Vec<String> = FIXED.iter().map(|(n, _)| n.to_string()).collect();
    for prefix in ["star-box", "star-dia"] {
        out.extend(Signature::fle().ops().iter().map(|o| format!("{prefix}:{}", o.name)));
    }
    out
}

#[derive(Clone, Copy)]
enum Instr {
    Var(usize),
    Op(usize),
    Box,
    Dia,
}

/// A term compiled to postfix code against one algebra.
struct Code(Vec<Instr>);

fn compile(m: &MLattice, vars: &[u32], t: &Term, out: &mut Vec<Instr>) -> Result<(), AlgError> {
    match t {
        Term::Var(v) => out.push(Instr::Var(vars.binary_search(v).expect("variable list covers the term"))),
        Term::Op(name, args) => {
            let sig = m.base.signature();
            let i = sig.index(name).ok_or_else(|| AlgError::Signature(format!("`{name}` is not in the signature of `{}`", m.name())))?;
            if sig.ops()[i].arity != args.len() {
                return Err(AlgError::Signature(format!("`{name}` has arity {}, applied to {} arguments", sig.ops()[i].arity, args.len())));
            }
            for a in args {
                compile(m, vars, a, out)?;
            }
            out.push(Instr::Op(i));
        }
        Term::Box(t) => {
            compile(m, vars, t, out)?;
            out.push(Instr::Box);
        }
        Term::Dia(t) => {
            compile(m, vars, t, out)?;
            out.push(Instr::Dia);
        }
    }
    Ok(())
}

impl Code {
    fn new(m: &MLattice, vars: &[u32], t: &Term) -> Result<Self, AlgError> {
        let mut out = Vec::new();
        compile(m, vars, t, &mut out)?;
        Ok(Code(out))
    }

    fn run(&self, m: &MLattice, env: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        for ins in &self.0 {
            match *ins {
                Instr::Var(i) => stack.push(env[i]),
                Instr::Box => {
                    let x = stack.pop().expect("well-formed code");
                    stack.push(m.boxed(x));
                }
                Instr::Dia => {
                    let x = stack.pop().expect("well-formed code");
                    stack.push(m.dia(x));
                }
                Instr::Op(i) => {
                    let k = m.base.signature().ops()[i].arity;
                    let at = stack.len() - k;
                    let v = m.base.apply(i, &stack[at..]);
                    stack.truncate(at);
                    stack.push(v);
                }
            }
        }
        stack.pop().expect("well-formed code")
    }
}

/// An equation compiled against one m-lattice.
struct Compiled {
    vars: Vec<u32>,
    premise: Option<(Code, Rel, Code)>,
    lhs: Code,
    rel: Rel,
    rhs: Code,
}

fn holds(m: &MLattice, rel: Rel, a: usize, b: usize) -> bool {
    match rel {
        Rel::Eq => a == b,
        Rel::Le => m.base.le(a, b),
    }
}

impl Compiled {
    fn new(m: &MLattice, eq: &Equation) -> Result<Self, AlgError> {
        let vars = eq.vars();
        let premise = match &eq.premise {
            Some((a, r, b)) => Some((Code::new(m, &vars, a)?, *r, Code::new(m, &vars, b)?)),
            None => None,
        };
        let lhs = Code::new(m, &vars, &eq.lhs)?;
        let rhs = Code::new(m, &vars, &eq.rhs)?;
        Ok(Compiled { vars, premise, lhs, rel: eq.rel, rhs })
    }

    /// `None` when the premise fails, else the two sides and whether they
    /// stand in the relation.
    fn eval(&self, m: &MLattice, env: &[usize], stack: &mut Vec<usize>) -> Option<(usize, usize, bool)> {
        if let Some((a, r, b)) = &self.premise {
            let (x, y) = (a.run(m, env, stack), b.run(m, env, stack));
            if !holds(m, *r, x, y) {
                return None;
            }
        }
        let (l, r) = (self.lhs.run(m, env, stack), self.rhs.run(m, env, stack));
        Some((l, r, holds(m, self.rel, l, r)))
    }
}

/// The result of evaluating under one assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Single {
    /// False when the premise of a quasi-equation fails.
    pub premise_holds: bool,
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

/// Evaluates both sides under `values`, one element per variable of
/// [`Equation::vars`] in order.
pub fn eval_single(m: &MLattice, eq: &Equation, values: &[usize]) -> Result<Single, AlgError> {
    let c = Compiled::new(m, eq)?;
    if values.len() != c.vars.len() {
        return Err(AlgError::Format(format!("expected values for {} variables, got {}", c.vars.len(), values.len())));
    }
    if let Some(&bad) = values.iter().find(|&&x| x >= m.size()) {
        return Err(AlgError::Format(format!("{bad} is outside the carrier")));
    }
    let mut stack = Vec::new();
    let (l, r) = (c.lhs.run(m, values, &mut stack), c.rhs.run(m, values, &mut stack));
    let premise_holds = c.eval(m, values, &mut stack).is_some();
    Ok(Single { premise_holds, lhs: l, rhs: r, holds: !premise_holds || holds(m, c.rel, l, r) })
}

/// Whether an equation holds under every assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    /// The first failing assignment in lexicographic order, with the values
    /// of both sides.
    Fails { vars: Vec<u32>, values: Vec<usize>, lhs: usize, rhs: usize },
}

/// Checks every assignment, refusing with `E-CAP` when there are more than
/// `cap` of them.
pub fn eval_all(m: &MLattice, eq: &Equation, cap: usize) -> Result<Outcome, AlgError> {
    let c = Compiled::new(m, eq)?;
    let k = c.vars.len();
    let count = m.size().checked_pow(k as u32).filter(|&c| c <= cap);
    if count.is_none() {
        return Err(AlgError::Cap(format!("{} assignments of {k} variables in `{}` exceed the cap of {cap}", m.size(), m.name())));
    }
    let mut stack = Vec::new();
    let mut found = None;
    first_failure(m.size(), k, |env| match c.eval(m, env, &mut stack) {
        Some((l, r, false)) => {
            found = Some((l, r));
            false
        }
        _ => true,
    })
    .map_or(Ok(Outcome::Holds), |values| {
        let (lhs, rhs) = found.expect("recorded with the failure");
        Ok(Outcome::Fails { vars: c.vars.clone(), values, lhs, rhs })
    })
}

/// Evaluates a term; `value` supplies the element for each variable.
pub fn eval_term(m: &MLattice, t: &Term, value: &dyn Fn(u32) -> Option<usize>) -> Result<usize, AlgError> {
    let mut vars = Vec::new();
    t.collect_vars(&mut vars);
    vars.sort_unstable();
    vars.dedup();
    let env = vars
        .iter()
        .map(|&v| value(v).filter(|&x| x < m.size()).ok_or_else(|| AlgError::Format(format!("no element for v{v}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Code::new(m, &vars, t)?.run(m, &env, &mut Vec::new()))
}
