//! Lexer and precedence-climbing parser shared by formulas, sequents and
//! algebraic terms.
//!
//! Parsing goes through a small untyped tree ([`Ast`]) that each language
//! then converts and validates.

use super::{BinOp, Const, Formula, Modal, SyntaxError, Var};

/// Lexical tokens. Unicode connectives are accepted as aliases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Bin(BinOp),
    Square,
    Diamond,
    Forall,
    Exists,
    /// `~`, equality of terms.
    Approx,
    /// `<=`
    Le,
    /// `|-`, the sequent arrow.
    Turnstile,
    /// `==>`, separating the premise of a quasi-equation.
    Implies,
    Eof,
}

/// Splits input into tokens with their byte offsets.
pub struct Lexer;

impl Lexer {
    pub fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, SyntaxError> {
        let mut out = Vec::new();
        let mut it = text.char_indices().peekable();
        while let Some(&(pos, c)) = it.peek() {
            if c.is_whitespace() {
                it.next();
                continue;
            }
            if c.is_ascii_alphanumeric() || c == '_' {
                let mut word = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                let tok = match word.as_str() {
                    "forall" => Token::Forall,
                    "exists" => Token::Exists,
                    _ => Token::Ident(word),
                };
                out.push((tok, pos));
                continue;
            }
            it.next();
            let next = it.peek().map(|&(_, c)| c);
            let two = |tok: Token, it: &mut std::iter::Peekable<std::str::CharIndices<'_>>| {
                it.next();
                tok
            };
            let tok = match (c, next) {
                ('(', _) => Token::LParen,
                (')', _) => Token::RParen,
                (',', _) => Token::Comma,
                ('&' | '∧', _) => Token::Bin(BinOp::And),
                ('|', Some('-')) => two(Token::Turnstile, &mut it),
                ('|' | '∨', _) => Token::Bin(BinOp::Or),
                ('*' | '·' | '⋅', _) => Token::Bin(BinOp::Mul),
                ('-', Some('>')) => two(Token::Bin(BinOp::Imp), &mut it),
                ('→', _) => Token::Bin(BinOp::Imp),
                ('[', Some(']')) => two(Token::Square, &mut it),
                ('□', _) => Token::Square,
                ('<', Some('>')) => two(Token::Diamond, &mut it),
                ('<', Some('=')) => two(Token::Le, &mut it),
                ('◇' | '◊', _) => Token::Diamond,
                ('≤', _) => Token::Le,
                ('~' | '≈', _) => Token::Approx,
                ('⇒' | '⊢', _) => Token::Turnstile,
                ('=', Some('=')) => {
                    it.next();
                    match it.next() {
                        Some((_, '>')) => Token::Implies,
                        _ => return Err(syntax(pos, "expected `==>`")),
                    }
                }
                ('∀', _) => Token::Forall,
                ('∃', _) => Token::Exists,
                _ => return Err(syntax(pos, format!("unexpected character `{c}`"))),
            };
            out.push((tok, pos));
        }
        out.push((Token::Eof, text.len()));
        Ok(out)
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> SyntaxError {
    SyntaxError::Syntax { pos, msg: msg.into() }
}

/// Language-neutral parse tree.
#[derive(Clone, Debug)]
pub(crate) enum Ast {
    Name(String, usize),
    App(String, Vec<Ast>, usize),
    Bin(BinOp, Box<Ast>, Box<Ast>),
    Square(Box<Ast>),
    Diamond(Box<Ast>),
    Forall(String, Box<Ast>, usize),
    Exists(String, Box<Ast>, usize),
}

/// Recursive-descent parser over a token vector.
pub(crate) struct Parser {
    toks: Vec<(Token, usize)>,
    at: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Parser { toks: Lexer::tokenize(text)?, at: 0 })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.toks[self.at].0
    }

    pub(crate) fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    /// Consumes `tok` if it is next.
    pub(crate) fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Token, what: &str) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}, found {}", describe(self.peek()))))
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), SyntaxError> {
        self.expect(&Token::Eof, "end of input")
    }

    /// Parses a full formula (lowest precedence level).
    pub(crate) fn formula(&mut self) -> Result<Ast, SyntaxError> {
        self.binary(1)
    }

    fn binary(&mut self, min_prec: u8) -> Result<Ast, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Bin(op) if op.prec() >= min_prec => *op,
                _ => return Ok(lhs),
            };
            self.bump();
            let next = if op.right_assoc() { op.prec() } else { op.prec() + 1 };
            let rhs = self.binary(next)?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Ast, SyntaxError> {
        let pos = self.pos();
        match self.bump() {
            Token::Square => Ok(Ast::Square(Box::new(self.unary()?))),
            Token::Diamond => Ok(Ast::Diamond(Box::new(self.unary()?))),
            q @ (Token::Forall | Token::Exists) => {
                let var_pos = self.pos();
                let var = match self.bump() {
                    Token::Ident(v) => v,
                    t => return Err(syntax(var_pos, format!("expected a variable after quantifier, found {}", describe(&t)))),
                };
                let body = Box::new(self.unary()?);
                Ok(if q == Token::Forall { Ast::Forall(var, body, var_pos) } else { Ast::Exists(var, body, var_pos) })
            }
            Token::LParen => {
                let inner = self.formula()?;
                self.expect(&Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Ident(name) => {
                if self.eat(&Token::LParen) {
                    let mut args = Vec::new();
                    if !self.eat(&Token::RParen) {
                        loop {
                            args.push(self.formula()?);
                            if self.eat(&Token::RParen) {
                                break;
                            }
                            self.expect(&Token::Comma, "`,` or `)`")?;
                        }
                    }
                    Ok(Ast::App(name, args, pos))
                } else {
                    Ok(Ast::Name(name, pos))
                }
            }
            t => Err(syntax(pos, format!("expected a formula, found {}", describe(&t)))),
        }
    }
}

fn describe(t: &Token) -> String {
    match t {
        Token::Ident(s) => format!("`{s}`"),
        Token::LParen => "`(`".into(),
        Token::RParen => "`)`".into(),
        Token::Comma => "`,`".into(),
        Token::Bin(op) => format!("`{}`", op.symbol()),
        Token::Square => "`[]`".into(),
        Token::Diamond => "`<>`".into(),
        Token::Forall => "`forall`".into(),
        Token::Exists => "`exists`".into(),
        Token::Approx => "`~`".into(),
        Token::Le => "`<=`".into(),
        Token::Turnstile => "`|-`".into(),
        Token::Implies => "`==>`".into(),
        Token::Eof => "end of input".into(),
    }
}

/// Parses `prefix` followed by a decimal index, e.g. `P3` or `v0`.
pub(crate) fn indexed(name: &str, prefix: char) -> Option<u32> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || (rest.len() > 1 && rest.starts_with('0')) {
        return None;
    }
    rest.parse().ok()
}

fn constant(name: &str) -> Option<Const> {
    match name {
        "e" => Some(Const::E),
        "f" => Some(Const::F),
        _ => None,
    }
}

impl Ast {
    pub(crate) fn to_fo(&self) -> Result<Formula, SyntaxError> {
        Ok(match self {
            Ast::Name(n, pos) => match constant(n) {
                Some(c) => Formula::Const(c),
                None => return Err(syntax(*pos, format!("`{n}` is not a formula; atoms are written P<i>(x) or P<i>(y<n>)"))),
            },
            Ast::App(n, args, pos) => {
                let i = indexed(n, 'P').ok_or_else(|| syntax(*pos, format!("unknown predicate `{n}`")))?;
                let [Ast::Name(v, vpos)] = args.as_slice() else {
                    return Err(syntax(*pos, format!("predicate `{n}` takes exactly one variable")));
                };
                let var = v.parse::<Var>().map_err(|_| syntax(*vpos, format!("`{v}` is not a variable")))?;
                Formula::Atom(i, var)
            }
            Ast::Bin(op, a, b) => Formula::bin(*op, a.to_fo()?, b.to_fo()?),
            Ast::Square(_) | Ast::Diamond(_) => {
                return Err(syntax(0, "modal operators are not part of the first-order language"))
            }
            Ast::Forall(v, body, _) | Ast::Exists(v, body, _) => {
                if v != "x" {
                    return Err(SyntaxError::BoundVar { var: v.clone() });
                }
                let body = body.to_fo()?;
                if matches!(self, Ast::Forall(..)) {
                    Formula::forall(body)
                } else {
                    Formula::exists(body)
                }
            }
        })
    }

    pub(crate) fn to_modal(&self) -> Result<Modal, SyntaxError> {
        Ok(match self {
            Ast::Name(n, pos) => match constant(n) {
                Some(c) => Modal::Const(c),
                None => Modal::Atom(
                    indexed(n, 'p').ok_or_else(|| syntax(*pos, format!("unknown atom `{n}`; atoms are written p<i>")))?,
                ),
            },
            Ast::App(n, _, pos) => return Err(syntax(*pos, format!("unexpected application `{n}(...)`"))),
            Ast::Bin(op, a, b) => Modal::bin(*op, a.to_modal()?, b.to_modal()?),
            Ast::Square(a) => Modal::square(a.to_modal()?),
            Ast::Diamond(a) => Modal::diamond(a.to_modal()?),
            Ast::Forall(_, _, pos) | Ast::Exists(_, _, pos) => {
                return Err(syntax(*pos, "quantifiers are not part of the modal language"))
            }
        })
    }
}

/// Parses a first-order formula and enforces the one-variable restrictions.
pub fn parse_fo(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text)?;
    let ast = p.formula()?;
    p.expect_end()?;
    let f = ast.to_fo()?;
    f.check()?;
    Ok(f)
}

/// Parses a modal formula.
pub fn parse_modal(text: &str) -> Result<Modal, SyntaxError> {
    let mut p = Parser::new(text)?;
    let ast = p.formula()?;
    p.expect_end()?;
    ast.to_modal()
}

fn parse_list<T>(text: &str, conv: impl Fn(&Ast) -> Result<T, SyntaxError>) -> Result<Vec<T>, SyntaxError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    if p.eat(&Token::Eof) {
        return Ok(out);
    }
    loop {
        out.push(conv(&p.formula()?)?);
        if p.eat(&Token::Eof) {
            return Ok(out);
        }
        p.expect(&Token::Comma, "`,`")?;
    }
}

/// Parses a comma-separated, possibly empty list of first-order formulas.
pub fn parse_fo_list(text: &str) -> Result<Vec<Formula>, SyntaxError> {
    parse_list(text, |a| {
        let f = a.to_fo()?;
        f.check()?;
        Ok(f)
    })
}

/// Parses a comma-separated, possibly empty list of modal formulas.
pub fn parse_modal_list(text: &str) -> Result<Vec<Modal>, SyntaxError> {
    parse_list(text, Ast::to_modal)
}
