//! Text grammar for elements.
//!
//! Terms are `*`-joined factors: rational literals `a/b`, even coordinates
//! `t1` with optional integer powers `t1^-2`, Grassmann factors `x1`, and
//! generator symbols `D0..Dm`, `P1..Pn`.  Terms combine with `+` and `-`,
//! and `[X, Y]` takes the bracket of two vector fields.  Errors carry the
//! 1-based column of the offending token.

use std::fmt;

use superwitt::scalar::{q, Scalar};
use superwitt::superalg::SuperPoly;
use superwitt::vfields::{AlgebraKind, Generator, VectorField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

/// Symbol families the lexer distinguishes by leading letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SymKind {
    T,
    X,
    D,
    P,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Sym(SymKind, usize),
    Caret,
    Star,
    Slash,
    Plus,
    Minus,
    LBrack,
    RBrack,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let pos = i + 1;
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '^' => Some(Tok::Caret),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((pos, t));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            match digits.parse::<i64>() {
                Ok(v) => out.push((pos, Tok::Int(v))),
                Err(_) => return err(pos, "integer literal too large"),
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let kind = match c {
                't' => SymKind::T,
                'x' => SymKind::X,
                'D' | 'd' => SymKind::D,
                'P' | 'p' => SymKind::P,
                _ => return err(pos, format!("unknown symbol '{c}'")),
            };
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return err(pos, format!("'{c}' must be followed by an index"));
            }
            let digits: String = chars[start..i].iter().collect();
            match digits.parse::<usize>() {
                Ok(v) => out.push((pos, Tok::Sym(kind, v))),
                Err(_) => return err(pos, "index too large"),
            }
            continue;
        }
        return err(pos, format!("unexpected character '{c}'"));
    }
    Ok(out)
}

/// Parsed syntax, prior to evaluation against an algebra kind.  Atom
/// variants keep the column they started at so evaluation errors can point
/// back into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Rat { num: i64, den: i64, pos: usize },
    TPow { label: usize, exp: i64, pos: usize },
    Xi { alpha: usize, pos: usize },
    Gen { gen: Generator, pos: usize },
    Neg(Box<Expr>),
    Prod(Vec<Expr>),
    Sum(Vec<Expr>),
    Bracket(Box<Expr>, Box<Expr>, usize),
}

impl Expr {
    fn pos(&self) -> usize {
        match self {
            Expr::Rat { pos, .. }
            | Expr::TPow { pos, .. }
            | Expr::Xi { pos, .. }
            | Expr::Gen { pos, .. }
            | Expr::Bracket(_, _, pos) => *pos,
            Expr::Neg(e) => e.pos(),
            Expr::Prod(v) | Expr::Sum(v) => v.first().map_or(1, Expr::pos),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize, ParseError> {
        match self.bump() {
            Some((p, t)) if t == want => Ok(p),
            Some((p, _)) => err(p, format!("expected {what}")),
            None => err(self.end, format!("expected {what}")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut negate = matches!(self.peek(), Some(Tok::Minus));
        if negate {
            self.bump();
        }
        loop {
            let t = self.term()?;
            terms.push(if negate { Expr::Neg(Box::new(t)) } else { t });
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => break,
            }
            self.bump();
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Prod(factors) })
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.bump() {
            Some((pos, Tok::Int(num))) => {
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some((_, Tok::Int(0))) => err(dpos, "zero denominator"),
                        Some((_, Tok::Int(den))) => Ok(Expr::Rat { num, den, pos }),
                        _ => err(dpos, "expected a denominator"),
                    }
                } else {
                    Ok(Expr::Rat { num, den: 1, pos })
                }
            }
            Some((pos, Tok::Sym(SymKind::T, label))) => {
                let exp = if matches!(self.peek(), Some(Tok::Caret)) {
                    let cpos = self.pos();
                    self.bump();
                    let neg = matches!(self.peek(), Some(Tok::Minus));
                    if neg {
                        self.bump();
                    }
                    match self.bump() {
                        Some((_, Tok::Int(e))) => {
                            if neg {
                                -e
                            } else {
                                e
                            }
                        }
                        _ => return err(cpos, "expected an integer exponent"),
                    }
                } else {
                    1
                };
                Ok(Expr::TPow { label, exp, pos })
            }
            Some((pos, Tok::Sym(kind, idx))) => {
                if matches!(self.peek(), Some(Tok::Caret)) {
                    return err(self.pos(), "exponents apply to even coordinates only");
                }
                Ok(match kind {
                    SymKind::X => Expr::Xi { alpha: idx, pos },
                    SymKind::D => Expr::Gen { gen: Generator::D(idx), pos },
                    SymKind::P => Expr::Gen { gen: Generator::P(idx), pos },
                    SymKind::T => unreachable!(),
                })
            }
            Some((pos, Tok::LBrack)) => {
                let a = self.expr()?;
                self.expect(Tok::Comma, "',' between bracket arguments")?;
                let b = self.expr()?;
                self.expect(Tok::RBrack, "']'")?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b), pos))
            }
            Some((pos, _)) => err(pos, "expected a factor"),
            None => err(self.end, "expected a factor"),
        }
    }
}

/// Parses the text to syntax without committing to an algebra kind.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let end = text.chars().count() + 1;
    let mut p = Parser { toks, at: 0, end };
    let e = p.expr()?;
    if let Some((pos, _)) = p.toks.get(p.at) {
        return err(*pos, "unexpected trailing input");
    }
    Ok(e)
}

/// Result of evaluating an [`Expr`]: either a coefficient function or a
/// vector field of the requested kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Poly(SuperPoly),
    Field(VectorField),
}

fn mul_step(kind: AlgebraKind, acc: Parsed, rhs: Parsed, rpos: usize) -> Result<Parsed, ParseError> {
    let _ = kind;
    match (acc, rhs) {
        (Parsed::Poly(a), Parsed::Poly(b)) => match a.try_mul(&b) {
            Ok(p) => Ok(Parsed::Poly(p)),
            Err(e) => err(rpos, e.to_string()),
        },
        (Parsed::Poly(a), Parsed::Field(f)) => match f.mul_poly(&a) {
            Ok(x) => Ok(Parsed::Field(x)),
            Err(e) => err(rpos, e.to_string()),
        },
        (Parsed::Field(_), _) => err(rpos, "a generator must end its term"),
    }
}

fn eval(kind: AlgebraKind, e: &Expr) -> Result<Parsed, ParseError> {
    let ctx = kind.context();
    match e {
        Expr::Rat { num, den, pos: _ } => {
            Ok(Parsed::Poly(SuperPoly::one(ctx).scale(&q(*num, *den))))
        }
        Expr::TPow { label, exp, pos } => {
            let base = match SuperPoly::var_t(ctx, *label) {
                Ok(p) => p,
                Err(_) => return err(*pos, format!("unknown even coordinate t{label}")),
            };
            let mono = base.terms().next().expect("var_t is a monomial").0.clone();
            let mut m = mono;
            let slot = ctx.pos(*label).expect("label was just validated");
            m.t[slot] = *exp;
            Ok(Parsed::Poly(
                SuperPoly::monomial(ctx, m, q(1, 1)).expect("context matches"),
            ))
        }
        Expr::Xi { alpha, pos } => match SuperPoly::var_xi(ctx, *alpha) {
            Ok(p) => Ok(Parsed::Poly(p)),
            Err(_) => err(*pos, format!("unknown odd coordinate x{alpha}")),
        },
        Expr::Gen { gen, pos } => match VectorField::generator(kind, *gen) {
            Ok(x) => Ok(Parsed::Field(x)),
            Err(_) => err(*pos, format!("unknown generator {gen}")),
        },
        Expr::Neg(inner) => Ok(match eval(kind, inner)? {
            Parsed::Poly(p) => Parsed::Poly(p.scale(&q(-1, 1))),
            Parsed::Field(x) => Parsed::Field(x.scale(&q(-1, 1))),
        }),
        Expr::Prod(factors) => {
            let mut acc = eval(kind, &factors[0])?;
            for f in &factors[1..] {
                let rhs = eval(kind, f)?;
                acc = mul_step(kind, acc, rhs, f.pos())?;
            }
            Ok(acc)
        }
        Expr::Sum(terms) => {
            let mut acc = eval(kind, &terms[0])?;
            for t in &terms[1..] {
                acc = match (acc, eval(kind, t)?) {
                    (Parsed::Poly(a), Parsed::Poly(b)) => match a.try_add(&b) {
                        Ok(p) => Parsed::Poly(p),
                        Err(e) => return err(t.pos(), e.to_string()),
                    },
                    (Parsed::Field(a), Parsed::Field(b)) => match a.try_add(&b) {
                        Ok(x) => Parsed::Field(x),
                        Err(e) => return err(t.pos(), e.to_string()),
                    },
                    _ => {
                        return err(
                            t.pos(),
                            "cannot add a coefficient function and a vector field",
                        )
                    }
                };
            }
            Ok(acc)
        }
        Expr::Bracket(a, b, pos) => {
            let (xa, xb) = (eval(kind, a)?, eval(kind, b)?);
            match (xa, xb) {
                (Parsed::Field(xa), Parsed::Field(xb)) => match xa.try_bracket(&xb) {
                    Ok(x) => Ok(Parsed::Field(x)),
                    Err(e) => err(*pos, e.to_string()),
                },
                _ => err(*pos, "bracket arguments must be vector fields"),
            }
        }
    }
}

/// Parses and evaluates against `kind`, yielding a function or a field.
pub fn parse_element(kind: AlgebraKind, text: &str) -> Result<Parsed, ParseError> {
    let e = parse_expr(text)?;
    eval(kind, &e)
}

/// Parses text that must denote a coefficient function.
pub fn parse_poly(kind: AlgebraKind, text: &str) -> Result<SuperPoly, ParseError> {
    match parse_element(kind, text)? {
        Parsed::Poly(p) => Ok(p),
        Parsed::Field(_) => err(1, "expected a coefficient function, found a vector field"),
    }
}

/// Parses text that must denote a vector field.
pub fn parse_field(kind: AlgebraKind, text: &str) -> Result<VectorField, ParseError> {
    match parse_element(kind, text)? {
        Parsed::Field(x) => Ok(x),
        Parsed::Poly(_) => err(1, "expected a vector field, found a coefficient function"),
    }
}

/// Parses a rational in `a/b` or integer form, for CLI scalar options.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    let t = text.trim();
    match t.parse::<Scalar>() {
        Ok(c) => Ok(c),
        Err(_) => err(1, format!("'{t}' is not a rational number")),
    }
}

/// Parses a comma-separated list of rationals.
pub fn parse_scalar_list(text: &str) -> Result<Vec<Scalar>, ParseError> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',').map(parse_scalar).collect()
}
