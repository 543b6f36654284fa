//! Text syntax for rational functions in `q`.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := (INT | '(' '-'? INT ')') ('^' exponent)?
//! atom     := INT | 'q' | 'qint' '(' INT (',' INT)? ')' | '(' expr ')'
//! ```
//!
//! `qint(n, r)` is the quantum integer `[n]_{q^r}`; `r` defaults to 1.
//! Exponent chains are right-associative and folded to a single integer at
//! parse time, so `q^2^3` is `q^8`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{Polynomial, Rational};
use crate::ratfunc::{RatFuncError, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    Number(BigInt),
    Var,
    QInt { n: u64, r: u64 },
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, i64),
    Neg(Box<ExprAst>),
    Group(Box<ExprAst>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnknownIdentifier(String),
    Expected(&'static str),
    NonIntegerExponent,
    ExponentTooLarge,
    ZeroDenominatorLiteral,
    InvalidQintArgument,
}

/// A syntax error at a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier {s:?}"),
            ParseErrorKind::Expected(what) => write!(f, "expected {what}"),
            ParseErrorKind::NonIntegerExponent => f.write_str("exponent must be an integer literal"),
            ParseErrorKind::ExponentTooLarge => f.write_str("exponent out of range"),
            ParseErrorKind::ZeroDenominatorLiteral => f.write_str("division by literal zero"),
            ParseErrorKind::InvalidQintArgument => f.write_str("qint arguments must be positive integer literals"),
        }
    }
}

/// Largest degree (and largest exponent magnitude) an evaluated subexpression may reach.
pub const MAX_DEGREE: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Arithmetic(#[from] RatFuncError),
    #[error("expression degree exceeds {MAX_DEGREE}")]
    DegreeTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + 1;
                chars.next();
            }
            let value = text[i..end].parse::<BigInt>().expect("digits");
            out.push((i, Tok::Int(value)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                end = j + 1;
                chars.next();
            }
            out.push((i, Tok::Ident(text[i..end].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Sym(c)));
            chars.next();
        } else {
            return Err(ParseError {
                offset: i,
                kind: ParseErrorKind::UnexpectedChar(c),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        let kind = if self.pos >= self.toks.len() && matches!(kind, ParseErrorKind::Expected(_)) {
            ParseErrorKind::UnexpectedEnd
        } else {
            kind
        };
        ParseError {
            offset: self.offset(),
            kind,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(ParseErrorKind::Expected(what)))
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                let at = self.offset();
                let rhs = self.unary()?;
                if is_zero_literal(&rhs) {
                    return Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::ZeroDenominatorLiteral,
                    });
                }
                lhs = ExprAst::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<ExprAst, ParseError> {
        if self.eat('-') {
            Ok(ExprAst::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            Ok(ExprAst::Pow(Box::new(base), e))
        } else {
            Ok(base)
        }
    }

    fn int_literal(&mut self) -> Option<BigInt> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Some(v)
            }
            _ => None,
        }
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let at = self.offset();
        let value = if let Some(v) = self.int_literal() {
            v
        } else if self.eat('(') {
            let negative = self.eat('-');
            let v = self
                .int_literal()
                .ok_or_else(|| self.err(ParseErrorKind::NonIntegerExponent))?;
            if !self.eat(')') {
                return Err(self.err(ParseErrorKind::NonIntegerExponent));
            }
            if negative {
                -v
            } else {
                v
            }
        } else {
            return Err(self.err(ParseErrorKind::NonIntegerExponent));
        };
        let too_large = ParseError {
            offset: at,
            kind: ParseErrorKind::ExponentTooLarge,
        };
        let mut value = value
            .to_i64()
            .filter(|v| v.unsigned_abs() <= u32::MAX as u64)
            .ok_or(too_large.clone())?;
        if self.eat('^') {
            let inner_at = self.offset();
            let inner = self.exponent()?;
            if inner < 0 {
                return Err(ParseError {
                    offset: inner_at,
                    kind: ParseErrorKind::NonIntegerExponent,
                });
            }
            value = u32::try_from(inner)
                .ok()
                .and_then(|k| value.checked_pow(k))
                .filter(|v| v.unsigned_abs() <= u32::MAX as u64)
                .ok_or(too_large)?;
        }
        Ok(value)
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(ExprAst::Number(v))
            }
            Some(Tok::Ident(name)) if name == "q" => {
                self.pos += 1;
                Ok(ExprAst::Var)
            }
            Some(Tok::Ident(name)) if name == "qint" => {
                self.pos += 1;
                self.expect('(', "'(' after qint")?;
                let n = self.qint_argument()?;
                let r = if self.eat(',') { self.qint_argument()? } else { 1 };
                self.expect(')', "')' closing qint")?;
                Ok(ExprAst::QInt { n, r })
            }
            Some(Tok::Ident(name)) => Err(ParseError {
                offset: at,
                kind: ParseErrorKind::UnknownIdentifier(name),
            }),
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')', "')'")?;
                Ok(ExprAst::Group(Box::new(inner)))
            }
            Some(Tok::Sym(c)) => Err(self.err(ParseErrorKind::UnexpectedChar(c))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn qint_argument(&mut self) -> Result<u64, ParseError> {
        self.int_literal()
            .and_then(|v| v.to_u64())
            .filter(|&v| v >= 1)
            .ok_or_else(|| ParseError {
                offset: self.offset(),
                kind: ParseErrorKind::InvalidQintArgument,
            })
    }
}

fn is_zero_literal(e: &ExprAst) -> bool {
    match e {
        ExprAst::Number(v) => v.is_zero(),
        ExprAst::Group(inner) => is_zero_literal(inner),
        _ => false,
    }
}

pub fn parse_expr(text: &str) -> Result<ExprAst, ParseError> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let ast = parser.expr()?;
    if parser.pos < parser.toks.len() {
        let kind = match &parser.toks[parser.pos].1 {
            Tok::Sym(c) => ParseErrorKind::UnexpectedChar(*c),
            _ => ParseErrorKind::Expected("an operator"),
        };
        return Err(parser.err(kind));
    }
    Ok(ast)
}

fn degree_of(f: &RationalFunction) -> u64 {
    let d = |p: &Polynomial| p.degree().unwrap_or(0) as u64;
    d(f.numer()).max(d(f.denom()))
}

pub fn eval_expr(ast: &ExprAst) -> Result<RationalFunction, EvalError> {
    Ok(match ast {
        ExprAst::Number(v) => RationalFunction::constant(Rational::from_integer(v.clone())),
        ExprAst::Var => Polynomial::q().into(),
        ExprAst::QInt { n, r } => {
            if r.checked_mul(n - 1).is_none_or(|d| d > MAX_DEGREE) {
                return Err(EvalError::DegreeTooLarge);
            }
            Polynomial::quantum_integer(*n, *r).into()
        }
        ExprAst::Add(a, b) => eval_expr(a)?.add(&eval_expr(b)?),
        ExprAst::Sub(a, b) => eval_expr(a)?.sub(&eval_expr(b)?),
        ExprAst::Mul(a, b) => eval_expr(a)?.mul(&eval_expr(b)?),
        ExprAst::Div(a, b) => eval_expr(a)?.div(&eval_expr(b)?)?,
        ExprAst::Pow(a, e) => {
            let base = eval_expr(a)?;
            if e.unsigned_abs() > MAX_DEGREE || degree_of(&base).saturating_mul(e.unsigned_abs()) > MAX_DEGREE {
                return Err(EvalError::DegreeTooLarge);
            }
            base.pow(*e)?
        }
        ExprAst::Neg(a) => eval_expr(a)?.neg(),
        ExprAst::Group(a) => eval_expr(a)?,
    })
}

/// Parses and evaluates in one step.
pub fn parse_rational_function(text: &str) -> Result<RationalFunction, ExprError> {
    Ok(eval_expr(&parse_expr(text)?)?)
}

/// Canonical text, descending powers; `parse_rational_function` reads it back.
pub fn format_expr(f: &RationalFunction) -> String {
    f.to_string()
}
