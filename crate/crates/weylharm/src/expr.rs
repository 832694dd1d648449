//! Deterministic parser for polynomial and operator expressions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := '-'? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := '(' expr ')' | 'z' | 'zb' | 'dz' | 'dzb' | 'x' | 'i' | nat ('/' nat)?
//! ```
//!
//! Products are order-preserving; operator expressions are normalized to
//! canonical form on evaluation. Every failure is a position-annotated
//! error and evaluation enforces degree and size limits, so arbitrary
//! input cannot panic or exhaust memory.

use crate::poly::BiPoly;
use crate::scalar::{GaussRational, Rational};
use crate::weyl::WeylOp2;
use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

/// Largest total degree an evaluated expression may reach.
pub const MAX_DEGREE: u32 = 256;
/// Largest number of stored terms an evaluated expression may reach.
pub const MAX_TERMS: usize = 100_000;
/// Largest coefficient size (total numerator plus denominator bits) an
/// evaluated expression may reach.
pub const MAX_COEFF_BITS: u64 = 1 << 20;

/// Position-annotated parse or evaluation error. Offsets are byte indices
/// into the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)
    }
}

impl std::error::Error for ParseError {}

/// Variable and operator atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    Z,
    Zb,
    Dz,
    Dzb,
    X,
}

/// Abstract syntax of an expression; products preserve the written order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    Scalar(GaussRational),
    Atom(Atom, usize),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Num(BigInt),
    Ident(String),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => pos += 1,
            b'+' => {
                out.push((Tok::Plus, pos));
                pos += 1;
            }
            b'-' => {
                out.push((Tok::Minus, pos));
                pos += 1;
            }
            b'*' => {
                out.push((Tok::Star, pos));
                pos += 1;
            }
            b'/' => {
                out.push((Tok::Slash, pos));
                pos += 1;
            }
            b'^' => {
                out.push((Tok::Caret, pos));
                pos += 1;
            }
            b'(' => {
                out.push((Tok::LParen, pos));
                pos += 1;
            }
            b')' => {
                out.push((Tok::RParen, pos));
                pos += 1;
            }
            b'0'..=b'9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits = &src[start..pos];
                let value: BigInt = digits.parse().expect("digits");
                out.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_alphabetic() {
                    pos += 1;
                }
                out.push((Tok::Ident(src[start..pos].to_string()), start));
            }
            _ => {
                return Err(ParseError::new(pos, format!("unexpected character {:?}", b as char)));
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.cursor).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.cursor)
            .map(|&(_, o)| o)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let item = self.tokens.get(self.cursor).cloned();
        if item.is_some() {
            self.cursor += 1;
        }
        item
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<usize, ParseError> {
        match self.bump() {
            Some((t, o)) if t == tok => Ok(o),
            Some((_, o)) => Err(ParseError::new(o, format!("expected {what}"))),
            None => Err(ParseError::new(self.end, format!("expected {what}"))),
        }
    }

    fn parse_expr(&mut self) -> Result<ExprAst, ParseError> {
        let negated = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.parse_term()?;
        if negated {
            acc = ExprAst::Neg(Box::new(acc));
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = ExprAst::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = ExprAst::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<ExprAst, ParseError> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let rhs = self.parse_factor()?;
            acc = ExprAst::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.parse_base()?;
        if self.peek() == Some(&Tok::Caret) {
            let caret_at = self.offset();
            self.bump();
            let at = self.offset();
            match self.bump() {
                Some((Tok::Num(n), _)) => {
                    let exp: u32 = n
                        .try_into()
                        .map_err(|_| ParseError::new(at, "exponent too large"))?;
                    return Ok(ExprAst::Pow(Box::new(base), exp, caret_at));
                }
                Some((_, o)) => return Err(ParseError::new(o, "expected exponent")),
                None => return Err(ParseError::new(self.end, "expected exponent")),
            }
        }
        Ok(base)
    }

    fn parse_base(&mut self) -> Result<ExprAst, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some((Tok::LParen, _)) => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "closing parenthesis")?;
                Ok(inner)
            }
            Some((Tok::Num(numer), _)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let denom_at = self.offset();
                    match self.bump() {
                        Some((Tok::Num(denom), _)) => {
                            if denom.is_zero() {
                                return Err(ParseError::new(denom_at, "zero denominator"));
                            }
                            Ok(ExprAst::Scalar(GaussRational::from_rational(
                                Rational::new(numer, denom),
                            )))
                        }
                        Some((_, o)) => Err(ParseError::new(o, "expected denominator")),
                        None => Err(ParseError::new(self.end, "expected denominator")),
                    }
                } else {
                    Ok(ExprAst::Scalar(GaussRational::from_rational(
                        Rational::from_integer(numer),
                    )))
                }
            }
            Some((Tok::Ident(name), o)) => match name.as_str() {
                "z" => Ok(ExprAst::Atom(Atom::Z, o)),
                "zb" => Ok(ExprAst::Atom(Atom::Zb, o)),
                "dz" => Ok(ExprAst::Atom(Atom::Dz, o)),
                "dzb" => Ok(ExprAst::Atom(Atom::Dzb, o)),
                "x" => Ok(ExprAst::Atom(Atom::X, o)),
                "i" => Ok(ExprAst::Scalar(GaussRational::i())),
                other => Err(ParseError::new(o, format!("unknown symbol `{other}`"))),
            },
            Some((_, o)) => Err(ParseError::new(o, "expected an expression")),
            None => Err(ParseError::new(at, "expected an expression")),
        }
    }
}

/// Parses the source into an abstract syntax tree without interpreting the
/// atoms.
pub fn parse_expr(src: &str) -> Result<ExprAst, ParseError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end: src.len(),
    };
    let ast = parser.parse_expr()?;
    if parser.cursor != parser.tokens.len() {
        return Err(ParseError::new(parser.offset(), "unexpected trailing input"));
    }
    Ok(ast)
}

fn poly_bits(p: &BiPoly) -> u64 {
    p.terms()
        .map(|(_, c)| crate::scalar::bit_weight(c))
        .max()
        .unwrap_or(0)
}

fn check_poly(p: &BiPoly, at: usize) -> Result<(), ParseError> {
    if p.degree() > MAX_DEGREE || p.num_terms() > MAX_TERMS || poly_bits(p) > MAX_COEFF_BITS {
        return Err(ParseError::new(at, "expression grows beyond supported size"));
    }
    Ok(())
}

fn eval_poly(ast: &ExprAst) -> Result<BiPoly, ParseError> {
    match ast {
        ExprAst::Scalar(c) => Ok(BiPoly::constant(c.clone())),
        ExprAst::Atom(Atom::Z, _) => Ok(BiPoly::monomial(1, 0, GaussRational::one())),
        ExprAst::Atom(Atom::Zb, _) => Ok(BiPoly::monomial(0, 1, GaussRational::one())),
        ExprAst::Atom(_, o) => Err(ParseError::new(
            *o,
            "operator symbols are not allowed in a polynomial",
        )),
        ExprAst::Neg(inner) => Ok(-&eval_poly(inner)?),
        ExprAst::Add(a, b) => Ok(&eval_poly(a)? + &eval_poly(b)?),
        ExprAst::Sub(a, b) => Ok(&eval_poly(a)? - &eval_poly(b)?),
        ExprAst::Mul(a, b) => {
            let product = &eval_poly(a)? * &eval_poly(b)?;
            check_poly(&product, 0)?;
            Ok(product)
        }
        ExprAst::Pow(base, exp, at) => {
            let base = eval_poly(base)?;
            // Degree and coefficient-size budgets are both checked before
            // the power is computed; constant bases grow in bits, not in
            // degree.
            if base.degree() as u64 * *exp as u64 > MAX_DEGREE as u64
                || poly_bits(&base).saturating_mul(*exp as u64) > MAX_COEFF_BITS
            {
                return Err(ParseError::new(*at, "expression grows beyond supported size"));
            }
            let value = base.pow(*exp);
            check_poly(&value, *at)?;
            Ok(value)
        }
    }
}

fn op_degree(op: &WeylOp2) -> u32 {
    op.terms()
        .map(|(&(a1, b1, a2, b2), _)| a1 + b1 + a2 + b2)
        .max()
        .unwrap_or(0)
}

fn op_bits(op: &WeylOp2) -> u64 {
    op.terms()
        .map(|(_, c)| crate::scalar::bit_weight(c))
        .max()
        .unwrap_or(0)
}

fn check_op(op: &WeylOp2, at: usize) -> Result<(), ParseError> {
    if op_degree(op) > MAX_DEGREE || op.num_terms() > MAX_TERMS || op_bits(op) > MAX_COEFF_BITS {
        return Err(ParseError::new(at, "expression grows beyond supported size"));
    }
    Ok(())
}

fn eval_op(ast: &ExprAst) -> Result<WeylOp2, ParseError> {
    match ast {
        ExprAst::Scalar(c) => Ok(WeylOp2::constant(c.clone())),
        ExprAst::Atom(Atom::Z, _) => Ok(WeylOp2::z()),
        ExprAst::Atom(Atom::Zb, _) => Ok(WeylOp2::zb()),
        ExprAst::Atom(Atom::Dz, _) => Ok(WeylOp2::dz()),
        ExprAst::Atom(Atom::Dzb, _) => Ok(WeylOp2::dzb()),
        ExprAst::Atom(Atom::X, o) => Err(ParseError::new(
            *o,
            "`x` is not allowed in an operator expression",
        )),
        ExprAst::Neg(inner) => Ok(-&eval_op(inner)?),
        ExprAst::Add(a, b) => Ok(&eval_op(a)? + &eval_op(b)?),
        ExprAst::Sub(a, b) => Ok(&eval_op(a)? - &eval_op(b)?),
        ExprAst::Mul(a, b) => {
            let product = &eval_op(a)? * &eval_op(b)?;
            check_op(&product, 0)?;
            Ok(product)
        }
        ExprAst::Pow(base, exp, at) => {
            let base = eval_op(base)?;
            if op_degree(&base) as u64 * *exp as u64 > MAX_DEGREE as u64
                || op_bits(&base).saturating_mul(*exp as u64) > MAX_COEFF_BITS
            {
                return Err(ParseError::new(*at, "expression grows beyond supported size"));
            }
            let value = base.pow(*exp);
            check_op(&value, *at)?;
            Ok(value)
        }
    }
}

/// Parses a polynomial in `z`, `zb`. Operator symbols are rejected with
/// their position.
pub fn parse_poly(src: &str) -> Result<BiPoly, ParseError> {
    eval_poly(&parse_expr(src)?)
}

/// Parses an operator expression in `z`, `zb`, `dz`, `dzb`; the
/// noncommutative product is taken left-to-right and normalized.
pub fn parse_op(src: &str) -> Result<WeylOp2, ParseError> {
    eval_op(&parse_expr(src)?)
}
