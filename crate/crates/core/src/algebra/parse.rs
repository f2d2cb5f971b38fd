//! Text grammar for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | variable | 'u' | '(' expr ')'
//! ```
//!
//! Variables are `x`, `y`, `z` (the first three) or `x1`, `x2`, ….
//! The token `u` denotes the class of `z` in an extension field
//! `F_p[z]/(μ)` and is rejected over a prime field. Integer literals are
//! reduced modulo `p`.

use std::sync::Arc;

use crate::algebra::field::FiniteField;
use crate::algebra::poly::{Monomial, MvPolynomial};
use crate::error::{Error, Result};

pub const MAX_EXPONENT: u32 = 1 << 16;
pub const MAX_TERMS: usize = 200_000;
pub const MAX_VARS: usize = 64;
const MAX_DEPTH: usize = 200;
const MAX_PRODUCT_WORK: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Var(usize),
    Gen,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Multivariate,
    /// Only the named variable is allowed; it maps to index 0.
    Univariate(char),
}

fn tokenize(text: &str, mode: Mode) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Num(text[start..i].to_string()), start));
                continue;
            }
            b'x' | b'y' | b'z' | b'u' => {
                i += 1;
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let suffix = &text[digits_start..i];
                let tok = match (mode, c) {
                    (Mode::Univariate(v), _) if c as char == v && suffix.is_empty() => Tok::Var(0),
                    (Mode::Univariate(v), _) => {
                        return Err(Error::parse(
                            start,
                            format!("only the variable {v} is allowed here"),
                        ))
                    }
                    (Mode::Multivariate, b'u') if suffix.is_empty() => Tok::Gen,
                    (Mode::Multivariate, b'x') if !suffix.is_empty() => {
                        let n: usize = suffix
                            .parse()
                            .ok()
                            .filter(|&n| (1..=MAX_VARS).contains(&n))
                            .ok_or_else(|| {
                                Error::parse(start, format!("variable index must be in 1..={MAX_VARS}"))
                            })?;
                        Tok::Var(n - 1)
                    }
                    (Mode::Multivariate, _) if suffix.is_empty() => {
                        Tok::Var(match c {
                            b'x' => 0,
                            b'y' => 1,
                            _ => 2,
                        })
                    }
                    _ => return Err(Error::parse(start, "unknown identifier")),
                };
                out.push((tok, start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::parse(start, format!("unexpected character {ch:?}")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    field: &'a Arc<FiniteField>,
    nvars: usize,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn guard(&self, at: usize, r: Result<MvPolynomial>) -> Result<MvPolynomial> {
        let poly = r.map_err(|e| match e {
            Error::Budget(msg) => Error::parse(at, msg),
            other => other,
        })?;
        if poly.num_terms() > MAX_TERMS {
            return Err(Error::parse(at, format!("expression expands to more than {MAX_TERMS} terms")));
        }
        Ok(poly)
    }

    fn product(&self, at: usize, a: &MvPolynomial, b: &MvPolynomial) -> Result<MvPolynomial> {
        if a.num_terms().saturating_mul(b.num_terms()) > MAX_PRODUCT_WORK {
            return Err(Error::parse(at, "expression too large to expand"));
        }
        self.guard(at, a.mul(b))
    }

    fn expr(&mut self) -> Result<MvPolynomial> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::parse(self.offset(), "expression nested too deeply"));
        }
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    let (_, at) = self.bump();
                    let rhs = self.term()?;
                    acc = self.guard(at, acc.add(&rhs))?;
                }
                Tok::Minus => {
                    let (_, at) = self.bump();
                    let rhs = self.term()?;
                    acc = self.guard(at, acc.sub(&rhs))?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<MvPolynomial> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            let (_, at) = self.bump();
            let rhs = self.unary()?;
            acc = self.product(at, &acc, &rhs)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MvPolynomial> {
        match self.peek() {
            Tok::Minus | Tok::Plus => {
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return Err(Error::parse(self.offset(), "expression nested too deeply"));
                }
                let (tok, _) = self.bump();
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(if tok == Tok::Minus { inner.neg() } else { inner })
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MvPolynomial> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, at) = self.bump();
        let exp = match self.bump() {
            (Tok::Num(digits), pos) => digits
                .parse::<u32>()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| Error::parse(pos, format!("exponent exceeds {MAX_EXPONENT}")))?,
            (_, pos) => return Err(Error::parse(pos, "expected an integer exponent")),
        };
        if let Some(m) = base.as_monomial() {
            // Fast path; also catches exponent overflow without expanding.
            let exps = m
                .exponents()
                .iter()
                .map(|&e| e.checked_mul(exp))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::parse(at, "exponent overflow"))?;
            let c = base.field().pow(base.coeff(m), u64::from(exp));
            return Ok(MvPolynomial::monomial(base.field().clone(), Monomial::new(exps), c));
        }
        let mut acc = MvPolynomial::one(self.field.clone(), self.nvars);
        let mut sq = base;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.product(at, &acc, &sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = self.product(at, &sq, &sq)?;
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<MvPolynomial> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(digits) => {
                let p = self.field.characteristic();
                let c = digits
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + u64::from(d - b'0')) % p);
                Ok(MvPolynomial::constant(self.field.clone(), self.nvars, c))
            }
            Tok::Var(i) => Ok(MvPolynomial::variable(self.field.clone(), self.nvars, i)),
            Tok::Gen => match self.field.generator() {
                Some(g) => Ok(MvPolynomial::constant(self.field.clone(), self.nvars, g)),
                None => Err(Error::parse(
                    at,
                    "the extension generator u is used but no modulus was declared",
                )),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (_, pos) => Err(Error::parse(pos, "expected ')'")),
                }
            }
            Tok::End => Err(Error::parse(at, "unexpected end of input")),
            other => Err(Error::parse(at, format!("unexpected token {other:?}"))),
        }
    }
}

fn run_parser(
    text: &str,
    field: &Arc<FiniteField>,
    nvars: Option<usize>,
    mode: Mode,
) -> Result<MvPolynomial> {
    let tokens = tokenize(text, mode)?;
    let used = tokens
        .iter()
        .filter_map(|(t, _)| match t {
            Tok::Var(i) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1);
    let nvars = match nvars {
        Some(n) if n < used => {
            return Err(Error::parse(
                0,
                format!("expression uses {used} variables but the ring has {n}"),
            ))
        }
        Some(0) => return Err(Error::parse(0, "the ring needs at least one variable")),
        Some(n) => n,
        None => used,
    };
    if nvars > MAX_VARS {
        return Err(Error::parse(0, format!("at most {MAX_VARS} variables are supported")));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        field,
        nvars,
        depth: 0,
    };
    let poly = parser.expr()?;
    match parser.peek() {
        Tok::End => Ok(poly),
        _ => Err(Error::parse(parser.offset(), "unexpected trailing input")),
    }
}

/// Parses `text` into a polynomial over `field`.
///
/// The ambient dimension is `nvars` when given (it must cover every variable
/// used), otherwise the highest variable index that occurs.
pub fn parse_polynomial(
    text: &str,
    field: &Arc<FiniteField>,
    nvars: Option<usize>,
) -> Result<MvPolynomial> {
    run_parser(text, field, nvars, Mode::Multivariate)
}

/// Parses a univariate polynomial in `var` over `F_p` into ascending
/// coefficients without trailing zeros.
pub fn parse_univariate(text: &str, p: u64, var: char) -> Result<Vec<u64>> {
    let field = FiniteField::prime(p)?;
    let poly = run_parser(text, &field, Some(1), Mode::Univariate(var))?;
    let degree = poly.total_degree().unwrap_or(0) as usize;
    if degree > MAX_EXPONENT as usize {
        return Err(Error::parse(0, "univariate degree too large"));
    }
    let mut coeffs = vec![0u64; degree + 1];
    for (m, c) in poly.terms() {
        coeffs[m.exponents()[0] as usize] = c;
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Ok(coeffs)
}
