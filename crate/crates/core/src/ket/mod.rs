//! Dirac ket expressions such as `(1/sqrt(2))(|000> + |111>)`.
//!
//! ASCII `sqrt(k)` and `|digits>` are canonical; `√` and `⟩` are accepted as
//! aliases. Scalars are evaluated to double precision as they are parsed.

mod lexer;
mod parser;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::state::{offset_of, PureState};

pub use lexer::{tokenize, Token, TokenKind};

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnknownWord(String),
    InvalidNumber(String),
    InvalidKetDigit(char),
    UnterminatedKet,
    EmptyKet,
    EmptyInput,
    UnexpectedToken(String),
    UnexpectedEnd,
    UnmatchedParen,
    DivisionByZero,
    Arity { expected: usize, found: usize },
    DigitOutOfRange { digit: usize, slot: usize, dim: usize },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnknownWord(w) => write!(f, "unknown word {w:?}"),
            ParseErrorKind::InvalidNumber(n) => write!(f, "invalid number {n:?}"),
            ParseErrorKind::InvalidKetDigit(c) => write!(f, "invalid ket digit {c:?}"),
            ParseErrorKind::UnterminatedKet => write!(f, "unterminated ket"),
            ParseErrorKind::EmptyKet => write!(f, "empty ket"),
            ParseErrorKind::EmptyInput => write!(f, "empty expression"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected {t}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnmatchedParen => write!(f, "mismatched parenthesis"),
            ParseErrorKind::DivisionByZero => write!(f, "division by zero"),
            ParseErrorKind::Arity { expected, found } => {
                write!(f, "ket has {found} sites, expected {expected}")
            }
            ParseErrorKind::DigitOutOfRange { digit, slot, dim } => {
                write!(f, "digit {digit} in slot {slot} exceeds dimension {dim}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source text.
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub enum KetExpr {
    Ket { digits: Vec<u8>, offset: usize },
    Scale(Complex64, Box<KetExpr>),
    Sum(Vec<(Sign, KetExpr)>),
    Group(Box<KetExpr>),
}

pub fn parse(tokens: &[Token]) -> std::result::Result<KetExpr, ParseError> {
    parser::parse(tokens)
}

pub fn parse_expr(text: &str) -> std::result::Result<KetExpr, ParseError> {
    parse(&tokenize(text)?)
}

pub fn parse_scalar(text: &str) -> std::result::Result<Complex64, ParseError> {
    parser::parse_scalar(&tokenize(text)?)
}

impl KetExpr {
    fn for_each_ket(&self, f: &mut impl FnMut(&[u8], usize)) {
        match self {
            KetExpr::Ket { digits, offset } => f(digits, *offset),
            KetExpr::Scale(_, e) | KetExpr::Group(e) => e.for_each_ket(f),
            KetExpr::Sum(terms) => terms.iter().for_each(|(_, e)| e.for_each_ket(f)),
        }
    }

    fn accumulate(&self, weight: Complex64, dims: &[usize], amps: &mut [Complex64]) {
        match self {
            KetExpr::Ket { digits, .. } => {
                let digits: Vec<usize> = digits.iter().map(|&d| d as usize).collect();
                amps[offset_of(dims, &digits)] += weight;
            }
            KetExpr::Scale(s, e) => e.accumulate(weight * s, dims, amps),
            KetExpr::Group(e) => e.accumulate(weight, dims, amps),
            KetExpr::Sum(terms) => {
                for (sign, e) in terms {
                    let w = match sign {
                        Sign::Plus => weight,
                        Sign::Minus => -weight,
                    };
                    e.accumulate(w, dims, amps);
                }
            }
        }
    }

    /// Number of sites shared by every ket in the tree.
    pub fn arity(&self) -> usize {
        let mut n = 0;
        self.for_each_ket(&mut |d, _| n = d.len());
        n
    }
}

/// Expands `expr` into a dense state. Without `dims`, slot `k` gets dimension
/// `max(2, 1 + largest digit in slot k)`. The result is not normalized.
pub fn evaluate(expr: &KetExpr, dims: Option<&[usize]>) -> Result<PureState> {
    let arity = expr.arity();
    let dims: Vec<usize> = match dims {
        Some(d) => {
            if d.len() != arity {
                return Err(Error::Dimension(format!(
                    "expression has {arity} sites but {} dimensions were given",
                    d.len()
                )));
            }
            let mut bad = None;
            expr.for_each_ket(&mut |digits, offset| {
                if bad.is_some() {
                    return;
                }
                for (slot, (&digit, &dim)) in digits.iter().zip(d).enumerate() {
                    if digit as usize >= dim {
                        bad = Some(ParseError {
                            kind: ParseErrorKind::DigitOutOfRange {
                                digit: digit as usize,
                                slot: slot + 1,
                                dim,
                            },
                            offset: offset + 1 + slot,
                        });
                        return;
                    }
                }
            });
            if let Some(e) = bad {
                return Err(e.into());
            }
            d.to_vec()
        }
        None => {
            let mut dims = vec![2usize; arity];
            expr.for_each_ket(&mut |digits, _| {
                for (slot, &digit) in dims.iter_mut().zip(digits) {
                    *slot = (*slot).max(digit as usize + 1);
                }
            });
            dims
        }
    };
    let total = crate::state::check_dims(&dims)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); total];
    expr.accumulate(Complex64::new(1.0, 0.0), &dims, &mut amps);
    PureState::new(dims, amps)
}

/// Tokenizes, parses and evaluates in one step.
pub fn parse_state(text: &str, dims: Option<&[usize]>) -> Result<PureState> {
    let expr = parse_expr(text)?;
    evaluate(&expr, dims)
}

/// Strips `#` comments and blank lines, returning `(line number, expression)`.
pub fn expression_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then_some((i + 1, body))
        })
        .collect()
}

/// Prints the basis expansion, e.g. `(0.5+0i)|00> + (-0.5+0i)|11>`. Digits
/// are written one per site, so dimensions above 10 are not representable.
pub fn format_expansion(state: &PureState) -> String {
    let dims = state.dims();
    let mut digits = vec![0usize; dims.len()];
    let ket = |digits: &[usize]| -> String {
        digits.iter().map(|d| char::from_digit(*d as u32, 36).unwrap_or('?')).collect()
    };
    let terms: Vec<String> = state
        .amps()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
        .map(|(offset, a)| {
            crate::state::digits_of(dims, offset, &mut digits);
            format!("({}{:+}i)|{}>", a.re, a.im, ket(&digits))
        })
        .collect();
    if terms.is_empty() {
        return format!("0|{}>", "0".repeat(dims.len()));
    }
    terms.join(" + ")
}
