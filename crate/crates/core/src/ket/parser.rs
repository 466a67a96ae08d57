//! Recursive descent over the token stream.
//!
//! ```text
//! expr    := sign? term (('+' | '-') term)*
//! term    := scalar* factor
//! factor  := ket | '(' expr ')'
//! scalar  := '(' s_sum ')' '*'? | s_prod '*'?
//! s_sum   := s_prod (('+' | '-') s_prod)*
//! s_prod  := s_unary (('*' | '/') s_unary | 'i')*
//! s_unary := ('+' | '-') s_unary | s_atom
//! s_atom  := number | 'i' | sqrt s_atom | '(' s_sum ')'
//! ```
//!
//! A parenthesized group is read as a scalar only when it contains no kets
//! and is followed by something it can multiply.

use num_complex::Complex64;

use super::lexer::{Token, TokenKind};
use super::{KetExpr, ParseError, ParseErrorKind, Sign};

pub fn parse(tokens: &[Token]) -> Result<KetExpr, ParseError> {
    let end = tokens.last().map_or(0, |t| t.position + t.text.len());
    let mut parser = Parser { tokens, pos: 0, end, arity: None };
    if tokens.is_empty() {
        return Err(ParseError { kind: ParseErrorKind::EmptyInput, offset: 0 });
    }
    let expr = parser.expr()?;
    match parser.peek() {
        None => Ok(expr),
        Some(t) if t.kind == TokenKind::RParen => Err(ParseError {
            kind: ParseErrorKind::UnmatchedParen,
            offset: t.position,
        }),
        Some(t) => Err(parser.unexpected(t)),
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
    /// (length, offset) of the first ket seen.
    arity: Option<(usize, usize)>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&'a TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, token: &Token) -> ParseError {
        ParseError {
            kind: ParseErrorKind::UnexpectedToken(token.kind.describe()),
            offset: token.position,
        }
    }

    fn unexpected_here(&self) -> ParseError {
        match self.peek() {
            Some(t) => self.unexpected(t),
            None => ParseError { kind: ParseErrorKind::UnexpectedEnd, offset: self.end },
        }
    }

    fn expect_rparen(&mut self, open: usize) -> Result<(), ParseError> {
        match self.peek_kind() {
            Some(TokenKind::RParen) => {
                self.pos += 1;
                Ok(())
            }
            None => Err(ParseError { kind: ParseErrorKind::UnmatchedParen, offset: open }),
            Some(_) => Err(self.unexpected_here()),
        }
    }

    fn expr(&mut self) -> Result<KetExpr, ParseError> {
        let mut terms = Vec::new();
        let first_sign = if self.eat(&TokenKind::Minus) {
            Some(Sign::Minus)
        } else if self.eat(&TokenKind::Plus) {
            Some(Sign::Plus)
        } else {
            None
        };
        terms.push((first_sign.unwrap_or(Sign::Plus), self.term()?));
        loop {
            let sign = match self.peek_kind() {
                Some(TokenKind::Plus) => Sign::Plus,
                Some(TokenKind::Minus) => Sign::Minus,
                _ => break,
            };
            self.pos += 1;
            terms.push((sign, self.term()?));
        }
        if terms.len() == 1 && first_sign.is_none() {
            return Ok(terms.pop().expect("one term").1);
        }
        Ok(KetExpr::Sum(terms))
    }

    fn term(&mut self) -> Result<KetExpr, ParseError> {
        let mut scale: Option<Complex64> = None;
        loop {
            let value = match self.peek_kind() {
                Some(TokenKind::LParen) => match self.try_paren_scalar() {
                    Some(v) => v,
                    None => break,
                },
                Some(TokenKind::Number(_) | TokenKind::Imaginary | TokenKind::Sqrt) => {
                    self.scalar_product()?
                }
                _ => break,
            };
            self.eat(&TokenKind::Star);
            scale = Some(scale.map_or(value, |s| s * value));
        }
        let factor = self.factor()?;
        Ok(match scale {
            Some(s) => KetExpr::Scale(s, Box::new(factor)),
            None => factor,
        })
    }

    /// Attempts `'(' s_sum ')'` followed by something it can scale; rewinds
    /// on any failure so the group can be reparsed as a ket expression.
    fn try_paren_scalar(&mut self) -> Option<Complex64> {
        let saved = self.pos;
        let result = (|| {
            let open = self.bump()?.position;
            let v = self.scalar_sum().ok()?;
            self.expect_rparen(open).ok()?;
            match self.peek_kind() {
                Some(
                    TokenKind::Ket(_)
                    | TokenKind::LParen
                    | TokenKind::Star
                    | TokenKind::Number(_)
                    | TokenKind::Imaginary
                    | TokenKind::Sqrt,
                ) => Some(v),
                _ => None,
            }
        })();
        if result.is_none() {
            self.pos = saved;
        }
        result
    }

    fn factor(&mut self) -> Result<KetExpr, ParseError> {
        let token = match self.peek() {
            Some(t) => t,
            None => return Err(self.unexpected_here()),
        };
        match &token.kind {
            TokenKind::Ket(digits) => {
                self.pos += 1;
                match self.arity {
                    None => self.arity = Some((digits.len(), token.position)),
                    Some((n, _)) if n != digits.len() => {
                        return Err(ParseError {
                            kind: ParseErrorKind::Arity { expected: n, found: digits.len() },
                            offset: token.position,
                        })
                    }
                    Some(_) => {}
                }
                Ok(KetExpr::Ket {
                    digits: digits.bytes().map(|b| b - b'0').collect(),
                    offset: token.position,
                })
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_rparen(token.position)?;
                Ok(KetExpr::Group(Box::new(inner)))
            }
            _ => Err(self.unexpected(token)),
        }
    }

    fn scalar_sum(&mut self) -> Result<Complex64, ParseError> {
        let mut acc = self.scalar_product()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                acc += self.scalar_product()?;
            } else if self.eat(&TokenKind::Minus) {
                acc -= self.scalar_product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn scalar_product(&mut self) -> Result<Complex64, ParseError> {
        let mut acc = self.scalar_unary()?;
        loop {
            match self.peek_kind() {
                Some(TokenKind::Star) => {
                    // `2 * |0>` scales the ket; leave the star for `term`.
                    if matches!(
                        self.tokens.get(self.pos + 1).map(|t| &t.kind),
                        Some(TokenKind::Ket(_) | TokenKind::LParen)
                    ) {
                        return Ok(acc);
                    }
                    self.pos += 1;
                    acc *= self.scalar_unary()?;
                }
                Some(TokenKind::Slash) => {
                    let at = self.bump().expect("peeked").position;
                    let divisor = self.scalar_unary()?;
                    if divisor.norm() == 0.0 {
                        return Err(ParseError { kind: ParseErrorKind::DivisionByZero, offset: at });
                    }
                    acc /= divisor;
                }
                Some(TokenKind::Imaginary) => {
                    self.pos += 1;
                    acc *= Complex64::i();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn scalar_unary(&mut self) -> Result<Complex64, ParseError> {
        if self.eat(&TokenKind::Minus) {
            return Ok(-self.scalar_unary()?);
        }
        if self.eat(&TokenKind::Plus) {
            return self.scalar_unary();
        }
        self.scalar_atom()
    }

    fn scalar_atom(&mut self) -> Result<Complex64, ParseError> {
        let token = match self.peek() {
            Some(t) => t,
            None => return Err(self.unexpected_here()),
        };
        match token.kind {
            TokenKind::Number(v) => {
                self.pos += 1;
                Ok(Complex64::new(v, 0.0))
            }
            TokenKind::Imaginary => {
                self.pos += 1;
                Ok(Complex64::i())
            }
            TokenKind::Sqrt => {
                self.pos += 1;
                Ok(self.scalar_atom()?.sqrt())
            }
            TokenKind::LParen => {
                self.pos += 1;
                let v = self.scalar_sum()?;
                self.expect_rparen(token.position)?;
                Ok(v)
            }
            _ => Err(self.unexpected(token)),
        }
    }
}

/// Parses a standalone scalar such as `1/sqrt(2)` or `0.5-0.5i`.
pub fn parse_scalar(tokens: &[Token]) -> Result<Complex64, ParseError> {
    let end = tokens.last().map_or(0, |t| t.position + t.text.len());
    let mut parser = Parser { tokens, pos: 0, end, arity: None };
    if tokens.is_empty() {
        return Err(ParseError { kind: ParseErrorKind::EmptyInput, offset: 0 });
    }
    let v = parser.scalar_sum()?;
    match parser.peek() {
        None => Ok(v),
        Some(t) => Err(parser.unexpected(t)),
    }
}
