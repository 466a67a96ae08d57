use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Number(f64),
    Sqrt,
    Slash,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
    /// Digits between `|` and `>`.
    Ket(String),
    Imaginary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Byte offset of the first character.
    pub position: usize,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Number(_) => "number".into(),
            TokenKind::Sqrt => "'sqrt'".into(),
            TokenKind::Slash => "'/'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::Ket(d) => format!("ket |{d}>"),
            TokenKind::Imaginary => "'i'".into(),
        }
    }
}

fn err(kind: ParseErrorKind, offset: usize) -> ParseError {
    ParseError { kind, offset }
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();

    while let Some(&(start, ch)) = chars.peek() {
        let single = match ch {
            '/' => Some(TokenKind::Slash),
            '*' => Some(TokenKind::Star),
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '√' => Some(TokenKind::Sqrt),
            _ => None,
        };
        if let Some(kind) = single {
            chars.next();
            let end = start + ch.len_utf8();
            tokens.push(Token { kind, text: text[start..end].to_string(), position: start });
            continue;
        }

        if ch.is_whitespace() {
            chars.next();
        } else if ch.is_ascii_digit() || ch == '.' {
            let end = scan_number(text, start);
            let literal = &text[start..end];
            let value: f64 = literal
                .parse()
                .map_err(|_| err(ParseErrorKind::InvalidNumber(literal.to_string()), start))?;
            while chars.peek().is_some_and(|&(i, _)| i < end) {
                chars.next();
            }
            tokens.push(Token {
                kind: TokenKind::Number(value),
                text: literal.to_string(),
                position: start,
            });
        } else if ch == '|' {
            chars.next();
            let mut digits = String::new();
            let mut closed = None;
            for (i, c) in chars.by_ref() {
                match c {
                    '>' | '⟩' => {
                        closed = Some(i + c.len_utf8());
                        break;
                    }
                    '0'..='9' => digits.push(c),
                    _ => return Err(err(ParseErrorKind::InvalidKetDigit(c), i)),
                }
            }
            let end = closed.ok_or_else(|| err(ParseErrorKind::UnterminatedKet, start))?;
            if digits.is_empty() {
                return Err(err(ParseErrorKind::EmptyKet, start));
            }
            tokens.push(Token {
                kind: TokenKind::Ket(digits),
                text: text[start..end].to_string(),
                position: start,
            });
        } else if ch.is_alphabetic() {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !c.is_alphabetic() {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            let word = &text[start..end];
            let kind = match word {
                "sqrt" => TokenKind::Sqrt,
                "i" => TokenKind::Imaginary,
                _ => return Err(err(ParseErrorKind::UnknownWord(word.to_string()), start)),
            };
            tokens.push(Token { kind, text: word.to_string(), position: start });
        } else {
            return Err(err(ParseErrorKind::UnexpectedChar(ch), start));
        }
    }
    Ok(tokens)
}

/// End of the longest `digits [. digits] [e [+-] digits]` prefix at `start`.
fn scan_number(text: &str, start: usize) -> usize {
    let bytes = text.as_bytes();
    let digits_from = |mut i: usize| {
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut end = digits_from(start);
    if end < bytes.len() && bytes[end] == b'.' {
        end = digits_from(end + 1);
    }
    if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
        let mut exp = end + 1;
        if exp < bytes.len() && (bytes[exp] == b'+' || bytes[exp] == b'-') {
            exp += 1;
        }
        let exp_end = digits_from(exp);
        if exp_end > exp {
            end = exp_end;
        }
    }
    end
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ket() {
        let t = tokenize("|01>").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].kind, TokenKind::Ket("01".into()));
    }

    #[test]
    fn ghz_expression_token_count() {
        // ( 1 / sqrt ( 2 ) ) ( |000> + |111> )
        let t = tokenize("(1/sqrt(2))(|000>+|111>)").unwrap();
        assert_eq!(t.len(), 13);
        assert_eq!(t.last().unwrap().kind, TokenKind::RParen);
        assert_eq!(t[9].position, 12);
    }

    #[test]
    fn bad_ket_digit_reports_offset() {
        let e = tokenize("|0a>").unwrap_err();
        assert_eq!(e.offset, 2);
        assert_eq!(e.kind, ParseErrorKind::InvalidKetDigit('a'));
    }

    #[test]
    fn unicode_aliases() {
        let t = tokenize("(1/√2)(|00⟩+|11⟩)").unwrap();
        assert_eq!(t[3].kind, TokenKind::Sqrt);
        assert_eq!(t[7].kind, TokenKind::Ket("00".into()));
        assert_eq!(t[7].text, "|00⟩");
    }

    #[test]
    fn numbers_and_words() {
        let t = tokenize("0.25i 1e-3 2.").unwrap();
        assert_eq!(t[0].kind, TokenKind::Number(0.25));
        assert_eq!(t[1].kind, TokenKind::Imaginary);
        assert_eq!(t[2].kind, TokenKind::Number(1e-3));
        assert_eq!(t[3].kind, TokenKind::Number(2.0));
        assert!(matches!(
            tokenize("2x").unwrap_err().kind,
            ParseErrorKind::UnknownWord(_)
        ));
        assert_eq!(tokenize("|0> & |1>").unwrap_err().offset, 4);
        assert_eq!(tokenize("  |01").unwrap_err().kind, ParseErrorKind::UnterminatedKet);
        assert_eq!(tokenize("|>").unwrap_err().kind, ParseErrorKind::EmptyKet);
    }
}
