use num_bigint::BigInt;

use super::{DiagCode, Diagnostic, Span};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// A rational literal; `nat` is set when it was written as a bare
    /// natural number.
    Number { value: Rational, nat: Option<BigInt> },
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Eq,
    Arrow,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number { value, .. } => format!("number `{value}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub struct Scanner<'a> {
    src: &'a str,
    pos: usize,
    peeked: Option<(Tok, Span)>,
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '\u{2212}'
}

impl<'a> Scanner<'a> {
    pub fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0, peeked: None }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn current(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.current()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.current() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.current() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn lex_error(&self, code: DiagCode, start: usize, message: String) -> Diagnostic {
        Diagnostic::at(code, Span::new(start, self.pos.max(start + 1).min(self.src.len().max(start))), message)
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.current().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self, start: usize) -> Result<Tok, Diagnostic> {
        let negative = self.current().is_some_and(is_minus);
        if negative {
            self.bump();
            if !self.current().is_some_and(|c| c.is_ascii_digit()) {
                return Err(self.lex_error(
                    DiagCode::BadRational,
                    start,
                    "bad rational literal: `-` must be followed by digits".into(),
                ));
            }
        }
        let numer: BigInt = self.digits().parse().expect("nonempty digit run");
        let mut denom: Option<BigInt> = None;
        if self.current() == Some('/') {
            self.bump();
            let d = self.digits();
            if d.is_empty() {
                return Err(self.lex_error(
                    DiagCode::BadRational,
                    start,
                    "bad rational literal: `/` must be followed by a natural number".into(),
                ));
            }
            let d: BigInt = d.parse().expect("nonempty digit run");
            if d == BigInt::from(0) {
                return Err(self.lex_error(
                    DiagCode::BadRational,
                    start,
                    "bad rational literal: zero denominator".into(),
                ));
            }
            denom = Some(d);
        }
        if self.current().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            self.bump();
            return Err(self.lex_error(
                DiagCode::BadRational,
                start,
                "bad rational literal: trailing characters".into(),
            ));
        }
        let nat = (!negative && denom.is_none()).then(|| numer.clone());
        let signed = if negative { -numer } else { numer };
        let value = Rational::from_bigints(signed, denom.unwrap_or_else(|| BigInt::from(1)))
            .expect("denominator checked nonzero");
        Ok(Tok::Number { value, nat })
    }

    fn lex(&mut self) -> Result<(Tok, Span), Diagnostic> {
        self.skip_trivia();
        let start = self.pos;
        let c = match self.current() {
            None => return Ok((Tok::Eof, Span::new(start, start))),
            Some(c) => c,
        };
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while self.current().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                self.bump();
            }
            Tok::Ident(self.src[start..self.pos].to_string())
        } else if c.is_ascii_digit() || is_minus(c) {
            if c == '-' && self.rest().starts_with("->") {
                self.pos += 2;
                Tok::Arrow
            } else {
                self.number(start)?
            }
        } else {
            self.bump();
            match c {
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                ':' => Tok::Colon,
                '=' => Tok::Eq,
                other => {
                    return Err(self.lex_error(
                        DiagCode::UnexpectedChar,
                        start,
                        format!("unexpected character {other:?}"),
                    ))
                }
            }
        };
        Ok((tok, Span::new(start, self.pos)))
    }

    pub fn peek(&mut self) -> Result<&(Tok, Span), Diagnostic> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    pub fn next(&mut self) -> Result<(Tok, Span), Diagnostic> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lex(),
        }
    }

    /// End of the last consumed token.
    pub fn offset(&self) -> usize {
        match &self.peeked {
            Some((_, span)) => span.start,
            None => self.pos,
        }
    }

    /// Raw text up to the next `,`, `}` or end of line, trimmed. Used for
    /// open labels, which may contain brackets.
    pub fn raw_label(&mut self) -> Result<(String, Span), Diagnostic> {
        assert!(self.peeked.is_none(), "raw read after a peeked token");
        while self.current().is_some_and(|c| c == ' ' || c == '\t') {
            self.bump();
        }
        let start = self.pos;
        while let Some(c) = self.current() {
            if c == ',' || c == '}' || c == '\n' || c == '\r' || c == '#' {
                break;
            }
            self.bump();
        }
        let text = self.src[start..self.pos].trim_end();
        let span = Span::new(start, start + text.len());
        if text.is_empty() {
            return Err(Diagnostic::at(DiagCode::Syntax, Span::new(start, start), "expected an open label".into()));
        }
        Ok((text.to_string(), span))
    }
}
