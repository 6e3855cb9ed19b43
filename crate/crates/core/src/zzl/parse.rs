use num_bigint::BigInt;

use super::scan::{Scanner, Tok};
use super::{DiagCode, Diagnostic, Span, Spanned};
use crate::linalg::Rational;

#[derive(Debug, Clone)]
pub struct RawMatrix {
    pub rows: Vec<Vec<Rational>>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum RawValue {
    Number { value: Rational, nat: Option<BigInt> },
    Name(String),
    Matrix(RawMatrix),
    Label(String),
}

#[derive(Debug, Clone)]
pub struct Field {
    pub key: Spanned<String>,
    pub value: Spanned<RawValue>,
}

#[derive(Debug, Clone)]
pub enum RawClass {
    Scalar(Rational),
    Vector(RawMatrix),
    Block(RawMatrix),
}

#[derive(Debug, Clone)]
pub enum RawItem {
    Space {
        name: Spanned<String>,
        dim: Spanned<RawValue>,
    },
    Map {
        name: Spanned<String>,
        from: Spanned<String>,
        to: Spanned<String>,
        matrix: RawMatrix,
    },
    ZigZag {
        name: Spanned<String>,
        fields: Vec<Field>,
    },
    Extension {
        name: Spanned<String>,
        sub: Spanned<String>,
        quot: Spanned<String>,
        class: Spanned<RawClass>,
    },
    Nodes {
        entries: Vec<(Spanned<String>, Option<Spanned<String>>)>,
    },
    Gluing {
        name: Spanned<String>,
        fields: Vec<Field>,
    },
}

#[derive(Debug, Clone)]
pub struct Item {
    pub raw: RawItem,
    pub span: Span,
}

pub const ZIGZAG_KEYS: [&str; 8] = ["open", "eminus", "ezero", "A", "B", "alpha", "beta", "gamma"];
const GLUING_REQUIRED: [&str; 3] = ["psi", "u", "v"];
const GLUING_OPTIONAL: [&str; 2] = ["N", "ranges"];

struct Parser<'a> {
    scan: Scanner<'a>,
}

fn syntax(span: Span, message: String) -> Diagnostic {
    Diagnostic::at(DiagCode::Syntax, span, message)
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Result<(Tok, Span), Diagnostic> {
        self.scan.next()
    }

    fn peek_tok(&mut self) -> Result<Tok, Diagnostic> {
        Ok(self.scan.peek()?.0.clone())
    }

    fn expect(&mut self, want: Tok) -> Result<Span, Diagnostic> {
        let (tok, span) = self.next()?;
        if tok == want {
            Ok(span)
        } else {
            Err(syntax(span, format!("expected {}, found {}", want.describe(), tok.describe())))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Span, Diagnostic> {
        let (tok, span) = self.next()?;
        match tok {
            Tok::Ident(s) if s == kw => Ok(span),
            other => Err(syntax(span, format!("expected `{kw}`, found {}", other.describe()))),
        }
    }

    fn name(&mut self) -> Result<Spanned<String>, Diagnostic> {
        let (tok, span) = self.next()?;
        match tok {
            Tok::Ident(value) => Ok(Spanned { value, span }),
            other => Err(syntax(span, format!("expected a name, found {}", other.describe()))),
        }
    }

    fn rational(&mut self) -> Result<(Rational, Option<BigInt>, Span), Diagnostic> {
        let (tok, span) = self.next()?;
        match tok {
            Tok::Number { value, nat } => Ok((value, nat, span)),
            other => Err(syntax(span, format!("expected a rational, found {}", other.describe()))),
        }
    }

    /// Parses after the opening `[` has been peeked.
    fn matrix(&mut self) -> Result<RawMatrix, Diagnostic> {
        let open = self.expect(Tok::LBracket)?;
        let mut rows = Vec::new();
        if self.peek_tok()? == Tok::RBracket {
            let close = self.next()?.1;
            return Ok(RawMatrix {
                rows,
                span: open.join(close),
            });
        }
        let mut row = Vec::new();
        loop {
            let (value, _, _) = self.rational()?;
            row.push(value);
            let (tok, span) = self.next()?;
            match tok {
                Tok::Comma => {}
                Tok::Semi => rows.push(std::mem::take(&mut row)),
                Tok::RBracket => {
                    rows.push(row);
                    let span = open.join(span);
                    let width = rows[0].len();
                    if let Some(bad) = rows.iter().position(|r| r.len() != width) {
                        return Err(Diagnostic::at(
                            DiagCode::DimensionMismatch,
                            span,
                            format!("matrix row {} has {} entries, row 1 has {width}", bad + 1, rows[bad].len()),
                        ));
                    }
                    return Ok(RawMatrix { rows, span });
                }
                other => {
                    return Err(syntax(
                        span,
                        format!("expected `,`, `;` or `]` in matrix, found {}", other.describe()),
                    ))
                }
            }
        }
    }

    fn value(&mut self) -> Result<Spanned<RawValue>, Diagnostic> {
        let (tok, span) = self.scan.peek()?.clone();
        match tok {
            Tok::LBracket => {
                let m = self.matrix()?;
                Ok(Spanned {
                    span: m.span,
                    value: RawValue::Matrix(m),
                })
            }
            Tok::Number { value, nat } => {
                self.next()?;
                Ok(Spanned {
                    value: RawValue::Number { value, nat },
                    span,
                })
            }
            Tok::Ident(s) => {
                self.next()?;
                Ok(Spanned {
                    value: RawValue::Name(s),
                    span,
                })
            }
            other => Err(syntax(
                span,
                format!("expected a number, name or matrix, found {}", other.describe()),
            )),
        }
    }

    /// `{ key = value, ... }`; returns the fields and the closing span.
    fn fields(&mut self, allowed: &[&str], required: &[&str], what: &str) -> Result<(Vec<Field>, Span), Diagnostic> {
        let open = self.expect(Tok::LBrace)?;
        let mut fields: Vec<Field> = Vec::new();
        if self.peek_tok()? != Tok::RBrace {
            loop {
                let key = self.name()?;
                if !allowed.contains(&key.value.as_str()) {
                    return Err(syntax(
                        key.span,
                        format!("unknown {what} key `{}`; expected one of {}", key.value, allowed.join(", ")),
                    ));
                }
                if fields.iter().any(|f| f.key.value == key.value) {
                    return Err(syntax(key.span, format!("duplicate key `{}`", key.value)));
                }
                self.expect(Tok::Eq)?;
                let value = if key.value == "open" {
                    let (label, span) = self.scan.raw_label()?;
                    Spanned {
                        value: RawValue::Label(label),
                        span,
                    }
                } else {
                    self.value()?
                };
                fields.push(Field { key, value });
                let (tok, span) = self.next()?;
                match tok {
                    Tok::Comma => {}
                    Tok::RBrace => return self.finish_fields(fields, open.join(span), required, what),
                    other => {
                        return Err(syntax(span, format!("expected `,` or `}}`, found {}", other.describe())))
                    }
                }
            }
        }
        let close = self.next()?.1;
        self.finish_fields(fields, open.join(close), required, what)
    }

    fn finish_fields(
        &self,
        fields: Vec<Field>,
        span: Span,
        required: &[&str],
        what: &str,
    ) -> Result<(Vec<Field>, Span), Diagnostic> {
        let missing: Vec<&str> = required
            .iter()
            .copied()
            .filter(|k| !fields.iter().any(|f| f.key.value == *k))
            .collect();
        if !missing.is_empty() {
            return Err(syntax(span, format!("{what} is missing keys: {}", missing.join(", "))));
        }
        Ok((fields, span))
    }

    fn item(&mut self, kw: String, start: Span) -> Result<Item, Diagnostic> {
        let raw = match kw.as_str() {
            "space" => {
                let name = self.name()?;
                self.keyword("dim")?;
                let dim = self.value()?;
                RawItem::Space { name, dim }
            }
            "map" => {
                let name = self.name()?;
                self.expect(Tok::Colon)?;
                let from = self.name()?;
                self.expect(Tok::Arrow)?;
                let to = self.name()?;
                self.expect(Tok::Eq)?;
                let matrix = self.matrix()?;
                RawItem::Map { name, from, to, matrix }
            }
            "zigzag" => {
                let name = self.name()?;
                let (fields, _) = self.fields(&ZIGZAG_KEYS, &ZIGZAG_KEYS, "zigzag")?;
                RawItem::ZigZag { name, fields }
            }
            "extension" => {
                let name = self.name()?;
                self.expect(Tok::Eq)?;
                self.keyword("ext")?;
                self.expect(Tok::LParen)?;
                let sub = self.name()?;
                self.expect(Tok::Comma)?;
                let quot = self.name()?;
                self.expect(Tok::RParen)?;
                let (tok, span) = self.next()?;
                let class = match tok {
                    Tok::Ident(k) if k == "class" => {
                        if self.peek_tok()? == Tok::LBracket {
                            let m = self.matrix()?;
                            Spanned {
                                span: span.join(m.span),
                                value: RawClass::Vector(m),
                            }
                        } else {
                            let (value, _, vspan) = self.rational()?;
                            Spanned {
                                span: span.join(vspan),
                                value: RawClass::Scalar(value),
                            }
                        }
                    }
                    Tok::Ident(k) if k == "u" => {
                        self.expect(Tok::Eq)?;
                        let m = self.matrix()?;
                        Spanned {
                            span: span.join(m.span),
                            value: RawClass::Block(m),
                        }
                    }
                    other => {
                        return Err(syntax(span, format!("expected `class` or `u`, found {}", other.describe())))
                    }
                };
                RawItem::Extension { name, sub, quot, class }
            }
            "nodes" => {
                self.expect(Tok::LBrace)?;
                let mut entries = Vec::new();
                loop {
                    let label = self.name()?;
                    let local = if self.peek_tok()? == Tok::Eq {
                        self.next()?;
                        Some(self.name()?)
                    } else {
                        None
                    };
                    entries.push((label, local));
                    let (tok, span) = self.next()?;
                    match tok {
                        Tok::Comma => {}
                        Tok::RBrace => break,
                        other => {
                            return Err(syntax(span, format!("expected `,` or `}}`, found {}", other.describe())))
                        }
                    }
                }
                RawItem::Nodes { entries }
            }
            "gluing" => {
                let name = self.name()?;
                let allowed: Vec<&str> = GLUING_REQUIRED.iter().chain(&GLUING_OPTIONAL).copied().collect();
                let (fields, _) = self.fields(&allowed, &GLUING_REQUIRED, "gluing")?;
                RawItem::Gluing { name, fields }
            }
            other => {
                return Err(syntax(
                    start,
                    format!("unknown declaration `{other}`; expected space, map, zigzag, extension, nodes or gluing"),
                ))
            }
        };
        Ok(Item {
            raw,
            span: start.join(self.last_end(start)),
        })
    }

    fn last_end(&self, start: Span) -> Span {
        Span::new(start.start, self.scan.offset())
    }
}

pub fn parse_items(src: &str) -> Result<Vec<Item>, Diagnostic> {
    let mut p = Parser { scan: Scanner::new(src) };
    let mut items = Vec::new();
    loop {
        let (tok, span) = p.next()?;
        match tok {
            Tok::Eof => return Ok(items),
            Tok::Ident(kw) => items.push(p.item(kw, span)?),
            other => {
                return Err(syntax(
                    span,
                    format!("expected a declaration, found {}", other.describe()),
                ))
            }
        }
    }
}
