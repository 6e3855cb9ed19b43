//! The `.zzl` input language: spaces, maps, zig-zags, extensions, node sets
//! and gluing data.
//!
//! ```text
//! space V dim 2
//! map f : V -> V = [0, 1; 0, 0]
//! zigzag sky { open = 0, eminus = 0, ezero = 0, A = 1, B = 1, alpha = [], beta = [1], gamma = [] }
//! extension P = ext(ic, sky) class 1
//! nodes { p1, p2 }
//! gluing G { psi = 2, u = [1, 0; 0, 1], v = [0, 0; 0, 0] }
//! ```

mod parse;
mod resolve;
mod scan;
mod serialize;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::assembly::{FiniteNodeDatum, GluingQuadruple};
use crate::extension::ExtensionPresentation;
use crate::linalg::{QMatrix, Rational};
use crate::zigzag::ZigZag;

pub use serialize::{matrix_json, matrix_literal, serialize, zigzag_json};

/// Largest dimension a declaration may name.
pub const MAX_DIM: usize = 512;

/// Label of the bulk vertex of the node set.
pub const BULK_LABEL: &str = "bulk";

/// Byte range in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Category {
    Lexical,
    Syntactic,
    Semantic,
    Validation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagCode {
    BadRational,
    UnexpectedChar,
    InvalidEncoding,
    Syntax,
    UnresolvedName,
    DimensionMismatch,
    DuplicateName,
    InvalidValue,
    Validation,
}

impl DiagCode {
    pub fn code(self) -> &'static str {
        match self {
            DiagCode::BadRational => "E101",
            DiagCode::UnexpectedChar => "E102",
            DiagCode::InvalidEncoding => "E103",
            DiagCode::Syntax => "E200",
            DiagCode::UnresolvedName => "E301",
            DiagCode::DimensionMismatch => "E302",
            DiagCode::DuplicateName => "E303",
            DiagCode::InvalidValue => "E304",
            DiagCode::Validation => "E401",
        }
    }

    pub fn category(self) -> Category {
        match self {
            DiagCode::BadRational | DiagCode::UnexpectedChar | DiagCode::InvalidEncoding => Category::Lexical,
            DiagCode::Syntax => Category::Syntactic,
            DiagCode::UnresolvedName
            | DiagCode::DimensionMismatch
            | DiagCode::DuplicateName
            | DiagCode::InvalidValue => Category::Semantic,
            DiagCode::Validation => Category::Validation,
        }
    }

    pub fn is_lexical(self) -> bool {
        self.category() == Category::Lexical
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagCode,
    pub message: String,
    pub span: Span,
    /// 1-based; filled in by [`parse`].
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
}

impl Diagnostic {
    pub(crate) fn at(code: DiagCode, span: Span, message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message,
            span,
            line: 0,
            column: 0,
        }
    }

    fn locate(&mut self, src: &str) {
        let (line, column) = line_column(src, self.span.start);
        self.line = line;
        self.column = column;
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "severity": self.severity,
            "code": self.code.code(),
            "message": self.message,
            "line": self.line,
            "column": self.column,
        })
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}[{}]: {}", self.line, self.column, self.code.code(), self.message)
    }
}

/// 1-based line and character column of a byte offset.
pub fn line_column(src: &str, offset: usize) -> (usize, usize) {
    let mut offset = offset.min(src.len());
    while !src.is_char_boundary(offset) {
        offset -= 1;
    }
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}

/// A declaration value with the span it was read from. Equality ignores the
/// span.
#[derive(Debug, Clone, Serialize)]
pub struct Spanned<T> {
    pub value: T,
    #[serde(skip)]
    pub span: Span,
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapDecl {
    pub from: String,
    pub to: String,
    pub matrix: QMatrix,
}

/// The class as written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassSpec {
    Scalar(Rational),
    Vector(Vec<Rational>),
    Block(QMatrix),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionDecl {
    pub sub: String,
    pub quot: String,
    pub class: ClassSpec,
    #[serde(skip)]
    pub presentation: ExtensionPresentation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeEntry {
    pub label: String,
    /// Extension used as the local datum; the standard ordinary double
    /// point datum with class 1 when absent.
    pub local: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodesDecl {
    pub entries: Vec<NodeEntry>,
    #[serde(skip)]
    pub datum: FiniteNodeDatum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingDecl {
    pub quadruple: GluingQuadruple,
}

/// A resolved document. Each kind has its own namespace; node order is
/// preserved.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Document {
    pub spaces: BTreeMap<String, Spanned<usize>>,
    pub maps: BTreeMap<String, Spanned<MapDecl>>,
    pub zigzags: BTreeMap<String, Spanned<ZigZag>>,
    pub extensions: BTreeMap<String, Spanned<ExtensionDecl>>,
    pub nodes: Option<Spanned<NodesDecl>>,
    pub gluings: BTreeMap<String, Spanned<GluingDecl>>,
}

impl Document {
    pub fn is_empty(&self) -> bool {
        self.item_count() == 0
    }

    pub fn item_count(&self) -> usize {
        self.spaces.len()
            + self.maps.len()
            + self.zigzags.len()
            + self.extensions.len()
            + usize::from(self.nodes.is_some())
            + self.gluings.len()
    }

    pub fn zigzag(&self, name: &str) -> Option<&ZigZag> {
        self.zigzags.get(name).map(|s| &s.value)
    }

    pub fn map(&self, name: &str) -> Option<&QMatrix> {
        self.maps.get(name).map(|s| &s.value.matrix)
    }

    pub fn extension(&self, name: &str) -> Option<&ExtensionPresentation> {
        self.extensions.get(name).map(|s| &s.value.presentation)
    }

    pub fn gluing(&self, name: &str) -> Option<&GluingQuadruple> {
        self.gluings.get(name).map(|s| &s.value.quadruple)
    }

    pub fn node_datum(&self) -> Option<&FiniteNodeDatum> {
        self.nodes.as_ref().map(|n| &n.value.datum)
    }

    /// Canonical JSON with sorted keys. Matrices are rows of rational
    /// strings.
    pub fn to_json_value(&self) -> serde_json::Value {
        serialize::to_json(self)
    }
}

/// Whether semantic validation (exactness, gluing checks) runs after
/// resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    pub validate: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { validate: true }
    }
}

/// Parses and resolves `text`; on success every zig-zag is exact and every
/// gluing quadruple passes its checks.
pub fn parse(text: &str) -> Result<Document, Vec<Diagnostic>> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, options: ParseOptions) -> Result<Document, Vec<Diagnostic>> {
    let result = parse::parse_items(text)
        .map_err(|d| vec![d])
        .and_then(|items| resolve::resolve(items, options));
    result.map_err(|mut diags| {
        for d in &mut diags {
            d.locate(text);
        }
        diags.sort_by_key(|d| d.span.start);
        diags
    })
}

/// Byte input; invalid UTF-8 is reported at the first offending byte.
pub fn parse_bytes(bytes: &[u8], options: ParseOptions) -> Result<Document, Vec<Diagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_with(text, options),
        Err(e) => {
            let valid = e.valid_up_to();
            let prefix = std::str::from_utf8(&bytes[..valid]).expect("valid prefix");
            let mut d = Diagnostic::at(
                DiagCode::InvalidEncoding,
                Span::new(valid, valid + 1),
                format!("invalid UTF-8 at byte {valid}"),
            );
            d.locate(prefix);
            Err(vec![d])
        }
    }
}
