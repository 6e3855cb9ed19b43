//! Name resolution and shape checking, in kind order: spaces, maps,
//! zig-zags, extensions, nodes, gluing. Declarations may refer forward.

use std::collections::BTreeSet;
use std::ops::Range;

use num_traits::ToPrimitive;

use super::parse::{Field, Item, RawClass, RawItem, RawMatrix, RawValue};
use super::{
    ClassSpec, DiagCode, Diagnostic, Document, ExtensionDecl, GluingDecl, MapDecl, NodeEntry, NodesDecl,
    ParseOptions, Span, Spanned, BULK_LABEL, MAX_DIM,
};
use crate::assembly::{assemble, verify_gluing, GluingQuadruple, NodeDatum};
use crate::extension::{make_extension, ClassInput, ExtensionError};
use crate::linalg::{QMatrix, Rational};
use crate::tables::OPEN_LABEL;
use crate::zigzag::{Position, ZigZag, ZigZagError};

struct Resolver {
    options: ParseOptions,
    diags: Vec<Diagnostic>,
    doc: Document,
    /// Declarations that failed to resolve; references to them are not
    /// reported again.
    broken: BTreeSet<(&'static str, String)>,
}

fn render_shape(rows: usize, cols: usize) -> String {
    format!("{rows}x{cols}")
}

fn field<'f>(fields: &'f [Field], key: &str) -> Option<&'f Field> {
    fields.iter().find(|f| f.key.value == key)
}

fn literal(m: &RawMatrix) -> QMatrix {
    let cols = m.rows.first().map_or(0, Vec::len);
    QMatrix::from_rows(m.rows.clone(), cols).expect("rows checked rectangular by the parser")
}

impl Resolver {
    fn error(&mut self, code: DiagCode, span: Span, message: String) {
        self.diags.push(Diagnostic::at(code, span, message));
    }

    fn dim(&mut self, v: &Spanned<RawValue>, what: &str) -> Option<usize> {
        match &v.value {
            RawValue::Number { nat: Some(n), .. } => match n.to_usize().filter(|&d| d <= MAX_DIM) {
                Some(d) => Some(d),
                None => {
                    self.error(
                        DiagCode::InvalidValue,
                        v.span,
                        format!("{what}: dimension {n} exceeds the limit {MAX_DIM}"),
                    );
                    None
                }
            },
            RawValue::Number { value, nat: None } => {
                self.error(
                    DiagCode::InvalidValue,
                    v.span,
                    format!("{what}: expected a natural number, found {value}"),
                );
                None
            }
            RawValue::Name(name) => match self.doc.spaces.get(name) {
                Some(d) => Some(d.value),
                None => {
                    self.unresolved("space", name, v.span, what);
                    None
                }
            },
            RawValue::Matrix(_) | RawValue::Label(_) => {
                self.error(
                    DiagCode::InvalidValue,
                    v.span,
                    format!("{what}: expected a dimension or a space name"),
                );
                None
            }
        }
    }

    /// A matrix literal or map name that must have shape `rows x cols`; `[]`
    /// stands for any shape with no entries.
    fn matrix(&mut self, v: &Spanned<RawValue>, rows: usize, cols: usize, what: &str) -> Option<QMatrix> {
        let m = match &v.value {
            RawValue::Matrix(m) if m.rows.is_empty() => {
                if rows * cols == 0 {
                    return Some(QMatrix::zeros(rows, cols));
                }
                QMatrix::zeros(0, 0)
            }
            RawValue::Matrix(m) => literal(m),
            RawValue::Name(name) => match self.doc.maps.get(name) {
                Some(decl) => decl.value.matrix.clone(),
                None => {
                    self.unresolved("map", name, v.span, what);
                    return None;
                }
            },
            RawValue::Number { .. } | RawValue::Label(_) => {
                self.error(DiagCode::InvalidValue, v.span, format!("{what}: expected a matrix or a map name"));
                return None;
            }
        };
        if m.shape() != (rows, cols) {
            self.error(
                DiagCode::DimensionMismatch,
                v.span,
                format!(
                    "{what} must be {}, got {}",
                    render_shape(rows, cols),
                    render_shape(m.rows(), m.cols())
                ),
            );
            return None;
        }
        Some(m)
    }

    fn unresolved(&mut self, kind: &'static str, name: &str, span: Span, what: &str) {
        if !self.broken.contains(&(kind, name.to_string())) {
            self.error(DiagCode::UnresolvedName, span, format!("{what}: unknown {kind} `{name}`"));
        }
    }

    fn unique(&mut self, exists: bool, name: &Spanned<String>, kind: &str) -> bool {
        if exists {
            self.error(
                DiagCode::DuplicateName,
                name.span,
                format!("{kind} `{}` is declared twice", name.value),
            );
            false
        } else {
            true
        }
    }

    fn space(&mut self, name: &Spanned<String>, dim: &Spanned<RawValue>, span: Span) {
        if !matches!(dim.value, RawValue::Number { .. }) {
            self.error(DiagCode::InvalidValue, dim.span, "space dimension must be a natural number".into());
            return;
        }
        let Some(d) = self.dim(dim, "dim") else { return };
        if self.unique(self.doc.spaces.contains_key(&name.value), name, "space") {
            self.doc.spaces.insert(name.value.clone(), Spanned { value: d, span });
        }
    }

    fn map(&mut self, name: &Spanned<String>, from: &Spanned<String>, to: &Spanned<String>, m: &RawMatrix, span: Span) {
        let lookup = |r: &mut Resolver, s: &Spanned<String>| match r.doc.spaces.get(&s.value) {
            Some(d) => Some(d.value),
            None => {
                r.unresolved("space", &s.value, s.span, "map");
                None
            }
        };
        let (Some(c), Some(r)) = (lookup(self, from), lookup(self, to)) else { return };
        let value = Spanned {
            value: RawValue::Matrix(m.clone()),
            span: m.span,
        };
        let Some(matrix) = self.matrix(&value, r, c, &format!("map `{}`", name.value)) else { return };
        if self.unique(self.doc.maps.contains_key(&name.value), name, "map") {
            self.doc.maps.insert(
                name.value.clone(),
                Spanned {
                    value: MapDecl {
                        from: from.value.clone(),
                        to: to.value.clone(),
                        matrix,
                    },
                    span,
                },
            );
        }
    }

    fn zigzag(&mut self, name: &Spanned<String>, fields: &[Field], span: Span) {
        let get = |k: &str| &field(fields, k).expect("required keys checked by the parser").value;
        let label = match &get("open").value {
            RawValue::Label(l) => l.clone(),
            _ => unreachable!("open is read as a raw label"),
        };
        let em = self.dim(get("eminus"), "eminus");
        let ez = self.dim(get("ezero"), "ezero");
        let a = self.dim(get("A"), "A");
        let b = self.dim(get("B"), "B");
        let (Some(em), Some(ez), Some(a), Some(b)) = (em, ez, a, b) else { return };
        let alpha = self.matrix(get("alpha"), a, em, "alpha");
        let beta = self.matrix(get("beta"), b, a, "beta");
        let gamma = self.matrix(get("gamma"), ez, b, "gamma");
        let (Some(alpha), Some(beta), Some(gamma)) = (alpha, beta, gamma) else { return };
        let z = match ZigZag::new(label, em, ez, alpha, beta, gamma) {
            Ok(z) => z,
            Err(ZigZagError::ZeroOpenPartBoundary { .. }) => {
                self.error(
                    DiagCode::InvalidValue,
                    get("open").span,
                    format!("zigzag `{}`: open label 0 requires eminus = ezero = 0", name.value),
                );
                return;
            }
            Err(e) => {
                self.error(DiagCode::DimensionMismatch, span, format!("zigzag `{}`: {e}", name.value));
                return;
            }
        };
        if self.options.validate {
            for f in z.validate().failures {
                let at = match f.position {
                    Position::A => get("alpha").span.join(get("beta").span),
                    Position::B => get("beta").span.join(get("gamma").span),
                };
                self.error(DiagCode::Validation, at, format!("zigzag `{}` is {f}", name.value));
            }
        }
        if self.unique(self.doc.zigzags.contains_key(&name.value), name, "zigzag") {
            self.doc.zigzags.insert(name.value.clone(), Spanned { value: z, span });
        }
    }

    fn extension(
        &mut self,
        name: &Spanned<String>,
        sub: &Spanned<String>,
        quot: &Spanned<String>,
        class: &Spanned<RawClass>,
        span: Span,
    ) {
        let lookup = |r: &mut Resolver, s: &Spanned<String>| match r.doc.zigzags.get(&s.value) {
            Some(z) => Some(z.value.clone()),
            None => {
                r.unresolved("zigzag", &s.value, s.span, "extension");
                None
            }
        };
        let (Some(s), Some(q)) = (lookup(self, sub), lookup(self, quot)) else { return };
        let (spec, input) = match &class.value {
            RawClass::Scalar(c) => (ClassSpec::Scalar(c.clone()), ClassInput::Scalar(c.clone())),
            RawClass::Vector(m) => {
                if m.rows.len() > 1 {
                    self.error(
                        DiagCode::DimensionMismatch,
                        m.span,
                        format!("class vector must be a single row, got {} rows", m.rows.len()),
                    );
                    return;
                }
                let v: Vec<Rational> = m.rows.first().cloned().unwrap_or_default();
                (ClassSpec::Vector(v.clone()), ClassInput::Vector(v))
            }
            RawClass::Block(m) => {
                let u = if m.rows.is_empty() {
                    QMatrix::zeros(s.b_dim(), q.a_dim())
                } else {
                    literal(m)
                };
                (ClassSpec::Block(u.clone()), ClassInput::Block(u))
            }
        };
        let presentation = match make_extension(s, q, input) {
            Ok(e) => e,
            Err(e) => {
                let code = match e {
                    ExtensionError::Shape(_) => DiagCode::DimensionMismatch,
                    ExtensionError::InvalidPart { .. } | ExtensionError::InvalidTotal(_) => DiagCode::Validation,
                    _ => DiagCode::InvalidValue,
                };
                self.error(code, class.span, format!("extension `{}`: {e}", name.value));
                return;
            }
        };
        if self.unique(self.doc.extensions.contains_key(&name.value), name, "extension") {
            self.doc.extensions.insert(
                name.value.clone(),
                Spanned {
                    value: ExtensionDecl {
                        sub: sub.value.clone(),
                        quot: quot.value.clone(),
                        class: spec,
                        presentation,
                    },
                    span,
                },
            );
        }
    }

    fn nodes(&mut self, entries: &[(Spanned<String>, Option<Spanned<String>>)], span: Span) {
        if self.doc.nodes.is_some() {
            self.error(DiagCode::DuplicateName, span, "only one nodes block is allowed".into());
            return;
        }
        let mut data = Vec::new();
        let mut out = Vec::new();
        let mut ok = true;
        for (label, local) in entries {
            if out.iter().any(|e: &NodeEntry| e.label == label.value) {
                self.error(DiagCode::DuplicateName, label.span, format!("node `{}` is listed twice", label.value));
                ok = false;
                continue;
            }
            let datum = match local {
                None => NodeDatum::odp(label.value.clone(), OPEN_LABEL, Rational::one()),
                Some(ext) => match self.doc.extensions.get(&ext.value) {
                    Some(e) => NodeDatum::new(label.value.clone(), e.value.presentation.clone()),
                    None => {
                        self.unresolved("extension", &ext.value, ext.span, "nodes");
                        ok = false;
                        continue;
                    }
                },
            };
            data.push(datum);
            out.push(NodeEntry {
                label: label.value.clone(),
                local: local.as_ref().map(|l| l.value.clone()),
            });
        }
        if !ok {
            return;
        }
        let open = data
            .first()
            .map_or(OPEN_LABEL.to_string(), |d| d.local.sub().open_label().to_string());
        match assemble(BULK_LABEL, &open, data) {
            Ok(datum) => {
                self.doc.nodes = Some(Spanned {
                    value: NodesDecl { entries: out, datum },
                    span,
                })
            }
            Err(e) => self.error(DiagCode::InvalidValue, span, format!("nodes: {e}")),
        }
    }

    fn ranges(&mut self, v: &Spanned<RawValue>, psi: usize, count: usize) -> Option<Vec<Range<usize>>> {
        let RawValue::Matrix(m) = &v.value else {
            self.error(DiagCode::InvalidValue, v.span, "ranges: expected [start, end; ...]".into());
            return None;
        };
        if m.rows.len() != count {
            self.error(
                DiagCode::DimensionMismatch,
                v.span,
                format!("ranges: {} ranges given for {count} nodes", m.rows.len()),
            );
            return None;
        }
        let mut out: Vec<Range<usize>> = Vec::new();
        for row in &m.rows {
            let bounds: Option<Vec<usize>> = row
                .iter()
                .map(|x| if x.is_integer() { x.numer().to_usize() } else { None })
                .collect();
            let range = match bounds.as_deref() {
                Some(&[s, e]) if 1 <= s && s <= e && e <= psi => s - 1..e,
                _ => {
                    self.error(
                        DiagCode::InvalidValue,
                        v.span,
                        format!("ranges: each row must be `start, end` with 1 <= start <= end <= {psi}"),
                    );
                    return None;
                }
            };
            if out.iter().any(|o| o.start < range.end && range.start < o.end) {
                self.error(DiagCode::InvalidValue, v.span, "ranges: node ranges overlap".into());
                return None;
            }
            out.push(range);
        }
        Some(out)
    }

    fn gluing(&mut self, name: &Spanned<String>, fields: &[Field], span: Span) {
        let what = format!("gluing `{}`", name.value);
        if self.broken.contains(&("nodes", String::new())) {
            return;
        }
        let get = |k: &str| field(fields, k).map(|f| &f.value);
        let Some(psi) = self.dim(get("psi").expect("required"), "psi") else { return };
        let labels: Vec<String> = match &self.doc.nodes {
            Some(n) => n.value.entries.iter().map(|e| e.label.clone()).collect(),
            None => vec!["p1".to_string()],
        };
        let r = labels.len();

        let u_val = get("u").expect("required");
        let m2 = match &u_val.value {
            RawValue::Matrix(m) => m.rows.len(),
            RawValue::Name(n) => self.doc.maps.get(n).map_or(0, |d| d.value.matrix.rows()),
            _ => 0,
        };
        let Some(u) = self.matrix(u_val, m2, psi, "u") else { return };
        let Some(v) = self.matrix(get("v").expect("required"), psi, m2, "v") else { return };
        let n = match get("N") {
            Some(val) => match self.matrix(val, psi, psi, "N") {
                Some(n) => Some(n),
                None => return,
            },
            None => None,
        };
        let decomposition = match get("ranges") {
            Some(val) => match self.ranges(val, psi, r) {
                Some(rs) => rs,
                None => return,
            },
            None if r == 0 => Vec::new(),
            None if psi % r == 0 => (0..r).map(|k| k * psi / r..(k + 1) * psi / r).collect(),
            None => {
                self.error(
                    DiagCode::InvalidValue,
                    span,
                    format!("{what}: Psi of dimension {psi} does not split evenly over {r} nodes; give ranges"),
                );
                return;
            }
        };
        let m2_dims = if r == 0 {
            if m2 != 0 {
                self.error(DiagCode::DimensionMismatch, u_val.span, format!("{what}: u has rows but there are no nodes"));
                return;
            }
            Vec::new()
        } else if m2 % r == 0 {
            vec![m2 / r; r]
        } else {
            self.error(
                DiagCode::DimensionMismatch,
                u_val.span,
                format!("{what}: u has {m2} rows, which do not split evenly over {r} nodes"),
            );
            return;
        };
        let n_supplied = n.is_some();
        let quadruple = GluingQuadruple {
            psi_dim: psi,
            decomposition: labels.into_iter().zip(decomposition).collect(),
            m2_dims,
            n: n.unwrap_or_else(|| &v * &u),
            u,
            v,
            n_supplied,
        };
        if self.options.validate {
            let report = verify_gluing(&quadruple);
            let failed: Vec<String> = report.failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
            if !failed.is_empty() {
                self.error(DiagCode::Validation, span, format!("{what} fails: {}", failed.join("; ")));
            }
        }
        if self.unique(self.doc.gluings.contains_key(&name.value), name, "gluing") {
            self.doc.gluings.insert(name.value.clone(), Spanned { value: GluingDecl { quadruple }, span });
        }
    }
}

fn kind_rank(item: &RawItem) -> u8 {
    match item {
        RawItem::Space { .. } => 0,
        RawItem::Map { .. } => 1,
        RawItem::ZigZag { .. } => 2,
        RawItem::Extension { .. } => 3,
        RawItem::Nodes { .. } => 4,
        RawItem::Gluing { .. } => 5,
    }
}

fn declared(item: &RawItem) -> Option<(&'static str, String)> {
    match item {
        RawItem::Space { name, .. } => Some(("space", name.value.clone())),
        RawItem::Map { name, .. } => Some(("map", name.value.clone())),
        RawItem::ZigZag { name, .. } => Some(("zigzag", name.value.clone())),
        RawItem::Extension { name, .. } => Some(("extension", name.value.clone())),
        RawItem::Nodes { .. } => Some(("nodes", String::new())),
        RawItem::Gluing { .. } => None,
    }
}

pub fn resolve(mut items: Vec<Item>, options: ParseOptions) -> Result<Document, Vec<Diagnostic>> {
    items.sort_by_key(|i| kind_rank(&i.raw));
    let mut r = Resolver {
        options,
        diags: Vec::new(),
        doc: Document::default(),
        broken: BTreeSet::new(),
    };
    for item in &items {
        let span = item.span;
        let before = r.diags.len();
        match &item.raw {
            RawItem::Space { name, dim } => r.space(name, dim, span),
            RawItem::Map { name, from, to, matrix } => r.map(name, from, to, matrix, span),
            RawItem::ZigZag { name, fields } => r.zigzag(name, fields, span),
            RawItem::Extension { name, sub, quot, class } => r.extension(name, sub, quot, class, span),
            RawItem::Nodes { entries } => r.nodes(entries, span),
            RawItem::Gluing { name, fields } => r.gluing(name, fields, span),
        }
        if r.diags.len() > before {
            if let Some(key) = declared(&item.raw) {
                r.broken.insert(key);
            }
        }
    }
    if r.diags.is_empty() {
        Ok(r.doc)
    } else {
        Err(r.diags)
    }
}
