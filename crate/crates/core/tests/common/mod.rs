#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zigzag_core::zzl::{parse_bytes, Diagnostic, ParseOptions};

/// The `.zzl` files shipped as test fixtures: this crate's corpus and the
/// valid CLI fixtures.
pub fn corpus() -> Vec<PathBuf> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let mut files: Vec<PathBuf> = ["tests/corpus", "../cli/tests/fixtures"]
        .iter()
        .flat_map(|dir| std::fs::read_dir(root.join(dir)).expect("fixture directory"))
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "zzl"))
        .collect();
    files.sort();
    files
}

const VOCAB: &[&str] = &[
    "space", "map", "zigzag", "extension", "nodes", "gluing", "dim", "ext", "class", "open", "eminus", "ezero", "A",
    "B", "alpha", "beta", "gamma", "psi", "u", "v", "N", "ranges", "V", "p1", "{", "}", "[", "]", "(", ")", ",", ";",
    ":", "=", "->", "0", "1", "-1", "2/4", "1/0", "-", "/", "#", "\n", " ", "Q_U[3]", "999999999999999999999",
    "\u{2212}3", "é", "@",
];

fn token_soup(rng: &mut ChaCha8Rng) -> Vec<u8> {
    let n = rng.random_range(0..40);
    let mut s = String::new();
    for _ in 0..n {
        s.push_str(VOCAB.choose(rng).expect("nonempty vocabulary"));
        if rng.random_bool(0.5) {
            s.push(' ');
        }
    }
    s.into_bytes()
}

fn mutate(rng: &mut ChaCha8Rng, base: &[u8]) -> Vec<u8> {
    let mut b = base.to_vec();
    for _ in 0..rng.random_range(1..=4) {
        let at = rng.random_range(0..=b.len());
        match rng.random_range(0..4) {
            0 if at < b.len() => {
                b.remove(at);
            }
            1 if at < b.len() => b[at] = rng.random(),
            2 => {
                let tok = VOCAB.choose(rng).expect("nonempty vocabulary").as_bytes();
                b.splice(at..at, tok.iter().copied());
            }
            _ => {
                let end = (at + rng.random_range(0..20)).min(b.len());
                b.drain(at..end);
            }
        }
    }
    b
}

/// Deterministic fuzz inputs: raw bytes, token soup and mutated fixtures.
pub fn fuzz_inputs(count: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<Vec<u8>> = corpus().iter().map(|p| std::fs::read(p).expect("fixture")).collect();
    (0..count)
        .map(|k| match k % 3 {
            0 => {
                let n = rng.random_range(0..64);
                (0..n).map(|_| rng.random()).collect()
            }
            1 => token_soup(&mut rng),
            _ => {
                let base = bases.choose(&mut rng).expect("nonempty corpus").clone();
                mutate(&mut rng, &base)
            }
        })
        .collect()
}

/// Outcome of parsing one fuzz input.
pub enum FuzzResult {
    Parsed,
    Diagnosed,
    /// A failure without diagnostics, or a diagnostic without a position.
    Unpositioned(String),
    Panicked,
}

fn positioned(input: &[u8], d: &Diagnostic) -> bool {
    d.line >= 1 && d.column >= 1 && d.span.start <= input.len() && d.span.start <= d.span.end
}

pub fn fuzz_one(input: &[u8]) -> FuzzResult {
    let outcome = std::panic::catch_unwind(|| parse_bytes(input, ParseOptions::default()));
    match outcome {
        Err(_) => FuzzResult::Panicked,
        Ok(Ok(_)) => FuzzResult::Parsed,
        Ok(Err(diags)) if diags.is_empty() => FuzzResult::Unpositioned("no diagnostics".into()),
        Ok(Err(diags)) => match diags.iter().find(|d| !positioned(input, d)) {
            Some(d) => FuzzResult::Unpositioned(d.to_string()),
            None => FuzzResult::Diagnosed,
        },
    }
}

/// Statements of a DOT digraph in the shape the skeleton exporter writes:
/// vertices with their label attribute and labelled edges.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct DotGraph {
    pub name: String,
    pub vertices: Vec<(String, String)>,
    pub edges: Vec<(String, String, String)>,
}

fn unquote(s: &str) -> String {
    let s = s.trim();
    match s.strip_prefix('"').and_then(|r| r.strip_suffix('"')) {
        Some(inner) => inner.replace("\\\"", "\"").replace("\\\\", "\\"),
        None => s.to_string(),
    }
}

fn label_attr(attrs: &str) -> Option<String> {
    let start = attrs.find("label=\"")? + "label=\"".len();
    let rest = &attrs[start..];
    let mut out = String::new();
    let mut chars = rest.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?),
            '"' => return Some(out),
            c => out.push(c),
        }
    }
    None
}

/// A deliberately small reader; returns `None` on anything unexpected.
pub fn read_dot(text: &str) -> Option<DotGraph> {
    let mut lines = text.lines();
    let header = lines.next()?.strip_prefix("digraph ")?.strip_suffix(" {")?;
    let mut g = DotGraph {
        name: header.to_string(),
        ..DotGraph::default()
    };
    let mut closed = false;
    for line in lines {
        if closed {
            return None;
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let stmt = line.strip_prefix("  ")?.strip_suffix(";")?;
        let bracket = stmt.find(" [")?;
        let (head, attrs) = stmt.split_at(bracket);
        let label = label_attr(attrs)?;
        match head.split_once(" -> ") {
            Some((from, to)) => g.edges.push((unquote(from), unquote(to), label)),
            None => g.vertices.push((unquote(head), label)),
        }
    }
    closed.then_some(g)
}
