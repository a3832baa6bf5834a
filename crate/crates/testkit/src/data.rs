use std::collections::HashSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RawTerm {
    Iri(String),
    Blank(String),
    Literal { lexical: String, datatype: Option<String>, lang: Option<String> },
}

impl RawTerm {
    pub fn iri(s: impl Into<String>) -> Self {
        RawTerm::Iri(s.into())
    }

    pub fn literal(lexical: impl Into<String>) -> Self {
        RawTerm::Literal { lexical: lexical.into(), datatype: None, lang: None }
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        RawTerm::Literal { lexical: lexical.into(), datatype: Some(datatype.into()), lang: None }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, RawTerm::Literal { .. })
    }

    /// Walk token: the bare IRI, or `_:label` for blank nodes.
    pub fn token(&self) -> String {
        match self {
            RawTerm::Iri(i) => i.clone(),
            RawTerm::Blank(b) => format!("_:{b}"),
            RawTerm::Literal { lexical, .. } => lexical.clone(),
        }
    }

    /// N-Triples rendering with the minimal escapes.
    pub fn to_nt(&self) -> String {
        match self {
            RawTerm::Iri(i) => format!("<{i}>"),
            RawTerm::Blank(b) => format!("_:{b}"),
            RawTerm::Literal { lexical, datatype, lang } => {
                let mut out = String::from("\"");
                for c in lexical.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        other => out.push(other),
                    }
                }
                out.push('"');
                if let Some(l) = lang {
                    let _ = write!(out, "@{l}");
                } else if let Some(d) = datatype {
                    let _ = write!(out, "^^<{d}>");
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RawTriple {
    pub s: RawTerm,
    pub p: String,
    pub o: RawTerm,
}

impl RawTriple {
    pub fn new(s: RawTerm, p: impl Into<String>, o: RawTerm) -> Self {
        RawTriple { s, p: p.into(), o }
    }

    pub fn iris(s: &str, p: &str, o: &str) -> Self {
        RawTriple::new(RawTerm::iri(s), p, RawTerm::iri(o))
    }

    pub fn to_nt(&self) -> String {
        format!("{} <{}> {} .", self.s.to_nt(), self.p, self.o.to_nt())
    }
}

pub fn to_ntriples(triples: &[RawTriple]) -> String {
    let mut out = String::new();
    for t in triples {
        out.push_str(&t.to_nt());
        out.push('\n');
    }
    out
}

/// Shape of a random graph. Vertex `i` is `http://test/v{i}` and predicate
/// `j` is `http://test/p{j}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGraphSpec {
    pub vertices: usize,
    pub edges: usize,
    pub predicate_alphabet: usize,
    /// Fraction of the edges that get a literal object instead of a vertex.
    pub literal_fraction: f64,
    pub seed: u64,
}

impl RandomGraphSpec {
    pub fn vertex(i: usize) -> String {
        format!("http://test/v{i}")
    }

    pub fn predicate(j: usize) -> String {
        format!("http://test/p{j}")
    }
}

/// Distinct random triples following `spec`. Self loops are allowed.
pub fn random_triples(spec: &RandomGraphSpec) -> Vec<RawTriple> {
    let capacity = spec.vertices * spec.vertices * spec.predicate_alphabet;
    assert!(spec.edges <= capacity, "edges exceed vertices^2 * predicates");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(spec.edges);
    while out.len() < spec.edges {
        let s = rng.gen_range(0..spec.vertices);
        let p = rng.gen_range(0..spec.predicate_alphabet);
        let o = rng.gen_range(0..spec.vertices);
        let literal = rng.gen_bool(spec.literal_fraction.clamp(0.0, 1.0));
        if !seen.insert((s, p, o, literal)) {
            continue;
        }
        let object = if literal {
            RawTerm::typed(format!("{}.{}", o, rng.gen_range(0..100)), XSD_DOUBLE)
        } else {
            RawTerm::iri(RandomGraphSpec::vertex(o))
        };
        out.push(RawTriple::new(RawTerm::iri(RandomGraphSpec::vertex(s)), RandomGraphSpec::predicate(p), object));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_graph_is_reproducible_and_sized() {
        let spec = RandomGraphSpec { vertices: 20, edges: 60, predicate_alphabet: 3, literal_fraction: 0.2, seed: 9 };
        let a = random_triples(&spec);
        assert_eq!(a.len(), 60);
        assert_eq!(a, random_triples(&spec));
        assert!(a.iter().any(|t| t.o.is_literal()));
    }

    #[test]
    fn escapes() {
        let t = RawTriple::new(RawTerm::Blank("b".into()), "http://p", RawTerm::literal("a\"b\\c\nd"));
        assert_eq!(t.to_nt(), r#"_:b <http://p> "a\"b\\c\nd" ."#);
    }
}
