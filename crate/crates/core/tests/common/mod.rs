#![allow(dead_code)]

use kgstroll::rdf_io::parse_str;
use kgstroll::{KnowledgeGraph, Term, Triple};
use kgstroll_testkit::{to_ntriples, RawTriple};

/// Parses raw triples through their N-Triples rendering.
pub fn triples(raw: &[RawTriple]) -> Vec<Triple> {
    parse_str(&to_ntriples(raw)).expect("generated N-Triples parse")
}

pub fn graph(raw: &[RawTriple], skip: &[&str]) -> KnowledgeGraph {
    KnowledgeGraph::build(triples(raw), skip.iter().map(|s| s.to_string()))
}

pub fn iri(s: &str) -> Term {
    Term::iri(s)
}
