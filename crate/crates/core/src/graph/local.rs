use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{Direction, GraphError, Hop, HopSource, PredicateId, VertexId};
use crate::rdf_io::{Literal, Term, Triple};

/// Compressed adjacency: the hops of vertex `v` are
/// `hops[offsets[v]..offsets[v + 1]]`, in triple insertion order.
#[derive(Debug, Clone, Default)]
struct Adjacency {
    offsets: Vec<usize>,
    hops: Vec<Hop>,
}

impl Adjacency {
    fn build(vertex_count: usize, edges: impl Iterator<Item = (VertexId, Hop)> + Clone) -> Self {
        let mut offsets = vec![0usize; vertex_count + 1];
        for (src, _) in edges.clone() {
            offsets[src as usize + 1] += 1;
        }
        for i in 0..vertex_count {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut hops = vec![Hop { predicate: 0, target: 0 }; offsets[vertex_count]];
        for (src, hop) in edges {
            let slot = &mut cursor[src as usize];
            hops[*slot] = hop;
            *slot += 1;
        }
        Adjacency { offsets, hops }
    }

    fn of(&self, v: VertexId) -> &[Hop] {
        let v = v as usize;
        match (self.offsets.get(v), self.offsets.get(v + 1)) {
            (Some(&a), Some(&b)) => &self.hops[a..b],
            _ => &[],
        }
    }
}

/// In-memory, immutable knowledge graph with forward and inverse adjacency.
///
/// Vertices are the IRIs and blank nodes that occur as subject or object of
/// any input triple. Triples with literal objects go to a separate literal
/// index and are never walked. Triples whose predicate is skipped are kept
/// out of both the adjacency and the literal index.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeGraph {
    vertices: Vec<Term>,
    vertex_tokens: Vec<Arc<str>>,
    vertex_index: HashMap<Term, VertexId>,
    predicates: Vec<Arc<str>>,
    predicate_index: HashMap<Arc<str>, PredicateId>,
    forward: Adjacency,
    inverse: Adjacency,
    literal_index: HashMap<(VertexId, PredicateId), Vec<Literal>>,
    skip_predicates: BTreeSet<String>,
}

impl KnowledgeGraph {
    pub fn build<T, S>(triples: T, skip_predicates: S) -> Self
    where
        T: IntoIterator<Item = Triple>,
        S: IntoIterator,
        S::Item: Into<String>,
    {
        let skip: BTreeSet<String> = skip_predicates.into_iter().map(Into::into).collect();
        let mut g = KnowledgeGraph { skip_predicates: skip, ..Default::default() };
        let mut edges: Vec<(VertexId, PredicateId, VertexId)> = Vec::new();
        for t in triples {
            let Triple { subject, predicate, object } = t;
            let predicate = predicate.as_iri().expect("predicate is an IRI");
            let s = g.intern_vertex(subject);
            let skipped = g.skip_predicates.contains(predicate);
            match object {
                Term::Literal(lit) => {
                    if !skipped {
                        let p = g.intern_predicate(predicate);
                        g.literal_index.entry((s, p)).or_default().push(lit);
                    }
                }
                object => {
                    let o = g.intern_vertex(object);
                    if !skipped {
                        let p = g.intern_predicate(predicate);
                        edges.push((s, p, o));
                    }
                }
            }
        }
        let n = g.vertices.len();
        g.forward = Adjacency::build(n, edges.iter().map(|&(s, p, o)| (s, Hop { predicate: p, target: o })));
        g.inverse = Adjacency::build(n, edges.iter().map(|&(s, p, o)| (o, Hop { predicate: p, target: s })));
        g
    }

    fn intern_vertex(&mut self, term: Term) -> VertexId {
        if let Some(&id) = self.vertex_index.get(&term) {
            return id;
        }
        let id = self.vertices.len() as VertexId;
        self.vertex_tokens.push(term.token().into());
        self.vertex_index.insert(term.clone(), id);
        self.vertices.push(term);
        id
    }

    fn intern_predicate(&mut self, iri: &str) -> PredicateId {
        if let Some(&id) = self.predicate_index.get(iri) {
            return id;
        }
        let id = self.predicates.len() as PredicateId;
        let iri: Arc<str> = iri.into();
        self.predicates.push(iri.clone());
        self.predicate_index.insert(iri, id);
        id
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of walkable (non-literal, non-skipped) triples.
    pub fn edge_count(&self) -> usize {
        self.forward.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, term: &Term) -> bool {
        self.vertex_index.contains_key(term)
    }

    pub fn vertex_id(&self, term: &Term) -> Option<VertexId> {
        self.vertex_index.get(term).copied()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Term> {
        self.vertices.get(id as usize)
    }

    pub fn vertices(&self) -> &[Term] {
        &self.vertices
    }

    pub fn predicate_id(&self, iri: &str) -> Option<PredicateId> {
        self.predicate_index.get(iri).copied()
    }

    pub fn predicate_iri(&self, id: PredicateId) -> Option<&str> {
        self.predicates.get(id as usize).map(|p| &**p)
    }

    pub fn predicate_count(&self) -> usize {
        self.predicates.len()
    }

    pub fn skip_predicates(&self) -> &BTreeSet<String> {
        &self.skip_predicates
    }

    /// Hops of a vertex by id.
    pub fn hops_of(&self, v: VertexId, direction: Direction) -> &[Hop] {
        match direction {
            Direction::Forward => self.forward.of(v),
            Direction::Reverse => self.inverse.of(v),
        }
    }

    /// `(predicate, neighbor)` pairs of `v`; empty for unknown vertices.
    pub fn get_hops(&self, v: &Term, direction: Direction) -> Vec<(Term, Term)> {
        let Some(id) = self.vertex_id(v) else {
            return Vec::new();
        };
        self.hops_of(id, direction)
            .iter()
            .map(|h| {
                (Term::Iri(self.predicates[h.predicate as usize].to_string()), self.vertices[h.target as usize].clone())
            })
            .collect()
    }

    /// Literal objects of `(s, p)`, in insertion order.
    pub fn get_literals(&self, s: &Term, p: &str) -> &[Literal] {
        match (self.vertex_id(s), self.predicate_id(p)) {
            (Some(s), Some(p)) => self.literals_of(s, p),
            _ => &[],
        }
    }

    pub fn literals_of(&self, s: VertexId, p: PredicateId) -> &[Literal] {
        self.literal_index.get(&(s, p)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Iterates the walkable edges as `(subject, hop)` in subject order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, Hop)> + '_ {
        (0..self.vertices.len() as VertexId).flat_map(move |v| self.forward.of(v).iter().map(move |h| (v, *h)))
    }
}

impl HopSource for KnowledgeGraph {
    fn resolve(&self, term: &Term) -> Result<Option<VertexId>, GraphError> {
        Ok(self.vertex_id(term))
    }

    fn hops(&self, vertex: VertexId, direction: Direction) -> Result<Cow<'_, [Hop]>, GraphError> {
        Ok(Cow::Borrowed(self.hops_of(vertex, direction)))
    }

    fn vertex_term(&self, vertex: VertexId) -> Term {
        self.vertices[vertex as usize].clone()
    }

    fn vertex_token(&self, vertex: VertexId) -> Arc<str> {
        self.vertex_tokens[vertex as usize].clone()
    }

    fn predicate_token(&self, predicate: PredicateId) -> Arc<str> {
        self.predicates[predicate as usize].clone()
    }

    fn skip_predicates(&self) -> &BTreeSet<String> {
        &self.skip_predicates
    }

    fn literals(&self, vertex: VertexId, predicate: &str) -> Result<Vec<Literal>, GraphError> {
        Ok(match self.predicate_id(predicate) {
            Some(p) => self.literals_of(vertex, p).to_vec(),
            None => Vec::new(),
        })
    }

    fn as_local(&self) -> Option<&KnowledgeGraph> {
        Some(self)
    }
}
