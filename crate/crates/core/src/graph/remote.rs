use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;

use super::{Direction, GraphError, Hop, HopSource, PredicateId, VertexId};
use crate::rdf_io::{Literal, SparqlConnector, Term};

#[derive(Default)]
struct Interner {
    vertices: Vec<Term>,
    tokens: Vec<Arc<str>>,
    vertex_index: HashMap<Term, VertexId>,
    predicates: Vec<Arc<str>>,
    predicate_index: HashMap<Arc<str>, PredicateId>,
}

impl Interner {
    fn vertex(&mut self, term: &Term) -> VertexId {
        if let Some(&id) = self.vertex_index.get(term) {
            return id;
        }
        let id = self.vertices.len() as VertexId;
        self.vertices.push(term.clone());
        self.tokens.push(term.token().into());
        self.vertex_index.insert(term.clone(), id);
        id
    }

    fn predicate(&mut self, iri: &str) -> PredicateId {
        if let Some(&id) = self.predicate_index.get(iri) {
            return id;
        }
        let id = self.predicates.len() as PredicateId;
        let iri: Arc<str> = iri.into();
        self.predicates.push(iri.clone());
        self.predicate_index.insert(iri, id);
        id
    }
}

/// A graph that lives behind a SPARQL endpoint and is explored lazily.
///
/// Vertex ids are assigned on first sight. Hops are filtered the same way as
/// [`KnowledgeGraph`](super::KnowledgeGraph): literal neighbors and skipped
/// predicates never appear. Blank nodes cannot be addressed in a query, so
/// they are walkable targets but have no hops of their own.
pub struct RemoteGraph {
    connector: SparqlConnector,
    skip_predicates: BTreeSet<String>,
    interner: RwLock<Interner>,
}

impl RemoteGraph {
    pub fn new<S>(connector: SparqlConnector, skip_predicates: S) -> Self
    where
        S: IntoIterator,
        S::Item: Into<String>,
    {
        RemoteGraph {
            connector,
            skip_predicates: skip_predicates.into_iter().map(Into::into).collect(),
            interner: RwLock::new(Interner::default()),
        }
    }

    pub fn connector(&self) -> &SparqlConnector {
        &self.connector
    }

    fn is_skipped(&self, predicate: &Term) -> bool {
        predicate.as_iri().is_none_or(|p| self.skip_predicates.contains(p))
    }

    fn raw_hops(&self, term: &Term, direction: Direction) -> Result<Arc<[(Term, Term)]>, GraphError> {
        if !term.is_iri() {
            return Ok(Arc::from(Vec::new()));
        }
        Ok(self.connector.fetch_hops(term, direction)?)
    }
}

impl HopSource for RemoteGraph {
    /// A term is part of the graph when it occurs in at least one triple,
    /// skipped or not.
    fn resolve(&self, term: &Term) -> Result<Option<VertexId>, GraphError> {
        if let Some(&id) = self.interner.read().vertex_index.get(term) {
            return Ok(Some(id));
        }
        if !term.is_iri() {
            return Ok(None);
        }
        let present = !self.raw_hops(term, Direction::Forward)?.is_empty()
            || !self.raw_hops(term, Direction::Reverse)?.is_empty();
        Ok(present.then(|| self.interner.write().vertex(term)))
    }

    fn hops(&self, vertex: VertexId, direction: Direction) -> Result<Cow<'_, [Hop]>, GraphError> {
        let term = self.vertex_term(vertex);
        let raw = self.raw_hops(&term, direction)?;
        let mut interner = self.interner.write();
        let hops = raw
            .iter()
            .filter(|(p, n)| !self.is_skipped(p) && !n.is_literal())
            .map(|(p, n)| Hop {
                predicate: interner.predicate(p.as_iri().unwrap_or_default()),
                target: interner.vertex(n),
            })
            .collect::<Vec<_>>();
        Ok(Cow::Owned(hops))
    }

    fn vertex_term(&self, vertex: VertexId) -> Term {
        self.interner.read().vertices[vertex as usize].clone()
    }

    fn vertex_token(&self, vertex: VertexId) -> Arc<str> {
        self.interner.read().tokens[vertex as usize].clone()
    }

    fn predicate_token(&self, predicate: PredicateId) -> Arc<str> {
        self.interner.read().predicates[predicate as usize].clone()
    }

    fn skip_predicates(&self) -> &BTreeSet<String> {
        &self.skip_predicates
    }

    fn literals(&self, vertex: VertexId, predicate: &str) -> Result<Vec<Literal>, GraphError> {
        if self.skip_predicates.contains(predicate) {
            return Ok(Vec::new());
        }
        let term = self.vertex_term(vertex);
        Ok(self
            .raw_hops(&term, Direction::Forward)?
            .iter()
            .filter(|(p, _)| p.as_iri() == Some(predicate))
            .filter_map(|(_, o)| o.as_literal().cloned())
            .collect())
    }

    fn prefetch(&self, terms: &[Term], direction: Direction) -> Result<(), GraphError> {
        let iris: Vec<Term> = terms
            .iter()
            .filter(|t| t.as_iri().is_some_and(|iri| !self.connector.cache().contains(iri, direction)))
            .cloned()
            .collect();
        if !iris.is_empty() {
            self.connector.fetch_hops_bundled(&iris, direction)?;
        }
        Ok(())
    }

    fn wants_prefetch(&self) -> bool {
        true
    }
}
