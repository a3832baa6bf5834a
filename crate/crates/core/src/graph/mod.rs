//! Graph access for walk extraction.
//!
//! Walkers and literal extraction are written against [`HopSource`], which is
//! implemented by the in-memory [`KnowledgeGraph`] and by [`RemoteGraph`],
//! which answers hop queries lazily through a SPARQL endpoint.

mod local;
mod remote;

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf_io::{ConnectorError, Literal, Term};

pub use local::KnowledgeGraph;
pub use remote::RemoteGraph;

pub type VertexId = u32;
pub type PredicateId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Outgoing edges: subject to object.
    Forward,
    /// Incoming edges: object to subject.
    Reverse,
}

/// One traversable edge as seen from its source vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hop {
    pub predicate: PredicateId,
    pub target: VertexId,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error(transparent)]
    Connector(#[from] ConnectorError),
    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),
}

/// Read access to a walkable graph.
///
/// Hop lists never contain literal neighbors or skipped predicates, and are
/// returned in a stable order so that seeded extraction is reproducible.
pub trait HopSource: Sync {
    /// Id of a vertex, or `None` when the term is not part of the graph.
    fn resolve(&self, term: &Term) -> Result<Option<VertexId>, GraphError>;

    fn hops(&self, vertex: VertexId, direction: Direction) -> Result<Cow<'_, [Hop]>, GraphError>;

    fn vertex_term(&self, vertex: VertexId) -> Term;

    /// Walk token for a vertex.
    fn vertex_token(&self, vertex: VertexId) -> Arc<str>;

    /// Walk token (the IRI) for a predicate.
    fn predicate_token(&self, predicate: PredicateId) -> Arc<str>;

    /// Predicates excluded from hops and literals.
    fn skip_predicates(&self) -> &BTreeSet<String>;

    /// Literal objects of `(vertex, predicate)`, in insertion order.
    fn literals(&self, vertex: VertexId, predicate: &str) -> Result<Vec<Literal>, GraphError>;

    /// Hint that the hops of `terms` are about to be requested.
    fn prefetch(&self, _terms: &[Term], _direction: Direction) -> Result<(), GraphError> {
        Ok(())
    }

    /// Whether [`prefetch`](HopSource::prefetch) does anything useful.
    fn wants_prefetch(&self) -> bool {
        false
    }

    /// The fully materialized graph, when there is one. Samplers other than
    /// uniform and Weisfeiler-Lehman relabeling need it.
    fn as_local(&self) -> Option<&KnowledgeGraph> {
        None
    }
}
