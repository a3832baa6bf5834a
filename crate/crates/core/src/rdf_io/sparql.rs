//! SPARQL 1.1 protocol client used for lazy, hop-at-a-time remote walking.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Deserialize;
use thiserror::Error;

use super::cache::{ConnectorCache, DEFAULT_CACHE_CAPACITY};
use super::term::{Literal, Term};
use crate::graph::Direction;

pub const DEFAULT_BUNDLE_SIZE: usize = 64;
const RESULTS_JSON: &str = "application/sparql-results+json";

/// The (predicate, neighbor) pairs of one subject in one direction, shared
/// between the cache and callers.
pub type HopList = Arc<[(Term, Term)]>;

#[derive(Debug, Error)]
pub enum ConnectorError {
    #[error("endpoint answered HTTP {status}: {message}")]
    Http { status: u16, message: String },
    #[error("request to endpoint failed: {0}")]
    Transport(String),
    #[error("malformed SPARQL results: {0}")]
    Decode(String),
    #[error("hop queries need an IRI subject, got {0}")]
    NotAnIri(Term),
}

impl ConnectorError {
    pub fn status(&self) -> Option<u16> {
        match self {
            ConnectorError::Http { status, .. } => Some(*status),
            _ => None,
        }
    }
}

#[derive(Debug, Deserialize)]
struct ResultsDocument {
    results: ResultsBody,
}

#[derive(Debug, Deserialize)]
struct ResultsBody {
    bindings: Vec<HashMap<String, BindingValue>>,
}

#[derive(Debug, Deserialize)]
struct BindingValue {
    #[serde(rename = "type")]
    kind: String,
    value: String,
    datatype: Option<String>,
    #[serde(rename = "xml:lang")]
    lang: Option<String>,
}

impl BindingValue {
    fn into_term(self) -> Result<Term, ConnectorError> {
        match self.kind.as_str() {
            "uri" => Ok(Term::Iri(self.value)),
            "bnode" => Ok(Term::BlankNode(self.value)),
            "literal" | "typed-literal" => Ok(Term::Literal(match (self.datatype, self.lang) {
                (_, Some(lang)) => Literal::lang(self.value, lang),
                (Some(dt), None) => Literal::typed(self.value, dt),
                (None, None) => Literal::plain(self.value),
            })),
            other => Err(ConnectorError::Decode(format!("unknown term type {other:?}"))),
        }
    }
}

type Row = HashMap<String, BindingValue>;

fn take(row: &mut Row, var: &str) -> Result<Term, ConnectorError> {
    row.remove(var).ok_or_else(|| ConnectorError::Decode(format!("binding without ?{var}")))?.into_term()
}

fn subject_iri(subject: &Term) -> Result<&str, ConnectorError> {
    subject.as_iri().ok_or_else(|| ConnectorError::NotAnIri(subject.clone()))
}

/// Query text for the hops of one subject.
pub fn single_hop_query(subject_iri: &str, direction: Direction) -> String {
    match direction {
        Direction::Forward => format!("SELECT ?p ?o WHERE {{ <{subject_iri}> ?p ?o }}"),
        Direction::Reverse => format!("SELECT ?p ?s WHERE {{ ?s ?p <{subject_iri}> }}"),
    }
}

/// Query text for the hops of several subjects, bound through a VALUES block.
pub fn bundled_hop_query(subject_iris: &[&str], direction: Direction) -> String {
    let values: Vec<String> = subject_iris.iter().map(|iri| format!("<{iri}>")).collect();
    let var = match direction {
        Direction::Forward => "s",
        Direction::Reverse => "o",
    };
    format!("SELECT ?s ?p ?o WHERE {{ VALUES ?{var} {{ {} }} ?s ?p ?o }}", values.join(" "))
}

/// Client for one SPARQL endpoint with an LRU hop cache in front of it.
pub struct SparqlConnector {
    endpoint: String,
    agent: ureq::Agent,
    cache: ConnectorCache,
    bundle_size: usize,
    requests: AtomicU64,
}

impl SparqlConnector {
    pub fn new(endpoint: impl Into<String>) -> Self {
        let agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
        SparqlConnector {
            endpoint: endpoint.into(),
            agent,
            cache: ConnectorCache::new(DEFAULT_CACHE_CAPACITY),
            bundle_size: DEFAULT_BUNDLE_SIZE,
            requests: AtomicU64::new(0),
        }
    }

    pub fn with_cache_capacity(mut self, capacity: usize) -> Self {
        self.cache = ConnectorCache::new(capacity);
        self
    }

    /// Zero is treated as one.
    pub fn with_bundle_size(mut self, bundle_size: usize) -> Self {
        self.bundle_size = bundle_size.max(1);
        self
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    pub fn bundle_size(&self) -> usize {
        self.bundle_size
    }

    pub fn cache(&self) -> &ConnectorCache {
        &self.cache
    }

    /// Number of HTTP requests this connector has issued.
    pub fn requests_issued(&self) -> u64 {
        self.requests.load(Ordering::Relaxed)
    }

    fn select(&self, query: &str) -> Result<Vec<Row>, ConnectorError> {
        self.requests.fetch_add(1, Ordering::Relaxed);
        let mut response = self
            .agent
            .post(&self.endpoint)
            .header("Accept", RESULTS_JSON)
            .send_form([("query", query)])
            .map_err(|e| ConnectorError::Transport(e.to_string()))?;
        let status = response.status().as_u16();
        let body = response.body_mut().read_to_string().map_err(|e| ConnectorError::Transport(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(ConnectorError::Http { status, message: body.chars().take(200).collect() });
        }
        let value: serde_json::Value = serde_json::from_str(&body)
            .map_err(|e| ConnectorError::Http { status, message: format!("response body is not JSON: {e}") })?;
        let doc: ResultsDocument = serde_json::from_value(value).map_err(|e| ConnectorError::Decode(e.to_string()))?;
        Ok(doc.results.bindings)
    }

    /// Hops of one subject, served from the cache when possible.
    pub fn fetch_hops(&self, subject: &Term, direction: Direction) -> Result<HopList, ConnectorError> {
        let iri = subject_iri(subject)?;
        if let Some(hit) = self.cache.get(iri, direction) {
            return Ok(hit);
        }
        let neighbor_var = match direction {
            Direction::Forward => "o",
            Direction::Reverse => "s",
        };
        let hops: HopList = self
            .select(&single_hop_query(iri, direction))?
            .into_iter()
            .map(|mut row| Ok((take(&mut row, "p")?, take(&mut row, neighbor_var)?)))
            .collect::<Result<Vec<_>, ConnectorError>>()?
            .into();
        self.cache.insert(iri, direction, hops.clone());
        Ok(hops)
    }

    /// Hops of many subjects. Uncached subjects are fetched in chunks of
    /// `bundle_size` through a VALUES clause; a failing chunk fails the call.
    pub fn fetch_hops_bundled(
        &self,
        subjects: &[Term],
        direction: Direction,
    ) -> Result<IndexMap<Term, HopList>, ConnectorError> {
        let mut out: IndexMap<Term, HopList> = IndexMap::with_capacity(subjects.len());
        let mut pending: Vec<&str> = Vec::new();
        for subject in subjects {
            let iri = subject_iri(subject)?;
            if out.contains_key(subject) || pending.contains(&iri) {
                continue;
            }
            match self.cache.get(iri, direction) {
                Some(hit) => {
                    out.insert(subject.clone(), hit);
                }
                None => pending.push(iri),
            }
        }
        let (key_var, neighbor_var) = match direction {
            Direction::Forward => ("s", "o"),
            Direction::Reverse => ("o", "s"),
        };
        for chunk in pending.chunks(self.bundle_size) {
            let mut grouped: HashMap<String, Vec<(Term, Term)>> = HashMap::new();
            for mut row in self.select(&bundled_hop_query(chunk, direction))? {
                let key = match take(&mut row, key_var)? {
                    Term::Iri(iri) => iri,
                    other => return Err(ConnectorError::Decode(format!("bundle key {other} is not an IRI"))),
                };
                let hop = (take(&mut row, "p")?, take(&mut row, neighbor_var)?);
                grouped.entry(key).or_default().push(hop);
            }
            for iri in chunk {
                let hops: HopList = grouped.remove(*iri).unwrap_or_default().into();
                self.cache.insert(iri, direction, hops.clone());
                out.insert(Term::iri(*iri), hops);
            }
        }
        // Restore request order.
        let ordered = subjects.iter().filter_map(|s| out.get(s).map(|h| (s.clone(), h.clone()))).collect();
        Ok(ordered)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn query_shapes() {
        assert_eq!(single_hop_query("http://a", Direction::Forward), "SELECT ?p ?o WHERE { <http://a> ?p ?o }");
        assert_eq!(single_hop_query("http://a", Direction::Reverse), "SELECT ?p ?s WHERE { ?s ?p <http://a> }");
        assert_eq!(
            bundled_hop_query(&["http://a", "http://b"], Direction::Reverse),
            "SELECT ?s ?p ?o WHERE { VALUES ?o { <http://a> <http://b> } ?s ?p ?o }"
        );
    }

    #[test]
    fn binding_decoding() {
        let doc: ResultsDocument = serde_json::from_str(
            r#"{"head":{"vars":["p","o"]},"results":{"bindings":[
                {"p":{"type":"uri","value":"http://p"},"o":{"type":"literal","value":"1","datatype":"http://dt"}},
                {"p":{"type":"uri","value":"http://p"},"o":{"type":"literal","value":"x","xml:lang":"en"}},
                {"p":{"type":"uri","value":"http://p"},"o":{"type":"bnode","value":"b0"}}
            ]}}"#,
        )
        .unwrap();
        let terms: Vec<Term> = doc.results.bindings.into_iter().map(|mut r| take(&mut r, "o").unwrap()).collect();
        assert_eq!(terms[0], Term::Literal(Literal::typed("1", "http://dt")));
        assert_eq!(terms[1], Term::Literal(Literal::lang("x", "en")));
        assert_eq!(terms[2], Term::blank("b0"));
    }

    #[test]
    fn non_iri_subject_rejected() {
        let c = SparqlConnector::new("http://127.0.0.1:9/sparql");
        let err = c.fetch_hops(&Term::blank("b"), Direction::Forward).unwrap_err();
        assert!(matches!(err, ConnectorError::NotAnIri(_)));
        assert_eq!(c.requests_issued(), 0);
    }
}
