//! RDF ingestion: terms, the N-Triples reader, and the remote SPARQL connector.

mod cache;
pub mod ntriples;
mod sparql;
mod term;

pub use cache::{CacheKey, ConnectorCache, DEFAULT_CACHE_CAPACITY};
pub use ntriples::{parse_lenient, parse_ntriples, parse_str, write_ntriples, NTriplesParser, ParseError};
pub use sparql::{bundled_hop_query, single_hop_query, ConnectorError, HopList, SparqlConnector, DEFAULT_BUNDLE_SIZE};
pub use term::{is_valid_iri, Literal, LiteralKind, Term, Triple};
