//! Test support for kgstroll: reference oracles, data generators and a stub
//! SPARQL endpoint.
//!
//! Nothing here links against the crate under test. Graphs are plain
//! [`RawTriple`] values that tests render to N-Triples or serve through
//! [`StubSparqlServer`], so every oracle is an independent reimplementation.

pub mod corpus;
pub mod data;
pub mod mutag;
pub mod ntriples;
pub mod oracle;
pub mod stats;
pub mod stub;

pub use data::{random_triples, to_ntriples, RandomGraphSpec, RawTerm, RawTriple};
pub use oracle::{oracle_enumerate_walks, oracle_pagerank};
pub use stub::StubSparqlServer;
