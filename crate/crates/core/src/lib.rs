//! Walk-based knowledge graph embeddings.
//!
//! The pipeline loads an RDF graph (an N-Triples file or a SPARQL endpoint),
//! extracts walks rooted at a set of seed entities, trains skip-gram or CBOW
//! vectors over the walk corpus, and collects literal values reachable along
//! fixed predicate paths.

pub mod embedder;
pub mod graph;
pub mod literals;
pub mod parallel;
pub mod rdf_io;
pub mod rng;
pub mod sampler;
pub mod transformer;
pub mod walker;

pub use embedder::{EmbeddingModel, Hyperparams, TrainingMode};
pub use graph::{Direction, HopSource, KnowledgeGraph, RemoteGraph};
pub use literals::{extract_literals, LiteralPath, LiteralResult, LiteralTable, LiteralValue};
pub use rdf_io::{Literal, Term, Triple};
pub use rng::RandomSource;
pub use sampler::{FittedSampler, SamplerModel, SamplerStrategy};
pub use transformer::{fit_transform, FitResult, PipelineConfig, PipelineError, WalkerSpec};
pub use walker::{Walk, WalkStrategy, WalkerConfig};
