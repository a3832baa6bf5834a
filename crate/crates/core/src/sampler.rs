//! Edge-weight samplers that bias next-hop selection during walk extraction.
//!
//! A [`SamplerModel`] names a weighting strategy; fitting it against a
//! [`KnowledgeGraph`] collects the statistics that strategy needs and
//! precomputes per-vertex cumulative weights for both directions.
//!
//! Weights are always computed for the underlying triple `(s, p, o)`, also
//! when a reverse walk traverses it from `o` to `s`.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Direction, KnowledgeGraph, PredicateId, VertexId};
use crate::rdf_io::Term;

pub const DEFAULT_PAGERANK_ALPHA: f64 = 0.85;
const PAGERANK_TOLERANCE: f64 = 1e-10;
const PAGERANK_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Error, PartialEq)]
pub enum SamplerError {
    #[error("hop {0} is outside the fitted sampler's domain")]
    UnfittedDomain(String),
    #[error("damping factor must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerStrategy {
    Uniform,
    /// Frequency of the hop's predicate.
    PredFreq,
    /// In-degree of the hop's object.
    ObjFreq,
    /// Frequency of the (predicate, object) pair.
    PredObjFreq,
    /// PageRank score of the hop's object.
    PageRank,
}

impl SamplerStrategy {
    pub const ALL: [SamplerStrategy; 5] = [
        SamplerStrategy::Uniform,
        SamplerStrategy::PredFreq,
        SamplerStrategy::ObjFreq,
        SamplerStrategy::PredObjFreq,
        SamplerStrategy::PageRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerStrategy::Uniform => "uniform",
            SamplerStrategy::PredFreq => "predfreq",
            SamplerStrategy::ObjFreq => "objfreq",
            SamplerStrategy::PredObjFreq => "predobjfreq",
            SamplerStrategy::PageRank => "pagerank",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Unfitted sampler configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerModel {
    pub strategy: SamplerStrategy,
    /// Map every weight `w` to `1 / (1 + w)`, favoring rare edges.
    #[serde(default)]
    pub inverse: bool,
    /// PageRank damping factor; ignored by the other strategies.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    DEFAULT_PAGERANK_ALPHA
}

impl SamplerModel {
    pub fn new(strategy: SamplerStrategy) -> Self {
        SamplerModel { strategy, inverse: false, alpha: DEFAULT_PAGERANK_ALPHA }
    }

    pub fn uniform() -> Self {
        Self::new(SamplerStrategy::Uniform)
    }

    pub fn page_rank(alpha: f64) -> Self {
        SamplerModel { alpha, ..Self::new(SamplerStrategy::PageRank) }
    }

    pub fn inverted(self) -> Self {
        SamplerModel { inverse: true, ..self }
    }

    pub fn fit(&self, g: &KnowledgeGraph) -> Result<FittedSampler, SamplerError> {
        if self.strategy == SamplerStrategy::PageRank && !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(SamplerError::InvalidAlpha(self.alpha));
        }
        let stats = match self.strategy {
            SamplerStrategy::Uniform => Stats::Uniform,
            SamplerStrategy::PredFreq => {
                let mut counts = vec![0u64; g.predicate_count()];
                for (_, hop) in g.edges() {
                    counts[hop.predicate as usize] += 1;
                }
                Stats::Predicate(counts)
            }
            SamplerStrategy::ObjFreq => Stats::Object(
                (0..g.vertex_count() as VertexId).map(|v| g.hops_of(v, Direction::Reverse).len() as u64).collect(),
            ),
            SamplerStrategy::PredObjFreq => {
                let mut counts: HashMap<(PredicateId, VertexId), u64> = HashMap::new();
                for (_, hop) in g.edges() {
                    *counts.entry((hop.predicate, hop.target)).or_default() += 1;
                }
                Stats::PredicateObject(counts)
            }
            SamplerStrategy::PageRank => Stats::PageRank(page_rank(g, self.alpha)),
        };
        let mut fitted = FittedSampler {
            model: *self,
            stats,
            forward: CumulativeWeights::default(),
            reverse: CumulativeWeights::default(),
        };
        fitted.forward = fitted.cumulative(g, Direction::Forward)?;
        fitted.reverse = fitted.cumulative(g, Direction::Reverse)?;
        Ok(fitted)
    }
}

impl Default for SamplerModel {
    fn default() -> Self {
        Self::uniform()
    }
}

impl fmt::Display for SamplerModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.strategy.name())?;
        let mut params = Vec::new();
        if self.strategy == SamplerStrategy::PageRank {
            params.push(format!("alpha={}", self.alpha));
        }
        if self.inverse {
            params.push("inverse=true".to_owned());
        }
        if !params.is_empty() {
            write!(f, ":{}", params.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Stats {
    Uniform,
    Predicate(Vec<u64>),
    Object(Vec<u64>),
    PredicateObject(HashMap<(PredicateId, VertexId), u64>),
    PageRank(Vec<f64>),
}

/// Per-vertex running sums of hop weights, laid out like the graph's
/// adjacency.
#[derive(Debug, Clone, Default)]
struct CumulativeWeights {
    offsets: Vec<usize>,
    sums: Vec<f64>,
}

impl CumulativeWeights {
    fn of(&self, v: VertexId) -> &[f64] {
        let v = v as usize;
        match (self.offsets.get(v), self.offsets.get(v + 1)) {
            (Some(&a), Some(&b)) => &self.sums[a..b],
            _ => &[],
        }
    }
}

/// A sampler whose statistics have been collected from one graph.
#[derive(Debug, Clone)]
pub struct FittedSampler {
    model: SamplerModel,
    stats: Stats,
    forward: CumulativeWeights,
    reverse: CumulativeWeights,
}

impl FittedSampler {
    pub fn model(&self) -> &SamplerModel {
        &self.model
    }

    /// PageRank scores indexed by vertex id, when this is a PageRank sampler.
    pub fn page_rank_scores(&self) -> Option<&[f64]> {
        match &self.stats {
            Stats::PageRank(scores) => Some(scores),
            _ => None,
        }
    }

    /// Predicate frequencies by predicate IRI, when this is a PredFreq sampler.
    pub fn predicate_frequencies(&self, g: &KnowledgeGraph) -> Option<HashMap<String, u64>> {
        match &self.stats {
            Stats::Predicate(counts) => Some(
                counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .filter_map(|(p, &c)| g.predicate_iri(p as PredicateId).map(|iri| (iri.to_owned(), c)))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Weight of the triple `(s, p, o)` given by ids.
    pub fn weight_ids(&self, s: VertexId, p: PredicateId, o: VertexId) -> Result<f64, SamplerError> {
        let raw = match &self.stats {
            Stats::Uniform => Some(1.0),
            Stats::Predicate(counts) => counts.get(p as usize).map(|&c| c as f64),
            Stats::Object(indegree) => indegree.get(o as usize).map(|&c| c as f64),
            Stats::PredicateObject(counts) => counts.get(&(p, o)).map(|&c| c as f64),
            Stats::PageRank(scores) => scores.get(o as usize).copied(),
        };
        match raw {
            Some(w) if w > 0.0 => Ok(if self.model.inverse { 1.0 / (1.0 + w) } else { w }),
            _ => Err(SamplerError::UnfittedDomain(format!("({s}, {p}, {o})"))),
        }
    }

    /// Weight of a triple given by terms.
    pub fn weigh(
        &self,
        g: &KnowledgeGraph,
        subject: &Term,
        predicate: &Term,
        object: &Term,
    ) -> Result<f64, SamplerError> {
        let ids = (g.vertex_id(subject), predicate.as_iri().and_then(|p| g.predicate_id(p)), g.vertex_id(object));
        match ids {
            (Some(s), Some(p), Some(o)) => self.weight_ids(s, p, o),
            _ => Err(SamplerError::UnfittedDomain(format!("({subject}, {predicate}, {object})"))),
        }
    }

    fn cumulative(&self, g: &KnowledgeGraph, direction: Direction) -> Result<CumulativeWeights, SamplerError> {
        let mut out = CumulativeWeights { offsets: Vec::with_capacity(g.vertex_count() + 1), sums: Vec::new() };
        out.offsets.push(0);
        let mut weights = Vec::new();
        for v in 0..g.vertex_count() as VertexId {
            weights.clear();
            for hop in g.hops_of(v, direction) {
                let (s, o) = match direction {
                    Direction::Forward => (v, hop.target),
                    Direction::Reverse => (hop.target, v),
                };
                weights.push(self.weight_ids(s, hop.predicate, o)?);
            }
            out.sums.extend(running_sums(&weights));
            out.offsets.push(out.sums.len());
        }
        Ok(out)
    }

    /// Index into `g.hops_of(v, direction)` drawn proportionally to weight.
    pub fn choose<R: Rng + ?Sized>(&self, v: VertexId, direction: Direction, rng: &mut R) -> Option<usize> {
        let sums = match direction {
            Direction::Forward => self.forward.of(v),
            Direction::Reverse => self.reverse.of(v),
        };
        pick(sums, rng)
    }

    /// Draws one `(predicate, neighbor)` hop of `v`; `None` when `v` has none.
    pub fn sample_hop<R: Rng + ?Sized>(
        &self,
        g: &KnowledgeGraph,
        v: &Term,
        direction: Direction,
        rng: &mut R,
    ) -> Option<(Term, Term)> {
        let id = g.vertex_id(v)?;
        let hop = g.hops_of(id, direction)[self.choose(id, direction, rng)?];
        Some((Term::iri(g.predicate_iri(hop.predicate)?), g.vertex(hop.target)?.clone()))
    }
}

fn running_sums(weights: &[f64]) -> impl Iterator<Item = f64> + '_ {
    weights.iter().scan(0.0, |acc, w| {
        *acc += w;
        Some(*acc)
    })
}

/// Inverts a running-sum table with one uniform draw.
fn pick<R: Rng + ?Sized>(sums: &[f64], rng: &mut R) -> Option<usize> {
    let total = *sums.last()?;
    let u = rng.gen::<f64>() * total;
    Some(sums.partition_point(|&c| c <= u).min(sums.len() - 1))
}

/// Draws an index with probability `weights[i] / sum(weights)`.
pub fn sample_weighted_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Option<usize> {
    let sums: Vec<f64> = running_sums(weights).collect();
    pick(&sums, rng)
}

/// PageRank over the walkable digraph with uniform teleport; mass on
/// dangling vertices is spread uniformly. Parallel edges count separately.
pub fn page_rank(g: &KnowledgeGraph, alpha: f64) -> Vec<f64> {
    let n = g.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    let out_degree: Vec<usize> = (0..n as VertexId).map(|v| g.hops_of(v, Direction::Forward).len()).collect();
    let mut rank = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..PAGERANK_MAX_ITERATIONS {
        let dangling: f64 = rank.iter().zip(&out_degree).filter(|(_, &d)| d == 0).map(|(r, _)| r).sum();
        let base = (alpha * dangling + (1.0 - alpha)) / n as f64;
        next.iter_mut().for_each(|x| *x = base);
        for (s, hop) in g.edges() {
            next[hop.target as usize] += alpha * rank[s as usize] / out_degree[s as usize] as f64;
        }
        let delta: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if delta < PAGERANK_TOLERANCE {
            break;
        }
    }
    rank
}
