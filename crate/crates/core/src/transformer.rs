//! End-to-end pipeline: fit samplers, extract walks per strategy, train on
//! the concatenated corpus, and collect literals.

use std::collections::{BTreeSet, HashSet};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedder::{self, EmbedError, EmbeddingModel, Hyperparams};
use crate::graph::{GraphError, HopSource};
use crate::literals::{extract_literals, LiteralPath, LiteralTable};
use crate::rdf_io::Term;
use crate::sampler::{FittedSampler, SamplerError, SamplerModel, SamplerStrategy};
use crate::walker::{self, Walk, WalkError, WalkerConfig};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("pipeline configuration: {0}")]
    Config(String),
    #[error("walker {index} ({walker}): {source}")]
    Walk {
        index: usize,
        walker: String,
        #[source]
        source: WalkError,
    },
    #[error("sampler for walker {index} ({sampler}): {source}")]
    Sampler {
        index: usize,
        sampler: String,
        #[source]
        source: SamplerError,
    },
    #[error("embedder on the corpus of [{strategies}]: {source}")]
    Embed {
        strategies: String,
        #[source]
        source: EmbedError,
    },
    #[error("literal extraction: {0}")]
    Literals(#[from] GraphError),
    #[error("none of the {0} seed entities is in the graph")]
    AllSeedsMissing(usize),
}

/// One walker strategy and its optional sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkerSpec {
    pub walker: WalkerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerModel>,
}

impl WalkerSpec {
    pub fn new(walker: WalkerConfig, sampler: Option<SamplerModel>) -> Self {
        WalkerSpec { walker, sampler }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub walkers: Vec<WalkerSpec>,
    #[serde(default)]
    pub hyperparams: Hyperparams,
    #[serde(default)]
    pub literal_paths: Vec<LiteralPath>,
    /// Sort the merged corpus before training so that the result does not
    /// depend on strategy order.
    #[serde(default)]
    pub canonical_corpus_order: bool,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_workers() -> usize {
    1
}

impl PipelineConfig {
    pub fn new(walkers: Vec<WalkerSpec>, hyperparams: Hyperparams) -> Self {
        PipelineConfig { walkers, hyperparams, literal_paths: Vec::new(), canonical_corpus_order: false, workers: 1 }
    }

    /// Checks the configuration; literal paths must avoid `skip`.
    pub fn validate(&self, skip: &BTreeSet<String>) -> Result<(), PipelineError> {
        if self.walkers.is_empty() {
            return Err(PipelineError::Config("at least one walker is required".into()));
        }
        if self.workers == 0 {
            return Err(PipelineError::Config("workers must be at least 1".into()));
        }
        for (index, spec) in self.walkers.iter().enumerate() {
            spec.walker.validate().map_err(|source| PipelineError::Walk {
                index,
                walker: spec.walker.to_string(),
                source,
            })?;
        }
        self.hyperparams
            .validate()
            .map_err(|source| PipelineError::Embed { strategies: self.strategy_names(), source })?;
        for path in &self.literal_paths {
            if path.predicates.is_empty() {
                return Err(PipelineError::Config("literal paths must be non-empty".into()));
            }
            if let Some(p) = path.predicates.iter().find(|p| skip.contains(*p)) {
                return Err(PipelineError::Config(format!("literal path {path} uses skipped predicate {p}")));
            }
        }
        Ok(())
    }

    fn strategy_names(&self) -> String {
        self.walkers.iter().map(|s| s.walker.to_string()).collect::<Vec<_>>().join("; ")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub walks_total: usize,
    pub walks_per_strategy: Vec<usize>,
    pub distinct_tokens: usize,
}

#[derive(Debug, Clone)]
pub struct FitResult {
    /// Seed vectors in seed order; seeds without walks are absent.
    pub embeddings: IndexMap<Term, Vec<f32>>,
    pub literals: LiteralTable,
    pub corpus_stats: CorpusStats,
    /// Seeds that produced no walk.
    pub missing: Vec<Term>,
    /// Per strategy, walk count per seed (aligned with the seed list).
    pub walks_per_seed: Vec<Vec<usize>>,
    pub model: EmbeddingModel,
    /// Walks of each strategy, in declared order.
    pub corpora: Vec<Vec<Walk>>,
}

impl FitResult {
    /// The merged training corpus in training order.
    pub fn walks(&self) -> impl Iterator<Item = &Walk> {
        self.corpora.iter().flatten()
    }
}

/// Walks of every strategy, concatenated in declared order.
pub struct Corpora {
    pub corpora: Vec<Vec<Walk>>,
    pub walks_per_seed: Vec<Vec<usize>>,
}

/// Runs step 1 and 2 of the pipeline: fits samplers and extracts walks.
pub fn extract_corpora<S: HopSource + ?Sized>(
    source: &S,
    seeds: &[Term],
    cfg: &PipelineConfig,
) -> Result<Corpora, PipelineError> {
    let mut out = Corpora { corpora: Vec::new(), walks_per_seed: Vec::new() };
    for (index, spec) in cfg.walkers.iter().enumerate() {
        let fitted = fit_sampler(source, index, spec)?;
        let extraction = walker::extract(source, seeds, &spec.walker, fitted.as_ref(), cfg.workers)
            .map_err(|source| PipelineError::Walk { index, walker: spec.walker.to_string(), source })?;
        log::info!(
            "strategy={index} walker={} walks={} seeds={}",
            spec.walker,
            extraction.walks.len(),
            seeds.len() - extraction.missing.len()
        );
        out.corpora.push(extraction.walks);
        out.walks_per_seed.push(extraction.walks_per_seed);
    }
    Ok(out)
}

fn fit_sampler<S: HopSource + ?Sized>(
    source: &S,
    index: usize,
    spec: &WalkerSpec,
) -> Result<Option<FittedSampler>, PipelineError> {
    let Some(model) = &spec.sampler else {
        return Ok(None);
    };
    match source.as_local() {
        Some(g) => model.fit(g).map(Some).map_err(|source| PipelineError::Sampler {
            index,
            sampler: model.to_string(),
            source,
        }),
        None if model.strategy == SamplerStrategy::Uniform => Ok(None),
        None => Err(PipelineError::Walk {
            index,
            walker: spec.walker.to_string(),
            source: WalkError::NeedsLocalGraph("a non-uniform sampler"),
        }),
    }
}

/// Fits the whole pipeline on `seeds` and returns their embeddings and
/// literals.
pub fn fit_transform<S: HopSource + ?Sized>(
    source: &S,
    seeds: &[Term],
    cfg: &PipelineConfig,
) -> Result<FitResult, PipelineError> {
    cfg.validate(source.skip_predicates())?;
    let Corpora { corpora, walks_per_seed } = extract_corpora(source, seeds, cfg)?;

    let missing: Vec<Term> = seeds
        .iter()
        .enumerate()
        .filter(|(i, _)| walks_per_seed.iter().all(|counts| counts[*i] == 0))
        .map(|(_, s)| s.clone())
        .collect();
    if missing.len() == seeds.len() {
        return Err(PipelineError::AllSeedsMissing(seeds.len()));
    }

    let mut training: Vec<&Walk> = corpora.iter().flatten().collect();
    if cfg.canonical_corpus_order {
        training.sort_by(|a, b| a.tokens.cmp(&b.tokens));
    }
    let embed_err = |source| PipelineError::Embed { strategies: cfg.strategy_names(), source };
    let corpus = embedder::Corpus::from_sentences(training.iter().map(|w| w.tokens.iter()), cfg.hyperparams.min_count)
        .map_err(embed_err)?;
    log::info!("corpus walks={} tokens={} vocabulary={}", training.len(), corpus.total_tokens, corpus.vocab.len());
    let model = embedder::train(&corpus, &cfg.hyperparams, cfg.workers).map_err(embed_err)?;
    for (epoch, loss) in model.epoch_losses.iter().enumerate() {
        log::info!("epoch={} loss={loss:.6}", epoch + 1);
    }

    let missing_set: HashSet<&Term> = missing.iter().collect();
    let embeddings: IndexMap<Term, Vec<f32>> = seeds
        .iter()
        .filter(|s| !missing_set.contains(s))
        .filter_map(|s| model.get_vector(&s.token()).ok().map(|v| (s.clone(), v.to_vec())))
        .collect();

    let literals = if cfg.literal_paths.is_empty() {
        LiteralTable { seeds: seeds.to_vec(), paths: Vec::new(), rows: vec![Vec::new(); seeds.len()] }
    } else {
        extract_literals(source, seeds, &cfg.literal_paths, cfg.workers)?
    };

    let walks_per_strategy: Vec<usize> = corpora.iter().map(Vec::len).collect();
    let corpus_stats = CorpusStats {
        walks_total: walks_per_strategy.iter().sum(),
        walks_per_strategy,
        distinct_tokens: corpus.vocab.len(),
    };
    Ok(FitResult { embeddings, literals, corpus_stats, missing, walks_per_seed, model, corpora })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::KnowledgeGraph;
    use crate::rdf_io::{Literal, Triple};

    fn iri(s: &str) -> Term {
        Term::iri(format!("http://ex/{s}"))
    }

    fn toy() -> KnowledgeGraph {
        let mut triples = Vec::new();
        for m in 0..6 {
            let mol = iri(&format!("m{m}"));
            for a in 0..(m % 3 + 1) {
                let atom = iri(&format!("m{m}a{a}"));
                triples.push(Triple::new(mol.clone(), iri("hasAtom"), atom.clone()).unwrap());
                triples.push(Triple::new(atom.clone(), iri("type"), iri(if a % 2 == 0 { "C" } else { "O" })).unwrap());
                triples
                    .push(Triple::new(atom, iri("charge"), Term::Literal(Literal::plain(format!("0.{a}")))).unwrap());
            }
            triples.push(Triple::new(mol, iri("isMutagenic"), iri(if m % 2 == 0 { "yes" } else { "no" })).unwrap());
        }
        KnowledgeGraph::build(triples, ["http://ex/isMutagenic"])
    }

    fn seeds() -> Vec<Term> {
        (0..6).map(|m| iri(&format!("m{m}"))).collect()
    }

    fn hp() -> Hyperparams {
        Hyperparams { dimension: 8, epochs: 2, seed: 1, ..Hyperparams::default() }
    }

    #[test]
    fn two_strategies_yield_one_vector_per_seed() {
        let g = toy();
        let mut cfg = PipelineConfig::new(
            vec![
                WalkerSpec::new(WalkerConfig::halk(2, None, 0.01), None),
                WalkerSpec::new(WalkerConfig::random(2, Some(100)), Some(SamplerModel::page_rank(0.85))),
            ],
            hp(),
        );
        cfg.literal_paths = vec![LiteralPath::new(["http://ex/hasAtom", "http://ex/charge"]).unwrap()];
        let r = fit_transform(&g, &seeds(), &cfg).unwrap();
        assert_eq!(r.corpus_stats.walks_per_strategy.len(), 2);
        assert_eq!(r.corpus_stats.walks_total, r.corpus_stats.walks_per_strategy.iter().sum::<usize>());
        assert_eq!(r.embeddings.len(), 6);
        assert!(r.embeddings.values().all(|v| v.len() == 8));
        assert!(r.walks().all(|w| w.tokens.iter().all(|t| &**t != "http://ex/isMutagenic")));
        assert!(r.literals.get(0, 0).len() == 1 && r.literals.get(1, 0).len() == 2);
    }

    #[test]
    fn duplicate_strategies_double_the_corpus() {
        let g = toy();
        let one = WalkerSpec::new(WalkerConfig::random(2, None), None);
        let single = fit_transform(&g, &seeds(), &PipelineConfig::new(vec![one.clone()], hp())).unwrap();
        let double = fit_transform(&g, &seeds(), &PipelineConfig::new(vec![one.clone(), one], hp())).unwrap();
        assert_eq!(double.corpus_stats.walks_total, 2 * single.corpus_stats.walks_total);
    }

    #[test]
    fn canonical_order_makes_strategy_order_irrelevant() {
        let g = toy();
        let a = WalkerSpec::new(WalkerConfig::random(1, None), None);
        let b = WalkerSpec::new(WalkerConfig::random(2, Some(5)).with_seed(3), None);
        let run = |walkers| {
            let mut cfg = PipelineConfig::new(walkers, hp());
            cfg.canonical_corpus_order = true;
            fit_transform(&g, &seeds(), &cfg).unwrap().embeddings
        };
        assert_eq!(run(vec![a.clone(), b.clone()]), run(vec![b, a]));
    }

    #[test]
    fn depth_zero_fails_in_the_embedder() {
        let g = toy();
        let cfg = PipelineConfig::new(vec![WalkerSpec::new(WalkerConfig::random(0, None), None)], hp());
        let one_seed = [iri("m0")];
        assert!(matches!(fit_transform(&g, &one_seed, &cfg), Err(PipelineError::Embed { .. })));
    }

    #[test]
    fn errors() {
        let g = toy();
        let cfg = PipelineConfig::new(vec![WalkerSpec::new(WalkerConfig::random(1, None), None)], hp());
        assert!(matches!(fit_transform(&g, &[iri("nowhere")], &cfg), Err(PipelineError::AllSeedsMissing(1))));
        let empty = PipelineConfig::new(Vec::new(), hp());
        assert!(matches!(fit_transform(&g, &seeds(), &empty), Err(PipelineError::Config(_))));
        let mut skipped = cfg.clone();
        skipped.literal_paths = vec![LiteralPath::new(["http://ex/isMutagenic"]).unwrap()];
        assert!(matches!(fit_transform(&g, &seeds(), &skipped), Err(PipelineError::Config(_))));
    }
}
