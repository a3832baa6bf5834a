//! Command-line flags, the equivalent TOML file, and their merge.

use std::path::PathBuf;

use clap::Parser;
use kgstroll::rdf_io::{DEFAULT_BUNDLE_SIZE, DEFAULT_CACHE_CAPACITY};
use kgstroll::{Hyperparams, LiteralPath, PipelineConfig, TrainingMode};
use serde::{Deserialize, Serialize};

use crate::grammar::WalkerArg;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "kgstroll", version, args_override_self = true)]
#[command(about = "Entity embeddings from random walks over an RDF graph")]
#[command(after_help = "Walks of all --walker strategies are concatenated into one corpus before training. \
Combining per-strategy embeddings or predictions is left to downstream code.")]
pub struct Flags {
    /// N-Triples file, or an http(s) SPARQL endpoint URL.
    #[arg(long)]
    pub input: Option<String>,
    /// File with one entity IRI per line.
    #[arg(long)]
    pub entities: Option<PathBuf>,
    /// Walk strategy, e.g. `random:depth=2,max=100,sampler=pagerank:alpha=0.85`. Repeatable.
    #[arg(long = "walker", value_name = "SPEC")]
    pub walkers: Vec<String>,
    /// Predicate IRI excluded from walks. Repeatable.
    #[arg(long = "skip-predicate", value_name = "IRI")]
    pub skip_predicates: Vec<String>,
    /// Comma-separated predicate chain ending in a literal. Repeatable.
    #[arg(long = "literal-path", value_name = "IRI,IRI,...")]
    pub literal_paths: Vec<String>,
    /// TOML file with the same keys as the long flags; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the merged configuration as TOML and exit.
    #[arg(long)]
    pub print_config: bool,
    /// Skip malformed N-Triples lines instead of failing.
    #[arg(long)]
    pub lenient: bool,
    /// Subjects per bundled SPARQL request.
    #[arg(long)]
    pub bundle_size: Option<usize>,
    /// Entries kept by the SPARQL hop cache.
    #[arg(long)]
    pub cache_capacity: Option<usize>,
    /// Sort the merged corpus before training.
    #[arg(long)]
    pub canonical_order: bool,

    /// skipgram or cbow.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<TrainingMode>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub dimension: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub negatives: Option<usize>,
    #[arg(long)]
    pub min_count: Option<u64>,
    /// Frequent-token subsampling threshold; 0 disables it.
    #[arg(long)]
    pub subsample: Option<f64>,
    /// Initial learning rate.
    #[arg(long)]
    pub lr: Option<f64>,
    /// Width of the walk extraction pool and of the trainer.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,

    /// Vectors in word2vec text format; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Literal table as JSON.
    #[arg(long)]
    pub literals_out: Option<PathBuf>,
    /// Walk corpus as TSV: strategy, root, space-separated tokens.
    #[arg(long)]
    pub walks_out: Option<PathBuf>,
}

fn parse_mode(text: &str) -> Result<TrainingMode, String> {
    match text {
        "skipgram" => Ok(TrainingMode::SkipGram),
        "cbow" => Ok(TrainingMode::Cbow),
        _ => Err(format!("expected skipgram or cbow, got {text:?}")),
    }
}

/// Every run setting. Serializes to the TOML accepted by `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub input: Option<String>,
    pub entities: Option<PathBuf>,
    pub walkers: Vec<String>,
    pub skip_predicates: Vec<String>,
    pub literal_paths: Vec<String>,
    pub lenient: bool,
    pub bundle_size: usize,
    pub cache_capacity: usize,
    pub canonical_order: bool,
    pub mode: TrainingMode,
    pub epochs: usize,
    pub dimension: usize,
    pub window: usize,
    pub negatives: usize,
    pub min_count: u64,
    pub subsample: f64,
    pub lr: Option<f64>,
    pub workers: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub literals_out: Option<PathBuf>,
    pub walks_out: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        let h = Hyperparams::default();
        CliConfig {
            input: None,
            entities: None,
            walkers: Vec::new(),
            skip_predicates: Vec::new(),
            literal_paths: Vec::new(),
            lenient: false,
            bundle_size: DEFAULT_BUNDLE_SIZE,
            cache_capacity: DEFAULT_CACHE_CAPACITY,
            canonical_order: false,
            mode: h.mode,
            epochs: h.epochs,
            dimension: h.dimension,
            window: h.window,
            negatives: h.negatives,
            min_count: h.min_count,
            subsample: h.subsample_t,
            lr: h.initial_lr,
            workers: 1,
            seed: h.seed,
            out: None,
            literals_out: None,
            walks_out: None,
        }
    }
}

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    File(PathBuf),
    Endpoint(String),
}

impl CliConfig {
    /// Starts from `--config` (if any) and overlays the flags given.
    pub fn from_flags(flags: &Flags) -> Result<Self, CliError> {
        let mut c = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => CliConfig::default(),
        };
        fn set<T: Clone>(slot: &mut T, flag: &Option<T>) {
            if let Some(v) = flag {
                *slot = v.clone();
            }
        }
        fn set_opt<T: Clone>(slot: &mut Option<T>, flag: &Option<T>) {
            if flag.is_some() {
                *slot = flag.clone();
            }
        }
        fn set_list(slot: &mut Vec<String>, flag: &[String]) {
            if !flag.is_empty() {
                *slot = flag.to_vec();
            }
        }
        set_opt(&mut c.input, &flags.input);
        set_opt(&mut c.entities, &flags.entities);
        set_list(&mut c.walkers, &flags.walkers);
        set_list(&mut c.skip_predicates, &flags.skip_predicates);
        set_list(&mut c.literal_paths, &flags.literal_paths);
        c.lenient |= flags.lenient;
        c.canonical_order |= flags.canonical_order;
        set(&mut c.bundle_size, &flags.bundle_size);
        set(&mut c.cache_capacity, &flags.cache_capacity);
        set(&mut c.mode, &flags.mode);
        set(&mut c.epochs, &flags.epochs);
        set(&mut c.dimension, &flags.dimension);
        set(&mut c.window, &flags.window);
        set(&mut c.negatives, &flags.negatives);
        set(&mut c.min_count, &flags.min_count);
        set(&mut c.subsample, &flags.subsample);
        set_opt(&mut c.lr, &flags.lr);
        set(&mut c.workers, &flags.workers);
        set(&mut c.seed, &flags.seed);
        set_opt(&mut c.out, &flags.out);
        set_opt(&mut c.literals_out, &flags.literals_out);
        set_opt(&mut c.walks_out, &flags.walks_out);
        c.walkers = c.parsed_walkers()?.iter().map(ToString::to_string).collect();
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn input(&self) -> Result<Input, CliError> {
        let input = self.input.as_deref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
        if input.starts_with("http://") || input.starts_with("https://") {
            Ok(Input::Endpoint(input.to_owned()))
        } else {
            Ok(Input::File(PathBuf::from(input)))
        }
    }

    pub fn parsed_walkers(&self) -> Result<Vec<WalkerArg>, CliError> {
        self.walkers.iter().map(|w| w.parse().map_err(|e| CliError::Config(format!("--walker {w:?}: {e}")))).collect()
    }

    pub fn parsed_literal_paths(&self) -> Result<Vec<LiteralPath>, CliError> {
        self.literal_paths
            .iter()
            .map(|p| {
                LiteralPath::new(p.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from))
                    .ok_or_else(|| CliError::Config(format!("--literal-path {p:?} is empty")))
            })
            .collect()
    }

    pub fn hyperparams(&self) -> Hyperparams {
        Hyperparams {
            mode: self.mode,
            dimension: self.dimension,
            window: self.window,
            negatives: self.negatives,
            epochs: self.epochs,
            initial_lr: self.lr,
            min_count: self.min_count,
            subsample_t: self.subsample,
            seed: self.seed,
        }
    }

    /// Checks required settings and builds the pipeline configuration.
    pub fn pipeline(&self) -> Result<PipelineConfig, CliError> {
        if self.entities.is_none() {
            return Err(CliError::Usage("--entities is required".into()));
        }
        self.input()?;
        if self.walkers.is_empty() {
            return Err(CliError::Usage("at least one --walker is required".into()));
        }
        if self.workers == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        if self.bundle_size == 0 || self.cache_capacity == 0 {
            return Err(CliError::Config("--bundle-size and --cache-capacity must be positive".into()));
        }
        let walkers = self.parsed_walkers()?.into_iter().map(|w| w.into_spec(self.seed)).collect();
        let mut cfg = PipelineConfig::new(walkers, self.hyperparams());
        cfg.literal_paths = self.parsed_literal_paths()?;
        cfg.canonical_corpus_order = self.canonical_order;
        cfg.workers = self.workers;
        cfg.validate(&self.skip_predicates.iter().cloned().collect()).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }
}
