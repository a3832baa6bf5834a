//! Word2Vec-style training over the walk corpus.
//!
//! Skip-gram predicts each context token from the center token, CBOW predicts
//! the center from the mean of its context; both use negative sampling.

mod export;
pub mod sgns;
mod train;
mod vocab;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use export::{read_word2vec_text, write_word2vec_text};
pub use train::train;
pub use vocab::{build_vocab, Corpus, Vocab};

#[derive(Debug, Error, PartialEq)]
pub enum EmbedError {
    #[error("embedder configuration: {0}")]
    Config(String),
    #[error("training diverged in epoch {epoch}: loss is not finite")]
    Diverged { epoch: usize },
    #[error("token {0:?} is not in the vocabulary")]
    UnknownToken(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrainingMode {
    SkipGram,
    Cbow,
}

impl fmt::Display for TrainingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrainingMode::SkipGram => "skipgram",
            TrainingMode::Cbow => "cbow",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Hyperparams {
    pub mode: TrainingMode,
    pub dimension: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    /// Defaults to 0.025 for skip-gram and 0.05 for CBOW.
    pub initial_lr: Option<f64>,
    pub min_count: u64,
    /// Subsampling threshold for frequent tokens; 0 disables subsampling.
    pub subsample_t: f64,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            mode: TrainingMode::SkipGram,
            dimension: 100,
            window: 5,
            negatives: 5,
            epochs: 10,
            initial_lr: None,
            min_count: 1,
            subsample_t: 1e-3,
            seed: 0,
        }
    }
}

impl Hyperparams {
    pub fn learning_rate(&self) -> f64 {
        self.initial_lr.unwrap_or(match self.mode {
            TrainingMode::SkipGram => 0.025,
            TrainingMode::Cbow => 0.05,
        })
    }

    pub fn validate(&self) -> Result<(), EmbedError> {
        let bad = |what: &str| Err(EmbedError::Config(what.to_owned()));
        if self.dimension == 0 {
            return bad("dimension must be positive");
        }
        if self.window == 0 {
            return bad("window must be positive");
        }
        if self.epochs == 0 {
            return bad("epochs must be positive");
        }
        if !(self.learning_rate() > 0.0 && self.learning_rate().is_finite()) {
            return bad("learning rate must be positive");
        }
        if !(self.subsample_t >= 0.0 && self.subsample_t.is_finite()) {
            return bad("subsampling threshold must be non-negative");
        }
        Ok(())
    }
}

/// Trained vectors. Rows follow the vocabulary's index order.
#[derive(Debug, Clone)]
pub struct EmbeddingModel {
    pub vocab: Vocab,
    pub dimension: usize,
    pub hyperparams: Hyperparams,
    pub(crate) input: Vec<f32>,
    pub(crate) output: Vec<f32>,
    /// Mean loss per training example, one entry per epoch.
    pub epoch_losses: Vec<f64>,
}

impl EmbeddingModel {
    pub fn get_vector(&self, token: &str) -> Result<&[f32], EmbedError> {
        let i = self.vocab.index_of(token).ok_or_else(|| EmbedError::UnknownToken(token.to_owned()))?;
        Ok(self.row(i))
    }

    pub fn row(&self, index: u32) -> &[f32] {
        let start = index as usize * self.dimension;
        &self.input[start..start + self.dimension]
    }

    pub fn output_row(&self, index: u32) -> &[f32] {
        let start = index as usize * self.dimension;
        &self.output[start..start + self.dimension]
    }

    pub fn contains(&self, token: &str) -> bool {
        self.vocab.index_of(token).is_some()
    }

    pub fn cosine(&self, a: &str, b: &str) -> Result<f64, EmbedError> {
        Ok(cosine(self.get_vector(a)?, self.get_vector(b)?))
    }
}

pub fn cosine(a: &[f32], b: &[f32]) -> f64 {
    let (mut ab, mut aa, mut bb) = (0.0f64, 0.0f64, 0.0f64);
    for (&x, &y) in a.iter().zip(b) {
        ab += x as f64 * y as f64;
        aa += x as f64 * x as f64;
        bb += y as f64 * y as f64;
    }
    if aa == 0.0 || bb == 0.0 {
        0.0
    } else {
        ab / (aa.sqrt() * bb.sqrt())
    }
}
