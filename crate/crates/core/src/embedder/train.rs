use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use rand::Rng;

use super::sgns::{dot, score_term, NoiseDistribution};
use super::{Corpus, EmbedError, EmbeddingModel, Hyperparams, TrainingMode};
use crate::parallel;
use crate::rng::RandomSource;

const MIN_LR_FRACTION: f64 = 1e-4;
const INIT_STREAM: u64 = u64::MAX;

/// Row-major f32 matrix that many workers update without locks.
///
/// Elements are relaxed atomics: concurrent read-modify-write sequences may
/// lose updates (asynchronous SGD) but never tear a value.
struct SharedMatrix {
    data: Box<[AtomicU32]>,
    dim: usize,
}

impl SharedMatrix {
    fn from_vec(values: Vec<f32>, dim: usize) -> Self {
        SharedMatrix { data: values.into_iter().map(|v| AtomicU32::new(v.to_bits())).collect(), dim }
    }

    fn load(&self, row: u32, out: &mut [f32]) {
        let start = row as usize * self.dim;
        for (o, cell) in out.iter_mut().zip(&self.data[start..start + self.dim]) {
            *o = f32::from_bits(cell.load(Ordering::Relaxed));
        }
    }

    /// `row += scale * delta`
    fn add(&self, row: u32, delta: &[f32], scale: f32) {
        let start = row as usize * self.dim;
        for (cell, &d) in self.data[start..start + self.dim].iter().zip(delta) {
            let v = f32::from_bits(cell.load(Ordering::Relaxed)) + scale * d;
            cell.store(v.to_bits(), Ordering::Relaxed);
        }
    }

    fn into_vec(self) -> Vec<f32> {
        self.data.into_vec().into_iter().map(|c| f32::from_bits(c.into_inner())).collect()
    }
}

struct Trainer<'a> {
    h: &'a Hyperparams,
    input: SharedMatrix,
    output: SharedMatrix,
    noise: NoiseDistribution,
    keep_probability: Vec<f64>,
    processed: AtomicU64,
    planned: f64,
    lr0: f64,
}

#[derive(Default)]
struct ShardStats {
    loss: f64,
    examples: u64,
}

struct Scratch {
    hidden: Vec<f32>,
    target: Vec<f32>,
    error: Vec<f32>,
    kept: Vec<u32>,
    context: Vec<u32>,
}

impl Trainer<'_> {
    fn learning_rate(&self) -> f32 {
        let done = self.processed.load(Ordering::Relaxed) as f64 / self.planned;
        (self.lr0 * (1.0 - done).max(MIN_LR_FRACTION)) as f32
    }

    /// One negative-sampling update for `hidden` against `positive` plus
    /// drawn negatives. Accumulates the hidden-layer error into `s.error`.
    fn example(&self, positive: u32, lr: f32, rng: &mut RandomSource, s: &mut Scratch, stats: &mut ShardStats) {
        s.error.iter_mut().for_each(|e| *e = 0.0);
        let mut loss = 0.0f64;
        for k in 0..=self.h.negatives {
            let (target, is_positive) = if k == 0 {
                (positive, true)
            } else {
                let n = self.noise.sample(rng);
                if n == positive {
                    continue;
                }
                (n, false)
            };
            self.output.load(target, &mut s.target);
            let (l, coeff) = score_term(dot(&s.hidden, &s.target), is_positive);
            loss += l as f64;
            for (e, &t) in s.error.iter_mut().zip(&s.target) {
                *e += coeff * t;
            }
            self.output.add(target, &s.hidden, -lr * coeff);
        }
        stats.loss += loss;
        stats.examples += 1;
    }

    fn sentence(&self, sentence: &[u32], rng: &mut RandomSource, s: &mut Scratch, stats: &mut ShardStats) {
        s.kept.clear();
        for &w in sentence {
            let p = self.keep_probability[w as usize];
            if p >= 1.0 || rng.gen::<f64>() < p {
                s.kept.push(w);
            }
        }
        let lr = self.learning_rate();
        let kept = std::mem::take(&mut s.kept);
        for (i, &center) in kept.iter().enumerate() {
            let reach = rng.gen_range(1..=self.h.window);
            let lo = i.saturating_sub(reach);
            let hi = (i + reach).min(kept.len() - 1);
            s.context.clear();
            s.context.extend((lo..=hi).filter(|&j| j != i).map(|j| kept[j]));
            if s.context.is_empty() {
                continue;
            }
            match self.h.mode {
                TrainingMode::SkipGram => {
                    for c in 0..s.context.len() {
                        let context = s.context[c];
                        self.input.load(center, &mut s.hidden);
                        self.example(context, lr, rng, s, stats);
                        self.input.add(center, &s.error, -lr);
                    }
                }
                TrainingMode::Cbow => {
                    s.hidden.iter_mut().for_each(|x| *x = 0.0);
                    for &c in &s.context {
                        self.input.load(c, &mut s.target);
                        for (h, &t) in s.hidden.iter_mut().zip(&s.target) {
                            *h += t;
                        }
                    }
                    let inv = 1.0 / s.context.len() as f32;
                    s.hidden.iter_mut().for_each(|x| *x *= inv);
                    self.example(center, lr, rng, s, stats);
                    for c in 0..s.context.len() {
                        self.input.add(s.context[c], &s.error, -lr * inv);
                    }
                }
            }
        }
        s.kept = kept;
        self.processed.fetch_add(sentence.len() as u64, Ordering::Relaxed);
    }

    fn shard(&self, sentences: &[Vec<u32>], rng: &mut RandomSource) -> ShardStats {
        let dim = self.h.dimension;
        let mut scratch = Scratch {
            hidden: vec![0.0; dim],
            target: vec![0.0; dim],
            error: vec![0.0; dim],
            kept: Vec::new(),
            context: Vec::new(),
        };
        let mut stats = ShardStats::default();
        for sentence in sentences {
            self.sentence(sentence, rng, &mut scratch, &mut stats);
        }
        stats
    }
}

/// Trains input and output vectors over `corpus`.
///
/// With one worker the result is a pure function of the corpus and the
/// hyperparameters. With more, workers share the parameter matrices without
/// synchronization and results vary from run to run.
pub fn train(corpus: &Corpus, h: &Hyperparams, workers: usize) -> Result<EmbeddingModel, EmbedError> {
    h.validate()?;
    let vocab_len = corpus.vocab.len();
    if vocab_len < 2 {
        return Err(EmbedError::Config(format!("need at least 2 vocabulary tokens, have {vocab_len}")));
    }
    let dim = h.dimension;
    let mut init = RandomSource::new(h.seed, INIT_STREAM);
    let half_width = 0.5 / dim as f32;
    let input: Vec<f32> = (0..vocab_len * dim).map(|_| init.gen_range(-half_width..half_width)).collect();

    let total = corpus.total_tokens as f64;
    let keep_probability = corpus
        .vocab
        .counts()
        .iter()
        .map(|&c| {
            if h.subsample_t <= 0.0 {
                return 1.0;
            }
            let scaled = h.subsample_t * total;
            ((c as f64 / scaled).sqrt() + 1.0) * scaled / c as f64
        })
        .collect();

    let trainer = Trainer {
        h,
        input: SharedMatrix::from_vec(input, dim),
        output: SharedMatrix::from_vec(vec![0.0; vocab_len * dim], dim),
        noise: NoiseDistribution::new(corpus.vocab.counts()),
        keep_probability,
        processed: AtomicU64::new(0),
        planned: (h.epochs as f64 * total).max(1.0),
        lr0: h.learning_rate(),
    };

    let workers = workers.max(1);
    let chunk = corpus.sentences.len().div_ceil(workers).max(1);
    let shards: Vec<&[Vec<u32>]> = corpus.sentences.chunks(chunk).collect();
    let mut epoch_losses = Vec::with_capacity(h.epochs);
    for epoch in 0..h.epochs {
        let stats = parallel::map_indexed(&shards, workers, |w, shard| {
            let mut rng = RandomSource::new(h.seed, ((epoch as u64) << 32) | w as u64);
            trainer.shard(shard, &mut rng)
        });
        let (loss, examples) = stats.iter().fold((0.0, 0u64), |(l, n), s| (l + s.loss, n + s.examples));
        let mean = if examples == 0 { 0.0 } else { loss / examples as f64 };
        if !mean.is_finite() {
            return Err(EmbedError::Diverged { epoch: epoch + 1 });
        }
        log::debug!("epoch={} loss={mean:.6} examples={examples}", epoch + 1);
        epoch_losses.push(mean);
    }

    let Trainer { input, output, .. } = trainer;
    let input = input.into_vec();
    if input.iter().any(|x| !x.is_finite()) {
        return Err(EmbedError::Diverged { epoch: h.epochs });
    }
    Ok(EmbeddingModel {
        vocab: corpus.vocab.clone(),
        dimension: dim,
        hyperparams: h.clone(),
        input,
        output: output.into_vec(),
        epoch_losses,
    })
}
