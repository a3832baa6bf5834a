//! Synthetic topical corpus with one planted co-occurring pair.
//!
//! Every sentence draws its words from a single topic. The planted tokens
//! `x` and `y` always appear together, inside sentences of their own topic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedSpec {
    pub sentences: usize,
    /// Topic words per sentence, before the pair is inserted.
    pub length: usize,
    pub topics: usize,
    pub words_per_topic: usize,
    /// Fraction of sentences that belong to the planted pair's topic.
    pub planted_rate: f64,
    pub seed: u64,
}

impl Default for PlantedSpec {
    fn default() -> Self {
        PlantedSpec { sentences: 2000, length: 8, topics: 40, words_per_topic: 10, planted_rate: 0.05, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub sentences: Vec<Vec<String>>,
    /// Tokens that always occur next to each other.
    pub pair: (String, String),
    /// Background topic words, `t{topic}_{word}`.
    pub fillers: Vec<String>,
}

pub fn planted_corpus(spec: &PlantedSpec) -> PlantedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let word = |topic: usize, w: usize| format!("t{topic}_{w}");
    let fillers: Vec<String> =
        (0..spec.topics).flat_map(|t| (0..spec.words_per_topic).map(move |w| word(t, w))).collect();
    let pair = ("x".to_string(), "y".to_string());
    let sentences = (0..spec.sentences)
        .map(|_| {
            let planted = rng.gen_bool(spec.planted_rate);
            // The pair's topic is one past the background topics.
            let topic = if planted { spec.topics } else { rng.gen_range(0..spec.topics) };
            let mut s: Vec<String> =
                (0..spec.length).map(|_| word(topic, rng.gen_range(0..spec.words_per_topic))).collect();
            if planted {
                let at = rng.gen_range(0..=s.len());
                s.insert(at, pair.1.clone());
                s.insert(at, pair.0.clone());
            }
            s
        })
        .collect();
    PlantedCorpus { sentences, pair, fillers }
}
