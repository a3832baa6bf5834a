use std::collections::HashMap;
use std::sync::Arc;

use super::EmbedError;
use crate::walker::Walk;

/// Token vocabulary with dense indices ordered by descending count, ties
/// broken lexicographically.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Vocab {
    tokens: Vec<Arc<str>>,
    counts: Vec<u64>,
    index: HashMap<Arc<str>, u32>,
}

impl Vocab {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn index_of(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, index: u32) -> &str {
        &self.tokens[index as usize]
    }

    pub fn count(&self, index: u32) -> u64 {
        self.counts[index as usize]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| &**t)
    }
}

/// Sentences re-encoded as vocabulary indices. Tokens under `min_count` are
/// dropped from the sentences and never trained.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub sentences: Vec<Vec<u32>>,
    pub vocab: Vocab,
    /// Number of in-vocabulary token occurrences.
    pub total_tokens: u64,
}

impl Corpus {
    /// Builds a corpus from arbitrary token sentences.
    pub fn from_sentences<I, S, T>(sentences: I, min_count: u64) -> Result<Corpus, EmbedError>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut raw_counts: HashMap<Arc<str>, u64> = HashMap::new();
        let mut raw: Vec<Vec<Arc<str>>> = Vec::new();
        for sentence in sentences {
            let mut row = Vec::new();
            for t in sentence {
                let t = t.as_ref();
                let token = match raw_counts.get_key_value(t) {
                    Some((k, _)) => k.clone(),
                    None => Arc::from(t),
                };
                *raw_counts.entry(token.clone()).or_default() += 1;
                row.push(token);
            }
            raw.push(row);
        }
        let mut kept: Vec<(Arc<str>, u64)> = raw_counts.into_iter().filter(|(_, c)| *c >= min_count.max(1)).collect();
        if kept.is_empty() {
            return Err(EmbedError::Config(format!("no token occurs at least {min_count} times")));
        }
        kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let mut vocab = Vocab::default();
        for (i, (token, count)) in kept.into_iter().enumerate() {
            vocab.index.insert(token.clone(), i as u32);
            vocab.tokens.push(token);
            vocab.counts.push(count);
        }
        let sentences: Vec<Vec<u32>> =
            raw.iter().map(|s| s.iter().filter_map(|t| vocab.index_of(t)).collect()).collect();
        let total_tokens = vocab.counts.iter().sum();
        Ok(Corpus { sentences, vocab, total_tokens })
    }
}

/// Corpus over walk tokens; each walk is one sentence.
pub fn build_vocab(walks: &[Walk], min_count: u64) -> Result<Corpus, EmbedError> {
    Corpus::from_sentences(walks.iter().map(|w| w.tokens.iter()), min_count)
}
