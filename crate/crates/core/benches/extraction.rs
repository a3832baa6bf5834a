//! Sequential (one worker) against data-parallel extraction and training.
//! Build with `--no-default-features` to compare against the fallback path
//! where every width runs on the calling thread.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kgstroll::embedder::{train, Corpus};
use kgstroll::rdf_io::parse_str;
use kgstroll::walker::extract;
use kgstroll::{Hyperparams, KnowledgeGraph, SamplerModel, Term, WalkerConfig};
use kgstroll_testkit::{random_triples, to_ntriples, RandomGraphSpec};

fn fixture() -> (KnowledgeGraph, Vec<Term>) {
    let spec =
        RandomGraphSpec { vertices: 2000, edges: 12_000, predicate_alphabet: 8, literal_fraction: 0.05, seed: 1 };
    let triples = parse_str(&to_ntriples(&random_triples(&spec))).unwrap();
    let seeds = (0..500).map(|i| Term::iri(RandomGraphSpec::vertex(i))).collect();
    (KnowledgeGraph::build(triples, Vec::<String>::new()), seeds)
}

fn widths() -> Vec<usize> {
    let cores = std::thread::available_parallelism().map_or(4, |n| n.get());
    let mut w = vec![1, 2, 4, cores];
    w.sort_unstable();
    w.dedup();
    w
}

fn extraction(c: &mut Criterion) {
    let (g, seeds) = fixture();
    let sampler = SamplerModel::page_rank(0.85).fit(&g).unwrap();
    let exhaustive = WalkerConfig::random(3, None);
    let sampled = WalkerConfig::random(4, Some(100)).with_reverse(true);
    let mut group = c.benchmark_group("extraction");
    group.sample_size(10);
    for workers in widths() {
        group.bench_with_input(BenchmarkId::new("exhaustive", workers), &workers, |b, &w| {
            b.iter(|| black_box(extract(&g, &seeds, &exhaustive, None, w).unwrap().walks.len()))
        });
        group.bench_with_input(BenchmarkId::new("pagerank-sampled", workers), &workers, |b, &w| {
            b.iter(|| black_box(extract(&g, &seeds, &sampled, Some(&sampler), w).unwrap().walks.len()))
        });
    }
    group.finish();
}

fn training(c: &mut Criterion) {
    let (g, seeds) = fixture();
    let walks = extract(&g, &seeds, &WalkerConfig::random(4, Some(40)), None, 4).unwrap().walks;
    let corpus = Corpus::from_sentences(walks.iter().map(|w| w.tokens.iter()), 1).unwrap();
    let h = Hyperparams { dimension: 64, epochs: 2, ..Hyperparams::default() };
    let mut group = c.benchmark_group("training");
    group.sample_size(10);
    for workers in widths() {
        group.bench_with_input(BenchmarkId::new("skipgram", workers), &workers, |b, &w| {
            b.iter(|| black_box(train(&corpus, &h, w).unwrap().epoch_losses.len()))
        });
    }
    group.finish();
}

criterion_group!(benches, extraction, training);
criterion_main!(benches);
