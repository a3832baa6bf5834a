mod common;

use std::collections::HashMap;

use common::graph;
use kgstroll::sampler::page_rank;
use kgstroll::{Direction, KnowledgeGraph, RandomSource, SamplerModel, SamplerStrategy};
use kgstroll_testkit::stats::chi_square;
use kgstroll_testkit::{oracle_pagerank, random_triples, RandomGraphSpec, RawTriple};

/// Weight of each forward hop of `v` computed from the raw triples alone.
fn expected_weights(raw: &[RawTriple], g: &KnowledgeGraph, v: u32, model: &SamplerModel) -> Vec<f64> {
    let walkable: Vec<&RawTriple> = raw.iter().filter(|t| !t.o.is_literal()).collect();
    let mut pred = HashMap::new();
    let mut indeg = HashMap::new();
    let mut pred_obj = HashMap::new();
    for t in &walkable {
        *pred.entry(t.p.clone()).or_insert(0.0) += 1.0;
        *indeg.entry(t.o.token()).or_insert(0.0) += 1.0;
        *pred_obj.entry((t.p.clone(), t.o.token())).or_insert(0.0) += 1.0;
    }
    let pr = oracle_pagerank(raw, &[], model.alpha, 300);
    g.hops_of(v, Direction::Forward)
        .iter()
        .map(|h| {
            let p = g.predicate_iri(h.predicate).unwrap().to_string();
            let o = g.vertex(h.target).unwrap().token();
            let w = match model.strategy {
                SamplerStrategy::Uniform => 1.0,
                SamplerStrategy::PredFreq => pred[&p],
                SamplerStrategy::ObjFreq => indeg[&o],
                SamplerStrategy::PredObjFreq => pred_obj[&(p, o)],
                SamplerStrategy::PageRank => pr[&o],
            };
            if model.inverse {
                1.0 / (1.0 + w)
            } else {
                w
            }
        })
        .collect()
}

#[test]
fn draws_fit_weight_proportions() {
    let raw = random_triples(&RandomGraphSpec {
        vertices: 25,
        edges: 110,
        predicate_alphabet: 3,
        literal_fraction: 0.0,
        seed: 11,
    });
    let g = graph(&raw, &[]);
    let vertices: Vec<u32> =
        (0..g.vertex_count() as u32).filter(|&v| g.hops_of(v, Direction::Forward).len() >= 3).take(4).collect();
    assert_eq!(vertices.len(), 4);
    for strategy in SamplerStrategy::ALL {
        for inverse in [false, true] {
            let model = SamplerModel { inverse, ..SamplerModel::new(strategy) };
            let fitted = model.fit(&g).unwrap();
            for &v in &vertices {
                let weights = expected_weights(&raw, &g, v, &model);
                let mut counts = vec![0u64; weights.len()];
                let mut rng = RandomSource::new(7, v as u64);
                for _ in 0..20_000 {
                    counts[fitted.choose(v, Direction::Forward, &mut rng).unwrap()] += 1;
                }
                let r = chi_square(&counts, &weights);
                assert!(r.p_value > 0.001, "{model} vertex {v}: {r:?}");
            }
        }
    }
}

#[test]
fn three_to_one_split() {
    let raw = [
        RawTriple::iris("http://v", "http://p", "http://x"),
        RawTriple::iris("http://v", "http://q", "http://y"),
        RawTriple::iris("http://a", "http://p", "http://x"),
        RawTriple::iris("http://b", "http://p", "http://x"),
    ];
    let g = graph(&raw, &[]);
    let fitted = SamplerModel::new(SamplerStrategy::PredFreq).fit(&g).unwrap();
    let v = g.vertex_id(&kgstroll::Term::iri("http://v")).unwrap();
    let mut rng = RandomSource::new(1, 0);
    let hits = (0..100_000).filter(|_| fitted.choose(v, Direction::Forward, &mut rng) == Some(0)).count();
    assert!((hits as f64 / 1e5 - 0.75).abs() < 0.01, "{hits}");
}

#[test]
fn page_rank_agrees_with_dense_oracle() {
    for seed in 0..5 {
        let raw = random_triples(&RandomGraphSpec {
            vertices: 30,
            edges: 70,
            predicate_alphabet: 2,
            literal_fraction: 0.1,
            seed,
        });
        let skip = ["http://test/p1"];
        let g = graph(&raw, &skip);
        let ours = page_rank(&g, 0.85);
        let oracle = oracle_pagerank(&raw, &skip, 0.85, 300);
        assert_eq!(oracle.len(), g.vertex_count());
        let l1: f64 = (0..g.vertex_count()).map(|i| (ours[i] - oracle[&g.vertices()[i].token()]).abs()).sum();
        assert!(l1 < 1e-8, "seed {seed}: {l1}");
        assert!((ours.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn scaling_weights_keeps_draw_sequence() {
    // Predicate counts 2:1 and 4:2 give the same normalized distribution.
    let small = [
        RawTriple::iris("http://v", "http://p", "http://a"),
        RawTriple::iris("http://v", "http://q", "http://b"),
        RawTriple::iris("http://w", "http://p", "http://c"),
    ];
    let mut big = small.to_vec();
    big.push(RawTriple::iris("http://z", "http://p", "http://d"));
    big.push(RawTriple::iris("http://z", "http://p", "http://e"));
    big.push(RawTriple::iris("http://z", "http://q", "http://f"));
    let (gs, gb) = (graph(&small, &[]), graph(&big, &[]));
    let fs = SamplerModel::new(SamplerStrategy::PredFreq).fit(&gs).unwrap();
    let fb = SamplerModel::new(SamplerStrategy::PredFreq).fit(&gb).unwrap();
    let v = kgstroll::Term::iri("http://v");
    let (vs, vb) = (gs.vertex_id(&v).unwrap(), gb.vertex_id(&v).unwrap());
    let (mut r1, mut r2) = (RandomSource::new(3, 3), RandomSource::new(3, 3));
    for _ in 0..1000 {
        assert_eq!(fs.choose(vs, Direction::Forward, &mut r1), fb.choose(vb, Direction::Forward, &mut r2));
    }
}

#[test]
fn empty_graph_fit_reports_unfitted_domain() {
    let g = KnowledgeGraph::build(Vec::new(), Vec::<String>::new());
    let fitted = SamplerModel::new(SamplerStrategy::ObjFreq).fit(&g).unwrap();
    let t = kgstroll::Term::iri("http://a");
    assert!(fitted.weigh(&g, &t, &t, &t).is_err());
}
