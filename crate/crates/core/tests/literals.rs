mod common;

use common::{graph, iri};
use kgstroll::rdf_io::SparqlConnector;
use kgstroll::{extract_literals, LiteralPath, LiteralResult, LiteralValue, RemoteGraph, Term};
use kgstroll_testkit::data::RawTerm;
use kgstroll_testkit::mutag::{mutag_graph, MutagGraph, Shape};
use kgstroll_testkit::{random_triples, RandomGraphSpec, RawTriple, StubSparqlServer};

/// Lexical forms reached along `path`, by recursion over the raw triples.
fn brute_force(raw: &[RawTriple], from: &str, path: &[String]) -> Vec<String> {
    let Some((head, rest)) = path.split_first() else { return Vec::new() };
    let mut out = Vec::new();
    for t in raw.iter().filter(|t| t.s == RawTerm::Iri(from.to_string()) && t.p == *head) {
        match (&t.o, rest.is_empty()) {
            (RawTerm::Literal { lexical, .. }, true) => out.push(lexical.clone()),
            (RawTerm::Iri(next), false) => out.extend(brute_force(raw, next, rest)),
            _ => {}
        }
    }
    out
}

fn lexical(v: &LiteralValue) -> String {
    match v {
        LiteralValue::Number(x) => x.to_string(),
        LiteralValue::Text(s) => s.clone(),
    }
}

#[test]
fn cardinality_matches_brute_force() {
    for seed in 0..8 {
        let raw = random_triples(&RandomGraphSpec {
            vertices: 12,
            edges: 80,
            predicate_alphabet: 2,
            literal_fraction: 0.4,
            seed,
        });
        let g = graph(&raw, &[]);
        let p = |i: usize| RandomGraphSpec::predicate(i);
        let paths: Vec<LiteralPath> = [vec![p(0)], vec![p(1), p(0)], vec![p(0), p(1), p(1)]]
            .into_iter()
            .map(|ps| LiteralPath::new(ps).unwrap())
            .collect();
        let seeds: Vec<Term> = (0..12).map(|i| iri(&RandomGraphSpec::vertex(i))).collect();
        let table = extract_literals(&g, &seeds, &paths, 3).unwrap();
        for (si, s) in seeds.iter().enumerate() {
            for (pi, path) in paths.iter().enumerate() {
                let want = brute_force(&raw, s.as_iri().unwrap(), &path.predicates);
                let got = table.get(si, pi);
                assert_eq!(got.len(), want.len(), "seed {s} path {path}");
                let got_lex: Vec<String> = got.values().iter().map(lexical).collect();
                let want_lex: Vec<String> = want.iter().map(|l| lexical(&LiteralValue::from_lexical(l))).collect();
                assert_eq!(got_lex, want_lex);
            }
        }
    }
}

#[test]
fn mutag_shapes() {
    let m = mutag_graph(12, 2);
    let g = graph(&m.triples, &[MutagGraph::is_mutagenic().as_str()]);
    let paths = [
        LiteralPath::new([MutagGraph::has_atom(), MutagGraph::charge()]).unwrap(),
        LiteralPath::new([MutagGraph::has_bond(), MutagGraph::in_bond()]).unwrap(),
    ];
    let seeds: Vec<Term> = m.molecules.iter().map(|s| iri(s)).collect();
    let table = extract_literals(&g, &seeds, &paths, 2).unwrap();
    let shape = |r: &LiteralResult| match r {
        LiteralResult::Missing => Shape::Missing,
        LiteralResult::Single(_) => Shape::Single,
        LiteralResult::Many(v) => Shape::Many(v.len()),
    };
    for i in 0..seeds.len() {
        assert_eq!(shape(table.get(i, 0)), m.charge_shapes[i]);
        assert_eq!(shape(table.get(i, 1)), m.bond_shapes[i]);
        let charges: Vec<f64> = table.get(i, 0).values().iter().map(|v| v.as_f64().unwrap()).collect();
        assert_eq!(charges, m.charges[i]);
    }
}

#[test]
fn remote_literals_equal_local() {
    let m = mutag_graph(9, 5);
    let skip = [MutagGraph::is_mutagenic()];
    let local = graph(&m.triples, &[skip[0].as_str()]);
    let server = StubSparqlServer::start(m.triples.clone()).unwrap();
    let remote = RemoteGraph::new(SparqlConnector::new(server.endpoint()), skip.clone());
    let paths = [
        LiteralPath::new([MutagGraph::has_atom(), MutagGraph::charge()]).unwrap(),
        LiteralPath::new([MutagGraph::has_bond(), MutagGraph::in_bond()]).unwrap(),
    ];
    let mut seeds: Vec<Term> = m.molecules.iter().map(|s| iri(s)).collect();
    seeds.push(iri("http://absent"));
    assert_eq!(
        extract_literals(&remote, &seeds, &paths, 4).unwrap(),
        extract_literals(&local, &seeds, &paths, 1).unwrap()
    );
}
