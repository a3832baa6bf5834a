//! Brute-force reference implementations.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::data::RawTriple;

type Adjacency = HashMap<String, Vec<(String, String)>>;

fn walkable<'a>(triples: &'a [RawTriple], skip: &'a [&str]) -> impl Iterator<Item = &'a RawTriple> {
    triples.iter().filter(move |t| !t.o.is_literal() && !skip.contains(&t.p.as_str()))
}

/// Every subject and non-literal object, skipped predicates included.
fn vertex_tokens(triples: &[RawTriple]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for t in triples {
        out.insert(t.s.token());
        if !t.o.is_literal() {
            out.insert(t.o.token());
        }
    }
    out
}

/// Token paths `[v, p1, v1, ...]` of at most `depth` hops, including `[v]`.
fn paths_from(adj: &Adjacency, v: &str, depth: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![v.to_owned()]];
    if depth == 0 {
        return out;
    }
    if let Some(hops) = adj.get(v) {
        for (p, next) in hops {
            for tail in paths_from(adj, next, depth - 1) {
                let mut path = vec![v.to_owned(), p.clone()];
                path.extend(tail);
                out.push(path);
            }
        }
    }
    out
}

/// All distinct walks of up to `depth` hops from `seed` (a walk token).
///
/// With `with_reverse`, each walk is an incoming path of up to `depth` hops
/// ending at the seed followed by an outgoing path of up to `depth` hops.
/// Literal objects and `skip` predicates are never traversed.
pub fn oracle_enumerate_walks(
    triples: &[RawTriple],
    skip: &[&str],
    seed: &str,
    depth: usize,
    with_reverse: bool,
) -> BTreeSet<Vec<String>> {
    if !vertex_tokens(triples).contains(seed) {
        return BTreeSet::new();
    }
    let mut out_adj: Adjacency = HashMap::new();
    let mut in_adj: Adjacency = HashMap::new();
    for t in walkable(triples, skip) {
        out_adj.entry(t.s.token()).or_default().push((t.p.clone(), t.o.token()));
        in_adj.entry(t.o.token()).or_default().push((t.p.clone(), t.s.token()));
    }
    let forward = paths_from(&out_adj, seed, depth);
    if !with_reverse {
        return forward.into_iter().collect();
    }
    let backward = paths_from(&in_adj, seed, depth);
    let mut out = BTreeSet::new();
    for b in &backward {
        for f in &forward {
            let mut walk: Vec<String> = b.iter().rev().cloned().collect();
            walk.extend(f.iter().skip(1).cloned());
            out.insert(walk);
        }
    }
    out
}

/// PageRank by `iters` rounds of dense power iteration over the walkable
/// digraph. Parallel edges count with multiplicity; dangling mass and
/// teleport are spread uniformly. Keys are vertex tokens.
pub fn oracle_pagerank(triples: &[RawTriple], skip: &[&str], alpha: f64, iters: usize) -> BTreeMap<String, f64> {
    let names: Vec<String> = vertex_tokens(triples).into_iter().collect();
    let n = names.len();
    if n == 0 {
        return BTreeMap::new();
    }
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    // counts[i][j]: number of edges i -> j
    let mut counts = vec![vec![0.0f64; n]; n];
    for t in walkable(triples, skip) {
        counts[index[t.s.token().as_str()]][index[t.o.token().as_str()]] += 1.0;
    }
    let out_degree: Vec<f64> = counts.iter().map(|row| row.iter().sum()).collect();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..iters {
        let dangling: f64 = (0..n).filter(|&i| out_degree[i] == 0.0).map(|i| x[i]).sum();
        let mut y = vec![(1.0 - alpha) / n as f64 + alpha * dangling / n as f64; n];
        for i in 0..n {
            if out_degree[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if counts[i][j] > 0.0 {
                    y[j] += alpha * x[i] * counts[i][j] / out_degree[i];
                }
            }
        }
        x = y;
    }
    names.into_iter().zip(x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::RawTerm;

    #[test]
    fn star_depth_one_has_three_walks() {
        let g = [RawTriple::iris("a", "p", "b"), RawTriple::iris("a", "q", "c")];
        let walks = oracle_enumerate_walks(&g, &[], "a", 1, false);
        assert_eq!(walks.len(), 3);
        assert!(walks.contains(&vec!["a".to_string(), "q".into(), "c".into()]));
    }

    #[test]
    fn chain_of_three_depth_two() {
        let g = [RawTriple::iris("a", "p", "b"), RawTriple::iris("b", "p", "c")];
        let lens: BTreeSet<usize> = oracle_enumerate_walks(&g, &[], "a", 2, false).iter().map(Vec::len).collect();
        assert_eq!(lens, BTreeSet::from([1, 3, 5]));
    }

    #[test]
    fn reverse_puts_root_in_the_middle() {
        let g = [RawTriple::iris("x", "p", "a"), RawTriple::iris("a", "q", "b")];
        let walks = oracle_enumerate_walks(&g, &[], "a", 1, true);
        let s = |v: &[&str]| v.iter().map(|t| t.to_string()).collect::<Vec<_>>();
        assert!(walks.contains(&s(&["x", "p", "a", "q", "b"])));
        assert_eq!(walks.len(), 4);
    }

    #[test]
    fn skip_and_literals_are_not_walked() {
        let g = [RawTriple::iris("a", "skip", "b"), RawTriple::new(RawTerm::iri("a"), "lit", RawTerm::literal("1"))];
        assert_eq!(oracle_enumerate_walks(&g, &["skip"], "a", 2, true).len(), 1);
        assert!(oracle_enumerate_walks(&g, &["skip"], "nobody", 2, false).is_empty());
    }

    #[test]
    fn pagerank_symmetric_cases() {
        let cycle = [RawTriple::iris("a", "p", "b"), RawTriple::iris("b", "p", "c"), RawTriple::iris("c", "p", "a")];
        for score in oracle_pagerank(&cycle, &[], 0.85, 100).values() {
            assert!((score - 1.0 / 3.0).abs() < 1e-12);
        }
        let apart = [RawTriple::iris("a", "skip", "b")];
        let pr = oracle_pagerank(&apart, &["skip"], 0.85, 100);
        assert!(pr.values().all(|s| (s - 0.5).abs() < 1e-12));
    }
}
