//! Walk extraction.
//!
//! A walk alternates entity and predicate tokens and always contains its
//! root entity. Depth counts hops, so a depth-`d` forward walk has at most
//! `2d + 1` tokens; with reverse walking a reverse segment of up to `d` hops
//! is prepended, giving at most `4d + 1` tokens.
//!
//! Seeds are processed independently (in parallel when configured) and each
//! seed draws from its own random stream, so the corpus is identical for
//! every worker count.

mod halk;
mod wl;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Direction, GraphError, HopSource, KnowledgeGraph, VertexId};
use crate::parallel;
use crate::rdf_io::Term;
use crate::rng::RandomSource;
use crate::sampler::{FittedSampler, SamplerStrategy};

pub use halk::{extract_halk, DEFAULT_HALK_THRESHOLD};
pub use wl::{fnv1a64, wl_labels, WlLabels};

#[derive(Debug, Error)]
pub enum WalkError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid walker configuration: {0}")]
    Config(String),
    #[error("{0} needs a locally materialized graph")]
    NeedsLocalGraph(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WalkStrategy {
    Random,
    /// Weisfeiler-Lehman relabeled copies for iterations `0..=iterations`.
    Wl {
        iterations: usize,
    },
    /// Random walks with rare entity hops pruned.
    Halk {
        threshold: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkerConfig {
    pub max_depth: usize,
    /// Walks drawn per seed; `None` extracts every walk exhaustively.
    #[serde(default)]
    pub max_walks: Option<usize>,
    #[serde(default)]
    pub with_reverse: bool,
    pub strategy: WalkStrategy,
    #[serde(default)]
    pub seed: u64,
}

impl WalkerConfig {
    pub fn random(max_depth: usize, max_walks: Option<usize>) -> Self {
        WalkerConfig { max_depth, max_walks, with_reverse: false, strategy: WalkStrategy::Random, seed: 0 }
    }

    pub fn wl(max_depth: usize, max_walks: Option<usize>, iterations: usize) -> Self {
        WalkerConfig { strategy: WalkStrategy::Wl { iterations }, ..Self::random(max_depth, max_walks) }
    }

    pub fn halk(max_depth: usize, max_walks: Option<usize>, threshold: f64) -> Self {
        WalkerConfig { strategy: WalkStrategy::Halk { threshold }, ..Self::random(max_depth, max_walks) }
    }

    pub fn with_reverse(self, with_reverse: bool) -> Self {
        WalkerConfig { with_reverse, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        WalkerConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), WalkError> {
        if self.max_walks == Some(0) {
            return Err(WalkError::Config("max_walks must be positive".into()));
        }
        match self.strategy {
            WalkStrategy::Wl { iterations: 0 } => Err(WalkError::Config("WL needs at least one iteration".into())),
            WalkStrategy::Halk { threshold } if !(threshold > 0.0 && threshold < 1.0) => {
                Err(WalkError::Config(format!("HALK threshold must lie in (0, 1), got {threshold}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for WalkerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.strategy {
            WalkStrategy::Random => write!(f, "random:depth={}", self.max_depth)?,
            WalkStrategy::Wl { iterations } => write!(f, "wl:depth={},iterations={iterations}", self.max_depth)?,
            WalkStrategy::Halk { threshold } => write!(f, "halk:depth={},threshold={threshold}", self.max_depth)?,
        }
        if let Some(n) = self.max_walks {
            write!(f, ",max={n}")?;
        }
        if self.with_reverse {
            f.write_str(",reverse=true")?;
        }
        Ok(())
    }
}

/// One walk: its tokens and the seed it was grown from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    pub root: Arc<Term>,
    pub tokens: Vec<Arc<str>>,
    /// Position of the root entity in `tokens`; always even.
    pub root_index: usize,
}

impl Walk {
    pub fn depth(&self) -> usize {
        self.tokens.len() / 2
    }

    pub fn token_strs(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| &**t).collect()
    }
}

/// Walks of one strategy run, in seed order.
#[derive(Debug, Clone, Default)]
pub struct Extraction {
    pub walks: Vec<Walk>,
    /// Walk count per seed, aligned with the seed list; missing seeds have 0.
    pub walks_per_seed: Vec<usize>,
    /// Seeds that are not vertices of the graph.
    pub missing: Vec<Term>,
}

/// Vertex/predicate id sequence: even positions are vertices, odd positions
/// predicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct RawWalk {
    pub ids: Vec<u32>,
    pub root_index: usize,
}

enum Chooser<'a> {
    Uniform,
    Fitted(&'a FittedSampler),
}

impl Chooser<'_> {
    fn choose(&self, v: VertexId, len: usize, direction: Direction, rng: &mut RandomSource) -> Option<usize> {
        if len == 0 {
            return None;
        }
        match self {
            Chooser::Uniform => Some(rng.gen_range(0..len)),
            Chooser::Fitted(s) => s.choose(v, direction, rng),
        }
    }
}

/// All hop paths of up to `depth` hops from `root`, including the empty path,
/// as id sequences starting at `root`.
fn enumerate_paths<S: HopSource + ?Sized>(
    source: &S,
    root: VertexId,
    depth: usize,
    direction: Direction,
) -> Result<Vec<Vec<u32>>, GraphError> {
    let mut out = Vec::new();
    let mut stack = vec![vec![root]];
    while let Some(path) = stack.pop() {
        if path.len() / 2 < depth {
            let last = *path.last().expect("paths are non-empty");
            let hops = source.hops(last, direction)?;
            // Reverse push keeps DFS emission in hop insertion order.
            for hop in hops.iter().rev() {
                let mut next = path.clone();
                next.push(hop.predicate);
                next.push(hop.target);
                stack.push(next);
            }
        }
        out.push(path);
    }
    Ok(out)
}

fn descend<S: HopSource + ?Sized>(
    source: &S,
    root: VertexId,
    depth: usize,
    direction: Direction,
    chooser: &Chooser<'_>,
    rng: &mut RandomSource,
) -> Result<Vec<u32>, GraphError> {
    let mut path = vec![root];
    let mut current = root;
    for _ in 0..depth {
        let hops = source.hops(current, direction)?;
        let Some(i) = chooser.choose(current, hops.len(), direction, rng) else {
            break;
        };
        path.push(hops[i].predicate);
        path.push(hops[i].target);
        current = hops[i].target;
    }
    Ok(path)
}

/// Joins a reverse path (root first) and a forward path (root first) into one
/// walk in edge direction.
fn join(reverse: &[u32], forward: &[u32]) -> RawWalk {
    let mut ids: Vec<u32> = reverse.iter().rev().copied().collect();
    let root_index = ids.len() - 1;
    ids.extend_from_slice(&forward[1..]);
    RawWalk { ids, root_index }
}

fn dedup(walks: Vec<RawWalk>) -> Vec<RawWalk> {
    let mut seen = HashSet::with_capacity(walks.len());
    walks.into_iter().filter(|w| seen.insert(w.clone())).collect()
}

fn seed_walks<S: HopSource + ?Sized>(
    source: &S,
    root: VertexId,
    cfg: &WalkerConfig,
    chooser: &Chooser<'_>,
    stream: u64,
) -> Result<Vec<RawWalk>, GraphError> {
    let walks = match cfg.max_walks {
        None => {
            let forward = enumerate_paths(source, root, cfg.max_depth, Direction::Forward)?;
            if cfg.with_reverse {
                let reverse = enumerate_paths(source, root, cfg.max_depth, Direction::Reverse)?;
                reverse.iter().flat_map(|r| forward.iter().map(move |f| join(r, f))).collect()
            } else {
                forward.into_iter().map(|ids| RawWalk { ids, root_index: 0 }).collect()
            }
        }
        Some(n) => {
            let mut rng = RandomSource::new(cfg.seed, stream);
            let mut walks = Vec::with_capacity(n);
            for _ in 0..n {
                let reverse = if cfg.with_reverse {
                    descend(source, root, cfg.max_depth, Direction::Reverse, chooser, &mut rng)?
                } else {
                    vec![root]
                };
                let forward = descend(source, root, cfg.max_depth, Direction::Forward, chooser, &mut rng)?;
                walks.push(join(&reverse, &forward));
            }
            walks
        }
    };
    Ok(dedup(walks))
}

/// Walks the remote frontier level by level so hop requests can be bundled.
fn prefetch_frontier<S: HopSource + ?Sized>(
    source: &S,
    roots: &[VertexId],
    cfg: &WalkerConfig,
) -> Result<(), GraphError> {
    let levels = if cfg.max_walks.is_none() { cfg.max_depth } else { 1 };
    let mut directions = vec![Direction::Forward];
    if cfg.with_reverse {
        directions.push(Direction::Reverse);
    }
    for direction in directions {
        let mut frontier: Vec<VertexId> = roots.to_vec();
        let mut seen: HashSet<VertexId> = frontier.iter().copied().collect();
        for level in 0..levels {
            let terms: Vec<Term> = frontier.iter().map(|&v| source.vertex_term(v)).collect();
            source.prefetch(&terms, direction)?;
            if level + 1 == levels {
                break;
            }
            let mut next = Vec::new();
            for &v in &frontier {
                for hop in source.hops(v, direction)?.iter() {
                    if seen.insert(hop.target) {
                        next.push(hop.target);
                    }
                }
            }
            frontier = next;
        }
    }
    Ok(())
}

/// Resolves seeds and grows raw walks for each of them.
/// Per-seed raw walks (`None` for missing seeds) and the missing seeds.
type RawExtraction = (Vec<Option<Vec<RawWalk>>>, Vec<Term>);

pub(crate) fn extract_raw<S: HopSource + ?Sized>(
    source: &S,
    seeds: &[Term],
    cfg: &WalkerConfig,
    sampler: Option<&FittedSampler>,
    workers: usize,
) -> Result<RawExtraction, WalkError> {
    cfg.validate()?;
    // A uniform sampler draws exactly like no sampler, on any source.
    let chooser = match sampler {
        Some(s) if s.model().strategy == SamplerStrategy::Uniform => Chooser::Uniform,
        Some(_) if source.as_local().is_none() => return Err(WalkError::NeedsLocalGraph("a fitted sampler")),
        Some(s) => Chooser::Fitted(s),
        None => Chooser::Uniform,
    };
    if source.wants_prefetch() {
        source.prefetch(seeds, Direction::Forward)?;
        source.prefetch(seeds, Direction::Reverse)?;
    }
    let mut ids = Vec::with_capacity(seeds.len());
    let mut missing = Vec::new();
    for seed in seeds {
        let id = source.resolve(seed)?;
        if id.is_none() {
            missing.push(seed.clone());
        }
        ids.push(id);
    }
    if source.wants_prefetch() {
        let roots: Vec<VertexId> = ids.iter().flatten().copied().collect();
        prefetch_frontier(source, &roots, cfg)?;
    }
    let per_seed = parallel::map_indexed(&ids, workers, |i, id| {
        id.map(|root| seed_walks(source, root, cfg, &chooser, i as u64)).transpose()
    });
    let per_seed = per_seed.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok((per_seed, missing))
}

pub(crate) fn tokenize<S: HopSource + ?Sized>(source: &S, root: &Arc<Term>, raw: &RawWalk) -> Walk {
    let tokens = raw
        .ids
        .iter()
        .enumerate()
        .map(|(i, &id)| if i % 2 == 0 { source.vertex_token(id) } else { source.predicate_token(id) })
        .collect();
    Walk { root: root.clone(), tokens, root_index: raw.root_index }
}

fn assemble<S: HopSource + ?Sized>(
    source: &S,
    seeds: &[Term],
    per_seed: Vec<Option<Vec<RawWalk>>>,
    missing: Vec<Term>,
) -> Extraction {
    let mut out = Extraction { missing, ..Default::default() };
    for (seed, walks) in seeds.iter().zip(per_seed) {
        let walks = walks.unwrap_or_default();
        let root = Arc::new(seed.clone());
        out.walks_per_seed.push(walks.len());
        out.walks.extend(walks.iter().map(|w| tokenize(source, &root, w)));
    }
    out
}

/// Random walks: exhaustive when `cfg.max_walks` is `None`, otherwise
/// `max_walks` sampler-guided descents per seed (uniform without a sampler)
/// with duplicates removed. Reverse segments are added when
/// `cfg.with_reverse` is set.
pub fn extract_random<S: HopSource + ?Sized>(
    source: &S,
    seeds: &[Term],
    cfg: &WalkerConfig,
    sampler: Option<&FittedSampler>,
    workers: usize,
) -> Result<Extraction, WalkError> {
    let (per_seed, missing) = extract_raw(source, seeds, cfg, sampler, workers)?;
    Ok(assemble(source, seeds, per_seed, missing))
}

/// Random walks that also traverse incoming edges, placing the root anywhere
/// in the walk.
pub fn extract_reverse<S: HopSource + ?Sized>(
    source: &S,
    seeds: &[Term],
    cfg: &WalkerConfig,
    sampler: Option<&FittedSampler>,
    workers: usize,
) -> Result<Extraction, WalkError> {
    let cfg = cfg.clone().with_reverse(true);
    extract_random(source, seeds, &cfg, sampler, workers)
}

/// Random walks followed by one relabeled copy per WL iteration.
pub fn extract_wl(
    g: &KnowledgeGraph,
    seeds: &[Term],
    cfg: &WalkerConfig,
    sampler: Option<&FittedSampler>,
    workers: usize,
) -> Result<Extraction, WalkError> {
    let WalkStrategy::Wl { iterations } = cfg.strategy else {
        return Err(WalkError::Config("extract_wl needs a WL strategy".into()));
    };
    let (per_seed, missing) = extract_raw(g, seeds, cfg, sampler, workers)?;
    let labels = wl_labels(g, iterations);
    let mut out = Extraction { missing, ..Default::default() };
    for (seed, walks) in seeds.iter().zip(per_seed) {
        let root = Arc::new(seed.clone());
        let mut seen = HashSet::new();
        let before = out.walks.len();
        for raw in walks.unwrap_or_default() {
            let plain = tokenize(g, &root, &raw);
            for it in 0..=iterations {
                let walk = if it == 0 { plain.clone() } else { labels.relabel(&plain, &raw, it) };
                if seen.insert(walk.tokens.clone()) {
                    out.walks.push(walk);
                }
            }
        }
        out.walks_per_seed.push(out.walks.len() - before);
    }
    Ok(out)
}

/// Runs the strategy named by `cfg`.
pub fn extract<S: HopSource + ?Sized>(
    source: &S,
    seeds: &[Term],
    cfg: &WalkerConfig,
    sampler: Option<&FittedSampler>,
    workers: usize,
) -> Result<Extraction, WalkError> {
    match cfg.strategy {
        WalkStrategy::Random => extract_random(source, seeds, cfg, sampler, workers),
        WalkStrategy::Wl { .. } => {
            let g = source.as_local().ok_or(WalkError::NeedsLocalGraph("Weisfeiler-Lehman relabeling"))?;
            extract_wl(g, seeds, cfg, sampler, workers)
        }
        WalkStrategy::Halk { threshold } => {
            cfg.validate()?;
            let base = extract_random(source, seeds, cfg, sampler, workers)?;
            let mut pruned = halk::prune(&base.walks, threshold).into_iter();
            let mut out = Extraction { missing: base.missing, ..Default::default() };
            for &n in &base.walks_per_seed {
                let kept: Vec<Walk> = pruned.by_ref().take(n).flatten().collect();
                out.walks_per_seed.push(kept.len());
                out.walks.extend(kept);
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::rdf_io::Triple;
    use crate::sampler::SamplerModel;

    fn iri(s: &str) -> Term {
        Term::iri(s)
    }

    fn graph(edges: &[(&str, &str, &str)]) -> KnowledgeGraph {
        KnowledgeGraph::build(
            edges.iter().map(|(s, p, o)| Triple::new(iri(s), iri(p), iri(o)).unwrap()),
            Vec::<String>::new(),
        )
    }

    fn token_set(e: &Extraction) -> BTreeSet<Vec<String>> {
        e.walks.iter().map(|w| w.tokens.iter().map(|t| t.to_string()).collect()).collect()
    }

    fn set(walks: &[&[&str]]) -> BTreeSet<Vec<String>> {
        walks.iter().map(|w| w.iter().map(|s| s.to_string()).collect()).collect()
    }

    #[test]
    fn exhaustive_depth_one() {
        let g = graph(&[("a", "p", "b"), ("a", "q", "c")]);
        let e = extract_random(&g, &[iri("a")], &WalkerConfig::random(1, None), None, 1).unwrap();
        assert_eq!(token_set(&e), set(&[&["a"], &["a", "p", "b"], &["a", "q", "c"]]));
        assert_eq!(e.walks_per_seed, vec![3]);
    }

    #[test]
    fn depth_zero_is_root_only() {
        let g = graph(&[("a", "p", "b")]);
        let e = extract_random(&g, &[iri("a")], &WalkerConfig::random(0, None), None, 1).unwrap();
        assert_eq!(token_set(&e), set(&[&["a"]]));
        let e = extract_reverse(&g, &[iri("b")], &WalkerConfig::random(0, None), None, 1).unwrap();
        assert_eq!(token_set(&e), set(&[&["b"]]));
    }

    #[test]
    fn reverse_places_root_in_the_middle() {
        let g = graph(&[("x", "p", "a"), ("a", "q", "b")]);
        let e = extract_reverse(&g, &[iri("a")], &WalkerConfig::random(1, None), None, 1).unwrap();
        assert_eq!(token_set(&e), set(&[&["a"], &["a", "q", "b"], &["x", "p", "a"], &["x", "p", "a", "q", "b"]]));
        let middle = e.walks.iter().find(|w| w.tokens.len() == 5).unwrap();
        assert_eq!(middle.root_index, 2);
    }

    #[test]
    fn reverse_without_incoming_edges_equals_forward() {
        let g = graph(&[("a", "p", "b"), ("b", "q", "c")]);
        let cfg = WalkerConfig::random(2, None);
        let fwd = extract_random(&g, &[iri("a")], &cfg, None, 1).unwrap();
        let rev = extract_reverse(&g, &[iri("a")], &cfg, None, 1).unwrap();
        assert_eq!(token_set(&fwd), token_set(&rev));
    }

    #[test]
    fn exhaustive_includes_prefixes_and_revisits() {
        let g = graph(&[("a", "p", "b"), ("b", "p", "a")]);
        let e = extract_random(&g, &[iri("a")], &WalkerConfig::random(3, None), None, 1).unwrap();
        let lens: Vec<usize> = e.walks.iter().map(|w| w.tokens.len()).collect();
        assert_eq!(lens, vec![1, 3, 5, 7]);
    }

    #[test]
    fn duplicate_triples_yield_distinct_walks_once() {
        let g = graph(&[("a", "p", "b"), ("a", "p", "b")]);
        let e = extract_random(&g, &[iri("a")], &WalkerConfig::random(1, None), None, 1).unwrap();
        assert_eq!(e.walks.len(), 2);
    }

    #[test]
    fn sampled_walks_are_capped_and_realizable() {
        let g = graph(&[("a", "p", "b"), ("a", "q", "c"), ("b", "p", "c"), ("c", "p", "a"), ("c", "q", "b")]);
        let cfg = WalkerConfig::random(4, Some(5)).with_seed(9);
        let e = extract_random(&g, &[iri("a"), iri("b")], &cfg, None, 1).unwrap();
        assert!(e.walks_per_seed.iter().all(|&n| (1..=5).contains(&n)));
        for w in &e.walks {
            for k in (0..w.tokens.len() - 1).step_by(2) {
                let hops = g.get_hops(&iri(&w.tokens[k]), Direction::Forward);
                assert!(hops.contains(&(iri(&w.tokens[k + 1]), iri(&w.tokens[k + 2]))));
            }
        }
    }

    #[test]
    fn sampled_walks_stop_at_dead_ends() {
        let g = graph(&[("a", "p", "b")]);
        let e = extract_random(&g, &[iri("a")], &WalkerConfig::random(3, Some(10)), None, 1).unwrap();
        assert_eq!(token_set(&e), set(&[&["a", "p", "b"]]));
    }

    #[test]
    fn fitted_sampler_guides_descent() {
        let g = graph(&[("a", "p", "b"), ("a", "q", "c"), ("x", "r", "c"), ("y", "r", "c")]);
        let s = SamplerModel::new(crate::sampler::SamplerStrategy::ObjFreq).fit(&g).unwrap();
        let e = extract_random(&g, &[iri("a")], &WalkerConfig::random(1, Some(50)), Some(&s), 1).unwrap();
        assert_eq!(e.walks.len(), 2);
    }

    #[test]
    fn missing_seed_is_reported() {
        let g = graph(&[("a", "p", "b")]);
        let e = extract_random(&g, &[iri("a"), iri("zz")], &WalkerConfig::random(1, None), None, 1).unwrap();
        assert_eq!(e.missing, vec![iri("zz")]);
        assert_eq!(e.walks_per_seed, vec![2, 0]);
    }

    #[test]
    fn invalid_configs() {
        assert!(WalkerConfig::random(1, Some(0)).validate().is_err());
        assert!(WalkerConfig::wl(1, None, 0).validate().is_err());
        assert!(WalkerConfig::halk(1, None, 1.0).validate().is_err());
        assert!(WalkerConfig::halk(1, None, 0.01).validate().is_ok());
    }

    #[test]
    fn wl_iteration_zero_equals_random() {
        let g = graph(&[("a", "p", "b"), ("b", "q", "c"), ("a", "q", "c")]);
        let random = extract_random(&g, &[iri("a")], &WalkerConfig::random(2, None), None, 1).unwrap();
        let wl = extract_wl(&g, &[iri("a")], &WalkerConfig::wl(2, None, 2), None, 1).unwrap();
        let plain: BTreeSet<_> = token_set(&random);
        let wl_set = token_set(&wl);
        assert!(plain.is_subset(&wl_set));
        assert!(wl_set.len() > plain.len());
        // Roots are never relabeled.
        assert!(wl.walks.iter().all(|w| &*w.tokens[w.root_index] == "a"));
    }

    #[test]
    fn halk_strategy_keeps_seed_grouping() {
        let g = graph(&[("a", "p", "b"), ("c", "p", "b")]);
        let e = extract(&g, &[iri("a"), iri("c")], &WalkerConfig::halk(1, None, 0.01), None, 1).unwrap();
        assert_eq!(e.walks_per_seed, vec![2, 2]);
    }
}
