use std::sync::Arc;

use super::{RawWalk, Walk};
use crate::graph::{Direction, KnowledgeGraph, VertexId};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// Weisfeiler-Lehman vertex labels for iterations `1..=k`.
///
/// Refinement starts from one shared color for every vertex, so structurally
/// equivalent vertices end up with equal labels. Each step hashes a vertex's
/// previous label with the sorted multiset of `(predicate, neighbor label)`
/// over its outgoing hops.
#[derive(Debug, Clone)]
pub struct WlLabels {
    /// `by_iteration[i - 1][v]` is the iteration-`i` label of vertex `v`.
    by_iteration: Vec<Vec<Arc<str>>>,
}

impl WlLabels {
    pub fn iterations(&self) -> usize {
        self.by_iteration.len()
    }

    /// Label of `v` after `iteration` refinements (1-based).
    pub fn label(&self, iteration: usize, v: VertexId) -> Option<&str> {
        self.by_iteration.get(iteration.checked_sub(1)?)?.get(v as usize).map(|l| &**l)
    }

    /// Copy of `walk` with every non-root entity replaced by its label.
    pub(crate) fn relabel(&self, walk: &Walk, raw: &RawWalk, iteration: usize) -> Walk {
        let labels = &self.by_iteration[iteration - 1];
        let tokens = walk
            .tokens
            .iter()
            .enumerate()
            .map(
                |(i, t)| {
                    if i % 2 == 0 && i != walk.root_index {
                        labels[raw.ids[i] as usize].clone()
                    } else {
                        t.clone()
                    }
                },
            )
            .collect();
        Walk { root: walk.root.clone(), tokens, root_index: walk.root_index }
    }
}

pub fn wl_labels(g: &KnowledgeGraph, iterations: usize) -> WlLabels {
    let n = g.vertex_count();
    let mut current: Vec<Arc<str>> = vec![Arc::from(""); n];
    let mut by_iteration = Vec::with_capacity(iterations);
    let mut signature = String::new();
    for _ in 0..iterations {
        let next: Vec<Arc<str>> = (0..n as VertexId)
            .map(|v| {
                let mut neighborhood: Vec<(&str, &str)> = g
                    .hops_of(v, Direction::Forward)
                    .iter()
                    .map(|h| (g.predicate_iri(h.predicate).unwrap_or_default(), &*current[h.target as usize]))
                    .collect();
                neighborhood.sort_unstable();
                signature.clear();
                signature.push_str(&current[v as usize]);
                for (p, label) in neighborhood {
                    signature.push('\u{1f}');
                    signature.push_str(p);
                    signature.push('\u{1e}');
                    signature.push_str(label);
                }
                Arc::from(format!("{:016x}", fnv1a64(signature.as_bytes())))
            })
            .collect();
        by_iteration.push(next.clone());
        current = next;
    }
    WlLabels { by_iteration }
}
