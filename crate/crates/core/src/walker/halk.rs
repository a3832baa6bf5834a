use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::Walk;

pub const DEFAULT_HALK_THRESHOLD: f64 = 0.001;

/// Removes rare entity hops from a corpus.
///
/// The frequency of an entity token is the fraction of walks it occurs in.
/// Non-root entities below `threshold` are dropped together with the
/// predicate that links them towards the root. Walks pruned down to a bare
/// root that already occurs as a walk are dropped.
pub fn extract_halk(walks: Vec<Walk>, threshold: f64) -> Vec<Walk> {
    prune(&walks, threshold).into_iter().flatten().collect()
}

/// Pruned copy of each input walk, or `None` for dropped walks.
pub(crate) fn prune(walks: &[Walk], threshold: f64) -> Vec<Option<Walk>> {
    let mut walks_containing: HashMap<&str, usize> = HashMap::new();
    for walk in walks {
        let distinct: HashSet<&str> = walk.tokens.iter().step_by(2).map(|t| &**t).collect();
        for token in distinct {
            *walks_containing.entry(token).or_default() += 1;
        }
    }
    let total = walks.len() as f64;
    let is_rare = |token: &str| walks_containing.get(token).map_or(0.0, |&n| n as f64 / total) < threshold;

    let mut bare_roots: HashSet<Arc<str>> =
        walks.iter().filter(|w| w.tokens.len() == 1).map(|w| w.tokens[0].clone()).collect();
    let mut emitted_bare: HashSet<Arc<str>> = HashSet::new();

    walks
        .iter()
        .map(|walk| {
            let root = walk.root_index;
            let mut tokens = Vec::with_capacity(walk.tokens.len());
            let mut new_root = 0;
            // Left of the root the linking predicate follows its entity.
            let mut i = 0;
            while i < root {
                if is_rare(&walk.tokens[i]) {
                    i += 2;
                    continue;
                }
                tokens.push(walk.tokens[i].clone());
                tokens.push(walk.tokens[i + 1].clone());
                i += 2;
            }
            new_root += tokens.len();
            tokens.push(walk.tokens[root].clone());
            let mut j = root + 1;
            while j < walk.tokens.len() {
                if !is_rare(&walk.tokens[j + 1]) {
                    tokens.push(walk.tokens[j].clone());
                    tokens.push(walk.tokens[j + 1].clone());
                }
                j += 2;
            }
            if tokens.len() == 1 {
                let bare = tokens[0].clone();
                let original_bare = walk.tokens.len() == 1;
                // Keep one bare walk per root: the original one if there is one.
                if (!original_bare && bare_roots.contains(&bare)) || !emitted_bare.insert(bare.clone()) {
                    return None;
                }
                bare_roots.insert(bare);
            }
            Some(Walk { root: walk.root.clone(), tokens, root_index: new_root })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf_io::Term;

    fn walk(tokens: &[&str], root_index: usize) -> Walk {
        Walk {
            root: Arc::new(Term::iri(tokens[root_index])),
            tokens: tokens.iter().map(|t| Arc::from(*t)).collect(),
            root_index,
        }
    }

    fn strs(walks: &[Walk]) -> Vec<Vec<&str>> {
        walks.iter().map(|w| w.token_strs()).collect()
    }

    #[test]
    fn frequent_tokens_untouched() {
        let input = vec![walk(&["a", "p", "b"], 0), walk(&["a", "q", "b"], 0)];
        assert_eq!(extract_halk(input.clone(), 0.5), input);
    }

    #[test]
    fn rare_tail_is_removed_with_its_predicate() {
        let mut input = vec![walk(&["a", "p", "rare"], 0)];
        input.extend((0..9).map(|_| walk(&["a", "p", "b"], 0)));
        let out = extract_halk(input, 0.2);
        assert_eq!(strs(&out)[0], vec!["a"]);
        assert_eq!(out.len(), 10);
    }

    #[test]
    fn bare_duplicate_of_existing_root_walk_is_dropped() {
        let input =
            vec![walk(&["a"], 0), walk(&["a", "p", "rare"], 0), walk(&["a", "q", "b"], 0), walk(&["a", "q", "b"], 0)];
        let out = extract_halk(input, 0.3);
        assert_eq!(strs(&out), vec![vec!["a"], vec!["a", "q", "b"], vec!["a", "q", "b"]]);
    }

    #[test]
    fn rare_left_of_root_drops_following_predicate() {
        let input = vec![walk(&["x", "p", "a", "q", "b"], 2), walk(&["a", "q", "b"], 0), walk(&["a", "q", "b"], 0)];
        let out = extract_halk(input, 0.5);
        assert_eq!(out[0].token_strs(), vec!["a", "q", "b"]);
        assert_eq!(out[0].root_index, 0);
    }

    #[test]
    fn middle_hop_removal_splices_walk() {
        let mut input = vec![walk(&["a", "p", "rare", "q", "c"], 0)];
        input.extend((0..3).map(|_| walk(&["a", "p", "c"], 0)));
        let out = extract_halk(input, 0.3);
        assert_eq!(out[0].token_strs(), vec!["a", "q", "c"]);
    }

    #[test]
    fn single_occurrence_in_ten_thousand_walks() {
        let mut input: Vec<Walk> = (0..9_999).map(|_| walk(&["a", "p", "b"], 0)).collect();
        input.push(walk(&["a", "p", "once"], 0));
        let out = extract_halk(input, 0.001);
        assert!(out.iter().all(|w| !w.tokens.iter().any(|t| &**t == "once")));
    }
}
