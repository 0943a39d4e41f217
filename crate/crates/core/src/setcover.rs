//! Exact minimum set cover by iterative deepening with branch-and-bound.
//!
//! Sizes are tried in increasing order starting from a counting lower bound, so
//! the first feasible size is optimal and every smaller size has been exhausted.
//! Branching picks the uncovered element contained in the fewest admissible sets
//! and tries those sets in turn, excluding earlier siblings from later branches.

use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;

/// Outcome of the exhaustive search at one cover size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub size: usize,
    pub nodes: u64,
    pub feasible: bool,
}

#[derive(Clone, Debug)]
pub struct MinCover {
    /// Indices into the candidate list, ascending.
    pub chosen: Vec<usize>,
    pub log: Vec<SearchRecord>,
}

struct Search<'a> {
    sets: &'a [ElemSet],
    containing: Vec<Vec<usize>>,
    nodes: u64,
}

/// Minimum cover of `0..universe` by members of `sets`; `None` if some element is
/// in no set.
pub fn min_cover(universe: usize, sets: &[ElemSet]) -> Option<MinCover> {
    let mut containing = vec![Vec::new(); universe];
    for (i, s) in sets.iter().enumerate() {
        for x in s.iter().filter(|&x| x < universe) {
            containing[x].push(i);
        }
    }
    if containing.iter().any(|c| c.is_empty()) {
        return None;
    }
    let largest = sets.iter().map(|s| s.len()).max().unwrap_or(0).max(1);
    let lower = universe.div_ceil(largest).max(usize::from(universe > 0));
    let mut search = Search {
        sets,
        containing,
        nodes: 0,
    };
    let mut log = Vec::new();
    for size in lower..=sets.len() {
        search.nodes = 0;
        let mut chosen = Vec::new();
        let uncovered = ElemSet::full(universe);
        let excluded = vec![false; sets.len()];
        let feasible = search.descend(&uncovered, &mut chosen, &excluded, size);
        log.push(SearchRecord {
            size,
            nodes: search.nodes,
            feasible,
        });
        if feasible {
            chosen.sort_unstable();
            return Some(MinCover { chosen, log });
        }
    }
    unreachable!("the family of all sets is a cover")
}

impl Search<'_> {
    fn descend(
        &mut self,
        uncovered: &ElemSet,
        chosen: &mut Vec<usize>,
        excluded: &[bool],
        size: usize,
    ) -> bool {
        self.nodes += 1;
        if uncovered.is_empty() {
            return true;
        }
        let left = size - chosen.len();
        if left == 0 {
            return false;
        }
        let best_gain = (0..self.sets.len())
            .filter(|&i| !excluded[i])
            .map(|i| self.sets[i].intersection_len(uncovered))
            .max()
            .unwrap_or(0);
        if best_gain * left < uncovered.len() {
            return false;
        }
        let mut pivot = None;
        let mut pivot_count = usize::MAX;
        for x in uncovered.iter() {
            let c = self.containing[x].iter().filter(|&&i| !excluded[i]).count();
            if c < pivot_count {
                pivot_count = c;
                pivot = Some(x);
                if c <= 1 {
                    break;
                }
            }
        }
        let pivot = pivot.expect("uncovered is non-empty");
        if pivot_count == 0 {
            return false;
        }
        let mut options: Vec<usize> = self.containing[pivot]
            .iter()
            .copied()
            .filter(|&i| !excluded[i])
            .collect();
        options.sort_by_key(|&i| {
            (
                std::cmp::Reverse(self.sets[i].intersection_len(uncovered)),
                i,
            )
        });
        let mut excluded = excluded.to_vec();
        for i in options {
            chosen.push(i);
            let rest = uncovered.difference(&self.sets[i]);
            if self.descend(&rest, chosen, &excluded, size) {
                return true;
            }
            chosen.pop();
            excluded[i] = true;
        }
        false
    }
}
