//! Proper edge colorings by backtracking.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::BaseGraph;

/// `colors[i]` is the color of `g.edges()[i]`, in `0..r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeColoring {
    colors: Vec<usize>,
    r: usize,
}

impl EdgeColoring {
    /// Checks that the coloring is proper with colors below `r`.
    pub fn new(g: &BaseGraph, colors: Vec<usize>, r: usize) -> Result<Self> {
        if colors.len() != g.edge_count() {
            return Err(Error::DimMismatch { expected: g.edge_count(), found: colors.len() });
        }
        if colors.iter().any(|&c| c >= r) {
            return Err(Error::NotProperlyColored("color out of range"));
        }
        for v in 0..g.n() {
            let mut seen = alloc::vec![false; r];
            for &(_, e) in g.incident(v) {
                if core::mem::replace(&mut seen[colors[e]], true) {
                    return Err(Error::NotProperlyColored("two edges at a vertex share a color"));
                }
            }
        }
        Ok(Self { colors, r })
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn color(&self, edge_index: usize) -> usize {
        self.colors[edge_index]
    }

    /// Every vertex sees each of the `r` colors exactly once.
    pub fn require_one_factorization(&self, g: &BaseGraph) -> Result<()> {
        if g.regular_degree() != Some(self.r) && g.n() > 0 {
            return Err(Error::NotProperlyColored("graph is not r-regular"));
        }
        Ok(())
    }

    /// Applies `perm` to the color names.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self { colors: self.colors.iter().map(|&c| perm[c]).collect(), r: self.r }
    }
}

struct Search<'a> {
    g: &'a BaseGraph,
    r: usize,
    colors: Vec<usize>,
    /// `used[v * r + c]`: vertex `v` already has an edge of color `c`.
    used: Vec<bool>,
}

impl Search<'_> {
    fn new(g: &BaseGraph, r: usize) -> Search<'_> {
        Search { g, r, colors: alloc::vec![usize::MAX; g.edge_count()], used: alloc::vec![false; g.n() * r] }
    }

    /// Colors edges `i..` in order. With `canonical`, a new color may only be
    /// the next unused one, so each coloring is produced once per color
    /// permutation class. `visit` returns `false` to stop.
    fn run(&mut self, i: usize, max_used: usize, canonical: bool, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if i == self.colors.len() {
            return visit(&self.colors);
        }
        let e = self.g.edges()[i];
        let limit = if canonical { (max_used + 1).min(self.r) } else { self.r };
        for c in 0..limit {
            if self.used[e.u * self.r + c] || self.used[e.v * self.r + c] {
                continue;
            }
            self.used[e.u * self.r + c] = true;
            self.used[e.v * self.r + c] = true;
            self.colors[i] = c;
            let go_on = self.run(i + 1, max_used.max(c + 1), canonical, visit);
            self.used[e.u * self.r + c] = false;
            self.used[e.v * self.r + c] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// The lexicographically first proper coloring with at most `r` colors.
pub fn proper_edge_coloring(g: &BaseGraph, r: usize) -> Result<EdgeColoring> {
    if g.max_degree() > r {
        return Err(Error::NotColorable { colors: r });
    }
    let mut found = None;
    Search::new(g, r).run(0, 0, true, &mut |c| {
        found = Some(c.to_vec());
        false
    });
    found.map(|colors| EdgeColoring { colors, r }).ok_or(Error::NotColorable { colors: r })
}

/// Every proper coloring with at most `r` colors, one per class under
/// renaming of colors, in lexicographic order. Stops after `cap` results.
pub fn colorings_up_to_permutation(g: &BaseGraph, r: usize, cap: usize) -> Vec<EdgeColoring> {
    enumerate(g, r, cap, true)
}

/// Every proper coloring with colors in `0..r`, in lexicographic order.
pub fn all_colorings(g: &BaseGraph, r: usize, cap: usize) -> Vec<EdgeColoring> {
    enumerate(g, r, cap, false)
}

fn enumerate(g: &BaseGraph, r: usize, cap: usize, canonical: bool) -> Vec<EdgeColoring> {
    let mut out = Vec::new();
    if g.max_degree() > r || cap == 0 {
        return out;
    }
    Search::new(g, r).run(0, 0, canonical, &mut |c| {
        out.push(EdgeColoring { colors: c.to_vec(), r });
        out.len() < cap
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_three_matchings() {
        let g = BaseGraph::complete(4);
        let c = proper_edge_coloring(&g, 3).unwrap();
        assert!(EdgeColoring::new(&g, c.colors().to_vec(), 3).is_ok());
        c.require_one_factorization(&g).unwrap();
        // K4 has exactly one 1-factorization
        assert_eq!(colorings_up_to_permutation(&g, 3, usize::MAX).len(), 1);
        assert_eq!(all_colorings(&g, 3, usize::MAX).len(), 6);
    }

    #[test]
    fn odd_cycle_and_petersen() {
        assert_eq!(proper_edge_coloring(&BaseGraph::cycle(5), 2), Err(Error::NotColorable { colors: 2 }));
        assert_eq!(proper_edge_coloring(&BaseGraph::petersen(), 3), Err(Error::NotColorable { colors: 3 }));
        assert_eq!(proper_edge_coloring(&BaseGraph::complete(4), 2), Err(Error::NotColorable { colors: 2 }));
    }

    #[test]
    fn bipartite_counts() {
        // 1-factorizations of K_{3,3} correspond to reduced Latin squares of order 3
        let g = BaseGraph::complete_bipartite(3, 3);
        assert_eq!(all_colorings(&g, 3, usize::MAX).len(), 12);
        assert_eq!(colorings_up_to_permutation(&g, 3, usize::MAX).len(), 2);
        assert_eq!(all_colorings(&g, 3, 5).len(), 5);
    }

    #[test]
    fn validation() {
        let g = BaseGraph::path(3);
        assert!(EdgeColoring::new(&g, alloc::vec![0, 0], 2).is_err());
        assert!(EdgeColoring::new(&g, alloc::vec![0, 2], 2).is_err());
        let c = EdgeColoring::new(&g, alloc::vec![0, 1], 2).unwrap();
        assert!(c.require_one_factorization(&g).is_err());
        assert_eq!(c.permuted(&[1, 0]).colors(), &[1, 0]);
    }
}
