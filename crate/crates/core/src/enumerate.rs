//! Small-graph enumeration up to isomorphism.
//!
//! Graphs on at most 16 vertices are handled as adjacency bitmasks. The
//! canonical form is the largest upper-triangle code (graph6 bit order) over
//! the leaves of a refine-and-individualize search tree.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::BaseGraph;

pub const MAX_CANON_N: usize = 16;
/// Largest `n` for [`all_graphs`].
pub const MAX_ALL_GRAPHS_N: usize = 6;

fn masks(g: &BaseGraph) -> Result<Vec<u16>> {
    if g.n() > MAX_CANON_N {
        return Err(Error::TooLarge { n: g.n(), limit: MAX_CANON_N });
    }
    let mut adj = alloc::vec![0u16; g.n()];
    for e in g.edges() {
        adj[e.u] |= 1 << e.v;
        adj[e.v] |= 1 << e.u;
    }
    Ok(adj)
}

fn from_masks(adj: &[u16]) -> BaseGraph {
    let n = adj.len();
    let pairs = (0..n).flat_map(|u| ((u + 1)..n).filter(move |&v| adj[u] >> v & 1 == 1).map(move |v| (u, v)));
    BaseGraph::new(n, pairs).expect("bitmask graph is simple")
}

/// Upper-triangle bits in graph6 order (`j` ascending, then `i < j`), first
/// bit most significant.
fn code_of(adj: &[u16], order: &[usize]) -> u128 {
    let n = adj.len();
    let mut code = 0u128;
    for j in 1..n {
        for i in 0..j {
            code = code << 1 | (adj[order[i]] >> order[j] & 1) as u128;
        }
    }
    code
}

/// Replaces colors by their dense rank and refines to an equitable partition.
fn refine(adj: &[u16], colors: &mut [u32]) {
    let n = adj.len();
    let mut classes = 0;
    loop {
        let mut sig: Vec<(Vec<u32>, usize)> = (0..n)
            .map(|v| {
                let mut key = alloc::vec![colors[v]];
                let mut nb: Vec<u32> = (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(|u| colors[u]).collect();
                nb.sort_unstable();
                key.extend(nb);
                (key, v)
            })
            .collect();
        sig.sort();
        let mut rank = 0u32;
        for i in 0..n {
            if i > 0 && sig[i].0 != sig[i - 1].0 {
                rank += 1;
            }
            colors[sig[i].1] = rank;
        }
        let count = if n == 0 { 0 } else { rank as usize + 1 };
        if count == classes {
            return;
        }
        classes = count;
    }
}

fn search(adj: &[u16], mut colors: Vec<u32>, best: &mut Option<(u128, Vec<usize>)>) {
    let n = adj.len();
    refine(adj, &mut colors);
    let mut sizes = alloc::vec![0usize; n];
    for &c in &colors {
        sizes[c as usize] += 1;
    }
    let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
        let mut order = alloc::vec![0; n];
        for v in 0..n {
            order[colors[v] as usize] = v;
        }
        let code = code_of(adj, &order);
        if best.as_ref().is_none_or(|(b, _)| code > *b) {
            *best = Some((code, order));
        }
        return;
    };
    let cell: Vec<usize> = (0..n).filter(|&v| colors[v] as usize == target).collect();
    let mut explored: Vec<usize> = Vec::new();
    for &v in &cell {
        // a twin of an explored vertex yields the same codes
        let twin = explored.iter().any(|&w| adj[v] & !(1 << w) == adj[w] & !(1 << v));
        if twin {
            continue;
        }
        explored.push(v);
        let next: Vec<u32> =
            (0..n).map(|u| 2 * colors[u] + u32::from(colors[u] as usize == target && u != v)).collect();
        search(adj, next, best);
    }
}

/// `(code, order)` where `order[i]` is the original vertex placed at
/// position `i` of the canonical labeling.
pub fn canonical_form(g: &BaseGraph) -> Result<(u128, Vec<usize>)> {
    let adj = masks(g)?;
    let mut best = None;
    search(&adj, alloc::vec![0; g.n()], &mut best);
    Ok(best.unwrap_or((0, Vec::new())))
}

/// The graph relabeled into canonical order.
pub fn canonical_graph(g: &BaseGraph) -> Result<BaseGraph> {
    let (_, order) = canonical_form(g)?;
    let mut position = alloc::vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    BaseGraph::new(g.n(), g.edges().iter().map(|e| (position[e.u], position[e.v])))
}

/// graph6 encoding of `g` as labeled (`n ≤ 62`).
pub fn graph6(g: &BaseGraph) -> String {
    let n = g.n();
    assert!(n <= 62, "graph6 encoding here supports n <= 62");
    let mut out = String::new();
    out.push((n as u8 + 63) as char);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | u8::from(g.edge_index(i, j).is_some());
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

pub fn parse_graph6(s: &str) -> Result<BaseGraph> {
    let bytes = s.trim().as_bytes();
    let bad = Error::DomainError("malformed graph6 string");
    let (&first, rest) = bytes.split_first().ok_or(bad.clone())?;
    if !(63..=125).contains(&first) || rest.iter().any(|b| !(63..=126).contains(b)) {
        return Err(bad);
    }
    let n = (first - 63) as usize;
    let bits = n * n.saturating_sub(1) / 2;
    if rest.len() != bits.div_ceil(6) {
        return Err(bad);
    }
    let bit = |idx: usize| (rest[idx / 6] - 63) >> (5 - idx % 6) & 1 == 1;
    let mut pairs = Vec::new();
    let mut idx = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(idx) {
                pairs.push((i, j));
            }
            idx += 1;
        }
    }
    BaseGraph::new(n, pairs)
}

/// Canonical graph6 string, the identifier used in search reports.
pub fn canonical_graph6(g: &BaseGraph) -> Result<String> {
    Ok(graph6(&canonical_graph(g)?))
}

fn connected(adj: &[u16]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let mut seen = 1u16;
    let mut frontier = 1u16;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen.count_ones() as usize == n
}

struct RegularGen {
    n: usize,
    r: usize,
    connected_only: bool,
    adj: Vec<u16>,
    found: BTreeMap<u128, Vec<u16>>,
}

impl RegularGen {
    fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    fn run(&mut self, v: usize) {
        if v == self.n {
            if !self.connected_only || connected(&self.adj) {
                let mut best = None;
                search(&self.adj, alloc::vec![0; self.n], &mut best);
                let (code, order) = best.expect("nonempty graph");
                self.found.entry(code).or_insert_with(|| relabel(&self.adj, &order));
            }
            return;
        }
        let need = self.r - self.degree(v);
        let candidates: Vec<usize> =
            ((v + 1)..self.n).filter(|&w| self.degree(w) < self.r && self.adj[v] >> w & 1 == 0).collect();
        if candidates.len() < need {
            return;
        }
        // candidates with identical neighborhoods are interchangeable; only
        // prefixes of each such class are chosen
        let class: Vec<usize> = candidates
            .iter()
            .enumerate()
            .map(|(i, &w)| (0..i).find(|&j| self.adj[candidates[j]] == self.adj[w]).unwrap_or(i))
            .collect();
        let mut chosen = Vec::with_capacity(need);
        self.choose(v, &candidates, &class, 0, need, &mut chosen);
    }

    fn choose(&mut self, v: usize, cand: &[usize], class: &[usize], from: usize, need: usize, chosen: &mut Vec<usize>) {
        if chosen.len() == need {
            for &i in chosen.iter() {
                self.adj[v] |= 1 << cand[i];
                self.adj[cand[i]] |= 1 << v;
            }
            self.run(v + 1);
            for &i in chosen.iter() {
                self.adj[v] &= !(1 << cand[i]);
                self.adj[cand[i]] &= !(1 << v);
            }
            return;
        }
        for i in from..cand.len() {
            if cand.len() - i < need - chosen.len() {
                break;
            }
            // skip i if an earlier member of its class was passed over
            let skipped_peer = (0..i).any(|j| class[j] == class[i] && !chosen.contains(&j));
            if skipped_peer {
                continue;
            }
            chosen.push(i);
            self.choose(v, cand, class, i + 1, need, chosen);
            chosen.pop();
        }
    }
}

fn relabel(adj: &[u16], order: &[usize]) -> Vec<u16> {
    let n = adj.len();
    let mut position = alloc::vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut out = alloc::vec![0u16; n];
    for u in 0..n {
        for v in 0..n {
            if adj[u] >> v & 1 == 1 {
                out[position[u]] |= 1 << position[v];
            }
        }
    }
    out
}

/// All `r`-regular graphs on `n` vertices up to isomorphism, canonically
/// labeled and sorted by canonical code.
pub fn regular_graphs(n: usize, r: usize, connected_only: bool) -> Result<Vec<BaseGraph>> {
    if n > MAX_CANON_N {
        return Err(Error::TooLarge { n, limit: MAX_CANON_N });
    }
    if n == 0 || r >= n || (n * r) % 2 == 1 {
        return Ok(Vec::new());
    }
    let mut gen = RegularGen { n, r, connected_only, adj: alloc::vec![0; n], found: BTreeMap::new() };
    gen.run(0);
    Ok(gen.found.values().map(|adj| from_masks(adj)).collect())
}

/// Every graph on `n ≤ 6` vertices up to isomorphism, sorted by code.
pub fn all_graphs(n: usize) -> Result<Vec<BaseGraph>> {
    if n > MAX_ALL_GRAPHS_N {
        return Err(Error::TooLarge { n, limit: MAX_ALL_GRAPHS_N });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    let mut found = BTreeMap::new();
    for bits in 0u32..(1 << pairs.len()) {
        let mut adj = alloc::vec![0u16; n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if bits >> i & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        let mut best = None;
        search(&adj, alloc::vec![0; n], &mut best);
        let (code, order) = best.unwrap_or((0, Vec::new()));
        found.entry(code).or_insert_with(|| relabel(&adj, &order));
    }
    Ok(found.values().map(|adj| from_masks(adj)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph6_round_trip() {
        let p = BaseGraph::petersen();
        let s = graph6(&p);
        assert_eq!(parse_graph6(&s).unwrap(), p);
        assert_eq!(graph6(&BaseGraph::complete(4)), "C~");
        assert_eq!(graph6(&BaseGraph::empty(0)), "?");
        assert!(parse_graph6("C~~").is_err());
    }

    #[test]
    fn canonical_form_is_label_invariant() {
        let c6 = BaseGraph::cycle(6);
        let shuffled = BaseGraph::new(6, [(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)]).unwrap();
        assert_eq!(canonical_form(&c6).unwrap().0, canonical_form(&shuffled).unwrap().0);
        let prism =
            BaseGraph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]).unwrap();
        assert_ne!(canonical_form(&prism).unwrap().0, canonical_form(&BaseGraph::complete_bipartite(3, 3)).unwrap().0);
    }

    #[test]
    fn small_graph_counts() {
        let counts: alloc::vec::Vec<usize> = (1..=6).map(|n| all_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, [1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn regular_graph_counts() {
        let cubic: alloc::vec::Vec<usize> =
            [4, 6, 8, 10].iter().map(|&n| regular_graphs(n, 3, true).unwrap().len()).collect();
        assert_eq!(cubic, [1, 2, 5, 19]);
        let quartic: alloc::vec::Vec<usize> = (5..=9).map(|n| regular_graphs(n, 4, true).unwrap().len()).collect();
        assert_eq!(quartic, [1, 1, 2, 6, 16]);
        assert_eq!(regular_graphs(8, 2, false).unwrap().len(), 3);
        assert!(regular_graphs(5, 3, true).unwrap().is_empty());
    }
}
