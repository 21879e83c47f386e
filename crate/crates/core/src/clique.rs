//! Bottleneck cliques: the largest `w` such that some `k` points are
//! pairwise joined by admitted edges of weight `≥ w`.
//!
//! Edges are inserted in decreasing weight. The first insertion that closes a
//! `k`-clique fixes the answer, since every earlier edge is at least as heavy.
//! Exhaustive over all `k`-subsets without enumerating them.

use crate::par;

/// A weighted pair with a filter key.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Edge {
    pub weight: f64,
    pub key: f64,
    pub i: u32,
    pub j: u32,
}

/// Sorts by decreasing weight, then by endpoints, so results are reproducible.
pub(crate) fn sort_edges(edges: &mut [Edge]) {
    edges.sort_unstable_by(|a, b| b.weight.total_cmp(&a.weight).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)));
}

/// All pairs `i < j` of `0..m`, in parallel.
pub(crate) fn all_pairs(m: usize, f: impl Fn(usize, usize) -> Option<Edge> + Sync) -> Vec<Edge> {
    par::map_range(m, |i| (i + 1..m).filter_map(|j| f(i, j)).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}

/// For each threshold, the bottleneck `k`-clique among edges with
/// `admit(edge.key, threshold)`. `edges` must be sorted by [`sort_edges`].
pub(crate) fn bottleneck_cliques(
    m: usize,
    k: usize,
    edges: &[Edge],
    thresholds: &[f64],
    admit: impl Fn(f64, f64) -> bool + Sync,
) -> Vec<Option<(f64, Vec<usize>)>> {
    par::map_slice(thresholds, |&t| bottleneck_clique(m, k, edges.iter().filter(|e| admit(e.key, t))))
}

pub(crate) fn bottleneck_clique<'a>(m: usize, k: usize, edges: impl Iterator<Item = &'a Edge>) -> Option<(f64, Vec<usize>)> {
    assert!(k >= 2, "cliques have at least two points");
    let words = m.div_ceil(64);
    let mut adj = vec![0u64; m * words];
    let mut common = vec![0u64; words];
    for e in edges {
        let (i, j) = (e.i as usize, e.j as usize);
        adj[i * words + j / 64] |= 1 << (j % 64);
        adj[j * words + i / 64] |= 1 << (i % 64);
        if k == 2 {
            return Some((e.weight, vec![i, j]));
        }
        for (w, c) in common.iter_mut().enumerate() {
            *c = adj[i * words + w] & adj[j * words + w];
        }
        let mut found = vec![i, j];
        if extend(&adj, words, &common, k - 2, &mut found) {
            found.sort_unstable();
            return Some((e.weight, found));
        }
    }
    None
}

fn extend(adj: &[u64], words: usize, cands: &[u64], need: usize, found: &mut Vec<usize>) -> bool {
    if need == 0 {
        return true;
    }
    let mut cands = cands.to_vec();
    while let Some(v) = first_bit(&cands) {
        cands[v / 64] &= !(1 << (v % 64));
        let next: Vec<u64> = cands.iter().zip(&adj[v * words..(v + 1) * words]).map(|(c, a)| c & a).collect();
        found.push(v);
        if extend(adj, words, &next, need - 1, found) {
            return true;
        }
        found.pop();
    }
    false
}

fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Calls `visit` on every increasing extension of `t` to length `k` with
/// entries below `m`.
#[cfg(test)]
pub(crate) fn for_each_extension(t: &mut Vec<usize>, k: usize, m: usize, visit: &mut impl FnMut(&[usize])) {
    if t.len() == k {
        visit(t);
        return;
    }
    let start = t.last().map_or(0, |&l| l + 1);
    for next in start..m {
        t.push(next);
        for_each_extension(t, k, m, visit);
        t.pop();
    }
}
