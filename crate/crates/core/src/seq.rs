//! Sequential counting and the brute-force oracles every distributed result
//! is checked against.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, OrientedGraph, Partition, VertexId};
use crate::num::Real;

/// Largest vertex count the dense-matrix oracles accept.
pub const ORACLE_MAX_VERTICES: u64 = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("graph with {n} vertices exceeds the oracle limit of {limit}")]
    TooLarge { n: u64, limit: u64 },
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// Triangle counts split by the number of distinct owner PEs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleClassCount {
    /// All three vertices on one PE.
    pub t1: u64,
    /// Two PEs involved.
    pub t2: u64,
    /// Three distinct PEs.
    pub t3: u64,
}

impl TriangleClassCount {
    pub fn total(&self) -> u64 {
        self.t1 + self.t2 + self.t3
    }
}

/// Triangle incidences per vertex, indexed by vertex id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerVertexDelta {
    pub delta: Vec<u64>,
}

impl PerVertexDelta {
    pub fn sum(&self) -> u64 {
        self.delta.iter().sum()
    }
}

/// Size of the intersection of two strictly increasing sequences, computed
/// with a linear merge.
pub fn intersect_count<T: Ord>(a: &[T], b: &[T]) -> u64 {
    let mut count = 0;
    intersect_for_each(a, b, |_| count += 1);
    count
}

/// Calls `f` for every element common to both strictly increasing sequences.
pub fn intersect_for_each<'a, T: Ord>(a: &'a [T], b: &'a [T], mut f: impl FnMut(&'a T)) {
    debug_assert!(
        a.windows(2).all(|w| w[0] < w[1]),
        "left input not strictly sorted"
    );
    debug_assert!(
        b.windows(2).all(|w| w[0] < w[1]),
        "right input not strictly sorted"
    );
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(&a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Compact-forward edge iterator over the local rows of `g`.
pub fn edge_iterator(g: &OrientedGraph) -> u64 {
    let mut total = 0;
    edge_iterator_with(g, |_, _, _| total += 1);
    total
}

/// Like [`edge_iterator`], reporting each triangle as `(v, u, w)` with
/// `v < u < w` in degree order.
pub fn edge_iterator_with(g: &OrientedGraph, mut emit: impl FnMut(VertexId, VertexId, VertexId)) {
    for slot in g.local_slots() {
        let v = g.key_of_slot(slot).id;
        let out_v = g.out_of_slot(slot);
        for u in out_v {
            intersect_for_each(out_v, g.out(u.id), |w| emit(v, u.id, w.id));
        }
    }
}

/// Sum over rows of `C(d+, 2)`.
pub fn count_wedges(g: &OrientedGraph) -> u64 {
    (0..g.num_slots())
        .map(|s| {
            let d = g.out_of_slot(s).len() as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum()
}

/// `delta / (d (d - 1))`, zero for `d <= 1`.
///
/// This is half the common `2 delta / (d (d - 1))` definition, so values lie in
/// `[0, 1/2]`.
pub fn lcc<S: Real>(delta: u64, degree: u64) -> S {
    if degree <= 1 {
        return S::zero();
    }
    S::of_u64(delta) / (S::of_u64(degree) * S::of_u64(degree - 1))
}

struct DenseAdjacency {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl DenseAdjacency {
    fn build(edges: &[Edge]) -> Result<Self, SeqError> {
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        if n > ORACLE_MAX_VERTICES {
            return Err(SeqError::TooLarge {
                n,
                limit: ORACLE_MAX_VERTICES,
            });
        }
        let n = n as usize;
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for &(u, v) in edges {
            if u == v {
                continue;
            }
            let (u, v) = (u as usize, v as usize);
            bits[u * words + v / 64] |= 1 << (v % 64);
            bits[v * words + u / 64] |= 1 << (u % 64);
        }
        Ok(Self { n, words, bits })
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    /// Every triangle `u < v < w` by id.
    fn for_each_triangle(&self, mut f: impl FnMut(usize, usize, usize)) {
        for u in 0..self.n {
            let ru = self.row(u);
            for v in (u + 1)..self.n {
                if ru[v / 64] >> (v % 64) & 1 == 0 {
                    continue;
                }
                let rv = self.row(v);
                let first = (v + 1) / 64;
                for word in first..self.words {
                    let mut common = ru[word] & rv[word];
                    if word == first {
                        let shift = (v + 1) % 64;
                        common &= u64::MAX.checked_shl(shift as u32).unwrap_or(0);
                    }
                    while common != 0 {
                        let bit = common.trailing_zeros() as usize;
                        f(u, v, word * 64 + bit);
                        common &= common - 1;
                    }
                }
            }
        }
    }
}

/// Counts triangles by enumerating every vertex triple through a dense
/// adjacency bit matrix. Independent of orientation and merging.
pub fn brute_force(edges: &[Edge]) -> Result<u64, SeqError> {
    let adj = DenseAdjacency::build(edges)?;
    let mut total = 0;
    adj.for_each_triangle(|_, _, _| total += 1);
    Ok(total)
}

/// All triangles as id-sorted triples.
pub fn enumerate_triangles(edges: &[Edge]) -> Result<Vec<[VertexId; 3]>, SeqError> {
    let adj = DenseAdjacency::build(edges)?;
    let mut out = Vec::new();
    adj.for_each_triangle(|u, v, w| out.push([u as VertexId, v as VertexId, w as VertexId]));
    Ok(out)
}

pub fn classify_triangles(
    edges: &[Edge],
    part: &Partition,
) -> Result<TriangleClassCount, SeqError> {
    let mut counts = TriangleClassCount::default();
    for [u, v, w] in enumerate_triangles(edges)? {
        let mut ranks = [part.rank_of(u)?, part.rank_of(v)?, part.rank_of(w)?];
        ranks.sort_unstable();
        let distinct = 1 + usize::from(ranks[0] != ranks[1]) + usize::from(ranks[1] != ranks[2]);
        match distinct {
            1 => counts.t1 += 1,
            2 => counts.t2 += 1,
            _ => counts.t3 += 1,
        }
    }
    Ok(counts)
}

pub fn per_vertex_deltas(edges: &[Edge]) -> Result<PerVertexDelta, SeqError> {
    let adj = DenseAdjacency::build(edges)?;
    let mut delta = vec![0u64; adj.n];
    adj.for_each_triangle(|u, v, w| {
        delta[u] += 1;
        delta[v] += 1;
        delta[w] += 1;
    });
    Ok(PerVertexDelta { delta })
}
