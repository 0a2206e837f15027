//! Graph representation under 1D partitioning.
//!
//! Each PE owns a contiguous range of vertex ids together with the full
//! neighborhoods of those vertices ([`LocalGraph`]). Triangle counting works on
//! an [`OrientedGraph`] derived from it, where every edge points from the lower
//! to the higher vertex under the (degree, id) order.

mod local;
mod oriented;

pub use local::{GhostInfo, LocalGraph};
pub use oriented::{
    compare_order, contract_to_cut, expand_ghost_adjacency, orient_and_sort, DegreeOrderKey,
    GhostDegrees, Mode, OrientedGraph,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Global vertex identifier. Dense in `[0, n)` after normalization.
pub type VertexId = u64;

/// Index of a processing element.
pub type PeId = usize;

/// An undirected edge as a pair of endpoints.
pub type Edge = (VertexId, VertexId);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} is out of range (n = {n})")]
    OutOfRange { vertex: VertexId, n: u64 },
    #[error("degree of vertex {0} is unknown")]
    MissingDegree(VertexId),
    #[error("edge ({0}, {1}) has no endpoint owned by PE {2}")]
    ForeignEdge(VertexId, VertexId, PeId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("operation requires {expected} mode, graph is in {found} mode")]
    Mode {
        expected: &'static str,
        found: &'static str,
    },
}

/// Contiguous 1D partition of `[0, n)` over `p` PEs.
///
/// `boundaries[i]..boundaries[i + 1]` is the vertex range of PE `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    boundaries: Vec<VertexId>,
}

impl Partition {
    pub fn from_boundaries(boundaries: Vec<VertexId>) -> Result<Self, GraphError> {
        if boundaries.len() < 2 {
            return Err(GraphError::InvalidPartition(
                "need at least one range".into(),
            ));
        }
        if boundaries[0] != 0 {
            return Err(GraphError::InvalidPartition(
                "first boundary must be 0".into(),
            ));
        }
        if boundaries.windows(2).any(|w| w[0] > w[1]) {
            return Err(GraphError::InvalidPartition(
                "boundaries must be non-decreasing".into(),
            ));
        }
        Ok(Self { boundaries })
    }

    /// Balanced contiguous ranges: the first `n mod p` PEs get `ceil(n / p)`
    /// vertices, the rest `floor(n / p)`.
    pub fn balanced(n: u64, p: usize) -> Result<Self, GraphError> {
        if p == 0 {
            return Err(GraphError::InvalidPartition("p must be >= 1".into()));
        }
        if (p as u64) > n {
            return Err(GraphError::InvalidPartition(format!(
                "more PEs ({p}) than vertices ({n})"
            )));
        }
        let base = n / p as u64;
        let extra = n % p as u64;
        let mut boundaries = Vec::with_capacity(p + 1);
        let mut acc = 0;
        boundaries.push(0);
        for i in 0..p as u64 {
            acc += base + u64::from(i < extra);
            boundaries.push(acc);
        }
        Ok(Self { boundaries })
    }

    pub fn num_pes(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn num_vertices(&self) -> u64 {
        *self.boundaries.last().unwrap()
    }

    pub fn boundaries(&self) -> &[VertexId] {
        &self.boundaries
    }

    /// Vertex range `[begin, end)` owned by `pe`.
    pub fn range(&self, pe: PeId) -> (VertexId, VertexId) {
        (self.boundaries[pe], self.boundaries[pe + 1])
    }

    pub fn rank_of(&self, v: VertexId) -> Result<PeId, GraphError> {
        let n = self.num_vertices();
        if v >= n {
            return Err(GraphError::OutOfRange { vertex: v, n });
        }
        // Last boundary b with b <= v; empty ranges are skipped because they
        // share their boundary with the next range.
        Ok(self.boundaries.partition_point(|&b| b <= v) - 1)
    }
}

/// Free-function form of [`Partition::rank_of`].
pub fn rank_of(v: VertexId, part: &Partition) -> Result<PeId, GraphError> {
    part.rank_of(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_ten_over_four() {
        let part = Partition::balanced(10, 4).unwrap();
        assert_eq!(part.boundaries(), &[0, 3, 6, 8, 10]);
        assert_eq!(part.rank_of(0).unwrap(), 0);
        assert_eq!(part.rank_of(7).unwrap(), 2);
        assert_eq!(part.rank_of(9).unwrap(), 3);
    }

    #[test]
    fn out_of_range() {
        let part = Partition::balanced(10, 4).unwrap();
        assert_eq!(
            part.rank_of(10),
            Err(GraphError::OutOfRange { vertex: 10, n: 10 })
        );
    }

    #[test]
    fn too_many_pes() {
        assert!(Partition::balanced(3, 4).is_err());
        assert!(Partition::balanced(3, 0).is_err());
    }

    #[test]
    fn empty_ranges_are_skipped() {
        let part = Partition::from_boundaries(vec![0, 2, 2, 5]).unwrap();
        assert_eq!(part.rank_of(1).unwrap(), 0);
        assert_eq!(part.rank_of(2).unwrap(), 2);
    }

    #[test]
    fn rank_exhaustive_small() {
        for n in 1..40u64 {
            for p in 1..=n.min(9) as usize {
                let part = Partition::balanced(n, p).unwrap();
                let mut prev = 0;
                for v in 0..n {
                    let r = part.rank_of(v).unwrap();
                    assert!(part.boundaries()[r] <= v && v < part.boundaries()[r + 1]);
                    assert!(r >= prev);
                    prev = r;
                }
                let sizes: Vec<u64> = part.boundaries().windows(2).map(|w| w[1] - w[0]).collect();
                let max = *sizes.iter().max().unwrap();
                let min = *sizes.iter().min().unwrap();
                assert!(max - min <= 1);
            }
        }
    }
}
