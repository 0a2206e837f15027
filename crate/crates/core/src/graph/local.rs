use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Edge, GraphError, Partition, PeId, VertexId};

/// What a PE knows about a ghost vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostInfo {
    pub owner: PeId,
    pub degree: Option<u64>,
}

/// Adjacency array of one PE's vertex range.
///
/// Row `i` holds the full, id-sorted neighborhood of vertex `begin + i`.
/// Internal edges therefore appear twice, cut edges once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGraph {
    pe: PeId,
    begin: VertexId,
    end: VertexId,
    offsets: Vec<usize>,
    adjacency: Vec<VertexId>,
    ghosts: BTreeMap<VertexId, GhostInfo>,
}

impl LocalGraph {
    /// Builds the local view of `pe` from edges that each have at least one
    /// endpoint in the PE's range. Duplicate edges are collapsed.
    pub fn build(edges: &[Edge], part: &Partition, pe: PeId) -> Result<Self, GraphError> {
        let (begin, end) = part.range(pe);
        let n = part.num_vertices();
        let local = |v: VertexId| v >= begin && v < end;
        let rows = (end - begin) as usize;

        let mut degree = vec![0usize; rows];
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::OutOfRange { vertex: x, n });
                }
            }
            match (local(u), local(v)) {
                (false, false) => return Err(GraphError::ForeignEdge(u, v, pe)),
                (lu, lv) => {
                    if lu {
                        degree[(u - begin) as usize] += 1;
                    }
                    if lv {
                        degree[(v - begin) as usize] += 1;
                    }
                }
            }
        }

        let mut offsets = Vec::with_capacity(rows + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..rows].to_vec();
        let mut adjacency = vec![0; *offsets.last().unwrap()];
        let mut ghosts = BTreeMap::new();
        for &(u, v) in edges {
            for (a, b) in [(u, v), (v, u)] {
                if local(a) {
                    let row = (a - begin) as usize;
                    adjacency[fill[row]] = b;
                    fill[row] += 1;
                    if !local(b) {
                        ghosts.entry(b).or_insert(GhostInfo {
                            owner: part.rank_of(b)?,
                            degree: None,
                        });
                    }
                }
            }
        }

        // Sort and collapse duplicates row by row, compacting in place.
        let mut compact = Vec::with_capacity(adjacency.len());
        let mut new_offsets = Vec::with_capacity(rows + 1);
        new_offsets.push(0);
        for row in 0..rows {
            let slice = &mut adjacency[offsets[row]..offsets[row + 1]];
            slice.sort_unstable();
            let start = compact.len();
            for &x in slice.iter() {
                if compact.len() == start || *compact.last().unwrap() != x {
                    compact.push(x);
                }
            }
            new_offsets.push(compact.len());
        }

        Ok(Self {
            pe,
            begin,
            end,
            offsets: new_offsets,
            adjacency: compact,
            ghosts,
        })
    }

    pub fn pe(&self) -> PeId {
        self.pe
    }

    /// Local vertex range `[begin, end)`.
    pub fn range(&self) -> (VertexId, VertexId) {
        (self.begin, self.end)
    }

    pub fn num_local(&self) -> usize {
        (self.end - self.begin) as usize
    }

    pub fn is_local(&self, v: VertexId) -> bool {
        v >= self.begin && v < self.end
    }

    pub fn local_vertices(&self) -> impl Iterator<Item = VertexId> {
        self.begin..self.end
    }

    /// Full neighborhood of a local vertex.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let row = (v - self.begin) as usize;
        &self.adjacency[self.offsets[row]..self.offsets[row + 1]]
    }

    pub fn local_degree(&self, v: VertexId) -> u64 {
        self.neighbors(v).len() as u64
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn adjacency(&self) -> &[VertexId] {
        &self.adjacency
    }

    /// Number of stored adjacency entries, i.e. `|E_i|` counted per direction.
    pub fn num_adjacency_entries(&self) -> usize {
        self.adjacency.len()
    }

    pub fn ghosts(&self) -> &BTreeMap<VertexId, GhostInfo> {
        &self.ghosts
    }

    pub fn ghost(&self, v: VertexId) -> Option<&GhostInfo> {
        self.ghosts.get(&v)
    }

    /// Stores exchanged ghost degrees in the ghost table. Entries for
    /// vertices that are not ghosts are ignored.
    pub fn record_ghost_degrees<'a>(
        &mut self,
        degrees: impl IntoIterator<Item = (&'a VertexId, &'a u64)>,
    ) {
        for (v, d) in degrees {
            if let Some(info) = self.ghosts.get_mut(v) {
                info.degree = Some(*d);
            }
        }
    }

    /// Local vertices with at least one ghost neighbor.
    pub fn interface_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.local_vertices()
            .filter(move |&v| self.neighbors(v).iter().any(|&u| !self.is_local(u)))
    }

    /// Every undirected edge with a local endpoint, once, as `(min, max)`.
    pub fn undirected_edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for v in self.local_vertices() {
            for &u in self.neighbors(v) {
                if !self.is_local(u) || v < u {
                    out.push((v.min(u), v.max(u)));
                }
            }
        }
        out.sort_unstable();
        out
    }
}
