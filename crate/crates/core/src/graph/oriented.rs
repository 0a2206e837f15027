use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Edge, GraphError, LocalGraph, PeId, VertexId};

/// Degrees of ghost vertices, as learned from the degree exchange.
pub type GhostDegrees = BTreeMap<VertexId, u64>;

/// Position of a vertex in the degree order: lower degree first, ties broken
/// by id. Derived `Ord` compares `degree` before `id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DegreeOrderKey {
    pub degree: u64,
    pub id: VertexId,
}

impl DegreeOrderKey {
    pub fn new(degree: u64, id: VertexId) -> Self {
        Self { degree, id }
    }
}

/// Compares `u` and `v` under the degree order, looking degrees up through
/// `degree`.
pub fn compare_order(
    u: VertexId,
    v: VertexId,
    degree: impl Fn(VertexId) -> Option<u64>,
) -> Result<Ordering, GraphError> {
    let du = degree(u).ok_or(GraphError::MissingDegree(u))?;
    let dv = degree(v).ok_or(GraphError::MissingDegree(v))?;
    Ok(DegreeOrderKey::new(du, u).cmp(&DegreeOrderKey::new(dv, v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Out-edges of local vertices only.
    Plain,
    /// Plain plus ghost rows holding incoming cut edges.
    Expanded,
    /// Only oriented cut edges of local vertices remain.
    Contracted,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Plain => "plain",
            Mode::Expanded => "expanded",
            Mode::Contracted => "contracted",
        }
    }
}

/// Degree-oriented adjacency of one PE.
///
/// Rows ("slots") cover the local vertices first, in id order, followed by the
/// ghost vertices in id order. Every row is sorted by [`DegreeOrderKey`] so two
/// rows can be intersected by a linear merge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedGraph {
    pe: PeId,
    begin: VertexId,
    end: VertexId,
    ghost_ids: Vec<VertexId>,
    ghost_owners: Vec<PeId>,
    keys: Vec<DegreeOrderKey>,
    offsets: Vec<usize>,
    targets: Vec<DegreeOrderKey>,
    mode: Mode,
}

impl OrientedGraph {
    pub fn pe(&self) -> PeId {
        self.pe
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn range(&self) -> (VertexId, VertexId) {
        (self.begin, self.end)
    }

    pub fn num_local(&self) -> usize {
        (self.end - self.begin) as usize
    }

    pub fn num_slots(&self) -> usize {
        self.keys.len()
    }

    pub fn is_local(&self, v: VertexId) -> bool {
        v >= self.begin && v < self.end
    }

    pub fn ghost_ids(&self) -> &[VertexId] {
        &self.ghost_ids
    }

    pub fn slot_of(&self, v: VertexId) -> Option<usize> {
        if self.is_local(v) {
            Some((v - self.begin) as usize)
        } else {
            self.ghost_ids
                .binary_search(&v)
                .ok()
                .map(|i| self.num_local() + i)
        }
    }

    pub fn key_of_slot(&self, slot: usize) -> DegreeOrderKey {
        self.keys[slot]
    }

    pub fn key_of(&self, v: VertexId) -> Option<DegreeOrderKey> {
        self.slot_of(v).map(|s| self.keys[s])
    }

    pub fn degree_of(&self, v: VertexId) -> Option<u64> {
        self.key_of(v).map(|k| k.degree)
    }

    /// Owner PE of a vertex known to this graph.
    pub fn owner_of(&self, v: VertexId) -> Option<PeId> {
        if self.is_local(v) {
            Some(self.pe)
        } else {
            self.ghost_ids
                .binary_search(&v)
                .ok()
                .map(|i| self.ghost_owners[i])
        }
    }

    pub fn out_of_slot(&self, slot: usize) -> &[DegreeOrderKey] {
        &self.targets[self.offsets[slot]..self.offsets[slot + 1]]
    }

    /// `A(v)`; empty for vertices unknown to this PE.
    pub fn out(&self, v: VertexId) -> &[DegreeOrderKey] {
        match self.slot_of(v) {
            Some(s) => self.out_of_slot(s),
            None => &[],
        }
    }

    pub fn local_slots(&self) -> std::ops::Range<usize> {
        0..self.num_local()
    }

    pub fn ghost_slots(&self) -> std::ops::Range<usize> {
        self.num_local()..self.num_slots()
    }

    pub fn num_stored_edges(&self) -> usize {
        self.targets.len()
    }

    /// All stored directed edges `(tail, head)`.
    pub fn directed_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.num_slots()).flat_map(move |s| {
            let tail = self.keys[s].id;
            self.out_of_slot(s).iter().map(move |h| (tail, h.id))
        })
    }

    fn from_rows(
        template: &OrientedGraph,
        rows: Vec<Vec<DegreeOrderKey>>,
        mode: Mode,
    ) -> OrientedGraph {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        for row in rows {
            targets.extend(row);
            offsets.push(targets.len());
        }
        OrientedGraph {
            pe: template.pe,
            begin: template.begin,
            end: template.end,
            ghost_ids: template.ghost_ids.clone(),
            ghost_owners: template.ghost_owners.clone(),
            keys: template.keys.clone(),
            offsets,
            targets,
            mode,
        }
    }
}

/// Orients the local graph: `A(v) = {x in N_v | x > v}` for every local `v`,
/// each row sorted by degree order. Ghost rows are empty.
///
/// Ghost degrees come from `ghost_degrees`, falling back to the degrees
/// recorded in the ghost table.
pub fn orient_and_sort(
    lg: &LocalGraph,
    ghost_degrees: &GhostDegrees,
) -> Result<OrientedGraph, GraphError> {
    let (begin, end) = lg.range();
    let mut ghost_ids = Vec::with_capacity(lg.ghosts().len());
    let mut ghost_owners = Vec::with_capacity(lg.ghosts().len());
    let mut keys = Vec::with_capacity(lg.num_local() + lg.ghosts().len());
    for v in lg.local_vertices() {
        keys.push(DegreeOrderKey::new(lg.local_degree(v), v));
    }
    for (&g, info) in lg.ghosts() {
        let degree = ghost_degrees
            .get(&g)
            .copied()
            .or(info.degree)
            .ok_or(GraphError::MissingDegree(g))?;
        ghost_ids.push(g);
        ghost_owners.push(info.owner);
        keys.push(DegreeOrderKey::new(degree, g));
    }

    let num_local = lg.num_local();
    let key_of = |v: VertexId| -> DegreeOrderKey {
        if v >= begin && v < end {
            keys[(v - begin) as usize]
        } else {
            // Every neighbor is local or a ghost by construction.
            keys[num_local + ghost_ids.binary_search(&v).unwrap()]
        }
    };

    let mut offsets = Vec::with_capacity(keys.len() + 1);
    offsets.push(0);
    let mut targets = Vec::new();
    for v in lg.local_vertices() {
        let own = key_of(v);
        let start = targets.len();
        targets.extend(
            lg.neighbors(v)
                .iter()
                .map(|&x| key_of(x))
                .filter(|k| *k > own),
        );
        targets[start..].sort_unstable();
        offsets.push(targets.len());
    }
    for _ in 0..ghost_ids.len() {
        offsets.push(targets.len());
    }

    Ok(OrientedGraph {
        pe: lg.pe(),
        begin,
        end,
        ghost_ids,
        ghost_owners,
        keys,
        offsets,
        targets,
        mode: Mode::Plain,
    })
}

/// Moves incoming cut edges onto ghost rows:
/// `A(g) = {x in V_i | {g, x} in E, x > g}` for every ghost `g`.
///
/// Local rows are untouched. Afterwards every edge with a local endpoint is
/// stored exactly once on this PE.
pub fn expand_ghost_adjacency(
    g: &OrientedGraph,
    lg: &LocalGraph,
) -> Result<OrientedGraph, GraphError> {
    if g.mode != Mode::Plain {
        return Err(GraphError::Mode {
            expected: Mode::Plain.name(),
            found: g.mode.name(),
        });
    }
    let mut ghost_rows: Vec<Vec<DegreeOrderKey>> = vec![Vec::new(); g.ghost_ids.len()];
    for v in lg.local_vertices() {
        let own = g.keys[(v - g.begin) as usize];
        for &x in lg.neighbors(v) {
            if g.is_local(x) {
                continue;
            }
            let gi = g.ghost_ids.binary_search(&x).unwrap();
            if g.keys[g.num_local() + gi] < own {
                ghost_rows[gi].push(own);
            }
        }
    }
    let mut rows: Vec<Vec<DegreeOrderKey>> =
        g.local_slots().map(|s| g.out_of_slot(s).to_vec()).collect();
    for mut row in ghost_rows {
        row.sort_unstable();
        rows.push(row);
    }
    Ok(OrientedGraph::from_rows(g, rows, Mode::Expanded))
}

/// Drops every non-cut edge: `A(v) = {x in N_v | x > v} \ V_i` for local `v`,
/// ghost rows emptied.
pub fn contract_to_cut(g: &OrientedGraph) -> OrientedGraph {
    let mut rows: Vec<Vec<DegreeOrderKey>> = g
        .local_slots()
        .map(|s| {
            g.out_of_slot(s)
                .iter()
                .copied()
                .filter(|k| !g.is_local(k.id))
                .collect()
        })
        .collect();
    rows.extend(g.ghost_slots().map(|_| Vec::new()));
    OrientedGraph::from_rows(g, rows, Mode::Contracted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Partition;

    fn single_pe(edges: &[Edge], n: u64) -> (LocalGraph, OrientedGraph) {
        let part = Partition::balanced(n, 1).unwrap();
        let lg = LocalGraph::build(edges, &part, 0).unwrap();
        let og = orient_and_sort(&lg, &GhostDegrees::new()).unwrap();
        (lg, og)
    }

    fn ids(keys: &[DegreeOrderKey]) -> Vec<VertexId> {
        keys.iter().map(|k| k.id).collect()
    }

    #[test]
    fn compare_order_examples() {
        let deg = |v: VertexId| match v {
            0 => Some(2),
            1 => Some(5),
            3 | 7 => Some(3),
            _ => None,
        };
        assert_eq!(compare_order(0, 1, deg).unwrap(), Ordering::Less);
        assert_eq!(compare_order(3, 7, deg).unwrap(), Ordering::Less);
        assert_eq!(compare_order(7, 3, deg).unwrap(), Ordering::Greater);
        assert_eq!(compare_order(3, 3, deg).unwrap(), Ordering::Equal);
        assert_eq!(compare_order(3, 9, deg), Err(GraphError::MissingDegree(9)));
    }

    #[test]
    fn star_points_at_center() {
        let edges = [(0, 1), (0, 2), (0, 3), (0, 4)];
        let (_, og) = single_pe(&edges, 5);
        assert!(og.out(0).is_empty());
        for leaf in 1..5 {
            assert_eq!(ids(og.out(leaf)), vec![0]);
        }
    }

    #[test]
    fn triangle_tie_rule() {
        let (_, og) = single_pe(&[(0, 1), (1, 2), (0, 2)], 3);
        assert_eq!(ids(og.out(0)), vec![1, 2]);
        assert_eq!(ids(og.out(1)), vec![2]);
        assert!(og.out(2).is_empty());
    }

    #[test]
    fn missing_ghost_degree() {
        let part = Partition::balanced(4, 2).unwrap();
        let lg = LocalGraph::build(&[(0, 1), (1, 2)], &part, 0).unwrap();
        assert_eq!(
            orient_and_sort(&lg, &GhostDegrees::new()),
            Err(GraphError::MissingDegree(2))
        );
    }

    #[test]
    fn ghost_table_degrees_are_used() {
        let part = Partition::balanced(4, 2).unwrap();
        let mut lg = LocalGraph::build(&[(0, 1), (1, 2)], &part, 0).unwrap();
        lg.record_ghost_degrees([(&2, &2)]);
        let og = orient_and_sort(&lg, &GhostDegrees::new()).unwrap();
        assert_eq!(og.degree_of(2), Some(2));
    }

    #[test]
    fn path_contraction_keeps_only_cut_edge() {
        // 0-1-2-3 split {0,1 | 2,3}; d1 = d2 = 2 so 1 -> 2 by id.
        let part = Partition::balanced(4, 2).unwrap();
        let lg = LocalGraph::build(&[(0, 1), (1, 2)], &part, 0).unwrap();
        let degrees = GhostDegrees::from([(2, 2)]);
        let og = orient_and_sort(&lg, &degrees).unwrap();
        let c = contract_to_cut(&og);
        assert_eq!(c.mode(), Mode::Contracted);
        assert_eq!(c.directed_edges().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn single_pe_contraction_is_empty() {
        let (_, og) = single_pe(&[(0, 1), (1, 2), (0, 2), (2, 3)], 4);
        assert_eq!(contract_to_cut(&og).num_stored_edges(), 0);
    }

    #[test]
    fn expansion_rehomes_type2_edges() {
        // v=1, w=2 local to PE 0 (range 0..3), ghost x=3 with degree 2
        // is lower than v and w (degree 3 each).
        let part = Partition::from_boundaries(vec![0, 3, 6]).unwrap();
        let edges = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)];
        let lg = LocalGraph::build(&edges, &part, 0).unwrap();
        let og = orient_and_sort(&lg, &GhostDegrees::from([(3, 2)])).unwrap();
        assert!(og.out(3).is_empty());
        let ex = expand_ghost_adjacency(&og, &lg).unwrap();
        assert_eq!(ex.mode(), Mode::Expanded);
        assert_eq!(ids(ex.out(3)), vec![1, 2]);
        assert_eq!(ex.num_stored_edges(), lg.undirected_edges().len());
    }

    #[test]
    fn expansion_without_cut_is_identity() {
        let (lg, og) = single_pe(&[(0, 1), (1, 2), (0, 2)], 3);
        let ex = expand_ghost_adjacency(&og, &lg).unwrap();
        assert_eq!(
            ex.directed_edges().collect::<Vec<_>>(),
            og.directed_edges().collect::<Vec<_>>()
        );
    }

    #[test]
    fn expansion_requires_plain_mode() {
        let (lg, og) = single_pe(&[(0, 1)], 2);
        let c = contract_to_cut(&og);
        assert!(matches!(
            expand_ghost_adjacency(&c, &lg),
            Err(GraphError::Mode { .. })
        ));
        let ex = expand_ghost_adjacency(&og, &lg).unwrap();
        assert!(expand_ghost_adjacency(&ex, &lg).is_err());
    }

    #[test]
    fn triangle_over_three_pes_survives_contraction() {
        let part = Partition::balanced(3, 3).unwrap();
        let edges = [(0, 1), (1, 2), (0, 2)];
        let mut total = 0;
        for pe in 0..3 {
            let mine: Vec<Edge> = edges
                .iter()
                .copied()
                .filter(|&(u, v)| part.rank_of(u).unwrap() == pe || part.rank_of(v).unwrap() == pe)
                .collect();
            let lg = LocalGraph::build(&mine, &part, pe).unwrap();
            let degrees: GhostDegrees = lg.ghosts().keys().map(|&g| (g, 2)).collect();
            let og = orient_and_sort(&lg, &degrees).unwrap();
            total += contract_to_cut(&og).num_stored_edges();
        }
        assert_eq!(total, 3);
    }
}
