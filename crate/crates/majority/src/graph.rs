//! Finite graphs and digraphs over dense 1-based vertex ids.
//!
//! Vertices are always `v1, v2, …, vn`; the integer order of the ids is the
//! canonical vertex ordering used everywhere else in this crate (prefix
//! views, schedules, tie-breaking). Structures are immutable once built.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 1-based vertex id. `VertexId::new(3)` is the vertex `v3`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct VertexId(usize);

impl VertexId {
    /// Panics if `index` is zero; vertex ids start at 1.
    pub fn new(index: usize) -> Self {
        assert!(index >= 1, "vertex ids are 1-based");
        VertexId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }

    /// Zero-based position, for indexing per-vertex arrays.
    pub(crate) const fn pos(self) -> usize {
        self.0 - 1
    }
}

impl TryFrom<usize> for VertexId {
    type Error = String;
    fn try_from(index: usize) -> Result<Self, Self::Error> {
        if index >= 1 {
            Ok(VertexId(index))
        } else {
            Err("vertex ids are 1-based".to_owned())
        }
    }
}

impl From<VertexId> for usize {
    fn from(v: VertexId) -> usize {
        v.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("endpoint {vertex} out of range 1..={order}")]
    EndpointOutOfRange { vertex: usize, order: usize },
    #[error("self-loop ({0}, {0}) is not allowed")]
    SelfLoop(usize),
    #[error("prefix length {given} out of range 1..={order}")]
    PrefixOutOfRange { given: usize, order: usize },
    #[error("digraph is not acyclic: {0} lies on a cycle")]
    CycleDetected(VertexId),
}

/// A simple undirected graph on vertices `v1..vn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    order: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<VertexId>>,
}

impl FiniteGraph {
    /// Builds a graph from raw 1-based endpoint pairs, collapsing duplicate
    /// edges. Returns the graph together with the number of duplicates
    /// dropped.
    pub fn build(order: usize, edges: &[(usize, usize)]) -> Result<(Self, usize), GraphError> {
        let mut canonical = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let (u, v) = check_endpoints(a, b, order)?;
            canonical.push(if u <= v { (u, v) } else { (v, u) });
        }
        canonical.sort_unstable();
        let before = canonical.len();
        canonical.dedup();
        let duplicates = before - canonical.len();

        let mut adjacency = vec![Vec::new(); order];
        for &(u, v) in &canonical {
            adjacency[u - 1].push(VertexId(v));
            adjacency[v - 1].push(VertexId(u));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let edges = canonical
            .into_iter()
            .map(|(u, v)| (VertexId(u), VertexId(v)))
            .collect();
        Ok((
            FiniteGraph {
                order,
                edges,
                adjacency,
            },
            duplicates,
        ))
    }

    /// As [`FiniteGraph::build`], discarding the duplicate count.
    pub fn new(order: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::build(order, edges).map(|(g, _)| g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbours(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.pos()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.pos()].len()
    }

    pub fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.adjacency[u.pos()].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.order).map(VertexId)
    }

    /// The subgraph induced by `v1..vn`.
    pub fn induced_prefix(&self, n: usize) -> Result<Self, GraphError> {
        check_prefix(n, self.order)?;
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|(u, v)| u.index() <= n && v.index() <= n)
            .map(|(u, v)| (u.index(), v.index()))
            .collect();
        Ok(Self::new(n, &edges).expect("prefix of a valid graph is valid"))
    }
}

/// A simple directed graph on vertices `v1..vn`, no self-loops or
/// parallel arcs. `(u, v)` is the arc `u -> v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDigraph {
    order: usize,
    arcs: Vec<(VertexId, VertexId)>,
    out_adjacency: Vec<Vec<VertexId>>,
}

impl FiniteDigraph {
    /// Builds a digraph from raw 1-based arc pairs, collapsing duplicate
    /// arcs. Returns the digraph and the number of duplicates dropped.
    pub fn build(order: usize, arcs: &[(usize, usize)]) -> Result<(Self, usize), GraphError> {
        let mut canonical = Vec::with_capacity(arcs.len());
        for &(a, b) in arcs {
            let (u, v) = check_endpoints(a, b, order)?;
            canonical.push((u, v));
        }
        canonical.sort_unstable();
        let before = canonical.len();
        canonical.dedup();
        let duplicates = before - canonical.len();

        let mut out_adjacency = vec![Vec::new(); order];
        for &(u, v) in &canonical {
            out_adjacency[u - 1].push(VertexId(v));
        }
        let arcs = canonical
            .into_iter()
            .map(|(u, v)| (VertexId(u), VertexId(v)))
            .collect();
        Ok((
            FiniteDigraph {
                order,
                arcs,
                out_adjacency,
            },
            duplicates,
        ))
    }

    pub fn new(order: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::build(order, arcs).map(|(g, _)| g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn out_neighbours(&self, v: VertexId) -> &[VertexId] {
        &self.out_adjacency[v.pos()]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adjacency[v.pos()].len()
    }

    pub fn contains_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.out_adjacency[u.pos()].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.order).map(VertexId)
    }

    /// The subdigraph induced by `v1..vn`.
    pub fn induced_prefix(&self, n: usize) -> Result<Self, GraphError> {
        check_prefix(n, self.order)?;
        let arcs: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .filter(|(u, v)| u.index() <= n && v.index() <= n)
            .map(|(u, v)| (u.index(), v.index()))
            .collect();
        Ok(Self::new(n, &arcs).expect("prefix of a valid digraph is valid"))
    }

    /// An ordering in which every vertex appears after all of its
    /// out-neighbours (sinks first). Among simultaneously available
    /// vertices the lowest index is emitted first, so the result is
    /// deterministic. Fails on cyclic inputs, naming a vertex on a cycle.
    pub fn reverse_topological_order(&self) -> Result<Vec<VertexId>, GraphError> {
        let n = self.order;
        let mut remaining_out = vec![0usize; n];
        let mut in_neighbours = vec![Vec::new(); n];
        for &(u, v) in &self.arcs {
            remaining_out[u.pos()] += 1;
            in_neighbours[v.pos()].push(u);
        }

        let mut available: std::collections::BTreeSet<VertexId> = (1..=n)
            .map(VertexId)
            .filter(|v| remaining_out[v.pos()] == 0)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&v) = available.iter().next() {
            available.remove(&v);
            order.push(v);
            for &u in &in_neighbours[v.pos()] {
                remaining_out[u.pos()] -= 1;
                if remaining_out[u.pos()] == 0 {
                    available.insert(u);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(GraphError::CycleDetected(self.vertex_on_cycle(&remaining_out)))
        }
    }

    /// Walks forward along arcs among unprocessed vertices until a vertex
    /// repeats; that vertex lies on a cycle.
    fn vertex_on_cycle(&self, remaining_out: &[usize]) -> VertexId {
        let start = (1..=self.order)
            .map(VertexId)
            .find(|v| remaining_out[v.pos()] > 0)
            .expect("cycle detection only runs when vertices remain");
        let mut seen = vec![false; self.order];
        let mut current = start;
        loop {
            if seen[current.pos()] {
                return current;
            }
            seen[current.pos()] = true;
            current = *self.out_adjacency[current.pos()]
                .iter()
                .find(|w| remaining_out[w.pos()] > 0)
                .expect("every remaining vertex keeps an out-arc into the remaining set");
        }
    }
}

/// Common view used by majority verification: which incident edges are
/// audited at a vertex. Undirected graphs audit every incident edge,
/// digraphs only the outgoing arcs.
pub trait HostGraph {
    fn order(&self) -> usize;
    /// The opposite endpoints of the edges audited at `v`.
    fn audited_neighbours(&self, v: VertexId) -> &[VertexId];
    /// Whether the (directed or undirected) edge `u -> v` exists.
    fn has_edge(&self, u: VertexId, v: VertexId) -> bool;

    fn audited_degree(&self, v: VertexId) -> usize {
        self.audited_neighbours(v).len()
    }
}

impl HostGraph for FiniteGraph {
    fn order(&self) -> usize {
        self.order
    }
    fn audited_neighbours(&self, v: VertexId) -> &[VertexId] {
        self.neighbours(v)
    }
    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains_edge(u, v)
    }
}

impl HostGraph for FiniteDigraph {
    fn order(&self) -> usize {
        self.order
    }
    fn audited_neighbours(&self, v: VertexId) -> &[VertexId] {
        self.out_neighbours(v)
    }
    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains_arc(u, v)
    }
}

fn check_endpoints(a: usize, b: usize, order: usize) -> Result<(usize, usize), GraphError> {
    for vertex in [a, b] {
        if vertex < 1 || vertex > order {
            return Err(GraphError::EndpointOutOfRange { vertex, order });
        }
    }
    if a == b {
        return Err(GraphError::SelfLoop(a));
    }
    Ok((a, b))
}

fn check_prefix(n: usize, order: usize) -> Result<(), GraphError> {
    if n < 1 || n > order {
        return Err(GraphError::PrefixOutOfRange { given: n, order });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    #[test]
    fn single_edge_degrees() {
        let g = FiniteGraph::new(2, &[(1, 2)]).unwrap();
        assert_eq!(g.degree(v(1)), 1);
        assert_eq!(g.degree(v(2)), 1);
    }

    #[test]
    fn triangle_degrees() {
        let g = FiniteGraph::new(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        for u in g.vertices() {
            assert_eq!(g.degree(u), 2);
        }
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(
            FiniteGraph::new(3, &[(1, 1)]).unwrap_err(),
            GraphError::SelfLoop(1)
        );
    }

    #[test]
    fn endpoint_out_of_range_rejected() {
        assert_eq!(
            FiniteGraph::new(3, &[(1, 4)]).unwrap_err(),
            GraphError::EndpointOutOfRange {
                vertex: 4,
                order: 3
            }
        );
        assert!(FiniteGraph::new(3, &[(0, 2)]).is_err());
    }

    #[test]
    fn duplicates_collapse_with_count() {
        let (g, dups) = FiniteGraph::build(3, &[(1, 2), (2, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(dups, 2);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn prefix_of_triangle_is_single_edge() {
        let g = FiniteGraph::new(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let p = g.induced_prefix(2).unwrap();
        assert_eq!(p.edges(), &[(v(1), v(2))]);
    }

    #[test]
    fn full_prefix_is_identity() {
        let g = FiniteGraph::new(4, &[(1, 2), (3, 4), (1, 4)]).unwrap();
        assert_eq!(g.induced_prefix(4).unwrap(), g);
    }

    #[test]
    fn prefix_of_path_to_one_vertex() {
        let g = FiniteGraph::new(3, &[(1, 2), (2, 3)]).unwrap();
        let p = g.induced_prefix(1).unwrap();
        assert_eq!(p.order(), 1);
        assert_eq!(p.edge_count(), 0);
    }

    #[test]
    fn prefix_out_of_range() {
        let g = FiniteGraph::new(3, &[(1, 2)]).unwrap();
        assert!(g.induced_prefix(0).is_err());
        assert!(g.induced_prefix(4).is_err());
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        let g = FiniteGraph::new(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 5)]).unwrap();
        let degree_sum: usize = g.vertices().map(|u| g.degree(u)).sum();
        assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn reverse_topological_chain() {
        let d = FiniteDigraph::new(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(d.reverse_topological_order().unwrap(), vec![v(3), v(2), v(1)]);
    }

    #[test]
    fn reverse_topological_tie_break_lowest_index() {
        let d = FiniteDigraph::new(3, &[(1, 2), (1, 3)]).unwrap();
        assert_eq!(d.reverse_topological_order().unwrap(), vec![v(2), v(3), v(1)]);
    }

    #[test]
    fn reverse_topological_rejects_two_cycle() {
        let d = FiniteDigraph::new(2, &[(1, 2), (2, 1)]).unwrap();
        match d.reverse_topological_order() {
            Err(GraphError::CycleDetected(w)) => assert!(w == v(1) || w == v(2)),
            other => panic!("expected cycle error, got {other:?}"),
        }
    }

    #[test]
    fn reverse_topological_property_on_dag() {
        let d = FiniteDigraph::new(6, &[(1, 2), (1, 3), (2, 4), (3, 4), (5, 1), (6, 4)]).unwrap();
        let order = d.reverse_topological_order().unwrap();
        let position: std::collections::HashMap<VertexId, usize> =
            order.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        for &(u, w) in d.arcs() {
            assert!(position[&w] < position[&u], "arc {u}->{w} out of order");
        }
    }

    #[test]
    fn digraph_duplicate_arcs_collapse() {
        let (d, dups) = FiniteDigraph::build(2, &[(1, 2), (1, 2)]).unwrap();
        assert_eq!(dups, 1);
        assert_eq!(d.arc_count(), 1);
        // opposite arcs are distinct
        let (d2, dups2) = FiniteDigraph::build(2, &[(1, 2), (2, 1)]).unwrap();
        assert_eq!(dups2, 0);
        assert_eq!(d2.arc_count(), 2);
    }

    #[test]
    fn digraph_prefix_keeps_inner_arcs() {
        let d = FiniteDigraph::new(4, &[(4, 1), (3, 2), (2, 1)]).unwrap();
        let p = d.induced_prefix(3).unwrap();
        assert_eq!(p.arcs(), &[(v(2), v(1)), (v(3), v(2))]);
    }
}
