//! Colour lists, correspondence (bad-pair) systems, colourings, and the
//! majority audit.
//!
//! The audit never touches floating point: a vertex passes at parameter `k`
//! exactly when `conflicts * k <= degree`, so "at most a 1/k proportion"
//! holds with equality allowed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{FiniteGraph, HostGraph, VertexId};

/// Colour drawn from a global universe. Compared by value only; input files
/// map colour names bijectively onto ids.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColourId(usize);

impl ColourId {
    pub const fn new(id: usize) -> Self {
        ColourId(id)
    }

    pub const fn id(self) -> usize {
        self.0
    }
}

impl fmt::Display for ColourId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

impl fmt::Debug for ColourId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("vertex {0} has an empty colour list")]
    EmptyList(VertexId),
    #[error("vertex {vertex} repeats colour {colour} in its list")]
    DuplicateColour { vertex: VertexId, colour: ColourId },
    #[error("no list given for vertex {0}")]
    MissingList(VertexId),
    #[error("majority parameter k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("vertex {0} is not coloured")]
    UncolouredVertex(VertexId),
    #[error("vertex {vertex} is coloured {colour}, which is outside its list")]
    ColourOutsideList { vertex: VertexId, colour: ColourId },
    #[error("edge ({0}, {1}) is not in the host graph")]
    EdgeNotInGraph(VertexId, VertexId),
}

/// Per-vertex colour lists for a host of a fixed order. Lists are stored
/// sorted by colour id; each list is nonempty with distinct colours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListSystem {
    lists: Vec<Vec<ColourId>>,
}

impl ListSystem {
    pub fn new(lists: Vec<Vec<ColourId>>) -> Result<Self, ConstraintError> {
        let mut sorted = Vec::with_capacity(lists.len());
        for (pos, mut list) in lists.into_iter().enumerate() {
            let vertex = VertexId::new(pos + 1);
            if list.is_empty() {
                return Err(ConstraintError::EmptyList(vertex));
            }
            list.sort_unstable();
            for pair in list.windows(2) {
                if pair[0] == pair[1] {
                    return Err(ConstraintError::DuplicateColour {
                        vertex,
                        colour: pair[0],
                    });
                }
            }
            sorted.push(list);
        }
        Ok(ListSystem { lists: sorted })
    }

    /// The same list for every vertex.
    pub fn uniform(order: usize, list: Vec<ColourId>) -> Result<Self, ConstraintError> {
        Self::new(vec![list; order])
    }

    pub fn order(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, v: VertexId) -> &[ColourId] {
        &self.lists[v.pos()]
    }

    pub fn contains(&self, v: VertexId, c: ColourId) -> bool {
        self.lists[v.pos()].binary_search(&c).is_ok()
    }

    /// `Some(s)` when every list has exactly `s` colours.
    pub fn uniform_size(&self) -> Option<usize> {
        let first = self.lists.first()?.len();
        self.lists.iter().all(|l| l.len() == first).then_some(first)
    }

    /// Sorted union of all lists.
    pub fn colour_universe(&self) -> Vec<ColourId> {
        let set: BTreeSet<ColourId> = self.lists.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// The lists of `v1..vn`.
    pub fn prefix(&self, n: usize) -> ListSystem {
        assert!(n <= self.lists.len());
        ListSystem {
            lists: self.lists[..n].to_vec(),
        }
    }
}

/// Per-edge sets of forbidden colour pairs. A pair set for the edge `uv` is
/// stored under the key `(min(u,v), max(u,v))` with pair components in key
/// order; queries against the opposite orientation reverse each pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorrespondenceSystem {
    pairs: BTreeMap<(VertexId, VertexId), Vec<(ColourId, ColourId)>>,
}

impl CorrespondenceSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `(cu, cv)` as bad across the edge `uv`. Idempotent.
    pub fn insert_pair(&mut self, u: VertexId, v: VertexId, cu: ColourId, cv: ColourId) {
        assert!(u != v, "correspondence pairs live on proper edges");
        let (key, pair) = if u < v { ((u, v), (cu, cv)) } else { ((v, u), (cv, cu)) };
        let entry = self.pairs.entry(key).or_default();
        if let Err(slot) = entry.binary_search(&pair) {
            entry.insert(slot, pair);
        }
    }

    /// The bad pairs across `uv`, oriented as `(colour at u, colour at v)`.
    pub fn pairs_for(&self, u: VertexId, v: VertexId) -> Vec<(ColourId, ColourId)> {
        if u < v {
            self.pairs.get(&(u, v)).cloned().unwrap_or_default()
        } else {
            self.pairs
                .get(&(v, u))
                .map(|ps| ps.iter().map(|&(a, b)| (b, a)).collect())
                .unwrap_or_default()
        }
    }

    /// Whether colouring `u` with `cu` and `v` with `cv` makes `uv` bad.
    pub fn forbids(&self, u: VertexId, cu: ColourId, v: VertexId, cv: ColourId) -> bool {
        let (key, pair) = if u < v {
            ((u, v), (cu, cv))
        } else {
            ((v, u), (cv, cu))
        };
        self.pairs
            .get(&key)
            .is_some_and(|ps| ps.binary_search(&pair).is_ok())
    }

    /// The partner `c'` with `(cu, c')` bad across `uv`, if any. Under the
    /// partial-matching condition there is at most one; on violating input
    /// the lowest partner is returned.
    pub fn matched_partner(&self, u: VertexId, cu: ColourId, v: VertexId) -> Option<ColourId> {
        if u < v {
            self.pairs
                .get(&(u, v))?
                .iter()
                .find(|&&(a, _)| a == cu)
                .map(|&(_, b)| b)
        } else {
            self.pairs
                .get(&(v, u))?
                .iter()
                .find(|&&(_, b)| b == cu)
                .map(|&(a, _)| a)
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.pairs.keys().copied()
    }

    /// Pairs on edges with both endpoints `<= n`.
    pub fn prefix(&self, n: usize) -> CorrespondenceSystem {
        CorrespondenceSystem {
            pairs: self
                .pairs
                .iter()
                .filter(|((u, v), _)| u.index() <= n && v.index() <= n)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }
}

/// Embeds list colouring into the correspondence setting: across every edge
/// the bad pairs are exactly the monochromatic ones on shared colours.
pub fn list_to_correspondence(lists: &ListSystem, graph: &FiniteGraph) -> CorrespondenceSystem {
    let mut system = CorrespondenceSystem::new();
    for &(u, v) in graph.edges() {
        for &c in lists.list(u) {
            if lists.contains(v, c) {
                system.insert_pair(u, v, c, c);
            }
        }
    }
    system
}

/// A violation found by [`validate_correspondence`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CorrespondenceViolation {
    /// `colour` at `vertex` occurs in two pairs across the same edge.
    ColourMatchedTwice {
        edge: (VertexId, VertexId),
        vertex: VertexId,
        colour: ColourId,
    },
    /// A pair component is not in the endpoint's list.
    ColourNotInList {
        edge: (VertexId, VertexId),
        vertex: VertexId,
        colour: ColourId,
    },
}

impl fmt::Display for CorrespondenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrespondenceViolation::ColourMatchedTwice { edge, vertex, colour } => write!(
                f,
                "edge ({}, {}): colour {colour} of {vertex} occurs in two pairs",
                edge.0, edge.1
            ),
            CorrespondenceViolation::ColourNotInList { edge, vertex, colour } => write!(
                f,
                "edge ({}, {}): colour {colour} is not in the list of {vertex}",
                edge.0, edge.1
            ),
        }
    }
}

/// Checks the partial-matching condition and list membership of every pair
/// component. Returns all violations instead of failing on the first.
pub fn validate_correspondence(
    system: &CorrespondenceSystem,
    lists: &ListSystem,
) -> Vec<CorrespondenceViolation> {
    let mut violations = Vec::new();
    for (u, v) in system.edges() {
        let pairs = system.pairs_for(u, v);
        let mut seen_u: BTreeMap<ColourId, usize> = BTreeMap::new();
        let mut seen_v: BTreeMap<ColourId, usize> = BTreeMap::new();
        for &(cu, cv) in &pairs {
            *seen_u.entry(cu).or_default() += 1;
            *seen_v.entry(cv).or_default() += 1;
            for (vertex, colour) in [(u, cu), (v, cv)] {
                if vertex.index() > lists.order() || !lists.contains(vertex, colour) {
                    violations.push(CorrespondenceViolation::ColourNotInList {
                        edge: (u, v),
                        vertex,
                        colour,
                    });
                }
            }
        }
        for (side, counts) in [(u, &seen_u), (v, &seen_v)] {
            for (&colour, &count) in counts {
                if count > 1 {
                    violations.push(CorrespondenceViolation::ColourMatchedTwice {
                        edge: (u, v),
                        vertex: side,
                        colour,
                    });
                }
            }
        }
    }
    violations
}

/// The constraint regime an instance is solved and audited under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintSystem {
    /// Plain list colouring: an edge conflicts when its endpoints share a
    /// colour.
    List(ListSystem),
    /// Correspondence colouring: an edge conflicts when the endpoint
    /// colours form a bad pair.
    Correspondence {
        lists: ListSystem,
        pairs: CorrespondenceSystem,
    },
}

impl ConstraintSystem {
    pub fn lists(&self) -> &ListSystem {
        match self {
            ConstraintSystem::List(lists) => lists,
            ConstraintSystem::Correspondence { lists, .. } => lists,
        }
    }

    pub fn is_correspondence(&self) -> bool {
        matches!(self, ConstraintSystem::Correspondence { .. })
    }

    /// Whether colouring `u` with `cu` and `v` with `cv` makes the edge
    /// `uv` conflict under this system.
    pub fn edge_conflicts(&self, u: VertexId, cu: ColourId, v: VertexId, cv: ColourId) -> bool {
        match self {
            ConstraintSystem::List(_) => cu == cv,
            ConstraintSystem::Correspondence { pairs, .. } => pairs.forbids(u, cu, v, cv),
        }
    }

    /// Whether the edge `uv` is bad under `colouring`. Errors when the edge
    /// is absent from the host or an endpoint is uncoloured.
    pub fn is_bad_edge<H: HostGraph>(
        &self,
        host: &H,
        u: VertexId,
        v: VertexId,
        colouring: &Colouring,
    ) -> Result<bool, ConstraintError> {
        if !host.has_edge(u, v) && !host.has_edge(v, u) {
            return Err(ConstraintError::EdgeNotInGraph(u, v));
        }
        let cu = colouring
            .get(u)
            .ok_or(ConstraintError::UncolouredVertex(u))?;
        let cv = colouring
            .get(v)
            .ok_or(ConstraintError::UncolouredVertex(v))?;
        Ok(self.edge_conflicts(u, cu, v, cv))
    }

    /// Restriction to the host prefix `v1..vn`.
    pub fn prefix(&self, n: usize) -> ConstraintSystem {
        match self {
            ConstraintSystem::List(lists) => ConstraintSystem::List(lists.prefix(n)),
            ConstraintSystem::Correspondence { lists, pairs } => ConstraintSystem::Correspondence {
                lists: lists.prefix(n),
                pairs: pairs.prefix(n),
            },
        }
    }
}

/// A total assignment of colours to `v1..vn`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Colouring(Vec<ColourId>);

impl Colouring {
    pub fn new(colours: Vec<ColourId>) -> Self {
        Colouring(colours)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, v: VertexId) -> Option<ColourId> {
        self.0.get(v.pos()).copied()
    }

    pub fn colours(&self) -> &[ColourId] {
        &self.0
    }

    pub(crate) fn set(&mut self, v: VertexId, c: ColourId) {
        self.0[v.pos()] = c;
    }

    /// The assignment of `v1..vn`.
    pub fn prefix(&self, n: usize) -> Colouring {
        Colouring(self.0[..n.min(self.0.len())].to_vec())
    }
}

/// Exact threshold `degree / k`, kept as a pair so equality cases stay
/// exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: usize,
    pub den: usize,
}

/// Per-vertex outcome of the majority audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexAudit {
    pub vertex: VertexId,
    /// Degree for undirected hosts, out-degree for digraphs.
    pub degree: usize,
    pub conflicts: usize,
    pub threshold: Ratio,
    pub pass: bool,
}

/// Result of auditing a colouring against the `1/k` threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorityReport {
    pub k: usize,
    pub overall_pass: bool,
    pub vertices: Vec<VertexAudit>,
}

impl MajorityReport {
    pub fn failing_vertices(&self) -> impl Iterator<Item = &VertexAudit> {
        self.vertices.iter().filter(|a| !a.pass)
    }
}

/// Audits `colouring` on `host`: vertex `v` passes when at most a `1/k`
/// proportion of its audited edges conflict, i.e. `conflicts * k <= degree`
/// in exact integer arithmetic. Degree-0 vertices pass vacuously.
pub fn verify_majority<H: HostGraph>(
    host: &H,
    colouring: &Colouring,
    system: &ConstraintSystem,
    k: usize,
) -> Result<MajorityReport, ConstraintError> {
    if k < 2 {
        return Err(ConstraintError::InvalidK(k));
    }
    let lists = system.lists();
    if lists.order() < host.order() {
        return Err(ConstraintError::MissingList(VertexId::new(
            lists.order() + 1,
        )));
    }
    for v in (1..=host.order()).map(VertexId::new) {
        let c = colouring
            .get(v)
            .ok_or(ConstraintError::UncolouredVertex(v))?;
        if !lists.contains(v, c) {
            return Err(ConstraintError::ColourOutsideList { vertex: v, colour: c });
        }
    }

    let mut vertices = Vec::with_capacity(host.order());
    let mut overall_pass = true;
    for v in (1..=host.order()).map(VertexId::new) {
        let cv = colouring.get(v).expect("checked above");
        let degree = host.audited_degree(v);
        let conflicts = host
            .audited_neighbours(v)
            .iter()
            .filter(|&&u| {
                let cu = colouring.get(u).expect("checked above");
                system.edge_conflicts(v, cv, u, cu)
            })
            .count();
        let pass = conflicts * k <= degree;
        overall_pass &= pass;
        vertices.push(VertexAudit {
            vertex: v,
            degree,
            conflicts,
            threshold: Ratio { num: degree, den: k },
            pass,
        });
    }
    Ok(MajorityReport {
        k,
        overall_pass,
        vertices,
    })
}
