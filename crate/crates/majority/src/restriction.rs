//! Sublist restriction with a verifiable witness ledger.
//!
//! Given `(l+1)`-colour lists and a collection of designated vertex
//! families (or (vertex, colour)-pair families), the restriction pass
//! shrinks every list to `l` colours while planting, for each family and
//! colour, a budgeted supply of witnesses: vertices of the family whose
//! sublist is guaranteed to miss that colour. The ledger records every
//! scheduled item and its outcome, so the guarantee can be audited after
//! the fact — including how far a finite prefix fell short of the
//! intended infinite supply.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::{ColourId, CorrespondenceSystem, ListSystem};
use crate::graph::VertexId;
use crate::tower::CountablePresentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RestrictionError {
    #[error("lists must have uniform size at least 2 (l+1 with l >= 1)")]
    ListsNotRestrictable,
    #[error("family {0:?} must list members in ascending vertex order without repeats")]
    FamilyNotAscending(String),
    #[error("family {family:?} pairs colour {colour} with {vertex}, which is outside its list")]
    PairOutsideList {
        family: String,
        vertex: VertexId,
        colour: ColourId,
    },
    #[error("expected a {expected}-form family, got {found:?}")]
    WrongFamilyForm {
        expected: &'static str,
        found: String,
    },
}

/// Where a witness family came from; determines its ledger label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyOrigin {
    /// The neighbourhood `N(v)` of a designated vertex (colour form).
    Neighbourhood(VertexId),
    /// The matched pairs `{(v, c') : (c, c') bad across uv}` of a vertex
    /// and colour (pair form).
    MatchedPairs(VertexId, ColourId),
    /// An extensionally given family.
    Named(String),
}

impl FamilyOrigin {
    pub fn label(&self) -> String {
        match self {
            FamilyOrigin::Neighbourhood(v) => format!("N({v})"),
            FamilyOrigin::MatchedPairs(v, c) => format!("X({v},{c})"),
            FamilyOrigin::Named(name) => name.clone(),
        }
    }
}

impl fmt::Display for FamilyOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Members of a witness family, materialised over a finite vertex prefix
/// in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyMembers {
    /// Ascending vertex stream (colour form).
    Vertices(Vec<VertexId>),
    /// Ascending (vertex, colour) stream with pairwise distinct vertices
    /// (pair form).
    Pairs(Vec<(VertexId, ColourId)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFamily {
    pub origin: FamilyOrigin,
    pub members: FamilyMembers,
}

impl WitnessFamily {
    pub fn colour_form(
        origin: FamilyOrigin,
        vertices: Vec<VertexId>,
    ) -> Result<Self, RestrictionError> {
        if !vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(RestrictionError::FamilyNotAscending(origin.label()));
        }
        Ok(WitnessFamily {
            origin,
            members: FamilyMembers::Vertices(vertices),
        })
    }

    pub fn pair_form(
        origin: FamilyOrigin,
        pairs: Vec<(VertexId, ColourId)>,
    ) -> Result<Self, RestrictionError> {
        if !pairs.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(RestrictionError::FamilyNotAscending(origin.label()));
        }
        Ok(WitnessFamily {
            origin,
            members: FamilyMembers::Pairs(pairs),
        })
    }

    pub fn len(&self) -> usize {
        match &self.members {
            FamilyMembers::Vertices(v) => v.len(),
            FamilyMembers::Pairs(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The shrunken lists: every vertex keeps exactly `target_size` of its
/// original colours, with at most one colour removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublistAssignment {
    target_size: usize,
    sublists: Vec<Vec<ColourId>>,
    removed: Vec<Option<ColourId>>,
}

impl SublistAssignment {
    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn order(&self) -> usize {
        self.sublists.len()
    }

    pub fn sublist(&self, v: VertexId) -> &[ColourId] {
        &self.sublists[v.pos()]
    }

    pub fn removed(&self, v: VertexId) -> Option<ColourId> {
        self.removed[v.pos()]
    }

    /// The sublists as a list system, ready for the finite solvers.
    pub fn list_system(&self) -> ListSystem {
        ListSystem::new(self.sublists.clone()).expect("sublists are nonempty and distinct")
    }
}

/// How one scheduled item played out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScheduleOutcome {
    /// A witness was consumed and its sublist lost the scheduled colour.
    Witness(VertexId),
    /// A vertex was consumed but already lacked the scheduled colour, so
    /// nothing was removed and it does not count as a witness.
    ConsumedNoRemoval(VertexId),
    /// The family had no unused member left within the prefix.
    Shortfall,
}

/// One processed schedule item: family rank, scheduled colour (colour
/// form only), occurrence number, and outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub family: usize,
    pub colour: Option<ColourId>,
    pub occurrence: usize,
    pub outcome: ScheduleOutcome,
}

/// Aggregated per-(family, colour) or per-family audit data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub origin: FamilyOrigin,
    pub colour: Option<ColourId>,
    pub witnesses: Vec<VertexId>,
    /// Schedule items processed for this key.
    pub processed: usize,
    /// Items that found no unused member within the prefix.
    pub shortfalls: usize,
    /// Items that consumed a vertex without removing a colour.
    pub skipped: usize,
}

/// Full account of a restriction run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessLedger {
    /// The family roster the run was invoked with, in rank order.
    pub families: Vec<FamilyOrigin>,
    pub entries: Vec<LedgerEntry>,
    pub schedule: Vec<ScheduleRecord>,
}

impl WitnessLedger {
    pub fn entry(&self, origin: &FamilyOrigin, colour: Option<ColourId>) -> Option<&LedgerEntry> {
        self.entries
            .iter()
            .find(|e| e.origin == *origin && e.colour == colour)
    }

    pub fn has_family(&self, origin: &FamilyOrigin) -> bool {
        self.families.contains(origin)
    }

    /// Whether any rostered family is the neighbourhood or matched-pair
    /// family of `v`.
    pub fn has_family_for_vertex(&self, v: VertexId) -> bool {
        self.families.iter().any(|origin| match origin {
            FamilyOrigin::Neighbourhood(u) => *u == v,
            FamilyOrigin::MatchedPairs(u, _) => *u == v,
            FamilyOrigin::Named(_) => false,
        })
    }
}

/// Deterministic schedule over `families x colours x occurrences`:
/// occurrence blocks come first (all `(X, c, 1)` items, then all
/// `(X, c, 2)` items, and so on), and within a block items run in
/// (family rank, colour rank) order. Every (family, colour) pair is hit
/// once per block, so each is scheduled unboundedly often as the budget
/// grows. Truncated at `budget` items.
pub fn enumerate_triple_schedule(
    family_count: usize,
    colours: &[ColourId],
    budget: usize,
) -> Vec<(usize, ColourId, usize)> {
    let mut schedule = Vec::with_capacity(budget);
    if family_count == 0 || colours.is_empty() {
        return schedule;
    }
    'outer: for occurrence in 1.. {
        for family in 0..family_count {
            for &colour in colours {
                if schedule.len() == budget {
                    break 'outer;
                }
                schedule.push((family, colour, occurrence));
            }
        }
    }
    schedule
}

/// Pair-form analogue of [`enumerate_triple_schedule`]: occurrence blocks
/// over family ranks.
pub fn enumerate_pair_schedule(family_count: usize, budget: usize) -> Vec<(usize, usize)> {
    let mut schedule = Vec::with_capacity(budget);
    if family_count == 0 {
        return schedule;
    }
    'outer: for occurrence in 1.. {
        for family in 0..family_count {
            if schedule.len() == budget {
                break 'outer;
            }
            schedule.push((family, occurrence));
        }
    }
    schedule
}

fn check_restrictable(lists: &ListSystem) -> Result<usize, RestrictionError> {
    match lists.uniform_size() {
        Some(size) if size >= 2 => Ok(size - 1),
        _ => Err(RestrictionError::ListsNotRestrictable),
    }
}

/// Drops the highest colour id — the default sublist for vertices the
/// schedule never touches.
fn default_sublist(list: &[ColourId]) -> Vec<ColourId> {
    list[..list.len() - 1].to_vec()
}

fn list_without(list: &[ColourId], colour: ColourId) -> Vec<ColourId> {
    list.iter().copied().filter(|&c| c != colour).collect()
}

struct RunState {
    consumed: Vec<bool>,
    sublists: Vec<Option<Vec<ColourId>>>,
    removed: Vec<Option<ColourId>>,
}

impl RunState {
    fn new(order: usize) -> Self {
        RunState {
            consumed: vec![false; order],
            sublists: vec![None; order],
            removed: vec![None; order],
        }
    }

    fn finish(self, lists: &ListSystem, target_size: usize) -> SublistAssignment {
        let sublists = self
            .sublists
            .into_iter()
            .enumerate()
            .map(|(pos, slot)| {
                slot.unwrap_or_else(|| default_sublist(lists.list(VertexId::new(pos + 1))))
            })
            .collect();
        SublistAssignment {
            target_size,
            sublists,
            removed: self.removed,
        }
    }
}

/// Restricts `(l+1)`-lists to `l`-lists against colour-form families.
///
/// Schedule items `(X, c, i)` each consume the least not-yet-consumed
/// vertex of `X` within `v1..v{prefix}`. If the scheduled colour is in
/// the vertex's list it is removed and the vertex is recorded as a
/// witness for `(X, c)`; otherwise the vertex keeps a default sublist and
/// the item is recorded as skipped. Items that find no unused vertex are
/// recorded as shortfalls, not errors: they measure how much of the
/// intended supply the finite prefix could not deliver.
pub fn restrict_lists(
    prefix: usize,
    lists: &ListSystem,
    families: &[WitnessFamily],
    budget: usize,
) -> Result<(SublistAssignment, WitnessLedger), RestrictionError> {
    let target_size = check_restrictable(lists)?;
    let members: Vec<&[VertexId]> = families
        .iter()
        .map(|f| match &f.members {
            FamilyMembers::Vertices(v) => Ok(v.as_slice()),
            FamilyMembers::Pairs(_) => Err(RestrictionError::WrongFamilyForm {
                expected: "colour",
                found: f.origin.label(),
            }),
        })
        .collect::<Result<_, _>>()?;

    let colours = lists.colour_universe();
    let schedule = enumerate_triple_schedule(families.len(), &colours, budget);

    let mut state = RunState::new(lists.order());
    let mut ledger = new_ledger(families, &colours);
    for (family, colour, occurrence) in schedule {
        let chosen = members[family]
            .iter()
            .copied()
            .find(|v| v.index() <= prefix && !state.consumed[v.pos()]);
        let outcome = match chosen {
            None => ScheduleOutcome::Shortfall,
            Some(v) => {
                state.consumed[v.pos()] = true;
                let list = lists.list(v);
                if list.contains(&colour) {
                    state.sublists[v.pos()] = Some(list_without(list, colour));
                    state.removed[v.pos()] = Some(colour);
                    ScheduleOutcome::Witness(v)
                } else {
                    state.sublists[v.pos()] = Some(default_sublist(list));
                    ScheduleOutcome::ConsumedNoRemoval(v)
                }
            }
        };
        record(&mut ledger, family, Some(colour), occurrence, outcome, &colours);
    }
    Ok((state.finish(lists, target_size), ledger))
}

/// Pair-form restriction: schedule items `(X, i)` each take the least
/// pair `(v, c)` of `X` whose vertex is unconsumed and within the prefix,
/// and remove `c` from the list of `v`.
pub fn restrict_pairs(
    prefix: usize,
    lists: &ListSystem,
    families: &[WitnessFamily],
    budget: usize,
) -> Result<(SublistAssignment, WitnessLedger), RestrictionError> {
    let target_size = check_restrictable(lists)?;
    let members: Vec<&[(VertexId, ColourId)]> = families
        .iter()
        .map(|f| match &f.members {
            FamilyMembers::Pairs(p) => Ok(p.as_slice()),
            FamilyMembers::Vertices(_) => Err(RestrictionError::WrongFamilyForm {
                expected: "pair",
                found: f.origin.label(),
            }),
        })
        .collect::<Result<_, _>>()?;
    for (family, pairs) in families.iter().zip(&members) {
        for &(v, c) in pairs.iter() {
            if v.index() <= lists.order() && !lists.contains(v, c) {
                return Err(RestrictionError::PairOutsideList {
                    family: family.origin.label(),
                    vertex: v,
                    colour: c,
                });
            }
        }
    }

    let schedule = enumerate_pair_schedule(families.len(), budget);
    let mut state = RunState::new(lists.order());
    let mut ledger = new_ledger(families, &[]);
    for (family, occurrence) in schedule {
        let chosen = members[family]
            .iter()
            .copied()
            .find(|(v, _)| v.index() <= prefix && !state.consumed[v.pos()]);
        let outcome = match chosen {
            None => ScheduleOutcome::Shortfall,
            Some((v, colour)) => {
                state.consumed[v.pos()] = true;
                state.sublists[v.pos()] = Some(list_without(lists.list(v), colour));
                state.removed[v.pos()] = Some(colour);
                ScheduleOutcome::Witness(v)
            }
        };
        record(&mut ledger, family, None, occurrence, outcome, &[]);
    }
    Ok((state.finish(lists, target_size), ledger))
}

fn new_ledger(families: &[WitnessFamily], colours: &[ColourId]) -> WitnessLedger {
    let mut entries = Vec::new();
    for family in families {
        if colours.is_empty() {
            entries.push(LedgerEntry {
                origin: family.origin.clone(),
                colour: None,
                witnesses: Vec::new(),
                processed: 0,
                shortfalls: 0,
                skipped: 0,
            });
        } else {
            for &colour in colours {
                entries.push(LedgerEntry {
                    origin: family.origin.clone(),
                    colour: Some(colour),
                    witnesses: Vec::new(),
                    processed: 0,
                    shortfalls: 0,
                    skipped: 0,
                });
            }
        }
    }
    WitnessLedger {
        families: families.iter().map(|f| f.origin.clone()).collect(),
        entries,
        schedule: Vec::new(),
    }
}

fn record(
    ledger: &mut WitnessLedger,
    family: usize,
    colour: Option<ColourId>,
    occurrence: usize,
    outcome: ScheduleOutcome,
    colours: &[ColourId],
) {
    let slot = if colours.is_empty() {
        family
    } else {
        let colour_rank = colours
            .iter()
            .position(|&c| Some(c) == colour)
            .expect("scheduled colours come from the universe");
        family * colours.len() + colour_rank
    };
    let entry = &mut ledger.entries[slot];
    entry.processed += 1;
    match outcome {
        ScheduleOutcome::Witness(v) => entry.witnesses.push(v),
        ScheduleOutcome::ConsumedNoRemoval(_) => entry.skipped += 1,
        ScheduleOutcome::Shortfall => entry.shortfalls += 1,
    }
    ledger.schedule.push(ScheduleRecord {
        family,
        colour,
        occurrence,
        outcome,
    });
}

/// The pair-form families of a correspondence instance on a countable
/// presentation: for every vertex `u` declared to have infinite degree
/// and every colour `c` in its list, the family of pairs `(v, c')` over
/// neighbours `v` within the prefix whose edge matches `c` to `c'`.
/// Vertices not declared infinite contribute nothing.
pub fn build_correspondence_families(
    presentation: &CountablePresentation,
    prefix: usize,
    lists: &ListSystem,
    pairs: &CorrespondenceSystem,
) -> Vec<WitnessFamily> {
    let mut families = Vec::new();
    for u in presentation.infinite_degree_vertices(prefix) {
        if u.index() > lists.order() {
            continue;
        }
        for &c in lists.list(u) {
            let mut members = Vec::new();
            for v in presentation.neighbours_within(u.index(), prefix) {
                let v = VertexId::new(v);
                if let Some(partner) = pairs.matched_partner(u, c, v) {
                    members.push((v, partner));
                }
            }
            families.push(
                WitnessFamily::pair_form(FamilyOrigin::MatchedPairs(u, c), members)
                    .expect("neighbours stream ascending"),
            );
        }
    }
    families
}
