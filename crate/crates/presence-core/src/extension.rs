//! Analogical extension machinery: projection of symbolic units, focusing
//! on embedded tokens, explicitation of fragments into symbol-free unfolds,
//! path search between situations, and unions of unifying representations.
//!
//! Explicitation replaces tokens by the projections of their units, one
//! token per budget step, until the display is symbol-free. Multi-valued
//! entries place anchored images in their own worlds and spread unanchored
//! alternatives over fresh world tags, so genuine alternatives coexist
//! behind frontiers while contents claiming the same world must cohere.

use crate::error::{Error, Result};
use crate::geom::{Coord, Offset, Rect};
use crate::presence::{Cell, CellValue, ConflictCell, Display, Patch, SymbolToken, WorldTag};
use crate::web::{CodeId, LinkId, RepresentationalSystem, RuleId, SituationId, UnitId};
use petgraph::unionfind::UnionFind;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Default number of token substitutions before explicitation gives up.
pub const DEFAULT_BUDGET: usize = 100;

/// Displays every image of a unit's semantic entry: extensional codes are
/// retrieved from memory (ascending code), then intensional rules are
/// evaluated on the request (ascending rule id).
pub fn project(
    system: &RepresentationalSystem,
    unit: &UnitId,
    request: Option<Rect>,
) -> Result<Vec<Patch>> {
    system.unit(unit)?;
    let entry = match system.entry(unit) {
        Some(entry) if !entry.is_empty() => entry,
        _ => return Err(Error::NoContent(unit.clone())),
    };
    let mut out = Vec::new();
    for code in entry.codes() {
        out.push(system.retrieve_eaf(code)?.clone());
    }
    if entry.rules().next().is_some() {
        let region = request.ok_or_else(|| Error::RegionRequired(unit.clone()))?;
        for rule in entry.rules() {
            out.push(rule.evaluate(region));
        }
    }
    Ok(out)
}

/// Follows a token embedded in a displayed patch to the first projection of
/// its unit; intensional entries are evaluated on a window-sized region at
/// the token's position.
pub fn focus(
    system: &RepresentationalSystem,
    displayed: &Patch,
    token: &SymbolToken,
) -> Result<Patch> {
    let present = displayed
        .cell(token.position.x, token.position.y)
        .is_some_and(|c| c.token.as_ref() == Some(&token.unit));
    if !present {
        return Err(Error::TokenAbsent {
            unit: token.unit.clone(),
        });
    }
    let region = Rect::new(
        token.position.x,
        token.position.y,
        system.window().width(),
        system.window().height(),
    );
    let projections = project(system, &token.unit, Some(region))?;
    Ok(projections.into_iter().next().expect("projection of a nonempty entry"))
}

/// What explicitation starts from: a concrete fragment or a unit whose
/// images are each unfolded separately.
#[derive(Clone, Copy, Debug)]
pub enum ExplicitationTarget<'a> {
    Fragment(&'a Patch),
    Unit(&'a UnitId),
}

/// A wholly displayed unfold: branch-tagged cells with no symbol left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WUnfold {
    pub display: Display,
}

/// Where a displayed value came from, for classifying conflicts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ProvenanceSource {
    /// The fragment explicitation started from.
    Input,
    /// An extensionally stored patch.
    Code(CodeId),
    /// An intensional rule evaluation.
    Rule { unit: UnitId, rule: RuleId },
}

impl ProvenanceSource {
    pub fn is_stored(&self) -> bool {
        matches!(self, ProvenanceSource::Code(_))
    }
}

/// Whether an incoherence stems from the system's own constitutive rules or
/// from erroneously stored data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IncoherenceKind {
    Intrinsic,
    Extrinsic,
}

/// The evidence an incoherence report carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IncoherenceWitness {
    /// Substitution ancestry closed on itself; the trace lists the units of
    /// the cycle in substitution order.
    Cycle { units: Vec<UnitId> },
    /// Tokens were still pending when the budget ran out.
    BudgetExhausted { budget: usize, pending_tokens: usize },
    /// Cells received two distinct determinate values under one world tag.
    Conflict { cells: Vec<ConflictCell> },
    /// A token's unit has no semantic entry, so its symbol can never be
    /// eliminated.
    MissingContent { unit: UnitId },
}

/// Why an explicitation failed to reach a symbol-free unified display.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncoherenceReport {
    pub kind: IncoherenceKind,
    pub witness: IncoherenceWitness,
    /// The fragments implicated in the failure.
    pub cause: Vec<ProvenanceSource>,
}

/// Result of an explicitation: symbol-free unfolds, or a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ExplicitationOutcome {
    Unfolds(Vec<WUnfold>),
    Incoherent(IncoherenceReport),
}

impl ExplicitationOutcome {
    pub fn is_coherent(&self) -> bool {
        matches!(self, ExplicitationOutcome::Unfolds(u) if !u.is_empty())
    }

    pub fn unfolds(&self) -> Option<&[WUnfold]> {
        match self {
            ExplicitationOutcome::Unfolds(u) => Some(u),
            ExplicitationOutcome::Incoherent(_) => None,
        }
    }

    pub fn report(&self) -> Option<&IncoherenceReport> {
        match self {
            ExplicitationOutcome::Unfolds(_) => None,
            ExplicitationOutcome::Incoherent(r) => Some(r),
        }
    }
}

/// Eliminates every symbol from the target by iterative projection.
///
/// Tokens are processed one per budget step, in branch order then reading
/// order. A projection's anchored images merge into their anchor worlds at
/// their anchor offsets; a single unanchored image merges into the token's
/// branch at the token's position; several unanchored images spread over
/// fresh alternative world tags. Cycles along the substitution ancestry,
/// budget exhaustion, and empty entries yield intrinsic reports; value
/// clashes are extrinsic exactly when a stored patch is implicated.
pub fn explicitate(
    system: &RepresentationalSystem,
    target: ExplicitationTarget<'_>,
    budget: usize,
) -> Result<ExplicitationOutcome> {
    match target {
        ExplicitationTarget::Fragment(patch) => {
            let mut engine = Engine::new(system, budget);
            engine.seed(patch, &[], ProvenanceSource::Input)?;
            Ok(match engine.run()? {
                Ok(unfold) => ExplicitationOutcome::Unfolds(vec![unfold]),
                Err(report) => ExplicitationOutcome::Incoherent(report),
            })
        }
        ExplicitationTarget::Unit(unit) => {
            system.unit(unit)?;
            let entry = match system.entry(unit) {
                Some(entry) if !entry.is_empty() => entry,
                _ => {
                    return Ok(ExplicitationOutcome::Incoherent(IncoherenceReport {
                        kind: IncoherenceKind::Intrinsic,
                        witness: IncoherenceWitness::MissingContent { unit: unit.clone() },
                        cause: Vec::new(),
                    }))
                }
            };
            let window = Rect::new(0, 0, system.window().width(), system.window().height());
            let mut images: Vec<(ProvenanceSource, Patch)> = Vec::new();
            for code in entry.codes() {
                images.push((ProvenanceSource::Code(code), system.retrieve_eaf(code)?.clone()));
            }
            for rule in entry.rules() {
                let source = ProvenanceSource::Rule {
                    unit: unit.clone(),
                    rule: rule.id.clone(),
                };
                images.push((source, rule.evaluate(window)));
            }
            let mut unfolds = Vec::new();
            for (source, patch) in images {
                let mut engine = Engine::new(system, budget);
                engine.seed(&patch, std::slice::from_ref(unit), source)?;
                match engine.run()? {
                    Ok(unfold) => unfolds.push(unfold),
                    Err(report) => return Ok(ExplicitationOutcome::Incoherent(report)),
                }
            }
            Ok(ExplicitationOutcome::Unfolds(unfolds))
        }
    }
}

/// A value placed in the working display, with its provenance.
#[derive(Clone, Debug)]
struct WorkValue {
    value: String,
    source: ProvenanceSource,
}

/// A token waiting to be substituted.
#[derive(Clone, Debug)]
struct PendingToken {
    unit: UnitId,
    /// Units along the substitution ancestry, ending with this token's unit.
    chain: Vec<UnitId>,
    source: ProvenanceSource,
}

struct Engine<'a> {
    system: &'a RepresentationalSystem,
    budget: usize,
    initial_budget: usize,
    values: BTreeMap<(WorldTag, Coord), BTreeMap<String, WorkValue>>,
    tokens: BTreeMap<(WorldTag, Coord), PendingToken>,
    next_alt: u32,
    seed_cycle: Option<CycleFound>,
}

impl<'a> Engine<'a> {
    fn new(system: &'a RepresentationalSystem, budget: usize) -> Self {
        Self {
            system,
            budget,
            initial_budget: budget,
            values: BTreeMap::new(),
            tokens: BTreeMap::new(),
            next_alt: 0,
            seed_cycle: None,
        }
    }

    /// Lays the starting patch into the working display. Anchored patches
    /// enter their world's branch at their anchor offset (world frame);
    /// unanchored patches enter the local branch at their own coordinates.
    /// An immediate cycle (a unit's own image carrying its token) surfaces
    /// as a report via `run`.
    fn seed(&mut self, patch: &Patch, chain_prefix: &[UnitId], source: ProvenanceSource) -> Result<()> {
        let (tag, offset) = match patch.anchor() {
            Some(anchor) => (WorldTag::World(anchor.world.clone()), anchor.offset),
            None => (WorldTag::Local, Offset::default()),
        };
        match self.merge(&tag, patch, offset, chain_prefix, source) {
            Ok(conflicts) => debug_assert!(conflicts.is_empty(), "a single patch cannot self-conflict"),
            Err(cycle) => self.seed_cycle = Some(cycle),
        }
        Ok(())
    }

    /// Merges one patch at `offset` under `tag`, collecting value clashes.
    /// Halts early when a token would close the substitution ancestry.
    #[allow(clippy::type_complexity)]
    fn merge(
        &mut self,
        tag: &WorldTag,
        patch: &Patch,
        offset: Offset,
        chain_prefix: &[UnitId],
        source: ProvenanceSource,
    ) -> std::result::Result<Vec<(ConflictCell, Vec<ProvenanceSource>)>, CycleFound> {
        let mut conflicts = Vec::new();
        for (local, cell) in patch.occupied_cells() {
            let coord = local.shifted(offset);
            let key = (tag.clone(), coord);
            let slot = self.values.entry(key.clone()).or_default();
            for (attribute, value) in &cell.content {
                match slot.get(attribute) {
                    Some(existing) if existing.value != *value => {
                        conflicts.push((
                            ConflictCell {
                                world: tag.clone(),
                                coord,
                                left: CellValue::Attr {
                                    attribute: attribute.clone(),
                                    value: existing.value.clone(),
                                },
                                right: CellValue::Attr {
                                    attribute: attribute.clone(),
                                    value: value.clone(),
                                },
                            },
                            vec![existing.source.clone(), source.clone()],
                        ));
                    }
                    Some(_) => {}
                    None => {
                        slot.insert(
                            attribute.clone(),
                            WorkValue {
                                value: value.clone(),
                                source: source.clone(),
                            },
                        );
                    }
                }
            }
            if let Some(unit) = &cell.token {
                if let Some(pos) = chain_prefix.iter().position(|u| u == unit) {
                    return Err(CycleFound {
                        units: chain_prefix[pos..].to_vec(),
                        source,
                    });
                }
                let mut chain = chain_prefix.to_vec();
                chain.push(unit.clone());
                match self.tokens.get(&key) {
                    Some(existing) if existing.unit == *unit => {}
                    Some(existing) => {
                        conflicts.push((
                            ConflictCell {
                                world: tag.clone(),
                                coord,
                                left: CellValue::Token(existing.unit.clone()),
                                right: CellValue::Token(unit.clone()),
                            },
                            vec![existing.source.clone(), source.clone()],
                        ));
                    }
                    None => {
                        self.tokens.insert(
                            key,
                            PendingToken {
                                unit: unit.clone(),
                                chain,
                                source: source.clone(),
                            },
                        );
                    }
                }
            }
        }
        Ok(conflicts)
    }

    fn run(&mut self) -> Result<std::result::Result<WUnfold, IncoherenceReport>> {
        if let Some(cycle) = self.seed_cycle.take() {
            return Ok(Err(cycle.into_report()));
        }
        loop {
            let Some((key, token)) = self.tokens.iter().next().map(|(k, t)| (k.clone(), t.clone()))
            else {
                return Ok(Ok(self.unfold()));
            };
            if self.budget == 0 {
                let cause = dedup_sources(self.tokens.values().map(|t| t.source.clone()));
                return Ok(Err(IncoherenceReport {
                    kind: IncoherenceKind::Intrinsic,
                    witness: IncoherenceWitness::BudgetExhausted {
                        budget: self.initial_budget,
                        pending_tokens: self.tokens.len(),
                    },
                    cause,
                }));
            }
            self.budget -= 1;
            self.tokens.remove(&key);
            if let Some(report) = self.substitute(&key.0, key.1, &token)? {
                return Ok(Err(report));
            }
        }
    }

    /// Replaces one token by the projections of its unit.
    fn substitute(
        &mut self,
        tag: &WorldTag,
        coord: Coord,
        token: &PendingToken,
    ) -> Result<Option<IncoherenceReport>> {
        let entry = match self.system.entry(&token.unit) {
            Some(entry) if !entry.is_empty() => entry,
            _ => {
                return Ok(Some(IncoherenceReport {
                    kind: IncoherenceKind::Intrinsic,
                    witness: IncoherenceWitness::MissingContent {
                        unit: token.unit.clone(),
                    },
                    cause: dedup_sources([token.source.clone()]),
                }))
            }
        };

        let mut images: Vec<(ProvenanceSource, Patch)> = Vec::new();
        for code in entry.codes() {
            images.push((ProvenanceSource::Code(code), self.system.retrieve_eaf(code)?.clone()));
        }
        let request = Rect::new(
            coord.x,
            coord.y,
            self.system.window().width(),
            self.system.window().height(),
        );
        for rule in entry.rules() {
            let source = ProvenanceSource::Rule {
                unit: token.unit.clone(),
                rule: rule.id.clone(),
            };
            images.push((source, rule.evaluate(request)));
        }

        // anchored images belong to their worlds; unanchored ones replace
        // the token in place, or spread over alternatives when multi-valued
        let unanchored = images.iter().filter(|(_, p)| p.anchor().is_none()).count();
        let mut placements: Vec<(WorldTag, Offset, ProvenanceSource, Patch)> = Vec::new();
        for (source, patch) in images {
            match patch.anchor().cloned() {
                Some(anchor) => {
                    placements.push((WorldTag::World(anchor.world), anchor.offset, source, patch));
                }
                None if unanchored == 1 => {
                    placements.push((tag.clone(), Offset::new(coord.x, coord.y), source, patch));
                }
                None => {
                    self.next_alt += 1;
                    placements.push((
                        WorldTag::Alt(self.next_alt),
                        Offset::new(coord.x, coord.y),
                        source,
                        patch,
                    ));
                }
            }
        }

        let mut conflicts: Vec<(ConflictCell, Vec<ProvenanceSource>)> = Vec::new();
        for (tag, offset, source, patch) in placements {
            match self.merge(&tag, &patch, offset, &token.chain, source) {
                Ok(mut found) => conflicts.append(&mut found),
                Err(cycle) => return Ok(Some(cycle.into_report())),
            }
        }
        if conflicts.is_empty() {
            return Ok(None);
        }
        let extrinsic = conflicts
            .iter()
            .any(|(_, sources)| sources.iter().any(ProvenanceSource::is_stored));
        let cause = dedup_sources(conflicts.iter().flat_map(|(_, s)| s.iter().cloned()));
        let mut cells: Vec<ConflictCell> = conflicts.into_iter().map(|(c, _)| c).collect();
        cells.sort();
        cells.dedup();
        Ok(Some(IncoherenceReport {
            kind: if extrinsic {
                IncoherenceKind::Extrinsic
            } else {
                IncoherenceKind::Intrinsic
            },
            witness: IncoherenceWitness::Conflict { cells },
            cause,
        }))
    }

    /// Builds the final symbol-free display.
    fn unfold(&self) -> WUnfold {
        debug_assert!(self.tokens.is_empty());
        let mut branches: BTreeMap<WorldTag, BTreeMap<Coord, Cell>> = BTreeMap::new();
        for ((tag, coord), slot) in &self.values {
            let cell = Cell {
                content: slot.iter().map(|(a, wv)| (a.clone(), wv.value.clone())).collect(),
                token: None,
            };
            branches.entry(tag.clone()).or_default().insert(*coord, cell);
        }
        WUnfold {
            display: Display::from_branches(branches),
        }
    }
}

struct CycleFound {
    units: Vec<UnitId>,
    source: ProvenanceSource,
}

impl CycleFound {
    fn into_report(self) -> IncoherenceReport {
        IncoherenceReport {
            kind: IncoherenceKind::Intrinsic,
            witness: IncoherenceWitness::Cycle { units: self.units },
            cause: dedup_sources([self.source]),
        }
    }
}

fn dedup_sources(iter: impl IntoIterator<Item = ProvenanceSource>) -> Vec<ProvenanceSource> {
    let set: BTreeSet<ProvenanceSource> = iter.into_iter().collect();
    set.into_iter().collect()
}

/// A navigable series of situations, consecutive pairs connected by links.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Path {
    pub situations: Vec<SituationId>,
    pub links: Vec<LinkId>,
    /// Links of the path that are artificial, i.e. not grounded in a
    /// successful unification; nonempty means the path crosses ungrounded
    /// territory.
    pub ungrounded_links: Vec<LinkId>,
}

impl Path {
    /// Re-checks the structural invariant: consecutive situations are
    /// connected by the listed links, in order.
    pub fn verify(&self, system: &RepresentationalSystem) -> Result<()> {
        if self.situations.is_empty() || self.links.len() + 1 != self.situations.len() {
            return Err(Error::ForeignIds {
                reason: "path shape: n situations require n-1 links".into(),
            });
        }
        for sid in &self.situations {
            system.situation(sid)?;
        }
        for (i, lid) in self.links.iter().enumerate() {
            let link = system.link(lid)?;
            if link.opposite(&self.situations[i]) != Some(&self.situations[i + 1]) {
                return Err(Error::ForeignIds {
                    reason: format!("link {lid} does not connect step {i} to step {}", i + 1),
                });
            }
        }
        Ok(())
    }
}

/// Shortest path by link count from `from` to `to`; among equally short
/// paths the one with the lexicographically smallest link-id sequence wins.
/// `None` when the situations are disconnected.
pub fn find_path(
    system: &RepresentationalSystem,
    from: &SituationId,
    to: &SituationId,
) -> Result<Option<Path>> {
    system.situation(from)?;
    system.situation(to)?;
    if from == to {
        return Ok(Some(Path {
            situations: vec![from.clone()],
            links: Vec::new(),
            ungrounded_links: Vec::new(),
        }));
    }
    let mut adjacency: BTreeMap<&SituationId, Vec<(&LinkId, &SituationId)>> = BTreeMap::new();
    for link in system.links() {
        adjacency.entry(&link.a).or_default().push((&link.id, &link.b));
        adjacency.entry(&link.b).or_default().push((&link.id, &link.a));
    }
    // uniform-cost search keyed by (length, link sequence); the key order
    // makes the tie-breaking rule fall out of pop_first
    type Key = (usize, Vec<LinkId>);
    let mut frontier: BTreeSet<(Key, Vec<SituationId>)> =
        BTreeSet::from([((0, Vec::new()), vec![from.clone()])]);
    let mut settled: BTreeMap<SituationId, Key> = BTreeMap::new();
    while let Some(((len, links), situations)) = frontier.pop_first() {
        let head = situations.last().expect("nonempty path").clone();
        match settled.get(&head) {
            Some(best) if *best <= (len, links.clone()) => continue,
            _ => {}
        }
        settled.insert(head.clone(), (len, links.clone()));
        if head == *to {
            let ungrounded_links = links
                .iter()
                .filter(|l| !system.link(l).map(|l| l.is_grounded()).unwrap_or(true))
                .cloned()
                .collect();
            return Ok(Some(Path {
                situations,
                links,
                ungrounded_links,
            }));
        }
        for (lid, neighbor) in adjacency.get(&head).into_iter().flatten() {
            if situations.contains(neighbor) {
                continue;
            }
            let mut next_links = links.clone();
            next_links.push((*lid).clone());
            let mut next_situations = situations.clone();
            next_situations.push((*neighbor).clone());
            frontier.insert(((len + 1, next_links), next_situations));
        }
    }
    Ok(None)
}

/// A connected, navigable graph of situations and links.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct UnifyingRepresentation {
    pub situations: BTreeSet<SituationId>,
    pub links: BTreeSet<LinkId>,
}

impl UnifyingRepresentation {
    /// Validates membership, endpoint closure, and connectedness.
    pub fn new(
        system: &RepresentationalSystem,
        situations: BTreeSet<SituationId>,
        links: BTreeSet<LinkId>,
    ) -> Result<Self> {
        for sid in &situations {
            system.situation(sid)?;
        }
        for lid in &links {
            let link = system.link(lid)?;
            if !situations.contains(&link.a) || !situations.contains(&link.b) {
                return Err(Error::ForeignIds {
                    reason: format!("link {lid} reaches outside the representation"),
                });
            }
        }
        let rep = Self { situations, links };
        if !rep.is_connected(system) {
            return Err(Error::ForeignIds {
                reason: "representation is not in one piece".into(),
            });
        }
        Ok(rep)
    }

    fn is_connected(&self, system: &RepresentationalSystem) -> bool {
        components_of(system, &self.situations, &self.links).len() <= 1
    }
}

/// Connected components over the given situations and links.
fn components_of(
    system: &RepresentationalSystem,
    situations: &BTreeSet<SituationId>,
    links: &BTreeSet<LinkId>,
) -> Vec<UnifyingRepresentation> {
    let index: BTreeMap<&SituationId, usize> =
        situations.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut uf: UnionFind<usize> = UnionFind::new(situations.len());
    for lid in links {
        if let Ok(link) = system.link(lid) {
            if let (Some(&a), Some(&b)) = (index.get(&link.a), index.get(&link.b)) {
                uf.union(a, b);
            }
        }
    }
    let mut grouped: BTreeMap<usize, UnifyingRepresentation> = BTreeMap::new();
    for (sid, &i) in &index {
        grouped
            .entry(uf.find(i))
            .or_insert_with(|| UnifyingRepresentation {
                situations: BTreeSet::new(),
                links: BTreeSet::new(),
            })
            .situations
            .insert((*sid).clone());
    }
    for lid in links {
        if let Ok(link) = system.link(lid) {
            if let Some(&a) = index.get(&link.a) {
                grouped.get_mut(&uf.find(a)).expect("endpoint grouped").links.insert(lid.clone());
            }
        }
    }
    let mut out: Vec<UnifyingRepresentation> = grouped.into_values().collect();
    out.sort();
    out
}

/// Merges representations by identifying shared situations and links; the
/// result is the set of connected components of the merged graph.
pub fn union(
    system: &RepresentationalSystem,
    reps: &[UnifyingRepresentation],
) -> Result<Vec<UnifyingRepresentation>> {
    let mut situations: BTreeSet<SituationId> = BTreeSet::new();
    let mut links: BTreeSet<LinkId> = BTreeSet::new();
    for rep in reps {
        for sid in &rep.situations {
            system.situation(sid).map_err(|_| Error::ForeignIds {
                reason: format!("situation {sid} is not part of this system"),
            })?;
            situations.insert(sid.clone());
        }
        for lid in &rep.links {
            system.link(lid).map_err(|_| Error::ForeignIds {
                reason: format!("link {lid} is not part of this system"),
            })?;
            links.insert(lid.clone());
        }
    }
    Ok(components_of(system, &situations, &links))
}

/// The union of every unifying representation the system carries: the
/// connected components over all registered situations and links. Distinct
/// components may be mutually incoherent; no filtering happens here.
pub fn representational_space(system: &RepresentationalSystem) -> Vec<UnifyingRepresentation> {
    let situations: BTreeSet<SituationId> = system.situations().map(|(id, _)| id.clone()).collect();
    let links: BTreeSet<LinkId> = system.links().map(|l| l.id.clone()).collect();
    components_of(system, &situations, &links)
}
