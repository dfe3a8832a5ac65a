//! Contents, implications, laws, and the system-level checkers.
//!
//! This module bridges the analogical level (patches anchored in grid
//! worlds) and the propositional level (formulas over valuations, in
//! [`formula`]). Particular implications are evaluated with three outcomes
//! — holding, failing, or lacking content when the antecedent is absent —
//! while laws of inference over valuations are classical. The checkers
//! audit a whole system against a universe: completeness (every ground
//! fragment is reconstructible), s-completeness (reconstructible from the
//! symbolic web alone), faithfulness (stored content matches the ground),
//! and coherence (explicitation succeeds).

pub mod formula;

use crate::error::{Error, Result};
use crate::extension::{
    explicitate, representational_space, ExplicitationOutcome, ExplicitationTarget,
    IncoherenceReport, Path,
};
use crate::geom::{Coord, Offset, Rect};
use crate::presence::{patch_from_fragment, template_occurs, template_occurrences, Anchor, Patch};
use crate::universe::{Universe, WorldId};
use crate::web::{
    CodeId, Polarity, Proposition, RepresentationalSystem, Rule, SituationId, UnitId, UnitKind,
};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use formula::{
    check_generalized_law, check_law_of_inference, check_particular_inference, eval_formula,
    match_schema, parse_formula, ArgumentForm, Formula, GeneralizedVerdict, InferenceVerdict,
    Valuation,
};

/// A content that implications and constructs can mention: a proposition,
/// an object (through its name unit), a raw fragment, or a bare
/// proposition symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ContentDescriptor {
    Proposition(Proposition),
    Object(UnitId),
    Fragment(Patch),
    Symbol(UnitId),
}

impl fmt::Display for ContentDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContentDescriptor::Proposition(p) => write!(f, "{p}"),
            ContentDescriptor::Object(u) => write!(f, "@{u}"),
            ContentDescriptor::Fragment(p) => match p.anchor() {
                Some(a) => write!(f, "%{}x{}@{}+{},{}", p.width(), p.height(), a.world, a.offset.dx, a.offset.dy),
                None => write!(f, "%{}x{}", p.width(), p.height()),
            },
            ContentDescriptor::Symbol(u) => write!(f, "${u}"),
        }
    }
}

/// One cell where a stored value contradicts the ground, in world
/// coordinates. Only determinate-against-determinate differences count;
/// an unassigned ground cell contradicts nothing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DiffCell {
    pub coord: Coord,
    pub attribute: String,
    pub stored: String,
    pub ground: String,
}

pub(crate) struct GroundComparison {
    /// Every content-bearing cell of the patch landed inside the world.
    pub in_bounds: bool,
    pub diffs: Vec<DiffCell>,
}

/// Compares a patch placed at `offset` in `world` against the ground,
/// ignoring symbol tokens (symbols carry no analogical content).
pub(crate) fn compare_with_ground(
    universe: &Universe,
    world: &WorldId,
    offset: Offset,
    patch: &Patch,
) -> Result<GroundComparison> {
    let ground = universe.world(world)?;
    let extent = ground.extent();
    let mut in_bounds = true;
    let mut diffs = Vec::new();
    for (c, cell) in patch.occupied_cells() {
        if cell.content.is_empty() {
            continue;
        }
        let at = c.shifted(offset);
        if !extent.contains(at) {
            in_bounds = false;
            continue;
        }
        for (attribute, stored) in &cell.content {
            if let Some(value) = ground.value_at(at, attribute) {
                if value != stored {
                    diffs.push(DiffCell {
                        coord: at,
                        attribute: attribute.clone(),
                        stored: stored.clone(),
                        ground: value.to_string(),
                    });
                }
            }
        }
    }
    Ok(GroundComparison { in_bounds, diffs })
}

/// The whole assigned content of a world as one unanchored patch.
fn world_as_patch(universe: &Universe, world: &WorldId) -> Result<Patch> {
    let extent = universe.world(world)?.extent();
    let fragment = universe.ground_fragment(world, extent.rect())?;
    Ok(patch_from_fragment(&fragment).clear_anchor())
}

/// A copy of the patch without tokens or anchor, for occurrence scans
/// against token-free ground content.
fn content_only(patch: &Patch) -> Patch {
    let mut out = Patch::new(patch.width(), patch.height());
    for (c, cell) in patch.occupied_cells() {
        for (attribute, value) in &cell.content {
            out.set(c.x, c.y, attribute, value);
        }
    }
    out
}

fn clip(region: Rect, bounds: Rect) -> Option<Rect> {
    let x = region.x.max(bounds.x);
    let y = region.y.max(bounds.y);
    let right = region.right().min(bounds.right());
    let bottom = region.bottom().min(bounds.bottom());
    if x < right && y < bottom {
        Some(Rect::new(x, y, (right - x) as u32, (bottom - y) as u32))
    } else {
        None
    }
}

/// Ground regions where the unit's images place it in `world`: anchored
/// images claim their anchor footprint (clipped), unanchored images claim
/// every location where they occur. Rules, having no finite footprint,
/// locate nothing.
fn located_regions(
    system: &RepresentationalSystem,
    universe: &Universe,
    unit: &UnitId,
    world: &WorldId,
) -> Result<Vec<Rect>> {
    let entry = system
        .entry(unit)
        .filter(|e| !e.is_empty())
        .ok_or_else(|| Error::NoContent(unit.clone()))?;
    let bounds = universe.world(world)?.extent().rect();
    let mut regions = Vec::new();
    for code in entry.codes() {
        let patch = system.memory().retrieve(code)?;
        match patch.anchor() {
            Some(anchor) if &anchor.world == world => {
                let footprint = Rect::new(anchor.offset.dx, anchor.offset.dy, patch.width(), patch.height());
                if let Some(clipped) = clip(footprint, bounds) {
                    regions.push(clipped);
                }
            }
            Some(_) => {}
            None => {
                let template = content_only(patch);
                if template.occupied_cells().next().is_none() {
                    continue;
                }
                let host = world_as_patch(universe, world)?;
                for offset in template_occurrences(&template, &host) {
                    regions.push(Rect::new(offset.dx, offset.dy, patch.width(), patch.height()));
                }
            }
        }
    }
    regions.sort_by_key(|r| (r.y, r.x, r.height, r.width));
    regions.dedup();
    Ok(regions)
}

/// The unit's first stored image (lowest code), token-stripped, as the
/// template its occurrences are judged by.
fn first_template(system: &RepresentationalSystem, unit: &UnitId) -> Result<Patch> {
    let entry = system.entry(unit).ok_or_else(|| Error::NoContent(unit.clone()))?;
    let code = entry.codes().next().ok_or_else(|| Error::NoContent(unit.clone()))?;
    Ok(content_only(system.memory().retrieve(code)?))
}

fn proposition_present(
    system: &RepresentationalSystem,
    universe: &Universe,
    prop: &Proposition,
    world: &WorldId,
) -> Result<bool> {
    let regions = located_regions(system, universe, &prop.subject, world)?;
    if regions.is_empty() {
        // an unlocated subject makes the proposition neither present nor
        // excluded in this world
        return Ok(false);
    }
    let template = first_template(system, &prop.predicate)?;
    let mut occurs = false;
    for region in regions {
        let fragment = universe.ground_fragment(world, region)?;
        let host = patch_from_fragment(&fragment).clear_anchor();
        if template_occurs(&template, &host).is_some() {
            occurs = true;
            break;
        }
    }
    Ok(match prop.polarity {
        Polarity::Affirmed => occurs,
        Polarity::Negated => !occurs,
    })
}

/// Whether the content is present in the world: a proposition holds of the
/// ground, an object has a conflict-free image there, or a fragment
/// unifies conflict-free at its anchor (anchored) or occurs anywhere
/// (unanchored). Bare symbols are never present in grid worlds.
pub fn is_present(
    system: &RepresentationalSystem,
    universe: &Universe,
    content: &ContentDescriptor,
    world: &WorldId,
) -> Result<bool> {
    match content {
        ContentDescriptor::Proposition(prop) => proposition_present(system, universe, prop, world),
        ContentDescriptor::Object(unit) => {
            let entry = system
                .entry(unit)
                .filter(|e| !e.is_empty())
                .ok_or_else(|| Error::NoContent(unit.clone()))?;
            for code in entry.codes() {
                let patch = system.memory().retrieve(code)?;
                match patch.anchor() {
                    Some(anchor) if &anchor.world == world => {
                        let cmp = compare_with_ground(universe, world, anchor.offset, patch)?;
                        if cmp.in_bounds && cmp.diffs.is_empty() {
                            return Ok(true);
                        }
                    }
                    Some(_) => {}
                    None => {
                        let template = content_only(patch);
                        if template.occupied_cells().next().is_some()
                            && template_occurs(&template, &world_as_patch(universe, world)?).is_some()
                        {
                            return Ok(true);
                        }
                    }
                }
            }
            Ok(false)
        }
        ContentDescriptor::Fragment(patch) => match patch.anchor() {
            Some(anchor) => {
                if &anchor.world != world {
                    return Ok(false);
                }
                let cmp = compare_with_ground(universe, world, anchor.offset, patch)?;
                Ok(cmp.in_bounds && cmp.diffs.is_empty())
            }
            None => {
                let template = content_only(patch);
                if template.occupied_cells().next().is_none() {
                    return Ok(true);
                }
                Ok(template_occurs(&template, &world_as_patch(universe, world)?).is_some())
            }
        },
        ContentDescriptor::Symbol(_) => Ok(false),
    }
}

/// Whether unifying the content into the world's display is impossible:
/// an anchored fragment conflicts at its anchor, an object or unanchored
/// fragment occurs nowhere without conflict, or the opposite proposition
/// is present. A symbol is neither present nor excluded, and a located
/// but out-of-bounds fragment is neither as well.
pub fn is_excluded(
    system: &RepresentationalSystem,
    universe: &Universe,
    content: &ContentDescriptor,
    world: &WorldId,
) -> Result<bool> {
    match content {
        ContentDescriptor::Proposition(prop) => {
            let opposite = Proposition {
                subject: prop.subject.clone(),
                predicate: prop.predicate.clone(),
                polarity: match prop.polarity {
                    Polarity::Affirmed => Polarity::Negated,
                    Polarity::Negated => Polarity::Affirmed,
                },
            };
            proposition_present(system, universe, &opposite, world)
        }
        ContentDescriptor::Fragment(patch) => match patch.anchor() {
            Some(anchor) => {
                if &anchor.world != world {
                    return Ok(false);
                }
                let cmp = compare_with_ground(universe, world, anchor.offset, patch)?;
                Ok(!cmp.diffs.is_empty())
            }
            None => Ok(!is_present(system, universe, content, world)?),
        },
        ContentDescriptor::Object(_) => Ok(!is_present(system, universe, content, world)?),
        ContentDescriptor::Symbol(_) => Ok(false),
    }
}

/// Connectives as extension mechanisms: conjunction co-displays de jure,
/// disjunction spreads alternatives over world branches, negation asserts
/// the impossibility of unification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ExtensionConstruct {
    Leaf(ContentDescriptor),
    Conjoin(Vec<ExtensionConstruct>),
    Disjoin(Vec<ExtensionConstruct>),
    Negate(Box<ExtensionConstruct>),
}

impl From<ContentDescriptor> for ExtensionConstruct {
    fn from(content: ContentDescriptor) -> Self {
        ExtensionConstruct::Leaf(content)
    }
}

/// Co-presence de jure: both members must hold in the same world, even
/// when their union exceeds the window and can only be displayed
/// sequentially.
pub fn conjoin(a: impl Into<ExtensionConstruct>, b: impl Into<ExtensionConstruct>) -> ExtensionConstruct {
    ExtensionConstruct::Conjoin(vec![a.into(), b.into()])
}

/// Co-display of alternatives, each on its own world branch; holds iff
/// some alternative holds.
pub fn disjoin(alternatives: Vec<ExtensionConstruct>) -> Result<ExtensionConstruct> {
    if alternatives.is_empty() {
        return Err(Error::EmptyDisjunction);
    }
    Ok(ExtensionConstruct::Disjoin(alternatives))
}

/// Exclusion: holds in a world iff unifying the content there conflicts.
pub fn negate(content: impl Into<ExtensionConstruct>) -> ExtensionConstruct {
    ExtensionConstruct::Negate(Box::new(content.into()))
}

/// Evaluates a construct under a valuation. Only symbol leaves are
/// propositional; any other leaf cannot be read off a valuation.
pub fn eval_construct(construct: &ExtensionConstruct, valuation: &Valuation) -> Result<bool> {
    match construct {
        ExtensionConstruct::Leaf(ContentDescriptor::Symbol(unit)) => valuation.get(unit.as_str()),
        ExtensionConstruct::Leaf(_) => Err(Error::NonPropositionalLeaf),
        ExtensionConstruct::Conjoin(parts) => {
            for part in parts {
                if !eval_construct(part, valuation)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ExtensionConstruct::Disjoin(parts) => {
            for part in parts {
                if eval_construct(part, valuation)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        ExtensionConstruct::Negate(inner) => Ok(!eval_construct(inner, valuation)?),
    }
}

/// Evaluates a construct against the system's bound universe in `world`.
pub fn eval_construct_in_world(
    system: &RepresentationalSystem,
    construct: &ExtensionConstruct,
    world: &WorldId,
) -> Result<bool> {
    let universe = system
        .universe()
        .ok_or_else(|| Error::UnknownWorld(world.clone()))?;
    eval_construct_against(system, universe, construct, world)
}

fn eval_construct_against(
    system: &RepresentationalSystem,
    universe: &Universe,
    construct: &ExtensionConstruct,
    world: &WorldId,
) -> Result<bool> {
    match construct {
        ExtensionConstruct::Leaf(content) => is_present(system, universe, content, world),
        ExtensionConstruct::Conjoin(parts) => {
            for part in parts {
                if !eval_construct_against(system, universe, part, world)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ExtensionConstruct::Disjoin(parts) => {
            for part in parts {
                if eval_construct_against(system, universe, part, world)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        // negating a leaf is exclusion (conflict under unification);
        // negating a compound is the classical complement
        ExtensionConstruct::Negate(inner) => match inner.as_ref() {
            ExtensionConstruct::Leaf(content) => is_excluded(system, universe, content, world),
            compound => Ok(!eval_construct_against(system, universe, compound, world)?),
        },
    }
}

/// « Given A, B » — a symbolic shortcut of a unifying scenario. The
/// scenario, when known, is the path whose first situation bears the
/// antecedent and whose last bears the consequent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParticularImplication {
    pub antecedent: ContentDescriptor,
    pub consequent: ContentDescriptor,
    pub scenario: Option<Path>,
}

impl fmt::Display for ParticularImplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.antecedent, self.consequent)
    }
}

/// Whether a situation's patch displays the content.
fn bears(system: &RepresentationalSystem, situation: &SituationId, content: &ContentDescriptor) -> Result<bool> {
    let host = &system.situation(situation)?.patch;
    match content {
        ContentDescriptor::Fragment(patch) => Ok(template_occurs(patch, host).is_some()),
        ContentDescriptor::Object(unit) => {
            let Some(entry) = system.entry(unit) else {
                return Ok(false);
            };
            for code in entry.codes() {
                if template_occurs(system.memory().retrieve(code)?, host).is_some() {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        ContentDescriptor::Proposition(prop) => {
            let subject = match first_template(system, &prop.subject) {
                Ok(t) => t,
                Err(Error::NoContent(_)) => return Ok(false),
                Err(e) => return Err(e),
            };
            let predicate = match first_template(system, &prop.predicate) {
                Ok(t) => t,
                Err(Error::NoContent(_)) => return Ok(false),
                Err(e) => return Err(e),
            };
            let subject_shown = template_occurs(&subject, host).is_some();
            let predicate_shown = template_occurs(&predicate, host).is_some();
            Ok(match prop.polarity {
                Polarity::Affirmed => subject_shown && predicate_shown,
                Polarity::Negated => subject_shown && !predicate_shown,
            })
        }
        ContentDescriptor::Symbol(unit) => Ok(host
            .symbol_tokens()
            .iter()
            .any(|token| &token.unit == unit)),
    }
}

fn check_unit_exists(system: &RepresentationalSystem, content: &ContentDescriptor) -> Result<()> {
    match content {
        ContentDescriptor::Proposition(p) => {
            system.unit(&p.subject)?;
            system.unit(&p.predicate)?;
        }
        ContentDescriptor::Object(u) | ContentDescriptor::Symbol(u) => {
            system.unit(u)?;
        }
        ContentDescriptor::Fragment(patch) => {
            for token in patch.symbol_tokens() {
                system.unit(&token.unit)?;
            }
        }
    }
    Ok(())
}

/// Forms a particular implication, checking that the scenario (when
/// given) runs from a situation bearing the antecedent to one bearing the
/// consequent.
pub fn implicate(
    system: &RepresentationalSystem,
    antecedent: ContentDescriptor,
    consequent: ContentDescriptor,
    scenario: Option<Path>,
) -> Result<ParticularImplication> {
    check_unit_exists(system, &antecedent)?;
    check_unit_exists(system, &consequent)?;
    if let Some(path) = &scenario {
        path.verify(system)?;
        let first = path.situations.first().expect("verified path is nonempty");
        let last = path.situations.last().expect("verified path is nonempty");
        if !bears(system, first, &antecedent)? {
            return Err(Error::MismatchedScenario {
                reason: format!("situation `{first}` does not bear the antecedent {antecedent}"),
            });
        }
        if !bears(system, last, &consequent)? {
            return Err(Error::MismatchedScenario {
                reason: format!("situation `{last}` does not bear the consequent {consequent}"),
            });
        }
    }
    Ok(ParticularImplication {
        antecedent,
        consequent,
        scenario,
    })
}

/// The three outcomes of evaluating a particular implication in a world.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ImplicationOutcome {
    Holds,
    Fails,
    /// The antecedent is absent: there is nothing to jump from, so the
    /// implication has no content in this world rather than a truth value.
    NoContent,
}

impl fmt::Display for ImplicationOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImplicationOutcome::Holds => "holds",
            ImplicationOutcome::Fails => "fails",
            ImplicationOutcome::NoContent => "no-content",
        })
    }
}

/// Evaluates a particular implication against the system's bound universe.
pub fn eval_particular_implication(
    system: &RepresentationalSystem,
    imp: &ParticularImplication,
    world: &WorldId,
) -> Result<ImplicationOutcome> {
    let universe = system
        .universe()
        .ok_or_else(|| Error::UnknownWorld(world.clone()))?;
    eval_implication_against(system, universe, imp, world)
}

fn eval_implication_against(
    system: &RepresentationalSystem,
    universe: &Universe,
    imp: &ParticularImplication,
    world: &WorldId,
) -> Result<ImplicationOutcome> {
    if !is_present(system, universe, &imp.antecedent, world)? {
        return Ok(ImplicationOutcome::NoContent);
    }
    if is_present(system, universe, &imp.consequent, world)? {
        Ok(ImplicationOutcome::Holds)
    } else {
        Ok(ImplicationOutcome::Fails)
    }
}

pub(crate) fn substitute_in_descriptor(
    content: &ContentDescriptor,
    from: &UnitId,
    to: &UnitId,
) -> ContentDescriptor {
    let swap = |unit: &UnitId| if unit == from { to.clone() } else { unit.clone() };
    match content {
        ContentDescriptor::Proposition(p) => {
            ContentDescriptor::Proposition(crate::web::substitute_in_proposition(p, from, to))
        }
        ContentDescriptor::Object(u) => ContentDescriptor::Object(swap(u)),
        ContentDescriptor::Symbol(u) => ContentDescriptor::Symbol(swap(u)),
        ContentDescriptor::Fragment(patch) => {
            let mut out = Patch::new(patch.width(), patch.height());
            for (c, cell) in patch.occupied_cells() {
                for (attribute, value) in &cell.content {
                    out.set(c.x, c.y, attribute, value);
                }
                if let Some(unit) = &cell.token {
                    out.set_token(c.x, c.y, swap(unit));
                }
            }
            if let Some(anchor) = patch.anchor() {
                out = out.with_anchor(anchor.clone());
            }
            ContentDescriptor::Fragment(out)
        }
    }
}

pub(crate) fn unit_occurs_in_descriptor(content: &ContentDescriptor, unit: &UnitId) -> bool {
    match content {
        ContentDescriptor::Proposition(p) => &p.subject == unit,
        ContentDescriptor::Object(u) | ContentDescriptor::Symbol(u) => u == unit,
        ContentDescriptor::Fragment(patch) => {
            patch.symbol_tokens().iter().any(|token| &token.unit == unit)
        }
    }
}

/// Substitutes a unit through both sides of an implication; the scenario
/// is untouched (paths mention situations, not terms).
pub(crate) fn substitute_in_implication(
    imp: &ParticularImplication,
    from: &UnitId,
    to: &UnitId,
) -> ParticularImplication {
    ParticularImplication {
        antecedent: substitute_in_descriptor(&imp.antecedent, from, to),
        consequent: substitute_in_descriptor(&imp.consequent, from, to),
        scenario: imp.scenario.clone(),
    }
}

pub(crate) fn unit_occurs_in_implication(imp: &ParticularImplication, unit: &UnitId) -> bool {
    unit_occurs_in_descriptor(&imp.antecedent, unit) || unit_occurs_in_descriptor(&imp.consequent, unit)
}

/// A general implication: a particular implication with one term opened
/// into a variable ranging over a finite domain of name units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Law {
    pub template: ParticularImplication,
    pub variable: UnitId,
    pub domain: BTreeSet<UnitId>,
}

impl Law {
    /// The variable must occur in the antecedent template, otherwise the
    /// law jumps from nothing that mentions its own subject.
    pub fn check_shape(&self) -> Result<()> {
        if !unit_occurs_in_descriptor(&self.template.antecedent, &self.variable) {
            return Err(Error::TermAbsent(self.variable.clone()));
        }
        Ok(())
    }
}

/// Variabilizes a particular implication on `term`, minting a fresh
/// variable unit. Instantiating the law back at `term` reproduces the
/// implication.
pub fn generalize(
    system: &mut RepresentationalSystem,
    imp: &ParticularImplication,
    term: &UnitId,
    domain: BTreeSet<UnitId>,
) -> Result<Law> {
    if !unit_occurs_in_descriptor(&imp.antecedent, term) {
        return Err(Error::TermAbsent(term.clone()));
    }
    if !domain.contains(term) {
        return Err(Error::TermOutsideDomain { term: term.clone() });
    }
    let variable = system.mint_unit(UnitKind::Variable);
    let template = substitute_in_implication(imp, term, &variable);
    Ok(Law {
        template,
        variable,
        domain,
    })
}

/// Closes a law at a domain term, yielding a particular implication. The
/// template's scenario is kept only when its endpoints still bear the
/// substituted contents.
pub fn instantiate(
    system: &RepresentationalSystem,
    law: &Law,
    term: &UnitId,
) -> Result<ParticularImplication> {
    if !law.domain.contains(term) {
        return Err(Error::TermOutsideDomain { term: term.clone() });
    }
    let mut imp = substitute_in_implication(&law.template, &law.variable, term);
    if let Some(path) = imp.scenario.take() {
        let first = path.situations.first().cloned();
        let last = path.situations.last().cloned();
        if let (Some(first), Some(last)) = (first, last) {
            if bears(system, &first, &imp.antecedent)? && bears(system, &last, &imp.consequent)? {
                imp.scenario = Some(path);
            }
        }
    }
    Ok(imp)
}

/// The mapping a law induces from antecedent instances to consequent
/// instances, materialized over its finite domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawView {
    pub variable: UnitId,
    pub instances: BTreeMap<UnitId, ParticularImplication>,
}

impl LawView {
    /// The consequent instance at a domain term.
    pub fn image(&self, term: &UnitId) -> Option<&ContentDescriptor> {
        self.instances.get(term).map(|imp| &imp.consequent)
    }

    /// The consequent paired with a given antecedent instance, i.e. the
    /// induced function applied by content rather than by term.
    pub fn image_of_antecedent(&self, antecedent: &ContentDescriptor) -> Option<&ContentDescriptor> {
        self.instances
            .values()
            .find(|imp| &imp.antecedent == antecedent)
            .map(|imp| &imp.consequent)
    }
}

/// Materializes the induced mapping; an empty domain yields an empty
/// (still valid) view.
pub fn law_view(system: &RepresentationalSystem, law: &Law) -> Result<LawView> {
    let mut instances = BTreeMap::new();
    for term in &law.domain {
        instances.insert(term.clone(), instantiate(system, law, term)?);
    }
    Ok(LawView {
        variable: law.variable.clone(),
        instances,
    })
}

/// Which system property a report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Property {
    Completeness,
    SCompleteness,
    Faithfulness,
    Coherence,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Completeness => "completeness",
            Property::SCompleteness => "s-completeness",
            Property::Faithfulness => "faithfulness",
            Property::Coherence => "coherence",
        })
    }
}

/// One ground assignment no supplier reproduces.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MissingAssignment {
    pub coord: Coord,
    pub attribute: String,
    pub value: String,
}

/// A window-aligned region with at least one unreproduced assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MissingRegion {
    pub world: WorldId,
    pub region: Rect,
    pub missing: Vec<MissingAssignment>,
}

/// The four ways a representation can be unfaithful to its universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FaithfulnessClass {
    /// A stored patch contradicts the ground at its anchor.
    ErroneousDatum,
    /// One name whose situations fall into disconnected components: two
    /// entities received the same name.
    IllNaming,
    /// A registered proposition contradicted by the ground where its
    /// subject is located.
    WrongPredication,
    /// A law instance that fails in some world: the declared domain is
    /// too wide.
    WrongLawDomain,
}

impl fmt::Display for FaithfulnessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaithfulnessClass::ErroneousDatum => "erroneous-datum",
            FaithfulnessClass::IllNaming => "ill-naming",
            FaithfulnessClass::WrongPredication => "wrong-predication",
            FaithfulnessClass::WrongLawDomain => "wrong-law-domain",
        })
    }
}

/// What a faithfulness witness points at.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SourceRef {
    Situation(SituationId),
    Code(CodeId),
    Unit(UnitId),
    Law(UnitId),
    Term(UnitId),
}

impl fmt::Display for SourceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceRef::Situation(id) => write!(f, "situation `{id}`"),
            SourceRef::Code(id) => write!(f, "code {id}"),
            SourceRef::Unit(id) => write!(f, "unit `{id}`"),
            SourceRef::Law(id) => write!(f, "law `{id}`"),
            SourceRef::Term(id) => write!(f, "term `{id}`"),
        }
    }
}

/// One classified mismatch between the representation and the ground.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnfaithfulnessWitness {
    pub class: FaithfulnessClass,
    pub world: Option<WorldId>,
    pub sources: Vec<SourceRef>,
    /// For erroneous data: the differing cells, in world coordinates.
    pub cells: Vec<DiffCell>,
    pub detail: String,
}

/// Evidence carried by a failing property report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PropertyWitness {
    MissingRegion(MissingRegion),
    Unfaithful(UnfaithfulnessWitness),
    Incoherence {
        target: String,
        report: IncoherenceReport,
    },
}

/// Verdict of a checker with its witnesses; a failing verdict always
/// carries at least one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub passed: bool,
    pub witnesses: Vec<PropertyWitness>,
    /// Items the checker could not compare, listed rather than silently
    /// dropped (e.g. unanchored stored patches).
    pub skipped: Vec<String>,
}

impl PropertyReport {
    fn new(property: Property, witnesses: Vec<PropertyWitness>, skipped: Vec<String>) -> Self {
        Self {
            property,
            passed: witnesses.is_empty(),
            witnesses,
            skipped,
        }
    }
}

enum CoverageMode {
    /// Anything anchored counts: situations plus all stored codes.
    Full,
    /// Only the symbolic web counts: codes referenced by semantic entries.
    SymbolicOnly,
}

/// Completeness: every window-aligned ground region of every world is
/// reproduced cell-by-cell by anchored situations, anchored stored codes,
/// or rule evaluations.
pub fn check_completeness(system: &RepresentationalSystem, universe: &Universe) -> Result<PropertyReport> {
    let window = (system.window().width(), system.window().height());
    coverage(system, universe, CoverageMode::Full, window)
}

/// Completeness with a finer region stride than the window (regions stay
/// window-sized; the stride moves their origins).
pub fn check_completeness_with_stride(
    system: &RepresentationalSystem,
    universe: &Universe,
    stride: (u32, u32),
) -> Result<PropertyReport> {
    coverage(system, universe, CoverageMode::Full, stride)
}

/// S-completeness: as completeness, but only content reachable through
/// the symbolic web counts — entry-referenced anchored codes and entry
/// rules; transient unencoded situations are ignored.
pub fn check_s_completeness(system: &RepresentationalSystem, universe: &Universe) -> Result<PropertyReport> {
    let window = (system.window().width(), system.window().height());
    coverage(system, universe, CoverageMode::SymbolicOnly, window)
}

fn coverage(
    system: &RepresentationalSystem,
    universe: &Universe,
    mode: CoverageMode,
    stride: (u32, u32),
) -> Result<PropertyReport> {
    if universe.schema() != system.window().schema() {
        return Err(Error::BoundSchemaMismatch);
    }
    let property = match mode {
        CoverageMode::Full => Property::Completeness,
        CoverageMode::SymbolicOnly => Property::SCompleteness,
    };
    let (stride_x, stride_y) = (stride.0.max(1), stride.1.max(1));
    let (win_w, win_h) = (system.window().width(), system.window().height());

    let mut anchored: Vec<(&Anchor, &Patch)> = Vec::new();
    match mode {
        CoverageMode::Full => {
            for (_, situation) in system.situations() {
                anchored.push((&situation.anchor, &situation.patch));
            }
            for (_, patch) in system.memory().iter() {
                if let Some(anchor) = patch.anchor() {
                    anchored.push((anchor, patch));
                }
            }
        }
        CoverageMode::SymbolicOnly => {
            let mut seen = BTreeSet::new();
            for (_, entry) in system.entries() {
                for code in entry.codes() {
                    if seen.insert(code) {
                        let patch = system.memory().retrieve(code)?;
                        if let Some(anchor) = patch.anchor() {
                            anchored.push((anchor, patch));
                        }
                    }
                }
            }
        }
    }
    let rules: Vec<&Rule> = system.entries().flat_map(|(_, entry)| entry.rules()).collect();

    let mut witnesses = Vec::new();
    for world in universe.worlds() {
        let extent = world.extent();
        let mut y = 0u32;
        while y < extent.height {
            let mut x = 0u32;
            while x < extent.width {
                let region = Rect::new(
                    x as i32,
                    y as i32,
                    win_w.min(extent.width - x),
                    win_h.min(extent.height - y),
                );
                let evaluated: Vec<Patch> = rules.iter().map(|rule| rule.evaluate(region)).collect();
                let mut missing = Vec::new();
                for coord in region.cells() {
                    let Some(content) = world.content_at(coord) else {
                        continue;
                    };
                    'assignments: for (attribute, value) in content {
                        for (anchor, patch) in &anchored {
                            if &anchor.world != world.id() {
                                continue;
                            }
                            if let Some(cell) =
                                patch.cell(coord.x - anchor.offset.dx, coord.y - anchor.offset.dy)
                            {
                                if cell.content.get(attribute) == Some(value) {
                                    continue 'assignments;
                                }
                            }
                        }
                        for patch in &evaluated {
                            if let Some(cell) = patch.cell(coord.x - region.x, coord.y - region.y) {
                                if cell.content.get(attribute) == Some(value) {
                                    continue 'assignments;
                                }
                            }
                        }
                        missing.push(MissingAssignment {
                            coord,
                            attribute: attribute.clone(),
                            value: value.clone(),
                        });
                    }
                }
                if !missing.is_empty() {
                    witnesses.push(PropertyWitness::MissingRegion(MissingRegion {
                        world: world.id().clone(),
                        region,
                        missing,
                    }));
                }
                x += stride_x;
            }
            y += stride_y;
        }
    }
    Ok(PropertyReport::new(property, witnesses, Vec::new()))
}

/// Faithfulness: every anchored stored content matches the ground, names
/// are not shared across entities, registered propositions and law
/// domains agree with the universe. Witnesses are deduplicated by
/// (world, anchor, differing cells), so a situation and an identical
/// stored code yield one witness with two sources.
pub fn check_faithfulness(system: &RepresentationalSystem, universe: &Universe) -> Result<PropertyReport> {
    if universe.schema() != system.window().schema() {
        return Err(Error::BoundSchemaMismatch);
    }
    let mut witnesses = Vec::new();
    let mut skipped = Vec::new();

    // erroneous data: anchored patches vs the ground, deduplicated
    let mut erroneous: BTreeMap<(WorldId, (i32, i32), Vec<DiffCell>), Vec<SourceRef>> = BTreeMap::new();
    let mut compare = |anchor: &Anchor, patch: &Patch, source: SourceRef, skipped: &mut Vec<String>| -> Result<()> {
        if !universe.contains_world(&anchor.world) {
            skipped.push(format!("{source}: anchored in unknown world `{}`", anchor.world));
            return Ok(());
        }
        let cmp = compare_with_ground(universe, &anchor.world, anchor.offset, patch)?;
        if !cmp.diffs.is_empty() {
            let key = (
                anchor.world.clone(),
                (anchor.offset.dx, anchor.offset.dy),
                cmp.diffs,
            );
            erroneous.entry(key).or_default().push(source);
        }
        Ok(())
    };
    for (id, situation) in system.situations() {
        compare(
            &situation.anchor,
            &situation.patch,
            SourceRef::Situation(id.clone()),
            &mut skipped,
        )?;
    }
    for (code, patch) in system.memory().iter() {
        match patch.anchor() {
            Some(anchor) => compare(anchor, patch, SourceRef::Code(code), &mut skipped)?,
            None => skipped.push(format!("code {code}: unanchored, not compared to any ground")),
        }
    }
    for ((world, _, diffs), mut sources) in erroneous {
        sources.sort();
        sources.dedup();
        witnesses.push(PropertyWitness::Unfaithful(UnfaithfulnessWitness {
            class: FaithfulnessClass::ErroneousDatum,
            world: Some(world),
            sources,
            detail: format!("{} stored value(s) differ from the ground", diffs.len()),
            cells: diffs,
        }));
    }

    // ill-naming: one object whose situations span several components
    let components = representational_space(system);
    for record in system.objects() {
        let spanned = components
            .iter()
            .filter(|c| record.situations.iter().any(|s| c.situations.contains(s)))
            .count();
        if spanned > 1 {
            witnesses.push(PropertyWitness::Unfaithful(UnfaithfulnessWitness {
                class: FaithfulnessClass::IllNaming,
                world: None,
                sources: vec![SourceRef::Unit(record.unit.clone())],
                cells: Vec::new(),
                detail: format!(
                    "object `{}` spans {} disconnected components: one name for several entities",
                    record.unit, spanned
                ),
            }));
        }
    }

    // wrong predication: registered propositions vs the ground
    for prop in system.propositions() {
        for world in universe.worlds() {
            let regions = match located_regions(system, universe, &prop.subject, world.id()) {
                Ok(regions) => regions,
                Err(Error::NoContent(unit)) => {
                    skipped.push(format!("proposition {prop}: subject `{unit}` has no content"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            if regions.is_empty() {
                continue;
            }
            let wrong = match proposition_present(system, universe, prop, world.id()) {
                Ok(present) => !present,
                Err(Error::NoContent(unit)) => {
                    skipped.push(format!("proposition {prop}: predicate `{unit}` has no content"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            if wrong {
                witnesses.push(PropertyWitness::Unfaithful(UnfaithfulnessWitness {
                    class: FaithfulnessClass::WrongPredication,
                    world: Some(world.id().clone()),
                    sources: vec![
                        SourceRef::Unit(prop.subject.clone()),
                        SourceRef::Unit(prop.predicate.clone()),
                    ],
                    cells: Vec::new(),
                    detail: format!(
                        "proposition {prop} is contradicted by the ground in world `{}`",
                        world.id()
                    ),
                }));
            }
        }
    }

    // wrong law domain: some instance fails in some world
    for (label, law) in system.laws() {
        for term in &law.domain {
            let instance = match instantiate(system, law, term) {
                Ok(instance) => instance,
                Err(e) => {
                    skipped.push(format!("law `{label}` at `{term}`: {e}"));
                    continue;
                }
            };
            for world in universe.worlds() {
                match eval_implication_against(system, universe, &instance, world.id()) {
                    Ok(ImplicationOutcome::Fails) => {
                        witnesses.push(PropertyWitness::Unfaithful(UnfaithfulnessWitness {
                            class: FaithfulnessClass::WrongLawDomain,
                            world: Some(world.id().clone()),
                            sources: vec![SourceRef::Law(label.clone()), SourceRef::Term(term.clone())],
                            cells: Vec::new(),
                            detail: format!(
                                "law `{label}` instantiated at `{term}` fails in world `{}`",
                                world.id()
                            ),
                        }));
                    }
                    Ok(_) => {}
                    Err(Error::NoContent(unit)) => {
                        skipped.push(format!(
                            "law `{label}` at `{term}` in world `{}`: unit `{unit}` has no content",
                            world.id()
                        ));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }

    skipped.sort();
    skipped.dedup();
    Ok(PropertyReport::new(Property::Faithfulness, witnesses, skipped))
}

/// Coherence of one explicitation target, as a property report wrapping
/// the explicitation outcome.
pub fn check_coherence(
    system: &RepresentationalSystem,
    target: ExplicitationTarget<'_>,
    budget: usize,
) -> Result<PropertyReport> {
    let label = match &target {
        ExplicitationTarget::Fragment(_) => "fragment".to_string(),
        ExplicitationTarget::Unit(unit) => format!("unit `{unit}`"),
    };
    let mut witnesses = Vec::new();
    if let ExplicitationOutcome::Incoherent(report) = explicitate(system, target, budget)? {
        witnesses.push(PropertyWitness::Incoherence {
            target: label,
            report,
        });
    }
    Ok(PropertyReport::new(Property::Coherence, witnesses, Vec::new()))
}

/// Coherence of the whole web: explicitates every unit with a nonempty
/// entry, in id order, and reports every incoherent one.
pub fn check_coherence_all(system: &RepresentationalSystem, budget: usize) -> Result<PropertyReport> {
    let mut witnesses = Vec::new();
    for unit in system.units() {
        let has_content = system.entry(&unit.id).map_or(false, |e| !e.is_empty());
        if !has_content {
            continue;
        }
        let outcome = explicitate(system, ExplicitationTarget::Unit(&unit.id), budget)?;
        if let ExplicitationOutcome::Incoherent(report) = outcome {
            witnesses.push(PropertyWitness::Incoherence {
                target: format!("unit `{}`", unit.id),
                report,
            });
        }
    }
    Ok(PropertyReport::new(Property::Coherence, witnesses, Vec::new()))
}
