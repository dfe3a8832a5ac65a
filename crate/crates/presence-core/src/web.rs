//! The symbolic web: units, the multi-valued semantic relation, the memory
//! store of coded patches, links between situations, objects, and the three
//! degrees of abstraction (naming, predication, variabilization).
//!
//! A `RepresentationalSystem` bundles the window, the memory, the web, and
//! optionally the universe it is bound to. Construction is a single-threaded
//! build phase through `&mut self` methods; once built, every query and
//! checker takes `&self`, so a finished system can be shared freely.

use crate::error::{Error, Result};
use crate::geom::{Offset, Rect};
use crate::presence::{
    fits_window, read_situation, template_occurs, unify_patches, Anchor, Patch, Situation,
    WindowSpec,
};
use crate::universe::{CellContent, Universe};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

macro_rules! string_id {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

string_id!(
    /// Identifier of a symbolic unit.
    UnitId
);
string_id!(
    /// Identifier of a registered situation.
    SituationId
);
string_id!(
    /// Identifier of a link between situations.
    LinkId
);
string_id!(
    /// Identifier of an intensional rule within a semantic entry.
    RuleId
);

/// Memory code of a stored patch, assigned by insertion counter so that
/// identical insertion order yields identical codes across runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CodeId(pub u64);

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The role a symbolic unit plays in the web.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum UnitKind {
    Name,
    Predicate,
    PropositionSymbol,
    Variable,
    LawLabel,
    LinkLabel,
}

impl UnitKind {
    pub fn label(self) -> &'static str {
        match self {
            UnitKind::Name => "name",
            UnitKind::Predicate => "predicate",
            UnitKind::PropositionSymbol => "proposition-symbol",
            UnitKind::Variable => "variable",
            UnitKind::LawLabel => "law-label",
            UnitKind::LinkLabel => "link-label",
        }
    }

    /// Prefix used for engine-minted unit ids; `#` never appears in
    /// user-declared ids, so minted units cannot collide with them.
    fn mint_prefix(self) -> &'static str {
        match self {
            UnitKind::Name => "n",
            UnitKind::Predicate => "p",
            UnitKind::PropositionSymbol => "s",
            UnitKind::Variable => "x",
            UnitKind::LawLabel => "law",
            UnitKind::LinkLabel => "lk",
        }
    }
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One node of the symbolic web.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicUnit {
    pub id: UnitId,
    pub kind: UnitKind,
}

/// The store of coded patches.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MemoryStore {
    codes: BTreeMap<CodeId, Patch>,
    next: u64,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores a patch under the next insertion-counter code.
    pub fn store(&mut self, patch: Patch) -> CodeId {
        self.next += 1;
        let code = CodeId(self.next);
        self.codes.insert(code, patch);
        code
    }

    /// Stores a patch unless a byte-equal patch is already coded, in which
    /// case the lowest existing code is reused.
    pub fn find_or_store(&mut self, patch: &Patch) -> CodeId {
        match self.find(patch) {
            Some(code) => code,
            None => self.store(patch.clone()),
        }
    }

    pub fn retrieve(&self, code: CodeId) -> Result<&Patch> {
        self.codes.get(&code).ok_or(Error::UnknownCode(code))
    }

    /// Lowest code holding a patch equal to `patch`.
    pub fn find(&self, patch: &Patch) -> Option<CodeId> {
        self.codes.iter().find(|(_, p)| *p == patch).map(|(c, _)| *c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (CodeId, &Patch)> {
        self.codes.iter().map(|(c, p)| (*c, p))
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

/// An intensional image: a finitely described procedure producing a patch
/// for any requested region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub id: RuleId,
    pub body: RuleBody,
}

/// The procedures a rule may describe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RuleBody {
    /// Assigns the same content to every cell of the request.
    Fill { content: CellContent },
    /// The quantized circle x² + y² = 1 drawn on a `size`×`size` grid
    /// covering [-1, 1]²: cells the circle passes through get `on`, every
    /// other grid cell gets `off`. Cells outside the grid are left blank.
    Circle {
        size: u32,
        attribute: String,
        on: String,
        off: String,
    },
}

impl Rule {
    pub fn new(id: impl Into<RuleId>, body: RuleBody) -> Self {
        Self { id: id.into(), body }
    }

    /// Evaluates the rule on a region; the result is a region-sized patch in
    /// region-local coordinates.
    pub fn evaluate(&self, region: Rect) -> Patch {
        let mut patch = Patch::new(region.width, region.height);
        match &self.body {
            RuleBody::Fill { content } => {
                for c in region.cells() {
                    for (attribute, value) in content {
                        patch.set(c.x - region.x, c.y - region.y, attribute, value);
                    }
                }
            }
            RuleBody::Circle {
                size,
                attribute,
                on,
                off,
            } => {
                let n = *size as i64;
                for c in region.cells() {
                    let (gx, gy) = (c.x as i64, c.y as i64);
                    if gx < 0 || gy < 0 || gx >= n || gy >= n {
                        continue;
                    }
                    // scale by `size`: cell (gx, gy) covers the box
                    // [2gx-n, 2gx+2-n] × [2gy-n, 2gy+2-n], circle radius n.
                    // The circle passes through the cell iff the squared
                    // distance range of the box straddles n².
                    let value = if circle_crosses_box(gx, gy, n) { on } else { off };
                    patch.set(c.x - region.x, c.y - region.y, attribute, value);
                }
            }
        }
        patch
    }
}

/// Whether the circle of radius `n` about the origin meets the closed box
/// of cell `(gx, gy)` on the scaled grid (corners at `2i - n`).
fn circle_crosses_box(gx: i64, gy: i64, n: i64) -> bool {
    let span = |a: i64, b: i64| -> (i64, i64) {
        let min = if a <= 0 && 0 <= b { 0 } else { a.abs().min(b.abs()) };
        let max = a.abs().max(b.abs());
        (min * min, max * max)
    };
    let (min_x2, max_x2) = span(2 * gx - n, 2 * gx + 2 - n);
    let (min_y2, max_y2) = span(2 * gy - n, 2 * gy + 2 - n);
    min_x2 + min_y2 <= n * n && n * n <= max_x2 + max_y2
}

/// The images a semantic entry attributes to one unit: extensional stored
/// codes plus intensional rules. The relation is multi-valued by design.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SemanticEntry {
    codes: BTreeSet<CodeId>,
    rules: BTreeMap<RuleId, Rule>,
}

impl SemanticEntry {
    pub fn codes(&self) -> impl Iterator<Item = CodeId> + '_ {
        self.codes.iter().copied()
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty() && self.rules.is_empty()
    }

    pub fn image_count(&self) -> usize {
        self.codes.len() + self.rules.len()
    }
}

/// How a link is grounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LinkKind {
    /// Grounded: the endpoint patches analogically unify under the stored
    /// alignment (offset of `b` relative to `a`).
    Grounded { alignment: Offset },
    /// Declared without any effective content backing it.
    Artificial,
}

/// A connection chaining two situations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Link {
    pub id: LinkId,
    pub a: SituationId,
    pub b: SituationId,
    pub kind: LinkKind,
}

impl Link {
    pub fn is_grounded(&self) -> bool {
        matches!(self.kind, LinkKind::Grounded { .. })
    }

    /// The other endpoint, if `s` is one of the two.
    pub fn opposite(&self, s: &SituationId) -> Option<&SituationId> {
        if &self.a == s {
            Some(&self.b)
        } else if &self.b == s {
            Some(&self.a)
        } else {
            None
        }
    }
}

/// Whether a proposition affirms or denies its predicate of its subject.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Polarity {
    Affirmed,
    Negated,
}

/// Second-degree abstraction: a predicate applied to a named subject.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Proposition {
    pub subject: UnitId,
    pub predicate: UnitId,
    pub polarity: Polarity,
}

impl Proposition {
    pub fn affirmed(subject: impl Into<UnitId>, predicate: impl Into<UnitId>) -> Self {
        Self {
            subject: subject.into(),
            predicate: predicate.into(),
            polarity: Polarity::Affirmed,
        }
    }

    pub fn negated(subject: impl Into<UnitId>, predicate: impl Into<UnitId>) -> Self {
        Self {
            subject: subject.into(),
            predicate: predicate.into(),
            polarity: Polarity::Negated,
        }
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Affirmed => write!(f, "{}({})", self.predicate, self.subject),
            Polarity::Negated => write!(f, "!{}({})", self.predicate, self.subject),
        }
    }
}

/// A proposition or implication that variabilization can open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Expression {
    Proposition(Proposition),
    Implication(Box<crate::logic::ParticularImplication>),
}

/// Third-degree abstraction: an expression with one term opened into a
/// domain-tagged variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenExpression {
    pub body: Expression,
    pub variable: UnitId,
    pub domain: BTreeSet<UnitId>,
}

impl OpenExpression {
    /// Closes the expression by substituting a domain term for the variable.
    pub fn substitute(&self, term: &UnitId) -> Result<Expression> {
        if !self.domain.contains(term) {
            return Err(Error::TermOutsideDomain { term: term.clone() });
        }
        Ok(substitute_in_expression(&self.body, &self.variable, term))
    }
}

fn substitute_in_unit(slot: &UnitId, from: &UnitId, to: &UnitId) -> UnitId {
    if slot == from {
        to.clone()
    } else {
        slot.clone()
    }
}

pub(crate) fn substitute_in_proposition(p: &Proposition, from: &UnitId, to: &UnitId) -> Proposition {
    Proposition {
        subject: substitute_in_unit(&p.subject, from, to),
        predicate: p.predicate.clone(),
        polarity: p.polarity,
    }
}

pub(crate) fn substitute_in_expression(e: &Expression, from: &UnitId, to: &UnitId) -> Expression {
    match e {
        Expression::Proposition(p) => Expression::Proposition(substitute_in_proposition(p, from, to)),
        Expression::Implication(imp) => {
            Expression::Implication(Box::new(crate::logic::substitute_in_implication(imp, from, to)))
        }
    }
}

pub(crate) fn unit_occurs_in_expression(e: &Expression, unit: &UnitId) -> bool {
    match e {
        Expression::Proposition(p) => &p.subject == unit,
        Expression::Implication(imp) => crate::logic::unit_occurs_in_implication(imp, unit),
    }
}

/// A unifying representation organized around one name unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObjectRecord {
    pub unit: UnitId,
    pub situations: BTreeSet<SituationId>,
}

/// The window, the memory, and the web, optionally bound to a universe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentationalSystem {
    window: WindowSpec,
    memory: MemoryStore,
    units: BTreeMap<UnitId, SymbolicUnit>,
    semantics: BTreeMap<UnitId, SemanticEntry>,
    links: BTreeMap<LinkId, Link>,
    situations: BTreeMap<SituationId, Situation>,
    objects: BTreeMap<UnitId, ObjectRecord>,
    propositions: Vec<Proposition>,
    laws: BTreeMap<UnitId, crate::logic::Law>,
    bound_universe: Option<Universe>,
    minted: u64,
}

impl RepresentationalSystem {
    pub fn new(window: WindowSpec) -> Self {
        Self {
            window,
            memory: MemoryStore::new(),
            units: BTreeMap::new(),
            semantics: BTreeMap::new(),
            links: BTreeMap::new(),
            situations: BTreeMap::new(),
            objects: BTreeMap::new(),
            propositions: Vec::new(),
            laws: BTreeMap::new(),
            bound_universe: None,
            minted: 0,
        }
    }

    pub fn window(&self) -> &WindowSpec {
        &self.window
    }

    pub fn memory(&self) -> &MemoryStore {
        &self.memory
    }

    pub fn units(&self) -> impl Iterator<Item = &SymbolicUnit> {
        self.units.values()
    }

    pub fn unit(&self, id: &UnitId) -> Result<&SymbolicUnit> {
        self.units.get(id).ok_or_else(|| Error::UnknownUnit(id.clone()))
    }

    pub fn contains_unit(&self, id: &UnitId) -> bool {
        self.units.contains_key(id)
    }

    /// The unit's semantic entry; an absent entry reads as empty.
    pub fn entry(&self, id: &UnitId) -> Option<&SemanticEntry> {
        self.semantics.get(id)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&UnitId, &SemanticEntry)> {
        self.semantics.iter()
    }

    pub fn links(&self) -> impl Iterator<Item = &Link> {
        self.links.values()
    }

    pub fn link(&self, id: &LinkId) -> Result<&Link> {
        self.links.get(id).ok_or_else(|| Error::UnknownLink(id.clone()))
    }

    pub fn situations(&self) -> impl Iterator<Item = (&SituationId, &Situation)> {
        self.situations.iter()
    }

    pub fn situation(&self, id: &SituationId) -> Result<&Situation> {
        self.situations
            .get(id)
            .ok_or_else(|| Error::UnknownSituation(id.clone()))
    }

    pub fn objects(&self) -> impl Iterator<Item = &ObjectRecord> {
        self.objects.values()
    }

    pub fn object(&self, unit: &UnitId) -> Option<&ObjectRecord> {
        self.objects.get(unit)
    }

    pub fn propositions(&self) -> &[Proposition] {
        &self.propositions
    }

    pub fn laws(&self) -> impl Iterator<Item = (&UnitId, &crate::logic::Law)> {
        self.laws.iter()
    }

    pub fn law(&self, label: &UnitId) -> Result<&crate::logic::Law> {
        self.laws.get(label).ok_or_else(|| Error::UnknownUnit(label.clone()))
    }

    pub fn universe(&self) -> Option<&Universe> {
        self.bound_universe.as_ref()
    }

    // ---- build phase -----------------------------------------------------

    pub fn add_unit(&mut self, id: impl Into<UnitId>, kind: UnitKind) -> Result<UnitId> {
        let id = id.into();
        if self.units.contains_key(&id) {
            return Err(Error::DuplicateUnit(id));
        }
        self.units.insert(id.clone(), SymbolicUnit { id: id.clone(), kind });
        Ok(id)
    }

    /// Mints and registers a fresh unit; minted ids use a `#` infix that
    /// declared ids never contain.
    pub(crate) fn mint_unit(&mut self, kind: UnitKind) -> UnitId {
        loop {
            self.minted += 1;
            let id = UnitId::new(format!("{}#{}", kind.mint_prefix(), self.minted));
            if !self.units.contains_key(&id) {
                self.units.insert(id.clone(), SymbolicUnit { id: id.clone(), kind });
                return id;
            }
        }
    }

    fn expect_kind(&self, id: &UnitId, expected: UnitKind) -> Result<()> {
        let unit = self.unit(id)?;
        if unit.kind == expected {
            Ok(())
        } else {
            Err(Error::UnitKindMismatch {
                unit: id.clone(),
                expected: expected.label(),
                actual: unit.kind.label(),
            })
        }
    }

    /// Codes a window-filling patch into memory.
    pub fn store_eaf(&mut self, patch: Patch) -> Result<CodeId> {
        if !fits_window(&patch, &self.window) {
            return Err(Error::IllFitting {
                reason: format!(
                    "patch is {}x{}, window is {}x{}",
                    patch.width(),
                    patch.height(),
                    self.window.width(),
                    self.window.height()
                ),
            });
        }
        Ok(self.memory.store(patch))
    }

    /// Codes a sub-window patch (a decomposition product such as a predicate
    /// template); only the round-trip invariant applies.
    pub(crate) fn store_template(&mut self, patch: &Patch) -> CodeId {
        self.memory.find_or_store(patch)
    }

    pub fn retrieve_eaf(&self, code: CodeId) -> Result<&Patch> {
        self.memory.retrieve(code)
    }

    /// Attaches a stored code to a unit's semantic entry.
    pub fn add_semantic_image(&mut self, unit: &UnitId, code: CodeId) -> Result<()> {
        self.unit(unit)?;
        self.memory.retrieve(code)?;
        self.semantics.entry(unit.clone()).or_default().codes.insert(code);
        Ok(())
    }

    /// Attaches an intensional rule to a unit's semantic entry; re-using a
    /// rule id within one entry replaces the previous rule.
    pub fn add_semantic_rule(&mut self, unit: &UnitId, rule: Rule) -> Result<()> {
        self.unit(unit)?;
        self.semantics
            .entry(unit.clone())
            .or_default()
            .rules
            .insert(rule.id.clone(), rule);
        Ok(())
    }

    /// First-degree abstraction: tags a recurrence. The template must occur
    /// in every witness patch; the new name unit's entry lists the witnesses.
    pub fn name_recurrence(&mut self, patches: &[Patch], template: &Patch) -> Result<UnitId> {
        for (index, patch) in patches.iter().enumerate() {
            if !fits_window(patch, &self.window) {
                return Err(Error::IllFitting {
                    reason: format!("witness patch at index {index} does not fill the window"),
                });
            }
            if template_occurs(template, patch).is_none() {
                return Err(Error::NoRecurrence { index });
            }
        }
        let unit = self.mint_unit(UnitKind::Name);
        for patch in patches {
            let code = self.memory.find_or_store(patch);
            self.semantics.entry(unit.clone()).or_default().codes.insert(code);
        }
        Ok(unit)
    }

    /// Second-degree abstraction: decomposes a situation into a subject
    /// (naming the situation's bearing patch) and a predicate (naming the
    /// template recurrence), yielding an affirmed proposition.
    pub fn predicate(&mut self, situation: &Situation, template: &Patch) -> Result<Proposition> {
        if template_occurs(template, &situation.patch).is_none() {
            return Err(Error::TemplateAbsent);
        }
        let subject = self.mint_unit(UnitKind::Name);
        let subject_code = self.store_template(&situation.patch);
        self.semantics
            .entry(subject.clone())
            .or_default()
            .codes
            .insert(subject_code);

        let predicate = self.mint_unit(UnitKind::Predicate);
        let template_code = self.store_template(template);
        self.semantics
            .entry(predicate.clone())
            .or_default()
            .codes
            .insert(template_code);

        let prop = Proposition::affirmed(subject, predicate);
        self.propositions.push(prop.clone());
        Ok(prop)
    }

    /// Registers a proposition over existing units so the faithfulness
    /// checker can audit it.
    pub fn assert_proposition(&mut self, prop: Proposition) -> Result<()> {
        self.expect_kind(&prop.subject, UnitKind::Name)?;
        self.expect_kind(&prop.predicate, UnitKind::Predicate)?;
        self.propositions.push(prop);
        Ok(())
    }

    /// Third-degree abstraction: opens `term` into a fresh domain-tagged
    /// variable. Substituting the term back reproduces the expression.
    pub fn variabilize(
        &mut self,
        expression: &Expression,
        term: &UnitId,
        domain: BTreeSet<UnitId>,
    ) -> Result<OpenExpression> {
        if !unit_occurs_in_expression(expression, term) {
            return Err(Error::TermAbsent(term.clone()));
        }
        if !domain.contains(term) {
            return Err(Error::TermOutsideDomain { term: term.clone() });
        }
        let variable = self.mint_unit(UnitKind::Variable);
        let body = substitute_in_expression(expression, term, &variable);
        Ok(OpenExpression {
            body,
            variable,
            domain,
        })
    }

    /// Registers a situation: a window-filling patch anchored in a world.
    pub fn add_situation(
        &mut self,
        id: impl Into<SituationId>,
        patch: &Patch,
        anchor: Anchor,
    ) -> Result<SituationId> {
        let id = id.into();
        if self.situations.contains_key(&id) {
            return Err(Error::DuplicateSituation(id));
        }
        let situation = read_situation(patch, &self.window, anchor)?;
        self.situations.insert(id.clone(), situation);
        Ok(id)
    }

    /// Chains two situations. With an alignment the link must ground: the
    /// endpoint patches have to unify conflict-free under it. Without an
    /// alignment the link is artificial.
    pub fn add_link(
        &mut self,
        id: impl Into<LinkId>,
        a: &SituationId,
        b: &SituationId,
        alignment: Option<Offset>,
    ) -> Result<Link> {
        let id = id.into();
        if self.links.contains_key(&id) {
            return Err(Error::DuplicateLink(id));
        }
        let pa = self.situation(a)?.patch.clone();
        let pb = self.situation(b)?.patch.clone();
        let kind = match alignment {
            Some(alignment) => {
                let outcome = unify_patches(&pa, &pb, alignment, self.window.schema())?;
                if !outcome.is_unified() {
                    return Err(Error::NotGroundable {
                        link: id,
                        a: a.clone(),
                        b: b.clone(),
                    });
                }
                LinkKind::Grounded { alignment }
            }
            None => LinkKind::Artificial,
        };
        let link = Link {
            id: id.clone(),
            a: a.clone(),
            b: b.clone(),
            kind,
        };
        self.links.insert(id, link.clone());
        Ok(link)
    }

    /// Organizes situations around a name unit; the unit's semantic entry is
    /// extended with the situations' patches. Re-registration unions the
    /// situation sets, so repeating a registration is a no-op.
    pub fn build_object(
        &mut self,
        unit: &UnitId,
        situations: BTreeSet<SituationId>,
    ) -> Result<ObjectRecord> {
        self.expect_kind(unit, UnitKind::Name)?;
        for sid in &situations {
            self.situation(sid)?;
        }
        let patches: Vec<Patch> = situations
            .iter()
            .map(|sid| self.situations[sid].patch.clone())
            .collect();
        for patch in patches {
            let code = self.memory.find_or_store(&patch);
            self.semantics.entry(unit.clone()).or_default().codes.insert(code);
        }
        let record = self.objects.entry(unit.clone()).or_insert_with(|| ObjectRecord {
            unit: unit.clone(),
            situations: BTreeSet::new(),
        });
        record.situations.extend(situations);
        Ok(record.clone())
    }

    /// Registers a law under a law-label unit.
    pub fn add_law(&mut self, label: &UnitId, law: crate::logic::Law) -> Result<()> {
        self.expect_kind(label, UnitKind::LawLabel)?;
        law.check_shape()?;
        self.laws.insert(label.clone(), law);
        Ok(())
    }

    /// Binds the universe the system is measured against; the schemas must
    /// be identical.
    pub fn bind_universe(&mut self, universe: Universe) -> Result<()> {
        if universe.schema() != self.window.schema() {
            return Err(Error::BoundSchemaMismatch);
        }
        self.bound_universe = Some(universe);
        Ok(())
    }

    // ---- integrity -------------------------------------------------------

    /// Re-checks every structural invariant of the system.
    pub fn validate(&self) -> Result<()> {
        for (code, patch) in self.memory.iter() {
            patch.check_schema(self.window.schema()).map_err(|e| Error::SchemaMismatch {
                reason: format!("stored patch {code}: {e}"),
            })?;
            for token in patch.symbol_tokens() {
                self.unit(&token.unit)?;
            }
        }
        for situation in self.situations.values() {
            if !fits_window(&situation.patch, &self.window) {
                return Err(Error::IllFitting {
                    reason: "registered situation does not fill the window".into(),
                });
            }
            for token in situation.patch.symbol_tokens() {
                self.unit(&token.unit)?;
            }
        }
        for (unit, entry) in &self.semantics {
            self.unit(unit)?;
            for code in entry.codes() {
                self.memory.retrieve(code)?;
            }
        }
        for link in self.links.values() {
            let a = self.situation(&link.a)?;
            let b = self.situation(&link.b)?;
            if let LinkKind::Grounded { alignment } = &link.kind {
                let outcome = unify_patches(&a.patch, &b.patch, *alignment, self.window.schema())?;
                if !outcome.is_unified() {
                    return Err(Error::NotGroundable {
                        link: link.id.clone(),
                        a: link.a.clone(),
                        b: link.b.clone(),
                    });
                }
            }
        }
        for record in self.objects.values() {
            self.expect_kind(&record.unit, UnitKind::Name)?;
            for sid in &record.situations {
                self.situation(sid)?;
            }
        }
        for prop in &self.propositions {
            self.expect_kind(&prop.subject, UnitKind::Name)?;
            self.expect_kind(&prop.predicate, UnitKind::Predicate)?;
        }
        for (label, law) in &self.laws {
            self.expect_kind(label, UnitKind::LawLabel)?;
            law.check_shape()?;
            self.expect_kind(&law.variable, UnitKind::Variable)?;
            for term in &law.domain {
                self.expect_kind(term, UnitKind::Name)?;
            }
        }
        if let Some(universe) = &self.bound_universe {
            if universe.schema() != self.window.schema() {
                return Err(Error::BoundSchemaMismatch);
            }
            for situation in self.situations.values() {
                universe.world(&situation.anchor.world)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::AttributeSchema;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn schema() -> AttributeSchema {
        AttributeSchema::new(
            vec![("terrain", vec!["park", "street", "water"]), ("mark", vec!["on", "off"])],
            4,
        )
        .unwrap()
    }

    fn system() -> RepresentationalSystem {
        RepresentationalSystem::new(WindowSpec::new(3, 3, schema()).unwrap())
    }

    fn full_patch(value: &str) -> Patch {
        let mut p = Patch::new(3, 3);
        for y in 0..3 {
            for x in 0..3 {
                p.set(x, y, "terrain", value);
            }
        }
        p
    }

    #[test]
    fn store_and_retrieve_round_trip() {
        let mut s = system();
        let patch = full_patch("park").with(1, 1, "mark", "on");
        let code = s.store_eaf(patch.clone()).unwrap();
        assert_eq!(s.retrieve_eaf(code).unwrap(), &patch);
    }

    #[test]
    fn distinct_patches_get_distinct_codes() {
        let mut s = system();
        let c1 = s.store_eaf(full_patch("park")).unwrap();
        let c2 = s.store_eaf(full_patch("water")).unwrap();
        assert_ne!(c1, c2);
        assert_eq!((c1, c2), (CodeId(1), CodeId(2)));
    }

    #[test]
    fn ill_fitting_patch_is_rejected() {
        let mut s = system();
        let err = s.store_eaf(Patch::new(2, 2)).unwrap_err();
        assert!(matches!(err, Error::IllFitting { .. }));

        let outside = full_patch("park").with(0, 0, "terrain", "desert");
        let err = s.store_eaf(outside).unwrap_err();
        assert!(matches!(err, Error::IllFitting { .. }));
    }

    #[test]
    fn randomized_store_retrieve_round_trips_byte_equal() {
        // randomized harness: 100 random window patches, all must come back
        // exactly as stored, under the codes they were stored at
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut s = system();
        let mut stored = Vec::new();
        for _ in 0..100 {
            let mut p = Patch::new(3, 3);
            for y in 0..3 {
                for x in 0..3 {
                    if rng.gen_bool(0.5) {
                        let t = ["park", "street", "water"][rng.gen_range(0..3)];
                        p.set(x, y, "terrain", t);
                    }
                    if rng.gen_bool(0.3) {
                        let m = ["on", "off"][rng.gen_range(0..2)];
                        p.set(x, y, "mark", m);
                    }
                }
            }
            let code = s.store_eaf(p.clone()).unwrap();
            stored.push((code, p));
        }
        for (code, patch) in stored {
            assert_eq!(s.retrieve_eaf(code).unwrap(), &patch);
        }
    }

    #[test]
    fn unknown_code_is_an_error() {
        let s = system();
        assert_eq!(s.retrieve_eaf(CodeId(9)).unwrap_err(), Error::UnknownCode(CodeId(9)));
    }

    #[test]
    fn naming_tags_a_recurrence_across_witnesses() {
        let mut s = system();
        // the same 2x2 figure occurs in three otherwise different patches
        let figure = Patch::new(2, 2)
            .with(0, 0, "mark", "on")
            .with(1, 1, "mark", "on");
        let witnesses: Vec<Patch> = (0..3)
            .map(|i| {
                let base = full_patch(["park", "street", "water"][i]);
                base.with(1, 0, "mark", "on").with(2, 1, "mark", "on")
            })
            .collect();
        let unit = s.name_recurrence(&witnesses, &figure).unwrap();
        assert_eq!(s.unit(&unit).unwrap().kind, UnitKind::Name);
        assert_eq!(s.entry(&unit).unwrap().image_count(), 3);
    }

    #[test]
    fn naming_a_singleton_by_its_own_grid() {
        let mut s = system();
        let p = full_patch("park");
        let unit = s.name_recurrence(&[p.clone()], &p).unwrap();
        assert_eq!(s.entry(&unit).unwrap().image_count(), 1);
    }

    #[test]
    fn naming_fails_when_one_witness_lacks_the_template() {
        let mut s = system();
        let figure = Patch::new(1, 1).with(0, 0, "mark", "on");
        let with = full_patch("park").with(0, 0, "mark", "on");
        let without = full_patch("park");
        let err = s.name_recurrence(&[with, without], &figure).unwrap_err();
        assert_eq!(err, Error::NoRecurrence { index: 1 });
    }

    #[test]
    fn predication_decomposes_a_situation() {
        let mut s = system();
        let percept = full_patch("park").with(1, 1, "mark", "on");
        let situation = read_situation(&percept, s.window(), Anchor::new("w", 0, 0)).unwrap();
        let figure = Patch::new(1, 1).with(0, 0, "mark", "on");
        let prop = s.predicate(&situation, &figure).unwrap();
        assert_eq!(prop.polarity, Polarity::Affirmed);
        assert_eq!(s.unit(&prop.subject).unwrap().kind, UnitKind::Name);
        assert_eq!(s.unit(&prop.predicate).unwrap().kind, UnitKind::Predicate);
        // subject names the bearing patch, predicate names the template
        let subject_code = s.entry(&prop.subject).unwrap().codes().next().unwrap();
        assert_eq!(s.retrieve_eaf(subject_code).unwrap(), &situation.patch);
        let template_code = s.entry(&prop.predicate).unwrap().codes().next().unwrap();
        assert_eq!(s.retrieve_eaf(template_code).unwrap(), &figure);
    }

    #[test]
    fn whole_patch_template_predicates_the_whole_situation() {
        let mut s = system();
        let percept = full_patch("water");
        let situation = read_situation(&percept, s.window(), Anchor::new("w", 0, 0)).unwrap();
        let prop = s.predicate(&situation, &percept).unwrap();
        assert!(s.entry(&prop.predicate).is_some());
    }

    #[test]
    fn predication_fails_without_the_template() {
        let mut s = system();
        let situation =
            read_situation(&full_patch("park"), s.window(), Anchor::new("w", 0, 0)).unwrap();
        let figure = Patch::new(1, 1).with(0, 0, "mark", "on");
        assert_eq!(s.predicate(&situation, &figure).unwrap_err(), Error::TemplateAbsent);
    }

    #[test]
    fn grounded_link_requires_consistent_overlap() {
        let mut s = system();
        // two park strips over the same world, shifted by one column
        let left = full_patch("park");
        let right = full_patch("park");
        s.add_situation("a", &left, Anchor::new("w", 0, 0)).unwrap();
        s.add_situation("b", &right, Anchor::new("w", 1, 0)).unwrap();
        let link = s
            .add_link("l1", &SituationId::new("a"), &SituationId::new("b"), Some(Offset::new(1, 0)))
            .unwrap();
        assert!(link.is_grounded());
    }

    #[test]
    fn artificial_link_needs_no_grounding() {
        let mut s = system();
        s.add_situation("a", &full_patch("park"), Anchor::new("w", 0, 0)).unwrap();
        s.add_situation("b", &full_patch("water"), Anchor::new("w", 0, 0)).unwrap();
        let link = s
            .add_link("l1", &SituationId::new("a"), &SituationId::new("b"), None)
            .unwrap();
        assert_eq!(link.kind, LinkKind::Artificial);
    }

    #[test]
    fn conflicting_overlap_is_not_groundable() {
        let mut s = system();
        s.add_situation("a", &full_patch("park"), Anchor::new("w", 0, 0)).unwrap();
        s.add_situation("b", &full_patch("water"), Anchor::new("w", 0, 0)).unwrap();
        let err = s
            .add_link("l1", &SituationId::new("a"), &SituationId::new("b"), Some(Offset::default()))
            .unwrap_err();
        assert!(matches!(err, Error::NotGroundable { .. }));
    }

    #[test]
    fn object_registration_extends_the_entry_and_is_idempotent() {
        let mut s = system();
        s.add_unit("CITY", UnitKind::Name).unwrap();
        s.add_situation("a", &full_patch("park"), Anchor::new("w", 0, 0)).unwrap();
        s.add_situation("b", &full_patch("street"), Anchor::new("w", 3, 0)).unwrap();
        let set: BTreeSet<SituationId> = ["a", "b"].into_iter().map(SituationId::new).collect();
        let unit = UnitId::new("CITY");
        let first = s.build_object(&unit, set.clone()).unwrap();
        assert_eq!(first.situations.len(), 2);
        assert_eq!(s.entry(&unit).unwrap().image_count(), 2);
        let second = s.build_object(&unit, set).unwrap();
        assert_eq!(first, second);
        assert_eq!(s.entry(&unit).unwrap().image_count(), 2);
    }

    #[test]
    fn empty_object_is_valid() {
        let mut s = system();
        s.add_unit("CITY", UnitKind::Name).unwrap();
        let record = s.build_object(&UnitId::new("CITY"), BTreeSet::new()).unwrap();
        assert!(record.situations.is_empty());
    }

    #[test]
    fn semantic_entries_never_alias() {
        let mut s = system();
        s.add_unit("A", UnitKind::Name).unwrap();
        s.add_unit("B", UnitKind::Name).unwrap();
        let code = s.store_eaf(full_patch("park")).unwrap();
        s.add_semantic_image(&UnitId::new("A"), code).unwrap();
        s.add_semantic_image(&UnitId::new("B"), code).unwrap();
        let snapshot_b = s.entry(&UnitId::new("B")).unwrap().clone();
        // mutate A's entry and observe B's is untouched
        let other = s.store_eaf(full_patch("water")).unwrap();
        s.add_semantic_image(&UnitId::new("A"), other).unwrap();
        assert_eq!(s.entry(&UnitId::new("B")).unwrap(), &snapshot_b);
        assert_eq!(s.entry(&UnitId::new("A")).unwrap().image_count(), 2);
    }

    #[test]
    fn validation_catches_dangling_token_units() {
        let mut s = system();
        let patch = full_patch("park").with_token(0, 0, "GHOST");
        s.store_eaf(patch).unwrap();
        assert_eq!(s.validate().unwrap_err(), Error::UnknownUnit(UnitId::new("GHOST")));
    }

    #[test]
    fn circle_rule_marks_exactly_the_crossed_cells() {
        // independent oracle: a cell is crossed iff its corner distances
        // straddle the radius (corner-sign route, distinct from the
        // box-range route used by the rule)
        let rule = Rule::new(
            "r1",
            RuleBody::Circle {
                size: 16,
                attribute: "mark".into(),
                on: "on".into(),
                off: "off".into(),
            },
        );
        let patch = rule.evaluate(Rect::new(0, 0, 16, 16));
        let mut on_cells = 0;
        for y in 0..16i64 {
            for x in 0..16i64 {
                let corners = [
                    (2 * x - 16, 2 * y - 16),
                    (2 * x - 14, 2 * y - 16),
                    (2 * x - 16, 2 * y - 14),
                    (2 * x - 14, 2 * y - 14),
                ];
                let d2: Vec<i64> = corners.iter().map(|(cx, cy)| cx * cx + cy * cy).collect();
                let r2 = 256;
                let crossed = d2.iter().any(|&d| d <= r2) && d2.iter().any(|&d| d >= r2);
                let value = patch.cell(x as i32, y as i32).unwrap().content["mark"].as_str();
                assert_eq!(value == "on", crossed, "cell ({x},{y})");
                if crossed {
                    on_cells += 1;
                }
            }
        }
        assert_eq!(on_cells, 60);
    }

    #[test]
    fn fill_rule_covers_the_request_uniformly() {
        let mut content = CellContent::new();
        content.insert("terrain".into(), "park".into());
        let rule = Rule::new("r1", RuleBody::Fill { content });
        let patch = rule.evaluate(Rect::new(5, 5, 2, 3));
        for y in 0..3 {
            for x in 0..2 {
                assert_eq!(patch.cell(x, y).unwrap().content["terrain"], "park");
            }
        }
    }

    #[test]
    fn minted_units_skip_taken_ids() {
        let mut s = system();
        // squat on the id the first mint would otherwise produce
        s.add_unit("n#1", UnitKind::Name).unwrap();
        let a = s.mint_unit(UnitKind::Name);
        assert_ne!(a, UnitId::new("n#1"));
        assert!(s.contains_unit(&a));
    }
}
