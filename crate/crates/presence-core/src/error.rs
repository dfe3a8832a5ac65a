//! Crate-wide error type.

use crate::geom::{Coord, Extent, Rect};
use crate::universe::WorldId;
use crate::web::{CodeId, LinkId, SituationId, UnitId};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // universe construction
    #[error("duplicate world id `{0}`")]
    DuplicateWorld(WorldId),
    #[error("missing reference: universe has no worlds")]
    MissingReference,
    #[error("unknown world id `{0}`")]
    UnknownWorld(WorldId),
    #[error("duplicate attribute `{0}` in schema")]
    DuplicateAttribute(String),
    #[error("attribute `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("attribute `{attribute}` has {levels} levels, more than the resolution {resolution}")]
    DomainExceedsResolution {
        attribute: String,
        levels: usize,
        resolution: usize,
    },
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("value `{value}` is outside the domain of attribute `{attribute}`")]
    ValueOutsideDomain { attribute: String, value: String },
    #[error("coordinate {coord} lies outside extent {extent}")]
    CoordOutOfBounds { coord: Coord, extent: Extent },
    #[error("region {region} lies outside extent {extent}")]
    RegionOutOfBounds { region: Rect, extent: Extent },

    // presence
    #[error("patch does not fit the window: {reason}")]
    IllFitting { reason: String },
    #[error("schema mismatch: {reason}")]
    SchemaMismatch { reason: String },

    // web
    #[error("duplicate unit id `{0}`")]
    DuplicateUnit(UnitId),
    #[error("unknown unit id `{0}`")]
    UnknownUnit(UnitId),
    #[error("unit `{unit}` has kind {actual}, expected {expected}")]
    UnitKindMismatch {
        unit: UnitId,
        expected: &'static str,
        actual: &'static str,
    },
    #[error("unknown memory code `{0}`")]
    UnknownCode(CodeId),
    #[error("duplicate situation id `{0}`")]
    DuplicateSituation(SituationId),
    #[error("unknown situation id `{0}`")]
    UnknownSituation(SituationId),
    #[error("duplicate link id `{0}`")]
    DuplicateLink(LinkId),
    #[error("unknown link id `{0}`")]
    UnknownLink(LinkId),
    #[error("link `{link}` is not groundable: situations `{a}` and `{b}` conflict under the given alignment")]
    NotGroundable {
        link: LinkId,
        a: SituationId,
        b: SituationId,
    },
    #[error("no recurrence: template does not occur in the witness patch at index {index}")]
    NoRecurrence { index: usize },
    #[error("template does not occur in the target patch")]
    TemplateAbsent,
    #[error("term `{0}` does not occur in the expression")]
    TermAbsent(UnitId),
    #[error("term `{term}` is outside the declared domain")]
    TermOutsideDomain { term: UnitId },

    // extension
    #[error("unit `{0}` has no content")]
    NoContent(UnitId),
    #[error("unit `{0}` has an intensional entry: a region request is required")]
    RegionRequired(UnitId),
    #[error("token for unit `{unit}` does not occur in the displayed patch")]
    TokenAbsent { unit: UnitId },
    #[error("ids belong to different systems or are unknown: {reason}")]
    ForeignIds { reason: String },

    // logic
    #[error("formula syntax error: {0}")]
    FormulaSyntax(String),
    #[error("valuation is missing variable `{0}`")]
    MissingVariable(String),
    #[error("disjunction requires at least one alternative")]
    EmptyDisjunction,
    #[error("scenario endpoints do not bear the implication contents: {reason}")]
    MismatchedScenario { reason: String },
    #[error("cannot evaluate a non-propositional leaf under a valuation")]
    NonPropositionalLeaf,
    #[error("system and universe use different schemas")]
    BoundSchemaMismatch,
}
