//! The analogical layer: the window of presence, window-sized patches,
//! embedded symbol tokens, and analogical unification of displays.
//!
//! A patch is a dense `width x height` grid of cells. Each cell carries a
//! partial attribute assignment and optionally one symbol token. Unification
//! co-displays two patches under an alignment: cells merge where they agree
//! or where at most one side is determinate, and every clash is reported.
//! Cells that belong to different worlds never clash; the frontier between
//! worlds is what disjunctive alternatives stand behind.

use crate::error::{Error, Result};
use crate::geom::{Coord, Offset, Rect};
use crate::universe::{AttributeSchema, CellContent, WorldId};
use crate::web::UnitId;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// The maximal immediate-display capacity of a system: a fixed 2-d grid
/// size over a fixed schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowSpec {
    width: u32,
    height: u32,
    schema: AttributeSchema,
}

impl WindowSpec {
    /// Window grids are always two-dimensional.
    pub const DIMENSIONS: u32 = 2;

    pub fn new(width: u32, height: u32, schema: AttributeSchema) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::IllFitting {
                reason: format!("window must be at least 1x1, got {width}x{height}"),
            });
        }
        Ok(Self {
            width,
            height,
            schema,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn rect(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }
}

/// A symbol token embedded at a cell of a patch.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SymbolToken {
    pub unit: UnitId,
    pub position: Coord,
}

/// Where a patch sits in a world: the world id plus the world coordinates of
/// the patch's top-left cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Anchor {
    pub world: WorldId,
    pub offset: Offset,
}

impl Anchor {
    pub fn new(world: impl Into<WorldId>, dx: i32, dy: i32) -> Self {
        Self {
            world: world.into(),
            offset: Offset::new(dx, dy),
        }
    }
}

/// One cell of a patch or display.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub content: CellContent,
    pub token: Option<UnitId>,
}

impl Cell {
    pub fn is_empty(&self) -> bool {
        self.content.is_empty() && self.token.is_none()
    }
}

/// An elementary analogical fragment: a dense grid of cells, optionally
/// anchored to a world location.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Patch {
    width: u32,
    height: u32,
    cells: Vec<Cell>,
    anchor: Option<Anchor>,
}

impl Patch {
    pub fn new(width: u32, height: u32) -> Self {
        let len = (width as usize) * (height as usize);
        Self {
            width,
            height,
            cells: vec![Cell::default(); len],
            anchor: None,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn rect(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    pub fn anchor(&self) -> Option<&Anchor> {
        self.anchor.as_ref()
    }

    pub fn with_anchor(mut self, anchor: Anchor) -> Self {
        self.anchor = Some(anchor);
        self
    }

    pub fn clear_anchor(mut self) -> Self {
        self.anchor = None;
        self
    }

    fn index(&self, x: i32, y: i32) -> Option<usize> {
        if x < 0 || y < 0 || x >= self.width as i32 || y >= self.height as i32 {
            None
        } else {
            Some(y as usize * self.width as usize + x as usize)
        }
    }

    pub fn cell(&self, x: i32, y: i32) -> Option<&Cell> {
        self.index(x, y).map(|i| &self.cells[i])
    }

    /// Assigns `attribute = value` at `(x, y)`; out-of-range coordinates are
    /// rejected at fit checking, not here.
    pub fn set(&mut self, x: i32, y: i32, attribute: &str, value: &str) -> &mut Self {
        if let Some(i) = self.index(x, y) {
            self.cells[i].content.insert(attribute.to_string(), value.to_string());
        }
        self
    }

    pub fn set_token(&mut self, x: i32, y: i32, unit: impl Into<UnitId>) -> &mut Self {
        if let Some(i) = self.index(x, y) {
            self.cells[i].token = Some(unit.into());
        }
        self
    }

    /// Builder-style variants of `set` / `set_token`.
    pub fn with(mut self, x: i32, y: i32, attribute: &str, value: &str) -> Self {
        self.set(x, y, attribute, value);
        self
    }

    pub fn with_token(mut self, x: i32, y: i32, unit: impl Into<UnitId>) -> Self {
        self.set_token(x, y, unit);
        self
    }

    /// Cells with content or token, in row-major order, with their local
    /// coordinates.
    pub fn occupied_cells(&self) -> impl Iterator<Item = (Coord, &Cell)> {
        let w = self.width as i32;
        self.cells.iter().enumerate().filter_map(move |(i, cell)| {
            if cell.is_empty() {
                None
            } else {
                Some((Coord::new(i as i32 % w, i as i32 / w), cell))
            }
        })
    }

    /// All tokens of the patch in row-major order.
    pub fn symbol_tokens(&self) -> Vec<SymbolToken> {
        let w = self.width as i32;
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, cell)| {
                cell.token.as_ref().map(|unit| SymbolToken {
                    unit: unit.clone(),
                    position: Coord::new(i as i32 % w, i as i32 / w),
                })
            })
            .collect()
    }

    pub fn is_token_free(&self) -> bool {
        self.cells.iter().all(|c| c.token.is_none())
    }

    /// Checks every assignment against a schema.
    pub fn check_schema(&self, schema: &AttributeSchema) -> Result<()> {
        for cell in &self.cells {
            schema.check_content(&cell.content)?;
        }
        Ok(())
    }
}

/// True iff the patch exactly fills the window and respects its schema.
/// Total: never errors.
pub fn fits_window(patch: &Patch, spec: &WindowSpec) -> bool {
    patch.width == spec.width && patch.height == spec.height && patch.check_schema(&spec.schema).is_ok()
}

/// First offset (row-major scan) at which `template` occurs in `host`.
///
/// Occurrence is identity of determinate content: every assignment and token
/// of the template must be present verbatim in the corresponding host cell;
/// host cells may carry extra content.
pub fn template_occurs(template: &Patch, host: &Patch) -> Option<Offset> {
    template_occurrences(template, host).into_iter().next()
}

/// Every offset (in row-major order) at which `template` occurs in `host`.
pub fn template_occurrences(template: &Patch, host: &Patch) -> Vec<Offset> {
    let mut found = Vec::new();
    if template.width > host.width || template.height > host.height {
        return found;
    }
    for oy in 0..=(host.height - template.height) as i32 {
        for ox in 0..=(host.width - template.width) as i32 {
            let matches = template.occupied_cells().all(|(c, cell)| {
                let Some(target) = host.cell(c.x + ox, c.y + oy) else {
                    return false;
                };
                cell.content
                    .iter()
                    .all(|(a, v)| target.content.get(a) == Some(v))
                    && cell.token.as_ref().map_or(true, |t| target.token.as_ref() == Some(t))
            });
            if matches {
                found.push(Offset::new(ox, oy));
            }
        }
    }
    found
}

/// Re-displays a ground fragment as a patch in region-local coordinates,
/// anchored back at the fragment's origin.
pub fn patch_from_fragment(fragment: &crate::universe::GroundFragment) -> Patch {
    let mut patch = Patch::new(fragment.region.width, fragment.region.height);
    for (coord, content) in &fragment.values {
        for (attribute, value) in content {
            patch.set(coord.x - fragment.region.x, coord.y - fragment.region.y, attribute, value);
        }
    }
    patch.with_anchor(Anchor::new(
        fragment.world.clone(),
        fragment.region.x,
        fragment.region.y,
    ))
}

/// An elementary analogical fragment considered qua content: a patch plus a
/// mandatory world anchor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Situation {
    pub patch: Patch,
    pub anchor: Anchor,
}

/// Wraps a fitting patch with an anchor; the anchor is also stamped onto the
/// patch so the patch carries its world wherever it is stored or unified.
pub fn read_situation(patch: &Patch, spec: &WindowSpec, anchor: Anchor) -> Result<Situation> {
    if !fits_window(patch, spec) {
        return Err(Error::IllFitting {
            reason: format!(
                "patch is {}x{}, window is {}x{}",
                patch.width,
                patch.height,
                spec.width(),
                spec.height()
            ),
        });
    }
    Ok(Situation {
        patch: patch.clone().with_anchor(anchor.clone()),
        anchor,
    })
}

/// Branch tag of a display: either a world of the universe, a synthesized
/// alternative world, or the local frame of an unanchored display.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum WorldTag {
    World(WorldId),
    Alt(u32),
    Local,
}

impl fmt::Display for WorldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorldTag::World(id) => write!(f, "{id}"),
            WorldTag::Alt(n) => write!(f, "alt:{n}"),
            WorldTag::Local => f.write_str("local"),
        }
    }
}

/// A unified display: sparse branch-tagged cells, possibly wider than the
/// window. Within a branch every cell has a single merged value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Display {
    branches: BTreeMap<WorldTag, BTreeMap<Coord, Cell>>,
}

impl Display {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a display from branch-tagged cells, dropping empty cells and
    /// empty branches.
    pub fn from_branches(branches: BTreeMap<WorldTag, BTreeMap<Coord, Cell>>) -> Self {
        let branches = branches
            .into_iter()
            .map(|(tag, mut cells)| {
                cells.retain(|_, c| !c.is_empty());
                (tag, cells)
            })
            .filter(|(_, cells)| !cells.is_empty())
            .collect();
        Self { branches }
    }

    /// The same display with every coordinate shifted by `offset`.
    pub fn translated(&self, offset: Offset) -> Self {
        let branches = self
            .branches
            .iter()
            .map(|(tag, cells)| {
                let moved = cells.iter().map(|(c, cell)| (c.shifted(offset), cell.clone())).collect();
                (tag.clone(), moved)
            })
            .collect();
        Self { branches }
    }

    /// Lays a patch into an empty display; the branch tag comes from the
    /// patch anchor (`Local` when unanchored), coordinates stay patch-local.
    pub fn from_patch(patch: &Patch) -> Self {
        let tag = patch
            .anchor
            .as_ref()
            .map(|a| WorldTag::World(a.world.clone()))
            .unwrap_or(WorldTag::Local);
        let mut display = Display::new();
        for (coord, cell) in patch.occupied_cells() {
            display.branches.entry(tag.clone()).or_default().insert(coord, cell.clone());
        }
        // an all-empty patch still owns its branch
        display.branches.entry(tag).or_default();
        display
    }

    pub fn branches(&self) -> impl Iterator<Item = (&WorldTag, &BTreeMap<Coord, Cell>)> {
        self.branches.iter()
    }

    pub fn branch(&self, tag: &WorldTag) -> Option<&BTreeMap<Coord, Cell>> {
        self.branches.get(tag)
    }

    pub fn cell(&self, tag: &WorldTag, coord: Coord) -> Option<&Cell> {
        self.branches.get(tag).and_then(|b| b.get(&coord))
    }

    /// All tokens, branch by branch, row-major within a branch.
    pub fn symbol_tokens(&self) -> Vec<(WorldTag, SymbolToken)> {
        let mut out = Vec::new();
        for (tag, cells) in &self.branches {
            for (coord, cell) in cells {
                if let Some(unit) = &cell.token {
                    out.push((
                        tag.clone(),
                        SymbolToken {
                            unit: unit.clone(),
                            position: *coord,
                        },
                    ));
                }
            }
        }
        out
    }

    pub fn is_token_free(&self) -> bool {
        self.branches.values().all(|b| b.values().all(|c| c.token.is_none()))
    }

    /// Merges `patch` into this display at `offset` under `tag`, collecting
    /// clashes instead of merging where both sides are determinate and
    /// disagree.
    pub(crate) fn merge_patch(
        &mut self,
        tag: &WorldTag,
        patch: &Patch,
        offset: Offset,
        conflicts: &mut Vec<ConflictCell>,
    ) {
        let branch = self.branches.entry(tag.clone()).or_default();
        for (local, cell) in patch.occupied_cells() {
            let coord = local.shifted(offset);
            let target = branch.entry(coord).or_default();
            for (attribute, value) in &cell.content {
                match target.content.get(attribute) {
                    Some(existing) if existing != value => conflicts.push(ConflictCell {
                        world: tag.clone(),
                        coord,
                        left: CellValue::Attr {
                            attribute: attribute.clone(),
                            value: existing.clone(),
                        },
                        right: CellValue::Attr {
                            attribute: attribute.clone(),
                            value: value.clone(),
                        },
                    }),
                    _ => {
                        target.content.insert(attribute.clone(), value.clone());
                    }
                }
            }
            if let Some(unit) = &cell.token {
                match &target.token {
                    Some(existing) if existing != unit => conflicts.push(ConflictCell {
                        world: tag.clone(),
                        coord,
                        left: CellValue::Token(existing.clone()),
                        right: CellValue::Token(unit.clone()),
                    }),
                    _ => target.token = Some(unit.clone()),
                }
            }
        }
        branch.retain(|_, cell| !cell.is_empty());
    }
}

/// One determinate value taking part in a clash.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CellValue {
    Attr { attribute: String, value: String },
    Token(UnitId),
}

impl fmt::Display for CellValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellValue::Attr { attribute, value } => write!(f, "{attribute}={value}"),
            CellValue::Token(unit) => write!(f, "token={unit}"),
        }
    }
}

/// A clash at one cell: two distinct determinate values under the same
/// world tag.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ConflictCell {
    pub world: WorldTag,
    pub coord: Coord,
    pub left: CellValue,
    pub right: CellValue,
}

/// Every clash found while trying to unify two displays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictReport {
    pub cells: Vec<ConflictCell>,
    pub worlds: BTreeSet<WorldTag>,
}

impl ConflictReport {
    pub(crate) fn from_cells(cells: Vec<ConflictCell>) -> Self {
        let worlds = cells.iter().map(|c| c.world.clone()).collect();
        Self { cells, worlds }
    }
}

/// Result of an attempted unification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum UnifyOutcome {
    Unified(Display),
    Conflict(ConflictReport),
}

impl UnifyOutcome {
    pub fn unified(self) -> Option<Display> {
        match self {
            UnifyOutcome::Unified(d) => Some(d),
            UnifyOutcome::Conflict(_) => None,
        }
    }

    pub fn is_unified(&self) -> bool {
        matches!(self, UnifyOutcome::Unified(_))
    }
}

/// Virtually co-displays two patches, `right` laid at `alignment` relative
/// to `left`. Anchors decide branch tags: patches anchored to different
/// worlds never clash. Errors only on schema violations.
pub fn unify_patches(
    left: &Patch,
    right: &Patch,
    alignment: Offset,
    schema: &AttributeSchema,
) -> Result<UnifyOutcome> {
    for (side, patch) in [("left", left), ("right", right)] {
        patch.check_schema(schema).map_err(|e| Error::SchemaMismatch {
            reason: format!("{side} patch: {e}"),
        })?;
    }
    let right_tag = right
        .anchor
        .as_ref()
        .map(|a| WorldTag::World(a.world.clone()))
        .unwrap_or(WorldTag::Local);
    let mut display = Display::from_patch(left);
    let mut conflicts = Vec::new();
    display.merge_patch(&right_tag, right, alignment, &mut conflicts);
    if conflicts.is_empty() {
        Ok(UnifyOutcome::Unified(display))
    } else {
        conflicts.sort();
        conflicts.dedup();
        Ok(UnifyOutcome::Conflict(ConflictReport::from_cells(conflicts)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::AttributeSchema;

    fn schema() -> AttributeSchema {
        AttributeSchema::new(vec![("color", vec!["red", "blue"]), ("ink", vec!["on", "off"])], 8).unwrap()
    }

    fn spec() -> WindowSpec {
        WindowSpec::new(4, 4, schema()).unwrap()
    }

    #[test]
    fn fits_window_identity_case() {
        let p = Patch::new(4, 4).with(0, 0, "color", "red");
        assert!(fits_window(&p, &spec()));
    }

    #[test]
    fn fits_window_size_mismatch() {
        let p = Patch::new(4, 4);
        let big = WindowSpec::new(8, 8, schema()).unwrap();
        assert!(!fits_window(&p, &big));
    }

    #[test]
    fn fits_window_schema_violation() {
        let p = Patch::new(4, 4).with(0, 0, "color", "green");
        assert!(!fits_window(&p, &spec()));
    }

    #[test]
    fn unify_self_at_zero_is_identity() {
        let p = Patch::new(2, 2)
            .with(0, 0, "color", "red")
            .with(1, 1, "ink", "on")
            .with_token(1, 0, "L");
        let out = unify_patches(&p, &p, Offset::default(), &schema()).unwrap();
        assert_eq!(out.unified().unwrap(), Display::from_patch(&p));
    }

    #[test]
    fn same_world_clash_is_reported() {
        // one cell coded red on the left, blue on the right, same world
        let anchor = Anchor::new("jane", 0, 0);
        let red = Patch::new(2, 2).with(0, 0, "color", "red").with_anchor(anchor.clone());
        let blue = Patch::new(2, 2).with(0, 0, "color", "blue").with_anchor(anchor);
        let out = unify_patches(&red, &blue, Offset::default(), &schema()).unwrap();
        match out {
            UnifyOutcome::Conflict(report) => {
                assert_eq!(report.cells.len(), 1);
                let cell = &report.cells[0];
                assert_eq!(cell.coord, Coord::new(0, 0));
                assert_eq!(cell.world, WorldTag::World(WorldId::new("jane")));
            }
            UnifyOutcome::Unified(_) => panic!("expected a conflict"),
        }
    }

    #[test]
    fn different_worlds_never_clash() {
        let red = Patch::new(2, 2).with(0, 0, "color", "red").with_anchor(Anchor::new("w1", 0, 0));
        let blue = Patch::new(2, 2).with(0, 0, "color", "blue").with_anchor(Anchor::new("w2", 0, 0));
        let out = unify_patches(&red, &blue, Offset::default(), &schema()).unwrap();
        let display = out.unified().expect("frontier keeps alternatives apart");
        assert_eq!(display.branches().count(), 2);
    }

    #[test]
    fn half_overlap_matches_cellwise_merge_oracle() {
        // left covers x in [0,2), right x in [1,3); overlap column agrees
        let left = Patch::new(2, 1).with(0, 0, "color", "red").with(1, 0, "color", "blue");
        let right = Patch::new(2, 1).with(0, 0, "color", "blue").with(1, 0, "color", "red");
        let out = unify_patches(&left, &right, Offset::new(1, 0), &schema()).unwrap();
        let display = out.unified().unwrap();

        // oracle: brute-force cell-wise merge over the union footprint
        let mut oracle: BTreeMap<Coord, CellContent> = BTreeMap::new();
        for (patch, off) in [(&left, 0), (&right, 1)] {
            for (c, cell) in patch.occupied_cells() {
                oracle
                    .entry(Coord::new(c.x + off, c.y))
                    .or_default()
                    .extend(cell.content.clone());
            }
        }
        let branch = display.branch(&WorldTag::Local).unwrap();
        assert_eq!(branch.len(), oracle.len());
        for (coord, content) in oracle {
            assert_eq!(branch.get(&coord).unwrap().content, content);
        }
    }

    #[test]
    fn disjoint_alignment_has_empty_overlap() {
        let left = Patch::new(2, 2).with(0, 0, "color", "red");
        let right = Patch::new(2, 2).with(0, 0, "color", "blue");
        let out = unify_patches(&left, &right, Offset::new(10, 0), &schema()).unwrap();
        let display = out.unified().unwrap();
        let branch = display.branch(&WorldTag::Local).unwrap();
        assert_eq!(branch.get(&Coord::new(0, 0)).unwrap().content["color"], "red");
        assert_eq!(branch.get(&Coord::new(10, 0)).unwrap().content["color"], "blue");
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let bad = Patch::new(2, 2).with(0, 0, "shade", "dark");
        let ok = Patch::new(2, 2);
        let err = unify_patches(&ok, &bad, Offset::default(), &schema()).unwrap_err();
        assert!(matches!(err, Error::SchemaMismatch { .. }));
    }

    #[test]
    fn token_listing_is_row_major_full_scan() {
        let p = Patch::new(3, 3)
            .with_token(2, 0, "C")
            .with_token(0, 1, "A")
            .with_token(1, 1, "B");
        let tokens = p.symbol_tokens();
        // oracle: naive full scan in reading order
        let mut oracle = Vec::new();
        for y in 0..3 {
            for x in 0..3 {
                if let Some(unit) = p.cell(x, y).and_then(|c| c.token.clone()) {
                    oracle.push(SymbolToken {
                        unit,
                        position: Coord::new(x, y),
                    });
                }
            }
        }
        assert_eq!(tokens, oracle);
        assert_eq!(tokens.len(), 3);
    }

    #[test]
    fn token_free_patch_has_no_tokens() {
        assert!(Patch::new(2, 2).with(0, 0, "ink", "on").symbol_tokens().is_empty());
    }

    #[test]
    fn read_situation_wraps_fitting_patch() {
        let p = Patch::new(4, 4).with(1, 1, "ink", "on");
        let s = read_situation(&p, &spec(), Anchor::new("w", 2, 0)).unwrap();
        assert_eq!(s.patch, p.with_anchor(Anchor::new("w", 2, 0)));
        assert_eq!(s.anchor.world, WorldId::new("w"));
    }

    #[test]
    fn read_situation_rejects_ill_fitting_patch() {
        let p = Patch::new(2, 2);
        let err = read_situation(&p, &spec(), Anchor::new("w", 0, 0)).unwrap_err();
        assert!(matches!(err, Error::IllFitting { .. }));
    }

    #[test]
    fn template_occurrence_scans_row_major() {
        // the 1x1 "ink on" template occurs at (1,0) and (0,1); the scan
        // must report the reading-order first
        let host = Patch::new(3, 3).with(1, 0, "ink", "on").with(0, 1, "ink", "on");
        let template = Patch::new(1, 1).with(0, 0, "ink", "on");
        assert_eq!(template_occurs(&template, &host), Some(Offset::new(1, 0)));
    }

    #[test]
    fn template_allows_richer_host_cells() {
        let host = Patch::new(2, 2).with(1, 1, "ink", "on").with(1, 1, "color", "red");
        let template = Patch::new(1, 1).with(0, 0, "ink", "on");
        assert_eq!(template_occurs(&template, &host), Some(Offset::new(1, 1)));
    }

    #[test]
    fn template_absent_or_oversized_yields_none() {
        let host = Patch::new(2, 2).with(0, 0, "ink", "off");
        let absent = Patch::new(1, 1).with(0, 0, "ink", "on");
        assert_eq!(template_occurs(&absent, &host), None);
        let oversized = Patch::new(3, 3);
        assert_eq!(template_occurs(&oversized, &host), None);
    }

    #[test]
    fn fragment_round_trips_through_patch() {
        let schema = AttributeSchema::new(vec![("ink", vec!["on", "off"])], 2).unwrap();
        let mut w = crate::universe::World::new("w", 3, 2);
        w.set(1, 0, "ink", "on").set(2, 1, "ink", "off");
        let u = crate::universe::Universe::build(schema, vec![w]).unwrap();
        let frag = u
            .ground_fragment(&WorldId::new("w"), crate::geom::Rect::new(1, 0, 2, 2))
            .unwrap();
        let patch = patch_from_fragment(&frag);
        assert_eq!(patch.cell(0, 0).unwrap().content["ink"], "on");
        assert_eq!(patch.cell(1, 1).unwrap().content["ink"], "off");
        assert_eq!(patch.anchor().unwrap(), &Anchor::new("w", 1, 0));
    }

    #[test]
    fn unified_tokens_are_union_of_inputs() {
        let left = Patch::new(2, 1).with_token(0, 0, "A");
        let right = Patch::new(2, 1).with_token(1, 0, "B");
        let out = unify_patches(&left, &right, Offset::new(2, 0), &schema()).unwrap();
        let display = out.unified().unwrap();
        let units: Vec<_> = display.symbol_tokens().into_iter().map(|(_, t)| t.unit.0).collect();
        assert_eq!(units, vec!["A".to_string(), "B".to_string()]);
    }
}
