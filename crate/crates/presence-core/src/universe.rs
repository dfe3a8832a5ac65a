//! Ground truth: attribute schemas, worlds, and universes.
//!
//! A universe is the model the representational machinery is measured
//! against. Worlds are finite 2-d grids whose cells carry partial attribute
//! assignments over quantized finite domains; unassigned cells are a
//! first-class indeterminate state, distinct from every domain value.

use crate::error::{Error, Result};
use crate::geom::{Coord, Extent, Rect};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Identifier of a world within a universe.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WorldId(pub String);

impl WorldId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for WorldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for WorldId {
    fn from(s: &str) -> Self {
        WorldId::new(s)
    }
}

/// A partial assignment of attribute values to one cell.
pub type CellContent = BTreeMap<String, String>;

/// One named attribute with its ordered, finite value domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attribute {
    pub name: String,
    pub domain: Vec<String>,
}

/// The value vocabulary of a universe: named attributes with quantized
/// domains, capped by a shared resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttributeSchema {
    attributes: Vec<Attribute>,
    resolution: usize,
}

impl AttributeSchema {
    pub fn new(attributes: Vec<(&str, Vec<&str>)>, resolution: usize) -> Result<Self> {
        let attributes = attributes
            .into_iter()
            .map(|(name, domain)| Attribute {
                name: name.to_string(),
                domain: domain.into_iter().map(str::to_string).collect(),
            })
            .collect();
        Self::from_attributes(attributes, resolution)
    }

    pub fn from_attributes(attributes: Vec<Attribute>, resolution: usize) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for attr in &attributes {
            if !seen.insert(attr.name.clone()) {
                return Err(Error::DuplicateAttribute(attr.name.clone()));
            }
            if attr.domain.is_empty() {
                return Err(Error::EmptyDomain(attr.name.clone()));
            }
            if attr.domain.len() > resolution {
                return Err(Error::DomainExceedsResolution {
                    attribute: attr.name.clone(),
                    levels: attr.domain.len(),
                    resolution,
                });
            }
        }
        Ok(Self {
            attributes,
            resolution,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    /// Checks a single attribute/value pair against the schema.
    pub fn check_value(&self, attribute: &str, value: &str) -> Result<()> {
        let attr = self
            .attribute(attribute)
            .ok_or_else(|| Error::UnknownAttribute(attribute.to_string()))?;
        if attr.domain.iter().any(|v| v == value) {
            Ok(())
        } else {
            Err(Error::ValueOutsideDomain {
                attribute: attribute.to_string(),
                value: value.to_string(),
            })
        }
    }

    /// Checks every pair of a cell assignment.
    pub fn check_content(&self, content: &CellContent) -> Result<()> {
        for (attribute, value) in content {
            self.check_value(attribute, value)?;
        }
        Ok(())
    }
}

/// One grid world: a finite extent with partial cell assignments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct World {
    id: WorldId,
    extent: Extent,
    cells: BTreeMap<Coord, CellContent>,
}

impl World {
    pub fn new(id: impl Into<WorldId>, width: u32, height: u32) -> Self {
        Self {
            id: id.into(),
            extent: Extent::new(width, height),
            cells: BTreeMap::new(),
        }
    }

    pub fn id(&self) -> &WorldId {
        &self.id
    }

    pub fn extent(&self) -> Extent {
        self.extent
    }

    /// Assigns `attribute = value` at `(x, y)`. Later assignments to the same
    /// attribute overwrite earlier ones.
    pub fn set(&mut self, x: i32, y: i32, attribute: &str, value: &str) -> &mut Self {
        self.cells
            .entry(Coord::new(x, y))
            .or_default()
            .insert(attribute.to_string(), value.to_string());
        self
    }

    pub fn content_at(&self, c: Coord) -> Option<&CellContent> {
        self.cells.get(&c)
    }

    pub fn value_at(&self, c: Coord, attribute: &str) -> Option<&str> {
        self.cells.get(&c).and_then(|m| m.get(attribute)).map(String::as_str)
    }

    pub fn assigned_cells(&self) -> impl Iterator<Item = (&Coord, &CellContent)> {
        self.cells.iter()
    }

    fn validate(&self, schema: &AttributeSchema) -> Result<()> {
        for (coord, content) in &self.cells {
            if !self.extent.contains(*coord) {
                return Err(Error::CoordOutOfBounds {
                    coord: *coord,
                    extent: self.extent,
                });
            }
            schema.check_content(content)?;
        }
        Ok(())
    }
}

/// A schema, a set of worlds, and a designated world of reference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Universe {
    schema: AttributeSchema,
    worlds: BTreeMap<WorldId, World>,
    reference: Option<WorldId>,
}

impl Universe {
    /// Builds and validates a universe. The first world of `worlds` becomes
    /// the world of reference; an empty list is rejected because a universe
    /// built this way must have a reference.
    pub fn build(schema: AttributeSchema, worlds: Vec<World>) -> Result<Self> {
        let reference = worlds.first().map(|w| w.id.clone()).ok_or(Error::MissingReference)?;
        let mut map = BTreeMap::new();
        for world in worlds {
            world.validate(&schema)?;
            if map.contains_key(&world.id) {
                return Err(Error::DuplicateWorld(world.id));
            }
            map.insert(world.id.clone(), world);
        }
        Ok(Self {
            schema,
            worlds: map,
            reference: Some(reference),
        })
    }

    /// The degenerate universe with no worlds and no reference. Property
    /// checks over it hold vacuously.
    pub fn empty(schema: AttributeSchema) -> Self {
        Self {
            schema,
            worlds: BTreeMap::new(),
            reference: None,
        }
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn reference(&self) -> Option<&WorldId> {
        self.reference.as_ref()
    }

    pub fn worlds(&self) -> impl Iterator<Item = &World> {
        self.worlds.values()
    }

    pub fn world(&self, id: &WorldId) -> Result<&World> {
        self.worlds.get(id).ok_or_else(|| Error::UnknownWorld(id.clone()))
    }

    pub fn contains_world(&self, id: &WorldId) -> bool {
        self.worlds.contains_key(id)
    }

    /// Copies the world's assignments restricted to `region`, bit for bit.
    /// Unassigned cells stay unassigned.
    pub fn ground_fragment(&self, world: &WorldId, region: Rect) -> Result<GroundFragment> {
        let w = self.world(world)?;
        if !w.extent.contains_rect(&region) {
            return Err(Error::RegionOutOfBounds {
                region,
                extent: w.extent,
            });
        }
        let values = w
            .cells
            .range(..)
            .filter(|(c, _)| region.contains(**c))
            .map(|(c, v)| (*c, v.clone()))
            .collect();
        Ok(GroundFragment {
            world: world.clone(),
            region,
            values,
        })
    }
}

/// A verbatim copy of one world region, used as the oracle for the
/// completeness and faithfulness checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroundFragment {
    pub world: WorldId,
    pub region: Rect,
    pub values: BTreeMap<Coord, CellContent>,
}

impl GroundFragment {
    pub fn value_at(&self, c: Coord, attribute: &str) -> Option<&str> {
        self.values.get(&c).and_then(|m| m.get(attribute)).map(String::as_str)
    }
}
