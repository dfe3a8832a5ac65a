//! Grid geometry shared by worlds, patches, and displays.

use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

/// A cell coordinate.
///
/// Ordering is row-major (`(y, x)` lexicographic), so iterating a
/// `BTreeMap<Coord, _>` visits cells in reading order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn shifted(self, d: Offset) -> Self {
        Coord::new(self.x + d.dx, self.y + d.dy)
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

/// A translation between coordinate frames.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Offset {
    pub dx: i32,
    pub dy: i32,
}

impl Offset {
    pub fn new(dx: i32, dy: i32) -> Self {
        Self { dx, dy }
    }

    pub fn inverse(self) -> Self {
        Offset::new(-self.dx, -self.dy)
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.dx, self.dy)
    }
}

/// An axis-aligned rectangle: origin plus size. Zero-sized rectangles are
/// legal and denote an empty region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Rect {
    pub x: i32,
    pub y: i32,
    pub width: u32,
    pub height: u32,
}

impl Rect {
    pub fn new(x: i32, y: i32, width: u32, height: u32) -> Self {
        Self {
            x,
            y,
            width,
            height,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0 || self.height == 0
    }

    pub fn right(&self) -> i32 {
        self.x + self.width as i32
    }

    pub fn bottom(&self) -> i32 {
        self.y + self.height as i32
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x >= self.x && c.x < self.right() && c.y >= self.y && c.y < self.bottom()
    }

    /// Cells of the rectangle in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Coord> + '_ {
        let (x0, y0) = (self.x, self.y);
        let w = self.width as i32;
        (0..self.height as i32).flat_map(move |dy| (0..w).map(move |dx| Coord::new(x0 + dx, y0 + dy)))
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        !self.is_empty()
            && !other.is_empty()
            && self.x < other.right()
            && other.x < self.right()
            && self.y < other.bottom()
            && other.y < self.bottom()
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x, self.y, self.width, self.height)
    }
}

/// The size of a world grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Extent {
    pub width: u32,
    pub height: u32,
}

impl Extent {
    pub fn new(width: u32, height: u32) -> Self {
        Self { width, height }
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.rect().contains(c)
    }

    pub fn contains_rect(&self, r: &Rect) -> bool {
        r.is_empty()
            || (r.x >= 0 && r.y >= 0 && r.right() <= self.width as i32 && r.bottom() <= self.height as i32)
    }

    pub fn rect(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coord_order_is_row_major() {
        let mut cs = vec![Coord::new(1, 1), Coord::new(0, 2), Coord::new(2, 0), Coord::new(0, 1)];
        cs.sort();
        assert_eq!(
            cs,
            vec![Coord::new(2, 0), Coord::new(0, 1), Coord::new(1, 1), Coord::new(0, 2)]
        );
    }

    #[test]
    fn rect_cells_row_major() {
        let r = Rect::new(1, 1, 2, 2);
        let cells: Vec<_> = r.cells().collect();
        assert_eq!(
            cells,
            vec![Coord::new(1, 1), Coord::new(2, 1), Coord::new(1, 2), Coord::new(2, 2)]
        );
    }

    #[test]
    fn empty_rect_has_no_cells() {
        assert_eq!(Rect::new(3, 3, 0, 5).cells().count(), 0);
        assert!(Rect::new(3, 3, 0, 5).is_empty());
    }

    #[test]
    fn extent_contains_clipped_rects() {
        let e = Extent::new(4, 4);
        assert!(e.contains_rect(&Rect::new(0, 0, 4, 4)));
        assert!(!e.contains_rect(&Rect::new(2, 2, 4, 4)));
        // empty regions are within any extent
        assert!(e.contains_rect(&Rect::new(9, 9, 0, 0)));
    }
}
