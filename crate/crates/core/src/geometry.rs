//! Exact integer rectangle primitives.
//!
//! Every coordinate inside the pipeline is an integer in *half-units*: external
//! input is multiplied by two on ingestion, so midpoints of obstacle
//! coordinates and the `d / 2` offsets of an expanded obstacle stay integral.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decompose::{decompose, DecomposeError, RectilinearPolygon};

/// A coordinate in internal half-units.
pub type Coord = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub const fn new(x: Coord, y: Coord) -> Self {
        Self { x, y }
    }
}

/// Closed axis-aligned rectangle `[x1, x2] x [y1, y2]`.
///
/// Obstacles always have positive extent; thin-edge rectangles may be
/// degenerate (zero width or height) when two obstacles touch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rect {
    pub x1: Coord,
    pub y1: Coord,
    pub x2: Coord,
    pub y2: Coord,
}

impl Rect {
    pub const fn new(x1: Coord, y1: Coord, x2: Coord, y2: Coord) -> Self {
        Self { x1, y1, x2, y2 }
    }

    /// Builds the rectangle spanned by two opposite corners in any order.
    pub fn from_corners(a: Point, b: Point) -> Self {
        Self {
            x1: a.x.min(b.x),
            y1: a.y.min(b.y),
            x2: a.x.max(b.x),
            y2: a.y.max(b.y),
        }
    }

    pub fn width(&self) -> Coord {
        self.x2 - self.x1
    }

    pub fn height(&self) -> Coord {
        self.y2 - self.y1
    }

    pub fn area(&self) -> i128 {
        self.width() as i128 * self.height() as i128
    }

    pub fn has_positive_extent(&self) -> bool {
        self.x1 < self.x2 && self.y1 < self.y2
    }

    pub fn contains_closed(&self, p: Point) -> bool {
        self.x1 <= p.x && p.x <= self.x2 && self.y1 <= p.y && p.y <= self.y2
    }

    pub fn contains_open(&self, p: Point) -> bool {
        self.x1 < p.x && p.x < self.x2 && self.y1 < p.y && p.y < self.y2
    }

    /// True when the closed rectangle `other` meets the open interior of `self`.
    pub fn interior_meets(&self, other: &Rect) -> bool {
        other.x1 < self.x2 && other.x2 > self.x1 && other.y1 < self.y2 && other.y2 > self.y1
    }

    /// True when the closed rectangles share at least one point.
    pub fn intersects_closed(&self, other: &Rect) -> bool {
        other.x1 <= self.x2 && other.x2 >= self.x1 && other.y1 <= self.y2 && other.y2 >= self.y1
    }

    /// Twice the center, which stays integral.
    pub fn center2(&self) -> Point {
        Point::new(self.x1 + self.x2, self.y1 + self.y2)
    }

    pub fn scaled(&self, sx: Coord, sy: Coord) -> Rect {
        Rect::from_corners(
            Point::new(self.x1 * sx, self.y1 * sy),
            Point::new(self.x2 * sx, self.y2 * sy),
        )
    }
}

/// A closed rectangular obstacle with a dense identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Obstacle {
    pub id: usize,
    pub rect: Rect,
}

/// Per-axis gaps between two rectangles; negative values measure overlap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GapVector {
    pub gx: Coord,
    pub gy: Coord,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("input {index}: degenerate extent (need x1 < x2 and y1 < y2)")]
    DegenerateExtent { index: usize },
    #[error("input {index}: {source}")]
    Polygon {
        index: usize,
        #[source]
        source: DecomposeError,
    },
    #[error("aspect scale factors must be positive")]
    BadScale,
}

/// A shape as it appears in a world description, in external units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawShape {
    Rect(Rect),
    Polygon(RectilinearPolygon),
}

/// Axis scale applied on ingestion so that a rectangular robot with a fixed
/// aspect ratio becomes a square.
///
/// A robot that is `width` wide and `height` tall becomes a square of side
/// `width * height` once x is scaled by `height` and y by `width`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisScale {
    pub x: Coord,
    pub y: Coord,
}

impl AxisScale {
    pub const UNIT: AxisScale = AxisScale { x: 1, y: 1 };

    /// Scale that turns a `width x height` robot into a square.
    pub fn for_robot(width: Coord, height: Coord) -> Result<Self, GeometryError> {
        if width <= 0 || height <= 0 {
            return Err(GeometryError::BadScale);
        }
        Ok(AxisScale { x: height, y: width })
    }

    /// Maps an external point into internal half-units.
    pub fn point(&self, x: Coord, y: Coord) -> Point {
        Point::new(2 * x * self.x, 2 * y * self.y)
    }

    /// Maps an external robot width (the x extent) into an internal square side.
    pub fn robot_side(&self, width: Coord) -> Coord {
        2 * width * self.x
    }
}

impl Default for AxisScale {
    fn default() -> Self {
        Self::UNIT
    }
}

/// Converts external shapes into internal obstacles.
///
/// Coordinates are doubled and polygons are decomposed into disjoint
/// rectangles. Ids are assigned densely in input order.
pub fn ingest_world(shapes: &[RawShape]) -> Result<Vec<Obstacle>, GeometryError> {
    ingest_world_scaled(shapes, AxisScale::UNIT)
}

pub fn ingest_world_scaled(
    shapes: &[RawShape],
    scale: AxisScale,
) -> Result<Vec<Obstacle>, GeometryError> {
    if scale.x <= 0 || scale.y <= 0 {
        return Err(GeometryError::BadScale);
    }
    let mut out = Vec::with_capacity(shapes.len());
    for (index, shape) in shapes.iter().enumerate() {
        match shape {
            RawShape::Rect(r) => {
                if !r.has_positive_extent() {
                    return Err(GeometryError::DegenerateExtent { index });
                }
                out.push(r.scaled(2 * scale.x, 2 * scale.y));
            }
            RawShape::Polygon(poly) => {
                let rects =
                    decompose(poly).map_err(|source| GeometryError::Polygon { index, source })?;
                out.extend(rects.iter().map(|r| r.scaled(2 * scale.x, 2 * scale.y)));
            }
        }
    }
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(id, rect)| Obstacle { id, rect })
        .collect())
}

/// Builds obstacles from rectangles that are already in internal half-units.
pub fn obstacles_from_internal(rects: &[Rect]) -> Vec<Obstacle> {
    rects
        .iter()
        .enumerate()
        .map(|(id, &rect)| Obstacle { id, rect })
        .collect()
}

fn interval_gap(a1: Coord, a2: Coord, b1: Coord, b2: Coord) -> Coord {
    a1.max(b1) - a2.min(b2)
}

/// Interval gaps on both axes. Symmetric in its arguments.
pub fn gaps(a: &Rect, b: &Rect) -> GapVector {
    GapVector {
        gx: interval_gap(a.x1, a.x2, b.x1, b.x2),
        gy: interval_gap(a.y1, a.y2, b.y1, b.y2),
    }
}

/// Generalized L-infinity gap: the largest square side that can pass between
/// the two rectangles, clamped below at zero.
pub fn capacity(a: &Rect, b: &Rect) -> Coord {
    let g = gaps(a, b);
    g.gx.max(g.gy).max(0)
}

fn contact_interval(a1: Coord, a2: Coord, b1: Coord, b2: Coord) -> (Coord, Coord) {
    let lo = a1.max(b1);
    let hi = a2.min(b2);
    if lo <= hi {
        (lo, hi)
    } else {
        (hi, lo)
    }
}

/// The thin edge between two rectangles: per axis the overlap interval when
/// the projections meet, otherwise the gap interval between them.
pub fn thin_edge_rect(a: &Rect, b: &Rect) -> Rect {
    let (x1, x2) = contact_interval(a.x1, a.x2, b.x1, b.x2);
    let (y1, y2) = contact_interval(a.y1, a.y2, b.y1, b.y2);
    Rect { x1, y1, x2, y2 }
}

/// Minkowski expansion by a square of side `d`: each side moves out by `d / 2`.
///
/// `d` is in half-units and must be even for the result to be exact; odd
/// sides are rejected in debug builds. Use [`placement_free`] for an exact
/// test with any side.
pub fn expand(r: &Rect, d: Coord) -> Rect {
    debug_assert!(d >= 0 && d % 2 == 0, "expand needs an even, non-negative side");
    let h = d / 2;
    Rect::new(r.x1 - h, r.y1 - h, r.x2 + h, r.y2 + h)
}

/// Whether the open square of side `d` centered at `p` misses the closed rectangle.
///
/// Equivalently, `p` is outside the open interior of the rectangle expanded
/// by `d / 2`; touching the expanded boundary is allowed. Computed on doubled
/// values so any integer `d` is exact.
pub fn square_clear_of(p: Point, d: Coord, r: &Rect) -> bool {
    let (px, py) = (2 * p.x, 2 * p.y);
    !(px - d < 2 * r.x2 && px + d > 2 * r.x1 && py - d < 2 * r.y2 && py + d > 2 * r.y1)
}

/// Whether a robot of side `d` centered at `p` collides with none of `obstacles`.
pub fn placement_free(p: Point, d: Coord, obstacles: &[Obstacle]) -> bool {
    obstacles.iter().all(|o| square_clear_of(p, d, &o.rect))
}

/// One of the eight symmetries of the square: an optional mirror `x -> -x`
/// followed by `rotation` quarter turns of `(x, y) -> (y, -x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symmetry {
    rotation: u8,
    mirrored: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry { rotation: 0, mirrored: false };

    pub fn new(rotation: u8, mirrored: bool) -> Self {
        Self { rotation: rotation % 4, mirrored }
    }

    pub fn rotation(&self) -> u8 {
        self.rotation
    }

    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    /// All eight elements of the dihedral group.
    pub fn all() -> [Symmetry; 8] {
        let mut out = [Symmetry::IDENTITY; 8];
        for (k, s) in out.iter_mut().enumerate() {
            *s = Symmetry::new((k % 4) as u8, k >= 4);
        }
        out
    }

    pub fn apply_point(&self, p: Point) -> Point {
        let (mut x, mut y) = (p.x, p.y);
        if self.mirrored {
            x = -x;
        }
        for _ in 0..self.rotation {
            (x, y) = (y, -x);
        }
        Point::new(x, y)
    }

    pub fn apply_rect(&self, r: &Rect) -> Rect {
        Rect::from_corners(
            self.apply_point(Point::new(r.x1, r.y1)),
            self.apply_point(Point::new(r.x2, r.y2)),
        )
    }

    pub fn inverse(&self) -> Symmetry {
        if self.mirrored {
            // Reflections are involutions.
            *self
        } else {
            Symmetry::new((4 - self.rotation) % 4, false)
        }
    }
}
