//! Rectilinear polygon to disjoint rectangles by horizontal strip cutting.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{Coord, Point, Rect};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum DecomposeError {
    #[error("polygon needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge {0} is not axis-aligned, has zero length, or does not alternate direction")]
    NotRectilinear(usize),
    #[error("edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
}

/// A simple rectilinear polygon given by its vertices; the closing edge from
/// the last vertex back to the first is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectilinearPolygon {
    pub vertices: Vec<Point>,
}

#[derive(Clone, Copy)]
struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    fn is_vertical(&self) -> bool {
        self.a.x == self.b.x
    }

    fn bbox(&self) -> Rect {
        Rect::from_corners(self.a, self.b)
    }
}

impl RectilinearPolygon {
    pub fn new(vertices: Vec<Point>) -> Self {
        Self { vertices }
    }

    fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment { a: self.vertices[i], b: self.vertices[(i + 1) % n] })
    }

    /// Checks the rectilinear and simplicity preconditions.
    pub fn validate(&self) -> Result<(), DecomposeError> {
        let n = self.vertices.len();
        if n < 4 {
            return Err(DecomposeError::TooFewVertices(n));
        }
        let edges: Vec<Segment> = self.edges().collect();
        for (i, e) in edges.iter().enumerate() {
            let axis = e.a.x == e.b.x || e.a.y == e.b.y;
            let nonzero = e.a != e.b;
            let next = &edges[(i + 1) % n];
            if !axis || !nonzero || e.is_vertical() == next.is_vertical() {
                return Err(DecomposeError::NotRectilinear(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if !adjacent && edges[i].bbox().intersects_closed(&edges[j].bbox()) {
                    return Err(DecomposeError::SelfIntersecting(i, j));
                }
            }
        }
        Ok(())
    }

    /// Shoelace area (absolute value).
    pub fn area(&self) -> i128 {
        let twice: i128 = self
            .edges()
            .map(|e| e.a.x as i128 * e.b.y as i128 - e.b.x as i128 * e.a.y as i128)
            .sum();
        twice.abs() / 2
    }

    /// Closed point membership: boundary points count as inside.
    pub fn contains_closed(&self, p: Point) -> bool {
        let mut inside = false;
        for e in self.edges() {
            if e.bbox().contains_closed(p) {
                return true;
            }
            if e.is_vertical() {
                let (lo, hi) = (e.a.y.min(e.b.y), e.a.y.max(e.b.y));
                if e.a.x > p.x && lo <= p.y && p.y < hi {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Splits a simple rectilinear polygon into interior-disjoint rectangles.
///
/// The polygon is cut into horizontal strips at every vertex y-coordinate,
/// sweeping from the top down. Each maximal run inside a strip is a
/// rectangle; runs with identical x-extent in consecutive strips are merged,
/// which keeps the count at or below the vertex count. Output is sorted by
/// `(y1, x1)`.
pub fn decompose(poly: &RectilinearPolygon) -> Result<Vec<Rect>, DecomposeError> {
    poly.validate()?;
    let verticals: Vec<(Coord, Coord, Coord)> = poly
        .edges()
        .filter(|e| e.is_vertical())
        .map(|e| (e.a.x, e.a.y.min(e.b.y), e.a.y.max(e.b.y)))
        .collect();
    let mut ys: Vec<Coord> = poly.vertices.iter().map(|v| v.y).collect();
    ys.sort_unstable();
    ys.dedup();

    let mut out = Vec::new();
    // Runs of the strip above, keyed by x-extent, with the top of the merged rectangle.
    let mut open: BTreeMap<(Coord, Coord), Coord> = BTreeMap::new();
    for k in (0..ys.len() - 1).rev() {
        let (lo, hi) = (ys[k], ys[k + 1]);
        let mut xs: Vec<Coord> = verticals
            .iter()
            .filter(|&&(_, a, b)| a <= lo && b >= hi)
            .map(|&(x, _, _)| x)
            .collect();
        xs.sort_unstable();
        let mut next = BTreeMap::new();
        for pair in xs.chunks_exact(2) {
            let key = (pair[0], pair[1]);
            let top = open.remove(&key).unwrap_or(hi);
            next.insert(key, top);
        }
        for ((x1, x2), top) in open {
            out.push(Rect::new(x1, hi, x2, top));
        }
        open = next;
    }
    let bottom = ys[0];
    for ((x1, x2), top) in open {
        out.push(Rect::new(x1, bottom, x2, top));
    }
    out.sort_by_key(|r| (r.y1, r.x1));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(Coord, Coord)]) -> RectilinearPolygon {
        RectilinearPolygon::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    #[test]
    fn rectangle_is_itself() {
        let p = poly(&[(0, 0), (3, 0), (3, 2), (0, 2)]);
        assert_eq!(decompose(&p).unwrap(), vec![Rect::new(0, 0, 3, 2)]);
    }

    #[test]
    fn l_shape() {
        let p = poly(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]);
        let rects = decompose(&p).unwrap();
        assert_eq!(rects, vec![Rect::new(0, 0, 2, 1), Rect::new(0, 1, 1, 2)]);
        assert_eq!(rects.iter().map(Rect::area).sum::<i128>(), 3);
        assert_eq!(p.area(), 3);
    }

    #[test]
    fn u_shape() {
        let p = poly(&[(0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)]);
        let rects = decompose(&p).unwrap();
        assert_eq!(rects.len(), 3);
        assert_eq!(rects.iter().map(Rect::area).sum::<i128>(), p.area());
        assert_eq!(p.area(), 7);
    }

    #[test]
    fn clockwise_input_accepted() {
        let p = poly(&[(0, 0), (0, 2), (1, 2), (1, 1), (2, 1), (2, 0)]);
        assert_eq!(decompose(&p).unwrap().len(), 2);
    }

    #[test]
    fn rejects_diagonal_edge() {
        let p = poly(&[(0, 0), (2, 0), (2, 2), (1, 3)]);
        assert!(matches!(decompose(&p), Err(DecomposeError::NotRectilinear(_))));
    }

    #[test]
    fn rejects_collinear_vertex() {
        let p = poly(&[(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)]);
        assert!(matches!(decompose(&p), Err(DecomposeError::NotRectilinear(_))));
    }

    #[test]
    fn rejects_self_intersection() {
        // Figure-eight style boundary where two edges cross.
        let p = poly(&[(0, 0), (2, 0), (2, 3), (1, 3), (1, -1), (0, -1)]);
        assert!(matches!(decompose(&p), Err(DecomposeError::SelfIntersecting(_, _))));
    }

    #[test]
    fn rejects_too_few() {
        assert_eq!(decompose(&poly(&[(0, 0), (1, 0)])), Err(DecomposeError::TooFewVertices(2)));
    }

    #[test]
    fn membership_closed() {
        let p = poly(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]);
        assert!(p.contains_closed(Point::new(0, 0)));
        assert!(p.contains_closed(Point::new(1, 2)));
        assert!(!p.contains_closed(Point::new(2, 2)));
        assert!(p.contains_closed(Point::new(1, 1)));
    }
}
