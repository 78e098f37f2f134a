//! Region partition of the plane by obstacles and sealed gaps, its
//! capacity-weighted dual graph, and point location.
//!
//! Every passable gap gets a seal: a polyline of axis-parallel segments from
//! one obstacle to the other through the middle of the gap. For overlapping
//! projections it is the straight midline across the gap; for diagonal pairs
//! it is a Z from the near corner of one obstacle to the midline of the gap
//! and on to the near corner of the other. Regions are the connected pieces
//! of the plane minus obstacles and seals.
//!
//! The partition is computed on a doubled compressed grid (even indices are
//! coordinate lines, odd indices the open intervals between them) by a
//! column sweep. Each maximal run of equally classified cells in a column
//! lives for a range of columns; these run lifetimes tile the grid and are
//! stored as rectangles for point location.

use serde::{Deserialize, Serialize};

use crate::gabriel::{Axis, EdgeKind, GapEdge};
use crate::geometry::{Coord, Obstacle, Point, Rect};
use crate::spatial::PackedRTree;
use crate::sweep::{Change, Class, ColumnSweep, Run};

/// Closed axis-parallel segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    fn new(a: Point, b: Point) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Self { a, b }
    }

    pub fn bbox(&self) -> Rect {
        Rect::from_corners(self.a, self.b)
    }
}

/// Seal of one passable edge together with the segment a robot crosses when
/// it goes through the gap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seal {
    pub edge: usize,
    pub segments: Vec<Segment>,
    pub crossing: Segment,
}

/// Seal polyline for `edge` between obstacles `a` and `b` (any order).
pub fn seal_for(edge_index: usize, edge: &GapEdge, a: &Rect, b: &Rect) -> Seal {
    // Work in a frame where the passage is horizontal; swap back at the end.
    let horizontal = edge.passage == Axis::Horizontal;
    let flip = |r: &Rect| if horizontal { *r } else { Rect::new(r.y1, r.x1, r.y2, r.x2) };
    let unflip = |p: Point| if horizontal { p } else { Point::new(p.y, p.x) };
    let (a, b) = (flip(a), flip(b));
    let (low, high) = if a.y2 <= b.y1 { (a, b) } else { (b, a) };
    let (xlo, xhi) = (low.x1.max(high.x1), low.x2.min(high.x2));
    let xm = (xlo + xhi).div_euclid(2);
    let crossing = Segment::new(unflip(Point::new(xm, low.y2)), unflip(Point::new(xm, high.y1)));
    let mut segments = vec![crossing];
    if edge.kind == EdgeKind::Diagonal {
        let low_corner = if low.x2 <= high.x1 { low.x2 } else { low.x1 };
        let high_corner = if low.x2 <= high.x1 { high.x1 } else { high.x2 };
        segments.push(Segment::new(unflip(Point::new(low_corner, low.y2)), unflip(Point::new(xm, low.y2))));
        segments.push(Segment::new(unflip(Point::new(xm, high.y1)), unflip(Point::new(high_corner, high.y1))));
    }
    Seal { edge: edge_index, segments, crossing }
}

/// Result of point location.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Region(usize),
    Wall(usize),
    Sealed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PieceClass {
    Free,
    Wall,
    Seal,
}

/// A run lifetime: the cells `[x1, x2] x [y1, y2]` of the doubled grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub cells: Rect,
    pub class: PieceClass,
    /// Graph node: the region id for free pieces, a seal node for seal
    /// pieces, `usize::MAX` for walls.
    pub node: usize,
    /// For seal pieces, the smallest capacity among the seals covering it
    /// and the gap edge it belongs to.
    pub capacity: Coord,
    pub edge: usize,
}

/// Edge of the capacity-weighted dual graph. Nodes are regions and seal
/// pieces; an edge opens for robots no larger than its capacity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualEdge {
    pub a: usize,
    pub b: usize,
    pub capacity: Coord,
    /// Index into the gap edge list.
    pub edge: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RegionPartition {
    pub xs: Vec<Coord>,
    pub ys: Vec<Coord>,
    pub pieces: Vec<Piece>,
    /// Regions are nodes `0..region_count`; seal pieces follow.
    pub region_count: usize,
    pub node_count: usize,
    pub outer: usize,
    pub seals: Vec<Seal>,
    pub dual_edges: Vec<DualEdge>,
    #[serde(skip)]
    piece_tree: PackedRTree,
    #[serde(skip)]
    wall_tree: PackedRTree,
    #[serde(skip)]
    walls: Vec<Obstacle>,
}

/// Index of `v` in the doubled grid: `2k` on line `k`, odd between lines.
pub fn doubled_index(coords: &[Coord], v: Coord) -> usize {
    match coords.binary_search(&v) {
        Ok(k) => 2 * k,
        Err(k) => 2 * k - 1,
    }
}

struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi as usize] = lo;
        }
    }
}

/// Calls `f` for every pair of runs from the two sorted lists whose cell
/// ranges overlap.
fn overlapping(old: &[Run], new: &[Run], mut f: impl FnMut(&Run, &Run)) {
    let mut k = 0;
    for run in new {
        while k < old.len() && old[k].end < run.start {
            k += 1;
        }
        let mut m = k;
        while m < old.len() && old[m].start <= run.end {
            f(&old[m], run);
            m += 1;
        }
    }
}

impl RegionPartition {
    /// Builds the partition for interior-disjoint `obstacles` and their
    /// relevant gap edges. Edges with zero capacity get no seal.
    pub fn build(obstacles: &[Obstacle], edges: &[GapEdge]) -> Self {
        let seals: Vec<Seal> = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.capacity > 0)
            .map(|(k, e)| seal_for(k, e, &obstacles[e.i].rect, &obstacles[e.j].rect))
            .collect();

        let mut xs: Vec<Coord> = Vec::new();
        let mut ys: Vec<Coord> = Vec::new();
        for o in obstacles {
            xs.extend([o.rect.x1, o.rect.x2]);
            ys.extend([o.rect.y1, o.rect.y2]);
        }
        for s in seals.iter().flat_map(|s| &s.segments) {
            xs.extend([s.a.x, s.b.x]);
            ys.extend([s.a.y, s.b.y]);
        }
        for v in [&mut xs, &mut ys] {
            let lo = v.iter().copied().min().unwrap_or(0) - 1;
            let hi = v.iter().copied().max().unwrap_or(0) + 1;
            v.extend([lo, hi]);
            v.sort_unstable();
            v.dedup();
        }
        let width = 2 * xs.len() - 1;
        let height = 2 * ys.len() - 1;
        let cell_rect = |r: &Rect| {
            Rect::new(
                doubled_index(&xs, r.x1) as Coord,
                doubled_index(&ys, r.y1) as Coord,
                doubled_index(&xs, r.x2) as Coord,
                doubled_index(&ys, r.y2) as Coord,
            )
        };

        let mut seal_cells: Vec<(Rect, usize)> = Vec::new();
        for s in &seals {
            seal_cells.extend(s.segments.iter().map(|seg| (cell_rect(&seg.bbox()), s.edge)));
        }
        let mut events: Vec<(usize, Change)> = Vec::new();
        let walls = obstacles.iter().map(|o| (cell_rect(&o.rect), 0));
        for (r, layer) in walls.chain(seal_cells.iter().map(|&(r, _)| (r, 1))) {
            let (lo, hi) = (r.y1 as usize, r.y2 as usize);
            events.push((r.x1 as usize, Change { lo, hi, layer, delta: 1 }));
            events.push((r.x2 as usize + 1, Change { lo, hi, layer, delta: -1 }));
        }
        events.sort_by_key(|e| e.0);

        // Runs in creation order: birth column, cell range, class.
        let mut raw: Vec<(usize, usize, usize, Class)> = vec![(0, 0, height - 1, Class::Free)];
        let mut finished: Vec<Option<Rect>> = vec![None];
        let mut adjacent: Vec<(u32, u32)> = Vec::new();
        let mut sweep = ColumnSweep::new(height, 0, false);
        let mut changes = Vec::new();
        for batch in events.chunk_by(|a, b| a.0 == b.0) {
            let col = batch[0].0;
            changes.clear();
            changes.extend(batch.iter().map(|e| e.1));
            let (removed, added) = sweep.apply(&changes, |run| {
                let id = raw.len() as u32;
                raw.push((col, run.start, run.end, run.class));
                finished.push(None);
                id
            });
            for r in &removed {
                let (birth, ..) = raw[r.tag as usize];
                finished[r.tag as usize] =
                    Some(Rect::new(birth as Coord, r.start as Coord, col as Coord - 1, r.end as Coord));
            }
            overlapping(&removed, &added, |a, b| adjacent.push((a.tag, b.tag)));
            for run in &added {
                let (below, above) = sweep.neighbours(run.start);
                adjacent.extend(below.iter().chain(above.iter()).map(|n| (n.tag, run.tag)));
            }
        }
        for run in sweep.current_runs() {
            let (birth, ..) = raw[run.tag as usize];
            finished[run.tag as usize] =
                Some(Rect::new(birth as Coord, run.start as Coord, width as Coord - 1, run.end as Coord));
        }

        let mut dsu = Dsu { parent: (0..raw.len() as u32).collect() };
        let is_free = |t: u32| raw[t as usize].3 == Class::Free;
        for &(a, b) in &adjacent {
            if is_free(a) && is_free(b) {
                dsu.union(a, b);
            }
        }
        let mut node = vec![usize::MAX; raw.len()];
        let mut region_count = 0;
        for k in 0..raw.len() {
            if raw[k].3 == Class::Free {
                let root = dsu.find(k as u32) as usize;
                if node[root] == usize::MAX {
                    node[root] = region_count;
                    region_count += 1;
                }
                node[k] = node[root];
            }
        }
        let seal_tree = PackedRTree::new(seal_cells.iter().map(|&(r, _)| r).collect());
        let mut node_count = region_count;
        let mut pieces = Vec::with_capacity(raw.len());
        for (k, &(_, _, _, class)) in raw.iter().enumerate() {
            let cells = finished[k].expect("every run ends");
            debug_assert!(cells.x1 <= cells.x2);
            let mut piece = Piece { cells, class: PieceClass::Free, node: node[k], capacity: 0, edge: usize::MAX };
            match class {
                Class::Free => {}
                Class::Wall => piece.class = PieceClass::Wall,
                Class::Seal | Class::SealMulti => {
                    piece.class = PieceClass::Seal;
                    let mut best = (Coord::MAX, usize::MAX);
                    seal_tree.search(
                        |r| r.intersects_closed(&cells),
                        |s| {
                            let e = seal_cells[s].1;
                            best = best.min((edges[e].capacity, e));
                            true
                        },
                    );
                    (piece.capacity, piece.edge) = best;
                    node[k] = node_count;
                    piece.node = node_count;
                    node_count += 1;
                }
            }
            pieces.push(piece);
        }

        // Dual edges between touching pieces where a seal is involved.
        let mut dual: Vec<DualEdge> = Vec::new();
        for &(a, b) in &adjacent {
            let (pa, pb) = (&pieces[a as usize], &pieces[b as usize]);
            if pa.class == PieceClass::Wall || pb.class == PieceClass::Wall || pa.node == pb.node {
                continue;
            }
            let (cap, edge) = match (pa.class, pb.class) {
                (PieceClass::Seal, PieceClass::Seal) => (pa.capacity, pa.edge).min((pb.capacity, pb.edge)),
                (PieceClass::Seal, _) => (pa.capacity, pa.edge),
                _ => (pb.capacity, pb.edge),
            };
            dual.push(DualEdge { a: pa.node.min(pb.node), b: pa.node.max(pb.node), capacity: cap, edge });
        }
        dual.sort_by(|x, y| (x.a, x.b, y.capacity, x.edge).cmp(&(y.a, y.b, x.capacity, y.edge)));
        dual.dedup_by_key(|e| (e.a, e.b));

        let mut part = Self {
            xs,
            ys,
            pieces,
            region_count,
            node_count,
            outer: 0,
            seals,
            dual_edges: dual,
            ..Default::default()
        };
        part.walls = obstacles.to_vec();
        part.rebuild_search();
        part.outer = part.piece_at_cell(0, 0).node;
        part
    }

    /// Restores the search structures after deserialization.
    pub fn attach(&mut self, obstacles: &[Obstacle]) {
        self.walls = obstacles.to_vec();
        self.rebuild_search();
    }

    fn rebuild_search(&mut self) {
        self.piece_tree = PackedRTree::new(self.pieces.iter().map(|p| p.cells).collect());
        self.wall_tree = PackedRTree::new(self.walls.iter().map(|o| o.rect).collect());
    }

    pub fn width(&self) -> usize {
        2 * self.xs.len() - 1
    }

    pub fn height(&self) -> usize {
        2 * self.ys.len() - 1
    }

    /// Piece covering cell `(cx, cy)`.
    pub fn piece_at_cell(&self, cx: usize, cy: usize) -> &Piece {
        let k = self
            .piece_tree
            .find_containing(cx as Coord, cy as Coord)
            .expect("pieces tile the grid");
        &self.pieces[k]
    }

    /// Grid cell of a point, or `None` beyond the outermost lines.
    pub fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let inside = |v: &[Coord], c: Coord| v[0] <= c && c <= v[v.len() - 1];
        (inside(&self.xs, p.x) && inside(&self.ys, p.y))
            .then(|| (doubled_index(&self.xs, p.x), doubled_index(&self.ys, p.y)))
    }

    /// Piece under `p`, or `None` outside the grid (the outer region).
    pub fn piece_at(&self, p: Point) -> Option<&Piece> {
        self.cell_of(p).map(|(cx, cy)| self.piece_at_cell(cx, cy))
    }

    pub fn locate(&self, p: Point) -> Location {
        let Some(piece) = self.piece_at(p) else { return Location::Region(self.outer) };
        match piece.class {
            PieceClass::Free => Location::Region(piece.node),
            PieceClass::Seal => Location::Sealed(piece.edge),
            PieceClass::Wall => {
                let k = self.wall_tree.find_containing(p.x, p.y).expect("wall cell lies in an obstacle");
                Location::Wall(self.walls[k].id)
            }
        }
    }

    /// Graph node of `p`: its region, or its seal piece when `p` lies on a
    /// seal. `None` inside walls.
    pub fn node_of(&self, p: Point) -> Option<usize> {
        match self.piece_at(p) {
            None => Some(self.outer),
            Some(piece) if piece.class == PieceClass::Wall => None,
            Some(piece) => Some(piece.node),
        }
    }

    /// Regions of the open two-dimensional cells around the cell of `p`.
    pub fn nearby_regions(&self, p: Point) -> Vec<usize> {
        let Some((cx, cy)) = self.cell_of(p) else { return vec![self.outer] };
        let mut out = Vec::new();
        for dx in [-1i64, 0, 1] {
            for dy in [-1i64, 0, 1] {
                let (x, y) = (cx as i64 + dx, cy as i64 + dy);
                if x < 0 || y < 0 || x as usize >= self.width() || y as usize >= self.height() {
                    continue;
                }
                if x % 2 == 0 || y % 2 == 0 {
                    continue;
                }
                let piece = self.piece_at_cell(x as usize, y as usize);
                if piece.class == PieceClass::Free {
                    out.push(piece.node);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabriel::build_gabriel;
    use crate::geometry::obstacles_from_internal;

    fn build(rects: &[Rect]) -> (Vec<Obstacle>, RegionPartition) {
        let obs = obstacles_from_internal(rects);
        let g = build_gabriel(&obs);
        let part = RegionPartition::build(&obs, &g.edges);
        (obs, part)
    }

    #[test]
    fn empty_world() {
        let (_, part) = build(&[]);
        assert_eq!(part.region_count, 1);
        assert_eq!(part.locate(Point::new(5, 5)), Location::Region(part.outer));
    }

    #[test]
    fn one_obstacle() {
        let (_, part) = build(&[Rect::new(0, 0, 4, 4)]);
        assert_eq!(part.region_count, 1);
        assert_eq!(part.locate(Point::new(2, 2)), Location::Wall(0));
        assert_eq!(part.locate(Point::new(100, 2)), Location::Region(part.outer));
    }

    #[test]
    fn diagonal_pair_single_region() {
        let (_, part) = build(&[Rect::new(0, 0, 4, 4), Rect::new(10, 12, 14, 16)]);
        assert_eq!(part.seals.len(), 1);
        assert_eq!(part.region_count, 1);
        // Horizontal passage (y-gap 8 >= x-gap 6): the crossing is vertical at x = 7.
        assert_eq!(part.locate(Point::new(7, 6)), Location::Sealed(0));
    }

    /// Closed room of four walls with one gap of width `g` in the top wall.
    pub(crate) fn room(g: Coord) -> Vec<Rect> {
        vec![
            Rect::new(0, 0, 40, 4),
            Rect::new(0, 4, 4, 40),
            Rect::new(36, 4, 40, 40),
            Rect::new(4, 36, 20, 40),
            Rect::new(20 + g, 36, 36, 40),
        ]
    }

    #[test]
    fn room_with_gap() {
        let (_, part) = build(&room(6));
        assert_eq!(part.region_count, 2);
        assert!(part.dual_edges.iter().all(|e| e.capacity == 6));
        let inside = part.locate(Point::new(20, 20));
        let outside = part.locate(Point::new(20, 60));
        assert_ne!(inside, outside);
    }
}
