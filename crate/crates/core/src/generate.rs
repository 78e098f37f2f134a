//! Deterministic world, polygon and query generators.
//!
//! All generators work in external units and are seeded through ChaCha8, so
//! a `(kind, n, seed)` triple always yields the same world.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decompose::RectilinearPolygon;
use crate::geometry::{placement_free, Coord, Obstacle, Point, Rect};
use crate::query::Query;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WorldKind {
    Uniform,
    Cluster,
    Maze,
}

impl WorldKind {
    pub const ALL: [WorldKind; 3] = [WorldKind::Uniform, WorldKind::Cluster, WorldKind::Maze];

    pub fn as_str(&self) -> &'static str {
        match self {
            WorldKind::Uniform => "uniform",
            WorldKind::Cluster => "cluster",
            WorldKind::Maze => "maze",
        }
    }
}

impl fmt::Display for WorldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WorldKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(WorldKind::Uniform),
            "cluster" => Ok(WorldKind::Cluster),
            "maze" => Ok(WorldKind::Maze),
            _ => Err(format!("unknown world kind `{s}` (uniform, cluster, maze)")),
        }
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn generate(kind: WorldKind, n: usize, seed: u64) -> Vec<Rect> {
    let mut rng = rng_for(seed);
    match kind {
        WorldKind::Uniform => uniform(n, &mut rng),
        WorldKind::Cluster => cluster(n, &mut rng),
        WorldKind::Maze => maze(n, &mut rng),
    }
}

const MAX_SIDE: Coord = 6;
const CELL: Coord = 8;

/// Rejection sampler keeping placed rectangles interior-disjoint. Every
/// rectangle is smaller than a bucket, so a 3x3 bucket neighbourhood covers
/// all possible overlaps.
struct Placer {
    buckets: HashMap<(Coord, Coord), Vec<Rect>>,
    out: Vec<Rect>,
}

impl Placer {
    fn new() -> Self {
        Self { buckets: HashMap::new(), out: Vec::new() }
    }

    fn try_place(&mut self, r: Rect) -> bool {
        let (bx, by) = (r.x1.div_euclid(CELL), r.y1.div_euclid(CELL));
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = self.buckets.get(&(bx + dx, by + dy)) {
                    if list.iter().any(|o| r.interior_meets(o)) {
                        return false;
                    }
                }
            }
        }
        self.buckets.entry((bx, by)).or_default().push(r);
        self.out.push(r);
        true
    }
}

fn random_rect(rng: &mut ChaCha8Rng, x: Coord, y: Coord) -> Rect {
    Rect::new(x, y, x + rng.gen_range(1..=MAX_SIDE), y + rng.gen_range(1..=MAX_SIDE))
}

fn uniform(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rect> {
    let side = ((n as f64).sqrt() * 9.0).ceil() as Coord + MAX_SIDE;
    let mut placer = Placer::new();
    while placer.out.len() < n {
        let (x, y) = (rng.gen_range(0..side), rng.gen_range(0..side));
        let r = random_rect(rng, x, y);
        placer.try_place(r);
    }
    placer.out
}

fn cluster(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rect> {
    let clusters = n.div_ceil(20).max(1);
    let side = ((n as f64).sqrt() * 12.0).ceil() as Coord + MAX_SIDE;
    let centers: Vec<(Coord, Coord)> =
        (0..clusters).map(|_| (rng.gen_range(0..side), rng.gen_range(0..side))).collect();
    let mut placer = Placer::new();
    let mut spread: Coord = 16;
    let mut misses = 0;
    while placer.out.len() < n {
        let (cx, cy) = centers[rng.gen_range(0..clusters)];
        // Sum of uniforms: a cheap bell around the center.
        let off = |rng: &mut ChaCha8Rng| (0..3).map(|_| rng.gen_range(-spread..=spread)).sum::<Coord>() / 2;
        let (x, y) = (cx + off(rng), cy + off(rng));
        let r = random_rect(rng, x, y);
        if placer.try_place(r) {
            misses = 0;
        } else {
            misses += 1;
            if misses > 50 {
                spread += spread / 2;
                misses = 0;
            }
        }
    }
    placer.out
}

/// Walls of a depth-first maze on a grid of square cells. Walls are one
/// unit thick and overlap at the grid corners. The spanning tree keeps
/// every cell reachable; the wall list is trimmed to `n`, bottom rows first.
fn maze(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rect> {
    const C: Coord = 6;
    let mut w = 1usize;
    while w * w + 2 * w + 1 < n {
        w += 1;
    }
    let h = w;
    // open[cell][dir]: 0 east, 1 north.
    let mut open_east = vec![false; w * h];
    let mut open_north = vec![false; w * h];
    let mut seen = vec![false; w * h];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(&c) = stack.last() {
        let (x, y) = (c % w, c / w);
        let mut next = Vec::with_capacity(4);
        if x + 1 < w && !seen[c + 1] {
            next.push(c + 1);
        }
        if x > 0 && !seen[c - 1] {
            next.push(c - 1);
        }
        if y + 1 < h && !seen[c + w] {
            next.push(c + w);
        }
        if y > 0 && !seen[c - w] {
            next.push(c - w);
        }
        if next.is_empty() {
            stack.pop();
            continue;
        }
        let m = next[rng.gen_range(0..next.len())];
        match m {
            _ if m == c + 1 => open_east[c] = true,
            _ if m + 1 == c => open_east[m] = true,
            _ if m == c + w => open_north[c] = true,
            _ => open_north[m] = true,
        }
        seen[m] = true;
        stack.push(m);
    }
    let mut walls = Vec::new();
    // Horizontal walls on row lines 0..=h, vertical on column lines 0..=w.
    for y in 0..=h {
        for x in 0..w {
            let interior_open = y > 0 && y < h && open_north[(y - 1) * w + x];
            if !interior_open {
                let (x0, y0) = (x as Coord * C, y as Coord * C);
                walls.push(Rect::new(x0, y0, x0 + C + 1, y0 + 1));
            }
        }
    }
    for x in 0..=w {
        for y in 0..h {
            let interior_open = x > 0 && x < w && open_east[y * w + x - 1];
            if !interior_open {
                let (x0, y0) = (x as Coord * C, y as Coord * C);
                walls.push(Rect::new(x0, y0, x0 + 1, y0 + C + 1));
            }
        }
    }
    walls.sort_by_key(|r| (r.y1, r.x1, r.x2));
    walls.truncate(n);
    walls
}

/// Random simple rectilinear polygon with at most `max_vertices` vertices,
/// traced from a random polyomino with uneven row and column sizes.
pub fn random_polygon(rng: &mut ChaCha8Rng, max_vertices: usize) -> RectilinearPolygon {
    loop {
        let k = rng.gen_range(2..=7usize);
        let cells = rng.gen_range(1..=k * k);
        if let Some(poly) = try_polyomino(rng, k, cells) {
            if poly.vertices.len() <= max_vertices {
                return poly;
            }
        }
    }
}

fn try_polyomino(rng: &mut ChaCha8Rng, k: usize, cells: usize) -> Option<RectilinearPolygon> {
    // Padded grid: a ring of empty cells around the k x k area.
    let g = k + 2;
    let mut filled = vec![false; g * g];
    let start = (1 + rng.gen_range(0..k)) + g * (1 + rng.gen_range(0..k));
    filled[start] = true;
    let mut frontier = vec![start];
    let mut count = 1;
    while count < cells {
        let c = frontier[rng.gen_range(0..frontier.len())];
        let (x, y) = (c % g, c / g);
        let (nx, ny) = match rng.gen_range(0..4) {
            0 => (x + 1, y),
            1 => (x - 1, y),
            2 => (x, y + 1),
            _ => (x, y - 1),
        };
        if nx == 0 || ny == 0 || nx == g - 1 || ny == g - 1 {
            continue;
        }
        let m = nx + g * ny;
        if !filled[m] {
            filled[m] = true;
            frontier.push(m);
            count += 1;
        }
    }
    // Pinch: two cells meeting only at a corner.
    for y in 0..g - 1 {
        for x in 0..g - 1 {
            let a = filled[x + g * y];
            let b = filled[x + 1 + g * y];
            let c = filled[x + g * (y + 1)];
            let d = filled[x + 1 + g * (y + 1)];
            if a == d && b == c && a != b {
                return None;
            }
        }
    }
    // Hole: an empty cell not reachable from the padding.
    let mut reach = vec![false; g * g];
    let mut queue = VecDeque::from([0usize]);
    reach[0] = true;
    while let Some(c) = queue.pop_front() {
        let (x, y) = (c % g, c / g);
        let mut push = |m: usize| {
            if !filled[m] && !reach[m] {
                reach[m] = true;
                queue.push_back(m);
            }
        };
        if x + 1 < g {
            push(c + 1);
        }
        if x > 0 {
            push(c - 1);
        }
        if y + 1 < g {
            push(c + g);
        }
        if y > 0 {
            push(c - g);
        }
    }
    if (0..g * g).any(|c| !filled[c] && !reach[c]) {
        return None;
    }
    let mut xs = vec![0 as Coord];
    let mut ys = vec![0 as Coord];
    for _ in 0..g {
        xs.push(xs.last().unwrap() + rng.gen_range(1..=5));
        ys.push(ys.last().unwrap() + rng.gen_range(1..=5));
    }
    // Directed boundary edges, counterclockwise around each filled cell;
    // shared edges cancel.
    let mut edges = HashSet::new();
    for c in (0..g * g).filter(|&c| filled[c]) {
        let (x, y) = (c % g, c / g);
        let corners = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)];
        for i in 0..4 {
            let (a, b) = (corners[i], corners[(i + 1) % 4]);
            if !edges.remove(&(b, a)) {
                edges.insert((a, b));
            }
        }
    }
    // Without pinches every boundary vertex has one outgoing edge.
    let next: HashMap<(usize, usize), (usize, usize)> = edges.into_iter().collect();
    let first = *next.keys().min().unwrap();
    let mut ring = vec![first];
    let mut cur = next[&first];
    while cur != first {
        ring.push(cur);
        cur = next[&cur];
    }
    let m = ring.len();
    let vertices: Vec<Point> = (0..m)
        .filter(|&i| {
            let (p, q, r) = (ring[(i + m - 1) % m], ring[i], ring[(i + 1) % m]);
            !((p.0 == q.0 && q.0 == r.0) || (p.1 == q.1 && q.1 == r.1))
        })
        .map(|i| Point::new(xs[ring[i].0], ys[ring[i].1]))
        .collect();
    Some(RectilinearPolygon::new(vertices))
}

/// Random robot placement inside the world's bounding box (with a margin),
/// retried a few times to find a free one.
fn random_endpoint(rng: &mut ChaCha8Rng, bbox: &Rect, d: Coord, obstacles: &[Obstacle]) -> (Coord, Coord) {
    let mut p = (0, 0);
    for _ in 0..20 {
        p = (rng.gen_range(bbox.x1..=bbox.x2), rng.gen_range(bbox.y1..=bbox.y2));
        if placement_free(Point::new(2 * p.0, 2 * p.1), 2 * d, obstacles) {
            break;
        }
    }
    p
}

/// Random queries for a world given in external units. Sides range over
/// `1..=max_d`; endpoints are free placements when one is found quickly.
pub fn random_queries(rects: &[Rect], count: usize, max_d: Coord, rng: &mut ChaCha8Rng) -> Vec<Query> {
    let obstacles: Vec<Obstacle> =
        rects.iter().enumerate().map(|(id, r)| Obstacle { id, rect: r.scaled(2, 2) }).collect();
    let bbox = rects
        .iter()
        .copied()
        .reduce(|a, b| Rect::new(a.x1.min(b.x1), a.y1.min(b.y1), a.x2.max(b.x2), a.y2.max(b.y2)))
        .unwrap_or(Rect::new(0, 0, 10, 10));
    let margin = max_d + 2;
    let bbox = Rect::new(bbox.x1 - margin, bbox.y1 - margin, bbox.x2 + margin, bbox.y2 + margin);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(1..=max_d);
            let s = random_endpoint(rng, &bbox, d, &obstacles);
            let t = random_endpoint(rng, &bbox, d, &obstacles);
            Query { s, t, d }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::decompose;
    use crate::normalize::interior_disjoint;

    #[test]
    fn deterministic() {
        for kind in WorldKind::ALL {
            assert_eq!(generate(kind, 50, 9), generate(kind, 50, 9));
            assert_ne!(generate(kind, 50, 9), generate(kind, 50, 10));
        }
    }

    #[test]
    fn counts_and_validity() {
        for kind in WorldKind::ALL {
            for n in [1, 2, 7, 100] {
                let w = generate(kind, n, 1);
                assert_eq!(w.len(), n, "{kind} {n}");
                assert!(w.iter().all(|r| r.has_positive_extent()));
            }
        }
        for kind in [WorldKind::Uniform, WorldKind::Cluster] {
            assert!(interior_disjoint(&generate(kind, 300, 4)));
        }
    }

    #[test]
    fn maze_has_touching_walls() {
        let w = generate(WorldKind::Maze, 40, 2);
        let touching = (0..w.len())
            .any(|i| (i + 1..w.len()).any(|j| w[i].intersects_closed(&w[j])));
        assert!(touching);
    }

    #[test]
    fn polygons_are_valid() {
        let mut rng = rng_for(5);
        for _ in 0..200 {
            let p = random_polygon(&mut rng, 40);
            assert!(p.vertices.len() <= 40);
            p.validate().unwrap();
            assert!(p.area() > 0);
            let rects = decompose(&p).unwrap();
            assert_eq!(rects.iter().map(|r| r.area()).sum::<i128>(), p.area());
        }
    }
}
