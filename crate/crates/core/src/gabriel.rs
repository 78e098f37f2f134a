//! Generalized Gabriel graph of gap constraints between rectangles.
//!
//! Candidate pairs come from a shadow-region sweep repeated under the eight
//! plane symmetries (at most `8n` pairs). A pair survives as an edge when no
//! third obstacle meets the open interior of its minimum pathway; that test
//! runs offline as a single sweep over compressed coordinates.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::geometry::{capacity, gaps, thin_edge_rect, Coord, Obstacle, Rect, Symmetry};

/// How the projections of the two obstacles relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    /// x-projections meet; the gap is vertical.
    OverlapX,
    /// y-projections meet; the gap is horizontal.
    OverlapY,
    /// Separated on both axes.
    Diagonal,
}

/// Direction a robot moves when it squeezes through a gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// A passable constraint between obstacles `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GapEdge {
    pub i: usize,
    pub j: usize,
    pub capacity: Coord,
    pub edge_rect: Rect,
    pub pathway: Rect,
    pub kind: EdgeKind,
    pub passage: Axis,
}

/// Whether the bottom side of `other` lies inside the shadow region of `anchor`.
///
/// The shadow region is the trapezoid left of `anchor.x1`, above `anchor.y1`
/// and under the 45-degree line `y = anchor.y2 + (anchor.x1 - x)`. The
/// diagonal bound is tightest at the right end of the bottom side.
pub fn shadow_contains(anchor: &Rect, other: &Rect) -> bool {
    other.x2 <= anchor.x1 && other.y1 >= anchor.y1 && other.y1 <= anchor.y2 + (anchor.x1 - other.x2)
}

/// One left-to-right sweep. Returns `(anchor, shadowed)` id pairs.
///
/// Obstacles sharing the same `x1` are processed as one batch: each of them
/// scans the active set, and the obstacles they shadow are retired only
/// after the whole batch, since an equal `x1` gives no precedence.
///
/// An anchor whose bottom is level with the shadowed obstacle's bottom does
/// not hide it from later anchors lying entirely below that line, so such an
/// obstacle is only marked: from then on it is reported just to anchors
/// whose top is at or under its bottom, and the first of those retires it.
pub fn shadow_sweep_pass(rects: &[(usize, Rect)]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..rects.len()).collect();
    order.sort_by_key(|&k| (rects[k].1.x1, rects[k].1.y1, rects[k].0));
    // (y1, x2, slot) -> marked. Among equal bottoms the leftmost comes first,
    // being the easiest to shadow.
    let mut active: BTreeMap<(Coord, Coord, usize), bool> = BTreeMap::new();
    let mut out = Vec::new();
    let mut retired = Vec::new();
    let mut marked = Vec::new();
    for batch in order.chunk_by(|&a, &b| rects[a].1.x1 == rects[b].1.x1) {
        for &k in batch {
            let (id, anchor) = rects[k];
            for (&key, &level) in active.range((anchor.y1, Coord::MIN, 0)..) {
                let slot = key.2;
                let other = &rects[slot].1;
                if !shadow_contains(&anchor, other) {
                    break;
                }
                if level && anchor.y2 > other.y1 {
                    continue;
                }
                out.push((id, rects[slot].0));
                if other.y1 == anchor.y1 {
                    marked.push(key);
                } else {
                    retired.push(key);
                }
            }
        }
        for key in marked.drain(..) {
            active.insert(key, true);
        }
        for key in retired.drain(..) {
            active.remove(&key);
        }
        active.extend(batch.iter().map(|&k| ((rects[k].1.y1, rects[k].1.x2, k), false)));
    }
    out
}

/// Deduplicated candidate pairs from all eight symmetric sweeps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Candidates {
    /// Unordered pairs as `(min, max)`, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// Emissions of each pass before deduplication.
    pub per_pass: [usize; 8],
}

pub fn build_candidates(obstacles: &[Obstacle]) -> Candidates {
    let mut set = BTreeSet::new();
    let mut per_pass = [0usize; 8];
    for (k, sym) in Symmetry::all().iter().enumerate() {
        let moved: Vec<(usize, Rect)> =
            obstacles.iter().map(|o| (o.id, sym.apply_rect(&o.rect))).collect();
        let pairs = shadow_sweep_pass(&moved);
        per_pass[k] = pairs.len();
        set.extend(pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))));
    }
    Candidates { pairs: set.into_iter().collect(), per_pass }
}

/// Kind and passage direction for a pair with positive capacity.
///
/// The bottleneck is the axis with the larger gap; ties make the y-gap the
/// bottleneck, so the passage is horizontal.
pub fn classify(a: &Rect, b: &Rect) -> Option<(EdgeKind, Axis)> {
    let g = gaps(a, b);
    if g.gx <= 0 && g.gy <= 0 {
        return None;
    }
    let kind = if g.gx <= 0 {
        EdgeKind::OverlapX
    } else if g.gy <= 0 {
        EdgeKind::OverlapY
    } else {
        EdgeKind::Diagonal
    };
    let passage = if g.gy >= g.gx { Axis::Horizontal } else { Axis::Vertical };
    Some((kind, passage))
}

/// The region a robot of maximal size sweeps while entering, crossing and
/// leaving the gap: the corridor between the obstacles, extended by the
/// capacity on both ends along the passage direction.
pub fn minimum_pathway(a: &Rect, b: &Rect) -> Option<Rect> {
    let s = capacity(a, b);
    if s <= 0 {
        return None;
    }
    let (_, passage) = classify(a, b)?;
    let (xlo, xhi) = (a.x1.max(b.x1), a.x2.min(b.x2));
    let (ylo, yhi) = (a.y1.max(b.y1), a.y2.min(b.y2));
    Some(match passage {
        Axis::Horizontal => Rect::new(xlo - s, yhi, xhi + s, ylo),
        Axis::Vertical => Rect::new(xhi, ylo - s, xlo, yhi + s),
    })
}

/// Full constraint record for a pair, or `None` when the pair is impassable.
pub fn gap_edge(a: &Obstacle, b: &Obstacle) -> Option<GapEdge> {
    let (lo, hi) = if a.id < b.id { (a, b) } else { (b, a) };
    let (kind, passage) = classify(&lo.rect, &hi.rect)?;
    Some(GapEdge {
        i: lo.id,
        j: hi.id,
        capacity: capacity(&lo.rect, &hi.rect),
        edge_rect: thin_edge_rect(&lo.rect, &hi.rect),
        pathway: minimum_pathway(&lo.rect, &hi.rect)?,
        kind,
        passage,
    })
}

/// Range-add / range-max tree over elementary intervals.
struct MaxTree {
    n: usize,
    max: Vec<i32>,
    add: Vec<i32>,
}

impl MaxTree {
    fn new(n: usize) -> Self {
        let size = 4 * n.max(1);
        Self { n, max: vec![0; size], add: vec![0; size] }
    }

    fn update(&mut self, l: usize, r: usize, v: i32) {
        self.update_rec(1, 0, self.n - 1, l, r, v);
    }

    fn update_rec(&mut self, node: usize, lo: usize, hi: usize, l: usize, r: usize, v: i32) {
        if r < lo || hi < l {
            return;
        }
        if l <= lo && hi <= r {
            self.max[node] += v;
            self.add[node] += v;
            return;
        }
        let mid = (lo + hi) / 2;
        self.update_rec(2 * node, lo, mid, l, r, v);
        self.update_rec(2 * node + 1, mid + 1, hi, l, r, v);
        self.max[node] = self.add[node] + self.max[2 * node].max(self.max[2 * node + 1]);
    }

    fn query(&self, l: usize, r: usize) -> i32 {
        self.query_rec(1, 0, self.n - 1, l, r)
    }

    fn query_rec(&self, node: usize, lo: usize, hi: usize, l: usize, r: usize) -> i32 {
        if r < lo || hi < l {
            return i32::MIN;
        }
        if l <= lo && hi <= r {
            return self.max[node];
        }
        let mid = (lo + hi) / 2;
        let best = self
            .query_rec(2 * node, lo, mid, l, r)
            .max(self.query_rec(2 * node + 1, mid + 1, hi, l, r));
        best + self.add[node]
    }
}

/// Range-add / range-sum over a Fenwick pair.
struct SumTree {
    b1: Vec<i64>,
    b2: Vec<i64>,
}

impl SumTree {
    fn new(n: usize) -> Self {
        Self { b1: vec![0; n + 2], b2: vec![0; n + 2] }
    }

    fn point_add(tree: &mut [i64], mut i: usize, v: i64) {
        i += 1;
        while i < tree.len() {
            tree[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    fn prefix_raw(tree: &[i64], mut i: usize) -> i64 {
        let mut s = 0;
        while i > 0 {
            s += tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }

    fn range_add(&mut self, l: usize, r: usize, v: i64) {
        Self::point_add(&mut self.b1, l, v);
        Self::point_add(&mut self.b1, r + 1, -v);
        Self::point_add(&mut self.b2, l, v * l as i64);
        Self::point_add(&mut self.b2, r + 1, -v * (r as i64 + 1));
    }

    /// Sum over `[0, i)`.
    fn prefix(&self, i: usize) -> i64 {
        Self::prefix_raw(&self.b1, i) * i as i64 - Self::prefix_raw(&self.b2, i)
    }

    fn range_sum(&self, l: usize, r: usize) -> i64 {
        self.prefix(r + 1) - self.prefix(l)
    }
}

/// For every query rectangle, whether some obstacle meets its open interior.
///
/// Sweeps x once. An obstacle meets an open query `(qx1, qx2) x (qy1, qy2)`
/// either because it is active just right of `qx1`, or because its left side
/// starts strictly inside `(qx1, qx2)`. The first case is a range-max over
/// the active set; the second is a difference of range sums over all left
/// sides seen so far.
pub fn any_obstacle_meets_interior(obstacles: &[Obstacle], queries: &[Rect]) -> Vec<bool> {
    let mut hit = vec![false; queries.len()];
    if obstacles.is_empty() || queries.is_empty() {
        return hit;
    }
    let mut ys: Vec<Coord> = obstacles
        .iter()
        .flat_map(|o| [o.rect.y1, o.rect.y2])
        .chain(queries.iter().flat_map(|q| [q.y1, q.y2]))
        .collect();
    ys.sort_unstable();
    ys.dedup();
    let yi = |y: Coord| ys.binary_search(&y).expect("compressed y");
    let cells = ys.len().saturating_sub(1).max(1);

    #[derive(Clone, Copy)]
    enum Ev {
        QueryEnd(usize),
        ObstacleEnd(usize),
        ObstacleStart(usize),
        QueryStart(usize),
    }
    let rank = |e: &Ev| match e {
        Ev::QueryEnd(_) => 0,
        Ev::ObstacleEnd(_) => 1,
        Ev::ObstacleStart(_) => 2,
        Ev::QueryStart(_) => 3,
    };
    let mut events: Vec<(Coord, u8, Ev)> = Vec::with_capacity(2 * (obstacles.len() + queries.len()));
    for (k, o) in obstacles.iter().enumerate() {
        events.push((o.rect.x1, 0, Ev::ObstacleStart(k)));
        events.push((o.rect.x2, 0, Ev::ObstacleEnd(k)));
    }
    for (k, q) in queries.iter().enumerate() {
        events.push((q.x1, 0, Ev::QueryStart(k)));
        events.push((q.x2, 0, Ev::QueryEnd(k)));
    }
    for e in events.iter_mut() {
        e.1 = rank(&e.2);
    }
    events.sort_by_key(|e| (e.0, e.1));

    let obstacle_range = |r: &Rect| (yi(r.y1), yi(r.y2) - 1);
    let mut active = MaxTree::new(cells);
    let mut starts = SumTree::new(cells);
    let mut at_start = vec![0i64; queries.len()];
    for &(_, _, ev) in &events {
        match ev {
            Ev::QueryEnd(k) => {
                let (l, r) = obstacle_range(&queries[k]);
                if starts.range_sum(l, r) > at_start[k] {
                    hit[k] = true;
                }
            }
            Ev::ObstacleEnd(k) => {
                let (l, r) = obstacle_range(&obstacles[k].rect);
                active.update(l, r, -1);
            }
            Ev::ObstacleStart(k) => {
                let (l, r) = obstacle_range(&obstacles[k].rect);
                active.update(l, r, 1);
                starts.range_add(l, r, 1);
            }
            Ev::QueryStart(k) => {
                let (l, r) = obstacle_range(&queries[k]);
                if active.query(l, r) > 0 {
                    hit[k] = true;
                }
                at_start[k] = starts.range_sum(l, r);
            }
        }
    }
    hit
}

/// Keeps the candidates whose minimum pathway is free of third obstacles.
///
/// Candidates with zero capacity never become edges: their thin edge lies
/// inside the union of the two closed obstacles already.
pub fn relevance_filter(candidates: &[(usize, usize)], obstacles: &[Obstacle]) -> Vec<GapEdge> {
    let by_id: HashMap<usize, &Obstacle> = obstacles.iter().map(|o| (o.id, o)).collect();
    let edges: Vec<GapEdge> = candidates
        .iter()
        .filter_map(|&(a, b)| gap_edge(by_id[&a], by_id[&b]))
        .collect();
    let pathways: Vec<Rect> = edges.iter().map(|e| e.pathway).collect();
    let blocked = any_obstacle_meets_interior(obstacles, &pathways);
    let mut out: Vec<GapEdge> = edges
        .into_iter()
        .zip(blocked)
        .filter(|(_, b)| !b)
        .map(|(e, _)| e)
        .collect();
    out.sort_by_key(|e| (e.i, e.j));
    out
}

/// Result of the whole graph construction.
#[derive(Clone, Debug, Default)]
pub struct GabrielGraph {
    pub candidates: Candidates,
    pub edges: Vec<GapEdge>,
}

/// Candidate generation relies on the obstacles being interior-disjoint;
/// overlapping input should go through
/// [`disjoint_union`](crate::normalize::disjoint_union) first.
pub fn build_gabriel(obstacles: &[Obstacle]) -> GabrielGraph {
    let candidates = build_candidates(obstacles);
    let edges = relevance_filter(&candidates.pairs, obstacles);
    GabrielGraph { candidates, edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::obstacles_from_internal;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shadow_examples() {
        // Scaled by two so the 4.5 coordinate stays integral.
        let anchor = Rect::new(10, 0, 24, 6);
        assert!(shadow_contains(&anchor, &Rect::new(-16, 8, 4, 18)));
        assert!(!shadow_contains(&anchor, &Rect::new(30, 8, 40, 18)));
        assert!(!shadow_contains(&anchor, &Rect::new(-16, 8, 9, 18)));
    }

    #[test]
    fn sweep_small_cases() {
        assert!(shadow_sweep_pass(&[(0, Rect::new(0, 0, 1, 1))]).is_empty());
        let rects = [(0, Rect::new(0, 4, 2, 6)), (1, Rect::new(4, 0, 6, 5))];
        assert_eq!(shadow_sweep_pass(&rects), vec![(1, 0)]);
        // Level bottoms: the middle obstacle does not hide the left one
        // from the one below-right, but does hide it from a level one.
        let rects = [
            (0, Rect::new(0, 10, 2, 12)),
            (1, Rect::new(4, 10, 6, 14)),
            (2, Rect::new(8, 4, 10, 8)),
            (3, Rect::new(8, 10, 9, 11)),
        ];
        assert_eq!(shadow_sweep_pass(&rects), vec![(1, 0), (2, 0), (2, 1), (3, 1)]);
    }

    #[test]
    fn candidate_small_cases() {
        assert!(build_candidates(&[]).pairs.is_empty());
        let one = obstacles_from_internal(&[Rect::new(0, 0, 2, 2)]);
        assert!(build_candidates(&one).pairs.is_empty());
        let diag = obstacles_from_internal(&[Rect::new(0, 0, 2, 2), Rect::new(5, 6, 7, 9)]);
        assert_eq!(build_candidates(&diag).pairs, vec![(0, 1)]);
    }

    #[test]
    fn sweep_matches_linear_simulation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut rects: Vec<(usize, Rect)> = Vec::new();
            for _ in 0..30 {
                let (x, y) = (rng.gen_range(0..30) * 2, rng.gen_range(0..30) * 2);
                let r = Rect::new(x, y, x + rng.gen_range(1..6) * 2, y + rng.gen_range(1..6) * 2);
                if rects.iter().all(|(_, o)| !r.interior_meets(o)) {
                    rects.push((rects.len(), r));
                }
            }
            let pairs = shadow_sweep_pass(&rects);
            // Re-simulate with linear scans over the live set.
            let mut order: Vec<usize> = (0..rects.len()).collect();
            order.sort_by_key(|&k| (rects[k].1.x1, rects[k].1.y1, rects[k].0));
            let mut live: Vec<(usize, bool)> = Vec::new();
            let mut expect = Vec::new();
            for batch in order.chunk_by(|&a, &b| rects[a].1.x1 == rects[b].1.x1) {
                let mut retired = Vec::new();
                let mut level = Vec::new();
                for &k in batch {
                    let anchor = rects[k].1;
                    let mut sorted: Vec<(usize, bool)> = live.clone();
                    sorted.sort_by_key(|&(s, _)| (rects[s].1.y1, rects[s].1.x2, s));
                    for (s, marked) in sorted {
                        let other = rects[s].1;
                        if other.y1 < anchor.y1 {
                            continue;
                        }
                        if !shadow_contains(&anchor, &other) {
                            break;
                        }
                        if marked && anchor.y2 > other.y1 {
                            continue;
                        }
                        expect.push((rects[k].0, rects[s].0));
                        if other.y1 == anchor.y1 {
                            level.push(s);
                        } else {
                            retired.push(s);
                        }
                    }
                }
                for entry in live.iter_mut() {
                    entry.1 |= level.contains(&entry.0);
                }
                live.retain(|x| !retired.contains(&x.0));
                live.extend(batch.iter().map(|&k| (k, false)));
            }
            assert_eq!(pairs, expect);
        }
    }

    #[test]
    fn pathway_examples() {
        assert_eq!(
            minimum_pathway(&Rect::new(0, 1, 2, 2), &Rect::new(3, 5, 5, 7)),
            Some(Rect::new(0, 2, 5, 5))
        );
        // Middle pair scaled by two: [7,9]x[1,3] and [6,9.5]x[5,7].
        assert_eq!(
            minimum_pathway(&Rect::new(14, 2, 18, 6), &Rect::new(12, 10, 19, 14)),
            Some(Rect::new(10, 6, 22, 10))
        );
        assert_eq!(minimum_pathway(&Rect::new(0, 0, 4, 4), &Rect::new(2, 2, 6, 6)), None);
    }

    #[test]
    fn collinear_filter() {
        let obs = obstacles_from_internal(&[
            Rect::new(0, 0, 1, 1),
            Rect::new(4, 0, 5, 1),
            Rect::new(2, 0, 3, 1),
        ]);
        let edges = relevance_filter(&[(0, 1), (0, 2), (1, 2)], &obs);
        let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 2), (1, 2)]);
        let two = obstacles_from_internal(&[Rect::new(0, 0, 1, 1), Rect::new(4, 0, 5, 1)]);
        assert_eq!(relevance_filter(&[(0, 1)], &two).len(), 1);
    }

    #[test]
    fn interior_query_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let rects: Vec<Rect> = (0..25)
                .map(|_| {
                    let (x, y) = (rng.gen_range(0..40), rng.gen_range(0..40));
                    Rect::new(x, y, x + rng.gen_range(1..8), y + rng.gen_range(1..8))
                })
                .collect();
            let obs = obstacles_from_internal(&rects);
            let queries: Vec<Rect> = (0..40)
                .map(|_| {
                    let (x, y) = (rng.gen_range(-5..45), rng.gen_range(-5..45));
                    Rect::new(x, y, x + rng.gen_range(1..10), y + rng.gen_range(1..10))
                })
                .collect();
            let fast = any_obstacle_meets_interior(&obs, &queries);
            for (q, f) in queries.iter().zip(fast) {
                assert_eq!(f, rects.iter().any(|r| q.interior_meets(r)), "{q:?}");
            }
        }
    }
}
