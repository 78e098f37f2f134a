//! Brute-force reference implementations used to check the fast pipeline.
//!
//! The feasibility oracle never looks at the Gabriel graph: it grows every
//! obstacle by half the robot side and runs a BFS over an exact doubled grid
//! of the expanded coordinates.

use std::collections::VecDeque;

use crate::gabriel::{gap_edge, GapEdge};
use crate::geometry::{Coord, Obstacle, Point};
use crate::query::Verdict;

/// Exact free-space grid for one robot size.
///
/// Coordinates are doubled once more so that `d / 2` stays integral for odd
/// `d`. Even indices are coordinate lines, odd indices the open intervals
/// between them.
struct OracleWorld {
    xs: Vec<Coord>,
    ys: Vec<Coord>,
    blocked: Vec<bool>,
    width: usize,
}

fn doubled_index(coords: &[Coord], v: Coord) -> usize {
    match coords.binary_search(&v) {
        Ok(k) => 2 * k,
        Err(k) => 2 * k - 1,
    }
}

impl OracleWorld {
    fn new(obstacles: &[Obstacle], d: Coord, extra: &[Point]) -> Self {
        let grown: Vec<[Coord; 4]> = obstacles
            .iter()
            .map(|o| {
                let r = o.rect;
                [2 * r.x1 - d, 2 * r.y1 - d, 2 * r.x2 + d, 2 * r.y2 + d]
            })
            .collect();
        let mut xs: Vec<Coord> = grown.iter().flat_map(|g| [g[0], g[2]]).collect();
        let mut ys: Vec<Coord> = grown.iter().flat_map(|g| [g[1], g[3]]).collect();
        xs.extend(extra.iter().map(|p| 2 * p.x));
        ys.extend(extra.iter().map(|p| 2 * p.y));
        for v in [&mut xs, &mut ys] {
            let lo = v.iter().copied().min().unwrap_or(0) - 1;
            let hi = v.iter().copied().max().unwrap_or(0) + 1;
            v.push(lo);
            v.push(hi);
            v.sort_unstable();
            v.dedup();
        }
        let width = 2 * xs.len() - 1;
        let height = 2 * ys.len() - 1;
        // 2D difference array over covered index ranges.
        let mut diff = vec![0i32; (width + 1) * (height + 1)];
        for g in &grown {
            let (cx1, cx2) = (doubled_index(&xs, g[0]) + 1, doubled_index(&xs, g[2]) - 1);
            let (cy1, cy2) = (doubled_index(&ys, g[1]) + 1, doubled_index(&ys, g[3]) - 1);
            if cx1 > cx2 || cy1 > cy2 {
                continue;
            }
            diff[cy1 * (width + 1) + cx1] += 1;
            diff[cy1 * (width + 1) + cx2 + 1] -= 1;
            diff[(cy2 + 1) * (width + 1) + cx1] -= 1;
            diff[(cy2 + 1) * (width + 1) + cx2 + 1] += 1;
        }
        let stride = width + 1;
        for y in 0..=height {
            for x in 1..=width {
                diff[y * stride + x] += diff[y * stride + x - 1];
            }
        }
        for y in 1..=height {
            for x in 0..=width {
                diff[y * stride + x] += diff[(y - 1) * stride + x];
            }
        }
        let mut blocked = vec![false; width * height];
        for y in 0..height {
            for x in 0..width {
                blocked[y * width + x] = diff[y * stride + x] > 0;
            }
        }
        Self { xs, ys, blocked, width }
    }

    fn cell(&self, p: Point) -> usize {
        doubled_index(&self.ys, 2 * p.y) * self.width + doubled_index(&self.xs, 2 * p.x)
    }

    fn reachable(&self, from: usize, to: usize) -> bool {
        if from == to {
            return true;
        }
        let height = self.blocked.len() / self.width;
        let mut seen = vec![false; self.blocked.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(c) = queue.pop_front() {
            let (x, y) = (c % self.width, c / self.width);
            let mut push = |n: usize| {
                if !seen[n] && !self.blocked[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            };
            if x > 0 {
                push(c - 1);
            }
            if x + 1 < self.width {
                push(c + 1);
            }
            if y > 0 {
                push(c - self.width);
            }
            if y + 1 < height {
                push(c + self.width);
            }
            if seen[to] {
                return true;
            }
        }
        false
    }
}

/// Ground-truth verdict by BFS over the expanded-obstacle arrangement.
pub fn oracle_feasible(obstacles: &[Obstacle], s: Point, t: Point, d: Coord) -> Verdict {
    oracle_feasible_refined(obstacles, s, t, d, &[])
}

/// Same as [`oracle_feasible`] with extra grid lines through `extra` points.
/// Extra lines refine the grid without changing the arrangement.
pub fn oracle_feasible_refined(
    obstacles: &[Obstacle],
    s: Point,
    t: Point,
    d: Coord,
    extra: &[Point],
) -> Verdict {
    let mut pts = vec![s, t];
    pts.extend_from_slice(extra);
    let world = OracleWorld::new(obstacles, d, &pts);
    let (cs, ct) = (world.cell(s), world.cell(t));
    if world.blocked[cs] {
        Verdict::InvalidStart
    } else if world.blocked[ct] {
        Verdict::InvalidGoal
    } else if world.reachable(cs, ct) {
        Verdict::Feasible
    } else {
        Verdict::Infeasible
    }
}

/// All pairs with positive capacity whose minimum pathway interior is free
/// of third obstacles, by exhaustive O(n^3) enumeration.
pub fn oracle_relevant_edges(obstacles: &[Obstacle]) -> Vec<GapEdge> {
    let mut out = Vec::new();
    for (a, oa) in obstacles.iter().enumerate() {
        for ob in &obstacles[a + 1..] {
            let Some(edge) = gap_edge(oa, ob) else { continue };
            let blocked = obstacles
                .iter()
                .any(|k| k.id != edge.i && k.id != edge.j && edge.pathway.interior_meets(&k.rect));
            if !blocked {
                out.push(edge);
            }
        }
    }
    out.sort_by_key(|e| (e.i, e.j));
    out
}

/// Third obstacles inside the pathway of the pair, i.e. the reasons a pair
/// is irrelevant. Empty for relevant or impassable pairs.
pub fn pathway_witnesses(obstacles: &[Obstacle], a: &Obstacle, b: &Obstacle) -> Vec<usize> {
    let Some(edge) = gap_edge(a, b) else { return Vec::new() };
    obstacles
        .iter()
        .filter(|k| k.id != a.id && k.id != b.id && edge.pathway.interior_meets(&k.rect))
        .map(|k| k.id)
        .collect()
}
