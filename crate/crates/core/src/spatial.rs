//! Static packed R-tree (sort-tile-recursive) over rectangles.

use crate::geometry::{Coord, Rect};

const FANOUT: usize = 16;

#[derive(Clone, Debug, Default)]
pub struct PackedRTree {
    /// Levels from leaves (0) upwards. Each node stores its bounding box and
    /// the range of children in the level below (or of items for leaves).
    levels: Vec<Vec<(Rect, u32, u32)>>,
    /// Item indices in leaf order.
    order: Vec<u32>,
    boxes: Vec<Rect>,
}

fn bound(rects: impl Iterator<Item = Rect>) -> Rect {
    rects
        .reduce(|a, b| Rect::new(a.x1.min(b.x1), a.y1.min(b.y1), a.x2.max(b.x2), a.y2.max(b.y2)))
        .expect("non-empty group")
}

impl PackedRTree {
    pub fn new(boxes: Vec<Rect>) -> Self {
        let mut order: Vec<u32> = (0..boxes.len() as u32).collect();
        let key = |r: &Rect| (r.x1 as i128 + r.x2 as i128, r.y1 as i128 + r.y2 as i128);
        order.sort_by_key(|&k| key(&boxes[k as usize]).0);
        let leaves = boxes.len().div_ceil(FANOUT);
        let slices = (leaves as f64).sqrt().ceil().max(1.0) as usize;
        let per_slice = (slices * FANOUT).max(1);
        for slice in order.chunks_mut(per_slice) {
            slice.sort_by_key(|&k| key(&boxes[k as usize]).1);
        }
        let mut levels = Vec::new();
        let mut level: Vec<(Rect, u32, u32)> = (0..order.len())
            .step_by(FANOUT)
            .map(|s| {
                let e = (s + FANOUT).min(order.len());
                (bound(order[s..e].iter().map(|&k| boxes[k as usize])), s as u32, e as u32)
            })
            .collect();
        while level.len() > 1 {
            let up = (0..level.len())
                .step_by(FANOUT)
                .map(|s| {
                    let e = (s + FANOUT).min(level.len());
                    (bound(level[s..e].iter().map(|n| n.0)), s as u32, e as u32)
                })
                .collect();
            levels.push(level);
            level = up;
        }
        levels.push(level);
        Self { levels, order, boxes }
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn boxes(&self) -> &[Rect] {
        &self.boxes
    }

    /// Visits every item whose box passes `hit`; `hit` is also applied to
    /// node boxes, so it must be monotone (true for a box whenever true for
    /// something inside it). The visitor returns `false` to stop early.
    pub fn search(&self, hit: impl Fn(&Rect) -> bool, mut visit: impl FnMut(usize) -> bool) {
        if self.boxes.is_empty() {
            return;
        }
        let top = self.levels.len() - 1;
        let mut stack: Vec<(usize, u32)> = (0..self.levels[top].len() as u32).map(|k| (top, k)).collect();
        while let Some((lvl, k)) = stack.pop() {
            let (bbox, s, e) = self.levels[lvl][k as usize];
            if !hit(&bbox) {
                continue;
            }
            if lvl == 0 {
                for &item in &self.order[s as usize..e as usize] {
                    if hit(&self.boxes[item as usize]) && !visit(item as usize) {
                        return;
                    }
                }
            } else {
                stack.extend((s..e).map(|c| (lvl - 1, c)));
            }
        }
    }

    /// First item (in search order) whose closed box contains `(x, y)`.
    pub fn find_containing(&self, x: Coord, y: Coord) -> Option<usize> {
        let mut found = None;
        self.search(
            |r| r.x1 <= x && x <= r.x2 && r.y1 <= y && y <= r.y2,
            |k| {
                found = Some(k);
                false
            },
        );
        found
    }

    /// Whether any item's closed box meets the open rectangle `open`.
    pub fn any_meets_open(&self, open: &Rect) -> bool {
        let mut any = false;
        self.search(
            |r| open.interior_meets(r),
            |_| {
                any = true;
                false
            },
        );
        any
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [0usize, 1, 5, 17, 300] {
            let boxes: Vec<Rect> = (0..n)
                .map(|_| {
                    let (x, y) = (rng.gen_range(0..200), rng.gen_range(0..200));
                    Rect::new(x, y, x + rng.gen_range(1..20), y + rng.gen_range(1..20))
                })
                .collect();
            let tree = PackedRTree::new(boxes.clone());
            for _ in 0..200 {
                let (x, y) = (rng.gen_range(-5..225), rng.gen_range(-5..225));
                let q = Rect::new(x, y, x + rng.gen_range(1..15), y + rng.gen_range(1..15));
                assert_eq!(tree.any_meets_open(&q), boxes.iter().any(|b| q.interior_meets(b)));
                let hit = tree.find_containing(x, y);
                let any = boxes.iter().any(|b| b.contains_closed(crate::geometry::Point::new(x, y)));
                assert_eq!(hit.is_some(), any);
                if let Some(k) = hit {
                    assert!(boxes[k].contains_closed(crate::geometry::Point::new(x, y)));
                }
            }
        }
    }
}
