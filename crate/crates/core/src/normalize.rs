//! Rewrites a set of possibly overlapping rectangles as interior-disjoint
//! rectangles with the same union.

use std::collections::HashMap;

use crate::geometry::{Coord, Rect};
use crate::spatial::PackedRTree;
use crate::sweep::{Change, Class, ColumnSweep};

/// Union of `rects` as interior-disjoint rectangles, sorted by `(x1, y1)`.
///
/// Sweeps left to right over elementary y-intervals. Each maximal covered
/// run of the cross-section becomes a rectangle that lasts until the run
/// changes. Rectangles without positive extent are ignored.
pub fn disjoint_union(rects: &[Rect]) -> Vec<Rect> {
    let rects: Vec<&Rect> = rects.iter().filter(|r| r.has_positive_extent()).collect();
    if rects.is_empty() {
        return Vec::new();
    }
    let mut ys: Vec<Coord> = rects.iter().flat_map(|r| [r.y1, r.y2]).collect();
    ys.sort_unstable();
    ys.dedup();
    let cell = |y: Coord| ys.binary_search(&y).expect("known coordinate");

    let mut events: Vec<(Coord, Change)> = Vec::with_capacity(2 * rects.len());
    for r in &rects {
        let (lo, hi) = (cell(r.y1), cell(r.y2) - 1);
        events.push((r.x1, Change { lo, hi, layer: 0, delta: 1 }));
        events.push((r.x2, Change { lo, hi, layer: 0, delta: -1 }));
    }
    events.sort_by_key(|e| e.0);

    let mut sweep = ColumnSweep::new(ys.len() - 1, 0, true);
    // Open covered runs by tag, with the x where they started.
    let mut open: HashMap<u32, Coord> = HashMap::new();
    let mut next_tag = 1u32;
    let mut out = Vec::new();
    let mut changes = Vec::new();
    for batch in events.chunk_by(|a, b| a.0 == b.0) {
        let x = batch[0].0;
        changes.clear();
        changes.extend(batch.iter().map(|e| e.1));
        let (removed, added) = sweep.apply(&changes, |_| {
            next_tag += 1;
            next_tag
        });
        for run in removed.iter().filter(|r| r.class == Class::Wall) {
            let x1 = open.remove(&run.tag).expect("run was opened");
            out.push(Rect::new(x1, ys[run.start], x, ys[run.end + 1]));
        }
        for run in added.iter().filter(|r| r.class == Class::Wall) {
            open.insert(run.tag, x);
        }
    }
    debug_assert!(open.is_empty());
    out.sort_by_key(|r| (r.x1, r.y1));
    out
}

/// True when no two rectangles share interior points.
pub fn interior_disjoint(rects: &[Rect]) -> bool {
    let tree = PackedRTree::new(rects.to_vec());
    rects.iter().enumerate().all(|(i, a)| {
        let mut clash = false;
        tree.search(
            |r| a.interior_meets(r),
            |k| {
                clash = k != i && rects[k].interior_meets(a);
                !clash
            },
        );
        !clash
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use proptest::prelude::*;

    #[test]
    fn disjointness_check() {
        assert!(interior_disjoint(&[]));
        assert!(interior_disjoint(&[Rect::new(0, 0, 2, 2), Rect::new(2, 0, 4, 2), Rect::new(0, 2, 2, 4)]));
        assert!(!interior_disjoint(&[Rect::new(0, 0, 2, 2), Rect::new(5, 5, 6, 6), Rect::new(1, 1, 3, 3)]));
        assert!(!interior_disjoint(&[Rect::new(0, 0, 2, 2), Rect::new(0, 0, 2, 2)]));
    }

    #[test]
    fn overlapping_pair() {
        let out = disjoint_union(&[Rect::new(0, 0, 4, 4), Rect::new(2, 2, 6, 6)]);
        assert!(interior_disjoint(&out));
        assert_eq!(out.iter().map(Rect::area).sum::<i128>(), 28);
    }

    #[test]
    fn touching_pair_merges() {
        let out = disjoint_union(&[Rect::new(0, 0, 2, 2), Rect::new(2, 0, 4, 2)]);
        assert_eq!(out, vec![Rect::new(0, 0, 4, 2)]);
    }

    #[test]
    fn contained_rectangle_vanishes() {
        let out = disjoint_union(&[Rect::new(0, 0, 10, 10), Rect::new(2, 2, 3, 3)]);
        assert_eq!(out, vec![Rect::new(0, 0, 10, 10)]);
    }

    fn arb_rects() -> impl Strategy<Value = Vec<Rect>> {
        prop::collection::vec((0i64..20, 0i64..20, 1i64..8, 1i64..8), 0..12)
            .prop_map(|v| v.into_iter().map(|(x, y, w, h)| Rect::new(x, y, x + w, y + h)).collect())
    }

    proptest! {
        #[test]
        fn same_union(rects in arb_rects()) {
            let out = disjoint_union(&rects);
            prop_assert!(interior_disjoint(&out));
            // Compare membership of cell centres on a doubled grid.
            for x in (-1..60).step_by(2) {
                for y in (-1..60).step_by(2) {
                    let p = Point::new(x, y);
                    let inside = |r: &Rect| r.scaled(2, 2).contains_open(p);
                    prop_assert_eq!(rects.iter().any(inside), out.iter().any(inside), "cell {:?}", p);
                }
            }
        }
    }
}
