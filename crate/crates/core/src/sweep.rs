//! Column sweep over a stack of coverage layers.
//!
//! Cells along the sweep line carry two coverage counters (walls and seals).
//! The sweep keeps the current column as maximal runs of cells with the same
//! [`Class`] and reports which runs disappeared and which appeared after
//! each batch of coverage changes. Runs that survive a batch unchanged keep
//! their tag. Optionally only free runs are kept, so that the tag of a
//! covered run never spans a change of the items covering it.

use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Class {
    Free,
    Wall,
    /// Covered by exactly one seal.
    Seal,
    /// Covered by two or more seals.
    SealMulti,
}

/// Lazy segment tree with range add over two counters, tracking the min and
/// max of each so that runs of uniform class can be enumerated.
struct CoverTree {
    n: usize,
    min: Vec<[i32; 2]>,
    max: Vec<[i32; 2]>,
    add: Vec<[i32; 2]>,
}

impl CoverTree {
    fn new(n: usize) -> Self {
        let size = 4 * n.max(1);
        Self { n, min: vec![[0; 2]; size], max: vec![[0; 2]; size], add: vec![[0; 2]; size] }
    }

    fn update(&mut self, l: usize, r: usize, layer: usize, v: i32) {
        self.update_rec(1, 0, self.n - 1, l, r, layer, v);
    }

    #[allow(clippy::too_many_arguments)]
    fn update_rec(&mut self, node: usize, lo: usize, hi: usize, l: usize, r: usize, layer: usize, v: i32) {
        if r < lo || hi < l {
            return;
        }
        if l <= lo && hi <= r {
            self.min[node][layer] += v;
            self.max[node][layer] += v;
            self.add[node][layer] += v;
            return;
        }
        let mid = (lo + hi) / 2;
        self.update_rec(2 * node, lo, mid, l, r, layer, v);
        self.update_rec(2 * node + 1, mid + 1, hi, l, r, layer, v);
        for k in 0..2 {
            self.min[node][k] = self.add[node][k] + self.min[2 * node][k].min(self.min[2 * node + 1][k]);
            self.max[node][k] = self.add[node][k] + self.max[2 * node][k].max(self.max[2 * node + 1][k]);
        }
    }

    fn uniform(min: [i32; 2], max: [i32; 2]) -> Option<Class> {
        if min[0] > 0 {
            Some(Class::Wall)
        } else if max[0] == 0 && min[1] == 1 && max[1] == 1 {
            Some(Class::Seal)
        } else if max[0] == 0 && min[1] >= 2 {
            Some(Class::SealMulti)
        } else if max[0] == 0 && max[1] == 0 {
            Some(Class::Free)
        } else {
            None
        }
    }

    /// Appends the maximal runs inside `[l, r]` as `(start, end, class)`.
    fn runs(&self, l: usize, r: usize, out: &mut Vec<(usize, usize, Class)>) {
        self.runs_rec(1, 0, self.n - 1, l, r, [0; 2], out);
    }

    #[allow(clippy::too_many_arguments)]
    fn runs_rec(
        &self,
        node: usize,
        lo: usize,
        hi: usize,
        l: usize,
        r: usize,
        carry: [i32; 2],
        out: &mut Vec<(usize, usize, Class)>,
    ) {
        if r < lo || hi < l {
            return;
        }
        let min = [self.min[node][0] + carry[0], self.min[node][1] + carry[1]];
        let max = [self.max[node][0] + carry[0], self.max[node][1] + carry[1]];
        if let Some(class) = Self::uniform(min, max) {
            let (s, e) = (lo.max(l), hi.min(r));
            match out.last_mut() {
                Some(last) if last.2 == class && last.1 + 1 == s => last.1 = e,
                _ => out.push((s, e, class)),
            }
            return;
        }
        let next = [carry[0] + self.add[node][0], carry[1] + self.add[node][1]];
        let mid = (lo + hi) / 2;
        self.runs_rec(2 * node, lo, mid, l, r, next, out);
        self.runs_rec(2 * node + 1, mid + 1, hi, l, r, next, out);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Run {
    pub start: usize,
    pub end: usize,
    pub class: Class,
    pub tag: u32,
}

/// Coverage change of `delta` on cells `[lo, hi]` of `layer` (0 = wall, 1 = seal).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Change {
    pub lo: usize,
    pub hi: usize,
    pub layer: usize,
    pub delta: i32,
}

pub(crate) struct ColumnSweep {
    tree: CoverTree,
    runs: BTreeMap<usize, Run>,
    cells: usize,
    keep_covered: bool,
}

impl ColumnSweep {
    /// A column of `cells` free cells forming one run tagged `tag`.
    /// `keep_covered` lets unchanged wall and seal runs keep their tags.
    pub fn new(cells: usize, tag: u32, keep_covered: bool) -> Self {
        let mut runs = BTreeMap::new();
        runs.insert(0, Run { start: 0, end: cells - 1, class: Class::Free, tag });
        Self { tree: CoverTree::new(cells), runs, cells, keep_covered }
    }

    fn run_at(&self, cell: usize) -> Run {
        *self.runs.range(..=cell).next_back().expect("runs cover the column").1
    }

    /// Applies `changes` and rebuilds the affected runs. Returns the runs
    /// that disappeared and the runs that appeared; `tag_for` names each new
    /// run. A run identical to one it replaces keeps its tag and is reported
    /// in neither list, unless it is covered and covered runs are not kept.
    pub fn apply(
        &mut self,
        changes: &[Change],
        mut tag_for: impl FnMut(&Run) -> u32,
    ) -> (Vec<Run>, Vec<Run>) {
        if changes.is_empty() {
            return (Vec::new(), Vec::new());
        }
        // Expand each change to whole runs plus the neighbouring cells so
        // that re-enumerated runs are maximal.
        let mut spans: Vec<(usize, usize)> = changes
            .iter()
            .map(|c| {
                let lo = self.run_at(c.lo.saturating_sub(1)).start;
                let hi = self.run_at((c.hi + 1).min(self.cells - 1)).end;
                (lo, hi)
            })
            .collect();
        spans.sort_unstable();
        let mut merged: Vec<(usize, usize)> = Vec::with_capacity(spans.len());
        for (lo, hi) in spans {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        for c in changes {
            self.tree.update(c.lo, c.hi, c.layer, c.delta);
        }
        let mut removed = Vec::new();
        let mut added = Vec::new();
        let mut fresh = Vec::new();
        for (lo, hi) in merged {
            let old: Vec<Run> = self.runs.range(lo..=hi).map(|(_, r)| *r).collect();
            for r in &old {
                self.runs.remove(&r.start);
            }
            fresh.clear();
            self.tree.runs(lo, hi, &mut fresh);
            let mut kept = vec![false; old.len()];
            for &(start, end, class) in &fresh {
                let keep = class == Class::Free || self.keep_covered;
                let same = old
                    .iter()
                    .position(|r| keep && r.start == start && r.end == end && r.class == class);
                let run = match same {
                    Some(k) => {
                        kept[k] = true;
                        old[k]
                    }
                    None => {
                        let mut run = Run { start, end, class, tag: 0 };
                        run.tag = tag_for(&run);
                        added.push(run);
                        run
                    }
                };
                self.runs.insert(start, run);
            }
            removed.extend(old.iter().zip(kept).filter(|(_, k)| !k).map(|(r, _)| *r));
        }
        (removed, added)
    }

    /// Runs directly below and above the run starting at `start`.
    pub fn neighbours(&self, start: usize) -> (Option<Run>, Option<Run>) {
        let below = self.runs.range(..start).next_back().map(|(_, r)| *r);
        let above = self.runs.range(start + 1..).next().map(|(_, r)| *r);
        (below, above)
    }

    pub fn current_runs(&self) -> impl Iterator<Item = &Run> {
        self.runs.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wall_then_release() {
        let mut sweep = ColumnSweep::new(10, 0, false);
        let mut next = 1;
        let (removed, added) = sweep.apply(&[Change { lo: 3, hi: 5, layer: 0, delta: 1 }], |_| {
            next += 1;
            next
        });
        assert_eq!(removed.len(), 1);
        assert_eq!(
            added.iter().map(|r| (r.start, r.end, r.class)).collect::<Vec<_>>(),
            vec![(0, 2, Class::Free), (3, 5, Class::Wall), (6, 9, Class::Free)]
        );
        // Seal under the wall changes nothing visible; seal beside it does.
        // The touched wall run is replaced by an identical one.
        let (removed, added) = sweep.apply(&[Change { lo: 4, hi: 7, layer: 1, delta: 1 }], |_| 0);
        assert_eq!(removed.len(), 2);
        assert_eq!(added.iter().map(|r| (r.start, r.end, r.class)).collect::<Vec<_>>(), vec![
            (3, 5, Class::Wall),
            (6, 7, Class::Seal),
            (8, 9, Class::Free)
        ]);
        let (_, added) = sweep.apply(&[Change { lo: 7, hi: 8, layer: 1, delta: 1 }], |_| 0);
        assert!(added.iter().any(|r| (r.start, r.end, r.class) == (7, 7, Class::SealMulti)));
        sweep.apply(&[Change { lo: 7, hi: 8, layer: 1, delta: -1 }], |_| 0);
        sweep.apply(
            &[
                Change { lo: 3, hi: 5, layer: 0, delta: -1 },
                Change { lo: 4, hi: 7, layer: 1, delta: -1 },
            ],
            |_| 0,
        );
        let runs: Vec<_> = sweep.current_runs().map(|r| (r.start, r.end, r.class)).collect();
        assert_eq!(runs, vec![(0, 9, Class::Free)]);
    }
}
