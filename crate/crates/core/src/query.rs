//! Feasibility index: preprocessing pipeline, queries and persistence.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsu::PersistentDsu;
use crate::gabriel::{build_gabriel, GapEdge};
use crate::geometry::{
    ingest_world_scaled, obstacles_from_internal, square_clear_of, AxisScale, Coord, GeometryError,
    Obstacle, Point, RawShape,
};
use crate::normalize::{disjoint_union, interior_disjoint};
use crate::partition::{DualEdge, Location, RegionPartition};
use crate::spatial::PackedRTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Feasible,
    Infeasible,
    InvalidStart,
    InvalidGoal,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Feasible => "FEASIBLE",
            Verdict::Infeasible => "INFEASIBLE",
            Verdict::InvalidStart => "INVALID_START",
            Verdict::InvalidGoal => "INVALID_GOAL",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A query in external units: robot of side `d` (its x extent for scaled
/// worlds) from `s` to `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub s: (Coord, Coord),
    pub t: (Coord, Coord),
    pub d: Coord,
}

#[derive(Debug, Error)]
pub enum IndexError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("robot side must be positive, got {0}")]
    NonPositiveSide(Coord),
    #[error("index file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Counters collected while answering one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryTrace {
    pub hops: u32,
    pub time: u32,
}

/// Build statistics.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    pub input_obstacles: usize,
    pub disjoint_obstacles: usize,
    pub candidates: usize,
    pub candidates_per_pass: [usize; 8],
    pub gap_edges: usize,
    pub regions: usize,
    pub dual_edges: usize,
}

pub const INDEX_FORMAT: &str = "rectpass-index";
pub const INDEX_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FeasibilityIndex {
    format: String,
    version: u32,
    pub scale: AxisScale,
    /// Obstacles as ingested, in internal half-units.
    pub obstacles: Vec<Obstacle>,
    /// Interior-disjoint rectangles with the same union: the input itself
    /// when already disjoint, otherwise a rewrite. The graph and the
    /// partition refer to these ids.
    pub disjoint: Vec<Obstacle>,
    pub edges: Vec<GapEdge>,
    pub partition: RegionPartition,
    /// Dual edges in union order: capacity descending, ties by gap edge index.
    pub timeline: Vec<DualEdge>,
    pub dsu: PersistentDsu,
    pub stats: BuildStats,
    #[serde(skip)]
    blockers: PackedRTree,
}

impl FeasibilityIndex {
    /// Builds the index for obstacles already in internal half-units.
    pub fn preprocess(obstacles: &[Obstacle]) -> Self {
        Self::preprocess_scaled(obstacles, AxisScale::UNIT)
    }

    pub fn from_shapes(shapes: &[RawShape], scale: AxisScale) -> Result<Self, IndexError> {
        Ok(Self::preprocess_scaled(&ingest_world_scaled(shapes, scale)?, scale))
    }

    fn preprocess_scaled(obstacles: &[Obstacle], scale: AxisScale) -> Self {
        let rects: Vec<_> = obstacles.iter().map(|o| o.rect).collect();
        let disjoint = if interior_disjoint(&rects) {
            obstacles.iter().enumerate().map(|(id, o)| Obstacle { id, rect: o.rect }).collect()
        } else {
            obstacles_from_internal(&disjoint_union(&rects))
        };
        let graph = build_gabriel(&disjoint);
        let partition = RegionPartition::build(&disjoint, &graph.edges);
        let mut timeline = partition.dual_edges.clone();
        timeline.sort_by(|a, b| b.capacity.cmp(&a.capacity).then(a.edge.cmp(&b.edge)));
        let mut dsu = PersistentDsu::new(partition.node_count);
        for e in &timeline {
            dsu.union(e.a, e.b).expect("region ids are in range");
        }
        let stats = BuildStats {
            input_obstacles: obstacles.len(),
            disjoint_obstacles: disjoint.len(),
            candidates: graph.candidates.pairs.len(),
            candidates_per_pass: graph.candidates.per_pass,
            gap_edges: graph.edges.len(),
            regions: partition.region_count,
            dual_edges: timeline.len(),
        };
        let mut index = Self {
            format: INDEX_FORMAT.to_string(),
            version: INDEX_VERSION,
            scale,
            obstacles: obstacles.to_vec(),
            disjoint,
            edges: graph.edges,
            partition,
            timeline,
            dsu,
            stats,
            blockers: PackedRTree::default(),
        };
        index.attach();
        index
    }

    fn attach(&mut self) {
        self.blockers = PackedRTree::new(self.disjoint.iter().map(|o| o.rect).collect());
        self.partition.attach(&self.disjoint);
    }

    /// Whether a robot of internal side `d` fits at internal point `p`.
    pub fn placement_free(&self, p: Point, d: Coord) -> bool {
        let (px, py) = (2 * p.x, 2 * p.y);
        let mut clear = true;
        self.blockers.search(
            |r| px - d < 2 * r.x2 && px + d > 2 * r.x1 && py - d < 2 * r.y2 && py + d > 2 * r.y1,
            |k| {
                clear = square_clear_of(p, d, &self.disjoint[k].rect);
                clear
            },
        );
        clear
    }

    pub fn locate(&self, p: Point) -> Location {
        self.partition.locate(p)
    }

    /// Every graph node a valid placement at `p` may be assigned to: its
    /// region, or for a point on a seal the seal piece and the regions
    /// around it. `None` when the placement collides.
    pub fn region_candidates(&self, p: Point, d: Coord) -> Option<Vec<usize>> {
        let node = self.region_of(p, d)?;
        let mut out = vec![node];
        if let Location::Sealed(_) = self.partition.locate(p) {
            out.extend(self.partition.nearby_regions(p));
        }
        Some(out)
    }

    /// Graph node of a valid placement, `None` when it collides.
    pub fn region_of(&self, p: Point, d: Coord) -> Option<usize> {
        if !self.placement_free(p, d) {
            return None;
        }
        Some(self.partition.node_of(p).expect("a free placement is never inside a wall"))
    }

    /// Number of unions whose capacity admits a robot of side `d`.
    pub fn time_for(&self, d: Coord) -> u32 {
        self.timeline.partition_point(|e| e.capacity >= d) as u32
    }

    /// Verdict for internal points and side, with instrumentation.
    pub fn feasible_traced(&self, s: Point, t: Point, d: Coord) -> (Verdict, QueryTrace) {
        let Some(u) = self.region_of(s, d) else { return (Verdict::InvalidStart, QueryTrace::default()) };
        let Some(v) = self.region_of(t, d) else { return (Verdict::InvalidGoal, QueryTrace::default()) };
        let time = self.time_for(d);
        if u == v {
            return (Verdict::Feasible, QueryTrace { hops: 0, time });
        }
        let (ru, hu) = self.dsu.find_counted(u, time).expect("valid region and time");
        let (rv, hv) = self.dsu.find_counted(v, time).expect("valid region and time");
        let verdict = if ru == rv { Verdict::Feasible } else { Verdict::Infeasible };
        (verdict, QueryTrace { hops: hu + hv, time })
    }

    pub fn feasible_internal(&self, s: Point, t: Point, d: Coord) -> Verdict {
        self.feasible_traced(s, t, d).0
    }

    /// Verdict for a query in external units.
    pub fn feasible(&self, q: &Query) -> Result<Verdict, IndexError> {
        if q.d <= 0 {
            return Err(IndexError::NonPositiveSide(q.d));
        }
        let s = self.scale.point(q.s.0, q.s.1);
        let t = self.scale.point(q.t.0, q.t.1);
        Ok(self.feasible_internal(s, t, self.scale.robot_side(q.d)))
    }

    pub fn save(&self, w: impl Write) -> Result<(), IndexError> {
        serde_json::to_writer(w, self)?;
        Ok(())
    }

    pub fn load(r: impl Read) -> Result<Self, IndexError> {
        let mut index: Self = serde_json::from_reader(r)?;
        if index.format != INDEX_FORMAT {
            return Err(IndexError::Format(format!("unknown format {:?}", index.format)));
        }
        if index.version != INDEX_VERSION {
            return Err(IndexError::Format(format!("unsupported version {}", index.version)));
        }
        index.attach();
        Ok(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::oracle::oracle_feasible;

    fn room(g: Coord) -> Vec<Obstacle> {
        obstacles_from_internal(&[
            Rect::new(0, 0, 40, 4),
            Rect::new(0, 4, 4, 40),
            Rect::new(36, 4, 40, 40),
            Rect::new(4, 36, 20, 40),
            Rect::new(20 + g, 36, 36, 40),
        ])
    }

    #[test]
    fn empty_world() {
        let index = FeasibilityIndex::preprocess(&[]);
        assert_eq!(index.partition.region_count, 1);
        assert!(index.timeline.is_empty());
        assert_eq!(index.feasible_internal(Point::new(0, 0), Point::new(0, 0), 2), Verdict::Feasible);
    }

    #[test]
    fn room_gap_threshold() {
        let w = room(8);
        let index = FeasibilityIndex::preprocess(&w);
        let (s, t) = (Point::new(20, 20), Point::new(20, 70));
        for d in 1..14 {
            let want = oracle_feasible(&w, s, t, d);
            assert_eq!(index.feasible_internal(s, t, d), want, "d={d}");
        }
        assert_eq!(index.feasible_internal(s, t, 8), Verdict::Feasible);
        assert_eq!(index.feasible_internal(s, t, 9), Verdict::Infeasible);
        assert_eq!(index.feasible_internal(Point::new(2, 2), t, 2), Verdict::InvalidStart);
        assert_eq!(index.feasible_internal(s, Point::new(38, 20), 2), Verdict::InvalidGoal);
    }

    #[test]
    fn round_trip() {
        let index = FeasibilityIndex::preprocess(&room(8));
        let mut buf = Vec::new();
        index.save(&mut buf).unwrap();
        let back = FeasibilityIndex::load(buf.as_slice()).unwrap();
        let (s, t) = (Point::new(20, 20), Point::new(20, 70));
        for d in 1..14 {
            assert_eq!(back.feasible_internal(s, t, d), index.feasible_internal(s, t, d));
        }
    }

    #[test]
    fn rejects_non_positive_side() {
        let index = FeasibilityIndex::preprocess(&[]);
        assert!(index.feasible(&Query { s: (0, 0), t: (1, 1), d: 0 }).is_err());
    }
}
