//! Scaling study: build time, per-query latency and persistent-find hops
//! on uniform worlds of growing size.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::generate::{generate, random_queries, rng_for, WorldKind};
use crate::geometry::{obstacles_from_internal, Point, Rect};
use crate::query::FeasibilityIndex;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub candidates: usize,
    pub gap_edges: usize,
    pub regions: usize,
    pub dual_edges: usize,
    pub queries: usize,
    pub feasible: usize,
    pub hops_mean: f64,
    pub hops_max: u32,
    pub build_ms: f64,
    pub query_median_us: f64,
    pub query_p99_us: f64,
}

impl BenchRow {
    /// The columns that do not depend on timing.
    pub fn stable(&self) -> (usize, usize, usize, usize, usize, usize, usize, u64, u32) {
        (
            self.n,
            self.candidates,
            self.gap_edges,
            self.regions,
            self.dual_edges,
            self.queries,
            self.feasible,
            self.hops_mean.to_bits(),
            self.hops_max,
        )
    }
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let k = ((sorted.len() - 1) as f64 * p).round() as usize;
    sorted[k]
}

/// Builds and queries one uniform world of size `n`.
pub fn bench_size(n: usize, seed: u64, queries: usize) -> BenchRow {
    let world = generate(WorldKind::Uniform, n, seed);
    let internal: Vec<Rect> = world.iter().map(|r| r.scaled(2, 2)).collect();
    let obstacles = obstacles_from_internal(&internal);
    let start = Instant::now();
    let index = FeasibilityIndex::preprocess(&obstacles);
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let qs = random_queries(&world, queries, 6, &mut rng_for(seed ^ 0x9e37_79b9));
    let mut times = Vec::with_capacity(qs.len());
    let (mut hops, mut hops_max, mut feasible) = (0u64, 0u32, 0usize);
    for q in &qs {
        let (s, t) = (Point::new(2 * q.s.0, 2 * q.s.1), Point::new(2 * q.t.0, 2 * q.t.1));
        let start = Instant::now();
        let (verdict, trace) = index.feasible_traced(s, t, 2 * q.d);
        times.push(start.elapsed().as_secs_f64() * 1e6);
        hops += trace.hops as u64;
        hops_max = hops_max.max(trace.hops);
        feasible += usize::from(verdict == crate::query::Verdict::Feasible);
    }
    times.sort_by(f64::total_cmp);
    BenchRow {
        n,
        candidates: index.stats.candidates,
        gap_edges: index.stats.gap_edges,
        regions: index.stats.regions,
        dual_edges: index.stats.dual_edges,
        queries: qs.len(),
        feasible,
        hops_mean: if qs.is_empty() { 0.0 } else { hops as f64 / qs.len() as f64 },
        hops_max,
        build_ms,
        query_median_us: percentile(&times, 0.5),
        query_p99_us: percentile(&times, 0.99),
    }
}

pub fn run_bench(sizes: &[usize], seed: u64, queries: usize) -> Vec<BenchRow> {
    sizes.iter().map(|&n| bench_size(n, seed, queries)).collect()
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let mut s = format!(
        "{:>8} {:>9} {:>8} {:>8} {:>10} {:>9} {:>8} {:>11} {:>9}\n",
        "n", "cands", "edges", "regions", "build ms", "hops avg", "hops max", "median us", "p99 us"
    );
    for r in rows {
        s.push_str(&format!(
            "{:>8} {:>9} {:>8} {:>8} {:>10.1} {:>9.2} {:>8} {:>11.2} {:>9.2}\n",
            r.n, r.candidates, r.gap_edges, r.regions, r.build_ms, r.hops_mean, r.hops_max, r.query_median_us,
            r.query_p99_us
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bench_is_repeatable() {
        let a = run_bench(&[50, 200], 4, 100);
        let b = run_bench(&[50, 200], 4, 100);
        assert_eq!(a.len(), 2);
        assert_eq!(a.iter().map(BenchRow::stable).collect::<Vec<_>>(), b.iter().map(BenchRow::stable).collect::<Vec<_>>());
        let mut buf = Vec::new();
        write_csv(&a, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("n,candidates,"));
    }
}
