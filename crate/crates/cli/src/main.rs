use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rectpass::circle::CircleWorld;
use rectpass::decompose::decompose;
use rectpass::generate::{generate, random_queries, rng_for, WorldKind};
use rectpass::geometry::{ingest_world_scaled, AxisScale, Coord, RawShape, Rect};
use rectpass::io::{parse_queries, parse_world, write_queries, write_world};
use rectpass::oracle::oracle_feasible;
use rectpass::query::{FeasibilityIndex, Query, Verdict};
use rectpass::render::{render_circles, render_index, RenderOptions};
use rectpass::{bench, circle};

/// Feasibility queries for square robots among rectangular obstacles.
#[derive(Parser)]
#[command(name = "rectpass", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Preprocess a world file into an index.
    Build {
        world: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        aspect: Aspect,
    },
    /// Answer a query file against an index, one verdict per line.
    Query {
        index: PathBuf,
        queries: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Generate a random world.
    Gen {
        #[arg(long, default_value = "uniform")]
        kind: WorldKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare engine verdicts with the brute-force planner.
    Verify(VerifyArgs),
    /// Draw an index as SVG.
    Render {
        index: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        show_pathways: bool,
        #[arg(long)]
        no_regions: bool,
        #[arg(long)]
        no_edges: bool,
    },
    /// Draw the Gabriel graph of random circle centers as SVG.
    Circles {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        radius: Coord,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Scaling benchmark on uniform worlds.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 10_000, 100_000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        queries: usize,
        /// Also write the rows as CSV to this file (`-` for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct Aspect {
    /// Robot width and height when it is not square, e.g. `3x2`.
    #[arg(long, value_parser = parse_aspect)]
    robot: Option<(Coord, Coord)>,
}

impl Aspect {
    fn scale(&self) -> Result<AxisScale> {
        Ok(match self.robot {
            Some((w, h)) => AxisScale::for_robot(w, h)?,
            None => AxisScale::UNIT,
        })
    }
}

fn parse_aspect(s: &str) -> Result<(Coord, Coord), String> {
    let (w, h) = s.split_once('x').ok_or("expected WIDTHxHEIGHT")?;
    let w = w.parse().map_err(|_| format!("bad width `{w}`"))?;
    let h = h.parse().map_err(|_| format!("bad height `{h}`"))?;
    Ok((w, h))
}

#[derive(Args)]
struct VerifyArgs {
    world: PathBuf,
    #[arg(long, conflicts_with = "random")]
    queries: Option<PathBuf>,
    /// Number of random queries when no query file is given.
    #[arg(long, default_value_t = 100)]
    random: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where a minimized failing case is written.
    #[arg(long, default_value = "rectpass-repro")]
    repro_dir: PathBuf,
    #[command(flatten)]
    aspect: Aspect,
    /// Corrupt every engine verdict, to check the mismatch path.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

enum Outcome {
    Ok,
    Mismatch,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_world(path: &Path) -> Result<Vec<RawShape>> {
    parse_world(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_index(path: &Path) -> Result<FeasibilityIndex> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    FeasibilityIndex::load(io::BufReader::new(file)).with_context(|| format!("loading {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn cmd_build(world: &Path, output: &Path, aspect: Aspect) -> Result<()> {
    let shapes = read_world(world)?;
    let index = FeasibilityIndex::from_shapes(&shapes, aspect.scale()?)?;
    let file = fs::File::create(output).with_context(|| format!("creating {}", output.display()))?;
    let mut w = BufWriter::new(file);
    index.save(&mut w)?;
    w.flush()?;
    let s = &index.stats;
    println!("obstacles {}", s.input_obstacles);
    println!("candidates {}", s.candidates);
    println!("relevant edges {}", s.gap_edges);
    println!("regions {}", s.regions);
    println!("dual edges {}", s.dual_edges);
    Ok(())
}

fn answer_all(index: &FeasibilityIndex, queries: &[Query], jobs: usize) -> Result<Vec<Verdict>> {
    let jobs = jobs.max(1);
    if jobs == 1 || queries.len() < 2 {
        return queries.iter().map(|q| Ok(index.feasible(q)?)).collect();
    }
    let chunk = queries.len().div_ceil(jobs);
    let parts: Vec<Result<Vec<Verdict>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = queries
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|q| Ok(index.feasible(q)?)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("query worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(queries.len());
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

fn cmd_query(index: &Path, queries: &Path, jobs: usize) -> Result<()> {
    let index = load_index(index)?;
    let qs = parse_queries(&read(queries)?).with_context(|| format!("in {}", queries.display()))?;
    let verdicts = answer_all(&index, &qs, jobs)?;
    let mut out = BufWriter::new(io::stdout().lock());
    for v in verdicts {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_gen(kind: WorldKind, n: usize, seed: u64, output: Option<&Path>) -> Result<()> {
    if n == 0 {
        bail!("n must be positive");
    }
    let shapes: Vec<RawShape> = generate(kind, n, seed).into_iter().map(RawShape::Rect).collect();
    write_out(output, &write_world(&shapes))
}

/// External rectangles covering the shapes, for sampling query endpoints.
fn shape_rects(shapes: &[RawShape]) -> Vec<Rect> {
    shapes
        .iter()
        .flat_map(|s| match s {
            RawShape::Rect(r) => vec![*r],
            RawShape::Polygon(p) => decompose(p).unwrap_or_default(),
        })
        .collect()
}

struct Checker {
    scale: AxisScale,
    inject_fault: bool,
}

impl Checker {
    fn engine(&self, index: &FeasibilityIndex, q: &Query) -> Result<Verdict> {
        let v = index.feasible(q)?;
        Ok(if self.inject_fault {
            match v {
                Verdict::Feasible => Verdict::Infeasible,
                _ => Verdict::Feasible,
            }
        } else {
            v
        })
    }

    fn oracle(&self, shapes: &[RawShape], q: &Query) -> Result<Verdict> {
        let obstacles = ingest_world_scaled(shapes, self.scale)?;
        let s = self.scale.point(q.s.0, q.s.1);
        let t = self.scale.point(q.t.0, q.t.1);
        Ok(oracle_feasible(&obstacles, s, t, self.scale.robot_side(q.d)))
    }

    fn disagrees(&self, shapes: &[RawShape], q: &Query) -> Result<bool> {
        let index = FeasibilityIndex::from_shapes(shapes, self.scale)?;
        Ok(self.engine(&index, q)? != self.oracle(shapes, q)?)
    }

    /// Drops shapes one at a time while the disagreement persists.
    fn minimize(&self, shapes: &[RawShape], q: &Query) -> Result<Vec<RawShape>> {
        let mut cur = shapes.to_vec();
        'outer: loop {
            for k in 0..cur.len() {
                let mut smaller = cur.clone();
                smaller.remove(k);
                if self.disagrees(&smaller, q)? {
                    cur = smaller;
                    continue 'outer;
                }
            }
            return Ok(cur);
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    let shapes = read_world(&args.world)?;
    let scale = args.aspect.scale()?;
    let queries = match &args.queries {
        Some(p) => parse_queries(&read(p)?).with_context(|| format!("in {}", p.display()))?,
        None => random_queries(&shape_rects(&shapes), args.random, 6, &mut rng_for(args.seed)),
    };
    let checker = Checker { scale, inject_fault: args.inject_fault };
    let index = FeasibilityIndex::from_shapes(&shapes, scale)?;
    let obstacles = ingest_world_scaled(&shapes, scale)?;
    let mut first_bad = None;
    let mut agree = 0;
    for q in &queries {
        let engine = checker.engine(&index, q)?;
        let s = scale.point(q.s.0, q.s.1);
        let t = scale.point(q.t.0, q.t.1);
        let oracle = oracle_feasible(&obstacles, s, t, scale.robot_side(q.d));
        if engine == oracle {
            agree += 1;
        } else if first_bad.is_none() {
            first_bad = Some((*q, engine, oracle));
        }
    }
    println!("{agree}/{} agree", queries.len());
    let Some((q, engine, oracle)) = first_bad else { return Ok(Outcome::Ok) };
    eprintln!(
        "mismatch: Q {} {} {} {} {}: engine {engine}, oracle {oracle}",
        q.s.0, q.s.1, q.t.0, q.t.1, q.d
    );
    let small = checker.minimize(&shapes, &q)?;
    fs::create_dir_all(&args.repro_dir)
        .with_context(|| format!("creating {}", args.repro_dir.display()))?;
    let world_path = args.repro_dir.join("repro.world");
    let query_path = args.repro_dir.join("repro.queries");
    fs::write(&world_path, write_world(&small))?;
    fs::write(&query_path, write_queries(&[q]))?;
    eprintln!(
        "minimized to {} obstacles: {} {}",
        small.len(),
        world_path.display(),
        query_path.display()
    );
    Ok(Outcome::Mismatch)
}

fn cmd_render(index: &Path, output: &Path, opts: RenderOptions) -> Result<()> {
    let index = load_index(index)?;
    fs::write(output, render_index(&index, opts)).with_context(|| format!("writing {}", output.display()))
}

fn cmd_circles(n: usize, seed: u64, radius: Coord, output: &Path) -> Result<()> {
    use rand::Rng;
    let mut rng = rng_for(seed);
    let side = ((n as f64).sqrt() * 10.0).ceil() as Coord + 1;
    let mut centers: Vec<(Coord, Coord)> = Vec::with_capacity(n);
    let mut seen = std::collections::HashSet::new();
    while centers.len() < n {
        let c = (rng.gen_range(0..side), rng.gen_range(0..side));
        if seen.insert(c) {
            centers.push(c);
        }
    }
    let world = CircleWorld::from_integer_centers(&centers, circle::Rational::from_integer(radius));
    let edges = world.gabriel_edges()?;
    println!("centers {}", centers.len());
    println!("gabriel edges {}", edges.len());
    fs::write(output, render_circles(&centers, radius, &edges)).with_context(|| format!("writing {}", output.display()))
}

fn cmd_bench(sizes: &[usize], seed: u64, queries: usize, csv: Option<&Path>) -> Result<()> {
    let rows = bench::run_bench(sizes, seed, queries);
    print!("{}", bench::format_table(&rows));
    match csv {
        Some(p) if p.as_os_str() == "-" => bench::write_csv(&rows, io::stdout())?,
        Some(p) => {
            let file = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            bench::write_csv(&rows, file)?;
        }
        None => {}
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Build { world, output, aspect } => cmd_build(&world, &output, aspect)?,
        Command::Query { index, queries, jobs } => cmd_query(&index, &queries, jobs)?,
        Command::Gen { kind, n, seed, output } => cmd_gen(kind, n, seed, output.as_deref())?,
        Command::Verify(args) => return cmd_verify(&args),
        Command::Render { index, output, show_pathways, no_regions, no_edges } => cmd_render(
            &index,
            &output,
            RenderOptions { regions: !no_regions, edges: !no_edges, pathways: show_pathways },
        )?,
        Command::Circles { n, seed, radius, output } => cmd_circles(n, seed, radius, &output)?,
        Command::Bench { sizes, seed, queries, csv } => cmd_bench(&sizes, seed, queries, csv.as_deref())?,
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
