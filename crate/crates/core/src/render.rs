//! SVG rendering of indexed worlds and circle Gabriel graphs.
//!
//! Output is plain SVG 1.1 in internal half-units with the y axis flipped,
//! written in a fixed order so equal inputs give byte-identical files.

use std::fmt::Write as _;

use crate::circle::GabrielEdge as CircleEdge;
use crate::geometry::{Coord, Rect};
use crate::partition::PieceClass;
use crate::query::FeasibilityIndex;

#[derive(Clone, Copy, Debug)]
pub struct RenderOptions {
    pub regions: bool,
    pub edges: bool,
    pub pathways: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self { regions: true, edges: true, pathways: false }
    }
}

const MARGIN: Coord = 8;

/// Fill color of region `id`: hues spread by a golden-angle step.
pub fn region_color(id: usize) -> String {
    let hue = (id as u64 * 137 + 200) % 360;
    format!("hsl({hue},55%,78%)")
}

struct Canvas {
    out: String,
}

impl Canvas {
    fn new(frame: Rect) -> Self {
        let (w, h) = (frame.width(), frame.height());
        let mut out = String::new();
        writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {w} {h}" width="{}" height="{}">"#,
            frame.x1,
            -frame.y2,
            w * 3,
            h * 3,
        )
        .unwrap();
        Self { out }
    }

    fn rect(&mut self, r: &Rect, attrs: &str) {
        writeln!(
            self.out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" {attrs}/>"#,
            r.x1,
            -r.y2,
            r.width(),
            r.height()
        )
        .unwrap();
    }

    fn polyline(&mut self, pts: &[(Coord, Coord)], attrs: &str) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x},{}", -y)).collect();
        writeln!(self.out, r#"<polyline points="{}" fill="none" {attrs}/>"#, coords.join(" ")).unwrap();
    }

    fn open_group(&mut self, id: &str) {
        writeln!(self.out, r#"<g id="{id}">"#).unwrap();
    }

    fn close_group(&mut self) {
        self.out.push_str("</g>\n");
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn bounds(rects: impl Iterator<Item = Rect>) -> Option<Rect> {
    rects.reduce(|a, b| Rect::new(a.x1.min(b.x1), a.y1.min(b.y1), a.x2.max(b.x2), a.y2.max(b.y2)))
}

/// Renders obstacles (filled), thin edges (hatched, with their seal lines),
/// bounded regions colored by id and, optionally, pathway outlines.
pub fn render_index(index: &FeasibilityIndex, opts: RenderOptions) -> String {
    let world = bounds(index.obstacles.iter().map(|o| o.rect)).unwrap_or(Rect::new(0, 0, 0, 0));
    let frame = Rect::new(world.x1 - MARGIN, world.y1 - MARGIN, world.x2 + MARGIN, world.y2 + MARGIN);
    let mut c = Canvas::new(frame);
    c.out.push_str(concat!(
        r##"<defs><pattern id="hatch" width="2" height="2" patternUnits="userSpaceOnUse" patternTransform="rotate(45)">"##,
        r##"<line x1="0" y1="0" x2="0" y2="2" stroke="#c0392b" stroke-width="0.6"/></pattern></defs>"##,
        "\n"
    ));
    c.rect(&frame, r##"fill="white" stroke="#888" stroke-width="0.5""##);
    let part = &index.partition;
    if opts.regions && !part.xs.is_empty() {
        c.open_group("regions");
        let lo = |cell: Coord, v: &[Coord]| v[(cell / 2) as usize];
        let hi = |cell: Coord, v: &[Coord]| v[((cell + 1) / 2) as usize];
        for p in &part.pieces {
            if p.class != PieceClass::Free || p.node == part.outer {
                continue;
            }
            let r = Rect::new(
                lo(p.cells.x1, &part.xs),
                lo(p.cells.y1, &part.ys),
                hi(p.cells.x2, &part.xs),
                hi(p.cells.y2, &part.ys),
            );
            if r.has_positive_extent() {
                c.rect(&r, &format!(r#"fill="{}" shape-rendering="crispEdges""#, region_color(p.node)));
            }
        }
        c.close_group();
    }
    c.open_group("obstacles");
    for o in &index.obstacles {
        c.rect(&o.rect, r##"fill="#555" stroke="#222" stroke-width="0.3""##);
    }
    c.close_group();
    if opts.edges {
        c.open_group("edges");
        for seal in &part.seals {
            let e = &index.edges[seal.edge];
            if e.edge_rect.has_positive_extent() {
                c.rect(&e.edge_rect, r##"fill="url(#hatch)" stroke="none""##);
            }
            for s in &seal.segments {
                c.polyline(&[(s.a.x, s.a.y), (s.b.x, s.b.y)], r##"stroke="#c0392b" stroke-width="0.5""##);
            }
        }
        c.close_group();
    }
    if opts.pathways {
        c.open_group("pathways");
        for e in &index.edges {
            c.rect(&e.pathway, r##"fill="none" stroke="#2471a3" stroke-width="0.4" stroke-dasharray="1.5,1""##);
        }
        c.close_group();
    }
    c.finish()
}

/// Circles of radius `radius` around integer `centers` with their Gabriel
/// edges drawn between centers.
pub fn render_circles(centers: &[(Coord, Coord)], radius: Coord, edges: &[CircleEdge]) -> String {
    let world = bounds(centers.iter().map(|&(x, y)| Rect::new(x - radius, y - radius, x + radius, y + radius)))
        .unwrap_or(Rect::new(0, 0, 0, 0));
    let frame = Rect::new(world.x1 - MARGIN, world.y1 - MARGIN, world.x2 + MARGIN, world.y2 + MARGIN);
    let mut c = Canvas::new(frame);
    c.rect(&frame, r##"fill="white" stroke="#888" stroke-width="0.5""##);
    c.open_group("edges");
    for e in edges {
        let (a, b) = (centers[e.i], centers[e.j]);
        c.polyline(&[a, b], r##"stroke="#c0392b" stroke-width="0.6""##);
    }
    c.close_group();
    c.open_group("circles");
    for &(x, y) in centers {
        writeln!(
            c.out,
            r##"<circle cx="{x}" cy="{}" r="{}" fill="#555" fill-opacity="0.6" stroke="#222" stroke-width="0.3"/>"##,
            -y,
            radius.max(1)
        )
        .unwrap();
    }
    c.close_group();
    c.finish()
}
