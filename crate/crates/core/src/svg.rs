//! Standalone SVG output. Numbers are printed with three decimals so equal
//! inputs produce identical bytes.
//!
//! Colors: copies are outlined in dark grey, the corridor is shaded light
//! blue, the trajectory is drawn in red. Decorations are semicircles, blue
//! for counterclockwise and orange for clockwise. Raster cells are blue
//! (periodic), orange (saddle) and light grey (infeasible).

use std::fmt::Write;

use crate::geom::Point;
use crate::stability::{DecoratedPath, Decoration};
use crate::tiles::TileRaster;
use crate::unfolding::{Corridor, UnfoldingStrip, Verdict};
use crate::veech::{Column, DecoratedCycle};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

pub const PERIODIC_COLOR: &str = "#2b83ba";
pub const SADDLE_COLOR: &str = "#fdae61";
pub const INFEASIBLE_COLOR: &str = "#e6e6e6";

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn verdict_color(v: Verdict) -> &'static str {
    match v {
        Verdict::Periodic => PERIODIC_COLOR,
        Verdict::Saddle => SADDLE_COLOR,
        Verdict::Infeasible => INFEASIBLE_COLOR,
    }
}

fn decoration_color(d: Decoration) -> &'static str {
    match d {
        Decoration::Ccw => PERIODIC_COLOR,
        Decoration::Cw => SADDLE_COLOR,
    }
}

/// Maps plane coordinates into the picture, flipping the y axis.
struct Frame {
    min: Point,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[Point]) -> Self {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = min.inf(p);
            max = max.sup(p);
        }
        let span = (max - min).max().max(1e-9);
        let scale = (WIDTH - 2.0 * MARGIN) / span;
        let height = (max.y - min.y) * scale + 2.0 * MARGIN;
        Frame { min, scale, height }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        (MARGIN + (p.x - self.min.x) * self.scale, self.height - MARGIN - (p.y - self.min.y) * self.scale)
    }

    fn points(&self, ps: &[Point]) -> String {
        ps.iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{},{}", num(x), num(y))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">",
        num(w),
        num(h)
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
}

/// Unfolding strip with optional corridor and decorations.
pub fn strip_svg(strip: &UnfoldingStrip, corridor: Option<&Corridor>, decorations: Option<&DecoratedPath>) -> String {
    let copies: Vec<Vec<Point>> = (0..strip.copies()).map(|k| strip.copy_vertices(k)).collect();
    let all: Vec<Point> = copies.iter().flatten().copied().collect();
    let frame = Frame::fit(&all);
    let mut out = String::new();
    header(&mut out, WIDTH, frame.height);

    if let Some(c) = corridor {
        let u = c.direction;
        let nrm = c.normal();
        let (t0, t1) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            let t = u.dot(p);
            (a.min(t), b.max(t))
        });
        if c.width() > 0.0 {
            let band = [u * t0 + nrm * c.lo, u * t1 + nrm * c.lo, u * t1 + nrm * c.hi, u * t0 + nrm * c.hi];
            let _ = writeln!(
                out,
                "<polygon points=\"{}\" fill=\"#cfe8f3\" stroke=\"none\"/>",
                frame.points(&band)
            );
        }
        let mid = [u * t0 + nrm * c.midline(), u * t1 + nrm * c.midline()];
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#d7191c\" stroke-width=\"2\"/>",
            frame.points(&mid)
        );
    }

    for (k, vs) in copies.iter().enumerate() {
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"none\" stroke=\"#404040\" stroke-width=\"1\" data-copy=\"{k}\"/>",
            frame.points(vs)
        );
    }

    if let (Some(d), Some(c)) = (decorations, corridor) {
        let r = 0.04 * (WIDTH - 2.0 * MARGIN) / frame.scale;
        for (s, dec) in d.strikes.iter().zip(&d.decorations) {
            let p = strip.vertex(s.copy, s.vertex);
            let bulge = if *dec == Decoration::Ccw { c.normal() } else { -c.normal() };
            let arc: Vec<Point> = (0..=12)
                .map(|i| {
                    let a = std::f64::consts::PI * i as f64 / 12.0;
                    p - c.direction * (r * a.cos()) + bulge * (r * a.sin())
                })
                .collect();
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>",
                frame.points(&arc),
                decoration_color(*dec)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Grid of cell verdicts with `theta1` increasing to the right and `theta2` upward.
pub fn raster_svg(r: &TileRaster) -> String {
    let cell = ((WIDTH - 2.0 * MARGIN) / r.nx.max(r.ny) as f64).max(1.0);
    let (gw, gh) = (cell * r.nx as f64, cell * r.ny as f64);
    let legend = 70.0;
    let mut out = String::new();
    header(&mut out, gw + 2.0 * MARGIN, gh + 2.0 * MARGIN + legend);
    for j in 0..r.ny {
        for i in 0..r.nx {
            let x = MARGIN + i as f64 * cell;
            let y = MARGIN + (r.ny - 1 - j) as f64 * cell;
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                num(x),
                num(y),
                num(cell),
                num(cell),
                verdict_color(r.at(i, j))
            );
        }
    }
    let counts = r.counts();
    let rows = [
        (Verdict::Periodic, counts.periodic),
        (Verdict::Saddle, counts.saddle),
        (Verdict::Infeasible, counts.infeasible),
    ];
    for (k, (v, count)) in rows.iter().enumerate() {
        let y = gh + 2.0 * MARGIN + 20.0 * k as f64;
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\" stroke=\"#404040\"/>",
            num(MARGIN),
            num(y),
            verdict_color(*v)
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{v} ({count})</text>",
            num(MARGIN + 18.0),
            num(y + 11.0)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Components of the horizontal saddle connections as boxes, `L` on the
/// top row and `R` below, ordered by index; the cycle is drawn as arrows.
pub fn cycle_svg(c: &DecoratedCycle) -> String {
    let n = c.n as i32;
    let cols: Vec<i32> = (-(n - 1)..=(n - 1)).step_by(2).collect();
    let step = 70.0;
    let w = step * cols.len() as f64 + 2.0 * MARGIN;
    let h = 220.0;
    let pos = |side: Column, k: i32| -> (f64, f64) {
        let i = cols.iter().position(|&x| x == -k).unwrap_or(0) as f64;
        let y = if side == Column::L { 60.0 } else { 160.0 };
        (MARGIN + step * (i + 0.5), y)
    };
    let mut out = String::new();
    header(&mut out, w, h);
    let _ = writeln!(
        out,
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#404040\"/></marker></defs>"
    );
    for &k in &cols {
        for side in [Column::L, Column::R] {
            if side == Column::R && k.abs() == n - 1 {
                continue;
            }
            let (x, y) = pos(side, k);
            let label = if side == Column::L { format!("L{k}") } else { format!("R{k}") };
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"50\" height=\"24\" fill=\"white\" stroke=\"#404040\"/>",
                num(x - 25.0),
                num(y - 12.0)
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{label}</text>",
                num(x),
                num(y + 4.0)
            );
        }
    }
    let m = c.components.len();
    for i in 0..m {
        let (a, b) = (c.components[i], c.components[(i + 1) % m]);
        let (x0, y0) = pos(a.side, a.k);
        let (x1, y1) = pos(b.side, b.k);
        let bend = if c.decorations[i] == Decoration::Ccw { -30.0 } else { 30.0 };
        let (mx, my) = (0.5 * (x0 + x1), 0.5 * (y0 + y1) + bend);
        let _ = writeln!(
            out,
            "<path d=\"M{},{} Q{},{} {},{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\" data-step=\"{i}\"/>",
            num(x0),
            num(y0),
            num(mx),
            num(my),
            num(x1),
            num(y1),
            decoration_color(c.decorations[i])
        );
    }
    out.push_str("</svg>\n");
    out
}
