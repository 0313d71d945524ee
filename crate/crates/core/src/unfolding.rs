//! Unfolding strips, translation closure and corridors.

use serde::Serialize;

use crate::geom::{placements, EdgeWord, PlanarIsometry, Point, PolygonShape};
use crate::{Error, Result, DEFAULT_TOL};

/// The copies of a polygon laid out along a word.
#[derive(Debug, Clone)]
pub struct UnfoldingStrip {
    pub base: PolygonShape,
    pub word: EdgeWord,
    /// `placements[k]` carries the base polygon onto copy `k`.
    pub placements: Vec<PlanarIsometry>,
    /// `crossed_edges[k]` is shared by copies `k` and `k + 1`.
    pub crossed_edges: Vec<(Point, Point)>,
}

impl UnfoldingStrip {
    pub fn copies(&self) -> usize {
        self.placements.len()
    }

    /// Vertices of copy `k`, in label order.
    pub fn copy_vertices(&self, k: usize) -> Vec<Point> {
        let g = &self.placements[k];
        self.base.vertices.iter().map(|v| g.apply(v)).collect()
    }

    /// Position of vertex `label` (1-based) of copy `k`.
    pub fn vertex(&self, k: usize, label: usize) -> Point {
        self.placements[k].apply(&self.base.vertices[label - 1])
    }

    pub fn closure(&self) -> Closure {
        closure_tol(self, DEFAULT_TOL)
    }
}

pub fn unfold(p: &PolygonShape, w: &EdgeWord) -> Result<UnfoldingStrip> {
    let pl = placements(p, w)?;
    let mut crossed = Vec::with_capacity(w.len());
    for (k, &l) in w.letters().iter().enumerate() {
        let (a, b) = p.edge(l)?;
        crossed.push((pl[k].apply(&a), pl[k].apply(&b)));
    }
    Ok(UnfoldingStrip { base: p.clone(), word: w.clone(), placements: pl, crossed_edges: crossed })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Closure {
    Translation(Point),
    Nontrivial(PlanarIsometry),
}

impl Closure {
    pub fn translation(&self) -> Option<Point> {
        match self {
            Closure::Translation(v) => Some(*v),
            Closure::Nontrivial(_) => None,
        }
    }
}

pub fn closure(strip: &UnfoldingStrip) -> Closure {
    closure_tol(strip, DEFAULT_TOL)
}

pub fn closure_tol(strip: &UnfoldingStrip, tol: f64) -> Closure {
    let last = *strip.placements.last().expect("strip has at least one copy");
    if last.is_translation(tol) {
        Closure::Translation(last.translation)
    } else {
        Closure::Nontrivial(last)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A vertex copy lying on the boundary of the corridor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightVertex {
    pub copy: usize,
    /// 1-based vertex label in the base polygon.
    pub vertex: usize,
    pub side: Side,
    #[serde(skip)]
    pub position: Point,
}

/// The band of lines parallel to the closure translation that cross every
/// crossed edge in order. Offsets are measured along the left normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Corridor {
    pub direction: Point,
    pub lo: f64,
    pub hi: f64,
    /// False if some line in the band would revisit an earlier edge.
    pub progressive: bool,
    /// Ordered by position along `direction`.
    pub tight_vertices: Vec<TightVertex>,
}

impl Corridor {
    pub fn normal(&self) -> Point {
        Point::new(-self.direction.y, self.direction.x)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midline(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Signed offset of a point: positive means left of the direction.
    pub fn offset_of(&self, p: &Point) -> f64 {
        self.normal().dot(p)
    }

    /// Side of a point relative to the midline.
    pub fn side_of(&self, p: &Point) -> Side {
        if self.offset_of(p) >= self.midline() {
            Side::Left
        } else {
            Side::Right
        }
    }
}

pub fn corridor(strip: &UnfoldingStrip) -> Result<Corridor> {
    corridor_tol(strip, DEFAULT_TOL)
}

pub fn corridor_tol(strip: &UnfoldingStrip, tol: f64) -> Result<Corridor> {
    let v = closure_tol(strip, tol).translation().ok_or(Error::ClosureNotTranslation)?;
    let len = v.norm();
    if len < tol || strip.crossed_edges.is_empty() {
        return Err(Error::ClosureNotTranslation);
    }
    let u = v / len;
    let nrm = Point::new(-u.y, u.x);

    let mut edges = strip.crossed_edges.clone();
    let (a0, b0) = edges[0];
    let wrap = (a0 + v, b0 + v);

    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for &(a, b) in &edges {
        let (pa, pb) = (nrm.dot(&a), nrm.dot(&b));
        lo = lo.max(pa.min(pb));
        hi = hi.min(pa.max(pb));
    }

    edges.push(wrap);
    let progressive = hi - lo >= -tol && {
        let c = 0.5 * (lo + hi);
        let strict = hi - lo > tol;
        let ts: Option<Vec<f64>> = edges.iter().map(|&(a, b)| crossing_t(a, b, nrm, u, c, tol)).collect();
        match ts {
            Some(ts) => ts.windows(2).all(|p| if strict { p[1] - p[0] > tol } else { p[1] - p[0] >= -tol }),
            None => false,
        }
    };

    let mut tight: Vec<TightVertex> = Vec::new();
    if hi - lo >= -tol {
        let labels = strip.word.letters();
        for (k, &(a, b)) in strip.crossed_edges.iter().enumerate() {
            let ends = strip.base.edge_vertex_labels(labels[k])?;
            let (pa, pb) = (nrm.dot(&a), nrm.dot(&b));
            let (low, high) = if pa <= pb { ((a, ends[0]), (b, ends[1])) } else { ((b, ends[1]), (a, ends[0])) };
            for (p, lab, side, bound) in [(low.0, low.1, Side::Right, lo), (high.0, high.1, Side::Left, hi)] {
                if (nrm.dot(&p) - bound).abs() > tol {
                    continue;
                }
                if tight.iter().any(|t| (t.position - p).norm() <= tol.max(1e-12) * 10.0) {
                    continue;
                }
                tight.push(TightVertex { copy: k, vertex: lab, side, position: p });
            }
        }
        tight.sort_by(|x, y| u.dot(&x.position).total_cmp(&u.dot(&y.position)));
    }

    Ok(Corridor { direction: u, lo, hi, progressive, tight_vertices: tight })
}

fn crossing_t(a: Point, b: Point, nrm: Point, u: Point, c: f64, tol: f64) -> Option<f64> {
    let (pa, pb) = (nrm.dot(&a), nrm.dot(&b));
    let d = pb - pa;
    if d.abs() < tol {
        return None;
    }
    let s = (c - pa) / d;
    Some(u.dot(&(a + (b - a) * s)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Periodic,
    Saddle,
    Infeasible,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Periodic => "periodic",
            Verdict::Saddle => "saddle",
            Verdict::Infeasible => "infeasible",
        };
        f.write_str(s)
    }
}

/// Verdict for a corridor that was successfully computed.
pub fn verdict_of(c: &Corridor, tol: f64) -> Verdict {
    if !c.progressive || c.width() < -tol {
        Verdict::Infeasible
    } else if c.width() <= tol {
        Verdict::Saddle
    } else {
        Verdict::Periodic
    }
}

pub fn classify_word(p: &PolygonShape, w: &EdgeWord) -> Result<Verdict> {
    classify_word_tol(p, w, DEFAULT_TOL)
}

pub fn classify_word_tol(p: &PolygonShape, w: &EdgeWord, tol: f64) -> Result<Verdict> {
    Ok(classify_with_corridor(p, w, tol)?.0)
}

/// Verdict together with the corridor when the closure is a translation.
pub fn classify_with_corridor(
    p: &PolygonShape,
    w: &EdgeWord,
    tol: f64,
) -> Result<(Verdict, Option<Corridor>)> {
    let strip = unfold(p, w)?;
    match corridor_tol(&strip, tol) {
        Ok(c) => Ok((verdict_of(&c, tol), Some(c))),
        Err(Error::ClosureNotTranslation) => Ok((Verdict::Infeasible, None)),
        Err(e) => Err(e),
    }
}

/// Carry a word from `p` to a nearby polygon `q` with the same edge count.
pub fn transfer(
    w: &EdgeWord,
    p: &PolygonShape,
    q: &PolygonShape,
) -> Result<(Verdict, Option<Corridor>)> {
    if p.n() != q.n() {
        return Err(Error::ShapeMismatch(p.n(), q.n()));
    }
    classify_with_corridor(q, w, DEFAULT_TOL)
}

/// JSON verdict for a word on a polygon.
#[derive(Debug, Clone, Serialize)]
pub struct WordReport {
    pub class: Verdict,
    pub corridor_width: Option<f64>,
    pub tight_vertices: Vec<TightVertex>,
}

pub fn report(p: &PolygonShape, w: &EdgeWord, tol: f64) -> Result<WordReport> {
    let (class, c) = classify_with_corridor(p, w, tol)?;
    Ok(WordReport {
        class,
        corridor_width: c.as_ref().map(|c| c.width().max(0.0)),
        tight_vertices: match class {
            Verdict::Saddle => c.map(|c| c.tight_vertices).unwrap_or_default(),
            _ => Vec::new(),
        },
    })
}
