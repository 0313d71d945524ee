//! The hexagonal-lattice model of the unfolding of the 30-60-90 triangle:
//! the level-2 congruence subgroup `G`, reduced homology classes, the four
//! base saddle paths `s1..s4` and the collinearity checks near right triangles.
//!
//! Lattice coordinates `(n, m)` refer to `u1 = (0, sqrt 3)` and
//! `u2 = (-3/2, sqrt 3 / 2)` on the unit hexagon centered at the origin.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::geom::{placements, EdgeWord, Point, TriangleShape};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeVector {
    pub n: i64,
    pub m: i64,
}

impl LatticeVector {
    pub fn new(n: i64, m: i64) -> Self {
        LatticeVector { n, m }
    }

    pub fn is_primitive(&self) -> bool {
        num_integer::gcd(self.n, self.m) == 1
    }

    /// Position in the hexagon frame.
    pub fn to_plane(&self) -> Point {
        let s3 = 3f64.sqrt();
        Point::new(-1.5 * self.m as f64, s3 * self.n as f64 + 0.5 * s3 * self.m as f64)
    }

    pub fn parity(&self) -> (i64, i64) {
        (self.n.rem_euclid(2), self.m.rem_euclid(2))
    }
}

/// An element of `SL2(Z)` congruent to the identity mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::NotInG(format!("determinant {} != 1", a * d - b * c)));
        }
        if a % 2 == 0 || d % 2 == 0 || b % 2 != 0 || c % 2 != 0 {
            return Err(Error::NotInG(format!("[{a},{b},{c},{d}] is not the identity mod 2")));
        }
        Ok(GMatrix { a, b, c, d })
    }

    pub fn identity() -> Self {
        GMatrix { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn mul(&self, o: &GMatrix) -> GMatrix {
        GMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> GMatrix {
        GMatrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn apply(&self, v: LatticeVector) -> LatticeVector {
        LatticeVector::new(self.a * v.n + self.b * v.m, self.c * v.n + self.d * v.m)
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Coordinates in the basis `p1, p2, p3, c1, c2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct H5Class {
    pub p1: i64,
    pub p2: i64,
    pub p3: i64,
    pub c1: i64,
    pub c2: i64,
}

impl H5Class {
    /// Build from coefficients on all four loops `p1..p4`, using `p1+p2+p3+p4 = 0`.
    pub fn from_p4(p: [i64; 4], c1: i64, c2: i64) -> Self {
        H5Class { p1: p[0] - p[3], p2: p[1] - p[3], p3: p[2] - p[3], c1, c2 }
    }

    pub fn reduce(&self) -> H3Class {
        H3Class { s: self.p1 + self.p2 + self.p3, u: self.c1, v: self.c2 }
    }

    /// The map to the twice-punctured double, `(1, 1, 1, -1, -1)`.
    pub fn pstar(&self) -> i64 {
        self.p1 + self.p2 + self.p3 - self.c1 - self.c2
    }
}

/// Reduced class `(s, u, v)` with `s = p1 + p2 + p3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct H3Class {
    pub s: i64,
    pub u: i64,
    pub v: i64,
}

impl H3Class {
    pub fn new(s: i64, u: i64, v: i64) -> Self {
        H3Class { s, u, v }
    }
}

pub fn act(g: &GMatrix, h: H3Class) -> H3Class {
    H3Class {
        s: h.s + (1 - g.a - g.c) * h.u + (1 - g.b - g.d) * h.v,
        u: g.a * h.u + g.b * h.v,
        v: g.c * h.u + g.d * h.v,
    }
}

pub fn pstar(h: H3Class) -> i64 {
    h.s - h.u - h.v
}

/// The row `(1, 1-2a-2c, 1-2b-2d)` obtained by composing `pstar` with `act(g, .)`.
pub fn composed_row(g: &GMatrix) -> [i64; 3] {
    [1, 1 - 2 * g.a - 2 * g.c, 1 - 2 * g.b - 2 * g.d]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    S1,
    S2,
    S3,
    S4,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::S1 => "s1",
            Case::S2 => "s2",
            Case::S3 => "s3",
            Case::S4 => "s4",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s1" => Ok(Case::S1),
            "s2" => Ok(Case::S2),
            "s3" => Ok(Case::S3),
            "s4" => Ok(Case::S4),
            _ => Err(Error::Parse(format!("unknown case '{s}'"))),
        }
    }
}

/// A base path repeated `n` times with semicircle counts at `v1` and `v3`.
///
/// In `s1`/`s4` the path strikes `v1` and `v3` `n` times each; in `s2`/`s3`
/// it strikes `v3` `2n` times and never `v1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseTag {
    pub case: Case,
    pub n: u32,
    pub ccw_v1: u32,
    pub cw_v1: u32,
    pub ccw_v3: u32,
    pub cw_v3: u32,
}

impl CaseTag {
    pub fn new(case: Case, n: u32, ccw_v1: u32, cw_v1: u32, ccw_v3: u32, cw_v3: u32) -> Result<Self> {
        let t = CaseTag { case, n, ccw_v1, cw_v1, ccw_v3, cw_v3 };
        t.check()?;
        Ok(t)
    }

    /// Number of semicircles at `v1` and at `v3`.
    pub fn strikes(case: Case, n: u32) -> (u32, u32) {
        match case {
            Case::S1 | Case::S4 => (n, n),
            Case::S2 | Case::S3 => (0, 2 * n),
        }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::DecorationBound("repetition count must be at least 1".into()));
        }
        let (s1, s3) = Self::strikes(self.case, self.n);
        if self.ccw_v1 + self.cw_v1 != s1 || self.ccw_v3 + self.cw_v3 != s3 {
            return Err(Error::DecorationBound(format!(
                "{} with n = {} needs {s1} semicircles at v1 and {s3} at v3",
                self.case, self.n
            )));
        }
        Ok(())
    }

    /// `n * x`, the decoration-dependent part of the `s` coordinate.
    pub fn nx(&self) -> i64 {
        match self.case {
            Case::S1 | Case::S4 => 3 * self.cw_v1 as i64 - self.cw_v3 as i64,
            Case::S2 | Case::S3 => self.ccw_v3 as i64,
        }
    }

    /// `x` when it is an integer.
    pub fn x(&self) -> Option<i64> {
        let (nx, n) = (self.nx(), self.n as i64);
        (nx % n == 0).then_some(nx / n)
    }

    pub fn mixed_at_v1(&self) -> bool {
        self.ccw_v1 > 0 && self.cw_v1 > 0
    }

    pub fn mixed_at_v3(&self) -> bool {
        self.ccw_v3 > 0 && self.cw_v3 > 0
    }

    /// Every decoration assignment for a case and repetition count.
    pub fn all(case: Case, n: u32) -> Vec<CaseTag> {
        let (s1, s3) = Self::strikes(case, n);
        let mut out = Vec::new();
        for cw1 in 0..=s1 {
            for cw3 in 0..=s3 {
                out.push(CaseTag { case, n, ccw_v1: s1 - cw1, cw_v1: cw1, ccw_v3: s3 - cw3, cw_v3: cw3 });
            }
        }
        out
    }
}

pub fn case_class(c: &CaseTag) -> Result<H3Class> {
    c.check()?;
    let n = c.n as i64;
    Ok(match c.case {
        Case::S1 | Case::S2 => H3Class::new(c.nx(), n, 0),
        Case::S3 | Case::S4 => H3Class::new(c.nx() + n, n, n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseVerdict {
    /// The orbit tile misses the ray at angle `7 pi / 4` near `T`.
    RayExcluded,
    /// Near `T` the orbit tile contains only acute triangles.
    AcuteOnly,
    NotNullHomologous,
}

pub fn decide_case(c: &CaseTag, g: &GMatrix) -> Result<CaseVerdict> {
    let h = act(g, case_class(c)?);
    if pstar(h) != 0 {
        return Ok(CaseVerdict::NotNullHomologous);
    }
    Ok(match c.case {
        Case::S1 | Case::S4 => CaseVerdict::RayExcluded,
        Case::S2 | Case::S3 => CaseVerdict::AcuteOnly,
    })
}

/// Half-hexagons before and after `Y` for `a + b = 2k + 1`.
pub fn halfhex_pattern(k: u32) -> (String, String) {
    let (hi, lo) = (k.div_ceil(2) as usize, (k / 2) as usize);
    (format!("{}{}", "B".repeat(hi), "A".repeat(lo)), format!("{}{}", "B".repeat(lo), "A".repeat(hi)))
}

/// Parity class of a primitive vector with a `G` element reaching it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorClass {
    pub parity: (i64, i64),
    /// Base vector of the class: `(1,0)`, `(1,1)` or `(0,1)`.
    pub base: LatticeVector,
    /// Base paths in this class. The `(0,1)` class is the image of the
    /// `(1,0)` class under the rotation by `pi/3` of the hexagon.
    pub cases: Vec<Case>,
    pub rotated: bool,
    pub g: GMatrix,
}

/// An `SL2(Z)` matrix with first column `v`, as `[a, b, c, d]`.
fn carrier(v: LatticeVector) -> [i64; 4] {
    let e = num_integer::Integer::extended_gcd(&v.n, &v.m);
    let (x, y) = if e.gcd == 1 { (e.x, e.y) } else { (-e.x, -e.y) };
    [v.n, -y, v.m, x]
}

fn mul4(p: [i64; 4], q: [i64; 4]) -> [i64; 4] {
    [p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3], p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]]
}

pub fn classify_vector(v: LatticeVector) -> Result<VectorClass> {
    if !v.is_primitive() {
        return Err(Error::NotPrimitive(v.n, v.m));
    }
    let parity = v.parity();
    let (base, cases, rotated) = match parity {
        (1, 0) => (LatticeVector::new(1, 0), vec![Case::S1, Case::S2], false),
        (1, 1) => (LatticeVector::new(1, 1), vec![Case::S3, Case::S4], false),
        _ => (LatticeVector::new(0, 1), vec![Case::S1, Case::S2], true),
    };
    let hv = carrier(v);
    let hb = carrier(base);
    let hb_inv = [hb[3], -hb[1], -hb[2], hb[0]];
    for k in 0..2 {
        let m = mul4(mul4(hv, [1, k, 0, 1]), hb_inv);
        if let Ok(g) = GMatrix::new(m[0], m[1], m[2], m[3]) {
            debug_assert_eq!(g.apply(base), v);
            return Ok(VectorClass { parity, base, cases, rotated, g });
        }
    }
    unreachable!("the stabilizer of a parity vector mod 2 is generated by the unipotent U")
}

/// Result of [`collinearity_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeReport {
    /// Distance of `Y` from the line `XZ` on the given triangle.
    pub residual: f64,
    /// Signed offset of `Y` (left of `X -> Z` positive) after decreasing `theta1` by `h`.
    pub signed_offset: f64,
    /// Finite-difference derivative of the signed offset as `theta1` decreases.
    pub derivative: f64,
    /// Number of reflections in the traced word.
    pub word_length: usize,
}

/// Direction `X -> Z` of one repetition of `s2` (parameter `a`) or `s3`
/// (parameter `a + b`) in the frame of the 30-60-90 triangle with `v3` at the
/// origin, `v2 = (1, 0)` and `v1 = (0, sqrt 3)`.
pub fn probe_direction(case: Case, param: i64) -> Result<Point> {
    if param.rem_euclid(2) != 1 {
        return Err(Error::Parity(param));
    }
    let s3 = 3f64.sqrt();
    let t = param as f64;
    match case {
        Case::S2 => Ok(Point::new(3.0 * t, s3 * (2.0 - t))),
        Case::S3 => Ok(Point::new(3.0 * (t - 2.0), s3 * (t + 2.0))),
        c => Err(Error::Precondition(format!("collinearity probe is defined for s2 and s3, not {c}"))),
    }
}

struct Traced {
    word: Vec<usize>,
    /// Copy index and vertex label of `X`, `Y`, `Z`.
    marks: [(usize, usize); 3],
}

fn inside(tri: &[Point; 3], p: &Point, tol: f64) -> bool {
    let o = |a: &Point, b: &Point| (b - a).perp(&(p - a));
    let s = [o(&tri[0], &tri[1]), o(&tri[1], &tri[2]), o(&tri[2], &tri[0])];
    s.iter().all(|&x| x >= -tol) || s.iter().all(|&x| x <= tol)
}

fn copy_of(base: &[Point; 3], g: &crate::geom::PlanarIsometry) -> [Point; 3] {
    [g.apply(&base[0]), g.apply(&base[1]), g.apply(&base[2])]
}

/// Follow the segment `X -> Z` (nudged right) through reflected copies of the
/// 30-60-90 triangle, starting in a copy around `X = v3`.
fn trace(d: Point) -> Result<Traced> {
    let t0 = TriangleShape::t306090();
    let poly = t0.polygon();
    let base = t0.vertices();
    let refl: Vec<_> = (1..=3).map(|i| crate::geom::reflect_edge(&poly, i)).collect::<Result<_>>()?;
    let len = d.norm();
    let u = d / len;
    let right = Point::new(u.y, -u.x);
    let nudge = 1e-7;
    let start = -u * 1e-4 + right * nudge;
    let (x, y, z) = (Point::zeros(), d * 0.5, d);

    // copies around v3 are reached by alternating letters 1 and 2
    let mut queue = VecDeque::from([(Vec::<usize>::new(), crate::geom::PlanarIsometry::identity())]);
    let mut found = None;
    while let Some((w, g)) = queue.pop_front() {
        if inside(&copy_of(&base, &g), &start, 1e-12) {
            found = Some((w, g));
            break;
        }
        if w.len() < 6 {
            for l in [1, 2] {
                if w.last() != Some(&l) {
                    let mut w2 = w.clone();
                    w2.push(l);
                    queue.push_back((w2, g.compose(&refl[l - 1])));
                }
            }
        }
    }
    let (mut word, mut g) = found.ok_or_else(|| Error::Precondition("no start copy around X".into()))?;
    let mut gs = vec![crate::geom::PlanarIsometry::identity()];
    {
        let mut h = crate::geom::PlanarIsometry::identity();
        for &l in &word {
            h = h.compose(&refl[l - 1]);
            gs.push(h);
        }
    }

    let mut p = start;
    let mut entry: Option<usize> = None;
    let stop = u.dot(&z) + 1e-4;
    let limit = 200 + (len * 20.0) as usize;
    while u.dot(&p) < stop {
        if word.len() > limit {
            return Err(Error::Precondition("trace did not reach Z".into()));
        }
        let tri = copy_of(&base, &g);
        let mut best: Option<(f64, usize)> = None;
        for e in 1..=3 {
            if Some(e) == entry {
                continue;
            }
            let [i, j] = poly.edges[e - 1];
            let (a, b) = (tri[i], tri[j]);
            let den = u.perp(&(b - a));
            if den.abs() < 1e-15 {
                continue;
            }
            let s = (a - p).perp(&(b - a)) / den;
            let r = (a - p).perp(&u) / den;
            if s > 1e-12 && (-1e-9..=1.0 + 1e-9).contains(&r) && best.is_none_or(|(bs, _)| s < bs) {
                best = Some((s, e));
            }
        }
        let (s, e) = best.ok_or_else(|| Error::Precondition("ray left the copy without an exit".into()))?;
        p += u * s;
        g = g.compose(&refl[e - 1]);
        if word.last() == Some(&e) {
            // the ray leaves through the edge the start search came in by
            word.pop();
            gs.pop();
        } else {
            word.push(e);
            gs.push(g);
        }
        entry = Some(e);
    }

    let mut marks = [(0, 0); 3];
    for (slot, target) in [x, y, z].iter().enumerate() {
        let hit = gs.iter().enumerate().find_map(|(k, h)| {
            (0..3).find(|&v| (h.apply(&base[v]) - target).norm() < 1e-7).map(|v| (k, v + 1))
        });
        marks[slot] = hit.ok_or_else(|| {
            Error::Precondition(format!("point {slot} of the probe is not a vertex of the traced copies"))
        })?;
    }
    Ok(Traced { word, marks })
}

fn signed_offset(t: &TriangleShape, tr: &Traced) -> Result<f64> {
    let poly = t.polygon();
    let w = EdgeWord::new(tr.word.clone(), 3)?;
    let pl = placements(&poly, &w)?;
    let pt = |(k, v): (usize, usize)| pl[k].apply(&poly.vertices[v - 1]);
    let (x, y, z) = (pt(tr.marks[0]), pt(tr.marks[1]), pt(tr.marks[2]));
    let xz = z - x;
    Ok(xz.perp(&(y - x)) / xz.norm())
}

/// Unfold the repeated `s2` or `s3` path, read off `X`, `Y`, `Z`, and measure
/// how far `Y` sits from the line `XZ` on `t` and after lowering `theta1` by `h`.
pub fn collinearity_probe(case: Case, param: i64, t: &TriangleShape, h: f64) -> Result<ProbeReport> {
    let d = probe_direction(case, param)?;
    let tr = trace(d)?;
    let here = signed_offset(t, &tr)?;
    let [a1, a2, _] = t.angles();
    if a1 - h <= 0.0 || a1 - h + a2 >= PI {
        return Err(Error::Precondition("step leaves the parameter square".into()));
    }
    let moved = signed_offset(&TriangleShape::from_radians(a1 - h, a2)?, &tr)?;
    Ok(ProbeReport {
        residual: here.abs(),
        signed_offset: moved,
        derivative: (moved - here) / h,
        word_length: tr.word.len(),
    })
}
