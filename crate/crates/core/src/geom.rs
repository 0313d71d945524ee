//! Polygons, edge reflections and the formal word algebra.
//!
//! Triangles follow the labeling in which `v3` sits at the origin, `v2` at
//! `(1, 0)` and `v1` above the base; edge `i` is opposite vertex `i`, `theta1`
//! is the angle at `v1` and `theta2` the angle at `v2`. General `n`-gons use
//! counterclockwise vertices with edge `i` joining vertices `i` and `i + 1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, DEFAULT_TOL};

pub type Point = Vector2<f64>;

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_pi(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Wrap an axis angle into `[0, pi)`.
pub fn wrap_axis(a: f64) -> f64 {
    let r = a.rem_euclid(PI);
    if PI - r < 1e-15 {
        0.0
    } else {
        r
    }
}

/// An angle in radians, remembering an exact rational multiple of pi when
/// one was supplied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    pub radians: f64,
    /// `(p, q)` with `radians = p/q * pi`, `q > 0`, reduced.
    pub pi_fraction: Option<(i64, i64)>,
}

impl Angle {
    pub fn radians(r: f64) -> Self {
        Angle { radians: r, pi_fraction: None }
    }

    pub fn pi_frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        let g = num_integer::gcd(p, q).max(1);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        Angle { radians: p as f64 / q as f64 * PI, pi_fraction: Some((p, q)) }
    }

    pub fn value(&self) -> f64 {
        self.radians
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_fraction {
            Some((p, 1)) => write!(f, "{p} pi"),
            Some((p, q)) => write!(f, "{p}/{q} pi"),
            None => write!(f, "{}", self.radians),
        }
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Accepts plain floats (radians) and `p/q pi`, `p pi`, `pi`, `p/q*pi`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("cannot read angle '{s}'"));
        let Some(head) = t.strip_suffix("pi") else {
            return t.parse::<f64>().map(Angle::radians).map_err(|_| bad());
        };
        let head = head.trim().trim_end_matches('*').trim();
        if head.is_empty() {
            return Ok(Angle::pi_frac(1, 1));
        }
        if head == "-" {
            return Ok(Angle::pi_frac(-1, 1));
        }
        let (p, q) = match head.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (head, "1"),
        };
        match (p.parse::<i64>(), q.parse::<i64>()) {
            (Ok(p), Ok(q)) if q != 0 => Ok(Angle::pi_frac(p, q)),
            _ => {
                let p: f64 = p.parse().map_err(|_| bad())?;
                let q: f64 = q.parse().map_err(|_| bad())?;
                if q == 0.0 {
                    return Err(bad());
                }
                Ok(Angle::radians(p / q * PI))
            }
        }
    }
}

/// Serialized form of an angle: a float in radians or a `"p/q pi"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleRepr {
    Num(f64),
    Text(String),
}

impl AngleRepr {
    pub fn to_angle(&self) -> Result<Angle> {
        match self {
            AngleRepr::Num(x) => Ok(Angle::radians(*x)),
            AngleRepr::Text(s) => s.parse(),
        }
    }
}

/// A triangle up to similarity, given by the angles at `v1` and `v2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleShape {
    pub theta1: Angle,
    pub theta2: Angle,
}

impl TriangleShape {
    pub fn new(theta1: Angle, theta2: Angle) -> Result<Self> {
        let (a, b) = (theta1.value(), theta2.value());
        let open = |x: f64| x > 0.0 && x < PI / 2.0;
        if !open(a) || !open(b) {
            return Err(Error::InvalidShape(format!(
                "angles must lie in (0, pi/2), got ({a}, {b})"
            )));
        }
        if a + b >= PI {
            return Err(Error::InvalidShape("third angle must be positive".into()));
        }
        Ok(TriangleShape { theta1, theta2 })
    }

    pub fn from_radians(theta1: f64, theta2: f64) -> Result<Self> {
        Self::new(Angle::radians(theta1), Angle::radians(theta2))
    }

    pub fn equilateral() -> Self {
        Self::new(Angle::pi_frac(1, 3), Angle::pi_frac(1, 3)).unwrap()
    }

    pub fn t306090() -> Self {
        Self::new(Angle::pi_frac(1, 6), Angle::pi_frac(1, 3)).unwrap()
    }

    /// The isosceles Veech triangle `V_n`: both base angles `pi/(2n)`, apex at `v3`.
    pub fn veech(n: u32) -> Self {
        let a = Angle::pi_frac(1, 2 * n as i64);
        Self::new(a, a).unwrap()
    }

    /// Interior angles `(alpha1, alpha2, alpha3)` at `v1, v2, v3`.
    pub fn angles(&self) -> [f64; 3] {
        let (a, b) = (self.theta1.value(), self.theta2.value());
        [a, b, PI - a - b]
    }

    pub fn theta3(&self) -> f64 {
        self.angles()[2]
    }

    pub fn is_right(&self, tol: f64) -> bool {
        (self.theta3() - PI / 2.0).abs() < tol
    }

    /// Vertices `[v1, v2, v3]` with `v3 = (0,0)` and `v2 = (1,0)`.
    pub fn vertices(&self) -> [Point; 3] {
        let [a1, a2, a3] = self.angles();
        let r = a2.sin() / a1.sin();
        [Point::new(r * a3.cos(), r * a3.sin()), Point::new(1.0, 0.0), Point::new(0.0, 0.0)]
    }

    pub fn polygon(&self) -> PolygonShape {
        let v = self.vertices();
        PolygonShape {
            vertices: v.to_vec(),
            edges: vec![[1, 2], [2, 0], [0, 1]],
        }
    }
}

/// A labeled polygon: vertices in label order and, for each edge label, the
/// indices of its two endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonShape {
    pub vertices: Vec<Point>,
    pub edges: Vec<[usize; 2]>,
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o = |p: Point, q: Point, r: Point| (q - p).perp(&(r - p));
    let (d1, d2) = (o(a, b, c), o(a, b, d));
    let (d3, d4) = (o(c, d, a), o(c, d, b));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

impl PolygonShape {
    /// An `n`-gon with counterclockwise vertices; edge `i` joins `i` and `i+1`.
    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidShape("need at least 3 vertices".into()));
        }
        for i in 0..n {
            if (vertices[i] - vertices[(i + 1) % n]).norm() < DEFAULT_TOL {
                return Err(Error::InvalidShape("consecutive vertices coincide".into()));
            }
        }
        let area: f64 = (0..n).map(|i| vertices[i].perp(&vertices[(i + 1) % n])).sum();
        if area <= 0.0 {
            return Err(Error::InvalidShape("vertices must be counterclockwise".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                if segments_cross(a, b, c, d) {
                    return Err(Error::InvalidShape("polygon is not simple".into()));
                }
            }
        }
        let edges = (0..n).map(|i| [i, (i + 1) % n]).collect();
        Ok(PolygonShape { vertices, edges })
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    fn check_label(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            Err(Error::LabelRange { label: i, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// Endpoints of edge `i` (1-based).
    pub fn edge(&self, i: usize) -> Result<(Point, Point)> {
        self.check_label(i)?;
        let [a, b] = self.edges[i - 1];
        Ok((self.vertices[a], self.vertices[b]))
    }

    /// Vertex labels (1-based) of the endpoints of edge `i`.
    pub fn edge_vertex_labels(&self, i: usize) -> Result<[usize; 2]> {
        self.check_label(i)?;
        let [a, b] = self.edges[i - 1];
        Ok([a + 1, b + 1])
    }

    /// Direction angle of edge `i` as a line, in `[0, pi)`.
    pub fn edge_direction(&self, i: usize) -> Result<f64> {
        let (a, b) = self.edge(i)?;
        let d = b - a;
        Ok(wrap_axis(d.y.atan2(d.x)))
    }
}

/// Linear part of a planar isometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orthogonal {
    /// Counterclockwise rotation by the angle, kept in `(-pi, pi]`.
    Rotation(f64),
    /// Reflection across the line through the origin at this axis angle, in `[0, pi)`.
    Reflection(f64),
}

impl Orthogonal {
    pub fn matrix(&self) -> Matrix2<f64> {
        match *self {
            Orthogonal::Rotation(t) => {
                let (s, c) = t.sin_cos();
                Matrix2::new(c, -s, s, c)
            }
            Orthogonal::Reflection(phi) => {
                let (s, c) = (2.0 * phi).sin_cos();
                Matrix2::new(c, s, s, -c)
            }
        }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Orthogonal) -> Orthogonal {
        use Orthogonal::*;
        match (*self, *other) {
            (Rotation(a), Rotation(b)) => Rotation(wrap_pi(a + b)),
            (Rotation(a), Reflection(p)) => Reflection(wrap_axis(p + a / 2.0)),
            (Reflection(p), Rotation(b)) => Reflection(wrap_axis(p - b / 2.0)),
            (Reflection(p), Reflection(q)) => Rotation(wrap_pi(2.0 * (p - q))),
        }
    }

    pub fn inverse(&self) -> Orthogonal {
        match *self {
            Orthogonal::Rotation(a) => Orthogonal::Rotation(wrap_pi(-a)),
            r => r,
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        matches!(*self, Orthogonal::Rotation(a) if a.abs() < tol)
    }
}

/// `p -> O p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarIsometry {
    pub orthogonal: Orthogonal,
    pub translation: Point,
}

impl PlanarIsometry {
    pub fn identity() -> Self {
        PlanarIsometry { orthogonal: Orthogonal::Rotation(0.0), translation: Point::zeros() }
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.orthogonal.matrix() * p + self.translation
    }

    /// `self` after `other`: `(self . other)(p) = self(other(p))`.
    pub fn compose(&self, other: &PlanarIsometry) -> PlanarIsometry {
        PlanarIsometry {
            orthogonal: self.orthogonal.compose(&other.orthogonal),
            translation: self.orthogonal.matrix() * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> PlanarIsometry {
        let inv = self.orthogonal.inverse();
        PlanarIsometry { orthogonal: inv, translation: -(inv.matrix() * self.translation) }
    }

    pub fn is_translation(&self, tol: f64) -> bool {
        self.orthogonal.is_identity(tol)
    }

    /// Largest entry-wise deviation between the affine matrices of two isometries.
    pub fn distance(&self, other: &PlanarIsometry) -> f64 {
        let m = self.orthogonal.matrix() - other.orthogonal.matrix();
        let t = self.translation - other.translation;
        m.iter().chain(t.iter()).fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }
}

/// A finite sequence of 1-based edge labels over an alphabet of size `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeWord {
    letters: Vec<usize>,
    n: usize,
}

impl EdgeWord {
    /// A word with labels in `1..=n` and no immediate repeats.
    pub fn new(letters: Vec<usize>, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidWord(format!("alphabet size {n} < 3")));
        }
        for &l in &letters {
            if l == 0 || l > n {
                return Err(Error::LabelRange { label: l, n });
            }
        }
        if let Some(w) = letters.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidWord(format!("letter {} repeats consecutively", w[0])));
        }
        Ok(EdgeWord { letters, n })
    }

    /// Like [`EdgeWord::new`], additionally requiring first and last letters to differ.
    pub fn cyclic(letters: Vec<usize>, n: usize) -> Result<Self> {
        let w = Self::new(letters, n)?;
        if !w.is_cyclic() {
            return Err(Error::InvalidWord("first and last letters coincide".into()));
        }
        Ok(w)
    }

    /// Parse a comma-separated word such as `1,2,3,1,2,3`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Self::new(vec![], n);
        }
        let letters = t
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad letter '{x}'"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters, n)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => self.letters.len() < 2 || a != b,
            _ => true,
        }
    }

    /// Concatenation; fails if the junction repeats a letter.
    pub fn concat(&self, other: &EdgeWord) -> Result<EdgeWord> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(self.n, other.n));
        }
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        EdgeWord::new(l, self.n)
    }

    /// The word repeated `k` times.
    pub fn repeat(&self, k: usize) -> Result<EdgeWord> {
        EdgeWord::new(self.letters.repeat(k), self.n)
    }
}

impl fmt::Display for EdgeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Signed letter counts: `d_i` is the number of occurrences of `i` at odd
/// (1-based) positions minus those at even positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RotationVector {
    pub d: Vec<i64>,
    pub parity: u8,
}

impl RotationVector {
    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|&x| x == 0)
    }
}

/// Reflection fixing edge `i` of `p` pointwise.
pub fn reflect_edge(p: &PolygonShape, i: usize) -> Result<PlanarIsometry> {
    let (a, b) = p.edge(i)?;
    let d = b - a;
    let orth = Orthogonal::Reflection(wrap_axis(d.y.atan2(d.x)));
    let translation = a - orth.matrix() * a;
    Ok(PlanarIsometry { orthogonal: orth, translation })
}

/// Placement of the last copy in the unfolding along `w`: copy `k` is copy
/// `k - 1` reflected across its own edge `w[k]`, so the first letter is the
/// first reflection performed.
pub fn eval_word(p: &PolygonShape, w: &EdgeWord) -> Result<PlanarIsometry> {
    Ok(placements(p, w)?.pop().expect("placements are never empty"))
}

/// Placements of all `|w| + 1` copies in the unfolding along `w`.
pub fn placements(p: &PolygonShape, w: &EdgeWord) -> Result<Vec<PlanarIsometry>> {
    if w.n() != p.n() {
        return Err(Error::ShapeMismatch(w.n(), p.n()));
    }
    let refl = (1..=p.n()).map(|i| reflect_edge(p, i)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut cur = PlanarIsometry::identity();
    out.push(cur);
    for &l in w.letters() {
        cur = cur.compose(&refl[l - 1]);
        out.push(cur);
    }
    Ok(out)
}

pub fn rotation_vector(w: &EdgeWord) -> RotationVector {
    let mut d = vec![0i64; w.n()];
    for (j, &l) in w.letters().iter().enumerate() {
        d[l - 1] += if j % 2 == 0 { 1 } else { -1 };
    }
    RotationVector { d, parity: (w.len() % 2) as u8 }
}

/// Membership in the kernel of the derivative: even length and zero rotation vector.
pub fn in_tau(w: &EdgeWord) -> bool {
    let r = rotation_vector(w);
    r.parity == 0 && r.is_zero()
}

/// JSON document describing a polygon and a word:
/// `{"n": 3, "angles": ["1/6 pi", "1/3 pi"], "word": [1,2,3,1,2,3]}`.
/// For `n = 3`, `angles` holds `theta1, theta2` (a third entry is checked
/// against the angle sum). For other `n`, supply `vertices` instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonInput {
    pub n: usize,
    #[serde(default)]
    pub angles: Vec<AngleRepr>,
    #[serde(default)]
    pub vertices: Vec<[f64; 2]>,
    #[serde(default)]
    pub word: Vec<usize>,
}

impl PolygonInput {
    pub fn triangle(&self) -> Result<TriangleShape> {
        if self.n != 3 {
            return Err(Error::InvalidShape(format!("n = {} is not a triangle", self.n)));
        }
        let a = self.angles.iter().map(AngleRepr::to_angle).collect::<Result<Vec<_>>>()?;
        match a.len() {
            2 => TriangleShape::new(a[0], a[1]),
            3 => {
                let sum: f64 = a.iter().map(Angle::value).sum();
                if (sum - PI).abs() > 1e-9 {
                    return Err(Error::InvalidShape("angles must sum to pi".into()));
                }
                TriangleShape::new(a[0], a[1])
            }
            k => Err(Error::InvalidShape(format!("expected 2 or 3 angles, got {k}"))),
        }
    }

    pub fn polygon(&self) -> Result<PolygonShape> {
        if !self.vertices.is_empty() {
            let p = PolygonShape::from_vertices(
                self.vertices.iter().map(|v| Point::new(v[0], v[1])).collect(),
            )?;
            if p.n() != self.n {
                return Err(Error::ShapeMismatch(self.n, p.n()));
            }
            return Ok(p);
        }
        Ok(self.triangle()?.polygon())
    }

    pub fn edge_word(&self) -> Result<EdgeWord> {
        EdgeWord::new(self.word.clone(), self.n)
    }
}
