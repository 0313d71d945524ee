//! Stability of periodic words, winding vectors on the doubled triangle and
//! semicircle decorations of saddle connections.

use serde::Serialize;

use crate::geom::{in_tau, EdgeWord, PolygonShape};
use crate::unfolding::{classify_with_corridor, unfold, Corridor, Side, UnfoldingStrip, Verdict};
use crate::{Error, Result, DEFAULT_TOL};

/// Winding numbers around the punctures `v1..vn`, counterclockwise positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WindingVector {
    pub w: Vec<i64>,
}

impl WindingVector {
    pub fn is_zero(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }

    /// A loop around every puncture once bounds on the doubled triangle, so
    /// constant vectors are null-homologous.
    pub fn is_null_homologous(&self) -> bool {
        self.w.windows(2).all(|p| p[0] == p[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Decoration {
    #[serde(rename = "CW")]
    Cw,
    #[serde(rename = "CCW")]
    Ccw,
}

impl Decoration {
    pub fn flip(self) -> Self {
        match self {
            Decoration::Cw => Decoration::Ccw,
            Decoration::Ccw => Decoration::Cw,
        }
    }

    /// `+1` for counterclockwise, `-1` for clockwise.
    pub fn sign(self) -> i64 {
        match self {
            Decoration::Ccw => 1,
            Decoration::Cw => -1,
        }
    }

    pub fn from_side(s: Side) -> Self {
        match s {
            Side::Left => Decoration::Ccw,
            Side::Right => Decoration::Cw,
        }
    }
}

/// A vertex hit by a saddle connection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Strike {
    pub copy: usize,
    pub vertex: usize,
    /// Side of the vertex relative to the degenerate corridor.
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecoratedPath {
    #[serde(serialize_with = "ser_word")]
    pub word: EdgeWord,
    pub strikes: Vec<Strike>,
    pub decorations: Vec<Decoration>,
}

fn ser_word<S: serde::Serializer>(w: &EdgeWord, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(w.letters())
}

impl DecoratedPath {
    pub fn new(word: EdgeWord, strikes: Vec<Strike>, decorations: Vec<Decoration>) -> Result<Self> {
        if strikes.len() != decorations.len() {
            return Err(Error::InvalidWord(format!(
                "{} strikes but {} decorations",
                strikes.len(),
                decorations.len()
            )));
        }
        Ok(DecoratedPath { word, strikes, decorations })
    }

    pub fn flipped(&self) -> Self {
        DecoratedPath {
            decorations: self.decorations.iter().map(|d| d.flip()).collect(),
            ..self.clone()
        }
    }

    pub fn with_all(&self, d: Decoration) -> Self {
        DecoratedPath { decorations: vec![d; self.strikes.len()], ..self.clone() }
    }
}

/// Stable iff the word lies in `tau_n`.
pub fn is_stable(w: &EdgeWord) -> bool {
    in_tau(w)
}

fn check_closed_triangle(w: &EdgeWord) -> Result<()> {
    if w.n() != 3 {
        return Err(Error::OutOfScope(format!("winding vectors need n = 3, got {}", w.n())));
    }
    if w.len() % 2 == 1 {
        return Err(Error::Precondition("odd words do not close up on the double".into()));
    }
    if !w.is_cyclic() {
        return Err(Error::InvalidWord("word is not cyclic".into()));
    }
    Ok(())
}

/// Corner counts in half-turns: the cyclic pair at (1-based) position `j`
/// pivots about the vertex opposite the third edge, in the direction given
/// by the cyclic order of the two labels and the parity of `j`.
fn corner_halves(w: &EdgeWord) -> Vec<i64> {
    let l = w.letters();
    let mut h = vec![0i64; 3];
    for j in 0..l.len() {
        let (a, b) = (l[j], l[(j + 1) % l.len()]);
        let sigma = if b % 3 == (a + 1) % 3 { 1 } else { -1 };
        let parity = if j % 2 == 0 { -1 } else { 1 };
        h[6 - a - b - 1] += parity * sigma;
    }
    h
}

/// Winding vector of the closed path of `w` on the doubled triangle,
/// optionally with semicircle decorations at struck vertices.
pub fn winding_vector(w: &EdgeWord, decorations: Option<&DecoratedPath>) -> Result<WindingVector> {
    check_closed_triangle(w)?;
    let mut h = corner_halves(w);
    if let Some(d) = decorations {
        if d.word != *w {
            return Err(Error::InvalidWord("decorations belong to another word".into()));
        }
        for (s, dec) in d.strikes.iter().zip(&d.decorations) {
            if s.vertex == 0 || s.vertex > 3 {
                return Err(Error::LabelRange { label: s.vertex, n: 3 });
            }
            let natural = Decoration::from_side(s.side);
            h[s.vertex - 1] += dec.sign() - natural.sign();
        }
    }
    Ok(WindingVector { w: h.iter().map(|x| x / 2).collect() })
}

/// Strip and corridor of a word on a polygon where it is periodic.
#[derive(Debug, Clone)]
pub struct Reference {
    pub strip: UnfoldingStrip,
    pub corridor: Corridor,
}

impl Reference {
    pub fn from_polygon(q: &PolygonShape, w: &EdgeWord) -> Result<Self> {
        match classify_with_corridor(q, w, DEFAULT_TOL)? {
            (Verdict::Periodic, Some(c)) => Ok(Reference { strip: unfold(q, w)?, corridor: c }),
            (v, _) => Err(Error::Classification(format!("reference word is {v}, not periodic"))),
        }
    }
}

/// Semicircles for each vertex struck by the saddle connection of `w` on `p`:
/// counterclockwise where the vertex lies left of the reference trajectory.
pub fn decorate(p: &PolygonShape, w: &EdgeWord, reference: &Reference) -> Result<DecoratedPath> {
    if reference.strip.word != *w {
        return Err(Error::InvalidWord("reference uses a different word".into()));
    }
    let c = match classify_with_corridor(p, w, DEFAULT_TOL)? {
        (Verdict::Saddle, Some(c)) => c,
        (v, _) => return Err(Error::Classification(format!("word is {v}, not a saddle"))),
    };
    let mut strikes = Vec::new();
    let mut decorations = Vec::new();
    for t in &c.tight_vertices {
        let q = reference.strip.vertex(t.copy, t.vertex);
        strikes.push(Strike { copy: t.copy, vertex: t.vertex, side: t.side });
        decorations.push(Decoration::from_side(reference.corridor.side_of(&q)));
    }
    DecoratedPath::new(w.clone(), strikes, decorations)
}

/// Strikes of the saddle connection of `w` on `p`, decorated on their own sides.
pub fn natural_decoration(p: &PolygonShape, w: &EdgeWord) -> Result<DecoratedPath> {
    let c = match classify_with_corridor(p, w, DEFAULT_TOL)? {
        (Verdict::Saddle, Some(c)) => c,
        (v, _) => return Err(Error::Classification(format!("word is {v}, not a saddle"))),
    };
    let strikes: Vec<Strike> =
        c.tight_vertices.iter().map(|t| Strike { copy: t.copy, vertex: t.vertex, side: t.side }).collect();
    let decorations = strikes.iter().map(|s| Decoration::from_side(s.side)).collect();
    DecoratedPath::new(w.clone(), strikes, decorations)
}

pub fn arises_from_stable(d: &DecoratedPath) -> bool {
    winding_vector(&d.word, Some(d)).map(|v| v.is_null_homologous()).unwrap_or(false)
}

/// Coefficients `c_v` with `sum c_v alpha_v = 0 (mod 2 pi)` on every polygon
/// where `w` closes with trivial rotation; first nonzero entry positive.
pub fn integer_relation(w: &EdgeWord) -> Result<Vec<i64>> {
    let v = winding_vector(w, None)?;
    if v.is_null_homologous() {
        return Err(Error::NoRelation);
    }
    let mut c: Vec<i64> = v.w.iter().map(|x| 2 * x).collect();
    if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        c.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(c)
}

/// JSON summary for the `stability` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub winding: Option<Vec<i64>>,
    pub relation: Option<Vec<i64>>,
}

pub fn stability_report(w: &EdgeWord) -> StabilityReport {
    let winding = winding_vector(w, None).ok().map(|v| v.w);
    StabilityReport { stable: is_stable(w), winding, relation: integer_relation(w).ok() }
}
