//! Orbit-tile rasters over the `(theta1, theta2)` square and ray probes.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::geom::{EdgeWord, TriangleShape};
use crate::unfolding::{classify_word_tol, Verdict};
use crate::{Error, Result};

/// Axis-aligned rectangle of angle pairs, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub theta1: (f64, f64),
    pub theta2: (f64, f64),
}

impl Region {
    pub fn square(lo: f64, hi: f64) -> Self {
        Region { theta1: (lo, hi), theta2: (lo, hi) }
    }

    fn check(&self) -> Result<()> {
        for (name, (a, b)) in [("theta1", self.theta1), ("theta2", self.theta2)] {
            if a.is_nan() || b.is_nan() || a >= b {
                return Err(Error::DegenerateRegion(format!("{name} range [{a}, {b}] is empty")));
            }
            if a < 0.0 || b > FRAC_PI_2 {
                return Err(Error::DegenerateRegion(format!("{name} range [{a}, {b}] leaves (0, pi/2)")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub periodic: usize,
    pub saddle: usize,
    pub infeasible: usize,
}

/// Verdicts at cell centers; `cells[j * nx + i]` has `theta1` index `i` and `theta2` index `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TileRaster {
    pub word: EdgeWord,
    pub region: Region,
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<Verdict>,
}

impl TileRaster {
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        cell_center(&self.region, self.nx, self.ny, i, j)
    }

    pub fn at(&self, i: usize, j: usize) -> Verdict {
        self.cells[j * self.nx + i]
    }

    pub fn counts(&self) -> VerdictCounts {
        let mut c = VerdictCounts::default();
        for v in &self.cells {
            match v {
                Verdict::Periodic => c.periodic += 1,
                Verdict::Saddle => c.saddle += 1,
                Verdict::Infeasible => c.infeasible += 1,
            }
        }
        c
    }
}

fn cell_center(r: &Region, nx: usize, ny: usize, i: usize, j: usize) -> (f64, f64) {
    let dx = (r.theta1.1 - r.theta1.0) / nx as f64;
    let dy = (r.theta2.1 - r.theta2.0) / ny as f64;
    (r.theta1.0 + (i as f64 + 0.5) * dx, r.theta2.0 + (j as f64 + 0.5) * dy)
}

/// Classify `word` at each cell center of an `nx` by `ny` grid over `region`.
pub fn raster(word: &EdgeWord, region: Region, resolution: (usize, usize), tol: f64) -> Result<TileRaster> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    if word.n() != 3 {
        return Err(Error::ShapeMismatch(word.n(), 3));
    }
    region.check()?;
    let (nx, ny) = resolution;
    if nx == 0 || ny == 0 {
        return Err(Error::DegenerateRegion("resolution must be positive".into()));
    }
    let cells = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (t1, t2) = cell_center(&region, nx, ny, idx % nx, idx / nx);
            let p = TriangleShape::from_radians(t1, t2)?.polygon();
            classify_word_tol(&p, word, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TileRaster { word: word.clone(), region, nx, ny, cells })
}

/// Geometric samples `delta * 2^-i`, `i = 0 .. samples`, along a ray from
/// `origin` in the `(theta1, theta2)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayProbe {
    pub origin: TriangleShape,
    pub direction: f64,
    /// Angular half-width of a fan of rays; `0` probes the single ray.
    pub epsilon: f64,
    pub delta: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RaySample {
    pub direction: f64,
    pub t: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "result", content = "samples", rename_all = "kebab-case")]
pub enum ProbeOutcome {
    AllExcluded,
    /// The samples at which the word is periodic.
    Hit(Vec<RaySample>),
}

impl RayProbe {
    pub fn directions(&self) -> Vec<f64> {
        if self.epsilon > 0.0 {
            vec![self.direction - self.epsilon, self.direction, self.direction + self.epsilon]
        } else {
            vec![self.direction]
        }
    }

    pub fn sample_points(&self) -> Result<Vec<(f64, f64, f64, f64)>> {
        if self.samples < 2 {
            return Err(Error::Precondition("a ray probe needs at least two samples".into()));
        }
        if self.delta.is_nan() || self.delta <= 0.0 {
            return Err(Error::Precondition("delta must be positive".into()));
        }
        let (a, b) = (self.origin.theta1.value(), self.origin.theta2.value());
        let mut out = Vec::new();
        for phi in self.directions() {
            for i in 0..self.samples {
                let t = self.delta * 0.5f64.powi(i as i32);
                let (t1, t2) = (a + t * phi.cos(), b + t * phi.sin());
                TriangleShape::from_radians(t1, t2)
                    .map_err(|_| Error::Precondition(format!("sample ({t1}, {t2}) is not a valid triangle")))?;
                out.push((phi, t, t1, t2));
            }
        }
        Ok(out)
    }
}

/// Every sample with its verdict.
pub fn ray_samples(p: &RayProbe, word: &EdgeWord, tol: f64) -> Result<Vec<RaySample>> {
    let origin = p.origin.polygon();
    match classify_word_tol(&origin, word, tol)? {
        Verdict::Saddle => {}
        v => return Err(Error::Precondition(format!("word is {v} at the origin, not a saddle"))),
    }
    p.sample_points()?
        .into_iter()
        .map(|(direction, t, theta1, theta2)| {
            let q = TriangleShape::from_radians(theta1, theta2)?.polygon();
            Ok(RaySample { direction, t, theta1, theta2, verdict: classify_word_tol(&q, word, tol)? })
        })
        .collect()
}

pub fn ray_probe(p: &RayProbe, word: &EdgeWord, tol: f64) -> Result<ProbeOutcome> {
    let hits: Vec<RaySample> =
        ray_samples(p, word, tol)?.into_iter().filter(|s| s.verdict == Verdict::Periodic).collect();
    Ok(if hits.is_empty() { ProbeOutcome::AllExcluded } else { ProbeOutcome::Hit(hits) })
}
