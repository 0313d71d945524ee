//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use billiard_core::geom::EdgeWord;
use rand::Rng;

pub type M3 = [[f64; 3]; 3];

pub fn mul(a: &M3, b: &M3) -> M3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn apply(m: &M3, p: [f64; 2]) -> [f64; 2] {
    [m[0][0] * p[0] + m[0][1] * p[1] + m[0][2], m[1][0] * p[0] + m[1][1] * p[1] + m[1][2]]
}

pub const ID: M3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Homogeneous matrix of the mirror in the line through `a` and `b`.
pub fn mirror(a: [f64; 2], b: [f64; 2]) -> M3 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let l2 = dx * dx + dy * dy;
    let (c, s) = ((dx * dx - dy * dy) / l2, 2.0 * dx * dy / l2);
    // x' = a + L (x - a) with L = [[c, s], [s, -c]]
    let tx = a[0] - c * a[0] - s * a[1];
    let ty = a[1] - s * a[0] + c * a[1];
    [[c, s, tx], [s, -c, ty], [0.0, 0.0, 1.0]]
}

/// Triangle with `v3 = (0,0)`, `v2 = (1,0)` and angles `t1` at `v1`, `t2` at `v2`.
pub fn triangle(t1: f64, t2: f64) -> [[f64; 2]; 3] {
    let t3 = PI - t1 - t2;
    // side v3v1 is opposite v2: |v3v1| / sin t2 = |v2v3| / sin t1
    let r = t2.sin() / t1.sin();
    [[r * t3.cos(), r * t3.sin()], [1.0, 0.0], [0.0, 0.0]]
}

/// Endpoints of edge `i` (opposite vertex `i`).
pub fn edge(v: &[[f64; 2]; 3], i: usize) -> ([f64; 2], [f64; 2]) {
    match i {
        1 => (v[1], v[2]),
        2 => (v[2], v[0]),
        _ => (v[0], v[1]),
    }
}

pub fn placements(v: &[[f64; 2]; 3], w: &[usize]) -> Vec<M3> {
    let mut out = vec![ID];
    for &l in w {
        let (a, b) = edge(v, l);
        let last = *out.last().unwrap();
        out.push(mul(&last, &mirror(a, b)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    Periodic,
    Saddle,
    Infeasible,
}

/// Classification by direct construction: closure must be a translation,
/// and lines parallel to it must cross every crossed edge in order.
pub fn oracle(t1: f64, t2: f64, w: &[usize]) -> Oracle {
    let v = triangle(t1, t2);
    let pl = placements(&v, w);
    let last = pl.last().unwrap();
    if (last[0][0] - 1.0).abs() > 1e-9 || last[0][1].abs() > 1e-9 || last[1][0].abs() > 1e-9 {
        return Oracle::Infeasible;
    }
    let tr = [last[0][2], last[1][2]];
    let len = tr[0].hypot(tr[1]);
    if len < 1e-9 {
        return Oracle::Infeasible;
    }
    let u = [tr[0] / len, tr[1] / len];
    let n = [-u[1], u[0]];
    let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
    let mut segs: Vec<([f64; 2], [f64; 2])> = w
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let (a, b) = edge(&v, l);
            (apply(&pl[k], a), apply(&pl[k], b))
        })
        .collect();
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for &(a, b) in &segs {
        let (pa, pb) = (dot(n, a), dot(n, b));
        lo = lo.max(pa.min(pb));
        hi = hi.min(pa.max(pb));
    }
    if hi - lo < -1e-9 {
        return Oracle::Infeasible;
    }
    let (a0, b0) = segs[0];
    segs.push(([a0[0] + tr[0], a0[1] + tr[1]], [b0[0] + tr[0], b0[1] + tr[1]]));
    let c = 0.5 * (lo + hi);
    let mut prev = f64::NEG_INFINITY;
    for &(a, b) in &segs {
        let (pa, pb) = (dot(n, a), dot(n, b));
        if (pb - pa).abs() < 1e-12 {
            return Oracle::Infeasible;
        }
        let s = (c - pa) / (pb - pa);
        let t = dot(u, [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
        if t < prev - 1e-9 {
            return Oracle::Infeasible;
        }
        prev = t;
    }
    if hi - lo > 1e-9 {
        Oracle::Periodic
    } else {
        Oracle::Saddle
    }
}

/// All words over `{1,2,3}` with distinct consecutive letters, of length `len`.
pub fn words(len: usize, cyclic: bool) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for l in 1..=3 {
                if w.last() != Some(&l) {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
            }
        }
        out = next;
    }
    if cyclic {
        out.retain(|w| w.len() < 2 || w[0] != w[w.len() - 1]);
    }
    out
}

pub fn edge_word(w: &[usize]) -> EdgeWord {
    EdgeWord::new(w.to_vec(), 3).unwrap()
}

/// Letter counts at odd positions minus even positions.
pub fn signed_counts(w: &[usize]) -> [i64; 3] {
    let mut d = [0; 3];
    for (j, &l) in w.iter().enumerate() {
        d[l - 1] += if j % 2 == 0 { 1 } else { -1 };
    }
    d
}

/// A random triangle with all angles at least `margin` and no right angle.
pub fn random_triangle<R: Rng>(rng: &mut R, margin: f64) -> (f64, f64) {
    loop {
        let a = rng.gen_range(margin..PI / 2.0);
        let b = rng.gen_range(margin..PI / 2.0);
        let c = PI - a - b;
        if c > margin && (c - PI / 2.0).abs() > margin {
            return (a, b);
        }
    }
}
