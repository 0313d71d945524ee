//! Horizontal saddle-connection components on the unfolding of the Veech
//! triangle `V_n` (`n` a power of two), their transition system under
//! semicircle choices, the gamma/beta homology accumulator and the mod `2n`
//! congruence obstruction.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use serde::Serialize;

use crate::stability::Decoration;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Column {
    L,
    R,
}

impl Column {
    pub fn swap(self) -> Self {
        match self {
            Column::L => Column::R,
            Column::R => Column::L,
        }
    }
}

/// `L_k` or `R_k` for odd `k` with `|k| <= n - 1`; `R_{+-(n-1)}` is stored as `L_{+-(n-1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Component {
    pub side: Column,
    pub k: i32,
}

pub fn check_n(n: u32) -> Result<()> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::Precondition(format!("n = {n} must be a power of two at least 4")));
    }
    Ok(())
}

impl Component {
    pub fn new(side: Column, k: i32, n: u32) -> Result<Self> {
        check_n(n)?;
        let top = n as i32 - 1;
        if k.rem_euclid(2) != 1 || k.abs() > top {
            return Err(Error::InvalidComponent(format!("index {k} for n = {n}")));
        }
        let side = if k.abs() == top { Column::L } else { side };
        Ok(Component { side, k })
    }

    pub fn l(k: i32, n: u32) -> Result<Self> {
        Self::new(Column::L, k, n)
    }

    pub fn r(k: i32, n: u32) -> Result<Self> {
        Self::new(Column::R, k, n)
    }

    pub fn is_boundary(&self, n: u32) -> bool {
        self.k.abs() == n as i32 - 1
    }

    /// The involution exchanging `L_k` and `R_k`.
    pub fn nu(&self, n: u32) -> Self {
        if self.is_boundary(n) {
            *self
        } else {
            Component { side: self.side.swap(), k: self.k }
        }
    }

    pub fn parse(s: &str, n: u32) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("cannot read component '{s}'"));
        let (side, rest) = match t.chars().next() {
            Some('L') | Some('l') => (Column::L, &t[1..]),
            Some('R') | Some('r') => (Column::R, &t[1..]),
            _ => return Err(bad()),
        };
        let k: i32 = rest.trim_start_matches('_').parse().map_err(|_| bad())?;
        Self::new(side, k, n)
    }

    /// Ordering used to pick canonical rotations: `L` before `R`, larger `k` first.
    fn key(&self) -> (Column, i32) {
        (self.side, -self.k)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Column::L => "L",
            Column::R => "R",
        };
        write!(f, "{s}{}", self.k)
    }
}

/// Component reached from `c` through a semicircle in direction `dir`.
pub fn transition(c: Component, dir: Decoration, n: u32) -> Result<Component> {
    let c = Component::new(c.side, c.k, n)?;
    let top = n as i32 - 1;
    let (side, k) = match (c.side, c.k, dir) {
        (_, k, Decoration::Cw) if k == top => (Column::L, top - 2),
        (_, k, Decoration::Ccw) if k == top => (Column::R, top - 2),
        (_, k, Decoration::Cw) if k == -top => (Column::R, 2 - top),
        (_, k, Decoration::Ccw) if k == -top => (Column::L, 2 - top),
        (Column::L, k, Decoration::Cw) => (Column::R, k + 2),
        (Column::L, k, Decoration::Ccw) => (Column::R, k - 2),
        (Column::R, k, Decoration::Cw) => (Column::L, k - 2),
        (Column::R, k, Decoration::Ccw) => (Column::L, k + 2),
    };
    Component::new(side, k, n)
}

/// A closed path through horizontal components; `decorations[i]` is the
/// semicircle taken from `components[i]` to the next component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DecoratedCycle {
    pub n: u32,
    pub components: Vec<Component>,
    pub decorations: Vec<Decoration>,
}

impl DecoratedCycle {
    pub fn new(n: u32, components: Vec<Component>, decorations: Vec<Decoration>) -> Result<Self> {
        check_n(n)?;
        if components.len() != decorations.len() {
            return Err(Error::InvalidComponent("one decoration per component is required".into()));
        }
        let len = components.len();
        for i in 0..len {
            let next = transition(components[i], decorations[i], n)?;
            if next != components[(i + 1) % len] {
                return Err(Error::InvalidComponent(format!(
                    "{} does not lead to {} by a {:?} semicircle",
                    components[i],
                    components[(i + 1) % len],
                    decorations[i]
                )));
            }
        }
        Ok(DecoratedCycle { n, components, decorations })
    }

    /// Infer the semicircles from the component sequence.
    pub fn from_components(n: u32, components: Vec<Component>) -> Result<Self> {
        let len = components.len();
        let mut decorations = Vec::with_capacity(len);
        for i in 0..len {
            let next = components[(i + 1) % len];
            let d = [Decoration::Cw, Decoration::Ccw]
                .into_iter()
                .find(|&d| transition(components[i], d, n).ok() == Some(next))
                .ok_or_else(|| {
                    Error::InvalidComponent(format!("no semicircle leads from {} to {next}", components[i]))
                })?;
            decorations.push(d);
        }
        Self::new(n, components, decorations)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn rotate(&self, s: usize) -> Self {
        let mut c = self.clone();
        if !c.is_empty() {
            c.components.rotate_left(s % self.len());
            c.decorations.rotate_left(s % self.len());
        }
        c
    }

    /// `L <-> R` with every semicircle reversed.
    pub fn mirror(&self) -> Self {
        DecoratedCycle {
            n: self.n,
            components: self.components.iter().map(|c| c.nu(self.n)).collect(),
            decorations: self.decorations.iter().map(|d| d.flip()).collect(),
        }
    }

    /// Image under the involution that swaps `L_k, R_k` and reverses time.
    pub fn reverse_mirror(&self) -> Self {
        let len = self.len();
        if len == 0 {
            return self.clone();
        }
        let components = (0..len).map(|i| self.components[(len - i) % len].nu(self.n)).collect();
        let decorations = (0..len).map(|i| self.decorations[(2 * len - i - 1) % len].flip()).collect();
        DecoratedCycle { n: self.n, components, decorations }
    }

    fn key(&self) -> Vec<((Column, i32), Decoration)> {
        self.components.iter().map(|c| c.key()).zip(self.decorations.iter().copied()).collect()
    }

    /// Smallest rotation in the component order.
    pub fn canonical(&self) -> Self {
        (0..self.len().max(1)).map(|s| self.rotate(s)).min_by_key(|c| c.key()).unwrap_or_else(|| self.clone())
    }

    pub fn is_rotation_of(&self, other: &DecoratedCycle) -> bool {
        self.len() == other.len() && self.canonical() == other.canonical()
    }

    /// Invariance under the `L <-> R` time-reversing involution.
    pub fn is_symmetric(&self) -> bool {
        self.reverse_mirror().is_rotation_of(self)
    }

    pub fn count(&self, c: Component) -> usize {
        self.components.iter().filter(|&&x| x == c).count()
    }

    /// `m_k`: occurrences of `L_k`.
    pub fn multiplicities(&self) -> BTreeMap<i32, i64> {
        let mut m = BTreeMap::new();
        for c in &self.components {
            if c.side == Column::L {
                *m.entry(c.k).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn labels(&self) -> Vec<String> {
        self.components.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for DecoratedCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, d) in self.components.iter().zip(&self.decorations) {
            let d = match d {
                Decoration::Cw => "cw",
                Decoration::Ccw => "ccw",
            };
            write!(f, "{c} -{d}-> ")?;
        }
        write!(f, "...")
    }
}

/// Coefficients on `gamma_i` (even `i`, `|i| <= n - 2`) and `beta_{+-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaBetaClass {
    pub n: u32,
    pub gamma: BTreeMap<i32, i64>,
    pub beta1: i64,
    pub beta_neg1: i64,
}

impl GammaBetaClass {
    pub fn zero(n: u32) -> Self {
        GammaBetaClass { n, gamma: BTreeMap::new(), beta1: 0, beta_neg1: 0 }
    }

    pub fn gamma(&self, i: i32) -> i64 {
        self.gamma.get(&i).copied().unwrap_or(0)
    }

    fn add_gamma(&mut self, i: i32, c: i64) {
        let e = self.gamma.entry(i).or_insert(0);
        *e += c;
        if *e == 0 {
            self.gamma.remove(&i);
        }
    }

    /// `(p1* - p2*)` of the class mod `2n`, up to the odd unit of the affine
    /// map: `gamma_i` contributes `i + n` for `i != 0`, `gamma_0` and `beta_{+-1}` contribute 0.
    pub fn residue(&self) -> i64 {
        let m = 2 * self.n as i64;
        self.gamma
            .iter()
            .filter(|(&i, _)| i != 0)
            .map(|(&i, &c)| c * (i as i64 + self.n as i64))
            .sum::<i64>()
            .rem_euclid(m)
    }
}

pub fn homology_of_cycle(c: &DecoratedCycle) -> GammaBetaClass {
    let mut h = GammaBetaClass::zero(c.n);
    for (&k, &m) in &c.multiplicities() {
        if k >= 3 {
            h.add_gamma(k - 1, m);
        } else if k == 1 {
            h.add_gamma(0, m);
            h.beta1 -= m;
            h.beta_neg1 -= m;
        } else {
            h.add_gamma(k + 1, m);
        }
    }
    h
}

/// `S = sum_{k>=3} m_k (n-k+1) + sum_{k<=-3} m_k (n-k-1)` reduced mod `2n`.
pub fn congruence_s_raw(c: &DecoratedCycle) -> i64 {
    let n = c.n as i64;
    c.multiplicities()
        .iter()
        .map(|(&k, &m)| {
            let k = k as i64;
            if k >= 3 {
                m * (n - k + 1)
            } else if k <= -3 {
                m * (n - k - 1)
            } else {
                0
            }
        })
        .sum()
}

pub fn congruence_s(c: &DecoratedCycle) -> i64 {
    congruence_s_raw(c).rem_euclid(2 * c.n as i64)
}

/// Obstructed when `S` is not divisible by `2n`; the odd unit does not matter.
pub fn is_obstructed(c: &DecoratedCycle) -> bool {
    congruence_s(c) != 0
}

pub fn max_s(x: u32, n: u32) -> Result<i64> {
    if !x.is_multiple_of(2) || x < 2 || x > n {
        return Err(Error::Precondition(format!("budget x = {x} must be even with 2 <= x <= n = {n}")));
    }
    let h = (x / 2) as i64;
    Ok(2 + (h - 1) * h)
}

pub fn min_strikes(n: u32) -> Result<u32> {
    check_n(n)?;
    if n == 4 {
        return Err(Error::DeferredCase(4));
    }
    Ok(2 * ((2 * n) as f64).sqrt().floor() as u32)
}

/// `(p1* + p-1*)` of `k` repetitions of `gamma_0` decorated in one direction.
pub fn s0_check(k: u32, n: u32, dir: Decoration) -> Result<i64> {
    if k == 0 {
        return Err(Error::Precondition("at least one repetition is required".into()));
    }
    Ok(dir.sign() * 2 * k as i64 * n as i64)
}

/// Constraints for [`enumerate_cycles`].
#[derive(Debug, Clone, Default)]
pub struct Constraints {
    pub require: Vec<Component>,
    pub forbid: Vec<Component>,
    /// The boundary components `L_{+-(n-1)}` occur exactly twice in total.
    pub midpoint_twice: bool,
    /// Invariance under the `L <-> R` time-reversing involution.
    pub symmetric: bool,
}

impl Constraints {
    /// The constraints used for `V_n` saddle connections through the base midpoint.
    pub fn midpoint_symmetric() -> Self {
        Constraints { midpoint_twice: true, symmetric: true, ..Default::default() }
    }

    fn accepts(&self, c: &DecoratedCycle) -> bool {
        let n = c.n;
        let top = Component { side: Column::L, k: n as i32 - 1 };
        let bottom = Component { side: Column::L, k: 1 - n as i32 };
        if self.midpoint_twice && c.count(top) + c.count(bottom) != 2 {
            return false;
        }
        if self.require.iter().any(|r| c.count(*r) == 0) {
            return false;
        }
        if self.forbid.iter().any(|f| c.count(*f) > 0) {
            return false;
        }
        !self.symmetric || c.is_symmetric()
    }
}

/// A cycle up to rotation, together with whether its `L <-> R` mirror is a
/// different cycle (reported once, as the `+` member of a `+-` pair).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleClass {
    pub cycle: DecoratedCycle,
    pub has_mirror: bool,
}

/// All closed decorated cycles through `L_{n-1}` with at most `max_components`
/// components satisfying `constraints`, one per mirror pair.
type Found = BTreeMap<Vec<((Column, i32), Decoration)>, CycleClass>;

pub fn enumerate_cycles(n: u32, max_components: usize, constraints: &Constraints) -> Result<Vec<CycleClass>> {
    check_n(n)?;
    let top = n as i32 - 1;
    let start = Component::l(top, n)?;
    let mut found: Found = BTreeMap::new();
    let mut comps = vec![start];
    let mut decs: Vec<Decoration> = Vec::new();
    dfs(n, max_components, constraints, &mut comps, &mut decs, &mut found)?;
    Ok(found.into_values().collect())
}

fn boundary_count(comps: &[Component], n: u32) -> usize {
    comps.iter().filter(|c| c.is_boundary(n)).count()
}

fn dfs(
    n: u32,
    max: usize,
    cons: &Constraints,
    comps: &mut Vec<Component>,
    decs: &mut Vec<Decoration>,
    found: &mut Found,
) -> Result<()> {
    let top = n as i32 - 1;
    let last = *comps.last().expect("path starts at the top component");
    for dir in [Decoration::Cw, Decoration::Ccw] {
        let next = transition(last, dir, n)?;
        if cons.forbid.contains(&next) && next != comps[0] {
            continue;
        }
        decs.push(dir);
        if next == comps[0] {
            let cyc = DecoratedCycle { n, components: comps.clone(), decorations: decs.clone() };
            if cons.accepts(&cyc) {
                let a = cyc.canonical();
                let b = cyc.mirror().canonical();
                let has_mirror = a != b;
                let rep = if b.key() < a.key() { b } else { a };
                found.entry(rep.key()).or_insert(CycleClass { cycle: rep, has_mirror });
            }
        }
        let steps_home = ((top - next.k) / 2) as usize;
        let within = comps.len() + steps_home.max(1) <= max;
        let boundary_ok = !cons.midpoint_twice || boundary_count(comps, n) + next.is_boundary(n) as usize <= 2;
        if within && boundary_ok && comps.len() < max {
            comps.push(next);
            dfs(n, max, cons, comps, decs, found)?;
            comps.pop();
        }
        decs.pop();
    }
    Ok(())
}

/// Components of `S_j = L_3 (L_1 R_-1)^j L_-3 (L_-1 R_1)^j` on `V_4`.
pub fn sj_components(j: usize) -> Vec<Component> {
    let c = |side, k| Component { side, k };
    let mut v = vec![c(Column::L, 3)];
    for _ in 0..j {
        v.extend([c(Column::L, 1), c(Column::R, -1)]);
    }
    v.push(c(Column::L, -3));
    for _ in 0..j {
        v.extend([c(Column::L, -1), c(Column::R, 1)]);
    }
    v
}

/// `S_j` with its semicircles inferred from the transition table.
pub fn sj(j: usize) -> Result<DecoratedCycle> {
    DecoratedCycle::from_components(4, sj_components(j))
}

/// `S_1 .. S_{j_max}`. `S_0 = L_3 L_-3` has no realization in the
/// transition system (the two boundary components are not adjacent) and is omitted.
pub fn sj_enumerate(j_max: usize) -> Vec<DecoratedCycle> {
    (1..=j_max).filter_map(|j| sj(j).ok()).collect()
}

/// Residual report for the generator relations of the Veech group of `V_n`.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorReport {
    pub n: u32,
    pub c_squared: f64,
    pub alpha: f64,
    pub alpha_prime: f64,
    pub conjugation: f64,
    pub max_deviation: f64,
    pub holds: bool,
}

fn rot(t: f64) -> Matrix2<f64> {
    let (s, c) = t.sin_cos();
    Matrix2::new(c, -s, s, c)
}

fn dev(a: &Matrix2<f64>, b: &Matrix2<f64>) -> f64 {
    (a - b).abs().max()
}

#[derive(Debug, Clone, Copy)]
pub struct VeechGenerators {
    pub dtau_e: Matrix2<f64>,
    pub dtau_o: Matrix2<f64>,
    pub c_n: Matrix2<f64>,
}

impl VeechGenerators {
    pub fn new(n: u32) -> Self {
        let t = 2.0 / (PI / n as f64).tan();
        let c_n = rot(PI / n as f64);
        let dtau_e = Matrix2::new(1.0, t, 0.0, 1.0);
        let dtau_o = c_n * dtau_e * c_n.transpose();
        VeechGenerators { dtau_e, dtau_o, c_n }
    }
}

pub fn generator_identities(n: u32) -> Result<GeneratorReport> {
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::Precondition(format!("4 must divide n = {n}")));
    }
    let g = VeechGenerators::new(n);
    let t = 2.0 / (PI / n as f64).tan();
    let half = n as usize / 2;
    let cpow = |k: i64| rot(k as f64 * PI / n as f64);
    let prod = g.dtau_o * g.dtau_e;
    let lhs = g.c_n * g.c_n;
    let rhs = prod.pow((half + 1) as u32);
    let c_squared = dev(&lhs, &rhs);

    let alpha = Matrix2::new(1.0, 0.0, t, 1.0);
    let alpha_prime = g.c_n * alpha * g.c_n.transpose();
    let inv_e = g.dtau_e.try_inverse().expect("shear is invertible");
    let inv_o = g.dtau_o.try_inverse().expect("shear is invertible");
    let a_dev = dev(&alpha, &(cpow(-(half as i64)) * inv_e * cpow(half as i64)));
    let ap_dev = dev(&alpha_prime, &(cpow(-(half as i64)) * inv_o * cpow(half as i64)));
    let conj = dev(&g.dtau_o, &(g.c_n * g.dtau_e * g.c_n.try_inverse().expect("rotation is invertible")));

    let max_deviation = c_squared.max(a_dev).max(ap_dev).max(conj);
    Ok(GeneratorReport {
        n,
        c_squared,
        alpha: a_dev,
        alpha_prime: ap_dev,
        conjugation: conj,
        max_deviation,
        holds: max_deviation < 1e-10,
    })
}

/// JSON entry for a surviving cycle.
#[derive(Debug, Clone, Serialize)]
pub struct CycleSummary {
    pub components: Vec<String>,
    pub decorations: Vec<Decoration>,
    pub has_mirror: bool,
    pub s_residue: i64,
    pub gamma: BTreeMap<i32, i64>,
    pub beta1: i64,
    pub beta_neg1: i64,
}

impl CycleSummary {
    pub fn of(c: &CycleClass) -> Self {
        let h = homology_of_cycle(&c.cycle);
        CycleSummary {
            components: c.cycle.labels(),
            decorations: c.cycle.decorations.clone(),
            has_mirror: c.has_mirror,
            s_residue: congruence_s(&c.cycle),
            gamma: h.gamma,
            beta1: h.beta1,
            beta_neg1: h.beta_neg1,
        }
    }
}

impl FromStr for Column {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(Column::L),
            "R" | "r" => Ok(Column::R),
            _ => Err(Error::Parse(format!("unknown column '{s}'"))),
        }
    }
}
