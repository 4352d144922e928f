//! LP-backed geometric oracles.
//!
//! Everything here works in factor space: a query on a constrained zonotope
//! is one LP over `{ξ in box | A ξ = b}`, and a query on a hybrid zonotope is
//! a depth-first search over binary factors in index order where every node
//! relaxes the unfixed binaries and prunes on LP infeasibility (or, for
//! support functions, on the LP bound). The answer equals the one obtained by
//! solving every leaf separately; the search only skips leaves that cannot
//! change it. The enumeration cap bounds the number of LPs a search may solve.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{hstack, vstack, Mat};
use crate::lp::Simplex;
use crate::set::{
    leaf_count, BinaryAssignment, ConstrainedZonotope, HybridZonotope, DEFAULT_ENUMERATION_CAP,
};

/// Absolute tolerance on support gaps used by sharpness verdicts.
pub const SHARPNESS_TOL: f64 = 1e-6;

/// Binary values within this distance of the domain are treated as integral.
const INTEGRALITY_TOL: f64 = 1e-9;

/// LP over the factor space of `h`, with the first `fixed.len()` binary
/// factors pinned and, optionally, `G ξ + c` constrained to lie within
/// `tol` of `point` (extra slack columns `e ∈ [-tol, tol]^n`).
struct FactorLp {
    simplex: Simplex,
    /// `[Gc Gb]`.
    generators: Mat,
    n_factors: usize,
}

impl FactorLp {
    fn new(h: &HybridZonotope, fixed: &[f64], point: Option<(&[f64], f64)>) -> Result<Self> {
        let n = h.dim();
        let n_g = h.n_g();
        let n_b = h.n_b();
        let generators = h.generators();
        let cons = h.constraints();
        let (lo, hi) = h.form().bounds();
        let mut lower = vec![lo; n_g + n_b];
        let mut upper = vec![hi; n_g + n_b];
        for (i, v) in fixed.iter().enumerate() {
            lower[n_g + i] = *v;
            upper[n_g + i] = *v;
        }
        let (a, b) = match point {
            None => (cons, h.b().iter().copied().collect::<Vec<_>>()),
            Some((p, tol)) => {
                check_dim("membership point length", n, p.len())?;
                lower.extend(std::iter::repeat_n(-tol, n));
                upper.extend(std::iter::repeat_n(tol, n));
                let top = hstack(h.n_c(), &[&cons, &Mat::zeros(h.n_c(), n)]);
                let bottom = hstack(n, &[&generators, &(-Mat::identity(n, n))]);
                let a = vstack(n_g + n_b + n, &[&top, &bottom]);
                let mut b: Vec<f64> = h.b().iter().copied().collect();
                b.extend((0..n).map(|i| p[i] - h.c()[i]));
                (a, b)
            }
        };
        let simplex = Simplex::new(&a, &b, &lower, &upper)?;
        Ok(Self {
            simplex,
            generators,
            n_factors: n_g + n_b,
        })
    }

    fn feasible(&mut self) -> Result<bool> {
        self.simplex.find_feasible()
    }

    /// `G ξ + c` for the factor part of an LP point.
    fn image(&self, xi: &[f64], c: &[f64]) -> Vec<f64> {
        (0..c.len())
            .map(|i| {
                c[i] + (0..self.n_factors)
                    .map(|j| self.generators[(i, j)] * xi[j])
                    .sum::<f64>()
            })
            .collect()
    }

    /// `max uᵀ(G ξ)` and the maximizing factors, or `None` when infeasible.
    fn maximize(&mut self, u: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
        let mut obj = vec![0.0; self.simplex.num_vars()];
        for j in 0..self.n_factors {
            obj[j] = (0..u.len()).map(|i| u[i] * self.generators[(i, j)]).sum();
        }
        let r = self.simplex.maximize(&obj)?;
        if !r.is_optimal() {
            return Ok(None);
        }
        Ok(Some((r.value, r.point)))
    }
}

/// Warm-started support evaluation on one constrained zonotope.
pub struct CzSupport {
    lp: FactorLp,
    c: Vec<f64>,
    feasible: bool,
}

impl CzSupport {
    pub fn new(cz: &ConstrainedZonotope) -> Result<Self> {
        let h = cz.to_hybrid();
        let mut lp = FactorLp::new(&h, &[], None)?;
        let feasible = lp.feasible()?;
        Ok(Self {
            lp,
            c: cz.c().iter().copied().collect(),
            feasible,
        })
    }

    pub fn is_empty(&self) -> bool {
        !self.feasible
    }

    /// `h_S(u)` and a point attaining it; `None` when the set is empty.
    pub fn support_point(&mut self, u: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
        check_dim("support direction length", self.c.len(), u.len())?;
        if !self.feasible {
            return Ok(None);
        }
        let Some((value, xi)) = self.lp.maximize(u)? else {
            return Ok(None);
        };
        let point = self.lp.image(&xi, &self.c);
        let offset: f64 = u.iter().zip(&self.c).map(|(a, b)| a * b).sum();
        Ok(Some((value + offset, point)))
    }

    pub fn support(&mut self, u: &[f64]) -> Result<Option<f64>> {
        Ok(self.support_point(u)?.map(|(v, _)| v))
    }
}

pub fn cz_is_empty(cz: &ConstrainedZonotope) -> Result<bool> {
    Ok(CzSupport::new(cz)?.is_empty())
}

pub fn cz_support(cz: &ConstrainedZonotope, u: &[f64]) -> Result<Option<f64>> {
    CzSupport::new(cz)?.support(u)
}

struct NodeBudget {
    used: u64,
    cap: u64,
}

impl NodeBudget {
    fn new(cap: u64) -> Self {
        Self { used: 0, cap }
    }

    fn spend(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            return Err(Error::EnumerationCapExceeded {
                needed: self.used as u128,
                cap: self.cap,
            });
        }
        Ok(())
    }
}

fn integral_tail(h: &HybridZonotope, xi: &[f64], depth: usize) -> Option<Vec<f64>> {
    let (lo, hi) = h.form().bounds();
    let n_g = h.n_g();
    (depth..h.n_b())
        .map(|i| {
            let v = xi[n_g + i];
            if (v - lo).abs() <= INTEGRALITY_TOL {
                Some(lo)
            } else if (v - hi).abs() <= INTEGRALITY_TOL {
                Some(hi)
            } else {
                None
            }
        })
        .collect()
}

/// Depth-first search for any feasible leaf, optionally containing `point`.
fn exists_leaf(h: &HybridZonotope, point: Option<(&[f64], f64)>, cap: u64) -> Result<bool> {
    fn visit(
        h: &HybridZonotope,
        point: Option<(&[f64], f64)>,
        prefix: &mut Vec<f64>,
        budget: &mut NodeBudget,
    ) -> Result<bool> {
        budget.spend()?;
        let mut lp = FactorLp::new(h, prefix, point)?;
        if !lp.feasible()? {
            return Ok(false);
        }
        if prefix.len() == h.n_b() {
            return Ok(true);
        }
        // Any vertex with integral binaries is already a feasible leaf.
        let zero = vec![0.0; h.dim()];
        let (lo, hi) = h.form().bounds();
        let mut order = [lo, hi];
        if let Some((_, xi)) = lp.maximize(&zero)? {
            if integral_tail(h, &xi, prefix.len()).is_some() {
                return Ok(true);
            }
            // Try the side the relaxed solution leans towards first.
            if xi[h.n_g() + prefix.len()] > 0.5 * (lo + hi) {
                order = [hi, lo];
            }
        }
        for v in order {
            prefix.push(v);
            let found = visit(h, point, prefix, budget)?;
            prefix.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let mut budget = NodeBudget::new(cap);
    visit(h, point, &mut Vec::new(), &mut budget)
}

/// Decides `p ∈ S` up to `tol` in each coordinate.
pub fn contains(h: &HybridZonotope, p: &[f64], tol: f64) -> Result<bool> {
    contains_capped(h, p, tol, DEFAULT_ENUMERATION_CAP)
}

pub fn contains_capped(h: &HybridZonotope, p: &[f64], tol: f64, cap: u64) -> Result<bool> {
    check_dim("membership point length", h.dim(), p.len())?;
    exists_leaf(h, Some((p, tol)), cap)
}

pub fn is_empty(h: &HybridZonotope) -> Result<bool> {
    is_empty_capped(h, DEFAULT_ENUMERATION_CAP)
}

pub fn is_empty_capped(h: &HybridZonotope, cap: u64) -> Result<bool> {
    Ok(!exists_leaf(h, None, cap)?)
}

/// Feasible leaves in counting order, each with its phase-1-solved LP.
fn feasible_leaf_lps(h: &HybridZonotope, cap: u64) -> Result<Vec<(BinaryAssignment, FactorLp)>> {
    fn visit(
        h: &HybridZonotope,
        prefix: &mut Vec<f64>,
        budget: &mut NodeBudget,
        out: &mut Vec<(BinaryAssignment, FactorLp)>,
    ) -> Result<()> {
        budget.spend()?;
        let mut lp = FactorLp::new(h, prefix, None)?;
        if !lp.feasible()? {
            return Ok(());
        }
        if prefix.len() == h.n_b() {
            let bits = prefix.clone();
            out.push((BinaryAssignment { bits }, lp));
            return Ok(());
        }
        let (lo, hi) = h.form().bounds();
        for v in [lo, hi] {
            prefix.push(v);
            visit(h, prefix, budget, out)?;
            prefix.pop();
        }
        Ok(())
    }
    let mut found = Vec::new();
    let mut budget = NodeBudget::new(cap);
    visit(h, &mut Vec::new(), &mut budget, &mut found)?;
    // DFS visits the low value first, i.e. bit order is reversed relative to
    // counting order; sort by the counting index.
    let high = h.form().high();
    found.sort_by_key(|(a, _)| -> u64 {
        a.bits
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == high)
            .map(|(i, _)| 1u64 << i)
            .sum()
    });
    Ok(found)
}

/// All leaves with a feasible constraint system, in counting order.
pub fn feasible_leaves(
    h: &HybridZonotope,
    cap: u64,
) -> Result<Vec<(BinaryAssignment, ConstrainedZonotope)>> {
    feasible_leaf_lps(h, cap)?
        .into_iter()
        .map(|(a, _)| {
            let leaf = h.leaf(&a)?;
            Ok((a, leaf))
        })
        .collect()
}

/// `h_S(u) = max{uᵀx : x ∈ S}`, or `None` when `S` is empty.
pub fn support(h: &HybridZonotope, u: &[f64]) -> Result<Option<f64>> {
    support_capped(h, u, DEFAULT_ENUMERATION_CAP)
}

/// Branch and bound over binary factors; equals the maximum of the leaf
/// support values.
pub fn support_capped(h: &HybridZonotope, u: &[f64], cap: u64) -> Result<Option<f64>> {
    check_dim("support direction length", h.dim(), u.len())?;
    if h.n_b() == 0 {
        return cz_support(&h.to_constrained().expect("no binaries"), u);
    }
    fn visit(
        h: &HybridZonotope,
        u: &[f64],
        prefix: &mut Vec<f64>,
        budget: &mut NodeBudget,
        best: &mut Option<f64>,
    ) -> Result<()> {
        budget.spend()?;
        let mut lp = FactorLp::new(h, prefix, None)?;
        let Some((bound, xi)) = lp.maximize(u)? else {
            return Ok(());
        };
        if let Some(b) = *best {
            if bound <= b + 1e-12 * (1.0 + b.abs()) {
                return Ok(());
            }
        }
        if prefix.len() == h.n_b() || integral_tail(h, &xi, prefix.len()).is_some() {
            *best = Some(best.map_or(bound, |b: f64| b.max(bound)));
            return Ok(());
        }
        let (lo, hi) = h.form().bounds();
        let next = xi[h.n_g() + prefix.len()];
        let order = if next - lo > hi - next { [hi, lo] } else { [lo, hi] };
        for v in order {
            prefix.push(v);
            visit(h, u, prefix, budget, best)?;
            prefix.pop();
        }
        Ok(())
    }
    let mut best = None;
    let mut budget = NodeBudget::new(cap);
    visit(h, u, &mut Vec::new(), &mut budget, &mut best)?;
    let offset: f64 = u.iter().zip(h.c().iter()).map(|(a, b)| a * b).sum();
    Ok(best.map(|v| v + offset))
}

/// Support values and attaining points of `S` in many directions, computed
/// as the maximum over feasible leaves with one warm-started LP per leaf.
pub fn support_many(
    h: &HybridZonotope,
    dirs: &[Vec<f64>],
    cap: u64,
) -> Result<Vec<Option<(f64, Vec<f64>)>>> {
    let mut out: Vec<Option<(f64, Vec<f64>)>> = vec![None; dirs.len()];
    for (_, mut lp) in feasible_leaf_lps(h, cap)? {
        for (slot, u) in out.iter_mut().zip(dirs) {
            if let Some((v, xi)) = lp.maximize(u)? {
                if slot.as_ref().is_none_or(|(best, _)| v > *best) {
                    *slot = Some((v, lp.image(&xi, h.c().as_slice())));
                }
            }
        }
    }
    let offsets: Vec<f64> = dirs
        .iter()
        .map(|u| u.iter().zip(h.c().iter()).map(|(a, b)| a * b).sum())
        .collect();
    for (slot, off) in out.iter_mut().zip(offsets) {
        if let Some((v, _)) = slot {
            *v += off;
        }
    }
    Ok(out)
}

/// Support values of a constrained zonotope in many directions.
pub fn cz_support_many(cz: &ConstrainedZonotope, dirs: &[Vec<f64>]) -> Result<Vec<Option<f64>>> {
    let mut s = CzSupport::new(cz)?;
    dirs.iter().map(|u| s.support(u)).collect()
}

/// Deterministic direction set: the `2n` signed axes followed by
/// low-discrepancy points on the unit sphere, `max(count, 2n)` in total.
///
/// In the plane the extra directions are evenly spaced angles with a
/// seed-dependent phase; in higher dimensions they come from a Halton
/// sequence pushed through Box–Muller, starting at a seed-dependent index.
pub fn sample_directions(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; n];
            d[i] = s;
            dirs.push(d);
        }
    }
    let extra = count.saturating_sub(dirs.len());
    if n == 0 || extra == 0 {
        return dirs;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match n {
        1 => {}
        2 => {
            let phase: f64 = rng.gen_range(0.0..1.0);
            for k in 0..extra {
                let t = 2.0 * PI * (k as f64 + phase) / extra as f64;
                dirs.push(vec![t.cos(), t.sin()]);
            }
        }
        _ => {
            let start: u64 = rng.gen_range(1..10_000);
            let primes = first_primes(n + n % 2);
            let mut k = start;
            while dirs.len() < count {
                let u: Vec<f64> = primes.iter().map(|&p| radical_inverse(k, p)).collect();
                k += 1;
                let mut g = Vec::with_capacity(n);
                for pair in u.chunks(2) {
                    let r = (-2.0 * pair[0].max(1e-300).ln()).sqrt();
                    let t = 2.0 * PI * pair[1];
                    g.push(r * t.cos());
                    g.push(r * t.sin());
                }
                g.truncate(n);
                let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    dirs.push(g.into_iter().map(|v| v / norm).collect());
                }
            }
        }
    }
    dirs
}

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while k > 0 {
        out += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    out
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2u64;
    while out.len() < count {
        if (2..k).take_while(|d| d * d <= k).all(|d| !k.is_multiple_of(d)) {
            out.push(k);
        }
        k += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Sharp,
    NotSharp,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub directions: Vec<Vec<f64>>,
    /// Support of the convex relaxation; `None` when the relaxation is empty.
    pub relax_support: Vec<Option<f64>>,
    /// Support of the set itself (maximum over leaves); `None` when empty or
    /// when leaf enumeration hit the cap.
    pub hull_support: Vec<Option<f64>>,
    pub max_gap: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

fn gap(relax: Option<f64>, hull: Option<f64>) -> f64 {
    match (relax, hull) {
        (Some(r), Some(h)) => r - h,
        (Some(_), None) => f64::INFINITY,
        (None, Some(_)) => f64::NEG_INFINITY,
        (None, None) => 0.0,
    }
}

/// Compares the relaxation's support with the set's support on sampled
/// directions. Both sides are convex and compact, so agreement on every
/// direction certifies `relax(S) = conv(S)` up to the sampling density.
pub fn check_sharpness(
    h: &HybridZonotope,
    n_dirs: usize,
    tol: f64,
    seed: u64,
    cap: u64,
) -> Result<SharpnessReport> {
    let directions = sample_directions(h.dim(), n_dirs, seed);
    let relax = crate::ops::convex_relaxation(h);
    let relax_support = cz_support_many(&relax, &directions)?;
    let (hull_support, capped) = match support_many(h, &directions, cap) {
        Ok(v) => (v.into_iter().map(|s| s.map(|(v, _)| v)).collect(), false),
        Err(Error::EnumerationCapExceeded { .. }) => (vec![None; directions.len()], true),
        Err(e) => return Err(e),
    };
    let max_gap = if capped {
        f64::NAN
    } else {
        relax_support
            .iter()
            .zip(&hull_support)
            .map(|(r, h)| gap(*r, *h))
            .fold(0.0, f64::max)
    };
    let verdict = if capped {
        Verdict::Inconclusive
    } else if max_gap <= tol {
        Verdict::Sharp
    } else {
        Verdict::NotSharp
    };
    Ok(SharpnessReport {
        directions,
        relax_support,
        hull_support,
        max_gap,
        tol,
        verdict,
    })
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counterclockwise polygon.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<[f64; 2]>,
}

impl Polygon {
    /// Convex hull of `points` (monotone chain), counterclockwise, with
    /// duplicate and collinear points removed.
    pub fn hull_of(points: &[[f64; 2]]) -> Self {
        let scale = points
            .iter()
            .fold(1.0f64, |acc, p| acc.max(p[0].abs()).max(p[1].abs()));
        // Hull decisions use grid-snapped copies so numerically coincident
        // points become identical; output vertices are the original points.
        let grid = 1e-9 * scale;
        let mut keyed: Vec<([f64; 2], [f64; 2])> = points
            .iter()
            .map(|p| ([(p[0] / grid).round() * grid, (p[1] / grid).round() * grid], *p))
            .collect();
        keyed.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.0[1].total_cmp(&b.0[1])));
        keyed.dedup_by(|a, b| a.0 == b.0);
        let original = |q: [f64; 2]| {
            let i = keyed
                .binary_search_by(|k| k.0[0].total_cmp(&q[0]).then(k.0[1].total_cmp(&q[1])))
                .expect("hull vertices come from the input");
            keyed[i].1
        };
        let pts: Vec<[f64; 2]> = keyed.iter().map(|k| k.0).collect();
        if pts.len() <= 2 {
            return Self {
                vertices: keyed.iter().map(|k| k.1).collect(),
            };
        }
        let mut lower: Vec<[f64; 2]> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<[f64; 2]> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        let mut vertices = lower;
        // Drop vertices whose turn is negligible relative to the adjacent edges.
        loop {
            let k = vertices.len();
            if k < 3 {
                break;
            }
            let flat = (0..k).find(|&i| {
                let (o, a, b) = (vertices[(i + k - 1) % k], vertices[i], vertices[(i + 1) % k]);
                let la = ((a[0] - o[0]).powi(2) + (a[1] - o[1]).powi(2)).sqrt();
                let lb = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
                cross(o, a, b) <= 1e-9 * la * lb
            });
            match flat {
                Some(i) => {
                    vertices.remove(i);
                }
                None => break,
            }
        }
        if vertices.len() < 3 {
            // Collinear input: keep the two extremes.
            return Self {
                vertices: vec![keyed[0].1, keyed[keyed.len() - 1].1],
            };
        }
        Self {
            vertices: vertices.into_iter().map(original).collect(),
        }
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        if v.len() < 3 {
            return 0.0;
        }
        let twice: f64 = (0..v.len())
            .map(|i| {
                let a = v[i];
                let b = v[(i + 1) % v.len()];
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        0.5 * twice.abs()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for p in &self.vertices {
            out.push_str(&format!("{},{}\n", p[0], p[1]));
        }
        out
    }
}

fn angle_directions(n_angles: usize) -> Vec<Vec<f64>> {
    (0..n_angles)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n_angles as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// Support-touching points at `n_angles` evenly spaced directions, as a
/// counterclockwise convex polygon inscribed in the set.
pub fn boundary_2d(cz: &ConstrainedZonotope, n_angles: usize) -> Result<Polygon> {
    check_dim("boundary_2d ambient dimension", 2, cz.dim())?;
    let mut s = CzSupport::new(cz)?;
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut points = Vec::with_capacity(n_angles);
    for u in angle_directions(n_angles.max(1)) {
        if let Some((_, p)) = s.support_point(&u)? {
            points.push([p[0], p[1]]);
        }
    }
    Ok(Polygon::hull_of(&points))
}

/// Inscribed polygon of `conv(S)` for a planar hybrid zonotope, built from
/// the per-direction maximizers over all feasible leaves.
pub fn hull_boundary_2d(h: &HybridZonotope, n_angles: usize, cap: u64) -> Result<Polygon> {
    check_dim("hull_boundary_2d ambient dimension", 2, h.dim())?;
    let maxima = support_many(h, &angle_directions(n_angles.max(1)), cap)?;
    let points: Vec<[f64; 2]> = maxima
        .into_iter()
        .flatten()
        .map(|(_, p)| [p[0], p[1]])
        .collect();
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(Polygon::hull_of(&points))
}

pub fn area_2d(cz: &ConstrainedZonotope, n_angles: usize) -> Result<f64> {
    Ok(boundary_2d(cz, n_angles)?.area())
}

/// Axis-aligned bounding box of a hybrid zonotope's relaxation, `None` when
/// the relaxation is empty.
pub fn bounding_box(h: &HybridZonotope) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    let relax = crate::ops::convex_relaxation(h);
    let mut s = CzSupport::new(&relax)?;
    if s.is_empty() {
        return Ok(None);
    }
    let n = h.dim();
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        hi[i] = s.support(&e)?.expect("nonempty");
        e[i] = -1.0;
        lo[i] = -s.support(&e)?.expect("nonempty");
    }
    Ok(Some((lo, hi)))
}

/// Number of leaves a full enumeration of `h` would visit.
pub fn full_leaf_count(h: &HybridZonotope) -> u128 {
    leaf_count(h.n_b())
}
